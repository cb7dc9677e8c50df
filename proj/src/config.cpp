#include "heartscatter/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "heartscatter/error.hpp"

namespace hs {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), where + " must be an object");
  for (auto& [k, v] : j.items())
    require(allowed.count(k) > 0, "unknown key '" + k + "' in " + where);
}

long long as_int(const json& j, const std::string& what) {
  require(j.is_number_integer(), what + " must be an integer");
  return j.get<long long>();
}

std::vector<int> int_list(const json& j, const std::string& what) {
  require(j.is_array(), what + " must be an array");
  std::vector<int> out;
  for (auto& x : j) out.push_back(static_cast<int>(as_int(x, what)));
  return out;
}

Q rational_value(const json& j, const std::string& what) {
  if (j.is_number_integer()) return Q(static_cast<long>(j.get<long long>()));
  require(j.is_string(), what + " must be an integer or a rational string");
  return parse_rational(j.get<std::string>());
}

int cone_index(const Fan& fan, const json& j, const std::string& what) {
  int idx = fan.codim1_index(int_list(j, what));
  require(idx >= 0, what + " is not a codimension-one cone of the fan");
  return idx;
}

}  // namespace

Q parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  size_t slash = t.find('/');
  auto digits = [](const std::string& s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  require(digits(num) && digits(den), "malformed rational '" + text + "'");
  if (num[0] == '+') num = num.substr(1);
  if (den[0] == '+') den = den.substr(1);
  mpz_class d(den);
  require(d != 0, "zero denominator in '" + text + "'");
  Q q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

CurveClass parse_class(const std::string& text, GenKind kind) {
  auto& R = Registry::global();
  CurveClass c;
  size_t i = 0;
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s == "0") return c;
  require(!s.empty(), "empty curve class");
  while (i < s.size()) {
    long long sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else {
      require(i == 0, "malformed curve class '" + text + "'");
    }
    long long k = 0;
    bool has_k = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      k = 10 * k + (s[i++] - '0');
      has_k = true;
    }
    if (!has_k) k = 1;
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    require(i > start && std::isalpha(static_cast<unsigned char>(s[start])),
            "malformed curve class '" + text + "'");
    std::string name = s.substr(start, i - start);
    int id = R.find(name);
    if (id < 0) id = R.intern(name, kind);
    c += CurveClass::gen(id, sign * k);
  }
  return c;
}

namespace {

ProblemConfig parse_impl(const std::string& text, std::optional<int> order, int seed) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  only_keys(j, {"name", "rank", "fan", "kinks", "centers", "cutoff", "endpoint", "base_cone",
                "relation_rays", "allow_adjacent_centers", "outputs"},
            "config");
  ProblemConfig cfg;
  cfg.name = j.value("name", std::string("problem"));
  require(j.contains("rank"), "missing rank");
  int rank = static_cast<int>(as_int(j["rank"], "rank"));
  require(rank == 2 || rank == 3, "rank must be 2 or 3");
  require(j.contains("cutoff") || order, "missing cutoff");
  cfg.cutoff = order ? *order : static_cast<int>(as_int(j["cutoff"], "cutoff"));
  require(cfg.cutoff >= 1, "cutoff must be at least 1");

  require(j.contains("fan"), "missing fan");
  only_keys(j["fan"], {"rays", "maximal_cones"}, "fan");
  std::vector<Vec> rays;
  require(j["fan"].contains("rays") && j["fan"]["rays"].is_array(), "fan.rays must be an array");
  for (auto& r : j["fan"]["rays"]) {
    Vec v;
    require(r.is_array(), "each ray must be an array");
    for (auto& x : r) v.push_back(as_int(x, "ray coordinate"));
    require(static_cast<int>(v.size()) == rank, "ray dimension differs from rank");
    rays.push_back(v);
  }
  std::vector<std::vector<int>> cones;
  require(j["fan"].contains("maximal_cones") && j["fan"]["maximal_cones"].is_array(),
          "fan.maximal_cones must be an array");
  for (auto& c : j["fan"]["maximal_cones"]) cones.push_back(int_list(c, "maximal cone"));
  Fan fan;
  try {
    fan = Fan(rays, cones);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("fan: ") + e.what());
  }

  std::vector<CurveClass> kinks(fan.codim1().size());
  if (j.contains("kinks")) {
    const json& k = j["kinks"];
    if (k.is_string()) {
      for (auto& c : kinks) c = parse_class(k.get<std::string>());
    } else {
      only_keys(k, {"default", "cones"}, "kinks");
      if (k.contains("default"))
        for (auto& c : kinks) c = parse_class(k["default"].get<std::string>());
      if (k.contains("cones")) {
        require(k["cones"].is_array(), "kinks.cones must be an array");
        for (auto& e : k["cones"]) {
          only_keys(e, {"rays", "class"}, "kink entry");
          require(e.contains("rays") && e.contains("class") && e["class"].is_string(),
                  "kink entry needs rays and class");
          kinks[cone_index(fan, e["rays"], "kink cone")] = parse_class(e["class"].get<std::string>());
        }
      }
    }
  }

  std::vector<Center> centers;
  if (j.contains("centers")) {
    require(j["centers"].is_array(), "centers must be an array");
    for (auto& cj : j["centers"]) {
      only_keys(cj, {"ray", "components"}, "center");
      Center c;
      require(cj.contains("ray"), "center needs a ray");
      c.ray = static_cast<int>(as_int(cj["ray"], "center ray"));
      require(c.ray >= 0 && c.ray < static_cast<int>(rays.size()), "center ray index out of range");
      require(cj.contains("components") && cj["components"].is_array(),
              "center needs a components array");
      for (auto& kj : cj["components"]) {
        only_keys(kj, {"label", "variable", "intersections", "pn_degree"}, "component");
        CenterComponent comp;
        require(kj.contains("label") && kj["label"].is_string(), "component needs a label");
        require(kj.contains("variable") && kj["variable"].is_string(), "component needs a variable");
        comp.label = kj["label"].get<std::string>();
        comp.variable = kj["variable"].get<std::string>();
        require(kj.contains("intersections") != kj.contains("pn_degree"),
                "component needs exactly one of intersections, pn_degree");
        if (kj.contains("pn_degree")) {
          int d = static_cast<int>(as_int(kj["pn_degree"], "pn_degree"));
          require(d >= 1, "pn_degree must be positive");
          for (size_t r = 0; r < fan.codim1().size(); ++r) {
            auto& ids = fan.codim1()[r];
            if (std::find(ids.begin(), ids.end(), c.ray) != ids.end())
              comp.intersections[static_cast<int>(r)] = d;
          }
        } else {
          require(kj["intersections"].is_array(), "intersections must be an array");
          for (auto& e : kj["intersections"]) {
            only_keys(e, {"cone", "value"}, "intersection");
            require(e.contains("cone") && e.contains("value"), "intersection needs cone and value");
            comp.intersections[cone_index(fan, e["cone"], "intersection cone")] =
                static_cast<int>(as_int(e["value"], "intersection value"));
          }
        }
        c.components.push_back(comp);
      }
      centers.push_back(c);
    }
  }

  std::optional<QVec> endpoint;
  if (j.contains("endpoint")) {
    require(j["endpoint"].is_array(), "endpoint must be an array");
    QVec p;
    for (auto& x : j["endpoint"]) p.push_back(rational_value(x, "endpoint coordinate"));
    require(static_cast<int>(p.size()) == rank, "endpoint dimension differs from rank");
    for (int s = 0; s < seed; ++s) p = perturb_endpoint(p);
    endpoint = p;
  }
  int base = 0;
  if (j.contains("base_cone")) {
    base = static_cast<int>(as_int(j["base_cone"], "base_cone"));
    require(base >= 0 && base < static_cast<int>(cones.size()), "base_cone out of range");
  } else if (endpoint) {
    base = fan.find_cone(*endpoint);
    require(base >= 0, "endpoint lies in no maximal cone");
  }
  cfg.endpoint = endpoint ? *endpoint : default_endpoint(fan, base, seed);

  bool adjacent = j.value("allow_adjacent_centers", false);
  try {
    cfg.bd = make_blowup(fan, centers, kinks, base, cfg.cutoff, adjacent);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("relation_rays")) {
    cfg.relation_rays = int_list(j["relation_rays"], "relation_rays");
    for (int r : cfg.relation_rays)
      require(r >= 0 && r < static_cast<int>(rays.size()), "relation ray out of range");
  }
  if (j.contains("outputs")) {
    only_keys(j["outputs"], {"broken_lines"}, "outputs");
    cfg.draw_broken_lines = j["outputs"].value("broken_lines", false);
  }
  return cfg;
}

}  // namespace

ProblemConfig parse_config(const std::string& text, std::optional<int> order, int seed) {
  try {
    return parse_impl(text, order, seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ProblemConfig load_config(const std::string& path, std::optional<int> order, int seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), order, seed);
}

WallStructure toric_stage(const ProblemConfig& cfg, CompletionStats* stats) {
  return complete(build_initial(cfg.bd), cfg.cutoff, {}, stats);
}

WallStructure heart_stage(const ProblemConfig& cfg, const WallStructure& toric) {
  return to_heart(refine(toric, cfg.bd.fan), cfg.bd);
}

}  // namespace hs
