#include "heartscatter/render.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>

#include "heartscatter/error.hpp"

namespace hs {

namespace {

struct Frame {
  std::vector<Vec> basis;  // plane basis, plus one transverse vector in rank 3
  Vec normal;
  int rank;

  std::optional<std::pair<Q, Q>> coords(const QVec& v, bool require_in_plane) const {
    if (rank == 2) return std::make_pair(v[0], v[1]);
    auto c = span_coords(basis, v);
    if (!c) return std::nullopt;
    if (require_in_plane && (*c)[2] != 0) return std::nullopt;
    return std::make_pair((*c)[0], (*c)[1]);
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

// Plane coordinates to the unit viewBox; (0,0) sits in the centre.
std::string pt(double x, double y) { return num((x + 1) / 2) + "," + num((1 - y) / 2); }

// A direction scaled so its larger coordinate has absolute value 1.
std::pair<double, double> to_edge(const Q& a, const Q& b) {
  Q m = std::max(abs(a), abs(b));
  return {Q(a / m).get_d(), Q(b / m).get_d()};
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

std::string render_slice_svg(const WallStructure& ws, const Fan& fan, int ray_a, int ray_b,
                             const std::vector<BrokenLine>& lines) {
  Frame F;
  F.rank = ws.rank;
  if (ws.rank == 3) {
    int r = static_cast<int>(fan.rays().size());
    if (ray_a < 0 || ray_b < 0 || ray_a >= r || ray_b >= r || ray_a == ray_b)
      throw Error("slice rays out of range");
    const Vec &a = fan.rays()[ray_a], &b = fan.rays()[ray_b];
    F.normal = cross(a, b);
    if (is_zero(F.normal)) throw Error("slice rays are parallel");
    F.basis = {a, b, F.normal};
  } else if (ws.rank != 2) {
    throw Error("render supports rank 2 and 3");
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"600\" "
         "height=\"600\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n";

  // Traces: each wall meets the plane in a ray, or lies in it as a 2D cone.
  for (auto& w : ws.walls) {
    std::vector<std::pair<Q, Q>> dirs;
    const auto& g = w.support.gens();
    if (ws.rank == 2) {
      dirs.push_back({Q(static_cast<long>(g[0][0])), Q(static_cast<long>(g[0][1]))});
    } else {
      long long s1 = dot(F.normal, g[0]), s2 = dot(F.normal, g[1]);
      if (s1 == 0 && s2 == 0) {
        for (auto& v : g) dirs.push_back(*F.coords(to_qvec(v), true));
      } else if (s1 == 0 || s2 == 0) {
        dirs.push_back(*F.coords(to_qvec(s1 == 0 ? g[0] : g[1]), true));
      } else if ((s1 > 0) != (s2 > 0)) {
        Vec d = add(scale(g[0], std::llabs(s2)), scale(g[1], std::llabs(s1)));
        dirs.push_back(*F.coords(to_qvec(d), true));
      }
    }
    if (dirs.empty()) continue;
    std::string cls = w.incoming ? "incoming" : "outgoing";
    std::string colour = w.incoming ? "#c0392b" : "#1f4e99";
    std::string title = escape(w.function.pretty());
    if (dirs.size() == 2) {
      auto [x1, y1] = to_edge(dirs[0].first, dirs[0].second);
      auto [x2, y2] = to_edge(dirs[1].first, dirs[1].second);
      svg << "<polygon class=\"" << cls << "\" points=\"" << pt(0, 0) << " " << pt(x1, y1) << " "
          << pt(x2, y2) << "\" fill=\"" << colour << "\" fill-opacity=\"0.15\" stroke=\"" << colour
          << "\" stroke-width=\"0.004\"><title>" << title << "</title></polygon>\n";
    } else {
      auto [x, y] = to_edge(dirs[0].first, dirs[0].second);
      svg << "<line class=\"" << cls << "\" x1=\"" << num(0.5) << "\" y1=\"" << num(0.5)
          << "\" x2=\"" << num((x + 1) / 2) << "\" y2=\"" << num((1 - y) / 2) << "\" stroke=\""
          << colour << "\" stroke-width=\"0.004\"><title>" << title << "</title></line>\n";
    }
  }

  // Joints in the plane, marked where their rays leave the viewport.
  if (ws.rank == 3) {
    for (auto& j : enumerate_joints(ws)) {
      auto c = F.coords(to_qvec(j.ray), true);
      if (!c) continue;
      auto [x, y] = to_edge(c->first, c->second);
      svg << "<circle class=\"joint\" cx=\"" << num((x + 1) / 2) << "\" cy=\"" << num((1 - y) / 2)
          << "\" r=\"0.008\" fill=\"black\"><title>" << vec_to_string(j.ray)
          << "</title></circle>\n";
    }
  } else {
    svg << "<circle class=\"joint\" cx=\"0.500000\" cy=\"0.500000\" r=\"0.008\" fill=\"black\"/>\n";
  }

  // Broken lines, projected along the plane normal and scaled into the box.
  Q scale_q = 1;
  for (auto& bl : lines)
    for (auto& s : bl.segments)
      if (auto c = F.coords(s.end, false))
        scale_q = std::max({scale_q, Q(abs(c->first)), Q(abs(c->second))});
  double sc = 0.8 / scale_q.get_d();
  for (auto& bl : lines) {
    std::ostringstream path;
    bool first = true;
    for (auto& s : bl.segments) {
      auto e = F.coords(s.end, false);
      if (!e) continue;
      double ex = e->first.get_d() * sc, ey = e->second.get_d() * sc;
      if (s.start.empty()) {
        auto v = F.coords(to_qvec(s.velocity), false);
        double vx = v->first.get_d(), vy = v->second.get_d();
        double t = 1e9;
        if (vx > 0) t = std::min(t, (1 - ex) / vx);
        if (vx < 0) t = std::min(t, (-1 - ex) / vx);
        if (vy > 0) t = std::min(t, (1 - ey) / vy);
        if (vy < 0) t = std::min(t, (-1 - ey) / vy);
        if (t == 1e9) t = 0;
        path << "M " << pt(ex + t * vx, ey + t * vy) << " ";
        first = false;
      } else if (first) {
        auto st = F.coords(s.start, false);
        path << "M " << pt(st->first.get_d() * sc, st->second.get_d() * sc) << " ";
        first = false;
      }
      path << "L " << pt(ex, ey) << " ";
    }
    std::string d = path.str();
    if (!d.empty()) d.pop_back();
    svg << "<path class=\"broken-line\" d=\"" << d
        << "\" fill=\"none\" stroke=\"#27863b\" stroke-width=\"0.003\"><title>"
        << escape(monomial_pretty(bl.final_mono())) << "</title></path>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hs
