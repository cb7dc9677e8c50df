#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heartscatter/config.hpp"
#include "heartscatter/error.hpp"
#include "heartscatter/render.hpp"

namespace {

void emit_error(const std::string& category, const std::string& type, const std::string& msg) {
  nlohmann::ordered_json j;
  j["error"] = category;
  j["type"] = type;
  j["message"] = msg;
  std::cerr << j.dump() << "\n";
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw hs::Error("cannot write " + name);
  out << body;
}

std::string mirror_text(const hs::ProblemConfig& cfg, const hs::MirrorPresentation& mp) {
  std::ostringstream os;
  os << mp.relation << "\n";
  for (size_t i = 0; i < mp.thetas.size(); ++i)
    os << mp.generators[i] << " = " << mp.thetas[i].pretty() << "    ray "
       << hs::vec_to_string(cfg.bd.fan.rays()[i]) << "\n";
  os << "endpoint (";
  for (size_t i = 0; i < mp.endpoint.size(); ++i) os << (i ? "," : "") << mp.endpoint[i].get_str();
  os << ")\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wall structures, hearts and theta functions for blow-ups of toric varieties"};
  std::string command, config, out_dir, slice;
  std::optional<int> order;
  int seed = 0;
  app.add_option("command", command, "scatter | heart | thetas | mirror | render")
      ->required()
      ->check(CLI::IsMember({"scatter", "heart", "thetas", "mirror", "render"}));
  app.add_option("--config", config, "problem config (JSON)")->required();
  app.add_option("--order", order, "truncation order, overrides the config cutoff");
  app.add_option("--out", out_dir, "directory for output files; stdout when absent");
  app.add_option("--slice", slice, "RAY_A,RAY_B fan ray indices spanning the render plane");
  app.add_option("--seed-endpoint", seed, "endpoint perturbation index")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error("config", "usage", e.what());
    return 1;
  }

  hs::ProblemConfig cfg;
  try {
    if (order && *order < 1) throw hs::ConfigError("--order must be at least 1");
    cfg = hs::load_config(config, order, seed);
  } catch (const hs::Error& e) {
    emit_error("config", "ConfigError", e.what());
    return 1;
  }
  int ra = 0, rb = 1;
  if (!slice.empty()) {
    char comma = 0;
    std::istringstream is(slice);
    if (!(is >> ra >> comma >> rb) || comma != ',' || !is.eof()) {
      emit_error("config", "usage", "--slice expects RAY_A,RAY_B");
      return 1;
    }
  }

  try {
    hs::WallStructure toric = hs::toric_stage(cfg);
    std::string text, file;
    if (command == "scatter") {
      if (!out_dir.empty()) {
        write_file(out_dir, "toric_walls.json", hs::walls_json(toric));
        write_file(out_dir, "toric_walls.txt", hs::walls_table(toric));
      }
      text = hs::walls_table(toric);
    } else {
      hs::WallStructure heart = hs::heart_stage(cfg, toric);
      hs::ThetaContext ctx{&heart, &cfg.bd.fan, &cfg.bd.phi0};
      if (command == "heart") {
        if (!out_dir.empty()) {
          write_file(out_dir, "heart_walls.json", hs::walls_json(heart));
          write_file(out_dir, "heart_walls.txt", hs::walls_table(heart));
        }
        text = hs::walls_table(heart);
      } else if (command == "thetas" || command == "mirror") {
        auto mp = hs::mirror_presentation(cfg.bd, heart, cfg.endpoint, cfg.cutoff,
                                          command == "mirror" ? cfg.relation_rays
                                                              : std::vector<int>{});
        if (command == "thetas") {
          text = hs::thetas_json(cfg.bd.fan, mp.thetas, mp.endpoint);
          if (!out_dir.empty()) write_file(out_dir, "thetas.json", text);
        } else {
          text = mirror_text(cfg, mp);
          if (!out_dir.empty()) write_file(out_dir, "mirror.txt", text);
        }
      } else {
        std::vector<hs::BrokenLine> lines;
        if (cfg.draw_broken_lines)
          for (auto& m : cfg.bd.fan.rays()) {
            auto bl = hs::enumerate_broken_lines(ctx, m, cfg.endpoint, cfg.cutoff);
            lines.insert(lines.end(), bl.begin(), bl.end());
          }
        text = hs::render_slice_svg(heart, cfg.bd.fan, ra, rb, lines);
        if (!out_dir.empty()) write_file(out_dir, "slice.svg", text);
      }
    }
    if (out_dir.empty()) std::cout << text;
  } catch (const hs::NonGenericError& e) {
    emit_error("computation", "NonGenericError", e.what());
    return 2;
  } catch (const hs::BudgetError& e) {
    emit_error("computation", "BudgetError", e.what());
    return 2;
  } catch (const hs::Error& e) {
    emit_error("computation", "Error", e.what());
    return 2;
  }
  return 0;
}
