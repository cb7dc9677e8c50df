#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heartscatter/heart.hpp"
#include "heartscatter/thetas.hpp"

namespace hs {

struct ProblemConfig {
  std::string name;
  BlowupData bd;
  int cutoff = 1;
  QVec endpoint;                   // resolved, never empty
  std::vector<int> relation_rays;  // empty means all rays
  bool draw_broken_lines = false;
};

// Parses "2L-E1+H"-style sums; unknown names are registered with `kind`.
CurveClass parse_class(const std::string& text, GenKind kind = GenKind::Curve);
Q parse_rational(const std::string& text);

// Throws ConfigError on every validation failure.
ProblemConfig parse_config(const std::string& json_text, std::optional<int> order = std::nullopt,
                           int seed_endpoint = 0);
ProblemConfig load_config(const std::string& path, std::optional<int> order = std::nullopt,
                          int seed_endpoint = 0);

// initial -> complete
WallStructure toric_stage(const ProblemConfig& cfg, CompletionStats* stats = nullptr);
// refine -> to_heart
WallStructure heart_stage(const ProblemConfig& cfg, const WallStructure& toric);

}  // namespace hs
