#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kslog/deep_metric.hpp"
#include "kslog/errors.hpp"
#include "kslog/rate_model.hpp"
#include "kslog/tree.hpp"

namespace kslog {

inline constexpr const char* kRecordFormatVersion = "1";

// Invalid experiment configuration; path() names the offending field, e.g.
// "params.g".
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string path, const std::string& message)
      : ValidationError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class TreeFamily { homogeneous, random, ultrametric };
enum class Algorithm { cherry, forest, wpgma, nj };

std::string_view algorithm_name(Algorithm a);
std::string_view family_name(TreeFamily f);

struct EdgeLaw {
  enum class Kind { constant, grid, continuous };
  Kind kind = Kind::constant;
  double length = 0.25;  // constant law only
};

struct CalibrationSpec {
  double target = 0.8;
  std::size_t k_start = 64;
  std::size_t k_max = 1 << 18;
  std::size_t replicates = 50;
};

// JSON layout:
// {
//   "model": "cfn" | "binary-asymmetric:0.7" | {"phi":..,"pi":[..],"Q":[[..]]},
//   "tree": {"family": "homogeneous", "heights": [3, 4]}            or
//           {"family": "random" | "ultrametric", "leaves": [16], "balanced": false},
//   "edges": {"law": "constant", "length": 0.25} | {"law": "grid"} | {"law": "continuous"},
//   "k": [1000, 4000], "replicates": 50, "seed": 1,
//   "algorithms": ["cherry", "forest", "wpgma", "nj"],
//   "params": {"delta": 0.05, "f": 0.25, "g": 0.25, "D": .., "W": 6, "gamma": 3.5},
//   "timing": false,
//   "calibration": {"target": 0.8, "k_start": 64, "k_max": 262144, "replicates": 50}
// }
struct ExperimentConfig {
  nlohmann::json model = "cfn";
  TreeFamily family = TreeFamily::homogeneous;
  std::vector<int> sizes;  // heights for homogeneous, leaf counts otherwise
  bool balanced = false;
  EdgeLaw edges;
  std::vector<std::size_t> k_values;
  std::size_t replicates = 0;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::cherry};
  DeepParams params;
  bool timing = false;
  std::optional<CalibrationSpec> calibration;

  RateModel build_model() const { return RateModel::from_json(model); }
};

// Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct ExperimentRecord {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  TreeFamily family = TreeFamily::homogeneous;
  std::size_t n = 0;
  int height = -1;  // homogeneous family only
  std::size_t k = 0;
  Algorithm algorithm = Algorithm::cherry;
  int rf = -1;  // -1 when reconstruction failed
  bool success = false;
  std::string status;  // ok | failed | inapplicable
  std::string detail;
  double wall_ms = 0.0;  // only filled when timing is on
};

// Tree used for a given (size, replicate); identical across k values and
// algorithms so that comparisons are paired.
Phylogeny experiment_tree(const ExperimentConfig& config, int size, std::size_t replicate);

// All algorithms on every replicate of one (size, k) cell, records in
// replicate order then algorithm order. Replicates run on the worker pool.
std::vector<ExperimentRecord> run_cell(const ExperimentConfig& config, const RateModel& model, int size,
                                       std::size_t k, std::size_t replicates);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

// P[X >= a] for X ~ Binomial(a + b, 1/2): one-sided sign test that the first
// of two paired methods wins more often.
double sign_test_p(std::size_t a_only, std::size_t b_only);

struct CalibrationResult {
  int size = 0;
  std::size_t n = 0;
  std::optional<std::size_t> k_min;
  std::vector<std::pair<std::size_t, double>> trace;  // (k, success rate)
};
// Doubling search from k_start for the smallest k reaching the target
// success rate with the first configured algorithm.
CalibrationResult calibrate_min_k(const ExperimentConfig& config, const RateModel& model, int size);

struct ExperimentResult {
  std::vector<ExperimentRecord> records;
  nlohmann::json summary;
};

// Runs every (size, k) cell, then the calibration if configured. Output is
// deterministic for a given config; wall times are recorded only with
// "timing": true.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Per-record CSV with a version column; wall_ms column only when timing.
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records, bool timing);

}  // namespace kslog
