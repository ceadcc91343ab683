#include "kslog/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "kslog/distance.hpp"
#include "kslog/general_recon.hpp"
#include "kslog/homogeneous_recon.hpp"
#include "kslog/neighbor_joining.hpp"
#include "kslog/newick.hpp"
#include "kslog/parallel.hpp"
#include "kslog/rng.hpp"
#include "kslog/simulator.hpp"
#include "kslog/topology.hpp"
#include "kslog/tree_generators.hpp"
#include "kslog/ultrametric.hpp"
#include "kslog/wpgma.hpp"

namespace kslog {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::cherry: return "cherry";
    case Algorithm::forest: return "forest";
    case Algorithm::wpgma: return "wpgma";
    case Algorithm::nj: return "nj";
  }
  return "?";
}

std::string_view family_name(TreeFamily f) {
  switch (f) {
    case TreeFamily::homogeneous: return "homogeneous";
    case TreeFamily::random: return "random";
    case TreeFamily::ultrametric: return "ultrametric";
  }
  return "?";
}

namespace {

using nlohmann::json;

const json* field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

Algorithm parse_algorithm(const json& v, const std::string& path) {
  if (v.is_string())
    for (Algorithm a : {Algorithm::cherry, Algorithm::forest, Algorithm::wpgma, Algorithm::nj})
      if (v.get<std::string>() == algorithm_name(a)) return a;
  throw ConfigError(path, "expected one of cherry, forest, wpgma, nj");
}

std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return SplitMix64::mix(SplitMix64::mix(SplitMix64::mix(a) ^ b) ^ c);
}

bool is_homogeneous_shape(const Phylogeny& tree) {
  const std::size_t n = tree.num_leaves();
  if (n < 2 || (n & (n - 1)) != 0) return false;
  const int h = tree.height();
  for (std::size_t a = 0; a < n; ++a)
    if (tree.depth(tree.leaf(static_cast<int>(a))) != h) return false;
  return true;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  static const std::vector<std::string> known = {"model", "tree",   "edges",  "k",           "replicates",
                                                 "seed",  "algorithms", "params", "timing", "calibration"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown field");

  ExperimentConfig c;
  if (const json* m = field(j, "model")) {
    try {
      RateModel::from_json(*m);
    } catch (const ValidationError& e) {
      throw ConfigError("model", e.what());
    }
    c.model = *m;
  }

  const json* tree = field(j, "tree");
  if (!tree || !tree->is_object()) throw ConfigError("tree", "required object");
  const json* fam = field(*tree, "family");
  if (!fam || !fam->is_string()) throw ConfigError("tree.family", "required string");
  const std::string family = fam->get<std::string>();
  const char* sizes_key = "leaves";
  if (family == "homogeneous") {
    c.family = TreeFamily::homogeneous;
    sizes_key = "heights";
  } else if (family == "random") {
    c.family = TreeFamily::random;
  } else if (family == "ultrametric") {
    c.family = TreeFamily::ultrametric;
  } else {
    throw ConfigError("tree.family", "expected homogeneous, random or ultrametric");
  }
  const std::string sizes_path = std::string("tree.") + sizes_key;
  const json* sizes = field(*tree, sizes_key);
  if (!sizes || !sizes->is_array() || sizes->empty()) throw ConfigError(sizes_path, "required non-empty array");
  for (std::size_t i = 0; i < sizes->size(); ++i) {
    const std::string p = sizes_path + "[" + std::to_string(i) + "]";
    const auto v = static_cast<int>(get_count((*sizes)[i], p));
    if (c.family == TreeFamily::homogeneous ? (v < 1 || v > 16) : (v < 2 || v > 4096))
      throw ConfigError(p, "out of range");
    c.sizes.push_back(v);
  }
  if (const json* b = field(*tree, "balanced")) {
    if (!b->is_boolean()) throw ConfigError("tree.balanced", "expected a boolean");
    c.balanced = b->get<bool>();
  }

  // Parameters first: edge laws default to them.
  const json empty = json::object();
  const json* params = field(j, "params");
  if (params && !params->is_object()) throw ConfigError("params", "expected an object");
  if (!params) params = &empty;
  const json* edges = field(j, "edges");
  if (edges && !edges->is_object()) throw ConfigError("edges", "expected an object");
  std::string law = "constant";
  if (edges) {
    if (const json* l = field(*edges, "law")) {
      if (!l->is_string()) throw ConfigError("edges.law", "expected a string");
      law = l->get<std::string>();
    }
  }
  double f = 0.0, g = 0.0;
  if (law == "constant") {
    c.edges.kind = EdgeLaw::Kind::constant;
    const json* len = edges ? field(*edges, "length") : nullptr;
    if (!len) throw ConfigError("edges.length", "required for the constant law");
    c.edges.length = get_number(*len, "edges.length");
    if (!(c.edges.length > 0.0)) throw ConfigError("edges.length", "must be > 0");
    f = g = c.edges.length;
  } else if (law == "grid" || law == "continuous") {
    c.edges.kind = law == "grid" ? EdgeLaw::Kind::grid : EdgeLaw::Kind::continuous;
  } else {
    throw ConfigError("edges.law", "expected constant, grid or continuous");
  }
  const double delta = field(*params, "delta") ? get_number(*field(*params, "delta"), "params.delta") : 0.05;
  if (const json* v = field(*params, "f")) f = get_number(*v, "params.f");
  if (const json* v = field(*params, "g")) g = get_number(*v, "params.g");
  if (!(delta > 0.0)) throw ConfigError("params.delta", "must be > 0");
  if (!(f > 0.0)) throw ConfigError("params.f", "required and must be > 0");
  if (f < delta - 1e-12) throw ConfigError("params.f", "must be >= delta");
  if (g < f) throw ConfigError("params.g", "must be >= f");
  c.params = DeepParams::defaults(delta, f, g);
  if (const json* v = field(*params, "D")) c.params.D = get_number(*v, "params.D");
  if (const json* v = field(*params, "W")) c.params.W = get_number(*v, "params.W");
  if (const json* v = field(*params, "gamma")) c.params.gamma = get_number(*v, "params.gamma");
  if (!(c.params.D > 0.0)) throw ConfigError("params.D", "must be > 0");
  if (!(c.params.W > 5.0)) throw ConfigError("params.W", "must be > 5");
  if (c.edges.kind == EdgeLaw::Kind::constant && (c.edges.length < f - 1e-12 || c.edges.length > g + 1e-12))
    throw ConfigError("edges.length", "must lie in [f, g]");

  if (const json* k = field(j, "k")) {
    if (!k->is_array()) throw ConfigError("k", "expected an array");
    for (std::size_t i = 0; i < k->size(); ++i) {
      const std::string p = "k[" + std::to_string(i) + "]";
      const auto v = get_count((*k)[i], p);
      if (v == 0) throw ConfigError(p, "must be >= 1");
      c.k_values.push_back(v);
    }
  }
  if (const json* r = field(j, "replicates")) c.replicates = get_count(*r, "replicates");
  if (const json* s = field(j, "seed")) c.seed = get_count(*s, "seed");
  if (const json* a = field(j, "algorithms")) {
    if (!a->is_array() || a->empty()) throw ConfigError("algorithms", "expected a non-empty array");
    c.algorithms.clear();
    for (std::size_t i = 0; i < a->size(); ++i)
      c.algorithms.push_back(parse_algorithm((*a)[i], "algorithms[" + std::to_string(i) + "]"));
  }
  for (Algorithm a : c.algorithms)
    if ((a == Algorithm::cherry || a == Algorithm::forest) && !(c.params.g < kKestenStigumLength))
      throw ConfigError("params.g", "must be < ln sqrt 2 for the averaging algorithms");
  if (const json* t = field(j, "timing")) {
    if (!t->is_boolean()) throw ConfigError("timing", "expected a boolean");
    c.timing = t->get<bool>();
  }
  if (const json* cal = field(j, "calibration")) {
    if (!cal->is_object()) throw ConfigError("calibration", "expected an object");
    CalibrationSpec s;
    if (const json* v = field(*cal, "target")) s.target = get_number(*v, "calibration.target");
    if (const json* v = field(*cal, "k_start")) s.k_start = get_count(*v, "calibration.k_start");
    if (const json* v = field(*cal, "k_max")) s.k_max = get_count(*v, "calibration.k_max");
    if (const json* v = field(*cal, "replicates")) s.replicates = get_count(*v, "calibration.replicates");
    if (!(s.target > 0.0 && s.target <= 1.0)) throw ConfigError("calibration.target", "must lie in (0, 1]");
    if (s.k_start == 0) throw ConfigError("calibration.k_start", "must be >= 1");
    if (s.k_max < s.k_start) throw ConfigError("calibration.k_max", "must be >= k_start");
    if (s.replicates == 0) throw ConfigError("calibration.replicates", "must be >= 1");
    c.calibration = s;
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json tree = {{"family", family_name(c.family)}};
  tree[c.family == TreeFamily::homogeneous ? "heights" : "leaves"] = c.sizes;
  if (c.family != TreeFamily::homogeneous) tree["balanced"] = c.balanced;
  json edges;
  switch (c.edges.kind) {
    case EdgeLaw::Kind::constant: edges = {{"law", "constant"}, {"length", c.edges.length}}; break;
    case EdgeLaw::Kind::grid: edges = {{"law", "grid"}}; break;
    case EdgeLaw::Kind::continuous: edges = {{"law", "continuous"}}; break;
  }
  json algos = json::array();
  for (Algorithm a : c.algorithms) algos.push_back(algorithm_name(a));
  json out = {{"model", c.model},
              {"tree", tree},
              {"edges", edges},
              {"k", c.k_values},
              {"replicates", c.replicates},
              {"seed", c.seed},
              {"algorithms", algos},
              {"params",
               {{"delta", c.params.delta},
                {"f", c.params.f},
                {"g", c.params.g},
                {"D", c.params.D},
                {"W", c.params.W},
                {"gamma", c.params.gamma}}},
              {"timing", c.timing}};
  if (c.calibration)
    out["calibration"] = {{"target", c.calibration->target},
                          {"k_start", c.calibration->k_start},
                          {"k_max", c.calibration->k_max},
                          {"replicates", c.calibration->replicates}};
  return out;
}

Phylogeny experiment_tree(const ExperimentConfig& config, int size, std::size_t replicate) {
  std::mt19937_64 rng(mix3(config.seed, static_cast<std::uint64_t>(size), replicate));
  const DeepParams& p = config.params;
  LengthLaw law;
  switch (config.edges.kind) {
    case EdgeLaw::Kind::constant: law = constant_length_law(config.edges.length); break;
    case EdgeLaw::Kind::grid: law = grid_length_law(p.f, p.g, p.delta); break;
    case EdgeLaw::Kind::continuous: {
      const double f = p.f, g = p.g;
      law = [f, g](std::mt19937_64& r) { return std::uniform_real_distribution<double>(f, g)(r); };
      break;
    }
  }
  switch (config.family) {
    case TreeFamily::homogeneous: return random_homogeneous(size, law, rng);
    case TreeFamily::random: return random_yule(static_cast<std::size_t>(size), law, rng);
    case TreeFamily::ultrametric:
      return random_ultrametric(static_cast<std::size_t>(size), p.f, p.g, rng, config.balanced);
  }
  throw ValidationError("unknown tree family");
}

std::vector<ExperimentRecord> run_cell(const ExperimentConfig& config, const RateModel& model, int size,
                                       std::size_t k, std::size_t replicates) {
  const std::size_t per = config.algorithms.size();
  std::vector<ExperimentRecord> out(replicates * per);
  parallel_for(replicates, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const Phylogeny tree = experiment_tree(config, size, r);
      const UnrootedTopology truth = UnrootedTopology::from_phylogeny(tree);
      const std::uint64_t align_seed = mix3(config.seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(size), 0);
      const Alignment alignment = sample_alignment(tree, model, k, align_seed, r);
      std::optional<DistanceTable> eigen, uncorrected;
      const bool homogeneous = is_homogeneous_shape(tree);
      for (std::size_t ai = 0; ai < per; ++ai) {
        const Algorithm algo = config.algorithms[ai];
        ExperimentRecord& rec = out[r * per + ai];
        rec.replicate = r;
        rec.seed = config.seed;
        rec.family = config.family;
        rec.n = tree.num_leaves();
        rec.height = config.family == TreeFamily::homogeneous ? size : -1;
        rec.k = k;
        rec.algorithm = algo;
        const auto start = std::chrono::steady_clock::now();
        try {
          std::optional<ReconstructionResult> result;
          if (algo == Algorithm::wpgma) {
            if (!uncorrected) uncorrected = distance_table(alignment, model, Estimator::uncorrected);
            result = wpgma(*uncorrected);
          } else {
            if (!eigen) eigen = distance_table(alignment, model, Estimator::eigen);
            if (algo == Algorithm::cherry) {
              if (homogeneous) result = reconstruct_homogeneous(*eigen, config.params);
            } else if (algo == Algorithm::forest) {
              result = forest_reconstruct(*eigen, config.params);
            } else {
              result = neighbor_joining(*eigen);
            }
          }
          if (!result) {
            rec.status = "inapplicable";
            rec.detail = "tree is not homogeneous";
          } else {
            rec.rf = rf_distance(result->topology, truth);
            rec.success = rec.rf == 0;
            rec.status = "ok";
          }
        } catch (const ReconstructionFailure& e) {
          rec.status = "failed";
          rec.detail = e.what();
        }
        if (config.timing)
          rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
    }
  });
  return out;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double sign_test_p(std::size_t a_only, std::size_t b_only) {
  const std::size_t n = a_only + b_only;
  if (n == 0) return 1.0;
  // sum_{i >= a_only} C(n, i) / 2^n, in logs.
  double p = 0.0;
  for (std::size_t i = a_only; i <= n; ++i)
    p += std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                  std::lgamma(static_cast<double>(n - i) + 1) - static_cast<double>(n) * std::log(2.0));
  return std::min(1.0, p);
}

CalibrationResult calibrate_min_k(const ExperimentConfig& config, const RateModel& model, int size) {
  if (!config.calibration) throw ConfigError("calibration", "not configured");
  const CalibrationSpec& spec = *config.calibration;
  ExperimentConfig single = config;
  single.algorithms = {config.algorithms.front()};
  CalibrationResult res;
  res.size = size;
  for (std::size_t k = spec.k_start; k <= spec.k_max; k *= 2) {
    const auto records = run_cell(single, model, size, k, spec.replicates);
    std::size_t ok = 0;
    for (const auto& r : records) ok += r.success ? 1 : 0;
    if (!records.empty()) res.n = records.front().n;
    const double rate = static_cast<double>(ok) / static_cast<double>(spec.replicates);
    res.trace.emplace_back(k, rate);
    if (rate >= spec.target) {
      res.k_min = k;
      break;
    }
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const RateModel model = config.build_model();
  ExperimentResult result;
  json cells = json::array();
  json paired = json::array();
  for (int size : config.sizes) {
    for (std::size_t k : config.k_values) {
      auto records = run_cell(config, model, size, k, config.replicates);
      const std::size_t per = config.algorithms.size();
      for (std::size_t ai = 0; ai < per; ++ai) {
        std::size_t ok = 0, failed = 0, inapplicable = 0;
        std::size_t n = 0;
        for (std::size_t r = 0; r < config.replicates; ++r) {
          const auto& rec = records[r * per + ai];
          n = rec.n;
          ok += rec.success ? 1 : 0;
          failed += rec.status == "failed" ? 1 : 0;
          inapplicable += rec.status == "inapplicable" ? 1 : 0;
        }
        const auto ci = wilson_interval(ok, config.replicates);
        json cell = {{"size", size},
                     {"n", n},
                     {"k", k},
                     {"algorithm", algorithm_name(config.algorithms[ai])},
                     {"replicates", config.replicates},
                     {"successes", ok},
                     {"failures", failed},
                     {"inapplicable", inapplicable},
                     {"rate", config.replicates ? static_cast<double>(ok) / static_cast<double>(config.replicates) : 0.0},
                     {"wilson_low", ci.low},
                     {"wilson_high", ci.high}};
        cells.push_back(cell);
      }
      for (std::size_t a = 0; a < per; ++a)
        for (std::size_t b = 0; b < per; ++b) {
          if (a == b) continue;
          std::size_t a_only = 0, b_only = 0;
          for (std::size_t r = 0; r < config.replicates; ++r) {
            const bool sa = records[r * per + a].success, sb = records[r * per + b].success;
            a_only += sa && !sb ? 1 : 0;
            b_only += sb && !sa ? 1 : 0;
          }
          paired.push_back({{"size", size},
                            {"k", k},
                            {"first", algorithm_name(config.algorithms[a])},
                            {"second", algorithm_name(config.algorithms[b])},
                            {"first_only", a_only},
                            {"second_only", b_only},
                            {"sign_test_p", sign_test_p(a_only, b_only)}});
        }
      result.records.insert(result.records.end(), std::make_move_iterator(records.begin()),
                            std::make_move_iterator(records.end()));
    }
  }
  result.summary = {{"spec_version", kRecordFormatVersion},
                    {"config", config_to_json(config)},
                    {"cells", cells},
                    {"paired", paired}};
  if (config.calibration) {
    json cal = json::array();
    for (int size : config.sizes) {
      const CalibrationResult c = calibrate_min_k(config, model, size);
      json trace = json::array();
      for (auto [k, rate] : c.trace) trace.push_back({{"k", k}, {"rate", rate}});
      json row = {{"size", size}, {"n", c.n}, {"trace", trace}};
      if (c.k_min) {
        row["k_min"] = *c.k_min;
        row["k_min_over_log2_n"] = static_cast<double>(*c.k_min) / std::log2(static_cast<double>(c.n));
      } else {
        row["k_min"] = nullptr;
      }
      cal.push_back(row);
    }
    result.summary["calibration"] = cal;
  }
  return result;
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records, bool timing) {
  out << "spec_version,replicate,seed,family,n,height,k,algorithm,rf,success,status,detail";
  if (timing) out << ",wall_ms";
  out << '\n';
  for (const auto& r : records) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), '"', '\'');
    std::replace(detail.begin(), detail.end(), '\n', ' ');
    out << kRecordFormatVersion << ',' << r.replicate << ',' << r.seed << ',' << family_name(r.family) << ',' << r.n
        << ',' << r.height << ',' << r.k << ',' << algorithm_name(r.algorithm) << ',' << r.rf << ','
        << (r.success ? 1 : 0) << ',' << r.status << ",\"" << detail << '"';
    if (timing) out << ',' << format_length(r.wall_ms);
    out << '\n';
  }
}

}  // namespace kslog
