// kslog: simulate alignments, compute distance tables, reconstruct trees and
// run experiments from the command line.
//
// Exit codes: 0 success, 1 unexpected error, 2 reconstruction failure,
// 3 invalid configuration or input.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kslog/distance.hpp"
#include "kslog/experiment.hpp"
#include "kslog/general_recon.hpp"
#include "kslog/homogeneous_recon.hpp"
#include "kslog/neighbor_joining.hpp"
#include "kslog/newick.hpp"
#include "kslog/simulator.hpp"
#include "kslog/sufficiency.hpp"
#include "kslog/wpgma.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitReconstruction = 2;
constexpr int kExitConfig = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kslog::ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A Newick string, or a file holding one.
std::string newick_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '(') return arg;
  return slurp(arg);
}

kslog::RateModel model_arg(const std::string& arg) {
  if (arg.ends_with(".json")) return kslog::RateModel::from_json(nlohmann::json::parse(slurp(arg)));
  return kslog::RateModel::from_spec(arg);
}

kslog::Alignment alignment_arg(const std::string& path) {
  if (path == "-") return kslog::read_alignment(std::cin);
  std::ifstream in(path);
  if (!in) throw kslog::ValidationError("cannot open '" + path + "'");
  return kslog::read_alignment(in);
}

// Writes to the file at path, or stdout for "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw kslog::ValidationError("cannot write '" + path + "'");
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-based phylogeny reconstruction with exponential distance averaging"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate an alignment on a tree");
  std::string sim_tree, sim_model = "cfn", sim_dump = "-";
  std::size_t sim_k = 1000;
  std::uint64_t sim_seed = 1, sim_rep = 0;
  sim->add_option("--tree", sim_tree, "Newick tree with branch lengths, or a file containing one")->required();
  sim->add_option("--model", sim_model, "cfn, binary-asymmetric:<pi+>, or a model .json file");
  sim->add_option("-k,--sites", sim_k, "Number of sites")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Master seed");
  sim->add_option("--replicate", sim_rep, "Replicate index");
  sim->add_option("--dump-alignment", sim_dump, "Output file for the alignment ('-' for stdout)");

  // distances
  auto* dist = app.add_subcommand("distances", "Pairwise distance table from an alignment");
  std::string dist_aln, dist_model = "cfn", dist_est = "eigen", dist_out = "-";
  dist->add_option("--alignment", dist_aln, "Alignment dump ('-' for stdin)")->required();
  dist->add_option("--model", dist_model, "cfn, binary-asymmetric:<pi+>, or a model .json file");
  dist->add_option("--estimator", dist_est, "eigen | cfn | logdet | uncorrected");
  dist->add_option("-o,--out", dist_out, "CSV output ('-' for stdout)");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a tree from an alignment");
  std::string rec_aln, rec_model = "cfn", rec_algo = "cherry", rec_diag, rec_truth;
  double rec_delta = 0.05, rec_f = 0.05, rec_g = 0.25;
  std::optional<double> rec_D, rec_W;
  rec->add_option("--alignment", rec_aln, "Alignment dump ('-' for stdin)")->required();
  rec->add_option("--model", rec_model, "cfn, binary-asymmetric:<pi+>, or a model .json file");
  rec->add_option("--algorithm", rec_algo, "cherry | forest | wpgma | nj")
      ->check(CLI::IsMember({"cherry", "forest", "wpgma", "nj"}));
  rec->add_option("--delta", rec_delta, "Grid step of the branch lengths");
  rec->add_option("--f", rec_f, "Lower bound on branch lengths");
  rec->add_option("--g", rec_g, "Upper bound on branch lengths");
  rec->add_option("--D", rec_D, "Radius (default 4g + delta)");
  rec->add_option("--W", rec_W, "Radius slack (default 6)");
  rec->add_option("--diagnostics", rec_diag, "Write JSON diagnostics here instead of stderr");
  rec->add_option("--truth", rec_truth, "True tree (Newick or file); adds the RF distance to the diagnostics");

  // experiment run
  auto* exp = app.add_subcommand("experiment", "Experiment runner");
  exp->require_subcommand(1);
  auto* run = exp->add_subcommand("run", "Run an experiment from a JSON config");
  std::string run_config, run_csv = "-", run_summary;
  run->add_option("config", run_config, "Config file")->required();
  run->add_option("--csv", run_csv, "Per-replicate CSV ('-' for stdout)");
  run->add_option("--summary", run_summary, "Summary JSON file (default: stderr)");

  // analyze sufficiency
  auto* ana = app.add_subcommand("analyze", "Exact analyses");
  ana->require_subcommand(1);
  auto* suff = ana->add_subcommand("sufficiency", "Two datasets with equal correlation matrices");
  double suff_eps = 0.01;
  suff->add_option("--eps", suff_eps, "Small parameter, 0 < eps < 0.1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sim) {
      const kslog::Phylogeny tree = kslog::parse_phylogeny(newick_arg(sim_tree));
      const kslog::RateModel model = model_arg(sim_model);
      const kslog::Alignment a = kslog::sample_alignment(tree, model, sim_k, sim_seed, sim_rep);
      with_output(sim_dump, [&](std::ostream& out) { kslog::write_alignment(out, a); });
      return 0;
    }
    if (*dist) {
      const kslog::RateModel model = model_arg(dist_model);
      const kslog::Alignment a = alignment_arg(dist_aln);
      const kslog::DistanceTable t = kslog::distance_table(a, model, kslog::parse_estimator(dist_est));
      with_output(dist_out, [&](std::ostream& out) { kslog::write_distance_csv(out, t); });
      return 0;
    }
    if (*rec) {
      const kslog::RateModel model = model_arg(rec_model);
      const kslog::Alignment a = alignment_arg(rec_aln);
      kslog::DeepParams params = kslog::DeepParams::defaults(rec_delta, rec_f, rec_g);
      if (rec_D) params.D = *rec_D;
      if (rec_W) params.W = *rec_W;
      params.validate();
      auto emit_diagnostics = [&](const nlohmann::json& d) {
        if (rec_diag.empty()) {
          std::cerr << d.dump(2) << '\n';
        } else {
          with_output(rec_diag, [&](std::ostream& out) { out << d.dump(2) << '\n'; });
        }
      };
      try {
        kslog::ReconstructionResult r;
        if (rec_algo == "wpgma") {
          r = kslog::wpgma(kslog::distance_table(a, model, kslog::Estimator::uncorrected));
        } else {
          const kslog::DistanceTable t = kslog::distance_table(a, model, kslog::Estimator::eigen);
          if (rec_algo == "cherry") r = kslog::reconstruct_homogeneous(t, params);
          else if (rec_algo == "forest") r = kslog::forest_reconstruct(t, params);
          else r = kslog::neighbor_joining(t);
        }
        if (!rec_truth.empty()) {
          const auto truth = kslog::parse_phylogeny(newick_arg(rec_truth));
          r.diagnostics["rf_to_truth"] =
              kslog::rf_distance(r.topology, kslog::UnrootedTopology::from_phylogeny(truth));
        }
        std::cout << kslog::to_newick(r.rooted_estimate()) << '\n';
        emit_diagnostics(r.diagnostics);
        return 0;
      } catch (const kslog::ReconstructionFailure& e) {
        std::cerr << "reconstruction failed: " << e.what() << '\n';
        emit_diagnostics(e.diagnostics());
        return kExitReconstruction;
      }
    }
    if (*run) {
      const kslog::ExperimentConfig config = kslog::parse_config(nlohmann::json::parse(slurp(run_config)));
      const kslog::ExperimentResult result = kslog::run_experiment(config);
      with_output(run_csv, [&](std::ostream& out) { kslog::write_records_csv(out, result.records, config.timing); });
      if (run_summary.empty()) {
        std::cerr << result.summary.dump(2) << '\n';
      } else {
        with_output(run_summary, [&](std::ostream& out) { out << result.summary.dump(2) << '\n'; });
      }
      return 0;
    }
    if (*suff) {
      const kslog::SufficiencyDemo d = kslog::sufficiency_demo(suff_eps);
      std::cout << "both datasets have all-1/4 correlation matrices: "
                << (d.uniform1 && d.uniform2 ? "yes" : "no") << '\n';
      std::cout << std::setw(12) << "p" << std::setw(16) << "P[Data1]" << std::setw(16) << "P[Data2]"
                << std::setw(16) << "ratio" << std::setw(16) << "ratio/eps^2" << '\n';
      for (const auto* row : {&d.small, &d.near_half}) {
        std::cout << std::setw(12) << row->p << std::setw(16) << std::setprecision(6) << row->likelihood1
                  << std::setw(16) << row->likelihood2 << std::setw(16) << row->ratio << std::setw(16)
                  << row->ratio / (d.eps * d.eps) << '\n';
      }
      return 0;
    }
  } catch (const kslog::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
