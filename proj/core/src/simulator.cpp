#include "kslog/simulator.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "kslog/errors.hpp"
#include "kslog/parallel.hpp"
#include "kslog/rng.hpp"

namespace kslog {

namespace {

std::vector<double> cumulative_rows(const Matrix& m) {
  std::vector<double> out(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      acc += m(r, c);
      out[r * m.cols() + c] = acc;
    }
  }
  return out;
}

std::uint8_t draw(const double* cdf, std::size_t phi, double u) {
  for (std::size_t j = 0; j + 1 < phi; ++j)
    if (u < cdf[j]) return static_cast<std::uint8_t>(j);
  return static_cast<std::uint8_t>(phi - 1);
}

}  // namespace

FullSample sample_full(const Phylogeny& tree, const RateModel& model, std::size_t k,
                       std::uint64_t seed, std::uint64_t replicate) {
  if (k == 0) throw ValidationError("sample: k must be >= 1");
  const std::size_t phi = static_cast<std::size_t>(model.num_states());
  if (phi > 255) throw ValidationError("sample: too many states");

  std::vector<double> root_cdf(phi);
  double acc = 0.0;
  for (std::size_t i = 0; i < phi; ++i) root_cdf[i] = (acc += model.pi()[i]);

  // Transition CDFs cached per distinct edge length.
  std::map<double, std::size_t> cache_index;
  std::vector<std::vector<double>> cdfs;
  std::vector<std::size_t> edge_cdf(tree.num_nodes(), 0);
  for (NodeId v : tree.preorder()) {
    if (v == tree.root()) continue;
    const double t = tree.length(v);
    auto [it, inserted] = cache_index.try_emplace(t, cdfs.size());
    if (inserted) cdfs.push_back(cumulative_rows(model.transition(t)));
    edge_cdf[v] = it->second;
  }

  FullSample out;
  out.num_nodes = tree.num_nodes();
  out.num_sites = k;
  out.states.assign(out.num_nodes * k, 0);
  const auto order = tree.preorder();
  parallel_for(k, [&](std::size_t begin, std::size_t end) {
    for (std::size_t site = begin; site < end; ++site) {
      SplitMix64 rng = site_stream(seed, replicate, site);
      for (NodeId v : order) {
        const double u = rng.uniform();
        std::uint8_t s;
        if (v == tree.root()) {
          s = draw(root_cdf.data(), phi, u);
        } else {
          const std::uint8_t ps = out.states[static_cast<std::size_t>(tree.parent(v)) * k + site];
          s = draw(cdfs[edge_cdf[v]].data() + ps * phi, phi, u);
        }
        out.states[static_cast<std::size_t>(v) * k + site] = s;
      }
    }
  });
  return out;
}

Alignment leaf_alignment(const Phylogeny& tree, const FullSample& full) {
  Alignment a;
  a.num_leaves = tree.num_leaves();
  a.num_sites = full.num_sites;
  a.states.resize(a.num_leaves * a.num_sites);
  for (std::size_t lab = 0; lab < a.num_leaves; ++lab) {
    auto seq = full.sequence(tree.leaf(static_cast<int>(lab)));
    std::copy(seq.begin(), seq.end(), a.states.begin() + static_cast<std::ptrdiff_t>(lab * a.num_sites));
  }
  return a;
}

Alignment sample_alignment(const Phylogeny& tree, const RateModel& model, std::size_t k,
                           std::uint64_t seed, std::uint64_t replicate) {
  Alignment a = leaf_alignment(tree, sample_full(tree, model, k, seed, replicate));
  a.seed = seed;
  a.replicate = replicate;
  return a;
}

std::vector<double> sigma_view(std::span<const std::uint8_t> states, const RateModel& model) {
  std::vector<double> out(states.size());
  const auto nu = model.nu();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] >= nu.size()) throw ValidationError("sigma_view: state out of range");
    out[i] = nu[states[i]];
  }
  return out;
}

void write_alignment(std::ostream& out, const Alignment& alignment) {
  for (std::size_t a = 0; a < alignment.num_leaves; ++a) {
    auto seq = alignment.sequence(a);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out << ' ';
      out << static_cast<int>(seq[i]);
    }
    out << '\n';
  }
}

Alignment read_alignment(std::istream& in) {
  Alignment a;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<std::uint8_t> row;
    std::string tok;
    while (ls >> tok) {
      int v = -1;
      try {
        std::size_t used = 0;
        v = std::stoi(tok, &used);
        if (used != tok.size()) v = -1;
      } catch (const std::exception&) {
        v = -1;
      }
      if (v < 0 || v > 255)
        throw ValidationError("alignment line " + std::to_string(line_no) + ": bad state '" + tok + "'");
      row.push_back(static_cast<std::uint8_t>(v));
    }
    if (a.num_leaves == 0) a.num_sites = row.size();
    if (row.size() != a.num_sites)
      throw ValidationError("alignment line " + std::to_string(line_no) + ": expected " +
                            std::to_string(a.num_sites) + " sites");
    a.states.insert(a.states.end(), row.begin(), row.end());
    ++a.num_leaves;
  }
  if (a.num_leaves == 0) throw ValidationError("alignment is empty");
  return a;
}

}  // namespace kslog
