#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kslog/rate_model.hpp"
#include "kslog/tree.hpp"

namespace kslog {

// k i.i.d. site columns of leaf states, stored leaf-major: the sequence of
// leaf a occupies states[a*k, (a+1)*k).
struct Alignment {
  std::size_t num_leaves = 0;
  std::size_t num_sites = 0;
  std::vector<std::uint8_t> states;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  std::uint8_t state(std::size_t leaf, std::size_t site) const { return states[leaf * num_sites + site]; }
  std::span<const std::uint8_t> sequence(std::size_t leaf) const {
    return {states.data() + leaf * num_sites, num_sites};
  }
};

// States at every vertex for each site, vertex-major (indexed by NodeId).
struct FullSample {
  std::size_t num_nodes = 0;
  std::size_t num_sites = 0;
  std::vector<std::uint8_t> states;

  std::uint8_t state(NodeId v, std::size_t site) const { return states[static_cast<std::size_t>(v) * num_sites + site]; }
  std::span<const std::uint8_t> sequence(NodeId v) const {
    return {states.data() + static_cast<std::size_t>(v) * num_sites, num_sites};
  }
};

// Site i uses the stream site_stream(seed, replicate, i): root state from pi,
// then each vertex in preorder from the row of e^{tau_e Q} indexed by its
// parent's state. Deterministic regardless of thread count.
FullSample sample_full(const Phylogeny& tree, const RateModel& model, std::size_t k,
                       std::uint64_t seed, std::uint64_t replicate = 0);

// Leaf projection of sample_full with the same arguments.
Alignment sample_alignment(const Phylogeny& tree, const RateModel& model, std::size_t k,
                           std::uint64_t seed, std::uint64_t replicate = 0);

Alignment leaf_alignment(const Phylogeny& tree, const FullSample& full);

// sigma = nu_state, pointwise.
std::vector<double> sigma_view(std::span<const std::uint8_t> states, const RateModel& model);

// One line per leaf, states as space-separated integers.
void write_alignment(std::ostream& out, const Alignment& alignment);
// Throws ValidationError on ragged rows or non-integer tokens.
Alignment read_alignment(std::istream& in);

}  // namespace kslog
