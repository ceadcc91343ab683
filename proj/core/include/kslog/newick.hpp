#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "kslog/errors.hpp"
#include "kslog/topology.hpp"
#include "kslog/tree.hpp"

namespace kslog {

class NewickError : public ValidationError {
 public:
  NewickError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Leaves must be labeled by integers 0..n-1. Every non-root edge needs a
// branch length; the tree must be binary.
Phylogeny parse_phylogeny(std::string_view text);

// Branch lengths, if present, are ignored. The outermost node may have two or
// three children; all other internal nodes must have two.
UnrootedTopology parse_topology(std::string_view text);

// Canonical form: children ordered by smallest descendant leaf label, branch
// lengths in shortest round-trip decimal form.
std::string to_newick(const Phylogeny& tree);

// Shortest decimal string that parses back to the same double.
std::string format_length(double x);

}  // namespace kslog
