#pragma once

#include "kslog/general_recon.hpp"
#include "kslog/subtree.hpp"
#include "kslog/tree.hpp"

namespace kslog {

// Clade for vertex `top` of T|_{V'} (V' = kept vertices of `restricted`),
// with the true weights Theta = e^{-tau(top, leaf)} and flow 2^{-k}, k the
// number of restricted edges from top to the leaf.
Clade clade_from_tree(const Phylogeny& tree, const RestrictedTree& restricted, NodeId top, NodeId parent_in_restricted);

// Subtree handle of a legal rooted subtree of T with true weights and true
// child edge lengths rounded to the delta grid. Throws ValidationError if the
// subtree is not legal.
SubtreeHandle handle_from_tree(const Phylogeny& tree, const RootedSubtree& sub, double delta);

}  // namespace kslog
