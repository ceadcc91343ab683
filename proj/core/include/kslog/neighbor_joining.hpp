#pragma once

#include "kslog/distance_table.hpp"
#include "kslog/reconstruction.hpp"

namespace kslog {

// Classical neighbor joining on the leaf-pair estimates only (no averaging).
// Infinite entries are replaced by the largest finite entry plus one. The
// last three nodes are joined at a single internal vertex; the rooted shape
// in the result places its root there.
ReconstructionResult neighbor_joining(const DistanceTable& table);

}  // namespace kslog
