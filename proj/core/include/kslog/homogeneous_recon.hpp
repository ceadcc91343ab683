#pragma once

#include "kslog/deep_metric.hpp"
#include "kslog/distance_table.hpp"
#include "kslog/reconstruction.hpp"

namespace kslog {

// Level-by-level cherry picking for trees whose leaves all sit at the same
// depth (n = 2^h leaves). At each level:
//  1. distorted distances d between current vertices;
//  2. deep four-point test on every quartet whose six distances are finite;
//  3. candidates of a vertex = vertices that share a side with it in some
//     passing split and never sit on the opposite side of one; cherries =
//     mutual nearest candidates, which must pair up all current vertices;
//  4. each cherry (x, y) gets edge lengths from the three-point estimate with
//     witness w, the SD-valid vertex nearest to the cherry (ties by smallest
//     leaf label), rounded to the grid.
// The estimated lengths in the result are -ln of the estimated weights; only
// the sum of the two edges at the root is identifiable and it is split evenly.
//
// Throws ReconstructionFailure when the pairing is not perfect or no witness
// exists, ValidationError when n is not a power of two >= 2.
ReconstructionResult reconstruct_homogeneous(const DistanceTable& table, const DeepParams& params);

}  // namespace kslog
