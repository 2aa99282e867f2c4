#pragma once

#include <utility>
#include <vector>

#include "eikjump/solution.hpp"

namespace eikjump {

// The l^1 distance to the boundary as a PLSolution: cells are cut from an
// arrangement of candidate tie lines between the affine pieces of the
// per-face distance functions, assigned by nearest face, and re-merged
// wherever neighbours carry the same affine function.
PLSolution distance_solution(const HDomain& d);

// Signed glue of per-part distance solutions. Parts must tile their union
// up to H^1-null overlap; otherwise NotAPartition. Each entry carries the
// sign (+1 or -1) applied to the part's distance solution. An optional
// precomputed overlay complex is forwarded to the final validation so
// repeated calls on one domain can share it.
PLSolution partition_solution(const std::vector<std::pair<HDomain, int>>& parts,
                              const std::vector<ConvexPoly>* ebound_overlay = nullptr);

}  // namespace eikjump
