#pragma once

#include "eirnri/model.hpp"
#include "eirnri/types.hpp"

#include <cstdint>
#include <vector>

namespace eirnri {

struct BlockRect {
    int row0 = 0;
    int col0 = 0;
    int rows = 0;
    int cols = 0;
};

struct MaskSpec {
    enum class Kind { random_uniform, block };
    Kind kind = Kind::random_uniform;
    double sampling_ratio = 0.5;      // random_uniform: |Omega| = ceil(SR * m * n)
    std::vector<BlockRect> blocks;    // block: unobserved rectangles
    std::uint64_t seed = 0;
};

/// Rank-r product B*C with i.i.d. standard normal entries (column-major
/// fill order from the seeded generator).
Matrix gen_lowrank(int m, int n, int r, std::uint64_t seed);

/// Observed index set. Random kind samples exactly ceil(SR*m*n) cells
/// without replacement; block kind observes everything outside the given
/// rectangles. Entries come back sorted row-major, so a fixed seed gives
/// a canonical mask.
Mask gen_mask(int m, int n, const MaskSpec& spec);

/// Default block geometry when none is given: one centered square
/// covering about 6% of the pixels.
std::vector<BlockRect> default_block(int m, int n);

/// Per-channel best rank-r approximation, clamped to [0, 255].
std::vector<Matrix> image_to_lowrank_target(const std::vector<Matrix>& image, int r);

/// Bundles P_Omega(x_star) into a ProblemInstance (caller keeps x_star
/// for RelErr).
ProblemInstance make_completion_instance(const Matrix& x_star, const Mask& mask, double lambda,
                                         double p);

}  // namespace eirnri
