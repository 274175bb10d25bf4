#include "eirnri/datagen.hpp"

#include "eirnri/rng.hpp"
#include "eirnri/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eirnri {

Matrix gen_lowrank(int m, int n, int r, std::uint64_t seed) {
    if (r < 1 || r > std::min(m, n))
        throw std::invalid_argument("gen_lowrank: rank out of range [1, min(m,n)]");
    Rng rng(seed);
    Matrix b(m, r), c(r, n);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < m; ++i) b(i, j) = rng.normal();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < r; ++i) c(i, j) = rng.normal();
    return b * c;
}

Mask gen_mask(int m, int n, const MaskSpec& spec) {
    Mask mask;
    if (spec.kind == MaskSpec::Kind::random_uniform) {
        if (!(spec.sampling_ratio > 0.0 && spec.sampling_ratio <= 1.0))
            throw std::invalid_argument("gen_mask: sampling ratio must lie in (0,1]");
        const std::uint64_t total = static_cast<std::uint64_t>(m) * n;
        const std::uint64_t count =
            static_cast<std::uint64_t>(std::ceil(spec.sampling_ratio * static_cast<double>(total)));
        // Partial Fisher-Yates over the flat index space.
        std::vector<std::uint32_t> cells(total);
        std::iota(cells.begin(), cells.end(), 0u);
        Rng rng(spec.seed);
        for (std::uint64_t i = 0; i < count; ++i) {
            const std::uint64_t j = i + rng.below(total - i);
            std::swap(cells[i], cells[j]);
        }
        mask.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const std::uint32_t cell = cells[i];
            mask.push_back({static_cast<std::int32_t>(cell / n), static_cast<std::int32_t>(cell % n)});
        }
        std::sort(mask.begin(), mask.end(), [](const MaskEntry& a, const MaskEntry& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
    } else {
        const auto& blocks = spec.blocks.empty() ? default_block(m, n) : spec.blocks;
        for (const auto& b : blocks) {
            if (b.row0 < 0 || b.col0 < 0 || b.rows <= 0 || b.cols <= 0 || b.row0 + b.rows > m ||
                b.col0 + b.cols > n)
                throw std::invalid_argument("gen_mask: block rectangle out of bounds");
        }
        auto hidden = [&](int i, int j) {
            for (const auto& b : blocks)
                if (i >= b.row0 && i < b.row0 + b.rows && j >= b.col0 && j < b.col0 + b.cols)
                    return true;
            return false;
        };
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                if (!hidden(i, j)) mask.push_back({i, j});
    }
    return mask;
}

std::vector<BlockRect> default_block(int m, int n) {
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(0.06 * m * n))));
    const int s = std::min({side, m, n});
    return {{(m - s) / 2, (n - s) / 2, s, s}};
}

std::vector<Matrix> image_to_lowrank_target(const std::vector<Matrix>& image, int r) {
    std::vector<Matrix> out;
    out.reserve(image.size());
    for (const auto& channel : image) {
        if (r < 1 || r > std::min(channel.rows(), channel.cols()))
            throw std::invalid_argument("image_to_lowrank_target: rank out of range");
        ThinSvd svd = svd_ordered(channel);
        for (int i = r; i < svd.s.size(); ++i) svd.s(i) = 0.0;
        out.push_back(svd.reconstruct().cwiseMax(0.0).cwiseMin(255.0));
    }
    return out;
}

ProblemInstance make_completion_instance(const Matrix& x_star, const Mask& mask, double lambda,
                                         double p) {
    Matrix observed = Matrix::Zero(x_star.rows(), x_star.cols());
    for (const auto& e : mask) observed(e.row, e.col) = x_star(e.row, e.col);
    return ProblemInstance(std::move(observed), mask, lambda, p);
}

}  // namespace eirnri
