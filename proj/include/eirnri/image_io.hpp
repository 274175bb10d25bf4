#pragma once

#include "eirnri/types.hpp"

#include <string>
#include <vector>

namespace eirnri {

/// 8-bit PNG (grayscale or RGB) to per-channel real matrices in [0, 255]
/// and back. save_png rounds to nearest and clamps.
std::vector<Matrix> load_png(const std::string& path);
void save_png(const std::string& path, const std::vector<Matrix>& channels);

}  // namespace eirnri
