#pragma once

#include <string>

#include "lbd/image.hpp"

namespace lbd {

// 8-bit gray or RGB PNG -> [0,1] doubles. Alpha channels are dropped,
// 16-bit files are reduced to 8. Throws IoError on failure.
ImageBuffer read_png(const std::string& path);

// Clamps to [0,1] and writes 8-bit gray (1 channel) or RGB (3 channels).
void write_png(const ImageBuffer& img, const std::string& path);

}  // namespace lbd
