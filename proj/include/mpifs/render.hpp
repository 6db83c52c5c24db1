#pragma once

#include <cstdint>
#include <vector>

#include "mpifs/density.hpp"
#include "mpifs/geometry.hpp"

namespace mpifs {

/// Box-to-pixel mapping for PGM output: x right, y up in space, image row 0
/// at the top, box corners landing exactly in the corner pixels.
struct RenderSpec {
    int width = 512;
    int height = 512;
    Box box;

    RenderSpec(int w, int h, Box b);
};

/// Full binary PGM file (`P5\n<w> <h>\n255\n` + w*h bytes, row-major, top row
/// first). Pixels with no support point are 255; a pixel holding density
/// lambda gets round(230 * lambda / lambda_min), so density 0 is black and
/// the faintest mass stays visibly gray. Overlapping support points keep the
/// densest (darkest) value. 1-D measures render as a barcode: every row
/// repeats the same line.
std::vector<std::uint8_t> render_pgm(const DensityMap& mu, const RenderSpec& spec);

void write_pgm_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace mpifs
