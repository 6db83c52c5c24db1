#include "mpifs/render.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace mpifs {
namespace {

// Cell index of a unit-interval coordinate in a split into `n` pixels,
// boundary points assigned to the lower index.
int lower_index_cell(double t, int n) {
    if (t <= 0.0) return 0;
    const double scaled = t * static_cast<double>(n);
    auto c = static_cast<int>(std::ceil(scaled)) - 1;
    if (c < 0) c = 0;
    if (c > n - 1) c = n - 1;
    return c;
}

}  // namespace

RenderSpec::RenderSpec(int w, int h, Box b) : width(w), height(h), box(std::move(b)) {
    if (width < 1 || height < 1) throw DomainError("render: image size must be >= 1x1");
    if (box.dim() > 2) throw DomainError("render: only 1-D and 2-D boxes are drawable");
}

std::vector<std::uint8_t> render_pgm(const DensityMap& mu, const RenderSpec& spec) {
    if (mu.empty()) throw InvalidMeasureError("render: empty measure");
    if (mu.dim() != spec.box.dim()) throw DomainError("render: measure/box dimension mismatch");

    double lambda_min = 0.0;
    for (const PointValue& e : mu.entries()) lambda_min = std::min(lambda_min, e.value);

    const int w = spec.width, h = spec.height;
    std::vector<std::uint8_t> pix(static_cast<std::size_t>(w) * h, 255);

    for (const PointValue& e : mu.entries()) {
        const double u =
            (e.x[0] - spec.box.lower[0]) / (spec.box.upper[0] - spec.box.lower[0]);
        const int col = lower_index_cell(std::clamp(u, 0.0, 1.0), w);
        const std::uint8_t gray =
            lambda_min == 0.0
                ? 0
                : static_cast<std::uint8_t>(std::lround(230.0 * (e.value / lambda_min)));
        if (mu.dim() == 1) {
            for (int row = 0; row < h; ++row) {
                std::uint8_t& p = pix[static_cast<std::size_t>(row) * w + col];
                p = std::min(p, gray);
            }
        } else {
            const double v =
                (e.x[1] - spec.box.lower[1]) / (spec.box.upper[1] - spec.box.lower[1]);
            // y grows upward; image rows grow downward
            const double flipped = 1.0 - std::clamp(v, 0.0, 1.0);
            int row = lower_index_cell(flipped, h);
            std::uint8_t& p = pix[static_cast<std::size_t>(row) * w + col];
            p = std::min(p, gray);
        }
    }

    char header[64];
    const int header_len = std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", w, h);
    std::vector<std::uint8_t> bytes;
    bytes.reserve(header_len + pix.size());
    bytes.insert(bytes.end(), header, header + header_len);
    bytes.insert(bytes.end(), pix.begin(), pix.end());
    return bytes;
}

void write_pgm_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace mpifs
