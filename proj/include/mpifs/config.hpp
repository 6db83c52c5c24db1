#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpifs/engine.hpp"
#include "mpifs/geometry.hpp"
#include "mpifs/grid.hpp"
#include "mpifs/system.hpp"

namespace mpifs {

enum class Algorithm { determin, discrete, gifs };

struct MapConfig {
    std::vector<std::vector<double>> rows;  // dim rows of arity*dim coefficients
    std::vector<double> offset;
    double q = 0.0;

    friend bool operator==(const MapConfig&, const MapConfig&) = default;
};

/// Parsed and validated run description. The text format is line-oriented
/// key=value in sections [space], repeated [map], [run], [output]; see
/// docs/config.md for the grammar.
struct RunConfig {
    int dim = 1;
    std::vector<double> lower, upper;

    std::vector<MapConfig> maps;

    Algorithm algorithm = Algorithm::discrete;
    std::optional<std::vector<int>> grid_cells;
    std::optional<int> iterations;
    std::optional<double> delta;
    double theta_base = 1.1;
    CombineRule combine = CombineRule::min;
    std::optional<std::vector<double>> seed;
    std::optional<double> alpha;
    std::optional<double> diameter;
    int quantize_digits = 14;
    std::uint64_t support_cap = std::uint64_t{1} << 24;
    std::uint64_t tuple_cap = std::uint64_t{1} << 32;
    bool allow_noncontractive = false;
    int threads = 1;
    bool trace_residuals = false;

    std::optional<std::string> pgm, csv, fuzzy_csv, trace;
    int width = 512;
    int height = 512;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical serialization; emit(parse(emit(c))) == emit(c) byte for byte.
std::string emit_config(const RunConfig& cfg);

Box config_box(const RunConfig& cfg);
MaxPlusSystem config_system(const RunConfig& cfg);
std::optional<Grid> config_grid(const RunConfig& cfg);

/// Dirac seed: the configured point (or the box center), projected to the
/// grid for discrete/GIFS runs.
DensityMap config_seed(const RunConfig& cfg, const Box& box, const Grid* grid);

RunOptions config_run_options(const RunConfig& cfg);

}  // namespace mpifs
