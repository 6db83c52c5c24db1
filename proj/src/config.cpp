#include "mpifs/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mpifs {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

[[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& why) {
    throw ConfigError("[" + section + "] " + key + ": " + why);
}

double parse_number(const std::string& section, const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || trim(end)[0] != '\0') fail(section, key, "expected a number");
    return v;
}

std::vector<double> parse_numbers(const std::string& section, const std::string& key,
                                  const std::string& value) {
    std::vector<double> out;
    std::string cleaned = value;
    for (char& c : cleaned)
        if (c == ',') c = ' ';
    std::stringstream ss(cleaned);
    std::string tok;
    while (ss >> tok) out.push_back(parse_number(section, key, tok));
    if (out.empty()) fail(section, key, "expected at least one number");
    return out;
}

std::int64_t parse_integer(const std::string& section, const std::string& key,
                           const std::string& value) {
    const double v = parse_number(section, key, value);
    auto n = static_cast<std::int64_t>(v);
    if (static_cast<double>(n) != v) fail(section, key, "expected an integer");
    return n;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    fail(section, key, "expected true or false");
}

void validate(const RunConfig& cfg) {
    if (cfg.dim < 1 || cfg.dim > 3) fail("space", "dim", "must be 1, 2 or 3");
    if (static_cast<int>(cfg.lower.size()) != cfg.dim) fail("space", "lower", "needs dim values");
    if (static_cast<int>(cfg.upper.size()) != cfg.dim) fail("space", "upper", "needs dim values");
    try {
        config_box(cfg);
    } catch (const Error& e) {
        fail("space", "lower/upper", e.what());
    }
    if (cfg.maps.empty()) throw ConfigError("[map]: at least one map section required");
    for (std::size_t i = 0; i < cfg.maps.size(); ++i) {
        const MapConfig& m = cfg.maps[i];
        const std::string where = "map #" + std::to_string(i + 1);
        if (static_cast<int>(m.rows.size()) != cfg.dim) fail(where, "row", "needs dim rows");
        for (const auto& r : m.rows)
            if (r.size() != m.rows.front().size() || r.empty() || r.size() % cfg.dim != 0)
                fail(where, "row", "rows must share a length that is a multiple of dim");
        if (static_cast<int>(m.offset.size()) != cfg.dim) fail(where, "offset", "needs dim values");
    }
    MaxPlusSystem sys = [&] {
        try {
            return config_system(cfg);
        } catch (const Error& e) {
            throw ConfigError(std::string("[map] ") + e.what());
        }
    }();
    const int arity = sys.arity();

    switch (cfg.algorithm) {
        case Algorithm::determin:
            if (arity != 1) fail("run", "algorithm", "determin needs arity-1 maps");
            break;
        case Algorithm::discrete:
            if (arity != 1) fail("run", "algorithm", "discrete needs arity-1 maps");
            if (!cfg.grid_cells) fail("run", "grid", "required for discrete runs");
            break;
        case Algorithm::gifs:
            if (arity < 2) fail("run", "algorithm", "gifs needs arity >= 2 maps");
            if (!cfg.grid_cells) fail("run", "grid", "required for gifs runs");
            if (!cfg.alpha) fail("run", "alpha", "required for gifs runs (contraction factor)");
            break;
    }
    if (cfg.grid_cells) {
        const auto& g = *cfg.grid_cells;
        if (g.size() != 1 && static_cast<int>(g.size()) != cfg.dim)
            fail("run", "grid", "needs one cell count or one per axis");
        for (int n : g)
            if (n < 2) fail("run", "grid", "cell counts must be >= 2");
    }
    if (cfg.iterations.has_value() == cfg.delta.has_value())
        fail("run", "iterations/delta", "exactly one of the two must be set");
    if (cfg.iterations && *cfg.iterations < 0) fail("run", "iterations", "must be >= 0");
    if (cfg.delta && !(*cfg.delta > 0.0)) fail("run", "delta", "must be positive");
    if (!(cfg.theta_base > 1.0)) fail("run", "theta_base", "must be > 1");
    if (cfg.seed && static_cast<int>(cfg.seed->size()) != cfg.dim)
        fail("run", "seed", "needs dim coordinates");
    if (cfg.seed) {
        for (int i = 0; i < cfg.dim; ++i)
            if ((*cfg.seed)[i] < cfg.lower[i] || (*cfg.seed)[i] > cfg.upper[i])
                fail("run", "seed", "must lie inside the box");
    }
    if (cfg.alpha && !(*cfg.alpha > 0.0 && *cfg.alpha < 1.0))
        fail("run", "alpha", "must lie in (0, 1)");
    if (cfg.diameter && !(*cfg.diameter > 0.0)) fail("run", "diameter", "must be positive");
    if (cfg.quantize_digits < 0 || cfg.quantize_digits > 15)
        fail("run", "quantize_digits", "must lie in 0..15");
    if (cfg.threads < 1) fail("run", "threads", "must be >= 1");
    if (cfg.width < 1) fail("output", "width", "must be >= 1");
    if (cfg.height < 1) fail("output", "height", "must be >= 1");

    if (!cfg.allow_noncontractive) {
        if (arity == 1) {
            const double a = sys.contraction_factor();
            if (!(a < 1.0))
                fail("run", "allow_noncontractive",
                     "system is not Banach contractive (alpha_S = " + format_double(a) +
                         "); set allow_noncontractive = true to run anyway");
        } else {
            const Box box = config_box(cfg);
            for (std::size_t j = 0; j < sys.map_count(); ++j)
                if (!edelstein_sampled(sys.maps()[j], box, 512, 0x5eed + j))
                    fail("run", "allow_noncontractive",
                         "map #" + std::to_string(j + 1) +
                             " failed the sampled Edelstein contraction check");
        }
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.lower.clear();
    cfg.upper.clear();
    bool saw_space = false, saw_run = false;
    std::string section;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header: " + line);
            section = line.substr(1, line.size() - 2);
            if (section == "space")
                saw_space = true;
            else if (section == "map")
                cfg.maps.emplace_back();
            else if (section == "run")
                saw_run = true;
            else if (section != "output")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError("key outside any section: " + key);

        if (section == "space") {
            if (key == "dim")
                cfg.dim = static_cast<int>(parse_integer(section, key, value));
            else if (key == "lower")
                cfg.lower = parse_numbers(section, key, value);
            else if (key == "upper")
                cfg.upper = parse_numbers(section, key, value);
            else
                fail(section, key, "unknown key");
        } else if (section == "map") {
            MapConfig& m = cfg.maps.back();
            if (key == "row")
                m.rows.push_back(parse_numbers(section, key, value));
            else if (key == "offset")
                m.offset = parse_numbers(section, key, value);
            else if (key == "q")
                m.q = parse_number(section, key, value);
            else
                fail(section, key, "unknown key");
        } else if (section == "run") {
            if (key == "algorithm") {
                if (value == "determin")
                    cfg.algorithm = Algorithm::determin;
                else if (value == "discrete")
                    cfg.algorithm = Algorithm::discrete;
                else if (value == "gifs")
                    cfg.algorithm = Algorithm::gifs;
                else
                    fail(section, key, "expected determin, discrete or gifs");
            } else if (key == "grid") {
                std::vector<int> cells;
                for (double v : parse_numbers(section, key, value)) {
                    auto n = static_cast<int>(v);
                    if (static_cast<double>(n) != v) fail(section, key, "expected integers");
                    cells.push_back(n);
                }
                cfg.grid_cells = std::move(cells);
            } else if (key == "iterations")
                cfg.iterations = static_cast<int>(parse_integer(section, key, value));
            else if (key == "delta")
                cfg.delta = parse_number(section, key, value);
            else if (key == "theta_base")
                cfg.theta_base = parse_number(section, key, value);
            else if (key == "combine") {
                if (value == "min")
                    cfg.combine = CombineRule::min;
                else if (value == "sum")
                    cfg.combine = CombineRule::sum;
                else
                    fail(section, key, "expected min or sum");
            } else if (key == "seed")
                cfg.seed = parse_numbers(section, key, value);
            else if (key == "alpha")
                cfg.alpha = parse_number(section, key, value);
            else if (key == "diameter")
                cfg.diameter = parse_number(section, key, value);
            else if (key == "quantize_digits")
                cfg.quantize_digits = static_cast<int>(parse_integer(section, key, value));
            else if (key == "support_cap")
                cfg.support_cap = static_cast<std::uint64_t>(parse_integer(section, key, value));
            else if (key == "tuple_cap")
                cfg.tuple_cap = static_cast<std::uint64_t>(parse_integer(section, key, value));
            else if (key == "allow_noncontractive")
                cfg.allow_noncontractive = parse_bool(section, key, value);
            else if (key == "threads")
                cfg.threads = static_cast<int>(parse_integer(section, key, value));
            else if (key == "trace_residuals")
                cfg.trace_residuals = parse_bool(section, key, value);
            else
                fail(section, key, "unknown key");
        } else if (section == "output") {
            if (key == "pgm")
                cfg.pgm = value;
            else if (key == "csv")
                cfg.csv = value;
            else if (key == "fuzzy_csv")
                cfg.fuzzy_csv = value;
            else if (key == "trace")
                cfg.trace = value;
            else if (key == "width")
                cfg.width = static_cast<int>(parse_integer(section, key, value));
            else if (key == "height")
                cfg.height = static_cast<int>(parse_integer(section, key, value));
            else
                fail(section, key, "unknown key");
        }
    }
    if (!saw_space) throw ConfigError("missing [space] section");
    if (!saw_run) throw ConfigError("missing [run] section");
    validate(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream os;
    auto vec = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += " ";
            s += format_double(v[i]);
        }
        return s;
    };
    os << "[space]\n";
    os << "dim = " << cfg.dim << "\n";
    os << "lower = " << vec(cfg.lower) << "\n";
    os << "upper = " << vec(cfg.upper) << "\n";
    for (const MapConfig& m : cfg.maps) {
        os << "\n[map]\n";
        for (const auto& r : m.rows) os << "row = " << vec(r) << "\n";
        os << "offset = " << vec(m.offset) << "\n";
        os << "q = " << format_double(m.q) << "\n";
    }
    os << "\n[run]\n";
    os << "algorithm = "
       << (cfg.algorithm == Algorithm::determin
               ? "determin"
               : cfg.algorithm == Algorithm::discrete ? "discrete" : "gifs")
       << "\n";
    if (cfg.grid_cells) {
        os << "grid =";
        for (int n : *cfg.grid_cells) os << " " << n;
        os << "\n";
    }
    if (cfg.iterations) os << "iterations = " << *cfg.iterations << "\n";
    if (cfg.delta) os << "delta = " << format_double(*cfg.delta) << "\n";
    os << "theta_base = " << format_double(cfg.theta_base) << "\n";
    os << "combine = " << (cfg.combine == CombineRule::min ? "min" : "sum") << "\n";
    if (cfg.seed) os << "seed = " << vec(*cfg.seed) << "\n";
    if (cfg.alpha) os << "alpha = " << format_double(*cfg.alpha) << "\n";
    if (cfg.diameter) os << "diameter = " << format_double(*cfg.diameter) << "\n";
    os << "quantize_digits = " << cfg.quantize_digits << "\n";
    os << "support_cap = " << cfg.support_cap << "\n";
    os << "tuple_cap = " << cfg.tuple_cap << "\n";
    os << "allow_noncontractive = " << (cfg.allow_noncontractive ? "true" : "false") << "\n";
    os << "threads = " << cfg.threads << "\n";
    os << "trace_residuals = " << (cfg.trace_residuals ? "true" : "false") << "\n";
    os << "\n[output]\n";
    if (cfg.pgm) os << "pgm = " << *cfg.pgm << "\n";
    if (cfg.csv) os << "csv = " << *cfg.csv << "\n";
    if (cfg.fuzzy_csv) os << "fuzzy_csv = " << *cfg.fuzzy_csv << "\n";
    if (cfg.trace) os << "trace = " << *cfg.trace << "\n";
    os << "width = " << cfg.width << "\n";
    os << "height = " << cfg.height << "\n";
    return os.str();
}

Box config_box(const RunConfig& cfg) {
    Point lo(cfg.dim), up(cfg.dim);
    for (int i = 0; i < cfg.dim; ++i) {
        lo[i] = cfg.lower[i];
        up[i] = cfg.upper[i];
    }
    return Box(lo, up);
}

MaxPlusSystem config_system(const RunConfig& cfg) {
    std::vector<AffineMap> maps;
    std::vector<double> weights;
    for (const MapConfig& m : cfg.maps) {
        const auto rows = static_cast<Eigen::Index>(m.rows.size());
        const auto cols = static_cast<Eigen::Index>(m.rows.front().size());
        Eigen::MatrixXd a(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = m.rows[r][c];
        Eigen::VectorXd b(rows);
        for (Eigen::Index r = 0; r < rows; ++r) b[r] = m.offset[r];
        maps.emplace_back(std::move(a), std::move(b));
        weights.push_back(m.q);
    }
    return MaxPlusSystem(std::move(maps), std::move(weights), cfg.alpha);
}

std::optional<Grid> config_grid(const RunConfig& cfg) {
    if (!cfg.grid_cells) return std::nullopt;
    std::vector<int> cells = *cfg.grid_cells;
    if (cells.size() == 1) cells.assign(cfg.dim, cells.front());
    return Grid(config_box(cfg), std::move(cells));
}

DensityMap config_seed(const RunConfig& cfg, const Box& box, const Grid* grid) {
    Point p = box.center();
    if (cfg.seed)
        for (int i = 0; i < cfg.dim; ++i) p[i] = (*cfg.seed)[i];
    if (grid) p = grid->project(p);
    return DensityMap::dirac(p);
}

RunOptions config_run_options(const RunConfig& cfg) {
    RunOptions opts;
    opts.threads = cfg.threads;
    opts.quantize_digits = cfg.quantize_digits;
    opts.support_cap = cfg.support_cap;
    opts.tuple_cap = cfg.tuple_cap;
    opts.record_steps = cfg.trace_residuals;
    return opts;
}

}  // namespace mpifs
