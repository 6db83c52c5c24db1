#include "mpifs/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "mpifs/config.hpp"
#include "mpifs/csv.hpp"
#include "mpifs/engine.hpp"
#include "mpifs/render.hpp"

namespace mpifs {
namespace {

struct Flags {
    std::vector<std::string> positional;
    bool trace = false;
    bool allow_noncontractive = false;
    std::optional<int> threads;
    std::optional<std::vector<double>> seed;
    std::optional<std::vector<double>> phi;
};

std::vector<double> split_numbers(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',') c = ' ';
    std::istringstream ss(cleaned);
    std::string tok;
    while (ss >> tok) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw DomainError(flag + ": expected comma-separated numbers, got '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError(flag + ": expected at least one number");
    return out;
}

Flags parse_flags(const std::vector<std::string>& args, std::size_t from) {
    Flags flags;
    for (std::size_t i = from; i < args.size(); ++i) {
        std::string arg = args[i];
        std::string inline_value;
        bool has_inline = false;
        if (arg.rfind("--", 0) == 0) {
            const std::size_t eq = arg.find('=');
            if (eq != std::string::npos) {
                inline_value = arg.substr(eq + 1);
                arg = arg.substr(0, eq);
                has_inline = true;
            }
        }
        auto next_value = [&](const char* flag) -> std::string {
            if (has_inline) return inline_value;
            if (i + 1 >= args.size()) throw DomainError(std::string(flag) + ": missing value");
            return args[++i];
        };
        if (arg == "--trace")
            flags.trace = true;
        else if (arg == "--allow-noncontractive")
            flags.allow_noncontractive = true;
        else if (arg == "--threads")
            flags.threads = std::stoi(next_value("--threads"));
        else if (arg == "--seed")
            flags.seed = split_numbers(next_value("--seed"), "--seed");
        else if (arg == "--phi")
            flags.phi = split_numbers(next_value("--phi"), "--phi");
        else if (arg.rfind("--", 0) == 0)
            throw DomainError("unknown flag " + arg);
        else
            flags.positional.push_back(arg);
    }
    return flags;
}

void ensure_parent_dir(const std::string& path) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

void write_trace_jsonl(std::ostream& os, const IterationTrace& trace) {
    char buf[96];
    for (std::size_t i = 0; i < trace.support_sizes.size(); ++i) {
        if (i < trace.step_distances.size())
            std::snprintf(buf, sizeof buf, "{\"iter\":%zu,\"support\":%llu,\"residual\":%.9f}\n",
                          i + 1, static_cast<unsigned long long>(trace.support_sizes[i]),
                          trace.step_distances[i]);
        else
            std::snprintf(buf, sizeof buf, "{\"iter\":%zu,\"support\":%llu}\n", i + 1,
                          static_cast<unsigned long long>(trace.support_sizes[i]));
        os << buf;
    }
}

struct Execution {
    RunConfig cfg;
    Box box;
    std::optional<MaxPlusSystem> sys;
    std::optional<Grid> grid;
    double alpha = 0.0;
    double epsilon = 0.0;
    int iterations = 0;
    IterationTrace trace;
};

Execution execute(const std::string& config_path, const Flags& flags, std::ostream& err) {
    Execution ex;
    ex.cfg = parse_config_file(config_path);
    if (flags.threads) ex.cfg.threads = *flags.threads;
    if (flags.seed) ex.cfg.seed = *flags.seed;
    if (flags.allow_noncontractive) ex.cfg.allow_noncontractive = true;
    // Overrides go through the same validation as the file contents.
    ex.cfg = parse_config(emit_config(ex.cfg));

    ex.box = config_box(ex.cfg);
    ex.sys = config_system(ex.cfg);
    ex.grid = config_grid(ex.cfg);
    ex.alpha = ex.cfg.algorithm == Algorithm::gifs ? *ex.cfg.alpha : ex.sys->contraction_factor();
    ex.epsilon = ex.grid ? ex.grid->epsilon() : 0.0;

    if (ex.cfg.iterations) {
        ex.iterations = *ex.cfg.iterations;
    } else {
        const double diameter = ex.cfg.diameter ? *ex.cfg.diameter : ex.box.diagonal();
        const RunPlan plan = ex.grid
                                 ? plan_iterations(*ex.cfg.delta, ex.alpha, diameter, *ex.grid)
                                 : plan_iterations(*ex.cfg.delta, ex.alpha, diameter);
        ex.iterations = plan.iterations;
    }

    const DensityMap seed =
        config_seed(ex.cfg, ex.box, ex.grid ? &*ex.grid : nullptr);
    const RunOptions opts = config_run_options(ex.cfg);
    switch (ex.cfg.algorithm) {
        case Algorithm::determin:
            ex.trace = run_deterministic(*ex.sys, seed, ex.iterations, opts);
            break;
        case Algorithm::discrete:
            ex.trace = run_discrete(*ex.sys, *ex.grid, seed, ex.iterations, opts);
            break;
        case Algorithm::gifs:
            ex.trace = run_gifs(*ex.sys, *ex.grid, seed, ex.iterations, ex.cfg.combine, opts);
            break;
    }
    if (ex.trace.clamped_points > 0)
        err << "warning: " << ex.trace.clamped_points
            << " map images left the box and were clamped to the boundary\n";
    return ex;
}

void write_outputs(const Execution& ex, const Flags& flags, std::ostream& err) {
    if (ex.cfg.pgm) {
        ensure_parent_dir(*ex.cfg.pgm);
        write_pgm_file(*ex.cfg.pgm, render_pgm(ex.trace.final_density,
                                               RenderSpec(ex.cfg.width, ex.cfg.height, ex.box)));
        err << "wrote " << *ex.cfg.pgm << "\n";
    }
    if (ex.cfg.csv) {
        ensure_parent_dir(*ex.cfg.csv);
        std::ofstream out(*ex.cfg.csv, std::ios::binary);
        if (!out) throw IoError("cannot open " + *ex.cfg.csv + " for writing");
        write_density_csv(out, ex.trace.final_density);
        err << "wrote " << *ex.cfg.csv << "\n";
    }
    if (ex.cfg.fuzzy_csv) {
        ensure_parent_dir(*ex.cfg.fuzzy_csv);
        std::ofstream out(*ex.cfg.fuzzy_csv, std::ios::binary);
        if (!out) throw IoError("cannot open " + *ex.cfg.fuzzy_csv + " for writing");
        write_fuzzy_csv(out, theta_forward(ex.trace.final_density, ScaleFunction(ex.cfg.theta_base)));
        err << "wrote " << *ex.cfg.fuzzy_csv << "\n";
    }
    if (ex.cfg.trace) {
        ensure_parent_dir(*ex.cfg.trace);
        std::ofstream out(*ex.cfg.trace, std::ios::binary);
        if (!out) throw IoError("cannot open " + *ex.cfg.trace + " for writing");
        write_trace_jsonl(out, ex.trace);
        err << "wrote " << *ex.cfg.trace << "\n";
    }
    if (flags.trace) write_trace_jsonl(err, ex.trace);
}

int run_render(const Flags& flags, std::ostream&, std::ostream& err) {
    if (flags.positional.size() != 1) throw DomainError("usage: mpifs render <config>");
    const Execution ex = execute(flags.positional[0], flags, err);
    write_outputs(ex, flags, err);
    return 0;
}

int run_eval(const Flags& flags, std::ostream& out, std::ostream& err) {
    if (flags.positional.size() != 1) throw DomainError("usage: mpifs eval <config> --phi a0,a1,...");
    if (!flags.phi) throw DomainError("eval: --phi is required");
    const Execution ex = execute(flags.positional[0], flags, err);
    const std::vector<double>& phi = *flags.phi;
    if (static_cast<int>(phi.size()) != ex.cfg.dim + 1)
        throw DomainError("eval: --phi needs 1 + dim numbers (offset first)");
    Point coeffs(ex.cfg.dim);
    for (int i = 0; i < ex.cfg.dim; ++i) coeffs[i] = phi[i + 1];
    const double value = eval_measure(ex.trace.final_density, AffineFunctional(coeffs, phi[0]));
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f\n", value);
    out << buf;
    return 0;
}

int run_dist(const Flags& flags, std::ostream& out, std::ostream&) {
    if (flags.positional.size() != 2) throw DomainError("usage: mpifs dist <a.csv> <b.csv>");
    const DensityMap a = read_density_csv_file(flags.positional[0]);
    const DensityMap b = read_density_csv_file(flags.positional[1]);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9f\n", dtheta_distance(a, b));
    out << buf;
    return 0;
}

int run_check(const Flags& flags, std::ostream& out, std::ostream& err) {
    if (flags.positional.size() != 1) throw DomainError("usage: mpifs check <config>");
    const Execution ex = execute(flags.positional[0], flags, err);
    const double residual =
        fixed_point_check(ex.trace, *ex.sys, ex.grid ? &*ex.grid : nullptr, ex.cfg.combine,
                          config_run_options(ex.cfg));
    char buf[64];
    std::snprintf(buf, sizeof buf, "alpha_S = %.9f\n", ex.alpha);
    out << buf;
    std::snprintf(buf, sizeof buf, "epsilon = %.9f\n", ex.epsilon);
    out << buf;
    std::snprintf(buf, sizeof buf, "N = %d\n", ex.iterations);
    out << buf;
    std::snprintf(buf, sizeof buf, "residual = %.9f\n", residual);
    out << buf;
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.empty()) {
            err << "usage: mpifs <render|eval|dist|check> ...\n";
            return 1;
        }
        const std::string& cmd = args[0];
        const Flags flags = parse_flags(args, 1);
        if (cmd == "render") return run_render(flags, out, err);
        if (cmd == "eval") return run_eval(flags, out, err);
        if (cmd == "dist") return run_dist(flags, out, err);
        if (cmd == "check") return run_check(flags, out, err);
        err << "error: unknown subcommand '" << cmd << "'\n";
        return 1;
    } catch (const ResourceLimitError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mpifs
