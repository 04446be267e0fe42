#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brf/core.hpp"
#include "brf/detail/format.hpp"
#include "brf/estimation.hpp"
#include "brf/numeric_pdf.hpp"
#include "brf/sampling.hpp"
#include "brf/special_functions.hpp"
#include "brf/stats.hpp"

namespace brf::cli {

using json = nlohmann::ordered_json;

namespace detail {

using brf::detail::format_double;
using brf::detail::parse_double;

/// Newline-delimited numbers from a file or stdin ("-"). Unparsable lines
/// are counted; more than 1% of them aborts the run.
inline std::vector<double> read_numbers(const std::string& path, std::istream& stdin_stream) {
    std::ifstream file;
    std::istream* in = &stdin_stream;
    if (path != "-") {
        file.open(path);
        if (!file) throw DataError("cannot open input file: " + path);
        in = &file;
    }
    std::vector<double> values;
    std::size_t bad = 0, lines = 0;
    std::string line;
    while (std::getline(*in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++lines;
        double v;
        if (parse_double(line, v))
            values.push_back(v);
        else
            ++bad;
    }
    if (bad > 0 && 100 * bad > lines)
        throw DataError(std::to_string(bad) + " of " + std::to_string(lines) +
                        " lines failed to parse (>1%)");
    return values;
}

inline json params_json(const BrfParams& p) {
    return json{{"A", p.scale}, {"a", p.a}, {"b", p.b}};
}

inline json log_stats_json(const LogStats& s) {
    json j{{"mean", s.mean}, {"variance", s.variance}, {"median", s.median}};
    j["mode"] = s.mode ? json(*s.mode) : json(nullptr);
    j["partition_left"] = s.partition_left ? json(*s.partition_left) : json(nullptr);
    j["partition_right"] = s.partition_right ? json(*s.partition_right) : json(nullptr);
    return j;
}

inline const char* shape_name(Shape s) {
    switch (s) {
        case Shape::OneSidedPowerLaw: return "one_sided_power_law";
        case Shape::LognormalLike: return "lognormal_like";
        case Shape::TwoSidedBrf: return "two_sided_brf";
        default: return "insufficient";
    }
}

inline const char* method_name(FitMethod m) {
    switch (m) {
        case FitMethod::Moments: return "moments";
        case FitMethod::MomentsJackknife: return "moments_jackknife";
        case FitMethod::Tails: return "tails";
        default: return "rank_regression";
    }
}

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int npts = 0;
};

inline GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    std::istringstream ss(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    double np = 0;
    if (parts.size() != 3 || !parse_double(parts[0], g.lo) || !parse_double(parts[1], g.hi) ||
        !parse_double(parts[2], np) || np < 1 || np != std::floor(np) ||
        !(g.hi > g.lo || (np == 1 && g.hi == g.lo)))
        throw CLI::ValidationError("--grid expects min:max:npts with max > min");
    g.npts = static_cast<int>(np);
    return g;
}

inline std::vector<double> grid_points(const GridSpec& g) {
    std::vector<double> pts(static_cast<std::size_t>(g.npts));
    if (g.npts == 1) {
        pts[0] = g.lo;
        return pts;
    }
    for (int i = 0; i < g.npts; ++i)
        pts[static_cast<std::size_t>(i)] = g.lo + (g.hi - g.lo) * i / (g.npts - 1);
    return pts;
}

struct SummaryStats {
    std::size_t n;
    double min, max, mean, var;
};

inline SummaryStats summarize(std::span<const double> z) {
    SummaryStats s{z.size(), z[0], z[0], 0.0, 0.0};
    for (double v : z) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        s.mean += v;
    }
    s.mean /= static_cast<double>(s.n);
    for (double v : z) s.var += (v - s.mean) * (v - s.mean);
    s.var /= static_cast<double>(s.n);
    return s;
}

inline json fit_report(const FitResult& fit, const SummaryStats& in) {
    json j;
    j["method"] = method_name(fit.method);
    j["params"] = params_json(fit.params);
    j["input"] = json{{"n", in.n}, {"min", in.min}, {"max", in.max},
                      {"mean_z", in.mean}, {"var_z", in.var}};
    json d;
    if (const auto* m = std::get_if<MomentsDiagnostics>(&fit.diagnostics)) {
        d["mean_z"] = m->mean_z;
        d["var_z"] = m->var_z;
        d["discriminant"] = m->discriminant;
        d["clamped_a"] = m->clamped_a;
        d["clamped_b"] = m->clamped_b;
        if (m->raw_a) {
            d["raw_a"] = *m->raw_a;
            d["raw_b"] = *m->raw_b;
            d["jackknife_se_a"] = *m->jackknife_se_a;
            d["jackknife_se_b"] = *m->jackknife_se_b;
        }
    } else if (const auto* t = std::get_if<TailsDiagnostics>(&fit.diagnostics)) {
        d = json{{"slope_left", t->slope_left},         {"slope_right", t->slope_right},
                 {"intercept_left", t->intercept_left}, {"intercept_right", t->intercept_right},
                 {"r2_left", t->r2_left},               {"r2_right", t->r2_right},
                 {"bins_left", t->bins_left},           {"bins_right", t->bins_right},
                 {"z_low", t->z_low},                   {"z_high", t->z_high}};
    } else if (const auto* r = std::get_if<RankDiagnostics>(&fit.diagnostics)) {
        d = json{{"intercept", r->intercept},
                 {"residual_rms", r->residual_rms},
                 {"n", r->n},
                 {"ties", r->ties}};
    }
    j["diagnostics"] = d;
    j["implied_log_stats"] =
        fit.params.degenerate() ? json(nullptr) : log_stats_json(z_stats(fit.params));
    return j;
}

}  // namespace detail

/// Run one command. `args` excludes the program name. Exit codes:
/// 0 success, 1 usage, 2 data error, 3 numerical failure.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& stdout_stream,
               std::ostream& err) {
    using detail::format_double;

    CLI::App app{"Beta rank function distributions: sampling, densities, statistics, fitting"};
    app.name("brf");
    app.require_subcommand(1);
    app.fallthrough();

    std::string output_path;
    app.add_option("-o,--output", output_path, "write results to a file instead of stdout");

    struct {
        double A = 1.0, a = 0.0, b = 0.0;
        std::uint64_t n = 0, seed = 0;
        double u = 0.5;
        std::string grid, space = "z", input, method;
        double tol = 1e-12, step = 0.0, qlow = 0.1, qhigh = 0.9, prescale = 0.0;
        int bins = 100;
        bool tails = false, log_input = false;
    } opt;

    const auto add_params = [&](CLI::App* cmd) {
        cmd->add_option("-A,--scale", opt.A, "scale parameter A")->required();
        cmd->add_option("-a", opt.a, "right-tail exponent a")->required();
        cmd->add_option("-b", opt.b, "left-tail exponent b")->required();
    };
    const auto add_numeric = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opt.tol, "root-finding tolerance on u");
        cmd->add_option("--step", opt.step, "stencil step (0 = automatic)");
    };

    auto* sample = app.add_subcommand("sample", "draw values, one per line");
    add_params(sample);
    sample->add_option("-n", opt.n, "number of draws")->required();
    sample->add_option("--seed", opt.seed, "generator seed")->required();

    auto* pdf = app.add_subcommand("pdf", "numerically reconstructed density on a grid (TSV)");
    auto* cdfc = app.add_subcommand("cdf", "numerically inverted cdf on a grid (TSV)");
    for (auto* cmd : {pdf, cdfc}) {
        add_params(cmd);
        cmd->add_option("--grid", opt.grid, "grid as min:max:npts")->required();
        cmd->add_option("--space", opt.space, "abscissa space: x or z")
            ->check(CLI::IsMember({"x", "z"}));
        add_numeric(cmd);
    }
    pdf->add_flag("--tails", opt.tails, "append exponential tail approximant columns");

    auto* quant = app.add_subcommand("quantile", "rank-size value x(u)");
    add_params(quant);
    quant->add_option("-u", opt.u, "normalized rank in (0, 1]")->required();

    auto* stats = app.add_subcommand("stats", "analytic statistics as JSON");
    add_params(stats);

    auto* fit = app.add_subcommand("fit", "estimate (A, a, b) from data");
    fit->add_option("--method", opt.method, "moments | moments-jackknife | tails | rank")
        ->required()
        ->check(CLI::IsMember({"moments", "moments-jackknife", "tails", "rank"}));
    fit->add_option("--bins", opt.bins, "histogram bins (tails method)");
    fit->add_option("--qlow", opt.qlow, "left tail quantile");
    fit->add_option("--qhigh", opt.qhigh, "right tail quantile");
    fit->add_flag("--log-input", opt.log_input, "input is already log-transformed");
    fit->add_option("--prescale", opt.prescale, "divide data by this scale before fitting");
    fit->add_option("input", opt.input, "input file ('-' for stdin)")->required();

    auto* hist = app.add_subcommand("hist", "log-space histogram (TSV)");
    hist->add_option("--bins", opt.bins, "number of bins");
    hist->add_flag("--log-input", opt.log_input, "input is already log-transformed");
    hist->add_option("input", opt.input, "input file ('-' for stdin)")->required();

    auto* classify = app.add_subcommand("classify", "histogram shape classification as JSON");
    classify->add_option("--bins", opt.bins, "number of bins");
    classify->add_flag("--log-input", opt.log_input, "input is already log-transformed");
    classify->add_option("input", opt.input, "input file ('-' for stdin)")->required();

    auto* returns = app.add_subcommand("returns", "log-returns of a price series");
    returns->add_option("input", opt.input, "price file ('-' for stdin)")->required();

    std::ofstream out_file;
    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);

        if (!output_path.empty() && output_path != "-") {
            out_file.open(output_path);
            if (!out_file) throw DataError("cannot open output file: " + output_path);
        }
        std::ostream& out = out_file.is_open() ? out_file : stdout_stream;

        if (sample->parsed()) {
            const auto set = sample_x(BrfParams(opt.A, opt.a, opt.b), opt.n, opt.seed);
            for (double v : set.values) out << format_double(v) << '\n';
            return 0;
        }

        if (pdf->parsed() || cdfc->parsed()) {
            const BrfParams params(opt.A, opt.a, opt.b);
            const NumericConfig cfg(opt.tol, opt.step);
            const auto grid = detail::parse_grid(opt.grid);
            const bool zspace = opt.space == "z";
            if (!zspace && !(grid.lo > 0.0))
                throw CLI::ValidationError("--grid in x space must start above 0");
            const auto pts = detail::grid_points(grid);
            const char* axis = zspace ? "z" : "x";
            if (cdfc->parsed()) {
                out << "# " << axis << "\tcdf\n";
                for (double p : pts) {
                    const double x = zspace ? std::exp(p) : p;
                    double f = 0.0;  // saturate where exp(z) leaves double range
                    if (!std::isfinite(x))
                        f = 1.0;
                    else if (x > 0.0)
                        f = numeric_cdf(params, x, cfg);
                    out << format_double(p) << '\t' << format_double(f) << '\n';
                }
                return 0;
            }
            auto g = pdf_grid(params, pts, cfg, zspace ? GridSpace::Z : GridSpace::X);
            out << "# " << axis << "\tdensity";
            if (opt.tails) out << "\tleft_tail\tright_tail";
            out << '\n';
            for (std::size_t i = 0; i < g.abscissae.size(); ++i) {
                out << format_double(g.abscissae[i]) << '\t' << format_double(g.densities[i]);
                if (opt.tails) {
                    const double z = zspace ? g.abscissae[i] : std::log(g.abscissae[i]);
                    const double div = zspace ? 1.0 : g.abscissae[i];
                    const double lt = params.b > 0.0
                        ? tail_density_z(params, z, TailSide::Left) / div
                        : std::numeric_limits<double>::quiet_NaN();
                    const double rt = params.a > 0.0
                        ? tail_density_z(params, z, TailSide::Right) / div
                        : std::numeric_limits<double>::quiet_NaN();
                    out << '\t' << format_double(lt) << '\t' << format_double(rt);
                }
                out << '\n';
            }
            return 0;
        }

        if (quant->parsed()) {
            out << format_double(rank_size(BrfParams(opt.A, opt.a, opt.b), opt.u)) << '\n';
            return 0;
        }

        if (stats->parsed()) {
            const BrfParams params(opt.A, opt.a, opt.b);
            json j;
            j["params"] = detail::params_json(params);
            j["log_stats"] = detail::log_stats_json(z_stats(params));
            const auto xm = x_mode(params);
            j["x_mode"] = json{{"at_boundary", xm.at_boundary},
                               {"u0", xm.u0 ? json(*xm.u0) : json(nullptr)},
                               {"x0", xm.x0 ? json(*xm.x0) : json(nullptr)}};
            j["x_median"] = x_median(params);
            json moments = json::array();
            for (int n = 1; n <= 4; ++n) {
                const double m = raw_moment_x(params, n);
                const bool finite = std::isfinite(m);
                moments.push_back(json{{"n", n}, {"finite", finite},
                                       {"value", finite ? json(m) : json(nullptr)}});
            }
            j["raw_moments"] = moments;
            out << j.dump(2) << '\n';
            return 0;
        }

        if (fit->parsed()) {
            auto values = detail::read_numbers(opt.input, in);
            if (values.empty()) throw DataError("no values in input");
            const bool rank = opt.method == "rank";
            if (rank && opt.log_input)
                throw CLI::ValidationError("--log-input: rank regression expects raw values");
            if (opt.prescale != 0.0) {
                if (!(opt.prescale > 0.0))
                    throw CLI::ValidationError("--prescale must be positive");
                for (double& v : values)
                    v = opt.log_input ? v - std::log(opt.prescale) : v / opt.prescale;
            }

            FitResult result = [&] {
                if (rank) return fit_rank(values);
                const auto z = brf::detail::to_log_space(values, opt.log_input);
                if (opt.method == "tails")
                    return fit_tails(log_histogram(z, opt.bins, true), opt.qlow, opt.qhigh);
                return fit_moments(z, opt.method == "moments-jackknife");
            }();

            const auto z = brf::detail::to_log_space(values, opt.log_input && !rank);
            out << detail::fit_report(result, detail::summarize(z)).dump(2) << '\n';
            return 0;
        }

        if (hist->parsed() || classify->parsed()) {
            const auto values = detail::read_numbers(opt.input, in);
            if (values.empty()) throw DataError("no values in input");
            const auto h = log_histogram(values, opt.bins, opt.log_input);
            if (hist->parsed()) {
                out << "# center_z\tcount\tdensity\n";
                for (std::size_t i = 0; i < h.bins(); ++i)
                    out << format_double(h.center(i)) << '\t' << h.counts[i] << '\t'
                        << format_double(h.density[i]) << '\n';
                return 0;
            }
            const auto cls = classify_shape(h);
            json j;
            j["shape"] = detail::shape_name(cls.variant);
            const auto& ev = cls.evidence;
            j["evidence"] = json{{"peak_position_fraction", ev.peak_position_fraction},
                                 {"bins_left", ev.bins_left},
                                 {"bins_right", ev.bins_right},
                                 {"slope_left", ev.slope_left},
                                 {"slope_right", ev.slope_right},
                                 {"r2_left", ev.r2_left},
                                 {"r2_right", ev.r2_right},
                                 {"curvature_gain_left", ev.curvature_gain_left},
                                 {"curvature_gain_right", ev.curvature_gain_right}};
            out << j.dump(2) << '\n';
            return 0;
        }

        if (returns->parsed()) {
            const auto prices = detail::read_numbers(opt.input, in);
            for (double r : log_returns(prices)) out << format_double(r) << '\n';
            return 0;
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, stdout_stream, err);
    } catch (const CLI::ParseError& e) {
        err << "brf: error: usage: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        err << "brf: error: data: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        err << "brf: error: numeric: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceError& e) {
        err << "brf: error: numeric: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        err << "brf: error: usage: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "brf: error: numeric: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace brf::cli
