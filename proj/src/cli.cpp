/**
 * @file cli.cpp
 * @brief Subcommand wiring and byte-stable output rendering.
 */

#include "packdim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "packdim/dimension.hpp"
#include "packdim/packing.hpp"
#include "packdim/verify.hpp"

namespace packdim {

namespace {

/// Shortest round-trippable decimal; non-finite values use fixed spellings
/// so output never depends on the C library.
std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_number(double v) {
    if (std::isnan(v) || std::isinf(v)) return "\"" + fmt17(v) + "\"";
    return fmt17(v);
}

/// One output column; text feeds human and csv rows, json feeds jsonl.
struct Cell {
    std::string key;
    std::string text;
    std::string json;
};

using Row = std::vector<Cell>;

Cell num_cell(const char* key, double v) { return {key, fmt17(v), json_number(v)}; }

Cell int_cell(const char* key, long long v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%lld", v);
    return {key, buf, buf};
}

Cell u64_cell(const char* key, std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return {key, buf, buf};
}

Cell str_cell(const char* key, const std::string& s) { return {key, s, "\"" + s + "\""}; }

Cell bool_cell(const char* key, bool v) {
    const char* s = v ? "true" : "false";
    return {key, s, s};
}

void render_rows(std::string& out, const std::vector<Row>& rows,
                 const std::string& format) {
    if (format == "csv") {
        if (!rows.empty()) {
            for (std::size_t i = 0; i < rows[0].size(); ++i) {
                if (i) out += ',';
                out += rows[0][i].key;
            }
            out += '\n';
        }
        for (const Row& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                out += r[i].text;
            }
            out += '\n';
        }
    } else if (format == "jsonl") {
        for (const Row& r : rows) {
            out += '{';
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                out += '"';
                out += r[i].key;
                out += "\":";
                out += r[i].json;
            }
            out += "}\n";
        }
    } else {
        for (const Row& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ' ';
                out += r[i].key;
                out += '=';
                out += r[i].text;
            }
            out += '\n';
        }
    }
}

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty()) {
        std::fwrite(data.data(), 1, data.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    std::fwrite(data.data(), 1, data.size(), f);
    std::fclose(f);
}

SearchOptions opts_from(const RunConfig& cfg) {
    SearchOptions o;
    o.generation = cfg.generation;
    o.radii_per_center = cfg.radii;
    o.max_depth = cfg.max_depth;
    o.tol = cfg.tol >= 0.0 ? cfg.tol : kDefaultMeasureTol;
    o.enumeration_cap = cfg.cap;
    o.certify_budget = cfg.budget;
    o.threads = cfg.threads;
    o.n_stride = cfg.n_stride;
    o.n_geometric = cfg.n_geometric;
    if (o.n_geometric && o.n_stride < 2) o.n_stride = 2;
    return o;
}

Row estimate_row(const PackingEstimate& e) {
    return {int_cell("n", e.n),
            num_cell("h", e.h),
            num_cell("dmin_upper", e.dmin_upper),
            num_cell("dmin_lower", e.dmin_lower),
            num_cell("packing_lower", e.packing_lower),
            num_cell("packing_upper", e.packing_upper),
            num_cell("witness_center", e.witness.center),
            num_cell("witness_radius", e.witness.radius)};
}

}  // namespace

int run(const RunConfig& requested) {
    RunConfig cfg = requested;
    if (cfg.format == "json-lines") cfg.format = "jsonl";
    if (cfg.format != "human" && cfg.format != "csv" && cfg.format != "jsonl") {
        throw std::invalid_argument("run: unknown format '" + cfg.format + "'");
    }
    std::string out;
    if (cfg.timestamp) {
        const std::string ts = iso_now();
        if (cfg.format == "jsonl") {
            out += "{\"generated\":\"" + ts + "\"}\n";
        } else {
            out += "# generated " + ts + "\n";
        }
    }

    int code = 0;
    std::vector<Row> rows;
    if (cfg.command == "dimension") {
        const IfsSystem s = make_gauss_linear_ifs(cfg.n);
        const double tol = cfg.tol >= 0.0 ? cfg.tol : 1e-14;
        const DimensionResult d = solve_dimension(s, tol);
        rows.push_back({int_cell("n", cfg.n), num_cell("h", d.h),
                        num_cell("residual", d.residual), int_cell("iterations", d.iterations),
                        num_cell("tolerance", d.tolerance)});
    } else if (cfg.command == "measure" || cfg.command == "density") {
        const IfsSystem s = make_gauss_linear_ifs(cfg.n);
        const double h = solve_dimension(s).h;
        const MeasureEvaluator ev(s, h);
        const double tol = cfg.tol >= 0.0 ? cfg.tol : kDefaultMeasureTol;
        const Interval a{cfg.interval_left, cfg.interval_right};
        Row row{int_cell("n", cfg.n), num_cell("h", h), num_cell("left", a.left),
                num_cell("right", a.right)};
        if (cfg.command == "measure") {
            const MeasureBound m = ev.measure(a, cfg.max_depth, tol);
            row.push_back(num_cell("mass_lower", m.lower));
            row.push_back(num_cell("mass_upper", m.upper));
            row.push_back(int_cell("depth_used", m.depth_used));
            row.push_back(num_cell("unresolved", m.unresolved));
        } else {
            const DensityRecord d = ev.density(a, cfg.max_depth, tol);
            row.push_back(num_cell("mass_lower", d.mass.lower));
            row.push_back(num_cell("mass_upper", d.mass.upper));
            row.push_back(int_cell("depth_used", d.mass.depth_used));
            row.push_back(num_cell("unresolved", d.mass.unresolved));
            row.push_back(num_cell("density_lower", d.density_lower));
            row.push_back(num_cell("density_upper", d.density_upper));
        }
        rows.push_back(std::move(row));
    } else if (cfg.command == "dmin") {
        rows.push_back(estimate_row(packing_estimate(cfg.n, opts_from(cfg))));
    } else if (cfg.command == "sweep") {
        for (const PackingEstimate& e : sweep(cfg.n_min, cfg.n_max, opts_from(cfg))) {
            rows.push_back(estimate_row(e));
        }
    } else if (cfg.command == "verify") {
        const IfsSystem s = make_gauss_linear_ifs(cfg.n);
        const double h = solve_dimension(s).h;
        for (const SuiteReport& r :
             run_verify_suites(s, h, cfg.suite, cfg.samples, cfg.seed)) {
            rows.push_back({str_cell("suite", r.suite), int_cell("n", r.n),
                            int_cell("samples", r.samples), u64_cell("seed", r.seed),
                            u64_cell("violations", r.violations),
                            num_cell("worst_margin", r.worst_margin),
                            bool_cell("pass", r.pass)});
            if (!r.pass) code = 3;
        }
    } else {
        throw std::invalid_argument("run: unknown command '" + cfg.command + "'");
    }

    render_rows(out, rows, cfg.format);
    if (cfg.command == "sweep" && cfg.format == "human") {
        out += "# asymptotic reference: limit = 2\n";
    }
    write_output(cfg.output_path, out);
    return code;
}

int main_entry(int argc, const char* const* argv) {
    RunConfig cfg;
    std::vector<double> interval_values;
    CLI::App app{"density and packing estimates for the linear split-interval system"};
    app.require_subcommand(1);

    auto add_output_options = [&](CLI::App* c) {
        c->add_option("--out", cfg.output_path, "write to this file instead of stdout");
        c->add_option("--format", cfg.format, "output format: human, csv, jsonl")
            ->check(CLI::IsMember({"human", "csv", "jsonl", "json-lines"}));
        c->add_flag("--timestamp,!--no-timestamp", cfg.timestamp,
                    "emit the generation timestamp line (default on)");
    };
    auto add_search_options = [&](CLI::App* c) {
        c->add_option("--gen", cfg.generation, "candidate center generation depth");
        c->add_option("--radii", cfg.radii, "radius grid points per center");
        c->add_option("--depth", cfg.max_depth, "mass recursion depth cap");
        c->add_option("--tol", cfg.tol, "mass tolerance (default when negative)");
        c->add_option("--cap", cfg.cap, "enumeration cap on candidate words");
        c->add_option("--budget", cfg.budget, "box budget for the certified lower side");
        c->add_option("--threads", cfg.threads, "worker threads (0 reads PACKDIM_THREADS)");
    };

    CLI::App* dim = app.add_subcommand("dimension", "solve the branch exponent equation");
    dim->add_option("--n", cfg.n, "branch count");
    dim->add_option("--tol", cfg.tol, "residual tolerance (default 1e-14)");
    add_output_options(dim);
    dim->callback([&] { cfg.command = "dimension"; });

    CLI::App* mea = app.add_subcommand("measure", "mass enclosure of an interval");
    mea->add_option("--n", cfg.n, "branch count");
    mea->add_option("--interval", interval_values, "interval endpoints: left right")
        ->delimiter(',')
        ->expected(2)
        ->required();
    mea->add_option("--depth", cfg.max_depth, "recursion depth cap");
    mea->add_option("--tol", cfg.tol, "mass tolerance (default when negative)");
    add_output_options(mea);
    mea->callback([&] {
        cfg.command = "measure";
        cfg.interval_left = interval_values[0];
        cfg.interval_right = interval_values[1];
    });

    CLI::App* den =
        app.add_subcommand("density", "mass and density enclosures of an interval");
    den->add_option("--n", cfg.n, "branch count");
    den->add_option("--interval", interval_values, "interval endpoints: left right")
        ->delimiter(',')
        ->expected(2)
        ->required();
    den->add_option("--depth", cfg.max_depth, "recursion depth cap");
    den->add_option("--tol", cfg.tol, "mass tolerance (default when negative)");
    add_output_options(den);
    den->callback([&] {
        cfg.command = "density";
        cfg.interval_left = interval_values[0];
        cfg.interval_right = interval_values[1];
    });

    CLI::App* dmn =
        app.add_subcommand("dmin", "two-sided minimal density estimate for one n");
    dmn->add_option("--n", cfg.n, "branch count");
    add_search_options(dmn);
    add_output_options(dmn);
    dmn->callback([&] { cfg.command = "dmin"; });

    CLI::App* swp = app.add_subcommand("sweep", "dmin estimates over a range of n");
    swp->add_option("--n-min", cfg.n_min, "smallest branch count");
    swp->add_option("--n-max", cfg.n_max, "largest branch count");
    swp->add_option("--stride", cfg.n_stride, "step between branch counts");
    swp->add_flag("--geometric", cfg.n_geometric, "multiply by stride instead of adding");
    add_search_options(swp);
    add_output_options(swp);
    swp->callback([&] { cfg.command = "sweep"; });

    CLI::App* ver = app.add_subcommand("verify", "run the density bound suites");
    ver->add_option("--n", cfg.n, "branch count");
    ver->add_option("--suite", cfg.suite, "suite name, or all");
    ver->add_option("--samples", cfg.samples, "random samples per suite");
    ver->add_option("--seed", cfg.seed, "random seed");
    add_output_options(ver);
    ver->callback([&] { cfg.command = "verify"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int parse_code = app.exit(e);
        return parse_code == 0 ? 0 : 1;
    }
    try {
        return run(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace packdim
