#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rqm/acceptance.hpp"
#include "rqm/atlas.hpp"
#include "rqm/bones.hpp"
#include "rqm/entropy.hpp"
#include "rqm/errors.hpp"
#include "rqm/family.hpp"
#include "rqm/json.hpp"
#include "rqm/report.hpp"

namespace {

enum Exit { ok = 0, usage = 2, numerical = 3, acceptance = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to the named file, or to standard output for "-".
void emit(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file " + path);
    out << text;
}

void add_window(CLI::App* app, rqm::Window& w)
{
    app->add_option("--v1-min", w.v1_min, "window lower bound in v1")->capture_default_str();
    app->add_option("--v1-max", w.v1_max, "window upper bound in v1")->capture_default_str();
    app->add_option("--v2-min", w.v2_min, "window lower bound in v2")->capture_default_str();
    app->add_option("--v2-max", w.v2_max, "window upper bound in v2")->capture_default_str();
}

void check_window(const rqm::Window& w)
{
    if (!(w.v1_min < w.v1_max)) throw UsageError("--v1-min must be below --v1-max");
    if (!(w.v2_min < w.v2_max)) throw UsageError("--v2-min must be below --v2-max");
}

void positive(double x, const char* flag)
{
    if (!(x > 0.0)) throw UsageError(std::string(flag) + " must be positive");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Real quadratic rational maps: entropy, bones, PCF parameters and the isentrope atlas"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file of defaults; flags on the command line win");
    int workers = 1;
    app.add_option("--workers", workers, "worker threads (never changes the output)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.fallthrough();

    // entropy
    auto* ent = app.add_subcommand("entropy", "real entropy of one map, as JSON on standard output");
    std::optional<double> mu, t, a, b, v1, v2;
    rqm::EntropyOptions eopts;
    ent->add_option("--mu", mu, "normal form multiplier mu");
    ent->add_option("--t", t, "normal form parameter t");
    ent->add_option("--a", a, "coefficient a of a(z+1/z)+b");
    ent->add_option("--b", b, "coefficient b of a(z+1/z)+b");
    ent->add_option("--v1", v1, "critical value f(-1)");
    ent->add_option("--v2", v2, "critical value f(+1)");
    ent->add_option("--n-max", eopts.n_max, "maximum lap depth")->capture_default_str();
    ent->add_option("--tol", eopts.tol, "convergence tolerance")->capture_default_str();

    // grid
    auto* grid = app.add_subcommand("grid", "entropy atlas over a (mu,t) window");
    rqm::GridSpec gs;
    std::string csv_path = "grid.csv", svg_path, conn_path;
    double conn_tol = 2e-3;
    grid->add_option("--mu-min", gs.mu_min)->capture_default_str();
    grid->add_option("--mu-max", gs.mu_max)->capture_default_str();
    grid->add_option("--t-min", gs.t_min)->capture_default_str();
    grid->add_option("--t-max", gs.t_max)->capture_default_str();
    grid->add_option("--nx", gs.nx)->check(CLI::PositiveNumber)->capture_default_str();
    grid->add_option("--ny", gs.ny)->check(CLI::PositiveNumber)->capture_default_str();
    grid->add_option("--csv", csv_path, "CSV output, - for standard output")->capture_default_str();
    grid->add_option("--svg", svg_path, "optional SVG output");
    grid->add_option("--connectivity", conn_path, "optional connectivity JSON output");
    grid->add_option("--boundary-tol", conn_tol, "band-edge exclusion tolerance")->capture_default_str();

    // bones
    auto* bones = app.add_subcommand("bones", "trace the period-n bones in a (v1,v2) window");
    rqm::Window bwin;
    int bone_n = 0;
    std::string bones_out = "-";
    bones->add_option("--n", bone_n, "period of the essential critical point")->required()->check(CLI::PositiveNumber);
    add_window(bones, bwin);
    bones->add_option("--out", bones_out, "JSON output, - for standard output")->capture_default_str();

    // pcf
    auto* pcf = app.add_subcommand("pcf", "locate PCF parameters with transversality quotients");
    rqm::Window pwin;
    rqm::ScanOptions so;
    std::string pcf_out = "-";
    add_window(pcf, pwin);
    pcf->add_option("--n-max", so.n_max)->check(CLI::PositiveNumber)->capture_default_str();
    pcf->add_option("--m-max", so.m_max)->check(CLI::PositiveNumber)->capture_default_str();
    pcf->add_option("--nx", so.nx, "seed grid columns")->check(CLI::PositiveNumber)->capture_default_str();
    pcf->add_option("--ny", so.ny, "seed grid rows")->check(CLI::PositiveNumber)->capture_default_str();
    pcf->add_option("--out", pcf_out, "JSON output, - for standard output")->capture_default_str();

    // check
    auto* chk = app.add_subcommand("check", "run the acceptance battery");
    rqm::AcceptanceOptions aopts;
    chk->add_option("--grid", aopts.grid, "atlas resolution")->check(CLI::PositiveNumber)->capture_default_str();
    chk->add_option("--repeat-workers", aopts.repeat_workers, "worker count of the determinism rerun")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    chk->add_option("--artifacts", aopts.artifact_dir, "directory for the generated artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*ent) {
            positive(eopts.tol, "--tol");
            if (eopts.n_max < eopts.window + 1) throw UsageError("--n-max must exceed 5");
            const int given = (mu || t ? 1 : 0) + (a || b ? 1 : 0) + (v1 || v2 ? 1 : 0);
            if (given != 1) throw UsageError("give exactly one of --mu/--t, --a/--b, --v1/--v2");
            rqm::EntropyEstimate e;
            if (mu || t) {
                if (!mu || !t) throw UsageError(mu ? "--t is required with --mu" : "--mu is required with --t");
                e = rqm::entropy_lap(rqm::interval_model(rqm::normal_form_to_map({*mu, *t})), eopts);
            } else if (a || b) {
                if (!a || !b) throw UsageError(a ? "--b is required with --a" : "--a is required with --b");
                e = rqm::real_entropy(rqm::QuadraticMap(*a, *b), eopts);
            } else {
                if (!v1 || !v2) throw UsageError(v1 ? "--v2 is required with --v1" : "--v1 is required with --v2");
                e = rqm::real_entropy(rqm::map_from_critical_values({*v1, *v2}), eopts);
            }
            std::ostringstream os;
            rqm::JsonWriter js(os);
            rqm::write_json(js, e);
            std::cout << os.str();
            return e.converged ? ok : numerical;
        }
        if (*grid) {
            if (!(gs.mu_min < gs.mu_max)) throw UsageError("--mu-min must be below --mu-max");
            if (!(gs.t_min < gs.t_max)) throw UsageError("--t-min must be below --t-max");
            positive(conn_tol, "--boundary-tol");
            gs.workers = workers;
            const rqm::EntropyGrid g = rqm::entropy_grid(gs);
            std::ostringstream csv;
            rqm::write_csv(csv, g);
            emit(csv_path, csv.str());
            if (!svg_path.empty()) {
                std::ostringstream svg;
                rqm::write_svg(svg, g);
                emit(svg_path, svg.str());
            }
            if (!conn_path.empty()) {
                std::ostringstream conn;
                rqm::write_connectivity_json(conn, rqm::band_connectivity(g, conn_tol));
                emit(conn_path, conn.str());
            }
            return ok;
        }
        if (*bones) {
            check_window(bwin);
            rqm::ScanOptions seeds_scan;
            seeds_scan.n_max = bone_n;
            seeds_scan.workers = workers;
            std::vector<rqm::CriticalValuePair> seeds;
            for (const rqm::PCFPoint& p : rqm::scan_pcf(bwin, seeds_scan))
                if (p.n == bone_n) seeds.push_back(p.v);
            const auto extra = rqm::bone_seeds(bone_n, bwin);
            seeds.insert(seeds.end(), extra.begin(), extra.end());
            std::ostringstream os;
            rqm::write_bones_json(os, bwin, rqm::trace_bones(bone_n, seeds, bwin));
            emit(bones_out, os.str());
            return ok;
        }
        if (*pcf) {
            check_window(pwin);
            so.workers = workers;
            std::ostringstream os;
            rqm::write_pcf_json(os, pwin, rqm::scan_pcf(pwin, so));
            emit(pcf_out, os.str());
            return ok;
        }
        if (*chk) {
            aopts.workers = workers;
            bool pass = true;
            rqm::run_acceptance(aopts, [&](const rqm::CriterionResult& r) {
                std::cout << rqm::format_result(r) << std::endl;
                pass = pass && r.pass;
            });
            return pass ? ok : acceptance;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const rqm::DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const rqm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return numerical;
    }
    return usage;
}
