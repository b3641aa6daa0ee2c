#include "rqm/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rqm/atlas.hpp"
#include "rqm/entropy.hpp"
#include "rqm/errors.hpp"
#include "rqm/report.hpp"

namespace rqm {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double golden_entropy() { return std::log((1.0 + std::sqrt(5.0)) / 2.0); }

// Period-3 superattracting parameter of r x (1 - x): the critical orbit returns to 1/2.
double logistic_period3()
{
    auto g = [](double r) {
        double x = 0.5;
        for (int i = 0; i < 3; ++i) x = r * x * (1.0 - x);
        return x - 0.5;
    };
    double lo = 3.82, hi = 3.84;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) > 0.0) == (g(lo) > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

CriterionResult criterion1()
{
    CriterionResult r{1, "entropy oracle agreement", true, "", 0.0};
    std::ostringstream d;
    IntervalModel full{0.0, 1.0, [](double x) { return 4.0 * x * (1.0 - x); }, {0.5}};
    const auto laps = lap_sequence(full, 19, 1e6);
    bool exact = laps.size() == 19;
    for (std::size_t i = 0; i < laps.size(); ++i) exact = exact && laps[i] == std::ldexp(1.0, static_cast<int>(i) + 1);
    const double h_full = entropy_lap(full).value;
    r.pass = exact && std::fabs(h_full - std::log(2.0)) <= 1e-3;
    d << "4x(1-x): laps 2^n " << (exact ? "exact" : "WRONG") << ", h=" << fmt("%.6f", h_full);

    const double rr = logistic_period3();
    IntervalModel logistic{0.0, 1.0, [rr](double x) { return rr * x * (1.0 - x); }, {0.5}};
    const double h_lap = entropy_lap(logistic).value;
    const auto cycle = critical_cycle(logistic);
    double h_markov = NAN;
    if (cycle) h_markov = entropy_markov(markov_partition(logistic, *cycle)).value;
    r.pass = r.pass && std::fabs(h_lap - golden_entropy()) <= 1e-3 && std::fabs(h_markov - golden_entropy()) <= 1e-3;
    d << "; logistic period 3: lap " << fmt("%.6f", h_lap) << " markov " << fmt("%.6f", h_markov);

    // Period-3 PCF maps of the quadratic rational family: the critical orbit is a 3-cycle.
    int cycles = 0, agree = 0;
    for (const PCFPoint& p : scan_pcf(Window{})) {
        if (p.n != 3) continue;
        const EntropyEstimate e = real_entropy(map_from_critical_values(p.v));
        if (!e.markov_value) continue;
        ++cycles;
        if (std::fabs(e.value - golden_entropy()) <= 1e-3 && std::fabs(*e.markov_value - golden_entropy()) <= 1e-3)
            ++agree;
    }
    r.pass = r.pass && cycles > 0 && agree == cycles;
    d << "; rational period-3 PCF maps: " << agree << " of " << cycles << " at "
      << fmt("%.6f", golden_entropy()) << " by lap and markov";
    r.detail = d.str();
    return r;
}

CriterionResult criterion2()
{
    CriterionResult r{2, "algebraic identities", true, "", 0.0};
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> ua(0.2, 3.0), ub(-4.0, 4.0), um(-2.0, 2.0);
    std::bernoulli_distribution sign(0.5);
    double worst_formula = 0.0, worst_sigma = 0.0;
    int maps = 0;
    while (maps < 1000) {
        const double a = sign(rng) ? ua(rng) : -ua(rng);
        const QuadraticMap f(a, ub(rng));
        double res;
        try {
            res = fixed_point_formula_residual(f);
        } catch (const NearParabolic&) {
            continue;
        }
        double m[4];
        do {
            for (double& x : m) x = um(rng);
        } while (std::fabs(m[0] * m[3] - m[1] * m[2]) < 0.1);
        const MobiusFrame beta(m[0], m[1], m[2], m[3]);
        const SigmaPoint s0 = sigma_coords(f), s1 = sigma_coords(f.homogeneous().conjugate(beta));
        worst_formula = std::max(worst_formula, res);
        worst_sigma = std::max({worst_sigma, std::fabs(s0.sigma1 - s1.sigma1), std::fabs(s0.sigma2 - s1.sigma2)});
        ++maps;
    }
    r.pass = worst_formula < 1e-9 && worst_sigma < 1e-8;
    r.detail = std::to_string(maps) + " maps: max fixed-point residual " + fmt("%.2e", worst_formula) +
               ", max sigma drift under conjugation " + fmt("%.2e", worst_sigma);
    return r;
}

CriterionResult criterion3()
{
    CriterionResult r{3, "region geometry", true, "", 0.0};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-8.0, 0.0);
    int count = 0, unimodal = 0, in_range = 0;
    double lo = INFINITY, hi = -INFINITY;
    while (count < 10000) {
        const NormalFormParams p{u(rng), u(rng)};
        if (!admissible(p)) continue;
        ++count;
        const NormalFormSystem sys = normal_form_to_map(p);
        const RegionClass rc = classify_region(normal_form_to_family(p));
        if (rc.tag == RegionTag::unimodal && sys.turning_points.size() == 1) ++unimodal;
        const double s1 = sys.sigma.sigma1;
        lo = std::min(lo, s1);
        hi = std::max(hi, s1);
        if (s1 >= -6.0 - 1e-6 && s1 <= 2.0 + 1e-6) ++in_range;
    }
    r.pass = unimodal == count && in_range == count;
    r.detail = std::to_string(count) + " admissible (mu,t): " + std::to_string(unimodal) + " unimodal, sigma1 in [" +
               fmt("%.6f", lo) + ", " + fmt("%.6f", hi) + "]";
    return r;
}

struct BoneOutcome {
    std::string json;
    std::vector<Bone> bones;
};

struct Stage4to7 {
    std::vector<PCFPoint> points;
    std::string pcf_json;
    std::vector<Bone> bones5;
    std::string bones5_json;
    std::string bones6_json;
    std::array<int, 3> bone_counts{};
    std::array<int, 3> oracle_counts{};
    bool bones6_ok = true;
    std::string grid_csv;
    std::string connectivity_json;
    ConnectivityReport connectivity;
    double grid_min = INFINITY, grid_max = -INFINITY;
    std::array<double, 4> seconds{};
    bool pcf_ok = true;
    int positive_quotient = 0, positive_direction = 0;
};

bool on_region_boundary(const Bone& b)
{
    auto ok = [](const std::string& s) { return s == "sigma1=2" || s == "sigma1=-6"; };
    return b.kind == BoneKind::arc && ok(b.endpoint_info[0]) && ok(b.endpoint_info[1]);
}

Stage4to7 run_stages(const AcceptanceOptions& opts, int workers, bool with_grid)
{
    Stage4to7 st;
    auto t0 = Clock::now();
    ScanOptions so;
    so.workers = workers;
    st.points = scan_pcf(opts.window, so);
    for (const PCFPoint& p : st.points) {
        if (p.quotient > 0.0) ++st.positive_quotient;
        try {
            if (check_positive_direction(p).positive) ++st.positive_direction;
        } catch (const Error&) {
        }
    }
    std::ostringstream pcf;
    write_pcf_json(pcf, opts.window, st.points);
    st.pcf_json = pcf.str();
    auto t1 = Clock::now();

    for (int n = 1; n <= so.n_max; ++n) {
        std::vector<CriticalValuePair> seeds;
        for (const PCFPoint& p : st.points)
            if (p.n == n) seeds.push_back(p.v);
        const auto bones = trace_bones(n, seeds, opts.window);
        st.bones5.insert(st.bones5.end(), bones.begin(), bones.end());
    }
    std::ostringstream b5;
    write_bones_json(b5, opts.window, st.bones5);
    st.bones5_json = b5.str();
    auto t2 = Clock::now();

    std::vector<Bone> bones6;
    for (int n = 2; n <= 4; ++n) {
        std::vector<CriticalValuePair> seeds;
        for (const PCFPoint& p : st.points)
            if (p.n == n) seeds.push_back(p.v);
        const auto extra = bone_seeds(n, opts.window);
        seeds.insert(seeds.end(), extra.begin(), extra.end());
        const auto bones = trace_bones(n, seeds, opts.window);
        int reach = 0;
        for (const Bone& b : bones) {
            st.bones6_ok = st.bones6_ok && b.kind == BoneKind::arc;
            if (b.endpoint_info[0] == "sigma1=2" || b.endpoint_info[1] == "sigma1=2") ++reach;
        }
        st.bone_counts[static_cast<std::size_t>(n - 2)] = reach;
        st.oracle_counts[static_cast<std::size_t>(n - 2)] = static_cast<int>(superstable_polynomial_parameters(n).size());
        bones6.insert(bones6.end(), bones.begin(), bones.end());
    }
    std::ostringstream b6;
    write_bones_json(b6, opts.window, bones6);
    st.bones6_json = b6.str();
    auto t3 = Clock::now();

    if (with_grid) {
        GridSpec gs;
        gs.nx = gs.ny = opts.grid;
        gs.workers = workers;
        const EntropyGrid grid = entropy_grid(gs);
        for (const GridCell& c : grid.cells) {
            if (!c.admissible) continue;
            st.grid_min = std::min(st.grid_min, c.entropy);
            st.grid_max = std::max(st.grid_max, c.entropy);
        }
        st.connectivity = band_connectivity(grid);
        std::ostringstream csv, conn;
        write_csv(csv, grid);
        write_connectivity_json(conn, st.connectivity);
        st.grid_csv = csv.str();
        st.connectivity_json = conn.str();
    }
    auto t4 = Clock::now();
    st.seconds = {std::chrono::duration<double>(t1 - t0).count(), std::chrono::duration<double>(t2 - t1).count(),
                  std::chrono::duration<double>(t3 - t2).count(), std::chrono::duration<double>(t4 - t3).count()};
    return st;
}

void write_artifacts(const std::string& dir, const Stage4to7& st)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto put = [&](const char* name, const std::string& text) {
        std::ofstream(fs::path(dir) / name, std::ios::binary) << text;
    };
    put("pcf.json", st.pcf_json);
    put("bones.json", st.bones5_json);
    put("bones_all.json", st.bones6_json);
    put("grid.csv", st.grid_csv);
    put("connectivity.json", st.connectivity_json);
}

}  // namespace

std::string format_result(const CriterionResult& r)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
    return std::string(r.pass ? "PASS " : "FAIL ") + std::to_string(r.id) + " " + r.title + ": " + r.detail + buf;
}

std::vector<double> superstable_polynomial_parameters(int n, int samples)
{
    auto orbit = [n](double c) {
        double z = 0.0;
        for (int i = 0; i < n; ++i) z = z * z + c;
        return z;
    };
    std::vector<double> roots;
    const double lo = -2.0, hi = 0.25;
    double cl = lo, gl = orbit(cl);
    for (int k = 1; k <= samples; ++k) {
        const double cr = lo + (hi - lo) * k / samples;
        const double gr = orbit(cr);
        if ((gl <= 0.0) != (gr <= 0.0)) {
            double a = cl, b = cr, ga = gl;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                const double gm = orbit(mid);
                if ((gm <= 0.0) == (ga <= 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            const double c = 0.5 * (a + b);
            bool exact = true;
            double z = 0.0;
            for (int i = 1; i < n; ++i) {
                z = z * z + c;
                exact = exact && std::fabs(z) > 1e-9;
            }
            if (exact && (roots.empty() || c - roots.back() > 1e-9)) roots.push_back(c);
        }
        cl = cr;
        gl = gr;
    }
    return roots;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result)
{
    std::vector<CriterionResult> out;
    auto emit = [&](CriterionResult r) {
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    };
    auto timed = [&](auto&& fn) {
        const auto t0 = Clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return r;
    };

    auto r1 = timed(criterion1);
    r1.id = 1;
    r1.title = "entropy oracle agreement";
    emit(r1);
    auto r2 = timed(criterion2);
    r2.id = 2;
    r2.title = "algebraic identities";
    emit(r2);
    auto r3 = timed(criterion3);
    r3.id = 3;
    r3.title = "region geometry";
    emit(r3);

    Stage4to7 st;
    std::string failure;
    try {
        st = run_stages(opts, opts.workers, true);
    } catch (const std::exception& e) {
        failure = std::string("exception: ") + e.what();
    }
    if (!failure.empty()) {
        for (int id = 4; id <= 8; ++id) emit({id, "stages 4-8", false, failure, 0.0});
        return out;
    }
    if (!opts.artifact_dir.empty()) write_artifacts(opts.artifact_dir, st);

    const int npts = static_cast<int>(st.points.size());
    emit({4, "transversality", npts >= 5 && st.positive_quotient == npts && st.positive_direction == npts,
          std::to_string(npts) + " PCF points (n<=4, m<=6); quotient>0: " + std::to_string(st.positive_quotient) +
              ", normalized directional derivative>0: " + std::to_string(st.positive_direction),
          st.seconds[0]});

    int arcs = 0;
    for (const Bone& b : st.bones5)
        if (on_region_boundary(b)) ++arcs;
    CurveProblem circle;
    circle.residual = [](const Vec2& v) { return v[0] * v[0] + v[1] * v[1] - 1.0; };
    circle.tangent = [](const Vec2& v) { return (1.0 / norm(v)) * perp(v); };
    circle.outside = [](const Vec2&) -> std::optional<std::string> { return std::nullopt; };
    circle.boundary_label = [](const Vec2&) { return std::string("none"); };
    const auto c0 = Clock::now();
    const Bone ring = trace_curve(circle, {1.0, 0.0});
    const double circle_secs = std::chrono::duration<double>(Clock::now() - c0).count();
    const bool ring_ok = ring.kind == BoneKind::loop && std::fabs(ring.arclength - 2.0 * M_PI) <= 1e-3;
    const int nb = static_cast<int>(st.bones5.size());
    emit({5, "no bone-loops", nb > 0 && arcs == nb && ring_ok,
          std::to_string(nb) + " bones from the PCF points, " + std::to_string(arcs) +
              " arcs with both ends on sigma1=2 or sigma1=-6; synthetic circle: " + to_string(ring.kind) +
              ", length " + fmt("%.6f", ring.arclength),
          st.seconds[1] + circle_secs});

    const bool counts_ok = st.bone_counts == st.oracle_counts && st.oracle_counts == std::array<int, 3>{1, 1, 2};
    emit({6, "bone/polynomial correspondence", counts_ok && st.bones6_ok,
          "bones reaching sigma1=2 for n=2,3,4: " + std::to_string(st.bone_counts[0]) + "," +
              std::to_string(st.bone_counts[1]) + "," + std::to_string(st.bone_counts[2]) +
              "; superstable polynomial parameters: " + std::to_string(st.oracle_counts[0]) + "," +
              std::to_string(st.oracle_counts[1]) + "," + std::to_string(st.oracle_counts[2]),
          st.seconds[2]});

    bool single = true;
    std::string comps;
    for (const BandComponents& b : st.connectivity.bands) {
        single = single && b.components == 1;
        comps += (comps.empty() ? "" : ",") + std::to_string(b.components);
    }
    const bool range_ok = st.grid_min >= 0.0 && st.grid_max <= std::log(2.0) + 1e-3;
    emit({7, "isentrope connectivity", single && range_ok,
          std::to_string(opts.grid) + "x" + std::to_string(opts.grid) + " grid: components per band [" + comps +
              "], entropy range [" + fmt("%.6f", st.grid_min) + ", " + fmt("%.6f", st.grid_max) + "]",
          st.seconds[3]});

    const auto t8 = Clock::now();
    CriterionResult r8{8, "determinism", false, "", 0.0};
    try {
        const Stage4to7 again = run_stages(opts, opts.repeat_workers, true);
        const bool same_pcf = again.pcf_json == st.pcf_json;
        const bool same_bones = again.bones5_json == st.bones5_json && again.bones6_json == st.bones6_json;
        const bool same_grid = again.grid_csv == st.grid_csv && again.connectivity_json == st.connectivity_json;
        r8.pass = same_pcf && same_bones && same_grid;
        r8.detail = "workers " + std::to_string(opts.workers) + " vs " + std::to_string(opts.repeat_workers) +
                    ": pcf " + (same_pcf ? "identical" : "DIFFERENT") + ", bones " +
                    (same_bones ? "identical" : "DIFFERENT") + ", grid " + (same_grid ? "identical" : "DIFFERENT");
    } catch (const std::exception& e) {
        r8.detail = std::string("exception: ") + e.what();
    }
    r8.seconds = std::chrono::duration<double>(Clock::now() - t8).count();
    emit(r8);
    return out;
}

}  // namespace rqm
