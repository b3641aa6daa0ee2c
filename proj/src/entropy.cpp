#include "rqm/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "rqm/errors.hpp"

namespace rqm {

const char* to_string(EntropyMethod m)
{
    return m == EntropyMethod::lap ? "lap" : "markov";
}

void validate_model(const IntervalModel& m, int samples_per_branch)
{
    if (!(m.lo < m.hi)) throw DomainError("interval model: empty domain");
    if (!std::is_sorted(m.turning_points.begin(), m.turning_points.end()))
        throw DomainError("interval model: turning points not sorted");
    std::vector<double> cuts{m.lo};
    for (double t : m.turning_points) {
        if (t <= m.lo || t >= m.hi) throw DomainError("interval model: turning point outside the domain");
        cuts.push_back(t);
    }
    cuts.push_back(m.hi);
    const double slack = 1e-12 * (m.hi - m.lo);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        int sign = 0;
        double prev = m(a);
        for (int i = 1; i <= samples_per_branch; ++i) {
            const double x = a + (b - a) * i / samples_per_branch;
            const double y = m(x);
            if (y < m.lo - slack || y > m.hi + slack) throw DomainError("interval model: image leaves the domain");
            const double d = y - prev;
            const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
            if (s != 0) {
                if (sign != 0 && s != sign)
                    throw BranchMonotonicity("interval model: slope changes sign inside branch " + std::to_string(k));
                sign = s;
            }
            prev = y;
        }
    }
}

namespace {

// Distinct orbit values, merged within a tolerance, with lazily computed successors.
class ValueTable {
public:
    ValueTable(const IntervalModel& m, double tol) : m_(m), tol_(tol) {}

    int intern(double x)
    {
        auto it = index_.lower_bound(x - tol_);
        if (it != index_.end() && it->first <= x + tol_) return it->second;
        const int id = static_cast<int>(values_.size());
        values_.push_back(x);
        succ_.push_back(-1);
        index_.emplace(x, id);
        return id;
    }

    double value(int id) const { return values_[static_cast<std::size_t>(id)]; }

    int next(int id)
    {
        auto& s = succ_[static_cast<std::size_t>(id)];
        if (s < 0) {
            const int r = intern(std::clamp(m_(value(id)), m_.lo, m_.hi));
            succ_[static_cast<std::size_t>(id)] = r;
            return r;
        }
        return s;
    }

private:
    const IntervalModel& m_;
    double tol_;
    std::vector<double> values_;
    std::vector<int> succ_;
    std::map<double, int> index_;
};

std::uint64_t make_key(int a, int b) { return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b); }

}  // namespace

std::vector<double> lap_sequence(const IntervalModel& m, int n_max, double lap_cap, double merge_tol,
                                 double work_budget)
{
    const double eps = merge_tol * (m.hi - m.lo);
    ValueTable table(m, eps);
    std::vector<int> turning;
    for (double t : m.turning_points) turning.push_back(table.intern(t));

    // Image intervals of the laps of f^k, keyed by the ids of their (lower, upper) endpoints.
    std::map<std::uint64_t, double> laps{{make_key(table.intern(m.lo), table.intern(m.hi)), 1.0}};
    std::vector<double> out;
    std::vector<int> ends;
    double work = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        std::map<std::uint64_t, double> next;
        double total = 0.0;
        for (const auto& [key, count] : laps) {
            const int ia = static_cast<int>(key >> 32);
            const int ib = static_cast<int>(key & 0xffffffffu);
            const double xa = table.value(ia), xb = table.value(ib);
            ends.clear();
            ends.push_back(ia);
            const auto first = std::upper_bound(m.turning_points.begin(), m.turning_points.end(), xa + eps);
            for (auto it = first; it != m.turning_points.end() && *it < xb - eps; ++it)
                ends.push_back(turning[static_cast<std::size_t>(it - m.turning_points.begin())]);
            ends.push_back(ib);
            for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
                int u = table.next(ends[i]), v = table.next(ends[i + 1]);
                if (table.value(v) < table.value(u)) std::swap(u, v);
                next[make_key(u, v)] += count;
                total += count;
            }
        }
        if (total > lap_cap) break;
        out.push_back(total);
        laps.swap(next);
        work += static_cast<double>(laps.size());
        if (work > work_budget) break;
    }
    return out;
}

EntropyEstimate entropy_from_laps(std::span<const double> laps, const EntropyOptions& opts)
{
    EntropyEstimate e;
    e.method = EntropyMethod::lap;
    e.depth = static_cast<int>(laps.size());
    if (laps.empty()) return e;
    double upper = INFINITY;
    for (std::size_t i = 0; i < laps.size(); ++i)
        upper = std::min(upper, std::log(laps[i]) / static_cast<double>(i + 1));
    e.upper_bound = upper;

    const std::size_t n = laps.size();
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(opts.window, 1)), n - 1);
    double value;
    if (w == 0) {
        value = std::log(laps[0]);
    } else {
        value = std::log(laps[n - 1] / laps[n - 1 - w]) / static_cast<double>(w);
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t i = n - w; i < n; ++i) {
            const double r = std::log(laps[i] / laps[i - 1]);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        e.tolerance = hi - lo;
    }
    e.converged = e.tolerance <= opts.tol;
    e.value = std::clamp(value, 0.0, upper);
    return e;
}

EntropyEstimate entropy_lap(const IntervalModel& m, const EntropyOptions& opts)
{
    const auto laps = lap_sequence(m, opts.n_max, opts.lap_cap, opts.merge_tol, opts.work_budget);
    return entropy_from_laps(laps, opts);
}

MarkovSystem markov_partition(const IntervalModel& m, std::span<const double> orbit, double tol)
{
    if (orbit.empty()) throw PreconditionError("markov_partition: empty orbit");
    const double eps = tol * (m.hi - m.lo);
    std::vector<double> pts(orbit.begin(), orbit.end());
    std::sort(pts.begin(), pts.end());
    MarkovSystem s;
    for (double x : pts)
        if (s.partition.empty() || x - s.partition.back() > eps) s.partition.push_back(x);

    auto locate = [&](double x) -> std::size_t {
        const auto it = std::lower_bound(s.partition.begin(), s.partition.end(), x);
        std::size_t best = s.partition.size();
        double dist = INFINITY;
        if (it != s.partition.end()) {
            best = static_cast<std::size_t>(it - s.partition.begin());
            dist = *it - x;
        }
        if (it != s.partition.begin() && x - *(it - 1) < dist) {
            best = static_cast<std::size_t>(it - s.partition.begin()) - 1;
            dist = x - *(it - 1);
        }
        if (!(dist <= eps)) throw NotMarkov("markov_partition: orbit is not forward invariant");
        return best;
    };

    const std::size_t k = s.partition.size();
    for (double t : m.turning_points) {
        if (t <= s.partition.front() + eps || t >= s.partition.back() - eps) continue;
        const auto it = std::lower_bound(s.partition.begin(), s.partition.end(), t - eps);
        if (it == s.partition.end() || *it > t + eps)
            throw NotMarkov("markov_partition: turning point inside a cell");
    }
    std::vector<std::size_t> image(k);
    for (std::size_t i = 0; i < k; ++i) image[i] = locate(m(s.partition[i]));
    s.matrix.assign(k - 1, std::vector<int>(k - 1, 0));
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const auto [lo, hi] = std::minmax(image[i], image[i + 1]);
        for (std::size_t j = lo; j < hi; ++j) s.matrix[i][j] = 1;
    }
    return s;
}

double spectral_radius(const std::vector<std::vector<int>>& matrix)
{
    const std::size_t n = matrix.size();
    if (n == 0) return 0.0;
    // rho(M + I) = rho(M) + 1 for nonnegative M.
    std::vector<double> b(n * n), c(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n) throw PreconditionError("spectral_radius: matrix not square");
        for (std::size_t j = 0; j < n; ++j) {
            if (matrix[i][j] < 0) throw PreconditionError("spectral_radius: negative entry");
            b[i * n + j] = matrix[i][j] + (i == j ? 1.0 : 0.0);
        }
    }
    double log_rho = 0.0;
    double weight = 0.5;
    for (int step = 0; step < 64; ++step) {
        std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                const double bil = b[i * n + l];
                if (bil == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) c[i * n + j] += bil * b[l * n + j];
            }
        const double scale = *std::max_element(c.begin(), c.end());
        for (double& x : c) x /= scale;
        log_rho += weight * std::log(scale);
        weight *= 0.5;
        b.swap(c);
    }
    return std::exp(log_rho) - 1.0;
}

EntropyEstimate entropy_markov(const MarkovSystem& s)
{
    EntropyEstimate e;
    e.method = EntropyMethod::markov;
    e.depth = static_cast<int>(s.matrix.size());
    const double rho = spectral_radius(s.matrix);
    e.value = rho > 1.0 ? std::log(rho) : 0.0;
    e.upper_bound = e.value;
    e.tolerance = 1e-10;
    return e;
}

std::optional<std::vector<double>> critical_cycle(const IntervalModel& m, const EntropyOptions& opts)
{
    if (m.turning_points.size() != 1) return std::nullopt;
    const double c = m.turning_points.front();
    const double eps = opts.pcf_tol * std::max(1.0, m.hi - m.lo);
    std::vector<double> orbit{c};
    double x = c;
    for (int k = 1; k <= opts.pcf_steps; ++k) {
        x = m(x);
        if (std::fabs(x - c) <= eps) return orbit;
        orbit.push_back(x);
    }
    return std::nullopt;
}

MobiusFrame interval_chart(const QuadraticMap& f)
{
    const RegionClass rc = classify_region(f);
    // y = 1 / (m - z): increasing, sends the gap midpoint to infinity and infinity to 0.
    return {0.0, 1.0, -1.0, rc.image.gap_midpoint()};
}

IntervalModel interval_model(const QuadraticMap& f)
{
    const RegionClass rc = classify_region(f);
    const double mid = rc.image.gap_midpoint();
    const MobiusFrame phi(0.0, 1.0, -1.0, mid);
    const RationalMap2 g = f.homogeneous().conjugate(phi);
    IntervalModel m;
    m.lo = 1.0 / (mid - rc.image.hi);
    m.hi = 1.0 / (mid - rc.image.lo);
    const double lo = m.lo, hi = m.hi;
    m.eval = [g, lo, hi](double y) { return std::clamp(g(y), lo, hi); };
    for (double c : {-1.0, 1.0}) {
        if (!rc.image.contains(c)) continue;
        const double y = 1.0 / (mid - c);
        if (y > m.lo && y < m.hi) m.turning_points.push_back(y);
    }
    std::sort(m.turning_points.begin(), m.turning_points.end());
    return m;
}

IntervalModel interval_model(const NormalFormSystem& s)
{
    IntervalModel m;
    m.lo = s.domain_lo;
    m.hi = s.domain_hi;
    const NormalFormParams p = s.params;
    const double lo = m.lo, hi = m.hi;
    m.eval = [p, lo, hi](double x) { return std::clamp(normal_form_eval(p, x), lo, hi); };
    for (double t : s.turning_points)
        if (t > m.lo && t < m.hi) m.turning_points.push_back(t);
    return m;
}

EntropyEstimate real_entropy(const QuadraticMap& f, const EntropyOptions& opts)
{
    const RegionClass rc = classify_region(f);
    const IntervalModel m = interval_model(f);
    EntropyEstimate e = entropy_lap(m, opts);
    e.boundary_ambiguous = rc.boundary_ambiguous;
    if (rc.tag == RegionTag::unimodal) {
        if (const auto cycle = critical_cycle(m, opts)) {
            try {
                e.markov_value = entropy_markov(markov_partition(m, *cycle)).value;
            } catch (const NotMarkov&) {
            }
        }
    }
    return e;
}

}  // namespace rqm
