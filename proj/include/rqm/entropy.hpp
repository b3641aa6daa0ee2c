#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rqm/family.hpp"

namespace rqm {

/// A piecewise-monotone self-map of [lo, hi] with its interior turning points.
struct IntervalModel {
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> eval;
    /// Sorted interior turning points.
    std::vector<double> turning_points;

    double operator()(double x) const { return eval(x); }
};

/// Spot-checks the model by sampling: each branch must be strictly monotone (no slope sign change)
/// and the image must stay in the domain. Throws BranchMonotonicity or DomainError.
void validate_model(const IntervalModel& m, int samples_per_branch = 512);

/// lap(f^n) for n = 1.. until n_max, until the next value would exceed lap_cap, or until the
/// number of tracked intervals summed over steps exceeds work_budget.
///
/// Each lap of f^n is tracked through its image interval, whose endpoints are orbit points of the
/// domain endpoints and turning points. A lap whose image contains a turning point in its interior
/// splits in two at the next step. Laps with the same image are counted together; orbit values
/// closer than merge_tol * (hi - lo) are identified, so a postcritically finite map keeps a bounded
/// number of distinct images and can be iterated deep.
std::vector<double> lap_sequence(const IntervalModel& m, int n_max = 4000, double lap_cap = 1e6,
                                 double merge_tol = 1e-12, double work_budget = 2e6);

enum class EntropyMethod { lap, markov };

const char* to_string(EntropyMethod m);

struct EntropyEstimate {
    /// Nats.
    double value = 0.0;
    /// min_n (1/n) log lap(f^n), a rigorous upper bound by subadditivity.
    double upper_bound = 0.0;
    EntropyMethod method = EntropyMethod::lap;
    /// Iterations used (lap method) or matrix size (Markov method).
    int depth = 0;
    /// Spread of the trailing-window ratio estimates.
    double tolerance = 0.0;
    bool converged = true;
    /// Propagated from region classification.
    bool boundary_ambiguous = false;
    /// Entropy of the Markov partition when the map was detected as PCF.
    std::optional<double> markov_value;
};

struct EntropyOptions {
    int n_max = 4000;
    double lap_cap = 1e6;
    double work_budget = 2e6;
    double tol = 1e-3;
    int window = 5;
    double merge_tol = 1e-12;
    /// PCF detection: the turning point returns within pcf_tol of itself in at most pcf_steps.
    double pcf_tol = 1e-9;
    int pcf_steps = 64;
};

EntropyEstimate entropy_from_laps(std::span<const double> laps, const EntropyOptions& opts = {});
EntropyEstimate entropy_lap(const IntervalModel& m, const EntropyOptions& opts = {});

/// Cells between consecutive points of a finite forward-invariant set; matrix[i][j] = 1 iff
/// f(cell i) covers cell j.
struct MarkovSystem {
    std::vector<double> partition;
    std::vector<std::vector<int>> matrix;
};

/// Throws NotMarkov if a turning point sits inside a cell or the set is not forward invariant.
MarkovSystem markov_partition(const IntervalModel& m, std::span<const double> orbit, double tol = 1e-7);

/// Perron root of a nonnegative matrix (power iteration on M + I by repeated squaring).
double spectral_radius(const std::vector<std::vector<int>>& matrix);

EntropyEstimate entropy_markov(const MarkovSystem& s);

/// The periodic orbit of the (single) turning point, if it closes within opts.pcf_tol.
std::optional<std::vector<double>> critical_cycle(const IntervalModel& m, const EntropyOptions& opts = {});

/// f restricted to its image arc, in the chart y = 1/(m - z) with m the midpoint of the gap
/// between the critical values; the model domain is a bounded interval.
IntervalModel interval_model(const QuadraticMap& f);
MobiusFrame interval_chart(const QuadraticMap& f);

IntervalModel interval_model(const NormalFormSystem& s);

/// Real entropy: lap counting on the image arc, cross-checked with the Markov partition for
/// unimodal PCF maps.
EntropyEstimate real_entropy(const QuadraticMap& f, const EntropyOptions& opts = {});

}  // namespace rqm
