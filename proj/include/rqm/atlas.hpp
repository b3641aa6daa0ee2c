#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <span>
#include <vector>

#include "rqm/entropy.hpp"
#include "rqm/linalg.hpp"

namespace rqm {

/// Band edges of the entropy partition; band k is [edge k, edge k+1), the last one closed.
inline const std::array<double, 8> band_edges{0.0, 0.1, 0.25, 0.4, 0.48, 0.55, 0.65, std::log(2.0)};
constexpr int band_count = 7;

/// Colour names in band order.
inline const std::array<const char*, 7> band_colors{"black", "blue", "magenta", "green", "cyan", "yellow", "red"};

/// Throws OutOfRange when h < -tol or h > log 2 + tol.
int band_classify(double h, double tol = 1e-3);

struct GridSpec {
    double mu_min = -4.0;
    double mu_max = 0.0;
    double t_min = -4.0;
    double t_max = 0.0;
    int nx = 400;
    int ny = 400;
    EntropyOptions entropy = default_options();
    int workers = 1;

    static EntropyOptions default_options()
    {
        EntropyOptions o;
        o.n_max = 400;
        o.lap_cap = 1e12;
        o.work_budget = 2e5;
        return o;
    }

    /// Cell-centred sample coordinates.
    double mu(int i) const { return mu_min + (mu_max - mu_min) * (i + 0.5) / nx; }
    double t(int j) const { return t_min + (t_max - t_min) * (j + 0.5) / ny; }
};

struct GridCell {
    double mu = 0.0;
    double t = 0.0;
    bool admissible = false;
    double sigma1 = NAN;
    double sigma2 = NAN;
    double entropy = NAN;
    double upper_bound = NAN;
    int band = -1;
    EntropyMethod method = EntropyMethod::lap;
    bool converged = false;
};

/// Cells in row-major order: index j * nx + i with i along mu and j along t.
struct EntropyGrid {
    GridSpec spec;
    std::vector<GridCell> cells;

    const GridCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * spec.nx + i]; }
};

/// Requires nx, ny >= 1 and a well-ordered rectangle (PreconditionError otherwise).
EntropyGrid entropy_grid(const GridSpec& spec);

struct BandComponents {
    int band = 0;
    int components = 0;
    int pixels = 0;
    /// Pixels of this band left out because they lie within tol of an interior band edge.
    int excluded = 0;
};

struct ConnectivityReport {
    double tolerance = 0.0;
    std::array<BandComponents, band_count> bands{};
};

/// 8-connected components per band over the masked field (mask[k] false = no value).
ConnectivityReport band_connectivity(int nx, int ny, std::span<const double> values, std::span<const char> mask,
                                     double tol = 2e-3);
ConnectivityReport band_connectivity(const EntropyGrid& grid, double tol = 2e-3);

struct Polyline {
    std::vector<Vec2> points;
    bool closed = false;
};

/// Marching squares on a node field (values at (x0 + i dx, y0 + j dy)); squares with a masked
/// corner are skipped; saddles are resolved by the mean of the four corners.
std::vector<Polyline> contour_extract(int nx, int ny, std::span<const double> values, std::span<const char> mask,
                                      double x0, double dx, double y0, double dy, double level);
std::vector<Polyline> contour_extract(const EntropyGrid& grid, double level);

void write_csv(std::ostream& os, const EntropyGrid& grid);
void write_svg(std::ostream& os, const EntropyGrid& grid, bool contours = true);
void write_connectivity_json(std::ostream& os, const ConnectivityReport& report);

}  // namespace rqm
