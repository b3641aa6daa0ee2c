#include "rqm/atlas.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include "rqm/errors.hpp"
#include "rqm/json.hpp"
#include "rqm/parallel.hpp"

namespace rqm {

int band_classify(double h, double tol)
{
    if (!(h >= -tol) || !(h <= band_edges.back() + tol))
        throw OutOfRange("band_classify: entropy " + format_double(h) + " outside [0, log 2]");
    for (int k = band_count - 1; k > 0; --k)
        if (h >= band_edges[static_cast<std::size_t>(k)]) return k;
    return 0;
}

EntropyGrid entropy_grid(const GridSpec& spec)
{
    if (spec.nx < 1 || spec.ny < 1) throw PreconditionError("entropy_grid: resolution must be positive");
    if (!(spec.mu_min < spec.mu_max) || !(spec.t_min < spec.t_max))
        throw PreconditionError("entropy_grid: window is not well ordered");
    EntropyGrid grid;
    grid.spec = spec;
    grid.cells.resize(static_cast<std::size_t>(spec.nx) * spec.ny);
    parallel_for(grid.cells.size(), spec.workers, [&](std::size_t k) {
        GridCell& c = grid.cells[k];
        const int i = static_cast<int>(k % spec.nx), j = static_cast<int>(k / spec.nx);
        c.mu = spec.mu(i);
        c.t = spec.t(j);
        const NormalFormParams p{c.mu, c.t};
        c.admissible = admissible(p);
        if (!c.admissible) return;
        const NormalFormSystem sys = normal_form_to_map(p);
        c.sigma1 = sys.sigma.sigma1;
        c.sigma2 = sys.sigma.sigma2;
        const EntropyEstimate e = entropy_lap(interval_model(sys), spec.entropy);
        c.entropy = e.value;
        c.upper_bound = e.upper_bound;
        c.method = e.method;
        c.converged = e.converged;
        c.band = band_classify(e.value);
    });
    return grid;
}

ConnectivityReport band_connectivity(int nx, int ny, std::span<const double> values, std::span<const char> mask,
                                     double tol)
{
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    if (values.size() != n || mask.size() != n) throw PreconditionError("band_connectivity: size mismatch");
    ConnectivityReport rep;
    rep.tolerance = tol;
    std::vector<int> band(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        if (!mask[k]) continue;
        const int b = band_classify(values[k]);
        BandComponents& bc = rep.bands[static_cast<std::size_t>(b)];
        ++bc.pixels;
        bool near_edge = false;
        for (int e = 1; e < band_count; ++e)
            near_edge = near_edge || std::fabs(values[k] - band_edges[static_cast<std::size_t>(e)]) < tol;
        if (near_edge)
            ++bc.excluded;
        else
            band[k] = b;
    }
    for (int b = 0; b < band_count; ++b) rep.bands[static_cast<std::size_t>(b)].band = b;

    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (band[start] < 0 || seen[start]) continue;
        const int b = band[start];
        ++rep.bands[static_cast<std::size_t>(b)].components;
        seen[start] = 1;
        stack.assign(1, start);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    const std::size_t kk = static_cast<std::size_t>(jj) * nx + ii;
                    if (seen[kk] || band[kk] != b) continue;
                    seen[kk] = 1;
                    stack.push_back(kk);
                }
        }
    }
    return rep;
}

namespace {

void grid_fields(const EntropyGrid& grid, std::vector<double>& values, std::vector<char>& mask)
{
    values.resize(grid.cells.size());
    mask.resize(grid.cells.size());
    for (std::size_t k = 0; k < grid.cells.size(); ++k) {
        mask[k] = grid.cells[k].admissible;
        values[k] = grid.cells[k].admissible ? grid.cells[k].entropy : 0.0;
    }
}

}  // namespace

ConnectivityReport band_connectivity(const EntropyGrid& grid, double tol)
{
    std::vector<double> values;
    std::vector<char> mask;
    grid_fields(grid, values, mask);
    return band_connectivity(grid.spec.nx, grid.spec.ny, values, mask, tol);
}

std::vector<Polyline> contour_extract(int nx, int ny, std::span<const double> values, std::span<const char> mask,
                                      double x0, double dx, double y0, double dy, double level)
{
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    if (values.size() != n || mask.size() != n) throw PreconditionError("contour_extract: size mismatch");
    auto idx = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
    // Edge ids: 2 * node + 0 for the edge to the right neighbour, 2 * node + 1 for the edge above.
    auto edge_id = [&](int i, int j, int side) -> long long {
        switch (side) {
        case 0: return 2LL * static_cast<long long>(idx(i, j));
        case 1: return 2LL * static_cast<long long>(idx(i + 1, j)) + 1;
        case 2: return 2LL * static_cast<long long>(idx(i, j + 1));
        default: return 2LL * static_cast<long long>(idx(i, j)) + 1;
        }
    };
    std::map<long long, Vec2> where;
    std::vector<std::pair<long long, long long>> segments;

    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const std::size_t c[4] = {idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)};
            if (!mask[c[0]] || !mask[c[1]] || !mask[c[2]] || !mask[c[3]]) continue;
            const Vec2 pos[4] = {{x0 + i * dx, y0 + j * dy},
                                 {x0 + (i + 1) * dx, y0 + j * dy},
                                 {x0 + (i + 1) * dx, y0 + (j + 1) * dy},
                                 {x0 + i * dx, y0 + (j + 1) * dy}};
            bool above[4];
            for (int k = 0; k < 4; ++k) above[k] = values[c[k]] > level;
            // Side s joins corners s and (s + 1) % 4: bottom, right, top, left.
            std::vector<int> crossed;
            for (int s = 0; s < 4; ++s) {
                const int a = s, b = (s + 1) % 4;
                if (above[a] == above[b]) continue;
                crossed.push_back(s);
                const long long id = edge_id(i, j, s);
                if (!where.count(id)) {
                    const double va = values[c[a]], vb = values[c[b]];
                    const double u = (level - va) / (vb - va);
                    where[id] = pos[a] + u * (pos[b] - pos[a]);
                }
            }
            if (crossed.size() == 2) {
                segments.emplace_back(edge_id(i, j, crossed[0]), edge_id(i, j, crossed[1]));
            } else if (crossed.size() == 4) {
                const double centre = 0.25 * (values[c[0]] + values[c[1]] + values[c[2]] + values[c[3]]);
                if ((centre > level) == above[0]) {
                    segments.emplace_back(edge_id(i, j, 0), edge_id(i, j, 1));
                    segments.emplace_back(edge_id(i, j, 2), edge_id(i, j, 3));
                } else {
                    segments.emplace_back(edge_id(i, j, 0), edge_id(i, j, 3));
                    segments.emplace_back(edge_id(i, j, 1), edge_id(i, j, 2));
                }
            }
        }

    std::map<long long, std::vector<std::size_t>> incident;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        incident[segments[s].first].push_back(s);
        incident[segments[s].second].push_back(s);
    }
    std::vector<char> used(segments.size(), 0);
    auto walk = [&](long long from, std::size_t seg, std::vector<long long>& chain) {
        for (;;) {
            used[seg] = 1;
            const long long to = segments[seg].first == from ? segments[seg].second : segments[seg].first;
            chain.push_back(to);
            std::size_t next = segments.size();
            for (std::size_t s : incident[to])
                if (!used[s]) next = s;
            if (next == segments.size()) return;
            from = to;
            seg = next;
        }
    };

    std::vector<Polyline> out;
    // Open chains start at edges with a single incident segment.
    for (const auto& [id, segs] : incident) {
        if (segs.size() != 1 || used[segs[0]]) continue;
        std::vector<long long> chain{id};
        walk(id, segs[0], chain);
        Polyline pl;
        for (long long e : chain) pl.points.push_back(where[e]);
        out.push_back(std::move(pl));
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        std::vector<long long> chain{segments[s].first};
        walk(segments[s].first, s, chain);
        Polyline pl;
        for (long long e : chain) pl.points.push_back(where[e]);
        pl.closed = chain.size() > 2 && chain.front() == chain.back();
        out.push_back(std::move(pl));
    }
    return out;
}

std::vector<Polyline> contour_extract(const EntropyGrid& grid, double level)
{
    std::vector<double> values;
    std::vector<char> mask;
    grid_fields(grid, values, mask);
    const GridSpec& s = grid.spec;
    return contour_extract(s.nx, s.ny, values, mask, s.mu(0), (s.mu_max - s.mu_min) / s.nx, s.t(0),
                           (s.t_max - s.t_min) / s.ny, level);
}

void write_csv(std::ostream& os, const EntropyGrid& grid)
{
    os << "mu,t,admissible,sigma1,sigma2,entropy,upper_bound,band,method\n";
    for (const GridCell& c : grid.cells) {
        os << format_double(c.mu) << ',' << format_double(c.t) << ',' << (c.admissible ? 1 : 0) << ',';
        if (c.admissible) {
            os << format_double(c.sigma1) << ',' << format_double(c.sigma2) << ',' << format_double(c.entropy) << ','
               << format_double(c.upper_bound) << ',' << c.band << ',' << to_string(c.method) << '\n';
        } else {
            os << ",,,,-1,\n";
        }
    }
}

void write_svg(std::ostream& os, const EntropyGrid& grid, bool contours)
{
    static const char* const fill[band_count] = {"#000000", "#0000ff", "#ff00ff", "#00a000",
                                                  "#00ffff", "#ffff00", "#ff0000"};
    const GridSpec& s = grid.spec;
    const int px = std::max(1, 800 / std::max(s.nx, s.ny));
    const int w = s.nx * px, h = s.ny * px;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n";
    os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) {
            const GridCell& c = grid.at(i, j);
            if (!c.admissible) continue;
            os << "<rect x=\"" << i * px << "\" y=\"" << (s.ny - 1 - j) * px << "\" width=\"" << px << "\" height=\""
               << px << "\" fill=\"" << fill[c.band] << "\"/>\n";
        }
    if (contours) {
        const double sx = w / (s.mu_max - s.mu_min), sy = h / (s.t_max - s.t_min);
        for (int e = 1; e < band_count; ++e)
            for (const Polyline& pl : contour_extract(grid, band_edges[static_cast<std::size_t>(e)])) {
                os << "<polyline fill=\"none\" stroke=\"#808080\" stroke-width=\"1\" points=\"";
                for (const Vec2& p : pl.points) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", (p[0] - s.mu_min) * sx, (s.t_max - p[1]) * sy);
                    os << buf;
                }
                os << "\"/>\n";
            }
    }
    os << "</svg>\n";
}

void write_connectivity_json(std::ostream& os, const ConnectivityReport& report)
{
    JsonWriter js(os);
    js.begin_object();
    js.field("tolerance", report.tolerance);
    js.key("bands").begin_array();
    for (const BandComponents& b : report.bands) {
        js.begin_object();
        js.field("band", b.band);
        js.field("lower", band_edges[static_cast<std::size_t>(b.band)]);
        js.field("upper", band_edges[static_cast<std::size_t>(b.band) + 1]);
        js.field("color", band_colors[static_cast<std::size_t>(b.band)]);
        js.field("components", b.components);
        js.field("pixels", b.pixels);
        js.field("excluded", b.excluded);
        js.end_object();
    }
    js.end_array();
    js.end_object();
}

}  // namespace rqm
