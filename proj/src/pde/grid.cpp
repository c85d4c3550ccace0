#include "kronweb/pde.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace kronweb {

GridSolution sample_solution(const EquationSpec& eq, const SymbolicSolution& s, const Grid& grid) {
    if (grid.dim() != eq.dim || s.chart.dim() != eq.dim) throw PdeError("dimension mismatch");
    GridSolution g{grid, {}};
    for (const auto& f : s.f) {
        ScalarEvaluator e(f, s.chart);
        std::vector<long double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = e(grid.point(i));
        g.f.push_back(std::move(v));
    }
    return g;
}

std::vector<GridField> residual_grid(const EquationSpec& eq, const GridSolution& g) {
    const auto& grid = g.grid;
    const std::size_t n = grid.dim();
    if (n != eq.dim) throw PdeError("dimension mismatch: equation " + eq.symbol + " lives in dimension " + std::to_string(eq.dim));
    if (g.f.size() != eq.functions()) throw PdeError("wrong number of sampled functions");
    if (grid.points < 3) throw PdeError("grid needs at least three points per axis");
    const long double nan = std::numeric_limits<long double>::quiet_NaN();
    std::vector<GridField> out(eq.functions(), GridField{grid, std::vector<long double>(grid.size(), nan)});

    std::vector<std::size_t> stride(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<std::size_t> idx(n, 0);
        idx[a] = 1;
        stride[a] = grid.flat_index(idx);
    }
    std::vector<long double> h(n);
    for (std::size_t a = 0; a < n; ++a) h[a] = grid.spacing(a);

    for (std::size_t p = 0; p < grid.size(); ++p) {
        auto idx = grid.multi_index(p);
        bool interior = true;
        for (auto i : idx) interior = interior && i > 0 && i + 1 < grid.points;
        if (!interior) continue;
        std::vector<std::vector<long double>> d1(g.f.size(), std::vector<long double>(n));
        std::vector<std::vector<std::vector<long double>>> d2(g.f.size(), std::vector<std::vector<long double>>(n, std::vector<long double>(n)));
        for (std::size_t k = 0; k < g.f.size(); ++k) {
            const auto& f = g.f[k];
            for (std::size_t a = 0; a < n; ++a) {
                d1[k][a] = (f[p + stride[a]] - f[p - stride[a]]) / (2 * h[a]);
                d2[k][a][a] = (f[p + stride[a]] - 2 * f[p] + f[p - stride[a]]) / (h[a] * h[a]);
                for (std::size_t b = a + 1; b < n; ++b) {
                    long double v = (f[p + stride[a] + stride[b]] - f[p + stride[a] - stride[b]] - f[p - stride[a] + stride[b]] +
                                     f[p - stride[a] - stride[b]]) /
                                    (4 * h[a] * h[b]);
                    d2[k][a][b] = d2[k][b][a] = v;
                }
            }
        }
        auto r = residual_from_jet(eq, grid.point(p), d1, d2);
        for (std::size_t k = 0; k < r.size(); ++k) out[k].values[p] = r[k];
    }
    return out;
}

long double interior_max(const GridField& field) {
    long double m = 0;
    for (auto v : field.values)
        if (!std::isnan(v)) m = std::max(m, std::fabs(v));
    return m;
}

OrderStudy convergence_study(const EquationSpec& eq, const SymbolicSolution& s, long double lo, long double hi,
                             const std::vector<std::size_t>& points) {
    if (points.empty()) throw PdeError("no grids given");
    OrderStudy st;
    std::vector<long double> hs;
    const auto coarse = Grid::cube(eq.dim, lo, hi, points.front());
    for (auto m : points) {
        auto grid = Grid::cube(eq.dim, lo, hi, m);
        if ((m - 1) % (points.front() - 1) != 0) throw PdeError("refinements must contain the coarsest grid");
        const std::size_t ratio = (m - 1) / (points.front() - 1);
        auto res = residual_grid(eq, sample_solution(eq, s, grid));
        long double e = 0;
        for (std::size_t p = 0; p < coarse.size(); ++p) {
            auto idx = coarse.multi_index(p);
            bool interior = true;
            for (auto& i : idx) {
                interior = interior && i > 0 && i + 1 < coarse.points;
                i *= ratio;
            }
            if (!interior) continue;
            for (const auto& f : res) e = std::max(e, std::fabs(f.values[grid.flat_index(idx)]));
        }
        st.points.push_back(m);
        st.errors.push_back(e);
        hs.push_back(grid.spacing(0));
    }
    for (std::size_t i = 1; i < st.errors.size(); ++i)
        st.orders.push_back(std::log(st.errors[i - 1] / st.errors[i]) / std::log(hs[i - 1] / hs[i]));
    return st;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

GridSolution read_grid_csv(std::istream& in, const EquationSpec& eq) {
    std::string line;
    if (!std::getline(in, line)) throw PdeError("empty grid file");
    auto header = split(line);
    const std::size_t n = eq.dim, k = eq.functions();
    if (header.size() != n + k) throw PdeError("grid header needs " + std::to_string(n) + " coordinates and " + std::to_string(k) + " value column(s)");
    std::vector<std::vector<long double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split(line);
        if (cells.size() != n + k) throw PdeError("grid line " + std::to_string(lineno) + " has the wrong number of cells");
        std::vector<long double> r;
        for (const auto& c : cells) {
            try {
                std::size_t used = 0;
                r.push_back(std::stold(c, &used));
                if (used != c.size()) throw std::invalid_argument(c);
            } catch (const std::exception&) {
                throw PdeError("grid line " + std::to_string(lineno) + ": bad number '" + c + "'");
            }
        }
        rows.push_back(std::move(r));
    }
    // Axis values, deduplicated up to a relative tolerance.
    std::vector<std::vector<long double>> axes(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<long double> v;
        for (const auto& r : rows) v.push_back(r[a]);
        std::sort(v.begin(), v.end());
        for (auto t : v)
            if (axes[a].empty() || std::fabs(t - axes[a].back()) > 1e-9L * std::max<long double>(1, std::fabs(t))) axes[a].push_back(t);
    }
    const std::size_t m = axes[0].size();
    for (const auto& ax : axes)
        if (ax.size() != m) throw PdeError("grid must have the same number of points on every axis");
    if (m < 2) throw PdeError("grid needs at least two points per axis");
    Grid grid;
    for (const auto& ax : axes) {
        long double hh = (ax.back() - ax.front()) / static_cast<long double>(m - 1);
        for (std::size_t i = 0; i < m; ++i)
            if (std::fabs(ax[i] - (ax.front() + hh * i)) > 1e-6L * hh) throw PdeError("grid spacing is not uniform");
        grid.lo.push_back(ax.front());
        grid.hi.push_back(ax.back());
    }
    grid.points = m;
    if (rows.size() != grid.size()) throw PdeError("grid is not rectangular: expected " + std::to_string(grid.size()) + " rows");
    GridSolution g{grid, std::vector<std::vector<long double>>(k, std::vector<long double>(grid.size(), 0))};
    std::vector<bool> seen(grid.size(), false);
    for (const auto& r : rows) {
        std::size_t p = grid.nearest(std::vector<long double>(r.begin(), r.begin() + static_cast<long>(n)));
        if (seen[p]) throw PdeError("duplicate grid node");
        seen[p] = true;
        for (std::size_t j = 0; j < k; ++j) g.f[j][p] = r[n + j];
    }
    return g;
}

void write_grid_csv(std::ostream& out, const GridSolution& g) {
    const std::size_t n = g.grid.dim();
    for (std::size_t a = 0; a < n; ++a) out << (a ? "," : "") << "x" << a + 1;
    if (g.f.size() == 1)
        out << ",f\n";
    else
        for (std::size_t k = 0; k < g.f.size(); ++k) out << ",f" << k + 1 << (k + 1 == g.f.size() ? "\n" : "");
    std::ostringstream line;
    line.precision(17);
    for (std::size_t p = 0; p < g.grid.size(); ++p) {
        auto x = g.grid.point(p);
        line.str("");
        for (std::size_t a = 0; a < n; ++a) line << (a ? "," : "") << static_cast<double>(x[a]);
        for (const auto& f : g.f) line << "," << static_cast<double>(f[p]);
        out << line.str() << "\n";
    }
}

}  // namespace kronweb
