#include "kronweb/webs.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <limits>
#include <random>

namespace kronweb {

namespace {

Chart extended(const Chart& c, const std::string& parameter) {
    VarList names = c.names();
    for (const auto& n : names)
        if (n == parameter) throw WebError("parameter name clashes with a coordinate");
    names.push_back(parameter);
    return Chart(names);
}

Scalar difference(const Scalar& F, const Scalar& f) { return F - f; }

}  // namespace

SelfPropelledSolver::SelfPropelledSolver(const Chart& chart, const Scalar& F, const Scalar& f, const std::string& parameter)
    : SelfPropelledSolver(chart, F, f, parameter, Options{}) {}

SelfPropelledSolver::SelfPropelledSolver(const Chart& chart, const Scalar& F, const Scalar& f, const std::string& parameter,
                                         Options options)
    : chart_(chart),
      options_(options),
      g_(difference(F, f), extended(chart, parameter)),
      dg_(difference(F, f).derivative(intern_variable(parameter)), extended(chart, parameter)) {
    for (auto s : f.variables())
        for (std::size_t i = 0; i < chart.dim(); ++i)
            if (s == chart.id(i)) throw WebError("f may depend on the parameter only");
}

long double SelfPropelledSolver::residual(const std::vector<long double>& x, long double phi) const {
    auto y = x;
    y.push_back(phi);
    return g_(y);
}

long double SelfPropelledSolver::solve_at(const std::vector<long double>& x, long double start) const {
    auto y = x;
    y.push_back(start);
    long double& phi = y.back();
    long double r = g_(y);
    int polish = 0;
    for (int it = 0; it < options_.max_iterations; ++it) {
        if (!std::isfinite(r)) break;
        if (std::fabs(r) <= options_.tolerance) {
            // Two extra steps bring phi to working precision for finite differences.
            if (polish++ == 2) return phi;
        }
        long double d = dg_(y);
        if (std::fabs(d) < options_.guard) throw WebError("guard violated: |F_l - f'| is too small");
        long double step = r / d, base = phi;
        long double next_r = r;
        for (int half = 0; half < 40; ++half) {
            phi = base - step;
            next_r = g_(y);
            if (std::isfinite(next_r) && std::fabs(next_r) <= std::fabs(r)) break;
            step /= 2;
        }
        if (std::fabs(next_r) > std::fabs(r)) {
            phi = base;
            if (std::fabs(r) <= options_.tolerance) return phi;
            break;
        }
        r = next_r;
    }
    if (std::isfinite(r) && std::fabs(r) <= options_.tolerance) return phi;
    throw WebError("Newton iteration did not converge");
}

SelfPropelledSolver seeded_solver(const Chart& chart, const Scalar& F, const std::vector<mpq_class>& x0, const mpq_class& c,
                                  const std::string& parameter) {
    std::map<SymId, mpq_class> at;
    for (std::size_t i = 0; i < chart.dim(); ++i) at[chart.id(i)] = x0.at(i);
    at[intern_variable(parameter)] = c;
    if (F.has_atoms()) throw WebError("seeded solver needs a rational family F");
    return SelfPropelledSolver(chart, F, Scalar(F.evaluate_exact(at)), parameter);
}

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (std::size_t i = 0; i < dim(); ++i) s *= points;
    return s;
}

std::vector<std::size_t> Grid::multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        idx[i] = flat % points;
        flat /= points;
    }
    return idx;
}

std::size_t Grid::flat_index(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t i = dim(); i-- > 0;) flat = flat * points + idx[i];
    return flat;
}

std::vector<long double> Grid::point(std::size_t flat) const {
    auto idx = multi_index(flat);
    std::vector<long double> x(dim());
    for (std::size_t i = 0; i < dim(); ++i) x[i] = lo[i] + static_cast<long double>(idx[i]) * spacing(i);
    return x;
}

std::size_t Grid::nearest(const std::vector<long double>& x) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        long double t = std::round((x[i] - lo[i]) / spacing(i));
        t = std::clamp<long double>(t, 0, static_cast<long double>(points - 1));
        idx[i] = static_cast<std::size_t>(t);
    }
    return flat_index(idx);
}

Grid Grid::cube(std::size_t dim, long double lo, long double hi, std::size_t points) {
    if (points < 2) throw WebError("a grid needs at least two points per axis");
    return Grid{std::vector<long double>(dim, lo), std::vector<long double>(dim, hi), points};
}

GridField solve_selfpropelled(const SelfPropelledSolver& solver, const Grid& grid, long double seed) {
    if (grid.dim() != solver.chart().dim()) throw WebError("grid dimension does not match the chart");
    GridField out{grid, std::vector<long double>(grid.size(), 0)};
    std::vector<bool> done(grid.size(), false);
    std::vector<std::size_t> center(grid.dim(), grid.points / 2);
    std::size_t c = grid.flat_index(center);
    out.values[c] = solver.solve_at(grid.point(c), seed);
    done[c] = true;
    std::deque<std::size_t> queue{c};
    while (!queue.empty()) {
        std::size_t cur = queue.front();
        queue.pop_front();
        auto idx = grid.multi_index(cur);
        for (std::size_t axis = 0; axis < grid.dim(); ++axis)
            for (int dir : {-1, 1}) {
                if ((dir < 0 && idx[axis] == 0) || (dir > 0 && idx[axis] + 1 == grid.points)) continue;
                auto nb = idx;
                nb[axis] = dir < 0 ? nb[axis] - 1 : nb[axis] + 1;
                std::size_t f = grid.flat_index(nb);
                if (done[f]) continue;
                out.values[f] = solver.solve_at(grid.point(f), out.values[cur]);
                done[f] = true;
                queue.push_back(f);
            }
    }
    return out;
}

NumericFunction selfpropelled_function(const SelfPropelledSolver& solver, const GridField& field) {
    return [solver, field](const std::vector<long double>& x) {
        return solver.solve_at(x, field.values[field.grid.nearest(x)]);
    };
}

long double selfpropelled_fd_residual(const VeroneseWeb& w, const NumericFunction& phi,
                                      const std::vector<std::vector<long double>>& points, long double h) {
    auto frame = web_frame(w);
    std::vector<std::vector<ScalarEvaluator>> ev;
    for (const auto& x : frame) {
        std::vector<ScalarEvaluator> comps;
        for (const auto& s : x.components()) comps.emplace_back(s, w.chart);
        ev.push_back(std::move(comps));
    }
    const std::size_t dim = w.chart.dim();
    long double worst = 0;
    for (const auto& x : points) {
        std::vector<long double> grad(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            auto xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            grad[i] = (phi(xp) - phi(xm)) / (2 * h);
        }
        long double value = phi(x);
        std::vector<long double> xphi(frame.size(), 0);
        for (std::size_t k = 0; k < frame.size(); ++k)
            for (std::size_t i = 0; i < dim; ++i) xphi[k] += ev[k][i](x) * grad[i];
        for (std::size_t k = 0; k + 1 < frame.size(); ++k)
            worst = std::max(worst, std::fabs(value * xphi[k] - xphi[k + 1]));
    }
    return worst;
}

long double numeric_jacobian(const std::vector<NumericFunction>& fs, const std::vector<long double>& x, long double h) {
    const auto n = static_cast<Eigen::Index>(x.size());
    if (static_cast<Eigen::Index>(fs.size()) != n) throw WebError("the Jacobian needs as many functions as coordinates");
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> j(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        auto xp = x, xm = x;
        xp[static_cast<std::size_t>(c)] += h;
        xm[static_cast<std::size_t>(c)] -= h;
        for (Eigen::Index r = 0; r < n; ++r)
            j(r, c) = (fs[static_cast<std::size_t>(r)](xp) - fs[static_cast<std::size_t>(r)](xm)) / (2 * h);
    }
    return j.determinant();
}

ExtensionRun numeric_extension_pipeline(const VeroneseWeb& w, const Scalar& F, const std::vector<mpq_class>& levels,
                                        const std::vector<long double>& seeds, const Grid& grid, int samples,
                                        std::uint64_t seed, const std::string& parameter) {
    if (w.chart.dim() != 3) throw WebError("the extension pipeline needs a 3D web");
    if (levels.size() != 3 || seeds.size() != 3) throw WebError("the extension needs three self-propelled functions");
    auto frame = adapted_frame(pno_from_web(w));
    std::vector<NumericFunction> phis;
    for (std::size_t k = 0; k < 3; ++k) {
        SelfPropelledSolver solver(w.chart, F, Scalar(levels[k]), parameter);
        phis.push_back(selfpropelled_function(solver, solve_selfpropelled(solver, grid, seeds[k])));
    }
    ExtensionRun run;
    // Stay two cells inside so every stencil and Newton start is interior.
    std::mt19937_64 rng(seed);
    for (int t = 0; t < samples; ++t) {
        std::vector<long double> x;
        for (std::size_t i = 0; i < grid.dim(); ++i) {
            long double m = 2 * grid.spacing(i);
            std::uniform_real_distribution<long double> u(grid.lo[i] + m, grid.hi[i] - m);
            x.push_back(u(rng));
        }
        run.points.push_back(x);
    }
    NumericExtension ext(frame, phis);
    run.min_jacobian = std::numeric_limits<long double>::infinity();
    for (const auto& phi : phis) run.residual = std::max(run.residual, selfpropelled_fd_residual(w, phi, run.points));
    for (const auto& x : run.points) {
        run.min_jacobian = std::min(run.min_jacobian, std::fabs(numeric_jacobian(phis, x)));
        run.torsion = std::max(run.torsion, ext.torsion_at(x));
    }
    return run;
}

}  // namespace kronweb
