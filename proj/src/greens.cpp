#include "dwt/greens.hpp"
#include "dwt/errors.hpp"
#include "dwt/quadrature.hpp"

#include <cmath>

namespace dwt {

namespace {

cplx wronskian_normalizer(const WeylSolutions& ws) {
    const cplx d = ws.m_minus() - ws.m_plus();
    if (std::abs(d) <= 1e-14 * std::max({1.0, std::abs(ws.m_minus()), std::abs(ws.m_plus())}))
        throw Error(ErrorKind::DegenerateWronskian, "m_minus equals m_plus");
    return ws.side() == Side::Dirac ? -I_ / d : 1.0 / d;
}

Vec2 right_factor(Side side, const Vec2& v) { return side == Side::Dirac ? Vec2{v.b, v.a} : v; }

}  // namespace

Mat2 green_product(const WeylSolutions& ws, double x, double xp) {
    if (x == xp) throw Error(ErrorKind::CoincidentPoints, "x equals x'");
    const cplx c = wronskian_normalizer(ws);
    // Psi^T sigma1 is Psi with its components swapped.
    if (x < xp) return c * Mat2::outer(ws.psi_minus(x), right_factor(ws.side(), ws.psi_plus(xp)));
    return c * Mat2::outer(ws.psi_plus(x), right_factor(ws.side(), ws.psi_minus(xp)));
}

Mat2 green_fgf(const WeylSolutions& ws, double x, double xp) {
    if (x == xp) throw Error(ErrorKind::CoincidentPoints, "x equals x'");
    const Mat2 g = gamma_matrix(ws.m_minus(), ws.m_plus());
    const Mat2 core = ws.fundamental(x) * (x < xp ? transpose(g) : g) * transpose(ws.fundamental(xp));
    if (ws.side() == Side::Hamiltonian) return core;
    return -I_ * core * sigma1();
}

GreenEvaluation green_dirac(const ScalarPotential& q, Model model, const SpectralParameter& z, double x, double xp,
                            const BoundaryFrame& frame) {
    if (x == xp) throw Error(ErrorKind::CoincidentPoints, "x equals x'");
    const WeylSolutions ws(q, model, z, frame, Side::Dirac);
    return {z, x, xp, Side::Dirac, green_product(ws, x, xp)};
}

GreenEvaluation green_hamiltonian(const ScalarPotential& q, Model model, const SpectralParameter& z, double x,
                                  double xp, const BoundaryFrame& frame) {
    if (x == xp) throw Error(ErrorKind::CoincidentPoints, "x equals x'");
    const WeylSolutions ws(q, model, z, frame, Side::Hamiltonian);
    return {z, x, xp, Side::Hamiltonian, green_product(ws, x, xp)};
}

std::vector<Vec2> apply_resolvent(const WeylSolutions& ws, const TestFunction& f, const std::vector<double>& points,
                                  double tol) {
    const double a = f.lo(), b = f.hi();
    std::vector<double> cuts{a, b};
    for (double x : ws.potential().q.breaks)
        if (x > a && x < b) cuts.push_back(x);
    for (double x : points) cuts.push_back(std::clamp(x, a, b));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const Side side = ws.side();
    // Components: (Psi-^T S f, Psi+^T S f) with S = sigma1 on the Dirac side.
    auto kernel = [&](double x) {
        const Vec2 sf = right_factor(side, f(x));
        return Vec2{dot(ws.psi_minus(x), sf), dot(ws.psi_plus(x), sf)};
    };
    std::vector<Vec2> cum(cuts.size());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        cum[k + 1] = cum[k] + adaptive_simpson<Vec2>(kernel, cuts[k], cuts[k + 1], tol);

    const cplx c = wronskian_normalizer(ws);
    const Vec2 total = cum.back();
    std::vector<Vec2> u;
    u.reserve(points.size());
    for (double x : points) {
        const double xc = std::clamp(x, a, b);
        const auto k = static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), xc) - cuts.begin());
        const cplx below = cum[k].a;
        const cplx above = total.b - cum[k].b;
        Vec2 v{};
        if (below != 0.0) v += below * ws.psi_plus(x);
        if (above != 0.0) v += above * ws.psi_minus(x);
        u.push_back(c * v);
    }
    return u;
}

ResolventField resolvent_apply(const ScalarPotential& q, Model model, const SpectralParameter& z,
                               const TestFunction& f, const std::vector<double>& grid, const BoundaryFrame& frame,
                               const ResolventOptions& opt) {
    const WeylSolutions ws(q, model, z, frame, opt.side);
    ResolventField out;
    out.grid = grid;
    out.u = apply_resolvent(ws, f, grid, opt.tol);
    const auto& pot = ws.potential();
    const auto& breaks = pot.q.breaks;
    const std::size_t n = grid.size();
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double lo = grid[i - 2], hi = grid[i + 2];
        const bool straddles = std::any_of(breaks.begin(), breaks.end(), [&](double x) { return x > lo && x < hi; });
        if (straddles) continue;
        const double h = 0.5 * (grid[i + 1] - grid[i - 1]);
        const Vec2 du = (out.u[i - 2] - 8.0 * out.u[i - 1] + 8.0 * out.u[i + 1] - out.u[i + 2]) * (1.0 / (12.0 * h));
        const Mat2& qx = pot.q.at(grid[i]);
        const Mat2 lead = opt.side == Side::Dirac ? I_ * sigma3() : -sigma4();
        const Vec2 r = lead * du + qx * out.u[i] - z.z * out.u[i] - f(grid[i]);
        out.residual = std::max(out.residual, norm_max(r));
    }
    return out;
}

cplx resolvent_form(const WeylSolutions& ws, const TestFunction& f, const TestFunction& g, double tol) {
    const double a = f.lo(), b = f.hi();
    std::vector<double> cuts{a, b};
    for (double x : ws.potential().q.breaks)
        if (x > a && x < b) cuts.push_back(x);
    for (double x : {g.lo(), g.hi()})
        if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    QuadRule rule;
    const double rate = 1.0 + std::abs(f.freq) + std::abs(g.freq) + std::abs(ws.z().z);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double len = cuts[k + 1] - cuts[k];
        const int panels = std::max(2, static_cast<int>(std::ceil(len * rate)));
        auto r = gauss_legendre(cuts[k], cuts[k + 1], panels);
        rule.x.insert(rule.x.end(), r.x.begin(), r.x.end());
        rule.w.insert(rule.w.end(), r.w.begin(), r.w.end());
    }
    const auto u = apply_resolvent(ws, g, rule.x, tol);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * dot(conj(f(rule.x[i])), u[i]);
    return acc;
}

}  // namespace dwt
