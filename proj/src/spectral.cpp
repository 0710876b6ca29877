#include "dwt/spectral.hpp"
#include "dwt/errors.hpp"
#include "dwt/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace dwt {

namespace {

constexpr double pi = std::numbers::pi;

void require_model(Model model) {
    if (model == Model::GeneralJSA)
        throw Error(ErrorKind::InvalidArgument, "spectral measures need the defocusing or focusing model");
}

void require_interval(double l1, double l2) {
    if (!(l1 < l2) || !std::isfinite(l1) || !std::isfinite(l2))
        throw Error(ErrorKind::InvalidInterval, "need l1 < l2");
}

Mat2 m_at(const ScalarPotential& q, Model model, const SpectralParameter& z, const BoundaryFrame& frame) {
    const cplx mm = m_numeric(q, model, z, Sign::minus, frame).value;
    const cplx mp = m_numeric(q, model, z, Sign::plus, frame).value;
    return m_matrix(mm, mp);
}

Mat2 entrywise_im(const Mat2& m) {
    return {m.e[0].imag(), m.e[1].imag(), m.e[2].imag(), m.e[3].imag()};
}

// Points where the density of the tails may be singular.
std::vector<double> band_edges(const ScalarPotential& q, Model model) {
    std::vector<double> e;
    if (model == Model::Defocusing) {
        for (cplx t : {q.left, q.right}) {
            const double r = std::abs(t);
            if (r > 0) {
                e.push_back(-r);
                e.push_back(r);
            }
        }
    } else if (std::abs(q.left) > 0 || std::abs(q.right) > 0) {
        e.push_back(0.0);
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

// Gauss-Legendre in lambda; pieces ending within 1e-2 of a band edge use
// lambda = edge +- s^2, which absorbs the inverse square-root singularity.
QuadRule lambda_rule(double l1, double l2, const std::vector<double>& edges, int panels) {
    std::vector<double> cuts{l1};
    for (double e : edges)
        if (e > l1 && e < l2) cuts.push_back(e);
    cuts.push_back(l2);
    auto near = [&](double x) {
        return std::any_of(edges.begin(), edges.end(), [x](double e) { return std::abs(x - e) < 1e-2; });
    };
    QuadRule r;
    auto plain = [&](double a, double b) {
        auto p = gauss_legendre(a, b, panels);
        r.x.insert(r.x.end(), p.x.begin(), p.x.end());
        r.w.insert(r.w.end(), p.w.begin(), p.w.end());
    };
    auto graded = [&](double a, double b, bool at_left) {
        auto p = gauss_legendre(0.0, std::sqrt(b - a), panels);
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            const double s = p.x[i];
            r.x.push_back(at_left ? a + s * s : b - s * s);
            r.w.push_back(2.0 * s * p.w[i]);
        }
    };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        const bool na = near(a), nb = near(b);
        if (na && nb) {
            const double m = 0.5 * (a + b);
            graded(a, m, true);
            graded(m, b, false);
        } else if (na) {
            graded(a, b, true);
        } else if (nb) {
            graded(a, b, false);
        } else {
            plain(a, b);
        }
    }
    return r;
}

int lambda_panels(double l1, double l2, double extent) {
    return std::max(4, static_cast<int>(std::ceil((l2 - l1) * (1.0 + extent))));
}

template <class T>
struct Extrapolation {
    T value{};
    bool converged = false;
    std::vector<std::pair<double, T>> trail;
};

// First-order Richardson along the ladder; stops once successive extrapolants agree to tol.
template <class T, class F>
Extrapolation<T> extrapolate(F&& at_eps, const Ladder& ladder, double tol) {
    Extrapolation<T> out;
    T prev_raw{}, prev_rich{};
    bool have_rich = false;
    for (int k = 0; k < ladder.levels; ++k) {
        const double eps = ladder.eps0 * std::ldexp(1.0, -k);
        const T raw = at_eps(eps);
        out.trail.emplace_back(eps, raw);
        if (k > 0) {
            const T rich = 2.0 * raw - prev_raw;
            out.value = rich;
            if (have_rich && qnorm(rich - prev_rich) < tol) {
                out.converged = true;
                return out;
            }
            prev_rich = rich;
            have_rich = true;
        } else {
            out.value = raw;
        }
        prev_raw = raw;
    }
    return out;
}

}  // namespace

bool self_adjoint(Model model) { return model == Model::Defocusing; }

Mat2 stieltjes_density(const ScalarPotential& q, Model model, double lambda, double eps, const BoundaryFrame& frame) {
    require_model(model);
    if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
    if (self_adjoint(model)) return entrywise_im(m_at(q, model, cplx(lambda, eps), frame)) * (1.0 / pi);
    const Mat2 up = m_at(q, model, cplx(lambda, eps), frame);
    const Mat2 dn = m_at(q, model, cplx(lambda, -eps), frame);
    return (up - dn) / (2.0 * pi * I_);
}

Mat2 boundary_density(const ScalarPotential& q, Model model, double lambda, const BoundaryFrame& frame) {
    require_model(model);
    const Mat2 up = m_at(q, model, {cplx(lambda), BoundarySide::above}, frame);
    if (self_adjoint(model)) return entrywise_im(up) * (1.0 / pi);
    const Mat2 dn = m_at(q, model, {cplx(lambda), BoundarySide::below}, frame);
    return (up - dn) / (2.0 * pi * I_);
}

SpectralMeasureSample density_limit(const ScalarPotential& q, Model model, double lambda, const BoundaryFrame& frame,
                                    double tol, const Ladder& ladder) {
    auto ex = extrapolate<Mat2>([&](double eps) { return stieltjes_density(q, model, lambda, eps, frame); }, ladder, tol);
    return {lambda, lambda, ex.value, std::move(ex.trail), ex.converged};
}

SpectralMeasureSample omega_interval(const ScalarPotential& q, Model model, double l1, double l2,
                                     const BoundaryFrame& frame, double tol, const Ladder& ladder) {
    require_model(model);
    require_interval(l1, l2);
    const QuadRule rule = lambda_rule(l1, l2, band_edges(q, model), 8);
    auto at_eps = [&](double eps) {
        Mat2 acc;
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            acc += stieltjes_density(q, model, rule.x[i], eps, frame) * rule.w[i];
        return acc;
    };
    auto ex = extrapolate<Mat2>(at_eps, ladder, tol);
    return {l1, l2, ex.value, std::move(ex.trail), ex.converged};
}

TransformValue transform_t0(const ScalarPotential& q, Model model, const TestFunction& f, double lambda,
                            const BoundaryFrame& frame) {
    require_model(model);
    const MatrixPotential pot = side_potential(q, model, Side::Hamiltonian);
    const CellField<Mat2> fm(pot, cplx(lambda), 0.0, frame.initial(Side::Hamiltonian));
    std::vector<double> cuts{f.lo(), f.hi()};
    for (double x : pot.q.breaks)
        if (x > f.lo() && x < f.hi()) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    // Each piece is smooth (polynomial times exponentials), so panels of a few
    // oscillation lengths make 20-point Gauss-Legendre exact to roundoff.
    double qmax = std::max(std::abs(q.left), std::abs(q.right));
    for (cplx c : q.cells) qmax = std::max(qmax, std::abs(c));
    const double rate = std::abs(lambda) + std::abs(f.freq) + qmax + 1.0;
    auto integrand = [&](double x) { return transpose(fm(x)) * f(x); };
    Vec2 acc{};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double len = cuts[k + 1] - cuts[k];
        const int panels = 1 + static_cast<int>(std::ceil(len * rate / 3.0));
        acc += integrate<Vec2>(gauss_legendre(cuts[k], cuts[k + 1], panels), integrand);
    }
    return {lambda, acc};
}

namespace {

double extent(const TestFunction& f, const TestFunction& g) {
    return std::max({std::abs(f.lo()), std::abs(f.hi()), std::abs(g.lo()), std::abs(g.hi())});
}

}  // namespace

cplx projection_via_transform(const ScalarPotential& q, Model model, const TestFunction& f0, const TestFunction& g0,
                              double l1, double l2, const BoundaryFrame& frame, Side side) {
    require_model(model);
    require_interval(l1, l2);
    const TestFunction f = side == Side::Dirac ? f0.mapped(U()) : f0;
    const TestFunction g = side == Side::Dirac ? g0.mapped(U()) : g0;
    const bool sa = self_adjoint(model);
    const TestFunction fl = sa ? f : f.conjugated();
    auto density = [&](double lambda) {
        const Vec2 tf = transform_t0(q, model, fl, lambda, frame).value;
        const Vec2 tg = transform_t0(q, model, g, lambda, frame).value;
        const Mat2 rho = boundary_density(q, model, lambda, frame);
        return dot(sa ? conj(tf) : tf, rho * tg);
    };
    const auto edges = band_edges(q, model);
    int panels = lambda_panels(l1, l2, extent(f, g));
    cplx prev = integrate<cplx>(lambda_rule(l1, l2, edges, panels), density);
    for (int it = 0; it < 4; ++it) {
        panels *= 2;
        const cplx next = integrate<cplx>(lambda_rule(l1, l2, edges, panels), density);
        const bool done = std::abs(next - prev) <= 1e-11 * std::max(1.0, std::abs(next));
        prev = next;
        if (done) break;
    }
    return prev;
}

StoneResult projection_via_stone_detail(const ScalarPotential& q, Model model, const TestFunction& f,
                                        const TestFunction& g, double l1, double l2, const BoundaryFrame& frame,
                                        Side side, double tol, const Ladder& ladder) {
    require_model(model);
    require_interval(l1, l2);
    const QuadRule rule = lambda_rule(l1, l2, band_edges(q, model), 2 * lambda_panels(l1, l2, extent(f, g)));
    auto at_eps = [&](double eps) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const WeylSolutions up(q, model, cplx(rule.x[i], eps), frame, side);
            const WeylSolutions dn(q, model, cplx(rule.x[i], -eps), frame, side);
            acc += rule.w[i] * (resolvent_form(up, f, g) - resolvent_form(dn, f, g));
        }
        return acc / (2.0 * pi * I_);
    };
    auto ex = extrapolate<cplx>(at_eps, ladder, tol);
    return {ex.value, ex.converged, std::move(ex.trail)};
}

cplx projection_via_stone(const ScalarPotential& q, Model model, const TestFunction& f, const TestFunction& g,
                          double l1, double l2, const BoundaryFrame& frame, Side side) {
    auto r = projection_via_stone_detail(q, model, f, g, l1, l2, frame, side);
    if (!r.converged) throw Error(ErrorKind::NonConvergence, "Stone eps-ladder did not settle");
    return r.value;
}

double blowup_norm(cplx q0, double l1, double l2) {
    if (!(l1 > 0) || !(l1 < l2) || !std::isfinite(l2))
        throw Error(ErrorKind::InvalidInterval, "need 0 < lambda1 < lambda2");
    const double r = std::abs(q0);
    if (r == 0.0) throw Error(ErrorKind::InvalidArgument, "q0 must be nonzero");
    // t(mu) = ((mu - r)(mu + r))^(-1/2) with mu - r formed without cancellation.
    auto t_at = [r](double l) {
        const double mu = std::hypot(l, r);
        const double gap = l * l / (mu + r);
        return 1.0 / std::sqrt(gap * (mu + r));
    };
    return std::max(t_at(l1), t_at(l2));
}

namespace {

cplx fourier(const TestFunction& h, double p, double sign) {
    const double rate = std::abs(p) + std::abs(h.freq) + 1.0;
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * h.width * rate / 2.0)));
    const QuadRule r = gauss_legendre(h.lo(), h.hi(), panels);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i)
        acc += r.w[i] * std::exp(cplx(0.0, sign * p * r.x[i])) * h.scalar(r.x[i]);
    return acc / std::sqrt(2.0 * pi);
}

}  // namespace

cplx fourier_hat(const TestFunction& h, double p) { return fourier(h, p, 1.0); }
cplx fourier_check(const TestFunction& h, double p) { return fourier(h, p, -1.0); }

double l2_norm_sq(const TestFunction& h) {
    const QuadRule r = gauss_legendre(h.lo(), h.hi(), 4);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * std::norm(h.scalar(r.x[i]));
    return acc;
}

QuadraticForm focusing_quadratic_form(cplx q0, const TestFunction& h, double l1, double l2) {
    if (!(l1 > 0) || !(l1 < l2)) throw Error(ErrorKind::InvalidInterval, "need 0 < lambda1 < lambda2");
    const double r = std::abs(q0);
    if (r == 0.0) throw Error(ErrorKind::InvalidArgument, "q0 must be nonzero");
    auto power = [&](double mu) { return std::norm(fourier_hat(h, mu)) + std::norm(fourier_check(h, mu)); };
    const double scale = l2_norm_sq(h);
    const double tol = 1e-12 * std::max(1.0, scale);
    // mu = r cosh s turns dmu / sqrt(mu^2 - r^2) into ds.
    const double s1 = std::asinh(l1 / r), s2 = std::asinh(l2 / r);
    const double by_s = adaptive_simpson<double>([&](double s) { return power(r * std::cosh(s)); }, s1, s2, tol, 50);
    const double by_l = adaptive_simpson<double>(
        [&](double l) {
            const double mu = std::hypot(l, r);
            return power(mu) / mu;
        },
        l1, l2, tol, 50);
    const cplx pre = -I_ * q0 / 2.0;
    return {pre * by_s, pre * by_l};
}

}  // namespace dwt
