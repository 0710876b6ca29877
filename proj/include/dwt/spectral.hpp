#pragma once

#include "dwt/greens.hpp"
#include "dwt/testfunction.hpp"

#include <utility>
#include <vector>

namespace dwt {

struct SpectralMeasureSample {
    double l1 = 0.0;
    double l2 = 0.0;
    Mat2 value;
    std::vector<std::pair<double, Mat2>> eps_trail;  // (eps, raw value), eps decreasing
    bool converged = false;
};

struct TransformValue {
    double lambda = 0.0;
    Vec2 value;
};

/// eps ladder eps_k = eps0 * 2^-k, k < levels, first-order Richardson.
struct Ladder {
    double eps0 = 1e-2;
    int levels = 13;
};

bool self_adjoint(Model model);

/// (1/pi) Im M(l + i eps) or (M(l + i eps) - M(l - i eps)) / (2 pi i).
Mat2 stieltjes_density(const ScalarPotential& q, Model model, double lambda, double eps, const BoundaryFrame& frame = {});
/// Same density from the one-sided limits M(l +- i0).
Mat2 boundary_density(const ScalarPotential& q, Model model, double lambda, const BoundaryFrame& frame = {});
/// Pointwise eps -> 0 limit of stieltjes_density along the ladder.
SpectralMeasureSample density_limit(const ScalarPotential& q, Model model, double lambda, const BoundaryFrame& frame = {},
                                    double tol = 1e-8, const Ladder& ladder = {});

SpectralMeasureSample omega_interval(const ScalarPotential& q, Model model, double l1, double l2,
                                     const BoundaryFrame& frame = {}, double tol = 1e-6, const Ladder& ladder = {});

/// int F^H(lambda, x)^T f(x) dx (f on the Hamiltonian side).
TransformValue transform_t0(const ScalarPotential& q, Model model, const TestFunction& f, double lambda,
                            const BoundaryFrame& frame = {});

/// f and g live on `side`; the Dirac side is mapped through U first.
cplx projection_via_transform(const ScalarPotential& q, Model model, const TestFunction& f, const TestFunction& g,
                              double l1, double l2, const BoundaryFrame& frame = {}, Side side = Side::Dirac);

struct StoneResult {
    cplx value{};
    bool converged = false;
    std::vector<std::pair<double, cplx>> eps_trail;
};

StoneResult projection_via_stone_detail(const ScalarPotential& q, Model model, const TestFunction& f,
                                        const TestFunction& g, double l1, double l2, const BoundaryFrame& frame = {},
                                        Side side = Side::Dirac, double tol = 1e-8, const Ladder& ladder = {});
/// Throws NonConvergence when the ladder does not settle.
cplx projection_via_stone(const ScalarPotential& q, Model model, const TestFunction& f, const TestFunction& g,
                          double l1, double l2, const BoundaryFrame& frame = {}, Side side = Side::Dirac);

/// sup of (mu^2 - |q0|^2)^(-1/2) over [sqrt(l1^2+|q0|^2), sqrt(l2^2+|q0|^2)].
double blowup_norm(cplx q0, double l1, double l2);

/// (2 pi)^(-1/2) int exp(+i p x) h(x) dx, and the exp(-i p x) version.
cplx fourier_hat(const TestFunction& h, double p);
cplx fourier_check(const TestFunction& h, double p);
double l2_norm_sq(const TestFunction& h);

struct QuadraticForm {
    cplx value{};         // mu-integral after mu = |q0| cosh s
    cplx value_lambda{};  // original lambda-integral
};

/// <f, E g> for f = (h, 0), g = (0, h) in the constant focusing model.
QuadraticForm focusing_quadratic_form(cplx q0, const TestFunction& h, double l1, double l2);

}  // namespace dwt
