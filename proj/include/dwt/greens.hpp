#pragma once

#include "dwt/testfunction.hpp"
#include "dwt/weyl.hpp"

#include <vector>

namespace dwt {

struct GreenEvaluation {
    SpectralParameter z;
    double x = 0.0;
    double xp = 0.0;
    Side side = Side::Dirac;
    Mat2 value;
};

/// Product form C Psi-+(x) Psi+-(x')^T sigma1 (Dirac) or K Psi-+(x) Psi+-(x')^T (Hamiltonian).
Mat2 green_product(const WeylSolutions& ws, double x, double xp);
/// The same kernel assembled as F(x) Gamma^(T) F(x')^T (times -i, sigma1 on the Dirac side).
Mat2 green_fgf(const WeylSolutions& ws, double x, double xp);

GreenEvaluation green_dirac(const ScalarPotential& q, Model model, const SpectralParameter& z, double x, double xp,
                            const BoundaryFrame& frame = {});
GreenEvaluation green_hamiltonian(const ScalarPotential& q, Model model, const SpectralParameter& z, double x,
                                  double xp, const BoundaryFrame& frame = {});

struct ResolventField {
    std::vector<double> grid;
    std::vector<Vec2> u;
    double residual = 0.0;
};

struct ResolventOptions {
    Side side = Side::Dirac;
    double tol = 1e-13;  // absolute, per panel
};

/// u = int G(x,x') f(x') dx' at arbitrary points.
std::vector<Vec2> apply_resolvent(const WeylSolutions& ws, const TestFunction& f, const std::vector<double>& points,
                                  double tol = 1e-13);

/**
 * @brief u = R(z) f on a uniform grid plus the residual of the differential equation.
 *
 * The residual uses 4th-order central differences at interior points whose
 * stencil does not straddle a potential breakpoint.
 */
ResolventField resolvent_apply(const ScalarPotential& q, Model model, const SpectralParameter& z,
                               const TestFunction& f, const std::vector<double>& grid, const BoundaryFrame& frame = {},
                               const ResolventOptions& opt = {});

/// <f, R(z) g> = int f(x)^* (R(z) g)(x) dx.
cplx resolvent_form(const WeylSolutions& ws, const TestFunction& f, const TestFunction& g, double tol = 1e-13);

}  // namespace dwt
