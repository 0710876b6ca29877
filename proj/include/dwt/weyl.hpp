#pragma once

#include "dwt/propagate.hpp"

namespace dwt {

/// S(z) = sqrt(z^2 - |q0|^2) (defocusing) or sqrt(z^2 + |q0|^2) (focusing), Im S > 0.
struct BranchFn {
    Model model = Model::Defocusing;
    cplx q0{};
};

bool on_cut(const BranchFn& bf, cplx z);
cplx branch_sqrt(const BranchFn& bf, const SpectralParameter& z);

enum class Sign { plus, minus };
enum class Provenance { closed_form, numeric };
const char* to_string(Provenance p);

struct MCoefficient {
    SpectralParameter z;
    Sign sign = Sign::plus;
    BoundaryFrame frame;
    cplx value{};
    Provenance provenance = Provenance::closed_form;
};

/// Closed forms for constant q0 in the reference frame theta = 0.
MCoefficient m_closed_form(Model model, cplx q0, const SpectralParameter& z, Sign sign);

MCoefficient m_numeric(const ScalarPotential& q, Model model, const SpectralParameter& z, Sign sign,
                       const BoundaryFrame& frame = {}, Side side = Side::Dirac);

Mat2 gamma_matrix(cplx m_minus, cplx m_plus);
Mat2 m_matrix(cplx m_minus, cplx m_plus);

/// max over signs of |conj(m(z)) m(conj z) + 1| (focusing only).
double jsym_residual(Model model, const ScalarPotential& q, const SpectralParameter& z, const BoundaryFrame& frame = {});
/// max over signs of |conj(m(z, theta)) - m(conj z, theta - pi/2)| (focusing only).
double rotation_residual(const ScalarPotential& q, const SpectralParameter& z, double theta);
/// max over signs of |conj(m(z)) - m(conj z)| (defocusing only).
double reflection_residual(const ScalarPotential& q, const SpectralParameter& z, const BoundaryFrame& frame = {});

SpectralParameter conj(const SpectralParameter& z);

/**
 * @brief Weyl solutions Psi+- = Theta + m+- Phi for one z, frame and side.
 *
 * Psi+ is evaluated by carrying the decaying tail eigenvector inward from the
 * outermost breakpoint (likewise Psi- from the left), so it stays accurate far
 * from x = 0 where F(x)(1, m) would cancel.
 */
class WeylSolutions {
public:
    WeylSolutions(const ScalarPotential& q, Model model, const SpectralParameter& z, const BoundaryFrame& frame = {},
                  Side side = Side::Dirac);

    cplx m_plus() const { return plus_.m; }
    cplx m_minus() const { return minus_.m; }
    Vec2 psi_plus(double x) const { return plus_.eval(x); }
    Vec2 psi_minus(double x) const { return minus_.eval(x); }
    Mat2 fundamental(double x) const { return f_(x); }
    const MatrixPotential& potential() const { return pot_; }
    Side side() const { return pot_.side; }
    const SpectralParameter& z() const { return z_; }

    struct Branch {
        cplx m{};
        cplx mu{};       // tail eigenvalue
        double anchor{};  // outermost breakpoint on this side
        Vec2 v;          // normalized value at anchor
        bool right = true;
        CellField<Vec2> inner;
        Vec2 eval(double x) const;
    };

private:
    MatrixPotential pot_;
    SpectralParameter z_;
    CellField<Mat2> f_;
    Branch plus_, minus_;
};

/// One branch only; used by m_numeric.
WeylSolutions::Branch weyl_branch(const MatrixPotential& pot, const SpectralParameter& z, Sign sign,
                                  const BoundaryFrame& frame);

MatrixPotential side_potential(const ScalarPotential& q, Model model, Side side);

}  // namespace dwt
