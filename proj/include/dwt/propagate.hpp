#pragma once

#include "dwt/potential.hpp"

#include <optional>
#include <vector>

namespace dwt {

enum class BoundarySide { none, above, below, left, right };

/// z plus an optional one-sided approach direction used on branch cuts.
struct SpectralParameter {
    cplx z{};
    BoundarySide side = BoundarySide::none;

    SpectralParameter() = default;
    SpectralParameter(cplx z_, BoundarySide s = BoundarySide::none) : z(z_), side(s) {}
    SpectralParameter(double x) : z(x) {}
};

/// Unit direction d such that the side means z + 0*d.
cplx side_direction(BoundarySide s);
const char* to_string(BoundarySide s);

struct BoundaryFrame {
    double theta = 0.0;

    Vec2 alpha() const;
    /// alpha U, as a row vector.
    Vec2 beta() const;
    /// Columns (Theta | Phi) at x = 0 on the given side.
    Mat2 initial(Side side) const;
};

struct FundamentalMatrix {
    SpectralParameter z;
    double x = 0.0;
    Side side = Side::Dirac;
    Mat2 value;

    Vec2 theta() const { return value.col(0); }
    Vec2 phi() const { return value.col(1); }
};

/// Psi' = generator * Psi on a cell.
Mat2 generator(const Mat2& qcell, cplx z, Side side);
Mat2 cell_transfer(const Mat2& qcell, cplx z, double L, Side side);

/// Transfer matrix taking Psi(from) to Psi(to), composed cellwise.
Mat2 transfer(const MatrixPotential& pot, cplx z, double from, double to);

FundamentalMatrix fundamental_matrix(const MatrixPotential& pot, const SpectralParameter& z, double x,
                                     const BoundaryFrame& frame);

/// Classical RK4 oracle, step below 1e-3/max(1,|z|) unless h is given.
FundamentalMatrix rk4_reference(const MatrixPotential& pot, const SpectralParameter& z, double x,
                                const BoundaryFrame& frame, std::optional<double> h = std::nullopt);

/// max over xs of |W(x) - W(0) exp(i int_0^x (Q11 - Q22))| / max(1, |Theta(x)| |Phi(x)|), Q on the Dirac side.
double wronskian_drift(const MatrixPotential& pot, const SpectralParameter& z, const BoundaryFrame& frame,
                       const std::vector<double>& xs);

/// exact cellwise integral of Q11 - Q22 (Dirac side) from 0 to x.
cplx diagonal_imbalance_integral(const MatrixPotential& pot, double x);

/**
 * @brief Solution of the system known at one anchor, cached at every breakpoint.
 *
 * T is Vec2 or Mat2.  Evaluation at x uses one cell exponential from the
 * nearest cached point, so repeated queries stay cheap.
 */
template <class T>
class CellField {
public:
    CellField() = default;
    CellField(const MatrixPotential& pot, cplx z, double anchor, const T& value);

    T operator()(double x) const;
    const MatrixPotential& potential() const { return pot_; }
    cplx z() const { return z_; }

private:
    MatrixPotential pot_;
    cplx z_{};
    double anchor_ = 0.0;
    T anchor_value_{};
    std::vector<T> at_breaks_;
};

extern template class CellField<Vec2>;
extern template class CellField<Mat2>;

}  // namespace dwt
