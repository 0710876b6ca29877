#include "dwt/propagate.hpp"
#include "dwt/errors.hpp"

#include <cmath>

namespace dwt {

cplx side_direction(BoundarySide s) {
    switch (s) {
    case BoundarySide::above: return I_;
    case BoundarySide::below: return -I_;
    case BoundarySide::right: return 1.0;
    case BoundarySide::left: return -1.0;
    case BoundarySide::none: break;
    }
    return 0.0;
}

const char* to_string(BoundarySide s) {
    switch (s) {
    case BoundarySide::above: return "above";
    case BoundarySide::below: return "below";
    case BoundarySide::left: return "left";
    case BoundarySide::right: return "right";
    case BoundarySide::none: break;
    }
    return "none";
}

Vec2 BoundaryFrame::alpha() const { return {std::cos(theta), std::sin(theta)}; }

Vec2 BoundaryFrame::beta() const {
    const Vec2 a = alpha();
    const Mat2& u = U();
    return {a.a * u(0, 0) + a.b * u(1, 0), a.a * u(0, 1) + a.b * u(1, 1)};
}

Mat2 BoundaryFrame::initial(Side side) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const Mat2 h{c, -s, s, c};
    return side == Side::Hamiltonian ? h : U_inv() * h;
}

Mat2 generator(const Mat2& qcell, cplx z, Side side) {
    Mat2 zq = -qcell;
    zq(0, 0) += z;
    zq(1, 1) += z;
    if (side == Side::Dirac) return (-I_ * sigma3()) * zq;
    return sigma4() * zq;
}

Mat2 cell_transfer(const Mat2& qcell, cplx z, double L, Side side) {
    return mat2_exp(generator(qcell, z, side) * cplx(L));
}

namespace {

// Calls f(s, t, cellvalue) for consecutive pieces of the path from -> to.
template <class F>
void walk(const Piecewise<Mat2>& q, double from, double to, F&& f) {
    if (from == to) return;
    const auto& b = q.breaks;
    double s = from;
    if (to > from) {
        auto it = std::upper_bound(b.begin(), b.end(), from);
        for (; it != b.end() && *it < to; ++it) {
            f(s, *it, q.at(s));
            s = *it;
        }
        f(s, to, q.at(s));
    } else {
        auto it = std::lower_bound(b.begin(), b.end(), from);
        while (it != b.begin()) {
            --it;
            if (!(*it > to)) break;
            f(s, *it, q.at(*it));
            s = *it;
        }
        f(s, to, q.at(to));
    }
}

}  // namespace

Mat2 transfer(const MatrixPotential& pot, cplx z, double from, double to) {
    Mat2 m = Mat2::identity();
    walk(pot.q, from, to, [&](double s, double t, const Mat2& c) { m = cell_transfer(c, z, t - s, pot.side) * m; });
    return m;
}

FundamentalMatrix fundamental_matrix(const MatrixPotential& pot, const SpectralParameter& z, double x,
                                     const BoundaryFrame& frame) {
    FundamentalMatrix f;
    f.z = z;
    f.x = x;
    f.side = pot.side;
    f.value = transfer(pot, z.z, 0.0, x) * frame.initial(pot.side);
    return f;
}

FundamentalMatrix rk4_reference(const MatrixPotential& pot, const SpectralParameter& z, double x,
                                const BoundaryFrame& frame, std::optional<double> h) {
    const double hmax = h.value_or(1e-3 / std::max(1.0, std::abs(z.z)));
    Mat2 y = frame.initial(pot.side);
    walk(pot.q, 0.0, x, [&](double s, double t, const Mat2& c) {
        const Mat2 a = generator(c, z.z, pot.side);
        const double len = t - s;
        const auto n = static_cast<long>(std::ceil(std::abs(len) / hmax));
        const cplx dt = len / static_cast<double>(std::max(1L, n));
        for (long i = 0; i < std::max(1L, n); ++i) {
            const Mat2 k1 = a * y;
            const Mat2 k2 = a * (y + k1 * (0.5 * dt));
            const Mat2 k3 = a * (y + k2 * (0.5 * dt));
            const Mat2 k4 = a * (y + k3 * dt);
            y += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0);
        }
    });
    return {z, x, pot.side, y};
}

cplx diagonal_imbalance_integral(const MatrixPotential& pot, double x) {
    cplx acc = 0.0;
    walk(pot.q, 0.0, x, [&](double s, double t, const Mat2& c) {
        const Mat2 q = pot.side == Side::Dirac ? c : conjugate_by_U(c, Direction::inverse);
        acc += (q(0, 0) - q(1, 1)) * (t - s);
    });
    return acc;
}

double wronskian_drift(const MatrixPotential& pot, const SpectralParameter& z, const BoundaryFrame& frame,
                       const std::vector<double>& xs) {
    if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "wronskian_drift needs sample points");
    const cplx w0 = det(frame.initial(pot.side));
    double worst = 0.0;
    for (double x : xs) {
        const Mat2 f = fundamental_matrix(pot, z, x, frame).value;
        const cplx expect = w0 * std::exp(I_ * diagonal_imbalance_integral(pot, x));
        // f1 g2 - f2 g1 cancels down from |Theta||Phi|, so that sets the roundoff scale.
        const double scale = std::max(1.0, norm2(f.col(0)) * norm2(f.col(1)));
        worst = std::max(worst, std::abs(wronskian(f.col(0), f.col(1)) - expect) / scale);
    }
    return worst;
}

template <class T>
CellField<T>::CellField(const MatrixPotential& pot, cplx z, double anchor, const T& value)
    : pot_(pot), z_(z), anchor_(anchor), anchor_value_(value) {
    const auto& b = pot.q.breaks;
    at_breaks_.resize(b.size());
    const std::size_t j = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), anchor) - b.begin());
    T v = value;
    double x = anchor;
    for (std::size_t k = j; k < b.size(); ++k) {
        v = transfer(pot, z, x, b[k]) * v;
        x = b[k];
        at_breaks_[k] = v;
    }
    v = value;
    x = anchor;
    for (std::size_t k = j; k-- > 0;) {
        v = transfer(pot, z, x, b[k]) * v;
        x = b[k];
        at_breaks_[k] = v;
    }
}

template <class T>
T CellField<T>::operator()(double x) const {
    const auto& q = pot_.q;
    const auto& b = q.breaks;
    auto region = [&b](double y) { return std::upper_bound(b.begin(), b.end(), y) - b.begin(); };
    const auto r = region(x);
    const Side side = pot_.side;
    if (r == region(anchor_)) return cell_transfer(q.at(x), z_, x - anchor_, side) * anchor_value_;
    const auto nb = static_cast<std::ptrdiff_t>(b.size());
    if (r == 0) return cell_transfer(q.left, z_, x - b[0], side) * at_breaks_[0];
    if (r == nb) return cell_transfer(q.right, z_, x - b.back(), side) * at_breaks_.back();
    const auto k = static_cast<std::size_t>(r - 1);
    const std::size_t ref = (x - b[k] <= b[k + 1] - x) ? k : k + 1;
    return cell_transfer(q.cells[k], z_, x - b[ref], side) * at_breaks_[ref];
}

template class CellField<Vec2>;
template class CellField<Mat2>;

}  // namespace dwt
