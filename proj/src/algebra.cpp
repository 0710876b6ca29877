#include "dwt/algebra.hpp"
#include "dwt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dwt {

const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::MFunctionPole: return "MFunctionPole";
    case ErrorKind::NotInSplitPlane: return "NotInSplitPlane";
    case ErrorKind::ChannelDegenerate: return "ChannelDegenerate";
    case ErrorKind::DegenerateWronskian: return "DegenerateWronskian";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::WrongSide: return "WrongSide";
    case ErrorKind::InvalidInterval: return "InvalidInterval";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "ParseError";
    }
    return "Error";
}

Mat2 inverse(const Mat2& m) {
    const cplx d = det(m);
    return Mat2{m.e[3], -m.e[1], -m.e[2], m.e[0]} / d;
}

double norm_max(const Mat2& m) {
    double r = 0.0;
    for (const auto& x : m.e) r = std::max(r, std::abs(x));
    return r;
}

double dist_max(const Mat2& a, const Mat2& b) { return norm_max(a - b); }

const Mat2& sigma1() {
    static const Mat2 s{0.0, 1.0, 1.0, 0.0};
    return s;
}
const Mat2& sigma3() {
    static const Mat2 s{1.0, 0.0, 0.0, -1.0};
    return s;
}
const Mat2& sigma4() {
    static const Mat2 s{0.0, 1.0, -1.0, 0.0};
    return s;
}
const Mat2& U() {
    static const Mat2 u{cplx(-0.5, 0.5), cplx(-0.5, 0.5), cplx(0.5, 0.5), cplx(-0.5, -0.5)};
    return u;
}
// U is unitary, so the inverse is the adjoint; written out to keep it exact.
const Mat2& U_inv() {
    static const Mat2 u{cplx(-0.5, -0.5), cplx(0.5, -0.5), cplx(-0.5, -0.5), cplx(-0.5, 0.5)};
    return u;
}

Vec2 apply_conjugation(Conjugation op, const Vec2& v) {
    const Vec2 c = conj(v);
    switch (op) {
    case Conjugation::C: return c;
    case Conjugation::J: return {c.b, c.a};
    case Conjugation::K: return {c.b, -c.a};
    case Conjugation::Jtilde: return I_ * c;
    }
    return c;
}

Mat2 conjugate_by_U(const Mat2& m, Direction dir) {
    return dir == Direction::forward ? U() * m * U_inv() : U_inv() * m * U();
}

cplx sinhc(cplx d) {
    if (std::abs(d) < 1e-4) {
        const cplx d2 = d * d;
        return 1.0 + d2 / 6.0 * (1.0 + d2 / 20.0);
    }
    return std::sinh(d) / d;
}

Mat2 mat2_exp(const Mat2& a) {
    const cplx h = 0.5 * trace(a);
    Mat2 b = a;
    b(0, 0) -= h;
    b(1, 1) -= h;
    const cplx d = std::sqrt(-det(b));
    const cplx ch = std::cosh(d);
    const cplx sc = sinhc(d);
    Mat2 r = sc * b;
    r(0, 0) += ch;
    r(1, 1) += ch;
    return std::exp(h) * r;
}

}  // namespace dwt
