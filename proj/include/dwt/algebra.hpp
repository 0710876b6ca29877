#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace dwt {

using cplx = std::complex<double>;
inline constexpr cplx I_{0.0, 1.0};

struct Vec2 {
    cplx a{}, b{};

    cplx& operator[](int i) { return i == 0 ? a : b; }
    const cplx& operator[](int i) const { return i == 0 ? a : b; }

    Vec2& operator+=(const Vec2& o) { a += o.a; b += o.b; return *this; }
    Vec2& operator-=(const Vec2& o) { a -= o.a; b -= o.b; return *this; }
    Vec2& operator*=(cplx s) { a *= s; b *= s; return *this; }
};

inline Vec2 operator+(Vec2 x, const Vec2& y) { return x += y; }
inline Vec2 operator-(Vec2 x, const Vec2& y) { return x -= y; }
inline Vec2 operator-(const Vec2& x) { return {-x.a, -x.b}; }
inline Vec2 operator*(cplx s, Vec2 x) { return x *= s; }
inline Vec2 operator*(Vec2 x, cplx s) { return x *= s; }
inline Vec2 operator/(Vec2 x, cplx s) { return {x.a / s, x.b / s}; }

inline double norm_max(const Vec2& v) { return std::max(std::abs(v.a), std::abs(v.b)); }
inline double norm2(const Vec2& v) { return std::sqrt(std::norm(v.a) + std::norm(v.b)); }
// v^T w, no conjugation.
inline cplx dot(const Vec2& v, const Vec2& w) { return v.a * w.a + v.b * w.b; }
inline Vec2 conj(const Vec2& v) { return {std::conj(v.a), std::conj(v.b)}; }

/// Row-major 2x2 complex matrix.
struct Mat2 {
    std::array<cplx, 4> e{};

    Mat2() = default;
    Mat2(cplx m00, cplx m01, cplx m10, cplx m11) : e{m00, m01, m10, m11} {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }
    static Mat2 columns(const Vec2& c0, const Vec2& c1) { return {c0.a, c1.a, c0.b, c1.b}; }
    static Mat2 outer(const Vec2& u, const Vec2& v) { return {u.a * v.a, u.a * v.b, u.b * v.a, u.b * v.b}; }

    cplx& operator()(int r, int c) { return e[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return e[2 * r + c]; }

    Vec2 col(int c) const { return {e[c], e[2 + c]}; }
    Vec2 row(int r) const { return {e[2 * r], e[2 * r + 1]}; }

    Mat2& operator+=(const Mat2& o) { for (int i = 0; i < 4; ++i) e[i] += o.e[i]; return *this; }
    Mat2& operator-=(const Mat2& o) { for (int i = 0; i < 4; ++i) e[i] -= o.e[i]; return *this; }
    Mat2& operator*=(cplx s) { for (auto& x : e) x *= s; return *this; }
};

inline Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
inline Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }
inline Mat2 operator-(Mat2 x) { return x *= -1.0; }
inline Mat2 operator*(cplx s, Mat2 x) { return x *= s; }
inline Mat2 operator*(Mat2 x, cplx s) { return x *= s; }
inline Mat2 operator/(Mat2 x, cplx s) { for (auto& v : x.e) v /= s; return x; }

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3],
            x.e[2] * y.e[0] + x.e[3] * y.e[2], x.e[2] * y.e[1] + x.e[3] * y.e[3]};
}
inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.e[0] * v.a + m.e[1] * v.b, m.e[2] * v.a + m.e[3] * v.b};
}

inline cplx det(const Mat2& m) { return m.e[0] * m.e[3] - m.e[1] * m.e[2]; }
inline cplx trace(const Mat2& m) { return m.e[0] + m.e[3]; }
inline Mat2 transpose(const Mat2& m) { return {m.e[0], m.e[2], m.e[1], m.e[3]}; }
inline Mat2 conj(const Mat2& m) { return {std::conj(m.e[0]), std::conj(m.e[1]), std::conj(m.e[2]), std::conj(m.e[3])}; }
inline Mat2 adjoint(const Mat2& m) { return conj(transpose(m)); }
Mat2 inverse(const Mat2& m);

double norm_max(const Mat2& m);
double dist_max(const Mat2& a, const Mat2& b);

// Pauli-type constants.
const Mat2& sigma1();
const Mat2& sigma3();
const Mat2& sigma4();  // [[0,1],[-1,0]]
const Mat2& U();
const Mat2& U_inv();

/// W(F,G) = f1 g2 - f2 g1 = F^T sigma4 G.
inline cplx wronskian(const Vec2& f, const Vec2& g) { return f.a * g.b - f.b * g.a; }

enum class Conjugation { C, J, K, Jtilde };
Vec2 apply_conjugation(Conjugation op, const Vec2& v);

enum class Direction { forward, inverse };
/// forward: U M U^-1, inverse: U^-1 M U.
Mat2 conjugate_by_U(const Mat2& m, Direction dir);

/// sinh(d)/d with the removable singularity filled in.
cplx sinhc(cplx d);

/// Exact 2x2 exponential by trace splitting.
Mat2 mat2_exp(const Mat2& a);

}  // namespace dwt
