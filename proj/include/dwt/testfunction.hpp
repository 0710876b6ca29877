#pragma once

#include "dwt/algebra.hpp"

namespace dwt {

/**
 * @brief Compactly supported C^2 test function.
 *
 * b(x) = (1 - s^2)^3 with s = (x - c)/w on |s| <= 1.  The modulated kind
 * multiplies by exp(i nu x).  Vector value is b(x) (w1, w2).
 */
struct TestFunction {
    enum class Kind { polynomial_bump, modulated_bump };

    Kind kind = Kind::polynomial_bump;
    double center = 0.0;
    double width = 1.0;
    double freq = 0.0;
    cplx w1{1.0};
    cplx w2{0.0};

    static TestFunction bump(double c, double w, cplx a = 1.0, cplx b = 0.0) {
        return {Kind::polynomial_bump, c, w, 0.0, a, b};
    }
    static TestFunction modulated(double c, double w, double nu, cplx a = 1.0, cplx b = 0.0) {
        return {Kind::modulated_bump, c, w, nu, a, b};
    }

    double lo() const { return center - width; }
    double hi() const { return center + width; }

    cplx scalar(double x) const {
        const double s = (x - center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        const double t = 1.0 - s * s;
        const double b = t * t * t;
        if (kind == Kind::polynomial_bump) return b;
        return b * std::exp(cplx(0.0, freq * x));
    }
    Vec2 operator()(double x) const {
        const cplx s = scalar(x);
        return {s * w1, s * w2};
    }

    /// Same profile with weights M (w1, w2).
    TestFunction mapped(const Mat2& m) const {
        TestFunction t = *this;
        const Vec2 v = m * Vec2{w1, w2};
        t.w1 = v.a;
        t.w2 = v.b;
        return t;
    }
    /// Pointwise complex conjugate.
    TestFunction conjugated() const {
        TestFunction t = *this;
        t.freq = -freq;
        t.w1 = std::conj(w1);
        t.w2 = std::conj(w2);
        return t;
    }
};

}  // namespace dwt
