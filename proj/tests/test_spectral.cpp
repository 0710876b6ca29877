#include "oracles.hpp"

#include "dwt/errors.hpp"
#include "dwt/spectral.hpp"

#include <doctest.h>

#include <numbers>

using namespace dwt;

namespace {
const cplx i1{0.0, 1.0};
const double pi = std::numbers::pi;

double min_eig_hermitian(const Mat2& m) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const double b = std::abs(m(0, 1));
    return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
}

Mat2 defocusing_density(double q0, double l) {
    // (1/(2 pi S)) [[|l|, -q0 sgn l], [-q0 sgn l, |l|]] for |l| > q0, real q0
    const double s = std::sqrt(l * l - q0 * q0);
    const double sg = l > 0 ? 1.0 : -1.0;
    return Mat2{std::abs(l), -q0 * sg, -q0 * sg, std::abs(l)} * (1.0 / (2 * pi * s));
}
}  // namespace

TEST_CASE("density examples") {
    const auto free_q = constant_potential(0.0);
    const auto d0 = density_limit(free_q, Model::Defocusing, 1.0);
    CHECK(d0.converged);
    CHECK(dist_max(d0.value, Mat2::identity() * (1 / (2 * pi))) < 1e-8);
    const auto q1 = constant_potential(1.0);
    const Mat2 want = Mat2{2.0, -1.0, -1.0, 2.0} * (1 / (2 * pi * std::sqrt(3.0)));
    CHECK(dist_max(boundary_density(q1, Model::Defocusing, 2.0), want) < 1e-12);
    const auto d2 = density_limit(q1, Model::Defocusing, 2.0);
    CHECK(d2.converged);
    CHECK(dist_max(d2.value, want) < 1e-6);
    // In the gap the smoothed density is O(eps), not zero; only the limit vanishes.
    const cplx zg{0.5, 1e-4};
    const cplx sg = oracle::s_hat(1.0, zg);
    const Mat2 mg = (i1 / (2.0 * sg)) * Mat2{zg, -1.0, -1.0, zg};
    const Mat2 dg = stieltjes_density(q1, Model::Defocusing, 0.5, 1e-4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(dg.e[k] - mg.e[k].imag() / pi) < 1e-12);
    CHECK(norm_max(density_limit(q1, Model::Defocusing, 0.5).value) < 1e-6);
    const Mat2 foc = boundary_density(q1, Model::Focusing, 1.0);
    CHECK(std::abs(foc(0, 0) - cplx(1, -1) / (2 * std::sqrt(2.0) * pi)) < 1e-12);
    CHECK(std::abs(density_limit(q1, Model::Focusing, 1.0).value(0, 0) - foc(0, 0)) < 1e-6);
    CHECK_THROWS_AS(stieltjes_density(q1, Model::Defocusing, 1.0, 0.0), Error);
    CHECK_THROWS_AS(stieltjes_density(q1, Model::GeneralJSA, 1.0, 0.1), Error);
}

TEST_CASE("density is nonnegative in the self-adjoint model") {
    oracle::Rng rng(51);
    for (int k = 0; k < 1000; ++k) {
        const cplx q0 = rng.complex(1.5);
        const auto q = k % 3 ? constant_potential(q0)
                             : make_potential({-0.5, 0.4, 1.0}, {rng.complex(2), rng.complex(2)}, q0, q0);
        const double l = rng.uniform(-4, 4), eps = std::exp(rng.uniform(std::log(1e-4), std::log(1.0)));
        const Mat2 d = stieltjes_density(q, Model::Defocusing, l, eps);
        CHECK(min_eig_hermitian(d) >= -1e-10);
        CHECK(std::abs(d(0, 1) - std::conj(d(1, 0))) < 1e-12);
    }
}

TEST_CASE("measure of intervals") {
    const auto free_q = constant_potential(0.0);
    const auto a = omega_interval(free_q, Model::Defocusing, 0.0, 1.0);
    CHECK(a.converged);
    CHECK(dist_max(a.value, Mat2::identity() * (1 / (2 * pi))) < 1e-6);
    CHECK(a.eps_trail.size() >= 2);
    for (std::size_t k = 1; k < a.eps_trail.size(); ++k) CHECK(a.eps_trail[k].first < a.eps_trail[k - 1].first);
    const double big = 3.0;
    const auto t = omega_interval(free_q, Model::Defocusing, -big, big);
    CHECK(dist_max(t.value, Mat2::identity() * (big / pi)) < 1e-6);

    const auto q1 = constant_potential(1.0);
    const auto gap = omega_interval(q1, Model::Defocusing, -0.5, 0.5);
    CHECK(gap.converged);
    CHECK(norm_max(gap.value) < 1e-6);

    // additivity across a band edge
    const auto ab = omega_interval(q1, Model::Defocusing, 0.5, 1.5);
    const auto bc = omega_interval(q1, Model::Defocusing, 1.5, 2.5);
    const auto ac = omega_interval(q1, Model::Defocusing, 0.5, 2.5);
    CHECK(dist_max(ab.value + bc.value, ac.value) < 1e-6);
    // closed form: int_1^1.5 of the density
    const double s = std::sqrt(1.5 * 1.5 - 1.0), ash = std::acosh(1.5);
    const Mat2 exact = Mat2{s, -ash, -ash, s} * (1 / (2 * pi));
    CHECK(dist_max(ab.value, exact) < 1e-6);

    // focusing (1,2]: ladder against the one-sided boundary values
    const auto f = omega_interval(q1, Model::Focusing, 1.0, 2.0);
    CHECK(f.converged);
    const auto rule = oracle::simpson([&](double l) { return boundary_density(q1, Model::Focusing, l)(0, 0); }, 1.0, 2.0, 200);
    CHECK(std::abs(f.value(0, 0) - rule) < 1e-6);
    CHECK_THROWS_AS(omega_interval(q1, Model::Defocusing, 1.0, 1.0), Error);
}

TEST_CASE("transform T0") {
    const auto free_q = constant_potential(0.0);
    const auto f = TestFunction::bump(0.3, 0.8, 1.0, 0.0);
    for (double l : {0.0, 0.7, 2.5}) {
        const Vec2 v = transform_t0(free_q, Model::Defocusing, f, l).value;
        const cplx c = oracle::simpson([&](double x) { return std::cos(l * x) * f.scalar(x); }, f.lo(), f.hi());
        const cplx s = oracle::simpson([&](double x) { return std::sin(l * x) * f.scalar(x); }, f.lo(), f.hi());
        CHECK(std::abs(v.a - c) < 1e-10);
        CHECK(std::abs(v.b - s) < 1e-10);
    }
    const Vec2 v0 = transform_t0(free_q, Model::Defocusing, f, 0.0).value;
    CHECK(std::abs(v0.b) < 1e-14);
    CHECK(std::abs(v0.a - 32.0 / 35.0 * 0.8) < 1e-12);
    // a narrow bump sees F(lambda, 0)^T, i.e. its integral, with O(w^2) error
    const auto q = make_potential({-0.3, 0.2}, {cplx(0.4, 0.3)}, 1.0, 0.5);
    double prev = 1.0;
    for (double w : {0.1, 0.05, 0.025}) {
        const auto g = TestFunction::bump(0.0, w, 1.0, 0.5);
        const Vec2 t = transform_t0(q, Model::Defocusing, g, 1.3).value;
        const double mass = 32.0 / 35.0 * w;
        const Vec2 want = transpose(BoundaryFrame{}.initial(Side::Hamiltonian)) * Vec2{mass, 0.5 * mass};
        const double err = norm_max(t - want) / mass;
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("projection via the transform, free case") {
    const auto free_q = constant_potential(0.0);
    const auto f = TestFunction::bump(0.2, 0.7, 1.0, 0.0);
    const cplx v = projection_via_transform(free_q, Model::Defocusing, f, f, 0.0, 1.0, {}, Side::Hamiltonian);
    const cplx want = oracle::simpson(
        [&](double l) {
            const cplx c = oracle::simpson([&](double x) { return std::cos(l * x) * f.scalar(x); }, f.lo(), f.hi(), 400);
            const cplx s = oracle::simpson([&](double x) { return std::sin(l * x) * f.scalar(x); }, f.lo(), f.hi(), 400);
            return (std::norm(c) + std::norm(s)) / (2 * pi);
        },
        0.0, 1.0, 200);
    CHECK(v.real() > 0);
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(std::abs(v - want) < 1e-9);
    // transform concentrated near |lambda| = 40
    const auto h = TestFunction::modulated(0.0, 3.0, 40.0, 1.0, 0.5);
    CHECK(std::abs(projection_via_transform(free_q, Model::Defocusing, h, h, 0.0, 1.0)) < 1e-6);
}

TEST_CASE("projection positivity, gap and side equivalence") {
    const auto q1 = constant_potential(1.0);
    const auto f = TestFunction::bump(0.0, 1.0, 1.0, cplx(0.3, 0.2));
    const auto g = TestFunction::modulated(0.4, 0.9, 1.5, cplx(0, 1), 1.0);
    const cplx ff = projection_via_transform(q1, Model::Defocusing, f, f, 1.0, 2.0);
    CHECK(ff.real() >= -1e-8);
    CHECK(std::abs(ff.imag()) < 1e-10);
    CHECK(std::abs(projection_via_transform(q1, Model::Defocusing, f, g, -0.6, 0.6)) < 1e-6);
    const auto gap = projection_via_stone_detail(q1, Model::Defocusing, f, g, -0.6, 0.6);
    CHECK(std::abs(gap.value) < 1e-6);
    for (Model m : {Model::Defocusing, Model::Focusing}) {
        const auto uf = f.mapped(U()), ug = g.mapped(U());
        const cplx d = projection_via_transform(q1, m, f, g, 0.5, 1.5, {}, Side::Dirac);
        const cplx h = projection_via_transform(q1, m, uf, ug, 0.5, 1.5, {}, Side::Hamiltonian);
        CHECK(std::abs(d - h) < 1e-8);
    }
}

TEST_CASE("Stone route matches the transform route") {
    const auto q1 = constant_potential(1.0);
    const auto f = TestFunction::bump(0.1, 0.8, 1.0, cplx(0.2, -0.4));
    const auto g = TestFunction::modulated(-0.2, 0.7, 1.2, 0.5, cplx(0, 1));
    for (Model m : {Model::Defocusing, Model::Focusing}) {
        const auto s = projection_via_stone_detail(q1, m, f, g, 1.2, 2.0);
        CHECK(s.converged);
        const cplx t = projection_via_transform(q1, m, f, g, 1.2, 2.0);
        CHECK(std::abs(s.value - t) < 1e-5);
        // the Hamiltonian-side Stone route runs through different Weyl solutions
        const auto sh = projection_via_stone_detail(q1, m, f.mapped(U()), g.mapped(U()), 1.2, 2.0, {}, Side::Hamiltonian);
        CHECK(std::abs(sh.value - s.value) < 1e-8);
    }
}

TEST_CASE("blowup norm") {
    CHECK(blowup_norm(1.0, 0.1, 1.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(blowup_norm(cplx(2, 1), 0.01, 5.0) == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(blowup_norm(1.0, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    oracle::Rng rng(52);
    for (int k = 0; k < 1000; ++k) {
        const double l1 = std::exp(rng.uniform(-12, 1)), l2 = l1 * (1 + rng.uniform(0.01, 10));
        CHECK(std::abs(blowup_norm(rng.complex(3), l1, l2) * l1 - 1.0) < 1e-14);
    }
    CHECK_THROWS_AS(blowup_norm(1.0, 0.0, 1.0), Error);
    CHECK_THROWS_AS(blowup_norm(1.0, 0.5, 0.2), Error);
    CHECK_THROWS_AS(blowup_norm(0.0, 0.1, 1.0), Error);
}

TEST_CASE("focusing quadratic form") {
    const auto h = TestFunction::bump(0.0, 1.0);
    const auto qf = focusing_quadratic_form(1.0, h, 0.1, 1.0);
    CHECK(std::abs(qf.value - qf.value_lambda) < 1e-6);
    // it is the projection form with f = (h, 0), g = (0, h)
    const cplx p = projection_via_transform(constant_potential(1.0), Model::Focusing, TestFunction::bump(0.0, 1.0, 1.0, 0.0),
                                            TestFunction::bump(0.0, 1.0, 0.0, 1.0), 0.1, 1.0);
    CHECK(std::abs(qf.value - p) < 1e-6);
    const auto hi = TestFunction::modulated(0.0, 3.0, 40.0);
    const auto qh = focusing_quadratic_form(1.0, hi, 0.1, 1.0);
    CHECK(std::abs(qh.value) < 1e-6);
    CHECK(std::abs(fourier_hat(h, 0.0) - 32.0 / 35.0 / std::sqrt(2 * pi)) < 1e-14);
    // int (1-s^2)^6 ds over [-1,1] = 2^13 (6!)^2 / 13!
    CHECK(std::abs(l2_norm_sq(h) - 8192.0 * 518400.0 / 6227020800.0) < 1e-14);
}
