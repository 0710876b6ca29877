#include "oracles.hpp"

#include "dwt/errors.hpp"
#include "dwt/potential.hpp"

#include <doctest.h>

#include <sstream>

using namespace dwt;

namespace {
const cplx i1{0.0, 1.0};

Mat2 cell(const MatrixPotential& p) { return p.q.right; }

ScalarPotential random_potential(oracle::Rng& rng) {
    const int n = rng.integer(1, 6);
    std::vector<double> breaks{rng.uniform(-3, -1)};
    std::vector<cplx> cells;
    for (int k = 0; k < n; ++k) {
        breaks.push_back(breaks.back() + rng.uniform(0.1, 1.2));
        cells.push_back(rng.complex(2));
    }
    return make_potential(breaks, cells, rng.complex(2), rng.complex(2));
}
}  // namespace

TEST_CASE("model matrices") {
    CHECK(dist_max(cell(build_matrix_potential(Model::Defocusing, constant_potential(1.0))), Mat2{0.0, -i1, i1, 0.0}) == 0.0);
    // q = i in the focusing model gives [[0,1],[-1,0]]
    CHECK(dist_max(cell(build_matrix_potential(Model::Focusing, constant_potential(i1))), Mat2{0.0, 1.0, -1.0, 0.0}) == 0.0);
    for (Model m : {Model::Defocusing, Model::Focusing})
        CHECK(norm_max(cell(build_matrix_potential(m, constant_potential(0.0)))) == 0.0);
    CHECK_THROWS_AS(build_matrix_potential(Model::GeneralJSA, constant_potential(1.0)), Error);
}

TEST_CASE("Hamiltonian coefficient examples") {
    const auto d = to_hamiltonian_potential(build_matrix_potential(Model::Defocusing, constant_potential(1.0)));
    CHECK(d.side == Side::Hamiltonian);
    CHECK(dist_max(cell(d), Mat2{0.0, -1.0, -1.0, 0.0}) < 1e-15);
    const auto f = to_hamiltonian_potential(build_matrix_potential(Model::Focusing, constant_potential(1.0)));
    CHECK(dist_max(cell(f), Mat2{-i1, 0.0, 0.0, i1}) < 1e-15);
    const auto z = to_hamiltonian_potential(build_matrix_potential(Model::Focusing, constant_potential(0.0)));
    CHECK(norm_max(cell(z)) < 1e-16);
    CHECK_THROWS_AS(to_hamiltonian_potential(d), Error);
    CHECK_THROWS_AS(to_dirac_potential(build_matrix_potential(Model::Focusing, constant_potential(1.0))), Error);
}

TEST_CASE("Hamiltonian structure and round trip") {
    oracle::Rng rng(11);
    for (int k = 0; k < 1000; ++k) {
        const cplx q = rng.complex(3);
        const double re = q.real(), im = q.imag();
        const auto qd = build_matrix_potential(Model::Defocusing, constant_potential(q));
        const auto bd = to_hamiltonian_potential(qd);
        CHECK(dist_max(cell(bd), Mat2{im, -re, -re, -im}) < 1e-14);
        const auto qf = build_matrix_potential(Model::Focusing, constant_potential(q));
        const auto bf = to_hamiltonian_potential(qf);
        CHECK(dist_max(cell(bf), i1 * Mat2{-re, -im, -im, re}) < 1e-14);
        CHECK(dist_max(conjugate_by_U(cell(bd), Direction::inverse), cell(qd)) < 1e-15 * std::max(1.0, std::abs(q)) * 4);
        CHECK(dist_max(cell(to_dirac_potential(bf)), cell(qf)) < 1e-14);
    }
}

TEST_CASE("jsa_check") {
    oracle::Rng rng(12);
    for (int k = 0; k < 200; ++k) {
        const auto q = random_potential(rng);
        for (Model m : {Model::Defocusing, Model::Focusing}) {
            const auto r = jsa_check(build_matrix_potential(m, q));
            CHECK(r.is_jsa);
            CHECK(r.max_imbalance == 0.0);
        }
    }
    const auto bad = jsa_check(constant_matrix_potential(Mat2::diag(1.0, 2.0)));
    CHECK_FALSE(bad.is_jsa);
    CHECK(bad.max_imbalance == 1.0);
    const cplx c{3.0, 4.0};
    const auto good = jsa_check(constant_matrix_potential(Mat2::diag(c, c)));
    CHECK(good.is_jsa);
    CHECK(good.max_imbalance == 0.0);
}

TEST_CASE("piecewise evaluation is left-continuous") {
    const auto q = make_potential({0.0, 1.0, 2.0}, {5.0, 6.0}, 4.0, 7.0);
    CHECK(q.at(-0.1) == cplx(4.0));
    CHECK(q.at(0.0) == cplx(5.0));
    CHECK(q.at(0.999) == cplx(5.0));
    CHECK(q.at(1.0) == cplx(6.0));
    CHECK(q.at(2.0) == cplx(7.0));
    CHECK_FALSE(is_constant(q));
    CHECK(is_constant(constant_potential(2.0)));
    CHECK_THROWS_AS(make_potential({1.0, 0.0}, {1.0}, 0.0, 0.0), Error);
    CHECK_THROWS_AS(make_potential({0.0, 1.0}, {}, 0.0, 0.0), Error);
}

TEST_CASE("sample uses cell midpoints") {
    const auto q = sample([](double x) { return cplx(x * x, -x); }, {0.0, 1.0, 3.0}, 0.0, 9.0);
    REQUIRE(q.ncells() == 2);
    CHECK(q.cells[0] == cplx(0.25, -0.5));
    CHECK(q.cells[1] == cplx(4.0, -2.0));
}

TEST_CASE("potential file parsing") {
    std::istringstream good("tails 1 0 0.5 -0.5\n# bump\n-1 2 0\n0.5 0.5 -0.5\n");
    const auto q = parse_potential(good);
    CHECK(q.left == cplx(1.0));
    CHECK(q.right == cplx(0.5, -0.5));
    REQUIRE(q.ncells() == 1);
    CHECK(q.cells[0] == cplx(2.0));
    CHECK(q.first() == -1.0);
    CHECK(q.last() == 0.5);

    std::istringstream flat("tails 0.3 0 0.3 0\n");
    CHECK(is_constant(parse_potential(flat)));

    auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_potential(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("tails 1 0 1 0\n0 1 0\nfoo\n") == 3);
    CHECK(line_of("tail 1 0 1 0\n") == 1);
    CHECK(line_of("tails 1 0 1\n") == 1);
    CHECK(line_of("tails 0 0 0 0\n1 0 0\n0 0 0\n") == 3);
    // the last line opens the right tail and must agree with it
    CHECK(line_of("tails 0 0 1 0\n0 2 0\n1 0 0\n") == 3);
    CHECK(line_of("") == 1);
    CHECK_THROWS_AS(load_potential("/nonexistent/potential.txt"), Error);
}
