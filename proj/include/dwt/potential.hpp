#pragma once

#include "dwt/algebra.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dwt {

enum class Model { Defocusing, Focusing, GeneralJSA };
enum class Side { Dirac, Hamiltonian };

const char* to_string(Model m);
const char* to_string(Side s);

/**
 * @brief Piecewise-constant function with constant tails.
 *
 * breaks holds x_0 < ... < x_N (at least one point); cells[k] is the value on
 * [x_k, x_{k+1}); left applies for x < x_0 and right for x >= x_N.
 */
template <class T>
struct Piecewise {
    std::vector<double> breaks{0.0};
    std::vector<T> cells;
    T left{};
    T right{};

    std::size_t ncells() const { return cells.size(); }
    double first() const { return breaks.front(); }
    double last() const { return breaks.back(); }

    const T& at(double x) const {
        if (x < breaks.front()) return left;
        if (x >= breaks.back()) return right;
        auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
        return cells[static_cast<std::size_t>(it - breaks.begin()) - 1];
    }

    template <class F>
    auto map(F&& f) const -> Piecewise<decltype(f(std::declval<const T&>()))> {
        Piecewise<decltype(f(std::declval<const T&>()))> r;
        r.breaks = breaks;
        r.cells.reserve(cells.size());
        for (const auto& c : cells) r.cells.push_back(f(c));
        r.left = f(left);
        r.right = f(right);
        return r;
    }

    void validate() const;
};

using ScalarPotential = Piecewise<cplx>;

struct MatrixPotential {
    Piecewise<Mat2> q;
    Side side = Side::Dirac;
};

ScalarPotential constant_potential(cplx q0);
ScalarPotential make_potential(std::vector<double> breaks, std::vector<cplx> cells, cplx left, cplx right);
/// Midpoint sampling of fn on the cells of grid.
ScalarPotential sample(const std::function<cplx(double)>& fn, const std::vector<double>& grid, cplx left, cplx right);

bool is_constant(const ScalarPotential& q);

/// Potential file: "tails reL imL reR imR" then "x re im" lines.
ScalarPotential parse_potential(std::istream& in);
ScalarPotential load_potential(const std::string& path);

Mat2 model_matrix(Model model, cplx q);
MatrixPotential build_matrix_potential(Model model, const ScalarPotential& q);
MatrixPotential to_hamiltonian_potential(const MatrixPotential& q);
MatrixPotential to_dirac_potential(const MatrixPotential& b);
MatrixPotential constant_matrix_potential(const Mat2& q, Side side = Side::Dirac);

struct JsaReport {
    bool is_jsa = true;
    double max_imbalance = 0.0;
};
JsaReport jsa_check(const MatrixPotential& q);

}  // namespace dwt
