#include "dwt/potential.hpp"
#include "dwt/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dwt {

const char* to_string(Model m) {
    switch (m) {
    case Model::Defocusing: return "defocusing";
    case Model::Focusing: return "focusing";
    case Model::GeneralJSA: return "general";
    }
    return "?";
}

const char* to_string(Side s) { return s == Side::Dirac ? "dirac" : "hamiltonian"; }

template <class T>
void Piecewise<T>::validate() const {
    if (breaks.empty()) throw Error(ErrorKind::InvalidArgument, "potential needs at least one breakpoint");
    if (cells.size() + 1 != breaks.size())
        throw Error(ErrorKind::InvalidArgument, "cell count must be breakpoint count minus one");
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
        if (!(breaks[k] < breaks[k + 1]))
            throw Error(ErrorKind::InvalidArgument, "breakpoints must be strictly increasing");
    for (double x : breaks)
        if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite breakpoint");
}

template struct Piecewise<cplx>;
template struct Piecewise<Mat2>;

ScalarPotential constant_potential(cplx q0) {
    ScalarPotential p;
    p.left = p.right = q0;
    return p;
}

ScalarPotential make_potential(std::vector<double> breaks, std::vector<cplx> cells, cplx left, cplx right) {
    ScalarPotential p;
    p.breaks = std::move(breaks);
    p.cells = std::move(cells);
    p.left = left;
    p.right = right;
    p.validate();
    return p;
}

ScalarPotential sample(const std::function<cplx(double)>& fn, const std::vector<double>& grid, cplx left, cplx right) {
    std::vector<cplx> cells;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) cells.push_back(fn(0.5 * (grid[k] + grid[k + 1])));
    return make_potential(grid, std::move(cells), left, right);
}

bool is_constant(const ScalarPotential& q) {
    if (q.left != q.right) return false;
    for (const auto& c : q.cells)
        if (c != q.left) return false;
    return true;
}

namespace {

std::string strip_comment(const std::string& s) {
    auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

ScalarPotential parse_potential(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool have_tails = false;
    cplx left, right;
    std::vector<double> xs;
    std::vector<cplx> vals;
    int last_line = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(strip_comment(line));
        std::string first;
        if (!(ss >> first)) continue;
        if (!have_tails) {
            if (first != "tails") throw ParseError(lineno, "expected header 'tails <re qL> <im qL> <re qR> <im qR>'");
            double a, b, c, d;
            if (!(ss >> a >> b >> c >> d)) throw ParseError(lineno, "tails header needs four numbers");
            std::string extra;
            if (ss >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
            left = {a, b};
            right = {c, d};
            have_tails = true;
            continue;
        }
        double x, re, im;
        try {
            std::size_t used = 0;
            x = std::stod(first, &used);
            if (used != first.size()) throw std::invalid_argument(first);
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad breakpoint '" + first + "'");
        }
        if (!(ss >> re >> im)) throw ParseError(lineno, "expected '<x_break> <re q> <im q>'");
        std::string extra;
        if (ss >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
        if (!std::isfinite(x) || !std::isfinite(re) || !std::isfinite(im)) throw ParseError(lineno, "non-finite value");
        if (!xs.empty() && !(x > xs.back())) throw ParseError(lineno, "breakpoints must be strictly increasing");
        xs.push_back(x);
        vals.push_back({re, im});
        last_line = lineno;
    }
    if (!have_tails) throw ParseError(std::max(lineno, 1), "missing tails header");
    if (xs.empty()) return make_potential({0.0}, {}, left, right);
    // The last line opens the right tail, so its value has to agree with the header.
    if (vals.back() != right)
        throw ParseError(last_line, "value on the last breakpoint must equal the right tail");
    vals.pop_back();
    return make_potential(std::move(xs), std::move(vals), left, right);
}

ScalarPotential load_potential(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(0, "cannot open potential file '" + path + "'");
    return parse_potential(f);
}

Mat2 model_matrix(Model model, cplx q) {
    switch (model) {
    case Model::Defocusing: return {0.0, -I_ * q, I_ * std::conj(q), 0.0};
    case Model::Focusing: return {0.0, -I_ * q, -I_ * std::conj(q), 0.0};
    case Model::GeneralJSA: break;
    }
    throw Error(ErrorKind::InvalidArgument, "general model has no scalar-potential construction");
}

MatrixPotential build_matrix_potential(Model model, const ScalarPotential& q) {
    q.validate();
    MatrixPotential m;
    m.q = q.map([model](cplx v) { return model_matrix(model, v); });
    m.side = Side::Dirac;
    return m;
}

MatrixPotential to_hamiltonian_potential(const MatrixPotential& q) {
    if (q.side != Side::Dirac) throw Error(ErrorKind::WrongSide, "expected a Dirac-side potential");
    return {q.q.map([](const Mat2& m) { return conjugate_by_U(m, Direction::forward); }), Side::Hamiltonian};
}

MatrixPotential to_dirac_potential(const MatrixPotential& b) {
    if (b.side != Side::Hamiltonian) throw Error(ErrorKind::WrongSide, "expected a Hamiltonian-side potential");
    return {b.q.map([](const Mat2& m) { return conjugate_by_U(m, Direction::inverse); }), Side::Dirac};
}

MatrixPotential constant_matrix_potential(const Mat2& q, Side side) {
    MatrixPotential m;
    m.q.left = m.q.right = q;
    m.side = side;
    return m;
}

JsaReport jsa_check(const MatrixPotential& q) {
    JsaReport r;
    auto visit = [&r](const Mat2& m) {
        const double d = std::abs(m(0, 0) - m(1, 1));
        if (m(0, 0) != m(1, 1)) r.is_jsa = false;
        r.max_imbalance = std::max(r.max_imbalance, d);
    };
    visit(q.q.left);
    visit(q.q.right);
    for (const auto& c : q.q.cells) visit(c);
    return r;
}

}  // namespace dwt
