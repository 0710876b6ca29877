#include "cli.hpp"

#include "dwt/errors.hpp"
#include "dwt/greens.hpp"
#include "dwt/potential.hpp"
#include "dwt/propagate.hpp"
#include "dwt/spectral.hpp"
#include "dwt/weyl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace dwt::cli {

namespace {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_real(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) throw ConfigError("not a real number: '" + t + "'");
    return v;
}

// "+", "-" and "" stand for a unit imaginary coefficient.
double imag_coefficient(const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Model parse_model(const std::string& s) {
    if (s == "defocusing") return Model::Defocusing;
    if (s == "focusing") return Model::Focusing;
    if (s == "general") return Model::GeneralJSA;
    throw ConfigError("unknown model '" + s + "'");
}

BoundarySide parse_boundary(const std::string& s) {
    if (s == "none") return BoundarySide::none;
    if (s == "above") return BoundarySide::above;
    if (s == "below") return BoundarySide::below;
    if (s == "left") return BoundarySide::left;
    if (s == "right") return BoundarySide::right;
    throw ConfigError("unknown boundary side '" + s + "'");
}

std::vector<Side> parse_sides(const std::string& s) {
    if (s == "dirac") return {Side::Dirac};
    if (s == "hamiltonian") return {Side::Hamiltonian};
    if (s == "both") return {Side::Dirac, Side::Hamiltonian};
    throw ConfigError("unknown side '" + s + "'");
}

const char* side_name(Side s) { return s == Side::Dirac ? "dirac" : "hamiltonian"; }

// "diag(a,b)" or "a,b,c,d" (row-major).
Mat2 parse_inline_q(const std::string& text) {
    const std::string t = trim(text);
    if (t.rfind("diag(", 0) == 0 && t.back() == ')') {
        const auto d = parse_complex_list(t.substr(5, t.size() - 6));
        if (d.size() != 2) throw ConfigError("diag() takes two entries");
        return Mat2::diag(d[0], d[1]);
    }
    const auto e = parse_complex_list(t);
    if (e.size() != 4) throw ConfigError("inline Q needs four entries or diag(a,b)");
    return Mat2{e[0], e[1], e[2], e[3]};
}

// "c,w,nu,w1,w2"; nu = 0 gives the plain bump.
TestFunction parse_test_function(const std::string& text) {
    const auto p = split(text, ',');
    if (p.size() != 5) throw ConfigError("test function needs c,w,nu,w1,w2");
    const double c = parse_real(p[0]), w = parse_real(p[1]), nu = parse_real(p[2]);
    if (!(w > 0)) throw ConfigError("test function width must be positive");
    const cplx a = parse_complex(p[3]), b = parse_complex(p[4]);
    return nu == 0.0 ? TestFunction::bump(c, w, a, b) : TestFunction::modulated(c, w, nu, a, b);
}

std::pair<double, double> parse_interval(const std::string& text) {
    const auto p = parse_real_list(text);
    if (p.size() != 2 || !(p[0] < p[1])) throw ConfigError("interval must be l1,l2 with l1 < l2");
    return {p[0], p[1]};
}

unsigned thread_count() {
    if (const char* env = std::getenv("DWT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..n-1) on a small pool; results keep input order.
template <class F>
std::vector<json> parallel_rows(std::size_t n, F&& fn) {
    std::vector<json> rows(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) rows[i] = fn(i);
    };
    const unsigned k = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

struct Options {
    std::string model = "defocusing";
    std::string q0 = "0";
    std::string potential;
    std::string inline_q;
    double theta = 0.0;
    std::string format = "csv";
    std::string z;
    std::string z_grid;
    std::string side = "none";
    std::string x = "0.3";
    std::string xp = "-0.4";
    std::string green_side = "dirac";
    std::vector<std::string> intervals;
    double tol = 1e-8;
    double eps0 = 1e-2;
    int eps_levels = 13;
    std::string f = "0,1,0,1,0";
    std::string g = "0,1,0,1,0";
    std::string method = "both";
    std::string lambda1;
    double lambda2 = 1.0;
};

/// Everything the subcommands share, resolved from Options.
struct Setup {
    Model model = Model::Defocusing;
    cplx q0{};
    ScalarPotential q;
    bool have_scalar = true;
    MatrixPotential dirac;
    BoundaryFrame frame;
    BoundarySide bside = BoundarySide::none;
};

Setup resolve(const Options& o) {
    Setup s;
    s.model = parse_model(o.model);
    s.frame.theta = o.theta;
    s.bside = parse_boundary(o.side);
    if (!(o.tol > 0)) throw ConfigError("tolerance must be positive");
    if (s.model == Model::GeneralJSA) {
        if (o.inline_q.empty()) throw ConfigError("the general model needs --inline-Q");
        s.have_scalar = false;
        s.dirac = constant_matrix_potential(parse_inline_q(o.inline_q), Side::Dirac);
        return s;
    }
    if (!o.inline_q.empty()) throw ConfigError("--inline-Q applies to the general model only");
    if (!o.potential.empty()) {
        s.q = load_potential(o.potential);
    } else {
        s.q0 = parse_complex(o.q0);
        s.q = constant_potential(s.q0);
    }
    if (is_constant(s.q)) s.q0 = s.q.right;
    s.dirac = build_matrix_potential(s.model, s.q);
    return s;
}

std::vector<cplx> z_values(const Options& o, const std::vector<cplx>& fallback) {
    std::vector<cplx> zs;
    if (!o.z.empty()) zs = parse_complex_list(o.z);
    if (!o.z_grid.empty()) {
        const auto p = parse_real_list(o.z_grid);
        if (p.size() != 6) throw ConfigError("z-grid is re0,re1,nre,im0,im1,nim");
        const int nr = static_cast<int>(p[2]), ni = static_cast<int>(p[5]);
        if (nr < 1 || ni < 1) throw ConfigError("z-grid counts must be positive");
        for (int i = 0; i < ni; ++i)
            for (int r = 0; r < nr; ++r) {
                const double re = nr == 1 ? p[0] : p[0] + (p[1] - p[0]) * r / (nr - 1);
                const double im = ni == 1 ? p[3] : p[3] + (p[4] - p[3]) * i / (ni - 1);
                zs.emplace_back(re, im);
            }
    }
    if (zs.empty()) zs = fallback;
    if (zs.empty()) throw ConfigError("no z values given");
    return zs;
}

void put_complex(json& row, const std::string& re, const std::string& im, cplx v) {
    row[re] = v.real();
    row[im] = v.imag();
}

void put_matrix(json& row, const std::string& prefix, const std::string& suffix_sep, const Mat2& m) {
    const char* names[] = {"11", "12", "21", "22"};
    for (int k = 0; k < 4; ++k) {
        const cplx v = m.e[k];
        row[prefix + names[k] + suffix_sep + "re"] = v.real();
        row[prefix + names[k] + suffix_sep + "im"] = v.imag();
    }
}

std::vector<std::string> matrix_columns(const std::string& prefix) {
    std::vector<std::string> c;
    for (const char* n : {"11", "12", "21", "22"})
        for (const char* p : {"_re", "_im"}) c.push_back(prefix + n + p);
    return c;
}

template <class F>
json guarded(json row, F&& fn) {
    try {
        fn(row);
    } catch (const Error& e) {
        row["error"] = e.what();
    }
    return row;
}

int emit(const std::string& format, std::vector<std::string> columns, const std::vector<json>& rows,
         std::ostream& out) {
    const bool any_error = std::any_of(rows.begin(), rows.end(), [](const json& r) { return r.contains("error"); });
    if (format == "json") {
        out << json(rows).dump(2) << '\n';
    } else {
        if (any_error) columns.emplace_back("error");
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
        out << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < columns.size(); ++i) {
                if (i) out << ',';
                if (!r.contains(columns[i])) continue;
                const json& v = r[columns[i]];
                if (v.is_number()) out << fmt(v.get<double>());
                else if (v.is_boolean()) out << (v.get<bool>() ? "true" : "false");
                else out << v.get<std::string>();
            }
            out << '\n';
        }
    }
    return any_error ? 1 : 0;
}

std::vector<cplx> default_z() { return {{0.7, 1.3}, {-1.1, 0.6}, {0.4, -0.9}, {-0.8, -1.7}}; }

// ---------------------------------------------------------------- verify

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string error;
};

int cmd_verify(const Options& o, std::ostream& out) {
    const Setup s = resolve(o);
    const double tol = o.tol;
    const auto zs = z_values(o, default_z());
    const std::vector<double> xs{-1.7, -0.6, 0.0, 0.45, 1.3, 2.1};
    std::vector<Check> checks;
    auto run = [&](const std::string& name, double tolerance, auto&& body) {
        Check c{name, 0.0, tolerance, {}};
        try {
            c.residual = body();
        } catch (const Error& e) {
            c.error = e.what();
        }
        checks.push_back(std::move(c));
    };

    run("u_identities", tol, [] {
        const Mat2 uut = U() * transpose(U());
        double r = dist_max(uut, -I_ * sigma3());
        r = std::max(r, dist_max(U() * sigma1(), sigma3() * U()));
        r = std::max(r, dist_max(U() * U_inv(), Mat2::identity()));
        r = std::max(r, dist_max(U_inv(), adjoint(U())));
        return r;
    });
    run("conjugation_involutions", tol, [] {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> nd;
        double r = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const Vec2 v{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
            r = std::max(r, norm_max(apply_conjugation(Conjugation::C, apply_conjugation(Conjugation::C, v)) - v));
            r = std::max(r, norm_max(apply_conjugation(Conjugation::J, apply_conjugation(Conjugation::J, v)) - v));
            r = std::max(r, norm_max(apply_conjugation(Conjugation::K, apply_conjugation(Conjugation::K, v)) + v));
            r = std::max(r, norm_max(apply_conjugation(Conjugation::Jtilde, apply_conjugation(Conjugation::Jtilde, v)) - v));
        }
        return r;
    });

    const MatrixPotential& hq = s.dirac;
    const MatrixPotential hh = to_hamiltonian_potential(hq);
    for (cplx z : zs) {
        const SpectralParameter sz(z, s.bside);
        const std::string at = "(z=" + fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i)";
        run("wronskian_law" + at, tol, [&] { return wronskian_drift(hq, sz, s.frame, xs); });
        run("wronskian_law_hamiltonian" + at, tol, [&] { return wronskian_drift(hh, sz, s.frame, xs); });
        run("semigroup" + at, tol, [&] {
            double r = 0.0;
            for (double a : xs)
                for (double b : xs) {
                    const double c = 0.5 * (a + b) + 0.37;
                    const Mat2 lhs = transfer(hq, z, a, c);
                    const Mat2 rhs = transfer(hq, z, b, c) * transfer(hq, z, a, b);
                    r = std::max(r, dist_max(lhs, rhs) / std::max(1.0, norm_max(lhs)));
                }
            return r;
        });
        run("side_equivalence" + at, tol, [&] {
            double r = 0.0;
            for (double x : xs) {
                const Mat2 fd = fundamental_matrix(hq, sz, x, s.frame).value;
                const Mat2 fh = fundamental_matrix(hh, sz, x, s.frame).value;
                r = std::max(r, dist_max(fd, U_inv() * fh) / std::max(1.0, norm_max(fd)));
            }
            return r;
        });
        run("rk4_oracle" + at, tol, [&] {
            double r = 0.0;
            for (double x : {-1.2, 0.9}) {
                const Mat2 a = fundamental_matrix(hq, sz, x, s.frame).value;
                const Mat2 b = rk4_reference(hq, sz, x, s.frame).value;
                r = std::max(r, dist_max(a, b) / std::max(1.0, norm_max(a)));
            }
            return r;
        });
    }

    if (s.model == Model::GeneralJSA) {
        run("jsa_check", 0.0, [&] { return jsa_check(hq).max_imbalance; });
    } else {
        const Conjugation op = s.model == Model::Defocusing ? Conjugation::J : Conjugation::K;
        const std::string opname = s.model == Model::Defocusing ? "j_map" : "k_map";
        for (cplx z : zs) {
            const SpectralParameter sz(z, s.bside);
            const std::string at = "(z=" + fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i)";
            run(opname + at, tol, [&] {
                double r = 0.0;
                const Vec2 v0{{0.3, -1.1}, {0.8, 0.25}};
                for (double x : xs) {
                    const Vec2 lhs = apply_conjugation(op, transfer(hq, z, 0.0, x) * v0);
                    const Vec2 rhs = transfer(hq, std::conj(z), 0.0, x) * apply_conjugation(op, v0);
                    r = std::max(r, norm_max(lhs - rhs) / std::max(1.0, norm_max(lhs)));
                }
                return r;
            });
            run("m_side_equality" + at, tol, [&] {
                double r = 0.0;
                for (Sign sg : {Sign::plus, Sign::minus}) {
                    const cplx a = m_numeric(s.q, s.model, sz, sg, s.frame, Side::Dirac).value;
                    const cplx b = m_numeric(s.q, s.model, sz, sg, s.frame, Side::Hamiltonian).value;
                    r = std::max(r, std::abs(a - b) / std::max(1.0, std::abs(a)));
                }
                return r;
            });
            run("green_u_equivalence" + at, tol, [&] {
                const WeylSolutions wd(s.q, s.model, sz, s.frame, Side::Dirac);
                const WeylSolutions wh(s.q, s.model, sz, s.frame, Side::Hamiltonian);
                double r = 0.0;
                for (auto [x, xp] : {std::pair{0.3, -0.4}, {-0.7, 0.2}, {1.1, 1.6}}) {
                    const Mat2 gd = green_product(wd, x, xp), gh = green_product(wh, x, xp);
                    r = std::max(r, dist_max(gh, conjugate_by_U(gd, Direction::forward)) / std::max(1.0, norm_max(gh)));
                }
                return r;
            });
            run("green_fgf" + at, tol, [&] {
                double r = 0.0;
                for (Side side : {Side::Dirac, Side::Hamiltonian}) {
                    const WeylSolutions ws(s.q, s.model, sz, s.frame, side);
                    for (auto [x, xp] : {std::pair{0.3, -0.4}, {-0.7, 0.2}, {1.1, 1.6}}) {
                        const Mat2 a = green_product(ws, x, xp), b = green_fgf(ws, x, xp);
                        r = std::max(r, dist_max(a, b) / std::max(1.0, norm_max(a)));
                    }
                }
                return r;
            });
            if (s.model == Model::Defocusing) {
                if (z.imag() > 0)
                    run("herglotz" + at, 0.0, [&] {
                        const cplx mp = m_numeric(s.q, s.model, sz, Sign::plus, s.frame).value;
                        const cplx mm = m_numeric(s.q, s.model, sz, Sign::minus, s.frame).value;
                        return std::max({0.0, -mp.imag(), mm.imag()});
                    });
                run("reflection" + at, tol, [&] { return reflection_residual(s.q, sz, s.frame); });
            } else {
                run("jsym" + at, tol, [&] { return jsym_residual(s.model, s.q, sz, s.frame); });
                const std::vector<double> thetas =
                    o.theta != 0.0 ? std::vector<double>{o.theta}
                                   : std::vector<double>{std::numbers::pi / 6, std::numbers::pi / 3};
                for (double th : thetas)
                    run("rotation(theta=" + fmt(th) + ")" + at, tol, [&] { return rotation_residual(s.q, sz, th); });
            }
            if (is_constant(s.q))
                run("closed_form" + at, tol, [&] {
                    double r = 0.0;
                    for (Sign sg : {Sign::plus, Sign::minus}) {
                        const cplx a = m_closed_form(s.model, s.q0, sz, sg).value;
                        const cplx b = m_numeric(s.q, s.model, sz, sg).value;
                        r = std::max(r, std::abs(a - b) / std::max(1.0, std::abs(a)));
                    }
                    return r;
                });
        }
    }

    bool all = true;
    std::vector<json> rows;
    for (const auto& c : checks) {
        const bool ok = c.error.empty() && c.residual <= c.tolerance;
        all = all && ok;
        json r;
        r["check"] = c.name;
        if (c.error.empty()) r["residual"] = c.residual;
        r["tolerance"] = c.tolerance;
        r["pass"] = ok;
        if (!c.error.empty()) r["error"] = c.error;
        rows.push_back(std::move(r));
    }
    emit(o.format, {"check", "residual", "tolerance", "pass"}, rows, out);
    return all ? 0 : 1;
}

// ---------------------------------------------------------------- tables

void require_scalar(const Setup& s) {
    if (!s.have_scalar) throw ConfigError("this command needs the defocusing or focusing model");
}

int cmd_mfun(const Options& o, std::ostream& out) {
    const Setup s = resolve(o);
    require_scalar(s);
    const auto zs = z_values(o, {});
    const auto sides = parse_sides(o.green_side);
    if (sides.size() != 1) throw ConfigError("mfun takes a single side");
    const bool closed = is_constant(s.q) && s.frame.theta == 0.0;
    const auto rows = parallel_rows(zs.size(), [&](std::size_t i) {
        json row;
        put_complex(row, "re_z", "im_z", zs[i]);
        return guarded(std::move(row), [&](json& r) {
            const SpectralParameter sz(zs[i], s.bside);
            MCoefficient mp, mm;
            if (closed) {
                mp = m_closed_form(s.model, s.q0, sz, Sign::plus);
                mm = m_closed_form(s.model, s.q0, sz, Sign::minus);
            } else {
                mp = m_numeric(s.q, s.model, sz, Sign::plus, s.frame, sides[0]);
                mm = m_numeric(s.q, s.model, sz, Sign::minus, s.frame, sides[0]);
            }
            put_complex(r, "re_m_plus", "im_m_plus", mp.value);
            put_complex(r, "re_m_minus", "im_m_minus", mm.value);
            r["provenance"] = to_string(mp.provenance);
        });
    });
    return emit(o.format, {"re_z", "im_z", "re_m_plus", "im_m_plus", "re_m_minus", "im_m_minus", "provenance"}, rows,
                out);
}

int cmd_green(const Options& o, std::ostream& out) {
    const Setup s = resolve(o);
    require_scalar(s);
    const auto zs = z_values(o, {});
    const auto xs = parse_real_list(o.x), xps = parse_real_list(o.xp);
    if (xs.size() != xps.size()) throw ConfigError("--x and --xp need the same length");
    const auto sides = parse_sides(o.green_side);
    struct Job {
        cplx z;
        double x, xp;
        Side side;
    };
    std::vector<Job> jobs;
    for (cplx z : zs)
        for (Side side : sides)
            for (std::size_t k = 0; k < xs.size(); ++k) jobs.push_back({z, xs[k], xps[k], side});
    const auto rows = parallel_rows(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        json row;
        put_complex(row, "re_z", "im_z", j.z);
        row["x"] = j.x;
        row["xp"] = j.xp;
        row["side"] = side_name(j.side);
        return guarded(std::move(row), [&](json& r) {
            const SpectralParameter sz(j.z, s.bside);
            const Mat2 g = j.side == Side::Dirac ? green_dirac(s.q, s.model, sz, j.x, j.xp, s.frame).value
                                                 : green_hamiltonian(s.q, s.model, sz, j.x, j.xp, s.frame).value;
            put_matrix(r, "g", "_", g);
        });
    });
    std::vector<std::string> cols{"re_z", "im_z", "x", "xp", "side"};
    for (auto& c : matrix_columns("g")) cols.push_back(c);
    return emit(o.format, cols, rows, out);
}

std::vector<std::pair<double, double>> intervals(const Options& o) {
    std::vector<std::pair<double, double>> iv;
    for (const auto& t : o.intervals) iv.push_back(parse_interval(t));
    if (iv.empty()) throw ConfigError("at least one --interval is required");
    return iv;
}

Ladder ladder(const Options& o) {
    if (!(o.eps0 > 0) || o.eps_levels < 2) throw ConfigError("eps ladder needs eps0 > 0 and at least two levels");
    return {o.eps0, o.eps_levels};
}

int cmd_measure(const Options& o, std::ostream& out) {
    const Setup s = resolve(o);
    require_scalar(s);
    if (s.model == Model::Focusing && !is_constant(s.q))
        throw ConfigError("focusing measures are only available for constant potentials");
    const auto iv = intervals(o);
    const Ladder lad = ladder(o);
    const auto rows = parallel_rows(iv.size(), [&](std::size_t i) {
        json row;
        row["l1"] = iv[i].first;
        row["l2"] = iv[i].second;
        return guarded(std::move(row), [&](json& r) {
            const auto m = omega_interval(s.q, s.model, iv[i].first, iv[i].second, s.frame, o.tol, lad);
            r["converged"] = m.converged;
            put_matrix(r, "o", "_", m.value);
        });
    });
    std::vector<std::string> cols{"l1", "l2", "converged"};
    for (auto& c : matrix_columns("o")) cols.push_back(c);
    return emit(o.format, cols, rows, out);
}

int cmd_project(const Options& o, std::ostream& out) {
    const Setup s = resolve(o);
    require_scalar(s);
    if (s.model == Model::Focusing && !is_constant(s.q))
        throw ConfigError("focusing projections are only available for constant potentials");
    const auto iv = intervals(o);
    const TestFunction f = parse_test_function(o.f), g = parse_test_function(o.g);
    const auto sides = parse_sides(o.green_side);
    if (sides.size() != 1) throw ConfigError("project takes a single side");
    std::vector<std::string> methods;
    if (o.method == "both") methods = {"transform", "stone"};
    else if (o.method == "transform" || o.method == "stone") methods = {o.method};
    else throw ConfigError("method must be transform, stone or both");
    const Ladder lad = ladder(o);
    struct Job {
        std::pair<double, double> iv;
        std::string method;
    };
    std::vector<Job> jobs;
    for (const auto& i : iv)
        for (const auto& m : methods) jobs.push_back({i, m});
    const auto rows = parallel_rows(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        json row;
        row["l1"] = j.iv.first;
        row["l2"] = j.iv.second;
        return guarded(std::move(row), [&](json& r) {
            cplx v;
            if (j.method == "transform") {
                v = projection_via_transform(s.q, s.model, f, g, j.iv.first, j.iv.second, s.frame, sides[0]);
            } else {
                const auto st = projection_via_stone_detail(s.q, s.model, f, g, j.iv.first, j.iv.second, s.frame,
                                                            sides[0], o.tol, lad);
                if (!st.converged) throw Error(ErrorKind::NonConvergence, "eps ladder did not settle");
                v = st.value;
            }
            put_complex(r, "value_re", "value_im", v);
            r["method"] = j.method;
        });
    });
    return emit(o.format, {"l1", "l2", "value_re", "value_im", "method"}, rows, out);
}

int cmd_blowup(const Options& o, std::ostream& out) {
    const cplx q0 = parse_complex(o.q0);
    const auto l1s = parse_real_list(o.lambda1);
    if (l1s.empty()) throw ConfigError("--lambda1 is required");
    std::vector<json> rows;
    for (double l1 : l1s) {
        json row;
        row["lambda1"] = l1;
        row["lambda2"] = o.lambda2;
        rows.push_back(guarded(std::move(row), [&](json& r) {
            r["norm"] = blowup_norm(q0, l1, o.lambda2);
            r["predicted"] = 1.0 / l1;
        }));
    }
    return emit(o.format, {"lambda1", "lambda2", "norm", "predicted"}, rows, out);
}

}  // namespace

cplx parse_complex(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw ConfigError("empty complex literal");
    if (t.back() != 'i' && t.back() != 'j') return parse_real(t);
    t.pop_back();
    // Split at the last sign that is not part of an exponent.
    std::size_t k = std::string::npos;
    for (std::size_t p = t.size(); p-- > 1;)
        if ((t[p] == '+' || t[p] == '-') && t[p - 1] != 'e' && t[p - 1] != 'E') {
            k = p;
            break;
        }
    try {
        if (k == std::string::npos) return {0.0, imag_coefficient(t)};
        return {parse_real(t.substr(0, k)), imag_coefficient(t.substr(k))};
    } catch (const ConfigError&) {
        throw ConfigError("not a complex literal: '" + text + "'");
    }
}

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    for (const auto& p : split(text, ',')) out.push_back(parse_complex(p));
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& p : split(text, ',')) out.push_back(parse_real(p));
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Weyl-Titchmarsh coefficients, Green's matrices and spectral measures for Dirac-type operators",
                 "dwt"};
    app.set_config("--config", "", "flat key=value file; flags on the command line win");
    // Values keep their commas; several intervals go in brackets separated by ';'.
    auto cfg = std::make_shared<CLI::ConfigTOML>();
    cfg->arrayBounds('[', ']')->arrayDelimiter(';');
    app.config_formatter(cfg);
    app.add_option("--model", o.model, "defocusing, focusing or general")->capture_default_str();
    app.add_option("--q0", o.q0, "constant potential as an a+bi literal")->capture_default_str();
    app.add_option("--potential", o.potential, "piecewise-constant potential file");
    app.add_option("--inline-Q", o.inline_q, "general model: diag(a,b) or a,b,c,d");
    app.add_option("--theta", o.theta, "boundary frame angle")->capture_default_str();
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--z", o.z, "comma separated complex spectral parameters");
    app.add_option("--z-grid", o.z_grid, "re0,re1,nre,im0,im1,nim");
    app.add_option("--side", o.side, "one-sided approach on cuts: none, above, below, left, right")
        ->capture_default_str();
    app.add_option("--x", o.x, "comma separated x values")->capture_default_str();
    app.add_option("--xp", o.xp, "comma separated x' values")->capture_default_str();
    app.add_option("--green-side", o.green_side, "dirac, hamiltonian or both")->capture_default_str();
    app.add_option("--interval", o.intervals, "l1,l2 (repeatable)")->allow_extra_args(false);
    app.add_option("--tol", o.tol, "tolerance")->capture_default_str();
    app.add_option("--eps0", o.eps0, "first eps of the ladder")->capture_default_str();
    app.add_option("--eps-levels", o.eps_levels, "ladder length")->capture_default_str();
    app.add_option("--f", o.f, "test function c,w,nu,w1,w2")->capture_default_str();
    app.add_option("--g", o.g, "test function c,w,nu,w1,w2")->capture_default_str();
    app.add_option("--method", o.method, "transform, stone or both")->capture_default_str();
    app.add_option("--lambda1", o.lambda1, "comma separated lower edges");
    app.add_option("--lambda2", o.lambda2, "upper edge")->capture_default_str();
    app.require_subcommand(1);

    using Cmd = int (*)(const Options&, std::ostream&);
    const std::vector<std::tuple<const char*, const char*, Cmd>> cmds{
        {"verify", "run the identity suites", cmd_verify},
        {"mfun", "half-line m-coefficients", cmd_mfun},
        {"green", "Green's matrices", cmd_green},
        {"measure", "spectral measure of intervals", cmd_measure},
        {"project", "spectral projection forms", cmd_project},
        {"blowup", "norm of the focusing multiplication operator", cmd_blowup},
    };
    for (const auto& [name, help, fn] : cmds) app.add_subcommand(name, help)->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        for (const auto& [name, help, fn] : cmds)
            if (app.got_subcommand(name)) {
                std::ostringstream buf;
                const int code = fn(o, buf);
                out << buf.str();
                return code;
            }
    } catch (const ParseError& e) {
        err << "error: " << o.potential << ": " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace dwt::cli
