#include "dwt/weyl.hpp"
#include "dwt/errors.hpp"

#include <cmath>
#include <numbers>

namespace dwt {

const char* to_string(Provenance p) { return p == Provenance::closed_form ? "closed_form" : "numeric"; }

SpectralParameter conj(const SpectralParameter& z) {
    BoundarySide s = z.side;
    if (s == BoundarySide::above) s = BoundarySide::below;
    else if (s == BoundarySide::below) s = BoundarySide::above;
    return {std::conj(z.z), s};
}

bool on_cut(const BranchFn& bf, cplx z) {
    const double r = std::abs(bf.q0);
    if (bf.model == Model::Defocusing) return z.imag() == 0.0 && std::abs(z.real()) >= r;
    return z.imag() == 0.0 || (z.real() == 0.0 && std::abs(z.imag()) <= r);
}

namespace {

[[noreturn]] void off_domain(const std::string& why) { throw Error(ErrorKind::NotInSplitPlane, why); }

double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

}  // namespace

cplx branch_sqrt(const BranchFn& bf, const SpectralParameter& sp) {
    const cplx z = sp.z;
    const double r = std::abs(bf.q0);
    if (bf.model == Model::GeneralJSA) throw Error(ErrorKind::InvalidArgument, "no branch function for the general model");
    if (!on_cut(bf, z)) {
        const cplx w = bf.model == Model::Defocusing ? (z - r) * (z + r) : z * z + r * r;
        cplx s = std::sqrt(w);
        if (s.imag() <= 0.0) s = -s;
        return s;
    }
    const BoundarySide side = sp.side;
    if (side == BoundarySide::none) off_domain("z lies on a cut and no boundary side was given");
    if (bf.model == Model::Defocusing) {
        const double l = z.real();
        const double root = std::sqrt((std::abs(l) - r) * (std::abs(l) + r));
        if (side == BoundarySide::above) return sgn(l) * root;
        if (side == BoundarySide::below) return -sgn(l) * root;
        off_domain("real cut needs side above or below");
    }
    if (z.imag() == 0.0) {
        const double l = z.real();
        if (l == 0.0 && r > 0.0) off_domain("crossing point of the focusing cuts");
        const double root = std::sqrt(l * l + r * r);
        if (side == BoundarySide::above) return sgn(l) * root;
        if (side == BoundarySide::below) return -sgn(l) * root;
        off_domain("real cut needs side above or below");
    }
    const double t = z.imag();
    const double root = std::sqrt((r - std::abs(t)) * (r + std::abs(t)));
    if (side == BoundarySide::right) return sgn(t) * root;
    if (side == BoundarySide::left) return -sgn(t) * root;
    off_domain("imaginary cut needs side left or right");
}

namespace {

// num/den with a removable zero handled by l'Hopital (dnum, dden are z-derivatives).
cplx ratio(cplx num, cplx den, cplx dnum, cplx dden, double scale) {
    const double tol = 1e-14 * scale;
    if (std::abs(den) > tol) return num / den;
    if (std::abs(num) <= 1e-12 * scale && std::abs(dden) > 0.0 && std::isfinite(std::abs(dnum)))
        return dnum / dden;
    throw Error(ErrorKind::MFunctionPole, "m-function denominator vanishes");
}

}  // namespace

MCoefficient m_closed_form(Model model, cplx q0, const SpectralParameter& z, Sign sign) {
    MCoefficient m;
    m.z = z;
    m.sign = sign;
    m.provenance = Provenance::closed_form;
    const double pm = sign == Sign::plus ? 1.0 : -1.0;
    const double scale = 1.0 + std::abs(z.z) + std::abs(q0);
    if (model == Model::Defocusing) {
        if (q0 == 0.0) {
            double half = 0.0;
            if (z.z.imag() > 0.0 || (z.z.imag() == 0.0 && z.side == BoundarySide::above)) half = 1.0;
            else if (z.z.imag() < 0.0 || (z.z.imag() == 0.0 && z.side == BoundarySide::below)) half = -1.0;
            else off_domain("z on the real axis without side above/below");
            m.value = cplx(0.0, pm * half);
            return m;
        }
        const cplx s = branch_sqrt({model, q0}, z);
        const cplx ds = s == 0.0 ? cplx(INFINITY) : z.z / s;
        m.value = ratio(-q0.real() + pm * I_ * s, z.z + q0.imag(), pm * I_ * ds, 1.0, scale);
        return m;
    }
    if (model == Model::Focusing) {
        const cplx s = branch_sqrt({model, q0}, z);
        const cplx ds = s == 0.0 ? cplx(INFINITY) : z.z / s;
        m.value = ratio(q0.imag() - pm * s, I_ * z.z + q0.real(), -pm * ds, I_, scale);
        return m;
    }
    throw Error(ErrorKind::InvalidArgument, "m-functions are defined for the defocusing and focusing models only");
}

MatrixPotential side_potential(const ScalarPotential& q, Model model, Side side) {
    if (model == Model::GeneralJSA)
        throw Error(ErrorKind::InvalidArgument, "m-functions are defined for the defocusing and focusing models only");
    auto d = build_matrix_potential(model, q);
    return side == Side::Dirac ? d : to_hamiltonian_potential(d);
}

namespace {

struct Channel {
    cplx mu;
    Vec2 v;
};

Vec2 eigvec(const Mat2& a, cplx mu) {
    const Vec2 v1{a(0, 1), mu - a(0, 0)};
    const Vec2 v2{mu - a(1, 1), a(1, 0)};
    const Vec2 v = norm2(v1) >= norm2(v2) ? v1 : v2;
    const double n = norm2(v);
    if (n == 0.0) throw Error(ErrorKind::ChannelDegenerate, "tail generator is scalar");
    return v / n;
}

// Eigen-channel of the tail generator that decays toward +inf (right) or -inf.
Channel decaying_channel(const Mat2& qtail, const SpectralParameter& z, Side side, bool right) {
    const Mat2 a = generator(qtail, z.z, side);
    const cplx h = 0.5 * trace(a);
    const cplx kappa = std::sqrt(h * h - det(a));
    const double scale = std::max(1.0, std::abs(kappa));
    const cplx mu1 = h + kappa, mu2 = h - kappa;
    const double gap = mu1.real() - mu2.real();
    cplx mu;
    if (std::abs(gap) > 1e-12 * scale) {
        const bool first_smaller = gap < 0;
        mu = (right == first_smaller) ? mu1 : mu2;
    } else {
        // On the tail's essential spectrum: follow the channel that decays for z + 0*d.
        const cplx d = side_direction(z.side);
        if (d == 0.0) throw Error(ErrorKind::ChannelDegenerate, "z lies on the essential spectrum of the tail");
        const Mat2 a1 = generator(Mat2{}, 1.0, side) - generator(Mat2{}, 0.0, side);
        const Mat2 adj{a(1, 1), -a(0, 1), -a(1, 0), a(0, 0)};
        const cplx ddet = trace(adj * a1);
        if (std::abs(kappa) <= 1e-12 * scale) throw Error(ErrorKind::ChannelDegenerate, "tail band edge");
        const cplx dmu1 = -ddet / (2.0 * kappa);  // d mu1/dz; d mu2/dz = -dmu1
        const double drift = (d * dmu1).real();
        if (std::abs(drift) <= 1e-12 * scale) throw Error(ErrorKind::ChannelDegenerate, "one-sided limit undecided");
        const bool mu1_drops = drift < 0;
        mu = (right == mu1_drops) ? mu1 : mu2;
    }
    return {mu, eigvec(a, mu)};
}

}  // namespace

Vec2 WeylSolutions::Branch::eval(double x) const {
    if ((right && x >= anchor) || (!right && x <= anchor)) return std::exp(mu * (x - anchor)) * v;
    return inner(x);
}

WeylSolutions::Branch weyl_branch(const MatrixPotential& pot, const SpectralParameter& z, Sign sign,
                                  const BoundaryFrame& frame) {
    const bool right = sign == Sign::plus;
    const Channel ch = decaying_channel(right ? pot.q.right : pot.q.left, z, pot.side, right);
    WeylSolutions::Branch b;
    b.right = right;
    b.mu = ch.mu;
    b.anchor = right ? pot.q.last() : pot.q.first();
    const bool zero_in_tail = right ? 0.0 >= b.anchor : 0.0 <= b.anchor;
    const Vec2 w = zero_in_tail ? std::exp(ch.mu * (0.0 - b.anchor)) * ch.v : transfer(pot, z.z, b.anchor, 0.0) * ch.v;
    const Vec2 cd = inverse(frame.initial(pot.side)) * w;
    if (std::abs(cd.a) < 1e-12 * norm2(w))
        throw Error(ErrorKind::MFunctionPole, "Weyl solution is proportional to Phi at x = 0");
    b.m = cd.b / cd.a;
    b.v = ch.v / cd.a;
    b.inner = CellField<Vec2>(pot, z.z, b.anchor, b.v);
    return b;
}

WeylSolutions::WeylSolutions(const ScalarPotential& q, Model model, const SpectralParameter& z,
                             const BoundaryFrame& frame, Side side)
    : pot_(side_potential(q, model, side)), z_(z) {
    f_ = CellField<Mat2>(pot_, z.z, 0.0, frame.initial(side));
    plus_ = weyl_branch(pot_, z, Sign::plus, frame);
    minus_ = weyl_branch(pot_, z, Sign::minus, frame);
}

MCoefficient m_numeric(const ScalarPotential& q, Model model, const SpectralParameter& z, Sign sign,
                       const BoundaryFrame& frame, Side side) {
    q.validate();
    const MatrixPotential pot = side_potential(q, model, side);
    MCoefficient m;
    m.z = z;
    m.sign = sign;
    m.frame = frame;
    m.provenance = Provenance::numeric;
    m.value = weyl_branch(pot, z, sign, frame).m;
    return m;
}

Mat2 gamma_matrix(cplx mm, cplx mp) {
    const cplx d = mm - mp;
    if (std::abs(d) <= 1e-14 * std::max({1.0, std::abs(mm), std::abs(mp)}))
        throw Error(ErrorKind::DegenerateWronskian, "m_minus equals m_plus");
    return Mat2{1.0, mm, mp, mm * mp} / d;
}

Mat2 m_matrix(cplx mm, cplx mp) {
    const Mat2 g = gamma_matrix(mm, mp);
    Mat2 m = 0.5 * (g + transpose(g));
    m(1, 0) = m(0, 1);
    return m;
}

double jsym_residual(Model model, const ScalarPotential& q, const SpectralParameter& z, const BoundaryFrame& frame) {
    if (model != Model::Focusing) throw Error(ErrorKind::InvalidArgument, "J-symmetry residual is a focusing identity");
    double r = 0.0;
    for (Sign s : {Sign::plus, Sign::minus}) {
        const cplx a = m_numeric(q, model, z, s, frame).value;
        const cplx b = m_numeric(q, model, conj(z), s, frame).value;
        r = std::max(r, std::abs(std::conj(a) * b + 1.0));
    }
    return r;
}

double rotation_residual(const ScalarPotential& q, const SpectralParameter& z, double theta) {
    double r = 0.0;
    for (Sign s : {Sign::plus, Sign::minus}) {
        const cplx a = m_numeric(q, Model::Focusing, z, s, {theta}).value;
        const cplx b = m_numeric(q, Model::Focusing, conj(z), s, {theta - std::numbers::pi / 2}).value;
        r = std::max(r, std::abs(std::conj(a) - b));
    }
    return r;
}

double reflection_residual(const ScalarPotential& q, const SpectralParameter& z, const BoundaryFrame& frame) {
    double r = 0.0;
    for (Sign s : {Sign::plus, Sign::minus}) {
        const cplx a = m_numeric(q, Model::Defocusing, z, s, frame).value;
        const cplx b = m_numeric(q, Model::Defocusing, conj(z), s, frame).value;
        r = std::max(r, std::abs(std::conj(a) - b));
    }
    return r;
}

}  // namespace dwt
