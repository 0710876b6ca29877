#include "dwt/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace dwt {

namespace {

using rule20 = boost::math::quadrature::gauss<double, 20>;

void append_panel(QuadRule& r, double a, double b) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    const auto& xs = rule20::abscissa();
    const auto& ws = rule20::weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] == 0.0) {
            r.x.push_back(c);
            r.w.push_back(h * ws[i]);
            continue;
        }
        r.x.push_back(c - h * xs[i]);
        r.w.push_back(h * ws[i]);
        r.x.push_back(c + h * xs[i]);
        r.w.push_back(h * ws[i]);
    }
}

}  // namespace

QuadRule gauss_legendre(double a, double b, int panels) {
    QuadRule r;
    for (int k = 0; k < panels; ++k) append_panel(r, a + (b - a) * k / panels, a + (b - a) * (k + 1) / panels);
    return r;
}

QuadRule gauss_legendre(const std::vector<double>& cuts, int panels_per_piece) {
    QuadRule r;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        auto p = gauss_legendre(cuts[i], cuts[i + 1], panels_per_piece);
        r.x.insert(r.x.end(), p.x.begin(), p.x.end());
        r.w.insert(r.w.end(), p.w.begin(), p.w.end());
    }
    return r;
}

}  // namespace dwt
