#include "dwsync/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace dwsync {

namespace {

constexpr int kMaxDepth = 60;
constexpr double kPi = 3.141592653589793238462643383279502884;

double ipow(double r, int k) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= r;
    return p;
}

struct PanelSum {
    double value = 0.0;
    double err = 0.0;
};

// Adaptive Simpson with Richardson extrapolation. A panel is accepted when the
// two-level difference |delta| is below the local tolerance; the accumulated
// error report is sum |delta|, deliberately conservative (the extrapolated
// value is accurate to roughly |delta|/15).
PanelSum simpson_aux(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::abs(delta) <= tol) return {left + right + delta / 15.0, std::abs(delta)};
    // delta is roundoff noise yet above tol: no amount of refinement helps
    double floor = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (depth <= 0 || tol <= floor)
        throw QuadratureError("tolerance unreachable at maximum refinement depth");
    PanelSum l = simpson_aux(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    PanelSum r = simpson_aux(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    return {l.value + r.value, l.err + r.err};
}

// Initial uniform split keeps the first acceptance decisions below the scale
// of the integrand's peak, so the h^4 error model behind |delta| is already
// valid when a panel is accepted.
PanelSum adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const int kInitPanels = 32;
    double h = (b - a) / kInitPanels;
    PanelSum total;
    double fl = f(a);
    for (int i = 0; i < kInitPanels; ++i) {
        double pa = a + i * h;
        double pb = (i == kInitPanels - 1) ? b : pa + h;
        double fm = f(0.5 * (pa + pb));
        double fr = f(pb);
        double whole = (pb - pa) / 6.0 * (fl + 4.0 * fm + fr);
        PanelSum p = simpson_aux(f, pa, pb, fl, fm, fr, whole, tol / kInitPanels, kMaxDepth);
        total.value += p.value;
        total.err += p.err;
        fl = fr;
    }
    return total;
}

struct TailBounds {
    double d_tail = 0.0;   // tail of int r^{n-1} g
    double n_tail = 0.0;   // tail of int |1-r^2| r^{n-1} g
};

// Beyond R > 1 the weight is dominated by a decaying exponential:
// (r^2-1)^2 >= (R^2-1)^2 + 4R(R^2-1)(r-R), and the polynomial factors grow
// at most exponentially with rates (n-1)/R and 2R/(R^2-1).
TailBounds analytic_tails(int n, double sigma, double R) {
    double gR = scaled_weight(R, sigma);
    double rn = ipow(R, n - 1);
    double decay = 2.0 * R * (R * R - 1.0) / (sigma * sigma);
    double kd = decay - (n - 1) / R;
    double kn = kd - 2.0 * R / (R * R - 1.0);
    if (!(kd > 0.0) || !(kn > 0.0))
        throw QuadratureError("truncation radius too small for analytic tail bound");
    return {gR * rn / kd, gR * rn * (R * R - 1.0) / kn};
}

}  // namespace

const char* to_string(BoundKind k) {
    return k == BoundKind::exact ? "exact" : "upper_bound";
}

double sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("sphere_area: n must be >= 1");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double scaled_weight(double r, double sigma) {
    double u = r * r - 1.0;
    return std::exp(-u * u / (2.0 * sigma * sigma));
}

double truncation_radius(int n, double sigma, double tol) {
    if (!(sigma > 0.0) || !(tol > 0.0)) throw std::invalid_argument("truncation_radius: need sigma > 0, tol > 0");
    double budget = 2.0 * std::log(1.0 / tol) + 50.0;
    double R = std::max(2.0, std::sqrt(1.0 + sigma * std::sqrt(2.0 * budget)));
    for (int i = 0; i < 64; ++i) {
        double target = budget + n * std::log(R);
        double next = std::sqrt(1.0 + sigma * std::sqrt(2.0 * target));
        next = std::max(next, 2.0);
        if (std::abs(next - R) <= 1e-12 * R) { R = next; break; }
        R = next;
    }
    auto slack = [&](double r) {
        double u = r * r - 1.0;
        return u * u / (2.0 * sigma * sigma) - budget - n * std::log(r);
    };
    while (slack(R) < 0.0) R *= 1.0 + 1e-9;
    return R;
}

QuadratureResult normalization_Z(int n, double sigma, double tol) {
    if (n < 1) throw std::invalid_argument("normalization_Z: n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("normalization_Z: sigma must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("normalization_Z: tol must be > 0");

    double scale = 1.0 / (2.0 * sigma * sigma);
    if (scale > 700.0) throw QuadratureError("normalization_Z: exp(1/(2 sigma^2)) overflows double");

    double R = truncation_radius(n, sigma, std::min(tol, 1e-6));
    auto fD = [&](double r) { return ipow(r, n - 1) * scaled_weight(r, sigma); };

    PanelSum coarse = adaptive_simpson(fD, 0.0, R, 1e-6 * (1.0 + ipow(R, n) / n));
    PanelSum fine = adaptive_simpson(fD, 0.0, R, 0.25 * tol * coarse.value);
    TailBounds tails = analytic_tails(n, sigma, R);

    QuadratureResult res;
    res.value = sphere_area(n) * std::exp(scale) * fine.value;
    res.abs_error_estimate = fine.err / fine.value;           // relative, see header
    res.tail_bound = tails.d_tail / fine.value;               // relative
    res.truncation_radius = R;
    res.kind = BoundKind::exact;
    if (res.abs_error_estimate + res.tail_bound > tol)
        throw QuadratureError("normalization_Z: requested tolerance not met");
    return res;
}

QuadratureResult lambda_top_quad(int n, double sigma, double tol) {
    if (n < 1) throw std::invalid_argument("lambda_top_quad: n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("lambda_top_quad: sigma must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("lambda_top_quad: tol must be > 0");

    double R = truncation_radius(n, sigma, std::min(tol, 1e-8));
    auto fD = [&](double r) { return ipow(r, n - 1) * scaled_weight(r, sigma); };
    auto fN = [&](double r) { return (1.0 - r * r) * fD(r); };

    PanelSum coarseD = adaptive_simpson(fD, 0.0, R, 1e-6 * (1.0 + ipow(R, n) / n));
    PanelSum coarseN = adaptive_simpson(fN, 0.0, R, 1e-6 * (1.0 + ipow(R, n + 2) / n));
    double lam_coarse = coarseN.value / coarseD.value;
    TailBounds tails = analytic_tails(n, sigma, R);

    double tol_n = 0.25 * tol * coarseD.value;
    double tol_d = 0.25 * tol * coarseD.value / std::max(std::abs(lam_coarse), 1e-3);
    for (int attempt = 0; attempt < 4; ++attempt) {
        PanelSum D = adaptive_simpson(fD, 0.0, R, tol_d);
        PanelSum N = adaptive_simpson(fN, 0.0, R, tol_n);
        double lam = N.value / D.value;
        double err = (N.err + std::abs(lam) * D.err) / D.value;
        if (err <= tol) {
            QuadratureResult res;
            res.value = lam;
            res.abs_error_estimate = err;
            res.tail_bound = (tails.n_tail + std::abs(lam) * tails.d_tail) / D.value;
            res.truncation_radius = R;
            res.kind = (n == 1) ? BoundKind::exact : BoundKind::upper_bound;
            return res;
        }
        tol_n *= 0.1;
        tol_d *= 0.1;
    }
    throw QuadratureError("lambda_top_quad: requested tolerance not met");
}

double scaled_numerator(int n, double sigma, double tol) {
    double R = truncation_radius(n, sigma, std::min(tol, 1e-8));
    auto fN = [&](double r) {
        return (1.0 - r * r) * ipow(r, n - 1) * scaled_weight(r, sigma);
    };
    return adaptive_simpson(fN, 0.0, R, tol).value;
}

double closed_form_bound_n2(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("closed_form_bound_n2: sigma must be > 0");
    double R = truncation_radius(2, sigma, 1e-12);
    auto fD = [&](double r) { return r * scaled_weight(r, sigma); };
    PanelSum coarse = adaptive_simpson(fD, 0.0, R, 1e-6 * (1.0 + 0.5 * R * R));
    PanelSum D = adaptive_simpson(fD, 0.0, R, 1e-12 * coarse.value);
    double scale = 1.0 / (2.0 * sigma * sigma);
    // -pi sigma^2 / Z with Z = 2 pi e^{1/(2 sigma^2)} D
    return -0.5 * sigma * sigma * std::exp(-scale) / D.value;
}

SigmaStarResult sigma_star(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("sigma_star: tol must be > 0");
    const double lam_tol = 1e-12;
    double lo = 0.5, hi = 2.0;
    double flo = lambda_top_quad(1, lo, lam_tol).value;
    double fhi = lambda_top_quad(1, hi, lam_tol).value;
    if (!(flo > 0.0) || !(fhi < 0.0))
        throw QuadratureError("sigma_star: [0.5, 2.0] does not bracket a sign change");
    int it = 0;
    while (hi - lo > 2.0 * tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;   // bracket at floating-point resolution
        double fm = lambda_top_quad(1, mid, lam_tol).value;
        ++it;
        if (fm > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return {lo, hi, flo, fhi, it};
}

InvariantCdf::InvariantCdf(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("InvariantCdf: sigma must be > 0");
    radius_ = truncation_radius(1, sigma, 1e-12);
    const int panels = 1 << 15;
    step_ = 2.0 * radius_ / panels;
    cum_.resize(panels + 1);
    cum_[0] = 0.0;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        double a = -radius_ + i * step_;
        double b = a + step_;
        double m = 0.5 * (a + b);
        total += step_ / 6.0 *
                 (scaled_weight(a, sigma) + 4.0 * scaled_weight(m, sigma) + scaled_weight(b, sigma));
        cum_[i + 1] = total;
    }
    for (auto& c : cum_) c /= total;
}

double InvariantCdf::operator()(double x) const {
    if (x <= -radius_) return 0.0;
    if (x >= radius_) return 1.0;
    double pos = (x + radius_) / step_;
    auto i = static_cast<std::size_t>(pos);
    if (i >= cum_.size() - 1) i = cum_.size() - 2;
    double frac = pos - double(i);
    return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
}

}  // namespace dwsync
