#include "dwsync/model.hpp"

#include <cmath>
#include <cstddef>

namespace dwsync {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& x) { return dot(x, x); }

double norm(const Vec& x) { return std::sqrt(norm2(x)); }

double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double e = a[i] - b[i];
        s += e * e;
    }
    return std::sqrt(s);
}

Vec drift(const Vec& x) {
    double f = 1.0 - norm2(x);
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
    return out;
}

Vec drift_jacobian_apply(const Vec& x, const Vec& u) {
    double f = 1.0 - norm2(x);
    double xu = dot(x, u);
    Vec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = f * u[i] - 2.0 * xu * x[i];
    return out;
}

double one_sided_gap(const Vec& x, const Vec& y) {
    Vec bx = drift(x), by = drift(y);
    double lhs = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = x[i] - y[i];
        lhs += e * (bx[i] - by[i]);
        d2 += e * e;
    }
    return lhs - d2 * (1.0 - 0.75 * norm2(x));
}

double invariant_log_density(double r2, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("invariant_log_density: sigma must be > 0");
    return (2.0 / (sigma * sigma)) * (0.5 * r2 - 0.25 * r2 * r2);
}

}  // namespace dwsync
