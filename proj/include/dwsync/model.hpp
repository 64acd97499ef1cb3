#pragma once

#include <stdexcept>
#include <vector>

namespace dwsync {

using Vec = std::vector<double>;

// Parameters of the SDE: state dimension d, number of driven coordinates n
// (noise enters the first n components only), and noise strength sigma.
struct SystemParams {
    int d = 1;
    int n = 1;
    double sigma = 1.0;

    SystemParams(int d_, int n_, double sigma_) : d(d_), n(n_), sigma(sigma_) {
        if (d < 1) throw std::invalid_argument("SystemParams: d must be >= 1");
        if (n < 1 || n > d) throw std::invalid_argument("SystemParams: need 1 <= n <= d");
        if (!(sigma >= 0.0)) throw std::invalid_argument("SystemParams: sigma must be >= 0");
    }

    // n = d means every coordinate is driven.
    bool degenerate() const { return n < d; }
    bool deterministic() const { return sigma == 0.0; }
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& x);   // |x|^2
double norm(const Vec& x);
double dist(const Vec& a, const Vec& b);

// b(x) = (1 - |x|^2) x
Vec drift(const Vec& x);

// Db(x) u = (1 - |x|^2) u - 2 <x,u> x
Vec drift_jacobian_apply(const Vec& x, const Vec& u);

// <x-y, b(x)-b(y)> - |x-y|^2 (1 - 3/4 |x|^2); nonpositive for all x, y.
double one_sided_gap(const Vec& x, const Vec& y);

// log of the unnormalized stationary density as a function of r2 = |x|^2:
// (2/sigma^2) (r2/2 - r2^2/4)
double invariant_log_density(double r2, double sigma);

}  // namespace dwsync
