#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dwsync {

// Thrown when a requested tolerance is unreachable at the configured maximum
// refinement depth, when a bracket fails, or when a value overflows double.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& msg) : std::runtime_error("quadrature: " + msg) {}
};

enum class BoundKind { exact, upper_bound };
const char* to_string(BoundKind k);

// For lambda_top_quad the error fields are absolute (lambda is O(1)).
// For normalization_Z they are relative: Z carries a factor exp(1/(2 sigma^2))
// that spans hundreds of orders of magnitude, so an absolute tolerance would be
// meaningless for small sigma.
struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    double tail_bound = 0.0;
    double truncation_radius = 0.0;
    BoundKind kind = BoundKind::exact;
};

struct SigmaStarResult {
    double lower = 0.0;
    double upper = 0.0;
    double lambda_at_lower = 0.0;
    double lambda_at_upper = 0.0;
    int iterations = 0;
};

// Surface area of the unit (n-1)-sphere; A_1 = 2.
double sphere_area(int n);

// exp(-(r^2-1)^2 / (2 sigma^2)), the stationary radial weight with the
// exp(1/(2 sigma^2)) factor removed.
double scaled_weight(double r, double sigma);

// Smallest radius R (up to fixed-point convergence) with
// (R^2-1)^2/(2 sigma^2) >= 2 ln(1/tol) + n ln R + 50.
double truncation_radius(int n, double sigma, double tol);

// Z_sigma = A_n int_0^inf r^{n-1} exp((2/sigma^2)(r^2/2 - r^4/4)) dr.
// tol is relative (see note on QuadratureResult).
QuadratureResult normalization_Z(int n, double sigma, double tol);

// (1/Z) A_n int_0^inf (1 - r^2) r^{n-1} exp((2/sigma^2)(r^2/2 - r^4/4)) dr.
// Exact top Lyapunov exponent for n = 1, an upper bound for n >= 2 (kind flag).
// tol is absolute.
QuadratureResult lambda_top_quad(int n, double sigma, double tol);

// Closed form of the n = 2 integral: -pi sigma^2 / Z_sigma, equivalently
// -(sigma^2/2) exp(-1/(2 sigma^2)) / int_0^inf r exp(-(r^2-1)^2/(2 sigma^2)) dr.
// Agrees with lambda_top_quad(2, sigma) to quadrature tolerance.
double closed_form_bound_n2(double sigma);

// Bisection for the sign change of lambda_top_quad(1, .) on [0.5, 2.0].
SigmaStarResult sigma_star(double tol);

// The unnormalized numerator integral N(sigma) = int_0^inf (1-r^2) r^{n-1}
// e^{(2/sigma^2)(r^2/2 - r^4/4)} dr in scaled form N(sigma) e^{-1/(2 sigma^2)}.
// This is the quantity that is strictly decreasing in sigma (the normalized
// ratio lambda is not monotone on [0.3, 3]).
double scaled_numerator(int n, double sigma, double tol);

// CDF of the one-dimensional stationary law on M, for distribution tests.
class InvariantCdf {
  public:
    explicit InvariantCdf(double sigma);
    double operator()(double x) const;

  private:
    double radius_;
    double step_;
    std::vector<double> cum_;   // cumulative integral at grid nodes
};

}  // namespace dwsync
