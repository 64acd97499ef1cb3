#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwsync/model.hpp"
#include "dwsync/noise.hpp"

namespace dwsync {

enum class Scheme { tamed_em, em };

struct SolverConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::tamed_em;
    int64_t record_stride = 1;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
        if (record_stride < 1) throw std::invalid_argument("SolverConfig: record_stride must be >= 1");
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
};

struct DivergenceError : std::runtime_error {
    double time;
    DivergenceError(double t, double nrm)
        : std::runtime_error("integrator: |x| = " + std::to_string(nrm) +
                             " exceeded divergence guard at t = " + std::to_string(t)),
          time(t) {}
};

// Deterministic control paths from the proofs: drive the state along the
// straight line from `from` to `to` over [0, t0] (and hold it at `to` after),
// or pin the drift's motion relative to a fixed point x*.
struct ControlSpec {
    enum class Kind { line_to, hold_at };
    Kind kind;
    Vec from, to;
    double t0 = 0.0;
    Vec x_star;

    static ControlSpec line_to(Vec from, Vec to, double t0) {
        if (!(t0 > 0.0)) throw std::invalid_argument("ControlSpec: line_to needs t0 > 0");
        if (from.size() != to.size()) throw std::invalid_argument("ControlSpec: endpoint dimensions differ");
        ControlSpec c;
        c.kind = Kind::line_to;
        c.from = std::move(from);
        c.to = std::move(to);
        c.t0 = t0;
        return c;
    }
    static ControlSpec hold_at(Vec x_star) {
        ControlSpec c;
        c.kind = Kind::hold_at;
        c.x_star = std::move(x_star);
        return c;
    }
};

// t must sit on the dt grid (within 1e-9 relative).
int64_t cells_of(double t, double dt);

// one scheme step; noise touches only the first p.n components
Vec step(const Vec& x, int64_t k, const IncrementSource& src, const SystemParams& p,
         const SolverConfig& cfg);

// iterates step over absolute grid cells from t_begin/dt to t_end/dt, recording
// every record_stride steps plus the final state
Trajectory simulate(const Vec& x0, const IncrementSource& src, const SystemParams& p,
                    const SolverConfig& cfg, double t_begin, double t_end);

// explicit Euler step of the variational equation v' = Db(x) v at frozen x
Vec step_variational(const Vec& x, const Vec& v, double dt);

// explicit Euler for z' = b(z) + sigma u'(t) with the control substituted in
// closed form; a final partial step lands exactly on t_end
Trajectory simulate_controlled(const ControlSpec& spec, const Vec& x0, const SystemParams& p,
                               const SolverConfig& cfg, double t_end);

namespace detail {

constexpr double kDivergenceGuard2 = 1e12;   // |x|^2 threshold, i.e. |x| > 1e6

// In-place drift + noise update. Returns |x|^2 of the INPUT state, which the
// caller uses for divergence checks without an extra pass.
inline double scheme_step_inplace(double* x, int d, int n, double sigma, double dt, bool tamed,
                                  const double* dW) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    double f = 1.0 - r2;
    double scale;
    if (tamed) {
        double bnorm = std::abs(f) * std::sqrt(r2);
        scale = dt * f / (1.0 + dt * bnorm);
    } else {
        scale = dt * f;
    }
    for (int i = 0; i < d; ++i) x[i] += scale * x[i];
    if (dW != nullptr) {
        for (int c = 0; c < n; ++c) x[c] += sigma * dW[c];
    }
    return r2;
}

inline void variational_step_inplace(const double* x, double* v, int d, double dt, double r2x) {
    double f = 1.0 - r2x;
    double xv = 0.0;
    for (int i = 0; i < d; ++i) xv += x[i] * v[i];
    for (int i = 0; i < d; ++i) v[i] += dt * (f * v[i] - 2.0 * xv * x[i]);
}

}  // namespace detail

}  // namespace dwsync
