#include "dwsync/integrator.hpp"

#include <cmath>

namespace dwsync {

int64_t cells_of(double t, double dt) {
    double q = t / dt;
    auto k = static_cast<int64_t>(std::llround(q));
    if (std::abs(static_cast<double>(k) * dt - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument("integrator: t = " + std::to_string(t) +
                                    " is not an integer multiple of dt = " + std::to_string(dt));
    return k;
}

namespace {

void check_compatible(const Vec& x, const IncrementSource& src, const SystemParams& p,
                      const SolverConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(x.size()) != p.d)
        throw std::invalid_argument("integrator: state dimension does not match params");
    if (p.sigma > 0.0) {
        if (src.n() != p.n)
            throw std::invalid_argument("integrator: increment source dimension does not match params");
        if (src.dt() != cfg.dt)
            throw std::invalid_argument("integrator: increment source dt does not match solver dt");
    }
}

}  // namespace

Vec step(const Vec& x, int64_t k, const IncrementSource& src, const SystemParams& p,
         const SolverConfig& cfg) {
    check_compatible(x, src, p, cfg);
    Vec y = x;
    Vec w;
    const double* dW = nullptr;
    if (p.sigma > 0.0) {
        w.resize(p.n);
        src.increment(k, w.data());
        dW = w.data();
    }
    detail::scheme_step_inplace(y.data(), p.d, p.n, p.sigma, cfg.dt,
                                cfg.scheme == Scheme::tamed_em, dW);
    double r2 = norm2(y);
    if (r2 > detail::kDivergenceGuard2)
        throw DivergenceError(static_cast<double>(k + 1) * cfg.dt, std::sqrt(r2));
    return y;
}

Trajectory simulate(const Vec& x0, const IncrementSource& src, const SystemParams& p,
                    const SolverConfig& cfg, double t_begin, double t_end) {
    check_compatible(x0, src, p, cfg);
    int64_t k0 = cells_of(t_begin, cfg.dt);
    int64_t k1 = cells_of(t_end, cfg.dt);
    if (k1 < k0) throw std::invalid_argument("integrator: t_end < t_begin");

    const bool tamed = cfg.scheme == Scheme::tamed_em;
    const bool noisy = p.sigma > 0.0;
    Vec x = x0;
    Vec w(p.n, 0.0);

    Trajectory out;
    out.times.push_back(t_begin);
    out.states.push_back(x);
    for (int64_t k = k0; k < k1; ++k) {
        if (noisy) src.increment(k, w.data());
        double r2_in = detail::scheme_step_inplace(x.data(), p.d, p.n, p.sigma, cfg.dt, tamed,
                                                   noisy ? w.data() : nullptr);
        if (r2_in > detail::kDivergenceGuard2)
            throw DivergenceError(static_cast<double>(k) * cfg.dt, std::sqrt(r2_in));
        int64_t i = k - k0 + 1;
        if (i % cfg.record_stride == 0 || k + 1 == k1) {
            out.times.push_back(static_cast<double>(k + 1) * cfg.dt);
            out.states.push_back(x);
        }
    }
    double r2 = norm2(x);
    if (r2 > detail::kDivergenceGuard2) throw DivergenceError(t_end, std::sqrt(r2));
    return out;
}

Vec step_variational(const Vec& x, const Vec& v, double dt) {
    if (x.size() != v.size())
        throw std::invalid_argument("integrator: state and tangent dimensions differ");
    if (!(dt > 0.0)) throw std::invalid_argument("integrator: dt must be > 0");
    Vec u = v;
    detail::variational_step_inplace(x.data(), u.data(), static_cast<int>(x.size()), dt, norm2(x));
    return u;
}

Trajectory simulate_controlled(const ControlSpec& spec, const Vec& x0, const SystemParams& p,
                               const SolverConfig& cfg, double t_end) {
    cfg.validate();
    if (static_cast<int>(x0.size()) != p.d)
        throw std::invalid_argument("integrator: state dimension does not match params");
    if (!(t_end > 0.0)) throw std::invalid_argument("integrator: t_end must be > 0");
    if (spec.kind == ControlSpec::Kind::line_to) {
        if (static_cast<int>(spec.from.size()) != p.d || static_cast<int>(spec.to.size()) != p.d)
            throw std::invalid_argument("integrator: control endpoints do not match params");
    } else {
        if (static_cast<int>(spec.x_star.size()) != p.d)
            throw std::invalid_argument("integrator: control point does not match params");
    }

    const int d = p.d;
    // sigma u'(t): for line_to, psi(t) interpolates from->to on [0,t0] and the
    // control is psi'(t) - b(psi(t)) while t < t0, then -b(to); for hold_at it
    // is the constant -b(x_star).
    Vec psi_dot(d, 0.0);
    if (spec.kind == ControlSpec::Kind::line_to) {
        for (int i = 0; i < d; ++i) psi_dot[i] = (spec.to[i] - spec.from[i]) / spec.t0;
    }
    auto control = [&](double t, Vec& out) {
        if (spec.kind == ControlSpec::Kind::hold_at) {
            Vec b = drift(spec.x_star);
            for (int i = 0; i < d; ++i) out[i] = -b[i];
            return;
        }
        if (t < spec.t0) {
            double s = t / spec.t0;
            Vec psi(d);
            for (int i = 0; i < d; ++i) psi[i] = (1.0 - s) * spec.from[i] + s * spec.to[i];
            Vec b = drift(psi);
            for (int i = 0; i < d; ++i) out[i] = psi_dot[i] - b[i];
        } else {
            Vec b = drift(spec.to);
            for (int i = 0; i < d; ++i) out[i] = -b[i];
        }
    };

    auto euler_substep = [&](Vec& z, double t, double h) {
        Vec b = drift(z);
        Vec u(d);
        control(t, u);
        for (int i = 0; i < d; ++i) z[i] += h * (b[i] + u[i]);
        if (norm2(z) > detail::kDivergenceGuard2) throw DivergenceError(t + h, norm(z));
    };
    // split any step that crosses the line_to breakpoint so the hold phase
    // takes over exactly at the line's endpoint
    auto euler_step = [&](Vec& z, double t, double h) {
        if (spec.kind == ControlSpec::Kind::line_to && t < spec.t0 && spec.t0 < t + h) {
            euler_substep(z, t, spec.t0 - t);
            euler_substep(z, spec.t0, t + h - spec.t0);
        } else {
            euler_substep(z, t, h);
        }
    };

    int64_t n_full = static_cast<int64_t>(std::floor(t_end / cfg.dt + 1e-12));
    double remainder = t_end - static_cast<double>(n_full) * cfg.dt;
    if (remainder < 1e-12 * std::max(1.0, t_end)) remainder = 0.0;

    Vec z = x0;
    Trajectory out;
    out.times.push_back(0.0);
    out.states.push_back(z);
    for (int64_t k = 0; k < n_full; ++k) {
        euler_step(z, static_cast<double>(k) * cfg.dt, cfg.dt);
        int64_t i = k + 1;
        if (i % cfg.record_stride == 0 || (k + 1 == n_full && remainder == 0.0)) {
            out.times.push_back(static_cast<double>(k + 1) * cfg.dt);
            out.states.push_back(z);
        }
    }
    if (remainder > 0.0) {
        euler_step(z, static_cast<double>(n_full) * cfg.dt, remainder);
        out.times.push_back(t_end);
        out.states.push_back(z);
    }
    return out;
}

}  // namespace dwsync
