#include "dwsync/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "dwsync/integrator.hpp"
#include "dwsync/lyapunov.hpp"
#include "dwsync/model.hpp"
#include "dwsync/noise.hpp"
#include "dwsync/quadrature.hpp"
#include "dwsync/sync.hpp"

namespace dwsync {

namespace {

constexpr uint64_t kSeed = 20240814;

struct Harness {
    std::vector<CheckResult> results;
    int threads;

    void run(const std::string& name, const std::function<std::string()>& body) {
        CheckResult r;
        r.name = name;
        try {
            r.detail = body();
            r.pass = r.detail.empty();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        results.push_back(std::move(r));
    }
};

std::string expect(bool cond, const std::string& msg) { return cond ? "" : msg; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void model_checks(Harness& h) {
    h.run("model.drift_examples", [] {
        Vec z = drift({0.0, 0.0});
        if (z != Vec{0.0, 0.0}) return std::string("drift(0) != 0");
        Vec e = drift({1.0, 0.0});
        if (e != Vec{0.0, 0.0}) return std::string("drift(e1) != 0");
        Vec big = drift({2.0, 0.0, 0.0});
        if (std::abs(big[0] + 6.0) > 1e-15) return std::string("drift(2e1) != -6e1");
        return std::string();
    });
    h.run("model.jacobian_matches_fd", [] {
        for (int trial = 0; trial < 1000; ++trial) {
            Vec x(3), u(3);
            for (int c = 0; c < 3; ++c) {
                x[c] = -2.0 + 4.0 * hash_uniform(kSeed, 1, trial, c);
                u[c] = -1.0 + 2.0 * hash_uniform(kSeed, 2, trial, c);
            }
            Vec jv = drift_jacobian_apply(x, u);
            const double h0 = 1e-5;
            Vec xp = x, xm = x;
            for (int c = 0; c < 3; ++c) {
                xp[c] += h0 * u[c];
                xm[c] -= h0 * u[c];
            }
            Vec fp = drift(xp), fm = drift(xm);
            for (int c = 0; c < 3; ++c) {
                double fd = (fp[c] - fm[c]) / (2.0 * h0);
                if (std::abs(fd - jv[c]) > 1e-6 * (1.0 + std::abs(jv[c])))
                    return "fd mismatch " + fmt(fd) + " vs " + fmt(jv[c]);
            }
        }
        return std::string();
    });
    h.run("model.one_sided_gap_nonpositive", [] {
        double worst = 0.0;
        for (int trial = 0; trial < 100000; ++trial) {
            Vec x(3), y(3);
            for (int c = 0; c < 3; ++c) {
                x[c] = -3.0 + 6.0 * hash_uniform(kSeed, 3, trial, c);
                y[c] = -3.0 + 6.0 * hash_uniform(kSeed, 4, trial, c);
            }
            worst = std::max(worst, one_sided_gap(x, y));
        }
        return expect(worst <= 1e-9, "positive gap " + fmt(worst));
    });
    h.run("model.tangent_quadratic_form_bound", [] {
        for (int trial = 0; trial < 100000; ++trial) {
            Vec x(3), u(3);
            for (int c = 0; c < 3; ++c) {
                x[c] = -3.0 + 6.0 * hash_uniform(kSeed, 5, trial, c);
                u[c] = -1.0 + 2.0 * hash_uniform(kSeed, 6, trial, c);
            }
            double q = dot(drift_jacobian_apply(x, u), u);
            double cap = (1.0 - norm2(x)) * norm2(u);
            if (q > cap + 1e-12 * (1.0 + std::abs(cap)))
                return "form " + fmt(q) + " above cap " + fmt(cap);
        }
        return std::string();
    });
}

void quadrature_checks(Harness& h) {
    h.run("quadrature.lambda_pins", [] {
        double l05 = lambda_top_quad(1, 0.5, 1e-10).value;
        double l20 = lambda_top_quad(1, 2.0, 1e-10).value;
        if (!(l05 > 0.0 && l20 < 0.0)) return std::string("signs wrong");
        if (std::abs(l05 - 0.14786384782166573) > 1e-9) return "lambda(1,0.5) = " + fmt(l05);
        if (std::abs(l20 + 0.2904645432291842) > 1e-9) return "lambda(1,2) = " + fmt(l20);
        return std::string();
    });
    h.run("quadrature.kind_flags", [] {
        if (lambda_top_quad(1, 1.0, 1e-10).kind != BoundKind::exact)
            return std::string("n=1 not flagged exact");
        if (lambda_top_quad(2, 1.0, 1e-10).kind != BoundKind::upper_bound)
            return std::string("n=2 not flagged upper_bound");
        return std::string();
    });
    h.run("quadrature.closed_form_n2", [] {
        for (double s : {0.5, 1.0, 2.0}) {
            double a = lambda_top_quad(2, s, 1e-12).value;
            double b = closed_form_bound_n2(s);
            if (std::abs(a - b) > 1e-10 * std::abs(b))
                return "mismatch at sigma " + fmt(s) + ": " + fmt(a) + " vs " + fmt(b);
        }
        return std::string();
    });
    h.run("quadrature.error_fields_within_tol", [] {
        for (double tol : {1e-6, 1e-8, 1e-10}) {
            auto r = lambda_top_quad(1, 1.3, tol);
            if (!(r.abs_error_estimate + r.tail_bound <= tol))
                return "error above tol " + fmt(tol);
        }
        return std::string();
    });
    h.run("quadrature.normalization_laplace", [] {
        auto z = normalization_Z(1, 0.1, 1e-10);
        double laplace = 0.1 * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(50.0);
        double ratio = z.value / laplace;
        return expect(ratio > 0.99 && ratio < 1.01, "ratio " + fmt(ratio));
    });
    h.run("quadrature.sigma_star_bracket", [] {
        auto r = sigma_star(1e-6);
        if (!(r.lower > 0.5 && r.upper < 2.0)) return std::string("bracket outside (0.5, 2)");
        if (!(r.upper - r.lower <= 2e-6)) return std::string("bracket too wide");
        if (!(r.lambda_at_lower > 0.0 && r.lambda_at_upper < 0.0))
            return std::string("bracket does not straddle the sign change");
        if (std::abs(0.5 * (r.lower + r.upper) - 1.307273502946672) > 1e-5)
            return "sigma* = " + fmt(0.5 * (r.lower + r.upper));
        return std::string();
    });
    h.run("quadrature.numerator_decreasing", [] {
        // the monotone quantity is the unscaled numerator integral; the
        // e^{1/(2 sigma^2)} factor has to be restored before comparing
        auto numerator = [](double s) {
            return std::exp(1.0 / (2.0 * s * s)) * scaled_numerator(1, s, 1e-12);
        };
        double prev = numerator(0.3);
        for (int i = 1; i <= 20; ++i) {
            double s = 0.3 + (3.0 - 0.3) * i / 20.0;
            double cur = numerator(s);
            if (!(cur < prev)) return "not decreasing at sigma " + fmt(s);
            prev = cur;
        }
        return std::string();
    });
}

void noise_checks(Harness& h) {
    h.run("noise.deterministic_and_shifted", [] {
        IncrementSource a(kSeed, 2, 1e-3, 7);
        IncrementSource b(kSeed, 2, 1e-3, 7);
        for (int64_t k : {-5L, 0L, 123456L}) {
            if (a.increment(k) != b.increment(k)) return std::string("same key differs");
        }
        auto sh = a.shift(10);
        if (sh.increment(-3) != a.increment(7)) return std::string("shift(10) broken");
        if (sh.shift(5).increment(0) != a.increment(15)) return std::string("shift composition");
        if (IncrementSource(kSeed, 2, 2e-3, 7).increment(3) == a.increment(3))
            return std::string("dt not keyed");
        return std::string();
    });
    h.run("noise.moments", [] {
        const double dt = 1e-3;
        IncrementSource src(kSeed, 1, dt, 0);
        const int64_t n = 200000;
        double sum = 0.0, sum2 = 0.0, cross = 0.0, prev = 0.0;
        for (int64_t k = 0; k < n; ++k) {
            double w = src.increment(k)[0];
            sum += w;
            sum2 += w * w;
            if (k > 0) cross += w * prev;
            prev = w;
        }
        double mean = sum / static_cast<double>(n);
        double var = sum2 / static_cast<double>(n) / dt;
        double lag = (cross / static_cast<double>(n - 1)) / dt;
        if (!(var > 0.99 && var < 1.01)) return "scaled variance " + fmt(var);
        if (std::abs(mean) > 3.0 * std::sqrt(dt / static_cast<double>(n)))
            return "mean " + fmt(mean);
        if (std::abs(lag) > 0.02) return "lag-1 correlation " + fmt(lag);
        return std::string();
    });
    h.run("noise.ks_to_normal", [] {
        const double dt = 4e-4;
        IncrementSource src(kSeed + 1, 1, dt, 3);
        const int64_t n = 100000;
        std::vector<double> z(n);
        for (int64_t k = 0; k < n; ++k) z[k] = src.increment(k)[0] / std::sqrt(dt);
        std::sort(z.begin(), z.end());
        double d_ks = 0.0;
        for (int64_t i = 0; i < n; ++i) {
            double f = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
            double nn = static_cast<double>(n);
            d_ks = std::max(d_ks, std::max(std::abs(f - i / nn), std::abs((i + 1) / nn - f)));
        }
        return expect(d_ks <= 0.01, "KS " + fmt(d_ks));
    });
}

void integrator_checks(Harness& h) {
    h.run("integrator.radial_attractor", [] {
        SystemParams p(2, 1, 0.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.record_stride = 20000;
        IncrementSource src(1, 1, cfg.dt, 0);
        auto traj = simulate({0.5, 0.0}, src, p, cfg, 0.0, 20.0);
        double r = norm(traj.states.back());
        return expect(std::abs(r - 1.0) <= 1e-3, "|x(20)| = " + fmt(r));
    });
    h.run("integrator.m_invariance_bitwise", [] {
        SystemParams p(4, 2, 1.5);
        SolverConfig cfg;
        cfg.dt = 1e-2;
        cfg.record_stride = 100;
        IncrementSource src(kSeed, 2, cfg.dt, 0);
        auto traj = simulate({0.3, -0.2, 0.0, 0.0}, src, p, cfg, 0.0, 10.0);
        for (const auto& x : traj.states)
            if (x[2] != 0.0 || x[3] != 0.0 || std::signbit(x[2]) || std::signbit(x[3]))
                return std::string("trailing components not exactly +0");
        return std::string();
    });
    h.run("integrator.sign_preservation", [] {
        for (int64_t trial = 0; trial < 100000; ++trial) {
            double dt = trial % 2 == 0 ? 1e-3 : 0.05;
            Vec x(3);
            for (int c = 0; c < 3; ++c) x[c] = -3.0 + 6.0 * hash_uniform(kSeed, 7, trial, c);
            Vec y = x;
            detail::scheme_step_inplace(y.data(), 3, 1, 0.0, dt, true, nullptr);
            for (int c = 1; c < 3; ++c)
                if (x[c] != 0.0 && std::signbit(y[c]) != std::signbit(x[c]))
                    return std::string("sign flip in noiseless component");
        }
        return std::string();
    });
    h.run("integrator.window_overlap_bitwise", [] {
        SystemParams p(2, 2, 1.3);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.record_stride = 100;
        IncrementSource src(kSeed, 2, cfg.dt, 5);
        auto a = simulate({0.4, -0.1}, src, p, cfg, -0.5, 0.0);
        auto b = simulate({0.4, -0.1}, src, p, cfg, -0.5, 0.0);
        for (size_t j = 0; j < a.states.size(); ++j)
            if (a.states[j] != b.states[j]) return std::string("replay differs");
        return std::string();
    });
    h.run("integrator.contraction_at_large_norm", [] {
        SystemParams p(2, 1, 0.0);
        SolverConfig cfg;
        cfg.dt = 0.01;
        IncrementSource src(1, 1, cfg.dt, 0);
        for (int trial = 0; trial < 1000; ++trial) {
            auto rnd = [&](int c) { return hash_uniform(kSeed, 8, trial, c); };
            double rx = 2.0 + 3.0 * rnd(0), ax = 6.28318530717958648 * rnd(1);
            double ry = 2.0 + 3.0 * rnd(2), ay = 6.28318530717958648 * rnd(3);
            Vec x{rx * std::cos(ax), rx * std::sin(ax)};
            Vec y{ry * std::cos(ay), ry * std::sin(ay)};
            double before = dist(x, y);
            if (before == 0.0) continue;
            double after = dist(step(x, 0, src, p, cfg), step(y, 0, src, p, cfg));
            if (!(after < before)) return std::string("pair failed to contract");
        }
        return std::string();
    });
    h.run("integrator.controlled_line_to", [] {
        SystemParams p(3, 2, 1.0);
        SolverConfig cfg;
        cfg.dt = 1e-4;
        cfg.record_stride = 1000;
        Vec from{-0.8, 0.3, 0.0}, to{0.9, -0.4, 0.0};
        auto traj = simulate_controlled(ControlSpec::line_to(from, to, std::log(1.5)), from, p,
                                        cfg, std::log(1.5));
        double err = dist(traj.states.back(), to);
        return expect(err <= 1e-9, "endpoint error " + fmt(err));
    });
    h.run("integrator.controlled_hold_at", [] {
        SystemParams p(2, 1, 1.0);
        SolverConfig cfg;
        cfg.dt = 1e-4;
        cfg.record_stride = 1000;
        Vec xs{2.0, 0.0};
        auto pinned = simulate_controlled(ControlSpec::hold_at(xs), xs, p, cfg, 2.0);
        for (const auto& z : pinned.states)
            if (dist(z, xs) > 1e-12) return std::string("anchor drifted");
        for (double R : {1.0, 4.0}) {
            Vec z0{xs[0] - R, xs[1]};
            auto traj = simulate_controlled(ControlSpec::hold_at(xs), z0, p, cfg, 3.0);
            for (size_t m = 0; m < traj.times.size(); ++m) {
                double bound =
                    R * std::exp(-2.0 * traj.times[m]) * (1.0 + 10.0 * cfg.dt) + 1e-12;
                if (dist(traj.states[m], xs) > bound)
                    return "contraction bound broken at t = " + fmt(traj.times[m]);
            }
        }
        return std::string();
    });
}

void lyapunov_checks(Harness& h) {
    h.run("lyapunov.ergodic_zero_noise_exact", [&] {
        SystemParams p(2, 1, 0.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        auto est = ergodic_lambda_n1(p, cfg, kSeed, 1.0, 10.0, 4, h.threads);
        return expect(est.value == 0.0 && est.std_error == 0.0, "nonzero at sigma 0");
    });
    h.run("lyapunov.benettin_equilibrium_rates", [&] {
        SystemParams p(2, 1, 0.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        auto neutral = benettin_lambda(p, {1.0, 0.0}, {0.0, 1.0}, cfg, kSeed, 1.0, 10.0, 100, 2,
                                       h.threads);
        if (std::abs(neutral.value) > 1e-9) return "neutral direction " + fmt(neutral.value);
        auto radial = benettin_lambda(p, {1.0, 0.0}, {1.0, 0.0}, cfg, kSeed, 1.0, 10.0, 100, 2,
                                      h.threads);
        if (std::abs(radial.value + 2.0) > 3e-3) return "radial rate " + fmt(radial.value);
        return std::string();
    });
    h.run("lyapunov.estimators_agree_with_quadrature", [&] {
        SystemParams p(2, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        double lam_quad = lambda_top_quad(1, 2.0, 1e-10).value;
        auto erg = ergodic_lambda_n1(p, cfg, kSeed, 30.0, 300.0, 16, h.threads);
        auto ben = benettin_lambda(p, {1.0, 0.0}, {0.6, 0.8}, cfg, kSeed, 30.0, 300.0, 100, 16,
                                   h.threads);
        if (std::abs(erg.value - lam_quad) > 3.0 * erg.std_error + 0.02)
            return "ergodic " + fmt(erg.value) + " vs quad " + fmt(lam_quad);
        if (std::abs(ben.value - lam_quad) > 3.0 * ben.std_error + 0.02)
            return "benettin " + fmt(ben.value) + " vs quad " + fmt(lam_quad);
        if (std::abs(ben.value - erg.value) > 3.0 * (ben.std_error + erg.std_error) + 0.01)
            return std::string("estimators disagree");
        return std::string();
    });
    h.run("lyapunov.gronwall_zero_violations", [&] {
        SystemParams p(2, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        GronwallStats gs;
        benettin_lambda(p, {1.0, 0.0}, {0.6, 0.8}, cfg, kSeed, 20.0, 120.0, 100, 4, h.threads,
                        &gs);
        if (gs.checks <= 0) return std::string("no intervals checked");
        if (gs.violations != 0) return std::string("growth cap violated");
        if (!(gs.max_ratio <= 1.0)) return "max ratio " + fmt(gs.max_ratio);
        return std::string();
    });
    h.run("lyapunov.component_identity", [] {
        SolverConfig cfg;
        cfg.dt = 1e-3;
        SystemParams det(2, 1, 0.0);
        IncrementSource unused(1, 1, cfg.dt, 0);
        if (component_identity_residual(det, unused, cfg, 10.0) > 1e-6)
            return std::string("deterministic residual too large");
        SystemParams p(2, 1, 0.3);
        IncrementSource src(kSeed, 1, cfg.dt, 0);
        double res = component_identity_residual(p, src, cfg, 10.0);
        if (res > 1e-2) return "residual " + fmt(res);
        return std::string();
    });
    h.run("lyapunov.stationarity_ks", [] {
        SystemParams p(1, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        double d_ks = stationarity_ks(p, cfg, kSeed, 200.0, 2000.0, 20);
        return expect(d_ks <= 0.05, "KS " + fmt(d_ks));
    });
    h.run("lyapunov.thread_count_invariance", [] {
        SystemParams p(2, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        auto a = ergodic_lambda_n1(p, cfg, kSeed, 10.0, 60.0, 8, 1);
        auto b = ergodic_lambda_n1(p, cfg, kSeed, 10.0, 60.0, 8, 8);
        if (a.value != b.value || a.std_error != b.std_error)
            return std::string("ergodic differs across thread counts");
        auto c = benettin_lambda(p, {1.0, 0.0}, {0.6, 0.8}, cfg, kSeed, 10.0, 60.0, 100, 8, 1);
        auto d = benettin_lambda(p, {1.0, 0.0}, {0.6, 0.8}, cfg, kSeed, 10.0, 60.0, 100, 8, 8);
        if (c.value != d.value || c.std_error != d.std_error)
            return std::string("benettin differs across thread counts");
        return std::string();
    });
}

void sync_checks(Harness& h) {
    h.run("sync.coincident_pair_stays_zero", [&] {
        SystemParams p(2, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.record_stride = 1000;
        auto rep = ensemble_diameter(EnsembleSpec::pair({0.3, 0.4}, {0.3, 0.4}), p, cfg, kSeed,
                                     5.0, h.threads);
        for (double diam : rep.diameters)
            if (diam != 0.0) return std::string("pair separated");
        return std::string();
    });
    h.run("sync.deterministic_pair_collapses", [&] {
        SystemParams p(2, 1, 0.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.record_stride = 10000;
        auto rep = ensemble_diameter(EnsembleSpec::pair({0.2, 0.0}, {0.7, 0.0}), p, cfg, 1, 30.0,
                                     h.threads);
        return expect(rep.diameters.back() <= 1e-6,
                      "final diameter " + fmt(rep.diameters.back()));
    });
    h.run("sync.large_noise_synchronizes", [&] {
        SystemParams p(2, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.record_stride = 10000;
        auto spec = EnsembleSpec::ball({0.0, 0.0}, 1.0, 32, false);
        auto agg = ensemble_diameter_multi(spec, p, cfg, {kSeed, kSeed + 1, kSeed + 2}, 50.0,
                                           h.threads);
        if (agg.verdict != Verdict::synchronizing)
            return "verdict " + to_string(agg.verdict) + ", final " + fmt(agg.diameters.back());
        return std::string();
    });
    h.run("sync.small_noise_witness_pair", [&] {
        SystemParams p(2, 1, 0.3);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.record_stride = 10000;
        auto spec = EnsembleSpec::pair({0.0, 1.0}, {0.0, -1.0});
        auto agg = ensemble_diameter_multi(spec, p, cfg, {kSeed, kSeed + 1, kSeed + 2}, 100.0,
                                           h.threads);
        if (agg.verdict != Verdict::non_synchronizing)
            return "verdict " + to_string(agg.verdict) + ", final " + fmt(agg.diameters.back());
        return std::string();
    });
    h.run("sync.pullback_coupling_and_arc", [&] {
        SystemParams p(2, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        auto spec = EnsembleSpec::ball({0.0, 0.0}, 1.0, 16, true);
        auto one = pullback_diameter(spec, p, cfg, 3, {10.0}, h.threads);
        auto two = pullback_diameter(spec, p, cfg, 3, {5.0, 10.0}, h.threads);
        if (one.diameters[0] != two.diameters[1]) return std::string("coupling broken");

        SystemParams det(2, 2, 0.0);
        auto dspec = EnsembleSpec::ball({0.0, 0.0}, 0.5, 16, false);
        auto members = sample_ensemble(dspec, det, 9);
        double arc = 0.0;
        for (size_t a = 0; a < members.size(); ++a)
            for (size_t b = a + 1; b < members.size(); ++b) {
                Vec ua = members[a], ub = members[b];
                double na = norm(ua), nb = norm(ub);
                for (auto& c : ua) c /= na;
                for (auto& c : ub) c /= nb;
                arc = std::max(arc, dist(ua, ub));
            }
        auto rep = pullback_diameter(dspec, det, cfg, 9, {40.0}, h.threads);
        if (std::abs(rep.diameters.back() - arc) > 1e-4)
            return "arc " + fmt(arc) + " vs pullback " + fmt(rep.diameters.back());
        return std::string();
    });
    h.run("sync.pairwise_bound", [&] {
        SolverConfig cfg;
        cfg.dt = 1e-3;
        for (double sigma : {0.5, 2.0}) {
            SystemParams p(2, 1, sigma);
            auto rep = pairwise_bound_check(p, cfg, kSeed, 200, 2.0, h.threads);
            if (rep.max_at_half > 4.1)
                return "max at 0.5 = " + fmt(rep.max_at_half) + " at sigma " + fmt(sigma);
            if (rep.persistence_max > 4.0 * (1.0 + 50.0 * cfg.dt))
                return "persistence " + fmt(rep.persistence_max) + " at sigma " + fmt(sigma);
        }
        return std::string();
    });
    h.run("sync.thread_count_invariance", [] {
        SystemParams p(2, 1, 2.0);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.record_stride = 1000;
        auto spec = EnsembleSpec::ball({0.0, 0.0}, 1.0, 16, true);
        auto r1 = ensemble_diameter(spec, p, cfg, kSeed, 10.0, 1);
        auto r8 = ensemble_diameter(spec, p, cfg, kSeed, 10.0, 8);
        if (r1.diameters != r8.diameters) return std::string("diameters differ across threads");
        return std::string();
    });
    h.run("sync.verdict_rule_pure", [] {
        if (classify(1e-4, 1.0) != Verdict::synchronizing) return std::string("sync rule");
        if (classify(0.06, 1.0) != Verdict::non_synchronizing) return std::string("nosync rule");
        if (classify(0.01, 1.0) != Verdict::inconclusive) return std::string("middle rule");
        return std::string();
    });
}

}  // namespace

std::vector<CheckResult> run_selfchecks(int threads) {
    Harness h;
    h.threads = threads;
    model_checks(h);
    quadrature_checks(h);
    noise_checks(h);
    integrator_checks(h);
    lyapunov_checks(h);
    sync_checks(h);
    return h.results;
}

}  // namespace dwsync
