#include "dwsync/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dwsync/parallel.hpp"
#include "dwsync/quadrature.hpp"

namespace dwsync {

std::string to_string(LyapMethod m) {
    return m == LyapMethod::ergodic_n1 ? "ergodic_n1" : "benettin";
}

namespace {

struct Window {
    int64_t k_burn;
    int64_t k_end;
};

Window window_of(const SolverConfig& cfg, double burn_in, double horizon) {
    cfg.validate();
    if (burn_in < 0.0) throw std::invalid_argument("lyapunov: burn_in must be >= 0");
    if (!(horizon > burn_in)) throw std::invalid_argument("lyapunov: horizon must exceed burn_in");
    return {cells_of(burn_in, cfg.dt), cells_of(horizon, cfg.dt)};
}

void mean_and_stderr(const std::vector<double>& vals, double& mean, double& se) {
    auto n = static_cast<double>(vals.size());
    double sum = 0.0;
    for (double v : vals) sum += v;
    mean = sum / n;
    if (vals.size() < 2) {
        se = 0.0;
        return;
    }
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    se = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

LyapunovEstimate ergodic_lambda_n1(const SystemParams& p, const SolverConfig& cfg,
                                   uint64_t master_seed, double burn_in, double horizon,
                                   int n_trajectories, int threads) {
    if (p.n != 1) throw std::invalid_argument("lyapunov: ergodic estimator requires n = 1");
    if (n_trajectories < 1) throw std::invalid_argument("lyapunov: need n_trajectories >= 1");
    const auto [k_burn, k_end] = window_of(cfg, burn_in, horizon);
    const bool tamed = cfg.scheme == Scheme::tamed_em;
    const bool noisy = p.sigma > 0.0;

    std::vector<double> lam(static_cast<size_t>(n_trajectories));
    parallel_for(n_trajectories, threads, [&](int64_t j) {
        IncrementSource src(master_seed, p.n, cfg.dt, j);
        Vec x(p.d, 0.0);
        x[0] = 1.0;
        double w = 0.0;
        double psi_prev = 1.0 - norm2(x);
        double acc = 0.0;
        for (int64_t k = 0; k < k_end; ++k) {
            if (noisy) src.increment(k, &w);
            double r2_in = detail::scheme_step_inplace(x.data(), p.d, p.n, p.sigma, cfg.dt, tamed,
                                                       noisy ? &w : nullptr);
            if (r2_in > detail::kDivergenceGuard2)
                throw DivergenceError(static_cast<double>(k) * cfg.dt, std::sqrt(r2_in));
            double psi = 1.0 - norm2(x);
            if (k >= k_burn) acc += 0.5 * (psi_prev + psi) * cfg.dt;
            psi_prev = psi;
        }
        lam[static_cast<size_t>(j)] = acc / (horizon - burn_in);
    });

    LyapunovEstimate est;
    est.method = LyapMethod::ergodic_n1;
    est.burn_in = burn_in;
    est.horizon = horizon;
    est.n_trajectories = n_trajectories;
    mean_and_stderr(lam, est.value, est.std_error);
    return est;
}

LyapunovEstimate benettin_lambda(const SystemParams& p, const Vec& x0, const Vec& v0,
                                 const SolverConfig& cfg, uint64_t master_seed, double burn_in,
                                 double horizon, int64_t renorm_every, int n_trajectories,
                                 int threads, GronwallStats* gronwall) {
    if (static_cast<int>(x0.size()) != p.d || static_cast<int>(v0.size()) != p.d)
        throw std::invalid_argument("lyapunov: x0/v0 dimension does not match params");
    if (!(norm(v0) > 0.0)) throw std::invalid_argument("lyapunov: v0 must be nonzero");
    if (renorm_every < 1) throw std::invalid_argument("lyapunov: renorm_every must be >= 1");
    if (n_trajectories < 1) throw std::invalid_argument("lyapunov: need n_trajectories >= 1");
    const auto [k_burn, k_end] = window_of(cfg, burn_in, horizon);
    const bool tamed = cfg.scheme == Scheme::tamed_em;
    const bool noisy = p.sigma > 0.0;

    std::vector<double> lam(static_cast<size_t>(n_trajectories));
    std::vector<GronwallStats> stats(static_cast<size_t>(n_trajectories));
    parallel_for(n_trajectories, threads, [&](int64_t j) {
        IncrementSource src(master_seed, p.n, cfg.dt, j);
        Vec x = x0;
        Vec v = v0;
        Vec w(p.n, 0.0);
        double nv0 = norm(v);
        for (auto& c : v) c /= nv0;

        GronwallStats st;
        double accum = 0.0;
        int64_t last_renorm = 0;
        auto renorm = [&](int64_t k_now) {
            double nv = norm(v);
            if (!(nv >= 1e-280 && nv <= 1e280))
                throw std::runtime_error(
                    "lyapunov: tangent norm left [1e-280, 1e280] between renormalizations; "
                    "reduce renorm_every");
            double interval = static_cast<double>(k_now - last_renorm) * cfg.dt;
            if (interval > 0.0) {
                double cap = std::exp(interval * (1.0 + 5.0 * cfg.dt));
                st.checks += 1;
                double ratio = nv / cap;
                if (ratio > st.max_ratio) st.max_ratio = ratio;
                if (ratio > 1.0) st.violations += 1;
                if (k_now > k_burn) accum += std::log(nv);
            }
            for (auto& c : v) c /= nv;
            last_renorm = k_now;
        };

        for (int64_t k = 0; k < k_end; ++k) {
            double r2 = norm2(x);
            detail::variational_step_inplace(x.data(), v.data(), p.d, cfg.dt, r2);
            if (noisy) src.increment(k, w.data());
            detail::scheme_step_inplace(x.data(), p.d, p.n, p.sigma, cfg.dt, tamed,
                                        noisy ? w.data() : nullptr);
            if (r2 > detail::kDivergenceGuard2)
                throw DivergenceError(static_cast<double>(k) * cfg.dt, std::sqrt(r2));
            int64_t k1 = k + 1;
            if (k1 == k_burn) {
                renorm(k1);
                accum = 0.0;
            } else if (k1 % renorm_every == 0 || k1 == k_end) {
                renorm(k1);
            }
        }
        lam[static_cast<size_t>(j)] = accum / (horizon - burn_in);
        stats[static_cast<size_t>(j)] = st;
    });

    if (gronwall != nullptr) {
        GronwallStats total;
        for (const auto& st : stats) {
            total.checks += st.checks;
            total.violations += st.violations;
            if (st.max_ratio > total.max_ratio) total.max_ratio = st.max_ratio;
        }
        *gronwall = total;
    }

    LyapunovEstimate est;
    est.method = LyapMethod::benettin;
    est.burn_in = burn_in;
    est.horizon = horizon;
    est.n_trajectories = n_trajectories;
    mean_and_stderr(lam, est.value, est.std_error);
    return est;
}

double component_identity_residual(const SystemParams& p, const IncrementSource& src,
                                   const SolverConfig& cfg, double t_end) {
    cfg.validate();
    if (p.n >= p.d) throw std::invalid_argument("lyapunov: component identity requires n < d");
    if (!(t_end > 0.0)) throw std::invalid_argument("lyapunov: t_end must be > 0");
    int64_t k_end = cells_of(t_end, cfg.dt);
    const bool noisy = p.sigma > 0.0;
    if (noisy) {
        if (src.n() != p.n)
            throw std::invalid_argument("lyapunov: increment source dimension does not match params");
        if (src.dt() != cfg.dt)
            throw std::invalid_argument("lyapunov: increment source dt does not match solver dt");
    }

    Vec x(p.d, 0.0);
    x[p.d - 1] = 1.0;
    Vec w(p.n, 0.0);
    double integ = 0.0;
    double psi_prev = 0.0;
    double worst = 0.0;
    for (int64_t k = 0; k < k_end; ++k) {
        if (noisy) src.increment(k, w.data());
        double r2_in = detail::scheme_step_inplace(x.data(), p.d, p.n, p.sigma, cfg.dt,
                                                   cfg.scheme == Scheme::tamed_em,
                                                   noisy ? w.data() : nullptr);
        if (r2_in > detail::kDivergenceGuard2)
            throw DivergenceError(static_cast<double>(k) * cfg.dt, std::sqrt(r2_in));
        double psi = 1.0 - norm2(x);
        integ += 0.5 * (psi_prev + psi) * cfg.dt;
        psi_prev = psi;
        int64_t k1 = k + 1;
        if (k1 % cfg.record_stride == 0 || k1 == k_end) {
            double comp = x[p.d - 1];
            if (!(comp > 0.0))
                throw std::runtime_error(
                    "lyapunov: trailing component lost positivity (integrator bug)");
            double rel = std::abs(comp - std::exp(integ)) / comp;
            if (rel > worst) worst = rel;
        }
    }
    return worst;
}

double stationarity_ks(const SystemParams& p, const SolverConfig& cfg, uint64_t master_seed,
                       double burn_in, double horizon, int64_t sample_stride) {
    if (p.n != 1) throw std::invalid_argument("lyapunov: stationarity check requires n = 1");
    if (!(p.sigma > 0.0)) throw std::invalid_argument("lyapunov: stationarity check requires sigma > 0");
    if (sample_stride < 1) throw std::invalid_argument("lyapunov: sample_stride must be >= 1");
    const auto [k_burn, k_end] = window_of(cfg, burn_in, horizon);
    const bool tamed = cfg.scheme == Scheme::tamed_em;

    IncrementSource src(master_seed, 1, cfg.dt, 0);
    Vec x(p.d, 0.0);
    x[0] = 1.0;
    double w = 0.0;
    std::vector<double> samples;
    samples.reserve(static_cast<size_t>((k_end - k_burn) / sample_stride + 1));
    for (int64_t k = 0; k < k_end; ++k) {
        src.increment(k, &w);
        double r2_in = detail::scheme_step_inplace(x.data(), p.d, p.n, p.sigma, cfg.dt, tamed, &w);
        if (r2_in > detail::kDivergenceGuard2)
            throw DivergenceError(static_cast<double>(k) * cfg.dt, std::sqrt(r2_in));
        int64_t k1 = k + 1;
        if (k1 >= k_burn && (k1 - k_burn) % sample_stride == 0) samples.push_back(x[0]);
    }
    std::sort(samples.begin(), samples.end());

    InvariantCdf cdf(p.sigma);
    auto n = static_cast<double>(samples.size());
    double d_ks = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        double lo = std::abs(f - static_cast<double>(i) / n);
        double hi = std::abs(static_cast<double>(i + 1) / n - f);
        d_ks = std::max(d_ks, std::max(lo, hi));
    }
    return d_ks;
}

}  // namespace dwsync
