#include "dwsync/sync.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwsync/lyapunov.hpp"
#include "dwsync/noise.hpp"
#include "dwsync/parallel.hpp"
#include "dwsync/quadrature.hpp"

namespace dwsync {

std::string to_string(Sampling s) {
    switch (s) {
        case Sampling::sphere_surface: return "sphere_surface";
        case Sampling::ball_uniform: return "ball_uniform";
        default: return "pair";
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::synchronizing: return "synchronizing";
        case Verdict::non_synchronizing: return "non_synchronizing";
        default: return "inconclusive";
    }
}

EnsembleSpec EnsembleSpec::sphere(Vec center, double radius, int count, bool restrict_to_M) {
    EnsembleSpec s;
    s.center = std::move(center);
    s.radius = radius;
    s.count = count;
    s.sampling = Sampling::sphere_surface;
    s.restrict_to_M = restrict_to_M;
    return s;
}

EnsembleSpec EnsembleSpec::ball(Vec center, double radius, int count, bool restrict_to_M) {
    EnsembleSpec s = sphere(std::move(center), radius, count, restrict_to_M);
    s.sampling = Sampling::ball_uniform;
    return s;
}

EnsembleSpec EnsembleSpec::pair(Vec x, Vec y) {
    EnsembleSpec s;
    s.sampling = Sampling::pair;
    s.count = 2;
    s.radius = 1.0;
    s.pair_x = std::move(x);
    s.pair_y = std::move(y);
    s.center = s.pair_x;
    return s;
}

void EnsembleSpec::validate(const SystemParams& p) const {
    if (count < 2 || count > 256)
        throw std::invalid_argument("EnsembleSpec: count must be in [2, 256]");
    if (sampling == Sampling::pair) {
        if (count != 2) throw std::invalid_argument("EnsembleSpec: pair sampling needs count = 2");
        if (static_cast<int>(pair_x.size()) != p.d || static_cast<int>(pair_y.size()) != p.d)
            throw std::invalid_argument("EnsembleSpec: pair points do not match dimension");
        return;
    }
    if (!(radius > 0.0)) throw std::invalid_argument("EnsembleSpec: radius must be > 0");
    if (static_cast<int>(center.size()) != p.d)
        throw std::invalid_argument("EnsembleSpec: center does not match dimension");
    if (restrict_to_M) {
        for (int c = p.n; c < p.d; ++c)
            if (center[c] != 0.0)
                throw std::invalid_argument("EnsembleSpec: restrict_to_M needs a center inside M");
    }
}

Verdict classify(double median_final, double initial, double sync_frac, double nosync_frac) {
    if (!(initial > 0.0)) return median_final == 0.0 ? Verdict::synchronizing : Verdict::inconclusive;
    if (median_final <= sync_frac * initial) return Verdict::synchronizing;
    if (median_final >= nosync_frac * initial) return Verdict::non_synchronizing;
    return Verdict::inconclusive;
}

namespace {

constexpr uint64_t kTagDir = 101, kTagRad = 102;
constexpr uint64_t kTagPairA = 103, kTagPairAR = 104, kTagPairB = 105, kTagPairBR = 106;
constexpr int64_t kWindow = 4096;

double flat_diameter(const std::vector<double>& xs, int count, int d) {
    double best = 0.0;
    for (int a = 0; a < count; ++a)
        for (int b = a + 1; b < count; ++b) {
            double s = 0.0;
            const double* xa = xs.data() + static_cast<size_t>(a) * d;
            const double* xb = xs.data() + static_cast<size_t>(b) * d;
            for (int i = 0; i < d; ++i) {
                double diff = xa[i] - xb[i];
                s += diff * diff;
            }
            if (s > best) best = s;
        }
    return std::sqrt(best);
}

// advances every member from cell k_from to k_to under one shared increment
// stream; increments are hashed once per window and read by all members
void advance_members(std::vector<double>& xs, int count, const SystemParams& p,
                     const SolverConfig& cfg, const IncrementSource& src, int64_t k_from,
                     int64_t k_to, int threads) {
    const bool tamed = cfg.scheme == Scheme::tamed_em;
    const bool noisy = p.sigma > 0.0;
    std::vector<double> buf;
    for (int64_t w = k_from; w < k_to; w += kWindow) {
        int64_t we = std::min(k_to, w + kWindow);
        auto len = static_cast<size_t>(we - w);
        if (noisy) {
            buf.resize(len * static_cast<size_t>(p.n));
            for (size_t j = 0; j < len; ++j)
                src.increment(w + static_cast<int64_t>(j), buf.data() + j * p.n);
        }
        parallel_for(count, threads, [&](int64_t m) {
            double* x = xs.data() + static_cast<size_t>(m) * p.d;
            for (size_t j = 0; j < len; ++j) {
                double r2_in = detail::scheme_step_inplace(
                    x, p.d, p.n, p.sigma, cfg.dt, tamed, noisy ? buf.data() + j * p.n : nullptr);
                if (r2_in > detail::kDivergenceGuard2)
                    throw DivergenceError(static_cast<double>(w + static_cast<int64_t>(j)) * cfg.dt,
                                          std::sqrt(r2_in));
            }
        });
    }
}

std::vector<double> flatten(const std::vector<Vec>& members, int d) {
    std::vector<double> xs(members.size() * static_cast<size_t>(d));
    for (size_t m = 0; m < members.size(); ++m)
        for (int i = 0; i < d; ++i) xs[m * d + i] = members[m][i];
    return xs;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<Vec> sample_ensemble(const EnsembleSpec& spec, const SystemParams& p, uint64_t seed) {
    spec.validate(p);
    if (spec.sampling == Sampling::pair) return {spec.pair_x, spec.pair_y};

    int m = spec.restrict_to_M ? p.n : p.d;
    std::vector<Vec> members(static_cast<size_t>(spec.count), spec.center);
    for (int j = 0; j < spec.count; ++j) {
        Vec g(m);
        double gn2 = 0.0;
        for (int c = 0; c < m; ++c) {
            g[c] = hash_normal(seed, kTagDir, static_cast<uint64_t>(j), static_cast<uint64_t>(c));
            gn2 += g[c] * g[c];
        }
        double gn = std::sqrt(gn2);
        if (gn == 0.0) {
            g.assign(static_cast<size_t>(m), 0.0);
            g[0] = 1.0;
            gn = 1.0;
        }
        double fac = spec.radius;
        if (spec.sampling == Sampling::ball_uniform) {
            double u = hash_uniform(seed, kTagRad, static_cast<uint64_t>(j), 0);
            fac *= std::pow(u, 1.0 / static_cast<double>(m));
        }
        for (int c = 0; c < m; ++c) members[static_cast<size_t>(j)][c] += fac * g[c] / gn;
    }
    return members;
}

SyncReport ensemble_diameter(const EnsembleSpec& spec, const SystemParams& p,
                             const SolverConfig& cfg, uint64_t seed, double t_end, int threads) {
    spec.validate(p);
    cfg.validate();
    int64_t k_end = cells_of(t_end, cfg.dt);
    if (k_end < 0) throw std::invalid_argument("sync: t_end must be >= 0");

    auto xs = flatten(sample_ensemble(spec, p, seed), p.d);
    IncrementSource src(seed, p.n, cfg.dt, 0);

    SyncReport rep;
    rep.seeds_used = 1;
    rep.times.push_back(0.0);
    rep.diameters.push_back(flat_diameter(xs, spec.count, p.d));
    int64_t k = 0;
    while (k < k_end) {
        int64_t k_next = std::min(k_end, k + cfg.record_stride);
        advance_members(xs, spec.count, p, cfg, src, k, k_next, threads);
        k = k_next;
        rep.times.push_back(static_cast<double>(k) * cfg.dt);
        rep.diameters.push_back(flat_diameter(xs, spec.count, p.d));
    }
    rep.max_diameters = rep.diameters;
    rep.verdict = classify(rep.diameters.back(), rep.diameters.front());
    return rep;
}

SyncReport ensemble_diameter_multi(const EnsembleSpec& spec, const SystemParams& p,
                                   const SolverConfig& cfg, const std::vector<uint64_t>& seeds,
                                   double t_end, int threads) {
    if (seeds.empty()) throw std::invalid_argument("sync: need at least one seed");
    std::vector<SyncReport> reps;
    reps.reserve(seeds.size());
    for (uint64_t s : seeds) reps.push_back(ensemble_diameter(spec, p, cfg, s, t_end, threads));

    SyncReport agg;
    agg.seeds_used = static_cast<int>(seeds.size());
    agg.times = reps.front().times;
    size_t n_times = agg.times.size();
    agg.diameters.resize(n_times);
    agg.max_diameters.resize(n_times);
    std::vector<double> col(seeds.size());
    for (size_t t = 0; t < n_times; ++t) {
        for (size_t s = 0; s < seeds.size(); ++s) col[s] = reps[s].diameters[t];
        agg.diameters[t] = median_of(col);
        agg.max_diameters[t] = *std::max_element(col.begin(), col.end());
    }
    agg.verdict = classify(agg.diameters.back(), agg.diameters.front());
    return agg;
}

SyncReport pullback_diameter(const EnsembleSpec& spec, const SystemParams& p,
                             const SolverConfig& cfg, uint64_t seed,
                             const std::vector<double>& T_list, int threads) {
    spec.validate(p);
    cfg.validate();
    if (T_list.empty()) throw std::invalid_argument("sync: T_list must be non-empty");
    for (size_t i = 0; i < T_list.size(); ++i) {
        if (T_list[i] < 0.0) throw std::invalid_argument("sync: pullback horizons must be >= 0");
        if (i > 0 && T_list[i] <= T_list[i - 1])
            throw std::invalid_argument("sync: T_list must be increasing");
    }

    auto members = sample_ensemble(spec, p, seed);
    auto xs0 = flatten(members, p.d);
    double initial = flat_diameter(xs0, spec.count, p.d);
    IncrementSource src(seed, p.n, cfg.dt, 0);

    SyncReport rep;
    rep.seeds_used = 1;
    rep.times = T_list;
    for (double T : T_list) {
        int64_t k0 = cells_of(-T, cfg.dt);
        auto xs = xs0;
        advance_members(xs, spec.count, p, cfg, src, k0, 0, threads);
        rep.diameters.push_back(flat_diameter(xs, spec.count, p.d));
    }
    rep.max_diameters = rep.diameters;
    rep.verdict = classify(rep.diameters.back(), initial);
    return rep;
}

PairBoundReport pairwise_bound_check(const SystemParams& p, const SolverConfig& cfg, uint64_t seed,
                                     int trials, double t_end, int threads) {
    cfg.validate();
    if (trials < 1) throw std::invalid_argument("sync: trials must be >= 1");
    if (t_end < 0.5) throw std::invalid_argument("sync: pair bound needs t_end >= 0.5");
    int64_t k_half = cells_of(0.5, cfg.dt);
    int64_t k_end = cells_of(t_end, cfg.dt);
    const bool tamed = cfg.scheme == Scheme::tamed_em;
    const bool noisy = p.sigma > 0.0;
    const int d = p.d;

    auto ball8 = [&](uint64_t tag, uint64_t tag_r, uint64_t key) {
        Vec x(d);
        double gn2 = 0.0;
        for (int c = 0; c < d; ++c) {
            x[c] = hash_normal(seed, tag, key, static_cast<uint64_t>(c));
            gn2 += x[c] * x[c];
        }
        double gn = std::sqrt(gn2);
        if (gn == 0.0) {
            x.assign(static_cast<size_t>(d), 0.0);
            x[0] = 1.0;
            gn = 1.0;
        }
        double fac = 8.0 * std::pow(hash_uniform(seed, tag_r, key, 0), 1.0 / d) / gn;
        for (int c = 0; c < d; ++c) x[c] *= fac;
        return x;
    };

    std::vector<double> at_half(static_cast<size_t>(trials));
    std::vector<double> persist(static_cast<size_t>(trials), 0.0);
    parallel_for(trials, threads, [&](int64_t i) {
        Vec x, y;
        for (uint64_t attempt = 0;; ++attempt) {
            uint64_t key = (static_cast<uint64_t>(i) << 16) | attempt;
            x = ball8(kTagPairA, kTagPairAR, key);
            y = ball8(kTagPairB, kTagPairBR, key);
            if (dist(x, y) <= 8.0) break;
        }
        IncrementSource src(seed, p.n, cfg.dt, i);
        Vec w(p.n, 0.0);
        bool below = false;
        double pmax = 0.0, half = 0.0;
        for (int64_t k = 0; k < k_end; ++k) {
            if (noisy) src.increment(k, w.data());
            const double* dW = noisy ? w.data() : nullptr;
            detail::scheme_step_inplace(x.data(), d, p.n, p.sigma, cfg.dt, tamed, dW);
            detail::scheme_step_inplace(y.data(), d, p.n, p.sigma, cfg.dt, tamed, dW);
            double dxy = dist(x, y);
            if (k + 1 == k_half) half = dxy;
            if (below && dxy > pmax) pmax = dxy;
            if (!below && dxy <= 4.0) below = true;
        }
        at_half[static_cast<size_t>(i)] = half;
        persist[static_cast<size_t>(i)] = pmax;
    });

    PairBoundReport rep;
    rep.trials = trials;
    for (int i = 0; i < trials; ++i) {
        rep.max_at_half = std::max(rep.max_at_half, at_half[static_cast<size_t>(i)]);
        rep.persistence_max = std::max(rep.persistence_max, persist[static_cast<size_t>(i)]);
    }
    return rep;
}

std::vector<SyncScanRow> sync_scan(const std::vector<double>& sigma_grid,
                                   const SystemParams& p_template, const SolverConfig& cfg,
                                   const std::vector<uint64_t>& seeds, double t_end,
                                   const ScanOptions& opt) {
    if (sigma_grid.empty()) throw std::invalid_argument("sync: sigma_grid must be non-empty");
    for (size_t i = 1; i < sigma_grid.size(); ++i)
        if (sigma_grid[i] < sigma_grid[i - 1])
            throw std::invalid_argument("sync: sigma_grid must be sorted");
    if (seeds.empty()) throw std::invalid_argument("sync: need at least one seed");

    std::vector<SyncScanRow> rows;
    rows.reserve(sigma_grid.size());
    for (double sigma : sigma_grid) {
        SyncScanRow row;
        row.sigma = sigma;
        row.n = p_template.n;
        row.d = p_template.d;
        try {
            SystemParams p(p_template.d, p_template.n, sigma);
            row.lambda_quad = lambda_top_quad(p.n, sigma, 1e-8).value;

            LyapunovEstimate mc;
            if (p.n == 1) {
                mc = ergodic_lambda_n1(p, cfg, seeds[0], opt.mc_burn_in, opt.mc_horizon,
                                       opt.mc_trajectories, opt.threads);
            } else {
                Vec x0(p.d, 0.0);
                x0[0] = 1.0;
                Vec v0(p.d, 1.0 / std::sqrt(static_cast<double>(p.d)));
                mc = benettin_lambda(p, x0, v0, cfg, seeds[0], opt.mc_burn_in, opt.mc_horizon, 100,
                                     opt.mc_trajectories, opt.threads);
            }
            row.lambda_mc = mc.value;
            row.lambda_mc_stderr = mc.std_error;

            // full-space ball: the no-sync mechanism is transverse to M, so a
            // scan ensemble restricted to M would synchronize for every sigma
            auto spec = EnsembleSpec::ball(Vec(static_cast<size_t>(p.d), 0.0), opt.ensemble_radius,
                                           opt.ensemble_count, false);
            auto rep = ensemble_diameter_multi(spec, p, cfg, seeds, t_end, opt.threads);
            row.median_final_diameter = rep.diameters.back();
            row.verdict = rep.verdict;
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace dwsync
