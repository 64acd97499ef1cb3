#pragma once

#include <cstdint>
#include <string>

#include "dwsync/integrator.hpp"
#include "dwsync/model.hpp"
#include "dwsync/noise.hpp"

namespace dwsync {

enum class LyapMethod { ergodic_n1, benettin };
std::string to_string(LyapMethod m);

struct LyapunovEstimate {
    double value = 0.0;
    // sample stderr across independent trajectories; within-trajectory
    // variance is autocorrelated and never used
    double std_error = 0.0;
    LyapMethod method = LyapMethod::benettin;
    double burn_in = 0.0;
    double horizon = 0.0;
    int n_trajectories = 0;
};

struct GronwallStats {
    int64_t checks = 0;
    int64_t violations = 0;
    double max_ratio = 0.0;  // worst |v| relative to the per-interval bound
};

// Time-average of (1 - |x|^2) over [burn_in, horizon] (trapezoidal), averaged
// across trajectories started at e1; trajectory j reads noise stream j.
LyapunovEstimate ergodic_lambda_n1(const SystemParams& p, const SolverConfig& cfg,
                                   uint64_t master_seed, double burn_in, double horizon,
                                   int n_trajectories, int threads = 1);

// Tangent renormalization: co-integrates state and tangent, renormalizes every
// renorm_every steps, accumulates log growth after burn_in. Each interval is
// checked against the growth cap e^{dt_interval (1 + 5 dt)}; totals land in
// *gronwall when given.
LyapunovEstimate benettin_lambda(const SystemParams& p, const Vec& x0, const Vec& v0,
                                 const SolverConfig& cfg, uint64_t master_seed, double burn_in,
                                 double horizon, int64_t renorm_every, int n_trajectories,
                                 int threads = 1, GronwallStats* gronwall = nullptr);

// Max over recorded times in (0, t_end] of the relative gap between the d-th
// state component and exp of the trapezoidal integral of (1 - |x|^2), started
// at e_d. Requires n < d; throws if the component ever loses positivity.
double component_identity_residual(const SystemParams& p, const IncrementSource& src,
                                   const SolverConfig& cfg, double t_end);

// Kolmogorov-Smirnov distance between the empirical distribution of the first
// coordinate over [burn_in, horizon] (one trajectory from e1, sampled every
// sample_stride steps) and the invariant CDF. Requires n = 1.
double stationarity_ks(const SystemParams& p, const SolverConfig& cfg, uint64_t master_seed,
                       double burn_in, double horizon, int64_t sample_stride);

}  // namespace dwsync
