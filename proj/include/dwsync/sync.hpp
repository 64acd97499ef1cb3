#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwsync/integrator.hpp"
#include "dwsync/model.hpp"

namespace dwsync {

enum class Sampling { sphere_surface, ball_uniform, pair };
enum class Verdict { synchronizing, non_synchronizing, inconclusive };
std::string to_string(Sampling s);
std::string to_string(Verdict v);

// Initial conditions for a common-noise ensemble. Diameters are exact maximum
// pairwise distances, so count is capped at 256.
struct EnsembleSpec {
    Vec center;
    double radius = 1.0;
    int count = 2;
    Sampling sampling = Sampling::ball_uniform;
    bool restrict_to_M = false;
    Vec pair_x, pair_y;

    static EnsembleSpec sphere(Vec center, double radius, int count, bool restrict_to_M);
    static EnsembleSpec ball(Vec center, double radius, int count, bool restrict_to_M);
    static EnsembleSpec pair(Vec x, Vec y);
    void validate(const SystemParams& p) const;
};

struct SyncReport {
    std::vector<double> times;
    std::vector<double> diameters;      // per time; median across seeds when aggregated
    std::vector<double> max_diameters;  // per time, max across seeds
    Verdict verdict = Verdict::inconclusive;
    double threshold = 1e-3;
    int seeds_used = 0;
};

struct PairBoundReport {
    double max_at_half = 0.0;     // max common-noise distance observed at t = 0.5
    double persistence_max = 0.0; // max distance after first dropping below 4, up to t_end
    int trials = 0;
};

struct SyncScanRow {
    double sigma = 0.0;
    int n = 0, d = 0;
    double lambda_quad = 0.0;
    double lambda_mc = 0.0;
    double lambda_mc_stderr = 0.0;
    double median_final_diameter = 0.0;
    Verdict verdict = Verdict::inconclusive;
    bool ok = false;
    std::string error;
};

struct ScanOptions {
    int ensemble_count = 32;
    double ensemble_radius = 1.0;
    double mc_burn_in = 100.0;
    double mc_horizon = 1000.0;
    int mc_trajectories = 8;
    int threads = 1;
};

// Final-diameter classification: synchronizing when the (median) final
// diameter fell below sync_frac of the initial diameter, non-synchronizing
// when it stayed above nosync_frac of it, inconclusive in between.
Verdict classify(double median_final, double initial, double sync_frac = 1e-3,
                 double nosync_frac = 0.05);

// Deterministic ensemble draw: member j is built from hashed normals (and a
// hashed radius for ball sampling) keyed on (seed, j), in M when restricted.
std::vector<Vec> sample_ensemble(const EnsembleSpec& spec, const SystemParams& p, uint64_t seed);

// Evolves all members under one shared increment stream and records the exact
// ensemble diameter every record_stride steps.
SyncReport ensemble_diameter(const EnsembleSpec& spec, const SystemParams& p,
                             const SolverConfig& cfg, uint64_t seed, double t_end,
                             int threads = 1);

// Multi-seed aggregate of ensemble_diameter: per-time median and max, verdict
// from the median final diameter against the median initial one.
SyncReport ensemble_diameter_multi(const EnsembleSpec& spec, const SystemParams& p,
                                   const SolverConfig& cfg, const std::vector<uint64_t>& seeds,
                                   double t_end, int threads = 1);

// For each horizon T (one fixed omega): evolve the same initial set from -T to
// 0 on absolute cells and report the diameter at time 0. times holds T_list.
SyncReport pullback_diameter(const EnsembleSpec& spec, const SystemParams& p,
                             const SolverConfig& cfg, uint64_t seed,
                             const std::vector<double>& T_list, int threads = 1);

// Random pairs with |x - y| <= 8, |x|,|y| <= 8 evolved under common noise to
// t_end (>= 0.5): records the distance at t = 0.5 and tracks the bound's
// persistence once a pair first dips below 4.
PairBoundReport pairwise_bound_check(const SystemParams& p, const SolverConfig& cfg,
                                     uint64_t seed, int trials, double t_end = 2.0,
                                     int threads = 1);

// One row per sigma: quadrature exponent, MC exponent (ergodic for n = 1,
// tangent renormalization otherwise), multi-seed ensemble verdict. Per-sigma
// failures are captured in the row instead of aborting the scan.
std::vector<SyncScanRow> sync_scan(const std::vector<double>& sigma_grid,
                                   const SystemParams& p_template, const SolverConfig& cfg,
                                   const std::vector<uint64_t>& seeds, double t_end,
                                   const ScanOptions& opt = {});

}  // namespace dwsync
