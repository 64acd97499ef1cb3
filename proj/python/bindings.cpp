#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>

#include "dwsync/integrator.hpp"
#include "dwsync/lyapunov.hpp"
#include "dwsync/model.hpp"
#include "dwsync/noise.hpp"
#include "dwsync/quadrature.hpp"
#include "dwsync/selfcheck.hpp"
#include "dwsync/sync.hpp"
#include "dwsync/version.hpp"

namespace py = pybind11;
using namespace dwsync;

PYBIND11_MODULE(_dwsync, m) {
    m.doc() = "double-well synchronization toolkit: invariant-measure quadrature, Lyapunov "
              "exponent estimators, and common-noise ensemble diagnostics";
    m.attr("__version__") = kToolVersion;

    // ----------------------------------------------------------------- model
    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<int, int, double>(), py::arg("d"), py::arg("n"), py::arg("sigma"))
        .def_readonly("d", &SystemParams::d)
        .def_readonly("n", &SystemParams::n)
        .def_readonly("sigma", &SystemParams::sigma)
        .def("degenerate", &SystemParams::degenerate)
        .def("deterministic", &SystemParams::deterministic)
        .def("__repr__", [](const SystemParams& p) {
            return "SystemParams(d=" + std::to_string(p.d) + ", n=" + std::to_string(p.n) +
                   ", sigma=" + std::to_string(p.sigma) + ")";
        });

    m.def("drift", &drift, py::arg("x"), "b(x) = (1 - |x|^2) x");
    m.def("drift_jacobian_apply", &drift_jacobian_apply, py::arg("x"), py::arg("u"),
          "Db(x) u = (1 - |x|^2) u - 2 <x,u> x");
    m.def("one_sided_gap", &one_sided_gap, py::arg("x"), py::arg("y"),
          "<x-y, b(x)-b(y)> - |x-y|^2 (1 - 3/4 |x|^2), nonpositive everywhere");
    m.def("invariant_log_density", &invariant_log_density, py::arg("r2"), py::arg("sigma"));

    // ------------------------------------------------------------ quadrature
    py::enum_<BoundKind>(m, "BoundKind")
        .value("exact", BoundKind::exact)
        .value("upper_bound", BoundKind::upper_bound);

    py::class_<QuadratureResult>(m, "QuadratureResult")
        .def_readonly("value", &QuadratureResult::value)
        .def_readonly("abs_error_estimate", &QuadratureResult::abs_error_estimate)
        .def_readonly("tail_bound", &QuadratureResult::tail_bound)
        .def_readonly("truncation_radius", &QuadratureResult::truncation_radius)
        .def_readonly("kind", &QuadratureResult::kind)
        .def("__repr__", [](const QuadratureResult& r) {
            return "QuadratureResult(value=" + std::to_string(r.value) + ", kind=" +
                   std::string(to_string(r.kind)) + ")";
        });

    py::class_<SigmaStarResult>(m, "SigmaStarResult")
        .def_readonly("lower", &SigmaStarResult::lower)
        .def_readonly("upper", &SigmaStarResult::upper)
        .def_readonly("lambda_at_lower", &SigmaStarResult::lambda_at_lower)
        .def_readonly("lambda_at_upper", &SigmaStarResult::lambda_at_upper)
        .def_readonly("iterations", &SigmaStarResult::iterations)
        .def("__repr__", [](const SigmaStarResult& r) {
            return "SigmaStarResult(lower=" + std::to_string(r.lower) +
                   ", upper=" + std::to_string(r.upper) + ")";
        });

    m.def("sphere_area", &sphere_area, py::arg("n"));
    m.def("scaled_weight", &scaled_weight, py::arg("r"), py::arg("sigma"));
    m.def("truncation_radius", &truncation_radius, py::arg("n"), py::arg("sigma"), py::arg("tol"));
    m.def("normalization_Z", &normalization_Z, py::arg("n"), py::arg("sigma"),
          py::arg("tol") = 1e-8, py::call_guard<py::gil_scoped_release>(),
          "Z_sigma with the exp(1/(2 sigma^2)) factor included; tol is relative");
    m.def("lambda_top_quad", &lambda_top_quad, py::arg("n"), py::arg("sigma"),
          py::arg("tol") = 1e-10, py::call_guard<py::gil_scoped_release>(),
          "top Lyapunov exponent via invariant-measure quadrature (exact for n = 1, an upper "
          "bound for n >= 2); tol is absolute");
    m.def("closed_form_bound_n2", &closed_form_bound_n2, py::arg("sigma"),
          "-pi sigma^2 / Z_sigma, the n = 2 integral in closed form");
    m.def("sigma_star", &sigma_star, py::arg("tol") = 1e-6,
          py::call_guard<py::gil_scoped_release>(),
          "bisection bracket for the sign change of lambda(1, .) on [0.5, 2]");
    m.def("scaled_numerator", &scaled_numerator, py::arg("n"), py::arg("sigma"), py::arg("tol"),
          "numerator integral times exp(-1/(2 sigma^2))");

    py::class_<InvariantCdf>(m, "InvariantCdf")
        .def(py::init<double>(), py::arg("sigma"))
        .def("__call__", &InvariantCdf::operator(), py::arg("x"));

    // ----------------------------------------------------------------- noise
    m.def("inverse_normal_cdf", &inverse_normal_cdf, py::arg("p"));
    m.def("hash_uniform", &hash_uniform, py::arg("seed"), py::arg("tag"), py::arg("item"),
          py::arg("component"));
    m.def("hash_normal", &hash_normal, py::arg("seed"), py::arg("tag"), py::arg("item"),
          py::arg("component"));

    py::class_<IncrementSource>(m, "IncrementSource")
        .def(py::init<uint64_t, int, double, uint64_t>(), py::arg("master_seed"), py::arg("n"),
             py::arg("dt"), py::arg("stream_id"))
        .def("increment", py::overload_cast<int64_t>(&IncrementSource::increment, py::const_),
             py::arg("k"), "n components of N(0, dt I) on grid cell k")
        .def("shift", &IncrementSource::shift, py::arg("s_cells"))
        .def_property_readonly("master_seed", &IncrementSource::master_seed)
        .def_property_readonly("stream_id", &IncrementSource::stream_id)
        .def_property_readonly("n", &IncrementSource::n)
        .def_property_readonly("dt", &IncrementSource::dt)
        .def_property_readonly("offset", &IncrementSource::offset);

    // ------------------------------------------------------------ integrator
    py::enum_<Scheme>(m, "Scheme")
        .value("tamed_em", Scheme::tamed_em)
        .value("em", Scheme::em);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](double dt, Scheme scheme, int64_t record_stride) {
                 SolverConfig c{dt, scheme, record_stride};
                 c.validate();
                 return c;
             }),
             py::arg("dt") = 1e-3, py::arg("scheme") = Scheme::tamed_em,
             py::arg("record_stride") = 1)
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("scheme", &SolverConfig::scheme)
        .def_readwrite("record_stride", &SolverConfig::record_stride);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states);

    py::class_<ControlSpec>(m, "ControlSpec")
        .def_static("line_to", &ControlSpec::line_to, py::arg("src"), py::arg("dst"),
                    py::arg("t0"))
        .def_static("hold_at", &ControlSpec::hold_at, py::arg("x_star"));

    m.def("cells_of", &cells_of, py::arg("t"), py::arg("dt"));
    m.def("simulate", &simulate, py::arg("x0"), py::arg("source"), py::arg("params"),
          py::arg("config"), py::arg("t_begin"), py::arg("t_end"),
          py::call_guard<py::gil_scoped_release>());
    m.def("simulate_controlled", &simulate_controlled, py::arg("spec"), py::arg("x0"),
          py::arg("params"), py::arg("config"), py::arg("t_end"),
          py::call_guard<py::gil_scoped_release>());

    // -------------------------------------------------------------- lyapunov
    py::enum_<LyapMethod>(m, "LyapMethod")
        .value("ergodic_n1", LyapMethod::ergodic_n1)
        .value("benettin", LyapMethod::benettin);

    py::class_<LyapunovEstimate>(m, "LyapunovEstimate")
        .def_readonly("value", &LyapunovEstimate::value)
        .def_readonly("std_error", &LyapunovEstimate::std_error)
        .def_readonly("method", &LyapunovEstimate::method)
        .def_readonly("burn_in", &LyapunovEstimate::burn_in)
        .def_readonly("horizon", &LyapunovEstimate::horizon)
        .def_readonly("n_trajectories", &LyapunovEstimate::n_trajectories)
        .def("__repr__", [](const LyapunovEstimate& e) {
            return "LyapunovEstimate(method=" + to_string(e.method) +
                   ", value=" + std::to_string(e.value) +
                   ", std_error=" + std::to_string(e.std_error) + ")";
        });

    py::class_<GronwallStats>(m, "GronwallStats")
        .def_readonly("checks", &GronwallStats::checks)
        .def_readonly("violations", &GronwallStats::violations)
        .def_readonly("max_ratio", &GronwallStats::max_ratio);

    m.def("ergodic_lambda_n1", &ergodic_lambda_n1, py::arg("params"), py::arg("config"),
          py::arg("master_seed"), py::arg("burn_in"), py::arg("horizon"),
          py::arg("n_trajectories"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "time average of 1 - |x|^2 across independent trajectories (n = 1 only)");
    m.def(
        "benettin_lambda",
        [](const SystemParams& p, const Vec& x0, const Vec& v0, const SolverConfig& cfg,
           uint64_t master_seed, double burn_in, double horizon, int64_t renorm_every,
           int n_trajectories, int threads) {
            GronwallStats g;
            LyapunovEstimate e;
            {
                py::gil_scoped_release release;
                e = benettin_lambda(p, x0, v0, cfg, master_seed, burn_in, horizon, renorm_every,
                                    n_trajectories, threads, &g);
            }
            return py::make_tuple(e, g);
        },
        py::arg("params"), py::arg("x0"), py::arg("v0"), py::arg("config"),
        py::arg("master_seed"), py::arg("burn_in"), py::arg("horizon"),
        py::arg("renorm_every") = 100, py::arg("n_trajectories") = 16, py::arg("threads") = 1,
        "tangent renormalization estimate; returns (LyapunovEstimate, GronwallStats)");
    m.def("component_identity_residual", &component_identity_residual, py::arg("params"),
          py::arg("source"), py::arg("config"), py::arg("t_end"),
          py::call_guard<py::gil_scoped_release>());
    m.def("stationarity_ks", &stationarity_ks, py::arg("params"), py::arg("config"),
          py::arg("master_seed"), py::arg("burn_in"), py::arg("horizon"),
          py::arg("sample_stride"), py::call_guard<py::gil_scoped_release>());

    // ------------------------------------------------------------------ sync
    py::enum_<Sampling>(m, "Sampling")
        .value("sphere_surface", Sampling::sphere_surface)
        .value("ball_uniform", Sampling::ball_uniform)
        .value("pair", Sampling::pair);

    py::enum_<Verdict>(m, "Verdict")
        .value("synchronizing", Verdict::synchronizing)
        .value("non_synchronizing", Verdict::non_synchronizing)
        .value("inconclusive", Verdict::inconclusive);

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def_static("sphere", &EnsembleSpec::sphere, py::arg("center"), py::arg("radius"),
                    py::arg("count"), py::arg("restrict_to_M") = false)
        .def_static("ball", &EnsembleSpec::ball, py::arg("center"), py::arg("radius"),
                    py::arg("count"), py::arg("restrict_to_M") = false)
        .def_static("pair", &EnsembleSpec::pair, py::arg("x"), py::arg("y"))
        .def_readonly("center", &EnsembleSpec::center)
        .def_readonly("radius", &EnsembleSpec::radius)
        .def_readonly("count", &EnsembleSpec::count)
        .def_readonly("sampling", &EnsembleSpec::sampling)
        .def_readonly("restrict_to_M", &EnsembleSpec::restrict_to_M);

    py::class_<SyncReport>(m, "SyncReport")
        .def_readonly("times", &SyncReport::times)
        .def_readonly("diameters", &SyncReport::diameters)
        .def_readonly("max_diameters", &SyncReport::max_diameters)
        .def_readonly("verdict", &SyncReport::verdict)
        .def_readonly("threshold", &SyncReport::threshold)
        .def_readonly("seeds_used", &SyncReport::seeds_used);

    py::class_<PairBoundReport>(m, "PairBoundReport")
        .def_readonly("max_at_half", &PairBoundReport::max_at_half)
        .def_readonly("persistence_max", &PairBoundReport::persistence_max)
        .def_readonly("trials", &PairBoundReport::trials);

    py::class_<SyncScanRow>(m, "SyncScanRow")
        .def_readonly("sigma", &SyncScanRow::sigma)
        .def_readonly("n", &SyncScanRow::n)
        .def_readonly("d", &SyncScanRow::d)
        .def_readonly("lambda_quad", &SyncScanRow::lambda_quad)
        .def_readonly("lambda_mc", &SyncScanRow::lambda_mc)
        .def_readonly("lambda_mc_stderr", &SyncScanRow::lambda_mc_stderr)
        .def_readonly("median_final_diameter", &SyncScanRow::median_final_diameter)
        .def_readonly("verdict", &SyncScanRow::verdict)
        .def_readonly("ok", &SyncScanRow::ok)
        .def_readonly("error", &SyncScanRow::error);

    py::class_<ScanOptions>(m, "ScanOptions")
        .def(py::init<>())
        .def_readwrite("ensemble_count", &ScanOptions::ensemble_count)
        .def_readwrite("ensemble_radius", &ScanOptions::ensemble_radius)
        .def_readwrite("mc_burn_in", &ScanOptions::mc_burn_in)
        .def_readwrite("mc_horizon", &ScanOptions::mc_horizon)
        .def_readwrite("mc_trajectories", &ScanOptions::mc_trajectories)
        .def_readwrite("threads", &ScanOptions::threads);

    m.def("classify", &classify, py::arg("median_final"), py::arg("initial"),
          py::arg("sync_frac") = 1e-3, py::arg("nosync_frac") = 0.05);
    m.def("sample_ensemble", &sample_ensemble, py::arg("spec"), py::arg("params"),
          py::arg("seed"));
    m.def("ensemble_diameter", &ensemble_diameter, py::arg("spec"), py::arg("params"),
          py::arg("config"), py::arg("seed"), py::arg("t_end"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("ensemble_diameter_multi", &ensemble_diameter_multi, py::arg("spec"), py::arg("params"),
          py::arg("config"), py::arg("seeds"), py::arg("t_end"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("pullback_diameter", &pullback_diameter, py::arg("spec"), py::arg("params"),
          py::arg("config"), py::arg("seed"), py::arg("T_list"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("pairwise_bound_check", &pairwise_bound_check, py::arg("params"), py::arg("config"),
          py::arg("seed"), py::arg("trials"), py::arg("t_end") = 2.0, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("sync_scan", &sync_scan, py::arg("sigma_grid"), py::arg("params"), py::arg("config"),
          py::arg("seeds"), py::arg("t_end"), py::arg("options") = ScanOptions{},
          py::call_guard<py::gil_scoped_release>());

    // ------------------------------------------------------------- selfcheck
    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("pass_", &CheckResult::pass)
        .def_readonly("detail", &CheckResult::detail)
        .def("__repr__", [](const CheckResult& c) {
            return std::string(c.pass ? "PASS " : "FAIL ") + c.name;
        });

    m.def("run_selfchecks", &run_selfchecks, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "the property battery behind the CLI's verify subcommand");
}
