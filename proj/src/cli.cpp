#include "dwsync/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwsync/integrator.hpp"
#include "dwsync/lyapunov.hpp"
#include "dwsync/model.hpp"
#include "dwsync/quadrature.hpp"
#include "dwsync/selfcheck.hpp"
#include "dwsync/sync.hpp"
#include "dwsync/version.hpp"

namespace dwsync {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 16);
}

namespace {

// Exit code 1: the config or the flags are wrong. Everything else that escapes
// a runner is a numerical failure and exits 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

// shortest round-trip float formatting for CSV cells
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Whitelist view over the parsed config. Every getter records the resolved
// value (default or supplied) into the effective config that feeds the digest,
// and finish() rejects any field no getter asked for.
class Cfg {
  public:
    Cfg(json j, std::string cmd) : j_(std::move(j)), cmd_(std::move(cmd)) {
        if (!j_.is_object()) throw ValidationError("config root must be a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double num(const std::string& key, double fallback) {
        if (!j_.contains(key)) {
            eff_[key] = fallback;
            return fallback;
        }
        const json& v = mark(key);
        if (!v.is_number()) wrong_type(key, "a number");
        double x = v.get<double>();
        eff_[key] = x;
        return x;
    }

    int64_t integer(const std::string& key, int64_t fallback) {
        if (!j_.contains(key)) {
            eff_[key] = fallback;
            return fallback;
        }
        const json& v = mark(key);
        if (!v.is_number_integer()) wrong_type(key, "an integer");
        int64_t x = v.get<int64_t>();
        eff_[key] = x;
        return x;
    }

    bool flag(const std::string& key, bool fallback) {
        if (!j_.contains(key)) {
            eff_[key] = fallback;
            return fallback;
        }
        const json& v = mark(key);
        if (!v.is_boolean()) wrong_type(key, "a boolean");
        bool x = v.get<bool>();
        eff_[key] = x;
        return x;
    }

    std::string text(const std::string& key, const std::string& fallback, bool record = true) {
        if (!j_.contains(key)) {
            if (record) eff_[key] = fallback;
            return fallback;
        }
        const json& v = mark(key);
        if (!v.is_string()) wrong_type(key, "a string");
        std::string x = v.get<std::string>();
        if (record) eff_[key] = x;
        return x;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        if (!j_.contains(key)) {
            eff_[key] = fallback;
            return fallback;
        }
        const json& v = mark(key);
        if (!v.is_array()) wrong_type(key, "an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& e : v) {
            if (!e.is_number()) wrong_type(key, "an array of numbers");
            out.push_back(e.get<double>());
        }
        eff_[key] = out;
        return out;
    }

    std::optional<uint64_t> seed_field() {
        if (!j_.contains("seed")) return std::nullopt;
        const json& v = mark("seed");
        bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<int64_t>() >= 0);
        if (!ok) wrong_type("seed", "a nonnegative integer");
        uint64_t s = v.get<uint64_t>();
        eff_["seed"] = s;
        return s;
    }

    void set_seed(uint64_t s) { eff_["seed"] = s; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (seen_.count(it.key()) == 0) {
                throw ValidationError("unknown field '" + it.key() + "' for command '" + cmd_ +
                                      "'");
            }
        }
    }

    const json& effective() const { return eff_; }

  private:
    const json& mark(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }
    [[noreturn]] void wrong_type(const std::string& key, const char* want) const {
        throw ValidationError("field '" + key + "' for command '" + cmd_ + "': expected " + want);
    }

    json j_;
    json eff_ = json::object();
    std::set<std::string> seen_;
    std::string cmd_;
};

struct Invocation {
    std::string command;
    std::optional<uint64_t> seed_flag;
    fs::path out_dir = ".";
    int threads = 1;
};

struct RunResult {
    std::vector<std::string> outputs;
    json summary = json::object();
    std::optional<uint64_t> master_seed;
    int exit_code = 0;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cli: short write to " + path.string());
}

void write_json_file(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

uint64_t resolve_seed(Cfg& cfg, const Invocation& inv) {
    auto from_cfg = cfg.seed_field();
    if (inv.seed_flag) {
        cfg.set_seed(*inv.seed_flag);
        return *inv.seed_flag;
    }
    if (from_cfg) return *from_cfg;
    throw ValidationError("field 'seed': required for command '" + inv.command +
                          "' (config key \"seed\" or --seed)");
}

// Prefix escaped computations with the command and its parameters. Bad
// parameter combinations surface as validation errors, everything else as a
// numerical failure.
template <typename F>
auto with_context(const std::string& ctx, F&& f) {
    try {
        return f();
    } catch (const ValidationError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ValidationError(ctx + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(ctx + ": " + e.what());
    }
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t m = v.size() / 2;
    if (v.size() % 2 == 1) return v[m];
    return 0.5 * (v[m - 1] + v[m]);
}

Vec unit_e1(int d) {
    Vec x(d, 0.0);
    x[0] = 1.0;
    return x;
}

Vec parse_vec(Cfg& cfg, const std::string& key, Vec fallback, int d) {
    Vec x = cfg.numbers(key, std::move(fallback));
    require(static_cast<int>(x.size()) == d,
            "field '" + key + "': expected " + std::to_string(d) + " entries");
    return x;
}

int parse_dim(Cfg& cfg, int d_default, int n_default, int* n_out) {
    int d = static_cast<int>(cfg.integer("d", d_default));
    require(d >= 1 && d <= 64, "field 'd': must be in [1, 64]");
    int n = static_cast<int>(cfg.integer("n", n_default));
    require(n >= 1 && n <= d, "field 'n': must be in [1, d]");
    *n_out = n;
    return d;
}

double parse_dt(Cfg& cfg) {
    double dt = cfg.num("dt", 1e-3);
    require(dt > 0.0 && dt <= 0.1, "field 'dt': must be in (0, 0.1]");
    return dt;
}

// ---------------------------------------------------------------------------
// quad

RunResult run_quad(Cfg& cfg, const Invocation& inv) {
    int n = static_cast<int>(cfg.integer("n", 1));
    require(n >= 1 && n <= 64, "field 'n': must be in [1, 64]");
    require(!(cfg.has("sigma") && cfg.has("sigma_grid")),
            "field 'sigma': give either 'sigma' or 'sigma_grid', not both");
    std::vector<double> grid;
    if (cfg.has("sigma")) {
        double s = cfg.num("sigma", 1.0);
        require(s > 0.0, "field 'sigma': must be > 0");
        grid = {s};
    } else {
        grid = cfg.numbers("sigma_grid", {0.5, 1.0, 2.0});
        require(!grid.empty(), "field 'sigma_grid': must be non-empty");
        for (double s : grid) require(s > 0.0, "field 'sigma_grid': entries must be > 0");
    }
    double tol = cfg.num("tol", 1e-10);
    require(tol > 0.0 && tol <= 1e-2, "field 'tol': must be in (0, 1e-2]");
    cfg.finish();

    std::string csv = "sigma,n,lambda,abs_error,tail_bound,truncation_radius,kind\n";
    json lambdas = json::array();
    for (double s : grid) {
        QuadratureResult qr = with_context(
            "quad (n = " + std::to_string(n) + ", sigma = " + fmt(s) + ")",
            [&] { return lambda_top_quad(n, s, tol); });
        csv += fmt(s) + "," + std::to_string(n) + "," + fmt(qr.value) + "," +
               fmt(qr.abs_error_estimate) + "," + fmt(qr.tail_bound) + "," +
               fmt(qr.truncation_radius) + "," + to_string(qr.kind) + "\n";
        lambdas.push_back(qr.value);
        std::cout << "quad: sigma = " << fmt(s) << "  lambda = " << fmt(qr.value) << " ("
                  << to_string(qr.kind) << ")\n";
    }
    write_text(inv.out_dir / "quad.csv", csv);

    RunResult rr;
    rr.outputs = {"quad.csv"};
    rr.summary = {{"rows", grid.size()}, {"n", n}, {"lambda", lambdas}};
    return rr;
}

// ---------------------------------------------------------------------------
// sigma-star

RunResult run_sigma_star(Cfg& cfg, const Invocation& inv) {
    double tol = cfg.num("tol", 1e-6);
    require(tol > 0.0 && tol <= 1e-2, "field 'tol': must be in (0, 1e-2]");
    cfg.finish();

    SigmaStarResult r = with_context("sigma-star (tol = " + fmt(tol) + ")",
                                     [&] { return sigma_star(tol); });
    json out = {{"lower", r.lower},
                {"upper", r.upper},
                {"width", r.upper - r.lower},
                {"lambda_at_lower", r.lambda_at_lower},
                {"lambda_at_upper", r.lambda_at_upper},
                {"iterations", r.iterations},
                {"tol", tol}};
    write_json_file(inv.out_dir / "sigma-star.json", out);
    std::cout << "sigma-star: bracket [" << fmt(r.lower) << ", " << fmt(r.upper) << "] after "
              << r.iterations << " bisections\n";

    RunResult rr;
    rr.outputs = {"sigma-star.json"};
    rr.summary = out;
    return rr;
}

// ---------------------------------------------------------------------------
// lyap-mc

RunResult run_lyap_mc(Cfg& cfg, const Invocation& inv) {
    int n = 0;
    int d = parse_dim(cfg, 2, 1, &n);
    double sigma = cfg.num("sigma", 2.0);
    require(sigma >= 0.0, "field 'sigma': must be >= 0");
    double dt = parse_dt(cfg);
    std::string scheme_s = cfg.text("scheme", "tamed_em");
    require(scheme_s == "tamed_em" || scheme_s == "em",
            "field 'scheme': expected \"tamed_em\" or \"em\"");
    double horizon = cfg.num("horizon", 1000.0);
    double burn_in = cfg.num("burn_in", horizon / 10.0);
    require(burn_in >= 0.0 && horizon > burn_in,
            "field 'burn_in': need 0 <= burn_in < horizon");
    int n_traj = static_cast<int>(cfg.integer("n_traj", 16));
    require(n_traj >= 1 && n_traj <= 100000, "field 'n_traj': must be in [1, 1e5]");
    int64_t renorm_every = cfg.integer("renorm_every", 100);
    require(renorm_every >= 1, "field 'renorm_every': must be >= 1");
    std::string method = cfg.text("method", "both");
    require(method == "both" || method == "ergodic_n1" || method == "benettin",
            "field 'method': expected \"both\", \"ergodic_n1\" or \"benettin\"");
    require(!(method == "ergodic_n1" && n != 1), "field 'method': ergodic_n1 requires n = 1");
    Vec x0 = parse_vec(cfg, "x0", unit_e1(d), d);
    Vec v0 = parse_vec(cfg, "v0", Vec(d, 1.0 / std::sqrt(double(d))), d);
    require(norm(v0) > 0.0, "field 'v0': must be nonzero");
    uint64_t seed = resolve_seed(cfg, inv);
    cfg.finish();

    SystemParams p(d, n, sigma);
    SolverConfig scfg;
    scfg.dt = dt;
    scfg.scheme = scheme_s == "em" ? Scheme::em : Scheme::tamed_em;

    std::string ctx = "lyap-mc (d = " + std::to_string(d) + ", n = " + std::to_string(n) +
                      ", sigma = " + fmt(sigma) + ", dt = " + fmt(dt) + ")";
    std::vector<LyapunovEstimate> estimates;
    GronwallStats gstats;
    if ((method == "both" && n == 1) || method == "ergodic_n1") {
        estimates.push_back(with_context(ctx, [&] {
            return ergodic_lambda_n1(p, scfg, seed, burn_in, horizon, n_traj, inv.threads);
        }));
        std::cout << "lyap-mc: ergodic_n1 value = " << fmt(estimates.back().value)
                  << "  stderr = " << fmt(estimates.back().std_error) << "\n";
    } else if (method == "both") {
        std::cout << "lyap-mc: ergodic_n1 skipped (requires n = 1, got n = " << n << ")\n";
    }
    if (method == "both" || method == "benettin") {
        estimates.push_back(with_context(ctx, [&] {
            return benettin_lambda(p, x0, v0, scfg, seed, burn_in, horizon, renorm_every, n_traj,
                                   inv.threads, &gstats);
        }));
        std::cout << "lyap-mc: benettin value = " << fmt(estimates.back().value)
                  << "  stderr = " << fmt(estimates.back().std_error) << "\n";
    }

    std::string csv = "method,sigma,n,d,value,stderr,burn_in,horizon,n_traj\n";
    json est_summary = json::object();
    for (const auto& e : estimates) {
        csv += to_string(e.method) + "," + fmt(sigma) + "," + std::to_string(n) + "," +
               std::to_string(d) + "," + fmt(e.value) + "," + fmt(e.std_error) + "," +
               fmt(e.burn_in) + "," + fmt(e.horizon) + "," + std::to_string(e.n_trajectories) +
               "\n";
        est_summary[to_string(e.method)] = {{"value", e.value}, {"stderr", e.std_error}};
    }
    write_text(inv.out_dir / "lyap-mc.csv", csv);

    RunResult rr;
    rr.outputs = {"lyap-mc.csv"};
    rr.master_seed = seed;
    rr.summary = {{"estimates", est_summary},
                  {"gronwall",
                   {{"checks", gstats.checks},
                    {"violations", gstats.violations},
                    {"max_ratio", gstats.max_ratio}}}};
    if (gstats.violations > 0) {
        std::cerr << "lyap-mc: " << gstats.violations
                  << " tangent growth intervals exceeded the deterministic cap\n";
        rr.exit_code = 2;
    }
    return rr;
}

// ---------------------------------------------------------------------------
// sync-scan

RunResult run_sync_scan(Cfg& cfg, const Invocation& inv) {
    int n = 0;
    int d = parse_dim(cfg, 2, 1, &n);
    std::vector<double> grid = cfg.numbers("sigma_grid", {0.5, 2.0});
    require(!grid.empty(), "field 'sigma_grid': must be non-empty");
    for (size_t i = 1; i < grid.size(); ++i)
        require(grid[i] > grid[i - 1], "field 'sigma_grid': entries must be strictly increasing");
    double dt = parse_dt(cfg);
    double t_end = cfg.num("t_end", 50.0);
    require(t_end > 0.0, "field 't_end': must be > 0");
    int64_t record_stride = cfg.integer("record_stride", 1000);
    require(record_stride >= 1, "field 'record_stride': must be >= 1");
    int n_seeds = static_cast<int>(cfg.integer("n_seeds", 5));
    require(n_seeds >= 1 && n_seeds <= 1000, "field 'n_seeds': must be in [1, 1000]");
    ScanOptions opt;
    opt.ensemble_count = static_cast<int>(cfg.integer("ensemble_count", opt.ensemble_count));
    require(opt.ensemble_count >= 2 && opt.ensemble_count <= 256,
            "field 'ensemble_count': must be in [2, 256]");
    opt.ensemble_radius = cfg.num("ensemble_radius", opt.ensemble_radius);
    require(opt.ensemble_radius > 0.0, "field 'ensemble_radius': must be > 0");
    opt.mc_burn_in = cfg.num("mc_burn_in", opt.mc_burn_in);
    opt.mc_horizon = cfg.num("mc_horizon", opt.mc_horizon);
    require(opt.mc_burn_in >= 0.0 && opt.mc_horizon > opt.mc_burn_in,
            "field 'mc_burn_in': need 0 <= mc_burn_in < mc_horizon");
    opt.mc_trajectories = static_cast<int>(cfg.integer("mc_trajectories", opt.mc_trajectories));
    require(opt.mc_trajectories >= 1 && opt.mc_trajectories <= 100000,
            "field 'mc_trajectories': must be in [1, 1e5]");
    opt.threads = inv.threads;
    uint64_t seed = resolve_seed(cfg, inv);
    cfg.finish();

    std::vector<uint64_t> seeds(n_seeds);
    for (int i = 0; i < n_seeds; ++i) seeds[i] = seed + static_cast<uint64_t>(i);
    SolverConfig scfg;
    scfg.dt = dt;
    scfg.record_stride = record_stride;

    std::vector<SyncScanRow> rows = with_context(
        "sync-scan (d = " + std::to_string(d) + ", n = " + std::to_string(n) + ")",
        [&] { return sync_scan(grid, SystemParams(d, n, 1.0), scfg, seeds, t_end, opt); });

    std::string csv = "sigma,n,d,lambda_quad,lambda_mc,lambda_mc_stderr,median_final_diameter,verdict\n";
    json errors = json::array();
    int n_failed = 0;
    for (const auto& row : rows) {
        if (row.ok) {
            csv += fmt(row.sigma) + "," + std::to_string(row.n) + "," + std::to_string(row.d) +
                   "," + fmt(row.lambda_quad) + "," + fmt(row.lambda_mc) + "," +
                   fmt(row.lambda_mc_stderr) + "," + fmt(row.median_final_diameter) + "," +
                   to_string(row.verdict) + "\n";
            std::cout << "sync-scan: sigma = " << fmt(row.sigma)
                      << "  lambda_quad = " << fmt(row.lambda_quad)
                      << "  verdict = " << to_string(row.verdict) << "\n";
        } else {
            csv += fmt(row.sigma) + "," + std::to_string(n) + "," + std::to_string(d) +
                   ",nan,nan,nan,nan,error\n";
            errors.push_back({{"sigma", row.sigma}, {"error", row.error}});
            ++n_failed;
            std::cout << "sync-scan: sigma = " << fmt(row.sigma) << "  error: " << row.error
                      << "\n";
        }
    }
    if (n_failed == static_cast<int>(rows.size()))
        throw std::runtime_error("sync-scan: every sigma failed; first error: " + rows[0].error);
    write_text(inv.out_dir / "sync-scan.csv", csv);

    RunResult rr;
    rr.outputs = {"sync-scan.csv"};
    rr.master_seed = seed;
    rr.summary = {{"rows", rows.size()}, {"failed", n_failed}, {"errors", errors}};
    return rr;
}

// ---------------------------------------------------------------------------
// pullback

RunResult run_pullback(Cfg& cfg, const Invocation& inv) {
    int n = 0;
    int d = parse_dim(cfg, 2, 1, &n);
    double sigma = cfg.num("sigma", 2.0);
    require(sigma >= 0.0, "field 'sigma': must be >= 0");
    double dt = parse_dt(cfg);
    std::vector<double> T_list = cfg.numbers("T_list", {5.0, 10.0, 20.0, 40.0});
    require(!T_list.empty(), "field 'T_list': must be non-empty");
    for (size_t i = 0; i < T_list.size(); ++i) {
        require(T_list[i] >= 0.0, "field 'T_list': entries must be >= 0");
        if (i > 0)
            require(T_list[i] > T_list[i - 1], "field 'T_list': entries must be strictly increasing");
    }
    int count = static_cast<int>(cfg.integer("ensemble_count", 16));
    require(count >= 2 && count <= 256, "field 'ensemble_count': must be in [2, 256]");
    double radius = cfg.num("ensemble_radius", 1.0);
    require(radius > 0.0, "field 'ensemble_radius': must be > 0");
    std::string sampling = cfg.text("sampling", "ball_uniform");
    require(sampling == "ball_uniform" || sampling == "sphere_surface",
            "field 'sampling': expected \"ball_uniform\" or \"sphere_surface\"");
    bool restrict_m = cfg.flag("restrict_to_m", false);
    Vec center = parse_vec(cfg, "center", Vec(d, 0.0), d);
    int n_seeds = static_cast<int>(cfg.integer("n_seeds", 5));
    require(n_seeds >= 1 && n_seeds <= 1000, "field 'n_seeds': must be in [1, 1000]");
    uint64_t seed = resolve_seed(cfg, inv);
    cfg.finish();

    SystemParams p(d, n, sigma);
    EnsembleSpec spec = sampling == "ball_uniform"
                            ? EnsembleSpec::ball(center, radius, count, restrict_m)
                            : EnsembleSpec::sphere(center, radius, count, restrict_m);
    SolverConfig scfg;
    scfg.dt = dt;

    std::string ctx = "pullback (d = " + std::to_string(d) + ", n = " + std::to_string(n) +
                      ", sigma = " + fmt(sigma) + ", dt = " + fmt(dt) + ")";
    std::vector<std::vector<double>> per_seed;
    json verdicts = json::array();
    for (int i = 0; i < n_seeds; ++i) {
        SyncReport rep = with_context(ctx, [&] {
            return pullback_diameter(spec, p, scfg, seed + static_cast<uint64_t>(i), T_list,
                                     inv.threads);
        });
        per_seed.push_back(rep.diameters);
        verdicts.push_back(to_string(rep.verdict));
        std::cout << "pullback: seed " << (i + 1) << "/" << n_seeds
                  << "  diameter(T_max) = " << fmt(rep.diameters.back()) << "\n";
    }

    std::string csv = "T,median_diameter,max_diameter\n";
    std::vector<double> medians(T_list.size());
    for (size_t j = 0; j < T_list.size(); ++j) {
        std::vector<double> at_T(per_seed.size());
        for (size_t i = 0; i < per_seed.size(); ++i) at_T[i] = per_seed[i][j];
        medians[j] = median_of(at_T);
        double mx = *std::max_element(at_T.begin(), at_T.end());
        csv += fmt(T_list[j]) + "," + fmt(medians[j]) + "," + fmt(mx) + "\n";
    }
    write_text(inv.out_dir / "pullback.csv", csv);

    RunResult rr;
    rr.outputs = {"pullback.csv"};
    rr.master_seed = seed;
    rr.summary = {{"rows", T_list.size()},
                  {"median_final_diameter", medians.back()},
                  {"verdicts", verdicts}};
    return rr;
}

// ---------------------------------------------------------------------------
// bound-check

RunResult run_bound_check(Cfg& cfg, const Invocation& inv) {
    int n = 0;
    int d = parse_dim(cfg, 2, 1, &n);
    std::vector<double> grid = cfg.numbers("sigma_grid", {0.5, 2.0});
    require(!grid.empty(), "field 'sigma_grid': must be non-empty");
    for (double s : grid) require(s >= 0.0, "field 'sigma_grid': entries must be >= 0");
    double dt = parse_dt(cfg);
    int trials = static_cast<int>(cfg.integer("trials", 1000));
    require(trials >= 1 && trials <= 1000000, "field 'trials': must be in [1, 1e6]");
    double t_end = cfg.num("t_end", 2.0);
    require(t_end >= 0.5, "field 't_end': must be >= 0.5");
    uint64_t seed = resolve_seed(cfg, inv);
    cfg.finish();

    SolverConfig scfg;
    scfg.dt = dt;
    double bound = 4.0 * (1.0 + 50.0 * dt);
    json results = json::array();
    bool all_within = true;
    for (double s : grid) {
        PairBoundReport rep = with_context(
            "bound-check (sigma = " + fmt(s) + ", dt = " + fmt(dt) + ")", [&] {
                return pairwise_bound_check(SystemParams(d, n, s), scfg, seed, trials, t_end,
                                            inv.threads);
            });
        bool within = rep.max_at_half <= bound && rep.persistence_max <= bound;
        all_within = all_within && within;
        results.push_back({{"sigma", s},
                           {"max_at_half", rep.max_at_half},
                           {"persistence_max", rep.persistence_max},
                           {"trials", rep.trials},
                           {"within_bound", within}});
        std::cout << "bound-check: sigma = " << fmt(s) << "  max_at_half = " << fmt(rep.max_at_half)
                  << "  persistence_max = " << fmt(rep.persistence_max) << "  ("
                  << (within ? "within" : "EXCEEDS") << " " << fmt(bound) << ")\n";
    }
    json out = {{"bound", bound}, {"results", results}, {"all_within_bound", all_within}};
    write_json_file(inv.out_dir / "bound-check.json", out);

    RunResult rr;
    rr.outputs = {"bound-check.json"};
    rr.master_seed = seed;
    rr.summary = out;
    if (!all_within) {
        std::cerr << "bound-check: a pair exceeded 4(1 + 50 dt) = " << fmt(bound) << "\n";
        rr.exit_code = 2;
    }
    return rr;
}

// ---------------------------------------------------------------------------
// verify

RunResult run_verify(Cfg& cfg, const Invocation& inv) {
    cfg.finish();
    std::vector<CheckResult> checks = run_selfchecks(inv.threads);
    int passed = 0, failed = 0;
    json rows = json::array();
    for (const auto& c : checks) {
        (c.pass ? passed : failed) += 1;
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.pass && !c.detail.empty()) std::cout << ": " << c.detail;
        std::cout << "\n";
        rows.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    std::cout << "verify: " << passed << " passed, " << failed << " failed\n";
    write_json_file(inv.out_dir / "verify.json",
                    {{"checks", rows}, {"passed", passed}, {"failed", failed}});

    RunResult rr;
    rr.outputs = {"verify.json"};
    rr.summary = {{"passed", passed}, {"failed", failed}};
    rr.exit_code = failed == 0 ? 0 : 2;
    return rr;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"double-well synchronization toolkit: invariant-measure quadrature, Lyapunov "
                 "exponent estimators, and common-noise ensemble diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<uint64_t> seed_flag;
    std::string out_dir = ".";
    int threads = 1;

    const std::pair<const char*, const char*> kCommands[] = {
        {"quad", "top Lyapunov exponent by quadrature over a sigma grid"},
        {"sigma-star", "bisection bracket for the sign change of lambda(1, sigma)"},
        {"lyap-mc", "Monte Carlo exponent estimates (time average and tangent renormalization)"},
        {"sync-scan", "per-sigma exponents plus ensemble synchronization verdicts"},
        {"pullback", "ensemble diameter at time 0 over receding start times"},
        {"bound-check", "empirical check of the uniform pairwise contraction bound"},
        {"verify", "run the built-in property suite"},
    };
    for (const auto& [name, desc] : kCommands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-c,--config", config_path, "JSON config file");
        sub->add_option("-s,--seed", seed_flag, "master seed (overrides the config field)");
        sub->add_option("-o,--out", out_dir, "output directory (default: current directory)");
        sub->add_option("-t,--threads", threads, "worker threads; affects speed, never results")
            ->check(CLI::Range(1, 4096));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    Invocation inv;
    inv.command = sub->get_name();
    inv.seed_flag = seed_flag;
    inv.out_dir = out_dir;
    inv.threads = threads;

    auto t_start = std::chrono::steady_clock::now();
    try {
        json raw = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ValidationError("config file not readable: " + config_path);
            try {
                raw = json::parse(in);
            } catch (const json::exception& e) {
                throw ValidationError(std::string("config parse failed: ") + e.what());
            }
        }
        Cfg cfg(std::move(raw), inv.command);

        bool seeded_cmd = inv.command == "lyap-mc" || inv.command == "sync-scan" ||
                          inv.command == "pullback" || inv.command == "bound-check";
        if (!seeded_cmd && inv.seed_flag)
            throw ValidationError("--seed: command '" + inv.command +
                                  "' is deterministic and takes no seed");

        // output_path steers file placement only, so it stays out of the digest
        if (cfg.has("output_path") && sub->count("--out") == 0)
            inv.out_dir = cfg.text("output_path", ".", /*record=*/false);
        else if (cfg.has("output_path"))
            cfg.text("output_path", ".", /*record=*/false);

        std::error_code ec;
        fs::create_directories(inv.out_dir, ec);
        if (ec)
            throw ValidationError("cannot create output directory '" + inv.out_dir.string() +
                                  "': " + ec.message());

        RunResult rr;
        if (inv.command == "quad") rr = run_quad(cfg, inv);
        else if (inv.command == "sigma-star") rr = run_sigma_star(cfg, inv);
        else if (inv.command == "lyap-mc") rr = run_lyap_mc(cfg, inv);
        else if (inv.command == "sync-scan") rr = run_sync_scan(cfg, inv);
        else if (inv.command == "pullback") rr = run_pullback(cfg, inv);
        else if (inv.command == "bound-check") rr = run_bound_check(cfg, inv);
        else rr = run_verify(cfg, inv);

        json canonical = cfg.effective();
        canonical["command"] = inv.command;
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        json manifest = {{"tool_version", kToolVersion},
                         {"command", inv.command},
                         {"config_digest", fnv1a_hex(canonical.dump())},
                         {"master_seed", rr.master_seed ? json(*rr.master_seed) : json(nullptr)},
                         {"wall_time_seconds", wall},
                         {"outputs", rr.outputs},
                         {"summary", rr.summary}};
        write_json_file(inv.out_dir / "manifest.json", manifest);
        return rr.exit_code;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dwsync
