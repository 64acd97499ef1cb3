#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "dwsync/integrator.hpp"
#include "dwsync/model.hpp"
#include "dwsync/noise.hpp"

using namespace dwsync;

// ---- oracles ----------------------------------------------------------------

// High-accuracy RK4 for the radial ODE r' = r(1 - r^2), which the full drift
// reduces to along any ray through the origin.
static double rk4_radial(double r0, double T, int64_t steps) {
    auto f = [](double r) { return r * (1.0 - r * r); };
    double r = r0;
    double h = T / static_cast<double>(steps);
    for (int64_t k = 0; k < steps; ++k) {
        double k1 = f(r);
        double k2 = f(r + 0.5 * h * k1);
        double k3 = f(r + 0.5 * h * k2);
        double k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return r;
}

// ---- tests ------------------------------------------------------------------

TEST_CASE("grid cells and config validation") {
    CHECK(cells_of(0.0, 1e-3) == 0);
    CHECK(cells_of(2.5, 1e-3) == 2500);
    CHECK(cells_of(-1.0, 1e-3) == -1000);
    CHECK(cells_of(0.3, 0.1) == 3);
    CHECK_THROWS_AS(cells_of(0.35, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(cells_of(1.0005, 1e-3), std::invalid_argument);

    SolverConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.dt = 1e-3;
    bad.record_stride = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    SystemParams p(2, 1, 1.0);
    SolverConfig cfg;
    IncrementSource src_wrong_n(1, 2, cfg.dt, 0);
    CHECK_THROWS_AS(step({0.1, 0.2}, 0, src_wrong_n, p, cfg), std::invalid_argument);
    IncrementSource src_wrong_dt(1, 1, 2e-3, 0);
    CHECK_THROWS_AS(step({0.1, 0.2}, 0, src_wrong_dt, p, cfg), std::invalid_argument);
    CHECK_THROWS_AS(step({0.1}, 0, IncrementSource(1, 1, cfg.dt, 0), p, cfg),
                    std::invalid_argument);

    // with sigma = 0 the source is unused, so mismatches are allowed
    SystemParams p0(2, 1, 0.0);
    CHECK_NOTHROW(step({0.1, 0.2}, 0, src_wrong_dt, p0, cfg));
}

TEST_CASE("deterministic fixed points are bitwise fixed") {
    SystemParams p(3, 1, 0.0);
    SolverConfig cfg;
    IncrementSource src(1, 1, cfg.dt, 0);
    for (Vec x0 : {Vec{0.0, 0.0, 0.0}, Vec{1.0, 0.0, 0.0}, Vec{-1.0, 0.0, 0.0},
                   Vec{0.0, 0.6, 0.8}}) {
        Vec x = x0;
        for (int k = 0; k < 100; ++k) x = step(x, k, src, p, cfg);
        for (int i = 0; i < 3; ++i) CHECK(x[i] == x0[i]);
    }
}

TEST_CASE("deterministic flow matches the radial ODE") {
    SystemParams p(2, 1, 0.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_stride = 1000;
    IncrementSource src(1, 1, cfg.dt, 0);

    auto traj = simulate({0.5, 0.0}, src, p, cfg, 0.0, 20.0);
    double r_final = norm(traj.states.back());
    CHECK(r_final == doctest::Approx(1.0).epsilon(1e-3));
    double r_oracle = rk4_radial(0.5, 20.0, 200000);
    CHECK(std::abs(r_final - r_oracle) <= 2e-3);

    // two starts in the same basin collapse onto the circle and onto each other
    auto a = simulate({0.2, 0.0}, src, p, cfg, 0.0, 30.0);
    auto b = simulate({0.7, 0.0}, src, p, cfg, 0.0, 30.0);
    CHECK(dist(a.states.back(), b.states.back()) <= 1e-6);
}

TEST_CASE("overlapping windows reuse identical increments") {
    SystemParams p(2, 2, 1.3);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    IncrementSource src(99, 2, cfg.dt, 5);
    Vec x0{0.4, -0.1};

    auto shorter = simulate(x0, src, p, cfg, -0.5, 0.0);
    auto longer = simulate(x0, src, p, cfg, -1.0, 0.0);

    // the increments on [-0.5, 0) are shared, so starting the longer run's
    // state at the shorter run's start time must reproduce it bitwise
    size_t off = longer.times.size() - shorter.times.size();
    CHECK(longer.times[off] == shorter.times[0]);
    auto replay = simulate(longer.states[off], src, p, cfg, -0.5, 0.0);
    REQUIRE(replay.times.size() == shorter.times.size());
    for (size_t j = 0; j < replay.times.size(); ++j) {
        CHECK(replay.times[j] == shorter.times[j]);
        // states differ (different x at -0.5) unless starts coincide; the
        // bitwise claim is about increments, checked via a third run
    }
    auto again = simulate(x0, src, p, cfg, -0.5, 0.0);
    for (size_t j = 0; j < again.times.size(); ++j)
        for (int i = 0; i < 2; ++i) CHECK(again.states[j][i] == shorter.states[j][i]);
}

TEST_CASE("noise leaves trailing components exactly zero") {
    SystemParams p(4, 2, 1.5);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    IncrementSource src(7, 2, cfg.dt, 0);
    auto traj = simulate({0.3, -0.2, 0.0, 0.0}, src, p, cfg, 0.0, 20.0);
    for (const auto& x : traj.states) {
        CHECK(x[2] == 0.0);
        CHECK(x[3] == 0.0);
        CHECK(!std::signbit(x[2]));
        CHECK(!std::signbit(x[3]));
    }
}

TEST_CASE("tamed drift multiplier keeps component signs") {
    // the update multiplies x by 1 + dt f / (1 + dt |b|) with f = 1 - |x|^2;
    // positivity of that factor means noise-free components never flip sign
    const int d = 3;
    for (int64_t trial = 0; trial < 1000000; ++trial) {
        double dt = (trial % 3 == 0) ? 1e-3 : (trial % 3 == 1 ? 1e-2 : 0.05);
        Vec x(d);
        for (int i = 0; i < d; ++i)
            x[i] = -3.0 + 6.0 * hash_uniform(31, 1, trial, i);
        double r2 = norm2(x);
        double f = 1.0 - r2;
        double mult = 1.0 + dt * f / (1.0 + dt * std::abs(f) * std::sqrt(r2));
        CHECK(mult > 0.0);
        Vec y = x;
        detail::scheme_step_inplace(y.data(), d, 1, 0.0, dt, true, nullptr);
        for (int i = 1; i < d; ++i) {
            if (x[i] != 0.0) CHECK(std::signbit(y[i]) == std::signbit(x[i]));
        }
    }
}

TEST_CASE("deterministic pairs at norm >= 2 contract in one tamed step") {
    SystemParams p(2, 1, 0.0);
    IncrementSource src(1, 1, 1e-3, 0);
    for (double dt : {0.1, 0.01}) {
        SolverConfig cfg;
        cfg.dt = dt;
        for (int64_t trial = 0; trial < 10000; ++trial) {
            auto rnd = [&](int c) { return hash_uniform(55, static_cast<int>(dt * 1000), trial, c); };
            double rx = 2.0 + 3.0 * rnd(0), ax = 6.2831853071795865 * rnd(1);
            double ry = 2.0 + 3.0 * rnd(2), ay = 6.2831853071795865 * rnd(3);
            Vec x{rx * std::cos(ax), rx * std::sin(ax)};
            Vec y{ry * std::cos(ay), ry * std::sin(ay)};
            double before = dist(x, y);
            double after = dist(step(x, 0, src, p, cfg), step(y, 0, src, p, cfg));
            CHECK(after < before);
        }
    }
}

TEST_CASE("untamed scheme trips the divergence guard") {
    SystemParams p(2, 1, 0.0);
    SolverConfig cfg;
    cfg.scheme = Scheme::em;
    IncrementSource src(1, 1, cfg.dt, 0);
    Vec x{2000.0, 0.0};
    CHECK_THROWS_AS(step(x, 0, src, p, cfg), DivergenceError);
    try {
        simulate(x, src, p, cfg, 0.0, 1.0);
        CHECK(false);
    } catch (const DivergenceError& e) {
        CHECK(e.time > 0.0);
        CHECK(e.time <= 1.0);
    }
}

TEST_CASE("tamed scheme stays bounded at large noise") {
    SystemParams p(2, 2, 2.0);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.record_stride = 10;
    IncrementSource src(2024, 2, cfg.dt, 0);
    auto traj = simulate({0.5, 0.5}, src, p, cfg, 0.0, 100.0);
    for (const auto& x : traj.states) CHECK(norm(x) < 10.0);
}

TEST_CASE("variational step tracks the frozen-state linearization") {
    // at x = 0 tangents grow like e^t, at x = e1 radial tangents decay like
    // e^{-2t}; Euler matches both rates to O(dt) per unit time
    Vec x0{0.0, 0.0};
    Vec v{1.0, 0.0};
    for (int k = 0; k < 1000; ++k) v = step_variational(x0, v, 1e-3);
    CHECK(std::abs(std::log(norm(v)) - 1.0) <= 2e-3);

    Vec x1{1.0, 0.0};
    v = {1.0, 0.0};
    for (int k = 0; k < 1000; ++k) v = step_variational(x1, v, 1e-3);
    CHECK(std::abs(std::log(norm(v)) + 2.0) <= 5e-3);

    // tangent orthogonal to a point on the unit circle is neutral: Db(e1) e2 = 0
    Vec w{0.0, 1.0};
    Vec w1 = step_variational(x1, w, 1e-3);
    CHECK(w1[0] == 0.0);
    CHECK(w1[1] == 1.0);
}

TEST_CASE("tangent growth obeys the per-step bound along noisy paths") {
    SystemParams p(2, 1, 2.0);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    IncrementSource src(11, 1, cfg.dt, 0);
    Vec x{0.5, 0.3};
    Vec v{1.0, 0.5};
    Vec w(1);
    double cap = std::exp(cfg.dt * (1.0 + 5.0 * cfg.dt));
    for (int64_t k = 0; k < 5000; ++k) {
        double nv = norm(v);
        v = step_variational(x, v, cfg.dt);
        CHECK(norm(v) <= cap * nv * (1.0 + 1e-12));
        src.increment(k, w.data());
        detail::scheme_step_inplace(x.data(), 2, 1, p.sigma, cfg.dt, true, w.data());
    }
}

TEST_CASE("controlled line reaches its target") {
    SystemParams p(3, 2, 1.0);
    SolverConfig cfg;
    cfg.dt = 1e-4;
    cfg.record_stride = 100;
    Vec from{-0.8, 0.3, 0.0}, to{0.9, -0.4, 0.0};
    double t0 = std::log(1.5);
    auto spec = ControlSpec::line_to(from, to, t0);

    auto traj = simulate_controlled(spec, from, p, cfg, t0);
    CHECK(traj.times.back() == doctest::Approx(t0).epsilon(1e-12));
    // Euler is exact along a straight line: the control cancels the drift and
    // what remains is integration of a constant
    CHECK(dist(traj.states.back(), to) <= 1e-9);
    for (const auto& z : traj.states) CHECK(z[2] == 0.0);

    // continuing past t0 holds the state at the target
    auto longer = simulate_controlled(spec, from, p, cfg, t0 + 1.0);
    CHECK(dist(longer.states.back(), to) <= 1e-6);
}

TEST_CASE("hold control pins the anchor and contracts toward it") {
    SystemParams p(2, 1, 1.0);
    SolverConfig cfg;
    cfg.dt = 1e-4;
    cfg.record_stride = 100;
    Vec xs{2.0, 0.0};
    auto spec = ControlSpec::hold_at(xs);

    auto pinned = simulate_controlled(spec, xs, p, cfg, 2.0);
    for (const auto& z : pinned.states) CHECK(dist(z, xs) <= 1e-12);

    // |x*| = 2 sits in the one-sided contraction regime: displacements shrink
    // at least like e^{-2t} up to discretization slack
    double R = 1.0;
    for (int j = 0; j < 4; ++j) {
        double ang = 1.5707963267948966 * j + 0.3;
        Vec z0{xs[0] + R * std::cos(ang), xs[1] + R * std::sin(ang)};
        auto traj = simulate_controlled(spec, z0, p, cfg, 3.0);
        for (size_t m = 0; m < traj.times.size(); ++m) {
            double bound = R * std::exp(-2.0 * traj.times[m]) * (1.0 + 10.0 * cfg.dt) + 1e-12;
            CHECK(dist(traj.states[m], xs) <= bound);
        }
    }
}

TEST_CASE("recording stride and endpoints") {
    SystemParams p(1, 1, 0.5);
    SolverConfig cfg;
    cfg.dt = 0.1;
    cfg.record_stride = 10;
    IncrementSource src(3, 1, cfg.dt, 0);
    auto traj = simulate({0.5}, src, p, cfg, 0.0, 2.5);
    REQUIRE(traj.times.size() == 4);
    CHECK(traj.times[0] == 0.0);
    CHECK(traj.times[1] == doctest::Approx(1.0));
    CHECK(traj.times[2] == doctest::Approx(2.0));
    CHECK(traj.times[3] == doctest::Approx(2.5));
    CHECK(traj.states.size() == traj.times.size());
}
