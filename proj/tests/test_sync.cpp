#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dwsync/integrator.hpp"
#include "dwsync/model.hpp"
#include "dwsync/noise.hpp"
#include "dwsync/sync.hpp"

using namespace dwsync;

TEST_CASE("ensemble sampling") {
    SystemParams p(3, 2, 1.0);
    Vec c{0.1, -0.2, 0.0};

    auto sph = sample_ensemble(EnsembleSpec::sphere(c, 0.7, 32, false), p, 5);
    REQUIRE(sph.size() == 32);
    for (const auto& m : sph) CHECK(dist(m, c) == doctest::Approx(0.7).epsilon(1e-12));

    auto ball = sample_ensemble(EnsembleSpec::ball(c, 0.7, 64, false), p, 5);
    double max_r = 0.0;
    for (const auto& m : ball) max_r = std::max(max_r, dist(m, c));
    CHECK(max_r <= 0.7 + 1e-12);
    CHECK(max_r >= 0.3);  // not collapsed near the center

    // restricted draws move only the M-coordinates
    auto in_m = sample_ensemble(EnsembleSpec::ball(c, 0.7, 32, true), p, 5);
    for (const auto& m : in_m) CHECK(m[2] == 0.0);

    auto pr = sample_ensemble(EnsembleSpec::pair({1, 0, 0}, {0, 1, 0}), p, 5);
    REQUIRE(pr.size() == 2);
    CHECK(pr[0] == Vec{1, 0, 0});
    CHECK(pr[1] == Vec{0, 1, 0});

    auto again = sample_ensemble(EnsembleSpec::ball(c, 0.7, 64, false), p, 5);
    CHECK(again == ball);
    auto other = sample_ensemble(EnsembleSpec::ball(c, 0.7, 64, false), p, 6);
    CHECK(other != ball);

    CHECK_THROWS_AS(EnsembleSpec::ball(c, 0.7, 1, false).validate(p), std::invalid_argument);
    CHECK_THROWS_AS(EnsembleSpec::ball(c, 0.7, 300, false).validate(p), std::invalid_argument);
    CHECK_THROWS_AS(EnsembleSpec::ball(c, -0.5, 8, false).validate(p), std::invalid_argument);
    CHECK_THROWS_AS(EnsembleSpec::ball({0.1, 0.2, 0.3}, 0.7, 8, true).validate(p),
                    std::invalid_argument);
    CHECK_THROWS_AS(EnsembleSpec::pair({1, 0}, {0, 1}).validate(p), std::invalid_argument);
}

TEST_CASE("verdict classification is a pure threshold rule") {
    CHECK(classify(1e-4, 1.0) == Verdict::synchronizing);
    CHECK(classify(1e-3, 1.0) == Verdict::synchronizing);
    CHECK(classify(0.06, 1.0) == Verdict::non_synchronizing);
    CHECK(classify(0.05, 1.0) == Verdict::non_synchronizing);
    CHECK(classify(0.01, 1.0) == Verdict::inconclusive);
    CHECK(classify(2e-3, 2.0) == Verdict::synchronizing);
    CHECK(to_string(Verdict::synchronizing) == "synchronizing");
    CHECK(to_string(Verdict::non_synchronizing) == "non_synchronizing");
    CHECK(to_string(Verdict::inconclusive) == "inconclusive");
}

TEST_CASE("coinciding pair stays coincident under common noise") {
    SystemParams p(2, 1, 2.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_stride = 500;
    auto spec = EnsembleSpec::pair({0.3, 0.4}, {0.3, 0.4});
    auto rep = ensemble_diameter(spec, p, cfg, 11, 5.0);
    for (double diam : rep.diameters) CHECK(diam == 0.0);
    CHECK(rep.verdict == Verdict::synchronizing);
}

TEST_CASE("deterministic pair collapses onto the shared equilibrium") {
    SystemParams p(2, 1, 0.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_stride = 5000;
    auto spec = EnsembleSpec::pair({0.2, 0.0}, {0.7, 0.0});
    auto rep = ensemble_diameter(spec, p, cfg, 1, 30.0);
    CHECK(rep.diameters.back() <= 1e-6);
}

TEST_CASE("large noise synchronizes a ball ensemble") {
    SystemParams p(2, 1, 2.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_stride = 5000;
    auto spec = EnsembleSpec::ball({0.0, 0.0}, 1.0, 64, true);
    std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
    for (uint64_t s : seeds) {
        auto rep = ensemble_diameter(spec, p, cfg, s, 50.0);
        CHECK(rep.diameters.back() <= 1e-3 * rep.diameters.front());
    }
    auto agg = ensemble_diameter_multi(spec, p, cfg, seeds, 50.0);
    CHECK(agg.verdict == Verdict::synchronizing);
    CHECK(agg.seeds_used == 5);
    CHECK(agg.times.size() == agg.diameters.size());
    CHECK(agg.max_diameters.back() >= agg.diameters.back());
}

TEST_CASE("small noise keeps the witness pair apart") {
    SystemParams p(2, 1, 0.3);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_stride = 10000;
    auto spec = EnsembleSpec::pair({0.0, 1.0}, {0.0, -1.0});
    std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
    for (uint64_t s : seeds) {
        auto rep = ensemble_diameter(spec, p, cfg, s, 100.0);
        CHECK(rep.diameters.back() >= 0.1);
    }
    auto agg = ensemble_diameter_multi(spec, p, cfg, seeds, 100.0);
    CHECK(agg.verdict == Verdict::non_synchronizing);

    // the report's final diameter is exactly the distance of the two
    // trajectories driven by the ensemble's stream, and the trailing
    // component's sign pattern never flips
    IncrementSource src(seeds[0], 1, cfg.dt, 0);
    auto a = simulate({0.0, 1.0}, src, p, cfg, 0.0, 100.0);
    auto b = simulate({0.0, -1.0}, src, p, cfg, 0.0, 100.0);
    auto rep0 = ensemble_diameter(spec, p, cfg, seeds[0], 100.0);
    CHECK(rep0.diameters.back() == dist(a.states.back(), b.states.back()));
    for (size_t j = 0; j < a.states.size(); ++j) {
        CHECK(a.states[j][1] > 0.0);
        CHECK(b.states[j][1] < 0.0);
    }
}

TEST_CASE("reports are bit-identical across runs and thread counts") {
    SystemParams p(2, 1, 2.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_stride = 1000;
    auto spec = EnsembleSpec::ball({0.0, 0.0}, 1.0, 16, true);
    auto r1 = ensemble_diameter(spec, p, cfg, 42, 10.0, 1);
    auto r8 = ensemble_diameter(spec, p, cfg, 42, 10.0, 8);
    CHECK(r1.diameters == r8.diameters);
    CHECK(r1.times == r8.times);

    auto b1 = pairwise_bound_check(p, cfg, 42, 50, 2.0, 1);
    auto b8 = pairwise_bound_check(p, cfg, 42, 50, 2.0, 8);
    CHECK(b1.max_at_half == b8.max_at_half);
    CHECK(b1.persistence_max == b8.persistence_max);
}

TEST_CASE("pullback diameter: fixed omega, receding start") {
    SystemParams p(2, 1, 2.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    auto spec = EnsembleSpec::ball({0.0, 0.0}, 1.0, 16, true);

    auto rep = pullback_diameter(spec, p, cfg, 3, {0.0, 5.0});
    auto xs0 = sample_ensemble(spec, p, 3);
    double initial = 0.0;
    for (size_t a = 0; a < xs0.size(); ++a)
        for (size_t b = a + 1; b < xs0.size(); ++b) initial = std::max(initial, dist(xs0[a], xs0[b]));
    CHECK(rep.diameters[0] == initial);

    // larger horizons reuse the same increments on shared cells
    auto one = pullback_diameter(spec, p, cfg, 3, {10.0});
    auto two = pullback_diameter(spec, p, cfg, 3, {5.0, 10.0});
    CHECK(one.diameters[0] == two.diameters[1]);

    // synchronizing regime: median diameter at time 0 shrinks as T grows
    std::vector<double> T_list{5.0, 10.0, 20.0, 40.0};
    std::vector<std::vector<double>> per_seed;
    for (uint64_t s : {1u, 2u, 3u, 4u, 5u})
        per_seed.push_back(pullback_diameter(spec, p, cfg, s, T_list).diameters);
    for (size_t t = 1; t < T_list.size(); ++t) {
        std::vector<double> prev, cur;
        for (const auto& ds : per_seed) {
            prev.push_back(ds[t - 1]);
            cur.push_back(ds[t]);
        }
        std::sort(prev.begin(), prev.end());
        std::sort(cur.begin(), cur.end());
        CHECK(cur[2] <= prev[2]);
    }

    CHECK_THROWS_AS(pullback_diameter(spec, p, cfg, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(pullback_diameter(spec, p, cfg, 1, {5.0, 5.0}), std::invalid_argument);
}

TEST_CASE("deterministic pullback settles on an arc, not a point") {
    SystemParams p(2, 2, 0.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    auto spec = EnsembleSpec::ball({0.0, 0.0}, 0.5, 16, false);
    auto members = sample_ensemble(spec, p, 9);

    // radial flow keeps angles fixed, so the limit set is the projection of
    // the members onto the unit circle
    double arc = 0.0;
    for (size_t a = 0; a < members.size(); ++a)
        for (size_t b = a + 1; b < members.size(); ++b) {
            Vec ua = members[a], ub = members[b];
            double na = norm(ua), nb = norm(ub);
            for (auto& c : ua) c /= na;
            for (auto& c : ub) c /= nb;
            arc = std::max(arc, dist(ua, ub));
        }
    REQUIRE(arc > 0.5);

    auto rep = pullback_diameter(spec, p, cfg, 9, {20.0, 40.0});
    CHECK(std::abs(rep.diameters.back() - arc) <= 1e-4);
    CHECK(std::abs(rep.diameters[0] - rep.diameters[1]) <= 1e-6);
    CHECK(rep.verdict != Verdict::synchronizing);
}

TEST_CASE("pairwise distance bound at t = 0.5 and beyond") {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    for (double sigma : {0.5, 2.0}) {
        SystemParams p(2, 1, sigma);
        auto rep = pairwise_bound_check(p, cfg, 7, 200, 2.0, 4);
        CHECK(rep.trials == 200);
        CHECK(rep.max_at_half <= 4.1);
        CHECK(rep.max_at_half > 0.0);
        CHECK(rep.persistence_max <= 4.0 * (1.0 + 50.0 * cfg.dt));
    }
    SystemParams p(2, 1, 1.0);
    CHECK_THROWS_AS(pairwise_bound_check(p, cfg, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_bound_check(p, cfg, 1, 10, 0.25), std::invalid_argument);
}

TEST_CASE("sigma scan produces one classified row per grid point") {
    SystemParams tmpl(2, 1, 1.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_stride = 5000;
    ScanOptions opt;
    opt.ensemble_count = 16;
    opt.mc_burn_in = 50.0;
    opt.mc_horizon = 300.0;
    opt.mc_trajectories = 4;
    opt.threads = 2;
    std::vector<uint64_t> seeds{1, 2, 3, 4, 5};

    auto rows = sync_scan({0.5, 2.0}, tmpl, cfg, seeds, 50.0, opt);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ok);
    CHECK(rows[1].ok);
    CHECK(rows[0].lambda_quad == doctest::Approx(0.14786384782166573).epsilon(1e-6));
    CHECK(rows[1].lambda_quad == doctest::Approx(-0.2904645432291842).epsilon(1e-6));
    CHECK(rows[0].verdict == Verdict::non_synchronizing);
    CHECK(rows[1].verdict == Verdict::synchronizing);
    CHECK(std::abs(rows[1].lambda_mc - rows[1].lambda_quad) <=
          3.0 * rows[1].lambda_mc_stderr + 0.05);

    // a failing sigma is reported in its row without aborting the scan
    auto with_bad = sync_scan({0.0, 2.0}, tmpl, cfg, seeds, 1.0, opt);
    REQUIRE(with_bad.size() == 2);
    CHECK(!with_bad[0].ok);
    CHECK(!with_bad[0].error.empty());
    CHECK(with_bad[1].ok);

    CHECK_THROWS_AS(sync_scan({2.0, 0.5}, tmpl, cfg, seeds, 1.0, opt), std::invalid_argument);
    CHECK_THROWS_AS(sync_scan({}, tmpl, cfg, seeds, 1.0, opt), std::invalid_argument);
}
