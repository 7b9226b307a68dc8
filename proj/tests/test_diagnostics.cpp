#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxsum/diagnostics.hpp"
#include "maxsum/presets.hpp"

#include <algorithm>
#include <cmath>

using namespace maxsum;
using doctest::Approx;

TEST_CASE("ks distance basics and the simulated null quantile") {
    CHECK(ks_distance({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK(ks_distance({1.0, 2.0}, {5.0, 6.0}) == 1.0);
    CHECK_THROWS_AS(ks_distance({}, {1.0}), std::domain_error);

    // simulate the null distribution of the one-sample KS statistic and
    // check the 1% quantile against the classical 1.63/sqrt(N) value
    RngStream rng(1);
    const int N = 400, reps = 600;
    std::vector<double> stats;
    for (int r = 0; r < reps; ++r) {
        RngStream child = rng.child(r);
        std::vector<double> xs(N);
        for (auto& x : xs) x = child.uniform();
        stats.push_back(ks_distance_to_cdf(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }));
    }
    std::sort(stats.begin(), stats.end());
    double q99 = stats[static_cast<std::size_t>(0.99 * reps)];
    double expected = 1.628 / std::sqrt(static_cast<double>(N));
    CHECK(q99 == Approx(expected).epsilon(0.12));
    // a typical draw sits below the 1% critical value
    CHECK(stats[reps / 2] <= expected);
}

TEST_CASE("ks distance is a metric on empirical distributions") {
    RngStream rng(7);
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<double> a(50), b(50), c(50);
        for (auto& x : a) x = rng.normal();
        for (auto& x : b) x = rng.normal() + 0.3;
        for (auto& x : c) x = rng.uniform(-1.0, 2.0);
        double dab = ks_distance(a, b), dba = ks_distance(b, a);
        CHECK(dab == Approx(dba).epsilon(1e-12));
        CHECK(ks_distance(a, c) <= dab + ks_distance(b, c) + 1e-12);
        CHECK(dab >= 0.0);
    }
}

TEST_CASE("empirical characteristic function") {
    std::vector<std::array<double, 2>> one{{0.7, 0.2}};
    auto v = empirical_charfn(one, 1.3, -0.4);
    CHECK(std::abs(v) == Approx(1.0));
    CHECK(v.real() == Approx(std::cos(1.3 * 0.7 - 0.4 * 0.2)));
    CHECK(empirical_charfn(one, 0.0, 0.0) == std::complex<double>{1.0, 0.0});

    RngStream rng(3);
    std::vector<std::array<double, 2>> sym;
    for (int i = 0; i < 20000; ++i) {
        double g = rng.normal();
        sym.push_back({g, 0.0});
    }
    CHECK(std::abs(empirical_charfn(sym, 0.9, 0.0).imag()) <= 3.0 / std::sqrt(20000.0));
    CHECK_THROWS_AS(empirical_charfn({}, 0.0, 0.0), std::domain_error);
}

TEST_CASE("convergence sweep on the deterministic pair is exact") {
    auto pre = make_preset("deterministic");
    SweepSpec spec;
    spec.functional = StoppedFunctional::xi;
    spec.t = 1.0;
    spec.n_per_eps = 200;
    spec.n_grid = {10, 100};
    spec.final_tol = 1e-12;
    spec.sampling_floor = 0.0;
    auto res = convergence_sweep(pre.model, pre.chars, pre.sampling_chars, spec, 99);
    CHECK(res.pass());
    for (double d : res.distance) CHECK(d == 0.0);
}

TEST_CASE("convergence sweep: example2 stopped max approaches its limit") {
    auto pre = make_preset("example2");
    SweepSpec spec;
    spec.functional = StoppedFunctional::xi;
    spec.stopped = true;
    spec.t = 1.0;
    spec.n_grid = {100, 1000};
    spec.n_per_eps = 3000;
    spec.final_tol = 0.06;
    auto res = convergence_sweep(pre.model, pre.chars, pre.sampling_chars, spec, 4242);
    INFO(res.distance[0], " -> ", res.distance[1]);
    CHECK(res.pass());
}

TEST_CASE("convergence sweep rejects t outside V in stopped mode") {
    JointJumpMeasure m;
    m.add_atom({false, 0.0, 0.0, 1.0, 0.7});
    auto chars = LimitCharacteristics::make(TailFunction::zero_above(0.0), m, 0.0, 0.0, 0.0);
    ArrayModel model = make_preset("deterministic").model;
    SweepSpec spec;
    spec.t = 2.0; // in the lattice generated by the unit atom
    CHECK_THROWS_AS(convergence_sweep(model, chars, nullptr, spec, 1), std::invalid_argument);
}

TEST_CASE("j-compactness probe") {
    SUBCASE("deterministic paths never exceed the modulus threshold") {
        auto pre = make_preset("deterministic");
        auto res = j_compactness_probe(pre.model, {100, 1000}, {0.01, 0.05}, 0.5, 2.0, 0.1, 100, 5);
        for (const auto& cell : res.cells) CHECK(cell.exceed == 0);
        CHECK(res.verdict);
    }
    SUBCASE("table is monotone in c at fixed n") {
        auto pre = make_preset("risk");
        auto res =
            j_compactness_probe(pre.model, {1000}, {0.005, 0.02, 0.08}, 0.5, 2.0, 0.1, 300, 11);
        REQUIRE(res.cells.size() == 3);
        CHECK(res.cells[0].exceed <= res.cells[1].exceed);
        CHECK(res.cells[1].exceed <= res.cells[2].exceed);
    }
}

TEST_CASE("theta inclusion on stopping paths") {
    auto pre = make_preset("example2");
    auto res = theta_inclusion_check(pre.model, 200, 0.05, 0.5, 2.0, 300, 17);
    CHECK(res.paths == 300);
    CHECK(res.dj_positive > 0);      // fine stopping grids oscillate
    CHECK(res.violations == 0);      // every such path has theta <= c
}

TEST_CASE("independence probe") {
    SUBCASE("constant sum component") {
        std::vector<std::array<double, 3>> s;
        RngStream rng(23);
        for (int i = 0; i < 2000; ++i) s.push_back({rng.uniform(), 1.0, rng.uniform()});
        auto r = independence_probe(s, 0.5);
        CHECK(!r.degenerate);
        CHECK(r.corr_gamma == 0.0);
    }
    SUBCASE("degenerate indicator reports NA") {
        std::vector<std::array<double, 3>> s;
        for (int i = 0; i < 100; ++i) s.push_back({0.0, 1.0 * i, 0.5});
        auto r = independence_probe(s, 5.0);
        CHECK(r.degenerate);
    }
    SUBCASE("independent hybrid samples decorrelate") {
        auto pre = make_preset("independence");
        HybridSampleConfig cfg;
        cfg.chars = pre.chars;
        cfg.horizon = 1.0;
        cfg.initial_max = 0.0;
        cfg.initial_max_set = true;
        RngStream rng(29);
        std::vector<std::array<double, 3>> s;
        for (int i = 0; i < 12000; ++i) {
            RngStream child = rng.child(i);
            s.push_back(sample_hybrid(cfg, child).eval(1.0));
        }
        auto r = independence_probe(s, 1.5);
        CHECK(std::abs(r.corr_gamma) <= 0.03);
        CHECK(std::abs(r.corr_kappa) <= 0.03);
    }
    SUBCASE("identical components correlate strongly") {
        auto pre = make_preset("identical_pareto");
        auto samp = pre.sampling_chars(0.3); // fewer tiny jumps, sharper coupling
        HybridSampleConfig cfg;
        cfg.chars = samp;
        cfg.horizon = 1.0;
        cfg.initial_max = 0.3;
        cfg.initial_max_set = true;
        RngStream rng(31);
        std::vector<std::array<double, 3>> s;
        std::vector<double> xis;
        for (int i = 0; i < 8000; ++i) {
            RngStream child = rng.child(i);
            s.push_back(sample_hybrid(cfg, child).eval(1.0));
            xis.push_back(s.back()[0]);
        }
        std::sort(xis.begin(), xis.end());
        double median = xis[xis.size() / 2];
        auto r = independence_probe(s, median);
        CHECK(r.corr_gamma >= 0.3);
    }
}

TEST_CASE("conditional decomposition probe: quadrature against the factorized limit") {
    auto pre = make_preset("identical_pareto");
    auto res = conditional_decomposition_probe(pre.model, pre.chars, {100, 1000}, 1.0, 0.3, 0.2);
    INFO("errors: ", res.error[0], " ", res.error[1], " target |.| = ", std::abs(res.target));
    CHECK(res.nonincreasing);
    CHECK(res.final_error <= 0.2);
    CHECK(std::abs(res.target) > 0.05); // the target is a genuine complex number
    CHECK(std::abs(res.target) <= 1.0);
}

TEST_CASE("sweep determinism") {
    auto pre = make_preset("example2");
    SweepSpec spec;
    spec.n_grid = {100};
    spec.n_per_eps = 500;
    auto r1 = convergence_sweep(pre.model, pre.chars, pre.sampling_chars, spec, 321);
    auto r2 = convergence_sweep(pre.model, pre.chars, pre.sampling_chars, spec, 321);
    CHECK(r1.distance == r2.distance);
}
