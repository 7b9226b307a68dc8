#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxsum/condition_checker.hpp"
#include "maxsum/presets.hpp"

#include <cmath>

using namespace maxsum;
using doctest::Approx;

TEST_CASE("condition D classification") {
    SUBCASE("drift only") {
        auto ch = LimitCharacteristics::make(TailFunction::gumbel(), {}, 0.0, 0.0, 1.0);
        auto cls = classify_condition_D(ch);
        CHECK(cls.D);
        CHECK(cls.D1);
        CHECK(!cls.D2);
        CHECK(cls.V.all);
    }
    SUBCASE("single kappa atom, no drift") {
        JointJumpMeasure m;
        m.add_atom({false, 0.0, 0.0, 1.0, 0.7});
        auto ch = LimitCharacteristics::make(TailFunction::gumbel(), m, 0.0, 0.0, 0.0);
        auto cls = classify_condition_D(ch);
        CHECK(cls.D);
        CHECK(!cls.D1);
        CHECK(cls.D2);
        CHECK(!cls.V.all);
        // V-bar is the integer lattice {1, 2, 3, ...}
        CHECK(!cls.V.contains(1.0));
        CHECK(!cls.V.contains(2.0));
        CHECK(!cls.V.contains(3.0));
        CHECK(cls.V.contains(0.5));
        CHECK(cls.V.contains(2.5));
    }
    SUBCASE("two generators") {
        JointJumpMeasure m;
        m.add_atom({false, 0.0, 0.0, 1.0, 0.5});
        m.add_atom({false, 0.0, 0.0, 2.5, 0.5});
        auto ch = LimitCharacteristics::make(TailFunction::gumbel(), m, 0.0, 0.0, 0.0);
        auto cls = classify_condition_D(ch);
        CHECK(!cls.V.contains(3.5)); // 1 + 2.5
        CHECK(!cls.V.contains(4.5)); // 2 + 2.5
        CHECK(cls.V.contains(0.7));
        CHECK(cls.V.contains(2.2));
    }
    SUBCASE("trivial kappa") {
        auto ch = LimitCharacteristics::make(TailFunction::gumbel(), {}, 0.0, 0.0, 0.0);
        CHECK(!classify_condition_D(ch).D);
    }
    SUBCASE("infinite activity near zero") {
        auto pre = make_preset("example1");
        auto cls = classify_condition_D(pre.chars);
        CHECK(cls.D);
        CHECK(cls.D1); // Pi_3((v, inf)) -> inf
        CHECK(!cls.D2);
        CHECK(cls.V.all);
    }
    SUBCASE("a kappa drift rules out the compound-Poisson condition") {
        auto pre = make_preset("independence"); // c = 0.3
        CHECK(!classify_condition_D(pre.chars).D2);
    }
    SUBCASE("empirical D2 check against a matching model") {
        // pure compound-Poisson kappa: Bernoulli(1.2/n) jumps, no drift
        ArrayModel model;
        model.n_grid = {100}; // keeps the rare-event SE tight at this sample size
        model.draw = [](long n, RngStream& rng) {
            double r = rng.uniform() * static_cast<double>(n);
            double kappa = r < 0.8 ? 0.5 : (r < 1.2 ? 0.2 : 0.0);
            return TripleSample{0.0, 0.0, kappa};
        };
        JointJumpMeasure m;
        m.add_atom({false, 0.0, 0.0, 0.5, 0.8});
        m.add_atom({false, 0.0, 0.0, 0.2, 0.4});
        auto chars = LimitCharacteristics::make(TailFunction::zero_above(0.0), m, 0.0, 0.0, 0.0);
        RngStream rng(5);
        auto cls = classify_condition_D(chars, model, 40000, rng);
        CHECK(cls.D2);
        // a mismatched model (half the jump rate) flips the empirical check
        ArrayModel wrong = model;
        wrong.draw = [](long n, RngStream& rng) {
            double r = rng.uniform() * static_cast<double>(n);
            return TripleSample{0.0, 0.0, r < 0.6 ? 0.5 : 0.0};
        };
        RngStream rng2(6);
        CHECK(!classify_condition_D(chars, wrong, 40000, rng2).D2);
    }
}

TEST_CASE("condition A on exact-tail families") {
    CheckSettings st;
    st.samples_per_eps = 20000;
    RngStream rng(11);

    SUBCASE("gaussian_domain has an exact Frechet(1) tail at every n") {
        auto pre = make_preset("gaussian_domain");
        auto sec = check_condition_A(pre.model, pre.chars, pre.u_grid, st, rng);
        CHECK(sec.pass);
        for (const auto& row : sec.rows) CHECK(row.abs_err <= 1e-12);
    }
    SUBCASE("deterministic zero max passes exactly") {
        auto pre = make_preset("deterministic");
        auto sec = check_condition_A(pre.model, pre.chars, {0.5, 1.0, 2.0}, st, rng);
        CHECK(sec.pass);
        for (const auto& row : sec.rows) CHECK(row.abs_err == 0.0);
    }
    SUBCASE("mismatched tail fails, and loosening the tolerance flips it back") {
        auto pre = make_preset("gaussian_domain");
        auto wrong = LimitCharacteristics::make(TailFunction::frechet(0.5), {}, 0.0, 1.0, 1.0);
        auto sec = check_condition_A(pre.model, wrong, {2.0, 4.0}, st, rng);
        CHECK(!sec.pass);
        CheckSettings loose = st;
        loose.tol_rel = 2.0;
        auto sec2 = check_condition_A(pre.model, wrong, {2.0, 4.0}, loose, rng);
        CHECK(sec2.pass); // verdicts are monotone in tolerance
    }
    SUBCASE("grid points at tail discontinuities are rejected") {
        auto pre = make_preset("deterministic");
        CHECK_THROWS_AS(check_condition_A(pre.model, pre.chars, {0.0}, st, rng),
                        std::invalid_argument);
    }
    SUBCASE("centered identical pareto converges at the analytic rate") {
        auto pre = make_preset("identical_pareto");
        auto sec = check_condition_A(pre.model, pre.chars, {1.0, 2.0}, st, rng);
        CHECK(sec.pass);
    }
}

TEST_CASE("analytic and Monte Carlo tails agree within five standard errors") {
    auto pre = make_preset("gaussian_domain");
    CheckSettings st;
    st.samples_per_eps = 30000;
    RngStream r1(21), r2(21);
    auto analytic = check_condition_A(pre.model, pre.chars, {0.5, 1.0, 2.0}, st, r1);
    ArrayModel mc_model = pre.model;
    mc_model.tail = nullptr;
    auto mc = check_condition_A(mc_model, pre.chars, {0.5, 1.0, 2.0}, st, r2);
    REQUIRE(analytic.rows.size() == mc.rows.size());
    for (std::size_t i = 0; i < mc.rows.size(); ++i) {
        // the SE under the true tail probability (the estimated one collapses
        // when a rare-event cell records no hits)
        double n = static_cast<double>(mc.rows[i].n_eps);
        double p = analytic.rows[i].empirical / n;
        double se = std::max(mc.rows[i].mc_se,
                             n * std::sqrt(p * (1.0 - p) / static_cast<double>(st.samples_per_eps)));
        CHECK(std::abs(analytic.rows[i].empirical - mc.rows[i].empirical) <= 5.0 * se);
    }
}

TEST_CASE("condition B on the gaussian domain family") {
    auto pre = make_preset("gaussian_domain");
    CheckSettings st;
    st.samples_per_eps = 50000;
    RngStream rng(31);
    auto secs = check_condition_B(pre.model, pre.chars, pre.v_grid, pre.w_grid, st, rng);
    REQUIRE(secs.size() == 4);
    for (const auto& sec : secs) {
        INFO(sec.name, " ", sec.note);
        CHECK(sec.pass);
    }
    // B(d) final estimate at the largest n sits within 0.05 of b^2 = 1
    for (const auto& row : secs[3].rows)
        if (row.n_eps == 10000 && row.probe.rfind("var v=", 0) == 0)
            CHECK(std::abs(row.empirical - 1.0) <= 0.05);
}

TEST_CASE("condition B on the centered identical pareto family") {
    auto pre = make_preset("identical_pareto");
    CheckSettings st;
    st.samples_per_eps = 50000;
    RngStream rng(37);
    auto secs = check_condition_B(pre.model, pre.chars, pre.v_grid, pre.w_grid, st, rng);
    for (const auto& sec : secs) {
        INFO(sec.name, " ", sec.note);
        CHECK(sec.pass);
    }
    // analytic truncated means make B(b) rows exact against a(v) up to the
    // epsilon truncation bias
    for (const auto& row : secs[1].rows)
        if (row.n_eps == 10000) CHECK(row.abs_err <= 0.02 * std::abs(row.target) + 0.01);
}

TEST_CASE("condition B grid/atom collisions are rejected") {
    JointJumpMeasure m;
    m.add_atom({false, 0.0, 1.0, 0.5, 0.3});
    auto chars = LimitCharacteristics::make(TailFunction::gumbel(), m, 0.0, 0.0, 0.0);
    auto pre = make_preset("gaussian_domain");
    CheckSettings st;
    RngStream rng(41);
    CHECK_THROWS_AS(check_condition_B(pre.model, chars, {1.0}, {0.7}, st, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_condition_B(pre.model, chars, {0.7}, {0.5}, st, rng),
                    std::invalid_argument);
}

TEST_CASE("condition C") {
    CheckSettings st;
    st.samples_per_eps = 60000;
    RngStream rng(43);

    SUBCASE("independent components carry no joint exceedance mass") {
        auto pre = make_preset("gaussian_domain");
        auto sec = check_condition_C(pre.model, pre.chars, {0.5, 1.0}, st, rng);
        CHECK(sec.pass);
        for (const auto& row : sec.rows) CHECK(row.target == 0.0);
    }
    SUBCASE("identical components match the shifted-curve targets") {
        auto pre = make_preset("identical_pareto");
        st.n_grid = {100, 1000};
        st.samples_per_eps = 150000;
        auto sec = check_condition_C(pre.model, pre.chars, {1.0}, st, rng);
        INFO(sec.note);
        CHECK(sec.pass);
        bool some_nonzero = false;
        for (const auto& row : sec.rows) some_nonzero |= std::abs(row.target) > 0.05;
        CHECK(some_nonzero);
    }
    SUBCASE("u at or below u_pi is rejected") {
        auto pre = make_preset("identical_pareto");
        CHECK_THROWS_AS(check_condition_C(pre.model, pre.chars, {0.0}, st, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("full report is reproducible under a fixed seed") {
    auto pre = make_preset("gaussian_domain");
    CheckSettings st;
    st.samples_per_eps = 5000;
    st.n_grid = {100, 1000};
    auto r1 = check_all_conditions(pre.model, pre.chars, {0.5, 1.0}, {0.5}, {0.5}, st, 777);
    auto r2 = check_all_conditions(pre.model, pre.chars, {0.5, 1.0}, {0.5}, {0.5}, st, 777);
    REQUIRE(r1.sections.size() == r2.sections.size());
    for (std::size_t i = 0; i < r1.sections.size(); ++i) {
        REQUIRE(r1.sections[i].rows.size() == r2.sections[i].rows.size());
        for (std::size_t j = 0; j < r1.sections[i].rows.size(); ++j) {
            CHECK(r1.sections[i].rows[j].empirical == r2.sections[i].rows[j].empirical);
            CHECK(r1.sections[i].rows[j].mc_se == r2.sections[i].rows[j].mc_se);
        }
    }
    CHECK(r1.all_pass() == r2.all_pass());
}

TEST_CASE("tolerance function is scale-aware and monotone") {
    CheckSettings st;
    CHECK(check_tolerance(st, 10.0, 0.0) == Approx(0.2));
    CHECK(check_tolerance(st, 0.0, 0.1) == Approx(0.305));
    CHECK(check_tolerance(st, 5.0, 0.2) >= check_tolerance(st, 5.0, 0.1));
    CHECK(check_tolerance(st, 5.0, 0.1) >= check_tolerance(st, 2.0, 0.1));
}
