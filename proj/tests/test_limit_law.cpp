#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxsum/limit_law.hpp"
#include "maxsum/quadrature.hpp"

#include <cmath>
#include <complex>
#include <limits>

using namespace maxsum;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// identical-components Pareto(alpha) jump curve: atoms on (v, 0) with
// intensity alpha v^{-alpha-1} dv, marked by v itself
CurveComponent pareto_identical_curve(double alpha, double p_lo, double p_hi = kInf) {
    CurveComponent c;
    c.p_lo = p_lo;
    c.p_hi = p_hi;
    c.intensity = [alpha](double p) { return alpha * std::pow(p, -alpha - 1.0); };
    c.tail_mass = [alpha](double x) { return std::pow(x, -alpha); };
    c.tail_inverse = [alpha](double m) { return std::pow(m, -1.0 / alpha); };
    c.v1 = 1.0;
    c.marked = true;
    c.m1 = 1.0;
    return c;
}

LimitCharacteristics identical_pareto_chars(double alpha, double p_lo) {
    JointJumpMeasure jumps;
    jumps.add_curve(pareto_identical_curve(alpha, p_lo));
    // closed form for alpha = 1.5: a = -1.5 * pi / sqrt(2)
    double a = -alpha * quad::integrate(
                           [alpha](double s) { return std::pow(s, 1.0 - alpha) / (1.0 + s * s); },
                           0.0, kInf, 1e-12);
    return LimitCharacteristics::make(TailFunction::frechet(alpha), std::move(jumps), a, 0.0, 1.0);
}

} // namespace

TEST_CASE("tail function families and boundary conventions") {
    auto fr = TailFunction::frechet(1.0);
    CHECK(fr(2.0) == 0.5);
    CHECK(fr(1e-12) == Approx(1e12));
    CHECK(fr(0.0) == kInf);
    CHECK(fr(-1.0) == kInf);
    CHECK(fr(kInf) == 0.0);
    CHECK(fr.u_pi() == 0.0);
    CHECK(fr.v_pi() == kInf);

    auto gu = TailFunction::gumbel();
    CHECK(gu(0.0) == 1.0);
    CHECK(gu(kInf) == 0.0);
    CHECK(gu.u_pi() == -kInf);

    auto nw = TailFunction::neg_weibull(2.0, 1.0);
    CHECK(nw(0.0) == 1.0);
    CHECK(nw(1.0) == 0.0);
    CHECK(nw(2.0) == 0.0);
    CHECK(nw.v_pi() == 1.0);

    auto za = TailFunction::zero_above(0.0);
    CHECK(za(-0.5) == kInf);
    CHECK(za(0.0) == 0.0);
    CHECK(za(1.0) == 0.0);
    CHECK(za.u_pi() == 0.0);

    auto tab = TailFunction::from_mark_masses({{1.0, 0.6}, {2.0, 0.3}, {3.0, 0.1}}, 0.0);
    CHECK(tab(-0.5) == kInf);
    CHECK(tab(0.0) == Approx(1.0));
    CHECK(tab(0.99) == Approx(1.0));
    CHECK(tab(1.0) == Approx(0.4));
    CHECK(tab(2.5) == Approx(0.1));
    CHECK(tab(3.0) == 0.0);
    CHECK(tab.u_pi() == 0.0);
    CHECK(tab.v_pi() == 3.0);
    CHECK(!tab.is_continuity_point(1.0));
    CHECK(tab.is_continuity_point(1.5));

    // inverse: smallest u with pi(u) <= q
    CHECK(fr.inverse(0.5) == Approx(2.0));
    CHECK(tab.inverse(0.4) == 1.0);
    CHECK(tab.inverse(0.35) == 2.0);
    CHECK(tab.inverse(1.0) == 0.0);
}

TEST_CASE("extremal finite-dimensional distributions") {
    JointJumpMeasure empty;
    auto unit = LimitCharacteristics::make(TailFunction::frechet(1.0), empty, 0.0, 0.0, 0.0);
    // n = 1, pi1(u) = 1 at u = 1, t = 1
    CHECK(extremal_fdd(unit, {1.0}, {1.0}) == Approx(std::exp(-1.0)).epsilon(1e-12));
    // equal levels telescope
    CHECK(extremal_fdd(unit, {0.4, 1.7}, {2.0, 2.0}) ==
          Approx(std::exp(-0.5 * 1.7)).epsilon(1e-12));
    // Frechet(1), times (0.5, 1), levels (1, 2): exp(-1*0.5) * exp(-0.5*0.5)
    CHECK(extremal_fdd(unit, {0.5, 1.0}, {1.0, 2.0}) == Approx(std::exp(-0.75)).epsilon(1e-12));
    // monotone reduction: a later lower level caps earlier ones
    CHECK(extremal_fdd(unit, {0.5, 1.0}, {5.0, 1.0}) ==
          extremal_fdd(unit, {0.5, 1.0}, {1.0, 1.0}));
    // level below u_pi has pi1 = inf
    CHECK(extremal_fdd(unit, {1.0}, {-1.0}) == 0.0);
    CHECK_THROWS_AS(extremal_fdd(unit, {1.0, 0.5}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("transition kernel") {
    JointJumpMeasure empty;
    auto ch = LimitCharacteristics::make(TailFunction::frechet(1.0), empty, 0.0, 0.0, 0.0);
    CHECK(transition_kernel(ch, 3.0, 2.0, 1.0) == 0.0);
    CHECK(transition_kernel(ch, 1.0, 2.0, 0.0) == 1.0);
    // pi1(u) = 2 at u = 0.5 for Frechet(1); t = 0.5
    CHECK(transition_kernel(ch, 0.2, 0.5, 0.5) == Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("levy characteristic function") {
    JointJumpMeasure empty;
    auto gauss = LimitCharacteristics::make(TailFunction::gumbel(), empty, 0.0, 1.0, 0.0);
    CHECK(levy_charfn(gauss, 1.0, 0.0, 0.0) == std::complex<double>{1.0, 0.0});
    CHECK(levy_charfn(gauss, 1.0, 1.0, 0.0).real() == Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(levy_charfn(gauss, 1.0, 1.0, 0.0).imag() == Approx(0.0));

    JointJumpMeasure cp;
    cp.add_atom({false, 0.0, 1.0, 1.0, 1.0});
    cp.add_atom({false, 0.0, -1.0, 1.0, 1.0});
    auto ch = LimitCharacteristics::make(TailFunction::gumbel(), cp, 0.3, 0.5, 0.2);

    SUBCASE("modulus bounded by one and semigroup in t") {
        for (double y : {-1.0, 0.0, 0.7, 2.0})
            for (double z : {-0.5, 0.0, 1.3}) {
                auto f1 = levy_charfn(ch, 0.7, y, z);
                auto f2 = levy_charfn(ch, 1.1, y, z);
                auto f12 = levy_charfn(ch, 1.8, y, z);
                CHECK(std::abs(f1) <= 1.0 + 1e-12);
                CHECK(std::abs(f12 - f1 * f2) <= 1e-10);
            }
    }
    SUBCASE("d is derived from c by the marginal constant relation") {
        CHECK(ch.d == Approx(0.2 + 2.0 * (1.0 / 2.0)).epsilon(1e-12));
        double q = quad::integrate([](double) { return 0.0; }, 0.0, 1.0);
        (void)q;
        CHECK(std::abs(ch.d - ch.c - ch.jumps.int_w_over_1pw2()) <= 1e-10);
    }
}

TEST_CASE("exceedance decomposition") {
    SUBCASE("no exceedance mass above v_pi") {
        JointJumpMeasure m;
        m.add_atom({true, 1.0, 0.5, 0.0, 0.7});
        auto tail = TailFunction::from_mark_masses({{1.0, 0.7}}, 0.0);
        auto ch = LimitCharacteristics::make(tail, m, 0.4, 0.0, 0.1);
        auto dec = exceedance_decomposition(ch, 2.0);
        CHECK(dec.pi_u.empty());
        CHECK(dec.a_u == ch.a);
        CHECK(dec.d_u == ch.d);
    }
    SUBCASE("independence structure never shifts the constants") {
        JointJumpMeasure m;
        m.add_atom({true, 1.0, 0.0, 0.0, 0.6}); // pure-mark atoms
        m.add_atom({true, 2.0, 0.0, 0.0, 0.4});
        m.add_atom({false, 0.0, 1.0, 0.5, 0.8}); // unmarked sum jumps
        auto tail = TailFunction::from_mark_masses({{1.0, 0.6}, {2.0, 0.4}}, -1.0);
        auto ch = LimitCharacteristics::make(tail, m, 0.25, 0.0, 0.0);
        for (double u : {-0.5, 0.7, 1.5, 3.0}) {
            auto dec = exceedance_decomposition(ch, u);
            CHECK(dec.a_u == Approx(ch.a).epsilon(1e-14));
            CHECK(dec.d_u == Approx(ch.d).epsilon(1e-14));
            for (double y : {-1.0, 0.4})
                for (double z : {0.0, 0.9}) {
                    auto lhs = conditional_charfn(ch, u, 1.0, y, z);
                    auto rhs = levy_charfn(ch, 1.0, y, z);
                    CHECK(std::abs(lhs - rhs) <= 1e-10);
                }
        }
    }
    SUBCASE("identical components restrict the curve at u or v") {
        auto ch = identical_pareto_chars(1.5, 1e-6);
        for (double u : {0.5, 1.0, 2.0})
            for (double x : {0.25, 1.0, 3.0}) {
                auto dec = exceedance_decomposition(ch, u);
                CHECK(dec.pi_u.mass_v_abs_above(x) ==
                      Approx(std::pow(std::max(u, x), -1.5)).epsilon(1e-12));
            }
    }
    SUBCASE("admissibility proviso") {
        auto ch = identical_pareto_chars(1.5, 1e-6);
        CHECK_THROWS_AS(exceedance_decomposition(ch, -1.0), std::domain_error);
        CHECK_THROWS_AS(exceedance_decomposition(ch, 0.0), std::domain_error); // pi1(0) = inf
        auto tail = TailFunction::from_mark_masses({{1.0, 1.0}}, 0.0);
        JointJumpMeasure m;
        m.add_atom({true, 1.0, 1.0, 0.0, 1.0});
        auto ch2 = LimitCharacteristics::make(tail, m, 0.0, 0.0, 0.0);
        CHECK_NOTHROW(exceedance_decomposition(ch2, 0.0)); // pi1(u_pi) finite here
    }
    SUBCASE("hat measure masses are the exact complements") {
        JointJumpMeasure m;
        m.add_atom({true, 1.0, 0.5, 0.2, 0.6});
        m.add_atom({true, 2.0, -0.4, 0.0, 0.3});
        m.add_atom({false, 0.0, 1.0, 1.0, 0.5});
        auto tail = TailFunction::from_mark_masses({{1.0, 0.6}, {2.0, 0.3}}, 0.0);
        auto ch = LimitCharacteristics::make(tail, m, 0.0, 0.0, 0.0);
        for (double u : {0.5, 1.0, 1.5, 2.5}) {
            auto dec = exceedance_decomposition(ch, u);
            CHECK(dec.pi_u.total_mass() + dec.hat_pi_u.total_mass() ==
                  Approx(m.total_mass()).epsilon(1e-14));
        }
    }
}

TEST_CASE("conditional characteristic function boundaries") {
    auto ch = identical_pareto_chars(1.5, 1e-6);
    CHECK(conditional_charfn(ch, -1.0, 1.0, 0.4, 0.2) == std::complex<double>{1.0, 0.0});
    CHECK(conditional_charfn(ch, 0.0, 1.0, 0.4, 0.2) == std::complex<double>{1.0, 0.0});
    CHECK(conditional_charfn(ch, 1.0, 1.0, 0.0, 0.0) == std::complex<double>{1.0, 0.0});
    auto f = conditional_charfn(ch, 1.0, 1.0, 0.4, 0.2);
    CHECK(std::abs(f) <= 1.0 + 1e-12);
    // semigroup at fixed u
    auto f1 = conditional_charfn(ch, 1.0, 0.6, 0.4, 0.2);
    auto f2 = conditional_charfn(ch, 1.0, 0.9, 0.4, 0.2);
    auto f12 = conditional_charfn(ch, 1.0, 1.5, 0.4, 0.2);
    CHECK(std::abs(f12 - f1 * f2) <= 1e-10);
}

TEST_CASE("hybrid kernel reductions") {
    auto ch = identical_pareto_chars(1.5, 1e-6);
    CHECK(hybrid_kernel(ch, 2.0, 1.0, 1.0, 0.4, 0.2) == std::complex<double>{0.0, 0.0});
    auto at_zero = hybrid_kernel(ch, 0.5, 1.0, 0.7, 0.0, 0.0);
    CHECK(at_zero.real() == Approx(transition_kernel(ch, 0.5, 1.0, 0.7)).epsilon(1e-12));
    CHECK(at_zero.imag() == 0.0);

    // independence: kernel factorizes into exp(-t pi1(u)) levy_charfn
    JointJumpMeasure m;
    m.add_atom({true, 1.0, 0.0, 0.0, 1.0});
    m.add_atom({false, 0.0, 0.8, 0.3, 0.6});
    auto tail = TailFunction::from_mark_masses({{1.0, 1.0}}, 0.0);
    auto ind = LimitCharacteristics::make(tail, m, 0.1, 0.2, 0.1);
    for (double u : {0.5, 1.5}) {
        auto k = hybrid_kernel(ind, 0.0, u, 1.0, 0.4, -0.3);
        auto expd = std::exp(-ind.tail(u)) * levy_charfn(ind, 1.0, 0.4, -0.3);
        CHECK(std::abs(k - expd) <= 1e-10);
    }
}

TEST_CASE("constant relations for the identical-components Pareto family") {
    auto ch = identical_pareto_chars(1.5, 1e-8);
    // closed forms: a = -1.5 pi / sqrt(2), a(v) = -3 / sqrt(v)
    CHECK(ch.a == Approx(-1.5 * 3.14159265358979323846 / std::sqrt(2.0)).epsilon(1e-9));
    for (double v : {0.25, 0.5, 1.0, 2.0, 4.0})
        CHECK(ch.a_of_v(v) == Approx(-3.0 / std::sqrt(v)).epsilon(1e-7));
    // c_of_w on a kappa-free measure is flat
    CHECK(ch.c_of_w(0.5) == Approx(ch.c));
}

TEST_CASE("a^(u) two-route identity (truncated-mean chain)") {
    auto ids = identical_pareto_chars(1.5, 1e-8);
    JointJumpMeasure risk;
    // marked curve with joint (v, w) content plus an unmarked claim branch
    CurveComponent k = pareto_identical_curve(2.0, 0.05);
    k.v0 = 0.0;
    k.v1 = 0.8;
    k.w0 = 0.0;
    k.w1 = 1.0;
    k.m0 = 0.0;
    k.m1 = 0.8;
    risk.add_curve(k);
    CurveComponent cl = pareto_identical_curve(2.5, 0.1);
    cl.marked = false;
    cl.v1 = -1.0;
    cl.w1 = 0.0;
    risk.add_curve(cl);
    auto rch = LimitCharacteristics::make(TailFunction::frechet(2.0), risk, -0.2, 0.0, 0.5);

    for (const auto& ch : {ids, rch})
        for (double u : {0.5, 1.0, 2.0, 4.0})
            for (double v : {0.5, 2.0}) {
                auto dec = exceedance_decomposition(ch, u);
                double direct = dec.a_u;
                double chained = a_u_via_truncation(ch, u, v);
                CHECK(direct == Approx(chained).epsilon(1e-8));
            }
}

TEST_CASE("measure bound estimates on atom-generated sets") {
    JointJumpMeasure m;
    m.add_atom({true, 1.0, 0.5, 0.2, 0.6});
    m.add_atom({true, 2.0, -0.4, 0.1, 0.3});
    m.add_atom({true, 3.0, 1.2, 0.0, 0.1});
    m.add_atom({false, 0.0, 1.0, 1.0, 0.5});
    auto tail = TailFunction::from_mark_masses({{1.0, 0.6}, {2.0, 0.3}, {3.0, 0.1}}, 0.0);
    auto ch = LimitCharacteristics::make(tail, m, 0.0, 0.0, 0.0);
    std::vector<double> grid{0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.5};
    for (double u1 : grid)
        for (double u2 : grid) {
            if (u2 < u1) continue;
            auto d1 = ch.jumps.restrict_mark_above(u1);
            auto d2 = ch.jumps.restrict_mark_above(u2);
            // per-atom sets and the whole space
            for (std::size_t k = 0; k < m.atoms().size() + 1; ++k) {
                auto mass_in = [&](const JointJumpMeasure& mm) {
                    if (k == m.atoms().size()) return mm.total_mass();
                    double s = 0.0;
                    const Atom& target = m.atoms()[k];
                    for (const auto& a : mm.atoms())
                        if (a.v == target.v && a.w == target.w && a.mark == target.mark)
                            s += a.mass;
                    return s;
                };
                double lhs = mass_in(d1) - mass_in(d2);
                double cap = std::min(ch.tail(u1) - ch.tail(u2), mass_in(ch.jumps));
                CHECK(lhs <= cap + 1e-10);
            }
        }
}

TEST_CASE("exceedance fields are right-continuous and monotone in u") {
    auto ch = identical_pareto_chars(1.5, 1e-6);
    double prev_a = -kInf, prev_d = -kInf;
    for (double u : {0.3, 0.6, 1.0, 2.0, 5.0}) {
        auto dec = exceedance_decomposition(ch, u);
        CHECK(dec.a_u >= prev_a - 1e-12); // positive-v marks: a_u nondecreasing
        CHECK(dec.d_u >= prev_d - 1e-12);
        prev_a = dec.a_u;
        prev_d = dec.d_u;
        auto dec_r = exceedance_decomposition(ch, u + 1e-9);
        CHECK(dec_r.a_u == Approx(dec.a_u).epsilon(1e-6));
        CHECK(dec_r.d_u == Approx(dec.d_u).epsilon(1e-6));
    }
    // tabulated marks: exact right-continuity at a mark level
    JointJumpMeasure m;
    m.add_atom({true, 1.0, 0.5, 0.3, 0.7});
    m.add_atom({true, 2.0, 0.9, 0.0, 0.3});
    auto tail = TailFunction::from_mark_masses({{1.0, 0.7}, {2.0, 0.3}}, 0.0);
    auto tch = LimitCharacteristics::make(tail, m, 0.0, 0.0, 0.0);
    auto at = exceedance_decomposition(tch, 1.0);
    auto just_right = exceedance_decomposition(tch, 1.0 + 1e-12);
    CHECK(at.a_u == just_right.a_u);
    CHECK(at.d_u == just_right.d_u);
}

TEST_CASE("sampler parameters and the exponent-matching identity") {
    SUBCASE("no jumps: drifts are the constants themselves") {
        JointJumpMeasure empty;
        auto ch = LimitCharacteristics::make(TailFunction::gumbel(), empty, 0.7, 0.0, 0.4);
        auto sp = sampler_parameters(ch);
        CHECK(sp.gamma_drift == Approx(0.7));
        CHECK(sp.kappa_drift == Approx(ch.d));
        CHECK(sp.total_mass == 0.0);
    }
    SUBCASE("single atom (v=1, w=0, mass lambda)") {
        JointJumpMeasure m;
        m.add_atom({false, 0.0, 1.0, 0.0, 2.0});
        auto ch = LimitCharacteristics::make(TailFunction::gumbel(), m, 0.5, 0.0, 0.0);
        auto sp = sampler_parameters(ch);
        CHECK(sp.gamma_drift == Approx(0.5 - 2.0 / 2.0).epsilon(1e-14));
    }
    SUBCASE("rebuilt exponent equals levy_charfn within 1e-10") {
        JointJumpMeasure m;
        m.add_atom({false, 0.0, 1.0, 1.0, 1.0});
        m.add_atom({false, 0.0, -1.0, 1.0, 1.0});
        m.add_atom({true, 1.5, 0.4, 0.0, 0.3});
        auto tail = TailFunction::from_mark_masses({{1.5, 0.3}}, 0.0);
        auto ch = LimitCharacteristics::make(tail, m, 0.3, 0.8, 0.2);
        auto sp = sampler_parameters(ch);
        for (double y : {-1.0, 0.0, 1.0})
            for (double z : {-1.0, 0.0, 1.0}) {
                std::complex<double> expo{-0.5 * ch.b2 * y * y,
                                          sp.gamma_drift * y + sp.kappa_drift * z};
                expo += ch.jumps.plain_jump_integral(y, z);
                auto rebuilt = std::exp(expo);
                auto direct = levy_charfn(ch, 1.0, y, z);
                CHECK(std::abs(rebuilt - direct) <= 1e-10);
            }
    }
    SUBCASE("infinite-activity measures are rejected") {
        auto ch = identical_pareto_chars(1.5, 0.0);
        CHECK_THROWS_AS(sampler_parameters(ch), std::invalid_argument);
    }
}

TEST_CASE("mark consistency gap") {
    JointJumpMeasure m;
    m.add_atom({true, 1.0, 0.1, 0.0, 0.6});
    m.add_atom({true, 2.0, 0.2, 0.0, 0.4});
    auto tail = TailFunction::from_mark_masses({{1.0, 0.6}, {2.0, 0.4}}, 0.0);
    auto ch = LimitCharacteristics::make(tail, m, 0.0, 0.0, 0.0);
    for (double u : {0.0, 0.5, 1.0, 1.7, 2.5}) CHECK(mark_consistency_gap(ch, u) <= 1e-14);
    auto fr = LimitCharacteristics::make(TailFunction::frechet(1.0), m, 0.0, 0.0, 0.0);
    CHECK(mark_consistency_gap(fr, 0.5) > 0.1); // analytic tail, atom masses disagree
}
