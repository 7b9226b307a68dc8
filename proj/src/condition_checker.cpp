#include "maxsum/condition_checker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Acc {
    double sum = 0.0, sum2 = 0.0;
    void add(double x) {
        sum += x;
        sum2 += x * x;
    }
    double mean(long n) const { return sum / static_cast<double>(n); }
    double se(long n) const {
        double m = mean(n);
        double var = std::max(0.0, sum2 / static_cast<double>(n) - m * m);
        return std::sqrt(var / static_cast<double>(n));
    }
};

// nonincreasing within noise: one step may backslide by 2(se_i + se_{i+1})
bool trend_ok(const std::vector<double>& errs, const std::vector<double>& ses) {
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
        if (errs[i + 1] > errs[i] + 2.0 * (ses[i] + ses[i + 1])) return false;
    return true;
}

std::vector<long> grid_of(const CheckSettings& s, const ArrayModel& model) {
    std::vector<long> g = s.n_grid.empty() ? model.n_grid : s.n_grid;
    if (g.empty()) throw std::invalid_argument("condition check: empty n grid");
    std::sort(g.begin(), g.end());
    return g;
}

void reject_atom_collision(const JointJumpMeasure& jumps, double v, bool v_axis) {
    for (const auto& a : jumps.atoms()) {
        double coordinate = v_axis ? std::abs(a.v) : a.w;
        if (coordinate == v)
            throw std::invalid_argument(
                "condition check: grid point collides with a jump measure atom; move the grid");
    }
}

} // namespace

std::vector<TestFunctionFamily::Mode> TestFunctionFamily::modes() const {
    std::vector<Mode> out;
    out.push_back({0, 0.0, 0.0, "bump"});
    for (double p : freqs)
        for (double q : freqs) {
            if (p == 0.0 && q == 0.0) continue;
            out.push_back({1, p, q, "bump*cos(" + std::to_string(p) + "v+" + std::to_string(q) + "w)"});
            out.push_back({2, p, q, "bump*sin(" + std::to_string(p) + "v+" + std::to_string(q) + "w)"});
        }
    return out;
}

double TestFunctionFamily::eval(const Mode& m, double v, double w) const {
    double rho = std::sqrt(v * v + w * w);
    double bump = rho <= r ? 0.0 : (rho >= R ? 1.0 : (rho - r) / (R - r));
    if (bump == 0.0) return 0.0;
    switch (m.kind) {
        case 1: return bump * std::cos(m.p * v + m.q * w);
        case 2: return bump * std::sin(m.p * v + m.q * w);
        default: return bump;
    }
}

bool VDescription::contains(double t, double tol) const {
    if (!(t > 0.0)) return false;
    if (all) return true;
    std::vector<double> sums{0.0};
    std::vector<double> frontier{0.0};
    while (!frontier.empty()) {
        std::vector<double> next;
        for (double s : frontier)
            for (double g : generators) {
                double v = s + g;
                if (v > t + tol) continue;
                if (std::abs(v - t) <= tol) return false;
                bool seen = false;
                for (double q : sums)
                    if (std::abs(q - v) <= 0.25 * tol) {
                        seen = true;
                        break;
                    }
                if (!seen) {
                    sums.push_back(v);
                    next.push_back(v);
                    if (sums.size() > 200000)
                        throw std::runtime_error("VDescription: lattice enumeration too large");
                }
            }
        frontier = std::move(next);
    }
    return true;
}

std::string VDescription::describe() const {
    if (all) return "all of (0, inf)";
    std::string s = "complement of the lattice generated by {";
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(generators[i]);
    }
    return s + "}";
}

ConditionDClassification classify_condition_D(const LimitCharacteristics& chars) {
    ConditionDClassification out;
    double mass3 = chars.jumps.mass_w_above(0.0);
    out.D = chars.c > 0.0 || mass3 > 0.0;
    out.D1 = chars.c > 0.0 || mass3 == kInf;
    // a finite limit of n P{kappa > 0} forces the truncated kappa means to
    // vanish, so D2 entails c = 0 (kappa_0 compound Poisson)
    out.D2 = chars.c == 0.0 && mass3 > 0.0 && std::isfinite(mass3);

    // V = (0, inf) when c > 0, the tail blows up at 0, or the tail is
    // continuous; otherwise the lattice of tail discontinuity points.
    std::vector<double> gens;
    for (const auto& a : chars.jumps.atoms())
        if (a.w > 0.0 && std::find(gens.begin(), gens.end(), a.w) == gens.end())
            gens.push_back(a.w);
    for (const auto& c : chars.jumps.curves())
        if (c.w1 == 0.0 && c.w0 > 0.0 &&
            std::find(gens.begin(), gens.end(), c.w0) == gens.end())
            gens.push_back(c.w0);
    bool tail_continuous = gens.empty();
    if (chars.c > 0.0 || mass3 == kInf || tail_continuous) {
        out.V.all = true;
    } else {
        out.V.all = false;
        std::sort(gens.begin(), gens.end());
        out.V.generators = std::move(gens);
    }
    return out;
}

ConditionDClassification classify_condition_D(const LimitCharacteristics& chars,
                                              const ArrayModel& model, long samples,
                                              RngStream& rng) {
    ConditionDClassification out = classify_condition_D(chars);
    if (!out.D2) return out;
    long n = model.n_grid.empty() ? 10000 : *std::max_element(model.n_grid.begin(), model.n_grid.end());
    long hits = 0;
    for (long i = 0; i < samples; ++i)
        if (model.draw(n, rng).kappa > 0.0) ++hits;
    double est = static_cast<double>(n) * static_cast<double>(hits) / static_cast<double>(samples);
    double mass3 = chars.jumps.mass_w_above(0.0);
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    double se = static_cast<double>(n) * std::sqrt(std::max(p * (1 - p), 1e-12) / samples);
    if (std::abs(est - mass3) > std::max(0.05 * mass3, 3.0 * se + 0.005)) out.D2 = false;
    return out;
}

bool ConditionReport::all_pass() const {
    for (const auto& s : sections)
        if (!s.pass) return false;
    return true;
}

double check_tolerance(const CheckSettings& s, double target, double se) {
    return std::max(s.tol_rel * std::abs(target), 3.0 * se + s.tol_abs_floor);
}

ConditionSection check_condition_A(const ArrayModel& model, const LimitCharacteristics& chars,
                                   const std::vector<double>& u_grid, const CheckSettings& s,
                                   RngStream& rng) {
    ConditionSection sec;
    sec.name = "A";
    for (double u : u_grid) {
        if (!chars.tail.is_continuity_point(u))
            throw std::invalid_argument(
                "condition A: u grid point lies in the discontinuity set of pi1; move it");
        if (chars.tail(u) == kInf)
            throw std::invalid_argument("condition A: pi1(u) = inf at a grid point; pick u > u_pi");
    }
    auto n_grid = grid_of(s, model);
    std::vector<std::vector<double>> errs(u_grid.size()), ses(u_grid.size());
    std::uint64_t cell = 0;
    for (long n : n_grid) {
        std::vector<double> est(u_grid.size(), 0.0), se(u_grid.size(), 0.0);
        if (model.tail) {
            for (std::size_t k = 0; k < u_grid.size(); ++k)
                est[k] = static_cast<double>(n) * model.tail(n, u_grid[k]);
        } else {
            RngStream child = rng.child(cell);
            std::vector<long> hits(u_grid.size(), 0);
            for (long i = 0; i < s.samples_per_eps; ++i) {
                TripleSample t = model.draw(n, child);
                for (std::size_t k = 0; k < u_grid.size(); ++k)
                    if (t.xi > u_grid[k]) ++hits[k];
            }
            for (std::size_t k = 0; k < u_grid.size(); ++k) {
                double p = static_cast<double>(hits[k]) / static_cast<double>(s.samples_per_eps);
                est[k] = static_cast<double>(n) * p;
                se[k] = static_cast<double>(n) *
                        std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(s.samples_per_eps));
            }
        }
        for (std::size_t k = 0; k < u_grid.size(); ++k) {
            double target = chars.tail(u_grid[k]);
            ProbeRow row{n, "u=" + std::to_string(u_grid[k]), est[k], target,
                         std::abs(est[k] - target), se[k], static_cast<bool>(model.tail)};
            sec.rows.push_back(row);
            errs[k].push_back(row.abs_err);
            ses[k].push_back(row.mc_se);
        }
        ++cell;
    }
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
        double tol = check_tolerance(s, chars.tail(u_grid[k]), ses[k].back());
        if (errs[k].back() > tol || !trend_ok(errs[k], ses[k])) sec.pass = false;
    }
    return sec;
}

std::vector<ConditionSection> check_condition_B(const ArrayModel& model,
                                                const LimitCharacteristics& chars,
                                                const std::vector<double>& v_grid,
                                                const std::vector<double>& w_grid,
                                                const CheckSettings& s, RngStream& rng) {
    for (double v : v_grid) reject_atom_collision(chars.jumps, v, true);
    for (double w : w_grid) reject_atom_collision(chars.jumps, w, false);
    auto n_grid = grid_of(s, model);
    auto modes = s.phi.modes();

    ConditionSection a_sec{"B(a)"}, b_sec{"B(b)"}, c_sec{"B(c)"}, d_sec{"B(d)"};

    // targets
    std::vector<double> phi_targets;
    for (const auto& m : modes)
        phi_targets.push_back(
            chars.jumps.integrate_vw([&](double v, double w) { return s.phi.eval(m, v, w); }));
    std::vector<double> av_targets, cw_targets;
    for (double v : v_grid) av_targets.push_back(chars.a_of_v(v));
    for (double w : w_grid) cw_targets.push_back(chars.c_of_w(w));
    // the epsilon-limit of the truncated variance at fixed v keeps the jump
    // second moment below v; only the v -> 0 extrapolation isolates b^2
    std::vector<double> bdv_targets, bdk_targets, bdc_targets;
    for (double v : s.bd_v_grid) {
        bdv_targets.push_back(chars.b2 + chars.jumps.int_v2_below_abs(v));
        bdk_targets.push_back(chars.jumps.int_w2_below(v));
        bdc_targets.push_back(chars.jumps.int_vw_below_abs(v));
    }

    std::vector<std::vector<double>> phi_errs(modes.size()), phi_ses(modes.size());
    std::vector<std::vector<double>> av_errs(v_grid.size()), av_ses(v_grid.size());
    std::vector<std::vector<double>> cw_errs(w_grid.size()), cw_ses(w_grid.size());
    std::vector<std::vector<double>> bd_errs(s.bd_v_grid.size()), bd_ses(s.bd_v_grid.size()),
        bd_ests(s.bd_v_grid.size());
    std::vector<double> a_reconstructed;

    std::uint64_t cell = 1000;
    for (long n : n_grid) {
        const double dn = static_cast<double>(n);
        RngStream child = rng.child(cell++);
        const long N = s.samples_per_eps;
        std::vector<Acc> phi_acc(modes.size());
        std::vector<Acc> av_acc(v_grid.size()), cw_acc(w_grid.size());
        std::vector<Acc> bd_m1(s.bd_v_grid.size()), bd_m2(s.bd_v_grid.size());
        std::vector<Acc> bk_m1(s.bd_v_grid.size()), bk_m2(s.bd_v_grid.size()),
            cov_acc(s.bd_v_grid.size());
        bool have_analytic = model.trunc_mean_gamma && model.trunc_mean2_gamma && model.trunc_mean_kappa;

        for (long i = 0; i < N; ++i) {
            TripleSample t = model.draw(n, child);
            for (std::size_t k = 0; k < modes.size(); ++k)
                phi_acc[k].add(s.phi.eval(modes[k], t.gamma, t.kappa));
            if (!have_analytic) {
                for (std::size_t k = 0; k < v_grid.size(); ++k)
                    av_acc[k].add(std::abs(t.gamma) <= v_grid[k] ? t.gamma : 0.0);
                for (std::size_t k = 0; k < w_grid.size(); ++k)
                    cw_acc[k].add(t.kappa <= w_grid[k] ? t.kappa : 0.0);
            }
            for (std::size_t k = 0; k < s.bd_v_grid.size(); ++k) {
                double v = s.bd_v_grid[k];
                double g = std::abs(t.gamma) <= v ? t.gamma : 0.0;
                double kk = t.kappa <= v ? t.kappa : 0.0;
                bd_m1[k].add(g);
                bd_m2[k].add(g * g);
                bk_m1[k].add(kk);
                bk_m2[k].add(kk * kk);
                cov_acc[k].add(g * kk);
            }
        }

        for (std::size_t k = 0; k < modes.size(); ++k) {
            double est = dn * phi_acc[k].mean(N);
            double se = dn * phi_acc[k].se(N);
            ProbeRow row{n, modes[k].label, est, phi_targets[k], std::abs(est - phi_targets[k]), se,
                         false};
            a_sec.rows.push_back(row);
            phi_errs[k].push_back(row.abs_err);
            phi_ses[k].push_back(se);
        }
        for (std::size_t k = 0; k < v_grid.size(); ++k) {
            double est, se;
            if (have_analytic) {
                est = dn * model.trunc_mean_gamma(n, v_grid[k]);
                se = 0.0;
            } else {
                est = dn * av_acc[k].mean(N);
                se = dn * av_acc[k].se(N);
            }
            ProbeRow row{n, "v=" + std::to_string(v_grid[k]), est, av_targets[k],
                         std::abs(est - av_targets[k]), se, have_analytic};
            b_sec.rows.push_back(row);
            av_errs[k].push_back(row.abs_err);
            av_ses[k].push_back(se);
            if (n == n_grid.back()) {
                // reconstructed location constant must not depend on v
                double a_rec = est - chars.jumps.int_v3_over_1pv2_below(v_grid[k]) +
                               chars.jumps.int_v_over_1pv2_above(v_grid[k]);
                a_reconstructed.push_back(a_rec);
            }
        }
        for (std::size_t k = 0; k < w_grid.size(); ++k) {
            double est, se;
            if (have_analytic) {
                est = dn * model.trunc_mean_kappa(n, w_grid[k]);
                se = 0.0;
            } else {
                est = dn * cw_acc[k].mean(N);
                se = dn * cw_acc[k].se(N);
            }
            ProbeRow row{n, "w=" + std::to_string(w_grid[k]), est, cw_targets[k],
                         std::abs(est - cw_targets[k]), se, have_analytic};
            c_sec.rows.push_back(row);
            cw_errs[k].push_back(row.abs_err);
            cw_ses[k].push_back(se);
        }
        for (std::size_t k = 0; k < s.bd_v_grid.size(); ++k) {
            double v = s.bd_v_grid[k];
            double est, se;
            if (have_analytic) {
                double m1 = model.trunc_mean_gamma(n, v), m2 = model.trunc_mean2_gamma(n, v);
                est = dn * (m2 - m1 * m1);
                se = 0.0;
            } else {
                double m1 = bd_m1[k].mean(N), m2 = bd_m2[k].mean(N);
                est = dn * (m2 - m1 * m1);
                se = dn * bd_m2[k].se(N);
            }
            ProbeRow row{n, "var v=" + std::to_string(v), est, bdv_targets[k],
                         std::abs(est - bdv_targets[k]), se, have_analytic};
            d_sec.rows.push_back(row);
            bd_errs[k].push_back(row.abs_err);
            bd_ses[k].push_back(se);
            bd_ests[k].push_back(est);
            if (n == n_grid.back()) {
                // v -> 0 extrapolation: remove the known jump second moment
                double extrap = est - chars.jumps.int_v2_below_abs(v);
                d_sec.rows.push_back(ProbeRow{n, "var extrapolated v=" + std::to_string(v), extrap,
                                              chars.b2, std::abs(extrap - chars.b2), se,
                                              have_analytic});
            }
            // kappa-variance and gamma/kappa-covariance analogues: the
            // repeated limits vanish because the fixed-v targets do as v -> 0
            double km1 = bk_m1[k].mean(N), km2 = bk_m2[k].mean(N);
            double kvar = dn * (km2 - km1 * km1);
            d_sec.rows.push_back(ProbeRow{n, "kappa var v=" + std::to_string(v), kvar,
                                          bdk_targets[k], std::abs(kvar - bdk_targets[k]),
                                          dn * bk_m2[k].se(N), false});
            double cov = dn * (cov_acc[k].mean(N) - bd_m1[k].mean(N) * km1);
            d_sec.rows.push_back(ProbeRow{n, "cov v=" + std::to_string(v), cov, bdc_targets[k],
                                          std::abs(cov - bdc_targets[k]),
                                          dn * cov_acc[k].se(N), false});
        }
    }

    for (std::size_t k = 0; k < modes.size(); ++k) {
        double tol = check_tolerance(s, phi_targets[k], phi_ses[k].back());
        if (phi_errs[k].back() > tol || !trend_ok(phi_errs[k], phi_ses[k])) a_sec.pass = false;
    }
    for (std::size_t k = 0; k < v_grid.size(); ++k) {
        double tol = check_tolerance(s, av_targets[k], av_ses[k].back());
        if (av_errs[k].back() > tol || !trend_ok(av_errs[k], av_ses[k])) b_sec.pass = false;
    }
    // v-independence of the reconstructed constant
    if (!a_reconstructed.empty()) {
        double lo = *std::min_element(a_reconstructed.begin(), a_reconstructed.end());
        double hi = *std::max_element(a_reconstructed.begin(), a_reconstructed.end());
        double spread_tol = check_tolerance(s, chars.a, b_sec.rows.empty() ? 0.0 : av_ses.back().back());
        if (hi - lo > 2.0 * spread_tol) {
            b_sec.pass = false;
            b_sec.note = "reconstructed a depends on v";
        }
    }
    for (std::size_t k = 0; k < w_grid.size(); ++k) {
        double tol = check_tolerance(s, cw_targets[k], cw_ses[k].back());
        if (cw_errs[k].back() > tol || !trend_ok(cw_errs[k], cw_ses[k])) c_sec.pass = false;
    }
    // B(d): the fixed-v estimate converges at the family's own rate, so the
    // residual-bias allowance is twice the last sweep increment (geometric
    // extrapolation of the remaining epsilon error).
    std::vector<double> bd_spread(s.bd_v_grid.size(), 0.0);
    for (std::size_t k = 0; k < s.bd_v_grid.size(); ++k) {
        if (bd_ests[k].size() >= 2)
            bd_spread[k] = std::abs(bd_ests[k].back() - bd_ests[k][bd_ests[k].size() - 2]);
        double tol = std::max({0.05 * std::max(1.0, std::abs(bdv_targets[k])),
                               3.0 * bd_ses[k].back() + s.tol_abs_floor, 2.0 * bd_spread[k]});
        if (bd_errs[k].back() > tol || !trend_ok(bd_errs[k], bd_ses[k])) d_sec.pass = false;
    }
    // extrapolated variance and the vanishing kappa/cov analogues at the
    // largest n
    for (const auto& row : d_sec.rows) {
        if (row.n_eps != n_grid.back()) continue;
        double spread = 0.0;
        for (std::size_t k = 0; k < s.bd_v_grid.size(); ++k)
            if (row.probe.find("v=" + std::to_string(s.bd_v_grid[k])) != std::string::npos)
                spread = bd_spread[k];
        if (row.probe.rfind("var extrapolated", 0) == 0 ||
            row.probe.rfind("kappa var", 0) == 0 || row.probe.rfind("cov", 0) == 0) {
            double tol = std::max({0.05 * std::max(1.0, std::abs(row.target)),
                                   3.0 * row.mc_se + 0.01, 2.0 * spread});
            if (row.abs_err > tol) d_sec.pass = false;
        }
    }
    return {a_sec, b_sec, c_sec, d_sec};
}

ConditionSection check_condition_C(const ArrayModel& model, const LimitCharacteristics& chars,
                                   const std::vector<double>& u_grid, const CheckSettings& s,
                                   RngStream& rng) {
    ConditionSection sec;
    sec.name = "C";
    double up = chars.tail.u_pi();
    for (double u : u_grid) {
        if (!(u > up) || !chars.tail.is_continuity_point(u))
            throw std::invalid_argument(
                "condition C: u grid must lie in (u_pi, inf) at continuity points of pi1");
    }
    auto n_grid = grid_of(s, model);
    auto modes = s.phi.modes();

    std::vector<std::vector<double>> targets(u_grid.size());
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        auto dec = exceedance_decomposition(chars, u_grid[j]);
        for (const auto& m : modes)
            targets[j].push_back(
                dec.pi_u.integrate_vw([&](double v, double w) { return s.phi.eval(m, v, w); }));
    }

    std::vector<std::vector<std::vector<double>>> errs(u_grid.size()), ses(u_grid.size());
    for (auto& e : errs) e.resize(modes.size());
    for (auto& e : ses) e.resize(modes.size());

    std::uint64_t cell = 2000;
    for (long n : n_grid) {
        const double dn = static_cast<double>(n);
        RngStream child = rng.child(cell++);
        std::vector<std::vector<Acc>> acc(u_grid.size(), std::vector<Acc>(modes.size()));
        for (long i = 0; i < s.samples_per_eps; ++i) {
            TripleSample t = model.draw(n, child);
            for (std::size_t j = 0; j < u_grid.size(); ++j) {
                if (t.xi <= u_grid[j]) {
                    for (std::size_t k = 0; k < modes.size(); ++k) acc[j][k].add(0.0);
                } else {
                    for (std::size_t k = 0; k < modes.size(); ++k)
                        acc[j][k].add(s.phi.eval(modes[k], t.gamma, t.kappa));
                }
            }
        }
        for (std::size_t j = 0; j < u_grid.size(); ++j)
            for (std::size_t k = 0; k < modes.size(); ++k) {
                double est = dn * acc[j][k].mean(s.samples_per_eps);
                double se = dn * acc[j][k].se(s.samples_per_eps);
                ProbeRow row{n, "u=" + std::to_string(u_grid[j]) + " " + modes[k].label, est,
                             targets[j][k], std::abs(est - targets[j][k]), se, false};
                sec.rows.push_back(row);
                errs[j][k].push_back(row.abs_err);
                ses[j][k].push_back(se);
            }
    }
    for (std::size_t j = 0; j < u_grid.size(); ++j)
        for (std::size_t k = 0; k < modes.size(); ++k) {
            double tol = check_tolerance(s, targets[j][k], ses[j][k].back());
            if (errs[j][k].back() > tol || !trend_ok(errs[j][k], ses[j][k])) sec.pass = false;
        }
    return sec;
}

ConditionSection report_condition_D(const LimitCharacteristics& chars, const ArrayModel& model,
                                    const CheckSettings& s, RngStream& rng) {
    ConditionSection sec;
    sec.name = "D";
    RngStream child = rng.child(3000);
    auto cls = model.draw ? classify_condition_D(chars, model, s.samples_per_eps, child)
                          : classify_condition_D(chars);
    auto structural = classify_condition_D(chars);
    sec.rows.push_back(ProbeRow{0, "D", structural.D ? 1.0 : 0.0, structural.D ? 1.0 : 0.0, 0.0, 0.0, true});
    sec.rows.push_back(ProbeRow{0, "D1", structural.D1 ? 1.0 : 0.0, structural.D1 ? 1.0 : 0.0, 0.0, 0.0, true});
    sec.rows.push_back(ProbeRow{0, "D2", cls.D2 ? 1.0 : 0.0, structural.D2 ? 1.0 : 0.0,
                                cls.D2 == structural.D2 ? 0.0 : 1.0, 0.0, false});
    sec.pass = cls.D2 == structural.D2;
    sec.note = "V: " + cls.V.describe();
    return sec;
}

ConditionReport check_all_conditions(const ArrayModel& model, const LimitCharacteristics& chars,
                                     const std::vector<double>& u_grid,
                                     const std::vector<double>& v_grid,
                                     const std::vector<double>& w_grid, const CheckSettings& s,
                                     std::uint64_t root_seed) {
    ConditionReport report;
    report.root_seed = root_seed;
    report.samples_per_eps = s.samples_per_eps;
    RngStream rng(root_seed);
    report.sections.push_back(check_condition_A(model, chars, u_grid, s, rng));
    auto b = check_condition_B(model, chars, v_grid, w_grid, s, rng);
    report.sections.insert(report.sections.end(), b.begin(), b.end());
    report.sections.push_back(check_condition_C(model, chars, u_grid, s, rng));
    report.sections.push_back(report_condition_D(chars, model, s, rng));
    return report;
}

} // namespace maxsum
