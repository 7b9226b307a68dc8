#pragma once

#include "maxsum/array_model.hpp"
#include "maxsum/cadlag.hpp"
#include "maxsum/rng.hpp"

#include <array>
#include <functional>
#include <vector>

namespace maxsum {

enum class ExampleKind { renewal_self, insurance_pair, earthquake_triple };

struct ExampleParams {
    std::function<double(RngStream&)> draw_x; // interarrival times (nonnegative)
    std::function<double(RngStream&)> draw_y; // sizes/claims (kinds 2, 3)
    std::function<double(RngStream&)> draw_z; // damages (kind 3)
    long n_eps = 1;
    std::vector<double> t_grid{1.0, 2.0, 3.0};
};

/// One realization of a worked example: the prelimit triple path, the
/// stopping path, and per-grid-t stopped values in both conventions (the
/// inverse-clock tau and the raw renewal count N(t); they differ by the
/// "+1/n" boundary).
struct ExampleRun {
    CadlagPath triple;
    StoppingPath stopping;
    struct Row {
        double t = 0.0;
        double tau = 0.0;
        long count_raw = 0;
        double stopped_max_tau = 0.0, stopped_sum_tau = 0.0;
        double stopped_max_raw = 0.0, stopped_sum_raw = 0.0;
    };
    std::vector<Row> rows;
};

ExampleRun build_example(ExampleKind kind, const ExampleParams& params, double horizon,
                         RngStream& rng);

/// Claim/interarrival specification of the reserves process.
struct RiskModel {
    std::function<std::pair<double, double>(long n, RngStream&)> draw_claim_interarrival;
    std::function<double(long n)> premium; // c_eps
    std::vector<long> n_grid{100, 1000, 10000};
};

/// The standard compound-claims model: interarrivals Exp(1)/n, claims
/// Bernoulli(rate/n) Pareto(alpha), constant premium rate.
RiskModel standard_risk_model(double claim_rate = 0.8, double claim_alpha = 2.5,
                              double premium = 1.0);

/// One simulated portfolio: mu_eps(t) = c t - beta(tau(t)) evaluated
/// directly, its drift/sum decomposition computed independently, and the
/// overshoot bound pair at every grid t.
struct RiskRun {
    CadlagPath triple; // (xi, gamma, kappa) wired as (c kappa_k, c kappa_k - beta_k, kappa_k)
    double c_eps = 0.0;
    struct Row {
        double t = 0.0;
        double tau = 0.0;
        double mu_direct = 0.0;
        double overshoot = 0.0;    // c (t - kappa(tau(t)))
        double stopped_sum = 0.0;  // gamma(tau(t))
        double bound_lhs = 0.0;    // |overshoot|
        double bound_rhs = 0.0;    // xi(tau(t))
    };
    std::vector<Row> rows;
    double max_identity_gap = 0.0; // max |mu_direct - (overshoot + stopped_sum)|
    bool bound_holds = true;
};

RiskRun build_risk_process(const RiskModel& risk, double eps, double horizon,
                           const std::vector<double>& t_grid, RngStream& rng);

enum class Transform { difference, ratio_const, ratio_time };

/// Pointwise transform of a (stopped) triple step path, carried on the
/// input's jump structure. difference = gamma - xi; ratio_const =
/// xi / (a + |gamma|); ratio_time = xi / (a t + |gamma|). The result is
/// exact everywhere for the first two on step inputs; ratio_time is exact
/// at jump times (its value decays continuously in t between them).
CadlagPath transformed_path(const CadlagPath& triple, Transform f, double a = 1.0);

/// Exact sup over [T1, T2] of the transform along a step path: attained at
/// jump points and window endpoints (ratio_time decays between jumps).
double transformed_sup(const CadlagPath& triple, Transform f, double a, double T1, double T2);

struct FirstPassageScheme {
    std::function<double(double s, const std::array<double, 3>& zeta)> f;
    double h0 = 0.0; // truncation level of the max coordinate
};

struct AlternativeStoppingResult {
    CadlagPath stopping;       // first-exceedance/first-passage reading
    CadlagPath literal;        // the literal sup reading (degenerate for extremal jumps)
    bool truncated = false;
};

/// tau(t) = sup{s : f(s, zeta-hat^(h0)(s)) <= t}, evaluated exactly at each
/// grid t (f must be piecewise monotone in s along segments; drift pieces
/// are resolved by monotone bisection).
AlternativeStoppingResult first_passage_stopping(const CadlagPath& triple,
                                                 const FirstPassageScheme& scheme,
                                                 const std::vector<double>& t_grid);

/// Renewal extremal stopping on the record increments of the max
/// coordinate. Both readings are returned: the first-exceedance reading
/// inf{s : Delta_s(xi) > t} used by the shock-model literature, and the
/// literal sup reading sup{s : Delta_s(xi) <= t}, which degenerates to the
/// horizon because non-jump times all satisfy Delta_s = 0.
AlternativeStoppingResult extremal_jump_stopping(const CadlagPath& triple, double t_max);

} // namespace maxsum
