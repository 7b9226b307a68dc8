#pragma once

#include "maxsum/cadlag.hpp"
#include "maxsum/rng.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace maxsum {

/// One draw of the i.i.d. triple (xi, gamma, kappa); kappa >= 0.
struct TripleSample {
    double xi = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;
};

/// Specification of the i.i.d. triple law across the epsilon sweep. The
/// epsilon scale is identified with 1/n_eps; the sweep grid is the finite
/// list n_grid. Families draw a latent uniform tuple inside `draw` and map
/// it through explicit component maps, which keeps conditional laws
/// computable. Closed-form hooks are optional; checkers fall back to Monte
/// Carlo when they are absent.
struct ArrayModel {
    std::string family = "custom";
    std::vector<long> n_grid{100, 1000, 10000};

    std::function<TripleSample(long n, RngStream&)> draw;

    // optional analytic structure
    std::function<double(long n, double u)> tail;               // P{xi > u}
    std::function<double(long n, double v)> trunc_mean_gamma;   // E gamma chi(|gamma| <= v)
    std::function<double(long n, double v)> trunc_mean2_gamma;  // E gamma^2 chi(|gamma| <= v)
    std::function<double(long n, double w)> trunc_mean_kappa;   // E kappa chi(kappa <= w)
    // E exp(i(y gamma + z kappa)) chi(xi <= u), one draw
    std::function<std::complex<double>(long n, double u, double y, double z)> truncated_joint_cf;

    double memory_budget = 1e7;

    long n_of_epsilon(double eps) const;
    static double eps_of(long n) { return 1.0 / static_cast<double>(n); }
};

std::vector<TripleSample> sample_triples(const ArrayModel& model, double eps, long count,
                                         RngStream& rng);

/// Prelimit triple path on [0, horizon]: coordinate 0 is the running max
/// with the "1 v t n_eps" convention (value on [0, 1/n) is xi_1), 1 is the
/// gamma step sum, 2 the kappa step sum (nondecreasing). All coordinates
/// share jump times k/n.
CadlagPath build_prelimit(const ArrayModel& model, double eps, double horizon, RngStream& rng);

struct StoppingPath {
    CadlagPath path;
    bool truncated = false;
};

/// Full inverse path tau(t) = sup{s : kappa(s) <= t} on [0, t_max] of the
/// kappa coordinate. The coordinate must start at 0 and be either pure-step
/// or pure-drift (the prelimit is always pure-step); the result is exact.
/// When kappa never exceeds t_max the flag is set and the path is capped at
/// the horizon.
StoppingPath build_stopping(const CadlagPath& prelimit, double t_max, int kappa_coord = 2);

struct ConditionalSampleResult {
    std::vector<TripleSample> samples;
    double acceptance_rate = 1.0;
};

/// Draws from the law of the triple conditioned on {xi <= u} by rejection.
ConditionalSampleResult sample_conditional_triples(const ArrayModel& model, double eps, double u,
                                                   long count, RngStream& rng,
                                                   double acceptance_floor = 1e-3);

} // namespace maxsum
