#pragma once

#include "maxsum/cadlag.hpp"
#include "maxsum/limit_law.hpp"
#include "maxsum/rng.hpp"

#include <array>
#include <vector>

namespace maxsum {

/// Dense Euler skeleton of the Gaussian component, owned by the sampler
/// layer (the exact path type carries jumps and a linear drift only).
/// Values between grid points are linearly interpolated; grid points are
/// exact Brownian marginals.
struct GaussianSkeleton {
    double step = 0.0;
    std::vector<double> cum; // cum[k] = b * B(k step); empty when b = 0
    bool empty() const { return cum.empty(); }
    double eval(double t) const;
};

/// A bivariate Levy sample: exact jump+drift path (gamma, kappa) plus the
/// gamma-coordinate skeleton.
struct LevySample {
    CadlagPath path;
    GaussianSkeleton skel;
    std::array<double, 2> eval(double t) const;
};

/// A joint hybrid sample (xi, gamma, kappa); the skeleton contributes to
/// the gamma coordinate only.
struct HybridSample {
    CadlagPath path;
    GaussianSkeleton skel;
    std::array<double, 3> eval(double t) const;
};

struct HybridSampleConfig {
    LimitCharacteristics chars;
    double horizon = 1.0;
    double euler_step = 0.0; // 0 picks horizon / 1024
    double initial_max = 0.0;
    bool initial_max_set = false; // false -> u_pi
};

/// Markov record construction of the extremal process: entry law
/// exp(-t_start pi1(u)) at t_start, exponential holds, conditional-tail
/// record jumps. The path is constant on [0, t_start) (entry artifact).
CadlagPath sample_extremal(const LimitCharacteristics& chars, double t_start, double horizon,
                           RngStream& rng);

LevySample sample_levy(const LimitCharacteristics& chars, double horizon, double euler_step,
                       RngStream& rng);

HybridSample sample_hybrid(const HybridSampleConfig& config, RngStream& rng);

struct StoppedValue {
    double t = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;
};

/// Renewal-stopped hybrid sample: composes one hybrid draw with the
/// generalized inverse of its kappa coordinate at each grid t. The horizon
/// doubles (fresh draw) until kappa clears max(t_grid), with a retry cap.
std::vector<StoppedValue> sample_stopped_limit(const HybridSampleConfig& config,
                                               const std::vector<double>& t_grid, RngStream& rng);

} // namespace maxsum
