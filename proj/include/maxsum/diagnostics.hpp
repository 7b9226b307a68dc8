#pragma once

#include "maxsum/array_model.hpp"
#include "maxsum/limit_law.hpp"
#include "maxsum/limit_sampler.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace maxsum {

/// Two-sample Kolmogorov-Smirnov sup distance between empirical CDFs.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// One-sample KS distance against a (continuous) analytic CDF.
double ks_distance_to_cdf(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Mean of exp(i(y gamma + z kappa)) over sample pairs.
std::complex<double> empirical_charfn(const std::vector<std::array<double, 2>>& samples, double y,
                                      double z);

enum class StoppedFunctional { xi, gamma, kappa, diff_gamma_xi, ratio_const, ratio_time };

const char* functional_name(StoppedFunctional f);

struct SweepSpec {
    StoppedFunctional functional = StoppedFunctional::xi;
    bool stopped = true; // evaluate at tau_eps(t) instead of t
    double t = 1.0;
    std::vector<long> n_grid; // empty -> model grid
    long n_per_eps = 10000;
    double final_tol = 0.03;
    double ratio_a = 1.0;        // regularization parameter of the ratio transforms
    double sampling_floor = 0.15; // finite-activity mark floor of the limit population
    int jobs = 1;
};

struct SweepResult {
    std::string functional;
    std::vector<long> n_eps;
    std::vector<double> distance;
    std::vector<double> se;
    bool trend_pass = false;
    bool final_pass = false;
    double final_tol = 0.0;
    bool pass() const { return trend_pass && final_pass; }
};

/// Epsilon-sweep of the KS distance between the prelimit functional
/// distribution and a freshly sampled limit population.
/// `sampling_chars(floor)` supplies the finite-activity characteristics for
/// the limit sampler (pass the characteristics themselves when already
/// finite-activity).
SweepResult convergence_sweep(const ArrayModel& model, const LimitCharacteristics& chars,
                              const std::function<LimitCharacteristics(double)>& sampling_chars,
                              const SweepSpec& spec, std::uint64_t root_seed);

struct JProbeCell {
    long n_eps = 0;
    double c = 0.0;
    long exceed = 0;
    long paths = 0;
    double prob() const { return paths == 0 ? 0.0 : static_cast<double>(exceed) / paths; }
};

struct JProbeResult {
    std::vector<JProbeCell> cells; // row-major over (n, c)
    double delta = 0.0, T = 0.0, T2 = 0.0;
    bool verdict = false; // smallest-c column below threshold at largest n
    double threshold = 0.05;
};

/// Empirical P{Delta_J(zeta_eps, c, T, T2) >= delta} per (n, c) cell. Paths
/// are shared across the c-column so the table is monotone in c exactly.
JProbeResult j_compactness_probe(const ArrayModel& model, const std::vector<long>& n_list,
                                 const std::vector<double>& c_list, double T, double T2,
                                 double delta, long n_paths, std::uint64_t root_seed,
                                 double threshold = 0.05, int jobs = 1);

struct ThetaInclusionResult {
    long paths = 0;
    long dj_positive = 0; // paths with Delta_J(tau, c, T, T2) > 0
    long violations = 0;  // among those, paths with theta[T, T2] > c
};

/// Pathwise check of {Delta_J(tau_eps, c, T, T2) > 0} against the minimal
/// jump gap theta of the stopping path.
ThetaInclusionResult theta_inclusion_check(const ArrayModel& model, long n_eps, double c, double T,
                                           double T2, long n_paths, std::uint64_t root_seed);

struct IndependenceResult {
    double corr_gamma = 0.0;
    double corr_kappa = 0.0;
    double se = 0.0;
    bool degenerate = false;
};

/// Correlation of chi(xi > m) with the sum components.
IndependenceResult independence_probe(const std::vector<std::array<double, 3>>& samples,
                                      double level_m);

struct DecompositionProbeResult {
    std::vector<long> n_eps;
    std::vector<double> error;
    std::complex<double> target;
    bool nonincreasing = false;
    double final_error = 0.0;
};

/// Single-term truncated characteristic function raised to n against the
/// factorized limit exp(-pi1(u)) phi^(u)(1, y, z); requires the model's
/// analytic truncated CF.
DecompositionProbeResult conditional_decomposition_probe(const ArrayModel& model,
                                                         const LimitCharacteristics& chars,
                                                         const std::vector<long>& n_list, double u,
                                                         double y, double z);

} // namespace maxsum
