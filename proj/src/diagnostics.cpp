#include "maxsum/diagnostics.hpp"

#include "maxsum/condition_checker.hpp"
#include "maxsum/errors.hpp"
#include "maxsum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxsum {

namespace {

bool trend_ok(const std::vector<double>& errs, const std::vector<double>& ses) {
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
        if (errs[i + 1] > errs[i] + 2.0 * (ses[i] + ses[i + 1])) return false;
    return true;
}

double extract(StoppedFunctional f, double t, double xi, double gamma, double kappa, double a) {
    switch (f) {
        case StoppedFunctional::xi: return xi;
        case StoppedFunctional::gamma: return gamma;
        case StoppedFunctional::kappa: return kappa;
        case StoppedFunctional::diff_gamma_xi: return gamma - xi;
        case StoppedFunctional::ratio_const: return xi / (a + std::abs(gamma));
        case StoppedFunctional::ratio_time: return xi / (a * t + std::abs(gamma));
    }
    return xi;
}

// prelimit path covering the stopping level t: horizon doubles until the
// kappa coordinate clears it
CadlagPath build_covering_prelimit(const ArrayModel& model, long n, double level, RngStream& rng,
                                   double horizon0) {
    double horizon = horizon0;
    for (int attempt = 0; attempt < 12; ++attempt) {
        RngStream local = rng; // replay the same stream on retry
        CadlagPath path = build_prelimit(model, ArrayModel::eps_of(n), horizon, local);
        if (path.eval(horizon)[2] > level) return path;
        horizon *= 2.0;
    }
    throw CapacityError("convergence_sweep: kappa never clears the stopping level");
}

} // namespace

const char* functional_name(StoppedFunctional f) {
    switch (f) {
        case StoppedFunctional::xi: return "xi";
        case StoppedFunctional::gamma: return "gamma";
        case StoppedFunctional::kappa: return "kappa";
        case StoppedFunctional::diff_gamma_xi: return "gamma-xi";
        case StoppedFunctional::ratio_const: return "xi/(a+|gamma|)";
        case StoppedFunctional::ratio_time: return "xi/(at+|gamma|)";
    }
    return "?";
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            double tie = a[i];
            while (i < a.size() && a[i] == tie) ++i;
            while (j < b.size() && b[j] == tie) ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_distance_to_cdf(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::domain_error("ks_distance_to_cdf: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::max((i + 1) / n - f, f - i / n));
    }
    return d;
}

std::complex<double> empirical_charfn(const std::vector<std::array<double, 2>>& samples, double y,
                                      double z) {
    if (samples.empty()) throw std::domain_error("empirical_charfn: empty sample");
    std::complex<double> s{0.0, 0.0};
    for (const auto& p : samples) {
        double theta = y * p[0] + z * p[1];
        s += std::complex<double>{std::cos(theta), std::sin(theta)};
    }
    return s / static_cast<double>(samples.size());
}

SweepResult convergence_sweep(const ArrayModel& model, const LimitCharacteristics& chars,
                              const std::function<LimitCharacteristics(double)>& sampling_chars,
                              const SweepSpec& spec, std::uint64_t root_seed) {
    if (!(spec.t > 0.0)) throw std::invalid_argument("convergence_sweep: t must be positive");
    if (spec.stopped) {
        auto cls = classify_condition_D(chars);
        if (!cls.D)
            throw std::invalid_argument("convergence_sweep: Condition D fails for stopped mode");
        if (!cls.V.contains(spec.t))
            throw std::invalid_argument(
                "convergence_sweep: t lies outside the stochastic-continuity set V; stopped "
                "convergence is asserted only on V");
    }
    if ((spec.functional == StoppedFunctional::ratio_const ||
         spec.functional == StoppedFunctional::ratio_time) &&
        !(spec.ratio_a > 0.0))
        throw std::invalid_argument("convergence_sweep: ratio transforms need a > 0");

    SweepResult out;
    out.functional = functional_name(spec.functional);
    out.final_tol = spec.final_tol;
    std::vector<long> n_grid = spec.n_grid.empty() ? model.n_grid : spec.n_grid;
    std::sort(n_grid.begin(), n_grid.end());

    // fresh seed branch for the limit population, decoupled from the
    // prelimit replicates
    LimitCharacteristics samp_chars =
        sampling_chars ? sampling_chars(spec.sampling_floor) : chars;
    const long M = spec.n_per_eps;
    std::vector<double> limit_pop(M);
    {
        RngStream limit_rng = RngStream::from_root(root_seed, 0xFFFF0001ULL);
        HybridSampleConfig cfg;
        cfg.chars = samp_chars;
        cfg.horizon = spec.stopped ? 1.5 * spec.t : 1.25 * spec.t;
        cfg.initial_max_set = true;
        cfg.initial_max = std::max(samp_chars.tail.u_pi(), spec.sampling_floor);
        if (samp_chars.tail(cfg.initial_max) == std::numeric_limits<double>::infinity())
            throw std::invalid_argument("convergence_sweep: sampling floor below a finite tail level");
        parallel_for(static_cast<std::size_t>(M), spec.jobs, [&](std::size_t i) {
            RngStream child = limit_rng.child(i);
            if (spec.stopped) {
                auto sv = sample_stopped_limit(cfg, {spec.t}, child).front();
                limit_pop[i] = extract(spec.functional, spec.t, sv.xi, sv.gamma, sv.kappa,
                                       spec.ratio_a);
            } else {
                auto s = sample_hybrid(cfg, child);
                auto v = s.eval(spec.t);
                limit_pop[i] = extract(spec.functional, spec.t, v[0], v[1], v[2], spec.ratio_a);
            }
        });
    }

    std::uint64_t cell = 1;
    for (long n : n_grid) {
        RngStream cell_rng = RngStream::from_root(root_seed, cell++);
        std::vector<double> values(M);
        parallel_for(static_cast<std::size_t>(M), spec.jobs, [&](std::size_t i) {
            RngStream child = cell_rng.child(i);
            if (spec.stopped) {
                CadlagPath path = build_covering_prelimit(model, n, spec.t, child, 1.5 * spec.t);
                auto inv = path.generalized_inverse(spec.t, 2);
                auto v = path.eval(inv.time);
                values[i] = extract(spec.functional, spec.t, v[0], v[1], v[2], spec.ratio_a);
            } else {
                CadlagPath path = build_prelimit(model, ArrayModel::eps_of(n), spec.t, child);
                auto v = path.eval(spec.t);
                values[i] = extract(spec.functional, spec.t, v[0], v[1], v[2], spec.ratio_a);
            }
        });
        double d = ks_distance(values, limit_pop);
        out.n_eps.push_back(n);
        out.distance.push_back(d);
        out.se.push_back(std::sqrt(static_cast<double>(M + M) / (static_cast<double>(M) * M)) *
                         0.5);
    }
    out.trend_pass = trend_ok(out.distance, out.se);
    out.final_pass = out.distance.back() <= spec.final_tol;
    return out;
}

JProbeResult j_compactness_probe(const ArrayModel& model, const std::vector<long>& n_list,
                                 const std::vector<double>& c_list, double T, double T2,
                                 double delta, long n_paths, std::uint64_t root_seed,
                                 double threshold, int jobs) {
    if (!(0.0 < T && T < T2)) throw std::invalid_argument("j_compactness_probe: need 0 < T < T2");
    std::vector<double> cs(c_list);
    std::sort(cs.begin(), cs.end());
    JProbeResult out;
    out.delta = delta;
    out.T = T;
    out.T2 = T2;
    out.threshold = threshold;

    std::uint64_t cell = 1;
    for (long n : n_list) {
        RngStream cell_rng = RngStream::from_root(root_seed, 0xA0000000ULL + cell++);
        std::vector<std::vector<char>> exceed(cs.size(),
                                              std::vector<char>(static_cast<std::size_t>(n_paths)));
        parallel_for(static_cast<std::size_t>(n_paths), jobs, [&](std::size_t i) {
            RngStream child = cell_rng.child(i);
            CadlagPath path = build_prelimit(model, ArrayModel::eps_of(n), T2, child);
            for (std::size_t k = 0; k < cs.size(); ++k)
                exceed[k][i] = modulus_j_exceeds(path, cs[k], T, T2, delta) ? 1 : 0;
        });
        for (std::size_t k = 0; k < cs.size(); ++k) {
            JProbeCell cellrow;
            cellrow.n_eps = n;
            cellrow.c = cs[k];
            cellrow.paths = n_paths;
            for (char e : exceed[k]) cellrow.exceed += e;
            out.cells.push_back(cellrow);
        }
    }
    // verdict: smallest-c column at the largest n
    double final_prob = 1.0;
    long max_n = *std::max_element(n_list.begin(), n_list.end());
    for (const auto& cellrow : out.cells)
        if (cellrow.n_eps == max_n && cellrow.c == cs.front()) final_prob = cellrow.prob();
    out.verdict = final_prob <= threshold;
    return out;
}

ThetaInclusionResult theta_inclusion_check(const ArrayModel& model, long n_eps, double c, double T,
                                           double T2, long n_paths, std::uint64_t root_seed) {
    ThetaInclusionResult out;
    RngStream rng(root_seed);
    for (long i = 0; i < n_paths; ++i) {
        RngStream child = rng.child(static_cast<std::uint64_t>(i));
        double horizon = 2.0 * T2;
        StoppingPath stopping{CadlagPath::constant(1, {0.0}, 1.0), true};
        for (int attempt = 0; attempt < 10 && stopping.truncated; ++attempt) {
            RngStream replay = child;
            CadlagPath path = build_prelimit(model, ArrayModel::eps_of(n_eps), horizon, replay);
            stopping = build_stopping(path, T2);
            horizon *= 2.0;
        }
        if (stopping.truncated)
            throw CapacityError("theta_inclusion_check: kappa never clears T2");
        ++out.paths;
        if (modulus_j(stopping.path, c, T, T2) > 0.0) {
            ++out.dj_positive;
            if (min_jump_gap(stopping.path, T, T2) > c) ++out.violations;
        }
    }
    return out;
}

IndependenceResult independence_probe(const std::vector<std::array<double, 3>>& samples,
                                      double level_m) {
    if (samples.empty()) throw std::domain_error("independence_probe: empty sample");
    const double n = static_cast<double>(samples.size());
    double mean_ind = 0.0;
    for (const auto& s : samples) mean_ind += s[0] > level_m ? 1.0 : 0.0;
    mean_ind /= n;
    IndependenceResult out;
    out.se = 1.0 / std::sqrt(n);
    if (mean_ind == 0.0 || mean_ind == 1.0) {
        out.degenerate = true;
        return out;
    }
    auto corr_with = [&](int coord) {
        double mx = 0.0;
        for (const auto& s : samples) mx += s[coord];
        mx /= n;
        double cxy = 0.0, vx = 0.0;
        for (const auto& s : samples) {
            double ind = s[0] > level_m ? 1.0 : 0.0;
            cxy += (ind - mean_ind) * (s[coord] - mx);
            vx += (s[coord] - mx) * (s[coord] - mx);
        }
        double vind = mean_ind * (1.0 - mean_ind) * n;
        if (vx <= 0.0) return 0.0; // constant component
        return cxy / std::sqrt(vind * vx);
    };
    out.corr_gamma = corr_with(1);
    out.corr_kappa = corr_with(2);
    return out;
}

DecompositionProbeResult conditional_decomposition_probe(const ArrayModel& model,
                                                         const LimitCharacteristics& chars,
                                                         const std::vector<long>& n_list, double u,
                                                         double y, double z) {
    if (!model.truncated_joint_cf)
        throw std::invalid_argument(
            "conditional_decomposition_probe: model lacks an analytic truncated CF");
    DecompositionProbeResult out;
    double rate = chars.tail(u);
    if (rate == std::numeric_limits<double>::infinity())
        throw std::invalid_argument("conditional_decomposition_probe: pi1(u) must be finite");
    out.target = std::exp(-rate) * conditional_charfn(chars, u, 1.0, y, z);
    for (long n : n_list) {
        std::complex<double> single = model.truncated_joint_cf(n, u, y, z);
        std::complex<double> powered = std::pow(single, static_cast<double>(n));
        out.n_eps.push_back(n);
        out.error.push_back(std::abs(powered - out.target));
    }
    out.final_error = out.error.back();
    out.nonincreasing = true;
    for (std::size_t i = 0; i + 1 < out.error.size(); ++i)
        if (out.error[i + 1] > out.error[i] + 1e-9) out.nonincreasing = false;
    return out;
}

} // namespace maxsum
