#include "maxsum/array_model.hpp"

#include "maxsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxsum {

long ArrayModel::n_of_epsilon(double eps) const {
    if (!(eps > 0.0) || !(eps <= 1.0))
        throw std::domain_error("ArrayModel: epsilon must lie in (0, 1]");
    long n = std::lround(1.0 / eps);
    if (n < 1) throw std::domain_error("ArrayModel: n_of_epsilon must be positive");
    return n;
}

std::vector<TripleSample> sample_triples(const ArrayModel& model, double eps, long count,
                                         RngStream& rng) {
    if (count < 1) throw std::invalid_argument("sample_triples: count must be >= 1");
    long n = model.n_of_epsilon(eps);
    std::vector<TripleSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        TripleSample s = model.draw(n, rng);
        if (s.kappa < 0.0) throw std::invalid_argument("sample_triples: family produced kappa < 0");
        out.push_back(s);
    }
    return out;
}

CadlagPath build_prelimit(const ArrayModel& model, double eps, double horizon, RngStream& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("build_prelimit: horizon must be positive");
    long n = model.n_of_epsilon(eps);
    double jumps_needed = std::floor(horizon * static_cast<double>(n));
    if (jumps_needed > model.memory_budget)
        throw CapacityError("build_prelimit: horizon * n_eps exceeds the jump budget");
    long K = static_cast<long>(jumps_needed);

    TripleSample first = model.draw(n, rng);
    if (first.kappa < 0.0) throw std::invalid_argument("build_prelimit: family produced kappa < 0");

    CadlagPath path(3, {first.xi, 0.0, 0.0}, {0.0, 0.0, 0.0},
                    horizon,
                    {CoordFlag::running_max, CoordFlag::free_coord, CoordFlag::nondecreasing});
    path.reserve(static_cast<std::size_t>(K));

    double running_max = first.xi;
    double gamma_sum = 0.0;
    double kappa_sum = 0.0;
    std::vector<double> sizes(3), values(3);
    for (long k = 1; k <= K; ++k) {
        TripleSample s = k == 1 ? first : model.draw(n, rng);
        if (s.kappa < 0.0) throw std::invalid_argument("build_prelimit: family produced kappa < 0");
        double t = static_cast<double>(k) / static_cast<double>(n);
        double new_max = std::max(running_max, s.xi);
        sizes[0] = new_max - running_max;
        sizes[1] = s.gamma;
        sizes[2] = s.kappa;
        gamma_sum += s.gamma;
        kappa_sum += s.kappa;
        values[0] = new_max; // exact running maximum, not a cumulated diff
        values[1] = gamma_sum;
        values[2] = kappa_sum;
        path.append_jump_with_values(t, sizes, values);
        running_max = new_max;
    }
    return path;
}

StoppingPath build_stopping(const CadlagPath& prelimit, double t_max, int kappa_coord) {
    if (!(t_max > 0.0)) throw std::invalid_argument("build_stopping: t_max must be positive");
    if (prelimit.flag(kappa_coord) == CoordFlag::free_coord)
        throw std::invalid_argument("build_stopping: kappa coordinate must be nondecreasing");
    if (prelimit.initial(kappa_coord) != 0.0)
        throw std::invalid_argument("build_stopping: kappa coordinate must start at 0");
    const double drift = prelimit.drift(kappa_coord);
    const double horizon = prelimit.horizon();

    bool has_jumps = false;
    for (std::size_t i = 0; i < prelimit.jump_count(); ++i)
        if (prelimit.jump_size(i, kappa_coord) != 0.0) { has_jumps = true; break; }

    if (drift > 0.0 && has_jumps)
        throw std::invalid_argument(
            "build_stopping: mixed drift+jump coordinates are not exactly invertible as a path; "
            "use generalized_inverse pointwise");

    if (!has_jumps) {
        // pure drift: tau(t) = t / drift while kappa reaches t on [0, horizon]
        if (drift <= 0.0) {
            CadlagPath flat = CadlagPath::constant(1, {horizon}, t_max);
            flat.set_flag(0, CoordFlag::nondecreasing);
            return {std::move(flat), true};
        }
        double reach = drift * horizon; // kappa value at the end of the domain
        bool truncated = reach < t_max;
        double domain = truncated ? reach : t_max;
        CadlagPath tau(1, {0.0}, {1.0 / drift}, domain, {CoordFlag::nondecreasing});
        return {std::move(tau), truncated};
    }

    // pure step: collect the strict-increase levels of the kappa coordinate
    std::vector<double> levels, times;
    double prev = 0.0;
    for (std::size_t i = 0; i < prelimit.jump_count(); ++i) {
        double v = prelimit.value_after(i, kappa_coord);
        if (v > prev) {
            levels.push_back(v);
            times.push_back(prelimit.jump_time(i));
            prev = v;
        }
    }
    if (levels.empty()) {
        CadlagPath flat = CadlagPath::constant(1, {horizon}, t_max);
        flat.set_flag(0, CoordFlag::nondecreasing);
        return {std::move(flat), true};
    }
    bool truncated = levels.back() <= t_max;
    CadlagPath tau(1, {times.front()}, {0.0}, t_max, {CoordFlag::nondecreasing});
    double cur = times.front();
    for (std::size_t k = 0; k < levels.size() && levels[k] <= t_max; ++k) {
        double next = k + 1 < levels.size() ? times[k + 1] : horizon;
        if (levels[k] > 0.0 && next != cur) {
            tau.append_jump_with_values(levels[k], {next - cur}, {next});
            cur = next;
        }
    }
    return {std::move(tau), truncated};
}

ConditionalSampleResult sample_conditional_triples(const ArrayModel& model, double eps, double u,
                                                   long count, RngStream& rng,
                                                   double acceptance_floor) {
    if (count < 1) throw std::invalid_argument("sample_conditional_triples: count must be >= 1");
    long n = model.n_of_epsilon(eps);
    ConditionalSampleResult out;
    out.samples.reserve(static_cast<std::size_t>(count));
    long attempts = 0;
    long accepted = 0;
    const long floor_window = std::max<long>(1000, static_cast<long>(10.0 / acceptance_floor));
    while (accepted < count) {
        ++attempts;
        TripleSample s = model.draw(n, rng);
        if (s.xi <= u) {
            out.samples.push_back(s);
            ++accepted;
        }
        if (attempts >= floor_window &&
            static_cast<double>(accepted) / static_cast<double>(attempts) < acceptance_floor)
            throw RejectionBudgetError(
                "sample_conditional_triples: acceptance rate below floor; raise u");
    }
    out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(attempts);
    return out;
}

} // namespace maxsum
