#include "maxsum/limit_sampler.hpp"

#include "maxsum/condition_checker.hpp"
#include "maxsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MarkDraw {
    bool marked = false;
    double mark = 0.0;
    double v = 0.0;
    double w = 0.0;
};

/// Samples single jumps from a finite-activity measure: atoms by cumulative
/// mass, curves through their tail-mass inverse.
class JumpSampler {
  public:
    explicit JumpSampler(const JointJumpMeasure& m) : measure_(m) {
        double acc = 0.0;
        for (const auto& a : m.atoms()) {
            acc += a.mass;
            cum_.push_back(acc);
        }
        for (const auto& c : m.curves()) {
            if (!c.tail_inverse)
                throw std::invalid_argument(
                    "sampling from an analytic jump component needs tail_inverse");
            double mass = c.mass();
            if (!std::isfinite(mass))
                throw std::invalid_argument("sampling requires finite-activity components");
            acc += mass;
            cum_.push_back(acc);
        }
        total_ = acc;
    }

    double total_mass() const { return total_; }

    MarkDraw draw(RngStream& rng) const {
        double x = rng.uniform() * total_;
        std::size_t idx = std::lower_bound(cum_.begin(), cum_.end(), x) - cum_.begin();
        if (idx >= cum_.size()) idx = cum_.size() - 1;
        const auto& atoms = measure_.atoms();
        if (idx < atoms.size()) {
            const Atom& a = atoms[idx];
            return {a.marked, a.mark, a.v, a.w};
        }
        const CurveComponent& c = measure_.curves()[idx - atoms.size()];
        double tail_hi = c.p_hi == kInf ? 0.0 : c.tail_mass(c.p_hi);
        double tail_lo = c.tail_mass(c.p_lo);
        double target = tail_hi + rng.uniform() * (tail_lo - tail_hi);
        double p = std::clamp(c.tail_inverse(target), c.p_lo, c.p_hi);
        return {c.marked, c.mark_at(p), c.v_at(p), c.w_at(p)};
    }

  private:
    const JointJumpMeasure& measure_;
    std::vector<double> cum_;
    double total_ = 0.0;
};

GaussianSkeleton make_skeleton(double b, double horizon, double step, RngStream& rng) {
    GaussianSkeleton sk;
    if (b <= 0.0) return sk;
    if (step <= 0.0) step = horizon / 1024.0;
    if (step > horizon / 100.0)
        throw std::invalid_argument("euler_step must be at most horizon/100");
    sk.step = step;
    std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step)) + 1;
    sk.cum.resize(n + 1);
    sk.cum[0] = 0.0;
    double scale = b * std::sqrt(step);
    for (std::size_t k = 1; k <= n; ++k) sk.cum[k] = sk.cum[k - 1] + scale * rng.normal();
    return sk;
}

void validate_mark_consistency(const LimitCharacteristics& chars, double initial_max) {
    std::vector<double> probes{initial_max};
    for (const auto& a : chars.jumps.atoms())
        if (a.marked) probes.push_back(a.mark);
    for (const auto& c : chars.jumps.curves()) {
        if (!c.marked) continue;
        for (double q : {0.25, 0.5, 0.75}) {
            double tail_hi = c.p_hi == kInf ? 0.0 : c.tail_mass(c.p_hi);
            double m = tail_hi + q * (c.tail_mass(c.p_lo) - tail_hi);
            if (c.tail_inverse) probes.push_back(c.mark_at(c.tail_inverse(m)));
        }
    }
    double scale = std::max(1.0, chars.jumps.total_mass());
    for (double u : probes) {
        double gap = mark_consistency_gap(chars, u);
        if (!(gap <= 1e-6 * scale))
            throw std::invalid_argument(
                "sample_hybrid: pi1 disagrees with the mark masses on the sampled range");
    }
}

} // namespace

double GaussianSkeleton::eval(double t) const {
    if (empty()) return 0.0;
    double x = t / step;
    std::size_t k = static_cast<std::size_t>(x);
    if (k + 1 >= cum.size()) return cum.back();
    double frac = x - static_cast<double>(k);
    return cum[k] + frac * (cum[k + 1] - cum[k]);
}

std::array<double, 2> LevySample::eval(double t) const {
    auto v = path.eval(t);
    return {v[0] + skel.eval(t), v[1]};
}

std::array<double, 3> HybridSample::eval(double t) const {
    auto v = path.eval(t);
    return {v[0], v[1] + skel.eval(t), v[2]};
}

CadlagPath sample_extremal(const LimitCharacteristics& chars, double t_start, double horizon,
                           RngStream& rng) {
    if (!(t_start > 0.0) || !(t_start < horizon))
        throw std::invalid_argument("sample_extremal: need 0 < t_start < horizon");
    const TailFunction& tail = chars.tail;
    // entry law P{xi(t_start) <= u} = exp(-t_start pi1(u))
    double q = rng.exponential() / t_start;
    double level = tail.inverse(q);
    if (!std::isfinite(level))
        throw std::runtime_error("sample_extremal: entry draw escaped to infinity");

    CadlagPath path(1, {level}, {0.0}, horizon, {CoordFlag::running_max});
    double t = t_start;
    while (true) {
        double rate = tail(level);
        if (!(rate > 0.0)) break; // reached v_pi, no further records
        if (rate == kInf) throw std::runtime_error("sample_extremal: infinite rate at a level");
        t += rng.exponential(rate);
        if (t > horizon) break;
        double target = rng.uniform_pos() * rate;
        double next = tail.inverse(target);
        if (!(next > level)) continue; // flat stretch of pi1; no real record
        path.append_jump_with_values(t, {next - level}, {next});
        level = next;
    }
    return path;
}

LevySample sample_levy(const LimitCharacteristics& chars, double horizon, double euler_step,
                       RngStream& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_levy: horizon must be positive");
    SamplerParameters sp = sampler_parameters(chars);

    LevySample out{CadlagPath(2, {0.0, 0.0}, {sp.gamma_drift, sp.kappa_drift}, horizon,
                              {CoordFlag::free_coord, CoordFlag::nondecreasing}),
                   {}};
    out.skel = make_skeleton(sp.b, horizon, euler_step, rng);
    if (sp.total_mass <= 0.0) return out;

    JumpSampler js(chars.jumps);
    double t = 0.0;
    while (true) {
        t += rng.exponential(js.total_mass());
        if (t > horizon) break;
        MarkDraw d = js.draw(rng);
        if (d.v == 0.0 && d.w == 0.0) continue; // pure-mark atom: no sum jump
        out.path.append_jump(t, {d.v, d.w});
    }
    return out;
}

HybridSample sample_hybrid(const HybridSampleConfig& config, RngStream& rng) {
    const LimitCharacteristics& chars = config.chars;
    if (!(config.horizon > 0.0)) throw std::invalid_argument("sample_hybrid: bad horizon");
    double m0 = config.initial_max_set ? config.initial_max : chars.tail.u_pi();
    if (!std::isfinite(m0) || chars.tail(m0) == kInf)
        throw std::invalid_argument(
            "sample_hybrid: initial_max must be finite with pi1(initial_max) < inf");
    validate_mark_consistency(chars, m0);
    SamplerParameters sp = sampler_parameters(chars);

    HybridSample out{CadlagPath(3, {m0, 0.0, 0.0},
                                {0.0, sp.gamma_drift, sp.kappa_drift}, config.horizon,
                                {CoordFlag::running_max, CoordFlag::free_coord,
                                 CoordFlag::nondecreasing}),
                     {}};
    out.skel = make_skeleton(sp.b, config.horizon, config.euler_step, rng);
    if (sp.total_mass <= 0.0) return out;

    JumpSampler js(chars.jumps);
    double t = 0.0;
    double cur_max = m0;
    double gamma_jumps = 0.0, kappa_jumps = 0.0;
    while (true) {
        t += rng.exponential(js.total_mass());
        if (t > config.horizon) break;
        MarkDraw d = js.draw(rng);
        double new_max = (d.marked && d.mark > cur_max) ? d.mark : cur_max;
        if (new_max == cur_max && d.v == 0.0 && d.w == 0.0) continue;
        gamma_jumps += d.v;
        kappa_jumps += d.w;
        out.path.append_jump_with_values(
            t, {new_max - cur_max, d.v, d.w},
            {new_max, sp.gamma_drift * t + gamma_jumps, sp.kappa_drift * t + kappa_jumps});
        cur_max = new_max;
    }
    return out;
}

std::vector<StoppedValue> sample_stopped_limit(const HybridSampleConfig& config,
                                               const std::vector<double>& t_grid, RngStream& rng) {
    if (t_grid.empty()) throw std::invalid_argument("sample_stopped_limit: empty grid");
    auto cls = classify_condition_D(config.chars);
    if (!cls.D)
        throw std::invalid_argument("sample_stopped_limit: Condition D fails (kappa limit trivial)");
    for (double t : t_grid)
        if (!cls.V.contains(t))
            throw std::invalid_argument(
                "sample_stopped_limit: grid point outside the stochastic-continuity set V "
                "(stopped convergence is asserted only on V)");
    double t_max = *std::max_element(t_grid.begin(), t_grid.end());

    HybridSampleConfig local = config;
    for (int attempt = 0; attempt < 16; ++attempt) {
        HybridSample sample = sample_hybrid(local, rng);
        if (sample.path.eval(local.horizon)[2] > t_max) {
            std::vector<StoppedValue> out;
            out.reserve(t_grid.size());
            for (double t : t_grid) {
                auto inv = sample.path.generalized_inverse(t, 2);
                auto vals = sample.eval(inv.time);
                out.push_back({t, inv.time, vals[0], vals[1], vals[2]});
            }
            return out;
        }
        local.horizon *= 2.0;
    }
    throw CapacityError("sample_stopped_limit: kappa grows too slowly to clear the grid");
}

} // namespace maxsum
