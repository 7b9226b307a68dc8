#include "maxsum/limit_law.hpp"

#include "maxsum/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool ok = false;
};

// {p in (plo, phi) : lo < c0 + c1 p < hi}
Interval affine_preimage(double c0, double c1, double lo, double hi, double plo, double phi) {
    Interval out;
    if (c1 == 0.0) {
        if (c0 > lo && c0 < hi) return {plo, phi, true};
        return out;
    }
    double a = (lo - c0) / c1;
    double b = (hi - c0) / c1;
    if (c1 < 0.0) std::swap(a, b);
    if (lo == -kInf) (c1 > 0.0 ? a : b) = (c1 > 0.0 ? -kInf : kInf);
    out.lo = std::max(plo, a);
    out.hi = std::min(phi, b);
    out.ok = out.lo < out.hi;
    return out;
}

// stable evaluation of e^{i theta} - 1 - i theta / (1 + r2)
std::complex<double> compensated_exp(double theta, double r2) {
    double s = std::sin(0.5 * theta);
    double re = -2.0 * s * s;
    double im = (std::sin(theta) - theta) + theta * (r2 / (1.0 + r2));
    return {re, im};
}

std::complex<double> plain_exp(double theta) {
    double s = std::sin(0.5 * theta);
    return {-2.0 * s * s, std::sin(theta)};
}

} // namespace

// ---------------------------------------------------------------------------
// TailFunction
// ---------------------------------------------------------------------------

TailFunction TailFunction::frechet(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("frechet: alpha must be positive");
    TailFunction f;
    f.family_ = Family::frechet;
    f.alpha_ = alpha;
    f.u_pi_ = 0.0;
    f.v_pi_ = kInf;
    return f;
}

TailFunction TailFunction::gumbel() {
    TailFunction f;
    f.family_ = Family::gumbel;
    f.u_pi_ = -kInf;
    f.v_pi_ = kInf;
    return f;
}

TailFunction TailFunction::neg_weibull(double alpha, double right_end) {
    if (!(alpha > 0.0)) throw std::invalid_argument("neg_weibull: alpha must be positive");
    TailFunction f;
    f.family_ = Family::neg_weibull;
    f.alpha_ = alpha;
    f.end_ = right_end;
    f.u_pi_ = -kInf;
    f.v_pi_ = right_end;
    return f;
}

TailFunction TailFunction::zero_above(double threshold) {
    TailFunction f;
    f.family_ = Family::zero_above;
    f.end_ = threshold;
    f.u_pi_ = threshold;
    f.v_pi_ = threshold;
    f.discontinuities_ = {threshold};
    return f;
}

TailFunction TailFunction::tabulated(std::vector<double> thresholds, std::vector<double> values) {
    if (thresholds.empty() || thresholds.size() != values.size())
        throw std::invalid_argument("tabulated: thresholds/values mismatch");
    for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
        if (!(thresholds[i] < thresholds[i + 1]))
            throw std::invalid_argument("tabulated: thresholds must be strictly increasing");
        if (values[i] < values[i + 1])
            throw std::invalid_argument("tabulated: values must be nonincreasing");
    }
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("tabulated: values must be finite and nonnegative");
    TailFunction f;
    f.family_ = Family::tabulated;
    f.u_pi_ = thresholds.front();
    f.v_pi_ = kInf;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0.0) {
            f.v_pi_ = thresholds[i];
            break;
        }
    }
    f.discontinuities_.push_back(thresholds.front());
    for (std::size_t i = 0; i + 1 < thresholds.size(); ++i)
        if (values[i] != values[i + 1]) f.discontinuities_.push_back(thresholds[i + 1]);
    f.thresholds_ = std::move(thresholds);
    f.values_ = std::move(values);
    return f;
}

TailFunction TailFunction::from_mark_masses(std::vector<std::pair<double, double>> mark_mass,
                                            double floor) {
    std::sort(mark_mass.begin(), mark_mass.end());
    std::vector<double> marks, masses;
    for (auto [m, q] : mark_mass) {
        if (!(q > 0.0)) throw std::invalid_argument("from_mark_masses: masses must be positive");
        if (!marks.empty() && marks.back() == m) {
            masses.back() += q;
        } else {
            marks.push_back(m);
            masses.push_back(q);
        }
    }
    if (marks.empty()) throw std::invalid_argument("from_mark_masses: no marks");
    if (!(floor < marks.front()))
        throw std::invalid_argument("from_mark_masses: floor must sit below the smallest mark");
    double total = 0.0;
    for (double q : masses) total += q;
    std::vector<double> thresholds{floor}, values{total};
    double rest = total;
    for (std::size_t i = 0; i < marks.size(); ++i) {
        rest -= masses[i];
        thresholds.push_back(marks[i]);
        values.push_back(std::max(rest, 0.0));
    }
    values.back() = 0.0;
    return tabulated(std::move(thresholds), std::move(values));
}

double TailFunction::operator()(double u) const {
    switch (family_) {
        case Family::frechet:
            if (u == kInf) return 0.0;
            return u <= 0.0 ? kInf : std::pow(u, -alpha_);
        case Family::gumbel:
            if (u == kInf) return 0.0;
            return u == -kInf ? kInf : std::exp(-u);
        case Family::neg_weibull:
            if (u >= end_) return 0.0;
            return u == -kInf ? kInf : std::pow(end_ - u, alpha_);
        case Family::zero_above:
            return u >= end_ ? 0.0 : kInf;
        case Family::tabulated: {
            if (u < thresholds_.front()) return kInf;
            auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), u);
            return values_[static_cast<std::size_t>(it - thresholds_.begin()) - 1];
        }
    }
    return kInf;
}

bool TailFunction::is_continuity_point(double u) const {
    for (double d : discontinuities_)
        if (d == u) return false;
    return true;
}

double TailFunction::inverse(double q) const {
    if (!(q >= 0.0)) throw std::invalid_argument("TailFunction::inverse: q must be >= 0");
    switch (family_) {
        case Family::frechet:
            return q == 0.0 ? kInf : std::pow(q, -1.0 / alpha_);
        case Family::gumbel:
            return q == 0.0 ? kInf : -std::log(q);
        case Family::neg_weibull:
            return end_ - std::pow(q, 1.0 / alpha_);
        case Family::zero_above:
            return end_;
        case Family::tabulated:
            for (std::size_t i = 0; i < values_.size(); ++i)
                if (values_[i] <= q) return thresholds_[i];
            return kInf;
    }
    return kInf;
}

// ---------------------------------------------------------------------------
// JointJumpMeasure
// ---------------------------------------------------------------------------

double CurveComponent::mass_between(double a, double b) const {
    double lo = std::max(a, p_lo), hi = std::min(b, p_hi);
    if (!(lo < hi)) return 0.0;
    double head = tail_mass(lo);
    double tail = hi == kInf ? 0.0 : tail_mass(hi);
    return std::max(head - tail, 0.0);
}

double CurveComponent::mass() const { return mass_between(p_lo, p_hi); }

JointJumpMeasure JointJumpMeasure::from_atoms(std::vector<Atom> atoms) {
    JointJumpMeasure m;
    for (auto& a : atoms) m.add_atom(a);
    return m;
}

void JointJumpMeasure::add_atom(Atom atom) {
    if (!(atom.mass > 0.0)) throw std::invalid_argument("jump measure: atom mass must be positive");
    if (atom.w < 0.0) throw std::invalid_argument("jump measure: w must be nonnegative");
    if (!atom.marked && atom.v == 0.0 && atom.w == 0.0)
        throw std::invalid_argument("jump measure: unmarked null jumps are forbidden");
    atoms_.push_back(atom);
}

void JointJumpMeasure::add_curve(CurveComponent curve) {
    if (!curve.intensity || !curve.tail_mass)
        throw std::invalid_argument("jump measure: curve needs intensity and tail_mass");
    if (!(curve.p_lo < curve.p_hi))
        throw std::invalid_argument("jump measure: empty curve parameter range");
    if (curve.marked && curve.m1 < 0.0)
        throw std::invalid_argument("jump measure: curve mark map must be nondecreasing");
    double w_end = curve.p_hi == kInf ? (curve.w1 < 0.0 ? -1.0 : 0.0)
                                      : curve.w_at(curve.p_hi);
    if (curve.w_at(curve.p_lo) < -1e-12 || w_end < -1e-12)
        throw std::invalid_argument("jump measure: w must stay nonnegative on the curve");
    curves_.push_back(std::move(curve));
}

double JointJumpMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass;
    for (const auto& c : curves_) {
        if (c.p_lo <= 0.0 && !std::isfinite(c.tail_mass(std::max(c.p_lo, 1e-300)))) return kInf;
        double m = c.mass();
        if (!std::isfinite(m)) return kInf;
        s += m;
    }
    return s;
}

bool JointJumpMeasure::finite_mass() const { return std::isfinite(total_mass()); }

double JointJumpMeasure::mass_mark_above(double u) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (a.marked && a.mark > u) s += a.mass;
    for (const auto& c : curves_) {
        if (!c.marked) continue;
        if (c.m1 == 0.0) {
            if (c.m0 > u) s += c.mass();
        } else {
            double cut = (u - c.m0) / c.m1;
            s += c.mass_between(std::max(c.p_lo, cut), c.p_hi);
        }
    }
    return s;
}

double JointJumpMeasure::mass_w_above(double x) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (a.w > x) s += a.mass;
    for (const auto& c : curves_) {
        auto iv = affine_preimage(c.w0, c.w1, x, kInf, c.p_lo, c.p_hi);
        if (iv.ok) s += c.mass_between(iv.lo, iv.hi);
    }
    return s;
}

double JointJumpMeasure::mass_v_abs_above(double x) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (std::abs(a.v) > x) s += a.mass;
    for (const auto& c : curves_) {
        for (auto iv : {affine_preimage(c.v0, c.v1, x, kInf, c.p_lo, c.p_hi),
                        affine_preimage(c.v0, c.v1, -kInf, -x, c.p_lo, c.p_hi)})
            if (iv.ok) s += c.mass_between(iv.lo, iv.hi);
    }
    return s;
}

JointJumpMeasure JointJumpMeasure::restrict_mark_above(double u) const {
    JointJumpMeasure out;
    for (const auto& a : atoms_)
        if (a.marked && a.mark > u) out.atoms_.push_back(a);
    for (const auto& c : curves_) {
        if (!c.marked) continue;
        if (c.m1 == 0.0) {
            if (c.m0 > u) out.curves_.push_back(c);
        } else {
            double cut = (u - c.m0) / c.m1;
            if (cut < c.p_hi) {
                CurveComponent r = c;
                r.p_lo = std::max(c.p_lo, cut);
                if (r.p_lo < r.p_hi) out.curves_.push_back(std::move(r));
            }
        }
    }
    return out;
}

JointJumpMeasure JointJumpMeasure::complement_mark_above(double u) const {
    JointJumpMeasure out;
    for (const auto& a : atoms_)
        if (!a.marked || a.mark <= u) out.atoms_.push_back(a);
    for (const auto& c : curves_) {
        if (!c.marked) {
            out.curves_.push_back(c);
        } else if (c.m1 == 0.0) {
            if (c.m0 <= u) out.curves_.push_back(c);
        } else {
            double cut = (u - c.m0) / c.m1;
            if (cut > c.p_lo) {
                CurveComponent r = c;
                r.p_hi = std::min(c.p_hi, cut);
                if (r.p_lo < r.p_hi) out.curves_.push_back(std::move(r));
            }
        }
    }
    return out;
}

namespace {

// Curve integrals run in log-parameter space: power-law intensities become
// smooth exponentials, the p = 0 endpoint of infinite-activity families maps
// to s = -inf, and no quadrature node can collapse into a singular endpoint.
// The zero guard keeps 0 * inf out of underflowed nodes.
double curve_int(const CurveComponent& c, double plo, double phi,
                 const std::function<double(double)>& g, double tol) {
    plo = std::max(plo, c.p_lo);
    phi = std::min(phi, c.p_hi);
    if (!(plo < phi) || phi <= 0.0) return 0.0;
    double s_lo = plo <= 0.0 ? -kInf : std::log(plo);
    double s_hi = phi == kInf ? kInf : std::log(phi);
    return quad::integrate(
        [&](double s) {
            double p = std::exp(s);
            if (p <= 0.0 || p == kInf) return 0.0;
            double gv = g(p);
            if (gv == 0.0) return 0.0;
            double val = gv * c.intensity(p) * p;
            return std::isfinite(val) ? val : 0.0;
        },
        s_lo, s_hi, tol);
}

} // namespace

double JointJumpMeasure::int_v_over_1pv2(double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass * a.v / (1.0 + a.v * a.v);
    for (const auto& c : curves_)
        s += curve_int(c, -kInf, kInf,
                       [&](double p) {
                           double v = c.v_at(p);
                           return v / (1.0 + v * v);
                       },
                       tol);
    return s;
}

double JointJumpMeasure::int_v_over_1pv2_above(double x, double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (std::abs(a.v) > x) s += a.mass * a.v / (1.0 + a.v * a.v);
    for (const auto& c : curves_) {
        auto g = [&](double p) {
            double v = c.v_at(p);
            return v / (1.0 + v * v);
        };
        for (auto iv : {affine_preimage(c.v0, c.v1, x, kInf, c.p_lo, c.p_hi),
                        affine_preimage(c.v0, c.v1, -kInf, -x, c.p_lo, c.p_hi)})
            if (iv.ok) s += curve_int(c, iv.lo, iv.hi, g, tol);
    }
    return s;
}

double JointJumpMeasure::int_v3_over_1pv2_below(double x, double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (std::abs(a.v) < x) s += a.mass * a.v * a.v * a.v / (1.0 + a.v * a.v);
    for (const auto& c : curves_) {
        auto iv = affine_preimage(c.v0, c.v1, -x, x, c.p_lo, c.p_hi);
        if (iv.ok)
            s += curve_int(c, iv.lo, iv.hi,
                           [&](double p) {
                               double v = c.v_at(p);
                               return v * v * v / (1.0 + v * v);
                           },
                           tol);
    }
    return s;
}

double JointJumpMeasure::int_v_below_abs(double x, double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (std::abs(a.v) <= x) s += a.mass * a.v;
    for (const auto& c : curves_) {
        auto iv = affine_preimage(c.v0, c.v1, -x, x, c.p_lo, c.p_hi);
        if (iv.ok) s += curve_int(c, iv.lo, iv.hi, [&](double p) { return c.v_at(p); }, tol);
    }
    return s;
}

double JointJumpMeasure::int_v2_below_abs(double x, double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (std::abs(a.v) <= x) s += a.mass * a.v * a.v;
    for (const auto& c : curves_) {
        auto iv = affine_preimage(c.v0, c.v1, -x, x, c.p_lo, c.p_hi);
        if (iv.ok)
            s += curve_int(c, iv.lo, iv.hi,
                           [&](double p) {
                               double v = c.v_at(p);
                               return v * v;
                           },
                           tol);
    }
    return s;
}

double JointJumpMeasure::int_w_over_1pw2(double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass * a.w / (1.0 + a.w * a.w);
    for (const auto& c : curves_)
        s += curve_int(c, -kInf, kInf,
                       [&](double p) {
                           double w = c.w_at(p);
                           return w / (1.0 + w * w);
                       },
                       tol);
    return s;
}

double JointJumpMeasure::int_w_below(double x, double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (a.w > 0.0 && a.w < x) s += a.mass * a.w;
    for (const auto& c : curves_) {
        auto iv = affine_preimage(c.w0, c.w1, 0.0, x, c.p_lo, c.p_hi);
        if (iv.ok) s += curve_int(c, iv.lo, iv.hi, [&](double p) { return c.w_at(p); }, tol);
    }
    return s;
}

double JointJumpMeasure::int_w2_below(double x, double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (a.w > 0.0 && a.w <= x) s += a.mass * a.w * a.w;
    for (const auto& c : curves_) {
        auto iv = affine_preimage(c.w0, c.w1, 0.0, x, c.p_lo, c.p_hi);
        if (iv.ok)
            s += curve_int(c, iv.lo, iv.hi,
                           [&](double p) {
                               double w = c.w_at(p);
                               return w * w;
                           },
                           tol);
    }
    return s;
}

double JointJumpMeasure::int_vw_below_abs(double x, double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (std::abs(a.v) <= x && a.w <= x) s += a.mass * a.v * a.w;
    for (const auto& c : curves_) {
        auto iv = affine_preimage(c.v0, c.v1, -x, x, c.p_lo, c.p_hi);
        auto iw = affine_preimage(c.w0, c.w1, -1.0, x, c.p_lo, c.p_hi);
        if (!iv.ok || !iw.ok) continue;
        double lo = std::max(iv.lo, iw.lo), hi = std::min(iv.hi, iw.hi);
        if (lo < hi)
            s += curve_int(c, lo, hi, [&](double p) { return c.v_at(p) * c.w_at(p); }, tol);
    }
    return s;
}

double JointJumpMeasure::int_joint_v_compensator(double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass * a.v / (1.0 + a.v * a.v + a.w * a.w);
    for (const auto& c : curves_)
        s += curve_int(c, -kInf, kInf,
                       [&](double p) {
                           double v = c.v_at(p), w = c.w_at(p);
                           return v / (1.0 + v * v + w * w);
                       },
                       tol);
    return s;
}

double JointJumpMeasure::int_joint_w_compensator(double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass * a.w / (1.0 + a.v * a.v + a.w * a.w);
    for (const auto& c : curves_)
        s += curve_int(c, -kInf, kInf,
                       [&](double p) {
                           double v = c.v_at(p), w = c.w_at(p);
                           return w / (1.0 + v * v + w * w);
                       },
                       tol);
    return s;
}

double JointJumpMeasure::integrate_vw(const std::function<double(double, double)>& f,
                                      double tol) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass * f(a.v, a.w);
    for (const auto& c : curves_)
        s += curve_int(c, -kInf, kInf, [&](double p) { return f(c.v_at(p), c.w_at(p)); }, tol);
    return s;
}

std::complex<double> JointJumpMeasure::levy_integral(double y, double z, double tol) const {
    std::complex<double> s{0.0, 0.0};
    for (const auto& a : atoms_)
        s += a.mass * compensated_exp(y * a.v + z * a.w, a.v * a.v + a.w * a.w);
    for (const auto& c : curves_) {
        double re = curve_int(c, -kInf, kInf,
                              [&](double p) {
                                  double v = c.v_at(p), w = c.w_at(p);
                                  return compensated_exp(y * v + z * w, v * v + w * w).real();
                              },
                              tol);
        double im = curve_int(c, -kInf, kInf,
                              [&](double p) {
                                  double v = c.v_at(p), w = c.w_at(p);
                                  return compensated_exp(y * v + z * w, v * v + w * w).imag();
                              },
                              tol);
        s += std::complex<double>{re, im};
    }
    return s;
}

std::complex<double> JointJumpMeasure::plain_jump_integral(double y, double z, double tol) const {
    if (!finite_mass())
        throw std::invalid_argument("plain_jump_integral requires a finite-activity measure");
    std::complex<double> s{0.0, 0.0};
    for (const auto& a : atoms_) s += a.mass * plain_exp(y * a.v + z * a.w);
    for (const auto& c : curves_) {
        double re = curve_int(c, -kInf, kInf,
                              [&](double p) {
                                  return plain_exp(y * c.v_at(p) + z * c.w_at(p)).real();
                              },
                              tol);
        double im = curve_int(c, -kInf, kInf,
                              [&](double p) {
                                  return plain_exp(y * c.v_at(p) + z * c.w_at(p)).imag();
                              },
                              tol);
        s += std::complex<double>{re, im};
    }
    return s;
}

// ---------------------------------------------------------------------------
// LimitCharacteristics and kernels
// ---------------------------------------------------------------------------

LimitCharacteristics LimitCharacteristics::make(TailFunction tail, JointJumpMeasure jumps,
                                                double a, double b2, double c) {
    if (b2 < 0.0) throw std::invalid_argument("characteristics: b2 must be nonnegative");
    if (c < 0.0) throw std::invalid_argument("characteristics: c must be nonnegative");
    LimitCharacteristics ch{std::move(tail), std::move(jumps), a, b2, c, 0.0};
    ch.d = c + ch.jumps.int_w_over_1pw2();
    return ch;
}

double LimitCharacteristics::a_of_v(double v) const {
    if (!(v > 0.0)) throw std::invalid_argument("a_of_v: v must be positive");
    return a + jumps.int_v3_over_1pv2_below(v) - jumps.int_v_over_1pv2_above(v);
}

double LimitCharacteristics::c_of_w(double w) const {
    if (!(w > 0.0)) throw std::invalid_argument("c_of_w: w must be positive");
    return c + jumps.int_w_below(w);
}

double pi1(const LimitCharacteristics& chars, double u) { return chars.tail(u); }

double extremal_fdd(const LimitCharacteristics& chars, const std::vector<double>& times,
                    const std::vector<double>& levels) {
    if (times.empty() || times.size() != levels.size())
        throw std::invalid_argument("extremal_fdd: times/levels mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) throw std::invalid_argument("extremal_fdd: times must be positive");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("extremal_fdd: times must be strictly increasing");
    }
    // monotone reduction: a nondecreasing process stays below min of later levels
    std::vector<double> eff(levels);
    for (std::size_t i = eff.size(); i-- > 1;) eff[i - 1] = std::min(eff[i - 1], eff[i]);
    double log_p = 0.0;
    double prev_t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double rate = chars.tail(eff[i]);
        if (rate == kInf) return 0.0;
        log_p -= rate * (times[i] - prev_t);
        prev_t = times[i];
    }
    return std::exp(log_p);
}

double transition_kernel(const LimitCharacteristics& chars, double v, double u, double t) {
    if (t < 0.0) throw std::invalid_argument("transition_kernel: t must be nonnegative");
    if (v > u) return 0.0;
    if (t == 0.0) return 1.0;
    double rate = chars.tail(u);
    return rate == kInf ? 0.0 : std::exp(-t * rate);
}

namespace {

std::complex<double> levy_exponent(double a, double b2, double d, const JointJumpMeasure& jumps,
                                   double y, double z) {
    std::complex<double> e = jumps.levy_integral(y, z);
    return std::complex<double>(-0.5 * b2 * y * y, a * y + d * z) + e;
}

} // namespace

std::complex<double> levy_charfn(const LimitCharacteristics& chars, double t, double y, double z) {
    if (t < 0.0) throw std::invalid_argument("levy_charfn: t must be nonnegative");
    if (t == 0.0) return {1.0, 0.0};
    return std::exp(t * levy_exponent(chars.a, chars.b2, chars.d, chars.jumps, y, z));
}

ExceedanceDecomposition exceedance_decomposition(const LimitCharacteristics& chars, double u) {
    double up = chars.tail.u_pi();
    bool admissible = u > up || (u == up && std::isfinite(chars.tail(up)));
    if (!admissible)
        throw std::domain_error(
            "exceedance_decomposition: u below the admissible range (needs u > u_pi, or u = u_pi "
            "with pi1(u_pi) finite)");
    ExceedanceDecomposition dec;
    dec.u = u;
    dec.pi_u = chars.jumps.restrict_mark_above(u);
    dec.hat_pi_u = chars.jumps.complement_mark_above(u);
    dec.a_u = chars.a - dec.pi_u.int_v_over_1pv2();
    dec.d_u = chars.d - dec.pi_u.int_w_over_1pw2();
    return dec;
}

std::complex<double> conditional_charfn(const LimitCharacteristics& chars, double u, double t,
                                        double y, double z) {
    if (t < 0.0) throw std::invalid_argument("conditional_charfn: t must be nonnegative");
    double up = chars.tail.u_pi();
    if (u < up || (u == up && chars.tail(up) == kInf)) return {1.0, 0.0};
    if (t == 0.0) return {1.0, 0.0};
    auto dec = exceedance_decomposition(chars, u);
    return std::exp(t * levy_exponent(dec.a_u, chars.b2, dec.d_u, dec.hat_pi_u, y, z));
}

std::complex<double> hybrid_kernel(const LimitCharacteristics& chars, double u_prev, double u,
                                   double t, double y, double z) {
    if (t < 0.0) throw std::invalid_argument("hybrid_kernel: t must be nonnegative");
    if (u_prev > u) return {0.0, 0.0};
    double rate = chars.tail(u);
    double hold = t == 0.0 ? 1.0 : (rate == kInf ? 0.0 : std::exp(-t * rate));
    if (hold == 0.0) return {0.0, 0.0};
    return hold * conditional_charfn(chars, u, t, y, z);
}

double a_u_via_truncation(const LimitCharacteristics& chars, double u, double v) {
    auto dec = exceedance_decomposition(chars, u);
    double a_u_v = chars.a_of_v(v) - dec.pi_u.int_v_below_abs(v);
    return a_u_v - dec.hat_pi_u.int_v3_over_1pv2_below(v) + dec.hat_pi_u.int_v_over_1pv2_above(v);
}

SamplerParameters sampler_parameters(const LimitCharacteristics& chars) {
    double mass = chars.jumps.total_mass();
    if (!std::isfinite(mass))
        throw std::invalid_argument("sampler_parameters: finite-activity mode required");
    SamplerParameters sp;
    sp.total_mass = mass;
    sp.b = std::sqrt(chars.b2);
    sp.gamma_drift = chars.a - chars.jumps.int_joint_v_compensator();
    sp.kappa_drift = chars.d - chars.jumps.int_joint_w_compensator();
    if (sp.kappa_drift < 0.0) {
        if (sp.kappa_drift < -1e-12)
            throw std::invalid_argument(
                "sampler_parameters: recovered kappa drift is negative; characteristics "
                "inconsistent");
        sp.kappa_drift = 0.0;
    }
    return sp;
}

double mark_consistency_gap(const LimitCharacteristics& chars, double u) {
    double tail = chars.tail(u);
    double mass = chars.jumps.mass_mark_above(u);
    if (tail == kInf) return kInf;
    return std::abs(tail - mass);
}

} // namespace maxsum
