#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace maxsum {

/// Limiting tail function pi1 of the max component: nonincreasing,
/// right-continuous, +inf below u_pi and 0 above v_pi.
class TailFunction {
  public:
    enum class Family { frechet, gumbel, neg_weibull, tabulated, zero_above };

    static TailFunction frechet(double alpha);
    static TailFunction gumbel();
    static TailFunction neg_weibull(double alpha, double right_end);
    /// pi(u) = +inf for u < thresholds.front(), values[i] on
    /// [thresholds[i], thresholds[i+1]), values.back() from the last
    /// threshold on. Values must be nonincreasing and finite.
    static TailFunction tabulated(std::vector<double> thresholds, std::vector<double> values);
    static TailFunction zero_above(double threshold);
    /// Tail of a finite mark measure: pi(u) = total mass of marks > u for
    /// u >= floor, +inf below floor.
    static TailFunction from_mark_masses(std::vector<std::pair<double, double>> mark_mass,
                                         double floor);

    double operator()(double u) const;
    double u_pi() const { return u_pi_; }
    double v_pi() const { return v_pi_; }
    const std::vector<double>& discontinuities() const { return discontinuities_; }
    bool is_continuity_point(double u) const;
    /// Smallest u with pi(u) <= q, q > 0 (quantile transform of exp(-t pi)).
    double inverse(double q) const;
    Family family() const { return family_; }

  private:
    TailFunction() = default;
    Family family_ = Family::frechet;
    double alpha_ = 1.0;
    double end_ = 0.0;
    std::vector<double> thresholds_;
    std::vector<double> values_;
    double u_pi_ = 0.0;
    double v_pi_ = 0.0;
    std::vector<double> discontinuities_;
};

/// One atom of the joint jump measure. `marked` atoms carry the max-mark
/// that arrives together with the (v, w) jump.
struct Atom {
    bool marked = false;
    double mark = 0.0;
    double v = 0.0;
    double w = 0.0;
    double mass = 0.0;
};

/// Analytic one-parameter component of the jump measure with affine
/// coordinate maps: p has intensity lambda(p) dp on (p_lo, p_hi),
/// (v, w) = (v0 + v1 p, w0 + w1 p), mark = m0 + m1 p when marked (m1 >= 0
/// so mark restriction is cut in p). tail_mass(x) must equal the intensity
/// integral over (x, p_hi_full) of the unrestricted family; restrictions
/// are expressed through p_lo / p_hi only.
struct CurveComponent {
    double p_lo = 0.0;
    double p_hi = std::numeric_limits<double>::infinity();
    std::function<double(double)> intensity;
    std::function<double(double)> tail_mass;
    std::function<double(double)> tail_inverse; // optional; enables exact sampling
    double v0 = 0.0, v1 = 0.0;
    double w0 = 0.0, w1 = 0.0;
    bool marked = false;
    double m0 = 0.0, m1 = 0.0;

    double v_at(double p) const { return v0 + v1 * p; }
    double w_at(double p) const { return w0 + w1 * p; }
    double mark_at(double p) const { return m0 + m1 * p; }
    double mass() const;
    double mass_between(double a, double b) const;
};

/// Finite-or-analytic jump measure Pi_{2,3} on (R x [0, inf)) \ {(0,0)},
/// optionally carrying max-marks for the exceedance split.
class JointJumpMeasure {
  public:
    JointJumpMeasure() = default;
    static JointJumpMeasure from_atoms(std::vector<Atom> atoms);

    void add_atom(Atom atom);
    void add_curve(CurveComponent curve);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<CurveComponent>& curves() const { return curves_; }
    bool empty() const { return atoms_.empty() && curves_.empty(); }

    double total_mass() const; // +inf for infinite-activity analytic parts
    bool finite_mass() const;
    double mass_mark_above(double u) const;
    double mass_w_above(double x) const;        // Pi_3((x, inf))
    double mass_v_abs_above(double x) const;    // Pi_2({|v| > x})

    /// Exceedance split at level u: atoms/curve sections with mark > u,
    /// and the complement (everything unmarked plus mark <= u).
    JointJumpMeasure restrict_mark_above(double u) const;
    JointJumpMeasure complement_mark_above(double u) const;

    // marginal integrals used by the constant relations
    double int_v_over_1pv2(double rel_tol = 1e-10) const;              // s/(1+s^2) dPi_2
    double int_v_over_1pv2_above(double x, double rel_tol = 1e-10) const; // over |s| > x
    double int_v3_over_1pv2_below(double x, double rel_tol = 1e-10) const; // s^3/(1+s^2), |s| < x
    double int_v_below_abs(double x, double rel_tol = 1e-10) const;    // s over |s| <= x
    double int_v2_below_abs(double x, double rel_tol = 1e-10) const;   // s^2 over |s| <= x
    double int_w_over_1pw2(double rel_tol = 1e-10) const;              // s/(1+s^2) dPi_3
    double int_w_below(double x, double rel_tol = 1e-10) const;        // s over (0, x)
    double int_w2_below(double x, double rel_tol = 1e-10) const;       // s^2 over (0, x]
    double int_vw_below_abs(double x, double rel_tol = 1e-10) const;   // v w over |v|<=x, w<=x
    double int_joint_v_compensator(double rel_tol = 1e-10) const;      // v/(1+v^2+w^2)
    double int_joint_w_compensator(double rel_tol = 1e-10) const;      // w/(1+v^2+w^2)

    /// Integral of a bounded f(v, w) against the measure. f must vanish in a
    /// neighbourhood of the origin when infinite-activity components are
    /// present.
    double integrate_vw(const std::function<double(double, double)>& f,
                        double rel_tol = 1e-8) const;

    /// Compensated Levy integrand against the measure.
    std::complex<double> levy_integral(double y, double z, double rel_tol = 1e-8) const;
    /// Uncompensated integral of e^{i(yv+zw)} - 1 (finite mass only).
    std::complex<double> plain_jump_integral(double y, double z, double rel_tol = 1e-8) const;

  private:
    std::vector<Atom> atoms_;
    std::vector<CurveComponent> curves_;
};

/// The limiting data (pi1, Pi_{2,3}, a, b^2, c) of Conditions A-C; d is the
/// derived constant c + int s/(1+s^2) Pi_3(ds).
struct LimitCharacteristics {
    TailFunction tail = TailFunction::zero_above(0.0);
    JointJumpMeasure jumps;
    double a = 0.0;
    double b2 = 0.0;
    double c = 0.0;
    double d = 0.0;

    static LimitCharacteristics make(TailFunction tail, JointJumpMeasure jumps, double a,
                                     double b2, double c);

    double pi1(double u) const { return tail(u); }
    double a_of_v(double v) const;
    double c_of_w(double w) const;
};

/// The u-indexed exceedance split Pi^(u), hat Pi^(u) and shifted constants.
struct ExceedanceDecomposition {
    double u = 0.0;
    JointJumpMeasure pi_u;
    JointJumpMeasure hat_pi_u;
    double a_u = 0.0;
    double d_u = 0.0;
};

double pi1(const LimitCharacteristics& chars, double u);

/// Finite-dimensional extremal law: product of exp(-pi1(u_k)(t_k - t_{k-1}))
/// after replacing levels by their running minimum from the right.
double extremal_fdd(const LimitCharacteristics& chars, const std::vector<double>& times,
                    const std::vector<double>& levels);

/// chi(v <= u) exp(-t pi1(u)).
double transition_kernel(const LimitCharacteristics& chars, double v, double u, double t);

std::complex<double> levy_charfn(const LimitCharacteristics& chars, double t, double y, double z);

ExceedanceDecomposition exceedance_decomposition(const LimitCharacteristics& chars, double u);

std::complex<double> conditional_charfn(const LimitCharacteristics& chars, double u, double t,
                                        double y, double z);

/// chi(u_prev <= u) exp(-t pi1(u)) conditional_charfn(u, t, y, z).
std::complex<double> hybrid_kernel(const LimitCharacteristics& chars, double u_prev, double u,
                                   double t, double y, double z);

/// a^(u) recomputed through the truncated-mean chain instead of the direct
/// compensator shift; agreement of the two routes is an acceptance target.
double a_u_via_truncation(const LimitCharacteristics& chars, double u, double v);

/// Drift/volatility/jump data for the uncompensated finite-activity sampler.
/// The drifts absorb the joint compensator of the characteristic exponent so
/// that the sampler law matches levy_charfn exactly.
struct SamplerParameters {
    double gamma_drift = 0.0;
    double kappa_drift = 0.0;
    double b = 0.0;
    double total_mass = 0.0;
};

SamplerParameters sampler_parameters(const LimitCharacteristics& chars);

/// |pi1(u) - mark mass above u|; zero on the sampled range is the
/// finite-activity consistency requirement of the hybrid sampler.
double mark_consistency_gap(const LimitCharacteristics& chars, double u);

} // namespace maxsum
