#include "maxsum/presets.hpp"

#include "maxsum/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace maxsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double param(const nlohmann::json& p, const char* key, double fallback) {
    if (!p.contains(key)) return fallback;
    return p.at(key).get<double>();
}

std::vector<long> n_grid_param(const nlohmann::json& p) {
    std::vector<long> grid{100, 1000, 10000};
    if (p.contains("n_eps")) {
        grid.clear();
        for (const auto& v : p.at("n_eps")) grid.push_back(v.get<long>());
    }
    return grid;
}

void reject_unknown(const nlohmann::json& p, std::initializer_list<const char*> known) {
    if (!p.is_object() && !p.is_null()) {
        if (p.empty()) return;
        throw std::invalid_argument("preset parameters must be a table");
    }
    for (auto it = p.begin(); it != p.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument("unknown preset parameter: " + it.key());
    }
}

CurveComponent pareto_curve(double scale, double alpha, double p_lo) {
    CurveComponent c;
    c.p_lo = p_lo;
    c.intensity = [scale, alpha](double p) { return scale * alpha * std::pow(p, -alpha - 1.0); };
    c.tail_mass = [scale, alpha](double x) { return scale * std::pow(x, -alpha); };
    c.tail_inverse = [scale, alpha](double m) { return std::pow(m / scale, -1.0 / alpha); };
    return c;
}

// ---- deterministic drift pair -------------------------------------------

Preset deterministic_preset(const nlohmann::json& p) {
    reject_unknown(p, {"gamma_rate", "kappa_rate", "n_eps"});
    double g = param(p, "gamma_rate", 1.0);
    double k = param(p, "kappa_rate", 1.0);
    if (!(k > 0.0)) throw std::invalid_argument("deterministic: kappa_rate must be positive");

    Preset out;
    out.name = "deterministic";
    out.summary = "degenerate triple (0, g/n, k/n); pure drift limits";
    out.parameters = "gamma_rate (g, default 1), kappa_rate (k, default 1), n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [g, k](long n, RngStream&) {
        double dn = static_cast<double>(n);
        return TripleSample{0.0, g / dn, k / dn};
    };
    out.model.tail = [](long, double u) { return u >= 0.0 ? 0.0 : 1.0; };
    out.model.trunc_mean_gamma = [g](long n, double v) {
        double x = g / static_cast<double>(n);
        return std::abs(x) <= v ? x : 0.0;
    };
    out.model.trunc_mean2_gamma = [g](long n, double v) {
        double x = g / static_cast<double>(n);
        return std::abs(x) <= v ? x * x : 0.0;
    };
    out.model.trunc_mean_kappa = [k](long n, double w) {
        double x = k / static_cast<double>(n);
        return x <= w ? x : 0.0;
    };
    out.chars = LimitCharacteristics::make(TailFunction::zero_above(0.0), {}, g, 0.0, k);
    out.u_grid = {0.5, 1.0, 2.0};
    return out;
}

// ---- Frechet scale family with Gaussian-domain sums ----------------------

Preset gaussian_domain_preset(const nlohmann::json& p) {
    reject_unknown(p, {"alpha", "n_eps"});
    double alpha = param(p, "alpha", 1.0);
    if (!(alpha > 0.0)) throw std::invalid_argument("gaussian_domain: alpha must be positive");

    Preset out;
    out.name = "gaussian_domain";
    out.summary = "xi Pareto(alpha)/n^(1/alpha), gamma N(0,1)/sqrt(n), kappa Exp(1)/n";
    out.parameters = "alpha (default 1), n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [alpha](long n, RngStream& rng) {
        double dn = static_cast<double>(n);
        double b = std::pow(dn, 1.0 / alpha);
        return TripleSample{rng.pareto(alpha) / b, rng.normal() / std::sqrt(dn),
                            rng.exponential() / dn};
    };
    out.model.tail = [alpha](long n, double u) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double x = u * b;
        return x <= 1.0 ? 1.0 : std::pow(x, -alpha);
    };
    // standard normal truncated moments
    out.model.trunc_mean_gamma = [](long, double) { return 0.0; };
    out.model.trunc_mean2_gamma = [](long n, double v) {
        double s = std::sqrt(static_cast<double>(n)) * v; // |Z| <= s
        double phi = std::exp(-0.5 * s * s) / std::sqrt(2.0 * kPi);
        double cdf_tail = 0.5 * std::erfc(s / std::sqrt(2.0));
        double inside = 1.0 - 2.0 * (s * phi + cdf_tail);
        return inside / static_cast<double>(n);
    };
    out.model.trunc_mean_kappa = [](long n, double w) {
        double dn = static_cast<double>(n);
        double s = w * dn;
        return (1.0 - std::exp(-s) * (1.0 + s)) / dn;
    };
    out.chars =
        LimitCharacteristics::make(TailFunction::frechet(alpha), {}, 0.0, 1.0, 1.0);
    return out;
}

// ---- Gumbel scale-location family ----------------------------------------

Preset gumbel_location_preset(const nlohmann::json& p) {
    reject_unknown(p, {"n_eps"});
    Preset out;
    out.name = "gumbel_location";
    out.summary = "xi Exp(1) - ln n, gamma N(0,1)/sqrt(n), kappa Exp(1)/n";
    out.parameters = "n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [](long n, RngStream& rng) {
        double dn = static_cast<double>(n);
        return TripleSample{rng.exponential() - std::log(dn), rng.normal() / std::sqrt(dn),
                            rng.exponential() / dn};
    };
    out.model.tail = [](long n, double u) {
        double x = u + std::log(static_cast<double>(n));
        return x <= 0.0 ? 1.0 : std::exp(-x);
    };
    out.chars = LimitCharacteristics::make(TailFunction::gumbel(), {}, 0.0, 1.0, 1.0);
    out.u_grid = {-1.0, 0.0, 1.0, 2.0};
    return out;
}

// ---- identical components, centered Pareto (1 < alpha < 2) ----------------

Preset identical_pareto_preset(const nlohmann::json& p) {
    reject_unknown(p, {"alpha", "n_eps"});
    double alpha = param(p, "alpha", 1.5);
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("identical_pareto: alpha must lie in (1, 2)");
    double mu = alpha / (alpha - 1.0); // EY for Pareto(alpha, 1)

    Preset out;
    out.name = "identical_pareto";
    out.summary = "xi = gamma = (Y - EY)/n^(1/alpha), Y Pareto(alpha); kappa Exp(1)/n";
    out.parameters = "alpha in (1,2) (default 1.5), n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [alpha, mu](long n, RngStream& rng) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double x = (rng.pareto(alpha) - mu) / b;
        return TripleSample{x, x, rng.exponential() / static_cast<double>(n)};
    };
    out.model.tail = [alpha, mu](long n, double u) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double z = mu + u * b;
        return z <= 1.0 ? 1.0 : std::pow(z, -alpha);
    };
    // E[(Y-mu) chi(a < Y <= z)] via G(z) = E[(Y-mu) chi(Y <= z)]
    auto G = [alpha, mu](double z) {
        if (z <= 1.0) return 0.0;
        double m1 = (alpha / (alpha - 1.0)) * (1.0 - std::pow(z, 1.0 - alpha)); // E[Y chi(Y<=z)]
        double p = 1.0 - std::pow(z, -alpha);                                   // P{Y <= z}
        return m1 - mu * p;
    };
    auto H = [alpha, mu](double z) { // E[(Y-mu)^2 chi(Y <= z)]
        if (z <= 1.0) return 0.0;
        double m2 = (alpha / (2.0 - alpha)) * (std::pow(z, 2.0 - alpha) - 1.0);
        double m1 = (alpha / (alpha - 1.0)) * (1.0 - std::pow(z, 1.0 - alpha));
        double p = 1.0 - std::pow(z, -alpha);
        return m2 - 2.0 * mu * m1 + mu * mu * p;
    };
    out.model.trunc_mean_gamma = [G, mu, alpha](long n, double v) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double hi = mu + v * b;
        double lo = std::max(1.0, mu - v * b);
        return (G(hi) - G(lo)) / b;
    };
    out.model.trunc_mean2_gamma = [H, mu, alpha](long n, double v) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double hi = mu + v * b;
        double lo = std::max(1.0, mu - v * b);
        return (H(hi) - H(lo)) / (b * b);
    };
    out.model.trunc_mean_kappa = [](long n, double w) {
        double dn = static_cast<double>(n);
        double s = w * dn;
        return (1.0 - std::exp(-s) * (1.0 + s)) / dn;
    };
    out.model.truncated_joint_cf = [alpha, mu](long n, double u, double y,
                                               double z) -> std::complex<double> {
        double dn = static_cast<double>(n);
        double b = std::pow(dn, 1.0 / alpha);
        std::complex<double> kappa_cf = 1.0 / std::complex<double>(1.0, -z / dn);
        double hi = mu + u * b;
        std::complex<double> gamma_part{0.0, 0.0};
        if (hi > 1.0) {
            // log substitution keeps the wide power-law interval tame
            gamma_part = quad::integrate_complex(
                [&](double s) -> std::complex<double> {
                    double q = std::exp(s);
                    double theta = y * (q - mu) / b;
                    return std::complex<double>(std::cos(theta), std::sin(theta)) * alpha *
                           std::pow(q, -alpha - 1.0) * q;
                },
                0.0, std::log(hi), 1e-8);
        }
        return kappa_cf * gamma_part;
    };

    JointJumpMeasure jumps;
    CurveComponent c = pareto_curve(1.0, alpha, 0.0);
    c.v1 = 1.0;
    c.marked = true;
    c.m1 = 1.0;
    jumps.add_curve(c);
    double a = -alpha * quad::integrate(
                            [alpha](double s) { return std::pow(s, 1.0 - alpha) / (1.0 + s * s); },
                            0.0, kInf, 1e-12);
    out.chars = LimitCharacteristics::make(TailFunction::frechet(alpha), std::move(jumps), a, 0.0, 1.0);
    out.sampling_chars = [alpha, a](double floor) {
        JointJumpMeasure m;
        CurveComponent cc = pareto_curve(1.0, alpha, floor);
        cc.v1 = 1.0;
        cc.marked = true;
        cc.m1 = 1.0;
        m.add_curve(cc);
        return LimitCharacteristics::make(TailFunction::frechet(alpha), std::move(m), a, 0.0, 1.0);
    };
    return out;
}

// ---- Example 2: insurance pairs -------------------------------------------

Preset example2_preset(const nlohmann::json& p) {
    reject_unknown(p, {"claim_alpha", "n_eps"});
    double alpha = param(p, "claim_alpha", 2.5);
    if (!(alpha > 0.0)) throw std::invalid_argument("example2: claim_alpha must be positive");

    Preset out;
    out.name = "example2";
    out.summary = "claims Y Pareto(alpha) max-normalized (xi = gamma = Y/n^(1/alpha)), "
                  "interarrivals X Exp(1) (kappa = X/n)";
    out.parameters = "claim_alpha (default 2.5), n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [alpha](long n, RngStream& rng) {
        double dn = static_cast<double>(n);
        double b = std::pow(dn, 1.0 / alpha);
        double y = rng.pareto(alpha) / b;
        return TripleSample{y, y, rng.exponential() / dn};
    };
    out.model.tail = [alpha](long n, double u) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double x = u * b;
        return x <= 1.0 ? 1.0 : std::pow(x, -alpha);
    };
    // the max/stopping pair has a clean limit; the gamma coordinate is kept
    // for pathwise demos only (its sums need a different normalization)
    out.chars = LimitCharacteristics::make(TailFunction::frechet(alpha), {}, 0.0, 0.0, 1.0);
    out.sampling_chars = [alpha](double floor) {
        JointJumpMeasure m;
        CurveComponent c = frechet_mark_curve(alpha, floor);
        m.add_curve(c);
        return LimitCharacteristics::make(TailFunction::frechet(alpha), std::move(m), 0.0, 0.0, 1.0);
    };
    return out;
}

// ---- Example 1: renewal self-wiring (alpha < 1, uncentered) ---------------

Preset example1_preset(const nlohmann::json& p) {
    reject_unknown(p, {"alpha", "n_eps"});
    double alpha = param(p, "alpha", 0.8);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("example1: alpha must lie in (0, 1)");

    Preset out;
    out.name = "example1";
    out.summary = "renewal self-wiring xi = gamma = kappa = X/n^(1/alpha), X Pareto(alpha)";
    out.parameters = "alpha in (0,1) (default 0.8), n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [alpha](long n, RngStream& rng) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double x = rng.pareto(alpha) / b;
        return TripleSample{x, x, x};
    };
    out.model.tail = [alpha](long n, double u) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double x = u * b;
        return x <= 1.0 ? 1.0 : std::pow(x, -alpha);
    };

    JointJumpMeasure jumps;
    CurveComponent c = pareto_curve(1.0, alpha, 0.0);
    c.v1 = 1.0;
    c.w1 = 1.0;
    c.marked = true;
    c.m1 = 1.0;
    jumps.add_curve(c);
    // a and c from the constant relations anchored at v = w = 1:
    //   a(1) = c(1) = alpha/(1-alpha) (uncentered truncated means)
    double av = alpha / (1.0 - alpha);
    double a = av -
               quad::integrate(
                   [alpha](double s) { return alpha * std::pow(s, 2.0 - alpha) / (1.0 + s * s); },
                   0.0, 1.0, 1e-12) +
               quad::integrate(
                   [alpha](double s) { return alpha * std::pow(s, -alpha) / (1.0 + s * s); },
                   1.0, kInf, 1e-12);
    // c = c(1) - int_(0,1) s Pi_3(ds) = 0 for the pure-jump subordinator
    out.chars = LimitCharacteristics::make(TailFunction::frechet(alpha), std::move(jumps), a, 0.0, 0.0);
    out.sampling_chars = [alpha, a](double floor) {
        JointJumpMeasure m;
        CurveComponent cc = pareto_curve(1.0, alpha, floor);
        cc.v1 = 1.0;
        cc.w1 = 1.0;
        cc.marked = true;
        cc.m1 = 1.0;
        m.add_curve(cc);
        return LimitCharacteristics::make(TailFunction::frechet(alpha), std::move(m), a, 0.0, 0.0);
    };
    out.u_grid = {0.5, 1.0, 2.0};
    return out;
}

// ---- Example 3: earthquake triples ----------------------------------------

Preset example3_preset(const nlohmann::json& p) {
    reject_unknown(p, {"size_alpha", "damage_mean", "n_eps"});
    double alpha = param(p, "size_alpha", 1.0);
    double dmean = param(p, "damage_mean", 0.5);
    if (!(alpha > 0.0) || !(dmean > 0.0))
        throw std::invalid_argument("example3: parameters must be positive");

    Preset out;
    out.name = "example3";
    out.summary = "independent triple: sizes Y Pareto(alpha)/n^(1/alpha), damages Z Exp(mean)/n, "
                  "interarrivals X Exp(1)/n";
    out.parameters = "size_alpha (default 1), damage_mean (default 0.5), n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [alpha, dmean](long n, RngStream& rng) {
        double dn = static_cast<double>(n);
        double b = std::pow(dn, 1.0 / alpha);
        return TripleSample{rng.pareto(alpha) / b, dmean * rng.exponential() / dn,
                            rng.exponential() / dn};
    };
    out.model.tail = [alpha](long n, double u) {
        double b = std::pow(static_cast<double>(n), 1.0 / alpha);
        double x = u * b;
        return x <= 1.0 ? 1.0 : std::pow(x, -alpha);
    };
    out.chars = LimitCharacteristics::make(TailFunction::frechet(alpha), {}, dmean, 0.0, 1.0);
    out.sampling_chars = [alpha, dmean](double floor) {
        JointJumpMeasure m;
        m.add_curve(frechet_mark_curve(alpha, floor));
        return LimitCharacteristics::make(TailFunction::frechet(alpha), std::move(m), dmean, 0.0, 1.0);
    };
    return out;
}

// ---- risk family: compound claims against a premium drift -----------------

Preset risk_preset(const nlohmann::json& p) {
    reject_unknown(p, {"claim_rate", "claim_alpha", "premium", "n_eps"});
    double lambda = param(p, "claim_rate", 0.8);
    double alpha = param(p, "claim_alpha", 2.5);
    double c0 = param(p, "premium", 1.0);
    if (!(lambda > 0.0) || !(alpha > 0.0) || !(c0 >= 0.0))
        throw std::invalid_argument("risk: bad parameters");

    Preset out;
    out.name = "risk";
    out.summary = "risk wiring (xi, gamma, kappa) = (c kappa, c kappa - beta, kappa); "
                  "kappa Exp(1)/n, claims beta Bernoulli(rate/n) Pareto(alpha)";
    out.parameters = "claim_rate (default 0.8), claim_alpha (default 2.5), premium (default 1), n_eps";
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [lambda, alpha, c0](long n, RngStream& rng) {
        double dn = static_cast<double>(n);
        double kappa = rng.exponential() / dn;
        double beta = rng.uniform() < lambda / dn ? rng.pareto(alpha) : 0.0;
        return TripleSample{c0 * kappa, c0 * kappa - beta, kappa};
    };
    out.model.tail = [c0](long n, double u) {
        if (u < 0.0) return 1.0;
        double dn = static_cast<double>(n);
        return std::exp(-u * dn / (c0 > 0.0 ? c0 : 1e-300));
    };

    JointJumpMeasure jumps;
    CurveComponent claims = pareto_curve(lambda, alpha, 1.0);
    claims.v1 = -1.0; // claims push gamma down; no kappa or max content
    jumps.add_curve(claims);
    double a = c0 - quad::integrate(
                        [lambda, alpha](double s) {
                            return (s / (1.0 + s * s)) * lambda * alpha * std::pow(s, -alpha - 1.0);
                        },
                        1.0, kInf, 1e-12);
    out.chars = LimitCharacteristics::make(TailFunction::zero_above(0.0), std::move(jumps), a, 0.0, c0);
    out.u_grid = {0.5, 1.0, 2.0};
    return out;
}

// ---- independence structure (sampling-oriented) ----------------------------

Preset independence_preset(const nlohmann::json& p) {
    reject_unknown(p, {"n_eps"});
    Preset out;
    out.name = "independence";
    out.summary = "pure-mark max atoms plus unmarked sum jumps: the max component is "
                  "independent of the sums";
    out.parameters = "n_eps";

    JointJumpMeasure m;
    m.add_atom({true, 1.0, 0.0, 0.0, 0.6});
    m.add_atom({true, 2.0, 0.0, 0.0, 0.3});
    m.add_atom({true, 3.0, 0.0, 0.0, 0.1});
    m.add_atom({false, 0.0, 1.0, 0.5, 0.8});
    m.add_atom({false, 0.0, -1.0, 0.2, 0.4});
    auto tail = TailFunction::from_mark_masses({{1.0, 0.6}, {2.0, 0.3}, {3.0, 0.1}}, 0.0);
    out.chars = LimitCharacteristics::make(tail, std::move(m), 0.0, 0.25, 0.3);

    // matching prelimit family: marks and sum jumps arrive on independent
    // Bernoulli(mass/n) slots
    out.model.family = out.name;
    out.model.n_grid = n_grid_param(p);
    out.model.draw = [](long n, RngStream& rng) {
        double dn = static_cast<double>(n);
        double xi = 0.0;
        double r = rng.uniform() * dn;
        if (r < 0.6)
            xi = 1.0;
        else if (r < 0.9)
            xi = 2.0;
        else if (r < 1.0)
            xi = 3.0;
        double gamma = 0.0, kappa = 0.0;
        double r2 = rng.uniform() * dn;
        if (r2 < 0.8) {
            gamma = 1.0;
            kappa = 0.5;
        } else if (r2 < 1.2) {
            gamma = -1.0;
            kappa = 0.2;
        }
        gamma += 0.5 * rng.normal() / std::sqrt(dn); // b^2 = 0.25
        kappa += 0.3 / dn;                           // c = 0.3
        return TripleSample{xi, gamma, kappa};
    };
    out.u_grid = {0.5, 1.5, 2.5};
    return out;
}

} // namespace

CurveComponent frechet_mark_curve(double alpha, double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("frechet_mark_curve: floor must be positive");
    CurveComponent c = pareto_curve(1.0, alpha, floor);
    c.marked = true;
    c.m1 = 1.0;
    return c;
}

std::vector<std::string> preset_names() {
    return {"deterministic", "gaussian_domain", "gumbel_location", "identical_pareto",
            "example1",      "example2",        "example3",        "risk",
            "independence"};
}

Preset make_preset(const std::string& name, const nlohmann::json& params) {
    if (name == "deterministic") return deterministic_preset(params);
    if (name == "gaussian_domain") return gaussian_domain_preset(params);
    if (name == "gumbel_location") return gumbel_location_preset(params);
    if (name == "identical_pareto") return identical_pareto_preset(params);
    if (name == "example1") return example1_preset(params);
    if (name == "example2") return example2_preset(params);
    if (name == "example3") return example3_preset(params);
    if (name == "risk") return risk_preset(params);
    if (name == "independence") return independence_preset(params);
    throw std::invalid_argument("unknown preset: " + name);
}

} // namespace maxsum
