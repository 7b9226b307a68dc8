#pragma once

#include "maxsum/array_model.hpp"
#include "maxsum/limit_law.hpp"
#include "maxsum/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace maxsum {

/// Bounded continuous test functions vanishing on the ball of radius r
/// around (0, 0): a radial ramp plus ramp * cos/sin(pv + qw) modes.
struct TestFunctionFamily {
    double r = 0.1;
    double R = 1.0;
    std::vector<double> freqs{0.0, 1.0, 2.0};

    struct Mode {
        int kind = 0; // 0 radial, 1 cos, 2 sin
        double p = 0.0, q = 0.0;
        std::string label;
    };
    std::vector<Mode> modes() const;
    double eval(const Mode& m, double v, double w) const;
};

/// Set of stochastic-continuity points of the stopped limit: either all of
/// (0, inf) or the complement of the lattice generated by the discontinuity
/// points of the Pi_3 tail.
struct VDescription {
    bool all = true;
    std::vector<double> generators;
    bool contains(double t, double tol = 1e-9) const;
    std::string describe() const;
};

struct ConditionDClassification {
    bool D = false;
    bool D1 = false;
    bool D2 = false;
    VDescription V;
};

/// Structural classification from the characteristics alone.
ConditionDClassification classify_condition_D(const LimitCharacteristics& chars);

/// Same, with the D2 limit additionally checked empirically against the
/// model at the largest n of the sweep.
ConditionDClassification classify_condition_D(const LimitCharacteristics& chars,
                                              const ArrayModel& model, long samples,
                                              RngStream& rng);

struct ProbeRow {
    long n_eps = 0;
    std::string probe;
    double empirical = 0.0;
    double target = 0.0;
    double abs_err = 0.0;
    double mc_se = 0.0;
    bool analytic = false;
};

struct ConditionSection {
    std::string name;
    std::vector<ProbeRow> rows;
    bool pass = true;
    std::string note;
};

struct ConditionReport {
    std::vector<ConditionSection> sections;
    std::uint64_t root_seed = 0;
    long samples_per_eps = 0;
    bool all_pass() const;
};

struct CheckSettings {
    std::vector<long> n_grid;       // empty -> model.n_grid
    long samples_per_eps = 50000;
    double tol_rel = 0.02;
    double tol_abs_floor = 0.005;
    TestFunctionFamily phi;
    std::vector<double> bd_v_grid{0.5, 0.25, 0.1}; // shrinking-v protocol for B(d)
};

/// Scale-aware tolerance: max(tol_rel |target|, 3 se + tol_abs_floor).
double check_tolerance(const CheckSettings& s, double target, double se);

ConditionSection check_condition_A(const ArrayModel& model, const LimitCharacteristics& chars,
                                   const std::vector<double>& u_grid, const CheckSettings& s,
                                   RngStream& rng);

std::vector<ConditionSection> check_condition_B(const ArrayModel& model,
                                                const LimitCharacteristics& chars,
                                                const std::vector<double>& v_grid,
                                                const std::vector<double>& w_grid,
                                                const CheckSettings& s, RngStream& rng);

ConditionSection check_condition_C(const ArrayModel& model, const LimitCharacteristics& chars,
                                   const std::vector<double>& u_grid, const CheckSettings& s,
                                   RngStream& rng);

ConditionSection report_condition_D(const LimitCharacteristics& chars, const ArrayModel& model,
                                    const CheckSettings& s, RngStream& rng);

/// Full A-D run used by the CLI verify command.
ConditionReport check_all_conditions(const ArrayModel& model, const LimitCharacteristics& chars,
                                     const std::vector<double>& u_grid,
                                     const std::vector<double>& v_grid,
                                     const std::vector<double>& w_grid, const CheckSettings& s,
                                     std::uint64_t root_seed);

} // namespace maxsum
