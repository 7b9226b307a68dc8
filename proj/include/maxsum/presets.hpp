#pragma once

#include "maxsum/array_model.hpp"
#include "maxsum/limit_law.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace maxsum {

/// A shipped model family paired with its limiting characteristics.
struct Preset {
    std::string name;
    std::string summary;
    std::string parameters; // human-readable schema
    ArrayModel model;
    LimitCharacteristics chars;
    /// Finite-activity restriction of the characteristics usable by the
    /// hybrid sampler (marks above the floor); empty when the preset's
    /// characteristics are already finite-activity.
    std::function<LimitCharacteristics(double floor)> sampling_chars;
    // default probe grids for the verify command
    std::vector<double> u_grid{0.5, 1.0, 2.0, 4.0};
    std::vector<double> v_grid{0.5, 1.0, 2.0};
    std::vector<double> w_grid{0.5, 1.0, 2.0};
};

std::vector<std::string> preset_names();

/// Builds a preset by name; `params` may override family parameters
/// (unknown keys are rejected).
Preset make_preset(const std::string& name, const nlohmann::json& params = {});

/// Marked Frechet(alpha) jump curve restricted to marks above `floor`:
/// intensity alpha p^{-alpha-1}, tail mass p^{-alpha}, affine maps chosen by
/// the caller. Used to build finite-activity sampling measures whose mark
/// masses agree with the Frechet tail on the sampled range.
CurveComponent frechet_mark_curve(double alpha, double floor);

} // namespace maxsum
