#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace maxsum::quad {

/// Raised when the adaptive scheme cannot reach its tolerance; carries the
/// achieved error estimate in the message.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive integration of f over (lo, hi); hi may be +infinity. Relative
/// tolerance defaults to 1e-8 with the subdivision budget capped at 2^16
/// evaluations per level family.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-8);

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double lo, double hi, double rel_tol = 1e-8);

} // namespace maxsum::quad
