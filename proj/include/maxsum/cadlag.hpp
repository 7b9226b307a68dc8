#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace maxsum {

enum class CoordFlag { free_coord, nondecreasing, running_max };

/// Result of a generalized inverse query tau(t) = sup{s : x(s) <= t}.
/// Exactly one of the degenerate flags can be set; callers must branch on
/// them instead of consuming `time` blindly.
struct InverseResult {
    double time = 0.0;
    bool empty_level_set = false; // level below the value at 0
    bool truncated = false;       // coordinate never exceeds the level on [0, horizon]
    bool interior() const { return !empty_level_set && !truncated; }
};

/// Exact cadlag step path with an optional linear drift:
///   x(t) = initial + drift * t + sum of jumps at times <= t.
///
/// Jump times are strictly increasing (exact comparison; merging coincident
/// jumps is the builder's job). Per-jump absolute values are stored next to
/// the jump sizes: values are authoritative for eval(), sizes for jump_at().
/// Builders that need bit-exact evaluation (running maxima, inverse paths)
/// inject values directly; the plain append recomputes them by accumulation.
class CadlagPath {
  public:
    CadlagPath(int dim, std::vector<double> initial, std::vector<double> drift,
               double horizon, std::vector<CoordFlag> flags = {});

    static CadlagPath constant(int dim, std::vector<double> value, double horizon);

    void reserve(std::size_t n);

    /// Append a jump at time t (strictly after the last jump, <= horizon).
    /// Values after the jump are accumulated from the previous state.
    void append_jump(double t, const std::vector<double>& sizes);

    /// Append a jump with explicit absolute values right after the jump
    /// (drift included: values_after[j] must equal x_j(t)).
    /// `sizes` and `values_after` must both have dim entries.
    void append_jump_with_values(double t, const std::vector<double>& sizes,
                                 const std::vector<double>& values_after);

    int dim() const { return dim_; }
    double horizon() const { return horizon_; }
    std::size_t jump_count() const { return times_.size(); }
    const std::vector<double>& jump_times() const { return times_; }
    double jump_time(std::size_t i) const { return times_[i]; }
    double jump_size(std::size_t i, int coord) const { return sizes_[i * dim_ + coord]; }
    double value_after(std::size_t i, int coord) const { return values_[i * dim_ + coord]; }
    double initial(int coord) const { return initial_[coord]; }
    double drift(int coord) const { return drift_[coord]; }
    CoordFlag flag(int coord) const { return flags_[coord]; }
    void set_flag(int coord, CoordFlag f);

    /// Index of the last jump with time <= t, or npos if none.
    std::size_t last_jump_at_or_before(double t) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    double eval_coord(double t, int coord) const;
    std::vector<double> eval(double t) const;

    /// Jump at s: stored size if s is a jump time, zero tuple otherwise.
    std::vector<double> jump_at(double s) const;

    /// Max jump size of `coord` over (0, t]; 0 when no jumps occurred there.
    double max_jump(double t, int coord) const;

    /// sup{s in [0, horizon] : x_coord(s) <= level} for a nondecreasing
    /// coordinate. See InverseResult for the degenerate conventions.
    InverseResult generalized_inverse(double level, int coord) const;

    /// Serialization: one JSON header line, then one CSV row per jump
    /// (time, size_1..size_dim), 17 significant digits throughout.
    void save(std::ostream& os) const;
    static CadlagPath load(std::istream& is);

    bool same_data(const CadlagPath& other) const;

  private:
    void check_coord(int coord) const;

    int dim_;
    std::vector<double> initial_;
    std::vector<double> drift_;
    double horizon_;
    std::vector<CoordFlag> flags_;
    std::vector<double> times_;
    std::vector<double> sizes_;  // row-major [jump][coord]
    std::vector<double> values_; // row-major, value right after each jump
};

/// t |-> outer(stopping(t)). `stopping` must be one-coordinate, nondecreasing,
/// and either a pure step path or a pure drift path; its values must stay in
/// [0, outer.horizon]. The jump structure of the result is computed exactly.
CadlagPath compose(const CadlagPath& outer, const CadlagPath& stopping);

/// Pointwise maximum of the running-max coordinate with h; other coordinates
/// untouched.
CadlagPath truncate_max(const CadlagPath& path, double h, int coord = 0);

/// Modulus of compactness for the J topology on [T, T2]:
///   sup over T v (t-c) <= t' <= t <= t'' <= (t+c) ^ T2 of
///   min(|x(t') - x(t)|, |x(t'') - x(t)|)
/// with the euclidean norm over `coords` (all coordinates when empty).
/// Exact for step paths and pure drift paths; step+drift paths use the same
/// candidate sweep with local refinement (grid oracle agreement is tested).
double modulus_j(const CadlagPath& path, double c, double T, double T2,
                 const std::vector<int>& coords = {});

/// Modulus of compactness for the uniform topology on [T, T2]:
///   sup over |t' - t''| <= c, T <= t' <= t'' <= T2 of |x(t') - x(t'')|.
double modulus_u(const CadlagPath& path, double c, double T, double T2,
                 const std::vector<int>& coords = {});

/// Indicator modulus_j(...) >= delta with aggressive pruning; same decision
/// as the exact value but much faster on long paths (probability probes).
bool modulus_j_exceeds(const CadlagPath& path, double c, double T, double T2, double delta,
                       const std::vector<int>& coords = {});

/// Minimal distance between consecutive (nonzero) jump times inside [T, T2];
/// T2 - T when fewer than two such jumps exist.
double min_jump_gap(const CadlagPath& path, double T, double T2);

/// 17-significant-digit decimal formatting used by every CSV writer; chosen
/// so that doubles round-trip bit-exactly through text.
std::string format_double(double x);

} // namespace maxsum
