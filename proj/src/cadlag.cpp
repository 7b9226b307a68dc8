#include "maxsum/cadlag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace maxsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* flag_name(CoordFlag f) {
    switch (f) {
        case CoordFlag::nondecreasing: return "nondecreasing";
        case CoordFlag::running_max: return "running_max";
        default: return "free";
    }
}

CoordFlag flag_from_name(const std::string& s) {
    if (s == "nondecreasing") return CoordFlag::nondecreasing;
    if (s == "running_max") return CoordFlag::running_max;
    if (s == "free") return CoordFlag::free_coord;
    throw std::invalid_argument("unknown coordinate flag: " + s);
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CadlagPath::CadlagPath(int dim, std::vector<double> initial, std::vector<double> drift,
                       double horizon, std::vector<CoordFlag> flags)
    : dim_(dim), initial_(std::move(initial)), drift_(std::move(drift)),
      horizon_(horizon), flags_(std::move(flags)) {
    if (dim_ < 1) throw std::invalid_argument("CadlagPath: dim must be positive");
    if (!(horizon_ > 0.0)) throw std::invalid_argument("CadlagPath: horizon must be positive");
    if (static_cast<int>(initial_.size()) != dim_ || static_cast<int>(drift_.size()) != dim_)
        throw std::invalid_argument("CadlagPath: initial/drift size mismatch");
    if (flags_.empty()) flags_.assign(dim_, CoordFlag::free_coord);
    if (static_cast<int>(flags_.size()) != dim_)
        throw std::invalid_argument("CadlagPath: flags size mismatch");
    for (int j = 0; j < dim_; ++j) {
        if (flags_[j] == CoordFlag::nondecreasing && drift_[j] < 0.0)
            throw std::invalid_argument("CadlagPath: nondecreasing coordinate with negative drift");
        if (flags_[j] == CoordFlag::running_max && drift_[j] != 0.0)
            throw std::invalid_argument("CadlagPath: running-max coordinate must have zero drift");
    }
}

CadlagPath CadlagPath::constant(int dim, std::vector<double> value, double horizon) {
    return CadlagPath(dim, std::move(value), std::vector<double>(dim, 0.0), horizon);
}

void CadlagPath::reserve(std::size_t n) {
    times_.reserve(n);
    sizes_.reserve(n * dim_);
    values_.reserve(n * dim_);
}

void CadlagPath::set_flag(int coord, CoordFlag f) {
    check_coord(coord);
    flags_[coord] = f;
}

void CadlagPath::append_jump(double t, const std::vector<double>& sizes) {
    std::vector<double> vals(dim_);
    std::size_t n = times_.size();
    double prev_t = n == 0 ? 0.0 : times_.back();
    for (int j = 0; j < dim_; ++j) {
        double prev = n == 0 ? initial_[j] : values_[(n - 1) * dim_ + j];
        vals[j] = prev + drift_[j] * (t - prev_t) + sizes[j];
    }
    append_jump_with_values(t, sizes, vals);
}

void CadlagPath::append_jump_with_values(double t, const std::vector<double>& sizes,
                                         const std::vector<double>& values_after) {
    if (static_cast<int>(sizes.size()) != dim_ || static_cast<int>(values_after.size()) != dim_)
        throw std::invalid_argument("CadlagPath: jump size mismatch");
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("CadlagPath: jump times must be strictly increasing");
    if (t < 0.0 || t > horizon_)
        throw std::invalid_argument("CadlagPath: jump time outside [0, horizon]");
    for (int j = 0; j < dim_; ++j) {
        if (flags_[j] != CoordFlag::free_coord && sizes[j] < 0.0)
            throw std::invalid_argument("CadlagPath: negative jump on a monotone coordinate");
    }
    times_.push_back(t);
    sizes_.insert(sizes_.end(), sizes.begin(), sizes.end());
    values_.insert(values_.end(), values_after.begin(), values_after.end());
}

void CadlagPath::check_coord(int coord) const {
    if (coord < 0 || coord >= dim_) throw std::invalid_argument("CadlagPath: bad coordinate index");
}

std::size_t CadlagPath::last_jump_at_or_before(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return npos;
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double CadlagPath::eval_coord(double t, int coord) const {
    check_coord(coord);
    if (t < 0.0 || t > horizon_) throw std::domain_error("CadlagPath::eval: t outside [0, horizon]");
    std::size_t i = last_jump_at_or_before(t);
    if (i == npos) return initial_[coord] + drift_[coord] * t;
    return values_[i * dim_ + coord] + drift_[coord] * (t - times_[i]);
}

std::vector<double> CadlagPath::eval(double t) const {
    if (t < 0.0 || t > horizon_) throw std::domain_error("CadlagPath::eval: t outside [0, horizon]");
    std::size_t i = last_jump_at_or_before(t);
    std::vector<double> out(dim_);
    for (int j = 0; j < dim_; ++j) {
        if (i == npos) {
            out[j] = initial_[j] + drift_[j] * t;
        } else {
            out[j] = values_[i * dim_ + j] + drift_[j] * (t - times_[i]);
        }
    }
    return out;
}

std::vector<double> CadlagPath::jump_at(double s) const {
    if (!(s > 0.0) || s > horizon_) throw std::domain_error("CadlagPath::jump_at: s outside (0, horizon]");
    std::vector<double> out(dim_, 0.0);
    auto it = std::lower_bound(times_.begin(), times_.end(), s);
    if (it != times_.end() && *it == s) {
        std::size_t i = static_cast<std::size_t>(it - times_.begin());
        for (int j = 0; j < dim_; ++j) out[j] = sizes_[i * dim_ + j];
    }
    return out;
}

double CadlagPath::max_jump(double t, int coord) const {
    check_coord(coord);
    if (!(t > 0.0) || t > horizon_) throw std::domain_error("CadlagPath::max_jump: t outside (0, horizon]");
    double best = 0.0;
    std::size_t last = last_jump_at_or_before(t);
    if (last == npos) return 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        if (times_[i] <= 0.0) continue; // jumps at 0 are outside (0, t]
        best = std::max(best, sizes_[i * dim_ + coord]);
    }
    return best;
}

InverseResult CadlagPath::generalized_inverse(double level, int coord) const {
    check_coord(coord);
    if (flags_[coord] == CoordFlag::free_coord)
        throw std::invalid_argument("generalized_inverse: coordinate not flagged nondecreasing");
    const double d = drift_[coord];
    InverseResult res;

    double prev_t = 0.0;
    double prev_v = initial_[coord];
    std::size_t i = 0;
    // fold in a possible jump at time 0
    if (!times_.empty() && times_[0] == 0.0) {
        prev_v = values_[coord];
        i = 1;
    }
    if (level < prev_v) {
        res.time = 0.0;
        res.empty_level_set = true;
        return res;
    }
    for (; i < times_.size(); ++i) {
        double t_i = times_[i];
        if (d > 0.0) {
            double v_end = prev_v + d * (t_i - prev_t);
            if (v_end > level) {
                res.time = std::min(t_i, prev_t + (level - prev_v) / d);
                return res;
            }
        }
        double v_after = values_[i * dim_ + coord];
        if (v_after > level) {
            res.time = t_i;
            return res;
        }
        prev_t = t_i;
        prev_v = v_after;
    }
    if (d > 0.0) {
        double v_end = prev_v + d * (horizon_ - prev_t);
        if (v_end > level) {
            res.time = std::min(horizon_, prev_t + (level - prev_v) / d);
            return res;
        }
    }
    res.time = horizon_;
    res.truncated = true;
    return res;
}

bool CadlagPath::same_data(const CadlagPath& other) const {
    return dim_ == other.dim_ && horizon_ == other.horizon_ && initial_ == other.initial_ &&
           drift_ == other.drift_ && flags_ == other.flags_ && times_ == other.times_ &&
           sizes_ == other.sizes_;
}

void CadlagPath::save(std::ostream& os) const {
    nlohmann::json header;
    header["dim"] = dim_;
    header["horizon"] = format_double(horizon_);
    nlohmann::json init = nlohmann::json::array(), drift = nlohmann::json::array(),
                   flags = nlohmann::json::array();
    for (int j = 0; j < dim_; ++j) {
        init.push_back(format_double(initial_[j]));
        drift.push_back(format_double(drift_[j]));
        flags.push_back(flag_name(flags_[j]));
    }
    header["initial"] = init;
    header["drift"] = drift;
    header["flags"] = flags;
    os << header.dump() << "\n";
    for (std::size_t i = 0; i < times_.size(); ++i) {
        os << format_double(times_[i]);
        for (int j = 0; j < dim_; ++j) os << "," << format_double(sizes_[i * dim_ + j]);
        os << "\n";
    }
}

CadlagPath CadlagPath::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("CadlagPath::load: missing header");
    nlohmann::json header = nlohmann::json::parse(line);
    int dim = header.at("dim").get<int>();
    double horizon = std::strtod(header.at("horizon").get<std::string>().c_str(), nullptr);
    std::vector<double> initial, drift;
    std::vector<CoordFlag> flags;
    for (const auto& v : header.at("initial")) initial.push_back(std::strtod(v.get<std::string>().c_str(), nullptr));
    for (const auto& v : header.at("drift")) drift.push_back(std::strtod(v.get<std::string>().c_str(), nullptr));
    for (const auto& v : header.at("flags")) flags.push_back(flag_from_name(v.get<std::string>()));
    CadlagPath path(dim, std::move(initial), std::move(drift), horizon, std::move(flags));
    std::vector<double> sizes(dim);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        double t = std::strtod(p, &end);
        for (int j = 0; j < dim; ++j) {
            if (*end != ',') throw std::invalid_argument("CadlagPath::load: malformed row");
            p = end + 1;
            sizes[j] = std::strtod(p, &end);
        }
        path.append_jump(t, sizes);
    }
    return path;
}

CadlagPath compose(const CadlagPath& outer, const CadlagPath& stopping) {
    if (stopping.dim() != 1)
        throw std::invalid_argument("compose: stopping path must have one coordinate");
    if (stopping.flag(0) == CoordFlag::free_coord)
        throw std::invalid_argument("compose: stopping path must be nondecreasing");
    const double d = stopping.drift(0);
    const bool has_jumps = stopping.jump_count() > 0;
    if (d != 0.0 && has_jumps)
        throw std::invalid_argument("compose: stopping path must be pure-step or pure-drift");

    auto range_check = [&](double s) {
        if (s < 0.0 || s > outer.horizon())
            throw std::domain_error("compose: stopping value outside outer domain");
    };

    const double s0 = stopping.eval(0.0)[0];
    range_check(s0);
    std::vector<double> init = outer.eval(s0);
    std::vector<CoordFlag> flags;
    for (int j = 0; j < outer.dim(); ++j) flags.push_back(outer.flag(j));

    if (!has_jumps) {
        // pure drift d >= 0: result drift = outer.drift * d, jumps at preimages
        // of outer jump times.
        double s_end = stopping.eval(stopping.horizon())[0];
        range_check(s_end);
        std::vector<double> drift(outer.dim());
        for (int j = 0; j < outer.dim(); ++j) drift[j] = outer.drift(j) * d;
        CadlagPath result(outer.dim(), init, drift, stopping.horizon(), flags);
        if (d > 0.0) {
            std::vector<double> sizes(outer.dim()), vals(outer.dim());
            for (std::size_t i = 0; i < outer.jump_count(); ++i) {
                double sj = outer.jump_time(i);
                if (sj <= s0 || sj > s_end) continue;
                double tj = (sj - s0) / d;
                if (tj > stopping.horizon()) break;
                for (int j = 0; j < outer.dim(); ++j) {
                    sizes[j] = outer.jump_size(i, j);
                    vals[j] = outer.value_after(i, j) + outer.drift(j) * 0.0;
                }
                result.append_jump_with_values(tj, sizes, vals);
            }
        }
        return result;
    }

    // pure step stopping: result is a step path changing only at stopping jumps
    std::vector<double> zero_drift(outer.dim(), 0.0);
    CadlagPath result(outer.dim(), init, zero_drift, stopping.horizon(), flags);
    std::vector<double> prev = init;
    std::vector<double> sizes(outer.dim());
    for (std::size_t i = 0; i < stopping.jump_count(); ++i) {
        double t = stopping.jump_time(i);
        double s = stopping.value_after(i, 0);
        range_check(s);
        std::vector<double> v = outer.eval(s);
        bool changed = false;
        for (int j = 0; j < outer.dim(); ++j) {
            sizes[j] = v[j] - prev[j];
            if (v[j] != prev[j]) changed = true;
        }
        if (changed && t > 0.0) {
            result.append_jump_with_values(t, sizes, v);
            prev = v;
        } else if (changed) { // stopping jump at time 0 folds into the initial value
            prev = v;
        }
    }
    return result;
}

CadlagPath truncate_max(const CadlagPath& path, double h, int coord) {
    if (path.flag(coord) != CoordFlag::running_max)
        throw std::invalid_argument("truncate_max: coordinate is not a running maximum");
    std::vector<double> init(path.dim()), drift(path.dim());
    std::vector<CoordFlag> flags(path.dim());
    for (int j = 0; j < path.dim(); ++j) {
        init[j] = path.initial(j);
        drift[j] = path.drift(j);
        flags[j] = path.flag(j);
    }
    init[coord] = std::max(init[coord], h);
    CadlagPath out(path.dim(), init, drift, path.horizon(), flags);
    out.reserve(path.jump_count());
    std::vector<double> sizes(path.dim()), vals(path.dim());
    std::vector<double> prev = init;
    for (std::size_t i = 0; i < path.jump_count(); ++i) {
        for (int j = 0; j < path.dim(); ++j) {
            vals[j] = path.value_after(i, j);
            if (j == coord) vals[j] = std::max(vals[j], h);
            sizes[j] = (j == coord) ? vals[j] - prev[j] : path.jump_size(i, j);
        }
        out.append_jump_with_values(path.jump_time(i), sizes, vals);
        prev = vals;
    }
    return out;
}

double min_jump_gap(const CadlagPath& path, double T, double T2) {
    if (!(0.0 < T) || !(T < T2) || T2 > path.horizon())
        throw std::invalid_argument("min_jump_gap: need 0 < T < T2 <= horizon");
    double prev = -1.0;
    double best = kInf;
    int count = 0;
    for (std::size_t i = 0; i < path.jump_count(); ++i) {
        double t = path.jump_time(i);
        if (t < T) continue;
        if (t > T2) break;
        bool nonzero = false;
        for (int j = 0; j < path.dim(); ++j)
            if (path.jump_size(i, j) != 0.0) { nonzero = true; break; }
        if (!nonzero) continue;
        if (count > 0) best = std::min(best, t - prev);
        prev = t;
        ++count;
    }
    if (count < 2) return T2 - T;
    return best;
}

// ---------------------------------------------------------------------------
// compactness moduli
// ---------------------------------------------------------------------------

namespace {

struct SegView {
    std::vector<double> start; // m entries; segment i covers [start[i], end[i])
    std::vector<double> end;
    std::vector<double> val; // m * nc, value at segment start
    std::vector<double> drift;
    int nc = 0;
    bool has_drift = false;
    double T = 0, T2 = 0;

    std::size_t size() const { return start.size(); }

    void value_at(std::size_t i, double t, double* out) const {
        for (int j = 0; j < nc; ++j) {
            out[j] = val[i * nc + j];
            if (has_drift) out[j] += drift[j] * (t - start[i]);
        }
    }

    std::size_t segment_of(double t) const {
        auto it = std::upper_bound(start.begin(), start.end(), t);
        return static_cast<std::size_t>(it - start.begin()) - 1;
    }
};

SegView make_segments(const CadlagPath& p, double T, double T2, const std::vector<int>& coords_in) {
    std::vector<int> coords = coords_in;
    if (coords.empty())
        for (int j = 0; j < p.dim(); ++j) coords.push_back(j);
    SegView sv;
    sv.nc = static_cast<int>(coords.size());
    sv.T = T;
    sv.T2 = T2;
    for (int j : coords) {
        sv.drift.push_back(p.drift(j));
        if (p.drift(j) != 0.0) sv.has_drift = true;
    }
    auto push_segment = [&](double t, const std::vector<double>& full) {
        sv.start.push_back(t);
        for (int j : coords) sv.val.push_back(full[j]);
    };
    push_segment(T, p.eval(T));
    const auto& times = p.jump_times();
    auto it = std::upper_bound(times.begin(), times.end(), T);
    for (; it != times.end() && *it <= T2; ++it) {
        std::size_t i = static_cast<std::size_t>(it - times.begin());
        std::vector<double> full(p.dim());
        for (int j = 0; j < p.dim(); ++j) full[j] = p.value_after(i, j);
        push_segment(*it, full);
    }
    sv.end.resize(sv.start.size());
    for (std::size_t i = 0; i + 1 < sv.start.size(); ++i) sv.end[i] = sv.start[i + 1];
    sv.end.back() = T2;
    return sv;
}

double dist2(const double* a, const double* b, int nc) {
    double s = 0.0;
    for (int j = 0; j < nc; ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

// sliding per-coordinate min/max over a contiguous range of segments
struct MinMaxWindow {
    const SegView* sv = nullptr;
    std::size_t lo = 0, hi = 0; // members are [lo, hi)
    std::vector<std::deque<std::size_t>> mins, maxs;

    void init(const SegView& s) {
        sv = &s;
        mins.assign(s.nc, {});
        maxs.assign(s.nc, {});
        lo = hi = 0;
    }
    void push_to(std::size_t new_hi) {
        for (; hi < new_hi; ++hi) {
            for (int j = 0; j < sv->nc; ++j) {
                double v = sv->val[hi * sv->nc + j];
                auto& mn = mins[j];
                auto& mx = maxs[j];
                while (!mn.empty() && sv->val[mn.back() * sv->nc + j] >= v) mn.pop_back();
                mn.push_back(hi);
                while (!mx.empty() && sv->val[mx.back() * sv->nc + j] <= v) mx.pop_back();
                mx.push_back(hi);
            }
        }
    }
    void pop_to(std::size_t new_lo) {
        for (; lo < new_lo; ++lo) {
            for (int j = 0; j < sv->nc; ++j) {
                if (!mins[j].empty() && mins[j].front() == lo) mins[j].pop_front();
                if (!maxs[j].empty() && maxs[j].front() == lo) maxs[j].pop_front();
            }
        }
    }
    // upper bound for max over members of squared distance to point v
    double ubound2(const double* v) const {
        double s = 0.0;
        for (int j = 0; j < sv->nc; ++j) {
            double mn = sv->val[mins[j].front() * sv->nc + j];
            double mx = sv->val[maxs[j].front() * sv->nc + j];
            double d = std::max(std::abs(mx - v[j]), std::abs(v[j] - mn));
            s += d * d;
        }
        return s;
    }
    bool empty() const { return lo >= hi; }
};

std::vector<double> event_points(const SegView& sv, double c, bool with_right) {
    std::vector<double> ev;
    ev.reserve(sv.size() * 3 + 2);
    for (std::size_t i = 0; i < sv.size(); ++i) {
        ev.push_back(sv.start[i]);
        double loss = sv.end[i] + c;
        if (loss <= sv.T2) ev.push_back(loss);
        if (with_right) {
            double gain = sv.start[i] - c;
            if (gain >= sv.T) ev.push_back(gain);
        }
    }
    ev.push_back(sv.T);
    ev.push_back(sv.T2);
    // window-clipping regime switches
    if (sv.T + c <= sv.T2) ev.push_back(sv.T + c);
    if (sv.T2 - c >= sv.T) ev.push_back(sv.T2 - c);
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    // midpoints cover the open intervals between consecutive events
    std::vector<double> out;
    out.reserve(ev.size() * 2);
    for (std::size_t k = 0; k < ev.size(); ++k) {
        out.push_back(ev[k]);
        if (k + 1 < ev.size()) out.push_back(0.5 * (ev[k] + ev[k + 1]));
    }
    return out;
}

/// Exact sweep for zero-drift (pure step) paths. Returns the modulus; when
/// early_stop is finite the sweep returns as soon as the running value
/// reaches it (used by probability probes that only need an indicator).
double sweep_step_j(const SegView& sv, double c, double early_stop) {
    const int nc = sv.nc;
    const std::size_t m = sv.size();
    std::vector<double> pts = event_points(sv, c, true);

    MinMaxWindow left, right;
    left.init(sv);
    right.init(sv);
    std::size_t cur = 0, l_lo = 0, r_hi = 0;
    double best = 0.0;
    std::vector<double> vbuf(nc);

    for (double t : pts) {
        if (t < sv.T || t > sv.T2) continue;
        while (cur + 1 < m && sv.start[cur + 1] <= t) ++cur;
        // left window members: start <= t (i.e. i <= cur) and end > t - c
        while (l_lo < m && !(sv.end[l_lo] > t - c)) ++l_lo;
        // right window members: end > t (i.e. i >= cur) and start <= t + c
        while (r_hi < m && sv.start[r_hi] <= t + c) ++r_hi;

        left.pop_to(l_lo);
        left.push_to(cur + 1);
        right.pop_to(cur);
        right.push_to(r_hi);
        if (left.empty() || right.empty()) continue;

        const double* v = &sv.val[cur * nc];
        double threshold = std::isfinite(early_stop) ? early_stop : best;
        double thr2 = threshold * threshold;
        double ubl = left.ubound2(v);
        if (ubl <= thr2) continue;
        double ubr = right.ubound2(v);
        if (ubr <= thr2) continue;

        double l2 = 0.0;
        for (std::size_t i = l_lo; i <= cur; ++i)
            l2 = std::max(l2, dist2(&sv.val[i * nc], v, nc));
        if (l2 <= thr2) continue;
        double r2 = 0.0;
        for (std::size_t i = cur; i < r_hi; ++i)
            r2 = std::max(r2, dist2(&sv.val[i * nc], v, nc));
        double g = std::sqrt(std::min(l2, r2));
        if (g > best) {
            best = g;
            if (best >= early_stop) return best;
        }
    }
    return best;
}

double sweep_step_u(const SegView& sv, double c) {
    const int nc = sv.nc;
    const std::size_t m = sv.size();
    std::vector<double> pts = event_points(sv, c, false);

    MinMaxWindow left;
    left.init(sv);
    std::size_t cur = 0, l_lo = 0;
    double best2 = 0.0;
    for (double t : pts) {
        if (t < sv.T || t > sv.T2) continue;
        while (cur + 1 < m && sv.start[cur + 1] <= t) ++cur;
        while (l_lo < m && !(sv.end[l_lo] > t - c)) ++l_lo;
        left.pop_to(l_lo);
        left.push_to(cur + 1);
        if (left.empty()) continue;
        const double* v = &sv.val[cur * nc];
        if (left.ubound2(v) <= best2) continue;
        for (std::size_t i = l_lo; i <= cur; ++i)
            best2 = std::max(best2, dist2(&sv.val[i * nc], v, nc));
    }
    return std::sqrt(best2);
}

// generic (drift-aware) window maximum of ||x(t') - x|| over t' in [wlo, whi]
double window_max_dist2(const SegView& sv, double wlo, double whi, const double* x,
                        std::vector<double>& buf) {
    if (whi < wlo) return 0.0;
    double best = 0.0;
    std::size_t i0 = sv.segment_of(wlo);
    for (std::size_t i = i0; i < sv.size(); ++i) {
        if (sv.start[i] > whi) break;
        double lo = std::max(wlo, sv.start[i]);
        double hi = std::min(whi, sv.end[i]);
        if (hi < lo) continue;
        sv.value_at(i, lo, buf.data());
        best = std::max(best, dist2(buf.data(), x, sv.nc));
        if (sv.has_drift && hi > lo) {
            sv.value_at(i, hi, buf.data());
            best = std::max(best, dist2(buf.data(), x, sv.nc));
        }
    }
    return best;
}

double eval_g_generic(const SegView& sv, double c, double t, bool want_min,
                      std::vector<double>& xbuf, std::vector<double>& buf) {
    std::size_t cur = sv.segment_of(t);
    sv.value_at(cur, t, xbuf.data());
    double l2 = window_max_dist2(sv, std::max(sv.T, t - c), t, xbuf.data(), buf);
    if (!want_min) return l2;
    double r2 = window_max_dist2(sv, t, std::min(sv.T2, t + c), xbuf.data(), buf);
    return std::min(l2, r2);
}

double sweep_generic(const SegView& sv, double c, bool want_j) {
    std::vector<double> pts = event_points(sv, c, want_j);
    std::vector<double> xbuf(sv.nc), buf(sv.nc);
    double best2 = 0.0;
    for (double t : pts) {
        if (t < sv.T || t > sv.T2) continue;
        best2 = std::max(best2, eval_g_generic(sv, c, t, want_j, xbuf, buf));
    }
    if (want_j && sv.has_drift) {
        // the min of the two one-sided maxima can peak strictly inside an
        // event interval when drift is present; refine with golden section
        const double gr = 0.6180339887498949;
        std::vector<double> ev;
        for (double t : pts)
            if (t >= sv.T && t <= sv.T2) ev.push_back(t);
        for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
            double a = ev[k], b = ev[k + 1];
            if (b - a < 1e-14) continue;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = eval_g_generic(sv, c, x1, true, xbuf, buf);
            double f2 = eval_g_generic(sv, c, x2, true, xbuf, buf);
            for (int it = 0; it < 40; ++it) {
                if (f1 < f2) {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = eval_g_generic(sv, c, x2, true, xbuf, buf);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = eval_g_generic(sv, c, x1, true, xbuf, buf);
                }
            }
            best2 = std::max(best2, std::max(f1, f2));
        }
    }
    return std::sqrt(best2);
}

void check_modulus_pre(const CadlagPath& path, double c, double T, double T2) {
    if (!(c > 0.0)) throw std::invalid_argument("modulus: c must be positive");
    if (!(0.0 < T) || !(T < T2) || T2 > path.horizon())
        throw std::invalid_argument("modulus: need 0 < T < T2 <= horizon");
}

} // namespace

double modulus_j(const CadlagPath& path, double c, double T, double T2,
                 const std::vector<int>& coords) {
    check_modulus_pre(path, c, T, T2);
    SegView sv = make_segments(path, T, T2, coords);
    if (!sv.has_drift) return sweep_step_j(sv, c, kInf);
    return sweep_generic(sv, c, true);
}

double modulus_u(const CadlagPath& path, double c, double T, double T2,
                 const std::vector<int>& coords) {
    check_modulus_pre(path, c, T, T2);
    SegView sv = make_segments(path, T, T2, coords);
    if (!sv.has_drift) return sweep_step_u(sv, c);
    return sweep_generic(sv, c, false);
}

bool modulus_j_exceeds(const CadlagPath& path, double c, double T, double T2, double delta,
                       const std::vector<int>& coords) {
    check_modulus_pre(path, c, T, T2);
    SegView sv = make_segments(path, T, T2, coords);
    if (!sv.has_drift) return sweep_step_j(sv, c, delta) >= delta;
    return sweep_generic(sv, c, true) >= delta;
}

} // namespace maxsum
