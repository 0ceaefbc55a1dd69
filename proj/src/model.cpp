#include "qmin/model.hpp"

#include <algorithm>
#include <numeric>

namespace qmin {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& line : lines) {
        if (!out.empty()) out += "; ";
        out += line;
    }
    return out;
}

}  // namespace

InvalidInstance::InvalidInstance(std::vector<std::string> diagnostics)
    : std::runtime_error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------
// PiecewiseDist
// ---------------------------------------------------------------------------

PiecewiseDist::PiecewiseDist(std::vector<Rational> breakpoints, std::vector<Rational> masses)
    : breakpoints_(std::move(breakpoints)), masses_(std::move(masses)) {
    if (breakpoints_.size() < 2 || masses_.size() + 1 != breakpoints_.size()) {
        throw InvalidInstance({"distribution needs m+1 breakpoints for m pieces"});
    }
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        if (!(breakpoints_[k] < breakpoints_[k + 1])) {
            throw InvalidInstance({"distribution breakpoints must be strictly increasing"});
        }
    }
    Rational total = 0;
    for (const auto& m : masses_) {
        if (sgn(m) < 0) throw InvalidInstance({"distribution masses must be non-negative"});
        total += m;
    }
    if (total != 1) {
        throw InvalidInstance({"distribution masses sum to " + to_string(total) + ", expected 1"});
    }
    if (sgn(masses_.front()) == 0 || sgn(masses_.back()) == 0) {
        throw InvalidInstance({"first and last distribution pieces must carry positive mass"});
    }
}

PiecewiseDist PiecewiseDist::uniform(const Rational& lo, const Rational& hi) {
    return PiecewiseDist({lo, hi}, {Rational(1)});
}

Rational PiecewiseDist::cdf(const Rational& x) const {
    if (x <= breakpoints_.front()) return 0;
    if (x >= breakpoints_.back()) return 1;
    // First breakpoint strictly greater than x; the piece is the one before it.
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    Rational before = 0;
    for (std::size_t p = 0; p < k; ++p) before += masses_[p];
    const Rational& left = breakpoints_[k];
    const Rational& right = breakpoints_[k + 1];
    return before + masses_[k] * (x - left) / (right - left);
}

Rational PiecewiseDist::prob_in(const Rational& a, const Rational& b) const {
    if (!(a < b)) return 0;
    return cdf(b) - cdf(a);
}

PiecewiseDist PiecewiseDist::shifted(const Rational& offset) const {
    std::vector<Rational> moved = breakpoints_;
    for (auto& b : moved) b += offset;
    return PiecewiseDist(std::move(moved), masses_);
}

PiecewiseDist PiecewiseDist::refined_at(const Rational& x) const {
    if (x <= lo() || x >= hi()) return *this;
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (*it == x) return *this;
    const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    std::vector<Rational> bps = breakpoints_;
    std::vector<Rational> ms = masses_;
    const Rational width = bps[k + 1] - bps[k];
    const Rational left_mass = ms[k] * (x - bps[k]) / width;
    const Rational right_mass = ms[k] - left_mass;
    bps.insert(bps.begin() + static_cast<std::ptrdiff_t>(k) + 1, x);
    ms[k] = left_mass;
    ms.insert(ms.begin() + static_cast<std::ptrdiff_t>(k) + 1, right_mass);
    return PiecewiseDist(std::move(bps), std::move(ms));
}

// ---------------------------------------------------------------------------
// RegionPartition
// ---------------------------------------------------------------------------

std::optional<RegionIndex> RegionPartition::locate(const Rational& v) const {
    if (regions.empty()) return std::nullopt;
    auto it = std::upper_bound(regions.begin(), regions.end(), v,
                               [](const Rational& value, const Region& r) { return value < r.b; });
    if (it == regions.end()) return std::nullopt;
    if (!(it->a < v)) return std::nullopt;
    return static_cast<RegionIndex>(it - regions.begin()) + 1;
}

RegionPartition compute_regions(const Instance& instance) {
    std::vector<Rational> points;
    points.reserve(static_cast<std::size_t>(instance.size()) * 2);
    for (const auto& iv : instance.intervals()) {
        points.push_back(iv.lo);
        points.push_back(iv.hi);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    RegionPartition partition;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        partition.regions.push_back({points[k], points[k + 1]});
    }
    for (const auto& iv : instance.intervals()) {
        auto first = std::lower_bound(points.begin(), points.end(), iv.lo) - points.begin();
        auto last = std::lower_bound(points.begin(), points.end(), iv.hi) - points.begin();
        // Region x spans (points[x-1], points[x]).
        partition.first_region.push_back(static_cast<RegionIndex>(first) + 1);
        partition.last_region.push_back(static_cast<RegionIndex>(last));
    }
    return partition;
}

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

Instance::Instance(std::vector<QueryInterval> intervals, std::vector<PiecewiseDist> dists) {
    if (intervals.size() != dists.size()) {
        throw InvalidInstance({"one distribution per interval is required"});
    }
    std::vector<std::string> problems;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const auto& iv = intervals[k];
        const std::string name = "interval " + std::to_string(iv.id);
        if (!(iv.lo < iv.hi)) problems.push_back(name + ": lo must be < hi");
        if (sgn(iv.cost) <= 0) problems.push_back(name + ": cost must be positive");
        if (dists[k].lo() != iv.lo || dists[k].hi() != iv.hi) {
            problems.push_back(name + ": distribution support must equal the interval");
        }
    }
    if (!problems.empty()) throw InvalidInstance(std::move(problems));

    std::vector<std::size_t> order(intervals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (intervals[a].lo != intervals[b].lo) return intervals[a].lo < intervals[b].lo;
        return intervals[a].hi < intervals[b].hi;
    });
    intervals_.reserve(order.size());
    dists_.reserve(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        QueryInterval iv = intervals[order[pos]];
        iv.id = static_cast<IntervalId>(pos) + 1;
        intervals_.push_back(std::move(iv));
        dists_.push_back(dists[order[pos]]);
    }
}

Instance Instance::with_uniform(std::vector<QueryInterval> intervals) {
    std::vector<PiecewiseDist> dists;
    dists.reserve(intervals.size());
    for (const auto& iv : intervals) dists.push_back(PiecewiseDist::uniform(iv.lo, iv.hi));
    return Instance(std::move(intervals), std::move(dists));
}

Rational Instance::total_cost() const {
    Rational total = 0;
    for (const auto& iv : intervals_) total += iv.cost;
    return total;
}

Instance Instance::with_costs(const std::vector<Rational>& costs) const {
    if (costs.size() != intervals_.size()) throw InvalidInstance({"cost vector size mismatch"});
    std::vector<QueryInterval> ivs = intervals_;
    for (std::size_t k = 0; k < ivs.size(); ++k) ivs[k].cost = costs[k];
    return Instance(std::move(ivs), dists_);
}

Instance Instance::restricted_to(const std::vector<IntervalId>& ids) const {
    std::vector<QueryInterval> ivs;
    std::vector<PiecewiseDist> ds;
    for (IntervalId i : ids) {
        ivs.push_back(interval(i));
        ds.push_back(dist(i));
    }
    return Instance(std::move(ivs), std::move(ds));
}

void check_realization(const Instance& instance, const Realization& realization) {
    if (static_cast<int>(realization.values.size()) != instance.size()) {
        throw InvalidInstance({"realization has " + std::to_string(realization.values.size()) +
                               " values for " + std::to_string(instance.size()) + " intervals"});
    }
    std::vector<std::string> problems;
    for (const auto& iv : instance.intervals()) {
        const Rational& v = realization.value(iv.id);
        if (!(iv.lo < v && v < iv.hi)) {
            problems.push_back("value " + to_string(v) + " lies outside I" + std::to_string(iv.id) + " = (" +
                               to_string(iv.lo) + ", " + to_string(iv.hi) + ")");
        }
    }
    if (!problems.empty()) throw InvalidInstance(std::move(problems));
}

bool overlaps(const Rational& lo_a, const Rational& hi_a, const Rational& lo_b, const Rational& hi_b) {
    return hi_a > lo_b && hi_b > lo_a;
}

bool are_dependent(IntervalId i, IntervalId j, const Instance& instance) {
    if (i == j) return false;
    const auto& a = instance.interval(i);
    const auto& b = instance.interval(j);
    return overlaps(a.lo, a.hi, b.lo, b.hi);
}

Rational prob_in(IntervalId i, const Rational& a, const Rational& b, const Instance& instance) {
    return instance.dist(i).prob_in(a, b);
}

std::vector<std::string> validate_sorting_instance(const Instance& instance) {
    std::vector<std::string> violations;
    const int n = instance.size();
    for (IntervalId i = 1; i <= n; ++i) {
        for (IntervalId j = 1; j <= n; ++j) {
            if (i == j) continue;
            const auto& inner = instance.interval(i);
            const auto& outer = instance.interval(j);
            const bool contained = outer.lo <= inner.lo && inner.hi <= outer.hi;
            // Identical intervals are reported once.
            const bool identical = inner.lo == outer.lo && inner.hi == outer.hi;
            if (contained && (!identical || i > j)) {
                violations.push_back("nested: I" + std::to_string(i) + " ⊆ I" + std::to_string(j));
            }
        }
    }
    const auto components = split_components(instance);
    if (components.size() > 1) {
        violations.push_back("disconnected: " + std::to_string(components.size()) + " components");
    }
    return violations;
}

std::vector<Component> split_components(const Instance& instance) {
    // Sorted by lo, so a sweep over the running right end finds the components.
    std::vector<Component> out;
    const int n = instance.size();
    std::vector<IntervalId> current;
    Rational reach;
    auto flush = [&] {
        if (current.empty()) return;
        out.push_back({instance.restricted_to(current), current});
        current.clear();
    };
    for (IntervalId i = 1; i <= n; ++i) {
        const auto& iv = instance.interval(i);
        if (!current.empty() && !(iv.lo < reach)) flush();
        if (current.empty()) {
            reach = iv.hi;
        } else if (iv.hi > reach) {
            reach = iv.hi;
        }
        current.push_back(i);
    }
    flush();
    return out;
}

Rational cost_of(const Instance& instance, const std::vector<IntervalId>& ids) {
    Rational total = 0;
    for (IntervalId i : ids) total += instance.cost(i);
    return total;
}

}  // namespace qmin
