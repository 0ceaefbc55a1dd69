#pragma once

#include "qmin/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmin {

/// 1-based interval index, assigned in sorted (left endpoint) order.
using IntervalId = int;
/// 1-based index of an atomic region S_1..S_t.
using RegionIndex = int;

/// Thrown when input data violates a structural invariant.
class InvalidInstance : public std::runtime_error {
public:
    explicit InvalidInstance(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

/// Thrown when an exhaustive procedure would exceed its configured size bound.
class LimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An open uncertainty interval (lo, hi) whose value costs `cost` to reveal.
struct QueryInterval {
    IntervalId id = 0;
    Rational lo;
    Rational hi;
    Rational cost;

    bool operator==(const QueryInterval& other) const = default;
};

/// Piecewise-uniform distribution: piece k spreads masses[k] uniformly over
/// (breakpoints[k], breakpoints[k+1]).
class PiecewiseDist {
public:
    PiecewiseDist(std::vector<Rational> breakpoints, std::vector<Rational> masses);

    static PiecewiseDist uniform(const Rational& lo, const Rational& hi);

    const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    const std::vector<Rational>& masses() const { return masses_; }
    const Rational& lo() const { return breakpoints_.front(); }
    const Rational& hi() const { return breakpoints_.back(); }
    std::size_t piece_count() const { return masses_.size(); }

    /// Pr[v <= x]; continuous, so also Pr[v < x].
    Rational cdf(const Rational& x) const;
    /// Pr[v in (a, b)], clamped to the support.
    Rational prob_in(const Rational& a, const Rational& b) const;
    Rational prob_above(const Rational& x) const { return 1 - cdf(x); }
    Rational prob_below(const Rational& x) const { return cdf(x); }

    /// Copy with every breakpoint translated by `offset`.
    PiecewiseDist shifted(const Rational& offset) const;
    /// Copy with a breakpoint inserted at x (no-op if present or outside).
    PiecewiseDist refined_at(const Rational& x) const;

    bool operator==(const PiecewiseDist& other) const = default;

private:
    std::vector<Rational> breakpoints_;
    std::vector<Rational> masses_;
};

/// Ordered atomic regions induced by all interval endpoints.
struct RegionPartition {
    struct Region {
        Rational a;
        Rational b;
    };
    /// regions[x - 1] is S_x.
    std::vector<Region> regions;
    /// first_region[i - 1] / last_region[i - 1]: span of I_i.
    std::vector<RegionIndex> first_region;
    std::vector<RegionIndex> last_region;

    int count() const { return static_cast<int>(regions.size()); }
    const Region& region(RegionIndex x) const { return regions[static_cast<std::size_t>(x - 1)]; }
    RegionIndex first_of(IntervalId i) const { return first_region[static_cast<std::size_t>(i - 1)]; }
    RegionIndex last_of(IntervalId i) const { return last_region[static_cast<std::size_t>(i - 1)]; }
    bool contains(IntervalId i, RegionIndex x) const { return first_of(i) <= x && x <= last_of(i); }
    /// Region strictly containing v, or nullopt when v is a region boundary or outside the hull.
    std::optional<RegionIndex> locate(const Rational& v) const;
};

/// Intervals sorted by (lo, hi, input order) with one distribution each.
class Instance {
public:
    Instance() = default;
    /// Sorts, assigns ids 1..n and validates every interval/distribution pair.
    Instance(std::vector<QueryInterval> intervals, std::vector<PiecewiseDist> dists);
    /// Uniform distributions over each interval.
    static Instance with_uniform(std::vector<QueryInterval> intervals);

    int size() const { return static_cast<int>(intervals_.size()); }
    const std::vector<QueryInterval>& intervals() const { return intervals_; }
    const std::vector<PiecewiseDist>& dists() const { return dists_; }
    const QueryInterval& interval(IntervalId i) const { return intervals_[static_cast<std::size_t>(i - 1)]; }
    const PiecewiseDist& dist(IntervalId i) const { return dists_[static_cast<std::size_t>(i - 1)]; }
    const Rational& cost(IntervalId i) const { return interval(i).cost; }
    Rational total_cost() const;

    /// Same geometry and distributions, costs replaced.
    Instance with_costs(const std::vector<Rational>& costs) const;
    /// Subinstance of the listed ids (re-indexed in the given order's sorted form).
    Instance restricted_to(const std::vector<IntervalId>& ids) const;

    bool operator==(const Instance& other) const = default;

private:
    std::vector<QueryInterval> intervals_;
    std::vector<PiecewiseDist> dists_;
};

/// Precise value per interval; values[i - 1] is v_i.
struct Realization {
    std::vector<Rational> values;
    const Rational& value(IntervalId i) const { return values[static_cast<std::size_t>(i - 1)]; }
};

/// Throws InvalidInstance unless lo_i < v_i < hi_i for every interval.
void check_realization(const Instance& instance, const Realization& realization);

RegionPartition compute_regions(const Instance& instance);

/// Open intervals (or points, when lo == hi) are dependent iff they overlap.
bool are_dependent(IntervalId i, IntervalId j, const Instance& instance);
bool overlaps(const Rational& lo_a, const Rational& hi_a, const Rational& lo_b, const Rational& hi_b);

Rational prob_in(IntervalId i, const Rational& a, const Rational& b, const Instance& instance);

/// Diagnostics for nested pairs and disconnected dependency graphs; empty iff
/// the instance is proper and connected.
std::vector<std::string> validate_sorting_instance(const Instance& instance);

struct Component {
    Instance instance;
    /// Ids in the parent instance, indexed by the component's own ids.
    std::vector<IntervalId> members;
};

/// Connected components of the dependency graph, ordered by leftmost member.
std::vector<Component> split_components(const Instance& instance);

/// Sum of costs of the intervals in `ids`.
Rational cost_of(const Instance& instance, const std::vector<IntervalId>& ids);

}  // namespace qmin
