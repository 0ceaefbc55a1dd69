#pragma once

#include "qmin/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qmin {

inline constexpr std::uint64_t kDefaultEventBound = 10'000'000;

/// One joint outcome at cell granularity.
struct RegionEvent {
    /// assignment[i - 1]: index of v_i's cell within cells(i).
    std::vector<int> assignment;
    /// Product of the per-interval cell masses.
    Rational probability;
    /// A realization inside the event: v_i = a + (b - a) * i / (n + 1) for cell (a, b).
    Realization representative;
};

/// Product space of per-interval cells. Each interval is cut at every cut
/// point strictly inside it; zero-mass cells are dropped from enumeration.
class EventSpace {
public:
    struct Cell {
        Rational a;
        Rational b;
        Rational mass;
    };

    /// Throws LimitExceeded when the number of positive-mass events exceeds `bound`.
    EventSpace(const Instance& instance, std::vector<Rational> cuts, std::uint64_t bound = kDefaultEventBound);

    /// Cells are the atomic regions: every decision of a sorting policy is constant on them.
    static EventSpace for_sort(const Instance& instance, std::uint64_t bound = kDefaultEventBound);
    /// Cuts at every left endpoint and at r_1: enough for every minimum-problem decision.
    static EventSpace for_min(const Instance& instance, std::uint64_t bound = kDefaultEventBound);

    const std::vector<Cell>& cells(IntervalId i) const { return cells_[static_cast<std::size_t>(i - 1)]; }
    /// Number of positive-probability events.
    std::uint64_t size() const { return size_; }

    /// Visits every positive-probability event in lexicographic order of assignment.
    void for_each(const std::function<void(const RegionEvent&)>& visit) const;
    /// Σ_event f(event) * probability.
    Rational expectation(const std::function<Rational(const RegionEvent&)>& f) const;

private:
    std::vector<std::vector<Cell>> cells_;
    std::uint64_t size_ = 1;
};

}  // namespace qmin
