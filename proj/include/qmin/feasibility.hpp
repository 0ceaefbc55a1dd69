#pragma once

#include "qmin/model.hpp"

#include <vector>

namespace qmin {

/// What is known about one item: its open interval, or (once queried) the cell
/// holding its value. An exact value is a cell with lo == hi.
struct Knowledge {
    bool queried = false;
    Rational lo;
    Rational hi;

    static Knowledge unqueried(const QueryInterval& iv) { return {false, iv.lo, iv.hi}; }
    static Knowledge point(const Rational& v) { return {true, v, v}; }
};

/// True iff every pair is independent; queried pairs are always ordered.
bool feasible_sort(const std::vector<Knowledge>& items);
/// True iff some item is certainly minimal: its upper bound is <= every other lower bound.
bool feasible_min(const std::vector<Knowledge>& items);

/// Knowledge after querying `query_set` under `realization` (values as exact points).
std::vector<Knowledge> knowledge_of(const std::vector<IntervalId>& query_set, const Realization& realization,
                                    const Instance& instance);

bool feasible_sort(const std::vector<IntervalId>& query_set, const Realization& realization,
                   const Instance& instance);
bool feasible_min(const std::vector<IntervalId>& query_set, const Realization& realization,
                  const Instance& instance);

/// Intervals every feasible sorting query set contains: I_j with v_i inside the
/// open I_j for some i != j. Ascending ids.
std::vector<IntervalId> forced_sort_queries(const Instance& instance, const Realization& realization);

}  // namespace qmin
