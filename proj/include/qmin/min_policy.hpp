#pragma once

#include "qmin/model.hpp"

#include <string>
#include <vector>

namespace qmin {

/// One instruction of an algorithm-trace policy for the minimum problem.
struct MinStep {
    enum class Op {
        /// Query every listed interval not yet queried.
        QueryAll,
        /// Query I_1 and cascade: walk the unqueried intervals by index and query
        /// I_i whenever every known value exceeds l_i.
        Cascade,
        /// For each listed interval in turn, query it unless the minimum is already certified.
        QueryIfNeeded,
        /// Run on_hit if some listed value lies in I_1, otherwise on_miss.
        BranchOnHit,
    };
    Op op = Op::QueryAll;
    std::vector<IntervalId> items;
    std::vector<MinStep> on_hit;
    std::vector<MinStep> on_miss;

    bool operator==(const MinStep& other) const = default;
};

/// Adaptive policy for the minimum problem.
struct MinPolicy {
    enum class Kind { I1First, Permutation, AlgorithmTrace };
    Kind kind = Kind::I1First;
    /// Permutation: a(1..n). Query a(k); if its value hits I_1, cascade over the rest.
    std::vector<IntervalId> order;
    /// AlgorithmTrace program.
    std::vector<MinStep> steps;

    static MinPolicy i1_first() { return {}; }
    static MinPolicy permutation(std::vector<IntervalId> order) {
        MinPolicy p;
        p.kind = Kind::Permutation;
        p.order = std::move(order);
        return p;
    }
    static MinPolicy trace(std::vector<MinStep> steps) {
        MinPolicy p;
        p.kind = Kind::AlgorithmTrace;
        p.steps = std::move(steps);
        return p;
    }

    /// "I1First", "Permutation(2 3 1)" or "Trace[...]" with steps "all(ids)", "cascade",
    /// "ifneeded(ids)" and "hit(ids)?{...}:{...}" separated by "; ".
    std::string describe() const;

    bool operator==(const MinPolicy& other) const = default;
};

/// Inverse of MinPolicy::describe. Throws std::runtime_error on malformed text.
MinPolicy parse_min_policy(const std::string& text);

}  // namespace qmin
