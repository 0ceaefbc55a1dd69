#pragma once

#include "qmin/model.hpp"
#include "qmin/normalize.hpp"

#include <vector>

namespace qmin {

/// Optimal expected cost over every adaptive strategy for sorting, by
/// memoized search over cell-granular knowledge states. Throws LimitExceeded
/// when n > limit. Works on any instance (nested or disconnected too).
Rational oracle_sort(const Instance& instance, int limit = 6);
/// Same search with point masses kept as exact point cells (no normalization).
Rational oracle_sort(const RawInstance& raw, int limit = 6);

enum class OracleMode { Permutation, General };

struct OracleMinResult {
    Rational cost;
    /// Permutation mode: the first optimal ordering in lexicographic order.
    std::vector<IntervalId> ordering;
};

/// Permutation mode: best of all n! permutation policies (default limit 8).
/// General mode: exhaustive adaptive search with the minimum certificate as the
/// stopping rule (default limit 5).
OracleMinResult oracle_min(const Instance& instance, OracleMode mode, int limit = -1);

/// Cheapest feasible query set by enumerating all 2^n subsets (ties: smaller set
/// bitmask first). `sorting` picks the certificate.
std::pair<std::vector<IntervalId>, Rational> cheapest_feasible_subset(const Instance& instance,
                                                                      const Realization& realization, bool sorting);

}  // namespace qmin
