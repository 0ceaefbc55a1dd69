#pragma once

#include "qmin/model.hpp"

#include <optional>
#include <vector>

namespace qmin {

/// A point mass `mass` at `at` on the value of interval `interval`.
struct Atom {
    IntervalId interval = 0;
    Rational at;
    Rational mass;
};

/// Piece list whose masses may sum to less than one (atoms carry the rest).
struct RawDist {
    std::vector<Rational> breakpoints;
    std::vector<Rational> masses;
};

/// Instance as written in a file: intervals in input order with their file
/// ids, optional explicit distributions, and optional point masses.
struct RawInstance {
    std::vector<QueryInterval> intervals;
    std::vector<std::optional<RawDist>> dists;
    std::vector<Atom> atoms;

    static RawInstance from(const Instance& instance);
    int index_of(IntervalId file_id) const;
    /// Mass not held by atoms of the interval at position `index`.
    Rational continuous_mass(int index) const;
    /// Pieces for position `index`, with omitted distributions expanded to uniform.
    RawDist pieces(int index) const;
};

/// Smallest positive gap between distinct endpoints, divided by four.
Rational normalization_epsilon(const RawInstance& raw);

/// Replaces every atom by a region-equivalent uniform piece:
///  - atom at a point that is only a left endpoint: mass spread on (x - eps, x);
///  - only a right endpoint: mass spread on (x, x + eps);
///  - both: every point right of x moves right by 2 eps and the mass is spread on (x, x + 2 eps);
///  - no endpoint: mass spread on a small neighbourhood inside its region.
/// Throws InvalidInstance for an atom outside the open interval of its owner.
Instance normalize_endpoint_mass(const RawInstance& raw);

/// Atom-free instances pass through unchanged.
Instance normalize_endpoint_mass(const Instance& instance);

}  // namespace qmin
