#pragma once

#include "qmin/model.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace qmin {

enum class GenKind { ProperChain, Clique, Random };

/// Throws std::invalid_argument for an unknown name.
GenKind parse_gen_kind(const std::string& name);
std::string to_string(GenKind kind);

struct GenOptions {
    /// Costs are drawn from 1..max_cost; 1 gives unit costs.
    int max_cost = 5;
    /// Distributions have up to this many pieces; 1 gives uniform distributions.
    int max_pieces = 3;
    /// Endpoint gaps are drawn from 1..max_gap.
    int max_gap = 3;
};

/// Proper, connected instance with integer endpoints.
Instance gen_proper_chain(int n, std::uint64_t seed, const GenOptions& options = {});
/// Clique with I_1 leftmost and shortest-reaching (valid minimum-problem input).
Instance gen_clique(int n, std::uint64_t seed, const GenOptions& options = {});
/// Arbitrary intervals (may nest or be disconnected).
Instance gen_random(int n, std::uint64_t seed, const GenOptions& options = {});

Instance generate(GenKind kind, int n, std::uint64_t seed, const GenOptions& options = {});

/// Random piecewise distribution over (lo, hi) with positive first and last pieces.
PiecewiseDist gen_dist(const Rational& lo, const Rational& hi, std::mt19937_64& rng, int max_pieces);

/// A realization drawn uniformly from a random positive-mass piece of each distribution.
Realization gen_realization(const Instance& instance, std::mt19937_64& rng);

}  // namespace qmin
