#pragma once

#include "qmin/events.hpp"
#include "qmin/min_policy.hpp"
#include "qmin/model.hpp"
#include "qmin/sort_solver.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qmin {

struct SimulationReport {
    std::vector<IntervalId> queried;
    Rational total_cost;
    bool feasible = false;
    /// Sorting: ids in increasing value order. Minimum: a single id.
    std::vector<IntervalId> answer;
};

/// "queried: ...", "cost: ...", "feasible: yes|no", "answer: ..." lines.
std::string format_report(const SimulationReport& report);

/// Runs the decision DAG on a realization. Throws std::invalid_argument when a
/// value sits on a region boundary and std::logic_error when the policy is
/// malformed for the instance.
SimulationReport simulate(const SortPolicy& policy, const Realization& realization, const Instance& instance);
/// Minimum-problem policies assume the MinInstance layout (I_1 has the smallest
/// right endpoint).
SimulationReport simulate(const MinPolicy& policy, const Realization& realization, const Instance& instance);

Rational expected_cost_exact(const SortPolicy& policy, const Instance& instance,
                             std::uint64_t bound = kDefaultEventBound);
Rational expected_cost_exact(const MinPolicy& policy, const Instance& instance,
                             std::uint64_t bound = kDefaultEventBound);

struct MonteCarloResult {
    Rational mean;
    double std_error = 0.0;
    Rational min;
    Rational max;
    std::uint64_t samples = 0;
};

/// Counter-based draw in [0, 2^64): independent of the order samples are taken in.
std::uint64_t mc_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t interval, std::uint64_t stream);
/// Realization number `sample`: piece chosen by mass, value uniform inside the piece.
Realization mc_sample(const Instance& instance, std::uint64_t seed, std::uint64_t sample);

/// Throws std::invalid_argument when samples == 0.
MonteCarloResult monte_carlo(const std::function<Rational(const Realization&)>& trace_cost,
                             const Instance& instance, std::uint64_t samples, std::uint64_t seed);
MonteCarloResult monte_carlo(const SortPolicy& policy, const Instance& instance, std::uint64_t samples,
                             std::uint64_t seed);
MonteCarloResult monte_carlo(const MinPolicy& policy, const Instance& instance, std::uint64_t samples,
                             std::uint64_t seed);

}  // namespace qmin
