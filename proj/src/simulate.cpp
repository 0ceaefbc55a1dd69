#include "qmin/simulate.hpp"

#include "qmin/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qmin {

namespace {

/// Query bookkeeping shared by both interpreters.
class Trace {
public:
    Trace(const Realization& realization, const Instance& instance)
        : realization_(realization), instance_(instance), queried_(static_cast<std::size_t>(instance.size()), false) {
        report_.total_cost = 0;
    }

    void query(IntervalId i) {
        if (i < 1 || i > instance_.size()) throw std::logic_error("policy queries unknown interval " + std::to_string(i));
        if (is_queried(i)) throw std::logic_error("policy queries I" + std::to_string(i) + " twice");
        queried_[static_cast<std::size_t>(i - 1)] = true;
        report_.queried.push_back(i);
        report_.total_cost += instance_.cost(i);
    }
    bool is_queried(IntervalId i) const { return queried_[static_cast<std::size_t>(i - 1)]; }
    const Rational& value(IntervalId i) const { return realization_.value(i); }

    std::vector<Knowledge> knowledge() const { return knowledge_of(report_.queried, realization_, instance_); }

    SimulationReport& report() { return report_; }

private:
    const Realization& realization_;
    const Instance& instance_;
    std::vector<bool> queried_;
    SimulationReport report_;
};

std::vector<IntervalId> by_value(const Realization& realization, int n) {
    std::vector<IntervalId> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
    std::stable_sort(ids.begin(), ids.end(),
                     [&](IntervalId a, IntervalId b) { return realization.value(a) < realization.value(b); });
    return ids;
}

int child_for(const std::vector<SortBranch>& branches, RegionIndex region, int node) {
    for (const auto& b : branches) {
        if (b.region == region) return b.child;
    }
    throw std::logic_error("policy node " + std::to_string(node) + " has no branch for region " +
                           std::to_string(region));
}

class SortRunner {
public:
    SortRunner(const SortPolicy& policy, const Realization& realization, const Instance& instance,
               const RegionPartition& partition)
        : policy_(policy), trace_(realization, instance) {
        for (IntervalId i = 1; i <= instance.size(); ++i) {
            const auto x = partition.locate(realization.value(i));
            if (!x) throw std::invalid_argument("value of I" + std::to_string(i) + " lies on a region boundary");
            region_.push_back(*x);
        }
    }

    void run(int id) {
        if (id < 0 || static_cast<std::size_t>(id) >= policy_.nodes.size()) {
            throw std::logic_error("policy references missing node " + std::to_string(id));
        }
        const SortNode& node = policy_.nodes[static_cast<std::size_t>(id)];
        switch (node.kind) {
            case SortNode::Kind::Done:
                return;
            case SortNode::Kind::Query:
                trace_.query(node.interval);
                return run(child_for(node.branches, region(node.interval), id));
            case SortNode::Kind::Split: {
                if (node.members.empty()) throw std::logic_error("split node without members");
                RegionIndex lo = region(node.members.front()), hi = lo;
                for (IntervalId m : node.members) {
                    if (!trace_.is_queried(m)) trace_.query(m);
                    lo = std::min(lo, region(m));
                    hi = std::max(hi, region(m));
                }
                run(child_for(node.left, lo, id));
                return run(child_for(node.right, hi, id));
            }
            case SortNode::Kind::CascadeLeft:
                trace_.query(node.interval - 1);
                return run(child_for(node.branches, region(node.interval - 1), id));
            case SortNode::Kind::CascadeRight:
                trace_.query(node.interval + 1);
                return run(child_for(node.branches, region(node.interval + 1), id));
        }
    }

    SimulationReport finish(const Realization& realization, int n) {
        auto& report = trace_.report();
        report.feasible = feasible_sort(trace_.knowledge());
        report.answer = by_value(realization, n);
        return std::move(report);
    }

private:
    RegionIndex region(IntervalId i) const { return region_[static_cast<std::size_t>(i - 1)]; }

    const SortPolicy& policy_;
    Trace trace_;
    std::vector<RegionIndex> region_;
};

SimulationReport simulate_sort(const SortPolicy& policy, const Realization& realization, const Instance& instance,
                               const RegionPartition& partition) {
    SortRunner runner(policy, realization, instance, partition);
    runner.run(policy.root);
    return runner.finish(realization, instance.size());
}

class MinRunner {
public:
    MinRunner(const Realization& realization, const Instance& instance)
        : instance_(instance), trace_(realization, instance) {}

    void cascade() {
        for (IntervalId i = 1; i <= instance_.size(); ++i) {
            if (trace_.is_queried(i)) continue;
            bool above = true;
            for (IntervalId j : trace_.report().queried) above = above && trace_.value(j) > instance_.interval(i).lo;
            if (above) trace_.query(i);
        }
    }

    bool hits(IntervalId i) const { return trace_.value(i) < instance_.interval(1).hi; }

    void permutation(const std::vector<IntervalId>& order) {
        const std::size_t n = order.size();
        for (std::size_t k = 0; k < n; ++k) {
            const IntervalId a = order[k];
            if (a == 1) {
                if (k + 1 < n) cascade();
                return;
            }
            trace_.query(a);
            if (hits(a)) return cascade();
        }
    }

    void steps(const std::vector<MinStep>& program) {
        for (const auto& step : program) {
            switch (step.op) {
                case MinStep::Op::QueryAll:
                    for (IntervalId i : step.items) {
                        if (!trace_.is_queried(i)) trace_.query(i);
                    }
                    break;
                case MinStep::Op::Cascade:
                    cascade();
                    break;
                case MinStep::Op::QueryIfNeeded:
                    for (IntervalId i : step.items) {
                        if (!trace_.is_queried(i) && !feasible_min(trace_.knowledge())) trace_.query(i);
                    }
                    break;
                case MinStep::Op::BranchOnHit: {
                    bool hit = false;
                    for (IntervalId i : step.items) {
                        if (!trace_.is_queried(i)) throw std::logic_error("hit test on unqueried I" + std::to_string(i));
                        hit = hit || hits(i);
                    }
                    steps(hit ? step.on_hit : step.on_miss);
                    break;
                }
            }
        }
    }

    SimulationReport finish(const Realization& realization) {
        auto& report = trace_.report();
        report.feasible = feasible_min(trace_.knowledge());
        if (instance_.size() > 0) report.answer = {by_value(realization, instance_.size()).front()};
        return std::move(report);
    }

private:
    const Instance& instance_;
    Trace trace_;
};

}  // namespace

std::string format_report(const SimulationReport& report) {
    std::ostringstream out;
    out << "queried:";
    for (IntervalId i : report.queried) out << ' ' << i;
    out << "\ncost: " << to_string(report.total_cost) << "\nfeasible: " << (report.feasible ? "yes" : "no")
        << "\nanswer:";
    for (IntervalId i : report.answer) out << ' ' << i;
    out << '\n';
    return out.str();
}

SimulationReport simulate(const SortPolicy& policy, const Realization& realization, const Instance& instance) {
    check_realization(instance, realization);
    return simulate_sort(policy, realization, instance, compute_regions(instance));
}

SimulationReport simulate(const MinPolicy& policy, const Realization& realization, const Instance& instance) {
    check_realization(instance, realization);
    MinRunner runner(realization, instance);
    switch (policy.kind) {
        case MinPolicy::Kind::I1First:
            runner.cascade();
            break;
        case MinPolicy::Kind::Permutation: {
            auto sorted = policy.order;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t k = 0; k < sorted.size(); ++k) {
                if (sorted[k] != static_cast<IntervalId>(k + 1) || sorted.size() != static_cast<std::size_t>(instance.size())) {
                    throw std::logic_error("ordering is not a permutation of 1.." + std::to_string(instance.size()));
                }
            }
            runner.permutation(policy.order);
            break;
        }
        case MinPolicy::Kind::AlgorithmTrace:
            runner.steps(policy.steps);
            break;
    }
    return runner.finish(realization);
}

Rational expected_cost_exact(const SortPolicy& policy, const Instance& instance, std::uint64_t bound) {
    const auto space = EventSpace::for_sort(instance, bound);
    const auto partition = compute_regions(instance);
    return space.expectation([&](const RegionEvent& e) {
        return simulate_sort(policy, e.representative, instance, partition).total_cost;
    });
}

Rational expected_cost_exact(const MinPolicy& policy, const Instance& instance, std::uint64_t bound) {
    const auto space = EventSpace::for_min(instance, bound);
    return space.expectation(
        [&](const RegionEvent& e) { return simulate(policy, e.representative, instance).total_cost; });
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rational from_u64(std::uint64_t x) { return Rational(mpz_class(static_cast<unsigned long>(x))); }

}  // namespace

std::uint64_t mc_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t interval, std::uint64_t stream) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ sample);
    h = splitmix64(h ^ interval);
    return splitmix64(h ^ stream);
}

Realization mc_sample(const Instance& instance, std::uint64_t seed, std::uint64_t sample) {
    static const Rational two64 = from_u64(1ULL << 63) * 2;
    static const Rational two54 = from_u64(1ULL << 54);
    Realization r;
    for (IntervalId i = 1; i <= instance.size(); ++i) {
        const auto& dist = instance.dist(i);
        const Rational u = from_u64(mc_draw(seed, sample, static_cast<std::uint64_t>(i), 0)) / two64;
        std::size_t k = 0;
        Rational cumulative = 0;
        for (; k < dist.piece_count(); ++k) {
            cumulative += dist.masses()[k];
            if (cumulative > u) break;
        }
        if (k == dist.piece_count()) throw std::logic_error("distribution masses do not sum to one");
        const Rational& a = dist.breakpoints()[k];
        const Rational width = dist.breakpoints()[k + 1] - a;
        const std::uint64_t m = mc_draw(seed, sample, static_cast<std::uint64_t>(i), 1) >> 11;
        r.values.push_back(a + width * from_u64(2 * m + 1) / two54);
    }
    return r;
}

MonteCarloResult monte_carlo(const std::function<Rational(const Realization&)>& trace_cost,
                             const Instance& instance, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("monte_carlo needs at least one sample");
    MonteCarloResult result;
    result.samples = samples;
    Rational sum = 0, sum_sq = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Rational c = trace_cost(mc_sample(instance, seed, s));
        sum += c;
        sum_sq += c * c;
        if (s == 0 || c < result.min) result.min = c;
        if (s == 0 || c > result.max) result.max = c;
    }
    const Rational count = from_u64(samples);
    result.mean = sum / count;
    if (samples > 1) {
        const Rational variance = (sum_sq - count * result.mean * result.mean) / (count - 1);
        result.std_error = std::sqrt(std::max(0.0, to_double(variance)) / static_cast<double>(samples));
    }
    return result;
}

MonteCarloResult monte_carlo(const SortPolicy& policy, const Instance& instance, std::uint64_t samples,
                             std::uint64_t seed) {
    const auto partition = compute_regions(instance);
    return monte_carlo(
        [&](const Realization& r) { return simulate_sort(policy, r, instance, partition).total_cost; }, instance,
        samples, seed);
}

MonteCarloResult monte_carlo(const MinPolicy& policy, const Instance& instance, std::uint64_t samples,
                             std::uint64_t seed) {
    return monte_carlo([&](const Realization& r) { return simulate(policy, r, instance).total_cost; }, instance,
                       samples, seed);
}

}  // namespace qmin
