#include "qmin/oracle.hpp"

#include "qmin/events.hpp"
#include "qmin/feasibility.hpp"
#include "qmin/simulate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace qmin {

namespace {

/// Possible outcomes of one query; a point cell has a == b.
struct Outcome {
    Rational a;
    Rational b;
    Rational mass;
};

struct CellModel {
    std::vector<Knowledge> unqueried;
    std::vector<Rational> costs;
    std::vector<std::vector<Outcome>> outcomes;
};

class Search {
public:
    using Predicate = bool (*)(const std::vector<Knowledge>&);

    Search(CellModel model, Predicate feasible) : model_(std::move(model)), feasible_(feasible) {}

    Rational run() {
        std::vector<int> state(model_.costs.size(), -1);
        return solve(state);
    }

private:
    const Rational& solve(std::vector<int>& state) {
        if (auto it = memo_.find(state); it != memo_.end()) return it->second;
        std::vector<Knowledge> known = model_.unqueried;
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (state[i] < 0) continue;
            const auto& o = model_.outcomes[i][static_cast<std::size_t>(state[i])];
            known[i] = Knowledge{true, o.a, o.b};
        }
        Rational best = 0;
        if (!feasible_(known)) {
            bool any = false;
            for (std::size_t i = 0; i < state.size(); ++i) {
                if (state[i] >= 0) continue;
                Rational total = model_.costs[i];
                for (std::size_t k = 0; k < model_.outcomes[i].size(); ++k) {
                    if (sgn(model_.outcomes[i][k].mass) == 0) continue;
                    state[i] = static_cast<int>(k);
                    total += model_.outcomes[i][k].mass * solve(state);
                }
                state[i] = -1;
                if (!any || total < best) best = total;
                any = true;
            }
        }
        return memo_.emplace(state, std::move(best)).first->second;
    }

    CellModel model_;
    Predicate feasible_;
    std::map<std::vector<int>, Rational> memo_;
};

void check_limit(int n, int limit, const char* what) {
    if (n > limit) {
        throw LimitExceeded(std::string(what) + ": n = " + std::to_string(n) + " exceeds limit " +
                            std::to_string(limit));
    }
}

CellModel from_space(const Instance& instance, const EventSpace& space) {
    CellModel model;
    for (IntervalId i = 1; i <= instance.size(); ++i) {
        model.unqueried.push_back(Knowledge::unqueried(instance.interval(i)));
        model.costs.push_back(instance.cost(i));
        std::vector<Outcome> out;
        for (const auto& c : space.cells(i)) out.push_back({c.a, c.b, c.mass});
        model.outcomes.push_back(std::move(out));
    }
    return model;
}

/// Mass a piece list puts on (a, b).
Rational piece_mass(const RawDist& d, const Rational& a, const Rational& b) {
    Rational total = 0;
    for (std::size_t k = 0; k < d.masses.size(); ++k) {
        const Rational lo = std::max(a, d.breakpoints[k]);
        const Rational hi = std::min(b, d.breakpoints[k + 1]);
        if (hi > lo) total += d.masses[k] * (hi - lo) / (d.breakpoints[k + 1] - d.breakpoints[k]);
    }
    return total;
}

}  // namespace

Rational oracle_sort(const Instance& instance, int limit) {
    check_limit(instance.size(), limit, "oracle_sort");
    // Only the cell lists are used; the product bound is irrelevant here.
    const auto space = EventSpace::for_sort(instance, ~std::uint64_t{0});
    return Search(from_space(instance, space), &feasible_sort).run();
}

Rational oracle_sort(const RawInstance& raw, int limit) {
    normalize_endpoint_mass(raw);  // validation only
    const int n = static_cast<int>(raw.intervals.size());
    check_limit(n, limit, "oracle_sort");
    std::vector<Rational> cuts;
    for (const auto& iv : raw.intervals) {
        cuts.push_back(iv.lo);
        cuts.push_back(iv.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    CellModel model;
    for (int p = 0; p < n; ++p) {
        const auto& iv = raw.intervals[static_cast<std::size_t>(p)];
        model.unqueried.push_back(Knowledge::unqueried(iv));
        model.costs.push_back(iv.cost);
        const RawDist d = raw.pieces(p);
        std::vector<Outcome> out;
        Rational prev = iv.lo;
        for (const auto& c : cuts) {
            if (c <= iv.lo) continue;
            const Rational next = std::min(c, iv.hi);
            out.push_back({prev, next, piece_mass(d, prev, next)});
            prev = next;
            if (next == iv.hi) break;
        }
        for (const auto& atom : raw.atoms) {
            if (raw.index_of(atom.interval) == p) out.push_back({atom.at, atom.at, atom.mass});
        }
        model.outcomes.push_back(std::move(out));
    }
    return Search(std::move(model), &feasible_sort).run();
}

OracleMinResult oracle_min(const Instance& instance, OracleMode mode, int limit) {
    const int n = instance.size();
    OracleMinResult result;
    if (mode == OracleMode::General) {
        check_limit(n, limit < 0 ? 5 : limit, "oracle_min");
        const auto space = EventSpace::for_min(instance, ~std::uint64_t{0});
        result.cost = Search(from_space(instance, space), &feasible_min).run();
        return result;
    }
    check_limit(n, limit < 0 ? 8 : limit, "oracle_min");
    std::vector<IntervalId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    bool first = true;
    do {
        const Rational c = expected_cost_exact(MinPolicy::permutation(order), instance);
        if (first || c < result.cost) {
            result.cost = c;
            result.ordering = order;
            first = false;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return result;
}

std::pair<std::vector<IntervalId>, Rational> cheapest_feasible_subset(const Instance& instance,
                                                                      const Realization& realization, bool sorting) {
    check_realization(instance, realization);
    const int n = instance.size();
    if (n > 20) throw LimitExceeded("subset enumeration: n = " + std::to_string(n) + " exceeds limit 20");
    std::vector<IntervalId> best_set;
    Rational best_cost = 0;
    bool found = false;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<IntervalId> set;
        Rational cost = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                set.push_back(i + 1);
                cost += instance.cost(i + 1);
            }
        }
        if (found && cost >= best_cost) continue;
        const bool ok = sorting ? feasible_sort(set, realization, instance) : feasible_min(set, realization, instance);
        if (ok) {
            best_set = std::move(set);
            best_cost = cost;
            found = true;
        }
    }
    return {best_set, best_cost};
}

}  // namespace qmin
