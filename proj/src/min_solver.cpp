#include "qmin/min_solver.hpp"

#include "qmin/feasibility.hpp"
#include "qmin/simulate.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qmin {

// ---------------------------------------------------------------------------
// MinInstance
// ---------------------------------------------------------------------------

MinInstance::MinInstance(Instance instance) : instance_(std::move(instance)) {
    auto problems = diagnostics(instance_);
    if (!problems.empty()) throw InvalidInstance(std::move(problems));
}

std::vector<std::string> MinInstance::diagnostics(const Instance& instance) {
    std::vector<std::string> problems;
    const int n = instance.size();
    if (n == 0) return {"empty instance"};
    for (IntervalId i = 1; i <= n; ++i) {
        for (IntervalId j = i + 1; j <= n; ++j) {
            if (!are_dependent(i, j, instance)) {
                problems.push_back("not a clique: I" + std::to_string(i) + " and I" + std::to_string(j) +
                                   " are independent");
            }
        }
    }
    const auto& first = instance.interval(1);
    for (IntervalId j = 2; j <= n; ++j) {
        const auto& iv = instance.interval(j);
        if (iv.lo <= first.lo) {
            problems.push_back("l1 must be strictly smallest: l" + std::to_string(j) + " <= l1");
        }
        if (iv.hi < first.hi) problems.push_back("r1 must be smallest: r" + std::to_string(j) + " < r1");
        if (first.lo <= iv.lo && iv.hi <= first.hi) {
            problems.push_back("nested: I" + std::to_string(j) + " ⊆ I1");
        }
    }
    return problems;
}

Rational MinInstance::hit_prob(IntervalId i) const { return instance_.dist(i).prob_below(instance_.interval(1).hi); }

Rational MinInstance::hit_prob(const std::vector<IntervalId>& set) const {
    Rational miss = 1;
    for (IntervalId i : set) miss *= 1 - hit_prob(i);
    return 1 - miss;
}

std::vector<IntervalId> MinInstance::rest() const {
    std::vector<IntervalId> r;
    for (IntervalId i = 2; i <= size(); ++i) r.push_back(i);
    return r;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

Verification verify_min(const MinInstance& min_instance, const Realization& realization) {
    const auto& instance = min_instance.instance();
    check_realization(instance, realization);
    const int n = instance.size();
    IntervalId argmin = 1;
    for (IntervalId i = 2; i <= n; ++i) {
        if (realization.value(i) < realization.value(argmin)) argmin = i;
    }
    // (a) the minimum and everything that could still undercut it.
    Verification a;
    a.cost = 0;
    for (IntervalId j = 1; j <= n; ++j) {
        if (instance.interval(j).lo < realization.value(argmin)) {
            a.query_set.push_back(j);
            a.cost += instance.cost(j);
        }
    }
    // (b) everything but I_1, when all of R lies right of I_1.
    bool right_of = argmin == 1;
    for (IntervalId j = 2; j <= n && right_of; ++j) right_of = realization.value(j) > instance.interval(1).hi;
    if (right_of) {
        Verification b{min_instance.rest(), cost_of(instance, min_instance.rest())};
        if (b.cost < a.cost) return b;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Permutation costs
// ---------------------------------------------------------------------------

Rational cost_i1_first(const MinInstance& min_instance) {
    const auto& inst = min_instance.instance();
    Rational total = 0;
    for (IntervalId i = 1; i <= inst.size(); ++i) {
        Rational p = 1;
        for (IntervalId j = 1; j < i; ++j) p *= inst.dist(j).prob_above(inst.interval(i).lo);
        total += inst.cost(i) * p;
    }
    return total;
}

Rational cost_permutation(const MinInstance& min_instance, const std::vector<IntervalId>& a) {
    const auto& inst = min_instance.instance();
    const int n = inst.size();
    {
        auto sorted = a;
        std::sort(sorted.begin(), sorted.end());
        std::vector<IntervalId> ids(static_cast<std::size_t>(n));
        std::iota(ids.begin(), ids.end(), 1);
        if (sorted != ids) throw std::invalid_argument("ordering is not a permutation of 1.." + std::to_string(n));
    }
    const Rational& r1 = inst.interval(1).hi;
    const auto at = [&](int k) { return a[static_cast<std::size_t>(k)]; };

    // cost(T^_k) with an optional conditioned position c (v_{a(c)} in I_1); the sum starts at `from`.
    auto cascade_cost = [&](int from, int cond) {
        const int start = cond >= 0 ? cond : from;
        Rational total = 0;
        for (int i = from; i < n; ++i) {
            const IntervalId ai = at(i);
            const Rational& li = inst.interval(ai).lo;
            Rational p = 1;
            for (int j = start; j < n; ++j) {
                const IntervalId aj = at(j);
                if (aj >= ai) continue;
                if (j == cond) {
                    const Rational hit = inst.dist(aj).prob_below(r1);
                    p *= inst.dist(aj).prob_in(li, r1) / hit;
                } else {
                    p *= inst.dist(aj).prob_above(li);
                }
            }
            total += inst.cost(ai) * p;
        }
        return total;
    };

    // cost(T_k), evaluated from the back.
    Rational next = 0;  // cost(T_{k+1})
    for (int k = n - 1; k >= 0; --k) {
        const IntervalId ak = at(k);
        Rational cost;
        if (ak == 1) {
            cost = k == n - 1 ? Rational(0) : cascade_cost(k, -1);
        } else {
            const Rational hit = min_instance.hit_prob(ak);
            cost = inst.cost(ak) + (1 - hit) * next;
            if (sgn(hit) > 0) cost += hit * cascade_cost(k + 1, k);
        }
        next = std::move(cost);
    }
    return next;
}

BestPermutation best_permutation_exact(const MinInstance& min_instance, PermutationSearch search, int limit) {
    const int n = min_instance.size();
    if (n > limit) {
        throw LimitExceeded("best_permutation_exact: n = " + std::to_string(n) + " exceeds limit " +
                            std::to_string(limit));
    }
    BestPermutation best;
    bool have = false;
    auto consider = [&](const std::vector<IntervalId>& order, Rational cost) {
        if (!have || cost < best.cost) {
            best = {order, std::move(cost)};
            have = true;
        }
    };
    std::vector<IntervalId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    if (search == PermutationSearch::All) {
        do {
            consider(order, cost_permutation(min_instance, order));
        } while (std::next_permutation(order.begin(), order.end()));
        return best;
    }
    consider(order, cost_i1_first(min_instance));
    std::vector<IntervalId> r = min_instance.rest();
    do {
        auto candidate = r;
        candidate.push_back(1);
        consider(candidate, cost_permutation(min_instance, candidate));
    } while (std::next_permutation(r.begin(), r.end()));
    return best;
}

// ---------------------------------------------------------------------------
// Approximations
// ---------------------------------------------------------------------------

MinPolicy approx_uniform(const MinInstance& min_instance) {
    const auto& inst = min_instance.instance();
    for (IntervalId i = 2; i <= inst.size(); ++i) {
        if (inst.cost(i) != inst.cost(1)) throw InvalidInstance({"approx_uniform requires uniform query costs"});
    }
    return MinPolicy::i1_first();
}

Det15Result approx_det15(const MinInstance& min_instance) {
    const auto& inst = min_instance.instance();
    Det15Result result;
    result.a1 = cost_i1_first(min_instance);
    const auto r = min_instance.rest();
    result.a_r = cost_of(inst, r) + inst.cost(1) * min_instance.hit_prob(r);
    if (result.a1 <= result.a_r) {
        result.policy = MinPolicy::i1_first();
    } else {
        auto order = r;
        order.push_back(1);
        result.policy = MinPolicy::permutation(std::move(order));
    }
    return result;
}

Rational expected_ratio(const MinPolicy& policy, const MinInstance& min_instance, std::uint64_t bound) {
    const auto& inst = min_instance.instance();
    const auto space = EventSpace::for_min(inst, bound);
    return space.expectation([&](const RegionEvent& e) {
        const Rational cost = simulate(policy, e.representative, inst).total_cost;
        const Rational opt = verify_min(min_instance, e.representative).cost;
        if (sgn(opt) == 0) {
            if (sgn(cost) == 0) return Rational(1);
            throw std::domain_error("expected_ratio: positive cost against a zero optimum");
        }
        return Rational(cost / opt);
    });
}

namespace {

Rational sum_costs(const Instance& inst, const std::vector<IntervalId>& ids) { return cost_of(inst, ids); }

std::vector<IntervalId> minus(const std::vector<IntervalId>& set, const std::vector<IntervalId>& drop) {
    std::vector<IntervalId> out;
    for (IntervalId i : set) {
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) out.push_back(i);
    }
    return out;
}

MinStep all(std::vector<IntervalId> items) { return {MinStep::Op::QueryAll, std::move(items), {}, {}}; }
MinStep if_needed(std::vector<IntervalId> items) { return {MinStep::Op::QueryIfNeeded, std::move(items), {}, {}}; }
MinStep cascade() { return {MinStep::Op::Cascade, {}, {}, {}}; }
MinStep branch(std::vector<IntervalId> items, std::vector<MinStep> hit, std::vector<MinStep> miss) {
    return {MinStep::Op::BranchOnHit, std::move(items), std::move(hit), std::move(miss)};
}

}  // namespace

Alg1Result approx_alg1(const MinInstance& min_instance) {
    const auto& inst = min_instance.instance();
    const int n = inst.size();
    if (n < 2) throw std::invalid_argument("approx_alg1 needs at least two intervals");
    const auto r = min_instance.rest();
    const Rational w1 = inst.cost(1);
    Alg1Params prm;
    prm.w_r = sum_costs(inst, r);
    if (sgn(w1) <= 0 || sgn(prm.w_r) <= 0) {
        throw InvalidInstance({"approx_alg1 requires positive w1 and w(R)"});
    }
    const Rational& wr = prm.w_r;
    prm.z = wr / w1;
    prm.p_r = min_instance.hit_prob(r);
    {
        Rational prefix = 0;
        for (IntervalId i = 1; i <= n && prefix + inst.cost(i) <= wr; ++i) {
            prefix += inst.cost(i);
            prm.k = i;
        }
        prm.p1 = inst.dist(1).prob_above(inst.interval(prm.k + 1).lo);
    }
    const Rational three_quarters = Rational(3) / 4 * wr;

    // Step 1: look for G.
    for (IntervalId j : r) {
        if (inst.cost(j) >= three_quarters) {
            prm.heavy = j;
            break;
        }
    }
    if (prm.heavy != 0) {
        const auto others = minus(r, {prm.heavy});
        if (!others.empty() && min_instance.hit_prob(others) >= prm.p_r / 4) {
            prm.g = others;
            prm.alpha = Rational(1, 4);
        }
    } else {
        // Largest costs first; skip an element that would overshoot 3w(R)/4.
        auto by_cost = r;
        std::stable_sort(by_cost.begin(), by_cost.end(),
                         [&](IntervalId x, IntervalId y) { return inst.cost(x) > inst.cost(y); });
        std::vector<IntervalId> g_prime;
        Rational w = 0;
        for (IntervalId i : by_cost) {
            if (w * 2 >= wr) break;
            if (w + inst.cost(i) > three_quarters) continue;
            g_prime.push_back(i);
            w += inst.cost(i);
        }
        std::sort(g_prime.begin(), g_prime.end());
        if (!(w * 2 >= wr && w <= three_quarters)) throw std::logic_error("greedy G' out of range");
        prm.beta = w / wr;
        if (min_instance.hit_prob(g_prime) >= *prm.beta * prm.p_r) {
            prm.g = g_prime;
            prm.alpha = *prm.beta;
        } else {
            prm.g = minus(r, g_prime);
            prm.alpha = 1 - *prm.beta;
        }
    }

    const Rational& z = prm.z;
    const Rational& pr = prm.p_r;
    const Rational& p1 = prm.p1;
    Alg1Result result;
    if (!prm.g.empty()) {
        prm.branch = 1;
        prm.mu1 = 1 + (1 - pr) * p1 * w1 / wr;
        prm.mu_r = 1 + Rational(13, 16) * z + (1 - pr) * (p1 * (1 - z) + Rational(3, 16) * z - 1);
        if (*prm.mu1 <= *prm.mu_r) {
            result.policy = MinPolicy::i1_first();
        } else {
            result.policy = MinPolicy::trace(
                {all(prm.g), branch(prm.g, {cascade()}, {all(minus(r, prm.g)), if_needed({1})})});
        }
    } else if (w1 <= three_quarters) {
        prm.branch = 2;
        prm.rho1 = 1 + p1 * (1 - pr) * w1 / wr;
        prm.rho_r = (1 - pr) * p1 + pr + (1 - p1 + pr * p1 / 4) * z + (3 * pr * p1 / 4) * z / (3 * z + 4);
        if (*prm.rho1 <= *prm.rho_r) {
            result.policy = MinPolicy::i1_first();
        } else {
            result.policy = MinPolicy::trace({all(r), if_needed({1})});
        }
    } else {
        prm.branch = 3;
        const IntervalId j = prm.heavy;
        const auto r_prime = minus(r, {j});
        const Rational wr_prime = wr - inst.cost(j);
        const Rational wj = inst.cost(j);
        const Rational pp = inst.dist(1).prob_above(inst.interval(j).lo);
        const Rational pj = min_instance.hit_prob(j);
        const Rational lo = std::min(w1, wr);
        prm.p1_prime = pp;
        prm.p_j = pj;
        prm.phi1 = pp * (pj * (1 + wr_prime / (w1 + wj)) + (1 - pj) * (1 + 1 / z)) +
                   (1 - pp) * (pj * (1 + wr_prime / w1) + (1 - pj) * (wr_prime + w1) / lo);
        prm.phi_j = pj * ((1 - pp) * (1 + z) + pp * (1 + wr_prime / (w1 + wj))) +
                    (1 - pj) * (pp + (1 - pp) * wr / lo);
        std::vector<MinStep> one_then_j{all({1}), if_needed({j})};
        std::vector<MinStep> j_then_one{all({j}), if_needed({1})};
        result.policy = MinPolicy::trace(
            {all(r_prime), branch(r_prime, one_then_j, *prm.phi1 <= *prm.phi_j ? one_then_j : j_then_one)});
    }
    result.params = std::move(prm);
    return result;
}

std::string Alg1Params::dump() const {
    std::ostringstream out;
    out << "param branch " << branch << '\n';
    out << "param G";
    for (IntervalId i : g) out << ' ' << i;
    out << '\n';
    out << "param heavy " << heavy << '\n';
    out << "param k " << k << '\n';
    const auto put = [&](const char* name, const std::optional<Rational>& v) {
        if (v) out << "param " << name << ' ' << to_string(*v) << '\n';
    };
    put("w_R", w_r);
    put("z", z);
    put("p_R", p_r);
    put("p1", p1);
    put("alpha", alpha);
    put("beta", beta);
    put("mu1", mu1);
    put("mu_R", mu_r);
    put("rho1", rho1);
    put("rho_R", rho_r);
    put("p1_prime", p1_prime);
    put("p_j", p_j);
    put("phi1", phi1);
    put("phi_j", phi_j);
    return out.str();
}

}  // namespace qmin
