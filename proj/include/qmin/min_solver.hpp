#pragma once

#include "qmin/events.hpp"
#include "qmin/min_policy.hpp"
#include "qmin/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmin {

/// Instance checked for the minimum-problem layout: a clique, I_1 leftmost with
/// the smallest right endpoint and containing no other interval.
class MinInstance {
public:
    /// Throws InvalidInstance listing every violated condition.
    explicit MinInstance(Instance instance);

    static std::vector<std::string> diagnostics(const Instance& instance);

    const Instance& instance() const { return instance_; }
    int size() const { return instance_.size(); }
    /// Pr[v_i < r_1], i.e. the value of I_i falls inside I_1.
    Rational hit_prob(IntervalId i) const;
    /// Pr[some interval of `set` hits I_1] = 1 - Π Pr[v_i > r_1].
    Rational hit_prob(const std::vector<IntervalId>& set) const;
    /// Ids 2..n.
    std::vector<IntervalId> rest() const;

private:
    Instance instance_;
};

/// Cheapest feasible query set for a known realization.
struct Verification {
    std::vector<IntervalId> query_set;
    Rational cost;
};
Verification verify_min(const MinInstance& instance, const Realization& realization);

/// Σ_i w_i Π_{j<i} Pr[v_j > l_i]: query I_1 and cascade.
Rational cost_i1_first(const MinInstance& instance);
/// Expected cost of the permutation policy a(1..n). Throws std::invalid_argument
/// unless `ordering` is a permutation of 1..n.
Rational cost_permutation(const MinInstance& instance, const std::vector<IntervalId>& ordering);

enum class PermutationSearch { I1Last, All };

struct BestPermutation {
    std::vector<IntervalId> ordering;
    Rational cost;
};
/// I1Last: the pure cascade (1, 2, .., n) and every ordering of R followed by I_1.
/// All: every ordering. First minimum in enumeration order wins. Throws
/// LimitExceeded when n > limit.
BestPermutation best_permutation_exact(const MinInstance& instance, PermutationSearch search, int limit = 9);

/// Returns I1First; throws InvalidInstance if costs differ.
MinPolicy approx_uniform(const MinInstance& instance);

struct Det15Result {
    MinPolicy policy;
    Rational a1;
    Rational a_r;
};
/// I1First when A_1 <= A_R, else query R in index order and I_1 last.
Det15Result approx_det15(const MinInstance& instance);

/// E over region events of (policy cost / optimal verification cost).
Rational expected_ratio(const MinPolicy& policy, const MinInstance& instance,
                        std::uint64_t bound = kDefaultEventBound);

struct Alg1Params {
    /// 1: G found; 2: no G and w_1 <= 3w(R)/4; 3: no G and w_1 > 3w(R)/4.
    int branch = 0;
    std::vector<IntervalId> g;
    /// Heavy interval j (w_j >= 3w(R)/4), 0 if none.
    IntervalId heavy = 0;
    /// Largest k with w_1 + .. + w_k <= w(R).
    int k = 0;
    Rational w_r;
    Rational z;
    Rational p_r;
    Rational p1;
    std::optional<Rational> alpha;
    std::optional<Rational> beta;
    std::optional<Rational> mu1, mu_r;
    std::optional<Rational> rho1, rho_r;
    std::optional<Rational> p1_prime, p_j;
    std::optional<Rational> phi1, phi_j;

    /// One "param <name> <value>" line per computed field.
    std::string dump() const;
};

struct Alg1Result {
    MinPolicy policy;
    Alg1Params params;
};
/// Throws std::invalid_argument for n < 2 and InvalidInstance for non-positive w_1 or w(R).
Alg1Result approx_alg1(const MinInstance& instance);

}  // namespace qmin
