#include <gtest/gtest.h>

#include "qmin/events.hpp"
#include "qmin/feasibility.hpp"
#include "qmin/generate.hpp"
#include "qmin/min_solver.hpp"
#include "qmin/oracle.hpp"
#include "qmin/simulate.hpp"
#include "qmin/sort_solver.hpp"
#include "test_util.hpp"

#include <random>

using namespace qmin;
using qmin::testing::q;
using qmin::testing::uniform;

namespace {

Instance witness() { return uniform({{"0", "100"}, {"95", "105"}, {"98", "198"}}); }

Realization values(std::initializer_list<const char*> vs) {
    Realization r;
    for (const char* v : vs) r.values.push_back(q(v));
    return r;
}

/// Order forced: every pair has disjoint ranges (queried items as points).
bool order_forced(const std::vector<IntervalId>& queried, const Realization& r, const Instance& inst) {
    const int n = inst.size();
    auto range = [&](IntervalId i) {
        const bool known = std::find(queried.begin(), queried.end(), i) != queried.end();
        return known ? std::pair{r.value(i), r.value(i)} : std::pair{inst.interval(i).lo, inst.interval(i).hi};
    };
    for (IntervalId a = 1; a <= n; ++a) {
        for (IntervalId b = a + 1; b <= n; ++b) {
            const auto [la, ha] = range(a);
            const auto [lb, hb] = range(b);
            const bool both = la == ha && lb == hb;
            if (!both && !(ha <= lb || hb <= la)) return false;
        }
    }
    return true;
}

}  // namespace

TEST(Feasibility, SortBasics) {
    const auto inst = witness();
    const auto v = values({"50", "99", "150"});
    EXPECT_TRUE(feasible_sort({1, 2, 3}, v, inst));
    EXPECT_FALSE(feasible_sort({}, v, inst));
    // 99 lies inside the unqueried I1.
    EXPECT_FALSE(feasible_sort({2, 3}, v, inst));
    EXPECT_TRUE(feasible_sort({}, values({"1/2", "5/2"}), uniform({{"0", "1"}, {"2", "3"}})));
}

TEST(Feasibility, SortMatchesPairwiseDefinitionExhaustively) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 4; ++n) {
        for (std::uint64_t seed = 0; seed < 15; ++seed) {
            const auto inst = gen_random(n, seed);
            const auto r = gen_realization(inst, rng);
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                std::vector<IntervalId> set;
                for (int i = 0; i < n; ++i) {
                    if (mask & (1u << i)) set.push_back(i + 1);
                }
                EXPECT_EQ(feasible_sort(set, r, inst), order_forced(set, r, inst));
            }
        }
    }
}

TEST(Feasibility, MinBasics) {
    const auto inst = uniform({{"0", "10"}, {"5", "20"}, {"6", "30"}});
    EXPECT_TRUE(feasible_min({1, 2, 3}, values({"7", "8", "9"}), inst));
    EXPECT_FALSE(feasible_min({}, values({"1", "15", "20"}), uniform({{"0", "10"}, {"5", "20"}})));
    // I1 unqueried, everything else right of r1.
    EXPECT_TRUE(feasible_min({2, 3}, values({"7", "11", "12"}), inst));
    EXPECT_FALSE(feasible_min({2, 3}, values({"7", "9", "12"}), inst));
    // Queried minimum left of every unqueried lower endpoint.
    EXPECT_TRUE(feasible_min({1}, values({"4", "11", "12"}), inst));
    EXPECT_FALSE(feasible_min({1}, values({"5.5", "11", "12"}), inst));
    EXPECT_TRUE(feasible_min(std::vector<Knowledge>{Knowledge::unqueried({1, 0, 1, 1})}));
    EXPECT_FALSE(feasible_min(std::vector<Knowledge>{Knowledge::point(2), Knowledge::point(2)}));
}

TEST(Events, ProbabilitiesSumToOne) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const auto& inst : {gen_proper_chain(4, seed), gen_clique(4, seed), gen_random(3, seed)}) {
            for (const auto& space : {EventSpace::for_sort(inst), EventSpace::for_min(inst)}) {
                Rational total = 0;
                std::uint64_t count = 0;
                space.for_each([&](const RegionEvent& e) {
                    total += e.probability;
                    ++count;
                    ASSERT_GT(e.probability, 0);
                    for (IntervalId i = 1; i <= inst.size(); ++i) {
                        const int k = e.assignment[static_cast<std::size_t>(i - 1)];
                        ASSERT_GE(k, 0);
                        ASSERT_LT(k, static_cast<int>(space.cells(i).size()));
                        const auto& cell = space.cells(i)[static_cast<std::size_t>(k)];
                        EXPECT_GT(e.representative.value(i), cell.a);
                        EXPECT_LT(e.representative.value(i), cell.b);
                    }
                });
                EXPECT_EQ(total, 1);
                EXPECT_EQ(count, space.size());
            }
        }
    }
}

TEST(Events, SortCellsAreRegions) {
    const auto inst = witness();
    const auto space = EventSpace::for_sort(inst);
    const auto part = compute_regions(inst);
    for (IntervalId i = 1; i <= 3; ++i) {
        ASSERT_EQ(static_cast<int>(space.cells(i).size()), part.last_of(i) - part.first_of(i) + 1);
        for (std::size_t k = 0; k < space.cells(i).size(); ++k) {
            EXPECT_EQ(space.cells(i)[k].a, part.region(part.first_of(i) + static_cast<int>(k)).a);
        }
    }
    EXPECT_EQ(space.size(), 3u * 3u * 3u);
}

TEST(Events, MinCellsMergeAboveR1) {
    const auto inst = uniform({{"0", "100"}, {"5", "305"}, {"6", "220"}});
    const auto space = EventSpace::for_min(inst);
    // I1: (0,5) (5,6) (6,100); I2: (5,6) (6,100) (100,305); I3: (6,100) (100,220)
    EXPECT_EQ(space.cells(1).size(), 3u);
    EXPECT_EQ(space.cells(2).size(), 3u);
    EXPECT_EQ(space.cells(3).size(), 2u);
    EXPECT_EQ(space.size(), 18u);
}

TEST(Events, BoundIsEnforced) {
    const auto inst = gen_proper_chain(8, 3);
    EXPECT_THROW(EventSpace::for_sort(inst, 10), LimitExceeded);
}

TEST(Simulate, DonePolicyOnIndependentInstance) {
    const auto inst = uniform({{"0", "1"}, {"2", "3"}});
    SortPolicy done;
    done.nodes.push_back(SortNode{});
    const auto report = simulate(done, values({"1/2", "5/2"}), inst);
    EXPECT_TRUE(report.queried.empty());
    EXPECT_EQ(report.total_cost, 0);
    EXPECT_TRUE(report.feasible);
    EXPECT_EQ(report.answer, (std::vector<IntervalId>{1, 2}));
}

TEST(Simulate, WitnessTrace) {
    const auto inst = witness();
    const auto result = solve_sort(inst);
    // v3 in (105,198), v1 in (0,95): querying I3 alone leaves I1 and I2 overlapping.
    const auto report = simulate(result.policy, values({"50", "100.5", "150"}), inst);
    ASSERT_FALSE(report.queried.empty());
    EXPECT_EQ(report.queried.front(), 3);
    EXPECT_TRUE(report.feasible);
    EXPECT_EQ(report.total_cost, cost_of(inst, report.queried));
    EXPECT_EQ(report.answer, (std::vector<IntervalId>{1, 2, 3}));
    EXPECT_EQ(format_report(report).substr(0, 10), "queried: 3");
}

TEST(Simulate, RejectsBoundaryValues) {
    const auto inst = witness();
    const auto result = solve_sort(inst);
    EXPECT_THROW(simulate(result.policy, values({"50", "98", "150"}), inst), std::invalid_argument);
}

TEST(Simulate, RejectsMalformedPolicies) {
    const auto inst = witness();
    SortPolicy twice;
    SortNode q1;
    q1.kind = SortNode::Kind::Query;
    q1.interval = 1;
    for (RegionIndex x = 1; x <= 3; ++x) q1.branches.push_back({x, 0, true});
    twice.nodes.push_back(q1);
    EXPECT_THROW(simulate(twice, values({"50", "100.5", "150"}), inst), std::logic_error);
    SortPolicy missing;
    q1.branches.pop_back();
    for (auto& b : q1.branches) b.child = 1;
    missing.nodes = {q1, SortNode{}};
    EXPECT_THROW(simulate(missing, values({"99", "100.5", "150"}), inst), std::logic_error);
}

TEST(Simulate, PermutationSwitchesToCascadeOnHit) {
    const auto inst = uniform({{"0", "100"}, {"5", "305"}, {"6", "220"}});
    const auto policy = MinPolicy::permutation({2, 3, 1});
    auto report = simulate(policy, values({"50", "30", "150"}), inst);
    EXPECT_EQ(report.queried, (std::vector<IntervalId>{2, 1, 3}));
    EXPECT_EQ(report.answer, (std::vector<IntervalId>{2}));
    report = simulate(policy, values({"3", "30", "150"}), inst);
    EXPECT_EQ(report.queried, (std::vector<IntervalId>{2, 1}));
    EXPECT_EQ(report.answer, (std::vector<IntervalId>{1}));
    // No hits: R is queried and I1 never is.
    report = simulate(policy, values({"3", "130", "150"}), inst);
    EXPECT_EQ(report.queried, (std::vector<IntervalId>{2, 3}));
    EXPECT_TRUE(report.feasible);
}

TEST(Simulate, TraceStepsFollowBranches) {
    const auto inst = uniform({{"0", "100"}, {"5", "305"}, {"6", "220"}});
    const auto policy = parse_min_policy("Trace[all(2); hit(2)?{cascade}:{all(3); ifneeded(1)}]");
    EXPECT_EQ(simulate(policy, values({"50", "30", "150"}), inst).queried, (std::vector<IntervalId>{2, 1, 3}));
    EXPECT_EQ(simulate(policy, values({"50", "130", "150"}), inst).queried, (std::vector<IntervalId>{2, 3}));
    EXPECT_EQ(simulate(policy, values({"50", "130", "90"}), inst).queried, (std::vector<IntervalId>{2, 3, 1}));
}

TEST(ExpectedCost, SortPolicyMatchesSolver) {
    const auto result = solve_sort(witness());
    EXPECT_EQ(expected_cost_exact(result.policy, witness()), Rational(4183, 2000));
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto inst = gen_proper_chain(2 + static_cast<int>(seed % 4), seed);
        const auto r = solve_sort(inst);
        EXPECT_EQ(expected_cost_exact(r.policy, inst), r.expected_cost) << "seed " << seed;
    }
}

TEST(ExpectedCost, QueryAllCostsTotal) {
    const auto inst = gen_proper_chain(4, 1);
    EXPECT_EQ(expected_cost_exact(SortPolicy::query_all(inst), inst), inst.total_cost());
}

TEST(ExpectedCost, MinPermutationReferenceValue) {
    const auto inst = uniform({{"0", "100"}, {"5", "305"}, {"6", "220"}});
    const auto cost = expected_cost_exact(MinPolicy::permutation({2, 3, 1}), inst);
    EXPECT_NEAR(to_double(cost), 2.594689, 1e-6);
    EXPECT_EQ(to_decimal(cost, 6), "2.594689");
}

TEST(ExpectedCost, SingleInterval) {
    const auto inst = uniform({{"0", "1"}});
    EXPECT_EQ(expected_cost_exact(solve_sort(inst).policy, inst), 0);
    EXPECT_EQ(expected_cost_exact(MinPolicy::permutation({1}), inst), 0);
}

TEST(ExpectedCost, SortTracesAreMinimalCertificates) {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = gen_proper_chain(5, seed);
        const auto policy = solve_sort(inst).policy;
        for (int s = 0; s < 10; ++s) {
            const auto r = gen_realization(inst, rng);
            const auto report = simulate(policy, r, inst);
            ASSERT_TRUE(report.feasible);
            ASSERT_TRUE(feasible_sort(report.queried, r, inst));
            if (report.queried.empty()) continue;
            auto shorter = report.queried;
            shorter.pop_back();
            EXPECT_FALSE(feasible_sort(shorter, r, inst)) << "seed " << seed;
        }
    }
}

TEST(Oracle, SymmetricPairTies) {
    const auto inst = uniform({{"0", "2"}, {"1", "3"}});
    // Either first query resolves the pair with probability 1/2.
    EXPECT_EQ(oracle_sort(inst), Rational(3, 2));
    EXPECT_EQ(conditioned_cost(inst, 1), conditioned_cost(inst, 2));
    EXPECT_EQ(solve_sort(inst).expected_cost, Rational(3, 2));
}

TEST(Oracle, WitnessValue) { EXPECT_EQ(oracle_sort(witness()), Rational(4183, 2000)); }

TEST(Oracle, MatchesSolverOnRandomProperInstances) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto inst = gen_proper_chain(2 + static_cast<int>(seed % 4), 1000 + seed);
        EXPECT_EQ(oracle_sort(inst), solve_sort(inst).expected_cost) << "seed " << seed;
    }
}

TEST(Oracle, SizeLimit) {
    EXPECT_THROW(oracle_sort(gen_proper_chain(7, 1)), LimitExceeded);
    EXPECT_THROW(oracle_min(gen_clique(6, 1), OracleMode::General), LimitExceeded);
}

TEST(Oracle, AtomsAgreeWithNormalizedSolver) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = gen_proper_chain(3 + static_cast<int>(seed % 2), 500 + seed, {3, 1, 3});
        auto raw = RawInstance::from(inst);
        for (auto& d : raw.dists) d.reset();
        std::mt19937_64 rng(seed);
        // Point masses on endpoints of other intervals that fall inside an interval.
        for (const auto& iv : inst.intervals()) {
            for (const auto& other : inst.intervals()) {
                for (const auto& x : {other.lo, other.hi}) {
                    if (iv.lo < x && x < iv.hi && rng() % 3 == 0 && raw.continuous_mass(iv.id - 1) > Rational(1, 3)) {
                        raw.atoms.push_back({iv.id, x, Rational(1, 4)});
                    }
                }
            }
        }
        EXPECT_EQ(oracle_sort(raw), solve_sort(normalize_endpoint_mass(raw)).expected_cost) << "seed " << seed;
    }
}

TEST(OracleMin, PermutationModeReferenceInstances) {
    auto r = oracle_min(uniform({{"0", "100"}, {"5", "305"}, {"6", "220"}}), OracleMode::Permutation);
    EXPECT_EQ(r.ordering, (std::vector<IntervalId>{2, 3, 1}));
    EXPECT_EQ(to_decimal(r.cost, 6), "2.594689");
    r = oracle_min(uniform({{"0", "100"}, {"5", "405"}, {"6", "220"}}), OracleMode::Permutation);
    EXPECT_EQ(r.ordering, (std::vector<IntervalId>{3, 2, 1}));
    EXPECT_EQ(to_decimal(r.cost, 6), "2.550467");
}

TEST(OracleMin, GeneralEqualsPermutationOnSmallCorpus) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = gen_clique(2 + static_cast<int>(seed % 3), seed);
        EXPECT_EQ(oracle_min(inst, OracleMode::General).cost, oracle_min(inst, OracleMode::Permutation).cost)
            << "seed " << seed;
    }
}

TEST(MonteCarlo, QueryAllHasZeroSpread) {
    const auto inst = gen_proper_chain(4, 2);
    const auto mc = monte_carlo(SortPolicy::query_all(inst), inst, 200, 0);
    EXPECT_EQ(mc.mean, inst.total_cost());
    EXPECT_EQ(mc.std_error, 0.0);
    EXPECT_EQ(mc.min, mc.max);
}

TEST(MonteCarlo, WitnessWithinThreeStandardErrors) {
    const auto inst = witness();
    const auto policy = solve_sort(inst).policy;
    const auto mc = monte_carlo(policy, inst, 20000, 7);
    EXPECT_LE(std::abs(to_double(mc.mean) - 2.0915), 3 * mc.std_error);
    EXPECT_GT(mc.std_error, 0.0);
}

TEST(MonteCarlo, Deterministic) {
    const auto inst = witness();
    const auto policy = solve_sort(inst).policy;
    const auto a = monte_carlo(policy, inst, 500, 42);
    const auto b = monte_carlo(policy, inst, 500, 42);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NE(monte_carlo(policy, inst, 500, 43).mean, a.mean);
    EXPECT_THROW(monte_carlo(policy, inst, 0, 1), std::invalid_argument);
}

TEST(MonteCarlo, NeverPicksZeroMassPieces) {
    const auto inst = qmin::testing::lower_bound();
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const auto r = mc_sample(inst, 9, s);
        EXPECT_FALSE(r.value(1) > 1 && r.value(1) < 2);
        EXPECT_FALSE(r.value(2) > 2 && r.value(2) < 3);
    }
}

TEST(MonteCarlo, MinPolicyCalibration) {
    const auto inst = uniform({{"0", "100"}, {"5", "305"}, {"6", "220"}});
    const auto policy = MinPolicy::permutation({2, 3, 1});
    const auto mc = monte_carlo(policy, inst, 20000, 3);
    EXPECT_LE(std::abs(to_double(mc.mean - expected_cost_exact(policy, inst))), 3 * mc.std_error);
}

TEST(SubsetOracle, SortingAndMinimum) {
    const auto inst = witness();
    const auto [set, cost] = cheapest_feasible_subset(inst, values({"50", "100.5", "150"}), true);
    // 100.5 still overlaps I3, so two queries are needed; {1,3} comes first.
    EXPECT_EQ(set, (std::vector<IntervalId>{1, 3}));
    EXPECT_EQ(cost, 2);
    const auto [mset, mcost] = cheapest_feasible_subset(inst, values({"50", "100.5", "150"}), false);
    EXPECT_EQ(mset, (std::vector<IntervalId>{1}));
    EXPECT_EQ(mcost, 1);
}

TEST(SubsetOracle, ForcedQueriesAreInEveryOptimalSet) {
    const auto inst = witness();
    EXPECT_EQ(forced_sort_queries(inst, values({"50", "100.5", "150"})), (std::vector<IntervalId>{3}));
    EXPECT_EQ(forced_sort_queries(inst, values({"50", "96", "150"})), (std::vector<IntervalId>{1}));
    EXPECT_TRUE(forced_sort_queries(uniform({{"0", "2"}, {"1", "3"}}), values({"1/2", "5/2"})).empty());
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Instance g = generate(GenKind::Random, 5, seed);
        const Realization r = gen_realization(g, rng);
        const auto forced = forced_sort_queries(g, r);
        const auto [set, cost] = cheapest_feasible_subset(g, r, true);
        EXPECT_TRUE(std::includes(set.begin(), set.end(), forced.begin(), forced.end())) << seed;
        EXPECT_GE(cost, cost_of(g, forced));
    }
}
