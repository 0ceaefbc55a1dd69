// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "qmin/cascade.hpp"
#include "qmin/events.hpp"
#include "qmin/feasibility.hpp"
#include "qmin/generate.hpp"
#include "qmin/io.hpp"
#include "qmin/min_solver.hpp"
#include "qmin/oracle.hpp"
#include "qmin/simulate.hpp"
#include "qmin/sort_solver.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

using namespace qmin;

namespace {

const std::filesystem::path kData = QMIN_DATA_DIR;

Instance load(const char* name) { return to_instance(read_instance_file(kData / name)); }

Rational q(const char* text) { return parse_rational(text); }

std::string show(const Rational& v) { return to_string(v) + " (" + to_decimal(v, 6, true) + ")"; }

std::string show(const std::vector<IntervalId>& ids) {
    std::string s = "(";
    for (IntervalId i : ids) s += (s.size() > 1 ? "," : "") + std::to_string(i);
    return s + ")";
}

bool close(const Rational& v, double expected, double tol) { return std::abs(to_double(v) - expected) <= tol; }

/// Accumulates the verdict and the evidence of one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            failures_.push_back(what);
        }
    }
    void note(const std::string& text) { notes_.push_back(text); }
    bool pass() const { return pass_; }
    std::string detail() const {
        std::string s;
        for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + std::string("MISMATCH ") + f;
        for (const auto& n : notes_) s += (s.empty() ? "" : "; ") + n;
        return s;
    }

private:
    bool pass_ = true;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

int failures = 0;

void criterion(const std::string& label, const std::string& title, double budget_seconds,
               const std::function<void(Check&)>& body) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > budget_seconds) {
        std::ostringstream msg;
        msg << "took " << std::fixed << std::setprecision(2) << elapsed << " s > " << budget_seconds << " s";
        check.expect(false, msg.str());
    }
    if (!check.pass()) ++failures;
    std::cout << (check.pass() ? "PASS" : "FAIL") << " [" << label << "] " << title << " (" << std::fixed
              << std::setprecision(2) << elapsed << " s)";
    const auto detail = check.detail();
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << std::endl;
}

std::vector<IntervalId> iota_ids(int n) {
    std::vector<IntervalId> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return v;
}

/// Largest number of intervals sharing a point.
int clique_number(const Instance& inst) {
    int best = 0;
    for (const auto& a : inst.intervals()) {
        int count = 0;
        for (const auto& b : inst.intervals()) {
            // Just right of a.lo: inside b iff b.lo <= a.lo < b.hi.
            if (b.lo <= a.lo && a.lo < b.hi) ++count;
        }
        best = std::max(best, count);
    }
    return best;
}

void witness() {
    criterion("1", "witness: conditioned costs 843/400, 277/125, 2091/1000; optimum 2091/1000, first query I3", 1.0,
              [](Check& c) {
                  const Instance inst = load("witness.inst");
                  const Rational expected[] = {q("843/400"), q("277/125"), q("2091/1000")};
                  for (IntervalId i = 1; i <= 3; ++i) {
                      const Rational got = conditioned_cost(inst, i);
                      c.expect(got == expected[i - 1], "conditioned(I" + std::to_string(i) + ") = " + show(got) +
                                                           ", expected " + show(expected[i - 1]));
                  }
                  const SortResult r = solve_sort(inst);
                  c.expect(r.expected_cost == q("2091/1000"),
                           "solve_sort = " + show(r.expected_cost) + ", expected " + show(q("2091/1000")));
                  const IntervalId first = r.tables.best_first(1, r.tables.regions());
                  c.expect(first == 3, "first query I" + std::to_string(first));
                  c.note("first query I" + std::to_string(first));
              });
}

void five_path() {
    criterion("2", "5-path: conditioned(I2) <= 29/9 and conditioned(I3) >= 11/3", 1.0, [](Check& c) {
        const Instance inst = load("five_path.inst");
        const Rational c2 = conditioned_cost(inst, 2);
        const Rational c3 = conditioned_cost(inst, 3);
        c.expect(c2 <= q("29/9"), "conditioned(I2) = " + show(c2));
        c.expect(c3 >= q("11/3"), "conditioned(I3) = " + show(c3));
        c.note("conditioned(I2) = " + show(c2) + ", conditioned(I3) = " + show(c3));
    });
}

void first_query() {
    criterion("3", "(0,100),(6,105),(95,198): first query I2; restricted to {I1,I2}: I1", 1.0, [](Check& c) {
        const Instance inst = load("first_query.inst");
        const auto full = solve_sort(inst);
        const auto pair = solve_sort(inst.restricted_to({1, 2}));
        const IntervalId f = full.tables.best_first(1, full.tables.regions());
        const IntervalId p = pair.tables.best_first(1, pair.tables.regions());
        c.expect(f == 2, "full instance first query I" + std::to_string(f));
        c.expect(p == 1, "restricted first query I" + std::to_string(p));
        c.note("full " + show(full.expected_cost) + ", restricted " + show(pair.expected_cost));
    });
}

void oracle_equivalence() {
    criterion("4", "oracle equivalence: 200 random proper connected instances, n <= 5", 120.0, [](Check& c) {
        int checked = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const int n = 1 + static_cast<int>(seed % 5);
            const Instance inst = gen_proper_chain(n, 1000 + seed);
            if (!validate_sorting_instance(inst).empty()) {
                c.expect(false, "generator produced an invalid instance, seed " + std::to_string(seed));
                continue;
            }
            const Rational dp = solve_sort(inst).expected_cost;
            const Rational brute = oracle_sort(inst);
            c.expect(dp == brute, "seed " + std::to_string(seed) + ": dp " + show(dp) + " vs oracle " + show(brute));
            ++checked;
        }
        c.note(std::to_string(checked) + " instances equal");
    });
}

void min_permutations() {
    criterion("5", "minimum: best (2,3,1) at 2.594689; with I2 = (5,405) best (3,2,1) at 2.550467", 1.0,
              [](Check& c) {
                  const auto a = best_permutation_exact(MinInstance(load("min_a.inst")), PermutationSearch::I1Last);
                  const auto b = best_permutation_exact(MinInstance(load("min_b.inst")), PermutationSearch::I1Last);
                  c.expect(a.ordering == std::vector<IntervalId>{2, 3, 1}, "ordering " + show(a.ordering));
                  c.expect(close(a.cost, 2.594689, 1e-6), "cost " + show(a.cost));
                  c.expect(b.ordering == std::vector<IntervalId>{3, 2, 1}, "ordering " + show(b.ordering));
                  c.expect(close(b.cost, 2.550467, 1e-6), "cost " + show(b.cost));
                  c.note(show(a.ordering) + " " + show(a.cost) + ", " + show(b.ordering) + " " + show(b.cost));
              });
}

void min_table() {
    criterion("6", "minimum cost table: six orderings ending in I1 within 1e-5, argmin (4,3,2,1)", 1.0, [](Check& c) {
        const MinInstance mi(load("min_table.inst"));
        const std::pair<std::vector<IntervalId>, double> rows[] = {
            {{4, 2, 3, 1}, 3.48611}, {{2, 4, 3, 1}, 3.48715}, {{2, 3, 4, 1}, 3.48889},
            {{4, 3, 2, 1}, 3.48593}, {{3, 4, 2, 1}, 3.48770}, {{3, 2, 4, 1}, 3.48859}};
        for (const auto& [order, expected] : rows) {
            const Rational got = cost_permutation(mi, order);
            c.expect(close(got, expected, 1e-5), show(order) + " = " + show(got));
        }
        const auto best = best_permutation_exact(mi, PermutationSearch::I1Last);
        c.expect(best.ordering == std::vector<IntervalId>{4, 3, 2, 1}, "argmin " + show(best.ordering));
        c.note("argmin " + show(best.ordering) + " " + show(best.cost));
    });
}

void lower_bound() {
    criterion("7", "lower-bound instance, eps = 1/10: I1First, A1 = 1169/10, AR = 125, ratio 7/5", 1.0,
              [](Check& c) {
                  const MinInstance mi(load("lower_bound.inst"));
                  const auto r = approx_det15(mi);
                  c.expect(r.policy == MinPolicy::i1_first(), "policy " + r.policy.describe());
                  c.expect(r.a1 == q("1169/10"), "A1 = " + show(r.a1));
                  c.expect(r.a_r == 125, "AR = " + show(r.a_r));
                  const Rational ratio = expected_ratio(r.policy, mi);
                  c.expect(ratio == q("7/5"), "ratio = " + show(ratio));
                  c.note("ratio " + show(ratio));
              });
}

void guarantees() {
    criterion("8", "guarantees on 200 random minimum instances, n <= 6: det15 <= 1.5 opt, alg1 ratio <= 1.4507", 180.0,
              [](Check& c) {
                  Rational worst_det = 0, worst_alg1 = 0;
                  for (std::uint64_t seed = 0; seed < 200; ++seed) {
                      const int n = 2 + static_cast<int>(seed % 5);
                      const MinInstance mi(gen_clique(n, 5000 + seed));
                      const Instance& inst = mi.instance();
                      const auto det = approx_det15(mi);
                      const Rational det_cost = expected_cost_exact(det.policy, inst);
                      // Best permutation over every ordering; the offline optimum bounds it from below.
                      const Rational opt = best_permutation_exact(mi, PermutationSearch::All).cost;
                      const Rational offline = EventSpace::for_min(inst).expectation(
                          [&](const RegionEvent& e) { return verify_min(mi, e.representative).cost; });
                      c.expect(det_cost <= Rational(3, 2) * opt,
                               "seed " + std::to_string(seed) + ": det15 " + show(det_cost) + " vs opt " + show(opt));
                      c.expect(det_cost <= Rational(3, 2) * offline,
                               "seed " + std::to_string(seed) + ": det15 " + show(det_cost) + " vs offline " +
                                   show(offline));
                      worst_det = std::max(worst_det, Rational(det_cost / offline));
                      const Rational ratio = expected_ratio(approx_alg1(mi).policy, mi);
                      c.expect(ratio <= q("14507/10000"),
                               "seed " + std::to_string(seed) + ": alg1 ratio " + show(ratio));
                      worst_alg1 = std::max(worst_alg1, ratio);
                  }
                  c.note("max det15 / E[offline opt] = " + to_decimal(worst_det, 6) +
                         ", max alg1 ratio = " + to_decimal(worst_alg1, 6));
              });
}

void i1_earlier() {
    criterion("9", "moving I1 one step earlier (I1 not last) never increases the permutation cost, n <= 5", 60.0,
              [](Check& c) {
                  std::uint64_t pairs = 0;
                  for (std::uint64_t seed = 0; seed < 100; ++seed) {
                      const int n = 2 + static_cast<int>(seed % 4);
                      const MinInstance mi(gen_clique(n, 7000 + seed));
                      auto order = iota_ids(n);
                      do {
                          const auto p = static_cast<std::size_t>(std::find(order.begin(), order.end(), 1) -
                                                                  order.begin());
                          if (p == 0 || p + 1 == order.size()) continue;
                          auto earlier = order;
                          std::swap(earlier[p - 1], earlier[p]);
                          const Rational before = cost_permutation(mi, order);
                          const Rational after = cost_permutation(mi, earlier);
                          c.expect(after <= before, "seed " + std::to_string(seed) + " " + show(order) + " " +
                                                        show(before) + " -> " + show(after));
                          ++pairs;
                      } while (std::next_permutation(order.begin(), order.end()));
                  }
                  c.note(std::to_string(pairs) + " swaps checked");
              });
}

void verification() {
    criterion("10", "verify_min equals 2^n subset enumeration on 100 random pairs, n <= 8", 60.0, [](Check& c) {
        std::mt19937_64 rng(11);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const int n = 1 + static_cast<int>(seed % 8);
            const MinInstance mi(gen_clique(n, 9000 + seed));
            const Realization r = gen_realization(mi.instance(), rng);
            const auto v = verify_min(mi, r);
            const auto [set, cost] = cheapest_feasible_subset(mi.instance(), r, false);
            c.expect(v.cost == cost,
                     "seed " + std::to_string(seed) + ": verify " + show(v.cost) + " vs enumeration " + show(cost));
            c.expect(feasible_min(v.query_set, r, mi.instance()),
                     "seed " + std::to_string(seed) + ": verify set " + show(v.query_set) + " not feasible");
        }
    });
}

void sigma_invariants() {
    criterion("11", "cascade probabilities and region-event probabilities sum to 1", 120.0, [](Check& c) {
        std::vector<Instance> corpus;
        for (const char* name : {"witness.inst", "five_path.inst", "first_query.inst"}) corpus.push_back(load(name));
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            corpus.push_back(gen_proper_chain(2 + static_cast<int>(seed % 5), 3000 + seed));
        }
        std::uint64_t cells = 0;
        for (std::size_t k = 0; k < corpus.size(); ++k) {
            const Instance& inst = corpus[k];
            SortSolver s(inst);
            const int t = s.partition().count();
            for (RegionIndex y = 1; y <= t; ++y) {
                for (RegionIndex z = y; z <= t; ++z) {
                    const auto [lo, hi] = s.inside(y, z);
                    for (IntervalId i = lo; i <= hi; ++i) {
                        for (RegionIndex x = s.partition().first_of(i); x <= s.partition().last_of(i); ++x) {
                            Rational left = 0, right = 0;
                            for (RegionIndex zp = 1; zp <= x; ++zp) left += cascade_prob_left(y, z, i, x, zp, s.cascade());
                            for (RegionIndex yp = x; yp <= t; ++yp) right += cascade_prob_right(y, z, i, x, yp, s.cascade());
                            c.expect(left == 1 && right == 1, "instance " + std::to_string(k) + " (y,z,i,x) = (" +
                                                                  std::to_string(y) + "," + std::to_string(z) + "," +
                                                                  std::to_string(i) + "," + std::to_string(x) + ")");
                            ++cells;
                        }
                    }
                }
            }
            for (const auto& space : {EventSpace::for_sort(inst), EventSpace::for_min(inst)}) {
                Rational total = 0;
                space.for_each([&](const RegionEvent& e) { total += e.probability; });
                c.expect(total == 1, "instance " + std::to_string(k) + " events sum to " + show(total));
            }
        }
        c.note(std::to_string(cells) + " cascade cells over " + std::to_string(corpus.size()) + " instances");
    });
}

/// Work bound for the sorting DP.
///  - Every (y, z, i, x) term walks at most D cells of L and D of R, where D
///    is the largest number of regions one interval spans.
///  - Every L or R entry sums at most D terms.
/// That gives t(t+3)·n·D² in total. With t <= 2n - 1 and D <= 2d - 1 this
/// is at most 16(1 + 1/(2n))·n³d² <= 17·n³d² for n >= 8.
void op_count_ladder() {
    constexpr double kC = 17.0;
    for (int n : {8, 16, 32}) {
        criterion("ops n=" + std::to_string(n), "DP cell updates <= 17 n^3 d^2 on generated proper chains", 60.0,
                  [n, kC](Check& c) {
                      double worst = 0;
                      for (std::uint64_t seed = 0; seed < 3; ++seed) {
                          const Instance inst = gen_proper_chain(n, 11000 + seed);
                          SortSolver s(inst);
                          const int d = clique_number(inst);
                          const double updates = static_cast<double>(s.tables().cell_updates);
                          const double ratio = updates / (static_cast<double>(n) * n * n * d * d);
                          c.expect(ratio <= kC, "seed " + std::to_string(seed) + " ratio " + std::to_string(ratio));
                          worst = std::max(worst, ratio);
                      }
                      std::ostringstream msg;
                      msg << "max updates / (n^3 d^2) = " << std::fixed << std::setprecision(3) << worst;
                      c.note(msg.str());
                  });
    }
}

}  // namespace

int main() {
    witness();
    five_path();
    first_query();
    oracle_equivalence();
    min_permutations();
    min_table();
    lower_bound();
    guarantees();
    i1_earlier();
    verification();
    sigma_invariants();
    op_count_ladder();
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
