#pragma once

#include "qmin/cascade.hpp"
#include "qmin/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qmin {

/// Solved tables of the sorting DP. M and bestFirst are dense over (y, z);
/// L and R are sparse, keyed by (y, z', j) and (y', z, j) with S_{z'}, S_{y'} inside I_j.
class DPTables {
public:
    DPTables() = default;
    DPTables(int regions, int intervals);

    int regions() const { return t_; }
    /// M[y, z]; 0 for empty ranges (y > z).
    const Rational& m(RegionIndex y, RegionIndex z) const;
    /// Argmin of M[y, z]; 0 when fewer than two intervals lie in (a_y, b_z).
    IntervalId best_first(RegionIndex y, RegionIndex z) const;
    /// Computed L / R entries (nullopt if the DP never needed the cell).
    std::optional<Rational> l(RegionIndex y, RegionIndex zp, IntervalId j) const;
    std::optional<Rational> r(RegionIndex yp, RegionIndex z, IntervalId j) const;
    std::size_t l_size() const;
    std::size_t r_size() const;

    /// Inner-loop steps of the DP (terms summed while filling M, L and R).
    std::uint64_t cell_updates = 0;
    /// Region-interval touches spent on cascade probability tables.
    std::uint64_t table_touches = 0;

private:
    friend class SortSolver;
    std::size_t at(RegionIndex y, RegionIndex z) const;
    std::size_t key(RegionIndex outer, IntervalId j) const;

    int t_ = 0;
    int n_ = 0;
    Rational zero_ = 0;
    std::vector<Rational> m_;
    std::vector<IntervalId> best_;
    std::vector<RegionIndex> span_lo_;  // first region of each I_j
    // [outer][j] -> offsets within I_j's region span
    std::vector<std::vector<std::optional<Rational>>> l_;
    std::vector<std::vector<std::optional<Rational>>> r_;
};

/// One branch of a policy node: outcome region -> child node id.
struct SortBranch {
    RegionIndex region = 0;
    int child = 0;
    /// False when the outcome has probability zero.
    bool reachable = true;

    bool operator==(const SortBranch& other) const = default;
};

/// Decision DAG for the sorting problem.
struct SortNode {
    enum class Kind { Done, Query, Split, CascadeLeft, CascadeRight };
    Kind kind = Kind::Done;
    /// Query: the queried interval. CascadeLeft/Right: j (the node queries j - 1 / j + 1).
    IntervalId interval = 0;
    /// Split: x. CascadeLeft: z'. CascadeRight: y'.
    RegionIndex anchor = 0;
    /// Split: every interval of I_x(y, z); unqueried ones are queried on entry.
    std::vector<IntervalId> members;
    /// Query / cascade branches; Split uses left (keyed by z') then right (keyed by y').
    std::vector<SortBranch> branches;
    std::vector<SortBranch> left;
    std::vector<SortBranch> right;

    bool operator==(const SortNode& other) const = default;
};

struct SortPolicy {
    std::vector<SortNode> nodes;
    int root = 0;

    /// Policy that queries every interval in id order.
    static SortPolicy query_all(const Instance& instance);

    bool operator==(const SortPolicy& other) const = default;
};

/// Line format: "node <id> done", "node <id> query <i> branches x:c ...",
/// "node <id> split <x> members <ids> left z':c ... right y':c ...",
/// "node <id> cascadeL <j> <z'> branches k:c ...", "node <id> cascadeR <j> <y'> branches k:c ...",
/// "root <id>". A trailing '!' marks an unreachable branch.
std::string dump_policy(const SortPolicy& policy);
/// Throws std::runtime_error on malformed input.
SortPolicy parse_policy(std::istream& in);

struct SortResult {
    Rational expected_cost;
    SortPolicy policy;
    DPTables tables;
};

/// Exact DP over a proper, connected, atom-free instance.
class SortSolver {
public:
    /// Throws InvalidInstance with the validation diagnostics.
    explicit SortSolver(const Instance& instance);

    const Instance& instance() const { return instance_; }
    const RegionPartition& partition() const { return partition_; }
    const CascadeProbTables& cascade() const { return cascade_; }
    const DPTables& tables() const { return tables_; }

    /// Expected cost of (a_y, b_z) when `first` is queried first, then optimally.
    Rational conditioned(RegionIndex y, RegionIndex z, IntervalId first);
    /// Whole instance.
    Rational conditioned(IntervalId first) { return conditioned(1, partition_.count(), first); }

    SortPolicy build_policy() const;

    /// Ids of intervals inside (a_y, b_z) that contain S_x, ascending.
    std::vector<IntervalId> members(RegionIndex y, RegionIndex z, RegionIndex x) const;
    /// Contiguous id range [lo, hi] of intervals inside (a_y, b_z); lo > hi when empty.
    std::pair<IntervalId, IntervalId> inside(RegionIndex y, RegionIndex z) const;

private:
    void fill();
    const Rational& l_value(RegionIndex y, RegionIndex zp, IntervalId j);
    const Rational& r_value(RegionIndex yp, RegionIndex z, IntervalId j);
    bool l_is_base(RegionIndex y, RegionIndex zp, IntervalId j) const;
    bool r_is_base(RegionIndex yp, RegionIndex z, IntervalId j) const;

    Instance instance_;
    RegionPartition partition_;
    CascadeProbTables cascade_;
    DPTables tables_;
    std::vector<IntervalId> first_inside_;  // by y: smallest id with first region >= y
    std::vector<IntervalId> last_inside_;   // by z: largest id with last region <= z
};

SortResult solve_sort(const Instance& instance);

/// Best expected cost when `first` must be queried before anything else.
Rational conditioned_cost(const Instance& instance, IntervalId first);

}  // namespace qmin
