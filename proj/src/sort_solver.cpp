#include "qmin/sort_solver.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace qmin {

namespace {

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

const Instance& validated(const Instance& instance) {
    auto problems = validate_sorting_instance(instance);
    if (!problems.empty()) throw InvalidInstance(std::move(problems));
    return instance;
}

}  // namespace

// ---------------------------------------------------------------------------
// DPTables
// ---------------------------------------------------------------------------

DPTables::DPTables(int regions, int intervals)
    : t_(regions), n_(intervals),
      m_(idx(regions + 2) * idx(regions + 2), Rational(0)),
      best_(idx(regions + 2) * idx(regions + 2), 0),
      l_(idx(regions + 2) * idx(intervals + 2)),
      r_(idx(regions + 2) * idx(intervals + 2)) {}

std::size_t DPTables::at(RegionIndex y, RegionIndex z) const { return idx(y) * idx(t_ + 2) + idx(z); }

std::size_t DPTables::key(RegionIndex outer, IntervalId j) const { return idx(outer) * idx(n_ + 2) + idx(j); }

const Rational& DPTables::m(RegionIndex y, RegionIndex z) const {
    if (y > z || y < 1 || z > t_) return zero_;
    return m_[at(y, z)];
}

IntervalId DPTables::best_first(RegionIndex y, RegionIndex z) const {
    if (y > z || y < 1 || z > t_) return 0;
    return best_[at(y, z)];
}

std::optional<Rational> DPTables::l(RegionIndex y, RegionIndex zp, IntervalId j) const {
    if (y < 1 || y > t_ || j < 1 || j > n_) return std::nullopt;
    const auto& cells = l_[key(y, j)];
    if (cells.empty()) return std::nullopt;
    const int offset = zp - span_lo_[idx(j)];
    if (offset < 0 || idx(offset) >= cells.size()) return std::nullopt;
    return cells[idx(offset)];
}

std::optional<Rational> DPTables::r(RegionIndex yp, RegionIndex z, IntervalId j) const {
    if (z < 1 || z > t_ || j < 1 || j > n_) return std::nullopt;
    const auto& cells = r_[key(z, j)];
    if (cells.empty()) return std::nullopt;
    const int offset = yp - span_lo_[idx(j)];
    if (offset < 0 || idx(offset) >= cells.size()) return std::nullopt;
    return cells[idx(offset)];
}

std::size_t DPTables::l_size() const {
    std::size_t count = 0;
    for (const auto& cells : l_) {
        for (const auto& c : cells) count += c.has_value() ? 1 : 0;
    }
    return count;
}

std::size_t DPTables::r_size() const {
    std::size_t count = 0;
    for (const auto& cells : r_) {
        for (const auto& c : cells) count += c.has_value() ? 1 : 0;
    }
    return count;
}

// ---------------------------------------------------------------------------
// SortSolver
// ---------------------------------------------------------------------------

SortSolver::SortSolver(const Instance& instance)
    : instance_(validated(instance)),
      partition_(compute_regions(instance_)),
      cascade_(instance_, partition_),
      tables_(partition_.count(), instance_.size()) {
    const int n = instance_.size();
    const int t = partition_.count();
    tables_.table_touches = cascade_.touches();
    tables_.span_lo_.assign(idx(n + 2), 0);
    for (IntervalId j = 1; j <= n; ++j) {
        tables_.span_lo_[idx(j)] = partition_.first_of(j);
        const auto width = idx(partition_.last_of(j) - partition_.first_of(j) + 1);
        for (RegionIndex outer = 1; outer <= t; ++outer) {
            tables_.l_[tables_.key(outer, j)].resize(width);
            tables_.r_[tables_.key(outer, j)].resize(width);
        }
    }
    first_inside_.assign(idx(t + 2), n + 1);
    last_inside_.assign(idx(t + 2), 0);
    for (RegionIndex y = 1; y <= t + 1; ++y) {
        for (IntervalId j = 1; j <= n; ++j) {
            if (partition_.first_of(j) >= y) {
                first_inside_[idx(y)] = j;
                break;
            }
        }
    }
    for (RegionIndex z = 0; z <= t; ++z) {
        for (IntervalId j = n; j >= 1; --j) {
            if (partition_.last_of(j) <= z) {
                last_inside_[idx(z)] = j;
                break;
            }
        }
    }
    fill();
}

std::pair<IntervalId, IntervalId> SortSolver::inside(RegionIndex y, RegionIndex z) const {
    if (y > z) return {1, 0};
    return {first_inside_[idx(y)], last_inside_[idx(z)]};
}

std::vector<IntervalId> SortSolver::members(RegionIndex y, RegionIndex z, RegionIndex x) const {
    std::vector<IntervalId> out;
    const auto [lo, hi] = inside(y, z);
    for (IntervalId j = lo; j <= hi; ++j) {
        if (partition_.contains(j, x)) out.push_back(j);
    }
    return out;
}

bool SortSolver::l_is_base(RegionIndex y, RegionIndex zp, IntervalId j) const {
    return j <= 1 || partition_.first_of(j - 1) < y || !partition_.contains(j - 1, zp);
}

bool SortSolver::r_is_base(RegionIndex yp, RegionIndex z, IntervalId j) const {
    return j >= instance_.size() || partition_.last_of(j + 1) > z || !partition_.contains(j + 1, yp);
}

const Rational& SortSolver::l_value(RegionIndex y, RegionIndex zp, IntervalId j) {
    auto& slot = tables_.l_[tables_.key(y, j)][idx(zp - partition_.first_of(j))];
    if (slot) return *slot;
    Rational value;
    if (l_is_base(y, zp, j)) {
        value = tables_.m(y, zp - 1);
        ++tables_.cell_updates;
    } else {
        // The interval left of the current cascade front must be queried.
        const IntervalId prev = j - 1;
        value = instance_.cost(prev);
        for (RegionIndex k = partition_.first_of(prev); k <= partition_.last_of(prev); ++k) {
            ++tables_.cell_updates;
            const Rational& p = cascade_.mass(prev, k);
            if (sgn(p) == 0) continue;
            value += p * l_value(y, std::min(k, zp), prev);
        }
    }
    slot = std::move(value);
    return *slot;
}

const Rational& SortSolver::r_value(RegionIndex yp, RegionIndex z, IntervalId j) {
    auto& slot = tables_.r_[tables_.key(z, j)][idx(yp - partition_.first_of(j))];
    if (slot) return *slot;
    Rational value;
    if (r_is_base(yp, z, j)) {
        value = tables_.m(yp + 1, z);
        ++tables_.cell_updates;
    } else {
        const IntervalId next = j + 1;
        value = instance_.cost(next);
        for (RegionIndex k = partition_.first_of(next); k <= partition_.last_of(next); ++k) {
            ++tables_.cell_updates;
            const Rational& p = cascade_.mass(next, k);
            if (sgn(p) == 0) continue;
            value += p * r_value(std::max(k, yp), z, next);
        }
    }
    slot = std::move(value);
    return *slot;
}

Rational SortSolver::conditioned(RegionIndex y, RegionIndex z, IntervalId first) {
    Rational total = 0;
    for (RegionIndex x = partition_.first_of(first); x <= partition_.last_of(first); ++x) {
        const Rational& px = cascade_.mass(first, x);
        if (sgn(px) == 0) continue;
        const auto mem = members(y, z, x);
        const IntervalId jmin = mem.front();
        const IntervalId jmax = mem.back();
        Rational inner = cost_of(instance_, mem);
        for (RegionIndex zp = partition_.first_of(jmin); zp <= x; ++zp) {
            ++tables_.cell_updates;
            Rational p = cascade_prob_left(y, z, first, x, zp, cascade_);
            if (sgn(p) == 0) continue;
            inner += p * l_value(y, zp, jmin);
        }
        for (RegionIndex yp = x; yp <= partition_.last_of(jmax); ++yp) {
            ++tables_.cell_updates;
            Rational p = cascade_prob_right(y, z, first, x, yp, cascade_);
            if (sgn(p) == 0) continue;
            inner += p * r_value(yp, z, jmax);
        }
        total += px * inner;
    }
    return total;
}

void SortSolver::fill() {
    const int t = partition_.count();
    for (int span = 0; span < t; ++span) {
        for (RegionIndex y = 1; y + span <= t; ++y) {
            const RegionIndex z = y + span;
            const auto [lo, hi] = inside(y, z);
            const std::size_t cell = tables_.at(y, z);
            if (hi - lo + 1 < 2) {
                tables_.m_[cell] = 0;
                tables_.best_[cell] = 0;
                continue;
            }
            std::optional<Rational> best;
            IntervalId arg = 0;
            for (IntervalId i = lo; i <= hi; ++i) {
                Rational c = conditioned(y, z, i);
                if (!best || c < *best) {  // ties keep the smallest id
                    best = std::move(c);
                    arg = i;
                }
            }
            tables_.m_[cell] = *best;
            tables_.best_[cell] = arg;
        }
    }
}

// ---------------------------------------------------------------------------
// Policy construction
// ---------------------------------------------------------------------------

namespace {

enum CellKind { kDone = 0, kM = 1, kSplit = 2, kL = 3, kR = 4 };
using CellKey = std::array<int, 4>;

}  // namespace

SortPolicy SortSolver::build_policy() const {
    const int t = partition_.count();

    auto resolve = [&](CellKey key) {
        while (true) {
            if (key[0] == kM) {
                const auto [lo, hi] = inside(key[1], key[2]);
                if (hi - lo + 1 < 2) return CellKey{kDone, 0, 0, 0};
                return key;
            }
            if (key[0] == kL && l_is_base(key[1], key[2], key[3])) {
                key = {kM, key[1], key[2] - 1, 0};
                continue;
            }
            if (key[0] == kR && r_is_base(key[1], key[2], key[3])) {
                key = {kM, key[1] + 1, key[2], 0};
                continue;
            }
            return key;
        }
    };

    // Children with reachability flags; the layout mirrors SortNode.
    struct Expanded {
        SortNode node;
        std::vector<CellKey> branch_keys, left_keys, right_keys;
    };
    auto expand = [&](const CellKey& key) {
        Expanded e;
        switch (key[0]) {
            case kDone:
                e.node.kind = SortNode::Kind::Done;
                break;
            case kM: {
                const IntervalId i = tables_.best_first(key[1], key[2]);
                e.node.kind = SortNode::Kind::Query;
                e.node.interval = i;
                for (RegionIndex x = partition_.first_of(i); x <= partition_.last_of(i); ++x) {
                    e.node.branches.push_back({x, 0, sgn(cascade_.mass(i, x)) > 0});
                    e.branch_keys.push_back(resolve({kSplit, key[1], key[2], x}));
                }
                break;
            }
            case kSplit: {
                const RegionIndex y = key[1], z = key[2], x = key[3];
                const IntervalId i = tables_.best_first(y, z);
                const bool live = sgn(cascade_.mass(i, x)) > 0;
                e.node.kind = SortNode::Kind::Split;
                e.node.anchor = x;
                e.node.members = members(y, z, x);
                const IntervalId jmin = e.node.members.front();
                const IntervalId jmax = e.node.members.back();
                for (RegionIndex zp = partition_.first_of(jmin); zp <= x; ++zp) {
                    const bool reach = live && sgn(cascade_prob_left(y, z, i, x, zp, cascade_)) > 0;
                    e.node.left.push_back({zp, 0, reach});
                    e.left_keys.push_back(resolve({kL, y, zp, jmin}));
                }
                for (RegionIndex yp = x; yp <= partition_.last_of(jmax); ++yp) {
                    const bool reach = live && sgn(cascade_prob_right(y, z, i, x, yp, cascade_)) > 0;
                    e.node.right.push_back({yp, 0, reach});
                    e.right_keys.push_back(resolve({kR, yp, z, jmax}));
                }
                break;
            }
            case kL: {
                const RegionIndex y = key[1], zp = key[2];
                const IntervalId j = key[3];
                e.node.kind = SortNode::Kind::CascadeLeft;
                e.node.interval = j;
                e.node.anchor = zp;
                for (RegionIndex k = partition_.first_of(j - 1); k <= partition_.last_of(j - 1); ++k) {
                    e.node.branches.push_back({k, 0, sgn(cascade_.mass(j - 1, k)) > 0});
                    e.branch_keys.push_back(resolve({kL, y, std::min(k, zp), j - 1}));
                }
                break;
            }
            case kR: {
                const RegionIndex yp = key[1], z = key[2];
                const IntervalId j = key[3];
                e.node.kind = SortNode::Kind::CascadeRight;
                e.node.interval = j;
                e.node.anchor = yp;
                for (RegionIndex k = partition_.first_of(j + 1); k <= partition_.last_of(j + 1); ++k) {
                    e.node.branches.push_back({k, 0, sgn(cascade_.mass(j + 1, k)) > 0});
                    e.branch_keys.push_back(resolve({kR, std::max(k, yp), z, j + 1}));
                }
                break;
            }
        }
        return e;
    };

    const CellKey root = t == 0 ? CellKey{kDone, 0, 0, 0} : resolve({kM, 1, t, 0});
    std::map<CellKey, Expanded> cells;
    std::vector<CellKey> stack{root};
    while (!stack.empty()) {
        CellKey key = stack.back();
        stack.pop_back();
        if (cells.count(key)) continue;
        Expanded e = expand(key);
        for (const auto* keys : {&e.branch_keys, &e.left_keys, &e.right_keys}) {
            for (const auto& k : *keys) {
                if (!cells.count(k)) stack.push_back(k);
            }
        }
        cells.emplace(key, std::move(e));
    }

    std::map<CellKey, int> ids;
    for (const auto& [key, e] : cells) {
        const int next = static_cast<int>(ids.size());
        ids.emplace(key, next);
    }
    SortPolicy policy;
    for (auto& [key, e] : cells) {
        for (std::size_t k = 0; k < e.branch_keys.size(); ++k) e.node.branches[k].child = ids.at(e.branch_keys[k]);
        for (std::size_t k = 0; k < e.left_keys.size(); ++k) e.node.left[k].child = ids.at(e.left_keys[k]);
        for (std::size_t k = 0; k < e.right_keys.size(); ++k) e.node.right[k].child = ids.at(e.right_keys[k]);
        policy.nodes.push_back(std::move(e.node));
    }
    policy.root = ids.at(root);
    return policy;
}

SortPolicy SortPolicy::query_all(const Instance& instance) {
    const auto partition = compute_regions(instance);
    const int n = instance.size();
    SortPolicy policy;
    policy.nodes.push_back(SortNode{});
    for (IntervalId i = 1; i <= n; ++i) {
        SortNode node;
        node.kind = SortNode::Kind::Query;
        node.interval = i;
        const int next = i == n ? 0 : i + 1;
        for (RegionIndex x = partition.first_of(i); x <= partition.last_of(i); ++x) {
            const auto& r = partition.region(x);
            node.branches.push_back({x, next, sgn(instance.dist(i).prob_in(r.a, r.b)) > 0});
        }
        policy.nodes.push_back(std::move(node));
    }
    policy.root = n == 0 ? 0 : 1;
    return policy;
}

// ---------------------------------------------------------------------------
// Dump / parse
// ---------------------------------------------------------------------------

namespace {

void put_branches(std::ostringstream& out, const std::vector<SortBranch>& branches) {
    for (const auto& b : branches) {
        out << ' ' << b.region << ':' << b.child;
        if (!b.reachable) out << '!';
    }
}

SortBranch parse_branch(const std::string& token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw std::runtime_error("policy: bad branch '" + token + "'");
    SortBranch b;
    std::string child = token.substr(colon + 1);
    if (!child.empty() && child.back() == '!') {
        b.reachable = false;
        child.pop_back();
    }
    try {
        std::size_t used = 0;
        b.region = std::stoi(token.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("region");
        b.child = std::stoi(child, &used);
        if (used != child.size()) throw std::invalid_argument("child");
    } catch (const std::exception&) {
        throw std::runtime_error("policy: bad branch '" + token + "'");
    }
    return b;
}

int parse_int(const std::string& token, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("policy: bad " + what + " '" + token + "'");
    }
}

}  // namespace

std::string dump_policy(const SortPolicy& policy) {
    std::ostringstream out;
    for (std::size_t id = 0; id < policy.nodes.size(); ++id) {
        const auto& node = policy.nodes[id];
        out << "node " << id << ' ';
        switch (node.kind) {
            case SortNode::Kind::Done:
                out << "done";
                break;
            case SortNode::Kind::Query:
                out << "query " << node.interval << " branches";
                put_branches(out, node.branches);
                break;
            case SortNode::Kind::Split:
                out << "split " << node.anchor << " members";
                for (IntervalId m : node.members) out << ' ' << m;
                out << " left";
                put_branches(out, node.left);
                out << " right";
                put_branches(out, node.right);
                break;
            case SortNode::Kind::CascadeLeft:
            case SortNode::Kind::CascadeRight:
                out << (node.kind == SortNode::Kind::CascadeLeft ? "cascadeL " : "cascadeR ") << node.interval
                    << ' ' << node.anchor << " branches";
                put_branches(out, node.branches);
                break;
        }
        out << '\n';
    }
    out << "root " << policy.root << '\n';
    return out.str();
}

SortPolicy parse_policy(std::istream& in) {
    std::map<int, SortNode> nodes;
    std::optional<int> root;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream words(line);
        std::vector<std::string> tok;
        for (std::string w; words >> w;) tok.push_back(w);
        if (tok.empty()) continue;
        const std::string where = " (line " + std::to_string(line_no) + ")";
        if (tok[0] == "root") {
            if (tok.size() != 2) throw std::runtime_error("policy: malformed root" + where);
            root = parse_int(tok[1], "root");
            continue;
        }
        if (tok[0] != "node" || tok.size() < 3) throw std::runtime_error("policy: unexpected line" + where);
        const int id = parse_int(tok[1], "node id");
        if (nodes.count(id)) throw std::runtime_error("policy: duplicate node " + tok[1] + where);
        SortNode node;
        const std::string& kind = tok[2];
        std::size_t pos = 3;
        auto expect = [&](const std::string& word) {
            if (pos >= tok.size() || tok[pos] != word) {
                throw std::runtime_error("policy: expected '" + word + "'" + where);
            }
            ++pos;
        };
        auto branches_until = [&](const std::string& stop) {
            std::vector<SortBranch> out;
            while (pos < tok.size() && tok[pos] != stop) out.push_back(parse_branch(tok[pos++]));
            return out;
        };
        if (kind == "done") {
            node.kind = SortNode::Kind::Done;
        } else if (kind == "query") {
            node.kind = SortNode::Kind::Query;
            if (pos >= tok.size()) throw std::runtime_error("policy: missing interval" + where);
            node.interval = parse_int(tok[pos++], "interval");
            expect("branches");
            node.branches = branches_until("");
        } else if (kind == "split") {
            node.kind = SortNode::Kind::Split;
            if (pos >= tok.size()) throw std::runtime_error("policy: missing region" + where);
            node.anchor = parse_int(tok[pos++], "region");
            expect("members");
            while (pos < tok.size() && tok[pos] != "left") node.members.push_back(parse_int(tok[pos++], "member"));
            expect("left");
            node.left = branches_until("right");
            expect("right");
            node.right = branches_until("");
        } else if (kind == "cascadeL" || kind == "cascadeR") {
            node.kind = kind == "cascadeL" ? SortNode::Kind::CascadeLeft : SortNode::Kind::CascadeRight;
            if (pos + 1 >= tok.size()) throw std::runtime_error("policy: missing cascade fields" + where);
            node.interval = parse_int(tok[pos++], "interval");
            node.anchor = parse_int(tok[pos++], "region");
            expect("branches");
            node.branches = branches_until("");
        } else {
            throw std::runtime_error("policy: unknown node kind '" + kind + "'" + where);
        }
        if (pos != tok.size()) throw std::runtime_error("policy: trailing tokens" + where);
        nodes.emplace(id, std::move(node));
    }
    if (!root) throw std::runtime_error("policy: missing root line");
    SortPolicy policy;
    int expected = 0;
    for (auto& [id, node] : nodes) {
        if (id != expected++) throw std::runtime_error("policy: node ids must be 0..N-1");
        policy.nodes.push_back(std::move(node));
    }
    const int count = static_cast<int>(policy.nodes.size());
    auto check = [&](int child) {
        if (child < 0 || child >= count) throw std::runtime_error("policy: dangling child " + std::to_string(child));
    };
    for (const auto& node : policy.nodes) {
        for (const auto* list : {&node.branches, &node.left, &node.right}) {
            for (const auto& b : *list) check(b.child);
        }
    }
    check(*root);
    policy.root = *root;
    return policy;
}

// ---------------------------------------------------------------------------

SortResult solve_sort(const Instance& instance) {
    SortSolver solver(instance);
    SortResult result;
    const int t = solver.partition().count();
    result.expected_cost = t == 0 ? Rational(0) : solver.tables().m(1, t);
    result.policy = solver.build_policy();
    result.tables = solver.tables();
    return result;
}

Rational conditioned_cost(const Instance& instance, IntervalId first) {
    SortSolver solver(instance);
    if (first < 1 || first > instance.size()) throw std::out_of_range("no interval " + std::to_string(first));
    return solver.conditioned(first);
}

}  // namespace qmin
