#include "qmin/regression.hpp"

#include "qmin/io.hpp"
#include "qmin/min_solver.hpp"
#include "qmin/oracle.hpp"
#include "qmin/simulate.hpp"
#include "qmin/sort_solver.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace qmin {

namespace {

const std::vector<std::string> kComparisons{"eq", "le", "ge", "approx"};

/// A row value: exact number or text (orderings, policy names).
struct Value {
    std::optional<Rational> number;
    std::string text;
};

std::vector<IntervalId> id_list(const std::vector<std::string>& args) {
    std::vector<IntervalId> ids;
    for (const auto& a : args) ids.push_back(std::stoi(a));
    return ids;
}

std::string join(const std::vector<IntervalId>& ids) {
    std::string s;
    for (IntervalId i : ids) s += (s.empty() ? "" : ",") + std::to_string(i);
    return s;
}

IntervalId single_arg(const std::vector<std::string>& args) {
    if (args.size() != 1) throw std::invalid_argument("expected one interval id argument");
    return std::stoi(args[0]);
}

using Evaluator = std::function<Value(const Instance&, const std::vector<std::string>&)>;

const std::map<std::string, Evaluator>& evaluators() {
    static const std::map<std::string, Evaluator> table{
        {"sort-cost", [](const Instance& inst, const auto&) { return Value{solve_sort(inst).expected_cost, {}}; }},
        {"sort-conditioned",
         [](const Instance& inst, const auto& args) { return Value{conditioned_cost(inst, single_arg(args)), {}}; }},
        {"sort-first",
         [](const Instance& inst, const auto& args) {
             const auto sub = args.empty() ? inst : inst.restricted_to(id_list(args));
             const auto r = solve_sort(sub);
             return Value{{}, std::to_string(r.tables.best_first(1, r.tables.regions()))};
         }},
        {"sort-policy-cost",
         [](const Instance& inst, const auto&) {
             return Value{expected_cost_exact(solve_sort(inst).policy, inst), {}};
         }},
        {"oracle-sort", [](const Instance& inst, const auto&) { return Value{oracle_sort(inst), {}}; }},
        {"min-i1-first",
         [](const Instance& inst, const auto&) { return Value{cost_i1_first(MinInstance(inst)), {}}; }},
        {"min-permutation",
         [](const Instance& inst, const auto& args) {
             return Value{cost_permutation(MinInstance(inst), id_list(args)), {}};
         }},
        {"min-best-cost",
         [](const Instance& inst, const auto&) {
             return Value{best_permutation_exact(MinInstance(inst), PermutationSearch::I1Last).cost, {}};
         }},
        {"min-best-order",
         [](const Instance& inst, const auto&) {
             return Value{{}, join(best_permutation_exact(MinInstance(inst), PermutationSearch::I1Last).ordering)};
         }},
        {"det15-a1", [](const Instance& inst, const auto&) { return Value{approx_det15(MinInstance(inst)).a1, {}}; }},
        {"det15-ar", [](const Instance& inst, const auto&) { return Value{approx_det15(MinInstance(inst)).a_r, {}}; }},
        {"det15-policy",
         [](const Instance& inst, const auto&) {
             return Value{{}, approx_det15(MinInstance(inst)).policy.describe()};
         }},
        {"det15-ratio",
         [](const Instance& inst, const auto&) {
             const MinInstance mi(inst);
             return Value{expected_ratio(approx_det15(mi).policy, mi), {}};
         }},
        {"alg1-mu1",
         [](const Instance& inst, const auto&) {
             const auto p = approx_alg1(MinInstance(inst)).params;
             if (!p.mu1) throw std::runtime_error("mu1 not computed on this branch");
             return Value{*p.mu1, {}};
         }},
        {"alg1-ratio",
         [](const Instance& inst, const auto&) {
             const MinInstance mi(inst);
             return Value{expected_ratio(approx_alg1(mi).policy, mi), {}};
         }},
    };
    return table;
}

bool compare(const Value& v, const TableRow& row) {
    if (!v.number) {
        if (row.cmp != "eq") throw std::invalid_argument("text values only support 'eq'");
        return v.text == row.expected;
    }
    const Rational expected = parse_rational(row.expected);
    if (row.cmp == "eq") return *v.number == expected;
    if (row.cmp == "le") return *v.number <= expected;
    if (row.cmp == "ge") return *v.number >= expected;
    const Rational tol = parse_rational(row.tolerance.empty() ? "0" : row.tolerance);
    return abs(*v.number - expected) <= tol;
}

}  // namespace

std::vector<std::string> table_kinds() {
    std::vector<std::string> kinds;
    for (const auto& [k, _] : evaluators()) kinds.push_back(k);
    return kinds;
}

std::vector<TableRow> read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<TableRow> rows;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::istringstream s(line.substr(0, line.find('#')));
        std::vector<std::string> tok;
        for (std::string t; s >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const auto where = path.string() + ":" + std::to_string(number) + ": ";
        if (tok.size() < 5) throw ParseError(where + "expected '<name> <kind> <file> [args] <cmp> <expected> [tol]'");
        TableRow row{tok[0], tok[1], tok[2], {}, {}, {}, {}};
        std::size_t k = 3;
        while (k < tok.size() && std::find(kComparisons.begin(), kComparisons.end(), tok[k]) == kComparisons.end()) {
            row.args.push_back(tok[k++]);
        }
        if (k + 1 >= tok.size()) throw ParseError(where + "missing comparison or expected value");
        row.cmp = tok[k];
        row.expected = tok[k + 1];
        if (k + 2 < tok.size()) row.tolerance = tok[k + 2];
        if (k + 3 < tok.size()) throw ParseError(where + "trailing tokens");
        if (row.cmp == "approx" && row.tolerance.empty()) throw ParseError(where + "approx needs a tolerance");
        if (!evaluators().count(row.kind)) throw ParseError(where + "unknown kind '" + row.kind + "'");
        rows.push_back(std::move(row));
    }
    return rows;
}

RowResult run_row(const TableRow& row, const std::filesystem::path& data_dir, int digits) {
    RowResult result{row, false, {}};
    try {
        const Instance inst = to_instance(read_instance_file(data_dir / row.file));
        const Value v = evaluators().at(row.kind)(inst, row.args);
        result.value = v.number ? to_string(*v.number) + " (" + to_decimal(*v.number, digits) + ")" : v.text;
        result.pass = compare(v, row);
    } catch (const std::exception& e) {
        result.value = std::string("error: ") + e.what();
    }
    return result;
}

}  // namespace qmin
