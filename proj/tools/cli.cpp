#include "cli.hpp"

#include "qmin/feasibility.hpp"
#include "qmin/generate.hpp"
#include "qmin/io.hpp"
#include "qmin/min_solver.hpp"
#include "qmin/oracle.hpp"
#include "qmin/regression.hpp"
#include "qmin/simulate.hpp"
#include "qmin/sort_solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef QMIN_DATA_DIR
#define QMIN_DATA_DIR "data/v1"
#endif

namespace qmin::cli {

namespace {

struct Config {
    std::string instance;
    std::string realization;
    std::string policy;
    std::string emit_policy;
    std::string method = "exact";
    std::string problem = "min";
    std::string kind = "proper-chain";
    std::string out;
    std::string data = QMIN_DATA_DIR;
    std::uint64_t seed = 0;
    std::uint64_t samples = 10000;
    std::uint64_t event_bound = kDefaultEventBound;
    int digits = 6;
    int oracle_limit = 6;
    bool oracle_requested = false;
    int n = 5;
};

/// Rejected method/policy combination; exit 1.
struct Precondition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Command {
public:
    Command(const Config& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

    int solve_sort();
    int solve_min();
    int verify();
    int simulate_cmd();
    int gen();
    int regression();

private:
    struct Loaded {
        RawInstance raw;
        Instance instance;
    };

    Loaded load() const;
    std::string num(const Rational& v) const { return to_string(v) + " (" + to_decimal(v, cfg_.digits, true) + ")"; }
    std::optional<SortPolicy> sort_policy(const Instance& inst) const;
    MinPolicy min_policy(const MinInstance& mi) const;
    void emit(const std::string& text) const {
        if (!cfg_.emit_policy.empty()) write_text_file(cfg_.emit_policy, text);
    }

    const Config& cfg_;
    std::ostream& out_;
    std::ostream& err_;
};

std::string id_list(const std::vector<IntervalId>& ids) {
    if (ids.empty()) return "none";
    std::string s;
    for (IntervalId i : ids) s += (s.empty() ? "" : " ") + std::to_string(i);
    return s;
}

Command::Loaded Command::load() const {
    RawInstance raw = read_instance_file(cfg_.instance);
    const auto ids = sorted_ids(raw);
    std::string renumbered;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (raw.intervals[k].id != ids[k]) {
            renumbered += " " + std::to_string(raw.intervals[k].id) + "->" + std::to_string(ids[k]);
        }
    }
    // Reports always use ids in left-endpoint order.
    if (!renumbered.empty()) err_ << "note: intervals renumbered by left endpoint:" << renumbered << '\n';
    Instance inst = to_instance(raw);
    return {std::move(raw), std::move(inst)};
}

int Command::solve_sort() {
    const auto [raw, inst] = load();
    std::vector<std::string> nested;
    for (auto& d : validate_sorting_instance(inst)) {
        if (d.rfind("nested:", 0) == 0) nested.push_back(d);
    }
    if (!nested.empty()) throw InvalidInstance(nested);

    const auto components = split_components(inst);
    Rational total;
    IntervalId first = 0;
    std::vector<std::string> lines;
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        const SortResult r = qmin::solve_sort(comp.instance);
        total += r.expected_cost;
        IntervalId local = sgn(r.expected_cost) > 0 ? r.tables.best_first(1, r.tables.regions()) : 0;
        const IntervalId global = local ? comp.members[static_cast<std::size_t>(local - 1)] : 0;
        if (!first) first = global;
        lines.push_back("component " + std::to_string(c + 1) + ": ids " + id_list(comp.members) + " cost " +
                        num(r.expected_cost) + " first-query " + (global ? std::to_string(global) : "none"));
        if (components.size() == 1) emit(dump_policy(r.policy));
    }
    if (components.size() > 1 && !cfg_.emit_policy.empty()) {
        throw Precondition("--emit-policy needs a connected instance (" + std::to_string(components.size()) +
                           " components)");
    }
    out_ << "cost: " << num(total) << '\n';
    out_ << "first-query: " << (first ? std::to_string(first) : "none") << '\n';
    if (components.size() > 1) {
        out_ << "components: " << components.size() << '\n';
        for (const auto& l : lines) out_ << l << '\n';
    }
    if (cfg_.oracle_requested && inst.size() <= cfg_.oracle_limit) {
        const Rational o = oracle_sort(inst, cfg_.oracle_limit);
        out_ << "oracle: " << num(o) << (o == total ? " agrees" : " DISAGREES") << '\n';
        if (o != total) return kRegression;
    }
    return kOk;
}

int Command::solve_min() {
    const auto [raw, inst] = load();
    const MinInstance mi(inst);
    std::optional<MinPolicy> policy;
    Rational cost;
    if (cfg_.method == "exact") {
        const auto best = best_permutation_exact(mi, PermutationSearch::I1Last);
        policy = MinPolicy::permutation(best.ordering);
        cost = best.cost;
        out_ << "policy: " << policy->describe() << '\n';
        out_ << "ordering: " << id_list(best.ordering) << '\n';
    } else if (cfg_.method == "i1-first" || cfg_.method == "uniform") {
        policy = cfg_.method == "uniform" ? approx_uniform(mi) : MinPolicy::i1_first();
        cost = cost_i1_first(mi);
        out_ << "policy: " << policy->describe() << '\n';
    } else if (cfg_.method == "det15") {
        const auto r = approx_det15(mi);
        policy = r.policy;
        cost = expected_cost_exact(r.policy, inst, cfg_.event_bound);
        out_ << "policy: " << policy->describe() << '\n';
        out_ << "A1: " << num(r.a1) << '\n';
        out_ << "AR: " << num(r.a_r) << '\n';
    } else {
        const auto r = approx_alg1(mi);
        policy = r.policy;
        cost = expected_cost_exact(r.policy, inst, cfg_.event_bound);
        out_ << "policy: " << policy->describe() << '\n';
        out_ << r.params.dump();
    }
    out_ << "cost: " << num(cost) << '\n';
    if (cfg_.method != "exact") {
        try {
            out_ << "ratio: " << num(expected_ratio(*policy, mi, cfg_.event_bound)) << '\n';
        } catch (const LimitExceeded&) {
            out_ << "ratio: skipped (event bound)\n";
        }
    }
    emit(policy->describe() + "\n");
    if (cfg_.oracle_requested && inst.size() <= cfg_.oracle_limit) {
        if (cfg_.method == "exact") {
            const auto o = oracle_min(inst, OracleMode::Permutation, cfg_.oracle_limit);
            out_ << "oracle: " << num(o.cost) << (o.cost == cost ? " agrees" : " DISAGREES") << '\n';
            if (o.cost != cost) return kRegression;
        } else {
            out_ << "oracle: " << num(oracle_min(inst, OracleMode::General, cfg_.oracle_limit).cost)
                 << " (adaptive optimum)\n";
        }
    }
    return kOk;
}

int Command::verify() {
    const auto [raw, inst] = load();
    const Realization r = read_realization_file(cfg_.realization, raw);
    check_realization(inst, r);
    const bool sorting = cfg_.problem == "sort";
    std::vector<IntervalId> set;
    Rational cost;
    if (sorting) {
        const auto forced = forced_sort_queries(inst, r);
        out_ << "forced: " << id_list(forced) << " (cost " << num(cost_of(inst, forced)) << ")\n";
        if (inst.size() > 20) {
            out_ << "set: skipped (more than 20 intervals)\n";
            return kOk;
        }
        std::tie(set, cost) = cheapest_feasible_subset(inst, r, true);
    } else {
        const auto v = verify_min(MinInstance(inst), r);
        set = v.query_set;
        cost = v.cost;
    }
    out_ << "set: " << id_list(set) << '\n';
    out_ << "cost: " << num(cost) << '\n';
    if (!sorting && cfg_.oracle_requested && inst.size() <= cfg_.oracle_limit) {
        const Rational o = cheapest_feasible_subset(inst, r, false).second;
        out_ << "oracle: " << num(o) << (o == cost ? " agrees" : " DISAGREES") << '\n';
        if (o != cost) return kRegression;
    }
    return kOk;
}

std::optional<SortPolicy> Command::sort_policy(const Instance& inst) const {
    if (!cfg_.policy.empty()) {
        std::istringstream in(read_text_file(cfg_.policy));
        try {
            return parse_policy(in);
        } catch (const std::runtime_error& e) {
            throw ParseError(cfg_.policy + ": " + e.what());
        }
    }
    if (cfg_.method == "query-all") return SortPolicy::query_all(inst);
    if (cfg_.method != "exact") throw Precondition("method '" + cfg_.method + "' does not apply to sorting");
    return qmin::solve_sort(inst).policy;
}

MinPolicy Command::min_policy(const MinInstance& mi) const {
    if (!cfg_.policy.empty()) {
        std::string text = read_text_file(cfg_.policy);
        text.erase(text.find_last_not_of(" \t\r\n") + 1);
        try {
            return parse_min_policy(text);
        } catch (const std::runtime_error& e) {
            throw ParseError(cfg_.policy + ": " + e.what());
        }
    }
    if (cfg_.method == "exact") return MinPolicy::permutation(best_permutation_exact(mi, PermutationSearch::I1Last).ordering);
    if (cfg_.method == "i1-first") return MinPolicy::i1_first();
    if (cfg_.method == "uniform") return approx_uniform(mi);
    if (cfg_.method == "det15") return approx_det15(mi).policy;
    if (cfg_.method == "alg1") return approx_alg1(mi).policy;
    std::vector<IntervalId> all(static_cast<std::size_t>(mi.size()));
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<IntervalId>(k + 1);
    return MinPolicy::trace({MinStep{MinStep::Op::QueryAll, all, {}, {}}});
}

int Command::simulate_cmd() {
    const auto [raw, inst] = load();
    const bool sorting = cfg_.problem == "sort";
    std::optional<SortPolicy> sp;
    std::optional<MinPolicy> mp;
    if (sorting) {
        sp = sort_policy(inst);
    } else {
        mp = min_policy(MinInstance(inst));
    }
    // Policies read from a file may not fit the instance: treat as malformed input.
    auto guarded = [&](auto&& f) {
        try {
            return f();
        } catch (const std::logic_error& e) {
            if (cfg_.policy.empty() || dynamic_cast<const std::invalid_argument*>(&e)) throw;
            throw ParseError(cfg_.policy + ": policy does not fit the instance: " + e.what());
        }
    };
    if (!cfg_.realization.empty()) {
        const Realization r = read_realization_file(cfg_.realization, raw);
        check_realization(inst, r);
        const auto report = guarded([&] { return sorting ? simulate(*sp, r, inst) : simulate(*mp, r, inst); });
        out_ << format_report(report);
        return kOk;
    }
    const auto mc = guarded([&] {
        return sorting ? monte_carlo(*sp, inst, cfg_.samples, cfg_.seed) : monte_carlo(*mp, inst, cfg_.samples, cfg_.seed);
    });
    std::ostringstream se;
    se << std::fixed << std::setprecision(cfg_.digits) << mc.std_error;
    out_ << "samples: " << mc.samples << '\n';
    out_ << "seed: " << cfg_.seed << '\n';
    out_ << "mean: " << num(mc.mean) << '\n';
    out_ << "stderr: " << se.str() << '\n';
    out_ << "min: " << num(mc.min) << '\n';
    out_ << "max: " << num(mc.max) << '\n';
    try {
        const Rational exact = sorting ? expected_cost_exact(*sp, inst, cfg_.event_bound)
                                       : expected_cost_exact(*mp, inst, cfg_.event_bound);
        out_ << "exact: " << num(exact) << '\n';
    } catch (const LimitExceeded&) {
        out_ << "exact: skipped (event bound)\n";
    }
    return kOk;
}

int Command::gen() {
    const std::string text = format_instance(generate(parse_gen_kind(cfg_.kind), cfg_.n, cfg_.seed));
    if (cfg_.out.empty()) {
        out_ << text;
    } else {
        write_text_file(cfg_.out, text);
    }
    return kOk;
}

int Command::regression() {
    const std::filesystem::path dir = cfg_.data;
    const auto rows = read_table(dir / "regression.txt");
    int failed = 0;
    for (const auto& row : rows) {
        // Table values use fixed precision so columns line up.
        auto r = run_row(row, dir, cfg_.digits);
        if (!r.pass) ++failed;
        out_ << (r.pass ? "PASS " : "FAIL ") << row.name << "  " << r.value << "  " << row.cmp << ' ' << row.expected;
        if (!row.tolerance.empty()) out_ << " tol " << row.tolerance;
        out_ << '\n';
    }
    out_ << "rows: " << rows.size() << " passed: " << rows.size() - static_cast<std::size_t>(failed)
         << " failed: " << failed << '\n';
    return failed ? kRegression : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Query-minimization solvers for intervals with stochastic values", "qmin"};
    app.require_subcommand(1);

    const std::vector<std::string> sort_methods{"exact", "query-all"};
    const std::vector<std::string> min_methods{"exact", "i1-first", "det15", "alg1", "uniform"};
    auto all_methods = min_methods;
    all_methods.push_back("query-all");

    auto digits = [&](CLI::App* c) {
        c->add_option("--digits", cfg.digits, "Decimal places in reports")->check(CLI::Range(1, 30));
    };
    auto instance = [&](CLI::App* c) { c->add_option("instance", cfg.instance, "Instance file")->required(); };
    auto oracle = [&](CLI::App* c) {
        c->add_option("--oracle-limit", cfg.oracle_limit, "Cross-check with the brute-force oracle up to this size")
            ->check(CLI::PositiveNumber);
    };
    auto events = [&](CLI::App* c) {
        c->add_option("--event-bound", cfg.event_bound, "Largest event space enumerated exactly")
            ->check(CLI::PositiveNumber);
    };
    auto problem = [&](CLI::App* c) {
        c->add_option("--problem", cfg.problem, "sort or min")->check(CLI::IsMember({"sort", "min"}));
    };

    auto* ss = app.add_subcommand("solve-sort", "Optimal expected cost of sorting");
    instance(ss);
    digits(ss);
    oracle(ss);
    ss->add_option("--emit-policy", cfg.emit_policy, "Write the decision DAG here");

    auto* sm = app.add_subcommand("solve-min", "Minimum-finding policy and its expected cost");
    instance(sm);
    digits(sm);
    oracle(sm);
    events(sm);
    sm->add_option("--method", cfg.method, "exact | i1-first | det15 | alg1 | uniform")
        ->check(CLI::IsMember(min_methods));
    sm->add_option("--emit-policy", cfg.emit_policy, "Write the policy text here");

    auto* vf = app.add_subcommand("verify", "Cheapest query set for a known realization");
    instance(vf);
    vf->add_option("realization", cfg.realization, "Realization file")->required();
    digits(vf);
    oracle(vf);
    problem(vf);

    auto* sim = app.add_subcommand("simulate", "Run a policy on sampled or given values");
    instance(sim);
    digits(sim);
    events(sim);
    problem(sim);
    sim->add_option("--method", cfg.method, "Policy to build when --policy is absent")
        ->check(CLI::IsMember(all_methods));
    sim->add_option("--policy", cfg.policy, "Policy file (sort: DAG dump, min: policy text)");
    sim->add_option("--realization", cfg.realization, "Trace one realization instead of sampling");
    sim->add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    sim->add_option("--seed", cfg.seed, "Sampling seed");

    auto* gn = app.add_subcommand("gen", "Generate a random instance");
    gn->add_option("--n", cfg.n, "Number of intervals")->check(CLI::PositiveNumber);
    gn->add_option("--kind", cfg.kind, "proper-chain | clique | random")
        ->check(CLI::IsMember({"proper-chain", "clique", "random"}));
    gn->add_option("--seed", cfg.seed, "Generator seed");
    gn->add_option("--out", cfg.out, "Output file (default: standard output)");

    auto* pt = app.add_subcommand("paper-tables", "Regression rows over the bundled instances");
    digits(pt);
    pt->add_option("--data", cfg.data, "Directory with regression.txt and instance files");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParse;
    }
    for (auto* c : {ss, sm, vf}) {
        if (c->parsed() && c->count("--oracle-limit")) cfg.oracle_requested = true;
    }
    if (sim->parsed() && cfg.problem == "sort" &&
        std::find(sort_methods.begin(), sort_methods.end(), cfg.method) == sort_methods.end()) {
        err << "error: method '" << cfg.method << "' does not apply to sorting\n";
        return kInvalid;
    }

    Command cmd(cfg, out, err);
    try {
        if (ss->parsed()) return cmd.solve_sort();
        if (sm->parsed()) return cmd.solve_min();
        if (vf->parsed()) return cmd.verify();
        if (sim->parsed()) return cmd.simulate_cmd();
        if (gn->parsed()) return cmd.gen();
        return cmd.regression();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParse;
    } catch (const InvalidInstance& e) {
        err << "error: invalid instance\n";
        for (const auto& d : e.diagnostics()) err << d << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        // Limits, preconditions and realizations off their intervals.
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
}

}  // namespace qmin::cli
