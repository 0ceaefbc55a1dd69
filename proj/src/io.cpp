#include "qmin/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace qmin {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line.substr(0, line.find('#')));
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

class LineContext {
public:
    LineContext(std::string source, int line) : source_(std::move(source)), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(source_ + ":" + std::to_string(line_) + ": " + what);
    }
    Rational rational(const std::string& t) const {
        try {
            return parse_rational(t);
        } catch (const std::invalid_argument&) {
            fail("bad number '" + t + "'");
        }
    }
    IntervalId id(const std::string& t) const {
        try {
            std::size_t used = 0;
            const long v = std::stol(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            if (v < 0 || v > 1'000'000'000) throw std::out_of_range(t);
            return static_cast<IntervalId>(v);
        } catch (const std::exception&) {
            fail("bad interval id '" + t + "'");
        }
    }

private:
    std::string source_;
    int line_;
};

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

}  // namespace

RawInstance parse_instance(std::istream& in, const std::string& source) {
    RawInstance raw;
    std::map<IntervalId, std::size_t> position;
    std::vector<std::pair<IntervalId, RawDist>> dists;
    std::vector<int> dist_lines;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto tok = tokens_of(line);
        if (tok.empty()) continue;
        const LineContext ctx(source, number);
        if (tok[0] == "interval") {
            if (tok.size() != 5) ctx.fail("expected 'interval <id> <lo> <hi> <cost>'");
            QueryInterval iv{ctx.id(tok[1]), ctx.rational(tok[2]), ctx.rational(tok[3]), ctx.rational(tok[4])};
            if (!position.emplace(iv.id, raw.intervals.size()).second) {
                ctx.fail("duplicate interval id " + tok[1]);
            }
            raw.intervals.push_back(std::move(iv));
            raw.dists.emplace_back();
        } else if (tok[0] == "dist") {
            if (tok.size() < 5 || tok.size() % 2 == 0) ctx.fail("expected 'dist <id> <b0> <m0> <b1> ... <bm>'");
            RawDist d;
            for (std::size_t k = 2; k < tok.size(); ++k) {
                ((k % 2 == 0) ? d.breakpoints : d.masses).push_back(ctx.rational(tok[k]));
            }
            dists.emplace_back(ctx.id(tok[1]), std::move(d));
            dist_lines.push_back(number);
        } else if (tok[0] == "atom") {
            if (tok.size() != 4) ctx.fail("expected 'atom <id> <x> <mass>'");
            raw.atoms.push_back({ctx.id(tok[1]), ctx.rational(tok[2]), ctx.rational(tok[3])});
        } else {
            ctx.fail("unknown directive '" + tok[0] + "'");
        }
    }
    for (std::size_t k = 0; k < dists.size(); ++k) {
        const LineContext ctx(source, dist_lines[k]);
        const auto it = position.find(dists[k].first);
        if (it == position.end()) ctx.fail("dist for unknown interval " + std::to_string(dists[k].first));
        if (raw.dists[it->second]) ctx.fail("second dist for interval " + std::to_string(dists[k].first));
        raw.dists[it->second] = std::move(dists[k].second);
    }
    for (const auto& atom : raw.atoms) {
        if (!position.count(atom.interval)) {
            throw ParseError(source + ": atom for unknown interval " + std::to_string(atom.interval));
        }
    }
    if (raw.intervals.empty()) throw ParseError(source + ": no intervals");
    return raw;
}

RawInstance read_instance_file(const std::filesystem::path& path) {
    auto in = open(path);
    return parse_instance(in, path.string());
}

Instance to_instance(const RawInstance& raw) { return normalize_endpoint_mass(raw); }

std::vector<IntervalId> sorted_ids(const RawInstance& raw) {
    std::vector<std::size_t> order(raw.intervals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = raw.intervals[a];
        const auto& y = raw.intervals[b];
        return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
    });
    std::vector<IntervalId> ids(raw.intervals.size());
    for (std::size_t k = 0; k < order.size(); ++k) ids[order[k]] = static_cast<IntervalId>(k + 1);
    return ids;
}

Realization parse_realization(std::istream& in, const RawInstance& raw, const std::string& source) {
    const auto ids = sorted_ids(raw);
    Realization r;
    r.values.resize(raw.intervals.size());
    std::vector<bool> seen(raw.intervals.size(), false);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto tok = tokens_of(line);
        if (tok.empty()) continue;
        const LineContext ctx(source, number);
        if (tok[0] != "value" || tok.size() != 3) ctx.fail("expected 'value <id> <v>'");
        const IntervalId file_id = ctx.id(tok[1]);
        std::size_t pos = raw.intervals.size();
        for (std::size_t k = 0; k < raw.intervals.size(); ++k) {
            if (raw.intervals[k].id == file_id) pos = k;
        }
        if (pos == raw.intervals.size()) ctx.fail("value for unknown interval " + tok[1]);
        if (seen[pos]) ctx.fail("second value for interval " + tok[1]);
        seen[pos] = true;
        r.values[static_cast<std::size_t>(ids[pos] - 1)] = ctx.rational(tok[2]);
    }
    for (std::size_t k = 0; k < seen.size(); ++k) {
        if (!seen[k]) throw ParseError(source + ": no value for interval " + std::to_string(raw.intervals[k].id));
    }
    return r;
}

Realization read_realization_file(const std::filesystem::path& path, const RawInstance& raw) {
    auto in = open(path);
    return parse_realization(in, raw, path.string());
}

std::string format_instance(const Instance& instance) {
    std::ostringstream out;
    for (const auto& iv : instance.intervals()) {
        out << "interval " << iv.id << ' ' << to_string(iv.lo) << ' ' << to_string(iv.hi) << ' ' << to_string(iv.cost)
            << '\n';
    }
    for (const auto& iv : instance.intervals()) {
        const auto& d = instance.dist(iv.id);
        if (d == PiecewiseDist::uniform(iv.lo, iv.hi)) continue;
        out << "dist " << iv.id;
        for (std::size_t k = 0; k < d.piece_count(); ++k) {
            out << ' ' << to_string(d.breakpoints()[k]) << ' ' << to_string(d.masses()[k]);
        }
        out << ' ' << to_string(d.hi()) << '\n';
    }
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << text;
    if (!out) throw ParseError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    auto in = open(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace qmin
