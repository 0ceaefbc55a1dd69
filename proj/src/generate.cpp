#include "qmin/generate.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qmin {

namespace {

/// Uniform integer in [lo, hi]; modulo bias is irrelevant here and keeps output
/// identical across standard libraries.
long draw(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::vector<QueryInterval> with_costs(std::vector<std::pair<long, long>> spans, std::mt19937_64& rng,
                                      const GenOptions& options) {
    std::vector<QueryInterval> ivs;
    int id = 1;
    for (const auto& [lo, hi] : spans) ivs.push_back({id++, Rational(lo), Rational(hi), Rational(draw(rng, 1, options.max_cost))});
    return ivs;
}

Instance build(std::vector<std::pair<long, long>> spans, std::mt19937_64& rng, const GenOptions& options) {
    auto ivs = with_costs(std::move(spans), rng, options);
    std::vector<PiecewiseDist> dists;
    for (const auto& iv : ivs) dists.push_back(gen_dist(iv.lo, iv.hi, rng, options.max_pieces));
    return Instance(std::move(ivs), std::move(dists));
}

void check_n(int n) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
}

}  // namespace

GenKind parse_gen_kind(const std::string& name) {
    if (name == "proper-chain") return GenKind::ProperChain;
    if (name == "clique") return GenKind::Clique;
    if (name == "random") return GenKind::Random;
    throw std::invalid_argument("unknown instance kind '" + name + "'");
}

std::string to_string(GenKind kind) {
    switch (kind) {
        case GenKind::ProperChain:
            return "proper-chain";
        case GenKind::Clique:
            return "clique";
        case GenKind::Random:
            return "random";
    }
    return "?";
}

PiecewiseDist gen_dist(const Rational& lo, const Rational& hi, std::mt19937_64& rng, int max_pieces) {
    const long pieces = draw(rng, 1, std::max(1, max_pieces));
    // Interior breakpoints on a grid of 8 * pieces steps.
    const long steps = 8 * pieces;
    std::set<long> cuts;
    while (static_cast<long>(cuts.size()) < pieces - 1) cuts.insert(draw(rng, 1, steps - 1));
    std::vector<Rational> bps{lo};
    for (long c : cuts) bps.push_back(lo + (hi - lo) * Rational(c) / Rational(steps));
    bps.push_back(hi);
    std::vector<long> weights;
    for (long k = 0; k < pieces; ++k) {
        const bool edge = k == 0 || k == pieces - 1;
        weights.push_back(draw(rng, edge ? 1 : 0, 4));
    }
    long total = 0;
    for (long w : weights) total += w;
    std::vector<Rational> masses;
    for (long w : weights) {
        Rational m(w, total);
        m.canonicalize();
        masses.push_back(m);
    }
    return PiecewiseDist(std::move(bps), std::move(masses));
}

Instance gen_proper_chain(int n, std::uint64_t seed, const GenOptions& options) {
    check_n(n);
    std::mt19937_64 rng(seed);
    // Walk over the 2n endpoints: the i-th R may only come once the (i+1)-th L is out.
    std::vector<long> lefts, rights;
    long pos = 0;
    while (static_cast<int>(rights.size()) < n) {
        const int l = static_cast<int>(lefts.size());
        const int r = static_cast<int>(rights.size());
        const bool can_l = l < n;
        const bool can_r = r < l && (r + 1 == n ? l == n : l > r + 1);
        const bool take_l = can_l && (!can_r || draw(rng, 0, 1) == 0);
        (take_l ? lefts : rights).push_back(pos);
        pos += draw(rng, 1, options.max_gap);
    }
    std::vector<std::pair<long, long>> spans;
    for (int i = 0; i < n; ++i) spans.emplace_back(lefts[static_cast<std::size_t>(i)], rights[static_cast<std::size_t>(i)]);
    return build(std::move(spans), rng, options);
}

Instance gen_clique(int n, std::uint64_t seed, const GenOptions& options) {
    check_n(n);
    std::mt19937_64 rng(seed);
    const long r1 = n + draw(rng, 1, 2L * n * options.max_gap);
    std::set<long> lefts;
    while (static_cast<int>(lefts.size()) < n - 1) lefts.insert(draw(rng, 1, r1 - 1));
    std::set<long> rights;
    while (static_cast<int>(rights.size()) < n - 1) rights.insert(r1 + draw(rng, 1, 3L * n * options.max_gap));
    std::vector<long> rs(rights.begin(), rights.end());
    std::shuffle(rs.begin(), rs.end(), rng);
    std::vector<std::pair<long, long>> spans{{0, r1}};
    std::size_t k = 0;
    for (long l : lefts) spans.emplace_back(l, rs[k++]);
    return build(std::move(spans), rng, options);
}

Instance gen_random(int n, std::uint64_t seed, const GenOptions& options) {
    check_n(n);
    std::mt19937_64 rng(seed);
    const long span = 4L * n * options.max_gap;
    std::vector<std::pair<long, long>> spans;
    for (int i = 0; i < n; ++i) {
        const long lo = draw(rng, 0, span - 1);
        spans.emplace_back(lo, draw(rng, lo + 1, span));
    }
    return build(std::move(spans), rng, options);
}

Instance generate(GenKind kind, int n, std::uint64_t seed, const GenOptions& options) {
    switch (kind) {
        case GenKind::ProperChain:
            return gen_proper_chain(n, seed, options);
        case GenKind::Clique:
            return gen_clique(n, seed, options);
        case GenKind::Random:
            return gen_random(n, seed, options);
    }
    throw std::invalid_argument("unknown instance kind");
}

Realization gen_realization(const Instance& instance, std::mt19937_64& rng) {
    Realization r;
    for (const auto& d : instance.dists()) {
        std::vector<std::size_t> live;
        for (std::size_t k = 0; k < d.piece_count(); ++k) {
            if (sgn(d.masses()[k]) > 0) live.push_back(k);
        }
        const std::size_t k = live[static_cast<std::size_t>(draw(rng, 0, static_cast<long>(live.size()) - 1))];
        const Rational& a = d.breakpoints()[k];
        const Rational& b = d.breakpoints()[k + 1];
        // Odd numerator over a power of two: strictly inside, almost never an endpoint.
        const long m = draw(rng, 0, (1L << 20) - 1);
        r.values.push_back(a + (b - a) * Rational(2 * m + 1) / Rational(1L << 21));
    }
    return r;
}

}  // namespace qmin
