#include "qmin/normalize.hpp"

#include <algorithm>
#include <map>

namespace qmin {

RawInstance RawInstance::from(const Instance& instance) {
    RawInstance raw;
    for (IntervalId i = 1; i <= instance.size(); ++i) {
        raw.intervals.push_back(instance.interval(i));
        const auto& d = instance.dist(i);
        raw.dists.push_back(RawDist{d.breakpoints(), d.masses()});
    }
    return raw;
}

int RawInstance::index_of(IntervalId file_id) const {
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        if (intervals[k].id == file_id) return static_cast<int>(k);
    }
    throw InvalidInstance({"unknown interval id " + std::to_string(file_id)});
}

Rational RawInstance::continuous_mass(int index) const {
    Rational mass = 1;
    for (const auto& atom : atoms) {
        if (index_of(atom.interval) == index) mass -= atom.mass;
    }
    return mass;
}

RawDist RawInstance::pieces(int index) const {
    const auto k = static_cast<std::size_t>(index);
    if (dists[k]) return *dists[k];
    return RawDist{{intervals[k].lo, intervals[k].hi}, {continuous_mass(index)}};
}

Rational normalization_epsilon(const RawInstance& raw) {
    std::vector<Rational> points;
    for (const auto& iv : raw.intervals) {
        points.push_back(iv.lo);
        points.push_back(iv.hi);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    Rational gap = 0;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        Rational g = points[k + 1] - points[k];
        if (sgn(gap) == 0 || g < gap) gap = g;
    }
    if (sgn(gap) == 0) gap = 1;
    return gap / 4;
}

namespace {

struct WorkInterval {
    QueryInterval interval;
    RawDist dist;
};

void refine(RawDist& d, const Rational& x) {
    auto& bps = d.breakpoints;
    if (x <= bps.front() || x >= bps.back()) return;
    auto it = std::lower_bound(bps.begin(), bps.end(), x);
    if (*it == x) return;
    const auto k = static_cast<std::size_t>(it - bps.begin()) - 1;
    const Rational width = bps[k + 1] - bps[k];
    const Rational left_mass = d.masses[k] * (x - bps[k]) / width;
    const Rational right_mass = d.masses[k] - left_mass;
    bps.insert(bps.begin() + static_cast<std::ptrdiff_t>(k) + 1, x);
    d.masses[k] = left_mass;
    d.masses.insert(d.masses.begin() + static_cast<std::ptrdiff_t>(k) + 1, right_mass);
}

/// Adds `mass` spread uniformly over (a, b), which must lie inside the support.
void add_uniform(RawDist& d, const Rational& a, const Rational& b, const Rational& mass) {
    refine(d, a);
    refine(d, b);
    const Rational width = b - a;
    for (std::size_t k = 0; k + 1 < d.breakpoints.size(); ++k) {
        if (d.breakpoints[k] >= a && d.breakpoints[k + 1] <= b) {
            d.masses[k] += mass * (d.breakpoints[k + 1] - d.breakpoints[k]) / width;
        }
    }
}

/// Moves everything right of x by `shift`, leaving a zero-mass gap (x, x + shift).
void open_gap(WorkInterval& w, const Rational& x, const Rational& shift) {
    auto& iv = w.interval;
    if (iv.lo >= x) {
        iv.lo += shift;
        iv.hi += shift;
        for (auto& b : w.dist.breakpoints) b += shift;
        return;
    }
    if (iv.hi <= x) return;
    refine(w.dist, x);
    iv.hi += shift;
    auto& bps = w.dist.breakpoints;
    auto at = std::find(bps.begin(), bps.end(), x);
    const auto k = static_cast<std::size_t>(at - bps.begin());
    for (std::size_t p = k + 1; p < bps.size(); ++p) bps[p] += shift;
    bps.insert(bps.begin() + static_cast<std::ptrdiff_t>(k) + 1, x + shift);
    w.dist.masses.insert(w.dist.masses.begin() + static_cast<std::ptrdiff_t>(k), Rational(0));
}

}  // namespace

Instance normalize_endpoint_mass(const RawInstance& raw) {
    std::vector<WorkInterval> work;
    for (std::size_t k = 0; k < raw.intervals.size(); ++k) {
        work.push_back({raw.intervals[k], raw.pieces(static_cast<int>(k))});
    }

    std::vector<std::string> problems;
    for (std::size_t k = 0; k < work.size(); ++k) {
        Rational total = raw.continuous_mass(static_cast<int>(k));
        for (const auto& m : work[k].dist.masses) total -= m;
        if (sgn(raw.continuous_mass(static_cast<int>(k))) < 0) {
            problems.push_back("interval " + std::to_string(work[k].interval.id) + ": atoms exceed total mass 1");
        } else if (raw.dists[k] && sgn(total) != 0) {
            problems.push_back("interval " + std::to_string(work[k].interval.id) +
                               ": pieces and atoms must sum to 1");
        }
    }
    for (const auto& atom : raw.atoms) {
        const auto& iv = raw.intervals[static_cast<std::size_t>(raw.index_of(atom.interval))];
        if (!(iv.lo < atom.at && atom.at < iv.hi)) {
            problems.push_back("atom at " + to_string(atom.at) + " lies outside the open interval I" +
                               std::to_string(atom.interval));
        }
        if (sgn(atom.mass) <= 0) problems.push_back("atom mass must be positive");
    }
    if (!problems.empty()) throw InvalidInstance(std::move(problems));

    const Rational eps = normalization_epsilon(raw);

    // Group by position; handle right to left so shifts never touch pending atoms.
    std::map<Rational, std::vector<Atom>, std::greater<>> by_position;
    for (const auto& atom : raw.atoms) by_position[atom.at].push_back(atom);

    for (const auto& [x, atoms] : by_position) {
        bool left_end = false;
        bool right_end = false;
        Rational nearest = 0;
        for (const auto& w : work) {
            left_end = left_end || w.interval.lo == x;
            right_end = right_end || w.interval.hi == x;
            for (const Rational* p : {&w.interval.lo, &w.interval.hi}) {
                Rational d = abs(*p - x);
                if (sgn(d) > 0 && (sgn(nearest) == 0 || d < nearest)) nearest = d;
            }
        }
        Rational a;
        Rational b;
        if (left_end && right_end) {
            for (auto& w : work) open_gap(w, x, 2 * eps);
            a = x;
            b = x + 2 * eps;
        } else if (left_end) {
            a = x - eps;
            b = x;
        } else if (right_end) {
            a = x;
            b = x + eps;
        } else {
            const Rational half = std::min(eps, Rational(nearest / 2));
            a = x - half;
            b = x + half;
        }
        for (const auto& atom : atoms) {
            add_uniform(work[static_cast<std::size_t>(raw.index_of(atom.interval))].dist, a, b, atom.mass);
        }
    }

    std::vector<QueryInterval> intervals;
    std::vector<PiecewiseDist> dists;
    for (auto& w : work) {
        intervals.push_back(w.interval);
        dists.emplace_back(std::move(w.dist.breakpoints), std::move(w.dist.masses));
    }
    return Instance(std::move(intervals), std::move(dists));
}

Instance normalize_endpoint_mass(const Instance& instance) {
    return normalize_endpoint_mass(RawInstance::from(instance));
}

}  // namespace qmin
