#include "qmin/events.hpp"

#include <algorithm>
#include <string>

namespace qmin {

EventSpace::EventSpace(const Instance& instance, std::vector<Rational> cuts, std::uint64_t bound) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (const auto& iv : instance.intervals()) {
        std::vector<Rational> points{iv.lo};
        for (const auto& c : cuts) {
            if (c > iv.lo && c < iv.hi) points.push_back(c);
        }
        points.push_back(iv.hi);
        std::vector<Cell> cells;
        for (std::size_t k = 0; k + 1 < points.size(); ++k) {
            Rational mass = instance.dist(iv.id).prob_in(points[k], points[k + 1]);
            cells.push_back({points[k], points[k + 1], std::move(mass)});
        }
        std::uint64_t live = 0;
        for (const auto& c : cells) live += sgn(c.mass) > 0 ? 1 : 0;
        if (live != 0 && size_ > bound / live) {
            throw LimitExceeded("event space exceeds bound " + std::to_string(bound));
        }
        size_ *= live;
        cells_.push_back(std::move(cells));
    }
    if (size_ > bound) throw LimitExceeded("event space exceeds bound " + std::to_string(bound));
}

EventSpace EventSpace::for_sort(const Instance& instance, std::uint64_t bound) {
    std::vector<Rational> cuts;
    for (const auto& iv : instance.intervals()) {
        cuts.push_back(iv.lo);
        cuts.push_back(iv.hi);
    }
    return EventSpace(instance, std::move(cuts), bound);
}

EventSpace EventSpace::for_min(const Instance& instance, std::uint64_t bound) {
    std::vector<Rational> cuts;
    for (const auto& iv : instance.intervals()) cuts.push_back(iv.lo);
    if (instance.size() > 0) cuts.push_back(instance.interval(1).hi);
    return EventSpace(instance, std::move(cuts), bound);
}

void EventSpace::for_each(const std::function<void(const RegionEvent&)>& visit) const {
    const std::size_t n = cells_.size();
    // Positive-mass cell indices per interval.
    std::vector<std::vector<int>> live(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < cells_[i].size(); ++k) {
            if (sgn(cells_[i][k].mass) > 0) live[i].push_back(static_cast<int>(k));
        }
        if (live[i].empty()) return;
    }
    RegionEvent event;
    event.assignment.assign(n, 0);
    event.representative.values.assign(n, 0);
    std::vector<std::size_t> pick(n, 0);
    // prefix[i] = product of masses of intervals < i.
    std::vector<Rational> prefix(n + 1, 1);
    auto set = [&](std::size_t i) {
        const int k = live[i][pick[i]];
        const Cell& c = cells_[i][static_cast<std::size_t>(k)];
        event.assignment[i] = k;
        event.representative.values[i] = c.a + (c.b - c.a) * Rational(static_cast<long>(i + 1)) /
                                                   Rational(static_cast<long>(n + 1));
        prefix[i + 1] = prefix[i] * c.mass;
    };
    for (std::size_t i = 0; i < n; ++i) set(i);
    while (true) {
        event.probability = prefix[n];
        visit(event);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++pick[i] < live[i].size()) break;
            pick[i] = 0;
            if (i == 0) return;
        }
        if (n == 0) return;
        for (std::size_t j = i; j < n; ++j) set(j);
    }
}

Rational EventSpace::expectation(const std::function<Rational(const RegionEvent&)>& f) const {
    Rational total = 0;
    for_each([&](const RegionEvent& e) { total += f(e) * e.probability; });
    return total;
}

}  // namespace qmin
