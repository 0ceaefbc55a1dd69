#include "qmin/feasibility.hpp"

namespace qmin {

bool feasible_sort(const std::vector<Knowledge>& items) {
    for (std::size_t a = 0; a < items.size(); ++a) {
        for (std::size_t b = a + 1; b < items.size(); ++b) {
            if (items[a].queried && items[b].queried) continue;
            if (overlaps(items[a].lo, items[a].hi, items[b].lo, items[b].hi)) return false;
        }
    }
    return true;
}

bool feasible_min(const std::vector<Knowledge>& items) {
    if (items.size() <= 1) return true;
    for (std::size_t i = 0; i < items.size(); ++i) {
        bool minimal = true;
        for (std::size_t j = 0; j < items.size() && minimal; ++j) {
            if (i == j) continue;
            const auto& a = items[i];
            const auto& b = items[j];
            if (a.queried && b.queried) {
                // Known values compare directly; two identical exact values leave a tie.
                minimal = !(a.lo == a.hi && b.lo == b.hi && a.lo == b.lo);
            } else {
                minimal = a.hi <= b.lo;
            }
        }
        if (minimal) return true;
    }
    return false;
}

std::vector<Knowledge> knowledge_of(const std::vector<IntervalId>& query_set, const Realization& realization,
                                    const Instance& instance) {
    std::vector<Knowledge> items;
    items.reserve(static_cast<std::size_t>(instance.size()));
    for (const auto& iv : instance.intervals()) items.push_back(Knowledge::unqueried(iv));
    for (IntervalId i : query_set) items[static_cast<std::size_t>(i - 1)] = Knowledge::point(realization.value(i));
    return items;
}

bool feasible_sort(const std::vector<IntervalId>& query_set, const Realization& realization,
                   const Instance& instance) {
    return feasible_sort(knowledge_of(query_set, realization, instance));
}

bool feasible_min(const std::vector<IntervalId>& query_set, const Realization& realization,
                  const Instance& instance) {
    return feasible_min(knowledge_of(query_set, realization, instance));
}

std::vector<IntervalId> forced_sort_queries(const Instance& instance, const Realization& realization) {
    std::vector<IntervalId> forced;
    for (const auto& host : instance.intervals()) {
        for (IntervalId i = 1; i <= instance.size(); ++i) {
            const Rational& v = realization.value(i);
            if (i != host.id && host.lo < v && v < host.hi) {
                forced.push_back(host.id);
                break;
            }
        }
    }
    return forced;
}

}  // namespace qmin
