#include "qmin/cascade.hpp"

#include <algorithm>

namespace qmin {

namespace {

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

}  // namespace

std::size_t CascadeProbTables::slot(RegionIndex outer, RegionIndex x) const {
    return idx(outer) * idx(t_ + 1) + idx(x);
}

CascadeProbTables::CascadeProbTables(const Instance& instance, const RegionPartition& partition)
    : n_(instance.size()), t_(partition.count()) {
    const std::size_t cells = idx(t_ + 1) * idx(t_ + 1);
    left_.assign(cells, {});
    left_outer_.assign(cells, {});
    right_.assign(cells, {});
    right_outer_.assign(cells, {});
    left_lo_.assign(idx(t_ + 1), 0);
    right_hi_.assign(idx(t_ + 1), 0);

    // Per-interval tail probabilities at every region boundary.
    above_.assign(idx(n_ + 1) * idx(t_ + 1), Rational(0));
    below_.assign(idx(n_ + 1) * idx(t_ + 1), Rational(0));
    mass_.assign(idx(n_ + 1) * idx(t_ + 1), Rational(0));
    for (IntervalId i = 1; i <= n_; ++i) {
        const auto& d = instance.dist(i);
        for (RegionIndex z = 1; z <= t_; ++z) {
            const auto& r = partition.region(z);
            above_[idx(i) * idx(t_ + 1) + idx(z)] = d.prob_above(r.a);
            below_[idx(i) * idx(t_ + 1) + idx(z)] = d.prob_below(r.b);
            if (partition.contains(i, z)) mass_[idx(i) * idx(t_ + 1) + idx(z)] = d.prob_in(r.a, r.b);
        }
    }

    // Windows: the widest reach of any interval containing S_x.
    for (RegionIndex x = 1; x <= t_; ++x) {
        RegionIndex lo = x;
        RegionIndex hi = x;
        for (IntervalId j = 1; j <= n_; ++j) {
            if (!partition.contains(j, x)) continue;
            lo = std::min(lo, partition.first_of(j));
            hi = std::max(hi, partition.last_of(j));
        }
        left_lo_[idx(x)] = lo;
        right_hi_[idx(x)] = hi;
        for (RegionIndex outer = 0; outer <= t_; ++outer) {
            left_[slot(outer, x)].assign(idx(x - lo + 1), Rational(1));
            left_outer_[slot(outer, x)].assign(idx(x - lo + 1), Rational(1));
            right_[slot(outer, x)].assign(idx(hi - x + 1), Rational(1));
            right_outer_[slot(outer, x)].assign(idx(hi - x + 1), Rational(1));
        }
    }

    // Intervals containing S_{z'}, in id order (first and last regions both increase with id).
    std::vector<std::vector<IntervalId>> through(idx(t_ + 1));
    for (RegionIndex zp = 1; zp <= t_; ++zp) {
        for (IntervalId j = 1; j <= n_; ++j) {
            if (partition.contains(j, zp)) through[idx(zp)].push_back(j);
        }
    }

    // Each product below is built by one sweep of x away from z' (y'), adding an
    // interval once x enters its span; every interval is touched once per sweep.
    for (RegionIndex zp = 1; zp <= t_; ++zp) {
        const auto& ids = through[idx(zp)];
        const RegionIndex reach = right_hi_[idx(zp)];
        for (RegionIndex y = 1; y <= t_; ++y) {
            // left(y, x, z'): first(j) >= y, last(j) >= x.
            Rational running = 1;
            auto it = ids.rbegin();
            for (RegionIndex x = reach; x >= zp; --x) {
                for (; it != ids.rend() && partition.last_of(*it) >= x; ++it) {
                    ++touches_;
                    if (partition.first_of(*it) >= y) running *= above(*it, zp);
                }
                left_[slot(y, x)][idx(zp - left_lo_[idx(x)])] = running;
            }
        }
        for (RegionIndex z = 1; z <= t_; ++z) {
            // left_outer(z, x, z'): contains S_z, last(j) > z, last(j) >= x.
            Rational running = 1;
            auto it = ids.rbegin();
            for (RegionIndex x = reach; x >= zp; --x) {
                for (; it != ids.rend() && partition.last_of(*it) >= x; ++it) {
                    ++touches_;
                    if (partition.contains(*it, z) && partition.last_of(*it) > z) running *= above(*it, zp);
                }
                left_outer_[slot(z, x)][idx(zp - left_lo_[idx(x)])] = running;
            }
        }
    }
    for (RegionIndex yp = 1; yp <= t_; ++yp) {
        const auto& ids = through[idx(yp)];
        const RegionIndex reach = left_lo_[idx(yp)];
        for (RegionIndex z = 1; z <= t_; ++z) {
            // right(z, x, y'): last(j) <= z, first(j) <= x.
            Rational running = 1;
            auto it = ids.begin();
            for (RegionIndex x = reach; x <= yp; ++x) {
                for (; it != ids.end() && partition.first_of(*it) <= x; ++it) {
                    ++touches_;
                    if (partition.last_of(*it) <= z) running *= below(*it, yp);
                }
                right_[slot(z, x)][idx(right_hi_[idx(x)] - yp)] = running;
            }
        }
        for (RegionIndex y = 1; y <= t_; ++y) {
            // right_outer(y, x, y'): contains S_y, first(j) < y, first(j) <= x.
            Rational running = 1;
            auto it = ids.begin();
            for (RegionIndex x = reach; x <= yp; ++x) {
                for (; it != ids.end() && partition.first_of(*it) <= x; ++it) {
                    ++touches_;
                    if (partition.contains(*it, y) && partition.first_of(*it) < y) running *= below(*it, yp);
                }
                right_outer_[slot(y, x)][idx(right_hi_[idx(x)] - yp)] = running;
            }
        }
    }
}

const Rational& CascadeProbTables::left(RegionIndex y, RegionIndex x, RegionIndex zp) const {
    if (zp < left_lo_[idx(x)] || zp > x) return one_;
    return left_[slot(y, x)][idx(zp - left_lo_[idx(x)])];
}

const Rational& CascadeProbTables::left_outer(RegionIndex z, RegionIndex x, RegionIndex zp) const {
    if (zp < left_lo_[idx(x)] || zp > x) return one_;
    return left_outer_[slot(z, x)][idx(zp - left_lo_[idx(x)])];
}

const Rational& CascadeProbTables::right(RegionIndex z, RegionIndex x, RegionIndex yp) const {
    if (yp > right_hi_[idx(x)] || yp < x) return one_;
    return right_[slot(z, x)][idx(right_hi_[idx(x)] - yp)];
}

const Rational& CascadeProbTables::right_outer(RegionIndex y, RegionIndex x, RegionIndex yp) const {
    if (yp > right_hi_[idx(x)] || yp < x) return one_;
    return right_outer_[slot(y, x)][idx(right_hi_[idx(x)] - yp)];
}

const Rational& CascadeProbTables::above(IntervalId i, RegionIndex z) const {
    return above_[idx(i) * idx(t_ + 1) + idx(z)];
}

const Rational& CascadeProbTables::below(IntervalId i, RegionIndex z) const {
    return below_[idx(i) * idx(t_ + 1) + idx(z)];
}

const Rational& CascadeProbTables::mass(IntervalId i, RegionIndex x) const {
    return mass_[idx(i) * idx(t_ + 1) + idx(x)];
}

Rational CascadeProbTables::q_left(RegionIndex y, RegionIndex z, RegionIndex x, RegionIndex zp) const {
    const Rational& num = left(y, x, zp);
    const Rational& den = left_outer(z, x, zp);
    if (sgn(den) == 0) return num;
    return num / den;
}

Rational CascadeProbTables::q_right(RegionIndex y, RegionIndex z, RegionIndex x, RegionIndex yp) const {
    const Rational& num = right(z, x, yp);
    const Rational& den = right_outer(y, x, yp);
    if (sgn(den) == 0) return num;
    return num / den;
}

namespace {

/// q(i excluded) = q / Pr-factor of i.
Rational without(const Rational& q, const Rational& factor, IntervalId i, RegionIndex x,
                 const CascadeProbTables& tables) {
    if (sgn(factor) == 0) {
        if (sgn(tables.mass(i, x)) > 0) {
            throw std::logic_error("cascade probability: zero divisor for I" + std::to_string(i));
        }
        return 0;
    }
    return q / factor;
}

}  // namespace

Rational cascade_prob_left(RegionIndex y, RegionIndex z, IntervalId i, RegionIndex x, RegionIndex zp,
                           const CascadeProbTables& tables) {
    const Rational here = without(tables.q_left(y, z, x, zp), tables.above(i, zp), i, x, tables);
    if (zp == x) return here;
    return here - without(tables.q_left(y, z, x, zp + 1), tables.above(i, zp + 1), i, x, tables);
}

Rational cascade_prob_right(RegionIndex y, RegionIndex z, IntervalId i, RegionIndex x, RegionIndex yp,
                            const CascadeProbTables& tables) {
    const Rational here = without(tables.q_right(y, z, x, yp), tables.below(i, yp), i, x, tables);
    if (yp == x) return here;
    return here - without(tables.q_right(y, z, x, yp - 1), tables.below(i, yp - 1), i, x, tables);
}

}  // namespace qmin
