#pragma once

#include "qmin/model.hpp"

#include <cstdint>
#include <vector>

namespace qmin {

/// Cascade-area probability tables for a proper, connected, atom-free instance.
///
/// For the set I_x(y, z) of intervals inside (a_y, b_z) that contain S_x, the
/// product of Pr[v_j > a_{z'}] over that set is stored in two parts:
///   left(y, x, z')       ranges over intervals containing S_x with first region >= y,
///   left_outer(z, x, z') ranges over intervals containing S_x and S_z, ending after b_z,
/// so that the product for I_x(y, z) is their quotient. The right-hand tables
/// are the mirror image with Pr[v_j < b_{y'}].
class CascadeProbTables {
public:
    CascadeProbTables(const Instance& instance, const RegionPartition& partition);

    /// Product over I_x(y, z) of Pr[v_j > a_{z'}].
    Rational q_left(RegionIndex y, RegionIndex z, RegionIndex x, RegionIndex zp) const;
    /// Product over I_x(y, z) of Pr[v_j < b_{y'}].
    Rational q_right(RegionIndex y, RegionIndex z, RegionIndex x, RegionIndex yp) const;

    /// Raw stored factors (1 outside the stored window).
    const Rational& left(RegionIndex y, RegionIndex x, RegionIndex zp) const;
    const Rational& left_outer(RegionIndex z, RegionIndex x, RegionIndex zp) const;
    const Rational& right(RegionIndex z, RegionIndex x, RegionIndex yp) const;
    const Rational& right_outer(RegionIndex y, RegionIndex x, RegionIndex yp) const;

    /// Pr[v_i > a_z] and Pr[v_i < b_z].
    const Rational& above(IntervalId i, RegionIndex z) const;
    const Rational& below(IntervalId i, RegionIndex z) const;
    /// Pr[v_i in S_x].
    const Rational& mass(IntervalId i, RegionIndex x) const;

    /// Stored window of z' for region x on the left side: [left_window(x), x].
    RegionIndex left_window(RegionIndex x) const { return left_lo_[static_cast<std::size_t>(x)]; }
    /// Stored window of y' on the right side: [x, right_window(x)].
    RegionIndex right_window(RegionIndex x) const { return right_hi_[static_cast<std::size_t>(x)]; }

    /// Region-interval touches performed while filling the tables.
    std::uint64_t touches() const { return touches_; }

private:
    std::size_t slot(RegionIndex outer, RegionIndex x) const;

    int n_ = 0;
    int t_ = 0;
    std::vector<RegionIndex> left_lo_;
    std::vector<RegionIndex> right_hi_;
    // [outer][x] -> window vectors
    std::vector<std::vector<Rational>> left_;
    std::vector<std::vector<Rational>> left_outer_;
    std::vector<std::vector<Rational>> right_;
    std::vector<std::vector<Rational>> right_outer_;
    std::vector<Rational> above_;
    std::vector<Rational> below_;
    std::vector<Rational> mass_;
    std::uint64_t touches_ = 0;
    Rational one_ = 1;
};

/// Probability that S_{z'} is the leftmost region of the cascading area of
/// I_i in I_x(y, z), given v_i in S_x. Requires z' <= x.
Rational cascade_prob_left(RegionIndex y, RegionIndex z, IntervalId i, RegionIndex x, RegionIndex zp,
                           const CascadeProbTables& tables);

/// Probability that S_{y'} is the rightmost region of that cascading area. Requires y' >= x.
Rational cascade_prob_right(RegionIndex y, RegionIndex z, IntervalId i, RegionIndex x, RegionIndex yp,
                            const CascadeProbTables& tables);

}  // namespace qmin
