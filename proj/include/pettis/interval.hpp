#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <json.hpp>

namespace pettis {

/// Absolute slack applied to every measure comparison involving endpoints
/// that are not dyadic rationals.
inline constexpr double kMeasureSlack = 1e-12;

/// Deepest level at which dyadic endpoints are guaranteed exact.
inline constexpr int kMaxDyadicLevel = 40;

/// Half-open interval [lo, hi) inside [0, 1].
class Interval {
public:
    Interval() = default;
    Interval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double measure() const noexcept { return hi_ - lo_; }
    bool empty() const noexcept { return !(lo_ < hi_); }
    bool contains(double x) const noexcept { return lo_ <= x && x < hi_; }
    bool contains(const Interval& other) const noexcept {
        return other.empty() || (lo_ <= other.lo_ && other.hi_ <= hi_);
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// Index of the dyadic interval I^n_k = [(k-1)/2^n, k/2^n), 1 <= k <= 2^n.
struct DyadicIndex {
    int n = 0;
    std::uint64_t k = 1;

    friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
    friend auto operator<=>(const DyadicIndex&, const DyadicIndex&) = default;
};

bool is_valid(const DyadicIndex& d) noexcept;

/// Exact dyadic interval for levels up to kMaxDyadicLevel.
Interval dyadic_interval(const DyadicIndex& d);

/// Index of the level-n cell containing x in [0, 1).
std::uint64_t cell_index(int n, double x);

/// Smallest-level, then leftmost, dyadic interval I^m_j contained in `i`
/// with 4 * 2^-m >= measure(i). Never fails for positive-measure input
/// longer than 2^-60.
DyadicIndex find_inner_dyadic(const Interval& i);

/// Finite disjoint union of half-open intervals in canonical form: parts
/// sorted, non-empty, pairwise disjoint and never adjacent.
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(std::initializer_list<Interval> parts);
    explicit IntervalSet(std::vector<Interval> parts);
    explicit IntervalSet(const Interval& single);

    static IntervalSet full() { return IntervalSet(Interval(0.0, 1.0)); }

    std::span<const Interval> parts() const noexcept { return parts_; }
    bool empty() const noexcept { return parts_.empty(); }
    std::size_t size() const noexcept { return parts_.size(); }

    double measure() const noexcept;
    bool contains(double x) const noexcept;
    bool contains(const Interval& i) const noexcept;
    /// Smallest interval containing the set (empty interval for the empty set).
    Interval hull() const noexcept;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> parts_;
};

double measure(const IntervalSet& s) noexcept;
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
IntervalSet subtract(const IntervalSet& a, const IntervalSet& b);
bool is_subset(const IntervalSet& a, const IntervalSet& b);

/// measure(a ∩ b) without materializing the intersection.
double overlap_measure(const IntervalSet& a, const IntervalSet& b) noexcept;
double overlap_measure(const IntervalSet& a, const Interval& b) noexcept;

void to_json(nlohmann::json& j, const IntervalSet& s);
void from_json(const nlohmann::json& j, IntervalSet& s);

}  // namespace pettis
