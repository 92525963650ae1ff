#include "pettis/interval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pettis/errors.hpp"

namespace pettis {

namespace {

// Levels beyond this no longer fit the cell index in 64 bits with headroom.
constexpr int kMaxSearchLevel = 62;

std::vector<Interval> canonicalize(std::vector<Interval> parts) {
    std::erase_if(parts, [](const Interval& i) { return i.empty(); });
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
    std::vector<Interval> out;
    out.reserve(parts.size());
    for (const auto& p : parts) {
        if (!out.empty() && p.lo() <= out.back().hi()) {
            out.back() = Interval(out.back().lo(), std::max(out.back().hi(), p.hi()));
        } else {
            out.push_back(p);
        }
    }
    return out;
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
        throw Error(ErrorCode::invalid_argument,
                    "interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        ") is not an ordered subinterval of [0,1]");
    }
}

bool is_valid(const DyadicIndex& d) noexcept {
    if (d.n < 0 || d.n > kMaxSearchLevel || d.k < 1) return false;
    return d.k <= (std::uint64_t{1} << d.n);
}

Interval dyadic_interval(const DyadicIndex& d) {
    if (d.n > kMaxDyadicLevel) {
        throw Error(ErrorCode::level_overflow,
                    "dyadic level " + std::to_string(d.n) + " exceeds " +
                        std::to_string(kMaxDyadicLevel));
    }
    if (!is_valid(d)) {
        throw Error(ErrorCode::out_of_range, "dyadic index (" + std::to_string(d.n) + ", " +
                                                 std::to_string(d.k) + ") is invalid");
    }
    return {std::ldexp(static_cast<double>(d.k - 1), -d.n),
            std::ldexp(static_cast<double>(d.k), -d.n)};
}

std::uint64_t cell_index(int n, double x) {
    if (n < 0 || n > kMaxSearchLevel) {
        throw Error(ErrorCode::level_overflow, "level " + std::to_string(n));
    }
    const auto cells = std::uint64_t{1} << n;
    const auto k = static_cast<std::uint64_t>(std::floor(std::ldexp(x, n))) + 1;
    return std::clamp<std::uint64_t>(k, 1, cells);
}

DyadicIndex find_inner_dyadic(const Interval& i) {
    const double len = i.measure();
    if (!(len > 0.0)) {
        throw Error(ErrorCode::degenerate_interval, "interval has zero measure");
    }
    for (int m = 0; m <= kMaxSearchLevel; ++m) {
        // Leftmost level-m cell starting at or after lo.
        // Scaling by 2^m is exact, so the comparison is done on integers.
        const auto start = static_cast<std::uint64_t>(std::ceil(std::ldexp(i.lo(), m)));
        const auto limit = static_cast<std::uint64_t>(std::floor(std::ldexp(i.hi(), m)));
        if (start + 1 > limit) continue;
        if (4.0 * std::ldexp(1.0, -m) + kMeasureSlack < len) break;
        return {m, start + 1};
    }
    throw Error(ErrorCode::level_overflow,
                "no inner dyadic interval within " + std::to_string(kMaxSearchLevel) + " levels");
}

IntervalSet::IntervalSet(std::initializer_list<Interval> parts)
    : parts_(canonicalize(std::vector<Interval>(parts))) {}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(canonicalize(std::move(parts))) {}

IntervalSet::IntervalSet(const Interval& single) {
    if (!single.empty()) parts_.push_back(single);
}

double IntervalSet::measure() const noexcept {
    double total = 0.0;
    for (const auto& p : parts_) total += p.measure();
    return total;
}

bool IntervalSet::contains(double x) const noexcept {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](double v, const Interval& p) { return v < p.lo(); });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(x);
}

bool IntervalSet::contains(const Interval& i) const noexcept {
    if (i.empty()) return true;
    // Canonical parts are never adjacent, so a contained interval sits in one part.
    auto it = std::upper_bound(parts_.begin(), parts_.end(), i.lo(),
                               [](double v, const Interval& p) { return v < p.lo(); });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(i);
}

Interval IntervalSet::hull() const noexcept {
    if (parts_.empty()) return {};
    return {parts_.front().lo(), parts_.back().hi()};
}

double measure(const IntervalSet& s) noexcept { return s.measure(); }

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    auto pa = a.parts();
    auto pb = b.parts();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < pa.size() && j < pb.size()) {
        const double lo = std::max(pa[i].lo(), pb[j].lo());
        const double hi = std::min(pa[i].hi(), pb[j].hi());
        if (lo < hi) out.emplace_back(lo, hi);
        if (pa[i].hi() < pb[j].hi()) {
            ++i;
        } else {
            ++j;
        }
    }
    return IntervalSet(std::move(out));
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> all(a.parts().begin(), a.parts().end());
    all.insert(all.end(), b.parts().begin(), b.parts().end());
    return IntervalSet(std::move(all));
}

IntervalSet subtract(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    auto pb = b.parts();
    std::size_t j = 0;
    for (const auto& part : a.parts()) {
        double cursor = part.lo();
        while (j < pb.size() && pb[j].hi() <= cursor) ++j;
        std::size_t jj = j;
        while (jj < pb.size() && pb[jj].lo() < part.hi()) {
            if (pb[jj].lo() > cursor) out.emplace_back(cursor, pb[jj].lo());
            cursor = std::max(cursor, pb[jj].hi());
            ++jj;
        }
        if (cursor < part.hi()) out.emplace_back(cursor, part.hi());
    }
    return IntervalSet(std::move(out));
}

bool is_subset(const IntervalSet& a, const IntervalSet& b) {
    return std::all_of(a.parts().begin(), a.parts().end(),
                       [&](const Interval& p) { return b.contains(p); });
}

double overlap_measure(const IntervalSet& a, const IntervalSet& b) noexcept {
    double total = 0.0;
    auto pa = a.parts();
    auto pb = b.parts();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < pa.size() && j < pb.size()) {
        const double lo = std::max(pa[i].lo(), pb[j].lo());
        const double hi = std::min(pa[i].hi(), pb[j].hi());
        if (lo < hi) total += hi - lo;
        if (pa[i].hi() < pb[j].hi()) {
            ++i;
        } else {
            ++j;
        }
    }
    return total;
}

double overlap_measure(const IntervalSet& a, const Interval& b) noexcept {
    double total = 0.0;
    for (const auto& p : a.parts()) {
        if (p.lo() >= b.hi()) break;
        const double lo = std::max(p.lo(), b.lo());
        const double hi = std::min(p.hi(), b.hi());
        if (lo < hi) total += hi - lo;
    }
    return total;
}

void to_json(nlohmann::json& j, const IntervalSet& s) {
    j = nlohmann::json::array();
    for (const auto& p : s.parts()) j.push_back({p.lo(), p.hi()});
}

void from_json(const nlohmann::json& j, IntervalSet& s) {
    if (!j.is_array()) throw Error(ErrorCode::config_error, "interval set must be an array");
    std::vector<Interval> parts;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2) {
            throw Error(ErrorCode::config_error, "interval set entries must be [lo, hi] pairs");
        }
        parts.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    s = IntervalSet(std::move(parts));
}

}  // namespace pettis
