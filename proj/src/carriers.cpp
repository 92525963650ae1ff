#include "pettis/carriers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "pettis/errors.hpp"

namespace pettis {

namespace {

constexpr int kMaxCarrierDepth = 40;
constexpr int kMaxMaterializedDepth = 20;
constexpr int kMantissaBits = 53;

std::string cell_name(int n, std::uint64_t k) {
    return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

// Stage-s Smith-Volterra-Cantor set on [0, 1).
std::vector<Interval> cantor_template(int stages) {
    std::vector<Interval> parts{Interval(0.0, 1.0)};
    for (int i = 1; i <= stages; ++i) {
        const double gap = std::ldexp(1.0, -2 * i);
        std::vector<Interval> next;
        next.reserve(parts.size() * 2);
        for (const auto& p : parts) {
            const double mid = 0.5 * (p.lo() + p.hi());
            next.emplace_back(p.lo(), mid - 0.5 * gap);
            next.emplace_back(mid + 0.5 * gap, p.hi());
        }
        parts = std::move(next);
    }
    return parts;
}

}  // namespace

std::string_view to_string(CarrierScheme scheme) {
    switch (scheme) {
        case CarrierScheme::midpoint_leaf: return "midpoint-leaf";
        case CarrierScheme::fat_cantor_stage: return "fat-cantor-stage";
        case CarrierScheme::greedy_gap: return "greedy-gap";
    }
    return "unknown";
}

CarrierScheme parse_carrier_scheme(std::string_view name) {
    if (name == "midpoint-leaf") return CarrierScheme::midpoint_leaf;
    if (name == "fat-cantor-stage") return CarrierScheme::fat_cantor_stage;
    if (name == "greedy-gap") return CarrierScheme::greedy_gap;
    throw Error(ErrorCode::config_error, "unknown carrier scheme '" + std::string(name) + "'");
}

CarrierFamily::CarrierFamily(int depth, CarrierScheme scheme, CarrierParams params)
    : depth_(depth), scheme_(scheme), params_(params) {
    if (depth < 1 || depth > kMaxCarrierDepth) {
        throw Error(ErrorCode::invalid_argument,
                    "carrier depth must lie in [1, 40], got " + std::to_string(depth));
    }
    slot_measure_ = std::ldexp(1.0, -(depth + 2));
    if (scheme == CarrierScheme::fat_cantor_stage) {
        const int stages = params.cantor_stages;
        if (stages < 0 || depth + 2 * stages + 3 > kMantissaBits) {
            throw Error(ErrorCode::invalid_argument,
                        "fat-cantor-stage needs 0 <= stages and depth + 2*stages + 3 <= 53");
        }
        cantor_template_ = cantor_template(stages);
        double fraction = 0.0;
        for (const auto& p : cantor_template_) fraction += p.measure();
        slot_measure_ *= fraction;
    }
}

void CarrierFamily::check_index(int n, std::uint64_t k) const {
    if (n < 1 || n > depth_ || k < 1 || k > (std::uint64_t{1} << n)) {
        throw Error(ErrorCode::out_of_range,
                    "carrier " + cell_name(n, k) + " outside family of depth " +
                        std::to_string(depth_));
    }
}

IntervalSet CarrierFamily::generate(int n, std::uint64_t k) const {
    // Slot endpoints in units of w/4 = 2^-(depth + 2).
    const int unit_exp = -(depth_ + 2);
    std::uint64_t lo_units = 0;
    if (n < depth_) {
        const std::uint64_t mid_units = (2 * k - 1) << (depth_ - n + 1);
        lo_units = mid_units + 2;
    } else {
        lo_units = (k - 1) * 4 + 1;
    }
    const double lo = std::ldexp(static_cast<double>(lo_units), unit_exp);
    const double hi = std::ldexp(static_cast<double>(lo_units + 1), unit_exp);
    if (scheme_ != CarrierScheme::fat_cantor_stage) return IntervalSet(Interval(lo, hi));

    const double width = hi - lo;
    std::vector<Interval> parts;
    parts.reserve(cantor_template_.size());
    for (const auto& p : cantor_template_) {
        parts.emplace_back(lo + p.lo() * width, lo + p.hi() * width);
    }
    return IntervalSet(std::move(parts));
}

IntervalSet CarrierFamily::carrier(int n, std::uint64_t k) const {
    check_index(n, k);
    if (sets_) return (*sets_)[static_cast<std::size_t>(n)][k - 1];
    return generate(n, k);
}

double CarrierFamily::carrier_measure(int n, std::uint64_t k) const {
    check_index(n, k);
    if (sets_) return (*sets_)[static_cast<std::size_t>(n)][k - 1].measure();
    return slot_measure_;
}

CarrierFamily::Sets CarrierFamily::materialize() const {
    if (sets_) return *sets_;
    if (depth_ > kMaxMaterializedDepth) {
        throw Error(ErrorCode::invalid_argument,
                    "refusing to materialize a carrier family deeper than " +
                        std::to_string(kMaxMaterializedDepth));
    }
    Sets sets(static_cast<std::size_t>(depth_) + 1);
    for (int n = 1; n <= depth_; ++n) {
        const auto cells = std::uint64_t{1} << n;
        auto& level = sets[static_cast<std::size_t>(n)];
        level.reserve(cells);
        for (std::uint64_t k = 1; k <= cells; ++k) level.push_back(generate(n, k));
    }
    return sets;
}

CarrierFamily CarrierFamily::with_carrier(int n, std::uint64_t k, IntervalSet set) const {
    check_index(n, k);
    auto sets = materialize();
    sets[static_cast<std::size_t>(n)][k - 1] = std::move(set);
    CarrierFamily copy = *this;
    copy.sets_ = std::make_shared<const Sets>(std::move(sets));
    return copy;
}

IntervalSet CarrierFamily::occupied() const {
    const auto sets = materialize();
    std::vector<Interval> parts;
    for (const auto& level : sets) {
        for (const auto& s : level) parts.insert(parts.end(), s.parts().begin(), s.parts().end());
    }
    return IntervalSet(std::move(parts));
}

double CarrierFamily::occupied_measure() const {
    double total = 0.0;
    for (int n = 1; n <= depth_; ++n) {
        const auto cells = std::uint64_t{1} << n;
        if (!sets_) {
            total += static_cast<double>(cells) * slot_measure_;
            continue;
        }
        for (const auto& s : (*sets_)[static_cast<std::size_t>(n)]) total += s.measure();
    }
    return total;
}

CarrierFamily CarrierFamily::allocate(int depth, CarrierScheme scheme, CarrierParams params) {
    CarrierFamily family(depth, scheme, params);
    if (scheme != CarrierScheme::greedy_gap) return family;

    Sets sets(static_cast<std::size_t>(depth) + 1);
    IntervalSet occupied;
    for (int n = 1; n <= depth; ++n) {
        const auto cells = std::uint64_t{1} << n;
        auto& level = sets[static_cast<std::size_t>(n)];
        for (std::uint64_t k = 1; k <= cells; ++k) {
            const auto free = subtract(IntervalSet(dyadic_interval({n, k})), occupied);
            const Interval* widest = nullptr;
            for (const auto& part : free.parts()) {
                if (!widest || part.measure() > widest->measure()) widest = &part;
            }
            if (!widest || widest->measure() < kPositivityFloor) {
                throw Error(ErrorCode::allocation_exhausted,
                            "cell " + cell_name(n, k) + " has no free gap above the floor");
            }
            const double quarter = 0.25 * widest->measure();
            IntervalSet a(Interval(widest->lo() + quarter, widest->hi() - quarter));
            occupied = unite(occupied, a);
            level.push_back(std::move(a));
        }
    }
    family.sets_ = std::make_shared<const Sets>(std::move(sets));
    return family;
}

CarrierFamily CarrierFamily::from_sets(int depth, CarrierScheme scheme, CarrierParams params,
                                       Sets sets) {
    CarrierFamily family(depth, scheme, params);
    if (sets.size() != static_cast<std::size_t>(depth) + 1) {
        throw Error(ErrorCode::depth_mismatch, "explicit carrier sets do not match depth");
    }
    for (int n = 1; n <= depth; ++n) {
        if (sets[static_cast<std::size_t>(n)].size() != (std::uint64_t{1} << n)) {
            throw Error(ErrorCode::depth_mismatch,
                        "level " + std::to_string(n) + " has the wrong number of carriers");
        }
    }
    family.sets_ = std::make_shared<const Sets>(std::move(sets));
    return family;
}

CarrierFamily allocate_carriers(int depth, CarrierScheme scheme, CarrierParams params) {
    return CarrierFamily::allocate(depth, scheme, params);
}

IntervalSet carrier(const CarrierFamily& family, int n, std::uint64_t k) {
    return family.carrier(n, k);
}

DisjointnessReport verify_disjointness(const CarrierFamily& family, std::size_t max_listed) {
    DisjointnessReport report;
    auto record = [&](DisjointnessViolation v) {
        ++report.violation_count;
        if (report.violations.size() < max_listed) report.violations.push_back(v);
    };

    std::vector<DyadicIndex> escaped;
    std::vector<std::pair<DyadicIndex, IntervalSet>> path;
    const int depth = family.depth();

    std::function<void(int, std::uint64_t)> visit = [&](int n, std::uint64_t k) {
        const DyadicIndex here{n, k};
        auto set = family.carrier(n, k);
        ++report.carriers_checked;
        if (!(set.measure() > 0.0)) {
            record({DisjointnessViolation::Kind::empty, here, here, 0.0});
        }
        if (!dyadic_interval(here).contains(set.hull())) {
            record({DisjointnessViolation::Kind::not_contained, here, here, 0.0});
            escaped.push_back(here);
        }
        for (const auto& [ancestor, other] : path) {
            const double overlap = overlap_measure(set, other);
            if (overlap > 0.0) {
                record({DisjointnessViolation::Kind::overlap, ancestor, here, overlap});
            }
        }
        if (n == depth) return;
        path.emplace_back(here, std::move(set));
        visit(n + 1, 2 * k - 1);
        visit(n + 1, 2 * k);
        path.pop_back();
    };
    visit(1, 1);
    visit(1, 2);

    // Carriers outside their own cell may meet anything that is not an ancestor.
    for (const auto& bad : escaped) {
        const auto set = family.carrier(bad.n, bad.k);
        for (int n = 1; n <= depth; ++n) {
            const auto cells = std::uint64_t{1} << n;
            for (std::uint64_t k = 1; k <= cells; ++k) {
                const DyadicIndex other{n, k};
                if (other == bad) continue;
                const bool nested = n < bad.n && (bad.k - 1) >> (bad.n - n) == k - 1;
                const bool descendant = n > bad.n && (k - 1) >> (n - bad.n) == bad.k - 1;
                // Ancestor and descendant pairs were compared during the walk;
                // pairs of two escaped carriers are handled once.
                const bool seen_pair =
                    other < bad && std::find(escaped.begin(), escaped.end(), other) != escaped.end();
                if (nested || descendant || seen_pair) continue;
                const double overlap = overlap_measure(set, family.carrier(n, k));
                if (overlap > 0.0) {
                    record({DisjointnessViolation::Kind::overlap, std::min(bad, other),
                            std::max(bad, other), overlap});
                }
            }
        }
    }

    report.pass = report.violation_count == 0;
    return report;
}

std::string describe(const DisjointnessViolation& v) {
    const auto first = cell_name(v.first.n, v.first.k);
    switch (v.kind) {
        case DisjointnessViolation::Kind::empty: return "carrier " + first + " has zero measure";
        case DisjointnessViolation::Kind::not_contained:
            return "carrier " + first + " escapes its dyadic cell";
        case DisjointnessViolation::Kind::overlap:
            return "carriers " + first + " and " + cell_name(v.second.n, v.second.k) +
                   " overlap in measure " + std::to_string(v.overlap);
    }
    return "unknown violation";
}

void to_json(nlohmann::json& j, const CarrierFamily& family) {
    j = nlohmann::json{{"depth", family.depth()},
                       {"scheme", to_string(family.scheme())},
                       {"params", {{"stages", family.params().cantor_stages}}}};
    if (family.depth() > kMaxSerializedDepth) return;
    auto sets = nlohmann::json::object();
    for (int n = 1; n <= family.depth(); ++n) {
        const auto cells = std::uint64_t{1} << n;
        for (std::uint64_t k = 1; k <= cells; ++k) {
            sets[std::to_string(n) + "," + std::to_string(k)] = family.carrier(n, k);
        }
    }
    j["sets"] = std::move(sets);
}

CarrierFamily carrier_family_from_json(const nlohmann::json& j) {
    try {
        const int depth = j.at("depth").get<int>();
        const auto scheme = parse_carrier_scheme(j.value("scheme", std::string("midpoint-leaf")));
        CarrierParams params;
        if (j.contains("params")) params.cantor_stages = j["params"].value("stages", 2);
        if (!j.contains("sets")) return CarrierFamily::allocate(depth, scheme, params);

        if (depth < 1 || depth > kMaxMaterializedDepth) {
            throw Error(ErrorCode::config_error, "explicit carrier archive depth out of range");
        }
        std::vector<std::vector<IntervalSet>> sets(static_cast<std::size_t>(depth) + 1);
        for (int n = 1; n <= depth; ++n) sets[static_cast<std::size_t>(n)].resize(std::size_t{1} << n);
        std::uint64_t seen = 0;
        for (const auto& [key, value] : j.at("sets").items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) {
                throw Error(ErrorCode::config_error, "bad carrier key '" + key + "'");
            }
            const int n = std::stoi(key.substr(0, comma));
            const auto k = std::stoull(key.substr(comma + 1));
            if (n < 1 || n > depth || k < 1 || k > (std::uint64_t{1} << n)) {
                throw Error(ErrorCode::config_error, "carrier key '" + key + "' out of range");
            }
            sets[static_cast<std::size_t>(n)][k - 1] = value.get<IntervalSet>();
            ++seen;
        }
        if (seen != (std::uint64_t{2} << depth) - 2) {
            throw Error(ErrorCode::config_error, "carrier archive is missing sets");
        }
        return CarrierFamily::from_sets(depth, scheme, params, std::move(sets));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("carrier archive: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(ErrorCode::config_error, std::string("carrier archive: ") + e.what());
    }
}

}  // namespace pettis
