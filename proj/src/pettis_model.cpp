#include "pettis/pettis_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pettis/errors.hpp"

namespace pettis {

namespace {

// Cells of one level that meet E, split into runs lying wholly inside a part
// of E (where A ⊂ I ⊂ E gives ratio 1) and cells cut by a part boundary.
struct LevelCover {
    std::vector<CoordRun> inside;
    std::vector<std::uint64_t> cut;
};

LevelCover cover_level(const IntervalSet& E, int level) {
    LevelCover cover;
    const auto cells = std::uint64_t{1} << level;
    for (const auto& part : E.parts()) {
        const double a = std::ldexp(part.lo(), level);
        const double b = std::ldexp(part.hi(), level);
        const auto touch_first = static_cast<std::uint64_t>(std::floor(a)) + 1;
        const auto touch_last = std::min(static_cast<std::uint64_t>(std::ceil(b)), cells);
        const auto in_first = static_cast<std::uint64_t>(std::ceil(a)) + 1;
        const auto in_last = static_cast<std::uint64_t>(std::floor(b));
        if (in_first <= in_last) {
            cover.inside.push_back({in_first, in_last - in_first + 1, 1.0});
            if (touch_first < in_first) cover.cut.push_back(touch_first);
            if (touch_last > in_last) cover.cut.push_back(touch_last);
        } else {
            for (auto k = touch_first; k <= touch_last; ++k) cover.cut.push_back(k);
        }
    }
    std::sort(cover.cut.begin(), cover.cut.end());
    cover.cut.erase(std::unique(cover.cut.begin(), cover.cut.end()), cover.cut.end());
    return cover;
}

double carrier_ratio(const PettisModel& m, const IntervalSet& E, int n, std::uint64_t k,
                     std::uint64_t* anomalies) {
    const auto set = m.carriers().carrier(n, k);
    const double raw = overlap_measure(E, set) / set.measure();
    const double clamped = std::clamp(raw, 0.0, 1.0);
    if (anomalies && std::abs(raw - clamped) > kMeasureSlack) ++*anomalies;
    return clamped;
}

// Levels p_1 < ... < p_M that carry mass.
std::vector<int> mass_levels(const PettisModel& m) {
    std::vector<int> out;
    for (std::size_t n = 1; n < m.table().pn.size(); ++n) out.push_back(static_cast<int>(m.table().pn[n]));
    return out;
}

}  // namespace

PettisModel build_model(CarrierFamily carriers, const PsiSpec& spec, double K, NormExponent p,
                        const SequenceRule& rule, int depth, int n_max, double r_max) {
    if (carriers.depth() != depth) {
        throw Error(ErrorCode::depth_mismatch,
                    "carrier family has depth " + std::to_string(carriers.depth()) +
                        ", model depth is " + std::to_string(depth));
    }
    auto table = coefficients(spec, K, p, rule, depth, n_max, r_max);
    auto layout = BlockLayout::dyadic(p, depth);
    return PettisModel(std::move(carriers), std::move(table), std::move(layout));
}

BlockVector evaluate_f(const PettisModel& m, double omega) {
    if (!(omega >= 0.0 && omega < 1.0)) {
        throw Error(ErrorCode::out_of_range, "ω must lie in [0, 1)");
    }
    std::vector<Coordinate> coords;
    for (int level : mass_levels(m)) {
        const auto k = cell_index(level, omega);
        const auto set = m.carriers().carrier(level, k);
        if (set.contains(omega)) coords.push_back({level, k, m.table().c[level] / set.measure()});
    }
    return BlockVector::from_coords(m.layout(), coords);
}

IntegralEnclosure pettis_integral(const PettisModel& m, const IntervalSet& E) {
    IntegralEnclosure out{BlockVector(m.layout())};
    std::vector<std::pair<int, CoordRun>> runs;
    for (int level : mass_levels(m)) {
        const double c = m.table().c[level];
        auto cover = cover_level(E, level);
        for (auto run : cover.inside) {
            run.value = c;
            runs.emplace_back(level, run);
        }
        for (auto k : cover.cut) {
            const double ratio = carrier_ratio(m, E, level, k, &out.anomalies);
            if (ratio > 0.0) runs.emplace_back(level, CoordRun{k, 1, c * ratio});
        }
    }
    out.truncated = BlockVector::from_runs(m.layout(), std::move(runs));
    out.lower = norm(out.truncated);
    out.tail = tail_bound(m.table(), m.depth());
    if (m.p().is_infinite()) {
        out.upper = std::max(out.lower, out.tail);
    } else {
        const double big = std::max(out.lower, out.tail);
        const double p = m.p().value();
        out.upper = big == 0.0 ? 0.0
                               : big * std::pow(std::pow(out.lower / big, p) + std::pow(out.tail / big, p),
                                                1.0 / p);
        out.upper = std::max(out.upper, out.lower);
    }
    return out;
}

double scalar_integral(const PettisModel& m, const Functional& x, const IntervalSet& E) {
    if (x.max_level() > m.depth()) {
        throw Error(ErrorCode::support_exceeds_depth, "functional reaches level " +
                                                          std::to_string(x.max_level()));
    }
    double total = 0.0;
    for (const auto& [key, value] : x.coeffs()) {
        const auto [n, k] = key;
        const double c = m.table().coefficient(n);
        if (c == 0.0) continue;
        total += value * c * carrier_ratio(m, E, n, k, nullptr);
    }
    return total;
}

double bochner_partial(const PettisModel& m, const IntervalSet& E, int N) {
    if (N < 0 || N > m.depth()) {
        throw Error(ErrorCode::level_out_of_range, "partial level " + std::to_string(N));
    }
    double total = 0.0;
    for (int level : mass_levels(m)) {
        if (level > N) break;
        const double c = m.table().c[level];
        auto cover = cover_level(E, level);
        double level_sum = 0.0;
        for (const auto& run : cover.inside) level_sum += static_cast<double>(run.count);
        for (auto k : cover.cut) level_sum += carrier_ratio(m, E, level, k, nullptr);
        total += c * level_sum;
    }
    return total;
}

double provable_min_measure(const PettisModel& m) {
    const auto& pn = m.table().pn;
    const int top = m.table().top_index();
    const long long below = top >= 1 ? pn[static_cast<std::size_t>(top - 1)] : 0;
    return 4.0 * std::ldexp(1.0, static_cast<int>(-below));
}

std::optional<int> proof_level(const PettisModel& m, const Interval& i) {
    const auto inner = find_inner_dyadic(i);
    for (std::size_t n = 1; n < m.table().pn.size(); ++n) {
        if (m.table().pn[n - 1] <= inner.n && inner.n < m.table().pn[n]) {
            return static_cast<int>(m.table().pn[n]);
        }
    }
    return std::nullopt;
}

void to_json(nlohmann::json& j, const PettisModel& m) {
    const auto& v = m.table().validation;
    j = nlohmann::json{{"kind", "pettis"},
                       {"psi", m.table().spec},
                       {"K", m.table().K},
                       {"p", m.p()},
                       {"rule", m.rule()},
                       {"depth", m.depth()},
                       {"n_max", v.n_max},
                       {"r_max", v.r_max},
                       {"carriers", m.carriers()},
                       {"table", m.table()}};
}

PettisModel model_from_archive(const nlohmann::json& j) {
    try {
        auto carriers = carrier_family_from_json(j.at("carriers"));
        if (carriers.materialized()) {
            const auto report = verify_disjointness(carriers, 1);
            if (!report.pass) {
                throw Error(ErrorCode::disjointness_violated,
                            std::to_string(report.violation_count) + " violation(s), first: " +
                                describe(report.violations.front()));
            }
        }
        return build_model(std::move(carriers), j.at("psi").get<PsiSpec>(), j.at("K").get<double>(),
                           j.at("p").get<NormExponent>(), sequence_rule_from_json(j.at("rule")),
                           j.at("depth").get<int>(), j.value("n_max", kDefaultNMax),
                           j.value("r_max", kDefaultRMax));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("model archive: ") + e.what());
    }
}

}  // namespace pettis
