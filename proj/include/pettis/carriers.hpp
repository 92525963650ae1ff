#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pettis/interval.hpp"

namespace pettis {

/// How the carrier sets A^n_k ⊂ I^n_k are laid out.
///
/// midpoint-leaf (default): with w = 2^-depth, the carrier of a cell above the
///   leaf level is the quarter-leaf [mid + w/2, mid + 3w/4) just right of the
///   cell midpoint; a leaf cell [a, a + w) carries [a + w/4, a + w/2). Every
///   leaf keeps its outer quarters free, so each cell at every level retains
///   positive free measure.
/// fat-cantor-stage: the midpoint-leaf slot replaced by a finite stage of the
///   Smith-Volterra-Cantor construction (middle 4^-i removed at stage i).
/// greedy-gap: middle half of the largest free gap of each cell. Carriers
///   then swallow whole dyadic cells two levels down, so this scheme is
///   exhausted at depth 3; it is kept for shallow experiments.
enum class CarrierScheme { midpoint_leaf, fat_cantor_stage, greedy_gap };

std::string_view to_string(CarrierScheme scheme);
CarrierScheme parse_carrier_scheme(std::string_view name);

struct CarrierParams {
    int cantor_stages = 2;

    friend bool operator==(const CarrierParams&, const CarrierParams&) = default;
};

/// Smallest component length greedy-gap may split.
inline constexpr double kPositivityFloor = 0x1p-80;

/// Deepest family whose carrier sets are written out in JSON archives.
inline constexpr int kMaxSerializedDepth = 16;

/// Pairwise-disjoint positive-measure carriers A^n_k ⊂ I^n_k for
/// 1 <= n <= depth. Generated schemes compute carriers on demand; families
/// loaded from archives or edited with with_carrier() hold explicit sets.
class CarrierFamily {
public:
    int depth() const noexcept { return depth_; }
    CarrierScheme scheme() const noexcept { return scheme_; }
    const CarrierParams& params() const noexcept { return params_; }
    bool materialized() const noexcept { return sets_ != nullptr; }

    IntervalSet carrier(int n, std::uint64_t k) const;
    double carrier_measure(int n, std::uint64_t k) const;

    /// Copy of the family with A^n_k replaced (materializes the family).
    CarrierFamily with_carrier(int n, std::uint64_t k, IntervalSet set) const;

    /// Union of every carrier. Materializes up to 2^(depth+1) parts.
    IntervalSet occupied() const;
    double occupied_measure() const;

    static CarrierFamily allocate(int depth, CarrierScheme scheme, CarrierParams params = {});
    static CarrierFamily from_sets(int depth, CarrierScheme scheme, CarrierParams params,
                                   std::vector<std::vector<IntervalSet>> sets);

private:
    using Sets = std::vector<std::vector<IntervalSet>>;  // [n][k - 1]

    CarrierFamily(int depth, CarrierScheme scheme, CarrierParams params);
    void check_index(int n, std::uint64_t k) const;
    IntervalSet generate(int n, std::uint64_t k) const;
    Sets materialize() const;

    int depth_ = 0;
    CarrierScheme scheme_ = CarrierScheme::midpoint_leaf;
    CarrierParams params_;
    std::vector<Interval> cantor_template_;
    double slot_measure_ = 0.0;
    std::shared_ptr<const Sets> sets_;
};

CarrierFamily allocate_carriers(int depth, CarrierScheme scheme = CarrierScheme::midpoint_leaf,
                                CarrierParams params = {});
IntervalSet carrier(const CarrierFamily& family, int n, std::uint64_t k);

struct DisjointnessViolation {
    enum class Kind { overlap, not_contained, empty };
    Kind kind = Kind::overlap;
    DyadicIndex first;
    DyadicIndex second;  // equals `first` for single-carrier violations
    double overlap = 0.0;
};

struct DisjointnessReport {
    bool pass = true;
    std::uint64_t carriers_checked = 0;
    std::uint64_t violation_count = 0;
    std::vector<DisjointnessViolation> violations;  // at most `max_listed` entries
};

/// Checks every carrier for positivity and containment in its cell, and
/// every pair of carriers for overlap. Cells at different levels are either
/// nested or disjoint, so once containment holds only ancestor pairs can
/// overlap; carriers that escape their cell are compared against the whole
/// family.
DisjointnessReport verify_disjointness(const CarrierFamily& family,
                                       std::size_t max_listed = 1000);

std::string describe(const DisjointnessViolation& v);

void to_json(nlohmann::json& j, const CarrierFamily& family);
CarrierFamily carrier_family_from_json(const nlohmann::json& j);

}  // namespace pettis
