#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "pettis/carriers.hpp"
#include "pettis/interval.hpp"
#include "pettis/psi.hpp"
#include "pettis/sequence_space.hpp"

namespace pettis {

/// f(ω) = Σ_m Σ_k c_m 1_{A^m_k}(ω) / μ(A^m_k) e^m_k on the dyadic layout
/// dims(n) = 2^n. Immutable once built.
class PettisModel {
public:
    const CarrierFamily& carriers() const noexcept { return carriers_; }
    const CoefficientTable& table() const noexcept { return table_; }
    const SequenceRule& rule() const noexcept { return table_.validation.rule(); }
    const LayoutPtr& layout() const noexcept { return layout_; }
    NormExponent p() const noexcept { return table_.p; }
    int depth() const noexcept { return table_.depth; }

private:
    friend PettisModel build_model(CarrierFamily, const PsiSpec&, double, NormExponent,
                                   const SequenceRule&, int, int, double);
    PettisModel(CarrierFamily carriers, CoefficientTable table, LayoutPtr layout)
        : carriers_(std::move(carriers)), table_(std::move(table)), layout_(std::move(layout)) {}

    CarrierFamily carriers_;
    CoefficientTable table_;
    LayoutPtr layout_;
};

PettisModel build_model(CarrierFamily carriers, const PsiSpec& spec, double K, NormExponent p,
                        const SequenceRule& rule, int depth, int n_max = kDefaultNMax,
                        double r_max = kDefaultRMax);

/// f(ω): a single coordinate at most, since carriers are pairwise disjoint.
BlockVector evaluate_f(const PettisModel& m, double omega);

struct IntegralEnclosure {
    BlockVector truncated;
    double lower = 0.0;
    double upper = 0.0;
    double tail = 0.0;           // bound on the norm of the levels beyond depth
    std::uint64_t anomalies = 0;  // ratios clamped by more than kMeasureSlack
};

/// Pettis integral over E truncated at the model depth, with a certified
/// bracket on the norm of the untruncated integral.
IntegralEnclosure pettis_integral(const PettisModel& m, const IntervalSet& E);

/// ∫_E x(f) dμ, computed term by term from carrier intersections.
double scalar_integral(const PettisModel& m, const Functional& x, const IntervalSet& E);

/// ∫_E ‖f_{≤N}(ω)‖ dμ.
double bochner_partial(const PettisModel& m, const IntervalSet& E, int N);

/// Smallest interval length for which the truncated model reaches the level
/// the lower-bound argument needs: 4·2^{-p_{M-1}} with p_M the deepest level.
double provable_min_measure(const PettisModel& m);

/// Level p_n the lower-bound argument projects onto for interval i: with I^m_j
/// from find_inner_dyadic, the n with p_{n-1} <= m < p_n. nullopt when that
/// level lies beyond the model depth.
std::optional<int> proof_level(const PettisModel& m, const Interval& i);

/// Archive: model parameters, carrier family and coefficient table.
void to_json(nlohmann::json& j, const PettisModel& m);
/// Rebuilds a model from an archive; explicit carrier sets are re-verified
/// and a failed check raises disjointness_violated.
PettisModel model_from_archive(const nlohmann::json& j);

}  // namespace pettis
