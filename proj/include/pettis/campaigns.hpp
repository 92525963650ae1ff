#pragma once

#include "pettis/config.hpp"
#include "pettis/continuous_model.hpp"
#include "pettis/pettis_model.hpp"
#include "pettis/report.hpp"

namespace pettis {

/// Absolute slack on lower-bound assertions.
inline constexpr double kLowerBoundSlack = 1e-12;
/// Relative slack on the pairing identity: tol = 1e-9 (1 + ‖x‖_q).
inline constexpr double kPairingRelTol = 1e-9;
/// Bochner partial sums must grow by this factor over this many levels.
inline constexpr double kBochnerGrowth = 1.5;
inline constexpr int kBochnerStride = 4;
inline constexpr int kBochnerFirstLevel = 8;

/// Rows idx,lo,hi,measure,psi,lower,upper,pass over every dyadic interval up
/// to cfg.dyadic_level followed by cfg.samples random intervals.
Report run_lower_bound_sweep(const PettisModel& m, const CampaignConfig& cfg);

/// cfg.samples functionals against cfg.sets interval sets.
Report run_pairing_check(const PettisModel& m, const CampaignConfig& cfg);

Report run_blowup(const PettisModel& m, const CampaignConfig& cfg);

/// Asserts only the floor h^{-1/2}·upper >= ψ(h)/h^{1/2}; the small-h limit is
/// reported as a median trend.
Report run_halfpower_statistic(const PettisModel& m, const CampaignConfig& cfg);

Report run_bochner_divergence(const PettisModel& m, const CampaignConfig& cfg);

Report run_continuous_campaign(const ContinuousModel& m, const CampaignConfig& cfg);

Report run_psi_validate(const ModelConfig& model, const CampaignConfig& cfg);

/// Builds the configured model and runs cfg.campaign.kind.
Report run_campaign(const Config& cfg);

}  // namespace pettis
