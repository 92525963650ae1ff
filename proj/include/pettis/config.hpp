#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pettis/carriers.hpp"
#include "pettis/continuous_model.hpp"
#include "pettis/interval.hpp"
#include "pettis/pettis_model.hpp"
#include "pettis/psi.hpp"

namespace pettis {

struct ModelConfig {
    std::string kind = "pettis";  // "pettis" or "continuous"
    PsiSpec psi = PsiSpec::power(0.75);
    double K = 1.0;
    NormExponent p{2.0};
    SequenceRule rule = SequenceRule::affine(1.0);
    int depth = 24;
    CarrierScheme scheme = CarrierScheme::midpoint_leaf;
    CarrierParams params;
    std::string archive;  // load the model from this archive instead of building it
    int n_max = kDefaultNMax;
    double r_max = kDefaultRMax;

    bool continuous() const noexcept { return kind == "continuous"; }
};

enum class CampaignKind { lower_bound, pairing, blowup, halfpower, continuous, bochner, psi_validate };

std::string_view to_string(CampaignKind kind);
CampaignKind parse_campaign_kind(std::string_view name);

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view name);

struct CampaignConfig {
    CampaignKind kind = CampaignKind::lower_bound;
    std::uint64_t samples = 10000;
    std::uint64_t sets = 50;  // pairing: interval sets per functional
    std::uint64_t seed = 20240611;
    int dyadic_level = 12;    // lower-bound: all dyadic intervals up to this level
    std::vector<double> t_values{0.0, 0.3, 1.0 / 3.0, 0.9};
    int j_min = 4;
    int j_max = 20;
    IntervalSet interval{Interval(0.25, 0.5)};  // bochner
    std::vector<double> deltas;  // continuous: modulus grid (default 2^-1 .. 2^-p_{depth-1})
    ReportFormat format = ReportFormat::csv;
    std::string out;
};

struct Config {
    ModelConfig model;
    CampaignConfig campaign;
};

ModelConfig model_config_from_json(const nlohmann::json& j);
CampaignConfig campaign_config_from_json(const nlohmann::json& j);
Config config_from_json(const nlohmann::json& j);
/// Reads and parses a config file; every failure is a config_error.
Config load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const ModelConfig& m);

PettisModel make_pettis_model(const ModelConfig& cfg);
ContinuousModel make_continuous_model(const ModelConfig& cfg);

}  // namespace pettis
