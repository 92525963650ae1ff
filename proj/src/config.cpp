#include "pettis/config.hpp"

#include <fstream>
#include <initializer_list>

#include "pettis/errors.hpp"

namespace pettis {

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw Error(ErrorCode::config_error, std::string(where) + " must be an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) {
            throw Error(ErrorCode::config_error, "unknown key '" + key + "' in " + std::string(where));
        }
    }
}

IntervalSet interval_from_json(const nlohmann::json& j) {
    // Either a single [lo, hi] pair or a list of pairs.
    if (j.is_array() && j.size() == 2 && j[0].is_number()) {
        return IntervalSet(Interval(j[0].get<double>(), j[1].get<double>()));
    }
    return j.get<IntervalSet>();
}

}  // namespace

std::string_view to_string(CampaignKind kind) {
    switch (kind) {
        case CampaignKind::lower_bound: return "lower-bound";
        case CampaignKind::pairing: return "pairing";
        case CampaignKind::blowup: return "blowup";
        case CampaignKind::halfpower: return "halfpower";
        case CampaignKind::continuous: return "continuous";
        case CampaignKind::bochner: return "bochner";
        case CampaignKind::psi_validate: return "psi-validate";
    }
    return "?";
}

CampaignKind parse_campaign_kind(std::string_view name) {
    for (auto kind : {CampaignKind::lower_bound, CampaignKind::pairing, CampaignKind::blowup,
                      CampaignKind::halfpower, CampaignKind::continuous, CampaignKind::bochner,
                      CampaignKind::psi_validate}) {
        if (to_string(kind) == name) return kind;
    }
    throw Error(ErrorCode::config_error, "unknown campaign kind '" + std::string(name) + "'");
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw Error(ErrorCode::config_error, "unknown format '" + std::string(name) + "'");
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, "model", {"kind", "psi", "K", "p", "rule", "depth", "carriers", "archive",
                                     "n_max", "r_max"});
    try {
        ModelConfig m;
        m.kind = j.value("kind", m.kind);
        if (m.kind != "pettis" && m.kind != "continuous") {
            throw Error(ErrorCode::config_error, "model kind must be pettis or continuous");
        }
        if (j.contains("psi")) m.psi = j["psi"].get<PsiSpec>();
        m.K = j.value("K", m.K);
        if (j.contains("p")) m.p = j["p"].get<NormExponent>();
        if (j.contains("rule")) m.rule = sequence_rule_from_json(j["rule"]);
        m.depth = j.value("depth", m.depth);
        if (j.contains("carriers")) {
            const auto& c = j["carriers"];
            reject_unknown_keys(c, "model.carriers", {"scheme", "params"});
            if (c.contains("scheme")) m.scheme = parse_carrier_scheme(c["scheme"].get<std::string>());
            if (c.contains("params")) {
                reject_unknown_keys(c["params"], "model.carriers.params", {"stages"});
                m.params.cantor_stages = c["params"].value("stages", m.params.cantor_stages);
            }
        }
        m.archive = j.value("archive", m.archive);
        m.n_max = j.value("n_max", m.n_max);
        m.r_max = j.value("r_max", m.r_max);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("model: ") + e.what());
    }
}

CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, "campaign", {"kind", "samples", "sets", "seed", "dyadic_level", "t_values",
                                        "t_grid", "j_min", "j_max", "interval", "deltas", "format",
                                        "out"});
    try {
        CampaignConfig c;
        if (j.contains("kind")) c.kind = parse_campaign_kind(j["kind"].get<std::string>());
        c.samples = j.value("samples", c.samples);
        c.sets = j.value("sets", c.sets);
        c.seed = j.value("seed", c.seed);
        c.dyadic_level = j.value("dyadic_level", c.dyadic_level);
        if (j.contains("t_values")) c.t_values = j["t_values"].get<std::vector<double>>();
        if (j.contains("t_grid")) {
            const auto count = j["t_grid"].get<int>();
            if (count < 1) throw Error(ErrorCode::config_error, "t_grid must be >= 1");
            c.t_values.clear();
            for (int i = 0; i < count; ++i) c.t_values.push_back(static_cast<double>(i) / count);
        }
        c.j_min = j.value("j_min", c.j_min);
        c.j_max = j.value("j_max", c.j_max);
        if (j.contains("interval")) c.interval = interval_from_json(j["interval"]);
        if (j.contains("deltas")) c.deltas = j["deltas"].get<std::vector<double>>();
        if (j.contains("format")) c.format = parse_report_format(j["format"].get<std::string>());
        c.out = j.value("out", c.out);

        if (c.samples < 1) throw Error(ErrorCode::config_error, "samples must be >= 1");
        if (c.sets < 1) throw Error(ErrorCode::config_error, "sets must be >= 1");
        if (!(c.j_min >= 0 && c.j_min < c.j_max && c.j_max <= 40)) {
            throw Error(ErrorCode::config_error, "need 0 <= j_min < j_max <= 40");
        }
        if (c.dyadic_level < 0 || c.dyadic_level > kMaxDyadicLevel) {
            throw Error(ErrorCode::config_error, "dyadic_level out of range");
        }
        for (double t : c.t_values) {
            if (!(t >= 0.0 && t < 1.0)) throw Error(ErrorCode::config_error, "t values must lie in [0, 1)");
        }
        for (double d : c.deltas) {
            if (!(d > 0.0)) throw Error(ErrorCode::config_error, "deltas must be positive");
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("campaign: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config_error) throw;
        throw Error(ErrorCode::config_error, e.what());
    }
}

Config config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, "config", {"model", "campaign"});
    Config cfg;
    if (j.contains("model")) cfg.model = model_config_from_json(j["model"]);
    if (j.contains("campaign")) cfg.campaign = campaign_config_from_json(j["campaign"]);
    return cfg;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::config_error, "cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::config_error, path.string() + ": " + e.what());
    }
}

Config load_config(const std::filesystem::path& path) {
    auto cfg = config_from_json(read_json_file(path));
    if (!cfg.model.archive.empty()) {
        std::filesystem::path archive(cfg.model.archive);
        if (archive.is_relative()) cfg.model.archive = (path.parent_path() / archive).string();
    }
    return cfg;
}

void to_json(nlohmann::json& j, const ModelConfig& m) {
    j = nlohmann::json{{"kind", m.kind},      {"psi", m.psi},     {"K", m.K},
                       {"p", m.p},            {"rule", m.rule},   {"depth", m.depth},
                       {"n_max", m.n_max},    {"r_max", m.r_max}};
    if (!m.continuous()) {
        j["carriers"] = {{"scheme", to_string(m.scheme)}, {"params", {{"stages", m.params.cantor_stages}}}};
    }
}

PettisModel make_pettis_model(const ModelConfig& cfg) {
    if (cfg.continuous()) throw Error(ErrorCode::config_error, "campaign needs a pettis model");
    if (!cfg.archive.empty()) return model_from_archive(read_json_file(cfg.archive));
    return build_model(allocate_carriers(cfg.depth, cfg.scheme, cfg.params), cfg.psi, cfg.K, cfg.p,
                       cfg.rule, cfg.depth, cfg.n_max, cfg.r_max);
}

ContinuousModel make_continuous_model(const ModelConfig& cfg) {
    if (!cfg.continuous()) throw Error(ErrorCode::config_error, "campaign needs a continuous model");
    return build_continuous_model(cfg.psi, cfg.K, cfg.p, cfg.rule, cfg.depth, cfg.n_max, cfg.r_max);
}

}  // namespace pettis
