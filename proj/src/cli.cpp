#include "pettis/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pettis/campaigns.hpp"
#include "pettis/config.hpp"
#include "pettis/errors.hpp"

namespace pettis {

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string archive;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::string format;
};

void add_common(CLI::App* cmd, Options& o, bool campaign) {
    cmd->add_option("--config", o.config, "config JSON file")->required();
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (campaign) {
        cmd->add_option("--archive", o.archive, "load the model from a model archive");
        cmd->add_option("--seed", o.seed, "override the campaign seed");
        cmd->add_option("--samples", o.samples, "override the sample count");
    }
}

Config resolve(const Options& o, std::optional<CampaignKind> kind) {
    auto cfg = load_config(o.config);
    if (kind) cfg.campaign.kind = *kind;
    if (!o.archive.empty()) cfg.model.archive = o.archive;
    if (o.seed) cfg.campaign.seed = *o.seed;
    if (o.samples) {
        if (*o.samples < 1) throw Error(ErrorCode::config_error, "samples must be >= 1");
        cfg.campaign.samples = *o.samples;
    }
    if (!o.format.empty()) cfg.campaign.format = parse_report_format(o.format);
    if (!o.out.empty()) cfg.campaign.out = o.out;
    return cfg;
}

int run_report(const Config& cfg) {
    const auto report = run_campaign(cfg);
    write_report(report, cfg.campaign.out, cfg.campaign.format);
    std::cerr << report.campaign << ": " << report.main.rows.size() << " rows, " << report.violations
              << " violation(s)\n";
    return report.pass() ? 0 : 1;
}

int run_build(const Options& o) {
    const auto cfg = resolve(o, std::nullopt);
    const auto path = o.out.empty() ? cfg.campaign.out : o.out;
    nlohmann::json doc;
    int status = 0;
    if (cfg.model.continuous()) {
        doc = make_continuous_model(cfg.model);
    } else {
        const auto model = make_pettis_model(cfg.model);
        const auto check = verify_disjointness(model.carriers(), 10);
        doc = model;
        doc["disjointness"] = {{"pass", check.pass},
                               {"carriers_checked", check.carriers_checked},
                               {"violations", check.violation_count}};
        std::cerr << "build: depth " << model.depth() << ", " << check.carriers_checked
                  << " carriers, " << check.violation_count << " violation(s)\n";
        if (!check.pass) {
            for (const auto& v : check.violations) std::cerr << "  " << describe(v) << '\n';
            status = 1;
        }
    }
    const auto text = doc.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::config_error, "cannot write '" + path + "'");
        out << text;
    }
    return status;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Constructs Pettis-integrable counterexamples in l_p block spaces and verifies them"};
    app.name("pettis-forge");
    app.require_subcommand(1);

    Options opts;
    std::optional<CampaignKind> kind;

    auto* psi = app.add_subcommand("psi", "gauge function tools");
    psi->require_subcommand(1);
    auto* validate = psi->add_subcommand("validate", "certify the growth or summability series");
    add_common(validate, opts, false);
    validate->callback([&] { kind = CampaignKind::psi_validate; });

    auto* build = app.add_subcommand("build", "build a model and write its archive");
    add_common(build, opts, false);

    auto* verify = app.add_subcommand("verify", "run a verification campaign");
    verify->require_subcommand(1);
    for (auto k : {CampaignKind::lower_bound, CampaignKind::pairing, CampaignKind::blowup,
                   CampaignKind::halfpower, CampaignKind::continuous, CampaignKind::bochner}) {
        auto* cmd = verify->add_subcommand(std::string(to_string(k)));
        add_common(cmd, opts, true);
        cmd->callback([&kind, k] { kind = k; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build->parsed()) return run_build(opts);
        return run_report(resolve(opts, kind));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace pettis
