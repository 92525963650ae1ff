#include "pettis/psi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pettis/errors.hpp"

namespace pettis {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kAffineCheckSpan = 256;

// Formula values on the family's domain; callers clamp to the threshold.
double sqrt_log_formula(double s, double eps) {
    const double L = std::log(1.0 / s);
    return std::sqrt(s) * std::pow(1.0 / L, 1.0 + eps);
}

double sqrt_loglog_formula(double s, double eps) {
    const double L = std::log(1.0 / s);
    return std::sqrt(s) * (1.0 / L) * std::pow(1.0 / std::log(L), 1.0 + eps);
}

double eval_table(const std::vector<std::pair<double, double>>& knots, double s) {
    if (s >= knots.back().first) return knots.back().second;
    auto it = std::upper_bound(knots.begin(), knots.end(), s,
                               [](double v, const auto& knot) { return v < knot.first; });
    const auto& [s1, v1] = *it;
    const auto& [s0, v0] = *std::prev(it);
    return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
}

void check_spec(const PsiSpec& spec) {
    switch (spec.family) {
        case PsiFamily::power:
            if (!(spec.parameter > 0.0)) {
                throw Error(ErrorCode::invalid_argument, "power exponent must be positive");
            }
            return;
        case PsiFamily::sqrt_log:
        case PsiFamily::sqrt_loglog:
            if (!(spec.parameter > 0.0)) {
                throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
            }
            return;
        case PsiFamily::custom_table: {
            const auto& k = spec.knots;
            if (k.size() < 2 || k.front().first != 0.0) {
                throw Error(ErrorCode::invalid_argument,
                            "custom table needs at least two knots starting at s = 0");
            }
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (!(k[i].second >= 0.0)) {
                    throw Error(ErrorCode::invalid_argument, "custom table values must be >= 0");
                }
                if (i > 0 && !(k[i].first > k[i - 1].first && k[i].second >= k[i - 1].second)) {
                    throw Error(ErrorCode::invalid_argument,
                                "custom table must be strictly increasing in s and "
                                "nondecreasing in value");
                }
            }
            return;
        }
    }
}

}  // namespace

std::string_view to_string(PsiFamily family) {
    switch (family) {
        case PsiFamily::power: return "power";
        case PsiFamily::sqrt_log: return "sqrt-log";
        case PsiFamily::sqrt_loglog: return "sqrt-loglog";
        case PsiFamily::custom_table: return "custom-table";
    }
    return "unknown";
}

PsiSpec PsiSpec::power(double exponent, NormExponent p) {
    PsiSpec s{PsiFamily::power, exponent, p, {}};
    check_spec(s);
    return s;
}

PsiSpec PsiSpec::sqrt_log(double epsilon, NormExponent p) {
    PsiSpec s{PsiFamily::sqrt_log, epsilon, p, {}};
    check_spec(s);
    return s;
}

PsiSpec PsiSpec::sqrt_loglog(double epsilon, NormExponent p) {
    PsiSpec s{PsiFamily::sqrt_loglog, epsilon, p, {}};
    check_spec(s);
    return s;
}

PsiSpec PsiSpec::custom(std::vector<std::pair<double, double>> knots, NormExponent p) {
    PsiSpec s{PsiFamily::custom_table, 0.0, p, std::move(knots)};
    check_spec(s);
    return s;
}

double domain_threshold(const PsiSpec& spec) {
    switch (spec.family) {
        case PsiFamily::sqrt_log: return std::exp(-1.0);
        case PsiFamily::sqrt_loglog: return std::exp(-std::numbers::e);
        default: return std::numeric_limits<double>::infinity();
    }
}

double eval_psi(const PsiSpec& spec, double s) {
    if (!(s >= 0.0)) {
        throw Error(ErrorCode::domain_error, "psi is defined on [0, inf) only");
    }
    if (s == 0.0 && spec.family != PsiFamily::custom_table) return 0.0;
    const double t = std::min(s, domain_threshold(spec));
    switch (spec.family) {
        case PsiFamily::power: return std::pow(s, spec.parameter);
        case PsiFamily::sqrt_log: return sqrt_log_formula(t, spec.parameter);
        case PsiFamily::sqrt_loglog: return sqrt_loglog_formula(t, spec.parameter);
        case PsiFamily::custom_table: return eval_table(spec.knots, s);
    }
    return 0.0;
}

double log2_psi(const PsiSpec& spec, double x) {
    if (std::isnan(x)) throw Error(ErrorCode::domain_error, "log2_psi of NaN");
    if (x == kNegInf) return spec.family == PsiFamily::custom_table
                                 ? std::log2(spec.knots.front().second)
                                 : kNegInf;
    const double threshold = std::log2(domain_threshold(spec));
    const double eps = spec.parameter;
    switch (spec.family) {
        case PsiFamily::power: return spec.parameter * x;
        case PsiFamily::sqrt_log: {
            const double y = std::min(x, threshold);
            const double L = -y * std::numbers::ln2;
            return 0.5 * y - (1.0 + eps) * std::log2(L);
        }
        case PsiFamily::sqrt_loglog: {
            const double y = std::min(x, threshold);
            const double L = -y * std::numbers::ln2;
            return 0.5 * y - std::log2(L) - (1.0 + eps) * std::log2(std::log(L));
        }
        case PsiFamily::custom_table: {
            const double v = eval_table(spec.knots, std::exp2(x));
            return v > 0.0 ? std::log2(v) : kNegInf;
        }
    }
    return kNegInf;
}

SequenceRule SequenceRule::affine(double a, long long b) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw Error(ErrorCode::invalid_argument, "affine rule needs a finite a > 0");
    }
    SequenceRule rule;
    rule.a_ = a;
    rule.b_ = b;
    rule.check_increasing();
    return rule;
}

SequenceRule SequenceRule::list(std::vector<long long> values) {
    if (!values.empty() && values.front() == 0) values.erase(values.begin());
    if (values.empty()) throw Error(ErrorCode::invalid_argument, "sequence list is empty");
    SequenceRule rule;
    rule.list_ = std::move(values);
    rule.check_increasing();
    return rule;
}

long long SequenceRule::value(int n) const {
    if (n < 0) throw Error(ErrorCode::out_of_range, "sequence index must be >= 0");
    if (n == 0) return 0;
    if (!list_.empty()) {
        if (static_cast<std::size_t>(n) > list_.size()) {
            throw Error(ErrorCode::out_of_range,
                        "sequence list has no entry p_" + std::to_string(n));
        }
        return list_[static_cast<std::size_t>(n) - 1];
    }
    // The small guard keeps ⌈a·n⌉ from jumping on representation noise.
    return static_cast<long long>(std::ceil(a_ * n - 1e-9)) + b_;
}

std::optional<int> SequenceRule::last_index() const {
    if (list_.empty()) return std::nullopt;
    return static_cast<int>(list_.size());
}

void SequenceRule::check_increasing() const {
    const int last = last_index().value_or(kAffineCheckSpan);
    for (int n = 1; n <= last; ++n) {
        if (value(n) <= value(n - 1)) {
            throw Error(ErrorCode::invalid_argument,
                        "sequence p_n must be strictly increasing with p_0 = 0 (fails at n = " +
                            std::to_string(n) + ")");
        }
    }
}

double ValidationReport::term(int n) const {
    if (n < 1) throw Error(ErrorCode::out_of_range, "terms are indexed from 1");
    if (!rule_) throw Error(ErrorCode::invalid_argument, "report carries no rule");
    if (n > available_) {
        // Past an explicit list only the certified ratio is known.
        return term(available_) * std::pow(r, n - available_);
    }
    const double log2_arg = log2_scale_ - static_cast<double>(rule_->value(n - 1));
    const double lt = log2_psi(spec_, log2_arg) +
                      static_cast<double>(rule_->value(n)) * p_.reciprocal();
    return std::exp2(lt);
}

double ValidationReport::tail_sum(int m) const {
    if (!pass) throw Error(ErrorCode::growth_failed, "no certificate for a failed series");
    m = std::max(m, 1);
    double head = 0.0;
    int start = m;
    if (m < n0) {
        for (int j = m; j < n0; ++j) head += term(j);
        start = n0;
    }
    return head + term(start) / (1.0 - r);
}

ValidationReport validate_series(const PsiSpec& spec, NormExponent p, const SequenceRule& rule,
                                 double scale, int n_max, double r_max) {
    check_spec(spec);
    if (!(r_max > 0.0 && r_max < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "r_max must lie in (0, 1)");
    }
    if (!(scale > 0.0)) throw Error(ErrorCode::invalid_argument, "scale must be positive");
    const int available = rule.last_index().value_or(std::numeric_limits<int>::max());
    n_max = std::min(n_max, available - 1);
    if (n_max < 2 || n_max > kDefaultNMax) {
        throw Error(ErrorCode::invalid_argument, "n_max must lie in [2, 64] (list too short?)");
    }

    ValidationReport report;
    report.spec_ = spec;
    report.rule_ = rule;
    report.p_ = p;
    report.log2_scale_ = std::log2(scale);
    report.available_ = rule.last_index().value_or(std::numeric_limits<int>::max());
    report.n_max = n_max;
    report.r_max = r_max;

    std::vector<double> log_terms(static_cast<std::size_t>(n_max) + 2, kNegInf);
    report.terms.assign(log_terms.size(), 0.0);
    for (int n = 1; n <= n_max + 1; ++n) {
        const double arg = report.log2_scale_ - static_cast<double>(rule.value(n - 1));
        log_terms[n] = log2_psi(spec, arg) + static_cast<double>(rule.value(n)) * p.reciprocal();
        report.terms[n] = std::exp2(log_terms[n]);
    }
    report.ratios.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int n = 1; n <= n_max; ++n) {
        const double a = log_terms[n];
        const double b = log_terms[n + 1];
        if (a == kNegInf) {
            report.ratios[n] = b == kNegInf ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            report.ratios[n] = std::exp2(b - a);
        }
    }

    int last_bad = 0;
    for (int n = 1; n <= n_max; ++n) {
        if (!(report.ratios[n] <= r_max)) last_bad = n;
    }
    const int n0 = last_bad + 1;
    report.pass = n0 <= n_max / 2;
    if (report.pass) {
        report.n0 = n0;
        report.r = *std::max_element(report.ratios.begin() + n0, report.ratios.end());
    } else {
        report.n0 = 0;
        report.r = *std::max_element(report.ratios.begin() + 1, report.ratios.end());
    }
    return report;
}

ValidationReport validate_growth(const PsiSpec& spec, NormExponent p, const SequenceRule& rule,
                                 int n_max, double r_max) {
    return validate_series(spec, p, rule, 4.0, n_max, r_max);
}

ValidationReport validate_summability(const PsiSpec& spec, const SequenceRule& rule, int n_max,
                                      double r_max) {
    return validate_series(spec, NormExponent::infinity(), rule, 1.0, n_max, r_max);
}

double CoefficientTable::coefficient(int m) const {
    if (m < 0 || m > depth) {
        throw Error(ErrorCode::out_of_range, "coefficient index " + std::to_string(m));
    }
    return c[static_cast<std::size_t>(m)];
}

CoefficientTable coefficients(const PsiSpec& spec, double K, NormExponent p,
                              const SequenceRule& rule, int depth, int n_max, double r_max) {
    if (!(K >= 1.0)) throw Error(ErrorCode::invalid_argument, "K must be >= 1");
    if (depth < 1 || depth > 62) {
        throw Error(ErrorCode::invalid_argument, "depth must lie in [1, 62]");
    }
    auto validation = validate_growth(spec, p, rule, n_max, r_max);
    if (!validation.pass) {
        throw Error(ErrorCode::growth_failed,
                    "growth condition not certified (largest ratio " +
                        std::to_string(validation.r) + " > r_max " + std::to_string(r_max) + ")");
    }
    CoefficientTable table;
    table.spec = spec;
    table.K = K;
    table.p = p;
    table.depth = depth;
    table.validation = std::move(validation);
    table.c.assign(static_cast<std::size_t>(depth) + 1, 0.0);
    table.pn.push_back(0);
    const int last = rule.last_index().value_or(std::numeric_limits<int>::max());
    for (int n = 1; n <= last && rule.value(n) <= depth; ++n) {
        const auto prev = rule.value(n - 1);
        const auto level = rule.value(n);
        table.pn.push_back(level);
        table.c[static_cast<std::size_t>(level)] =
            2.0 * K * eval_psi(spec, 4.0 * std::ldexp(1.0, static_cast<int>(-prev)));
    }
    return table;
}

double tail_bound(const CoefficientTable& table, int N) {
    const auto& v = table.validation;
    const auto& rule = v.rule();
    const int last = rule.last_index().value_or(std::numeric_limits<int>::max());
    int m = 1;
    while (m <= last && rule.value(m) <= N) ++m;
    return 2.0 * table.K * v.tail_sum(m);
}

void to_json(nlohmann::json& j, const PsiSpec& spec) {
    j = nlohmann::json{{"family", to_string(spec.family)}, {"p", spec.p}};
    switch (spec.family) {
        case PsiFamily::power: j["exponent"] = spec.parameter; break;
        case PsiFamily::sqrt_log:
        case PsiFamily::sqrt_loglog: j["epsilon"] = spec.parameter; break;
        case PsiFamily::custom_table: {
            auto knots = nlohmann::json::array();
            for (const auto& [s, v] : spec.knots) knots.push_back({s, v});
            j["knots"] = std::move(knots);
            break;
        }
    }
}

void from_json(const nlohmann::json& j, PsiSpec& spec) {
    try {
        const auto family = j.at("family").get<std::string>();
        NormExponent p{2.0};
        if (j.contains("p")) p = j.at("p").get<NormExponent>();
        if (family == "power") {
            spec = PsiSpec::power(j.at("exponent").get<double>(), p);
        } else if (family == "sqrt-log") {
            spec = PsiSpec::sqrt_log(j.at("epsilon").get<double>(), p);
        } else if (family == "sqrt-loglog") {
            spec = PsiSpec::sqrt_loglog(j.at("epsilon").get<double>(), p);
        } else if (family == "custom-table") {
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : j.at("knots")) {
                knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
            }
            spec = PsiSpec::custom(std::move(knots), p);
        } else {
            throw Error(ErrorCode::config_error, "unknown psi family '" + family + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("psi spec: ") + e.what());
    }
}

void to_json(nlohmann::json& j, const SequenceRule& rule) {
    if (rule.is_affine()) {
        j = nlohmann::json{{"kind", "affine"}, {"a", rule.a()}, {"b", rule.b()}};
    } else {
        j = nlohmann::json{{"kind", "list"}, {"list", rule.values()}};
    }
}

SequenceRule sequence_rule_from_json(const nlohmann::json& j) {
    try {
        if (j.contains("list")) return SequenceRule::list(j.at("list").get<std::vector<long long>>());
        const auto kind = j.value("kind", std::string("affine"));
        if (kind != "affine") throw Error(ErrorCode::config_error, "unknown rule kind '" + kind + "'");
        return SequenceRule::affine(j.value("a", 1.0), j.value("b", 0LL));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("sequence rule: ") + e.what());
    }
}

void to_json(nlohmann::json& j, const CoefficientTable& table) {
    nlohmann::json levels = nlohmann::json::object();
    for (std::size_t n = 1; n < table.pn.size(); ++n) {
        levels[std::to_string(table.pn[n])] = table.c[static_cast<std::size_t>(table.pn[n])];
    }
    j = nlohmann::json{{"K", table.K},
                       {"p", table.p},
                       {"depth", table.depth},
                       {"pn", table.pn},
                       {"c", std::move(levels)},
                       {"r", table.r()},
                       {"n0", table.n0()},
                       {"tail_bound_at_depth", tail_bound(table, table.depth)}};
}

}  // namespace pettis
