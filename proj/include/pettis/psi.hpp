#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pettis/exponent.hpp"

namespace pettis {

enum class PsiFamily { power, sqrt_log, sqrt_loglog, custom_table };

std::string_view to_string(PsiFamily family);

/// A nondecreasing gauge ψ: [0, ∞) → [0, ∞).
///
/// power(e):         s^e
/// sqrt-log(ε):      s^{1/2} (1/ln(1/s))^{1+ε}                 for s < 1/e
/// sqrt-loglog(ε):   s^{1/2} (1/ln(1/s)) (1/ln ln(1/s))^{1+ε}  for s < e^{-e}
/// custom-table:     piecewise linear through knots starting at s = 0
///
/// The log families are held constant at their threshold value above the
/// threshold, which keeps them total and nondecreasing on [0, ∞).
struct PsiSpec {
    PsiFamily family = PsiFamily::power;
    double parameter = 0.75;  // exponent for power, ε for the log families
    NormExponent p{2.0};
    std::vector<std::pair<double, double>> knots;

    static PsiSpec power(double exponent, NormExponent p = 2.0);
    static PsiSpec sqrt_log(double epsilon, NormExponent p = 2.0);
    static PsiSpec sqrt_loglog(double epsilon, NormExponent p = 2.0);
    static PsiSpec custom(std::vector<std::pair<double, double>> knots, NormExponent p = 2.0);
};

/// Upper end of the interval on which the family's formula is used.
double domain_threshold(const PsiSpec& spec);

double eval_psi(const PsiSpec& spec, double s);

/// log2 ψ(2^x), computed without forming 2^x so that deep levels neither
/// underflow nor lose relative precision. Returns -inf where ψ vanishes.
double log2_psi(const PsiSpec& spec, double x);

/// p_n for n >= 0, with p_0 = 0. Affine rules give p_n = ⌈a·n⌉ + b;
/// explicit lists hold p_1, p_2, ... (a leading 0 is read as p_0).
class SequenceRule {
public:
    static SequenceRule affine(double a, long long b = 0);
    static SequenceRule list(std::vector<long long> values);

    long long value(int n) const;
    /// Largest index available (nullopt for unbounded affine rules).
    std::optional<int> last_index() const;

    bool is_affine() const noexcept { return list_.empty(); }
    double a() const noexcept { return a_; }
    long long b() const noexcept { return b_; }
    const std::vector<long long>& values() const noexcept { return list_; }

private:
    SequenceRule() = default;
    void check_increasing() const;

    double a_ = 1.0;
    long long b_ = 0;
    std::vector<long long> list_;
};

/// Certified eventual-ratio test for Σ_n ψ(scale·2^{-p_{n-1}}) (2^{p_n})^{1/p}.
///
/// Passing certifies term_{n+1} <= r·term_n for n0 <= n <= n_max, which gives
/// the geometric bound Σ_{j>=m} term_j <= term_m / (1 - r) for m >= n0.
class ValidationReport {
public:
    bool pass = false;
    int n0 = 0;
    double r = 1.0;      // largest observed ratio on [n0, n_max] when passing
    double r_max = 0.0;
    int n_max = 0;
    std::vector<double> terms;   // terms[n], n = 1..n_max+1 (terms[0] unused)
    std::vector<double> ratios;  // ratios[n] = terms[n+1] / terms[n], n = 1..n_max

    double term(int n) const;
    /// Upper bound on Σ_{j>=m} term_j. Requires pass.
    double tail_sum(int m) const;

    const SequenceRule& rule() const { return *rule_; }
    const PsiSpec& spec() const noexcept { return spec_; }

private:
    friend ValidationReport validate_series(const PsiSpec&, NormExponent, const SequenceRule&,
                                            double, int, double);
    PsiSpec spec_;
    std::optional<SequenceRule> rule_;
    NormExponent p_{2.0};
    double log2_scale_ = 2.0;
    int available_ = 0;
};

inline constexpr int kDefaultNMax = 64;
inline constexpr double kDefaultRMax = 0.95;

ValidationReport validate_series(const PsiSpec& spec, NormExponent p, const SequenceRule& rule,
                                 double scale, int n_max, double r_max);

/// Growth condition with the strengthened argument 4·2^{-p_{n-1}}.
ValidationReport validate_growth(const PsiSpec& spec, NormExponent p, const SequenceRule& rule,
                                 int n_max = kDefaultNMax, double r_max = kDefaultRMax);

/// Summability of ψ(2^{-p_n}), n >= 0 (terms indexed from 1 as ψ(2^{-p_{n-1}})).
ValidationReport validate_summability(const PsiSpec& spec, const SequenceRule& rule,
                                      int n_max = kDefaultNMax, double r_max = kDefaultRMax);

/// c_m = 2K ψ(4·2^{-p_{n-1}}) when m = p_n, zero otherwise, for m <= depth.
struct CoefficientTable {
    PsiSpec spec;
    double K = 1.0;
    NormExponent p{2.0};
    int depth = 0;
    std::vector<long long> pn;  // p_0 .. p_M with p_M <= depth
    std::vector<double> c;      // c[m], m = 0..depth
    ValidationReport validation;

    double r() const noexcept { return validation.r; }
    int n0() const noexcept { return validation.n0; }
    /// M: the largest index with p_M <= depth.
    int top_index() const noexcept { return static_cast<int>(pn.size()) - 1; }
    double coefficient(int m) const;
};

CoefficientTable coefficients(const PsiSpec& spec, double K, NormExponent p,
                              const SequenceRule& rule, int depth, int n_max = kDefaultNMax,
                              double r_max = kDefaultRMax);

/// Certified B(N) >= Σ_{p_m > N} c_{p_m} (2^{p_m})^{1/p}.
double tail_bound(const CoefficientTable& table, int N);

void to_json(nlohmann::json& j, const PsiSpec& spec);
void from_json(const nlohmann::json& j, PsiSpec& spec);
void to_json(nlohmann::json& j, const SequenceRule& rule);
SequenceRule sequence_rule_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const CoefficientTable& table);

}  // namespace pettis
