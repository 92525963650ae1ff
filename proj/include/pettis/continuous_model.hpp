#pragma once

#include <vector>

#include <json.hpp>

#include "pettis/psi.hpp"
#include "pettis/sequence_space.hpp"

namespace pettis {

/// f = Σ_{n>=2} c_n f_n with c_{n+2} = 2K ψ(2^{-p_n}), where f_n is the
/// piecewise-linear path through the unit vectors ẽ^n_1, ..., ẽ^n_{2^{p_n}+1}
/// of block n (dimension 2^{p_n} + 1).
class ContinuousModel {
public:
    const PsiSpec& spec() const noexcept { return spec_; }
    const SequenceRule& rule() const noexcept { return summability_.rule(); }
    const ValidationReport& summability() const noexcept { return summability_; }
    const LayoutPtr& layout() const noexcept { return layout_; }
    double K() const noexcept { return K_; }
    int depth() const noexcept { return depth_; }

    /// c_n for 2 <= n <= depth.
    double coefficient(int n) const;
    long long level_exponent(int n) const { return rule().value(n); }
    /// Certified bound on Σ_{n>N} c_n.
    double tail(int N) const;
    /// Σ_{n<=depth} c_n 2^{p_n} 2^{1/p}: Lipschitz constant of the truncation.
    double lipschitz() const;
    /// Smallest |s - t| accepted by check_pair: 2^{-p_{depth-1}}.
    double min_separation() const;

private:
    friend ContinuousModel build_continuous_model(const PsiSpec&, double, NormExponent,
                                                  const SequenceRule&, int, int, double);
    ContinuousModel() = default;

    PsiSpec spec_;
    double K_ = 1.0;
    int depth_ = 0;
    ValidationReport summability_;
    LayoutPtr layout_;
    std::vector<double> c_;  // c_[n], n = 0..depth
};

ContinuousModel build_continuous_model(const PsiSpec& spec, double K, NormExponent p,
                                       const SequenceRule& rule, int depth,
                                       int n_max = kDefaultNMax, double r_max = kDefaultRMax);

BlockVector eval_fn(const ContinuousModel& m, int n, double omega);

struct ContinuousValue {
    BlockVector truncated;
    double tail = 0.0;
};

ContinuousValue eval_f(const ContinuousModel& m, double omega);

struct Separation {
    double distance = 0.0;  // exact norm of the block difference
    int level = 0;          // block used
    double coefficient = 0.0;
};

Separation separation_lower_bound(const ContinuousModel& m, double s, double t);

struct PairCheck {
    bool holds = false;
    double lhs = 0.0;  // truncated ‖f(s) - f(t)‖
    double rhs = 0.0;  // ψ(|s - t|)
    Separation separation;
};

PairCheck check_pair(const ContinuousModel& m, double s, double t);

/// Upper bound on ‖f(s) - f(t)‖ over |s - t| <= delta: lipschitz·delta + 2·tail(depth).
double modulus_bound(const ContinuousModel& m, double delta);

void to_json(nlohmann::json& j, const ContinuousModel& m);

}  // namespace pettis
