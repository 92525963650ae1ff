#include "pettis/continuous_model.hpp"

#include <cmath>
#include <string>

#include "pettis/errors.hpp"
#include "pettis/interval.hpp"

namespace pettis {

namespace {

void check_point(double omega) {
    if (!(omega >= 0.0 && omega < 1.0)) {
        throw Error(ErrorCode::out_of_range, "point must lie in [0, 1)");
    }
}

// Index of the cell of width 2^-P containing ω, plus the weight on its left
// unit vector.
std::pair<std::uint64_t, double> locate(long long P, double omega) {
    const auto k = cell_index(static_cast<int>(P), omega);
    const double alpha = static_cast<double>(k) - std::ldexp(omega, static_cast<int>(P));
    return {k, std::clamp(alpha, 0.0, 1.0)};
}

}  // namespace

double ContinuousModel::coefficient(int n) const {
    if (n < 2 || n > depth_) {
        throw Error(ErrorCode::level_out_of_range, "continuous level " + std::to_string(n));
    }
    return c_[static_cast<std::size_t>(n)];
}

double ContinuousModel::tail(int N) const {
    // c_n = 2K·term_{n-1}, so Σ_{n>N} c_n = 2K Σ_{j>=N} term_j.
    return 2.0 * K_ * summability_.tail_sum(N);
}

double ContinuousModel::lipschitz() const {
    const double edge = std::exp2(layout_->p().reciprocal());
    double total = 0.0;
    for (int n = 2; n <= depth_; ++n) {
        total += c_[static_cast<std::size_t>(n)] * std::ldexp(1.0, static_cast<int>(rule().value(n))) * edge;
    }
    return total;
}

double ContinuousModel::min_separation() const {
    return std::ldexp(1.0, static_cast<int>(-rule().value(depth_ - 1)));
}

ContinuousModel build_continuous_model(const PsiSpec& spec, double K, NormExponent p,
                                       const SequenceRule& rule, int depth, int n_max,
                                       double r_max) {
    if (!(K >= 1.0)) throw Error(ErrorCode::invalid_argument, "K must be >= 1");
    if (depth < 3) throw Error(ErrorCode::invalid_argument, "continuous depth must be >= 3");
    if (rule.value(0) != 0) throw Error(ErrorCode::invalid_argument, "sequence must start at p_0 = 0");
    if (auto last = rule.last_index(); last && *last < depth) {
        throw Error(ErrorCode::invalid_argument, "sequence list shorter than depth");
    }
    if (rule.value(depth) > 62) {
        throw Error(ErrorCode::level_overflow, "p_depth exceeds 62");
    }
    auto report = validate_summability(spec, rule, n_max, r_max);
    if (!report.pass) {
        throw Error(ErrorCode::growth_failed, "summability of ψ(2^-p_n) not certified");
    }

    ContinuousModel m;
    m.spec_ = spec;
    m.K_ = K;
    m.depth_ = depth;
    m.summability_ = std::move(report);
    std::vector<std::uint64_t> dims(static_cast<std::size_t>(depth) + 1, 0);
    m.c_.assign(static_cast<std::size_t>(depth) + 1, 0.0);
    for (int n = 2; n <= depth; ++n) {
        dims[static_cast<std::size_t>(n)] = (std::uint64_t{1} << rule.value(n)) + 1;
        m.c_[static_cast<std::size_t>(n)] =
            2.0 * K * eval_psi(spec, std::ldexp(1.0, static_cast<int>(-rule.value(n - 2))));
    }
    m.layout_ = BlockLayout::make(p, std::move(dims));
    return m;
}

BlockVector eval_fn(const ContinuousModel& m, int n, double omega) {
    if (n < 2 || n > m.depth()) {
        throw Error(ErrorCode::level_out_of_range, "continuous level " + std::to_string(n));
    }
    check_point(omega);
    const auto [k, alpha] = locate(m.level_exponent(n), omega);
    return BlockVector::from_coords(m.layout(), {{n, k, alpha}, {n, k + 1, 1.0 - alpha}});
}

ContinuousValue eval_f(const ContinuousModel& m, double omega) {
    check_point(omega);
    std::vector<Coordinate> coords;
    for (int n = 2; n <= m.depth(); ++n) {
        const auto [k, alpha] = locate(m.level_exponent(n), omega);
        const double c = m.coefficient(n);
        coords.push_back({n, k, c * alpha});
        coords.push_back({n, k + 1, c * (1.0 - alpha)});
    }
    return {BlockVector::from_coords(m.layout(), coords), m.tail(m.depth())};
}

Separation separation_lower_bound(const ContinuousModel& m, double s, double t) {
    check_point(s);
    check_point(t);
    if (s == t) throw Error(ErrorCode::invalid_argument, "separation needs s != t");
    const double d = std::abs(s - t);
    if (d < m.min_separation()) {
        throw Error(ErrorCode::pair_too_close, "|s - t| below 2^-p_{depth-1}");
    }
    // 2^{-p_n} < d <= 2^{-p_{n-1}}
    int n = 1;
    while (std::ldexp(1.0, static_cast<int>(-m.level_exponent(n))) >= d) ++n;
    int level = n + 1;
    if (level > m.depth()) {
        // Only at d = 2^{-p_{depth-1}} exactly; block n still separates since the
        // cells lie at least two widths apart and c_n >= c_{n+1}.
        level = n;
    }
    const auto diff = subtract(eval_fn(m, level, s), eval_fn(m, level, t));
    const double c = m.coefficient(level);
    return {c * norm(diff), level, c};
}

PairCheck check_pair(const ContinuousModel& m, double s, double t) {
    PairCheck out;
    out.separation = separation_lower_bound(m, s, t);
    out.lhs = norm(subtract(eval_f(m, s).truncated, eval_f(m, t).truncated));
    out.rhs = eval_psi(m.spec(), std::abs(s - t));
    out.holds = out.lhs >= out.rhs - 1e-12;
    return out;
}

double modulus_bound(const ContinuousModel& m, double delta) {
    return m.lipschitz() * delta + 2.0 * m.tail(m.depth());
}

void to_json(nlohmann::json& j, const ContinuousModel& m) {
    auto coeffs = nlohmann::json::object();
    for (int n = 2; n <= m.depth(); ++n) coeffs[std::to_string(n)] = m.coefficient(n);
    j = nlohmann::json{{"kind", "continuous"},
                       {"psi", m.spec()},
                       {"K", m.K()},
                       {"p", m.layout()->p()},
                       {"rule", m.rule()},
                       {"depth", m.depth()},
                       {"c", std::move(coeffs)},
                       {"r", m.summability().r},
                       {"tail_at_depth", m.tail(m.depth())},
                       {"lipschitz", m.lipschitz()}};
}

}  // namespace pettis
