#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

namespace pettis {

/// Norm exponent p in [1, ∞]. The reciprocal 1/∞ is taken to be 0.
class NormExponent {
public:
    NormExponent() = default;
    NormExponent(double p);  // NOLINT: implicit from a plain number reads naturally

    static NormExponent infinity() { return {std::numeric_limits<double>::infinity()}; }

    double value() const noexcept { return p_; }
    bool is_infinite() const noexcept { return std::isinf(p_); }
    double reciprocal() const noexcept { return is_infinite() ? 0.0 : 1.0 / p_; }
    /// Hölder conjugate q with 1/p + 1/q = 1.
    NormExponent conjugate() const;

    friend bool operator==(const NormExponent&, const NormExponent&) = default;

private:
    double p_ = 2.0;
};

std::string to_string(const NormExponent& p);
void to_json(nlohmann::json& j, const NormExponent& p);
void from_json(const nlohmann::json& j, NormExponent& p);

}  // namespace pettis
