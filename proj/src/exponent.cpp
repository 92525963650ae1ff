#include "pettis/exponent.hpp"

#include "pettis/errors.hpp"

namespace pettis {

NormExponent::NormExponent(double p) : p_(p) {
    if (!(p >= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "norm exponent must lie in [1, inf]");
    }
}

NormExponent NormExponent::conjugate() const {
    if (is_infinite()) return {1.0};
    if (p_ == 1.0) return infinity();
    return {p_ / (p_ - 1.0)};
}

std::string to_string(const NormExponent& p) {
    if (p.is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p.value());
    return buf;
}

void to_json(nlohmann::json& j, const NormExponent& p) {
    if (p.is_infinite()) {
        j = "inf";
    } else {
        j = p.value();
    }
}

void from_json(const nlohmann::json& j, NormExponent& p) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Infinity") {
            p = NormExponent::infinity();
            return;
        }
        throw Error(ErrorCode::config_error, "norm exponent '" + s + "' is not a number or 'inf'");
    }
    if (!j.is_number()) throw Error(ErrorCode::config_error, "norm exponent must be a number");
    p = NormExponent(j.get<double>());
}

}  // namespace pettis
