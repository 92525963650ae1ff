#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pettis {

enum class ErrorCode {
    invalid_argument,
    level_overflow,
    degenerate_interval,
    allocation_exhausted,
    out_of_range,
    domain_error,
    growth_failed,
    depth_mismatch,
    layout_mismatch,
    support_exceeds_depth,
    level_out_of_range,
    pair_too_close,
    depth_insufficient,
    zero_measure,
    disjointness_violated,
    config_error,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so the CLI can map it to
// an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pettis
