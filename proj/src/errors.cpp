#include "pettis/errors.hpp"

namespace pettis {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::level_overflow: return "level-overflow";
        case ErrorCode::degenerate_interval: return "degenerate-interval";
        case ErrorCode::allocation_exhausted: return "allocation-exhausted";
        case ErrorCode::out_of_range: return "out-of-range";
        case ErrorCode::domain_error: return "domain-error";
        case ErrorCode::growth_failed: return "growth-failed";
        case ErrorCode::depth_mismatch: return "depth-mismatch";
        case ErrorCode::layout_mismatch: return "layout-mismatch";
        case ErrorCode::support_exceeds_depth: return "support-exceeds-depth";
        case ErrorCode::level_out_of_range: return "level-out-of-range";
        case ErrorCode::pair_too_close: return "pair-too-close";
        case ErrorCode::depth_insufficient: return "depth-insufficient";
        case ErrorCode::zero_measure: return "zero-measure";
        case ErrorCode::disjointness_violated: return "disjointness violated";
        case ErrorCode::config_error: return "config-error";
    }
    return "unknown";
}

}  // namespace pettis
