#include "fairdiv/error.hpp"

namespace fairdiv {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::non_bivalued: return "NonBivalued";
    case Errc::non_positive_weight: return "NonPositiveWeight";
    case Errc::non_positive_value: return "NonPositiveValue";
    case Errc::degenerate_k: return "DegenerateK";
    case Errc::empty_market: return "EmptyMarket";
    case Errc::round_budget_exceeded: return "RoundBudgetExceeded";
    case Errc::double_raise: return "DoubleRaise";
    case Errc::empty_transfer_set: return "EmptyTransferSet";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::lp_size_exceeded: return "LPSizeExceeded";
    case Errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& msg)
    : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace fairdiv
