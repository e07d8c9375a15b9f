#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

enum class Errc {
    non_bivalued,
    non_positive_weight,
    non_positive_value,
    degenerate_k,
    empty_market,
    round_budget_exceeded,
    double_raise,
    empty_transfer_set,
    invariant_violation,
    budget_exceeded,
    lp_size_exceeded,
    parse_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg);
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& msg);

} // namespace fairdiv
