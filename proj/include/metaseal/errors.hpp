#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metaseal {

/// Stable error codes surfaced by the library. The CLI maps these onto its
/// exit-code contract; the code name is what appears in diagnostics.
enum class Errc {
    io,
    crypto,
    canonical,
    malformed,
    bad_argument,
    unknown_dependency,
    duplicate_id,
    missing_stage,
    unknown_id,
    immutable_conflict,
    missing_record,
    data_mismatch,
    disclosure_mismatch,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }
    std::string_view code_name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

} // namespace metaseal
