#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "metaseal/canonical.hpp"

namespace metaseal {

/// Stable component codes for verification outcomes. Stage-seal checks use
/// the first block; meta-seal checks the second.
enum class Component {
    raw,
    processed,
    source,
    pipeline,
    architecture,
    version,
    config,
    checkpoints,
    weights,
    metrics,
    test_data,
    environment,
    monitoring,
    maintenance,
    transition,
    history,
    dependency,
    signature,

    meta_signature,
    seals_hash,
    component_seals,
    dependency_existence,
    acyclicity,
    missing_record,
    malformed_record,
};

std::string_view component_code(Component c) noexcept;

enum class VerificationTier { signature_only, full, meta };

std::string_view tier_name(VerificationTier tier) noexcept;

struct CheckResult {
    Component component;
    bool passed;
    std::string detail;
};

/// Ordered list of performed checks. All outcomes are entries; verification
/// never throws for content reasons.
struct VerificationReport {
    VerificationTier tier = VerificationTier::signature_only;
    std::vector<CheckResult> checks;

    void add(Component component, bool passed, std::string detail = {});
    bool ok() const noexcept;
    const CheckResult* first_failure() const noexcept;
    Document to_document() const;
};

} // namespace metaseal
