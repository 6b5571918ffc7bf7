#include "metaseal/report.hpp"

#include "metaseal/errors.hpp"

namespace metaseal {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::io:
        return "IO_ERROR";
    case Errc::crypto:
        return "CRYPTO_ERROR";
    case Errc::canonical:
        return "NOT_CANONICAL";
    case Errc::malformed:
        return "MALFORMED";
    case Errc::bad_argument:
        return "BAD_ARGUMENT";
    case Errc::unknown_dependency:
        return "UNKNOWN_DEPENDENCY";
    case Errc::duplicate_id:
        return "DUPLICATE_ID";
    case Errc::missing_stage:
        return "MISSING_STAGE";
    case Errc::unknown_id:
        return "UNKNOWN_ID";
    case Errc::immutable_conflict:
        return "IMMUTABLE_CONFLICT";
    case Errc::missing_record:
        return "MISSING_RECORD";
    case Errc::data_mismatch:
        return "DATA_MISMATCH";
    case Errc::disclosure_mismatch:
        return "DISCLOSURE_MISMATCH";
    }
    return "UNKNOWN";
}

std::string_view component_code(Component c) noexcept
{
    switch (c) {
    case Component::raw:
        return "RAW";
    case Component::processed:
        return "PROCESSED";
    case Component::source:
        return "SOURCE";
    case Component::pipeline:
        return "PIPELINE";
    case Component::architecture:
        return "ARCHITECTURE";
    case Component::version:
        return "VERSION";
    case Component::config:
        return "CONFIG";
    case Component::checkpoints:
        return "CHECKPOINTS";
    case Component::weights:
        return "WEIGHTS";
    case Component::metrics:
        return "METRICS";
    case Component::test_data:
        return "TEST_DATA";
    case Component::environment:
        return "ENVIRONMENT";
    case Component::monitoring:
        return "MONITORING";
    case Component::maintenance:
        return "MAINTENANCE";
    case Component::transition:
        return "TRANSITION";
    case Component::history:
        return "HISTORY";
    case Component::dependency:
        return "DEPENDENCY";
    case Component::signature:
        return "SIGNATURE";
    case Component::meta_signature:
        return "META_SIGNATURE";
    case Component::seals_hash:
        return "SEALS_HASH";
    case Component::component_seals:
        return "COMPONENT_SEALS";
    case Component::dependency_existence:
        return "DEPENDENCY_EXISTENCE";
    case Component::acyclicity:
        return "ACYCLICITY";
    case Component::missing_record:
        return "MISSING_RECORD";
    case Component::malformed_record:
        return "MALFORMED_RECORD";
    }
    return "UNKNOWN";
}

std::string_view tier_name(VerificationTier tier) noexcept
{
    switch (tier) {
    case VerificationTier::signature_only:
        return "signature-only";
    case VerificationTier::full:
        return "full";
    case VerificationTier::meta:
        return "meta";
    }
    return "unknown";
}

void VerificationReport::add(Component component, bool passed, std::string detail)
{
    checks.push_back(CheckResult{component, passed, std::move(detail)});
}

bool VerificationReport::ok() const noexcept
{
    for (const CheckResult& check : checks)
        if (!check.passed)
            return false;
    return true;
}

const CheckResult* VerificationReport::first_failure() const noexcept
{
    for (const CheckResult& check : checks)
        if (!check.passed)
            return &check;
    return nullptr;
}

Document VerificationReport::to_document() const
{
    Document list = Document::array();
    for (const CheckResult& check : checks) {
        Document entry = Document::object();
        entry["component"] = std::string(component_code(check.component));
        entry["passed"] = check.passed;
        if (!check.detail.empty())
            entry["detail"] = check.detail;
        list.push_back(std::move(entry));
    }
    Document doc = Document::object();
    doc["tier"] = std::string(tier_name(tier));
    doc["checks"] = std::move(list);
    doc["passed"] = ok();
    return doc;
}

} // namespace metaseal
