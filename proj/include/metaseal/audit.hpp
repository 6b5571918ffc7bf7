#pragma once

#include <optional>
#include <string>
#include <vector>

#include "metaseal/meta_seal.hpp"
#include "metaseal/report.hpp"

namespace metaseal {

enum class Verdict { verified, tampered, incomplete };

std::string_view verdict_name(Verdict v) noexcept;

/// VERIFIED iff every performed check passed; TAMPERED iff any
/// signature/digest check failed; INCOMPLETE otherwise (missing
/// records/stages).
Verdict classify(const VerificationReport& report) noexcept;

struct SealAuditEntry {
    std::string seal_id;
    SealStage stage = SealStage::data_collection;
    Timestamp created_at{0};
    std::string created_by;
    VerificationTier tier = VerificationTier::signature_only;
    bool passed = false;
    std::string failure; // first failing component code, empty when passed
};

struct AuditReport {
    Verdict verdict = Verdict::incomplete;
    std::size_t seal_count = 0;
    std::vector<SealStage> stages;      // chronological, from present records
    std::vector<std::string> creators;  // distinct, first-seen order
    std::optional<Timestamp> first_seal_at;
    std::optional<Timestamp> last_seal_at;
    std::vector<SealAuditEntry> seals;  // chronological
    VerificationReport meta_report;
    DependencyGraph dependency_graph;

    Document to_document() const;
    std::string to_text() const;
};

AuditReport build_audit_report(const MetaSeal& meta, const SealStoreView& records,
                               const PublicKey& key);

} // namespace metaseal
