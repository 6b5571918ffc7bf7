#include "metaseal/audit.hpp"

#include <algorithm>
#include <sstream>

namespace metaseal {

std::string_view verdict_name(Verdict v) noexcept
{
    switch (v) {
    case Verdict::verified:
        return "VERIFIED";
    case Verdict::tampered:
        return "TAMPERED";
    case Verdict::incomplete:
        return "INCOMPLETE";
    }
    return "UNKNOWN";
}

namespace {

bool is_missing_class(Component c) noexcept
{
    return c == Component::missing_record;
}

} // namespace

Verdict classify(const VerificationReport& report) noexcept
{
    bool any_missing = false;
    bool any_integrity_failure = false;
    for (const CheckResult& check : report.checks) {
        if (check.passed)
            continue;
        if (is_missing_class(check.component))
            any_missing = true;
        else
            any_integrity_failure = true;
    }
    if (any_integrity_failure)
        return Verdict::tampered;
    if (any_missing)
        return Verdict::incomplete;
    return Verdict::verified;
}

AuditReport build_audit_report(const MetaSeal& meta, const SealStoreView& records,
                               const PublicKey& key)
{
    AuditReport audit;
    audit.meta_report = verify_meta_seal(meta, records, key);
    audit.seal_count = meta.seal_ids.size();
    audit.dependency_graph = [&] {
        DependencyGraph graph;
        const Document& doc = meta.metadata.at("dependency_graph");
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            std::vector<std::string> deps;
            for (const Document& dep : it.value())
                deps.push_back(dep.get<std::string>());
            graph.emplace(it.key(), std::move(deps));
        }
        return graph;
    }();

    // Per-seal entries over whatever records are present, chronological.
    std::vector<SealRecord> present;
    for (const std::string& id : meta.seal_ids) {
        try {
            if (std::optional<SealRecord> record = records.find_record(id))
                present.push_back(std::move(*record));
        } catch (const Error&) {
            // malformed records already show up in the meta report
        }
    }
    std::sort(present.begin(), present.end(), [](const SealRecord& a, const SealRecord& b) {
        if (a.metadata.created_at != b.metadata.created_at)
            return a.metadata.created_at < b.metadata.created_at;
        return a.seal_id < b.seal_id;
    });
    for (const SealRecord& record : present) {
        SealAuditEntry entry;
        entry.seal_id = record.seal_id;
        entry.stage = record.metadata.stage;
        entry.created_at = record.metadata.created_at;
        entry.created_by = record.metadata.created_by;
        entry.tier = VerificationTier::signature_only;
        try {
            VerificationReport seal_report = verify_envelope_signature(record.seal, key);
            entry.passed = seal_report.ok();
            if (const CheckResult* failure = seal_report.first_failure())
                entry.failure = std::string(component_code(failure->component));
        } catch (const Error&) {
            entry.passed = false;
            entry.failure = std::string(component_code(Component::malformed_record));
        }
        audit.seals.push_back(std::move(entry));

        audit.stages.push_back(record.metadata.stage);
        if (std::find(audit.creators.begin(), audit.creators.end(), record.metadata.created_by) ==
            audit.creators.end())
            audit.creators.push_back(record.metadata.created_by);
        if (!audit.first_seal_at || record.metadata.created_at < *audit.first_seal_at)
            audit.first_seal_at = record.metadata.created_at;
        if (!audit.last_seal_at || record.metadata.created_at > *audit.last_seal_at)
            audit.last_seal_at = record.metadata.created_at;
    }

    audit.verdict = classify(audit.meta_report);
    if (audit.verdict == Verdict::verified) {
        // Meta checks were clean; the verdict still degrades if a recorded
        // requirement is no longer satisfiable from the present records.
        std::set<SealStage> required;
        for (const Document& stage : meta.metadata.at("required_stages"))
            required.insert(stage_from_wire(stage.get<std::string>()));
        if (!verify_stage_completeness(present, required).empty())
            audit.verdict = Verdict::incomplete;
        for (const SealAuditEntry& entry : audit.seals)
            if (!entry.passed)
                audit.verdict = Verdict::tampered;
    }
    return audit;
}

Document AuditReport::to_document() const
{
    Document doc = Document::object();
    doc["verdict"] = std::string(verdict_name(verdict));
    doc["seal_count"] = static_cast<std::int64_t>(seal_count);
    Document stage_list = Document::array();
    for (SealStage stage : stages)
        stage_list.push_back(std::string(to_wire(stage)));
    doc["stages"] = std::move(stage_list);
    Document creator_list = Document::array();
    for (const std::string& creator : creators)
        creator_list.push_back(creator);
    doc["creators"] = std::move(creator_list);
    if (first_seal_at && last_seal_at) {
        Document span = Document::object();
        span["first"] = first_seal_at->wire();
        span["last"] = last_seal_at->wire();
        doc["time_span"] = std::move(span);
    }
    Document seal_list = Document::array();
    for (const SealAuditEntry& entry : seals) {
        Document item = Document::object();
        item["seal_id"] = entry.seal_id;
        item["stage"] = std::string(to_wire(entry.stage));
        item["created_at"] = entry.created_at.wire();
        item["created_by"] = entry.created_by;
        item["tier"] = std::string(tier_name(entry.tier));
        item["passed"] = entry.passed;
        if (!entry.failure.empty())
            item["failure"] = entry.failure;
        seal_list.push_back(std::move(item));
    }
    doc["seals"] = std::move(seal_list);
    doc["meta"] = meta_report.to_document();
    Document graph = Document::object();
    for (const auto& [id, deps] : dependency_graph) {
        Document list = Document::array();
        for (const std::string& dep : deps)
            list.push_back(dep);
        graph[id] = std::move(list);
    }
    doc["dependency_graph"] = std::move(graph);
    return doc;
}

std::string AuditReport::to_text() const
{
    std::ostringstream out;
    out << "audit verdict: " << verdict_name(verdict) << "\n";
    out << "seals bound:   " << seal_count << "\n";
    if (first_seal_at && last_seal_at)
        out << "time span:     " << first_seal_at->wire() << " .. " << last_seal_at->wire()
            << " (unix micros)\n";
    if (!creators.empty()) {
        out << "creators:      ";
        for (std::size_t i = 0; i < creators.size(); ++i)
            out << (i != 0 ? ", " : "") << creators[i];
        out << "\n";
    }
    out << "\nseal chain (chronological):\n";
    for (const SealAuditEntry& entry : seals) {
        out << "  " << (entry.passed ? "[ok]  " : "[FAIL] ") << entry.seal_id << "  "
            << to_wire(entry.stage) << "  at " << entry.created_at.wire() << "  by "
            << entry.created_by << "  (" << tier_name(entry.tier) << ")";
        if (!entry.failure.empty())
            out << "  failing: " << entry.failure;
        out << "\n";
    }
    out << "\nmeta-seal checks:\n";
    for (const CheckResult& check : meta_report.checks) {
        out << "  " << (check.passed ? "[ok]  " : "[FAIL] ") << component_code(check.component);
        if (!check.detail.empty())
            out << "  " << check.detail;
        out << "\n";
    }
    out << "\ndependency graph:\n";
    for (const auto& [id, deps] : dependency_graph) {
        out << "  " << id << " -> ";
        if (deps.empty())
            out << "(none)";
        for (std::size_t i = 0; i < deps.size(); ++i)
            out << (i != 0 ? ", " : "") << deps[i];
        out << "\n";
    }
    return out.str();
}

} // namespace metaseal
