#include "metaseal/meta_seal.hpp"

#include <algorithm>

#include "field_reader.hpp"

namespace metaseal {

using detail::FieldReader;

namespace {

constexpr std::string_view kSchemaVersion = "1";

const char* const kReservedMetadataKeys[] = {
    "creator",         "version",           "created_at", "seal_count",
    "dependency_graph", "required_stages",  "per_seal_summaries",
};

void require(bool condition, Errc code, const std::string& message)
{
    if (!condition)
        throw Error(code, message);
}

bool is_seal_id(std::string_view s) noexcept
{
    if (s.size() != 16)
        return false;
    for (char c : s)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
            return false;
    return true;
}

Document graph_to_document(const DependencyGraph& graph)
{
    Document doc = Document::object();
    for (const auto& [id, deps] : graph) {
        Document list = Document::array();
        for (const std::string& dep : deps)
            list.push_back(dep);
        doc[id] = std::move(list);
    }
    return doc;
}

DependencyGraph graph_from_document(const Document& doc)
{
    require(doc.is_object(), Errc::malformed, "dependency_graph must be a map");
    DependencyGraph graph;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        require(it.value().is_array(), Errc::malformed,
                "dependency_graph entries must be lists");
        std::vector<std::string> deps;
        for (const Document& dep : it.value()) {
            require(dep.is_string(), Errc::malformed, "dependency ids must be strings");
            deps.push_back(dep.get<std::string>());
        }
        graph.emplace(it.key(), std::move(deps));
    }
    return graph;
}

std::string join_stages(const std::set<SealStage>& stages)
{
    std::string out;
    for (SealStage stage : stages) {
        if (!out.empty())
            out += ", ";
        out += to_wire(stage);
    }
    return out;
}

} // namespace

std::string_view to_wire(SealStage stage) noexcept
{
    switch (stage) {
    case SealStage::data_collection:
        return "data_collection";
    case SealStage::model_development:
        return "model_development";
    case SealStage::training:
        return "training";
    case SealStage::evaluation:
        return "evaluation";
    case SealStage::deployment:
        return "deployment";
    case SealStage::monitoring:
        return "monitoring";
    case SealStage::retirement:
        return "retirement";
    }
    return "unknown";
}

SealStage stage_from_wire(std::string_view wire)
{
    for (SealStage stage : kAllStages)
        if (wire == to_wire(stage))
            return stage;
    throw Error(Errc::malformed, "unknown seal stage \"" + std::string(wire) + "\"");
}

SealKind seal_kind_for_stage(SealStage stage) noexcept
{
    switch (stage) {
    case SealStage::data_collection:
        return SealKind::dataset;
    case SealStage::model_development:
        return SealKind::model_architecture;
    case SealStage::training:
        return SealKind::training_process;
    case SealStage::evaluation:
        return SealKind::evaluation;
    case SealStage::deployment:
        return SealKind::deployment;
    case SealStage::monitoring:
        return SealKind::monitoring;
    case SealStage::retirement:
        return SealKind::lifecycle_completion;
    }
    return SealKind::dataset;
}

// -- metadata and records ---------------------------------------------------------

Document SealMetadata::to_record() const
{
    require(additional_info.is_object(), Errc::bad_argument, "additional_info must be a map");
    Document record = Document::object();
    record["stage"] = std::string(to_wire(stage));
    record["created_at"] = created_at.wire();
    record["created_by"] = created_by;
    record["version"] = version;
    Document deps = Document::array();
    for (const std::string& dep : dependencies) {
        require(is_seal_id(dep), Errc::bad_argument,
                "dependency \"" + dep + "\" is not a 16-hex seal id");
        deps.push_back(dep);
    }
    record["dependencies"] = std::move(deps);
    record["additional_info"] = additional_info;
    return record;
}

SealMetadata SealMetadata::from_record(const Document& record)
{
    FieldReader reader(record, "seal metadata");
    SealMetadata metadata;
    metadata.stage = stage_from_wire(reader.str("stage"));
    metadata.created_at = reader.timestamp("created_at");
    metadata.created_by = reader.str("created_by");
    metadata.version = reader.str("version");
    for (const Document& dep : reader.array("dependencies")) {
        require(dep.is_string() && is_seal_id(dep.get<std::string>()), Errc::malformed,
                "dependency ids must be 16-hex strings");
        metadata.dependencies.push_back(dep.get<std::string>());
    }
    metadata.additional_info = reader.object("additional_info");
    reader.finish();
    return metadata;
}

std::string SealRecord::to_bytes() const
{
    Document doc = Document::object();
    doc["metadata"] = metadata.to_record();
    doc["seal"] = seal;
    return canonical_encode(doc);
}

SealRecord SealRecord::from_bytes(std::string_view seal_id, std::string_view bytes)
{
    Document doc = canonical_parse(bytes);
    FieldReader reader(doc, "seal record");
    SealMetadata metadata = SealMetadata::from_record(reader.object("metadata"));
    Document seal = reader.object("seal");
    reader.finish();
    SealKind kind = envelope_kind(seal);
    require(kind == seal_kind_for_stage(metadata.stage), Errc::malformed,
            "seal kind does not match metadata stage");
    return SealRecord{std::string(seal_id), std::move(seal), std::move(metadata)};
}

// -- dependency graph ----------------------------------------------------------------

bool has_circular_dependencies(const DependencyGraph& graph)
{
    std::set<std::string> visited;
    std::set<std::string> path;

    auto visit = [&](auto&& self, const std::string& node) -> bool {
        if (path.contains(node))
            return true;
        if (visited.contains(node))
            return false;
        path.insert(node);
        auto it = graph.find(node);
        if (it != graph.end())
            for (const std::string& neighbor : it->second)
                if (self(self, neighbor))
                    return true;
        path.erase(node);
        visited.insert(node);
        return false;
    };

    for (const auto& [node, _] : graph)
        if (visit(visit, node))
            return true;
    return false;
}

std::string generate_seal_id(SealStage stage, Timestamp created_at, std::size_t registry_size)
{
    std::string unique = std::string(to_wire(stage)) + "_" + created_at.wire() + "_" +
                         std::to_string(registry_size);
    return hash_bytes(unique).hex().substr(0, 16);
}

// -- stores ----------------------------------------------------------------------------

std::vector<SealRecord> SealStoreView::load_records() const
{
    std::vector<SealRecord> records;
    for (const std::string& id : record_ids()) {
        std::optional<SealRecord> record = find_record(id);
        if (!record)
            throw Error(Errc::missing_record, "seal " + id + " disappeared from the store");
        records.push_back(std::move(*record));
    }
    return records;
}

std::optional<SealRecord> MemoryStore::find_record(const std::string& seal_id) const
{
    auto it = records_.find(seal_id);
    if (it == records_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::string> MemoryStore::record_ids() const
{
    std::vector<std::string> ids;
    ids.reserve(records_.size());
    for (const auto& [id, _] : records_)
        ids.push_back(id);
    return ids;
}

void MemoryStore::insert_record(const SealRecord& record)
{
    auto [_, inserted] = records_.emplace(record.seal_id, record);
    if (!inserted)
        throw Error(Errc::duplicate_id, "seal id " + record.seal_id + " already registered");
}

std::string register_seal(SealStore& store, SealStage stage, const Document& seal_envelope,
                          const SealMetadata& metadata)
{
    require(metadata.stage == stage, Errc::bad_argument,
            "metadata stage does not match registration stage");
    require(envelope_kind(seal_envelope) == seal_kind_for_stage(stage), Errc::bad_argument,
            "seal envelope kind does not match stage");
    for (const std::string& dep : metadata.dependencies)
        if (!store.find_record(dep))
            throw Error(Errc::unknown_dependency, "dependency " + dep + " is not registered");
    std::string seal_id = generate_seal_id(stage, metadata.created_at, store.record_count());
    if (store.find_record(seal_id))
        throw Error(Errc::duplicate_id, "seal id " + seal_id + " already registered");
    store.insert_record(SealRecord{seal_id, seal_envelope, metadata});
    return seal_id;
}

// -- meta-seal ---------------------------------------------------------------------------

Document MetaSeal::envelope() const
{
    Document env = Document::object();
    env["schema_version"] = std::string(kSchemaVersion);
    env["seals_hash"] = seals_hash.hex();
    env["metadata"] = metadata;
    env["timestamp"] = timestamp.wire();
    env["algorithm_id"] = signature.algorithm_id;
    env["signature"] = signature.hex();
    env["key_fingerprint"] = key_fingerprint.hex();
    Document ids = Document::array();
    for (const std::string& id : seal_ids)
        ids.push_back(id);
    env["seal_ids"] = std::move(ids);
    return env;
}

MetaSeal MetaSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "meta-seal envelope");
    require(reader.str("schema_version") == kSchemaVersion, Errc::malformed,
            "unsupported meta-seal schema_version");
    Digest seals_hash = reader.digest("seals_hash");
    Document metadata = reader.object("metadata");
    Timestamp timestamp = reader.timestamp("timestamp");
    std::string algorithm = reader.str("algorithm_id");
    require(algorithm == kAlgorithmId, Errc::malformed,
            "unsupported algorithm_id \"" + algorithm + "\"");
    Signature signature = Signature::from_hex(reader.str("signature"), algorithm);
    require(!signature.bytes.empty(), Errc::malformed, "empty signature");
    Digest key_fingerprint = reader.digest("key_fingerprint");
    std::vector<std::string> seal_ids;
    for (const Document& id : reader.array("seal_ids")) {
        require(id.is_string() && is_seal_id(id.get<std::string>()), Errc::malformed,
                "seal_ids entries must be 16-hex strings");
        seal_ids.push_back(id.get<std::string>());
    }
    reader.finish();
    MetaSeal meta{seals_hash,      std::move(metadata),  timestamp,
                  std::move(signature), key_fingerprint, std::move(seal_ids)};
    require(std::is_sorted(meta.seal_ids.begin(), meta.seal_ids.end()), Errc::malformed,
            "seal_ids must be sorted ascending");
    require(std::adjacent_find(meta.seal_ids.begin(), meta.seal_ids.end()) ==
                meta.seal_ids.end(),
            Errc::malformed, "seal_ids must be unique");

    // Validate the metadata shape the protocol relies on; caller extras are
    // allowed alongside.
    FieldReader md(meta.metadata, "meta-seal metadata");
    md.str("creator");
    md.str("version");
    md.timestamp("created_at");
    std::int64_t seal_count = md.integer("seal_count");
    require(seal_count == static_cast<std::int64_t>(meta.seal_ids.size()), Errc::malformed,
            "seal_count does not match seal_ids length");
    graph_from_document(md.object("dependency_graph"));
    for (const Document& stage : md.array("required_stages"))
        stage_from_wire(stage.get<std::string>());
    for (const Document& summary : md.array("per_seal_summaries")) {
        FieldReader s(summary, "per-seal summary");
        s.str("seal_id");
        stage_from_wire(s.str("stage"));
        s.timestamp("created_at");
        s.str("created_by");
        s.finish();
    }
    return meta;
}

Digest generate_seals_hash(const std::vector<SealRecord>& records)
{
    for (std::size_t i = 1; i < records.size(); ++i)
        require(records[i - 1].seal_id < records[i].seal_id, Errc::bad_argument,
                "records must be sorted ascending by seal id");
    Document list = Document::array();
    for (const SealRecord& record : records) {
        Document entry = Document::object();
        entry["id"] = record.seal_id;
        entry["seal_hash"] = seal_digest(record.seal).hex();
        entry["metadata_hash"] = hash_canonical(record.metadata.to_record()).hex();
        list.push_back(std::move(entry));
    }
    return hash_canonical(list);
}

std::set<SealStage> verify_stage_completeness(const std::vector<SealRecord>& records,
                                              const std::set<SealStage>& required)
{
    std::set<SealStage> present;
    for (const SealRecord& record : records)
        present.insert(record.metadata.stage);
    std::set<SealStage> missing;
    for (SealStage stage : required)
        if (!present.contains(stage))
            missing.insert(stage);
    return missing;
}

namespace {

std::vector<HistoryEntry> history_from_records(const std::vector<SealRecord>& records)
{
    std::vector<HistoryEntry> entries;
    entries.reserve(records.size());
    for (const SealRecord& record : records)
        entries.push_back(HistoryEntry{record.seal_id, record.metadata.stage,
                                       record.metadata.created_at, record.metadata.created_by});
    std::sort(entries.begin(), entries.end(), [](const HistoryEntry& a, const HistoryEntry& b) {
        if (a.created_at != b.created_at)
            return a.created_at < b.created_at;
        return a.seal_id < b.seal_id;
    });
    return entries;
}

} // namespace

MetaSeal create_meta_seal(const SealStoreView& store, const std::set<std::string>& seal_ids,
                          const MetaSealOptions& options, const PrivateKey& key, Timestamp now)
{
    std::vector<SealRecord> records;
    records.reserve(seal_ids.size());
    for (const std::string& id : seal_ids) {
        std::optional<SealRecord> record = store.find_record(id);
        if (!record)
            throw Error(Errc::unknown_id, "seal " + id + " is not registered");
        records.push_back(std::move(*record));
    }

    std::set<SealStage> missing = verify_stage_completeness(records, options.required_stages);
    if (!missing.empty())
        throw Error(Errc::missing_stage, "Missing required stages: " + join_stages(missing));

    // Declared dependencies must stay inside the sealed set, or the meta
    // seal could never verify its own dependency graph.
    DependencyGraph graph;
    for (const SealRecord& record : records) {
        for (const std::string& dep : record.metadata.dependencies)
            if (!seal_ids.contains(dep))
                throw Error(Errc::unknown_dependency, "seal " + record.seal_id + " depends on " +
                                                          dep +
                                                          " which is outside the sealed set");
        graph[record.seal_id] = record.metadata.dependencies;
    }

    Digest seals_hash = generate_seals_hash(records);

    Document metadata = Document::object();
    require(options.extra_metadata.is_object(), Errc::bad_argument,
            "extra metadata must be a map");
    for (auto it = options.extra_metadata.begin(); it != options.extra_metadata.end(); ++it) {
        for (const char* reserved : kReservedMetadataKeys)
            require(it.key() != reserved, Errc::bad_argument,
                    "extra metadata may not override reserved key \"" + it.key() + "\"");
        metadata[it.key()] = it.value();
    }
    metadata["creator"] = options.creator;
    metadata["version"] = options.version;
    metadata["created_at"] = now.wire();
    metadata["seal_count"] = static_cast<std::int64_t>(records.size());
    metadata["dependency_graph"] = graph_to_document(graph);
    Document required = Document::array();
    for (SealStage stage : options.required_stages)
        required.push_back(std::string(to_wire(stage)));
    metadata["required_stages"] = std::move(required);
    Document summaries = Document::array();
    for (const HistoryEntry& entry : history_from_records(records)) {
        Document summary = Document::object();
        summary["seal_id"] = entry.seal_id;
        summary["stage"] = std::string(to_wire(entry.stage));
        summary["created_at"] = entry.created_at.wire();
        summary["created_by"] = entry.created_by;
        summaries.push_back(std::move(summary));
    }
    metadata["per_seal_summaries"] = std::move(summaries);

    std::string message = seals_hash.hex() + hash_canonical(metadata).hex() + now.wire();
    Signature signature = sign(message, key);

    std::vector<std::string> ids(seal_ids.begin(), seal_ids.end());
    return MetaSeal{seals_hash,           std::move(metadata),
                    now,                  std::move(signature),
                    key.public_key().fingerprint(), std::move(ids)};
}

VerificationReport verify_meta_seal(const MetaSeal& meta, const SealStoreView& records,
                                    const PublicKey& key)
{
    VerificationReport report{VerificationTier::meta, {}};

    if (key.fingerprint() != meta.key_fingerprint) {
        report.add(Component::meta_signature, false, "key fingerprint does not match envelope");
    } else {
        std::string message =
            meta.seals_hash.hex() + hash_canonical(meta.metadata).hex() + meta.timestamp.wire();
        bool ok = verify_signature(message, meta.signature, key);
        report.add(Component::meta_signature, ok, ok ? "" : "meta signature does not verify");
    }

    std::vector<SealRecord> found;
    bool all_present = true;
    for (const std::string& id : meta.seal_ids) {
        try {
            std::optional<SealRecord> record = records.find_record(id);
            if (!record) {
                report.add(Component::missing_record, false, "seal " + id + " is not available");
                all_present = false;
                continue;
            }
            found.push_back(std::move(*record));
        } catch (const Error& e) {
            report.add(Component::malformed_record, false,
                       "seal " + id + ": " + std::string(e.what()));
            all_present = false;
        }
    }
    if (all_present) {
        bool ok = generate_seals_hash(found) == meta.seals_hash;
        report.add(Component::seals_hash, ok,
                   ok ? "" : "stored seals do not re-hash to the sealed seals_hash");
    }

    bool any_component_failed = false;
    for (const SealRecord& record : found) {
        try {
            VerificationReport seal_report = verify_envelope_signature(record.seal, key);
            if (!seal_report.ok()) {
                const CheckResult* failure = seal_report.first_failure();
                report.add(Component::component_seals, false,
                           "seal " + record.seal_id + ": " +
                               std::string(component_code(failure->component)) + " failed");
                any_component_failed = true;
            }
        } catch (const Error& e) {
            report.add(Component::component_seals, false,
                       "seal " + record.seal_id + ": envelope malformed (" + e.what() + ")");
            any_component_failed = true;
        }
    }
    if (!any_component_failed)
        report.add(Component::component_seals, true);

    std::set<std::string> id_set(meta.seal_ids.begin(), meta.seal_ids.end());
    DependencyGraph graph = graph_from_document(meta.metadata.at("dependency_graph"));
    bool edges_ok = true;
    std::string edge_detail;
    for (const auto& [id, deps] : graph) {
        if (!id_set.contains(id)) {
            edges_ok = false;
            edge_detail = "graph node " + id + " is not among seal_ids";
            break;
        }
        for (const std::string& dep : deps)
            if (!id_set.contains(dep)) {
                edges_ok = false;
                edge_detail = "dependency " + dep + " of " + id + " is not among seal_ids";
                break;
            }
        if (!edges_ok)
            break;
    }
    report.add(Component::dependency_existence, edges_ok, edge_detail);

    bool acyclic = !has_circular_dependencies(graph);
    report.add(Component::acyclicity, acyclic, acyclic ? "" : "dependency graph has a cycle");

    return report;
}

std::vector<HistoryEntry> get_seal_history(const MetaSeal& meta, const SealStoreView& records)
{
    std::vector<SealRecord> found;
    for (const std::string& id : meta.seal_ids) {
        std::optional<SealRecord> record = records.find_record(id);
        if (!record)
            throw Error(Errc::missing_record, "seal " + id + " is not available");
        found.push_back(std::move(*record));
    }
    return history_from_records(found);
}

Document export_metadata(const MetaSeal& meta)
{
    Document doc = Document::object();
    doc["version"] = meta.metadata.at("version");
    doc["created_at"] = meta.timestamp.wire();
    doc["creator"] = meta.metadata.at("creator");
    doc["seal_count"] = meta.metadata.at("seal_count");
    doc["stages"] = meta.metadata.at("per_seal_summaries");
    doc["dependency_graph"] = meta.metadata.at("dependency_graph");
    return doc;
}

} // namespace metaseal
