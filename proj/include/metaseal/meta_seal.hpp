#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "metaseal/canonical.hpp"
#include "metaseal/crypto.hpp"
#include "metaseal/report.hpp"
#include "metaseal/seals.hpp"

namespace metaseal {

enum class SealStage {
    data_collection,
    model_development,
    training,
    evaluation,
    deployment,
    monitoring,
    retirement,
};

inline constexpr std::array<SealStage, 7> kAllStages = {
    SealStage::data_collection, SealStage::model_development, SealStage::training,
    SealStage::evaluation,      SealStage::deployment,        SealStage::monitoring,
    SealStage::retirement,
};

std::string_view to_wire(SealStage stage) noexcept;
SealStage stage_from_wire(std::string_view wire);
SealKind seal_kind_for_stage(SealStage stage) noexcept;

/// Registration metadata recorded next to each stage seal.
struct SealMetadata {
    SealStage stage = SealStage::data_collection;
    Timestamp created_at{0};
    std::string created_by;
    std::string version = "1.0.0";
    std::vector<std::string> dependencies; // 16-hex seal ids
    Document additional_info = Document::object();

    Document to_record() const;
    static SealMetadata from_record(const Document& record);
};

/// One registry entry: id, stage-seal envelope, metadata. Serializes to the
/// canonical bytes the registry stores and the seals hash covers.
struct SealRecord {
    std::string seal_id;
    Document seal;
    SealMetadata metadata;

    std::string to_bytes() const;
    static SealRecord from_bytes(std::string_view seal_id, std::string_view bytes);
};

using DependencyGraph = std::map<std::string, std::vector<std::string>>;

/// DFS with an in-progress path set; true iff the directed graph has a cycle.
bool has_circular_dependencies(const DependencyGraph& graph);

/// First 16 hex chars of SHA-256("{stage}_{timestamp wire}_{registry size}").
std::string generate_seal_id(SealStage stage, Timestamp created_at, std::size_t registry_size);

// -- record stores ----------------------------------------------------------------

/// Read view over registered stage-seal records, ids ascending.
class SealStoreView {
public:
    virtual ~SealStoreView() = default;
    virtual std::optional<SealRecord> find_record(const std::string& seal_id) const = 0;
    virtual std::vector<std::string> record_ids() const = 0;

    std::size_t record_count() const { return record_ids().size(); }
    std::vector<SealRecord> load_records() const;
};

class SealStore : public SealStoreView {
public:
    virtual void insert_record(const SealRecord& record) = 0;
};

class MemoryStore final : public SealStore {
public:
    std::optional<SealRecord> find_record(const std::string& seal_id) const override;
    std::vector<std::string> record_ids() const override;
    void insert_record(const SealRecord& record) override;

private:
    std::map<std::string, SealRecord> records_;
};

/// Validates metadata/envelope consistency and dependency existence, assigns
/// the seal id, and inserts the record. Returns the fresh id.
std::string register_seal(SealStore& store, SealStage stage, const Document& seal_envelope,
                          const SealMetadata& metadata);

// -- the meta-seal ------------------------------------------------------------------

struct MetaSeal {
    Digest seals_hash;
    Document metadata = Document::object();
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;
    std::vector<std::string> seal_ids; // ascending

    Document envelope() const;
    static MetaSeal from_envelope(const Document& env);
};

struct MetaSealOptions {
    std::string creator;
    std::string version = "1.0.0";
    Document extra_metadata = Document::object();
    std::set<SealStage> required_stages{kAllStages.begin(), kAllStages.end()};
};

/// Hash binding the id-sorted records: canonical list of
/// {id, metadata_hash, seal_hash}. Rejects unsorted input.
Digest generate_seals_hash(const std::vector<SealRecord>& records_sorted_by_id);

/// Stages required but absent from the records; empty means complete.
std::set<SealStage> verify_stage_completeness(const std::vector<SealRecord>& records,
                                              const std::set<SealStage>& required);

MetaSeal create_meta_seal(const SealStoreView& store, const std::set<std::string>& seal_ids,
                          const MetaSealOptions& options, const PrivateKey& key, Timestamp now);

/// Checks, in order: META_SIGNATURE, SEALS_HASH (missing/malformed records
/// reported per id), COMPONENT_SEALS (signature tier), DEPENDENCY_EXISTENCE,
/// ACYCLICITY. All outcomes are report entries.
VerificationReport verify_meta_seal(const MetaSeal& meta, const SealStoreView& records,
                                    const PublicKey& key);

struct HistoryEntry {
    std::string seal_id;
    SealStage stage = SealStage::data_collection;
    Timestamp created_at{0};
    std::string created_by;
};

/// Chronological (created_at, then seal_id) history from the records.
std::vector<HistoryEntry> get_seal_history(const MetaSeal& meta, const SealStoreView& records);

/// Structured metadata export: version, created_at, creator, seal_count,
/// stages (the history list), dependency_graph.
Document export_metadata(const MetaSeal& meta);

} // namespace metaseal
