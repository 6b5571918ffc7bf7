#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaseal/meta_seal.hpp"

struct sqlite3;

namespace metaseal {

inline constexpr std::string_view kMetaSealType = "meta";
inline constexpr std::string_view kBundleFormat = "metaseal-bundle/1";

struct JournalEntry {
    std::int64_t seq = 0;
    std::string logged_at;
    std::string action;
    std::string seal_id;
    std::string prior_type;
    std::string prior_data;
};

/// Durable single-file seal store: three-column table (id, seal_type,
/// seal_data) with atomic commits. Re-storing an id with different bytes is
/// refused unless forced; forced replacements land in an append-only journal.
/// Single writer, multiple readers; one handle per thread.
class Registry : public SealStore {
public:
    static Registry open(const std::filesystem::path& path);

    Registry(Registry&&) noexcept;
    Registry& operator=(Registry&&) noexcept;
    Registry(const Registry&) = delete;
    Registry& operator=(const Registry&) = delete;
    ~Registry() override;

    void store_seal(const std::string& id, const std::string& seal_type,
                    std::string_view seal_data, bool force = false);
    std::optional<std::pair<std::string, std::string>> retrieve_seal(const std::string& id) const;
    std::vector<std::pair<std::string, std::string>> list_seals() const;
    std::vector<JournalEntry> journal() const;

    // SealStore view over stage-seal rows ("meta" rows excluded).
    std::optional<SealRecord> find_record(const std::string& seal_id) const override;
    std::vector<std::string> record_ids() const override;
    void insert_record(const SealRecord& record) override;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    explicit Registry(sqlite3* db, std::filesystem::path path);
    sqlite3* db_;
    std::filesystem::path path_;
};

// -- audit bundles -------------------------------------------------------------------
//
// Self-contained export for third-party offline verification: the meta-seal
// envelope, the id-sorted rows it binds, and the verifying public key.

void export_bundle(const Registry& registry, const MetaSeal& meta, const PublicKey& public_key,
                   const std::filesystem::path& out_path);

struct ImportedBundle {
    MetaSeal meta;
    MemoryStore records;
    std::string public_key_pem;
};

ImportedBundle import_bundle(const std::filesystem::path& path);

/// Canonical bundle bytes from an in-memory record set; export/import/export
/// is byte-identical.
std::string encode_bundle(const MetaSeal& meta, const std::vector<SealRecord>& records,
                          std::string_view public_key_pem);

} // namespace metaseal
