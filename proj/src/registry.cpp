#include "metaseal/registry.hpp"

#include <fstream>

#include <sqlite3.h>

#include "field_reader.hpp"

namespace metaseal {

using detail::FieldReader;

namespace {

[[noreturn]] void throw_sqlite(sqlite3* db, const std::string& what)
{
    std::string detail = db != nullptr ? sqlite3_errmsg(db) : "out of memory";
    throw Error(Errc::io, what + " (" + detail + ")");
}

class Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db)
    {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
            throw_sqlite(db, "cannot prepare statement");
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    void bind_text(int index, std::string_view value)
    {
        if (sqlite3_bind_text(stmt_, index, value.data(), static_cast<int>(value.size()),
                              SQLITE_TRANSIENT) != SQLITE_OK)
            throw_sqlite(db_, "cannot bind parameter");
    }

    bool step()
    {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW)
            return true;
        if (rc == SQLITE_DONE)
            return false;
        throw_sqlite(db_, "statement failed");
    }

    std::string column_text(int index)
    {
        const unsigned char* text = sqlite3_column_text(stmt_, index);
        int size = sqlite3_column_bytes(stmt_, index);
        return text != nullptr ? std::string(reinterpret_cast<const char*>(text),
                                             static_cast<std::size_t>(size))
                               : std::string();
    }

    std::int64_t column_int64(int index) { return sqlite3_column_int64(stmt_, index); }

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

void exec(sqlite3* db, const char* sql)
{
    char* err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string message = err != nullptr ? err : "unknown error";
        sqlite3_free(err);
        throw Error(Errc::io, "registry statement failed (" + message + ")");
    }
}

struct TransactionGuard {
    sqlite3* db;
    bool committed = false;
    explicit TransactionGuard(sqlite3* handle) : db(handle)
    {
        exec(db, "BEGIN IMMEDIATE");
    }
    void commit()
    {
        exec(db, "COMMIT");
        committed = true;
    }
    ~TransactionGuard()
    {
        if (!committed)
            sqlite3_exec(db, "ROLLBACK", nullptr, nullptr, nullptr);
    }
};

} // namespace

Registry::Registry(sqlite3* db, std::filesystem::path path) : db_(db), path_(std::move(path)) {}

Registry::Registry(Registry&& other) noexcept : db_(other.db_), path_(std::move(other.path_))
{
    other.db_ = nullptr;
}

Registry& Registry::operator=(Registry&& other) noexcept
{
    if (this != &other) {
        if (db_ != nullptr)
            sqlite3_close(db_);
        db_ = other.db_;
        path_ = std::move(other.path_);
        other.db_ = nullptr;
    }
    return *this;
}

Registry::~Registry()
{
    if (db_ != nullptr)
        sqlite3_close(db_);
}

Registry Registry::open(const std::filesystem::path& path)
{
    sqlite3* db = nullptr;
    int rc = sqlite3_open_v2(path.string().c_str(), &db,
                             SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr);
    if (rc != SQLITE_OK) {
        std::string detail = db != nullptr ? sqlite3_errmsg(db) : sqlite3_errstr(rc);
        sqlite3_close(db);
        throw Error(Errc::io, "cannot open registry at " + path.string() + " (" + detail + ")");
    }
    Registry registry(db, path);
    exec(db, "PRAGMA busy_timeout = 5000");
    exec(db, "CREATE TABLE IF NOT EXISTS seals ("
             "  id TEXT PRIMARY KEY,"
             "  seal_type TEXT NOT NULL,"
             "  seal_data TEXT NOT NULL"
             ")");
    exec(db, "CREATE TABLE IF NOT EXISTS seal_journal ("
             "  seq INTEGER PRIMARY KEY AUTOINCREMENT,"
             "  logged_at TEXT NOT NULL,"
             "  action TEXT NOT NULL,"
             "  seal_id TEXT NOT NULL,"
             "  prior_type TEXT NOT NULL,"
             "  prior_data TEXT NOT NULL"
             ")");
    return registry;
}

void Registry::store_seal(const std::string& id, const std::string& seal_type,
                          std::string_view seal_data, bool force)
{
    if (id.empty())
        throw Error(Errc::bad_argument, "seal id must be non-empty");
    canonical_parse(seal_data); // stored bytes must be a canonical envelope

    TransactionGuard txn(db_);
    std::optional<std::pair<std::string, std::string>> existing;
    {
        Statement select(db_, "SELECT seal_type, seal_data FROM seals WHERE id = ?1");
        select.bind_text(1, id);
        if (select.step())
            existing = {{select.column_text(0), select.column_text(1)}};
    }
    if (existing) {
        if (existing->first == seal_type && existing->second == seal_data) {
            txn.commit(); // idempotent re-store
            return;
        }
        if (!force)
            throw Error(Errc::immutable_conflict,
                        "seal " + id + " already stored with different content; "
                        "refusing to replace without force");
        Statement journal(db_, "INSERT INTO seal_journal "
                               "(logged_at, action, seal_id, prior_type, prior_data) "
                               "VALUES (?1, 'forced_replace', ?2, ?3, ?4)");
        journal.bind_text(1, Timestamp::now().wire());
        journal.bind_text(2, id);
        journal.bind_text(3, existing->first);
        journal.bind_text(4, existing->second);
        journal.step();
        Statement update(db_, "UPDATE seals SET seal_type = ?2, seal_data = ?3 WHERE id = ?1");
        update.bind_text(1, id);
        update.bind_text(2, seal_type);
        update.bind_text(3, seal_data);
        update.step();
    } else {
        Statement insert(db_,
                         "INSERT INTO seals (id, seal_type, seal_data) VALUES (?1, ?2, ?3)");
        insert.bind_text(1, id);
        insert.bind_text(2, seal_type);
        insert.bind_text(3, seal_data);
        insert.step();
    }
    txn.commit();
}

std::optional<std::pair<std::string, std::string>>
Registry::retrieve_seal(const std::string& id) const
{
    Statement select(db_, "SELECT seal_type, seal_data FROM seals WHERE id = ?1");
    select.bind_text(1, id);
    if (!select.step())
        return std::nullopt;
    return {{select.column_text(0), select.column_text(1)}};
}

std::vector<std::pair<std::string, std::string>> Registry::list_seals() const
{
    Statement select(db_, "SELECT id, seal_type FROM seals ORDER BY id");
    std::vector<std::pair<std::string, std::string>> rows;
    while (select.step())
        rows.emplace_back(select.column_text(0), select.column_text(1));
    return rows;
}

std::vector<JournalEntry> Registry::journal() const
{
    Statement select(db_, "SELECT seq, logged_at, action, seal_id, prior_type, prior_data "
                          "FROM seal_journal ORDER BY seq");
    std::vector<JournalEntry> entries;
    while (select.step()) {
        JournalEntry entry;
        entry.seq = select.column_int64(0);
        entry.logged_at = select.column_text(1);
        entry.action = select.column_text(2);
        entry.seal_id = select.column_text(3);
        entry.prior_type = select.column_text(4);
        entry.prior_data = select.column_text(5);
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::optional<SealRecord> Registry::find_record(const std::string& seal_id) const
{
    auto row = retrieve_seal(seal_id);
    if (!row || row->first == kMetaSealType)
        return std::nullopt;
    SealRecord record = SealRecord::from_bytes(seal_id, row->second);
    if (to_wire(record.metadata.stage) != row->first)
        throw Error(Errc::malformed,
                    "stored seal_type does not match record stage for seal " + seal_id);
    return record;
}

std::vector<std::string> Registry::record_ids() const
{
    Statement select(db_, "SELECT id FROM seals WHERE seal_type != 'meta' ORDER BY id");
    std::vector<std::string> ids;
    while (select.step())
        ids.push_back(select.column_text(0));
    return ids;
}

void Registry::insert_record(const SealRecord& record)
{
    if (retrieve_seal(record.seal_id))
        throw Error(Errc::duplicate_id, "seal id " + record.seal_id + " already stored");
    store_seal(record.seal_id, std::string(to_wire(record.metadata.stage)), record.to_bytes());
}

// -- audit bundles ---------------------------------------------------------------------

std::string encode_bundle(const MetaSeal& meta, const std::vector<SealRecord>& records,
                          std::string_view public_key_pem)
{
    Document seals = Document::array();
    for (const SealRecord& record : records) {
        Document row = Document::object();
        row["id"] = record.seal_id;
        row["seal_type"] = std::string(to_wire(record.metadata.stage));
        row["seal_data"] = canonical_parse(record.to_bytes());
        seals.push_back(std::move(row));
    }
    Document bundle = Document::object();
    bundle["format"] = std::string(kBundleFormat);
    bundle["meta"] = meta.envelope();
    bundle["seals"] = std::move(seals);
    bundle["public_key"] = std::string(public_key_pem);
    return canonical_encode(bundle);
}

void export_bundle(const Registry& registry, const MetaSeal& meta, const PublicKey& public_key,
                   const std::filesystem::path& out_path)
{
    std::vector<SealRecord> records;
    for (const std::string& id : meta.seal_ids) {
        std::optional<SealRecord> record = registry.find_record(id);
        if (!record)
            throw Error(Errc::missing_record, "seal " + id + " is not in the registry");
        records.push_back(std::move(*record));
    }
    std::string bytes = encode_bundle(meta, records, public_key.to_pem());
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
        throw Error(Errc::io, "cannot write " + out_path.string());
    out << bytes;
    out.close();
    if (!out)
        throw Error(Errc::io, "write failed for " + out_path.string());
}

ImportedBundle import_bundle(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw Error(Errc::io, "cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw Error(Errc::io, "read failed for " + path.string());

    Document doc = parse_document(bytes);
    FieldReader reader(doc, "bundle");
    std::string format = reader.str("format");
    if (format != kBundleFormat)
        throw Error(Errc::malformed, "unsupported bundle format \"" + format + "\"");
    MetaSeal meta = MetaSeal::from_envelope(reader.object("meta"));
    std::string public_key_pem = reader.str("public_key");
    const Document& seals = reader.array("seals");
    reader.finish();

    MemoryStore records;
    for (const Document& row : seals) {
        FieldReader row_reader(row, "bundle seal row");
        std::string id = row_reader.str("id");
        std::string seal_type = row_reader.str("seal_type");
        const Document& seal_data = row_reader.object("seal_data");
        row_reader.finish();
        SealRecord record = SealRecord::from_bytes(id, canonical_encode(seal_data));
        if (to_wire(record.metadata.stage) != seal_type)
            throw Error(Errc::malformed, "bundle row seal_type does not match record for " + id);
        records.insert_record(record);
    }
    return ImportedBundle{std::move(meta), std::move(records), std::move(public_key_pem)};
}

} // namespace metaseal
