#include "metaseal/tamper.hpp"

#include <random>

#include <sqlite3.h>
#include <unistd.h>

#include "metaseal/registry.hpp"

namespace metaseal {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t bound)
{
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

std::string mutate_one_byte(std::string bytes, Rng& rng, std::string* description)
{
    std::size_t pos = pick(rng, bytes.size());
    unsigned char original = static_cast<unsigned char>(bytes[pos]);
    unsigned char replacement = original;
    while (replacement == original)
        replacement = static_cast<unsigned char>(1 + pick(rng, 255));
    bytes[pos] = static_cast<char>(replacement);
    *description = "byte at offset " + std::to_string(pos);
    return bytes;
}

void collect_leaves(const Document& doc, const std::string& pointer,
                    std::vector<std::string>& out)
{
    if (doc.is_object()) {
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            std::string escaped;
            for (char c : it.key()) {
                if (c == '~')
                    escaped += "~0";
                else if (c == '/')
                    escaped += "~1";
                else
                    escaped += c;
            }
            collect_leaves(it.value(), pointer + "/" + escaped, out);
        }
    } else if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i)
            collect_leaves(doc[i], pointer + "/" + std::to_string(i), out);
    } else {
        out.push_back(pointer);
    }
}

void perturb_leaf(Document& leaf, Rng& rng)
{
    if (leaf.is_string()) {
        std::string value = leaf.get<std::string>();
        if (value.empty()) {
            leaf = "x";
            return;
        }
        std::size_t pos = pick(rng, value.size());
        char original = value[pos];
        static constexpr char alphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
        char replacement = original;
        while (replacement == original)
            replacement = alphabet[pick(rng, sizeof alphabet - 1)];
        value[pos] = replacement;
        leaf = value;
    } else if (leaf.is_boolean()) {
        leaf = !leaf.get<bool>();
    } else if (leaf.is_number_integer() || leaf.is_number_unsigned()) {
        leaf = leaf.get<std::int64_t>() + 1;
    } else { // null
        leaf = false;
    }
}

std::string mutate_one_field(const std::string& bytes, Rng& rng, std::string* description)
{
    Document doc = canonical_parse(bytes);
    std::vector<std::string> leaves;
    collect_leaves(doc, "", leaves);
    if (leaves.empty()) {
        return mutate_one_byte(bytes, rng, description);
    }
    const std::string& pointer = leaves[pick(rng, leaves.size())];
    Document& leaf = doc.at(Document::json_pointer(pointer));
    perturb_leaf(leaf, rng);
    *description = "field " + pointer;
    return canonical_encode(doc);
}

// Plants tampered bytes into a working copy, bypassing the registry's
// canonical/immutability guards on purpose.
void write_row_unchecked(const std::filesystem::path& db_path, const std::string& id,
                         const std::string& seal_type, const std::string& seal_data)
{
    sqlite3* db = nullptr;
    if (sqlite3_open_v2(db_path.string().c_str(), &db, SQLITE_OPEN_READWRITE, nullptr) !=
        SQLITE_OK) {
        sqlite3_close(db);
        throw Error(Errc::io, "cannot open tamper working copy");
    }
    sqlite3_stmt* stmt = nullptr;
    int rc = sqlite3_prepare_v2(
        db, "UPDATE seals SET seal_type = ?2, seal_data = ?3 WHERE id = ?1", -1, &stmt, nullptr);
    if (rc == SQLITE_OK) {
        sqlite3_bind_text(stmt, 1, id.data(), static_cast<int>(id.size()), SQLITE_TRANSIENT);
        sqlite3_bind_text(stmt, 2, seal_type.data(), static_cast<int>(seal_type.size()),
                          SQLITE_TRANSIENT);
        sqlite3_bind_text(stmt, 3, seal_data.data(), static_cast<int>(seal_data.size()),
                          SQLITE_TRANSIENT);
        rc = sqlite3_step(stmt) == SQLITE_DONE ? SQLITE_OK : SQLITE_ERROR;
    }
    sqlite3_finalize(stmt);
    sqlite3_close(db);
    if (rc != SQLITE_OK)
        throw Error(Errc::io, "cannot write tamper mutation");
}

} // namespace

double TamperSummary::detection_rate() const noexcept
{
    return sealed_trials == 0 ? 0.0
                              : static_cast<double>(detected) / static_cast<double>(sealed_trials);
}

Document TamperSummary::to_document() const
{
    Document doc = Document::object();
    doc["trials"] = static_cast<std::int64_t>(trials);
    doc["sealed_trials"] = static_cast<std::int64_t>(sealed_trials);
    doc["detected"] = static_cast<std::int64_t>(detected);
    doc["out_of_scope"] = static_cast<std::int64_t>(out_of_scope);
    doc["seed"] = static_cast<std::int64_t>(seed);
    // detection rate as an exact per-mille decimal string, not a float
    std::int64_t permille =
        sealed_trials == 0 ? 0
                           : static_cast<std::int64_t>(detected * 1000 / sealed_trials);
    doc["detection_permille"] = permille;
    Document list = Document::array();
    for (const TamperTrial& trial : entries) {
        Document entry = Document::object();
        entry["index"] = static_cast<std::int64_t>(trial.index);
        entry["target"] = trial.target;
        entry["mutation"] = trial.description;
        entry["in_sealed_scope"] = trial.in_sealed_scope;
        entry["detected"] = trial.detected;
        if (!trial.component.empty())
            entry["component"] = trial.component;
        list.push_back(std::move(entry));
    }
    doc["entries"] = std::move(list);
    return doc;
}

TamperSummary run_tamper_simulation(const std::filesystem::path& registry_path,
                                    const MetaSeal& meta, const PublicKey& key,
                                    std::size_t trials, std::uint64_t seed, TamperScope scope)
{
    Rng rng(seed);
    TamperSummary summary;
    summary.trials = trials;
    summary.seed = seed;

    std::filesystem::path work =
        std::filesystem::temp_directory_path() /
        ("metaseal-tamper-" + std::to_string(::getpid()) + ".db");

    std::string meta_bytes = canonical_encode(meta.envelope());

    for (std::size_t i = 0; i < trials; ++i) {
        std::filesystem::copy_file(registry_path, work,
                                   std::filesystem::copy_options::overwrite_existing);
        TamperTrial trial;
        trial.index = i;

        if (scope == TamperScope::journal) {
            Registry registry = Registry::open(work);
            std::vector<JournalEntry> journal = registry.journal();
            if (journal.empty())
                throw Error(Errc::bad_argument,
                            "journal scope requested but the journal is empty");
            const JournalEntry& entry = journal[pick(rng, journal.size())];
            trial.target = "journal:" + std::to_string(entry.seq);
            trial.description = "journal row edit (out of sealed scope)";
            trial.in_sealed_scope = false;
            trial.detected = false;
            summary.out_of_scope += 1;
            summary.entries.push_back(std::move(trial));
            continue;
        }

        // Sealed scope: every stored stage envelope plus the meta envelope.
        std::vector<std::pair<std::string, std::pair<std::string, std::string>>> rows;
        {
            Registry registry = Registry::open(work);
            for (const auto& [id, type] : registry.list_seals()) {
                if (type == kMetaSealType)
                    continue;
                auto row = registry.retrieve_seal(id);
                rows.emplace_back(id, std::move(*row));
            }
        }
        std::size_t target_index = pick(rng, rows.size() + 1); // last slot = meta envelope
        bool field_mutation = pick(rng, 2) == 0;
        trial.in_sealed_scope = true;
        summary.sealed_trials += 1;

        std::optional<MetaSeal> working_meta;
        std::string description;
        if (target_index == rows.size()) {
            trial.target = "meta";
            std::string mutated;
            try {
                mutated = field_mutation ? mutate_one_field(meta_bytes, rng, &description)
                                         : mutate_one_byte(meta_bytes, rng, &description);
            } catch (const Error&) {
                mutated = mutate_one_byte(meta_bytes, rng, &description);
            }
            trial.description = description;
            try {
                working_meta = MetaSeal::from_envelope(canonical_parse(mutated));
            } catch (const Error&) {
                trial.detected = true;
                trial.component = "MALFORMED_RECORD";
            }
        } else {
            const auto& [id, row] = rows[target_index];
            trial.target = "record:" + id;
            std::string mutated;
            std::string new_type = row.first;
            std::size_t kind = pick(rng, 10);
            if (kind == 9) {
                // seal_type column flip
                for (SealStage stage : kAllStages)
                    if (std::string(to_wire(stage)) != row.first) {
                        new_type = to_wire(stage);
                        break;
                    }
                mutated = row.second;
                description = "seal_type column";
            } else if (field_mutation) {
                try {
                    mutated = mutate_one_field(row.second, rng, &description);
                } catch (const Error&) {
                    mutated = mutate_one_byte(row.second, rng, &description);
                }
            } else {
                mutated = mutate_one_byte(row.second, rng, &description);
            }
            trial.description = description;
            write_row_unchecked(work, id, new_type, mutated);
            working_meta = meta;
        }

        if (!trial.detected) {
            Registry registry = Registry::open(work);
            VerificationReport report =
                verify_meta_seal(working_meta ? *working_meta : meta, registry, key);
            if (const CheckResult* failure = report.first_failure()) {
                trial.detected = true;
                trial.component = std::string(component_code(failure->component));
            }
        }
        if (trial.detected)
            summary.detected += 1;
        summary.entries.push_back(std::move(trial));
    }

    std::error_code ec;
    std::filesystem::remove(work, ec);
    return summary;
}

} // namespace metaseal
