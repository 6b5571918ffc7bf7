#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <sqlite3.h>
#include <sys/wait.h>
#include <unistd.h>

#include "metaseal/registry.hpp"
#include "test_support.hpp"

using namespace metaseal;
using metaseal::testing::build_chain;
using metaseal::testing::test_keys;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir()
    {
        path = std::filesystem::temp_directory_path() /
               ("metaseal_registry_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter()
    {
        static int n = 0;
        return n;
    }
};

std::string tiny_envelope(int n)
{
    Document doc = Document::object();
    doc["n"] = n;
    return canonical_encode(doc);
}

} // namespace

TEST_SUITE("registry")
{
    TEST_CASE("open is idempotent; fresh store lists nothing")
    {
        TempDir dir;
        auto db = dir.path / "metaseal.db";
        {
            Registry registry = Registry::open(db);
            CHECK(registry.list_seals().empty());
        }
        {
            Registry registry = Registry::open(db);
            CHECK(registry.list_seals().empty());
            registry.store_seal("a", "meta", tiny_envelope(1));
        }
        Registry registry = Registry::open(db);
        CHECK_EQ(registry.list_seals().size(), 1);
    }

    TEST_CASE("unwritable path fails with an I/O error")
    {
        CHECK_THROWS_WITH_AS(Registry::open("/nonexistent-dir/metaseal.db"),
                             doctest::Contains("IO_ERROR"), Error);
    }

    TEST_CASE("store/retrieve round trip, idempotent re-store, immutability guard")
    {
        TempDir dir;
        Registry registry = Registry::open(dir.path / "metaseal.db");
        std::string bytes = tiny_envelope(7);
        registry.store_seal("id1", "meta", bytes);
        auto row = registry.retrieve_seal("id1");
        REQUIRE(row);
        CHECK_EQ(row->first, "meta");
        CHECK_EQ(row->second, bytes);
        CHECK_FALSE(registry.retrieve_seal("missing"));

        // retrieval does not mutate
        auto before = registry.list_seals();
        registry.retrieve_seal("id1");
        CHECK_EQ(before, registry.list_seals());

        // identical re-store is fine, different bytes are refused
        registry.store_seal("id1", "meta", bytes);
        CHECK_THROWS_WITH_AS(registry.store_seal("id1", "meta", tiny_envelope(8)),
                             doctest::Contains("IMMUTABLE_CONFLICT"), Error);
        CHECK(registry.journal().empty());

        // forced replacement lands in the journal with the prior bytes
        registry.store_seal("id1", "meta", tiny_envelope(8), /*force=*/true);
        auto journal = registry.journal();
        REQUIRE_EQ(journal.size(), 1);
        CHECK_EQ(journal[0].action, "forced_replace");
        CHECK_EQ(journal[0].seal_id, "id1");
        CHECK_EQ(journal[0].prior_data, bytes);
        CHECK_EQ(registry.retrieve_seal("id1")->second, tiny_envelope(8));
    }

    TEST_CASE("stored bytes must be canonical; ids must be non-empty")
    {
        TempDir dir;
        Registry registry = Registry::open(dir.path / "metaseal.db");
        CHECK_THROWS_AS(registry.store_seal("x", "meta", "{not json"), Error);
        CHECK_THROWS_AS(registry.store_seal("x", "meta", "{\"a\": 1}"), Error); // whitespace
        CHECK_THROWS_AS(registry.store_seal("", "meta", tiny_envelope(1)), Error);
    }

    TEST_CASE("list is sorted by id regardless of insertion order")
    {
        TempDir dir;
        Registry registry = Registry::open(dir.path / "metaseal.db");
        registry.store_seal("c", "meta", tiny_envelope(3));
        registry.store_seal("a", "meta", tiny_envelope(1));
        registry.store_seal("b", "meta", tiny_envelope(2));
        auto rows = registry.list_seals();
        REQUIRE_EQ(rows.size(), 3);
        CHECK_EQ(rows[0].first, "a");
        CHECK_EQ(rows[1].first, "b");
        CHECK_EQ(rows[2].first, "c");
    }

    TEST_CASE("property: byte-exact round trips for random envelopes")
    {
        TempDir dir;
        Registry registry = Registry::open(dir.path / "metaseal.db");
        std::mt19937_64 rng(6);
        for (int i = 0; i < 1000; ++i) {
            Document doc = Document::object();
            doc["i"] = i;
            std::string payload;
            for (int j = 0; j < static_cast<int>(rng() % 40); ++j)
                payload += static_cast<char>('a' + rng() % 26);
            doc["payload"] = payload;
            if (rng() % 2) {
                Document nested = Document::array();
                nested.push_back(static_cast<std::int64_t>(rng() % 100000));
                nested.push_back(payload + "!");
                doc["nested"] = nested;
            }
            std::string bytes = canonical_encode(doc);
            std::string id = "seal" + std::to_string(i);
            registry.store_seal(id, "meta", bytes);
            CHECK_EQ(registry.retrieve_seal(id)->second, bytes);
        }
    }

    TEST_CASE("chain records persist through the store view")
    {
        TempDir dir;
        auto chain = build_chain(test_keys());
        {
            Registry registry = Registry::open(dir.path / "metaseal.db");
            for (const SealRecord& record : chain.store.load_records())
                registry.insert_record(record);
            CHECK_THROWS_WITH_AS(
                registry.insert_record(*chain.store.find_record(chain.data_id)),
                doctest::Contains("DUPLICATE_ID"), Error);
        }
        Registry registry = Registry::open(dir.path / "metaseal.db");
        CHECK_EQ(registry.record_count(), 7);
        CHECK(verify_meta_seal(chain.meta, registry, test_keys().public_key).ok());
        SealRecord record = *registry.find_record(chain.train_id);
        CHECK_EQ(record.metadata.stage, SealStage::training);
    }

    TEST_CASE("crash between write and commit leaves the prior state")
    {
        TempDir dir;
        auto db = dir.path / "metaseal.db";
        {
            Registry registry = Registry::open(db);
            registry.store_seal("stable", "meta", tiny_envelope(1));
        }

        pid_t pid = fork();
        REQUIRE_GE(pid, 0);
        if (pid == 0) {
            // child: write inside an open transaction, then die before COMMIT
            sqlite3* raw = nullptr;
            if (sqlite3_open(db.string().c_str(), &raw) != SQLITE_OK)
                _exit(1);
            sqlite3_exec(raw, "BEGIN IMMEDIATE", nullptr, nullptr, nullptr);
            sqlite3_exec(raw,
                         "INSERT INTO seals (id, seal_type, seal_data) "
                         "VALUES ('torn', 'meta', '{\"torn\":true}')",
                         nullptr, nullptr, nullptr);
            _exit(0); // crash point: after write, before commit
        }
        int status = 0;
        waitpid(pid, &status, 0);
        REQUIRE(WIFEXITED(status));
        REQUIRE_EQ(WEXITSTATUS(status), 0);

        Registry reopened = Registry::open(db);
        CHECK_FALSE(reopened.retrieve_seal("torn"));
        auto stable = reopened.retrieve_seal("stable");
        REQUIRE(stable);
        CHECK_EQ(stable->second, tiny_envelope(1));
    }
}

TEST_SUITE("bundles")
{
    TEST_CASE("export/import/verify round trip; re-export is byte-identical")
    {
        TempDir dir;
        auto chain = build_chain(test_keys());
        Registry registry = Registry::open(dir.path / "metaseal.db");
        for (const SealRecord& record : chain.store.load_records())
            registry.insert_record(record);

        auto bundle_path = dir.path / "chain.msbundle.json";
        export_bundle(registry, chain.meta, test_keys().public_key, bundle_path);

        ImportedBundle imported = import_bundle(bundle_path);
        CHECK(verify_meta_seal(imported.meta, imported.records, test_keys().public_key).ok());
        CHECK(verify_meta_seal(imported.meta, imported.records,
                               PublicKey::from_pem(imported.public_key_pem))
                  .ok());

        // re-encode from the imported record set: byte-identical
        std::string original = [&] {
            std::ifstream in(bundle_path, std::ios::binary);
            return std::string((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
        }();
        std::string reencoded =
            encode_bundle(imported.meta, imported.records.load_records(), imported.public_key_pem);
        CHECK_EQ(reencoded, original);
    }

    TEST_CASE("bundle with a deleted seal row verifies as missing")
    {
        TempDir dir;
        auto chain = build_chain(test_keys());
        Registry registry = Registry::open(dir.path / "metaseal.db");
        for (const SealRecord& record : chain.store.load_records())
            registry.insert_record(record);
        auto bundle_path = dir.path / "chain.msbundle.json";
        export_bundle(registry, chain.meta, test_keys().public_key, bundle_path);

        Document doc = parse_document([&] {
            std::ifstream in(bundle_path, std::ios::binary);
            return std::string((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
        }());
        doc["seals"].erase(2);
        auto damaged_path = dir.path / "damaged.msbundle.json";
        std::ofstream(damaged_path, std::ios::binary) << canonical_encode(doc);

        ImportedBundle imported = import_bundle(damaged_path);
        auto report = verify_meta_seal(imported.meta, imported.records, test_keys().public_key);
        CHECK_FALSE(report.ok());
        CHECK_EQ(report.first_failure()->component, Component::missing_record);
    }

    TEST_CASE("export refuses when a bound record is absent")
    {
        TempDir dir;
        auto chain = build_chain(test_keys());
        Registry registry = Registry::open(dir.path / "metaseal.db");
        for (const SealRecord& record : chain.store.load_records())
            if (record.seal_id != chain.eval_id)
                registry.insert_record(record);
        CHECK_THROWS_WITH_AS(export_bundle(registry, chain.meta, test_keys().public_key,
                                           dir.path / "never.msbundle.json"),
                             doctest::Contains("MISSING_RECORD"), Error);
    }

    TEST_CASE("malformed bundles are rejected")
    {
        TempDir dir;
        auto path = dir.path / "bad.msbundle.json";
        std::ofstream(path, std::ios::binary) << "{\"format\":\"something-else\"}";
        CHECK_THROWS_AS(import_bundle(path), Error);
        std::ofstream(path, std::ios::binary | std::ios::trunc) << "not json";
        CHECK_THROWS_AS(import_bundle(path), Error);
        CHECK_THROWS_WITH_AS(import_bundle(dir.path / "missing.msbundle.json"),
                             doctest::Contains("IO_ERROR"), Error);
    }
}
