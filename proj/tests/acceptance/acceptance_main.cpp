// Acceptance suite: runs every release criterion end to end and prints one
// PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include <sqlite3.h>
#include <sys/wait.h>
#include <unistd.h>

#include "metaseal/audit.hpp"
#include "metaseal/bench.hpp"
#include "metaseal/registry.hpp"

#include "../test_support.hpp"

namespace fs = std::filesystem;
using namespace metaseal;
using metaseal::testing::build_chain;
using metaseal::testing::make_inputs;

namespace {

const std::string kCli = METASEAL_CLI;
const fs::path kGolden = METASEAL_GOLDEN_DIR;
const fs::path kFixtures = METASEAL_FIXTURE_DIR;

struct Outcome {
    bool passed = true;
    std::string detail;
    void fail(const std::string& why)
    {
        passed = false;
        if (detail.empty())
            detail = why;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw Error(Errc::io, "cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args)
{
    std::string command = kCli + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr)
        throw Error(Errc::io, "cannot spawn CLI");
    std::string output;
    std::array<char, 4096> buffer;
    std::size_t count;
    while ((count = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        output.append(buffer.data(), count);
    int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), std::move(output)};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
    {
        path = fs::temp_directory_path() /
               ("metaseal_acceptance_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// ---- demo chain built through the real CLI ------------------------------------

struct CliChain {
    fs::path registry;
    fs::path meta;
    fs::path pubkey;
    std::vector<std::string> ids;
};

CliChain build_cli_chain(const fs::path& dir)
{
    auto fixture = [&](const char* name) { return (kFixtures / name).string(); };
    CliChain chain;
    chain.registry = dir / "metaseal.db";
    chain.meta = dir / "meta.json";
    chain.pubkey = dir / "public.pem";
    if (run_cli("keygen --out-dir " + dir.string()).exit_code != 0)
        throw Error(Errc::crypto, "keygen failed");
    std::string common = " --registry " + chain.registry.string() + " --key " +
                         (dir / "private.pem").string() + " --creator acceptance";
    std::uint64_t t0 = 1760000001000000ULL;
    auto seal = [&](const std::string& args, std::uint64_t at) {
        RunResult result = run_cli("seal " + args + common + " --at " + std::to_string(at));
        if (result.exit_code != 0)
            throw Error(Errc::crypto, "seal failed: " + result.output);
        std::string id = result.output.substr(0, result.output.find('\n'));
        chain.ids.push_back(id);
        return id;
    };
    std::string data_id =
        seal("data --raw " + fixture("raw.bin") + " --processed " + fixture("processed.bin") +
                 " --source " + fixture("source.json") + " --pipeline " + fixture("pipeline.json"),
             t0);
    std::string arch_id = seal("arch --architecture " + fixture("architecture.json") +
                                   " --versions " + fixture("versions.json"),
                               t0 + 10);
    std::string train_id =
        seal("train --config " + fixture("train_config.json") + " --checkpoints " +
                 fixture("checkpoints.json") + " --weights " + fixture("weights.bin") +
                 " --metrics " + fixture("train_metrics.json") + " --depends-on " + arch_id +
                 " --depends-on " + data_id,
             t0 + 20);
    std::string eval_id = seal("eval --test-data " + fixture("test.bin") + " --metrics " +
                                   fixture("eval_metrics.json") + " --depends-on " + train_id,
                               t0 + 30);
    std::string deploy_id = seal("deploy --config " + fixture("deploy_config.json") +
                                     " --environment " + fixture("environment.json") +
                                     " --depends-on " + train_id,
                                 t0 + 40);
    std::string monitor_id = seal("monitor --data " + fixture("monitor_data.json") +
                                      " --depends-on " + deploy_id,
                                  t0 + 50);
    seal("complete --transition retire --justification done --history " + fixture("history.json") +
             " --depends-on " + train_id,
         t0 + 60);
    RunResult meta = run_cli("meta create --registry " + chain.registry.string() + " --key " +
                             (dir / "private.pem").string() + " --creator acceptance --out " +
                             chain.meta.string() + " --at " + std::to_string(t0 + 100));
    if (meta.exit_code != 0)
        throw Error(Errc::crypto, "meta create failed: " + meta.output);
    return chain;
}

// ---- mutation helpers -----------------------------------------------------------

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t bound)
{
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

std::string mutate_byte(std::string bytes, Rng& rng)
{
    std::size_t pos = pick(rng, bytes.size());
    unsigned char original = static_cast<unsigned char>(bytes[pos]);
    unsigned char replacement = original;
    while (replacement == original)
        replacement = static_cast<unsigned char>(1 + pick(rng, 255));
    bytes[pos] = static_cast<char>(replacement);
    return bytes;
}

void collect_pointers(const Document& doc, const std::string& pointer,
                      std::vector<std::string>& out)
{
    if (doc.is_object()) {
        for (auto it = doc.begin(); it != doc.end(); ++it)
            collect_pointers(it.value(), pointer + "/" + it.key(), out);
    } else if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i)
            collect_pointers(doc[i], pointer + "/" + std::to_string(i), out);
    } else {
        out.push_back(pointer);
    }
}

std::string mutate_field(const std::string& bytes, Rng& rng)
{
    Document doc = canonical_parse(bytes);
    std::vector<std::string> pointers;
    collect_pointers(doc, "", pointers);
    Document& leaf = doc.at(Document::json_pointer(pointers[pick(rng, pointers.size())]));
    if (leaf.is_string()) {
        std::string value = leaf.get<std::string>();
        if (value.empty()) {
            leaf = "x";
        } else {
            std::size_t pos = pick(rng, value.size());
            static constexpr char alphabet[] = "0123456789abcdef";
            char replacement = value[pos];
            while (replacement == value[pos])
                replacement = alphabet[pick(rng, sizeof alphabet - 1)];
            value[pos] = replacement;
            leaf = value;
        }
    } else if (leaf.is_boolean()) {
        leaf = !leaf.get<bool>();
    } else if (leaf.is_number_integer() || leaf.is_number_unsigned()) {
        leaf = leaf.get<std::int64_t>() + 1;
    } else {
        leaf = false;
    }
    return canonical_encode(doc);
}

void raw_update_row(const fs::path& db, const std::string& id, const std::string& data)
{
    sqlite3* handle = nullptr;
    if (sqlite3_open(db.string().c_str(), &handle) != SQLITE_OK)
        throw Error(Errc::io, "cannot open working registry");
    sqlite3_stmt* stmt = nullptr;
    sqlite3_prepare_v2(handle, "UPDATE seals SET seal_data = ?2 WHERE id = ?1", -1, &stmt,
                       nullptr);
    sqlite3_bind_text(stmt, 1, id.data(), static_cast<int>(id.size()), SQLITE_TRANSIENT);
    sqlite3_bind_text(stmt, 2, data.data(), static_cast<int>(data.size()), SQLITE_TRANSIENT);
    sqlite3_step(stmt);
    sqlite3_finalize(stmt);
    sqlite3_close(handle);
}

// ---- criteria -------------------------------------------------------------------

Outcome criterion_tamper_evidence()
{
    Outcome outcome;
    auto start = std::chrono::steady_clock::now();
    TempDir dir("tamper");
    CliChain chain = build_cli_chain(dir.path);

    std::vector<std::pair<std::string, std::string>> rows;
    {
        Registry registry = Registry::open(chain.registry);
        for (const auto& [id, type] : registry.list_seals())
            if (type != kMetaSealType)
                rows.emplace_back(id, registry.retrieve_seal(id)->second);
    }
    std::string meta_bytes = read_file(chain.meta);

    const std::size_t trials = 200;
    Rng rng(20260809);
    std::regex fail_line(R"(\[FAIL\] ([A-Z_]+))");
    fs::path work_db = dir.path / "work.db";
    fs::path work_meta = dir.path / "work_meta.json";
    std::size_t detected = 0;

    for (std::size_t i = 0; i < trials; ++i) {
        fs::copy_file(chain.registry, work_db, fs::copy_options::overwrite_existing);
        std::size_t target = pick(rng, rows.size() + 1);
        bool use_field = pick(rng, 2) == 0;
        fs::path meta_arg = chain.meta;
        if (target == rows.size()) {
            std::string mutated;
            try {
                mutated = use_field ? mutate_field(meta_bytes, rng) : mutate_byte(meta_bytes, rng);
            } catch (const Error&) {
                mutated = mutate_byte(meta_bytes, rng);
            }
            std::ofstream(work_meta, std::ios::binary | std::ios::trunc) << mutated;
            meta_arg = work_meta;
        } else {
            const auto& [id, bytes] = rows[target];
            std::string mutated;
            try {
                mutated = use_field ? mutate_field(bytes, rng) : mutate_byte(bytes, rng);
            } catch (const Error&) {
                mutated = mutate_byte(bytes, rng);
            }
            raw_update_row(work_db, id, mutated);
        }
        RunResult result = run_cli("verify --meta " + meta_arg.string() + " --registry " +
                                   work_db.string() + " --pubkey " + chain.pubkey.string());
        bool named = std::regex_search(result.output, fail_line) ||
                     result.output.find("MALFORMED") != std::string::npos;
        if (result.exit_code == 1 && named) {
            ++detected;
        } else {
            outcome.fail("trial " + std::to_string(i) + " undetected (exit " +
                         std::to_string(result.exit_code) + ")");
        }
    }
    double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << detected << "/" << trials << " seeded mutations detected by cmd_verify in "
           << static_cast<int>(elapsed) << "s";
    if (elapsed >= 60.0)
        outcome.fail("runtime " + std::to_string(elapsed) + "s exceeds 60s");
    if (outcome.passed)
        outcome.detail = detail.str();
    return outcome;
}

Outcome criterion_round_trip()
{
    Outcome outcome;
    auto start = std::chrono::steady_clock::now();
    TempDir dir("roundtrip");
    KeyPair keys = generate_key_pair();
    Rng rng(7);

    const int chains = 100;
    for (int i = 0; i < chains; ++i) {
        std::uint64_t t0 = 1700000000000000ULL + static_cast<std::uint64_t>(rng() % 1000000) * 100;
        auto inputs = make_inputs(t0);
        inputs.raw = "raw-" + std::to_string(rng());
        inputs.processed = "processed-" + std::to_string(rng());
        inputs.weights = "weights-" + std::to_string(rng());
        inputs.test_data = "test-" + std::to_string(rng());
        inputs.source.source_id = "src-" + std::to_string(rng() % 100000);
        inputs.evaluation_metrics.accuracy = "0." + std::to_string(10 + rng() % 90);
        inputs.monitoring.drift_metrics["psi"] = "0.0" + std::to_string(1 + rng() % 9);
        inputs.history["final_accuracy"] = inputs.evaluation_metrics.accuracy;
        inputs.creator = "chain-" + std::to_string(i);

        auto chain = build_chain(keys, t0, inputs);

        fs::path db = dir.path / ("chain_" + std::to_string(i) + ".db");
        Registry registry = Registry::open(db);
        for (const SealRecord& record : chain.store.load_records())
            registry.insert_record(record);

        fs::path bundle = dir.path / ("chain_" + std::to_string(i) + ".msbundle.json");
        export_bundle(registry, chain.meta, keys.public_key, bundle);
        ImportedBundle imported = import_bundle(bundle);
        VerificationReport report =
            verify_meta_seal(imported.meta, imported.records,
                             PublicKey::from_pem(imported.public_key_pem));
        if (classify(report) != Verdict::verified) {
            outcome.fail("chain " + std::to_string(i) + " verdict " +
                         std::string(verdict_name(classify(report))));
            break;
        }
        fs::remove(db);
        fs::remove(bundle);
    }
    double elapsed = seconds_since(start);
    if (elapsed >= 120.0)
        outcome.fail("runtime " + std::to_string(elapsed) + "s exceeds 120s");
    if (outcome.passed)
        outcome.detail = std::to_string(chains) + " randomized chains create->store->export->"
                         "import->verify VERIFIED in " + std::to_string(static_cast<int>(elapsed)) +
                         "s";
    return outcome;
}

// Independent oracle: reachability closure over the adjacency bitmask.
bool closure_has_cycle(unsigned n, const std::vector<std::uint32_t>& adjacency)
{
    std::vector<std::uint32_t> reach = adjacency;
    for (unsigned k = 0; k < n; ++k)
        for (unsigned i = 0; i < n; ++i)
            if (reach[i] & (1u << k))
                reach[i] |= reach[k];
    for (unsigned i = 0; i < n; ++i)
        if (reach[i] & (1u << i))
            return true;
    return false;
}

DependencyGraph graph_from_mask(unsigned n, const std::vector<std::uint32_t>& adjacency)
{
    static const std::array<std::string, 8> names = {"n0", "n1", "n2", "n3",
                                                     "n4", "n5", "n6", "n7"};
    DependencyGraph graph;
    for (unsigned i = 0; i < n; ++i) {
        std::vector<std::string> deps;
        for (unsigned j = 0; j < n; ++j)
            if (adjacency[i] & (1u << j))
                deps.push_back(names[j]);
        graph[names[i]] = std::move(deps);
    }
    return graph;
}

Outcome criterion_cycle_oracle()
{
    Outcome outcome;
    auto start = std::chrono::steady_clock::now();
    std::size_t checked = 0;

    // Exhaustive: all graphs on 4 nodes including self-loops (2^16).
    for (std::uint32_t mask = 0; mask < (1u << 16); ++mask) {
        std::vector<std::uint32_t> adjacency(4);
        for (unsigned i = 0; i < 4; ++i)
            adjacency[i] = (mask >> (4 * i)) & 0xfu;
        bool expected = closure_has_cycle(4, adjacency);
        if (has_circular_dependencies(graph_from_mask(4, adjacency)) != expected) {
            outcome.fail("disagreement on 4-node mask " + std::to_string(mask));
            return outcome;
        }
        ++checked;
    }

    // Fixed-seed sample (>=50k allowed) of the 2^20 five-node space
    // (non-loop edges), self-loops covered above.
    Rng rng(12345);
    for (int trial = 0; trial < 120000; ++trial) {
        std::uint32_t mask = static_cast<std::uint32_t>(rng() & 0xfffffu);
        std::vector<std::uint32_t> adjacency(5, 0);
        unsigned bit = 0;
        for (unsigned i = 0; i < 5; ++i)
            for (unsigned j = 0; j < 5; ++j) {
                if (i == j)
                    continue;
                if (mask & (1u << bit))
                    adjacency[i] |= (1u << j);
                ++bit;
            }
        bool expected = closure_has_cycle(5, adjacency);
        if (has_circular_dependencies(graph_from_mask(5, adjacency)) != expected) {
            outcome.fail("disagreement on 5-node mask " + std::to_string(mask));
            return outcome;
        }
        ++checked;
    }

    // 500 random 8-node graphs, self-loops allowed.
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::uint32_t> adjacency(8, 0);
        for (unsigned i = 0; i < 8; ++i)
            adjacency[i] = static_cast<std::uint32_t>(rng() & 0xffu);
        bool expected = closure_has_cycle(8, adjacency);
        if (has_circular_dependencies(graph_from_mask(8, adjacency)) != expected) {
            outcome.fail("disagreement on an 8-node graph");
            return outcome;
        }
        ++checked;
    }

    outcome.detail = std::to_string(checked) + " graphs, zero disagreements, " +
                     std::to_string(static_cast<int>(seconds_since(start))) + "s";
    return outcome;
}

Outcome criterion_determinism()
{
    Outcome outcome;
    Document vectors = parse_document(read_file(kGolden / "vectors.json"));

    auto expect = [&](const std::string& what, const std::string& got,
                      const std::string& want) {
        if (got != want)
            outcome.fail(what + ": got " + got + ", want " + want);
    };

    // Externally computed single values.
    expect("sha256(\"\")", hash_bytes("").hex(), vectors.at("sha256_empty").get<std::string>());
    expect("sha256(\"abc\")", hash_bytes("abc").hex(), vectors.at("sha256_abc").get<std::string>());
    expect("sha256(\"[]\")", hash_bytes("[]").hex(), vectors.at("sha256_empty_list").get<std::string>());
    expect("sha256(\"{}\")", hash_bytes("{}").hex(), vectors.at("sha256_empty_map").get<std::string>());
    Digest e = hash_bytes("");
    Digest a = hash_bytes("abc");
    expect("combine(e,e)", combine_digests({e, e}).hex(), vectors.at("combine_empty_empty").get<std::string>());
    expect("combine(e,abc)", combine_digests({e, a}).hex(), vectors.at("combine_empty_abc").get<std::string>());
    expect("combine(abc,e)", combine_digests({a, e}).hex(), vectors.at("combine_abc_empty").get<std::string>());
    expect("seal id example",
           generate_seal_id(SealStage::data_collection, Timestamp(1700000000000000ULL), 0),
           vectors.at("seal_id_example").get<std::string>());
    for (const Document& example : vectors.at("canonical_examples"))
        expect("canonical example", canonical_encode(example.at("doc")),
               example.at("bytes").get<std::string>());

    // Recompute every chain-derived value from the fixture inputs, twice; both
    // passes must match the golden vectors (produced by an independent
    // implementation) byte for byte.
    const Document& chain = vectors.at("chain");
    const Document& golden_digests = chain.at("component_digests");
    Document inputs = canonical_parse(read_file(kGolden / "fixture" / "inputs.json"));
    std::uint64_t t0 = Timestamp::from_wire(chain.at("t0").get<std::string>()).micros();

    for (int pass = 0; pass < 2; ++pass) {
        auto check_digest = [&](const char* name, const Digest& got) {
            expect(std::string("pass ") + std::to_string(pass) + " " + name, got.hex(),
                   golden_digests.at(name).get<std::string>());
        };
        check_digest("raw_data_hash", hash_file(kGolden / "fixture" / "raw.bin"));
        check_digest("processed_data_hash", hash_file(kGolden / "fixture" / "processed.bin"));
        check_digest("test_data_hash", hash_file(kGolden / "fixture" / "test.bin"));
        check_digest("weights_hash", hash_file(kGolden / "fixture" / "weights.bin"));

        DataSource source = DataSource::from_record(inputs.at("source"));
        check_digest("source_hash", hash_canonical(source.to_record()));
        DataPreparationPipeline pipeline =
            DataPreparationPipeline::from_record(inputs.at("pipeline"));
        check_digest("pipeline_hash", pipeline.hash());
        ModelArchitecture architecture =
            ModelArchitecture::from_record(inputs.at("architecture"));
        check_digest("architecture_hash", hash_canonical(architecture.to_record()));
        ModelVersionControl versions = ModelVersionControl::from_record(inputs.at("versions"));
        check_digest("version_hash", hash_canonical(versions.versions_record()));
        TrainingConfig config = TrainingConfig::from_record(inputs.at("train_config"));
        check_digest("config_hash", hash_canonical(config.to_record()));
        std::vector<Checkpoint> checkpoints;
        for (const Document& record : inputs.at("checkpoints"))
            checkpoints.push_back(Checkpoint::from_record(record));
        check_digest("checkpoints_hash", hash_canonical(checkpoints_record(checkpoints)));
        TrainingMetrics train_metrics = TrainingMetrics::from_record(inputs.at("train_metrics"));
        check_digest("metrics_hash", hash_canonical(train_metrics.to_record()));
        EvaluationMetrics eval_metrics =
            EvaluationMetrics::from_record(inputs.at("eval_metrics"));
        check_digest("eval_metrics_hash", hash_canonical(eval_metrics.to_record()));
        DeploymentConfig deploy_config =
            DeploymentConfig::from_record(inputs.at("deploy_config"));
        check_digest("deploy_config_hash", hash_canonical(deploy_config.to_record()));
        check_digest("environment_hash", hash_canonical(inputs.at("environment")));
        MonitoringData monitoring = MonitoringData::from_record(inputs.at("monitoring"));
        check_digest("monitoring_hash", hash_canonical(monitoring.to_record()));
        check_digest("maintenance_hash", hash_bytes("{}"));
        check_digest("transition_hash", hash_canonical(inputs.at("transition")));
        check_digest("history_hash", hash_canonical(inputs.at("history")));

        // Seal ids reproduce from (stage, created_at, registration index).
        const Document& golden_ids = chain.at("seal_ids");
        std::size_t index = 0;
        for (SealStage stage : kAllStages) {
            std::uint64_t at = t0 + 10 * (index + 1);
            expect("seal id " + std::string(to_wire(stage)),
                   generate_seal_id(stage, Timestamp(at), index),
                   golden_ids.at(std::string(to_wire(stage))).get<std::string>());
            ++index;
        }
    }

    // The stored fixture chain was produced by the independent implementation:
    // re-derive the seals hash, verify every signature, and re-encode the
    // bundle byte-identically.
    ImportedBundle bundle = import_bundle(kGolden / "fixture" / "chain.msbundle.json");
    PublicKey fixture_key = PublicKey::from_pem(bundle.public_key_pem);
    expect("fixture key fingerprint", fixture_key.fingerprint().hex(),
           chain.at("key_fingerprint").get<std::string>());
    expect("seals_hash", generate_seals_hash(bundle.records.load_records()).hex(),
           chain.at("seals_hash").get<std::string>());
    expect("meta seals_hash field", bundle.meta.seals_hash.hex(),
           chain.at("seals_hash").get<std::string>());
    VerificationReport fixture_report =
        verify_meta_seal(bundle.meta, bundle.records, fixture_key);
    if (!fixture_report.ok())
        outcome.fail("independently produced fixture chain does not verify: " +
                     std::string(component_code(fixture_report.first_failure()->component)));
    std::string bundle_bytes = read_file(kGolden / "fixture" / "chain.msbundle.json");
    if (encode_bundle(bundle.meta, bundle.records.load_records(), bundle.public_key_pem) !=
        bundle_bytes)
        outcome.fail("bundle re-encoding is not byte-identical");
    std::string meta_bytes = read_file(kGolden / "fixture" / "meta.json");
    if (canonical_encode(bundle.meta.envelope()) != meta_bytes)
        outcome.fail("meta envelope re-encoding is not byte-identical");

    // Two fresh builds with fixed timestamps and the fixture key: identical
    // digests and ids, fresh PSS signatures, both verifying.
    PrivateKey fixture_private =
        PrivateKey::from_pem(read_file(kGolden / "fixture" / "private.pem"));
    KeyPair fixture_pair{fixture_private, fixture_key};
    auto first = build_chain(fixture_pair);
    auto second = build_chain(fixture_pair);
    // Content digests are byte-identical across runs. Chaining digests
    // (upstream seal digests) intentionally differ: they cover the PSS
    // signature of the upstream envelope.
    if (first.dataset.component_digests() != second.dataset.component_digests() ||
        first.model.component_digests() != second.model.component_digests())
        outcome.fail("fresh builds disagree on content digests");
    std::array<std::pair<const Digest*, const Digest*>, 10> content_pairs = {{
        {&first.training.config_hash, &second.training.config_hash},
        {&first.training.checkpoints_hash, &second.training.checkpoints_hash},
        {&first.training.weights_hash, &second.training.weights_hash},
        {&first.training.metrics_hash, &second.training.metrics_hash},
        {&first.evaluation.test_data_hash, &second.evaluation.test_data_hash},
        {&first.evaluation.metrics_hash, &second.evaluation.metrics_hash},
        {&first.deployment.config_hash, &second.deployment.config_hash},
        {&first.deployment.environment_hash, &second.deployment.environment_hash},
        {&first.completion.transition_hash, &second.completion.transition_hash},
        {&first.completion.history_hash, &second.completion.history_hash},
    }};
    for (const auto& [lhs, rhs] : content_pairs)
        if (!(*lhs == *rhs))
            outcome.fail("fresh builds disagree on a content digest");
    if (first.store.record_ids() != second.store.record_ids())
        outcome.fail("fresh builds disagree on seal ids");
    if (first.dataset.signature.hex() == second.dataset.signature.hex())
        outcome.fail("PSS signatures unexpectedly identical");
    if (first.training.model_seal_digest == second.training.model_seal_digest)
        outcome.fail("re-signed upstream seals should yield distinct chaining digests");
    if (!verify_meta_seal(first.meta, first.store, fixture_key).ok() ||
        !verify_meta_seal(second.meta, second.store, fixture_key).ok())
        outcome.fail("fresh builds do not verify");

    if (outcome.passed)
        outcome.detail = "all golden vectors reproduced byte-for-byte; "
                         "independent-implementation chain verifies";
    return outcome;
}

Outcome criterion_bench()
{
    Outcome outcome;
    auto start = std::chrono::steady_clock::now();
    BenchOptions options;
    options.size_mb = 64;
    options.repeats = 5;
    BenchResult result = run_benchmark(options);
    double elapsed = seconds_since(start);

    std::ostringstream detail;
    detail.setf(std::ios::fixed);
    detail.precision(2);
    detail << "median overhead " << result.overhead_percent_median << "% (bound 5%, reported "
           << "band 1.8%-3.1%), baseline " << result.baseline_seconds_median << "s, sealed "
           << result.sealed_seconds_median << "s, " << static_cast<int>(elapsed) << "s total";
    outcome.detail = detail.str();
    if (result.overhead_percent_median > 5.0)
        outcome.fail(detail.str() + " — exceeds 5% bound");
    if (!result.chain_verified)
        outcome.fail("sealed run's chain failed verification");
    return outcome;
}

Outcome criterion_completeness()
{
    Outcome outcome;
    KeyPair keys = metaseal::testing::test_keys();
    auto chain = build_chain(keys);
    MetaSealOptions options;
    options.creator = "acceptance";

    std::set<std::string> all_ids(chain.meta.seal_ids.begin(), chain.meta.seal_ids.end());
    for (const std::string& dropped : chain.meta.seal_ids) {
        std::set<std::string> subset = all_ids;
        subset.erase(dropped);
        std::string missing_stage =
            std::string(to_wire(chain.store.find_record(dropped)->metadata.stage));
        try {
            create_meta_seal(chain.store, subset, options, keys.private_key,
                             Timestamp(1700000000000001ULL));
            outcome.fail("6-of-7 subset missing " + missing_stage + " was accepted");
        } catch (const Error& e) {
            if (e.code() != Errc::missing_stage ||
                std::string(e.what()).find(missing_stage) == std::string::npos)
                outcome.fail("wrong error for missing " + missing_stage + ": " + e.what());
        }
    }

    try {
        MetaSeal full = create_meta_seal(chain.store, all_ids, options, keys.private_key,
                                         Timestamp(1700000000000002ULL));
        if (!verify_meta_seal(full, chain.store, keys.public_key).ok())
            outcome.fail("full 7-stage meta-seal does not verify");
    } catch (const Error& e) {
        outcome.fail(std::string("full 7-stage set rejected: ") + e.what());
    }
    if (outcome.passed)
        outcome.detail = "each 6-of-7 subset rejected naming the missing stage; "
                         "full set accepted";
    return outcome;
}

} // namespace

int main()
{
    struct Criterion {
        int number;
        std::string title;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "tamper-evidence suite (>=200 seeded mutations, 100% detected, <60s)",
         criterion_tamper_evidence},
        {2, "round-trip suite (>=100 randomized chains VERIFIED, <120s)", criterion_round_trip},
        {3, "cycle-detector oracle equivalence (exhaustive + sampled + 8-node random)",
         criterion_cycle_oracle},
        {4, "determinism against independently computed golden vectors", criterion_determinism},
        {5, "overhead benchmark (64 MiB x 5 repeats, median <= 5%)", criterion_bench},
        {6, "stage completeness rule (6-of-7 rejected, 7-of-7 accepted)",
         criterion_completeness},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        std::cout << (outcome.passed ? "PASS" : "FAIL") << " criterion-" << criterion.number
                  << ": " << criterion.title;
        if (!outcome.detail.empty())
            std::cout << " — " << outcome.detail;
        std::cout << "\n" << std::flush;
        if (!outcome.passed)
            ++failures;
    }
    std::cout << "SKIP criterion-7: organizational case-study percentages are survey outcomes "
                 "with no computable procedure; intentionally untested\n";
    return failures == 0 ? 0 : 1;
}
