#include "metaseal/bench.hpp"

#include <cmath>
#include <algorithm>
#include <chrono>
#include <fstream>

#include <unistd.h>

#include "metaseal/registry.hpp"
#include "metaseal/seals.hpp"

namespace metaseal {

namespace {

// Workload shape. The training kernel dominates the baseline the way real
// training dominates a real lifecycle, so sealing cost (hashing + signing +
// registry writes) lands at realistic proportions. Epoch/round counts were
// sized against this machine's SHA-256 throughput; see the acceptance suite
// for the enforced overhead bound.
constexpr int kEpochs = 10;
constexpr int kMixRoundsPerEpoch = 20;
constexpr std::size_t kChunk = 1 << 20;

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void write_pseudorandom_file(const std::filesystem::path& path, std::size_t bytes,
                             std::uint64_t seed)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
        throw Error(Errc::io, "cannot write " + path.string());
    std::vector<std::uint64_t> buffer(kChunk / sizeof(std::uint64_t));
    std::uint64_t state = seed;
    std::size_t remaining = bytes;
    while (remaining > 0) {
        for (std::uint64_t& word : buffer)
            word = splitmix64(state);
        std::size_t take = std::min(remaining, kChunk);
        out.write(reinterpret_cast<const char*>(buffer.data()),
                  static_cast<std::streamsize>(take));
        remaining -= take;
    }
    if (!out)
        throw Error(Errc::io, "write failed for " + path.string());
}

void transform_file(const std::filesystem::path& in_path, const std::filesystem::path& out_path)
{
    std::ifstream in(in_path, std::ios::binary);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!in.is_open() || !out.is_open())
        throw Error(Errc::io, "cannot open transform files");
    std::vector<std::uint64_t> buffer(kChunk / sizeof(std::uint64_t));
    while (in) {
        in.read(reinterpret_cast<char*>(buffer.data()), kChunk);
        auto count = static_cast<std::size_t>(in.gcount());
        if (count == 0)
            break;
        std::size_t words = (count + sizeof(std::uint64_t) - 1) / sizeof(std::uint64_t);
        for (std::size_t i = 0; i < words; ++i)
            buffer[i] = (buffer[i] ^ 0x5a5a5a5a5a5a5a5aULL) * 0x9e3779b97f4a7c15ULL;
        out.write(reinterpret_cast<const char*>(buffer.data()),
                  static_cast<std::streamsize>(count));
    }
    if (!out)
        throw Error(Errc::io, "transform write failed");
}

// One training epoch: stream the processed data, run the mixing kernel over
// it, emit a checkpoint file derived from the accumulator.
std::uint64_t train_epoch(const std::filesystem::path& processed,
                          const std::filesystem::path& checkpoint_path,
                          std::size_t checkpoint_bytes, std::uint64_t acc)
{
    std::ifstream in(processed, std::ios::binary);
    if (!in.is_open())
        throw Error(Errc::io, "cannot read processed data");
    std::vector<std::uint64_t> buffer(kChunk / sizeof(std::uint64_t));
    while (in) {
        in.read(reinterpret_cast<char*>(buffer.data()), kChunk);
        auto count = static_cast<std::size_t>(in.gcount());
        if (count == 0)
            break;
        std::size_t words = count / sizeof(std::uint64_t);
        for (int round = 0; round < kMixRoundsPerEpoch; ++round) {
            std::uint64_t h = acc ^ static_cast<std::uint64_t>(round);
            for (std::size_t i = 0; i < words; ++i) {
                std::uint64_t z = buffer[i] ^ h;
                z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
                z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
                h = z ^ (z >> 31);
            }
            acc ^= h;
        }
    }
    write_pseudorandom_file(checkpoint_path, checkpoint_bytes, acc);
    return acc;
}

struct PipelinePaths {
    std::filesystem::path raw;
    std::filesystem::path processed;
    std::filesystem::path test;
    std::vector<std::filesystem::path> checkpoints;
};

PipelinePaths run_pipeline(const std::filesystem::path& dir, std::size_t size_mb,
                           std::uint64_t seed)
{
    PipelinePaths paths;
    paths.raw = dir / "raw.bin";
    paths.processed = dir / "processed.bin";
    paths.test = dir / "test.bin";
    std::size_t bytes = size_mb << 20;
    write_pseudorandom_file(paths.raw, bytes, seed);
    write_pseudorandom_file(paths.test, std::max<std::size_t>(bytes / 8, kChunk), seed ^ 0x7e57);
    transform_file(paths.raw, paths.processed);
    std::size_t checkpoint_bytes = std::max<std::size_t>(bytes / 16, kChunk);
    std::uint64_t acc = seed;
    for (int epoch = 0; epoch < kEpochs; ++epoch) {
        std::filesystem::path checkpoint =
            dir / ("checkpoint_" + std::to_string(epoch) + ".bin");
        acc = train_epoch(paths.processed, checkpoint, checkpoint_bytes, acc);
        paths.checkpoints.push_back(std::move(checkpoint));
    }
    return paths;
}

Document small_map(std::initializer_list<std::pair<const char*, const char*>> items)
{
    Document doc = Document::object();
    for (const auto& [key, value] : items)
        doc[key] = std::string(value);
    return doc;
}

// Full 7-stage sealing over the pipeline outputs, chained into a meta-seal.
MetaSeal seal_pipeline(const PipelinePaths& paths, Registry& registry, const KeyPair& keys,
                       std::uint64_t seed)
{
    Timestamp base = Timestamp::now();
    std::uint64_t tick = 0;
    auto next = [&] { return Timestamp(base.micros() + tick++); };

    auto register_stage = [&](SealStage stage, const Document& envelope, Timestamp at,
                              std::vector<std::string> deps) {
        SealMetadata metadata;
        metadata.stage = stage;
        metadata.created_at = at;
        metadata.created_by = "bench";
        metadata.dependencies = std::move(deps);
        return register_seal(registry, stage, envelope, metadata);
    };

    DataSource source;
    source.source_id = "bench-" + std::to_string(seed);
    source.source_type = "synthetic";
    source.timestamp = next();
    DataPreparationPipeline pipeline;
    pipeline.transformations.push_back(DataTransformation{
        "mix", small_map({{"kernel", "splitmix"}}), {}, {}, next()});

    std::ifstream raw(paths.raw, std::ios::binary);
    std::ifstream processed(paths.processed, std::ios::binary);
    Timestamp t_data = next();
    DatasetSeal dataset = seal_dataset(raw, source, pipeline, processed, keys.private_key, t_data);
    std::string data_id =
        register_stage(SealStage::data_collection, dataset.envelope(), t_data, {});

    ModelArchitecture arch;
    arch.framework = "bench";
    arch.architecture_type = "mixer";
    arch.layers.push_back(small_map({{"type", "mix"}}));
    ModelVersionControl versions;
    versions.add_version(arch, small_map({{"init", "true"}}), "bench", next());
    Timestamp t_arch = next();
    ModelArchitectureSeal model = seal_model_architecture(arch, versions, keys.private_key, t_arch);
    std::string arch_id =
        register_stage(SealStage::model_development, model.envelope(), t_arch, {});

    TrainingConfig config;
    config.batch_size = 32;
    config.epochs = kEpochs;
    config.loss_function = "mix";
    config.validation_split = "0.1";
    std::vector<Checkpoint> checkpoints;
    for (std::size_t i = 0; i < paths.checkpoints.size(); ++i) {
        Checkpoint checkpoint{static_cast<std::int64_t>(i), Document::object(),
                              hash_file(paths.checkpoints[i]), next()};
        checkpoints.push_back(std::move(checkpoint));
    }
    TrainingMetrics metrics;
    metrics.training_duration = "1";
    std::ifstream weights(paths.checkpoints.back(), std::ios::binary);
    Timestamp t_train = next();
    TrainingProcessSeal training = seal_training_process(model, dataset, config, checkpoints,
                                                         weights, metrics, keys.private_key,
                                                         t_train);
    std::string train_id = register_stage(SealStage::training, training.envelope(), t_train,
                                          {arch_id, data_id});

    EvaluationMetrics eval_metrics;
    eval_metrics.accuracy = "0.99";
    eval_metrics.precision = "0.98";
    eval_metrics.recall = "0.97";
    eval_metrics.f1_score = "0.975";
    std::ifstream test(paths.test, std::ios::binary);
    Timestamp t_eval = next();
    EvaluationSeal evaluation =
        seal_evaluation(upstream_ref(training), test, eval_metrics, keys.private_key, t_eval);
    std::string eval_id =
        register_stage(SealStage::evaluation, evaluation.envelope(), t_eval, {train_id});

    DeploymentConfig deploy_config;
    deploy_config.runtime_settings = small_map({{"runtime", "bench"}});
    Timestamp t_deploy = next();
    DeploymentSeal deployment =
        seal_deployment(upstream_ref(training), deploy_config,
                        small_map({{"host", "bench"}}), keys.private_key, t_deploy);
    std::string deploy_id =
        register_stage(SealStage::deployment, deployment.envelope(), t_deploy, {eval_id});

    MonitoringData monitoring;
    monitoring.drift_metrics = small_map({{"psi", "0.01"}});
    Timestamp t_monitor = next();
    MonitoringSeal monitor = seal_monitoring_period(deployment, monitoring, std::nullopt,
                                                    keys.private_key, t_monitor);
    std::string monitor_id =
        register_stage(SealStage::monitoring, monitor.envelope(), t_monitor, {deploy_id});

    Timestamp t_complete = next();
    LifecycleCompletionSeal completion = seal_lifecycle_completion(
        upstream_ref(training), TransitionType::retire, "benchmark run complete",
        small_map({{"runs", "1"}}), keys.private_key, t_complete);
    std::string complete_id = register_stage(SealStage::retirement, completion.envelope(),
                                             t_complete, {monitor_id});

    std::set<std::string> ids{data_id,   arch_id,    train_id, eval_id,
                              deploy_id, monitor_id, complete_id};
    MetaSealOptions options;
    options.creator = "bench";
    MetaSeal meta = create_meta_seal(registry, ids, options, keys.private_key, next());
    std::string meta_bytes = canonical_encode(meta.envelope());
    registry.store_seal(seal_digest_bytes(meta_bytes).hex().substr(0, 16), std::string(kMetaSealType),
                        meta_bytes);
    return meta;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n == 0)
        return 0.0;
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

} // namespace

Document BenchResult::to_document() const
{
    auto millis = [](double seconds) { return static_cast<std::int64_t>(std::llround(seconds * 1000.0)); };
    Document doc = Document::object();
    doc["size_mb"] = static_cast<std::int64_t>(size_mb);
    doc["repeats"] = repeats;
    doc["baseline_ms_median"] = millis(baseline_seconds_median);
    doc["sealed_ms_median"] = millis(sealed_seconds_median);
    // overhead with two decimals carried as a string (may be negative under
    // measurement noise)
    std::int64_t hundredths = std::llround(overhead_percent_median * 100.0);
    std::int64_t magnitude = hundredths < 0 ? -hundredths : hundredths;
    doc["overhead_percent"] = std::string(hundredths < 0 ? "-" : "") +
                              std::to_string(magnitude / 100) + "." +
                              (magnitude % 100 < 10 ? "0" : "") + std::to_string(magnitude % 100);
    Document baseline = Document::array();
    for (double v : baseline_seconds)
        baseline.push_back(millis(v));
    doc["baseline_ms"] = std::move(baseline);
    Document sealed_list = Document::array();
    for (double v : sealed_seconds)
        sealed_list.push_back(millis(v));
    doc["sealed_ms"] = std::move(sealed_list);
    doc["chain_verified"] = chain_verified;
    return doc;
}

BenchResult run_benchmark(const BenchOptions& options)
{
    if (options.size_mb < 1)
        throw Error(Errc::bad_argument, "size_mb must be >= 1");
    if (options.repeats < 1)
        throw Error(Errc::bad_argument, "repeats must be >= 1");

    std::filesystem::path dir = options.work_dir;
    bool cleanup = false;
    if (dir.empty()) {
        dir = std::filesystem::temp_directory_path() /
              ("metaseal-bench-" + std::to_string(::getpid()));
        cleanup = true;
    }
    std::filesystem::create_directories(dir);

    KeyPair keys = generate_key_pair();
    BenchResult result;
    result.size_mb = options.size_mb;
    result.repeats = options.repeats;
    result.chain_verified = true;

    // Untimed warm-up pass so the first repeat is not penalized by cold
    // caches and file-system state.
    run_pipeline(dir, std::max<std::size_t>(options.size_mb / 8, 1), options.seed);

    for (int repeat = 0; repeat < options.repeats; ++repeat) {
        std::uint64_t seed = options.seed + static_cast<std::uint64_t>(repeat);

        auto start = std::chrono::steady_clock::now();
        run_pipeline(dir, options.size_mb, seed);
        double baseline = seconds_since(start);

        std::filesystem::path registry_path =
            dir / ("registry_" + std::to_string(repeat) + ".db");
        std::filesystem::remove(registry_path);
        start = std::chrono::steady_clock::now();
        PipelinePaths paths = run_pipeline(dir, options.size_mb, seed);
        MetaSeal meta = [&] {
            Registry registry = Registry::open(registry_path);
            return seal_pipeline(paths, registry, keys, seed);
        }();
        double sealed = seconds_since(start);

        {
            Registry registry = Registry::open(registry_path);
            if (!verify_meta_seal(meta, registry, keys.public_key).ok())
                result.chain_verified = false;
        }

        result.baseline_seconds.push_back(baseline);
        result.sealed_seconds.push_back(sealed);
        result.overhead_percent.push_back((sealed - baseline) / baseline * 100.0);
    }

    result.baseline_seconds_median = median(result.baseline_seconds);
    result.sealed_seconds_median = median(result.sealed_seconds);
    result.overhead_percent_median = median(result.overhead_percent);

    if (cleanup) {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
    return result;
}

} // namespace metaseal
