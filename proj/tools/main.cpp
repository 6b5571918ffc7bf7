#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metaseal/audit.hpp"
#include "metaseal/bench.hpp"
#include "metaseal/meta_seal.hpp"
#include "metaseal/registry.hpp"
#include "metaseal/seals.hpp"
#include "metaseal/tamper.hpp"

namespace ms = metaseal;

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEnvironment = 3;

int exit_code_for(const ms::Error& e)
{
    switch (e.code()) {
    case ms::Errc::io:
    case ms::Errc::crypto:
        return kExitEnvironment;
    case ms::Errc::missing_stage:
        return kExitVerificationFailed;
    default:
        return kExitUsage;
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw ms::Error(ms::Errc::io, "cannot read " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw ms::Error(ms::Errc::io, "read failed for " + path.string());
    return data;
}

ms::Document load_json(const std::filesystem::path& path)
{
    try {
        return ms::parse_document(read_file(path));
    } catch (const ms::Error& e) {
        if (e.code() == ms::Errc::io)
            throw;
        throw ms::Error(ms::Errc::bad_argument, path.string() + ": " + e.what());
    }
}

std::ifstream open_binary(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw ms::Error(ms::Errc::io, "cannot read " + path.string());
    return in;
}

const ms::Document* field(const ms::Document& doc, const char* key)
{
    auto it = doc.find(key);
    return it == doc.end() ? nullptr : &*it;
}

ms::Timestamp field_timestamp(const ms::Document& doc, const char* key, ms::Timestamp fallback)
{
    const ms::Document* value = field(doc, key);
    if (value == nullptr)
        return fallback;
    if (value->is_string())
        return ms::Timestamp::from_wire(value->get<std::string>());
    if (value->is_number_unsigned() || value->is_number_integer())
        return ms::Timestamp(value->get<std::uint64_t>());
    throw ms::Error(ms::Errc::bad_argument,
                    std::string(key) + " must be an integer or wire string");
}

std::string field_string(const ms::Document& doc, const char* key, const std::string& fallback)
{
    const ms::Document* value = field(doc, key);
    if (value == nullptr)
        return fallback;
    if (!value->is_string())
        throw ms::Error(ms::Errc::bad_argument, std::string(key) + " must be a string");
    return value->get<std::string>();
}

ms::Document field_doc(const ms::Document& doc, const char* key, ms::Document fallback)
{
    const ms::Document* value = field(doc, key);
    return value == nullptr ? fallback : *value;
}

// -- descriptor loaders; omitted optional fields get sensible defaults -------------

ms::DataSource load_data_source(const std::filesystem::path& path, ms::Timestamp now)
{
    ms::Document doc = load_json(path);
    ms::DataSource source;
    source.source_id = field_string(doc, "source_id", "");
    source.source_type = field_string(doc, "source_type", "");
    source.timestamp = field_timestamp(doc, "timestamp", now);
    source.metadata = field_doc(doc, "metadata", ms::Document::object());
    source.validation_rules = field_doc(doc, "validation_rules", ms::Document::object());
    return source;
}

ms::DataPreparationPipeline load_pipeline(const std::filesystem::path& path, ms::Timestamp now)
{
    ms::Document doc = load_json(path);
    if (!doc.is_array())
        throw ms::Error(ms::Errc::bad_argument, path.string() + ": pipeline must be a list");
    ms::DataPreparationPipeline pipeline;
    for (const ms::Document& entry : doc) {
        ms::DataTransformation t;
        t.operation_type = field_string(entry, "operation_type", "");
        t.parameters = field_doc(entry, "parameters", ms::Document::object());
        for (const char* key : {"input_shape", "output_shape"}) {
            const ms::Document* shape = field(entry, key);
            if (shape != nullptr)
                for (const ms::Document& dim : *shape)
                    (std::string(key) == "input_shape" ? t.input_shape : t.output_shape)
                        .push_back(dim.get<std::int64_t>());
        }
        t.timestamp = field_timestamp(entry, "timestamp", now);
        pipeline.transformations.push_back(std::move(t));
    }
    return pipeline;
}

ms::ModelArchitecture load_architecture(const ms::Document& doc)
{
    ms::ModelArchitecture arch;
    arch.framework = field_string(doc, "framework", "");
    arch.architecture_type = field_string(doc, "architecture_type", "");
    arch.layers = field_doc(doc, "layers", ms::Document::array());
    arch.hyperparameters = field_doc(doc, "hyperparameters", ms::Document::object());
    arch.optimization_config = field_doc(doc, "optimization_config", ms::Document::object());
    const ms::Document* custom = field(doc, "custom_components");
    if (custom != nullptr && !custom->is_null())
        arch.custom_components = *custom;
    return arch;
}

ms::ModelVersionControl load_versions(const std::filesystem::path& path,
                                      const std::string& default_author, ms::Timestamp now)
{
    ms::Document doc = load_json(path);
    if (!doc.is_array())
        throw ms::Error(ms::Errc::bad_argument, path.string() + ": versions must be a list");
    ms::ModelVersionControl vc;
    for (const ms::Document& entry : doc) {
        const ms::Document* arch = field(entry, "architecture");
        if (arch == nullptr)
            throw ms::Error(ms::Errc::bad_argument,
                            path.string() + ": version entries need an architecture");
        vc.add_version(load_architecture(*arch), field_doc(entry, "changes", ms::Document::object()),
                       field_string(entry, "author", default_author),
                       field_timestamp(entry, "timestamp", now));
    }
    return vc;
}

ms::TrainingConfig load_training_config(const std::filesystem::path& path)
{
    ms::Document doc = load_json(path);
    ms::TrainingConfig config;
    const ms::Document* batch = field(doc, "batch_size");
    config.batch_size = batch != nullptr ? batch->get<std::int64_t>() : 1;
    const ms::Document* epochs = field(doc, "epochs");
    config.epochs = epochs != nullptr ? epochs->get<std::int64_t>() : 0;
    config.optimizer_config = field_doc(doc, "optimizer_config", ms::Document::object());
    config.loss_function = field_string(doc, "loss_function", "");
    const ms::Document* metrics = field(doc, "metrics");
    if (metrics != nullptr)
        for (const ms::Document& name : *metrics)
            config.metrics.push_back(name.get<std::string>());
    config.validation_split = field_string(doc, "validation_split", "0");
    config.callbacks = field_doc(doc, "callbacks", ms::Document::array());
    return config;
}

std::vector<ms::Checkpoint> load_checkpoints(const std::filesystem::path& path, ms::Timestamp now)
{
    ms::Document doc = load_json(path);
    if (!doc.is_array())
        throw ms::Error(ms::Errc::bad_argument, path.string() + ": checkpoints must be a list");
    std::vector<ms::Checkpoint> checkpoints;
    for (const ms::Document& entry : doc) {
        const ms::Document* epoch = field(entry, "epoch");
        ms::Digest weights = [&] {
            const ms::Document* hash = field(entry, "weights_hash");
            if (hash != nullptr)
                return ms::Digest::from_hex(hash->get<std::string>());
            const ms::Document* file = field(entry, "weights_file");
            if (file != nullptr) {
                std::filesystem::path weights_path = file->get<std::string>();
                if (weights_path.is_relative())
                    weights_path = path.parent_path() / weights_path;
                return ms::hash_file(weights_path);
            }
            throw ms::Error(ms::Errc::bad_argument,
                            "checkpoint entries need weights_hash or weights_file");
        }();
        ms::Checkpoint checkpoint{epoch != nullptr ? epoch->get<std::int64_t>() : 0,
                                  field_doc(entry, "metrics", ms::Document::object()), weights,
                                  field_timestamp(entry, "timestamp", now)};
        checkpoints.push_back(std::move(checkpoint));
    }
    return checkpoints;
}

ms::TrainingMetrics load_training_metrics(const std::filesystem::path& path)
{
    ms::Document doc = load_json(path);
    ms::TrainingMetrics metrics;
    metrics.epoch_metrics = field_doc(doc, "epoch_metrics", ms::Document::array());
    metrics.validation_metrics = field_doc(doc, "validation_metrics", ms::Document::array());
    metrics.training_duration = field_string(doc, "training_duration", "0");
    metrics.resource_usage = field_doc(doc, "resource_usage", ms::Document::object());
    return metrics;
}

ms::EvaluationMetrics load_evaluation_metrics(const std::filesystem::path& path)
{
    ms::Document doc = load_json(path);
    ms::EvaluationMetrics metrics;
    metrics.accuracy = field_string(doc, "accuracy", "0");
    metrics.precision = field_string(doc, "precision", "0");
    metrics.recall = field_string(doc, "recall", "0");
    metrics.f1_score = field_string(doc, "f1_score", "0");
    metrics.additional_metrics = field_doc(doc, "additional", ms::Document::object());
    return metrics;
}

ms::DeploymentConfig load_deployment_config(const std::filesystem::path& path)
{
    ms::Document doc = load_json(path);
    ms::DeploymentConfig config;
    config.runtime_settings = field_doc(doc, "runtime_settings", ms::Document::object());
    config.scaling_params = field_doc(doc, "scaling_params", ms::Document::object());
    config.monitoring_config = field_doc(doc, "monitoring_config", ms::Document::object());
    config.security_params = field_doc(doc, "security_params", ms::Document::object());
    return config;
}

ms::MonitoringData load_monitoring_data(const std::filesystem::path& path)
{
    ms::Document doc = load_json(path);
    ms::MonitoringData data;
    data.performance_metrics = field_doc(doc, "performance_metrics", ms::Document::object());
    data.drift_metrics = field_doc(doc, "drift_metrics", ms::Document::object());
    data.resource_usage = field_doc(doc, "resource_usage", ms::Document::object());
    data.alerts = field_doc(doc, "alerts", ms::Document::array());
    return data;
}

// -- shared option bundles -----------------------------------------------------------

struct SealCommon {
    std::string registry_path = "./metaseal.db";
    std::string key_path;
    std::string creator = "unknown";
    std::string info_path;
    std::uint64_t at_micros = 0;
    bool has_at = false;
    std::vector<std::string> depends_on;

    ms::Timestamp now() const { return has_at ? ms::Timestamp(at_micros) : ms::Timestamp::now(); }

    ms::SealMetadata metadata(ms::SealStage stage, ms::Timestamp at) const
    {
        ms::SealMetadata md;
        md.stage = stage;
        md.created_at = at;
        md.created_by = creator;
        md.dependencies = depends_on;
        if (!info_path.empty())
            md.additional_info = load_json(info_path);
        return md;
    }
};

void add_seal_common(CLI::App* cmd, SealCommon& common, bool with_depends)
{
    cmd->add_option("--registry", common.registry_path, "registry database path")
        ->envname("METASEAL_REGISTRY")
        ->capture_default_str();
    cmd->add_option("--key", common.key_path, "private key PEM")->required();
    cmd->add_option("--creator", common.creator, "creator identity recorded in metadata")
        ->capture_default_str();
    cmd->add_option("--info", common.info_path, "extra metadata JSON file");
    cmd->add_option("--at", common.at_micros, "fixed timestamp (unix micros) for reproducibility")
        ->check(CLI::NonNegativeNumber);
    if (with_depends)
        cmd->add_option("--depends-on", common.depends_on, "upstream seal id(s)");
}

ms::SealRecord require_dependency(const ms::Registry& registry, const std::string& id)
{
    std::optional<ms::SealRecord> record = registry.find_record(id);
    if (!record)
        throw ms::Error(ms::Errc::unknown_dependency, "dependency " + id + " is not registered");
    return std::move(*record);
}

ms::UpstreamRef upstream_from_dep(const ms::SealRecord& record)
{
    ms::SealKind kind = ms::envelope_kind(record.seal);
    if (kind != ms::SealKind::training_process && kind != ms::SealKind::model_architecture)
        throw ms::Error(ms::Errc::unknown_dependency,
                        "dependency " + record.seal_id +
                            " must be a training or model-development seal");
    return ms::UpstreamRef{ms::seal_digest(record.seal), kind};
}

int finish_seal(ms::Registry& registry, ms::SealStage stage, const ms::Document& envelope,
                const SealCommon& common, ms::Timestamp at)
{
    std::string id = ms::register_seal(registry, stage, envelope, common.metadata(stage, at));
    std::cout << id << "\n";
    return kExitVerified;
}

// -- output ---------------------------------------------------------------------------

void print_report_text(const ms::VerificationReport& report, ms::Verdict verdict)
{
    std::cout << "verification report (tier: " << ms::tier_name(report.tier) << ")\n";
    for (const ms::CheckResult& check : report.checks) {
        std::cout << "  " << (check.passed ? "[ok]  " : "[FAIL] ")
                  << ms::component_code(check.component);
        if (!check.detail.empty())
            std::cout << "  " << check.detail;
        std::cout << "\n";
    }
    std::cout << "verdict: " << ms::verdict_name(verdict) << "\n";
}

int emit_report(const ms::VerificationReport& report, const std::string& format,
                const std::string& subject)
{
    ms::Verdict verdict = ms::classify(report);
    if (format == "json") {
        ms::Document doc = ms::Document::object();
        doc["subject"] = subject;
        doc["verdict"] = std::string(ms::verdict_name(verdict));
        doc["report"] = report.to_document();
        std::cout << ms::canonical_encode(doc) << "\n";
    } else {
        if (!subject.empty())
            std::cout << "subject: " << subject << "\n";
        print_report_text(report, verdict);
    }
    return verdict == ms::Verdict::verified ? kExitVerified : kExitVerificationFailed;
}

// A meta/bundle file that does not parse as a well-formed envelope is
// evidence of tampering, not an environment error.
int emit_malformed(const ms::Error& e, const std::string& format, const std::string& subject)
{
    ms::VerificationReport report{ms::VerificationTier::meta, {}};
    report.add(ms::Component::malformed_record, false, e.what());
    return emit_report(report, format, subject);
}

struct RecordsSource {
    std::optional<ms::Registry> registry;
    std::optional<ms::ImportedBundle> bundle;

    const ms::SealStoreView& view() const
    {
        if (registry)
            return *registry;
        return bundle->records;
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Meta-Sealing: tamper-evident seals across the AI lifecycle"};
    app.require_subcommand(1);

    // ---- keygen ----
    auto* keygen = app.add_subcommand("keygen", "generate an RSA-2048 key pair");
    std::string keygen_dir = ".";
    bool keygen_force = false;
    keygen->add_option("--out-dir", keygen_dir, "output directory")->capture_default_str();
    keygen->add_flag("--force", keygen_force, "overwrite existing key files");

    // ---- seal ----
    auto* seal = app.add_subcommand("seal", "create and register a stage seal");
    seal->require_subcommand(1);

    auto* seal_data = seal->add_subcommand("data", "seal the data collection stage");
    SealCommon data_common;
    std::string opt_raw, opt_processed, opt_source, opt_pipeline;
    add_seal_common(seal_data, data_common, false);
    seal_data->add_option("--raw", opt_raw, "raw data file")->required();
    seal_data->add_option("--processed", opt_processed, "processed data file")->required();
    seal_data->add_option("--source", opt_source, "data source descriptor JSON")->required();
    seal_data->add_option("--pipeline", opt_pipeline, "preparation pipeline JSON")->required();

    auto* seal_arch = seal->add_subcommand("arch", "seal the model development stage");
    SealCommon arch_common;
    std::string opt_architecture, opt_versions;
    add_seal_common(seal_arch, arch_common, false);
    seal_arch->add_option("--architecture", opt_architecture, "architecture JSON")->required();
    seal_arch->add_option("--versions", opt_versions, "version history JSON")->required();

    auto* seal_train = seal->add_subcommand("train", "seal the training stage");
    SealCommon train_common;
    std::string opt_train_config, opt_checkpoints, opt_weights, opt_train_metrics;
    add_seal_common(seal_train, train_common, true);
    seal_train->add_option("--config", opt_train_config, "training config JSON")->required();
    seal_train->add_option("--checkpoints", opt_checkpoints, "checkpoints JSON")->required();
    seal_train->add_option("--weights", opt_weights, "final weights file")->required();
    seal_train->add_option("--metrics", opt_train_metrics, "training metrics JSON")->required();

    auto* seal_eval = seal->add_subcommand("eval", "seal the evaluation stage");
    SealCommon eval_common;
    std::string opt_test_data, opt_eval_metrics;
    add_seal_common(seal_eval, eval_common, true);
    seal_eval->add_option("--test-data", opt_test_data, "test data file")->required();
    seal_eval->add_option("--metrics", opt_eval_metrics, "evaluation metrics JSON")->required();

    auto* seal_deploy = seal->add_subcommand("deploy", "seal the deployment stage");
    SealCommon deploy_common;
    std::string opt_deploy_config, opt_environment;
    add_seal_common(seal_deploy, deploy_common, true);
    seal_deploy->add_option("--config", opt_deploy_config, "deployment config JSON")->required();
    seal_deploy->add_option("--environment", opt_environment, "environment JSON")->required();

    auto* seal_monitor = seal->add_subcommand("monitor", "seal a monitoring period");
    SealCommon monitor_common;
    std::string opt_monitor_data, opt_maintenance;
    add_seal_common(seal_monitor, monitor_common, true);
    seal_monitor->add_option("--data", opt_monitor_data, "monitoring data JSON")->required();
    seal_monitor->add_option("--maintenance", opt_maintenance, "maintenance actions JSON");

    auto* seal_complete = seal->add_subcommand("complete", "seal the lifecycle completion");
    SealCommon complete_common;
    std::string opt_transition, opt_justification, opt_history;
    add_seal_common(seal_complete, complete_common, true);
    seal_complete->add_option("--transition", opt_transition, "retire or retrain")->required();
    seal_complete->add_option("--justification", opt_justification, "decision justification")
        ->required();
    seal_complete->add_option("--history", opt_history, "performance history JSON")->required();

    // ---- meta create ----
    auto* meta = app.add_subcommand("meta", "meta-seal operations");
    meta->require_subcommand(1);
    auto* meta_create = meta->add_subcommand("create", "bind registered seals into a meta-seal");
    std::string mc_registry = "./metaseal.db";
    std::string mc_key, mc_creator = "unknown", mc_out, mc_stages, mc_extra;
    std::uint64_t mc_at = 0;
    meta_create->add_option("--registry", mc_registry)->envname("METASEAL_REGISTRY")
        ->capture_default_str();
    meta_create->add_option("--key", mc_key, "private key PEM")->required();
    meta_create->add_option("--creator", mc_creator)->capture_default_str();
    meta_create->add_option("--out", mc_out, "meta-seal envelope output file")->required();
    meta_create->add_option("--stages", mc_stages,
                            "comma-separated required stages (default: all seven)");
    meta_create->add_option("--extra", mc_extra, "extra metadata JSON file");
    auto* mc_at_opt = meta_create->add_option("--at", mc_at, "fixed timestamp (unix micros)");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "verify a meta-seal or a single stage seal");
    std::string v_meta, v_seal_id, v_registry, v_bundle, v_pubkey, v_format = "text";
    std::string v_raw, v_processed, v_source, v_pipeline, v_architecture, v_versions;
    std::string v_config, v_checkpoints, v_weights, v_metrics, v_test_data, v_environment;
    std::string v_current_environment, v_data, v_maintenance, v_history;
    auto* v_meta_opt = verify->add_option("--meta", v_meta, "meta-seal envelope file");
    auto* v_seal_opt = verify->add_option("--seal", v_seal_id, "stage seal id");
    v_meta_opt->excludes(v_seal_opt);
    verify->add_option("--registry", v_registry)->envname("METASEAL_REGISTRY");
    verify->add_option("--bundle", v_bundle, "audit bundle file");
    verify->add_option("--pubkey", v_pubkey, "public key PEM");
    verify->add_option("--format", v_format)->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--raw", v_raw);
    verify->add_option("--processed", v_processed);
    verify->add_option("--source", v_source);
    verify->add_option("--pipeline", v_pipeline);
    verify->add_option("--architecture", v_architecture);
    verify->add_option("--versions", v_versions);
    verify->add_option("--config", v_config);
    verify->add_option("--checkpoints", v_checkpoints);
    verify->add_option("--weights", v_weights);
    verify->add_option("--metrics", v_metrics);
    verify->add_option("--test-data", v_test_data);
    verify->add_option("--environment", v_environment);
    verify->add_option("--current-environment", v_current_environment,
                       "environment to match against a deployment seal");
    verify->add_option("--data", v_data);
    verify->add_option("--maintenance", v_maintenance);
    verify->add_option("--history", v_history);

    // ---- audit ----
    auto* audit = app.add_subcommand("audit", "full audit report over a sealed chain");
    std::string a_meta, a_registry, a_bundle, a_pubkey, a_format = "text";
    audit->add_option("--meta", a_meta, "meta-seal envelope file")->required();
    audit->add_option("--registry", a_registry)->envname("METASEAL_REGISTRY");
    audit->add_option("--bundle", a_bundle, "audit bundle file");
    audit->add_option("--pubkey", a_pubkey, "public key PEM");
    audit->add_option("--format", a_format)->check(CLI::IsMember({"text", "json"}));

    // ---- tamper-sim ----
    auto* tamper = app.add_subcommand("tamper-sim", "seeded tamper detection simulation");
    std::string t_registry, t_meta, t_pubkey, t_scope = "sealed", t_format = "text";
    std::size_t t_trials = 100;
    std::uint64_t t_seed = 42;
    tamper->add_option("--registry", t_registry)->envname("METASEAL_REGISTRY")->required();
    tamper->add_option("--meta", t_meta, "meta-seal envelope file")->required();
    tamper->add_option("--pubkey", t_pubkey, "public key PEM")->required();
    tamper->add_option("--trials", t_trials)->capture_default_str();
    tamper->add_option("--seed", t_seed)->capture_default_str();
    tamper->add_option("--scope", t_scope)->check(CLI::IsMember({"sealed", "journal"}))
        ->capture_default_str();
    tamper->add_option("--format", t_format)->check(CLI::IsMember({"text", "json"}));

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "sealing overhead benchmark");
    std::size_t b_size_mb = 64;
    int b_repeats = 5;
    std::uint64_t b_seed = 42;
    std::string b_format = "text";
    bench->add_option("--size-mb", b_size_mb)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--repeats", b_repeats)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--seed", b_seed)->capture_default_str();
    bench->add_option("--format", b_format)->check(CLI::IsMember({"text", "json"}));

    // ---- export / import ----
    auto* exportc = app.add_subcommand("export", "export an audit bundle");
    std::string e_registry = "./metaseal.db", e_meta, e_pubkey, e_out;
    exportc->add_option("--registry", e_registry)->envname("METASEAL_REGISTRY")
        ->capture_default_str();
    exportc->add_option("--meta", e_meta, "meta-seal envelope file")->required();
    exportc->add_option("--pubkey", e_pubkey, "public key PEM")->required();
    exportc->add_option("--out", e_out, "bundle output file")->required();

    auto* importc = app.add_subcommand("import", "materialize a bundle into a registry");
    std::string i_bundle, i_registry, i_pubkey_out;
    bool i_force = false;
    importc->add_option("--bundle", i_bundle, "bundle file")->required();
    importc->add_option("--registry", i_registry, "target registry path")->required();
    importc->add_option("--pubkey-out", i_pubkey_out, "write the bundled public key here");
    importc->add_flag("--force", i_force, "replace conflicting rows (journaled)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*keygen) {
            std::filesystem::path dir = keygen_dir;
            std::filesystem::create_directories(dir);
            std::filesystem::path priv = dir / "private.pem";
            std::filesystem::path pub = dir / "public.pem";
            if (!keygen_force &&
                (std::filesystem::exists(priv) || std::filesystem::exists(pub))) {
                std::cerr << "refusing to overwrite existing key files (use --force)\n";
                return kExitUsage;
            }
            ms::KeyPair keys = ms::generate_key_pair();
            ms::save_private_key_pem(keys.private_key, priv);
            ms::save_public_key_pem(keys.public_key, pub);
            std::cout << priv.string() << "\n" << pub.string() << "\n";
            return 0;
        }

        if (*seal_data) {
            ms::Registry registry = ms::Registry::open(data_common.registry_path);
            ms::PrivateKey key = ms::load_private_key_pem(data_common.key_path);
            ms::Timestamp now = data_common.now();
            ms::DataSource source = load_data_source(opt_source, now);
            ms::DataPreparationPipeline pipeline = load_pipeline(opt_pipeline, now);
            std::ifstream raw = open_binary(opt_raw);
            std::ifstream processed = open_binary(opt_processed);
            ms::DatasetSeal s = ms::seal_dataset(raw, source, pipeline, processed, key, now);
            return finish_seal(registry, ms::SealStage::data_collection, s.envelope(),
                               data_common, now);
        }

        if (*seal_arch) {
            ms::Registry registry = ms::Registry::open(arch_common.registry_path);
            ms::PrivateKey key = ms::load_private_key_pem(arch_common.key_path);
            ms::Timestamp now = arch_common.now();
            ms::ModelArchitecture architecture = load_architecture(load_json(opt_architecture));
            ms::ModelVersionControl versions =
                load_versions(opt_versions, arch_common.creator, now);
            ms::ModelArchitectureSeal s =
                ms::seal_model_architecture(architecture, versions, key, now);
            return finish_seal(registry, ms::SealStage::model_development, s.envelope(),
                               arch_common, now);
        }

        if (*seal_train) {
            ms::Registry registry = ms::Registry::open(train_common.registry_path);
            ms::PrivateKey key = ms::load_private_key_pem(train_common.key_path);
            ms::Timestamp now = train_common.now();
            std::optional<ms::ModelArchitectureSeal> model;
            std::optional<ms::DatasetSeal> dataset;
            for (const std::string& dep : train_common.depends_on) {
                ms::SealRecord record = require_dependency(registry, dep);
                switch (ms::envelope_kind(record.seal)) {
                case ms::SealKind::model_architecture:
                    model = ms::ModelArchitectureSeal::from_envelope(record.seal);
                    break;
                case ms::SealKind::dataset:
                    dataset = ms::DatasetSeal::from_envelope(record.seal);
                    break;
                default:
                    throw ms::Error(ms::Errc::unknown_dependency,
                                    "dependency " + dep + " has an unexpected stage");
                }
            }
            if (!model || !dataset)
                throw ms::Error(ms::Errc::bad_argument,
                                "seal train needs --depends-on for one model-development and "
                                "one data-collection seal");
            ms::TrainingConfig config = load_training_config(opt_train_config);
            std::vector<ms::Checkpoint> checkpoints = load_checkpoints(opt_checkpoints, now);
            ms::TrainingMetrics metrics = load_training_metrics(opt_train_metrics);
            std::ifstream weights = open_binary(opt_weights);
            ms::TrainingProcessSeal s = ms::seal_training_process(
                *model, *dataset, config, checkpoints, weights, metrics, key, now);
            return finish_seal(registry, ms::SealStage::training, s.envelope(), train_common,
                               now);
        }

        if (*seal_eval) {
            ms::Registry registry = ms::Registry::open(eval_common.registry_path);
            ms::PrivateKey key = ms::load_private_key_pem(eval_common.key_path);
            ms::Timestamp now = eval_common.now();
            if (eval_common.depends_on.size() != 1)
                throw ms::Error(ms::Errc::bad_argument,
                                "seal eval needs exactly one --depends-on");
            ms::UpstreamRef upstream =
                upstream_from_dep(require_dependency(registry, eval_common.depends_on[0]));
            ms::EvaluationMetrics metrics = load_evaluation_metrics(opt_eval_metrics);
            std::ifstream test_data = open_binary(opt_test_data);
            ms::EvaluationSeal s = ms::seal_evaluation(upstream, test_data, metrics, key, now);
            return finish_seal(registry, ms::SealStage::evaluation, s.envelope(), eval_common,
                               now);
        }

        if (*seal_deploy) {
            ms::Registry registry = ms::Registry::open(deploy_common.registry_path);
            ms::PrivateKey key = ms::load_private_key_pem(deploy_common.key_path);
            ms::Timestamp now = deploy_common.now();
            if (deploy_common.depends_on.size() != 1)
                throw ms::Error(ms::Errc::bad_argument,
                                "seal deploy needs exactly one --depends-on");
            ms::UpstreamRef upstream =
                upstream_from_dep(require_dependency(registry, deploy_common.depends_on[0]));
            ms::DeploymentConfig config = load_deployment_config(opt_deploy_config);
            ms::Document environment = load_json(opt_environment);
            ms::DeploymentSeal s = ms::seal_deployment(upstream, config, environment, key, now);
            return finish_seal(registry, ms::SealStage::deployment, s.envelope(), deploy_common,
                               now);
        }

        if (*seal_monitor) {
            ms::Registry registry = ms::Registry::open(monitor_common.registry_path);
            ms::PrivateKey key = ms::load_private_key_pem(monitor_common.key_path);
            ms::Timestamp now = monitor_common.now();
            if (monitor_common.depends_on.size() != 1)
                throw ms::Error(ms::Errc::bad_argument,
                                "seal monitor needs exactly one --depends-on");
            ms::SealRecord dep = require_dependency(registry, monitor_common.depends_on[0]);
            if (ms::envelope_kind(dep.seal) != ms::SealKind::deployment)
                throw ms::Error(ms::Errc::unknown_dependency,
                                "seal monitor must depend on a deployment seal");
            ms::DeploymentSeal deployment = ms::DeploymentSeal::from_envelope(dep.seal);
            ms::MonitoringData data = load_monitoring_data(opt_monitor_data);
            std::optional<ms::Document> maintenance;
            if (!opt_maintenance.empty())
                maintenance = load_json(opt_maintenance);
            ms::MonitoringSeal s =
                ms::seal_monitoring_period(deployment, data, maintenance, key, now);
            return finish_seal(registry, ms::SealStage::monitoring, s.envelope(), monitor_common,
                               now);
        }

        if (*seal_complete) {
            ms::Registry registry = ms::Registry::open(complete_common.registry_path);
            ms::PrivateKey key = ms::load_private_key_pem(complete_common.key_path);
            ms::Timestamp now = complete_common.now();
            if (complete_common.depends_on.size() != 1)
                throw ms::Error(ms::Errc::bad_argument,
                                "seal complete needs exactly one --depends-on");
            ms::UpstreamRef upstream =
                upstream_from_dep(require_dependency(registry, complete_common.depends_on[0]));
            ms::TransitionType transition = ms::transition_from_wire(opt_transition);
            ms::Document history = load_json(opt_history);
            ms::LifecycleCompletionSeal s = ms::seal_lifecycle_completion(
                upstream, transition, opt_justification, history, key, now);
            return finish_seal(registry, ms::SealStage::retirement, s.envelope(), complete_common,
                               now);
        }

        if (*meta_create) {
            ms::Registry registry = ms::Registry::open(mc_registry);
            ms::PrivateKey key = ms::load_private_key_pem(mc_key);
            ms::Timestamp now = mc_at_opt->count() > 0 ? ms::Timestamp(mc_at)
                                                       : ms::Timestamp::now();
            ms::MetaSealOptions options;
            options.creator = mc_creator;
            if (!mc_extra.empty())
                options.extra_metadata = load_json(mc_extra);
            if (!mc_stages.empty()) {
                options.required_stages.clear();
                std::string token;
                for (char c : mc_stages + ",") {
                    if (c == ',') {
                        if (!token.empty())
                            options.required_stages.insert(ms::stage_from_wire(token));
                        token.clear();
                    } else {
                        token += c;
                    }
                }
            }
            std::vector<std::string> ids = registry.record_ids();
            std::set<std::string> id_set(ids.begin(), ids.end());
            ms::MetaSeal meta_seal = ms::create_meta_seal(registry, id_set, options, key, now);
            std::string bytes = ms::canonical_encode(meta_seal.envelope());
            std::ofstream out(mc_out, std::ios::binary | std::ios::trunc);
            if (!out.is_open())
                throw ms::Error(ms::Errc::io, "cannot write " + mc_out);
            out << bytes;
            out.close();
            if (!out)
                throw ms::Error(ms::Errc::io, "write failed for " + mc_out);
            registry.store_seal(ms::seal_digest_bytes(bytes).hex().substr(0, 16),
                                std::string(ms::kMetaSealType), bytes);
            std::cout << mc_out << "\n";
            return 0;
        }

        if (*verify) {
            if (v_meta.empty() == v_seal_id.empty())
                throw ms::Error(ms::Errc::bad_argument, "pass exactly one of --meta or --seal");
            // --bundle wins over --registry (the latter may come from the
            // METASEAL_REGISTRY environment default)
            if (v_registry.empty() && v_bundle.empty())
                throw ms::Error(ms::Errc::bad_argument, "pass --registry or --bundle");

            RecordsSource source;
            std::string bundle_pubkey_pem;
            if (!v_bundle.empty()) {
                try {
                    source.bundle = ms::import_bundle(v_bundle);
                } catch (const ms::Error& e) {
                    if (e.code() == ms::Errc::io)
                        throw;
                    return emit_malformed(e, v_format, "bundle " + v_bundle);
                }
                bundle_pubkey_pem = source.bundle->public_key_pem;
            } else {
                source.registry = ms::Registry::open(v_registry);
            }
            if (v_pubkey.empty() && bundle_pubkey_pem.empty())
                throw ms::Error(ms::Errc::bad_argument, "--pubkey is required with --registry");
            ms::PublicKey pubkey = v_pubkey.empty()
                                       ? ms::PublicKey::from_pem(bundle_pubkey_pem)
                                       : ms::load_public_key_pem(v_pubkey);

            if (!v_meta.empty()) {
                std::optional<ms::MetaSeal> meta_seal;
                try {
                    meta_seal =
                        ms::MetaSeal::from_envelope(ms::canonical_parse(read_file(v_meta)));
                } catch (const ms::Error& e) {
                    if (e.code() == ms::Errc::io)
                        throw;
                    return emit_malformed(e, v_format, "meta-seal " + v_meta);
                }
                ms::VerificationReport report =
                    ms::verify_meta_seal(*meta_seal, source.view(), pubkey);
                return emit_report(report, v_format, "meta-seal " + v_meta);
            }

            // single stage seal
            std::optional<ms::SealRecord> record;
            try {
                record = source.view().find_record(v_seal_id);
            } catch (const ms::Error& e) {
                return emit_malformed(e, v_format, "seal " + v_seal_id);
            }
            if (!record) {
                ms::VerificationReport report{ms::VerificationTier::signature_only, {}};
                report.add(ms::Component::missing_record, false,
                           "seal " + v_seal_id + " is not available");
                return emit_report(report, v_format, "seal " + v_seal_id);
            }

            auto upstream_by_digest = [&](const ms::Digest& digest) {
                for (const std::string& id : source.view().record_ids()) {
                    std::optional<ms::SealRecord> candidate = source.view().find_record(id);
                    if (candidate && ms::seal_digest(candidate->seal) == digest)
                        return candidate->seal;
                }
                return ms::Document(nullptr);
            };

            ms::Timestamp now = ms::Timestamp::now();
            bool full = false;
            ms::VerificationReport report;
            try {
            ms::SealKind kind = ms::envelope_kind(record->seal);
            switch (kind) {
            case ms::SealKind::dataset: {
                ms::DatasetSeal s = ms::DatasetSeal::from_envelope(record->seal);
                full = !v_raw.empty() || !v_processed.empty() || !v_source.empty() ||
                       !v_pipeline.empty();
                if (full) {
                    if (v_raw.empty() || v_processed.empty() || v_source.empty() ||
                        v_pipeline.empty())
                        throw ms::Error(ms::Errc::bad_argument,
                                        "full-tier dataset verification needs --raw --processed "
                                        "--source --pipeline");
                    std::ifstream raw = open_binary(v_raw);
                    std::ifstream processed = open_binary(v_processed);
                    report = ms::verify_dataset_seal(s, pubkey, raw, processed,
                                                     load_data_source(v_source, s.timestamp),
                                                     load_pipeline(v_pipeline, s.timestamp));
                } else {
                    report = ms::verify_dataset_seal(s, pubkey);
                }
                break;
            }
            case ms::SealKind::model_architecture: {
                ms::ModelArchitectureSeal s = ms::ModelArchitectureSeal::from_envelope(record->seal);
                full = !v_architecture.empty() || !v_versions.empty();
                if (full) {
                    if (v_architecture.empty() || v_versions.empty())
                        throw ms::Error(ms::Errc::bad_argument,
                                        "full-tier verification needs --architecture --versions");
                    report = ms::verify_model_architecture_seal(
                        s, pubkey, load_architecture(load_json(v_architecture)),
                        load_versions(v_versions, "unknown", now));
                } else {
                    report = ms::verify_model_architecture_seal(s, pubkey);
                }
                break;
            }
            case ms::SealKind::training_process: {
                ms::TrainingProcessSeal s = ms::TrainingProcessSeal::from_envelope(record->seal);
                full = !v_config.empty() || !v_checkpoints.empty() || !v_weights.empty() ||
                       !v_metrics.empty();
                if (full) {
                    if (v_config.empty() || v_checkpoints.empty() || v_weights.empty() ||
                        v_metrics.empty())
                        throw ms::Error(ms::Errc::bad_argument,
                                        "full-tier training verification needs --config "
                                        "--checkpoints --weights --metrics");
                    std::ifstream weights = open_binary(v_weights);
                    report = ms::verify_training_process_seal(
                        s, pubkey, upstream_by_digest(s.model_seal_digest),
                        upstream_by_digest(s.dataset_seal_digest),
                        load_training_config(v_config), load_checkpoints(v_checkpoints, now),
                        weights, load_training_metrics(v_metrics));
                } else {
                    report = ms::verify_training_process_seal(s, pubkey);
                }
                break;
            }
            case ms::SealKind::evaluation: {
                ms::EvaluationSeal s = ms::EvaluationSeal::from_envelope(record->seal);
                full = !v_test_data.empty() || !v_metrics.empty();
                if (full) {
                    if (v_test_data.empty() || v_metrics.empty())
                        throw ms::Error(ms::Errc::bad_argument,
                                        "full-tier evaluation verification needs --test-data "
                                        "--metrics");
                    std::ifstream test_data = open_binary(v_test_data);
                    report = ms::verify_evaluation_seal(s, pubkey,
                                                        upstream_by_digest(s.model_seal_digest),
                                                        test_data,
                                                        load_evaluation_metrics(v_metrics));
                } else {
                    report = ms::verify_evaluation_seal(s, pubkey);
                }
                break;
            }
            case ms::SealKind::deployment: {
                ms::DeploymentSeal s = ms::DeploymentSeal::from_envelope(record->seal);
                std::optional<ms::Document> current;
                if (!v_current_environment.empty())
                    current = load_json(v_current_environment);
                full = !v_config.empty() || !v_environment.empty();
                if (full) {
                    if (v_config.empty() || v_environment.empty())
                        throw ms::Error(ms::Errc::bad_argument,
                                        "full-tier deployment verification needs --config "
                                        "--environment");
                    report = ms::verify_deployment_seal(
                        s, pubkey, upstream_by_digest(s.model_seal_digest),
                        load_deployment_config(v_config), load_json(v_environment),
                        current ? &*current : nullptr);
                } else {
                    report = ms::verify_deployment_seal(s, pubkey, current ? &*current : nullptr);
                }
                break;
            }
            case ms::SealKind::monitoring: {
                ms::MonitoringSeal s = ms::MonitoringSeal::from_envelope(record->seal);
                full = !v_data.empty();
                if (full) {
                    std::optional<ms::Document> maintenance;
                    if (!v_maintenance.empty())
                        maintenance = load_json(v_maintenance);
                    report = ms::verify_monitoring_seal(
                        s, pubkey, upstream_by_digest(s.deployment_seal_digest),
                        load_monitoring_data(v_data), maintenance);
                } else {
                    report = ms::verify_monitoring_seal(s, pubkey);
                }
                break;
            }
            case ms::SealKind::lifecycle_completion: {
                ms::LifecycleCompletionSeal s =
                    ms::LifecycleCompletionSeal::from_envelope(record->seal);
                full = !v_history.empty();
                if (full) {
                    report = ms::verify_lifecycle_completion_seal(
                        s, pubkey, upstream_by_digest(s.model_seal_digest), load_json(v_history));
                } else {
                    report = ms::verify_lifecycle_completion_seal(s, pubkey);
                }
                break;
            }
            }
            } catch (const ms::Error& e) {
                if (e.code() != ms::Errc::malformed)
                    throw;
                return emit_malformed(e, v_format, "seal " + v_seal_id);
            }
            return emit_report(report, v_format, "seal " + v_seal_id);
        }

        if (*audit) {
            RecordsSource source;
            std::string bundle_pubkey_pem;
            if (!a_bundle.empty()) {
                try {
                    source.bundle = ms::import_bundle(a_bundle);
                } catch (const ms::Error& e) {
                    if (e.code() == ms::Errc::io)
                        throw;
                    return emit_malformed(e, a_format, "bundle " + a_bundle);
                }
                bundle_pubkey_pem = source.bundle->public_key_pem;
            } else if (!a_registry.empty()) {
                source.registry = ms::Registry::open(a_registry);
            } else {
                throw ms::Error(ms::Errc::bad_argument, "pass --registry or --bundle");
            }
            ms::PublicKey pubkey = a_pubkey.empty()
                                       ? ms::PublicKey::from_pem(bundle_pubkey_pem)
                                       : ms::load_public_key_pem(a_pubkey);
            std::optional<ms::MetaSeal> meta_seal;
            try {
                meta_seal = ms::MetaSeal::from_envelope(ms::canonical_parse(read_file(a_meta)));
            } catch (const ms::Error& e) {
                if (e.code() == ms::Errc::io)
                    throw;
                return emit_malformed(e, a_format, "meta-seal " + a_meta);
            }
            ms::AuditReport report = ms::build_audit_report(*meta_seal, source.view(), pubkey);
            if (a_format == "json")
                std::cout << ms::canonical_encode(report.to_document()) << "\n";
            else
                std::cout << report.to_text();
            return report.verdict == ms::Verdict::verified ? kExitVerified
                                                           : kExitVerificationFailed;
        }

        if (*tamper) {
            ms::PublicKey pubkey = ms::load_public_key_pem(t_pubkey);
            ms::MetaSeal meta_seal =
                ms::MetaSeal::from_envelope(ms::canonical_parse(read_file(t_meta)));
            ms::TamperScope scope =
                t_scope == "journal" ? ms::TamperScope::journal : ms::TamperScope::sealed;
            ms::TamperSummary summary =
                ms::run_tamper_simulation(t_registry, meta_seal, pubkey, t_trials, t_seed, scope);
            if (t_format == "json") {
                std::cout << ms::canonical_encode(summary.to_document()) << "\n";
            } else {
                std::cout << "tamper simulation: " << summary.trials << " trials, seed "
                          << summary.seed << "\n";
                for (const ms::TamperTrial& trial : summary.entries) {
                    std::cout << "  #" << trial.index << " " << trial.target << " ("
                              << trial.description << "): ";
                    if (!trial.in_sealed_scope)
                        std::cout << "out of sealed scope\n";
                    else if (trial.detected)
                        std::cout << "detected via " << trial.component << "\n";
                    else
                        std::cout << "NOT DETECTED\n";
                }
                std::cout << "sealed-scope trials: " << summary.sealed_trials
                          << ", detected: " << summary.detected << " ("
                          << (summary.sealed_trials == 0
                                  ? 0
                                  : summary.detected * 100 / summary.sealed_trials)
                          << "%)\n";
                if (summary.out_of_scope != 0)
                    std::cout << "out of sealed scope: " << summary.out_of_scope << "\n";
            }
            return 0;
        }

        if (*bench) {
            ms::BenchOptions options;
            options.size_mb = b_size_mb;
            options.repeats = b_repeats;
            options.seed = b_seed;
            ms::BenchResult result = ms::run_benchmark(options);
            if (b_format == "json") {
                std::cout << ms::canonical_encode(result.to_document()) << "\n";
            } else {
                ms::Document doc = result.to_document();
                std::cout << "workload: " << result.size_mb << " MiB, " << result.repeats
                          << " repeat(s)\n";
                std::cout << "baseline median: " << doc["baseline_ms_median"].get<std::int64_t>()
                          << " ms\n";
                std::cout << "sealed median:   " << doc["sealed_ms_median"].get<std::int64_t>()
                          << " ms\n";
                std::cout << "sealing overhead: " << doc["overhead_percent"].get<std::string>()
                          << "%\n";
                std::cout << "sealed chain verified: " << (result.chain_verified ? "yes" : "NO")
                          << "\n";
            }
            return 0;
        }

        if (*exportc) {
            ms::Registry registry = ms::Registry::open(e_registry);
            ms::PublicKey pubkey = ms::load_public_key_pem(e_pubkey);
            ms::MetaSeal meta_seal =
                ms::MetaSeal::from_envelope(ms::canonical_parse(read_file(e_meta)));
            ms::export_bundle(registry, meta_seal, pubkey, e_out);
            std::cout << e_out << "\n";
            return 0;
        }

        if (*importc) {
            ms::ImportedBundle bundle = ms::import_bundle(i_bundle);
            ms::Registry registry = ms::Registry::open(i_registry);
            std::size_t stored = 0;
            for (const std::string& id : bundle.records.record_ids()) {
                ms::SealRecord record = *bundle.records.find_record(id);
                registry.store_seal(id, std::string(ms::to_wire(record.metadata.stage)),
                                    record.to_bytes(), i_force);
                ++stored;
            }
            std::string meta_bytes = ms::canonical_encode(bundle.meta.envelope());
            registry.store_seal(ms::seal_digest_bytes(meta_bytes).hex().substr(0, 16),
                                std::string(ms::kMetaSealType), meta_bytes, i_force);
            if (!i_pubkey_out.empty()) {
                std::ofstream out(i_pubkey_out, std::ios::binary | std::ios::trunc);
                if (!out.is_open())
                    throw ms::Error(ms::Errc::io, "cannot write " + i_pubkey_out);
                out << bundle.public_key_pem;
            }
            std::cout << "imported " << stored << " seal(s) + meta\n";
            return 0;
        }
    } catch (const ms::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnvironment;
    }
    return kExitUsage;
}
