#include "metaseal/seals.hpp"

#include <istream>

#include "field_reader.hpp"

namespace metaseal {

using detail::FieldReader;

namespace {

constexpr std::string_view kSchemaVersion = "1";

std::string wire_str(Timestamp ts)
{
    return ts.wire();
}

void require(bool condition, Errc code, const std::string& message)
{
    if (!condition)
        throw Error(code, message);
}

// Shared trailer of every stage-seal envelope.
void put_envelope_base(Document& env, SealKind kind, Timestamp timestamp, const Signature& sig,
                       const Digest& key_fingerprint)
{
    env["schema_version"] = std::string(kSchemaVersion);
    env["seal_kind"] = std::string(to_wire(kind));
    env["timestamp"] = wire_str(timestamp);
    env["algorithm_id"] = sig.algorithm_id;
    env["signature"] = sig.hex();
    env["key_fingerprint"] = key_fingerprint.hex();
}

struct EnvelopeBase {
    Timestamp timestamp;
    Signature signature;
    Digest key_fingerprint;
};

EnvelopeBase read_envelope_base(FieldReader& reader, SealKind expected_kind)
{
    require(reader.str("schema_version") == kSchemaVersion, Errc::malformed,
            "unsupported envelope schema_version");
    std::string kind = reader.str("seal_kind");
    require(kind == to_wire(expected_kind), Errc::malformed,
            "envelope seal_kind \"" + kind + "\" does not match expected \"" +
                std::string(to_wire(expected_kind)) + "\"");
    std::string algorithm = reader.str("algorithm_id");
    require(algorithm == kAlgorithmId, Errc::malformed,
            "unsupported algorithm_id \"" + algorithm + "\"");
    Timestamp timestamp = reader.timestamp("timestamp");
    Signature signature = Signature::from_hex(reader.str("signature"), algorithm);
    require(!signature.bytes.empty(), Errc::malformed, "empty signature");
    Digest fingerprint = reader.digest("key_fingerprint");
    return EnvelopeBase{timestamp, std::move(signature), fingerprint};
}

SealKind upstream_kind_from_wire(const std::string& wire)
{
    SealKind kind = seal_kind_from_wire(wire);
    require(kind == SealKind::training_process || kind == SealKind::model_architecture,
            Errc::malformed, "upstream_kind must be training_process or model_architecture");
    return kind;
}

void check_upstream_source(const UpstreamRef& ref)
{
    require(ref.kind == SealKind::training_process || ref.kind == SealKind::model_architecture,
            Errc::bad_argument,
            "model seal digest source must be a training_process or model_architecture seal");
}

Signature sign_components(const std::vector<Digest>& components, Timestamp now,
                          const PrivateKey& key)
{
    return sign(signing_input(components, now), key);
}

void check_decimal(const std::string& value, const std::string& what)
{
    require(is_decimal_string(value), Errc::bad_argument,
            what + " must be a decimal string, got \"" + value + "\"");
}

void check_unit_decimal(const std::string& value, const std::string& what)
{
    check_decimal(value, what);
    require(decimal_in_unit_interval(value), Errc::bad_argument,
            what + " must lie in [0,1], got \"" + value + "\"");
}

} // namespace

std::string_view to_wire(SealKind kind) noexcept
{
    switch (kind) {
    case SealKind::dataset:
        return "dataset";
    case SealKind::model_architecture:
        return "model_architecture";
    case SealKind::training_process:
        return "training_process";
    case SealKind::evaluation:
        return "evaluation";
    case SealKind::deployment:
        return "deployment";
    case SealKind::monitoring:
        return "monitoring";
    case SealKind::lifecycle_completion:
        return "lifecycle_completion";
    }
    return "unknown";
}

SealKind seal_kind_from_wire(std::string_view wire)
{
    for (SealKind kind :
         {SealKind::dataset, SealKind::model_architecture, SealKind::training_process,
          SealKind::evaluation, SealKind::deployment, SealKind::monitoring,
          SealKind::lifecycle_completion})
        if (wire == to_wire(kind))
            return kind;
    throw Error(Errc::malformed, "unknown seal kind \"" + std::string(wire) + "\"");
}

std::string_view to_wire(TransitionType type) noexcept
{
    return type == TransitionType::retire ? "retire" : "retrain";
}

TransitionType transition_from_wire(std::string_view wire)
{
    if (wire == "retire")
        return TransitionType::retire;
    if (wire == "retrain")
        return TransitionType::retrain;
    throw Error(Errc::bad_argument,
                "transition type must be \"retire\" or \"retrain\", got \"" + std::string(wire) +
                    "\"");
}

// -- sealed inputs ----------------------------------------------------------------

Document DataSource::to_record() const
{
    require(!source_id.empty(), Errc::bad_argument, "source_id must be non-empty");
    require(metadata.is_object(), Errc::bad_argument, "source metadata must be a map");
    require(validation_rules.is_object(), Errc::bad_argument, "validation_rules must be a map");
    Document record = Document::object();
    record["source_id"] = source_id;
    record["source_type"] = source_type;
    record["timestamp"] = wire_str(timestamp);
    record["metadata"] = metadata;
    record["validation_rules"] = validation_rules;
    return record;
}

DataSource DataSource::from_record(const Document& record)
{
    FieldReader reader(record, "data source");
    DataSource source;
    source.source_id = reader.str("source_id");
    source.source_type = reader.str("source_type");
    source.timestamp = reader.timestamp("timestamp");
    source.metadata = reader.object("metadata");
    source.validation_rules = reader.object("validation_rules");
    reader.finish();
    require(!source.source_id.empty(), Errc::malformed, "source_id must be non-empty");
    return source;
}

Document DataTransformation::to_record() const
{
    require(parameters.is_object(), Errc::bad_argument, "transformation parameters must be a map");
    Document record = Document::object();
    record["operation_type"] = operation_type;
    record["parameters"] = parameters;
    Document in_shape = Document::array();
    for (std::int64_t dim : input_shape) {
        require(dim >= 0, Errc::bad_argument, "input_shape entries must be non-negative");
        in_shape.push_back(dim);
    }
    Document out_shape = Document::array();
    for (std::int64_t dim : output_shape) {
        require(dim >= 0, Errc::bad_argument, "output_shape entries must be non-negative");
        out_shape.push_back(dim);
    }
    record["input_shape"] = std::move(in_shape);
    record["output_shape"] = std::move(out_shape);
    record["timestamp"] = wire_str(timestamp);
    return record;
}

DataTransformation DataTransformation::from_record(const Document& record)
{
    FieldReader reader(record, "data transformation");
    DataTransformation t;
    t.operation_type = reader.str("operation_type");
    t.parameters = reader.object("parameters");
    for (const Document& dim : reader.array("input_shape"))
        t.input_shape.push_back(dim.get<std::int64_t>());
    for (const Document& dim : reader.array("output_shape"))
        t.output_shape.push_back(dim.get<std::int64_t>());
    t.timestamp = reader.timestamp("timestamp");
    reader.finish();
    return t;
}

Document DataPreparationPipeline::to_record() const
{
    Document list = Document::array();
    for (const DataTransformation& t : transformations)
        list.push_back(t.to_record());
    return list;
}

Digest DataPreparationPipeline::hash() const
{
    return hash_canonical(to_record());
}

DataPreparationPipeline DataPreparationPipeline::from_record(const Document& record)
{
    require(record.is_array(), Errc::malformed, "pipeline record must be a list");
    DataPreparationPipeline pipeline;
    for (const Document& entry : record)
        pipeline.transformations.push_back(DataTransformation::from_record(entry));
    return pipeline;
}

Document ModelArchitecture::to_record() const
{
    require(layers.is_array(), Errc::bad_argument, "layers must be a list");
    Document record = Document::object();
    record["framework"] = framework;
    record["architecture_type"] = architecture_type;
    record["layers"] = layers;
    record["hyperparameters"] = hyperparameters;
    record["optimization_config"] = optimization_config;
    record["custom_components"] = custom_components ? *custom_components : Document(nullptr);
    return record;
}

ModelArchitecture ModelArchitecture::from_record(const Document& record)
{
    FieldReader reader(record, "model architecture");
    ModelArchitecture arch;
    arch.framework = reader.str("framework");
    arch.architecture_type = reader.str("architecture_type");
    arch.layers = reader.array("layers");
    arch.hyperparameters = reader.object("hyperparameters");
    arch.optimization_config = reader.object("optimization_config");
    const Document& custom = reader.get("custom_components");
    if (!custom.is_null())
        arch.custom_components = custom;
    reader.finish();
    return arch;
}

Document ModelVersionEntry::to_record() const
{
    Document record = Document::object();
    record["version"] = version;
    record["architecture"] = architecture.to_record();
    record["changes"] = changes;
    record["author"] = author;
    record["timestamp"] = wire_str(timestamp);
    return record;
}

ModelVersionEntry ModelVersionEntry::from_record(const Document& record)
{
    FieldReader reader(record, "version entry");
    ModelVersionEntry entry;
    entry.version = reader.integer("version");
    entry.architecture = ModelArchitecture::from_record(reader.object("architecture"));
    entry.changes = reader.object("changes");
    entry.author = reader.str("author");
    entry.timestamp = reader.timestamp("timestamp");
    reader.finish();
    return entry;
}

void ModelVersionControl::add_version(ModelArchitecture architecture, Document changes,
                                      std::string author, Timestamp now)
{
    ModelVersionEntry entry;
    entry.version = current_version + 1;
    entry.architecture = std::move(architecture);
    entry.changes = std::move(changes);
    entry.author = std::move(author);
    entry.timestamp = now;
    versions.push_back(std::move(entry));
    current_version += 1;
}

Document ModelVersionControl::versions_record() const
{
    require(current_version == static_cast<std::int64_t>(versions.size()), Errc::bad_argument,
            "current_version must equal the number of versions");
    Document list = Document::array();
    for (std::size_t i = 0; i < versions.size(); ++i) {
        require(versions[i].version == static_cast<std::int64_t>(i) + 1, Errc::bad_argument,
                "version numbers must run 1..current_version");
        list.push_back(versions[i].to_record());
    }
    return list;
}

ModelVersionControl ModelVersionControl::from_record(const Document& versions_list)
{
    require(versions_list.is_array(), Errc::malformed, "versions record must be a list");
    ModelVersionControl vc;
    for (const Document& entry : versions_list)
        vc.versions.push_back(ModelVersionEntry::from_record(entry));
    vc.current_version = static_cast<std::int64_t>(vc.versions.size());
    vc.versions_record(); // validates numbering
    return vc;
}

Document TrainingConfig::to_record() const
{
    require(batch_size >= 1, Errc::bad_argument, "batch_size must be >= 1");
    require(epochs >= 0, Errc::bad_argument, "epochs must be >= 0");
    check_decimal(validation_split, "validation_split");
    Document record = Document::object();
    record["batch_size"] = batch_size;
    record["epochs"] = epochs;
    record["optimizer_config"] = optimizer_config;
    record["loss_function"] = loss_function;
    Document names = Document::array();
    for (const std::string& name : metrics)
        names.push_back(name);
    record["metrics"] = std::move(names);
    record["validation_split"] = validation_split;
    record["callbacks"] = callbacks;
    return record;
}

TrainingConfig TrainingConfig::from_record(const Document& record)
{
    FieldReader reader(record, "training config");
    TrainingConfig config;
    config.batch_size = reader.integer("batch_size");
    config.epochs = reader.integer("epochs");
    config.optimizer_config = reader.object("optimizer_config");
    config.loss_function = reader.str("loss_function");
    for (const Document& name : reader.array("metrics"))
        config.metrics.push_back(name.get<std::string>());
    config.validation_split = reader.str("validation_split");
    config.callbacks = reader.array("callbacks");
    reader.finish();
    config.to_record(); // validates ranges
    return config;
}

Document TrainingMetrics::to_record() const
{
    require(epoch_metrics.is_array(), Errc::bad_argument, "epoch_metrics must be a list");
    require(validation_metrics.is_array(), Errc::bad_argument,
            "validation_metrics must be a list");
    check_decimal(training_duration, "training_duration");
    Document record = Document::object();
    record["epoch_metrics"] = epoch_metrics;
    record["validation_metrics"] = validation_metrics;
    record["training_duration"] = training_duration;
    record["resource_usage"] = resource_usage;
    return record;
}

TrainingMetrics TrainingMetrics::from_record(const Document& record)
{
    FieldReader reader(record, "training metrics");
    TrainingMetrics metrics;
    metrics.epoch_metrics = reader.array("epoch_metrics");
    metrics.validation_metrics = reader.array("validation_metrics");
    metrics.training_duration = reader.str("training_duration");
    metrics.resource_usage = reader.object("resource_usage");
    reader.finish();
    metrics.to_record();
    return metrics;
}

Document Checkpoint::to_record() const
{
    require(epoch >= 0, Errc::bad_argument, "checkpoint epoch must be >= 0");
    Document record = Document::object();
    record["epoch"] = epoch;
    record["metrics"] = metrics;
    record["weights_hash"] = weights_hash.hex();
    record["timestamp"] = wire_str(timestamp);
    return record;
}

Checkpoint Checkpoint::from_record(const Document& record)
{
    FieldReader reader(record, "checkpoint");
    std::int64_t epoch = reader.integer("epoch");
    Document metrics = reader.object("metrics");
    Digest weights = reader.digest("weights_hash");
    Timestamp ts = reader.timestamp("timestamp");
    reader.finish();
    Checkpoint checkpoint{epoch, std::move(metrics), weights, ts};
    checkpoint.to_record();
    return checkpoint;
}

Document checkpoints_record(const std::vector<Checkpoint>& checkpoints)
{
    Document list = Document::array();
    for (const Checkpoint& checkpoint : checkpoints)
        list.push_back(checkpoint.to_record());
    return list;
}

Document EvaluationMetrics::to_record() const
{
    check_unit_decimal(accuracy, "accuracy");
    check_unit_decimal(precision, "precision");
    check_unit_decimal(recall, "recall");
    check_unit_decimal(f1_score, "f1_score");
    require(additional_metrics.is_object(), Errc::bad_argument,
            "additional_metrics must be a map");
    Document record = Document::object();
    record["accuracy"] = accuracy;
    record["precision"] = precision;
    record["recall"] = recall;
    record["f1_score"] = f1_score;
    record["additional"] = additional_metrics;
    return record;
}

EvaluationMetrics EvaluationMetrics::from_record(const Document& record)
{
    FieldReader reader(record, "evaluation metrics");
    EvaluationMetrics metrics;
    metrics.accuracy = reader.str("accuracy");
    metrics.precision = reader.str("precision");
    metrics.recall = reader.str("recall");
    metrics.f1_score = reader.str("f1_score");
    metrics.additional_metrics = reader.object("additional");
    reader.finish();
    metrics.to_record();
    return metrics;
}

Document DeploymentConfig::to_record() const
{
    Document record = Document::object();
    record["runtime"] = runtime_settings;
    record["scaling"] = scaling_params;
    record["monitoring"] = monitoring_config;
    record["security"] = security_params;
    return record;
}

DeploymentConfig DeploymentConfig::from_record(const Document& record)
{
    FieldReader reader(record, "deployment config");
    DeploymentConfig config;
    config.runtime_settings = reader.object("runtime");
    config.scaling_params = reader.object("scaling");
    config.monitoring_config = reader.object("monitoring");
    config.security_params = reader.object("security");
    reader.finish();
    return config;
}

Document MonitoringData::to_record() const
{
    require(drift_metrics.is_object(), Errc::bad_argument, "drift_metrics must be a map");
    for (auto it = drift_metrics.begin(); it != drift_metrics.end(); ++it) {
        require(it.value().is_string() && is_decimal_string(it.value().get<std::string>()),
                Errc::bad_argument,
                "drift metric \"" + it.key() + "\" must be a non-negative decimal string");
    }
    require(alerts.is_array(), Errc::bad_argument, "alerts must be a list");
    Document record = Document::object();
    record["performance"] = performance_metrics;
    record["drift"] = drift_metrics;
    record["resources"] = resource_usage;
    record["alerts"] = alerts;
    return record;
}

MonitoringData MonitoringData::from_record(const Document& record)
{
    FieldReader reader(record, "monitoring data");
    MonitoringData data;
    data.performance_metrics = reader.object("performance");
    data.drift_metrics = reader.object("drift");
    data.resource_usage = reader.object("resources");
    data.alerts = reader.array("alerts");
    reader.finish();
    data.to_record();
    return data;
}

// -- envelope helpers ---------------------------------------------------------------

SealKind envelope_kind(const Document& env)
{
    if (!env.is_object() || !env.contains("seal_kind") || !env["seal_kind"].is_string())
        throw Error(Errc::malformed, "envelope has no seal_kind");
    return seal_kind_from_wire(env["seal_kind"].get<std::string>());
}

Digest seal_digest(const Document& envelope)
{
    return hash_canonical(envelope);
}

Digest seal_digest_bytes(std::string_view canonical_envelope_bytes)
{
    return hash_bytes(canonical_envelope_bytes);
}

std::string signing_input(const std::vector<Digest>& components, Timestamp timestamp)
{
    return combine_digests(components).hex() + timestamp.wire();
}

UpstreamRef upstream_ref(const TrainingProcessSeal& seal)
{
    return UpstreamRef{seal_digest(seal.envelope()), SealKind::training_process};
}

UpstreamRef upstream_ref(const ModelArchitectureSeal& seal)
{
    return UpstreamRef{seal_digest(seal.envelope()), SealKind::model_architecture};
}

// -- DatasetSeal ---------------------------------------------------------------------

std::vector<Digest> DatasetSeal::component_digests() const
{
    return {raw_data_hash, processed_data_hash, source_hash, pipeline_hash};
}

Document DatasetSeal::envelope() const
{
    Document env = Document::object();
    env["raw_data_hash"] = raw_data_hash.hex();
    env["processed_data_hash"] = processed_data_hash.hex();
    env["source_hash"] = source_hash.hex();
    env["pipeline_hash"] = pipeline_hash.hex();
    put_envelope_base(env, SealKind::dataset, timestamp, signature, key_fingerprint);
    return env;
}

DatasetSeal DatasetSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "dataset seal envelope");
    Digest raw = reader.digest("raw_data_hash");
    Digest processed = reader.digest("processed_data_hash");
    Digest source = reader.digest("source_hash");
    Digest pipeline = reader.digest("pipeline_hash");
    EnvelopeBase base = read_envelope_base(reader, SealKind::dataset);
    reader.finish();
    return DatasetSeal{raw,            processed,           source,
                       pipeline,       base.timestamp,      std::move(base.signature),
                       base.key_fingerprint};
}

DatasetSeal seal_dataset(std::istream& raw_data, const DataSource& source,
                         const DataPreparationPipeline& pipeline, std::istream& processed_data,
                         const PrivateKey& key, Timestamp now)
{
    Digest raw_hash = hash_stream(raw_data);
    Digest processed_hash = hash_stream(processed_data);
    Digest source_hash = hash_canonical(source.to_record());
    Digest pipeline_hash = pipeline.hash();
    std::vector<Digest> components{raw_hash, processed_hash, source_hash, pipeline_hash};
    Signature signature = sign_components(components, now, key);
    return DatasetSeal{raw_hash,       processed_hash,       source_hash,
                       pipeline_hash,  now,                  std::move(signature),
                       key.public_key().fingerprint()};
}

// -- ModelArchitectureSeal --------------------------------------------------------------

std::vector<Digest> ModelArchitectureSeal::component_digests() const
{
    return {architecture_hash, version_hash};
}

Document ModelArchitectureSeal::envelope() const
{
    Document env = Document::object();
    env["architecture_hash"] = architecture_hash.hex();
    env["version_hash"] = version_hash.hex();
    put_envelope_base(env, SealKind::model_architecture, timestamp, signature, key_fingerprint);
    return env;
}

ModelArchitectureSeal ModelArchitectureSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "model architecture seal envelope");
    Digest architecture = reader.digest("architecture_hash");
    Digest version = reader.digest("version_hash");
    EnvelopeBase base = read_envelope_base(reader, SealKind::model_architecture);
    reader.finish();
    return ModelArchitectureSeal{architecture, version, base.timestamp,
                                 std::move(base.signature), base.key_fingerprint};
}

ModelArchitectureSeal seal_model_architecture(const ModelArchitecture& architecture,
                                              const ModelVersionControl& version_control,
                                              const PrivateKey& key, Timestamp now)
{
    Digest architecture_hash = hash_canonical(architecture.to_record());
    Digest version_hash = hash_canonical(version_control.versions_record());
    std::vector<Digest> components{architecture_hash, version_hash};
    Signature signature = sign_components(components, now, key);
    return ModelArchitectureSeal{architecture_hash, version_hash, now, std::move(signature),
                                 key.public_key().fingerprint()};
}

// -- TrainingProcessSeal -----------------------------------------------------------------

std::vector<Digest> TrainingProcessSeal::component_digests() const
{
    return {config_hash, checkpoints_hash,  weights_hash,
            metrics_hash, model_seal_digest, dataset_seal_digest};
}

Document TrainingProcessSeal::envelope() const
{
    Document env = Document::object();
    env["config_hash"] = config_hash.hex();
    env["checkpoints_hash"] = checkpoints_hash.hex();
    env["weights_hash"] = weights_hash.hex();
    env["metrics_hash"] = metrics_hash.hex();
    env["model_seal_digest"] = model_seal_digest.hex();
    env["dataset_seal_digest"] = dataset_seal_digest.hex();
    put_envelope_base(env, SealKind::training_process, timestamp, signature, key_fingerprint);
    return env;
}

TrainingProcessSeal TrainingProcessSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "training process seal envelope");
    Digest config = reader.digest("config_hash");
    Digest checkpoints = reader.digest("checkpoints_hash");
    Digest weights = reader.digest("weights_hash");
    Digest metrics = reader.digest("metrics_hash");
    Digest model = reader.digest("model_seal_digest");
    Digest dataset = reader.digest("dataset_seal_digest");
    EnvelopeBase base = read_envelope_base(reader, SealKind::training_process);
    reader.finish();
    return TrainingProcessSeal{config,  checkpoints,    weights,
                               metrics, model,          dataset,
                               base.timestamp, std::move(base.signature), base.key_fingerprint};
}

TrainingProcessSeal seal_training_process(const ModelArchitectureSeal& model_seal,
                                          const DatasetSeal& dataset_seal,
                                          const TrainingConfig& config,
                                          const std::vector<Checkpoint>& checkpoints,
                                          std::istream& final_weights,
                                          const TrainingMetrics& metrics, const PrivateKey& key,
                                          Timestamp now)
{
    require(static_cast<std::int64_t>(metrics.epoch_metrics.size()) <= config.epochs,
            Errc::bad_argument, "epoch_metrics cannot exceed configured epochs");
    Digest config_hash = hash_canonical(config.to_record());
    Digest checkpoints_hash = hash_canonical(checkpoints_record(checkpoints));
    Digest weights_hash = hash_stream(final_weights);
    Digest metrics_hash = hash_canonical(metrics.to_record());
    Digest model_digest = seal_digest(model_seal.envelope());
    Digest dataset_digest = seal_digest(dataset_seal.envelope());
    std::vector<Digest> components{config_hash, checkpoints_hash, weights_hash,
                                   metrics_hash, model_digest,    dataset_digest};
    Signature signature = sign_components(components, now, key);
    return TrainingProcessSeal{config_hash,  checkpoints_hash, weights_hash,
                               metrics_hash, model_digest,     dataset_digest,
                               now,          std::move(signature),
                               key.public_key().fingerprint()};
}

// -- EvaluationSeal --------------------------------------------------------------------

std::vector<Digest> EvaluationSeal::component_digests() const
{
    return {test_data_hash, metrics_hash, model_seal_digest};
}

Document EvaluationSeal::envelope() const
{
    Document env = Document::object();
    env["test_data_hash"] = test_data_hash.hex();
    env["metrics_hash"] = metrics_hash.hex();
    env["model_seal_digest"] = model_seal_digest.hex();
    env["upstream_kind"] = std::string(to_wire(upstream_kind));
    put_envelope_base(env, SealKind::evaluation, timestamp, signature, key_fingerprint);
    return env;
}

EvaluationSeal EvaluationSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "evaluation seal envelope");
    Digest test_data = reader.digest("test_data_hash");
    Digest metrics = reader.digest("metrics_hash");
    Digest model = reader.digest("model_seal_digest");
    SealKind upstream = upstream_kind_from_wire(reader.str("upstream_kind"));
    EnvelopeBase base = read_envelope_base(reader, SealKind::evaluation);
    reader.finish();
    return EvaluationSeal{test_data,      metrics,        model,
                          upstream,       base.timestamp, std::move(base.signature),
                          base.key_fingerprint};
}

EvaluationSeal seal_evaluation(const UpstreamRef& model_seal, std::istream& test_data,
                               const EvaluationMetrics& metrics, const PrivateKey& key,
                               Timestamp now)
{
    check_upstream_source(model_seal);
    Digest test_data_hash = hash_stream(test_data);
    Digest metrics_hash = hash_canonical(metrics.to_record());
    std::vector<Digest> components{test_data_hash, metrics_hash, model_seal.digest};
    Signature signature = sign_components(components, now, key);
    return EvaluationSeal{test_data_hash,  metrics_hash, model_seal.digest,
                          model_seal.kind, now,          std::move(signature),
                          key.public_key().fingerprint()};
}

// -- DeploymentSeal --------------------------------------------------------------------

std::vector<Digest> DeploymentSeal::component_digests() const
{
    return {config_hash, environment_hash, model_seal_digest};
}

Document DeploymentSeal::envelope() const
{
    Document env = Document::object();
    env["config_hash"] = config_hash.hex();
    env["environment_hash"] = environment_hash.hex();
    env["model_seal_digest"] = model_seal_digest.hex();
    env["upstream_kind"] = std::string(to_wire(upstream_kind));
    put_envelope_base(env, SealKind::deployment, timestamp, signature, key_fingerprint);
    return env;
}

DeploymentSeal DeploymentSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "deployment seal envelope");
    Digest config = reader.digest("config_hash");
    Digest environment = reader.digest("environment_hash");
    Digest model = reader.digest("model_seal_digest");
    SealKind upstream = upstream_kind_from_wire(reader.str("upstream_kind"));
    EnvelopeBase base = read_envelope_base(reader, SealKind::deployment);
    reader.finish();
    return DeploymentSeal{config,         environment,    model,
                          upstream,       base.timestamp, std::move(base.signature),
                          base.key_fingerprint};
}

DeploymentSeal seal_deployment(const UpstreamRef& model_seal, const DeploymentConfig& config,
                               const Document& environment, const PrivateKey& key, Timestamp now)
{
    check_upstream_source(model_seal);
    require(environment.is_object(), Errc::bad_argument, "environment must be a map");
    Digest config_hash = hash_canonical(config.to_record());
    Digest environment_hash = hash_canonical(environment);
    std::vector<Digest> components{config_hash, environment_hash, model_seal.digest};
    Signature signature = sign_components(components, now, key);
    return DeploymentSeal{config_hash,     environment_hash, model_seal.digest,
                          model_seal.kind, now,              std::move(signature),
                          key.public_key().fingerprint()};
}

// -- MonitoringSeal --------------------------------------------------------------------

std::vector<Digest> MonitoringSeal::component_digests() const
{
    return {monitoring_hash, maintenance_hash, deployment_seal_digest};
}

Document MonitoringSeal::envelope() const
{
    Document env = Document::object();
    env["monitoring_hash"] = monitoring_hash.hex();
    env["maintenance_hash"] = maintenance_hash.hex();
    env["deployment_seal_digest"] = deployment_seal_digest.hex();
    put_envelope_base(env, SealKind::monitoring, timestamp, signature, key_fingerprint);
    return env;
}

MonitoringSeal MonitoringSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "monitoring seal envelope");
    Digest monitoring = reader.digest("monitoring_hash");
    Digest maintenance = reader.digest("maintenance_hash");
    Digest deployment = reader.digest("deployment_seal_digest");
    EnvelopeBase base = read_envelope_base(reader, SealKind::monitoring);
    reader.finish();
    return MonitoringSeal{monitoring,     maintenance, deployment, base.timestamp,
                          std::move(base.signature), base.key_fingerprint};
}

MonitoringSeal seal_monitoring_period(const DeploymentSeal& deployment_seal,
                                      const MonitoringData& data,
                                      const std::optional<Document>& maintenance_actions,
                                      const PrivateKey& key, Timestamp now)
{
    Digest monitoring_hash = hash_canonical(data.to_record());
    // Absent maintenance actions hash as the empty map.
    Digest maintenance_hash =
        maintenance_actions ? hash_canonical(*maintenance_actions) : hash_bytes("{}");
    Digest deployment_digest = seal_digest(deployment_seal.envelope());
    std::vector<Digest> components{monitoring_hash, maintenance_hash, deployment_digest};
    Signature signature = sign_components(components, now, key);
    return MonitoringSeal{monitoring_hash,   maintenance_hash, deployment_digest, now,
                          std::move(signature), key.public_key().fingerprint()};
}

// -- LifecycleCompletionSeal --------------------------------------------------------------

namespace {

Document transition_record(TransitionType type, std::string_view justification)
{
    Document record = Document::object();
    record["type"] = std::string(to_wire(type));
    record["justification"] = std::string(justification);
    return record;
}

} // namespace

std::vector<Digest> LifecycleCompletionSeal::component_digests() const
{
    return {transition_hash, history_hash, model_seal_digest};
}

Document LifecycleCompletionSeal::envelope() const
{
    Document env = Document::object();
    env["transition_type"] = std::string(to_wire(transition_type));
    env["justification"] = justification;
    env["transition_hash"] = transition_hash.hex();
    env["history_hash"] = history_hash.hex();
    env["model_seal_digest"] = model_seal_digest.hex();
    env["upstream_kind"] = std::string(to_wire(upstream_kind));
    put_envelope_base(env, SealKind::lifecycle_completion, timestamp, signature, key_fingerprint);
    return env;
}

LifecycleCompletionSeal LifecycleCompletionSeal::from_envelope(const Document& env)
{
    FieldReader reader(env, "lifecycle completion seal envelope");
    TransitionType type = transition_from_wire(reader.str("transition_type"));
    std::string justification = reader.str("justification");
    Digest transition = reader.digest("transition_hash");
    Digest history = reader.digest("history_hash");
    Digest model = reader.digest("model_seal_digest");
    SealKind upstream = upstream_kind_from_wire(reader.str("upstream_kind"));
    EnvelopeBase base = read_envelope_base(reader, SealKind::lifecycle_completion);
    reader.finish();
    return LifecycleCompletionSeal{type,     std::move(justification),
                                   transition, history,
                                   model,    upstream,
                                   base.timestamp, std::move(base.signature),
                                   base.key_fingerprint};
}

LifecycleCompletionSeal seal_lifecycle_completion(const UpstreamRef& model_seal,
                                                  TransitionType transition_type,
                                                  std::string_view justification,
                                                  const Document& performance_history,
                                                  const PrivateKey& key, Timestamp now)
{
    check_upstream_source(model_seal);
    Digest transition_hash = hash_canonical(transition_record(transition_type, justification));
    Digest history_hash = hash_canonical(performance_history);
    std::vector<Digest> components{transition_hash, history_hash, model_seal.digest};
    Signature signature = sign_components(components, now, key);
    return LifecycleCompletionSeal{transition_type,
                                   std::string(justification),
                                   transition_hash,
                                   history_hash,
                                   model_seal.digest,
                                   model_seal.kind,
                                   now,
                                   std::move(signature),
                                   key.public_key().fingerprint()};
}

// -- verification -------------------------------------------------------------------------

namespace {

void add_signature_check(VerificationReport& report, const std::vector<Digest>& components,
                         Timestamp timestamp, const Signature& signature,
                         const Digest& claimed_fingerprint, const PublicKey& key)
{
    if (key.fingerprint() != claimed_fingerprint) {
        report.add(Component::signature, false, "key fingerprint does not match envelope");
        return;
    }
    bool ok = verify_signature(signing_input(components, timestamp), signature, key);
    report.add(Component::signature, ok, ok ? "" : "signature does not verify");
}

void add_digest_check(VerificationReport& report, Component component, const Digest& recomputed,
                      const Digest& sealed, const std::string& what = {})
{
    bool ok = recomputed == sealed;
    report.add(component, ok, ok ? std::string{} : (what.empty() ? "recomputed digest differs" : what));
}

void add_dependency_check(VerificationReport& report, const Document& upstream_envelope,
                          SealKind expected_kind, const Digest& sealed_digest,
                          const std::string& which)
{
    if (upstream_envelope.is_null()) {
        report.add(Component::dependency, false, which + ": upstream seal is not available");
        return;
    }
    SealKind kind;
    try {
        kind = envelope_kind(upstream_envelope);
    } catch (const Error&) {
        report.add(Component::dependency, false, which + ": upstream envelope is malformed");
        return;
    }
    if (kind != expected_kind) {
        report.add(Component::dependency, false,
                   which + ": upstream seal kind is " + std::string(to_wire(kind)) +
                       ", expected " + std::string(to_wire(expected_kind)));
        return;
    }
    bool ok = seal_digest(upstream_envelope) == sealed_digest;
    report.add(Component::dependency, ok, ok ? "" : which + ": upstream seal digest differs");
}

void add_transition_self_check(VerificationReport& report, const LifecycleCompletionSeal& seal)
{
    Digest recomputed =
        hash_canonical(transition_record(seal.transition_type, seal.justification));
    add_digest_check(report, Component::transition, recomputed, seal.transition_hash,
                     "disclosed transition fields do not re-hash to transition_hash");
}

} // namespace

VerificationReport verify_dataset_seal(const DatasetSeal& seal, const PublicKey& key)
{
    VerificationReport report{VerificationTier::signature_only, {}};
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_dataset_seal(const DatasetSeal& seal, const PublicKey& key,
                                       std::istream& raw_data, std::istream& processed_data,
                                       const DataSource& source,
                                       const DataPreparationPipeline& pipeline)
{
    VerificationReport report{VerificationTier::full, {}};
    add_digest_check(report, Component::raw, hash_stream(raw_data), seal.raw_data_hash);
    add_digest_check(report, Component::processed, hash_stream(processed_data),
                     seal.processed_data_hash);
    add_digest_check(report, Component::source, hash_canonical(source.to_record()),
                     seal.source_hash);
    add_digest_check(report, Component::pipeline, pipeline.hash(), seal.pipeline_hash);
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_model_architecture_seal(const ModelArchitectureSeal& seal,
                                                  const PublicKey& key)
{
    VerificationReport report{VerificationTier::signature_only, {}};
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_model_architecture_seal(const ModelArchitectureSeal& seal,
                                                  const PublicKey& key,
                                                  const ModelArchitecture& architecture,
                                                  const ModelVersionControl& version_control)
{
    VerificationReport report{VerificationTier::full, {}};
    add_digest_check(report, Component::architecture, hash_canonical(architecture.to_record()),
                     seal.architecture_hash);
    add_digest_check(report, Component::version,
                     hash_canonical(version_control.versions_record()), seal.version_hash);
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_training_process_seal(const TrainingProcessSeal& seal,
                                                const PublicKey& key)
{
    VerificationReport report{VerificationTier::signature_only, {}};
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_training_process_seal(
    const TrainingProcessSeal& seal, const PublicKey& key, const Document& model_seal_envelope,
    const Document& dataset_seal_envelope, const TrainingConfig& config,
    const std::vector<Checkpoint>& checkpoints, std::istream& final_weights,
    const TrainingMetrics& metrics)
{
    VerificationReport report{VerificationTier::full, {}};
    add_digest_check(report, Component::config, hash_canonical(config.to_record()),
                     seal.config_hash);
    add_digest_check(report, Component::checkpoints,
                     hash_canonical(checkpoints_record(checkpoints)), seal.checkpoints_hash);
    add_digest_check(report, Component::weights, hash_stream(final_weights), seal.weights_hash);
    add_digest_check(report, Component::metrics, hash_canonical(metrics.to_record()),
                     seal.metrics_hash);
    add_dependency_check(report, model_seal_envelope, SealKind::model_architecture,
                         seal.model_seal_digest, "model seal");
    add_dependency_check(report, dataset_seal_envelope, SealKind::dataset,
                         seal.dataset_seal_digest, "dataset seal");
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_evaluation_seal(const EvaluationSeal& seal, const PublicKey& key)
{
    VerificationReport report{VerificationTier::signature_only, {}};
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_evaluation_seal(const EvaluationSeal& seal, const PublicKey& key,
                                          const Document& upstream_envelope,
                                          std::istream& test_data,
                                          const EvaluationMetrics& metrics)
{
    VerificationReport report{VerificationTier::full, {}};
    add_digest_check(report, Component::test_data, hash_stream(test_data), seal.test_data_hash);
    add_digest_check(report, Component::metrics, hash_canonical(metrics.to_record()),
                     seal.metrics_hash);
    add_dependency_check(report, upstream_envelope, seal.upstream_kind, seal.model_seal_digest,
                         "model seal");
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

namespace {

void add_current_environment_check(VerificationReport& report, const DeploymentSeal& seal,
                                   const Document* current_environment)
{
    if (current_environment == nullptr)
        return;
    add_digest_check(report, Component::environment, hash_canonical(*current_environment),
                     seal.environment_hash, "current environment does not match sealed one");
}

} // namespace

VerificationReport verify_deployment_seal(const DeploymentSeal& seal, const PublicKey& key,
                                          const Document* current_environment)
{
    VerificationReport report{VerificationTier::signature_only, {}};
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    add_current_environment_check(report, seal, current_environment);
    return report;
}

VerificationReport verify_deployment_seal(const DeploymentSeal& seal, const PublicKey& key,
                                          const Document& upstream_envelope,
                                          const DeploymentConfig& config,
                                          const Document& environment,
                                          const Document* current_environment)
{
    VerificationReport report{VerificationTier::full, {}};
    add_digest_check(report, Component::config, hash_canonical(config.to_record()),
                     seal.config_hash);
    add_digest_check(report, Component::environment, hash_canonical(environment),
                     seal.environment_hash);
    add_dependency_check(report, upstream_envelope, seal.upstream_kind, seal.model_seal_digest,
                         "model seal");
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    add_current_environment_check(report, seal, current_environment);
    return report;
}

VerificationReport verify_monitoring_seal(const MonitoringSeal& seal, const PublicKey& key)
{
    VerificationReport report{VerificationTier::signature_only, {}};
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_monitoring_seal(const MonitoringSeal& seal, const PublicKey& key,
                                          const Document& deployment_seal_envelope,
                                          const MonitoringData& data,
                                          const std::optional<Document>& maintenance_actions)
{
    VerificationReport report{VerificationTier::full, {}};
    add_digest_check(report, Component::monitoring, hash_canonical(data.to_record()),
                     seal.monitoring_hash);
    Digest maintenance =
        maintenance_actions ? hash_canonical(*maintenance_actions) : hash_bytes("{}");
    add_digest_check(report, Component::maintenance, maintenance, seal.maintenance_hash);
    add_dependency_check(report, deployment_seal_envelope, SealKind::deployment,
                         seal.deployment_seal_digest, "deployment seal");
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_lifecycle_completion_seal(const LifecycleCompletionSeal& seal,
                                                    const PublicKey& key)
{
    VerificationReport report{VerificationTier::signature_only, {}};
    add_transition_self_check(report, seal);
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_lifecycle_completion_seal(const LifecycleCompletionSeal& seal,
                                                    const PublicKey& key,
                                                    const Document& upstream_envelope,
                                                    const Document& performance_history)
{
    VerificationReport report{VerificationTier::full, {}};
    add_transition_self_check(report, seal);
    add_digest_check(report, Component::history, hash_canonical(performance_history),
                     seal.history_hash);
    add_dependency_check(report, upstream_envelope, seal.upstream_kind, seal.model_seal_digest,
                         "model seal");
    add_signature_check(report, seal.component_digests(), seal.timestamp, seal.signature,
                        seal.key_fingerprint, key);
    return report;
}

VerificationReport verify_envelope_signature(const Document& envelope, const PublicKey& key)
{
    switch (envelope_kind(envelope)) {
    case SealKind::dataset:
        return verify_dataset_seal(DatasetSeal::from_envelope(envelope), key);
    case SealKind::model_architecture:
        return verify_model_architecture_seal(ModelArchitectureSeal::from_envelope(envelope), key);
    case SealKind::training_process:
        return verify_training_process_seal(TrainingProcessSeal::from_envelope(envelope), key);
    case SealKind::evaluation:
        return verify_evaluation_seal(EvaluationSeal::from_envelope(envelope), key);
    case SealKind::deployment:
        return verify_deployment_seal(DeploymentSeal::from_envelope(envelope), key);
    case SealKind::monitoring:
        return verify_monitoring_seal(MonitoringSeal::from_envelope(envelope), key);
    case SealKind::lifecycle_completion:
        return verify_lifecycle_completion_seal(LifecycleCompletionSeal::from_envelope(envelope),
                                                key);
    }
    throw Error(Errc::malformed, "unknown seal kind");
}

// -- stage-specific queries ------------------------------------------------------------------

std::map<std::string, bool> check_drift_threshold(const MonitoringSeal& seal,
                                                  const MonitoringData& original,
                                                  std::string_view threshold)
{
    if (hash_canonical(original.to_record()) != seal.monitoring_hash)
        throw Error(Errc::data_mismatch,
                    "supplied monitoring data does not match the sealed monitoring_hash");
    std::map<std::string, bool> result;
    for (auto it = original.drift_metrics.begin(); it != original.drift_metrics.end(); ++it) {
        const std::string value = it.value().get<std::string>();
        result[it.key()] = compare_decimal(value, threshold) <= 0;
    }
    return result;
}

TransitionDetails get_transition_details(const LifecycleCompletionSeal& seal)
{
    Digest recomputed =
        hash_canonical(transition_record(seal.transition_type, seal.justification));
    if (recomputed != seal.transition_hash)
        throw Error(Errc::disclosure_mismatch,
                    "disclosed transition fields do not re-hash to transition_hash");
    return TransitionDetails{seal.transition_type, seal.justification, seal.timestamp};
}

} // namespace metaseal
