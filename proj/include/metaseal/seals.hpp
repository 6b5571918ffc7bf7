#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaseal/canonical.hpp"
#include "metaseal/crypto.hpp"
#include "metaseal/report.hpp"

namespace metaseal {

enum class SealKind {
    dataset,
    model_architecture,
    training_process,
    evaluation,
    deployment,
    monitoring,
    lifecycle_completion,
};

std::string_view to_wire(SealKind kind) noexcept;
SealKind seal_kind_from_wire(std::string_view wire);

// -- sealed inputs -------------------------------------------------------------

struct DataSource {
    std::string source_id;
    std::string source_type;
    Timestamp timestamp{0};
    Document metadata = Document::object();
    Document validation_rules = Document::object();

    Document to_record() const;
    static DataSource from_record(const Document& record);
};

struct DataTransformation {
    std::string operation_type;
    Document parameters = Document::object();
    std::vector<std::int64_t> input_shape;
    std::vector<std::int64_t> output_shape;
    Timestamp timestamp{0};

    Document to_record() const;
    static DataTransformation from_record(const Document& record);
};

/// Order-sensitive: permuting transformations changes the pipeline hash.
struct DataPreparationPipeline {
    std::vector<DataTransformation> transformations;

    Document to_record() const;
    Digest hash() const;
    static DataPreparationPipeline from_record(const Document& record);
};

struct ModelArchitecture {
    std::string framework;
    std::string architecture_type;
    Document layers = Document::array();
    Document hyperparameters = Document::object();
    Document optimization_config = Document::object();
    std::optional<Document> custom_components;

    Document to_record() const;
    static ModelArchitecture from_record(const Document& record);
};

struct ModelVersionEntry {
    std::int64_t version = 0;
    ModelArchitecture architecture;
    Document changes = Document::object();
    std::string author;
    Timestamp timestamp{0};

    Document to_record() const;
    static ModelVersionEntry from_record(const Document& record);
};

/// Version numbers run 1..current_version, strictly increasing.
struct ModelVersionControl {
    std::vector<ModelVersionEntry> versions;
    std::int64_t current_version = 0;

    void add_version(ModelArchitecture architecture, Document changes, std::string author,
                     Timestamp now);
    Document versions_record() const;
    static ModelVersionControl from_record(const Document& versions_list);
};

struct TrainingConfig {
    std::int64_t batch_size = 1;
    std::int64_t epochs = 0;
    Document optimizer_config = Document::object();
    std::string loss_function;
    std::vector<std::string> metrics;
    std::string validation_split; // decimal string
    Document callbacks = Document::array();

    Document to_record() const;
    static TrainingConfig from_record(const Document& record);
};

struct TrainingMetrics {
    Document epoch_metrics = Document::array();      // list of maps of decimal strings
    Document validation_metrics = Document::array();
    std::string training_duration; // decimal string, seconds
    Document resource_usage = Document::object();

    Document to_record() const;
    static TrainingMetrics from_record(const Document& record);
};

struct Checkpoint {
    std::int64_t epoch = 0;
    Document metrics = Document::object(); // map of decimal strings
    Digest weights_hash;
    Timestamp timestamp{0};

    Document to_record() const;
    static Checkpoint from_record(const Document& record);
};

Document checkpoints_record(const std::vector<Checkpoint>& checkpoints);

/// Named metrics are decimal strings in [0, 1].
struct EvaluationMetrics {
    std::string accuracy;
    std::string precision;
    std::string recall;
    std::string f1_score;
    Document additional_metrics = Document::object();

    Document to_record() const;
    static EvaluationMetrics from_record(const Document& record);
};

struct DeploymentConfig {
    Document runtime_settings = Document::object();
    Document scaling_params = Document::object();
    Document monitoring_config = Document::object();
    Document security_params = Document::object();

    Document to_record() const;
    static DeploymentConfig from_record(const Document& record);
};

/// Drift metric values are non-negative decimal strings.
struct MonitoringData {
    Document performance_metrics = Document::object();
    Document drift_metrics = Document::object();
    Document resource_usage = Document::object();
    Document alerts = Document::array();

    Document to_record() const;
    static MonitoringData from_record(const Document& record);
};

enum class TransitionType { retire, retrain };

std::string_view to_wire(TransitionType type) noexcept;
TransitionType transition_from_wire(std::string_view wire);

// -- stage seals ----------------------------------------------------------------
//
// Every stage signs the same shape of input: combine_digests(component
// digests in the type-specified order).hex followed by the timestamp wire
// string. Upstream references are seal-envelope digests, not embedded seals.

struct UpstreamRef {
    Digest digest;
    SealKind kind;
};

struct DatasetSeal {
    Digest raw_data_hash;
    Digest processed_data_hash;
    Digest source_hash;
    Digest pipeline_hash;
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;

    std::vector<Digest> component_digests() const;
    Document envelope() const;
    static DatasetSeal from_envelope(const Document& env);
};

struct ModelArchitectureSeal {
    Digest architecture_hash;
    Digest version_hash;
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;

    std::vector<Digest> component_digests() const;
    Document envelope() const;
    static ModelArchitectureSeal from_envelope(const Document& env);
};

struct TrainingProcessSeal {
    Digest config_hash;
    Digest checkpoints_hash;
    Digest weights_hash;
    Digest metrics_hash;
    Digest model_seal_digest;
    Digest dataset_seal_digest;
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;

    std::vector<Digest> component_digests() const;
    Document envelope() const;
    static TrainingProcessSeal from_envelope(const Document& env);
};

struct EvaluationSeal {
    Digest test_data_hash;
    Digest metrics_hash;
    Digest model_seal_digest;
    SealKind upstream_kind = SealKind::training_process;
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;

    std::vector<Digest> component_digests() const;
    Document envelope() const;
    static EvaluationSeal from_envelope(const Document& env);
};

struct DeploymentSeal {
    Digest config_hash;
    Digest environment_hash;
    Digest model_seal_digest;
    SealKind upstream_kind = SealKind::training_process;
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;

    std::vector<Digest> component_digests() const;
    Document envelope() const;
    static DeploymentSeal from_envelope(const Document& env);
};

struct MonitoringSeal {
    Digest monitoring_hash;
    Digest maintenance_hash;
    Digest deployment_seal_digest;
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;

    std::vector<Digest> component_digests() const;
    Document envelope() const;
    static MonitoringSeal from_envelope(const Document& env);
};

/// Transition type and justification are disclosed in clear and committed
/// via transition_hash.
struct LifecycleCompletionSeal {
    TransitionType transition_type = TransitionType::retire;
    std::string justification;
    Digest transition_hash;
    Digest history_hash;
    Digest model_seal_digest;
    SealKind upstream_kind = SealKind::training_process;
    Timestamp timestamp{0};
    Signature signature;
    Digest key_fingerprint;

    std::vector<Digest> component_digests() const;
    Document envelope() const;
    static LifecycleCompletionSeal from_envelope(const Document& env);
};

// -- envelope helpers ------------------------------------------------------------

SealKind envelope_kind(const Document& env);

/// Digest of the full canonical envelope, signature included; the value that
/// chains downstream seals to this one.
Digest seal_digest(const Document& envelope);
Digest seal_digest_bytes(std::string_view canonical_envelope_bytes);

/// The byte string every stage signature covers.
std::string signing_input(const std::vector<Digest>& components, Timestamp timestamp);

UpstreamRef upstream_ref(const TrainingProcessSeal& seal);
UpstreamRef upstream_ref(const ModelArchitectureSeal& seal);

// -- seal construction -------------------------------------------------------------

DatasetSeal seal_dataset(std::istream& raw_data, const DataSource& source,
                         const DataPreparationPipeline& pipeline, std::istream& processed_data,
                         const PrivateKey& key, Timestamp now);

ModelArchitectureSeal seal_model_architecture(const ModelArchitecture& architecture,
                                              const ModelVersionControl& version_control,
                                              const PrivateKey& key, Timestamp now);

TrainingProcessSeal seal_training_process(const ModelArchitectureSeal& model_seal,
                                          const DatasetSeal& dataset_seal,
                                          const TrainingConfig& config,
                                          const std::vector<Checkpoint>& checkpoints,
                                          std::istream& final_weights,
                                          const TrainingMetrics& metrics, const PrivateKey& key,
                                          Timestamp now);

EvaluationSeal seal_evaluation(const UpstreamRef& model_seal, std::istream& test_data,
                               const EvaluationMetrics& metrics, const PrivateKey& key,
                               Timestamp now);

DeploymentSeal seal_deployment(const UpstreamRef& model_seal, const DeploymentConfig& config,
                               const Document& environment, const PrivateKey& key, Timestamp now);

MonitoringSeal seal_monitoring_period(const DeploymentSeal& deployment_seal,
                                      const MonitoringData& data,
                                      const std::optional<Document>& maintenance_actions,
                                      const PrivateKey& key, Timestamp now);

LifecycleCompletionSeal seal_lifecycle_completion(const UpstreamRef& model_seal,
                                                  TransitionType transition_type,
                                                  std::string_view justification,
                                                  const Document& performance_history,
                                                  const PrivateKey& key, Timestamp now);

// -- verification -----------------------------------------------------------------

/// Signature tier for any stage seal envelope: recompute the combined digest
/// from the stored component digests, check the key fingerprint and the
/// signature. Self-contained disclosed fields (lifecycle transition) are
/// re-hashed as well.
VerificationReport verify_envelope_signature(const Document& envelope, const PublicKey& key);

VerificationReport verify_dataset_seal(const DatasetSeal& seal, const PublicKey& key);
VerificationReport verify_dataset_seal(const DatasetSeal& seal, const PublicKey& key,
                                       std::istream& raw_data, std::istream& processed_data,
                                       const DataSource& source,
                                       const DataPreparationPipeline& pipeline);

VerificationReport verify_model_architecture_seal(const ModelArchitectureSeal& seal,
                                                  const PublicKey& key);
VerificationReport verify_model_architecture_seal(const ModelArchitectureSeal& seal,
                                                  const PublicKey& key,
                                                  const ModelArchitecture& architecture,
                                                  const ModelVersionControl& version_control);

VerificationReport verify_training_process_seal(const TrainingProcessSeal& seal,
                                                const PublicKey& key);
VerificationReport verify_training_process_seal(
    const TrainingProcessSeal& seal, const PublicKey& key, const Document& model_seal_envelope,
    const Document& dataset_seal_envelope, const TrainingConfig& config,
    const std::vector<Checkpoint>& checkpoints, std::istream& final_weights,
    const TrainingMetrics& metrics);

VerificationReport verify_evaluation_seal(const EvaluationSeal& seal, const PublicKey& key);
VerificationReport verify_evaluation_seal(const EvaluationSeal& seal, const PublicKey& key,
                                          const Document& upstream_envelope,
                                          std::istream& test_data,
                                          const EvaluationMetrics& metrics);

VerificationReport verify_deployment_seal(const DeploymentSeal& seal, const PublicKey& key,
                                          const Document* current_environment = nullptr);
VerificationReport verify_deployment_seal(const DeploymentSeal& seal, const PublicKey& key,
                                          const Document& upstream_envelope,
                                          const DeploymentConfig& config,
                                          const Document& environment,
                                          const Document* current_environment = nullptr);

VerificationReport verify_monitoring_seal(const MonitoringSeal& seal, const PublicKey& key);
VerificationReport verify_monitoring_seal(const MonitoringSeal& seal, const PublicKey& key,
                                          const Document& deployment_seal_envelope,
                                          const MonitoringData& data,
                                          const std::optional<Document>& maintenance_actions);

VerificationReport verify_lifecycle_completion_seal(const LifecycleCompletionSeal& seal,
                                                    const PublicKey& key);
VerificationReport verify_lifecycle_completion_seal(const LifecycleCompletionSeal& seal,
                                                    const PublicKey& key,
                                                    const Document& upstream_envelope,
                                                    const Document& performance_history);

// -- stage-specific queries ----------------------------------------------------------

/// Per-metric pass/fail: pass iff drift value <= threshold, exact decimal
/// comparison. The cleartext data must hash-match the seal.
std::map<std::string, bool> check_drift_threshold(const MonitoringSeal& seal,
                                                  const MonitoringData& original,
                                                  std::string_view threshold);

struct TransitionDetails {
    TransitionType type;
    std::string justification;
    Timestamp timestamp{0};
};

/// Disclosed transition fields, re-checked against transition_hash.
TransitionDetails get_transition_details(const LifecycleCompletionSeal& seal);

} // namespace metaseal
