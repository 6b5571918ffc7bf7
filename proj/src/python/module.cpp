#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metaseal/audit.hpp"
#include "metaseal/bench.hpp"
#include "metaseal/meta_seal.hpp"
#include "metaseal/registry.hpp"
#include "metaseal/seals.hpp"

namespace py = pybind11;
namespace ms = metaseal;

namespace {

ms::Document to_document(const py::handle& obj)
{
    if (obj.is_none())
        return ms::Document(nullptr);
    if (py::isinstance<py::bool_>(obj))
        return ms::Document(obj.cast<bool>());
    if (py::isinstance<py::int_>(obj))
        return ms::Document(obj.cast<std::int64_t>());
    if (py::isinstance<py::float_>(obj))
        throw ms::Error(ms::Errc::canonical,
                        "floats are not canonical; carry fractions as decimal strings");
    if (py::isinstance<py::str>(obj))
        return ms::Document(obj.cast<std::string>());
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        ms::Document arr = ms::Document::array();
        for (const py::handle& item : obj)
            arr.push_back(to_document(item));
        return arr;
    }
    if (py::isinstance<py::dict>(obj)) {
        ms::Document map = ms::Document::object();
        for (const auto& item : obj.cast<py::dict>()) {
            if (!py::isinstance<py::str>(item.first))
                throw ms::Error(ms::Errc::canonical, "map keys must be strings");
            map[item.first.cast<std::string>()] = to_document(item.second);
        }
        return map;
    }
    throw ms::Error(ms::Errc::canonical, "unsupported python value in document");
}

py::object from_document(const ms::Document& doc)
{
    switch (doc.type()) {
    case nlohmann::json::value_t::null:
        return py::none();
    case nlohmann::json::value_t::boolean:
        return py::bool_(doc.get<bool>());
    case nlohmann::json::value_t::number_integer:
        return py::int_(doc.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
        return py::int_(doc.get<std::uint64_t>());
    case nlohmann::json::value_t::string:
        return py::str(doc.get<std::string>());
    case nlohmann::json::value_t::array: {
        py::list list;
        for (const ms::Document& item : doc)
            list.append(from_document(item));
        return list;
    }
    case nlohmann::json::value_t::object: {
        py::dict dict;
        for (auto it = doc.begin(); it != doc.end(); ++it)
            dict[py::str(it.key())] = from_document(it.value());
        return dict;
    }
    default:
        throw ms::Error(ms::Errc::canonical, "unsupported document value");
    }
}

ms::PrivateKey private_key(const std::string& pem)
{
    return ms::PrivateKey::from_pem(pem);
}

ms::PublicKey public_key(const std::string& pem)
{
    return ms::PublicKey::from_pem(pem);
}

std::istringstream stream_of(const py::bytes& data)
{
    return std::istringstream(data.cast<std::string>());
}

ms::SealMetadata metadata_from(const py::dict& obj)
{
    ms::Document doc = to_document(obj);
    ms::SealMetadata md;
    md.stage = ms::stage_from_wire(doc.at("stage").get<std::string>());
    md.created_at = ms::Timestamp(doc.at("created_at").get<std::uint64_t>());
    md.created_by = doc.value("created_by", std::string("unknown"));
    md.version = doc.value("version", std::string("1.0.0"));
    if (doc.contains("dependencies"))
        for (const ms::Document& dep : doc.at("dependencies"))
            md.dependencies.push_back(dep.get<std::string>());
    if (doc.contains("additional_info"))
        md.additional_info = doc.at("additional_info");
    return md;
}

ms::UpstreamRef upstream_of(const py::dict& envelope)
{
    ms::Document env = to_document(envelope);
    return ms::UpstreamRef{ms::seal_digest(env), ms::envelope_kind(env)};
}

py::dict report_dict(const ms::VerificationReport& report)
{
    return from_document(report.to_document()).cast<py::dict>();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Tamper-evident seals across the AI lifecycle";

    py::register_exception<ms::Error>(m, "MetaSealError");

    // canonical serialization + hashing
    m.def("canonical_encode",
          [](const py::object& doc) { return py::bytes(ms::canonical_encode(to_document(doc))); });
    m.def("canonical_parse", [](const py::bytes& data) {
        return from_document(ms::canonical_parse(data.cast<std::string>()));
    });
    m.def("hash_bytes",
          [](const py::bytes& data) { return ms::hash_bytes(data.cast<std::string>()).hex(); });
    m.def("hash_file",
          [](const std::string& path) { return ms::hash_file(path).hex(); });
    m.def("hash_canonical",
          [](const py::object& doc) { return ms::hash_canonical(to_document(doc)).hex(); });
    m.def("combine_digests", [](const std::vector<std::string>& parts) {
        std::vector<ms::Digest> digests;
        for (const std::string& hex : parts)
            digests.push_back(ms::Digest::from_hex(hex));
        return ms::combine_digests(digests).hex();
    });

    // keys and signatures
    m.def("generate_key_pair", [] {
        ms::KeyPair keys = ms::generate_key_pair();
        return py::make_tuple(keys.private_key.to_pem(), keys.public_key.to_pem());
    });
    m.def("sign", [](const py::bytes& message, const std::string& private_pem) {
        ms::Signature sig = ms::sign(message.cast<std::string>(), private_key(private_pem));
        return py::bytes(std::string(sig.bytes.begin(), sig.bytes.end()));
    });
    m.def("verify_signature",
          [](const py::bytes& message, const py::bytes& signature, const std::string& public_pem) {
              std::string raw = signature.cast<std::string>();
              ms::Signature sig{std::vector<std::uint8_t>(raw.begin(), raw.end()),
                                std::string(ms::kAlgorithmId)};
              return ms::verify_signature(message.cast<std::string>(), sig,
                                          public_key(public_pem));
          });
    m.def("key_fingerprint",
          [](const std::string& public_pem) { return public_key(public_pem).fingerprint().hex(); });

    // stage seals (envelopes travel as dicts)
    m.def("seal_dataset", [](const py::bytes& raw, const py::dict& source,
                             const py::list& pipeline, const py::bytes& processed,
                             const std::string& private_pem, std::uint64_t now) {
        std::istringstream raw_stream = stream_of(raw);
        std::istringstream processed_stream = stream_of(processed);
        ms::DataSource src = ms::DataSource::from_record(to_document(source));
        ms::DataPreparationPipeline pp = ms::DataPreparationPipeline::from_record(to_document(pipeline));
        ms::DatasetSeal seal = ms::seal_dataset(raw_stream, src, pp, processed_stream,
                                                private_key(private_pem), ms::Timestamp(now));
        return from_document(seal.envelope());
    });
    m.def("seal_model_architecture",
          [](const py::dict& architecture, const py::list& versions,
             const std::string& private_pem, std::uint64_t now) {
              ms::ModelArchitecture arch = ms::ModelArchitecture::from_record(to_document(architecture));
              ms::ModelVersionControl vc = ms::ModelVersionControl::from_record(to_document(versions));
              ms::ModelArchitectureSeal seal =
                  ms::seal_model_architecture(arch, vc, private_key(private_pem),
                                              ms::Timestamp(now));
              return from_document(seal.envelope());
          });
    m.def("seal_training_process",
          [](const py::dict& model_envelope, const py::dict& dataset_envelope,
             const py::dict& config, const py::list& checkpoints, const py::bytes& weights,
             const py::dict& metrics, const std::string& private_pem, std::uint64_t now) {
              ms::ModelArchitectureSeal model =
                  ms::ModelArchitectureSeal::from_envelope(to_document(model_envelope));
              ms::DatasetSeal dataset =
                  ms::DatasetSeal::from_envelope(to_document(dataset_envelope));
              ms::TrainingConfig cfg = ms::TrainingConfig::from_record(to_document(config));
              std::vector<ms::Checkpoint> cps;
              for (const py::handle& entry : checkpoints)
                  cps.push_back(ms::Checkpoint::from_record(to_document(entry)));
              ms::TrainingMetrics tm = ms::TrainingMetrics::from_record(to_document(metrics));
              std::istringstream weights_stream = stream_of(weights);
              ms::TrainingProcessSeal seal =
                  ms::seal_training_process(model, dataset, cfg, cps, weights_stream, tm,
                                            private_key(private_pem), ms::Timestamp(now));
              return from_document(seal.envelope());
          });
    m.def("seal_evaluation",
          [](const py::dict& upstream, const py::bytes& test_data, const py::dict& metrics,
             const std::string& private_pem, std::uint64_t now) {
              std::istringstream test_stream = stream_of(test_data);
              ms::EvaluationMetrics em = ms::EvaluationMetrics::from_record(to_document(metrics));
              ms::EvaluationSeal seal =
                  ms::seal_evaluation(upstream_of(upstream), test_stream, em,
                                      private_key(private_pem), ms::Timestamp(now));
              return from_document(seal.envelope());
          });
    m.def("seal_deployment",
          [](const py::dict& upstream, const py::dict& config, const py::dict& environment,
             const std::string& private_pem, std::uint64_t now) {
              ms::DeploymentConfig cfg = ms::DeploymentConfig::from_record(to_document(config));
              ms::DeploymentSeal seal =
                  ms::seal_deployment(upstream_of(upstream), cfg, to_document(environment),
                                      private_key(private_pem), ms::Timestamp(now));
              return from_document(seal.envelope());
          });
    m.def("seal_monitoring_period",
          [](const py::dict& deployment_envelope, const py::dict& data,
             const py::object& maintenance, const std::string& private_pem, std::uint64_t now) {
              ms::DeploymentSeal deployment =
                  ms::DeploymentSeal::from_envelope(to_document(deployment_envelope));
              ms::MonitoringData md = ms::MonitoringData::from_record(to_document(data));
              std::optional<ms::Document> actions;
              if (!maintenance.is_none())
                  actions = to_document(maintenance);
              ms::MonitoringSeal seal =
                  ms::seal_monitoring_period(deployment, md, actions, private_key(private_pem),
                                             ms::Timestamp(now));
              return from_document(seal.envelope());
          });
    m.def("seal_lifecycle_completion",
          [](const py::dict& upstream, const std::string& transition,
             const std::string& justification, const py::object& history,
             const std::string& private_pem, std::uint64_t now) {
              ms::LifecycleCompletionSeal seal = ms::seal_lifecycle_completion(
                  upstream_of(upstream), ms::transition_from_wire(transition), justification,
                  to_document(history), private_key(private_pem), ms::Timestamp(now));
              return from_document(seal.envelope());
          });

    m.def("seal_digest",
          [](const py::dict& envelope) { return ms::seal_digest(to_document(envelope)).hex(); });
    m.def("verify_envelope_signature",
          [](const py::dict& envelope, const std::string& public_pem) {
              return report_dict(
                  ms::verify_envelope_signature(to_document(envelope), public_key(public_pem)));
          });
    m.def("check_drift_threshold",
          [](const py::dict& monitor_envelope, const py::dict& data,
             const std::string& threshold) {
              ms::MonitoringSeal seal =
                  ms::MonitoringSeal::from_envelope(to_document(monitor_envelope));
              ms::MonitoringData md = ms::MonitoringData::from_record(to_document(data));
              return ms::check_drift_threshold(seal, md, threshold);
          });
    m.def("get_transition_details", [](const py::dict& envelope) {
        ms::LifecycleCompletionSeal seal =
            ms::LifecycleCompletionSeal::from_envelope(to_document(envelope));
        ms::TransitionDetails details = ms::get_transition_details(seal);
        py::dict out;
        out["type"] = std::string(ms::to_wire(details.type));
        out["justification"] = details.justification;
        out["timestamp"] = details.timestamp.micros();
        return out;
    });

    m.def("generate_seal_id", [](const std::string& stage, std::uint64_t micros,
                                 std::size_t registry_size) {
        return ms::generate_seal_id(ms::stage_from_wire(stage), ms::Timestamp(micros),
                                    registry_size);
    });
    m.def("has_circular_dependencies", [](const py::dict& graph) {
        ms::DependencyGraph g;
        for (const auto& item : graph) {
            std::vector<std::string> deps;
            for (const py::handle& dep : item.second)
                deps.push_back(dep.cast<std::string>());
            g.emplace(item.first.cast<std::string>(), std::move(deps));
        }
        return ms::has_circular_dependencies(g);
    });

    // registry + meta-seal
    py::class_<ms::Registry>(m, "Registry")
        .def_static("open", [](const std::string& path) { return ms::Registry::open(path); })
        .def("store_seal",
             [](ms::Registry& self, const std::string& id, const std::string& seal_type,
                const py::bytes& seal_data, bool force) {
                 self.store_seal(id, seal_type, seal_data.cast<std::string>(), force);
             },
             py::arg("id"), py::arg("seal_type"), py::arg("seal_data"), py::arg("force") = false)
        .def("retrieve_seal",
             [](const ms::Registry& self, const std::string& id) -> py::object {
                 auto row = self.retrieve_seal(id);
                 if (!row)
                     return py::none();
                 return py::make_tuple(row->first, py::bytes(row->second));
             })
        .def("list_seals", [](const ms::Registry& self) { return self.list_seals(); })
        .def("record_ids", [](const ms::Registry& self) { return self.record_ids(); })
        .def("register_seal",
             [](ms::Registry& self, const std::string& stage, const py::dict& envelope,
                const py::dict& metadata) {
                 py::dict md(metadata);
                 md["stage"] = stage;
                 return ms::register_seal(self, ms::stage_from_wire(stage), to_document(envelope),
                                          metadata_from(md));
             });

    m.def("create_meta_seal",
          [](ms::Registry& registry, const std::string& creator, const std::string& private_pem,
             std::uint64_t now, const py::object& required_stages, const py::object& extra) {
              ms::MetaSealOptions options;
              options.creator = creator;
              if (!required_stages.is_none()) {
                  options.required_stages.clear();
                  for (const py::handle& stage : required_stages)
                      options.required_stages.insert(
                          ms::stage_from_wire(stage.cast<std::string>()));
              }
              if (!extra.is_none())
                  options.extra_metadata = to_document(extra);
              std::vector<std::string> ids = registry.record_ids();
              ms::MetaSeal meta =
                  ms::create_meta_seal(registry, {ids.begin(), ids.end()}, options,
                                       private_key(private_pem), ms::Timestamp(now));
              return from_document(meta.envelope());
          },
          py::arg("registry"), py::arg("creator"), py::arg("private_pem"), py::arg("now"),
          py::arg("required_stages") = py::none(), py::arg("extra") = py::none());

    m.def("verify_meta_seal",
          [](const py::dict& meta_envelope, ms::Registry& registry,
             const std::string& public_pem) {
              ms::MetaSeal meta = ms::MetaSeal::from_envelope(to_document(meta_envelope));
              return report_dict(ms::verify_meta_seal(meta, registry, public_key(public_pem)));
          });
    m.def("get_seal_history", [](const py::dict& meta_envelope, ms::Registry& registry) {
        ms::MetaSeal meta = ms::MetaSeal::from_envelope(to_document(meta_envelope));
        py::list out;
        for (const ms::HistoryEntry& entry : ms::get_seal_history(meta, registry)) {
            py::dict item;
            item["seal_id"] = entry.seal_id;
            item["stage"] = std::string(ms::to_wire(entry.stage));
            item["created_at"] = entry.created_at.micros();
            item["created_by"] = entry.created_by;
            out.append(std::move(item));
        }
        return out;
    });
    m.def("export_metadata", [](const py::dict& meta_envelope) {
        ms::MetaSeal meta = ms::MetaSeal::from_envelope(to_document(meta_envelope));
        return from_document(ms::export_metadata(meta));
    });

    m.def("export_bundle",
          [](const ms::Registry& registry, const py::dict& meta_envelope,
             const std::string& public_pem, const std::string& out_path) {
              ms::MetaSeal meta = ms::MetaSeal::from_envelope(to_document(meta_envelope));
              ms::export_bundle(registry, meta, public_key(public_pem), out_path);
          });
    m.def("verify_bundle", [](const std::string& path) {
        ms::ImportedBundle bundle = ms::import_bundle(path);
        ms::PublicKey key = ms::PublicKey::from_pem(bundle.public_key_pem);
        return report_dict(ms::verify_meta_seal(bundle.meta, bundle.records, key));
    });
}
