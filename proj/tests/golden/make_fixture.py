#!/usr/bin/env python3
"""Regenerates the golden fixture chain and expected-value vectors.

Deliberately independent of the C++ sources: canonical bytes come from
json.dumps, digests from hashlib, signatures from the `cryptography`
package. The C++ suites must reproduce every derived value byte for byte
and accept every signature. Regenerate with:

    python3 tests/golden/make_fixture.py
"""

import hashlib
import json
import os

from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import padding, rsa

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE = os.path.join(HERE, "fixture")

T0 = 1760000000000000
ALGORITHM_ID = "RSA-PSS-SHA256-2048"
STAGES = [
    "data_collection",
    "model_development",
    "training",
    "evaluation",
    "deployment",
    "monitoring",
    "retirement",
]
KIND_FOR_STAGE = {
    "data_collection": "dataset",
    "model_development": "model_architecture",
    "training": "training_process",
    "evaluation": "evaluation",
    "deployment": "deployment",
    "monitoring": "monitoring",
    "retirement": "lifecycle_completion",
}


def canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


def h(data) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


def h_doc(obj) -> str:
    return h(canonical(obj))


def combine(parts) -> str:
    return h("".join(parts))


def load_or_create_key():
    priv_path = os.path.join(FIXTURE, "private.pem")
    if os.path.exists(priv_path):
        with open(priv_path, "rb") as f:
            return serialization.load_pem_private_key(f.read(), password=None)
    key = rsa.generate_private_key(public_exponent=65537, key_size=2048)
    with open(priv_path, "wb") as f:
        f.write(
            key.private_bytes(
                serialization.Encoding.PEM,
                serialization.PrivateFormat.PKCS8,
                serialization.NoEncryption(),
            )
        )
    with open(os.path.join(FIXTURE, "public.pem"), "wb") as f:
        f.write(
            key.public_key().public_bytes(
                serialization.Encoding.PEM,
                serialization.PublicFormat.SubjectPublicKeyInfo,
            )
        )
    return key


def main():
    os.makedirs(FIXTURE, exist_ok=True)
    key = load_or_create_key()
    public_pem = key.public_key().public_bytes(
        serialization.Encoding.PEM, serialization.PublicFormat.SubjectPublicKeyInfo
    ).decode()
    fingerprint = h(
        key.public_key().public_bytes(
            serialization.Encoding.DER, serialization.PublicFormat.SubjectPublicKeyInfo
        )
    )

    def sign(message: str) -> str:
        return key.sign(
            message.encode(),
            padding.PSS(mgf=padding.MGF1(hashes.SHA256()), salt_length=padding.PSS.MAX_LENGTH),
            hashes.SHA256(),
        ).hex()

    # ---- fixed input artifacts --------------------------------------------
    raw = b"golden raw bytes 0123456789\n"
    processed = b"golden processed bytes 9876543210\n"
    test_data = b"golden held-out rows\n"
    weights = b"golden final weights blob\n"
    for name, data in [
        ("raw.bin", raw),
        ("processed.bin", processed),
        ("test.bin", test_data),
        ("weights.bin", weights),
    ]:
        with open(os.path.join(FIXTURE, name), "wb") as f:
            f.write(data)

    source = {
        "metadata": {"bucket": "golden-events", "rows": 1200},
        "source_id": "golden-src-1",
        "source_type": "s3",
        "timestamp": str(T0 + 1),
        "validation_rules": {"schema": "v3"},
    }
    pipeline = [
        {
            "input_shape": [1200, 8],
            "operation_type": "deduplicate",
            "output_shape": [1180, 8],
            "parameters": {"key": "event_id"},
            "timestamp": str(T0 + 2),
        },
        {
            "input_shape": [1180, 8],
            "operation_type": "normalize",
            "output_shape": [1180, 8],
            "parameters": {"mode": "zscore"},
            "timestamp": str(T0 + 3),
        },
    ]
    architecture = {
        "architecture_type": "mlp",
        "custom_components": None,
        "framework": "torch",
        "hyperparameters": {"dropout": "0.1", "lr": "0.001"},
        "layers": [{"activation": "relu", "type": "dense", "units": 64}],
        "optimization_config": {"optimizer": "adam"},
    }
    versions = [
        {
            "architecture": architecture,
            "author": "alice",
            "changes": {"init": "true"},
            "timestamp": str(T0 + 4),
            "version": 1,
        }
    ]
    train_config = {
        "batch_size": 128,
        "callbacks": [{"patience": 2, "type": "early_stopping"}],
        "epochs": 2,
        "loss_function": "bce",
        "metrics": ["accuracy"],
        "optimizer_config": {"lr": "0.001", "name": "adam"},
        "validation_split": "0.2",
    }
    checkpoints = [
        {
            "epoch": 0,
            "metrics": {"loss": "0.61"},
            "timestamp": str(T0 + 5),
            "weights_hash": h("golden checkpoint 0"),
        },
        {
            "epoch": 1,
            "metrics": {"loss": "0.44"},
            "timestamp": str(T0 + 6),
            "weights_hash": h("golden checkpoint 1"),
        },
    ]
    train_metrics = {
        "epoch_metrics": [{"loss": "0.61"}, {"loss": "0.44"}],
        "resource_usage": {"gpu_hours": "0.2"},
        "training_duration": "98.5",
        "validation_metrics": [{"loss": "0.59"}, {"loss": "0.47"}],
    }
    eval_metrics = {
        "accuracy": "0.95",
        "additional": {"auc": "0.97"},
        "f1_score": "0.93",
        "precision": "0.94",
        "recall": "0.92",
    }
    deploy_config = {
        "monitoring": {"drift_check_interval_s": 3600},
        "runtime": {"image": "serving:2.4", "replicas": 3},
        "scaling": {"max_replicas": 10},
        "security": {"tls": True},
    }
    environment = {"accelerator": "cpu", "kernel": "6.1", "os": "linux", "python": "3.11"}
    monitoring = {
        "alerts": [],
        "drift": {"kl": "0.004", "psi": "0.02"},
        "performance": {"p50_latency_ms": "11", "p99_latency_ms": "38"},
        "resources": {"cpu": "0.4"},
    }
    transition = {"justification": "golden chain complete", "type": "retire"}
    history = {"monthly_accuracy": ["0.95", "0.94", "0.91"]}

    # ---- stage seals --------------------------------------------------------
    def envelope(kind, ts, fields, components):
        message = combine(components) + str(ts)
        env = dict(fields)
        env.update(
            {
                "schema_version": "1",
                "seal_kind": kind,
                "timestamp": str(ts),
                "algorithm_id": ALGORITHM_ID,
                "signature": sign(message),
                "key_fingerprint": fingerprint,
            }
        )
        return env

    digests = {}
    digests["raw_data_hash"] = h(raw)
    digests["processed_data_hash"] = h(processed)
    digests["source_hash"] = h_doc(source)
    digests["pipeline_hash"] = h_doc(pipeline)
    dataset_env = envelope(
        "dataset",
        T0 + 10,
        {
            "raw_data_hash": digests["raw_data_hash"],
            "processed_data_hash": digests["processed_data_hash"],
            "source_hash": digests["source_hash"],
            "pipeline_hash": digests["pipeline_hash"],
        },
        [
            digests["raw_data_hash"],
            digests["processed_data_hash"],
            digests["source_hash"],
            digests["pipeline_hash"],
        ],
    )

    digests["architecture_hash"] = h_doc(architecture)
    digests["version_hash"] = h_doc(versions)
    model_env = envelope(
        "model_architecture",
        T0 + 20,
        {
            "architecture_hash": digests["architecture_hash"],
            "version_hash": digests["version_hash"],
        },
        [digests["architecture_hash"], digests["version_hash"]],
    )

    digests["config_hash"] = h_doc(train_config)
    digests["checkpoints_hash"] = h_doc(checkpoints)
    digests["weights_hash"] = h(weights)
    digests["metrics_hash"] = h_doc(train_metrics)
    digests["model_seal_digest"] = h(canonical(model_env))
    digests["dataset_seal_digest"] = h(canonical(dataset_env))
    training_env = envelope(
        "training_process",
        T0 + 30,
        {
            "config_hash": digests["config_hash"],
            "checkpoints_hash": digests["checkpoints_hash"],
            "weights_hash": digests["weights_hash"],
            "metrics_hash": digests["metrics_hash"],
            "model_seal_digest": digests["model_seal_digest"],
            "dataset_seal_digest": digests["dataset_seal_digest"],
        },
        [
            digests["config_hash"],
            digests["checkpoints_hash"],
            digests["weights_hash"],
            digests["metrics_hash"],
            digests["model_seal_digest"],
            digests["dataset_seal_digest"],
        ],
    )

    digests["test_data_hash"] = h(test_data)
    digests["eval_metrics_hash"] = h_doc(eval_metrics)
    digests["training_seal_digest"] = h(canonical(training_env))
    evaluation_env = envelope(
        "evaluation",
        T0 + 40,
        {
            "test_data_hash": digests["test_data_hash"],
            "metrics_hash": digests["eval_metrics_hash"],
            "model_seal_digest": digests["training_seal_digest"],
            "upstream_kind": "training_process",
        },
        [
            digests["test_data_hash"],
            digests["eval_metrics_hash"],
            digests["training_seal_digest"],
        ],
    )

    digests["deploy_config_hash"] = h_doc(deploy_config)
    digests["environment_hash"] = h_doc(environment)
    deployment_env = envelope(
        "deployment",
        T0 + 50,
        {
            "config_hash": digests["deploy_config_hash"],
            "environment_hash": digests["environment_hash"],
            "model_seal_digest": digests["training_seal_digest"],
            "upstream_kind": "training_process",
        },
        [
            digests["deploy_config_hash"],
            digests["environment_hash"],
            digests["training_seal_digest"],
        ],
    )

    digests["monitoring_hash"] = h_doc(monitoring)
    digests["maintenance_hash"] = h("{}")
    digests["deployment_seal_digest"] = h(canonical(deployment_env))
    monitoring_env = envelope(
        "monitoring",
        T0 + 60,
        {
            "monitoring_hash": digests["monitoring_hash"],
            "maintenance_hash": digests["maintenance_hash"],
            "deployment_seal_digest": digests["deployment_seal_digest"],
        },
        [
            digests["monitoring_hash"],
            digests["maintenance_hash"],
            digests["deployment_seal_digest"],
        ],
    )

    digests["transition_hash"] = h_doc(transition)
    digests["history_hash"] = h_doc(history)
    completion_env = envelope(
        "lifecycle_completion",
        T0 + 70,
        {
            "transition_type": transition["type"],
            "justification": transition["justification"],
            "transition_hash": digests["transition_hash"],
            "history_hash": digests["history_hash"],
            "model_seal_digest": digests["training_seal_digest"],
            "upstream_kind": "training_process",
        },
        [
            digests["transition_hash"],
            digests["history_hash"],
            digests["training_seal_digest"],
        ],
    )

    # ---- registration -------------------------------------------------------
    envs = {
        "data_collection": (dataset_env, T0 + 10),
        "model_development": (model_env, T0 + 20),
        "training": (training_env, T0 + 30),
        "evaluation": (evaluation_env, T0 + 40),
        "deployment": (deployment_env, T0 + 50),
        "monitoring": (monitoring_env, T0 + 60),
        "retirement": (completion_env, T0 + 70),
    }
    ids = {}
    records = {}
    deps_for = {}
    for index, stage in enumerate(STAGES):
        env, ts = envs[stage]
        seal_id = h(f"{stage}_{ts}_{index}")[:16]
        ids[stage] = seal_id
    deps_for = {
        "data_collection": [],
        "model_development": [],
        "training": [ids["model_development"], ids["data_collection"]],
        "evaluation": [ids["training"]],
        "deployment": [ids["evaluation"]],
        "monitoring": [ids["deployment"]],
        "retirement": [ids["monitoring"]],
    }
    for stage in STAGES:
        env, ts = envs[stage]
        metadata = {
            "additional_info": {},
            "created_at": str(ts),
            "created_by": "golden",
            "dependencies": deps_for[stage],
            "stage": stage,
            "version": "1.0.0",
        }
        records[ids[stage]] = {"metadata": metadata, "seal": env}

    # ---- meta-seal -----------------------------------------------------------
    sorted_ids = sorted(ids.values())
    seal_data = [
        {
            "id": seal_id,
            "metadata_hash": h_doc(records[seal_id]["metadata"]),
            "seal_hash": h_doc(records[seal_id]["seal"]),
        }
        for seal_id in sorted_ids
    ]
    seals_hash = h_doc(seal_data)

    summaries = [
        {
            "created_at": records[seal_id]["metadata"]["created_at"],
            "created_by": "golden",
            "seal_id": seal_id,
            "stage": records[seal_id]["metadata"]["stage"],
        }
        for seal_id in sorted_ids
    ]
    summaries.sort(key=lambda s: (int(s["created_at"]), s["seal_id"]))

    meta_ts = T0 + 100
    metadata = {
        "created_at": str(meta_ts),
        "creator": "golden",
        "dependency_graph": {seal_id: records[seal_id]["metadata"]["dependencies"]
                             for seal_id in sorted_ids},
        "per_seal_summaries": summaries,
        "required_stages": STAGES,  # recorded in lifecycle order
        "seal_count": 7,
        "version": "1.0.0",
    }
    meta_message = seals_hash + h_doc(metadata) + str(meta_ts)
    meta_env = {
        "schema_version": "1",
        "seals_hash": seals_hash,
        "metadata": metadata,
        "timestamp": str(meta_ts),
        "algorithm_id": ALGORITHM_ID,
        "signature": sign(meta_message),
        "key_fingerprint": fingerprint,
        "seal_ids": sorted_ids,
    }

    bundle = {
        "format": "metaseal-bundle/1",
        "meta": meta_env,
        "public_key": public_pem,
        "seals": [
            {"id": seal_id, "seal_data": records[seal_id], "seal_type":
             records[seal_id]["metadata"]["stage"]}
            for seal_id in sorted_ids
        ],
    }

    with open(os.path.join(FIXTURE, "meta.json"), "wb") as f:
        f.write(canonical(meta_env))
    with open(os.path.join(FIXTURE, "chain.msbundle.json"), "wb") as f:
        f.write(canonical(bundle))
    inputs = {
        "architecture": architecture,
        "checkpoints": checkpoints,
        "deploy_config": deploy_config,
        "environment": environment,
        "eval_metrics": eval_metrics,
        "history": history,
        "monitoring": monitoring,
        "pipeline": pipeline,
        "source": source,
        "train_config": train_config,
        "train_metrics": train_metrics,
        "transition": transition,
        "versions": versions,
    }
    with open(os.path.join(FIXTURE, "inputs.json"), "wb") as f:
        f.write(canonical(inputs))

    vectors = {
        "sha256_empty": h(""),
        "sha256_abc": h("abc"),
        "sha256_empty_list": h("[]"),
        "sha256_empty_map": h("{}"),
        "combine_empty_empty": h(h("") + h("")),
        "combine_empty_abc": h(h("") + h("abc")),
        "combine_abc_empty": h(h("abc") + h("")),
        "seal_id_example": h("data_collection_1700000000000000_0")[:16],
        "canonical_examples": [
            {"bytes": '{"a":2,"b":1}', "doc": {"b": 1, "a": 2}},
            {"bytes": '{"x":[1,"y"]}', "doc": {"x": [1, "y"]}},
            {"bytes": "{}", "doc": {}},
            {"bytes": "[]", "doc": []},
        ],
        "chain": {
            "t0": str(T0),
            "key_fingerprint": fingerprint,
            "component_digests": digests,
            "seal_ids": ids,
            "seals_hash": seals_hash,
            "meta_timestamp": str(meta_ts),
        },
    }
    with open(os.path.join(HERE, "vectors.json"), "wb") as f:
        f.write(canonical(vectors))
    print("fixture written under", FIXTURE)


if __name__ == "__main__":
    main()
