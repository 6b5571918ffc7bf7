"""Tamper-evident cryptographic seals across the AI lifecycle."""

from ._core import (
    MetaSealError,
    Registry,
    canonical_encode,
    canonical_parse,
    check_drift_threshold,
    combine_digests,
    create_meta_seal,
    export_bundle,
    export_metadata,
    generate_key_pair,
    generate_seal_id,
    get_seal_history,
    get_transition_details,
    has_circular_dependencies,
    hash_bytes,
    hash_canonical,
    hash_file,
    key_fingerprint,
    seal_dataset,
    seal_deployment,
    seal_digest,
    seal_evaluation,
    seal_lifecycle_completion,
    seal_model_architecture,
    seal_monitoring_period,
    seal_training_process,
    sign,
    verify_bundle,
    verify_envelope_signature,
    verify_meta_seal,
    verify_signature,
)

__all__ = [
    "MetaSealError",
    "Registry",
    "canonical_encode",
    "canonical_parse",
    "check_drift_threshold",
    "combine_digests",
    "create_meta_seal",
    "export_bundle",
    "export_metadata",
    "generate_key_pair",
    "generate_seal_id",
    "get_seal_history",
    "get_transition_details",
    "has_circular_dependencies",
    "hash_bytes",
    "hash_canonical",
    "hash_file",
    "key_fingerprint",
    "seal_dataset",
    "seal_deployment",
    "seal_digest",
    "seal_evaluation",
    "seal_lifecycle_completion",
    "seal_model_architecture",
    "seal_monitoring_period",
    "seal_training_process",
    "sign",
    "verify_bundle",
    "verify_envelope_signature",
    "verify_meta_seal",
    "verify_signature",
]
