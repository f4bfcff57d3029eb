"""JSON schema describing run manifests written next to sweep CSVs."""

_PROBABILITY_LIST = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "number", "minimum": 0, "maximum": 1},
}
_SIGMA_LIST = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "number", "exclusiveMinimum": 0},
}
_POLICIES = ["unrestricted", "nonneg", "normalized"]
_MODES = ["exact", "simulated"]
_FALLBACKS = ["majority", "coinflip"]

MANIFEST_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": True,
    "required": [
        "tool_version",
        "command",
        "config",
        "master_seed",
        "timestamp",
        "evaluation_mode",
        "policy",
        "zero_weight_fallback",
        "csv_path",
        "csv_sha256",
        "rows",
    ],
    "properties": {
        "tool_version": {"type": "string", "minLength": 1},
        "command": {"type": "string", "enum": ["sweep", "baseline"]},
        "master_seed": {"type": "integer", "minimum": 0, "maximum": 18446744073709551615},
        "timestamp": {"type": "string", "format": "date-time"},
        "evaluation_mode": {"type": "string", "enum": _MODES},
        "policy": {"type": "string", "enum": _POLICIES},
        "zero_weight_fallback": {"type": "string", "enum": _FALLBACKS},
        "csv_path": {"type": "string", "minLength": 1},
        "csv_sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "rows": {"type": "integer", "minimum": 0},
        "threads": {"type": ["integer", "null"], "minimum": 1},
        "config": {
            "type": "object",
            "required": ["trials", "master_seed", "judge_axis", "policy"],
            "properties": {
                "expert_count": {"type": "integer", "minimum": 1, "maximum": 25},
                "expert_mu_grid": {"type": "array", "minItems": 1, "items": {"type": "number"}},
                "expert_sigma_set": _SIGMA_LIST,
                "expert_lo": {"type": "number", "minimum": 0, "maximum": 1},
                "expert_hi": {"type": "number", "minimum": 0, "maximum": 1},
                "judge_axis": {"type": "string", "enum": ["fixed", "sampled"]},
                "judge_count": {"type": "integer", "minimum": 1},
                "judge_competence_grid": _PROBABILITY_LIST,
                "judge_mu_grid": {"type": "array", "minItems": 1, "items": {"type": "number"}},
                "judge_sigma_set": _SIGMA_LIST,
                "judge_lo": {"type": "number", "minimum": 0, "maximum": 1},
                "judge_hi": {"type": "number", "minimum": 0, "maximum": 1},
                "policy": {"type": "string", "enum": _POLICIES},
                "trials": {"type": "integer", "minimum": 1},
                "master_seed": {"type": "integer", "minimum": 0},
                "evaluation_mode": {"type": "string", "enum": _MODES},
                "zero_weight_fallback": {"type": "string", "enum": _FALLBACKS},
                "block_size": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
    },
}
