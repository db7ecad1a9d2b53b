"""JSON schemas for run configs and emitted reports."""
import jsonschema

_num = {"type": "number"}
_nonneg = {"type": "number", "minimum": 0}
_matrix = {"type": "array", "items": {"type": "array", "items": _num}}
_nodes = {"type": "array", "items": {"type": "integer", "minimum": 1}}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["type"],
    "properties": {
        "type": {"enum": ["dmc", "awgn_fd", "awgn_hd"]},
        "n": {"type": "integer", "minimum": 2},
        "gain_sq": _matrix,
        "gains": {"type": "array"},
        "powers": {"type": "array", "items": _num},
        "noise_power": _num,
        "input_alphabet_sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "receiver_channels": {"type": "array", "items": _matrix},
        "joint": {"type": "array"},
        "input_distributions": {"type": "array", "items": {"type": "array", "items": _num}},
        "table_guard": {"type": "integer", "minimum": 1},
        "schedule": {
            "type": "object",
            "properties": {
                "lengths": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "transmitters": {"type": "array", "items": _nodes},
                "input_distributions": {"type": "array"},
            },
        },
        "rates": {"type": "array", "items": _nonneg},
        "margin": _nonneg,
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "max_blocks": {"type": "integer", "minimum": 1},
        "horizon": {"type": "integer", "minimum": 4},
        "oracle": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "directions": {"oneOf": [{"type": "integer", "minimum": 1}, _matrix]},
        "phases": {"type": "integer", "minimum": 1},
        "candidates": {"type": "array", "items": _nodes},
        "resolution": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
    },
    "allOf": [
        {"if": {"properties": {"type": {"const": "dmc"}}},
         "then": {"required": ["input_alphabet_sizes"],
                  "oneOf": [{"required": ["receiver_channels"]}, {"required": ["joint"]}]}},
        {"if": {"properties": {"type": {"enum": ["awgn_fd", "awgn_hd"]}}},
         "then": {"required": ["n", "powers", "noise_power"],
                  "oneOf": [{"required": ["gain_sq"]}, {"required": ["gains"]}]}},
    ],
}

_common = {"kind": {"type": "string"}, "seed": {"type": "integer"}, "model_type": {"type": "string"}}


def _report(kind, required, props):
    return {
        "type": "object",
        "required": ["kind", "seed", *required],
        "properties": {**_common, "kind": {"const": kind}, **props},
    }


_subset_record = {
    "type": "object",
    "required": ["subset_mask", "nodes", "witness", "cut_rate_bits", "rate_sum_bits", "slack_bits"],
    "properties": {
        "subset_mask": {"type": "integer", "minimum": 1},
        "nodes": _nodes,
        "witness": {"type": ["integer", "null"]},
        "cut_rate_bits": _num,
        "rate_sum_bits": _num,
        "slack_bits": _num,
        "deficits": {"type": "object", "additionalProperties": _num},
    },
}

REPORT_SCHEMAS = {
    "validation_report": _report("validation_report", ["valid", "problems"], {
        "valid": {"type": "boolean"},
        "problems": {"type": "array", "items": {"type": "string"}},
    }),
    "feasibility_certificate": _report(
        "feasibility_certificate", ["n", "feasible", "margin", "rates", "subsets", "violated_masks"], {
            "n": {"type": "integer"},
            "feasible": {"type": "boolean"},
            "margin": _nonneg,
            "rates": {"type": "array", "items": _nonneg},
            "violated_masks": {"type": "array", "items": {"type": "integer"}},
            "subsets": {"type": "array", "items": _subset_record},
        }),
    "symmetric_rate": _report("symmetric_rate", ["n", "rate_bits", "tol", "margin"], {
        "rate_bits": _nonneg, "tol": _num, "margin": _nonneg, "n": {"type": "integer"},
    }),
    "boundary": _report("boundary", ["n", "rows", "tol"], {
        "n": {"type": "integer"},
        "tol": _num,
        "rows": {"type": "array", "items": {
            "type": "object", "required": ["direction", "scale", "rates"],
            "properties": {"direction": {"type": "array"}, "scale": _nonneg,
                           "rates": {"type": "array"}}}},
    }),
    "hd_schedule": _report("hd_schedule", ["n", "rate_bits", "lengths", "transmitters", "note"], {
        "rate_bits": _nonneg,
        "lengths": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "transmitters": {"type": "array", "items": _nodes},
        "note": {"type": "string"},
    }),
    "simulation_summary": _report(
        "simulation_summary", ["n", "oracle", "blocks", "coverage_bound", "completion_block", "bound_ok"], {
            "n": {"type": "integer"},
            "oracle": {"type": "string"},
            "blocks": {"type": "integer"},
            "coverage_bound": {"type": "integer"},
            "completion_block": {"type": ["integer", "null"]},
            "bound_ok": {"type": "boolean"},
            "delays": {"type": "object"},
        }),
}


def validate_config(cfg):
    """Raise ``jsonschema.ValidationError`` for a structurally bad config."""
    jsonschema.validate(cfg, CONFIG_SCHEMA)


def validate_report(report):
    kind = report.get("kind")
    if kind not in REPORT_SCHEMAS:
        raise jsonschema.ValidationError(f"unknown report kind {kind!r}")
    jsonschema.validate(report, REPORT_SCHEMAS[kind])


def error_path(err):
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return path.lstrip(".") or "<root>"
