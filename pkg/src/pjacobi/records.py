"""JSON run records written by ``pjacobi solve``."""

from dataclasses import asdict, dataclass, field
import json

import jsonschema

RUN_RECORD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "RunRecord",
    "type": "object",
    "required": ["variant", "n", "p", "sweeps", "stages", "rotations", "time_ms",
                 "metrics", "eigenvalues_path"],
    "properties": {
        "variant": {"enum": ["TB", "TBC", "TF", "TFC", "HB", "HBC", "HBSC", "HF", "HFC", "HFSC"]},
        "n": {"type": "integer", "minimum": 2},
        "p": {"type": "integer", "minimum": 1},
        "sweeps": {"type": "integer", "minimum": 1},
        "stages": {"type": "integer", "minimum": 0},
        "rotations": {"type": "integer", "minimum": 0},
        "time_ms": {"type": "number", "minimum": 0},
        "metrics": {
            "type": "object",
            "required": ["orth_fro", "orth_fro_rev", "residual_rel", "theorem1_bound",
                         "theorem1_pass"],
            "properties": {
                "orth_fro": {"type": "number", "minimum": 0},
                "orth_fro_rev": {"type": "number", "minimum": 0},
                "residual_rel": {"type": "number", "minimum": 0},
                "theorem1_bound": {"type": "number", "minimum": 0},
                "theorem1_pass": {"type": "boolean"},
            },
        },
        "eigenvalues_path": {"type": "string"},
        "eigenvectors_path": {"type": ["string", "null"]},
    },
}


@dataclass
class RunRecord:
    variant: str
    n: int
    p: int
    sweeps: int
    stages: int
    rotations: int
    time_ms: float
    metrics: dict
    eigenvalues_path: str
    eigenvectors_path: str | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return d

    def to_json(self):
        d = self.to_dict()
        validate(d)
        return json.dumps(d, indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        validate(d)
        known = {f for f in cls.__dataclass_fields__ if f != "extra"}
        base = {k: v for k, v in d.items() if k in known}
        extra = {k: v for k, v in d.items() if k not in known}
        return cls(**base, extra=extra)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def validate(d):
    jsonschema.validate(d, RUN_RECORD_SCHEMA)
