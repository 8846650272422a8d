"""JSON encoding of results.

Complex numbers are written as ``[re, im]`` and matrices as row-major nested
lists. Floats go through ``repr``, the shortest string that parses back to
the same double, so decoding reproduces every value bit for bit.
"""

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .nahm import NahmData


def encode_complex(a):
    a = np.asarray(a)
    if a.ndim == 0:
        v = complex(a)
        return [float(v.real), float(v.imag)]
    return [encode_complex(x) for x in a]


def decode_complex(obj):
    arr = np.asarray(obj, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def _plain(obj):
    """Turn numpy scalars and arrays into JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return encode_complex(obj)
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def nahm_to_json(T):
    return {"s": float(T.s), "T0": encode_complex(T.T0), "T1": encode_complex(T.T1),
            "T2": encode_complex(T.T2), "T3": encode_complex(T.T3)}


def nahm_from_json(d):
    return NahmData(float(d["s"]), *(decode_complex(d[k]) for k in ("T0", "T1", "T2", "T3")))


@dataclass(frozen=True)
class ResultRecord:
    s: float
    nahm: NahmData
    report: dict
    solver: str
    precision: str = "double"
    wall_time: float = None

    def to_json(self):
        out = {"s": float(self.s), "solver": self.solver, "precision": self.precision,
               "nahm": nahm_to_json(self.nahm), "report": _plain(self.report)}
        if self.wall_time is not None:
            out["wall_time"] = float(self.wall_time)
        return out

    @classmethod
    def from_json(cls, d):
        return cls(float(d["s"]), nahm_from_json(d["nahm"]), d["report"], d["solver"],
                   d.get("precision", "double"), d.get("wall_time"))

    def __eq__(self, other):
        if not isinstance(other, ResultRecord):
            return NotImplemented
        return (self.s == other.s and self.solver == other.solver
                and self.precision == other.precision and self.wall_time == other.wall_time
                and all(np.array_equal(a, b) for a, b in
                        zip(self.nahm.matrices(), other.nahm.matrices()))
                and _plain(self.report) == _plain(other.report))


def dumps(obj):
    return json.dumps(_plain(obj), indent=1, sort_keys=True, allow_nan=True)


def loads(text):
    return json.loads(text)


def records_to_csv(records):
    """One row per record with the scalar report fields; list fields take their max."""
    rows = []
    for rec in records:
        row = {"s": repr(float(rec.s)), "solver": rec.solver, "precision": rec.precision}
        for k, v in sorted(_plain(rec.report).items()):
            if isinstance(v, dict):
                continue
            if isinstance(v, list):
                flat = np.ravel(np.asarray(v, dtype=float))
                v = float(np.max(flat)) if flat.size else 0.0
            row[k] = repr(v) if isinstance(v, float) else v
        rows.append(row)
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()
