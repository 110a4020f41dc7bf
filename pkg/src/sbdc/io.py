"""JSON documents: matrix sets in, decomposition reports out.

Both formats are versioned ``"1"``. Complex entries are ``[re, im]`` pairs;
real entries may be bare numbers. Floats are written with Python's
shortest round-trip repr, so loading a saved document is lossless.
"""
from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import jsonschema
import numpy as np

from .core import (Field, InputError, MatrixSet, Mode, SolverConfig,
                   SymmetryKind, validate_matrix_set)
from .driver import Decomposition, DecompositionNode
from .idempotents import Evidence, IdempotentPair
from .transform import TransformStep

SCHEMA_VERSION = "1"

_ENTRY = {"oneOf": [
    {"type": "number"},
    {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _ENTRY}}

MATRIX_SET_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "MatrixSetDocument",
    "type": "object",
    "required": ["schema_version", "field", "kind", "matrices"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "field": {"enum": ["real", "complex"]},
        "kind": {"enum": ["symmetric", "hermitian"]},
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 0},
        "matrices": {"type": "array", "items": _MATRIX},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "DecompositionReport",
    "type": "object",
    "required": ["schema_version", "mode", "field", "kind", "seed", "tolerances",
                 "block_sizes", "block_sizes_sorted", "P", "blocks", "residuals",
                 "certified_finest", "tree"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "mode": {"enum": [m.value for m in Mode]},
        "field": {"enum": ["real", "complex"]},
        "kind": {"enum": ["symmetric", "hermitian"]},
        "seed": {"type": "integer"},
        "tolerances": {"type": "object"},
        "block_sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "block_sizes_sorted": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "P": _MATRIX,
        "blocks": {"type": "array", "items": {"type": "array", "items": _MATRIX}},
        "residuals": {"type": "object", "additionalProperties": {"type": "number"}},
        "certified_finest": {"type": "boolean"},
        "leaves": {"type": "array"},
        "tree": {"type": "object"},
        "wall_time": {"type": "number"},
    },
}


class SchemaError(InputError):
    def __init__(self, message, reason=None):
        self.reason = reason
        super().__init__(message)


class IoError(InputError):
    pass


def encode_matrix(A: np.ndarray, real: bool) -> list:
    A = np.asarray(A)
    if real:
        return [[float(x) for x in row] for row in np.real(A)]
    return [[[float(x.real), float(x.imag)] for x in row] for row in A.astype(complex)]


def decode_matrix(rows) -> np.ndarray:
    n = len(rows)
    A = np.zeros((n, len(rows[0]) if n else 0), dtype=np.complex128)
    for i, row in enumerate(rows):
        if len(row) != A.shape[1]:
            raise SchemaError(f"ragged matrix: row {i} has {len(row)} entries")
        for k, x in enumerate(row):
            A[i, k] = complex(x[0], x[1]) if isinstance(x, list) else x
    return A


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _write_json(doc, path):
    try:
        Path(path).write_text(dumps(doc))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def matrix_set_to_doc(mset: MatrixSet) -> dict:
    real = mset.is_real
    return {
        "schema_version": SCHEMA_VERSION,
        "field": mset.field.value,
        "kind": mset.kind.value,
        "n": mset.n,
        "m": mset.m,
        "matrices": [encode_matrix(A, real) for A in mset.matrices],
    }


def matrix_set_from_doc(doc, cfg: SolverConfig | None = None) -> MatrixSet:
    try:
        jsonschema.validate(doc, MATRIX_SET_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"invalid matrix-set document: {exc.message}") from exc
    if not doc["matrices"]:
        raise SchemaError("document has no matrices", reason="EmptySet")
    mats = tuple(decode_matrix(rows) for rows in doc["matrices"])
    if "m" in doc and doc["m"] != len(mats):
        raise SchemaError(f"m={doc['m']} but {len(mats)} matrices given")
    if "n" in doc and any(A.shape != (doc["n"], doc["n"]) for A in mats):
        raise SchemaError(f"matrices are not all {doc['n']}x{doc['n']}")
    mset = MatrixSet(mats, SymmetryKind(doc["kind"]), Field(doc["field"]))
    return validate_matrix_set(mset, cfg)


def load_matrix_set(path, cfg: SolverConfig | None = None) -> MatrixSet:
    return matrix_set_from_doc(_read_json(path), cfg)


def save_matrix_set(mset: MatrixSet, path) -> None:
    _write_json(matrix_set_to_doc(mset), path)


def _node_to_doc(node: DecompositionNode, real: bool) -> dict:
    doc = {"depth": node.depth, "size": node.size, "path": node.path,
           "center_dim": node.center_dim, "restricted_dim": node.restricted_dim,
           "tries": node.tries}
    if node.is_leaf:
        doc["evidence"] = node.evidence.value
        return doc
    st, pr = node.step, node.pair
    doc["step"] = {"P": encode_matrix(st.P, real), "sizes": list(st.sizes),
                   "projector_residual": st.projector_residual,
                   "orthogonality": st.orthogonality,
                   "off_block_residual": st.off_block_residual}
    doc["pair"] = {"eps1": encode_matrix(pr.eps1, real),
                   "idem_residual": pr.idem_residual, "orth_residual": pr.orth_residual,
                   "member_residual": pr.member_residual, "symmetric": pr.symmetric}
    doc["children"] = [_node_to_doc(node.left, real), _node_to_doc(node.right, real)]
    return doc


def _node_from_doc(doc: dict, mode: Mode) -> DecompositionNode:
    node = DecompositionNode(depth=doc["depth"], size=doc["size"], center_dim=doc["center_dim"],
                             path=doc.get("path", ""), restricted_dim=doc.get("restricted_dim"),
                             tries=doc.get("tries", 0))
    if "children" not in doc:
        node.evidence = Evidence(doc["evidence"])
        return node
    st, pr = doc["step"], doc["pair"]
    node.step = TransformStep(decode_matrix(st["P"]), tuple(st["sizes"]), mode,
                              st["projector_residual"], st["orthogonality"],
                              st["off_block_residual"])
    e1 = decode_matrix(pr["eps1"])
    node.pair = IdempotentPair(e1, np.eye(e1.shape[0]) - e1, pr["idem_residual"],
                               pr["orth_residual"], pr["member_residual"], pr["symmetric"])
    node.left = _node_from_doc(doc["children"][0], mode)
    node.right = _node_from_doc(doc["children"][1], mode)
    return node


@dataclasses.dataclass(eq=False)
class DecompositionReport:
    """Serializable record of one decomposition run."""

    decomposition: Decomposition
    field: Field
    kind: SymmetryKind
    config: SolverConfig
    wall_time: float | None = None

    def to_dict(self) -> dict:
        dec = self.decomposition
        real = self.field is Field.REAL
        cfg = self.config
        doc = {
            "schema_version": SCHEMA_VERSION,
            "mode": dec.mode.value,
            "field": self.field.value,
            "kind": self.kind.value,
            "seed": cfg.seed,
            "tolerances": {"tol_sym": cfg.tol_sym, "tol_rank": cfg.tol_rank,
                           "tol_idem": cfg.tol_idem, "tol_block": cfg.tol_block,
                           "cluster_gap": cfg.cluster_gap, "max_tries": cfg.max_tries,
                           "max_depth": cfg.max_depth},
            "block_sizes": list(dec.block_sizes),
            "block_sizes_sorted": dec.sorted_sizes,
            "P": encode_matrix(dec.P, real),
            "blocks": [[encode_matrix(b, real) for b in blocks] for blocks in dec.blocks],
            "residuals": {k: float(v) for k, v in dec.residuals.items()},
            "certified_finest": dec.certified_finest,
            "leaves": [{"path": leaf.path, "size": leaf.size, "center_dim": leaf.center_dim,
                        "evidence": leaf.evidence.value,
                        "certified": leaf.evidence.certified} for leaf in dec.tree.leaves()],
            "tree": _node_to_doc(dec.tree, real),
        }
        if self.wall_time is not None:
            doc["wall_time"] = self.wall_time
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "DecompositionReport":
        try:
            jsonschema.validate(doc, REPORT_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise SchemaError(f"invalid report: {exc.message}") from exc
        mode = Mode(doc["mode"])
        tol = dict(doc["tolerances"])
        cfg = SolverConfig(seed=doc["seed"], **tol)
        dec = Decomposition(
            P=decode_matrix(doc["P"]),
            block_sizes=list(doc["block_sizes"]),
            blocks=[[decode_matrix(b) for b in blocks] for blocks in doc["blocks"]],
            tree=_node_from_doc(doc["tree"], mode),
            mode=mode,
            residuals=dict(doc["residuals"]),
            certified_finest=doc["certified_finest"],
        )
        return cls(dec, Field(doc["field"]), SymmetryKind(doc["kind"]), cfg, doc.get("wall_time"))


def save_report(report: DecompositionReport, path) -> None:
    _write_json(report.to_dict(), path)


def load_report(path) -> DecompositionReport:
    return DecompositionReport.from_dict(_read_json(path))
