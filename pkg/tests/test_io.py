import json

import jsonschema
import numpy as np
import pytest

from sbdc.core import Field, SolverConfig, make_matrix_set
from sbdc.driver import sbdc, verify
from sbdc.fixtures import FIXTURES, REAL_PAIR
from sbdc.io import (MATRIX_SET_SCHEMA, REPORT_SCHEMA, DecompositionReport, IoError,
                     SchemaError, load_matrix_set, load_report, matrix_set_from_doc,
                     matrix_set_to_doc, save_matrix_set, save_report)


def test_real_pair_document(tmp_path):
    p = tmp_path / "pair.json"
    save_matrix_set(REAL_PAIR.matrix_set(), p)
    ms = load_matrix_set(p)
    assert (ms.n, ms.m) == (3, 2)
    assert np.array_equal(ms.matrices[0], REAL_PAIR.matrix_set().matrices[0])


def test_empty_matrix_list():
    doc = {"schema_version": "1", "field": "real", "kind": "symmetric", "matrices": []}
    with pytest.raises(SchemaError) as info:
        matrix_set_from_doc(doc)
    assert info.value.reason == "EmptySet"


def test_hermitian_pair_entries():
    doc = {"schema_version": "1", "field": "complex", "kind": "hermitian",
           "matrices": [[[2, [1, -1]], [[1, 1], 3]]]}
    ms = matrix_set_from_doc(doc)
    assert ms.matrices[0][0, 1] == 1 - 1j and ms.matrices[0][1, 0] == 1 + 1j


@pytest.mark.parametrize("doc", [
    {"field": "real", "kind": "symmetric", "matrices": [[[1]]]},
    {"schema_version": "2", "field": "real", "kind": "symmetric", "matrices": [[[1]]]},
    {"schema_version": "1", "field": "quaternion", "kind": "symmetric", "matrices": [[[1]]]},
    {"schema_version": "1", "field": "real", "kind": "symmetric", "matrices": [[["a"]]]},
    {"schema_version": "1", "field": "real", "kind": "symmetric", "matrices": [[[1, 2], [3]]]},
    {"schema_version": "1", "field": "real", "kind": "symmetric", "n": 2, "matrices": [[[1]]]},
    {"schema_version": "1", "field": "real", "kind": "symmetric", "m": 2, "matrices": [[[1]]]},
])
def test_malformed_documents(doc):
    with pytest.raises(SchemaError):
        matrix_set_from_doc(doc)


def test_io_errors(tmp_path):
    with pytest.raises(IoError):
        load_matrix_set(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        load_matrix_set(bad)


def test_full_precision_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    G = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    H = G + G.conj().T
    ms = make_matrix_set([H, np.pi * H @ H], "hermitian")
    p = tmp_path / "h.json"
    save_matrix_set(ms, p)
    back = load_matrix_set(p)
    for a, b in zip(ms.matrices, back.matrices):
        assert np.array_equal(a, b)


def test_documents_match_published_schemas():
    doc = matrix_set_to_doc(REAL_PAIR.matrix_set())
    jsonschema.validate(doc, MATRIX_SET_SCHEMA)
    fx = FIXTURES["unitary_block"]
    ms = fx.matrix_set()
    report = DecompositionReport(sbdc(ms, fx.mode), ms.field, ms.kind, SolverConfig())
    jsonschema.validate(report.to_dict(), REPORT_SCHEMA)


@pytest.mark.parametrize("name", list(FIXTURES))
def test_report_round_trip(tmp_path, name):
    fx = FIXTURES[name]
    ms = fx.matrix_set()
    cfg = SolverConfig(seed=2)
    report = DecompositionReport(sbdc(ms, fx.mode, cfg), ms.field, ms.kind, cfg, wall_time=0.25)
    p = tmp_path / "r.json"
    save_report(report, p)
    back = load_report(p)
    assert back.to_dict() == report.to_dict()
    assert back.config == cfg and back.field is ms.field and back.wall_time == 0.25
    assert np.array_equal(back.decomposition.P, report.decomposition.P)
    assert verify(back.decomposition, ms, cfg).passed


def test_report_without_wall_time_is_deterministic():
    ms = REAL_PAIR.matrix_set()
    docs = [json.dumps(DecompositionReport(sbdc(ms), ms.field, ms.kind, SolverConfig()).to_dict(),
                       sort_keys=True) for _ in range(2)]
    assert docs[0] == docs[1] and "wall_time" not in docs[0]


def test_real_report_has_bare_numbers():
    ms = REAL_PAIR.matrix_set()
    doc = DecompositionReport(sbdc(ms), Field.REAL, ms.kind, SolverConfig()).to_dict()
    assert all(isinstance(x, float) for row in doc["P"] for x in row)
