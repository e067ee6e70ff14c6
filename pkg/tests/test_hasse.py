import dataclasses

import pydot
import pytest

from objspec.errors import InconsistentTable
from objspec.hasse import (
    FORMALISM_ORDER,
    REFERENCE_ONLY,
    RelationTable,
    derive_hasse,
    emit_dot,
    relation_table,
    verify_all,
)
from objspec.separations import get_fixture

EXPECTED_COVERS = {
    (("MR",), ("RM",)),
    (("MR",), ("RRL",)),
    (("MR",), ("ONMR",)),
    (("LAR",), ("INMR", "IMORL", "FTR")),
    (("LTL",), ("INMR", "IMORL", "FTR")),
    (("RM",), ("INMR", "IMORL", "FTR")),
    (("INMR", "IMORL", "FTR"), ("OMORL", "FOMR", "FTLR")),
    (("RRL",), ("OMORL", "FOMR", "FTLR")),
    (("ONMR",), ("OMORL", "FOMR", "FTLR")),
    (("OMORL", "FOMR", "FTLR"), ("FPR",)),
    (("OMORL", "FOMR", "FTLR"), ("OMO", "TLO", "GOMORL")),
    (("FPR",), ("PO",)),
    (("OMO", "TLO", "GOMORL"), ("PO",)),
}


def _corrupt(table: RelationTable, x: str, y: str) -> RelationTable:
    expresses = dict(table.expresses)
    expresses[(x, y)] = not expresses[(x, y)]
    return dataclasses.replace(table, expresses=expresses)


def test_table_shape_and_invariants():
    table = relation_table()
    assert len(FORMALISM_ORDER) == 17
    assert len(list(table.cells())) == 17 * 17
    assert all(table(x, x) for x in FORMALISM_ORDER)
    assert all(table("PO", y) for y in FORMALISM_ORDER)
    assert table.transitivity_violations() == []
    for x, y, _, refs in table.cells():
        if x != y:
            assert refs, (x, y)


def test_hasse_structure():
    graph = derive_hasse(relation_table())
    assert len(graph.classes) == 11
    covers = {(graph.classes[a], graph.classes[b]) for a, b in graph.edges}
    assert covers == EXPECTED_COVERS
    assert graph.top == (("PO",),)
    assert graph.class_of("FOMR") == ("OMORL", "FOMR", "FTLR")


def test_expressivity_chains():
    table = relation_table()
    assert table.chain("FTLR", "MR")[0].startswith("MR->")
    assert table.chain("MR", "LAR") is None


def test_dot_is_valid_and_stable():
    text = emit_dot(derive_hasse(relation_table()))
    assert text == emit_dot(derive_hasse(relation_table()))
    (graph,) = pydot.graph_from_dot_data(text)
    assert graph.get_name() == "expressivity"
    assert len(graph.get_edges()) == len(EXPECTED_COVERS)
    assert "rankdir=BT" in text


def test_inconsistent_table_is_rejected():
    bad = _corrupt(relation_table(), "FTR", "MR")
    assert bad.transitivity_violations()
    with pytest.raises(InconsistentTable):
        derive_hasse(bad)


def test_verification_is_clean(verification):
    assert verification.passed, verification.failures
    counts = verification.counts()
    assert counts == {"proof-reference-only": 15, "verified": 274}
    assert all(rep.passed for rep in verification.fixtures.values())
    assert all(rep.passed for rep in verification.edges.values())
    assert len(verification.edges) == 41


def test_citation_notes(verification):
    # The ONMR row's cited separations do not reach these cells on their own.
    noted = sorted(n.split(")")[0].split(", ")[1] for n in verification.citation_notes)
    assert noted == sorted(["OMORL", "FOMR", "FTLR", "FPR", "OMO", "TLO", "GOMORL"])
    assert all(n.startswith("cell (ONMR, ") for n in verification.citation_notes)


def test_reference_only_cells_cite_reference_only_targets(verification):
    for cell in verification.cells:
        if cell.status == "proof-reference-only":
            assert set(cell.references) & REFERENCE_ONLY


def test_verification_json(verification):
    doc = verification.to_json()
    assert doc["pass"] is True and len(doc["cells"]) == 289


def test_fault_injection_localises_failures():
    fx = get_fixture("ex_xor")
    policies = dict(fx.policies)
    policies["pi_AB"] = policies["pi_AA"]
    report = verify_all(overrides={"ex_xor": dataclasses.replace(fx, policies=policies)}, edge_instances=2)
    assert not report.passed
    assert not report.fixtures["ex_xor"].passed
    assert all(rep.passed for name, rep in report.fixtures.items() if name != "ex_xor")
    assert any(f.startswith("ex_xor:") for f in report.failures)


def test_corrupted_table_fails_verification():
    report = verify_all(edge_instances=2, table=_corrupt(relation_table(), "MR", "LAR"))
    assert not report.passed
    assert any("cell (MR, LAR)" in f for f in report.failures)
