"""The expressivity relation between the 17 formalisms and its Hasse diagram.

``RELATION_ROWS[X][k]`` is ``+`` when X expresses the k-th formalism
(in :data:`FORMALISM_ORDER`) and ``-`` otherwise.  Each off-diagonal cell
cites the facts it rests on:

``embed:X->Y``
    X embeds into Y (checked by the randomised edge suite);
``embed:*->PO``
    every formalism embeds into PO;
``equiv:A=B=C``
    the embedding cycle between equally expressive formalisms;
``<fixture>/<target>``
    a separation fixture target (checked by :func:`run_separation`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import networkx as nx

from .errors import InconsistentTable
from .objectives.embeddings import SUPPORTED_EDGES, embedding_path
from .objectives.specs import Formalism as F
from .objectives.suite import EdgeReport, edge_suite
from .separations.checks import SeparationReport, run_separation
from .separations.fixtures import BUILDERS, FIXTURE_NAMES, get_fixture

FORMALISM_ORDER = tuple(f.value for f in F)
REFERENCE_ONLY = frozenset({"ex_lex/lexicographic"})
EDGE_INSTANCES = 10


@dataclass(frozen=True)
class RelationTable:
    formalisms: tuple
    expresses: dict
    references: dict

    def __call__(self, x: str, y: str) -> bool:
        return self.expresses[(str(x), str(y))]

    def cells(self):
        for x in self.formalisms:
            for y in self.formalisms:
                yield x, y, self.expresses[(x, y)], self.references.get((x, y), ())

    def chain(self, x: str, y: str) -> list | None:
        """Embedding chain realising ``x`` expresses ``y`` (from y up to x)."""
        path = embedding_path(F(y), F(x))
        return None if path is None else [f"{a}->{b}" for a, b in path]

    def transitivity_violations(self) -> list[tuple[str, str, str]]:
        bad = []
        for x in self.formalisms:
            for y in self.formalisms:
                if not self(x, y):
                    continue
                for z in self.formalisms:
                    if self(y, z) and not self(x, z):
                        bad.append((x, y, z))
        return bad


def relation_table() -> RelationTable:
    expresses = {}
    for x, row in RELATION_ROWS.items():
        for y, mark in zip(FORMALISM_ORDER, row):
            expresses[(x, y)] = mark == "+"
    return RelationTable(FORMALISM_ORDER, expresses, dict(CELL_REFERENCES))


@dataclass(frozen=True)
class HasseGraph:
    """Equivalence classes (in formalism order) and covering edges ``(lower, upper)``."""

    classes: tuple
    edges: tuple

    @property
    def top(self) -> tuple:
        uppers = {a for a, _ in self.edges}
        tops = [k for k in range(len(self.classes)) if k not in uppers]
        return tuple(self.classes[k] for k in tops)

    def class_of(self, formalism: str) -> tuple:
        return next(c for c in self.classes if str(formalism) in c)


def derive_hasse(table: RelationTable) -> HasseGraph:
    bad = table.transitivity_violations()
    if bad:
        x, y, z = bad[0]
        raise InconsistentTable(f"{x} expresses {y} and {y} expresses {z}, but {x} does not express {z} "
                                f"({len(bad)} violations)")
    graph = nx.DiGraph()
    graph.add_nodes_from(table.formalisms)
    # Edge y -> x when x expresses y: arrows point towards more expressive classes.
    graph.add_edges_from((y, x) for x, y, e, _ in table.cells() if e and x != y)
    rank = {f: k for k, f in enumerate(table.formalisms)}
    classes = sorted((tuple(sorted(c, key=rank.get)) for c in nx.strongly_connected_components(graph)),
                     key=lambda c: rank[c[0]])
    index = {f: k for k, c in enumerate(classes) for f in c}
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(classes)))
    dag.add_edges_from({(index[a], index[b]) for a, b in graph.edges if index[a] != index[b]})
    reduced = nx.transitive_reduction(dag)
    return HasseGraph(tuple(classes), tuple(sorted(reduced.edges)))


def emit_dot(graph: HasseGraph) -> str:
    lines = ["digraph expressivity {", "  rankdir=BT;", "  node [shape=box];"]
    for k, members in enumerate(graph.classes):
        lines.append(f'  c{k} [label="{", ".join(members)}"];')
    for a, b in graph.edges:
        lines.append(f"  c{a} -> c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- verification -----------------------------------------------------------------


def _edges_for(ref: str) -> list[tuple[F, F]] | None:
    if ref == "embed:*->PO":
        return [(f, F.PO) for f in F if f is not F.PO]
    if ref.startswith("embed:"):
        a, b = ref[len("embed:"):].split("->")
        return [(F(a), F(b))]
    if ref.startswith("equiv:"):
        members = {F(m) for m in ref[len("equiv:"):].split("=")}
        return [e for e in SUPPORTED_EDGES if e[0] in members and e[1] in members]
    return None


def _target_of(ref: str):
    fixture, target = ref.split("/")
    return next(t for t in get_fixture(fixture).targets if t.name == target)


def _all_targets() -> list[str]:
    return [f"{name}/{t.name}" for name in sorted(FIXTURE_NAMES) for t in get_fixture(name).targets]


def _derives(x: str, y: str, ref: str) -> bool:
    # x cannot express y if some Z expressing the target embeds into y while x embeds into a W that cannot.
    target = _target_of(ref)
    can = [F(c.formalism) for c in target.claims if c.expresses]
    cannot = [F(c.formalism) for c in target.claims if not c.expresses]
    return (any(embedding_path(z, F(y)) is not None for z in can)
            and any(embedding_path(F(x), w) is not None for w in cannot))


@dataclass
class CellResult:
    row: str
    column: str
    expresses: bool
    references: tuple
    status: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"row": self.row, "column": self.column,
                "relation": "Expresses" if self.expresses else "NotExpresses",
                "references": list(self.references), "status": self.status, "detail": self.detail}


@dataclass
class VerificationReport:
    cells: list = field(default_factory=list)
    fixtures: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    citation_notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self) -> dict:
        out: dict = {}
        for c in self.cells:
            out[c.status] = out.get(c.status, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {"pass": self.passed, "failures": list(self.failures), "counts": self.counts(),
                "citation_notes": list(self.citation_notes),
                "fixtures": {k: v.passed for k, v in self.fixtures.items()},
                "edges": {k: v.passed for k, v in self.edges.items()},
                "cells": [c.to_json() for c in self.cells]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def verify_all(overrides: dict | None = None, edge_instances: int = EDGE_INSTANCES, seed: int = 0,
               table: RelationTable | None = None) -> VerificationReport:
    """Check every cell of the relation table; failures are collected, never raised.

    ``overrides`` maps fixture names to replacement fixtures (for fault injection).
    """
    table = table or relation_table()
    overrides = overrides or {}
    report = VerificationReport()
    for name in sorted(FIXTURE_NAMES):
        fx = overrides.get(name) or get_fixture(name)
        rep: SeparationReport = run_separation(fx)
        report.fixtures[name] = rep
        report.failures += [f"{name}: {c.claim}" for c in rep.failures]
    for a, b in SUPPORTED_EDGES:
        rep: EdgeReport = edge_suite((a, b), edge_instances, seed)
        report.edges[rep.label] = rep
        report.failures += [f"edge {rep.label}: {msg}" for msg in rep.failures[:3]]
    for x, y, z in table.transitivity_violations():
        report.failures.append(f"table: {x} expresses {y} expresses {z} but not {x} expresses {z}")
    if not all(table(x, x) for x in table.formalisms):
        report.failures.append("table: diagonal is not all Expresses")
    if not all(table("PO", y) for y in table.formalisms):
        report.failures.append("table: PO row is not all Expresses")

    for x, y, expresses, refs in table.cells():
        cell = _verify_cell(table, report, x, y, expresses, refs)
        report.cells.append(cell)
        if cell.status == "failed":
            report.failures.append(f"cell ({x}, {y}): {cell.detail}")
    return report


def _edge_ok(report, edges) -> bool:
    return all(report.edges[f"{a}->{b}"].passed for a, b in edges)


def _verify_cell(table, report, x, y, expresses, refs) -> CellResult:
    if x == y:
        return CellResult(x, y, True, refs, "verified", "reflexive")
    unknown = [r for r in refs if "/" not in r and _edges_for(r) is None]
    missing = [r for r in refs if "/" in r and r.split("/")[0] not in BUILDERS]
    if unknown or missing:
        return CellResult(x, y, expresses, refs, "failed", f"unresolved references {unknown + missing}")
    cited_edges = [e for r in refs if "/" not in r for e in _edges_for(r)]
    if not _edge_ok(report, cited_edges):
        return CellResult(x, y, expresses, refs, "failed", "a cited embedding fails its suite")
    if expresses:
        path = embedding_path(F(y), F(x))
        if path is None:
            return CellResult(x, y, True, refs, "failed", "no embedding chain")
        if not _edge_ok(report, path):
            return CellResult(x, y, True, refs, "failed", "embedding chain fails its suite")
        return CellResult(x, y, True, refs, "verified", "chain " + ", ".join(f"{a}->{b}" for a, b in path))
    targets = [r for r in refs if "/" in r]
    if not targets:
        return CellResult(x, y, False, refs, "failed", "no separation fixture cited")
    usable = [r for r in targets if _derives(x, y, r)]
    note = ""
    if not usable:
        # The cited chain does not go through; accept any fixture target that does.
        usable = [r for r in _all_targets() if _derives(x, y, r)]
        if not usable:
            return CellResult(x, y, False, refs, "failed", "cited separations do not imply this cell")
        note = "cited separations do not imply this cell; "
        report.citation_notes.append(f"cell ({x}, {y}): cited {', '.join(targets)} do not imply it")
    checked = [r for r in usable if r not in REFERENCE_ONLY]
    for r in checked:
        if report.fixtures[r.split("/")[0]].passed:
            return CellResult(x, y, False, refs, "verified", f"{note}separated by {r}")
    if not checked:
        return CellResult(x, y, False, refs, "proof-reference-only", f"{usable[0]} has no finite check")
    return CellResult(x, y, False, refs, "failed", f"fixture checks fail for {', '.join(checked)}")


RELATION_ROWS = {
    "MR": "+----------------",
    "LAR": "-+---------------",
    "LTL": "--+--------------",
    "RM": "+--+-------------",
    "INMR": "+++++++----------",
    "IMORL": "+++++++----------",
    "FTR": "+++++++----------",
    "RRL": "+------+---------",
    "ONMR": "+-------+--------",
    "OMORL": "++++++++++++-----",
    "FOMR": "++++++++++++-----",
    "FTLR": "++++++++++++-----",
    "FPR": "+++++++++++++----",
    "OMO": "++++++++++++-+++-",
    "TLO": "++++++++++++-+++-",
    "GOMORL": "++++++++++++-+++-",
    "PO": "+++++++++++++++++",
}

CELL_REFERENCES = {
    ("MR", "LAR"): ("ex_loop/discontinuity",),
    ("MR", "LTL"): ("ex_loop/discontinuity",),
    ("MR", "RM"): ("ex_xor/xor",),
    ("MR", "INMR"): ("ex_loop/discontinuity", "embed:LAR->FTR", "equiv:INMR=IMORL=FTR"),
    ("MR", "IMORL"): ("ex_loop/discontinuity", "embed:LAR->FTR", "equiv:INMR=IMORL=FTR"),
    ("MR", "FTR"): ("ex_loop/discontinuity", "embed:LAR->FTR"),
    ("MR", "RRL"): ("embed:MR->RM", "embed:RM->FTR", "ex_threshold/determinism"),
    ("MR", "ONMR"): ("embed:MR->RM", "embed:RM->FTR", "ex_threshold/threshold"),
    ("MR", "OMORL"): ("embed:MR->RM", "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL"),
    ("MR", "FOMR"): ("ex_loop/discontinuity", "embed:LAR->FTR", "embed:FTR->FTLR", "equiv:OMORL=FOMR=FTLR"),
    ("MR", "FTLR"): ("ex_loop/discontinuity", "embed:LAR->FTR", "embed:FTR->FTLR"),
    ("MR", "FPR"): ("ex_loop/discontinuity", "embed:LAR->FTR", "embed:FTR->FTLR", "embed:FTLR->FPR"),
    ("MR", "OMO"): (
        "ex_loop/discontinuity", "embed:LAR->FTR", "embed:FTR->FTLR", "embed:FTLR->TLO",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("MR", "TLO"): ("ex_loop/discontinuity", "embed:LAR->FTR", "embed:FTR->FTLR", "embed:FTLR->TLO"),
    ("MR", "GOMORL"): (
        "embed:MR->RM", "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL",
        "embed:OMORL->GOMORL",
    ),
    ("MR", "PO"): ("ex_loop/discontinuity", "embed:*->PO"),
    ("LAR", "MR"): ("ex_two_paths/upper_path",),
    ("LAR", "LTL"): ("ex_two_paths/upper_path",),
    ("LAR", "RM"): ("ex_two_paths/upper_path", "embed:MR->RM"),
    ("LAR", "INMR"): ("ex_two_paths/upper_path", "embed:MR->RM", "embed:RM->FTR", "equiv:INMR=IMORL=FTR"),
    ("LAR", "IMORL"): ("ex_two_paths/upper_path", "embed:MR->RM", "embed:RM->FTR", "equiv:INMR=IMORL=FTR"),
    ("LAR", "FTR"): ("ex_two_paths/upper_path", "embed:MR->RM", "embed:RM->FTR"),
    ("LAR", "RRL"): ("embed:LAR->FTR", "ex_threshold/determinism"),
    ("LAR", "ONMR"): ("embed:LAR->FTR", "ex_threshold/threshold"),
    ("LAR", "OMORL"): ("embed:LAR->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL"),
    ("LAR", "FOMR"): (
        "embed:LAR->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("LAR", "FTLR"): (
        "embed:LAR->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("LAR", "FPR"): (
        "embed:LAR->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->FPR",
    ),
    ("LAR", "OMO"): (
        "embed:LAR->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("LAR", "TLO"): (
        "embed:LAR->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("LAR", "GOMORL"): (
        "embed:LAR->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
    ),
    ("LAR", "PO"): ("ex_two_paths/upper_path", "embed:*->PO"),
    ("LTL", "MR"): ("ex_single_state/three_levels",),
    ("LTL", "LAR"): ("ex_single_state/three_levels",),
    ("LTL", "RM"): ("ex_single_state/three_levels", "embed:RM->FTR"),
    ("LTL", "INMR"): (
        "ex_single_state/three_levels", "embed:MR->RM", "embed:RM->FTR", "equiv:INMR=IMORL=FTR",
    ),
    ("LTL", "IMORL"): (
        "ex_single_state/three_levels", "embed:MR->RM", "embed:RM->FTR", "equiv:INMR=IMORL=FTR",
    ),
    ("LTL", "FTR"): ("ex_single_state/three_levels", "embed:MR->RM", "embed:RM->FTR"),
    ("LTL", "RRL"): ("embed:LTL->FTR", "ex_threshold/determinism"),
    ("LTL", "ONMR"): ("embed:LTL->FTR", "ex_threshold/threshold"),
    ("LTL", "OMORL"): ("embed:LTL->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL"),
    ("LTL", "FOMR"): (
        "embed:LTL->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("LTL", "FTLR"): (
        "embed:LTL->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("LTL", "FPR"): (
        "embed:LTL->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->FPR",
    ),
    ("LTL", "OMO"): (
        "embed:LTL->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("LTL", "TLO"): (
        "embed:LTL->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("LTL", "GOMORL"): (
        "embed:LTL->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
    ),
    ("LTL", "PO"): ("ex_single_state/three_levels", "embed:*->PO"),
    ("RM", "MR"): ("embed:MR->RM",),
    ("RM", "LAR"): ("ex_loop/discontinuity",),
    ("RM", "LTL"): ("ex_loop/discontinuity",),
    ("RM", "INMR"): ("ex_loop/discontinuity", "embed:LAR->FTR", "equiv:INMR=IMORL=FTR"),
    ("RM", "IMORL"): ("ex_loop/discontinuity", "embed:LAR->FTR", "equiv:INMR=IMORL=FTR"),
    ("RM", "FTR"): ("ex_loop/discontinuity", "embed:LAR->FTR"),
    ("RM", "RRL"): ("embed:RM->FTR", "ex_threshold/determinism"),
    ("RM", "ONMR"): ("embed:RM->FTR", "ex_threshold/threshold"),
    ("RM", "OMORL"): ("embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL"),
    ("RM", "FOMR"): (
        "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("RM", "FTLR"): (
        "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("RM", "FPR"): (
        "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->FPR",
    ),
    ("RM", "OMO"): (
        "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("RM", "TLO"): (
        "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->TLO",
    ),
    ("RM", "GOMORL"): (
        "embed:RM->FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
    ),
    ("RM", "PO"): ("embed:RM->FTR", "ex_threshold/threshold", "embed:*->PO"),
    ("INMR", "MR"): ("embed:MR->INMR",),
    ("INMR", "LAR"): ("equiv:INMR=IMORL=FTR", "embed:LAR->FTR"),
    ("INMR", "LTL"): ("equiv:INMR=IMORL=FTR", "embed:LTL->FTR"),
    ("INMR", "RM"): ("equiv:INMR=IMORL=FTR", "embed:RM->FTR"),
    ("INMR", "IMORL"): ("equiv:INMR=IMORL=FTR",),
    ("INMR", "FTR"): ("equiv:INMR=IMORL=FTR",),
    ("INMR", "RRL"): ("equiv:INMR=IMORL=FTR", "ex_threshold/determinism"),
    ("INMR", "ONMR"): ("equiv:INMR=IMORL=FTR", "ex_threshold/threshold"),
    ("INMR", "OMORL"): ("equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL"),
    ("INMR", "FOMR"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("INMR", "FTLR"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("INMR", "FPR"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->FPR",
    ),
    ("INMR", "OMO"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("INMR", "TLO"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->TLO",
    ),
    ("INMR", "GOMORL"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
    ),
    ("INMR", "PO"): ("equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:*->PO"),
    ("IMORL", "MR"): ("equiv:INMR=IMORL=FTR", "embed:MR->INMR"),
    ("IMORL", "LAR"): ("equiv:INMR=IMORL=FTR", "embed:LAR->FTR"),
    ("IMORL", "LTL"): ("equiv:INMR=IMORL=FTR", "embed:LTL->FTR"),
    ("IMORL", "RM"): ("equiv:INMR=IMORL=FTR", "embed:RM->FTR"),
    ("IMORL", "INMR"): ("equiv:INMR=IMORL=FTR",),
    ("IMORL", "FTR"): ("equiv:INMR=IMORL=FTR",),
    ("IMORL", "RRL"): ("equiv:INMR=IMORL=FTR", "ex_threshold/determinism"),
    ("IMORL", "ONMR"): ("equiv:INMR=IMORL=FTR", "ex_threshold/threshold"),
    ("IMORL", "OMORL"): ("equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL"),
    ("IMORL", "FOMR"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("IMORL", "FTLR"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
    ),
    ("IMORL", "FPR"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->FPR",
    ),
    ("IMORL", "OMO"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
        "equiv:GOMORL=OMO=TLO",
    ),
    ("IMORL", "TLO"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR",
        "embed:FTLR->TLO",
    ),
    ("IMORL", "GOMORL"): (
        "equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL",
    ),
    ("IMORL", "PO"): ("equiv:INMR=IMORL=FTR", "ex_threshold/threshold", "embed:*->PO"),
    ("FTR", "MR"): ("embed:RM->FTR", "embed:MR->RM"),
    ("FTR", "LAR"): ("embed:LAR->FTR",),
    ("FTR", "LTL"): ("embed:LTL->FTR",),
    ("FTR", "RM"): ("embed:RM->FTR",),
    ("FTR", "INMR"): ("equiv:INMR=IMORL=FTR",),
    ("FTR", "IMORL"): ("equiv:INMR=IMORL=FTR",),
    ("FTR", "RRL"): ("ex_threshold/determinism",),
    ("FTR", "ONMR"): ("ex_threshold/threshold",),
    ("FTR", "OMORL"): ("ex_threshold/threshold", "embed:ONMR->OMORL"),
    ("FTR", "FOMR"): ("ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR"),
    ("FTR", "FTLR"): ("ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR"),
    ("FTR", "FPR"): (
        "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR",
    ),
    ("FTR", "OMO"): (
        "ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL", "equiv:GOMORL=OMO=TLO",
    ),
    ("FTR", "TLO"): (
        "ex_threshold/threshold", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR", "embed:FTLR->TLO",
    ),
    ("FTR", "GOMORL"): ("ex_threshold/threshold", "embed:ONMR->OMORL", "embed:OMORL->GOMORL"),
    ("FTR", "PO"): ("ex_threshold/threshold", "embed:*->PO"),
    ("RRL", "MR"): ("embed:MR->RRL",),
    ("RRL", "LAR"): ("ex_two_cycles/limit_cycles",),
    ("RRL", "LTL"): ("ex_xor/xor",),
    ("RRL", "RM"): ("ex_xor/xor",),
    ("RRL", "INMR"): ("ex_xor/xor", "embed:RM->FTR", "equiv:INMR=IMORL=FTR"),
    ("RRL", "IMORL"): ("ex_xor/xor", "embed:RM->FTR", "equiv:INMR=IMORL=FTR"),
    ("RRL", "FTR"): ("ex_xor/xor", "embed:RM->FTR"),
    ("RRL", "ONMR"): ("ex_xor/xor",),
    ("RRL", "OMORL"): ("ex_xor/xor", "embed:ONMR->OMORL"),
    ("RRL", "FOMR"): ("ex_xor/xor", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR"),
    ("RRL", "FTLR"): ("ex_xor/xor", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR"),
    ("RRL", "FPR"): ("ex_xor/xor", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR"),
    ("RRL", "OMO"): ("ex_xor/xor", "embed:ONMR->OMORL", "embed:OMORL->GOMORL", "equiv:GOMORL=OMO=TLO"),
    ("RRL", "TLO"): ("ex_xor/xor", "embed:ONMR->OMORL", "equiv:OMORL=FOMR=FTLR", "embed:FTLR->TLO"),
    ("RRL", "GOMORL"): ("ex_xor/xor", "embed:ONMR->OMORL", "embed:OMORL->GOMORL", "equiv:GOMORL=OMO=TLO"),
    ("RRL", "PO"): ("ex_xor/xor", "embed:*->PO"),
    ("ONMR", "MR"): ("embed:MR->ONMR",),
    ("ONMR", "LAR"): ("ex_five_actions/limit_classes",),
    ("ONMR", "LTL"): ("ex_three_actions_ltl/all_actions",),
    ("ONMR", "RM"): ("ex_rm_counter/all_actions",),
    ("ONMR", "INMR"): ("ex_rm_counter/all_actions", "embed:RM->FTR", "equiv:INMR=IMORL=FTR"),
    ("ONMR", "IMORL"): ("ex_rm_counter/all_actions", "embed:RM->FTR", "equiv:INMR=IMORL=FTR"),
    ("ONMR", "FTR"): ("ex_rm_counter/all_actions", "embed:RM->FTR"),
    ("ONMR", "RRL"): ("ex_three_traj/determinism",),
    ("ONMR", "OMORL"): ("ex_threshold/threshold", "embed:FTR->FTLR", "equiv:OMORL=FOMR=FTLR"),
    ("ONMR", "FOMR"): ("ex_threshold/threshold", "embed:FTR->FTLR", "equiv:OMORL=FOMR=FTLR"),
    ("ONMR", "FTLR"): ("ex_threshold/threshold", "embed:FTR->FTLR"),
    ("ONMR", "FPR"): ("ex_threshold/threshold", "embed:FTR->FTLR", "embed:FTLR->FPR"),
    ("ONMR", "OMO"): (
        "ex_threshold/threshold", "embed:FTR->FTLR", "embed:FTLR->TLO", "equiv:GOMORL=OMO=TLO",
    ),
    ("ONMR", "TLO"): ("ex_threshold/threshold", "embed:FTR->FTLR", "embed:FTLR->TLO"),
    ("ONMR", "GOMORL"): (
        "ex_threshold/threshold", "embed:FTR->FTLR", "embed:FTLR->TLO", "equiv:GOMORL=OMO=TLO",
    ),
    ("ONMR", "PO"): ("ex_five_actions/limit_classes", "embed:*->PO"),
    ("OMORL", "MR"): ("embed:ONMR->OMORL", "embed:MR->ONMR"),
    ("OMORL", "LAR"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "embed:LAR->FTR"),
    ("OMORL", "LTL"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "embed:LTL->FTR"),
    ("OMORL", "RM"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "embed:RM->FTR"),
    ("OMORL", "INMR"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("OMORL", "IMORL"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("OMORL", "FTR"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR"),
    ("OMORL", "RRL"): ("equiv:OMORL=FOMR=FTLR", "embed:RRL->FTLR"),
    ("OMORL", "ONMR"): ("embed:ONMR->OMORL",),
    ("OMORL", "FOMR"): ("equiv:OMORL=FOMR=FTLR",),
    ("OMORL", "FTLR"): ("equiv:OMORL=FOMR=FTLR",),
    ("OMORL", "FPR"): ("embed:OMORL->GOMORL", "ex_unvisited/unvisited"),
    ("OMORL", "OMO"): (
        "equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR", "ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO",
    ),
    ("OMORL", "TLO"): (
        "equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR", "ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO",
    ),
    ("OMORL", "GOMORL"): ("equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR", "ex_lex/lexicographic"),
    ("OMORL", "PO"): ("embed:OMORL->GOMORL", "ex_unvisited/unvisited", "embed:*->PO"),
    ("FOMR", "MR"): ("equiv:OMORL=FOMR=FTLR", "embed:ONMR->OMORL", "embed:MR->ONMR"),
    ("FOMR", "LAR"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "embed:LAR->FTR"),
    ("FOMR", "LTL"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "embed:LTL->FTR"),
    ("FOMR", "RM"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "embed:RM->FTR"),
    ("FOMR", "INMR"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("FOMR", "IMORL"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("FOMR", "FTR"): ("equiv:OMORL=FOMR=FTLR", "embed:FTR->FTLR"),
    ("FOMR", "RRL"): ("equiv:OMORL=FOMR=FTLR", "embed:RRL->FTLR"),
    ("FOMR", "ONMR"): ("equiv:OMORL=FOMR=FTLR", "embed:ONMR->OMORL"),
    ("FOMR", "OMORL"): ("equiv:OMORL=FOMR=FTLR",),
    ("FOMR", "FTLR"): ("equiv:OMORL=FOMR=FTLR",),
    ("FOMR", "FPR"): ("equiv:OMORL=FOMR=FTLR", "embed:OMORL->GOMORL", "ex_unvisited/unvisited"),
    ("FOMR", "OMO"): (
        "equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR", "ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO",
    ),
    ("FOMR", "TLO"): (
        "equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR", "ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO",
    ),
    ("FOMR", "GOMORL"): ("equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR", "ex_lex/lexicographic"),
    ("FOMR", "PO"): ("equiv:OMORL=FOMR=FTLR", "embed:FTLR->FPR", "ex_lex/lexicographic", "embed:*->PO"),
    ("FTLR", "MR"): ("embed:FTR->FTLR", "embed:RM->FTR", "embed:MR->RM"),
    ("FTLR", "LAR"): ("embed:FTR->FTLR", "embed:LAR->FTR"),
    ("FTLR", "LTL"): ("embed:FTR->FTLR", "embed:LTL->FTR"),
    ("FTLR", "RM"): ("embed:FTR->FTLR", "embed:RM->FTR"),
    ("FTLR", "INMR"): ("embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("FTLR", "IMORL"): ("embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("FTLR", "FTR"): ("embed:FTR->FTLR",),
    ("FTLR", "RRL"): ("embed:RRL->FTLR",),
    ("FTLR", "ONMR"): ("equiv:OMORL=FOMR=FTLR", "embed:ONMR->OMORL"),
    ("FTLR", "OMORL"): ("equiv:OMORL=FOMR=FTLR",),
    ("FTLR", "FOMR"): ("equiv:OMORL=FOMR=FTLR",),
    ("FTLR", "FPR"): ("equiv:OMORL=FOMR=FTLR", "embed:OMORL->GOMORL", "ex_unvisited/unvisited"),
    ("FTLR", "OMO"): ("embed:FTLR->FPR", "ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO"),
    ("FTLR", "TLO"): ("embed:FTLR->FPR", "ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO"),
    ("FTLR", "GOMORL"): ("embed:FTLR->FPR", "ex_lex/lexicographic"),
    ("FTLR", "PO"): ("embed:FTLR->FPR", "ex_lex/lexicographic", "embed:*->PO"),
    ("FPR", "MR"): ("embed:FTLR->FPR", "embed:FTR->FTLR", "embed:RM->FTR", "embed:MR->RM"),
    ("FPR", "LAR"): ("embed:FTLR->FPR", "embed:FTR->FTLR", "embed:LAR->FTR"),
    ("FPR", "LTL"): ("embed:FTLR->FPR", "embed:FTR->FTLR", "embed:LTL->FTR"),
    ("FPR", "RM"): ("embed:FTLR->FPR", "embed:FTR->FTLR", "embed:RM->FTR"),
    ("FPR", "INMR"): ("embed:FTLR->FPR", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("FPR", "IMORL"): ("embed:FTLR->FPR", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("FPR", "FTR"): ("embed:FTLR->FPR", "embed:FTR->FTLR"),
    ("FPR", "RRL"): ("embed:FTLR->FPR", "embed:RRL->FTLR"),
    ("FPR", "ONMR"): ("embed:FTLR->FPR", "equiv:OMORL=FOMR=FTLR", "embed:ONMR->OMORL"),
    ("FPR", "OMORL"): ("embed:FTLR->FPR", "equiv:OMORL=FOMR=FTLR"),
    ("FPR", "FOMR"): ("embed:FTLR->FPR", "equiv:OMORL=FOMR=FTLR"),
    ("FPR", "FTLR"): ("embed:FTLR->FPR",),
    ("FPR", "OMO"): ("ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO"),
    ("FPR", "TLO"): ("ex_lex/lexicographic", "equiv:GOMORL=OMO=TLO"),
    ("FPR", "GOMORL"): ("ex_lex/lexicographic",),
    ("FPR", "PO"): ("ex_lex/lexicographic", "embed:*->PO"),
    ("OMO", "MR"): ("equiv:GOMORL=OMO=TLO", "embed:OMORL->GOMORL", "embed:ONMR->OMORL", "embed:MR->ONMR"),
    ("OMO", "LAR"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "embed:LAR->FTR"),
    ("OMO", "LTL"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "embed:LTL->FTR"),
    ("OMO", "RM"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "embed:RM->FTR"),
    ("OMO", "INMR"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("OMO", "IMORL"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("OMO", "FTR"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR"),
    ("OMO", "RRL"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:RRL->FTLR"),
    ("OMO", "ONMR"): ("equiv:GOMORL=OMO=TLO", "embed:OMORL->GOMORL", "embed:ONMR->OMORL"),
    ("OMO", "OMORL"): ("equiv:GOMORL=OMO=TLO", "embed:OMORL->GOMORL"),
    ("OMO", "FOMR"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "equiv:OMORL=FOMR=FTLR"),
    ("OMO", "FTLR"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "equiv:OMORL=FOMR=FTLR"),
    ("OMO", "FPR"): ("equiv:GOMORL=OMO=TLO", "ex_unvisited/unvisited"),
    ("OMO", "TLO"): ("equiv:GOMORL=OMO=TLO",),
    ("OMO", "GOMORL"): ("equiv:GOMORL=OMO=TLO",),
    ("OMO", "PO"): ("equiv:GOMORL=OMO=TLO", "ex_unvisited/unvisited", "embed:*->PO"),
    ("TLO", "MR"): ("embed:FTLR->TLO", "embed:FTR->FTLR", "embed:RM->FTR", "embed:MR->RM"),
    ("TLO", "LAR"): ("embed:FTLR->TLO", "embed:FTR->FTLR", "embed:LAR->FTR"),
    ("TLO", "LTL"): ("embed:FTLR->TLO", "embed:FTR->FTLR", "embed:LTL->FTR"),
    ("TLO", "RM"): ("embed:FTLR->TLO", "embed:FTR->FTLR", "embed:RM->FTR"),
    ("TLO", "INMR"): ("embed:FTLR->TLO", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("TLO", "IMORL"): ("embed:FTLR->TLO", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR"),
    ("TLO", "FTR"): ("embed:FTLR->TLO", "embed:FTR->FTLR"),
    ("TLO", "RRL"): ("embed:FTLR->TLO", "embed:RRL->FTLR"),
    ("TLO", "ONMR"): ("equiv:GOMORL=OMO=TLO", "embed:OMORL->GOMORL", "embed:ONMR->OMORL"),
    ("TLO", "OMORL"): ("equiv:GOMORL=OMO=TLO", "embed:OMORL->GOMORL"),
    ("TLO", "FOMR"): ("embed:FTLR->TLO", "equiv:OMORL=FOMR=FTLR"),
    ("TLO", "FTLR"): ("embed:FTLR->TLO",),
    ("TLO", "FPR"): ("equiv:GOMORL=OMO=TLO", "ex_unvisited/unvisited"),
    ("TLO", "OMO"): ("equiv:GOMORL=OMO=TLO",),
    ("TLO", "GOMORL"): ("equiv:GOMORL=OMO=TLO",),
    ("TLO", "PO"): ("equiv:GOMORL=OMO=TLO", "ex_unvisited/unvisited", "embed:*->PO"),
    ("GOMORL", "MR"): ("embed:OMORL->GOMORL", "embed:ONMR->OMORL", "embed:MR->ONMR"),
    ("GOMORL", "LAR"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "embed:LAR->FTR"),
    ("GOMORL", "LTL"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "embed:LTL->FTR"),
    ("GOMORL", "RM"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "embed:RM->FTR"),
    ("GOMORL", "INMR"): (
        "equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR",
    ),
    ("GOMORL", "IMORL"): (
        "equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR", "equiv:INMR=IMORL=FTR",
    ),
    ("GOMORL", "FTR"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:FTR->FTLR"),
    ("GOMORL", "RRL"): ("equiv:GOMORL=OMO=TLO", "embed:FTLR->TLO", "embed:RRL->FTLR"),
    ("GOMORL", "ONMR"): ("embed:OMORL->GOMORL", "embed:ONMR->OMORL"),
    ("GOMORL", "OMORL"): ("embed:OMORL->GOMORL",),
    ("GOMORL", "FOMR"): ("embed:OMORL->GOMORL", "equiv:OMORL=FOMR=FTLR"),
    ("GOMORL", "FTLR"): ("embed:OMORL->GOMORL", "equiv:OMORL=FOMR=FTLR"),
    ("GOMORL", "FPR"): ("ex_unvisited/unvisited",),
    ("GOMORL", "OMO"): ("equiv:GOMORL=OMO=TLO",),
    ("GOMORL", "TLO"): ("equiv:GOMORL=OMO=TLO",),
    ("GOMORL", "PO"): ("ex_unvisited/unvisited", "embed:*->PO"),
    ("PO", "MR"): ("embed:*->PO",),
    ("PO", "LAR"): ("embed:*->PO",),
    ("PO", "LTL"): ("embed:*->PO",),
    ("PO", "RM"): ("embed:*->PO",),
    ("PO", "INMR"): ("embed:*->PO",),
    ("PO", "IMORL"): ("embed:*->PO",),
    ("PO", "FTR"): ("embed:*->PO",),
    ("PO", "RRL"): ("embed:*->PO",),
    ("PO", "ONMR"): ("embed:*->PO",),
    ("PO", "OMORL"): ("embed:*->PO",),
    ("PO", "FOMR"): ("embed:*->PO",),
    ("PO", "FTLR"): ("embed:*->PO",),
    ("PO", "FPR"): ("embed:*->PO",),
    ("PO", "OMO"): ("embed:*->PO",),
    ("PO", "TLO"): ("embed:*->PO",),
    ("PO", "GOMORL"): ("embed:*->PO",),
}
