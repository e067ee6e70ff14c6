import numpy as np
import pytest

from objspec.errors import UnsupportedEdge, ValidationError
from objspec.objectives import specs as S
from objspec.objectives.embeddings import (
    CORE_EDGES,
    EXTRA_EDGES,
    SUPPORTED_EDGES,
    embed,
    embed_chain,
    embedding_path,
)
from objspec.objectives.evaluators import compare, evaluate
from objspec.objectives.specs import Formalism as F
from objspec.objectives.suite import edge_suite, random_instance, random_spec


def test_edge_inventory():
    assert len(CORE_EDGES) == 17
    assert len(SUPPORTED_EDGES) == 41
    assert len(set(SUPPORTED_EDGES)) == 41
    assert all((src, F.PO) in EXTRA_EDGES for src in F if src is not F.PO)


@pytest.mark.parametrize("edge", SUPPORTED_EDGES, ids=lambda e: f"{e[0]}->{e[1]}")
def test_every_supported_edge_preserves_values_or_orderings(edge):
    report = edge_suite(edge, instances=4, seed=11)
    assert report.passed, report.failures[:3]


@pytest.mark.parametrize("edge", [(F.LAR, F.MR), (F.LTL, F.MR), (F.FTR, F.MR), (F.PO, F.TLO), (F.RM, F.MR)])
def test_impossible_edges_are_unsupported(edge):
    rng = np.random.default_rng(0)
    env, _ = random_instance(rng, lasso=True)
    with pytest.raises(UnsupportedEdge):
        embed(random_spec(edge[0], env, rng), edge[1], env)


def test_environment_dependent_edges_need_env():
    rng = np.random.default_rng(0)
    env, _ = random_instance(rng)
    with pytest.raises(ValidationError):
        embed(random_spec(F.FTLR, env, rng), F.FPR)


def test_embedding_paths_compose():
    assert embedding_path(F.MR, F.MR) == []
    path = embedding_path(F.MR, F.FTLR)
    assert path[0][0] is F.MR and path[-1][1] is F.FTLR
    assert all(edge in SUPPORTED_EDGES for edge in path)
    assert embedding_path(F.PO, F.MR) is None
    rng = np.random.default_rng(2)
    env, policies = random_instance(rng)
    spec = random_spec(F.MR, env, rng)
    image = embed_chain(spec, embedding_path(F.MR, F.FPR), env)
    for p in policies:
        assert abs(evaluate(spec, env, p) - evaluate(image, env, p)) <= 1e-9


def test_policy_ordering_image_agrees():
    rng = np.random.default_rng(3)
    env, policies = random_instance(rng)
    spec = random_spec(F.OMORL, env, rng)
    image = embed(spec, F.PO, env)
    assert image.formalism is F.PO
    for p in policies:
        for q in policies:
            assert compare(spec, env, p, q) is compare(image, env, p, q)


def test_ftr_to_inmr_uses_injective_return():
    rng = np.random.default_rng(4)
    env, policies = random_instance(rng, lasso=True)
    ftr = S.FTR(lambda xi: float(len(xi.cycle)))
    inmr = embed(ftr, F.INMR, env)
    assert isinstance(inmr, S.INMR)
    for p in policies:
        assert abs(evaluate(ftr, env, p) - evaluate(inmr, env, p)) <= 1e-9
