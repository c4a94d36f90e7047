"""Free-category construction: morphisms, composition, hom-sets."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from absaudit.errors import CapacityError, ModelError
from absaudit.freecat import (
    Morphism,
    all_morphisms,
    compose,
    generators,
    hom_set,
    identity,
    is_path,
)
from absaudit.scm import Dag, underlying_graph

from helpers import chain, random_dag
from oracles import all_paths, path_count

DIAMOND = Dag(
    nodes=("A", "B", "C", "D"),
    edges=(("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")),
)


def adj_of(dag: Dag) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {n: [] for n in dag.nodes}
    for u, v in dag.edges:
        out[u].append(v)
    return out


# ---------------------------------------------------------------------------
# Morphisms and composition
# ---------------------------------------------------------------------------

def test_morphism_shape():
    m = Morphism(("A", "B", "C"))
    assert (m.source, m.target, m.length) == ("A", "C", 2)
    assert m.edges == (("A", "B"), ("B", "C"))
    assert str(m) == "A^B^C"
    assert not m.is_identity
    assert identity("A").is_identity
    assert identity("A").length == 0


def test_empty_morphism_rejected():
    with pytest.raises(ModelError):
        Morphism(())


def test_compose_concatenates():
    assert compose(Morphism(("A", "B")), Morphism(("B", "C"))) == Morphism(
        ("A", "B", "C")
    )


def test_compose_endpoint_mismatch():
    with pytest.raises(ModelError, match="endpoint mismatch"):
        compose(Morphism(("A", "B")), Morphism(("C", "D")))


def test_identity_laws():
    m = Morphism(("A", "B", "C"))
    assert compose(identity("A"), m) == m
    assert compose(m, identity("C")) == m


def test_compose_associative():
    f = Morphism(("A", "B"))
    g = Morphism(("B", "C"))
    h = Morphism(("C", "D"))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


# ---------------------------------------------------------------------------
# Hom-sets
# ---------------------------------------------------------------------------

def test_hom_set_chain():
    dag = underlying_graph(chain("m", ["S", "T", "C"]))
    assert hom_set(dag, "S", "C") == (Morphism(("S", "T", "C")),)
    assert hom_set(dag, "S", "S") == (identity("S"),)
    assert hom_set(dag, "C", "S") == ()


def test_hom_set_diamond_two_paths():
    ms = hom_set(DIAMOND, "A", "D")
    assert ms == (Morphism(("A", "B", "D")), Morphism(("A", "C", "D")))


def test_hom_set_sorted_lexicographically():
    ms = hom_set(DIAMOND, "A", "D")
    assert list(ms) == sorted(ms, key=lambda m: m.nodes)


def test_hom_set_unknown_node():
    with pytest.raises(ModelError, match="unknown node"):
        hom_set(DIAMOND, "A", "Q")


def test_hom_set_cap():
    with pytest.raises(CapacityError):
        hom_set(DIAMOND, "A", "D", cap=1)
    assert len(hom_set(DIAMOND, "A", "D", cap=2)) == 2


def test_hom_set_env_cap(monkeypatch):
    monkeypatch.setenv("ABSAUDIT_ENUM_CAP", "1")
    with pytest.raises(CapacityError):
        hom_set(DIAMOND, "A", "D")


def test_is_path():
    assert is_path(DIAMOND, ("A", "B", "D"))
    assert is_path(DIAMOND, ("A",))
    assert not is_path(DIAMOND, ("A", "D"))
    assert not is_path(DIAMOND, ("A", "Q"))
    assert not is_path(DIAMOND, ())


def test_all_morphisms_and_generators():
    ms = all_morphisms(DIAMOND)
    assert len(ms) == 4 + 4 + 2  # identities, edges, two long paths
    assert generators(DIAMOND) == tuple(Morphism(e) for e in DIAMOND.edges)


def test_all_morphisms_cap():
    with pytest.raises(CapacityError):
        all_morphisms(DIAMOND, cap=5)


# ---------------------------------------------------------------------------
# Oracle agreement
# ---------------------------------------------------------------------------

def test_hom_set_matches_oracle_on_random_dags():
    rng = random.Random(42)
    for _ in range(60):
        adj = random_dag(rng, rng.randint(1, 7))
        nodes = tuple(adj)
        dag = Dag(
            nodes=nodes,
            edges=tuple((u, v) for u in nodes for v in adj[u]),
        )
        for src in nodes:
            for dst in nodes:
                got = tuple(m.nodes for m in hom_set(dag, src, dst))
                want = tuple(sorted(all_paths(adj, src, dst)))
                assert got == want
                assert len(got) == path_count(adj, src, dst)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**30))
def test_hom_set_composition_closure(seed):
    """Composing any two composable morphisms lands back in the hom-set."""
    rng = random.Random(seed)
    adj = random_dag(rng, 5)
    nodes = tuple(adj)
    dag = Dag(nodes=nodes, edges=tuple((u, v) for u in nodes for v in adj[u]))
    ms = all_morphisms(dag)
    for f in ms:
        for g in ms:
            if f.target != g.source:
                continue
            whole = compose(f, g)
            assert whole in hom_set(dag, f.source, g.target)
