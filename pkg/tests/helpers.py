"""Shared builders for the test suite.

Everything here constructs library objects from terse descriptions so the
tests stay readable; nothing here duplicates library logic.
"""

from __future__ import annotations

import itertools
import random
import zlib

from absaudit.abstraction import Abstraction, Direction, OutcomeMap, StructuralMap
from absaudit.freecat import Morphism
from absaudit.scm import Exogenous, Scm, Variable

BIN = ("0", "1")
U2 = (("0", 0.5), ("1", 0.5))


def xor(parents: tuple[str, ...], u: str) -> str:
    return str((sum(int(p) for p in parents) + int(u)) % 2)


def model(name, spec, dists) -> Scm:
    """Build a model from (variable, domain, parents, mechanism) rows.

    `dists` maps each variable to a sequence of (noise value, probability);
    noise terms are independent and named U_<variable>.
    """
    domains = {vname: tuple(domain) for vname, domain, _, _ in spec}
    variables, exogenous, mechanisms = [], [], {}
    for vname, domain, parents, mech in spec:
        exo_name = f"U_{vname}"
        variables.append(Variable(vname, tuple(domain), tuple(parents), exo_name))
        exo_domain = tuple(v for v, _ in dists[vname])
        exogenous.append(Exogenous(exo_name, exo_domain, vname))
        table = {}
        for combo in itertools.product(*(domains[p] for p in parents)):
            for u in exo_domain:
                table[(*combo, u)] = mech(combo, u)
        mechanisms[vname] = table
    exo_table = {}
    for picks in itertools.product(*(dists[v.name] for v in variables)):
        prob = 1.0
        for _, p in picks:
            prob *= p
        exo_table[tuple(v for v, _ in picks)] = prob
    return Scm(name, variables, exogenous, mechanisms, exo_table)


def chain(name: str, nodes: list[str]) -> Scm:
    spec, prev = [], None
    for n in nodes:
        spec.append((n, BIN, (prev,) if prev else (), xor))
        prev = n
    return model(name, spec, {n: U2 for n in nodes})


def M(*nodes: str) -> Morphism:
    return Morphism(tuple(nodes))


def det_rows(mapping: dict[str, str]) -> dict[str, dict[str, float]]:
    return {u: {x: 1.0} for u, x in mapping.items()}


def det_outcomes(target: str, sources, mapping: dict[tuple, tuple]) -> OutcomeMap:
    return OutcomeMap(
        target=target,
        sources=tuple(sources),
        rows={key: {val: 1.0} for key, val in mapping.items()},
    )


def abstraction(
    name, src, tgt, rows, *, edges=None, pairs=None, outcomes=(),
    direction=Direction.MICRO_TO_MACRO,
) -> Abstraction:
    if rows and isinstance(next(iter(rows.values())), str):
        rows = det_rows(rows)
    return Abstraction(
        name=name,
        source_ref=src.name if isinstance(src, Scm) else src,
        target_ref=tgt.name if isinstance(tgt, Scm) else tgt,
        direction=direction,
        structure=StructuralMap(rows=rows, edge_map=edges, pairing=pairs),
        outcome_maps=list(outcomes),
    )


def random_dag(rng: random.Random, n: int) -> dict[str, list[str]]:
    """Random DAG as an adjacency dict over nodes n0..n{n-1} (edges respect
    the index order, so acyclicity holds by construction)."""
    names = [f"n{i}" for i in range(n)]
    adj: dict[str, list[str]] = {name: [] for name in names}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                adj[names[i]].append(names[j])
    return adj


def dag_model(adj: dict[str, list[str]]) -> Scm:
    """Wrap an adjacency dict as a binary model (mechanisms are parity)."""
    parents: dict[str, list[str]] = {v: [] for v in adj}
    for u, vs in adj.items():
        for v in vs:
            parents[v].append(u)
    spec = [(v, BIN, tuple(parents[v]), xor) for v in adj]
    return model("g", spec, {v: U2 for v in adj})


def random_model(rng: random.Random, max_vars: int = 4, max_dom: int = 3) -> Scm:
    """Random small model with independent noise and random total mechanisms."""
    n = rng.randint(1, max_vars)
    names = [f"V{i}" for i in range(n)]
    domains = {
        v: tuple(str(k) for k in range(rng.randint(2, max_dom))) for v in names
    }
    parents = {
        v: tuple(p for p in names[:i] if rng.random() < 0.5)
        for i, v in enumerate(names)
    }
    dists = {}
    for v in names:
        size = rng.randint(2, max_dom)
        weights = [rng.randint(1, 8) for _ in range(size)]
        total = sum(weights)
        dists[v] = tuple((str(k), w / total) for k, w in enumerate(weights))

    def mech_for(v):
        dom = domains[v]
        salt = rng.randint(0, 10**9)

        def mech(pvals, u):
            local = random.Random(
                zlib.crc32(repr((salt, v, pvals, u)).encode())
            )
            return local.choice(dom)

        return mech

    spec = [(v, domains[v], parents[v], mech_for(v)) for v in names]
    return model("rnd", spec, dists)
