"""Independent brute-force oracles used to cross-check the library.

Every function here is deliberately written against plain dicts/tuples with a
different algorithm than the library uses, so agreement between the two is
meaningful.  The oracles are intentionally slow and simple.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence


# ---------------------------------------------------------------------------
# Directed-path enumeration (free category oracle)
# ---------------------------------------------------------------------------

def all_paths(adj: Mapping[str, Sequence[str]], src: str, dst: str) -> list[tuple[str, ...]]:
    """All directed paths from src to dst as node tuples, via plain recursion.

    Includes the length-0 path (src,) when src == dst.  The graph must be
    acyclic; no cycle guard is used.
    """
    if src == dst:
        return [(src,)]
    found: list[tuple[str, ...]] = []

    def walk(node: str, trail: tuple[str, ...]) -> None:
        for nxt in adj.get(node, ()):
            if nxt == dst:
                found.append(trail + (nxt,))
            else:
                walk(nxt, trail + (nxt,))

    walk(src, (src,))
    return sorted(found)


def path_count(adj: Mapping[str, Sequence[str]], src: str, dst: str) -> int:
    """Number of directed paths src->dst by the adjacency-power recurrence."""
    nodes = sorted(set(adj) | {v for vs in adj.values() for v in vs})
    index = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)
    counts = [[0] * n for _ in range(n)]
    for u, vs in adj.items():
        for v in vs:
            counts[index[u]][index[v]] += 1
    # total[i][j] = sum over k >= 1 of (#walks of length k); DAG => finite.
    total = [[0] * n for _ in range(n)]
    power = [row[:] for row in counts]
    for _ in range(n):
        for i in range(n):
            for j in range(n):
                total[i][j] += power[i][j]
        power = [
            [sum(power[i][k] * counts[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
    base = 1 if src == dst else 0
    return base + total[index[src]][index[dst]]


# ---------------------------------------------------------------------------
# Joint distribution by exhaustive exogenous enumeration (plain-data SCM)
# ---------------------------------------------------------------------------
# A "plain SCM" here is a dict:
#   variables: ordered list of names
#   domains:   name -> list of values (endogenous)
#   parents:   name -> list of names
#   exo_of:    name -> exogenous name
#   exo_domains: exo name -> list of values
#   exo_dist:  dict[tuple of exo values in exo-declaration order] -> prob
#   exo_order: ordered list of exogenous names
#   mech:      name -> dict[(parent values tuple, exo value)] -> value

def plain_joint(scm: dict) -> dict[tuple, float]:
    """Joint endogenous distribution by brute-force exogenous enumeration."""
    order = toposort(scm)
    joint: dict[tuple, float] = {}
    exo_values = [scm["exo_domains"][u] for u in scm["exo_order"]]
    for combo in itertools.product(*exo_values):
        p = scm["exo_dist"].get(tuple(combo), 0.0)
        if p == 0.0:
            continue
        u_val = dict(zip(scm["exo_order"], combo))
        x_val: dict[str, object] = {}
        for v in order:
            pa = tuple(x_val[q] for q in scm["parents"][v])
            x_val[v] = scm["mech"][v][(pa, u_val[scm["exo_of"][v]])]
        key = tuple(x_val[v] for v in scm["variables"])
        joint[key] = joint.get(key, 0.0) + p
    return joint


def toposort(scm: dict) -> list[str]:
    """Topological order by repeated extraction of parent-satisfied nodes."""
    remaining = list(scm["variables"])
    done: list[str] = []
    while remaining:
        for v in remaining:
            if all(p in done for p in scm["parents"][v]):
                done.append(v)
                remaining.remove(v)
                break
        else:
            raise ValueError("cycle")
    return done


def plain_joint_via_kernels(scm: dict) -> dict[tuple, float]:
    """Joint distribution as a product of per-variable Markov kernels.

    Only valid when the exogenous variables are jointly independent; the
    caller is responsible for that.  Each kernel row is built from the
    marginal of the variable's own exogenous term.
    """
    # Marginal distribution of each exogenous variable.
    exo_marg: dict[str, dict[object, float]] = {u: {} for u in scm["exo_order"]}
    for combo, p in scm["exo_dist"].items():
        for u, val in zip(scm["exo_order"], combo):
            exo_marg[u][val] = exo_marg[u].get(val, 0.0) + p

    order = toposort(scm)
    joint: dict[tuple, float] = {}
    domains = [scm["domains"][v] for v in scm["variables"]]
    for combo in itertools.product(*domains):
        x_val = dict(zip(scm["variables"], combo))
        p = 1.0
        for v in order:
            pa = tuple(x_val[q] for q in scm["parents"][v])
            u = scm["exo_of"][v]
            k = sum(
                w
                for uval, w in exo_marg[u].items()
                if scm["mech"][v][(pa, uval)] == x_val[v]
            )
            p *= k
            if p == 0.0:
                break
        if p != 0.0:
            joint[combo] = p
    return joint


# ---------------------------------------------------------------------------
# Pushforward by preimage summation
# ---------------------------------------------------------------------------

def pushforward_by_preimage(
    dist: Mapping[tuple, float], mapping: Mapping[tuple, tuple]
) -> dict[tuple, float]:
    """Pushforward of a distribution along a deterministic outcome map.

    `mapping` sends each source outcome to its target outcome; the result
    weight of a target outcome is the summed weight of its preimage.
    """
    out: dict[tuple, float] = {}
    for x, p in dist.items():
        y = mapping[x]
        out[y] = out.get(y, 0.0) + p
    return out
