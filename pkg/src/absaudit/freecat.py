"""The free category generated by a directed acyclic graph.

Objects are the nodes; morphisms are directed paths, recorded as tuples of
visited nodes.  A length-one tuple ``(n,)`` is the identity on ``n``; the
tuple ``(a, b, c)`` is the composite of generator edges ``a->b`` and
``b->c``.  Composition is path concatenation with the shared endpoint
written once.  Because the graph is acyclic, every hom-set is finite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DEFAULT_HOM_CAP, CapacityError, ModelError, enum_cap
from .scm import Dag


@dataclass(frozen=True)
class Morphism:
    """A directed path; identities are single-node paths."""

    nodes: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ModelError("a morphism must visit at least one node")

    @property
    def source(self) -> str:
        return self.nodes[0]

    @property
    def target(self) -> str:
        return self.nodes[-1]

    @property
    def is_identity(self) -> bool:
        return len(self.nodes) == 1

    @property
    def length(self) -> int:
        """Number of generating edges used."""
        return len(self.nodes) - 1

    @property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.nodes, self.nodes[1:]))

    def __str__(self) -> str:
        return "^".join(self.nodes)


def identity(node: str) -> Morphism:
    return Morphism((node,))


def compose(first: Morphism, second: Morphism) -> Morphism:
    """Compose in diagram order: ``first`` then ``second``."""
    if first.target != second.source:
        raise ModelError(
            f"cannot compose {first} with {second}: endpoint mismatch"
        )
    return Morphism(first.nodes + second.nodes[1:])


def is_path(dag: Dag, nodes: Sequence[str]) -> bool:
    """True when the node sequence is a morphism of the free category."""
    if not nodes or any(n not in dag.nodes for n in nodes):
        return False
    return all(dag.has_edge(u, v) for u, v in zip(nodes, nodes[1:]))


def hom_set(dag: Dag, source: str, target: str, cap: int | None = None) -> tuple[Morphism, ...]:
    """All morphisms from source to target, sorted lexicographically.

    The identity is included when source == target.  Raises CapacityError
    when the hom-set exceeds the enumeration cap (default 10^5,
    env-overridable).
    """
    if source not in dag.nodes:
        raise ModelError(f"unknown node {source!r}")
    if target not in dag.nodes:
        raise ModelError(f"unknown node {target!r}")
    limit = cap if cap is not None else enum_cap(DEFAULT_HOM_CAP)
    found: list[tuple[str, ...]] = []

    def walk(path: tuple[str, ...]) -> None:
        here = path[-1]
        if here == target:
            found.append(path)
            if len(found) > limit:
                raise CapacityError(
                    f"hom-set from {source} to {target} exceeds the "
                    f"enumeration cap of {limit}"
                )
        for nxt in dag.successors(here):
            walk(path + (nxt,))

    walk((source,))
    return tuple(Morphism(p) for p in sorted(found))


def all_morphisms(dag: Dag, cap: int | None = None) -> tuple[Morphism, ...]:
    """Every morphism of the free category, ordered by (source, target) pair.

    Pairs follow the node declaration order; within a pair the hom-set order
    is lexicographic.  A shared cap applies to the total count.
    """
    limit = cap if cap is not None else enum_cap(DEFAULT_HOM_CAP)
    out: list[Morphism] = []
    for source, target in itertools.product(dag.nodes, dag.nodes):
        for m in hom_set(dag, source, target, cap=limit):
            out.append(m)
            if len(out) > limit:
                raise CapacityError(
                    f"the free category has more than {limit} morphisms"
                )
    return tuple(out)


def generators(dag: Dag) -> tuple[Morphism, ...]:
    """The generating morphisms: one per edge, in declaration order."""
    return tuple(Morphism((u, v)) for u, v in dag.edges)
