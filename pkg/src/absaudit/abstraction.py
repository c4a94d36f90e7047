"""Two-layer abstraction maps between finite structural causal models.

The structural layer maps the nodes of a source model onto the nodes of a
target model (a row-stochastic matrix, stored sparsely) and may carry a
partial map on the morphisms of the free categories of the two graphs.  The
distributional layer carries outcome maps: per-target-variable matrices from
the joint outcomes of that variable's preimage block, or one global matrix
from full source outcomes to full target outcomes.

Rows of the node map that are omitted leave the node unmapped; one-hot rows
make the map deterministic at that node.  Outcome rows that are omitted (or
written all-zero) leave that outcome unmapped, which makes the induced
pushforward partial.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    TOL,
    GranularityError,
    ModelError,
    RenormalizationRequiredError,
)
from .freecat import Morphism
from .scm import Distribution, Scm, ValidationReport, Value, underlying_graph
from . import freecat


class Direction(enum.Enum):
    """Which way the abstraction runs between granularity levels."""

    MICRO_TO_MACRO = "micro-to-macro"
    MACRO_TO_MICRO = "macro-to-micro"


GLOBAL = "*"  # target marker for a whole-model outcome map


@dataclass
class StructuralMap:
    """The node layer plus an optional morphism layer.

    `rows[u][x]` is the weight with which source node u maps onto target
    node x; only nonzero weights are stored, and a present row sums to one.
    `edge_map` sends source morphisms to target morphisms and may be
    partial; `None` means no morphism layer was declared at all.
    `pairing` optionally records which target node is the nominal
    counterpart of each source node (used to tell identities from
    permutations when the models use different node names).
    """

    rows: dict[str, dict[str, float]]
    edge_map: dict[Morphism, Morphism] | None = None
    pairing: dict[str, str] | None = None

    @property
    def mapped(self) -> tuple[str, ...]:
        """Source nodes with a declared row, i.e. the domain of definition."""
        return tuple(self.rows)

    def is_deterministic(self) -> bool:
        return all(
            len(row) == 1 and abs(next(iter(row.values())) - 1.0) <= TOL
            for row in self.rows.values()
        )

    def image_of(self, node: str) -> str:
        """The unique image of a deterministically mapped node."""
        row = self.rows.get(node)
        if row is None:
            raise ModelError(f"node {node!r} is unmapped")
        if len(row) != 1:
            raise ModelError(f"node {node!r} maps stochastically")
        return next(iter(row))

    def image(self) -> tuple[str, ...]:
        """Target nodes receiving nonzero weight, in first-seen order."""
        seen: list[str] = []
        for row in self.rows.values():
            for x, w in row.items():
                if w > 0.0 and x not in seen:
                    seen.append(x)
        return tuple(seen)


@dataclass
class OutcomeMap:
    """One distributional matrix.

    For a per-variable map, `target` names a target variable and `sources`
    is its preimage block in the source model (canonical order); row values
    are 1-tuples over the target variable's domain.  For the global map,
    `target` is "*", `sources` lists every source variable, `onto` lists
    every target variable, and row values are full joint target outcomes.
    """

    target: str
    sources: tuple[str, ...]
    rows: dict[tuple, dict[tuple, float]]
    onto: tuple[str, ...] = ()

    @property
    def is_global(self) -> bool:
        return self.target == GLOBAL

    def is_deterministic(self) -> bool:
        return all(
            len(row) == 1 and abs(next(iter(row.values())) - 1.0) <= TOL
            for row in self.rows.values()
            if sum(row.values()) > TOL
        )

    def mapped_rows(self) -> dict[tuple, dict[tuple, float]]:
        """Rows that actually carry mass (all-zero rows count as unmapped)."""
        return {
            key: row for key, row in self.rows.items() if sum(row.values()) > TOL
        }


@dataclass
class Abstraction:
    """A named two-layer map between two models (referenced by name)."""

    name: str
    source_ref: str
    target_ref: str
    direction: Direction
    structure: StructuralMap
    outcome_maps: list[OutcomeMap] = field(default_factory=list)

    def outcome_map_for(self, target: str) -> OutcomeMap | None:
        for om in self.outcome_maps:
            if om.target == target:
                return om
        return None

    @property
    def global_outcome_map(self) -> OutcomeMap | None:
        return self.outcome_map_for(GLOBAL)


# ---------------------------------------------------------------------------
# Block helpers
# ---------------------------------------------------------------------------

def block_domain(model: Scm, variables: Sequence[str]) -> tuple[tuple, ...]:
    """All joint outcomes of the given variables, row-major in given order."""
    domains = [model.variable(v).domain for v in variables]
    return tuple(itertools.product(*domains))


def preimage(abstraction: Abstraction, source_model: Scm, target_node: str) -> tuple[str, ...]:
    """Source nodes mapped (deterministically) onto the target node.

    Only defined for deterministic node maps; the result follows the source
    model's canonical variable order.
    """
    if not abstraction.structure.is_deterministic():
        raise ModelError("preimage requires a deterministic node map")
    rows = abstraction.structure.rows
    return tuple(
        v for v in source_model.variable_names
        if v in rows and next(iter(rows[v])) == target_node
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_abstraction(
    abstraction: Abstraction, source: Scm, target: Scm
) -> ValidationReport:
    """Check shape-level well-formedness of both layers.

    Property violations (non-surjectivity, broken functoriality, ...) are
    audit findings, not validation errors; validation only rejects maps that
    are not well-typed: unknown nodes, rows that do not normalise, morphism
    entries that are not paths, outcome blocks that do not match preimages.
    """
    report = ValidationReport()
    sm = abstraction.structure
    src_nodes = set(source.variable_names)
    tgt_nodes = set(target.variable_names)

    for u, row in sm.rows.items():
        if u not in src_nodes:
            report.add("map-unknown-source", f"node row for unknown source node {u}")
        total = 0.0
        for x, w in row.items():
            if x not in tgt_nodes:
                report.add("map-unknown-target", f"row {u} hits unknown target node {x}")
            if w < -TOL:
                report.add("map-negative", f"negative weight {w} in row {u}")
            total += w
        if abs(total - 1.0) > TOL:
            report.add("map-row-total", f"row {u} sums to {total!r}, not 1")

    if sm.pairing is not None:
        for u, x in sm.pairing.items():
            if u not in src_nodes or x not in tgt_nodes:
                report.add("pair-unknown", f"pairing {u} ~ {x} names unknown nodes")

    if sm.edge_map is not None:
        if not sm.is_deterministic():
            report.add(
                "edge-map-stochastic",
                "a morphism layer requires a deterministic node map",
            )
        src_dag = underlying_graph(source)
        tgt_dag = underlying_graph(target)
        for m, n in sm.edge_map.items():
            if not freecat.is_path(src_dag, m.nodes):
                report.add("edge-map-source", f"{m} is not a morphism of the source graph")
            if not freecat.is_path(tgt_dag, n.nodes):
                report.add("edge-map-target", f"{n} is not a morphism of the target graph")

    seen_targets: set[str] = set()
    has_global = any(om.is_global for om in abstraction.outcome_maps)
    for om in abstraction.outcome_maps:
        if om.target in seen_targets:
            report.add("outcome-duplicate", f"two outcome maps for {om.target}")
        seen_targets.add(om.target)
        if om.is_global:
            if tuple(om.sources) != source.variable_names:
                report.add(
                    "outcome-global-scope",
                    "the global outcome map must read every source variable",
                )
            if tuple(om.onto) != target.variable_names:
                report.add(
                    "outcome-global-onto",
                    "the global outcome map must write every target variable",
                )
            tgt_scope: tuple[str, ...] = target.variable_names
        else:
            if has_global:
                report.add(
                    "outcome-mixed",
                    "per-variable outcome maps cannot be mixed with a global one",
                )
            if om.target not in tgt_nodes:
                report.add(
                    "outcome-unknown-target", f"outcome map for unknown variable {om.target}"
                )
                continue
            if not sm.is_deterministic():
                report.add(
                    "outcome-stochastic-nodes",
                    f"outcome map for {om.target} needs a deterministic node map "
                    "(use a global map instead)",
                )
                continue
            block = preimage(abstraction, source, om.target)
            if tuple(om.sources) != block:
                report.add(
                    "outcome-block",
                    f"outcome map for {om.target} reads {'/'.join(om.sources) or '()'} "
                    f"but the preimage block is {'/'.join(block) or '()'}",
                )
                continue
            tgt_scope = (om.target,)

        valid_keys = set(block_domain(source, om.sources))
        tgt_outcomes = set(block_domain(target, tgt_scope))
        for key, row in om.rows.items():
            if key not in valid_keys:
                report.add(
                    "outcome-key", f"outcome row {key!r} for {om.target} is out of range"
                )
            total = 0.0
            for val, w in row.items():
                if val not in tgt_outcomes:
                    report.add(
                        "outcome-range",
                        f"outcome row {key!r} for {om.target} hits {val!r} "
                        "outside the target domain",
                    )
                if w < -TOL:
                    report.add(
                        "outcome-negative", f"negative weight {w} in outcome row {key!r}"
                    )
                total += w
            if abs(total - 1.0) > TOL and abs(total) > TOL:
                report.add(
                    "outcome-row-total",
                    f"outcome row {key!r} for {om.target} sums to {total!r} "
                    "(must be 1, or 0 for an unmapped outcome)",
                )
    return report


# ---------------------------------------------------------------------------
# Pushforward
# ---------------------------------------------------------------------------

def pushforward(
    abstraction: Abstraction,
    dist: Distribution,
    source: Scm,
    target: Scm,
    renormalize: bool = False,
) -> Distribution:
    """Push a source joint distribution through the distributional layer.

    With per-variable outcome maps, each target variable reads the marginal
    pattern of its preimage block and the results multiply; unmapped source
    variables are marginalised out.  With a global map the full joint is
    rewritten row by row.  Mass landing on unmapped outcome rows is lost;
    that raises an error unless `renormalize` is set, in which case the
    remaining mass is scaled back to one.
    """
    if dist.scope != source.variable_names:
        raise ModelError("the distribution scope must match the source model")
    if not abstraction.outcome_maps:
        raise ModelError(
            f"abstraction {abstraction.name!r} has no distributional layer"
        )

    out_scope = target.variable_names
    out_domains = tuple(v.domain for v in target.variables)
    probs: dict[tuple, float] = {}

    gom = abstraction.global_outcome_map
    if gom is not None:
        rows = gom.mapped_rows()
        for outcome, p in dist.probs.items():
            if p == 0.0:
                continue
            row = rows.get(outcome)
            if row is None:
                continue  # unmapped outcome: mass is lost
            for tgt_outcome, w in row.items():
                if w == 0.0:
                    continue
                probs[tgt_outcome] = probs.get(tgt_outcome, 0.0) + p * w
    else:
        maps: list[OutcomeMap] = []
        for name in out_scope:
            om = abstraction.outcome_map_for(name)
            if om is None:
                raise ModelError(f"no outcome map for target variable {name}")
            maps.append(om)
        src_index = {name: i for i, name in enumerate(source.variable_names)}
        picks = [tuple(src_index[s] for s in om.sources) for om in maps]
        for outcome, p in dist.probs.items():
            if p == 0.0:
                continue
            partial: dict[tuple, float] = {(): p}
            dead = False
            for om, idxs in zip(maps, picks):
                key = tuple(outcome[i] for i in idxs)
                row = om.rows.get(key)
                if row is None or sum(row.values()) <= TOL:
                    dead = True
                    break
                nxt: dict[tuple, float] = {}
                for prefix, mass in partial.items():
                    for val, w in row.items():
                        if w == 0.0:
                            continue
                        k = prefix + val
                        nxt[k] = nxt.get(k, 0.0) + mass * w
                partial = nxt
            if dead:
                continue
            for k, mass in partial.items():
                probs[k] = probs.get(k, 0.0) + mass

    total = sum(probs.values())
    if abs(total - dist.total) > TOL:
        if not renormalize:
            raise RenormalizationRequiredError(
                "renormalization required: the outcome layer is partial and "
                f"drops probability mass ({dist.total - total:.12g} lost)"
            )
        if total <= TOL:
            raise ModelError("the pushforward has no mass left to renormalize")
        probs = {k: v / total for k, v in probs.items()}
    return Distribution(scope=out_scope, domains=out_domains, probs=probs)


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def compose_abstractions(
    first: Abstraction,
    second: Abstraction,
    lower: Scm,
    mid: Scm,
    upper: Scm,
    name: str | None = None,
) -> Abstraction:
    """Compose two abstractions sharing a middle model (first, then second).

    Node rows compose by matrix product; the morphism layer composes where
    both layers are defined; per-variable outcome maps compose block by
    block when both legs are deterministic on nodes.  Directions must agree.
    """
    if first.target_ref != second.source_ref:
        raise ModelError(
            f"cannot compose {first.name!r} with {second.name!r}: "
            "the middle model differs"
        )
    if first.direction != second.direction:
        raise ModelError("cannot compose abstractions running opposite ways")

    rows: dict[str, dict[str, float]] = {}
    for u, row in first.structure.rows.items():
        out: dict[str, float] = {}
        defined = True
        for m, w in row.items():
            mid_row = second.structure.rows.get(m)
            if mid_row is None:
                defined = False
                break
            for x, w2 in mid_row.items():
                out[x] = out.get(x, 0.0) + w * w2
        if defined and out:
            rows[u] = out

    edge_map: dict[Morphism, Morphism] | None = None
    if first.structure.edge_map is not None and second.structure.edge_map is not None:
        edge_map = {}
        for m, n in first.structure.edge_map.items():
            k = second.structure.edge_map.get(n)
            if k is not None:
                edge_map[m] = k

    pairing: dict[str, str] | None = None
    if first.structure.pairing is not None and second.structure.pairing is not None:
        pairing = {}
        for u, x in first.structure.pairing.items():
            y = second.structure.pairing.get(x)
            if y is not None:
                pairing[u] = y

    composed = Abstraction(
        name=name or f"{second.name}*{first.name}",
        source_ref=first.source_ref,
        target_ref=second.target_ref,
        direction=first.direction,
        structure=StructuralMap(rows=rows, edge_map=edge_map, pairing=pairing),
        outcome_maps=[],
    )

    if first.outcome_maps and second.outcome_maps:
        if first.global_outcome_map is not None or second.global_outcome_map is not None:
            raise GranularityError(
                "outcome layers compose per variable; a global outcome map "
                "has no per-variable blocks to compose through"
            )
        for z in upper.variable_names:
            om2 = second.outcome_map_for(z)
            if om2 is None:
                continue
            legs = [first.outcome_map_for(y) for y in om2.sources]
            if any(leg is None for leg in legs):
                continue
            srcs: tuple[str, ...] = tuple(
                s for leg in legs for s in leg.sources  # type: ignore[union-attr]
            )
            srcs = tuple(v for v in lower.variable_names if v in srcs)
            offsets = []
            for leg in legs:
                offsets.append(tuple(srcs.index(s) for s in leg.sources))  # type: ignore[union-attr]
            out_rows: dict[tuple, dict[tuple, float]] = {}
            for key in block_domain(lower, srcs):
                partial: dict[tuple, float] = {(): 1.0}
                dead = False
                for leg, idxs in zip(legs, offsets):
                    row = leg.rows.get(tuple(key[i] for i in idxs))  # type: ignore[union-attr]
                    if row is None or sum(row.values()) <= TOL:
                        dead = True
                        break
                    nxt: dict[tuple, float] = {}
                    for prefix, mass in partial.items():
                        for val, w in row.items():
                            if w == 0.0:
                                continue
                            nxt[prefix + val] = nxt.get(prefix + val, 0.0) + mass * w
                    partial = nxt
                if dead:
                    continue
                out: dict[tuple, float] = {}
                for mid_key, mass in partial.items():
                    row2 = om2.rows.get(mid_key)
                    if row2 is None or sum(row2.values()) <= TOL:
                        continue
                    for val, w in row2.items():
                        if w == 0.0:
                            continue
                        out[val] = out.get(val, 0.0) + mass * w
                if out:
                    out_rows[key] = out
            composed.outcome_maps.append(
                OutcomeMap(target=z, sources=srcs, rows=out_rows)
            )
    return composed
