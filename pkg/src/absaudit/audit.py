"""Property audits for two-layer abstraction maps.

Verdicts are tri-valued: True (holds), False (violated), None (not
applicable / not determined).  The node layer is audited as a map of sets;
the morphism layer as a functor from the full subcategory spanned by the
mapped nodes; the distributional layer as maps between outcome spaces.

Two flavours of edge-map injectivity are reported side by side:

* ``faithful`` pools every morphism whose endpoints map onto a given ordered
  pair of target nodes and demands that no two of them share an image;
* ``faithful_parallel`` demands injectivity separately on each source
  hom-set (the hom-set-wise reading).

The pooled reading is the stricter one: a chain coarsening that sends
several identities onto the same target identity fails it while passing the
hom-set-wise one.  ``fully_faithful`` combines fullness with the pooled
reading; the admissibility matrices combine fullness with the hom-set-wise
reading (see taxonomy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .abstraction import Abstraction, Direction, OutcomeMap, block_domain
from .errors import TOL
from .freecat import Morphism, compose, hom_set, identity
from .scm import Scm, underlying_graph

Verdict = Optional[bool]


def tri_and(*verdicts: Verdict) -> Verdict:
    """Three-valued conjunction: False dominates, then None."""
    if any(v is False for v in verdicts):
        return False
    if any(v is None for v in verdicts):
        return None
    return True


def _fmt(verdict: Verdict) -> str:
    return {True: "yes", False: "no", None: "n/a"}[verdict]


# ---------------------------------------------------------------------------
# Node layer
# ---------------------------------------------------------------------------

@dataclass
class NodeAudit:
    functional: bool
    deterministic: bool
    surjective: bool
    injective: Verdict
    bijective: Verdict

    def to_dict(self) -> dict:
        return {
            "functional": self.functional,
            "deterministic": self.deterministic,
            "surjective": self.surjective,
            "injective": self.injective,
            "bijective": self.bijective,
        }


def audit_node_map(abstraction: Abstraction, source: Scm, target: Scm) -> NodeAudit:
    sm = abstraction.structure
    functional = set(sm.mapped) == set(source.variable_names)
    deterministic = sm.is_deterministic()
    surjective = set(sm.image()) == set(target.variable_names)
    injective: Verdict
    if not deterministic:
        injective = None
    else:
        images = [sm.image_of(u) for u in sm.mapped]
        injective = len(set(images)) == len(images)
    bijective: Verdict
    if not functional:
        bijective = False
    else:
        bijective = tri_and(surjective, injective)
    return NodeAudit(
        functional=functional,
        deterministic=deterministic,
        surjective=surjective,
        injective=injective,
        bijective=bijective,
    )


# ---------------------------------------------------------------------------
# Morphism layer
# ---------------------------------------------------------------------------

@dataclass
class FunctorAudit:
    declared: bool
    functorial: Verdict
    full: Verdict
    faithful: Verdict
    faithful_parallel: Verdict
    fully_faithful: Verdict

    def to_dict(self) -> dict:
        return {
            "declared": self.declared,
            "functorial": self.functorial,
            "full": self.full,
            "faithful": self.faithful,
            "faithful_parallel": self.faithful_parallel,
            "fully_faithful": self.fully_faithful,
        }


def audit_functor(abstraction: Abstraction, source: Scm, target: Scm) -> FunctorAudit:
    sm = abstraction.structure
    if sm.edge_map is None or not sm.is_deterministic():
        return FunctorAudit(
            declared=sm.edge_map is not None,
            functorial=None,
            full=None,
            faithful=None,
            faithful_parallel=None,
            fully_faithful=None,
        )

    src_dag = underlying_graph(source)
    tgt_dag = underlying_graph(target)
    mapped = [u for u in source.variable_names if u in sm.rows]
    pi = {u: sm.image_of(u) for u in mapped}
    edge_map = sm.edge_map

    # Every morphism between mapped nodes (it may pass through unmapped
    # ones) belongs to the audited subcategory.
    domain: list[Morphism] = []
    for u in mapped:
        for v in mapped:
            domain.extend(hom_set(src_dag, u, v))

    functorial: Verdict = True
    for m in domain:
        if m not in edge_map:
            functorial = False
            break
    if functorial:
        for m, n in edge_map.items():
            if m.source not in pi or m.target not in pi:
                functorial = False
                break
            if n.source != pi[m.source] or n.target != pi[m.target]:
                functorial = False
                break
        else:
            for u in mapped:
                if edge_map.get(identity(u)) != identity(pi[u]):
                    functorial = False
                    break
    if functorial:
        for m in domain:
            for n in domain:
                if m.target != n.source:
                    continue
                whole = compose(m, n)
                if whole in edge_map and edge_map[whole] != compose(
                    edge_map[m], edge_map[n]
                ):
                    functorial = False
                    break
            if not functorial:
                break

    # Coverage and collision verdicts are computed over the declared
    # entries whose endpoints are mapped, independently of totality.
    entries = [
        (m, n)
        for m, n in edge_map.items()
        if m.source in pi and m.target in pi
    ]

    image_nodes = sorted(set(pi.values()))
    full: Verdict = True
    for s in image_nodes:
        for t in image_nodes:
            targets = set(hom_set(tgt_dag, s, t))
            hit = {n for m, n in entries if pi[m.source] == s and pi[m.target] == t}
            if not targets <= hit:
                full = False

    faithful: Verdict = True
    for s in image_nodes:
        for t in image_nodes:
            group = [n for m, n in entries if pi[m.source] == s and pi[m.target] == t]
            if len(set(group)) != len(group):
                faithful = False

    faithful_parallel: Verdict = True
    for u in mapped:
        for v in mapped:
            group = [n for m, n in entries if m.source == u and m.target == v]
            if len(set(group)) != len(group):
                faithful_parallel = False

    return FunctorAudit(
        declared=True,
        functorial=functorial,
        full=full,
        faithful=faithful,
        faithful_parallel=faithful_parallel,
        fully_faithful=tri_and(full, faithful),
    )


# ---------------------------------------------------------------------------
# Distributional layer
# ---------------------------------------------------------------------------

@dataclass
class OutcomeAudit:
    target: str
    functional: bool
    deterministic: bool
    surjective: bool
    injective: Verdict
    bijective: Verdict

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "functional": self.functional,
            "deterministic": self.deterministic,
            "surjective": self.surjective,
            "injective": self.injective,
            "bijective": self.bijective,
        }


def audit_outcome_map(om: OutcomeMap, source: Scm, target: Scm) -> OutcomeAudit:
    universe = block_domain(source, om.sources)
    tgt_scope = target.variable_names if om.is_global else (om.target,)
    tgt_universe = block_domain(target, tgt_scope)
    rows = om.mapped_rows()

    functional = all(key in rows for key in universe)
    deterministic = om.is_deterministic()
    hit = {
        val
        for row in rows.values()
        for val, w in row.items()
        if w > TOL
    }
    surjective = set(tgt_universe) <= hit
    injective: Verdict
    if not deterministic:
        injective = None
    else:
        images = [next(iter(row)) for row in rows.values()]
        injective = len(set(images)) == len(images)
    bijective: Verdict
    if not functional:
        bijective = False
    else:
        bijective = tri_and(surjective, injective)
    return OutcomeAudit(
        target=om.target,
        functional=functional,
        deterministic=deterministic,
        surjective=surjective,
        injective=injective,
        bijective=bijective,
    )


def summarize_outcomes(audits: list[OutcomeAudit]) -> OutcomeAudit | None:
    """Conjunction of the per-map verdicts (None when no layer is present)."""
    if not audits:
        return None
    return OutcomeAudit(
        target="(all)",
        functional=all(a.functional for a in audits),
        deterministic=all(a.deterministic for a in audits),
        surjective=all(a.surjective for a in audits),
        injective=tri_and(*(a.injective for a in audits)),
        bijective=tri_and(*(a.bijective for a in audits)),
    )


# ---------------------------------------------------------------------------
# Modalities and derived invertibility
# ---------------------------------------------------------------------------

@dataclass
class ModalityAudit:
    non_deterministic: bool
    macro_to_micro: bool

    def to_dict(self) -> dict:
        return {
            "non_deterministic": self.non_deterministic,
            "macro_to_micro": self.macro_to_micro,
        }


def audit_modalities(abstraction: Abstraction) -> ModalityAudit:
    stochastic_nodes = not abstraction.structure.is_deterministic()
    stochastic_outcomes = any(
        not om.is_deterministic() for om in abstraction.outcome_maps
    )
    return ModalityAudit(
        non_deterministic=stochastic_nodes or stochastic_outcomes,
        macro_to_micro=abstraction.direction is Direction.MACRO_TO_MICRO,
    )


@dataclass
class InvertibilityAudit:
    perfect_node: Verdict
    set_node: Verdict
    perfect_edge: Verdict
    set_edge: Verdict

    def to_dict(self) -> dict:
        return {
            "perfect_node": self.perfect_node,
            "set_node": self.set_node,
            "perfect_edge": self.perfect_edge,
            "set_edge": self.set_edge,
        }


def derive_invertibility(node: NodeAudit, functor: FunctorAudit) -> InvertibilityAudit:
    return InvertibilityAudit(
        perfect_node=node.bijective,
        set_node=node.surjective,
        perfect_edge=functor.fully_faithful,
        set_edge=functor.full,
    )


# ---------------------------------------------------------------------------
# Whole-abstraction profile
# ---------------------------------------------------------------------------

@dataclass
class PropertyProfile:
    abstraction: str
    node: NodeAudit
    functor: FunctorAudit
    outcomes: list[OutcomeAudit]
    outcome_summary: OutcomeAudit | None
    modalities: ModalityAudit
    invertibility: InvertibilityAudit

    def flat(self) -> dict[str, Verdict]:
        """Every verdict under one addressable name (for --require lookups)."""
        out: dict[str, Verdict] = {
            "functional": self.node.functional,
            "deterministic": self.node.deterministic,
            "surjective": self.node.surjective,
            "injective": self.node.injective,
            "bijective": self.node.bijective,
            "functorial": self.functor.functorial,
            "full": self.functor.full,
            "faithful": self.functor.faithful,
            "faithful-parallel": self.functor.faithful_parallel,
            "fully-faithful": self.functor.fully_faithful,
            "non-deterministic": self.modalities.non_deterministic,
            "macro-to-micro": self.modalities.macro_to_micro,
            "perfect-node-invertible": self.invertibility.perfect_node,
            "set-node-invertible": self.invertibility.set_node,
            "perfect-edge-invertible": self.invertibility.perfect_edge,
            "set-edge-invertible": self.invertibility.set_edge,
        }
        if self.outcome_summary is not None:
            s = self.outcome_summary
            out.update(
                {
                    "outcome-functional": s.functional,
                    "outcome-deterministic": s.deterministic,
                    "outcome-surjective": s.surjective,
                    "outcome-injective": s.injective,
                    "outcome-bijective": s.bijective,
                }
            )
        else:
            out.update(
                {
                    "outcome-functional": None,
                    "outcome-deterministic": None,
                    "outcome-surjective": None,
                    "outcome-injective": None,
                    "outcome-bijective": None,
                }
            )
        return out

    def to_dict(self) -> dict:
        return {
            "abstraction": self.abstraction,
            "node": self.node.to_dict(),
            "functor": self.functor.to_dict(),
            "outcomes": [a.to_dict() for a in self.outcomes],
            "outcome_summary": (
                self.outcome_summary.to_dict() if self.outcome_summary else None
            ),
            "modalities": self.modalities.to_dict(),
            "invertibility": self.invertibility.to_dict(),
        }

    def to_text(self) -> str:
        lines = [f"audit of {self.abstraction}"]
        lines.append("  node layer:")
        for key in ("functional", "deterministic", "surjective", "injective", "bijective"):
            lines.append(f"    {key:<18} {_fmt(getattr(self.node, key))}")
        lines.append("  morphism layer:")
        if not self.functor.declared:
            lines.append("    (no edge map declared)")
        for key in (
            "functorial",
            "full",
            "faithful",
            "faithful_parallel",
            "fully_faithful",
        ):
            label = key.replace("_", "-")
            lines.append(f"    {label:<18} {_fmt(getattr(self.functor, key))}")
        lines.append("  outcome layer:")
        if not self.outcomes:
            lines.append("    (no outcome maps declared)")
        for a in self.outcomes + (
            [self.outcome_summary] if self.outcome_summary and len(self.outcomes) > 1 else []
        ):
            lines.append(f"    map onto {a.target}:")
            for key in ("functional", "deterministic", "surjective", "injective", "bijective"):
                lines.append(f"      {key:<16} {_fmt(getattr(a, key))}")
        lines.append("  modalities:")
        lines.append(f"    non-deterministic  {_fmt(self.modalities.non_deterministic)}")
        lines.append(f"    macro-to-micro     {_fmt(self.modalities.macro_to_micro)}")
        lines.append("  invertibility:")
        for key in ("perfect_node", "set_node", "perfect_edge", "set_edge"):
            label = key.replace("_", "-")
            lines.append(f"    {label:<18} {_fmt(getattr(self.invertibility, key))}")
        return "\n".join(lines)


def audit_abstraction(abstraction: Abstraction, source: Scm, target: Scm) -> PropertyProfile:
    node = audit_node_map(abstraction, source, target)
    functor = audit_functor(abstraction, source, target)
    outcome_audits = [
        audit_outcome_map(om, source, target) for om in abstraction.outcome_maps
    ]
    return PropertyProfile(
        abstraction=abstraction.name,
        node=node,
        functor=functor,
        outcomes=outcome_audits,
        outcome_summary=summarize_outcomes(outcome_audits),
        modalities=audit_modalities(abstraction),
        invertibility=derive_invertibility(node, functor),
    )
