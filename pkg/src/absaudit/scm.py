"""Finite structural causal models over discrete domains.

A model is a tuple of endogenous variables, exogenous variables, total
mechanism tables and a joint exogenous probability table.  Design choices:

* every endogenous variable has exactly one exogenous variable attached;
* exogenous variables need not be independent — their joint distribution is
  an explicit table;
* all domains are finite and explicit, so the joint endogenous distribution
  can be computed by exhaustive enumeration of exogenous assignments;
* the canonical variable order is declaration order, and joint tables are
  indexed row-major over that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    TOL,
    DEFAULT_EXO_CAP,
    CapacityError,
    KernelUndefinedError,
    ModelError,
    enum_cap,
)

Value = object  # outcome labels: strings or small integers


@dataclass(frozen=True)
class Variable:
    """An endogenous variable: name, ordered finite domain, parents, exo term."""

    name: str
    domain: tuple[Value, ...]
    parents: tuple[str, ...]
    exogenous: str


@dataclass(frozen=True)
class Exogenous:
    """An exogenous variable attached to one endogenous variable."""

    name: str
    domain: tuple[Value, ...]
    endogenous: str


@dataclass
class Scm:
    """A finite structural causal model.

    `mechanisms[v]` maps (parent values in declared parent order) + (exogenous
    value) — one flat tuple — to the produced value.  `exo_table` is sparse:
    missing joint exogenous assignments have probability zero.
    """

    name: str
    variables: list[Variable]
    exogenous: list[Exogenous]
    mechanisms: dict[str, dict[tuple, Value]]
    exo_table: dict[tuple, float]

    # -- lookups ----------------------------------------------------------

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise ModelError(f"unknown variable {name!r} in model {self.name!r}")

    def exogenous_variable(self, name: str) -> Exogenous:
        for u in self.exogenous:
            if u.name == name:
                return u
        raise ModelError(f"unknown exogenous variable {name!r} in model {self.name!r}")

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def exogenous_names(self) -> tuple[str, ...]:
        return tuple(u.name for u in self.exogenous)

    def domain_of(self, name: str) -> tuple[Value, ...]:
        return self.variable(name).domain


@dataclass(frozen=True)
class Dag:
    """A directed acyclic graph with a fixed node order."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def successors(self, node: str) -> tuple[str, ...]:
        return tuple(v for (u, v) in self.edges if u == node)

    def predecessors(self, node: str) -> tuple[str, ...]:
        return tuple(u for (u, v) in self.edges if v == node)

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges


@dataclass(frozen=True)
class ValidationIssue:
    """One validation finding: a stable code plus a human-readable message."""

    code: str
    message: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    """The outcome of validating a model or an abstraction."""

    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, code: str, message: str) -> None:
        self.issues.append(ValidationIssue(code, message))


@dataclass
class Distribution:
    """A probability table over a tuple of variables (canonical order).

    `probs` is sparse over joint outcomes; missing outcomes have weight zero.
    """

    scope: tuple[str, ...]
    domains: tuple[tuple[Value, ...], ...]
    probs: dict[tuple, float]

    def outcomes(self) -> Iterator[tuple]:
        """All joint outcomes in row-major canonical order."""
        return itertools.product(*self.domains)

    def prob(self, outcome: tuple) -> float:
        return self.probs.get(tuple(outcome), 0.0)

    @property
    def total(self) -> float:
        return sum(self.probs.values())

    def close_to(self, other: "Distribution", tol: float = TOL) -> bool:
        if self.scope != other.scope or self.domains != other.domains:
            return False
        keys = set(self.probs) | set(other.probs)
        return all(abs(self.prob(k) - other.prob(k)) <= tol for k in keys)


@dataclass(frozen=True)
class Kernel:
    """A Markov kernel for one variable: rows over joint parent values."""

    variable: str
    row_scope: tuple[str, ...]
    row_domains: tuple[tuple[Value, ...], ...]
    column_domain: tuple[Value, ...]
    rows: Mapping[tuple, Mapping[Value, float]]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_scm(model: Scm) -> ValidationReport:
    """Check well-formedness: names, domains, mechanisms, acyclicity, P(U)."""
    report = ValidationReport()
    names = [v.name for v in model.variables]
    exo_names = [u.name for u in model.exogenous]

    if len(set(names)) != len(names):
        report.add("dup-variable", "duplicate endogenous variable names")
    if len(set(exo_names)) != len(exo_names):
        report.add("dup-exogenous", "duplicate exogenous variable names")
    if set(names) & set(exo_names):
        overlap = sorted(set(names) & set(exo_names))
        report.add("name-overlap", f"names used both ways: {', '.join(overlap)}")

    for v in model.variables:
        if not v.domain:
            report.add("empty-domain", f"variable {v.name} has an empty domain")
        if len(set(v.domain)) != len(v.domain):
            report.add("dup-outcome", f"variable {v.name} repeats a domain value")
        for p in v.parents:
            if p not in names:
                report.add("unknown-parent", f"{v.name} lists unknown parent {p}")
        if v.name in v.parents:
            report.add("self-parent", f"{v.name} lists itself as a parent")
        if v.exogenous not in exo_names:
            report.add(
                "unknown-exogenous", f"{v.name} references unknown exogenous {v.exogenous}"
            )

    attached = {}
    for u in model.exogenous:
        if not u.domain:
            report.add("empty-domain", f"exogenous {u.name} has an empty domain")
        if len(set(u.domain)) != len(u.domain):
            report.add("dup-outcome", f"exogenous {u.name} repeats a domain value")
        if u.endogenous not in names:
            report.add(
                "unknown-variable", f"exogenous {u.name} attached to unknown {u.endogenous}"
            )
        attached.setdefault(u.endogenous, []).append(u.name)
    for v in model.variables:
        owners = attached.get(v.name, [])
        if len(owners) != 1 or (owners and owners[0] != v.exogenous):
            report.add(
                "exogenous-attachment",
                f"{v.name} must have exactly one attached exogenous variable",
            )

    if _toposort(model) is None:
        report.add("cyclic", "the parent relation has a cycle")

    # Mechanism totality: exactly one row per (parent values, exo value).
    by_name = {v.name: v for v in model.variables}
    exo_by_name = {u.name: u for u in model.exogenous}
    for v in model.variables:
        table = model.mechanisms.get(v.name)
        if table is None:
            report.add("missing-mechanism", f"no mechanism for {v.name}")
            continue
        if any(p not in by_name for p in v.parents) or v.exogenous not in exo_by_name:
            continue  # already reported above
        expected = set(
            tuple(combo) + (u,)
            for combo in itertools.product(*(by_name[p].domain for p in v.parents))
            for u in exo_by_name[v.exogenous].domain
        )
        got = set(table)
        for key in sorted(expected - got, key=repr):
            report.add("mechanism-gap", f"mechanism for {v.name} misses input {key}")
        for key in sorted(got - expected, key=repr):
            report.add("mechanism-extra", f"mechanism for {v.name} has stray input {key}")
        for key, out in table.items():
            if out not in v.domain:
                report.add(
                    "mechanism-range",
                    f"mechanism for {v.name} maps {key} outside the domain: {out!r}",
                )

    # Joint exogenous table.
    exo_domains = {u.name: u.domain for u in model.exogenous}
    for combo, p in model.exo_table.items():
        if len(combo) != len(model.exogenous) or any(
            val not in exo_domains[u.name] for u, val in zip(model.exogenous, combo)
        ):
            report.add("dist-key", f"exogenous table key {combo!r} is out of range")
        if p < -TOL:
            report.add("dist-negative", f"negative probability {p} at {combo!r}")
    total = sum(model.exo_table.values())
    if abs(total - 1.0) > TOL:
        report.add("dist-total", f"exogenous table sums to {total!r}, not 1")

    return report


def _toposort(model: Scm) -> list[str] | None:
    order: list[str] = []
    pending = {v.name: set(v.parents) for v in model.variables}
    while pending:
        ready = sorted(n for n, ps in pending.items() if not (ps & set(pending)))
        if not ready:
            return None
        for n in ready:
            order.append(n)
            del pending[n]
    return order


def topological_order(model: Scm) -> tuple[str, ...]:
    order = _toposort(model)
    if order is None:
        raise ModelError(f"model {model.name!r} is cyclic")
    return tuple(order)


# ---------------------------------------------------------------------------
# Graph and interventions
# ---------------------------------------------------------------------------

def underlying_graph(model: Scm) -> Dag:
    """The DAG over endogenous variables (edges parent -> child)."""
    edges = tuple(
        (p, v.name) for v in model.variables for p in v.parents
    )
    return Dag(nodes=model.variable_names, edges=edges)


def intervene(model: Scm, assignments: Mapping[str, Value]) -> Scm:
    """Graph-surgery intervention do(X=x, ...).

    Each targeted variable gets a constant mechanism and loses its parents;
    its exogenous variable stays attached but is ignored by the new mechanism.
    An empty assignment returns an equal model.
    """
    by_name = {v.name: v for v in model.variables}
    for name, value in assignments.items():
        if name not in by_name:
            raise ModelError(f"unknown variable {name!r} in intervention")
        if value not in by_name[name].domain:
            raise ModelError(
                f"value {value!r} is outside the domain of {name}"
            )
    exo_by_name = {u.name: u for u in model.exogenous}
    new_vars = []
    new_mechs = {}
    for v in model.variables:
        if v.name in assignments:
            value = assignments[v.name]
            new_vars.append(replace(v, parents=()))
            new_mechs[v.name] = {
                (u,): value for u in exo_by_name[v.exogenous].domain
            }
        else:
            new_vars.append(v)
            new_mechs[v.name] = dict(model.mechanisms[v.name])
    return Scm(
        name=model.name,
        variables=new_vars,
        exogenous=list(model.exogenous),
        mechanisms=new_mechs,
        exo_table=dict(model.exo_table),
    )


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------

def joint_distribution(model: Scm, cap: int | None = None) -> Distribution:
    """Joint endogenous distribution by exhaustive exogenous enumeration.

    Raises CapacityError when the number of joint exogenous assignments
    exceeds the cap (default 10^7, env-overridable).
    """
    limit = cap if cap is not None else enum_cap(DEFAULT_EXO_CAP)
    size = 1
    for u in model.exogenous:
        size *= len(u.domain)
    if size > limit:
        raise CapacityError(
            f"joint exogenous space of {model.name!r} has {size} assignments, "
            f"exceeding the enumeration cap of {limit}"
        )
    order = topological_order(model)
    by_name = {v.name: v for v in model.variables}
    probs: dict[tuple, float] = {}
    exo_domains = [u.domain for u in model.exogenous]
    exo_index = {u.name: i for i, u in enumerate(model.exogenous)}
    for combo in itertools.product(*exo_domains):
        p = model.exo_table.get(combo, 0.0)
        if p == 0.0:
            continue
        values: dict[str, Value] = {}
        for name in order:
            v = by_name[name]
            key = tuple(values[q] for q in v.parents) + (combo[exo_index[v.exogenous]],)
            values[name] = model.mechanisms[name][key]
        outcome = tuple(values[n] for n in model.variable_names)
        probs[outcome] = probs.get(outcome, 0.0) + p
    return Distribution(
        scope=model.variable_names,
        domains=tuple(v.domain for v in model.variables),
        probs=probs,
    )


def marginal(dist: Distribution, variables: Iterable[str]) -> Distribution:
    """Marginal over a subset of the scope, kept in canonical scope order."""
    wanted = set(variables)
    unknown = wanted - set(dist.scope)
    if unknown:
        raise ModelError(f"unknown variables in marginal: {sorted(unknown)}")
    keep = [i for i, name in enumerate(dist.scope) if name in wanted]
    probs: dict[tuple, float] = {}
    for outcome, p in dist.probs.items():
        key = tuple(outcome[i] for i in keep)
        probs[key] = probs.get(key, 0.0) + p
    return Distribution(
        scope=tuple(dist.scope[i] for i in keep),
        domains=tuple(dist.domains[i] for i in keep),
        probs=probs,
    )


def mechanism_kernel(model: Scm, variable: str) -> Kernel:
    """The Markov kernel P(X | parents(X)) of one mechanism.

    Defined only when the variable's exogenous term is independent of the
    remaining exogenous variables under the joint exogenous table.
    """
    v = model.variable(variable)
    exo = model.exogenous_variable(v.exogenous)
    exo_index = {u.name: i for i, u in enumerate(model.exogenous)}
    i = exo_index[exo.name]

    # Factorisation check: P(u_i, rest) == P(u_i) * P(rest) for all entries.
    own: dict[Value, float] = {val: 0.0 for val in exo.domain}
    rest: dict[tuple, float] = {}
    full: dict[tuple, float] = {}
    others = [u.domain for u in model.exogenous]
    for combo in itertools.product(*others):
        p = model.exo_table.get(combo, 0.0)
        own[combo[i]] = own.get(combo[i], 0.0) + p
        rkey = combo[:i] + combo[i + 1 :]
        rest[rkey] = rest.get(rkey, 0.0) + p
        full[combo] = p
    for combo, p in full.items():
        rkey = combo[:i] + combo[i + 1 :]
        if abs(p - own[combo[i]] * rest[rkey]) > TOL:
            raise KernelUndefinedError("kernel undefined under exogenous dependence")

    by_name = {q.name: model.variable(q.name) for q in model.variables}
    row_domains = tuple(by_name[p].domain for p in v.parents)
    rows: dict[tuple, dict[Value, float]] = {}
    for combo in itertools.product(*row_domains):
        row = {val: 0.0 for val in v.domain}
        for uval, w in own.items():
            row[model.mechanisms[variable][tuple(combo) + (uval,)]] += w
        rows[tuple(combo)] = row
    return Kernel(
        variable=variable,
        row_scope=v.parents,
        row_domains=row_domains,
        column_domain=v.domain,
        rows=rows,
    )
