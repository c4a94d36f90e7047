"""A taxonomy of abstraction types and the property-admissibility matrices.

Each abstraction type has a canonical witness: a small self-contained
fixture (two models plus the map between them) shipped as package data.
Auditing every witness and folding the verdicts through the enforcement
conventions below reproduces the two admissibility matrices, which are also
shipped as ground-truth tables so the computation can be checked.

Enforcement conventions (how verdicts become matrix cells):

* the Functionality cell asks for a total *function*, so it combines the
  functional and deterministic verdicts;
* the Surjectivity/Injectivity cells presuppose a function and combine the
  Functionality cell with their verdict; Bijectivity is their conjunction;
* the Functoriality cell presupposes a function and a complete morphism
  layer: a missing or partial edge map is as inadmissible as a broken one;
* the Fullness/Faithfulness cells presuppose functoriality; the
  Faithfulness cell reads the hom-set-wise injectivity verdict
  (``faithful_parallel``); Fully Faithfulness is their conjunction;
* the last two rows flag modalities: they mark which single type *needs*
  a non-deterministic map or a reversed map, and are moot elsewhere;
* the reversal column is moot for property rows on the structural table and
  inadmissible on the distributional one (the layers treat a reversed map
  differently, and both tables keep their own convention).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .abstraction import Abstraction, Direction
from .audit import PropertyProfile, audit_abstraction
from .errors import ModelError, ParseError
from .freecat import hom_set
from .scm import Scm, underlying_graph
from .textfmt import Document, parse_document


class StructuralType(enum.Enum):
    IDENTITY = "identity"
    NODE_PERMUTATION = "node-permutation"
    NODE_COARSENING = "node-coarsening"
    EDGE_COARSENING = "edge-coarsening"
    NODE_EMBEDDING = "node-embedding"
    EDGE_EMBEDDING = "edge-embedding"
    NODE_DROPPING = "node-dropping"
    EDGE_DROPPING = "edge-dropping"
    CAUSAL_REVERSAL = "causal-reversal"
    CAUSAL_SPLITTING = "causal-splitting"
    ABSTRACTION_REVERSAL = "abstraction-reversal"


class DistributionalType(enum.Enum):
    IDENTITY_OR_PERMUTATION = "identity-or-permutation"
    COARSENING = "coarsening"
    EMBEDDING = "embedding"
    OUTCOME_DROPPING = "outcome-dropping"
    OUTCOME_SPLITTING = "outcome-splitting"
    ABSTRACTION_REVERSAL = "abstraction-reversal"


STRUCTURAL_COLUMNS: dict[StructuralType, str] = {
    StructuralType.IDENTITY: "Identity",
    StructuralType.NODE_PERMUTATION: "Node permutation",
    StructuralType.NODE_COARSENING: "Node coarsening",
    StructuralType.EDGE_COARSENING: "Edge coarsening",
    StructuralType.NODE_EMBEDDING: "Node embedding",
    StructuralType.EDGE_EMBEDDING: "Edge embedding",
    StructuralType.NODE_DROPPING: "Node dropping",
    StructuralType.EDGE_DROPPING: "Edge dropping",
    StructuralType.CAUSAL_REVERSAL: "Causal reversal",
    StructuralType.CAUSAL_SPLITTING: "Causal splitting",
    StructuralType.ABSTRACTION_REVERSAL: "Abs. Reversal",
}

DISTRIBUTIONAL_COLUMNS: dict[DistributionalType, str] = {
    DistributionalType.IDENTITY_OR_PERMUTATION: "Identity / Permutation",
    DistributionalType.COARSENING: "Coarsening",
    DistributionalType.EMBEDDING: "Embedding",
    DistributionalType.OUTCOME_DROPPING: "Outcome dropping",
    DistributionalType.OUTCOME_SPLITTING: "Outcome splitting",
    DistributionalType.ABSTRACTION_REVERSAL: "Abstraction reversal",
}

STRUCTURAL_ROWS = (
    "Functionality",
    "Surjectivity",
    "Injectivity",
    "Bijectivity",
    "Functoriality",
    "Fullness",
    "Faithfulness",
    "Fully Faithfulness",
    "Non-Determinism",
    "Macro-to-micro",
)

DISTRIBUTIONAL_ROWS = (
    "Functionality",
    "Surjectivity",
    "Injectivity",
    "Bijectivity",
    "Non-Determinism",
    "Macro-to-micro",
)


class Admissibility(enum.Enum):
    ADMISSIBLE = "Y"
    DISALLOWED = "N"
    NOT_APPLICABLE = "-"

    @property
    def mark(self) -> str:
        return {"Y": "✓", "N": "×", "-": "−"}[self.value]

    @classmethod
    def from_letter(cls, letter: str) -> "Admissibility":
        for a in cls:
            if a.value == letter:
                return a
        raise ValueError(f"unknown admissibility letter {letter!r}")


def _admissible(flag: bool) -> Admissibility:
    return Admissibility.ADMISSIBLE if flag else Admissibility.DISALLOWED


def _modal(flag: bool) -> Admissibility:
    return Admissibility.ADMISSIBLE if flag else Admissibility.NOT_APPLICABLE


@dataclass
class PropertyMatrix:
    """A property-by-type admissibility table."""

    title: str
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: dict[tuple[str, str], Admissibility]

    def cell(self, row: str, col: str) -> Admissibility:
        return self.cells[(row, col)]

    def diff(self, other: "PropertyMatrix") -> list[str]:
        """Human-readable list of differences (empty when equal)."""
        out = []
        if self.title != other.title:
            out.append(f"title: {self.title!r} vs {other.title!r}")
        if self.rows != other.rows:
            out.append("row labels differ")
        if self.cols != other.cols:
            out.append("column labels differ")
        if not out:
            for row in self.rows:
                for col in self.cols:
                    a, b = self.cells[(row, col)], other.cells[(row, col)]
                    if a != b:
                        out.append(f"({row}, {col}): {a.mark} vs {b.mark}")
        return out

    def to_tbl(self) -> str:
        lines = [f"absaudit-table {self.title}"]
        for col in self.cols:
            lines.append(f"col {col}")
        for row in self.rows:
            cells = " ".join(self.cells[(row, col)].value for col in self.cols)
            lines.append(f"row {row} : {cells}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tbl(cls, text: str) -> "PropertyMatrix":
        title = None
        cols: list[str] = []
        rows: list[str] = []
        cells: dict[tuple[str, str], Admissibility] = {}
        for no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            if line.startswith("absaudit-table "):
                title = line[len("absaudit-table "):].strip()
            elif line.startswith("col "):
                cols.append(line[4:].strip())
            elif line.startswith("row "):
                try:
                    label, cellpart = line[4:].split(" : ", 1)
                except ValueError:
                    raise ParseError("expected 'row LABEL : CELLS'", no) from None
                letters = cellpart.split()
                if len(letters) != len(cols):
                    raise ParseError(
                        f"expected {len(cols)} cells, found {len(letters)}", no
                    )
                rows.append(label)
                for col, letter in zip(cols, letters):
                    try:
                        cells[(label, col)] = Admissibility.from_letter(letter)
                    except ValueError as exc:
                        raise ParseError(str(exc), no) from None
            else:
                raise ParseError("expected 'absaudit-table', 'col' or 'row'", no)
        if title is None:
            raise ParseError("missing 'absaudit-table' header", 1)
        return cls(title=title, rows=tuple(rows), cols=tuple(cols), cells=cells)

    def to_text(self) -> str:
        width = max(len(r) for r in self.rows) + 2
        abbrevs = [_abbrev(c) for c in self.cols]
        lines = [f"{self.title} admissibility"]
        lines.append(" " * width + "  ".join(f"{a:<3}" for a in abbrevs).rstrip())
        for row in self.rows:
            marks = "  ".join(
                f"{self.cells[(row, col)].mark:<3}" for col in self.cols
            ).rstrip()
            lines.append(f"{row:<{width}}{marks}")
        lines.append("")
        for col, abbrev in zip(self.cols, abbrevs):
            lines.append(f"  {abbrev} = {col}")
        return "\n".join(lines)


def _abbrev(label: str) -> str:
    words = [w for w in label.replace("/", " ").replace(".", " ").split() if w]
    if len(words) == 1:
        return words[0][:2]
    return "".join(w[0].upper() for w in words[:3])


# ---------------------------------------------------------------------------
# Shipped data
# ---------------------------------------------------------------------------

def data_text(*parts: str) -> str:
    """Read a shipped data file (models, witnesses, figures, tables)."""
    node = resources.files(__package__).joinpath("data")
    for part in parts:
        node = node.joinpath(part)
    return node.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def witness_document(kind: str, name: str) -> Document:
    return parse_document(data_text("witnesses", kind, f"{name}.abs"))


def canonical_witness(
    abstraction_type: "StructuralType | DistributionalType",
) -> tuple[Abstraction, Scm, Scm]:
    """The shipped witness for a type: (abstraction, source, target)."""
    kind = (
        "structural"
        if isinstance(abstraction_type, StructuralType)
        else "distributional"
    )
    doc = witness_document(kind, abstraction_type.value)
    if len(doc.abstractions) != 1:
        raise ModelError(
            f"witness file for {abstraction_type.value} must hold one abstraction"
        )
    abstraction = next(iter(doc.abstractions.values()))
    source, target = doc.resolve(abstraction)
    return abstraction, source, target


def witness_profile(
    abstraction_type: "StructuralType | DistributionalType",
) -> PropertyProfile:
    abstraction, source, target = canonical_witness(abstraction_type)
    return audit_abstraction(abstraction, source, target)


# ---------------------------------------------------------------------------
# Matrix computation
# ---------------------------------------------------------------------------

def _structural_column(profile: PropertyProfile, reversed_map: bool) -> dict[str, Admissibility]:
    node, functor = profile.node, profile.functor
    func_cell = node.functional and node.deterministic
    surj_cell = func_cell and node.surjective
    inj_cell = func_cell and node.injective is True
    bij_cell = surj_cell and inj_cell
    ftor_cell = func_cell and functor.functorial is True
    full_cell = ftor_cell and functor.full is True
    faith_cell = ftor_cell and functor.faithful_parallel is True
    ff_cell = full_cell and faith_cell
    if reversed_map:
        properties = {
            row: Admissibility.NOT_APPLICABLE for row in STRUCTURAL_ROWS[:8]
        }
    else:
        properties = {
            "Functionality": _admissible(func_cell),
            "Surjectivity": _admissible(surj_cell),
            "Injectivity": _admissible(inj_cell),
            "Bijectivity": _admissible(bij_cell),
            "Functoriality": _admissible(ftor_cell),
            "Fullness": _admissible(full_cell),
            "Faithfulness": _admissible(faith_cell),
            "Fully Faithfulness": _admissible(ff_cell),
        }
    properties["Non-Determinism"] = _modal(profile.modalities.non_deterministic)
    properties["Macro-to-micro"] = _modal(profile.modalities.macro_to_micro)
    return properties


def _distributional_column(profile: PropertyProfile, reversed_map: bool) -> dict[str, Admissibility]:
    s = profile.outcome_summary
    if s is None:
        raise ModelError("a distributional witness needs an outcome layer")
    func_cell = s.functional and s.deterministic
    surj_cell = func_cell and s.surjective
    inj_cell = func_cell and s.injective is True
    bij_cell = surj_cell and inj_cell
    if reversed_map:
        properties = {
            row: Admissibility.DISALLOWED for row in DISTRIBUTIONAL_ROWS[:4]
        }
    else:
        properties = {
            "Functionality": _admissible(func_cell),
            "Surjectivity": _admissible(surj_cell),
            "Injectivity": _admissible(inj_cell),
            "Bijectivity": _admissible(bij_cell),
        }
    properties["Non-Determinism"] = _modal(profile.modalities.non_deterministic)
    properties["Macro-to-micro"] = _modal(profile.modalities.macro_to_micro)
    return properties


def structural_matrix() -> PropertyMatrix:
    """Recompute the structural table from the shipped witnesses."""
    cells: dict[tuple[str, str], Admissibility] = {}
    cols = []
    for t in StructuralType:
        label = STRUCTURAL_COLUMNS[t]
        cols.append(label)
        profile = witness_profile(t)
        column = _structural_column(
            profile, reversed_map=t is StructuralType.ABSTRACTION_REVERSAL
        )
        for row in STRUCTURAL_ROWS:
            cells[(row, label)] = column[row]
    return PropertyMatrix(
        title="structural",
        rows=STRUCTURAL_ROWS,
        cols=tuple(cols),
        cells=cells,
    )


def distributional_matrix() -> PropertyMatrix:
    """Recompute the distributional table from the shipped witnesses."""
    cells: dict[tuple[str, str], Admissibility] = {}
    cols = []
    for t in DistributionalType:
        label = DISTRIBUTIONAL_COLUMNS[t]
        cols.append(label)
        profile = witness_profile(t)
        column = _distributional_column(
            profile, reversed_map=t is DistributionalType.ABSTRACTION_REVERSAL
        )
        for row in DISTRIBUTIONAL_ROWS:
            cells[(row, label)] = column[row]
    return PropertyMatrix(
        title="distributional",
        rows=DISTRIBUTIONAL_ROWS,
        cols=tuple(cols),
        cells=cells,
    )


def shipped_table(which: str) -> PropertyMatrix:
    """The ground-truth table shipped as package data."""
    if which not in ("structural", "distributional"):
        raise ModelError(f"unknown table {which!r}")
    return PropertyMatrix.from_tbl(data_text("tables", f"{which}.tbl"))


def load_table(path) -> PropertyMatrix:
    from pathlib import Path

    return PropertyMatrix.from_tbl(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Type detection
# ---------------------------------------------------------------------------

def detect_types(
    abstraction: Abstraction, source: Scm, target: Scm
) -> dict[str, list[str]]:
    """Name every taxonomy type the abstraction instantiates.

    Labels can overlap (a crossed two-node bijection is both a permutation
    and, in effect, a causal reversal); the result lists every match, for
    each layer separately.
    """
    profile = audit_abstraction(abstraction, source, target)
    node = profile.node
    sm = abstraction.structure
    forward = abstraction.direction is Direction.MICRO_TO_MACRO
    structural: list[str] = []

    pairing = sm.pairing
    if pairing is None and len(source.variable_names) == len(target.variable_names):
        pairing = dict(zip(source.variable_names, target.variable_names))

    src_dag = underlying_graph(source)
    tgt_dag = underlying_graph(target)
    pi = (
        {u: sm.image_of(u) for u in sm.mapped}
        if node.deterministic
        else {}
    )

    def hom_sizes_differ(bigger: str) -> bool:
        for u in sm.mapped:
            for v in sm.mapped:
                n_src = len(hom_set(src_dag, u, v))
                n_tgt = len(hom_set(tgt_dag, pi[u], pi[v]))
                if bigger == "source" and n_src > n_tgt >= 1:
                    return True
                if bigger == "target" and n_tgt > n_src >= 1:
                    return True
        return False

    if forward and node.deterministic:
        if node.bijective is True and pairing is not None:
            respects = all(pi.get(u) == pairing.get(u) for u in sm.mapped)
            mapped_edges = {(pi[u], pi[v]) for (u, v) in src_dag.edges}
            edge_bijection = (
                mapped_edges == set(tgt_dag.edges)
                and len(src_dag.edges) == len(tgt_dag.edges)
            )
            if respects and edge_bijection:
                structural.append(StructuralType.IDENTITY.value)
            if not respects:
                structural.append(StructuralType.NODE_PERMUTATION.value)
        if node.functional and node.surjective and node.injective is False:
            structural.append(StructuralType.NODE_COARSENING.value)
        if node.functional and node.injective is True and not node.surjective:
            structural.append(StructuralType.NODE_EMBEDDING.value)
        if node.bijective is True and hom_sizes_differ("source"):
            structural.append(StructuralType.EDGE_COARSENING.value)
        if node.bijective is True and hom_sizes_differ("target"):
            structural.append(StructuralType.EDGE_EMBEDDING.value)
        if not node.functional:
            structural.append(StructuralType.NODE_DROPPING.value)
        dropped = reversed_edge = False
        for u, v in src_dag.edges:
            if u not in pi or v not in pi:
                continue
            fwd = len(hom_set(tgt_dag, pi[u], pi[v]))
            bwd = len(hom_set(tgt_dag, pi[v], pi[u]))
            if fwd == 0 and bwd == 0:
                dropped = True
            if fwd == 0 and bwd > 0:
                reversed_edge = True
        if dropped:
            structural.append(StructuralType.EDGE_DROPPING.value)
        if reversed_edge:
            structural.append(StructuralType.CAUSAL_REVERSAL.value)
    if forward and not node.deterministic:
        structural.append(StructuralType.CAUSAL_SPLITTING.value)
    if not forward:
        structural.append(StructuralType.ABSTRACTION_REVERSAL.value)

    distributional: list[str] = []
    s = profile.outcome_summary
    if s is not None:
        if forward:
            if s.deterministic:
                if s.functional and s.surjective and s.injective is True:
                    distributional.append(
                        DistributionalType.IDENTITY_OR_PERMUTATION.value
                    )
                if s.functional and s.surjective and s.injective is False:
                    distributional.append(DistributionalType.COARSENING.value)
                if s.functional and s.injective is True and not s.surjective:
                    distributional.append(DistributionalType.EMBEDDING.value)
                if not s.functional:
                    distributional.append(DistributionalType.OUTCOME_DROPPING.value)
            else:
                distributional.append(DistributionalType.OUTCOME_SPLITTING.value)
        else:
            distributional.append(DistributionalType.ABSTRACTION_REVERSAL.value)
    return {"structural": structural, "distributional": distributional}
