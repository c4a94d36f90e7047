"""Plain-text formats for models (.scm) and abstractions (.abs).

Both formats share one framing: a header line ``absaudit-format 1`` followed
by named blocks delimited by braces.  A file may hold any number of model
and abstraction blocks, so a fixture can ship a map together with the two
models it connects.  Tokens are whitespace-separated; ``#`` starts a
comment; identifiers may contain primes (``S'``).

Model block::

    scm NAME {
      var NAME : VALUE... [parents NAME...]
      exo NAME : VALUE... for NAME
      dist EXONAME... {
        VALUE... : PROB
      }
      mech NAME {
        PARENTVALUES... EXOVALUE : VALUE
      }
    }

Abstraction block::

    abs NAME {
      source NAME
      target NAME
      direction micro-to-macro|macro-to-micro
      nodes {
        NAME : NAME WEIGHT [NAME WEIGHT...]
      }
      edges {
        PATH : PATH            # PATH is N^N^...; an identity is N^N
      }
      pairs {
        NAME : NAME
      }
      outcomes NAME from NAME... {        # per-variable map
        VALUE... : VALUE WEIGHT [VALUE WEIGHT...]
      }
      outcomes * from NAME... onto NAME... {   # global map
        VALUE... : VALUE... WEIGHT [VALUE... WEIGHT...]
      }
    }

The serializer writes blocks in a canonical order with canonical row order,
so parsing a canonical file and emitting it again reproduces it byte for
byte.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .abstraction import (
    GLOBAL,
    Abstraction,
    Direction,
    OutcomeMap,
    StructuralMap,
)
from .errors import ModelError, ParseError
from .freecat import Morphism
from .scm import Exogenous, Scm, Variable

HEADER = "absaudit-format 1"


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

@dataclass
class Document:
    """Everything found in one or more files, addressable by name."""

    models: dict[str, Scm] = field(default_factory=dict)
    abstractions: dict[str, Abstraction] = field(default_factory=dict)

    def add_model(self, model: Scm) -> None:
        if model.name in self.models:
            raise ModelError(f"duplicate model name {model.name!r}")
        self.models[model.name] = model

    def add_abstraction(self, abstraction: Abstraction) -> None:
        if abstraction.name in self.abstractions:
            raise ModelError(f"duplicate abstraction name {abstraction.name!r}")
        self.abstractions[abstraction.name] = abstraction

    def merge(self, other: "Document") -> None:
        for model in other.models.values():
            self.add_model(model)
        for abstraction in other.abstractions.values():
            self.add_abstraction(abstraction)

    def resolve(self, abstraction: Abstraction) -> tuple[Scm, Scm]:
        """Look up the two models an abstraction runs between."""
        try:
            source = self.models[abstraction.source_ref]
        except KeyError:
            raise ModelError(
                f"abstraction {abstraction.name!r} references unknown "
                f"source model {abstraction.source_ref!r}"
            ) from None
        try:
            target = self.models[abstraction.target_ref]
        except KeyError:
            raise ModelError(
                f"abstraction {abstraction.name!r} references unknown "
                f"target model {abstraction.target_ref!r}"
            ) from None
        return source, target


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _Lines:
    """Comment-stripping, token-splitting cursor over input lines."""

    def __init__(self, text: str) -> None:
        self.raw = text.splitlines()
        self.pos = 0  # 0-based index of the line about to be read

    @property
    def line_no(self) -> int:
        return self.pos  # 1-based number of the line last read

    def next(self) -> list[str] | None:
        while self.pos < len(self.raw):
            line = self.raw[self.pos]
            self.pos += 1
            body = line.split("#", 1)[0]
            tokens = body.split()
            if tokens:
                return tokens
        return None

    def fail(self, reason: str, column: int = 1) -> ParseError:
        return ParseError(reason, max(self.line_no, 1), column)


def _split_colon(tokens: list[str], lines: _Lines) -> tuple[list[str], list[str]]:
    if ":" not in tokens:
        raise lines.fail("expected a ':' separator")
    i = tokens.index(":")
    return tokens[:i], tokens[i + 1 :]


def _float(token: str, lines: _Lines) -> float:
    try:
        return float(token)
    except ValueError:
        raise lines.fail(f"expected a number, found {token!r}") from None


def _morphism(token: str, lines: _Lines) -> Morphism:
    parts = token.split("^")
    if not all(parts):
        raise lines.fail(f"malformed path {token!r}")
    if len(parts) == 2 and parts[0] == parts[1]:
        return Morphism((parts[0],))
    return Morphism(tuple(parts))


def parse_document(text: str) -> Document:
    lines = _Lines(text)
    first = lines.next()
    if first != HEADER.split():
        raise lines.fail(f"expected header {HEADER!r}")
    doc = Document()
    while True:
        tokens = lines.next()
        if tokens is None:
            return doc
        if len(tokens) == 3 and tokens[0] == "scm" and tokens[2] == "{":
            doc.add_model(_parse_scm(tokens[1], lines))
        elif len(tokens) == 3 and tokens[0] == "abs" and tokens[2] == "{":
            doc.add_abstraction(_parse_abs(tokens[1], lines))
        else:
            raise lines.fail(
                "expected 'scm NAME {' or 'abs NAME {' at the top level"
            )


def _parse_scm(name: str, lines: _Lines) -> Scm:
    variables: list[Variable] = []
    exogenous: list[Exogenous] = []
    mechanisms: dict[str, dict[tuple, str]] = {}
    exo_table: dict[tuple, float] = {}
    saw_dist = False
    while True:
        tokens = lines.next()
        if tokens is None:
            raise lines.fail(f"model {name!r} is missing its closing brace")
        if tokens == ["}"]:
            break
        head = tokens[0]
        if head == "var":
            if len(tokens) < 4 or tokens[2] != ":":
                raise lines.fail("expected 'var NAME : VALUE...'")
            rest = tokens[3:]
            parents: tuple[str, ...] = ()
            if "parents" in rest:
                j = rest.index("parents")
                parents = tuple(rest[j + 1 :])
                rest = rest[:j]
            if not rest:
                raise lines.fail("a variable needs at least one value")
            variables.append(
                Variable(
                    name=tokens[1],
                    domain=tuple(rest),
                    parents=parents,
                    exogenous="",  # attached when the exo line arrives
                )
            )
        elif head == "exo":
            if len(tokens) < 6 or tokens[2] != ":" or tokens[-2] != "for":
                raise lines.fail("expected 'exo NAME : VALUE... for NAME'")
            owner = tokens[-1]
            exogenous.append(
                Exogenous(name=tokens[1], domain=tuple(tokens[3:-2]), endogenous=owner)
            )
            for i, v in enumerate(variables):
                if v.name == owner:
                    variables[i] = Variable(
                        name=v.name,
                        domain=v.domain,
                        parents=v.parents,
                        exogenous=tokens[1],
                    )
        elif head == "dist":
            if tokens[-1] != "{":
                raise lines.fail("expected 'dist NAME... {'")
            declared = tokens[1:-1]
            if declared != [u.name for u in exogenous]:
                raise lines.fail(
                    "the dist block must list every exogenous variable "
                    "in declaration order"
                )
            saw_dist = True
            while True:
                row = lines.next()
                if row is None:
                    raise lines.fail("dist block is missing its closing brace")
                if row == ["}"]:
                    break
                left, right = _split_colon(row, lines)
                if len(left) != len(declared) or len(right) != 1:
                    raise lines.fail("expected 'VALUE... : PROB'")
                key = tuple(left)
                if key in exo_table:
                    raise lines.fail(f"duplicate dist row {' '.join(left)}")
                exo_table[key] = _float(right[0], lines)
        elif head == "mech":
            if len(tokens) != 3 or tokens[2] != "{":
                raise lines.fail("expected 'mech NAME {'")
            var = tokens[1]
            if var in mechanisms:
                raise lines.fail(f"duplicate mechanism for {var}")
            table: dict[tuple, str] = {}
            while True:
                row = lines.next()
                if row is None:
                    raise lines.fail("mech block is missing its closing brace")
                if row == ["}"]:
                    break
                left, right = _split_colon(row, lines)
                if not left or len(right) != 1:
                    raise lines.fail("expected 'VALUE... : VALUE'")
                key = tuple(left)
                if key in table:
                    raise lines.fail(f"duplicate mechanism row {' '.join(left)}")
                table[key] = right[0]
            mechanisms[var] = table
        else:
            raise lines.fail(f"unexpected {head!r} inside a model block")
    if not saw_dist and exogenous:
        raise lines.fail(f"model {name!r} has no dist block")
    return Scm(
        name=name,
        variables=variables,
        exogenous=exogenous,
        mechanisms=mechanisms,
        exo_table=exo_table,
    )


def _parse_abs(name: str, lines: _Lines) -> Abstraction:
    source = target = None
    direction: Direction | None = None
    rows: dict[str, dict[str, float]] = {}
    edge_map: dict[Morphism, Morphism] | None = None
    pairing: dict[str, str] | None = None
    outcome_maps: list[OutcomeMap] = []
    while True:
        tokens = lines.next()
        if tokens is None:
            raise lines.fail(f"abstraction {name!r} is missing its closing brace")
        if tokens == ["}"]:
            break
        head = tokens[0]
        if head == "source" and len(tokens) == 2:
            source = tokens[1]
        elif head == "target" and len(tokens) == 2:
            target = tokens[1]
        elif head == "direction" and len(tokens) == 2:
            try:
                direction = Direction(tokens[1])
            except ValueError:
                raise lines.fail(
                    "direction must be micro-to-macro or macro-to-micro"
                ) from None
        elif tokens == ["nodes", "{"]:
            while True:
                row = lines.next()
                if row is None:
                    raise lines.fail("nodes block is missing its closing brace")
                if row == ["}"]:
                    break
                left, right = _split_colon(row, lines)
                if len(left) != 1 or not right or len(right) % 2:
                    raise lines.fail("expected 'NAME : NAME WEIGHT...'")
                if left[0] in rows:
                    raise lines.fail(f"duplicate node row {left[0]}")
                entry: dict[str, float] = {}
                for j in range(0, len(right), 2):
                    entry[right[j]] = _float(right[j + 1], lines)
                rows[left[0]] = entry
        elif tokens == ["edges", "{"]:
            edge_map = {}
            while True:
                row = lines.next()
                if row is None:
                    raise lines.fail("edges block is missing its closing brace")
                if row == ["}"]:
                    break
                left, right = _split_colon(row, lines)
                if len(left) != 1 or len(right) != 1:
                    raise lines.fail("expected 'PATH : PATH'")
                key = _morphism(left[0], lines)
                if key in edge_map:
                    raise lines.fail(f"duplicate edge row {left[0]}")
                edge_map[key] = _morphism(right[0], lines)
        elif tokens == ["pairs", "{"]:
            pairing = {}
            while True:
                row = lines.next()
                if row is None:
                    raise lines.fail("pairs block is missing its closing brace")
                if row == ["}"]:
                    break
                left, right = _split_colon(row, lines)
                if len(left) != 1 or len(right) != 1:
                    raise lines.fail("expected 'NAME : NAME'")
                if left[0] in pairing:
                    raise lines.fail(f"duplicate pair row {left[0]}")
                pairing[left[0]] = right[0]
        elif head == "outcomes" and tokens[-1] == "{":
            spec = tokens[1:-1]
            if len(spec) < 3 or spec[1] != "from":
                raise lines.fail(
                    "expected 'outcomes NAME from NAME... {' or "
                    "'outcomes * from NAME... onto NAME... {'"
                )
            om_target = spec[0]
            rest = spec[2:]
            if om_target == GLOBAL:
                if "onto" not in rest:
                    raise lines.fail("a global outcome map needs an onto clause")
                j = rest.index("onto")
                sources = tuple(rest[:j])
                onto = tuple(rest[j + 1 :])
                if not sources or not onto:
                    raise lines.fail("empty from/onto clause")
                arity = len(onto)
            else:
                if "onto" in rest:
                    raise lines.fail("only global outcome maps take an onto clause")
                sources = tuple(rest)
                onto = ()
                arity = 1
            om_rows: dict[tuple, dict[tuple, float]] = {}
            while True:
                row = lines.next()
                if row is None:
                    raise lines.fail("outcomes block is missing its closing brace")
                if row == ["}"]:
                    break
                left, right = _split_colon(row, lines)
                if len(left) != len(sources):
                    raise lines.fail(
                        f"expected {len(sources)} value(s) before the ':'"
                    )
                if not right or len(right) % (arity + 1):
                    raise lines.fail(
                        f"expected groups of {arity} value(s) plus a weight"
                    )
                key = tuple(left)
                if key in om_rows:
                    raise lines.fail(f"duplicate outcome row {' '.join(left)}")
                entry: dict[tuple, float] = {}
                for j in range(0, len(right), arity + 1):
                    val = tuple(right[j : j + arity])
                    entry[val] = _float(right[j + arity], lines)
                om_rows[key] = entry
            outcome_maps.append(
                OutcomeMap(target=om_target, sources=sources, rows=om_rows, onto=onto)
            )
        else:
            raise lines.fail(f"unexpected {head!r} inside an abstraction block")
    if source is None or target is None or direction is None:
        raise lines.fail(
            f"abstraction {name!r} needs source, target and direction lines"
        )
    return Abstraction(
        name=name,
        source_ref=source,
        target_ref=target,
        direction=direction,
        structure=StructuralMap(rows=rows, edge_map=edge_map, pairing=pairing),
        outcome_maps=outcome_maps,
    )


def parse_path(path) -> Document:
    from pathlib import Path

    return parse_document(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _num(x: float) -> str:
    return repr(float(x))


def _path_token(m: Morphism) -> str:
    if m.is_identity:
        return f"{m.nodes[0]}^{m.nodes[0]}"
    return "^".join(m.nodes)


def emit_scm(model: Scm) -> list[str]:
    out = [f"scm {model.name} {{"]
    for v in model.variables:
        line = f"  var {v.name} : {' '.join(str(x) for x in v.domain)}"
        if v.parents:
            line += f" parents {' '.join(v.parents)}"
        out.append(line)
    for u in model.exogenous:
        out.append(
            f"  exo {u.name} : {' '.join(str(x) for x in u.domain)} for {u.endogenous}"
        )
    if model.exogenous:
        out.append(f"  dist {' '.join(u.name for u in model.exogenous)} {{")
        for combo in itertools.product(*(u.domain for u in model.exogenous)):
            if combo in model.exo_table:
                out.append(
                    f"    {' '.join(str(x) for x in combo)} : "
                    f"{_num(model.exo_table[combo])}"
                )
        out.append("  }")
    by_name = {v.name: v for v in model.variables}
    exo_by_name = {u.name: u for u in model.exogenous}
    for v in model.variables:
        out.append(f"  mech {v.name} {{")
        input_domains = [by_name[p].domain for p in v.parents] + [
            exo_by_name[v.exogenous].domain
        ]
        for combo in itertools.product(*input_domains):
            key = tuple(combo)
            out.append(
                f"    {' '.join(str(x) for x in key)} : "
                f"{model.mechanisms[v.name][key]}"
            )
        out.append("  }")
    out.append("}")
    return out


def _morphism_sort_key(m: Morphism) -> tuple:
    return (len(m.nodes), m.nodes)


def emit_abstraction(abstraction: Abstraction) -> list[str]:
    out = [f"abs {abstraction.name} {{"]
    out.append(f"  source {abstraction.source_ref}")
    out.append(f"  target {abstraction.target_ref}")
    out.append(f"  direction {abstraction.direction.value}")
    sm = abstraction.structure
    out.append("  nodes {")
    for u, row in sm.rows.items():
        cells = " ".join(f"{x} {_num(w)}" for x, w in row.items())
        out.append(f"    {u} : {cells}")
    out.append("  }")
    if sm.edge_map is not None:
        out.append("  edges {")
        for m in sorted(sm.edge_map, key=_morphism_sort_key):
            out.append(f"    {_path_token(m)} : {_path_token(sm.edge_map[m])}")
        out.append("  }")
    if sm.pairing is not None:
        out.append("  pairs {")
        for u, x in sm.pairing.items():
            out.append(f"    {u} : {x}")
        out.append("  }")
    for om in abstraction.outcome_maps:
        if om.is_global:
            out.append(
                f"  outcomes * from {' '.join(om.sources)} onto {' '.join(om.onto)} {{"
            )
            arity = len(om.onto)
        else:
            out.append(f"  outcomes {om.target} from {' '.join(om.sources)} {{")
            arity = 1
        for key in sorted(om.rows):
            row = om.rows[key]
            cells = " ".join(
                f"{' '.join(str(x) for x in val)} {_num(w)}"
                for val, w in sorted(row.items())
            )
            out.append(f"    {' '.join(str(x) for x in key)} : {cells}")
        out.append("  }")
    out.append("}")
    return out


def emit_document(doc: Document) -> str:
    blocks = [[HEADER]]
    for model in doc.models.values():
        blocks.append(emit_scm(model))
    for abstraction in doc.abstractions.values():
        blocks.append(emit_abstraction(abstraction))
    return "\n\n".join("\n".join(block) for block in blocks) + "\n"
