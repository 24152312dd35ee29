"""
Line-oriented text format for every structure the CLI reads or writes.

    # comment
    semilattice 3            | poset 3 | relational 3 | relation 3
    names: a b c             optional, defaults to 0 1 2
    join:                    N rows of N indices (semilattice)
    0 1 2
    ...
    order:                   pair sections end with `end`; the diagonal
    0 1                      is implied for order, spec and theta
    end
    spec: ... end            compatible preorder
    theta: ... end           congruence / equivalence
    pairs: ... end           exact pairs (relation files)
    rel R 2                  tuples, one per line
    0 1
    end
    fun f 2                  `args -> value`, one line per argument tuple
    0 0 -> 0
    end
    star R                   starred relation of an expansion
    0 1
    end
    map: 0 0 1               images of a homomorphism

Elements are always written as indices. Printing emits the canonical
form, which parses back to the same object.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from app.services import relations as rel
from app.services.poset_spec import FinitePoset, SpecializationPoset
from app.services.relational_model import AppropriateExpansion, FiniteStructure, Signature
from app.services.relations import BinaryRelation, Carrier
from app.services.semilattice import (
    Congruence,
    FiniteSemilattice,
    SpecializationSemilattice,
    validate_semilattice,
)

_TOKEN = re.compile(r"\S+")
_HEADERS = ("semilattice", "poset", "relational", "relation")


class StructureParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class StructureKind(str, Enum):
    SEMILATTICE = "semilattice"
    POSET = "poset"
    SPEC_SEMILATTICE = "spec-semilattice"
    SPEC_POSET = "spec-poset"
    RELATIONAL = "relational"
    RELATION = "relation"


@dataclass(frozen=True)
class StructureFile:
    kind: StructureKind
    carrier: Carrier
    semilattice: Optional[FiniteSemilattice] = None
    poset: Optional[FinitePoset] = None
    spec: Optional[BinaryRelation] = None
    theta: Optional[BinaryRelation] = None
    relation: Optional[BinaryRelation] = None
    structure: Optional[FiniteStructure] = None
    starred: Optional[tuple[frozenset, ...]] = None
    mapping: Optional[tuple[int, ...]] = field(default=None)

    @property
    def specialization_semilattice(self) -> SpecializationSemilattice:
        return SpecializationSemilattice(self.semilattice, self.spec)

    @property
    def specialization_poset(self) -> SpecializationPoset:
        return SpecializationPoset(self.poset, self.spec)

    @property
    def congruence(self) -> Congruence:
        return Congruence(self.semilattice, self.theta)

    @property
    def expansion(self) -> AppropriateExpansion:
        return AppropriateExpansion(self.structure, self.theta, self.starred)


@dataclass
class _Line:
    number: int
    tokens: list[tuple[str, int]]

    @property
    def words(self) -> list[str]:
        return [t for t, _ in self.tokens]


def _lines(text: str) -> list[_Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if tokens:
            lines.append(_Line(number, tokens))
    return lines


def _int(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise StructureParseError(f"expected an integer, got {token!r}", line, column) from None


def _element(token: str, n: int, line: int, column: int) -> int:
    value = _int(token, line, column)
    if not 0 <= value < n:
        raise StructureParseError(f"element {value} is outside 0..{n - 1}", line, column)
    return value


class _Parser:
    def __init__(self, text: str):
        self.lines = _lines(text)
        self.pos = 0
        self.last_line = len(text.splitlines()) or 1

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def next(self, what: str) -> _Line:
        if self.done():
            raise StructureParseError(f"unexpected end of input, expected {what}", self.last_line)
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def tuples(self, n: int, arity: Optional[int], header: _Line) -> list[tuple[tuple[int, ...], _Line]]:
        """Lines of indices up to `end`."""
        found = []
        while True:
            line = self.next(f"'end' closing the section opened on line {header.number}")
            if line.words == ["end"]:
                return found
            if arity is not None and len(line.tokens) != arity:
                raise StructureParseError(
                    f"expected {arity} elements, got {len(line.tokens)}", line.number, line.tokens[0][1]
                )
            found.append((tuple(_element(t, n, line.number, c) for t, c in line.tokens), line))

    def function(self, n: int, arity: int, header: _Line) -> tuple[int, ...]:
        table: dict[tuple[int, ...], int] = {}
        while True:
            line = self.next(f"'end' closing the section opened on line {header.number}")
            if line.words == ["end"]:
                break
            words = line.words
            if "->" not in words:
                raise StructureParseError("expected 'args -> value'", line.number, line.tokens[0][1])
            arrow = words.index("->")
            if arrow != arity or len(words) != arity + 2:
                raise StructureParseError(
                    f"expected {arity} arguments and one value", line.number, line.tokens[0][1]
                )
            args = tuple(_element(t, n, line.number, c) for t, c in line.tokens[:arity])
            if args in table:
                raise StructureParseError(f"duplicate arguments {args}", line.number, line.tokens[0][1])
            token, column = line.tokens[-1]
            table[args] = _element(token, n, line.number, column)
        missing = [args for args in itertools.product(range(n), repeat=arity) if args not in table]
        if missing:
            raise StructureParseError(
                f"function {header.words[1]} has no value for {missing[0]}", header.number, header.tokens[0][1]
            )
        return tuple(table[args] for args in itertools.product(range(n), repeat=arity))


def _pairs_relation(carrier: Carrier, pairs: Sequence[tuple[int, ...]], reflexive: bool) -> BinaryRelation:
    r = rel.from_pairs(carrier, [tuple(p) for p in pairs])
    return rel.union([r, rel.identity(carrier)]) if reflexive else r


def parse_text(text: str) -> StructureFile:
    parser = _Parser(text)
    header = parser.next("a header")
    words = header.words
    kind = words[0]
    if kind not in _HEADERS:
        raise StructureParseError(f"unknown header {kind!r}", header.number, header.tokens[0][1])
    size: Optional[int] = None
    if len(words) == 2:
        size = _int(words[1], header.number, header.tokens[1][1])
        if size < 1:
            raise StructureParseError("carrier size must be positive", header.number, header.tokens[1][1])
    elif len(words) != 1 or kind != "relational":
        raise StructureParseError(f"expected '{kind} N'", header.number, header.tokens[0][1])

    names: Optional[tuple[str, ...]] = None
    if not parser.done() and parser.lines[parser.pos].words[0] == "names:":
        line = parser.next("names")
        names = tuple(line.words[1:])
        if not names:
            raise StructureParseError("names: needs at least one name", line.number, line.tokens[0][1])
        if size is None:
            size = len(names)
        elif len(names) != size:
            raise StructureParseError(f"expected {size} names, got {len(names)}", line.number, line.tokens[0][1])
        if len(set(names)) != len(names):
            raise StructureParseError("element names must be distinct", line.number, line.tokens[0][1])
    if size is None:
        raise StructureParseError("relational files without a size need a names: line", header.number)
    carrier = Carrier(size, names or ())
    n = size

    sections: dict[str, object] = {}
    signature_relations: list[tuple[str, int]] = []
    signature_functions: list[tuple[str, int]] = []
    rel_tuples: dict[str, frozenset] = {}
    fun_tables: dict[str, tuple[int, ...]] = {}
    star_tuples: dict[str, tuple[frozenset, _Line]] = {}
    allowed = {
        "semilattice": {"join:", "spec:", "theta:"},
        "poset": {"order:", "spec:"},
        "relation": {"pairs:"},
        "relational": {"rel", "fun", "theta:", "star", "map:"},
    }[kind]

    while not parser.done():
        line = parser.next("a section")
        word, column = line.tokens[0]
        if word not in allowed:
            raise StructureParseError(f"unexpected {word!r} in a {kind} file", line.number, column)
        if word in sections:
            raise StructureParseError(f"duplicate section {word!r}", line.number, column)
        if word == "join:":
            rows = []
            for _ in range(n):
                row_line = parser.next("a join table row")
                if len(row_line.tokens) != n:
                    raise StructureParseError(
                        f"join rows need {n} entries, got {len(row_line.tokens)}",
                        row_line.number, row_line.tokens[0][1],
                    )
                rows.append([_int(t, row_line.number, c) for t, c in row_line.tokens])
            sections[word] = rows
        elif word in ("order:", "spec:", "theta:", "pairs:"):
            pairs = [t for t, _ in parser.tuples(n, 2, line)]
            sections[word] = _pairs_relation(carrier, pairs, reflexive=word != "pairs:")
        elif word == "map:":
            sections[word] = tuple(_element(t, 1 << 30, line.number, c) for t, c in line.tokens[1:])
        elif word in ("rel", "fun", "star"):
            expected = 2 if word == "star" else 3
            if len(line.tokens) != expected:
                usage = "star NAME" if word == "star" else f"{word} NAME ARITY"
                raise StructureParseError(f"expected '{usage}'", line.number, column)
            name = line.words[1]
            known = [s for s, _ in signature_relations] + [s for s, _ in signature_functions]
            if word == "star":
                arity = dict(signature_relations).get(name)
                if arity is None:
                    raise StructureParseError(f"star of undeclared relation {name!r}", line.number, line.tokens[1][1])
                if name in star_tuples:
                    raise StructureParseError(f"duplicate star section for {name!r}", line.number, column)
                star_tuples[name] = (frozenset(t for t, _ in parser.tuples(n, arity, line)), line)
                continue
            if name in known:
                raise StructureParseError(f"duplicate symbol {name!r}", line.number, line.tokens[1][1])
            arity = _int(line.words[2], line.number, line.tokens[2][1])
            if arity < (1 if word == "rel" else 0):
                raise StructureParseError(f"bad arity {arity}", line.number, line.tokens[2][1])
            if word == "rel":
                signature_relations.append((name, arity))
                rel_tuples[name] = frozenset(t for t, _ in parser.tuples(n, arity, line))
            else:
                signature_functions.append((name, arity))
                fun_tables[name] = parser.function(n, arity, line)

    if kind == "semilattice":
        if "join:" not in sections:
            raise StructureParseError("semilattice files need a join: section", parser.last_line)
        s = validate_semilattice(carrier, sections["join:"])
        spec = sections.get("spec:")
        theta = sections.get("theta:")
        if spec is not None:
            SpecializationSemilattice(s, spec)
        if theta is not None:
            Congruence(s, theta)
        return StructureFile(
            StructureKind.SPEC_SEMILATTICE if spec is not None else StructureKind.SEMILATTICE,
            carrier, semilattice=s, spec=spec, theta=theta,
        )
    if kind == "poset":
        if "order:" not in sections:
            raise StructureParseError("poset files need an order: section", parser.last_line)
        p = FinitePoset(carrier, sections["order:"])
        spec = sections.get("spec:")
        if spec is not None:
            SpecializationPoset(p, spec)
        return StructureFile(
            StructureKind.SPEC_POSET if spec is not None else StructureKind.POSET,
            carrier, poset=p, spec=spec,
        )
    if kind == "relation":
        return StructureFile(StructureKind.RELATION, carrier, relation=sections.get("pairs:", rel.empty(carrier)))

    signature = Signature(tuple(signature_relations), tuple(signature_functions))
    structure = FiniteStructure(
        signature,
        carrier,
        tuple(rel_tuples[name] for name, _ in signature_relations),
        tuple(fun_tables[name] for name, _ in signature_functions),
    )
    theta = sections.get("theta:")
    starred = None
    if theta is not None or star_tuples:
        if theta is None:
            first = min(line.number for _, line in star_tuples.values())
            raise StructureParseError("star sections need a theta: section", first)
        starred = tuple(star_tuples.get(name, (frozenset(), None))[0] for name, _ in signature_relations)
        AppropriateExpansion(structure, theta, starred)
    return StructureFile(
        StructureKind.RELATIONAL, carrier, structure=structure, theta=theta, starred=starred,
        mapping=sections.get("map:"),
    )


def parse(path) -> StructureFile:
    return parse_text(Path(path).read_text())


def _names_line(carrier: Carrier) -> list[str]:
    return [] if carrier.has_default_names else ["names: " + " ".join(carrier.names)]


def _pair_section(title: str, r: BinaryRelation, skip_diagonal: bool = True) -> list[str]:
    return [title, *(f"{a} {b}" for a, b in r.pairs() if not (skip_diagonal and a == b)), "end"]


def _tuple_lines(tuples) -> list[str]:
    return [" ".join(str(x) for x in t) for t in sorted(tuples)]


def format_structure(sf: StructureFile) -> str:
    carrier = sf.carrier
    n = carrier.size
    if sf.kind in (StructureKind.SEMILATTICE, StructureKind.SPEC_SEMILATTICE):
        lines = [f"semilattice {n}", *_names_line(carrier), "join:"]
        lines += [" ".join(str(v) for v in row) for row in sf.semilattice.join]
        if sf.spec is not None:
            lines += _pair_section("spec:", sf.spec)
        if sf.theta is not None:
            lines += _pair_section("theta:", sf.theta)
    elif sf.kind in (StructureKind.POSET, StructureKind.SPEC_POSET):
        lines = [f"poset {n}", *_names_line(carrier), *_pair_section("order:", sf.poset.order)]
        if sf.spec is not None:
            lines += _pair_section("spec:", sf.spec)
    elif sf.kind is StructureKind.RELATION:
        lines = [f"relation {n}", *_names_line(carrier), *_pair_section("pairs:", sf.relation, skip_diagonal=False)]
    else:
        a = sf.structure
        lines = [f"relational {n}", *_names_line(carrier)]
        for (name, arity), tuples in zip(a.signature.relations, a.relations):
            lines += [f"rel {name} {arity}", *_tuple_lines(tuples), "end"]
        for k, (name, arity) in enumerate(a.signature.functions):
            lines.append(f"fun {name} {arity}")
            for args in itertools.product(range(n), repeat=arity):
                lines.append(" ".join([*(str(x) for x in args), "->", str(a.apply(k, args))]))
            lines.append("end")
        if sf.theta is not None:
            lines += _pair_section("theta:", sf.theta)
            for (name, _), tuples in zip(a.signature.relations, sf.starred):
                lines += [f"star {name}", *_tuple_lines(tuples), "end"]
        if sf.mapping is not None:
            lines.append("map: " + " ".join(str(v) for v in sf.mapping))
    return "\n".join(lines) + "\n"


def semilattice_file(
    s: FiniteSemilattice, spec: Optional[BinaryRelation] = None, theta: Optional[BinaryRelation] = None
) -> StructureFile:
    kind = StructureKind.SPEC_SEMILATTICE if spec is not None else StructureKind.SEMILATTICE
    return StructureFile(kind, s.carrier, semilattice=s, spec=spec, theta=theta)


def poset_file(p: FinitePoset, spec: Optional[BinaryRelation] = None) -> StructureFile:
    kind = StructureKind.SPEC_POSET if spec is not None else StructureKind.POSET
    return StructureFile(kind, p.carrier, poset=p, spec=spec)


def relation_file(r: BinaryRelation) -> StructureFile:
    return StructureFile(StructureKind.RELATION, r.carrier, relation=r)


def structure_file(
    a: FiniteStructure,
    theta: Optional[BinaryRelation] = None,
    starred: Optional[Sequence[frozenset]] = None,
    mapping: Optional[Sequence[int]] = None,
) -> StructureFile:
    return StructureFile(
        StructureKind.RELATIONAL,
        a.carrier,
        structure=a,
        theta=theta,
        starred=None if starred is None else tuple(starred),
        mapping=None if mapping is None else tuple(mapping),
    )
