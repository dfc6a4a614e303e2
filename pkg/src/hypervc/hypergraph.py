"""Weighted k-partite k-uniform hypergraphs, covers and independent sets.

Invariants
- every edge takes exactly one vertex from each part;
- no duplicate edges under the canonical order;
- weights are nonnegative exact rationals; vertex ids unique across parts.

Instances are immutable values; canonical serialization is byte-deterministic
(vertices sorted within parts, edges sorted by part then lexicographically).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .rational import format_rational, parse_rational

Edge = tuple[str, ...]


class UnknownVertexError(KeyError):
    """A vertex id that does not occur in the hypergraph."""


class ParseError(ValueError):
    """Malformed hypergraph document; message names the offending field."""


@dataclass(frozen=True)
class PartiteHypergraph:
    """A k-partite k-uniform hypergraph with rational vertex weights.

    Construct through :meth:`make`, which canonicalizes part and edge order.
    Weights not listed default to 1.
    """

    k: int
    parts: tuple[tuple[str, ...], ...]
    weights: Mapping[str, Fraction]
    edges: tuple[Edge, ...]

    @classmethod
    def make(
        cls,
        k: int,
        parts: Sequence[Sequence[str]],
        weights: Optional[Mapping[str, Fraction]] = None,
        edges: Iterable[Sequence[str]] = (),
    ) -> "PartiteHypergraph":
        canon_parts = tuple(tuple(sorted(p)) for p in parts)
        part_of: dict[str, int] = {}
        for idx, part in enumerate(canon_parts):
            for v in part:
                part_of.setdefault(v, idx)
        wts = {v: Fraction(w) for v, w in (weights or {}).items() if Fraction(w) != 1}

        def canon_edge(e: Sequence[str]) -> Edge:
            # Sort by part index; unknown vertices sort last so validate can flag them.
            return tuple(sorted(e, key=lambda v: (part_of.get(v, len(canon_parts)), v)))

        canon_edges = tuple(sorted(set(canon_edge(e) for e in edges)))
        return cls(k=k, parts=canon_parts, weights=wts, edges=canon_edges)

    # -- lookups ---------------------------------------------------------

    @cached_property
    def part_of(self) -> Mapping[str, int]:
        out: dict[str, int] = {}
        for idx, part in enumerate(self.parts):
            for v in part:
                out.setdefault(v, idx)
        return out

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(v for part in self.parts for v in part)

    def weight(self, v: str) -> Fraction:
        if v not in self.vertex_set:
            raise UnknownVertexError(v)
        return self.weights.get(v, Fraction(1))

    def set_weight(self, s: Iterable[str]) -> Fraction:
        return sum((self.weight(v) for v in set(s)), Fraction(0))

    def total_weight(self) -> Fraction:
        return self.set_weight(self.vertex_set)

    # -- invariants ------------------------------------------------------

    def validate(self) -> list[str]:
        """Return all invariant violations (empty list means valid)."""
        violations: list[str] = []
        if self.k < 1:
            violations.append(f"k must be positive, got {self.k}")
        if len(self.parts) != self.k:
            violations.append(f"expected {self.k} parts, got {len(self.parts)}")
        seen: dict[str, int] = {}
        for idx, part in enumerate(self.parts):
            for v in part:
                if v in seen:
                    violations.append(
                        f"vertex {v!r} occurs in parts {seen[v]} and {idx}"
                    )
                seen[v] = idx
        for v, w in self.weights.items():
            if v not in seen:
                violations.append(f"weight given for unknown vertex {v!r}")
            if w < 0:
                violations.append(f"negative weight {w} on vertex {v!r}")
        for e in self.edges:
            if len(e) != self.k:
                violations.append(f"edge {e} has {len(e)} vertices, expected {self.k}")
                continue
            hit: dict[int, str] = {}
            bad = False
            for v in e:
                if v not in seen:
                    violations.append(f"edge {e} uses unknown vertex {v!r}")
                    bad = True
                    continue
                p = seen[v]
                if p in hit:
                    violations.append(
                        f"edge {e} has vertices {hit[p]!r} and {v!r} both in part {p}"
                    )
                    bad = True
                hit[p] = v
            if not bad and len(hit) != self.k:
                violations.append(f"edge {e} misses some part")
        if len(set(self.edges)) != len(self.edges):
            violations.append("duplicate edges under canonical ordering")
        return violations

    def _check_known(self, s: Iterable[str]) -> frozenset[str]:
        ss = frozenset(s)
        unknown = ss - self.vertex_set
        if unknown:
            raise UnknownVertexError(sorted(unknown)[0])
        return ss

    def is_cover(self, s: Iterable[str]) -> tuple[bool, Optional[Edge]]:
        """True iff every edge intersects s; else also the first uncovered edge."""
        ss = self._check_known(s)
        for e in self.edges:
            if ss.isdisjoint(e):
                return False, e
        return True, None

    def is_independent(self, s: Iterable[str]) -> tuple[bool, Optional[Edge]]:
        """True iff no edge is contained in s; else also the first contained edge."""
        ss = self._check_known(s)
        for e in self.edges:
            if ss.issuperset(e):
                return False, e
        return True, None

    # -- serialization ---------------------------------------------------

    def to_obj(self) -> dict:
        return {
            "k": self.k,
            "parts": [list(p) for p in self.parts],
            "weights": {
                v: format_rational(w) for v, w in sorted(self.weights.items())
            },
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_obj(cls, obj: object) -> "PartiteHypergraph":
        if not isinstance(obj, dict):
            raise ParseError("document root must be a JSON object")
        for key in ("k", "parts", "edges"):
            if key not in obj:
                raise ParseError(f"missing field {key!r}")
        k = obj["k"]
        if not isinstance(k, int):
            raise ParseError(f"field 'k' must be an integer, got {k!r}")
        parts = obj["parts"]
        if not isinstance(parts, list) or not all(
            isinstance(p, list) and all(isinstance(v, str) for v in p) for p in parts
        ):
            raise ParseError("field 'parts' must be a list of lists of vertex ids")
        weights = {}
        for v, w in (obj.get("weights") or {}).items():
            try:
                weights[v] = parse_rational(w)
            except ValueError as exc:
                raise ParseError(f"weights[{v!r}]: {exc}") from None
        edges = obj["edges"]
        if not isinstance(edges, list):
            raise ParseError("field 'edges' must be a list")
        for i, e in enumerate(edges):
            if not isinstance(e, list) or not all(isinstance(v, str) for v in e):
                raise ParseError(f"edges[{i}] must be a list of vertex ids")
        return cls.make(k=k, parts=parts, weights=weights, edges=edges)

    def serialize(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def parse(cls, text: str) -> "PartiteHypergraph":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno} col {exc.colno}: {exc.msg}") from None
        return cls.from_obj(obj)


@dataclass(frozen=True)
class CoverCertificate:
    """A vertex set claimed to intersect every edge, with its exact weight."""

    vertex_set: frozenset[str]
    weight: Fraction

    @classmethod
    def of(cls, h: PartiteHypergraph, s: Iterable[str]) -> "CoverCertificate":
        ss = frozenset(s)
        return cls(vertex_set=ss, weight=h.set_weight(ss))

    def check(self, h: PartiteHypergraph) -> list[str]:
        problems = []
        ok, witness = h.is_cover(self.vertex_set)
        if not ok:
            problems.append(f"edge {witness} not covered")
        if h.set_weight(self.vertex_set) != self.weight:
            problems.append("declared weight inconsistent with members")
        return problems


@dataclass(frozen=True)
class IndependentSetCertificate:
    """A vertex set claimed to contain no edge, with its exact weight."""

    vertex_set: frozenset[str]
    weight: Fraction

    @classmethod
    def of(cls, h: PartiteHypergraph, s: Iterable[str]) -> "IndependentSetCertificate":
        ss = frozenset(s)
        return cls(vertex_set=ss, weight=h.set_weight(ss))

    def check(self, h: PartiteHypergraph) -> list[str]:
        problems = []
        ok, witness = h.is_independent(self.vertex_set)
        if not ok:
            problems.append(f"edge {witness} contained in the set")
        if h.set_weight(self.vertex_set) != self.weight:
            problems.append("declared weight inconsistent with members")
        return problems


@dataclass(frozen=True)
class FractionalSolution:
    """Per-vertex LP values in [0,1] with their exact objective."""

    values: Mapping[str, Fraction]
    objective: Fraction

    @classmethod
    def of(
        cls, h: PartiteHypergraph, values: Mapping[str, Fraction]
    ) -> "FractionalSolution":
        vals = {v: Fraction(values.get(v, 0)) for v in h.vertex_set}
        obj = sum((h.weight(v) * x for v, x in vals.items()), Fraction(0))
        return cls(values=vals, objective=obj)

    def violations(self, h: PartiteHypergraph) -> list[str]:
        problems = []
        for v in h.vertex_set:
            x = self.values.get(v, Fraction(0))
            if not (0 <= x <= 1):
                problems.append(f"value of {v!r} = {x} outside [0,1]")
        for e in h.edges:
            s = sum((self.values.get(v, Fraction(0)) for v in e), Fraction(0))
            if s < 1:
                problems.append(f"edge {e} has value sum {s} < 1")
        obj = sum(
            (h.weight(v) * self.values.get(v, Fraction(0)) for v in h.vertex_set),
            Fraction(0),
        )
        if obj != self.objective:
            problems.append(f"objective {self.objective} != recomputed {obj}")
        return problems

    def to_obj(self) -> dict:
        return {
            "values": {v: format_rational(x) for v, x in sorted(self.values.items())},
            "objective": format_rational(self.objective),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "FractionalSolution":
        values = {v: parse_rational(x) for v, x in obj["values"].items()}
        return cls(values=values, objective=parse_rational(obj["objective"]))
