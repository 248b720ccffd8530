"""An explicit 2:1 compressing vector field on tree-like Cayley graphs.

Applies to free groups of rank >= 2 and free products of >= 3 copies of
C2, with S the standard (symmetric) generating set. Every vertex of the
Cayley tree is rooted at the identity; a child either points back to its
parent ("P1") or forward to its own minimal child ("D"). A vertex that
its parent points to keeps one P1 child, any other vertex keeps two, so
every fiber has exactly two elements.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field

from .errors import NotCompressible
from .groups import Element, FreeGroup, FreeProduct, GenSet, Group, ball_layers

P1 = "P1"
D = "D"
ROOT = "root"


class TreeField:
    """The field ``f`` with ``f(x)^-1 x in S`` and ``#f^-1(x) = 2``."""

    def __init__(self, group: Group, S: GenSet | None = None):
        std = group.standard_genset()
        S = S if S is not None else std
        if isinstance(group, FreeGroup):
            if group.rank < 2:
                raise NotCompressible("free group of rank 1 has a degree-2 Cayley tree")
            self._letters = lambda x: x.word
            self._inv_letter = lambda l: l ^ 1
        elif isinstance(group, FreeProduct) and all(o == 2 for o in group.orders):
            if len(group.orders) < 3:
                raise NotCompressible("C2*C2 has a degree-2 Cayley tree")
            self._letters = lambda x: tuple(f for f, _ in x.word)
            self._inv_letter = lambda l: l
        else:
            raise NotCompressible(f"Cayley graph of {group.label} is not a tree of degree >= 3")
        if S != std:
            raise NotCompressible("construction needs S = generators and inverses in canonical order")
        self.group = group
        self.S = S
        self.degree = len(S)
        self._memo: dict[Element, tuple[str, int]] = {}

    # Letter l of the tree alphabet is the edge labelled S[l].
    def _children(self, last: int | None) -> list[int]:
        if last is None:
            return list(range(self.degree))
        bad = self._inv_letter(last)
        return [l for l in range(self.degree) if l != bad]

    def status(self, x: Element) -> tuple[str, int]:
        """``(kind, t)``: kind is P1, D or root; t = 1 iff the parent maps to x."""
        hit = self._memo.get(x)
        if hit is not None:
            return hit
        kind, t, last = ROOT, 0, None
        for l in self._letters(x):
            rank = self._children(last).index(l)
            if kind == ROOT:
                new_kind = P1 if rank < 2 else D
                new_t = 1 if rank == 2 else 0
            else:
                new_kind = P1 if rank < (1 if t else 2) else D
                new_t = 1 if (kind == D and rank == 0) else 0
            kind, t, last = new_kind, new_t, l
        self._memo[x] = (kind, t)
        return kind, t

    def __call__(self, x: Element) -> Element:
        letters = self._letters(x)
        if not letters:
            return x * self.S[2]
        kind, _ = self.status(x)
        last = letters[-1]
        if kind == P1:
            return x * self.S[self._inv_letter(last)]
        return x * self.S[self._children(last)[0]]

    def fiber(self, x: Element) -> list[Element]:
        """``f^-1(x)``, ordered by the displacement ``x^-1 y`` in S."""
        letters = self._letters(x)
        last = letters[-1] if letters else None
        kind, t = self.status(x)
        kids = self._children(last)
        out = [(l, x * self.S[l]) for l in kids[: 1 if t else 2]]
        if t:
            out.append((self._inv_letter(last), x * self.S[self._inv_letter(last)]))
        out.sort()
        return [y for _, y in out]

    def displacement(self, y: Element) -> Element:
        """``f(y)^-1 y``, the arrow direction seen from the target."""
        return self(y).inverse() * y

    def fingerprint(self, radius: int = 3) -> str:
        layers = ball_layers(self.group, self.S, radius)
        text = ";".join(f"{x}>{self(x)}" for layer in layers for x in layer)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def build_tree_field(group: Group, S: GenSet | None = None) -> TreeField:
    return TreeField(group, S)


@dataclass
class FieldReport:
    radius: int
    checked: int
    violations: list[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {"radius": self.radius, "interior_vertices": self.checked,
                "violations": self.violations, "ok": self.ok}


def verify_field(field, radius: int, S: GenSet | None = None) -> FieldReport:
    """Check displacement and fiber size on ``B_{radius-1}``.

    Fibers are recounted by brute force: every preimage of an interior
    vertex lies in ``B_radius``, so inverting ``f`` over that ball is exact.
    The fiber oracle, when the field has one, must agree with the recount.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    S = S if S is not None else field.S
    layers = ball_layers(field.group, S, radius)
    inner = [x for layer in layers[:-1] for x in layer]
    pre: dict[Element, list[Element]] = {}
    for layer in layers:
        for y in layer:
            pre.setdefault(field(y), []).append(y)
    report = FieldReport(radius=radius, checked=len(inner))
    has_fiber = hasattr(field, "fiber")
    for x in inner:
        d = field(x).inverse() * x
        if d not in S:
            report.violations.append({"element": str(x), "kind": "displacement", "value": str(d)})
        found = pre.get(x, [])
        if len(found) != 2:
            report.violations.append({"element": str(x), "kind": "fiber_size",
                                      "fiber": sorted(str(y) for y in found)})
        elif has_fiber and set(field.fiber(x)) != set(found):
            report.violations.append({"element": str(x), "kind": "fiber_oracle",
                                      "fiber": sorted(str(y) for y in found)})
    return report


def field_to_dot(field: TreeField, radius: int) -> str:
    """DOT graph of the field on a ball: arrows x -> f(x), P1 blue, D red."""
    colors = {P1: "blue", D: "red", ROOT: "black"}
    lines = ["digraph field {", '  node [shape=circle, fontsize=10];']
    nodes = [x for layer in ball_layers(field.group, field.S, radius) for x in layer]
    inside = set(nodes)
    for x in nodes:
        kind, t = field.status(x)
        lines.append(f'  "{x}" [color={colors[kind]}, label="{x}\\n{kind}{"*" if t else ""}"];')
    for x in nodes:
        y = field(x)
        if y in inside:
            kind, _ = field.status(x)
            lines.append(f'  "{x}" -> "{y}" [color={colors[kind]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
