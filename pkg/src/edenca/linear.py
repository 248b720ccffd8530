"""Linear cellular automata over GF(2) and their kernel rank scans.

Convention: for ``phi = (gamma, delta)`` the first output coordinate of
the evolution is ``gamma * alpha + delta * beta`` (right convolution by
alpha and beta); the second coordinate is identically zero. A nonzero
finitely supported kernel element is therefore a common right multiple
relation between alpha and beta.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .automata import IntStates, LocalRule, Pattern, ProductStates, evolve_at
from .errors import BudgetExceeded, UsageError
from .groups import Element, FreeProduct, GenSet, Group, ball

GF2_PAIR = ProductStates([IntStates(2), IntStates(2)])
DEFAULT_MATRIX_BUDGET = 10**7


class AlgebraElement:
    """A finitely supported function ``G -> GF(2)``, stored as its support."""

    __slots__ = ("group", "support")

    def __init__(self, group: Group, support: Iterable[Element] = ()):
        supp = set()
        for g in support:
            if g.group != group:
                raise UsageError("support element from another group")
            supp ^= {g}
        self.group = group
        self.support = frozenset(supp)

    @classmethod
    def delta(cls, g: Element) -> "AlgebraElement":
        return cls(g.group, [g])

    @classmethod
    def parse(cls, group: Group, text: str) -> "AlgebraElement":
        text = text.strip()
        if text == "0":
            return cls(group)
        return cls(group, [group.parse(t) for t in text.split("+")])

    def __call__(self, g: Element) -> int:
        return 1 if g in self.support else 0

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.group, self.support ^ other.support)

    __sub__ = __add__

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return convolve(self, other)

    def __bool__(self):
        return bool(self.support)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.group == other.group and self.support == other.support

    def __hash__(self):
        return hash(self.support)

    def __str__(self):
        if not self.support:
            return "0"
        return " + ".join(str(g) for g in sorted(self.support, key=lambda g: g.key))

    __repr__ = __str__


def convolve(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """``(uv)(g) = sum_h u(h) v(h^-1 g)`` over GF(2)."""
    if u.group != v.group:
        raise UsageError("convolution of elements of different groups")
    out: set[Element] = set()
    for h in u.support:
        for k in v.support:
            out ^= {h * k}
    return AlgebraElement(u.group, out)


class LinearRule(LocalRule):
    """``theta(phi) = (sum_s alpha(s^-1) phi(s)_1 + beta(s^-1) phi(s)_2, 0)``
    with S the inverses of ``supp(alpha) u supp(beta)``, length-lex ordered."""

    def __init__(self, alpha: AlgebraElement, beta: AlgebraElement, name: str = "linear"):
        if not alpha and not beta:
            raise UsageError("alpha and beta cannot both be zero")
        if alpha.group != beta.group:
            raise UsageError("alpha and beta live in different groups")
        S = GenSet(sorted({g.inverse() for g in alpha.support | beta.support}, key=lambda g: g.key))
        super().__init__(GF2_PAIR, S, fn=self._theta, name=name)
        self.alpha = alpha
        self.beta = beta
        self._ca = [alpha(s.inverse()) for s in S]
        self._cb = [beta(s.inverse()) for s in S]

    def _theta(self, values):
        acc = 0
        for a, b, v in zip(self._ca, self._cb, values):
            acc ^= (a & v[0]) ^ (b & v[1])
        return (acc, 0)

    def summary(self):
        doc = super().summary()
        doc.update({"alpha": str(self.alpha), "beta": str(self.beta), "field": "GF(2)"})
        return doc


def build_linear_rule(alpha: AlgebraElement, beta: AlgebraElement, name: str = "linear") -> LinearRule:
    return LinearRule(alpha, beta, name)


def muller_rule() -> LinearRule:
    """alpha = x, beta = y + z on <x, y, z | x^2, y^2, z^2>."""
    G = FreeProduct((2, 2, 2))
    x, y, z = G.generators()
    return LinearRule(AlgebraElement(G, [x]), AlgebraElement(G, [y, z]), name="muller")


def goe_witness_linear(rule: LinearRule) -> Pattern:
    """``{e -> (0, 1)}``: the image never has a nonzero second coordinate."""
    return Pattern(rule.states, {rule.group.identity(): (0, 1)})


def pair_to_pattern(gamma: AlgebraElement, delta: AlgebraElement, domain: Iterable[Element]) -> Pattern:
    return Pattern(GF2_PAIR, {h: (gamma(h), delta(h)) for h in domain}, check=False)


def pattern_to_pair(p: Pattern) -> tuple[AlgebraElement, AlgebraElement]:
    group = next(iter(p)).group
    return (AlgebraElement(group, [h for h, v in p.items() if v[0]]),
            AlgebraElement(group, [h for h, v in p.items() if v[1]]))


# ---------------------------------------------------------------------------
# GF(2) matrices with rows packed into Python ints


def rref_gf2(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [r for r in rows if r]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        for i in range(rank, len(rows)):
            if rows[i] & bit:
                rows[rank], rows[i] = rows[i], rows[rank]
                break
        else:
            continue
        p = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= p
        pivots.append(col)
        rank += 1
    return rows[:rank], pivots


def nullspace_gf2(rows: list[int], ncols: int) -> list[int]:
    red, pivots = rref_gf2(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, p in zip(red, pivots):
            if r >> free & 1:
                v |= 1 << p
        basis.append(v)
    return basis


@dataclass
class PatchMatrix:
    """The evolution on patterns supported in ``cols``' elements, read off at ``rows``."""

    rows: list[tuple[Element, int]]
    cols: list[tuple[Element, int]]
    packed: list[int]

    def apply(self, vec: int) -> int:
        out = 0
        for i, r in enumerate(self.packed):
            if bin(r & vec).count("1") & 1:
                out |= 1 << i
        return out


def patch_matrix(rule: LocalRule, support: list[Element], budget: int = DEFAULT_MATRIX_BUDGET) -> PatchMatrix:
    """Matrix of a linear rule restricted to patterns supported in ``support``.

    Columns are unit patterns ``(h, coordinate)``; rows ``(g, coordinate)``
    run over ``support S^-1 u support``, outside of which the image of such
    a pattern vanishes. Entries come from evaluating the rule itself.
    """
    S = rule.S
    supp = set(support)
    row_elems = sorted(supp | {h * si for h in supp for si in S.inverses}, key=lambda g: g.key)
    cols = [(h, c) for h in support for c in (0, 1)]
    rows = [(g, c) for g in row_elems for c in (0, 1)]
    if len(rows) * len(cols) > budget:
        raise BudgetExceeded(f"{len(rows)}x{len(cols)} matrix exceeds budget {budget}")
    zero = (0, 0)
    packed = [0] * len(rows)
    for j, (h, c) in enumerate(cols):
        unit = (1, 0) if c == 0 else (0, 1)
        cfg = (lambda x, h=h, unit=unit: unit if x == h else zero)
        for i, g in enumerate(row_elems):
            v = evolve_at(rule, cfg, g)
            if v[0]:
                packed[2 * i] |= 1 << j
            if v[1]:
                packed[2 * i + 1] |= 1 << j
    return PatchMatrix(rows, cols, packed)


@dataclass
class KernelReport:
    radius: int
    num_rows: int
    num_cols: int
    rank: int
    basis: list[Pattern] = dc_field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.basis

    def to_document(self) -> dict:
        return {"radius": self.radius, "rows": self.num_rows, "cols": self.num_cols,
                "rank": self.rank, "kernel_dimension": len(self.basis),
                "basis": [p.to_document()["cells"] for p in self.basis]}


def kernel_scan(rule: LocalRule, radius: int, budget: int = DEFAULT_MATRIX_BUDGET) -> KernelReport:
    """Basis of the patterns supported in ``B_radius`` that evolve to zero.

    An empty basis certifies there is no MEP whose difference lies in the
    ball; a basis vector ``(gamma, delta)`` satisfies
    ``gamma * alpha = delta * beta``.
    """
    if radius < 0:
        raise UsageError("radius must be >= 0")
    B = ball(rule.group, None, radius)
    mat = patch_matrix(rule, B, budget)
    red, pivots = rref_gf2(mat.packed, len(mat.cols))
    basis = []
    for v in nullspace_gf2(mat.packed, len(mat.cols)):
        cells = {h: [0, 0] for h in B}
        for j, (h, c) in enumerate(mat.cols):
            if v >> j & 1:
                cells[h][c] = 1
        basis.append(Pattern(GF2_PAIR, {h: tuple(a) for h, a in cells.items()}, check=False))
    return KernelReport(radius, len(mat.rows), len(mat.cols), len(pivots), basis)
