"""Automata with mutually erasable patterns but no Garden of Eden.

``FieldRule`` is built from a 2:1 compressing vector field; its state
``(s, alpha, p)`` says "my arrow leaves along s, I carry bit alpha and
payload p". A cell's new state is assembled from the two neighbours whose
arrows point at it; the bit of the second one is never read, which is
what makes single-cell flips erasable.

``GeneralRule`` does the same for an m:n correspondence with n slots per
cell. Preimages are built constructively, so surjectivity is checked by
round-trip rather than by search.
"""
from __future__ import annotations

from typing import Hashable

from .automata import ElementStates, IntStates, LocalRule, Pattern, ProductStates, product_set
from .correspondence import Correspondence
from .errors import DataError, UsageError
from .groups import Element


def field_states(S) -> ProductStates:
    return ProductStates([ElementStates(S), IntStates(2), ElementStates(S)])


class FieldRule(LocalRule):
    """``theta(phi) = (p, alpha, q)`` for the minimal pair ``s < t`` with
    ``phi(s) = (s, alpha, p)`` and ``phi(t) = (t, beta, q)``; ``q0`` otherwise."""

    def __init__(self, field):
        S = field.S
        super().__init__(field_states(S), S, fn=self._theta, name="field")
        self.field = field
        self.q0 = self.states[0]

    def _theta(self, values: tuple):
        first = None
        for s, v in zip(self.S, values):
            if v[0] == s:
                if first is None:
                    first = v
                else:
                    return (first[2], first[1], v[2])
        return self.q0

    def summary(self) -> dict:
        doc = super().summary()
        doc.update({"m": 2, "n": 1, "field": self.field.fingerprint()})
        return doc


def build_theta(field) -> FieldRule:
    return FieldRule(field)


def _filler(rule: FieldRule, z: Element):
    return (rule.field.displacement(z), 0, rule.S[0])


def preimage(rule: FieldRule, phi: Pattern) -> Pattern:
    """A pattern on ``Y u YS`` whose evolution restricted to ``Y`` is ``phi``."""
    field, S = rule.field, rule.S
    psi: dict[Element, Hashable] = {}
    ys = phi.sorted_domain()
    for x in ys:
        p, alpha, q = phi[x]
        first, second = field.fiber(x)
        psi[first] = (x.inverse() * first, alpha, p)
        psi[second] = (x.inverse() * second, 0, q)
    for z in set(ys) | product_set(ys, S):
        if z not in psi:
            psi[z] = _filler(rule, z)
    return Pattern(rule.states, psi, check=False)


def mep_witness(rule: FieldRule, y: Element, phi: Pattern, position: int = 2):
    """``(psi, psi', Y)`` with psi, psi' differing only at one fiber element
    of ``y``. The default ``position=2`` flips the unread bit at ``yt``;
    ``position=1`` flips the alpha carrier instead, which is visible."""
    if y not in phi:
        raise UsageError(f"{y} is not in the pattern's domain")
    if position not in (1, 2):
        raise UsageError("position must be 1 or 2")
    psi = preimage(rule, phi)
    yt = rule.field.fiber(y)[position - 1]
    cells = dict(psi)
    for z in product_set(product_set([yt], rule.S.inverses), rule.S) | {yt}:
        if z not in cells:
            cells[z] = _filler(rule, z)
    psi = Pattern(rule.states, cells, check=False)
    t, bit, q = cells[yt]
    psi2 = psi.replace({yt: (t, 1 - bit, q)})
    return psi, psi2, {yt}


# ---------------------------------------------------------------------------
# m:n generalization


def general_states(S, n: int) -> ProductStates:
    slot = ProductStates([ElementStates(S), IntStates(2)] + [ElementStates(S)] * n)
    return ProductStates([slot] * n)


class GeneralRule(LocalRule):
    """The slot automaton of an m:n correspondence, m > n.

    A slot is ``(s, alpha, t_1..t_n)``. The rule takes the first m pairs
    ``(s, k)`` (S order, then slot) whose slot ``k`` of ``phi(s)`` starts
    with ``s``; output slot i is ``(t_{1,i}, alpha_i, t_{2,i}, .., t_{n+1,i})``.
    """

    def __init__(self, corr: Correspondence):
        if not corr.m > corr.n >= 1:
            raise UsageError("need m > n >= 1")
        S = corr.S
        super().__init__(general_states(S, corr.n), S, fn=self._theta, name="general")
        self.corr = corr
        self.m, self.n = corr.m, corr.n
        self.q0 = self.states[0]

    def _theta(self, values: tuple):
        m, n = self.m, self.n
        picked = []
        for s, v in zip(self.S, values):
            for slot in v:
                if slot[0] == s:
                    picked.append(slot)
                    if len(picked) == m:
                        return tuple(
                            (picked[0][2 + i], picked[i][1]) + tuple(picked[j][2 + i] for j in range(1, n + 1))
                            for i in range(n))
        return self.q0

    def summary(self) -> dict:
        doc = super().summary()
        fp = getattr(self.corr, "fingerprint", None)
        doc.update({"m": self.m, "n": self.n, "correspondence": fp() if fp else None})
        return doc


def build_theta_general(corr: Correspondence) -> GeneralRule:
    return GeneralRule(corr)


def _row_directions(corr: Correspondence, z: Element) -> list[tuple[Element, Element]]:
    """``(target, direction)`` per outgoing arrow of z, with multiplicity."""
    out = []
    total = 0
    for w, k in corr.row(z):
        d = w.inverse() * z
        if d not in corr.S:
            raise DataError(f"arrow {z} -> {w} cannot be read through S")
        out.extend([(w, d)] * k)
        total += k
    if total != corr.n:
        raise DataError(f"row sum at {z} is {total}, expected {corr.n}")
    return out


def _complete_cell(rule: GeneralRule, z: Element, slots: list, used: list[Element]):
    """Fill the free slots of z with its not-yet-allocated arrows."""
    remaining = list(_row_directions(rule.corr, z))
    for w in used:
        for i, (t, _) in enumerate(remaining):
            if t == w:
                del remaining[i]
                break
        else:
            raise DataError(f"slot at {z} points to {w}, which is not an arrow of {z}")
    free = [k for k, v in enumerate(slots) if v is None]
    if len(free) != len(remaining):
        raise DataError(f"slot count mismatch at {z}")
    pad = (rule.S[0],) * rule.n
    for k, (_, d) in zip(free, remaining):
        slots[k] = (d, 0) + pad
    return tuple(slots)


def preimage_general(rule: GeneralRule, phi: Pattern) -> Pattern:
    """Constructive preimage for the slot automaton on ``Y u YS``.

    Cells of Y are processed in length-lex order; each incoming arrow takes
    the lowest free slot of its source.
    """
    corr, S, m, n = rule.corr, rule.S, rule.m, rule.n
    slots: dict[Element, list] = {}
    used: dict[Element, list[Element]] = {}
    ys = phi.sorted_domain()
    pad = rule.S[0]
    for x in ys:
        col = corr.column(x)
        if sum(k for _, k in col) != m:
            raise DataError(f"column sum at {x} is {sum(k for _, k in col)}, expected {m}")
        xi = x.inverse()
        arrows = []
        for z, k in col:
            s = xi * z
            if s not in S:
                raise DataError(f"arrow {z} -> {x} cannot be read through S")
            cell = slots.setdefault(z, [None] * n)
            for _ in range(k):
                try:
                    free = cell.index(None)
                except ValueError:
                    raise DataError(f"no free slot left at {z}") from None
                cell[free] = True
                used.setdefault(z, []).append(x)
                arrows.append((S.index(s), free, z, s))
        arrows.sort(key=lambda a: (a[0], a[1]))
        out = phi[x]
        for j, (_, k, z, s) in enumerate(arrows):
            alpha = out[j][1] if j < n else 0
            if j == 0:
                payload = tuple(out[i][0] for i in range(n))
            elif j <= n:
                payload = tuple(out[i][1 + j] for i in range(n))
            else:
                payload = (pad,) * n
            slots[z][k] = (s, alpha) + payload
    psi = {}
    for z in sorted(set(ys) | product_set(ys, S), key=lambda z: z.key):
        psi[z] = _complete_cell(rule, z, slots.get(z, [None] * n), used.get(z, []))
    return Pattern(rule.states, psi, check=False)


def _incoming_slots(rule: GeneralRule, psi: Pattern, y: Element) -> list[tuple[Element, int]]:
    found = []
    for s in rule.S:
        z = y * s
        for k, slot in enumerate(psi[z]):
            if slot[0] == s:
                found.append((z, k))
    return found


def mep_witness_general(rule: GeneralRule, y: Element, phi: Pattern, position: int | None = None):
    """Flip the bit of the incoming slot sorted at ``position`` (1-based,
    default m, which is never read)."""
    if y not in phi:
        raise UsageError(f"{y} is not in the pattern's domain")
    position = rule.m if position is None else position
    psi = preimage_general(rule, phi)
    z, k = _incoming_slots(rule, psi, y)[position - 1]
    cells = dict(psi)
    for w in product_set(product_set([z], rule.S.inverses), rule.S) | {z}:
        if w not in cells:
            cells[w] = _complete_cell(rule, w, [None] * rule.n, [])
    psi = Pattern(rule.states, cells, check=False)
    slot = cells[z][k]
    flipped = list(cells[z])
    flipped[k] = (slot[0], 1 - slot[1]) + slot[2:]
    psi2 = psi.replace({z: tuple(flipped)})
    return psi, psi2, {z}


def as_general_state(state):
    """Rename a field-rule state ``(s, a, t)`` to the n = 1 slot state ``((s, a, t),)``."""
    return (tuple(state),)
