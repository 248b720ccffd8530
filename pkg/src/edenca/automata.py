"""Cellular automata on groups: state sets, local rules, patterns, and
the finite certificates for Gardens of Eden and mutually erasable patterns.

A local rule ``theta: Q^S -> Q`` acts on configurations by
``Theta(phi)(x) = theta(s -> phi(x s))``.
"""
from __future__ import annotations

import json
from collections.abc import Mapping
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import BudgetExceeded, DataError, UsageError
from .groups import Element, GenSet, Group, group_from_name, parse_genset

DEFAULT_BUDGET = 10**8
TABLE_LIMIT = 10**6


# ---------------------------------------------------------------------------
# state sets


class StateSet:
    """A finite ordered set of states with an index <-> state bijection.

    Index order is the canonical state order; ``states[0]`` is the minimum.
    """

    def __len__(self) -> int:
        raise NotImplementedError

    def __getitem__(self, i: int):
        raise NotImplementedError

    def index(self, state) -> int:
        raise NotImplementedError

    def __contains__(self, state) -> bool:
        try:
            self.index(state)
        except (KeyError, ValueError, TypeError, IndexError):
            return False
        return True

    def __iter__(self) -> Iterator:
        for i in range(len(self)):
            yield self[i]

    def format(self, state) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, StateSet) and self.describe() == other.describe()

    def __hash__(self):
        return hash(json.dumps(self.describe(), sort_keys=True))


class IntStates(StateSet):
    """States ``0 .. k-1``."""

    def __init__(self, k: int):
        if k < 1:
            raise UsageError("state set must be nonempty")
        self.k = k

    def __len__(self):
        return self.k

    def __getitem__(self, i):
        if not 0 <= i < self.k:
            raise IndexError(i)
        return i

    def index(self, state):
        if isinstance(state, bool) or not isinstance(state, int) or not 0 <= state < self.k:
            raise ValueError(state)
        return state

    def format(self, state):
        return str(state)

    def parse(self, text):
        return self.index(int(text))

    def describe(self):
        return {"type": "int", "size": self.k}


class LabelStates(StateSet):
    """States are the given (distinct) label strings, in the given order."""

    def __init__(self, labels: Sequence[str]):
        self.labels = tuple(labels)
        if not self.labels or len(set(self.labels)) != len(self.labels):
            raise UsageError("labels must be nonempty and distinct")
        self._index = {s: i for i, s in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def index(self, state):
        return self._index[state]

    def format(self, state):
        return state

    def parse(self, text):
        if text not in self._index:
            raise ValueError(text)
        return text

    def describe(self):
        return {"type": "labels", "labels": list(self.labels)}


class ElementStates(StateSet):
    """States are the elements of an ordered set S (used for arrow directions)."""

    def __init__(self, S: GenSet):
        self.S = S

    def __len__(self):
        return len(self.S)

    def __getitem__(self, i):
        return self.S[i]

    def index(self, state):
        return self.S.index(state)

    def format(self, state):
        return str(state)

    def parse(self, text):
        x = self.S.group.parse(text)
        self.S.index(x)
        return x

    def describe(self):
        return {"type": "elements", "group": self.S.group.label, "elements": self.S.names()}


class ProductStates(StateSet):
    """Cartesian product of state sets; states are tuples, ordered lexicographically."""

    def __init__(self, factors: Sequence[StateSet]):
        self.factors = tuple(factors)
        if not self.factors:
            raise UsageError("empty product")
        self._size = 1
        for f in self.factors:
            self._size *= len(f)

    def __len__(self):
        return self._size

    def __getitem__(self, i):
        if not 0 <= i < self._size:
            raise IndexError(i)
        out = []
        for f in reversed(self.factors):
            i, r = divmod(i, len(f))
            out.append(f[r])
        return tuple(reversed(out))

    def index(self, state):
        if not isinstance(state, tuple) or len(state) != len(self.factors):
            raise ValueError(state)
        i = 0
        for f, v in zip(self.factors, state):
            i = i * len(f) + f.index(v)
        return i

    def format(self, state):
        return "(" + ",".join(f.format(v) for f, v in zip(self.factors, state)) + ")"

    def parse(self, text):
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(text)
        parts = _split_top(text[1:-1])
        if len(parts) != len(self.factors):
            raise ValueError(text)
        return tuple(f.parse(p) for f, p in zip(self.factors, parts))

    def describe(self):
        return {"type": "product", "factors": [f.describe() for f in self.factors]}


def _split_top(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return parts


def states_from_description(desc: dict) -> StateSet:
    kind = desc.get("type")
    if kind == "int":
        return IntStates(int(desc["size"]))
    if kind == "labels":
        return LabelStates(desc["labels"])
    if kind == "elements":
        group = group_from_name(desc["group"])
        return ElementStates(parse_genset(group, desc["elements"]))
    if kind == "product":
        return ProductStates([states_from_description(f) for f in desc["factors"]])
    raise DataError(f"unknown state set type {kind!r}")


# ---------------------------------------------------------------------------
# local rules


class LocalRule:
    """A local rule ``theta: Q^S -> Q``.

    Backed either by a pure function of the tuple ``(phi(s) for s in S)``
    or by a table of state indices in odometer order (first neighbour most
    significant).
    """

    def __init__(self, states: StateSet, S: GenSet, fn: Callable[[tuple], Hashable] | None = None,
                 table: Sequence[int] | None = None, name: str = ""):
        if (fn is None) == (table is None):
            raise UsageError("give exactly one of fn or table")
        if table is not None and len(table) != len(states) ** len(S):
            raise UsageError(f"table needs {len(states) ** len(S)} entries")
        self.states = states
        self.S = S
        self.name = name
        self._fn = fn
        self._table = list(table) if table is not None else None
        self._q = len(states)

    @property
    def group(self) -> Group:
        return self.S.group

    @property
    def table_backed(self) -> bool:
        return self._table is not None

    def __call__(self, values: Sequence):
        if self._table is not None:
            i = 0
            for v in values:
                i = i * self._q + self.states.index(v)
            return self.states[self._table[i]]
        return self._fn(tuple(values))

    @classmethod
    def from_table(cls, states: StateSet, S: GenSet, table: Sequence[int], name: str = "") -> "LocalRule":
        return cls(states, S, table=table, name=name)

    def tabulate(self) -> "LocalRule":
        """Table-backed copy; refused above ``TABLE_LIMIT`` entries."""
        size = len(self.states) ** len(self.S)
        if size > TABLE_LIMIT:
            raise BudgetExceeded(f"table of {size} entries exceeds {TABLE_LIMIT}")
        table = [self.states.index(self(a)) for a in odometer(self.states, len(self.S))]
        return LocalRule(self.states, self.S, table=table, name=self.name)

    def summary(self) -> dict:
        return {"name": self.name, "S": self.S.names(), "num_states": len(self.states),
                "q0": self.states.format(self.states[0])}

    def __repr__(self):
        return f"LocalRule({self.name or '?'}, |Q|={len(self.states)}, S={self.S.names()})"


def odometer(states: StateSet, width: int) -> Iterator[tuple]:
    """All tuples of ``width`` states, last position fastest."""
    q = len(states)
    idx = [0] * width
    vals = [states[0]] * width
    while True:
        yield tuple(vals)
        pos = width - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < q:
                vals[pos] = states[idx[pos]]
                break
            idx[pos] = 0
            vals[pos] = states[0]
            pos -= 1
        if pos < 0:
            return


# ---------------------------------------------------------------------------
# patterns and configurations


class Pattern(Mapping):
    """A finite map from group elements to states (a patch)."""

    def __init__(self, states: StateSet, cells: Mapping[Element, Hashable] | Iterable, check: bool = True):
        self.states = states
        self._cells = dict(cells)
        if check:
            for x, v in self._cells.items():
                if not isinstance(x, Element):
                    raise UsageError(f"pattern keys must be group elements, got {x!r}")
                if v not in states:
                    raise UsageError(f"{v!r} at {x} is not a state")

    def __getitem__(self, x):
        return self._cells[x]

    def __iter__(self):
        return iter(self._cells)

    def __len__(self):
        return len(self._cells)

    @property
    def domain(self) -> frozenset:
        return frozenset(self._cells)

    def sorted_domain(self) -> list[Element]:
        return sorted(self._cells, key=lambda x: x.key)

    def restrict(self, domain: Iterable[Element]) -> "Pattern":
        return Pattern(self.states, {x: self._cells[x] for x in domain}, check=False)

    def translate(self, g: Element) -> "Pattern":
        """``(g.psi)(x) = psi(g x)``."""
        gi = g.inverse()
        return Pattern(self.states, {gi * y: v for y, v in self._cells.items()}, check=False)

    def replace(self, updates: Mapping[Element, Hashable]) -> "Pattern":
        cells = dict(self._cells)
        cells.update(updates)
        return Pattern(self.states, cells)

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self._cells == other._cells and self.states == other.states

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        items = ", ".join(f"{x}: {self.states.format(v)}" for x, v in self.items_sorted()[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"Pattern({{{items}{more}}})"

    def items_sorted(self) -> list[tuple[Element, Hashable]]:
        return [(x, self._cells[x]) for x in self.sorted_domain()]

    # serialization -----------------------------------------------------
    def to_document(self) -> dict:
        group = next(iter(self._cells)).group.label if self._cells else None
        return {
            "group": group,
            "states": self.states.describe(),
            "cells": [[str(x), self.states.format(v)] for x, v in self.items_sorted()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_document(), ensure_ascii=False, indent=1)

    @classmethod
    def from_document(cls, doc: dict, group: Group | None = None) -> "Pattern":
        try:
            states = states_from_description(doc["states"])
            if group is None:
                if doc.get("group") is None:
                    if doc["cells"]:
                        raise DataError("pattern file lacks a group")
                    return cls(states, {})
                group = group_from_name(doc["group"])
            cells = {}
            for name, value in doc["cells"]:
                x = group.parse(name)
                if x in cells:
                    raise DataError(f"duplicate cell {name}")
                cells[x] = states.parse(value)
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, DataError):
                raise
            raise DataError(f"malformed pattern document: {exc}") from exc
        return cls(states, cells)

    @classmethod
    def loads(cls, text: str, group: Group | None = None) -> "Pattern":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"pattern file is not JSON: {exc}") from exc
        return cls.from_document(doc, group)


class LazyConfiguration:
    """A total configuration ``G -> Q`` given by a deterministic function, memoized."""

    def __init__(self, states: StateSet, fn: Callable[[Element], Hashable]):
        self.states = states
        self._fn = fn
        self._memo: dict[Element, Hashable] = {}

    def __call__(self, x: Element):
        v = self._memo.get(x)
        if v is None:
            v = self._fn(x)
            self._memo[x] = v
        return v

    def translate(self, g: Element) -> "LazyConfiguration":
        return LazyConfiguration(self.states, lambda x: self(g * x))

    def restrict(self, domain: Iterable[Element]) -> Pattern:
        return Pattern(self.states, {x: self(x) for x in domain}, check=False)


# ---------------------------------------------------------------------------
# evolution


def interior(domain: Iterable[Element], S: GenSet) -> list[Element]:
    """``{x : xS subset of domain}``, sorted."""
    dom = domain if isinstance(domain, (set, frozenset, dict, Mapping)) else set(domain)
    cands = {y * si for y in dom for si in S.inverses}
    return sorted((x for x in cands if all(x * s in dom for s in S)), key=lambda x: x.key)


def evolve(rule: LocalRule, psi: Pattern) -> Pattern:
    """Apply the evolution on the S-interior of ``psi``'s domain."""
    S = rule.S
    out = {}
    for x in interior(psi, S):
        out[x] = rule([psi[x * s] for s in S])
    return Pattern(rule.states, out, check=False)


def evolve_at(rule: LocalRule, cfg: LazyConfiguration | Pattern, x: Element):
    get = cfg if callable(cfg) else cfg.__getitem__
    return rule([get(x * s) for s in rule.S])


def product_set(A: Iterable[Element], B: Iterable[Element]) -> set[Element]:
    return {a * b for a in A for b in B}


def check_mep_certificate(rule: LocalRule, psi1: Pattern, psi2: Pattern, Y: Iterable[Element]) -> bool:
    """True iff the pair certifies mutually erasable patterns on ``Y``.

    Requires both patterns on a common domain containing ``Y S^-1 S`` and
    agreeing off ``Y``. The evolutions only need comparing on ``Y S^-1``:
    no other cell sees the difference.
    """
    Y = set(Y)
    if psi1.domain != psi2.domain:
        raise UsageError("certificate patterns must share a domain")
    dom = psi1.domain
    S = rule.S
    watch = product_set(Y, S.inverses)
    need = Y | product_set(watch, S)
    if not need <= dom:
        missing = sorted(need - dom, key=lambda x: x.key)[:3]
        raise UsageError(f"domain must contain Y S^-1 S; missing {[str(x) for x in missing]}")
    for x in dom - Y:
        if psi1[x] != psi2[x]:
            raise UsageError(f"patterns differ at {x}, outside Y")
    if all(psi1[y] == psi2[y] for y in Y):
        return False
    return all(evolve_at(rule, psi1, x) == evolve_at(rule, psi2, x) for x in watch)


def is_goe_bruteforce(rule: LocalRule, target: Pattern, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff no assignment on ``dom(target) S`` evolves onto ``target``.

    Depth-first odometer over the cells of ``dom(target) S`` in
    length-lex order; a cell constraint is checked as soon as its whole
    neighbourhood is assigned. Refuses (``BudgetExceeded``) when the full
    odometer would exceed ``budget`` assignments.
    """
    S = rule.S
    Q = rule.states
    ys = target.sorted_domain()
    cells = sorted(product_set(ys, S), key=lambda x: x.key)
    total = len(Q) ** len(cells)
    if total > budget:
        raise BudgetExceeded(f"{total} assignments exceed budget {budget}")
    pos = {c: i for i, c in enumerate(cells)}
    # constraint y becomes checkable once its last neighbour is assigned
    ready: dict[int, list[tuple[Element, list[int]]]] = {}
    for y in ys:
        nb = [pos[y * s] for s in S]
        ready.setdefault(max(nb), []).append((y, nb))
    vals: list = [None] * len(cells)

    def search(i: int) -> bool:
        if i == len(cells):
            return True
        for v in Q:
            vals[i] = v
            if all(rule([vals[j] for j in nb]) == target[y] for y, nb in ready.get(i, ())):
                if search(i + 1):
                    return True
        return False

    return not search(0)
