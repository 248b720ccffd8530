"""Exhaustive GOE / MEP searches for tiny automata.

Every witness returned here is re-verified by the independent checkers
in :mod:`edenca.automata` before it leaves the module.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .automata import (IntStates, LocalRule, Pattern, check_mep_certificate, is_goe_bruteforce,
                       odometer, product_set)
from .errors import BudgetExceeded, UsageError
from .groups import Element, GenSet, Lattice

FOUND, EXHAUSTED, BUDGET = "found", "exhausted", "budget"


@dataclass(frozen=True)
class SearchBudget:
    max_assignments: int = 10**8
    max_cells: int = 24
    time_cap: float | None = None

    def __post_init__(self):
        if self.max_assignments <= 0 or self.max_cells <= 0 or (self.time_cap is not None and self.time_cap <= 0):
            raise UsageError("budget fields must be positive")


@dataclass
class SearchOutcome:
    status: str
    witness: object = None
    detail: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if (self.witness is not None) != (self.status == FOUND):
            raise ValueError("witness present iff status is found")

    @property
    def found(self) -> bool:
        return self.status == FOUND


class _Meter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.count = 0
        self.deadline = None if budget.time_cap is None else time.monotonic() + budget.time_cap

    def tick(self, k: int = 1):
        self.count += k
        if self.count > self.budget.max_assignments:
            raise BudgetExceeded(f"more than {self.budget.max_assignments} evaluations")
        if self.deadline is not None and self.count % 4096 < k and time.monotonic() > self.deadline:
            raise BudgetExceeded("time cap reached")


def _sorted(elems: Iterable[Element]) -> list[Element]:
    return sorted(set(elems), key=lambda x: x.key)


def find_goe(rule: LocalRule, Y: Iterable[Element], budget: SearchBudget | None = None) -> SearchOutcome:
    """First pattern on Y (odometer order) outside the image of ``Y S``."""
    budget = budget or SearchBudget()
    Q, S = rule.states, rule.S
    ys = _sorted(Y)
    cells = _sorted(product_set(ys, S))
    total = len(Q) ** len(cells)
    if len(cells) > budget.max_cells or total > budget.max_assignments:
        return SearchOutcome(BUDGET, detail={"assignments": total})
    pos = {c: i for i, c in enumerate(cells)}
    nbrs = [[pos[y * s] for s in S] for y in ys]
    meter = _Meter(budget)
    image = set()
    try:
        for a in odometer(Q, len(cells)):
            meter.tick()
            image.add(tuple(rule([a[j] for j in nb]) for nb in nbrs))
    except BudgetExceeded:
        return SearchOutcome(BUDGET, detail={"assignments": total})
    if len(image) == len(Q) ** len(ys):
        return SearchOutcome(EXHAUSTED, detail={"assignments": total, "image_size": len(image)})
    for cand in odometer(Q, len(ys)):
        if cand not in image:
            witness = Pattern(Q, dict(zip(ys, cand)), check=False)
            if not is_goe_bruteforce(rule, witness, budget.max_assignments):
                raise AssertionError(f"image search and brute force disagree on {witness}")
            return SearchOutcome(FOUND, witness, {"assignments": total, "image_size": len(image)})
    raise AssertionError("unreachable")


class _MepProblem:
    """Pairs of patterns on ``Y u Y S^-1 S`` differing only in Y with equal
    evolution on ``Y S^-1``.

    Constraints (one per cell of ``Y S^-1``) that share context cells are
    grouped into components; components are solved independently per
    pair of inside assignments and memoized on the inside cells they read.
    """

    def __init__(self, rule: LocalRule, Y: Iterable[Element], meter: _Meter):
        self.rule = rule
        self.meter = meter
        S = rule.S
        self.ys = _sorted(Y)
        yset = set(self.ys)
        self.watch = _sorted(product_set(self.ys, S.inverses))
        self.domain = yset | product_set(self.watch, S)
        self.context = _sorted(self.domain - yset)
        ypos = {y: i for i, y in enumerate(self.ys)}
        constraints = [[y_or_c for y_or_c in (x * s for s in S)] for x in self.watch]
        self.inside_only: list[list[int]] = []
        comp_of: dict[Element, int] = {}
        parent: list[int] = []

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        ctx_cons = []
        for cells in constraints:
            ctx = [c for c in cells if c not in yset]
            if not ctx:
                self.inside_only.append([ypos[c] for c in cells])
                continue
            idx = len(ctx_cons)
            ctx_cons.append(cells)
            parent.append(idx)
            for c in ctx:
                if c in comp_of:
                    ra, rb = find(comp_of[c]), find(idx)
                    if ra != rb:
                        parent[rb] = ra
                else:
                    comp_of[c] = idx
        groups: dict[int, list[list[Element]]] = {}
        for i, cells in enumerate(ctx_cons):
            groups.setdefault(find(i), []).append(cells)
        self.components = []
        for root in sorted(groups):
            cons = groups[root]
            ctx = _sorted(c for cells in cons for c in cells if c not in yset)
            ins = _sorted(c for cells in cons for c in cells if c in yset)
            cpos = {c: i for i, c in enumerate(ctx)}
            ipos = {c: i for i, c in enumerate(ins)}
            ready: dict[int, list[list[tuple[bool, int]]]] = {}
            for cells in cons:
                ref = [(c in cpos, cpos[c] if c in cpos else ipos[c]) for c in cells]
                last = max(cpos[c] for c in cells if c in cpos)
                ready.setdefault(last, []).append(ref)
            self.components.append((ctx, [ypos[c] for c in ins], ready))
        self.memo: dict = {}

    def _solve(self, k: int, a_in: tuple, b_in: tuple):
        key = (k, a_in, b_in)
        if key in self.memo:
            return self.memo[key]
        ctx, _, ready = self.components[k]
        rule, Q = self.rule, self.rule.states
        vals: list = [None] * len(ctx)

        def ok(refs):
            va = [vals[i] if is_ctx else a_in[i] for is_ctx, i in refs]
            vb = [vals[i] if is_ctx else b_in[i] for is_ctx, i in refs]
            self.meter.tick(2)
            return rule(va) == rule(vb)

        def dfs(i):
            if i == len(ctx):
                return True
            for v in Q:
                vals[i] = v
                if all(ok(r) for r in ready.get(i, ())) and dfs(i + 1):
                    return True
            return False

        result = tuple(vals) if dfs(0) else None
        self.memo[key] = result
        return result

    def certificate_for(self, a: tuple, b: tuple):
        rule = self.rule
        for idx in self.inside_only:
            self.meter.tick(2)
            if rule([a[i] for i in idx]) != rule([b[i] for i in idx]):
                return None
        context: dict[Element, object] = {}
        for k, (ctx, ins, _) in enumerate(self.components):
            sol = self._solve(k, tuple(a[i] for i in ins), tuple(b[i] for i in ins))
            if sol is None:
                return None
            context.update(zip(ctx, sol))
        Q = rule.states
        p1 = Pattern(Q, {**context, **dict(zip(self.ys, a))}, check=False)
        p2 = Pattern(Q, {**context, **dict(zip(self.ys, b))}, check=False)
        return p1, p2


def find_mep(rule: LocalRule, Y: Iterable[Element], budget: SearchBudget | None = None) -> SearchOutcome:
    """First MEP certificate with difference inside Y.

    Pairs of inside assignments are tried in odometer order ``(i, j)``,
    ``i < j``; for each, a context is searched on ``Y S^-1 S - Y``.
    """
    budget = budget or SearchBudget()
    Q = rule.states
    meter = _Meter(budget)
    prob = _MepProblem(rule, Y, meter)
    if len(prob.domain) > budget.max_cells:
        return SearchOutcome(BUDGET, detail={"cells": len(prob.domain)})
    n_inside = len(Q) ** len(prob.ys)
    if n_inside * (n_inside - 1) // 2 > budget.max_assignments:
        return SearchOutcome(BUDGET, detail={"pairs": n_inside * (n_inside - 1) // 2})
    inside = list(odometer(Q, len(prob.ys)))
    try:
        for i, a in enumerate(inside):
            for b in inside[i + 1:]:
                cert = prob.certificate_for(a, b)
                if cert is not None:
                    p1, p2 = cert
                    if not check_mep_certificate(rule, p1, p2, prob.ys):
                        raise AssertionError("search produced an invalid certificate")
                    return SearchOutcome(FOUND, (p1, p2, set(prob.ys)), {"evaluations": meter.count})
    except BudgetExceeded:
        return SearchOutcome(BUDGET, detail={"evaluations": meter.count})
    return SearchOutcome(EXHAUSTED, detail={"evaluations": meter.count})


# ---------------------------------------------------------------------------
# elementary rules on Z


Z = Lattice(1)
BITS = IntStates(2)


def z_neighbourhood(*offsets: int) -> GenSet:
    return GenSet([Z.vector(o) for o in offsets])


def interval(width: int, start: int = 0) -> list[Element]:
    return [Z.vector(i) for i in range(start, start + width)]


def elementary_rule(number: int) -> LocalRule:
    """2-state rule on Z with S = {0, 1}: ``theta(a, b)`` is bit ``2a + b`` of ``number``."""
    if not 0 <= number < 16:
        raise UsageError("rule number must be in 0..15")
    table = [(number >> i) & 1 for i in range(4)]
    return LocalRule.from_table(BITS, z_neighbourhood(0, 1), table, name=f"rule{number}")


XOR_RULE = 6
IDENTITY_RULE = 12


def majority_rule() -> LocalRule:
    return LocalRule(BITS, z_neighbourhood(-1, 0, 1), fn=lambda v: int(sum(v) >= 2), name="majority")


@dataclass
class SweepRow:
    rule: int
    table: list[int]
    mep_width: int | None
    goe_width: int | None
    status: str = "ok"

    @property
    def consistent(self) -> bool:
        return (self.mep_width is None) == (self.goe_width is None)

    def to_document(self) -> dict:
        return {"rule": self.rule, "table": self.table, "mep_width": self.mep_width,
                "goe_width": self.goe_width, "status": self.status, "consistent": self.consistent}


def moore_sweep(max_width: int = 8, budget: SearchBudget | None = None) -> list[SweepRow]:
    """GOE and MEP searches for all 16 two-state rules on Z with S = {0, 1}."""
    budget = budget or SearchBudget()
    rows = []
    for number in range(16):
        rule = elementary_rule(number)
        mep_w = goe_w = None
        status = "ok"
        for w in range(1, max_width + 1):
            Y = interval(w)
            if mep_w is None:
                out = find_mep(rule, Y, budget)
                if out.status == BUDGET:
                    status = BUDGET
                elif out.found:
                    mep_w = w
            if goe_w is None:
                out = find_goe(rule, Y, budget)
                if out.status == BUDGET:
                    status = BUDGET
                elif out.found:
                    goe_w = w
            if mep_w is not None and goe_w is not None:
                break
        rows.append(SweepRow(number, [(number >> i) & 1 for i in range(4)], mep_w, goe_w, status))
    return rows
