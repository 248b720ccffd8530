"""m:n compressing correspondences: multiplicity functions ``f(x, y)`` with
row sums n, column sums m and support ``y in xS``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .errors import DataError
from .groups import Element, GenSet, Group, group_from_name, parse_genset


class Correspondence:
    """Sparse row access ``row(x) -> [(y, f(x, y))]``; columns are derived."""

    def __init__(self, group: Group, S: GenSet, m: int, n: int):
        self.group = group
        self.S = S
        self.m = m
        self.n = n

    def row(self, x: Element) -> list[tuple[Element, int]]:
        raise NotImplementedError

    def column(self, y: Element) -> list[tuple[Element, int]]:
        """Arrows into ``y``, sorted by source. Sources lie in ``y S^-1``."""
        out = []
        for z in sorted({y * si for si in self.S.inverses}, key=lambda z: z.key):
            k = self.value(z, y)
            if k:
                out.append((z, k))
        return out

    def value(self, x: Element, y: Element) -> int:
        return sum(k for t, k in self.row(x) if t == y)

    def __call__(self, x: Element, y: Element) -> int:
        return self.value(x, y)


class FieldCorrespondence(Correspondence):
    """``f(x, y) = c`` when ``y = field(x)``, else 0; an m:n = 2c:c correspondence."""

    def __init__(self, field, factor: int = 1):
        if factor < 1:
            raise ValueError("factor must be >= 1")
        super().__init__(field.group, field.S, 2 * factor, factor)
        self.field = field
        self.factor = factor

    def row(self, x):
        return [(self.field(x), self.factor)]

    def column(self, y):
        return [(z, self.factor) for z in sorted(self.field.fiber(y), key=lambda z: z.key)]

    def fingerprint(self) -> str:
        return f"field:{self.field.fingerprint()}x{self.factor}"


class TableCorrespondence(Correspondence):
    """A correspondence stored row by row on a finite set of sources."""

    def __init__(self, group, S, m, n, rows: dict[Element, dict[Element, int]]):
        super().__init__(group, S, m, n)
        self.rows = {x: {y: k for y, k in r.items() if k} for x, r in rows.items()}

    def row(self, x):
        r = self.rows.get(x)
        if not r:
            return []
        return sorted(r.items(), key=lambda item: item[0].key)

    def value(self, x, y):
        return self.rows.get(x, {}).get(y, 0)

    def fingerprint(self) -> str:
        text = json.dumps(correspondence_document(self, self.rows), sort_keys=True)
        return "table:" + hashlib.sha256(text.encode()).hexdigest()[:16]


def double_field(field, factor: int) -> FieldCorrespondence:
    return FieldCorrespondence(field, factor)


@dataclass
class CorrespondenceReport:
    sources: int
    sinks: int
    violations: list[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self):
        return {"sources_checked": self.sources, "sinks_checked": self.sinks,
                "violations": self.violations, "ok": self.ok}


def verify_correspondence(corr: Correspondence, sources: Iterable[Element],
                          sinks: Iterable[Element]) -> CorrespondenceReport:
    """Recount row sums on ``sources`` and column sums on ``sinks``.

    Column sums are recomputed from rows of every candidate source in
    ``y S^-1``, never from ``corr.column``.
    """
    sources = list(sources)
    sinks = list(sinks)
    rep = CorrespondenceReport(len(sources), len(sinks))
    S = corr.S
    for x in sources:
        total = 0
        for y, k in corr.row(x):
            if not isinstance(k, int) or k < 0:
                rep.violations.append({"element": str(x), "kind": "multiplicity", "value": repr(k)})
            if x.inverse() * y not in S:
                rep.violations.append({"element": str(x), "kind": "support", "target": str(y)})
            total += k
        if total != corr.n:
            rep.violations.append({"element": str(x), "kind": "row_sum", "value": total})
    for y in sinks:
        total = 0
        for z in {y * si for si in S.inverses}:
            total += sum(k for t, k in corr.row(z) if t == y)
        if total != corr.m:
            rep.violations.append({"element": str(y), "kind": "column_sum", "value": total})
    return rep


def correspondence_document(corr: Correspondence, sources: Iterable[Element]) -> dict:
    rows = []
    for x in sorted(sources, key=lambda x: x.key):
        r = corr.row(x)
        if r:
            rows.append([str(x), [[str(y), k] for y, k in r]])
    return {"group": corr.group.label, "S": corr.S.names(), "m": corr.m, "n": corr.n, "rows": rows}


def correspondence_from_document(doc: dict) -> TableCorrespondence:
    try:
        group = group_from_name(doc["group"])
        S = parse_genset(group, doc["S"])
        rows: dict[Element, dict[Element, int]] = {}
        for xs, targets in doc["rows"]:
            x = group.parse(xs)
            rows[x] = {group.parse(ys): int(k) for ys, k in targets}
        return TableCorrespondence(group, S, int(doc["m"]), int(doc["n"]), rows)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed correspondence document: {exc}") from exc
