"""Word arithmetic and Cayley balls for free groups, free products of
cyclic groups and integer lattices.

Every group carries a fixed total order on its alphabet: generators come
before their inverses, in declaration order (``a < a^-1 < b < b^-1``).
Elements are compared length-first, then lexicographically in that
alphabet; all tie-breaking elsewhere in the package derives from this.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import UsageError

_FREE_NAMES = "abcdfghijklmnopqrstuvw"
_PRODUCT_NAMES = "xyzuvw"
_POWER = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+)|(⁻¹))?$")


class Group:
    """Base class for the supported group families.

    Subclasses are frozen dataclasses, so two groups built from the same
    parameters compare (and hash) equal.
    """

    family: str
    names: tuple[str, ...]

    # -- word level, implemented by subclasses ---------------------------
    def _identity_word(self):
        raise NotImplementedError

    def _mul(self, u, v):
        raise NotImplementedError

    def _inv(self, u):
        raise NotImplementedError

    def _letters(self, u) -> tuple[int, ...]:
        """Canonical geodesic spelling of ``u`` over the ordered alphabet."""
        raise NotImplementedError

    def _format(self, u) -> str:
        raise NotImplementedError

    def _parse(self, text: str):
        raise NotImplementedError

    def _gen_power(self, i: int, k: int):
        raise NotImplementedError

    # -- element level ----------------------------------------------------
    @property
    def label(self) -> str:
        raise NotImplementedError

    def identity(self) -> "Element":
        return Element(self, self._identity_word())

    def element(self, word) -> "Element":
        return Element(self, word)

    def generator(self, i: int, power: int = 1) -> "Element":
        return Element(self, self._gen_power(i, power))

    def generators(self) -> list["Element"]:
        return [self.generator(i) for i in range(len(self.names))]

    def parse(self, text: str) -> "Element":
        return Element(self, self._parse(text.strip()))

    def standard_genset(self) -> "GenSet":
        """Generators and their inverses, in alphabet order."""
        out: list[Element] = []
        for g in self.generators():
            out.append(g)
            gi = g.inverse()
            if gi != g:
                out.append(gi)
        return GenSet(out)

    def describe(self) -> dict:
        return {"family": self.family, "label": self.label, "names": list(self.names)}

    def _parse_tokens(self, text: str):
        if text in ("", "e", "1"):
            return self._identity_word()
        word = self._identity_word()
        for tok in text.split("."):
            m = _POWER.match(tok.strip())
            if not m or m.group(1) not in self.names:
                raise UsageError(f"cannot parse {text!r} as an element of {self.label}")
            k = -1 if m.group(3) else int(m.group(2) or 1)
            word = self._mul(word, self._gen_power(self.names.index(m.group(1)), k))
        return word

    def _power_name(self, i: int, k: int) -> str:
        return self.names[i] if k == 1 else f"{self.names[i]}^{k}"


@dataclass(frozen=True)
class FreeGroup(Group):
    """Free group; a word is a tuple of letters ``2*i`` (generator i) or ``2*i+1`` (its inverse)."""

    rank: int
    names: tuple[str, ...] = ()
    family: str = "free"

    def __post_init__(self):
        if self.rank < 1:
            raise UsageError("free group needs rank >= 1")
        if not self.names:
            names = tuple(_FREE_NAMES[: self.rank]) if self.rank <= len(_FREE_NAMES) else tuple(
                f"g{i + 1}" for i in range(self.rank))
            object.__setattr__(self, "names", names)
        if len(self.names) != self.rank:
            raise UsageError("one name per generator required")

    @property
    def label(self) -> str:
        return f"F{self.rank}"

    def _identity_word(self):
        return ()

    def _mul(self, u, v):
        out = list(u)
        for letter in v:
            if out and out[-1] == letter ^ 1:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def _inv(self, u):
        return tuple(letter ^ 1 for letter in reversed(u))

    def _letters(self, u):
        return u

    def _gen_power(self, i, k):
        return (2 * i + (k < 0),) * abs(k)

    def _format(self, u):
        if not u:
            return "e"
        parts = []
        for letter in u:
            name = self.names[letter >> 1]
            parts.append(name + "^-1" if letter & 1 else name)
        return ".".join(parts)

    def _parse(self, text):
        return self._parse_tokens(text)


@dataclass(frozen=True)
class FreeProduct(Group):
    """Free product of cyclic groups of the given orders.

    A word is a tuple of syllables ``(factor, exponent)`` with
    ``0 < exponent < order`` and adjacent factors distinct.
    """

    orders: tuple[int, ...]
    names: tuple[str, ...] = ()
    family: str = "free_product"

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if not self.orders or any(o < 2 for o in self.orders):
            raise UsageError("free product needs cyclic orders >= 2")
        if not self.names:
            k = len(self.orders)
            names = tuple(_PRODUCT_NAMES[:k]) if k <= len(_PRODUCT_NAMES) else tuple(
                f"g{i + 1}" for i in range(k))
            object.__setattr__(self, "names", names)
        if len(self.names) != len(self.orders):
            raise UsageError("one name per factor required")

    @property
    def label(self) -> str:
        return "*".join(f"C{o}" for o in self.orders)

    def _identity_word(self):
        return ()

    def _mul(self, u, v):
        out = list(u)
        for fac, exp in v:
            if out and out[-1][0] == fac:
                e = (out[-1][1] + exp) % self.orders[fac]
                if e:
                    out[-1] = (fac, e)
                else:
                    out.pop()
            else:
                out.append((fac, exp))
        return tuple(out)

    def _inv(self, u):
        return tuple((f, self.orders[f] - e) for f, e in reversed(u))

    def _letters(self, u):
        out: list[int] = []
        for f, e in u:
            o = self.orders[f]
            if e <= o - e:
                out.extend([2 * f] * e)
            else:
                out.extend([2 * f + 1] * (o - e))
        return tuple(out)

    def _gen_power(self, i, k):
        e = k % self.orders[i]
        return ((i, e),) if e else ()

    def _format(self, u):
        if not u:
            return "e"
        return ".".join(self._power_name(f, e) for f, e in u)

    def _parse(self, text):
        return self._parse_tokens(text)


@dataclass(frozen=True)
class Lattice(Group):
    """The free abelian group Z^d; elements are integer vectors."""

    dim: int
    names: tuple[str, ...] = ()
    family: str = "lattice"

    def __post_init__(self):
        if self.dim < 1:
            raise UsageError("lattice needs dimension >= 1")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i + 1}" for i in range(self.dim)))

    @property
    def label(self) -> str:
        return "Z" if self.dim == 1 else f"Z{self.dim}"

    def _identity_word(self):
        return (0,) * self.dim

    def _mul(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def _inv(self, u):
        return tuple(-a for a in u)

    def _letters(self, u):
        out: list[int] = []
        for i, a in enumerate(u):
            out.extend([2 * i + (a < 0)] * abs(a))
        return tuple(out)

    def _gen_power(self, i, k):
        return tuple(k if j == i else 0 for j in range(self.dim))

    def _format(self, u):
        return "(" + ",".join(str(a) for a in u) + ")"

    def _parse(self, text):
        body = text.strip()
        if body in ("e", "1"):
            return self._identity_word()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        try:
            vec = tuple(int(p) for p in body.split(","))
        except ValueError:
            try:
                return self._parse_tokens(text)
            except UsageError:
                raise UsageError(f"cannot parse {text!r} as an element of {self.label}") from None
        if len(vec) != self.dim:
            raise UsageError(f"{text!r} has the wrong dimension for {self.label}")
        return vec

    def vector(self, *coords: int) -> "Element":
        if len(coords) != self.dim:
            raise UsageError("wrong number of coordinates")
        return Element(self, tuple(int(c) for c in coords))


class Element:
    """An element of a group, stored in its unique normal form."""

    __slots__ = ("group", "word", "_hash", "_key")

    def __init__(self, group: Group, word):
        self.group = group
        self.word = word
        self._hash = hash(word)
        self._key = None

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            return NotImplemented
        if other.group is not self.group and other.group != self.group:
            raise UsageError(f"cannot combine elements of {self.group.label} and {other.group.label}")

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, self.group._mul(self.word, other.word))

    def inverse(self) -> "Element":
        return Element(self.group, self.group._inv(self.word))

    __invert__ = inverse

    def __pow__(self, k: int) -> "Element":
        base = self if k >= 0 else self.inverse()
        out = self.group.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def key(self) -> tuple:
        """Length-lex sort key over the ordered alphabet."""
        if self._key is None:
            letters = self.group._letters(self.word)
            self._key = (len(letters), letters)
        return self._key

    def length(self) -> int:
        return self.key[0]

    def is_identity(self) -> bool:
        return self.word == self.group._identity_word()

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.word == other.word and (other.group is self.group or other.group == self.group)

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Element") -> bool:
        return self.key < other.key

    def __str__(self):
        return self.group._format(self.word)

    def __repr__(self):
        return f"Element({self.group.label}, {self})"


class GenSet(Sequence):
    """An ordered finite subset S of a group.

    The identity is permitted: neighbourhoods like ``{0, 1}`` on Z need it.
    """

    def __init__(self, elements: Iterable[Element]):
        elems = tuple(elements)
        if not elems:
            raise UsageError("a generating set must be nonempty")
        group = elems[0].group
        for x in elems:
            if x.group != group:
                raise UsageError("all elements of S must lie in one group")
        if len(set(elems)) != len(elems):
            raise UsageError("S contains duplicates")
        self.group = group
        self.elements = elems
        self._index = {x: i for i, x in enumerate(elems)}
        self.inverses = tuple(x.inverse() for x in elems)

    @property
    def symmetric(self) -> bool:
        return all(x in self._index for x in self.inverses)

    def index(self, x: Element) -> int:  # type: ignore[override]
        return self._index[x]

    def __contains__(self, x) -> bool:
        return x in self._index

    def __getitem__(self, i):
        return self.elements[i]

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, GenSet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def names(self) -> list[str]:
        return [str(x) for x in self.elements]

    def __repr__(self):
        return f"GenSet({', '.join(self.names())})"


def parse_genset(group: Group, text: str | Sequence[str]) -> GenSet:
    """``"a,a^-1,b"`` or a list of element strings -> GenSet.

    Lattice elements use parentheses, so a string form is split on ``;``
    when it contains any.
    """
    if isinstance(text, str):
        sep = ";" if "(" in text else ","
        items = [t for t in text.split(sep) if t.strip()]
    else:
        items = list(text)
    return GenSet(group.parse(t) for t in items)


def ball_layers(group: Group, S: GenSet | None, radius: int) -> list[list[Element]]:
    """Spheres of the Cayley ball, each sorted by the element order."""
    if radius < 0:
        raise UsageError("radius must be >= 0")
    S = S if S is not None else group.standard_genset()
    if S.group != group:
        raise UsageError("S belongs to a different group")
    e = group.identity()
    layers = [[e]]
    seen = {e}
    frontier = [e]
    for _ in range(radius):
        new = set()
        for x in frontier:
            for s in S:
                y = x * s
                if y not in seen:
                    new.add(y)
        seen |= new
        frontier = sorted(new, key=lambda x: x.key)
        layers.append(frontier)
    return layers


def ball(group: Group, S: GenSet | None, radius: int) -> list[Element]:
    """All products of at most ``radius`` elements of S, ordered by
    (distance, length-lex). ``ball(k)`` is a prefix of ``ball(k+1)``."""
    return [x for layer in ball_layers(group, S, radius) for x in layer]


_LATTICE = re.compile(r"^(?:Z|lattice:)\^?(\d*)$")


def group_from_name(name: str) -> Group:
    """Resolve names like ``F2``, ``free:3``, ``C2*C2*C2``, ``freeproduct:2,3``, ``Z``, ``Z2``."""
    text = name.strip()
    low = text.lower()
    if re.fullmatch(r"f\d+", low):
        return FreeGroup(int(low[1:]))
    if low.startswith("free:"):
        return FreeGroup(int(low[5:]))
    m = _LATTICE.match(text) or _LATTICE.match(low)
    if m:
        return Lattice(int(m.group(1) or 1))
    if low.startswith("freeproduct:"):
        return FreeProduct(tuple(int(p) for p in low[12:].split(",")))
    if re.fullmatch(r"c\d+(\*c\d+)+", low):
        return FreeProduct(tuple(int(p[1:]) for p in low.split("*")))
    if low == "c222":
        return FreeProduct((2, 2, 2))
    raise UsageError(f"unknown group {name!r}")
