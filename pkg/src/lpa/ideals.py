"""Ideals of the principal ideal rings Z and Z_n.

Every ring here is a cyclic ring ``Z/mZ``: ``m = 0`` is Z itself, ``m = 1``
is the zero ring and ``m >= 2`` is Z_m.  An ideal is stored by its canonical
generator, so equality of ideals is equality of values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping


class IdealError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Ring:
    modulus: int = 0

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 0:
            raise IdealError(f"bad ring modulus {self.modulus!r}")

    @property
    def is_zero(self) -> bool:
        return self.modulus == 1

    @property
    def is_integers(self) -> bool:
        return self.modulus == 0

    def render(self, symbols: Mapping[str, int] | None = None) -> str:
        if self.modulus == 0:
            return "Z"
        if self.modulus == 1:
            return "0"
        return "Z_" + render_int(self.modulus, symbols)

    def __str__(self) -> str:
        return self.render()

    def to_json(self):
        if self.modulus == 0:
            return "Z"
        if self.modulus == 1:
            return "0"
        return {"Zn": self.modulus}

    @classmethod
    def from_json(cls, raw) -> "Ring":
        if raw == "Z":
            return Z
        if isinstance(raw, Mapping) and set(raw) == {"Zn"}:
            n = raw["Zn"]
            if isinstance(n, bool) or not isinstance(n, int) or n < 2:
                raise IdealError(f"Z_n needs an integer n >= 2, got {n!r}")
            return cls(n)
        raise IdealError(f"unknown ring literal {raw!r}")

    # ideals of this ring

    def ideal(self, gen: int) -> "Ideal":
        return Ideal(self, gen)

    @property
    def unit(self) -> "Ideal":
        return Ideal(self, 1)

    @property
    def zero(self) -> "Ideal":
        return Ideal(self, 0)

    def ideals(self, gens: Iterable[int] | None = None) -> list["Ideal"]:
        """All ideals of Z_n, or the ideals ``gZ`` for ``g`` in ``gens`` over Z."""
        if gens is None:
            if self.modulus == 0:
                raise IdealError("Z has infinitely many ideals; pass generators")
            gens = divisors(self.modulus)
        return sorted({self.ideal(g) for g in gens}, key=lambda i: i.gen)


Z = Ring(0)


def Zn(n: int) -> Ring:
    if n < 2:
        raise IdealError(f"Z_n needs n >= 2, got {n}")
    return Ring(n)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class Ideal:
    """An ideal ``gen·R``; the generator is normalized on construction."""

    ring: Ring
    gen: int

    def __post_init__(self):
        if isinstance(self.gen, bool) or not isinstance(self.gen, int):
            raise IdealError(f"ideal generator must be an integer, got {self.gen!r}")
        m = self.ring.modulus
        g = abs(self.gen) if m == 0 else math.gcd(self.gen, m)
        object.__setattr__(self, "gen", g)

    @property
    def is_zero(self) -> bool:
        m = self.ring.modulus
        return self.gen == (0 if m == 0 else m)

    @property
    def is_unit(self) -> bool:
        return self.gen == 1

    def _same(self, other: "Ideal") -> None:
        if not isinstance(other, Ideal) or other.ring != self.ring:
            raise IdealError(f"ring mismatch: {self} vs {other}")

    def __le__(self, other: "Ideal") -> bool:
        """Inclusion."""
        self._same(other)
        return self.gen % other.gen == 0 if other.gen else self.gen == 0

    def __ge__(self, other: "Ideal") -> bool:
        return other <= self

    def __lt__(self, other: "Ideal") -> bool:
        return self <= other and self != other

    def __gt__(self, other: "Ideal") -> bool:
        return other < self

    def __and__(self, other: "Ideal") -> "Ideal":
        self._same(other)
        return Ideal(self.ring, math.lcm(self.gen, other.gen))

    def __or__(self, other: "Ideal") -> "Ideal":
        self._same(other)
        return Ideal(self.ring, math.gcd(self.gen, other.gen))

    def __contains__(self, k: int) -> bool:
        m = self.ring.modulus
        if m:
            k %= m
        return k == 0 if self.gen == 0 else k % self.gen == 0

    def render(self, symbols: Mapping[str, int] | None = None) -> str:
        r = self.ring.render(symbols)
        if self.gen == 1:
            return r
        return render_int(self.gen, symbols) + r

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Ideal({self.render()})"

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "gen": self.gen}

    @classmethod
    def from_json(cls, raw) -> "Ideal":
        if not isinstance(raw, Mapping) or "ring" not in raw or "gen" not in raw:
            raise IdealError(f"malformed ideal literal {raw!r}")
        ring = Ring.from_json(raw["ring"])
        gen = raw["gen"]
        if isinstance(gen, bool) or not isinstance(gen, int) or gen < 0:
            raise IdealError(f"ideal generator must be a nonnegative integer: {raw!r}")
        if ring.modulus and gen and ring.modulus % gen:
            raise IdealError(f"generator {gen} does not divide {ring.modulus}: {raw!r}")
        return cls(ring, gen)


def ideal_leq(a: Ideal, b: Ideal) -> bool:
    return a <= b


def ideal_meet(a: Ideal, b: Ideal) -> Ideal:
    return a & b


def ideal_join(a: Ideal, b: Ideal) -> Ideal:
    return a | b


def meet_all(ring: Ring, ideals: Iterable[Ideal]) -> Ideal:
    """Intersection of ``ideals``; the empty intersection is the unit ideal."""
    acc = ring.unit
    for i in ideals:
        acc = acc & i
    return acc


def quotient_ring(r: Ring, i: Ideal) -> Ring:
    """``R / I``: Z/gZ is Z_g (Z when g = 0, zero ring when g = 1); Z_n/dZ_n is Z_d."""
    if i.ring != r:
        raise IdealError(f"{i} is not an ideal of {r}")
    return Ring(i.gen)


def render_int(g: int, symbols: Mapping[str, int] | None = None) -> str:
    """Write ``g`` with symbolic names: a single symbol, or a product of
    distinct symbols in declaration order (``6`` with p=2, q=3 is ``pq``)."""
    if not symbols:
        return str(g)
    for name, val in symbols.items():
        if val == g:
            return name
    names = list(symbols.items())
    for k in range(2, len(names) + 1):
        for combo in itertools.combinations(names, k):
            if math.prod(v for _, v in combo) == g:
                return "".join(n for n, _ in combo)
    return str(g)


def parse_symbols(text: str | None) -> dict[str, int]:
    """Parse ``"p=2,q=3"`` into an ordered mapping."""
    out: dict[str, int] = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, val = part.partition("=")
        if not sep or not name.strip():
            raise IdealError(f"bad symbol binding {part!r}; expected name=int")
        try:
            out[name.strip()] = int(val)
        except ValueError:
            raise IdealError(f"bad symbol value in {part!r}") from None
    return out
