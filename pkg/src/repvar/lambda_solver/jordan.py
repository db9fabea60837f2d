"""Jordan types of the nilpotent loop and the dimensions of their strata."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..errors import InvariantError


@dataclass(frozen=True)
class LambdaSpec:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise InvariantError("the nilpotency bound n must be at least 2")

    def algebra(self):
        return _cached_algebra(self.n)


_ALGEBRAS: dict = {}


def _cached_algebra(n: int):
    from ..algebra import lambda_algebra

    if n not in _ALGEBRAS:
        _ALGEBRAS[n] = lambda_algebra(n)
    return _ALGEBRAS[n]


@dataclass(frozen=True)
class JordanType:
    """Multiset of Jordan block sizes, stored as a non-increasing tuple."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p < 1 for p in parts):
            raise InvariantError("Jordan block sizes must be positive")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_mult(cls, mult: dict[int, int]) -> "JordanType":
        return cls(tuple(i for i, m in mult.items() for _ in range(m)))

    @classmethod
    def parse(cls, text: str) -> "JordanType":
        text = text.strip().strip("{}")
        if not text:
            return cls(())
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))
        except ValueError:
            raise InvariantError(f"bad Jordan type {text!r}; expected e.g. 5,2") from None

    @property
    def mult(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return dict(sorted(out.items()))

    @property
    def d2(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def lam(self, i: int) -> int:
        """Number of blocks of size at least i."""
        return sum(1 for p in self.parts if p >= i)

    def lam_bar(self, i: int) -> int:
        return sum(1 for p in self.parts if p == i)

    @property
    def ascending(self) -> tuple[int, ...]:
        return tuple(reversed(self.parts))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.parts)) + "}"

    def label(self) -> str:
        return ",".join(map(str, self.parts))


def partitions(total: int, largest: int) -> Iterable[tuple[int, ...]]:
    """Partitions of ``total`` with parts at most ``largest``, reverse-lexicographic."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions(total - first, first):
            yield (first,) + rest


def strata_types(d2: int, n: int) -> list[JordanType]:
    if d2 < 0:
        raise InvariantError("d2 must be non-negative")
    return [JordanType(p) for p in partitions(d2, n)]


def nilpotent_orbit_dim(jt: JordanType) -> int:
    return jt.d2 ** 2 - sum(jt.lam(i) ** 2 for i in range(1, jt.largest + 1))


def stratum_dim(d1: int, jt: JordanType) -> int:
    """Nilpotent orbit dimension plus the free coefficients of the a-column data.

    A column entry in a block of size i lives in (x^{i-2}) mod x^i, which
    leaves min(i, 2) free coefficients.
    """
    return nilpotent_orbit_dim(jt) + d1 * sum(min(p, 2) for p in jt.parts)
