"""Bound quiver algebras KQ/I with monomial relations.

Paths are stored in application order (first-applied arrow first) and
rendered right-to-left, so the path stored as ``("a", "b", "b")`` prints as
``b b a``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import AlgebraError, ParseError

DEFAULT_CAP = 64
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass(frozen=True, order=True)
class Arrow:
    name: str
    tail: int
    head: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex id")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise AlgebraError(f"duplicate arrow name(s): {', '.join(dup)}")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.tail not in vs or a.head not in vs:
                raise AlgebraError(f"arrow {a.name}: endpoint {a.tail}->{a.head} is not a declared vertex")
        # declaration order carries no meaning
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows)))

    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrow_map[name]
        except KeyError:
            raise AlgebraError(f"unknown arrow {name!r}") from None

    def out_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == v]

    def in_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.head == v]


@dataclass(frozen=True, order=True)
class Path:
    """A path of the quiver; ``arrows`` is in application order.

    Length-0 paths (the idempotents ``e_i``) have ``tail == head == i``.
    """

    tail: int
    head: int
    arrows: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def sort_key(self):
        return (len(self.arrows), self.arrows, self.tail)

    def contains(self, other: "Path") -> bool:
        k = len(other.arrows)
        if k == 0:
            return False
        return any(self.arrows[i:i + k] == other.arrows for i in range(len(self.arrows) - k + 1))

    def __str__(self) -> str:
        if not self.arrows:
            return f"e{self.tail}"
        return " ".join(reversed(self.arrows))

    def pretty(self) -> str:
        """Right-to-left with exponents, e.g. ``b^2 a``."""
        if not self.arrows:
            return f"e{self.tail}"
        out: list[str] = []
        for name in reversed(self.arrows):
            if out and out[-1].split("^")[0] == name:
                base, _, k = out[-1].partition("^")
                out[-1] = f"{base}^{int(k or 1) + 1}"
            else:
                out.append(name)
        return " ".join(out)


def make_path(quiver: Quiver, arrows: Sequence[str]) -> Path:
    """Build a path from arrow names in application order, checking composability."""
    if not arrows:
        raise AlgebraError("empty arrow list; use idempotent() for length-0 paths")
    arr = [quiver.arrow(n) for n in arrows]
    for x, y in zip(arr, arr[1:]):
        if x.head != y.tail:
            raise AlgebraError(f"arrows {x.name} then {y.name} do not compose ({x.name} ends at {x.head}, "
                               f"{y.name} starts at {y.tail})")
    return Path(arr[0].tail, arr[-1].head, tuple(arrows))


def idempotent(v: int) -> Path:
    return Path(v, v, ())


@dataclass(frozen=True)
class BoundQuiverAlgebra:
    quiver: Quiver
    relations: tuple[Path, ...]
    path_length_cap: int = DEFAULT_CAP
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rels = tuple(sorted(set(self.relations), key=Path.sort_key))
        object.__setattr__(self, "relations", rels)
        if self.path_length_cap < 1:
            raise AlgebraError("path_length_cap must be positive")
        for r in rels:
            if len(r) < 2:
                raise AlgebraError(f"relation {r} has length < 2")
            make_path(self.quiver, r.arrows)
        for r in rels:
            for s in rels:
                if r is not s and r.contains(s):
                    raise AlgebraError(f"relation {r} contains relation {s} as a subpath; "
                                       "relation sets must be subpath-minimal")
        _ = self.path_basis  # finite-dimensionality check

    # -- structure ---------------------------------------------------------
    @property
    def vertices(self) -> tuple[int, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    def _kills(self, arrows: tuple[str, ...]) -> bool:
        """True if some relation is a suffix of ``arrows`` (application order)."""
        for r in self.relations:
            k = len(r.arrows)
            if k <= len(arrows) and arrows[-k:] == r.arrows:
                return True
        return False

    @cached_property
    def path_basis(self) -> tuple[Path, ...]:
        q = self.quiver
        out = [idempotent(v) for v in q.vertices]
        frontier = [Path(a.tail, a.head, (a.name,)) for a in q.arrows]
        length = 1
        while frontier:
            if length >= self.path_length_cap:
                raise AlgebraError(
                    f"algebra is infinite-dimensional or exceeds the path length cap {self.path_length_cap}: "
                    f"surviving path {frontier[0].pretty()} of length {length}")
            out.extend(frontier)
            nxt = []
            for p in frontier:
                for a in q.out_arrows(p.head):
                    arr = p.arrows + (a.name,)
                    if not self._kills(arr):
                        nxt.append(Path(p.tail, a.head, arr))
            frontier = nxt
            length += 1
        return tuple(sorted(out, key=Path.sort_key))

    @property
    def dim(self) -> int:
        return len(self.path_basis)

    @cached_property
    def _basis_set(self) -> frozenset:
        return frozenset(self.path_basis)

    def in_basis(self, p: Path) -> bool:
        return p in self._basis_set

    def paths_from(self, v: int) -> list[Path]:
        return [p for p in self.path_basis if p.tail == v]

    def paths_between(self, e: int, f: int, length: int | None = None) -> list[Path]:
        return [p for p in self.path_basis if p.tail == e and p.head == f
                and (length is None or len(p) == length)]

    def extend(self, p: Path, arrow: str) -> Path | None:
        """``arrow`` applied after ``p``, or None if the result is zero in A."""
        a = self.quiver.arrow(arrow)
        if a.tail != p.head:
            return None
        arr = p.arrows + (arrow,)
        q = Path(p.tail, a.head, arr)
        return q if self.in_basis(q) else None

    def concat(self, first: Path, second: Path) -> Path | None:
        """``second`` after ``first`` in A (None when zero)."""
        if first.head != second.tail:
            return None
        q = Path(first.tail, second.head, first.arrows + second.arrows)
        return q if self.in_basis(q) else None

    # -- predicates ----------------------------------------------------------
    def is_triangular(self) -> bool:
        succ = {v: [a.head for a in self.quiver.out_arrows(v)] for v in self.vertices}
        state: dict[int, int] = {}

        def cyclic(v: int) -> bool:
            state[v] = 1
            for w in succ[v]:
                s = state.get(w, 0)
                if s == 1 or (s == 0 and cyclic(w)):
                    return True
            state[v] = 2
            return False

        return not any(state.get(v, 0) == 0 and cyclic(v) for v in self.vertices)

    def is_connected(self) -> bool:
        vs = self.vertices
        if not vs:
            return True
        adj: dict[int, set[int]] = {v: set() for v in vs}
        for a in self.arrows:
            adj[a.tail].add(a.head)
            adj[a.head].add(a.tail)
        seen = {vs[0]}
        todo = deque([vs[0]])
        while todo:
            v = todo.popleft()
            for w in adj[v] - seen:
                seen.add(w)
                todo.append(w)
        return len(seen) == len(vs)

    def __str__(self) -> str:
        return serialize_algebra(self)


# ---------------------------------------------------------------------------
# .qa parsing / serialisation
# ---------------------------------------------------------------------------

def parse_algebra(text: str, name: str = "") -> BoundQuiverAlgebra:
    """Parse the line-oriented ``.qa`` format."""
    vertices: list[int] | None = None
    arrows: list[Arrow] = []
    rel_lines: list[tuple[int, list[str]]] = []
    cap = DEFAULT_CAP
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        line = line.strip()
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno, indent + 1)
        key = key.strip()
        col = indent + len(key) + 2
        rest = rest.strip()
        if key == "vertices":
            if vertices is not None:
                raise ParseError("duplicate 'vertices' line", lineno, indent + 1)
            vertices = []
            for tok in rest.split():
                try:
                    vertices.append(int(tok))
                except ValueError:
                    raise ParseError(f"vertex id must be an integer, got {tok!r}", lineno,
                                     raw.find(tok, col - 1) + 1) from None
        elif key.startswith("arrow ") or key == "arrow":
            aname = key[5:].strip()
            if not _NAME.match(aname):
                raise ParseError(f"bad arrow name {aname!r}", lineno, indent + 7)
            m = re.fullmatch(r"(-?\d+)\s*->\s*(-?\d+)", rest)
            if not m:
                raise ParseError(f"expected '<tail> -> <head>', got {rest!r}", lineno, col)
            arrows.append(Arrow(aname, int(m.group(1)), int(m.group(2))))
        elif key == "relation":
            toks = rest.split()
            if not toks:
                raise ParseError("empty relation", lineno, col)
            rel_lines.append((lineno, toks))
        elif key == "cap":
            try:
                cap = int(rest)
            except ValueError:
                raise ParseError(f"cap must be an integer, got {rest!r}", lineno, col) from None
            if cap < 1:
                raise ParseError("cap must be positive", lineno, col)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, indent + 1)
    if vertices is None:
        raise ParseError("missing 'vertices' line")
    try:
        quiver = Quiver(tuple(vertices), tuple(arrows))
    except AlgebraError as exc:
        raise ParseError(str(exc)) from None
    rels = []
    for lineno, toks in rel_lines:
        if len(toks) < 2:
            raise ParseError(f"relation {' '.join(toks)!r} has length < 2", lineno)
        app = list(reversed(toks))
        for t in app:
            if t not in quiver.arrow_map:
                raise ParseError(f"unknown arrow {t!r} in relation", lineno)
        try:
            rels.append(make_path(quiver, app))
        except AlgebraError as exc:
            raise ParseError(str(exc), lineno) from None
    return BoundQuiverAlgebra(quiver, tuple(rels), cap, name=name)


def load_algebra(path) -> BoundQuiverAlgebra:
    from pathlib import Path as _P

    p = _P(path)
    return parse_algebra(p.read_text(encoding="utf-8"), name=p.stem)


def serialize_algebra(A: BoundQuiverAlgebra) -> str:
    lines = ["vertices: " + " ".join(str(v) for v in sorted(A.vertices))]
    for a in sorted(A.arrows, key=lambda a: a.name):
        lines.append(f"arrow {a.name}: {a.tail} -> {a.head}")
    for r in sorted(A.relations, key=lambda r: tuple(reversed(r.arrows))):
        lines.append(f"relation: {r}")
    if A.path_length_cap != DEFAULT_CAP:
        lines.append(f"cap: {A.path_length_cap}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# standard algebras
# ---------------------------------------------------------------------------

def from_spec(vertices: Iterable[int], arrows: Iterable[tuple[str, int, int]],
              relations: Iterable[str] = (), name: str = "", cap: int = DEFAULT_CAP) -> BoundQuiverAlgebra:
    """Relations are given right-to-left as strings, e.g. ``"b b a"``."""
    q = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    rels = tuple(make_path(q, list(reversed(r.split()))) for r in relations)
    return BoundQuiverAlgebra(q, rels, cap, name=name)


def a2() -> BoundQuiverAlgebra:
    return from_spec([1, 2], [("a", 1, 2)], name="A2")


def kronecker() -> BoundQuiverAlgebra:
    return from_spec([1, 2], [("a", 1, 2), ("b", 1, 2)], name="kronecker")


def truncated_loop(k: int = 2) -> BoundQuiverAlgebra:
    """K[x]/(x^k) as a one-loop quiver."""
    return from_spec([1], [("b", 1, 1)], [" ".join(["b"] * k)], name=f"loop{k}")


def butterfly() -> BoundQuiverAlgebra:
    return from_spec(
        [1, 2, 3, 4, 5],
        [("a", 1, 3), ("c", 1, 4), ("b", 2, 3), ("d", 2, 5), ("e", 3, 4), ("f", 3, 5)],
        ["e a", "e b", "f a", "f b"],
        name="butterfly",
    )


def lambda_algebra(n: int) -> BoundQuiverAlgebra:
    """a: 1 -> 2 and a loop b at 2, with b^n = b^2 a = 0."""
    if n < 2:
        raise AlgebraError("n must be at least 2")
    rels = [" ".join(["b"] * n)]
    if n > 2:  # for n = 2 the relation b^2 a is already implied by b^2
        rels.append("b b a")
    return from_spec([1, 2], [("a", 1, 2), ("b", 2, 2)], rels, name=f"lambda{n}")
