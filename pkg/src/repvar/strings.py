"""Strings, bands and the multiplicity-free test for string algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import BoundQuiverAlgebra, Path
from .errors import InvariantError, NotStringAlgebra
from .linalg import RationalMatrix, to_fraction
from .rep import Representation, end_dim, hom, is_nilpotent, block_matrix


@dataclass(frozen=True, order=True)
class Letter:
    arrow: str
    inverse: bool = False

    def key(self) -> tuple[str, int]:
        return (self.arrow, int(self.inverse))

    def inv(self) -> "Letter":
        return Letter(self.arrow, not self.inverse)

    def ends(self, A: BoundQuiverAlgebra) -> tuple[int, int]:
        a = A.quiver.arrow(self.arrow)
        return (a.head, a.tail) if self.inverse else (a.tail, a.head)

    def __str__(self) -> str:
        return self.arrow + ("^-1" if self.inverse else "")


def parse_word(text: str) -> tuple[Letter, ...]:
    """Parse a right-to-left word such as ``c^-1 e f^-1 d b^-1 a``."""
    out = []
    for tok in text.replace("⁻¹", "^-1").split():
        if tok.endswith("^-1"):
            out.append(Letter(tok[:-3], True))
        elif tok.endswith("-"):
            out.append(Letter(tok[:-1], True))
        else:
            out.append(Letter(tok, False))
    return tuple(reversed(out))


def word_str(letters: Sequence[Letter]) -> str:
    return " ".join(str(x) for x in reversed(letters))


def _run_ok(A: BoundQuiverAlgebra, letters: Sequence[Letter]) -> bool:
    """Check the newest letter against reducedness and the relations."""
    if len(letters) >= 2:
        x, y = letters[-2], letters[-1]
        if x.arrow == y.arrow and x.inverse != y.inverse:
            return False
    last = letters[-1]
    run = []
    for l in reversed(letters):
        if l.inverse != last.inverse:
            break
        run.append(l.arrow)
    # run is newest-first; for direct letters the path in application order is reversed(run)
    path = tuple(reversed(run)) if not last.inverse else tuple(run)
    for r in A.relations:
        k = len(r.arrows)
        if k > len(path):
            continue
        if not last.inverse and path[-k:] == r.arrows:
            return False
        if last.inverse and path[:k] == r.arrows:
            return False
    return True


def word_is_valid(A: BoundQuiverAlgebra, letters: Sequence[Letter]) -> bool:
    for i in range(len(letters)):
        if i:
            if letters[i - 1].ends(A)[1] != letters[i].ends(A)[0]:
                return False
        if not _run_ok(A, letters[:i + 1]):
            return False
    return True


@dataclass(frozen=True)
class StringWord:
    algebra: BoundQuiverAlgebra = field(compare=False, repr=False)
    letters: tuple[Letter, ...]
    start: int

    def __post_init__(self):
        if self.letters:
            if self.letters[0].ends(self.algebra)[0] != self.start:
                raise InvariantError("start vertex does not match the first letter")
            if not word_is_valid(self.algebra, self.letters):
                raise InvariantError(f"not a valid string: {word_str(self.letters)}")
        elif self.start not in self.algebra.vertices:
            raise InvariantError(f"unknown vertex {self.start}")

    @classmethod
    def from_text(cls, A: BoundQuiverAlgebra, text: str, start: int | None = None) -> "StringWord":
        letters = parse_word(text)
        if not letters:
            if start is None:
                raise InvariantError("a length-0 string needs a start vertex")
            return cls(A, (), start)
        return cls(A, letters, letters[0].ends(A)[0])

    def vertices(self) -> list[int]:
        vs = [self.start]
        for l in self.letters:
            vs.append(l.ends(self.algebra)[1])
        return vs

    def __str__(self) -> str:
        return word_str(self.letters) if self.letters else f"e{self.start}"


def _rotations(w: tuple[Letter, ...]) -> Iterable[tuple[Letter, ...]]:
    for i in range(len(w)):
        yield w[i:] + w[:i]


def inverse_word(w: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple(l.inv() for l in reversed(w))


def canonical_band_word(w: Sequence[Letter]) -> tuple[Letter, ...]:
    w = tuple(w)
    cands = list(_rotations(w)) + list(_rotations(inverse_word(w)))
    return min(cands, key=lambda c: [l.key() for l in c])


def _is_primitive(w: Sequence[Letter]) -> bool:
    k = len(w)
    for p in range(1, k):
        if k % p == 0 and tuple(w[:p]) * (k // p) == tuple(w):
            return False
    return True


@dataclass(frozen=True)
class Band:
    algebra: BoundQuiverAlgebra = field(compare=False, repr=False)
    letters: tuple[Letter, ...]

    def __post_init__(self):
        w = self.letters
        A = self.algebra
        if not w:
            raise InvariantError("empty band")
        if w[-1].ends(A)[1] != w[0].ends(A)[0]:
            raise InvariantError("band does not close up")
        if not word_is_valid(A, w + w):
            raise InvariantError(f"band {word_str(w)} is not cyclically reduced and relation-free")
        if not _is_primitive(w):
            raise InvariantError(f"band {word_str(w)} is a proper power")
        if all(l.inverse for l in w) or not any(l.inverse for l in w):
            raise InvariantError("a band needs both direct and inverse letters")
        object.__setattr__(self, "letters", canonical_band_word(w))

    @classmethod
    def from_text(cls, A: BoundQuiverAlgebra, text: str) -> "Band":
        return cls(A, parse_word(text))

    def vertices(self) -> list[int]:
        return [l.ends(self.algebra)[0] for l in self.letters]

    def repeats_vertex(self) -> bool:
        vs = self.vertices()
        return len(set(vs)) < len(vs)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return word_str(self.letters)


# ---------------------------------------------------------------------------
# string algebra recognition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StringAlgebraVerdict:
    is_string: bool
    violations: tuple[tuple[int, str], ...]

    def to_json(self) -> dict:
        return {"is_string": self.is_string,
                "violations": [{"condition": c, "witness": w} for c, w in self.violations]}


def is_string_algebra(A: BoundQuiverAlgebra) -> StringAlgebraVerdict:
    viol: list[tuple[int, str]] = []
    for v in A.vertices:
        out_ = A.quiver.out_arrows(v)
        in_ = A.quiver.in_arrows(v)
        if len(out_) > 2:
            viol.append((1, f"vertex {v} is the tail of {len(out_)} arrows"))
        if len(in_) > 2:
            viol.append((1, f"vertex {v} is the head of {len(in_)} arrows"))
    # condition 2 holds by construction: only monomial relations are representable
    for b in A.arrows:
        after = [a.name for a in A.quiver.out_arrows(b.head)
                 if A.in_basis(Path(b.tail, a.head, (b.name, a.name)))]
        before = [c.name for c in A.quiver.in_arrows(b.tail)
                  if A.in_basis(Path(c.tail, b.head, (c.name, b.name)))]
        if len(after) > 1:
            viol.append((3, f"arrow {b.name} is followed by {', '.join(after)} with no relation"))
        if len(before) > 1:
            viol.append((3, f"arrow {b.name} is preceded by {', '.join(before)} with no relation"))
    return StringAlgebraVerdict(not viol, tuple(viol))


def _require_string(A: BoundQuiverAlgebra) -> None:
    v = is_string_algebra(A)
    if not v.is_string:
        raise NotStringAlgebra("not a string algebra: " + "; ".join(f"({c}) {w}" for c, w in v.violations))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _all_letters(A: BoundQuiverAlgebra) -> list[Letter]:
    return sorted([Letter(a.name, False) for a in A.arrows] + [Letter(a.name, True) for a in A.arrows],
                  key=Letter.key)


def enumerate_bands(A: BoundQuiverAlgebra, max_len: int) -> list[Band]:
    """All primitive bands of length at most ``max_len``, one per rotation/inversion class."""
    _require_string(A)
    letters = _all_letters(A)
    found: dict[tuple, Band] = {}

    def dfs(word: list[Letter], start: int):
        end = word[-1].ends(A)[1]
        if end == start and len(word) >= 2:
            w = tuple(word)
            if (any(l.inverse for l in w) and not all(l.inverse for l in w) and _is_primitive(w)
                    and word_is_valid(A, w + w)):
                c = canonical_band_word(w)
                if c not in found:
                    found[c] = Band(A, c)
        if len(word) == max_len:
            return
        for l in letters:
            if l.ends(A)[0] != end:
                continue
            word.append(l)
            if _run_ok(A, word):
                dfs(word, start)
            word.pop()

    for l in letters:
        dfs([l], l.ends(A)[0])
    return sorted(found.values(), key=lambda b: (len(b), [l.key() for l in b.letters]))


def enumerate_strings(A: BoundQuiverAlgebra, max_len: int) -> list[StringWord]:
    """Strings up to inversion (the representative with the smaller key is kept)."""
    _require_string(A)
    letters = _all_letters(A)
    out: dict[tuple, StringWord] = {}
    for v in A.vertices:
        out[((), v)] = StringWord(A, (), v)

    def dfs(word: list[Letter]):
        w = tuple(word)
        iw = inverse_word(w)
        key = min([l.key() for l in w], [l.key() for l in iw])
        rep = w if [l.key() for l in w] == key else iw
        out.setdefault((rep, None), StringWord(A, rep, rep[0].ends(A)[0]))
        if len(word) == max_len:
            return
        end = word[-1].ends(A)[1]
        for l in letters:
            if l.ends(A)[0] != end:
                continue
            word.append(l)
            if _run_ok(A, word):
                dfs(word)
            word.pop()

    for l in letters:
        dfs([l])
    return sorted(out.values(), key=lambda s: (len(s.letters), [l.key() for l in s.letters], s.start))


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

def _thin_module(A: BoundQuiverAlgebra, verts: list[int], links: list[tuple[int, int, Letter, Fraction]]):
    """One basis vector per position; ``links`` are (i, j, letter, scalar) joining positions."""
    per_vertex: dict[int, list[int]] = {v: [] for v in A.vertices}
    for pos, v in enumerate(verts):
        per_vertex[v].append(pos)
    idx = {pos: per_vertex[v].index(pos) for pos, v in enumerate(verts)}
    dims = {v: len(per_vertex[v]) for v in A.vertices}
    mats = {a.name: [[Fraction(0)] * dims[a.tail] for _ in range(dims[a.head])] for a in A.arrows}
    for i, j, l, s in links:
        src, dst = (j, i) if l.inverse else (i, j)
        mats[l.arrow][idx[dst]][idx[src]] += s
    mats = {k: RationalMatrix(m, rows=dims[A.quiver.arrow(k).head], cols=dims[A.quiver.arrow(k).tail])
            for k, m in mats.items()}
    return Representation(A, dims, mats, check=True)


def string_module(s: StringWord) -> Representation:
    A = s.algebra
    _require_string(A)
    verts = s.vertices()
    links = [(i, i + 1, l, Fraction(1)) for i, l in enumerate(s.letters)]
    return _thin_module(A, verts, links)


def band_module(b: Band, lam) -> Representation:
    """Band module with one-dimensional spaces per position.

    The parameter sits on the first letter of the right-to-left word (the
    last letter applied), so the Kronecker band ``b^-1 a`` gives a = 1, b = lam.
    """
    lam = to_fraction(lam)
    if lam == 0:
        raise InvariantError("band parameter must be nonzero")
    A = b.algebra
    _require_string(A)
    k = len(b.letters)
    verts = b.vertices()
    links = [(i, (i + 1) % k, l, lam if i == k - 1 else Fraction(1)) for i, l in enumerate(b.letters)]
    return _thin_module(A, verts, links)


def rank_identity_check(M: Representation, string_summands: int = 0) -> bool:
    """sum_a rank M(a) == dim M - (number of string summands)."""
    return sum(m.rank() for m in M.matrices.values()) == M.total_dim - string_summands


def band_family_end_dims(b: Band, lams: Iterable) -> list[int]:
    return [end_dim(band_module(b, l)) for l in lams]


def nilpotent_endomorphism(M: Representation) -> RationalMatrix | None:
    """A nonzero nilpotent endomorphism (as a block matrix), if End(M) has one in its basis span."""
    verts = list(M.algebra.vertices)
    n = M.total_dim
    I = RationalMatrix.identity(n)
    for phi in hom(M, M).basis:
        X = block_matrix(phi, verts)
        tr = sum((X[i, i] for i in range(n)), Fraction(0))
        Y = X - I.scale(tr / n)
        if not Y.is_zero() and is_nilpotent(Y):
            return Y
    return None


@dataclass(frozen=True)
class NilpotentEndoReport:
    band: str
    repeats_vertex: bool
    end_dim: int
    found: bool

    def to_json(self) -> dict:
        return {"band": self.band, "repeats_vertex": self.repeats_vertex, "end_dim": self.end_dim,
                "nilpotent_endomorphism_found": self.found}


def nilpotent_endo_report(b: Band, lam=2) -> NilpotentEndoReport:
    M = band_module(b, lam)
    e = end_dim(M)
    if not b.repeats_vertex():
        return NilpotentEndoReport(str(b), False, e, True)
    found = e >= 2 and nilpotent_endomorphism(M) is not None
    return NilpotentEndoReport(str(b), True, e, found)


def nilpotent_endo_check(b: Band, lam=2) -> bool:
    return nilpotent_endo_report(b, lam).found


# ---------------------------------------------------------------------------
# multiplicity-free criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cycle:
    vertices: tuple[int, ...]
    arrows: tuple[str, ...]
    relation: str | None

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "arrows": list(self.arrows), "relation": self.relation}


def simple_cycles(A: BoundQuiverAlgebra) -> list[tuple[tuple[int, ...], frozenset[str]]]:
    """Simple cycles of the underlying undirected multigraph, deduplicated by edge set."""
    edges = [(a.name, a.tail, a.head) for a in A.arrows]
    inc: dict[int, list[tuple[str, int]]] = {v: [] for v in A.vertices}
    for name, t, h in edges:
        if t == h:
            continue
        inc[t].append((name, h))
        inc[h].append((name, t))
    seen: dict[frozenset, tuple[int, ...]] = {}
    for name, t, h in edges:
        if t == h:
            seen.setdefault(frozenset([name]), (t,))
    order = sorted(A.vertices)
    for s in order:
        def dfs(v: int, vpath: list[int], epath: list[str]):
            for name, w in inc[v]:
                if name in epath:
                    continue
                if w == s:
                    es = frozenset(epath + [name])
                    seen.setdefault(es, tuple(vpath))
                elif w > s and w not in vpath:
                    dfs(w, vpath + [w], epath + [name])

        dfs(s, [s], [])
    return sorted(((vs, es) for es, vs in seen.items()), key=lambda c: (len(c[1]), sorted(c[1])))


@dataclass(frozen=True)
class MFVerdict:
    is_mf: bool
    cycles: tuple[Cycle, ...]
    hinges_on_short_cycle: bool

    def to_json(self) -> dict:
        return {"is_mf": self.is_mf, "cycles": [c.to_json() for c in self.cycles],
                "hinges_on_short_cycle": self.hinges_on_short_cycle}


def mf_check(A: BoundQuiverAlgebra) -> MFVerdict:
    _require_string(A)
    cycles = []
    for vs, es in simple_cycles(A):
        rel = next((r for r in A.relations if set(r.arrows) <= es), None)
        cycles.append(Cycle(vs, tuple(sorted(es)), str(rel) if rel is not None else None))
    is_mf = all(c.relation is not None for c in cycles)
    long_only = all(c.relation is not None for c in cycles if len(c.arrows) > 2)
    return MFVerdict(is_mf, tuple(cycles), is_mf != long_only)
