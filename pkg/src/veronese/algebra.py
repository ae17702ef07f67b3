"""Monomials, exterior index combinatorics, sparse matrices and exact ranks.

Everything downstream (Koszul maps, cohomology dimensions, Betti tables)
is expressed with the bases and rank engines defined here.
"""
from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

DEFAULT_PRIME = 1073741789  # largest prime below 2**30
SECOND_PRIME = 1073741783
DEFAULT_EXACT_BUDGET = 5000

# active submatrix is handed to the dense kernel once it is this full
_DENSE_FILL = 0.25
_DENSE_MAX_ENTRIES = 6_000_000


class AlgebraError(ValueError):
    pass


class ExactBudgetExceeded(RuntimeError):
    """The exact (integer) rank engine refused a matrix above its column cap."""


# ---------------------------------------------------------------------------
# monomials


@dataclass(frozen=True, order=True)
class Monomial:
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if any(e < 0 for e in self.exponents):
            raise AlgebraError(f"negative exponent in {self.exponents}")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def nvars(self) -> int:
        return len(self.exponents)

    @classmethod
    def one(cls, n: int) -> Monomial:
        return cls((0,) * (n + 1))

    @classmethod
    def var(cls, n: int, i: int, power: int = 1) -> Monomial:
        e = [0] * (n + 1)
        e[i] = power
        return cls(tuple(e))

    def __mul__(self, other: Monomial) -> Monomial:
        return mono_mul(self, other)

    def __str__(self) -> str:
        parts = []
        for i, e in enumerate(self.exponents):
            if e == 1:
                parts.append(f"x{i}")
            elif e > 1:
                parts.append(f"x{i}^{e}")
        return "*".join(parts) or "1"


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if a.nvars != b.nvars:
        raise AlgebraError(f"monomials in {a.nvars} and {b.nvars} variables")
    return Monomial(tuple(x + y for x, y in zip(a.exponents, b.exponents)))


def _exponent_vectors(nvars: int, t: int):
    """Degree-t exponent vectors in descending lex order (x_0 > x_1 > ...)."""
    if nvars == 1:
        yield (t,)
        return
    for e0 in range(t, -1, -1):
        for rest in _exponent_vectors(nvars - 1, t - e0):
            yield (e0,) + rest


@dataclass(frozen=True)
class GradedBasis:
    """Ordered monomial basis of S^t V, dim V = n + 1."""

    n: int
    t: int
    elements: tuple[Monomial, ...]
    index: Mapping[tuple[int, ...], int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> Monomial:
        return self.elements[i]

    def position(self, m: Monomial | tuple[int, ...]) -> int:
        key = m.exponents if isinstance(m, Monomial) else tuple(m)
        return self.index[key]

    @property
    def exponents(self) -> tuple[tuple[int, ...], ...]:
        return tuple(m.exponents for m in self.elements)


@lru_cache(maxsize=None)
def monomial_basis(n: int, t: int) -> GradedBasis:
    if n < 1:
        raise AlgebraError("ambient dimension n must be >= 1")
    if t < 0:
        return GradedBasis(n, t, (), {})
    exps = list(_exponent_vectors(n + 1, t))
    return GradedBasis(n, t, tuple(Monomial(e) for e in exps), {e: i for i, e in enumerate(exps)})


@lru_cache(maxsize=None)
def multiplication_table(n: int, d: int, t: int) -> tuple[tuple[int, ...], ...]:
    """table[i][j] = position in S^{d+t} of (i-th degree-d monomial) * (j-th degree-t monomial)."""
    bd, bt, bs = monomial_basis(n, d), monomial_basis(n, t), monomial_basis(n, d + t)
    idx = bs.index
    return tuple(
        tuple(idx[tuple(a + b for a, b in zip(u.exponents, v.exponents))] for v in bt)
        for u in bd
    )


# ---------------------------------------------------------------------------
# exterior indices: colex combinatorial number system


@dataclass(frozen=True)
class ExteriorIndex:
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise AlgebraError(f"exterior index {self.indices} is not strictly increasing")
        if self.indices and self.indices[0] < 0:
            raise AlgebraError("negative exterior index")

    @property
    def q(self) -> int:
        return len(self.indices)


def comb_rank(idx: ExteriorIndex | Sequence[int]) -> int:
    s = idx.indices if isinstance(idx, ExteriorIndex) else tuple(idx)
    if any(a >= b for a, b in zip(s, s[1:])):
        raise AlgebraError(f"{s} is not strictly increasing")
    return sum(math.comb(c, k + 1) for k, c in enumerate(s))


def comb_unrank(position: int, q: int, universe: int) -> ExteriorIndex:
    if q < 0 or not 0 <= position < math.comb(universe, q):
        raise AlgebraError(f"position {position} out of range for C({universe}, {q})")
    out = []
    c = universe - 1
    for k in range(q, 0, -1):
        while math.comb(c, k) > position:
            c -= 1
        out.append(c)
        position -= math.comb(c, k)
        c -= 1
    return ExteriorIndex(tuple(reversed(out)))


# ---------------------------------------------------------------------------
# sparse matrices and fields


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise AlgebraError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                raise AlgebraError(f"explicit zero at ({r}, {c})")
            if (r, c) in seen:
                raise AlgebraError(f"duplicate entry ({r}, {c})")
            seen.add((r, c))

    @classmethod
    def from_dense(cls, a) -> SparseMatrix:
        a = np.asarray(a, dtype=object)
        if a.ndim != 2:
            raise AlgebraError("expected a 2-d array")
        ents = tuple((int(r), int(c), int(a[r, c])) for r in range(a.shape[0])
                     for c in range(a.shape[1]) if a[r, c] != 0)
        return cls(a.shape[0], a.shape[1], ents)

    @classmethod
    def identity(cls, k: int) -> SparseMatrix:
        return cls(k, k, tuple((i, i, 1) for i in range(k)))

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=object)
        for r, c, v in self.entries:
            a[r, c] = v
        return a

    def column_dicts(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [{} for _ in range(self.cols)]
        for r, c, v in self.entries:
            cols[c][r] = v
        return cols

    def row_dicts(self) -> list[dict[int, int]]:
        rows: list[dict[int, int]] = [{} for _ in range(self.rows)]
        for r, c, v in self.entries:
            rows[r][c] = v
        return rows

    def matmul(self, other: SparseMatrix) -> SparseMatrix:
        if self.cols != other.rows:
            raise AlgebraError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        left_rows = self.row_dicts()
        right_rows = other.row_dicts()
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for r, row in enumerate(left_rows):
            for k, v in row.items():
                for c, w in right_rows[k].items():
                    acc[r, c] += v * w
        return SparseMatrix(self.rows, other.cols,
                            tuple(sorted((r, c, v) for (r, c), v in acc.items() if v)))


@lru_cache(maxsize=256)
def is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # "prime" or "exact"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or self.p <= 2 or not is_prime(self.p):
                raise AlgebraError(f"{self.p} is not an odd prime")
        elif self.kind == "exact":
            if self.p is not None:
                raise AlgebraError("exact field takes no modulus")
        else:
            raise AlgebraError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> FieldSpec:
        return cls("prime", p)

    @classmethod
    def exact(cls) -> FieldSpec:
        return cls("exact")

    @property
    def label(self) -> str:
        return f"GF({self.p})" if self.kind == "prime" else "QQ"


# ---------------------------------------------------------------------------
# rank engines
#
# Both engines take a list of sparse vectors (dicts keyed by any hashable
# coordinate) and return the dimension of their span.  Rank is invariant
# under transposition, so callers can pass either rows or columns.


def _dense_rank_mod_p(a: np.ndarray, p: int) -> int:
    a = a % p
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            rows = r + 1 + hit
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        r += 1
    return r


def _densify(active: dict[int, dict], p: int) -> np.ndarray:
    keys = sorted({k for v in active.values() for k in v}, key=repr)
    pos = {k: i for i, k in enumerate(keys)}
    a = np.zeros((len(active), len(keys)), dtype=np.int64)
    for i, v in enumerate(active.values()):
        for k, x in v.items():
            a[i, pos[k]] = x % p
    return a


def rank_mod_p_vectors(vectors: Iterable[Mapping[Hashable, int]], p: int) -> int:
    """Markowitz-style sparse elimination over GF(p) with a dense tail."""
    active: dict[int, dict] = {}
    where: dict[Hashable, set[int]] = defaultdict(set)
    for i, v in enumerate(vectors):
        row = {k: x % p for k, x in v.items() if x % p}
        if row:
            active[i] = row
            for k in row:
                where[k].add(i)
    heap = [(len(r), i) for i, r in active.items()]
    heapq.heapify(heap)
    nnz = sum(len(r) for r in active.values())
    rank = 0
    while active:
        ncols = len(where)
        if (len(active) * ncols <= _DENSE_MAX_ENTRIES
                and nnz >= _DENSE_FILL * len(active) * ncols and len(active) > 8):
            return rank + _dense_rank_mod_p(_densify(active, p), p)
        length, i = heapq.heappop(heap)
        row = active.get(i)
        if row is None or len(row) != length:
            continue
        del active[i]
        nnz -= len(row)
        piv = min(row, key=lambda k: len(where[k]))
        for k in row:
            where[k].discard(i)
        inv = pow(row[piv], p - 2, p)
        for j in list(where[piv]):
            other = active[j]
            f = other[piv] * inv % p
            nnz -= len(other)
            for k, x in row.items():
                y = (other.get(k, 0) - f * x) % p
                if y:
                    if k not in other:
                        where[k].add(j)
                    other[k] = y
                elif k in other:
                    del other[k]
                    where[k].discard(j)
            nnz += len(other)
            if other:
                heapq.heappush(heap, (len(other), j))
            else:
                del active[j]
        for k in row:
            if not where[k]:
                del where[k]
        rank += 1
    return rank


def rank_exact_vectors(vectors: Iterable[Mapping[Hashable, int]]) -> int:
    """Fraction-free sparse elimination over the integers (rank over Q).

    Each update is row_j <- a*row_j - b*row_i, followed by division by the
    content of row_j, so entries stay integral and small.
    """
    active: dict[int, dict] = {}
    where: dict[Hashable, set[int]] = defaultdict(set)
    for i, v in enumerate(vectors):
        row = {k: int(x) for k, x in v.items() if x}
        if row:
            active[i] = row
            for k in row:
                where[k].add(i)
    heap = [(len(r), i) for i, r in active.items()]
    heapq.heapify(heap)
    rank = 0
    while active:
        length, i = heapq.heappop(heap)
        row = active.get(i)
        if row is None or len(row) != length:
            continue
        del active[i]
        piv = min(row, key=lambda k: (abs(row[k]) != 1, len(where[k])))
        for k in row:
            where[k].discard(i)
        a = row[piv]
        for j in list(where[piv]):
            other = active[j]
            b = other[piv]
            g = math.gcd(a, b)
            ca, cb = a // g, b // g
            new = {}
            for k in set(other) | set(row):
                y = ca * other.get(k, 0) - cb * row.get(k, 0)
                if y:
                    new[k] = y
            content = 0
            for y in new.values():
                content = math.gcd(content, y)
                if content == 1:
                    break
            if content > 1:
                new = {k: y // content for k, y in new.items()}
            for k in other:
                if k not in new:
                    where[k].discard(j)
            for k in new:
                where[k].add(j)
            if new:
                active[j] = new
                heapq.heappush(heap, (len(new), j))
            else:
                del active[j]
        for k in row:
            if not where[k]:
                del where[k]
        rank += 1
    return rank


def rank_mod_p(m: SparseMatrix, p: int = DEFAULT_PRIME) -> int:
    if p <= 2 or not is_prime(p):
        raise AlgebraError(f"{p} is not an odd prime")
    vecs = m.column_dicts() if m.cols <= m.rows else m.row_dicts()
    return rank_mod_p_vectors(vecs, p)


def rank_exact(m: SparseMatrix, budget: int = DEFAULT_EXACT_BUDGET) -> int:
    if m.cols > budget:
        raise ExactBudgetExceeded(f"{m.cols} columns exceed the exact-rank budget {budget}")
    vecs = m.column_dicts() if m.cols <= m.rows else m.row_dicts()
    return rank_exact_vectors(vecs)


def rank(m: SparseMatrix, field: FieldSpec, budget: int = DEFAULT_EXACT_BUDGET) -> int:
    if field.kind == "prime":
        return rank_mod_p(m, field.p)
    return rank_exact(m, budget)
