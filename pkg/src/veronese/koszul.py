"""Koszul maps on wedge powers of S^d V and the cohomology they compute.

The map alpha_t^(q) : /\\^q S^dV (x) S^tV -> /\\^{q-1} S^dV (x) S^{t+d}V sends

    (w_{i_0} ^ ... ^ w_{i_{q-1}}) (x) m  |->  sum_j (-1)^j (... w_{i_j} omitted ...) (x) w_{i_j} m

with wedge factors kept strictly increasing.  Its kernel is H^0 of the
twisted wedge power of the kernel bundle E_d of the evaluation map, and
cokernels of consecutive maps give H^1, H^2 and Koszul cohomology.

Ranks are computed blockwise: the map preserves the multidegree in
Z^{n+1}, and permuting the variables permutes blocks without changing
their rank, so only blocks with non-increasing multidegree are eliminated
and then weighted by their orbit size.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .algebra import (
    ExactBudgetExceeded,
    FieldSpec,
    SparseMatrix,
    comb_rank,
    monomial_basis,
    multiplication_table,
    rank_exact_vectors,
    rank_mod_p_vectors,
)
from .cache import CacheEntry, open_cache
from .config import DEFAULT_CONFIG, RunConfig

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """A Koszul map is larger than the configured memory budget."""


class Certification(str, Enum):
    EXACT = "exact"
    CERTIFIED_ZERO = "mod-p-certified-zero"
    UPPER_BOUND = "mod-p-upper-bound"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class VeroneseContext:
    n: int
    d: int
    N: int = field(init=False)
    W_dim: int = field(init=False)
    c1: int = field(init=False)

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        w = math.comb(self.n + self.d, self.n)
        object.__setattr__(self, "W_dim", w)
        object.__setattr__(self, "N", w - 1)
        object.__setattr__(self, "c1", -self.d)

    def sym_dim(self, t: int) -> int:
        return math.comb(self.n + t, self.n) if t >= 0 else 0

    def wedge_dim(self, q: int) -> int:
        return math.comb(self.W_dim, q) if 0 <= q <= self.W_dim else 0

    def alpha_shape(self, q: int, t: int) -> tuple[int, int]:
        """(rows, cols) of alpha_t^(q)."""
        return (self.wedge_dim(q - 1) * self.sym_dim(t + self.d),
                self.wedge_dim(q) * self.sym_dim(t))


@dataclass(frozen=True)
class KoszulMatrix:
    ctx: VeroneseContext
    q: int
    t: int
    matrix: SparseMatrix


@dataclass(frozen=True)
class CohomologyDim:
    value: int
    certification: Certification
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("negative dimension")
        object.__setattr__(self, "certification", Certification(self.certification))
        if self.certification is Certification.CERTIFIED_ZERO and self.value != 0:
            raise ValueError("certified-zero dimension must be 0")

    @property
    def is_zero(self) -> bool:
        """Vanishing is certified (exactly or by a modular computation)."""
        return self.value == 0

    @property
    def is_exact(self) -> bool:
        return self.certification is not Certification.UPPER_BOUND

    def to_json(self) -> dict:
        return {"dim": self.value, "certification": self.certification.value,
                "primes": list(self.primes)}

    @classmethod
    def from_json(cls, obj: dict) -> CohomologyDim:
        return cls(int(obj["dim"]), Certification(obj["certification"]), tuple(obj.get("primes", ())))


# ---------------------------------------------------------------------------
# matrix construction


@lru_cache(maxsize=64)
def _wedges(w: int, q: int) -> tuple:
    """For each q-subset I: (I, colex rank of I, colex ranks of I minus i_j)."""
    out = []
    for idx in itertools.combinations(range(w), q):
        faces = tuple(comb_rank(idx[:j] + idx[j + 1:]) for j in range(q))
        out.append((idx, comb_rank(idx), faces))
    return tuple(out)


def _check_qt(ctx: VeroneseContext, q: int, t: int):
    if not 1 <= q <= ctx.N:
        raise ValueError(f"exterior power q={q} outside 1..N={ctx.N}")
    if t < 0:
        raise ValueError(f"twist t={t} must be >= 0")


def koszul_map(ctx: VeroneseContext, q: int, t: int, config: RunConfig = DEFAULT_CONFIG) -> KoszulMatrix:
    """Materialize alpha_t^(q) in the canonical bases (colex wedge major, grlex minor)."""
    _check_qt(ctx, q, t)
    rows, cols = ctx.alpha_shape(q, t)
    if cols > config.max_columns:
        raise BudgetExceeded(f"alpha_{t}^({q}) has {cols} columns > {config.max_columns}")
    ts, ss = ctx.sym_dim(t), ctx.sym_dim(t + ctx.d)
    mult = multiplication_table(ctx.n, ctx.d, t)
    entries = []
    for idx, r, faces in _wedges(ctx.W_dim, q):
        for m in range(ts):
            col = r * ts + m
            for j, face in enumerate(faces):
                entries.append((face * ss + mult[idx[j]][m], col, -1 if j & 1 else 1))
    return KoszulMatrix(ctx, q, t, SparseMatrix(rows, cols, tuple(entries)))


def _orbit_size(key: tuple[int, ...]) -> int:
    size = math.factorial(len(key))
    for c in Counter(key).values():
        size //= math.factorial(c)
    return size


def koszul_blocks(ctx: VeroneseContext, q: int, t: int, use_symmetry: bool = True):
    """Columns of alpha_t^(q) grouped by multidegree.

    Returns a list of (weight, multidegree, columns) with each column a
    dict {row index: +-1}.  With ``use_symmetry`` only non-increasing
    multidegrees are kept and weight is the size of their S_{n+1}-orbit;
    otherwise every block appears with weight 1.
    """
    if q < 1 or q > ctx.W_dim or t < 0:
        return []
    ts, ss = ctx.sym_dim(t), ctx.sym_dim(t + ctx.d)
    mult = multiplication_table(ctx.n, ctx.d, t)
    wexp = monomial_basis(ctx.n, ctx.d).exponents
    texp = monomial_basis(ctx.n, t).exponents
    nv = ctx.n + 1
    blocks: dict[tuple, list] = defaultdict(list)
    for idx, _, faces in _wedges(ctx.W_dim, q):
        a = [0] * nv
        for i in idx:
            for k, e in enumerate(wexp[i]):
                a[k] += e
        for m in range(ts):
            key = tuple(x + y for x, y in zip(a, texp[m]))
            if use_symmetry and any(key[k] < key[k + 1] for k in range(nv - 1)):
                continue
            col = {}
            for j, face in enumerate(faces):
                col[face * ss + mult[idx[j]][m]] = -1 if j & 1 else 1
            blocks[key].append(col)
    return [(_orbit_size(k) if use_symmetry else 1, k, v) for k, v in sorted(blocks.items())]


# ---------------------------------------------------------------------------
# ranks

_memo: dict[tuple, tuple[int, str]] = {}


def clear_memo():
    _memo.clear()


def _lookup(key: tuple, config: RunConfig):
    hit = _memo.get(key)
    cache = open_cache(config.cache_dir)
    if hit is not None:
        # back-fill so a warm process still populates a fresh cache directory
        if cache is not None and cache.get(key) is None:
            cache.put(CacheEntry(key, hit[0], hit[1]))
        return hit
    if cache is not None:
        entry = cache.get(key)
        if entry is not None:
            _memo[key] = (entry.value, entry.certification)
            return _memo[key]
    return None


def _store(key: tuple, value: int, certification: str, config: RunConfig):
    _memo[key] = (value, certification)
    cache = open_cache(config.cache_dir)
    if cache is not None:
        cache.put(CacheEntry(key, value, certification))


def _check_budget(ctx: VeroneseContext, q: int, t: int, config: RunConfig) -> None:
    cols = ctx.alpha_shape(q, t)[1]
    if cols > config.max_columns:
        raise BudgetExceeded(f"alpha_{t}^({q}) for (n,d)=({ctx.n},{ctx.d}) has {cols} columns "
                             f"> budget {config.max_columns}")


def alpha_rank(ctx: VeroneseContext, q: int, t: int, field: FieldSpec,
               config: RunConfig = DEFAULT_CONFIG) -> int:
    """Rank of alpha_t^(q) over ``field``.

    Degenerate indices (q <= 0, q > dim S^dV, t < 0) give the zero map.
    Over QQ each block is first eliminated mod p; a block of full modular
    rank has that rank over QQ too, so only rank-deficient blocks go to the
    integer engine, each subject to ``config.exact_budget`` columns.
    """
    if q < 1 or q > ctx.W_dim or t < 0:
        return 0
    # budget first, so cached and fresh runs refuse the same inputs
    _check_budget(ctx, q, t, config)
    key = (ctx.n, ctx.d, "rank-alpha", q, t, field.label)
    hit = _lookup(key, config)
    if hit is not None:
        return hit[0]
    total = 0
    for weight, _, block in koszul_blocks(ctx, q, t, config.use_symmetry):
        if field.kind == "prime":
            r = rank_mod_p_vectors(block, field.p)
        else:
            r = rank_mod_p_vectors(block, config.prime)
            nrows = len({k for c in block for k in c})
            if r < min(len(block), nrows):
                if len(block) > config.exact_budget:
                    raise ExactBudgetExceeded(
                        f"block of {len(block)} columns in alpha_{t}^({q}) exceeds exact budget "
                        f"{config.exact_budget}")
                r = rank_exact_vectors(block)
        total += weight * r
    certification = "exact" if field.kind == "exact" else field.label
    _store(key, total, certification, config)
    log.debug("rank alpha_%d^(%d) (n=%d,d=%d) over %s = %d", t, q, ctx.n, ctx.d, field.label, total)
    return total


def _dimension(ctx: VeroneseContext, kind: str, a: int, b: int, base: int,
               maps: list[tuple[int, int]], config: RunConfig) -> CohomologyDim:
    """base - sum of ranks of ``maps``, climbing the certification ladder.

    Modular ranks never exceed rational ranks, so a modular value is an
    upper bound and a modular zero is a proof of vanishing.
    """
    maps = [(q, t) for q, t in maps if 1 <= q <= ctx.W_dim and t >= 0]
    for q, t in maps:
        _check_budget(ctx, q, t, config)
    label = ",".join(map(str, config.primes)) + f";x{config.exact_budget}"
    key = (ctx.n, ctx.d, kind, a, b, label)
    hit = _lookup(key, config)
    if hit is not None:
        value, tag = hit
        cert, _, used = tag.partition("@")
        return CohomologyDim(value, Certification(cert), tuple(int(p) for p in used.split(",") if p))
    result = None
    if not maps:
        result = CohomologyDim(base, Certification.EXACT)
    else:
        p0 = config.fields[0]
        value = base - sum(alpha_rank(ctx, q, t, p0, config) for q, t in maps)
        if value == 0:
            result = CohomologyDim(0, Certification.CERTIFIED_ZERO, (p0.p,))
        elif config.exact_budget > 0:
            try:
                exact = base - sum(alpha_rank(ctx, q, t, FieldSpec.exact(), config) for q, t in maps)
                result = CohomologyDim(exact, Certification.EXACT)
            except ExactBudgetExceeded as exc:
                log.info("exact certification skipped: %s", exc)
        if result is None:
            used = [p0.p]
            for fs in config.fields[1:]:
                v = base - sum(alpha_rank(ctx, q, t, fs, config) for q, t in maps)
                used.append(fs.p)
                value = min(value, v)
                if value == 0:
                    break
            cert = Certification.CERTIFIED_ZERO if value == 0 else Certification.UPPER_BOUND
            result = CohomologyDim(value, cert, tuple(used))
    tag = result.certification.value
    if result.primes:
        tag += "@" + ",".join(map(str, result.primes))
    _store(key, result.value, tag, config)
    return result


def h0_dim(ctx: VeroneseContext, q: int, t: int, config: RunConfig = DEFAULT_CONFIG) -> CohomologyDim:
    """dim H^0 of the t-twist of the q-th wedge power of E_d."""
    if q < 0:
        raise ValueError("q must be >= 0")
    if t < 0 or q > ctx.N:
        # negative twists vanish by semistability; wedge powers above the rank are zero
        return CohomologyDim(0, Certification.EXACT)
    if q == 0:
        return CohomologyDim(ctx.sym_dim(t), Certification.EXACT)
    return _dimension(ctx, "h0", q, t, ctx.wedge_dim(q) * ctx.sym_dim(t), [(q, t)], config)


def h1_dim(ctx: VeroneseContext, q: int, t: int, config: RunConfig = DEFAULT_CONFIG) -> CohomologyDim:
    """dim H^1 = dim ker alpha_{t+d}^(q-1) - rank alpha_t^(q), valid for t >= 0."""
    _check_qt(ctx, q, t)
    base = ctx.wedge_dim(q - 1) * ctx.sym_dim(t + ctx.d)
    return _dimension(ctx, "h1", q, t, base, [(q - 1, t + ctx.d), (q, t)], config)


def h2_dim(ctx: VeroneseContext, q: int, t: int = 0, config: RunConfig = DEFAULT_CONFIG) -> CohomologyDim:
    """dim H^2 of the t-twisted q-th wedge power of E_d, t >= 0.

    Uses H^2(/\\^q E(t)) = H^1(/\\^{q-1} E(t+d)), from the twisted Koszul
    sequence; for q = 1 this is H^1(O(t+d)) = 0.
    """
    if not 1 <= q <= ctx.N:
        raise ValueError(f"exterior power q={q} outside 1..N={ctx.N}")
    if t < 0:
        raise ValueError(f"twist t={t} must be >= 0")
    if q == 1:
        return CohomologyDim(0, Certification.EXACT)
    d = ctx.d
    base = ctx.wedge_dim(q - 2) * ctx.sym_dim(t + 2 * d)
    return _dimension(ctx, "h2", q, t, base, [(q - 2, t + 2 * d), (q - 1, t + d)], config)


def koszul_homology_dim(ctx: VeroneseContext, p: int, q: int,
                        config: RunConfig = DEFAULT_CONFIG) -> CohomologyDim:
    """dim K_{p,q}: homology at /\\^p W (x) R_q of the Koszul complex of R = sum_k S^{kd}V."""
    if p < 0 or q < 1:
        raise ValueError(f"need p >= 0 and q >= 1, got p={p}, q={q}")
    d = ctx.d
    base = ctx.wedge_dim(p) * ctx.sym_dim(q * d)
    return _dimension(ctx, "Kpq", p, q, base, [(p, q * d), (p + 1, (q - 1) * d)], config)
