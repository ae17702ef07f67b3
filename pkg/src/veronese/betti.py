"""Betti tables of Veronese rings and the property N_p.

N_p is decided through the vanishing of H^2 of the wedge powers of E_d
for q = 1..p+2; Betti numbers come from Koszul cohomology,
b_{i,i+q} = dim K_{i,q}.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .algebra import ExactBudgetExceeded
from .config import DEFAULT_CONFIG, RunConfig
from .koszul import (
    BudgetExceeded,
    Certification,
    CohomologyDim,
    VeroneseContext,
    h2_dim,
    koszul_homology_dim,
)

log = logging.getLogger(__name__)


class IncompleteTable(ValueError):
    pass


class Holds(str, Enum):
    YES = "yes"
    NO = "no"
    PROBABLY_NO = "probably-no"
    UNAVAILABLE = "unavailable"

    def __str__(self) -> str:
        return self.value


def betti_entry(ctx: VeroneseContext, i: int, j: int, config: RunConfig = DEFAULT_CONFIG) -> CohomologyDim:
    if i < 0 or j < 0:
        raise ValueError(f"need i, j >= 0, got ({i}, {j})")
    if i == 0:
        # projectively normal: R is generated in degree 0
        return CohomologyDim(1 if j == 0 else 0, Certification.EXACT)
    if j <= i:
        return CohomologyDim(0, Certification.EXACT)
    return koszul_homology_dim(ctx, i, j - i, config)


@dataclass
class BettiTable:
    ctx: VeroneseContext
    i_max: int
    q_max: int
    entries: dict[tuple[int, int], CohomologyDim] = field(default_factory=dict)
    skipped: list[tuple[int, int]] = field(default_factory=list)

    def get(self, i: int, j: int) -> int:
        """Value of b_ij, treating cells outside the computed range as 0."""
        if i == 0:
            return 1 if j == 0 else 0
        if (i, j) in self.skipped:
            raise IncompleteTable(f"cell ({i}, {j}) was not computed")
        e = self.entries.get((i, j))
        return e.value if e is not None else 0

    @property
    def complete(self) -> bool:
        return not self.skipped

    @property
    def covers_support(self) -> bool:
        # R is Cohen-Macaulay of codimension N - n, and its syzygies live in rows q <= n
        return self.complete and self.i_max >= self.ctx.N - self.ctx.n and self.q_max >= self.ctx.n

    def row(self, q: int) -> list[int]:
        return [self.get(i, i + q) for i in range(1, self.i_max + 1)]

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v.value for k, v in sorted(self.entries.items()) if v.value}

    def to_json(self) -> dict:
        return {
            "n": self.ctx.n, "d": self.ctx.d, "imax": self.i_max, "qmax": self.q_max,
            "entries": [{"i": i, "j": j, **self.entries[i, j].to_json()}
                        for i, j in sorted(self.entries)],
            "skipped": [{"i": i, "j": j} for i, j in sorted(self.skipped)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> BettiTable:
        t = cls(VeroneseContext(obj["n"], obj["d"]), obj["imax"], obj["qmax"])
        for e in obj["entries"]:
            t.entries[e["i"], e["j"]] = CohomologyDim.from_json(e)
        t.skipped = [(s["i"], s["j"]) for s in obj["skipped"]]
        return t

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self.to_json() == other.to_json()


def _cell(args):
    n, d, i, q, config = args
    try:
        return (i, q, koszul_homology_dim(VeroneseContext(n, d), i, q, config))
    except (BudgetExceeded, ExactBudgetExceeded, MemoryError) as exc:
        return (i, q, exc)


def betti_table(ctx: VeroneseContext, i_max: int | None = None, q_max: int | None = None,
                config: RunConfig = DEFAULT_CONFIG) -> BettiTable:
    """All b_{i,i+q} with 1 <= i <= i_max and 1 <= q <= q_max.

    Defaults: i_max = N - n (the projective dimension) and q_max = n + 1.
    Cells over budget are listed in ``skipped`` instead of failing the table.
    """
    if i_max is None:
        i_max = max(ctx.N - ctx.n, 1)
    if q_max is None:
        q_max = ctx.n + 1
    if i_max < 0 or q_max < 0:
        raise ValueError("i_max and q_max must be >= 0")
    table = BettiTable(ctx, i_max, q_max)
    work = [(ctx.n, ctx.d, i, q, config) for q in range(1, q_max + 1) for i in range(1, i_max + 1)]
    if config.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_cell, work))
    else:
        results = [_cell(w) for w in work]
    for i, q, res in results:
        if isinstance(res, Exception):
            log.warning("cell (%d, %d) skipped: %s", i, i + q, res)
            table.skipped.append((i, i + q))
        else:
            table.entries[i, i + q] = res
    return table


def hilbert_check(table: BettiTable) -> bool:
    """Alternating Betti sums against the Hilbert function of R.

    sum_i (-1)^i b_ij must equal the coefficient of s^j in
    (1 - s)^{N+1} * sum_k dim S^{kd}V s^k.
    """
    if not table.covers_support:
        raise IncompleteTable("table does not cover the support of the resolution")
    ctx = table.ctx
    nv = ctx.N + 1
    for j in range(0, nv + 1):
        expected = sum((-1) ** (j - k) * math.comb(nv, j - k) * ctx.sym_dim(k * ctx.d)
                       for k in range(j + 1))
        got = sum((-1) ** i * table.get(i, j) for i in range(0, min(j, table.i_max) + 1))
        if got != expected:
            return False
    return True


# ---------------------------------------------------------------------------
# property N_p


@dataclass(frozen=True)
class NpVerdict:
    p: int
    holds: Holds
    witness: tuple[int, int] | None = None  # (q, dim H^2(/\^q E_d))
    certification: str = "exact"
    certificate: str | None = None
    primes: tuple[int, ...] = ()
    checked: tuple[int, ...] = ()  # q values whose H^2 was examined

    def to_json(self) -> dict:
        return {"p": self.p, "holds": self.holds.value,
                "witness": None if self.witness is None else {"q": self.witness[0], "dim": self.witness[1]},
                "certification": self.certification, "certificate": self.certificate,
                "primes": list(self.primes), "checked": list(self.checked)}

    @classmethod
    def from_json(cls, obj: dict) -> NpVerdict:
        w = obj["witness"]
        return cls(obj["p"], Holds(obj["holds"]), None if w is None else (w["q"], w["dim"]),
                   obj["certification"], obj["certificate"], tuple(obj["primes"]),
                   tuple(obj["checked"]))


def line_bundle_h2(n: int, a: int) -> int:
    """dim H^2(P^n, O(a))."""
    if n != 2:
        return 0
    return math.comb(-a - 1, 2) if a <= -3 else 0


def _certify_nonvanishing(ctx: VeroneseContext, q: int, dim: CohomologyDim, config: RunConfig):
    """Try to certify H^2(/\\^q E_d) != 0 over characteristic 0.

    Returns (dim, certification, certificate-kind) or None.  A closed form
    may also show vanishing, in which case dim 0 is returned.
    """
    if q == ctx.N:
        # top wedge power is det E_d = O(-d)
        exact = line_bundle_h2(ctx.n, -ctx.d)
        if exact > dim.value or (dim.certification is Certification.EXACT and exact != dim.value):
            raise RuntimeError(f"H^2(det E_{ctx.d}) = {exact} contradicts computed {dim}")
        return exact, "exact", "line-bundle"
    if dim.certification is Certification.EXACT:
        return dim.value, "exact", "rank-exact"
    if ctx.n == 2:
        from .certificates import default_section, h0_vanishing_by_slope

        # Serre duality on P^2: H^2(/\^q E) is dual to H^0(/\^{N-q} E(d-3))
        k, t = ctx.N - q, ctx.d - 3
        if t <= 0 and k >= 1 and h0_vanishing_by_slope(ctx, k, t):
            return 0, "exact", "slope"
        if t >= 1 and 1 <= k and k + 1 <= ctx.sym_dim(t):
            cert = default_section(ctx, t, k)
            if cert.verify():
                return dim.value, "constructive", "kernel-section"
    return None


def check_np(ctx: VeroneseContext, p: int, config: RunConfig = DEFAULT_CONFIG) -> NpVerdict:
    """Decide N_p by H^2(/\\^q E_d) = 0 for 1 <= q <= p+2.

    Wedge powers above N vanish, so q runs up to min(p+2, N) and any p is
    accepted.  The scan stops at the first q with a nonzero dimension.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    checked = []
    used: set[int] = set()
    all_exact = True
    for q in range(2, min(p + 2, ctx.N) + 1):
        try:
            dim = h2_dim(ctx, q, config=config)
        except (BudgetExceeded, MemoryError) as exc:
            log.warning("check_np(%s, p=%d) undecided at q=%d: %s", ctx, p, q, exc)
            return NpVerdict(p, Holds.UNAVAILABLE, None, "none", str(exc), tuple(sorted(used)),
                             tuple(checked))
        checked.append(q)
        used.update(dim.primes)
        if dim.value == 0:
            all_exact &= dim.certification is Certification.EXACT
            continue
        cert = _certify_nonvanishing(ctx, q, dim, config)
        if cert is not None and cert[0] == 0:
            continue
        if cert is not None:
            value, level, kind = cert
            return NpVerdict(p, Holds.NO, (q, value), level, kind, tuple(sorted(used)), tuple(checked))
        return NpVerdict(p, Holds.PROBABLY_NO, (q, dim.value), dim.certification.value, None,
                         dim.primes, tuple(checked))
    level = "exact" if all_exact else Certification.CERTIFIED_ZERO.value
    return NpVerdict(p, Holds.YES, None, level, None, tuple(sorted(used)), tuple(checked))


@dataclass(frozen=True)
class ThresholdResult:
    """Largest p <= p_max with N_p, or open-ended when no failure was found."""

    threshold: int
    open_ended: bool
    p_max: int
    verdicts: tuple[NpVerdict, ...]

    @property
    def label(self) -> str:
        return f">={self.threshold}" if self.open_ended else str(self.threshold)

    def to_json(self) -> dict:
        return {"threshold": self.threshold, "open_ended": self.open_ended, "label": self.label,
                "p_max": self.p_max, "verdicts": [v.to_json() for v in self.verdicts]}

    @classmethod
    def from_json(cls, obj: dict) -> ThresholdResult:
        return cls(obj["threshold"], obj["open_ended"], obj["p_max"],
                   tuple(NpVerdict.from_json(v) for v in obj["verdicts"]))


def np_threshold(ctx: VeroneseContext, p_max: int, config: RunConfig = DEFAULT_CONFIG) -> ThresholdResult:
    if p_max < 0:
        raise ValueError("p_max must be >= 0")
    verdicts = []
    for p in range(p_max + 1):
        v = check_np(ctx, p, config)
        verdicts.append(v)
        if v.holds is not Holds.YES:
            if v.holds is Holds.UNAVAILABLE:
                return ThresholdResult(p - 1, True, p_max, tuple(verdicts))
            return ThresholdResult(p - 1, False, p_max, tuple(verdicts))
    return ThresholdResult(p_max, True, p_max, tuple(verdicts))


# ---------------------------------------------------------------------------
# conjecture scan


def conjectured_threshold(n: int, d: int) -> int | None:
    """Conjectured largest p with N_p; None means N_p for every p."""
    if n == 1 or d == 1 or (n == 2 and d == 2):
        return None
    if d == 2:
        return 5
    return 3 * d - 3


def required_columns(ctx: VeroneseContext, q_top: int) -> int:
    """Largest Koszul map needed to evaluate H^2 for q = 2..q_top."""
    worst = 0
    for q in range(2, min(q_top, ctx.N) + 1):
        worst = max(worst, ctx.alpha_shape(q - 2, 2 * ctx.d)[1], ctx.alpha_shape(q - 1, ctx.d)[1])
    return worst


@dataclass(frozen=True)
class ScanRow:
    n: int
    d: int
    conjectured: int | None
    status: str  # "computed" or "skipped-by-budget"
    computed: ThresholdResult | None = None
    columns: int = 0

    @property
    def agrees(self) -> bool | None:
        if self.computed is None:
            return None
        if self.conjectured is None:
            return self.computed.open_ended
        return not self.computed.open_ended and self.computed.threshold == self.conjectured

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d,
                "conjectured": "all" if self.conjectured is None else self.conjectured,
                "status": self.status, "columns": self.columns,
                "computed": None if self.computed is None else self.computed.to_json(),
                "agrees": self.agrees}


def conjecture_scan(n_max: int, d_max: int, budget: int = 50_000,
                    config: RunConfig = DEFAULT_CONFIG) -> list[ScanRow]:
    """Compare computed N_p thresholds with the conjecture for 2 <= d <= d_max, n <= n_max.

    ``budget`` caps the column count of the largest Koszul map a pair may
    need; pairs above it are reported as skipped, never as verdicts.
    """
    rows = []
    for n in range(1, n_max + 1):
        for d in range(2, d_max + 1):
            ctx = VeroneseContext(n, d)
            conj = conjectured_threshold(n, d)
            # enough p to see the conjectured failure, or the whole range when none is expected
            p_max = ctx.N - 2 if conj is None else min(conj + 1, max(ctx.N - 2, 0))
            cols = required_columns(ctx, p_max + 2)
            if cols > budget:
                rows.append(ScanRow(n, d, conj, "skipped-by-budget", None, cols))
                continue
            res = np_threshold(ctx, max(p_max, 0), config)
            rows.append(ScanRow(n, d, conj, "computed", res, cols))
    return rows
