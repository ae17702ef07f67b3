"""Constructive and closed-form witnesses for cohomology (non)vanishing.

A kernel section is the alternating tensor

    sum_i (-1)^i (s_0 ^ ... ^ s_i omitted ^ ... ^ s_q) (x) r_i

built from q+1 degree-d forms s_i.  When every s_i = u * w_i for a common
factor u of degree d - t it lies in the kernel of alpha_t with r_i = w_i;
for t >= d take s_i = w_i of degree d and r_i = u * w_i.  Either way the
alpha-image cancels in pairs, and the tensor is nonzero because the s_i
are linearly independent.  Everything here is checked over the rationals.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .algebra import (
    Monomial,
    comb_rank,
    comb_unrank,
    monomial_basis,
    rank_exact_vectors,
)
from .config import DEFAULT_CONFIG, RunConfig
from .koszul import VeroneseContext, h0_dim, h2_dim

Coeff = Union[int, Fraction]
Poly = dict  # exponent tuple -> coefficient


class CertificateError(ValueError):
    pass


def as_poly(p: Poly | Monomial | Mapping) -> Poly:
    if isinstance(p, Monomial):
        return {p.exponents: 1}
    out = {}
    for e, c in p.items():
        e = e.exponents if isinstance(e, Monomial) else tuple(e)
        if c:
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def poly_degree(p: Poly) -> int | None:
    degs = {sum(e) for e in p}
    if len(degs) > 1:
        raise CertificateError(f"polynomial is not homogeneous: {p}")
    return degs.pop() if degs else None


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: dict = defaultdict(int)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return {e: c for e, c in out.items() if c}


def _integral(vec: Mapping) -> dict:
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return {k: int(c * den) for k, c in vec.items()}


def wedge_expand(polys: Sequence[Mapping[int, Coeff]]) -> dict[tuple[int, ...], Coeff]:
    """Expand f_1 ^ ... ^ f_k, each f given in coordinates of a fixed basis."""
    acc: dict[tuple[int, ...], Coeff] = {(): 1}
    for f in polys:
        nxt: dict[tuple[int, ...], Coeff] = defaultdict(int)
        for idx, c in acc.items():
            for b, x in f.items():
                if b in idx:
                    continue
                # appending b then sorting costs one sign per larger index already present
                sign = -1 if sum(1 for i in idx if i > b) & 1 else 1
                new = tuple(sorted(idx + (b,)))
                nxt[new] += sign * c * x
        acc = {k: v for k, v in nxt.items() if v}
    return acc


def apply_alpha(ctx: VeroneseContext, q: int, t: int,
                vec: Mapping[tuple[int, int], Coeff]) -> dict[tuple[int, int], Coeff]:
    """alpha_t^(q) applied to a sparse vector keyed by (wedge colex rank, monomial position)."""
    w = monomial_basis(ctx.n, ctx.d)
    bt = monomial_basis(ctx.n, t)
    bs = monomial_basis(ctx.n, t + ctx.d)
    out: dict[tuple[int, int], Coeff] = defaultdict(int)
    for (r, m), c in vec.items():
        idx = comb_unrank(r, q, ctx.W_dim).indices
        mono = bt[m].exponents
        for j, i in enumerate(idx):
            face = comb_rank(idx[:j] + idx[j + 1:])
            prod = tuple(a + b for a, b in zip(w[i].exponents, mono))
            out[face, bs.position(prod)] += -c if j & 1 else c
    return {k: v for k, v in out.items() if v}


def _fmt(c: Coeff):
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return int(c)


def _parse(c) -> Coeff:
    if isinstance(c, str):
        return Fraction(c)
    return int(c)


@dataclass(frozen=True)
class SectionCertificate:
    ctx: VeroneseContext
    t: int
    q: int
    u: Poly
    w: tuple[Poly, ...]
    tensor: dict[tuple[int, int], Coeff] = field(compare=False)

    @property
    def s(self) -> tuple[Poly, ...]:
        """The q+1 degree-d forms whose wedges make up the tensor."""
        if self.t <= self.ctx.d:
            return tuple(poly_mul(self.u, wi) for wi in self.w)
        return self.w

    def image(self) -> dict:
        return apply_alpha(self.ctx, self.q, self.t, self.tensor)

    def verify(self) -> bool:
        """Nonzero and in the kernel of alpha_t, checked exactly."""
        return bool(self.tensor) and not self.image()

    def to_json(self) -> dict:
        def enc(p):
            return [[list(e), _fmt(c)] for e, c in sorted(p.items())]

        return {
            "n": self.ctx.n, "d": self.ctx.d, "t": self.t, "q": self.q,
            "u": enc(self.u), "w": [enc(p) for p in self.w],
            "tensor": [[list(comb_unrank(r, self.q, self.ctx.W_dim).indices), m, _fmt(c)]
                       for (r, m), c in sorted(self.tensor.items())],
            "verified": self.verify(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> SectionCertificate:
        def dec(p):
            return {tuple(e): _parse(c) for e, c in p}

        tensor = {(comb_rank(idx), m): _parse(c) for idx, m, c in obj["tensor"]}
        return cls(VeroneseContext(obj["n"], obj["d"]), obj["t"], obj["q"], dec(obj["u"]),
                   tuple(dec(p) for p in obj["w"]), tensor)

    def __eq__(self, other):
        return isinstance(other, SectionCertificate) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash((self.ctx, self.t, self.q))


def build_kernel_section(ctx: VeroneseContext, t: int, q: int, u, w_list) -> SectionCertificate:
    """Global section of the t-twist of /\\^q E_d from q+1 independent forms.

    For t <= d, ``u`` has degree d - t and ``w_list`` holds degree-t forms.
    For t > d, ``u`` has degree t - d and ``w_list`` holds degree-d forms.
    """
    n, d = ctx.n, ctx.d
    if not 1 <= q <= ctx.N:
        raise CertificateError(f"q={q} outside 1..N={ctx.N}")
    if t < 1:
        raise CertificateError("twist t must be >= 1")
    if q + 1 > ctx.sym_dim(t):
        raise CertificateError(f"need q+1={q + 1} <= dim S^{t}V = {ctx.sym_dim(t)}")
    u = as_poly(u if u is not None else Monomial.one(n))
    w = tuple(as_poly(p) for p in w_list)
    if not u:
        raise CertificateError("u must be nonzero")
    if len(w) != q + 1:
        raise CertificateError(f"need exactly q+1={q + 1} forms, got {len(w)}")
    wdeg = t if t <= d else d
    if poly_degree(u) != abs(d - t):
        raise CertificateError(f"u must have degree {abs(d - t)}")
    for p in w:
        if not p or poly_degree(p) != wdeg:
            raise CertificateError(f"every w_i must be a nonzero form of degree {wdeg}")
        if any(len(e) != n + 1 for e in p):
            raise CertificateError("wrong number of variables")
    if rank_exact_vectors([_integral(p) for p in w]) < len(w):
        raise CertificateError("w_list is linearly dependent")

    if t <= d:
        s = [poly_mul(u, p) for p in w]
        r = list(w)
    else:
        s = list(w)
        r = [poly_mul(u, p) for p in w]
    bw, bt = monomial_basis(n, d), monomial_basis(n, t)
    s_coords = [{bw.position(e): c for e, c in p.items()} for p in s]
    tensor: dict[tuple[int, int], Coeff] = defaultdict(int)
    for i in range(q + 1):
        wedge = wedge_expand(s_coords[:i] + s_coords[i + 1:])
        sign = -1 if i & 1 else 1
        for idx, c in wedge.items():
            rk = comb_rank(idx)
            for e, x in r[i].items():
                tensor[rk, bt.position(e)] += sign * c * x
    tensor = {k: v for k, v in tensor.items() if v}
    cert = SectionCertificate(ctx, t, q, u, w, tensor)
    if not tensor:
        raise RuntimeError("kernel section vanished for independent inputs")
    if cert.image():
        raise RuntimeError("kernel section is not in the kernel of alpha")
    return cert


def default_section(ctx: VeroneseContext, t: int, q: int) -> SectionCertificate:
    """u = x_0^{|d-t|}, w = the first q+1 monomials of the needed degree."""
    wdeg = t if t <= ctx.d else ctx.d
    basis = monomial_basis(ctx.n, wdeg)
    if q + 1 > len(basis):
        raise CertificateError(f"need q+1={q + 1} <= dim S^{wdeg}V = {len(basis)}")
    u = Monomial.var(ctx.n, 0, abs(ctx.d - t))
    return build_kernel_section(ctx, t, q, u, list(basis.elements[:q + 1]))


# ---------------------------------------------------------------------------
# closed forms


def eagon_northcott_betti(d: int, k: int) -> int:
    """Betti number b_k = (k-1) C(d, k) of the degree-d rational normal curve."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 2 <= k <= d:
        return 0
    return (k - 1) * math.comb(d, k)


@dataclass(frozen=True)
class SlopeReport:
    ctx: VeroneseContext
    q: int
    t: int
    mu: Fraction
    predicts_vanishing: bool


def slope(ctx: VeroneseContext, q: int, t: int) -> SlopeReport:
    """mu(/\\^q E_d(t)) = t - q d / N; negative slope forces H^0 = 0 by semistability."""
    if not 1 <= q <= ctx.N:
        raise ValueError(f"q={q} outside 1..N={ctx.N}")
    mu = Fraction(t) - Fraction(q * ctx.d, ctx.N)
    return SlopeReport(ctx, q, t, mu, mu < 0)


def h0_vanishing_by_slope(ctx: VeroneseContext, q: int, t: int) -> bool:
    return slope(ctx, q, t).predicts_vanishing


def serre_duality_sides(ctx: VeroneseContext, q: int, config: RunConfig = DEFAULT_CONFIG) -> tuple[int, int]:
    """(dim H^2(/\\^q E_d), dim H^0(/\\^{N-q} E_d(d-3))) on P^2."""
    if ctx.n != 2:
        raise ValueError("Serre duality identity is stated on P^2 only")
    if not 1 <= q <= ctx.N:
        raise ValueError(f"q={q} outside 1..N={ctx.N}")
    return h2_dim(ctx, q, config=config).value, h0_dim(ctx, ctx.N - q, ctx.d - 3, config).value


def serre_duality_check(ctx: VeroneseContext, q: int, config: RunConfig = DEFAULT_CONFIG) -> bool:
    left, right = serre_duality_sides(ctx, q, config)
    return left == right
