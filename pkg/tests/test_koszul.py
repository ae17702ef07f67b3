from collections import Counter
from math import comb

import pytest

from oracles import dense_rank_mod_p, koszul_cohomology, koszul_dense, koszul_rank
from veronese.algebra import DEFAULT_PRIME, SECOND_PRIME, FieldSpec, rank_exact, rank_mod_p
from veronese.config import RunConfig
from veronese.koszul import (
    Certification,
    CohomologyDim,
    VeroneseContext,
    alpha_rank,
    h0_dim,
    h1_dim,
    h2_dim,
    koszul_blocks,
    koszul_homology_dim,
    koszul_map,
)

QQ = FieldSpec.exact()
GF = FieldSpec.prime()


def test_context():
    c = VeroneseContext(2, 3)
    assert (c.N, c.W_dim, c.c1) == (9, 10, -3)
    assert VeroneseContext(3, 3).N == 19
    with pytest.raises(ValueError):
        VeroneseContext(0, 2)


def test_alpha_small_examples():
    k = koszul_map(VeroneseContext(2, 2), 1, 0)
    assert (k.matrix.rows, k.matrix.cols) == (6, 6)
    assert rank_mod_p(k.matrix) == 6
    assert sorted((r, c) for r, c, _ in k.matrix.entries) == [(i, i) for i in range(6)]
    dense, _, _ = koszul_dense(2, 2, 1, 0)
    assert dense_rank_mod_p(dense, DEFAULT_PRIME) == 6

    k = koszul_map(VeroneseContext(2, 3), 2, 1)
    assert (k.matrix.cols, k.matrix.rows) == (comb(10, 2) * 3, 10 * 15) == (135, 150)
    assert set(Counter(c for _, c, _ in k.matrix.entries).values()) == {2}


@pytest.mark.parametrize("n,d,q,t", [(1, 3, 2, 1), (2, 2, 3, 1), (2, 3, 3, 2), (1, 4, 3, 0)])
def test_koszul_invariants(n, d, q, t):
    k = koszul_map(VeroneseContext(n, d), q, t).matrix
    assert k.cols == comb(comb(n + d, n), q) * comb(n + t, n)
    assert k.rows == comb(comb(n + d, n), q - 1) * comb(n + t + d, n)
    per_col = Counter(c for _, c, _ in k.entries)
    assert len(per_col) == k.cols and set(per_col.values()) == {q}
    assert {v for _, _, v in k.entries} <= {1, -1}


def _complex_cases():
    for n in (1, 2, 3):
        for d in (1, 2, 3):
            N = comb(n + d, n) - 1
            for q in range(2, min(4, N) + 1):
                for t in range(4):
                    yield n, d, q, t


@pytest.mark.parametrize("n,d,q,t", list(_complex_cases()))
def test_composition_vanishes(n, d, q, t):
    ctx = VeroneseContext(n, d)
    first = koszul_map(ctx, q, t).matrix
    second = koszul_map(ctx, q - 1, t + d).matrix
    assert second.matmul(first).nnz == 0


@pytest.mark.parametrize("n,d,q,t", [(1, 3, 2, 1), (2, 2, 2, 2), (2, 2, 3, 0), (2, 3, 2, 1),
                                     (1, 5, 3, 5), (3, 1, 2, 2), (3, 2, 2, 1)])
def test_block_rank_matches_dense_oracle(n, d, q, t, fresh_memo):
    ctx = VeroneseContext(n, d)
    want = koszul_rank(n, d, q, t)
    assert alpha_rank(ctx, q, t, GF) == want
    assert alpha_rank(ctx, q, t, QQ) == want
    full = koszul_map(ctx, q, t).matrix
    assert rank_mod_p(full) == want
    assert rank_exact(full, budget=10**6) == want


@pytest.mark.parametrize("n,d,q,t", [(2, 3, 4, 3), (3, 2, 3, 2), (2, 2, 3, 4), (1, 6, 4, 6)])
def test_symmetry_reduction_is_sound(n, d, q, t, fresh_memo):
    ctx = VeroneseContext(n, d)
    with_sym = alpha_rank(ctx, q, t, GF, RunConfig(use_symmetry=True))
    from veronese import koszul

    koszul.clear_memo()
    without = alpha_rank(ctx, q, t, GF, RunConfig(use_symmetry=False))
    assert with_sym == without == rank_mod_p(koszul_map(ctx, q, t).matrix)
    blocks = koszul_blocks(ctx, q, t, use_symmetry=True)
    assert sum(w * len(cols) for w, _, cols in blocks) == ctx.alpha_shape(q, t)[1]


def test_modular_and_exact_agree_up_to_2000_columns(fresh_memo):
    checked = 0
    for n, d in [(1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (3, 2)]:
        ctx = VeroneseContext(n, d)
        for q in range(1, ctx.N + 1):
            for t in sorted({0, 1, d, 2 * d}):
                if ctx.alpha_shape(q, t)[1] > 2000:
                    continue
                m = koszul_map(ctx, q, t).matrix
                assert rank_mod_p(m, DEFAULT_PRIME) == rank_exact(m, budget=2000)
                checked += 1
    assert checked > 40


def test_h0_examples():
    assert h0_dim(VeroneseContext(2, 3), 1, 0).value == 0
    v = h0_dim(VeroneseContext(2, 4), 2, 1)
    assert v.value > 0
    assert v.certification is Certification.EXACT
    assert h0_dim(VeroneseContext(2, 3), 9, 5).value == comb(2 + 5 - 3, 2) == 6
    assert h0_dim(VeroneseContext(2, 3), 0, 4).value == comb(6, 2)
    assert h0_dim(VeroneseContext(2, 3), 2, -1) == CohomologyDim(0, Certification.EXACT)


def test_h1_examples():
    assert h1_dim(VeroneseContext(2, 2), 1, 2).value == 0
    rows, _, _ = koszul_dense(2, 2, 1, 2)
    assert comb(2 + 4, 2) - dense_rank_mod_p(rows, DEFAULT_PRIME) == 0
    ctx = VeroneseContext(2, 3)
    assert h1_dim(ctx, 7, 3).value == 0
    v = h1_dim(ctx, 8, 3)
    assert v.value == 1 and v.certification is Certification.EXACT


def test_h2_examples():
    for n, d in [(1, 2), (2, 3), (3, 2)]:
        assert h2_dim(VeroneseContext(n, d), 1).value == 0
    ctx = VeroneseContext(2, 3)
    assert h2_dim(ctx, 9).value == 1
    assert h2_dim(ctx, 8).value == 0
    assert h2_dim(ctx, 9).value == h1_dim(ctx, 8, 3).value


def test_koszul_homology_examples():
    assert koszul_homology_dim(VeroneseContext(2, 2), 1, 1).value == 6
    assert koszul_homology_dim(VeroneseContext(2, 3), 1, 1).value == 27
    assert comb(10 + 1, 2) - comb(2 + 6, 2) == 27
    assert koszul_homology_dim(VeroneseContext(1, 3), 1, 1).value == 3


@pytest.mark.parametrize("n,d", [(1, 3), (1, 4), (2, 2), (2, 3), (3, 2)])
def test_two_route_agreement(n, d):
    ctx = VeroneseContext(n, d)
    for p in range(0, ctx.N):
        for q in (1, 2, 3):
            k = koszul_homology_dim(ctx, p, q).value
            if p + 1 <= ctx.N:
                assert k == h1_dim(ctx, p + 1, (q - 1) * d).value


@pytest.mark.parametrize("n,d,p,q", [(1, 3, 1, 1), (1, 4, 2, 1), (2, 2, 1, 1), (2, 2, 2, 1),
                                     (2, 2, 3, 1), (2, 2, 1, 2), (2, 3, 1, 1), (2, 3, 2, 1),
                                     (2, 3, 1, 2), (3, 2, 1, 1)])
def test_homology_matches_dense_oracle(n, d, p, q):
    assert koszul_homology_dim(VeroneseContext(n, d), p, q).value == koszul_cohomology(n, d, p, q)


@pytest.mark.parametrize("n,d", [(1, 3), (2, 2), (2, 3)])
def test_determinant_bundle(n, d):
    ctx = VeroneseContext(n, d)
    for t in range(0, 2 * d + 2):
        expected = comb(n + t - d, n) if t >= d else 0
        assert h0_dim(ctx, ctx.N, t).value == expected


def test_certified_zero_is_prime_independent(fresh_memo):
    c1 = RunConfig(primes=(DEFAULT_PRIME,))
    c2 = RunConfig(primes=(SECOND_PRIME,))
    for n, d in [(2, 2), (2, 3), (3, 2)]:
        ctx = VeroneseContext(n, d)
        for q in range(2, ctx.N + 1):
            a = h2_dim(ctx, q, config=c1)
            if a.certification is Certification.CERTIFIED_ZERO:
                assert h2_dim(ctx, q, config=c2).value == 0


def test_upper_bound_when_exact_disabled(fresh_memo):
    cfg = RunConfig(exact_budget=0)
    v = h2_dim(VeroneseContext(2, 3), 9, config=cfg)
    assert v.value == 1
    assert v.certification is Certification.UPPER_BOUND
    assert set(v.primes) == {DEFAULT_PRIME, SECOND_PRIME}


def test_cohomology_dim_invariants():
    with pytest.raises(ValueError):
        CohomologyDim(1, Certification.CERTIFIED_ZERO)
    with pytest.raises(ValueError):
        CohomologyDim(-1, Certification.EXACT)


@pytest.mark.parametrize("n,d,k", [(2, 3, 8), (3, 2, 7), (2, 2, 5), (1, 4, 4)])
def test_h2_vanishing_propagates_to_positive_twists(n, d, k):
    ctx = VeroneseContext(n, d)
    assert all(h2_dim(ctx, q).value == 0 for q in range(1, k + 1))
    for t in (1, 2, 3):
        for q in range(1, k + 1):
            assert h2_dim(ctx, q, t).value == 0
            if q >= 2:
                assert h1_dim(ctx, q - 1, t + d).value == 0


def test_precondition_errors():
    ctx = VeroneseContext(2, 2)
    with pytest.raises(ValueError):
        koszul_map(ctx, 0, 1)
    with pytest.raises(ValueError):
        koszul_map(ctx, 6, 1)
    with pytest.raises(ValueError):
        h1_dim(ctx, 1, -1)
    with pytest.raises(ValueError):
        h2_dim(ctx, 0)
