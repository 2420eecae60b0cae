"""Graded slice complexes: homology, total complexes, comparison reports."""

import random

import numpy as np
import pytest

from derhamkit.exactlin import ModRing
from derhamkit.complexes import (
    CompareReport,
    DoubleComplex,
    GradedSliceComplex,
    SliceQuotient,
    WindowError,
    compare_homology,
    homology_quotient,
    homology_report,
    length_audit,
    slice_homology,
    total_complex,
)
from derhamkit.randomgen import random_complex, random_invertible


def two_term(ring, entry, w=0):
    # 0 -> R --(entry)--> R -> 0 in degrees 1, 0
    return GradedSliceComplex(
        ring, 0, 1, {(0, w): 1, (1, w): 1}, {(1, w): np.array([[entry]])}
    )


def test_mod4_multiplication_by_two():
    ring = ModRing(2, 2)
    cx = two_term(ring, 2)
    assert slice_homology(cx, 0, 0) == [2]
    assert slice_homology(cx, 1, 0) == [2]


def test_zero_differentials_homology_is_terms():
    ring = ModRing(3, 2)
    cx = GradedSliceComplex(ring, 0, 2, {(0, 0): 2, (1, 1): 1, (2, 0): 3}, {})
    assert slice_homology(cx, 0, 0) == [9, 9]
    assert slice_homology(cx, 1, 1) == [9]
    assert slice_homology(cx, 2, 0) == [9, 9, 9]
    assert slice_homology(cx, 1, 0) == []


def test_out_of_window_rejected():
    ring = ModRing(2, 1)
    cx = GradedSliceComplex(ring, 0, 1, {(0, 0): 1}, {}, trusted=(0, 0))
    with pytest.raises(WindowError):
        slice_homology(cx, 1, 0)


def test_homology_independent_of_basis_order():
    ring = ModRing(2, 2)
    rng = random.Random(4)
    for _ in range(15):
        cx = random_complex(ring, rng, max_degree=3, max_rank=3)
        cx.validate()
        w = rng.choice(cx.weights() or [0])
        n = rng.randint(cx.n_min, cx.n_max)
        base = slice_homology(cx, n, w)
        # conjugate every slice at this weight by random invertible matrices
        qs = {
            deg: random_invertible(cx.dim(deg, w), ring, rng)
            for deg in cx.degrees()
            if cx.dim(deg, w)
        }
        dims = dict(cx.dims)
        diffs = dict(cx.diffs)
        for deg, (q, qinv) in qs.items():
            d = cx.diff(deg, w)
            if d.size:
                lower = qs.get(deg - 1)
                right = lower[0] if lower else np.eye(d.shape[1], dtype=np.int64)
                diffs[(deg, w)] = (qinv @ d @ right) % ring.modulus
        cx2 = GradedSliceComplex(ring, cx.n_min, cx.n_max, dims, diffs)
        cx2.validate()
        assert slice_homology(cx2, n, w) == base


def test_slice_quotient_representatives_and_coords():
    ring = ModRing(2, 2)
    cycles = np.array([[1, 0], [0, 2]])
    boundaries = np.array([[2, 0]])
    q = SliceQuotient.from_cycles_boundaries(cycles, boundaries, ring)
    assert sorted(q.factors) == [2, 2]
    for rep, d in zip(q.gen_reps, q.factors):
        c = q.coords(rep)
        assert c is not None and not all(x == 0 for x in c)
        assert q.coords((d * rep) % 4) == (0,) * len(q.factors)
    # coords is additive
    s = (q.gen_reps[0] + q.gen_reps[-1]) % 4
    ca = q.coords(q.gen_reps[0])
    cb = q.coords(q.gen_reps[-1])
    cs = q.coords(s)
    assert cs == tuple((a + b) % d for a, b, d in zip(ca, cb, q.factors))


def test_total_complex_one_column():
    ring = ModRing(2, 2)
    dc = DoubleComplex(
        ring,
        {(0, 0, 0): 1, (0, 1, 0): 1},
        {},
        {(0, 1, 0): np.array([[2]])},
    )
    tot = total_complex(dc)
    assert slice_homology(tot, 0, 0) == [2]
    assert slice_homology(tot, 1, 0) == [2]


def test_total_complex_two_column_square_block_assembly():
    # Koszul-style square for (a, b): rows 0 -> A -> A^2 -> A with commuting maps
    ring = ModRing(3, 2)
    a, b = 3, 6
    dc = DoubleComplex(
        ring,
        {(0, 0, 0): 1, (1, 0, 0): 1, (0, 1, 0): 1, (1, 1, 0): 1},
        {(1, 0, 0): np.array([[a]]), (1, 1, 0): np.array([[a]])},
        {(0, 1, 0): np.array([[b]]), (1, 1, 0): np.array([[b]])},
    )
    tot = total_complex(dc)
    # hand-assembled blocks (p ascending): Tot_1 = (0,1) + (1,0), so
    # d_1 = [[b], [a]] and d_2 = [a | -b] with the (-1)^p twist on verticals
    assert tot.diff(1, 0).tolist() == [[b], [a]]
    assert tot.diff(2, 0).tolist() == [[a, -b % 9]]
    tot.validate()


def test_total_complex_rejects_noncommuting():
    ring = ModRing(2, 1)
    dc = DoubleComplex(
        ring,
        {(0, 0, 0): 1, (1, 0, 0): 1, (0, 1, 0): 1, (1, 1, 0): 1},
        {(1, 0, 0): np.array([[1]]), (1, 1, 0): np.array([[1]])},
        {(0, 1, 0): np.array([[1]]), (1, 1, 0): np.array([[0]])},
    )
    with pytest.raises(ValueError):
        total_complex(dc)


def kunneth_dims(c1, c2, n, w, ring):
    out = 0
    for i in range(c1.n_min, c1.n_max + 1):
        for u in c1.weights():
            f1 = slice_homology(c1, i, u)
            if not f1:
                continue
            f2 = slice_homology(c2, n - i, w - u) if c2.n_min <= n - i <= c2.n_max else []
            out += len(f1) * len(f2)
    return out


def test_total_complex_kunneth_over_field():
    ring = ModRing(5, 1)
    rng = random.Random(12)
    for _ in range(6):
        c1 = random_complex(ring, rng, max_degree=2, max_rank=2)
        c2 = random_complex(ring, rng, max_degree=2, max_rank=2)
        # tensor double complex
        terms = {}
        horiz = {}
        vert = {}
        for p in c1.degrees():
            for q in c2.degrees():
                for u in c1.weights():
                    for v in c2.weights():
                        d1 = c1.dim(p, u)
                        d2 = c2.dim(q, v)
                        if d1 and d2:
                            w = u + v
                            key = (p, q, w)
                            terms[key] = terms.get(key, 0) + d1 * d2
        # build with explicit per-weight block structure: simpler to tensor one
        # weight at a time; here both complexes are generated single-weighted
        if len(c1.weights()) != 1 or len(c2.weights()) != 1:
            continue
        u = c1.weights()[0]
        v = c2.weights()[0]
        w = u + v
        terms = {}
        for p in c1.degrees():
            for q in c2.degrees():
                if c1.dim(p, u) and c2.dim(q, v):
                    terms[(p, q, w)] = c1.dim(p, u) * c2.dim(q, v)
        for (p, q, _), dim in terms.items():
            if (p - 1, q, w) in terms:
                horiz[(p, q, w)] = np.kron(c1.diff(p, u), np.eye(c2.dim(q, v), dtype=np.int64)) % 5
            if (p, q - 1, w) in terms:
                vert[(p, q, w)] = np.kron(np.eye(c1.dim(p, u), dtype=np.int64), c2.diff(q, v)) % 5
        dc = DoubleComplex(ring, terms, horiz, vert)
        tot = total_complex(dc)
        for n in range(tot.n_min, tot.n_max + 1):
            assert len(slice_homology(tot, n, w)) == kunneth_dims(c1, c2, n, w, ring)


def test_compare_homology_self_and_reports():
    ring = ModRing(2, 2)
    rng = random.Random(3)
    cx = random_complex(ring, rng, max_degree=3, max_rank=3)
    rep = compare_homology(cx, cx, degrees=list(cx.degrees()))
    assert rep.equal
    rep.to_json()
    hr = homology_report(cx)
    hr.to_json()


def test_rank_nullity_audit():
    ring = ModRing(2, 3)
    rng = random.Random(21)
    for _ in range(10):
        cx = random_complex(ring, rng, max_degree=3, max_rank=3)
        for w in cx.weights():
            assert length_audit(cx, w)


def test_devissage_probe_mod_p_reduction():
    # a complex of free Z/p^n modules whose mod-p reduction is exact is
    # itself exact; probed on seeded unit-arrow complexes plus a torsion
    # counterexample whose reduction fails exactness
    ring = ModRing(2, 2)
    fp = ModRing(2, 1)
    rng = random.Random(19)
    for _ in range(10):
        dims = {}
        diffs = {}
        # matched unit arrows only: mod-p reduction stays exact
        k = rng.randint(1, 3)
        dims[(1, 0)] = k
        dims[(0, 0)] = k
        unit = np.diag([1 + 2 * rng.randrange(2) for _ in range(k)]).astype(np.int64)
        diffs[(1, 0)] = unit % 4
        cx = GradedSliceComplex(ring, 0, 1, dims, diffs)
        red = GradedSliceComplex(fp, 0, 1, dict(dims), {kk: v % 2 for kk, v in diffs.items()})
        red_exact = all(not slice_homology(red, n, 0) for n in (0, 1))
        assert red_exact
        assert all(not slice_homology(cx, n, 0) for n in (0, 1))
    # torsion arrow: reduction not exact, original not exact
    cx = GradedSliceComplex(ring, 0, 1, {(0, 0): 1, (1, 0): 1}, {(1, 0): np.array([[2]])})
    red = GradedSliceComplex(fp, 0, 1, {(0, 0): 1, (1, 0): 1}, {(1, 0): np.array([[0]])})
    assert slice_homology(red, 0, 0) and slice_homology(cx, 0, 0)
