"""Filtered de Rham complexes: Hodge quotients, graded pieces, thickenings,
divided-power envelope comparisons, and the shuffle ring structure."""

import pytest

from derhamkit.complexes import homology_quotient, slice_homology
from derhamkit.cotangent import AlgebraPresentation, DepthError
from derhamkit.derham import (
    build_derham,
    graded_piece_report,
    h0_shuffle_product,
    hodge_quotient_homology,
    pd_envelope_report,
    universal_thickening,
)
from derhamkit.exactlin import ModRing
from derhamkit.pdpow import derived_power

F2 = ModRing(2, 1)
F3 = ModRing(3, 1)
Z4 = ModRing(2, 2)


def pres_x(ring):
    return AlgebraPresentation(ring, "quotient", "x", (0, 1))


def test_build_structure_and_cut_one():
    # m = 1: the complex computes gr^0, i.e. the resolution itself: H_0 = B
    f = build_derham(pres_x(F2), hodge_cut=1, window=(0, 1), weight_bound=3)
    assert slice_homology(f.total, 0, 0) == [2]
    for w in (1, 2, 3):
        assert slice_homology(f.total, 0, w) == []
    # m = 2: the degree-0 term is Q_0 + Omega^1(Q_1)
    f2 = build_derham(pres_x(F2), hodge_cut=2, window=(0, 1), weight_bound=3)
    lay, total = f2.layout(0, 1)
    assert [(j, i) for (j, i, _) in lay] == [(0, 0), (1, 1)]
    assert total == 2  # x and dt_1 at weight 1


def test_depth_guard():
    from derhamkit.cotangent import FreeSimplicialResolution
    from derhamkit.derham import FilteredDeRhamComplex

    res = FreeSimplicialResolution(pres_x(F2), d_max=2, weight_bound=3)
    with pytest.raises(DepthError):
        FilteredDeRhamComplex(res, hodge_cut=3, window=(0, 2), weight_bound=3)


def test_hodge_quotient_dimensions_mod_p():
    for ring in (F2, F3):
        f = build_derham(pres_x(ring), hodge_cut=5, window=(0, 1), weight_bound=4)
        for i in range(1, 5):
            rep = hodge_quotient_homology(f, i, degrees=[0])
            dim = sum(len(e["factors"]) for (n, _), e in rep.entries.items() if n == 0)
            assert dim == i
        # i = 1: H_0 = B
        rep1 = hodge_quotient_homology(f, 1, degrees=[0])
        assert rep1.factors(0, 0) == [ring.modulus]


def test_hodge_quotient_sizes_mod_four():
    f = build_derham(pres_x(Z4), hodge_cut=4, window=(0, 1), weight_bound=3)
    for i in range(1, 5):
        rep = hodge_quotient_homology(f, min(i, 4), degrees=[0])
        size = 1
        for (n, _), e in rep.entries.items():
            if n == 0:
                for fac in e["factors"]:
                    size *= fac
        assert size == 4 ** min(i, 4)


def test_hodge_additivity_against_derived_power():
    # length H_0(F^i) - length H_0(F^{i-1}) equals the gr^{i-1} length
    # computed independently through the derived power functor
    from derhamkit.cotangent import shortcut_conormal_complex

    f = build_derham(pres_x(F2), hodge_cut=4, window=(0, 1), weight_bound=3)
    lengths = {}
    for i in range(1, 5):
        rep = hodge_quotient_homology(f, min(i, f.hodge_cut), degrees=[0])
        lengths[i] = sum(e["length"] for (n, _), e in rep.entries.items() if n == 0)
    small = shortcut_conormal_complex(pres_x(F2), 4)
    for i in range(2, 4):
        rep = derived_power(small, "wedge", i - 1, degrees=range(i))
        gr_len = sum(e["length"] for e in rep.entries.values())
        assert lengths[i] - lengths[i - 1] == gr_len


def test_graded_pieces():
    f = build_derham(pres_x(F3), hodge_cut=3, window=(0, 2), weight_bound=3)
    g0 = graded_piece_report(f, 0)
    assert g0.ok
    g2 = graded_piece_report(f, 2)
    assert g2.ok and g2.verdicts.get((0, 2)) == ([3], [3], True)
    # B = F_2[x]/(x^2): gr^1 is a rank-two (= rank-p) module
    fx2 = build_derham(AlgebraPresentation(F2, "quotient", "x", (0, 0, 1)),
                       hodge_cut=2, window=(0, 2), weight_bound=6)
    g1 = graded_piece_report(fx2, 1)
    assert g1.ok
    assert sum(len(l) for (l, _, _) in g1.verdicts.values()) == 2


def test_universal_thickening_z4():
    pres = AlgebraPresentation(Z4, "quotient", "y", (0, 1))
    t = universal_thickening(pres, weight_bound=2)
    assert t.ok
    # 16 elements supported in weights <= 1
    size = 1
    for w, q in t.h0.items():
        size *= q.size
    assert size == 16
    assert t.h0[0].factors == [4] and t.h0[1].factors == [4]
    assert t.h0[2].factors == []


def test_universal_thickening_square_zero_explicit():
    pres = AlgebraPresentation(Z4, "quotient", "y", (0, 1))
    f = build_derham(pres, hodge_cut=2, window=(0, 1), weight_bound=2)
    omega = f.basis_vector(0, 1, 1, 1, ((0, 0), (1,)))
    prod = h0_shuffle_product(f, omega, 1, omega, 1)
    q2 = homology_quotient(f.total, 0, 2)
    assert q2.is_zero_class(prod)


def test_universal_thickening_needs_vanishing_differentials():
    with pytest.raises(ValueError):
        universal_thickening(AlgebraPresentation(F2, "free", free_rank=1), 2)


def test_pd_envelope_x_over_z4():
    rep = pd_envelope_report(pres_x(Z4), weight_bound=4)
    assert rep.ok and rep.iso_certified and rep.higher_vanishing
    for w in range(5):
        facs, pd_facs, eq = rep.slice_verdicts[w]
        assert eq and facs == [4]


def test_pd_envelope_x_mod_two():
    rep = pd_envelope_report(pres_x(F2), weight_bound=5)
    assert rep.ok
    for w in range(6):
        facs, _, eq = rep.slice_verdicts[w]
        assert eq and facs == [2]  # one-dimensional slices


def test_pd_envelope_x_squared():
    rep = pd_envelope_report(AlgebraPresentation(Z4, "quotient", "x", (0, 0, 1)),
                             weight_bound=4)
    assert rep.ok and rep.iso_certified
    rep.to_json()


def test_shuffle_ring_structure_divided_powers():
    f = build_derham(pres_x(Z4), hodge_cut=5, window=(0, 1), weight_bound=4)
    qs = {w: homology_quotient(f.total, 0, w) for w in range(5)}
    gam = {
        0: f.basis_vector(0, 0, 0, 0, ((0,), ())),
        1: f.basis_vector(0, 1, 1, 1, ((0, 0), (1,))),
        2: f.basis_vector(0, 2, 2, 2, ((0, 0, 0), (1, 2))),
        3: f.basis_vector(0, 3, 3, 3, ((0, 0, 0, 0), (1, 2, 3))),
    }
    # unit
    assert qs[1].coords(h0_shuffle_product(f, gam[0], 0, gam[1], 1)) == qs[1].coords(gam[1])
    # gamma_a gamma_b = binom(a+b, a) gamma_{a+b}
    from math import comb

    for a in (1, 2):
        for b in (1, 2):
            if a + b > 3:
                continue
            prod = h0_shuffle_product(f, gam[a], a, gam[b], b)
            expected = (comb(a + b, a) * gam[a + b]) % 4
            assert qs[a + b].coords(prod) == qs[a + b].coords(expected)
    # commutativity and associativity on samples
    p12 = h0_shuffle_product(f, gam[1], 1, gam[2], 2)
    p21 = h0_shuffle_product(f, gam[2], 2, gam[1], 1)
    assert qs[3].coords(p12) == qs[3].coords(p21)
    lhs = h0_shuffle_product(f, h0_shuffle_product(f, gam[1], 1, gam[1], 1), 2, gam[1], 1)
    rhs = h0_shuffle_product(f, gam[1], 1, h0_shuffle_product(f, gam[1], 1, gam[1], 1), 2)
    assert qs[3].coords(lhs) == qs[3].coords(rhs)


def test_filtration_multiplicativity():
    # product of classes in F^a and F^b lands in F^{a+b}
    import numpy as np
    from derhamkit.exactlin import span_contains

    f = build_derham(pres_x(Z4), hodge_cut=5, window=(0, 1), weight_bound=4)
    g1 = f.basis_vector(0, 1, 1, 1, ((0, 0), (1,)))
    g2 = f.basis_vector(0, 2, 2, 2, ((0, 0, 0), (1, 2)))
    prod = h0_shuffle_product(f, g1, 1, g2, 2)
    fil3 = f.filtration_coordinates(3, 0, 3)
    bnd = f.total.diff(1, 3)
    span = np.vstack([fil3, bnd]) if bnd.size else fil3
    assert span_contains(prod, span, Z4)


def test_frobenius_splitting_dimension_audit():
    # over F_p with B = F_p over F_p[x]: per weight, the sum over columns of
    # graded-piece homology dimensions equals the dimension of H_j(LOmega)
    f = build_derham(pres_x(F2), hodge_cut=4, window=(0, 1), weight_bound=3)
    reports = [graded_piece_report(f, level) for level in range(4)]
    for j in (0, 1):
        for w in range(4):
            total = len(slice_homology(f.total, j, w))
            by_pieces = sum(
                len(rep.verdicts[(j, w)][0]) for rep in reports if (j, w) in rep.verdicts
            )
            assert total == by_pieces


def test_pd_envelope_mod_three():
    rep = pd_envelope_report(pres_x(F3), weight_bound=4)
    assert rep.ok
    for w in range(5):
        facs, _, eq = rep.slice_verdicts[w]
        assert eq and facs == [3]


def test_thickening_no_homology_below_zero():
    pres = AlgebraPresentation(Z4, "quotient", "y", (0, 1))
    f = build_derham(pres, hodge_cut=2, window=(0, 1), weight_bound=2)
    for w in range(3):
        assert homology_quotient(f.total, -1, w).factors == []


def test_thickening_other_rings():
    # Z/9[y]/(y) and Z/4[x]/(x^2): the thickening is A/(f^2) in each case
    from derhamkit.exactlin import ModRing as MR

    t9 = universal_thickening(AlgebraPresentation(MR(3, 2), "quotient", "y", (0, 1)), 2)
    assert t9.ok
    t4 = universal_thickening(AlgebraPresentation(Z4, "quotient", "x", (0, 0, 1)), 4)
    assert t4.ok
    # sizes: |A/(x^4)| restricted to weights <= 4 is 4^4
    size = 1
    for q in t4.h0.values():
        size *= q.size
    assert size == 4 ** 4


def test_h0_product_descends_and_is_commutative_on_random_cycles():
    import random

    import numpy as np
    from derhamkit.exactlin import left_kernel

    rng = random.Random(23)
    f = build_derham(pres_x(Z4), hodge_cut=4, window=(0, 1), weight_bound=3)
    qs = {w: homology_quotient(f.total, 0, w) for w in range(4)}
    for _ in range(12):
        w1, w2 = rng.randint(0, 1), rng.randint(0, 2)
        d1 = f.total.diff(0, w1)
        cyc1 = left_kernel(d1, Z4) if d1.size else np.eye(f.total.dim(0, w1), dtype=np.int64)
        d2 = f.total.diff(0, w2)
        cyc2 = left_kernel(d2, Z4) if d2.size else np.eye(f.total.dim(0, w2), dtype=np.int64)
        if not (cyc1.shape[0] and cyc2.shape[0]):
            continue
        u = (np.array([rng.randrange(4) for _ in range(cyc1.shape[0])]) @ cyc1) % 4
        v = (np.array([rng.randrange(4) for _ in range(cyc2.shape[0])]) @ cyc2) % 4
        prod = h0_shuffle_product(f, u, w1, v, w2)
        prod_rev = h0_shuffle_product(f, v, w2, u, w1)
        q = qs[w1 + w2]
        assert q.coords(prod) == q.coords(prod_rev)
        # shifting u by a boundary leaves the class of the product unchanged
        bnd = f.total.diff(1, w1)
        if bnd.size and bnd.shape[0]:
            shift = (u + bnd[rng.randrange(bnd.shape[0])]) % 4
            prod_shift = h0_shuffle_product(f, shift, w1, v, w2)
            assert q.coords(prod_shift) == q.coords(prod)


def test_hodge_quotient_maps_are_chain_maps():
    from derhamkit.exactlin import mmul

    f = build_derham(pres_x(Z4), hodge_cut=4, window=(0, 1), weight_bound=3)
    for hi, lo in ((4, 3), (3, 2), (4, 1)):
        chi = f.quotient_complex(hi)
        clo = f.quotient_complex(lo)
        for w in range(4):
            for n in (0, 1):
                pr_n = f.quotient_map(hi, lo, n, w)
                pr_n1 = f.quotient_map(hi, lo, n - 1, w)
                lhs = mmul(chi.diff(n, w), pr_n1, Z4) if chi.diff(n, w).size else None
                rhs = mmul(pr_n, clo.diff(n, w), Z4) if pr_n.size else None
                if lhs is not None and rhs is not None:
                    assert (lhs == rhs).all()
