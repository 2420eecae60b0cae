"""Witt vectors, structure polynomials, tilts, theta and its kernel."""

import random

import pytest

from derhamkit.exactlin import ModRing
from derhamkit.witt import (
    CyclotomicModel,
    QuotientRing,
    WittRing,
    brute_force_ring_isomorphism,
    cyclotomic_polynomial_ppower,
    epsilon_root_witt,
    epsilon_witt,
    generator_ring_homomorphisms,
    ker_theta_report,
    lift_homomorphism,
    structure_polynomials,
    theta_map,
    tilt_ring,
    xi_cyclotomic,
)


def plain_ring(p, n):
    return QuotientRing(ModRing(p, n), (0, 1))


def test_structure_polynomial_examples():
    t = structure_polynomials(2, 2)
    assert t.add[0] == {(1, 0, 0, 0): 1, (0, 0, 1, 0): 1}
    assert t.mul[0] == {(1, 0, 1, 0): 1}
    assert t.add[1] == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (1, 0, 1, 0): -1}
    assert t.mul[1] == {(2, 0, 0, 1): 1, (0, 1, 2, 0): 1, (0, 1, 0, 1): 2}
    # integrality and ghost identities for p = 3 up to length 3
    structure_polynomials(3, 3)


def test_w2_f2_addition_matches_z4():
    f2 = plain_ring(2, 1)
    w = WittRing(2, 2, f2)
    one = w.teichmuller(f2.one)
    assert (one + one).coords == (f2.zero, f2.one)  # 1 + 1 = 2 in Z/4


def test_teichmuller_multiplicative_and_unit():
    f9 = QuotientRing(ModRing(3, 1), (1, 0, 1))  # F_9 = F_3[x]/(x^2+1)
    w = WittRing(3, 2, f9)
    rng = random.Random(1)
    elems = list(f9.enumerate())
    for _ in range(20):
        x = rng.choice(elems)
        y = rng.choice(elems)
        assert (w.teichmuller(x) * w.teichmuller(y)).coords == w.teichmuller(f9.mul(x, y)).coords
    assert (w.one * w.teichmuller(elems[3])).coords == w.teichmuller(elems[3]).coords


def test_ghost_homomorphy_over_z8():
    base = plain_ring(2, 3)  # Z/8
    w = WittRing(2, 3, base)
    rng = random.Random(7)
    for _ in range(100):
        a = w.vector(tuple((rng.randrange(8),) for _ in range(3)))
        b = w.vector(tuple((rng.randrange(8),) for _ in range(3)))
        ga, gb = a.ghost(), b.ghost()
        gs = (a + b).ghost()
        gp = (a * b).ghost()
        for i in range(3):
            assert gs[i] == base.add(ga[i], gb[i])
            assert gp[i] == base.mul(ga[i], gb[i])


def test_ghost_homomorphy_over_zp4():
    base = plain_ring(2, 4)  # Z/16
    w = WittRing(2, 4, base)
    rng = random.Random(9)
    for _ in range(30):
        a = w.vector(tuple((rng.randrange(16),) for _ in range(4)))
        b = w.vector(tuple((rng.randrange(16),) for _ in range(4)))
        gs = (a - b).ghost()
        ga, gb = a.ghost(), b.ghost()
        for i in range(4):
            assert gs[i] == base.add(ga[i], base.neg(gb[i]))


def test_w2_f2_isomorphic_to_z4_exhaustive():
    f2 = plain_ring(2, 1)
    w = WittRing(2, 2, f2)
    z4 = plain_ring(2, 2)
    assert brute_force_ring_isomorphism(w, z4) is not None


def test_w2_f4_isomorphic_to_z4_adjoin_root():
    f4 = QuotientRing(ModRing(2, 1), (1, 1, 1))
    w = WittRing(2, 2, f4)
    target = QuotientRing(ModRing(2, 2), (1, 1, 1))  # Z/4[x]/(x^2+x+1)
    homs = generator_ring_homomorphisms(w, target)
    isos = [h for h in homs if len(set(h[1].values())) == 16]
    assert isos, "no isomorphism found by exhaustion"


def test_p_filtration_layers():
    # p^i W_n(F_q) / p^(i+1) W_n(F_q) has q elements, realized by r -> p^i [r]
    for gpoly, q in (((0, 1), 2), ((1, 1, 1), 4)):
        fq = QuotientRing(ModRing(2, 1), gpoly)
        w = WittRing(2, 2, fq)
        p_w = {(x + x).coords for x in w.enumerate()}  # 2 * W
        assert len(p_w) == q
        # the map r -> p[r] hits each class once: p[r] - p[s] = 0 iff r = s
        reps = {}
        for r in fq.enumerate():
            tr = w.teichmuller(r)
            reps[r] = (tr + tr).coords
        assert len(set(reps.values())) == q
        # additive: p[r] + p[s] = p[r + s] modulo p^2 W = 0
        for r in fq.enumerate():
            for s in fq.enumerate():
                lhs = w.vector(reps[r]) + w.vector(reps[s])
                assert lhs.coords == reps[fq.add(r, s)]


def test_lift_homomorphism_identity_and_frobenius():
    f4 = QuotientRing(ModRing(2, 1), (1, 1, 1))
    w = WittRing(2, 2, f4)
    s = QuotientRing(ModRing(2, 2), (1, 1, 1))

    def reduction(a):
        return tuple(c % 2 for c in a)

    # identity reduction lifts to a ring isomorphism
    lift_id = lift_homomorphism(lambda r: r, f4, w, s, reduction)
    vals = {lift_id(x) for x in w.enumerate()}
    assert len(vals) == 16
    for a in w.enumerate():
        for b in w.enumerate():
            assert lift_id(a + b) == s.add(lift_id(a), lift_id(b))
            assert lift_id(a * b) == s.mul(lift_id(a), lift_id(b))
    # Frobenius reduction lifts; uniqueness by exhaustion over all ring maps
    frob = lambda r: f4.power(r, 2)
    lift_fr = lift_homomorphism(frob, f4, w, s, reduction)
    homs = generator_ring_homomorphisms(w, s)
    matching = []
    for img, images in homs:
        if all(reduction(images[w.teichmuller(r).coords]) == frob(r) for r in f4.enumerate()):
            matching.append(images)
    assert len(matching) == 1
    assert all(matching[0][x.coords] == lift_fr(x) for x in w.enumerate())


def test_lift_homomorphism_lift_independent():
    f4 = QuotientRing(ModRing(2, 1), (1, 1, 1))
    w = WittRing(2, 2, f4)
    s = QuotientRing(ModRing(2, 2), (1, 1, 1))
    reduction = lambda a: tuple(c % 2 for c in a)
    twisted = lambda rbar: tuple((c + 2) % 4 for c in rbar)  # lift shifted by p
    l1 = lift_homomorphism(lambda r: r, f4, w, s, reduction)
    l2 = lift_homomorphism(lambda r: r, f4, w, s, reduction, lifts=twisted)
    for x in w.enumerate():
        assert l1(x) == l2(x)


def test_lift_homomorphism_requires_perfect():
    notperf = QuotientRing(ModRing(2, 1), (0, 0, 1))  # F_2[x]/(x^2): Frobenius kills x
    w = WittRing(2, 2, notperf)
    s = QuotientRing(ModRing(2, 2), (0, 0, 1))
    with pytest.raises(ValueError):
        lift_homomorphism(lambda r: r, notperf, w, s, lambda a: tuple(c % 2 for c in a))


def test_cyclotomic_model_invariants():
    with pytest.raises(ValueError):
        CyclotomicModel(2, 2, 2, 2)  # k > m - 1
    with pytest.raises(ValueError):
        CyclotomicModel(2, 3, 2, 1)  # k < n
    m = CyclotomicModel(2, 3, 2, 2)
    assert m.ring_o().size == 4 ** 4


def test_tilt_ring_small_example():
    model = CyclotomicModel(2, 2, 1, 1)
    t = tilt_ring(model)
    elems = list(t.enumerate())
    assert len(elems) == 4  # O/2 = F_2[x]/((x+1)^2) has 4 compatible pairs
    assert all(t.validate(e) for e in elems)
    assert t.zero in elems and t.one in elems
    assert t.validate(t.epsilon())
    assert t.raise_frobenius_bijective()


def test_theta_identities():
    model = CyclotomicModel(2, 3, 2, 2)
    t = tilt_ring(model)
    w = WittRing(2, 2, t)
    o = model.ring_o()
    eps = epsilon_witt(w, t)
    assert theta_map(eps, model) == o.one
    assert theta_map(w.one, model) == o.one
    two = w.one + w.one
    assert theta_map(two, model) == o.scale(2, o.one)
    # theta([eps^{1/2}]) = zeta_2 = -1 exactly
    root = epsilon_root_witt(w, t)
    assert theta_map(root, model) == o.neg(o.one)
    # theta reduces mod p to the projection onto the zeroth entry
    import random

    rng = random.Random(3)
    elems = list(t.enumerate())
    for _ in range(20):
        a = w.vector((rng.choice(elems), rng.choice(elems)))
        th = theta_map(a, model)
        assert tuple(c % 2 for c in th) == a.coords[0][0]


def test_theta_sharp_lift_independent():
    model = CyclotomicModel(2, 3, 2, 2)
    t = tilt_ring(model)
    w = WittRing(2, 2, t)
    import random

    rng = random.Random(5)
    elems = list(t.enumerate())
    o = model.ring_o()
    twisted = lambda rbar: tuple((c + 2 * rng.randrange(2)) % 4 for c in rbar)
    for _ in range(20):
        a = w.vector((rng.choice(elems), rng.choice(elems)))
        assert theta_map(a, model) == theta_map(a, model, lift=twisted)


def test_ker_theta_model():
    model = CyclotomicModel(2, 3, 2, 2)
    rep = ker_theta_report(model)
    assert rep.ok
    assert rep.sizes["tilt"] == 16 and rep.sizes["witt"] == 256
    assert rep.raise_frobenius_bijective
    # theta(1 + [eps^{1/2}]) = 1 + (-1) = 0
    t = tilt_ring(model)
    w = WittRing(2, 2, t)
    o = model.ring_o()
    xi = xi_cyclotomic(w, t)
    assert theta_map(xi, model) == o.zero
    # [1] - [1] = 0 is in the kernel
    assert theta_map(w.one - w.one, model) == o.zero


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial_ppower(2, 1) == [1, 1]
    assert cyclotomic_polynomial_ppower(2, 3) == [1, 0, 0, 0, 1]
    assert cyclotomic_polynomial_ppower(3, 2) == [1, 0, 0, 1, 0, 0, 1]


def test_verschiebung_ghost_shift():
    # w_i(V a) = p * w_{i-1}(a), and V is additive
    base = plain_ring(3, 2)  # Z/9
    w = WittRing(3, 2, base)
    import random

    rng = random.Random(13)
    for _ in range(20):
        a = w.vector(tuple((rng.randrange(9),) for _ in range(2)))
        b = w.vector(tuple((rng.randrange(9),) for _ in range(2)))
        va = w.verschiebung(a)
        ga = a.ghost()
        gva = va.ghost()
        assert gva[0] == base.zero
        assert gva[1] == base.scale(3, ga[0])
        assert w.verschiebung(a + b).coords == (w.verschiebung(a) + w.verschiebung(b)).coords


def test_theta_model_odd_prime():
    model = CyclotomicModel(3, 2, 1, 1)
    t = tilt_ring(model)
    assert t.size == 729
    w = WittRing(3, 1, t)
    o = model.ring_o()
    eps = epsilon_witt(w, t)
    assert theta_map(eps, model) == o.one
    xi = xi_cyclotomic(w, t)
    assert theta_map(xi, model) == o.zero  # 1 + zeta_3 + zeta_3^2 = 0
    assert theta_map(eps - w.one, model) == o.zero
