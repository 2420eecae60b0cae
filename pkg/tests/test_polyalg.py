"""Polynomial algebras, de Rham differential, wedge products, slice bases."""

import random

from derhamkit.exactlin import ModRing
from derhamkit.polyalg import (
    AlgebraMap,
    DifferentialForm,
    Poly,
    PolyAlgebra,
    apply_map,
    derham_d,
    graded_slice_basis,
    monomial_count,
    wedge,
)

F5 = ModRing(5, 1)
Z4 = ModRing(2, 2)


def alg_xy(ring=F5):
    return PolyAlgebra(ring, ("x", "y"), (1, 1))


def dform(f: Poly) -> DifferentialForm:
    return DifferentialForm.from_poly(f)


def random_form(alg, rng, degree, max_exp=2):
    import itertools

    terms = {}
    for _ in range(rng.randint(1, 4)):
        e = tuple(rng.randint(0, max_exp) for _ in range(alg.nvars))
        w = tuple(sorted(rng.sample(range(alg.nvars), degree))) if degree else ()
        if len(set(w)) == degree:
            terms[(e, w)] = rng.randrange(alg.ring.modulus)
    return DifferentialForm(alg, degree, terms)


def test_apply_map_substitution():
    a = PolyAlgebra(F5, ("x", "x1"), (1, 1), base_var="x")
    b = PolyAlgebra(F5, ("x",), (1,), base_var="x")
    phi = AlgebraMap(a, b, (b.variable("x"), b.variable("x")))
    f = a.variable("x1") * a.variable("x1")
    assert apply_map(phi, f) == b.variable("x") * b.variable("x")

    psi = AlgebraMap(a, b, (b.variable("x"), b.zero()))
    g = a.variable("x") * a.variable("x1") + a.one()
    assert apply_map(psi, g) == b.one()

    ident = AlgebraMap(a, a, (a.variable("x"), a.variable("x1")))
    rng = random.Random(0)
    for _ in range(10):
        h = Poly(a, {(rng.randint(0, 3), rng.randint(0, 3)): rng.randrange(5) for _ in range(3)})
        assert apply_map(ident, h) == h


def test_apply_map_multiplicative_and_weight_preserving():
    a = PolyAlgebra(Z4, ("x", "t"), (1, 2))
    b = PolyAlgebra(Z4, ("x",), (1,))
    phi = AlgebraMap(a, b, (b.variable("x"), b.variable("x") * b.variable("x")))
    assert phi.is_weight_compatible()
    rng = random.Random(1)
    for _ in range(20):
        f = Poly(a, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randrange(4) for _ in range(2)})
        g = Poly(a, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randrange(4) for _ in range(2)})
        assert apply_map(phi, f * g) == apply_map(phi, f) * apply_map(phi, g)
        if f.weight() is not None and not f.is_zero():
            img = apply_map(phi, f)
            assert img.is_zero() or img.weight() == f.weight()


def test_derham_d_examples():
    alg = alg_xy()
    x, y = alg.variable("x"), alg.variable("y")
    # d(x^2 y) = 2xy dx + x^2 dy
    d = derham_d(dform(x * x * y))
    expected = DifferentialForm(alg, 1, {((1, 1), (0,)): 2, ((2, 0), (1,)): 1})
    assert d == expected
    # d(dx) = 0
    dx = DifferentialForm(alg, 1, {(((0, 0)), (0,)): 1})
    assert derham_d(dx).is_zero()
    # d(x dy) = dx ^ dy
    xdy = DifferentialForm(alg, 1, {((1, 0), (1,)): 1})
    assert derham_d(xdy) == DifferentialForm(alg, 2, {((0, 0), (0, 1)): 1})


def test_d_squared_zero_random():
    rng = random.Random(7)
    alg = PolyAlgebra(F5, ("x", "y", "z"), (1, 1, 2))
    for deg in (0, 1):
        for _ in range(20):
            w = random_form(alg, rng, deg)
            assert derham_d(derham_d(w)).is_zero()


def test_leibniz_random():
    rng = random.Random(9)
    alg = PolyAlgebra(F5, ("x", "y", "z"), (1, 1, 1))
    for da, db in ((0, 0), (0, 1), (1, 1)):
        for _ in range(15):
            a = random_form(alg, rng, da)
            b = random_form(alg, rng, db)
            lhs = derham_d(wedge(a, b))
            rhs = wedge(derham_d(a), b) + wedge(a, derham_d(b)).scale((-1) ** da)
            assert lhs == rhs


def test_wedge_signs():
    alg = alg_xy()
    dx = DifferentialForm(alg, 1, {((0, 0), (0,)): 1})
    dy = DifferentialForm(alg, 1, {((0, 0), (1,)): 1})
    assert wedge(dx, dy) == wedge(dy, dx).scale(-1)
    assert wedge(dx, dx).is_zero()
    x, y = alg.variable("x"), alg.variable("y")
    xdx = DifferentialForm(alg, 1, {((1, 0), (0,)): 1})
    ydy = DifferentialForm(alg, 1, {((0, 1), (1,)): 1})
    assert wedge(xdx, ydy) == DifferentialForm(alg, 2, {((1, 1), (0, 1)): 1})


def test_graded_slice_basis_examples():
    kx = PolyAlgebra(F5, ("x",), (1,))
    assert graded_slice_basis(kx, 0, 2) == [((2,), ())]

    kxx1 = PolyAlgebra(F5, ("x", "x1"), (1, 1), base_var="x")
    basis = graded_slice_basis(kxx1, 1, 2)
    labels = {(e, w) for e, w in basis}
    assert labels == {((1, 0), (0,)), ((0, 1), (0,)), ((1, 0), (1,)), ((0, 1), (1,))}
    assert len(basis) == 4

    assert graded_slice_basis(kxx1, 1, 0) == []


def test_slice_basis_matches_generating_function():
    rng = random.Random(13)
    for _ in range(10):
        nv = rng.randint(1, 3)
        weights = tuple(rng.randint(1, 3) for _ in range(nv))
        alg = PolyAlgebra(F5, tuple(f"v{i}" for i in range(nv)), weights)
        w = rng.randint(0, 6)
        assert len(alg.monomials_of_weight(w)) == monomial_count(weights, w)
        # degree-1 slice: sum over which variable carries the d
        count = len(graded_slice_basis(alg, 1, w))
        expected = sum(monomial_count(weights, w - weights[j]) for j in range(nv) if weights[j] <= w)
        assert count == expected


def test_algebra_json_roundtrip():
    alg = PolyAlgebra(Z4, ("x", "t"), (1, 2), base_var="x")
    again = PolyAlgebra.from_json(alg.to_json())
    assert again == alg


def test_weight_zero_variable_rejected():
    import pytest

    with pytest.raises(ValueError):
        PolyAlgebra(F5, ("x",), (0,))


def test_algebra_json_external_format():
    literal = '{"coeff":{"p":2,"n":2},"vars":[{"name":"x","weight":1}], "base_var":"x"}'
    alg = PolyAlgebra.from_json(literal)
    assert alg.ring == Z4 and alg.variables == ("x",) and alg.base_var == "x"
