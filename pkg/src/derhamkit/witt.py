"""Truncated Witt vectors, tilts of cyclotomic quotient rings, and theta.

The structure polynomials are solved exactly from the ghost equations
w_i = sum p^j z_j^{p^(i-j)} over the rationals and verified integral and
ghost-compatible symbolically; Witt arithmetic over any finite base ring
evaluates these tables.  Finite-depth tilts are compatible p-power
sequences in O/p for O = Z[zeta_{p^m}]/(p^n); they are not perfect rings,
and every report carries the (p, m, n, k) parameters.  theta sends
(a_0..a_{n-1}) to sum p^i sharp(a_i shifted down i times), where sharp
raises an arbitrary lift of the deepest entry to its p-power; the result
is lift-independent for k >= n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactlin import ModRing, is_prime

__all__ = [
    "StructurePolynomialTable",
    "structure_polynomials",
    "QuotientRing",
    "WittRing",
    "WittVector",
    "lift_homomorphism",
    "CyclotomicModel",
    "TiltElement",
    "TiltRing",
    "tilt_ring",
    "theta_map",
    "ker_theta_report",
]


# ---------------------------------------------------------------------------
# exact multivariate polynomials over Q (ghost solving only)


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
        if out[e] == 0:
            del out[e]
    return out


def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
            if out[e] == 0:
                del out[e]
    return out


def _pscale(c, a):
    return {e: c * v for e, v in a.items() if c * v != 0}


def _ppow(a, k):
    nv = len(next(iter(a))) if a else 0
    out = {(0,) * nv: 1}
    for _ in range(k):
        out = _pmul(out, a)
    return out


def _pvar(idx, nvars):
    e = [0] * nvars
    e[idx] = 1
    return {tuple(e): 1}


def _ghost(coords, p, i):
    """w_i = sum_{j<=i} p^j z_j^{p^(i-j)} for symbolic coordinates."""
    nv = len(next(iter(coords[0])))
    out = {}
    for j in range(i + 1):
        out = _padd(out, _pscale(p ** j, _ppow(coords[j], p ** (i - j))))
    return out


@dataclass(frozen=True)
class StructurePolynomialTable:
    """Integral addition/multiplication/negation polynomials for W_n."""

    p: int
    n: int
    add: tuple  # S_0..S_{n-1} in x_0..x_{n-1}, y_0..y_{n-1}
    mul: tuple  # P_0..P_{n-1}
    neg: tuple  # N_0..N_{n-1} in x_0..x_{n-1}


@lru_cache(maxsize=None)
def structure_polynomials(p: int, n: int) -> StructurePolynomialTable:
    """Solve the ghost equations over Q and certify integrality plus the
    ghost identities w_i(S) = w_i(x) + w_i(y), w_i(P) = w_i(x) w_i(y)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= n <= 4:
        raise ValueError("table sizes support 1 <= n <= 4")
    nv = 2 * n
    xs = [_pvar(i, nv) for i in range(n)]
    ys = [_pvar(n + i, nv) for i in range(n)]

    def solve(target_of_i, arity_vars):
        polys = []
        for i in range(n):
            acc = target_of_i(i)
            for j in range(i):
                acc = _padd(acc, _pscale(-(p ** j), _ppow(polys[j], p ** (i - j))))
            poly = {}
            for e, c in acc.items():
                q = Fraction(c, p ** i)
                if q.denominator != 1:
                    raise AssertionError("non-integral structure polynomial (internal error)")
                poly[e] = int(q)
            polys.append(poly)
        return tuple(polys)

    add = solve(lambda i: _padd(_ghost(xs, p, i), _ghost(ys, p, i)), nv)
    mul = solve(lambda i: _pmul(_ghost(xs, p, i), _ghost(ys, p, i)), nv)

    nv1 = n
    xs1 = [_pvar(i, nv1) for i in range(n)]
    neg = solve_unary(p, n, xs1)

    # independent symbolic verification of the ghost identities
    for i in range(n):
        lhs = _ghost(add, p, i)
        rhs = _padd(_ghost(xs, p, i), _ghost(ys, p, i))
        if lhs != rhs:
            raise AssertionError("addition ghost identity failed")
        lhs = _ghost(mul, p, i)
        rhs = _pmul(_ghost(xs, p, i), _ghost(ys, p, i))
        if lhs != rhs:
            raise AssertionError("multiplication ghost identity failed")
        if _ghost(neg, p, i) != _pscale(-1, _ghost(xs1, p, i)):
            raise AssertionError("negation ghost identity failed")
    return StructurePolynomialTable(p, n, add, mul, neg)


def solve_unary(p, n, xs1):
    polys = []
    for i in range(n):
        acc = _pscale(-1, _ghost(xs1, p, i))
        for j in range(i):
            acc = _padd(acc, _pscale(-(p ** j), _ppow(polys[j], p ** (i - j))))
        poly = {}
        for e, c in acc.items():
            q = Fraction(c, p ** i)
            if q.denominator != 1:
                raise AssertionError("non-integral negation polynomial")
            poly[e] = int(q)
        polys.append(poly)
    return tuple(polys)


# ---------------------------------------------------------------------------
# finite quotient rings Z[x]/(g, p^n) and the base-ring protocol


class QuotientRing:
    """Z[x]/(g(x), p^n) with elements as coefficient tuples (length deg g).

    Also serves plain Z/p^n (deg g = 1 via g = x) and F_q (n = 1, g
    irreducible).  Small rings memoize their multiplication table.
    """

    def __init__(self, ring: ModRing, g_coeffs):
        self.ring = ring
        self.m = ring.modulus
        g = [c % self.m for c in g_coeffs]
        while len(g) > 1 and g[-1] == 0:
            g.pop()
        if g[-1] != 1:
            raise ValueError("modulus polynomial must be monic")
        self.g = tuple(g)
        self.deg = len(g) - 1
        # reduction table for x^j, j = deg .. 2 deg - 2
        self._red = {}
        cur = [(-c) % self.m for c in g[:-1]]  # x^deg
        self._red[self.deg] = tuple(cur)
        for j in range(self.deg + 1, 2 * self.deg - 1):
            nxt = [0] + cur[:-1] if self.deg > 1 else [0]
            if self.deg > 1 and cur[-1]:
                lead = cur[-1]
                nxt = [(nxt[t] + lead * self._red[self.deg][t]) % self.m for t in range(self.deg)]
                nxt = [(x + y) % self.m for x, y in zip([0] + cur[:-1], [lead * c % self.m for c in self._red[self.deg]])]
            self._red[j] = tuple(x % self.m for x in nxt)
            cur = list(self._red[j])
        self.zero = (0,) * self.deg
        one = [0] * self.deg
        one[0] = 1 % self.m
        self.one = tuple(one)
        self._table = None
        if self.size <= 512:
            self._build_table()

    @property
    def size(self) -> int:
        return self.m ** self.deg

    def element(self, coeffs) -> tuple:
        out = [c % self.m for c in coeffs]
        while len(out) > self.deg:
            # long reduction for arbitrary-degree input
            k = len(out) - 1
            lead = out.pop()
            if lead:
                red = self._power_reduction(k)
                for t in range(self.deg):
                    out[t] = (out[t] + lead * red[t]) % self.m
        out += [0] * (self.deg - len(out))
        return tuple(out)

    def _power_reduction(self, k: int) -> tuple:
        if k < self.deg:
            e = [0] * self.deg
            e[k] = 1
            return tuple(e)
        if k in self._red:
            return self._red[k]
        prev = self._power_reduction(k - 1)
        shifted = [0] + list(prev[:-1])
        lead = prev[-1]
        if lead:
            base = self._power_reduction(self.deg)
            shifted = [(shifted[t] + lead * base[t]) % self.m for t in range(self.deg)]
        self._red[k] = tuple(x % self.m for x in shifted)
        return self._red[k]

    def x_power(self, k: int) -> tuple:
        return self._power_reduction(k) if k >= self.deg else self.element([0] * k + [1])

    def add(self, a, b):
        return tuple((x + y) % self.m for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.m for x in a)

    def scale(self, c, a):
        c %= self.m
        return tuple((c * x) % self.m for x in a)

    def _build_table(self):
        elems = list(self.enumerate())
        index = {e: k for k, e in enumerate(elems)}
        table = {}
        for a in elems:
            for b in elems:
                table[(a, b)] = self._mul_raw(a, b)
        self._table = table

    def _mul_raw(self, a, b):
        conv = [0] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] = (conv[i + j] + x * y) % self.m
        out = list(conv[: self.deg])
        for j in range(self.deg, len(conv)):
            if conv[j]:
                red = self._power_reduction(j)
                for t in range(self.deg):
                    out[t] = (out[t] + conv[j] * red[t]) % self.m
        return tuple(out)

    def mul(self, a, b):
        if self._table is not None:
            return self._table[(a, b)]
        return self._mul_raw(a, b)

    def power(self, a, k: int):
        out = self.one
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def enumerate(self):
        for coeffs in itertools.product(range(self.m), repeat=self.deg):
            yield tuple(coeffs)

    def reduce_mod_p(self, target: "QuotientRing", a):
        """Reduction map to the same polynomial ring mod p."""
        return tuple(c % target.m for c in a)

    def frobenius_bijective(self) -> bool:
        if self.ring.n != 1:
            return False
        seen = {self.power(a, self.ring.p) for a in self.enumerate()}
        return len(seen) == self.size

    def frobenius_inverse_table(self) -> dict:
        if not self.frobenius_bijective():
            raise ValueError("Frobenius is not bijective on this ring")
        return {self.power(a, self.ring.p): a for a in self.enumerate()}


# ---------------------------------------------------------------------------
# Witt vectors over a base ring


@dataclass(frozen=True)
class WittRing:
    p: int
    length: int
    base: object  # QuotientRing or TiltRing

    def __post_init__(self):
        structure_polynomials(self.p, self.length)

    def table(self) -> StructurePolynomialTable:
        return structure_polynomials(self.p, self.length)

    def vector(self, coords) -> "WittVector":
        return WittVector(self, tuple(coords))

    @property
    def zero(self):
        return self.vector((self.base.zero,) * self.length)

    @property
    def one(self):
        return self.vector((self.base.one,) + (self.base.zero,) * (self.length - 1))

    def teichmuller(self, x) -> "WittVector":
        return self.vector((x,) + (self.base.zero,) * (self.length - 1))

    def verschiebung(self, w: "WittVector") -> "WittVector":
        return self.vector((self.base.zero,) + w.coords[: self.length - 1])

    def from_integer(self, k: int) -> "WittVector":
        out = self.zero
        one = self.one
        sign = 1 if k >= 0 else -1
        for _ in range(abs(k)):
            out = out + one if sign > 0 else out - one
        return out

    def enumerate(self):
        for coords in itertools.product(self.base.enumerate(), repeat=self.length):
            yield self.vector(coords)

    def eval_poly(self, poly, values):
        """Evaluate an integer-coefficient structure polynomial on base values."""
        base = self.base
        acc = base.zero
        pow_cache = {}
        for expts, coeff in poly.items():
            term = None
            for idx, k in enumerate(expts):
                if k == 0:
                    continue
                key = (idx, k)
                if key not in pow_cache:
                    v = values[idx]
                    pw = base.one
                    for _ in range(k):
                        pw = base.mul(pw, v)
                    pow_cache[key] = pw
                term = pow_cache[key] if term is None else base.mul(term, pow_cache[key])
            if term is None:
                term = base.one
            acc = base.add(acc, base.scale(coeff, term))
        return acc


@dataclass(frozen=True)
class WittVector:
    ring: WittRing
    coords: tuple

    def _binary(self, other, polys):
        values = list(self.coords) + list(other.coords)
        out = tuple(self.ring.eval_poly(s, values) for s in polys)
        return WittVector(self.ring, out)

    def __add__(self, other):
        self._check(other)
        return self._binary(other, self.ring.table().add)

    def __mul__(self, other):
        self._check(other)
        return self._binary(other, self.ring.table().mul)

    def __neg__(self):
        values = list(self.coords)
        return WittVector(self.ring, tuple(self.ring.eval_poly(s, values) for s in self.ring.table().neg))

    def __sub__(self, other):
        return self + (-other)

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("Witt vectors over different rings")

    def ghost(self) -> tuple:
        base = self.ring.base
        p = self.ring.p
        out = []
        for i in range(self.ring.length):
            acc = base.zero
            for j in range(i + 1):
                acc = base.add(acc, base.scale(p ** j, base.power(self.coords[j], p ** (i - j))))
            out.append(acc)
        return tuple(out)


def lift_homomorphism(phi, source: QuotientRing, witt: WittRing, target: QuotientRing,
                      reduction, lifts=None):
    """Lift phi: R -> S/p to the homomorphism W_n(R) -> S for perfect R.

    ``phi`` maps source elements to target-mod-p elements; ``reduction``
    maps target elements to target-mod-p elements; ``lifts`` optionally
    picks lifts (defaults to the coefficientwise lift).  Returns a function
    on Witt vectors; the formula is sum_i p^i tau(Frob^{-i} a_i) with
    tau(r) = lift(phi(r^{p^{-(n-1)}}))^{p^(n-1)}, which stabilizes because
    lifts differing mod p have equal p^j-th powers mod p^(j+1).
    """
    n = witt.length
    p = witt.p
    if not source.frobenius_bijective():
        raise ValueError("Frobenius is not surjective on the represented elements")
    frob_inv = source.frobenius_inverse_table()

    def inv_frob(a, times):
        for _ in range(times):
            a = frob_inv[a]
        return a

    def default_lift(rbar):
        return tuple(rbar) + (0,) * (target.deg - len(rbar))

    lift = lifts or default_lift

    def tau(r):
        rbar = phi(inv_frob(r, n - 1))
        return target.power(target.element(lift(rbar)), p ** (n - 1))

    def apply(w: WittVector):
        acc = target.zero
        for i in range(n):
            acc = target.add(acc, target.scale(p ** i, tau(inv_frob(w.coords[i], i))))
        return acc

    return apply


# ---------------------------------------------------------------------------
# exhaustive isomorphism searches (small models)


def brute_force_ring_isomorphism(wr: WittRing, target: QuotientRing):
    """Search all bijections W -> target for a ring isomorphism (tiny sets)."""
    elems = list(wr.enumerate())
    tgt = list(target.enumerate())
    if len(elems) != len(tgt) or len(elems) > 8:
        raise ValueError("brute-force search is for matching tiny carriers")
    add = {(a.coords, b.coords): (a + b).coords for a in elems for b in elems}
    mul = {(a.coords, b.coords): (a * b).coords for a in elems for b in elems}
    for perm in itertools.permutations(tgt):
        phi = {e.coords: t for e, t in zip(elems, perm)}
        if phi[wr.one.coords] != target.one or phi[wr.zero.coords] != target.zero:
            continue
        good = all(
            phi[add[(a.coords, b.coords)]] == target.add(phi[a.coords], phi[b.coords])
            and phi[mul[(a.coords, b.coords)]] == target.mul(phi[a.coords], phi[b.coords])
            for a in elems
            for b in elems
        )
        if good:
            return phi
    return None


def witt_additive_basis(wr: WittRing):
    """Teichmuller lifts of the power basis of F_q: every Witt vector is a
    unique integer combination (checked by full enumeration)."""
    base: QuotientRing = wr.base
    basis = [wr.teichmuller(base.x_power(i)) for i in range(base.deg)]
    m = wr.p ** wr.length
    seen = {}
    for coeffs in itertools.product(range(m), repeat=len(basis)):
        acc = wr.zero
        for c, vec in zip(coeffs, basis):
            for _ in range(c):
                acc = acc + vec
        if acc.coords in seen:
            raise AssertionError("Teichmuller basis combinations collide")
        seen[acc.coords] = coeffs
    if len(seen) != base.size ** wr.length:
        raise AssertionError("Teichmuller basis does not span")
    return basis, seen


def generator_ring_homomorphisms(wr: WittRing, target: QuotientRing):
    """All unital ring homomorphisms W_n(F_q) -> target, found by choosing
    the image of the Teichmuller generator and testing multiplicativity on
    every pair (the additive extension is forced by the integer basis)."""
    basis, coords_of = witt_additive_basis(wr)
    m = wr.p ** wr.length
    elems = list(wr.enumerate())
    gens = []
    for img in target.enumerate():
        images = {}
        ok = True
        for w in elems:
            coeffs = coords_of[w.coords]
            acc = target.zero
            powg = target.one
            for c, _ in zip(coeffs, basis):
                acc = target.add(acc, target.scale(c, powg))
                powg = target.mul(powg, img)
            images[w.coords] = acc
        for a in elems:
            if not ok:
                break
            for b in elems:
                if images[(a * b).coords] != target.mul(images[a.coords], images[b.coords]):
                    ok = False
                    break
                if images[(a + b).coords] != target.add(images[a.coords], images[b.coords]):
                    ok = False
                    break
        if ok:
            gens.append((img, images))
    return gens


# ---------------------------------------------------------------------------
# cyclotomic models, tilts, theta


@lru_cache(maxsize=None)
def _cached_quotient_ring(p: int, n: int, m: int) -> "QuotientRing":
    return QuotientRing(ModRing(p, n), cyclotomic_polynomial_ppower(p, m))


def cyclotomic_polynomial_ppower(p: int, m: int) -> list[int]:
    """Phi_{p^m}(x) = sum_{k<p} x^(k p^(m-1)), constant-first coefficients."""
    d = (p - 1) * p ** (m - 1)
    coeffs = [0] * (d + 1)
    for k in range(p):
        coeffs[k * p ** (m - 1)] = 1
    return coeffs


@dataclass(frozen=True)
class CyclotomicModel:
    """O = Z[zeta_{p^m}]/(p^n) with tilt depth k: k <= m-1 (enough p-power
    roots of unity for epsilon) and k >= n (theta precision)."""

    p: int
    m: int
    n: int
    k: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("p must be prime")
        if self.k > self.m - 1:
            raise ValueError("depth k needs k <= m - 1 (epsilon needs p-power roots)")
        if self.k < self.n:
            raise ValueError("theta precision needs k >= n")

    def ring_o(self) -> QuotientRing:
        return _cached_quotient_ring(self.p, self.n, self.m)

    def ring_o_mod_p(self) -> QuotientRing:
        return _cached_quotient_ring(self.p, 1, self.m)

    def zeta(self, level: int, ring: QuotientRing) -> tuple:
        """zeta_{p^level} = x^(p^(m-level)) in the chosen quotient ring."""
        if level > self.m:
            raise ValueError("not enough roots of unity in the model")
        return ring.x_power(self.p ** (self.m - level))


@dataclass(frozen=True)
class TiltElement:
    """Depth-k compatible sequence (x_0, .., x_k) in O/p: x_{i+1}^p = x_i."""

    entries: tuple

    @property
    def depth(self) -> int:
        return len(self.entries) - 1


class TiltRing:
    """All depth-k compatible p-power sequences in O/p, componentwise ring.

    The deepest entry determines the sequence (x_i = x_k^{p^(k-i)}), so the
    carrier is in bijection with O/p.  The same-depth Frobenius is the
    componentwise p-th power (not injective here: the model is not
    perfect); the depth-raising Frobenius T_k -> T_{k+1} prepends x_0^p and
    is a bijection with inverse the left shift.
    """

    def __init__(self, model: CyclotomicModel):
        self.model = model
        self.omodp = model.ring_o_mod_p()
        if self.omodp.size > 2 ** 12:
            raise ValueError("tilt enumeration bound exceeded")
        self.p = model.p
        self.k = model.k
        self.zero = self._from_deepest(self.omodp.zero)
        self.one = self._from_deepest(self.omodp.one)

    def _from_deepest(self, z) -> tuple:
        entries = [self.omodp.power(z, self.p ** (self.k - i)) for i in range(self.k)] + [z]
        return tuple(entries)

    def enumerate(self):
        for z in self.omodp.enumerate():
            yield self._from_deepest(z)

    @property
    def size(self) -> int:
        return self.omodp.size

    def add(self, a, b):
        return tuple(self.omodp.add(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        return tuple(self.omodp.mul(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.omodp.neg(x) for x in a)

    def scale(self, c, a):
        return tuple(self.omodp.scale(c, x) for x in a)

    def power(self, a, k: int):
        return tuple(self.omodp.power(x, k) for x in a)

    def frobenius(self, a):
        """Same-depth componentwise p-th power (right shift with new head)."""
        return tuple(self.omodp.power(x, self.p) for x in a)

    def shift_down(self, a, times: int = 1):
        """Frobenius inverse at the cost of depth: drop the head entries."""
        if times > len(a) - 1:
            raise ValueError("not enough depth to shift down")
        return a[times:]

    def raise_frobenius_bijective(self) -> bool:
        """The depth-raising Frobenius T_{k-1}... -> T_k is a bijection."""
        lower = {t[1:] for t in self.enumerate()}  # depth k-1 truncations
        image = set()
        for t in lower:
            image.add((self.omodp.power(t[0], self.p),) + t)
        return image == set(self.enumerate())

    def validate(self, a) -> bool:
        return all(self.omodp.power(a[i + 1], self.p) == a[i] for i in range(len(a) - 1))

    def epsilon(self) -> tuple:
        """(1, zeta_p mod p, ..., zeta_{p^k} mod p)."""
        entries = [self.model.zeta(i, self.omodp) for i in range(self.k + 1)]
        assert self.validate(tuple(entries))
        return tuple(entries)


def tilt_ring(model: CyclotomicModel) -> TiltRing:
    return TiltRing(model)


def theta_map(w: WittVector, model: CyclotomicModel, lift=None) -> tuple:
    """theta(a_0..a_{n-1}) = sum p^i (lift of a_i[k])^{p^(k-i)} in O/p^n."""
    tilt: TiltRing = w.ring.base
    if model.k < model.n:
        raise ValueError("depth insufficient for theta")
    o = model.ring_o()
    p = model.p
    acc = o.zero
    deflift = lambda rbar: tuple(rbar) + (0,) * (o.deg - len(rbar))
    lf = lift or deflift
    for i in range(w.ring.length):
        deepest = w.coords[i][model.k]
        val = o.power(o.element(lf(deepest)), p ** (model.k - i))
        acc = o.add(acc, o.scale(p ** i, val))
    return acc


@dataclass
class KerThetaReport:
    model: CyclotomicModel
    sizes: dict
    theta_epsilon_is_one: bool
    theta_xi_zero: bool
    eps_minus_one_in_kernel: bool
    kernel_generated_by_xi: bool
    raise_frobenius_bijective: bool

    @property
    def ok(self) -> bool:
        return (self.theta_epsilon_is_one and self.theta_xi_zero
                and self.eps_minus_one_in_kernel and self.kernel_generated_by_xi)


def xi_cyclotomic(wr: WittRing, tilt: TiltRing) -> WittVector:
    """1 + [eps^{1/p}] + ... + [eps^{1/p}]^(p-1), a candidate generator of
    ker theta assembled from the compatible root-of-unity system; eps^{1/p}
    is the left shift of the one-level-deeper root sequence."""
    t = epsilon_root_witt(wr, tilt)
    acc = wr.zero
    powv = wr.one
    for _ in range(wr.p):
        acc = acc + powv
        powv = powv * t
    return acc


def _extended_epsilon(tilt: TiltRing) -> tuple:
    """(1, zeta_p, ..., zeta_{p^(k+1)}) mod p: one level deeper than the
    tilt depth, so that the shifted sequence still has full depth."""
    model = tilt.model
    if tilt.k + 1 > model.m:
        raise ValueError("model lacks roots of unity for eps^{1/p}")
    return tuple(model.zeta(i, tilt.omodp) for i in range(tilt.k + 2))


def epsilon_witt(wr: WittRing, tilt: TiltRing) -> WittVector:
    return wr.teichmuller(tilt.epsilon())


def epsilon_root_witt(wr: WittRing, tilt: TiltRing) -> WittVector:
    extended = _extended_epsilon(tilt)
    return wr.teichmuller(tuple(extended[1 : tilt.k + 2]))


def ker_theta_report(model: CyclotomicModel, check_hom_pairs: bool = False) -> KerThetaReport:
    """Enumerate W_n(tilt), check the theta identities on the canonical
    elements, and verify every kernel element is a multiple of xi."""
    tilt = tilt_ring(model)
    wr = WittRing(model.p, model.n, tilt)
    o = model.ring_o()
    eps = epsilon_witt(wr, tilt)
    xi = xi_cyclotomic(wr, tilt)
    theta_eps = theta_map(eps, model)
    theta_xi = theta_map(xi, model)
    one = o.one

    elements = list(wr.enumerate())
    thetas = {w.coords: theta_map(w, model) for w in elements}
    kernel = [w for w in elements if thetas[w.coords] == o.zero]
    multiples = {(w * xi).coords for w in elements}
    generated = all(w.coords in multiples for w in kernel)

    eps_minus_one = eps - wr.one
    in_kernel = theta_map(eps_minus_one, model) == o.zero

    hom_ok = True
    if check_hom_pairs:
        for a in elements:
            ta = thetas[a.coords]
            for b in elements:
                tb = thetas[b.coords]
                if thetas[(a + b).coords] != o.add(ta, tb):
                    hom_ok = False
                if thetas[(a * b).coords] != o.mul(ta, tb):
                    hom_ok = False
    report = KerThetaReport(
        model,
        {"tilt": tilt.size, "witt": len(elements), "kernel": len(kernel), "o_mod_p^n": o.size},
        theta_eps == one,
        theta_xi == o.zero,
        in_kernel,
        generated,
        tilt.raise_frobenius_bijective(),
    )
    if check_hom_pairs and not hom_ok:
        raise AssertionError("theta failed the ring homomorphism check")
    return report
