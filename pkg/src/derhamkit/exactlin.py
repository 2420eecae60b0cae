"""Exact linear algebra over Z, Z/p^n and F_p.

Everything downstream (chain complexes, homology, module invariants) reduces
to the kernels in this module: Smith normal form over Z with unimodular
certificates, Howell canonical forms over Z/p^n, left kernels, span
membership, p-adic valuations and resultants.

Conventions: module elements are *row* vectors; a homomorphism is a matrix
``M`` of shape (source dim, target dim) acting by ``v @ M``.  Matrices over
Z/p^n are numpy int64 arrays with entries reduced to [0, p^n); matrices over
Z are plain lists of Python ints (arbitrary precision).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "ModRing",
    "ZZ",
    "PAdicValue",
    "ModulePresentation",
    "is_prime",
    "smith_normal_form",
    "normal_form",
    "howell_form",
    "left_kernel",
    "span_contains",
    "solve_in_span",
    "express_in_basis",
    "quotient_invariants",
    "module_invariants",
    "padic_valuation",
    "resultant",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class ModRing:
    """The coefficient ring Z/p^n (F_p when n = 1)."""

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus base {self.p} is not prime")
        if self.n < 1:
            raise ValueError("exponent must be >= 1")

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    @property
    def is_field(self) -> bool:
        return self.n == 1

    def reduce(self, a: int) -> int:
        return a % self.modulus

    def unit_inverse(self, a: int) -> int:
        a %= self.modulus
        if a % self.p == 0:
            raise ZeroDivisionError(f"{a} is not a unit mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def val(self, a: int) -> int:
        """p-adic valuation of a residue, capped at n for zero."""
        a %= self.modulus
        if a == 0:
            return self.n
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def __str__(self):
        return f"F_{self.p}" if self.n == 1 else f"Z/{self.modulus}"


class _IntegerRing:
    """Sentinel for Z coefficients (Smith form path)."""

    def __str__(self):
        return "Z"

    def __repr__(self):
        return "ZZ"


ZZ = _IntegerRing()


@dataclass(frozen=True)
class PAdicValue:
    """Exact rational valuation with a +infinity marker.

    The denominator is expected to divide the declared ramification index of
    whatever extension produced the value; `with_index` asserts this.
    """

    prime: int
    value: Fraction | None  # None encodes +infinity

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def with_index(self, e: int) -> "PAdicValue":
        if self.value is not None and (self.value * e).denominator != 1:
            raise ValueError(f"valuation {self.value} has denominator not dividing e={e}")
        return self

    def __str__(self):
        return "+inf" if self.value is None else str(self.value)


@dataclass
class ModulePresentation:
    """Finitely presented module: cokernel of ``relations`` acting on rows.

    ``relations`` has ``generators`` columns; the module is
    R^generators / rowspan(relations) over ``ring``.
    """

    ring: ModRing
    generators: int
    relations: np.ndarray  # shape (k, generators), k >= 0

    def __post_init__(self):
        if self.generators == 0:
            self.relations = np.zeros((0, 0), dtype=np.int64)
            return
        self.relations = np.asarray(self.relations, dtype=np.int64).reshape(-1, self.generators)
        self.relations %= self.ring.modulus


# ---------------------------------------------------------------------------
# numpy helpers (Z/m arithmetic; m small enough for int64 products)


def mzeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)

def midentity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)

def mmul(a: np.ndarray, b: np.ndarray, ring: ModRing) -> np.ndarray:
    # int64 overflow guard: entries < m, inner dim k: need k*(m-1)^2 < 2^63
    m = ring.modulus
    if a.shape[1] * (m - 1) * (m - 1) >= 2 ** 62:
        prod = (a.astype(object) @ b.astype(object)) % m
        return np.asarray(prod, dtype=np.int64)
    return (a @ b) % m


# ---------------------------------------------------------------------------
# Smith normal form over Z


def _int_matrix(a) -> list[list[int]]:
    if isinstance(a, np.ndarray):
        return [[int(x) for x in row] for row in a]
    return [[int(x) for x in row] for row in a]


def smith_normal_form(matrix, want_vinv: bool = False):
    """Smith normal form over Z: returns (S, U, V) with U*A*V = S.

    S is diagonal with nonnegative entries d_1 | d_2 | ..., U and V are
    unimodular.  With ``want_vinv`` the inverse of V is tracked and returned
    as a fourth value.  Pure Python integers throughout, so
    cyclotomic-sized entries are exact.
    """
    a = _int_matrix(matrix)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    vinv = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)] if want_vinv else None

    def row_op(i, j, q):  # row_i -= q*row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q*col_j; inverse acts on vinv rows
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]
        if vinv is not None:
            vinv[j] = [x + q * y for x, y in zip(vinv[j], vinv[i])]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]
        if vinv is not None:
            vinv[i], vinv[j] = vinv[j], vinv[i]

    t = 0
    while t < min(rows, cols):
        # locate a nonzero pivot of least absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                row_op(i, t, q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                col_op(j, t, q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue  # remainders left; re-pivot on a smaller entry
        # pivot must divide the rest of the block for the divisibility chain
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # fold the offending row in and redo
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    if want_vinv:
        return a, u, v, vinv
    return a, u, v


def smith_diagonal(matrix) -> list[int]:
    s, _, _ = smith_normal_form(matrix)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


# ---------------------------------------------------------------------------
# Howell form over Z/p^n

def howell_form(matrix, ring: ModRing, transform: bool = False):
    """Howell canonical form of the row span of ``matrix`` over Z/p^n.

    Returns H (and T with T @ matrix = H when ``transform``).  H satisfies:
    echelon shape, each pivot is p^v (monic up to normalization), entries
    above a pivot are reduced mod the pivot, and the span property holds
    (every span element supported on columns >= c lies in the span of the
    rows with pivot column >= c).  Zero rows are dropped.
    """
    m = ring.modulus
    p = ring.p
    a = np.asarray(matrix, dtype=np.int64) % m
    if a.ndim == 1:
        a = a.reshape(1, -1)
    rows, cols = a.shape
    if transform:
        t = midentity(rows)
    else:
        t = None

    work = a.copy()
    # Stabilization rows p^(n-v) * r enter lazily during elimination.
    extra: list[np.ndarray] = []
    extra_t: list[np.ndarray] = []

    pivots: list[tuple[int, int]] = []  # (col, row index in out lists)
    out_rows: list[np.ndarray] = []
    out_t: list[np.ndarray] = []

    def val(x: int) -> int:
        return ring.val(int(x))

    active = list(range(rows))
    avail = [work[i].copy() for i in active]
    avail_t = [t[i].copy() for i in active] if transform else [None] * rows

    col = 0
    while col < cols:
        # choose among available rows one with minimal valuation at this col
        best = None
        bestv = ring.n + 1
        for idx, r in enumerate(avail):
            x = int(r[col])
            if x % m != 0:
                v = val(x)
                if v < bestv:
                    bestv = v
                    best = idx
        if best is None:
            col += 1
            continue
        piv = avail.pop(best)
        piv_t = avail_t.pop(best)
        # normalize pivot entry to p^v
        x = int(piv[col])
        unit = x // (p ** bestv)
        inv = ring.unit_inverse(unit)
        piv = (piv * inv) % m
        if transform:
            piv_t = (piv_t * inv) % m
        # eliminate this column from the remaining rows (their valuation >= bestv)
        pe = p ** bestv
        for idx in range(len(avail)):
            x = int(avail[idx][col])
            if x % m != 0:
                q = x // pe
                avail[idx] = (avail[idx] - q * piv) % m
                if transform:
                    avail_t[idx] = (avail_t[idx] - q * piv_t) % m
        # stabilization: if pivot is not a unit, p^(n-v)*row has support to the right
        if bestv > 0:
            srow = (piv * (p ** (ring.n - bestv))) % m
            if srow.any():
                avail.append(srow)
                if transform:
                    avail_t.append((piv_t * (p ** (ring.n - bestv))) % m)
                else:
                    avail_t.append(None)
        out_rows.append(piv)
        out_t.append(piv_t)
        pivots.append((col, len(out_rows) - 1))
        col += 1

    if not out_rows:
        h = mzeros(0, cols)
        return (h, mzeros(0, rows)) if transform else h

    h = np.vstack(out_rows) % m
    tt = np.vstack(out_t) % m if transform else None

    # Back-reduce entries above each pivot modulo the pivot value, in
    # increasing column order: a pivot row is zero left of its pivot, so
    # later steps never disturb already-reduced columns.  (Above-pivot
    # entries stay nonzero here, unlike the field case, so bottom-up
    # ordering would clobber earlier columns.)
    for col, ridx in pivots:
        pe = int(h[ridx][col])
        for i in range(ridx):
            x = int(h[i][col])
            q = x // pe
            if q:
                h[i] = (h[i] - q * h[ridx]) % m
                if transform:
                    tt[i] = (tt[i] - q * tt[ridx]) % m
    return (h, tt) if transform else h


def solve_in_span(vector: np.ndarray, rows: np.ndarray, ring: ModRing):
    """Coefficients c with c @ rows == vector, or None if not in the span.

    ``rows`` need not be canonical; a Howell pass with transform is used.
    """
    m = ring.modulus
    rows = np.asarray(rows, dtype=np.int64) % m
    v = np.asarray(vector, dtype=np.int64).reshape(-1) % m
    if rows.shape[0] == 0:
        return mzeros(1, 0)[0] if not v.any() else None
    h, t = howell_form(rows, ring, transform=True)
    coeff = mzeros(1, rows.shape[0])[0]
    rem = v.copy()
    p = ring.p
    for ridx in range(h.shape[0]):
        lead = int(np.nonzero(h[ridx])[0][0]) if h[ridx].any() else None
        if lead is None:
            continue
        x = int(rem[lead])
        if x == 0:
            continue
        pe = int(h[ridx][lead])  # p^v
        if x % pe != 0:
            return None
        q = x // pe
        rem = (rem - q * h[ridx]) % m
        coeff = (coeff + q * t[ridx]) % m
    if rem.any():
        return None
    return coeff


def span_contains(vector: np.ndarray, rows: np.ndarray, ring: ModRing) -> bool:
    return solve_in_span(vector, rows, ring) is not None


def left_kernel(matrix: np.ndarray, ring: ModRing) -> np.ndarray:
    """Howell basis of {v : v @ matrix == 0} over Z/p^n."""
    a = np.asarray(matrix, dtype=np.int64) % ring.modulus
    if a.ndim == 1:
        a = a.reshape(1, -1)
    rows, cols = a.shape
    if rows == 0:
        return mzeros(0, 0)
    aug = np.hstack([a, midentity(rows)])
    h = howell_form(aug, ring)
    ker = [r[cols:] for r in h if not r[:cols].any()]
    if not ker:
        return mzeros(0, rows)
    return howell_form(np.vstack(ker), ring)


def express_in_basis(vectors: np.ndarray, basis: np.ndarray, ring: ModRing) -> np.ndarray:
    """Coordinates of each row of ``vectors`` in the free row basis ``basis``."""
    vec = np.asarray(vectors, dtype=np.int64)
    if vec.ndim == 1:
        vec = vec.reshape(1, -1)
    outs = []
    for v in vec:
        c = solve_in_span(v, basis, ring)
        if c is None:
            raise ValueError("vector not in span of the given basis")
        outs.append(c)
    if not outs:
        return mzeros(0, basis.shape[0])
    return np.vstack(outs) % ring.modulus


def minimal_generators(rows: np.ndarray, ring: ModRing) -> np.ndarray:
    """Select a minimal generating family from ``rows`` for a free summand.

    Rows whose mod-p reductions are linearly independent generate by
    Nakayama; the caller is responsible for the span actually being free
    (true for normalized parts of simplicial modules).
    """
    m = ring.modulus
    rows = np.asarray(rows, dtype=np.int64) % m
    if rows.shape[0] == 0:
        return rows
    fp = ModRing(ring.p, 1)
    chosen: list[int] = []
    basis_fp: list[np.ndarray] = []
    for i in range(rows.shape[0]):
        red = rows[i] % ring.p
        if not red.any():
            continue
        if basis_fp and span_contains(red, np.vstack(basis_fp), fp):
            continue
        chosen.append(i)
        basis_fp.append(red)
    return rows[chosen]


# ---------------------------------------------------------------------------
# normal_form dispatcher and module invariants


def normal_form(matrix, ring=ZZ):
    """Canonical form plus transform certificates.

    Over Z: Smith normal form, returns (S, (U, V)) with U*M*V = S.
    Over Z/p^n: Howell form, returns (H, (T, T')) with T*M = H and T'*H = M
    row-span certificates.
    """
    if ring is ZZ:
        s, u, v = smith_normal_form(matrix)
        return s, (u, v)
    if not isinstance(ring, ModRing):
        raise ValueError("composite non-prime-power moduli are not supported")
    h, t = howell_form(matrix, ring, transform=True)
    a = np.asarray(matrix, dtype=np.int64) % ring.modulus
    if a.ndim == 1:
        a = a.reshape(1, -1)
    back = []
    for row in a:
        c = solve_in_span(row, h, ring) if h.shape[0] else (None if row.any() else mzeros(1, 0)[0])
        if c is None:
            raise AssertionError("Howell span lost a row (internal error)")
        back.append(c)
    tprime = np.vstack(back) % ring.modulus if back else mzeros(0, h.shape[0])
    return h, (t, tprime)


def local_smith(matrix: np.ndarray, ring: ModRing, want_transform: bool = False):
    """Diagonalization over the local ring Z/p^n by unit row/column ops.

    Every matrix over Z/p^n is equivalent to diag(p^{a_1}, p^{a_2}, ...)
    with ascending valuations (pick a minimal-valuation pivot, normalize by
    units, clear its row and column; all cleared entries are divisible by
    the pivot).  Returns (column factors, V, Vinv): factors[j] is the
    cokernel order of column j -- p^{a_j} for a pivot of valuation a_j,
    p^n for a pivot-free column -- and V tracks the column operations
    (x -> x V is the coordinate change; rows of Vinv are the new
    generators in old coordinates).  V/Vinv are None unless requested.
    """
    m = ring.modulus
    p = ring.p
    a = np.asarray(matrix, dtype=np.int64).copy() % m
    if a.ndim != 2:
        raise ValueError("local_smith expects a 2-d matrix")
    rows, cols = a.shape
    v_mat = np.eye(cols, dtype=np.int64) if want_transform else None
    vinv = np.eye(cols, dtype=np.int64) if want_transform else None
    pivot_vals: list[int] = []
    t = 0
    while t < min(rows, cols):
        sub = a[t:, t:]
        if not sub.any():
            break
        val = None
        for v in range(ring.n):
            mask = (sub % (p ** (v + 1))) != 0
            if mask.any():
                val = v
                i_off, j_off = np.argwhere(mask)[0]
                break
        if val is None:
            break
        i, j = t + int(i_off), t + int(j_off)
        if i != t:
            a[[t, i]] = a[[i, t]]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
            if want_transform:
                v_mat[:, [t, j]] = v_mat[:, [j, t]]
                vinv[[t, j]] = vinv[[j, t]]
        pe = p ** val
        unit_inv = ring.unit_inverse(int(a[t, t]) // pe)
        a[t] = (a[t] * unit_inv) % m
        # clear the column below (row ops; untracked side)
        col = a[t + 1 :, t]
        if col.any():
            q = col // pe
            a[t + 1 :] = (a[t + 1 :] - q[:, None] * a[t]) % m
        # clear the row to the right (column ops; tracked side)
        row = a[t, t + 1 :]
        if row.any():
            q = row // pe
            a[:, t + 1 :] = (a[:, t + 1 :] - a[:, [t]] * q[None, :]) % m
            if want_transform:
                v_mat[:, t + 1 :] = (v_mat[:, t + 1 :] - v_mat[:, [t]] * q[None, :]) % m
                vinv[t] = (vinv[t] + q @ vinv[t + 1 :]) % m
        pivot_vals.append(val)
        t += 1
    factors = [p ** v for v in pivot_vals] + [m] * (cols - len(pivot_vals))
    return factors, v_mat, vinv


def invariant_factors_from_relations(relations: np.ndarray, generators: int, ring: ModRing) -> list[int]:
    """Invariant factors of R^generators / rowspan(relations) over R = Z/p^n:
    the module is the direct sum of Z/d_j with d_j | p^n, listed with
    d_j > 1 ascending."""
    if generators == 0:
        return []
    m = ring.modulus
    rel = np.asarray(relations, dtype=np.int64).reshape(-1, generators) % m
    factors, _, _ = local_smith(rel if rel.size else mzeros(0, generators), ring)
    return sorted(int(d) for d in factors if d != 1)


def module_invariants(pres: ModulePresentation) -> tuple[list[int], int]:
    """Invariant factors and total length of a finitely presented module."""
    facs = invariant_factors_from_relations(pres.relations, pres.generators, pres.ring)
    length = sum(v_int(d, pres.ring.p) for d in facs)
    return facs, length


def v_int(a: int, p: int) -> int:
    if a == 0:
        raise ValueError("valuation of 0")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def quotient_invariants(cycles: np.ndarray, boundaries: np.ndarray, ring: ModRing) -> list[int]:
    """Invariant factors of span(cycles)/span(boundaries), boundaries inside cycles."""
    hk = howell_form(cycles, ring)
    if hk.shape[0] == 0:
        if np.asarray(boundaries).size and np.asarray(boundaries % ring.modulus).any():
            raise ValueError("boundaries not contained in cycles")
        return []
    b = np.asarray(boundaries, dtype=np.int64).reshape(-1, hk.shape[1]) % ring.modulus
    # relation coefficients: {c : c @ hk in span(b)}
    stacked = np.vstack([hk, b]) if b.shape[0] else hk
    ker = left_kernel(stacked, ring)
    rel = ker[:, : hk.shape[0]] if ker.shape[0] else mzeros(0, hk.shape[0])
    return invariant_factors_from_relations(rel, hk.shape[0], ring)


# ---------------------------------------------------------------------------
# valuations and resultants


def padic_valuation(q, p: int) -> PAdicValue:
    """Exact v_p of a rational (Fraction or int); v_p(0) = +infinity."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q = Fraction(q)
    if q == 0:
        return PAdicValue(p, None)
    num, den = q.numerator, q.denominator
    return PAdicValue(p, Fraction(v_int(abs(num), p) - v_int(den, p)))


def _bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) of integer polynomials via the Sylvester determinant.

    Polynomials are coefficient lists, constant term first.  Exact for any
    size thanks to big-int arithmetic.
    """
    f = _trim(list(f))
    g = _trim(list(g))
    if not f or not g:
        raise ValueError("resultant of the zero polynomial")
    dm, dn = len(f) - 1, len(g) - 1
    if dm == 0:
        return f[0] ** dn
    if dn == 0:
        return g[0] ** dm
    size = dm + dn
    syl = [[0] * size for _ in range(size)]
    frev = f[::-1]  # leading first
    grev = g[::-1]
    for i in range(dn):
        for j, c in enumerate(frev):
            syl[i][i + j] = c
    for i in range(dm):
        for j, c in enumerate(grev):
            syl[dn + i][i + j] = c
    return _bareiss_det(syl)


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs
