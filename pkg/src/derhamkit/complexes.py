"""Weight-sliced chain complexes, total complexes and homology.

A :class:`GradedSliceComplex` stores, per homological degree, a weight-graded
free module over Z/p^n together with one differential matrix per weight
slice.  Degrees outside the stored window are structurally zero; a separate
trust window marks where homology is honest (truncated resolutions trust one
degree less than they store).

Homological (lower) indexing throughout; cohomological objects are stored
negated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .exactlin import (
    ModRing,
    howell_form,
    invariant_factors_from_relations,
    left_kernel,
    local_smith,
    mzeros,
    mmul,
    solve_in_span,
    span_contains,
    v_int,
)

__all__ = [
    "GradedSliceComplex",
    "DoubleComplex",
    "HomologyReport",
    "SliceQuotient",
    "slice_homology",
    "homology_report",
    "total_complex",
    "compare_homology",
]


class WindowError(ValueError):
    pass


@dataclass
class GradedSliceComplex:
    ring: ModRing
    n_min: int
    n_max: int
    dims: dict  # (degree, weight) -> int
    diffs: dict  # (degree, weight) -> matrix C_{n,w} -> C_{n-1,w}
    labels: dict = field(default_factory=dict)  # optional (degree, weight) -> list
    trusted: tuple[int, int] | None = None  # degrees with honest homology

    def __post_init__(self):
        if self.trusted is None:
            self.trusted = (self.n_min, self.n_max)
        self.dims = {k: v for k, v in self.dims.items() if v}
        clean = {}
        m = self.ring.modulus
        for k, mtx in self.diffs.items():
            a = np.asarray(mtx, dtype=np.int64) % m
            if a.size and a.any():
                clean[k] = a
        self.diffs = clean

    def dim(self, n: int, w: int) -> int:
        return self.dims.get((n, w), 0)

    def weights(self) -> list[int]:
        return sorted({w for (_, w) in self.dims})

    def degrees(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def diff(self, n: int, w: int) -> np.ndarray:
        d = self.diffs.get((n, w))
        if d is not None:
            return d
        return mzeros(self.dim(n, w), self.dim(n - 1, w))

    def validate(self) -> None:
        """Assert d o d == 0 on every slice."""
        for (n, w) in list(self.dims):
            d1 = self.diff(n, w)
            d0 = self.diff(n - 1, w)
            if d1.size and d0.size:
                if mmul(d1, d0, self.ring).any():
                    raise ValueError(f"d^2 != 0 at degree {n}, weight {w}")

    def in_trust_window(self, n: int) -> bool:
        return self.trusted[0] <= n <= self.trusted[1]

    def shift(self, k: int) -> "GradedSliceComplex":
        """Homological shift C[k]: degree n of the result is degree n-k of C."""
        return GradedSliceComplex(
            self.ring,
            self.n_min + k,
            self.n_max + k,
            {(n + k, w): d for (n, w), d in self.dims.items()},
            {(n + k, w): m for (n, w), m in self.diffs.items()},
            {(n + k, w): l for (n, w), l in self.labels.items()},
            trusted=(self.trusted[0] + k, self.trusted[1] + k),
        )


@dataclass
class SliceQuotient:
    """cycles/boundaries with invariant factors and explicit representatives.

    ``factors[j]`` > 1 is the order of the j-th cyclic generator whose
    ambient row vector is ``gen_reps[j]``; ``coords`` projects any cycle to
    its coordinate tuple (each entry taken modulo its factor).
    """

    ring: ModRing
    ambient_dim: int
    cycles: np.ndarray  # Howell basis rows
    factors: list[int]
    gen_reps: np.ndarray
    _vmat: np.ndarray  # coordinate-change matrix mod p^n (u x u)
    _all_factors: list[int]  # length u, including trivial 1s

    @staticmethod
    def from_cycles_boundaries(cycles, boundaries, ring: ModRing) -> "SliceQuotient":
        m = ring.modulus
        hk = howell_form(cycles, ring)
        u = hk.shape[0]
        amb = hk.shape[1] if u else (np.asarray(cycles).shape[1] if np.asarray(cycles).size else 0)
        b = np.asarray(boundaries, dtype=np.int64).reshape(-1, amb) % m if amb else mzeros(0, 0)
        if u == 0:
            if b.size and b.any():
                raise ValueError("boundaries not contained in cycles")
            return SliceQuotient(ring, amb, mzeros(0, amb), [], mzeros(0, amb), mzeros(0, 0), [])
        stacked = np.vstack([hk, b]) if b.shape[0] else hk
        ker = left_kernel(stacked, ring)
        rel = ker[:, :u] if ker.shape[0] else mzeros(0, u)
        all_factors, vmod, vinv = local_smith(rel if rel.size else mzeros(0, u), ring,
                                              want_transform=True)
        keep = [j for j, d in enumerate(all_factors) if d > 1]
        gen_reps = (vinv[keep] @ hk) % m if keep else mzeros(0, amb)
        return SliceQuotient(ring, amb, hk, [all_factors[j] for j in keep], gen_reps, vmod, all_factors)

    @property
    def size(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    def length(self) -> int:
        return sum(v_int(d, self.ring.p) for d in self.factors)

    def coords(self, vector: np.ndarray) -> tuple[int, ...] | None:
        """Coordinates of a cycle's class, or None if not a stored cycle."""
        if self.ambient_dim == 0 or self.cycles.shape[0] == 0:
            v = np.asarray(vector)
            return () if (not v.size or not (v % self.ring.modulus).any()) else None
        c = solve_in_span(np.asarray(vector) % self.ring.modulus, self.cycles, self.ring)
        if c is None:
            return None
        y = (c @ self._vmat) % self.ring.modulus
        keep = [j for j, d in enumerate(self._all_factors) if d > 1]
        return tuple(int(y[j]) % self._all_factors[j] for j in keep)

    def is_zero_class(self, vector: np.ndarray) -> bool:
        c = self.coords(vector)
        if c is None:
            raise ValueError("vector is not a cycle of this slice")
        return all(x == 0 for x in c)


def slice_homology(cx: GradedSliceComplex, degree: int, weight: int) -> list[int]:
    """Invariant factors of H_degree at one weight slice."""
    if not cx.in_trust_window(degree):
        raise WindowError(f"degree {degree} outside trust window {cx.trusted}")
    return homology_quotient(cx, degree, weight).factors


def homology_quotient(cx: GradedSliceComplex, degree: int, weight: int) -> SliceQuotient:
    d_here = cx.diff(degree, weight)
    dim_here = cx.dim(degree, weight)
    if dim_here == 0:
        return SliceQuotient.from_cycles_boundaries(mzeros(0, 0), mzeros(0, 0), cx.ring)
    if d_here.shape[1] == 0:
        cycles = np.eye(dim_here, dtype=np.int64)
    else:
        cycles = left_kernel(d_here, cx.ring)
    boundaries = cx.diff(degree + 1, weight)
    return SliceQuotient.from_cycles_boundaries(
        cycles if cycles.shape[0] else mzeros(0, dim_here), boundaries, cx.ring
    )


@dataclass
class HomologyReport:
    ring: str
    entries: dict  # (degree, weight) -> {"factors": list[int], "length": int}
    trusted: tuple[int, int]

    def factors(self, degree: int, weight: int) -> list[int]:
        e = self.entries.get((degree, weight))
        return list(e["factors"]) if e else []

    def total_length(self, degree: int) -> int:
        return sum(e["length"] for (n, _), e in self.entries.items() if n == degree)

    def to_json(self) -> str:
        items = [
            {"degree": n, "weight": w, "factors": e["factors"], "length": e["length"]}
            for (n, w), e in sorted(self.entries.items())
        ]
        return json.dumps(
            {"ring": self.ring, "trusted": list(self.trusted), "homology": items}, sort_keys=True
        )


def homology_report(cx: GradedSliceComplex, degrees: Iterable[int] | None = None,
                    weights: Iterable[int] | None = None) -> HomologyReport:
    degs = list(degrees) if degrees is not None else [n for n in cx.degrees() if cx.in_trust_window(n)]
    ws = list(weights) if weights is not None else cx.weights()
    entries = {}
    for n in degs:
        for w in ws:
            fac = slice_homology(cx, n, w)
            if fac:
                entries[(n, w)] = {"factors": fac, "length": sum(v_int(d, cx.ring.p) for d in fac)}
    return HomologyReport(str(cx.ring), entries, tuple(cx.trusted))


# ---------------------------------------------------------------------------
# double and total complexes


@dataclass
class DoubleComplex:
    """First-quadrant-style double complex with commuting differentials.

    ``horiz[(p, q, w)]`` maps (p, q) -> (p-1, q); ``vert[(p, q, w)]`` maps
    (p, q) -> (p, q-1).  The rows/columns must each square to zero and the
    two directions must commute; the total complex then twists the vertical
    differential by (-1)^p.
    """

    ring: ModRing
    terms: dict  # (p, q, weight) -> dim
    horiz: dict
    vert: dict

    def dim(self, p, q, w):
        return self.terms.get((p, q, w), 0)

    def h(self, p, q, w):
        d = self.horiz.get((p, q, w))
        return np.asarray(d, dtype=np.int64) % self.ring.modulus if d is not None else mzeros(
            self.dim(p, q, w), self.dim(p - 1, q, w)
        )

    def v(self, p, q, w):
        d = self.vert.get((p, q, w))
        return np.asarray(d, dtype=np.int64) % self.ring.modulus if d is not None else mzeros(
            self.dim(p, q, w), self.dim(p, q - 1, w)
        )

    def validate(self):
        for (p, q, w) in self.terms:
            if mmul(self.h(p, q, w), self.h(p - 1, q, w), self.ring).any():
                raise ValueError(f"horizontal d^2 != 0 at {(p, q, w)}")
            if mmul(self.v(p, q, w), self.v(p, q - 1, w), self.ring).any():
                raise ValueError(f"vertical d^2 != 0 at {(p, q, w)}")
            hv = mmul(self.h(p, q, w), self.v(p - 1, q, w), self.ring)
            vh = mmul(self.v(p, q, w), self.h(p, q - 1, w), self.ring)
            if (hv % self.ring.modulus != vh % self.ring.modulus).any():
                raise ValueError(f"horizontal and vertical differentials do not commute at {(p, q, w)}")


def total_complex(dc: DoubleComplex) -> GradedSliceComplex:
    """Direct-sum total complex with the (-1)^p vertical sign twist."""
    dc.validate()
    ring = dc.ring
    if not dc.terms:
        return GradedSliceComplex(ring, 0, 0, {}, {})
    degrees = sorted({p + q for (p, q, _) in dc.terms})
    weights = sorted({w for (_, _, w) in dc.terms})
    n_min, n_max = degrees[0], degrees[-1]

    def blocks(n, w):
        return [(p, n - p) for p in sorted({pp for (pp, qq, ww) in dc.terms if pp + qq == n and ww == w})]

    dims = {}
    offsets = {}
    for w in weights:
        for n in range(n_min, n_max + 1):
            off = {}
            total = 0
            for (p, q) in blocks(n, w):
                off[(p, q)] = total
                total += dc.dim(p, q, w)
            if total:
                dims[(n, w)] = total
                offsets[(n, w)] = off

    diffs = {}
    for (n, w), total in dims.items():
        lower = dims.get((n - 1, w), 0)
        if lower == 0:
            continue
        d = mzeros(total, lower)
        off_hi = offsets[(n, w)]
        off_lo = offsets[(n - 1, w)]
        for (p, q), o in off_hi.items():
            dh = dc.h(p, q, w)
            if dh.size and (p - 1, q) in off_lo:
                o2 = off_lo[(p - 1, q)]
                d[o : o + dh.shape[0], o2 : o2 + dh.shape[1]] += dh
            dv = dc.v(p, q, w)
            if dv.size and (p, q - 1) in off_lo:
                o2 = off_lo[(p, q - 1)]
                sign = -1 if p % 2 else 1
                d[o : o + dv.shape[0], o2 : o2 + dv.shape[1]] += sign * dv
        diffs[(n, w)] = d % ring.modulus

    tot = GradedSliceComplex(ring, n_min, n_max, dims, diffs)
    try:
        tot.validate()
    except ValueError as exc:
        raise ValueError(f"sign-rule violation in double complex input: {exc}") from exc
    return tot


# ---------------------------------------------------------------------------
# comparison reports


@dataclass
class CompareReport:
    verdicts: dict  # (degree, weight) -> (factors_left, factors_right, equal)
    equal: bool

    def to_json(self) -> str:
        items = [
            {"degree": n, "weight": w, "left": l, "right": r, "equal": e}
            for (n, w), (l, r, e) in sorted(self.verdicts.items())
        ]
        return json.dumps({"equal": self.equal, "slices": items}, sort_keys=True)


def compare_homology(cx1: GradedSliceComplex, cx2: GradedSliceComplex,
                     degrees: Iterable[int], weights: Iterable[int] | None = None) -> CompareReport:
    if cx1.ring != cx2.ring:
        raise ValueError("complexes over different coefficient rings")
    if weights is None:
        weights = sorted(set(cx1.weights()) | set(cx2.weights()))
    verdicts = {}
    ok = True
    for n in degrees:
        for w in weights:
            f1 = slice_homology(cx1, n, w)
            f2 = slice_homology(cx2, n, w)
            eq = f1 == f2
            ok = ok and eq
            if f1 or f2:
                verdicts[(n, w)] = (f1, f2, eq)
    return CompareReport(verdicts, ok)


def length_audit(cx: GradedSliceComplex, weight: int) -> bool:
    """Rank-nullity bookkeeping per weight slice for free Z/p^n terms:
    sum of term lengths = sum of homology lengths + 2 * sum of image lengths."""
    ring = cx.ring
    n_lengths = 0
    h_lengths = 0
    im_lengths = 0
    for n in cx.degrees():
        n_lengths += cx.dim(n, weight) * ring.n
        if cx.in_trust_window(n):
            q = homology_quotient(cx, n, weight)
            h_lengths += q.length()
    for n in cx.degrees():
        d = cx.diff(n, weight)
        if d.size:
            im = howell_form(d, ring)
            for row in im:
                lead = row[np.nonzero(row)[0][0]] if row.any() else 0
                if lead:
                    im_lengths += ring.n - v_int(int(lead), ring.p)
    # only meaningful when the trust window covers the whole support
    return n_lengths == h_lengths + 2 * im_lengths
