"""Simplex-category combinatorics and the simplicial-module kernel.

Simplicial modules are stored with explicit face/degeneracy matrices per
degree and weight slice; the action of an arbitrary monotone map is derived
from its epi-mono factorization into generators.  The normalized complex
takes kernels of the first n faces with differential (-1)^n d_n; the Kan
transform sums chain terms over monotone surjections, acting by the
identity when the injective factor is trivial and by (-1)^p d when it is
the last face.  With these conventions the roundtrip normalized(kan(C)) is
the identity on the nose, degreewise and on differentials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .complexes import GradedSliceComplex
from .exactlin import (
    ModRing,
    express_in_basis,
    left_kernel,
    midentity,
    minimal_generators,
    mmul,
    mzeros,
    span_contains,
)

__all__ = [
    "MonotoneMap",
    "epi_mono_factorize",
    "monotone_surjections",
    "SimplicialModule",
    "BisimplicialModule",
    "normalized_complex",
    "unnormalized_complex",
    "kan_transform",
    "diagonal",
    "double_kan",
    "shuffle_product",
    "shuffles",
    "complexes_equal",
]


@dataclass(frozen=True)
class MonotoneMap:
    """Nondecreasing map [m] -> [n]; ``values`` has length m+1."""

    source: int
    target: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.source + 1:
            raise ValueError("value list length must be source+1")
        if any(v < 0 or v > self.target for v in self.values):
            raise ValueError("values out of range")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be nondecreasing")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """self o other (apply ``other`` first)."""
        if other.target != self.source:
            raise ValueError("maps not composable")
        return MonotoneMap(other.source, self.target, tuple(self.values[v] for v in other.values))

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and self.values == tuple(range(self.source + 1))

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target + 1))

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == self.source + 1

    @staticmethod
    def identity(n: int) -> "MonotoneMap":
        return MonotoneMap(n, n, tuple(range(n + 1)))

    @staticmethod
    def face(n: int, i: int) -> "MonotoneMap":
        """The injection [n-1] -> [n] whose image avoids i."""
        if not 0 <= i <= n:
            raise ValueError("face index out of range")
        return MonotoneMap(n - 1, n, tuple(v for v in range(n + 1) if v != i))

    @staticmethod
    def degeneracy(n: int, i: int) -> "MonotoneMap":
        """The surjection [n+1] -> [n] hitting i twice."""
        if not 0 <= i <= n:
            raise ValueError("degeneracy index out of range")
        return MonotoneMap(n + 1, n, tuple(v if v <= i else v - 1 for v in range(n + 2)))


def epi_mono_factorize(alpha: MonotoneMap) -> tuple[MonotoneMap, MonotoneMap]:
    """Unique factorization alpha = mono o epi."""
    image = sorted(set(alpha.values))
    mono = MonotoneMap(len(image) - 1, alpha.target, tuple(image))
    lookup = {v: k for k, v in enumerate(image)}
    epi = MonotoneMap(alpha.source, len(image) - 1, tuple(lookup[v] for v in alpha.values))
    return epi, mono


def generator_decomposition(alpha: MonotoneMap) -> list[tuple[str, int, int]]:
    """alpha as a composition of face/degeneracy generators.

    Returns [(kind, level, index), ...] in outermost-first order, so a
    contravariant functor applies the corresponding operators in list
    order.  ``level`` is the target simplicial degree of the generator's
    operator: for a face entry ("face", n, i) the operator is
    d_i: X_n -> X_{n-1}; for ("degen", n, i) it is s_i: X_n -> X_{n+1}.
    """
    epi, mono = epi_mono_factorize(alpha)
    gens: list[tuple[str, int, int]] = []
    # mono = face(b_1) o face(b_2) o ... with b_1 > b_2 > ... the missed values
    missed = sorted(set(range(alpha.target + 1)) - set(mono.values), reverse=True)
    level = alpha.target
    for b in missed:
        gens.append(("face", level, b))
        level -= 1
    # epi = degen(a_1) o degen(a_2) o ... with a_1 < a_2 < ... the doubled spots
    doubles = [i for i in range(epi.source) if epi.values[i] == epi.values[i + 1]]
    for a in doubles:
        gens.append(("degen", level, a))
        level += 1
    # verify by recomposition (innermost generator applied first)
    out = MonotoneMap.identity(alpha.source)
    for kind, n, i in reversed(gens):
        g = MonotoneMap.face(n, i) if kind == "face" else MonotoneMap.degeneracy(n, i)
        out = g.compose(out)
    if out.values != alpha.values or out.target != alpha.target:
        raise AssertionError(f"generator decomposition failed for {alpha}")
    return gens


@lru_cache(maxsize=None)
def monotone_surjections(n: int, p: int) -> tuple[MonotoneMap, ...]:
    """All monotone surjections [n] ->> [p], deterministic order."""
    if p > n or p < 0:
        return ()
    out = []
    for steps in itertools.combinations(range(1, n + 1), p):
        vals = [0]
        for i in range(1, n + 1):
            vals.append(vals[-1] + (1 if i in steps else 0))
        out.append(MonotoneMap(n, p, tuple(vals)))
    return tuple(out)


@dataclass
class SimplicialModule:
    """Degreewise weight-graded free modules with face/degeneracy matrices."""

    ring: ModRing
    d_max: int
    dims: dict  # (n, w) -> int
    faces: dict  # (n, i, w) -> matrix X_{n,w} -> X_{n-1,w}
    degens: dict  # (n, i, w) -> matrix X_{n,w} -> X_{n+1,w}
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self.dims = {k: v for k, v in self.dims.items() if v}

    def dim(self, n: int, w: int) -> int:
        return self.dims.get((n, w), 0)

    def weights(self) -> list[int]:
        return sorted({w for (_, w) in self.dims})

    def face(self, n: int, i: int, w: int) -> np.ndarray:
        d = self.faces.get((n, i, w))
        if d is not None:
            return np.asarray(d, dtype=np.int64) % self.ring.modulus
        return mzeros(self.dim(n, w), self.dim(n - 1, w))

    def degen(self, n: int, i: int, w: int) -> np.ndarray:
        d = self.degens.get((n, i, w))
        if d is not None:
            return np.asarray(d, dtype=np.int64) % self.ring.modulus
        return mzeros(self.dim(n, w), self.dim(n + 1, w))

    def validate(self) -> None:
        """Assert all five simplicial identity families on every slice."""
        r = self.ring
        for w in self.weights():
            for n in range(self.d_max + 1):
                # faces of faces
                for j in range(n + 1):
                    for i in range(j):
                        if n >= 2:
                            lhs = mmul(self.face(n, j, w), self.face(n - 1, i, w), r)
                            rhs = mmul(self.face(n, i, w), self.face(n - 1, j - 1, w), r)
                            if (lhs != rhs).any():
                                raise ValueError(f"face identity fails at n={n}, i={i}, j={j}, w={w}")
                if n + 2 <= self.d_max:
                    for j in range(n + 1):
                        for i in range(j + 1):
                            lhs = mmul(self.degen(n, j, w), self.degen(n + 1, i, w), r)
                            rhs = mmul(self.degen(n, i, w), self.degen(n + 1, j + 1, w), r)
                            if (lhs != rhs).any():
                                raise ValueError(f"degeneracy identity fails at n={n}, i={i}, j={j}, w={w}")
                if n + 1 <= self.d_max:
                    for j in range(n + 1):
                        for i in range(n + 2):
                            lhs = mmul(self.degen(n, j, w), self.face(n + 1, i, w), r)
                            if i == j or i == j + 1:
                                rhs = midentity(self.dim(n, w))
                            elif i < j:
                                rhs = mmul(self.face(n, i, w), self.degen(n - 1, j - 1, w), r)
                            else:
                                rhs = mmul(self.face(n, i - 1, w), self.degen(n - 1, j, w), r)
                            if (lhs != rhs).any():
                                raise ValueError(f"mixed identity fails at n={n}, i={i}, j={j}, w={w}")

    def action(self, alpha: MonotoneMap, w: int) -> np.ndarray:
        """Matrix of X(alpha): X_{alpha.target} -> X_{alpha.source}."""
        if alpha.target > self.d_max or alpha.source > self.d_max:
            raise ValueError("monotone map outside the degree window")
        mat = midentity(self.dim(alpha.target, w))
        for kind, n, i in generator_decomposition(alpha):
            step = self.face(n, i, w) if kind == "face" else self.degen(n, i, w)
            mat = mmul(mat, step, self.ring)
        return mat

    def augmentation_rows(self, eps0: np.ndarray, w: int) -> list[np.ndarray]:
        """Extend eps_0 to all degrees; checks eps0 d_0 = eps0 d_1 and
        independence of the choice of [0] -> [n]."""
        if self.d_max >= 1:
            a = mmul(self.face(1, 0, w), eps0, self.ring)
            b = mmul(self.face(1, 1, w), eps0, self.ring)
            if (a != b).any():
                raise ValueError("eps0 does not satisfy the augmentation criterion")
        out = []
        for n in range(self.d_max + 1):
            choices = []
            for k in range(n + 1):
                alpha = MonotoneMap(0, n, (k,))
                choices.append(mmul(self.action(alpha, w), eps0, self.ring))
            for c in choices[1:]:
                if (c != choices[0]).any():
                    raise ValueError(f"augmentation depends on the [0]->[{n}] choice")
            out.append(choices[0])
        return out


def unnormalized_complex(x: SimplicialModule) -> GradedSliceComplex:
    """Associated chain complex with d_n = sum (-1)^i d_i."""
    diffs = {}
    for (n, w), dim in x.dims.items():
        if n == 0:
            continue
        d = mzeros(dim, x.dim(n - 1, w))
        for i in range(n + 1):
            sign = -1 if i % 2 else 1
            d = d + sign * x.face(n, i, w)
        diffs[(n, w)] = d % x.ring.modulus
    cx = GradedSliceComplex(x.ring, 0, x.d_max, dict(x.dims), diffs,
                            trusted=(0, max(x.d_max - 1, 0)))
    cx.validate()
    return cx


@dataclass
class NormalizedData:
    """Normalized complex plus the inclusion data into the ambient module."""

    complex: GradedSliceComplex
    basis: dict  # (n, w) -> rows of N X_{n,w} inside X_{n,w}


def normalized_complex(x: SimplicialModule, with_basis: bool = False):
    """N X_n = intersection of ker d_i (i < n), differential (-1)^n d_n."""
    ring = x.ring
    dims = {}
    diffs = {}
    basis: dict = {}
    for w in x.weights():
        prev_rows = None
        for n in range(x.d_max + 1):
            dim = x.dim(n, w)
            if dim == 0:
                basis[(n, w)] = mzeros(0, 0)
                prev_rows = mzeros(0, 0)
                continue
            if n == 0:
                rows = midentity(dim)
            else:
                stacked = np.hstack([x.face(n, i, w) for i in range(n)])
                ker = left_kernel(stacked, ring)
                rows = minimal_generators(ker, ring)
                for kr in ker:
                    if not span_contains(kr, rows, ring) and kr.any():
                        raise AssertionError("normalized slice is not free (invalid simplicial input)")
            basis[(n, w)] = rows
            if rows.shape[0]:
                dims[(n, w)] = rows.shape[0]
            if n >= 1 and rows.shape[0]:
                img = mmul(rows, x.face(n, n, w), ring)
                if n % 2:
                    img = (-img) % ring.modulus
                prev = basis[(n - 1, w)]
                if prev.shape[0]:
                    diffs[(n, w)] = express_in_basis(img, prev, ring)
                elif img.any():
                    raise AssertionError("normalized differential escapes the lower term")
            prev_rows = rows
    cx = GradedSliceComplex(ring, 0, x.d_max, dims, diffs, trusted=(0, max(x.d_max - 1, 0)))
    cx.validate()
    if with_basis:
        return NormalizedData(cx, basis)
    return cx


# ---------------------------------------------------------------------------
# Kan transform


def _kan_blocks(n: int, dims_of_p) -> list[tuple[MonotoneMap, int, int]]:
    """Summand layout of K(C)_n: (surjection, p, offset); identity first."""
    out = []
    offset = 0
    for p in range(n, -1, -1):
        d = dims_of_p(p)
        if d == 0:
            continue
        for eta in monotone_surjections(n, p):
            out.append((eta, p, offset))
            offset += d
    return out


def kan_transform(c: GradedSliceComplex, d_max: int | None = None) -> SimplicialModule:
    """Quasi-inverse to the normalized complex.

    K(C)_n sums C_p over monotone surjections [n] ->> [p].  For a monotone
    alpha and summand label eta, write eta o alpha = mono o eta'; the block
    is the identity into summand eta' when mono is the identity, and
    (-1)^p d: C_p -> C_{p-1} into summand eta' when mono is the last face
    [p-1] -> [p]; otherwise zero.
    """
    if c.n_min < 0:
        raise ValueError("Kan transform needs a complex concentrated in degrees >= 0")
    if d_max is None:
        d_max = c.n_max
    ring = c.ring
    dims = {}
    faces = {}
    degens = {}
    labels = {}
    last_face_cache = {p: MonotoneMap.face(p, p) for p in range(1, d_max + 1)}

    for w in c.weights():
        def cdim(p):
            return c.dim(p, w)

        layout = {n: _kan_blocks(n, cdim) for n in range(d_max + 1)}
        sizes = {n: sum(cdim(p) for (_, p, _) in layout[n]) for n in range(d_max + 1)}
        index = {n: {eta.values: (p, off) for (eta, p, off) in layout[n]} for n in range(d_max + 1)}
        for n in range(d_max + 1):
            if sizes[n]:
                dims[(n, w)] = sizes[n]
                labels[(n, w)] = [(eta.values, p) for (eta, p, _) in layout[n] for _ in range(cdim(p))]

        def block_action(n: int, alpha: MonotoneMap) -> np.ndarray:
            m_target = alpha.source
            out = mzeros(sizes[n], sizes.get(m_target, 0))
            for (eta, p, off) in layout[n]:
                comp = eta.compose(alpha)
                eta2, mono = epi_mono_factorize(comp)
                if mono.is_identity:
                    tgt = index[m_target].get(eta2.values)
                    if tgt and tgt[0] == p:
                        off2 = tgt[1]
                        out[off : off + cdim(p), off2 : off2 + cdim(p)] += midentity(cdim(p))
                elif p >= 1 and mono.values == last_face_cache[p].values and mono.source == p - 1:
                    tgt = index[m_target].get(eta2.values)
                    if tgt and tgt[0] == p - 1:
                        off2 = tgt[1]
                        sign = -1 if p % 2 else 1
                        out[off : off + cdim(p), off2 : off2 + cdim(p - 1)] += sign * c.diff(p, w)
            return out % ring.modulus

        for n in range(1, d_max + 1):
            for i in range(n + 1):
                faces[(n, i, w)] = block_action(n, MonotoneMap.face(n, i))
        for n in range(d_max):
            for i in range(n + 1):
                degens[(n, i, w)] = block_action(n, MonotoneMap.degeneracy(n, i))

    return SimplicialModule(ring, d_max, dims, faces, degens, labels)


def complexes_equal(c1: GradedSliceComplex, c2: GradedSliceComplex) -> bool:
    """Literal equality: same slice dimensions and identical matrices."""
    if c1.ring != c2.ring or c1.dims != c2.dims:
        return False
    keys = set(c1.diffs) | set(c2.diffs)
    for k in keys:
        if (c1.diff(*k) != c2.diff(*k)).any():
            return False
    return True


# ---------------------------------------------------------------------------
# bisimplicial modules


@dataclass
class BisimplicialModule:
    ring: ModRing
    p_max: int
    q_max: int
    dims: dict  # (p, q, w) -> int
    hfaces: dict  # (p, q, i, w) -> X_{p,q} -> X_{p-1,q}
    vfaces: dict  # (p, q, i, w) -> X_{p,q} -> X_{p,q-1}
    hdegens: dict = field(default_factory=dict)
    vdegens: dict = field(default_factory=dict)

    def dim(self, p, q, w):
        return self.dims.get((p, q, w), 0)

    def weights(self):
        return sorted({w for (_, _, w) in self.dims})

    def _get(self, table, p, q, i, w, rows, cols):
        d = table.get((p, q, i, w))
        if d is not None:
            return np.asarray(d, dtype=np.int64) % self.ring.modulus
        return mzeros(rows, cols)

    def hface(self, p, q, i, w):
        return self._get(self.hfaces, p, q, i, w, self.dim(p, q, w), self.dim(p - 1, q, w))

    def vface(self, p, q, i, w):
        return self._get(self.vfaces, p, q, i, w, self.dim(p, q, w), self.dim(p, q - 1, w))

    def hdegen(self, p, q, i, w):
        return self._get(self.hdegens, p, q, i, w, self.dim(p, q, w), self.dim(p + 1, q, w))

    def vdegen(self, p, q, i, w):
        return self._get(self.vdegens, p, q, i, w, self.dim(p, q, w), self.dim(p, q + 1, w))

    def validate(self) -> None:
        """Row/column simplicial identities plus horizontal-vertical commutation."""
        r = self.ring
        for w in self.weights():
            for q in range(self.q_max + 1):
                row = SimplicialModule(
                    r,
                    self.p_max,
                    {(p, 0): self.dim(p, q, w) for p in range(self.p_max + 1)},
                    {(p, i, 0): self.hface(p, q, i, w) for p in range(1, self.p_max + 1) for i in range(p + 1)},
                    {(p, i, 0): self.hdegen(p, q, i, w) for p in range(self.p_max) for i in range(p + 1)},
                )
                row.validate()
            for p in range(self.p_max + 1):
                col = SimplicialModule(
                    r,
                    self.q_max,
                    {(q, 0): self.dim(p, q, w) for q in range(self.q_max + 1)},
                    {(q, i, 0): self.vface(p, q, i, w) for q in range(1, self.q_max + 1) for i in range(q + 1)},
                    {(q, i, 0): self.vdegen(p, q, i, w) for q in range(self.q_max) for i in range(q + 1)},
                )
                col.validate()
            for p in range(1, self.p_max + 1):
                for q in range(1, self.q_max + 1):
                    for i in range(p + 1):
                        for j in range(q + 1):
                            hv = mmul(self.hface(p, q, i, w), self.vface(p - 1, q, j, w), r)
                            vh = mmul(self.vface(p, q, j, w), self.hface(p, q - 1, i, w), r)
                            if (hv != vh).any():
                                raise ValueError(f"h/v faces do not commute at {(p, q, i, j, w)}")

    def double_complex(self):
        """Unnormalized double complex with the (-1)^p vertical twist left to
        the total-complex builder (raw commuting differentials here)."""
        from .complexes import DoubleComplex

        terms = dict(self.dims)
        horiz = {}
        vert = {}
        for (p, q, w), dim in self.dims.items():
            if p >= 1:
                d = mzeros(dim, self.dim(p - 1, q, w))
                for i in range(p + 1):
                    d = d + ((-1) ** i) * self.hface(p, q, i, w)
                horiz[(p, q, w)] = d % self.ring.modulus
            if q >= 1:
                d = mzeros(dim, self.dim(p, q - 1, w))
                for i in range(q + 1):
                    d = d + ((-1) ** i) * self.vface(p, q, i, w)
                vert[(p, q, w)] = d % self.ring.modulus
        return DoubleComplex(self.ring, terms, horiz, vert)


def diagonal(b: BisimplicialModule) -> SimplicialModule:
    """X_n = B_{n,n} with d_i = d_i^h d_i^v and s_i = s_i^h s_i^v."""
    if b.p_max != b.q_max:
        raise ValueError("diagonal needs a square window")
    n_max = b.p_max
    dims = {(n, w): b.dim(n, n, w) for n in range(n_max + 1) for w in b.weights() if b.dim(n, n, w)}
    faces = {}
    degens = {}
    for w in b.weights():
        for n in range(1, n_max + 1):
            for i in range(n + 1):
                faces[(n, i, w)] = mmul(b.vface(n, n, i, w), b.hface(n, n - 1, i, w), b.ring)
        for n in range(n_max):
            for i in range(n + 1):
                degens[(n, i, w)] = mmul(b.vdegen(n, n, i, w), b.hdegen(n, n + 1, i, w), b.ring)
    return SimplicialModule(b.ring, n_max, dims, faces, degens)


def double_kan(dc, p_max: int, q_max: int) -> BisimplicialModule:
    """Kan transform in both directions of a double complex with commuting
    differentials: X_{m,n} = sum over pairs of surjections of D_{p,q}."""
    from .complexes import DoubleComplex

    assert isinstance(dc, DoubleComplex)
    dc.validate()
    ring = dc.ring
    weights = sorted({w for (_, _, w) in dc.terms})
    dims = {}
    hfaces = {}
    vfaces = {}
    hdegens = {}
    vdegens = {}

    for w in weights:
        def ddim(p, q):
            return dc.dim(p, q, w)

        layout = {}
        sizes = {}
        index = {}
        for m in range(p_max + 1):
            for n in range(q_max + 1):
                blocks = []
                off = 0
                for p in range(m, -1, -1):
                    for q in range(n, -1, -1):
                        d = ddim(p, q)
                        if d == 0:
                            continue
                        for eta in monotone_surjections(m, p):
                            for rho in monotone_surjections(n, q):
                                blocks.append((eta, rho, p, q, off))
                                off += d
                layout[(m, n)] = blocks
                sizes[(m, n)] = off
                index[(m, n)] = {(e.values, r.values): (p, q, o) for (e, r, p, q, o) in blocks}
                if off:
                    dims[(m, n, w)] = off

        def one_factor(eta, alpha, p):
            """Kan block data in one direction: (eta', kind) with kind in
            {"id", "d", None}."""
            comp = eta.compose(alpha)
            eta2, mono = epi_mono_factorize(comp)
            if mono.is_identity:
                return eta2, "id"
            if p >= 1 and mono.source == p - 1 and mono.values == MonotoneMap.face(p, p).values:
                return eta2, "d"
            return None, None

        def build(m, n, alpha, horizontal: bool):
            tgt_mn = (alpha.source, n) if horizontal else (m, alpha.source)
            out = mzeros(sizes[(m, n)], sizes.get(tgt_mn, 0))
            for (eta, rho, p, q, off) in layout[(m, n)]:
                if horizontal:
                    eta2, kind = one_factor(eta, alpha, p)
                    if kind is None:
                        continue
                    p2, q2 = (p, q) if kind == "id" else (p - 1, q)
                    key = (eta2.values, rho.values)
                    blk = midentity(ddim(p, q)) if kind == "id" else ((-1) ** p) * dc.h(p, q, w)
                else:
                    rho2, kind = one_factor(rho, alpha, q)
                    if kind is None:
                        continue
                    p2, q2 = (p, q) if kind == "id" else (p, q - 1)
                    key = (eta.values, rho2.values)
                    blk = midentity(ddim(p, q)) if kind == "id" else ((-1) ** q) * dc.v(p, q, w)
                tgt = index[tgt_mn].get(key)
                if tgt and (tgt[0], tgt[1]) == (p2, q2) and blk.size:
                    o2 = tgt[2]
                    out[off : off + blk.shape[0], o2 : o2 + blk.shape[1]] += blk
            return out % ring.modulus

        for m in range(p_max + 1):
            for n in range(q_max + 1):
                for i in range(m + 1):
                    if m >= 1:
                        hfaces[(m, n, i, w)] = build(m, n, MonotoneMap.face(m, i), True)
                    if m < p_max:
                        hdegens[(m, n, i, w)] = build(m, n, MonotoneMap.degeneracy(m, i), True)
                for i in range(n + 1):
                    if n >= 1:
                        vfaces[(m, n, i, w)] = build(m, n, MonotoneMap.face(n, i), False)
                    if n < q_max:
                        vdegens[(m, n, i, w)] = build(m, n, MonotoneMap.degeneracy(n, i), False)

    return BisimplicialModule(ring, p_max, q_max, dims, hfaces, vfaces, hdegens, vdegens)


# ---------------------------------------------------------------------------
# shuffle products


def shuffles(i: int, j: int):
    """(i, j)-shuffles of {0..i+j-1} as (mu, nu, sign); mu has i elements."""
    universe = list(range(i + j))
    for mu in itertools.combinations(universe, i):
        nu = tuple(k for k in universe if k not in mu)
        inversions = sum(1 for a in mu for b in nu if a > b)
        yield mu, nu, (-1) ** inversions


def shuffle_product(x, i: int, y, j: int, algebra_data):
    """Product X_i x X_j -> X_{i+j} of a simplicial algebra.

    ``algebra_data`` provides ``degeneracy_element(n, k, elt)`` applying the
    degeneracy s_k at level n, and elements multiply with ``*``.  In
    degrees (0, 0) this is plain multiplication; otherwise the signed sum
    over (i, j)-shuffles, with the j-element block applied to x and the
    i-element block applied to y.
    """
    if i == 0 and j == 0:
        return x * y
    total = None
    for mu, nu, sign in shuffles(i, j):
        xs = x
        level = i
        for k in nu:  # ascending: valid degeneracy indices at each level
            xs = algebra_data.degeneracy_element(level, k, xs)
            level += 1
        ys = y
        level = j
        for k in mu:
            ys = algebra_data.degeneracy_element(level, k, ys)
            level += 1
        term = xs * ys
        if sign < 0:
            term = -term
        total = term if total is None else total + term
    return total
