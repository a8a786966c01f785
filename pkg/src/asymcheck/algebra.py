"""Graded Poincare duality algebras built from trilinear forms.

Basis elements carry stable labels.  Three-manifold shape (degrees 0..3)::

    1, a1..am (deg 1), c1..cm (deg 2, dual to the a's), top (deg 3)

Six-manifold shape (degrees 0, 2, 3, 4, 6)::

    1, a1..am (deg 2), b1, bb1, .., bs, bbs (deg 3), c1..cm (deg 4), top (deg 6)

with a_i a_j = sum_k mu_ijk c_k, a_i c_j = delta_ij top and b_j bb_j = top.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import Field
from .forms import TrilinearForm
from .linalg import det_integer, inverse_mod, rank_mod, rank_rational, rref_mod


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    """Finite-dimensional graded algebra given by structure constants.

    ``table[i, j, k]`` is the coefficient of basis element k in e_i * e_j.
    Basis elements are sorted by degree; element 0 is the unit and ``top``
    spans the degree ``formal_dimension`` part.
    """

    field: Field
    labels: Tuple[str, ...]
    degrees: Tuple[int, ...]
    table: np.ndarray
    formal_dimension: int
    top: int

    @property
    def dim(self) -> int:
        return len(self.labels)

    @cached_property
    def _by_degree(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return {d: tuple(v) for d, v in out.items()}

    def indices(self, d: int) -> Tuple[int, ...]:
        """Basis indices in degree d (empty if A^d = 0)."""
        return self._by_degree.get(d, ())

    def degree_dims(self) -> Dict[int, int]:
        return {d: len(v) for d, v in sorted(self._by_degree.items())}

    def label_index(self, label: str) -> int:
        return self.labels.index(label)

    def _reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr % self.field.char if self.field.is_finite else arr

    def vector(self, coeffs: Dict[str, int]) -> np.ndarray:
        v = np.zeros(self.dim, dtype=self.table.dtype)
        for lab, c in coeffs.items():
            v[self.label_index(lab)] = c
        return self._reduce(v)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=self.table.dtype)
        v[i] = 1
        return v

    def mul(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=self.table.dtype)
        v = np.asarray(v, dtype=self.table.dtype)
        return self._reduce(np.tensordot(u, np.tensordot(v, self.table, axes=(0, 1)), axes=(0, 0)))

    def reduce_mod(self, p: int) -> "GradedAlgebra":
        if self.field.is_finite:
            raise ValueError("only integral algebras can be reduced")
        table = np.array(self.table % p, dtype=np.int64)
        return GradedAlgebra(Field(p), self.labels, self.degrees, table,
                             self.formal_dimension, self.top)

    def same_table(self, other: "GradedAlgebra") -> bool:
        return (self.field == other.field and self.labels == other.labels
                and self.degrees == other.degrees
                and np.array_equal(self.table, other.table))

    def to_json(self) -> Dict[str, Any]:
        """Debug dump; the layout is not a stable interface."""
        products = []
        for i in range(self.dim):
            for j in range(self.dim):
                row = {self.labels[k]: int(self.table[i, j, k])
                       for k in range(self.dim) if self.table[i, j, k] != 0}
                if row and i and j:
                    products.append([self.labels[i], self.labels[j], row])
        return {
            "field": self.field.to_json(),
            "formal_dimension": self.formal_dimension,
            "basis": [{"label": l, "degree": d} for l, d in zip(self.labels, self.degrees)],
            "products": products,
        }


def _empty_table(field: Field, n: int) -> np.ndarray:
    return np.zeros((n, n, n), dtype=object if field.is_integral else np.int64)


def algebra_from_products(field: Field, basis: Sequence[Tuple[str, int]],
                          products: Dict[Tuple[str, str], Dict[str, int]]) -> GradedAlgebra:
    """Hand-built algebra.  The first basis element is the unit; products with
    it are filled in, every other product is taken from ``products``
    (missing = 0).  No structural checks are made here."""
    labels = tuple(b[0] for b in basis)
    degrees = tuple(int(b[1]) for b in basis)
    n = len(labels)
    table = _empty_table(field, n)
    for i in range(n):
        table[0, i, i] = 1
        table[i, 0, i] = 1
    pos = {l: i for i, l in enumerate(labels)}
    for (x, y), row in products.items():
        for z, c in row.items():
            table[pos[x], pos[y], pos[z]] = field.reduce(c)
    fd = max(degrees)
    return GradedAlgebra(field, labels, degrees, table, fd, degrees.index(fd))


def three_manifold_algebra(mu: TrilinearForm) -> GradedAlgebra:
    """Cohomology-type algebra of a 3-manifold with cup-product form mu on A^1.

    In odd characteristic, graded commutativity forces products of degree-1
    classes to be alternating, so a symmetric mu must vanish there.
    """
    field, m = mu.field, mu.m
    if field.char != 2 and not mu.is_zero():
        raise ValueError(
            "degree-1 products are alternating outside characteristic 2; "
            "a nonzero symmetric form cannot be used")
    labels = ("1",) + tuple(f"a{i}" for i in range(1, m + 1)) \
        + tuple(f"c{i}" for i in range(1, m + 1)) + ("top",)
    degrees = (0,) + (1,) * m + (2,) * m + (3,)
    n = len(labels)
    a = lambda i: 1 + i  # noqa: E731
    c = lambda i: 1 + m + i  # noqa: E731
    top = n - 1
    table = _empty_table(field, n)
    for i in range(n):
        table[0, i, i] = table[i, 0, i] = 1
    T = mu.tensor
    for i in range(m):
        for j in range(m):
            for k in range(m):
                table[a(i), a(j), c(k)] = T[i, j, k]
        table[a(i), c(i), top] = 1
        table[c(i), a(i), top] = 1
    return GradedAlgebra(field, labels, degrees, table, 3, top)


def six_manifold_algebra(mu: TrilinearForm, b3_half: int = 0) -> GradedAlgebra:
    """Algebra of M' # s(S^3 x S^3) where M' has cup-product form mu on A^2."""
    field, m, s = mu.field, mu.m, int(b3_half)
    if s < 0:
        raise ValueError("b3_half must be >= 0")
    labels = ["1"] + [f"a{i}" for i in range(1, m + 1)]
    degrees = [0] + [2] * m
    for j in range(1, s + 1):
        labels += [f"b{j}", f"bb{j}"]
        degrees += [3, 3]
    labels += [f"c{i}" for i in range(1, m + 1)] + ["top"]
    degrees += [4] * m + [6]
    n = len(labels)
    a = lambda i: 1 + i  # noqa: E731
    b = lambda j: 1 + m + 2 * j  # noqa: E731
    c = lambda i: 1 + m + 2 * s + i  # noqa: E731
    top = n - 1
    table = _empty_table(field, n)
    for i in range(n):
        table[0, i, i] = table[i, 0, i] = 1
    T = mu.tensor
    for i in range(m):
        for j in range(m):
            for k in range(m):
                table[a(i), a(j), c(k)] = T[i, j, k]
        table[a(i), c(i), top] = 1
        table[c(i), a(i), top] = 1
    for j in range(s):
        table[b(j), b(j) + 1, top] = 1
        table[b(j) + 1, b(j), top] = field.reduce(-1)
    return GradedAlgebra(field, tuple(labels), tuple(degrees), table, 6, top)


# structural predicates

@dataclass(frozen=True)
class StructureReport:
    homogeneous: bool
    unital: bool
    associative: bool
    graded_commutative: bool
    poincare_duality: bool

    @property
    def ok(self) -> bool:
        return all((self.homogeneous, self.unital, self.associative,
                    self.graded_commutative, self.poincare_duality))


def pairing_matrix(A: GradedAlgebra, d: int) -> np.ndarray:
    """Coefficient of the top class in e_a * e_b, a in A^d, b in A^(n-d)."""
    rows, cols = A.indices(d), A.indices(A.formal_dimension - d)
    return np.array([[A.table[r, c, A.top] for c in cols] for r in rows],
                    dtype=A.table.dtype).reshape(len(rows), len(cols))


def _poincare_duality(A: GradedAlgebra) -> bool:
    n = A.formal_dimension
    if A.indices(n) != (A.top,):
        return False
    if any(d < 0 or d > n for d in A.degrees):
        return False
    for d in range(n + 1):
        P = pairing_matrix(A, d)
        if P.shape[0] != P.shape[1]:
            return False
        if P.shape[0] == 0:
            continue
        if A.field.is_finite:
            if rank_mod(P, A.field.char) != P.shape[0]:
                return False
        elif abs(det_integer(P.tolist())) != 1:
            return False
    return True


def check_structure(A: GradedAlgebra) -> StructureReport:
    t = A.table
    n = A.dim
    deg = np.array(A.degrees)
    nz = np.argwhere(t != 0)
    homogeneous = all(deg[i] + deg[j] == deg[k] for i, j, k in nz)
    eye = np.eye(n, dtype=t.dtype)
    unital = bool(np.array_equal(A._reduce(t[0]), eye) and np.array_equal(A._reduce(t[:, 0]), eye))
    left = np.einsum("ijl,lkm->ijkm", t, t)
    right = np.einsum("jkl,ilm->ijkm", t, t)
    associative = bool(not A._reduce(left - right).any())
    sign = np.where(np.outer(deg, deg) % 2 == 1, -1, 1)
    swapped = np.transpose(t, (1, 0, 2)) * sign[:, :, None]
    graded_commutative = bool(not A._reduce(swapped - t).any())
    return StructureReport(bool(homogeneous), unital, associative, graded_commutative,
                           _poincare_duality(A))


def _span(vectors: List[np.ndarray], field: Field) -> List[np.ndarray]:
    """A basis of the span (rows of a reduced echelon form)."""
    vecs = [v for v in vectors if np.any(v != 0)]
    if not vecs:
        return []
    if field.is_finite:
        R, _ = rref_mod(np.array(vecs, dtype=np.int64), field.char)
        return list(R)
    rows = [[Fraction(x) for x in v] for v in vecs]
    r = 0
    for c in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = [x / rows[r][c] for x in rows[r]]
        rows[r] = pr
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        r += 1
    return [np.array(row, dtype=object) for row in rows[:r]]


def _mul_generic(A: GradedAlgebra, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    if A.field.is_finite:
        return A.mul(u, v)
    t = A.table.astype(object)
    return np.tensordot(u, np.tensordot(v, t, axes=(0, 1)), axes=(0, 0))


def generated_by_degree(A: GradedAlgebra, d: int) -> bool:
    """Do products of elements of A^d (and 1) span every A^i with d | i?"""
    gens = [A.basis_vector(i) for i in A.indices(d)]
    current = [A.basis_vector(0)]
    reached: Dict[int, int] = {0: 1}
    k = 0
    while current and (k + 1) * d <= A.formal_dimension:
        k += 1
        current = _span([_mul_generic(A, u, g) for u in current for g in gens], A.field)
        reached[k * d] = len(current)
    for i, n_i in A.degree_dims().items():
        if i % d == 0 and reached.get(i, 0) != n_i:
            return False
    return True


def cup_length(A: GradedAlgebra) -> int:
    """Largest r with a nonzero product of r positive-degree elements."""
    positive = [A.basis_vector(i) for i in range(A.dim) if A.degrees[i] > 0]
    current = _span(positive, A.field)
    r = 0
    while current:
        r += 1
        current = _span([_mul_generic(A, u, g) for u in current for g in positive], A.field)
    return r


def form_nondegenerate(mu: TrilinearForm) -> bool:
    """No nonzero x with mu(x, -, -) identically zero."""
    if mu.m == 0:
        return True
    S = mu.slice_matrix()
    if mu.field.is_finite:
        return rank_mod(S, mu.field.char) == mu.m
    return rank_rational(S.tolist()) == mu.m


def change_basis(A: GradedAlgebra, G) -> GradedAlgebra:
    """Same algebra in the basis f_i = sum_a G[a, i] e_a (finite fields).

    G must be invertible, respect degrees and fix the unit.
    """
    if not A.field.is_finite:
        raise ValueError("basis change implemented over finite fields only")
    p = A.field.char
    G = np.asarray(G, dtype=np.int64) % p
    deg = np.array(A.degrees)
    if np.any((G != 0) & (deg[:, None] != deg[None, :])):
        raise ValueError("basis change must preserve degrees")
    Ginv = inverse_mod(G, p)
    t = np.einsum("ai,bj,abc,kc->ijk", G, G, A.table, Ginv) % p
    return GradedAlgebra(A.field, A.labels, A.degrees, t, A.formal_dimension, A.top)


def random_graded_automorphism_matrix(A: GradedAlgebra, rng: np.random.Generator) -> np.ndarray:
    """A random invertible degree-preserving linear map fixing 1 (not an algebra map)."""
    p = A.field.char
    G = np.zeros((A.dim, A.dim), dtype=np.int64)
    G[0, 0] = 1
    for d, idx in A.degree_dims().items():
        if d == 0:
            continue
        ids = list(A.indices(d))
        while True:
            block = rng.integers(0, p, size=(len(ids), len(ids)))
            if rank_mod(block, p) == len(ids):
                break
        G[np.ix_(ids, ids)] = block
    return G


def halved_degrees(A: GradedAlgebra) -> Optional[GradedAlgebra]:
    """The same ungraded algebra with all degrees halved, if they are all even."""
    if any(d % 2 for d in A.degrees):
        return None
    return GradedAlgebra(A.field, A.labels, tuple(d // 2 for d in A.degrees), A.table,
                         A.formal_dimension // 2, A.top)
