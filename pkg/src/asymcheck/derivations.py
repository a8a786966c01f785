"""Negative-degree derivations of graded algebras.

A derivation of degree r satisfies D(xy) = D(x) y + (-1)^(r|x|) x D(y).
All maps of a fixed degree are found at once as the null space of the
Leibniz system in the matrix entries of D.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .algebra import GradedAlgebra, generated_by_degree
from .fields import F2
from .linalg import nullspace_mod, rank_mod


class PreconditionError(ValueError):
    """An algebra does not satisfy the hypotheses of a criterion."""


@dataclass(frozen=True, eq=False)
class Derivation:
    """``matrix[u, v]`` is the coefficient of e_v in D(e_u)."""

    algebra: GradedAlgebra
    degree: int
    matrix: np.ndarray

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (x @ self.matrix) % self.algebra.field.char

    def block(self, d: int) -> np.ndarray:
        """The map A^d -> A^(d+r) as a (target x source) matrix."""
        A = self.algebra
        src, dst = A.indices(d), A.indices(d + self.degree)
        return self.matrix[np.ix_(src, dst)].T.copy() if src and dst else \
            np.zeros((len(dst), len(src)), dtype=np.int64)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def to_json(self) -> Dict[str, object]:
        A = self.algebra
        images = {}
        for u in range(A.dim):
            row = {A.labels[v]: int(self.matrix[u, v]) for v in range(A.dim) if self.matrix[u, v]}
            if row:
                images[A.labels[u]] = row
        return {"degree": self.degree, "images": images}


@dataclass(frozen=True)
class DerivationSpace:
    degree: int
    basis: Tuple[Derivation, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _unknowns(A: GradedAlgebra, r: int, unit_constrained: bool) -> List[Tuple[int, int]]:
    out = []
    for u in range(A.dim):
        du = A.degrees[u] + r
        if du < 0 or (unit_constrained and du == 0):
            continue
        out.extend((u, v) for v in A.indices(du))
    return out


def leibniz_system(A: GradedAlgebra, r: int, unit_constrained: bool = False):
    """Coefficient matrix of the Leibniz equations and the unknown (u, v) list."""
    if not A.field.is_finite:
        raise ValueError("derivations are solved over finite fields")
    p = A.field.char
    t = A.table
    n = A.dim
    unknowns = _unknowns(A, r, unit_constrained)
    sign = np.array([(-1) ** ((r * d) % 2) for d in A.degrees], dtype=np.int64)
    E = np.zeros((n, n, n, len(unknowns)), dtype=np.int64)
    for k, (u, v) in enumerate(unknowns):
        # D(xy): the e_u component of xy maps to e_v
        E[:, :, v, k] += t[:, :, u]
        # D(x) y with x = e_u
        E[u, :, :, k] -= t[v, :, :]
        # (-1)^(r|x|) x D(y) with y = e_u
        E[:, u, :, k] -= sign[:, None] * t[:, v, :]
    M = E.reshape(n * n * n, len(unknowns)) % p
    M = M[M.any(axis=1)]
    return M, unknowns


def derivation_space(A: GradedAlgebra, r: int, unit_constrained: bool = False) -> DerivationSpace:
    """All derivations of degree r < 0.

    With ``unit_constrained`` the components landing in A^0 are forced to
    vanish (no class may hit the unit).
    """
    if r >= 0:
        raise ValueError("only negative degrees are supported")
    p = A.field.char
    M, unknowns = leibniz_system(A, r, unit_constrained)
    if not unknowns:
        return DerivationSpace(r, ())
    null = nullspace_mod(M, p, ncols=len(unknowns)) if len(M) else np.eye(len(unknowns), dtype=np.int64)
    basis = []
    for vec in null:
        mat = np.zeros((A.dim, A.dim), dtype=np.int64)
        for val, (u, v) in zip(vec, unknowns):
            mat[u, v] = val
        basis.append(Derivation(A, r, mat))
    return DerivationSpace(r, tuple(basis))


def negative_derivation_dimensions(A: GradedAlgebra, unit_constrained: bool = False) -> Dict[int, int]:
    return {r: derivation_space(A, r, unit_constrained).dimension
            for r in range(-1, -A.formal_dimension - 1, -1)}


def has_negative_derivation(A: GradedAlgebra, unit_constrained: bool = False) -> bool:
    return any(derivation_space(A, r, unit_constrained).dimension
               for r in range(-1, -A.formal_dimension - 1, -1))


def is_derivation(A: GradedAlgebra, D: Derivation) -> bool:
    """Check the Leibniz rule pairwise by direct multiplication."""
    p = A.field.char
    r = D.degree
    if D.apply(A.basis_vector(0)).any():
        return False
    for x in range(A.dim):
        ex = A.basis_vector(x)
        Dx = D.apply(ex)
        s = -1 if (r * A.degrees[x]) % 2 else 1
        for y in range(A.dim):
            ey = A.basis_vector(y)
            lhs = D.apply(A.mul(ex, ey))
            rhs = (A.mul(Dx, ey) + s * A.mul(ex, D.apply(ey))) % p
            if not np.array_equal(lhs % p, rhs):
                return False
    return True


def derivation_squares_to_zero(D: Derivation) -> bool:
    return not ((D.matrix @ D.matrix) % D.algebra.field.char).any()


# Hyperplane criterion for six-dimensional F_2 algebras generated in degree 2

@dataclass(frozen=True)
class Lemma1Witness:
    """K is the kernel of ``dual``; ``a`` lies outside K."""

    dual: Tuple[int, ...]
    a: Tuple[int, ...]
    kernel_basis: Tuple[Tuple[int, ...], ...]

    def to_json(self) -> Dict[str, object]:
        return {"dual": list(self.dual), "a": list(self.a),
                "K": [list(k) for k in self.kernel_basis]}


def degree_two_form(A: GradedAlgebra) -> np.ndarray:
    """mu(x, y, z) = <x y z, top> on the A^2 basis."""
    idx = list(A.indices(2))
    t = A.table
    prod = t[np.ix_(idx, idx)]  # x y as vectors
    xyz = np.einsum("ijl,lkm->ijkm", prod, t[:, idx, :])
    return xyz[:, :, :, A.top] % A.field.char


def _check_lemma1_shape(A: GradedAlgebra) -> None:
    if A.field != F2:
        raise PreconditionError("the hyperplane criterion is stated over F_2")
    if A.formal_dimension != 6 or any(d % 2 for d in A.degrees):
        raise PreconditionError("expected an algebra concentrated in degrees 0, 2, 4, 6")
    if not generated_by_degree(A, 2):
        raise PreconditionError("algebra is not generated by its degree-2 part")


def _kernel_basis(phi: Tuple[int, ...]) -> Tuple[int, List[np.ndarray]]:
    m = len(phi)
    j0 = phi.index(1)
    basis = []
    for i in range(m):
        if i == j0:
            continue
        v = np.zeros(m, dtype=np.int64)
        v[i] = 1
        if phi[i]:
            v[j0] = 1
        basis.append(v)
    return j0, basis


def lemma1_criterion(A: GradedAlgebra) -> Optional[Lemma1Witness]:
    """First hyperplane K (dual vectors in lexicographic order) satisfying
    the criterion, or None.

    Given condition (i) on K, conditions (ii)(1) and (ii)(2) do not depend on
    the choice of a outside K, so a single a is tested.
    """
    _check_lemma1_shape(A)
    mu = degree_two_form(A)
    m = mu.shape[0]
    for phi in itertools.product((0, 1), repeat=m):
        if not any(phi):
            continue
        j0, K = _kernel_basis(phi)
        a = np.zeros(m, dtype=np.int64)
        a[j0] = 1
        Kmat = np.array(K, dtype=np.int64).reshape(len(K), m)
        # (i): mu vanishes on K x K x K
        restricted = np.einsum("abc,ia,jb,kc->ijk", mu, Kmat, Kmat, Kmat) % 2
        if restricted.any():
            continue
        mu_a = np.tensordot(a, mu, axes=(0, 0)) % 2
        gram = (Kmat @ mu_a @ Kmat.T) % 2
        if rank_mod(gram, 2) != len(K):
            continue
        if ((Kmat @ (mu_a @ a)) % 2).any():
            continue
        return Lemma1Witness(tuple(phi), tuple(int(v) for v in a),
                             tuple(tuple(int(x) for x in k) for k in K))
    return None


def lemma1_derivation(A: GradedAlgebra, w: Lemma1Witness) -> Derivation:
    """The degree -2 derivation determined by a witness: it sends x in A^2 to
    dual(x) * 1 and is extended to A^4, A^6 through the Leibniz rule."""
    space = derivation_space(A, -2)
    idx = list(A.indices(2))
    target = np.array(w.dual, dtype=np.int64)
    for coeffs in itertools.product((0, 1), repeat=space.dimension):
        mat = sum((c * D.matrix for c, D in zip(coeffs, space.basis)),
                  np.zeros((A.dim, A.dim), dtype=np.int64)) % 2
        if np.array_equal(mat[idx, 0], target):
            return Derivation(A, -2, mat)
    raise ValueError("no derivation realises this witness")


# Odd-degree derivations when A^1 = A^5 = 0

def lemma2_property_check(A: GradedAlgebra) -> bool:
    """True iff every odd negative degree derivation space is zero.

    Preconditions: formal dimension 6, A^1 = A^5 = 0, even part generated by
    A^2.  Violations raise PreconditionError.
    """
    if not A.field.is_finite:
        raise PreconditionError("expected a finite field")
    if A.formal_dimension != 6:
        raise PreconditionError("expected formal dimension 6")
    if A.indices(1) or A.indices(5):
        raise PreconditionError("expected A^1 = A^5 = 0")
    if not generated_by_degree(A, 2):
        raise PreconditionError("even part is not generated by A^2")
    return all(derivation_space(A, r).dimension == 0 for r in (-1, -3, -5))
