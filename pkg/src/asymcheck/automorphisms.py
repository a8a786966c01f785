"""Form-preserving linear automorphisms of finite prime order.

A graded automorphism of the algebras built in ``algebra`` is determined by
its action T on the generating degree: the pairing forces the inverse
transpose on the dual degree, and the top class is scaled by the sign
epsilon with mu(Tx, Ty, Tz) = epsilon * mu(x, y, z).  The search below works
with T directly.

Matrices follow the column convention: column i of T is T(e_i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .fields import F2, Field, is_prime
from .forms import TrilinearForm, alpha
from .linalg import rank_mod

Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class FormAutomorphism:
    T: Matrix
    epsilon: int
    field: Field

    @property
    def m(self) -> int:
        return len(self.T)

    def array(self) -> np.ndarray:
        return np.array(self.T, dtype=np.int64).reshape(self.m, self.m)

    @property
    def order(self) -> int:
        return matrix_order(self.array(), self.field.char)

    def to_json(self) -> Dict[str, object]:
        return {"matrix": [list(r) for r in self.T], "epsilon": self.epsilon,
                "order": self.order}


def _as_matrix(T: np.ndarray) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in T)


def matrix_order(T: np.ndarray, p: int, limit: int = 10_000) -> int:
    m = T.shape[0]
    eye = np.eye(m, dtype=np.int64)
    P = T % p
    for k in range(1, limit + 1):
        if np.array_equal(P, eye):
            return k
        P = (P @ T) % p
    raise ValueError("matrix order exceeds limit (singular?)")


def preserves_form(T, mu: TrilinearForm, epsilon: int = 1) -> bool:
    """mu(Te_i, Te_j, Te_k) = epsilon * mu_ijk on every sorted triple."""
    T = np.asarray(T)
    if T.shape != (mu.m, mu.m):
        raise ValueError(f"matrix of shape {T.shape} for a form with m={mu.m}")
    return mu.transform(T) == mu.scale(epsilon)


class _Echelon:
    """Incremental independence test over F_p."""

    def __init__(self, p: int):
        self.p = p
        self.rows: List[Tuple[int, np.ndarray]] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for piv, row in self.rows:
            if v[piv]:
                v = (v - v[piv] * row) % self.p
        return v

    def push(self, v: np.ndarray) -> bool:
        w = self.reduce(v)
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        piv = int(nz[0])
        w = (w * pow(int(w[piv]), -1, self.p)) % self.p
        self.rows.append((piv, w))
        return True

    def pop(self) -> None:
        self.rows.pop()


def _vectors(m: int, p: int) -> np.ndarray:
    return np.array(list(itertools.product(range(p), repeat=m)), dtype=np.int64).reshape(-1, m)


def _search(mu: TrilinearForm, epsilon: int, involution: bool) -> Iterator[np.ndarray]:
    """Yield every invertible T with mu o T = epsilon mu, columns assigned in
    order, candidate images in lexicographic order.

    Forward checking: once columns i <= k are fixed, mu(Te_i, Te_k, .) is a
    linear form that every later image Te_l must evaluate to the target
    entry (i, k, l), so each later column keeps a mask of surviving
    candidates and the branch dies when a mask empties.
    """
    field = mu.field
    p = field.char
    m = mu.m
    eps = field.reduce(epsilon)
    target = (eps * mu.tensor) % p
    cands = _vectors(m, p)
    # mu(., ., v) for every candidate v
    slices = np.einsum("abc,nc->nab", mu.tensor, cands) % p
    T = np.zeros((m, m), dtype=np.int64)
    ech = _Echelon(p)
    chosen = [0] * m

    def consistent(k: int) -> bool:
        Y = T[:, : k + 1]
        W = slices[chosen[k]]
        vals = (Y.T @ W @ Y) % p  # vals[i, j] = mu(Te_i, Te_j, Te_k)
        if not np.array_equal(vals, target[: k + 1, : k + 1, k]):
            return False
        if involution:
            for i in range(k + 1):
                col = T[:, i]
                if col[k + 1:].any():
                    continue
                if not np.array_equal((T[:, : k + 1] @ col[: k + 1]) % p, np.eye(m, dtype=np.int64)[i]):
                    return False
        return True

    def narrow(k: int, masks: np.ndarray) -> Optional[np.ndarray]:
        if k + 1 == m:
            return masks
        W = slices[chosen[k]]
        # forms[i] = mu(Te_i, Te_k, .) for i <= k, evaluated on every candidate
        forms = (T[:, : k + 1].T @ W) % p
        evals = (cands @ forms.T) % p  # (ncand, k+1)
        out = masks.copy()
        for l in range(k + 1, m):
            out[l] &= (evals == target[: k + 1, k, l]).all(axis=1)
            if not out[l].any():
                return None
        return out

    def rec(k: int, masks: np.ndarray) -> Iterator[np.ndarray]:
        if k == m:
            yield T.copy()
            return
        for n in np.flatnonzero(masks[k]):
            v = cands[n]
            if not ech.push(v):
                continue
            T[:, k] = v
            chosen[k] = int(n)
            if consistent(k):
                nxt = narrow(k, masks)
                if nxt is not None:
                    yield from rec(k + 1, nxt)
            ech.pop()
        T[:, k] = 0

    if m == 0:
        yield T.copy()
        return
    # f(Tv) = eps f(v) and rank mu(Tv, ., .) = rank mu(v, ., .) seed the masks
    cubic = np.einsum("nab,na,nb->n", slices, cands, cands) % p
    ranks = np.array([rank_mod(S, p) for S in slices])
    masks = np.zeros((m, len(cands)), dtype=bool)
    for l in range(m):
        e = int(np.flatnonzero((cands == np.eye(m, dtype=np.int64)[l]).all(axis=1))[0])
        masks[l] = (cubic == (eps * cubic[e]) % p) & (ranks == ranks[e])
    yield from rec(0, masks)


def _is_identity(T: np.ndarray) -> bool:
    return np.array_equal(T, np.eye(T.shape[0], dtype=np.int64))


def find_order_q_automorphism(mu: TrilinearForm, q: int, epsilon: int = 1) -> Optional[FormAutomorphism]:
    """Lexicographically first T != I with T^q = I and mu o T = epsilon mu.

    Integral forms must be reduced first; this never answers questions about
    automorphisms over Z.
    """
    if not mu.field.is_finite:
        raise ValueError("reduce the form modulo a prime before searching")
    if not is_prime(q):
        raise ValueError(f"order {q} is not prime")
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    p = mu.field.char
    eye = np.eye(mu.m, dtype=np.int64)
    for T in _search(mu, epsilon, involution=(q == 2)):
        if _is_identity(T):
            continue
        P = eye
        for _ in range(q):
            P = (P @ T) % p
        if np.array_equal(P, eye):
            return FormAutomorphism(_as_matrix(T), epsilon, mu.field)
    return None


def find_involution(mu: TrilinearForm) -> Optional[FormAutomorphism]:
    if mu.field != F2:
        raise ValueError("find_involution expects a form over F_2")
    return find_order_q_automorphism(mu, 2, 1)


def iter_form_automorphisms(mu: TrilinearForm, epsilon: int = 1) -> Iterator[FormAutomorphism]:
    """All form-preserving T via the pruned search (any finite field)."""
    for T in _search(mu, epsilon, involution=False):
        yield FormAutomorphism(_as_matrix(T), epsilon, mu.field)


# exhaustive F_2 machinery (oracle and census orbit computations)

@lru_cache(maxsize=None)
def gl_f2(m: int) -> Tuple[np.ndarray, ...]:
    """Every invertible m x m matrix over F_2, found by scanning all 2^(m*m)."""
    if m > 4:
        raise ValueError("exhaustive GL(m, 2) scan limited to m <= 4")
    out = []
    for bits in range(1 << (m * m)):
        T = np.array([(bits >> n) & 1 for n in range(m * m)], dtype=np.int64).reshape(m, m)
        if _f2_rank(T) == m:
            out.append(T)
    return tuple(out)


def _f2_rank(T: np.ndarray) -> int:
    rows = [int("".join(str(int(v)) for v in r), 2) if len(r) else 0 for r in T]
    rank = 0
    while rows:
        piv = max(rows)
        rows.remove(piv)
        if piv == 0:
            break
        rank += 1
        hb = piv.bit_length() - 1
        rows = [r ^ piv if (r >> hb) & 1 else r for r in rows]
    return rank


def f2_pullback_columns(m: int, T: np.ndarray) -> Tuple[int, ...]:
    """Images of the basis forms under mu -> mu o T, as bitmasks."""
    return tuple(TrilinearForm.from_bits(m, 1 << n).transform(T).bits for n in range(alpha(m)))


def apply_columns(columns: Tuple[int, ...], bits: int) -> int:
    out = 0
    n = 0
    while bits:
        if bits & 1:
            out ^= columns[n]
        bits >>= 1
        n += 1
    return out


@lru_cache(maxsize=None)
def _gl_f2_actions(m: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(f2_pullback_columns(m, T) for T in gl_f2(m))


def enumerate_form_automorphisms(mu: TrilinearForm) -> List[FormAutomorphism]:
    """Complete list of form-preserving T over F_2 by scanning GL(m, 2)."""
    if mu.field != F2:
        raise ValueError("exhaustive enumeration is over F_2")
    if mu.m > 4:
        raise ValueError("exhaustive enumeration limited to m <= 4")
    bits = mu.bits
    return [FormAutomorphism(_as_matrix(T), 1, F2)
            for T, cols in zip(gl_f2(mu.m), _gl_f2_actions(mu.m))
            if apply_columns(cols, bits) == bits]
