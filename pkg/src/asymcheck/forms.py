"""Symmetric trilinear forms: storage, evaluation, realizability, sampling.

A form on k^m is stored by its structure constants mu_ijk on sorted index
triples i <= j <= k (1-based).  Over F_2 the same data is also available as
an integer bitmask over the alpha(m) = C(m+2, 3) triples, which is what the
census loops iterate over.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from types import MappingProxyType
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .fields import F2, ZZ, Field
from .linalg import solve_mod
from .polynomial import CubicPolynomial, parse_cubic  # noqa: F401  (re-exported)

Triple = Tuple[int, int, int]

BITPACK_MAX_M = 8


def alpha(m: int) -> int:
    """Number of sorted index triples, i.e. dim of S^3(k^m)."""
    return comb(m + 2, 3)


@lru_cache(maxsize=None)
def sorted_triples(m: int) -> Tuple[Triple, ...]:
    """All 1-based sorted triples in lexicographic order (bit order for F_2)."""
    return tuple(itertools.combinations_with_replacement(range(1, m + 1), 3))


@lru_cache(maxsize=None)
def triple_index(m: int) -> Dict[Triple, int]:
    return {t: n for n, t in enumerate(sorted_triples(m))}


def _sort3(i: int, j: int, k: int) -> Triple:
    if i > j:
        i, j = j, i
    if j > k:
        j, k = k, j
    if i > j:
        i, j = j, i
    return (i, j, k)


class TrilinearForm:
    """Symmetric trilinear form over F_2, F_p or Z.

    Immutable; equality and hashing go by (field, m, entries).
    """

    def __init__(self, field: Field, m: int, entries: Optional[Mapping[Sequence[int], int]] = None):
        if m < 0:
            raise ValueError("m must be non-negative")
        self.field = field
        self.m = int(m)
        clean: Dict[Triple, int] = {}
        for key, value in (entries or {}).items():
            if len(key) != 3:
                raise ValueError(f"entry key {key!r} is not a triple")
            t = _sort3(*(int(v) for v in key))
            if t[0] < 1 or t[2] > m:
                raise ValueError(f"triple {tuple(key)} outside 1..{m}")
            v = field.reduce(value)
            if t in clean and clean[t] != v:
                raise ValueError(f"conflicting values for triple {t}")
            clean[t] = v
        self._entries = {t: v for t, v in sorted(clean.items()) if v != 0}

    # construction helpers

    @classmethod
    def zero(cls, field: Field, m: int) -> "TrilinearForm":
        return cls(field, m)

    @classmethod
    def from_bits(cls, m: int, bits: int) -> "TrilinearForm":
        """F_2 form whose n-th sorted triple has value bit n of ``bits``."""
        triples = sorted_triples(m)
        if bits >> len(triples):
            raise ValueError("bitmask wider than alpha(m)")
        ent = {triples[n]: 1 for n in range(len(triples)) if (bits >> n) & 1}
        form = cls(F2, m, ent)
        form.__dict__["bits"] = bits
        return form

    @classmethod
    def from_tensor(cls, field: Field, tensor) -> "TrilinearForm":
        """Read the sorted-triple entries of a (symmetric) m x m x m array."""
        T = np.asarray(tensor)
        m = T.shape[0]
        ent = {(i + 1, j + 1, k + 1): int(T[i, j, k]) for i, j, k in
               itertools.combinations_with_replacement(range(m), 3)}
        return cls(field, m, ent)

    # accessors

    @property
    def entries(self) -> Mapping[Triple, int]:
        return MappingProxyType(self._entries)

    def coeff(self, i: int, j: int, k: int) -> int:
        return self._entries.get(_sort3(i, j, k), 0)

    @cached_property
    def bits(self) -> int:
        if self.field != F2:
            raise ValueError("bitmask only defined over F_2")
        if self.m > BITPACK_MAX_M:
            raise ValueError(f"bitmask storage limited to m <= {BITPACK_MAX_M}")
        idx = triple_index(self.m)
        return sum(1 << idx[t] for t in self._entries)

    @cached_property
    def tensor(self) -> np.ndarray:
        """Dense symmetric m x m x m array (0-based); object dtype over Z."""
        dtype = object if self.field.is_integral else np.int64
        T = np.zeros((self.m,) * 3, dtype=dtype)
        for (i, j, k), v in self._entries.items():
            for a, b, c in set(itertools.permutations((i - 1, j - 1, k - 1))):
                T[a, b, c] = v
        return T

    def is_zero(self) -> bool:
        return not self._entries

    # evaluation

    def _vec(self, x) -> np.ndarray:
        v = np.asarray(x, dtype=object if self.field.is_integral else np.int64)
        if v.shape != (self.m,):
            raise ValueError(f"vector of length {v.shape} for a form with m={self.m}")
        return v

    def evaluate(self, x, y, z) -> int:
        x, y, z = self._vec(x), self._vec(y), self._vec(z)
        if self.m == 0:
            return 0
        if self.field.is_finite:
            p = self.field.char
            M = (self.tensor.dot(z % p)) % p
            v = (M.dot(y % p)) % p
            return int(v.dot(x % p) % p)
        return int(self.tensor.dot(z).dot(y).dot(x))

    def slice(self, x) -> np.ndarray:
        """The bilinear form mu(x, -, -) as an m x m matrix."""
        x = self._vec(x)
        M = np.tensordot(x, self.tensor, axes=(0, 0))
        return M % self.field.char if self.field.is_finite else M

    def slice_matrix(self) -> np.ndarray:
        """m x m^2 matrix whose row i lists mu(e_i, e_j, e_k)."""
        return self.tensor.reshape(self.m, self.m * self.m)

    # transformations

    def transform(self, T) -> "TrilinearForm":
        """Pull back along T: (x, y, z) -> mu(Tx, Ty, Tz); columns of T are T(e_i)."""
        dtype = object if self.field.is_integral else np.int64
        T = np.asarray(T, dtype=dtype)
        if T.shape != (self.m, self.m):
            raise ValueError("matrix size does not match form")
        R = self.tensor
        for _ in range(3):
            # contract the leading axis, the new axis goes last
            R = np.tensordot(R, T, axes=(0, 0))
            if self.field.is_finite:
                R %= self.field.char
        return TrilinearForm.from_tensor(self.field, R)

    def scale(self, c: int) -> "TrilinearForm":
        return TrilinearForm(self.field, self.m, {t: c * v for t, v in self._entries.items()})

    def reduce_mod(self, p: int) -> "TrilinearForm":
        return reduce_mod(self, p)

    # serialisation

    def to_json(self) -> Dict[str, Any]:
        return {
            "field": self.field.to_json(),
            "m": self.m,
            "entries": [[i, j, k, v] for (i, j, k), v in self._entries.items()],
        }

    @classmethod
    def from_json(cls, obj: Any) -> "TrilinearForm":
        if isinstance(obj, str):
            obj = json.loads(obj)
        field = Field.from_json(obj["field"])
        ent: Dict[Triple, int] = {}
        for row in obj.get("entries", []):
            i, j, k, v = (int(r) for r in row)
            t = _sort3(i, j, k)
            if (i, j, k) != t:
                raise ValueError(f"entry triple {(i, j, k)} is not sorted")
            if t in ent:
                raise ValueError(f"duplicate entry for {t}")
            ent[t] = v
        return cls(field, int(obj["m"]), ent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrilinearForm):
            return NotImplemented
        return (self.field, self.m, self._entries) == (other.field, other.m, other._entries)

    def __hash__(self) -> int:
        return hash((self.field, self.m, tuple(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"mu_{i}{j}{k}={v}" if self.m < 10 else f"mu_{i},{j},{k}={v}"
                         for (i, j, k), v in self._entries.items())
        return f"TrilinearForm({self.field}, m={self.m}{', ' if body else ''}{body})"


def evaluate(mu: TrilinearForm, x, y, z) -> int:
    return mu.evaluate(x, y, z)


def unit_vector(m: int, i: int) -> np.ndarray:
    """e_i for 1-based i."""
    v = np.zeros(m, dtype=np.int64)
    v[i - 1] = 1
    return v


# cubic polynomials

def from_cubic_polynomial(f: CubicPolynomial, field: Field) -> TrilinearForm:
    """Form with mu(x, x, x) = f(x).

    mu_iii = c(x_i^3), mu_iij = c(x_i^2 x_j)/3, mu_ijk = c(x_i x_j x_k)/6.
    Over Z, F_2 and F_3 the divisions must be exact in Z; over F_p (p > 3)
    they are done in the field.
    """
    exact = field.char in (0, 2, 3)
    ent: Dict[Triple, int] = {}
    for exps, c in f.terms.items():
        idx: list[int] = []
        for var, e in enumerate(exps, start=1):
            idx.extend([var] * e)
        t = (idx[0], idx[1], idx[2])
        distinct = len(set(t))
        div = {1: 1, 2: 3, 3: 6}[distinct]
        if exact:
            if c % div:
                mono = "*".join(f"x{v}" for v in t)
                raise ValueError(f"coefficient {c} of {mono} is not divisible by {div}")
            ent[t] = c // div
        else:
            ent[t] = c * field.inverse(div)
    return TrilinearForm(field, f.m, ent)


def to_cubic_polynomial(mu: TrilinearForm) -> CubicPolynomial:
    """Inverse of from_cubic_polynomial for integral forms."""
    mult = {1: 1, 2: 3, 3: 6}
    terms = {}
    for t, v in mu.entries.items():
        exps = [0] * mu.m
        for i in t:
            exps[i - 1] += 1
        terms[tuple(exps)] = mult[len(set(t))] * v
    return CubicPolynomial(mu.m, terms)


def reduce_mod(mu: TrilinearForm, p: int) -> TrilinearForm:
    """Entrywise reduction of an integral (or already mod-p) form to F_p."""
    target = Field(p)
    if mu.field.is_finite and mu.field != target:
        raise ValueError(f"cannot reduce a form over {mu.field} modulo {p}")
    return TrilinearForm(target, mu.m, dict(mu.entries))


# Postnikov realizability for 3-manifolds (F_2 coefficients)

class Postnikov(enum.Enum):
    ORIENTABLE = "Orientable"
    NON_ORIENTABLE = "NonOrientable"
    NOT_REALIZABLE = "NotRealizable"


@dataclass(frozen=True)
class PostnikovClass:
    kind: Postnikov
    x0: Optional[Tuple[int, ...]] = None

    @property
    def realizable(self) -> bool:
        return self.kind is not Postnikov.NOT_REALIZABLE

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"postnikov": self.kind.value}
        if self.x0 is not None:
            out["x0"] = list(self.x0)
        return out


def orientation_defect(mu: TrilinearForm) -> np.ndarray:
    """q(e_i, e_j) = mu_iij + mu_ijj over F_2 (a symmetric bilinear form)."""
    T = mu.tensor
    d = np.einsum("iij->ij", T) if mu.m else np.zeros((0, 0), dtype=np.int64)
    return (d + d.T) % 2


def postnikov_classify(mu: TrilinearForm) -> PostnikovClass:
    if mu.field != F2:
        raise ValueError("Postnikov classification needs a form over F_2")
    q = orientation_defect(mu)
    if not q.any():
        return PostnikovClass(Postnikov.ORIENTABLE)
    m = mu.m
    # unknown x0: sum_a x0_a mu_aij = q_ij for all i, j
    A = mu.tensor.reshape(m, m * m).T
    x0 = solve_mod(A, q.reshape(-1), 2)
    if x0 is None:
        return PostnikovClass(Postnikov.NOT_REALIZABLE)
    return PostnikovClass(Postnikov.NON_ORIENTABLE, tuple(int(v) for v in x0))


# Wall's invariants for simply connected spin 6-manifolds

@dataclass(frozen=True)
class WallInvariants:
    mu: TrilinearForm
    P: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.mu.field.is_integral:
            raise ValueError("Wall invariants are integral")
        object.__setattr__(self, "P", tuple(int(v) for v in self.P))
        if len(self.P) != self.mu.m:
            raise ValueError("P must have one value per basis vector")

    def P_of(self, x) -> int:
        return sum(int(a) * b for a, b in zip(x, self.P))


def wall_admissible(mu: TrilinearForm) -> bool:
    """mu(x,x,y) = mu(x,y,y) mod 2 for all x, y.

    The mod-2 defect is bilinear, so checking mu_iij = mu_ijj (mod 2) on basis
    pairs i < j is enough.
    """
    if not mu.field.is_integral:
        raise ValueError("wall_admissible expects an integral form")
    for i, j in itertools.combinations(range(1, mu.m + 1), 2):
        if (mu.coeff(i, i, j) - mu.coeff(i, j, j)) % 2:
            return False
    return True


def wall_check(inv: WallInvariants) -> bool:
    """Conditions (a) and (b): admissibility and P(e_i) = 4 mu_iii (mod 24).

    Given (a), x -> 4 mu(x,x,x) - P(x) is additive mod 24, since the cross
    terms are 12 (mu(x,x,y) + mu(x,y,y)), so basis vectors suffice.
    """
    if not wall_admissible(inv.mu):
        return False
    return all((p - 4 * inv.mu.coeff(i, i, i)) % 24 == 0 for i, p in enumerate(inv.P, start=1))


# sampling

def random_form(m: int, field: Field, distribution: str | Tuple[str, int] = "uniform",
                seed: Any = None) -> TrilinearForm:
    """Sample a form.

    ``distribution`` is ``"uniform"`` (finite fields: uniform over all p^alpha
    forms) or ``("box", N)`` (integral entries uniform in [-N, N]).
    ``seed`` is anything ``numpy.random.default_rng`` accepts.
    """
    rng = np.random.default_rng(seed)
    n = alpha(m)
    if distribution == "uniform":
        if not field.is_finite:
            raise ValueError("uniform sampling needs a finite field; use ('box', N)")
        vals = rng.integers(0, field.char, size=n)
    else:
        kind, N = distribution
        if kind != "box":
            raise ValueError(f"unknown distribution {distribution!r}")
        if N < 1:
            raise ValueError("box half-width N must be >= 1")
        vals = rng.integers(-N, N + 1, size=n)
    return TrilinearForm(field, m, dict(zip(sorted_triples(m), (int(v) for v in vals))))


def iter_f2_forms(m: int) -> Iterable[TrilinearForm]:
    for bits in range(1 << alpha(m)):
        yield TrilinearForm.from_bits(m, bits)


def iter_box_forms(m: int, N: int) -> Iterable[TrilinearForm]:
    triples = sorted_triples(m)
    for vals in itertools.product(range(-N, N + 1), repeat=len(triples)):
        yield TrilinearForm(ZZ, m, dict(zip(triples, vals)))
