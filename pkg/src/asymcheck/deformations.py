"""Negative-weight deformations of graded F_2 algebras.

A deformation keeps the underlying vector space of A and replaces the
product by x * y = xy + sum_{w >= 1} c_w(x, y), where c_w(x, y) lies in
degree |x| + |y| - w.  It must stay unital, commutative and associative;
its associated graded algebra is A by construction.

It is trivial when some filtered isomorphism g intertwines * with the
original product.  Writing g = h o u with h graded and u unipotent
(u = id + lower-degree terms), h is an automorphism of A and drops out, so
triviality means: u(x * y) = u(x) u(y) for some unipotent u.

The search gauge-fixes: pushing a deformation forward along id + u_w
changes c_w by the coboundary u_w(xy) + u_w(x) y + x u_w(y) and leaves lower
weights alone, so every deformation is equivalent to one whose weight-w
part avoids the pivot coordinates of the coboundary space, for every w.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from .algebra import GradedAlgebra
from .fields import F2
from .linalg import affine_solutions, inverse_mod, rref_mod

Slot = Tuple[int, int, int]  # (x, y, w) with x <= y


class BudgetExceeded(RuntimeError):
    pass


# bitmask helpers

def _bits(v) -> int:
    return sum(1 << i for i, c in enumerate(v) if int(c) % 2)


def _support(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _base_table(A: GradedAlgebra) -> List[List[int]]:
    n = A.dim
    return [[_bits(A.table[x, y]) for y in range(n)] for x in range(n)]


def _degree_masks(A: GradedAlgebra) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for i, d in enumerate(A.degrees):
        out[d] = out.get(d, 0) | (1 << i)
    return out


def _mulv(table: List[List[int]], U: int, V: int) -> int:
    out = 0
    for x in _support(U):
        row = table[x]
        for y in _support(V):
            out ^= row[y]
    return out


@dataclass(frozen=True, eq=False)
class FilteredDeformation:
    """``corrections[(x, y, w)]`` is c_w(e_x, e_y) as a bitmask over the basis (x <= y)."""

    base: GradedAlgebra
    corrections: Mapping[Slot, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "corrections",
                           {k: v for k, v in sorted(self.corrections.items()) if v})

    def product_masks(self) -> List[List[int]]:
        t = _base_table(self.base)
        for (x, y, _w), v in self.corrections.items():
            t[x][y] ^= v
            if x != y:
                t[y][x] ^= v
        return t

    def full_table(self) -> np.ndarray:
        A = self.base
        t = A.table.copy() % 2
        for (x, y, _w), v in self.corrections.items():
            for k in _support(v):
                t[x, y, k] ^= 1
                if x != y:
                    t[y, x, k] ^= 1
        return t

    def is_zero(self) -> bool:
        return not self.corrections

    def to_json(self) -> Dict[str, object]:
        L = self.base.labels
        return {"corrections": [
            {"pair": [L[x], L[y]], "weight": w, "target": {L[k]: 1 for k in _support(v)}}
            for (x, y, w), v in self.corrections.items()]}


def deformation_from_table(A: GradedAlgebra, table: np.ndarray) -> FilteredDeformation:
    """Split a full product table into base product plus weighted corrections."""
    diff = (np.asarray(table, dtype=np.int64) - A.table) % 2
    deg = A.degrees
    corr: Dict[Slot, int] = {}
    for x, y, k in np.argwhere(diff):
        x, y, k = int(x), int(y), int(k)
        w = deg[x] + deg[y] - deg[k]
        if w <= 0:
            raise ValueError("table is not a negative-weight deformation of A")
        if x <= y:
            corr[(x, y, w)] = corr.get((x, y, w), 0) | (1 << k)
    return FilteredDeformation(A, corr)


@dataclass(frozen=True)
class DeformationCheck:
    unital: bool
    commutative: bool
    associative: bool
    lowers_degree: bool

    @property
    def ok(self) -> bool:
        return self.unital and self.commutative and self.associative and self.lowers_degree


def check_deformation(D: FilteredDeformation) -> DeformationCheck:
    """Direct re-verification from the full product table."""
    A = D.base
    t = D.full_table()
    n = A.dim
    eye = np.eye(n, dtype=np.int64)
    unital = bool(np.array_equal(t[0] % 2, eye) and np.array_equal(t[:, 0] % 2, eye))
    commutative = bool(np.array_equal(t, np.transpose(t, (1, 0, 2))))
    left = np.einsum("ijl,lkm->ijkm", t, t) % 2
    right = np.einsum("jkl,ilm->ijkm", t, t) % 2
    associative = bool(np.array_equal(left, right))
    deg = A.degrees
    lowers = all(w >= 1 and deg[x] + deg[y] - w >= 0 and
                 all(deg[k] == deg[x] + deg[y] - w for k in _support(v))
                 for (x, y, w), v in D.corrections.items())
    return DeformationCheck(unital, commutative, associative, lowers)


def associated_graded(D: FilteredDeformation) -> GradedAlgebra:
    """Keep only the degree-preserving part of the deformed product."""
    A = D.base
    t = D.full_table()
    deg = np.array(A.degrees)
    keep = (deg[:, None, None] + deg[None, :, None]) == deg[None, None, :]
    return GradedAlgebra(A.field, A.labels, A.degrees, np.where(keep, t, 0),
                         A.formal_dimension, A.top)


# slots and coboundaries

def _pairs(A: GradedAlgebra) -> List[Tuple[int, int]]:
    return [(x, y) for x in range(1, A.dim) for y in range(x, A.dim)]


def correction_slots(A: GradedAlgebra) -> List[Tuple[Slot, Tuple[int, ...]]]:
    """Every (x, y, w) with a nonzero target degree space, ordered by (w, pair)."""
    out = []
    for w in range(1, 2 * A.formal_dimension + 1):
        for x, y in _pairs(A):
            d = A.degrees[x] + A.degrees[y] - w
            if d >= 0 and A.indices(d):
                out.append(((x, y, w), A.indices(d)))
    return out


def _unipotent_coords(A: GradedAlgebra, w: int) -> List[Tuple[int, int]]:
    return [(x, v) for x in range(1, A.dim) for v in A.indices(A.degrees[x] - w)]


def _coboundary_matrix(A: GradedAlgebra, w: int, coords: List[Tuple[Slot, int]],
                       base: List[List[int]]) -> np.ndarray:
    """Columns: u_w coordinates; rows: weight-w cochain coordinates."""
    ucoords = _unipotent_coords(A, w)
    row_of = {c: i for i, c in enumerate(coords)}
    M = np.zeros((len(coords), len(ucoords)), dtype=np.int64)
    for col, (s, v) in enumerate(ucoords):
        # u = (e_s -> e_v); delta u (x, y) = u(xy) + u(x) y + x u(y)
        for x, y in _pairs(A):
            img = 0
            if (base[x][y] >> s) & 1:
                img ^= 1 << v
            if x == s:
                img ^= base[v][y]
            if y == s:
                img ^= base[x][v]
            for k in _support(img):
                M[row_of[((x, y, w), k)], col] ^= 1
    return M


def gauge_pivots(A: GradedAlgebra) -> Dict[int, set]:
    """Per weight, cochain coordinates ((x, y, w), k) spanned by coboundary pivots."""
    base = _base_table(A)
    slots = correction_slots(A)
    out: Dict[int, set] = {}
    for w in sorted({s[2] for s, _ in slots}):
        coords = [(s, k) for s, targets in slots if s[2] == w for k in targets]
        M = _coboundary_matrix(A, w, coords, base)
        if M.size == 0 or not M.any():
            out[w] = set()
            continue
        _, pivots = rref_mod(M.T, 2)
        out[w] = {coords[c] for c in pivots}
    return out


# triviality

def _unipotent_solve(A: GradedAlgebra, star: List[List[int]], base: List[List[int]],
                     max_nodes: int) -> Optional[Dict[int, List[int]]]:
    """Find u = id + u_1 + u_2 + ... with u(x * y) = u(x) u(y), weight by weight."""
    deg = A.degrees
    n = A.dim
    masks = _degree_masks(A)
    pairs = [(x, y) for x in range(1, n) for y in range(x, n)]
    max_w = 2 * A.formal_dimension
    # star split by weight
    star_w: Dict[int, List[List[int]]] = {}
    for w in range(0, max_w + 1):
        tw = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                d = deg[x] + deg[y] - w
                tw[x][y] = star[x][y] & masks.get(d, 0) if d >= 0 else 0
        star_w[w] = tw
    nodes = [0]

    def apply(u: List[int], V: int) -> int:
        out = 0
        for i in _support(V):
            out ^= u[i]
        return out

    def rec(w: int, us: Dict[int, List[int]]) -> Optional[Dict[int, List[int]]]:
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise BudgetExceeded("triviality search exceeded its node budget")
        if w > max_w:
            return us
        ucoords = _unipotent_coords(A, w)
        rows: List[List[int]] = []
        rhs: List[int] = []
        for x, y in pairs:
            d = deg[x] + deg[y] - w
            if d < 0 or d not in masks:
                continue
            # known part: sum_{w1 < w} u_w1(c_{w - w1}(x, y)) + sum_{0 < w1 < w} u_w1(x) u_{w - w1}(y)
            known = 0
            for w1 in range(0, w):
                known ^= apply(us[w1], star_w[w - w1][x][y])
            for w1 in range(1, w):
                known ^= _mulv(base, us[w1][x], us[w - w1][y])
            known &= masks[d]
            coeff_cols = []
            for s, v in ucoords:
                img = 0
                if (base[x][y] >> s) & 1:
                    img ^= 1 << v
                if x == s:
                    img ^= base[v][y]
                if y == s:
                    img ^= base[x][v]
                coeff_cols.append(img & masks[d])
            for k in _support(masks[d]):
                rows.append([(c >> k) & 1 for c in coeff_cols])
                rhs.append((known >> k) & 1)
        if not ucoords:
            if any(rhs):
                return None
            us[w] = [0] * n
            return rec(w + 1, us)
        M = np.array(rows, dtype=np.int64).reshape(len(rows), len(ucoords))
        for sol in affine_solutions(M, np.array(rhs, dtype=np.int64), 2):
            uw = [0] * n
            for val, (s, v) in zip(sol, ucoords):
                if val:
                    uw[s] |= 1 << v
            found = rec(w + 1, {**us, w: uw})
            if found is not None:
                return found
        return None

    identity = [1 << i for i in range(n)]
    return rec(1, {0: identity})


def is_trivial_deformation(D: FilteredDeformation, max_nodes: int = 200_000) -> bool:
    A = D.base
    if A.field != F2:
        raise ValueError("deformations are handled over F_2 only")
    return _unipotent_solve(A, D.product_masks(), _base_table(A), max_nodes) is not None


def trivializing_map(D: FilteredDeformation, max_nodes: int = 200_000) -> Optional[np.ndarray]:
    """Matrix (column convention) of a unipotent u with u(x * y) = u(x) u(y)."""
    A = D.base
    us = _unipotent_solve(A, D.product_masks(), _base_table(A), max_nodes)
    if us is None:
        return None
    U = np.zeros((A.dim, A.dim), dtype=np.int64)
    for x in range(A.dim):
        img = 0
        for w, uw in us.items():
            img ^= uw[x]
        for k in _support(img):
            U[k, x] = 1
    return U


def push_forward(A: GradedAlgebra, g) -> FilteredDeformation:
    """x * y := g(g^-1 x . g^-1 y) for a unipotent g (column convention)."""
    g = np.asarray(g, dtype=np.int64) % 2
    ginv = inverse_mod(g, 2)
    n = A.dim
    table = np.zeros_like(A.table)
    for x in range(n):
        for y in range(n):
            prod = A.mul(ginv[:, x], ginv[:, y])
            table[x, y] = (g @ prod) % 2
    return deformation_from_table(A, table)


def random_unipotent(A: GradedAlgebra, rng: np.random.Generator) -> np.ndarray:
    n = A.dim
    g = np.eye(n, dtype=np.int64)
    for x in range(1, n):
        for k in range(n):
            if A.degrees[k] < A.degrees[x]:
                g[k, x] = rng.integers(0, 2)
    return g


# search

class SearchStatus(enum.Enum):
    EXHAUSTED_NONE_NONTRIVIAL = "ExhaustedNoneNontrivial"
    WITNESS = "Witness"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass
class DeformationResult:
    status: SearchStatus
    witness: Optional[FilteredDeformation] = None
    reason: str = ""
    solutions: int = 0
    visited_nodes: int = 0
    pruned_leaves: int = 0
    total_leaves: int = 0

    def to_json(self) -> Dict[str, object]:
        out: Dict[str, object] = {"status": self.status.value, "solutions": self.solutions,
                                  "visited_nodes": self.visited_nodes}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


class DeformationSearch:
    """Backtracking over correction slots with weight-graded associativity checks.

    Slots are visited in (weight, pair) order.  The degree |x|+|y|+|z|-W part
    of the associator of (x, y, z) only involves corrections of weight <= W,
    and among weight-W slots only (x,y), (y,z), (v,z) for v in supp(xy) and
    (x,v) for v in supp(yz); it is checked as soon as those are assigned.
    """

    def __init__(self, A: GradedAlgebra, gauge: bool = True, max_nodes: int = 2_000_000):
        if A.field != F2:
            raise ValueError("deformations are handled over F_2 only")
        self.A = A
        self.max_nodes = max_nodes
        self.base = _base_table(A)
        self.masks = _degree_masks(A)
        pivots = gauge_pivots(A) if gauge else {}
        self.slots: List[Slot] = []
        self.coords: List[Tuple[int, ...]] = []
        for s, targets in correction_slots(A):
            free = tuple(k for k in targets if (s, k) not in pivots.get(s[2], set()))
            if free:
                self.slots.append(s)
                self.coords.append(free)
        self.total_leaves = 1
        for c in self.coords:
            self.total_leaves *= 1 << len(c)
        self._register_checks()

    def _register_checks(self) -> None:
        A, deg, base = self.A, self.A.degrees, self.base
        pos = {s: i for i, s in enumerate(self.slots)}
        self.root_checks: List[Tuple[int, int, int, int]] = []
        self.checks: List[List[Tuple[int, int, int, int]]] = [[] for _ in self.slots]
        max_w = max((s[2] for s in self.slots), default=0)

        def before(w: int) -> int:
            # index of the last slot with weight < w, or -1
            best = -1
            for i, s in enumerate(self.slots):
                if s[2] < w:
                    best = i
            return best

        key = lambda a, b, w: pos.get((min(a, b), max(a, b), w))  # noqa: E731
        rng = range(1, A.dim)
        for x, y, z in itertools.product(rng, rng, rng):
            D = deg[x] + deg[y] + deg[z]
            for W in range(0, D + 1):
                if (D - W) not in self.masks:
                    continue
                deps = [key(x, y, W), key(y, z, W)]
                deps += [key(v, z, W) for v in _support(base[x][y]) if v]
                deps += [key(x, v, W) for v in _support(base[y][z]) if v]
                deps = [d for d in deps if d is not None]
                at = max(deps) if deps else (before(W) if W <= max_w else len(self.slots) - 1)
                check = (x, y, z, self.masks[D - W])
                if at < 0:
                    self.root_checks.append(check)
                else:
                    self.checks[at].append(check)

    def _star(self, x: int, y: int) -> int:
        return self.base[x][y] ^ self.corr[x][y]

    def _starv(self, U: int, z: int) -> int:
        out = 0
        for v in _support(U):
            out ^= self.corr[v][z] ^ self.base[v][z]
        return out

    def _ok(self, checks) -> bool:
        for x, y, z, mask in checks:
            left = self._starv(self._star(x, y), z)
            right = self._starv(self._star(y, z), x)
            if (left ^ right) & mask:
                return False
        return True

    def solutions(self) -> Iterator[FilteredDeformation]:
        """Every associative gauge-fixed correction assignment, in search order."""
        n = self.A.dim
        self.corr = [[0] * n for _ in range(n)]
        self.visited_nodes = 0
        self.pruned_leaves = 0
        self.found = 0
        remaining = [1] * (len(self.slots) + 1)
        for i in range(len(self.slots) - 1, -1, -1):
            remaining[i] = remaining[i + 1] << len(self.coords[i])
        values: List[int] = [0] * len(self.slots)
        if not self._ok(self.root_checks):
            self.pruned_leaves = self.total_leaves
            return

        def rec(i: int) -> Iterator[FilteredDeformation]:
            if i == len(self.slots):
                self.found += 1
                yield FilteredDeformation(self.A, {s: v for s, v in zip(self.slots, values)})
                return
            x, y, _ = self.slots[i]
            coords = self.coords[i]
            for choice in range(1 << len(coords)):
                self.visited_nodes += 1
                if self.visited_nodes > self.max_nodes:
                    raise BudgetExceeded(f"search exceeded {self.max_nodes} nodes")
                v = 0
                for b, k in enumerate(coords):
                    if (choice >> b) & 1:
                        v |= 1 << k
                values[i] = v
                self.corr[x][y] ^= v
                if x != y:
                    self.corr[y][x] ^= v
                if self._ok(self.checks[i]):
                    yield from rec(i + 1)
                else:
                    self.pruned_leaves += remaining[i + 1]
                self.corr[x][y] ^= v
                if x != y:
                    self.corr[y][x] ^= v
            values[i] = 0

        yield from rec(0)


def deformation_search(A: GradedAlgebra, budget: int = 8, max_nodes: int = 2_000_000,
                       gauge: bool = True) -> DeformationResult:
    """First nontrivial negative-weight deformation of A, or exhaustion.

    ``budget`` bounds the basis dimension of A; larger algebras, and searches
    that exceed ``max_nodes``, report BUDGET_EXCEEDED instead of guessing.
    """
    if A.dim > budget:
        return DeformationResult(SearchStatus.BUDGET_EXCEEDED,
                                 reason=f"basis dimension {A.dim} exceeds budget {budget}")
    search = DeformationSearch(A, gauge=gauge, max_nodes=max_nodes)
    result = DeformationResult(SearchStatus.EXHAUSTED_NONE_NONTRIVIAL,
                               total_leaves=search.total_leaves)
    try:
        for D in search.solutions():
            result.solutions += 1
            if not is_trivial_deformation(D):
                result.status = SearchStatus.WITNESS
                result.witness = D
                break
    except BudgetExceeded as exc:
        result.status = SearchStatus.BUDGET_EXCEEDED
        result.reason = str(exc)
    result.visited_nodes = search.visited_nodes
    result.pruned_leaves = search.pruned_leaves
    return result
