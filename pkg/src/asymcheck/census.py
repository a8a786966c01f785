"""Populations of forms, the obstruction pipeline, and exact densities.

Counts are exact integers aggregated in a fixed order, ratios are exact
fractions, and reports carry no timing or worker information, so a rerun
with the same configuration is byte-identical whatever the parallelism.

Exhaustive F_2 threefold censuses evaluate one representative per
GL(m, 2)-orbit and weight it by the orbit size.  Every predicate in the
pipeline is invariant under a change of basis, so the counts equal the
per-form counts (the test suite checks this against the plain loop).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (GradedAlgebra, cup_length, form_nondegenerate, generated_by_degree,
                      halved_degrees, six_manifold_algebra, three_manifold_algebra)
from .automorphisms import f2_pullback_columns, find_order_q_automorphism
from .deformations import SearchStatus, deformation_search
from .derivations import derivation_space, lemma1_criterion
from .fields import F2, ZZ, Field, Fp, is_prime
from .forms import (Postnikov, TrilinearForm, alpha, postnikov_classify, reduce_mod,
                    sorted_triples, wall_admissible)

MAX_EXHAUSTIVE_3M = 4
MAX_BOX_POINTS = 1 << 24
DEFAULT_SAMPLE = 10_000
CHECKS = ("involution", "order_q", "derivation", "deformation", "nondegeneracy")


def env_workers(default: int = 1) -> int:
    raw = os.environ.get("ASYMCHECK_WORKERS")
    if raw is None or raw == "":
        return default
    n = int(raw)
    if n < 1:
        raise ValueError("ASYMCHECK_WORKERS must be a positive integer")
    return n


# certification of a single form

PASSED, FAILED, UNKNOWN, SKIPPED = "Passed", "Failed", "Unknown", "Skipped"


@dataclass(frozen=True)
class ConditionStatus:
    status: str
    detail: Any = None

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"status": self.status}
        if self.detail is not None:
            out["witness" if self.status == FAILED else "reason"] = self.detail
        return out


CERTIFICATION_NOTE = (
    "Conditions are checked on the cohomology algebra only; this is not a proof "
    "about any manifold. Condition (iv) is a sufficient proxy (nondegeneracy and "
    "cup length), not a decision of minimal formal dimension. Automorphism checks "
    "report 'no obstruction found mod p' over the searched field only.")


@dataclass(frozen=True)
class CertificationRecord:
    shape: str
    field: Field
    conditions: Dict[str, ConditionStatus]

    @property
    def label(self) -> str:
        states = [c.status for c in self.conditions.values() if c.status != SKIPPED]
        if FAILED in states:
            return "Obstructed"
        if UNKNOWN in states:
            return "Unknown"
        return "Certified-candidate"

    def to_json(self) -> Dict[str, Any]:
        return {"shape": self.shape, "field": self.field.to_json(), "label": self.label,
                "conditions": {k: v.to_json() for k, v in self.conditions.items()},
                "note": CERTIFICATION_NOTE}

    def text(self) -> str:
        lines = [f"{self.shape} algebra over {self.field}: {self.label}"]
        for k, v in self.conditions.items():
            extra = f" ({v.detail})" if v.detail is not None else ""
            lines.append(f"  ({k}) {v.status}{extra}")
        lines.append("  " + CERTIFICATION_NOTE)
        return "\n".join(lines)


@dataclass(frozen=True)
class CertifyOptions:
    shape: str = "threefold"
    p: int = 2
    q: int = 2
    s: int = 0
    budget: int = 8
    deformation: bool = True
    max_nodes: int = 200_000


def _first_derivation(A: GradedAlgebra) -> Optional[Dict[str, Any]]:
    for r in range(-1, -A.formal_dimension - 1, -1):
        space = derivation_space(A, r)
        if space.dimension:
            return space.basis[0].to_json()
    return None


def _condition_deformation(A: GradedAlgebra, opts: CertifyOptions) -> ConditionStatus:
    if not opts.deformation:
        return ConditionStatus(SKIPPED, "deformation check disabled")
    if A.field != F2:
        return ConditionStatus(UNKNOWN, "deformations are searched over F_2 only")
    res = deformation_search(A, budget=opts.budget, max_nodes=opts.max_nodes)
    if res.status is SearchStatus.WITNESS:
        return ConditionStatus(FAILED, res.witness.to_json())
    if res.status is SearchStatus.BUDGET_EXCEEDED:
        return ConditionStatus(UNKNOWN, f"budget: {res.reason}")
    return ConditionStatus(PASSED)


def _involution_status(mu: TrilinearForm, q: int) -> ConditionStatus:
    witnesses = []
    for eps in ((1,) if mu.field.char == 2 else (1, -1)):
        auto = find_order_q_automorphism(mu, q, eps)
        if auto is not None:
            witnesses.append(auto.to_json())
    if witnesses:
        return ConditionStatus(FAILED, witnesses)
    return ConditionStatus(PASSED, f"no order-{q} automorphism found mod {mu.field.char}")


def certify_form(mu: TrilinearForm, options: Optional[CertifyOptions] = None) -> CertificationRecord:
    """Status of the four conditions for the threefold or sixfold algebra of mu."""
    opts = options or CertifyOptions()
    p = opts.p
    if not is_prime(p) or not is_prime(opts.q):
        raise ValueError("p and q must be prime")
    base = mu if mu.field.is_finite and mu.field.char == p else reduce_mod(mu, p)
    cond: Dict[str, ConditionStatus] = {}
    if opts.shape == "threefold":
        if p != 2:
            raise ValueError("threefold forms are taken over F_2")
        A = three_manifold_algebra(base)
        cond["i"] = _involution_status(base, opts.q)
        w = _first_derivation(A)
        cond["ii"] = ConditionStatus(FAILED, w) if w else ConditionStatus(PASSED)
        cond["iii"] = _condition_deformation(A, opts)
        cond["iv"] = (ConditionStatus(PASSED, "proxy: form nondegenerate")
                      if form_nondegenerate(base) else
                      ConditionStatus(UNKNOWN, "proxy-only: form is degenerate"))
    elif opts.shape == "sixfold":
        A = six_manifold_algebra(base, opts.s)
        if opts.s and opts.q == 2:
            # identity on even degrees, -1 (or a swap mod 2) on degree 3
            cond["i"] = ConditionStatus(FAILED, "involution acting on degree 3 only")
        elif opts.s:
            inner = _involution_status(base, opts.q)
            cond["i"] = inner if inner.status == FAILED else ConditionStatus(
                UNKNOWN, "degree-3 symplectic part not searched")
        else:
            cond["i"] = _involution_status(base, opts.q)
        w = _first_derivation(A)
        if w:
            detail: Dict[str, Any] = {"derivation": w}
            if p == 2 and opts.s == 0 and generated_by_degree(A, 2):
                lw = lemma1_criterion(A)
                if lw is not None:
                    detail["hyperplane"] = lw.to_json()
            cond["ii"] = ConditionStatus(FAILED, detail)
        else:
            cond["ii"] = ConditionStatus(PASSED)
        cond["iii"] = _condition_deformation(A, opts)
        cond["iv"] = _sixfold_minimality(A, base, opts)
    else:
        raise ValueError(f"unknown shape {opts.shape!r}")
    return CertificationRecord(opts.shape, base.field, cond)


def _sixfold_minimality(A: GradedAlgebra, mu: TrilinearForm, opts: CertifyOptions) -> ConditionStatus:
    if opts.p == 2 and opts.s == 0:
        # mod 2 the ungraded algebra is also a formal-dimension-3 algebra
        half = halved_degrees(A)
        cls = postnikov_classify(mu)
        if half is not None and cls.realizable:
            return ConditionStatus(FAILED, "halved-degree algebra (formal dim 3) is realizable: "
                                           f"postnikov {cls.kind.value}")
        return ConditionStatus(UNKNOWN, "proxy-only: no lower-dimensional model found mod 2")
    if form_nondegenerate(mu) and cup_length(A) == 3:
        return ConditionStatus(PASSED, "proxy: nondegenerate form and cup length 3")
    return ConditionStatus(UNKNOWN, "proxy-only: degenerate form or cup length below 3")


# configuration and reports

@dataclass
class CensusConfig:
    m: int
    field: Field = F2
    mode: str = "exhaustive"  # exhaustive | sample | box
    count: int = DEFAULT_SAMPLE
    seed: int = 0
    box_n: int = 1
    box_sample: bool = False
    checks: Dict[str, bool] = dc_field(default_factory=lambda: {c: True for c in CHECKS})
    q_list: Tuple[int, ...] = (2,)
    budget: int = 8
    workers: int = 1
    orbit_reduction: bool = True

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "sample", "box"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "box" and self.field != ZZ:
            raise ValueError("box populations are integral")
        if self.mode != "box" and self.field == ZZ:
            raise ValueError("integral populations need box mode")
        for c in self.checks:
            if c not in CHECKS:
                raise ValueError(f"unknown check {c!r}")
        self.checks = {c: bool(self.checks.get(c, True)) for c in CHECKS}
        if any(not is_prime(q) for q in self.q_list):
            raise ValueError("q_list must contain primes")
        self.q_list = tuple(sorted(set(self.q_list)))
        if self.workers < 1:
            raise ValueError("workers must be positive")

    def enabled(self, check: str) -> bool:
        return self.checks[check]

    def to_json(self) -> Dict[str, Any]:
        """Everything that affects results; workers deliberately excluded."""
        out: Dict[str, Any] = {"m": self.m, "field": self.field.to_json(), "mode": self.mode,
                               "checks": dict(self.checks), "q_list": list(self.q_list),
                               "budget": self.budget}
        if self.mode == "sample":
            out.update(count=self.count, seed=self.seed)
        if self.mode == "box":
            out.update(N=self.box_n, sampled=self.box_sample)
            if self.box_sample:
                out.update(count=self.count, seed=self.seed)
        return out

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "CensusConfig":
        kw = dict(obj)
        if "field" in kw:
            kw["field"] = Field.from_json(kw["field"])
        if "N" in kw:
            kw["box_n"] = kw.pop("N")
        if "sampled" in kw:
            kw["box_sample"] = kw.pop("sampled")
        if "q_list" in kw:
            kw["q_list"] = tuple(kw["q_list"])
        return cls(**kw)


def _frac(num: int, den: int) -> Optional[str]:
    if den == 0:
        return None
    return str(Fraction(num, den))


@dataclass
class CensusReport:
    kind: str
    config: CensusConfig
    counts: Dict[str, Any]
    ratios: Dict[str, Optional[str]]
    metadata: Dict[str, Any]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "config": self.config.to_json(), "counts": self.counts,
                "ratios": self.ratios, "metadata": self.metadata}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def rows(self) -> List[Tuple[int, str, int, int, Optional[str]]]:
        """(m, predicate, numerator, denominator, ratio) rows."""
        out = []
        for name, (num, den) in sorted(self.metadata["fractions"].items()):
            out.append((self.config.m, name, num, den, _frac(num, den)))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "predicate", "numerator", "denominator", "ratio"])
        for row in self.rows():
            w.writerow(["" if v is None else v for v in row])
        return buf.getvalue()


# populations

def _orbit_representatives(m: int) -> List[Tuple[int, int]]:
    """(least bitmask, orbit size) for every GL(m, 2)-orbit of forms."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    n = alpha(m)
    size = 1 << n
    if m == 0:
        return [(0, 1), (1, 1)] if n else [(0, 1)]
    states = np.arange(size, dtype=np.int64)
    gens = []
    for i in range(m - 1):
        for a, b in ((i, i + 1), (i + 1, i)):
            T = np.eye(m, dtype=np.int64)
            T[a, b] = 1
            gens.append(T)
    if m == 1:
        gens = [np.eye(1, dtype=np.int64)]
    rows, cols = [], []
    for T in gens:
        columns = f2_pullback_columns(m, T)
        image = np.zeros(size, dtype=np.int64)
        for start in range(0, n, 8):
            chunk = columns[start:start + 8]
            table = np.zeros(1 << len(chunk), dtype=np.int64)
            for v in range(1 << len(chunk)):
                acc = 0
                for b, col in enumerate(chunk):
                    if (v >> b) & 1:
                        acc ^= col
                table[v] = acc
            image ^= table[(states >> start) & ((1 << len(chunk)) - 1)]
        rows.append(states)
        cols.append(image)
    g = coo_matrix((np.ones(size * len(gens), dtype=np.int8),
                    (np.concatenate(rows), np.concatenate(cols))), shape=(size, size))
    _, labels = connected_components(g, directed=True, connection="weak")
    first = {}
    sizes: Dict[int, int] = {}
    for s, lab in enumerate(labels.tolist()):
        if lab not in first:
            first[lab] = s
        sizes[lab] = sizes.get(lab, 0) + 1
    return sorted((first[lab], sizes[lab]) for lab in first)


def _sample_bits(m: int, seed: int, index: int) -> int:
    rng = np.random.default_rng([seed, index])
    vals = rng.integers(0, 2, size=alpha(m))
    return sum(int(v) << n for n, v in enumerate(vals))


def _sample_box(m: int, N: int, seed: int, index: int) -> Tuple[int, ...]:
    rng = np.random.default_rng([seed, index])
    return tuple(int(v) for v in rng.integers(-N, N + 1, size=alpha(m)))


# per-form evaluation

def _eval_threefold(bits: int, m: int, checks: Dict[str, bool], q_list: Sequence[int],
                    budget: int) -> Dict[str, int]:
    mu = TrilinearForm.from_bits(m, bits)
    out: Dict[str, int] = {"scanned": 1}
    cls = postnikov_classify(mu)
    if not cls.realizable:
        return out
    out["realizable"] = 1
    out["R_orientable" if cls.kind is Postnikov.ORIENTABLE else "R_nonorientable"] = 1
    opts = CertifyOptions(shape="threefold", budget=budget, deformation=checks["deformation"])
    states = {}
    if checks["involution"]:
        states["i"] = _involution_status(mu, 2).status
        if states["i"] == FAILED:
            out["with_involution"] = 1
    if checks["order_q"]:
        for q in q_list:
            if q == 2 and checks["involution"]:
                found = states["i"] == FAILED
            else:
                found = find_order_q_automorphism(mu, q) is not None
            if found:
                out[f"with_order_{q}"] = 1
    A = three_manifold_algebra(mu)
    if checks["derivation"]:
        has = any(derivation_space(A, r).dimension for r in range(-1, -4, -1))
        states["ii"] = FAILED if has else PASSED
        if has:
            out["with_negative_derivation"] = 1
    if checks["deformation"]:
        st = _condition_deformation(A, opts).status
        states["iii"] = st
        out[{PASSED: "deformation_none", FAILED: "deformation_witness",
             UNKNOWN: "deformation_unknown"}[st]] = 1
    if checks["nondegeneracy"]:
        nd = form_nondegenerate(mu)
        states["iv"] = PASSED if nd else UNKNOWN
        if nd:
            out["nondegenerate"] = 1
    vals = set(states.values())
    label = "obstructed" if FAILED in vals else "unknown" if UNKNOWN in vals else "certified"
    out[label] = 1
    return out


def _eval_threefold_chunk(args) -> Dict[str, int]:
    items, m, checks, q_list, budget = args
    total: Dict[str, int] = {}
    for bits, weight in items:
        for k, v in _eval_threefold(bits, m, checks, q_list, budget).items():
            total[k] = total.get(k, 0) + v * weight
    return total


def _eval_sixfold(values: Tuple[int, ...], m: int, checks: Dict[str, bool],
                  q_list: Sequence[int], budget: int) -> Dict[str, int]:
    mu = TrilinearForm(ZZ, m, dict(zip(sorted_triples(m), values)))
    out: Dict[str, int] = {"scanned": 1}
    if not wall_admissible(mu):
        return out
    out["realizable"] = 1
    if checks["nondegeneracy"]:
        if form_nondegenerate(mu) and cup_length(six_manifold_algebra(mu)) == 3:
            out["nondegenerate_cup3"] = 1
    for p in q_list:
        mp = reduce_mod(mu, p)
        A = six_manifold_algebra(mp)
        states = {}
        pre = f"p{p}_"
        if checks["order_q"] or (checks["involution"] and p == 2):
            plus = find_order_q_automorphism(mp, p, 1) is not None
            minus = plus if p == 2 else find_order_q_automorphism(mp, p, -1) is not None
            if plus:
                out[pre + "with_order_p_plus"] = 1
            if minus:
                out[pre + "with_order_p_minus"] = 1
            states["i"] = FAILED if (plus or minus) else PASSED
        if checks["derivation"]:
            has = any(derivation_space(A, r).dimension for r in range(-1, -7, -1))
            states["ii"] = FAILED if has else PASSED
            if has:
                out[pre + "with_negative_derivation"] = 1
            if p == 2 and generated_by_degree(A, 2):
                out[pre + "generated_by_A2"] = 1
                if lemma1_criterion(A) is not None:
                    out[pre + "hyperplane_witness"] = 1
        if checks["deformation"]:
            if p == 2:
                st = _condition_deformation(A, CertifyOptions(shape="sixfold", budget=budget)).status
            else:
                st = UNKNOWN
            states["iii"] = st
            out[pre + {PASSED: "deformation_none", FAILED: "deformation_witness",
                       UNKNOWN: "deformation_unknown"}[st]] = 1
        if checks["nondegeneracy"]:
            states["iv"] = _sixfold_minimality(A, mp, CertifyOptions(shape="sixfold", p=p)).status
        vals = set(states.values())
        label = "obstructed" if FAILED in vals else "unknown" if UNKNOWN in vals else "certified"
        out[pre + label] = 1
    return out


def _eval_sixfold_chunk(args) -> Dict[str, int]:
    items, m, checks, q_list, budget = args
    total: Dict[str, int] = {}
    for values in items:
        for k, v in _eval_sixfold(values, m, checks, q_list, budget).items():
            total[k] = total.get(k, 0) + v
    return total


def _run_chunks(fn, chunks: List[Any], workers: int) -> Dict[str, int]:
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(fn, chunks))
    else:
        results = [fn(c) for c in chunks]
    total: Dict[str, int] = {}
    for r in results:
        for k, v in r.items():
            total[k] = total.get(k, 0) + v
    return dict(sorted(total.items()))


def _chunked(items: List[Any], n: int) -> List[List[Any]]:
    size = max(1, math.ceil(len(items) / max(1, n * 4)))
    return [items[i:i + size] for i in range(0, len(items), size)]


# censuses

_3M_KEYS = ("scanned", "realizable", "R_orientable", "R_nonorientable", "with_involution",
            "with_negative_derivation", "deformation_none", "deformation_witness",
            "deformation_unknown", "nondegenerate", "certified", "obstructed", "unknown")


def census_3m(config: CensusConfig) -> CensusReport:
    """Threefold census over F_2 (exhaustive for m <= 4, otherwise sampled)."""
    if config.field != F2:
        raise ValueError("threefold censuses are over F_2")
    m = config.m
    if config.mode == "exhaustive":
        if m > MAX_EXHAUSTIVE_3M:
            raise ValueError(f"exhaustive threefold census limited to m <= {MAX_EXHAUSTIVE_3M} "
                             f"(2^{alpha(m)} forms); use mode='sample'")
        if config.orbit_reduction:
            items = _orbit_representatives(m)
        else:
            items = [(b, 1) for b in range(1 << alpha(m))]
    elif config.mode == "sample":
        items = [(_sample_bits(m, config.seed, i), 1) for i in range(config.count)]
    else:
        raise ValueError("threefold censuses use exhaustive or sample mode")
    chunks = [(c, m, config.checks, config.q_list, config.budget)
              for c in _chunked(items, config.workers)]
    raw = _run_chunks(_eval_threefold_chunk, chunks, config.workers)
    counts: Dict[str, Any] = {k: raw.get(k, 0) for k in _3M_KEYS}
    counts["with_order_q"] = {str(q): raw.get(f"with_order_{q}", 0) for q in config.q_list}
    R = counts["realizable"]
    fractions = {
        "realizable": (R, counts["scanned"]),
        "I_alg": (counts["with_involution"], R),
        "negative_derivation": (counts["with_negative_derivation"], R),
        "nondegenerate": (counts["nondegenerate"], R),
        "certified": (counts["certified"], R),
        "cert_complement": (R - counts["certified"], R),
    }
    for q in config.q_list:
        fractions[f"order_{q}"] = (counts["with_order_q"][str(q)], R)
    return _finish("census_3m", config, counts, fractions,
                   orbit_reduced=config.mode == "exhaustive" and config.orbit_reduction,
                   orbits=len(items) if config.mode == "exhaustive" else None)


def census_6m(config: CensusConfig) -> CensusReport:
    """Sixfold census over the integral box [-N, N]^alpha(m)."""
    if config.field != ZZ or config.mode != "box":
        raise ValueError("sixfold censuses use an integral box")
    m, N = config.m, config.box_n
    if N < 1:
        raise ValueError("box half-width must be >= 1")
    if config.box_sample:
        items = [_sample_box(m, N, config.seed, i) for i in range(config.count)]
    else:
        points = (2 * N + 1) ** alpha(m)
        if points > MAX_BOX_POINTS:
            raise ValueError(f"box has {points} points (> 2^24); sample it instead")
        import itertools
        items = list(itertools.product(range(-N, N + 1), repeat=alpha(m)))
    chunks = [(c, m, config.checks, config.q_list, config.budget)
              for c in _chunked(items, config.workers)]
    raw = _run_chunks(_eval_sixfold_chunk, chunks, config.workers)
    counts: Dict[str, Any] = {"scanned": raw.get("scanned", 0),
                              "realizable": raw.get("realizable", 0),
                              "nondegenerate_cup3": raw.get("nondegenerate_cup3", 0)}
    R = counts["realizable"]
    fractions = {"realizable": (R, counts["scanned"]),
                 "nondegenerate_cup3": (counts["nondegenerate_cup3"], R)}
    per = {}
    keys = ("with_order_p_plus", "with_order_p_minus", "with_negative_derivation",
            "generated_by_A2", "hyperplane_witness", "deformation_none", "deformation_witness",
            "deformation_unknown", "certified", "obstructed", "unknown")
    for p in config.q_list:
        per[str(p)] = {k: raw.get(f"p{p}_{k}", 0) for k in keys}
        for k in ("with_order_p_plus", "with_order_p_minus", "with_negative_derivation", "certified"):
            fractions[f"p{p}_{k}"] = (per[str(p)][k], R)
    counts["per_prime"] = per
    return _finish("census_6m", config, counts, fractions, orbit_reduced=False, orbits=None)


def _finish(kind: str, config: CensusConfig, counts: Dict[str, Any],
            fractions: Dict[str, Tuple[int, int]], orbit_reduced: bool,
            orbits: Optional[int]) -> CensusReport:
    ratios = {k: _frac(n, d) for k, (n, d) in sorted(fractions.items())}
    meta: Dict[str, Any] = {
        "fractions": {k: [n, d] for k, (n, d) in sorted(fractions.items())},
        "orbit_reduced": orbit_reduced,
        "finite_approximant": "finite-m / finite-N values only; no limit is computed",
        "I_alg": "forms whose algebra has a nontrivial graded involution; not the count of "
                 "forms realized by manifolds with involutions",
        "measure": "raw form counting on S^3(F_2^m) or the box [-N, N]^alpha(m)",
    }
    if orbits is not None:
        meta["evaluated_representatives"] = orbits
    if config.mode == "sample" or config.box_sample:
        meta["confidence"] = {k: _half_width(n, d) for k, (n, d) in sorted(fractions.items())}
        meta["confidence_formula"] = "1.96 * sqrt(p_hat * (1 - p_hat) / n)"
    return CensusReport(kind, config, counts, ratios, meta)


def _half_width(n: int, d: int) -> Optional[float]:
    if d == 0:
        return None
    ph = n / d
    return round(1.96 * math.sqrt(ph * (1 - ph) / d), 12)


def run_census(config: CensusConfig) -> CensusReport:
    return census_6m(config) if config.mode == "box" else census_3m(config)


# densities

PREDICATES = {
    "everything": None,
    "realizable": "realizable",
    "wall-admissible": "realizable",
    "has-involution": "I_alg",
    "has-negative-derivation": "negative_derivation",
    "nondegenerate": "nondegenerate",
    "certified": "certified",
}


@dataclass(frozen=True)
class DensityEstimate:
    predicate: str
    value: Fraction
    numerator: int
    denominator: int
    note: str
    half_width: Optional[float] = None

    def to_json(self) -> Dict[str, Any]:
        out = {"predicate": self.predicate, "value": str(self.value),
               "numerator": self.numerator, "denominator": self.denominator, "note": self.note}
        if self.half_width is not None:
            out["half_width_95"] = self.half_width
        return out


def density_estimate(predicate: str, m: int, N: Optional[int] = None,
                     sample: Optional[Tuple[int, int]] = None, workers: int = 1) -> DensityEstimate:
    """Exact ratio over a finite population.

    With ``N`` the population is the integral box [-N, N]^alpha(m) (sixfold
    reading); otherwise all F_2 forms (threefold reading).  ``sample`` is
    (count, seed).  "realizable"/"wall-admissible" are relative to the whole
    population, every other predicate to the realizable forms.
    """
    if predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {predicate!r}; choose from {sorted(PREDICATES)}")
    if predicate == "everything":
        return DensityEstimate(predicate, Fraction(1), 1, 1, "trivially the whole population")
    if predicate == "wall-admissible" and N is None:
        raise ValueError("wall-admissible needs an integral box (N)")
    key = PREDICATES[predicate]
    needed = {"I_alg": "involution", "negative_derivation": "derivation",
              "nondegenerate": "nondegeneracy"}.get(key)
    checks = {c: (c == needed) for c in CHECKS}
    if key == "certified":
        checks = {c: True for c in CHECKS}
    if N is not None:
        if key not in ("realizable", "nondegenerate"):
            raise ValueError(f"predicate {predicate!r} is defined for F_2 threefold populations")
        if key == "nondegenerate":
            key = "nondegenerate_cup3"
        cfg = CensusConfig(m=m, field=ZZ, mode="box", box_n=N, box_sample=sample is not None,
                           count=sample[0] if sample else DEFAULT_SAMPLE,
                           seed=sample[1] if sample else 0, checks=checks, workers=workers)
    else:
        cfg = CensusConfig(m=m, field=F2, mode="sample" if sample else "exhaustive",
                           count=sample[0] if sample else DEFAULT_SAMPLE,
                           seed=sample[1] if sample else 0, checks=checks, workers=workers)
    report = run_census(cfg)
    num, den = report.metadata["fractions"][key]
    value = Fraction(num, den) if den else Fraction(0)
    if sample:
        return DensityEstimate(predicate, value, num, den, f"sample of {sample[0]} forms, seed {sample[1]}",
                               _half_width(num, den))
    return DensityEstimate(predicate, value, num, den, "exact over the finite population")
