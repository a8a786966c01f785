import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from asymcheck.algebra import three_manifold_algebra
from asymcheck.automorphisms import enumerate_form_automorphisms, find_involution, gl_f2
from asymcheck.census import (CHECKS, CensusConfig, CertifyOptions, census_3m, census_6m,
                              certify_form, density_estimate, env_workers, run_census,
                              _orbit_representatives)
from asymcheck.deformations import SearchStatus, deformation_search
from asymcheck.fields import F2, ZZ
from asymcheck.fixtures import iarrobino_form, iarrobino_table_form
from asymcheck.forms import TrilinearForm, alpha, postnikov_classify

from oracles import f2_involutions, postnikov_brute_force, preserved_by

FROZEN_3M = {
    1: {"scanned": 2, "realizable": 2, "R_orientable": 2, "R_nonorientable": 0,
        "with_involution": 0, "with_negative_derivation": 2, "deformation_none": 0,
        "deformation_witness": 2, "deformation_unknown": 0, "nondegenerate": 1,
        "certified": 0, "obstructed": 2, "unknown": 0, "with_order_q": {"2": 0}},
    2: {"scanned": 16, "realizable": 14, "R_orientable": 8, "R_nonorientable": 6,
        "with_involution": 8, "with_negative_derivation": 10, "deformation_none": 0,
        "deformation_witness": 14, "deformation_unknown": 0, "nondegenerate": 10,
        "certified": 0, "obstructed": 14, "unknown": 0, "with_order_q": {"2": 8}},
    3: {"scanned": 1024, "realizable": 478, "R_orientable": 128, "R_nonorientable": 350,
        "with_involution": 310, "with_negative_derivation": 128, "deformation_none": 0,
        "deformation_witness": 478, "deformation_unknown": 0, "nondegenerate": 400,
        "certified": 0, "obstructed": 478, "unknown": 0, "with_order_q": {"2": 310}},
    4: {"scanned": 1048576, "realizable": 132094, "R_orientable": 16384, "R_nonorientable": 115710,
        "with_involution": 118654, "with_negative_derivation": 7206, "deformation_none": 0,
        "deformation_witness": 0, "deformation_unknown": 132094, "nondegenerate": 125728,
        "certified": 0, "obstructed": 118654, "unknown": 13440, "with_order_q": {"2": 118654}},
}


def f2(m, *triples):
    return TrilinearForm(F2, m, {t: 1 for t in triples})


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_frozen_threefold_counts(m):
    assert census_3m(CensusConfig(m=m)).counts == FROZEN_3M[m]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_orbit_reduction_matches_plain_scan(m):
    a = census_3m(CensusConfig(m=m))
    b = census_3m(CensusConfig(m=m, orbit_reduction=False))
    assert a.counts == b.counts and a.ratios == b.ratios


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_orbits_partition_forms(m):
    reps = _orbit_representatives(m)
    assert sum(w for _, w in reps) == 1 << alpha(m)
    assert len({b for b, _ in reps}) == len(reps)


def test_verdicts_constant_on_orbits():
    rng = np.random.default_rng(44)
    group = gl_f2(4)
    for _ in range(60):
        mu = TrilinearForm.from_bits(4, int(rng.integers(1 << alpha(4))))
        T = group[int(rng.integers(len(group)))]
        nu = mu.transform(T)
        assert postnikov_classify(mu).kind == postnikov_classify(nu).kind
        assert (find_involution(mu) is None) == (find_involution(nu) is None)
        assert any(a.order == 2 for a in enumerate_form_automorphisms(mu)) == \
            (find_involution(mu) is not None)


# straight-line oracle: no pruning, no orbit reduction, no parallelism

def _leibniz_maps(A, r):
    n = A.dim
    free = [(u, v) for u in range(n) for v in range(n) if A.degrees[v] == A.degrees[u] + r]
    t = A.table % 2
    for vals in itertools.product((0, 1), repeat=len(free)):
        if not any(vals):
            continue
        D = np.zeros((n, n), dtype=np.int64)
        for val, (u, v) in zip(vals, free):
            D[u, v] = val
        lhs = np.einsum("xyk,kl->xyl", t, D) % 2
        rhs = (np.einsum("xa,ayl->xyl", D, t) + np.einsum("ya,xal->xyl", D, t)) % 2
        if np.array_equal(lhs, rhs):
            yield D


def _nondegenerate(mu):
    for x in itertools.product((0, 1), repeat=mu.m):
        if any(x) and not (np.einsum("a,abc->bc", np.array(x), mu.tensor) % 2).any():
            return False
    return True


def _straight_line(m):
    counts = dict.fromkeys(FROZEN_3M[m], 0)
    invs = f2_involutions(m)
    for bits in range(1 << alpha(m)):
        mu = TrilinearForm.from_bits(m, bits)
        counts["scanned"] += 1
        kind, _ = postnikov_brute_force(mu)
        if kind == "NotRealizable":
            continue
        counts["realizable"] += 1
        counts["R_orientable" if kind == "Orientable" else "R_nonorientable"] += 1
        inv = any(preserved_by(mu.tensor, T) for T in invs)
        counts["with_involution"] += inv
        A = three_manifold_algebra(mu)
        der = any(next(_leibniz_maps(A, r), None) is not None for r in (-1, -2, -3))
        counts["with_negative_derivation"] += der
        dres = deformation_search(A).status
        counts[{SearchStatus.WITNESS: "deformation_witness",
                SearchStatus.EXHAUSTED_NONE_NONTRIVIAL: "deformation_none",
                SearchStatus.BUDGET_EXCEEDED: "deformation_unknown"}[dres]] += 1
        nd = _nondegenerate(mu)
        counts["nondegenerate"] += nd
        if inv or der or dres is SearchStatus.WITNESS:
            counts["obstructed"] += 1
        elif dres is SearchStatus.BUDGET_EXCEEDED or not nd:
            counts["unknown"] += 1
        else:
            counts["certified"] += 1
    counts["with_order_q"] = {"2": counts["with_involution"]}
    return counts


@pytest.mark.parametrize("m", [1, 2])
def test_straight_line_oracle(m):
    assert _straight_line(m) == census_3m(CensusConfig(m=m)).counts


@pytest.mark.parametrize("m", [2, 3])
def test_partition_consistency(m):
    c = census_3m(CensusConfig(m=m)).counts
    assert c["certified"] + c["obstructed"] + c["unknown"] == c["realizable"]
    assert c["R_orientable"] + c["R_nonorientable"] == c["realizable"]
    assert c["deformation_none"] + c["deformation_witness"] + c["deformation_unknown"] == c["realizable"]


def test_ratios_exact():
    r = census_3m(CensusConfig(m=2))
    assert r.ratios["I_alg"] == "4/7"
    assert r.metadata["fractions"]["I_alg"] == [8, 14]
    assert r.ratios["realizable"] == "7/8"


def test_workers_byte_identical():
    cfg = dict(m=2, mode="sample", count=40, seed=11)
    one = run_census(CensusConfig(workers=1, **cfg)).dumps()
    two = run_census(CensusConfig(workers=2, **cfg)).dumps()
    assert one == two
    box = dict(m=2, field=ZZ, mode="box", box_n=1, q_list=(2, 3))
    assert census_6m(CensusConfig(workers=1, **box)).dumps() == \
        census_6m(CensusConfig(workers=2, **box)).dumps()


def test_sample_deterministic_and_seeded():
    a = run_census(CensusConfig(m=5, mode="sample", count=30, seed=1, checks={"deformation": False}))
    b = run_census(CensusConfig(m=5, mode="sample", count=30, seed=1, checks={"deformation": False}))
    assert a.dumps() == b.dumps()
    assert a.counts["scanned"] == 30
    assert "confidence" in a.metadata and "confidence_formula" in a.metadata


def test_prefix_stability_of_samples():
    short = run_census(CensusConfig(m=3, mode="sample", count=10, seed=4))
    longer = run_census(CensusConfig(m=3, mode="sample", count=20, seed=4))
    assert short.counts["realizable"] <= longer.counts["realizable"]


def test_more_checks_never_add_certified():
    subsets = [dict(zip(CHECKS, flags)) for flags in itertools.product((False, True), repeat=len(CHECKS))]
    certified = {}
    for checks in subsets:
        key = frozenset(k for k, v in checks.items() if v)
        certified[key] = census_3m(CensusConfig(m=2, checks=checks)).counts["certified"]
    for a in certified:
        for b in certified:
            if a <= b:
                assert certified[b] <= certified[a]


def test_refusals():
    with pytest.raises(ValueError):
        census_3m(CensusConfig(m=5))
    with pytest.raises(ValueError):
        census_6m(CensusConfig(m=4, field=ZZ, mode="box", box_n=4))
    with pytest.raises(ValueError):
        CensusConfig(m=2, field=ZZ)
    with pytest.raises(ValueError):
        CensusConfig(m=2, mode="box")
    with pytest.raises(ValueError):
        CensusConfig(m=2, checks={"bogus": True})
    with pytest.raises(ValueError):
        CensusConfig(m=2, q_list=(4,))


def test_sixfold_small_box():
    r = census_6m(CensusConfig(m=1, field=ZZ, mode="box", box_n=1))
    assert r.counts["scanned"] == 3 and r.counts["realizable"] == 3


def test_sixfold_m2_box():
    r = census_6m(CensusConfig(m=2, field=ZZ, mode="box", box_n=1, q_list=(2, 3)))
    c = r.counts
    assert (c["scanned"], c["realizable"], c["nondegenerate_cup3"]) == (81, 45, 36)
    assert r.ratios["realizable"] == "5/9"
    p2, p3 = c["per_prime"]["2"], c["per_prime"]["3"]
    assert (p2["with_order_p_plus"], p2["with_negative_derivation"], p2["generated_by_A2"]) == (45, 21, 24)
    assert p2["hyperplane_witness"] == 0
    assert (p3["with_order_p_plus"], p3["with_order_p_minus"], p3["with_negative_derivation"]) == (13, 1, 5)
    for per in c["per_prime"].values():
        assert per["certified"] + per["obstructed"] + per["unknown"] == c["realizable"]


def test_densities():
    assert density_estimate("wall-admissible", 2, N=1).value == Fraction(5, 9)
    assert density_estimate("everything", 7).value == 1
    assert density_estimate("has-involution", 1).value == 0
    assert density_estimate("has-involution", 2).value == Fraction(4, 7)
    with pytest.raises(ValueError):
        density_estimate("nonsense", 2)
    est = density_estimate("realizable", 3, sample=(50, 2))
    assert est.half_width is not None and est.denominator == 50


def test_config_json_round_trip():
    cfg = CensusConfig(m=3, mode="sample", count=12, seed=9, q_list=(3, 2), workers=3)
    js = cfg.to_json()
    assert "workers" not in js and js["q_list"] == [2, 3]
    back = CensusConfig.from_json(json.loads(json.dumps(js)))
    assert back.to_json() == js


def test_csv():
    csv = census_3m(CensusConfig(m=2)).to_csv().splitlines()
    assert csv[0] == "m,predicate,numerator,denominator,ratio"
    assert "2,I_alg,8,14,4/7" in csv


def test_env_workers(monkeypatch):
    monkeypatch.setenv("ASYMCHECK_WORKERS", "3")
    assert env_workers() == 3
    monkeypatch.setenv("ASYMCHECK_WORKERS", "0")
    with pytest.raises(ValueError):
        env_workers()
    monkeypatch.delenv("ASYMCHECK_WORKERS")
    assert env_workers(2) == 2


# certification records

def test_certify_zero_form():
    rec = certify_form(TrilinearForm.zero(F2, 2))
    assert rec.conditions["i"].status == "Failed"
    assert rec.label == "Obstructed"
    assert "not a proof" in rec.text()


def test_certify_mixed_term():
    mu = f2(2, (1, 1, 2))
    rec = certify_form(mu)
    assert rec.conditions["i"].status == "Passed"
    six = certify_form(mu, CertifyOptions(shape="sixfold"))
    assert six.conditions["ii"].status == "Failed"
    assert "hyperplane" in six.conditions["ii"].detail


def test_certify_iarrobino():
    rec = certify_form(iarrobino_form(), CertifyOptions(shape="sixfold", p=2))
    assert rec.field == F2
    assert rec.conditions["ii"].status == "Passed"
    assert rec.conditions["iii"].status == "Unknown"
    assert rec.conditions["iv"].status == "Failed"
    js = json.loads(json.dumps(rec.to_json()))
    assert js["label"] == rec.label
    assert certify_form(iarrobino_table_form(), CertifyOptions(shape="sixfold")).to_json() == rec.to_json()


def test_certify_iarrobino_odd_prime():
    rec = certify_form(iarrobino_form(), CertifyOptions(shape="sixfold", p=3, q=3, deformation=False))
    assert rec.conditions["iii"].status == "Skipped"
    assert rec.conditions["ii"].status == "Passed"
    assert rec.conditions["iv"].status == "Passed"


def test_skipped_checks_do_not_certify_more():
    mu = f2(3, (1, 1, 1), (2, 2, 2), (3, 3, 3))
    full = certify_form(mu)
    lean = certify_form(mu, CertifyOptions(deformation=False))
    order = {"Obstructed": 0, "Unknown": 1, "Certified-candidate": 2}
    assert order[full.label] <= order[lean.label]


def test_certify_bad_options():
    with pytest.raises(ValueError):
        certify_form(f2(1), CertifyOptions(p=4))
    with pytest.raises(ValueError):
        certify_form(f2(1), CertifyOptions(shape="fourfold"))
