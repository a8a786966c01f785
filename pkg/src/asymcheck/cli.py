"""Command-line interface: ``asymcheck <subcommand> ...``.

Exit codes: 0 success, 1 when an assertive check fails (verify-iarrobino),
2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

from .algebra import GradedAlgebra, generated_by_degree, six_manifold_algebra, three_manifold_algebra
from .automorphisms import find_order_q_automorphism
from .census import (CHECKS, CensusConfig, CertifyOptions, certify_form, env_workers,
                     run_census)
from .deformations import deformation_search
from .derivations import PreconditionError, derivation_space, lemma1_criterion
from .fields import F2, ZZ, Field
from .fixtures import (IARROBINO_M, form_diff, iarrobino_form,
                       iarrobino_form_literal, iarrobino_repeats, iarrobino_table_form)
from .forms import (TrilinearForm, from_cubic_polynomial, postnikov_classify, reduce_mod,
                    wall_admissible)
from .polynomial import CubicParseError, max_variable_index, monomial_str, parse_cubic


class UsageError(Exception):
    pass


def _dump(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"))


# form input

def _parse_entry(text: str):
    try:
        lhs, rhs = text.split("=")
        i, j, k = (int(v) for v in lhs.split(","))
        return (i, j, k), int(rhs)
    except ValueError:
        raise UsageError(f"bad entry {text!r}; expected i,j,k=v") from None


def _read_input(arg: str) -> Any:
    text = arg
    if not arg.lstrip().startswith("{"):
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {arg}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON input: {exc}") from None


def form_from_args(args) -> TrilinearForm:
    field = Field.parse(args.field) if args.field else None
    if args.input:
        obj = _read_input(args.input)
        if field is not None and "field" not in obj:
            obj = {**obj, "field": field.to_json()}
        return TrilinearForm.from_json(obj)
    field = field or F2
    if args.poly:
        m = args.m if args.m is not None else max_variable_index(args.poly)
        return from_cubic_polynomial(parse_cubic(args.poly, m), field)
    if args.m is None:
        raise UsageError("give --m with --entries, or --poly, or --input")
    ent: Dict = {}
    for e in args.entries or []:
        t, v = _parse_entry(e)
        if t in ent:
            raise UsageError(f"entry {t} given twice")
        ent[t] = v
    return TrilinearForm(field, args.m, ent)


def _finite(mu: TrilinearForm, p: Optional[int]) -> TrilinearForm:
    if mu.field.is_finite:
        if p is not None and p != mu.field.char:
            raise UsageError(f"form is over {mu.field}, not F{p}")
        return mu
    return reduce_mod(mu, p or 2)


def _algebra(mu: TrilinearForm, shape: str, s: int) -> GradedAlgebra:
    if shape == "threefold":
        return three_manifold_algebra(mu)
    return six_manifold_algebra(mu, s)


# subcommands

def cmd_classify(args) -> int:
    mu = form_from_args(args)
    if mu.field == F2:
        print(_dump(postnikov_classify(mu).to_json()))
    elif mu.field == ZZ:
        print(_dump({"wall_admissible": wall_admissible(mu)}))
    else:
        raise UsageError("classify expects --field f2 (Postnikov) or --field int (Wall)")
    return 0


def cmd_derive(args) -> int:
    mu = _finite(form_from_args(args), args.p)
    A = _algebra(mu, args.shape, args.s)
    out: Dict[str, Any] = {"field": mu.field.to_json(), "shape": args.shape,
                           "unit_constrained": args.unit_constrained, "degrees": {}}
    for r in range(-1, -A.formal_dimension - 1, -1):
        space = derivation_space(A, r, args.unit_constrained)
        out["degrees"][str(r)] = {"dimension": space.dimension,
                                  "basis": [D.to_json() for D in space.basis]}
    if args.shape == "sixfold" and mu.field == F2 and args.s == 0:
        try:
            w = lemma1_criterion(A)
            out["hyperplane"] = w.to_json() if w else None
        except PreconditionError as exc:
            out["hyperplane"] = f"not applicable: {exc}"
    print(_dump(out))
    return 0


def cmd_autos(args) -> int:
    mu = _finite(form_from_args(args), args.p)
    auto = find_order_q_automorphism(mu, args.q, args.epsilon)
    print(_dump({"q": args.q, "epsilon": args.epsilon,
                 "automorphism": auto.to_json() if auto else None}))
    return 0


def cmd_deform(args) -> int:
    mu = _finite(form_from_args(args), 2)
    A = _algebra(mu, args.shape, args.s)
    print(_dump(deformation_search(A, budget=args.budget).to_json()))
    return 0


def cmd_certify(args) -> int:
    mu = form_from_args(args)
    p = args.p or (mu.field.char if mu.field.is_finite else 2)
    opts = CertifyOptions(shape=args.shape, p=p, q=args.q, s=args.s, budget=args.budget,
                          deformation=not args.no_deformation)
    rec = certify_form(mu, opts)
    if args.format == "text":
        print(rec.text())
    else:
        print(json.dumps(rec.to_json(), sort_keys=True))
    return 0


def cmd_census(args) -> int:
    if args.config:
        cfg_obj = _read_input(args.config)
        if args.workers is not None:
            cfg_obj["workers"] = args.workers
        cfg_obj.setdefault("workers", env_workers())
        config = CensusConfig.from_json(cfg_obj)
    else:
        if args.m is None:
            raise UsageError("census needs --m (or --config)")
        field = Field.parse(args.field) if args.field else (ZZ if args.mode == "box" else F2)
        mode = args.mode or ("box" if field == ZZ else "exhaustive")
        checks = {c: c not in (args.disable or []) for c in CHECKS}
        config = CensusConfig(
            m=args.m, field=field, mode=mode,
            count=args.count, seed=args.seed, box_n=args.box_n, box_sample=args.box_sample,
            checks=checks, q_list=tuple(args.q or ((2,) if field != ZZ else (2, 3))),
            budget=args.budget,
            workers=args.workers if args.workers is not None else env_workers())
    report = run_census(config)
    text = report.to_csv() if args.format == "csv" else report.dumps()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_parse(args) -> int:
    m = args.m if args.m is not None else max_variable_index(args.poly)
    field = Field.parse(args.field) if args.field else ZZ
    mu = from_cubic_polynomial(parse_cubic(args.poly, m), field)
    print(_dump(mu.to_json()))
    return 0


def verify_iarrobino() -> List[tuple]:
    """(ok, line) for each claim checked on the bundled example."""
    lines = []
    repeats = ", ".join(monomial_str(e) for e in iarrobino_repeats())
    mu = iarrobino_form()
    lines.append((mu.m == IARROBINO_M,
                  f"parsed bundled polynomial: m={mu.m}, repeated monomials counted once ({repeats})"))
    mod2 = reduce_mod(mu, 2)
    diff = form_diff(mod2, iarrobino_table_form())
    lines.append((not diff, "mod-2 form equals the table mu_124 = mu_125 = mu_136 = mu_246 = "
                            "mu_356 = mu_456 = 1, all others 0"
                  + ("" if not diff else f"; diff {diff}")))
    A = six_manifold_algebra(mod2)
    gen = generated_by_degree(A, 2)
    lines.append((gen, "mod 2, A^2 generates A^*"))
    w = lemma1_criterion(A) if gen else None
    lines.append((gen and w is None, "hyperplane criterion fails for all 63 hyperplanes"
                  + ("" if w is None else f"; witness {w.to_json()}")))
    dims = {r: derivation_space(A, r).dimension for r in range(-1, -7, -1)}
    lines.append((not any(dims.values()),
                  "no nonzero derivation of degree -1..-6 mod 2"
                  + ("" if not any(dims.values()) else f"; dimensions {dims}")))
    lines.append((wall_admissible(mu), "integral form is Wall-admissible"))
    return lines


def cmd_verify_iarrobino(args) -> int:
    results = verify_iarrobino()
    for ok, line in results:
        print(f"[{'ok' if ok else 'FAIL'}] {line}")
    literal = form_diff(reduce_mod(iarrobino_form_literal(), 2), iarrobino_table_form())
    if literal:
        print(f"note: literal reading (repeats summed) differs mod 2 at {sorted(literal)}",
              file=sys.stderr)
    return 0 if all(ok for ok, _ in results) else 1


# argument parsing

def _form_args(p: argparse.ArgumentParser, default_field: Optional[str] = None) -> None:
    p.add_argument("--field", default=default_field, help="f2 | fp:P | int")
    p.add_argument("--m", type=int)
    p.add_argument("--entries", action="append", metavar="i,j,k=v")
    p.add_argument("--poly", help="cubic polynomial, e.g. 'x1^2*x2 + x2^3'")
    p.add_argument("--input", help="form JSON (path or inline)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asymcheck",
                                 description="Asymmetry obstructions for trilinear forms.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Postnikov class (F_2) or Wall admissibility (int)")
    _form_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("derive", help="negative-degree derivation spaces")
    _form_args(p)
    p.add_argument("--shape", choices=("threefold", "sixfold"), default="threefold")
    p.add_argument("--s", type=int, default=0, help="half of b_3 (sixfold)")
    p.add_argument("--p", type=int, help="reduce an integral form mod p (default 2)")
    p.add_argument("--unit-constrained", action="store_true")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("autos", help="search for an automorphism of prime order")
    _form_args(p)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--epsilon", type=int, choices=(1, -1), default=1)
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_autos)

    p = sub.add_parser("deform", help="negative-weight deformation search over F_2")
    _form_args(p)
    p.add_argument("--shape", choices=("threefold", "sixfold"), default="threefold")
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--budget", type=int, default=8)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("certify", help="status of conditions (i)-(iv)")
    _form_args(p)
    p.add_argument("--shape", choices=("threefold", "sixfold"), default="threefold")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--budget", type=int, default=8)
    p.add_argument("--no-deformation", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("census", help="enumerate or sample a population of forms")
    p.add_argument("--config", help="census config JSON (path or inline)")
    p.add_argument("--field")
    p.add_argument("--m", type=int)
    p.add_argument("--mode", choices=("exhaustive", "sample", "box"))
    p.add_argument("--count", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--box-n", type=int, default=1)
    p.add_argument("--box-sample", action="store_true")
    p.add_argument("--q", type=int, action="append", help="prime for automorphism checks")
    p.add_argument("--disable", action="append", choices=CHECKS)
    p.add_argument("--budget", type=int, default=8)
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify-iarrobino", help="check the bundled six-variable example")
    p.set_defaults(func=cmd_verify_iarrobino)

    p = sub.add_parser("parse", help="cubic polynomial to form JSON")
    p.add_argument("poly")
    p.add_argument("--m", type=int)
    p.add_argument("--field")
    p.set_defaults(func=cmd_parse)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CubicParseError, PreconditionError, ValueError) as exc:
        print(f"asymcheck: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
