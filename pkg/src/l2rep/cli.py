"""Batch command-line front end.

Every run is pinned by an explicit configuration (field, ring kind, budgets,
seed); reports are JSON by default, embed that configuration together with a
content hash of the inputs, and are byte-identical across repeat runs.  CSV
is available as a lossy flat export for the tabular subcommands.

Exit codes: 0 success, 2 configuration error, 3 budget exceeded, 4
mathematical discrepancy (a verified expectation failed; never expected).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .cache import DiskCache, cache_key
from .centralizer import centralizer_basis, check_reduction_surjectivity, weyr_pattern
from .characters import extension_mode, verify_extension
from .chartable import MatrixGroup, character_degrees
from .clifford import (DIRECT_BUDGET, CountReport, clifford_distribution,
                       compare_rings, direct_distribution)
from .errors import BudgetExceededError, MathDiscrepancyError, UsageError
from .fields import FiniteField
from .matrices import Matrix, group_order, GroupSpec
from .orbits import enumerate_orbits
from .rings import KINDS, WITT, LocalRing
from .serialize import (config_dict, element_to_text, matrix_from_obj,
                        matrix_to_obj)
from .splitting import lift_order_search
from .stabilizer import coset_stabilizer
from .weyr import WeyrStructure, is_weyr_form, weyr_decompose, weyr_structure_of

TABULAR = {"orbits", "char-degrees", "extension-check", "count-irreps", "compare"}


def _env(name: str, fallback=None):
    return os.environ.get("L2REP_" + name.upper().replace("-", "_"), fallback)


def _parse_modulus(text):
    if text is None:
        return None
    try:
        return tuple(int(c) for c in str(text).split(","))
    except ValueError:
        raise UsageError(f"modulus must be comma-separated integers: {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="l2rep",
        description="Irreducible representation counts of SL_n over length-two "
                    "local rings, with the structural checks behind them.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kind_default=None):
        p.add_argument("--n", type=int, default=_env("n"),
                       help="matrix size n")
        p.add_argument("--p", type=int, default=_env("p"),
                       help="residue characteristic")
        p.add_argument("--f", type=int, default=_env("f", 1),
                       help="extension degree, q = p^f (default 1)")
        p.add_argument("--modulus", default=_env("modulus"),
                       help="field modulus as comma-separated coefficients, "
                            "constant term first (default: built-in choice)")
        p.add_argument("--kind", choices=KINDS, default=_env("kind", kind_default),
                       help="length-two ring kind")
        p.add_argument("--budget-elements", type=int,
                       default=_env("budget_elements"),
                       help="cap on elements any single enumeration may touch")
        p.add_argument("--workers", type=int, default=_env("workers", 1),
                       help="worker count (orchestration is sequential; "
                            "accepted for interface stability)")
        p.add_argument("--cache-dir", default=_env("cache_dir"),
                       help="directory for the on-disk result cache")
        p.add_argument("--format", choices=("json", "csv"),
                       default=_env("format", "json"), help="report format")
        p.add_argument("--out", default=_env("out"),
                       help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=_env("seed", 0),
                       help="seed for sampled modes")

    def matrix_in(p):
        p.add_argument("--matrix", help="input matrix as inline JSON")
        p.add_argument("--matrix-file",
                       help="file with the input matrix as JSON ('-' = stdin)")

    p = sub.add_parser("weyr", help="Weyr decomposition of a matrix over F_q")
    common(p)
    matrix_in(p)

    p = sub.add_parser("centralizer",
                       help="centraliser dimension, pattern, and reduction "
                            "surjectivity for a Weyr-form matrix")
    common(p, kind_default=WITT)
    matrix_in(p)

    p = sub.add_parser("stabilizer",
                       help="coset stabiliser C_S(x+Z) with shift, permutation, "
                            "and lifted witnesses")
    common(p, kind_default=WITT)
    matrix_in(p)

    p = sub.add_parser("orbits",
                       help="conjugation orbits of M_n(F_q)/Z under SL_n(F_q)")
    common(p)
    p.add_argument("--stab-gens", action="store_true",
                   help="include Schreier stabiliser generators per orbit")

    p = sub.add_parser("char-degrees",
                       help="irreducible character degrees of a matrix group")
    common(p)
    p.add_argument("--generators", help="JSON list of generator matrices")
    p.add_argument("--elements", help="JSON list of all group elements")
    p.add_argument("--prime", type=int, action="append",
                   help="working prime override for the degree oracle "
                            "(repeatable)")

    p = sub.add_parser("extension-check",
                       help="per-orbit kernel character extension verdicts")
    common(p, kind_default=WITT)
    p.add_argument("--rounds", type=int, default=200,
                   help="sampling rounds in sampled mode")

    p = sub.add_parser("count-irreps",
                       help="irreducible dimension distribution of SL_n over "
                            "the length-two ring")
    common(p, kind_default=WITT)
    p.add_argument("--method", choices=("clifford", "direct"),
                   default="clifford")

    p = sub.add_parser("compare",
                       help="dimension distributions for both ring kinds, "
                            "plus direct enumeration when feasible")
    common(p)

    p = sub.add_parser("splitting",
                       help="search for an order-p lift of a transvection")
    common(p, kind_default=WITT)
    p.add_argument("--rounds", type=int, default=500,
                   help="sampling rounds beyond the exhaustive budget")

    p = sub.add_parser("reproduce-all",
                       help="run the full acceptance suite and print a "
                            "summary table")
    common(p)
    p.add_argument("--only", action="append",
                   help="restrict to one criterion, by number or name "
                        "(repeatable)")

    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name} is required for this subcommand")


def _field_of(args) -> FiniteField:
    _require(args, "p")
    return FiniteField.get(int(args.p), int(args.f or 1),
                           _parse_modulus(args.modulus))


def _ring_of(args) -> LocalRing:
    kind = args.kind or WITT
    return LocalRing.get(_field_of(args), kind)


def _read_matrix(args, scalars) -> Matrix:
    data = None
    if getattr(args, "matrix", None):
        data = args.matrix
    elif getattr(args, "matrix_file", None):
        if args.matrix_file == "-":
            data = sys.stdin.read()
        else:
            try:
                with open(args.matrix_file, "r", encoding="utf-8") as fh:
                    data = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read matrix file: {exc}") from None
    else:
        if sys.stdin.isatty():
            raise UsageError("no matrix given; use --matrix, --matrix-file, "
                             "or pipe JSON on stdin")
        data = sys.stdin.read()
    if not data or not data.strip():
        raise UsageError("empty matrix input")
    return matrix_from_obj(scalars, data)


def _element_obj(e):
    return None if e is None else element_to_text(e)


def _counts_items(dist):
    return [{"dim": d, "count": c} for d, c in dist.as_sorted_items()]


def _report_obj(report: CountReport) -> dict:
    F = report.field
    return {
        "n": report.n,
        "p": F.p,
        "f": F.f,
        "kind": report.kind,
        "method": report.method,
        "counts": _counts_items(report.total),
        "orbits": [
            {
                "rep": matrix_to_obj(c.rep),
                "size": c.orbit_size,
                "stabilizer_order": c.stabilizer_order,
                "index": c.index,
                "extension_mode": c.extension_mode,
                "degrees": _counts_items(c.degrees),
            }
            for c in report.orbits
        ],
    }


# -- subcommand bodies -------------------------------------------------------
#
# Each returns (result-dict, extra-input-for-hash, exit-code).


def _cmd_weyr(args):
    F = _field_of(args)
    x = _read_matrix(args, F)
    kw = {}
    if args.budget_elements:
        kw["budget"] = int(args.budget_elements)
    dec = weyr_decompose(x, **kw)
    st = dec.structure
    result = {
        "field": config_dict(st.field),
        "blocks": [{"eigenvalue": element_to_text(a), "partition": list(part)}
                   for a, part in st.blocks],
        "g": matrix_to_obj(dec.g),
        "W": matrix_to_obj(dec.W),
    }
    return result, matrix_to_obj(x), 0


def _cmd_centralizer(args):
    F = _field_of(args)
    kind = args.kind or WITT
    x = _read_matrix(args, F)
    if not is_weyr_form(x):
        raise UsageError("matrix is not in Weyr form; run the weyr subcommand "
                         "first and feed W back in")
    alg = centralizer_basis(x)
    st = weyr_structure_of(x)
    pattern = []
    for a, part in st.blocks:
        pat = weyr_pattern(WeyrStructure(st.field, ((a, part),)))
        pattern.append({
            "eigenvalue": element_to_text(a),
            "factors": [[d, e] for d, e in pat.lambda_partition],
            "offdiag_positions": sorted(map(list, pat.offdiag_positions)),
        })
    kw = {}
    if args.budget_elements:
        kw["budget"] = int(args.budget_elements)
    rep = check_reduction_surjectivity(x, kind, **kw)
    result = {
        "dimension": alg.field_dimension(),
        "pattern": pattern,
        "group_order_residue": rep.group_size_residue,
        "group_order_ring": rep.group_size_ring,
        "surjective": rep.surjective,
    }
    code = 0 if rep.surjective else 4
    return result, matrix_to_obj(x), code


def _cmd_stabilizer(args):
    F = _field_of(args)
    kind = args.kind or WITT
    x = _read_matrix(args, F)
    kw = {}
    if args.budget_elements:
        kw["budget"] = int(args.budget_elements)
    data = coset_stabilizer(x, kind=kind, **kw)
    result = {
        "lambda": _element_obj(data.shift),
        "sigma": list(data.sigma) if data.sigma is not None else None,
        "v": matrix_to_obj(data.v),
        "w": matrix_to_obj(data.w),
        "order_v": data.order_v,
        "centralizer_order": len(data.centralizer),
        "coset_stabilizer_order": len(data.coset_elements),
        "index": data.index,
    }
    return result, matrix_to_obj(x), 0


def _cmd_orbits(args):
    _require(args, "n")
    F = _field_of(args)
    n = int(args.n)
    kw = {}
    if args.budget_elements:
        kw["budget"] = int(args.budget_elements)
    table = enumerate_orbits(n, F, **kw)
    order = group_order(GroupSpec(n, F, "SL"))
    rows = []
    for k, rep in enumerate(table.reps):
        row = {
            "rep": matrix_to_obj(rep),
            "size": table.sizes[k],
            "stabilizer_order": order // table.sizes[k],
        }
        if args.stab_gens:
            row["stabilizer_generators"] = [matrix_to_obj(g)
                                            for g in table.stab_gens[k]]
        rows.append(row)
    return {"orbits": rows, "coset_count": table.coset_count}, None, 0


def _parse_matrix_list(scalars, text, label):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{label} is not valid JSON: {exc}") from None
    if not isinstance(data, list) or not data:
        raise UsageError(f"{label} must be a non-empty JSON list of matrices")
    return [matrix_from_obj(scalars, m) for m in data]


def _cmd_char_degrees(args):
    F = _field_of(args)
    scalars = LocalRing.get(F, args.kind) if args.kind else F
    if args.generators and args.elements:
        raise UsageError("give either --generators or --elements, not both")
    if not args.generators and not args.elements:
        raise UsageError("char-degrees needs --generators or --elements")
    budget = int(args.budget_elements) if args.budget_elements else None
    if args.generators:
        gens = _parse_matrix_list(scalars, args.generators, "--generators")
        identity = Matrix.identity(scalars, gens[0].n)
        group = MatrixGroup.generated(gens, identity, budget=budget)
        hashed = {"generators": [matrix_to_obj(g) for g in gens]}
    else:
        elems = _parse_matrix_list(scalars, args.elements, "--elements")
        group = MatrixGroup(elems)
        hashed = {"elements": [matrix_to_obj(g) for g in elems]}
    dist = character_degrees(group, primes=args.prime)
    result = {
        "order": group.order,
        "classes": dist.total(),
        "degrees": {str(d): c for d, c in dist.as_sorted_items()},
    }
    return result, hashed, 0


def _cmd_extension_check(args):
    _require(args, "n")
    F = _field_of(args)
    kind = args.kind or WITT
    n = int(args.n)
    table = enumerate_orbits(n, F)
    budget_kw = {}
    if args.budget_elements:
        budget_kw["budget"] = int(args.budget_elements)
    verdicts = []
    all_ok = True
    for rep in table.reps:
        mode = extension_mode(rep, kind, **budget_kw)
        ok = verify_extension(rep, kind, mode=mode, rounds=args.rounds,
                              seed=int(args.seed), **budget_kw)
        all_ok = all_ok and ok
        verdicts.append({"rep": matrix_to_obj(rep), "extends": ok, "mode": mode})
    return {"verdicts": verdicts}, None, 0 if all_ok else 4


def _cmd_count_irreps(args):
    _require(args, "n")
    F = _field_of(args)
    kind = args.kind or WITT
    n = int(args.n)
    cache = DiskCache(args.cache_dir) if args.cache_dir else None
    if args.method == "direct":
        budget = int(args.budget_elements) if args.budget_elements \
            else DIRECT_BUDGET
        report = direct_distribution(n, F, kind, budget=budget)
    else:
        kw = {"cache": cache}
        if args.budget_elements:
            kw["budget"] = int(args.budget_elements)
        report = clifford_distribution(n, F, kind, **kw)
    return _report_obj(report), None, 0


def _cmd_compare(args):
    _require(args, "n")
    F = _field_of(args)
    n = int(args.n)
    cache = DiskCache(args.cache_dir) if args.cache_dir else None
    kw = {"cache": cache}
    if args.budget_elements:
        kw["direct_budget"] = int(args.budget_elements)
    verdict = compare_rings(n, F, **kw)
    result = {
        "n": n,
        "p": F.p,
        "f": F.f,
        "equal": verdict.equal,
        "reports": {label: _report_obj(r)
                    for label, r in sorted(verdict.reports.items())},
    }
    return result, None, 0 if verdict.equal else 4


def _cmd_splitting(args):
    _require(args, "n")
    F = _field_of(args)
    kind = args.kind or WITT
    n = int(args.n)
    kw = {"rounds": args.rounds, "seed": int(args.seed)}
    if args.budget_elements:
        kw["budget"] = int(args.budget_elements)
    res = lift_order_search(n, F, kind, **kw)
    result = {
        "found": res.found is not None,
        "mode": res.mode,
        "search_space_size": res.search_space_size,
    }
    if res.found is not None:
        result["witness"] = matrix_to_obj(res.found)
    return result, None, 0


def _cmd_reproduce_all(args):
    from .acceptance import CRITERIA, run_all
    cache_dir = args.cache_dir or os.path.join(
        os.path.expanduser("~"), ".cache", "l2rep")
    only = None
    if args.only:
        by_name = {name: cid for cid, name, _ in CRITERIA}
        only = set()
        for token in args.only:
            if token.isdigit():
                only.add(int(token))
            elif token in by_name:
                only.add(by_name[token])
            else:
                raise UsageError(f"unknown criterion {token!r}; names are "
                                 + ", ".join(sorted(by_name)))
        unknown = only - {cid for cid, _, _ in CRITERIA}
        if unknown:
            raise UsageError(f"unknown criterion numbers {sorted(unknown)}")
    rows = run_all(cache_dir=cache_dir, only=only,
                   log=lambda line: print(line, flush=True))
    result = {"criteria": [{"id": r.ident, "name": r.name, "passed": r.passed,
                            "detail": r.detail} for r in rows],
              "all_passed": all(r.passed for r in rows)}
    return result, None, 0 if result["all_passed"] else 4


_HANDLERS = {
    "weyr": _cmd_weyr,
    "centralizer": _cmd_centralizer,
    "stabilizer": _cmd_stabilizer,
    "orbits": _cmd_orbits,
    "char-degrees": _cmd_char_degrees,
    "extension-check": _cmd_extension_check,
    "count-irreps": _cmd_count_irreps,
    "compare": _cmd_compare,
    "splitting": _cmd_splitting,
    "reproduce-all": _cmd_reproduce_all,
}


# -- report assembly ---------------------------------------------------------


def _run_config(args) -> dict:
    cfg = {
        "command": args.command,
        "n": int(args.n) if args.n is not None else None,
        "p": int(args.p) if args.p is not None else None,
        "f": int(args.f) if args.f is not None else None,
        "modulus": list(_parse_modulus(args.modulus) or ()) or None,
        "kind": args.kind,
        "budget_elements": int(args.budget_elements)
                           if args.budget_elements else None,
        "workers": int(args.workers) if args.workers else 1,
        "cache_dir": args.cache_dir,
        "format": args.format,
        "seed": int(args.seed) if args.seed is not None else 0,
    }
    return cfg


def _flat_rows(command: str, result: dict):
    """Lossy tabular projection for the CSV export."""
    if command == "orbits":
        head = ["rep", "size", "stabilizer_order"]
        rows = [[json.dumps(r["rep"]["entries"]), r["size"],
                 r["stabilizer_order"]] for r in result["orbits"]]
    elif command == "char-degrees":
        head = ["dim", "count"]
        rows = [[d, c] for d, c in sorted(
            ((int(d), c) for d, c in result["degrees"].items()))]
    elif command == "extension-check":
        head = ["rep", "extends", "mode"]
        rows = [[json.dumps(v["rep"]["entries"]), v["extends"], v["mode"]]
                for v in result["verdicts"]]
    elif command == "count-irreps":
        head = ["dim", "count"]
        rows = [[c["dim"], c["count"]] for c in result["counts"]]
    elif command == "compare":
        head = ["report", "dim", "count"]
        rows = [[label, c["dim"], c["count"]]
                for label, rep in sorted(result["reports"].items())
                for c in rep["counts"]]
    else:  # pragma: no cover - guarded by TABULAR
        raise UsageError(f"no CSV projection for {command}")
    return head, rows


def _emit(args, envelope: dict):
    if args.format == "csv":
        if args.command not in TABULAR:
            raise UsageError(
                f"{args.command} has no tabular form; use --format json")
        head, rows = _flat_rows(args.command, envelope["result"])
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(head)
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(envelope, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_record(kind: str, exc: Exception) -> str:
    record = {"error": kind, "message": str(exc)}
    witness = getattr(exc, "witness", None)
    if isinstance(witness, Matrix):
        record["witness"] = matrix_to_obj(witness)
    elif witness is not None:
        record["witness"] = repr(witness)
    required = getattr(exc, "required", None)
    if required is not None:
        record["required"] = required
        record["budget"] = exc.budget
    return json.dumps(record, sort_keys=True)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.workers is not None and int(args.workers) < 1:
        parser.error("--workers must be at least 1")
    try:
        result, hashed_input, code = _HANDLERS[args.command](args)
        config = _run_config(args)
        envelope = {
            "command": args.command,
            "config": config,
            "input_hash": cache_key(args.command, config, hashed_input),
            "result": result,
        }
        _emit(args, envelope)
        return code
    except UsageError as exc:
        print(_error_record("config", exc), file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(_error_record("budget", exc), file=sys.stderr)
        return 3
    except MathDiscrepancyError as exc:
        print(_error_record("math-discrepancy", exc), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
