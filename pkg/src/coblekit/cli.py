"""Command line: named checks, object export, scans.

    coblekit verify --list
    coblekit verify --check cs.hilbert --prime 61
    coblekit verify --all --out reports.json
    coblekit export --object coble --c 1,1,1,1
    coblekit scan --job points360-smooth --workers 4
    coblekit enumerate --what planes

Exit codes: 0 all pass, 1 some check failed, 2 usage error or unknown check,
3 inconclusive without failures.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
import traceback
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import abelian33, cobleshioda, groups, oracle, quintic5
from .exactmath import is_prime
from .report import VerificationReport, merge_status

DEFAULT_PRIME = 61
DEFAULT_SEED = 0
DEFAULT_BUDGET = 2 * 10**9
FALLBACK_PRIME = 181

# flat registry; order here is report order
REGISTRY = {
    "quintic.pfaffians": quintic5.pfaffian_report,
    "quintic.bhm": quintic5.bhm_checks,
    "quintic.special": quintic5.special_loci,
    "quintic.lines25": quintic5.check_lines25,
    "quintic.section": quintic5.check_section,
    "quintic.cusp": quintic5.check_cusp,
    "quintic.points30": quintic5.check_points30,
    "quintic.hilbert": quintic5.s5_hilbert,
    "quintic.degree15": quintic5.degree15,
    "quintic.smoothness": quintic5.smoothness_sampling,
    "ab33.phi": abelian33.phi_report,
    "ab33.coble": abelian33.coble_report,
    "ab33.jacobian": abelian33.jacobian_report,
    "ab33.burkhardt": abelian33.burkhardt_report,
    "ab33.disc": abelian33.disc_report,
    "ab33.identity": abelian33.identity_point_suite,
    "ab33.psi": abelian33.psi_gamma,
    "ab33.multker": abelian33.multker_report,
    "ab33.indep93": abelian33.independence93,
    "ab33.heisenberg": abelian33.heisenberg_invariance,
    "ab33.family2": abelian33.family2_suite,
    "ab33.family3": abelian33.family3_suite,
    "ab33.family4": abelian33.family4_suite,
    "ab33.family5": abelian33.family5_checks,
    "ab33.degree18": abelian33.surface_degree,
    "ab33.torsion": abelian33.torsion_slices,
    "ab33.fano": abelian33.fano_checks,
    "ab33.smooth": abelian33.smoothness_sampling,
    "cs.matrix": cobleshioda.matrix_report,
    "cs.sextics": cobleshioda.sextic_report,
    "cs.hilbert": cobleshioda.hilbert_report,
    "cs.planes": cobleshioda.planes_report,
    "cs.points": cobleshioda.points_report,
    "cs.incidence": cobleshioda.incidence_report,
    "cs.maschke": cobleshioda.maschke_sections,
    "cs.burkhardt_subsets": cobleshioda.burkhardt_subsets,
    "cs.degree120": cobleshioda.degree120,
    "groups.heisenberg": groups.heisenberg_report,
    "groups.g16": groups.g16_report,
    "groups.g32": groups.g32_report,
    "groups.orbits": groups.orbits_report,
    "groups.macdonald": groups.macdonald_report,
    "scan.points360": oracle.scan_points360_smooth,
}


class UnknownCheck(KeyError):
    pass


class InvalidOption(ValueError):
    pass


def _check_prime(p: int) -> int:
    if p < 5 or not is_prime(p):
        raise InvalidOption(f"--prime must be a prime >= 5, got {p}")
    return p


def _kwargs_for(fn, prime, seed, workers, budget) -> dict:
    params = inspect.signature(fn).parameters
    kw = {}
    if prime is not None:
        if "p" in params:
            kw["p"] = prime
        elif "primes" in params:
            kw["primes"] = (prime, FALLBACK_PRIME) if prime != FALLBACK_PRIME else (prime,)
    if seed is not None and "seed" in params:
        kw["seed"] = seed
    if workers is not None and "workers" in params:
        kw["workers"] = workers
    if budget is not None and "budget" in params:
        kw["budget"] = budget
    return kw


def run_check(name: str, prime: int | None = None, seed: int | None = None,
              workers: int | None = None, budget: int | None = None) -> VerificationReport:
    """Run one registered check.  Exceptions inside the check become a failed report."""
    if name not in REGISTRY:
        raise UnknownCheck(name)
    if prime is not None:
        _check_prime(prime)
    if workers is not None and workers < 1:
        raise InvalidOption("--workers must be positive")
    if budget is not None and budget < 1:
        raise InvalidOption("--budget must be positive")
    fn = REGISTRY[name]
    kw = _kwargs_for(fn, prime, seed, workers, budget)
    try:
        rep = fn(**kw)
    except Exception as exc:  # mathematical failure is report content
        rep = VerificationReport(name, prime=prime, seed=seed)
        rep.expect("check raised", False, {"exception": repr(exc),
                                            "trace": traceback.format_exc(limit=3)})
    if rep.prime is None:
        rep.prime = kw.get("p", kw.get("primes", (None,))[0])
    if rep.seed is None and "seed" in kw:
        rep.seed = kw["seed"]
    return rep


def report_schema() -> dict:
    return json.loads(resources.files("coblekit").joinpath("report_schema.json").read_text())


def emit_report(reports, path=None, validate: bool = True) -> int:
    """Write the JSON array (to ``path`` if given) and return the exit code."""
    data = [r.to_json() for r in reports]
    if validate:
        import jsonschema

        jsonschema.validate(data, report_schema())
    if path is not None:
        Path(path).write_text(json.dumps(data, indent=2) + "\n")
    return merge_status(reports)


# ---------------------------------------------------------------------------
# export


def _parse_c(text: str | None, n: int):
    if text is None:
        raise InvalidOption(f"this object needs --c with {n} comma-separated values (or --c symbolic)")
    if text.strip().lower() == "symbolic":
        return None
    try:
        vals = [Fraction(x.strip()) for x in text.strip("()[] ").split(",")]
    except ValueError as exc:
        raise InvalidOption(f"cannot parse --c {text!r}") from exc
    if len(vals) != n:
        raise InvalidOption(f"--c needs {n} values, got {len(vals)}")
    return vals


def _w(e: int) -> str:
    return ("1", "w", "w^2")[e % 3]


def _plane_record(pl, idx: int) -> dict:
    eqs = []
    for eq in pl.equations():
        terms = []
        for coord, (e, sign) in sorted(eq.items(), key=lambda t: (t[1][1] < 0, t[0])):
            coef = "" if e == 0 else f"{_w(e)}*"
            terms.append(("-" if sign < 0 else "+", f"{coef}z{coord + 1}"))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sg, body in terms[1:]:
            s += f" {sg} {body}"
        eqs.append(s)
    rec = {"id": idx, "type": pl.kind, "equations": eqs}
    if pl.kind == 2:
        rec["index"] = list(pl.index)
    return rec


def _point_record(pt, idx: int) -> dict:
    return {"id": idx, "type": pt.kind, "coordinates": ["0" if e is None else _w(e) for e in pt.exps]}


def export_object(name: str, c: str | None = None, fmt: str = "json"):
    """Serialized object as a JSON-able value (fmt json) or a string (fmt text)."""
    if name == "phi":
        vals = _parse_c(c, 4)
        M = abelian33.phi_matrix(None if vals is None else abelian33.CVector(*vals))
        return M.to_json() if fmt == "json" else M.render_grid()
    if name == "psi":
        vals = _parse_c(c, 2)
        M = quintic5.psi_matrix(None if vals is None else quintic5.QuinticParams(*vals))
        return M.to_json() if fmt == "json" else M.render_grid()
    if name == "cs":
        M = cobleshioda.cs_matrix()
        return M.to_json() if fmt == "json" else M.render_grid()
    if name == "bhm":
        M = quintic5.bhm_matrix()
        return M.to_json() if fmt == "json" else M.render_grid()
    if name == "coble":
        vals = _parse_c(c, 4)
        f = abelian33.coble_cubic(None if vals is None else abelian33.CVector(*vals))
        return f.render()
    if name == "jacobian":
        vals = _parse_c(c, 4)
        fs = abelian33.jacobian_gens(None if vals is None else abelian33.CVector(*vals))
        return [f.render() for f in fs] if fmt == "json" else "\n".join(f.render() for f in fs)
    if name == "planes":
        recs = [_plane_record(pl, i) for i, pl in enumerate(cobleshioda.planes120())]
        if fmt == "json":
            return recs
        return "\n".join(f"{r['id']}\ttype{r['type']}\t" + ", ".join(r["equations"]) for r in recs)
    if name == "points360":
        recs = [_point_record(pt, i) for i, pt in enumerate(cobleshioda.points360())]
        if fmt == "json":
            return recs
        return "\n".join(f"{r['id']}\ttype{r['type']}\t[" + ":".join(r["coordinates"]) + "]" for r in recs)
    raise InvalidOption(f"unknown object {name!r}")


EXPORTABLE = ("phi", "psi", "cs", "bhm", "coble", "jacobian", "planes", "points360")


# ---------------------------------------------------------------------------
# argument handling


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coblekit", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run named checks")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--check", action="append", help="check name or prefix ending in '.' (repeatable)")
    g.add_argument("--all", action="store_true")
    g.add_argument("--list", action="store_true")
    v.add_argument("--prime", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--workers", type=int)
    v.add_argument("--budget", type=int)
    v.add_argument("--out")
    v.add_argument("--format", choices=("text", "json"), default="text")

    e = sub.add_parser("export", help="print a named object")
    e.add_argument("--object", required=True, choices=EXPORTABLE)
    e.add_argument("--c")
    e.add_argument("--format", choices=("json", "text"), default="json")

    s = sub.add_parser("scan", help="run an exhaustive scan")
    s.add_argument("--job", required=True, choices=("points360-smooth",))
    s.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--include-degenerate", action="store_true")
    s.add_argument("--out")
    s.add_argument("--format", choices=("text", "json"), default="text")

    n = sub.add_parser("enumerate", help="list the special planes or points")
    n.add_argument("--what", required=True, choices=("planes", "points360"))
    n.add_argument("--format", choices=("json", "text"), default="text")
    return ap


def _select(names) -> list[str]:
    out = []
    for nm in names:
        if nm in REGISTRY:
            out.append(nm)
        elif nm.endswith(".") and any(k.startswith(nm) for k in REGISTRY):
            out.extend(k for k in REGISTRY if k.startswith(nm))
        else:
            raise UnknownCheck(nm)
    return list(dict.fromkeys(out))


def _print_reports(reports, fmt: str):
    if fmt == "json":
        print(json.dumps([r.to_json() for r in reports], indent=2))
        return
    for r in reports:
        extra = f"  p={r.prime}" if r.prime is not None else ""
        print(f"{r.status.upper():13s} {r.check:24s} {r.elapsed_ms / 1000:8.2f}s{extra}")
        for w in r.witnesses[:5]:
            print(f"    {json.dumps(w)[:200]}")


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        if args.cmd == "verify":
            if args.list:
                for nm in REGISTRY:
                    print(nm)
                return 0
            names = list(REGISTRY) if args.all else _select(args.check)
            reports = []
            for nm in names:
                rep = run_check(nm, args.prime, args.seed, args.workers, args.budget)
                reports.append(rep)
                if args.format == "text":
                    _print_reports([rep], "text")
                    sys.stdout.flush()
            if args.format == "json":
                _print_reports(reports, "json")
            return emit_report(reports, args.out)
        if args.cmd == "export":
            obj = export_object(args.object, args.c, args.format)
            print(obj if isinstance(obj, str) else json.dumps(obj, indent=1))
            return 0
        if args.cmd == "scan":
            _check_prime(args.prime)
            def progress(done, total):
                print(f"scanned {done}/{total} parameters", file=sys.stderr)

            rep = oracle.scan_points360_smooth(args.prime, workers=args.workers, budget=args.budget,
                                               include_degenerate=args.include_degenerate, progress=progress)
            _print_reports([rep], args.format)
            return emit_report([rep], args.out)
        if args.cmd == "enumerate":
            obj = export_object(args.what, None, args.format)
            if args.format == "text":
                recs = export_object(args.what, None, "json")
                counts = {}
                for r in recs:
                    counts[r["type"]] = counts.get(r["type"], 0) + 1
                print(obj)
                print(f"# total {len(recs)}; by type " + ", ".join(f"{k}: {v}" for k, v in sorted(counts.items())))
            else:
                print(json.dumps(obj, indent=1))
            return 0
    except UnknownCheck as exc:
        print(f"unknown check: {exc.args[0]} (see `coblekit verify --list`)", file=sys.stderr)
        return 2
    except InvalidOption as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
