"""Command-line front end: parse bundle/ideal descriptions, dispatch to the
engines, and emit human-readable plus machine-readable reports.

Exit codes: 0 = decided, 1 = input error, 2 = indeterminate (resource cap or
internal cross-check mismatch; never a wrong verdict).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .algebra import (
    AlgebraError,
    FieldSpec,
    PolyRing,
    default_variables,
    parse_polynomial,
)
from .bounds import (
    BoundsError,
    ClosureQuery,
    closure_threshold,
    frobenius_membership,
    restriction_bound,
)
from .bundle import (
    BundleError,
    KernelBundle,
    SyzygyBundleSpec,
    from_syzygy,
    invariants,
    make_kernel_bundle,
    validate,
)
from .modgb import Caps, ResourceCapError
from .stability import InternalCheckError, StabilityError, analyze_bundle
from . import tannaka
from .tannaka import TannakaError


class InputError(ValueError):
    pass


def _frac(x) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# Job assembly (flags and job files share one normalized dict form).
# ---------------------------------------------------------------------------

def _ring_config_from_args(args) -> dict:
    if args.vars:
        variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    else:
        variables = list(default_variables(args.dim + 1))
    return {"variables": variables, "field": args.field, "order": args.order}


def build_ring(cfg: dict) -> PolyRing:
    field_text = cfg.get("field", "qq").lower()
    if field_text in ("qq", "q", "rationals"):
        field = FieldSpec(0)
    elif field_text.startswith("fp:"):
        try:
            field = FieldSpec(int(field_text[3:]))
        except ValueError as exc:
            raise InputError(f"bad field spec {field_text!r}: {exc}") from exc
    else:
        raise InputError(f"unknown field {field_text!r} (use qq or fp:P)")
    try:
        return PolyRing(tuple(cfg["variables"]), field,
                        cfg.get("order", "degrevlex"))
    except AlgebraError as exc:
        raise InputError(str(exc)) from exc


def _split_list(text: str) -> list:
    return [t.strip() for t in text.split(",") if t.strip()]


def _object_config_from_args(args) -> dict:
    given = [name for name in ("syzygy", "ideal", "matrix") if getattr(args, name, None)]
    if len(given) != 1:
        raise InputError("give exactly one object: --syzygy, --ideal, or "
                         "--matrix with --twists-a/--twists-b")
    if args.syzygy:
        return {"syzygy": {"generators": _split_list(args.syzygy),
                           "twist": args.twist}}
    if args.ideal:
        return {"ideal": {"generators": _split_list(args.ideal)}}
    if not (args.twists_a and args.twists_b):
        raise InputError("--matrix needs --twists-a and --twists-b")
    rows = [_split_list(row) for row in args.matrix.split(";")]
    return {"kernel": {
        "twists_a": [int(t) for t in _split_list(args.twists_a)],
        "twists_b": [int(t) for t in _split_list(args.twists_b)],
        "matrix": rows,
    }}


def build_object(cfg: dict, ring: PolyRing):
    """Returns (kind, payload): kind "bundle" pairs the bundle with an optional
    syzygy spec; kind "ideal" carries the generator list."""
    try:
        if "syzygy" in cfg:
            spec_cfg = cfg["syzygy"]
            gens = tuple(parse_polynomial(t, ring)
                         for t in spec_cfg["generators"])
            spec = SyzygyBundleSpec(ring, gens, int(spec_cfg.get("twist", 0)))
            return "bundle", (from_syzygy(spec), spec)
        if "kernel" in cfg:
            kcfg = cfg["kernel"]
            matrix = [[parse_polynomial(t, ring) for t in row]
                      for row in kcfg["matrix"]]
            bundle = make_kernel_bundle(ring, kcfg["twists_a"],
                                        kcfg["twists_b"], matrix)
            return "bundle", (bundle, None)
        if "ideal" in cfg:
            gens = tuple(parse_polynomial(t, ring)
                         for t in cfg["ideal"]["generators"])
            return "ideal", gens
    except (AlgebraError, BundleError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    raise InputError("object block must contain syzygy, kernel, or ideal")


def _caps_from_options(options: dict) -> Caps:
    return Caps(max_degree=options.get("max_degree"),
                max_pairs=options.get("max_pairs"),
                timeout_seconds=options.get("timeout_seconds"))


def _require_bundle(kind, payload):
    if kind != "bundle":
        raise InputError("this task needs a bundle object (syzygy or kernel)")
    return payload


def _require_ideal(kind, payload):
    if kind != "ideal":
        raise InputError("this task needs an ideal object (--ideal)")
    return payload


# ---------------------------------------------------------------------------
# Task executors: each returns (results dict, human lines).
# ---------------------------------------------------------------------------

def _bundle_summary(bundle: KernelBundle) -> dict:
    inv = invariants(bundle)
    return {
        "N": bundle.N,
        "twists_a": list(bundle.twists_a),
        "twists_b": list(bundle.twists_b),
        "rank": inv.rank,
        "c1": inv.c1,
        "mu": _frac(inv.mu),
        "c2": _frac(inv.c2),
        "delta": _frac(inv.delta),
    }


def _report_dict(report) -> dict:
    out = {
        "verdict": report.verdict,
        "stability": report.stability,
        "gate": report.gate,
        "mode": report.mode,
        "engine": report.engine,
        "mu": _frac(report.mu),
        "rank": report.rank,
        "per_power": [
            {"q": c.q, "alpha": c.alpha, "threshold": _frac(c.threshold),
             "relation": c.relation, "window": [c.window_low, c.window_top]}
            for c in report.per_power
        ],
        "trace": list(report.criteria_trace),
    }
    if report.witness is not None:
        w = report.witness
        out["witness"] = {"q": w.q, "degree": w.degree,
                          "verified": w.verified,
                          "element": str(w.element)}
    return out


def task_validate(kind, payload, options, caps):
    bundle, _ = _require_bundle(kind, payload)
    report = validate(bundle, check_surjectivity=options.get("surjectivity", False),
                      caps=caps)
    results = {
        "bundle": _bundle_summary(bundle),
        "valid": report.ok,
        "surjective": report.surjective,
        "problems": [str(p) for p in report.problems],
    }
    lines = [f"bundle: {bundle.describe()}"]
    if report.ok:
        lines.append("valid presentation"
                     + (", surjective" if report.surjective else ""))
    else:
        lines.extend(f"problem: {p}" for p in report.problems)
    return results, lines, 0 if report.ok else 1


def task_check(kind, payload, options, caps):
    bundle, spec = _require_bundle(kind, payload)
    analysis = analyze_bundle(
        bundle,
        engine=options.get("engine", "both"),
        mode=options.get("mode", "stability_evidence"),
        upgrade_selfdual=options.get("upgrade_selfdual", True),
        via_pullback=options.get("via_pullback"),
        spec=spec,
        caps=caps,
    )
    report = analysis.report
    results = {
        "bundle": _bundle_summary(bundle),
        "report": _report_dict(report),
        "criteria": {name: {"verdict": res.verdict}
                     for name, res in analysis.criteria.items()},
    }
    if analysis.pullback is not None:
        results["pullback"] = {
            "k": options.get("via_pullback"),
            "report": _report_dict(analysis.pullback.report),
        }
    lines = [f"bundle: {bundle.describe()}, mu = {report.mu}",
             f"slope gate: {report.gate}"]
    for c in report.per_power:
        if c.relation == ">":
            lines.append(f"q={c.q}: no sections up to twist {c.window_top} "
                         f"(threshold {c.threshold})")
        else:
            lines.append(f"q={c.q}: first section at twist {c.alpha} "
                         f"{c.relation} threshold {c.threshold}")
    if report.witness:
        lines.append(f"witness: q={report.witness.q}, degree "
                     f"{report.witness.degree}, verified")
    lines.append(f"verdict: {report.verdict}"
                 + (f"; stability: {report.stability}"
                    if report.verdict == "semistable" else ""))
    return results, lines, 0


def _parse_twist_range(text: str):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    return [int(t) for t in _split_list(text)]


def task_sections(kind, payload, options, caps):
    bundle, _ = _require_bundle(kind, payload)
    kind_name = options.get("kind", "exterior")
    q = options.get("q", 1)
    twists = list(_parse_twist_range(options.get("twists", "0..0")))
    engine = options.get("engine", "linalg")
    if engine == "both":
        table_gb = tannaka.section_dim_table(bundle, kind_name, q, twists, "gb", caps)
        table = tannaka.section_dim_table(bundle, kind_name, q, twists, "linalg", caps)
        if table != table_gb:
            raise InternalCheckError(
                f"engine mismatch in section table: gb {table_gb} vs linalg {table}")
    else:
        table = tannaka.section_dim_table(bundle, kind_name, q, twists, engine, caps)
    results = {
        "bundle": _bundle_summary(bundle),
        "power": {"kind": kind_name, "q": q},
        "sections": {str(k): table[k] for k in twists},
    }
    lines = [f"h^0(({kind_name}^{q} E)(k)) for k in {twists[0]}..{twists[-1]}:"]
    lines.extend(f"  k = {k}: {table[k]}" for k in twists)
    return results, lines, 0


def task_tannaka(kind, payload, options, caps):
    bundle, spec = _require_bundle(kind, payload)
    assume = options.get("assume_stability")
    if assume:
        status = assume
        report_dict = {"assumed": assume}
    else:
        analysis = analyze_bundle(
            bundle,
            engine=options.get("engine", "linalg"),
            upgrade_selfdual=True,
            via_pullback=options.get("via_pullback"),
            spec=spec,
            caps=caps,
        )
        status = analysis.report.stability if analysis.report.is_semistable \
            else "unstable"
        report_dict = _report_dict(analysis.report)
    method = options.get("method", "two_prime")
    fp = tannaka.fingerprint(bundle, status, q_max=options.get("q_max", 4),
                             method=method, caps=caps)
    results = {
        "bundle": _bundle_summary(bundle),
        "stability": report_dict,
        "fingerprint": {
            "rank": fp.rank,
            "normalizing_twist": fp.normalizing_twist,
            "dims": {str(q): {"value": cell.value, "evidence": cell.evidence}
                     for q, cell in sorted(fp.dims.items())},
            "simplicity": fp.simplicity.value,
            "selfdual": fp.selfdual,
            "selfdual_reason": fp.selfdual_reason,
        },
    }
    lines = [f"stability status: {status}"]
    lines.extend(f"h^0(E0^(x){q}) = {cell.value}  [{cell.evidence}]"
                 for q, cell in sorted(fp.dims.items()))
    lines.append(f"self-dual: {fp.selfdual} ({fp.selfdual_reason})")
    try:
        guess = tannaka.classify_group(fp)
        results["group"] = {"label": guess.label(),
                            "justification": guess.justification}
        lines.append(f"dual group: {guess.label()}")
        lines.append(f"  {guess.justification}")
    except TannakaError as exc:
        results["group"] = {"label": "not classified", "reason": str(exc)}
        lines.append(f"dual group not classified: {exc}")
    return results, lines, 0


def task_restrict(kind, payload, options, caps):
    bundle, spec = _require_bundle(kind, payload)
    inv = invariants(bundle)
    assume = options.get("assume_stability")
    if assume:
        certificate = assume
        cert_source = f"assumed {assume}"
    else:
        analysis = analyze_bundle(bundle, engine=options.get("engine", "linalg"),
                                  spec=spec, caps=caps,
                                  via_pullback=options.get("via_pullback"))
        report = analysis.report
        if not report.is_semistable:
            raise BoundsError("the bundle is unstable; no restriction theorem "
                              "applies")
        certificate = "stable" if report.is_stable_proven else "semistable"
        cert_source = f"computed ({report.stability or report.verdict})"
    theorem = options.get("theorem", "langer").replace("-", "_")
    bound = restriction_bound(theorem, bundle.N, inv.rank, inv.delta,
                              c=options.get("c", 1),
                              field_char=bundle.ring.field.char,
                              certificate=certificate)
    results = {
        "bundle": _bundle_summary(bundle),
        "certificate": {"level": certificate, "source": cert_source},
        "bound": {"theorem": bound.theorem, "k_min": bound.k_min,
                  "delta": _frac(bound.delta), "c": bound.c,
                  "conclusion": bound.conclusion},
    }
    lines = [f"certificate: {certificate} ({cert_source})",
             f"{bound.theorem}: k_min = {bound.k_min}",
             bound.conclusion]
    return results, lines, 0


def task_closure(kind, payload, options, caps):
    gens = _require_ideal(kind, payload)
    ring = gens[0].ring
    certificate = options.get("assume_stability")
    trace = []
    if ring.field.char == 0 and certificate is None:
        spec = SyzygyBundleSpec(ring, gens, 0)
        analysis = analyze_bundle(from_syzygy(spec), spec=spec, caps=caps,
                                  engine=options.get("engine", "linalg"))
        report = analysis.report
        if not report.is_semistable:
            raise BoundsError(
                "the syzygy bundle of the ideal is unstable; the inclusion "
                "bound does not apply")
        certificate = "stable" if report.is_stable_proven else "semistable"
        trace.append(f"semistability certificate computed: {certificate}")
    candidate_text = options.get("candidate")
    query = ClosureQuery(
        generators=gens,
        certificate=certificate,
        strong_flag=options.get("strong_flag"),
        genus=options.get("genus"),
        plane_curve_degree=options.get("plane_curve_degree"),
        candidate=parse_polynomial(candidate_text, ring) if candidate_text else None,
        frobenius_exponent=options.get("frobenius_exponent"),
    )
    closure = closure_threshold(query, caps)
    results = {
        "ideal": {"generators": [str(g) for g in gens],
                  "degrees": list(query.degrees)},
        "threshold": {"tau": _frac(closure.tau), "m_min": closure.m_min},
        "trace": trace + closure.trace,
    }
    lines = [f"tau = {closure.tau}: R_m lies in the closure for m >= "
             f"{closure.m_min}"]
    if query.candidate is not None:
        if ring.field.char == 0:
            m = query.candidate.homogeneous_degree()
            member = m is not None and Fraction(m) >= closure.tau
            results["membership"] = {
                "candidate": str(query.candidate),
                "member_by_threshold": member,
                "note": ("below the threshold, membership in solid closure "
                         "is not decided by this tool in characteristic 0"
                         if not member else "degree reaches the threshold"),
            }
            lines.append(f"candidate degree {m}: "
                         + ("in the closure by the threshold rule" if member
                            else "below the threshold; not decided"))
        else:
            membership = frobenius_membership(query, caps)
            results["membership"] = {
                "candidate": str(query.candidate),
                "member": membership.member,
                "decisive": membership.decisive,
                "regime": membership.regime,
                "via": membership.via,
            }
            results["trace"].extend(membership.trace)
            lines.append(f"membership: {membership.member} ({membership.regime})")
    return results, lines, 0


TASKS = {
    "validate": task_validate,
    "check": task_check,
    "sections": task_sections,
    "tannaka": task_tannaka,
    "restrict": task_restrict,
    "closure": task_closure,
}


# ---------------------------------------------------------------------------
# Argument parsing and the entry point.
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--vars", help="comma-separated variable names")
    parser.add_argument("--dim", type=int, default=2,
                        help="projective dimension N (default 2)")
    parser.add_argument("--field", default="qq", help="qq or fp:P")
    parser.add_argument("--order", default="degrevlex",
                        choices=["degrevlex", "deglex", "lex"])
    parser.add_argument("--syzygy", help="comma-separated homogeneous generators")
    parser.add_argument("--twist", type=int, default=0,
                        help="twist for the syzygy bundle")
    parser.add_argument("--ideal", help="comma-separated ideal generators")
    parser.add_argument("--matrix", help="rows separated by ';', entries by ','")
    parser.add_argument("--twists-a", dest="twists_a")
    parser.add_argument("--twists-b", dest="twists_b")
    parser.add_argument("--max-degree", dest="max_degree", type=int)
    parser.add_argument("--max-pairs", dest="max_pairs", type=int)
    parser.add_argument("--timeout-seconds", dest="timeout_seconds", type=float)
    parser.add_argument("--json-out", dest="json_out")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kbundle",
        description="Exact semistability and section computations for kernel "
                    "and syzygy bundles on projective space")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a kernel presentation")
    _add_common(p)
    p.add_argument("--check-surjectivity", action="store_true",
                   dest="surjectivity")

    p = sub.add_parser("check", help="decide semistability and stability")
    _add_common(p)
    p.add_argument("--engine", default="both", choices=["gb", "linalg", "both"])
    p.add_argument("--mode", default="stability_evidence",
                   choices=["semistability", "stability_evidence"])
    p.add_argument("--upgrade", choices=["selfdual", "none"], default="selfdual")
    p.add_argument("--via-pullback", dest="via_pullback", type=int)

    p = sub.add_parser("sections", help="section-dimension tables of powers")
    _add_common(p)
    p.add_argument("--kind", default="exterior",
                   choices=["tensor", "exterior", "symmetric"])
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--twists", default="0..0", help="LO..HI or a comma list")
    p.add_argument("--engine", default="linalg",
                   choices=["gb", "linalg", "staged", "both"])

    p = sub.add_parser("tannaka", help="invariant fingerprint and dual group")
    _add_common(p)
    p.add_argument("--q-max", dest="q_max", type=int, default=4)
    p.add_argument("--method", default="two-prime",
                   help="two-prime, exact, or prime:P")
    p.add_argument("--engine", default="linalg", choices=["gb", "linalg"])
    p.add_argument("--assume-stability", dest="assume_stability",
                   choices=["proven_stable", "proven_via_selfduality"])
    p.add_argument("--via-pullback", dest="via_pullback", type=int)

    p = sub.add_parser("restrict", help="restriction-degree bounds")
    _add_common(p)
    p.add_argument("--theorem", default="langer",
                   choices=["flenner", "langer", "langer-strong"])
    p.add_argument("--c", type=int, default=1,
                   help="number of general divisors (flenner)")
    p.add_argument("--engine", default="linalg", choices=["gb", "linalg", "both"])
    p.add_argument("--assume-stability", dest="assume_stability",
                   choices=["semistable", "stable"])
    p.add_argument("--via-pullback", dest="via_pullback", type=int)

    p = sub.add_parser("closure", help="closure thresholds and membership")
    _add_common(p)
    p.add_argument("--engine", default="linalg", choices=["gb", "linalg", "both"])
    p.add_argument("--candidate", help="homogeneous element to test")
    p.add_argument("--frobenius-e", dest="frobenius_exponent", type=int)
    p.add_argument("--genus", type=int)
    p.add_argument("--plane-curve-degree", dest="plane_curve_degree", type=int)
    p.add_argument("--strong-flag", dest="strong_flag",
                   help="justification for strong semistability in char p")
    p.add_argument("--assume-stability", dest="assume_stability",
                   choices=["semistable", "stable"])

    p = sub.add_parser("run", help="execute a JSON job file")
    p.add_argument("jobfile")
    p.add_argument("--json-out", dest="json_out")
    return parser


_TASK_OPTION_KEYS = {
    "validate": ("surjectivity",),
    "check": ("engine", "mode", "via_pullback", "upgrade"),
    "sections": ("kind", "q", "twists", "engine"),
    "tannaka": ("q_max", "method", "engine", "assume_stability", "via_pullback"),
    "restrict": ("theorem", "c", "engine", "assume_stability", "via_pullback"),
    "closure": ("engine", "candidate", "frobenius_exponent", "genus",
                "plane_curve_degree", "strong_flag", "assume_stability"),
}


def _job_from_args(args) -> dict:
    options = {}
    for key in _TASK_OPTION_KEYS[args.command]:
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    for key in ("max_degree", "max_pairs", "timeout_seconds"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    if options.get("upgrade") == "none":
        options["upgrade_selfdual"] = False
    options.pop("upgrade", None)
    if "theorem" in options:
        options["theorem"] = options["theorem"].replace("-", "_")
    if "method" in options:
        m = options["method"].replace("-", "_")
        if m.startswith("prime:"):
            options["method"] = ("prime", int(m.split(":", 1)[1]))
        else:
            options["method"] = m
    return {
        "ring": _ring_config_from_args(args),
        "object": _object_config_from_args(args),
        "task": {"name": args.command, "options": options},
    }


def _job_from_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            job = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read job file {path}: {exc}") from exc
    for block in ("ring", "object", "task"):
        if block not in job:
            raise InputError(f"job file is missing the {block!r} block")
    return job


def execute_job(job: dict):
    """Run one job; returns (report dict, human lines, exit code)."""
    ring = build_ring(job["ring"])
    kind, payload = build_object(job["object"], ring)
    task = job["task"]
    name = task.get("name")
    if name not in TASKS:
        raise InputError(f"unknown task {name!r}")
    options = dict(task.get("options", {}))
    caps = _caps_from_options(options)
    started = time.perf_counter()
    results, lines, code = TASKS[name](kind, payload, options, caps)
    elapsed = time.perf_counter() - started
    def jsonable(opt):
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in opt.items()}
    report = {
        "job": {"ring": job["ring"], "object": job["object"],
                "task": {"name": name, "options": jsonable(options)}},
        "results": results,
        "resources": {"max_degree": options.get("max_degree"),
                      "max_pairs": options.get("max_pairs"),
                      "timeout_seconds": options.get("timeout_seconds")},
        "timing": {"seconds": round(elapsed, 6)},
    }
    return report, lines, code


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            job = _job_from_file(args.jobfile)
        else:
            job = _job_from_args(args)
        report, lines, code = execute_job(job)
    except (InputError, AlgebraError, BundleError, StabilityError,
            BoundsError, TannakaError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ResourceCapError as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"INTERNAL cross-check mismatch, no verdict: {exc}",
              file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    json_out = getattr(args, "json_out", None)
    if json_out:
        with open(json_out, "w", encoding="utf-8") as handle:
            json.dump(report, handle, indent=2, sort_keys=True)
            handle.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
