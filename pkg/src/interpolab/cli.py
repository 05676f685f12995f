"""Command-line entry point.

Exit codes: 0 success, 1 verified negative (a required certificate does not
exist, or a verification failed), 2 usage error, 3 internal invariant
violation.  Exact parameters are read as "p/q" strings only.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .exact_arith import CircleInterval, frac_to_str, parse_rational
from .index_sets import GeneratorSpec, IndexSet, generate
from .store import CertificateStore, canonical_json, verify_path

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    """Comma list "4,16", a range "1..20", or "@file.json" holding an IndexSet."""
    text = text.strip()
    if text.startswith("@"):
        data = json.loads(Path(text[1:]).read_text())
        return list(IndexSet.from_json(data))
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _windows(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        m, n = part.split(":")
        out.append((int(m), int(n)))
    return out


def _gen_spec(args) -> GeneratorSpec:
    if args.spec_json:
        return GeneratorSpec.from_json(json.loads(args.spec_json))
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        if key == "coeffs":
            params[key] = value.split(",")
        elif key == "elements":
            params[key] = [int(v) for v in value.split(",")]
        else:
            params[key] = int(value)
    return GeneratorSpec(args.family, params)


def _emit(args, artifact: dict, summary: str) -> None:
    print(summary)
    if getattr(args, "out", None):
        Path(args.out).write_text(canonical_json(artifact))
    if getattr(args, "store", False):
        path = CertificateStore().put(artifact)
        print(f"stored {path}")


def _write_csv(args, text: str) -> None:
    if getattr(args, "csv", None):
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = _gen_spec(args)
    E = generate(spec, args.N)
    art = {"schema": "interpolab/index-set@1", "config": {"spec": spec.to_json(), "N": args.N}, **E.to_json()}
    _emit(args, art, " ".join(str(e) for e in E))
    return EXIT_OK


def cmd_separate(args) -> int:
    from .separability import SeparabilityCertificate, separability_1d, separability_nd

    config = {"A": args.A, "B": args.B, "eps": frac_to_str(args.eps), "dim": args.dim,
              "budget": args.budget, "seed": args.seed}
    if args.dim == 1:
        res = separability_1d(args.A, args.B, args.eps)
    else:
        res = separability_nd(args.A, args.B, args.eps, d=args.dim, budget=args.budget, seed=args.seed)
    if isinstance(res, SeparabilityCertificate):
        art = {**res.to_json(), "config": config}
        _emit(args, art, f"certificate alpha={res.alpha} achieved={res.achieved} (eps {res.epsilon})")
        return EXIT_OK
    if hasattr(res, "to_json"):
        art = {**res.to_json(), "config": config}
        _emit(args, art, f"not separable: exact sup {res.sup_achieved} < {res.epsilon}")
    else:
        print(f"unknown: best separation {res.best_achieved} after {res.evaluated} candidates")
    return EXIT_NEGATIVE if args.require_certificate else EXIT_OK


def cmd_nice_count(args) -> int:
    from .separability import nice_collections

    rep = nice_collections(args.F, args.eps)
    art = {
        "schema": "interpolab/nice-report@1",
        "config": {"F": args.F, "eps": frac_to_str(args.eps)},
        "regions": len(rep.regions),
        "distinct_collections": rep.distinct_collections,
        "distinct_nice_sets": rep.distinct_nice_sets,
        "bound": rep.bound,
        "max_components": rep.max_components,
    }
    _emit(args, art, f"{rep.distinct_collections} collections over {len(rep.regions)} regions "
                     f"(bound {rep.bound})")
    return EXIT_OK if rep.distinct_collections <= rep.bound else EXIT_INVARIANT


def cmd_recur(args) -> int:
    from .recurrence import NotReached, recurrence_threshold, supmin_1d

    R = args.R
    if args.eps is None:
        res = supmin_1d(R)
        art = {"schema": "interpolab/supmin@1", "config": {"R": R}, "R": [str(r) for r in R],
               **res.to_json()}
        _emit(args, art, f"supmin {res.value} at alpha={res.argmax}")
        return EXIT_OK
    th = recurrence_threshold(R, args.eps)
    if isinstance(th, NotReached):
        sup = th.final_sup.value if th.final_sup else None
        print(f"not reached over {th.prefix_len} elements (final supmin {sup})")
        return EXIT_NEGATIVE if args.require_threshold else EXIT_OK
    prefix = R[:th.prefix_len]
    art = {"schema": "interpolab/supmin@1", "config": {"R": R, "eps": frac_to_str(args.eps)},
           "R": [str(r) for r in prefix], "N": str(th.N), **th.certificate.to_json()}
    _emit(args, art, f"N={th.N} (prefix of {th.prefix_len}); supmin {th.certificate.value} < {args.eps}")
    return EXIT_OK


def cmd_partition(args) -> int:
    from .recurrence import partition_bohr

    trace = partition_bohr(IndexSet.of(args.R), args.schedule)
    art = trace.to_json()
    art["config"] = {"R": args.R, "schedule": [frac_to_str(e) for e in args.schedule]}
    lines = [f"stage {k + 1} eps={s.epsilon}: |A|={len(s.A)} (N={s.N_A}, sup {s.cert_A.value}), "
             f"|B|={len(s.B)} (N={s.N_B}, sup {s.cert_B.value})" for k, s in enumerate(trace.stages)]
    if not trace.completed:
        lines.append(f"stopped at stage {trace.stopped_at + 1}: threshold not reached")
    _emit(args, art, "\n".join(lines))
    if not trace.check():
        return EXIT_INVARIANT
    return EXIT_OK if trace.completed else EXIT_NEGATIVE


def cmd_interpolate(args) -> int:
    from .interpolation import SeparationFailed, TargetSequence, build_interpolant, verify_interpolation

    E = IndexSet.of(args.E)
    if len(args.b) != len(E) or list(E) != args.E:
        raise UsageError("E must be strictly increasing and match the length of b")
    target = TargetSequence(E, tuple(args.b))
    try:
        psi = build_interpolant(E, target, args.K, eps_floor=args.eps_floor, budget=args.budget,
                                seed=args.seed, nd_dim=args.nd_dim, allow_fragile=args.allow_fragile)
    except SeparationFailed as exc:
        print(f"separation failed at level {exc.level}: A={list(exc.A)} B={list(exc.B)} best={exc.best}")
        return EXIT_NEGATIVE
    rep = verify_interpolation(psi, E, target)
    art = psi.to_json()
    art["target"] = target.to_json()
    art["max_error"] = frac_to_str(rep.max_error)
    _emit(args, art, f"interpolant with {len(psi.levels)} levels, max node error {rep.max_error}, "
                     f"period {psi.period}")
    return EXIT_OK if rep.passed else EXIT_INVARIANT


def cmd_eval(args) -> int:
    from .interpolation import Interpolant

    data = json.loads(Path(args.interpolant).read_text())
    psi = Interpolant.from_json(data)
    for n in args.n:
        print(f"{n},{frac_to_str(psi(n))}")
    return EXIT_OK


def _psi_from(text: str):
    from .nilseq import QuadraticPhase, TrigPolynomial, nonconvergent_target

    kind, _, rest = text.partition(":")
    if kind == "trig":
        return TrigPolynomial(tuple((1, _rational(f)) for f in rest.split(",")))
    if kind == "quad":
        return QuadraticPhase(_rational(rest))
    if kind == "target":
        return nonconvergent_target(int(rest or 2))
    if kind == "const":
        value = float(rest or 1)
        return lambda n: value
    raise UsageError(f"unknown sequence {text!r} (trig:f1,f2 | quad:a | target:factor | const:v)")


def _seq_from(text: str):
    kind, _, rest = text.partition(":")
    if kind == "linear":
        return lambda i: i
    if kind == "squares":
        return lambda i: i * i
    if kind == "even-squares":
        return lambda i: (2 * i) ** 2
    if kind == "index":
        return lambda i: i
    raise UsageError(f"unknown subsequence {text!r} (linear | squares | even-squares | index)")


def cmd_average(args) -> int:
    from .nilseq import average_along

    psi = _psi_from(args.psi)
    if args.psi.startswith("target"):
        S = _seq_from("index")  # targets are indexed by position in the subsequence
    else:
        S = _seq_from(args.S)
    rep = average_along(psi, S, args.windows)
    _write_csv(args, rep.to_csv())
    print(f"oscillation {rep.oscillation:.6e}", file=sys.stderr)
    return EXIT_OK


def cmd_construct_2step(args) -> int:
    from .nilseq import build_two_step_witness, verify_two_step_witness

    w = build_two_step_witness(args.ell, args.N)
    art = w.to_json()
    art["config"] = {"ell": frac_to_str(args.ell), "N": args.N}
    summary = f"s={list(w.s)} alpha={w.alpha}"
    ok = True
    if args.N >= 1:
        v = verify_two_step_witness(w, args.N, 3 * w.ell)
        ok = v.passed
        summary += f"\n{v.pairs_checked} pairs checked with c={3 * w.ell}: {'pass' if ok else 'FAIL'}"
    _emit(args, art, summary)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_riesz(args) -> int:
    from .riesz import correlation_gap_check

    rep = correlation_gap_check(args.n_max, args.delta, args.seed, args.mode)
    _write_csv(args, rep.to_csv())
    art = {"schema": "interpolab/correlation-gap@1",
           "config": {"n_max": args.n_max, "delta": frac_to_str(args.delta), "seed": args.seed, "mode": args.mode},
           "min_gap": frac_to_str(rep.min_gap), "bound": frac_to_str(rep.bound)}
    if args.out or args.store:
        _emit(args, art, f"min gap {rep.min_gap} (bound {rep.bound})")
    else:
        print(f"min gap {rep.min_gap} (bound {rep.bound})", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_INVARIANT


def cmd_orbit(args) -> int:
    from .recurrence import doubling_orbit, orbit_csv

    arc = CircleInterval(args.forbid_left, args.forbid_right, True, False)
    rows = doubling_orbit(args.n_max, arc, n_min=args.n_min)
    _write_csv(args, orbit_csv(rows))
    verdicts = [v for _, _, v in rows]
    art = {"schema": "interpolab/doubling-orbit@1",
           "config": {"n_max": args.n_max, "n_min": args.n_min, "forbidden": arc.to_json()},
           "verdicts": verdicts}
    if args.out or args.store:
        _emit(args, art, f"{verdicts.count('outside')} outside, {verdicts.count('inside')} inside")
    return EXIT_OK


def cmd_verify(args) -> int:
    res = verify_path(args.path)
    print(f"{res.schema}: {'pass' if res.ok else 'FAIL'} ({res.detail})")
    return EXIT_OK if res.ok else EXIT_NEGATIVE


def cmd_acceptance(args) -> int:
    from .acceptance import run_all

    only = set(args.only) if args.only else None
    outcomes = run_all(only)
    for o in outcomes:
        print(o.line)
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_NEGATIVE


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="interpolab", description="Exact experiments on interpolation sets, "
                                "separability by rotations and Bohr recurrence.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def out_opts(sp):
        sp.add_argument("--out", help="write the JSON artifact here")
        sp.add_argument("--store", action="store_true", help="also store it under $INTERPOLAB_STORE")

    sp = sub.add_parser("gen", help="generate a finite prefix of an index family")
    sp.add_argument("--family", default="power", help="power | polynomial | grow | ap_blocks | explicit")
    sp.add_argument("--param", action="append", help="key=value (repeatable), e.g. base=2, a=2, b=-1")
    sp.add_argument("--spec-json", help="full generator spec as JSON (overrides --family/--param)")
    sp.add_argument("-N", type=int, required=True)
    out_opts(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("separate", help="decide or search for a separating rotation")
    sp.add_argument("--A", type=_int_list, required=True)
    sp.add_argument("--B", type=_int_list, required=True)
    sp.add_argument("--eps", type=_rational, required=True)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--budget", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--require-certificate", action="store_true")
    out_opts(sp)
    sp.set_defaults(func=cmd_separate)

    sp = sub.add_parser("nice-count", help="count collections of F-nice sets over critical regions")
    sp.add_argument("--F", type=_int_list, required=True)
    sp.add_argument("--eps", type=_rational, required=True)
    out_opts(sp)
    sp.set_defaults(func=cmd_nice_count)

    sp = sub.add_parser("recur", help="supmin of a set, or its recurrence threshold for --eps")
    sp.add_argument("--R", type=_int_list, required=True)
    sp.add_argument("--eps", type=_rational)
    sp.add_argument("--require-threshold", action="store_true")
    out_opts(sp)
    sp.set_defaults(func=cmd_recur)

    sp = sub.add_parser("partition", help="greedy two-set partition along an epsilon schedule")
    sp.add_argument("--R", type=_int_list, required=True)
    sp.add_argument("--schedule", type=_rational_list, required=True, help="e.g. 1,1/2,1/3")
    out_opts(sp)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("interpolate", help="build an interpolant for targets b on E")
    sp.add_argument("--E", type=_int_list, required=True)
    sp.add_argument("--b", type=_rational_list, required=True)
    sp.add_argument("--K", type=int, default=4)
    sp.add_argument("--eps-floor", type=_rational, default=Fraction(1, 256))
    sp.add_argument("--budget", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--nd-dim", type=int, default=2)
    sp.add_argument("--allow-fragile", action="store_true")
    out_opts(sp)
    sp.set_defaults(func=cmd_interpolate)

    sp = sub.add_parser("eval", help="evaluate a stored interpolant")
    sp.add_argument("--interpolant", required=True)
    sp.add_argument("--n", type=_int_list, required=True)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("average", help="window averages of a sequence along a subsequence (CSV)")
    sp.add_argument("--psi", required=True, help="trig:f1,f2 | quad:a | target:factor | const:v")
    sp.add_argument("--S", default="squares", help="linear | squares | even-squares")
    sp.add_argument("--windows", type=_windows, default=[(0, 100), (100, 1000), (1000, 10_000), (5000, 15_000)],
                    help="M:N,M:N,... (index windows (M, N])")
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_average)

    sp = sub.add_parser("construct-2step", help="fast lacunary set and nested-interval alpha")
    sp.add_argument("--ell", type=_rational, default=Fraction(1, 10))
    sp.add_argument("--N", type=int, default=3)
    out_opts(sp)
    sp.set_defaults(func=cmd_construct_2step)

    sp = sub.add_parser("riesz", help="Riesz-product correlation gap table (CSV)")
    sp.add_argument("--n-max", type=int, default=10)
    sp.add_argument("--delta", type=_rational, default=Fraction(1, 16))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=("zero", "random", "worst"), default="zero")
    sp.add_argument("--csv")
    out_opts(sp)
    sp.set_defaults(func=cmd_riesz)

    sp = sub.add_parser("orbit", help="certified doubling orbit of sum 2^(-k^2) (CSV)")
    sp.add_argument("--n-max", type=int, default=64)
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--forbid-left", type=_rational, default=Fraction(3, 4))
    sp.add_argument("--forbid-right", type=_rational, default=Fraction(1))
    sp.add_argument("--csv")
    out_opts(sp)
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("verify", help="re-verify a stored JSON artifact")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("acceptance", help="run the acceptance criteria")
    sp.add_argument("--only", type=_int_list)
    sp.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError, argparse.ArgumentTypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, RuntimeError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
