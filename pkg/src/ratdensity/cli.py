"""Command-line front end.

Exit status: 0 on success, 2 when an assumption was refuted (density with a
failed cross-check, probe verdict "refuted"), 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import automata as fa
from . import density as dn
from . import skewprod
from .errors import ConfigError, DensityError
from .measures import validate
from .monoid import eggbox_dot, green_structure, j_class_of_shift, transition_monoid
from .specs import load_language, load_measure, load_shift

METHODS = [m.value for m in dn.Method]


def _add_common(p, measure=True, lang=True, shift=True):
    if measure:
        p.add_argument("--measure", help="measure spec (JSON file or inline JSON)")
    if lang:
        p.add_argument("--lang", help="regex, or @path to a DFA text file")
    if shift:
        p.add_argument("--shift", help="shift spec (JSON); defaults to the measure's support")
    p.add_argument("--mode", choices=["exact", "approx"], default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int, default=2000,
                   help="truncation horizon N (also orbit length for probes)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratdensity",
                                     description="Densities of rational languages.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="density of a language")
    _add_common(p)
    p.add_argument("--method", choices=METHODS, help="bypass the dispatcher")
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("eggbox", help="Graphviz picture of the Green structure")
    _add_common(p, measure=False, shift=False)
    p.add_argument("--alphabet", default=None)

    p = sub.add_parser("jclass", help="J-class of a shift in a transition monoid")
    _add_common(p)
    p.add_argument("--alphabet", default=None)

    p = sub.add_parser("series", help="generating series p(z)/q(z)")
    _add_common(p, shift=False)

    p = sub.add_parser("validate", help="check measure identities")
    _add_common(p, lang=False, shift=False)
    p.add_argument("--depth", type=int, default=4)

    p = sub.add_parser("probe", help="empirical ergodicity probe of a skew product")
    _add_common(p)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--pairs", type=int, default=64)

    p = sub.add_parser("sample", help="sample a word from a measure")
    _add_common(p, lang=False, shift=False)
    p.add_argument("--length", type=int, default=64)
    return parser


def _measure(args):
    if not args.measure:
        raise ConfigError("--measure is required for this command")
    return load_measure(args.measure, exact=args.mode == "exact")


def _shift(args, mu=None):
    if getattr(args, "shift", None):
        return load_shift(args.shift)
    if mu is not None:
        return mu.support()
    raise ConfigError("give --shift or --measure")


def _language(args, alphabet):
    if not args.lang:
        raise ConfigError("--lang is required for this command")
    return load_language(args.lang, alphabet)


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


def _result_text(r: dn.DensityResult) -> str:
    d = r.to_dict()
    lines = [f"value: {d['value']}", f"method: {d['method']}",
             f"error_bound: {d['error_bound']}"]
    if "strong_sense" in d:
        lines.append(f"strong_sense: {str(d['strong_sense']).lower()}")
    for a in d["assumptions"]:
        lines.append(f"assumption: {a}")
    if r.refuted:
        lines.append("refuted: true")
    return "\n".join(lines)


def _run_method(name, mu, L, x, args) -> dn.DensityResult:
    M = dn.Method(name)
    if M is dn.Method.RIGHT_IDEAL:
        return dn.density_right_ideal(mu, L)
    if M is dn.Method.LEFT_IDEAL:
        return dn.density_left_ideal(mu, L)
    if M is dn.Method.QUASI_IDEAL:
        if not fa.equivalent(L, fa.intersect(fa.right_ideal_closure(L), fa.left_ideal_closure(L))):
            raise DensityError("language is not the intersection of LA* and A*L")
        return dn.density_quasi_ideal(mu, fa.right_ideal_closure(L), fa.left_ideal_closure(L),
                                      mixing=mu.is_mixing())
    if M is dn.Method.TWO_SIDED_IDEAL:
        return dn.density_two_sided_ideal(mu, L, x)
    if M is dn.Method.APERIODIC:
        return dn.density_aperiodic(mu, L, x)
    if M is dn.Method.ERGODIC_SKEW:
        return dn.density_ergodic_formula(mu, L, x)
    if M is dn.Method.EXACT_CESARO:
        return dn.density_exact_cesaro(mu, L)
    if M is dn.Method.TRUNCATED_CESARO:
        return dn.density_truncated_cesaro(mu, L, args.horizon)
    return dn.density_monte_carlo(mu, L, args.samples, min(args.horizon, 500), args.seed)


def cmd_density(args) -> int:
    mu = _measure(args)
    x = _shift(args, mu)
    L = _language(args, mu.alphabet)
    if args.method:
        r = _run_method(args.method, mu, L, x, args)
    else:
        r = dn.density(mu, L, x, cross_check_N=args.horizon)
    _emit(args, r.to_dict(), _result_text(r))
    return 2 if r.refuted else 0


def _monoid_language(args):
    mu = load_measure(args.measure, args.mode == "exact") if getattr(args, "measure", None) else None
    alphabet = args.alphabet or (mu.alphabet if mu else None)
    if alphabet is None and getattr(args, "shift", None):
        alphabet = load_shift(args.shift).alphabet
    return mu, load_language(args.lang or "", alphabet)


def cmd_eggbox(args) -> int:
    _, L = _monoid_language(args)
    g = green_structure(transition_monoid(L))
    print(eggbox_dot(g))
    return 0


def cmd_jclass(args) -> int:
    mu, L = _monoid_language(args)
    x = _shift(args, mu)
    if tuple(L.alphabet) != tuple(x.alphabet):
        L = fa.with_alphabet(L, x.alphabet)
    m = transition_monoid(L)
    report = j_class_of_shift(m, x)
    data = report.to_dict(m)
    text = "\n".join([f"monoid size: {len(m)}", f"J_X: {', '.join(data['j_x'])}",
                      f"d: {report.d}", f"X-degree: {report.x_degree}",
                      f"R-classes meeting the image: {data['r_classes_meeting_image']}",
                      f"horizon-conditional: {str(report.horizon_conditional).lower()}"])
    _emit(args, data, text)
    return 0


def cmd_series(args) -> int:
    mu = _measure(args)
    L = _language(args, mu.alphabet)
    s = dn.generating_series(mu, L)
    payload = {"series": str(s), "numerator": [str(c) for c in s.numerator],
               "denominator": [str(c) for c in s.denominator], "density": str(s.density())}
    _emit(args, payload, f"{s}\ndensity: {s.density()}")
    return 0


def cmd_validate(args) -> int:
    mu = _measure(args)
    report = validate(mu, depth=args.depth)
    payload = {k: (str(v) if not isinstance(v, (int, bool, str)) else v) for k, v in report.items()}
    payload["status"] = "pass"
    _emit(args, payload, f"measure identities hold to depth {args.depth}")
    return 0


def cmd_probe(args) -> int:
    mu = _measure(args)
    x = _shift(args, mu)
    L = _language(args, mu.alphabet)
    m = transition_monoid(L)
    sp = skewprod.build(m, x)
    report = skewprod.ergodicity_probe(sp, mu, trials=args.trials, N=args.horizon,
                                       seed=args.seed, pairs=args.pairs)
    _emit(args, report.to_dict(),
          f"verdict: {report.verdict}\nmax deviation: {report.max_deviation:.3g}\n"
          f"pairs flagged: {sum(p['flagged'] for p in report.pairs)} of {len(report.pairs)}")
    return 2 if report.verdict == "refuted" else 0


def cmd_sample(args) -> int:
    mu = _measure(args)
    w = skewprod.sample_window(mu, args.length, np.random.default_rng(args.seed))
    _emit(args, {"word": w, "seed": args.seed}, w)
    return 0


COMMANDS = {"density": cmd_density, "eggbox": cmd_eggbox, "jclass": cmd_jclass,
            "series": cmd_series, "validate": cmd_validate, "probe": cmd_probe,
            "sample": cmd_sample}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SyntaxError as exc:
        print(f"error: SyntaxError: {exc}", file=sys.stderr)
    except (DensityError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
