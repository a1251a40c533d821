"""Command line driver: parse presentations, run verification suites, export.

    dgkit check FILE --suite bar --R 4 --window -4..0 --out report.json
    dgkit export FILE --what presentation
    dgkit fixtures

FILE may name a bundled fixture (``m2x2.dgc``) instead of a path.  Exit
status: 0 when no executed check fails, 1 when one does, 2 for usage errors
or presentations that cannot be read.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources

from .report import VerificationReport, PASS, FAIL, INAPPLICABLE

SUITES = ("axioms", "envelopes", "signs", "bar", "xi", "idempotents", "morita", "counterexample")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# ---------------------------------------------------------------------------
# fixtures


def fixture_names():
    return sorted(p.name for p in resources.files("dgkit.fixtures").iterdir() if p.name.endswith(".dgc"))


def fixture_path(name):
    """Filesystem path of a bundled fixture (with or without the suffix)."""
    if not name.endswith(".dgc"):
        name += ".dgc"
    ref = resources.files("dgkit.fixtures").joinpath(name)
    if not ref.is_file():
        raise FileNotFoundError("no bundled fixture %r" % name)
    return str(ref)


def resolve(path):
    if os.path.exists(path):
        return path
    try:
        return fixture_path(os.path.basename(path))
    except FileNotFoundError:
        raise FileNotFoundError("%s: no such file or bundled fixture" % path) from None


# ---------------------------------------------------------------------------
# suites


def _objects(P):
    return list(P.objects())


def _pairs(objs):
    return [(x, y) for x in objs for y in objs]


def _window(P, params):
    return params.get("window") or getattr(P, "window", None) or (-4, 4)


def suite_axioms(P, params):
    from .core import check_axioms
    from .envelopes import check_mc
    rep = check_axioms(P)
    for name, obj in sorted(P.twix.items()):
        res = check_mc(P, obj)
        rep.add("mc %s" % name, FAIL if res else PASS, res)
    return rep


def sample_envelope(P, kind):
    """The envelope of the given kind on every base object, one shifted copy,
    a two-term sum and the presentation's twisted objects, where admitted."""
    from .envelopes import TwixCategory, singleton, direct_sum
    g = P.grading
    base = _objects(P)
    E = TwixCategory(P, kind)
    cands = [singleton(g, x) for x in base]
    if kind in ("sb", "twix", "pretr"):
        cands.append(singleton(g, base[-1], g.iota))
    if kind in ("add", "twix", "pretr") and len(base) > 1:
        cands.append(direct_sum(singleton(g, base[0]), singleton(g, base[1])))
    cands += [o for _, o in sorted(P.twix.items())]
    for o in cands:
        if E.admits(o) is None:
            try:
                E.add_object(o)
            except ValueError:
                pass
    return E


def suite_envelopes(P, params):
    from .core import check_axioms, check_functor
    from .envelopes import eta, check_structure_maps
    from .duality import envelope_op_iso, double_op_defect
    rep = VerificationReport("envelopes")
    if not _objects(P):
        rep.add("envelopes", INAPPLICABLE, None, "no objects")
        return rep
    for kind in ("sb", "add", "tw", "twix", "pretr"):
        E = sample_envelope(P, kind)
        objs = E.objects()
        rep.extend(check_axioms(E, objs), "%s: " % kind)
        F = eta(P, E)
        rep.extend(check_functor(F, _objects(P), fully_faithful=True), "%s: eta " % kind)
        for o in objs:
            if len(o) > 1:
                rep.extend(check_structure_maps(E, o), "%s: %r " % (kind, o))
        iso = envelope_op_iso(E, "derived")
        rep.extend(check_functor(iso, objs), "%s: op-iso " % kind)
        bad = double_op_defect(E, objs, "involutive")
        rep.add("%s: op-iso twice = id [involutive]" % kind, FAIL if bad else PASS, bad)
    return rep


def suite_signs(P, params):
    from .duality import sign_oracle_sweep
    from .bar import sign_expansion_check
    rep = sign_oracle_sweep(P.grading, seed=params["seed"])
    rep.extend(sign_expansion_check(params["r"], params["nmax"]))
    rep.suite = "signs"
    return rep


def suite_bar(P, params):
    from .bar import BarBimodule, check_counit, check_primed, counit_map
    from .bimodules import check_bimodule
    from .homotopy import is_quasi_iso
    objs = _objects(P)
    rep = VerificationReport("bar")
    if not objs:
        rep.add("bar", INAPPLICABLE, None, "no objects")
        return rep
    B = BarBimodule(P, objs, params["R"])
    rep.extend(check_bimodule(B, objs, objs))
    rep.extend(check_counit(B, _pairs(objs)))
    rep.extend(check_primed(B, _pairs(objs)))
    rep.extend(is_quasi_iso(counit_map(B), _pairs(objs), _window(P, params)), "counit quasi-iso ")
    return rep


def suite_xi(P, params):
    from .bar import ComparisonMap, check_comparison, NotNilpotent
    from .envelopes import ContractError
    from .homotopy import default_sample
    from .envelopes import TwixCategory
    rep = VerificationReport("xi")
    if not _objects(P):
        rep.add("xi", INAPPLICABLE, None, "no objects")
        return rep
    for kind in ("sb", "add", "tw", "pretr"):
        E = TwixCategory(P, kind)
        if kind == "tw":
            sample = [o for _, o in sorted(P.twix.items()) if E.admits(o) is None]
        else:
            sample = default_sample(E, P)
        sample = [o for o in sample if E.admits(o) is None]
        if not sample:
            rep.add("%s" % kind, INAPPLICABLE, None, "no sample objects of this envelope")
            continue
        for o in sample:
            E.add_object(o)
        try:
            xi = ComparisonMap(E, sample, params["r"])
        except (NotNilpotent, ContractError) as exc:
            rep.add("%s" % kind, INAPPLICABLE, None, str(exc))
            continue
        rep.extend(check_comparison(xi, _pairs(sample)), "%s: " % kind)
    return rep


def suite_idempotents(P, params):
    from .idempotents import (RelativeCoalgebra, build_AC, build_PC, check_twist,
                              check_cocone_identity, verify_H_contraction, bar_equals_PC)
    from .homotopy import semiorthogonality, exactness_checks
    from .bimodules import IdentityBimodule
    objs = _objects(P)
    rep = VerificationReport("idempotents")
    if not objs:
        rep.add("idempotents", INAPPLICABLE, None, "no objects")
        return rep
    R, window = params["R"], _window(P, params)
    N = max(R, 1)
    co = RelativeCoalgebra(P, objs)
    pairs = _pairs(objs)
    rep.extend(check_twist(build_AC(co, N), pairs), "A_C ")
    rep.extend(check_twist(build_PC(co, N), pairs), "P_C ")
    rep.extend(check_cocone_identity(co, N, pairs), "cocone ")
    rep.extend(verify_H_contraction(co, N, pairs), "H ")
    rep.extend(bar_equals_PC(P, objs, R), "bar=P_C ")
    rep.extend(semiorthogonality(P, R, window), "semiortho ")
    # Bar (x) B (x) Bar grows cubically in the truncation, so one bar letter suffices here
    ex = exactness_checks(IdentityBimodule(P), min(R, 1), window)
    rep.add("identity bimodule projective [R<=1]", ex.status_of("projective"))
    return rep


def suite_morita(P, params):
    from .homotopy import morita_witness
    rep = VerificationReport("morita")
    if not _objects(P):
        rep.add("morita", INAPPLICABLE, None, "no objects")
        return rep
    for kind in ("sb", "add"):
        rep.extend(morita_witness(P, kind, params["R"], _window(P, params)), "%s: " % kind)
    return rep


def suite_counterexample(P, params):
    from .homotopy import counterexample_report
    return counterexample_report(P)


RUNNERS = {
    "axioms": suite_axioms, "envelopes": suite_envelopes, "signs": suite_signs,
    "bar": suite_bar, "xi": suite_xi, "idempotents": suite_idempotents,
    "morita": suite_morita, "counterexample": suite_counterexample,
}


def run_suite(name, P, params):
    """Run one named suite on a presentation; params carry R, window, r, nmax, seed."""
    if name not in RUNNERS:
        raise KeyError("unknown suite %r" % name)
    full = {"R": 2, "window": None, "r": 2, "nmax": 3, "seed": 0}
    full.update(params)
    rep = RUNNERS[name](P, full)
    rep.suite = name
    rep.seed = full["seed"]
    rep.params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(full.items())
                  if k in ("R", "window", "r", "nmax")}
    if rep.params.get("window") is None:
        rep.params["window"] = list(_window(P, full))
    return rep


# ---------------------------------------------------------------------------
# argument parsing


def _window_arg(text):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like lo..hi") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("empty window %s" % text)
    return (lo, hi)


def build_parser():
    p = argparse.ArgumentParser(prog="dgkit", description="Exact verification for finitely presented dg categories.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run verification suites on a presentation")
    c.add_argument("file")
    c.add_argument("--suite", action="append", choices=SUITES + ("all",),
                   help="suite to run (repeatable; default axioms)")
    c.add_argument("--R", type=int, default=2, help="bar truncation length")
    c.add_argument("--window", type=_window_arg, default=None, help="height window lo..hi")
    c.add_argument("--r", type=int, default=2, help="maximal word length for sign and Xi checks")
    c.add_argument("--nmax", type=int, default=3, help="maximal twist count in sign sweeps")
    c.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")
    c.add_argument("--out", help="write the JSON report here")
    c.add_argument("--timing", action="store_true", help="print per-suite wall time to stderr")
    c.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    c.add_argument("--quiet", action="store_true", help="print nothing; rely on --out and the exit code")

    e = sub.add_parser("export", help="export a presentation, bar differentials or a report")
    e.add_argument("file")
    e.add_argument("--what", choices=("presentation", "bar"), default="presentation")
    e.add_argument("--R", type=int, default=2)
    e.add_argument("--objects", nargs=2, metavar=("X", "Y"))
    e.add_argument("--window", type=_window_arg, default=None)
    e.add_argument("--out")

    sub.add_parser("fixtures", help="list bundled fixtures")
    return p


def _load(path):
    """(presentation, None) or (None, message).  Axioms are not checked here."""
    from .presentation import parse, ParseError
    try:
        return parse(resolve(path), check=False), None
    except (FileNotFoundError, IsADirectoryError) as exc:
        return None, str(exc)
    except ParseError as exc:
        return None, "parse error: %s" % exc


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args):
    P, err = _load(args.file)
    if P is None:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    suites = args.suite or ["axioms"]
    if "all" in suites:
        suites = list(SUITES)
    params = {"R": args.R, "window": args.window, "r": args.r, "nmax": args.nmax, "seed": args.seed}
    reports = []
    # every other suite presupposes a dg category, so a failing axiom check stops here
    if suites != ["axioms"]:
        gate = run_suite("axioms", P, params)
        if not gate.ok:
            suites = ["axioms"]
    for name in suites:
        t = time.perf_counter()
        rep = run_suite(name, P, params)
        if args.timing:
            print("%s: %.2fs" % (name, time.perf_counter() - t), file=sys.stderr)
        reports.append(rep)
        if not (args.quiet or args.json):
            print("== %s" % name)
            print(rep)
    doc = [r.to_json() for r in reports]
    text = json.dumps(doc if len(doc) > 1 else doc[0], indent=2, sort_keys=True) + "\n"
    if args.out:
        _emit(text, args.out)
    if args.json and not args.quiet:
        sys.stdout.write(text)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_export(args):
    from .presentation import export
    from .bar import BarBimodule, export_bar
    P, err = _load(args.file)
    if P is None:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    if args.what == "presentation":
        _emit(export(P), args.out)
        return EXIT_OK
    objs = _objects(P)
    x, y = args.objects or (objs[0], objs[0])
    if x not in objs or y not in objs:
        print("unknown objects %s %s" % (x, y), file=sys.stderr)
        return EXIT_USAGE
    _emit(export_bar(BarBimodule(P, objs, args.R), x, y, args.window), args.out)
    return EXIT_OK


def _join_window(argv):
    """Let ``--window -4..0`` through: argparse would read -4..0 as an option."""
    out, it = [], iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append(a if nxt is None else "--window=" + nxt)
        else:
            out.append(a)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_join_window(sys.argv[1:] if argv is None else argv))
    if args.command == "fixtures":
        print("\n".join(fixture_names()))
        return EXIT_OK
    if args.command == "check":
        return cmd_check(args)
    return cmd_export(args)


if __name__ == "__main__":
    sys.exit(main())
