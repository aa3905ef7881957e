"""Command line interface: ``thetadesigns <subcommand> ...``.

Exit status is 0 on success, 1 when an operation rejects its input or a
reproduced check fails, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import __version__
from .errors import DomainError, ParseError

DEFAULT_CUTOFF = 1200


class UsageError(Exception):
    """A required choice between options was not made (exit status 2)."""


class CheckFailed(Exception):
    """A reproduced check did not match; the report is still printed."""


# ----------------------------------------------------------------------
# argument helpers

def parse_norms(tokens: Sequence[str], grid: Iterable[Fraction] | None = None) -> list[Fraction]:
    """Expand norm tokens: values (``7``, ``17/4``), ranges ``a..b`` and filters ``mod:r,k``.

    Ranges select the points of ``grid`` (or the integers when no grid is
    given) between a and b; ``mod:r,k`` keeps norms congruent to r mod k.
    """
    picked: list[Fraction] = []
    filters: list[tuple[Fraction, int]] = []
    grid = list(grid) if grid is not None else None
    for tok in tokens:
        for part in [p for p in re.split(r"[\s;]+", tok) if p]:
            m = re.fullmatch(r"mod:([0-9/]+),(\d+)", part)
            if m:
                filters.append((Fraction(m.group(1)), int(m.group(2))))
                continue
            m = re.fullmatch(r"([0-9/]+)\.\.([0-9/]+)", part)
            try:
                if m:
                    lo, hi = Fraction(m.group(1)), Fraction(m.group(2))
                    if grid is None:
                        picked += [Fraction(x) for x in range(int(-(-lo // 1)), int(hi // 1) + 1)]
                    else:
                        picked += [x for x in grid if lo <= x <= hi]
                    continue
                picked += [Fraction(x) for x in part.split(",") if x]
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad norm list {part!r}") from None
    for r, k in filters:
        picked = [x for x in picked if ((x - r) / k).denominator == 1]
    out = sorted(set(picked))
    if not out:
        raise ParseError("no norms selected")
    return out


def _num(x) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _emit(args, obj: dict, text: Callable[[], str], tsv: Callable[[], str] | None = None) -> None:
    if args.format == "json":
        doc = {"tool": "thetadesigns", "version": __version__, "cutoff": _num(args.cutoff), "body": obj}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    elif args.format == "tsv":
        if tsv is None:
            raise DomainError("this subcommand has no TSV output")
        sys.stdout.write(tsv())
    else:
        sys.stdout.write(text())


def _table(header: Sequence[str], rows: Iterable[Sequence[object]], sep: str = "\t") -> str:
    lines = [sep.join(header)] + [sep.join(str(c) for c in r) for r in rows]
    return "\n".join(lines) + "\n"


def _family(args):
    from . import strength as st
    name = args.family
    try:
        if name == "cubic":
            return st.cubic(args.n)
        if name == "witt":
            return st.witt(args.n)
        if name in ("E8", "rank16", "leech"):
            return st.even_selfdual(name)
        if name == "niemeier":
            return st.even_selfdual("niemeier", h=args.h)
        if name == "long-shadow":
            return st.long_shadow(args.n, args.h)
        if name == "shorter-leech":
            return st.long_shadow(23)
        if name == "min1":
            return st.long_shadow_min1(args.p, args.N, args.h)
        if name == "odd24":
            return st.odd24(args.h, args.case)
        if name == "residual":
            return st.residual(args.n, args.N, args.h, args.case)
        if name == "construction-a-even":
            return st.construction_a_even(args.n)
    except TypeError:
        raise DomainError(f"family {name} is missing a parameter (see --help)") from None
    raise DomainError(f"unknown family {name!r}")


FAMILIES = ["cubic", "witt", "E8", "rank16", "leech", "niemeier", "long-shadow", "shorter-leech", "min1",
            "odd24", "residual", "construction-a-even"]


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int, help="rank")
    p.add_argument("--N", type=int, help="rank of the part without norm-1 vectors")
    p.add_argument("--p", type=int, help="number of split-off unit vectors")
    p.add_argument("--h", type=int, help="Coxeter number of the norm-2 roots")
    p.add_argument("--case", help="family case (odd24: se/nse/empty, residual: i/ii/iii)")


# ----------------------------------------------------------------------
# subcommands

def cmd_theta(args) -> int:
    from .modforms import expand_to, parse_form, shadow
    from .strength import family_theta
    if args.form:
        poly, label = parse_form(args.form), args.form
    elif args.family:
        fd = _family(args)
        poly, label = family_theta(fd), f"Theta({fd.name})"
    else:
        raise UsageError("give --form or --family")
    if args.shadow:
        poly, label = shadow(poly), f"Sh({label})"
    series = expand_to(poly, args.cutoff)
    rows = [(Fraction(e, 8), c) for e, c in series.terms()]
    obj = {"form": label, "polynomial": str(poly), "coefficients": [[str(m), str(c)] for m, c in rows]}
    _emit(args, obj, lambda: f"# {label} = {poly}\n" + _table(["norm", "coefficient"], rows),
          lambda: _table(["norm", "coefficient"], rows))
    return 0


def cmd_shells(args) -> int:
    from .lattice import build, shadow_coset
    from .shells import enumerate_shell
    lat = build(args.lattice)
    shift = shadow_coset(lat).shift_coords if args.shadow else None
    norms = parse_norms(args.norms)
    if args.format == "tsv":
        if len(norms) != 1:
            raise DomainError("TSV export takes a single norm")
        shell = enumerate_shell(lat, norms[0], shift, ceiling=args.ceiling)
        sys.stdout.write(shell.to_tsv())
        return 0
    rows = [(m, len(enumerate_shell(lat, m, shift, ceiling=args.ceiling))) for m in norms]
    obj = {"lattice": lat.name, "shadow": args.shadow,
           "shells": [{"norm": str(m), "size": c} for m, c in rows]}
    _emit(args, obj, lambda: _table(["norm", "size"], rows))
    return 0


def cmd_strength(args) -> int:
    from .strength import StrengthEngine, theorem_report
    if args.theorem:
        rep = theorem_report(args.theorem, args.cutoff)
        _emit(args, rep.to_json_obj(), rep.to_text)
        if not rep.passed:
            raise CheckFailed(f"theorem table {args.theorem} does not match")
        return 0
    if not args.family:
        raise UsageError("give --family or --theorem")
    fd = _family(args)
    norms_hint = args.norms or [f"1..{args.cutoff}"]
    top = max(Fraction(x) for t in norms_hint for x in re.findall(r"[0-9]+(?:/[0-9]+)?", t.replace("mod:", "X")))
    engine = StrengthEngine(fd, args.shadow, max(top, Fraction(1)), args.max_degree)
    norms = parse_norms(norms_hint, engine.grid())
    reports = [engine.report(m) for m in norms]
    rows = [(r.norm, r.shell_size, r.status, "exact" if r.verdict.exact else "lower_bound",
             ",".join(str(d) for d, _ in r.verdict.failing) or "-") for r in reports]
    obj = {"family": fd.to_json_obj(), "shadow": args.shadow, "max_degree": engine.max_degree,
           "shells": [r.to_json_obj() for r in reports]}
    header = ["norm", "size", "strength", "exactness", "failing"]
    _emit(args, obj, lambda: f"# {'Sh(' + fd.name + ')' if args.shadow else fd.name}\n" + _table(header, rows),
          lambda: _table(header, rows))
    return 0


def cmd_verify_design(args) -> int:
    from .designs import strength, strength_from_distribution
    from .lattice import build, shadow_coset
    from .shells import enumerate_shell
    lat = build(args.lattice)
    m = Fraction(args.norm)
    if args.method == "orbits":
        from .symmetric import lattice_model
        model = lattice_model(lat, args.shadow)
        size = model.size(m)
        if not size:
            raise DomainError(f"shell of norm {m} is empty")
        verdict = strength_from_distribution(model.distribution(m), m, lat.rank, args.max_degree)
    else:
        shift = shadow_coset(lat).shift_coords if args.shadow else None
        shell = enumerate_shell(lat, m, shift, ceiling=args.ceiling)
        size = len(shell)
        verdict = strength(shell, args.max_degree)
    obj = {"lattice": lat.name, "shadow": args.shadow, "norm": str(m), "size": size, "method": args.method,
           "max_degree": args.max_degree, "verdict": verdict.to_json_obj()}
    fails = ", ".join(f"{d} (kernel sum {k})" for d, k in verdict.failing) or "none"
    text = (f"{'Sh(' + lat.name + ')' if args.shadow else lat.name} norm {m}: {size} vectors\n"
            f"strength {verdict.label} ({'exact' if verdict.exact else 'lower bound'})\n"
            f"failing degrees: {fails}\n")
    _emit(args, obj, lambda: text)
    return 0


def cmd_scan(args) -> int:
    from .strength import lemma_scan, scan_zeros
    if args.lemma:
        results = lemma_scan(args.max if args.max is not None else args.cutoff)
        bad = [r for r in results if r.passed is False]
        obj = {"scans": [r.to_json_obj() for r in results if r.zeros or r.predicted],
               "forms_scanned": len(results), "failures": [r.form for r in bad]}

        def text() -> str:
            lines = [f"{len(results)} forms scanned, {len(bad)} failures"]
            for r in results:
                if r.zeros or r.predicted:
                    zs = ", ".join(str(z) for z in r.zeros[:8]) + (" ..." if len(r.zeros) > 8 else "")
                    lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.form:<24} [{r.expectation}] {zs}")
            return "\n".join(lines) + "\n"
        _emit(args, obj, text)
        if bad:
            raise CheckFailed("zero pattern mismatch")
        return 0
    if not args.form:
        raise UsageError("give --form or --lemma")
    res = scan_zeros(args.form, args.max if args.max is not None else args.cutoff, args.expect)
    verdict = {True: "PASS", False: "FAIL", None: "NO-PREDICTION"}[res.passed]

    def text() -> str:
        z = ", ".join(str(x) for x in res.zeros) or "none"
        out = f"{res.form} up to q^{res.cutoff}: zeros {z}\n"
        if res.passed is not None:
            out += f"expected [{res.expectation}]: extras {[str(x) for x in res.extras]}, "
            out += f"missing {[str(x) for x in res.missing]}\n"
        return out + verdict + "\n"
    _emit(args, res.to_json_obj(), text)
    if res.passed is False:
        raise CheckFailed("zero pattern mismatch")
    return 0


def cmd_tau(args) -> int:
    from .strength import tau_scan
    override = {}
    for item in args.inject or []:
        m = re.fullmatch(r"(\d+)=(-?\d+)", item)
        if not m:
            raise ParseError(f"--inject expects m=value, got {item!r}")
        override[int(m.group(1))] = int(m.group(2))
    max_m = args.max if args.max is not None else args.cutoff
    rep = tau_scan(max_m, override or None)

    def text() -> str:
        head = ", ".join(str(v) for v in rep.values[:10])
        lines = [f"tau(1..{max_m}): {head}{', ...' if max_m > 10 else ''}",
                 f"nonvanishing: {'yes' if rep.nonvanishing else 'no'} (zeros: {list(rep.zeros) or 'none'})",
                 f"degree-8 E8 condition agrees with tau = 0 at every m: "
                 f"{'yes' if not rep.wiring_mismatches else 'no'}"]
        for c in rep.consequences:
            lines.append(f"  tau({c['m']}) = 0: (W8)_{c['norm']} strength {c['E8']}, "
                         f"rank-16 shells strength {c['rank16']}")
        return "\n".join(lines) + "\n"
    _emit(args, rep.to_json_obj(), text)
    if rep.wiring_mismatches:
        raise CheckFailed("E8 degree-8 condition disagrees with tau")
    return 0


def cmd_root_systems(args) -> int:
    from . import rootsys as rs
    if args.classify is not None:
        cls = rs.classify(args.classify, args.n_max)
        _emit(args, cls.to_json_obj(), cls.to_text)
        return 0
    if args.profile:
        prof = rs.coxeter_profile(args.profile)
        _emit(args, prof.to_json_obj(), lambda: json.dumps(prof.to_json_obj(), sort_keys=True) + "\n")
        return 0
    if args.condition:
        n, h, d = args.condition
        v = rs.condition_value(n, h, d)
        obj = {"n": n, "h": h, "degree": d, "value": str(v), "holds": v == 0}
        _emit(args, obj, lambda: f"C{d}(n={n}, h={h}) = {v}\n")
        return 0
    if args.triple:
        rep = rs.validate_triple(*args.triple)
        _emit(args, rep.to_json_obj(), lambda: json.dumps(rep.to_json_obj(), sort_keys=True) + "\n")
        if not rep.valid:
            raise CheckFailed("triple is inconsistent")
        return 0
    raise UsageError("give --classify, --profile, --condition or --triple")


def cmd_certify_growth(args) -> int:
    from .modforms import DE8, TH3, expand_to, parse_form
    from .strength import growth_certificate, shadow_growth_inputs
    target = args.target
    if args.phi0 or args.psi:
        if not (args.phi0 and args.psi):
            raise DomainError("give both --phi0 and --psi")
        phi0, psi = expand_to(parse_form(args.phi0), target), expand_to(parse_form(args.psi), target)
        label = f"{args.phi0} * ({args.psi})^n"
    elif args.family == "shadow":
        phi0, psi = shadow_growth_inputs(target)
        label = "-16 Sh(De8)(z/2) * (q^(-1/8) Th2(z/2))^n"
    else:
        phi0, psi = expand_to(DE8, target), expand_to(TH3, target)
        label = "De8 * Th3^n"
    cert = growth_certificate(phi0, psi, args.n, target)
    obj = dict(cert.to_json_obj(), series=label)
    text = (f"{label}, n={args.n}: M_n {'>=' if cert.certified else '='} {cert.bound} "
            f"(target {target}: {'certified' if cert.certified else 'not reached'}; "
            f"monotone in n: {'yes' if cert.monotone else 'no'})\n")
    _emit(args, obj, lambda: text)
    if not cert.certified:
        raise CheckFailed("growth target not reached")
    return 0


def cmd_catalog(args) -> int:
    from .rootsys import load_catalog
    cat = load_catalog()
    body = {args.section: cat[args.section]} if args.section else cat

    def text() -> str:
        lines = []
        for sec, recs in body.items():
            lines.append(f"[{sec}]")
            for r in recs:
                lines.append("  " + "  ".join(f"{k}={v}" for k, v in r.items()))
        return "\n".join(lines) + "\n"
    _emit(args, body, text)
    return 0


# ----------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # Subcommands repeat the global flags without defaults, so a value
        # given before the subcommand is not overwritten after it.
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--cutoff", type=int, default=d(DEFAULT_CUTOFF), help="largest norm (default 1200)")
        g.add_argument("--threads", type=int, default=d(1), help="worker cap (computations run in one process)")
        g.add_argument("--format", choices=["text", "json", "tsv"], default=d("text"))
        g.add_argument("--timing", action="store_true", default=d(False), help="report elapsed time on stderr")
        return g

    common = global_flags(True)
    p = argparse.ArgumentParser(prog="thetadesigns", parents=[global_flags(False)],
                                description="Theta series of selfdual lattices and design strengths of shells.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("theta", parents=[common], help="q-expansion of a form or a family theta series")
    s.add_argument("--form", help='form expression, e.g. "Phi*Th3^7*De8"')
    _add_family_args(s)
    s.add_argument("--shadow", action="store_true")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("shells", parents=[common], help="enumerate lattice or shadow shells")
    s.add_argument("--lattice", required=True, help="e.g. Z:7, Witt:12, E8, CA:hamming7, Witt:12+Witt:12")
    s.add_argument("--norms", nargs="+", required=True)
    s.add_argument("--shadow", action="store_true")
    s.add_argument("--ceiling", type=int, default=10 ** 7)
    s.set_defaults(func=cmd_shells)

    s = sub.add_parser("strength", parents=[common], help="shell strengths from weighted theta series")
    _add_family_args(s)
    s.add_argument("--norms", nargs="+")
    s.add_argument("--shadow", action="store_true")
    s.add_argument("--max-degree", type=int, default=None)
    s.add_argument("--theorem", choices=["cubic", "witt", "even", "long_shadow", "odd24"],
                   help="reproduce a theorem table up to --cutoff")
    s.set_defaults(func=cmd_strength)

    s = sub.add_parser("verify-design", parents=[common], help="kernel-sum strength of one shell")
    s.add_argument("--lattice", required=True)
    s.add_argument("--norm", required=True)
    s.add_argument("--shadow", action="store_true")
    s.add_argument("--max-degree", type=int, default=16)
    s.add_argument("--method", choices=["enumerate", "orbits"], default="enumerate")
    s.add_argument("--ceiling", type=int, default=10 ** 7)
    s.set_defaults(func=cmd_verify_design)

    s = sub.add_parser("scan", parents=[common], help="zero coefficients of a form")
    s.add_argument("--form")
    s.add_argument("--max", type=Fraction, default=None, help="largest exponent (default --cutoff)")
    s.add_argument("--expect", help='predicted zero set, e.g. "4^a(8b+3)"')
    s.add_argument("--lemma", action="store_true", help="scan the whole monomial table")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("tau", parents=[common], help="Ramanujan tau scan")
    s.add_argument("--max", type=int, default=None, help="largest m (default --cutoff)")
    s.add_argument("--inject", nargs="*", help="synthetic values m=v, e.g. 5=0")
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("root-systems", parents=[common], help="root-system conditions and classification")
    s.add_argument("--classify", type=int, metavar="DEGREE")
    s.add_argument("--n-max", type=int, default=100)
    s.add_argument("--profile", metavar="ROOTS")
    s.add_argument("--condition", nargs=3, type=int, metavar=("N", "H", "DEGREE"))
    s.add_argument("--triple", nargs=3, metavar=("R", "S", "T"))
    s.set_defaults(func=cmd_root_systems)

    s = sub.add_parser("certify-growth", parents=[common], help="positivity prefix of phi0 * psi^n")
    s.add_argument("--family", choices=["cubic", "shadow"], default="cubic")
    s.add_argument("--phi0")
    s.add_argument("--psi")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--target", type=int, required=True)
    s.set_defaults(func=cmd_certify_growth)

    s = sub.add_parser("catalog", parents=[common], help="print the parameter catalog")
    s.add_argument("--section", choices=["niemeier", "long_shadow", "odd24_pairs"])
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max", None) is not None:
        # the per-command horizon is the cutoff that the report embeds
        args.cutoff = args.max
    start = time.perf_counter()
    try:
        code = args.func(args)
    except UsageError as exc:
        parser.error(f"{args.command}: {exc}")
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        code = 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
