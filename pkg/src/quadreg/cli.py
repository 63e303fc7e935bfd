"""Command-line interface: ``quadreg <command> [options]``.

Exit codes: 0 success, 1 a verified check failed, 2 usage or parse error,
3 a resource cap was hit.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys

from .field import DEFAULT_PRIME, FieldError, FieldSpec
from .groebner import Caps, ResourceCapExceeded, buchberger, initial_ideal
from .invariants import hilbert_ci_check, hilbert_series, is_regular_sequence
from .jsonio import emit_json
from .koszul import DEFAULT_MAX_DIM, compute_betti
from .parser import ParseError, parse_lines
from .poly import Frame, FrameError, MonomialOrder, PolyRing, format_poly

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("quadreg")


class UsageError(Exception):
    pass


def parse_field(text: str) -> FieldSpec:
    t = text.strip().upper()
    if t in ("QQ", "Q", "0"):
        return FieldSpec(0)
    if t.startswith("GF(") and t.endswith(")"):
        t = t[3:-1]
    try:
        return FieldSpec(int(t))
    except ValueError as exc:
        raise UsageError(f"bad field {text!r}: use QQ or a prime such as 32003") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


# -- job setup --

def _caps(args) -> Caps:
    return Caps(max_pairs=args.max_pairs, max_degree=args.max_degree)


def _ring(args) -> PolyRing:
    if args.n is None or args.m is None:
        raise UsageError("--n and --m are required")
    return PolyRing(Frame(args.n, args.m), parse_field(args.field), MonomialOrder(args.order))


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _ideal(args):
    """The polynomials from ``--input``, else the family generators."""
    from .family import FamilySpec, orbit_generators

    ring = _ring(args)
    if args.input:
        polys = parse_lines(_read_input(args.input), ring)
        if not polys:
            raise UsageError("the input contains no polynomials")
        return polys, "input"
    spec = FamilySpec(args.n, args.m, args.d, ring.field)
    gens = [g.with_ring(ring) for g in orbit_generators(spec)]
    return gens, f"F_{{{args.n},{args.m}}}" if args.d == 2 else f"degree-{args.d} orbit generators"


# -- commands --

def cmd_gen(args):
    polys, _ = _ideal(args)
    texts = [format_poly(p) for p in polys]
    return {"n": args.n, "m": args.m, "d": args.d, "count": len(texts), "generators": texts}, "\n".join(texts)


def cmd_gb(args):
    polys, src = _ideal(args)
    gb = buchberger(polys, caps=_caps(args))
    texts = [format_poly(g) for g in gb.generators]
    res = {"source": src, "order": args.order, "field": gb.field.label, "size": len(texts), "basis": texts}
    return res, "\n".join(texts)


def cmd_regseq(args):
    polys, src = _ideal(args)
    gb = buchberger(polys, caps=_caps(args))
    cert = is_regular_sequence(polys, gb=gb)
    agree = hilbert_ci_check(polys, gb=gb)
    res = dict(cert.to_dict(), hilbert_ci=agree, source=src)
    text = (
        f"{cert.verdict}: codim={cert.codim} expected={cert.expected} "
        f"field={cert.field} [{cert.status}] hilbert_ci={'yes' if agree else 'no'}"
    )
    return res, text


def cmd_hilbert(args):
    polys, src = _ideal(args)
    gb = buchberger(polys, caps=_caps(args))
    hs = hilbert_series(initial_ideal(gb))
    red = hs.reduced()
    res = {
        "numerator": list(hs.numerator),
        "denominator_exponent": hs.denominator_exponent,
        "reduced_numerator": list(red.numerator),
        "dimension": hs.dimension,
        "multiplicity": hs.multiplicity,
        "hilbert_function": hs.coefficients(args.terms - 1),
        "field": gb.field.label,
    }
    text = "\n".join(
        [
            f"HS = {hs}",
            f"   = {red}",
            f"dim = {hs.dimension}, degree = {hs.multiplicity}",
            "HF: " + ", ".join(map(str, hs.coefficients(args.terms - 1))),
        ]
    )
    return res, text


def _betti(args):
    polys, _ = _ideal(args)
    gb = buchberger(polys, caps=_caps(args))
    return compute_betti(
        gb, method=args.method, i_max=args.i_max, j_cap=args.j_cap, max_dim=args.max_dim, caps=_caps(args)
    )


def cmd_betti(args):
    table = _betti(args).table
    head = f"Betti table over {table.field} ({table.method})"
    return table.to_dict(), head + "\n" + table.render()


def cmd_reg(args):
    table = _betti(args).table
    exact = not table.truncated
    res = {"regularity": table.regularity, "exact": exact, "field": table.field, "method": table.method}
    text = f"reg={table.regularity}" + ("" if exact else " (lower bound: table truncated)")
    return res, text


def cmd_strength(args):
    from .family import FamilySpec, generator
    from .strength import quadric_strength

    if args.input:
        if args.n is None or args.m is None:
            raise UsageError("--n and --m are required with --input")
        polys, _ = _ideal(args)
        if len(polys) != 1:
            raise UsageError("strength takes exactly one quadric")
        q = polys[0]
    else:
        if args.n is None or args.gen is None:
            raise UsageError("give --n and --gen i,j, or --n --m --input FILE")
        ij = _int_list(args.gen)
        if len(ij) != 2:
            raise UsageError("--gen takes two indices i,j")
        i, j = sorted(ij)
        m = args.m if args.m is not None else j
        q = generator(FamilySpec(args.n, m, 2, parse_field(args.field)), i, j)
    rep = quadric_strength(q, witness=args.witness)
    text = f"rank={rep.rank} strength={rep.strength}"
    if args.witness:
        if rep.witness:
            text += "\n" + "\n".join(f"({format_poly(g)}) * ({format_poly(h)})" for g, h in rep.witness)
        else:
            text += f"\n({rep.note})"
    res = rep.to_dict()
    res["quadric"] = format_poly(q)
    if not args.witness:
        res.pop("witness")
    return res, text


def cmd_collective_strength(args):
    from .family import FamilySpec, sequence_F
    from .strength import (
        BudgetExceeded,
        collective_strength_exact,
        collective_strength_family,
        collective_strength_sampled,
    )

    fld = parse_field(args.field)
    method = args.method
    if args.input:
        polys, _ = _ideal(args)
        if method == "family":
            raise UsageError("the family method applies only to F_{n,m}")
    else:
        if args.n is None or args.m is None:
            raise UsageError("--n and --m are required")
        polys = sequence_F(FamilySpec(args.n, args.m, 2, fld))
    if method == "auto":
        method = "exact" if fld.characteristic else ("family" if not args.input else None)
        if method is None:
            raise UsageError("collective strength of user quadrics needs a prime field")
    res = {"method": method, "field": fld.label}
    if method == "family":
        rep = collective_strength_family(args.n, args.m, fld, seed=args.seed)
        res.update(rep.to_dict())
        text = f"collective_strength={rep.value} (family argument, checks {'pass' if rep.verified else 'FAIL'})"
        return res, text, (EXIT_OK if rep.verified else EXIT_CHECK)
    if method == "exact":
        try:
            value = collective_strength_exact(polys)
        except BudgetExceeded as exc:
            if args.method == "exact":
                raise
            log.warning("%s; falling back to sampling", exc)
            method = "sampled"
        else:
            res["value"] = value
            res["exact"] = True
            return res, f"collective_strength={value} (exhaustive over {fld.label})", EXIT_OK
    value = collective_strength_sampled(polys, args.trials, args.seed)
    res.update(method="sampled", value=value, exact=False, trials=args.trials, seed=args.seed)
    return res, f"collective_strength<={value} (upper bound from {args.trials} samples over {fld.label})", EXIT_OK


def cmd_g_table(args):
    from .family import g_sweep

    if args.n_from < 1 or args.n_to < args.n_from:
        raise UsageError("need 1 <= --n-from <= --n-to")
    rows = []
    lines = [f"{'n':>3} {'g(n)':>6} {'floor(n/2)':>10} {'2n-1':>5}  verdicts"]
    ok = True
    for n in range(args.n_from, args.n_to + 1):
        row = g_sweep(
            n, args.m_max, args.mode, args.p, early_exit=not args.no_early_exit, caps=_caps(args), threads=args.threads
        )
        rows.append(row.to_dict())
        ok &= row.oracles_agree() and row.fields_agree() and row.monotone()
        ok &= not row.complete or row.bounds_hold()
        verdicts = " ".join(f"m={c.m}:{'R' if c.regular else 'N'}({c.codim}/{c.expected})" for c in row.cells)
        if row.incomplete_from is not None:
            verdicts += f" cap-hit@m={row.incomplete_from}"
        lines.append(f"{n:>3} {row.describe_g():>6} {row.lower_bound:>10} {row.upper_bound:>5}  {verdicts}")
    label = {
        "certified": "QQ (certificate)",
        "heuristic": f"GF({args.p}) (heuristic)",
        "combined": f"GF({args.p}) screening confirmed over QQ (certificate)",
    }[args.mode]
    lines.append(f"field: {label}; R = regular, N = not regular, (codim/expected)")
    return {"mode": args.mode, "rows": rows, "consistent": ok}, "\n".join(lines), (EXIT_OK if ok else EXIT_CHECK)


def cmd_verify_paper(args):
    from .family import verify_theorem

    rep = verify_theorem(args.n, args.mode, args.p, caps=_caps(args), seed=args.seed)
    lines = [f"n={rep.n} mode={args.mode} g={rep.g}{'' if rep.g_exact else ' (lower bound)'} c={rep.generators}"]
    betti = rep.details.get("betti", {})
    lines.append(f"reg={betti.get('regularity')} collective_strength={rep.details['collective_strength']['value']}")
    for name, ok in rep.checks.items():
        lines.append(f"  {'PASS' if ok else 'FAIL'}  {name}")
    return rep.to_dict(), "\n".join(lines), (EXIT_OK if rep.passed else EXIT_CHECK)


# -- argument parsing --

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--max-pairs", type=int, default=2_000_000)
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    ideal = argparse.ArgumentParser(add_help=False)
    ideal.add_argument("--n", type=int, help="rows of the variable frame")
    ideal.add_argument("--m", type=int, help="columns of the variable frame")
    ideal.add_argument("--d", type=int, default=2, help="degree of the family generators")
    ideal.add_argument("--field", default="QQ", help="QQ or an odd prime")
    ideal.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    ideal.add_argument("--input", help="file of polynomials, one per line ('-' for stdin)")

    betti = argparse.ArgumentParser(add_help=False)
    betti.add_argument("--method", choices=("auto", "direct", "reduced"), default="auto")
    betti.add_argument("--i-max", type=int, default=None)
    betti.add_argument("--j-cap", type=int, default=None)
    betti.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)

    p = argparse.ArgumentParser(prog="quadreg", description="Quadric ideals: bases, regularity, Betti tables, strength.")
    sub = p.add_subparsers(dest="command", required=True)
    parents = [common, ideal]
    sub.add_parser("gen", parents=parents, help="family generators").set_defaults(func=cmd_gen)
    sub.add_parser("gb", parents=parents, help="reduced Groebner basis").set_defaults(func=cmd_gb)
    sub.add_parser("regseq", parents=parents, help="regular-sequence certificate").set_defaults(func=cmd_regseq)
    h = sub.add_parser("hilbert", parents=parents, help="Hilbert series")
    h.add_argument("--terms", type=int, default=10, help="Hilbert function values to list")
    h.set_defaults(func=cmd_hilbert)
    sub.add_parser("betti", parents=parents + [betti], help="graded Betti table").set_defaults(func=cmd_betti)
    sub.add_parser("reg", parents=parents + [betti], help="Castelnuovo-Mumford regularity").set_defaults(func=cmd_reg)

    s = sub.add_parser("strength", parents=parents, help="strength of one quadric")
    s.add_argument("--gen", help="family generator indices i,j")
    s.add_argument("--witness", action="store_true", help="print a decomposition when one exists")
    s.set_defaults(func=cmd_strength)

    c = sub.add_parser("collective-strength", parents=parents, help="collective strength of F_{n,m} or input quadrics")
    c.add_argument("--method", choices=("auto", "exact", "sampled", "family"), default="auto")
    c.add_argument("--trials", type=int, default=10_000)
    c.set_defaults(func=cmd_collective_strength)

    g = sub.add_parser("g-table", parents=[common], help="largest regular m for a range of n")
    g.add_argument("--n-from", type=int, required=True)
    g.add_argument("--n-to", type=int, required=True)
    g.add_argument("--m-max", type=int, default=None)
    g.add_argument("--mode", choices=("heuristic", "certified", "combined"), default="heuristic")
    g.add_argument("--p", type=int, default=DEFAULT_PRIME)
    g.add_argument("--no-early-exit", action="store_true")
    g.set_defaults(func=cmd_g_table)

    v = sub.add_parser("verify-paper", parents=[common], help="check every claim about F_{n,g(n)}")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--mode", choices=("heuristic", "certified", "combined"), default="certified")
    v.add_argument("--p", type=int, default=DEFAULT_PRIME)
    v.set_defaults(func=cmd_verify_paper)
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), stream=stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        out = args.func(args)
    except ResourceCapExceeded as exc:
        print(f"resource cap: {exc}", file=stderr)
        return EXIT_CAP
    except (UsageError, ParseError, FrameError, FieldError, ZeroDivisionError, IndexError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    result, text, code = out if len(out) == 3 else (*out, EXIT_OK)
    stdout.write(emit_json(result) if args.format == "json" else text + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
