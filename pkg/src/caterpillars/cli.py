"""Command-line front end.

Every command writes CSV (comma separated, LF line ends) to stdout.  Errors
go to stderr as a one-line JSON envelope ``{"error": ..., "message": ...}``
and set a nonzero exit status:

====  ==========================================
code  meaning
====  ==========================================
1     other domain error
2     bad usage or argument
3     KTooLargeForTruncation (k >= m)
4     NotAv132 (input permutation contains 132)
5     ParseError in Newick input
6     CapExceeded (enumeration cap or exact-mode guard)
7     SizeTooSmall
====  ==========================================
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

import mpmath

from . import __doc__ as _package_doc
from .asymptotics import (
    asym_f_minus,
    asym_w_minus,
    expected_gamma_approx,
    ordered_model,
    prob_gamma_le,
    rho_lambda_unordered,
)
from .counting import (
    coefficient_table,
    expected_gamma_exact,
    f_exact,
    f_minus,
    f_plus,
    w_minus,
)
from .errors import (
    CapExceeded,
    CaterpillarError,
    KTooLargeForTruncation,
    NotAv132,
    ParseError,
    SizeTooSmall,
)
from .newick import parse_newick, read_newick_lines, to_newick
from .permutations import Permutation, extraction_family, gamma_from_perm, phi, phi_inverse
from .trees import colless_index, gamma

EXIT_CODES = {
    KTooLargeForTruncation: 3,
    NotAv132: 4,
    ParseError: 5,
    CapExceeded: 6,
    SizeTooSmall: 7,
}

TRUNCATION_NOTE = (
    "W_k and the unconstrained series W share their first k coefficients, so a "
    "truncation to m <= k terms sees no cap and its singularity collapses onto W's; "
    "use m > k"
)

DEFAULT_EXACT_GUARD = 2000
SIGNIFICANT = 10

TABLE_N = (10, 20, 50, 100, 200, 500, 1000)


def _decimal(value) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 60
        if isinstance(value, Fraction):
            return Decimal(value.numerator) / Decimal(value.denominator)
        if isinstance(value, int):
            return Decimal(value)
        if isinstance(value, mpmath.mpf):
            return Decimal(mpmath.nstr(value, 50, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))
        return Decimal(repr(value))


def fmt_real(value, places: int | None = None) -> str:
    """Fixed-point rendering, round-half-even.

    ``places=None`` keeps 10 significant digits; otherwise ``places`` decimals.
    """
    d = _decimal(value)
    if places is None:
        exponent = (d.adjusted() if d else 0) - (SIGNIFICANT - 1)
    else:
        exponent = -places
    with localcontext() as ctx:
        ctx.prec = 80
        q = d.quantize(Decimal(1).scaleb(exponent), rounding=ROUND_HALF_EVEN)
    text = format(q, "f")
    return "0" + text[2:] if text.startswith("-0") and not q else text


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def _emit_error(err, stderr, **extra):
    code = getattr(err, "code", type(err).__name__)
    payload = {"error": code, "message": str(err)}
    witness = getattr(err, "witness", None)
    if witness is not None:
        payload["witness"] = list(witness)
    offset = getattr(err, "offset", None)
    if offset is not None:
        payload["offset"] = offset
    if isinstance(err, KTooLargeForTruncation):
        payload["explanation"] = TRUNCATION_NOTE
    payload.update(extra)
    stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _exit_code(err):
    for cls, code in EXIT_CODES.items():
        if isinstance(err, cls):
            return code
    if isinstance(err, CaterpillarError):
        return 1
    return 2


# -- commands ------------------------------------------------------------------


def _parse_k(text):
    if text in ("inf", "none"):
        return None
    try:
        k = int(text)
    except ValueError:
        k = 0
    if k < 1:
        raise argparse.ArgumentTypeError(f"k must be a positive integer or 'inf', got {text!r}")
    return k


def cmd_counts(args, out, err):
    table = coefficient_table(args.family, args.k, args.n_max, args.which)
    w = _writer(out)
    w.writerow(["n", "count"])
    for n, c in enumerate(table.coeffs, start=1):
        w.writerow([n, c])
    return 0


def cmd_expected(args, out, err):
    places = 3 if args.places is None else args.places
    w = _writer(out)
    w.writerow(["n", "value"])
    for n in args.n:
        if args.mode == "exact":
            if n > args.max_exact:
                raise CapExceeded(f"exact mode limited to n <= {args.max_exact} (got {n}); raise --max-exact")
            value = expected_gamma_exact(n)
        else:
            value = expected_gamma_approx(n, "ratio" if args.mode == "approx" else "log2")
        w.writerow([n, fmt_real(value, places)])
    return 0


def cmd_asympt(args, out, err):
    if args.family == "ordered":
        if args.k < 2:
            raise ValueError("ordered family needs k >= 2")
        model = ordered_model(args.k)
    else:
        model = rho_lambda_unordered(args.k, args.m)
    w = _writer(out)
    w.writerow(["key", "value"])
    w.writerow(["family", model.family])
    w.writerow(["k", model.k])
    if model.m is not None:
        w.writerow(["m", model.m])
    w.writerow(["rho", fmt_real(model.rho, args.places)])
    w.writerow(["amplitude", fmt_real(model.amplitude, args.places)])
    if model.w_prime is not None:
        w.writerow(["w_prime", fmt_real(model.w_prime, args.places)])
    return 0


def _prob_curve_rows(ks, ns, m, exact):
    for n in ns:
        for k in ks:
            if exact:
                p = 1 - prob_gamma_le(n, k, exact=True)
            else:
                p = 1 - prob_gamma_le(n, k, m)
                p = min(max(p, mpmath.mpf(0)), mpmath.mpf(1))
            yield n, k, p


def cmd_prob_curve(args, out, err):
    if args.n_min < 1 or args.n_max < args.n_min or args.n_step < 1:
        raise ValueError("need 1 <= n-min <= n-max and n-step >= 1")
    ns = range(args.n_min, args.n_max + 1, args.n_step)
    if not args.exact:
        for k in args.k:
            rho_lambda_unordered(k, args.m)  # fail before any output
    w = _writer(out)
    w.writerow(["n", "k", "prob"])
    for n, k, p in _prob_curve_rows(args.k, ns, args.m, args.exact):
        w.writerow([n, k, fmt_real(p, args.places)])
    return 0


def _score_prob(n, g, m, exact_limit):
    if n <= exact_limit or not 2 <= g < m:
        return prob_gamma_le(n, g, exact=True)
    return prob_gamma_le(n, g, m)


def cmd_score(args, out, err):
    if args.file == "-":
        stream = contextlib.nullcontext(sys.stdin)
    else:
        stream = open(args.file, encoding="utf-8")
    failed = 0
    w = _writer(out)
    w.writerow(["line", "n", "gamma", "colless", "prob_gamma_le_exact_or_asym"])
    with stream as lines:
        for number, doc in read_newick_lines(lines):
            if isinstance(doc, ParseError):
                failed += 1
                _emit_error(doc, err, line=number)
                continue
            t = doc.tree
            n = t.size
            colless = fmt_real(colless_index(t), args.places) if n > 2 else ""
            prob = _score_prob(n, gamma(t), args.m, args.exact_limit)
            w.writerow([number, n, gamma(t), colless, fmt_real(prob, args.places)])
    return EXIT_CODES[ParseError] if failed else 0


def _rtilde_rows(w, p):
    for i, member in extraction_family(p):
        w.writerow([f"rtilde({p[i - 1]})", str(member)])


def cmd_map_perm(args, out, err):
    w = _writer(out)
    w.writerow(["key", "value"])
    if args.newick is not None:
        t = parse_newick(args.newick).tree
        p = phi(t)
        w.writerow(["tree", to_newick(t)])
        w.writerow(["gamma", gamma(t)])
        w.writerow(["permutation", str(p)])
        _rtilde_rows(w, p)
        w.writerow(["gamma_from_perm", gamma_from_perm(p)])
        return 0
    p = Permutation.parse(args.perm)
    w.writerow(["permutation", str(p)])
    _rtilde_rows(w, p)
    t = phi_inverse(p)
    w.writerow(["tree", to_newick(t)])
    w.writerow(["gamma", gamma(t)])
    w.writerow(["gamma_from_perm", gamma_from_perm(p)])
    return 0


def seed_tables(out):
    """Write every published table, one ``# section`` header per block."""
    w = _writer(out)

    def section(title, header):
        out.write(f"# {title}\n")
        w.writerow(header)

    section("ordered counts, k=5", ["n", "f_minus", "f_plus", "f_exact"])
    for n in range(1, 11):
        w.writerow([n, f_minus(5, n), f_plus(5, n), f_exact(5, n)])

    section("ordered singularities", ["k", "rho"])
    for k in range(2, 8):
        w.writerow([k, fmt_real(ordered_model(k).rho, 7)])

    section("pitchfork-free ratio", ["n", "exact_over_asymptotic"])
    w.writerow([100, fmt_real(f_minus(2, 100) / asym_f_minus(2, 100), 4)])

    section("expected gamma", ["n", "exact", "approx", "log2"])
    for n in TABLE_N:
        w.writerow(
            [
                n,
                fmt_real(expected_gamma_exact(n), 3),
                fmt_real(expected_gamma_approx(n), 3),
                fmt_real(expected_gamma_approx(n, "log2"), 5),
            ]
        )

    section("132-avoiders whose windows of size > 1 all contain 231", ["n", "count"])
    for n in range(1, 16):
        w.writerow([n, f_minus(2, n + 1)])

    section("unordered counts w_minus(k, n)", ["k"] + [f"n{n}" for n in range(1, 11)])
    for k in range(1, 6):
        w.writerow([k] + [w_minus(k, n) for n in range(1, 11)])

    section("unordered asymptotics, m=10", ["k", "rho", "w_prime", "amplitude", "ratio_n50"])
    for k in range(2, 6):
        model = rho_lambda_unordered(k, 10)
        ratio = w_minus(k, 50) / asym_w_minus(k, 50, 10)
        w.writerow(
            [k, fmt_real(model.rho, 5), fmt_real(model.w_prime, 5), fmt_real(model.amplitude, 5), fmt_real(ratio, 3)]
        )

    section("unordered asymptotics, m=30", ["k", "rho", "amplitude"])
    for k in range(2, 11):
        model = rho_lambda_unordered(k, 30)
        w.writerow([k, fmt_real(model.rho, 10), fmt_real(model.amplitude, 10)])

    section("probability gamma <= 5 at n=100, m=10", ["n", "k", "prob"])
    w.writerow([100, 5, fmt_real(prob_gamma_le(100, 5, 10), 4)])

    section("probability of a caterpillar larger than k, m=30", ["n", "k", "prob"])
    for n, k, p in _prob_curve_rows((3, 4, 5, 8), range(10, 501, 10), 30, False):
        w.writerow([n, k, fmt_real(p, 6)])


def cmd_seed_tables(args, out, err):
    seed_tables(out)
    return 0


class UsageError(Exception):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="caterpillars", description=_package_doc)
    parser.add_argument("--seed-tables", action="store_true", help="same as the seed-tables command")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("counts", help="exact coefficient tables")
    p.add_argument("--family", choices=["ordered", "unordered"], default="ordered")
    p.add_argument("--k", type=_parse_k, required=True, help="cap on gamma, or 'inf'")
    p.add_argument("--which", choices=["minus", "plus", "exact"], default="minus")
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("expected", help="mean of gamma over ordered trees")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--mode", choices=["exact", "approx", "log2"], default="exact")
    p.add_argument("--max-exact", type=int, default=DEFAULT_EXACT_GUARD)
    p.add_argument("--places", type=int, default=None, help="decimals (default 3)")
    p.set_defaults(func=cmd_expected)

    p = sub.add_parser("asympt", help="dominant singularity and amplitude")
    p.add_argument("--family", choices=["ordered", "unordered"], default="ordered")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=30, help="truncation order (unordered)")
    p.add_argument("--places", type=int, default=None)
    p.set_defaults(func=cmd_asympt)

    p = sub.add_parser("prob-curve", help="P(some caterpillar larger than k) for unordered trees")
    p.add_argument("--k", type=int, nargs="+", default=[3, 4, 5, 8])
    p.add_argument("--n-min", type=int, default=10)
    p.add_argument("--n-max", type=int, default=500)
    p.add_argument("--n-step", type=int, default=10)
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--exact", action="store_true", help="exact rational counts instead of asymptotics")
    p.add_argument("--places", type=int, default=None)
    p.set_defaults(func=cmd_prob_curve)

    p = sub.add_parser("score", help="gamma and Colless index of Newick trees, one per line")
    p.add_argument("file", help="Newick file, or '-' for stdin")
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--exact-limit", type=int, default=1000)
    p.add_argument("--places", type=int, default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("map-perm", help="tree <-> 132-avoiding permutation")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--perm", help='one-line notation, e.g. "4 5 3 1 2"')
    group.add_argument("--newick")
    p.set_defaults(func=cmd_map_perm)

    p = sub.add_parser("seed-tables", help="dump every published table")
    p.set_defaults(func=cmd_seed_tables)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None and not args.seed_tables:
            parser.error("a command is required")
    except UsageError as exc:
        _emit_error(exc, stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    func = cmd_seed_tables if args.command is None else args.func
    try:
        return func(args, stdout, stderr)
    except (CaterpillarError, ValueError, OSError) as exc:
        _emit_error(exc, stderr)
        return _exit_code(exc)
