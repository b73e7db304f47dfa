"""Command-line interface.

Verbs: invariants, genus, dual, chi, den-poly, pden-poly, dden, pdden,
coeffs, mu, dsum, oracle, verify.  Output is a plain table by default or
JSON with --format json; every JSON document carries the provenance fields
q, command, and version.  Rationals are always printed exactly (num/den),
never as decimals.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from . import __version__
from . import fqspaces, qcombo
from .density import (InternalConsistencyError, coefficients_c, dden,
                      den_poly, den_prime, pden_from_den_roundtrip, pden_poly,
                      pden_prime, pdden_closed, pdden_machine)
from .felements import FElement, Matrix, fundamental_invariants
from .fourier import FlatConfiguration, d_sum, is_horizontal
from .identities import (check_F_eval, check_g_base, check_g_diagonal,
                         check_g_independence, check_g_sum, check_h_shift,
                         check_h_three_term, check_piece_prime_expansion,
                         check_piece_sum, check_pden_prime_eval,
                         check_transfer_product_1, check_transfer_product_2,
                         symbol_with_profile)
from .lattices import (GenusSymbol, check_mu_identities,
                       enumerate_genus_symbols, genus_from_gram, mu_counts,
                       unimodular)
from .oracle import BudgetError, StabilizationError, den_oracle, herm_count
from .polynomials import Poly


class UsageError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


def _parse_eps(text: str) -> int:
    if text in ("+1", "1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise UsageError("sign must be +1 or -1, got %r" % text)


def _parse_genus(text: str) -> GenusSymbol:
    try:
        return GenusSymbol.parse(text)
    except (ValueError, IndexError) as exc:
        raise UsageError("cannot parse genus symbol %r: %s" % (text, exc))


def _parse_n_range(text: str) -> List[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _load_gram(path: str, q: int) -> Matrix:
    with open(path) as fh:
        raw = json.load(fh)
    try:
        return [[FElement.of(Fraction(cell["a"]), Fraction(cell["b"]), q)
                 for cell in row] for row in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError("bad Gram file %s: %s" % (path, exc))


def _rat(x) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def _rat_json(x) -> str:
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def _poly_payload(poly: Poly) -> List[str]:
    return [_rat_json(c) for c in poly.coeffs]


def _emit(args, payload: Dict[str, object], lines: List[str]) -> None:
    if args.format == "json":
        doc = {"command": args.command, "q": getattr(args, "q", None),
               "version": __version__}
        doc.update(payload)
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _symbol_of(args) -> GenusSymbol:
    if getattr(args, "genus", None):
        return _parse_genus(args.genus)
    if getattr(args, "gram", None):
        return genus_from_gram(_load_gram(args.gram, args.q), args.q)
    raise UsageError("need --genus or --gram")


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_invariants(args) -> int:
    if args.gram:
        if args.q is None:
            raise UsageError("--gram needs --q to fix the prime")
        invs = fundamental_invariants(_load_gram(args.gram, args.q))
    elif args.genus:
        invs = _parse_genus(args.genus).invariants()
    else:
        raise UsageError("need --genus or --gram")
    _emit(args, {"invariants": list(invs)},
          ["invariants: %s" % (" ".join(str(a) for a in invs))])
    return 0


def cmd_genus(args) -> int:
    symbol = genus_from_gram(_load_gram(args.gram, args.q), args.q)
    _emit(args, {"genus": str(symbol)}, ["genus: %s" % symbol])
    return 0


def cmd_dual(args) -> int:
    symbol = _parse_genus(args.genus)
    _emit(args, {"dual": str(symbol.dual())}, ["dual: %s" % symbol.dual()])
    return 0


def cmd_chi(args) -> int:
    symbol = _symbol_of(args)
    value = symbol.chi(args.q)
    _emit(args, {"chi": value}, ["chi: %+d" % value])
    return 0


def _poly_cmd(args, engine, label: str) -> int:
    symbol = _symbol_of(args)
    m = args.m if args.m is not None else symbol.rank
    eps = _parse_eps(args.eps) if args.eps is not None else -symbol.chi(args.q)
    poly = engine(m, eps, symbol, args.q)
    _emit(args,
          {"genus": str(symbol), "m": m, "eps": eps,
           "coeffs": _poly_payload(poly), "at_one": _rat_json(poly(1))},
          ["%s(I_%d^%+d, %s, X) = %r" % (label, m, eps, symbol, poly),
           "value at X=1: %s" % _rat(poly(1))])
    return 0


def cmd_den_poly(args) -> int:
    return _poly_cmd(args, den_poly, "Den")


def cmd_pden_poly(args) -> int:
    return _poly_cmd(args, pden_poly, "Pden")


def cmd_dden(args) -> int:
    symbol = _symbol_of(args)
    value = dden(symbol, args.q)
    _emit(args, {"genus": str(symbol), "dden": value},
          ["dden(%s) = %d" % (symbol, value)])
    return 0


def cmd_pdden(args) -> int:
    symbol = _symbol_of(args)
    machine = pdden_machine(symbol, args.q)
    closed = pdden_closed(symbol, args.q)
    if machine != closed:
        raise InternalConsistencyError(
            "modified primitive derived density routes disagree",
            {"symbol": str(symbol), "q": args.q, "machine": machine,
             "closed": closed})
    _emit(args, {"genus": str(symbol), "pdden": _rat_json(machine)},
          ["pdden(%s) = %s" % (symbol, _rat(machine))])
    return 0


def cmd_coeffs(args) -> int:
    eps = _parse_eps(args.eps)
    rows = []
    for n in _parse_n_range(args.n):
        for t, c in sorted(coefficients_c(n, eps, args.q).items()):
            rows.append((n, t, c))
    payload = {"eps": eps,
               "coefficients": [{"n": n, "t": t, "c": _rat_json(c)}
                                for n, t, c in rows]}
    lines = ["n=%d t=%d c=%s" % (n, t, _rat(c)) for n, t, c in rows]
    _emit(args, payload, lines)
    return 0


def cmd_mu(args) -> int:
    symbol = _symbol_of(args)
    counts = mu_counts(symbol, args.q)
    order = ["mu_plus", "mu_zero", "mu_zero_plus", "mu_zero_minus", "mu_minus"]
    _emit(args, {"genus": str(symbol), **counts},
          ["%s: %d" % (k, counts[k]) for k in order])
    return 0


def cmd_dsum(args) -> int:
    flat = _parse_genus(args.flat)
    chi_ambient = _parse_eps(args.ambient_chi)
    value = d_sum(flat, chi_ambient, args.valx, args.q)
    _emit(args,
          {"flat": str(flat), "ambient_chi": chi_ambient, "valx": args.valx,
           "dsum": _rat_json(value)},
          ["dsum(%s; chi=%+d, val=%d) = %s"
           % (flat, chi_ambient, args.valx, _rat(value))])
    return 0


def cmd_oracle(args) -> int:
    l_symbol = _parse_genus(args.l)
    m_symbol = _parse_genus(args.m) if args.m else None
    m_rank = m_symbol.rank if m_symbol else 0
    value = den_oracle(m_symbol, l_symbol, args.k, args.q, d_max=args.dmax,
                       force_naive=args.naive)
    eps = m_symbol.chi(args.q) if m_symbol else 1
    poly = den_poly(m_rank, eps, l_symbol, args.q)
    expected = poly(Fraction(1, args.q ** (2 * args.k)))
    match = value == expected
    _emit(args,
          {"l": str(l_symbol), "m": str(m_symbol) if m_symbol else "",
           "k": args.k, "oracle": _rat_json(value),
           "polynomial": _rat_json(expected), "match": match},
          ["oracle count:     %s" % _rat(value),
           "polynomial value: %s" % _rat(expected),
           "match: %s" % ("yes" if match else "NO")])
    return 0 if match else 1


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

Case = Tuple[str, Dict[str, object], bool]


def _suite_q_combinatorics() -> Iterator[Case]:
    for q in (2, 3, 4, 5):
        for n in range(1, 7):
            ctx = {"n": n, "q": q}
            yield "q-binomial theorem", ctx, qcombo.check_q_binomial_theorem(n, q)
            yield "vanishing sums", ctx, qcombo.check_vanishing(n, q)
            yield "inverse identity", ctx, qcombo.check_inverse_identity(n, q)
            yield "pascal rule", ctx, qcombo.check_pascal(n, q)
            for t in range(n + 1):
                for i in range(t + 1):
                    yield ("binomial expansion", {"n": n, "t": t, "i": i, "q": q},
                           qcombo.check_binomial_expansion(n, t, i, q))


def _suite_fq_spaces() -> Iterator[Case]:
    for q in (3, 5):
        for n in range(1, 5):
            for eps in (1, -1):
                ctx = {"n": n, "eps": eps, "q": q}
                yield ("alternating isotropic sum", ctx,
                       fqspaces.check_alternating_isotropic_sum(n, eps, q))
                for r in range(n + 1):
                    yield ("binomial-weighted m sum", {**ctx, "r": r},
                           fqspaces.check_binom_times_m_sum(n, r, eps, q))
                    for eps1 in (1, -1):
                        yield ("quotient ratios", {**ctx, "r": r, "eps1": eps1},
                               fqspaces.check_quotient_ratios(r, n, eps1, eps, q))
                for j in range(n + 1):
                    yield ("isotropic closed form", {**ctx, "j": j},
                           fqspaces.check_isotropic_closed_form(j, n, eps, q))
                    yield ("grassmannian completeness", {**ctx, "j": j},
                           fqspaces.check_grassmannian_completeness(n, j, eps, q))
                    for k in range(n - j + 1):
                        for eps2 in ((1,) if k == 0 else (1, -1)):
                            yield ("m product split",
                                   {**ctx, "j": j, "k": k, "eps2": eps2},
                                   fqspaces.check_m_product_split(n, j, k, eps, eps2, q))
    q = 3
    for n in range(1, 4):
        for eps in (1, -1):
            space = fqspaces.FqQuadSpace.nondegenerate(n, eps)
            for j in range(n + 1):
                for k in range(n - j + 1):
                    for eps2 in ((1,) if k == 0 else (1, -1)):
                        sub = fqspaces.FqQuadSpace(j, k, eps2)
                        ctx = {"n": n, "eps": eps, "j": j, "k": k,
                               "eps2": eps2, "q": q}
                        yield ("embedding count vs brute force", ctx,
                               fqspaces.isometry_count(sub, space, q)
                               == fqspaces.brute_isometry_count(sub, space, q))
                        yield ("subspace count vs brute force", ctx,
                               fqspaces.subspace_count(sub, space, q)
                               == fqspaces.brute_subspace_count(sub, space, q))


def _suite_lattice() -> Iterator[Case]:
    q = 3
    for rank in (1, 2):
        for symbol in enumerate_genus_symbols(rank, -2, 2):
            ctx = {"genus": str(symbol), "q": q}
            yield ("symbol grammar round-trip", ctx,
                   GenusSymbol.parse(str(symbol)) == symbol)
            yield ("gram/genus round-trip", ctx,
                   genus_from_gram(symbol.gram(q), q) == symbol)
            yield "dual involution", ctx, symbol.dual().dual() == symbol
    for symbol in (GenusSymbol.parse("2^1+"), GenusSymbol.parse("2^1-"),
                   GenusSymbol.parse("1H^1"), GenusSymbol.parse("2^2+"),
                   GenusSymbol.parse("1H^1,2^1+")):
        yield ("mu identities", {"genus": str(symbol), "q": q},
               check_mu_identities(symbol, q))


def _suite_density() -> Iterator[Case]:
    q = 3
    fixtures = [
        ("0^2+", Poly([1, 4, -1])),
        ("0^2-", Poly([1, 6, 1])),
    ]
    for text, expected in fixtures:
        symbol = _parse_genus(text)
        got = den_poly(2, symbol.chi(q), symbol, q)
        yield ("density polynomial fixture", {"genus": text, "q": q,
                                              "expected": repr(expected),
                                              "got": repr(got)}, got == expected)
    coeffs = coefficients_c(4, 1, q)
    yield ("coefficient fixture n=4", {"q": q, "got": str(coeffs)},
           coeffs == {2: Fraction(-1, 36), 4: Fraction(1, 90)})
    for n in range(1, 5):
        for eps in (1, -1):
            symbol = unimodular(n, eps)
            yield ("self-point derived density", {"n": n, "eps": eps, "q": q},
                   dden(symbol, q) == n % 2)
    for rank in (1, 2):
        for symbol in enumerate_genus_symbols(rank, -1, 2):
            ctx = {"genus": str(symbol), "q": q}
            yield ("closed pdden vs machine", ctx,
                   pdden_machine(symbol, q) == pdden_closed(symbol, q))
            if symbol.is_integral():
                yield ("density inversion round-trip", ctx,
                       pden_from_den_roundtrip(symbol, q, verbose=False))


def _suite_identity_lab() -> Iterator[Case]:
    q = 3
    for n in range(2, 5):
        for eps in (1, -1):
            for eps1 in (1, -1):
                for s in range(0, n - 1):
                    ctx = {"n": n, "s": s, "eps1": eps1, "eps": eps, "q": q}
                    yield "h shift", ctx, check_h_shift(n, s, eps1, eps, q)
                    yield ("h three-term", ctx,
                           check_h_three_term(n, s, eps1, eps, q))
                for r in range(1, n):
                    ctx = {"n": n, "r": r, "eps1": eps1, "eps": eps, "q": q}
                    yield ("g diagonal", ctx,
                           check_g_diagonal(n, r, eps1, eps, q))
                    for m in range(r, n):
                        yield ("g independence",
                               {**ctx, "m": m},
                               check_g_independence(n, m, r, eps1, eps, q))
                for t in range(0, n + 1):
                    ctx = {"n": n, "t": t, "eps1": eps1, "eps": eps, "q": q}
                    yield "g sum", ctx, check_g_sum(n, t, eps1, eps, q)
                    yield "F evaluation", ctx, check_F_eval(n, t, eps1, eps, q)
                    symbol = symbol_with_profile(n, t, eps1, eps, q)
                    if symbol is not None:
                        yield ("piece sum", {**ctx, "genus": str(symbol)},
                               check_piece_sum(symbol, q))
                        yield ("density derivative evaluation",
                               {**ctx, "genus": str(symbol)},
                               check_pden_prime_eval(symbol, q))
                        for i in range(n + 1):
                            yield ("piece derivative expansion",
                                   {**ctx, "genus": str(symbol), "i": i},
                                   check_piece_prime_expansion(symbol, i, q))
                yield ("g base case", {"n": n, "eps1": eps1, "eps": eps, "q": q},
                       check_g_base(n, n - 1, eps1, eps, q))
            for i in range(n):
                for s in range(i + 1):
                    for eps2 in (1, -1):
                        ctx = {"n": n, "i": i, "s": s, "eps2": eps2,
                               "eps": eps, "q": q}
                        yield ("transfer product", ctx,
                               check_transfer_product_1(n, i, s, eps2, eps, q))
                        yield ("shifted transfer product", {**ctx, "nprime": n + 2},
                               check_transfer_product_2(n, n + 2, i, s, eps2,
                                                        eps, q))


def _suite_fourier() -> Iterator[Case]:
    q = 3
    for text, chi_ambient in (("2^1+", 1), ("2^1-", -1), ("0^1+,2^1+", 1),
                              ("2^2+", 1), ("2^2+", -1)):
        flat = _parse_genus(text)
        if is_horizontal(flat, chi_ambient, q):
            continue
        for valx in (1, 2):
            ctx = {"flat": text, "chi": chi_ambient, "valx": valx, "q": q}
            yield "D-sum vanishing", ctx, d_sum(flat, chi_ambient, valx, q) == 0
    for text in ("0^1+", "0^1-", "2^1+"):
        flat = _parse_genus(text)
        for chi_ambient in (1, -1):
            cfg = FlatConfiguration(flat, chi_ambient, 1, q)
            vert, horiz = cfg.dden_split()
            ctx = {"flat": text, "chi": chi_ambient, "q": q}
            yield ("derived density splits", ctx,
                   vert + horiz == dden(cfg.lattice.genus(), q))
    return


def _suite_oracle() -> Iterator[Case]:
    q = 3
    one = unimodular(1, 1)
    counts = [herm_count(one.gram(q), one.gram(q), d, q) for d in (1, 2, 3)]
    yield ("norm-one counts 6/18/54", {"q": q, "got": counts},
           counts == [6, 18, 54])
    for m_text, expected in (("0^2-", Fraction(4, 3)), ("0^2+", Fraction(2, 3))):
        m_symbol = _parse_genus(m_text)
        got = den_oracle(m_symbol, one, 0, q)
        yield ("rank-1 density vs closed polynomial",
               {"m": m_text, "q": q, "got": str(got)}, got == expected)
    from .oracle import _compound_gram, _diag_units, smart_pair_count
    m_symbol = _parse_genus("0^2-")
    units = _diag_units(m_symbol, q)
    for l_text, k, d in (("0^1+,2^1+", 1, 1), ("0^2-", 0, 2)):
        l_symbol = _parse_genus(l_text)
        naive = herm_count(l_symbol.gram(q), _compound_gram(m_symbol, k, q), d, q)
        smart = smart_pair_count(l_symbol.gram(q), units, k, d, q)
        yield ("class tables vs direct enumeration",
               {"l": l_text, "k": k, "d": d, "q": q}, naive == smart)


SUITES: Dict[str, Callable[[], Iterator[Case]]] = {
    "q_combinatorics": _suite_q_combinatorics,
    "fq_spaces": _suite_fq_spaces,
    "lattice": _suite_lattice,
    "density": _suite_density,
    "identity_lab": _suite_identity_lab,
    "fourier": _suite_fourier,
    "oracle": _suite_oracle,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ran = 0
    for name in names:
        for label, ctx, ok in SUITES[name]():
            ran += 1
            if not ok:
                print("FAIL [%s] %s" % (name, label))
                for key, value in sorted(ctx.items()):
                    print("  %s = %s" % (key, value))
                return 1
        print("suite %-16s ok" % name)
    print("%d checks passed" % ran)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_q(sub, required: bool = True) -> None:
    sub.add_argument("--q", type=int, required=required,
                     help="residue field size (odd; prime for counting verbs)")


def _add_symbol_source(sub) -> None:
    sub.add_argument("--genus", help="genus symbol, e.g. \"0^2+,2^1-\"")
    sub.add_argument("--gram", help="path to a Gram matrix JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="herm-density",
        description="Local densities of hermitian lattices over ramified "
                    "quadratic extensions of p-adic fields.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--format", choices=("table", "json"), default="table")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("invariants", help="fundamental invariants")
    _add_symbol_source(s)
    _add_q(s, required=False)
    s.set_defaults(func=cmd_invariants)

    s = subs.add_parser("genus", help="genus symbol of a Gram matrix")
    s.add_argument("--gram", required=True)
    _add_q(s)
    s.set_defaults(func=cmd_genus)

    s = subs.add_parser("dual", help="genus symbol of the dual lattice")
    s.add_argument("--genus", required=True)
    s.set_defaults(func=cmd_dual)

    s = subs.add_parser("chi", help="hermitian space invariant chi")
    _add_symbol_source(s)
    _add_q(s)
    s.set_defaults(func=cmd_chi)

    for verb, func in (("den-poly", cmd_den_poly), ("pden-poly", cmd_pden_poly)):
        s = subs.add_parser(verb, help="density polynomial in X")
        _add_symbol_source(s)
        _add_q(s)
        s.add_argument("--m", type=int, help="target rank (default: rank of L)")
        s.add_argument("--eps", help="target sign (default: -chi(L))")
        s.set_defaults(func=func)

    s = subs.add_parser("dden", help="modified derived density (integer)")
    _add_symbol_source(s)
    _add_q(s)
    s.set_defaults(func=cmd_dden)

    s = subs.add_parser("pdden", help="modified primitive derived density")
    _add_symbol_source(s)
    _add_q(s)
    s.set_defaults(func=cmd_pdden)

    s = subs.add_parser("coeffs", help="correction coefficients c_t")
    s.add_argument("--n", required=True, help="rank or range like 2..6")
    _add_q(s)
    s.add_argument("--eps", default="+1", help="chi of the lattice family")
    s.set_defaults(func=cmd_coeffs)

    s = subs.add_parser("mu", help="dual coset strata of a full-type lattice")
    _add_symbol_source(s)
    _add_q(s)
    s.set_defaults(func=cmd_mu)

    s = subs.add_parser("dsum", help="dual-coset sum of derived densities")
    s.add_argument("--flat", required=True, help="hyperplane lattice symbol")
    s.add_argument("--ambient-chi", required=True, dest="ambient_chi")
    s.add_argument("--valx", type=int, required=True)
    _add_q(s)
    s.set_defaults(func=cmd_dsum)

    s = subs.add_parser("oracle", help="density by direct counting")
    s.add_argument("--l", required=True, help="source lattice genus symbol")
    s.add_argument("--m", default="", help="unimodular target genus symbol")
    s.add_argument("--k", type=int, default=0, help="hyperbolic planes added")
    _add_q(s)
    s.add_argument("--dmax", type=int, default=3)
    s.add_argument("--naive", action="store_true",
                   help="skip the class-table engine")
    s.set_defaults(func=cmd_oracle)

    s = subs.add_parser("verify", help="run a named identity suite")
    s.add_argument("suite", choices=list(SUITES) + ["all"])
    s.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (BudgetError, StabilizationError) as exc:
        print("budget: %s" % exc, file=sys.stderr)
        return 3
    except InternalConsistencyError as exc:
        print("inconsistency: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
