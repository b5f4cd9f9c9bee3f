"""Command-line entry point: ``padic-siegel-lab <subcommand> [flags]``.

Exit codes: 0 pass, 2 fail, 3 precision insufficient, 64 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import lab
from .arith import cyclotomic_polynomial, encode_cyclotomic, encode_rational, is_odd_prime
from .cache import configure_cache, get_cache
from .characters import (
    DirichletCharacter,
    EmbeddingSigma,
    KroneckerCharacter,
    factor_cyclotomic_mod_p,
    teichmuller_residue,
)
from .eisenstein import eisenstein_level1, hecke_eisenstein_chi, jacobi_eisenstein
from .lvalues import (
    bernoulli,
    bernoulli_poly_at,
    cohen_H,
    constant_term_valuation,
    dirichlet_L_neg,
    generalized_bernoulli,
    kummer_check,
)
from .maass import maass_lift
from .qseries import SIEGEL, series_from_json, series_to_dict
from .report import FORMATS, render_mapping, render_report

EXIT_OK, EXIT_FAIL, EXIT_PRECISION, EXIT_USAGE = 0, 2, 3, 64
STATUS_EXIT = {lab.PASS: EXIT_OK, lab.FAIL: EXIT_FAIL, lab.PRECISION: EXIT_PRECISION}

log = logging.getLogger("padic_siegel_lab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _odd_prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_odd_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
    return p


def _character(text: str) -> DirichletCharacter:
    try:
        return DirichletCharacter.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _polynomial_str(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prec", type=int, default=lab.DEFAULT_M, help="p-adic precision M")
    common.add_argument("--trunc", type=int, default=lab.DEFAULT_N, help="truncation order N")
    common.add_argument("--cache-dir", help="value cache directory (overrides $PADIC_SIEGEL_LAB_CACHE)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="padic-siegel-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("embeddings", parents=[common], help="roots of Phi_{p-1} mod p and omega(d_i)")
    s.add_argument("--p", type=_odd_prime, required=True)

    s = sub.add_parser("lvalue", parents=[common], help="Bernoulli numbers, L-values, Cohen's H")
    s.add_argument("--op", required=True,
                   choices=["bernoulli", "bernoulli-poly", "genbernoulli", "L", "cohenH", "valuation", "kummer"])
    s.add_argument("--k", type=int)
    s.add_argument("--k2", type=int, help="second weight for --op kummer")
    s.add_argument("--x", help="rational argument for --op bernoulli-poly")
    s.add_argument("--chi", type=_character, help="character mod p as p:t")
    s.add_argument("--D", type=int, help="Kronecker character (D/.) instead of --chi")
    s.add_argument("--r", type=int)
    s.add_argument("--N", type=int, dest="disc_N")
    s.add_argument("--l", type=int)
    s.add_argument("--p", type=_odd_prime)
    s.add_argument("--M", type=int, default=1)

    s = sub.add_parser("eisenstein", parents=[common], help="level-1 E_k")
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("hecke-eisenstein", parents=[common], help="E_{k,chi} on Gamma_0(p)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--chi", type=_character, required=True)

    s = sub.add_parser("jacobi-eisenstein", parents=[common], help="index-1 Jacobi E_{k,1}")
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("lift", parents=[common], help="Maass lift of a serialized Jacobi series")
    s.add_argument("--phi", required=True, help="Jacobi series JSON file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--chi", type=_character, required=True)
    s.add_argument("--p", type=_odd_prime, required=True)

    for name, helptext in (("theorem2", "convergence of G_{k_m}^sigma to 1"),
                           ("theorem1", "convergence of (F G_{k_m})^sigma to F^sigma")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--p", type=_odd_prime, required=True)
        s.add_argument("--chi", type=_character, required=True)
        s.add_argument("--sigma", type=int, default=1, help="embedding index i (roots ascending)")
        s.add_argument("--a", type=int)
        s.add_argument("--mmax", type=int, default=lab.DEFAULT_MMAX)
        s.add_argument("--allow-large", action="store_true")
        if name == "theorem1":
            s.add_argument("--f", required=True, help="Siegel series JSON of F (character inverse to --chi)")
        else:
            s.add_argument("--series-dir", help="also write each G_{k_m} as series JSON here")

    s = sub.add_parser("lemma2", parents=[common], help="valuation facts behind the level-1 factor")
    s.add_argument("--p", type=_odd_prime, required=True)
    s.add_argument("--a", type=int)
    s.add_argument("--chi", type=_character)
    s.add_argument("--sigma", type=int, default=1)
    s.add_argument("--mmax", type=int, default=lab.DEFAULT_MMAX)

    s = sub.add_parser("unitcong", parents=[common], help="check sigma(G) = 1 mod p")
    s.add_argument("--g", required=True, help="Siegel series JSON")
    s.add_argument("--sigma", required=True, help="embedding as p:i")
    return parser


def _emit(args, payload: bytes) -> None:
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _series_payload(args, series) -> bytes:
    d = series_to_dict(series)
    if args.format == "json":
        return render_mapping(d, "json")
    rows = {" ".join(str(i) for i in row[:-1]): row[-1] for row in d["coeffs"]}
    return render_mapping({"meta": d["meta"], "trunc": d["trunc"], "coeffs": rows}, args.format)


def _value(x):
    if isinstance(x, (int, Fraction)):
        return encode_rational(x)
    return encode_cyclotomic(x)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--op {args.op} needs " + ", ".join("--" + m.replace("disc_", "") for m in missing))


def cmd_embeddings(args) -> int:
    p, M = args.p, args.prec
    phi = cyclotomic_polynomial(p - 1)
    roots = factor_cyclotomic_mod_p(p)
    data = {
        "p": p,
        "cyclotomic_polynomial": _polynomial_str(phi),
        "factorization_mod_p": "".join(f"(X - {d})" for d in roots),
        "roots": list(roots),
        "embeddings": [
            {"index": i + 1, "d": d, "omega_d": str(teichmuller_residue(d, p, M)), "modulus": f"{p}^{M}"}
            for i, d in enumerate(roots)
        ],
    }
    _emit(args, render_mapping(data, args.format))
    return EXIT_OK


def cmd_lvalue(args) -> int:
    op = args.op
    if op == "bernoulli":
        _need(args, "k")
        value = _value(bernoulli(args.k))
    elif op == "bernoulli-poly":
        _need(args, "k", "x")
        value = _value(bernoulli_poly_at(args.k, Fraction(args.x)))
    elif op in ("genbernoulli", "L"):
        _need(args, "k")
        if (args.chi is None) == (args.D is None):
            raise UsageError(f"--op {op} needs exactly one of --chi, --D")
        chi = args.chi if args.chi is not None else KroneckerCharacter(args.D)
        if op == "genbernoulli":
            value = _value(generalized_bernoulli(args.k, chi))
        else:
            L = dirichlet_L_neg(args.k, chi)
            value = {"value": _value(L.value), "vanishes_by_parity": L.vanishes_by_parity}
    elif op == "cohenH":
        _need(args, "r", "disc_N")
        value = _value(cohen_H(args.r, args.disc_N))
    elif op == "valuation":
        _need(args, "l", "p")
        value = constant_term_valuation(args.l, args.p)
    else:
        _need(args, "k", "k2", "p")
        res = kummer_check(args.k, args.k2, args.p, args.M)
        value = {
            "congruent": res.congruent,
            "value_k": res.value_k.residue(args.M) if res.value_k.valuation >= 0 else None,
            "value_k2": res.value_k_prime.residue(args.M) if res.value_k_prime.valuation >= 0 else None,
            "modulus": f"{args.p}^{args.M}",
        }
    args_out = {k: v for k, v in vars(args).items()
                if k in ("k", "k2", "x", "D", "r", "disc_N", "l", "p") and v is not None}
    if op == "kummer":
        args_out["M"] = args.M
    if args.chi is not None:
        args_out["chi"] = args.chi.spec()
    _emit(args, render_mapping({"op": op, "args": args_out, "value": value}, args.format))
    return EXIT_OK


def cmd_series(args) -> int:
    if args.command == "eisenstein":
        s = eisenstein_level1(args.k, args.trunc)
    elif args.command == "hecke-eisenstein":
        s = hecke_eisenstein_chi(args.k, args.chi, args.trunc)
    else:
        s = jacobi_eisenstein(args.k, args.trunc)
    _emit(args, _series_payload(args, s))
    return EXIT_OK


def _load_series(path: str):
    try:
        return series_from_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read series from {path}: {exc}") from None


def cmd_lift(args) -> int:
    phi = _load_series(args.phi)
    F = maass_lift(phi, args.k, args.chi, args.p, args.trunc)
    _emit(args, _series_payload(args, F))
    return EXIT_OK


def _config(args) -> lab.Theorem2Config:
    cfg = lab.Theorem2Config(args.p, args.chi, args.sigma, args.a, args.mmax, args.trunc, args.prec)
    cfg.check_scale(args.allow_large)
    return cfg


def cmd_theorem2(args) -> int:
    cfg = _config(args)
    report = lab.convergence_report(cfg)
    if args.series_dir:
        out = Path(args.series_dir)
        out.mkdir(parents=True, exist_ok=True)
        for m in range(1, cfg.m_max + 1):
            G = lab.build_G_km(cfg, m).G
            (out / f"G_k{cfg.k(m)}.json").write_bytes(render_mapping(series_to_dict(G), "json"))
    _emit(args, render_report(report.to_dict(), args.format))
    return STATUS_EXIT[report.status]


def cmd_theorem1(args) -> int:
    F = _load_series(args.f)
    if F.meta.kind != SIEGEL:
        raise UsageError("--f must hold a degree-2 Siegel series")
    cfg = _config(args)
    report = lab.theorem1_product_run(F, cfg)
    _emit(args, render_report(report.to_dict(), args.format))
    return STATUS_EXIT[report.status]


def cmd_lemma2(args) -> int:
    if args.a is None:
        if args.chi is None:
            raise UsageError("lemma2 needs --a or --chi")
        cfg = lab.Theorem2Config(args.p, args.chi, args.sigma, None, max(args.mmax, 1), args.trunc, args.prec)
        a = cfg.a
    else:
        a = args.a
    report = lab.lemma2_check(args.p, a, args.mmax)
    _emit(args, render_report(report.to_dict(), args.format))
    return STATUS_EXIT[report.status]


def cmd_unitcong(args) -> int:
    G = _load_series(args.g)
    sigma = EmbeddingSigma.parse(args.sigma, args.prec)
    res = lab.unit_congruence_check(G, sigma, sigma.p)
    data = res.to_dict()
    data["sigma"] = sigma.spec()
    _emit(args, render_mapping(data, args.format))
    return EXIT_OK if res.holds else EXIT_FAIL


COMMANDS = {
    "embeddings": cmd_embeddings,
    "lvalue": cmd_lvalue,
    "eisenstein": cmd_series,
    "hecke-eisenstein": cmd_series,
    "jacobi-eisenstein": cmd_series,
    "lift": cmd_lift,
    "theorem2": cmd_theorem2,
    "theorem1": cmd_theorem1,
    "lemma2": cmd_lemma2,
    "unitcong": cmd_unitcong,
}


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"padic-siegel-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.prec < 1 or args.trunc < 0:
        print("padic-siegel-lab: error: --prec must be >= 1 and --trunc >= 0", file=sys.stderr)
        return EXIT_USAGE
    if args.cache_dir:
        configure_cache(args.cache_dir)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"padic-siegel-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        get_cache().flush()


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
