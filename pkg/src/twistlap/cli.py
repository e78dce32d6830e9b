"""Command-line interface: ``twistlap {spectrum,hermite,kernel,verify,decompose}``.

Results go to stdout as JSON (or CSV for ``hermite --format csv``); warnings
go to stderr.  Exit status is 0 on success, 1 when a verification fails or
an input is not integrable, and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from . import integrate, spectra, verify
from .errors import InvalidParameter, NonIntegrable, TwistlapError
from .function_space import ExpPoly

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_complex(token: str) -> complex:
    """Parse ``re+imi`` style tokens such as ``1``, ``-2.5i``, ``0.3-0.4i``, ``i``."""
    t = token.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if not t:
        raise UsageError("empty complex number")
    t = re.sub(r"(^|[+\-])i$", r"\g<1>1i", t)
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse complex number {token!r}") from None


def parse_cvector(text: str) -> list[complex]:
    return [parse_complex(tok) for tok in text.split(",")]


def parse_ivector(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse index vector {text!r}") from None
    if any(v < 0 for v in out):
        raise UsageError("indices must be non-negative")
    return out


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _warn(msg: str) -> None:
    sys.stderr.write(f"warning: {msg}\n")


def _check_mu(mu: float):
    if not mu > 0:
        raise UsageError(f"--mu must be > 0, got {mu}")


# commands ----------------------------------------------------------------

def cmd_spectrum(args) -> int:
    _check_mu(args.mu)
    if args.levels < 1:
        raise UsageError("--levels must be >= 1")
    rows = [spectra.eigenvalue(l, args.mu, args.n) for l in range(args.levels)]
    _emit({"n": args.n, "mu": args.mu,
           "levels": [r.to_json() for r in rows]})
    return EXIT_OK


def cmd_hermite(args) -> int:
    _check_mu(args.mu)
    r = parse_ivector(args.r) if args.r else (0,) * args.n
    s = parse_ivector(args.s) if args.s else (0,) * args.n
    if len(r) != args.n or len(s) != args.n:
        raise UsageError(f"--r and --s need {args.n} entries")
    idx = spectra.HermiteIndex(r, s)
    f = spectra.hermite(idx, args.nu, args.mu, args.route)
    discrepancies = []
    if args.route != "rodrigues":
        ref = spectra.hermite_rodrigues(idx, args.nu, args.mu)
        if not f.isclose(ref, 1e-10):
            _warn(f"route {args.route!r} disagrees with the Rodrigues formula "
                  f"for r={list(r)}, s={list(s)}")
            discrepancies.append({"identity": f"h_{{r,s}} via {args.route}",
                                  "paper_location": "explicit form of the complex Hermite functions",
                                  "observed": ExpPoly.to_json(f)["terms"],
                                  "expected": ExpPoly.to_json(ref)["terms"]})
    if args.format == "csv":
        sys.stdout.write(f.to_csv())
        return EXIT_OK
    out = f.to_json()
    out["index"] = {"r": list(r), "s": list(s)}
    out["route"] = args.route
    if discrepancies:
        out["discrepancies"] = discrepancies
    _emit(out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    _check_mu(args.mu)
    if args.l is None or args.l < 0:
        raise UsageError("--l must be given and >= 0")
    z = parse_cvector(args.z) if args.z else [0j] * args.n
    w = parse_cvector(args.w) if args.w else list(z)
    if len(z) != args.n or len(w) != args.n:
        raise UsageError(f"--z and --w need {args.n} entries")
    value = spectra.kernel_eval(args.l, args.nu, args.mu, args.n, z, w)
    _emit({"l": args.l, "n": args.n, "mu": args.mu, "nu": args.nu,
           "z": [_pair(v) for v in z], "w": [_pair(v) for v in w],
           "value": _pair(value),
           "diagonal": spectra.kernel_prefactor(args.l, args.mu, args.n)})
    return EXIT_OK


def cmd_verify(args) -> int:
    _check_mu(args.mu)
    rep = verify.run(args.suite, n=args.n, nu=args.nu, mu=args.mu, seed=args.seed,
                     max_degree=args.max_degree, l=args.l)
    _emit(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_decompose(args) -> int:
    _check_mu(args.mu)
    if args.levels < 1:
        raise UsageError("--levels must be >= 1")
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        f = ExpPoly.loads(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse ExpPoly JSON: {exc}") from None
    dec = integrate.decompose(f, args.levels, args.nu, args.mu)
    _emit(dec.to_json())
    return EXIT_OK


# parser -------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, levels: int | None = None):
    p.add_argument("--n", type=int, default=1, help="complex dimension")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=0.0)
    if levels is not None:
        p.add_argument("--levels", type=int, default=levels)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistlap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalue table of the Landau levels")
    _common(p, levels=3)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("hermite", help="coefficients of a complex Hermite function")
    _common(p)
    p.add_argument("--r", help="comma-separated multi-index r")
    p.add_argument("--s", help="comma-separated multi-index s")
    p.add_argument("--route", choices=spectra.ROUTES, default="rodrigues")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_hermite)

    p = sub.add_parser("kernel", help="evaluate the level-l projection kernel")
    _common(p)
    p.add_argument("--l", type=int)
    p.add_argument("--z", help="point z as comma-separated re+imi tokens")
    p.add_argument("--w", help="point w (defaults to z)")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("suite", choices=verify.SUITES + ("all",))
    _common(p)
    p.add_argument("--l", type=int, default=None, help="highest kernel level")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=int, default=3, dest="max_degree")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="split an ExpPoly into Landau levels")
    p.add_argument("input", help="ExpPoly JSON file, or - for stdin")
    _common(p, levels=4)
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be >= 1")
    try:
        return args.func(args)
    except (UsageError, InvalidParameter) as exc:
        sys.stderr.write(f"twistlap: error: {exc}\n")
        return EXIT_USAGE
    except NonIntegrable as exc:
        sys.stderr.write(f"twistlap: not integrable: {exc}\n")
        return EXIT_FAIL
    except TwistlapError as exc:
        sys.stderr.write(f"twistlap: error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
