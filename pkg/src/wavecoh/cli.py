"""Command-line interface: ``wavecoh {spectrum,wave,reduce,verify,dual}``.

Exit codes: 0 success, 1 a check failed, 2 bad arguments or literal,
3 numeric non-convergence, 4 input not in R.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass

import mpmath

from .cohomology import check_in_R, reduce_to_linear, verify_certificate, wave_basis, wave_basis_coordinates
from .contour import dual_g1_derivatives, dual_g2
from .errors import (ConditionWarning, IllConditioned, InconsistentEigenvalue, NonConvergence,
                     QuadratureFailure, ResidueObstruction, SingularBasis)
from .literal import LiteralSyntaxError, parse_rational
from .pfrac import PoleExpansion, partial_fractions
from .poly import Polynomial
from .report import SCHEMA_VERSION, _jsonable
from .roots import cluster_roots, complex_roots
from .scalars import PrecisionContext, format_exact, format_scalar, parse_exact, to_mp
from .spectra import char_poly, spectral_data, wave_recurrence
from .verify import Tolerances, run_verification, summarize_datum

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC, EXIT_NOT_IN_R = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    a: object
    eig: str
    bits: int
    tol: float
    seed: int
    fmt: str
    timings: bool = False

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.bits)

    def to_dict(self) -> dict:
        return {"n": self.n, "a": format_exact(self.a), "eig": self.eig, "bits": self.bits,
                "tol": f"{self.tol:.6e}", "seed": self.seed}


def _env_default(name: str, cast, fallback):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return fallback
    try:
        return cast(raw)
    except ValueError as exc:
        raise UsageError(f"bad value for {name}: {raw!r}") from exc


def make_config(args) -> RunConfig:
    bits = args.bits if args.bits is not None else _env_default("WAVECOH_BITS", int, 256)
    tol = args.tol if args.tol is not None else _env_default("WAVECOH_TOL", float, 1e-8)
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    try:
        a = parse_exact(args.a)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.eig != "all":
        try:
            int(args.eig)
        except ValueError as exc:
            raise UsageError("--eig must be an integer index or 'all'") from exc
    try:
        ctx = PrecisionContext(bits)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not tol > 0:
        raise UsageError("--tol must be positive")
    if float(ctx.zero_tolerance) > tol:
        raise UsageError("--tol is below the symbolic zero tolerance at this precision; raise --bits")
    return RunConfig(args.n, a, args.eig, bits, tol, args.seed, args.format, args.timings)


def _scalar_text(x, digits: int = 20) -> str:
    if not isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return format_exact(x)
    z = mpmath.mpc(x)
    re_txt = mpmath.nstr(z.real, digits)
    if z.imag == 0:
        return re_txt
    im_txt = mpmath.nstr(abs(z.imag), digits) + "*i"
    if z.real == 0:
        return ("-" if z.imag < 0 else "") + im_txt
    return f"{re_txt}{'-' if z.imag < 0 else '+'}{im_txt}"


def _fmt_poly(poly: Polynomial, var: str) -> str:
    parts = []
    for k in range(poly.degree, -1, -1):
        c = poly[k]
        if c == 0:
            continue
        txt = _scalar_text(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and txt in ("1", "1.0"):
            term = mono
        elif mono and txt in ("-1", "-1.0"):
            term = "-" + mono
        else:
            compound = "+" in txt[1:] or "-" in txt[1:].replace("e-", "")
            term = f"({txt})" if compound and mono else txt
            term = f"{term}*{mono}" if mono else term
        parts.append(term)
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _emit(cfg: RunConfig, payload: dict, text: str, csv_rows: list | None = None, out=None):
    out = out or sys.stdout
    if cfg.fmt == "json":
        body = {"schema_version": SCHEMA_VERSION, "config": cfg.to_dict(), **payload}
        out.write(json.dumps(_jsonable(body), indent=2, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        import csv
        rows = csv_rows or []
        if rows:
            w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: json.dumps(_jsonable(v)) if isinstance(v, (dict, list)) else v
                            for k, v in r.items()})
    else:
        out.write(text + "\n")


def _select(cfg: RunConfig):
    data = spectral_data(cfg.n, cfg.a, cfg.ctx)
    if cfg.eig == "all":
        return data
    idx = int(cfg.eig)
    if not 0 <= idx < len(data):
        raise UsageError(f"eigenvalue index {idx} out of range (0..{len(data) - 1})")
    return [data[idx]]


def cmd_spectrum(cfg: RunConfig, args) -> int:
    chi = char_poly(cfg.n, cfg.a)
    ctx = cfg.ctx
    rows = []
    with ctx.workprec():
        for sd in spectral_data(cfg.n, cfg.a, ctx):
            _, res = wave_recurrence(cfg.n, to_mp(cfg.a), sd.b)
            rows.append({"index": sd.index, "b": format_scalar(sd.b), "multiplicity": sd.multiplicity,
                         "chi_residual": f"{float(abs(chi(sd.b))):.3e}",
                         "recurrence_residual": f"{float(abs(res)):.3e}"})
        text = [f"chi(lambda) = {_fmt_poly(chi, 'lambda')}"]
        for r, sd in zip(rows, spectral_data(cfg.n, cfg.a, ctx)):
            text.append(f"b[{r['index']}] = {_scalar_text(sd.b)}  (multiplicity {r['multiplicity']}, "
                        f"|chi(b)| = {r['chi_residual']})")
    _emit(cfg, {"chi": [format_exact(c) for c in chi.coeffs], "eigenvalues": rows},
          "\n".join(text), rows)
    return EXIT_OK


def cmd_wave(cfg: RunConfig, args) -> int:
    data = _select(cfg)
    text = []
    with cfg.ctx.workprec():
        for sd in data:
            text.append(f"[{sd.index}] b = {_scalar_text(sd.b)}")
            text.append(f"    p(x) = {_fmt_poly(sd.p, 'x')}")
            text.append(f"    chi'(b) = {_scalar_text(sd.chi_prime_at_b)}")
            text.append(f"    c (self-pairing) = {_scalar_text(sd.c_selfpair)}")
            for w in sd.warnings:
                text.append(f"    warning: {w}")
        summaries = [summarize_datum(sd) for sd in data]
    _emit(cfg, {"spectral_data": summaries}, "\n".join(text), summaries)
    return EXIT_OK


def literal_to_expansion(text: str, sd, ctx: PrecisionContext) -> PoleExpansion:
    """Turn a literal into a PoleExpansion, placing ``p`` poles on the stored roots."""
    num, den, m = parse_rational(text).expand(sd.p if sd is not None else None)
    if den.is_zero:
        raise LiteralSyntaxError("zero denominator")
    with ctx.workprec():
        roots = []
        if m and sd.n > 0:
            roots = [[z, m] for z in wave_basis(sd, ctx).roots]
        if den.degree > 0:
            for z, k in cluster_roots(complex_roots(den, ctx), ctx):
                for r in roots:
                    if abs(to_mp(r[0]) - z) <= ctx.zero_tolerance * max(1, abs(z)):
                        r[1] += k
                        break
                else:
                    roots.append([z, k])
        leading = den.lc() * (sd.p.lc() ** m if m else 1)
        if not roots:
            return PoleExpansion(num / leading if leading != 1 else num)
        return partial_fractions(num, [tuple(r) for r in roots], ctx, leading=leading)


def _expansion_json(q: PoleExpansion) -> dict:
    return {"polynomial": [format_scalar(c) for c in q.polynomial.coeffs],
            "poles": [{"z": format_scalar(z), "coefficients": [format_scalar(c) for c in cs]}
                      for z, cs in q.poles]}


def cmd_reduce(cfg: RunConfig, args) -> int:
    ctx = cfg.ctx
    if cfg.eig == "all":
        raise UsageError("reduce needs a single eigenvalue index")
    sd = _select(cfg)[0]
    with ctx.workprec():
        q = literal_to_expansion(args.input, sd, ctx)
        rep = check_in_R(q, sd.weight, ctx)
        if not rep.in_R:
            bad = [format_scalar(z) for z, _, r in rep.entries if r != 0]
            raise ResidueObstruction(f"input is not in R: nonzero residue at {bad}")
        cls = reduce_to_linear(q, sd.weight, ctx)
        roots = wave_basis(sd, ctx).roots if sd.n > 0 else ()
        in_Rp = all(len(cs) <= 2 and any(abs(to_mp(z) - to_mp(r)) <= ctx.zero_tolerance * max(1, abs(to_mp(r)))
                                          for r in roots)
                    for z, cs in q.poles)
        basis = None
        if in_Rp:
            cls = wave_basis_coordinates(q, sd, ctx)
            basis = wave_basis(sd, ctx)
        alpha, beta = cls.linear_form
        payload = {"input": args.input, "eig": sd.index,
                   "linear_form": {"alpha": format_scalar(alpha), "beta": format_scalar(beta)},
                   "certificate": _expansion_json(cls.certificate.u)}
        text = [f"alpha = {_scalar_text(alpha)}", f"beta = {_scalar_text(beta)}"]
        if cls.wave_coords is not None:
            c, d = cls.wave_coords
            payload["wave_coords"] = {"c": format_scalar(c), "d": format_scalar(d)}
            text += [f"c = {_scalar_text(c)}", f"d = {_scalar_text(d)}"]
        text.append(f"certificate u = {cls.certificate.u!r}")
        status = EXIT_OK
        if args.check:
            ok, res = verify_certificate(q, cls, sd.weight, ctx, basis=basis)
            payload["check"] = {"status": "pass" if ok else "fail", "residual": f"{float(res):.6e}"}
            text.append(f"certificate check: {'pass' if ok else 'fail'} (residual {float(res):.3e})")
            status = EXIT_OK if ok else EXIT_FAIL
    _emit(cfg, payload, "\n".join(text), [{"alpha": payload["linear_form"]["alpha"],
                                           "beta": payload["linear_form"]["beta"],
                                           **payload.get("wave_coords", {})}])
    return status


def cmd_verify(cfg: RunConfig, args) -> int:
    report = run_verification(cfg.n, cfg.a, cfg.eig, Tolerances(acceptance=cfg.tol), cfg.seed, cfg.ctx)
    if cfg.fmt == "json":
        body = report.to_dict(cfg.timings)
        body["config"] = cfg.to_dict()
        sys.stdout.write(json.dumps(body, indent=2, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        sys.stdout.write(report.to_csv(cfg.timings))
    else:
        data = _select(cfg)
        lines = [f"[{sd.index}] b = {_scalar_text(sd.b)}  c = {_scalar_text(sd.c_selfpair)}"
                 for sd in data]
        sys.stdout.write("\n".join(lines) + "\n" + report.to_text() + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_dual(cfg: RunConfig, args) -> int:
    ctx = cfg.ctx
    try:
        u = parse_exact(args.u)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = []
    text = []
    with ctx.workprec():
        uu = to_mp(u)
        for sd in _select(cfg):
            g0, g1, g2 = (r.value for r in dual_g1_derivatives(sd, args.j, uu, range(3), ctx))
            h = dual_g2(sd, args.j, uu, ctx).value
            terms = (uu * g2, -sd.n * g1, -(uu * uu - to_mp(sd.a) * uu + sd.b) * g0)
            ode = abs(sum(terms)) / sum(abs(t) for t in terms)
            pair = abs(g0 - (-1) ** sd.n * h) / abs(g0)
            rows.append({"index": sd.index, "j": args.j, "u": format_exact(u), "g1": format_scalar(g0),
                         "g2": format_scalar(h), "g1_vs_g2": f"{float(pair):.3e}",
                         "dual_ode_residual": f"{float(ode):.3e}"})
            text.append(f"[{sd.index}] g1({format_exact(u)}) = {_scalar_text(g0)}")
            text.append(f"    g2 = {_scalar_text(h)}  |g1 - (-1)^n g2|/|g1| = {float(pair):.3e}")
            text.append(f"    dual ODE residual = {float(ode):.3e}")
    _emit(cfg, {"dual": rows}, "\n".join(text), rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=0, help="degree of the wave polynomial")
    common.add_argument("--a", default="0", help="weight parameter, 'p/q' or 'p/q+r/s*i'")
    common.add_argument("--eig", default="all", help="eigenvalue index or 'all'")
    common.add_argument("--bits", type=int, default=None,
                        help="mantissa bits (env WAVECOH_BITS, default 256)")
    common.add_argument("--tol", type=float, default=None,
                        help="acceptance tolerance (env WAVECOH_TOL, default 1e-8)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized trials")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--timings", action="store_true", help="include wall times in reports")

    parser = argparse.ArgumentParser(prog="wavecoh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="characteristic polynomial and eigenvalues")
    sub.add_parser("wave", parents=[common], help="wave polynomials and their constants")
    red = sub.add_parser("reduce", parents=[common], help="reduce a rational function modulo D")
    red.add_argument("input", help="rational-function literal in x and p, e.g. '(x^2-1)/p^2'")
    red.add_argument("--check", action="store_true", help="re-verify the exactness certificate")
    sub.add_parser("verify", parents=[common], help="run every identity check")
    dual = sub.add_parser("dual", parents=[common], help="bispectral dual solutions at u")
    dual.add_argument("--u", default="1", help="point u, exact literal")
    dual.add_argument("--j", type=int, choices=(0, 1, 2), default=2, help="contour index")
    return parser


COMMANDS = {"spectrum": cmd_spectrum, "wave": cmd_wave, "reduce": cmd_reduce,
            "verify": cmd_verify, "dual": cmd_dual}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "reduce" and args.eig == "all":
        args.eig = "0"
    try:
        cfg = make_config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditionWarning)
            with cfg.ctx.workprec():
                return COMMANDS[args.command](cfg, args)
    except (UsageError, LiteralSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResidueObstruction as exc:
        print(f"not in R: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_R
    except (NonConvergence, QuadratureFailure, IllConditioned, SingularBasis,
            InconsistentEigenvalue) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
