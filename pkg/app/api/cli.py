"""
Command-line front end.

Every subcommand prints one report document on stdout (JSON by default,
aligned plain text with ``--text``). Failures print a structured error
document and exit with the error's code: 1 domain error, 2 parse or usage
error, 3 curve not smooth, 4 internal consistency failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from ..config import settings
from ..errors import NoTorsionSection, QuadricError, UsageError
from ..logging_setup import setup_logging
from ..models.biform import BiForm
from ..models.field import FieldSpec
from ..models.reports import ErrorReport, H0Report, ReportModel, SampleReport, SecantReport, SymProdTable
from ..services import family_service, symprod_service, torsion_service
from ..services.cech_service import h0_curve
from ..services.smooth_service import CurveContext, build_context
from ..tasks.survey import run_survey
from .parser import parse_biform, parse_scalar

__all__ = ["build_parser", "main", "read_curve", "render_text"]

log = logging.getLogger(__name__)

# First parameter set of the genus 4 family
_SIGMA_DEFAULTS = ("-z5", "z5^3 + z5^2 + z5", "z5^2 + z5")


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message, {"usage": self.format_usage().strip()})


# --------------------------------------------------------------------------
# Input helpers
# --------------------------------------------------------------------------
def read_curve(source: str, field: FieldSpec) -> BiForm:
    """``source`` is an expression, ``@path`` for a UTF-8 file, or ``-`` for stdin."""
    if source == "-":
        text = sys.stdin.read()
    elif source.startswith("@"):
        path = Path(source[1:])
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read curve file '{path}': {exc.strerror}", {"path": str(path)}) from exc
    else:
        text = source
    return parse_biform(text.strip(), field)


def _field(args: argparse.Namespace, fallback: Optional[str] = None) -> FieldSpec:
    return FieldSpec.parse(args.field or fallback or settings.default_field)


def _context(args: argparse.Namespace) -> CurveContext:
    return build_context(read_curve(args.curve, _field(args)))


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------
def _cmd_analyze(args: argparse.Namespace) -> ReportModel:
    return torsion_service.analyze(_context(args), args.nmax, grilled=args.grilled)


def _cmd_smooth(args: argparse.Namespace) -> ReportModel:
    return torsion_service.smoothness_report(_context(args))


def _cmd_grid_test(args: argparse.Namespace) -> ReportModel:
    return torsion_service.grid_rank(read_curve(args.curve, _field(args)))


def _cmd_torsion(args: argparse.Namespace) -> ReportModel:
    ctx = _context(args)
    ctx.require_smooth()
    return torsion_service.torsion_order(ctx, args.nmax)


def _cmd_grilled(args: argparse.Namespace) -> ReportModel:
    ctx = _context(args)
    ctx.require_smooth()
    n = args.n
    if n is None:
        report = torsion_service.torsion_order(ctx, args.nmax)
        if report.order is None:
            tried = [trial.n for trial in report.tested]
            raise NoTorsionSection(f"no torsion order found up to n = {report.n_max}", {"tried": tried})
        n = report.order
    return torsion_service.is_grilled(ctx, n)


def _cmd_h0(args: argparse.Namespace) -> ReportModel:
    ctx = _context(args)
    dimension, basis = h0_curve(ctx, args.a, args.b)
    return H0Report(
        field=str(ctx.field),
        bundle=[args.a, args.b],
        dimension=dimension,
        riemann_roch=(args.a + args.b) * ctx.k + 1 - ctx.genus,
        basis=basis.to_dict(),
    )


def _cmd_symprod(args: argparse.Namespace) -> ReportModel:
    return symprod_service.intersection_table(args.k)


def _cmd_sample_grid(args: argparse.Namespace) -> ReportModel:
    field = _field(args)
    cfg = family_service.default_config(args.k, field, args.seed, args.height, args.count)
    samples = []
    for h in family_service.sample_curves(cfg, args.sampler):
        grid = torsion_service.grid_rank(h)
        samples.append({"form": h.to_text(), "rank": grid.rank, "is_grid": grid.is_grid})
    return SampleReport(field=str(field), k=args.k, seed=cfg.seed, samples=samples)


def _cmd_sigma_family(args: argparse.Namespace) -> ReportModel:
    field = _field(args, fallback="Q(z5)")
    alpha, beta, gamma = (parse_scalar(text, field) for text in (args.alpha, args.beta, args.gamma))
    ctx = family_service.sigma_family_g4(family_service.SigmaFamilySpec(alpha, beta, gamma))
    return torsion_service.analyze(ctx, args.nmax, grilled=args.grilled)


def _cmd_secant_rank(args: argparse.Namespace) -> ReportModel:
    seed = settings.default_seed if args.seed is None else args.seed
    rank = family_service.secant_jacobian_rank(args.k, seed)
    return SecantReport(k=args.k, seed=seed, rank=rank, expected=4 * args.k)


def _cmd_survey_fp(args: argparse.Namespace) -> ReportModel:
    seed = settings.default_seed if args.seed is None else args.seed
    histogram, _ = run_survey(
        args.k,
        args.p,
        args.nmax if args.nmax is not None else settings.default_nmax(args.k),
        args.trials,
        seed=seed,
        sampler=args.sampler,
        workers=args.workers,
        csv_path=args.csv,
        db_url=args.db,
    )
    return histogram


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="Q, Q(z<m>) or Fp:<p> (default: DEFAULT_FIELD)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--height", type=int, default=None, help="coefficient height of random samples")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", default=False, help="JSON report (default)")
    fmt.add_argument("--text", dest="text", action="store_true", default=False, help="plain-text report")
    common.add_argument("--log-level", default=None)

    curve = _ArgumentParser(add_help=False)
    curve.add_argument("--curve", required=True, help="form expression, @file or - for stdin")

    nmax = _ArgumentParser(add_help=False)
    nmax.add_argument("--nmax", type=int, default=None, help="torsion search bound (default: NMAX_FACTOR * k)")

    parser = _ArgumentParser(prog="quadric-torsion", description="Exact analysis of smooth (k, k) curves on P1 x P1")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def add(name: str, handler: Callable[[argparse.Namespace], ReportModel], parents: List[argparse.ArgumentParser],
            help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common, *parents], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("analyze", _cmd_analyze, [curve, nmax], "smoothness, grid, torsion order and verdict")
    p.add_argument("--grilled", action="store_true", help="also run the grilled test at the torsion order")
    add("smooth", _cmd_smooth, [curve], "smoothness certificate")
    add("grid-test", _cmd_grid_test, [curve], "coefficient rank and grid factorization")
    add("torsion", _cmd_torsion, [curve, nmax], "order of D1 - D2")
    p = add("grilled", _cmd_grilled, [curve, nmax], "grilled-type test")
    p.add_argument("--n", type=int, default=None, help="torsion order (searched when omitted)")
    p = add("h0", _cmd_h0, [curve], "h^0(C, O_C(a, b)) with a basis")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p = add("symprod", _cmd_symprod, [], "intersection numbers on C^(2)")
    p.add_argument("--k", type=int, required=True)
    p = add("sample-grid", _cmd_sample_grid, [], "sample curves")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--sampler", choices=family_service.SAMPLERS, default="grid")
    p = add("sigma-family", _cmd_sigma_family, [nmax], "genus 4 family with an automorphism of order 5")
    p.add_argument("--alpha", default=_SIGMA_DEFAULTS[0])
    p.add_argument("--beta", default=_SIGMA_DEFAULTS[1])
    p.add_argument("--gamma", default=_SIGMA_DEFAULTS[2])
    p.add_argument("--grilled", action="store_true")
    p = add("secant-rank", _cmd_secant_rank, [], "rank of the secant parametrization differential")
    p.add_argument("--k", type=int, required=True)
    p = add("survey-fp", _cmd_survey_fp, [nmax], "torsion order histogram over F_p")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--sampler", choices=family_service.SAMPLERS, default="random")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--csv", default=None, help="write histogram and trials as CSV")
    p.add_argument("--db", default=None, help="SQLAlchemy URL of the survey store (default: DATABASE_URL)")
    return parser


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------
def _scalar_text(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return ", ".join(_scalar_text(v) if not isinstance(v, list) else "[" + _scalar_text(v) + "]" for v in value)
    return str(value)


def render_text(data: Dict[str, Any], indent: int = 0) -> List[str]:
    """Aligned ``key: value`` lines; nested mappings are indented."""
    pad = "  " * indent
    keys = [key for key in data if key != "schema"]
    width = max((len(key) for key in keys), default=0) + 1
    lines: List[str] = []
    for key in keys:
        value = data[key]
        label = f"{key}:".ljust(width)
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.extend(render_text(item, indent + 1))
                lines.append("")
        else:
            lines.append(f"{pad}{label} {_scalar_text(value)}")
    return lines


def _emit(report: ReportModel, as_text: bool) -> None:
    if not as_text:
        print(report.to_json())
        return
    data = report.to_dict()
    if isinstance(report, SymProdTable):
        lines = symprod_service.render_table(report) + [""]
        data = {key: value for key, value in data.items() if key not in ("matrix", "extended_matrix")}
        lines += render_text(data)
    else:
        lines = render_text(data)
    print("\n".join(line.rstrip() for line in lines).rstrip())


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    as_text = False
    try:
        args = parser.parse_args(argv)
        as_text = bool(args.text)
        setup_logging(args.log_level)
        log.debug("running %s", args.command)
        report = args.handler(args)
    except QuadricError as exc:
        if exc.exit_code == 4:
            log.error("internal consistency failure: %s", exc.message)
        else:
            log.info("%s: %s", type(exc).__name__, exc.message)
        error = ErrorReport(error=exc.to_dict())
        if as_text:
            print("\n".join(render_text(error.to_dict())))
        else:
            print(error.to_json())
        return exc.exit_code
    _emit(report, as_text)
    return 0
