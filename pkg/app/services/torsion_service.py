"""
Decision procedures for the class eta_C = D1 - D2 of a curve of bidegree (k, k).

Two independent paths decide whether eta_C has order exactly k: the rank of
the coefficient matrix (grid family membership) and the kernel of the Cech
multiplication map at n = k. Higher orders, the grilled-type test and the
finite-generation verdict build on the same kernel machinery.
"""
from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional, Tuple

from .. import linalg
from ..config import settings
from ..errors import InternalConsistencyError, NoTorsionSection, RangeError
from ..models.biform import BiForm, TorusAuto, divide_exact
from ..models.reports import (
    AnalysisReport,
    FiniteGenerationVerdict,
    GridReport,
    GrilledCertificate,
    GrilledReport,
    SmoothnessReport,
    TorsionReport,
    TorsionTrial,
)
from .cech_service import QuotientSpace, h0_dim, kernel_sections, mult_by_h_matrix, section_times_form
from .smooth_service import CurveContext

__all__ = [
    "grid_rank",
    "is_n_torsion",
    "torsion_order",
    "automorphism_bound",
    "is_grilled",
    "finite_generation_verdict",
    "smoothness_report",
    "analyze",
]

log = logging.getLogger(__name__)

_LOWER_BOUND_REASON = (
    "for 0 < n < k both H^1(O(n-k, -n-k)) and H^0(O(n, -n)) on the quadric vanish, so O_C(n, -n) has no sections"
)


# --------------------------------------------------------------------------
# Grid family
# --------------------------------------------------------------------------
def _column(grid: List[List[Any]], j: int) -> List[Any]:
    return [row[j] for row in grid]


def grid_rank(h: BiForm) -> GridReport:
    """Rank of the coefficient matrix; a rank <= 2 factorization h = f1*g2 + g1*f2 when it exists."""
    field = h.field
    d1, d2 = h.bidegree
    grid = [list(row) for row in h.coeffs]
    reduced, pivots = linalg.rref(grid, d2 + 1, h.domain)
    rank = len(pivots)
    report = GridReport(rank=rank, is_grid=rank <= 2)
    if rank > 2:
        log.info("coefficient matrix of %s has rank %d", h.bidegree, rank)
        return report
    zero_x, zero_y = [field.zero] * (d1 + 1), [field.zero] * (d2 + 1)
    # Columns of M are combinations of its pivot columns, with weights read from the rref rows
    f1 = _column(grid, pivots[0]) if rank >= 1 else zero_x
    g2 = list(reduced[0]) if rank >= 1 else zero_y
    g1 = _column(grid, pivots[1]) if rank == 2 else zero_x
    f2 = list(reduced[1]) if rank == 2 else zero_y
    forms = (
        BiForm.from_factors(field, f1, [field.one]),
        BiForm.from_factors(field, g1, [field.one]),
        BiForm.from_factors(field, [field.one], f2),
        BiForm.from_factors(field, [field.one], g2),
    )
    rebuilt = BiForm.from_factors(field, f1, g2) + BiForm.from_factors(field, g1, f2)
    if rebuilt != h:
        raise InternalConsistencyError("rank factorization does not reassemble the form", {"form": h.to_text()})
    report.factorization = {
        "f1": [field.format_element(c) for c in f1],
        "g1": [field.format_element(c) for c in g1],
        "f2": [field.format_element(c) for c in f2],
        "g2": [field.format_element(c) for c in g2],
    }
    report.forms = forms
    return report


# --------------------------------------------------------------------------
# Torsion of eta_C
# --------------------------------------------------------------------------
def is_n_torsion(ctx: CurveContext, n: int) -> Tuple[bool, int]:
    """Whether O_C(n, -n) is trivial, with the kernel dimension that decides it."""
    ctx.require_smooth()
    if n < 1:
        raise RangeError(f"n must be positive, got {n}")
    if n < ctx.k:
        return False, 0
    cech = mult_by_h_matrix(ctx.h, n - ctx.k, -n - ctx.k)
    log.debug("torsion test n=%d: %dx%d matrix", n, *cech.shape)
    kernel_dim = cech.kernel_dimension()
    if kernel_dim > 1:
        raise InternalConsistencyError(
            f"h^0 of a degree-zero bundle came out as {kernel_dim}", {"n": n, "kernel_dim": kernel_dim}
        )
    return kernel_dim == 1, kernel_dim


def automorphism_bound(h: BiForm, sigma: TorusAuto) -> Optional[int]:
    """
    The order of sigma when h is a sigma-eigenform, else None.

    For such curves the order of eta_C divides it provided the quotient by
    sigma has genus zero; that hypothesis is not checked here.
    """
    return sigma.m if sigma.character(h) is not None else None


def torsion_order(ctx: CurveContext, n_max: Optional[int] = None) -> TorsionReport:
    ctx.require_smooth()
    k = ctx.k
    n_max = settings.default_nmax(k) if n_max is None else n_max
    if n_max < k:
        raise RangeError(f"n_max must be at least k = {k}, got {n_max}", {"k": k, "n_max": n_max})
    bound = automorphism_bound(ctx.h, ctx.automorphism) if ctx.automorphism else None
    report = TorsionReport(
        field=str(ctx.field),
        k=k,
        n_max=n_max,
        lower_bound=k,
        lower_bound_reason=_LOWER_BOUND_REASON,
        automorphism_bound=bound,
    )
    if bound is not None:
        report.note = f"curve is an eigenform of an automorphism of order {bound}; the order divides it " \
            "when the quotient curve is rational (not verified)"
    for n in range(k, n_max + 1):
        found, kernel_dim = is_n_torsion(ctx, n)
        report.tested.append(TorsionTrial(n=n, kernel_dim=kernel_dim))
        if found:
            report.order = n
            break
    if report.order is not None and bound is not None and bound % report.order:
        raise InternalConsistencyError(
            f"order {report.order} does not divide the automorphism order {bound}",
            {"order": report.order, "bound": bound},
        )
    log.info("torsion search up to %d over %s: order %s", n_max, ctx.field, report.order)
    return report


def finite_generation_verdict(ctx: CurveContext, n_max: Optional[int] = None,
                              report: Optional[TorsionReport] = None) -> FiniteGenerationVerdict:
    ctx.require_smooth()
    if ctx.k < 3:
        return FiniteGenerationVerdict(verdict="NotApplicable", reason=f"the criterion needs k > 2, got k = {ctx.k}")
    report = report or torsion_order(ctx, n_max)
    if report.order is not None:
        reason = None
        if ctx.field.is_prime_field:
            reason = "over a finite field eta_C is always torsion"
        return FiniteGenerationVerdict(verdict="FinitelyGenerated", order=report.order, reason=reason)
    reason = None
    if ctx.field.is_prime_field:
        reason = f"over a finite field eta_C is always torsion; its order exceeds {report.n_max}"
    return FiniteGenerationVerdict(verdict="OpenUpTo", n_max=report.n_max, reason=reason)


# --------------------------------------------------------------------------
# Grilled type
# --------------------------------------------------------------------------
def _x_forms(h: BiForm, n: int, clearing: int) -> List[BiForm]:
    """y1^clearing * x0^i x1^(n-i), i = 0..n."""
    return [BiForm.monomial(h.field, i, 0, n, clearing) for i in range(n + 1)]


def _y_forms(h: BiForm, n: int) -> List[BiForm]:
    return [BiForm.monomial(h.field, 0, j, 0, n) for j in range(n + 1)]


def is_grilled(ctx: CurveContext, n: int) -> GrilledReport:
    """
    Compare the restrictions of (n, 0)-forms with s times the (0, n)-forms inside H^0(C, O_C(n, 0)),
    where s is a nowhere vanishing section of O_C(n, -n).
    """
    ctx.require_smooth()
    h = ctx.h
    found, _ = is_n_torsion(ctx, n) if n >= 1 else (False, 0)
    if not found:
        raise NoTorsionSection(f"O_C({n}, {-n}) is not trivial, no section to compare with", {"tried": [n]})
    section = kernel_sections(ctx, n)[0]
    clearing = section.clearing_exponent
    space = QuotientSpace(h, n, clearing)
    x_forms = _x_forms(h, n, clearing)
    y_forms = _y_forms(h, n)
    w1 = [space.coordinates(f) for f in x_forms]
    w2 = [section_times_form(section, c, space).coordinates for c in y_forms]
    K = h.domain
    dim_w1 = linalg.rank(w1, space.dimension, K)
    dim_w2 = linalg.rank(w2, space.dimension, K)
    dim_sum = linalg.rank(w1 + [list(v) for v in w2], space.dimension, K)
    if dim_w1 != n + 1 or dim_w2 != n + 1:
        raise InternalConsistencyError(
            f"ruling subspaces have dimensions {dim_w1}, {dim_w2}, expected {n + 1}", {"n": n}
        )
    # Both subspaces sit inside y1^N * H^0(C, O_C(n, 0))
    ambient = h0_dim(ctx, n, 0)
    if dim_sum > ambient:
        raise InternalConsistencyError(f"W1 + W2 has dimension {dim_sum} above h^0 = {ambient}", {"n": n})
    intersection = dim_w1 + dim_w2 - dim_sum
    report = GrilledReport(
        n=n,
        ambient_dim=ambient,
        dim_w1=dim_w1,
        dim_w2=dim_w2,
        dim_intersection=intersection,
        grilled=intersection > 0,
        complement=space.complement_labels(),
        section=section.to_dict(),
    )
    if intersection > 0:
        report.certificate = _grilled_certificate(ctx, section, space, x_forms, y_forms, w1, w2)
    log.info("grilled test at n=%d: dim W1=%d dim W2=%d intersection=%d", n, dim_w1, dim_w2, intersection)
    return report


def _grilled_certificate(ctx: CurveContext, section: Any, space: QuotientSpace, x_forms: List[BiForm],
                         y_forms: List[BiForm], w1: List[List[Any]], w2: List[Any]) -> GrilledCertificate:
    """A pair (f, c) with y1^N f = y1^N part_a c modulo h, checked by exact division."""
    h, field = ctx.h, ctx.field
    n = len(x_forms) - 1
    columns = w1 + [list(v) for v in w2]
    rows = linalg.transpose(columns, space.dimension) if columns else []
    relation = linalg.nullspace(rows, len(columns), h.domain)[0]
    a, b = relation[:n + 1], relation[n + 1:]
    f = BiForm.from_factors(field, [a[i] for i in range(n + 1)], [field.one])
    c = BiForm.from_factors(field, [field.one], [-b[j] for j in range(n + 1)])
    cleared = BiForm.zero(field, n, section.clearing_exponent)
    for coefficient, form in zip(a, x_forms):
        cleared = cleared + form.scale(coefficient)
    difference = cleared - section_times_form(section, c, space).representative
    if divide_exact(difference, h) is None:
        raise InternalConsistencyError("grilled certificate is not divisible by the curve equation", {"n": n})
    return GrilledCertificate(f=f.to_text(), c=c.to_text(), clearing_exponent=section.clearing_exponent)


# --------------------------------------------------------------------------
# Composite analysis
# --------------------------------------------------------------------------
def smoothness_report(ctx: CurveContext) -> SmoothnessReport:
    return SmoothnessReport(
        field=str(ctx.field),
        bidegree=list(ctx.h.bidegree),
        form=ctx.h.to_text(),
        smooth=ctx.is_smooth,
        witnesses=[w.to_dict() for w in ctx.verdict.witnesses],
        shear=ctx.verdict.shear,
    )


def analyze(ctx: CurveContext, n_max: Optional[int] = None, grilled: bool = False) -> AnalysisReport:
    """Smoothness, grid membership and, for smooth curves, torsion order and the finite-generation verdict."""
    report = AnalysisReport(
        field=str(ctx.field),
        form=ctx.h.to_text(),
        k=ctx.k,
        genus=ctx.genus,
        smoothness=smoothness_report(ctx),
        grid=grid_rank(ctx.h),
        automorphism=_automorphism_annotation(ctx),
    )
    if not ctx.is_smooth:
        return report
    report.torsion = torsion_order(ctx, n_max)
    report.verdict = finite_generation_verdict(ctx, n_max, report.torsion)
    if report.grid.is_grid != (report.torsion.order == ctx.k):
        raise InternalConsistencyError("grid membership and the order-k kernel test disagree",
                                       {"rank": report.grid.rank, "order": report.torsion.order})
    if grilled and report.torsion.order is not None:
        report.grilled = is_grilled(ctx, report.torsion.order)
    return report


def _automorphism_annotation(ctx: CurveContext) -> Optional[Dict[str, Any]]:
    if ctx.automorphism is None:
        return None
    return {**ctx.automorphism.to_dict(), "character": ctx.automorphism.character(ctx.h)}
