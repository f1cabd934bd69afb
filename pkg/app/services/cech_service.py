"""
Cech cohomology of line bundles on P1 x P1 and on a curve C = {h = 0}.

For a >= 0 and b <= -2 the group H^1(P1 x P1, O(a, b)) is spanned by the
cocycles

    x0^p x1^(a-p) y0^(-r) y1^(-(-b-r)),   0 <= p <= a,  1 <= r <= -b-1,

on the overlap y0 y1 != 0. Multiplication by h maps H^1(a-k, b-k) into
H^1(a, b); its kernel computes the part of H^0(C, O_C(a, b)) that does not
come from global forms, and the coboundary of a kernel element yields an
explicit two-chart representative of the corresponding section.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Tuple

from .. import linalg
from ..errors import DegenerateRange, DegreeError, InternalConsistencyError
from ..models.biform import BiForm, format_monomial
from ..models.field import FieldSpec
from .smooth_service import CurveContext

__all__ = [
    "h0_quadric",
    "h1_dim",
    "CohBasis",
    "CechMap",
    "LaurentForm",
    "ChartSection",
    "H0Basis",
    "QuotientSpace",
    "QuotientClass",
    "mult_by_h_matrix",
    "h0_dim",
    "h0_curve",
    "kernel_sections",
    "section_times_form",
]

log = logging.getLogger(__name__)


def h0_quadric(a: int, b: int) -> int:
    """dim of the bihomogeneous forms of bidegree (a, b)."""
    return (a + 1) * (b + 1) if a >= 0 and b >= 0 else 0


def h1_dim(a: int, b: int) -> int:
    if a >= 0 and b <= -2:
        return (a + 1) * (-b - 1)
    if a <= -2 and b >= 0:
        return (-a - 1) * (b + 1)
    return 0


@dataclass(frozen=True)
class CohBasis:
    """Cocycle basis of H^1(O(a, b)) with the y-poles orientation; empty otherwise."""
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a <= -2 and self.b >= 0:
            raise DegreeError(f"H^1(O({self.a}, {self.b})) carries x-poles; transpose the form first")

    @cached_property
    def monomials(self) -> Tuple[Tuple[int, int], ...]:
        if self.a < 0 or self.b > -2:
            return ()
        return tuple((p, r) for p in range(self.a + 1) for r in range(1, -self.b))

    @cached_property
    def index(self) -> Dict[Tuple[int, int], int]:
        return {key: position for position, key in enumerate(self.monomials)}

    @property
    def size(self) -> int:
        return len(self.monomials)

    def label(self, p: int, r: int) -> str:
        s = -self.b - r
        return f"x0^{p}*x1^{self.a - p}*y0^-{r}*y1^-{s}"


@dataclass(frozen=True)
class CechMap:
    """Matrix of multiplication by h from ``source`` to ``target`` (rows index the target)."""
    h: BiForm
    source: CohBasis
    target: Optional[CohBasis]
    rows: Tuple[Tuple[Any, ...], ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.target.size if self.target else 0), self.source.size

    def kernel_dimension(self) -> int:
        return linalg.kernel_dimension(self.rows, self.source.size, self.h.field)

    def kernel(self) -> List[List[Any]]:
        if not self.target or not self.target.size:
            return linalg.nullspace([], self.source.size, self.h.domain)
        return linalg.nullspace(self.rows, self.source.size, self.h.domain)


def mult_by_h_matrix(h: BiForm, a: int, b: int) -> CechMap:
    """Multiplication by h on H^1(O(a, b)), a >= 0 and b <= -2 for a non-empty source."""
    k1, k2 = h.bidegree
    source = CohBasis(a, b)
    if not source.size:
        # zero map; the target may sit in the x-pole chart
        return CechMap(h, source, None, ())
    target = CohBasis(a + k1, b + k2)
    rows = [[h.field.zero] * source.size for _ in range(target.size)]
    if target.size:
        terms = list(h.terms())
        for column, (p, r) in enumerate(source.monomials):
            s = -b - r
            for (i, j), c in terms:
                if j - r <= -1 and (k2 - j) - s <= -1:
                    rows[target.index[(p + i, r - j)]][column] += c
    return CechMap(h, source, target, tuple(tuple(row) for row in rows))


# --------------------------------------------------------------------------
# Laurent forms and chart sections
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class LaurentForm:
    """
    Finite sum of c * x0^i x1^(xdeg-i) y0^e y1^(ydeg-e) where y-exponents may be negative.
    ``terms`` maps (i, e) to the coefficient.
    """
    field: FieldSpec
    xdeg: int
    ydeg: int
    terms: Dict[Tuple[int, int], Any] = dc_field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return not any(self.terms.values())

    def items(self) -> Iterator[Tuple[Tuple[int, int], Any]]:
        for key in sorted(self.terms, reverse=True):
            if self.terms[key]:
                yield key, self.terms[key]

    def min_y1_exponent(self) -> int:
        exponents = [self.ydeg - e for (_, e), _ in self.items()]
        return min(exponents) if exponents else 0

    def times_form(self, c: BiForm) -> "LaurentForm":
        d1, d2 = c.bidegree
        out: Dict[Tuple[int, int], Any] = {}
        for (i, e), coefficient in self.items():
            for (i2, j2), c2 in c.terms():
                key = (i + i2, e + j2)
                out[key] = out.get(key, self.field.zero) + coefficient * c2
        return LaurentForm(self.field, self.xdeg + d1, self.ydeg + d2, out)

    def clear(self, n: int) -> BiForm:
        """y1^n times this form, which must be polynomial afterwards."""
        terms: Dict[Tuple[int, int], Any] = {}
        for (i, e), coefficient in self.items():
            if e < 0 or self.ydeg + n - e < 0:
                raise DegreeError(f"y1^{n} does not clear the poles of this form")
            terms[(i, e)] = coefficient
        return BiForm.from_terms(self.field, self.xdeg, self.ydeg + n, terms)

    def __add__(self, other: "LaurentForm") -> "LaurentForm":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, self.field.zero) + c
        return LaurentForm(self.field, self.xdeg, self.ydeg, out)

    def __neg__(self) -> "LaurentForm":
        return LaurentForm(self.field, self.xdeg, self.ydeg, {key: -c for key, c in self.terms.items()})

    def to_text(self) -> str:
        parts = []
        for (i, e), c in self.items():
            factors = [name if exp == 1 else f"{name}^{exp}"
                       for name, exp in (("x0", i), ("x1", self.xdeg - i), ("y0", e), ("y1", self.ydeg - e))
                       if exp != 0]
            coefficient = self.field.format_element(c)
            if self.field.is_compound(c):
                coefficient = f"({coefficient})"
            monomial = "*".join(factors) or "1"
            parts.append(monomial if coefficient == "1" else f"{coefficient}*{monomial}")
        return " + ".join(parts) or "0"


def _times_cocycle(h: BiForm, basis: CohBasis, vector: List[Any]) -> LaurentForm:
    k1, k2 = h.bidegree
    out: Dict[Tuple[int, int], Any] = {}
    for (p, r), w in zip(basis.monomials, vector):
        if not w:
            continue
        for (i, j), c in h.terms():
            key = (p + i, j - r)
            out[key] = out.get(key, h.field.zero) + c * w
    return LaurentForm(h.field, basis.a + k1, basis.b + k2, out)


@dataclass(frozen=True)
class ChartSection:
    """
    A global section of O_C(a, b) given on two charts.

    h * w splits as part_a + part_b where part_a has no y0-poles and part_b
    no y1-poles; the section is -part_b on {y0 != 0} and part_a on {y1 != 0}.
    """
    h: BiForm
    bidegree: Tuple[int, int]
    kernel_basis: CohBasis
    kernel_vector: Tuple[Any, ...]
    part_a: LaurentForm
    part_b: LaurentForm

    @property
    def clearing_exponent(self) -> int:
        """Least N >= 0 with y1^N * part_a polynomial."""
        return max(0, -self.part_a.min_y1_exponent())

    def chart_representatives(self) -> Dict[str, LaurentForm]:
        return {"y0 != 0": -self.part_b, "y1 != 0": self.part_a}

    def to_dict(self) -> Dict[str, Any]:
        field = self.part_a.field
        return {
            "bidegree": list(self.bidegree),
            "kernel_vector": {
                self.kernel_basis.label(p, r): field.format_element(w)
                for (p, r), w in zip(self.kernel_basis.monomials, self.kernel_vector) if w
            },
            "chart_y0": (-self.part_b).to_text(),
            "chart_y1": self.part_a.to_text(),
            "clearing_exponent": self.clearing_exponent,
        }


def _section_from_kernel(h: BiForm, basis: CohBasis, vector: List[Any]) -> ChartSection:
    product = _times_cocycle(h, basis, vector)
    part_a: Dict[Tuple[int, int], Any] = {}
    part_b: Dict[Tuple[int, int], Any] = {}
    for (i, e), c in product.items():
        if e >= 0:
            part_a[(i, e)] = c
        elif product.ydeg - e >= 0:
            part_b[(i, e)] = c
        else:
            raise InternalConsistencyError("kernel vector leaves a non-zero cocycle term", {"monomial": [i, e]})
    shape = (product.xdeg, product.ydeg)
    return ChartSection(h, shape, basis, tuple(vector),
                        LaurentForm(h.field, shape[0], shape[1], part_a),
                        LaurentForm(h.field, shape[0], shape[1], part_b))


# --------------------------------------------------------------------------
# Quotients of form spaces
# --------------------------------------------------------------------------
class QuotientSpace:
    """
    Forms(a, n) modulo h * Forms(a - k1, n - k2), with coordinates on a
    complement spanned by monomials.
    """

    def __init__(self, h: BiForm, a: int, n: int) -> None:
        if a < 0 or n < 0:
            raise DegreeError(f"quotient needs a non-negative bidegree, got ({a}, {n})")
        self.h = h
        self.bidegree = (a, n)
        k1, k2 = h.bidegree
        K = h.domain
        self.ambient_dim = h0_quadric(a, n)
        e1, e2 = a - k1, n - k2
        image = [h.shifted(i, j, e1, e2).flat() for i in range(e1 + 1) for j in range(e2 + 1)] \
            if e1 >= 0 and e2 >= 0 else []
        self.image_dim = len(image)
        identity = [[K.one if r == c else K.zero for c in range(self.ambient_dim)] for r in range(self.ambient_dim)]
        # Columns are the image generators followed by every unit vector
        stacked = [[col[row] for col in image] + identity[row] for row in range(self.ambient_dim)]
        _, pivots = linalg.rref(stacked, self.image_dim + self.ambient_dim, K)
        if list(pivots[:self.image_dim]) != list(range(self.image_dim)):
            raise InternalConsistencyError("multiplication by h is not injective on forms")
        self.complement = tuple(p - self.image_dim for p in pivots[self.image_dim:])
        change = [[col[row] for col in image] + [identity[row][m] for m in self.complement]
                  for row in range(self.ambient_dim)]
        self._inverse = linalg.inverse(change, K)

    @property
    def dimension(self) -> int:
        return len(self.complement)

    def coordinates(self, form: BiForm) -> List[Any]:
        if form.bidegree != self.bidegree:
            raise DegreeError(f"expected bidegree {self.bidegree}, got {form.bidegree}")
        K = self.h.domain
        vector = form.flat()
        out = []
        for row in self._inverse[self.image_dim:]:
            total = K.zero
            for a, b in zip(row, vector):
                if a and b:
                    total += a * b
            out.append(total)
        return out

    def lift(self, coordinates: List[Any]) -> BiForm:
        K = self.h.domain
        values = [K.zero] * self.ambient_dim
        for m, c in zip(self.complement, coordinates):
            values[m] = c
        return BiForm.from_flat(self.h.field, self.bidegree[0], self.bidegree[1], values)

    def complement_labels(self) -> List[str]:
        a, n = self.bidegree
        return [format_monomial(m // (n + 1), m % (n + 1), a, n) for m in self.complement]


@dataclass(frozen=True)
class QuotientClass:
    space: QuotientSpace
    coordinates: Tuple[Any, ...]
    representative: BiForm

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)


# --------------------------------------------------------------------------
# Sections on the curve
# --------------------------------------------------------------------------
def _oriented(h: BiForm, a: int, b: int) -> Tuple[BiForm, int, int, bool]:
    """Swap the factors when the source group of the restriction sequence carries x-poles."""
    k1, k2 = h.bidegree
    if a - k1 <= -2 and b - k2 >= 0:
        return h.transpose(), b, a, True
    return h, a, b, False


@dataclass
class H0Basis:
    """Basis of H^0(C, O_C(a, b)): restricted forms plus chart sections from the Cech kernel."""
    bundle: Tuple[int, int]
    transposed: bool
    forms: List[BiForm]
    sections: List[ChartSection]

    @property
    def dimension(self) -> int:
        return len(self.forms) + len(self.sections)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bundle": list(self.bundle),
            "transposed": self.transposed,
            "forms": [f.to_text() for f in self.forms],
            "sections": [s.to_dict() for s in self.sections],
        }


def h0_curve(ctx: CurveContext, a: int, b: int) -> Tuple[int, H0Basis]:
    """h^0(C, O_C(a, b)) with an explicit basis."""
    ctx.require_smooth()
    h, a2, b2, transposed = _oriented(ctx.h, a, b)
    k1, k2 = h.bidegree
    forms: List[BiForm] = []
    if a2 >= 0 and b2 >= 0:
        space = QuotientSpace(h, a2, b2)
        forms = [space.lift([h.field.one if i == m else h.field.zero for i in range(space.dimension)])
                 for m in range(space.dimension)]
        if transposed:
            forms = [f.transpose() for f in forms]
    sa, sb = a2 - k1, b2 - k2
    if sa <= -2 and sb >= 0:
        raise DegenerateRange(f"source H^1(O({sa}, {sb})) keeps x-poles after orientation")
    cech = mult_by_h_matrix(h, sa, sb)
    sections = [_section_from_kernel(h, cech.source, v) for v in cech.kernel()] if cech.source.size else []
    basis = H0Basis((a, b), transposed, forms, sections)
    log.debug("h0 of O_C(%d, %d): %d forms + %d chart sections", a, b, len(forms), len(sections))
    return basis.dimension, basis


def h0_dim(ctx: CurveContext, a: int, b: int) -> int:
    """Dimension only; same orientation rule as h0_curve."""
    ctx.require_smooth()
    h, a2, b2, _ = _oriented(ctx.h, a, b)
    k1, k2 = h.bidegree
    dimension = h0_quadric(a2, b2) - h0_quadric(a2 - k1, b2 - k2)
    return dimension + mult_by_h_matrix(h, a2 - k1, b2 - k2).kernel_dimension()


def kernel_sections(ctx: CurveContext, n: int) -> List[ChartSection]:
    """Chart representatives for a basis of H^0(C, O_C(n, -n)); empty when n < k."""
    if n < 1:
        raise DegreeError(f"kernel sections need n >= 1, got {n}")
    k = ctx.k
    cech = mult_by_h_matrix(ctx.h, n - k, -n - k)
    if not cech.source.size:
        return []
    return [_section_from_kernel(ctx.h, cech.source, v) for v in cech.kernel()]


def section_times_form(section: ChartSection, c: BiForm, space: Optional[QuotientSpace] = None) -> QuotientClass:
    """
    Class of y1^N * part_a * c in Forms(a, N) / h, for c of bidegree (0, n)
    where the section lives in O_C(a, -n) and N is the clearing exponent.
    """
    a, b = section.bidegree
    if c.bidegree[0] != 0 or c.bidegree[1] + b != 0:
        raise DegreeError(f"form of bidegree {c.bidegree} does not cancel O({a}, {b})")
    n_clear = section.clearing_exponent
    representative = section.part_a.times_form(c).clear(n_clear)
    if space is None:
        space = QuotientSpace(section.h, a, n_clear)
    return QuotientClass(space, tuple(space.coordinates(representative)), representative)
