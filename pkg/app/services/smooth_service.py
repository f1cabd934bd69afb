"""
Smoothness certification for curves C = {h = 0} on P1 x P1.

P1 x P1 is covered by four disjoint strata, one per affine chart:

    chart 0  x1 != 0, y1 != 0      the open chart (u, v) = (x0/x1, y0/y1)
    chart 1  x1 != 0, y1 == 0      the line v = 0 in (x0/x1, y1/y0)
    chart 2  x1 == 0, y1 != 0      the line u = 0 in (x1/x0, y0/y1)
    chart 3  x1 == 0, y1 == 0      the single point ([1:0], [1:0])

The open chart is handled by elimination: a repeated-factor gcd test, then
resultants in v of the (possibly sheared) equation against its partials and
a fibre-wise gcd over K[u]/(q) for every irreducible factor q of their gcd.
The boundary strata reduce to univariate gcds. Every singular point is
reported exactly once, either as a K-rational point or as a triangular
system whose solutions over the algebraic closure are the singular points.
"""
from __future__ import annotations

import hashlib
import logging
import random
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Poly, symbols

from ..config import settings
from ..errors import DegenerateInput, DegreeError, NotSmooth
from ..models.biform import VARIABLES, BiForm, TorusAuto
from ..models.field import FieldSpec

__all__ = [
    "CHART_COORDINATES",
    "WitnessKind",
    "SingularWitness",
    "SmoothVerdict",
    "CurveContext",
    "chart_polynomial",
    "singular_locus",
    "build_context",
]

log = logging.getLogger(__name__)

U, V = symbols("u v")

CHART_COORDINATES = {
    0: ("x0/x1", "y0/y1"),
    1: ("x0/x1", "y1/y0"),
    2: ("x1/x0", "y0/y1"),
    3: ("x1/x0", "y1/y0"),
}

PolyDict = Dict[Tuple[int, int], Any]
Point = Tuple[Tuple[Any, Any], Tuple[Any, Any]]


class WitnessKind(str, Enum):
    POINT = "point"
    TRIANGULAR = "triangular"
    COMPONENT = "component"


def chart_polynomial(h: BiForm, chart: int) -> PolyDict:
    """h dehomogenised on ``chart``, as {(u exponent, v exponent): coefficient}."""
    d1, d2 = h.bidegree
    out: PolyDict = {}
    for (i, j), c in h.terms():
        a = i if chart in (0, 1) else d1 - i
        b = j if chart in (0, 2) else d2 - j
        out[(a, b)] = c
    return out


def _projective_point(chart: int, u: Any, v: Any, field: FieldSpec) -> Point:
    x = (u, field.one) if chart in (0, 1) else (field.one, u)
    y = (v, field.one) if chart in (0, 2) else (field.one, v)
    return x, y


def _format_chart_poly(poly: PolyDict, field: FieldSpec) -> str:
    parts: List[str] = []
    for (a, b) in sorted(poly, key=lambda key: (-(key[0] + key[1]), -key[0])):
        c = poly[(a, b)]
        if not c:
            continue
        monomial = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in (("u", a), ("v", b)) if e > 0
        )
        coefficient = field.format_element(c)
        if field.is_compound(c):
            coefficient = f"({coefficient})"
        if not monomial:
            parts.append(coefficient)
        elif coefficient == "1":
            parts.append(monomial)
        elif coefficient == "-1":
            parts.append(f"-{monomial}")
        else:
            parts.append(f"{coefficient}*{monomial}")
    if not parts:
        return "0"
    text = parts[0]
    for part in parts[1:]:
        text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return text


# --------------------------------------------------------------------------
# Polynomial helpers
# --------------------------------------------------------------------------
def _uv_poly(poly: PolyDict, field: FieldSpec) -> Poly:
    return Poly.from_dict(dict(poly) or {(0, 0): field.zero}, U, V, domain=field.domain)


def _vu_poly(poly: PolyDict, field: FieldSpec) -> Poly:
    """Same polynomial with v as the leading generator, so resultants eliminate v."""
    swapped = {(b, a): c for (a, b), c in poly.items()}
    return Poly.from_dict(swapped or {(0, 0): field.zero}, V, U, domain=field.domain)


def _univariate(coeffs: Dict[int, Any], gen: Any, field: FieldSpec) -> Poly:
    return Poly.from_dict({(e,): c for e, c in coeffs.items()} or {(0,): field.zero}, gen, domain=field.domain)


def _as_dict(poly: Poly, swap: bool = False) -> PolyDict:
    out: PolyDict = {}
    for monom, c in poly.rep.to_dict().items():
        if len(monom) == 1:
            key = (monom[0], 0) if poly.gens[0] == U else (0, monom[0])
        else:
            key = (monom[1], monom[0]) if swap else (monom[0], monom[1])
        out[key] = c
    return out


def _shear(poly: PolyDict, t: Any, field: FieldSpec) -> PolyDict:
    """p(u, v + t u)."""
    if not t:
        return dict(poly)
    out: PolyDict = {}
    for (a, b), c in poly.items():
        for e in range(b + 1):
            key = (a + b - e, e)
            out[key] = out.get(key, field.zero) + field.from_int(comb(b, e)) * t**(b - e) * c
    return {key: c for key, c in out.items() if c}


def _linear_root(poly: Poly) -> Any:
    c1, c0 = poly.rep.to_list()
    return -c0 / c1


# --------------------------------------------------------------------------
# Arithmetic in L[v] with L = K[u]/(q)
# --------------------------------------------------------------------------
def _strip(coeffs: List[Poly]) -> List[Poly]:
    index = 0
    while index < len(coeffs) and coeffs[index].is_zero:
        index += 1
    return coeffs[index:]


def _specialise(poly: Poly, q: Poly, field: FieldSpec) -> List[Poly]:
    """Coefficients in v (highest first) of a (v, u) polynomial, each reduced modulo q(u)."""
    rows: Dict[int, Dict[int, Any]] = {}
    for (b, a), c in poly.rep.to_dict().items():
        rows.setdefault(b, {})[a] = c
    if not rows:
        return []
    top = max(rows)
    return _strip([_univariate(rows.get(b, {}), U, field).rem(q) for b in range(top, -1, -1)])


def _fibre_rem(a: List[Poly], b: List[Poly], q: Poly) -> List[Poly]:
    a = list(a)
    lead_inverse = b[0].invert(q)
    while a and len(a) >= len(b):
        factor = (a[0] * lead_inverse).rem(q)
        for index in range(len(b)):
            a[index] = (a[index] - factor * b[index]).rem(q)
        a = _strip(a[1:])
    return a


def _fibre_gcd(polys: Sequence[List[Poly]], q: Poly) -> List[Poly]:
    g: List[Poly] = []
    for p in polys:
        a, b = g, p
        while b:
            a, b = b, _fibre_rem(a, b, q)
        g = a
    if not g:
        return g
    lead_inverse = g[0].invert(q)
    return [(c * lead_inverse).rem(q) for c in g]


@dataclass(frozen=True, eq=False)
class SingularWitness:
    """
    A certified singular point (or Galois orbit of points) of C.

    ``equations`` are chart-local polynomials in (u, v): a point witness
    holds (u - u0, v - v0), a triangular witness holds (q(u), d(u, v)) and a
    component witness holds a single polynomial dividing h and both partials.
    """
    kind: WitnessKind
    chart: int
    field: FieldSpec
    equations: Tuple[PolyDict, ...]
    point: Optional[Point] = None

    def point_text(self) -> Optional[str]:
        if self.point is None:
            return None
        fmt = self.field.format_element
        (x0, x1), (y0, y1) = self.point
        return f"([{fmt(x0)}:{fmt(x1)}], [{fmt(y0)}:{fmt(y1)}])"

    def equation_texts(self) -> List[str]:
        return [_format_chart_poly(eq, self.field) for eq in self.equations]

    def verify(self, h: BiForm) -> bool:
        """Re-check that h and its partials vanish on the witness."""
        if self.kind is WitnessKind.POINT and self.point is not None:
            (x0, x1), (y0, y1) = self.point
            forms = [h] + [h.partial(name) for name in VARIABLES]
            return all(not form.evaluate(x0, x1, y0, y1) for form in forms)
        local = chart_polynomial(h, self.chart)
        f = _uv_poly(local, self.field)
        derived = [f, f.diff(U), f.diff(V)]
        if self.kind is WitnessKind.COMPONENT:
            divisor = _uv_poly(self.equations[0], self.field)
            return all(p.rem(divisor).is_zero for p in derived)
        q = _univariate({a: c for (a, _), c in self.equations[0].items()}, U, self.field)
        d = _specialise(_vu_poly(self.equations[1], self.field), q, self.field)
        if not d:
            return False
        checks = [_specialise(_vu_poly(_as_dict(p), self.field), q, self.field) for p in derived]
        return all(not _fibre_rem(c, d, q) for c in checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "chart": self.chart,
            "coordinates": list(CHART_COORDINATES[self.chart]),
            "point": self.point_text(),
            "equations": self.equation_texts(),
        }


@dataclass(frozen=True)
class SmoothVerdict:
    witnesses: Tuple[SingularWitness, ...]
    shear: Optional[str] = None

    @property
    def smooth(self) -> bool:
        return not self.witnesses

    def points(self) -> List[Point]:
        return [w.point for w in self.witnesses if w.point is not None]


# --------------------------------------------------------------------------
# Open chart
# --------------------------------------------------------------------------
def _point_witness(chart: int, u: Any, v: Any, field: FieldSpec) -> SingularWitness:
    equations = ({(1, 0): field.one, (0, 0): -u}, {(0, 1): field.one, (0, 0): -v})
    return SingularWitness(WitnessKind.POINT, chart, field, equations, _projective_point(chart, u, v, field))


def _fibre_witnesses(q: Poly, fibre: List[Poly], t: Any, field: FieldSpec) -> List[SingularWitness]:
    q_dict = _as_dict(q)
    if q.degree() == 1:
        u0 = _linear_root(q)
        values = {len(fibre) - 1 - index: (c.rep.to_list() or [field.zero])[-1] for index, c in enumerate(fibre)}
        witnesses: List[SingularWitness] = []
        for r, _ in _univariate(values, V, field).factor_list()[1]:
            if r.degree() == 1:
                witnesses.append(_point_witness(0, u0, _linear_root(r) + t * u0, field))
            else:
                unsheared = _shear(_as_dict(r), -t, field)
                witnesses.append(SingularWitness(WitnessKind.TRIANGULAR, 0, field, (q_dict, unsheared)))
        return witnesses
    sheared: PolyDict = {}
    for index, c in enumerate(fibre):
        power = len(fibre) - 1 - index
        for (a,), coefficient in c.rep.to_dict().items():
            sheared[(a, power)] = coefficient
    return [SingularWitness(WitnessKind.TRIANGULAR, 0, field, (q_dict, _shear(sheared, -t, field)))]


def _shear_parameter(field: FieldSpec, rng: random.Random) -> Any:
    if field.is_prime_field:
        return field.from_int(rng.randrange(1, field.order))
    return field.from_int(rng.randint(1, 1000))


def _open_chart(h: BiForm, rng: random.Random, retries: int) -> Tuple[List[SingularWitness], Optional[Any]]:
    field = h.field
    local = chart_polynomial(h, 0)
    f = _uv_poly(local, field)
    common = f.gcd(f.diff(U)).gcd(f.diff(V))
    if not common.is_ground:
        return [SingularWitness(WitnessKind.COMPONENT, 0, field, (_as_dict(common),))], None
    if f.degree(U) <= 0 or f.degree(V) <= 0:
        # A squarefree polynomial in one variable has no singular points
        return [], None
    for attempt in range(retries + 1):
        t = field.zero if attempt == 0 else _shear_parameter(field, rng)
        g = _vu_poly(_shear(local, t, field), field)
        gu, gv = g.diff(U), g.diff(V)
        r1, r2 = g.resultant(gu), g.resultant(gv)
        if r1.is_zero or r2.is_zero:
            log.debug("degenerate elimination on attempt %d, shearing", attempt)
            continue
        base = r1.gcd(r2)
        witnesses: List[SingularWitness] = []
        if base.is_ground:
            return witnesses, t
        for q, _ in base.factor_list()[1]:
            if q.is_ground:
                continue
            fibre = _fibre_gcd([_specialise(p, q, field) for p in (g, gu, gv)], q)
            if not fibre:
                witnesses.append(SingularWitness(WitnessKind.COMPONENT, 0, field, (_as_dict(q),)))
            elif len(fibre) > 1:
                witnesses.extend(_fibre_witnesses(q, fibre, t, field))
        return witnesses, t
    raise DegenerateInput(f"elimination stayed degenerate after {retries} shears", {"form": h.to_text()})


# --------------------------------------------------------------------------
# Boundary strata
# --------------------------------------------------------------------------
def _boundary_line(h: BiForm, chart: int) -> List[SingularWitness]:
    """Singular points on v = 0 of chart 1 (moving in u) or u = 0 of chart 2 (moving in v)."""
    field = h.field
    local = chart_polynomial(h, chart)
    moving, fixed_axis = (0, 1) if chart == 1 else (1, 0)
    gen = U if chart == 1 else V
    restricted = {key[moving]: c for key, c in local.items() if key[fixed_axis] == 0}
    normal = {key[moving]: c for key, c in local.items() if key[fixed_axis] == 1}
    p0 = _univariate(restricted, gen, field)
    g = p0.gcd(p0.diff(gen)).gcd(_univariate(normal, gen, field))
    line = {(0, 1) if chart == 1 else (1, 0): field.one}
    if g.is_zero:
        return [SingularWitness(WitnessKind.COMPONENT, chart, field, (line,))]
    if g.is_ground:
        return []
    witnesses: List[SingularWitness] = []
    for r, _ in g.factor_list()[1]:
        if r.degree() == 1:
            root = _linear_root(r)
            u, v = (root, field.zero) if chart == 1 else (field.zero, root)
            witnesses.append(_point_witness(chart, u, v, field))
        else:
            coefficients = {e: c for (e,), c in r.rep.to_dict().items()}
            if chart == 1:
                equations = ({(e, 0): c for e, c in coefficients.items()}, line)
            else:
                equations = (line, {(0, e): c for e, c in coefficients.items()})
            witnesses.append(SingularWitness(WitnessKind.TRIANGULAR, chart, field, equations))
    return witnesses


def _corner(h: BiForm) -> List[SingularWitness]:
    d1, d2 = h.bidegree
    field = h.field
    grid = h.coeffs
    value = grid[d1][d2]
    du = grid[d1 - 1][d2] if d1 > 0 else field.zero
    dv = grid[d1][d2 - 1] if d2 > 0 else field.zero
    if value or du or dv:
        return []
    return [_point_witness(3, field.zero, field.zero, field)]


def _seed_for(h: BiForm) -> int:
    digest = hashlib.sha256(f"{h.field}|{h.bidegree}|{h.to_text()}".encode()).hexdigest()
    return int(digest[:16], 16)


def singular_locus(h: BiForm, retries: Optional[int] = None) -> SmoothVerdict:
    """Every singular point of {h = 0}, chart 0 first, then the boundary strata."""
    if h.is_zero:
        raise DegenerateInput("the zero form does not define a curve")
    d1, d2 = h.bidegree
    p = h.field.characteristic
    if p and p <= max(d1, d2):
        raise DegenerateInput(f"characteristic {p} must exceed the bidegree {h.bidegree}", {"p": p})
    rng = random.Random(_seed_for(h))
    witnesses, shear = _open_chart(h, rng, settings.shear_retries if retries is None else retries)
    witnesses += _boundary_line(h, 1)
    witnesses += _boundary_line(h, 2)
    witnesses += _corner(h)
    log.info("singular locus of bidegree %s form over %s: %d witness(es)", h.bidegree, h.field, len(witnesses))
    shear_text = h.field.format_element(shear) if shear is not None else None
    return SmoothVerdict(tuple(witnesses), shear_text)


@dataclass(frozen=True)
class CurveContext:
    """A curve of bidegree (k, k) together with its smoothness verdict."""
    h: BiForm
    verdict: SmoothVerdict
    automorphism: Optional[TorusAuto] = None

    @property
    def k(self) -> int:
        return self.h.bidegree[0]

    @property
    def genus(self) -> int:
        return (self.k - 1)**2

    @property
    def field(self) -> FieldSpec:
        return self.h.field

    @property
    def is_smooth(self) -> bool:
        return self.verdict.smooth

    def require_smooth(self) -> None:
        if not self.verdict.smooth:
            raise NotSmooth(
                f"curve is singular ({len(self.verdict.witnesses)} witness(es))",
                {"witnesses": [w.to_dict() for w in self.verdict.witnesses]},
            )


def build_context(h: BiForm, automorphism: Optional[TorusAuto] = None) -> CurveContext:
    d1, d2 = h.bidegree
    if d1 != d2 or d1 < 1:
        raise DegreeError(f"expected a form of bidegree (k, k) with k >= 1, got {h.bidegree}")
    return CurveContext(h, singular_locus(h), automorphism)
