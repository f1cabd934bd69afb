"""
Bihomogeneous forms on P1 x P1.

A form of bidegree (d1, d2) is stored as its (d1+1) x (d2+1) coefficient
grid: entry (i, j) is the coefficient of x0^i x1^(d1-i) y0^j y1^(d2-j).
Coefficients are raw sympy domain elements of ``field.domain``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .. import linalg
from ..errors import DegreeError, FieldMismatch
from .field import FieldKind, FieldSpec, Scalar, reduce_mod_p

__all__ = [
    "VARIABLES",
    "BiForm",
    "TorusAuto",
    "biform_mul",
    "divide_exact",
    "apply_auto",
    "change_coordinates",
    "format_monomial",
]

VARIABLES = ("x0", "x1", "y0", "y1")

Grid = Tuple[Tuple[Any, ...], ...]


def format_monomial(i: int, j: int, d1: int, d2: int) -> str:
    factors = []
    for name, exponent in (("x0", i), ("x1", d1 - i), ("y0", j), ("y1", d2 - j)):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return "*".join(factors) or "1"


@dataclass(frozen=True)
class BiForm:
    field: FieldSpec
    bidegree: Tuple[int, int]
    coeffs: Grid

    def __post_init__(self) -> None:
        d1, d2 = self.bidegree
        if d1 < 0 or d2 < 0:
            raise DegreeError(f"bidegree must be non-negative, got {self.bidegree}")
        if len(self.coeffs) != d1 + 1 or any(len(row) != d2 + 1 for row in self.coeffs):
            raise DegreeError(f"coefficient grid does not match bidegree {self.bidegree}")

    # ----------------------------------------------------------------------
    # Constructors
    # ----------------------------------------------------------------------
    @classmethod
    def from_grid(cls, field: FieldSpec, grid: Sequence[Sequence[Any]]) -> "BiForm":
        rows = tuple(tuple(row) for row in grid)
        return cls(field, (len(rows) - 1, len(rows[0]) - 1), rows)

    @classmethod
    def zero(cls, field: FieldSpec, d1: int, d2: int) -> "BiForm":
        return cls.from_terms(field, d1, d2, {})

    @classmethod
    def monomial(cls, field: FieldSpec, i: int, j: int, d1: int, d2: int, coefficient: Any = None) -> "BiForm":
        value = field.one if coefficient is None else coefficient
        return cls.from_terms(field, d1, d2, {(i, j): value})

    @classmethod
    def from_terms(cls, field: FieldSpec, d1: int, d2: int, terms: Dict[Tuple[int, int], Any]) -> "BiForm":
        grid = [[field.zero] * (d2 + 1) for _ in range(d1 + 1)]
        for (i, j), c in terms.items():
            if not (0 <= i <= d1 and 0 <= j <= d2):
                raise DegreeError(f"monomial ({i}, {j}) outside bidegree ({d1}, {d2})")
            grid[i][j] = grid[i][j] + c
        return cls(field, (d1, d2), tuple(tuple(row) for row in grid))

    @classmethod
    def from_flat(cls, field: FieldSpec, d1: int, d2: int, values: Sequence[Any]) -> "BiForm":
        width = d2 + 1
        return cls(field, (d1, d2), tuple(tuple(values[i * width:(i + 1) * width]) for i in range(d1 + 1)))

    @classmethod
    def from_factors(cls, field: FieldSpec, u: Sequence[Any], v: Sequence[Any]) -> "BiForm":
        """Product of the x-form with coefficients ``u`` and the y-form with coefficients ``v``."""
        return cls(field, (len(u) - 1, len(v) - 1), tuple(tuple(a * b for b in v) for a in u))

    # ----------------------------------------------------------------------
    # Access
    # ----------------------------------------------------------------------
    @property
    def domain(self) -> Any:
        return self.field.domain

    @property
    def is_zero(self) -> bool:
        return not any(c for row in self.coeffs for c in row)

    def coefficient(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.coeffs[i][j])

    def terms(self) -> Iterator[Tuple[Tuple[int, int], Any]]:
        """Non-zero coefficients, in the order x0 degree descending, then y0 degree descending."""
        d1, d2 = self.bidegree
        for i in range(d1, -1, -1):
            for j in range(d2, -1, -1):
                c = self.coeffs[i][j]
                if c:
                    yield (i, j), c

    def flat(self) -> List[Any]:
        return [c for row in self.coeffs for c in row]

    def _same(self, other: "BiForm") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"cannot combine forms over {self.field} and {other.field}")
        if self.bidegree != other.bidegree:
            raise DegreeError(f"bidegrees differ: {self.bidegree} vs {other.bidegree}")

    # ----------------------------------------------------------------------
    # Arithmetic
    # ----------------------------------------------------------------------
    def __add__(self, other: "BiForm") -> "BiForm":
        self._same(other)
        return BiForm(self.field, self.bidegree,
                      tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "BiForm") -> "BiForm":
        return self + (-other)

    def __neg__(self) -> "BiForm":
        return BiForm(self.field, self.bidegree, tuple(tuple(-a for a in row) for row in self.coeffs))

    def __mul__(self, other: "BiForm") -> "BiForm":
        return biform_mul(self, other)

    def scale(self, c: Any) -> "BiForm":
        value = c.value if isinstance(c, Scalar) else c
        return BiForm(self.field, self.bidegree, tuple(tuple(a * value for a in row) for row in self.coeffs))

    def shifted(self, i0: int, j0: int, e1: int, e2: int) -> "BiForm":
        """This form times the monomial x0^i0 x1^(e1-i0) y0^j0 y1^(e2-j0)."""
        d1, d2 = self.bidegree
        terms = {(i + i0, j + j0): c for (i, j), c in self.terms()}
        return BiForm.from_terms(self.field, d1 + e1, d2 + e2, terms)

    def partial(self, variable: str) -> "BiForm":
        """Formal derivative; a degree already at zero stays at zero."""
        d1, d2 = self.bidegree
        K = self.domain
        terms: Dict[Tuple[int, int], Any] = {}
        if variable == "x0":
            shape = (max(d1 - 1, 0), d2)
            items = [((i - 1, j), K(i) * c) for (i, j), c in self.terms() if i > 0]
        elif variable == "x1":
            shape = (max(d1 - 1, 0), d2)
            items = [((i, j), K(d1 - i) * c) for (i, j), c in self.terms() if d1 - i > 0]
        elif variable == "y0":
            shape = (d1, max(d2 - 1, 0))
            items = [((i, j - 1), K(j) * c) for (i, j), c in self.terms() if j > 0]
        elif variable == "y1":
            shape = (d1, max(d2 - 1, 0))
            items = [((i, j), K(d2 - j) * c) for (i, j), c in self.terms() if d2 - j > 0]
        else:
            raise ValueError(f"unknown variable '{variable}'")
        for key, value in items:
            if value:
                terms[key] = value
        return BiForm.from_terms(self.field, shape[0], shape[1], terms)

    def evaluate(self, x0: Any, x1: Any, y0: Any, y1: Any) -> Any:
        d1, d2 = self.bidegree
        total = self.field.zero
        for (i, j), c in self.terms():
            total += c * x0**i * x1**(d1 - i) * y0**j * y1**(d2 - j)
        return total

    def transpose(self) -> "BiForm":
        """Swap the two P1 factors."""
        d1, d2 = self.bidegree
        return BiForm(self.field, (d2, d1), tuple(tuple(self.coeffs[i][j] for i in range(d1 + 1))
                                                  for j in range(d2 + 1)))

    def reduce_mod_p(self, p: int) -> "BiForm":
        if self.field.kind is not FieldKind.RATIONALS:
            raise FieldMismatch(f"only rational forms reduce modulo p, got {self.field}")
        target = FieldSpec.prime_field(p)
        grid = [[reduce_mod_p(Scalar(self.field, c), p).value for c in row] for row in self.coeffs]
        return BiForm(target, self.bidegree, tuple(tuple(row) for row in grid))

    # ----------------------------------------------------------------------
    # Serialisation
    # ----------------------------------------------------------------------
    def to_text(self) -> str:
        d1, d2 = self.bidegree
        parts: List[str] = []
        for (i, j), c in self.terms():
            monomial = format_monomial(i, j, d1, d2)
            coefficient = self.field.format_element(c)
            if self.field.is_compound(c):
                term = f"({coefficient})" if monomial == "1" else f"({coefficient})*{monomial}"
            elif monomial == "1":
                term = coefficient
            elif coefficient == "1":
                term = monomial
            elif coefficient == "-1":
                term = f"-{monomial}"
            else:
                term = f"{coefficient}*{monomial}"
            parts.append(term)
        if not parts:
            return "0"
        text = parts[0]
        for part in parts[1:]:
            text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return text

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": str(self.field),
            "bidegree": list(self.bidegree),
            "coeffs": [self.field.format_element(c) for c in self.flat()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BiForm":
        from ..api.parser import parse_scalar
        field = FieldSpec.parse(data["field"])
        d1, d2 = data["bidegree"]
        values = [parse_scalar(text, field).value for text in data["coeffs"]]
        if len(values) != (d1 + 1) * (d2 + 1):
            raise DegreeError(f"expected {(d1 + 1) * (d2 + 1)} coefficients, got {len(values)}")
        return cls.from_flat(field, d1, d2, values)

    def __str__(self) -> str:
        return self.to_text()


def biform_mul(a: BiForm, b: BiForm) -> BiForm:
    if a.field != b.field:
        raise FieldMismatch(f"cannot multiply forms over {a.field} and {b.field}")
    d1, d2 = a.bidegree[0] + b.bidegree[0], a.bidegree[1] + b.bidegree[1]
    grid = [[a.field.zero] * (d2 + 1) for _ in range(d1 + 1)]
    right = list(b.terms())
    for (i, j), c in a.terms():
        for (i2, j2), c2 in right:
            grid[i + i2][j + j2] += c * c2
    return BiForm(a.field, (d1, d2), tuple(tuple(row) for row in grid))


def divide_exact(f: BiForm, h: BiForm) -> Optional[BiForm]:
    """
    The form g with h * g = f, or None when h does not divide f.

    Solved as a linear system in the coefficients of g, so no polynomial
    division order is involved.
    """
    if f.field != h.field:
        raise FieldMismatch(f"cannot divide a form over {f.field} by one over {h.field}")
    e1, e2 = f.bidegree[0] - h.bidegree[0], f.bidegree[1] - h.bidegree[1]
    if e1 < 0 or e2 < 0:
        raise DegreeError(f"bidegree {f.bidegree} is below divisor bidegree {h.bidegree}")
    if h.is_zero:
        raise DegreeError("division by the zero form")
    if f.is_zero:
        return BiForm.zero(f.field, e1, e2)
    columns = [h.shifted(i, j, e1, e2).flat() for i in range(e1 + 1) for j in range(e2 + 1)]
    solution = linalg.solve(columns, f.flat(), f.domain)
    if solution is None:
        return None
    return BiForm.from_flat(f.field, e1, e2, solution)


@dataclass(frozen=True)
class TorusAuto:
    """
    Diagonal automorphism x0 -> z^a0 x0, x1 -> z^a1 x1, y0 -> z^b0 y0, y1 -> z^b1 y1
    with z a primitive m-th root of unity.
    """
    weights: Tuple[int, int, int, int]
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DegreeError(f"root of unity order must be positive, got {self.m}")

    def weight(self, i: int, j: int, d1: int, d2: int) -> int:
        a0, a1, b0, b1 = self.weights
        return (a0 * i + a1 * (d1 - i) + b0 * j + b1 * (d2 - j)) % self.m

    def character(self, h: BiForm) -> Optional[int]:
        """e with h o sigma = z^e h, or None when h is not an eigenform."""
        d1, d2 = h.bidegree
        seen = {self.weight(i, j, d1, d2) for (i, j), _ in h.terms()}
        if not seen:
            return 0
        return seen.pop() if len(seen) == 1 else None

    def to_dict(self) -> Dict[str, Any]:
        return {"weights": list(self.weights), "m": self.m}


def apply_auto(h: BiForm, sigma: TorusAuto) -> Tuple[BiForm, Optional[int]]:
    zeta = h.field.root_of_unity(sigma.m)
    d1, d2 = h.bidegree
    terms = {(i, j): c * zeta**sigma.weight(i, j, d1, d2) for (i, j), c in h.terms()}
    return BiForm.from_terms(h.field, d1, d2, terms), sigma.character(h)


def _linear_power(field: FieldSpec, a: Any, b: Any, exponent: int) -> List[Any]:
    """Coefficients of (a*t0 + b*t1)^exponent, indexed by the t0 degree."""
    return [field.from_int(comb(exponent, r)) * a**r * b**(exponent - r) for r in range(exponent + 1)]


def change_coordinates(h: BiForm, x_matrix: Sequence[Sequence[Any]], y_matrix: Sequence[Sequence[Any]]) -> BiForm:
    """
    Substitute x0 -> a x0 + b x1, x1 -> c x0 + d x1 for ``x_matrix`` = [[a, b], [c, d]],
    and likewise in y.
    """
    d1, d2 = h.bidegree
    (a, b), (c, d) = x_matrix
    (e, f), (g, k) = y_matrix
    field = h.field
    result = BiForm.zero(field, d1, d2)
    for (i, j), coefficient in h.terms():
        x_part = BiForm.from_factors(field, _linear_power(field, a, b, i), [field.one]) * \
            BiForm.from_factors(field, _linear_power(field, c, d, d1 - i), [field.one])
        y_part = BiForm.from_factors(field, [field.one], _linear_power(field, e, f, j)) * \
            BiForm.from_factors(field, [field.one], _linear_power(field, g, k, d2 - j))
        result = result + (x_part * y_part).scale(coefficient)
    return result
