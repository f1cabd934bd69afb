"""
Exact scalar fields.

Three kinds of coefficient field are supported: the rationals, cyclotomic
extensions Q(zeta_m) and prime fields F_p. Arithmetic is delegated to the
sympy polys domains (``QQ``, ``QQ.cyclotomic_field(m)``, ``GF(p)``); this
module wraps them with a small value type that knows how to print, parse and
compare its elements and that refuses to mix fields silently.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, List

from sympy import Symbol, cyclotomic_poly, isprime, totient
from sympy.polys.domains import GF, QQ
from sympy.polys.domains.domain import Domain

from ..errors import DivisionByZero, FieldMismatch, InvalidPrime

__all__ = [
    "FieldKind",
    "FieldSpec",
    "Scalar",
    "scalar_arith",
    "scalar_invert",
    "reduce_mod_p",
]

_CYCLOTOMIC_RE = re.compile(r"^Q\(z(\d+)\)$")
_PRIME_RE = re.compile(r"^(?:Fp:|F|GF\()(\d+)\)?$")


class FieldKind(str, Enum):
    RATIONALS = "rationals"
    CYCLOTOMIC = "cyclotomic"
    PRIME = "prime"


@lru_cache(maxsize=None)
def _domain_for(kind: FieldKind, order: int) -> Domain:
    if kind is FieldKind.CYCLOTOMIC:
        return QQ.cyclotomic_field(order)
    if kind is FieldKind.PRIME:
        return GF(order)
    return QQ


@dataclass(frozen=True)
class FieldSpec:
    """
    Identity of a coefficient field.

    ``order`` is m for Q(zeta_m) and p for F_p; it is 0 for the rationals.
    Two field specs are equal exactly when they describe the same field, so
    equality is the check used everywhere operands meet.
    """
    kind: FieldKind
    order: int = 0

    def __post_init__(self) -> None:
        if self.kind is FieldKind.CYCLOTOMIC and self.order < 3:
            raise FieldMismatch(f"cyclotomic field needs m >= 3, got {self.order}")
        if self.kind is FieldKind.PRIME and not isprime(self.order):
            raise InvalidPrime(f"{self.order} is not prime", {"p": self.order})
        if self.kind is FieldKind.RATIONALS and self.order != 0:
            raise FieldMismatch("the rationals carry no order")

    # ----------------------------------------------------------------------
    # Constructors
    # ----------------------------------------------------------------------
    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @classmethod
    def cyclotomic(cls, m: int) -> "FieldSpec":
        return cls(FieldKind.CYCLOTOMIC, m)

    @classmethod
    def prime_field(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME, p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Accepts ``Q``, ``Q(z5)``, ``Fp:101``, ``F101`` and ``GF(101)``."""
        raw = text.strip().replace(" ", "")
        if raw in ("Q", "QQ"):
            return cls.rationals()
        match = _CYCLOTOMIC_RE.match(raw)
        if match:
            return cls.cyclotomic(int(match.group(1)))
        match = _PRIME_RE.match(raw)
        if match:
            return cls.prime_field(int(match.group(1)))
        raise FieldMismatch(f"unrecognised field '{text}'", {"field": text})

    def __str__(self) -> str:
        if self.kind is FieldKind.CYCLOTOMIC:
            return f"Q(z{self.order})"
        if self.kind is FieldKind.PRIME:
            return f"Fp:{self.order}"
        return "Q"

    # ----------------------------------------------------------------------
    # Properties
    # ----------------------------------------------------------------------
    @property
    def domain(self) -> Domain:
        return _domain_for(self.kind, self.order)

    @property
    def characteristic(self) -> int:
        return self.order if self.kind is FieldKind.PRIME else 0

    @property
    def degree(self) -> int:
        """Dimension over the prime field: phi(m) for Q(zeta_m), else 1."""
        if self.kind is FieldKind.CYCLOTOMIC:
            return int(totient(self.order))
        return 1

    @property
    def is_prime_field(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def is_cyclotomic(self) -> bool:
        return self.kind is FieldKind.CYCLOTOMIC

    def modulus(self) -> List[int]:
        """Coefficients of Phi_m, lowest degree first."""
        if self.kind is not FieldKind.CYCLOTOMIC:
            raise FieldMismatch(f"{self} has no defining polynomial")
        coeffs = cyclotomic_poly(self.order, Symbol("z"), polys=True).all_coeffs()
        return [int(c) for c in reversed(coeffs)]

    # ----------------------------------------------------------------------
    # Element construction
    # ----------------------------------------------------------------------
    @property
    def zero(self) -> Any:
        return self.domain.zero

    @property
    def one(self) -> Any:
        return self.domain.one

    def from_int(self, value: int) -> Any:
        return self.domain(int(value))

    def from_fraction(self, numerator: int, denominator: int) -> Any:
        if denominator == 0 or (self.is_prime_field and denominator % self.order == 0):
            raise DivisionByZero(f"{numerator}/{denominator} is undefined in {self}")
        if self.kind is FieldKind.RATIONALS:
            return QQ(numerator, denominator)
        return self.from_int(numerator) / self.from_int(denominator)

    def generator(self) -> Any:
        """The primitive root of unity zeta_m of a cyclotomic field."""
        if self.kind is not FieldKind.CYCLOTOMIC:
            raise FieldMismatch(f"{self} has no cyclotomic generator")
        return self.domain([QQ.one, QQ.zero])

    def root_of_unity(self, m: int) -> Any:
        """A primitive m-th root of unity, when the field contains one."""
        if m == 1:
            return self.one
        if m == 2:
            return -self.one
        if self.kind is FieldKind.CYCLOTOMIC and self.order % m == 0:
            return self.generator()**(self.order // m)
        raise FieldMismatch(f"{self} does not contain a primitive {m}-th root of unity", {"m": m})

    def from_coefficients(self, coeffs: List[Any]) -> Any:
        """Element sum c_i * zeta^i of a cyclotomic field, lowest power first."""
        if self.kind is not FieldKind.CYCLOTOMIC:
            raise FieldMismatch(f"{self} has no power basis")
        return self.domain([QQ.convert(c) for c in reversed(coeffs)])

    def coefficients(self, element: Any) -> List[Any]:
        """Canonical coordinates of ``element``: length phi(m) for Q(zeta_m), else length 1."""
        if self.kind is FieldKind.CYCLOTOMIC:
            high_first = list(element.to_list())
            low_first = list(reversed(high_first))
            return low_first + [QQ.zero] * (self.degree - len(low_first))
        return [element]

    # ----------------------------------------------------------------------
    # Printing
    # ----------------------------------------------------------------------
    def format_element(self, element: Any) -> str:
        if self.kind is FieldKind.PRIME:
            return str(int(element) % self.order)
        if self.kind is FieldKind.RATIONALS:
            return _format_rational(element)
        return self._format_cyclotomic(element)

    def is_compound(self, element: Any) -> bool:
        """True when the printed form is a sum and must be parenthesised as a factor."""
        if self.kind is not FieldKind.CYCLOTOMIC:
            return False
        return sum(1 for c in self.coefficients(element) if c) > 1

    def _format_cyclotomic(self, element: Any) -> str:
        name = f"z{self.order}"
        parts: List[str] = []
        coeffs = self.coefficients(element)
        for power in range(len(coeffs) - 1, -1, -1):
            c = coeffs[power]
            if not c:
                continue
            monomial = "" if power == 0 else (name if power == 1 else f"{name}^{power}")
            parts.append(_format_term(c, monomial))
        return _join_terms(parts)


def _format_rational(value: Any) -> str:
    numerator, denominator = int(QQ.numer(value)), int(QQ.denom(value))
    return str(numerator) if denominator == 1 else f"{numerator}/{denominator}"


def _format_term(coefficient: Any, monomial: str) -> str:
    if not monomial:
        return _format_rational(coefficient)
    if coefficient == QQ.one:
        return monomial
    if coefficient == -QQ.one:
        return f"-{monomial}"
    return f"{_format_rational(coefficient)}*{monomial}"


def _join_terms(parts: List[str]) -> str:
    if not parts:
        return "0"
    text = parts[0]
    for part in parts[1:]:
        text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return text


@dataclass(frozen=True, eq=False)
class Scalar:
    """An element of a FieldSpec; the raw sympy domain element is ``value``."""
    field: FieldSpec
    value: Any

    @classmethod
    def of(cls, field: FieldSpec, value: int) -> "Scalar":
        return cls(field, field.from_int(value))

    @classmethod
    def parse(cls, text: str, field: FieldSpec) -> "Scalar":
        from ..api.parser import parse_scalar
        return parse_scalar(text, field)

    def _check(self, other: "Scalar") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"cannot combine {self.field} with {other.field}")

    def __add__(self, other: "Scalar") -> "Scalar":
        return scalar_arith(self, other, "+")

    def __sub__(self, other: "Scalar") -> "Scalar":
        return scalar_arith(self, other, "-")

    def __mul__(self, other: "Scalar") -> "Scalar":
        return scalar_arith(self, other, "*")

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return scalar_arith(self, other, "/")

    def __neg__(self) -> "Scalar":
        return Scalar(self.field, -self.value)

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return scalar_invert(self)**(-exponent)
        return Scalar(self.field, self.value**exponent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.field, str(self)))

    def __bool__(self) -> bool:
        return not self.is_zero

    @property
    def is_zero(self) -> bool:
        return not self.value

    def inverse(self) -> "Scalar":
        return scalar_invert(self)

    def coefficients(self) -> List[Any]:
        return self.field.coefficients(self.value)

    def __str__(self) -> str:
        return self.field.format_element(self.value)

    def __repr__(self) -> str:
        return f"Scalar({self.field}, {self})"


_OPS: Dict[str, Callable[[Any, Any], Any]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
}


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Field operation ``a op b`` for op in + - * /."""
    a._check(b)
    if op == "/":
        return Scalar(a.field, a.value * scalar_invert(b).value)
    if op not in _OPS:
        raise ValueError(f"unknown operation '{op}'")
    return Scalar(a.field, _OPS[op](a.value, b.value))


def scalar_invert(a: Scalar) -> Scalar:
    if a.is_zero:
        raise DivisionByZero(f"0 has no inverse in {a.field}")
    return Scalar(a.field, a.field.one / a.value)


def reduce_mod_p(a: Scalar, p: int) -> Scalar:
    """Image of a rational scalar in F_p; the denominator must be prime to p."""
    if a.field.kind is not FieldKind.RATIONALS:
        raise FieldMismatch(f"only rational scalars reduce modulo p, got {a.field}")
    target = FieldSpec.prime_field(p)
    numerator, denominator = int(QQ.numer(a.value)), int(QQ.denom(a.value))
    return Scalar(target, target.from_fraction(numerator, denominator))
