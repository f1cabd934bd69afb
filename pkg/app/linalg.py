"""
Exact linear algebra over the supported fields.

Matrices are plain lists of rows holding raw sympy domain elements; the
heavy lifting is done by ``DomainMatrix`` in its sparse format, which keeps
the banded Cech multiplication matrices cheap to eliminate. Empty shapes are
handled here so callers never have to special-case them.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import nextprime, primitive_root
from sympy.polys.domains import GF, QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from .models.field import FieldKind, FieldSpec

__all__ = [
    "to_domain_matrix",
    "rank",
    "rref",
    "nullspace",
    "solve",
    "inverse",
    "transpose",
    "kernel_dimension",
]

log = logging.getLogger(__name__)

Row = List[Any]

# Reduction prime for the characteristic-zero rank certificate
_CERTIFICATE_PRIME_FLOOR = 2**30


def to_domain_matrix(rows: Sequence[Sequence[Any]], ncols: int, domain: Domain) -> DomainMatrix:
    dod: Dict[int, Dict[int, Any]] = {}
    for i, row in enumerate(rows):
        entries = {j: a for j, a in enumerate(row) if a}
        if entries:
            dod[i] = entries
    return DomainMatrix(dod, (len(rows), ncols), domain)


def transpose(rows: Sequence[Sequence[Any]], ncols: int) -> List[Row]:
    return [[row[j] for row in rows] for j in range(ncols)]


def rank(rows: Sequence[Sequence[Any]], ncols: int, domain: Domain) -> int:
    if not rows or ncols == 0:
        return 0
    return to_domain_matrix(rows, ncols, domain).rank()


def rref(rows: Sequence[Sequence[Any]], ncols: int, domain: Domain) -> Tuple[List[Row], Tuple[int, ...]]:
    """Reduced row echelon form (pivots normalised to one) and pivot columns."""
    if not rows or ncols == 0:
        return [list(r) for r in rows], ()
    reduced, pivots = to_domain_matrix(rows, ncols, domain).rref()
    return reduced.to_list(), tuple(pivots)


def nullspace(rows: Sequence[Sequence[Any]], ncols: int, domain: Domain) -> List[Row]:
    """A basis of {v : rows * v = 0}, one vector per entry."""
    if ncols == 0:
        return []
    if not rows:
        return [[domain.one if i == j else domain.zero for j in range(ncols)] for i in range(ncols)]
    basis = to_domain_matrix(rows, ncols, domain).nullspace()
    return [list(v) for v in basis.to_list()]


def solve(columns: Sequence[Sequence[Any]], rhs: Sequence[Any], domain: Domain) -> Optional[Row]:
    """
    One solution x of sum_j x_j * columns[j] = rhs, or None if there is none.

    Free variables are set to zero, so the answer is unique whenever the
    columns are independent.
    """
    nrows = len(rhs)
    ncols = len(columns)
    if ncols == 0:
        return [] if all(not a for a in rhs) else None
    augmented = [[columns[j][i] for j in range(ncols)] + [rhs[i]] for i in range(nrows)]
    reduced, pivots = rref(augmented, ncols + 1, domain)
    if ncols in pivots:
        return None
    solution = [domain.zero] * ncols
    for row_index, column in enumerate(pivots):
        solution[column] = reduced[row_index][ncols]
    return solution


def inverse(rows: Sequence[Sequence[Any]], domain: Domain) -> List[Row]:
    size = len(rows)
    if size == 0:
        return []
    dense = DomainMatrix([list(r) for r in rows], (size, size), domain)
    return dense.inv().to_list()


# --------------------------------------------------------------------------
# Kernel dimension with a modular fast path
# --------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _certificate_prime(m: int) -> Tuple[int, int]:
    """A prime p = 1 mod m above the floor and an element of exact order m in F_p."""
    p = nextprime(_CERTIFICATE_PRIME_FLOOR)
    while (p - 1) % m:
        p = nextprime(p)
    omega = pow(primitive_root(p), (p - 1) // m, p)
    return p, omega


def _reduce_rational(value: Any, p: int) -> Optional[int]:
    numerator, denominator = int(QQ.numer(value)), int(QQ.denom(value))
    if denominator % p == 0:
        return None
    return numerator * pow(denominator, -1, p) % p


def _reduce_entry(value: Any, field: FieldSpec, p: int, omega: int) -> Optional[int]:
    if field.kind is FieldKind.RATIONALS:
        return _reduce_rational(value, p)
    acc = 0
    for c in value.to_list():
        reduced = _reduce_rational(c, p)
        if reduced is None:
            return None
        acc = (acc * omega + reduced) % p
    return acc


def _reduce_rows(rows: Sequence[Sequence[Any]], field: FieldSpec) -> Optional[Tuple[Domain, List[Row]]]:
    """
    Image of a characteristic-zero matrix under a ring map to F_p.

    The map sends zeta_m to an element of order m, so the rank of the image
    never exceeds the rank of the original.
    """
    p, omega = _certificate_prime(field.order if field.is_cyclotomic else 1)
    target = GF(p)
    reduced_rows: List[Row] = []
    for row in rows:
        reduced_row: Row = []
        for a in row:
            if not a:
                reduced_row.append(target.zero)
                continue
            image = _reduce_entry(a, field, p, omega)
            if image is None:
                return None
            reduced_row.append(target(image))
        reduced_rows.append(reduced_row)
    return target, reduced_rows


def kernel_dimension(rows: Sequence[Sequence[Any]], ncols: int, field: FieldSpec) -> int:
    """
    dim ker of the matrix ``rows`` over ``field``.

    In characteristic zero a full column rank image modulo a large prime
    certifies a trivial kernel; otherwise the exact rank is computed.
    """
    if ncols == 0:
        return 0
    if not rows:
        return ncols
    if field.characteristic == 0:
        reduced = _reduce_rows(rows, field)
        if reduced is not None:
            target, reduced_rows = reduced
            if rank(reduced_rows, ncols, target) == ncols:
                return 0
            log.debug("modular rank deficient for %dx%d matrix, falling back to exact rank", len(rows), ncols)
    return ncols - rank(rows, ncols, field.domain)
