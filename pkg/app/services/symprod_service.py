"""
Intersection numbers on the second symmetric product C^(2) of a smooth
curve of bidegree (k, k).

Classes: K (canonical), Delta (image of the diagonal), Gamma (pairs inside a
fibre of one g^1_k) and H = {p + q : q in C}. Every number is an exact
integer; the presentations through g and through k are cross-checked.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Sequence

from sympy.polys.domains import QQ

from .. import linalg
from ..errors import InternalConsistencyError, RangeError
from ..models.reports import SymProdTable

__all__ = ["intersection_table", "pair", "render_table"]

log = logging.getLogger(__name__)


def pair(matrix: Sequence[Sequence[int]], u: Sequence[int], v: Sequence[int]) -> int:
    return sum(u[i] * matrix[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


def _genus_numbers(g: int) -> Dict[str, int]:
    return {"K2": (g - 1) * (4 * g - 9), "KD": 6 * (g - 1), "D2": -4 * (g - 1)}


def intersection_table(k: int) -> SymProdTable:
    if k < 3:
        raise RangeError(f"intersection data needs k >= 3, got {k}", {"k": k})
    g = (k - 1)**2
    by_genus = _genus_numbers(g)
    k2 = (2 * k - 5) * (k - 2) * k * (2 * k + 1)
    kd = 6 * (k - 2) * k
    d2 = -4 * (k - 2) * k
    gk = (2 * k - 5) * (k - 1) * k
    gd = 2 * (k - 1) * k
    # Basis order: Gamma, K, Delta
    matrix = [
        [0, gk, gd],
        [gk, k2, kd],
        [gd, kd, d2],
    ]
    kernel = [4 * k - 8, -2, 2 * k - 5]
    hk = 2 * g - 3
    hg = k - 1
    # Basis order: H, Gamma, K, Delta
    extended = [
        [1, hg, hk, 2],
        [hg, 0, gk, gd],
        [hk, gk, k2, kd],
        [2, gd, kd, d2],
    ]
    two_genus_minus_two = -k * (k - 1) + 2 * (k - 2) * (k - 1) * k
    genus_gamma = two_genus_minus_two // 2 + 1

    ray_flat = [0, 2, 3]  # 2K + 3 Delta
    ray_gamma = [0, 2, 5 - 2 * k]  # 2K + (5 - 2k) Delta
    # K = (2g - 2) H - Delta / 2, numerically
    canonical = [QQ(2 * g - 2), QQ(0), QQ(0), QQ(-1, 2)]
    canonical_pairings = [sum((canonical[i] * extended[i][j] for i in range(4)), QQ(0)) for j in range(4)]

    checks = {
        "presentations_agree": by_genus == {"K2": k2, "KD": kd, "D2": d2},
        "kernel_annihilated": all(sum(row[j] * kernel[j] for j in range(3)) == 0 for row in matrix),
        "matrix_rank_two": linalg.rank([[QQ(a) for a in row] for row in matrix], 3, QQ) == 2,
        "flat_ray_orthogonal_to_delta": pair(matrix, ray_flat, [0, 0, 1]) == 0,
        "gamma_ray_isotropic": pair(matrix, ray_gamma, ray_gamma) == 0,
        "flat_ray_positive": pair(matrix, ray_flat, ray_flat) == 16 * g * (g - 1) > 0,
        "gamma_row_matches_ray": all(
            (4 * k - 8) * matrix[0][j] == pair(matrix, ray_gamma, [int(i == j) for i in range(3)]) for j in range(3)
        ),
        "genus_gamma_by_adjunction": two_genus_minus_two == matrix[0][0] + matrix[0][1],
        "gamma_delta_degree": gd == 2 * g - 2 + 2 * k,
        "canonical_from_h_delta": canonical_pairings == [hk, gk, k2, kd],
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InternalConsistencyError(f"intersection identities failed for k = {k}", {"checks": failed})
    log.info("intersection table for k=%d: K^2=%d K.Delta=%d Delta^2=%d", k, k2, kd, d2)
    return SymProdTable(
        k=k,
        genus=g,
        classes=["Gamma", "K", "Delta"],
        matrix=matrix,
        kernel_vector=kernel,
        extended_classes=["H", "Gamma", "K", "Delta"],
        extended_matrix=extended,
        canonical_in_h_delta=[str(2 * g - 2), "-1/2"],
        genus_gamma=genus_gamma,
        gamma_degree=k * (k - 1) // 2,
        nef_rays={
            "2K+3Delta": {"K": ray_flat[1], "Delta": ray_flat[2]},
            "2K+(5-2k)Delta": {"K": ray_gamma[1], "Delta": ray_gamma[2]},
        },
        checks=checks,
    )


def render_table(table: SymProdTable) -> List[str]:
    """Aligned plain-text rendering of the extended intersection matrix."""
    names = table.extended_classes
    width = max(max(len(str(v)) for row in table.extended_matrix for v in row), max(len(n) for n in names)) + 2
    lines = [" " * width + "".join(n.rjust(width) for n in names)]
    for name, row in zip(names, table.extended_matrix):
        lines.append(name.rjust(width) + "".join(str(v).rjust(width) for v in row))
    return lines
