"""
Curve constructors and samplers.

Random and grid-family curves, the sigma-invariant families, the secant
Jacobian rank experiment and the finite-field torsion survey. All sampling
is driven by ``random.Random(seed)`` so equal configurations give identical
outputs.
"""
from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence

from sympy.polys.domains import QQ

from .. import linalg
from ..config import settings
from ..errors import FieldMismatch, InternalConsistencyError, InvalidPrime, QuadricError, RangeError, Reducible
from ..models.biform import BiForm, TorusAuto
from ..models.field import FieldSpec, Scalar
from ..models.reports import SurveyHistogram
from .smooth_service import CurveContext, build_context
from .torsion_service import grid_rank, torsion_order

__all__ = [
    "SAMPLERS",
    "SIGMA_G4",
    "SamplerConfig",
    "SigmaFamilySpec",
    "TrialOutcome",
    "sample_grid_curve",
    "sample_random_curve",
    "sample_sigma_invariant_curve",
    "sample_curves",
    "sampler_automorphism",
    "sigma_family_g4",
    "sigma_invariant_curve",
    "sigma_k",
    "sigma_grid_form",
    "secant_jacobian_rank",
    "evaluate_trial",
    "validate_survey",
    "aggregate",
    "survey_fp",
]

log = logging.getLogger(__name__)

# (z5 x0, x1, z5^3 y0, y1)
SIGMA_G4 = TorusAuto((1, 0, 3, 0), 5)

SAMPLERS = ("random", "grid", "sigma")


@dataclass(frozen=True)
class SamplerConfig:
    k: int
    field: FieldSpec
    seed: int = 0
    height: int = 9
    count: int = 1

    def __post_init__(self) -> None:
        if self.height < 1:
            raise RangeError(f"height must be positive, got {self.height}")
        if self.count < 0:
            raise RangeError(f"count must be non-negative, got {self.count}")

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _draw(cfg: SamplerConfig, rng: random.Random) -> Any:
    if cfg.field.is_prime_field:
        return cfg.field.from_int(rng.randrange(cfg.field.order))
    return cfg.field.from_int(rng.randint(-cfg.height, cfg.height))


def _vector(cfg: SamplerConfig, rng: random.Random, length: int) -> List[Any]:
    return [_draw(cfg, rng) for _ in range(length)]


def _require_k(k: int, minimum: int = 3) -> None:
    if k < minimum:
        raise RangeError(f"k must be at least {minimum}, got {k}", {"k": k})


def sample_grid_curve(cfg: SamplerConfig, rng: Optional[random.Random] = None) -> BiForm:
    """f1*g2 + g1*f2 with random f1, g1 in x and f2, g2 in y; smoothness is not certified."""
    _require_k(cfg.k)
    rng = rng or cfg.rng()
    size = cfg.k + 1
    f1, g1, f2, g2 = (_vector(cfg, rng, size) for _ in range(4))
    return BiForm.from_factors(cfg.field, f1, g2) + BiForm.from_factors(cfg.field, g1, f2)


def sample_random_curve(cfg: SamplerConfig, rng: Optional[random.Random] = None) -> BiForm:
    _require_k(cfg.k, 1)
    rng = rng or cfg.rng()
    size = cfg.k + 1
    return BiForm.from_grid(cfg.field, [_vector(cfg, rng, size) for _ in range(size)])


def sigma_k(k: int) -> TorusAuto:
    """x0 -> z_k x0, fixing the other coordinates."""
    return TorusAuto((1, 0, 0, 0), k)


def sigma_invariant_curve(field: FieldSpec, g2: Sequence[Any], f2: Sequence[Any]) -> BiForm:
    """x0^k g2(y) + x1^k f2(y)."""
    if len(g2) != len(f2):
        raise RangeError("g2 and f2 must have the same degree")
    k = len(g2) - 1
    terms = {}
    for j in range(k + 1):
        terms[(k, j)] = g2[j]
        terms[(0, j)] = f2[j]
    return BiForm.from_terms(field, k, k, terms)


def sample_sigma_invariant_curve(cfg: SamplerConfig, rng: Optional[random.Random] = None) -> BiForm:
    _require_k(cfg.k)
    rng = rng or cfg.rng()
    return sigma_invariant_curve(cfg.field, _vector(cfg, rng, cfg.k + 1), _vector(cfg, rng, cfg.k + 1))


def sigma_grid_form(field: FieldSpec, mu: int, lam: Any, h1: Sequence[Any], h2: Sequence[Any]) -> BiForm:
    """(x0^k - mu x1^k) h1(y) + (x0^k + lam x1^k) h2(y), mu in {0, 1}."""
    if mu not in (0, 1):
        raise RangeError(f"mu must be 0 or 1, got {mu}")
    if len(h1) != len(h2):
        raise RangeError("h1 and h2 must have the same degree")
    k = len(h1) - 1
    value = lam.value if isinstance(lam, Scalar) else lam
    first = [field.zero] * (k + 1)
    second = [field.zero] * (k + 1)
    first[k], first[0] = field.one, -field.from_int(mu)
    second[k], second[0] = field.one, value
    return BiForm.from_factors(field, first, list(h1)) + BiForm.from_factors(field, second, list(h2))


_SAMPLER_FUNCTIONS = {
    "random": sample_random_curve,
    "grid": sample_grid_curve,
    "sigma": sample_sigma_invariant_curve,
}


def sample_curves(cfg: SamplerConfig, sampler: str = "grid") -> List[BiForm]:
    """``cfg.count`` forms drawn from one RNG stream."""
    if sampler not in _SAMPLER_FUNCTIONS:
        raise RangeError(f"unknown sampler '{sampler}'", {"samplers": list(SAMPLERS)})
    rng = cfg.rng()
    draw = _SAMPLER_FUNCTIONS[sampler]
    return [draw(cfg, rng) for _ in range(cfg.count)]


def sampler_automorphism(sampler: str, k: int) -> Optional[TorusAuto]:
    """The automorphism every curve from ``sampler`` is an eigenform of, if any."""
    return sigma_k(k) if sampler == "sigma" else None


# --------------------------------------------------------------------------
# The genus 4 family with an automorphism of order 5
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class SigmaFamilySpec:
    alpha: Scalar
    beta: Scalar
    gamma: Scalar

    @property
    def field(self) -> FieldSpec:
        return self.alpha.field

    def form(self) -> BiForm:
        """x0 x1^2 y1^3 + alpha x0^2 x1 y0^3 + beta x0^3 y0 y1^2 + gamma x1^3 y0^2 y1."""
        field = self.field
        if self.beta.field != field or self.gamma.field != field:
            raise FieldMismatch("alpha, beta and gamma must share a field")
        terms = {
            (1, 0): field.one,
            (2, 3): self.alpha.value,
            (3, 1): self.beta.value,
            (0, 2): self.gamma.value,
        }
        return BiForm.from_terms(field, 3, 3, terms)


def _dividing_variable(h: BiForm) -> Optional[str]:
    d1, d2 = h.bidegree
    monomials = [key for key, _ in h.terms()]
    tests = {
        "x0": lambda i, j: i >= 1,
        "x1": lambda i, j: i <= d1 - 1,
        "y0": lambda i, j: j >= 1,
        "y1": lambda i, j: j <= d2 - 1,
    }
    for name, divides in tests.items():
        if monomials and all(divides(i, j) for i, j in monomials):
            return name
    return None


def sigma_family_g4(spec: SigmaFamilySpec) -> CurveContext:
    field = spec.field
    if not (field.is_cyclotomic and field.order % 5 == 0):
        raise FieldMismatch(f"the family is defined over a field containing z5, got {field}")
    h = spec.form()
    variable = _dividing_variable(h)
    if variable is not None:
        raise Reducible(f"{variable} divides every monomial of the form", {"variable": variable,
                                                                           "form": h.to_text()})
    character = SIGMA_G4.character(h)
    if character != 1:
        raise InternalConsistencyError(f"family member has character {character} under sigma, expected 1")
    return build_context(h, automorphism=SIGMA_G4)


# --------------------------------------------------------------------------
# Secant variety of the Segre embedding
# --------------------------------------------------------------------------
def secant_jacobian_rank(k: int, seed: int = 0) -> int:
    """Rank of the differential of (u, v, w, z) -> u v^T + w z^T at a random integer point."""
    _require_k(k, 2)
    rng = random.Random(seed)
    size = k + 1
    u, v, w, z = ([rng.randint(-10**6, 10**6) for _ in range(size)] for _ in range(4))
    rows = []
    for i in range(size):
        for j in range(size):
            row = [0] * (4 * size)
            row[i] = v[j]
            row[size + j] = u[i]
            row[2 * size + i] = z[j]
            row[3 * size + j] = w[i]
            rows.append([QQ(a) for a in row])
    rank = linalg.rank(rows, 4 * size, QQ)
    log.info("secant differential rank for k=%d: %d", k, rank)
    return rank


# --------------------------------------------------------------------------
# Finite-field survey
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class TrialOutcome:
    index: int
    seed: int
    form: str
    status: str  # "smooth", "singular" or "failed"
    order: Optional[int] = None
    is_grid: Optional[bool] = None
    error: Optional[str] = None

    @property
    def bucket(self) -> str:
        if self.status != "smooth":
            return self.status
        return str(self.order) if self.order is not None else "none"


def validate_survey(k: int, p: int, n_max: int, trials: int) -> FieldSpec:
    _require_k(k, 1)
    if p <= 2 * k:
        raise InvalidPrime(f"survey primes must exceed 2k = {2 * k}, got {p}", {"p": p, "k": k})
    field = FieldSpec.prime_field(p)
    if n_max < k:
        raise RangeError(f"n_max must be at least k = {k}, got {n_max}")
    if trials < 0:
        raise RangeError(f"trials must be non-negative, got {trials}")
    return field


def evaluate_trial(k: int, p: int, n_max: int, seed: int, sampler: str = "random", index: int = 0) -> TrialOutcome:
    """Sample one curve over F_p, certify smoothness, then search for the torsion order."""
    cfg = SamplerConfig(k=k, field=FieldSpec.prime_field(p), seed=seed)
    h = sample_curves(cfg, sampler)[0]
    text = h.to_text()
    if h.is_zero:
        return TrialOutcome(index, seed, text, "singular")
    try:
        ctx = build_context(h, automorphism=sampler_automorphism(sampler, k))
        if not ctx.is_smooth:
            return TrialOutcome(index, seed, text, "singular")
        report = torsion_order(ctx, n_max)
        is_grid = grid_rank(h).is_grid
    except InternalConsistencyError:
        raise
    except QuadricError as exc:
        log.exception("survey trial %d (seed %d) failed", index, seed)
        return TrialOutcome(index, seed, text, "failed", error=exc.message)
    if report.order is not None and report.order < k:
        raise InternalConsistencyError(f"torsion order {report.order} below k = {k}", {"form": text})
    return TrialOutcome(index, seed, text, "smooth", report.order, is_grid)


def aggregate(k: int, p: int, n_max: int, seed: int, sampler: str,
              outcomes: Iterable[TrialOutcome]) -> SurveyHistogram:
    collected = list(outcomes)
    counts = Counter(outcome.bucket for outcome in collected)
    return SurveyHistogram(k=k, p=p, n_max=n_max, trials=len(collected), seed=seed, sampler=sampler,
                           counts=dict(sorted(counts.items())))


def survey_fp(k: int, p: int, n_max: int, trials: int, seed: int = 0, sampler: str = "random") -> SurveyHistogram:
    """Sequential survey; trial i uses seed + i."""
    validate_survey(k, p, n_max, trials)
    outcomes = [evaluate_trial(k, p, n_max, seed + index, sampler, index) for index in range(trials)]
    return aggregate(k, p, n_max, seed, sampler, outcomes)


def default_config(k: int, field: FieldSpec, seed: Optional[int] = None, height: Optional[int] = None,
                   count: int = 1) -> SamplerConfig:
    return SamplerConfig(
        k=k,
        field=field,
        seed=settings.default_seed if seed is None else seed,
        height=settings.default_height if height is None else height,
        count=count,
    )
