"""Pytest configuration and fixtures for the quadric-torsion tests."""

from __future__ import annotations

import os
from collections.abc import Generator

import pytest
from sqlalchemy.orm import Session

# Set test environment variables before importing app modules
os.environ["DATABASE_URL"] = ""
os.environ["DEFAULT_FIELD"] = "Q"
os.environ["DEFAULT_SEED"] = "0"
os.environ["LOG_LEVEL"] = "DEBUG"

from app.api.parser import parse_biform
from app.db import Base, get_engine, init_db, session_factory
from app.models.biform import BiForm
from app.models.field import FieldSpec
from app.services.family_service import SamplerConfig, sample_grid_curve, sample_random_curve
from app.services.smooth_service import CurveContext, build_context

FERMAT = "x0^3*y0^3 + x1^3*y1^3"

# Genus 4 curves with an automorphism of order 5, over Q(z5)
GRILLED_CURVE = "x0*x1^2*y1^3 - z5*x0^2*x1*y0^3 + (z5^3+z5^2+z5)*x0^3*y0*y1^2 + (z5^2+z5)*x1^3*y0^2*y1"
NOT_GRILLED_CURVE = "x0*x1^2*y1^3 - x0^2*x1*y0^3 + x0^3*y0*y1^2 + x1^3*y0^2*y1"


@pytest.fixture
def rationals() -> FieldSpec:
    return FieldSpec.rationals()


@pytest.fixture
def q_z5() -> FieldSpec:
    return FieldSpec.cyclotomic(5)


@pytest.fixture
def f101() -> FieldSpec:
    return FieldSpec.prime_field(101)


@pytest.fixture
def fermat(rationals: FieldSpec) -> BiForm:
    """Singular at exactly two points on the boundary strata."""
    return parse_biform(FERMAT, rationals)


def smooth_samples(field: FieldSpec, k: int, count: int, sampler: str = "random", seed: int = 0) -> list[CurveContext]:
    """The smooth curves among ``count`` seeded samples."""
    draw = sample_random_curve if sampler == "random" else sample_grid_curve
    contexts = []
    for offset in range(count):
        ctx = build_context(draw(SamplerConfig(k=k, field=field, seed=seed + offset)))
        if ctx.is_smooth:
            contexts.append(ctx)
    return contexts


@pytest.fixture
def random_cubic(rationals: FieldSpec) -> CurveContext:
    """A smooth (3, 3) curve with a rank 4 coefficient matrix."""
    return smooth_samples(rationals, 3, 4, "random", seed=11)[0]


@pytest.fixture
def grid_cubic(rationals: FieldSpec) -> CurveContext:
    """A smooth (3, 3) curve of the form f1*g2 + g1*f2."""
    return smooth_samples(rationals, 3, 4, "grid", seed=5)[0]


@pytest.fixture(scope="function")
def survey_db(tmp_path) -> Generator[tuple[str, Session], None, None]:
    """A fresh SQLite survey store in a temporary directory."""
    url = f"sqlite:///{tmp_path / 'survey.db'}"
    init_db(url)
    session = session_factory(url)()
    try:
        yield url, session
    finally:
        session.close()
        Base.metadata.drop_all(bind=get_engine(url))


@pytest.fixture
def sample_smooth():
    """The ``smooth_samples`` helper, for tests that draw their own curves."""
    return smooth_samples
