"""Tests for smoothness certification."""

from __future__ import annotations

import random

import pytest
from sympy.polys.domains import QQ

from app.api.parser import parse_biform
from app.errors import DegenerateInput, DegreeError, NotSmooth
from app.models.biform import VARIABLES, BiForm, change_coordinates
from app.models.field import FieldSpec
from app.services.smooth_service import WitnessKind, build_context, singular_locus
from tests.conftest import GRILLED_CURVE


def _rational_singular_points(h: BiForm) -> set:
    """Exhaustive search over P1(F_p) x P1(F_p)."""
    p = h.field.order
    K = h.domain
    line = [(K(a), K.one) for a in range(p)] + [(K.one, K.zero)]
    forms = [h] + [h.partial(name) for name in VARIABLES]
    found = set()
    for x in line:
        for y in line:
            if all(not form.evaluate(x[0], x[1], y[0], y[1]) for form in forms):
                found.add(_key(x, y, p))
    return found


def _key(x, y, p: int) -> tuple:
    return tuple(int(c) % p for c in (*x, *y))


def _random_form(field: FieldSpec, d1: int, d2: int, rng: random.Random) -> BiForm:
    return BiForm.from_flat(field, d1, d2, [field.from_int(rng.randrange(field.order))
                                            for _ in range((d1 + 1) * (d2 + 1))])


class TestFermatCurve:
    """x0^3 y0^3 + x1^3 y1^3 is singular at two boundary points."""
    def test_witnesses(self, fermat: BiForm) -> None:
        """Exactly ([0:1], [1:0]) and ([1:0], [0:1])."""
        verdict = singular_locus(fermat)
        assert not verdict.smooth
        assert all(w.kind is WitnessKind.POINT for w in verdict.witnesses)
        assert sorted(w.point_text() for w in verdict.witnesses) == ["([0:1], [1:0])", "([1:0], [0:1])"]

    def test_witnesses_verify(self, fermat: BiForm) -> None:
        """Every witness re-checks against the form."""
        assert all(w.verify(fermat) for w in singular_locus(fermat).witnesses)

    def test_require_smooth(self, fermat: BiForm) -> None:
        """Smooth-only operations refuse singular curves with exit code 3."""
        ctx = build_context(fermat)
        with pytest.raises(NotSmooth) as exc:
            ctx.require_smooth()
        assert exc.value.exit_code == 3
        assert len(exc.value.detail["witnesses"]) == 2


class TestSmoothCurves:
    """Curves without singular points."""
    def test_family_curve_is_smooth(self, q_z5: FieldSpec) -> None:
        """The first genus 4 family member is smooth."""
        assert singular_locus(parse_biform(GRILLED_CURVE, q_z5)).smooth

    def test_node_in_open_chart(self, rationals: FieldSpec) -> None:
        """A product of two (1, 1) curves is singular where they meet."""
        a = parse_biform("x0*y0 - x1*y1", rationals)
        b = parse_biform("x0*y1 - 4*x1*y0", rationals)
        verdict = singular_locus(a * b)
        # u v = 1 and u = 4 v meet at (2, 1/2) and (-2, -1/2)
        points = sorted(w.point_text() for w in verdict.witnesses)
        assert points == ["([-2:1], [-1/2:1])", "([2:1], [1/2:1])"]

    def test_conjugate_points(self, rationals: FieldSpec) -> None:
        """Singular points over Q(i) come back as one triangular witness."""
        a = parse_biform("x0*y0 + x1*y1", rationals)
        b = parse_biform("x0*y1 - x1*y0", rationals)
        h = a * b
        verdict = singular_locus(h)
        assert len(verdict.witnesses) == 1
        witness = verdict.witnesses[0]
        assert witness.kind is WitnessKind.TRIANGULAR
        assert witness.verify(h)

    def test_coordinate_change_invariance(self, random_cubic) -> None:
        """Smoothness does not depend on coordinates."""
        x_matrix = [[QQ(2), QQ(1)], [QQ(1), QQ(1)]]
        y_matrix = [[QQ(1), QQ(-3)], [QQ(0), QQ(1)]]
        moved = change_coordinates(random_cubic.h, x_matrix, y_matrix)
        assert singular_locus(moved).smooth

    def test_moved_fermat_keeps_two_points(self, fermat: BiForm) -> None:
        """Moving the Fermat curve moves its singular points into the open chart."""
        x_matrix = [[QQ(1), QQ(1)], [QQ(1), QQ(2)]]
        y_matrix = [[QQ(1), QQ(3)], [QQ(-1), QQ(1)]]
        verdict = singular_locus(change_coordinates(fermat, x_matrix, y_matrix))
        assert len(verdict.points()) == 2


class TestGuards:
    """Inputs the checker refuses."""
    def test_zero_form(self, rationals: FieldSpec) -> None:
        """The zero form is not a curve."""
        with pytest.raises(DegenerateInput):
            singular_locus(BiForm.zero(rationals, 2, 2))

    def test_small_characteristic(self) -> None:
        """p must exceed the bidegree."""
        f3 = FieldSpec.prime_field(3)
        with pytest.raises(DegenerateInput):
            singular_locus(parse_biform("x0^3*y0^3 + x1^3*y1^3 + x0*x1^2*y0^2*y1", f3))

    def test_context_needs_square_bidegree(self, rationals: FieldSpec) -> None:
        """Curves of bidegree (k, k) only."""
        with pytest.raises(DegreeError):
            build_context(parse_biform("x0^2*y0 + x1^2*y1", rationals))


class TestExhaustiveAgreement:
    """Agreement with point enumeration over small prime fields."""
    @pytest.mark.parametrize("p", [7, 11, 13])
    def test_random_curves(self, p: int) -> None:
        """Rational singular points are exactly the point witnesses."""
        field = FieldSpec.prime_field(p)
        rng = random.Random(p)
        for _ in range(8):
            h = _random_form(field, 2, 2, rng)
            if h.is_zero:
                continue
            verdict = singular_locus(h)
            if any(w.kind is WitnessKind.COMPONENT for w in verdict.witnesses):
                continue
            expected = _rational_singular_points(h)
            found = {_key(*point, p) for point in verdict.points()}
            assert found == expected

    @pytest.mark.parametrize("p", [11, 31])
    def test_reducible_curves(self, p: int) -> None:
        """Products of (1, 1) forms have nodes; the checker finds the rational ones."""
        field = FieldSpec.prime_field(p)
        rng = random.Random(100 + p)
        for _ in range(8):
            h = _random_form(field, 1, 1, rng) * _random_form(field, 1, 1, rng)
            if h.is_zero:
                continue
            verdict = singular_locus(h)
            if any(w.kind is WitnessKind.COMPONENT for w in verdict.witnesses):
                continue
            expected = _rational_singular_points(h)
            found = {_key(*point, p) for point in verdict.points()}
            assert found == expected
            assert all(w.verify(h) for w in verdict.witnesses)

    @pytest.mark.slow
    def test_fifty_curves(self) -> None:
        """Irreducible, reducible and non-reduced (k, k) curves over F_11 and F_13."""
        curves = []
        for p in (11, 13):
            field = FieldSpec.prime_field(p)
            rng = random.Random(1000 + p)
            for k in (2, 3):
                curves += [_random_form(field, k, k, rng) for _ in range(7)]
                curves += [_random_form(field, 1, 1, rng) * _random_form(field, k - 1, k - 1, rng) for _ in range(3)]
            line = parse_biform(f"x0 - {rng.randrange(1, p)}*x1", field)
            curves += [line * line * _random_form(field, 1, 3, rng) for _ in range(5)]
        assert len(curves) == 50
        for h in curves:
            if h.is_zero:
                continue
            p = h.field.order
            verdict = singular_locus(h)
            expected = _rational_singular_points(h)
            found = {_key(*point, p) for point in verdict.points()}
            assert all(w.verify(h) for w in verdict.witnesses)
            assert found <= expected
            if expected:
                assert not verdict.smooth
            if not any(w.kind is WitnessKind.COMPONENT for w in verdict.witnesses):
                assert found == expected
