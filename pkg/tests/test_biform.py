"""Tests for bihomogeneous forms."""

from __future__ import annotations

import pytest
from sympy.polys.domains import QQ

from app.api.parser import parse_biform
from app.errors import DegreeError, FieldMismatch
from app.models.biform import BiForm, TorusAuto, apply_auto, change_coordinates, divide_exact
from app.models.field import FieldSpec


class TestConstruction:
    """Tests for building forms."""
    def test_coefficient_layout(self, rationals: FieldSpec) -> None:
        """Entry (i, j) multiplies x0^i x1^(d1-i) y0^j y1^(d2-j)."""
        h = parse_biform("2*x0^2*x1*y1^2 + 5*x1^3*y0^2", rationals)
        assert h.bidegree == (3, 2)
        assert h.coeffs[2][0] == QQ(2)
        assert h.coeffs[0][2] == QQ(5)
        assert h.to_text() == "2*x0^2*x1*y1^2 + 5*x1^3*y0^2"

    def test_from_factors(self, rationals: FieldSpec) -> None:
        """(x1 + 2 x0)(3 y1 - y0) expands term by term."""
        u = [QQ(1), QQ(2)]
        v = [QQ(3), QQ(-1)]
        h = BiForm.from_factors(rationals, u, v)
        assert h == parse_biform("(x1 + 2*x0)*(3*y1 - y0)", rationals)

    def test_monomial_outside_bidegree(self, rationals: FieldSpec) -> None:
        """Exponents must fit the bidegree."""
        with pytest.raises(DegreeError):
            BiForm.monomial(rationals, 3, 0, 2, 2)

    def test_dict_round_trip(self, q_z5: FieldSpec) -> None:
        """Canonical JSON keeps exact cyclotomic coefficients."""
        h = parse_biform("(z5^2 + 1)*x0*y1 - z5*x1*y0", q_z5)
        data = h.to_dict()
        assert data["field"] == "Q(z5)"
        assert data["bidegree"] == [1, 1]
        assert BiForm.from_dict(data) == h


class TestArithmetic:
    """Tests for products, division and derivatives."""
    def test_product_bidegree(self, rationals: FieldSpec) -> None:
        """Bidegrees add under multiplication."""
        a = parse_biform("x0*y0 + x1*y1", rationals)
        b = parse_biform("x0^2 - x1^2", rationals)
        assert (a * b).bidegree == (3, 1)
        assert a * b == parse_biform("x0^3*y0 + x0^2*x1*y1 - x0*x1^2*y0 - x1^3*y1", rationals)

    def test_exact_division(self, rationals: FieldSpec) -> None:
        """divide_exact recovers the cofactor and rejects non-multiples."""
        h = parse_biform("x0*y0 + x1*y1", rationals)
        g = parse_biform("x0 - 3*x1", rationals)
        assert divide_exact(h * g, h) == g
        assert divide_exact(h * g + parse_biform("x0^2*y0", rationals), h) is None

    def test_division_edge_cases(self, fermat: BiForm, rationals: FieldSpec) -> None:
        """x0 y0 does not divide the Fermat form; zero divides to zero."""
        assert divide_exact(fermat, parse_biform("x0*y0", rationals)) is None
        h = parse_biform("x0*y0 + x1*y1", rationals)
        assert divide_exact(BiForm.zero(rationals, 3, 3), h) == BiForm.zero(rationals, 2, 2)

    def test_division_degree_check(self, rationals: FieldSpec) -> None:
        """The divisor cannot have a larger bidegree."""
        with pytest.raises(DegreeError):
            divide_exact(parse_biform("x0", rationals), parse_biform("x0*y0", rationals))

    def test_mixed_fields(self, rationals: FieldSpec, f101: FieldSpec) -> None:
        """Forms over different fields do not combine."""
        with pytest.raises(FieldMismatch):
            parse_biform("x0*y0", rationals) + parse_biform("x0*y0", f101)

    def test_partials(self, rationals: FieldSpec) -> None:
        """Formal derivatives in each variable."""
        h = parse_biform("x0^2*x1*y0^2 + x1^3*y1^2", rationals)
        assert h.partial("x0") == parse_biform("2*x0*x1*y0^2", rationals)
        assert h.partial("x1") == parse_biform("x0^2*y0^2 + 3*x1^2*y1^2", rationals)
        assert h.partial("y1") == parse_biform("2*x1^3*y1", rationals)

    def test_euler_identity(self, rationals: FieldSpec) -> None:
        """x0 h_x0 + x1 h_x1 = d1 h, checked at a point."""
        h = parse_biform("x0^3*y0*y1 - 2*x0*x1^2*y1^2 + 7*x1^3*y0^2", rationals)
        point = (QQ(2), QQ(-3), QQ(5), QQ(1, 2))
        value = point[0] * h.partial("x0").evaluate(*point) + point[1] * h.partial("x1").evaluate(*point)
        assert value == 3 * h.evaluate(*point)

    def test_transpose(self, rationals: FieldSpec) -> None:
        """Swapping factors exchanges x and y."""
        h = parse_biform("x0^2*y1 + x1^2*y0", rationals)
        assert h.transpose() == parse_biform("y0^2*x1 + y1^2*x0", rationals)

    def test_reduce_mod_p(self, rationals: FieldSpec) -> None:
        """Coefficient-wise reduction to F_7."""
        h = parse_biform("x0*y0/3 + 8*x1*y1", rationals)
        f7 = FieldSpec.prime_field(7)
        assert h.reduce_mod_p(7) == parse_biform("5*x0*y0 + x1*y1", f7)


class TestCoordinateChanges:
    """Tests for linear substitutions."""
    def test_identity(self, rationals: FieldSpec) -> None:
        """The identity substitution fixes the form."""
        h = parse_biform("x0^2*y0 - x0*x1*y1 + 4*x1^2*y0", rationals)
        one, zero = QQ(1), QQ(0)
        identity = [[one, zero], [zero, one]]
        assert change_coordinates(h, identity, identity) == h

    def test_swap(self, rationals: FieldSpec) -> None:
        """Exchanging x0 and x1 reverses the x-exponents."""
        h = parse_biform("x0^2*y0 + 3*x1^2*y1", rationals)
        one, zero = QQ(1), QQ(0)
        swap = [[zero, one], [one, zero]]
        identity = [[one, zero], [zero, one]]
        assert change_coordinates(h, swap, identity) == parse_biform("x1^2*y0 + 3*x0^2*y1", rationals)


class TestTorusAutomorphisms:
    """Tests for diagonal automorphisms."""
    def test_family_character(self, q_z5: FieldSpec) -> None:
        """Every monomial of the genus 4 family has weight one."""
        sigma = TorusAuto((1, 0, 3, 0), 5)
        h = parse_biform("x0*x1^2*y1^3 + 2*x0^2*x1*y0^3 + x0^3*y0*y1^2 + x1^3*y0^2*y1", q_z5)
        image, character = apply_auto(h, sigma)
        assert character == 1
        assert image == h.scale(q_z5.generator())

    def test_non_eigenform(self, q_z5: FieldSpec) -> None:
        """Mixed weights give no character."""
        sigma = TorusAuto((1, 0, 3, 0), 5)
        assert sigma.character(parse_biform("x0*y0 + x1*y1", q_z5)) is None
