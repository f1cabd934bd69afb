"""Tests for Cech cohomology on the quadric and on curves."""

from __future__ import annotations

import pytest

from app import linalg
from app.errors import DegreeError
from app.models.biform import BiForm, divide_exact
from app.models.field import FieldSpec
from app.services.cech_service import (
    ChartSection,
    CohBasis,
    LaurentForm,
    QuotientSpace,
    h0_curve,
    h0_dim,
    h0_quadric,
    h1_dim,
    kernel_sections,
    mult_by_h_matrix,
    section_times_form,
)
from app.services.smooth_service import CurveContext
from app.services.torsion_service import grid_rank


def _divisible(form: BiForm, h: BiForm) -> bool:
    if any(d < e for d, e in zip(form.bidegree, h.bidegree)):
        return False
    return divide_exact(form, h) is not None


def _clear_y0(part: LaurentForm) -> BiForm:
    """y0^M times a Laurent form with y0-poles only."""
    shift = max(-e for (_, e), _ in part.items())
    terms = {(i, e + shift): c for (i, e), c in part.items()}
    return BiForm.from_terms(part.field, part.xdeg, part.ydeg + shift, terms)


class TestQuadricCohomology:
    """Dimension formulas on P1 x P1."""
    @pytest.mark.parametrize(
        "a, b, h0, h1",
        [
            (2, 3, 12, 0),
            (-1, 4, 0, 0),
            (0, -2, 0, 1),
            (3, -5, 0, 16),
            (-4, 2, 0, 9),
            (-3, -3, 0, 0),
            (0, -6, 0, 5),
            (2, -3, 0, 6),
            (-1, -1, 0, 0),
        ],
    )
    def test_dimensions(self, a: int, b: int, h0: int, h1: int) -> None:
        """Kunneth: h^0 and h^1 of O(a, b)."""
        assert h0_quadric(a, b) == h0
        assert h1_dim(a, b) == h1

    def test_basis_size_matches_h1(self) -> None:
        """The cocycle basis spans H^1 with y-poles."""
        assert CohBasis(3, -5).size == h1_dim(3, -5)
        assert CohBasis(3, -5).monomials[0] == (0, 1)

    def test_x_poles_need_transpose(self) -> None:
        """Cocycles with x-poles are not represented directly."""
        with pytest.raises(DegreeError):
            CohBasis(-4, 2)

    def test_matrix_shape(self, random_cubic: CurveContext) -> None:
        """H^1(0, -6) -> H^1(3, -3) for k = 3."""
        cech = mult_by_h_matrix(random_cubic.h, 0, -6)
        assert cech.shape == (8, 5)

    @pytest.mark.parametrize("a, b", [(-8, -3), (-7, -3), (-5, -2)])
    def test_empty_source(self, random_cubic: CurveContext, a: int, b: int) -> None:
        """A zero source group gives the zero map, whatever the target chart."""
        cech = mult_by_h_matrix(random_cubic.h, a, b)
        assert cech.shape == (0, 0)
        assert cech.kernel_dimension() == 0
        assert cech.kernel() == []


class TestCurveCohomology:
    """h^0 on smooth curves of bidegree (3, 3)."""
    def test_ruling_sections(self, random_cubic: CurveContext) -> None:
        """h^0(n, 0) = n + 1 below k and 2k at k."""
        k = random_cubic.k
        for n in range(1, k):
            assert h0_dim(random_cubic, n, 0) == n + 1
        assert h0_dim(random_cubic, k, 0) == 2 * k

    def test_serre_duality(self, random_cubic: CurveContext) -> None:
        """h^1(n, 0) = h^0(k - 2 - n, k - 2) = (k - n - 1)(k - 1)."""
        k = random_cubic.k
        for n in range(1, k):
            assert h0_dim(random_cubic, k - 2 - n, k - 2) == (k - n - 1) * (k - 1)

    def test_riemann_roch(self, random_cubic: CurveContext) -> None:
        """h^0(a, b) - h^0(K - (a, b)) = (a + b)k + 1 - g for |a|, |b| <= 6."""
        k, g = random_cubic.k, random_cubic.genus
        bound = 6
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                chi = h0_dim(random_cubic, a, b) - h0_dim(random_cubic, k - 2 - a, k - 2 - b)
                assert chi == (a + b) * k + 1 - g, (a, b)

    @pytest.mark.parametrize("bundle", [(-5, 0), (-4, 0), (-2, 1), (0, -5)])
    def test_negative_degree(self, random_cubic: CurveContext, bundle: tuple[int, int]) -> None:
        """Bundles of negative degree have no sections in either chart."""
        assert h0_dim(random_cubic, *bundle) == 0
        dimension, basis = h0_curve(random_cubic, *bundle)
        assert dimension == 0
        assert basis.sections == []

    @pytest.mark.parametrize("bundle", [(1, 0), (3, 0), (0, 1), (2, -1), (-1, 4)])
    def test_basis_matches_dimension(self, random_cubic: CurveContext, bundle: tuple[int, int]) -> None:
        """h0_curve builds as many sections as h0_dim counts."""
        dimension, basis = h0_curve(random_cubic, *bundle)
        assert dimension == h0_dim(random_cubic, *bundle)
        assert basis.dimension == dimension

    def test_transposed_bundle(self, random_cubic: CurveContext) -> None:
        """Bundles with x-poles in the source group are computed on the transpose."""
        _, basis = h0_curve(random_cubic, -1, 4)
        assert basis.transposed

    @pytest.mark.slow
    def test_regression_many_curves(self, rationals: FieldSpec, sample_smooth) -> None:
        """The ruling and duality counts on twenty curves with k in {3, 4}."""
        curves = sample_smooth(rationals, 3, 12, seed=200) + sample_smooth(rationals, 4, 12, seed=300)
        assert len(curves) >= 20
        for ctx in curves:
            k = ctx.k
            for n in range(1, k):
                assert h0_dim(ctx, n, 0) == n + 1
                assert h0_dim(ctx, k - 2 - n, k - 2) == (k - n - 1) * (k - 1)
            assert h0_dim(ctx, k, 0) == 2 * k

    @pytest.mark.slow
    def test_riemann_roch_quartics(self, rationals: FieldSpec, sample_smooth) -> None:
        """Riemann-Roch sweep for a smooth (4, 4) curve."""
        ctx = sample_smooth(rationals, 4, 3, seed=400)[0]
        k, g = ctx.k, ctx.genus
        for a in range(-k - 2, k + 3):
            for b in range(-k - 2, k + 3):
                chi = h0_dim(ctx, a, b) - h0_dim(ctx, k - 2 - a, k - 2 - b)
                assert chi == (a + b) * k + 1 - g, (a, b)


class TestTorsionSections:
    """Sections of O_C(n, -n)."""
    def test_grid_curve_has_section(self, grid_cubic: CurveContext) -> None:
        """A grid curve carries a nowhere vanishing section of O_C(3, -3)."""
        sections = kernel_sections(grid_cubic, 3)
        assert len(sections) == 1
        section = sections[0]
        assert section.bidegree == (3, -3)
        assert section.clearing_exponent >= 3

    def test_no_section_below_k(self, random_cubic: CurveContext) -> None:
        """O_C(n, -n) has no sections for 0 < n < k."""
        assert kernel_sections(random_cubic, 2) == []

    @pytest.mark.parametrize("n", [3, 6])
    def test_parts_split_h_times_cocycle(self, grid_cubic: CurveContext, n: int) -> None:
        """part_a + part_b = h * w for the kernel cocycle w."""
        section = kernel_sections(grid_cubic, n)[0]
        basis = section.kernel_basis
        cocycle = LaurentForm(grid_cubic.field, basis.a, basis.b,
                              {(p, -r): w for (p, r), w in zip(basis.monomials, section.kernel_vector)})
        product = cocycle.times_form(grid_cubic.h)
        assert dict((section.part_a + section.part_b).items()) == dict(product.items())
        assert all(e >= 0 for (_, e), _ in section.part_a.items())
        assert all(e < 0 for (_, e), _ in section.part_b.items())

    @pytest.mark.parametrize("n", [3, 6])
    def test_parts_nonzero_on_curve(self, grid_cubic: CurveContext, n: int) -> None:
        """Neither chart representative vanishes modulo h."""
        section = kernel_sections(grid_cubic, n)[0]
        assert isinstance(section, ChartSection)
        assert not section.part_a.is_zero and not section.part_b.is_zero
        assert not _divisible(section.part_a.clear(section.clearing_exponent), grid_cubic.h)
        assert not _divisible(_clear_y0(section.part_b), grid_cubic.h)

    @pytest.mark.parametrize("n", [3, 6])
    def test_section_is_ratio_of_factors(self, grid_cubic: CurveContext, n: int) -> None:
        """s * f2^m = lambda * f1^m on C with m = n / k and lambda non-zero."""
        f1, _, f2, _ = grid_rank(grid_cubic.h).forms
        m = n // grid_cubic.k
        x_power, y_power = f1, f2
        for _ in range(m - 1):
            x_power, y_power = x_power * f1, y_power * f2
        for section in kernel_sections(grid_cubic, n):
            product = section_times_form(section, y_power)
            space = product.space
            target = space.coordinates(x_power.shifted(0, 0, 0, section.clearing_exponent))
            assert not product.is_zero
            assert any(target)
            assert linalg.rank([list(product.coordinates), target], space.dimension, grid_cubic.h.domain) == 1

    def test_section_times_form_degree(self, grid_cubic: CurveContext, rationals: FieldSpec) -> None:
        """The multiplier must have bidegree (0, n)."""
        section = kernel_sections(grid_cubic, 3)[0]
        with pytest.raises(DegreeError):
            section_times_form(section, BiForm.monomial(rationals, 0, 0, 0, 2))

    def test_section_is_injective_on_forms(self, grid_cubic: CurveContext, rationals: FieldSpec) -> None:
        """s * y0^3 is not zero on C."""
        section = kernel_sections(grid_cubic, 3)[0]
        product = section_times_form(section, BiForm.monomial(rationals, 0, 3, 0, 3))
        assert not product.is_zero


class TestQuotientSpace:
    """Forms modulo multiples of h."""
    def test_dimension(self, random_cubic: CurveContext) -> None:
        """Forms(3, 3) / h has dimension 15."""
        space = QuotientSpace(random_cubic.h, 3, 3)
        assert (space.ambient_dim, space.image_dim, space.dimension) == (16, 1, 15)

    def test_h_is_zero(self, random_cubic: CurveContext) -> None:
        """The curve equation has zero coordinates."""
        space = QuotientSpace(random_cubic.h, 3, 3)
        assert not any(space.coordinates(random_cubic.h))

    def test_lift_round_trip(self, random_cubic: CurveContext, rationals: FieldSpec) -> None:
        """Coordinates of a lift are the coordinates lifted."""
        space = QuotientSpace(random_cubic.h, 4, 3)
        form = BiForm.monomial(rationals, 4, 2, 4, 3) + BiForm.monomial(rationals, 0, 3, 4, 3)
        coordinates = space.coordinates(form)
        assert space.coordinates(space.lift(coordinates)) == coordinates

    def test_negative_bidegree(self, random_cubic: CurveContext) -> None:
        """Only forms of non-negative bidegree."""
        with pytest.raises(DegreeError):
            QuotientSpace(random_cubic.h, -1, 2)
