import numpy as np
import pytest

from spherekit import bounds
from spherekit import catalog
from spherekit import designs
from spherekit import orthopoly
from spherekit.bounds import ExpPotential
from spherekit.bounds import PolynomialPotential
from spherekit.bounds import PowerPotential
from spherekit.bounds import RieszPotential
from spherekit.bounds import ShiftedPowerPotential
from spherekit.exceptions import DomainError
from spherekit.exceptions import HypothesisError
from spherekit.exceptions import InvalidParameterError
from spherekit.exceptions import PreconditionError


class TestPotentials:
    def test_exp_derivatives(self):
        f = ExpPotential(c=2.0, offset=1.0)
        assert np.isclose(f(0.0), 2.0)
        assert np.isclose(f.deriv(0.5, 3), 8 * np.exp(1.0))

    def test_riesz_is_distance_kernel(self):
        f = RieszPotential(a=2, s=1)
        x = np.array([1.0, 0.0])
        y = np.array([0.0, 1.0])
        assert np.isclose(f(x @ y), 1 / np.linalg.norm(x - y))
        assert not f.finite_at_one
        assert np.isinf(f(1.0))

    def test_riesz_derivative(self):
        f = RieszPotential(a=2.5, s=2)
        h = 1e-6
        numeric = (f(0.3 + h) - f(0.3 - h)) / (2 * h)
        assert np.isclose(f.deriv(0.3, 1), numeric, rtol=1e-6)
        assert f.finite_at_one

    def test_riesz_domain(self):
        with pytest.raises(DomainError, match="a >= 2"):
            RieszPotential(a=1.5)

    def test_polynomial(self):
        f = PolynomialPotential([1.0, 0.0, 3.0])
        assert np.isclose(f.deriv(2.0, 1), 12.0)
        assert f.describe() == {
            "family": "polynomial",
            "coeffs": [1.0, 0.0, 3.0],
        }

    def test_power_derivatives_vanish(self):
        f = bounds.PowerPotential(2)
        assert f.deriv(0.4, 3) == 0
        assert np.isclose(f.deriv(0.4, 1), 0.8)

    def test_shifted_power(self):
        f = bounds.ShiftedPowerPotential(1.5)
        assert np.isclose(f(0.0), 1.0)
        assert np.isclose(f.deriv(0.0, 2), 0.75)

    def test_make_potential(self):
        assert isinstance(bounds.make_potential("exp", c=1.0), ExpPotential)
        with pytest.raises(InvalidParameterError, match="Unknown potential"):
            bounds.make_potential("gauss")


class TestSignCheck:
    def test_strict(self):
        check = bounds.derivative_sign_check(ExpPotential(), 4)
        assert check.status is bounds.SignStatus.STRICT
        assert check.holds

    def test_nonnegative(self):
        check = bounds.derivative_sign_check(PolynomialPotential([0, 1]), 2)
        assert check.status is bounds.SignStatus.NONNEGATIVE

    def test_violated_has_witness(self):
        check = bounds.derivative_sign_check(ExpPotential(c=-1.0), 3)
        assert not check.holds
        assert -1 < check.witness < 1
        assert check.minimum < 0

    def test_grid_inside_interval(self):
        grid = bounds.chebyshev_grid(10, (0.0, 1.0))
        assert len(grid) == 10
        assert grid.min() > 0 and grid.max() < 1
        assert np.all(np.diff(grid) > 0)


class TestUniversalBound:
    def test_pyramid_upper_value(self):
        value = bounds.universal_bound(3, 1, 0, "upper", ExpPotential())
        assert np.isclose(value, np.e / 4 + 0.75 * np.exp(-1 / 3))

    def test_pyramid_lower_value(self):
        value = bounds.universal_bound(3, 1, 1, "lower", ExpPotential())
        assert np.isclose(value, np.exp(-1) / 4 + 0.75 * np.exp(1 / 3))

    def test_interpolant_matches_potential(self):
        f = ExpPotential()
        rule, _ = bounds.certified_rule(4, 2, 1, "upper", f)
        poly = bounds.hermite_interpolant(f, rule)
        assert poly.degree() == rule.exactness_degree
        np.testing.assert_allclose(poly(rule.nodes), f(rule.nodes))
        inner = rule.interior_nodes
        np.testing.assert_allclose(poly.deriv()(inner), f.deriv(inner, 1))

    def test_bound_is_integral_of_interpolant(self):
        f = ExpPotential(c=0.7)
        rule, _ = bounds.certified_rule(5, 2, 0, "lower", f)
        poly = bounds.hermite_interpolant(f, rule)
        t, w = orthopoly.gauss_rule(orthopoly.gegenbauer(5), 6)
        assert np.isclose(
            bounds.universal_bound(5, 2, 0, "lower", f), np.dot(w, poly(t))
        )

    def test_hypothesis_failure(self):
        f = ExpPotential(c=-1.0)
        with pytest.raises(HypothesisError, match="not certified"):
            bounds.universal_bound(3, 1, 0, "upper", f)

    def test_forced_bound_is_reported(self, caplog):
        f = ExpPotential(c=-1.0)
        value = bounds.universal_bound(3, 1, 0, "upper", f, force=True)
        assert np.isclose(value, np.exp(-1) / 4 + 0.75 * np.exp(1 / 3))
        assert "UNCERTIFIED" in caplog.text

    def test_upper_bound_needs_finite_value_at_one(self):
        with pytest.raises(DomainError, match="finite at 1"):
            bounds.universal_bound(3, 1, 0, "upper", RieszPotential())

    def test_lower_riesz_bound(self):
        f = RieszPotential(a=2, s=1)
        value = bounds.universal_bound(3, 2, 0, "lower", f)
        root = 1 / np.sqrt(3)
        expected = 0.5 * (f(root) + f(-root))
        assert np.isclose(value, expected)

    def test_unknown_side(self):
        with pytest.raises(InvalidParameterError, match="side"):
            bounds.universal_bound(3, 1, 0, "middle", ExpPotential())


class TestSquarePyramid:
    @classmethod
    def setup_class(cls):
        cls.code = catalog.square_pyramid()
        cls.f = ExpPotential()
        cls.upper = bounds.attainment_report(
            cls.code, 1, 0, "upper", cls.f
        )
        cls.lower = bounds.attainment_report(
            cls.code, 1, 1, "lower", cls.f
        )

    def test_upper_bound_value(self):
        assert np.isclose(
            self.upper.bound_value, np.e / 4 + 0.75 * np.exp(-1 / 3)
        )
        assert self.upper.certified
        assert self.upper.max_potential <= self.upper.bound_value + 1e-9

    def test_upper_bound_attained_at_apex_only(self):
        points = self.upper.attaining_points
        assert len(points) >= 1
        np.testing.assert_allclose(
            points, np.tile([0.0, 0.0, 1.0], (len(points), 1)), atol=1e-8
        )
        assert np.all(np.abs(self.upper.attaining_gaps) <= 1e-8)
        assert all(self.upper.attaining_matches_rule)

    def test_lower_bound_value(self):
        assert np.isclose(
            self.lower.bound_value, np.exp(-1) / 4 + 0.75 * np.exp(1 / 3)
        )
        assert self.lower.min_potential >= self.lower.bound_value - 1e-9

    def test_lower_bound_attained_at_antipode_of_apex(self):
        points = self.lower.attaining_points
        assert len(points) >= 1
        np.testing.assert_allclose(
            points, np.tile([0.0, 0.0, -1.0], (len(points), 1)), atol=1e-8
        )

    def test_report_counts(self):
        assert self.upper.evaluated == (
            len(self.upper.candidate_frame) + bounds.SPHERE_SAMPLES
        )
        assert self.upper.skipped == 0

    def test_report_dict(self):
        data = self.upper.to_dict()
        assert data["side"] == "upper"
        assert data["potential"] == {"family": "exp", "c": 1.0, "offset": 0.0}
        np.testing.assert_allclose(data["nodes"], [-1 / 3, 1.0])

    def test_insufficient_strength(self):
        with pytest.raises(PreconditionError, match="3-design"):
            bounds.attainment_report(self.code, 2, 0, "lower", self.f)


class TestWeightedHypercube:
    @pytest.mark.parametrize("n", [4, 5, 6])
    @pytest.mark.parametrize("share", [0.5, 0.25, 0.8])
    def test_lower_bound_attained_at_axes(self, n, share):
        total = 2.0 ** (1 - n)
        code = catalog.cube(n, w0=share * total, w1=(1 - share) * total)
        f = ExpPotential()
        eye = np.eye(n)
        axes = np.vstack([eye, -eye])
        report = bounds.attainment_report(
            code, 2, 0, "lower", f, candidates=axes, samples=200
        )
        root = 1 / np.sqrt(n)
        assert np.isclose(report.bound_value, 0.5 * (f(-root) + f(root)))
        gaps = report.candidate_frame["gap"].to_numpy()
        assert np.all(np.abs(gaps) <= 1e-8)
        assert len(report.attaining_points) >= 2 * n
        assert report.min_potential >= report.bound_value - 1e-9


class TestSampling:
    def test_sphere_samples(self):
        points = bounds.sphere_samples(4, 50)
        assert points.shape == (50, 4)
        np.testing.assert_allclose(np.linalg.norm(points, axis=1), 1.0)

    def test_samples_are_deterministic(self):
        np.testing.assert_array_equal(
            bounds.sphere_samples(3, 20), bounds.sphere_samples(3, 20)
        )

    def test_potential_of_design_average(self):
        # a 2-design integrates t**2 exactly
        code = catalog.simplex(3)
        f = PolynomialPotential([0.0, 0.0, 1.0])
        values = bounds.potentials(bounds.sphere_samples(3, 30), code, f)
        np.testing.assert_allclose(values, 1 / 3)

    def test_potential_requires_unit_vector(self):
        with pytest.raises(PreconditionError):
            bounds.potential(
                [1.0, 1.0, 0.0], catalog.simplex(3), ExpPotential()
            )

    def test_infinite_potential_at_code_point(self):
        code = catalog.simplex(3)
        value = bounds.potential(code.points[0], code, RieszPotential())
        assert value > 1e6


class TestPotentialCurve:
    def test_curve_columns_and_ends(self):
        code = catalog.square_pyramid()
        f = ExpPotential()
        frame = bounds.potential_curve(
            code, f, [0.0, 0.0, 1.0], bound=1.5, num=11
        )
        assert list(frame.columns) == ["param", "potential_or_energy", "bound"]
        assert len(frame) == 11
        assert np.isclose(
            frame["potential_or_energy"].iloc[0],
            bounds.potential([0.0, 0.0, 1.0], code, f),
        )
        assert np.isclose(
            frame["potential_or_energy"].iloc[-1],
            bounds.potential([0.0, 0.0, -1.0], code, f),
        )
        assert (frame["bound"] == 1.5).all()

    def test_curve_between_points(self):
        code = catalog.cross_polytope(3)
        frame = bounds.potential_curve(
            code, ExpPotential(), [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], num=5
        )
        assert np.isclose(frame["param"].iloc[-1], 1.0)
        assert frame["bound"].isna().all()


DESIGNS = [
    (catalog.square_pyramid, 2),
    (lambda: catalog.simplex(3), 2),
    (lambda: catalog.cross_polytope(4), 3),
    (catalog.icosahedron, 5),
    (catalog.cell24, 5),
    (lambda: catalog.regular_ngon(7), 6),
]

SWEEP_POTENTIALS = [
    ExpPotential(),
    RieszPotential(a=2.4, s=1),
    ShiftedPowerPotential(6),
]


def lower_parameters(strength):
    nu = 1 - strength % 2
    return (strength + 1 - nu) // 2, nu


def upper_parameters(strength):
    nu = strength % 2
    return (strength - nu) // 2, nu


class TestBoundSweep:
    @pytest.mark.parametrize("make,strength", DESIGNS)
    @pytest.mark.parametrize("f", SWEEP_POTENTIALS, ids=lambda f: f.name)
    def test_potentials_between_bounds(self, make, strength, f):
        code = make()
        points = np.vstack([code.points, bounds.sphere_samples(code.dim)])
        values = bounds.potentials(points, code, f)
        assert np.all(np.isfinite(values))
        m, nu = lower_parameters(strength)
        lower = bounds.universal_bound(code.dim, m, nu, "lower", f)
        assert values.min() >= lower - 1e-9
        m, nu = upper_parameters(strength)
        if m >= 1:
            upper = bounds.universal_bound(code.dim, m, nu, "upper", f)
            assert values.max() <= upper + 1e-9
            assert lower <= upper

    @pytest.mark.parametrize("f", SWEEP_POTENTIALS, ids=lambda f: f.name)
    def test_interpolant_sandwich(self, f):
        t = np.linspace(-1, 1, 200)
        below, _ = bounds.certified_rule(3, 2, 0, "lower", f)
        above, _ = bounds.certified_rule(3, 1, 0, "upper", f)
        assert (below.mu, below.nu) == (0, 0)
        assert (above.mu, above.nu) == (1, 0)
        scale = 1e-10 * np.maximum(1.0, np.abs(f(t)))
        assert np.all(bounds.hermite_interpolant(f, below)(t) <= f(t) + scale)
        assert np.all(bounds.hermite_interpolant(f, above)(t) >= f(t) - scale)

    @pytest.mark.parametrize("n,m,nu", [(3, 1, 1), (4, 2, 0), (5, 2, 1)])
    def test_bound_equals_interpolant_integral(self, n, m, nu):
        f = ExpPotential(c=0.5)
        rule, _ = bounds.certified_rule(n, m, nu, "upper", f)
        expansion = orthopoly.expand_in_gegenbauer(
            bounds.hermite_interpolant(f, rule), n
        )
        assert np.isclose(
            bounds.universal_bound(n, m, nu, "upper", f),
            expansion.coeffs[0],
            rtol=0,
            atol=1e-12,
        )


class TestDerivativesAgainstDifferences:
    h = 1e-5

    @pytest.mark.parametrize(
        "f,interval",
        [
            (ExpPotential(c=1.3, offset=0.2), (-1.0, 1.0)),
            (RieszPotential(a=2, s=1), (-1.0, 0.9)),
            (RieszPotential(a=2.4, s=3), (-1.0, 1.0)),
            (PolynomialPotential([1.0, -2.0, 0.5, 3.0]), (-1.0, 1.0)),
            (ShiftedPowerPotential(2.5), (-0.9, 1.0)),
            (PowerPotential(1.5), (0.1, 1.0)),
        ],
        ids=lambda value: getattr(value, "name", None),
    )
    def test_central_differences(self, f, interval):
        assert f.name in bounds.POTENTIALS
        t = bounds.chebyshev_grid(50, interval)
        for k in range(1, 5):
            difference = (
                f.deriv(t + self.h, k - 1) - f.deriv(t - self.h, k - 1)
            ) / (2 * self.h)
            np.testing.assert_allclose(
                difference, f.deriv(t, k), rtol=1e-6, atol=1e-9
            )

    def test_every_family_is_covered(self):
        assert sorted(bounds.POTENTIALS) == [
            "exp",
            "polynomial",
            "power",
            "riesz",
            "shifted-power",
        ]


class TestAllPotentialsInfinite:
    def test_report_without_finite_values(self, monkeypatch, caplog):
        monkeypatch.setattr(
            bounds, "sphere_samples", lambda n, count: np.empty((0, n))
        )
        code = designs.equi_weighted([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
        report = bounds.attainment_report(
            code,
            1,
            0,
            "lower",
            RieszPotential(a=2, s=1),
            candidates=code.points,
        )
        assert report.skipped == report.evaluated == 2
        assert np.isnan(report.min_potential)
        assert np.isnan(report.max_potential)
        assert len(report.attaining_points) == 0
        assert "infinite at all 2 points" in caplog.text
