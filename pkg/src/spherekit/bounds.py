# -*- coding: utf-8 -*-
"""
Universal bounds on the potentials of weighted designs.

For a weighted (2m - 1 + nu)-design and a potential f with
``f^{(2m + nu)} >= 0`` on (-1, 1) the potential
``U_f(x) = sum w_i f(x . x_i)`` is bounded below by ``sum tau_j f(lambda_j)``
over the rule ``(n, m, 0, nu)``. For a (2m + nu)-design and
``f^{(2m + 1 + nu)} >= 0`` it is bounded above by the same sum over the rule
``(n, m, 1, nu)``. Both sums equal the integral of the Hermite interpolant
of f at the rule nodes, which lies below (above) f.

SPDX-License-Identifier: MIT
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from enum import Enum

import numpy as np
import pandas as pd
from numpy.polynomial import Polynomial
from scipy.special import poch
from scipy.stats import norm
from scipy.stats import qmc

from spherekit import designs
from spherekit import orthopoly
from spherekit import tools
from spherekit.exceptions import DomainError
from spherekit.exceptions import HypothesisError
from spherekit.exceptions import InternalConsistencyError
from spherekit.exceptions import InvalidParameterError
from spherekit.exceptions import PreconditionError
from spherekit.quadrature import build_rule

logger = logging.getLogger(__name__)

SIGN_TOL = 1e-12
ATTAINMENT_TOL = 1e-8
GAP_TOL = 1e-9
INTEGRAL_TOL = 1e-8
SIGN_SAMPLES = 200
SPHERE_SAMPLES = 1000
SIDES = ("lower", "upper")


class PotentialFunction:
    """
    A potential function with exact derivatives.

    Subclasses implement :meth:`deriv`; ``deriv(t, 0)`` is the value.
    ``finite_at_one`` and ``finite_at_minus_one`` describe the endpoints.
    """

    name = "potential"
    finite_at_one = True
    finite_at_minus_one = True

    def value(self, t):
        return self.deriv(t, 0)

    def __call__(self, t):
        return self.value(t)

    def deriv(self, t, k):
        raise NotImplementedError

    def params(self):
        return {}

    def describe(self):
        return {"family": self.name, **self.params()}


class ExpPotential(PotentialFunction):
    """``exp(c t) + offset``."""

    name = "exp"

    def __init__(self, c=1.0, offset=0.0):
        self.c = float(c)
        self.offset = float(offset)

    def deriv(self, t, k):
        t = np.asarray(t, dtype=float)
        out = self.c**k * np.exp(self.c * t)
        if k == 0:
            out = out + self.offset
        return out

    def params(self):
        return {"c": self.c, "offset": self.offset}


class RieszPotential(PotentialFunction):
    """
    ``(a - 2 t)**(-s / 2)``.

    With ``a = 2`` this is the Riesz s-kernel ``|x - y|**(-s)`` of unit
    vectors, infinite at ``t = 1``. Larger ``a`` gives a kernel that is
    finite on [-1, 1].
    """

    name = "riesz"

    def __init__(self, a=2.0, s=1.0):
        if a < 2:
            raise DomainError(f"Riesz potentials need a >= 2, got a={a}.")
        if s <= 0:
            raise DomainError(f"Riesz potentials need s > 0, got s={s}.")
        self.a = float(a)
        self.s = float(s)
        self.finite_at_one = self.a > 2

    def deriv(self, t, k):
        t = np.asarray(t, dtype=float)
        base = self.a - 2 * t
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (
                2.0**k
                * poch(self.s / 2, k)
                * np.where(base > 0, base, 0.0) ** (-self.s / 2 - k)
            )
        return np.where(base > 0, out, np.inf)

    def params(self):
        return {"a": self.a, "s": self.s}


class PolynomialPotential(PotentialFunction):
    """A polynomial given by ascending coefficients."""

    name = "polynomial"

    def __init__(self, coeffs):
        self.poly = Polynomial(coeffs)

    def deriv(self, t, k):
        return self.poly.deriv(k)(np.asarray(t, dtype=float))

    def params(self):
        return {"coeffs": [float(c) for c in self.poly.coef]}


def _falling(p, k):
    """``p (p - 1) .. (p - k + 1)``."""
    return poch(p - k + 1, k)


class ShiftedPowerPotential(PotentialFunction):
    """``(1 + t)**p`` with ``p > 0``."""

    name = "shifted-power"

    def __init__(self, p):
        if p <= 0:
            raise DomainError(f"The exponent must be positive, got p={p}.")
        self.p = float(p)

    def deriv(self, t, k):
        t = np.asarray(t, dtype=float)
        if self.p == int(self.p) and k > self.p:
            return np.zeros_like(t)
        with np.errstate(divide="ignore"):
            return _falling(self.p, k) * (1 + t) ** (self.p - k)

    def params(self):
        return {"p": self.p}


class PowerPotential(PotentialFunction):
    """
    ``t**q`` on [0, 1].

    Applied to squared dot products, ``q = p / 2`` gives the p-frame
    potential ``|x . y|**p``.
    """

    name = "power"

    def __init__(self, q):
        if q <= 0:
            raise DomainError(f"The exponent must be positive, got q={q}.")
        self.q = float(q)

    def deriv(self, t, k):
        t = np.asarray(t, dtype=float)
        if self.q == int(self.q) and k > self.q:
            return np.zeros_like(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return _falling(self.q, k) * np.abs(t) ** (self.q - k)

    def params(self):
        return {"q": self.q}


POTENTIALS = {
    "exp": ExpPotential,
    "riesz": RieszPotential,
    "polynomial": PolynomialPotential,
    "shifted-power": ShiftedPowerPotential,
    "power": PowerPotential,
}


def make_potential(family, **params):
    """
    Build a potential by family name.

    Examples
    --------
    >>> make_potential("riesz", a=2.4, s=1).describe()
    {'family': 'riesz', 'a': 2.4, 's': 1.0}
    """
    try:
        cls = POTENTIALS[family]
    except KeyError:
        raise InvalidParameterError(
            f"Unknown potential family '{family}'. "
            f"Use one of {sorted(POTENTIALS)}."
        ) from None
    return cls(**params)


class SignStatus(str, Enum):
    STRICT = "strict"
    NONNEGATIVE = "nonnegative"
    VIOLATED = "violated"


@dataclass(frozen=True)
class SignCheck:
    status: SignStatus
    minimum: float
    witness: float = None

    @property
    def holds(self):
        return self.status is not SignStatus.VIOLATED


def chebyshev_grid(samples, interval=(-1.0, 1.0)):
    """Chebyshev points of the first kind, strictly inside the interval."""
    lo, hi = interval
    i = np.arange(1, samples + 1)
    x = np.cos((2 * i - 1) * np.pi / (2 * samples))[::-1]
    return (lo + hi) / 2 + (hi - lo) / 2 * x


def derivative_sign_check(
    f, order, samples=SIGN_SAMPLES, interval=(-1.0, 1.0)
):
    """
    Sample the sign of a derivative of f.

    Parameters
    ----------
    f : PotentialFunction
    order : int
        Order of the derivative.
    samples : int
        Number of Chebyshev-spaced interior sample points.
    interval : tuple
        Open interval to sample.

    Returns
    -------
    SignCheck
        STRICT if the minimum exceeds 1e-12, NONNEGATIVE if it is at least
        -1e-12, VIOLATED (with the worst sample as witness) otherwise.

    Examples
    --------
    >>> derivative_sign_check(ExpPotential(), 5).status.value
    'strict'
    >>> derivative_sign_check(PolynomialPotential([0, 0, -1]), 2).status.value
    'violated'
    """
    t = chebyshev_grid(samples, interval)
    values = np.asarray(f.deriv(t, order), dtype=float)
    values = np.where(np.isnan(values), -np.inf, values)
    worst = int(np.argmin(values))
    minimum = float(values[worst])
    if minimum > SIGN_TOL:
        return SignCheck(SignStatus.STRICT, minimum)
    if minimum >= -SIGN_TOL:
        return SignCheck(SignStatus.NONNEGATIVE, minimum)
    return SignCheck(SignStatus.VIOLATED, minimum, float(t[worst]))


def _endpoint_flags(f, node):
    if node == 1.0:
        return f.finite_at_one
    if node == -1.0:
        return f.finite_at_minus_one
    return True


def _values_at_nodes(f, rule):
    values = []
    for node in rule.nodes:
        value = float(f.value(node)) if _endpoint_flags(f, node) else np.inf
        if not np.isfinite(value):
            raise DomainError(
                f"The potential {f.describe()} is not finite at the "
                f"node {node}."
            )
        values.append(value)
    return np.array(values)


def hermite_interpolant(f, rule):
    """
    Hermite interpolant of f at the nodes of a rule.

    The polynomial matches f and f' at the interior nodes and f at the
    endpoint nodes, so its degree is the exactness degree of the rule.

    Parameters
    ----------
    f : PotentialFunction
    rule : QuadratureRule

    Returns
    -------
    numpy.polynomial.Polynomial

    Raises
    ------
    DomainError
        If f is infinite at a node.
    """
    values = _values_at_nodes(f, rule)
    inner = rule.interior_nodes
    ends = [x for x in rule.nodes if x in (-1.0, 1.0)]
    end_values = [values[list(rule.nodes).index(x)] for x in ends]
    inner_values = values[rule.nu : len(rule.nodes) - rule.mu]
    slopes = [float(f.deriv(x, 1)) for x in inner]
    return orthopoly.hermite_interpolate(
        list(inner) + ends, list(inner_values) + end_values, slopes
    )


def _side_parameters(m, nu, side):
    if side not in SIDES:
        raise InvalidParameterError(
            f"side must be 'lower' or 'upper', got '{side}'."
        )
    if side == "lower":
        return 0, 2 * m + nu, 2 * m - 1 + nu
    return 1, 2 * m + 1 + nu, 2 * m + nu


def certified_rule(n, m, nu, side, f, force=False, samples=SIGN_SAMPLES):
    """
    The rule behind a universal bound and whether f meets its
    derivative hypothesis.

    Returns
    -------
    tuple
        ``(rule, certified)``.

    Raises
    ------
    HypothesisError
        If the sign check fails and ``force`` is False.
    """
    mu, order, _ = _side_parameters(m, nu, side)
    if side == "upper" and not f.finite_at_one:
        raise DomainError(
            f"The upper bound needs a potential finite at 1, "
            f"got {f.describe()}."
        )
    rule = build_rule(n, m, mu, nu)
    check = derivative_sign_check(f, order, samples)
    if not check.holds:
        message = (
            f"Derivative of order {order} of {f.describe()} is "
            f"{check.minimum} at t={check.witness}; the {side} bound is not "
            "certified."
        )
        if not force:
            raise HypothesisError(message)
        logger.warning("UNCERTIFIED: %s", message)
    return rule, check.holds


def universal_bound(n, m, nu, side, f, force=False, samples=SIGN_SAMPLES):
    """
    Universal lower or upper bound of the potential of a design.

    Parameters
    ----------
    n : int
        Dimension.
    m : int
        Number of interior nodes of the rule.
    nu : int
        1 to include the node -1.
    side : str
        ``"lower"`` (designs of strength ``2m - 1 + nu``) or ``"upper"``
        (strength ``2m + nu``).
    f : PotentialFunction
    force : bool
        Return the sum even if the derivative sign check fails.

    Returns
    -------
    float

    Examples
    --------
    >>> value = universal_bound(3, 1, 0, "upper", ExpPotential())
    >>> bool(abs(value - (np.e / 4 + 0.75 * np.exp(-1 / 3))) < 1e-12)
    True
    """
    rule, _ = certified_rule(n, m, nu, side, f, force, samples)
    values = _values_at_nodes(f, rule)
    bound = rule.apply(values)
    expansion = orthopoly.expand_in_gegenbauer(hermite_interpolant(f, rule), n)
    scale = max(1.0, float(np.max(np.abs(values))))
    if abs(expansion.coeffs[0] - bound) > INTEGRAL_TOL * scale:
        raise InternalConsistencyError(
            f"The rule sum {bound} differs from the integral "
            f"{expansion.coeffs[0]} of the interpolant."
        )
    return bound


def _check_unit(x):
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1) > designs.COINCIDENCE_TOL:
        raise PreconditionError(
            f"Expected a unit vector, got norm {np.linalg.norm(x)!r}."
        )
    return x


def _potential_rows(points, code, f):
    dots = np.clip(points @ code.points.T, -1.0, 1.0)
    values = np.asarray(f.value(dots), dtype=float)
    return values @ code.weights


def potential(x, code, f):
    """
    Weighted potential ``sum w_i f(x . x_i)`` of a code at a point.

    Infinite values of f give an infinite potential.

    Examples
    --------
    >>> code = designs.equi_weighted([[1.0, 0.0], [0.0, 1.0]])
    >>> float(potential([1.0, 0.0], code, PolynomialPotential([2.0])))
    2.0
    """
    x = _check_unit(x)
    return float(_potential_rows(x[None, :], code, f)[0])


def potentials(points, code, f, chunk=256):
    """Potentials at many points, evaluated in chunks."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    blocks = np.array_split(points, max(1, -(-len(points) // chunk)))
    return np.concatenate(
        tools.parallel_map(lambda b: _potential_rows(b, code, f), blocks)
    )


def sphere_samples(n, count=SPHERE_SAMPLES, seed=0):
    """
    Deterministic quasi-random points on the sphere S^{n-1}.

    Scrambled Halton points are mapped through the normal quantile function
    and normalised.
    """
    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    u = np.clip(sampler.random(count), 1e-12, 1 - 1e-12)
    g = norm.ppf(u)
    return g / np.linalg.norm(g, axis=1)[:, None]


@dataclass(frozen=True, eq=False)
class BoundReport:
    """
    Universal bound with the observed potentials of a code.

    Gaps are ``U_f(x) - bound``; nonnegative for lower bounds and
    nonpositive for upper bounds when the bound is certified.
    """

    side: str
    bound_value: float
    nodes: np.ndarray
    weights: np.ndarray
    certified: bool
    potential_description: dict
    min_potential: float
    max_potential: float
    attaining_points: np.ndarray
    attaining_gaps: np.ndarray
    attaining_matches_rule: list
    candidate_frame: pd.DataFrame = field(repr=False)
    evaluated: int = 0
    skipped: int = 0

    def to_dict(self):
        return {
            "side": self.side,
            "bound": self.bound_value,
            "certified": self.certified,
            "potential": self.potential_description,
            "nodes": list(self.nodes),
            "weights": list(self.weights),
            "min_potential": self.min_potential,
            "max_potential": self.max_potential,
            "attaining_points": [list(p) for p in self.attaining_points],
            "attaining_gaps": list(self.attaining_gaps),
            "attaining_matches_rule": list(self.attaining_matches_rule),
            "evaluated": self.evaluated,
            "skipped_infinite": self.skipped,
        }

    def to_text(self):
        summary = self.to_dict()
        if not self.certified:
            summary["status"] = "UNCERTIFIED"
        return "\n\n".join(
            [tools.mapping_to_text(summary), tools.frame_to_text(
                self.candidate_frame
            )]
        )


def attainment_report(
    code,
    m,
    nu,
    side,
    f,
    candidates=None,
    samples=SPHERE_SAMPLES,
    force=False,
    tol=ATTAINMENT_TOL,
):
    """
    Compare the potential of a design with its universal bound.

    Parameters
    ----------
    code : WeightedCode
        A design of strength ``2m - 1 + nu`` (lower) or ``2m + nu``
        (upper).
    m, nu : int
        Rule parameters.
    side : str
        ``"lower"`` or ``"upper"``.
    f : PotentialFunction
    candidates : array_like
        Points checked in addition to ``samples`` quasi-random points.
        Default: :func:`spherekit.designs.default_candidates`.
    samples : int
        Number of quasi-random sphere points.
    force : bool
        Report even if the derivative hypothesis fails.
    tol : float
        Distance to the bound below which a point attains it.

    Returns
    -------
    BoundReport

    Raises
    ------
    PreconditionError
        If the code does not have the required strength.
    """
    _, _, required = _side_parameters(m, nu, side)
    strength, _ = designs.design_strength(code, max_m=required)
    if strength < required:
        raise PreconditionError(
            f"The {side} bound with m={m}, nu={nu} needs a "
            f"{required}-design, the code is a {strength}-design."
        )
    rule, certified = certified_rule(code.dim, m, nu, side, f, force)
    bound = rule.apply(_values_at_nodes(f, rule))

    if candidates is None:
        candidates = designs.default_candidates(code)
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    candidates = candidates / np.linalg.norm(candidates, axis=1)[:, None]
    points = np.vstack([candidates, sphere_samples(code.dim, samples)])
    values = potentials(points, code, f)

    finite = np.isfinite(values)
    skipped = int((~finite).sum())
    if skipped:
        logger.warning(
            "Skipped %d points with infinite potential.", skipped
        )
    if finite.any():
        lowest = float(values[finite].min())
        highest = float(values[finite].max())
    else:
        logger.warning(
            "The potential is infinite at all %d points, no extremes.",
            len(points),
        )
        lowest = highest = np.nan
    gaps = values - bound
    if certified and finite.any():
        worst = lowest - bound if side == "lower" else bound - highest
        if worst < -GAP_TOL:
            raise InternalConsistencyError(
                f"The potential crosses the certified {side} bound by "
                f"{-worst}."
            )
    hits = np.flatnonzero(finite & (np.abs(gaps) <= tol))
    matches = []
    for idx in hits:
        spectrum = designs.dot_spectrum(code, points[idx])
        matches.append(
            spectrum.size == len(rule.nodes)
            and bool(
                np.allclose(spectrum.values, rule.nodes, rtol=0, atol=tol)
                and np.allclose(
                    spectrum.masses, rule.weights, rtol=0, atol=tol
                )
            )
        )
    frame = pd.DataFrame(
        {
            "potential": values[: len(candidates)],
            "gap": gaps[: len(candidates)],
        }
    )
    frame.index.name = "candidate"
    logger.info(
        "%s bound %.12g, attained at %d of %d points.",
        side,
        bound,
        len(hits),
        len(points),
    )
    return BoundReport(
        side=side,
        bound_value=bound,
        nodes=rule.nodes,
        weights=rule.weights,
        certified=certified,
        potential_description=f.describe(),
        min_potential=lowest,
        max_potential=highest,
        attaining_points=points[hits],
        attaining_gaps=gaps[hits],
        attaining_matches_rule=matches,
        candidate_frame=frame,
        evaluated=len(points),
        skipped=skipped,
    )


def _arc(start, stop, num):
    start = _check_unit(start)
    stop = _check_unit(stop)
    cos = float(np.clip(np.dot(start, stop), -1.0, 1.0))
    ortho = stop - cos * start
    if np.linalg.norm(ortho) < 1e-12:
        # antipodal (or equal) ends: turn towards the least aligned axis
        axis = np.eye(len(start))[int(np.argmin(np.abs(start)))]
        ortho = axis - np.dot(axis, start) * start
    ortho = ortho / np.linalg.norm(ortho)
    angle = np.arccos(cos)
    param = np.linspace(0.0, 1.0, num)
    arc = (
        np.cos(angle * param)[:, None] * start
        + np.sin(angle * param)[:, None] * ortho
    )
    return param, arc


def potential_curve(code, f, start, stop=None, bound=np.nan, num=101):
    """
    Potential along the great circle arc from ``start`` to ``stop``.

    Parameters
    ----------
    code : WeightedCode
    f : PotentialFunction
    start : array_like
        Unit vector where the arc begins.
    stop : array_like
        Unit vector where the arc ends. Default: the antipode of ``start``.
    bound : float
        Value written to the ``bound`` column.
    num : int
        Number of points.

    Returns
    -------
    pandas.DataFrame
        Columns ``param`` (fraction of the arc), ``potential_or_energy`` and
        ``bound``.
    """
    start = np.asarray(start, dtype=float)
    if stop is None:
        stop = -start
    param, arc = _arc(start, stop, num)
    return pd.DataFrame(
        {
            "param": param,
            "potential_or_energy": potentials(arc, code, f),
            "bound": np.full(num, bound, dtype=float),
        }
    )
