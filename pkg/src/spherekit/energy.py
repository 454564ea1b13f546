# -*- coding: utf-8 -*-
"""
Energies of weighted codes with potentials of the squared dot product.

The f-energy of a weighted code is ``sum w_i w_j f((x_i . x_j)**2)`` over
all ordered pairs, diagonal included. With ``f(t) = t**(p/2)`` it is the
p-frame energy.

The lower bound implemented here applies to potentials with
``f^{(k)} >= 0`` on (0, 1) for ``k = 1..m``. It is built from a reference
code whose dot products other than +-1 lie in a set ``A`` of ``m`` values
symmetric about 0 and which is an (m - 1, m - 1)-design. With
``beta_i = 2 alpha_i**2 - 1`` for the positive values of ``A`` (and -1 for
the value 0 if ``m`` is odd), ``g(t) = f((t + 1) / 2)`` is interpolated by
a polynomial p of degree m - 1 matching g at all ``beta_i`` and ``g'`` at
the positive ones. Writing ``p(2 u**2 - 1) = sum d_k P_{2k}^{(n)}(u)``, all
``d_k`` with ``k >= 1`` are nonnegative and every code with ``theta`` at
least that of the reference has energy at least
``d_0 + (f(1) - p(1)) * theta(reference)``, which is the energy of the
reference.

SPDX-License-Identifier: MIT
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from numpy.polynomial import Polynomial

from spherekit import designs
from spherekit import orthopoly
from spherekit import tools
from spherekit.bounds import PotentialFunction
from spherekit.bounds import PowerPotential
from spherekit.bounds import derivative_sign_check
from spherekit.exceptions import HypothesisError
from spherekit.exceptions import InternalConsistencyError
from spherekit.exceptions import InvalidDimensionError
from spherekit.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-9
COEFFICIENT_TOL = 1e-10
EQUALITY_TOL = 1e-9
SYMMETRY_TOL = 1e-12
MODES = ("general", "antipodal", "plain")


class SquaredPotential:
    """
    A potential f on [0, 1], applied to squared dot products.

    Parameters
    ----------
    f : PotentialFunction
        Function on [0, 1] with exact derivatives.
    """

    def __init__(self, f):
        if isinstance(f, SquaredPotential):
            f = f.f
        self.f = f

    def value(self, t):
        return self.f.value(t)

    def deriv(self, t, k):
        return self.f.deriv(t, k)

    def g(self, t):
        """``f((t + 1) / 2)`` on [-1, 1]."""
        return self.f.value((np.asarray(t, dtype=float) + 1) / 2)

    def g_deriv(self, t, k):
        """k-th derivative of :meth:`g`."""
        return self.f.deriv((np.asarray(t, dtype=float) + 1) / 2, k) / 2**k

    def describe(self):
        return self.f.describe()


def _squared(f):
    if isinstance(f, SquaredPotential):
        return f
    if isinstance(f, PotentialFunction):
        return SquaredPotential(f)
    raise InvalidParameterError(f"Expected a potential, got {f!r}.")


def _squared_cosines(code):
    # extended precision, unit diagonal
    x = code.points.astype(np.longdouble)
    x /= np.sqrt(np.sum(x * x, axis=1))[:, None]
    squares = np.clip((x @ x.T) ** 2, 0, 1)
    np.fill_diagonal(squares, 1)
    return squares


def energy(code, f):
    """
    The f-energy ``sum w_i w_j f((x_i . x_j)**2)``.

    Parameters
    ----------
    code : WeightedCode
    f : SquaredPotential or PotentialFunction

    Returns
    -------
    float
    """
    f = _squared(f)
    w = code.weights.astype(np.longdouble)
    terms = np.outer(w, w) * f.value(_squared_cosines(code))
    return float(np.sum(terms))


def p_frame_energy(code, p):
    """
    The p-frame energy ``sum w_i w_j |x_i . x_j|**p``.

    Examples
    --------
    >>> code = designs.equi_weighted([[1.0, 0.0], [0.0, 1.0]])
    >>> p_frame_energy(code, 3)
    0.5
    """
    if p <= 0:
        raise InvalidParameterError(f"p must be positive, got p={p}.")
    return energy(code, PowerPotential(p / 2))


def _antipode_matrix(code):
    return code.gram() <= -1 + designs.COINCIDENCE_TOL


def antipodal_pairs(code):
    """Index pairs ``(i, j)``, ``i < j``, of antipodal points."""
    i, j = np.nonzero(np.triu(_antipode_matrix(code), k=1))
    return list(zip(i.tolist(), j.tolist()))


def theta(code):
    """
    Mass of the pairs with dot product +-1: ``sum w_i (w_i + w_i')``
    where ``w_i'`` is the weight of the antipode of ``x_i`` (0 if absent).
    """
    w = code.weights
    return float(np.dot(w, w) + w @ _antipode_matrix(code) @ w)


def augment_antipodal(code):
    """
    Add every missing antipode with weight 0.

    Energies and ``theta`` are unchanged; the result is antipodal as a set.
    """
    missing = ~_antipode_matrix(code).any(axis=1)
    points = np.vstack([code.points, -code.points[missing]])
    weights = np.concatenate([code.weights, np.zeros(int(missing.sum()))])
    return designs.WeightedCode(points, weights, allow_zero_weights=True)


def parse_value(text):
    """Parse a number such as ``"0.5"``, ``"-1/3"``."""
    return float(Fraction(text.strip()))


@dataclass(frozen=True, eq=False)
class SymmetricNodeSet:
    """
    A set ``A`` of ``m`` values in (-1, 1) symmetric about 0.

    ``beta`` holds ``2 alpha**2 - 1`` for the positive values in ascending
    order. ``m = 2 L + nu`` where ``nu = 1`` if 0 belongs to ``A``.

    Examples
    --------
    >>> nodes = SymmetricNodeSet([-0.5, 0.0, 0.5])
    >>> nodes.m, nodes.L, nodes.nu, [float(b) for b in nodes.beta]
    (3, 1, 1, [-0.5])
    """

    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.sort(np.asarray(self.alpha, dtype=float))
        object.__setattr__(self, "alpha", alpha)
        if alpha.ndim != 1 or len(alpha) == 0:
            raise InvalidParameterError("A must contain at least one value.")
        if alpha[0] <= -1 or alpha[-1] >= 1:
            raise InvalidParameterError(
                f"Values of A must lie in (-1, 1), got {alpha}."
            )
        if np.any(np.diff(alpha) <= SYMMETRY_TOL):
            raise InvalidParameterError(
                f"Values of A must be distinct: {alpha}."
            )
        if np.max(np.abs(alpha + alpha[::-1])) > SYMMETRY_TOL:
            raise InvalidParameterError(
                f"A must be symmetric about 0, got {alpha}."
            )

    @classmethod
    def from_strings(cls, values):
        """Build from strings such as ``["-1/3", "1/3"]``."""
        return cls([parse_value(v) for v in values])

    @property
    def m(self):
        return len(self.alpha)

    @property
    def L(self):
        return self.m // 2

    @property
    def nu(self):
        return self.m % 2

    @property
    def beta(self):
        positive = self.alpha[self.alpha > SYMMETRY_TOL]
        return np.sort(2 * positive**2 - 1)

    def contains(self, t, tol=MEMBERSHIP_TOL):
        """Elementwise membership of ``t`` in A."""
        t = np.asarray(t, dtype=float)
        return np.any(np.abs(t[..., None] - self.alpha) <= tol, axis=-1)


class LevenshteinPolynomial(NamedTuple):
    poly: Polynomial
    gamma: float
    residual: float


def _check_reference(n, nodes, reference):
    if reference.dim != n:
        raise InvalidDimensionError(
            f"The reference code lives in R^{reference.dim}, not R^{n}."
        )
    needed = nodes.m - 1
    kk = designs.kk_strength(reference, max_k=needed)
    if kk < needed:
        raise HypothesisError(
            f"The reference code is a ({kk},{kk})-design, a "
            f"({needed},{needed})-design is required."
        )
    gram = reference.gram()
    off = np.abs(np.abs(gram) - 1) > MEMBERSHIP_TOL
    stray = off & ~nodes.contains(gram)
    if np.any(stray):
        i, j = np.argwhere(stray)[0]
        raise HypothesisError(
            f"Dot product {gram[i, j]!r} of points {i} and {j} of the "
            f"reference code is not in A = {list(nodes.alpha)} or +-1."
        )


def levenshtein_polynomial(n, nodes, reference_code):
    """
    The monic polynomial with zeros ``beta_i`` and its mixing coefficient.

    Under the hypotheses the polynomial ``Pi_L = prod(t - beta_i)`` is
    orthogonal to all polynomials of degree ``L - 2`` for the half-interval
    weight ``v_{1,nu}``, so ``Pi_L = P_L + gamma P_{L-1}`` in the monic family
    of that weight, with ``gamma >= 0``.

    Parameters
    ----------
    n : int
        Dimension.
    nodes : SymmetricNodeSet
        The set A.
    reference_code : WeightedCode
        An (m - 1, m - 1)-design whose dot products lie in A or are +-1.

    Returns
    -------
    LevenshteinPolynomial
        ``(poly, gamma, residual)``; the residual is the largest
        coefficient of ``Pi_L`` on ``P_0 .. P_{L-2}``. For ``L = 0`` the
        polynomial is 1 and gamma is 0.

    Raises
    ------
    HypothesisError
        If the reference code does not meet the hypotheses or the
        orthogonality residual reaches 1e-9.
    """
    _check_reference(n, nodes, reference_code)
    L = nodes.L
    if L == 0:
        return LevenshteinPolynomial(Polynomial([1.0]), 0.0, 0.0)
    poly = Polynomial.fromroots(nodes.beta)
    family = orthopoly.PolyFamily(n, 1, nodes.nu, "monic", "half-interval")
    c = orthopoly.expand_in_family(poly, family)
    gamma = float(c[L - 1])
    residual = float(np.max(np.abs(c[: L - 1]))) if L >= 2 else 0.0
    if residual >= ORTHOGONALITY_TOL:
        raise HypothesisError(
            f"The polynomial with zeros {nodes.beta} is not orthogonal to "
            f"degree {L - 2} (residual {residual}); A does not belong to an "
            "admissible design."
        )
    if gamma < -COEFFICIENT_TOL:
        raise InternalConsistencyError(
            f"Negative mixing coefficient {gamma} for A = {nodes.alpha}."
        )
    logger.debug("Levenshtein polynomial %s, gamma %s", poly, gamma)
    return LevenshteinPolynomial(poly, gamma, residual)


@dataclass(frozen=True, eq=False)
class EnergyBoundReport:
    """
    Lower bound for the f-energy of codes with ``theta`` at least
    ``theta_star``.
    """

    d: np.ndarray
    theta_star: float
    bound: float
    gamma: float
    reference_energy: float
    interpolant: Polynomial
    f_at_one: float
    certified: bool
    orthogonality_residual: float = 0.0

    @property
    def endpoint_gap(self):
        """``f(1) - p(1)``."""
        return self.f_at_one - float(self.interpolant(1.0))

    def applies_to(self, code, tol=EQUALITY_TOL):
        """Whether ``theta(code)`` is large enough for the bound."""
        return theta(code) >= self.theta_star - tol

    def to_dict(self):
        return {
            "d": list(self.d),
            "theta_star": self.theta_star,
            "bound": self.bound,
            "gamma": self.gamma,
            "reference_energy": self.reference_energy,
            "interpolant": list(self.interpolant.coef),
            "certified": self.certified,
            "orthogonality_residual": self.orthogonality_residual,
        }

    def to_text(self):
        summary = self.to_dict()
        if not self.certified:
            summary["status"] = "UNCERTIFIED"
        return tools.mapping_to_text(summary)


def _sign_hypotheses(f, m, force):
    certified = True
    for k in range(1, m + 1):
        check = derivative_sign_check(f.f, k, interval=(0.0, 1.0))
        if not check.holds:
            message = (
                f"Derivative of order {k} of {f.describe()} is "
                f"{check.minimum} at t={check.witness}."
            )
            if not force:
                raise HypothesisError(message)
            logger.warning("UNCERTIFIED: %s", message)
            certified = False
    return certified


def genframe_bound(reference_code, nodes, f, force=False):
    """
    Lower bound for energies from a reference code with dot products in A.

    Parameters
    ----------
    reference_code : WeightedCode
        An (m - 1, m - 1)-design whose dot products other than +-1 lie in A.
    nodes : SymmetricNodeSet
        The set A with ``m`` values.
    f : SquaredPotential or PotentialFunction
        Potential on [0, 1] with ``f^{(k)} >= 0`` for ``k = 1..m``.
    force : bool
        Compute the bound even if the derivative check fails.

    Returns
    -------
    EnergyBoundReport
        The bound equals the energy of the reference code.

    Raises
    ------
    HypothesisError
        If a hypothesis fails (and ``force`` is False for derivative signs).
    InternalConsistencyError
        If a coefficient ``d_k``, ``k >= 1``, of a certified bound is
        negative or the bound differs from the reference energy.
    """
    f = _squared(f)
    n = reference_code.dim
    lev = levenshtein_polynomial(n, nodes, reference_code)
    certified = _sign_hypotheses(f, nodes.m, force)

    if nodes.m == 1:
        # A = {0}: the interpolant is the constant g(-1) = f(0)
        interpolant = Polynomial([float(f.g(-1.0))])
        d = np.array([interpolant.coef[0]])
    else:
        beta = nodes.beta
        points = list(beta) + [-1.0] * nodes.nu
        values = [float(f.g(b)) for b in points]
        slopes = [float(f.g_deriv(b, 1)) for b in beta]
        interpolant = orthopoly.hermite_interpolate(points, values, slopes)
        d = orthopoly.expand_even_in_gegenbauer(interpolant, n).coeffs
        if len(d) > 1 and d[1:].min() < -COEFFICIENT_TOL:
            message = (
                f"Negative Gegenbauer coefficient in {d} for "
                f"A = {nodes.alpha}."
            )
            # expected when the derivative hypothesis is waived
            if certified:
                raise InternalConsistencyError(message)
            logger.warning("UNCERTIFIED: %s", message)

    theta_star = theta(reference_code)
    f_one = float(f.value(1.0))
    bound = float(d[0] + (f_one - interpolant(1.0)) * theta_star)
    reference_energy = energy(reference_code, f)
    if abs(bound - reference_energy) > EQUALITY_TOL * max(
        1.0, abs(reference_energy)
    ):
        raise InternalConsistencyError(
            f"Bound {bound} differs from the reference energy "
            f"{reference_energy}."
        )
    logger.info(
        "Energy bound %.12g for theta >= %.12g.", bound, theta_star
    )
    return EnergyBoundReport(
        d=d,
        theta_star=theta_star,
        bound=bound,
        gamma=lev.gamma,
        reference_energy=reference_energy,
        interpolant=interpolant,
        f_at_one=f_one,
        certified=certified,
        orthogonality_residual=lev.residual,
    )


@dataclass(frozen=True)
class EqualityFlags:
    """Conditions under which a code attains an energy bound."""

    is_design: bool
    off_A_mass_zero: bool
    theta_matches: bool
    pair_weights_ok: bool = None
    equi_weighted_no_antipodes: bool = None

    @property
    def all(self):
        flags = [self.is_design, self.off_A_mass_zero, self.theta_matches]
        flags += [
            flag
            for flag in (
                self.pair_weights_ok,
                self.equi_weighted_no_antipodes,
            )
            if flag is not None
        ]
        return all(flags)

    def to_dict(self):
        return {
            "is_design": self.is_design,
            "off_A_mass_zero": self.off_A_mass_zero,
            "theta_matches": self.theta_matches,
            "pair_weights_ok": self.pair_weights_ok,
            "equi_weighted_no_antipodes": self.equi_weighted_no_antipodes,
            "all": self.all,
        }


def check_equality_conditions(
    code, reference, nodes, mode="general", tol=EQUALITY_TOL
):
    """
    Diagnose whether a code attains the bound of a reference report.

    Parameters
    ----------
    code : WeightedCode
    reference : EnergyBoundReport
    nodes : SymmetricNodeSet
    mode : str
        ``"general"``: the code is an (m - 1, m - 1)-design, no weight sits
        on pairs with dot products outside A and +-1, and its ``theta``
        matches the reference. ``"antipodal"`` also requires every antipodal
        pair to carry total weight ``1 / N`` (2N points). ``"plain"`` also
        requires equal weights and no antipodal pairs.

    Returns
    -------
    EqualityFlags
    """
    if mode not in MODES:
        raise InvalidParameterError(
            f"Unknown mode '{mode}'. Use one of {MODES}."
        )
    needed = nodes.m - 1
    is_design = designs.kk_strength(code, max_k=needed) >= needed
    gram = code.gram()
    w = code.weights
    off = (np.abs(np.abs(gram) - 1) > MEMBERSHIP_TOL) & ~nodes.contains(gram)
    off_mass = float(np.sum(np.outer(w, w)[off]))
    flags = {
        "is_design": bool(is_design),
        "off_A_mass_zero": off_mass <= tol,
        "theta_matches": abs(theta(code) - reference.theta_star) <= tol,
    }
    if mode == "antipodal":
        pairs = antipodal_pairs(code)
        matched = len(pairs) * 2 == code.size
        target = 2 / code.size
        flags["pair_weights_ok"] = bool(
            matched
            and all(abs(w[i] + w[j] - target) <= tol for i, j in pairs)
        )
    elif mode == "plain":
        flags["equi_weighted_no_antipodes"] = bool(
            np.max(np.abs(w - 1 / code.size)) <= tol
            and augment_antipodal(code).size == 2 * code.size
        )
    return EqualityFlags(**flags)


def simplex_energy_bound(n, f):
    """
    ``(f(1) + n f(1 / n**2)) / (n + 1)``, the energy of the regular simplex
    and the lower bound for the energies of ``n + 1`` point codes.
    """
    f = _squared(f)
    return float((f.value(1.0) + n * f.value(1 / n**2)) / (n + 1))


def frame_exponent_admissible(p, m):
    """
    Whether ``t**(p/2)`` has nonnegative derivatives of orders ``1..m`` on
    (0, 1).

    Examples
    --------
    >>> frame_exponent_admissible(4, 3), frame_exponent_admissible(3, 3)
    (True, False)
    """
    f = PowerPotential(p / 2)
    return all(
        derivative_sign_check(f, k, interval=(0.0, 1.0)).holds
        for k in range(1, m + 1)
    )
