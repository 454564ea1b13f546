# -*- coding: utf-8 -*-
"""
Gegenbauer and adjacent Jacobi polynomials on [-1, 1].

All families handled here are Jacobi families with weight
``(1 - t)**alpha * (1 + t)**beta``. Two weights are supported:

* ``"adjacent"``: ``(1 - t)**mu * (1 + t)**nu * w_n(t)`` with the sphere
  weight ``w_n(t)`` proportional to ``(1 - t**2)**((n - 3) / 2)``. With
  ``mu = nu = 0`` these are the Gegenbauer polynomials of the sphere
  ``S^{n-1}``.
* ``"half-interval"``: ``(1 + t)**(nu - 1/2) * (1 - t)**(mu + (n - 3) / 2)``,
  the weight obtained from ``w_n`` by the substitution ``t = 2 u**2 - 1``.

Polynomials are evaluated with the three-term recurrence of the monic
family. Explicit polynomials are :class:`numpy.polynomial.Polynomial`
objects.

SPDX-License-Identifier: MIT
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import LinAlgError
from scipy.linalg import eigh_tridiagonal

from spherekit.exceptions import DomainError
from spherekit.exceptions import InvalidDimensionError
from spherekit.exceptions import NumericFailureError
from spherekit.exceptions import UnsupportedParametersError

logger = logging.getLogger(__name__)

NORMALIZATIONS = ("unit-at-one", "monic")
WEIGHTS = ("adjacent", "half-interval")

#: Polynomials in the monomial basis, ascending coefficients.
DensePoly = Polynomial


def check_dimension(n):
    """Raise :class:`InvalidDimensionError` unless ``n`` is an integer >= 2."""
    if int(n) != n or n < 2:
        raise InvalidDimensionError(
            f"The sphere dimension n must be an integer >= 2, got {n}."
        )


@dataclass(frozen=True)
class PolyFamily:
    """
    A family of orthogonal polynomials attached to the sphere S^{n-1}.

    Parameters
    ----------
    n : int
        Dimension of the ambient space (the sphere is S^{n-1}).
    mu : int
        Exponent of ``(1 - t)`` in the weight, 0 or 1.
    nu : int
        Exponent of ``(1 + t)`` in the weight, 0 or 1.
    normalization : str
        ``"unit-at-one"`` (every member equals 1 at t = 1) or ``"monic"``.
    weight : str
        ``"adjacent"`` or ``"half-interval"``, see the module docstring.

    Examples
    --------
    >>> fam = PolyFamily(3, 1, 0)
    >>> float(fam.alpha), float(fam.beta)
    (1.0, 0.0)
    """

    n: int
    mu: int = 0
    nu: int = 0
    normalization: str = "unit-at-one"
    weight: str = "adjacent"

    def __post_init__(self):
        check_dimension(self.n)
        if self.mu not in (0, 1) or self.nu not in (0, 1):
            raise UnsupportedParametersError(
                f"mu and nu must be 0 or 1, got mu={self.mu}, nu={self.nu}."
            )
        if self.normalization not in NORMALIZATIONS:
            raise UnsupportedParametersError(
                f"Unknown normalization '{self.normalization}'. "
                f"Use one of {NORMALIZATIONS}."
            )
        if self.weight not in WEIGHTS:
            raise UnsupportedParametersError(
                f"Unknown weight '{self.weight}'. Use one of {WEIGHTS}."
            )

    @property
    def alpha(self):
        """Jacobi exponent of ``(1 - t)``."""
        return self.mu + (self.n - 3) / 2

    @property
    def beta(self):
        """Jacobi exponent of ``(1 + t)``."""
        if self.weight == "adjacent":
            return self.nu + (self.n - 3) / 2
        return self.nu - 0.5

    def with_normalization(self, normalization):
        return PolyFamily(
            self.n, self.mu, self.nu, normalization, self.weight
        )


def gegenbauer(n, normalization="unit-at-one"):
    """The Gegenbauer family P_k^{(n)} of the sphere S^{n-1}."""
    return PolyFamily(n, 0, 0, normalization, "adjacent")


def recurrence_coefficients(family, kmax):
    """
    Recurrence coefficients of the monic family.

    The monic polynomials satisfy
    ``p_{k+1}(t) = (t - a_k) p_k(t) - b_k p_{k-1}(t)``.

    Parameters
    ----------
    family : PolyFamily
    kmax : int
        Number of coefficient pairs to return.

    Returns
    -------
    tuple of numpy.ndarray
        ``a_0..a_{kmax-1}`` and ``b_0..b_{kmax-1}`` with ``b_0 = 0``.
    """
    alpha = family.alpha
    beta = family.beta
    s = alpha + beta
    k = np.arange(kmax, dtype=float)
    a = np.empty(kmax)
    b = np.zeros(kmax)
    if kmax == 0:
        return a, b
    a[0] = (beta - alpha) / (s + 2)
    kk = k[1:]
    a[1:] = (beta**2 - alpha**2) / ((2 * kk + s) * (2 * kk + s + 2))
    if kmax > 1:
        b[1] = 4 * (1 + alpha) * (1 + beta) / ((s + 2) ** 2 * (s + 3))
    kk = k[2:]
    b[2:] = (
        4
        * kk
        * (kk + alpha)
        * (kk + beta)
        * (kk + s)
        / ((2 * kk + s) ** 2 * (2 * kk + s + 1) * (2 * kk + s - 1))
    )
    return a, b


def _monic_values(family, k, t):
    """Monic member of degree k and its derivative at t."""
    t = np.asarray(t, dtype=float)
    a, b = recurrence_coefficients(family, k)
    p_prev = np.zeros_like(t)
    p = np.ones_like(t)
    d_prev = np.zeros_like(t)
    d = np.zeros_like(t)
    for j in range(k):
        p_next = (t - a[j]) * p - b[j] * p_prev
        d_next = p + (t - a[j]) * d - b[j] * d_prev
        p_prev, p = p, p_next
        d_prev, d = d, d_next
    return p, d


def value_at_one(family, k):
    """Value of the monic member of degree k at t = 1."""
    return float(_monic_values(family, k, 1.0)[0])


def evaluate(family, k, t):
    """
    Evaluate the degree-k member of a family.

    Parameters
    ----------
    family : PolyFamily
    k : int
        Degree, ``k >= 0``.
    t : float or array_like
        Evaluation points. Points outside [-1, 1] are allowed.

    Returns
    -------
    float or numpy.ndarray

    Examples
    --------
    >>> round(float(evaluate(gegenbauer(4), 2, 0.5)), 12)
    0.0
    >>> float(evaluate(PolyFamily(3, 1, 0), 1, -1 / 3)) == 0
    True
    """
    p, _ = _monic_values(family, k, t)
    if family.normalization == "unit-at-one":
        p = p / value_at_one(family, k)
    return p[()] if np.ndim(p) == 0 else p


def evaluate_all(family, kmax, t):
    """
    Members of degree ``0..kmax`` at t in one recurrence pass.

    Returns
    -------
    numpy.ndarray
        Shape ``(kmax + 1,) + numpy.shape(t)``.
    """
    t = np.asarray(t, dtype=float)
    a, b = recurrence_coefficients(family, kmax)
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = 1.0
    ones = np.ones(kmax + 1)
    p_prev = np.zeros_like(t)
    prev_one = 0.0
    for j in range(kmax):
        out[j + 1] = (t - a[j]) * out[j] - b[j] * p_prev
        p_prev = out[j]
        ones[j + 1] = (1 - a[j]) * ones[j] - b[j] * prev_one
        prev_one = ones[j]
    if family.normalization == "unit-at-one":
        out /= ones.reshape((-1,) + (1,) * t.ndim)
    return out


def derivative(family, k, t):
    """First derivative of the degree-k member of a family at t."""
    _, d = _monic_values(family, k, t)
    if family.normalization == "unit-at-one":
        d = d / value_at_one(family, k)
    return d[()] if np.ndim(d) == 0 else d


def _jacobi_matrix(family, m):
    a, b = recurrence_coefficients(family, m)
    return a, np.sqrt(b[1:])


def roots(family, m):
    """
    The m zeros of the degree-m member of a family.

    The zeros are the eigenvalues of the symmetric tridiagonal Jacobi
    matrix, polished with two Newton steps.

    Parameters
    ----------
    family : PolyFamily
    m : int
        Degree, ``m >= 1``.

    Returns
    -------
    numpy.ndarray
        Ascending zeros, all in (-1, 1).

    Examples
    --------
    >>> [round(float(x), 12) for x in roots(PolyFamily(3, 0, 1), 1)]
    [0.333333333333]
    """
    if m < 1:
        raise UnsupportedParametersError(
            f"The degree must be at least 1 to have zeros, got {m}."
        )
    diag, offdiag = _jacobi_matrix(family, m)
    if m == 1:
        x = diag.copy()
    else:
        try:
            x = eigh_tridiagonal(diag, offdiag, eigvals_only=True)
        except LinAlgError as err:
            raise NumericFailureError(
                f"Eigenvalue solver failed for degree {m} of {family}.",
                family=family,
                degree=m,
            ) from err
    for _ in range(2):
        x = x - evaluate(family, m, x) / derivative(family, m, x)
    x = np.sort(x)
    if (
        not np.all(np.isfinite(x))
        or np.any(np.diff(x) <= 0)
        or x[0] <= -1
        or x[-1] >= 1
    ):
        raise NumericFailureError(
            f"Zeros of degree {m} of {family} are not simple zeros "
            f"inside (-1, 1): {x}.",
            family=family,
            degree=m,
        )
    return x


def gauss_rule(family, npts):
    """
    Gauss rule of the family weight, normalised to total mass 1.

    The rule is computed with the Golub-Welsch algorithm and integrates
    polynomials up to degree ``2 * npts - 1`` exactly.

    Returns
    -------
    tuple of numpy.ndarray
        Nodes (ascending) and weights.
    """
    if npts < 1:
        raise UnsupportedParametersError(
            f"A Gauss rule needs at least one node, got {npts}."
        )
    diag, offdiag = _jacobi_matrix(family, npts)
    if npts == 1:
        return diag.copy(), np.ones(1)
    try:
        nodes, vectors = eigh_tridiagonal(diag, offdiag)
    except LinAlgError as err:
        raise NumericFailureError(
            f"Eigenvalue solver failed for a {npts}-point rule of {family}.",
            family=family,
            degree=npts,
        ) from err
    weights = vectors[0, :] ** 2
    return nodes, weights / weights.sum()


def weight_moments(n, kmax):
    """
    Moments of the normalised sphere weight ``w_n``.

    Parameters
    ----------
    n : int
        Dimension, ``n >= 2``.
    kmax : int
        Highest moment.

    Returns
    -------
    numpy.ndarray
        ``mu_k = int t**k w_n(t) dt`` for ``k = 0..kmax``, ``mu_0 = 1``.

    Examples
    --------
    >>> [float(x) for x in weight_moments(3, 2)]
    [1.0, 0.0, 0.3333333333333333]
    """
    check_dimension(n)
    mom = np.zeros(kmax + 1)
    mom[0] = 1.0
    for k in range(2, kmax + 1, 2):
        mom[k] = (k - 1) / (k + n - 2) * mom[k - 2]
    return mom


def family_moments(family, kmax):
    """
    Moments ``int t**k v(t) dt`` of the family weight, normalised to
    total mass 1.

    Notes
    -----
    The adjacent weight is expanded against the sphere moments. The
    half-interval weight is pulled back with ``t = 2 u**2 - 1``, which
    turns it into ``u**(2 nu) w_{n + 2 mu}(u)``.
    """
    if family.weight == "adjacent":
        base = weight_moments(family.n, kmax + family.mu + family.nu)
        factor = Polynomial([1, -1]) ** family.mu * Polynomial([1, 1]) ** (
            family.nu
        )
        raw = np.array(
            [
                np.dot(
                    (factor * Polynomial.basis(k)).coef,
                    base[: k + family.mu + family.nu + 1],
                )
                for k in range(kmax + 1)
            ]
        )
    else:
        base = weight_moments(family.n + 2 * family.mu, 2 * kmax + 2)
        sub = Polynomial([-1, 0, 2])
        shift = Polynomial.basis(2 * family.nu)
        raw = np.empty(kmax + 1)
        for k in range(kmax + 1):
            coef = (sub**k * shift).coef
            raw[k] = np.dot(coef, base[: len(coef)])
    return raw / raw[0]


def monic_polynomials(family, kmax):
    """The monic members of degree 0..kmax as Polynomial objects."""
    a, b = recurrence_coefficients(family, kmax)
    x = Polynomial([0, 1])
    polys = [Polynomial([1.0])]
    prev = Polynomial([0.0])
    for k in range(kmax):
        nxt = (x - a[k]) * polys[-1] - b[k] * prev
        prev = polys[-1]
        polys.append(nxt)
    return polys


def expand_in_family(poly, family):
    """
    Coefficients of a polynomial against the members of a family.

    Parameters
    ----------
    poly : numpy.polynomial.Polynomial
    family : PolyFamily

    Returns
    -------
    numpy.ndarray
        ``c`` with ``poly = sum(c[k] * P_k)`` where ``P_k`` are the family
        members in the family's normalization.
    """
    coef = np.array(poly.coef, dtype=float)
    deg = len(coef) - 1
    polys = monic_polynomials(family, deg)
    c = np.zeros(deg + 1)
    rest = coef.copy()
    for k in range(deg, -1, -1):
        c[k] = rest[k]
        rest[: k + 1] -= c[k] * polys[k].coef[: k + 1]
    if family.normalization == "unit-at-one":
        c *= np.array([value_at_one(family, k) for k in range(deg + 1)])
    return c


@dataclass(frozen=True, eq=False)
class GegenbauerExpansion:
    """
    Coefficients of a polynomial in the Gegenbauer basis of S^{n-1}.

    With ``even=True`` the coefficient ``coeffs[k]`` belongs to
    ``P_{2k}^{(n)}``, otherwise to ``P_k^{(n)}``.
    """

    n: int
    coeffs: np.ndarray = field(repr=False)
    even: bool = True

    def degree_of(self, k):
        return 2 * k if self.even else k

    def evaluate(self, u):
        family = gegenbauer(self.n)
        u = np.asarray(u, dtype=float)
        total = np.zeros_like(u)
        for k, c in enumerate(self.coeffs):
            total = total + c * evaluate(family, self.degree_of(k), u)
        return total

    def min_coefficient(self, start=1):
        """Smallest coefficient from index ``start`` on (inf if none)."""
        tail = self.coeffs[start:]
        return float(tail.min()) if len(tail) else float("inf")

    def sign_report(self, tol=1e-10):
        """Summary of the signs of the non-constant coefficients."""
        lowest = self.min_coefficient()
        return {
            "nonnegative": bool(lowest >= -tol),
            "min_coefficient": lowest,
            "negative_indices": [
                k
                for k, c in enumerate(self.coeffs)
                if k > 0 and c < -tol
            ],
        }

    def to_dict(self):
        return {
            "n": int(self.n),
            "even": self.even,
            "coeffs": [float(c) for c in self.coeffs],
        }


def expand_in_gegenbauer(poly, n):
    """Expand a polynomial in ``P_k^{(n)}``, ``k = 0..deg``."""
    coeffs = expand_in_family(poly, gegenbauer(n))
    return GegenbauerExpansion(n, coeffs, even=False)


def even_gegenbauer_scale(n, k):
    """
    Factor ``2**k / a_{2k}`` linking the half-interval family to
    ``P_{2k}^{(n)}``.

    ``a_{2k}`` is the leading coefficient of ``P_{2k}^{(n)}`` and the monic
    half-interval member ``P_k`` satisfies
    ``P_k(2 u**2 - 1) = 2**k / a_{2k} * P_{2k}^{(n)}(u)``.
    """
    return 2.0**k * value_at_one(gegenbauer(n, "monic"), 2 * k)


def expand_even_in_gegenbauer(poly, n):
    """
    Expand ``q(u) = poly(2 u**2 - 1)`` in the even Gegenbauer polynomials.

    Parameters
    ----------
    poly : numpy.polynomial.Polynomial
        The polynomial p(t).
    n : int
        Dimension of the sphere.

    Returns
    -------
    GegenbauerExpansion
        ``d`` with ``p(2 u**2 - 1) = sum(d[k] * P_{2k}^{(n)}(u))``.

    Examples
    --------
    >>> d = expand_even_in_gegenbauer(Polynomial([0, 1]), 3).coeffs
    >>> [round(float(x), 12) for x in d]
    [-0.333333333333, 1.333333333333]
    """
    check_dimension(n)
    half = PolyFamily(n, 0, 0, "monic", "half-interval")
    c = expand_in_family(poly, half)
    scale = np.array([even_gegenbauer_scale(n, k) for k in range(len(c))])
    return GegenbauerExpansion(n, c * scale, even=True)


def triple_product_sign(n, mu, nu, i, j, k):
    """
    Integral of a product of three half-interval family members.

    The members are normalised to be 1 at t = 1 and the weight
    ``(1 - t)**alpha * (1 + t)**beta`` to total mass 1, with
    ``alpha = mu + (n - 3) / 2`` and ``beta = nu - 1/2``. Nonnegative values
    for all degrees mean the linearisation coefficients of the family are
    nonnegative.

    Raises
    ------
    DomainError
        If ``alpha >= beta > -1`` and ``alpha + beta + 1 >= 0`` fail.
    """
    family = PolyFamily(n, mu, nu, "unit-at-one", "half-interval")
    alpha, beta = family.alpha, family.beta
    if not (alpha >= beta > -1 and alpha + beta + 1 >= 0):
        raise DomainError(
            f"Jacobi parameters alpha={alpha}, beta={beta} are outside "
            "alpha >= beta > -1, alpha + beta + 1 >= 0."
        )
    nodes, weights = gauss_rule(family, (i + j + k) // 2 + 1)
    product = (
        evaluate(family, i, nodes)
        * evaluate(family, j, nodes)
        * evaluate(family, k, nodes)
    )
    return float(np.dot(weights, product))


def hermite_interpolate(nodes, values, derivatives=()):
    """
    Hermite interpolation by confluent divided differences.

    Parameters
    ----------
    nodes : sequence of float
        Distinct interpolation nodes.
    values : sequence of float
        Function values at every node.
    derivatives : sequence of float
        First derivatives at the first ``len(derivatives)`` nodes.

    Returns
    -------
    numpy.polynomial.Polynomial
        The polynomial of degree ``len(nodes) + len(derivatives) - 1``
        matching all conditions.

    Examples
    --------
    >>> p = hermite_interpolate([0.0], [1.0], [2.0])
    >>> [float(c) for c in p.coef]
    [1.0, 2.0]
    """
    nodes = [float(x) for x in nodes]
    if len(derivatives) > len(nodes):
        raise UnsupportedParametersError(
            "More derivative conditions than nodes."
        )
    # confluent sequence: nodes with a slope condition appear twice
    z = []
    data = []
    for idx, x in enumerate(nodes):
        jets = [float(values[idx])]
        if idx < len(derivatives):
            jets.append(float(derivatives[idx]))
        for _ in jets:
            z.append(x)
            data.append(jets)
    size = len(z)
    table = np.zeros((size, size))
    table[:, 0] = [jets[0] for jets in data]
    for order in range(1, size):
        for i in range(order, size):
            if z[i] == z[i - order]:
                table[i, order] = data[i][order] / factorial(order)
            else:
                table[i, order] = (
                    table[i, order - 1] - table[i - 1, order - 1]
                ) / (z[i] - z[i - order])
    poly = Polynomial([0.0])
    basis = Polynomial([1.0])
    for i in range(size):
        poly = poly + table[i, i] * basis
        basis = basis * Polynomial([-z[i], 1.0])
    return poly
