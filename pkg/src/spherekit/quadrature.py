# -*- coding: utf-8 -*-
"""
Gauss-type quadrature rules for the sphere weight ``w_n``.

For ``mu, nu`` in {0, 1} the rule has the zeros of the adjacent polynomial
``P_m^{mu,nu}`` as interior nodes, the node -1 if ``nu = 1`` and the node 1
if ``mu = 1``. It integrates every polynomial of degree
``2m - 1 + mu + nu`` exactly against ``w_n``:

* (0, 0): Gauss rule, nodes at the zeros of the Gegenbauer polynomial,
* (1, 0): Radau rule with the node 1,
* (0, 1): Radau rule with the node -1 (mirror image of (1, 0)),
* (1, 1): Lobatto rule with both endpoints.

SPDX-License-Identifier: MIT
"""
import logging
from dataclasses import dataclass

import numpy as np

from spherekit import orthopoly
from spherekit.exceptions import InternalConsistencyError
from spherekit.exceptions import UnsupportedParametersError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """
    Nodes and weights of a Gauss-type rule for ``w_n``.

    Attributes
    ----------
    n, m, mu, nu : int
        Parameters of the rule.
    nodes : numpy.ndarray
        Ascending nodes, starting with -1 if ``nu = 1`` and ending with 1 if
        ``mu = 1``.
    weights : numpy.ndarray
        Positive weights summing to 1.
    """

    n: int
    m: int
    mu: int
    nu: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def exactness_degree(self):
        """Highest degree integrated exactly, ``2m - 1 + mu + nu``."""
        return 2 * self.m - 1 + self.mu + self.nu

    @property
    def interior_nodes(self):
        stop = len(self.nodes) - self.mu
        return self.nodes[self.nu : stop]

    def apply(self, values):
        """
        Quadrature sum of a callable or of values given at the nodes.
        """
        if callable(values):
            values = np.array([values(x) for x in self.nodes], dtype=float)
        return float(np.dot(self.weights, values))

    def validate(self, tol=1e-12):
        """
        Raise :class:`InternalConsistencyError` if an invariant fails.
        """
        if np.any(self.weights <= 0):
            raise InternalConsistencyError(
                f"Non-positive quadrature weight in rule {self.describe()}: "
                f"{self.weights}."
            )
        if np.any(np.diff(self.nodes) <= 0):
            raise InternalConsistencyError(
                f"Nodes of rule {self.describe()} are not increasing."
            )
        inner = self.interior_nodes
        if inner[0] <= -1 or inner[-1] >= 1:
            raise InternalConsistencyError(
                f"Interior nodes of rule {self.describe()} leave (-1, 1)."
            )
        if abs(self.weights.sum() - 1) > tol * len(self.weights) * 10:
            raise InternalConsistencyError(
                f"Weights of rule {self.describe()} sum to "
                f"{self.weights.sum()}, not 1."
            )
        return self

    def describe(self):
        return f"(n={self.n}, m={self.m}, mu={self.mu}, nu={self.nu})"

    def to_dict(self):
        return {
            "n": int(self.n),
            "m": int(self.m),
            "mu": int(self.mu),
            "nu": int(self.nu),
            "nodes": [float(x) for x in self.nodes],
            "weights": [float(x) for x in self.weights],
            "L": int(self.exactness_degree),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            n=int(data["n"]),
            m=int(data["m"]),
            mu=int(data["mu"]),
            nu=int(data["nu"]),
            nodes=np.asarray(data["nodes"], dtype=float),
            weights=np.asarray(data["weights"], dtype=float),
        )


def gegenbauer_gauss_rule(n, npts):
    """Gauss rule of ``w_n`` with ``npts`` nodes (exact to 2 npts - 1)."""
    return orthopoly.gauss_rule(orthopoly.gegenbauer(n), npts)


def _lagrange_square(t, interior, j):
    """Square of the Lagrange basis polynomial of interior node j."""
    others = np.delete(interior, j)
    ratio = (t[:, None] - others[None, :]) / (interior[j] - others[None, :])
    return np.prod(ratio, axis=1) ** 2


def _nodal_square(t, interior, at):
    """``(prod(t - x) / prod(at - x))**2`` over the interior nodes x."""
    ratio = (t[:, None] - interior[None, :]) / (at - interior[None, :])
    return np.prod(ratio, axis=1) ** 2


def build_rule(n, m, mu=0, nu=0):
    """
    Construct the Gauss-type rule with parameters ``(n, m, mu, nu)``.

    Parameters
    ----------
    n : int
        Dimension, ``n >= 2``.
    m : int
        Number of interior nodes, ``m >= 1``.
    mu : int
        1 to add the node 1.
    nu : int
        1 to add the node -1.

    Returns
    -------
    QuadratureRule

    Notes
    -----
    The weight of node ``j`` is the integral of the polynomial ``R_j`` of
    degree at most ``2m - 1 + mu + nu`` that vanishes at all other nodes and
    equals 1 at node ``j``:

    * interior node: ``phi_j(t)**2 (1 - t)**mu (1 + t)**nu`` scaled to 1 at
      the node, where ``phi_j`` is the Lagrange basis polynomial of the
      interior nodes,
    * node 1: ``(phi(t) / phi(1))**2 ((1 + t) / 2)**nu`` with
      ``phi(t) = prod(t - x_i)``,
    * node -1: ``(phi(t) / phi(-1))**2 ((1 - t) / 2)**mu``.

    The integrals are evaluated in product form on a Gauss rule of ``w_n``
    with ``m + 1`` nodes, which is exact for these degrees. Each ``R_j`` is
    nonnegative on [-1, 1], so every weight is positive.

    Examples
    --------
    >>> rule = build_rule(3, 1, 1, 0)
    >>> [round(float(x), 12) for x in rule.nodes]
    [-0.333333333333, 1.0]
    >>> [round(float(x), 12) for x in rule.weights]
    [0.75, 0.25]
    """
    family = orthopoly.PolyFamily(n, mu, nu)
    if m < 1:
        raise UnsupportedParametersError(
            f"Quadrature rules need m >= 1 interior nodes, got m={m}."
        )
    interior = orthopoly.roots(family, m)
    t, w = gegenbauer_gauss_rule(n, m + 1)

    weights = []
    if nu:
        r_minus = _nodal_square(t, interior, -1.0) * ((1 - t) / 2) ** mu
        weights.append(np.dot(w, r_minus))
    for j, lam in enumerate(interior):
        r_j = (
            _lagrange_square(t, interior, j)
            * ((1 - t) / (1 - lam)) ** mu
            * ((1 + t) / (1 + lam)) ** nu
        )
        weights.append(np.dot(w, r_j))
    if mu:
        r_plus = _nodal_square(t, interior, 1.0) * ((1 + t) / 2) ** nu
        weights.append(np.dot(w, r_plus))

    nodes = np.concatenate([[-1.0] * nu, interior, [1.0] * mu])
    rule = QuadratureRule(n, m, mu, nu, nodes, np.array(weights))
    logger.debug(
        "Rule %s: nodes %s, weights %s", rule.describe(), nodes, weights
    )
    return rule.validate()


def exactness_residual(rule, degree):
    """
    Largest moment error of a rule up to a degree.

    Parameters
    ----------
    rule : QuadratureRule
    degree : int

    Returns
    -------
    float
        ``max |sum(tau_j * lambda_j**k) - mu_k|`` over ``k = 0..degree``.
    """
    moments = orthopoly.family_moments(orthopoly.gegenbauer(rule.n), degree)
    powers = rule.nodes[None, :] ** np.arange(degree + 1)[:, None]
    return float(np.max(np.abs(powers @ rule.weights - moments)))
