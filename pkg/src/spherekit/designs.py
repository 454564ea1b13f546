# -*- coding: utf-8 -*-
"""
Weighted spherical codes and their design properties.

A weighted code is a finite set of unit vectors in R^n with positive
weights summing to 1. It is a (weighted) spherical m-design if the
weighted double sums of the Gegenbauer polynomials ``P_k^{(n)}`` of the
pairwise dot products vanish for ``k = 1..m``.

SPDX-License-Identifier: MIT
"""
import json
import logging
from dataclasses import dataclass
from dataclasses import field
from enum import Enum

import numpy as np
import pandas as pd
from scipy.spatial.distance import pdist

from spherekit import orthopoly
from spherekit import tools
from spherekit.exceptions import CodeFormatError
from spherekit.exceptions import InternalConsistencyError
from spherekit.exceptions import InvalidDimensionError
from spherekit.exceptions import InvalidParameterError
from spherekit.exceptions import PreconditionError
from spherekit.quadrature import build_rule

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
CLUSTER_TOL = 1e-7
COINCIDENCE_TOL = 1e-12
RULE_CHECK_TOL = 1e-8
MAX_DEGREE = 30


@dataclass(frozen=True, eq=False)
class WeightedCode:
    """
    A finite set of unit vectors with weights.

    Parameters
    ----------
    points : array_like
        ``(N, n)`` array of unit vectors.
    weights : array_like
        ``N`` positive weights summing to 1.
    allow_zero_weights : bool
        Accept weights equal to 0. Only used for the antipodal augmentation
        of the energy bounds.

    Raises
    ------
    CodeFormatError
        On the first violated invariant.
    """

    points: np.ndarray
    weights: np.ndarray
    allow_zero_weights: bool = field(default=False, repr=False)

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        weights = np.array(self.weights, dtype=float)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        points.setflags(write=False)
        weights.setflags(write=False)
        self._validate()

    def _validate(self):
        points, weights = self.points, self.weights
        if points.ndim != 2 or points.shape[0] == 0:
            raise CodeFormatError(
                "points must be a non-empty list of vectors, got shape "
                f"{points.shape}."
            )
        if points.shape[1] < 2:
            raise InvalidDimensionError(
                f"Codes live in R^n with n >= 2, got n={points.shape[1]}."
            )
        if weights.shape != (points.shape[0],):
            raise CodeFormatError(
                f"Expected {points.shape[0]} weights, got {weights.shape}."
            )
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(weights))):
            raise CodeFormatError("Points and weights must be finite.")
        norms = np.linalg.norm(points, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > COINCIDENCE_TOL)
        if len(bad):
            raise CodeFormatError(
                f"Point {bad[0]} has norm {norms[bad[0]]!r}, not 1."
            )
        if self.allow_zero_weights:
            bad = np.flatnonzero(weights < 0)
        else:
            bad = np.flatnonzero(weights <= 0)
        if len(bad):
            raise CodeFormatError(
                f"Weight {bad[0]} is {weights[bad[0]]!r}, weights must be "
                "positive."
            )
        if abs(weights.sum() - 1) > COINCIDENCE_TOL:
            raise CodeFormatError(
                f"Weights sum to {weights.sum()!r}, not 1."
            )
        if len(points) > 1:
            dist = pdist(points)
            if dist.min() <= 1e-9:
                raise CodeFormatError(
                    "Points must be pairwise distinct, found chordal "
                    f"distance {dist.min()!r}."
                )

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def size(self):
        return self.points.shape[0]

    def gram(self):
        """Matrix of pairwise dot products clipped to [-1, 1]."""
        return np.clip(self.points @ self.points.T, -1.0, 1.0)

    def to_dict(self):
        return {
            "dim": int(self.dim),
            "points": self.points.tolist(),
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data, allow_zero_weights=False):
        """Build a code from the ``{"dim", "points", "weights"}`` layout."""
        if not isinstance(data, dict):
            raise CodeFormatError("A code document must be a JSON object.")
        for key in ("dim", "points", "weights"):
            if key not in data:
                raise CodeFormatError(f"Missing field '{key}'.")
        try:
            points = np.array(data["points"], dtype=float)
            weights = np.array(data["weights"], dtype=float)
        except (TypeError, ValueError) as err:
            raise CodeFormatError(f"Non-numeric entries: {err}") from err
        if points.ndim == 2 and points.shape[1] != data["dim"]:
            raise CodeFormatError(
                f"Field 'dim' is {data['dim']} but the points have "
                f"{points.shape[1]} coordinates."
            )
        return cls(points, weights, allow_zero_weights=allow_zero_weights)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_json(self):
        return tools.to_json(self.to_dict())

    @classmethod
    def read(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")


def equi_weighted(points):
    """Code with equal weights on the given points."""
    points = np.asarray(points, dtype=float)
    return WeightedCode(points, np.full(len(points), 1 / len(points)))


def gegenbauer_sums(code, kmax):
    """
    Weighted double sums ``sum w_i w_j P_k^{(n)}(x_i . x_j)``.

    Returns
    -------
    numpy.ndarray
        Sums for ``k = 0..kmax`` (index 0 is always 1).
    """
    values = orthopoly.evaluate_all(
        orthopoly.gegenbauer(code.dim), kmax, code.gram()
    )
    w = code.weights
    return np.einsum("i,kij,j->k", w, values, w)


def _default_max_degree(code):
    return min(2 * code.size + 1, MAX_DEGREE)


def design_strength(code, max_m=None, tol=DEFAULT_TOL):
    """
    Largest m for which a code is a weighted spherical m-design.

    Parameters
    ----------
    code : WeightedCode
    max_m : int
        Highest degree tested. Default: ``min(2N + 1, 30)``.
    tol : float
        Residual below which a double sum counts as zero.

    Returns
    -------
    tuple
        Certified strength and the residuals for ``k = 1..max_m``. The
        double sums are nonnegative in exact arithmetic and are clamped
        at 0.
    """
    if max_m is None:
        max_m = _default_max_degree(code)
    residuals = np.maximum(gegenbauer_sums(code, max_m)[1:], 0.0)
    failing = np.flatnonzero(residuals >= tol)
    strength = int(failing[0]) if len(failing) else int(max_m)
    return strength, residuals


def kk_strength(code, max_k=None, tol=DEFAULT_TOL):
    """
    Largest k for which a code is a (k,k)-design.

    Only the even degrees ``2, 4, .., 2k`` have to vanish. Every code is
    a (0,0)-design.

    Returns
    -------
    int
    """
    if max_k is None:
        max_k = _default_max_degree(code) // 2
    sums = np.maximum(gegenbauer_sums(code, 2 * max_k)[2::2], 0.0)
    failing = np.flatnonzero(sums >= tol)
    return int(failing[0]) if len(failing) else int(max_k)


@dataclass(frozen=True, eq=False)
class DotSpectrum:
    """Distinct dot products with a point and the weight carried by each."""

    values: np.ndarray
    masses: np.ndarray

    @property
    def size(self):
        return len(self.values)

    def to_dict(self):
        return {
            "values": [float(v) for v in self.values],
            "masses": [float(m) for m in self.masses],
        }

    def to_frame(self):
        return pd.DataFrame({"value": self.values, "mass": self.masses})


def _check_unit(z):
    z = np.asarray(z, dtype=float)
    if abs(np.linalg.norm(z) - 1) > COINCIDENCE_TOL:
        raise PreconditionError(
            f"Expected a unit vector, got norm {np.linalg.norm(z)!r}."
        )
    return z


def cluster_dots(dots, weights, cluster_tol=CLUSTER_TOL):
    """Single-linkage clusters of dot products with aggregated weights."""
    order = np.argsort(dots, kind="stable")
    dots = np.asarray(dots)[order]
    weights = np.asarray(weights)[order]
    breaks = np.flatnonzero(np.diff(dots) > cluster_tol) + 1
    values = []
    masses = []
    for group_dots, group_w in zip(
        np.split(dots, breaks), np.split(weights, breaks)
    ):
        mass = group_w.sum()
        if mass <= 0:
            continue
        values.append(np.dot(group_dots, group_w) / mass)
        masses.append(mass)
    return DotSpectrum(np.array(values), np.array(masses))


def dot_spectrum(code, z, cluster_tol=CLUSTER_TOL, exclude_self=False):
    """
    Distinct dot products of a point with the points of a code.

    Parameters
    ----------
    code : WeightedCode
    z : array_like
        Unit vector.
    cluster_tol : float
        Dot products closer than this are merged (single linkage).
    exclude_self : bool
        Leave out code points that coincide with ``z``.

    Returns
    -------
    DotSpectrum
        Values are weighted means of their clusters, masses are the summed
        weights (not renormalised after exclusion).
    """
    z = _check_unit(z)
    dots = np.clip(code.points @ z, -1.0, 1.0)
    weights = code.weights
    if exclude_self:
        keep = dots < 1 - COINCIDENCE_TOL
        dots, weights = dots[keep], weights[keep]
    return cluster_dots(dots, weights, cluster_tol)


def contains(code, z, tol=COINCIDENCE_TOL):
    """Whether ``z`` is a point of the code."""
    return bool(np.any(code.points @ np.asarray(z) >= 1 - tol))


def in_extremal_set(code, z, mu, nu):
    """Membership of z in the set where extremal points of type
    (mu, nu) may lie: the sphere, C, -C or C and -C."""
    if mu and not contains(code, z):
        return False
    if nu and not contains(code, -np.asarray(z)):
        return False
    return True


def _unique_directions(vectors):
    vectors = np.asarray(vectors, dtype=float)
    gram = vectors @ vectors.T
    dup = np.triu(gram >= 1 - COINCIDENCE_TOL, k=1).any(axis=0)
    unique = vectors[~dup]
    order = np.lexsort(unique.T[::-1])
    return unique[order]


def default_candidates(code):
    """
    Points tried as extremal points when none are given.

    The code points and their antipodes, the vectors ``+-e_j``, the
    normalised ``+-(1, .., 1)`` and the normalised midpoints of pairs of
    code points. Duplicates are removed and the result is sorted.
    """
    n = code.dim
    eye = np.eye(n)
    diag = np.ones((1, n)) / np.sqrt(n)
    parts = [code.points, -code.points, eye, -eye, diag, -diag]
    i, j = np.triu_indices(code.size, k=1)
    mids = code.points[i] + code.points[j]
    norms = np.linalg.norm(mids, axis=1)
    mids = mids[norms > 1e-9] / norms[norms > 1e-9, None]
    parts.append(mids)
    return _unique_directions(np.vstack(parts))


class DesignClass(str, Enum):
    NONE = "none"
    STIFF = "m-stiff"
    WEAKLY_SHARP_EVEN = "weakly-sharp-even"
    WEAKLY_SHARP_ODD = "weakly-sharp-odd"


@dataclass(frozen=True, eq=False)
class DesignCertificate:
    """
    Result of :func:`classify`.

    ``m``, ``mu`` and ``nu`` identify the quadrature rule the extremal
    points realise. They are None when ``design_class`` is NONE.
    """

    strength: int
    kk_strength: int
    design_class: DesignClass
    residuals: np.ndarray
    extremal_points: np.ndarray = field(
        default_factory=lambda: np.empty((0, 0))
    )
    m: int = None
    mu: int = None
    nu: int = None
    spectra: list = field(default_factory=list)

    def to_dict(self):
        return {
            "strength": self.strength,
            "kk_strength": self.kk_strength,
            "class": self.design_class.value,
            "m": self.m,
            "mu": self.mu,
            "nu": self.nu,
            "extremal_points": [list(p) for p in self.extremal_points],
            "spectra": [s.to_dict() for s in self.spectra],
            "residuals": list(self.residuals),
        }

    def residual_frame(self):
        return pd.DataFrame(
            {
                "degree": np.arange(1, len(self.residuals) + 1),
                "residual": self.residuals,
            }
        )

    def to_text(self):
        summary = self.to_dict()
        summary.pop("residuals")
        summary.pop("spectra")
        return "\n\n".join(
            [
                tools.mapping_to_text(summary),
                tools.frame_to_text(self.residual_frame().set_index("degree")),
            ]
        )


def _check_against_rule(code, spectrum, m, mu, nu, tol=RULE_CHECK_TOL):
    """Compare an extremal spectrum with the rule (n, m, mu, nu)."""
    rule = build_rule(code.dim, m, mu, nu)
    if spectrum.size != len(rule.nodes):
        return False
    return bool(
        np.max(np.abs(spectrum.values - rule.nodes)) <= tol
        and np.max(np.abs(spectrum.masses - rule.weights)) <= tol
    )


def _check_lower_spectrum_bound(code, candidates, spectra, strength):
    """
    A point of the extremal set of type (a, b) forms at least
    ``m + 1 + a + b`` dot products with a (2m + a + b)-design.
    """
    for a in (0, 1):
        for b in (0, 1):
            m = (strength - a - b) // 2
            if m < 0:
                continue
            for z, spectrum in zip(candidates, spectra):
                if not in_extremal_set(code, z, a, b):
                    continue
                if spectrum.size < m + 1 + a + b:
                    raise InternalConsistencyError(
                        f"Point {z} forms {spectrum.size} dot products with "
                        f"a {2 * m + a + b}-design, at least "
                        f"{m + 1 + a + b} are required. The strength or the "
                        "clustering tolerance is wrong."
                    )


def _search_order(strength):
    for degree in range(strength, 0, -1):
        if degree % 2:
            yield degree, 0, 0, DesignClass.STIFF
            yield degree, 1, 1, DesignClass.WEAKLY_SHARP_ODD
        else:
            yield degree, 1, 0, DesignClass.WEAKLY_SHARP_EVEN
            yield degree, 0, 1, DesignClass.WEAKLY_SHARP_EVEN


def classify(
    code,
    candidates=None,
    tol=DEFAULT_TOL,
    cluster_tol=CLUSTER_TOL,
    max_m=None,
):
    """
    Certify the strength of a code and look for extremal points.

    A (2m - 1 + mu + nu)-design is m-stiff (mu = nu = 0) or weakly sharp
    (otherwise) if some point of the sphere (mu = nu = 0), of C (1, 0), of
    -C (0, 1) or of C and -C (1, 1) forms at most ``m + mu + nu`` distinct
    dot products with the code. Such a point forms the nodes of the rule
    ``(n, m, mu, nu)`` with masses equal to its weights; this is checked
    for every extremal point found.

    Parameters
    ----------
    code : WeightedCode
    candidates : array_like
        Points to test. Default: :func:`default_candidates`.
    tol : float
        Residual tolerance of the strength certification.
    cluster_tol : float
        Clustering tolerance of the dot product spectra.
    max_m : int
        Highest degree tested.

    Returns
    -------
    DesignCertificate
    """
    strength, residuals = design_strength(code, max_m, tol)
    kk = kk_strength(code, len(residuals) // 2, tol)
    if candidates is None:
        candidates = default_candidates(code)
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    if candidates.size == 0:
        raise PreconditionError("At least one candidate point is needed.")
    if candidates.shape[1] != code.dim:
        raise InvalidDimensionError(
            f"Candidates have dimension {candidates.shape[1]}, the code "
            f"{code.dim}."
        )
    candidates = candidates / np.linalg.norm(candidates, axis=1)[:, None]
    logger.debug("Scanning %d candidates.", len(candidates))

    spectra = tools.parallel_map(
        lambda z: dot_spectrum(code, z, cluster_tol), candidates
    )
    _check_lower_spectrum_bound(code, candidates, spectra, strength)

    for degree, mu, nu, design_class in _search_order(strength):
        m = (degree + 1 - mu - nu) // 2
        if m < 1:
            continue
        found = [
            (z, spectrum)
            for z, spectrum in zip(candidates, spectra)
            if spectrum.size <= m + mu + nu
            and in_extremal_set(code, z, mu, nu)
        ]
        if not found:
            continue
        for z, spectrum in found:
            if not _check_against_rule(code, spectrum, m, mu, nu):
                raise InternalConsistencyError(
                    f"Extremal point {z} has spectrum {spectrum.to_dict()} "
                    f"which does not match the rule (n={code.dim}, m={m}, "
                    f"mu={mu}, nu={nu})."
                )
        logger.info(
            "Certified %s-design, class %s with m=%d.",
            strength,
            design_class.value,
            m,
        )
        return DesignCertificate(
            strength=strength,
            kk_strength=kk,
            design_class=design_class,
            residuals=residuals,
            extremal_points=np.array([z for z, _ in found]),
            m=m,
            mu=mu,
            nu=nu,
            spectra=[s for _, s in found],
        )
    logger.info("Certified %s-design without extremal points.", strength)
    return DesignCertificate(
        strength=strength,
        kk_strength=kk,
        design_class=DesignClass.NONE,
        residuals=residuals,
    )


def _check_mixing(alpha):
    if not 0 < alpha < 1:
        raise InvalidParameterError(
            f"The mixing parameter must lie in (0, 1), got {alpha}."
        )


def weighted_union(a, b, alpha):
    """
    The mixture ``alpha * a + (1 - alpha) * b`` of two weighted codes.

    Points of ``b`` that coincide with a point of ``a`` are merged into it.
    If both codes are m-designs, so is the union.

    Examples
    --------
    >>> x = equi_weighted([[1.0, 0.0], [-1.0, 0.0]])
    >>> weighted_union(x, x, 0.3).size
    2
    """
    if a.dim != b.dim:
        raise InvalidDimensionError(
            f"Cannot join codes in R^{a.dim} and R^{b.dim}."
        )
    _check_mixing(alpha)
    points = list(a.points)
    weights = list(alpha * a.weights)
    for x, w in zip(b.points, (1 - alpha) * b.weights):
        dots = np.asarray(points) @ x
        hit = int(np.argmax(dots))
        if dots[hit] >= 1 - COINCIDENCE_TOL:
            weights[hit] += w
        else:
            points.append(x)
            weights.append(w)
    return WeightedCode(np.array(points), np.array(weights))


def antipodal_double(code, alpha=0.5):
    """
    The code together with its antipodes.

    Each point keeps ``alpha`` of its weight and its antipode receives the
    remaining ``1 - alpha``.

    Raises
    ------
    PreconditionError
        If the code already contains an antipodal pair.
    """
    _check_mixing(alpha)
    gram = code.gram()
    if code.size > 1 and gram.min() <= -1 + COINCIDENCE_TOL:
        raise PreconditionError(
            "The code contains an antipodal pair and cannot be doubled."
        )
    return WeightedCode(
        np.vstack([code.points, -code.points]),
        np.concatenate([alpha * code.weights, (1 - alpha) * code.weights]),
    )
