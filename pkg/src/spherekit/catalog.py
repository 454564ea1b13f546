# -*- coding: utf-8 -*-
"""
Named weighted codes with closed-form coordinates.

Every entry documents the design strength and class it is certified with
and, where the code can serve as the reference of an energy bound, the
set A of its dot products other than +-1.

SPDX-License-Identifier: MIT
"""
import itertools
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Callable

import numpy as np
from scipy.linalg import helmert

from spherekit import designs
from spherekit.energy import SymmetricNodeSet
from spherekit.exceptions import ParseError
from spherekit.exceptions import UnsupportedParametersError

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12


def _normalize(points):
    points = np.asarray(points, dtype=float)
    return points / np.linalg.norm(points, axis=1)[:, None]


def _check_int(name, value, lowest):
    if int(value) != value or value < lowest:
        raise UnsupportedParametersError(
            f"Parameter {name} must be an integer >= {lowest}, got {value}."
        )
    return int(value)


def square_pyramid():
    """
    Apex ``(0, 0, 1)`` with weight 1/4 and the four points
    ``(+-2, +-2, -1) / 3`` with weight 3/16 each.
    """
    base = [(sx * 2, sy * 2, -1) for sx in (1, -1) for sy in (1, -1)]
    points = _normalize([(0, 0, 3)] + base)
    return designs.WeightedCode(points, [1 / 4] + [3 / 16] * 4)


def simplex(n=3):
    """Regular simplex with ``n + 1`` vertices, pairwise dot ``-1/n``."""
    n = _check_int("n", n, 2)
    # columns of the Helmert matrix are orthogonal to (1, .., 1)
    vertices = helmert(n + 1).T
    return designs.equi_weighted(_normalize(vertices))


def cross_polytope(n=3):
    """The ``2n`` points ``+-e_j``."""
    n = _check_int("n", n, 2)
    eye = np.eye(n)
    return designs.equi_weighted(np.vstack([eye, -eye]))


def _sign_vectors(n):
    return np.array(list(itertools.product((1, -1), repeat=n)), dtype=float)


def _minus_parity(signs):
    return (signs < 0).sum(axis=1) % 2


def cube(n=3, w0=None, w1=None):
    """
    The ``2**n`` vectors ``(+-1, .., +-1) / sqrt(n)``.

    Vertices with an even number of minus signs get weight ``w0``, the
    others ``w1``. ``w0 + w1`` must be ``2**(1 - n)``; by default both are
    ``2**-n``.
    """
    n = _check_int("n", n, 2)
    if (w0 is None) != (w1 is None):
        raise UnsupportedParametersError("Give both w0 and w1 or neither.")
    if w0 is None:
        w0 = w1 = 2.0**-n
    if w0 <= 0 or w1 <= 0 or abs(w0 + w1 - 2.0 ** (1 - n)) > WEIGHT_TOL:
        raise UnsupportedParametersError(
            f"Cube weights must be positive with w0 + w1 = 2**(1 - n) = "
            f"{2.0 ** (1 - n)}, got w0={w0}, w1={w1}."
        )
    signs = _sign_vectors(n)
    weights = np.where(_minus_parity(signs) == 0, w0, w1)
    return designs.WeightedCode(_normalize(signs), weights)


def demihypercube(n=4, parity=0):
    """
    Cube vertices with an even (``parity=0``) or odd (``parity=1``) number
    of minus signs, equally weighted.
    """
    n = _check_int("n", n, 2)
    if parity not in (0, 1):
        raise UnsupportedParametersError(
            f"parity must be 0 or 1, got {parity}."
        )
    signs = _sign_vectors(n)
    return designs.equi_weighted(
        _normalize(signs[_minus_parity(signs) == parity])
    )


def regular_ngon(N=5):
    """``N`` equally spaced points on the unit circle."""
    N = _check_int("N", N, 2)
    angles = 2 * np.pi * np.arange(N) / N
    points = np.column_stack([np.cos(angles), np.sin(angles)])
    return designs.equi_weighted(points)


def icosahedron():
    """Cyclic permutations of ``(0, +-1, +-phi)``, normalised."""
    phi = (1 + np.sqrt(5)) / 2
    points = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        v = (0.0, s1 * 1.0, s2 * phi)
        for shift in range(3):
            points.append(v[-shift:] + v[:-shift] if shift else v)
    return designs.equi_weighted(_normalize(points))


def cell24():
    """All permutations of ``(+-1, +-1, 0, 0) / sqrt(2)``."""
    points = []
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = np.zeros(4)
            v[i], v[j] = si, sj
            points.append(v)
    return designs.equi_weighted(_normalize(points))


def symmetrized_simplex(n=3):
    """The regular simplex together with its antipodes."""
    return designs.antipodal_double(simplex(n), 0.5)


def _simplex_nodes(n=3):
    return SymmetricNodeSet([-1 / n, 1 / n])


def _ngon_nodes(N=5):
    if N % 2:
        return None
    j = np.arange(1, N // 2)
    values = np.cos(2 * np.pi * j / N)
    # cos(pi / 2) is not exactly 0
    values[np.abs(values) < 1e-15] = 0.0
    return SymmetricNodeSet(values)


def _ngon_expected(N=5):
    if N % 2:
        return {
            "strength": N - 1,
            "design_class": "weakly-sharp-even",
            "m": (N - 1) // 2,
        }
    return {"strength": N - 1, "design_class": "m-stiff", "m": N // 2}


def _cube_expected(n=3, w0=None, w1=None):
    if w0 is None or n >= 4 or abs(w0 - w1) <= WEIGHT_TOL:
        return {"strength": 3, "design_class": "m-stiff", "m": 2}
    return {}


def _demihypercube_expected(n=4, parity=0):
    if n == 3:
        return {"strength": 2, "design_class": "weakly-sharp-even", "m": 1}
    if n >= 4:
        return {"strength": 3, "design_class": "m-stiff", "m": 2}
    return {}


def _symmetrized_expected(n=3):
    if n == 3:
        return {"strength": 3, "design_class": "m-stiff", "m": 2}
    return {"strength": 3} if n > 3 else {}


@dataclass(frozen=True)
class CatalogEntry:
    """
    A named code.

    ``expected`` and ``nodes`` are callables of the same keyword parameters
    as ``builder``: the documented certification results and the set A of
    the code (None if it is no energy reference).
    """

    name: str
    builder: Callable
    expected: Callable
    nodes: Callable = field(default=lambda **kw: None)
    defaults: dict = field(default_factory=dict)


ENTRIES = {
    entry.name: entry
    for entry in [
        CatalogEntry(
            "square_pyramid",
            square_pyramid,
            lambda: {
                "strength": 2,
                "design_class": "weakly-sharp-even",
                "m": 1,
            },
        ),
        CatalogEntry(
            "simplex",
            simplex,
            lambda n=3: {
                "strength": 2,
                "design_class": "weakly-sharp-even",
                "m": 1,
                "kk_strength": 2 if n == 2 else 1,
            },
            _simplex_nodes,
            {"n": 3},
        ),
        CatalogEntry(
            "cross_polytope",
            cross_polytope,
            lambda n=3: {
                "strength": 3,
                "design_class": "m-stiff",
                "m": 2,
                "kk_strength": 1,
            },
            lambda n=3: SymmetricNodeSet([0.0]),
            {"n": 3},
        ),
        CatalogEntry(
            "cube", cube, _cube_expected, defaults={"n": 3}
        ),
        CatalogEntry(
            "demihypercube",
            demihypercube,
            _demihypercube_expected,
            defaults={"n": 4, "parity": 0},
        ),
        CatalogEntry(
            "regular_ngon",
            regular_ngon,
            _ngon_expected,
            _ngon_nodes,
            {"N": 5},
        ),
        CatalogEntry(
            "icosahedron",
            icosahedron,
            lambda: {
                "strength": 5,
                "design_class": "weakly-sharp-odd",
                "m": 2,
            },
            lambda: SymmetricNodeSet([-1 / np.sqrt(5), 1 / np.sqrt(5)]),
        ),
        CatalogEntry(
            "cell24",
            cell24,
            lambda: {"strength": 5, "design_class": "m-stiff", "m": 3},
            lambda: SymmetricNodeSet([-0.5, 0.0, 0.5]),
        ),
        CatalogEntry(
            "symmetrized_simplex",
            symmetrized_simplex,
            _symmetrized_expected,
            _simplex_nodes,
            {"n": 3},
        ),
    ]
}


def names():
    return sorted(ENTRIES)


def entry(name):
    try:
        return ENTRIES[name]
    except KeyError:
        raise UnsupportedParametersError(
            f"Unknown catalog entry '{name}'. Use one of {names()}."
        ) from None


def _call(func, params):
    try:
        return func(**params)
    except TypeError as err:
        raise UnsupportedParametersError(
            f"Invalid parameters {params}: {err}"
        ) from err


def make(name, **params):
    """
    Build a catalog code.

    Examples
    --------
    >>> make("cross_polytope", n=4).size
    8
    """
    return _call(entry(name).builder, params)


def expected(name, **params):
    """Documented certification results of a catalog code."""
    return _call(entry(name).expected, params)


def frame_nodes(name, **params):
    """The set A of a catalog code, None if it has none."""
    return _call(entry(name).nodes, params)


def parse_spec(text):
    """
    Split ``"name:key=value,key=value"`` into a name and parameters.

    Examples
    --------
    >>> parse_spec("cube:n=4,w0=0.1,w1=0.025")
    ('cube', {'n': 4, 'w0': 0.1, 'w1': 0.025})
    """
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UnsupportedParametersError(
                f"Expected key=value in '{item}'."
            )
        try:
            number = float(value)
        except ValueError:
            raise ParseError(
                f"Parameter {key.strip()} of '{name}' is not a number: "
                f"'{value}'."
            ) from None
        params[key.strip()] = int(number) if number.is_integer() else number
    return name.strip(), params


def listing():
    """Names, default parameters and documented results of all entries."""
    return [
        {
            "name": name,
            "defaults": ENTRIES[name].defaults,
            "expected": expected(name, **ENTRIES[name].defaults),
            "has_frame_nodes": frame_nodes(
                name, **ENTRIES[name].defaults
            )
            is not None,
        }
        for name in names()
    ]
