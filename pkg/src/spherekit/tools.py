# -*- coding: utf-8 -*-
"""Tools needed by the main modules: report formatting and thread control.

SPDX-License-Identifier: MIT
"""
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

THREADS_VARIABLE = "SPHEREKIT_THREADS"
TABLE_DIGITS = 12


def thread_count():
    """
    Number of worker threads allowed by ``SPHEREKIT_THREADS``.

    Returns
    -------
    int
        The value of the variable, 1 if it is unset or invalid.
    """
    raw = os.environ.get(THREADS_VARIABLE)
    if raw is None:
        return 1
    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        logger.warning(
            "Ignoring %s=%r, expected a positive integer.",
            THREADS_VARIABLE,
            raw,
        )
        return 1
    return count


def parallel_map(func, items):
    """
    Apply ``func`` to every item, possibly in worker threads.

    The result list is in the order of ``items`` whatever the thread count.
    """
    items = list(items)
    workers = min(thread_count(), max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def plain(value):
    """
    Convert numpy containers and scalars to JSON-ready Python objects.

    Non-finite floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
    """
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def to_json(data):
    """
    Render a report as deterministic JSON (sorted keys, shortest
    round-trip floats).

    Examples
    --------
    >>> print(to_json({"b": 1 / 3, "a": [1.0, float("inf")]}))
    {
      "a": [
        1.0,
        "inf"
      ],
      "b": 0.3333333333333333
    }
    """
    return json.dumps(plain(data), sort_keys=True, indent=2)


def format_float(value):
    return f"{value:.{TABLE_DIGITS}g}"


def frame_to_text(frame):
    """Aligned text table with 12 significant digits."""
    return frame.to_string(float_format=format_float)


def _cell(value):
    value = plain(value)
    if isinstance(value, list):
        return ", ".join(_cell(v) for v in value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def mapping_to_frame(data):
    """
    Two-column frame (``field``, ``value``) of a flat report mapping.

    Nested lists are joined with commas, nested mappings are flattened with
    dotted keys.
    """
    rows = []

    def collect(prefix, obj):
        if isinstance(obj, dict):
            for key in sorted(obj):
                collect(f"{prefix}{key}.", obj[key])
        else:
            rows.append((prefix[:-1], _cell(obj)))

    collect("", data)
    return pd.DataFrame(rows, columns=["field", "value"])


def mapping_to_text(data):
    return frame_to_text(mapping_to_frame(data).set_index("field"))


def frame_to_csv(frame):
    return frame.to_csv(index=False, float_format="%.17g")
