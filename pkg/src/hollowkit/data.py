"""Shipped example pairs and their measured residual floors."""
from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .matrix import matrix_from_json_obj

FIXTURES = (
    "canonical_pair_2x2",
    "nonzeroable_pair_3x3",
    "partially_zeroable_3x3",
    "zeroable_without_conditions_21",
    "zeroable_without_conditions_11",
    "traceless_not_cohollowizable_3x3",
    "nonhermitian_control",
    "hollow_almost_hollow_counterexamples_3x3",
)


def load_fixture(name: str) -> dict:
    """Raw JSON for a fixture, by name without extension."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}")
    text = resources.files("hollowkit").joinpath("fixtures", f"{name}.json").read_text()
    return json.loads(text)


def matrix(obj) -> np.ndarray:
    """Real ``{"n", "rows"}`` or complex ``{"n", "real", "imag"}`` matrix."""
    if "real" in obj:
        return np.array(obj["real"], dtype=np.float64) + 1j * np.array(obj["imag"], dtype=np.float64)
    return matrix_from_json_obj(obj)


def pair(name: str):
    d = load_fixture(name)
    return matrix(d["L"]), matrix(d["M"])
