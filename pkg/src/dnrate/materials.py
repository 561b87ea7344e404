"""Thermal material records, tabulated presets and the 51CrV4 steel model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Material:
    """Constant thermal coefficients of one subdomain.

    ``alpha`` is the volumetric heat capacity ``rho * cp`` and ``d`` the
    thermal diffusivity ``lambda / alpha``; both are derived on construction.
    """

    lam: float
    rho: float
    cp: float
    name: str = ""
    alpha: float = field(init=False)
    d: float = field(init=False)

    def __post_init__(self):
        for label, value in (("lambda", self.lam), ("rho", self.rho), ("cp", self.cp)):
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{label} must be positive and finite, got {value!r}")
        object.__setattr__(self, "alpha", self.rho * self.cp)
        object.__setattr__(self, "d", self.lam / self.alpha)


def material_from(lam: float, rho: float, cp: float, name: str = "") -> Material:
    return Material(lam, rho, cp, name)


# lambda [W/(m K)], rho [kg/m^3], cp [J/(kg K)]
PRESETS = {
    "air": (0.0243, 1.293, 1005.0),
    "water": (0.58, 999.7, 4192.1),
    "steel": (48.9, 7836.0, 443.0),
}

# Volumetric heat capacities as tabulated alongside the presets.
TABULATED_ALPHA = {"air": 1299.5, "water": 4.1908e6, "steel": 3471348.0}


def preset(name: str) -> Material:
    """Return the tabulated material ``name`` (air, water or steel)."""
    try:
        lam, rho, cp = PRESETS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown material {name!r}; choose from {sorted(PRESETS)}") from None
    return Material(lam, rho, cp, name.lower())


def load_materials(path) -> dict[str, Material]:
    """Read materials from a text file with lines ``name lambda rho cp``.

    Blank lines are skipped and ``#`` starts a comment.
    """
    materials = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 'name lambda rho cp', got {raw!r}")
        name = parts[0]
        try:
            lam, rho, cp = (float(p) for p in parts[1:])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric coefficient in {raw!r}") from None
        try:
            materials[name] = Material(lam, rho, cp, name)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return materials


def resolve_material(name: str, extra: dict[str, Material] | None = None) -> Material:
    if extra and name in extra:
        return extra[name]
    return preset(name)


# --- temperature dependent steel 51CrV4 ------------------------------------

def steel_lambda(theta):
    """Heat conductivity of 51CrV4 steel, cubic fit in the temperature."""
    return 40.1 + 0.05 * theta - 0.0001 * theta**2 + 4.9e-8 * theta**3


def steel_cp_branches(theta):
    """The two branches ``(cp1, cp2)`` blended by :func:`steel_cp`."""
    cp1 = 34.2 * np.exp(0.0026 * theta) + 421.15
    cp2 = 956.5 * np.exp(-0.012 * (theta - 900.0)) + 0.45 * theta
    return cp1, cp2


def steel_cp(theta):
    """Specific heat capacity of 51CrV4 steel.

    Soft minimum ``-10 ln((exp(-cp1/10) + exp(-cp2/10)) / 2)`` of the two
    branches, evaluated with the smaller branch factored out so that neither
    exponential underflows.
    """
    cp1, cp2 = steel_cp_branches(theta)
    lo, hi = np.minimum(cp1, cp2), np.maximum(cp1, cp2)
    return lo + 10.0 * math.log(2.0) - 10.0 * np.log1p(np.exp(-(hi - lo) / 10.0))


def steel_at(theta, rho: float = 7836.0) -> Material:
    return Material(float(steel_lambda(theta)), rho, float(steel_cp(theta)), f"steel@{theta:g}")
