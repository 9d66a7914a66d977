"""
Physical constants and computer descriptions.

Constants are pinned to CODATA 2018.  A computer is described by its mass,
characteristic size, stored bits and degree of parallelization; three named
presets cover the 1 kg "ultimate laptop", an Avogadro-scale computer and a
1 kg black hole.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Optional

from .errors import DomainError
from .numerics import LogScalar, from_real, log_div

__all__ = [
    "PhysConstants",
    "CODATA2018",
    "ComputerSpec",
    "PRESETS",
    "preset",
    "energy_to_angular_frequency",
    "load_constants",
    "CONSTANTS_ENV",
]

CONSTANTS_ENV = "GRAVBOUND_CONSTANTS"


@dataclass(frozen=True)
class PhysConstants:
    """SI constants.  ``t_P``, ``l_P`` and ``M_P`` are Planck time, length and mass."""

    c: float = 2.99792458e8
    hbar: float = 1.054571817e-34
    G: float = 6.67430e-11
    t_P: float = 5.391247e-44
    l_P: float = 1.616255e-35
    M_P: float = 2.176434e-8

    @classmethod
    def from_fundamental(cls, c: float, hbar: float, G: float) -> PhysConstants:
        """Build a constant set with the Planck quantities derived from c, hbar, G."""
        for name, v in (("c", c), ("hbar", hbar), ("G", G)):
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")
        t_P = math.sqrt(hbar * G / c**5)
        return cls(c=c, hbar=hbar, G=G, t_P=t_P, l_P=c * t_P, M_P=math.sqrt(hbar * c / G))

    @property
    def planck_energy(self) -> float:
        return self.hbar / self.t_P


CODATA2018 = PhysConstants()


def load_constants(path: Optional[str] = None) -> PhysConstants:
    """Constants from a JSON override file (keys c, hbar, G), else CODATA 2018.

    With no ``path`` the ``GRAVBOUND_CONSTANTS`` environment variable is consulted.
    """
    path = path or os.environ.get(CONSTANTS_ENV)
    if not path:
        return CODATA2018
    with open(path) as fh:
        data = json.load(fh)
    unknown = set(data) - {"c", "hbar", "G"}
    if unknown:
        raise DomainError(f"unknown constant override keys: {sorted(unknown)}")
    base = CODATA2018
    return PhysConstants.from_fundamental(
        c=float(data.get("c", base.c)),
        hbar=float(data.get("hbar", base.hbar)),
        G=float(data.get("G", base.G)),
    )


def energy_to_angular_frequency(E: float, constants: PhysConstants = CODATA2018) -> LogScalar:
    """Angular frequency E/hbar (s^-1) of an energy E in joules."""
    if E < 0:
        raise DomainError(f"energy must be nonnegative, got {E!r}")
    return log_div(from_real(E), from_real(constants.hbar))


@dataclass(frozen=True)
class ComputerSpec:
    mass_kg: float
    radius_m: float
    bits: float
    parallelism: float = 1.0
    energy_j: Optional[float] = None
    preset: Optional[str] = field(default=None, compare=False)
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("mass_kg", "radius_m", "bits", "parallelism"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")
        if self.parallelism < 1:
            raise DomainError(f"parallelism must be >= 1, got {self.parallelism!r}")
        if self.parallelism > self.bits:
            raise DomainError(
                f"parallelism ({self.parallelism:g}) cannot exceed bits ({self.bits:g})"
            )
        if self.energy_j is not None and not (math.isfinite(self.energy_j) and self.energy_j > 0):
            raise DomainError(f"energy_j must be positive, got {self.energy_j!r}")

    def energy(self, constants: PhysConstants = CODATA2018) -> float:
        """Energy budget in joules; the full rest energy unless set explicitly."""
        if self.energy_j is not None:
            return self.energy_j
        return self.mass_kg * constants.c**2

    def to_json(self) -> dict:
        d = asdict(self)
        del d["notes"], d["preset"]
        return d

    @classmethod
    def from_json(cls, data: dict) -> ComputerSpec:
        known = {"mass_kg", "radius_m", "bits", "parallelism", "energy_j"}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown spec fields: {sorted(unknown)}")
        missing = {"mass_kg", "radius_m", "bits"} - set(data)
        if missing:
            raise DomainError(f"missing spec fields: {sorted(missing)}")
        kwargs = {}
        for k, v in data.items():
            if v is None and k == "energy_j":
                continue
            try:
                kwargs[k] = float(v)
            except (TypeError, ValueError):
                raise DomainError(f"spec field {k!r} is not a number: {v!r}") from None
        return cls(**kwargs)


def _black_hole(mass_kg: float, constants: PhysConstants) -> ComputerSpec:
    return ComputerSpec(
        mass_kg=mass_kg,
        radius_m=2.0 * constants.G * mass_kg / constants.c**2,
        bits=(mass_kg / constants.M_P) ** 2,
        parallelism=1.0,
        preset="black-hole-1kg",
        notes=(
            "black hole: bits from Bekenstein L = (M/M_P)^2, radius = 2GM/c^2 "
            "(Schwarzschild factor 2 kept; the closed-form black-hole bound omits it)",
        ),
    )


PRESETS = ("ultimate-laptop", "avogadro", "black-hole-1kg")


def preset(name: str, constants: PhysConstants = CODATA2018) -> ComputerSpec:
    if name == "ultimate-laptop":
        return ComputerSpec(mass_kg=1.0, radius_m=0.1, bits=1e31, parallelism=1e10, preset=name)
    if name == "avogadro":
        return ComputerSpec(
            mass_kg=1.0,
            radius_m=0.1,
            bits=1e25,
            parallelism=1.0,
            preset=name,
            notes=("avogadro: radius 0.1 m is assumed (not stated by the source estimate)",),
        )
    if name == "black-hole-1kg":
        return _black_hole(1.0, constants)
    raise LookupError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
