"""
Closed-form limits on computation speed.

Every bound is evaluated in log space and returned as a :class:`LogScalar`.
Formulas are the order-of-magnitude expressions as printed: O(1) factors
(pi/2 from the gate time, 4 from the gate error, 2/pi in n <= 2E/pi) are not
reinstated in the decoherence-limited bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .numerics import ONE, LogScalar, compare, from_real, log_div, log_mul, log_pow
from .physics import CODATA2018, ComputerSpec, PhysConstants

__all__ = [
    "BoundReport",
    "ClockLimit",
    "AVOGADRO_ML_REFERENCE_LOG10",
    "margolus_levitin_ops",
    "clock_limit",
    "max_error_rate",
    "serial_decoherence_error",
    "gravitational_ops_bound",
    "black_hole_ops_bound",
    "degree_of_parallelization",
    "parallel_error_constraint",
    "bound_report",
]

GRAVITATIONAL = "gravitational"
MARGOLUS_LEVITIN = "margolus-levitin"

# quoted Margolus-Levitin figure for the Avogadro computer; its energy budget is not given
AVOGADRO_ML_REFERENCE_LOG10 = 40.0

ORDER_OF_MAGNITUDE_NOTE = "order-of-magnitude bound; O(1) factors dropped"


def _positive(**kwargs):
    for name, v in kwargs.items():
        if isinstance(v, LogScalar):
            if v.sign != 1:
                raise DomainError(f"{name} must be positive, got {v!r}")
        elif not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")


def _ls(x) -> LogScalar:
    return x if isinstance(x, LogScalar) else from_real(x)


def margolus_levitin_ops(E: float, constants: PhysConstants = CODATA2018) -> LogScalar:
    """Maximum logical operations per second, 2E/(pi hbar), at mean energy E (J)."""
    _positive(E=E)
    return log_div(log_mul(from_real(2.0), _ls(E)), from_real(math.pi * constants.hbar))


@dataclass(frozen=True)
class ClockLimit:
    t: float
    delta_t_min: LogScalar


def clock_limit(t: float, constants: PhysConstants = CODATA2018) -> ClockLimit:
    """Best achievable clock uncertainty t_P^(2/3) t^(1/3) after elapsed time t (s)."""
    _positive(t=t)
    dt = log_mul(log_pow(from_real(constants.t_P), 2, 3), log_pow(from_real(t), 1, 3))
    return ClockLimit(t, dt)


def max_error_rate(L, R, n, constants: PhysConstants = CODATA2018) -> LogScalar:
    """Largest correctable error per operation, L c / (n R)."""
    _positive(L=L, R=R, n=n)
    return log_div(log_mul(_ls(L), from_real(constants.c)), log_mul(_ls(n), _ls(R)))


def degree_of_parallelization(L, R, n, constants: PhysConstants = CODATA2018) -> LogScalar:
    """d_p ~ 1/eps_max = n R / (L c)."""
    return log_div(from_real(1.0), max_error_rate(L, R, n, constants))


def serial_decoherence_error(E, constants: PhysConstants = CODATA2018) -> LogScalar:
    """Decoherence error per operation of a computer spending all of E on one gate.

    t_P^(4/3) (1/E)^(2/3) E^2 with E read as the angular frequency E/hbar.
    """
    _positive(E=E)
    omega = log_div(_ls(E), from_real(constants.hbar))
    return log_mul(
        log_mul(log_pow(from_real(constants.t_P), 4, 3), log_pow(omega, -2, 3)),
        log_pow(omega, 2),
    )


def gravitational_ops_bound(L, R, d_p, constants: PhysConstants = CODATA2018) -> LogScalar:
    """n <= (1/t_P)^(4/7) (c L/R)^(3/7) d_p^(4/7), in operations per second."""
    _positive(L=L, R=R, d_p=d_p)
    if compare(_ls(d_p), ONE) < 0:
        raise DomainError(f"d_p must be >= 1, got {d_p!r}")
    inv_tp = log_div(from_real(1.0), from_real(constants.t_P))
    bandwidth = log_div(log_mul(from_real(constants.c), _ls(L)), _ls(R))
    return log_mul(
        log_mul(log_pow(inv_tp, 4, 7), log_pow(bandwidth, 3, 7)),
        log_pow(_ls(d_p), 4, 7),
    )


def parallel_error_constraint(E_eff, d_p, constants: PhysConstants = CODATA2018) -> LogScalar:
    """Left side of the parallel error constraint, t_P^(4/3) (d_p/E)^(2/3) (E/d_p)^2.

    ``E_eff`` is an angular frequency (natural units, hbar = 1), so the rate
    bound n < E_eff can be substituted directly.
    """
    _positive(E_eff=E_eff, d_p=d_p)
    per_gate = log_div(_ls(E_eff), _ls(d_p))
    return log_mul(
        log_mul(log_pow(from_real(constants.t_P), 4, 3), log_pow(per_gate, -2, 3)),
        log_pow(per_gate, 2),
    )


def black_hole_ops_bound(M, constants: PhysConstants = CODATA2018) -> LogScalar:
    """n <= (M/M_P)^(3/7) / t_P for a black-hole computer of mass M (kg)."""
    _positive(M=M)
    ratio = log_div(_ls(M), from_real(constants.M_P))
    return log_div(log_pow(ratio, 3, 7), from_real(constants.t_P))


@dataclass(frozen=True)
class BoundReport:
    spec: ComputerSpec
    ml_ops_per_s: LogScalar
    grav_ops_per_s: LogScalar
    serial_error: LogScalar
    eps_max: LogScalar
    implied_dp: LogScalar
    binding_bound: str
    notes: list = field(default_factory=list)

    LOG_FIELDS = ("ml_ops_per_s", "grav_ops_per_s", "serial_error", "eps_max", "implied_dp")

    def to_json(self) -> dict:
        out = {"spec": self.spec.to_json()}
        for name in self.LOG_FIELDS:
            out[name] = getattr(self, name).to_json()
        out["binding_bound"] = self.binding_bound
        out["notes"] = list(self.notes)
        return out


def bound_report(spec: ComputerSpec, constants: PhysConstants = CODATA2018) -> BoundReport:
    E = spec.energy(constants)
    ml = margolus_levitin_ops(E, constants)
    grav = gravitational_ops_bound(spec.bits, spec.radius_m, spec.parallelism, constants)
    eps = max_error_rate(spec.bits, spec.radius_m, ml, constants)
    binding = GRAVITATIONAL if compare(grav, ml) <= 0 else MARGOLUS_LEVITIN
    notes = [
        ORDER_OF_MAGNITUDE_NOTE,
        "decoherence exponent mode: paper-exponent",
        "serial_error is the bare t_P^(4/3) E^(-2/3) E^2 combination (gate-error variant: "
        "paper-linearized without its 4 (pi/2)^(2/3) prefactor)",
        "eps_max and implied_dp are evaluated at n = ml_ops_per_s",
    ]
    if spec.energy_j is None:
        notes.append(f"energy budget E = m c^2 = {E:.6g} J")
    else:
        notes.append(f"energy budget E = {E:.6g} J (explicit)")
    notes.extend(spec.notes)
    if spec.preset == "black-hole-1kg":
        bh = black_hole_ops_bound(spec.mass_kg, constants)
        notes.append(f"closed-form black-hole bound (M/M_P)^(3/7)/t_P = 10^{bh.log10_mag:.2f} op/s")
    if spec.preset == "avogadro":
        notes.append(
            f"quoted Margolus-Levitin reference for this computer is 10^{AVOGADRO_ML_REFERENCE_LOG10:.0f} "
            "op/s (implied energy budget not stated); "
            + ("gravitational bound is tighter" if grav.log10_mag < AVOGADRO_ML_REFERENCE_LOG10
               else "gravitational bound is looser")
        )
    return BoundReport(
        spec=spec,
        ml_ops_per_s=ml,
        grav_ops_per_s=grav,
        serial_error=serial_decoherence_error(E, constants),
        eps_max=eps,
        implied_dp=log_div(from_real(1.0), eps),
        binding_bound=binding,
        notes=notes,
    )
