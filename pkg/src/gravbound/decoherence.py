"""
Dephasing of quantum states by imperfect clocks.

The density matrix obeys

    d rho/dt = i[rho, H] - sigma(t) [[rho, H], H]

with H diagonal in the energy basis.  Populations are untouched and each
coherence rho_mn decays as exp(-Gamma_mn(t)).  Two normalizations of Gamma are
available (``DecoherenceParams.mode``):

``paper-exponent``
    Gamma = dw^2 tp^(4/3) t^(2/3), the closed form used for every downstream
    bound.
``integrated-sigma``
    Gamma = dw^2 (tp^(4/3)/24) (T^(2/3) - (T - t)^(2/3)), the exact integral
    of sigma(t) = (tp/36) (tp/(T - t))^(1/3).

Evolution runs in rescaled units (hbar = 1, frequencies of order one).
Physical-scale gate errors are computed in log space by :func:`not_gate_error`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, HorizonError, InstabilityError, ShapeError
from .numerics import LogScalar, RangeFlag, ZERO, from_real, log_mul, log_pow, to_real
from .physics import CODATA2018, PhysConstants

__all__ = [
    "PAPER_EXPONENT",
    "INTEGRATED_SIGMA",
    "MODES",
    "GATE_VARIANTS",
    "MAX_DIM",
    "Spectrum",
    "PureState",
    "DensityMatrix",
    "DecoherenceParams",
    "GateAnalysis",
    "sigma_of_t",
    "decoherence_exponent",
    "exponent_matrix",
    "propagate_analytic",
    "evolve_numeric",
    "sample_times",
    "overlap",
    "purity",
    "gate_analysis",
    "not_gate_error",
]

PAPER_EXPONENT = "paper-exponent"
INTEGRATED_SIGMA = "integrated-sigma"
MODES = (PAPER_EXPONENT, INTEGRATED_SIGMA)

GATE_VARIANTS = ("paper-linearized", "exact-one-minus-d", "fidelity-error")

MAX_DIM = 64
_TOL = 1e-10
_PSD_TOL = 1e-8
_LOG10_E = math.log10(math.e)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Energy eigenfrequencies in nondecreasing order, lowest one >= 0."""

    omegas: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ShapeError("omegas must be a nonempty 1-d sequence")
        if w.size > MAX_DIM:
            raise ShapeError(f"dimension {w.size} exceeds the dense cap of {MAX_DIM}")
        if not np.isfinite(w).all():
            raise DomainError("omegas must be finite")
        if np.any(np.diff(w) < 0):
            raise DomainError("omegas must be in nondecreasing order")
        if w[0] < 0:
            raise DomainError("lowest eigenfrequency must be >= 0")
        w.setflags(write=False)
        object.__setattr__(self, "omegas", w)

    def __len__(self):
        return self.omegas.size

    def gaps(self) -> np.ndarray:
        """Matrix of omega_m - omega_n."""
        return self.omegas[:, None] - self.omegas[None, :]


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.amplitudes, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ShapeError("amplitudes must be a nonempty 1-d sequence")
        norm = float(np.sum(np.abs(c) ** 2))
        if abs(norm - 1.0) > _TOL:
            raise DomainError(f"amplitudes are not normalized (sum |c|^2 = {norm!r})")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    def __len__(self):
        return self.amplitudes.size

    @classmethod
    def normalized(cls, amplitudes) -> PureState:
        c = np.asarray(amplitudes, dtype=complex)
        return cls(c / np.linalg.norm(c))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix in the energy basis."""

    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > _TOL:
            raise DomainError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > _TOL:
            raise DomainError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(rho).min() < -_PSD_TOL:
            raise DomainError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def _unchecked(cls, entries: np.ndarray) -> DensityMatrix:
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", entries)
        return obj

    @classmethod
    def from_pure(cls, state: PureState) -> DensityMatrix:
        c = state.amplitudes
        return cls(np.outer(c, c.conj()))

    @classmethod
    def maximally_mixed(cls, n: int) -> DensityMatrix:
        return cls(np.eye(n, dtype=complex) / n)

    def __len__(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class DecoherenceParams:
    """Clock-noise parameters in simulation units.

    ``t_p_eff = 0`` switches dephasing off (ordinary unitary evolution).
    ``t_max`` is the horizon; it is required by ``integrated-sigma`` mode and
    by :func:`sigma_of_t`.
    """

    t_p_eff: float
    mode: str = PAPER_EXPONENT
    t_max: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.t_p_eff) and self.t_p_eff >= 0):
            raise DomainError(f"t_p_eff must be >= 0, got {self.t_p_eff!r}")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.t_max is not None and not (math.isfinite(self.t_max) and self.t_max > 0):
            raise DomainError(f"t_max must be > 0, got {self.t_max!r}")
        if self.mode == INTEGRATED_SIGMA and self.t_max is None:
            raise DomainError("integrated-sigma mode requires t_max")


def _require_t_max(params: DecoherenceParams) -> float:
    if params.t_max is None:
        raise DomainError("t_max is required")
    return params.t_max


def sigma_of_t(t: float, params: DecoherenceParams) -> float:
    """Clock-noise diffusion rate (tp/36) (tp/(T - t))^(1/3)."""
    t_max = _require_t_max(params)
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if t >= t_max:
        raise HorizonError(f"sigma diverges at the horizon: t = {t!r} >= t_max = {t_max!r}")
    tp = params.t_p_eff
    return tp / 36.0 * (tp / (t_max - t)) ** (1.0 / 3.0)


def _horizon_fraction(t, t_max):
    # T^(2/3) - (T - t)^(2/3), without cancellation for t << T; log1p(-1) = -inf is fine at t = T
    with np.errstate(divide="ignore"):
        return -(t_max ** (2.0 / 3.0)) * np.expm1(2.0 / 3.0 * np.log1p(-np.asarray(t) / t_max))


def decoherence_exponent(delta_omega: float, t: float, params: DecoherenceParams) -> LogScalar:
    """Damping exponent Gamma of the coherence between levels separated by ``delta_omega``."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if delta_omega == 0 or t == 0 or params.t_p_eff == 0:
        return ZERO
    dw2 = log_pow(from_real(abs(delta_omega)), 2)
    tp43 = log_pow(from_real(params.t_p_eff), 4, 3)
    if params.mode == PAPER_EXPONENT:
        return log_mul(log_mul(dw2, tp43), log_pow(from_real(t), 2, 3))
    t_max = params.t_max
    if t > t_max:
        raise DomainError(f"integrated-sigma exponent needs t <= t_max, got t = {t!r} > {t_max!r}")
    bracket = from_real(float(_horizon_fraction(t, t_max)))
    return log_mul(log_mul(dw2, tp43 / 24.0), bracket)


def exponent_matrix(spectrum: Spectrum, t: float, params: DecoherenceParams) -> np.ndarray:
    """Native-precision Gamma_mn for all level pairs at time ``t``."""
    dw2 = spectrum.gaps() ** 2
    if t == 0 or params.t_p_eff == 0:
        return np.zeros_like(dw2)
    tp43 = params.t_p_eff ** (4.0 / 3.0)
    if params.mode == PAPER_EXPONENT:
        return dw2 * tp43 * t ** (2.0 / 3.0)
    if t > params.t_max:
        raise DomainError(f"integrated-sigma exponent needs t <= t_max, got {t!r}")
    return dw2 * (tp43 / 24.0) * _horizon_fraction(t, params.t_max)


def _initial_matrix(state) -> np.ndarray:
    if isinstance(state, PureState):
        c = state.amplitudes
        return np.outer(c, c.conj())
    if isinstance(state, DensityMatrix):
        return np.array(state.entries)
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def propagate_analytic(state, spectrum: Spectrum, t: float, params: DecoherenceParams) -> DensityMatrix:
    """Closed-form decohered evolution of a pure (or mixed) initial state."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    rho0 = _initial_matrix(state)
    if rho0.shape[0] != len(spectrum):
        raise ShapeError(f"state has dimension {rho0.shape[0]}, spectrum has {len(spectrum)}")
    gaps = spectrum.gaps()
    rho = rho0 * np.exp(-1j * gaps * t) * np.exp(-exponent_matrix(spectrum, t, params))
    np.fill_diagonal(rho, np.diag(rho0))
    return DensityMatrix._unchecked(rho)


def _clock_grid(t_end: float, steps: int, params: DecoherenceParams) -> np.ndarray:
    if t_end < 0:
        raise DomainError(f"t_end must be >= 0, got {t_end!r}")
    if int(steps) != steps or steps < 1:
        raise DomainError(f"steps must be a positive integer, got {steps!r}")
    if params.mode == INTEGRATED_SIGMA and t_end >= params.t_max:
        raise HorizonError(f"t_end must be < t_max (t_end = {t_end!r}, t_max = {params.t_max!r})")
    if t_end == 0:
        return np.zeros(1)
    if params.mode == PAPER_EXPONENT:
        return np.linspace(0.0, t_end ** (1.0 / 3.0), int(steps) + 1)
    return np.linspace(0.0, t_end, int(steps) + 1)


def sample_times(t_end: float, steps: int, params: DecoherenceParams) -> np.ndarray:
    """Time grid used by :func:`evolve_numeric`.

    ``paper-exponent`` mode steps uniformly in the cube-root clock s = t^(1/3),
    where its rate tp^(4/3) t^(2/3) becomes smooth; the other mode steps
    uniformly in t.
    """
    clock = _clock_grid(t_end, steps, params)
    return clock**3 if params.mode == PAPER_EXPONENT else clock


def _rk4_linear(coeff, y0: np.ndarray, grid: np.ndarray) -> list:
    """Classic fixed-step RK4 for y' = coeff(t) * y (elementwise) over ``grid``.

    ``coeff`` maps a 1-d array of times to the stacked coefficient arrays.
    Because the right-hand side is linear and elementwise, the four stages
    k_i = g_i * (y + ...) factor as k_i = a_i * y, so every step's increment
    (h/6)(k1 + 2 k2 + 2 k3 + k4) is y times a factor computed for all steps at
    once.  The sequential update is Kahan-compensated to keep the round-off
    floor below the truncation error.
    """
    h = np.diff(grid)
    g_start = coeff(grid)
    g1, g4 = g_start[:-1], g_start[1:]
    g2 = coeff(grid[:-1] + h / 2)
    with np.errstate(over="ignore", invalid="ignore"):
        h = h[:, None, None]
        a1 = g1
        a2 = g2 * (1 + (h / 2) * a1)
        a3 = g2 * (1 + (h / 2) * a2)
        a4 = g4 * (1 + h * a3)
        gain = (h / 6) * (a1 + 2 * (a2 + a3) + a4)

        ys = [y0]
        y = y0
        carry = np.zeros_like(y0)
        for q in gain:
            inc = y * q - carry
            new = y + inc
            carry = (new - y) - inc
            y = new
            ys.append(y)
    if not np.isfinite(y).all():
        bad = next(i for i, r in enumerate(ys) if not np.isfinite(r).all())
        raise InstabilityError(bad)
    return ys


def evolve_numeric(rho0: DensityMatrix, spectrum: Spectrum, t_end: float, steps: int,
                   params: DecoherenceParams) -> list[tuple[float, DensityMatrix]]:
    """Integrate the master equation with fixed-step classic RK4.

    Returns ``steps + 1`` samples ``(t, rho)`` including both endpoints (a
    single sample when ``t_end == 0``).  See :func:`sample_times` for the grid.
    """
    rho = _initial_matrix(rho0)
    if rho.shape[0] != len(spectrum):
        raise ShapeError(f"state has dimension {rho.shape[0]}, spectrum has {len(spectrum)}")
    clock = _clock_grid(t_end, steps, params)
    if clock.size == 1:
        return [(0.0, DensityMatrix._unchecked(rho))]

    # with H diagonal, [r, H]_mn = r_mn (w_n - w_m) and [[r, H], H]_mn = r_mn (w_n - w_m)^2,
    # so i[r, H] - sigma [[r, H], H] = r * (i gap - sigma gap^2)
    gap = -spectrum.gaps()
    i_gap = 1j * gap
    gap2 = gap * gap

    tp = params.t_p_eff
    if params.mode == PAPER_EXPONENT:
        # on the clock s = t^(1/3): dt/ds = 3 s^2 and sigma_eff dt/ds = 2 tp^(4/3) s
        k = 2.0 * tp ** (4.0 / 3.0)

        def coeff(s):
            s = s[:, None, None]
            return (3.0 * s * s) * i_gap - (k * s) * gap2

        times = clock**3
    else:
        def coeff(t):
            sig = np.array([sigma_of_t(x, params) for x in t])[:, None, None]
            return i_gap - sig * gap2

        times = clock

    traj = _rk4_linear(coeff, rho, clock)
    return [(float(t), DensityMatrix._unchecked(r)) for t, r in zip(times, traj)]


def overlap(rho_t: DensityMatrix, rho_0: DensityMatrix) -> float:
    """Survival overlap Tr(rho_t rho_0)."""
    a, b = rho_t.entries, rho_0.entries
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    tr = np.sum(a * b.T)
    if abs(tr.imag) > _TOL:
        raise DomainError(f"overlap has imaginary part {tr.imag!r}; inputs are not Hermitian")
    return float(tr.real)


def purity(rho: DensityMatrix) -> float:
    r = rho.entries
    return float(np.sum(np.abs(r) ** 2))


@dataclass(frozen=True)
class GateAnalysis:
    """Physical-unit quantities of a NOT gate driven with mean energy ``energy_j``."""

    energy_j: float
    t_op: LogScalar          # pi hbar / (2E), seconds
    delta_omega: LogScalar   # 2E / hbar, s^-1
    gamma: LogScalar         # dw^2 t_P^(4/3) t_op^(2/3)
    survival: LogScalar      # D = exp(-gamma)
    errors: dict

    def error(self, variant: str) -> LogScalar:
        return self.errors[variant]


def _one_minus_exp(gamma: LogScalar) -> LogScalar:
    g, flag = to_real(gamma)
    if flag is RangeFlag.OVERFLOW:
        return from_real(1.0)
    if flag is RangeFlag.UNDERFLOW or g < 1e-8:
        return log_mul(gamma, from_real(1.0 - g / 2.0))
    return from_real(-math.expm1(-g))


def gate_analysis(E: float, constants: PhysConstants = CODATA2018) -> GateAnalysis:
    if not (E > 0 and math.isfinite(E)):
        raise DomainError(f"gate energy must be positive, got {E!r}")
    energy = from_real(E)
    hbar = from_real(constants.hbar)
    t_op = from_real(math.pi / 2) * hbar / energy
    dw = from_real(2.0) * energy / hbar
    gamma = log_pow(dw, 2) * log_pow(from_real(constants.t_P), 4, 3) * log_pow(t_op, 2, 3)
    g, flag = to_real(gamma)
    if flag is RangeFlag.OVERFLOW:
        survival = ZERO
    else:
        survival = LogScalar(1, -g * _LOG10_E)
    one_minus_d = _one_minus_exp(gamma)
    errors = {
        # 4 t_P^(4/3) t^(2/3) (E/hbar)^2 is exactly gamma since dw = 2E/hbar
        "paper-linearized": gamma,
        "exact-one-minus-d": one_minus_d,
        "fidelity-error": one_minus_d / 2.0,
    }
    return GateAnalysis(E, t_op, dw, gamma, survival, errors)


def not_gate_error(E: float, variant: str = "paper-linearized",
                   constants: PhysConstants = CODATA2018) -> LogScalar:
    """Error probability of one NOT gate at mean energy ``E`` joules.

    The gate rotates (|E0> + |E1>)/sqrt2 into (|E0> - |E1>)/sqrt2 in the
    minimal time pi hbar/(2E), with level spacing 2E.  Variants:

    * ``paper-linearized``: 4 t_P^(4/3) t^(2/3) (E/hbar)^2, first order in Gamma
    * ``exact-one-minus-d``: 1 - exp(-Gamma)
    * ``fidelity-error``: (1 - exp(-Gamma))/2 = 1 - <psi1|rho(t)|psi1>
    """
    if variant not in GATE_VARIANTS:
        raise DomainError(f"variant must be one of {GATE_VARIANTS}, got {variant!r}")
    return gate_analysis(E, constants).error(variant)
