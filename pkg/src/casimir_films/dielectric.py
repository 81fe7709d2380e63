"""Dielectric responses on the imaginary frequency axis.

Frequencies are photon energies in eV throughout. Three kinds of per-axis
model are supported:

* :class:`OscillatorSet` - Lorentz/Drude oscillators evaluated in closed form,
* :class:`ImaginaryAxisResponse` - a tabulated ``eps(i xi)`` with a
  ``1 + A / xi**2`` tail,
* :class:`AbsorptionSpectrum` - real-axis ``eps''(omega)`` samples, turned into
  an :class:`ImaginaryAxisResponse` by :func:`london_transform`.

A :class:`DielectricTensorModel` bundles three axis models along the film's
principal axes (z = surface normal, y = chain direction).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .quadrature import QuadratureConfig, integrate_finite

__all__ = [
    "DielectricError",
    "Oscillator",
    "OscillatorSet",
    "AbsorptionSpectrum",
    "ImaginaryAxisResponse",
    "DielectricTensorModel",
    "eval_oscillator",
    "eval_tabulated",
    "eval_axis",
    "eval_tensor",
    "london_transform",
]

# slack for rounding when checking monotone tabulated data
_MONOTONE_RTOL = 1e-12


class DielectricError(ValueError):
    """Invalid dielectric data or an evaluation outside the domain."""


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(np.isnan(xi)):
        raise DielectricError("imaginary frequency xi must be >= 0")
    return xi


@dataclass(frozen=True)
class Oscillator:
    """One term ``plasma**2 / (resonance**2 + xi**2 + damping * xi)`` (all eV)."""

    plasma: float
    resonance: float
    damping: float = 0.0

    def __post_init__(self):
        for name in ("plasma", "resonance", "damping"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise DielectricError(f"oscillator {name} must be finite and >= 0, got {value}")

    @property
    def is_pure_plasma(self) -> bool:
        return self.resonance == 0 and self.damping == 0


@dataclass(frozen=True)
class OscillatorSet:
    oscillators: tuple = ()
    epsilon_infinity: float = 1.0

    def __post_init__(self):
        object.__setattr__(
            self, "oscillators",
            tuple(o if isinstance(o, Oscillator) else Oscillator(*o) for o in self.oscillators),
        )
        if not self.epsilon_infinity >= 1:
            raise DielectricError(f"epsilon_infinity must be >= 1, got {self.epsilon_infinity}")

    @classmethod
    def single(cls, plasma, resonance, damping=0.0, epsilon_infinity=1.0):
        return cls((Oscillator(plasma, resonance, damping),), epsilon_infinity)

    def static(self) -> float:
        """Value at xi = 0 (infinite if a free-carrier term is present)."""
        return float(eval_oscillator(self, 0.0))


@dataclass(frozen=True)
class AbsorptionSpectrum:
    """Samples of ``eps''(omega)`` on a strictly increasing positive grid."""

    omega: tuple
    eps2: tuple

    def __post_init__(self):
        omega = tuple(float(w) for w in self.omega)
        eps2 = tuple(float(e) for e in self.eps2)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "eps2", eps2)
        if len(omega) != len(eps2):
            raise DielectricError("omega and eps2 must have equal length")
        if len(omega) < 2:
            raise DielectricError("absorption spectrum needs at least 2 samples")
        w = np.array(omega)
        if not np.all(np.isfinite(w)) or w[0] <= 0:
            raise DielectricError("absorption frequencies must be finite and > 0")
        if np.any(np.diff(w) <= 0):
            raise DielectricError("absorption frequencies must be strictly increasing")
        e = np.array(eps2)
        if not np.all(np.isfinite(e)):
            raise DielectricError("eps2 values must be finite")
        if np.any(e < 0):
            raise DielectricError("passivity violated: eps2 must be >= 0")

    def __call__(self, omega):
        """Linear interpolation inside the sampled support, zero outside."""
        omega = np.asarray(omega, dtype=float)
        w = self._omega
        out = np.interp(omega, w, self._eps2)
        return np.where((omega < w[0]) | (omega > w[-1]), 0.0, out)

    @cached_property
    def _omega(self):
        return np.array(self.omega)

    @cached_property
    def _eps2(self):
        return np.array(self.eps2)


@dataclass(frozen=True)
class ImaginaryAxisResponse:
    """Tabulated ``eps(i xi)``.

    Linear interpolation on the grid, constant below it and
    ``1 + tail_coefficient / xi**2`` above it, with the coefficient fixed by
    continuity at the last node.
    """

    xi: tuple
    eps: tuple

    def __post_init__(self):
        xi = tuple(float(x) for x in self.xi)
        eps = tuple(float(e) for e in self.eps)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eps", eps)
        if len(xi) != len(eps):
            raise DielectricError("xi and eps must have equal length")
        if len(xi) < 1:
            raise DielectricError("tabulated response needs at least one node")
        x = np.array(xi)
        e = np.array(eps)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(e))):
            raise DielectricError("tabulated values must be finite")
        if x[0] < 0:
            raise DielectricError("xi grid must be >= 0")
        if np.any(np.diff(x) <= 0):
            raise DielectricError("xi grid must be strictly increasing")
        if np.any(e < 1):
            raise DielectricError("eps(i xi) must be >= 1")
        if np.any(np.diff(e) > _MONOTONE_RTOL * e[:-1]):
            raise DielectricError("eps(i xi) must be non-increasing along the grid")

    @property
    def tail_coefficient(self) -> float:
        """``A`` in ``eps ~ 1 + A / xi**2`` beyond the grid (eV**2)."""
        return (self.eps[-1] - 1.0) * self.xi[-1] ** 2

    @cached_property
    def _xi(self):
        return np.array(self.xi)

    @cached_property
    def _eps(self):
        return np.array(self.eps)


AxisModel = Union[OscillatorSet, ImaginaryAxisResponse]


def eval_oscillator(model: OscillatorSet, xi):
    """``eps_inf + sum_j wp_j**2 / (w0_j**2 + xi**2 + gamma_j * xi)``.

    Accepts a scalar or an array of ``xi >= 0``. Pure plasma and Drude terms
    diverge at ``xi = 0`` and return ``inf`` there.
    """
    xi = _check_xi(xi)
    eps = np.full(xi.shape, float(model.epsilon_infinity))
    with np.errstate(divide="ignore"):
        for osc in model.oscillators:
            eps = eps + osc.plasma ** 2 / (osc.resonance ** 2 + xi * xi + osc.damping * xi)
    return eps if eps.ndim else float(eps)


def eval_tabulated(response: ImaginaryAxisResponse, xi):
    xi = _check_xi(xi)
    grid = response._xi
    table = response._eps
    # np.interp clamps to the end values below the grid
    eps = np.interp(xi, grid, table)
    above = xi > grid[-1]
    if np.any(above):
        if grid[-1] == 0 and table[-1] > 1:
            raise DielectricError("grid ending at xi = 0 leaves the tail undefined")
        tail = 1.0 + response.tail_coefficient / np.where(above, xi, 1.0) ** 2
        eps = np.where(above, tail, eps)
    return eps if np.ndim(eps) else float(eps)


def eval_axis(model: AxisModel, xi):
    if isinstance(model, OscillatorSet):
        return eval_oscillator(model, xi)
    if isinstance(model, ImaginaryAxisResponse):
        return eval_tabulated(model, xi)
    raise TypeError(f"not an axis model: {type(model).__name__}")


@dataclass(frozen=True)
class DielectricTensorModel:
    """Diagonal dielectric tensor in the film frame."""

    xx: AxisModel
    yy: AxisModel
    zz: AxisModel

    def __post_init__(self):
        for name in ("xx", "yy", "zz"):
            if not isinstance(getattr(self, name), (OscillatorSet, ImaginaryAxisResponse)):
                raise TypeError(
                    f"axis model {name} must be an OscillatorSet or ImaginaryAxisResponse; "
                    "london-transform absorption spectra first"
                )

    @classmethod
    def isotropic(cls, model):
        return cls(model, model, model)

    @classmethod
    def uniaxial(cls, parallel, perpendicular):
        return cls(parallel, parallel, perpendicular)

    @property
    def classification(self) -> str:
        lateral_equal = self.xx == self.yy
        if lateral_equal and self.xx == self.zz:
            return "isotropic"
        if lateral_equal:
            return "uniaxial"
        return "biaxial"


def eval_tensor(tensor: DielectricTensorModel, xi):
    """Principal components ``(eps_xx, eps_yy, eps_zz)`` at ``xi``."""
    xi = _check_xi(xi)
    kind = tensor.classification
    exx = eval_axis(tensor.xx, xi)
    eyy = exx if kind != "biaxial" else eval_axis(tensor.yy, xi)
    ezz = exx if kind == "isotropic" else eval_axis(tensor.zz, xi)
    return exx, eyy, ezz


def london_transform(spectrum: AbsorptionSpectrum, xi_grid: Sequence[float],
                     config: QuadratureConfig | None = None) -> ImaginaryAxisResponse:
    """Kramers-Kronig transform of an absorption spectrum onto the imaginary axis.

    ``eps(i xi) = 1 + (2 / pi) * int omega eps''(omega) / (omega**2 + xi**2) d omega``

    The integral runs over the sampled support, one panel per sample
    interval so the kinks of the piecewise-linear interpolant sit on panel
    edges.
    """
    if not isinstance(spectrum, AbsorptionSpectrum):
        raise DielectricError("london_transform needs an AbsorptionSpectrum")
    grid = np.asarray(xi_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DielectricError("xi grid must be a non-empty 1-D sequence")
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise DielectricError("xi grid must be >= 0 and strictly increasing")
    config = config or QuadratureConfig(rel_tol=1e-10)

    omega = spectrum._omega
    if not np.any(spectrum._eps2 > 0):
        return ImaginaryAxisResponse(tuple(grid), (1.0,) * grid.size)

    values = []
    for xi in grid:
        def kernel(w, xi=xi):
            return w * spectrum(w) / (w * w + xi * xi)

        integral, _ = integrate_finite(kernel, omega[0], omega[-1], config, breakpoints=omega[1:-1])
        values.append(1.0 + 2.0 / np.pi * integral)
    return ImaginaryAxisResponse(tuple(grid), tuple(values))
