"""Zero-temperature Lifshitz energy and pressure between two films.

Film 1 sits below the gap and film 2 above it; film 2 is described by the
same :class:`~casimir_films.reflection.Film` data as a film probed from
above and mirrored internally. The integrals are evaluated in the scaled
variables ``u = 2 L xi / hbar c`` and ``y = 2 kappa L`` so the decay scale
of the integrand does not depend on the separation::

    E = hbar c / (64 pi^3 L^3) int_0^inf du int dtheta int_u^inf y  ln det(1 - M) dy
    P = -hbar c / (64 pi^3 L^4) int_0^inf du int dtheta int_u^inf y^2 Tr[M (1 - M)^-1] dy

with ``M = R1 R2 exp(-y)``. The u-integral stops at ``U_CUTOFF`` and the
analytic bound on the remainder is added to the reported error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .quadrature import (
    QuadratureConfig,
    QuadratureError,
    integrate_finite,
    integrate_semi_infinite,
)
from .reflection import HBAR_C_EV_NM, Film, PerfectMirror, mirror_flip, reflection

__all__ = [
    "EV_PER_NM2_IN_J_PER_M2",
    "EV_PER_NM3_IN_PA",
    "GapScenario",
    "ForcePoint",
    "ForceCurve",
    "LifshitzError",
    "integrand_logdet",
    "integrand_trace",
    "casimir_point",
    "energy_per_area",
    "pressure",
    "sweep",
    "force_ratio_curve",
    "ideal_energy",
    "ideal_pressure",
    "tail_bound",
]

EV_PER_NM2_IN_J_PER_M2 = 0.1602176634
EV_PER_NM3_IN_PA = 1.602176634e8

# |pressure| below this (Pa) cannot serve as a ratio baseline
PRESSURE_FLOOR = 1e-300


class LifshitzError(ArithmeticError):
    """det(1 - M) <= 0: some reflection matrix is not passive."""


@dataclass(frozen=True)
class GapScenario:
    film_1: Film | PerfectMirror
    film_2: Film | PerfectMirror
    separation: float  # nm

    def __post_init__(self):
        if not self.separation > 0 or not math.isfinite(self.separation):
            raise ValueError("separation must be positive and finite")


@dataclass(frozen=True)
class ForcePoint:
    separation: float  # nm
    energy_per_area: float | None  # J/m^2
    pressure: float | None  # Pa, negative = attractive
    rel_err: float


@dataclass(frozen=True)
class ForceCurve:
    points: tuple
    ratios: tuple | None = None

    def __post_init__(self):
        seps = [p.separation for p in self.points]
        if any(b <= a for a, b in zip(seps, seps[1:])):
            raise ValueError("separations must be strictly increasing")
        if self.ratios is not None and len(self.ratios) != len(self.points):
            raise ValueError("one ratio per point required")

    @property
    def separations(self):
        return np.array([p.separation for p in self.points])

    @property
    def pressures(self):
        return np.array([p.pressure for p in self.points])


def ideal_energy(separation):
    """``-pi^2 hbar c / (720 L^3)`` in J/m^2 for ``L`` in nm."""
    return -math.pi ** 2 * HBAR_C_EV_NM / (720.0 * separation ** 3) * EV_PER_NM2_IN_J_PER_M2


def ideal_pressure(separation):
    """``-pi^2 hbar c / (240 L^4)`` in Pa for ``L`` in nm."""
    return -math.pi ** 2 * HBAR_C_EV_NM / (240.0 * separation ** 4) * EV_PER_NM3_IN_PA


def _round_trip(r1, r2, kappa, separation):
    factor = np.exp(-2.0 * np.asarray(kappa) * separation)
    return np.matmul(r1, r2) * np.asarray(factor)[..., None, None]


def _det_parts(m):
    m00 = m[..., 0, 0]
    m11 = m[..., 1, 1]
    cross = m[..., 0, 1] * m[..., 1, 0]
    a = 1.0 - m00
    b = 1.0 - m11
    det = a * b - cross
    if np.any(det <= 0) or np.any(np.isnan(det)):
        raise LifshitzError("det(1 - R1 R2 exp(-2 kappa L)) <= 0: reflection passivity violated upstream")
    return m00, m11, cross, a, b, det


def _logdet(m):
    m00, m11, cross, a, b, _ = _det_parts(m)
    return np.log1p(-m00) + np.log1p(-m11) + np.log1p(-cross / (a * b))


def _trace(m):
    m00, m11, cross, _, _, det = _det_parts(m)
    return (m00 + m11 - 2.0 * (m00 * m11 - cross)) / det


def integrand_logdet(r1, r2, kappa, separation):
    """``ln det(1 - R1 R2 exp(-2 kappa L))``, accurate when the round trip is small.

    ``r1`` and ``r2`` are ``(..., 2, 2)`` arrays in a common basis (``r2``
    already mirrored for a film facing down). ``kappa`` in nm^-1, ``L`` in nm.
    """
    if np.any(np.asarray(kappa) <= 0) or not separation > 0:
        raise ValueError("kappa and separation must be positive")
    return _logdet(_round_trip(r1, r2, kappa, separation))


def integrand_trace(r1, r2, kappa, separation):
    """``Tr[M (1 - M)^-1]`` with ``M = R1 R2 exp(-2 kappa L)``."""
    if np.any(np.asarray(kappa) <= 0) or not separation > 0:
        raise ValueError("kappa and separation must be positive")
    return _trace(_round_trip(r1, r2, kappa, separation))


def _angular_plan(film_1, film_2):
    """How to do the azimuthal integral: ``None`` -> factor 2 pi,
    otherwise ``(start, stop, multiplier)``."""
    sym1 = film_1.azimuthally_symmetric
    sym2 = film_2.azimuthally_symmetric
    if sym1 and sym2:
        return None
    if sym1 or sym2:
        base = film_2.orientation if sym1 else film_1.orientation
        return base, base + 0.5 * math.pi, 4.0
    delta = (film_1.orientation - film_2.orientation) % (0.5 * math.pi)
    if min(delta, 0.5 * math.pi - delta) < 1e-12:
        base = film_1.orientation
        return base, base + 0.5 * math.pi, 4.0
    # only theta -> theta + pi survives
    return 0.0, math.pi, 2.0


_COMPONENTS = ("energy", "pressure")

#: Outer cutoff in u. Beyond it the integrand is below exp(-U) and the
#: reflection coefficients carry only rounding noise (eps - 1 ~ 1e-7 at
#: nanometre gaps), which stalls any relative-tolerance refinement.
U_CUTOFF = 60.0


def tail_bound(upper, want=_COMPONENTS):
    """Bound on the scaled integrals over ``u > upper``.

    Uses ``|ln det(1 - M)| <= -2 ln(1 - e^-y)`` and
    ``|Tr M (1 - M)^-1| <= 2 e^-y / (1 - e^-y)``, valid whenever the
    reflection matrices are contractions (passive media, perfect mirrors),
    and includes the full 2 pi azimuthal range.
    """
    decay = 4.0 * math.pi * math.exp(-upper) / -math.expm1(-upper)
    polys = {"energy": upper + 2.0, "pressure": upper * upper + 4.0 * upper + 6.0}
    return np.array([decay * polys[name] for name in want])


def _integrand_factory(scenario, want):
    film_1 = scenario.film_1
    film_2 = scenario.film_2
    same = film_1 == film_2
    length = scenario.separation
    two_l = 2.0 * length
    use_energy = "energy" in want
    use_pressure = "pressure" in want

    def kernel(u, y, theta):
        # u scalar; y (n,) and theta scalar or (m,) broadcast to (n, m)
        if np.ndim(theta):
            y = y[:, None] + np.zeros(np.shape(theta))
        xi = HBAR_C_EV_NM * u / two_l
        kappa = y / two_l
        k = np.sqrt(np.maximum((y - u) * (y + u), 0.0)) / two_l
        xi_arr = np.full_like(y, xi)
        r1 = reflection(film_1, xi_arr, k, theta)
        r2 = mirror_flip(r1 if same else reflection(film_2, xi_arr, k, theta))
        m = _round_trip(r1, r2, kappa, length)
        cols = []
        if use_energy:
            cols.append(y * _logdet(m))
        if use_pressure:
            cols.append(y * y * _trace(m))
        return np.stack(cols, axis=-1)

    return kernel


def _nested(integrate, *args):
    """Run an inner level; its failure leaves no usable outer estimate."""
    try:
        return integrate(*args)
    except QuadratureError as exc:
        raise QuadratureError(f"inner integral: {exc}", float("nan"), float("nan")) from exc


def _integrate(scenario, config, want):
    """Scaled triple integral; returns (values, rel_err) per component.

    A level keeps ``1 - inner_factor`` of its relative budget and hands the
    rest to its children, so for sign-definite integrands the reported
    bound stays within ``config.rel_tol``.
    """
    config = config or QuadratureConfig()
    kernel = _integrand_factory(scenario, want)
    plan = _angular_plan(scenario.film_1, scenario.film_2)
    keep = 1.0 - config.inner_factor
    child_cfg = config.inner()

    if plan is None:
        factor = 2.0 * math.pi

        def outer(us):
            rows = [
                _nested(integrate_semi_infinite, lambda y, u=u: kernel(u, y + u, 0.0), 0.0, child_cfg)[0]
                for u in us
            ]
            return np.array(rows)
    else:
        start, stop, factor = plan
        mid_own = replace(child_cfg, rel_tol=child_cfg.rel_tol * keep)
        inner_cfg = child_cfg.inner()

        def middle(u):
            def along(thetas):
                # one joint y-integral for all theta nodes of the panel
                return _nested(integrate_semi_infinite, lambda y: kernel(u, y + u, thetas), 0.0, inner_cfg)[0]

            return _nested(integrate_finite, along, start, stop, mid_own)[0]

        def outer(us):
            return np.array([middle(u) for u in us])

    try:
        total, err = integrate_finite(outer, 0.0, U_CUTOFF, replace(config, rel_tol=config.rel_tol * keep))
    except QuadratureError as exc:
        exc.value = np.asarray(exc.value) * factor
        exc.error = np.asarray(exc.error) * factor
        raise
    total = np.asarray(total) * factor
    err = np.asarray(err) * factor + tail_bound(U_CUTOFF, want)
    scale = np.maximum(np.abs(total), config.abs_floor)
    rel = np.where(total == 0, 0.0, err / scale + child_cfg.rel_tol)
    return total, rel


def _to_physical(values, want, length):
    out = {}
    for name, val in zip(want, values):
        if name == "energy":
            out[name] = HBAR_C_EV_NM / (64 * math.pi ** 3 * length ** 3) * val * EV_PER_NM2_IN_J_PER_M2
        else:
            out[name] = -HBAR_C_EV_NM / (64 * math.pi ** 3 * length ** 4) * val * EV_PER_NM3_IN_PA
    return out


def casimir_point(scenario: GapScenario, config: QuadratureConfig | None = None,
                  want=_COMPONENTS) -> ForcePoint:
    """Energy per area and/or pressure at one separation.

    Raises
    ------
    QuadratureError
        If the outer integral does not converge; ``value``/``error`` are the
        best estimates converted to J/m^2 and Pa (in ``want`` order).
    """
    want = tuple(want)
    length = scenario.separation
    try:
        values, rel = _integrate(scenario, config, want)
    except QuadratureError as exc:
        best = np.atleast_1d(np.asarray(exc.value, dtype=float))
        if best.size == len(want):
            phys = _to_physical(best, want, length)
            scale = np.maximum(np.abs(best), 1e-300)
            exc.value = tuple(phys[name] for name in want)
            exc.error = float(np.max(np.atleast_1d(exc.error) / scale))
        raise
    phys = _to_physical(np.atleast_1d(values), want, length)
    return ForcePoint(
        separation=length,
        energy_per_area=float(phys["energy"]) if "energy" in phys else None,
        pressure=float(phys["pressure"]) if "pressure" in phys else None,
        rel_err=float(np.max(rel)),
    )


def energy_per_area(scenario, config=None) -> ForcePoint:
    return casimir_point(scenario, config, want=("energy",))


def pressure(scenario, config=None) -> ForcePoint:
    return casimir_point(scenario, config, want=("pressure",))


def _point_task(args):
    film_1, film_2, length, config, want = args
    return casimir_point(GapScenario(film_1, film_2, length), config, want)


def sweep(film_1, film_2, separations, config=None, want=_COMPONENTS, executor=None) -> ForceCurve:
    """Evaluate a separation grid. With an ``executor`` (any
    ``concurrent.futures`` executor) points run concurrently; results are
    collected in grid order either way."""
    tasks = [(film_1, film_2, float(L), config, tuple(want)) for L in separations]
    if executor is None:
        points = [_point_task(t) for t in tasks]
    else:
        points = list(executor.map(_point_task, tasks))
    return ForceCurve(tuple(points))


def force_ratio_curve(numerator, baseline, separations, config=None, executor=None) -> ForceCurve:
    """Pressure ratios ``P_num(L) / P_base(L)`` on a common grid.

    ``numerator`` and ``baseline`` are ``(film_1, film_2)`` pairs. Returns
    the numerator curve with ``ratios`` filled in.
    """
    num = sweep(*numerator, separations, config, executor=executor)
    base = sweep(*baseline, separations, config, executor=executor)
    ratios = []
    for p_num, p_base in zip(num.points, base.points):
        if not abs(p_base.pressure) > PRESSURE_FLOOR:
            raise LifshitzError(
                f"baseline pressure {p_base.pressure!r} Pa at L = {p_base.separation} nm "
                "is below the numerical floor"
            )
        ratios.append(p_num.pressure / p_base.pressure)
    return ForceCurve(num.points, tuple(ratios))
