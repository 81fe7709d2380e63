"""Zero-temperature Lifshitz energy and pressure."""
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from casimir_films.dielectric import DielectricTensorModel, OscillatorSet
from casimir_films.lifshitz import (
    U_CUTOFF,
    ForceCurve,
    ForcePoint,
    GapScenario,
    LifshitzError,
    casimir_point,
    energy_per_area,
    force_ratio_curve,
    ideal_energy,
    ideal_pressure,
    integrand_logdet,
    integrand_trace,
    pressure,
    sweep,
    tail_bound,
)
from casimir_films.materials import sample_film
from casimir_films.quadrature import QuadratureConfig, QuadratureError
from casimir_films.reflection import HALF_SPACE, Film, PerfectMirror

from scenarios import biaxial_degenerate_film, isotropic_film, uniaxial_degenerate_film


def diag(a, b):
    return np.diag([a, b]).astype(float)


# -- integrands -----------------------------------------------------------------

def test_logdet_no_reflection():
    zero = np.zeros((2, 2))
    assert integrand_logdet(zero, zero, 0.1, 10.0) == 0.0


def test_logdet_ideal_mirrors():
    kappa, length = 0.03, 20.0
    x = 2 * kappa * length
    value = integrand_logdet(np.eye(2), np.eye(2), kappa, length)
    assert value == pytest.approx(math.log((1 - math.exp(-x)) ** 2), rel=1e-14)


def test_logdet_diagonal_example():
    r = diag(-0.5, 0.8)
    kappa = -math.log(0.1) / 2.0
    value = integrand_logdet(r, r, kappa, 1.0)
    assert value == pytest.approx(math.log(0.975) + math.log(0.936), rel=1e-13)


def test_logdet_small_round_trip_accuracy():
    r = np.array([[-0.3, 0.02], [-0.02, 0.4]])
    kappa, length = 1.0, 20.0  # e^-40: plain log(det) would return 0
    value = integrand_logdet(r, r, kappa, length)
    m = r @ r * math.exp(-40.0)
    assert value == pytest.approx(-np.trace(m), rel=1e-12)
    assert value < 0


def test_logdet_matches_direct_evaluation():
    rng = np.random.default_rng(3)
    r1 = rng.uniform(-0.6, 0.6, (50, 2, 2))
    r2 = rng.uniform(-0.6, 0.6, (50, 2, 2))
    kappa = rng.uniform(0.01, 0.2, 50)
    value = integrand_logdet(r1, r2, kappa, 5.0)
    m = r1 @ r2 * np.exp(-10.0 * kappa)[:, None, None]
    direct = np.log(np.linalg.det(np.eye(2) - m))
    np.testing.assert_allclose(value, direct, rtol=1e-12, atol=1e-15)


def test_trace_matches_direct_evaluation():
    rng = np.random.default_rng(4)
    r1 = rng.uniform(-0.6, 0.6, (50, 2, 2))
    r2 = rng.uniform(-0.6, 0.6, (50, 2, 2))
    kappa = rng.uniform(0.01, 0.2, 50)
    value = integrand_trace(r1, r2, kappa, 5.0)
    m = r1 @ r2 * np.exp(-10.0 * kappa)[:, None, None]
    direct = np.trace(m @ np.linalg.inv(np.eye(2) - m), axis1=-2, axis2=-1)
    np.testing.assert_allclose(value, direct, rtol=1e-12, atol=1e-15)


def test_trace_is_kappa_derivative_of_logdet():
    r1 = np.array([[-0.4, 0.05], [-0.05, 0.6]])
    r2 = np.array([[-0.3, -0.02], [0.02, 0.5]])
    kappa, length, h = 0.02, 10.0, 1e-6
    slope = (integrand_logdet(r1, r2, kappa, length + h)
             - integrand_logdet(r1, r2, kappa, length - h)) / (2 * h)
    assert slope == pytest.approx(2 * kappa * integrand_trace(r1, r2, kappa, length), rel=1e-7)


def test_nonpassive_reflection_detected():
    with pytest.raises(LifshitzError, match="passivity"):
        integrand_logdet(diag(3.0, 0.0), diag(3.0, 0.0), 0.01, 1.0)


def test_integrand_domain():
    with pytest.raises(ValueError):
        integrand_logdet(np.eye(2), np.eye(2), 0.0, 1.0)


# -- ideal mirrors --------------------------------------------------------------

@pytest.mark.parametrize("length", [10.0, 100.0, 1000.0])
def test_ideal_mirror_recovery(length):
    point = casimir_point(GapScenario(PerfectMirror(), PerfectMirror(), length))
    assert point.energy_per_area == pytest.approx(ideal_energy(length), rel=1e-6)
    assert point.pressure == pytest.approx(ideal_pressure(length), rel=1e-6)
    assert point.rel_err < 1e-7


def test_ideal_closed_form_values():
    assert ideal_energy(100.0) == pytest.approx(-4.334e-7, rel=1e-3)
    assert ideal_pressure(100.0) == pytest.approx(-13.00, rel=1e-3)
    assert ideal_pressure(1000.0) == pytest.approx(-1.300e-3, rel=1e-3)


def test_tail_bound_is_negligible():
    bound = tail_bound(U_CUTOFF)
    # far below any meaningful scaled integral (ideal mirrors give ~27 and ~10^2)
    assert np.all(bound < 1e-20)
    assert np.all(tail_bound(10.0) > bound)


# -- physical properties ------------------------------------------------------------

def test_vacuum_films_give_zero():
    vacuum = Film(2.0, DielectricTensorModel.isotropic(OscillatorSet()))
    point = casimir_point(GapScenario(vacuum, vacuum, 50.0))
    assert point.energy_per_area == 0.0
    assert point.pressure == 0.0


@pytest.mark.parametrize("kind", ["bulk", "passivated"])
def test_attractive(kind):
    film = sample_film(kind)
    point = casimir_point(GapScenario(film, film, 30.0))
    assert point.energy_per_area < 0 and point.pressure < 0
    assert point.rel_err < 1e-7


def test_pressure_magnitude_decreases():
    film = sample_film("passivated")
    curve = sweep(film, film, [2.0, 10.0, 50.0, 250.0], want=("pressure",))
    assert np.all(np.diff(np.abs(curve.pressures)) < 0)
    assert curve.points[0].energy_per_area is None


def test_energy_and_pressure_wrappers():
    film = isotropic_film(HALF_SPACE)
    scenario = GapScenario(film, film, 40.0)
    both = casimir_point(scenario)
    e = energy_per_area(scenario)
    p = pressure(scenario)
    assert e.pressure is None and p.energy_per_area is None
    assert e.energy_per_area == pytest.approx(both.energy_per_area, rel=1e-7)
    assert p.pressure == pytest.approx(both.pressure, rel=1e-7)


def test_gradient_consistency_half_space():
    film = isotropic_film(HALF_SPACE)
    length = 60.0
    h = 1e-3 * length
    e_plus = energy_per_area(GapScenario(film, film, length + h)).energy_per_area
    e_minus = energy_per_area(GapScenario(film, film, length - h)).energy_per_area
    # energy is J/m^2 with L in nm: the derivative needs 1e9 nm/m
    slope = (e_plus - e_minus) / (2 * h) * 1e9
    p = pressure(GapScenario(film, film, length)).pressure
    assert -slope == pytest.approx(p, rel=1e-4)


def test_thickness_limit_monotone():
    length = 50.0
    half = pressure(GapScenario(isotropic_film(HALF_SPACE), isotropic_film(HALF_SPACE), length)).pressure
    values = []
    for d in (length, 10 * length, 100 * length):
        film = isotropic_film(d)
        values.append(pressure(GapScenario(film, film, length)).pressure)
    gaps = [abs(v - half) for v in values]
    assert gaps[0] > gaps[1] > gaps[2]
    assert abs(values[0]) < abs(values[1]) < abs(values[2]) <= abs(half) * (1 + 1e-7)
    assert values[2] == pytest.approx(half, rel=1e-6)


def test_isotropic_consistency_chain():
    length = 40.0
    results = []
    for build in (isotropic_film, uniaxial_degenerate_film, biaxial_degenerate_film):
        film = build(1.9)
        results.append(pressure(GapScenario(film, film, length)).pressure)
    assert results[1] == pytest.approx(results[0], rel=1e-8)
    assert results[2] == pytest.approx(results[0], rel=1e-8)


def test_distinct_films_symmetric():
    a = sample_film("passivated")
    b = sample_film("bulk", 3.0)
    p_ab = pressure(GapScenario(a, b, 25.0)).pressure
    p_ba = pressure(GapScenario(b, a, 25.0)).pressure
    assert p_ab == pytest.approx(p_ba, rel=1e-7)
    p_aa = pressure(GapScenario(a, a, 25.0)).pressure
    p_bb = pressure(GapScenario(b, b, 25.0)).pressure
    # the mixed pair lies between the two like pairs
    assert min(p_aa, p_bb) <= p_ab <= max(p_aa, p_bb)


@pytest.mark.slow
def test_common_rotation_is_invariant():
    base = sample_film("reconstructed")
    rotated = Film(base.thickness, base.tensor, 0.6)
    cfg = QuadratureConfig(rel_tol=1e-6)
    p0 = pressure(GapScenario(base, base, 30.0), cfg).pressure
    p1 = pressure(GapScenario(rotated, rotated, 30.0), cfg).pressure
    assert p1 == pytest.approx(p0, rel=1e-6)


@pytest.mark.slow
def test_crossed_films_weaker_than_aligned():
    # aligned strong axes interact more than crossed ones
    base = sample_film("reconstructed")
    crossed = Film(base.thickness, base.tensor, math.pi / 2)
    skew = Film(base.thickness, base.tensor, math.pi / 5)
    cfg = QuadratureConfig(rel_tol=1e-6)
    aligned = pressure(GapScenario(base, base, 30.0), cfg).pressure
    cross = pressure(GapScenario(base, crossed, 30.0), cfg).pressure
    mid = pressure(GapScenario(base, skew, 30.0), cfg).pressure
    assert abs(aligned) > abs(mid) > abs(cross) > 0


# -- ratios -------------------------------------------------------------------------

def test_identity_ratio():
    film = sample_film("passivated")
    curve = force_ratio_curve((film, film), (film, film), [5.0, 50.0, 500.0])
    assert curve.ratios == (1.0, 1.0, 1.0)


def test_ratio_monotone_in_reflectivity():
    weak = isotropic_film(1.9, plasma=11.1)
    strong = isotropic_film(1.9, plasma=12.5)
    curve = force_ratio_curve((strong, strong), (weak, weak), [5.0, 50.0, 500.0])
    assert all(r >= 1.0 for r in curve.ratios)
    assert len(curve.points) == 3


def test_ratio_rejects_vanishing_baseline():
    vacuum = Film(2.0, DielectricTensorModel.isotropic(OscillatorSet()))
    film = sample_film("bulk")
    with pytest.raises(LifshitzError, match="floor"):
        force_ratio_curve((film, film), (vacuum, vacuum), [10.0])


# -- determinism, validation, failure reporting --------------------------------------

def test_determinism_serial_vs_threads():
    film = sample_film("passivated")
    grid = [3.0, 30.0, 300.0]
    serial = sweep(film, film, grid)
    with ThreadPoolExecutor(max_workers=3) as pool:
        threaded = sweep(film, film, grid, executor=pool)
    assert serial == threaded


def test_repeat_bit_identical():
    film = sample_film("bulk")
    scenario = GapScenario(film, film, 17.0)
    assert casimir_point(scenario) == casimir_point(scenario)


def test_scenario_validation():
    film = sample_film("bulk")
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            GapScenario(film, film, bad)


def test_curve_validation():
    point = ForcePoint(10.0, -1.0, -1.0, 1e-8)
    with pytest.raises(ValueError):
        ForceCurve((point, point))
    with pytest.raises(ValueError):
        ForceCurve((point,), ratios=(1.0, 2.0))


def test_outer_nonconvergence_reports_physical_best_estimate():
    mirror = PerfectMirror()
    cfg = QuadratureConfig(rel_tol=1e-7, max_depth=5)
    with pytest.raises(QuadratureError) as info:
        casimir_point(GapScenario(mirror, mirror, 20.0), cfg)
    energy, press = info.value.value
    assert energy == pytest.approx(ideal_energy(20.0), rel=1e-6)
    assert press == pytest.approx(ideal_pressure(20.0), rel=1e-6)
    assert 1e-7 < info.value.error < 1e-3


def test_inner_nonconvergence_has_no_estimate():
    film = sample_film("bulk")
    cfg = QuadratureConfig(rel_tol=1e-13, max_panels=3)
    with pytest.raises(QuadratureError, match="inner") as info:
        casimir_point(GapScenario(film, film, 20.0), cfg)
    assert math.isnan(info.value.error)
