import math

import pytest
from hypothesis import given, strategies as st

from gravbound.errors import DomainError
from gravbound.limits import (
    black_hole_ops_bound,
    bound_report,
    clock_limit,
    degree_of_parallelization,
    gravitational_ops_bound,
    margolus_levitin_ops,
    max_error_rate,
    parallel_error_constraint,
    serial_decoherence_error,
)
from gravbound.numerics import from_real, to_real
from gravbound.physics import CODATA2018 as K, PRESETS, preset

LOG_TP = math.log10(5.391247e-44)
LOG_C = math.log10(2.99792458e8)
LOG_HBAR = math.log10(1.054571817e-34)


def real(x):
    return to_real(x)[0]


# ------------------------------------------------------------ Margolus-Levitin

def test_ml_ultimate_laptop():
    n = margolus_levitin_ops(1.0 * K.c**2)
    assert n.log10_mag == pytest.approx(math.log10(2 * 8.987551787368176e16 / (math.pi * K.hbar)), abs=1e-12)
    assert n.log10_mag == pytest.approx(50.73, abs=5e-3)
    assert real(n) == pytest.approx(5.43e50, rel=1e-3)
    assert abs(n.log10_mag - 51) <= 1.0


def test_ml_unit_and_reference():
    assert real(margolus_levitin_ops(math.pi * K.hbar / 2)) == pytest.approx(1.0, rel=1e-13)
    assert real(margolus_levitin_ops(1e16)) == pytest.approx(2e16 / (math.pi * K.hbar), rel=1e-13)
    assert real(margolus_levitin_ops(1e16)) == pytest.approx(6.04e49, rel=1e-3)
    with pytest.raises(DomainError):
        margolus_levitin_ops(0.0)


# ------------------------------------------------------------ clock limit

def test_clock_limit():
    assert clock_limit(K.t_P).delta_t_min.log10_mag == pytest.approx(LOG_TP, abs=1e-10)
    one = clock_limit(1.0).delta_t_min
    assert one.log10_mag == pytest.approx(2 / 3 * LOG_TP, abs=1e-12)
    assert real(one) == pytest.approx(1.43e-29, rel=2e-3)
    age = clock_limit(1e17).delta_t_min
    assert age.log10_mag == pytest.approx(2 / 3 * LOG_TP + 17 / 3, abs=1e-12)
    assert real(age) == pytest.approx(6.6e-24, rel=1e-2)
    with pytest.raises(DomainError):
        clock_limit(0.0)


@given(st.floats(min_value=0, max_value=100))
def test_clock_resolves_its_interval(decades):
    t = K.t_P * 10**decades
    assert clock_limit(t).delta_t_min.log10_mag <= math.log10(t) + 1e-12


# ------------------------------------------------------------ error rate and parallelization

def test_max_error_rate():
    eps = max_error_rate(1e31, 0.1, 1e51)
    assert real(eps) == pytest.approx(1e31 * K.c / (1e51 * 0.1), rel=1e-13)
    assert real(eps) == pytest.approx(3.0e-11, rel=1e-3)
    assert real(max_error_rate(1e31, 0.1, 1e31 * K.c / 0.1)) == pytest.approx(1.0, rel=1e-13)
    assert real(max_error_rate(1e31, 0.2, 1e51)) == pytest.approx(real(eps) / 2, rel=1e-13)
    with pytest.raises(DomainError):
        max_error_rate(1e31, 0.0, 1e51)


def test_degree_of_parallelization():
    assert real(degree_of_parallelization(1e31, 0.1, 1e51)) == pytest.approx(3.3e10, rel=2e-2)
    assert real(degree_of_parallelization(1e31, 0.1, 1e31 * K.c / 0.1)) == pytest.approx(1.0, rel=1e-13)
    assert real(degree_of_parallelization(1e31, 0.1, 1e42)) == pytest.approx(1e42 * 0.1 / (1e31 * K.c), rel=1e-13)
    assert real(degree_of_parallelization(1e31, 0.1, 1e42)) == pytest.approx(3.3e1, rel=2e-2)


@given(st.floats(0, 60), st.floats(-30, 10), st.floats(0, 80))
def test_parallelization_inverse_pair(logL, logR, logn):
    L, R, n = from_real(10**logL), from_real(10**logR), from_real(10**logn)
    prod = degree_of_parallelization(L, R, n) * max_error_rate(L, R, n)
    assert prod.log10_mag == pytest.approx(0.0, abs=1e-12)


# ------------------------------------------------------------ serial error

def test_serial_error_examples():
    e = serial_decoherence_error(1e16)
    assert e.log10_mag == pytest.approx(4 / 3 * (LOG_TP + 16 - LOG_HBAR), abs=1e-12)
    assert e.log10_mag == pytest.approx(8.945, abs=1e-3)
    assert serial_decoherence_error(K.hbar / K.t_P).log10_mag == pytest.approx(0.0, abs=1e-10)
    full = serial_decoherence_error(8.98755e16)
    assert full.log10_mag == pytest.approx(10.2, abs=0.05)
    with pytest.raises(DomainError):
        serial_decoherence_error(-1.0)


# ------------------------------------------------------------ gravitational bound

@pytest.mark.parametrize("L, R, dp, expected, quoted", [
    (1e31, 0.1, 1e10, 47.79, 47),
    (1e31, 0.1, 1.0, 42.07, 42),
    (1e25, 0.1, 1.0, 39.50, 39),
])
def test_gravitational_bound(L, R, dp, expected, quoted):
    n = gravitational_ops_bound(L, R, dp)
    exact = -4 / 7 * LOG_TP + 3 / 7 * (LOG_C + math.log10(L / R)) + 4 / 7 * math.log10(dp)
    assert n.log10_mag == pytest.approx(exact, abs=1e-12)
    assert n.log10_mag == pytest.approx(expected, abs=5e-3)
    assert abs(n.log10_mag - quoted) <= 1.0


def test_gravitational_bound_domain():
    with pytest.raises(DomainError):
        gravitational_ops_bound(1e31, 0.1, 0.5)
    with pytest.raises(DomainError):
        gravitational_ops_bound(-1.0, 0.1, 1.0)


logs = st.floats(-10, 60)


@given(logs, st.floats(-30, 5), st.floats(0, 20), st.floats(0.01, 5))
def test_gravitational_scaling(logL, logR, logdp, logk):
    L, R, dp = 10**logL, 10**logR, 10**logdp
    k = 10**logk
    base = gravitational_ops_bound(L, R, dp).log10_mag
    assert gravitational_ops_bound(L * k, R, dp).log10_mag - base == pytest.approx(3 / 7 * logk, abs=1e-10)
    assert gravitational_ops_bound(L, R, dp * k).log10_mag - base == pytest.approx(4 / 7 * logk, abs=1e-10)
    assert gravitational_ops_bound(L, R * k, dp).log10_mag - base == pytest.approx(-3 / 7 * logk, abs=1e-10)
    assert gravitational_ops_bound(L * k, R, dp).log10_mag > base
    assert gravitational_ops_bound(L, R, dp * k).log10_mag > base
    assert gravitational_ops_bound(L, R * k, dp).log10_mag < base


@given(logs, st.floats(-30, 5), st.floats(0, 20))
def test_bound_saturates_error_constraint(logL, logR, logdp):
    L, R, dp = 10**logL, 10**logR, 10**logdp
    n = gravitational_ops_bound(L, R, dp)
    lhs = parallel_error_constraint(n, dp)
    rhs = max_error_rate(L, R, n)
    assert lhs.log10_mag == pytest.approx(rhs.log10_mag, abs=1e-10)


# ------------------------------------------------------------ black hole

def test_black_hole_bound():
    one = black_hole_ops_bound(1.0)
    assert one.log10_mag == pytest.approx(3 / 7 * -math.log10(2.176434e-8) - LOG_TP, abs=1e-12)
    assert one.log10_mag == pytest.approx(46.55, abs=5e-3)
    assert abs(one.log10_mag - 47) <= 1.0
    assert real(black_hole_ops_bound(K.M_P)) == pytest.approx(1 / K.t_P, rel=1e-10)
    assert real(black_hole_ops_bound(K.M_P)) == pytest.approx(1.855e43, rel=1e-3)
    big = black_hole_ops_bound(2.176434e-1)
    assert big.log10_mag == pytest.approx(3 - LOG_TP, abs=1e-10)
    with pytest.raises(DomainError):
        black_hole_ops_bound(0.0)


def test_black_hole_equals_general_bound_without_schwarzschild_factor():
    for M in (1e-5, 1.0, 2e30):
        L = (M / K.M_P) ** 2
        R = K.G * M / K.c**2
        general = gravitational_ops_bound(L, R, 1.0)
        assert general.log10_mag == pytest.approx(black_hole_ops_bound(M).log10_mag, abs=1e-6)


# ------------------------------------------------------------ reports

def test_report_ultimate_laptop():
    r = bound_report(preset("ultimate-laptop"))
    assert r.ml_ops_per_s.log10_mag == pytest.approx(50.73, abs=5e-3)
    assert r.grav_ops_per_s.log10_mag == pytest.approx(47.79, abs=5e-3)
    assert r.binding_bound == "gravitational"
    assert r.implied_dp.log10_mag == pytest.approx(-r.eps_max.log10_mag, abs=1e-12)
    assert any("O(1) factors dropped" in n for n in r.notes)
    assert any("paper-exponent" in n for n in r.notes)


def test_report_black_hole():
    r = bound_report(preset("black-hole-1kg"))
    # the general bound with R = 2GM/c^2 sits (3/7) log10 2 below the closed form
    assert r.grav_ops_per_s.log10_mag == pytest.approx(46.55 - 3 / 7 * math.log10(2), abs=5e-3)
    assert abs(r.grav_ops_per_s.log10_mag - 47) <= 1.0
    assert r.binding_bound == "gravitational"
    assert any("Schwarzschild" in n for n in r.notes)
    assert any("10^46.55" in n for n in r.notes)


def test_report_avogadro():
    r = bound_report(preset("avogadro"))
    assert r.grav_ops_per_s.log10_mag == pytest.approx(39.50, abs=5e-3)
    assert r.grav_ops_per_s.log10_mag < 40
    assert r.binding_bound == "gravitational"
    assert any("0.1 m is assumed" in n for n in r.notes)
    assert any("10^40" in n for n in r.notes)


@pytest.mark.parametrize("name", PRESETS)
def test_report_fields_positive(name):
    r = bound_report(preset(name))
    for f in r.LOG_FIELDS:
        assert getattr(r, f).sign == 1
    data = r.to_json()
    assert list(data) == ["spec", "ml_ops_per_s", "grav_ops_per_s", "serial_error", "eps_max",
                          "implied_dp", "binding_bound", "notes"]


def test_binding_margolus_levitin():
    from gravbound.physics import ComputerSpec
    # a tiny energy budget makes Margolus-Levitin the tighter bound
    r = bound_report(ComputerSpec(mass_kg=1, radius_m=0.1, bits=1e31, parallelism=1e10, energy_j=1e-3))
    assert r.binding_bound == "margolus-levitin"


def test_binding_tie_goes_to_gravitational(monkeypatch):
    import gravbound.limits as limits
    monkeypatch.setattr(limits, "margolus_levitin_ops",
                        lambda E, k: gravitational_ops_bound(1e31, 0.1, 1e10, k))
    r = limits.bound_report(preset("ultimate-laptop"))
    assert r.ml_ops_per_s == r.grav_ops_per_s
    assert r.binding_bound == "gravitational"
