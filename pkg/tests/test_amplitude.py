import cmath
import math

import numpy as np
import pytest

from deltascatter.amplitude import (
    C2,
    C3,
    closed_form_double_2d,
    closed_form_double_3d,
    closed_form_single,
    differential_cross_section,
    prefactor,
    scattering_amplitude,
    wavefunction_at,
)
from deltascatter.errors import EvaluationAtCenter, KernelSingularity, SpectralSingularity
from deltascatter.model import DirectionPair, make_scene, wave_vectors

from conftest import random_coupling, rel


def test_prefactor_branch():
    assert C2 * C2 == pytest.approx(1j / (8 * math.pi), abs=1e-17)
    assert C2.real < 0 and C2.imag < 0  # -exp(i pi/4) / sqrt(8 pi)
    assert C3 == -1 / (4 * math.pi)
    for k in (0.3, 1.0, 7.0):
        assert prefactor(2, k) == pytest.approx(-cmath.sqrt(1j / (8 * math.pi * k)), rel=1e-15)


def test_single_dfss_2d_value():
    scene = make_scene(2, 1.0, [(0, 0)], [4.0])
    for theta in (0.0, 1.0, 2.5):
        f = scattering_amplitude(scene, DirectionPair(0.3, theta)).f
        assert f == pytest.approx(-cmath.sqrt(1j / (8 * math.pi)) * (2 - 2j), rel=1e-14)
    assert differential_cross_section(f) == pytest.approx(1 / math.pi, rel=1e-14)


def test_single_3d_closed_form_value():
    res = closed_form_single(3, "dfss", 4 * math.pi, (0, 0, 0), 1.0, DirectionPair(0.2, 1.0))
    assert res.f == pytest.approx(-1 / (1 + 1j), rel=1e-15)


def test_single_closed_form_pole():
    with pytest.raises(SpectralSingularity):
        closed_form_single(2, "dfss", 4j, (0, 0), 1.0, DirectionPair())
    with pytest.raises(SpectralSingularity):
        closed_form_single(3, "dfss", 4j * math.pi / 2.0, (0, 0, 0), 2.0, DirectionPair())


def test_single_modulus_isotropic():
    values = [abs(closed_form_single(2, "dfss", 1 + 1j, (0, 0), 1.3, DirectionPair(0.1, t)).f)
              for t in np.linspace(0, 6, 13)]
    assert max(values) - min(values) <= 1e-15


def test_dcs():
    assert differential_cross_section(0j) == 0.0
    assert differential_cross_section(1 + 1j) == 2.0


def test_translation_covariance(rng):
    for dim in (2, 3):
        pos = np.outer(rng.uniform(-2, 2, 3), np.eye(dim)[0])
        scene = make_scene(dim, 1.1, pos, [1, 2 + 1j, -1 + 0.5j])
        dirs = DirectionPair(*rng.uniform(0, math.pi, 4))
        b = rng.normal(size=dim)
        f = scattering_amplitude(scene, dirs).f
        g = scattering_amplitude(scene.with_positions(pos + b), dirs).f
        k_in, k_out = wave_vectors(scene, dirs)
        assert rel(g, f * cmath.exp(1j * float(b @ (k_in - k_out)))) <= 1e-12


def test_first_j0_zero_decouples():
    root = 2.404825557695773
    scene = make_scene(2, 1.0, [(0, 0), (root, 0)], [1 + 0.5j, 2 - 0.3j])
    dirs = DirectionPair(0.4, 1.9)
    f = scattering_amplitude(scene, dirs).f
    single = sum(closed_form_single(2, "dfss", s.coupling, s.position, 1.0, dirs).f
                 for s in scene.scatterers)
    # residual J0 at the rounded root is ~1e-16
    assert rel(f, single) <= 1e-11


def test_double_2d_dfss_limits():
    f1, f2, _ = closed_form_double_2d(1.5, 1e-10, 0.8, 1.0, 0.3, 0.2, "dfss")
    assert abs(f1 - 1 / (1 / 1.5 + 0.25j)) <= 1e-8
    assert abs(f2) <= 1e-8
    f1, f2, _ = closed_form_double_2d(1, 1, 0.0, 1.0, 0.3, 0.2, "dfss")
    assert f1 == pytest.approx(4 / (4 + 2j), rel=1e-15)
    assert f2 == pytest.approx(4 / (4 + 2j), rel=1e-15)


def test_double_standard_collapse():
    kl = 1e-8
    res = closed_form_double_2d(1, 1, kl, 1.0, 0.3, 0.2, "standard")[2]
    assert abs(res.f) <= 10 / abs(math.log(kl))
    kl = 1e-6
    res = closed_form_double_3d(1, 1, kl, 1.0, 0.3, 0.1, 0.2, 0.5, "standard")[2]
    assert abs(res.f) <= 10 * kl


def test_double_standard_zero_separation():
    with pytest.raises(KernelSingularity):
        closed_form_double_2d(1, 1, 0.0, 1.0, 0.3, 0.2, "standard")
    with pytest.raises(KernelSingularity):
        closed_form_double_3d(1, 1, 0.0, 1.0, 0.3, 0.1, 0.2, 0.5, "standard")


def test_double_3d_dfss_coincident():
    k = 1.0
    z = 2 * math.pi / k
    f1, f2, _ = closed_form_double_3d(z, z, 1e-9 / k, k, 0.7, 0.3, 1.0, 0.2, "dfss")
    f0 = 4 * math.pi * z / (4 * math.pi + 1j * k * 2 * z)
    assert rel(f1, f0) <= 1e-6 and rel(f2, f0) <= 1e-6


def test_double_3d_dfss_decoupled_at_pi():
    k = 1.0
    dirs = DirectionPair(0.7, 1.2, 0.3, 0.9)
    res = closed_form_double_3d(1 + 1j, 2.0, math.pi, k, 0.7, 0.3, 1.2, 0.9, "dfss")[2]
    single = (closed_form_single(3, "dfss", 1 + 1j, (0, 0, 0), k, dirs).f
              + closed_form_single(3, "dfss", 2.0, (math.pi, 0, 0), k, dirs).f)
    assert rel(res.f, single) <= 1e-14


@pytest.mark.parametrize("form", ["standard", "dfss"])
def test_reciprocity(rng, form):
    for _ in range(20):
        dim = int(rng.integers(2, 4))
        n = int(rng.integers(1, 5))
        if form == "dfss":
            pos = np.outer(rng.uniform(-2, 2, n), rng.normal(size=dim))
        else:
            pos = rng.uniform(-2, 2, (n, dim))
        scene = make_scene(dim, rng.uniform(0.3, 3), pos,
                           [random_coupling(rng) for _ in range(n)], form)
        dirs = DirectionPair(*rng.uniform(0, math.pi, 4))
        f = scattering_amplitude(scene, dirs).f
        g = scattering_amplitude(scene, dirs.reversed(dim)).f
        assert rel(g, f) <= 1e-12


def test_wavefunction_at_center():
    scene = make_scene(2, 1.0, [(0, 0), (0, 1)], [1, 2])
    with pytest.raises(EvaluationAtCenter):
        wavefunction_at(scene, DirectionPair(), (0.0, 1.0))


def test_wavefunction_weak_scatterer_is_plane_wave():
    for dim in (2, 3):
        scene = make_scene(dim, 1.0, [(0.0,) * dim], [1e-12])
        x = np.full(dim, 0.7)
        psi = wavefunction_at(scene, DirectionPair(0.4, 0.0, 0.2, 0.0), x)
        k_in, _ = wave_vectors(scene, DirectionPair(0.4, 0.0, 0.2, 0.0))
        plane = (2 * math.pi) ** (-dim / 2) * cmath.exp(1j * float(k_in @ x))
        assert abs(psi - plane) <= 1e-10


@pytest.mark.parametrize("dim", [2, 3])
def test_wavefunction_far_field_matches_amplitude(dim):
    k = 1.0
    pos = [(0.0,) * dim, (0.8,) + (0.0,) * (dim - 1)]
    scene = make_scene(dim, k, pos, [1 + 0.5j, 2.0], "dfss")
    dirs = DirectionPair(theta0=0.6, theta=1.1, phi0=0.2, phi=0.4)
    _, k_out = wave_vectors(scene, dirs)
    r = 1e4 / k
    x = r * k_out / k
    k_in, _ = wave_vectors(scene, dirs)
    psi = wavefunction_at(scene, dirs, x)
    plane = cmath.exp(1j * float(k_in @ x))
    # psi ~ (2 pi)^(-d/2) [exp(i k.x) + f exp(ikr) / r^((d-1)/2)]
    f_est = ((2 * math.pi) ** (dim / 2) * psi - plane) * r ** ((dim - 1) / 2) * cmath.exp(-1j * k * r)
    f = scattering_amplitude(scene, dirs).f
    assert rel(f_est, f) <= 1e-2
