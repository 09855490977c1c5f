"""Checks of the numerics toolkit against closed forms and naive references.

Every routine here backs a physics module, so each is pinned either to an
exactly known value (gamma/2F1 identities, integrals of sech powers) or to
a slow, obviously-correct reference implementation (O(N^2) Fourier sum,
dense trapezoid quadrature, analytic Rabi flopping).
"""

import math

import numpy as np
import pytest

from slowsound.numerics import (
    Grid1D,
    NumericsError,
    fft,
    find_root,
    gamma_fn,
    hilbert_transform,
    hyp2f1,
    ifft,
    integrate_line,
    rk4_evolve,
    solve_dense,
)


# -- reference implementations -------------------------------------------

def dense_trapezoid(f, a, b, n=200001):
    x = np.linspace(a, b, n)
    return float(np.trapezoid(f(x), x))


def naive_dft(values):
    """Direct O(N^2) Fourier sum with the numpy sign convention."""
    n = len(values)
    j = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(j, j) / n)
    return kernel @ np.asarray(values, dtype=complex)


def gamma_euler(z, cut=60.0, n=400001):
    """Euler-integral Gamma(z) for Re z > 0 by dense quadrature."""
    t = np.linspace(1e-12, cut, n)
    return float(np.trapezoid(t ** (z - 1.0) * np.exp(-t), t))


def hyp2f1_euler(a, b, c, z, n=200001):
    """Euler integral for 2F1, valid for c > b > 0 and z < 1."""
    t = np.linspace(1e-9, 1.0 - 1e-9, n)
    integrand = t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0) * (1.0 - z * t) ** (-a)
    coeff = gamma_euler(c) / (gamma_euler(b) * gamma_euler(c - b))
    return coeff * float(np.trapezoid(integrand, t))


# -- quadrature -----------------------------------------------------------

def test_integrate_line_sech_powers():
    # int sech^2 = 2 and int sech^4 = 4/3 exactly
    assert integrate_line(lambda x: 1.0 / np.cosh(x) ** 2) == pytest.approx(2.0, rel=1e-9)
    assert integrate_line(lambda x: 1.0 / np.cosh(x) ** 4) == pytest.approx(4.0 / 3.0, rel=1e-9)


def test_integrate_line_odd_integrand_vanishes():
    val = integrate_line(lambda x: x / np.cosh(x) ** 2)
    assert abs(val) < 1e-12


def test_integrate_line_oscillatory_against_trapezoid():
    """Oscillatory sech-weighted integral vs a dense trapezoid reference."""
    f = lambda x: np.cos(3.0 * x) / np.cosh(x) ** 2
    adaptive = integrate_line(f)
    reference = dense_trapezoid(f, -40.0, 40.0, n=400001)
    assert adaptive == pytest.approx(reference, abs=1e-9)


def test_integrate_line_finite_interval():
    assert integrate_line(np.sin, 0.0, np.pi) == pytest.approx(2.0, rel=1e-9)


# -- special functions ----------------------------------------------------

def test_gamma_known_values():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-12)
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-12)


def test_gamma_recurrence_and_euler_integral():
    rng = np.random.default_rng(11)
    for z in rng.uniform(0.3, 4.0, size=6):
        assert gamma_fn(z + 1.0) == pytest.approx(z * gamma_fn(z), rel=1e-11)
    assert gamma_fn(1.7) == pytest.approx(gamma_euler(1.7), rel=1e-7)


def test_gamma_reflection():
    # Gamma(z) Gamma(1-z) = pi / sin(pi z)
    for z in (0.2, 0.45, 0.8):
        product = gamma_fn(z) * gamma_fn(1.0 - z)
        assert product == pytest.approx(math.pi / math.sin(math.pi * z), rel=1e-11)


def test_hyp2f1_log_identity():
    # 2F1(1,1;2;-1) = ln 2
    assert hyp2f1(1.0, 1.0, 2.0, -1.0) == pytest.approx(math.log(2.0), rel=1e-12)


def test_hyp2f1_at_zero_and_euler_integral():
    assert hyp2f1(0.7, 1.3, 2.1, 0.0) == pytest.approx(1.0, rel=1e-14)
    # parameters chosen so the Euler integrand is smooth at both endpoints
    # (b > 1 and c - b > 1) and the trapezoid reference is trustworthy
    got = hyp2f1(1.3, 2.0, 4.0, -1.0)
    ref = hyp2f1_euler(1.3, 2.0, 4.0, -1.0)
    assert got == pytest.approx(ref, rel=1e-7)


def test_hyp2f1_binomial_special_case():
    # 2F1(a, b; b; z) = (1-z)^(-a) for any b
    got = hyp2f1(1.5, 2.0, 2.0, -0.7)
    assert got == pytest.approx(1.7 ** -1.5, rel=1e-12)


# -- Fourier and grids ----------------------------------------------------

def test_fft_matches_naive_dft():
    rng = np.random.default_rng(3)
    values = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    assert np.allclose(fft(values), naive_dft(values), atol=1e-10)


def test_ifft_roundtrip():
    rng = np.random.default_rng(4)
    values = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    assert np.allclose(ifft(fft(values)), values, atol=1e-12)


def test_grid_spacing_and_wavenumbers():
    grid = Grid1D(256, 32.0)
    assert grid.dx == pytest.approx(32.0 / 256)
    assert np.allclose(np.diff(grid.x), grid.dx)
    # k must follow the fft ordering so exp(ik x) diagonalizes derivatives
    psi = np.exp(1j * grid.k[5] * grid.x)
    dpsi = ifft(1j * grid.k * fft(psi))
    assert np.allclose(dpsi, 1j * grid.k[5] * psi, atol=1e-9)


# -- root finding ---------------------------------------------------------

def test_find_root_cosine():
    assert find_root(math.cos, 0.0, 3.0) == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_find_root_cubic_and_bad_bracket():
    f = lambda x: x ** 3 - 2.0 * x - 5.0
    root = find_root(f, 1.0, 3.0)
    assert abs(f(root)) < 1e-10
    with pytest.raises(NumericsError):
        find_root(lambda x: 1.0 + x ** 2, -1.0, 1.0)


# -- ODE integration ------------------------------------------------------

def test_rk4_rabi_flopping():
    """Two-level Rabi problem against the exact sinusoid."""
    omega = 0.37

    def rhs(t, y):
        return np.array([-0.5j * omega * y[1], -0.5j * omega * y[0]])

    times = np.linspace(0.0, 40.0, 81)
    traj = rk4_evolve(rhs, np.array([1.0 + 0j, 0.0 + 0j]), times, max_step=0.01)
    p1 = np.abs(traj[:, 1]) ** 2
    assert np.allclose(p1, np.sin(0.5 * omega * times) ** 2, atol=1e-8)


def test_rk4_norm_preserved():
    omega = 1.1

    def rhs(t, y):
        return np.array([-0.5j * omega * y[1], -0.5j * omega * y[0]])

    traj = rk4_evolve(rhs, np.array([1.0 + 0j, 0.0j]), np.linspace(0, 10, 11), max_step=0.005)
    norms = np.sum(np.abs(traj) ** 2, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-10)


# -- linear solves --------------------------------------------------------

def test_solve_dense_residual():
    rng = np.random.default_rng(9)
    a = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    b = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    x = solve_dense(a, b)
    assert np.linalg.norm(a @ x - b) < 1e-9


def test_solve_dense_singular_raises():
    a = np.zeros((3, 3))
    with pytest.raises(NumericsError):
        solve_dense(a, np.ones(3))


# -- Hilbert transform ----------------------------------------------------

def test_hilbert_on_lorentzian_pair():
    """Dispersion relations of a single pole, exact in closed form.

    A causal decaying response has chi(D) = -1 / (D + i gamma/2), whose
    parts are Im = (gamma/2)/(D^2 + gamma^2/4) (positive absorption) and
    Re = -D/(D^2 + gamma^2/4); the principal-value pairing then reads
    Re = -H[Im] and Im = +H[Re] for this kernel.  The grid extends far
    past the pole so the truncated transform converges on the central
    band.
    """
    gamma = 1.0
    n = 1 << 14
    span = 400.0
    d = span * (2.0 * np.arange(n) / n - 1.0)
    im = 0.5 * gamma / (d ** 2 + 0.25 * gamma ** 2)
    re = -d / (d ** 2 + 0.25 * gamma ** 2)
    core = np.abs(d) < 20.0

    re_rec = -hilbert_transform(im)
    im_rec = hilbert_transform(re)
    assert np.max(np.abs(re_rec[core] - re[core])) < 2e-3 * np.max(np.abs(re))
    assert np.max(np.abs(im_rec[core] - im[core])) < 2e-3 * np.max(np.abs(im))


def test_hilbert_annihilates_constants_up_to_truncation():
    values = np.ones(4096)
    out = hilbert_transform(values)
    # the transform of a constant vanishes in principal value
    assert np.max(np.abs(out[1024:3072])) < 0.05
