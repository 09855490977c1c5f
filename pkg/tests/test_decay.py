"""Phonon-emission rates and the two-step emission cascade.

The strongest check here integrates the discretized continuum directly:
a bare rk4 on the coupled amplitude equations, sharing nothing with the
closed-form Wigner-Weisskopf amplitudes under test except the couplings
and grids themselves.  Exponential decay at gamma_1 has to *emerge* from
that integration.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from slowsound.bogoliubov import dispersion, dispersion_derivative, resonant_wavevector
from slowsound.decay import (
    DecayRates,
    SpectralResolutionError,
    cascade,
    decay_rates,
    emission_grid,
)
from slowsound.params import REFERENCE
from slowsound.qutrit import spectrum


def one_phonon_ode_oracle(result, gamma_0, gamma_1, t_final, nsteps):
    """Direct integration of the upper-line amplitude equations.

    da/dt   = -i sum_k (measure w_k) g_k exp(-i dk t) b_k
    db_k/dt = -i conj(g_k) exp(+i dk t) a - (gamma_0/2) b_k

    The intermediate state's own decay enters as the gamma_0/2 loss on
    b_k; everything else is the bare discretized continuum.
    """
    k = result.k_grid
    w = np.empty_like(k)
    w[1:-1] = 0.5 * (k[2:] - k[:-2])
    w[0] = 0.5 * (k[1] - k[0])
    w[-1] = 0.5 * (k[-1] - k[-2])
    g = result._g1_k
    dk = np.array([dispersion(float(q)) for q in k]) - (
        result.omega_eg - result.rates.omega_0
    )
    meas_w = result.measure * w

    h = t_final / nsteps
    a = 1.0 + 0j
    b = np.zeros(len(k), dtype=complex)
    out_t, out_a, out_b = [0.0], [a], [b.copy()]

    def deriv(t, a_val, b_val):
        phase = np.exp(-1j * dk * t)
        da = -1j * np.sum(meas_w * g * phase * b_val)
        db = -1j * np.conj(g) / phase * a_val - 0.5 * gamma_0 * b_val
        return da, db

    t = 0.0
    for _ in range(nsteps):
        da1, db1 = deriv(t, a, b)
        da2, db2 = deriv(t + 0.5 * h, a + 0.5 * h * da1, b + 0.5 * h * db1)
        da3, db3 = deriv(t + 0.5 * h, a + 0.5 * h * da2, b + 0.5 * h * db2)
        da4, db4 = deriv(t + h, a + h * da3, b + h * db3)
        a = a + h / 6.0 * (da1 + 2 * da2 + 2 * da3 + da4)
        b = b + h / 6.0 * (db1 + 2 * db2 + 2 * db3 + db4)
        t += h
        out_t.append(t)
        out_a.append(a)
        out_b.append(b.copy())
    return np.array(out_t), np.array(out_a), np.array(out_b), meas_w


# -- rates ------------------------------------------------------------------

def test_route_agreement_at_reference():
    closed = decay_rates(REFERENCE, route="closed")
    integral = decay_rates(REFERENCE, route="integral")
    assert closed.gamma_0 == pytest.approx(integral.gamma_0, rel=1e-3)
    assert closed.gamma_1 == pytest.approx(integral.gamma_1, rel=1e-3)
    assert closed.route == "closed" and integral.route == "integral"


def test_route_agreement_across_window():
    from slowsound.qutrit import qutrit_window_in_coupling_ratio

    lo, hi = qutrit_window_in_coupling_ratio(REFERENCE.mass_ratio)
    for rg in np.linspace(lo * 1.02, hi * 0.98, 5):
        p = replace(REFERENCE, coupling_ratio=float(rg))
        c = decay_rates(p, route="closed")
        i = decay_rates(p, route="integral")
        assert c.gamma_0 == pytest.approx(i.gamma_0, rel=1e-3), rg
        assert c.gamma_1 == pytest.approx(i.gamma_1, rel=1e-3), rg


def test_rates_positive_and_weak():
    r = decay_rates(REFERENCE)
    assert r.gamma_0 > 0 and r.gamma_1 > 0
    # emission must stay perturbative for the three-level treatment
    assert r.gamma_0 / r.omega_0 < 0.1
    assert r.gamma_1 / r.omega_1 < 0.1


def test_rates_match_spectrum_frequencies():
    r = decay_rates(REFERENCE)
    spec = spectrum(REFERENCE)
    assert r.omega_0 == pytest.approx(spec.omega_0, rel=1e-14)
    assert r.omega_1 == pytest.approx(spec.omega_1, rel=1e-14)


def test_eta_bookkeeping_ties_to_dispersion():
    """eta = sqrt(1 + omega^2) encodes the resonant wavevector and the
    phase-space slope: k_res^2 = eta - 1 and d eps/dk = 2 eta/sqrt(1+eta)."""
    r = decay_rates(REFERENCE)
    for omega, eta in ((r.omega_0, r.eta_0), (r.omega_1, r.eta_1)):
        assert eta == pytest.approx(math.sqrt(1.0 + omega ** 2), rel=1e-14)
        k_res = resonant_wavevector(omega)
        assert k_res ** 2 == pytest.approx(eta - 1.0, rel=1e-10)
        assert dispersion_derivative(k_res) == pytest.approx(
            2.0 * eta / math.sqrt(1.0 + eta), rel=1e-10
        )
    assert not r.degenerate_0 and not r.degenerate_1


def test_rate_scales_inversely_with_density():
    # |g|^2 carries n0 g12^2 = r_g^2 / n0, and the default impurity norm
    # keeps the continuum measure density-independent, so gamma ~ 1/n0
    r1 = decay_rates(REFERENCE, route="closed")
    r2 = decay_rates(replace(REFERENCE, density_xi=100.0), route="closed")
    assert r2.gamma_0 / r1.gamma_0 == pytest.approx(0.5, rel=1e-12)
    assert r2.gamma_1 / r1.gamma_1 == pytest.approx(0.5, rel=1e-12)


def test_rates_outside_window_rejected():
    with pytest.raises(ValueError):
        decay_rates(replace(REFERENCE, coupling_ratio=0.5))


# -- cascade ----------------------------------------------------------------

def test_cascade_initial_state_and_norm_window():
    r = decay_rates(REFERENCE, route="integral")
    times = np.array([0.0, 0.5, 1.0, 3.0]) / r.gamma_1
    res = cascade(REFERENCE, times)
    total = np.abs(res.a) ** 2 + res.norm_one_phonon + res.norm_two_phonon
    assert total[0] == pytest.approx(1.0, abs=1e-12)
    assert res.norm_one_phonon[0] == 0.0
    # finite grids and Lorentzian tails cost a little norm; the window is
    # the accepted bookkeeping tolerance on the default grids
    assert np.all(total[1:] > 0.98) and np.all(total[1:] < 1.005)


def test_cascade_survival_is_exponential():
    r = decay_rates(REFERENCE, route="integral")
    times = np.linspace(0.0, 3.0, 7) / r.gamma_1
    res = cascade(REFERENCE, times)
    assert np.allclose(np.abs(res.a) ** 2, np.exp(-r.gamma_1 * times), rtol=1e-12)


def test_cascade_against_direct_ode_integration():
    """Decay at gamma_1 must emerge from the bare coupled amplitudes."""
    r = decay_rates(REFERENCE, route="integral")
    t_final = 3.0 / r.gamma_1
    times = np.linspace(0.0, t_final, 7)
    res = cascade(REFERENCE, times)

    ts, a_ode, b_ode, meas_w = one_phonon_ode_oracle(
        res, r.gamma_0, r.gamma_1, t_final, nsteps=12000
    )
    # compare survival pointwise at the sampled cascade times
    for i, t in enumerate(times):
        j = int(round(t / t_final * 12000))
        assert abs(a_ode[j]) ** 2 == pytest.approx(
            abs(res.a[i]) ** 2, rel=0.02
        ), f"t = {t:.1f}"
    # and the emitted-line norm at the final time
    norm_ode = float(np.sum(meas_w * np.abs(b_ode[-1]) ** 2))
    assert norm_ode == pytest.approx(res.norm_one_phonon[-1], rel=0.02)


def test_first_line_peaks_at_resonance():
    r = decay_rates(REFERENCE, route="integral")
    times = np.array([3.0]) / r.gamma_1
    res = cascade(REFERENCE, times)
    k_peak = res.k_grid[int(np.argmax(np.abs(res.b_k[-1]) ** 2))]
    k_res = resonant_wavevector(r.omega_1)
    assert k_peak == pytest.approx(k_res, abs=5.0 * (r.gamma_0 + r.gamma_1))


def test_cascade_rejects_coarse_grid():
    r = decay_rates(REFERENCE, route="integral")
    coarse = np.linspace(0.05, 0.2, 40)  # spacing far above the linewidth
    with pytest.raises(SpectralResolutionError):
        cascade(REFERENCE, np.array([1.0]), k_grid=coarse)


def test_cascade_rejects_negative_times():
    with pytest.raises(ValueError):
        cascade(REFERENCE, np.array([-1.0, 0.0]))


def test_emission_grid_resolves_line():
    center, width, narrow = 0.15, 1.3e-3, 3.1e-4
    grid = emission_grid(center, width, narrow)
    k_center = resonant_wavevector(center)
    # the grid must bracket the resonance and sample the core densely
    assert grid.min() < k_center < grid.max()
    omega = np.array([dispersion(float(k)) for k in grid])
    core = np.abs(omega - center) < 3.0 * width
    assert core.sum() > 10
    spacing = np.diff(omega)
    assert spacing[core[:-1]].max() < narrow / 3.0
