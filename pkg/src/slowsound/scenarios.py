"""Scenario catalogue: the named runs behind the command line.

Each scenario computes one physics deliverable, writes its tables and
figures through an OutputSink, and returns a JSON-ready summary dict.
The CLI owns argument parsing, format selection, exit codes, and the
manifest; the functions here own the physics and the file contents.

Every scenario is deterministic for a fixed parameter set: sweep grids
are hard-coded or derived from the parameters, iteration orders are
fixed, and the only random draw in the package (the eigensolver's seed
noise) uses a fixed generator seed.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from slowsound.bloch import (
    DriveConfig,
    drive_from_params,
    evolve_master_equation,
    ground_projector,
    steady_state_lindblad,
    trace_distance,
    weak_probe_coherences,
)
from slowsound.bogoliubov import dispersion, resonant_wavevector
from slowsound.coupling import coupling_set, g0_closed, g1_closed, g_quadrature
from slowsound.decay import cascade, decay_rates
from slowsound.gpe import frozen_well, imaginary_time_eigenstates
from slowsound.numerics import hilbert_transform, integrate_line
from slowsound.output import write_csv, write_json
from slowsound.params import Params, coupling_ratio_for_nu
from slowsound.qutrit import (
    QUTRIT_NU_MAX,
    QUTRIT_NU_MIN,
    ImpurityStates,
    NotAQutrit,
    QutritSpectrum,
    bound_state_count,
    qutrit_window_in_coupling_ratio,
    spectrum,
)
from slowsound.response import (
    SOUND_SPEED,
    NoTransparency,
    dispersion_curve,
    group_velocity_curve,
    propagate_envelope,
    susceptibility_curve,
    transparency_width,
)
from slowsound.svg import line_plot

__all__ = ["SCENARIOS", "run_scenario"]

# External reference estimate for the slow-pulse regime (k ~ 1/d), kept
# for side-by-side reporting with the computed narrowband group velocity.
SLOW_PULSE_ESTIMATE_UM_PER_S = 5.0


def _emit_csv(sink, formats, name, columns, rows):
    if "csv" in formats:
        write_csv(sink.path(name), columns, rows)


def _emit_json(sink, formats, name, payload):
    if "json" in formats:
        write_json(sink.path(name), payload)


def _emit_svg(sink, formats, name, x, series, **labels):
    if "svg" in formats:
        line_plot(sink.path(name), x, series, **labels)


def _fwhm(x, y):
    """Full width at half maximum by linear interpolation around the peak."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i = int(np.argmax(y))
    half = 0.5 * y[i]

    def cross(step):
        j = i
        while 0 < j < len(y) - 1 and y[j] > half:
            j += step
        lo, hi = sorted((j, j - step))
        if y[hi] == y[lo]:
            return x[j]
        frac = (half - y[lo]) / (y[hi] - y[lo])
        return x[lo] + frac * (x[hi] - x[lo])

    return cross(+1) - cross(-1)


def _doublet_separation(curve):
    """Detuning distance between the two absorption maxima."""
    a = curve.absorption
    d = curve.detunings
    ic = int(np.argmin(np.abs(d)))
    left = int(np.argmax(a[:ic]))
    right = ic + 1 + int(np.argmax(a[ic + 1 :]))
    return float(d[right] - d[left])


def _golden_max(f, lo, hi, tol):
    """Locate the maximizer of f on [lo, hi] by golden-section search."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _peak_location(f, ks, tol=0.005):
    vals = [f(k) for k in ks]
    i = int(np.argmax(vals))
    lo = ks[max(i - 1, 0)]
    hi = ks[min(i + 1, len(ks) - 1)]
    return _golden_max(f, lo, hi, tol)


# ----------------------------------------------------------------------
# spectrum
# ----------------------------------------------------------------------

def scenario_spectrum(params: Params, sink, formats):
    """Level structure across the coupling-ratio sweep, window marked."""
    lo_rg, hi_rg = qutrit_window_in_coupling_ratio(params.mass_ratio)
    ratios = np.linspace(0.9, 1.9, 201)
    rows = []
    for rg in ratios:
        p = replace(params, coupling_ratio=float(rg))
        spec = spectrum(p)
        if isinstance(spec, QutritSpectrum):
            rows.append(
                [rg, spec.nu, spec.n_bound, True, spec.omega_0, spec.omega_1]
                + list(spec.energies)
                + [lo_rg, hi_rg]
            )
        else:
            rows.append(
                [rg, spec.nu, spec.n_bound, False] + [math.nan] * 5 + [lo_rg, hi_rg]
            )
    columns = [
        "coupling_ratio",
        "nu",
        "n_bound",
        "qutrit",
        "omega_0",
        "omega_1",
        "energy_0",
        "energy_1",
        "energy_2",
        "window_lower_coupling_ratio",
        "window_upper_coupling_ratio",
    ]
    _emit_csv(sink, formats, "spectrum.csv", columns, rows)

    configured = spectrum(params)
    if isinstance(configured, QutritSpectrum):
        cfg = {
            "nu": configured.nu,
            "qutrit": True,
            "n_bound": configured.n_bound,
            "omega_0": configured.omega_0,
            "omega_1": configured.omega_1,
            "energies": list(configured.energies),
        }
    else:
        cfg = {"nu": configured.nu, "qutrit": False, "n_bound": configured.n_bound,
               "reason": configured.reason}
    summary = {
        "configured": cfg,
        "window_nu": [QUTRIT_NU_MIN, QUTRIT_NU_MAX],
        "window_coupling_ratio": [lo_rg, hi_rg],
        "sweep": {"coupling_ratio_min": 0.9, "coupling_ratio_max": 1.9, "points": len(ratios)},
    }
    _emit_json(sink, formats, "spectrum.json", summary)
    _emit_svg(
        sink, formats, "spectrum.svg",
        ratios,
        [("omega_0", np.array([r[4] for r in rows])),
         ("omega_1", np.array([r[5] for r in rows]))],
        title="Transition frequencies across the coupling-ratio sweep",
        xlabel="g12/g11",
        ylabel="frequency (mu units)",
    )
    return summary


# ----------------------------------------------------------------------
# decay
# ----------------------------------------------------------------------

def scenario_decay(params: Params, sink, formats):
    """Phonon decay rates over the window plus the emission cascade."""
    lo_rg, hi_rg = qutrit_window_in_coupling_ratio(params.mass_ratio)
    ratios = np.linspace(lo_rg, hi_rg, 122)[1:-1]
    rows = []
    for rg in ratios:
        p = replace(params, coupling_ratio=float(rg))
        rt = decay_rates(p, route="closed")
        ratio0 = rt.gamma_0 / rt.omega_0 if rt.omega_0 > 0 else math.nan
        ratio1 = rt.gamma_1 / rt.omega_1 if rt.omega_1 > 0 else math.nan
        rows.append([rg, p.nu, rt.omega_0, rt.omega_1, rt.gamma_0, rt.gamma_1, ratio0, ratio1])
    columns = [
        "coupling_ratio",
        "nu",
        "omega_0",
        "omega_1",
        "gamma_0",
        "gamma_1",
        "gamma_0_over_omega_0",
        "gamma_1_over_omega_1",
    ]
    _emit_csv(sink, formats, "decay.csv", columns, rows)
    worst_rwa = max(max(r[6], r[7]) for r in rows if math.isfinite(r[6]) and math.isfinite(r[7]))

    closed = decay_rates(params, route="closed")
    integral = decay_rates(params, route="integral")
    times = np.linspace(0.0, 5.0 / integral.gamma_1, 26)
    casc = cascade(params, times)
    cascade_rows = [
        [t, abs(casc.a[i]) ** 2, casc.norm_one_phonon[i], casc.norm_two_phonon[i],
         casc.norm_total[i]]
        for i, t in enumerate(times)
    ]
    _emit_csv(
        sink, formats, "cascade.csv",
        ["time", "survival", "one_phonon", "two_phonon", "total_norm"],
        cascade_rows,
    )

    k_line, density = casc.first_line_spectrum()
    omega_line = np.asarray(dispersion(k_line))
    _emit_csv(
        sink, formats, "first_line.csv",
        ["k", "omega", "spectral_density"],
        list(zip(k_line, omega_line, density)),
    )
    fwhm = _fwhm(omega_line, density)
    gamma_sum = integral.gamma_0 + integral.gamma_1

    summary = {
        "rates_closed": {"gamma_0": closed.gamma_0, "gamma_1": closed.gamma_1},
        "rates_integral": {"gamma_0": integral.gamma_0, "gamma_1": integral.gamma_1},
        "route_relative_difference": {
            "gamma_0": abs(closed.gamma_0 - integral.gamma_0) / closed.gamma_0,
            "gamma_1": abs(closed.gamma_1 - integral.gamma_1) / closed.gamma_1,
        },
        "omega_0": closed.omega_0,
        "omega_1": closed.omega_1,
        "gamma_over_omega": {
            "lower": closed.gamma_0 / closed.omega_0,
            "upper": closed.gamma_1 / closed.omega_1,
            "worst_over_window": worst_rwa,
        },
        "rwa_valid_everywhere": worst_rwa < 0.1,
        "cascade": {
            "norm_min": float(np.min(casc.norm_total)),
            "norm_max": float(np.max(casc.norm_total)),
            "final_survival": float(abs(casc.a[-1]) ** 2),
        },
        "first_line": {
            "fwhm": fwhm,
            "gamma_0_plus_gamma_1": gamma_sum,
            "fwhm_over_sum": fwhm / gamma_sum,
        },
        "lifetimes_ms": {
            "upper": params.time_ms(1.0 / closed.gamma_1),
            "lower": params.time_ms(1.0 / closed.gamma_0),
        },
    }
    _emit_json(sink, formats, "decay.json", summary)
    _emit_svg(
        sink, formats, "decay.svg",
        ratios,
        [("gamma_0/omega_0", np.array([r[6] for r in rows])),
         ("gamma_1/omega_1", np.array([r[7] for r in rows]))],
        title="Decay-to-frequency ratios across the window",
        xlabel="g12/g11",
        ylabel="gamma/omega",
    )
    _emit_svg(
        sink, formats, "cascade.svg",
        times,
        [("survival", np.array([r[1] for r in cascade_rows])),
         ("one-phonon", np.array([r[2] for r in cascade_rows])),
         ("two-phonon", np.array([r[3] for r in cascade_rows])),
         ("total", np.array([r[4] for r in cascade_rows]))],
        title="Cascade sector populations",
        xlabel="time (reduced)",
        ylabel="population",
    )
    return summary


# ----------------------------------------------------------------------
# couplings
# ----------------------------------------------------------------------

def scenario_couplings(params: Params, sink, formats):
    """Interband and intraband coupling amplitudes over a k sweep."""
    states = ImpurityStates(params)
    ks = np.arange(0.05, 4.0 + 1e-9, 0.05)
    rows = []
    for k in ks:
        cs = coupling_set(float(k), params, states=states)
        rows.append(
            [
                k,
                abs(cs.g0),
                abs(cs.g1),
                abs(cs.g00),
                abs(cs.g11),
                abs(cs.g22),
                cs.interband_source,
                abs(g0_closed(float(k), params)),
                abs(g1_closed(float(k), params)),
            ]
        )
    columns = [
        "k",
        "abs_g0",
        "abs_g1",
        "abs_g00",
        "abs_g11",
        "abs_g22",
        "interband_source",
        "abs_g0_closed",
        "abs_g1_closed",
    ]
    _emit_csv(sink, formats, "couplings.csv", columns, rows)

    spec = spectrum(params)
    if isinstance(spec, NotAQutrit):
        raise ValueError(spec.reason)
    k0 = resonant_wavevector(spec.omega_0)
    k1 = resonant_wavevector(spec.omega_1)
    g0_c = abs(g0_closed(k0, params))
    g1_c = abs(g1_closed(k1, params))
    g0_q = abs(g_quadrature(0, 1, k0, params, states=states))
    g1_q = abs(g_quadrature(1, 2, k1, params, states=states))

    arr = np.array([[r[1], r[2], r[7], r[8]] for r in rows])
    summary = {
        "resonant_k": {"lower": k0, "upper": k1},
        "resonant_coupling_closed": {"lower": g0_c, "upper": g1_c},
        "resonant_coupling_quadrature": {"lower": g0_q, "upper": g1_q},
        "closed_over_quadrature": {"lower": g0_c / g0_q, "upper": g1_c / g1_q},
        "sweep_argmax_k": {
            "abs_g0_mode": float(ks[int(np.argmax(arr[:, 0]))]),
            "abs_g1_mode": float(ks[int(np.argmax(arr[:, 1]))]),
            "abs_g0_closed": float(ks[int(np.argmax(arr[:, 2]))]),
            "abs_g1_closed": float(ks[int(np.argmax(arr[:, 3]))]),
        },
        "interband_source": params.coupling_mode,
    }
    _emit_json(sink, formats, "couplings.json", summary)
    _emit_svg(
        sink, formats, "couplings.svg",
        ks,
        [("abs_g0", arr[:, 0]), ("abs_g1", arr[:, 1]),
         ("abs_g0_closed", arr[:, 2]), ("abs_g1_closed", arr[:, 3])],
        title="Impurity-phonon transition couplings",
        xlabel="k (1/xi)",
        ylabel="|g|",
    )
    return summary


# ----------------------------------------------------------------------
# susceptibility
# ----------------------------------------------------------------------

def scenario_susceptibility(params: Params, sink, formats):
    """Acoustic susceptibility of the probe transition with drive families."""
    rates = decay_rates(params)
    drive = drive_from_params(params, rates)
    curve = susceptibility_curve(params, rates=rates, drive=drive)
    d = curve.detunings

    family = {}
    for rg in (1.1, 1.85):
        for mult in (0.2, 2.0):
            p = replace(params, coupling_ratio=rg, control_rabi_gamma0=mult)
            rt = decay_rates(p)
            dv = drive_from_params(p, rt)
            family[(rg, mult)] = susceptibility_curve(p, detunings=d, rates=rt, drive=dv).chi

    columns = ["detuning", "detuning_over_gamma0", "re_chi", "im_chi"]
    cols_data = [d, d / rates.gamma_0, curve.refraction, curve.absorption]
    for (rg, mult), chi in sorted(family.items()):
        tag = f"rg{rg:g}_oc{mult:g}".replace(".", "p")
        columns += [f"re_chi_{tag}", f"im_chi_{tag}"]
        cols_data += [np.real(chi), np.imag(chi)]
    _emit_csv(sink, formats, "susceptibility.csv", columns, list(zip(*cols_data)))

    window = transparency_width(curve)
    if isinstance(window, NoTransparency):
        window_payload = {"present": False, "reason": window.reason}
    else:
        window_payload = {
            "present": True,
            "width": window.width,
            "width_over_gamma0": window.width / rates.gamma_0,
            "dip_absorption": window.dip_absorption,
            "peak_absorption": max(window.peak_left, window.peak_right),
            "contrast": window.dip_absorption / max(window.peak_left, window.peak_right),
        }

    # Weak-vs-strong control contrast at the configured coupling ratio.
    def chi0(mult):
        p = replace(params, control_rabi_gamma0=mult)
        rt = decay_rates(p)
        dv = drive_from_params(p, rt)
        return complex(susceptibility_curve(p, detunings=np.array([0.0]), rates=rt, drive=dv).chi[0])

    im_weak = chi0(0.2).imag
    im_strong = chi0(2.0).imag

    # Transparency width growth with the control power.
    widths = []
    for mult in (1.0, 2.0, 4.0):
        p = replace(params, control_rabi_gamma0=mult)
        rt = decay_rates(p)
        dv = drive_from_params(p, rt)
        w = transparency_width(susceptibility_curve(p, rates=rt, drive=dv))
        widths.append({"control_over_gamma0": mult,
                       "width": None if isinstance(w, NoTransparency) else w.width})
    width_vals = [w["width"] for w in widths if w["width"] is not None]
    monotone = all(a < b for a, b in zip(width_vals, width_vals[1:]))

    # EIT-like scaling of the width over a decade of control power
    # (reported, not asserted).
    scaling_mults = np.geomspace(2.0, 20.0, 6)
    scaling_widths = []
    for mult in scaling_mults:
        p = replace(params, control_rabi_gamma0=float(mult))
        rt = decay_rates(p)
        dv = drive_from_params(p, rt)
        w = transparency_width(susceptibility_curve(p, rates=rt, drive=dv))
        scaling_widths.append(math.nan if isinstance(w, NoTransparency) else w.width)
    mask = np.isfinite(scaling_widths)
    exponent = float(
        np.polyfit(np.log(scaling_mults[mask]), np.log(np.asarray(scaling_widths)[mask]), 1)[0]
    ) if np.sum(mask) >= 2 else math.nan

    # Autler-Townes doublet at strong control.
    at_control = 10.0 * rates.gamma_1
    at_drive = DriveConfig(
        probe_rabi=params.probe_fraction * at_control,
        control_rabi=at_control,
        delta_mode=params.delta_mode,
    )
    at_curve = susceptibility_curve(params, rates=rates, drive=at_drive)
    at_sep = _doublet_separation(at_curve)

    summary = {
        "carrier": {
            "k": curve.carrier_k,
            "energy": curve.carrier_energy,
            "velocity": curve.carrier_velocity,
        },
        "drive": {
            "control_rabi": drive.control_rabi,
            "probe_rabi": drive.probe_rabi,
            "control_over_gamma0": drive.control_rabi / rates.gamma_0,
            "delta_mode": drive.delta_mode,
        },
        "chi_at_zero": {"re": float(curve.refraction[np.argmin(np.abs(d))]),
                        "im": float(curve.absorption[np.argmin(np.abs(d))])},
        "transparency": window_payload,
        "contrast_weak_vs_strong_control": {
            "im_chi0_control_0p2_gamma0": im_weak,
            "im_chi0_control_2_gamma0": im_strong,
            "ratio": im_strong / im_weak,
            "below_half": im_strong < 0.5 * im_weak,
        },
        "width_growth": {"samples": widths, "monotone": monotone,
                         "scaling_exponent_reported": exponent},
        "autler_townes": {
            "control_rabi": at_control,
            "separation": at_sep,
            "separation_over_control": at_sep / at_control,
        },
    }
    _emit_json(sink, formats, "susceptibility.json", summary)

    weak_chi = family[(params.coupling_ratio, 0.2)] if (params.coupling_ratio, 0.2) in family else None
    series = [("im_chi", curve.absorption), ("re_chi", curve.refraction)]
    if weak_chi is not None:
        series.append(("im_chi_weak_control", np.imag(weak_chi)))
    _emit_svg(
        sink, formats, "susceptibility.svg",
        d / rates.gamma_0,
        series,
        title="Acoustic susceptibility of the probe transition",
        xlabel="probe detuning / gamma_0",
        ylabel="chi",
    )
    return summary


# ----------------------------------------------------------------------
# dispersion
# ----------------------------------------------------------------------

def scenario_dispersion(params: Params, sink, formats):
    """Dressed probe dispersion against the bare phonon branch."""
    curve = dispersion_curve(params)
    bare = np.asarray(dispersion(curve.q))
    rows = list(zip(curve.q, curve.omega_p, bare, curve.q_free))
    _emit_csv(
        sink, formats, "dispersion.csv",
        ["q", "omega_dressed", "epsilon_bare_at_q", "q_free"],
        rows,
    )

    rel = np.abs(curve.q - curve.q_free) / curve.q_free
    edge = max(float(rel[0]), float(rel[-1]))
    # Slope flattening at the center, against the group-velocity route.
    ic = int(np.argmin(np.abs(curve.omega_p - curve.curve.rates.omega_0)))
    lo = max(ic - 2, 0)
    hi = min(ic + 2, len(curve.q) - 1)
    slope = (curve.omega_p[hi] - curve.omega_p[lo]) / (curve.q[hi] - curve.q[lo])
    vg_center = group_velocity_curve(params).at_center * SOUND_SPEED
    summary = {
        "edge_relative_deviation": edge,
        "merges_with_bare_branch": edge < 0.01,
        "center_slope_domega_dq": float(slope),
        "group_velocity_route": vg_center,
        "slope_ratio": float(slope) / vg_center,
        "carrier_velocity": curve.curve.carrier_velocity,
    }
    _emit_json(sink, formats, "dispersion.json", summary)
    _emit_svg(
        sink, formats, "dispersion.svg",
        curve.q,
        [("dressed", curve.omega_p), ("bare", bare)],
        title="Probe dispersion across the transparency window",
        xlabel="q (1/xi)",
        ylabel="omega (mu units)",
    )
    return summary


# ----------------------------------------------------------------------
# groupvel
# ----------------------------------------------------------------------

def _transparency_point_minimum(gv, window):
    """Minimum v_g/c_s across the central fifth of the transparency window.

    The full sweep's minimum sits on the steep absorption shoulders just
    inside the dressed-line peaks, where a pulse would be absorbed rather
    than slowed; the quotable slow-sound figure is the minimum over the
    band the default pulse actually occupies (a tenth of the window to
    either side of the two-photon resonance).
    """
    if isinstance(window, NoTransparency):
        return gv.at_center, 0.0
    band = np.abs(gv.detunings) <= window.width / 10.0
    vg_band = gv.vg_over_cs[band]
    d_band = gv.detunings[band]
    ok = np.isfinite(vg_band) & (vg_band > 0)
    i = int(np.argmin(vg_band[ok]))
    return float(vg_band[ok][i]), float(d_band[ok][i])


def scenario_groupvel(params: Params, sink, formats):
    """Group velocity across the probe line; headline minimum in the JSON."""
    gv = group_velocity_curve(params)
    rows = list(zip(gv.detunings, gv.detunings / gv.curve.rates.gamma_0,
                    gv.vg_over_cs, gv.refraction_slope))
    _emit_csv(
        sink, formats, "groupvel.csv",
        ["detuning", "detuning_over_gamma0", "vg_over_cs", "refraction_slope"],
        rows,
    )

    window = transparency_width(gv.curve)
    min_vg, min_at = _transparency_point_minimum(gv, window)
    valid = np.isfinite(gv.vg_over_cs) & (gv.vg_over_cs > 0)
    vg_valid = gv.vg_over_cs[valid]
    d_valid = gv.detunings[valid]
    isweep = int(np.argmin(vg_valid))
    rates = gv.curve.rates
    drive = gv.curve.drive
    summary = {
        "min_vg_over_cs": min_vg,
        "min_at_detuning": min_at,
        "min_at_detuning_over_gamma0": min_at / rates.gamma_0,
        "minimum_domain": "central fifth of the transparency window"
        if not isinstance(window, NoTransparency)
        else "zero detuning (no transparency window)",
        "vg_over_cs_at_zero_detuning": gv.at_center,
        "full_sweep_min_vg_over_cs": float(vg_valid[isweep]),
        "full_sweep_min_at_detuning_over_gamma0": float(d_valid[isweep] / rates.gamma_0),
        "full_sweep_note": (
            "the unrestricted minimum lies on the absorption shoulders just "
            "inside the dressed-line peaks, outside the usable transparency band"
        ),
        "vg_um_per_s_computed": params.velocity_um_per_s(min_vg),
        "vg_um_per_s_reference_estimate": SLOW_PULSE_ESTIMATE_UM_PER_S,
        "flagged_points": gv.flagged,
        "control_over_gamma0": drive.control_rabi / rates.gamma_0,
        "validity_control_sq_over_gamma_product":
            drive.control_rabi ** 2 / (rates.gamma_0 * rates.gamma_1),
    }
    _emit_json(sink, formats, "groupvel.json", summary)
    _emit_svg(
        sink, formats, "groupvel.svg",
        gv.detunings / rates.gamma_0,
        [("vg/cs", gv.vg_over_cs)],
        title="Group velocity across the probe line",
        xlabel="probe detuning / gamma_0",
        ylabel="vg/cs",
    )
    return summary


# ----------------------------------------------------------------------
# eigenstates
# ----------------------------------------------------------------------

def scenario_eigenstates(params: Params, sink, formats):
    """Imaginary-time eigenstates of the frozen soliton well vs closed forms."""
    report = imaginary_time_eigenstates(params, 3)
    x = report.grid.x
    potential = frozen_well(report.grid, report.nu, params.mass_ratio)

    columns = ["x", "potential"]
    cols_data = [x, potential]
    for n in range(report.states.shape[0]):
        columns += [f"re_psi_{n}", f"im_psi_{n}", f"density_{n}"]
        cols_data += [np.real(report.states[n]), np.imag(report.states[n]),
                      np.abs(report.states[n]) ** 2]
    _emit_csv(sink, formats, "eigenstates.csv", columns, list(zip(*cols_data)))

    ladder = [-((report.nu - n) ** 2) / (2.0 * params.mass_ratio) for n in range(3)]
    states_payload = []
    for n in range(report.states.shape[0]):
        entry = {
            "n": n,
            "energy": float(report.energies[n]),
            "energy_ladder": ladder[n],
            "bound": bool(report.bound[n]),
            "edge_fraction": float(report.edge_fractions[n]),
            "energy_drift_per_step": float(report.drifts[n]),
        }
        if report.bound[n]:
            entry["energy_relative_error"] = abs(report.energies[n] - ladder[n]) / abs(ladder[n])
        try:
            entry["overlap_with_analytic"] = report.overlap_with_analytic(n)
        except ValueError:
            entry["overlap_with_analytic"] = None
            entry["overlap_note"] = (
                "no normalizable closed-form shape at this well depth (nu <= n)"
            )
        states_payload.append(entry)

    summary = {
        "nu": report.nu,
        "grid": {"points": report.grid.npoints, "length": report.grid.length},
        "iterations": report.iterations,
        "converged": report.converged,
        "states": states_payload,
        "note": (
            "the n=2 rung of the analytic ladder is unbound for nu < 2; its "
            "trial state relaxes toward the box continuum, so its energy row "
            "reports the delocalized value and the global converged flag "
            "stays false while that state creeps along near-degenerate box "
            "levels (localized states are converged to their drift column)"
        ),
    }
    _emit_json(sink, formats, "eigenstates.json", summary)
    series = [("potential", potential)]
    for n in range(report.states.shape[0]):
        series.append((f"density_{n}", np.abs(report.states[n]) ** 2))
    _emit_svg(
        sink, formats, "eigenstates.svg",
        x, series,
        title="Soliton-well impurity eigenstates",
        xlabel="x (xi)",
        ylabel="potential / density",
    )
    return summary


# ----------------------------------------------------------------------
# pulse
# ----------------------------------------------------------------------

def scenario_pulse(params: Params, sink, formats):
    """Gaussian probe pulse sent across the gas: delay and transmission."""
    report = propagate_envelope(params, distance=params.box_length_xi)
    rows = list(zip(report.times, np.abs(report.envelope_in), np.abs(report.envelope_out)))
    _emit_csv(
        sink, formats, "pulse.csv",
        ["time", "abs_envelope_in", "abs_envelope_out"],
        rows,
    )
    summary = {
        "distance_xi": report.distance,
        "bandwidth": report.bandwidth,
        "bandwidth_over_window": report.bandwidth / report.transparency.width,
        "transparency_width": report.transparency.width,
        "free_transit_time": report.free_transit,
        "measured_delay": report.measured_delay,
        "predicted_delay": report.predicted_delay,
        "relative_delay_error": report.relative_delay_error,
        "transmitted_fraction": report.transmitted_fraction,
        "vg_over_cs": report.vg_over_cs_center,
        "vg_um_per_s": params.velocity_um_per_s(report.vg_over_cs_center),
        "delay_ms": params.time_ms(report.measured_delay),
        "free_transit_ms": params.time_ms(report.free_transit),
        "bandwidth_warning": report.bandwidth_warning,
    }
    _emit_json(sink, formats, "pulse.json", summary)
    _emit_svg(
        sink, formats, "pulse.svg",
        report.times,
        [("input", np.abs(report.envelope_in)), ("output", np.abs(report.envelope_out))],
        title="Probe envelope before and after the gas",
        xlabel="time (reduced, co-moving frame)",
        ylabel="|envelope|",
    )
    return summary


# ----------------------------------------------------------------------
# validate
# ----------------------------------------------------------------------

def _row(check, status, measured, target, detail=""):
    return {"check": check, "status": status, "measured": measured,
            "target": target, "detail": detail}


def scenario_validate(params: Params, sink, formats):
    """Cross-check battery: closed forms vs numerical oracles.

    Each row is PASS/FAIL against a stated criterion, or REPORT for
    measured-and-recorded quantities with no asserted target.  Two checks
    transcribe stated shape/dominance claims about the coupling family
    that the overlap-integral oracle contradicts; they are retained and
    fail honestly, with the measured numbers in the row.
    """
    rows = []
    spec = spectrum(params)
    if isinstance(spec, NotAQutrit):
        raise ValueError(spec.reason)
    states = ImpurityStates(params)

    # --- level structure ------------------------------------------------
    counts = (bound_state_count(QUTRIT_NU_MIN), bound_state_count(QUTRIT_NU_MAX))
    rows.append(_row(
        "window_boundary_counts",
        "PASS" if counts == (3, 4) else "FAIL",
        f"{counts[0]} at nu=4/5, {counts[1]} at nu=9/7",
        "3 bound states on entry, 4 at the upper edge",
    ))

    probe_omegas = np.linspace(0.05, 3.0, 10)
    roundtrip = max(
        abs(float(dispersion(resonant_wavevector(w))) - w) for w in probe_omegas
    )
    rows.append(_row(
        "resonance_inversion_roundtrip",
        "PASS" if roundtrip < 1e-10 else "FAIL",
        f"{roundtrip:.3e}",
        "< 1e-10",
    ))

    # --- wavefunction normalization ---------------------------------------
    report = states.normalization_report()
    dev0 = report["constants"][0]["relative_deviation"]
    rows.append(_row(
        "normalization_constant_0",
        "PASS" if dev0 < 1e-8 else "FAIL",
        f"{dev0:.3e}",
        "closed form matches quadrature < 1e-8",
    ))
    rows.append(_row(
        "normalization_constants_1_2",
        "REPORT",
        f"relative deviations {report['constants'][1]['relative_deviation']:.4f}, "
        f"{report['constants'][2]['relative_deviation']:.4f}",
        "recorded (closed forms known to disagree; quadrature authoritative)",
    ))
    rows.append(_row(
        "raw_overlap_phi0_phi2",
        "REPORT",
        f"{states.overlap_raw_02:.6f}",
        "recorded (removed by explicit orthogonalization)",
    ))

    ortho = integrate_line(lambda x: float(states[0](x) * states[2](x)), tol=1e-11)
    rows.append(_row(
        "orthogonality_after_projection",
        "PASS" if abs(ortho) < 1e-6 else "FAIL",
        f"{abs(ortho):.3e}",
        "< 1e-6",
    ))

    # --- coupling family --------------------------------------------------
    k_probe = 0.9
    q01 = g_quadrature(0, 1, k_probe, params, states=states)
    q12 = g_quadrature(1, 2, k_probe, params, states=states)
    q00 = g_quadrature(0, 0, k_probe, params, states=states)
    parity_dev = max(
        abs(q01.imag) / abs(q01), abs(q12.imag) / abs(q12), abs(q00.real) / abs(q00)
    )
    rows.append(_row(
        "parity_structure",
        "PASS" if parity_dev < 1e-6 else "FAIL",
        f"{parity_dev:.3e}",
        "interband real, intraband imaginary, < 1e-6",
    ))

    g0_sym = g_quadrature(1, 0, k_probe, params, states=states)
    sym_dev = abs(q01 - g0_sym) / abs(q01)
    rows.append(_row(
        "coupling_index_symmetry",
        "PASS" if sym_dev < 1e-9 else "FAIL",
        f"{sym_dev:.3e}",
        "g_01 = g_10 < 1e-9",
    ))

    zero = abs(g0_closed(2.0, params))
    rows.append(_row(
        "closed_form_zero_at_k2",
        "PASS" if zero < 1e-15 else "FAIL",
        f"{zero:.3e}",
        "exact zero of the lower-line closed form",
    ))

    dense = np.arange(0.02, 8.0, 0.02)
    peak0 = max(abs(g0_closed(float(k), params)) for k in dense)
    peak1 = max(abs(g1_closed(float(k), params)) for k in dense)
    tail0 = abs(g0_closed(12.0, params)) / peak0
    tail1 = abs(g1_closed(12.0, params)) / peak1
    quad_tail1 = abs(g_quadrature(0, 1, 12.0, params, states=states)) / max(
        abs(g_quadrature(0, 1, float(k), params, states=states))
        for k in np.arange(0.1, 4.0, 0.1)
    )
    tail = max(tail0, tail1)
    rows.append(_row(
        "exponential_tail_at_k12",
        "PASS" if tail < 1e-6 else "FAIL",
        f"{tail:.3e} (lower line {tail0:.3e}, upper {tail1:.3e}, "
        f"quadrature upper {quad_tail1:.3e})",
        "< 1e-6 of peak",
        detail="closed forms only cross 1e-6 of peak near k ~ 16 (lower) and"
        " k ~ 19 (upper); the independent overlap quadrature agrees the tail"
        " is fatter than advertised",
    ))

    coarse = np.arange(0.2, 5.01, 0.15)
    loc = {}
    for label, f in (
        ("g0_closed", lambda k: abs(g0_closed(k, params))),
        ("g1_closed", lambda k: abs(g1_closed(k, params))),
        ("g0_quadrature", lambda k: abs(g_quadrature(0, 1, k, params, states=states))),
        ("g1_quadrature", lambda k: abs(g_quadrature(1, 2, k, params, states=states))),
    ):
        loc[label] = _peak_location(f, coarse)
    d0 = abs(loc["g0_closed"] - loc["g0_quadrature"])
    d1 = abs(loc["g1_closed"] - loc["g1_quadrature"])
    rows.append(_row(
        "extremum_location_agreement",
        "PASS" if max(d0, d1) <= 0.05 else "FAIL",
        f"lower line: closed k={loc['g0_closed']:.3f} vs quadrature "
        f"k={loc['g0_quadrature']:.3f} (|dk|={d0:.3f}); upper line: "
        f"closed k={loc['g1_closed']:.3f} vs quadrature "
        f"k={loc['g1_quadrature']:.3f} (|dk|={d1:.3f})",
        "|dk| <= 0.05 between routes",
        "the two routes genuinely disagree in shape; the overlap integral "
        "is the oracle here",
    ))

    k0 = resonant_wavevector(spec.omega_0)
    k1 = resonant_wavevector(spec.omega_1)
    r0 = abs(g0_closed(k0, params)) / abs(g_quadrature(0, 1, k0, params, states=states))
    r1 = abs(g1_closed(k1, params)) / abs(g_quadrature(1, 2, k1, params, states=states))
    rows.append(_row(
        "resonant_amplitude_ratio",
        "REPORT",
        f"closed/quadrature = {r0:.4f} (lower), {r1:.4f} (upper)",
        "recorded (overall normalization may differ between routes)",
    ))

    dom = 0.0
    dom_detail = ""
    for k in np.arange(0.6, 1.1 + 1e-9, 0.1):
        intra = max(
            abs(g_quadrature(l, l, float(k), params, states=states)) for l in (0, 1, 2)
        )
        inter = max(
            abs(g_quadrature(0, 1, float(k), params, states=states)),
            abs(g_quadrature(1, 2, float(k), params, states=states)),
        )
        if intra / inter > dom:
            dom = intra / inter
            dom_detail = f"worst at k={k:.1f}"
    rows.append(_row(
        "interband_dominance",
        "PASS" if dom < 1.0 else "FAIL",
        f"max intraband/interband = {dom:.3f} ({dom_detail})",
        "< 1 over k in [0.6, 1.1]",
        "the overlap integrals make the intraband amplitudes larger here",
    ))

    # --- decay rates and cascade -------------------------------------------
    lo_rg, hi_rg = qutrit_window_in_coupling_ratio(params.mass_ratio)
    nus = np.linspace(QUTRIT_NU_MIN + 0.01, QUTRIT_NU_MAX - 0.01, 10)
    worst_rate = 0.0
    for nu in nus:
        p = replace(params, coupling_ratio=coupling_ratio_for_nu(float(nu), params.mass_ratio))
        closed = decay_rates(p, route="closed")
        integral = decay_rates(p, route="integral")
        worst_rate = max(
            worst_rate,
            abs(closed.gamma_0 - integral.gamma_0) / closed.gamma_0,
            abs(closed.gamma_1 - integral.gamma_1) / closed.gamma_1,
        )
    rows.append(_row(
        "decay_route_agreement",
        "PASS" if worst_rate < 1e-3 else "FAIL",
        f"{worst_rate:.3e}",
        "closed vs golden-rule < 1e-3 at 10 window points",
    ))

    rates = decay_rates(params, route="integral")
    times = np.array([0.5, 1.0, 3.0]) / rates.gamma_1
    casc = cascade(params, times)
    nmin, nmax = float(np.min(casc.norm_total)), float(np.max(casc.norm_total))
    rows.append(_row(
        "cascade_norm_conservation",
        "PASS" if 0.98 <= nmin and nmax <= 1.005 else "FAIL",
        f"[{nmin:.4f}, {nmax:.4f}]",
        "within [0.98, 1.005] at t = (0.5, 1, 3)/gamma_1",
    ))

    k_line, density = casc.first_line_spectrum()
    fwhm = _fwhm(np.asarray(dispersion(k_line)), density)
    gamma_sum = rates.gamma_0 + rates.gamma_1
    rows.append(_row(
        "first_line_width",
        "PASS" if abs(fwhm / gamma_sum - 1.0) < 0.05 else "FAIL",
        f"fwhm/(gamma_0+gamma_1) = {fwhm / gamma_sum:.4f}",
        "within 5% of the summed linewidths",
    ))

    # --- driven three-level dynamics ----------------------------------------
    drive = drive_from_params(params, rates)
    sweep = np.linspace(-20.0 * rates.gamma_0, 20.0 * rates.gamma_0, 200)
    ana = susceptibility_curve(
        params, detunings=sweep, rates=rates, drive=drive, states=states
    ).chi
    lind = susceptibility_curve(
        params, detunings=sweep, rates=rates, drive=drive, route="lindblad", states=states
    ).chi
    lind_states = [steady_state_lindblad(rates, drive, float(dd)) for dd in sweep[::4]]
    route_dev = float(np.max(np.abs(lind - ana)) / np.max(np.abs(ana)))
    rows.append(_row(
        "steady_state_route_agreement",
        "PASS" if route_dev < 0.01 else "FAIL",
        f"{route_dev:.3e}",
        "weak-probe analytic vs full Lindblad < 1% over 200 points",
    ))

    herm = max(float(np.max(np.abs(r - r.conj().T))) for r in lind_states)
    tr = max(abs(float(np.trace(r).real) - 1.0) for r in lind_states)
    mineig = min(float(np.min(np.linalg.eigvalsh(0.5 * (r + r.conj().T)))) for r in lind_states)
    state_ok = herm < 1e-10 and tr < 1e-10 and mineig > -1e-8
    rows.append(_row(
        "lindblad_state_quality",
        "PASS" if state_ok else "FAIL",
        f"hermiticity {herm:.1e}, trace {tr:.1e}, min eigenvalue {mineig:.1e}",
        "within (1e-10, 1e-10, -1e-8)",
    ))

    errs = []
    small_sweep = np.linspace(-10.0 * rates.gamma_0, 10.0 * rates.gamma_0, 41)
    for frac in (0.1, 0.01, 0.001):
        dv = DriveConfig(
            probe_rabi=frac * drive.control_rabi,
            control_rabi=drive.control_rabi,
            delta_mode=drive.delta_mode,
        )
        co_a = weak_probe_coherences(rates, dv, small_sweep)[0]
        co_l = np.array(
            [steady_state_lindblad(rates, dv, float(dd))[1, 0] for dd in small_sweep]
        )
        errs.append(float(np.max(np.abs(co_l - co_a)) / np.max(np.abs(co_a))))
    rows.append(_row(
        "weak_probe_convergence",
        "PASS" if errs[0] > errs[1] > errs[2] else "FAIL",
        f"errors {errs[0]:.2e} > {errs[1]:.2e} > {errs[2]:.2e}",
        "monotone decrease across probe fractions 0.1, 0.01, 0.001",
    ))

    horizon = 20.0 / rates.gamma_0
    evolved = evolve_master_equation(
        rates, drive, 0.0, ground_projector(), np.array([0.0, horizon])
    )[-1]
    settled = trace_distance(evolved, steady_state_lindblad(rates, drive, 0.0))
    rows.append(_row(
        "relaxation_to_steady_state",
        "PASS" if settled < 1e-4 else "FAIL",
        f"{settled:.3e}",
        "trace distance < 1e-4 at t = 20/gamma_0",
    ))

    # --- transparency and slow sound ----------------------------------------
    def curve_at(mult):
        p = replace(params, control_rabi_gamma0=mult)
        rt = decay_rates(p)
        return susceptibility_curve(p, rates=rt, drive=drive_from_params(p, rt))

    weak_curve = curve_at(0.2)
    strong_curve = curve_at(2.0)
    ic_w = int(np.argmin(np.abs(weak_curve.detunings)))
    ic_s = int(np.argmin(np.abs(strong_curve.detunings)))
    contrast = float(strong_curve.absorption[ic_s] / weak_curve.absorption[ic_w])
    rows.append(_row(
        "transparency_contrast",
        "PASS" if contrast < 0.5 else "FAIL",
        f"Im chi(0) ratio strong/weak = {contrast:.4f}",
        "< 0.5 between control = 2 gamma_0 and 0.2 gamma_0",
    ))

    weak_window = transparency_width(weak_curve)
    strong_window = transparency_width(strong_curve)
    transition_ok = isinstance(weak_window, NoTransparency) and not isinstance(
        strong_window, NoTransparency
    )
    rows.append(_row(
        "dip_transition",
        "PASS" if transition_ok else "FAIL",
        f"weak control: {'no dip' if isinstance(weak_window, NoTransparency) else 'dip'}; "
        f"strong control: {'dip' if not isinstance(strong_window, NoTransparency) else 'no dip'}",
        "single peak at weak control, dip at strong control",
    ))

    at_control = 10.0 * rates.gamma_1
    at_drive = DriveConfig(
        probe_rabi=params.probe_fraction * at_control,
        control_rabi=at_control,
        delta_mode=params.delta_mode,
    )
    at_sep = _doublet_separation(susceptibility_curve(params, rates=rates, drive=at_drive))
    rows.append(_row(
        "autler_townes_separation",
        "PASS" if abs(at_sep / at_control - 1.0) < 0.1 else "FAIL",
        f"separation/control = {at_sep / at_control:.4f}",
        "within 10% of the control Rabi frequency at control = 10 gamma_1",
    ))

    gv = group_velocity_curve(params, rates=rates, drive=drive)
    min_vg, min_at = _transparency_point_minimum(gv, transparency_width(gv.curve))
    rows.append(_row(
        "group_velocity_minimum",
        "PASS" if 0.03 <= min_vg <= 0.12 else "FAIL",
        f"min vg/cs = {min_vg:.4f} at detuning {min_at / rates.gamma_0:.3f} gamma_0 "
        f"({params.velocity_um_per_s(min_vg):.2f} um/s vs reference estimate "
        f"{SLOW_PULSE_ESTIMATE_UM_PER_S} um/s)",
        "within [0.03, 0.12] across the transparency-point band",
    ))

    disp = dispersion_curve(params, rates=rates, drive=drive)
    rel = np.abs(disp.q - disp.q_free) / disp.q_free
    edge = max(float(rel[0]), float(rel[-1]))
    rows.append(_row(
        "dispersion_branch_merge",
        "PASS" if edge < 0.01 else "FAIL",
        f"{edge:.3e}",
        "dressed branch within 1% of free branch at the sweep edges",
    ))

    pulse = propagate_envelope(params, distance=params.box_length_xi, rates=rates, drive=drive)
    rows.append(_row(
        "pulse_delay_consistency",
        "PASS" if pulse.relative_delay_error < 0.1 else "FAIL",
        f"measured {pulse.measured_delay:.1f} vs predicted {pulse.predicted_delay:.1f} "
        f"(relative error {pulse.relative_delay_error:.3f})",
        "transfer-function delay within 10% of the derivative route at "
        "bandwidth = window/10",
    ))

    # The refraction decays only like 1/detuning, so the discrete Hilbert
    # transform has to integrate far beyond the band of interest before
    # its reconstruction there converges: sample 15x the reporting span
    # and score the residual on the central band alone.
    span = max(20.0 * rates.gamma_0, 3.0 * drive.control_rabi)
    n_kk = 1 << 15
    kk_grid = 15.0 * span * (2.0 * np.arange(n_kk) / n_kk - 1.0)
    kk_curve = susceptibility_curve(params, detunings=kk_grid, rates=rates, drive=drive)
    re_rec = -hilbert_transform(kk_curve.absorption)
    core = np.abs(kk_grid) <= span
    kk_err = re_rec[core] - kk_curve.refraction[core]
    kk_rms = float(
        np.sqrt(np.mean(kk_err**2))
        / np.sqrt(np.mean(kk_curve.refraction[core] ** 2))
    )
    rows.append(_row(
        "kramers_kronig_consistency",
        "PASS" if kk_rms < 0.05 else "FAIL",
        f"RMS deviation {kk_rms:.4f} over the central band",
        "Hilbert transform of Im chi reproduces Re chi within 5% RMS",
    ))

    n_pass = sum(1 for r in rows if r["status"] == "PASS")
    n_fail = sum(1 for r in rows if r["status"] == "FAIL")
    n_report = sum(1 for r in rows if r["status"] == "REPORT")
    summary = {
        "rows": rows,
        "n_pass": n_pass,
        "n_fail": n_fail,
        "n_report": n_report,
        "note": (
            "FAIL rows transcribe stated claims the numerical oracles "
            "contradict; they are retained deliberately rather than weakened"
        ) if n_fail else "",
    }
    _emit_csv(
        sink, formats, "validate.csv",
        ["check", "status", "measured", "target", "detail"],
        [[r["check"], r["status"], r["measured"], r["target"], r["detail"]] for r in rows],
    )
    _emit_json(sink, formats, "validate.json", summary)
    return summary


SCENARIOS = {
    "spectrum": scenario_spectrum,
    "decay": scenario_decay,
    "couplings": scenario_couplings,
    "susceptibility": scenario_susceptibility,
    "dispersion": scenario_dispersion,
    "groupvel": scenario_groupvel,
    "eigenstates": scenario_eigenstates,
    "pulse": scenario_pulse,
    "validate": scenario_validate,
}


def run_scenario(name, params: Params, sink, formats=("csv", "json", "svg")):
    """Dispatch a named scenario; returns its summary dict."""
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    return SCENARIOS[name](params, sink, formats)
