"""Phonon excitations on the dark-soliton background.

The condensate's linearized excitations have dispersion

    eps(k) = sqrt(k^2 (k^2 + 2))        (reduced units)

with the long-wavelength phonon slope sqrt(2) playing the role of the sound
speed and the free-particle asymptote eps ~ k^2 at large k.  (In textbook
form this is eps = sqrt(eps0 (eps0 + 2 mu)) with eps0 = k^2 mu xi^2 for the
healing-length convention used here, i.e. hbar^2/(2m) = mu xi^2.)

On top of a dark soliton the scattering modes acquire localized envelope
corrections.  mode_profiles returns the standard closed-form amplitudes
u_k, v_k: envelope brackets in tanh/sech times the plane-wave carrier
e^{ikx}, so that far from the soliton they reduce to uniform-condensate
Bogoliubov amplitudes.  The envelope normalization is per unit length
(the 1/sqrt(4 pi) prefactor); asymptotic_mode_norm gives the resulting
plane-wave value of |u|^2 - |v|^2 so bookkeeping factors stay explicit.
"""

import math

import numpy as np

from .numerics import find_root

__all__ = [
    "dispersion",
    "dispersion_derivative",
    "BogoliubovMode",
    "mode_profiles",
    "resonant_wavevector",
    "resonant_wavevector_closed",
    "asymptotic_mode_norm",
]


def dispersion(k):
    """Excitation energy eps(k) = sqrt(k^2(k^2+2)); even in k, eps(0) = 0."""
    k2 = np.square(k)
    return np.sqrt(k2 * (k2 + 2.0))


def dispersion_derivative(k):
    """Group slope d eps/d k = 2k(k^2+1)/eps(k) for k != 0."""
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValueError("dispersion slope is undefined at k = 0 (use the limit sqrt(2))")
    return 2.0 * k * (k * k + 1.0) / dispersion(k)


class BogoliubovMode:
    """Mode amplitudes u(x), v(x) for one wavevector.

    Attributes
    ----------
    k : wavevector (1/xi)
    energy : eps(k) (mu)
    u, v : callables over x returning complex arrays
    """

    def __init__(self, k):
        if k == 0.0:
            raise ValueError("k = 0 is the singular zero mode (eps = 0 in denominators)")
        self.k = float(k)
        self.energy = float(dispersion(self.k))
        eps = self.energy
        kk = self.k
        pref = math.sqrt(1.0 / (4.0 * math.pi)) / eps

        def u(x):
            x = np.asarray(x, dtype=float)
            envelope = (kk * kk + 2.0 * eps) * (0.5 * kk + 1j * np.tanh(x)) + kk / np.cosh(x) ** 2
            return pref * envelope * np.exp(1j * kk * x)

        def v(x):
            x = np.asarray(x, dtype=float)
            envelope = (kk * kk - 2.0 * eps) * (0.5 * kk + 1j * np.tanh(x)) + kk / np.cosh(x) ** 2
            return pref * envelope * np.exp(1j * kk * x)

        self.u = u
        self.v = v

    def __repr__(self):
        return f"BogoliubovMode(k={self.k:g}, energy={self.energy:g})"


def mode_profiles(k):
    """Closed-form soliton-frame mode amplitudes for wavevector k (k != 0)."""
    return BogoliubovMode(k)


def resonant_wavevector(omega, tol=1e-12):
    """The positive k solving eps(k) = omega, by bracketed root finding.

    The quartic inversion also has the explicit radical form
    k = sqrt(-1 + sqrt(1 + omega^2)) (see resonant_wavevector_closed);
    the root-finder route is primary and the radical serves as an
    independent cross-check in the validation suite.
    """
    if not (omega > 0):
        raise ValueError(f"resonance requires omega > 0, got {omega!r}")
    hi = 1.0 + omega
    while dispersion(hi) < omega:
        hi *= 2.0
    return find_root(lambda k: float(dispersion(k)) - omega, 0.0, hi, tol=tol)


def resonant_wavevector_closed(omega):
    """Radical inversion of the dispersion: k^2 = -1 + sqrt(1 + omega^2)."""
    if not (omega > 0):
        raise ValueError(f"resonance requires omega > 0, got {omega!r}")
    return math.sqrt(-1.0 + math.sqrt(1.0 + omega * omega))


def asymptotic_mode_norm(k):
    """Plane-wave limit of |u_k|^2 - |v_k|^2 far from the soliton.

    With the per-unit-length envelope normalization this equals
    k^2 (k^2 + 4) / (2 pi eps(k)), not 1; the decay-rate bookkeeping
    carries the corresponding length factor explicitly.
    """
    if k == 0.0:
        raise ValueError("k = 0 has no plane-wave limit")
    k2 = k * k
    return k2 * (k2 + 4.0) / (2.0 * math.pi * float(dispersion(k)))
