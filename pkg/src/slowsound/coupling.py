"""Impurity-phonon coupling amplitudes.

Two routes to the same physics:

* closed forms g0_closed / g1_closed for the two interband transitions
  (ground <-> first, first <-> second), polynomial-times-csch expressions
  whose exponential csch(pi k/2) envelope reflects the smooth sech-type
  overlap region of width ~ xi;
* a quadrature oracle g_quadrature(l, l', k) evaluating the defining
  overlap integral  g12 * integral phi_l phi_l' psi_sol (u_k + v_k) dx
  with psi_sol = sqrt(n0) tanh(x) and the soliton-frame mode amplitudes,
  which also provides the intraband amplitudes (l = l') that the closed
  forms do not cover.

Only |g|^2 enters rates and susceptibilities; complex phases are retained
for amplitude-level dynamics.  The closed forms carry a global i by
convention, while the overlap integral's phase depends on the parity of
the weight function (even weights give real values, odd weights imaginary
ones); magnitude comparisons are the meaningful cross-check.
"""

import math
from dataclasses import dataclass

from .bogoliubov import dispersion, mode_profiles
from .numerics import integrate_line
from .params import Params
from .qutrit import ImpurityStates

__all__ = [
    "csch",
    "g0_closed",
    "g1_closed",
    "g_quadrature",
    "interband_coupling",
    "CouplingSet",
    "coupling_set",
]

# csch(pi k / 2) underflows to zero well before math.sinh overflows.
_CSCH_ARG_MAX = 700.0


def csch(x):
    """Hyperbolic cosecant with graceful underflow for large arguments."""
    if x == 0.0:
        raise ValueError("csch(0) is singular")
    if abs(x) > _CSCH_ARG_MAX:
        return 0.0
    return 1.0 / math.sinh(x)


def g0_closed(k, params: Params):
    """Closed-form lower-transition coupling g_0(k) (complex, reduced units).

    i g12 k^2/(80 eps) sqrt(n0 pi/6) (2 + 8k^2 + 15 eps)(-4 + k^2) csch(pi k/2)
    """
    if not (k > 0):
        raise ValueError(f"couplings are defined for k > 0, got {k!r}")
    eps = float(dispersion(k))
    pref = params.g12 * k * k / (80.0 * eps) * math.sqrt(params.density_xi * math.pi / 6.0)
    poly = (2.0 + 8.0 * k * k + 15.0 * eps) * (-4.0 + k * k)
    return 1j * pref * poly * csch(math.pi * k / 2.0)


def g1_closed(k, params: Params):
    """Closed-form upper-transition coupling g_1(k) (complex, reduced units).

    i g12 k^2/(896 eps) sqrt(n0 pi/15)
        [28 (2k^4 - 35k^2 + 68) eps + (29k^6 - 504k^4 + 896k^2 + 64)] csch(pi k/2)
    """
    if not (k > 0):
        raise ValueError(f"couplings are defined for k > 0, got {k!r}")
    eps = float(dispersion(k))
    k2 = k * k
    pref = params.g12 * k2 / (896.0 * eps) * math.sqrt(params.density_xi * math.pi / 15.0)
    bracket = 28.0 * (2.0 * k2 * k2 - 35.0 * k2 + 68.0) * eps + (
        29.0 * k2 ** 3 - 504.0 * k2 * k2 + 896.0 * k2 + 64.0
    )
    return 1j * pref * bracket * csch(math.pi * k / 2.0)


def g_quadrature(l, lp, k, params: Params, states: ImpurityStates = None, tol=1e-9):
    """Overlap-integral coupling between impurity states l and l' at wavevector k.

    Evaluates g12 * integral phi_l(x) phi_l'(x) psi_sol(x) [u_k(x)+v_k(x)] dx
    with psi_sol = sqrt(n0) tanh(x).  The impurity states default to the
    params' ansatz family; pass a prepared ImpurityStates to amortize the
    normalization quadratures over a k sweep.
    """
    if l not in (0, 1, 2) or lp not in (0, 1, 2):
        raise ValueError(f"state indices must be in {{0,1,2}}, got ({l!r}, {lp!r})")
    if not (k > 0):
        raise ValueError(f"couplings are defined for k > 0, got {k!r}")
    if states is None:
        states = ImpurityStates(params)
    mode = mode_profiles(k)
    sqrt_n0 = math.sqrt(params.density_xi)
    phi_l = states[l]
    phi_lp = states[lp]

    def integrand(x):
        return (
            float(phi_l(x))
            * float(phi_lp(x))
            * sqrt_n0
            * math.tanh(x)
            * complex(mode.u(x) + mode.v(x))
        )

    return params.g12 * integrate_line(integrand, tol=tol)


def interband_coupling(which, k, params: Params, states: ImpurityStates = None):
    """Transition coupling for the lower (which=0) or upper (which=1) line.

    Dispatches on params.coupling_mode: "closed" uses the printed closed
    forms, "quadrature" the overlap oracle (pairs 0-1 and 1-2).
    """
    if which not in (0, 1):
        raise ValueError(f"which must be 0 or 1, got {which!r}")
    if params.coupling_mode == "closed":
        return g0_closed(k, params) if which == 0 else g1_closed(k, params)
    pair = (0, 1) if which == 0 else (1, 2)
    return g_quadrature(pair[0], pair[1], k, params, states=states)


@dataclass(frozen=True)
class CouplingSet:
    """All coupling amplitudes at one wavevector, with provenance tags."""

    k: float
    g0: complex
    g1: complex
    g00: complex
    g11: complex
    g22: complex
    interband_source: str  # "closed-form" or "quadrature"
    intraband_source: str  # always "quadrature"


def coupling_set(k, params: Params, states: ImpurityStates = None):
    """Interband and intraband amplitudes at k.

    Interband follows params.coupling_mode; the intraband amplitudes have
    no closed forms and always come from quadrature.
    """
    if states is None:
        states = ImpurityStates(params)
    if params.coupling_mode == "closed":
        g0 = g0_closed(k, params)
        g1 = g1_closed(k, params)
        source = "closed-form"
    else:
        g0 = g_quadrature(0, 1, k, params, states=states)
        g1 = g_quadrature(1, 2, k, params, states=states)
        source = "quadrature"
    return CouplingSet(
        k=k,
        g0=g0,
        g1=g1,
        g00=g_quadrature(0, 0, k, params, states=states),
        g11=g_quadrature(1, 1, k, params, states=states),
        g22=g_quadrature(2, 2, k, params, states=states),
        interband_source=source,
        intraband_source="quadrature",
    )
