"""Shooting-method cross-check, free of the analytic solution formulas.

Integrates the first-order radial system outward from a Frobenius start
near the origin and locates bound energies as sign changes of the
far-boundary amplitude.  Because the growing mode dominates off an
eigenvalue, the endpoint value of f (normalized by the largest interior
amplitude) changes sign exactly when an eigenvalue is crossed, so plain
bracketing plus Brent refinement is sufficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import ode, solve_ivp
from scipy.optimize import brentq

from .errors import (InvalidParams, MaxIterations, NoBracket, Overflow,
                     StepFailure)
from .model import EnergyLevel, SystemParams, standard_vars
from .routes import RadialGrid, RadialSolution, default_grid

# Magnitude cap: beyond this the integration is pure growing mode and
# only its sign is informative.
OVERFLOW_CAP = 1e250

# Default scan window for bracketing, in units of m.
SCAN_E_MIN = 0.2
SCAN_E_MAX = 1.0 - 1e-9
SCAN_POINTS = 200


@dataclass(frozen=True)
class ShootConfig:
    """Integration span and step control for one shooting run.

    r_match is carried for a future two-sided matcher; the current
    functional is the far-endpoint amplitude, which is simpler and
    sufficient given the exponential dichotomy of the two modes.
    """

    r_start: float
    r_match: float
    r_far: float
    first_step: float = 0.0      # 0 lets the integrator choose
    max_step: float = np.inf
    local_error_tol: float = 1e-12
    max_iterations: int = 200

    def __post_init__(self):
        if not (0 < self.r_start < self.r_match < self.r_far):
            raise InvalidParams("need 0 < r_start < r_match < r_far")
        if not self.local_error_tol > 0:
            raise InvalidParams("local error tolerance must be positive")

    @classmethod
    def for_lambda(cls, lam: float, **overrides) -> "ShootConfig":
        """Defaults scaled by the decay constant lam = sqrt(m^2 - E^2).

        The start radius is small enough (1e-6/lam) that the truncated
        Frobenius seed perturbs the integrated shape by well under the
        1e-5 agreement budget against the analytic routes.
        """
        base = dict(r_start=1e-6 / lam, r_match=10.0 / lam, r_far=40.0 / lam)
        base.update(overrides)
        return cls(**base)


def _rhs(params: SystemParams, E: float):
    nu, e, m_eff = params.nu, params.e, params.m_eff

    def rhs(r, y):
        f, g = y
        w = E + e / r
        return (-(nu / r) * f - (w + m_eff) * g,
                (nu / r) * g + (w - m_eff) * f)

    return rhs


def frobenius_start(params: SystemParams, E: float, r_start: float):
    """Leading-order regular data (f, g, f', g') at r_start.

    The regular solution behaves like r^s with s = sqrt(nu^2 - e^2); the
    amplitude ratio follows from the 1/r terms of the system at order
    r^(s-1):  g/f = -(s + nu)/e.
    """
    if params.e <= 0.0:
        raise InvalidParams("the Frobenius start needs e > 0")
    if not (0.0 < E < params.m):
        raise InvalidParams(f"bound state requires 0 < E < m, got E={E}")
    s = params.frobenius_exponent
    kappa_ratio = -(s + params.nu) / params.e
    f0 = r_start ** s
    g0 = kappa_ratio * f0
    df0 = s * f0 / r_start
    dg0 = kappa_ratio * df0
    return f0, g0, df0, dg0


def _far_amplitude(params: SystemParams, E: float, cfg: ShootConfig) -> float:
    """Endpoint f normalized by the running max |f|: the shooting functional.

    Saturates with the correct sign when the growing mode overflows the
    magnitude cap.
    """
    f0, g0, _, _ = frobenius_start(params, E, cfg.r_start)
    state = {"max_f": abs(f0), "halted_sign": 0.0}

    rhs = _rhs(params, E)

    def rhs_list(r, y):
        return list(rhs(r, y))

    def solout(r, y):
        af = abs(y[0])
        if af > state["max_f"]:
            state["max_f"] = af
        if af > OVERFLOW_CAP or abs(y[1]) > OVERFLOW_CAP:
            state["halted_sign"] = math.copysign(1.0, y[0])
            return -1
        return 0

    solver = ode(rhs_list).set_integrator(
        "dop853", rtol=cfg.local_error_tol, atol=1e-280, nsteps=200_000,
        first_step=cfg.first_step,
        max_step=0.0 if not math.isfinite(cfg.max_step) else cfg.max_step)
    solver.set_solout(solout)
    solver.set_initial_value([f0, g0], cfg.r_start)
    y_end = solver.integrate(cfg.r_far)
    if state["halted_sign"] != 0.0:
        return state["halted_sign"] * 1e6
    if not solver.successful():
        raise StepFailure(f"dop853 failed at E={E}")
    return float(y_end[0] / state["max_f"])


def integrate_radial(params: SystemParams, E: float,
                     config: ShootConfig | None = None,
                     grid: RadialGrid | None = None) -> RadialSolution:
    """Integrate the radial system outward and record (f, g) on a grid.

    Raises Overflow when the solution exceeds the magnitude cap (the sign
    of the diverging component is attached for bracket drivers).

    Note on tails: even at an eigenvalue, roundoff seeds the growing mode
    at relative size ~eps, which overtakes the decaying profile beyond
    lam*r ~ 18-23 in double precision.  Shooting is unaffected (only the
    sign of the overgrown endpoint matters), but wavefunction comparisons
    should stay inside that window.
    """
    if not (0.0 < E < params.m):
        raise InvalidParams(f"bound state requires 0 < E < m, got E={E}")
    lam = math.sqrt(params.m ** 2 - E ** 2)
    if config is None:
        config = ShootConfig.for_lambda(lam)
    if grid is None:
        grid = default_grid(params, E,
                            r_min_scale=max(1e-2, config.r_start * lam * 1.01),
                            r_max_scale=config.r_far * lam)
    r = grid.r
    if r[0] < config.r_start or r[-1] > config.r_far:
        raise InvalidParams("grid must lie within [r_start, r_far]")

    f0, g0, _, _ = frobenius_start(params, E, config.r_start)
    rhs = _rhs(params, E)

    def rhs_arr(r_, y):
        return np.array(rhs(r_, y))

    def overflow_event(r_, y):
        return OVERFLOW_CAP - max(abs(y[0]), abs(y[1]))

    overflow_event.terminal = True

    sol = solve_ivp(rhs_arr, (config.r_start, config.r_far), np.array([f0, g0]),
                    method="DOP853", t_eval=r,
                    rtol=config.local_error_tol, atol=1e-280,
                    first_step=config.first_step or None,
                    max_step=config.max_step, events=overflow_event)
    if sol.status == 1:
        sign = math.copysign(1.0, sol.y_events[0][0][0]) if len(sol.y_events[0]) else 0.0
        raise Overflow(f"solution exceeded {OVERFLOW_CAP:g} at E={E}",
                       sign=sign, r_reached=float(sol.t_events[0][0]))
    if not sol.success:
        raise StepFailure(f"dop853 failed at E={E}: {sol.message}")
    level = EnergyLevel(-1, params.nu, params.parity, E, "oracle")
    return RadialSolution(grid, sol.y[0], sol.y[1], level, "oracle", params)


def shoot_energy(params: SystemParams, E_lo: float, E_hi: float,
                 config: ShootConfig | None = None) -> EnergyLevel:
    """Refine one bound energy inside a bracketing interval.

    The bracket must contain exactly one sign change of the far-boundary
    functional.  Brent's method (bisection with secant/inverse-quadratic
    acceleration) refines to |dE|/m well below 1e-10.  The radial quantum
    number of the result is read off algebraically from
    n = round(eE/lam - sqrt(nu^2 - e^2)).
    """
    if not (0.0 < E_lo < E_hi < params.m):
        raise InvalidParams(f"need 0 < E_lo < E_hi < m, got ({E_lo}, {E_hi})")
    if config is None:
        # scale by the smallest decay constant in the bracket (the upper
        # end), so r_far covers the full extent of every candidate state
        lam_hi = math.sqrt(params.m ** 2 - E_hi ** 2)
        config = ShootConfig.for_lambda(lam_hi)

    def phi(E):
        return _far_amplitude(params, E, config)

    phi_lo, phi_hi = phi(E_lo), phi(E_hi)
    if phi_lo == 0.0:
        E = E_lo
    elif phi_hi == 0.0:
        E = E_hi
    elif phi_lo * phi_hi > 0.0:
        raise NoBracket(
            f"far-boundary functional has the same sign at both ends: "
            f"phi({E_lo})={phi_lo:.3e}, phi({E_hi})={phi_hi:.3e}"
        )
    else:
        # xtol at the float floor: pinning the root to ~1 ulp minimizes
        # the growing-mode seed left in the eigenstate
        E, res = brentq(phi, E_lo, E_hi, xtol=1e-15 * params.m, rtol=8.9e-16,
                        maxiter=config.max_iterations, full_output=True,
                        disp=False)
        if not res.converged:
            raise MaxIterations(
                f"Brent refinement did not converge within {config.max_iterations} steps"
            )
    sv = standard_vars(params, E)
    n = round(sv.eps - params.frobenius_exponent)
    return EnergyLevel(int(n), params.nu, params.parity, float(E), "oracle")


def scan_brackets(params: SystemParams, e_min_scale: float = SCAN_E_MIN,
                  e_max_scale: float = SCAN_E_MAX, points: int = SCAN_POINTS,
                  scan_tol: float = 1e-9) -> list[tuple[float, float]]:
    """Uniform energy scan for sign changes of the far-boundary functional.

    Each returned interval brackets one eigenvalue and can seed
    shoot_energy.  A looser integration tolerance is enough for sign
    information.
    """
    energies = np.linspace(e_min_scale * params.m, e_max_scale * params.m, points)
    lam_ref = math.sqrt(params.m ** 2 - energies[len(energies) // 2] ** 2)
    cfg = ShootConfig.for_lambda(lam_ref, local_error_tol=scan_tol)
    values = [_far_amplitude(params, float(E), cfg) for E in energies]
    brackets = []
    for i in range(len(energies) - 1):
        if values[i] == 0.0:
            continue
        if values[i] * values[i + 1] < 0.0:
            brackets.append((float(energies[i]), float(energies[i + 1])))
    return brackets
