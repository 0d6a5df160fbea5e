"""Physical parameter layer for the Dirac-Coulomb bound-state problem.

The radial problem, in natural units (hbar = c = 1), is the coupled
first-order system for the two radial amplitudes f(r), g(r):

    (d/dr + nu/r) f + (E + e/r + m_eff) g = 0
    (d/dr - nu/r) g - (E + e/r - m_eff) f = 0

with nu = j + 1/2 a positive integer, e the Coulomb coupling strength and
m_eff = parity * m: the negative-parity channel is the same system with
the mass sign flipped.  In the usual kappa labelling, parity = +1 is the
kappa = +nu channel (radial quantum number n >= 1) and parity = -1 is
kappa = -nu (n >= 0, including the nodeless ground level).

This module holds the parameter containers, the decoupling-rotation
cases, the confluent-Heun parameter maps of the three Heun-based solution
routes, the closed-form spectrum

    E = m / sqrt(1 + e^2 / (n + sqrt(nu^2 - e^2))^2),

and the quantization-condition residuals that every route must share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateCase, InvalidParams
from .specfun import HeunCParams

#: analytic solution routes, in report order
ANALYTIC_ROUTES = ("standard", "mixed1", "mixed2", "heun")

# Reject energies this close to m: the scaled variables mu, eps blow up.
LAMBDA_GUARD = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Mass, Coulomb coupling, angular number nu = j + 1/2 and parity.

    Subcritical coupling 0 <= e < nu is required so that the origin
    exponent sqrt(nu^2 - e^2) is real; e = nu exactly (critical coupling)
    is rejected.  e = 0 is admitted for limit checks, but supports no
    bound states.
    """

    e: float
    nu: int
    m: float = 1.0
    parity: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m > 0):
            raise InvalidParams(f"mass must be positive, got {self.m}")
        if int(self.nu) != self.nu or self.nu < 1:
            raise InvalidParams(f"nu must be a positive integer, got {self.nu}")
        if not (0 <= self.e < self.nu):
            raise InvalidParams(
                f"supercritical coupling: need 0 <= e < nu, got e={self.e}, nu={self.nu}"
            )
        if self.parity not in (1, -1):
            raise InvalidParams(f"parity must be +1 or -1, got {self.parity}")

    @property
    def m_eff(self) -> float:
        """Signed mass realizing the parity channel."""
        return self.parity * self.m

    @property
    def frobenius_exponent(self) -> float:
        """Origin exponent s = sqrt(nu^2 - e^2) of the regular solution."""
        return math.sqrt(self.nu * self.nu - self.e * self.e)


@dataclass(frozen=True)
class MixingCase:
    """A resolved decoupling-rotation case.

    The orthogonal rotation by angle A/2 mixes (f, g) into (F, G); four
    sign choices of the angle condition exist, labelled 1, 1', 2, 2'.
    Cases 1 and 2 carry an additional regular singular point (R and D) of
    the second-order equation for F; the primed variants are recorded for
    completeness but drive no solver route.
    """

    case_id: str
    sin_a: float
    cos_a: float
    cos_half: float
    sin_half: float
    singular_point: float | None


@dataclass(frozen=True)
class StandardVars:
    """Scaled variables of the hypergeometric treatment.

    lam = sqrt(m^2 - E^2), mu = e*m/lam, eps = e*E/lam, and the origin
    exponent a_frob = sqrt(eps^2 - mu^2 + nu^2), which algebraically
    equals sqrt(nu^2 - e^2).
    """

    lam: float
    mu: float
    eps: float
    a_frob: float


@dataclass(frozen=True)
class EnergyLevel:
    """One bound level: quantum numbers, energy and provenance route."""

    n: int
    nu: int
    parity: int
    E: float
    route: str


def _require_bound_energy(params: SystemParams, E: float):
    if not (0.0 < E < params.m):
        raise InvalidParams(f"bound state requires 0 < E < m, got E={E}")
    if E >= params.m * (1.0 - LAMBDA_GUARD):
        raise InvalidParams(
            f"E={E} is within {LAMBDA_GUARD} of m: sqrt(m^2-E^2) underflows"
        )


def mixing_case(case_id: str, params: SystemParams, E: float) -> MixingCase:
    """Resolve one of the four rotation cases at energy E.

    Case 1 (sin A = e/nu) and 1' (sin A = -e/nu) need subcritical
    coupling only; case 2 (cos A = E/m_eff) and 2' (cos A = -E/m_eff)
    need |E| < m.  Cases 1 and 2 also carry their singular point:

        R = -2e / (E + m_eff cos A),      D = -(e + nu sin A) / (2E).
    """
    cid = str(case_id).replace("'", "p")
    e, nu, m_eff = params.e, params.nu, params.m_eff
    if cid in ("1", "1p"):
        root = params.frobenius_exponent
        sin_a = e / nu if cid == "1" else -e / nu
        cos_a = math.sqrt(1.0 - (e / nu) ** 2)
        if cid == "1":
            cos_half = math.sqrt((nu + root) / (2.0 * nu))
            sin_half = math.sqrt((nu - root) / (2.0 * nu))
            denom = E + m_eff * cos_a
            singular = -2.0 * e / denom if denom != 0.0 else math.inf
        else:
            cos_half = math.sqrt((nu - root) / (2.0 * nu))
            sin_half = math.sqrt((nu + root) / (2.0 * nu))
            singular = None
        return MixingCase(cid, sin_a, cos_a, cos_half, sin_half, singular)

    if cid in ("2", "2p"):
        if not abs(E) < params.m:
            raise InvalidParams(f"case {cid} requires |E| < m, got E={E}")
        sin_a = math.sqrt(1.0 - (E / params.m) ** 2)
        cos_a = E / m_eff if cid == "2" else -E / m_eff
        if cid == "2":
            cos_half = math.sqrt((m_eff + E) / (2.0 * m_eff))
            sin_half = math.sqrt((m_eff - E) / (2.0 * m_eff))
            if E == 0.0:
                raise DegenerateCase("case 2 singular point diverges at E = 0")
            singular = -(e + nu * sin_a) / (2.0 * E)
        else:
            cos_half = math.sqrt((m_eff - E) / (2.0 * m_eff))
            sin_half = math.sqrt((m_eff + E) / (2.0 * m_eff))
            singular = None
        return MixingCase(cid, sin_a, cos_a, cos_half, sin_half, singular)

    raise InvalidParams(f"unknown mixing case {case_id!r}; use 1, 1', 2 or 2'")


def singular_point_D_consistency(params: SystemParams, E: float) -> tuple[float, float]:
    """The case-2 singular point from both printed forms.

    D_a = -(e + nu sin A)/(2 m_eff cos A) and D_b = -(e + nu sin A)/(2E)
    coincide because the case-2 angle condition sets m_eff cos A = E.
    """
    if E == 0.0:
        raise DegenerateCase("both forms of D diverge at E = 0")
    case = mixing_case("2", params, E)
    num = -(params.e + params.nu * case.sin_a)
    d_a = num / (2.0 * params.m_eff * case.cos_a)
    d_b = num / (2.0 * E)
    return d_a, d_b


def heun_params_case1(params: SystemParams, E: float,
                      a_sign: int = 1, b_sign: int = -1) -> HeunCParams:
    """Confluent-Heun parameters of the case-1 equation for F in y = r/R.

    With a = a_sign*sqrt(nu^2-e^2) and b = b_sign*sqrt(m^2-E^2)*R:

        alpha = 2b,  beta = 2a,  gamma = -2,  delta = 2eER,
        eta = 1 + m_eff R sin A - 2eER - nu cos A.

    The default signs (a_sign=+1, b_sign=-1) are the normalizable branch;
    the others are exposed for experimentation only.
    """
    _require_bound_energy(params, E)
    case = mixing_case("1", params, E)
    R = case.singular_point
    if not math.isfinite(R):
        raise InvalidParams(
            "case-1 singular point diverges at this energy (E + m_eff cos A = 0)"
        )
    lam = math.sqrt(params.m ** 2 - E ** 2)
    a = a_sign * params.frobenius_exponent
    b = b_sign * lam * R
    delta = 2.0 * params.e * E * R
    eta = 1.0 + params.m_eff * R * case.sin_a - delta - params.nu * case.cos_a
    return HeunCParams(2.0 * b, 2.0 * a, -2.0, delta, eta)


def heun_params_case2(params: SystemParams, E: float,
                      a_sign: int = 1, b_sign: int = -1) -> HeunCParams:
    """Confluent-Heun parameters of the case-2 equation for F in y = r/D.

    Same structure as case 1 with R replaced by D and the case-2 angle.
    """
    _require_bound_energy(params, E)
    case = mixing_case("2", params, E)
    D = case.singular_point
    lam = math.sqrt(params.m ** 2 - E ** 2)
    a = a_sign * params.frobenius_exponent
    b = b_sign * lam * D
    delta = 2.0 * params.e * E * D
    eta = 1.0 + params.m_eff * D * case.sin_a - delta - params.nu * case.cos_a
    return HeunCParams(2.0 * b, 2.0 * a, -2.0, delta, eta)


def heun_params_full(params: SystemParams, E: float) -> HeunCParams:
    """Parameters of the single-function route in x = -(E+m) r / e.

    alpha = 2e sqrt((m-E)/(m+E)), beta = 2 sqrt(nu^2-e^2), gamma = -2,
    delta = -2Ee^2/(E+m), eta = 1 - nu_s + 2Ee^2/(E+m), where nu_s is the
    parity-signed angular number (the negative-parity channel is obtained
    by nu -> -nu together with swapping the roles of f and g).
    """
    _require_bound_energy(params, E)
    lam = math.sqrt(params.m ** 2 - E ** 2)
    alpha = 2.0 * lam * params.e / (E + params.m)
    beta = 2.0 * params.frobenius_exponent
    nu_s = params.parity * params.nu
    d = 2.0 * E * params.e ** 2 / (E + params.m)
    return HeunCParams(alpha, beta, -2.0, -d, 1.0 - nu_s + d)


def energy_closed_form(n: int, params: SystemParams) -> EnergyLevel:
    """Closed-form bound energy E = m / sqrt(1 + e^2/(n + sqrt(nu^2-e^2))^2)."""
    if int(n) != n or n < 0:
        raise InvalidParams(f"n must be a non-negative integer, got {n}")
    N = n + params.frobenius_exponent
    E = params.m / math.sqrt(1.0 + (params.e / N) ** 2)
    return EnergyLevel(int(n), params.nu, params.parity, E, "closed")


def standard_vars(params: SystemParams, E: float) -> StandardVars:
    """Scaled variables (lam, mu, eps, a_frob) at energy E."""
    _require_bound_energy(params, E)
    lam = math.sqrt(params.m ** 2 - E ** 2)
    mu = params.e * params.m / lam
    eps = params.e * E / lam
    a_frob = math.sqrt(eps * eps - mu * mu + params.nu ** 2)
    return StandardVars(lam, mu, eps, a_frob)


def quantization_residuals(params: SystemParams, E: float, n: int) -> dict[str, float]:
    """Signed residual of each route's quantization condition at (E, n).

    standard: eps - a_frob - n.  For the Heun-based routes the residual is
    delta + (n + (beta+gamma+2)/2)*alpha of the respective parameter map,
    which is exactly the coefficient whose vanishing terminates the
    series.  All four vanish simultaneously at the closed-form energy;
    note the Heun-route residuals carry route-dependent (negative)
    prefactors relative to the standard one, so their signs differ while
    their roots coincide.
    """
    _require_bound_energy(params, E)
    sv = standard_vars(params, E)

    def poly_residual(hp: HeunCParams) -> float:
        return hp.delta + (n + 0.5 * (hp.beta + hp.gamma + 2.0)) * hp.alpha

    return {
        "standard": sv.eps - sv.a_frob - n,
        "mixed1": poly_residual(heun_params_case1(params, E)),
        "mixed2": poly_residual(heun_params_case2(params, E)),
        "heun": poly_residual(heun_params_full(params, E)),
    }


def solve_quantization(params: SystemParams, n: int, route: str,
                       tol: float = 1e-14) -> EnergyLevel:
    """Root-find one route's quantization condition in E by bisection.

    Brackets on (0.01 m, m(1 - 1e-9)); eps(E) is strictly increasing
    there, so each condition changes sign exactly once.  tol is the
    bisection tolerance in E/m.
    """
    if route not in ANALYTIC_ROUTES:
        raise InvalidParams(f"unknown route {route!r}; expected one of {ANALYTIC_ROUTES}")
    if int(n) != n or n < 0:
        raise InvalidParams(f"n must be a non-negative integer, got {n}")
    if params.e == 0.0:
        raise InvalidParams("zero coupling supports no bound states")

    def residual(E: float) -> float:
        return quantization_residuals(params, E, n)[route]

    m = params.m
    lo, hi = 0.01 * m, m * (1.0 - 1e-9)
    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo == 0.0:
        return EnergyLevel(int(n), params.nu, params.parity, lo, route)
    if f_hi == 0.0:
        return EnergyLevel(int(n), params.nu, params.parity, hi, route)
    if f_lo * f_hi > 0.0:
        raise InvalidParams(
            f"quantization condition for route {route!r} has no root in "
            f"({lo}, {hi}) at n={n}"
        )
    while hi - lo > tol * m:
        mid = 0.5 * (lo + hi)
        f_mid = residual(mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    E = 0.5 * (lo + hi)
    return EnergyLevel(int(n), params.nu, params.parity, E, route)
