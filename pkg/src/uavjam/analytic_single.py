"""Secrecy transmission probability with one friendly UAV jammer.

The legitimate link succeeds with a closed-form probability mixing the LoS
and NLoS interference branches. Eavesdroppers form a PPP; by the PGFL the
eavesdropping probability is ``1 - exp(-lambda_e * F)`` where ``F`` is the
plane integral of a single eavesdropper's success probability. ``F`` does
not depend on ``lambda_e`` and is exposed separately so callers sweeping the
density can reuse it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import _kernels
from .channel import (
    EnvironmentParams,
    JammerPlacement,
    LinkEnvironment,
    NetworkConfig,
    los_base,
    los_probability,
    rho,
    tau,
)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    radial_truncation: float = 1e4
    max_subdivisions: int = 200
    tail_check: bool = True

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be > 0")
        if not self.radial_truncation > 0:
            raise ValueError("radial_truncation must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class SecrecyResult:
    p_s: float
    p_e: float
    p_se: float


PROBABILITY_SLACK = 1e-9


def as_probability(x: float, what: str = "probability") -> float:
    """Clamp tiny floating excursions into [0, 1]; larger ones are bugs."""
    if -PROBABILITY_SLACK <= x <= 1.0 + PROBABILITY_SLACK:
        return min(max(float(x), 0.0), 1.0)
    raise QuadratureError(f"{what} = {x!r} lies outside [0, 1]")


def adaptive_quad(func, a, b, quad: QuadratureSettings, args=(), points=None, what="integral"):
    """``scipy.integrate.quad`` with the tolerance policy of ``quad``.

    Raises :class:`QuadratureError` carrying the achieved error estimate when
    QUADPACK reports trouble and the estimate misses the tolerance by more
    than a factor 1e3.
    """
    if points is not None:
        points = [p for p in points if a < p < b] or None
    out = integrate.quad(
        func,
        a,
        b,
        args=args,
        epsabs=quad.abs_tol,
        epsrel=quad.rel_tol,
        limit=quad.max_subdivisions,
        points=points,
        full_output=1,
    )
    value, abserr = out[0], out[1]
    if len(out) > 3:
        allowed = 1e3 * max(quad.abs_tol, quad.rel_tol * abs(value))
        if not (abserr <= allowed) or not math.isfinite(value):
            raise QuadratureError(
                f"{what} on [{a}, {b}] did not converge: value={value!r}, "
                f"error estimate={abserr!r} ({out[3].strip()})"
            )
    return value, abserr


def _env_constants(z_u: float, env: EnvironmentParams) -> tuple[float, float]:
    base = float(los_base(z_u, env.zeta))
    log_base = math.log(base) if base > 0 else -math.inf
    return log_base, env.los_decay


def p_success_conditional(d, z_u, env_tag: LinkEnvironment, rho_c, gamma, cfg: NetworkConfig, env: EnvironmentParams):
    """Success probability of a ground link given the environment of the
    jammer's link to that receiver.

    ``rho_c`` may be infinite (receiver at the Tx), giving probability 1.
    """
    alpha = env.alpha(env_tag)
    rho_c = np.asarray(rho_c, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(np.isinf(rho_c), 0.0, gamma * tau(d, z_u, cfg.p_jam, alpha) / rho_c)
        noise_term = np.exp(-gamma * cfg.noise / rho_c)
    # m = 1 is Rayleigh fading; use the same expression so the branches agree bit for bit
    if env_tag is LinkEnvironment.LOS and env.m_los != 1:
        m = env.m_los
        branch = np.exp(-m * np.log1p(y / m))
    else:
        branch = 1.0 / (1.0 + y)
    out = branch * noise_term
    return out if out.ndim else float(out)


def link_success(d, z_u, rho_c, gamma, cfg: NetworkConfig, env: EnvironmentParams):
    """LoS-probability mixture of the two conditional branches."""
    pl = los_probability(d, z_u, env)
    s_l = p_success_conditional(d, z_u, LinkEnvironment.LOS, rho_c, gamma, cfg, env)
    s_n = p_success_conditional(d, z_u, LinkEnvironment.NLOS, rho_c, gamma, cfg, env)
    # anchored on the likelier branch: exact when branches coincide, and no
    # cancellation when one branch dominates
    return np.where(pl >= 0.5, s_l + (1.0 - pl) * (s_n - s_l), s_n + pl * (s_l - s_n))[()]


def p_success(placement: JammerPlacement, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Probability that the Rx decodes (SINR above ``gamma_t``)."""
    d_r = placement.rx_distance(cfg.ell_r)
    rho_r = rho(cfg.ell_r, cfg.p_tx, env.alpha_ground)
    value = link_success(d_r, placement.z_u, rho_r, cfg.gamma_t, cfg, env)
    return as_probability(float(value), "p_s")


def eve_success(ell, theta, placement: JammerPlacement, cfg: NetworkConfig, env: EnvironmentParams):
    """Success probability of one eavesdropper at polar position
    ``(ell, theta)`` around the Tx, ``theta`` measured from the jammer."""
    d = np.asarray(
        np.sqrt(np.maximum(placement.d_tu**2 + np.square(ell) - 2 * placement.d_tu * np.asarray(ell) * np.cos(theta), 0.0))
    )
    rho_e = rho(ell, cfg.p_tx, env.alpha_ground)
    return link_success(d, placement.z_u, rho_e, cfg.gamma_t_prime, cfg, env)


def _eve_args(ell, placement, cfg, env):
    log_base, decay = _env_constants(placement.z_u, env)
    return (
        float(ell),
        float(placement.d_tu),
        float(placement.z_u),
        log_base,
        decay,
        float(env.alpha_ground),
        float(env.alpha_los),
        float(env.alpha_nlos),
        float(env.m_los),
        cfg.p_tx,
        cfg.p_jam,
        cfg.noise,
        cfg.gamma_t_prime,
    )


def _noise_radius(p_tx, noise, gamma, alpha) -> float:
    """Distance at which the noise-only success probability is ``1/e``."""
    return (p_tx / (gamma * noise)) ** (1.0 / alpha)


def wiretap_integral(
    placement: JammerPlacement,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    quad: QuadratureSettings | None = None,
) -> float:
    """Plane integral of a single eavesdropper's success probability (m^2).

    The integrand is symmetric about the Tx-jammer axis, so theta runs over
    [0, pi] and the result is doubled.
    """
    quad = quad or QuadratureSettings()
    base_args = _eve_args(0.0, placement, cfg, env)
    tail = base_args[1:]
    kern = _kernels.eve_theta_integrand

    def radial(ell):
        val, _ = adaptive_quad(kern, 0.0, math.pi, quad, args=(ell,) + tail, what="angular eavesdropper integral")
        return ell * val

    r_max = quad.radial_truncation
    r_noise = _noise_radius(cfg.p_tx, cfg.noise, cfg.gamma_t_prime, env.alpha_ground)
    points = sorted({placement.d_tu, 0.5 * r_noise, r_noise, 2.0 * r_noise})
    total, _ = adaptive_quad(radial, 0.0, r_max, quad, points=points, what="radial eavesdropper integral")
    total *= 2.0
    if quad.tail_check and total > 0:
        edge = 2.0 * radial(r_max)
        if edge >= 1e-12 * total:
            raise QuadratureError(
                f"eavesdropper integrand at radial_truncation={r_max} is {edge:.3e}, "
                f"not negligible against the integral {total:.3e}; increase radial_truncation"
            )
    return total


def p_eavesdrop(
    placement: JammerPlacement,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    quad: QuadratureSettings | None = None,
) -> float:
    """Probability that at least one eavesdropper exceeds ``gamma_t_prime``."""
    if cfg.lambda_e == 0:
        return 0.0
    return as_probability(-math.expm1(-cfg.lambda_e * wiretap_integral(placement, cfg, env, quad)), "p_e")


def p_secrecy(
    placement: JammerPlacement,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    quad: QuadratureSettings | None = None,
) -> SecrecyResult:
    p_s = p_success(placement, cfg, env)
    p_e = p_eavesdrop(placement, cfg, env, quad)
    return SecrecyResult(p_s=p_s, p_e=p_e, p_se=p_s * (1.0 - p_e))


def asymptotic_wiretap_integral(cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Closed-form ``F`` for a jammer sitting on the Tx at ground level."""
    a = env.alpha_nlos
    if env.alpha_ground != a:
        raise ValueError("the near-Tx asymptote assumes ground links use alpha_nlos")
    beta = cfg.gamma_t_prime * cfg.noise / cfg.p_tx
    jam_factor = cfg.p_tx / (cfg.gamma_t_prime * cfg.p_jam + cfg.p_tx)
    return 2.0 * math.pi * jam_factor * special.gamma(2.0 / a) / (a * beta ** (2.0 / a))


def p_secrecy_asymptotic(placement: JammerPlacement, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Approximation valid as the jammer approaches the Tx at low height.

    Keeps the exact legitimate-link probability and replaces the
    eavesdropping term by its ground-level, zero-offset limit.
    """
    p_s = p_success(placement, cfg, env)
    return p_s * math.exp(-cfg.lambda_e * asymptotic_wiretap_integral(cfg, env))
