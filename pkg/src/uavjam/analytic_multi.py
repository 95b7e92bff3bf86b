"""Secrecy transmission probability under a PPP field of UAV jammers.

Jammers hover at a common height ``z_u`` with planar density ``lambda_u``.
Each receiver (the Rx, every eavesdropper) sees the jammer field through its
Laplace functional, which reduces to an integral over the horizontal
jammer distance of the interference-limited failure probability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import special

from . import _kernels
from .analytic_single import (
    QuadratureError,
    QuadratureSettings,
    SecrecyResult,
    _env_constants,
    _noise_radius,
    adaptive_quad,
    as_probability,
)
from .channel import EnvironmentParams, NetworkConfig


@dataclass(frozen=True)
class MultiJammerSettings:
    """Jammer field parameters.

    ``field_radius`` bounds the jammer-field integrals; the default integrates
    over the whole plane. The eavesdropper radial integral is cut at
    ``quad.radial_truncation``.
    """

    lambda_u: float
    z_u: float
    quad: QuadratureSettings = field(default_factory=QuadratureSettings)
    field_radius: float = math.inf

    def __post_init__(self):
        if self.lambda_u < 0:
            raise ValueError(f"lambda_u >= 0 (got {self.lambda_u})")
        if self.z_u < 0:
            raise ValueError(f"z_u >= 0 (got {self.z_u})")
        if not self.field_radius > 0:
            raise ValueError("field_radius must be > 0")


# Stand-in for an unbounded jammer field; the NLoS tail beyond it is below
# 1e-100 relative.
PLANE_RADIUS = 1e100


def _field_scales(y_scale, z_u, env):
    """Horizontal distances where the field-failure integrand changes shape."""
    scales = [z_u]
    if y_scale > 0:
        scales += [y_scale ** (1.0 / env.alpha_los), y_scale ** (1.0 / env.alpha_nlos)]
    return [s for s in scales if s > 0]


def field_failure_integral(
    inv_rho: float,
    gamma: float,
    z_u: float,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    quad: QuadratureSettings,
    field_radius: float = math.inf,
) -> float:
    """``int_0^R (1 - sum_e p_hat^(e)(r) p_e(r)) r dr`` for one receiver.

    ``inv_rho`` is the reciprocal received Tx power at that receiver. The
    integrand is evaluated in complement form so far-away jammers keep full
    relative accuracy. Beyond the near-field scales the integral runs in
    ``log r``, where the power-law tail becomes an exponential one.
    """
    if cfg.p_jam == 0 or inv_rho == 0:
        return 0.0
    log_base, decay = _env_constants(z_u, env)
    y_scale = gamma * cfg.p_jam * inv_rho
    args = (float(z_u), y_scale, y_scale, log_base, decay, float(env.alpha_los), float(env.alpha_nlos), float(env.m_los))
    scales = _field_scales(y_scale, z_u, env)
    split = min(4.0 * max(scales), field_radius)
    near, _ = adaptive_quad(
        _kernels.field_failure_integrand, 0.0, split, quad, args=args, points=scales, what="jammer-field integral"
    )
    far = 0.0
    if split < field_radius:
        points = None
        if math.isfinite(log_base) and log_base < 0:
            los_length = 1.0 / (decay * -log_base)
            points = [math.log(los_length), math.log(4.0 * los_length)]
        far, _ = adaptive_quad(
            _kernels.field_failure_integrand_log,
            math.log(split),
            math.log(min(field_radius, PLANE_RADIUS)),
            quad,
            args=args,
            points=points,
            what="jammer-field tail integral",
        )
    return near + far


def legitimate_factor(settings: MultiJammerSettings, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Rx success probability averaged over the jammer field."""
    inv_rho_r = cfg.ell_r**env.alpha_ground / cfg.p_tx
    exponent = cfg.gamma_t * cfg.noise * inv_rho_r
    if settings.lambda_u > 0:
        exponent += (
            2.0
            * math.pi
            * settings.lambda_u
            * field_failure_integral(inv_rho_r, cfg.gamma_t, settings.z_u, cfg, env, settings.quad, settings.field_radius)
        )
    return math.exp(-exponent)


def eve_success_multi(ell: float, settings: MultiJammerSettings, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Success probability of one eavesdropper at distance ``ell`` from the Tx."""
    inv_rho = ell**env.alpha_ground / cfg.p_tx
    exponent = cfg.gamma_t_prime * cfg.noise * inv_rho
    if settings.lambda_u > 0:
        exponent += (
            2.0
            * math.pi
            * settings.lambda_u
            * field_failure_integral(inv_rho, cfg.gamma_t_prime, settings.z_u, cfg, env, settings.quad, settings.field_radius)
        )
    return math.exp(-exponent)


def multi_wiretap_integral(settings: MultiJammerSettings, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Plane integral of :func:`eve_success_multi` (m^2)."""
    quad = settings.quad
    r_max = quad.radial_truncation
    r_noise = _noise_radius(cfg.p_tx, cfg.noise, cfg.gamma_t_prime, env.alpha_ground)

    def radial(ell):
        return ell * eve_success_multi(ell, settings, cfg, env)

    points = [0.25 * r_noise, 0.5 * r_noise, r_noise, 2.0 * r_noise]
    total, _ = adaptive_quad(radial, 0.0, r_max, quad, points=points, what="eavesdropper radial integral")
    total *= 2.0 * math.pi
    if quad.tail_check and total > 0:
        edge = 2.0 * math.pi * radial(r_max)
        if edge >= 1e-12 * total:
            raise QuadratureError(
                f"eavesdropper integrand at radial_truncation={r_max} is {edge:.3e}, "
                f"not negligible against the integral {total:.3e}; increase radial_truncation"
            )
    return total


def secrecy_multi(settings: MultiJammerSettings, cfg: NetworkConfig, env: EnvironmentParams) -> SecrecyResult:
    """Legitimate-link factor, eavesdropping probability and their product."""
    p_s = as_probability(legitimate_factor(settings, cfg, env), "multi-jammer p_s")
    p_e = 0.0
    if cfg.lambda_e > 0:
        p_e = as_probability(-math.expm1(-cfg.lambda_e * multi_wiretap_integral(settings, cfg, env)), "multi-jammer p_e")
    return SecrecyResult(p_s=p_s, p_e=p_e, p_se=p_s * (1.0 - p_e))


def p_secrecy_multi(settings: MultiJammerSettings, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Secrecy transmission probability with a PPP jammer field."""
    return secrecy_multi(settings, cfg, env).p_se


def _field_constant(alpha: float) -> float:
    """``2 pi^2 / (alpha sin(2 pi / alpha))``: plane integral of the
    NLoS interference-limited failure for unit scale."""
    return 2.0 * math.pi**2 / (alpha * math.sin(2.0 * math.pi / alpha))


def _check_ground_level_alpha(env: EnvironmentParams) -> float:
    a = env.alpha_nlos
    if not a > 2:
        raise ValueError(f"ground-level jammer asymptote needs alpha_nlos > 2 (got {a})")
    if env.alpha_ground != a:
        raise ValueError("ground-level jammer asymptote assumes ground links use alpha_nlos")
    return a


def p_secrecy_multi_asymptotic(settings: MultiJammerSettings, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Low-height limit: every jammer link NLoS, jammer heights dropped.

    The jammer-field integrals become closed form; one radial quadrature
    over eavesdropper distance remains.
    """
    a = _check_ground_level_alpha(env)
    k = _field_constant(a) * settings.lambda_u
    legit_exp = k * (cfg.gamma_t * cfg.ell_r**a * cfg.p_jam / cfg.p_tx) ** (2.0 / a) + (
        cfg.gamma_t * cfg.noise * cfg.ell_r**a / cfg.p_tx
    )
    if cfg.lambda_e == 0:
        return as_probability(math.exp(-legit_exp))
    noise_coef = cfg.gamma_t_prime * cfg.noise / cfg.p_tx
    jam_coef = k * (cfg.gamma_t_prime * cfg.p_jam / cfg.p_tx) ** (2.0 / a)

    def radial(ell):
        return ell * math.exp(-noise_coef * ell**a - jam_coef * ell * ell)

    r_noise = noise_coef ** (-1.0 / a)
    quad = settings.quad
    near, _ = adaptive_quad(radial, 0.0, 4.0 * r_noise, quad, points=[r_noise], what="asymptotic eavesdropper integral")
    far, _ = adaptive_quad(radial, 4.0 * r_noise, math.inf, quad, what="asymptotic eavesdropper tail")
    eve_exp = 2.0 * math.pi * cfg.lambda_e * (near + far)
    return as_probability(math.exp(-legit_exp - eve_exp))


def p_secrecy_multi_closed_form(settings: MultiJammerSettings, cfg: NetworkConfig, env: EnvironmentParams) -> float:
    """Closed form of :func:`p_secrecy_multi_asymptotic` for ``alpha_nlos = 4``.

    ``exp(x^2) * (1 - erf(x))`` is evaluated as ``erfcx(x)`` to stay finite for
    dense or powerful jammer fields.
    """
    if env.alpha_nlos != 4:
        raise ValueError(f"closed form requires alpha_nlos == 4 (got {env.alpha_nlos})")
    _check_ground_level_alpha(env)
    lam_u, p_u, s2 = settings.lambda_u, cfg.p_jam, cfg.noise
    legit_exp = 0.5 * math.pi**2 * lam_u * math.sqrt(cfg.gamma_t * cfg.ell_r**4 * p_u / cfg.p_tx) + (
        cfg.gamma_t * s2 * cfg.ell_r**4 / cfg.p_tx
    )
    x = 0.25 * math.pi**2 * lam_u * math.sqrt(p_u / s2)
    eve_exp = math.pi * cfg.lambda_e * math.sqrt(math.pi * cfg.p_tx / (4.0 * cfg.gamma_t_prime * s2)) * special.erfcx(x)
    return as_probability(math.exp(-legit_exp - eve_exp))
