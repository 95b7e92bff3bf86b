"""Scalar numba kernels for quadrature integrands.

These mirror the vectorised numpy formulas in :mod:`uavjam.channel` and
:mod:`uavjam.analytic_single`; ``tests/test_kernels.py`` pins them against
each other. Integrands are exposed as ``double f(int n, double *xx)`` cfuncs
so scipy's QUADPACK can call them without re-entering Python.
"""
from __future__ import annotations

import math

import numba as nb
from numba import types
from scipy import LowLevelCallable

_SIG = types.double(types.intc, types.CPointer(types.double))


@nb.njit(cache=True)
def los_prob(d, log_base, decay):
    if d <= 0.0:
        return 1.0
    if log_base == -math.inf:
        # ground-level jammer: NLoS at any positive distance
        return 0.0
    return math.exp(d * decay * log_base)


@nb.njit(cache=True)
def success_given_env(y, m, los):
    """P[h_t > y * g] with unit-mean fading g; ``y = gamma * tau / rho``."""
    if los and m != 1.0:
        return math.exp(-m * math.log1p(y / m))
    return 1.0 / (1.0 + y)


@nb.njit(cache=True)
def failure_given_env(y, m, los):
    """Complement of :func:`success_given_env`, computed without cancellation."""
    if los and m != 1.0:
        return -math.expm1(-m * math.log1p(y / m))
    return y / (1.0 + y)


@nb.njit(cache=True)
def link_success(d, z_u, inv_rho, gamma, log_base, decay, a_los, a_nlos, m, p_jam, noise):
    """LoS/NLoS-mixed success probability of one ground receiver.

    ``inv_rho`` is ``1/rho`` so a receiver colocated with the Tx (``rho``
    infinite) is handled as ``inv_rho = 0``.
    """
    if inv_rho == 0.0:
        return 1.0
    j2 = d * d + z_u * z_u
    pl = los_prob(d, log_base, decay)
    noise_term = math.exp(-gamma * noise * inv_rho)
    if j2 == 0.0:
        # jammer on top of the receiver: infinite interference unless p_jam = 0
        if p_jam == 0.0:
            return noise_term
        return 0.0
    y_l = gamma * p_jam * j2 ** (-0.5 * a_los) * inv_rho
    y_n = gamma * p_jam * j2 ** (-0.5 * a_nlos) * inv_rho
    s_l = success_given_env(y_l, m, True)
    s_n = success_given_env(y_n, m, False)
    if pl >= 0.5:
        return noise_term * (s_l + (1.0 - pl) * (s_n - s_l))
    return noise_term * (s_n + pl * (s_l - s_n))


@nb.cfunc(_SIG, cache=True)
def _eve_theta_integrand(n, xx):
    # xx: theta, ell, d_tu, z_u, log_base, decay, a_ground, a_los, a_nlos, m,
    #     p_tx, p_jam, noise, gamma
    theta = xx[0]
    ell = xx[1]
    d_tu = xx[2]
    sq = d_tu * d_tu + ell * ell - 2.0 * d_tu * ell * math.cos(theta)
    d = math.sqrt(sq) if sq > 0.0 else 0.0
    inv_rho = ell ** xx[6] / xx[10]
    return link_success(d, xx[3], inv_rho, xx[13], xx[4], xx[5], xx[7], xx[8], xx[9], xx[11], xx[12])


@nb.njit(cache=True)
def field_failure(r, z_u, y_scale_los, y_scale_nlos, log_base, decay, a_los, a_nlos, m):
    """Interference-limited failure caused by one jammer of a PPP field at
    horizontal distance ``r``; ``y_scale_* = gamma * p_jam / rho``."""
    j2 = r * r + z_u * z_u
    if j2 == 0.0:
        return 0.0
    pl = los_prob(r, log_base, decay)
    y_l = y_scale_los * j2 ** (-0.5 * a_los)
    y_n = y_scale_nlos * j2 ** (-0.5 * a_nlos)
    return pl * failure_given_env(y_l, m, True) + (1.0 - pl) * failure_given_env(y_n, m, False)


@nb.cfunc(_SIG, cache=True)
def _field_failure_integrand(n, xx):
    # xx: r, z_u, y_scale_los, y_scale_nlos, log_base, decay, a_los, a_nlos, m
    r = xx[0]
    return r * field_failure(r, xx[1], xx[2], xx[3], xx[4], xx[5], xx[6], xx[7], xx[8])


@nb.cfunc(_SIG, cache=True)
def _field_failure_integrand_log(n, xx):
    # same integral in s = log(r): f(r) r dr = f(e^s) e^(2s) ds
    r = math.exp(xx[0])
    return r * r * field_failure(r, xx[1], xx[2], xx[3], xx[4], xx[5], xx[6], xx[7], xx[8])


eve_theta_integrand = LowLevelCallable(_eve_theta_integrand.ctypes)
field_failure_integrand = LowLevelCallable(_field_failure_integrand.ctypes)
field_failure_integrand_log = LowLevelCallable(_field_failure_integrand_log.ctypes)
