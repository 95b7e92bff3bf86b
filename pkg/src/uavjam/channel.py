"""Geometry, LoS probability and fading for the jammer-aided ground network.

All ground nodes sit at height zero with the transmitter at the origin. A
single UAV jammer hovers at height ``z_u``. Ground-to-ground links use the
NLoS exponent unless overridden; air-to-ground links are LoS or NLoS with
probability given by :func:`los_probability`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Mapping

import numpy as np
from numpy.random import Generator
from scipy import special

SQRT_2PI = math.sqrt(2.0 * math.pi)


class LinkEnvironment(enum.Enum):
    LOS = "LOS"
    NLOS = "NLOS"


def _violations(rules) -> list[str]:
    return [msg for ok, msg in rules if not ok]


def environment_violations(v: Mapping) -> list[str]:
    """Rule check for :class:`EnvironmentParams` field values."""
    m = v["m_los"]
    rules = [
        (v["alpha_los"] >= 2, f"alpha_los >= 2 (got {v['alpha_los']})"),
        (v["alpha_nlos"] >= 2, f"alpha_nlos >= 2 (got {v['alpha_nlos']})"),
        (
            v["alpha_nlos"] >= v["alpha_los"],
            f"alpha_nlos >= alpha_los (got {v['alpha_nlos']} < {v['alpha_los']})",
        ),
        (m >= 1 and float(m).is_integer(), f"m_los integer >= 1 (got {m})"),
        (v["zeta"] > 0, f"zeta > 0 (got {v['zeta']})"),
        (v["nu"] > 0, f"nu > 0 (got {v['nu']})"),
        (0 < v["mu"] <= 1, f"0 < mu <= 1 (got {v['mu']})"),
    ]
    g2g = v.get("alpha_g2g")
    if g2g is not None:
        rules.append((g2g >= 2, f"alpha_g2g >= 2 (got {g2g})"))
    return _violations(rules)


def network_violations(v: Mapping) -> list[str]:
    """Rule check for :class:`NetworkConfig` field values."""
    positive = ("p_tx", "noise", "gamma_t", "gamma_t_prime", "ell_r", "region_radius")
    non_negative = ("p_jam", "lambda_e", "lambda_u")
    rules = [(v[k] > 0, f"{k} > 0 (got {v[k]})") for k in positive]
    rules += [(v[k] >= 0, f"{k} >= 0 (got {v[k]})") for k in non_negative]
    return _violations(rules)


def placement_violations(v: Mapping) -> list[str]:
    return _violations(
        [
            (v["d_tu"] >= 0, f"d_tu >= 0 (got {v['d_tu']})"),
            (v["z_u"] >= 0, f"z_u >= 0 (got {v['z_u']})"),
            (
                0 <= v["theta_r"] < 2 * math.pi,
                f"theta_r in [0, 2*pi) (got {v['theta_r']})",
            ),
        ]
    )


@dataclass(frozen=True)
class EnvironmentParams:
    """Propagation environment. Defaults describe a dense urban area.

    ``alpha_g2g`` is the ground-to-ground exponent for Tx->Rx and Tx->Eve
    links. ``None`` means "same as ``alpha_nlos``".
    """

    alpha_los: float = 2.5
    alpha_nlos: float = 3.5
    m_los: int = 2
    zeta: float = 15.0
    nu: float = 5e-4
    mu: float = 0.3
    alpha_g2g: float | None = None

    def __post_init__(self):
        problems = environment_violations(asdict(self))
        if problems:
            raise ValueError("invalid EnvironmentParams: " + "; ".join(problems))
        object.__setattr__(self, "m_los", int(self.m_los))

    @property
    def alpha_ground(self) -> float:
        return self.alpha_nlos if self.alpha_g2g is None else self.alpha_g2g

    def alpha(self, tag: LinkEnvironment) -> float:
        return self.alpha_los if tag is LinkEnvironment.LOS else self.alpha_nlos

    @property
    def los_decay(self) -> float:
        """Per-meter exponent scale ``sqrt(nu * mu)`` of the LoS probability."""
        return math.sqrt(self.nu * self.mu)


@dataclass(frozen=True)
class NetworkConfig:
    """Powers (W), SINR thresholds, link distance (m) and node densities (1/m^2)."""

    p_tx: float = 1e-8
    p_jam: float = 3e-10
    noise: float = 3e-19
    gamma_t: float = 3.0
    gamma_t_prime: float = 2.5
    ell_r: float = 340.0
    lambda_e: float = 5e-7
    lambda_u: float = 0.0
    region_radius: float = 1e4

    def __post_init__(self):
        problems = network_violations(asdict(self))
        if problems:
            raise ValueError("invalid NetworkConfig: " + "; ".join(problems))


@dataclass(frozen=True)
class JammerPlacement:
    """Jammer location: horizontal offset from the Tx, height, and the angle
    between the Tx->Rx axis and the Tx->jammer projection."""

    d_tu: float
    z_u: float
    theta_r: float = math.pi

    def __post_init__(self):
        problems = placement_violations(asdict(self))
        if problems:
            raise ValueError("invalid JammerPlacement: " + "; ".join(problems))

    def rx_distance(self, ell_r: float) -> float:
        """Horizontal jammer-to-Rx distance."""
        return float(horizontal_distance(self.d_tu, ell_r, self.theta_r))


def horizontal_distance(d_tu, ell_c, theta_c):
    """Law-of-cosines distance between the jammer's ground projection and a
    node at ``(ell_c, theta_c)`` in polar coordinates around the Tx."""
    sq = (
        np.square(d_tu)
        + np.square(ell_c)
        - 2.0 * np.asarray(d_tu) * ell_c * np.cos(theta_c)
    )
    return np.sqrt(np.maximum(sq, 0.0))


def q_function(x):
    """Standard normal upper tail probability."""
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def los_base(z_u, zeta: float):
    """Per-unit-distance LoS survival base, in [0, 1].

    Uses ``|Q(x) - 1/2| = erf(x / sqrt 2) / 2`` for ``x >= 0`` to avoid the
    cancellation in ``Q - 1/2``, and a Taylor series near ``z_u = 0`` where the
    closed form is 0/0.
    """
    x = np.asarray(z_u, dtype=float) / zeta
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        closed = 1.0 - (SQRT_2PI / x) * 0.5 * special.erf(x / math.sqrt(2.0))
    x2 = x * x
    series = x2 / 6.0 - x2 * x2 / 40.0 + x2 * x2 * x2 / 336.0
    base = np.where(x < 1e-2, series, closed)
    return np.clip(base, 0.0, 1.0)


def los_probability(d_c, z_u, env: EnvironmentParams):
    """Probability that the jammer-to-ground link at horizontal distance
    ``d_c`` is line of sight.

    At ``z_u = 0`` the link is NLoS for every ``d_c > 0``.
    """
    d_c = np.asarray(d_c, dtype=float)
    z_u = np.asarray(z_u, dtype=float)
    if np.any(d_c < 0) or np.any(z_u < 0):
        raise ValueError("los_probability requires d_c >= 0 and z_u >= 0")
    base = los_base(z_u, env.zeta)
    # base 0 means NLoS at any d_c > 0, even where d_c * decay underflows
    out = np.where((base == 0.0) & (d_c > 0), 0.0, np.power(base, d_c * env.los_decay))
    return out if out.ndim else float(out)


def rho(ell, p_tx: float, alpha: float):
    """Received Tx power ``ell**-alpha * p_tx``; infinite at ``ell = 0``."""
    with np.errstate(divide="ignore", over="ignore"):
        return p_tx * np.power(np.asarray(ell, dtype=float), -alpha)


def tau(d, z_u, p_jam: float, alpha: float):
    """Received jammer power at horizontal distance ``d`` from a jammer at
    height ``z_u``."""
    j2 = np.square(d) + np.square(z_u)
    with np.errstate(divide="ignore", over="ignore"):
        return p_jam * np.power(j2, -0.5 * alpha)


def sample_fading(tag: LinkEnvironment, m_los: int, rng: Generator, size=None):
    """Unit-mean power gain: Gamma(m, 1/m) for LoS, Exp(1) for NLoS."""
    if tag is LinkEnvironment.LOS:
        return rng.gamma(m_los, 1.0 / m_los, size=size)
    return rng.exponential(1.0, size=size)


def sinr(h_t, h_u, rho_c, tau_c, noise):
    h_t, h_u, rho_c, tau_c = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (h_t, h_u, rho_c, tau_c))
    )
    denom = h_u * tau_c + noise
    if np.any(denom == 0):
        raise ZeroDivisionError("sinr undefined with zero noise and zero interference")
    out = h_t * rho_c / denom
    return out if out.ndim else float(out)
