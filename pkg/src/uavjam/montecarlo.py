"""Monte Carlo estimation of secrecy, success and eavesdropping probabilities.

Realizations are grouped in fixed-size blocks. Block ``b`` draws from
``SeedSequence(seed, spawn_key=stream + (b,))``, so an estimate depends only
on ``(seed, stream, n, block_size)`` and not on how blocks are scheduled
across threads. ``stream`` gives each sweep point its own family of streams.

The hot loops are numba kernels. :func:`sample_realization` and
:func:`score_realization` are a plain numpy path over the same model, kept
for inspection and for cross-checking the kernels.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba as nb
import numpy as np
from numpy.random import Generator, SeedSequence

from ._kernels import los_prob
from .analytic_multi import MultiJammerSettings
from .analytic_single import _env_constants
from .channel import (
    EnvironmentParams,
    JammerPlacement,
    LinkEnvironment,
    NetworkConfig,
    los_probability,
    rho,
    sample_fading,
    sinr,
    tau,
)

DEFAULT_BLOCK_SIZE = 4096
FIELD_MODES = ("independent", "shared")


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    n_realizations: int

    @classmethod
    def from_counts(cls, hits: int, n: int) -> "MonteCarloEstimate":
        if n < 1:
            raise ValueError("n_realizations must be >= 1")
        p = hits / n
        return cls(mean=p, std_error=math.sqrt(p * (1.0 - p) / n), n_realizations=n)

    def agrees_with(self, value: float, n_sigma: float = 4.0) -> bool:
        """``|value - mean| <= n_sigma * std_error``; a zero standard error
        (all-or-nothing sample) falls back to one realization's resolution."""
        se = self.std_error if self.std_error > 0 else 1.0 / self.n_realizations
        return abs(value - self.mean) <= n_sigma * se


# --------------------------------------------------------------------------
# numpy reference path


@dataclass
class Realization:
    """One draw of the random network around a fixed jammer placement.

    ``env_draws`` marks LoS links with ``True``. With a jammer field the
    per-link arrays have one row per receiver (Rx first, then Eves) and one
    column per jammer.
    """

    eve_positions: np.ndarray
    jammer_positions: np.ndarray
    fading_draws: dict[str, np.ndarray] = field(default_factory=dict)
    env_draws: dict[str, np.ndarray] = field(default_factory=dict)


def sample_ppp(lam: float, radius: float, rng: Generator) -> np.ndarray:
    """Homogeneous PPP on the disk of ``radius`` centred at the origin, as an
    ``(N, 2)`` array."""
    if lam < 0 or not radius > 0:
        raise ValueError("sample_ppp needs lam >= 0 and radius > 0")
    n = rng.poisson(lam * math.pi * radius**2) if lam > 0 else 0
    r = radius * np.sqrt(rng.random(n))
    th = 2.0 * math.pi * rng.random(n)
    return np.column_stack((r * np.cos(th), r * np.sin(th)))


def _jammer_xy(placement: JammerPlacement) -> tuple[float, float]:
    # Rx sits on the +x axis; the jammer is theta_r away from it
    return placement.d_tu * math.cos(placement.theta_r), placement.d_tu * math.sin(placement.theta_r)


def _draw_links(d, z_u, env: EnvironmentParams, rng: Generator):
    d = np.asarray(d, dtype=float)
    los = rng.random(d.shape) < los_probability(d, z_u, env)
    gains = np.where(
        los,
        sample_fading(LinkEnvironment.LOS, env.m_los, rng, d.shape),
        sample_fading(LinkEnvironment.NLOS, env.m_los, rng, d.shape),
    )
    return los, gains


def sample_realization(
    placement: JammerPlacement,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    rng: Generator,
    jammer_field: MultiJammerSettings | None = None,
) -> Realization:
    """Draw eavesdroppers, optional jammer field, LoS tags and fading gains.

    Without ``jammer_field`` the single jammer of ``placement`` is used. With
    it, jammers form a PPP on the simulation disk at height
    ``jammer_field.z_u`` shared by every receiver.
    """
    eves = sample_ppp(cfg.lambda_e, cfg.region_radius, rng)
    receivers = np.vstack(([[cfg.ell_r, 0.0]], eves))
    if jammer_field is None:
        jammers = np.array([_jammer_xy(placement)])
        z_u = placement.z_u
    else:
        jammers = sample_ppp(jammer_field.lambda_u, cfg.region_radius, rng)
        z_u = jammer_field.z_u
    d = np.hypot(receivers[:, None, 0] - jammers[None, :, 0], receivers[:, None, 1] - jammers[None, :, 1])
    los, gains = _draw_links(d, z_u, env, rng)
    h_t = rng.exponential(1.0, size=len(receivers))
    return Realization(
        eve_positions=eves,
        jammer_positions=jammers,
        fading_draws={"h_t": h_t, "h_u": gains},
        env_draws={"los": los, "d": d},
    )


def score_realization(
    real: Realization, z_u: float, cfg: NetworkConfig, env: EnvironmentParams
) -> tuple[bool, bool]:
    """Return ``(rx_decodes, some_eve_decodes)`` for a sampled realization."""
    ell = np.concatenate(([cfg.ell_r], np.hypot(real.eve_positions[:, 0], real.eve_positions[:, 1])))
    rho_c = rho(ell, cfg.p_tx, env.alpha_ground)
    los = real.env_draws["los"]
    alpha = np.where(los, env.alpha_los, env.alpha_nlos)
    interference = (real.fading_draws["h_u"] * tau(real.env_draws["d"], z_u, cfg.p_jam, alpha)).sum(axis=1)
    gam = sinr(real.fading_draws["h_t"], interference, rho_c, np.ones_like(rho_c), cfg.noise)
    return bool(gam[0] > cfg.gamma_t), bool(np.any(gam[1:] > cfg.gamma_t_prime))


# --------------------------------------------------------------------------
# numba kernels


@nb.njit(cache=True)
def _gain(rng, los, m):
    if los:
        return rng.gamma(m, 1.0 / m)
    return rng.exponential(1.0)


@nb.njit(cache=True)
def _jammer_power(rng, d, z_u, log_base, decay, a_los, a_nlos, m, p_jam):
    """Received power from one jammer with freshly drawn LoS tag and fading."""
    los = rng.random() < los_prob(d, log_base, decay)
    a = a_los if los else a_nlos
    j2 = d * d + z_u * z_u
    if j2 == 0.0:
        return math.inf if p_jam > 0 else 0.0
    return _gain(rng, los, m) * p_jam * j2 ** (-0.5 * a)


@nb.njit(nogil=True, cache=True)
def _single_block(rng, n, xj, yj, z_u, log_base, decay, a_g, a_los, a_nlos, m, p_tx, p_jam, noise, g_t, g_e, ell_r, lam_e, radius):
    # counts: rx decodes, no eve decodes, both
    counts = np.zeros(3, np.int64)
    rho_r = p_tx * ell_r ** (-a_g)
    d_r = math.hypot(xj - ell_r, yj)
    mean_eves = lam_e * math.pi * radius * radius
    for _ in range(n):
        h_tr = rng.exponential(1.0)
        i_r = _jammer_power(rng, d_r, z_u, log_base, decay, a_los, a_nlos, m, p_jam)
        rx_ok = h_tr * rho_r > g_t * (i_r + noise)
        eve_ok = False
        n_e = rng.poisson(mean_eves) if mean_eves > 0 else 0
        for _k in range(n_e):
            r = radius * math.sqrt(rng.random())
            th = 2.0 * math.pi * rng.random()
            h_te = rng.exponential(1.0)
            signal = h_te * p_tx * r ** (-a_g) if r > 0 else math.inf
            if signal <= g_e * noise:
                continue
            d = math.hypot(r * math.cos(th) - xj, r * math.sin(th) - yj)
            i_e = _jammer_power(rng, d, z_u, log_base, decay, a_los, a_nlos, m, p_jam)
            if signal > g_e * (i_e + noise):
                eve_ok = True
                break
        counts[0] += rx_ok
        counts[1] += not eve_ok
        counts[2] += rx_ok and not eve_ok
    return counts


@nb.njit(cache=True)
def _field_exceeds(rng, budget, lam_u, radius, z_u, log_base, decay, a_los, a_nlos, m, p_jam):
    """Draw a fresh jammer PPP around one receiver, nearest jammer first, and
    report whether its aggregate interference reaches ``budget``."""
    if budget <= 0.0:
        return True
    if lam_u == 0.0:
        return False
    total = 0.0
    area = 0.0
    while True:
        area += rng.exponential(1.0) / lam_u
        d = math.sqrt(area / math.pi)
        if d > radius:
            return False
        total += _jammer_power(rng, d, z_u, log_base, decay, a_los, a_nlos, m, p_jam)
        if total >= budget:
            return True


@nb.njit(cache=True)
def _shared_exceeds(rng, budget, x, y, jx, jy, n_j, z_u, log_base, decay, a_los, a_nlos, m, p_jam):
    """Aggregate interference from a fixed jammer field reaches ``budget``?"""
    if budget <= 0.0:
        return True
    total = 0.0
    for k in range(n_j):
        d = math.hypot(x - jx[k], y - jy[k])
        total += _jammer_power(rng, d, z_u, log_base, decay, a_los, a_nlos, m, p_jam)
        if total >= budget:
            return True
    return False


@nb.njit(nogil=True, cache=True)
def _multi_block(
    rng, n, shared, full, lam_u, z_u, log_base, decay, a_g, a_los, a_nlos, m, p_tx, p_jam, noise, g_t, g_e, ell_r, lam_e, radius
):
    # counts: rx decodes, realizations with eves scored, no eve decodes among those, both
    counts = np.zeros(4, np.int64)
    rho_r = p_tx * ell_r ** (-a_g)
    mean_eves = lam_e * math.pi * radius * radius
    cap = 16
    jx = np.empty(cap)
    jy = np.empty(cap)
    for _ in range(n):
        n_j = 0
        if shared and lam_u > 0:
            # jammers in order of distance from the Tx
            area = 0.0
            while True:
                area += rng.exponential(1.0) / lam_u
                r = math.sqrt(area / math.pi)
                if r > radius:
                    break
                if n_j == cap:
                    cap *= 2
                    nx = np.empty(cap)
                    ny = np.empty(cap)
                    nx[:n_j] = jx[:n_j]
                    ny[:n_j] = jy[:n_j]
                    jx = nx
                    jy = ny
                th = 2.0 * math.pi * rng.random()
                jx[n_j] = r * math.cos(th)
                jy[n_j] = r * math.sin(th)
                n_j += 1
        h_tr = rng.exponential(1.0)
        budget = h_tr * rho_r / g_t - noise
        if shared:
            rx_fail = _shared_exceeds(rng, budget, ell_r, 0.0, jx, jy, n_j, z_u, log_base, decay, a_los, a_nlos, m, p_jam)
        else:
            rx_fail = _field_exceeds(rng, budget, lam_u, radius, z_u, log_base, decay, a_los, a_nlos, m, p_jam)
        rx_ok = not rx_fail
        counts[0] += rx_ok
        if not (rx_ok or full):
            continue
        eve_ok = False
        n_e = rng.poisson(mean_eves) if mean_eves > 0 else 0
        for _k in range(n_e):
            r = radius * math.sqrt(rng.random())
            th = 2.0 * math.pi * rng.random()
            h_te = rng.exponential(1.0)
            signal = h_te * p_tx * r ** (-a_g) if r > 0 else math.inf
            budget = signal / g_e - noise
            if budget <= 0.0:
                continue
            if shared:
                fail = _shared_exceeds(
                    rng, budget, r * math.cos(th), r * math.sin(th), jx, jy, n_j, z_u, log_base, decay, a_los, a_nlos, m, p_jam
                )
            else:
                fail = _field_exceeds(rng, budget, lam_u, radius, z_u, log_base, decay, a_los, a_nlos, m, p_jam)
            if not fail:
                eve_ok = True
                break
        counts[1] += 1
        counts[2] += not eve_ok
        counts[3] += rx_ok and not eve_ok
    return counts


# --------------------------------------------------------------------------
# drivers


def _block_sizes(n: int, block_size: int) -> list[int]:
    full, rest = divmod(n, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _run_blocks(kernel, n: int, seed: int, block_size: int, threads: int, stream: tuple = ()) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    sizes = _block_sizes(n, block_size)

    def one(b):
        rng = np.random.default_rng(SeedSequence(seed, spawn_key=tuple(stream) + (b,)))
        return kernel(rng, sizes[b])

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    else:
        parts = [one(b) for b in range(len(sizes))]
    return np.sum(parts, axis=0)


def _common_args(z_u: float, cfg: NetworkConfig, env: EnvironmentParams):
    log_base, decay = _env_constants(z_u, env)
    return (
        float(z_u),
        log_base,
        decay,
        float(env.alpha_ground),
        float(env.alpha_los),
        float(env.alpha_nlos),
        float(env.m_los),
        cfg.p_tx,
        cfg.p_jam,
        cfg.noise,
        cfg.gamma_t,
        cfg.gamma_t_prime,
        cfg.ell_r,
        cfg.lambda_e,
        cfg.region_radius,
    )


def simulate_components(
    placement: JammerPlacement,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    n: int = 200_000,
    seed: int = 0,
    *,
    block_size: int = DEFAULT_BLOCK_SIZE,
    threads: int = 1,
    stream: tuple = (),
) -> dict[str, MonteCarloEstimate]:
    """Estimates of ``p_s``, ``p_e`` and ``p_se`` for a single jammer."""
    xj, yj = _jammer_xy(placement)
    args = _common_args(placement.z_u, cfg, env)

    def kernel(rng, size):
        return _single_block(rng, size, xj, yj, *args)

    rx_ok, no_eve, both = _run_blocks(kernel, n, seed, block_size, threads, stream)
    return {
        "p_s": MonteCarloEstimate.from_counts(int(rx_ok), n),
        "p_e": MonteCarloEstimate.from_counts(int(n - no_eve), n),
        "p_se": MonteCarloEstimate.from_counts(int(both), n),
    }


def simulate_secrecy(
    placement: JammerPlacement,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    n: int = 200_000,
    seed: int = 0,
    *,
    block_size: int = DEFAULT_BLOCK_SIZE,
    threads: int = 1,
    stream: tuple = (),
) -> MonteCarloEstimate:
    """Fraction of realizations where the Rx decodes and no Eve does."""
    return simulate_components(
        placement, cfg, env, n, seed, block_size=block_size, threads=threads, stream=stream
    )["p_se"]


def simulate_components_multi(
    settings: MultiJammerSettings,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    n: int = 200_000,
    seed: int = 0,
    *,
    field_mode: str = "independent",
    full: bool = False,
    block_size: int = DEFAULT_BLOCK_SIZE,
    threads: int = 1,
    stream: tuple = (),
) -> dict[str, MonteCarloEstimate]:
    """Multi-jammer estimates of ``p_s``, ``p_se`` and, with ``full=True``, ``p_e``.

    ``field_mode="independent"`` gives every receiver its own jammer PPP
    realization (centred on that receiver, radius ``cfg.region_radius``),
    matching the independence between legitimate and wiretap channels that
    the analytic expression assumes. ``"shared"`` draws one physical field on
    the simulation disk that all receivers see.

    Without ``full``, eavesdroppers are only scored when the Rx decodes,
    which is all ``p_se`` needs.
    """
    if field_mode not in FIELD_MODES:
        raise ValueError(f"field_mode must be one of {FIELD_MODES}")
    shared = field_mode == "shared"
    args = _common_args(settings.z_u, cfg, env)

    def kernel(rng, size):
        return _multi_block(rng, size, shared, full, float(settings.lambda_u), *args)

    rx_ok, scored, no_eve, both = _run_blocks(kernel, n, seed, block_size, threads, stream)
    out = {
        "p_s": MonteCarloEstimate.from_counts(int(rx_ok), n),
        "p_se": MonteCarloEstimate.from_counts(int(both), n),
    }
    if full:
        out["p_e"] = MonteCarloEstimate.from_counts(int(scored - no_eve), int(scored))
    return out


def simulate_secrecy_multi(
    settings: MultiJammerSettings,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    n: int = 200_000,
    seed: int = 0,
    *,
    field_mode: str = "independent",
    block_size: int = DEFAULT_BLOCK_SIZE,
    threads: int = 1,
    stream: tuple = (),
) -> MonteCarloEstimate:
    return simulate_components_multi(
        settings, cfg, env, n, seed, field_mode=field_mode, block_size=block_size, threads=threads, stream=stream
    )["p_se"]
