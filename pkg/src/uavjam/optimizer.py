"""Jammer placement search: coarse grid followed by successive halving.

The single-jammer search fixes the jammer on the extension of the Rx->Tx
line (``theta_r = pi``), which is where the secrecy probability peaks for any
offset and height, and scans ``(d_tu, z_u)``. The multi-jammer search scans
the common height only. No unimodality is assumed: the coarse grid is
exhaustive and refinement only polishes the incumbent.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analytic_multi import MultiJammerSettings, p_secrecy_multi
from .analytic_single import QuadratureSettings, p_secrecy
from .channel import EnvironmentParams, JammerPlacement, NetworkConfig


class Objective(enum.Enum):
    SINGLE = "SINGLE"
    MULTI = "MULTI"


class OptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class AxisGrid:
    """Closed interval sampled at ``points`` evenly spaced values."""

    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if not self.hi >= self.lo:
            raise ValueError(f"empty range [{self.lo}, {self.hi}]")
        if self.points < 1 or (self.points == 1 and self.hi > self.lo):
            raise ValueError("grid needs >= 2 points unless the range is a single value")

    @property
    def step(self) -> float:
        return 0.0 if self.points == 1 else (self.hi - self.lo) / (self.points - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class PlacementSearchSpec:
    """Search box and effort. ``d_tu_range=None`` means ``[0, 2 * ell_r]``."""

    d_tu_range: AxisGrid | None = None
    z_u_range: AxisGrid = AxisGrid(0.0, 500.0, 26)
    refine_iterations: int = 5
    objective: Objective = Objective.SINGLE

    def __post_init__(self):
        if self.refine_iterations < 0:
            raise ValueError("refine_iterations must be >= 0")

    def d_axis(self, ell_r: float) -> AxisGrid:
        return self.d_tu_range or AxisGrid(0.0, 2.0 * ell_r, 41)


@dataclass(frozen=True)
class OptimalPlacement:
    d_tu_star: float
    z_u_star: float
    p_se_star: float
    evaluations: int


def _better(value, point, best_value, best_point) -> bool:
    # higher objective wins; exact ties go to the lexicographically lowest point
    if value != best_value:
        return value > best_value
    return tuple(point) < tuple(best_point)


def grid_refine(
    objective: Callable[..., float], axes: Sequence[AxisGrid], refine_iterations: int
) -> tuple[tuple[float, ...], float, int]:
    """Maximise ``objective(*point)`` over the tensor grid of ``axes``.

    After the full scan, each refinement round halves every step and probes
    the ``3**k`` neighbourhood of the incumbent, clipped to the box.
    Returns ``(point, value, evaluations)``.
    """
    seen: dict[tuple[float, ...], float] = {}

    def evaluate(point):
        if point not in seen:
            value = float(objective(*point))
            if not math.isfinite(value):
                raise OptimizationError(f"objective is {value!r} at {point}")
            seen[point] = value
        return seen[point]

    best_point, best_value = None, -math.inf
    for point in itertools.product(*(ax.values() for ax in axes)):
        point = tuple(float(p) for p in point)
        value = evaluate(point)
        if best_point is None or _better(value, point, best_value, best_point):
            best_point, best_value = point, value

    steps = [ax.step for ax in axes]
    for _ in range(refine_iterations):
        steps = [s / 2.0 for s in steps]
        incumbent = best_point
        for offsets in itertools.product((-1, 0, 1), repeat=len(axes)):
            point = tuple(
                float(min(max(c + o * s, ax.lo), ax.hi)) for c, o, s, ax in zip(incumbent, offsets, steps, axes)
            )
            value = evaluate(point)
            if _better(value, point, best_value, best_point):
                best_point, best_value = point, value
    return best_point, best_value, len(seen)


def optimize_placement(
    spec: PlacementSearchSpec,
    cfg: NetworkConfig,
    env: EnvironmentParams,
    quad: QuadratureSettings | None = None,
) -> OptimalPlacement:
    """Best single-jammer ``(d_tu, z_u)`` with ``theta_r = pi``."""
    if spec.objective is not Objective.SINGLE:
        raise ValueError("optimize_placement needs objective=SINGLE")
    quad = quad or QuadratureSettings()

    def objective(d_tu, z_u):
        return p_secrecy(JammerPlacement(d_tu, z_u, math.pi), cfg, env, quad).p_se

    (d, z), value, n_eval = grid_refine(objective, [spec.d_axis(cfg.ell_r), spec.z_u_range], spec.refine_iterations)
    return OptimalPlacement(d_tu_star=d, z_u_star=z, p_se_star=value, evaluations=n_eval)


def optimize_height_multi(
    spec: PlacementSearchSpec,
    settings: MultiJammerSettings,
    cfg: NetworkConfig,
    env: EnvironmentParams,
) -> OptimalPlacement:
    """Best common jammer height for a PPP jammer field of ``settings.lambda_u``.

    ``d_tu_star`` is NaN: a homogeneous field has no horizontal offset.
    """
    if spec.objective is not Objective.MULTI:
        raise ValueError("optimize_height_multi needs objective=MULTI")

    def objective(z_u):
        s = MultiJammerSettings(settings.lambda_u, z_u, settings.quad, settings.field_radius)
        return p_secrecy_multi(s, cfg, env)

    (z,), value, n_eval = grid_refine(objective, [spec.z_u_range], spec.refine_iterations)
    return OptimalPlacement(d_tu_star=math.nan, z_u_star=z, p_se_star=value, evaluations=n_eval)
