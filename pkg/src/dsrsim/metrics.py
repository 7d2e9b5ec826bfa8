"""Transition quality: settling time, synchronization deviation, positions.

The deviation Delta integrates how far the agents spread around their own
instantaneous mean while the transition is underway:

    Delta = (dt / zd) * sum_{k=1..k_ts} || Z[k] - mean(Z[k]) ||_1

and Delta* = Delta / T_s removes the effect of response speed, so runs of
different duration compare on synchronization alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory

__all__ = [
    "MetricsRecord",
    "FormationState",
    "settling_time",
    "deviation",
    "normalized_deviation",
    "integrate_positions",
    "compute_metrics",
]


@dataclass(frozen=True)
class MetricsRecord:
    """Settling and synchronization summary of one run.

    For an unsettled (but bounded) run, ``k_ts``/``t_s``/``delta_star`` are
    None and ``delta`` is accumulated over the whole recorded horizon, so
    divergence studies still yield partial data.
    """

    settled: bool
    k_ts: int | None
    t_s: float | None
    delta: float
    delta_star: float | None
    band: float = 0.02
    diverged: bool = False


@dataclass(frozen=True)
class FormationState:
    """Agent positions for the formation experiment; only x is ever integrated."""

    x: np.ndarray
    y: np.ndarray
    initial_spacing: float = 1.0

    def __post_init__(self):
        for name in ("x", "y"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.x.shape != self.y.shape:
            raise ValueError(f"x and y differ in shape: {self.x.shape} vs {self.y.shape}")


def settling_time(
    traj: Trajectory, zd: float, band: float = 0.02
) -> tuple[int | None, float | None, bool]:
    """Smallest k after which every agent stays within band*|zd| of zd.

    Returns (k_ts, t_s, settled); k_ts/t_s are None when some agent is still
    outside the band at the end of the recorded horizon.
    """
    if zd == 0:
        raise ValueError("settling band is relative to zd, which must be nonzero")
    if not (0 < band < 1):
        raise ValueError(f"band must lie in (0, 1), got {band}")
    off = np.abs(traj.states - zd).max(axis=1) > band * abs(zd)
    bad = np.nonzero(off)[0]
    if bad.size == 0:
        return 0, 0.0, True
    last_bad = int(bad[-1])
    if last_bad == traj.states.shape[0] - 1:
        return None, None, False
    k_ts = last_bad + 1
    return k_ts, k_ts * traj.config.dt, True


def deviation(traj: Trajectory, zd: float, k_ts: int, dt: float | None = None) -> float:
    """Integrated 1-norm spread around the instantaneous mean, steps 1..k_ts."""
    if zd == 0:
        raise ValueError("deviation is normalized by zd, which must be nonzero")
    if k_ts > traj.steps_recorded:
        raise ValueError(f"k_ts={k_ts} exceeds the recorded horizon {traj.steps_recorded}")
    if dt is None:
        dt = traj.config.dt
    z = traj.states[1 : k_ts + 1]
    spread = np.abs(z - z.mean(axis=1, keepdims=True)).sum(axis=1)
    return float(dt / zd * spread.sum())


def normalized_deviation(delta: float, t_s: float | None) -> float:
    """Delta divided by the settling time of the same run."""
    if t_s is None or t_s <= 0:
        raise ValueError("normalized deviation needs a settled run with t_s > 0")
    return delta / t_s


def integrate_positions(traj: Trajectory, x0: np.ndarray, dt: float | None = None) -> np.ndarray:
    """Forward-Euler positions X[k+1] = X[k] + dt * Z[k]; row per recorded step."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (traj.n_agents,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({traj.n_agents},)")
    if dt is None:
        dt = traj.config.dt
    steps = traj.states.shape[0]
    x = np.empty((steps, traj.n_agents))
    x[0] = x0
    for k in range(steps - 1):
        x[k + 1] = x[k] + dt * traj.states[k]
    return x


def compute_metrics(traj: Trajectory, zd: float, band: float = 0.02) -> MetricsRecord:
    """Full MetricsRecord for a run; tolerant of unsettled and diverged runs."""
    if traj.diverged:
        return MetricsRecord(
            settled=False, k_ts=None, t_s=None, delta=float("nan"),
            delta_star=None, band=band, diverged=True,
        )
    k_ts, t_s, settled = settling_time(traj, zd, band)
    if not settled:
        return MetricsRecord(
            settled=False, k_ts=None, t_s=None,
            delta=deviation(traj, zd, traj.steps_recorded),
            delta_star=None, band=band,
        )
    delta = deviation(traj, zd, k_ts)
    delta_star = normalized_deviation(delta, t_s) if k_ts > 0 else 0.0
    return MetricsRecord(
        settled=True, k_ts=k_ts, t_s=t_s, delta=delta, delta_star=delta_star, band=band
    )
