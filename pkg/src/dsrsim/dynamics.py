"""Discrete-time update laws and the simulation loop.

Three interchangeable laws drive the non-source agents toward the source
value:

* ``STANDARD``        Z[k+1] = Z[k] - gamma*K Z[k] + gamma*B Zs[k]
* ``ACCELERATED``     adds a momentum term beta*(Z[k] - Z[k-1]) and evaluates
                      the network term at the extrapolated state
                      Z[k] + beta*(Z[k] - Z[k-1])
* ``DSR_PER_AGENT``   the same accelerated update rearranged so each agent
                      only reuses delayed copies of its own state and of the
                      aggregate v_i[k] = gamma * K_i Z[k] it already receives
                      from its neighbors

The accelerated matrix form and the per-agent form are algebraically
identical; both reduce to the standard law at beta = 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .graph import GraphSpec, PinnedSystem

__all__ = [
    "UpdateLaw",
    "SourceKind",
    "SourceProfile",
    "SimConfig",
    "Trajectory",
    "source_value",
    "step_standard",
    "step_accelerated",
    "step_dsr",
    "simulate",
    "laplacian_potential",
    "potential_gradient",
]


class UpdateLaw(enum.Enum):
    STANDARD = "standard"
    ACCELERATED = "accelerated"
    DSR_PER_AGENT = "dsr"


class SourceKind(enum.Enum):
    STEP = "step"
    RAMP = "ramp"


@dataclass(frozen=True)
class SourceProfile:
    """Time profile of the source signal Zs.

    STEP holds 0 until ``start_step`` and ``zd`` from then on. RAMP rises from
    0 to ``zd`` over ``ramp_duration`` seconds along (1 - cos(pi t / T_r))/2,
    i.e. with a half-sine acceleration, and holds ``zd`` afterwards.
    """

    kind: SourceKind = SourceKind.STEP
    zd: float = 1.0
    ramp_duration: float | None = None
    start_step: int = 1

    def __post_init__(self):
        if self.kind is SourceKind.RAMP:
            if self.ramp_duration is None or self.ramp_duration <= 0:
                raise ValueError("ramp profile needs ramp_duration > 0")


def source_value(profile: SourceProfile, k: int, dt: float) -> float:
    """Source sample Zs[k] at step k with update interval dt."""
    if k < 0:
        raise ValueError(f"step index must be >= 0, got {k}")
    if profile.kind is SourceKind.STEP:
        return profile.zd if k >= profile.start_step else 0.0
    t = k * dt
    if t <= 0.0:
        return 0.0
    if t >= profile.ramp_duration:
        return profile.zd
    return profile.zd * (1.0 - np.cos(np.pi * t / profile.ramp_duration)) / 2.0


@dataclass(frozen=True)
class SimConfig:
    """Gains, step size and horizon for one simulation run.

    ``momentum_scaled_by_gamma`` switches the ACCELERATED law's bare momentum
    term from beta*(Z[k]-Z[k-1]) to gamma*beta*(Z[k]-Z[k-1]); the default
    (off) is the canonical form. The per-agent DSR law always uses the
    canonical form.
    """

    gamma: float
    dt: float
    horizon: int
    beta: float = 0.0
    law: UpdateLaw = UpdateLaw.STANDARD
    momentum_scaled_by_gamma: bool = False
    initial_state: np.ndarray | None = None

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.horizon < 0:
            raise ValueError(f"horizon must be >= 0, got {self.horizon}")
        if self.initial_state is not None:
            z0 = np.asarray(self.initial_state, dtype=float)
            z0.setflags(write=False)
            object.__setattr__(self, "initial_state", z0)


@dataclass(frozen=True)
class Trajectory:
    """Recorded run: states Z[k] row per step, aligned source samples, config.

    When the run diverges the arrays stop at the last finite in-bounds state
    and ``diverged``/``diverged_at`` are set; no non-finite values are stored.
    ``network_signals`` holds the per-agent aggregates v[k] for DSR runs.
    """

    states: np.ndarray
    source: np.ndarray
    config: SimConfig
    profile: SourceProfile
    diverged: bool = False
    diverged_at: int | None = None
    network_signals: np.ndarray | None = None

    def __post_init__(self):
        for name in ("states", "source", "network_signals"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=float)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)

    @property
    def n_agents(self) -> int:
        return self.states.shape[1]

    @property
    def steps_recorded(self) -> int:
        """Number of recorded states minus one (the k of the last row)."""
        return self.states.shape[0] - 1

    @property
    def mean_state(self) -> np.ndarray:
        """Per-step average over agents."""
        return self.states.mean(axis=1)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.states.shape[0]) * self.config.dt


def step_standard(sys: PinnedSystem, cfg: SimConfig, z: np.ndarray, zs: float) -> np.ndarray:
    """One step of the standard consensus update."""
    return z - cfg.gamma * (sys.K @ z) + cfg.gamma * sys.B * zs


def step_accelerated(
    sys: PinnedSystem, cfg: SimConfig, z: np.ndarray, z_prev: np.ndarray, zs: float
) -> np.ndarray:
    """One step of the accelerated (momentum) update, matrix form."""
    dz = z - z_prev
    momentum = cfg.gamma * cfg.beta * dz if cfg.momentum_scaled_by_gamma else cfg.beta * dz
    return z - cfg.gamma * (sys.K @ (z + cfg.beta * dz)) + momentum + cfg.gamma * sys.B * zs


def step_dsr(
    sys: PinnedSystem,
    cfg: SimConfig,
    z: np.ndarray,
    z_prev: np.ndarray,
    v_prev: np.ndarray,
    zs: float,
) -> tuple[np.ndarray, np.ndarray]:
    """One step of the per-agent delayed-self-reinforcement update.

    v[k] = gamma * K @ z is the aggregate each agent already receives from the
    network; everything else is elementwise in the agent's own delayed values.
    Returns (next state, v[k] to store for the next step).
    """
    v = cfg.gamma * (sys.K @ z)
    z_next = z - (v + cfg.beta * (v - v_prev)) + cfg.beta * (z - z_prev) + cfg.gamma * sys.B * zs
    return z_next, v


def simulate(sys: PinnedSystem, cfg: SimConfig, profile: SourceProfile) -> Trajectory:
    """Run the configured law for ``cfg.horizon`` steps from the initial state.

    Divergence handling: when a candidate state exceeds
    1e6 * max(|zd|, 1) in any component (or goes non-finite), the run stops
    without recording it and the trajectory is flagged diverged; callers
    inspect the flag rather than catching an exception.
    """
    n = sys.n
    if cfg.initial_state is None:
        z = np.zeros(n)
    else:
        z = np.array(cfg.initial_state, dtype=float)
        if z.shape != (n,):
            raise ValueError(f"initial state has shape {z.shape}, expected ({n},)")
    cutoff = 1e6 * max(abs(profile.zd), 1.0)

    states = [z.copy()]
    sources = [source_value(profile, 0, cfg.dt)]
    signals = [] if cfg.law is UpdateLaw.DSR_PER_AGENT else None
    z_prev = z.copy()
    v_prev = cfg.gamma * (sys.K @ z)
    diverged = False
    diverged_at = None

    for k in range(cfg.horizon):
        zs = sources[-1]
        if cfg.law is UpdateLaw.STANDARD:
            z_next = step_standard(sys, cfg, z, zs)
        elif cfg.law is UpdateLaw.ACCELERATED:
            z_next = step_accelerated(sys, cfg, z, z_prev, zs)
        else:
            z_next, v = step_dsr(sys, cfg, z, z_prev, v_prev, zs)
        if not np.isfinite(z_next).all() or np.abs(z_next).max() > cutoff:
            diverged = True
            diverged_at = k + 1
            break
        if cfg.law is UpdateLaw.DSR_PER_AGENT:
            signals.append(v.copy())
            v_prev = v
        z_prev, z = z, z_next
        states.append(z.copy())
        sources.append(source_value(profile, k + 1, cfg.dt))

    return Trajectory(
        states=np.array(states),
        source=np.array(sources),
        config=replace(cfg),
        profile=profile,
        diverged=diverged,
        diverged_at=diverged_at,
        network_signals=np.array(signals) if signals else None,
    )


def laplacian_potential(g: GraphSpec, zhat: np.ndarray) -> float:
    """Disagreement energy 0.5 * sum_ij a_ij (zhat_j - zhat_i)^2 over the full network.

    Only meaningful for undirected weight patterns (a_ij == a_ji); directed
    input raises, since the gradient identity below does not hold there.
    ``zhat`` has one entry per node including the source (length n+1).
    """
    if not g.is_undirected():
        raise ValueError("the Laplacian potential is defined here only for undirected graphs")
    zhat = np.asarray(zhat, dtype=float)
    if zhat.shape != (g.node_count,):
        raise ValueError(f"state has shape {zhat.shape}, expected ({g.node_count},)")
    total = 0.0
    for j, i, w in g.edges:
        d = zhat[j] - zhat[i]
        total += w * d * d
    return 0.5 * total


def potential_gradient(g: GraphSpec, zhat: np.ndarray) -> np.ndarray:
    """Analytic gradient of the potential: 2 * L @ zhat (undirected graphs)."""
    if not g.is_undirected():
        raise ValueError("the potential gradient identity holds only for undirected graphs")
    zhat = np.asarray(zhat, dtype=float)
    n1 = g.node_count
    if zhat.shape != (n1,):
        raise ValueError(f"state has shape {zhat.shape}, expected ({n1},)")
    L = np.zeros((n1, n1))
    for j, i, w in g.edges:
        L[i, j] -= w
        L[i, i] += w
    return 2.0 * (L @ zhat)
