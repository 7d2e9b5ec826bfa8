# Delayed self reinforcement vs the standard update law
#
# Same network, same gain, same ramped source: the only change is that each
# agent additionally reuses a one-step-delayed copy of its own state and of
# the aggregate it already receives from its neighbors (momentum weight
# beta). No new links, no extra communication — yet the transition is about
# twice as fast and the agents stay far closer together on the way.

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from dsrsim import (
    SimConfig,
    SourceKind,
    SourceProfile,
    UpdateLaw,
    build_pinned_system,
    compute_metrics,
    eigenvalues,
    gain_bound,
    grid_graph,
    simulate,
)

ZD = 0.02
DT = 7.5131e-4
BETA = 0.95

sys = build_pinned_system(grid_graph(5, 5, leader="last"))
gamma = gain_bound(eigenvalues(sys.K)) / 2
profile = SourceProfile(kind=SourceKind.RAMP, zd=ZD, ramp_duration=0.5)

runs = {}
for label, law, beta in [
    ("standard", UpdateLaw.STANDARD, 0.0),
    ("DSR (beta=0.95)", UpdateLaw.DSR_PER_AGENT, BETA),
]:
    cfg = SimConfig(gamma=gamma, dt=DT, horizon=4000, beta=beta, law=law)
    traj = simulate(sys, cfg, profile)
    rec = compute_metrics(traj, ZD, band=0.02)
    runs[label] = (traj, rec)
    print(f"{label:16s}: T_s = {rec.t_s:.4f} s   delta = {rec.delta:.4f}   "
          f"delta* = {rec.delta_star:.4f}")

std_rec = runs["standard"][1]
dsr_rec = runs["DSR (beta=0.95)"][1]
print(f"\nsettling-time ratio: {dsr_rec.t_s / std_rec.t_s:.2f}")
print(f"normalized-deviation improvement: {std_rec.delta_star / dsr_rec.delta_star:.1f}x")

fig, axes = plt.subplots(1, 2, figsize=(12, 4.5), sharey=True)
for ax, (label, (traj, rec)) in zip(axes, runs.items()):
    for i in range(traj.n_agents):
        ax.plot(traj.times, traj.states[:, i], lw=0.7, alpha=0.6)
    ax.plot(traj.times, traj.source, "k--", lw=1.4, label="source")
    ax.axvline(rec.t_s, color="tab:red", ls=":", lw=1.2, label=f"$T_s$ = {rec.t_s:.3f} s")
    ax.set_title(label)
    ax.set_xlabel("time [s]")
    ax.legend(loc="lower right")
axes[0].set_ylabel("agent state $Z_i$")
fig.suptitle("Momentum from delayed self reinforcement: faster and tighter transitions")
fig.tight_layout()
fig.savefig("accelerated_vs_standard.png", dpi=150)
print("wrote accelerated_vs_standard.png")
