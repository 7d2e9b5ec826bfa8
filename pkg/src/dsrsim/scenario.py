"""Config-driven experiment runner.

A scenario file is INI-style: ``[graph]``, ``[sim]`` and ``[source]`` sections
plus one ``[run <name>]`` section per variant to simulate and compare. See the
README for the full grammar. Outputs per scenario: one trajectory CSV per run,
a metrics CSV, a spectral summary, and a comparison report; all files are
byte-reproducible for a given config.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import dynamics, graph, metrics, spectral
from .dynamics import SimConfig, SourceKind, SourceProfile, Trajectory, UpdateLaw
from .graph import GraphSpec
from .metrics import MetricsRecord

__all__ = [
    "ScenarioError",
    "RunSpec",
    "ScenarioConfig",
    "RunResult",
    "ScenarioResult",
    "bundled_scenarios",
    "resolve_scenario_path",
    "load_scenario",
    "run_scenario",
    "compare_report",
]


class ScenarioError(ValueError):
    """Unusable scenario configuration; message carries section/key context."""


def _fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double through text."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class RunSpec:
    name: str
    law: UpdateLaw
    beta: float


@dataclass(frozen=True)
class ScenarioConfig:
    graph: GraphSpec
    gamma_policy: str  # "fraction" | "explicit"
    gamma_value: float
    dt: float
    horizon: int
    band: float
    source: SourceProfile
    runs: tuple[RunSpec, ...]
    momentum_scaled_by_gamma: bool = False
    out_dir: str | None = None


@dataclass(frozen=True)
class RunResult:
    name: str
    law: UpdateLaw
    gamma: float
    beta: float
    record: MetricsRecord
    trajectory: Trajectory


@dataclass(frozen=True)
class ScenarioResult:
    out_dir: Path
    gamma: float
    gain_bound: float
    results: tuple[RunResult, ...]
    files: tuple[Path, ...]
    report: str


_GRAPH_KEYS = {"kind", "rows", "cols", "leader", "source_weight", "path"}
_SIM_KEYS = {"gamma_policy", "gamma", "dt", "horizon", "band", "momentum_scaled_by_gamma"}
_SOURCE_KEYS = {"kind", "zd", "ramp_duration", "start_step"}
_RUN_KEYS = {"law", "beta"}

_LAWS = {law.value: law for law in UpdateLaw}


def bundled_scenarios() -> list[str]:
    """Names of the scenario files shipped inside the package."""
    root = resources.files("dsrsim").joinpath("scenarios")
    return sorted(p.name[: -len(".cfg")] for p in root.iterdir() if p.name.endswith(".cfg"))


def resolve_scenario_path(name_or_path) -> Path:
    """Interpret an argument as a config path, falling back to bundled names."""
    p = Path(name_or_path)
    if p.exists():
        return p
    stem = p.name[: -len(".cfg")] if p.name.endswith(".cfg") else p.name
    bundled = resources.files("dsrsim").joinpath("scenarios", f"{stem}.cfg")
    if bundled.is_file():
        return Path(str(bundled))
    raise ScenarioError(
        f"no such config file {name_or_path!r} and no bundled scenario named {stem!r} "
        f"(bundled: {', '.join(bundled_scenarios())})"
    )


def _getfloat(section, key, err_ctx, *, required=True, default=None):
    if key not in section:
        if required:
            raise ScenarioError(f"{err_ctx}: missing key '{key}'")
        return default
    try:
        return float(section[key])
    except ValueError:
        raise ScenarioError(f"{err_ctx}: '{key}' must be a number, got {section[key]!r}") from None


def _getint(section, key, err_ctx, *, required=True, default=None):
    if key not in section:
        if required:
            raise ScenarioError(f"{err_ctx}: missing key '{key}'")
        return default
    try:
        return int(section[key])
    except ValueError:
        raise ScenarioError(f"{err_ctx}: '{key}' must be an integer, got {section[key]!r}") from None


def _getbool(section, key, err_ctx, *, default=False):
    if key not in section:
        return default
    raw = section[key].strip().lower()
    if raw in ("true", "yes", "on", "1"):
        return True
    if raw in ("false", "no", "off", "0"):
        return False
    raise ScenarioError(f"{err_ctx}: '{key}' must be a boolean, got {section[key]!r}")


def _check_keys(section, allowed, err_ctx):
    extra = set(section) - allowed
    if extra:
        raise ScenarioError(f"{err_ctx}: unknown key(s) {sorted(extra)}")


def _parse_graph(section, base_dir: Path) -> GraphSpec:
    _check_keys(section, _GRAPH_KEYS, "[graph]")
    kind = section.get("kind", "grid").strip().lower()
    if kind == "grid":
        rows = _getint(section, "rows", "[graph]")
        cols = _getint(section, "cols", "[graph]")
        weight = _getfloat(section, "source_weight", "[graph]", required=False, default=1.0)
        leader_raw = section.get("leader", "last").strip()
        if leader_raw == "last":
            leader = "last"
        elif "," in leader_raw:
            try:
                r, c = (int(t) for t in leader_raw.split(","))
            except ValueError:
                raise ScenarioError(f"[graph]: bad leader {leader_raw!r}") from None
            leader = (r, c)
        else:
            try:
                leader = int(leader_raw)
            except ValueError:
                raise ScenarioError(f"[graph]: bad leader {leader_raw!r}") from None
        try:
            return graph.grid_graph(rows, cols, leader=leader, source_weight=weight)
        except graph.GraphValidationError as exc:
            raise ScenarioError(f"[graph]: {exc}") from exc
    if kind == "file":
        if "path" not in section:
            raise ScenarioError("[graph]: kind=file requires 'path'")
        path = Path(section["path"])
        if not path.is_absolute():
            path = base_dir / path
        try:
            return graph.load_graph(path)
        except (OSError, graph.GraphValidationError) as exc:
            raise ScenarioError(f"[graph]: cannot load {path}: {exc}") from exc
    raise ScenarioError(f"[graph]: kind must be 'grid' or 'file', got {kind!r}")


def _parse_source(section) -> SourceProfile:
    _check_keys(section, _SOURCE_KEYS, "[source]")
    kind_raw = section.get("kind", "step").strip().lower()
    try:
        kind = SourceKind(kind_raw)
    except ValueError:
        raise ScenarioError(f"[source]: kind must be 'step' or 'ramp', got {kind_raw!r}") from None
    zd = _getfloat(section, "zd", "[source]")
    if zd == 0:
        raise ScenarioError("[source]: zd must be nonzero (metrics are relative to it)")
    start_step = _getint(section, "start_step", "[source]", required=False, default=1)
    if start_step < 0:
        raise ScenarioError("[source]: start_step must be >= 0")
    ramp = _getfloat(section, "ramp_duration", "[source]", required=(kind is SourceKind.RAMP))
    try:
        return SourceProfile(kind=kind, zd=zd, ramp_duration=ramp, start_step=start_step)
    except ValueError as exc:
        raise ScenarioError(f"[source]: {exc}") from exc


def load_scenario(path) -> ScenarioConfig:
    """Parse and fully validate a scenario file (no simulation performed)."""
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ScenarioError(f"{path}: {exc}") from exc

    for required in ("graph", "sim", "source"):
        if required not in cp:
            raise ScenarioError(f"{path}: missing [{required}] section")

    g = _parse_graph(cp["graph"], path.parent)
    source = _parse_source(cp["source"])

    sim = cp["sim"]
    _check_keys(sim, _SIM_KEYS, "[sim]")
    policy = sim.get("gamma_policy", "").strip().lower()
    if policy not in ("fraction", "explicit"):
        raise ScenarioError(f"[sim]: gamma_policy must be 'fraction' or 'explicit', got {policy!r}")
    gamma_value = _getfloat(sim, "gamma", "[sim]")
    if policy == "fraction" and not (0 < gamma_value < 1):
        raise ScenarioError(f"[sim]: fraction-of-bound gamma must lie in (0, 1), got {gamma_value}")
    if policy == "explicit" and gamma_value <= 0:
        raise ScenarioError(f"[sim]: explicit gamma must be positive, got {gamma_value}")
    dt = _getfloat(sim, "dt", "[sim]")
    if dt <= 0:
        raise ScenarioError(f"[sim]: dt must be positive, got {dt}")
    horizon = _getint(sim, "horizon", "[sim]")
    if horizon < 1:
        raise ScenarioError(f"[sim]: horizon must be >= 1, got {horizon}")
    band = _getfloat(sim, "band", "[sim]", required=False, default=0.02)
    if not (0 < band < 1):
        raise ScenarioError(f"[sim]: band must lie in (0, 1), got {band}")
    scaled = _getbool(sim, "momentum_scaled_by_gamma", "[sim]")

    runs = []
    seen = set()
    for section_name in cp.sections():
        if section_name != "run" and not section_name.startswith("run "):
            continue
        name = section_name[len("run"):].strip()
        if not name:
            raise ScenarioError(f"run section needs a name: [run <name>], got [{section_name}]")
        if name in seen:
            raise ScenarioError(f"duplicate run name {name!r}")
        seen.add(name)
        section = cp[section_name]
        _check_keys(section, _RUN_KEYS, f"[{section_name}]")
        law_raw = section.get("law", "").strip().lower()
        if law_raw not in _LAWS:
            raise ScenarioError(
                f"[{section_name}]: law must be one of {sorted(_LAWS)}, got {law_raw!r}"
            )
        beta = _getfloat(section, "beta", f"[{section_name}]", required=False, default=0.0)
        if beta < 0:
            raise ScenarioError(f"[{section_name}]: beta must be >= 0, got {beta}")
        runs.append(RunSpec(name=name, law=_LAWS[law_raw], beta=beta))
    if not runs:
        raise ScenarioError(f"{path}: need at least one [run <name>] section")

    known = {"graph", "sim", "source", "output"}
    known |= {s for s in cp.sections() if s == "run" or s.startswith("run ")}
    unknown = set(cp.sections()) - known
    if unknown:
        raise ScenarioError(f"{path}: unknown section(s) {sorted(unknown)}")

    out_dir = cp["output"].get("dir") if "output" in cp else None

    return ScenarioConfig(
        graph=g,
        gamma_policy=policy,
        gamma_value=gamma_value,
        dt=dt,
        horizon=horizon,
        band=band,
        source=source,
        runs=tuple(runs),
        momentum_scaled_by_gamma=scaled,
        out_dir=out_dir,
    )


def _write_trajectory_csv(path: Path, traj: Trajectory) -> None:
    n = traj.n_agents
    buf = io.StringIO()
    buf.write("step,time," + "Zs," + ",".join(f"Z{i + 1}" for i in range(n)) + "\n")
    for k in range(traj.states.shape[0]):
        row = [str(k), _fmt(k * traj.config.dt), _fmt(traj.source[k])]
        row.extend(_fmt(v) for v in traj.states[k])
        buf.write(",".join(row) + "\n")
    path.write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def _metrics_row(r: RunResult) -> str:
    rec = r.record
    cells = [
        r.name,
        _fmt(r.gamma),
        _fmt(r.beta),
        "true" if rec.settled else "false",
        "" if rec.k_ts is None else str(rec.k_ts),
        "" if rec.t_s is None else _fmt(rec.t_s),
        "" if rec.diverged else _fmt(rec.delta),
        "" if rec.delta_star is None else _fmt(rec.delta_star),
        "true" if rec.diverged else "false",
    ]
    return ",".join(cells)


def _write_metrics_csv(path: Path, results) -> None:
    lines = ["run,gamma,beta,settled,k_Ts,T_s,delta,delta_star,diverged"]
    lines.extend(_metrics_row(r) for r in results)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_spectral_summary(path: Path, summary: spectral.SpectralSummary) -> None:
    lines = [f"n = {summary.eigenvalues.size}", "eigenvalues (re, im), sorted:"]
    lines.extend(f"  {_fmt(lam.real)} {_fmt(lam.imag)}" for lam in summary.eigenvalues)
    lines.append(f"gain_bound = {_fmt(summary.gain_bound)}")
    if summary.gamma is not None:
        lines.append(f"gamma = {_fmt(summary.gamma)}")
        lines.append(f"perron_radius = {_fmt(summary.perron_radius)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def compare_report(results) -> str:
    """Aligned comparison table; adds ratio columns against the first run.

    A diverged run shows 'diverged' in place of its metrics.
    """
    results = list(results)
    if not results:
        raise ValueError("need at least one run result")
    headers = ["run", "gamma", "beta", "settled", "k_Ts", "T_s", "delta", "delta_star"]
    with_ratios = len(results) > 1
    if with_ratios:
        headers += ["Ts_ratio", "dstar_ratio"]
    base = results[0].record

    def ratio(cur, ref):
        if cur is None or ref in (None, 0):
            return "-"
        return f"{cur / ref:.4f}"

    rows = []
    for idx, r in enumerate(results):
        rec = r.record
        if rec.diverged:
            cells = [r.name, f"{r.gamma:.6g}", f"{r.beta:.6g}", "diverged", "-", "-", "-", "-"]
        else:
            cells = [
                r.name,
                f"{r.gamma:.6g}",
                f"{r.beta:.6g}",
                "yes" if rec.settled else "no",
                "-" if rec.k_ts is None else str(rec.k_ts),
                "-" if rec.t_s is None else f"{rec.t_s:.6g}",
                f"{rec.delta:.6g}",
                "-" if rec.delta_star is None else f"{rec.delta_star:.6g}",
            ]
        if with_ratios:
            if idx == 0 or rec.diverged or base.diverged:
                cells += ["-", "-"]
            else:
                cells += [ratio(rec.t_s, base.t_s), ratio(rec.delta_star, base.delta_star)]
        rows.append(cells)

    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(headers)]
    fmt_row = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt_row(headers), fmt_row(["-" * w for w in widths])]
    lines.extend(fmt_row(row) for row in rows)
    return "\n".join(lines) + "\n"


def run_scenario(cfg: ScenarioConfig, out_dir=None, quiet: bool = False) -> ScenarioResult:
    """Simulate every configured run and emit trajectory/metrics/summary files.

    Divergence is data (flagged in metrics), not a failure; only invalid
    configuration or an unusable network raises.
    """
    sys = graph.build_pinned_system(cfg.graph)
    eigs = spectral.eigenvalues(sys.K)
    bound = spectral.gain_bound(eigs)
    gamma = cfg.gamma_value * bound if cfg.gamma_policy == "fraction" else cfg.gamma_value
    summary = spectral.summarize(sys.K, gamma=gamma)

    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir or "scenario_out")
    out.mkdir(parents=True, exist_ok=True)

    files = []
    spath = out / "spectral_summary.txt"
    _write_spectral_summary(spath, summary)
    files.append(spath)

    results = []
    for spec in cfg.runs:
        sim_cfg = SimConfig(
            gamma=gamma,
            dt=cfg.dt,
            horizon=cfg.horizon,
            beta=spec.beta,
            law=spec.law,
            momentum_scaled_by_gamma=cfg.momentum_scaled_by_gamma,
        )
        traj = dynamics.simulate(sys, sim_cfg, cfg.source)
        record = metrics.compute_metrics(traj, cfg.source.zd, band=cfg.band)
        results.append(
            RunResult(name=spec.name, law=spec.law, gamma=gamma, beta=spec.beta,
                      record=record, trajectory=traj)
        )
        tpath = out / f"trajectory_{spec.name}.csv"
        _write_trajectory_csv(tpath, traj)
        files.append(tpath)

    mpath = out / "metrics.csv"
    _write_metrics_csv(mpath, results)
    files.append(mpath)

    report = compare_report(results)
    rpath = out / "report.txt"
    rpath.write_text(report, encoding="utf-8", newline="\n")
    files.append(rpath)

    if not quiet:
        print(report, end="")

    return ScenarioResult(
        out_dir=out,
        gamma=gamma,
        gain_bound=bound,
        results=tuple(results),
        files=tuple(files),
        report=report,
    )
