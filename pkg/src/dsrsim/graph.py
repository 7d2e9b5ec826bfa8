"""Network construction: weighted digraphs, Laplacians, and the pinned system.

Agents are indexed 0..n-1; the virtual source node is always the last index, n.
An edge (j, i, w) means agent i receives information from node j with weight w,
so w lands in row i of the Laplacian. On-disk edge lists use 1-based agent ids
and the reserved token ``source`` (see :func:`load_graph`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "GraphValidationError",
    "GraphSpec",
    "PinnedSystem",
    "grid_graph",
    "chain_graph",
    "grid_positions",
    "build_pinned_system",
    "load_graph",
    "save_graph",
]


class GraphValidationError(ValueError):
    """Invalid network structure or unparseable edge-list input.

    Attributes
    ----------
    line : int or None
        1-based line number for file parse errors.
    unreachable : tuple of int
        0-based agent indices with no directed path from the source, when
        that is the cause (messages display them 1-based, matching the
        file format and Z1..Zn column labels).
    """

    def __init__(self, message, line=None, unreachable=()):
        super().__init__(message)
        self.line = line
        self.unreachable = tuple(unreachable)


@dataclass(frozen=True)
class GraphSpec:
    """Immutable weighted digraph of ``n_agents`` agents plus one source node.

    Edges are (from_node, to_node, weight) triples; ``source_index`` may
    appear on either end. Local invariants (positive weights, no self-edges,
    no duplicate ordered pairs) are enforced at construction; source
    reachability is checked where it matters, via :func:`build_pinned_system`
    or :meth:`unreachable_agents`.
    """

    n_agents: int
    edges: tuple[tuple[int, int, float], ...]
    agent_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n_agents < 1:
            raise GraphValidationError("need at least one non-source agent")
        object.__setattr__(self, "edges", tuple((int(a), int(b), float(w)) for a, b, w in self.edges))
        if self.agent_labels is not None:
            labels = tuple(str(s) for s in self.agent_labels)
            if len(labels) != self.n_agents:
                raise GraphValidationError(
                    f"got {len(labels)} agent labels for {self.n_agents} agents"
                )
            object.__setattr__(self, "agent_labels", labels)
        seen = set()
        for a, b, w in self.edges:
            if not (0 <= a <= self.n_agents and 0 <= b <= self.n_agents):
                raise GraphValidationError(f"edge ({a}, {b}) references a node outside 0..{self.n_agents}")
            if a == b:
                raise GraphValidationError(f"self-edge on node {a}")
            if w <= 0 or not np.isfinite(w):
                raise GraphValidationError(f"edge ({a}, {b}) has nonpositive or non-finite weight {w}")
            if (a, b) in seen:
                raise GraphValidationError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))

    @property
    def node_count(self) -> int:
        return self.n_agents + 1

    @property
    def source_index(self) -> int:
        return self.n_agents

    def neighbors_in(self, i: int) -> list[tuple[int, float]]:
        """Nodes j feeding node i, as (j, weight) pairs."""
        return [(a, w) for a, b, w in self.edges if b == i]

    def weight_matrix(self) -> np.ndarray:
        """Dense (n+1, n+1) matrix A with A[i, j] = weight of edge j -> i."""
        m = self.node_count
        a = np.zeros((m, m))
        for j, i, w in self.edges:
            a[i, j] = w
        return a

    def is_undirected(self, rtol: float = 1e-12) -> bool:
        """True when every edge has a reciprocal of equal weight."""
        a = self.weight_matrix()
        return bool(np.allclose(a, a.T, rtol=rtol, atol=0.0))

    def unreachable_agents(self) -> list[int]:
        """Agents with no directed path from the source (empty list = connected)."""
        out: dict[int, list[int]] = {v: [] for v in range(self.node_count)}
        for a, b, _ in self.edges:
            out[a].append(b)
        seen = {self.source_index}
        stack = [self.source_index]
        while stack:
            for nxt in out[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return [i for i in range(self.n_agents) if i not in seen]


@dataclass(frozen=True)
class PinnedSystem:
    """Dense matrices governing the non-source dynamics.

    ``L`` is the full (n+1, n+1) graph Laplacian; ``K`` is L with the source
    row and column removed; ``B[i]`` is the weight of the direct source edge
    into agent i. Row sums of L vanish, hence K @ ones(n) == B.
    """

    n: int
    K: np.ndarray
    B: np.ndarray
    L: np.ndarray

    def __post_init__(self):
        for name in ("K", "B", "L"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _full_laplacian(g: GraphSpec) -> np.ndarray:
    m = g.node_count
    L = np.zeros((m, m))
    for j, i, w in g.edges:
        L[i, j] -= w
        L[i, i] += w
    return L


def build_pinned_system(g: GraphSpec) -> PinnedSystem:
    """Assemble L, and extract the pinned Laplacian K and source vector B.

    Raises
    ------
    GraphValidationError
        If some agent has no directed path from the source (K would be
        singular); the error lists the unreachable agent indices.
    """
    missing = g.unreachable_agents()
    if missing:
        raise GraphValidationError(
            f"no directed path from the source to agents {[i + 1 for i in missing]}; "
            "the pinned Laplacian would be singular",
            unreachable=missing,
        )
    L = _full_laplacian(g)
    n = g.n_agents
    K = L[:n, :n].copy()
    B = -L[:n, n].copy()
    return PinnedSystem(n=n, K=K, B=B, L=L)


def grid_graph(rows: int, cols: int, leader="last", source_weight: float = 1.0) -> GraphSpec:
    """Agents on a rows x cols grid, 4-neighbor bidirectional unit-weight edges.

    The source feeds exactly one agent (the leader) with ``source_weight``.
    ``leader`` is an agent index (row-major, 0-based), a (row, col) pair, or
    the string ``"last"``.
    """
    if rows < 1 or cols < 1:
        raise GraphValidationError("grid needs rows >= 1 and cols >= 1")
    if source_weight <= 0:
        raise GraphValidationError(f"source edge weight must be positive, got {source_weight}")
    n = rows * cols
    if leader == "last":
        lead = n - 1
    elif isinstance(leader, tuple):
        r, c = leader
        if not (0 <= r < rows and 0 <= c < cols):
            raise GraphValidationError(f"leader position {leader} outside the {rows}x{cols} grid")
        lead = r * cols + c
    else:
        lead = int(leader)
        if not (0 <= lead < n):
            raise GraphValidationError(f"leader index {lead} outside 0..{n - 1}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                j = i + 1
                edges.append((i, j, 1.0))
                edges.append((j, i, 1.0))
            if r + 1 < rows:
                j = i + cols
                edges.append((i, j, 1.0))
                edges.append((j, i, 1.0))
    edges.append((n, lead, float(source_weight)))
    return GraphSpec(n_agents=n, edges=tuple(edges))


def chain_graph(n: int, leader="last", source_weight: float = 1.0) -> GraphSpec:
    """Bidirectional chain of n agents; thin wrapper over :func:`grid_graph`."""
    return grid_graph(1, n, leader=leader, source_weight=source_weight)


def grid_positions(rows: int, cols: int, spacing: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Row-major (x, y) coordinates for grid agents; y grows downward by row."""
    xs = np.array([c * spacing for _ in range(rows) for c in range(cols)], dtype=float)
    ys = np.array([r * spacing for r in range(rows) for _ in range(cols)], dtype=float)
    return xs, ys


_SOURCE_TOKEN = "source"


def _parse_node(token: str, n: int, lineno: int) -> int:
    if token == _SOURCE_TOKEN:
        return n
    try:
        v = int(token)
    except ValueError:
        raise GraphValidationError(
            f"line {lineno}: expected an agent id or '{_SOURCE_TOKEN}', got {token!r}", line=lineno
        ) from None
    if not (1 <= v <= n):
        raise GraphValidationError(f"line {lineno}: agent id {v} outside 1..{n}", line=lineno)
    return v - 1


def load_graph(path) -> GraphSpec:
    """Read a graph from the edge-list text format.

    Format: a header line ``nodes=<n>`` (n = number of non-source agents),
    then one edge per line ``<from> <to> <weight>``; agent ids are 1-based and
    ``source`` names the source node; ``#`` starts a comment. The loaded graph
    is validated, including source reachability.
    """
    text = Path(path).read_text(encoding="utf-8")
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("nodes="):
                raise GraphValidationError(f"line {lineno}: expected header 'nodes=<n>'", line=lineno)
            try:
                n = int(line[len("nodes="):])
            except ValueError:
                raise GraphValidationError(f"line {lineno}: bad node count {line!r}", line=lineno) from None
            if n < 1:
                raise GraphValidationError(f"line {lineno}: need at least one agent", line=lineno)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphValidationError(
                f"line {lineno}: expected '<from> <to> <weight>', got {raw!r}", line=lineno
            )
        a = _parse_node(parts[0], n, lineno)
        b = _parse_node(parts[1], n, lineno)
        try:
            w = float(parts[2])
        except ValueError:
            raise GraphValidationError(f"line {lineno}: bad weight {parts[2]!r}", line=lineno) from None
        if w <= 0 or not np.isfinite(w):
            raise GraphValidationError(f"line {lineno}: weight must be positive, got {w}", line=lineno)
        if a == b:
            raise GraphValidationError(f"line {lineno}: self-edge on {parts[0]}", line=lineno)
        if any(a == ea and b == eb for ea, eb, _ in edges):
            raise GraphValidationError(f"line {lineno}: duplicate edge {parts[0]} -> {parts[1]}", line=lineno)
        edges.append((a, b, w))
    if n is None:
        raise GraphValidationError("empty file: missing 'nodes=<n>' header")
    g = GraphSpec(n_agents=n, edges=tuple(edges))
    missing = g.unreachable_agents()
    if missing:
        raise GraphValidationError(
            f"no directed path from the source to agents {[i + 1 for i in missing]}",
            unreachable=missing,
        )
    return g


def _node_token(v: int, n: int) -> str:
    return _SOURCE_TOKEN if v == n else str(v + 1)


def save_graph(g: GraphSpec, path) -> None:
    """Write the edge-list text format read back by :func:`load_graph`."""
    n = g.n_agents
    lines = [f"nodes={n}"]
    for a, b, w in g.edges:
        lines.append(f"{_node_token(a, n)} {_node_token(b, n)} {format(w, '.17g')}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
