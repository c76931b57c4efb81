"""Fundamental-cell model of a Z^d-periodic graph.

A periodic graph is stored through its quotient by the lattice: a finite
list of vertices and a list of unoriented edges ``(j, k, tau)`` meaning the
edge joining vertex ``j`` of the reference cell to vertex ``k`` of the cell
shifted by the integer vector ``tau``.  Edges with ``tau != 0`` are bridges.

Graph file format (UTF-8, line based, ``#`` starts a comment)::

    dim 2
    vertex a
    vertex b
    edge a b 0 0
    edge b a 1 0
    edge b a 0 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "GraphSyntaxError",
    "EdgeSpec",
    "FundamentalGraph",
    "Classification",
    "parse_graph",
    "serialize_graph",
    "load_graph",
    "compute_beta",
    "check_connected",
    "is_connected",
    "is_loop_graph",
    "find_precise_point",
    "is_bipartite_periodic",
    "is_bipartite_fundamental",
    "classify",
    "change_basis",
    "builtin",
    "builtin_names",
]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_INT_RE = re.compile(r"[+-]?\d+\Z")


class GraphError(ValueError):
    """Invalid graph data or a violated precondition."""


class GraphSyntaxError(GraphError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _canonical_edge(j: int, k: int, tau: tuple[int, ...]) -> tuple[int, int, tuple[int, ...]]:
    if j > k:
        return k, j, tuple(-t for t in tau)
    if j == k:
        neg = tuple(-t for t in tau)
        if tau < neg:
            return j, k, neg
    return j, k, tau


@dataclass(frozen=True, order=True)
class EdgeSpec:
    """Unoriented edge ``(v_j, v_k + tau)``; stored canonically."""

    j: int
    k: int
    tau: tuple[int, ...]

    @classmethod
    def make(cls, j: int, k: int, tau: Sequence[int]) -> "EdgeSpec":
        return cls(*_canonical_edge(int(j), int(k), tuple(int(t) for t in tau)))

    @property
    def is_bridge(self) -> bool:
        return any(self.tau)

    @property
    def is_loop(self) -> bool:
        return self.j == self.k


@dataclass(frozen=True)
class FundamentalGraph:
    dim: int
    vertices: tuple[str, ...]
    edges: tuple[EdgeSpec, ...]
    degrees: tuple[int, ...] = field(init=False, compare=False)
    bridge_degrees: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise GraphError("dim must be >= 1")
        if len(self.vertices) < 1:
            raise GraphError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex name")
        nu = len(self.vertices)
        deg = [0] * nu
        bdeg = [0] * nu
        for e in self.edges:
            if not (0 <= e.j < nu and 0 <= e.k < nu):
                raise GraphError(f"edge endpoint out of range: {e}")
            if len(e.tau) != self.dim:
                raise GraphError(f"shift {e.tau} does not have length {self.dim}")
            deg[e.j] += 1
            deg[e.k] += 1
            if e.is_bridge:
                bdeg[e.j] += 1
                bdeg[e.k] += 1
        for name, kappa in zip(self.vertices, deg):
            if kappa == 0:
                raise GraphError(f"isolated vertex {name!r}")
        object.__setattr__(self, "degrees", tuple(deg))
        object.__setattr__(self, "bridge_degrees", tuple(bdeg))

    @classmethod
    def build(cls, dim: int, vertices: Sequence[str],
              edges: Sequence[tuple[str, str, Sequence[int]]]) -> "FundamentalGraph":
        """Build a canonical graph from vertex names and ``(u, v, tau)`` triples."""
        names = sorted(vertices)
        index = {name: i for i, name in enumerate(names)}
        specs = []
        for u, v, tau in edges:
            if u not in index or v not in index:
                missing = u if u not in index else v
                raise GraphError(f"undeclared vertex {missing}")
            specs.append(EdgeSpec.make(index[u], index[v], tau))
        return cls(dim, tuple(names), tuple(sorted(specs)))

    @property
    def nu(self) -> int:
        return len(self.vertices)

    @property
    def bridges(self) -> tuple[EdgeSpec, ...]:
        return tuple(e for e in self.edges if e.is_bridge)

    def shifts(self) -> np.ndarray:
        """Integer array of shape (n_edges, dim)."""
        return np.array([e.tau for e in self.edges], dtype=int).reshape(len(self.edges), self.dim)


@dataclass(frozen=True)
class Classification:
    is_loop_graph: bool
    precise_point: Optional[tuple[float, ...]]
    gamma_bipartite: bool
    gamma_f_bipartite: bool
    beta: Fraction

    @property
    def beta_value(self) -> float:
        return float(self.beta)


# --------------------------------------------------------------------------
# parsing / serialization
# --------------------------------------------------------------------------

def parse_graph(text: str) -> FundamentalGraph:
    """Parse the line-based graph format into a canonical FundamentalGraph."""
    dim = None
    vertices: list[str] = []
    edges: list[tuple[str, str, tuple[int, ...]]] = []
    seen_edge = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = []
        for m in re.finditer(r"\S+", line):
            tokens.append((m.group(), m.start() + 1))
        keyword, col = tokens[0]
        if dim is None:
            if keyword != "dim":
                raise GraphSyntaxError("expected 'dim <d>' as the first statement", lineno, col)
            if len(tokens) != 2 or not _INT_RE.match(tokens[1][0]) or int(tokens[1][0]) < 1:
                c = tokens[1][1] if len(tokens) > 1 else col + len(keyword)
                raise GraphSyntaxError("dim must be a single positive integer", lineno, c)
            dim = int(tokens[1][0])
            continue
        if keyword == "vertex":
            if seen_edge:
                raise GraphSyntaxError("vertex declared after an edge", lineno, col)
            if len(tokens) != 2:
                raise GraphSyntaxError("expected 'vertex <name>'", lineno, col)
            name, ncol = tokens[1]
            if not _NAME_RE.match(name):
                raise GraphSyntaxError(f"invalid vertex name {name!r}", lineno, ncol)
            if name in vertices:
                raise GraphSyntaxError(f"duplicate vertex name {name!r}", lineno, ncol)
            vertices.append(name)
        elif keyword == "edge":
            seen_edge = True
            if len(tokens) < 3:
                raise GraphSyntaxError("expected 'edge <u> <v> <t1> ... <td>'", lineno, col)
            for name, ncol in tokens[1:3]:
                if name not in vertices:
                    raise GraphSyntaxError(f"undeclared vertex {name}", lineno, ncol)
            shift = tokens[3:]
            if len(shift) != dim:
                c = shift[0][1] if shift else tokens[2][1]
                raise GraphSyntaxError(
                    f"shift has {len(shift)} components, expected {dim}", lineno, c)
            for tok, tcol in shift:
                if not _INT_RE.match(tok):
                    raise GraphSyntaxError(f"shift component {tok!r} is not an integer", lineno, tcol)
            edges.append((tokens[1][0], tokens[2][0], tuple(int(t) for t, _ in shift)))
        elif keyword == "dim":
            raise GraphSyntaxError("dim declared twice", lineno, col)
        else:
            raise GraphSyntaxError(f"unknown statement {keyword!r}", lineno, col)
    if dim is None:
        raise GraphSyntaxError("empty graph file", 1, 1)
    if not vertices:
        raise GraphSyntaxError("no vertices declared", 1, 1)
    return FundamentalGraph.build(dim, vertices, edges)


def serialize_graph(g: FundamentalGraph) -> str:
    lines = [f"dim {g.dim}"]
    lines += [f"vertex {v}" for v in g.vertices]
    for e in g.edges:
        shift = " ".join(str(t) for t in e.tau)
        lines.append(f"edge {g.vertices[e.j]} {g.vertices[e.k]} {shift}")
    return "\n".join(lines) + "\n"


def load_graph(path) -> FundamentalGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# --------------------------------------------------------------------------
# bridges
# --------------------------------------------------------------------------

def compute_beta(g: FundamentalGraph) -> Fraction:
    """Sum over vertices of (bridge degree / degree), as an exact fraction."""
    return sum((Fraction(b, k) for b, k in zip(g.bridge_degrees, g.degrees)), Fraction(0))


# --------------------------------------------------------------------------
# connectivity
# --------------------------------------------------------------------------

def _integer_row_echelon(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-reduce an integer matrix with unimodular operations (Hermite style)."""
    rows = [list(r) for r in rows if any(r)]
    echelon = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        # Euclid on column `col` until a single nonzero pivot remains.
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            for r in live[1:]:
                q = r[col] // pivot[col]
                for c in range(ncols):
                    r[c] -= q * pivot[c]
            live = [r for r in live if r[col] != 0]
        pivot = live[0]
        if pivot[col] < 0:
            pivot[:] = [-x for x in pivot]
        echelon.append(pivot)
        rows = [r for r in rows if r is not pivot and any(r)]
        col += 1
    return echelon


def _lattice_index(vectors: list[list[int]], dim: int) -> int:
    """Index of the sublattice spanned by `vectors` in Z^dim (0 if not full rank)."""
    echelon = _integer_row_echelon(vectors, dim)
    if len(echelon) < dim:
        return 0
    index = 1
    for i, row in enumerate(echelon):
        if row[i] == 0:
            return 0
        index *= row[i]
    return abs(index)


def _spanning_potentials(g: FundamentalGraph):
    """BFS over the quotient graph.  Returns (potentials, visited, non-tree edges)."""
    nu = g.nu
    adjacency: list[list[tuple[int, int, int]]] = [[] for _ in range(nu)]
    for idx, e in enumerate(g.edges):
        adjacency[e.j].append((idx, e.k, 1))
        if e.j != e.k:
            adjacency[e.k].append((idx, e.j, -1))
    pot: list[Optional[np.ndarray]] = [None] * nu
    pot[0] = np.zeros(g.dim, dtype=int)
    tree = set()
    queue = [0]
    while queue:
        v = queue.pop(0)
        for idx, w, sign in adjacency[v]:
            if pot[w] is None:
                tau = np.array(g.edges[idx].tau, dtype=int)
                pot[w] = pot[v] + sign * tau
                tree.add(idx)
                queue.append(w)
    return pot, tree


def check_connected(g: FundamentalGraph) -> None:
    """Raise GraphError unless the periodic graph is connected."""
    pot, tree = _spanning_potentials(g)
    if any(p is None for p in pot):
        raise GraphError("fundamental graph disconnected")
    cycles = []
    for idx, e in enumerate(g.edges):
        if idx in tree:
            continue
        vec = np.array(e.tau, dtype=int) + pot[e.j] - pot[e.k]
        cycles.append([int(x) for x in vec])
    index = _lattice_index(cycles, g.dim)
    if index != 1:
        detail = "rank deficient" if index == 0 else f"index {index}"
        raise GraphError(
            f"periodic graph disconnected (cycle vectors generate a proper sublattice, {detail})")


def is_connected(g: FundamentalGraph) -> bool:
    try:
        check_connected(g)
    except GraphError:
        return False
    return True


# --------------------------------------------------------------------------
# GF(2) linear algebra, equations as (bitmask, rhs)
# --------------------------------------------------------------------------

def _solve_gf2(equations: list[tuple[int, int]], nvars: int) -> Optional[list[int]]:
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in equations:
        for bit, (pmask, prhs) in pivots.items():
            if mask >> bit & 1:
                mask ^= pmask
                rhs ^= prhs
        if mask == 0:
            if rhs:
                return None
            continue
        bit = mask.bit_length() - 1
        for other, (pmask, prhs) in list(pivots.items()):
            if pmask >> bit & 1:
                pivots[other] = (pmask ^ mask, prhs ^ rhs)
        pivots[bit] = (mask, rhs)
    solution = [0] * nvars
    for bit, (mask, rhs) in pivots.items():
        # free variables are zero, pivots are fully reduced
        solution[bit] = rhs
    return solution


def is_loop_graph(g: FundamentalGraph) -> bool:
    return all(e.j == e.k for e in g.bridges)


def find_precise_point(g: FundamentalGraph) -> Optional[tuple[float, ...]]:
    """Search {0, pi}^d for a point where every bridge phase equals pi mod 2pi.

    Returns None when no such point exists in {0, pi}^d; this does not rule
    out a precise point elsewhere on the torus.
    """
    if not is_loop_graph(g):
        raise GraphError("precise points are defined for loop graphs only")
    shifts = {tuple(abs(t) % 2 for t in e.tau) for e in g.bridges}
    equations = []
    for parity in shifts:
        mask = sum(1 << i for i, p in enumerate(parity) if p)
        equations.append((mask, 1))
    x = _solve_gf2(equations, g.dim)
    if x is None:
        return None
    return tuple(np.pi * xi for xi in x)


def periodic_two_coloring(g: FundamentalGraph) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Witness ``(c, w)`` with c_j + c_k + <w, tau> = 1 mod 2 on every edge, or None."""
    nu = g.nu
    equations = []
    for e in g.edges:
        mask = (1 << e.j) ^ (1 << e.k)
        for i, t in enumerate(e.tau):
            if t % 2:
                mask ^= 1 << (nu + i)
        equations.append((mask, 1))
    sol = _solve_gf2(equations, nu + g.dim)
    if sol is None:
        return None
    return tuple(sol[:nu]), tuple(sol[nu:])


def is_bipartite_periodic(g: FundamentalGraph) -> bool:
    return periodic_two_coloring(g) is not None


def is_bipartite_fundamental(g: FundamentalGraph) -> bool:
    if any(e.j == e.k for e in g.edges):
        return False
    color = [-1] * g.nu
    neighbours: list[list[int]] = [[] for _ in range(g.nu)]
    for e in g.edges:
        neighbours[e.j].append(e.k)
        neighbours[e.k].append(e.j)
    for start in range(g.nu):
        if color[start] >= 0:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for w in neighbours[v]:
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def classify(g: FundamentalGraph) -> Classification:
    loop = is_loop_graph(g)
    return Classification(
        is_loop_graph=loop,
        precise_point=find_precise_point(g) if loop else None,
        gamma_bipartite=is_bipartite_periodic(g),
        gamma_f_bipartite=is_bipartite_fundamental(g),
        beta=compute_beta(g),
    )


def change_basis(g: FundamentalGraph, unimodular) -> FundamentalGraph:
    """Re-express all shift vectors in a new lattice basis, tau -> U tau."""
    u = np.asarray(unimodular, dtype=int)
    if u.shape != (g.dim, g.dim) or round(abs(np.linalg.det(u))) != 1:
        raise GraphError("change of basis must be a unimodular integer matrix")
    specs = [EdgeSpec.make(e.j, e.k, u @ np.array(e.tau, dtype=int)) for e in g.edges]
    return FundamentalGraph(g.dim, g.vertices, tuple(sorted(specs)))


# --------------------------------------------------------------------------
# builtin corpus
# --------------------------------------------------------------------------

def _lattice_text(d: int) -> str:
    lines = [f"dim {d}", "vertex a"]
    for i in range(d):
        lines.append("edge a a " + " ".join("1" if s == i else "0" for s in range(d)))
    return "\n".join(lines)


_BUILTINS = {
    "z1_lattice": _lattice_text(1),
    "z2_lattice": _lattice_text(2),
    "z3_lattice": _lattice_text(3),
    "hexagonal": """
dim 2
vertex a
vertex b
edge a b 0 0
edge b a 1 0
edge b a 0 1
""",
    "triangular": """
dim 2
vertex a
edge a a 1 0
edge a a 0 1
edge a a 1 1
""",
    "z_pendant": """
dim 1
vertex a
vertex b
edge a b 0
edge a a 1
""",
    "z_two_pendants": """
dim 1
vertex a
vertex b
vertex c
edge a b 0
edge a c 0
edge a a 1
""",
    "c4_pendant_chain": """
dim 1
vertex v1
vertex v2
vertex v3
vertex v4
vertex v5
edge v1 v2 0
edge v2 v3 0
edge v3 v4 0
edge v4 v1 0
edge v2 v5 0
edge v2 v1 1
""",
}

_ZD_RE = re.compile(r"zd_lattice\((\d+)\)\Z")


def builtin_names() -> list[str]:
    return list(_BUILTINS)


def builtin(name: str) -> FundamentalGraph:
    """Return one of the reference graphs by name (see ``builtin_names()``)."""
    m = _ZD_RE.match(name)
    if m:
        d = int(m.group(1))
        if not 1 <= d <= 3:
            raise GraphError(f"zd_lattice supports d = 1..3, got {d}")
        name = f"z{d}_lattice"
    try:
        return parse_graph(_BUILTINS[name])
    except KeyError:
        raise GraphError(f"unknown builtin graph {name!r}") from None


def lattice_points(n: int, dim: int):
    """All integer vectors in {0..n-1}^dim, in lexicographic order."""
    return product(range(n), repeat=dim)
