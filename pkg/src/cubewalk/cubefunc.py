"""Boolean maps on the n-cube built by removing a directed Hamiltonian cycle.

Words are integers in ``[0, 2**n)``.  A component index ``i`` of a map
``f = (f_1, ..., f_n)`` counts from the most significant bit: component 1
is the bit of value ``2**(n-1)``.  (Transition sequences in
:mod:`cubewalk.graycode` number bits from the other end; the two
conventions never meet, since codes and cycles exchange plain integers.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .graycode import GrayCode


@dataclass(frozen=True)
class BooleanMap:
    """Image table of a map f: B^n -> B^n; entry x is the word f(x)."""

    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        size = 1 << self.n
        if len(self.images) != size:
            raise ValueError(f"need {size} images for n={self.n}, got {len(self.images)}")
        for x, y in enumerate(self.images):
            if not 0 <= y < size:
                raise ValueError(f"image {y} of {x} outside [0, {size})")

    def __call__(self, x: int) -> int:
        return self.images[x]


@dataclass(frozen=True)
class HamiltonianCycle:
    """Directed Hamiltonian cycle of the n-cube as a vertex sequence."""

    n: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        size = 1 << self.n
        if len(self.vertices) != size:
            raise ValueError(f"need {size} vertices, got {len(self.vertices)}")
        if len(set(self.vertices)) != size:
            raise ValueError("cycle revisits a vertex")
        for t in range(size):
            a = self.vertices[t]
            b = self.vertices[(t + 1) % size]
            if bin(a ^ b).count("1") != 1:
                raise ValueError(f"vertices {a} and {b} at position {t} are not cube-adjacent")


@dataclass(frozen=True)
class IterationGraph:
    """Arc slots x -> F_f(i, x) for every vertex x and component i.

    ``arcs[x]`` holds the n targets in component order (with multiplicity;
    self-loops stay in place).
    """

    n: int
    arcs: tuple[tuple[int, ...], ...]


def apply_component(f: BooleanMap, i: int, x: int) -> int:
    """Rewrite bit i of x (1 = most significant) with component i of f(x)."""
    if not 1 <= i <= f.n:
        raise ValueError(f"component index {i} outside [1, {f.n}]")
    mask = 1 << (f.n - i)
    return (x & ~mask) | (f.images[x] & mask)


def gray_to_cycle(code: GrayCode) -> HamiltonianCycle:
    return HamiltonianCycle(code.n, code.words)


def cycle_to_gray(cycle: HamiltonianCycle) -> GrayCode:
    return GrayCode(cycle.n, cycle.vertices)


def remove_cycle(cycle: HamiltonianCycle) -> BooleanMap:
    """Boolean map of the n-cube minus the cycle's traversal arcs.

    For each vertex the arc to its cycle successor becomes a self-loop
    (that component keeps its bit) and every other component negates its
    bit, so the remaining non-loop arcs are exactly the n-1 cube edges
    that were not removed.
    """
    size = 1 << cycle.n
    full = size - 1
    images = [0] * size
    for t, x in enumerate(cycle.vertices):
        succ = cycle.vertices[(t + 1) % size]
        images[x] = x ^ full ^ (x ^ succ)
    return BooleanMap(cycle.n, tuple(images))


class RemovedFactor(NamedTuple):
    """Cycle structure of the successor permutation recovered from a map."""

    cycles: tuple[tuple[int, ...], ...]

    @property
    def is_hamiltonian(self) -> bool:
        return len(self.cycles) == 1


def recover_removed_permutation(f: BooleanMap) -> RemovedFactor:
    """Invert :func:`remove_cycle`: recover which arcs were removed.

    Requires every vertex to keep exactly one component fixed and negate
    the rest; the kept components define a successor map which must be a
    permutation.  Its cycles are returned smallest-vertex-first, so a true
    Hamiltonian removal comes back as one cycle starting at vertex 0.
    """
    size = 1 << f.n
    full = size - 1
    succ = [0] * size
    indegree = [0] * size
    for x in range(size):
        kept = f.images[x] ^ x ^ full
        if kept == 0 or kept & (kept - 1):
            raise ValueError(
                f"vertex {x} does not keep exactly one component fixed "
                f"(image {f.images[x]})"
            )
        succ[x] = x ^ kept
        indegree[succ[x]] += 1
    for x in range(size):
        if indegree[x] != 1:
            raise ValueError(f"vertex {x} has {indegree[x]} removed arcs in, expected 1")
    seen = [False] * size
    cycles = []
    for start in range(size):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = succ[x]
        cycles.append(tuple(cyc))
    return RemovedFactor(tuple(cycles))


def build_iteration_graph(f: BooleanMap) -> IterationGraph:
    size = 1 << f.n
    arcs = tuple(
        tuple(apply_component(f, i, x) for i in range(1, f.n + 1)) for x in range(size)
    )
    return IterationGraph(f.n, arcs)


class Connectivity(NamedTuple):
    connected: bool
    witness: tuple[int, int] | None  # smallest (x, y) with y unreachable from x


def is_strongly_connected(g: IterationGraph) -> Connectivity:
    """Single-SCC test (iterative Tarjan) with a witness pair on failure."""
    size = 1 << g.n
    index = [-1] * size
    low = [0] * size
    on_stack = [False] * size
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(size):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for j in range(pi, g.n):
                u = g.arcs[v][j]
                if index[u] == -1:
                    work.append((v, j + 1))
                    work.append((u, 0))
                    advanced = True
                    break
                if on_stack[u]:
                    low[v] = min(low[v], index[u])
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp.append(u)
                    if u == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    if len(components) == 1:
        return Connectivity(True, None)
    return Connectivity(False, _unreachable_witness(g))


def _unreachable_witness(g: IterationGraph) -> tuple[int, int]:
    size = 1 << g.n
    for x in range(size):
        reach = {x}
        frontier = [x]
        while frontier:
            v = frontier.pop()
            for u in g.arcs[v]:
                if u not in reach:
                    reach.add(u)
                    frontier.append(u)
        if len(reach) != size:
            y = min(set(range(size)) - reach)
            return (x, y)
    raise AssertionError("no witness in a disconnected graph")


def parse_function_table(text: str) -> BooleanMap:
    """Parse '[v0,v1,...]' into a map; n is inferred from the length."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"expected a bracketed list, got {text!r}")
    try:
        images = tuple(int(tok) for tok in s[1:-1].split(","))
    except ValueError as exc:
        raise ValueError(f"malformed function table {text!r}") from exc
    size = len(images)
    if size < 2 or size & (size - 1):
        raise ValueError(f"table length {size} is not a power of two >= 2")
    return BooleanMap(size.bit_length() - 1, images)


def format_function_table(f: BooleanMap) -> str:
    return "[" + ",".join(str(y) for y in f.images) + "]"
