"""Markov matrices of iteration graphs, exact stochasticity checks, mixing times.

Matrix entries are multiples of 1/n, so exact arithmetic works on integer
numerators with the common denominator n.  Powering for mixing times runs
in double precision, cross-checked against the exact matrix at the
returned step for small state spaces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cubefunc import IterationGraph


@dataclass(frozen=True)
class MarkovMatrix:
    """Row-stochastic matrix with entries k/n, stored as integer numerators."""

    n: int  # bit count == common denominator
    numerators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        size = len(self.numerators)
        for x, row in enumerate(self.numerators):
            if len(row) != size:
                raise ValueError(f"row {x} has length {len(row)}, expected {size}")
            if any(v < 0 for v in row):
                raise ValueError(f"negative entry in row {x}")
            if sum(row) != self.n:
                raise ValueError(f"row {x} sums to {sum(row)}/{self.n}, expected 1")

    @property
    def size(self) -> int:
        return len(self.numerators)

    def fraction(self, x: int, y: int) -> Fraction:
        return Fraction(self.numerators[x][y], self.n)

    def to_float(self) -> np.ndarray:
        return np.asarray(self.numerators, dtype=np.float64) / self.n


def markov_of(g: IterationGraph) -> MarkovMatrix:
    """M[x][y] = (arc slots x->y)/n off-diagonal, diagonal fills the row to 1."""
    size = 1 << g.n
    rows = []
    for x in range(size):
        row = [0] * size
        for y in g.arcs[x]:
            if y != x:
                row[y] += 1
        row[x] = g.n - sum(row)
        rows.append(tuple(row))
    return MarkovMatrix(g.n, tuple(rows))


def is_doubly_stochastic(m: MarkovMatrix) -> bool:
    """Exact column-sum check; rows sum to 1 by construction."""
    size = m.size
    return all(sum(m.numerators[x][y] for x in range(size)) == m.n for y in range(size))


def total_variation_to_uniform(row: Sequence[float]) -> float:
    """(1/2) sum |row(y) - 1/size| for a probability vector."""
    arr = np.asarray(row, dtype=np.float64)
    if arr.ndim != 1 or abs(float(arr.sum()) - 1.0) > 2.0**-40:
        raise ValueError("input is not a probability distribution")
    return 0.5 * float(np.abs(arr - 1.0 / arr.size).sum())


@dataclass(frozen=True)
class MixingReport:
    """Worst-row total-variation trace and the first step meeting epsilon.

    ``t`` is None when the chain did not reach epsilon within the step cap
    (a non-ergodic or periodic chain).
    """

    epsilon: float
    t: int | None
    trace: tuple[float, ...]  # trace[k] = worst-row TV after k+1 steps

    @property
    def mixed(self) -> bool:
        return self.t is not None

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "t": self.t, "trace": list(self.trace)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_text(self) -> str:
        lines = [f"epsilon {self.epsilon:g}"]
        if self.mixed:
            lines.append(f"mixing time {self.t}")
        else:
            lines.append("did not mix")
        for k, tv in enumerate(self.trace, start=1):
            lines.append(f"t={k} worst_tv={tv:.9e}")
        return "\n".join(lines)


def worst_row_tv(power: np.ndarray) -> float:
    size = power.shape[0]
    return 0.5 * float(np.abs(power - 1.0 / size).sum(axis=1).max())


def mixing_time(
    m: MarkovMatrix,
    epsilon: float,
    *,
    cap: int = 10**6,
    exact_check_max_bits: int = 6,
) -> MixingReport:
    """Smallest t with every row of M^t within epsilon of uniform (TV).

    Stops at ``cap`` steps with an explicit did-not-mix result.  For state
    spaces up to ``2**exact_check_max_bits`` the floating TV at the found t
    is cross-checked against exact rational powering (tolerance 2**-30).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    base = m.to_float()
    power = base.copy()
    trace = []
    t_found = None
    for t in range(1, cap + 1):
        tv = worst_row_tv(power)
        trace.append(tv)
        if tv <= epsilon:
            t_found = t
            break
        power = power @ base
    if t_found is not None and m.n <= exact_check_max_bits:
        exact_tv = exact_worst_row_tv(m, t_found)
        if abs(float(exact_tv) - trace[-1]) > 2.0**-30:
            raise ArithmeticError(
                f"floating TV {trace[-1]!r} deviates from exact {float(exact_tv)!r} at t={t_found}"
            )
    return MixingReport(epsilon, t_found, tuple(trace))


def exact_worst_row_tv(m: MarkovMatrix, t: int) -> Fraction:
    """Worst-row TV of M^t under exact integer arithmetic."""
    num, denom = _int_matrix_power(m, t)
    size = m.size
    worst = Fraction(0)
    for row in num:
        # TV = 1/2 sum |row/denom - 1/size| = sum/(2*denom*size)
        acc = sum(abs(v * size - denom) for v in row)
        worst = max(worst, Fraction(acc, 2 * denom * size))
    return worst


def _int_matrix_power(m: MarkovMatrix, t: int) -> tuple[list[list[int]], int]:
    """M^t as (integer numerator matrix, common denominator n**t)."""
    size = m.size
    result = [[1 if x == y else 0 for y in range(size)] for x in range(size)]
    result_denom = 1
    base = [list(row) for row in m.numerators]
    base_denom = m.n
    e = t
    while e:
        if e & 1:
            result = _int_matmul(result, base)
            result_denom *= base_denom
        e >>= 1
        if e:
            base = _int_matmul(base, base)
            base_denom *= base_denom
    return result, result_denom


def _int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    size = len(a)
    bt = [[b[x][y] for x in range(size)] for y in range(size)]
    return [
        [sum(ra[k] * cb[k] for k in range(size)) for cb in bt]
        for ra in a
    ]


def epsilon_sweep(
    m: MarkovMatrix,
    epsilons: Sequence[float] = tuple(10.0**-k for k in range(1, 9)),
    *,
    cap: int = 10**4,
) -> list[tuple[float, int | None]]:
    """Mixing time per epsilon, reusing one powering pass."""
    targets = sorted(epsilons, reverse=True)
    base = m.to_float()
    power = base.copy()
    out: list[tuple[float, int | None]] = []
    idx = 0
    for t in range(1, cap + 1):
        tv = worst_row_tv(power)
        while idx < len(targets) and tv <= targets[idx]:
            out.append((targets[idx], t))
            idx += 1
        if idx == len(targets):
            break
        power = power @ base
    for k in range(idx, len(targets)):
        out.append((targets[k], None))
    return out
