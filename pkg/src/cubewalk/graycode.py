"""Cyclic Gray codes: validation, balance classification, and inductive construction.

Conventions used throughout this module:

* A codeword on ``n`` bits is stored as a plain integer in ``[0, 2**n)``,
  read as standard binary (the leftmost written digit is the most
  significant bit).
* A transition index ``i`` in a transition sequence names the bit of
  value ``2**(i-1)``, i.e. index 1 is the least significant bit.  This is
  the numbering under which the classical examples come out right (the
  3-bit code 000,100,101,001,... has transition sequence 3,1,3,2,3,1,3,2).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Sequence


@dataclass(frozen=True)
class TransitionSequence:
    """Sequence of bit indices encoding a cyclic Gray code.

    ``items[t]`` is the (1-based, LSB-first) index of the bit flipped at
    step ``t``.  Starting from any word and applying the flips must visit
    ``2**n`` distinct words and return to the start.
    """

    n: int
    items: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"bit count must be >= 1, got {self.n}")
        if len(self.items) != 1 << self.n:
            raise ValueError(
                f"transition sequence for n={self.n} must have length "
                f"{1 << self.n}, got {len(self.items)}"
            )
        for t, i in enumerate(self.items):
            if not 1 <= i <= self.n:
                raise ValueError(f"transition index {i} at step {t} outside [1, {self.n}]")
        walk_cyclic_transitions(self.n, self.items, 0)  # raises if not cyclic

    def __str__(self):
        return ",".join(str(i) for i in self.items)


@dataclass(frozen=True)
class GrayCode:
    """Ordered list of the 2**n codewords of a cyclic Gray code."""

    n: int
    words: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"bit count must be >= 1, got {self.n}")
        size = 1 << self.n
        if len(self.words) != size:
            raise ValueError(f"need {size} words for n={self.n}, got {len(self.words)}")
        seen = set()
        for t, w in enumerate(self.words):
            if not 0 <= w < size:
                raise ValueError(f"word {w} at position {t} outside [0, {size})")
            if w in seen:
                raise ValueError(f"duplicate word {w} at position {t}")
            seen.add(w)
        for t in range(size):
            a, b = self.words[t], self.words[(t + 1) % size]
            if bin(a ^ b).count("1") != 1:
                raise ValueError(
                    f"words {a} and {b} at positions {t},{(t + 1) % size} "
                    f"differ in {bin(a ^ b).count('1')} bits, expected 1"
                )

    def __str__(self):
        return ",".join(str(w) for w in self.words)


@dataclass(frozen=True)
class TransitionCount:
    """Occurrence count of each bit index in a transition sequence."""

    n: int
    counts: Mapping[int, int]

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def values(self) -> tuple[int, ...]:
        return tuple(self.counts[i] for i in range(1, self.n + 1))


class BalanceClass(Enum):
    TOTALLY_BALANCED = "totally balanced"
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"


@dataclass(frozen=True)
class Decomposition:
    """A split of a transition sequence into special elements and blocks.

    The base sequence is the concatenation

        s[i1], u0, s[i2], u1, s[i3], u2, ..., s[i(l-1)], u(l-2), s[il], v

    with ``i1 = 1``, ``i2 = 2`` and ``u0`` empty; the ``l`` positions are
    stored 1-based in ``special_indices``.  Blocks are derived, not stored.
    """

    base: TransitionSequence
    special_indices: tuple[int, ...]

    def __post_init__(self):
        idx = self.special_indices
        l = len(idx)
        if l < 4 or l % 2 != 0:
            raise ValueError(f"need an even number >= 4 of special indices, got {l}")
        if idx[0] != 1 or idx[1] != 2:
            raise ValueError("first two special indices must be 1 and 2")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("special indices must be strictly increasing")
        if idx[-1] > len(self.base.items):
            raise ValueError(
                f"special index {idx[-1]} beyond base length {len(self.base.items)}"
            )

    @property
    def l(self) -> int:
        return len(self.special_indices)

    @property
    def specials(self) -> tuple[int, ...]:
        items = self.base.items
        return tuple(items[i - 1] for i in self.special_indices)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """u0 .. u(l-2): the gaps between consecutive special elements."""
        items = self.base.items
        idx = self.special_indices
        return tuple(items[idx[k] : idx[k + 1] - 1] for k in range(self.l - 1))

    @property
    def tail(self) -> tuple[int, ...]:
        """v: everything after the last special element."""
        return self.base.items[self.special_indices[-1] :]


def walk_cyclic_transitions(
    n: int, items: Sequence[int], start: int
) -> tuple[int, ...]:
    """Apply a transition sequence from ``start``; return the visited words.

    Raises ValueError naming the first violation if the walk revisits a
    word or fails to return to the start.
    """
    size = 1 << n
    words = []
    seen = set()
    x = start
    for t, i in enumerate(items):
        if x in seen:
            raise ValueError(f"word {x} revisited at step {t}")
        seen.add(x)
        words.append(x)
        x ^= 1 << (i - 1)
    if x != start:
        raise ValueError(f"sequence does not return to start: ended at {x}, began at {start}")
    if len(words) != size:
        raise ValueError(f"visited {len(words)} words, expected {size}")
    return tuple(words)


def reflected_gray(n: int) -> GrayCode:
    """The standard binary-reflected cyclic Gray code on ``n`` bits."""
    if n < 1:
        raise ValueError(f"bit count must be >= 1, got {n}")
    return GrayCode(n, tuple(k ^ (k >> 1) for k in range(1 << n)))


def to_transitions(code: GrayCode) -> TransitionSequence:
    """Transition sequence of a Gray code (which bit flips at each step)."""
    size = 1 << code.n
    items = []
    for t in range(size):
        d = code.words[t] ^ code.words[(t + 1) % size]
        items.append(d.bit_length())  # single bit: index of its position, 1-based
    return TransitionSequence(code.n, tuple(items))


def from_transitions(seq: TransitionSequence, start: int = 0) -> GrayCode:
    """Gray code obtained by applying ``seq`` from the word ``start``."""
    if not 0 <= start < (1 << seq.n):
        raise ValueError(f"start word {start} outside [0, {1 << seq.n})")
    return GrayCode(seq.n, walk_cyclic_transitions(seq.n, seq.items, start))


def transition_count(seq: TransitionSequence) -> TransitionCount:
    counts = {i: 0 for i in range(1, seq.n + 1)}
    for i in seq.items:
        counts[i] += 1
    return TransitionCount(seq.n, counts)


def classify_balance(tc: TransitionCount) -> BalanceClass:
    vals = tc.values()
    if all(v == (1 << tc.n) // tc.n for v in vals) and (1 << tc.n) % tc.n == 0:
        return BalanceClass.TOTALLY_BALANCED
    if max(vals) - min(vals) <= 2:
        return BalanceClass.BALANCED
    return BalanceClass.UNBALANCED


def is_balanced(tc: TransitionCount) -> bool:
    """Combined predicate: totally balanced codes count as balanced."""
    return classify_balance(tc) is not BalanceClass.UNBALANCED


def choose_l(n: int) -> int:
    """Largest even l with l <= 2**n / n (the new bits will flip l times each)."""
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    l = (1 << n) // n
    return l if l % 2 == 0 else l - 1


def enumerate_decompositions(
    base: TransitionSequence, l: int
) -> Iterator[Decomposition]:
    """All decompositions of ``base`` with ``l`` special elements.

    Positions 1 and 2 are always special; the remaining ``l - 2`` are drawn
    from positions 3..len(base) in lexicographic order of the index tuple.
    """
    size = len(base.items)
    if l < 4 or l % 2 != 0:
        raise ValueError(f"l must be even and >= 4, got {l}")
    if l - 2 > size - 2:
        raise ValueError(f"cannot pick {l - 2} special positions from {size - 2}")
    for combo in itertools.combinations(range(3, size + 1), l - 2):
        yield Decomposition(base, (1, 2) + combo)


def count_fixed_l_decompositions(n: int) -> int:
    """Number of decompositions at the balance-targeted l = choose_l(n)."""
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    return math.comb((1 << (n - 2)) - 2, choose_l(n) - 2)


def count_all_decompositions(n: int, *, include_l2: bool = True) -> int:
    """Number of decompositions over every even l.

    With ``include_l2`` the degenerate l = 2 term is counted (the value the
    summation formula gives); without it the count drops by one, which is
    the variant some published tallies print.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    m = (1 << (n - 2)) - 2
    total = sum(math.comb(m, 2 * lp - 2) for lp in range(1, (1 << (n - 3)) + 1))
    return total if include_l2 else total - 1


# The four 2-bit states the two new bits take, in Gray-cycle order.  Hops
# between neighbours in this list flip exactly one of the new bits.
_COPY_CYCLE = (0b00, 0b01, 0b11, 0b10)


def construction_b(d: Decomposition) -> TransitionSequence:
    """Grow an n-bit cyclic Gray code from an (n-2)-bit one.

    The two new bits (indices n-1 and n) each flip exactly ``l`` times in
    the result; a special element of the base appears twice, every other
    base element four times.  The output is checker-validated before being
    returned, so a construction bug cannot escape as a bad sequence.

    The traversal: walk the base cycle backwards once, bouncing each
    inter-special block through three of the four copies of the base cube
    (the outer copies 0 and 2 alternate, copy 1 is always the middle);
    spiral through all four copies around the first special element; then
    sweep everything else forward in copy 3.
    """
    base = d.base
    n = base.n + 2
    w = walk_cyclic_transitions(base.n, base.items, 0)
    size = len(w)
    idx = d.special_indices
    l = d.l

    lo, hi = 1 << (n - 2), 1 << (n - 1)  # values of new bits n-1 and n

    def word(t: int, copy: int) -> int:
        c = _COPY_CYCLE[copy]
        return w[t % size] | (lo if c & 0b01 else 0) | (hi if c & 0b10 else 0)

    path: list[int] = []

    # Phase 1: backwards around the base cycle.  Start at vertex 0 in
    # copy 0 and reverse through the tail v.
    for t in range(size, idx[-1] - 1, -1):
        path.append(word(t, 0))
    outer = 0
    for k in range(l - 1, 1, -1):  # one unit per special l, l-1, ..., 3
        top = idx[k]  # walk position of special k+1's lower endpoint + block
        bottom = idx[k - 1]
        for t in range(top - 1, bottom - 1, -1):  # rev special, then rev block
            path.append(word(t, outer))
        other = 2 - outer
        for t in range(bottom, top):  # hop to middle copy, block forward
            path.append(word(t, 1))
        for t in range(top - 1, bottom - 1, -1):  # hop to other outer, block rev
            path.append(word(t, other))
        outer = other
    # Core: spiral around the two forced specials (positions 2 and 1) and
    # the tail, touching all four copies.
    path.append(word(1, outer))  # rev s2 in the outer copy
    path.append(word(1, 1))  # hop to middle at w1
    path.append(word(0, 1))  # rev s1
    for t in range(size - 1, idx[-1] - 1, -1):  # rev v in copy 1
        path.append(word(t, 1))
    for t in range(idx[-1], size + 1):  # hop to copy 2, fwd v back to w0
        path.append(word(t, 2))
    path.append(word(1, 2))  # fwd s1 in copy 2
    # Phase 2: hop to copy 3 and sweep everything after s1 forward.
    for t in range(1, size + 1):
        path.append(word(t, 3))

    if len(path) != 1 << n:
        raise AssertionError(
            f"construction produced {len(path)} vertices, expected {1 << n}"
        )
    code = GrayCode(n, tuple(path))  # validates distinctness and adjacency
    out = to_transitions(code)
    tc = transition_count(out)
    if tc[n - 1] != l or tc[n] != l:
        raise AssertionError(f"new-bit transition counts {tc[n - 1]},{tc[n]} != l={l}")
    return out


def generate_balanced(
    n: int,
    limit: int = 250_000,
    *,
    totally_only: bool = False,
    jobs: int = 1,
) -> Iterator[tuple[TransitionSequence, TransitionCount, BalanceClass]]:
    """Balanced n-bit codes from the inductive pipeline, deduplicated.

    Runs the induction from the 2- or 3-bit reflected seed up to ``n``,
    reusing the first balanced code found at each intermediate size.  At
    the final size every decomposition (up to ``limit`` of them, in
    lexicographic order) is constructed and filtered by balance class.
    """
    if not 4 <= n <= 8:
        raise ValueError(f"supported bit counts are 4..8, got {n}")
    if n - 2 >= 4:
        first = next(generate_balanced(n - 2, limit, jobs=jobs), None)
        if first is None:
            return
        base = first[0]
    else:
        base = to_transitions(reflected_gray(n - 2))

    wanted = (
        (BalanceClass.TOTALLY_BALANCED,)
        if totally_only
        else (BalanceClass.TOTALLY_BALANCED, BalanceClass.BALANCED)
    )
    seen: set[tuple[int, ...]] = set()
    decomps = itertools.islice(enumerate_decompositions(base, choose_l(n)), limit)
    for seq in _map_construction(base, decomps, jobs):
        if seq.items in seen:
            continue
        seen.add(seq.items)
        tc = transition_count(seq)
        cls = classify_balance(tc)
        if cls in wanted:
            yield seq, tc, cls


def _construct_from_indices(
    args: tuple[int, tuple[int, ...], tuple[int, ...]]
) -> tuple[int, ...]:
    base_n, base_items, indices = args
    d = Decomposition(TransitionSequence(base_n, base_items), indices)
    return construction_b(d).items


def _map_construction(
    base: TransitionSequence, decomps: Iterator[Decomposition], jobs: int
) -> Iterator[TransitionSequence]:
    n = base.n + 2
    if jobs <= 1:
        for d in decomps:
            yield construction_b(d)
        return
    work = ((base.n, base.items, d.special_indices) for d in decomps)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() preserves submission order, so output stays deterministic.
        for items in pool.map(_construct_from_indices, work, chunksize=64):
            yield TransitionSequence(n, items)


def parse_transition_line(line: str) -> TransitionSequence:
    """Parse 'i1,i2,...' (the one-sequence-per-line text format)."""
    try:
        items = tuple(int(tok) for tok in line.strip().split(","))
    except ValueError as exc:
        raise ValueError(f"malformed transition sequence {line!r}") from exc
    size = len(items)
    if size < 2 or size & (size - 1):
        raise ValueError(f"sequence length {size} is not a power of two >= 2")
    return TransitionSequence(size.bit_length() - 1, items)


def parse_codeword_line(line: str) -> GrayCode:
    """Parse 'w1,w2,...' (decimal codewords, most significant bit first)."""
    try:
        words = tuple(int(tok) for tok in line.strip().split(","))
    except ValueError as exc:
        raise ValueError(f"malformed codeword list {line!r}") from exc
    size = len(words)
    if size < 2 or size & (size - 1):
        raise ValueError(f"word count {size} is not a power of two >= 2")
    return GrayCode(size.bit_length() - 1, words)
