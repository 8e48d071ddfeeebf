"""The random-walk generator: b component updates per output block.

Each output block runs the walk ``x <- F_f(s, x)`` for ``b`` steps with
strategy indices ``s`` drawn from a splitmix-style 64-bit mixer, then
emits the final configuration.  Blocks continue from the last state, so a
stream is one long walk sampled every ``b`` steps.  Everything is integer
arithmetic, so identical seeds give identical bytes on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cubefunc import BooleanMap, apply_component

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class StrategyGenerator:
    """Deterministic source of component indices in [1, n].

    Advances a 64-bit counter state by a fixed odd constant and finalizes
    with xor-shift-multiply mixing; draws are reduced to [1, n] by
    rejection sampling on the low bits, so every index is exactly
    equally likely.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_raw(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_index(self, n: int) -> int:
        if not 1 <= n <= 64:
            raise ValueError(f"index range {n} outside [1, 64]")
        mask = (1 << (n - 1).bit_length()) - 1
        while True:
            v = self.next_raw() & mask
            if v < n:
                return v + 1

    def index_batch(self, n: int, count: int) -> np.ndarray:
        """The next ``count`` indices as an array (same stream as next_index)."""
        if not 1 <= n <= 64:
            raise ValueError(f"index range {n} outside [1, 64]")
        k = (n - 1).bit_length()
        out = np.empty(count, dtype=np.uint8)
        filled = 0
        state = self.state
        while filled < count:
            # Oversize the batch to cover expected rejections.
            todo = count - filled
            draw = todo + (todo >> 1) + 16 if n & (n - 1) else todo
            idx = np.arange(1, draw + 1, dtype=np.uint64)
            z = (np.uint64(state) + idx * np.uint64(_GAMMA)) & np.uint64(_MASK64)
            z = ((z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)) & np.uint64(_MASK64)
            z = ((z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)) & np.uint64(_MASK64)
            z ^= z >> np.uint64(31)
            lows = (z & np.uint64((1 << k) - 1)).astype(np.int64)
            accepted = lows[lows < n]
            take = min(todo, accepted.size)
            out[filled : filled + take] = accepted[:take] + 1
            if take < todo and take < accepted.size:
                raise AssertionError("batch bookkeeping error")
            if take == todo and accepted.size >= todo:
                # State advances past the raw draw that produced the last
                # accepted index.
                consumed = int(np.nonzero(lows < n)[0][todo - 1]) + 1
                state = (state + consumed * _GAMMA) & _MASK64
                filled = count
            else:
                state = (state + draw * _GAMMA) & _MASK64
                filled += take
        self.state = state
        return out


@dataclass(frozen=True)
class GeneratorConfig:
    """One generator instance: the map, its walk length, and seed material."""

    f: BooleanMap
    b: int
    seed_x: int
    seed_s: int

    def __post_init__(self):
        if self.b < 0:
            raise ValueError(f"steps per block must be >= 0, got {self.b}")
        if not 0 <= self.seed_x < (1 << self.f.n):
            raise ValueError(f"initial configuration {self.seed_x} outside [0, {1 << self.f.n})")

    @property
    def n(self) -> int:
        return self.f.n


@dataclass
class GeneratorState:
    """Mutable walk state; single-owner, not safe to share concurrently."""

    config: GeneratorConfig
    x: int = field(init=False)
    strategy: StrategyGenerator = field(init=False)
    _bit_buffer: int = field(init=False, default=0)
    _bit_count: int = field(init=False, default=0)

    def __post_init__(self):
        self.x = self.config.seed_x
        self.strategy = StrategyGenerator(self.config.seed_s)

    def next_block(self) -> int:
        """Advance the walk b steps and return the reached configuration."""
        f = self.config.f
        x = self.x
        for _ in range(self.config.b):
            x = apply_component(f, self.strategy.next_index(f.n), x)
        self.x = x
        return x

    def blocks(self, count: int) -> np.ndarray:
        """The next ``count`` blocks, via the batched fast path."""
        cfg = self.config
        n, b = cfg.n, cfg.b
        size = 1 << n
        # step_table[(s-1)*size + x] = x with bit s rewritten to f_s(x)
        table = [0] * (n * size)
        for s in range(1, n + 1):
            base = (s - 1) * size
            for x in range(size):
                table[base + x] = apply_component(cfg.f, s, x)
        step = tuple(table)
        out = np.empty(count, dtype=np.uint32)
        x = self.x
        chunk = 1 << 16
        done = 0
        while done < count:
            nblk = min(chunk, count - done)
            offsets = (
                (self.strategy.index_batch(n, nblk * b).astype(np.int64) - 1) * size
            ).tolist()
            vals = []
            append = vals.append
            pos = 0
            for _ in range(nblk):
                end = pos + b
                for off in offsets[pos:end]:
                    x = step[off + x]
                pos = end
                append(x)
            out[done : done + nblk] = vals
            done += nblk
        self.x = int(x)
        return out

    def byte_stream(self, count: int) -> bytes:
        """Pack successive blocks most-significant-bit-first into bytes.

        Residual bits carry over between calls, so consecutive calls
        produce the same bytes as one big call.
        """
        if count < 0:
            raise ValueError(f"byte count must be >= 0, got {count}")
        n = self.config.n
        buf, bits = self._bit_buffer, self._bit_count
        out = bytearray()
        while bits >= 8 and len(out) < count:
            bits -= 8
            out.append((buf >> bits) & 0xFF)
            buf &= (1 << bits) - 1
        if len(out) < count:
            needed_bits = (count - len(out)) * 8 - bits
            for v in self.blocks(-(-needed_bits // n)).tolist():
                buf = (buf << n) | v
                bits += n
                while bits >= 8 and len(out) < count:
                    bits -= 8
                    out.append((buf >> bits) & 0xFF)
                    buf &= (1 << bits) - 1
        self._bit_buffer, self._bit_count = buf, bits
        return bytes(out)


# Built-in generator profiles: function tables with their walk lengths.
_PROFILE_B = {"a": 32, "b": 41, "c": 49, "d": 63, "e": 75}

_PROFILE_TABLES = {
    "a": (13, 10, 9, 14, 3, 11, 1, 12, 15, 4, 7, 5, 2, 6, 0, 8),
    "b": (
        29, 22, 21, 30, 19, 27, 24, 28, 7, 20, 5, 4, 23, 26, 25, 17,
        31, 12, 15, 8, 10, 14, 13, 9, 3, 2, 1, 6, 11, 18, 0, 16,
    ),
    "c": (
        55, 60, 45, 56, 43, 62, 61, 40, 53, 50, 52, 36, 59, 34, 57, 49,
        15, 14, 47, 46, 11, 58, 33, 44, 7, 54, 39, 37, 51, 2, 32, 48,
        63, 26, 25, 30, 19, 27, 17, 28, 31, 20, 23, 21, 18, 22, 16, 24,
        13, 12, 29, 8, 10, 42, 41, 0, 5, 38, 4, 6, 35, 3, 9, 1,
    ),
    "d": (
        111, 94, 93, 116, 122, 114, 125, 88, 87, 126, 119, 84, 123, 98, 81, 120,
        109, 78, 105, 110, 99, 107, 104, 108, 101, 70, 117, 96, 103, 102, 113, 64,
        79, 30, 95, 124, 83, 91, 121, 24, 85, 118, 69, 20, 115, 90, 17, 112,
        77, 76, 73, 12, 74, 106, 72, 8, 7, 6, 71, 100, 75, 82, 97, 0,
        127, 54, 57, 62, 51, 59, 56, 48, 53, 38, 37, 60, 55, 58, 33, 49,
        63, 44, 47, 40, 42, 46, 45, 41, 35, 34, 39, 52, 43, 50, 32, 36,
        29, 28, 61, 92, 26, 18, 89, 25, 19, 86, 23, 4, 27, 2, 16, 80,
        31, 10, 15, 14, 3, 11, 13, 9, 5, 22, 21, 68, 67, 66, 65, 1,
    ),
    "e": (
        223, 250, 249, 254, 187, 234, 241, 252, 183, 230, 229, 180, 227, 178, 240, 248,
        237, 236, 253, 172, 251, 238, 201, 224, 247, 166, 165, 244, 163, 242, 161, 225,
        215, 220, 205, 216, 218, 222, 221, 208, 213, 210, 212, 214, 219, 211, 217, 209,
        239, 142, 207, 206, 139, 203, 193, 136, 135, 196, 199, 132, 194, 130, 129, 200,
        159, 186, 185, 190, 59, 170, 177, 188, 191, 246, 245, 52, 243, 50, 176, 184,
        173, 46, 189, 174, 235, 42, 233, 232, 231, 38, 37, 228, 35, 226, 33, 168,
        151, 156, 141, 152, 154, 158, 157, 144, 149, 146, 148, 150, 155, 147, 153, 145,
        175, 14, 143, 204, 11, 202, 169, 8, 7, 198, 197, 4, 195, 2, 1, 192,
        255, 124, 109, 120, 107, 126, 125, 112, 103, 114, 116, 100, 123, 98, 121, 113,
        79, 106, 111, 110, 75, 122, 97, 108, 71, 118, 117, 68, 115, 66, 96, 104,
        127, 90, 89, 94, 83, 91, 81, 92, 95, 84, 87, 85, 82, 86, 80, 88,
        77, 76, 93, 72, 74, 78, 105, 64, 69, 102, 101, 70, 99, 67, 73, 65,
        55, 60, 45, 56, 51, 62, 61, 48, 119, 182, 181, 53, 179, 54, 57, 49,
        15, 44, 47, 40, 171, 58, 9, 32, 167, 6, 5, 164, 3, 162, 41, 160,
        63, 26, 25, 30, 19, 27, 17, 28, 31, 20, 23, 21, 18, 22, 16, 24,
        13, 10, 29, 140, 43, 138, 137, 12, 39, 134, 133, 36, 131, 34, 0, 128,
    ),
}

PROFILE_TAGS = tuple(sorted(_PROFILE_TABLES))


def paper_profile(tag: str, seed_x: int = 0, seed_s: int = 0) -> GeneratorConfig:
    """Built-in profile ``a``..``e`` with its standard walk length."""
    if tag not in _PROFILE_TABLES:
        raise ValueError(f"unknown profile {tag!r}, expected one of {PROFILE_TAGS}")
    table = _PROFILE_TABLES[tag]
    f = BooleanMap(len(table).bit_length() - 1, table)
    return GeneratorConfig(f=f, b=_PROFILE_B[tag], seed_x=seed_x, seed_s=seed_s)
