"""Desk-scale randomness tests and raw-byte export for external batteries.

Four tests cover the basic defect classes: global bit frequency, local
frequency over blocks, run-length oscillation, and the distribution of
k-bit cells.  p-values come from the normal and chi-square reference
distributions; a stream passes a test when p >= alpha.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import BinaryIO, Iterable

import numpy as np
from scipy.special import gammaincc

from .prng import GeneratorConfig, GeneratorState

MIN_BITS = 10_000


@dataclass(frozen=True)
class TestReport:
    test_name: str
    sample_bits: int
    statistic: float
    p_value: float
    alpha: float

    @property
    def passed(self) -> bool:
        return self.p_value >= self.alpha

    def to_dict(self) -> dict:
        return {
            "test": self.test_name,
            "bits": self.sample_bits,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "pass": self.passed,
        }

    def line(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"{self.test_name:<16} bits={self.sample_bits:<10} "
            f"stat={self.statistic:<14.6g} p={self.p_value:.6g} {verdict}"
        )


def bits_from_bytes(data: bytes) -> np.ndarray:
    """Unpack bytes into a 0/1 array, most significant bit first."""
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def _require_bits(bits: np.ndarray, minimum: int = MIN_BITS) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.size < minimum:
        raise ValueError(f"need at least {minimum} bits, got {arr.size}")
    return arr


def monobit(bits: np.ndarray, alpha: float = 0.01) -> TestReport:
    """Global frequency of ones vs zeros; statistic is the normalized sum."""
    arr = _require_bits(bits)
    s = 2.0 * int(arr.sum()) - arr.size
    z = abs(s) / math.sqrt(arr.size)
    p = math.erfc(z / math.sqrt(2.0))
    return TestReport("monobit", arr.size, z, p, alpha)


def block_frequency(bits: np.ndarray, block_len: int, alpha: float = 0.01) -> TestReport:
    """Chi-square of per-block one-fractions around 1/2."""
    arr = _require_bits(bits)
    if block_len < 2:
        raise ValueError(f"block length must be >= 2, got {block_len}")
    nblocks = arr.size // block_len
    if nblocks < 8:
        raise ValueError(f"need at least 8 blocks, got {nblocks} of length {block_len}")
    trimmed = arr[: nblocks * block_len].reshape(nblocks, block_len)
    pi = trimmed.mean(axis=1)
    chi2 = 4.0 * block_len * float(((pi - 0.5) ** 2).sum())
    p = float(gammaincc(nblocks / 2.0, chi2 / 2.0))
    return TestReport("block-frequency", nblocks * block_len, chi2, p, alpha)


def runs_test(bits: np.ndarray, alpha: float = 0.01) -> TestReport:
    """Number of maximal same-bit runs vs its expectation.

    Degenerate one-fractions short-circuit to p = 0 (the prerequisite of
    the reference statistic is not met, and such streams fail anyway).
    """
    arr = _require_bits(bits)
    n = arr.size
    pi = float(arr.mean())
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return TestReport("runs", n, math.inf, 0.0, alpha)
    v = int((arr[1:] != arr[:-1]).sum()) + 1
    expected = 2.0 * n * pi * (1.0 - pi)
    z = abs(v - expected) / (2.0 * pi * (1.0 - pi) * math.sqrt(2.0 * n))
    p = math.erfc(z / math.sqrt(2.0))
    return TestReport("runs", n, float(v), p, alpha)


def chi_square_blocks(bits: np.ndarray, k: int, alpha: float = 0.01) -> TestReport:
    """Chi-square of non-overlapping k-bit cell values against uniform."""
    arr = _require_bits(bits)
    if not 1 <= k <= 16:
        raise ValueError(f"cell width must be in [1, 16], got {k}")
    cells = arr.size // k
    bins = 1 << k
    if cells < 5 * bins:
        raise ValueError(f"need at least {5 * bins} cells of {k} bits, got {cells}")
    trimmed = arr[: cells * k].reshape(cells, k)
    weights = 1 << np.arange(k - 1, -1, -1)
    values = trimmed @ weights
    counts = np.bincount(values, minlength=bins)
    expected = cells / bins
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    p = float(gammaincc((bins - 1) / 2.0, chi2 / 2.0))
    return TestReport(f"chi2-{k}bit", cells * k, chi2, p, alpha)


def run_battery(
    bits: np.ndarray,
    alpha: float = 0.01,
    *,
    block_len: int | None = None,
    cell_bits: int = 8,
) -> list[TestReport]:
    """The four-test battery with defaults scaled to the stream length."""
    arr = _require_bits(bits)
    if block_len is None:
        block_len = max(20, arr.size // 80)
    return [
        monobit(arr, alpha),
        block_frequency(arr, block_len, alpha),
        runs_test(arr, alpha),
        chi_square_blocks(arr, cell_bits, alpha),
    ]


def battery_text(reports: Iterable[TestReport]) -> str:
    return "\n".join(r.line() for r in reports)


def battery_json(reports: Iterable[TestReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


class ExportError(OSError):
    """Sink failure during export; carries the byte count already written."""

    def __init__(self, message: str, bytes_written: int):
        super().__init__(f"{message} (after {bytes_written} bytes)")
        self.bytes_written = bytes_written


def export_raw(config: GeneratorConfig, n_bytes: int, sink: BinaryIO) -> int:
    """Write exactly ``n_bytes`` of generator output to ``sink``.

    Returns the byte count written; sink failures surface as
    :class:`ExportError` with the progress so far.  Output is flushed
    before returning.
    """
    if n_bytes < 0:
        raise ValueError(f"byte count must be >= 0, got {n_bytes}")
    state = GeneratorState(config)
    written = 0
    chunk = 1 << 20
    while written < n_bytes:
        part = state.byte_stream(min(chunk, n_bytes - written))
        try:
            sink.write(part)
        except OSError as exc:
            raise ExportError(str(exc), written) from exc
        written += len(part)
    try:
        sink.flush()
    except OSError as exc:
        raise ExportError(str(exc), written) from exc
    return written
