import io
import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import chi2, norm

from cubewalk.prng import GeneratorState, StrategyGenerator, paper_profile
from cubewalk.stats import (
    bits_from_bytes,
    block_frequency,
    chi_square_blocks,
    export_raw,
    monobit,
    run_battery,
    runs_test,
)


def uniform_bits(seed: int, count: int) -> np.ndarray:
    """Ideal-uniform synthetic source: raw mixer output bits."""
    g = StrategyGenerator(seed)
    nwords = -(-count // 64)
    raw = np.array([g.next_raw() for _ in range(nwords)], dtype=np.uint64)
    return np.unpackbits(raw.view(np.uint8))[:count]


class TestDegenerateStreams:
    def test_all_zero_monobit(self):
        rep = monobit(np.zeros(20000, dtype=np.uint8))
        assert rep.p_value < 1e-6
        assert not rep.passed

    def test_alternating_runs(self):
        rep = runs_test(np.tile([0, 1], 10000).astype(np.uint8))
        assert not rep.passed

    def test_all_zero_battery_fails_everywhere(self):
        for rep in run_battery(np.zeros(20480, dtype=np.uint8)):
            assert not rep.passed


class TestInsufficientData:
    def test_minimum_named(self):
        with pytest.raises(ValueError, match="10000"):
            monobit(np.zeros(100, dtype=np.uint8))

    def test_block_frequency_needs_blocks(self):
        with pytest.raises(ValueError):
            block_frequency(uniform_bits(1, 20000), 10000)

    def test_chi_square_needs_cells(self):
        with pytest.raises(ValueError):
            chi_square_blocks(uniform_bits(1, 10001), 16)


class TestPValueOracles:
    """Closed-form p-values vs numerical integration of the densities."""

    def test_monobit_against_normal_integral(self):
        bits = uniform_bits(5, 40000)
        rep = monobit(bits)
        tail, _ = integrate.quad(norm.pdf, rep.statistic, np.inf)
        assert rep.p_value == pytest.approx(2 * tail, abs=1e-6)

    def test_block_frequency_against_chi2_integral(self):
        bits = uniform_bits(6, 40000)
        rep = block_frequency(bits, 400)
        df = 100
        tail, _ = integrate.quad(lambda x: chi2.pdf(x, df), rep.statistic, np.inf)
        assert rep.p_value == pytest.approx(tail, abs=1e-6)

    def test_chi_square_blocks_against_integral(self):
        bits = uniform_bits(7, 81920)
        rep = chi_square_blocks(bits, 4)
        tail, _ = integrate.quad(lambda x: chi2.pdf(x, 15), rep.statistic, np.inf)
        assert rep.p_value == pytest.approx(tail, abs=1e-6)

    def test_runs_against_normal_integral(self):
        bits = uniform_bits(8, 40000)
        rep = runs_test(bits)
        n = bits.size
        pi = float(bits.mean())
        z = abs(rep.statistic - 2 * n * pi * (1 - pi)) / (2 * pi * (1 - pi) * math.sqrt(2 * n))
        tail, _ = integrate.quad(norm.pdf, z, np.inf)
        assert rep.p_value == pytest.approx(2 * tail, abs=1e-6)


class TestPassRates:
    def test_ideal_source_pass_rate(self):
        # 200 disjoint samples; expected pass rate at alpha=.01 is 0.99 per
        # test, binomial tolerance keeps the observed rate in [0.95, 1.0]
        results = {"monobit": 0, "block-frequency": 0, "runs": 0, "chi2-8bit": 0}
        for k in range(200):
            bits = uniform_bits(1000 + k, 20480)
            for rep in run_battery(bits):
                results[rep.test_name] += rep.passed
        for name, passes in results.items():
            assert 0.95 <= passes / 200 <= 1.0, (name, passes)


class TestBatteryOnGenerator:
    def test_profile_c_short_stream(self):
        st = GeneratorState(paper_profile("c", seed_x=0, seed_s=1))
        bits = bits_from_bytes(st.byte_stream(62500))  # 5e5 bits
        for rep in run_battery(bits):
            assert rep.passed, rep.line()


class TestExportRaw:
    def test_zero_bytes(self):
        sink = io.BytesIO()
        assert export_raw(paper_profile("a", seed_x=0, seed_s=0), 0, sink) == 0
        assert sink.getvalue() == b""

    def test_exact_size(self):
        sink = io.BytesIO()
        n = export_raw(paper_profile("b", seed_x=0, seed_s=0), 12345, sink)
        assert n == 12345
        assert len(sink.getvalue()) == 12345

    def test_deterministic_files(self):
        a, b = io.BytesIO(), io.BytesIO()
        export_raw(paper_profile("c", seed_x=2, seed_s=3), 4096, a)
        export_raw(paper_profile("c", seed_x=2, seed_s=3), 4096, b)
        assert a.getvalue() == b.getvalue()

    def test_matches_byte_stream(self):
        sink = io.BytesIO()
        export_raw(paper_profile("a", seed_x=0, seed_s=0), 64, sink)
        st = GeneratorState(paper_profile("a", seed_x=0, seed_s=0))
        assert sink.getvalue() == st.byte_stream(64)

    def test_sink_failure_reports_progress(self):
        from cubewalk.stats import ExportError

        class Flaky(io.RawIOBase):
            def __init__(self):
                self.seen = 0

            def write(self, data):
                if self.seen >= 1 << 20:
                    raise OSError("disk full")
                self.seen += len(data)
                return len(data)

        with pytest.raises(ExportError) as info:
            export_raw(paper_profile("e", seed_x=0, seed_s=0), (1 << 20) + 4096, Flaky())
        assert info.value.bytes_written == 1 << 20


class TestBitUnpacking:
    def test_msb_first(self):
        assert bits_from_bytes(b"\x80").tolist() == [1, 0, 0, 0, 0, 0, 0, 0]
        assert bits_from_bytes(b"\x01").tolist() == [0, 0, 0, 0, 0, 0, 0, 1]
