import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmwv.errors import DomainError, InputFormatError
from lmwv.spectra import (
    HolderClassParams,
    LongMemoryModel,
    Quadratic,
    Tabulated,
    Unit,
    eval_short_memory,
    eval_spectrum,
    holder_class_check,
    sin_power_expansion,
)

# mpmath, 40 digits: (2 sin(0.05))^(-1/2) * (1 + 0.5 * 0.01), both modulus and sine forms
SPECTRUM_Q05_AT_01 = 3.1787512745234701


class TestModel:
    @pytest.mark.parametrize("d", [0.0, 0.5, -0.1, 0.7])
    def test_boundary_d_rejected(self, d):
        with pytest.raises(DomainError):
            LongMemoryModel(d)

    def test_models_hashable_and_equal(self):
        assert LongMemoryModel(0.2) == LongMemoryModel(0.2, Unit())
        assert hash(LongMemoryModel(0.2, Quadratic(1.0))) == hash(LongMemoryModel(0.2, Quadratic(1.0)))


class TestEvalSpectrum:
    def test_at_pi(self):
        assert eval_spectrum(LongMemoryModel(0.25), math.pi) == pytest.approx(2 ** -0.5, rel=1e-15)

    def test_even(self):
        m = LongMemoryModel(0.25)
        assert eval_spectrum(m, -math.pi / 4) == eval_spectrum(m, math.pi / 4)

    def test_quadratic_value(self):
        m = LongMemoryModel(0.25, Quadratic(0.5))
        assert eval_spectrum(m, 0.1) == pytest.approx(SPECTRUM_Q05_AT_01, rel=1e-14)

    def test_matches_complex_modulus_form(self):
        m = LongMemoryModel(0.3, Quadratic(0.2))
        f = np.linspace(0.05, math.pi, 50)
        modulus = np.abs(1 - np.exp(-1j * f)) ** (-0.6) * (1 + 0.2 * f ** 2)
        np.testing.assert_allclose(eval_spectrum(m, f), modulus, rtol=1e-12)

    @pytest.mark.parametrize("f", [0.0, 3.2, -4.0])
    def test_domain(self, f):
        with pytest.raises(DomainError):
            eval_spectrum(LongMemoryModel(0.25), f)

    @settings(max_examples=200, deadline=None)
    @given(d=st.floats(0.001, 0.499), f=st.floats(1e-6, math.pi), beta=st.floats(-0.1, 5))
    def test_even_symmetry_property(self, d, f, beta):
        m = LongMemoryModel(d, Quadratic(beta))
        assert eval_spectrum(m, f) == eval_spectrum(m, -f)
        assert eval_spectrum(m, f) > 0

    @settings(max_examples=200, deadline=None)
    @given(d=st.floats(0.001, 0.499), f=st.floats(1e-8, math.pi))
    def test_unit_identity(self, d, f):
        value = eval_spectrum(LongMemoryModel(d), f) * (2 * math.sin(f / 2)) ** (2 * d)
        assert value == pytest.approx(1.0, rel=1e-12)


class TestShortMemory:
    def test_unit(self):
        assert eval_short_memory(Unit(), 0.3) == 1

    def test_quadratic(self):
        assert eval_short_memory(Quadratic(2.0), 0.5) == 1.5

    def test_tabulated_even_midpoint(self):
        spec = Tabulated((0.0, math.pi), (1.0, 3.0))
        assert eval_short_memory(spec, -math.pi / 2) == pytest.approx(2.0, rel=1e-15)

    def test_quadratic_negative_in_band(self):
        with pytest.raises(DomainError):
            eval_short_memory(Quadratic(-1.0), 2.0)

    def test_out_of_band(self):
        with pytest.raises(DomainError):
            eval_short_memory(Unit(), 3.5)

    @pytest.mark.parametrize("freqs,values", [
        ((0.1, math.pi), (1, 1)),
        ((0.0, 1.0), (1, 1)),
        ((0.0, 2.0, 1.0, math.pi), (1, 1, 1, 1)),
        ((0.0, math.pi), (1, -1)),
    ])
    def test_tabulated_validation(self, freqs, values):
        with pytest.raises(DomainError):
            Tabulated(freqs, values)

    def test_tabulated_from_csv(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("f,value\n0,1\n1.5,2\n3.14159265,2.5\n")
        spec = Tabulated.from_csv(path)
        assert spec(0.75) == pytest.approx(1.5)
        assert spec(-1.5) == pytest.approx(2.0)

    @pytest.mark.parametrize("text", ["a,b\n0,1\n", "f,value\n0,x\n", "f,value\n0.5,1\n3.1415927,1\n"])
    def test_tabulated_bad_csv(self, tmp_path, text):
        path = tmp_path / "s.csv"
        path.write_text(text)
        with pytest.raises(InputFormatError):
            Tabulated.from_csv(path)


class TestSinPowerExpansion:
    def test_small_f(self):
        exact = math.sin(0.005) ** -0.5
        assert sin_power_expansion(0.01, 0.25) == pytest.approx(14.1421651, abs=5e-7)
        assert abs(sin_power_expansion(0.01, 0.25) / exact - 1) < 1e-6

    def test_error_shrinks(self):
        mp.mp.dps = 50
        err = []
        for f in (mp.mpf("0.01"), mp.mpf("0.001")):
            exact = mp.sin(f / 2) ** mp.mpf("-0.5")
            err.append(abs(sin_power_expansion(f, mp.mpf("0.25")) / exact - 1))
        assert err[1] < err[0]

    def test_f1_d04_within_one_percent(self):
        exact = math.sin(0.5) ** -0.8
        assert abs(sin_power_expansion(1.0, 0.4) / exact - 1) < 0.01

    @pytest.mark.parametrize("f", [0.0, -0.1, 2.0])
    def test_domain(self, f):
        with pytest.raises(DomainError):
            sin_power_expansion(f, 0.25)

    @pytest.mark.parametrize("d", [0.1, 0.25, 0.4])
    def test_leading_term_dominance(self, d):
        diffs = [abs(sin_power_expansion(10.0 ** -k, d) * 10.0 ** (-k * 2 * d) - 2 ** (2 * d))
                 for k in range(1, 7)]
        assert all(b < a for a, b in zip(diffs, diffs[1:]))


class TestHolder:
    def test_unit_member(self):
        assert holder_class_check(Unit(), HolderClassParams(0.5, 0.01), 100).member

    def test_equality_case_member(self):
        assert holder_class_check(Quadratic(0.5), HolderClassParams(2.0, 0.5), 100).member

    def test_violation_at_pi(self):
        report = holder_class_check(Quadratic(0.5), HolderClassParams(2.0, 0.4), 100)
        assert not report.member
        assert report.worst_f == pytest.approx(math.pi)
        assert report.worst_ratio == pytest.approx(1.25)

    def test_default_grid(self):
        assert holder_class_check(Quadratic(0.3), HolderClassParams(2.0, 0.3)).member

    def test_zero_at_origin(self):
        with pytest.raises(DomainError):
            holder_class_check(Tabulated((0.0, math.pi), (0.0, 1.0)), HolderClassParams(1.0, 1.0))

    def test_params_validated(self):
        with pytest.raises(DomainError):
            HolderClassParams(2.5, 1.0)
        with pytest.raises(DomainError):
            HolderClassParams(1.0, 0.0)
        with pytest.raises(DomainError):
            holder_class_check(Unit(), HolderClassParams(1.0, 1.0), grid_size=1)

    @settings(max_examples=60, deadline=None)
    @given(beta=st.floats(-0.1, 3.0), beta_h=st.floats(0.1, 2.0), L0=st.floats(0.01, 5.0),
           extra=st.floats(0.0, 10.0))
    def test_monotone_in_L(self, beta, beta_h, L0, extra):
        spec = Quadratic(beta)
        if holder_class_check(spec, HolderClassParams(beta_h, L0), 64).member:
            assert holder_class_check(spec, HolderClassParams(beta_h, L0 + extra), 64).member
