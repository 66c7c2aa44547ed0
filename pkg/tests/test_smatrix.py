import itertools
import math

import pytest

from bscat.errors import DomainError
from bscat.model import ANTISOLITON, SOLITON, breather, make_model
from bscat.smatrix import (
    s0,
    s_breather_breather,
    s_breather_soliton,
    s_entry,
    s_rl_limit,
    s_soliton,
)

CHARGES = (SOLITON, ANTISOLITON)


class TestScalarFactor:
    def test_free_fermion_point_is_minus_one(self):
        spec = make_model("bsg", 0.5)
        for theta in (0.3, 0.7, -1.4):
            assert s0(theta, spec) == pytest.approx(-1.0, abs=1e-10)

    def test_zero_rapidity(self):
        assert s0(0.0, make_model("bsg", 1.0 / 3.0)) == pytest.approx(
            -1.0, abs=1e-12
        )

    @pytest.mark.parametrize("z", [1.0 / 3.0, 0.4, 0.6])
    def test_unitarity(self, z):
        spec = make_model("bsg", z)
        for theta in (0.3, -0.9, 2.1):
            assert abs(s0(theta, spec) * s0(-theta, spec) - 1.0) < 1e-10

    def test_unimodular_on_real_line(self):
        spec = make_model("bsg", 0.4)
        for theta in (0.2, 1.1, -2.3):
            assert abs(abs(s0(theta, spec)) - 1.0) < 1e-11

    def test_crossing_continuation(self):
        # S0(i pi - theta) equals the soliton-antisoliton transmission entry
        spec = make_model("bsg", 0.4)
        for theta in (0.5, 1.2):
            lhs = s0(1j * math.pi - theta, spec)
            rhs = s_soliton(theta, "pm_pm", spec)
            assert abs(lhs - rhs) < 1e-10

    def test_rejects_outside_strip(self):
        with pytest.raises(DomainError):
            s0(complex(0.0, 3.5), make_model("bsg", 0.4))


class TestSolitonSector:
    def test_integer_p_is_diagonal(self):
        spec = make_model("bsg", 1.0 / 3.0)
        for theta in (0.4, -1.1):
            assert s_soliton(theta, "pm_mp", spec) == 0.0
            assert s_soliton(theta, "pm_pm", spec) == pytest.approx(
                (-1.0) ** 3 * s0(theta, spec), abs=1e-12
            )

    def test_generic_z_matrix_unitarity(self):
        spec = make_model("bsg", 0.4)
        theta = 0.7
        for ins in itertools.product(CHARGES, repeat=2):
            for outs in itertools.product(CHARGES, repeat=2):
                acc = 0.0j
                for mid in itertools.product(CHARGES, repeat=2):
                    acc += s_entry(*ins, *mid, theta, spec) * s_entry(
                        *mid, *outs, -theta, spec
                    )
                target = 1.0 if ins == outs else 0.0
                assert abs(acc - target) < 1e-10

    def test_charge_conservation_zeros(self):
        spec = make_model("bsg", 0.4)
        assert s_entry(SOLITON, SOLITON, SOLITON, ANTISOLITON, 0.5, spec) == 0.0
        assert s_entry(SOLITON, ANTISOLITON, SOLITON, SOLITON, 0.5, spec) == 0.0

    def test_unknown_channel(self):
        with pytest.raises(DomainError):
            s_soliton(0.5, "xx", make_model("bsg", 0.4))


class TestBreatherAmplitudes:
    def test_breather_soliton_frozen(self):
        spec = make_model("bsg", 1.0 / 3.0)
        assert s_breather_soliton(0.9, 1, spec) == pytest.approx(
            0.3563902609868242 + 0.9343371885319256j, abs=1e-12
        )

    def test_breather_soliton_unimodular(self):
        spec = make_model("bsg", 0.2)
        for m in (1, 2, 3):
            for theta in (0.4, -1.3):
                assert abs(abs(s_breather_soliton(theta, m, spec)) - 1.0) < 1e-12

    def test_breather_breather_frozen(self):
        spec = make_model("bsg", 0.2)
        assert s_breather_breather(0.9, 1, 1, spec) == pytest.approx(
            0.3563902609868241 + 0.9343371885319258j, abs=1e-12
        )

    def test_breather_breather_symmetric_and_unitary(self):
        spec = make_model("bsg", 0.2)
        for m1, m2 in ((1, 2), (2, 3), (1, 3)):
            for theta in (0.6, -0.8):
                a = s_breather_breather(theta, m1, m2, spec)
                b = s_breather_breather(theta, m2, m1, spec)
                assert abs(a - b) < 1e-12
                assert abs(a * s_breather_breather(-theta, m1, m2, spec) - 1.0) < 1e-12

    def test_invalid_breather_index(self):
        spec = make_model("bsg", 1.0 / 3.0)
        with pytest.raises(DomainError):
            s_breather_soliton(0.5, 2, spec)
        with pytest.raises(DomainError):
            s_breather_breather(0.5, 1, 2, spec)

    def test_s_entry_diagonal_in_breather_content(self):
        spec = make_model("bsg", 0.2)
        b1, b2 = breather(1), breather(2)
        assert s_entry(b1, b2, b2, b1, 0.5, spec) == 0.0
        val = s_entry(b1, b2, b1, b2, 0.5, spec)
        assert val == pytest.approx(s_breather_breather(0.5, 1, 2, spec), abs=1e-14)
        assert s_entry(b1, SOLITON, b1, SOLITON, 0.5, spec) == pytest.approx(
            s_breather_soliton(0.5, 1, spec), abs=1e-14
        )


class TestRightLeftLimit:
    def test_soliton_phases_z_third(self):
        spec = make_model("bsg", 1.0 / 3.0)
        assert s_rl_limit(SOLITON, SOLITON, spec) == pytest.approx(1j, abs=1e-14)
        assert s_rl_limit(SOLITON, ANTISOLITON, spec) == pytest.approx(
            -1j, abs=1e-14
        )

    def test_breather_is_transparent(self):
        spec = make_model("bsg", 1.0 / 3.0)
        assert s_rl_limit(breather(1), SOLITON, spec) == 1.0
        assert s_rl_limit(SOLITON, breather(1), spec) == 1.0

    def test_free_fermion_point(self):
        spec = make_model("bsg", 0.5)
        assert s_rl_limit(SOLITON, SOLITON, spec) == pytest.approx(-1.0, abs=1e-14)
