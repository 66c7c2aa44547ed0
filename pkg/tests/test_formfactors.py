import cmath
import math

import pytest

from bscat.errors import DomainError
from bscat.formfactors import (
    bigF,
    c_const,
    exp_I,
    f_111,
    f_12,
    f_breather1,
    f_pm,
    f_pm1,
    f_pmpm,
    r0_weights,
    zeta,
)
from bscat.model import make_model
from bscat.smatrix import s0, s_breather_breather, s_breather_soliton

SPEC3 = make_model("bsg", 1.0 / 3.0)
SPEC4 = make_model("bsg", 0.25)
SPEC5 = make_model("bsg", 0.2)
SPEC_HALF = make_model("bsg", 0.5)


class TestBuildingBlocks:
    def test_exp_I_frozen(self):
        assert exp_I(0.7, SPEC3) == pytest.approx(
            0.5797734079090228 + 0.19502159567712796j, abs=1e-11
        )

    def test_exp_I_truncation_independence(self):
        for lam in (0.3, -0.6, 0.3 + 0.2j):
            ref = exp_I(lam, SPEC3, N=20)
            for n in (5, 10):
                assert abs(exp_I(lam, SPEC3, N=n) - ref) < 1e-10

    def test_bigF_truncation_independence(self):
        for lam in (0.7, -0.4):
            ref = bigF(lam, SPEC3, N=20)
            for n in (5, 10):
                assert abs(bigF(lam, SPEC3, N=n) - ref) < 1e-10

    def test_c_const_frozen(self):
        assert c_const(SPEC3) == pytest.approx(2.2511051861189615, rel=1e-10)

    def test_zeta_composition(self):
        lam = 0.9
        expected = c_const(SPEC3) * cmath.sinh(lam / 2.0) * exp_I(lam, SPEC3)
        assert zeta(lam, SPEC3) == pytest.approx(expected, rel=1e-12)


class TestLorentzCovariance:
    """All form factors carry Lorentz spin 1: shifting every rapidity by a
    real constant a multiplies the value by e^a."""

    A = 0.3

    def check(self, f0, fa):
        assert fa == pytest.approx(math.exp(self.A) * f0, rel=1e-10)

    def test_f_pm(self):
        self.check(f_pm(0.4, -0.3, SPEC3), f_pm(0.4 + self.A, -0.3 + self.A, SPEC3))

    def test_f_breather1(self):
        self.check(
            f_breather1(1, 0.2, SPEC3), f_breather1(1, 0.2 + self.A, SPEC3)
        )

    def test_f_111(self):
        self.check(
            f_111(0.4, -0.3, 0.2, SPEC5),
            f_111(0.4 + self.A, -0.3 + self.A, 0.2 + self.A, SPEC5),
        )

    def test_f_12(self):
        self.check(
            f_12(0.4, -0.3, SPEC4), f_12(0.4 + self.A, -0.3 + self.A, SPEC4)
        )

    def test_f_pmpm(self):
        self.check(
            f_pmpm(0.4, -0.3, 0.9, 0.1, SPEC3),
            f_pmpm(0.4 + self.A, -0.3 + self.A, 0.9 + self.A, 0.1 + self.A, SPEC3),
        )

    def test_f_pm1(self):
        self.check(
            f_pm1(0.4, -0.3, 0.9, SPEC3),
            f_pm1(0.4 + self.A, -0.3 + self.A, 0.9 + self.A, SPEC3),
        )


class TestExchangeAxiom:
    @pytest.mark.parametrize("spec", [SPEC3, SPEC4], ids=["p3", "p4"])
    def test_f_pm_watson(self, spec):
        p = spec.p_int
        for l1, l2 in ((0.4, -0.3), (1.2, 0.1), (-0.8, 0.9)):
            lhs = f_pm(l1, l2, spec)
            rhs = (-1.0) ** (p + 1) * s0(l2 - l1, spec) * f_pm(l2, l1, spec)
            assert abs(lhs - rhs) / abs(lhs) < 1e-8

    def test_f_111_exchange(self):
        for l1, l2, l3 in ((0.4, -0.3, 0.2), (1.1, 0.5, -0.6)):
            lhs = f_111(l1, l2, l3, SPEC5)
            rhs = s_breather_breather(l2 - l1, 1, 1, SPEC5) * f_111(
                l2, l1, l3, SPEC5
            )
            assert abs(lhs - rhs) / abs(lhs) < 1e-8

    def test_f_pm_conjugation(self):
        # on real rapidities conj(f_+-(l1,l2)) = f_-+(l2,l1) = -f_+-(l2,l1)
        for l1, l2 in ((0.4, -0.3), (1.2, 0.1)):
            lhs = f_pm(l1, l2, SPEC3).conjugate()
            assert lhs == pytest.approx(-f_pm(l2, l1, SPEC3), rel=1e-10)


class TestKinematicPole:
    @pytest.mark.parametrize("spec", [SPEC3, SPEC4], ids=["p3", "p4"])
    def test_residue_structure(self, spec):
        """The annihilation pole of f_pm1 at l2 = l1 + i pi has residue
        proportional to (1 - S_breather-soliton(l1 - l3)) f_breather1(l3),
        with a kinematics-independent unimodular constant."""
        eps = 1e-7
        consts = []
        for l1, l3 in ((0.3, -0.4), (-0.6, 0.8), (1.1, 0.2)):
            f = f_pm1(l1, l1 + 1j * (math.pi - eps), l3, spec)
            residue = 1j * eps * f
            target = (1.0 - s_breather_soliton(l1 - l3, 1, spec)) * f_breather1(
                1, l3, spec
            )
            consts.append(residue / target)
        for c in consts:
            assert abs(c - consts[0]) < 1e-6
            assert abs(abs(c) - 1.0) < 1e-6

    def test_residue_constant_frozen(self):
        eps = 1e-7
        for spec, expected in ((SPEC3, -1.0), (SPEC4, 1.0)):
            f = f_pm1(0.3, 0.3 + 1j * (math.pi - eps), -0.4, spec)
            residue = 1j * eps * f
            target = (1.0 - s_breather_soliton(0.7, 1, spec)) * f_breather1(
                1, -0.4, spec
            )
            c = residue / target
            assert c == pytest.approx(
                expected * cmath.exp(1j * math.pi / 4.0), abs=1e-5
            )


class TestFreeFermionPoint:
    def test_f_pm_closed_form(self):
        for l1, l2 in ((0.4, -0.3), (1.0, 0.2)):
            closed = -2j * math.pi * cmath.exp((l1 + l2) / 2.0)
            assert f_pm(l1, l2, SPEC_HALF) == pytest.approx(closed, rel=1e-10)

    def test_four_excitation_factors_vanish(self):
        assert f_pmpm(0.4, -0.3, 0.9, 0.1, SPEC_HALF) == 0.0
        assert f_pm1(0.4, -0.3, 0.9, SPEC_HALF) == 0.0


class TestFrozenValues:
    def test_f_breather1(self):
        val = f_breather1(1, 0.0, SPEC3)
        assert val == pytest.approx(3.4184537570354805 + 0.0j, rel=1e-9)

    def test_f_pmpm(self):
        assert f_pmpm(0.4, -0.3, 0.9, 0.1, SPEC3) == pytest.approx(
            -0.02938963535640173 + 0.03540121005805403j, rel=1e-8
        )

    def test_f_pm1(self):
        assert f_pm1(0.4, -0.3, 0.9, SPEC3) == pytest.approx(
            -0.3238171109493235 - 0.4190372006995321j, rel=1e-8
        )

    def test_f_111(self):
        assert f_111(0.4, -0.3, 0.2, SPEC5) == pytest.approx(
            -0.061302933850241964 - 0.030587015608126118j, rel=1e-8
        )

    def test_f_12_finite_at_origin(self):
        val = f_12(0.0, 0.0, SPEC4)
        assert val == pytest.approx(-0.1837500932168543j, abs=1e-7)


class TestTruncationWeights:
    def test_z_third(self):
        w = r0_weights(SPEC3)
        assert set(w) == {"m1", "pm", "pm1"}
        assert w["m1"] == pytest.approx(0.9299284930874943, rel=1e-10)
        assert w["pm"] == pytest.approx(0.06824025892080751, rel=1e-8)
        assert w["pm1"] == pytest.approx(0.001716289731693243, rel=1e-5)

    def test_z_half_is_saturated_by_the_pair(self):
        w = r0_weights(SPEC_HALF)
        assert set(w) == {"pm"}
        assert w["pm"] == pytest.approx(1.0, abs=1e-10)

    def test_non_integer_p_drops_mixed_set(self):
        w = r0_weights(make_model("bsg", 0.47))
        assert set(w) == {"m1", "pm"}
        assert sum(w.values()) == pytest.approx(1.0, abs=5e-2)

    def test_breather_pole_reported(self):
        with pytest.raises(DomainError):
            # coinciding soliton rapidities at the breather bound-state pole
            f_pm(0.0, -1j * (math.pi - SPEC3.xi), SPEC3)
