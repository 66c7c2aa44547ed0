import cmath
import math

import pytest

from bscat.errors import DomainError
from bscat.model import ModelKind
from bscat.quadrature import adaptive_1d
from bscat.referm import (
    RefermParams,
    conductance_finite_T,
    make_referm_params,
    r_half_closed,
    spectrum_half,
)

BSG = ModelKind.BoundarySineGordon
KONDO = ModelKind.Kondo


class TestClosedForm:
    def test_bsg_unit_frequency(self):
        assert r_half_closed(1.0, BSG) == pytest.approx(
            1.0 - 2j * cmath.log(1.0 - 1j), abs=1e-15
        )

    def test_kondo_frozen(self):
        assert r_half_closed(1.0, KONDO) == pytest.approx(
            -0.18283627516591494 + 0.9793781892119391j, abs=1e-14
        )

    def test_limits(self):
        assert abs(r_half_closed(1e6, BSG) - 1.0) < 1e-4
        assert abs(r_half_closed(1e-6, BSG) - (-1.0)) < 1e-4
        assert abs(r_half_closed(1e-6, KONDO) - 1.0) < 1e-4

    def test_subunitary(self):
        for model in (BSG, KONDO):
            for omega in (0.05, 0.7, 3.0, 40.0):
                assert abs(r_half_closed(omega, model)) < 1.0

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(DomainError):
            r_half_closed(0.0, BSG)


class TestFiniteTemperature:
    def test_zero_temperature_reduction(self):
        for model in (BSG, KONDO):
            for omega in (0.3, 1.0, 5.0):
                a = conductance_finite_T(omega, 0.0, model)
                b = r_half_closed(omega, model)
                assert abs(a - b) < 1e-10

    def test_frozen_regressions(self):
        assert conductance_finite_T(1.0, 0.5, KONDO) == pytest.approx(
            0.189906920759341 + 0.8765576814549791j, abs=1e-12
        )
        assert conductance_finite_T(1.0, 0.5, BSG) == pytest.approx(
            -0.28160422107530847 - 0.3718142385131692j, abs=1e-12
        )

    def test_thermal_smearing_reduces_reflection(self):
        cold = abs(conductance_finite_T(0.1, 0.0, BSG))
        hot = abs(conductance_finite_T(0.1, 2.0, BSG))
        assert hot < cold

    def test_rejects_negative_temperature(self):
        with pytest.raises(DomainError):
            conductance_finite_T(1.0, -0.1, BSG)


class TestSpectrum:
    def test_frozen_values(self):
        assert spectrum_half(0.3, 1.0, BSG) == pytest.approx(
            0.7177769911288248, rel=1e-10
        )
        assert spectrum_half(0.3, 1.0, KONDO) == pytest.approx(
            0.046639038062904786, rel=1e-10
        )

    def test_positive(self):
        for model in (BSG, KONDO):
            for u in (0.05, 0.3, 0.7, 0.95):
                assert spectrum_half(u * 2.0, 2.0, model) > 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            spectrum_half(1.0, 1.0, BSG)
        with pytest.raises(DomainError):
            spectrum_half(-0.1, 1.0, BSG)

    @pytest.mark.parametrize("model", [BSG, KONDO], ids=["bsg", "kondo"])
    @pytest.mark.parametrize("omega", [0.1, 1.0, 10.0])
    def test_energy_conservation(self, model, omega):
        """The energy carried by the spectrum equals the inelastic loss
        omega (1 - |r|^2), both in closed form."""

        def f(u):
            omega_p = omega * u * u
            if omega_p <= 0.0 or omega_p >= omega:
                return 0.0
            return omega_p * spectrum_half(omega_p, omega, model) * 2.0 * omega * u

        lhs = adaptive_1d(f, 0.0, 1.0, tol=1e-9 * omega).value.real
        rhs = omega * (1.0 - abs(r_half_closed(omega, model)) ** 2)
        assert lhs == pytest.approx(rhs, rel=1e-6)


class TestParams:
    def test_factory_sets_hybridization_scale(self):
        assert make_referm_params(BSG).lambda_cut == 0.5
        assert make_referm_params(KONDO).lambda_cut == 2.0

    def test_wrong_scale_rejected(self):
        with pytest.raises(DomainError):
            RefermParams(model=BSG, lambda_cut=1.0)

    def test_negative_temperature_rejected(self):
        with pytest.raises(DomainError):
            make_referm_params(BSG, temperature=-1.0)
