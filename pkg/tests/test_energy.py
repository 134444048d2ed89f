"""Tests for the power and flight-energy model."""

from __future__ import annotations

import pytest

from swarmnav.energy import PowerModel, e_fly, trial_energy


class TestPowerModel:
    def test_constant_default(self):
        model = PowerModel()
        assert model.power(5.0) == 200.0
        assert model.power(12.0) == 200.0

    def test_quadratic_coefficients(self):
        model = PowerModel(c0=100.0, c1=2.0, c2=0.5)
        assert model.power(10.0) == pytest.approx(100.0 + 20.0 + 50.0)

    def test_rejects_non_positive_speed(self):
        with pytest.raises(ValueError):
            PowerModel().power(0.0)
        with pytest.raises(ValueError):
            PowerModel().power(-3.0)

    def test_rejects_non_positive_power(self):
        model = PowerModel(c0=10.0, c1=-20.0, c2=0.0)
        with pytest.raises(ValueError):
            model.power(1.0)


class TestEFly:
    def test_zero_distance(self):
        assert e_fly(PowerModel(), 0.0, 5.0) == 0.0

    def test_constant_power_example(self):
        # 100 m at 5 m/s takes 20 s at 200 W
        assert e_fly(PowerModel(c0=200.0), 100.0, 5.0) == pytest.approx(4000.0)

    def test_linear_in_distance(self):
        model = PowerModel()
        assert e_fly(model, 200.0, 5.0) == pytest.approx(2 * e_fly(model, 100.0, 5.0))

    def test_constant_power_inverse_in_speed(self):
        model = PowerModel()
        assert e_fly(model, 100.0, 10.0) == pytest.approx(e_fly(model, 100.0, 5.0) / 2)

    def test_additivity_exact(self):
        model = PowerModel(c0=150.0, c1=1.0, c2=0.25)
        parts = [12.5, 30.0, 57.25]
        assert e_fly(model, sum(parts), 6.0) == pytest.approx(
            sum(e_fly(model, d, 6.0) for d in parts), abs=1e-9
        )

    def test_rejects_negative_distance(self):
        with pytest.raises(ValueError):
            e_fly(PowerModel(), -1.0, 5.0)

    def test_rejects_bad_speed(self):
        with pytest.raises(ValueError):
            e_fly(PowerModel(), 10.0, 0.0)


class TestTrialEnergy:
    def test_single_vehicle(self):
        assert trial_energy(PowerModel(c0=200.0), 100.0, 5.0, 1) == pytest.approx(4000.0)

    def test_linear_in_swarm_size(self):
        assert trial_energy(PowerModel(c0=200.0), 100.0, 5.0, 3) == pytest.approx(12000.0)
        assert trial_energy(PowerModel(c0=200.0), 100.0, 5.0, 5) == pytest.approx(
            5 * 200.0 * 100.0 / 5.0
        )

    def test_monotone_in_distance_and_m(self):
        model = PowerModel()
        assert trial_energy(model, 50.0, 5.0, 2) < trial_energy(model, 60.0, 5.0, 2)
        assert trial_energy(model, 50.0, 5.0, 2) < trial_energy(model, 50.0, 5.0, 3)

    def test_rejects_bad_m(self):
        with pytest.raises(ValueError):
            trial_energy(PowerModel(), 10.0, 5.0, 0)
