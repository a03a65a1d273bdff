import cmath
import math

import numpy as np
import pytest

from spincavity.params import Topology, default_params
from spincavity.spectra import (
    CAVITY_COLD,
    CAVITY_HOT,
    METHOD_MASTER_EQUATION,
    METHOD_SEMICLASSICAL,
    SpectrumRow,
    SpectrumTable,
    dressed_eigenvalues,
    faraday_rotation,
    nonsaturation_window,
    phase_shift_detuning,
    power_sweep,
    saturation_spectrum,
    sweep_spectrum,
    wrap_phase,
)

GRID9 = np.linspace(-3.0, 3.0, 9)


class TestWrapPhase:
    def test_identity_inside_interval(self):
        assert wrap_phase(1.2) == pytest.approx(1.2)
        assert wrap_phase(-3.0) == pytest.approx(-3.0)

    def test_wraps_past_pi(self):
        assert wrap_phase(math.pi + 0.3) == pytest.approx(-math.pi + 0.3)
        assert wrap_phase(-math.pi - 0.3) == pytest.approx(math.pi - 0.3)

    def test_half_open_interval(self):
        assert wrap_phase(math.pi) == pytest.approx(math.pi)
        assert wrap_phase(-math.pi) == pytest.approx(math.pi)

    def test_many_turns(self):
        assert wrap_phase(0.4 + 12 * math.pi) == pytest.approx(0.4, abs=1e-12)


class TestSpectrumTable:
    def make(self):
        rows = tuple(
            SpectrumRow(
                omega_detuning=float(i),
                power_norm=0.1,
                method=METHOD_SEMICLASSICAL,
                cavity=CAVITY_HOT if i % 2 else CAVITY_COLD,
                sigma_z=-1.0 + 0.1 * i,
            )
            for i in range(6)
        )
        return SpectrumTable(rows)

    def test_select_filters(self):
        table = self.make()
        hot = table.select(cavity=CAVITY_HOT)
        assert len(hot) == 3
        assert all(row.cavity == CAVITY_HOT for row in hot.rows)

    def test_column_extracts_values(self):
        table = self.make()
        np.testing.assert_allclose(table.column("omega_detuning"), np.arange(6.0))

    def test_select_chain(self):
        table = self.make()
        assert len(table.select(cavity=CAVITY_COLD).select(omega_detuning=2.0)) == 1


class TestSweepSpectrum:
    def test_row_count_and_partition(self):
        p = default_params()
        table = sweep_spectrum(p, [1e-3], GRID9, methods=(METHOD_SEMICLASSICAL,))
        assert len(table) == 2 * len(GRID9)
        assert len(table.select(cavity=CAVITY_HOT)) == len(GRID9)
        assert len(table.select(cavity=CAVITY_COLD)) == len(GRID9)

    def test_cold_rows_replicate_linearly_across_powers(self):
        p = default_params()
        table = sweep_spectrum(
            p, [1e-3, 1e-2], GRID9, methods=(METHOD_SEMICLASSICAL,)
        )
        lo = table.select(cavity=CAVITY_COLD, power_norm=1e-3)
        hi = table.select(cavity=CAVITY_COLD, power_norm=1e-2)
        np.testing.assert_array_equal(lo.column("r"), hi.column("r"))
        np.testing.assert_allclose(
            hi.column("n_cavity"), 10.0 * lo.column("n_cavity"), rtol=1e-12
        )

    def test_methods_agree_at_weak_excitation(self):
        # the solver gap is first order in power, so deep in the linear
        # regime the two methods coincide well inside 1e-2
        p = default_params()
        table = sweep_spectrum(p, [1e-4], GRID9, cavities=(CAVITY_HOT,))
        r_sc = table.select(method=METHOD_SEMICLASSICAL).column("r")
        r_qo = table.select(method=METHOD_MASTER_EQUATION).column("r")
        assert np.abs(r_sc - r_qo).max() < 1e-2

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            sweep_spectrum(default_params(), [1e-3], [])
        with pytest.raises(ValueError):
            sweep_spectrum(default_params(), [], GRID9)

    def test_non_increasing_grid_rejected(self):
        with pytest.raises(ValueError):
            sweep_spectrum(default_params(), [1e-3], [0.0, 1.0, 1.0])

    def test_error_rows_instead_of_exceptions(self):
        # a tiny cutoff cap cannot hold the required Fock space
        p = default_params()
        table = sweep_spectrum(
            p,
            [1e-3],
            [0.0],
            methods=(METHOD_MASTER_EQUATION,),
            cavities=(CAVITY_HOT,),
            cutoff_cap=4,
        )
        row = table.rows[0]
        assert row.error is not None
        assert row.r is None


class TestFaradayRotation:
    def test_antisymmetric_in_detuning(self):
        p = default_params()
        table = sweep_spectrum(p, [1e-3], GRID9, methods=(METHOD_SEMICLASSICAL,))
        gfr = {(d, m): angle for d, _, m, angle in faraday_rotation(table)}
        for delta in (1.5, 2.25, 3.0):
            plus = gfr[(delta, METHOD_SEMICLASSICAL)]
            minus = gfr[(-delta, METHOD_SEMICLASSICAL)]
            assert plus == pytest.approx(-minus, abs=1e-10)

    def test_half_of_phase_difference(self):
        p = default_params()
        table = sweep_spectrum(p, [1e-3], [0.75], methods=(METHOD_SEMICLASSICAL,))
        hot = table.select(cavity=CAVITY_HOT).rows[0]
        cold = table.select(cavity=CAVITY_COLD).rows[0]
        expected = wrap_phase(cmath.phase(cold.r) - cmath.phase(hot.r)) / 2.0
        (_, _, _, angle), = faraday_rotation(table)
        assert angle == pytest.approx(expected, abs=1e-14)

    def test_missing_cold_counterpart_raises(self):
        p = default_params()
        table = sweep_spectrum(
            p, [1e-3], [0.0], methods=(METHOD_SEMICLASSICAL,), cavities=(CAVITY_HOT,)
        )
        with pytest.raises(KeyError):
            faraday_rotation(table)


class TestSaturationSpectrum:
    def test_hot_only(self):
        p = default_params()
        table = saturation_spectrum(p, [1e-3], GRID9, methods=(METHOD_SEMICLASSICAL,))
        assert len(table.select(cavity=CAVITY_COLD)) == 0
        assert len(table.select(cavity=CAVITY_HOT)) == len(GRID9)

    def test_unsaturated_at_low_power(self):
        p = default_params()
        table = saturation_spectrum(p, [1e-3], GRID9, methods=(METHOD_SEMICLASSICAL,))
        assert table.column("sigma_z").max() < -0.95


class TestNonsaturationWindow:
    def test_open_window(self):
        grid = np.linspace(-2, 2, 9)
        values = np.where(np.abs(grid) < 1.2, -0.99, -0.3)
        assert nonsaturation_window(grid, values) == (-1.0, 1.0)

    def test_closed_window(self):
        grid = np.linspace(-2, 2, 9)
        assert nonsaturation_window(grid, np.full(9, -0.5)) is None

    def test_window_clipped_to_grid(self):
        grid = np.linspace(-2, 2, 9)
        assert nonsaturation_window(grid, np.full(9, -0.99)) == (-2.0, 2.0)

    def test_disconnected_region_ignored(self):
        grid = np.linspace(-3, 3, 7)
        values = np.array([-0.99, -0.3, -0.99, -0.99, -0.99, -0.3, -0.99])
        assert nonsaturation_window(grid, values) == (-1.0, 1.0)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            nonsaturation_window([0.0, 1.0], [-1.0])


class TestPowerSweep:
    def test_saturation_monotone_in_power(self):
        p = default_params()
        powers = np.geomspace(1e-3, 10, 12)
        table = power_sweep(
            p, 0.0, powers, methods=(METHOD_SEMICLASSICAL,), cavities=(CAVITY_HOT,)
        )
        sz = table.column("sigma_z")
        assert np.all(np.diff(sz) >= -1e-12)
        assert sz[0] < -0.99
        assert sz[-1] > -0.1

    def test_cold_rows_power_independent(self):
        p = default_params()
        table = power_sweep(
            p,
            0.0,
            [1e-3, 1e-1, 10.0],
            methods=(METHOD_SEMICLASSICAL,),
            cavities=(CAVITY_COLD,),
        )
        r = table.column("r")
        assert np.all(r == r[0])

    def test_empty_power_grid_rejected(self):
        with pytest.raises(ValueError):
            power_sweep(default_params(), 0.0, [])


class TestDressedEigenvalues:
    def test_first_manifold_oracle(self):
        # defaults: center omega0 - i (kappa_tot + gamma)/4, split
        # sqrt(g^2 - ((kappa_tot - gamma)/4)^2)
        levels = dressed_eigenvalues(default_params(), n_max=1)
        assert len(levels) == 2
        minus, plus = sorted(levels, key=lambda l: l.sign)
        assert plus.eigenvalue.real == pytest.approx(2.3894298483110985, abs=1e-12)
        assert minus.eigenvalue.real == pytest.approx(-2.3894298483110985, abs=1e-12)
        assert plus.eigenvalue.imag == pytest.approx(-0.275, abs=1e-12)

    def test_closed_form_matches_diagonalization(self):
        for g in (2.4, 9.6):
            for level in dressed_eigenvalues(default_params(g=g), n_max=3):
                assert abs(level.eigenvalue - level.eigenvalue_diag) < 1e-10

    def test_probe_resonance_divides_by_order(self):
        for level in dressed_eigenvalues(default_params(), n_max=3):
            assert level.probe_resonance == pytest.approx(
                level.eigenvalue.real / level.order
            )

    def test_weak_coupling_flagged(self):
        levels = dressed_eigenvalues(default_params(g=0.1), n_max=1)
        assert all(level.weak_coupling for level in levels)
        assert all(level.eigenvalue.real == 0.0 for level in levels)

    def test_strong_coupling_not_flagged(self):
        assert not any(
            level.weak_coupling for level in dressed_eigenvalues(default_params(), 3)
        )

    def test_invalid_inputs_rejected(self):
        with pytest.raises(ValueError):
            dressed_eigenvalues(default_params(), 0)
        with pytest.raises(ValueError):
            dressed_eigenvalues(default_params(detuning_x=0.5), 1)


class TestPhaseShiftDetuning:
    def test_low_power_value(self):
        delta = phase_shift_detuning(default_params(), 1e-3)
        assert delta == pytest.approx(0.30066409, abs=1e-6)

    def test_shift_at_solution_is_target(self):
        import spincavity.semiclassical as sc
        from spincavity.params import Drive

        p = default_params()
        delta = phase_shift_detuning(p, 1e-3, target=math.pi / 2)
        drive = Drive(omega=p.omega_c + delta * p.kappa_tot, power_norm=1e-3)
        s = sc.solve_self_consistent(drive, p)[0].sigma_z
        r_hot = sc.reflection_sc(p, drive, s)
        r_cold = sc.reflection_sc(p.cold(), drive, -1.0)
        shift = abs(wrap_phase(cmath.phase(r_cold) - cmath.phase(r_hot)))
        assert shift == pytest.approx(math.pi / 2, abs=1e-9)

    def test_unreachable_target_raises(self):
        with pytest.raises(ValueError):
            phase_shift_detuning(default_params(g=0.05), 1e-3)


class TestDoubleSided:
    def test_transmission_blocked_on_resonance_when_unsaturated(self):
        p = default_params(Topology.DOUBLE_SIDED)
        table = sweep_spectrum(
            p, [1e-3], [0.0], methods=(METHOD_SEMICLASSICAL,), cavities=(CAVITY_HOT,)
        )
        row = table.rows[0]
        assert abs(row.r) > 0.99
        assert abs(row.t) < 0.01

    def test_cold_resonance_values(self):
        p = default_params(Topology.DOUBLE_SIDED)
        table = sweep_spectrum(
            p, [1e-3], [0.0], methods=(METHOD_SEMICLASSICAL,), cavities=(CAVITY_COLD,)
        )
        row = table.rows[0]
        assert abs(row.t) == pytest.approx(0.8, abs=1e-10)
        assert abs(row.r) == pytest.approx(0.2, abs=1e-10)
