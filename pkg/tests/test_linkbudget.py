"""Analytic detector-input power budgets for both architectures."""

import csv
import math
from dataclasses import replace

import numpy as np
import pytest

from fdsic.impairments import AdcSpec, AmplifierSpec
from fdsic.linkbudget import (
    BUDGET_CSV_COLUMNS,
    PowerBudget,
    TransceiverSpec,
    adc_snr_db,
    budget_proposed,
    budget_traditional,
    ideal_sinr_db,
    sweep_budget,
    write_budget_csv,
)
from fdsic.units import db_to_lin, dbm_to_watts, thermal_noise_watts, watts_to_dbm

P_TX_GRID = [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0]

FIELDS = [
    "g_rx_db",
    "p_soi_dbm",
    "p_n_dbm",
    "p_si_dbm",
    "p_si_im_dbm",
    "p_nl_tx_dbm",
    "p_nl_rx_dbm",
    "p_q_tot_dbm",
    "sinr_db",
]


class TestSpecValidation:
    def test_defaults_construct(self):
        spec = TransceiverSpec()
        assert spec.n_tx == 2 and spec.n_rx == 2
        assert spec.a_ant_db == 40.0 and spec.a_rf_db == 30.0
        assert math.isinf(spec.a_dig_db)

    def test_counts_validated(self):
        with pytest.raises(ValueError):
            TransceiverSpec(n_tx=0)

    def test_negative_attenuation_rejected(self):
        with pytest.raises(ValueError, match="a_rf_db"):
            TransceiverSpec(a_rf_db=-1.0)

    def test_inverted_vga_range_rejected(self):
        with pytest.raises(ValueError):
            TransceiverSpec(vga_range_db=(69.0, 0.0))

    def test_zero_intercept_is_configuration_error(self):
        spec = TransceiverSpec(pa=AmplifierSpec(gain_db=27.0, iip3_dbm=-math.inf))
        with pytest.raises(ValueError, match="iip3"):
            budget_proposed(spec)


class TestDegenerateCase:
    # No self-interference at all: RX gain and SINR have a two-line
    # hand evaluation.
    def spec(self):
        return TransceiverSpec(a_rf_db=math.inf, p_tx_dbm=-math.inf)

    def test_gain_is_target_over_input(self):
        budget = budget_proposed(self.spec())
        assert budget.g_rx_db == pytest.approx(-10.0 - (-83.9), abs=1e-9)

    def test_sinr_matches_hand_evaluation(self):
        budget = budget_proposed(self.spec())
        # hand arithmetic, dB domain
        p_soi = 1e-4
        p_n = db_to_lin(4.1) * thermal_noise_watts(12.5e6) * db_to_lin(73.9)
        p_q = 1e-4 * 3.0 / db_to_lin(6.02 * 12 + 4.76 - 10.0)
        hand = 10 * math.log10(p_soi / (p_n + p_q))
        assert budget.sinr_db == pytest.approx(hand, abs=0.01)
        assert budget.p_si_dbm == -math.inf
        assert budget.p_nl_tx_dbm == -math.inf
        assert budget.p_si_im_dbm == -math.inf


class TestGainIdentity:
    # The AGC definition makes gain times total antenna-referred input
    # power equal the ADC target exactly, at every operating point.
    def test_identity_across_grid(self):
        spec = TransceiverSpec(a_dig_db=35.0)
        for p_tx_dbm in P_TX_GRID:
            s = replace(spec, p_tx_dbm=p_tx_dbm)
            b = budget_proposed(s)
            g = db_to_lin(b.g_rx_db)
            p_tx = dbm_to_watts(p_tx_dbm)
            iip3 = dbm_to_watts(15.0)
            g_pa = db_to_lin(27.0)
            denom = (2 * p_tx / db_to_lin(40.0)) * (
                1 / db_to_lin(30.0) + p_tx**2 / (db_to_lin(30.0) * iip3**2 * g_pa**2)
            ) + dbm_to_watts(-83.9)
            assert g * denom == pytest.approx(dbm_to_watts(-10.0), rel=1e-12)

    def test_adc_input_power_sums_to_target(self):
        # with 0 dB digital cancellation the three transmit-derived
        # terms plus the wanted signal reconstruct the ADC target
        spec = TransceiverSpec(a_dig_db=0.0)
        for p_tx_dbm in P_TX_GRID:
            b = budget_proposed(replace(spec, p_tx_dbm=p_tx_dbm))
            total = (
                dbm_to_watts(b.p_si_dbm)
                + dbm_to_watts(b.p_nl_tx_dbm)
                + dbm_to_watts(b.p_soi_dbm)
            )
            assert watts_to_dbm(total) == pytest.approx(-10.0, abs=0.01)


class TestProposedBudget:
    def test_thermal_limited_at_low_power(self):
        for p_tx_dbm in [-5.0, 0.0, 5.0, 10.0]:
            b = budget_proposed(TransceiverSpec(p_tx_dbm=p_tx_dbm))
            others = [
                b.p_si_dbm,
                b.p_si_im_dbm,
                b.p_nl_tx_dbm,
                b.p_nl_rx_dbm,
                b.p_q_tot_dbm,
            ]
            assert b.p_n_dbm > max(others), f"not noise-limited at {p_tx_dbm} dBm"

    def test_rx_distortion_and_image_dominate_at_high_power(self):
        b = budget_proposed(TransceiverSpec(p_tx_dbm=25.0))
        interference = {
            "p_si": b.p_si_dbm,
            "p_si_im": b.p_si_im_dbm,
            "p_nl_tx": b.p_nl_tx_dbm,
            "p_nl_rx": b.p_nl_rx_dbm,
            "p_q_tot": b.p_q_tot_dbm,
        }
        top_two = sorted(interference, key=interference.get)[-2:]
        assert set(top_two) == {"p_nl_rx", "p_si_im"}

    def test_spot_values(self):
        # pinned against an independent evaluation of the same closed
        # forms (dB-domain arithmetic, separate code path)
        b15 = budget_proposed(TransceiverSpec(p_tx_dbm=15.0))
        assert b15.g_rx_db == pytest.approx(41.9869, abs=0.01)
        assert b15.p_n_dbm == pytest.approx(-56.9192, abs=0.01)
        assert b15.sinr_db == pytest.approx(14.5609, abs=0.01)
        b25 = budget_proposed(TransceiverSpec(p_tx_dbm=25.0))
        assert b25.g_rx_db == pytest.approx(31.9877, abs=0.01)
        assert b25.p_nl_rx_dbm == pytest.approx(-67.9726, abs=0.01)
        assert b25.sinr_db == pytest.approx(10.5092, abs=0.01)


class TestTraditionalBudget:
    def test_tx_distortion_dominates_noise_at_5dbm(self):
        b = budget_traditional(TransceiverSpec(p_tx_dbm=5.0))
        combined = dbm_to_watts(b.p_si_im_dbm) + dbm_to_watts(b.p_nl_tx_dbm)
        assert watts_to_dbm(combined) > b.p_n_dbm

    def test_rx_distortion_identical_between_variants(self):
        for p_tx_dbm in P_TX_GRID:
            spec = TransceiverSpec(p_tx_dbm=p_tx_dbm)
            a = budget_proposed(spec).p_nl_rx_dbm
            b = budget_traditional(spec).p_nl_rx_dbm
            assert a == pytest.approx(b, abs=0.3)

    def test_spot_values(self):
        b = budget_traditional(TransceiverSpec(p_tx_dbm=15.0))
        assert b.p_si_im_dbm == pytest.approx(-35.0008, abs=0.01)
        assert b.p_nl_tx_dbm == pytest.approx(-64.0028, abs=0.01)
        assert b.sinr_db == pytest.approx(-6.9460, abs=0.01)

    def test_unity_digital_cancellation_budgets_coincide(self):
        # with 0 dB cancellation the signal-path terms match exactly;
        # only the quantization total differs, by the auxiliary-ADC
        # contribution (factor 1 + n_tx with equal converters)
        spec = TransceiverSpec(a_dig_db=0.0, p_tx_dbm=10.0)
        a = budget_proposed(spec)
        b = budget_traditional(spec)
        for name in FIELDS:
            if name in ("p_q_tot_dbm", "sinr_db"):
                continue
            assert getattr(a, name) == pytest.approx(getattr(b, name), abs=1e-9), name
        assert a.p_q_tot_dbm - b.p_q_tot_dbm == pytest.approx(
            10 * math.log10(3.0), abs=1e-9
        )


class TestProperties:
    def test_target_scaling(self):
        # shift the ADC target: every absolute level follows, the SINR
        # does not
        base = TransceiverSpec(a_dig_db=35.0, p_tx_dbm=10.0)
        shifted = replace(
            base,
            adc_main=AdcSpec(bits=12, papr_headroom_db=10.0, target_power_dbm=-3.0),
            adc_ref=AdcSpec(bits=12, papr_headroom_db=10.0, target_power_dbm=-3.0),
        )
        a = budget_proposed(base)
        b = budget_proposed(shifted)
        for name in FIELDS:
            if name == "sinr_db":
                assert a.sinr_db == pytest.approx(b.sinr_db, abs=1e-9)
            else:
                assert getattr(b, name) - getattr(a, name) == pytest.approx(
                    7.0, abs=1e-9
                ), name

    def test_infinite_image_rejection_kills_image_term(self):
        spec = TransceiverSpec(irr_tx_db=math.inf, irr_rx_db=math.inf, a_dig_db=35.0)
        assert budget_proposed(spec).p_si_im_dbm == -math.inf
        assert budget_traditional(spec).p_si_im_dbm == -math.inf

    def test_ideal_pa_removes_tx_distortion(self):
        spec = TransceiverSpec(
            pa=AmplifierSpec(gain_db=27.0, iip3_dbm=None, nf_db=5.0), a_dig_db=35.0
        )
        b = budget_traditional(spec)
        assert b.p_nl_tx_dbm == -math.inf
        # and the gain reverts to the distortion-free form
        p_tx = dbm_to_watts(spec.p_tx_dbm)
        denom = 2 * p_tx / db_to_lin(70.0) + dbm_to_watts(-83.9)
        expected = 10 * math.log10(dbm_to_watts(-10.0) / denom)
        assert b.g_rx_db == pytest.approx(expected, abs=1e-9)

    def test_proposed_beats_traditional_everywhere(self):
        for p_tx_dbm in P_TX_GRID:
            spec = TransceiverSpec(p_tx_dbm=p_tx_dbm)
            assert budget_proposed(spec).sinr_db > budget_traditional(spec).sinr_db

    def test_gain_non_increasing_in_transmit_power(self):
        gains = [b.g_rx_db for b in sweep_budget(TransceiverSpec(), P_TX_GRID)]
        assert all(g1 <= g0 + 1e-9 for g0, g1 in zip(gains, gains[1:]))

    def test_soi_level_drops_once_gain_drops(self):
        budgets = sweep_budget(TransceiverSpec(), P_TX_GRID, "proposed")
        soi = [b.p_soi_dbm for b in budgets]
        assert soi[-1] < soi[0] - 20


class TestHelpers:
    def test_adc_snr(self):
        assert adc_snr_db(AdcSpec(bits=12, papr_headroom_db=10.0)) == pytest.approx(
            67.0, abs=0.01
        )

    def test_ideal_sinr_default_spec(self):
        assert ideal_sinr_db(TransceiverSpec()) == pytest.approx(15.006, abs=0.01)

    def test_sweep_single_point_matches_direct(self):
        spec = TransceiverSpec()
        [swept] = sweep_budget(spec, [15.0], "traditional")
        assert swept == budget_traditional(replace(spec, p_tx_dbm=15.0))

    def test_sweep_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            sweep_budget(TransceiverSpec(), [])

    def test_sweep_rejects_unknown_variant(self):
        with pytest.raises(ValueError, match="variant"):
            sweep_budget(TransceiverSpec(), [0.0], "blended")


class TestCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "budget.csv"
        write_budget_csv(path, TransceiverSpec(), P_TX_GRID)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2 * len(P_TX_GRID)
        assert list(rows[0].keys()) == list(BUDGET_CSV_COLUMNS)
        first = rows[0]
        assert first["variant"] == "proposed"
        b = budget_proposed(TransceiverSpec(p_tx_dbm=-5.0))
        assert float(first["sinr_db"]) == pytest.approx(b.sinr_db, abs=1e-6)
        # absent terms serialize as -inf and parse back
        assert float(first["p_si_dbm"]) == -math.inf

    def test_rewrite_is_byte_identical(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        write_budget_csv(a, TransceiverSpec(), P_TX_GRID)
        write_budget_csv(b, TransceiverSpec(), P_TX_GRID)
        assert a.read_bytes() == b.read_bytes()
