"""End-to-end acceptance checks for the shipped behaviors.

Each test evaluates one headline requirement on the default scenario
and records a single PASS/FAIL summary line with the measured numbers.
The two sweep campaigns are simulated once per session and shared.
"""

from dataclasses import replace

import numpy as np
import pytest

from fdsic.bounds import CrlbInput, crlb_per_tap, required_samples
from fdsic.calibration import run_validation
from fdsic.config import ScenarioConfig
from fdsic.harness import aggregate_sinr, run_experiment
from fdsic.linkbudget import budget_proposed, budget_traditional, ideal_sinr_db
from fdsic.units import dbm_to_watts


@pytest.fixture(scope="session")
def ptx_sweep(tmp_path_factory):
    """Transmit-power sweep, all four cancellers, default scenario."""
    out = tmp_path_factory.mktemp("acceptance") / "ptx.csv"
    cfg = replace(ScenarioConfig(), experiment="sinr-vs-ptx", output=str(out))
    rows = run_experiment(cfg)
    return cfg, rows, out


@pytest.fixture(scope="session")
def sample_sweep(tmp_path_factory):
    """Estimation-window sweep, calibrated and uncalibrated, default scenario."""
    out = tmp_path_factory.mktemp("acceptance") / "nest.csv"
    cfg = replace(ScenarioConfig(), experiment="sinr-vs-n", output=str(out))
    rows = run_experiment(cfg)
    return cfg, rows, out


def mean_by(rows, **filters):
    values = [
        r.sinr_db
        for r in rows
        if all(getattr(r, k) == v for k, v in filters.items())
    ]
    assert values, filters
    return float(np.mean(values))


class TestAcceptance:
    def test_uncalibrated_sample_multiplier_at_fifteen_db_snr(
        self, acceptance_report
    ):
        snr = 10.0 ** (15.0 / 10.0)
        multiplier = required_samples(10**6, snr) / 10**6
        ok = abs(multiplier - 32.6) <= 0.1
        detail = (
            f"multiplier {multiplier:.4f} at 15 dB detector SNR"
            f" (expected 32.6 +/- 0.1); 4000 calibrated samples ->"
            f" {required_samples(4000, snr)} uncalibrated"
        )
        line = acceptance_report("sample-count multiplier", ok, detail)
        assert ok, line

    def test_calibrated_sinr_saturates_by_four_thousand_samples(
        self, acceptance_report, sample_sweep
    ):
        cfg, rows, _ = sample_sweep
        cal = {
            n: mean_by(rows, n_est=n, calibrated=True) for n in cfg.n_est_grid
        }
        plateau = max(cal.values())
        n_knee = max(n for n in cfg.n_est_grid if n <= 4000)
        gap = plateau - cal[n_knee]
        ok = gap <= 0.5
        detail = (
            f"calibrated mean {cal[n_knee]:.3f} dB at n_est={n_knee},"
            f" plateau {plateau:.3f} dB, gap {gap:.3f} dB (limit 0.5)"
        )
        line = acceptance_report("calibrated saturation", ok, detail)
        assert ok, line

    def test_uncalibrated_sinr_catches_up_at_hundred_thousand_samples(
        self, acceptance_report, sample_sweep
    ):
        cfg, rows, _ = sample_sweep
        plateau = max(
            mean_by(rows, n_est=n, calibrated=True) for n in cfg.n_est_grid
        )
        window = [n for n in cfg.n_est_grid if 1e5 <= n <= 2.5e5]
        gaps = {
            n: plateau - mean_by(rows, n_est=n, calibrated=False)
            for n in window
        }
        best_n, best_gap = min(gaps.items(), key=lambda kv: kv[1])
        ok = best_gap <= 0.5
        detail = (
            f"uncalibrated gap to calibrated plateau {best_gap:.3f} dB"
            f" at n_est={best_n} (limit 0.5 within [1e5, 2.5e5])"
        )
        line = acceptance_report("calibration-free crossover", ok, detail)
        assert ok, line

    def test_moderate_power_sinr_structure(self, acceptance_report, ptx_sweep):
        cfg, rows, _ = ptx_sweep
        ideal = ideal_sinr_db(cfg.transceiver)
        grid = [p for p in cfg.p_tx_grid_dbm if p <= 15.0]
        gap_rr = max(
            abs(ideal - mean_by(rows, variant="ref-rx", p_tx_dbm=p))
            for p in grid
        )
        gap_wl = max(
            abs(ideal - mean_by(rows, variant="widely-linear", p_tx_dbm=p))
            for p in grid
        )
        near = min(
            mean_by(rows, variant="ref-rx", p_tx_dbm=15.0),
            mean_by(rows, variant="widely-linear", p_tx_dbm=15.0),
        )
        far = max(
            mean_by(rows, variant="linear", p_tx_dbm=15.0),
            mean_by(rows, variant="nonlinear", p_tx_dbm=15.0),
        )
        separation = near - far
        ok = gap_rr <= 1.0 and gap_wl <= 1.0 and separation >= 5.0
        detail = (
            f"worst gap to ideal {ideal:.3f} dB over p_tx <= 15:"
            f" ref-rx {gap_rr:.3f} dB, widely-linear {gap_wl:.3f} dB"
            f" (limit 1.0); separation over one-receiver cancellers at"
            f" 15 dBm {separation:.1f} dB (floor 5.0)"
        )
        line = acceptance_report("moderate-power SINR structure", ok, detail)
        assert ok, line

    def test_high_power_ordering_favors_reference_receiver(
        self, acceptance_report, ptx_sweep
    ):
        _, rows, _ = ptx_sweep
        rr = mean_by(rows, variant="ref-rx", p_tx_dbm=25.0)
        wl = mean_by(rows, variant="widely-linear", p_tx_dbm=25.0)
        ok = rr > wl
        detail = (
            f"at 25 dBm: ref-rx {rr:.3f} dB vs widely-linear {wl:.3f} dB"
            f" (must be strictly higher)"
        )
        line = acceptance_report("high-power ordering", ok, detail)
        assert ok, line

    def test_budget_limiting_terms(self, acceptance_report):
        spec = ScenarioConfig().transceiver
        grid = ScenarioConfig().p_tx_grid_dbm
        noise_limited = True
        for p in (p for p in grid if p <= 10.0):
            b = budget_proposed(replace(spec, p_tx_dbm=p))
            interference = max(
                b.p_si_dbm, b.p_si_im_dbm, b.p_nl_tx_dbm, b.p_nl_rx_dbm,
                b.p_q_tot_dbm,
            )
            noise_limited = noise_limited and b.p_n_dbm > interference
        t5 = budget_traditional(replace(spec, p_tx_dbm=5.0))
        residual_w = dbm_to_watts(t5.p_si_im_dbm) + dbm_to_watts(t5.p_nl_tx_dbm)
        early_floor = residual_w > dbm_to_watts(t5.p_n_dbm)
        nl_rx_gap = max(
            abs(
                budget_proposed(replace(spec, p_tx_dbm=p)).p_nl_rx_dbm
                - budget_traditional(replace(spec, p_tx_dbm=p)).p_nl_rx_dbm
            )
            for p in grid
        )
        ok = noise_limited and early_floor and nl_rx_gap <= 0.5
        detail = (
            f"two-receiver budget noise-limited for p_tx <= 10:"
            f" {noise_limited}; one-receiver image+distortion floor above"
            f" noise at 5 dBm: {early_floor}; receiver-distortion term"
            f" variant gap {nl_rx_gap:.3f} dB (limit 0.5)"
        )
        line = acceptance_report("budget limiting terms", ok, detail)
        assert ok, line

    def test_least_squares_attains_variance_bound(self, acceptance_report):
        m_taps, n_samples, trials = 8, 800, 40000
        p_soi, p_n, p_ref = 0.5, 0.5, 1.0
        rng = np.random.default_rng(1)
        sigma2 = p_soi + p_n
        truth = (
            rng.standard_normal(m_taps) + 1j * rng.standard_normal(m_taps)
        ) / np.sqrt(2)
        bound = crlb_per_tap(CrlbInput(p_soi, p_n, n_samples, p_ref))
        acc = np.zeros(m_taps)
        done = 0
        while done < trials:
            block = min(500, trials - done)
            shape = (block, n_samples, m_taps)
            refs = np.sqrt(p_ref / 2) * (
                rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            )
            noise = np.sqrt(sigma2 / 2) * (
                rng.standard_normal(shape[:2])
                + 1j * rng.standard_normal(shape[:2])
            )
            observed = refs @ truth + noise
            gram = np.einsum("bnm,bnk->bmk", refs.conj(), refs)
            rhs = np.einsum("bnm,bn->bm", refs.conj(), observed)
            estimates = np.linalg.solve(gram, rhs[..., None])[..., 0]
            acc += np.sum(np.abs(estimates - truth) ** 2, axis=0)
            done += block
        ratios = acc / trials / bound
        ok = bool(np.all((ratios >= 1.0) & (ratios <= 1.1)))
        detail = (
            f"per-tap variance over bound in [{ratios.min():.4f},"
            f" {ratios.max():.4f}] across {m_taps} taps, {trials} trials,"
            f" N={n_samples} (window [1.0, 1.1])"
        )
        line = acceptance_report("estimator variance bound", ok, detail)
        assert ok, line

    def test_impairment_self_checks_pass(self, acceptance_report):
        checks = run_validation()
        failed = [c.name for c in checks if not c.passed]
        tolerances = {c.name: c.tolerance_db for c in checks}
        contract = (
            all(tolerances[n] == 0.3 for n in tolerances if n.endswith("iip3"))
            and tolerances["tx iq image ratio"] <= 1e-6
            and tolerances["rx iq image ratio"] <= 1e-6
            and tolerances["thermal noise floor"] == 0.1
            and tolerances["adc sndr"] == 1.0
        )
        ok = not failed and contract
        detail = (
            f"{len(checks) - len(failed)}/{len(checks)} checks passed"
            + (f"; failed: {', '.join(failed)}" if failed else "")
            + ("" if contract else "; tolerance contract violated")
        )
        line = acceptance_report("impairment self-checks", ok, detail)
        assert ok, line

    def test_repeated_runs_are_byte_identical(
        self, acceptance_report, tmp_path
    ):
        identical = True
        for experiment, overrides in (
            (
                "sinr-vs-ptx",
                dict(p_tx_grid_dbm=(-5.0, 15.0), variants=("ref-rx", "linear")),
            ),
            ("sinr-vs-n", dict(n_est_grid=(300, 1000))),
        ):
            out = tmp_path / f"{experiment}.csv"
            cfg = replace(
                ScenarioConfig(),
                experiment=experiment,
                n_trials=2,
                n_eval=4000,
                output=str(out),
                **overrides,
            )
            run_experiment(cfg)
            first = out.read_bytes()
            run_experiment(cfg)
            identical = identical and out.read_bytes() == first
        detail = f"both sweep kinds byte-identical across reruns: {identical}"
        line = acceptance_report("determinism", identical, detail)
        assert identical, line
