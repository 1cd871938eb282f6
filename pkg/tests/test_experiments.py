import json

import numpy as np
import pytest

from obpursuit import (ConfigError, ExperimentConfig, ab_comparison,
                       parse_config_text, phase_transition, rbop_trend,
                       write_grid_csv, write_grid_json)
from obpursuit.experiments import (AB_COLUMNS, GRID_COLUMNS, draw_trial_instance,
                                   run_grid)
from obpursuit.seeding import stream


def _small_config(**kw):
    base = dict(n=32, m_over_n=(0.5,), s_over_m=(0.1, 0.2), reps=4,
                snr_db=None, kappa=2.0, algorithms=("thres", "sp"),
                variants="both", seed=11)
    base.update(kw)
    return ExperimentConfig(**base)


def test_grid_runs_and_counts():
    grid = phase_transition(_small_config())
    assert len(grid.cells) == 2 * 2 * 2   # cells x algs x variants
    for cell in grid.cells.values():
        assert cell.trials == 4
        assert 0 <= cell.successes <= cell.trials


def test_grid_deterministic_across_runs():
    g1 = phase_transition(_small_config())
    g2 = phase_transition(_small_config())
    assert g1.digest == g2.digest
    assert g1.rows() == g2.rows()


def test_trial_streams_are_order_independent():
    cfg = _small_config()
    inst_a = draw_trial_instance(cfg, 16, 2, stream(cfg.seed, 1, 3))
    inst_b = draw_trial_instance(cfg, 16, 2, stream(cfg.seed, 1, 3))
    assert inst_a.digest == inst_b.digest
    inst_c = draw_trial_instance(cfg, 16, 2, stream(cfg.seed, 1, 2))
    assert inst_c.digest != inst_a.digest


def test_infeasible_cells_skipped_with_reason():
    cfg = _small_config(n=8, m_over_n=(0.1,), s_over_m=(0.05,))  # m=1, s=0
    grid = phase_transition(cfg)
    assert grid.skipped and "infeasible" in grid.skipped[0]["reason"]


def test_kappa_one_variants_identical():
    cfg = _small_config(kappa=1.0, snr_db=30.0, reps=6)
    grid = phase_transition(cfg)
    for (mn, sm) in {(k[0], k[1]) for k in grid.cells}:
        for alg in cfg.algorithms:
            conv = grid.cell(mn, sm, alg, False)
            obl = grid.cell(mn, sm, alg, True)
            assert conv.successes == obl.successes
            assert conv.rel_err_sum == pytest.approx(obl.rel_err_sum, abs=1e-12)


def test_ab_comparison_structure_and_pairing():
    report = ab_comparison(_small_config(snr_db=30.0))
    assert report["paired"] is True
    assert report["instance_digest"]
    algs = {(r["alg"], r["oblique"]) for r in report["aggregate"]}
    assert algs == {("thres", False), ("thres", True), ("sp", False), ("sp", True)}
    for row in report["aggregate"]:
        assert np.isfinite(row["mean_rel_error"])


def test_noisy_smoke_all_algorithms_finite():
    cfg = _small_config(snr_db=30.0, reps=2,
                        algorithms=("thres", "mp", "cosamp", "sp", "iht", "htp"))
    report = ab_comparison(cfg)
    assert len(report["aggregate"]) == 12
    for row in report["aggregate"]:
        assert np.isfinite(row["mean_rel_error"]), row


def test_grid_csv_schema_and_byte_determinism(tmp_path):
    cfg = _small_config()
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_grid_csv(phase_transition(cfg), p1)
    write_grid_csv(phase_transition(cfg), p2)
    t1, t2 = p1.read_bytes(), p2.read_bytes()
    assert t1 == t2
    header = t1.decode().splitlines()[0].split(",")
    assert tuple(header) == GRID_COLUMNS


def test_ab_csv_has_rel_error_column(tmp_path):
    report = ab_comparison(_small_config(snr_db=30.0))
    path = tmp_path / "ab.csv"
    write_grid_csv(report["grid"], path, with_rel_error=True)
    header = path.read_text().splitlines()[0].split(",")
    assert tuple(header) == AB_COLUMNS


def test_grid_json_written(tmp_path):
    grid = phase_transition(_small_config())
    path = tmp_path / "g.json"
    write_grid_json(grid, path)
    payload = json.loads(path.read_text())
    assert payload["schema_version"] == "pt-v1"
    assert len(payload["cells"]) == len(grid.cells)


def test_isotropic_noiseless_midcell_regression():
    # pinned regression: with an unconditioned frame (kappa = 1), noiseless
    # measurements at m/n = 0.5 and s/m = 0.1 are easy for the
    # least-squares-driven pursuits
    cfg = ExperimentConfig(n=256, m_over_n=(0.5,), s_over_m=(0.1,), reps=30,
                           snr_db=None, kappa=1.0,
                           algorithms=("mp", "cosamp", "sp", "htp"),
                           variants="conventional", seed=123)
    grid = phase_transition(cfg)
    for alg in cfg.algorithms:
        assert grid.cell(0.5, 0.1, alg, False).success_rate >= 0.95, alg


def test_rbop_trend_isotropy_contrast():
    cfg = ExperimentConfig(kind="rbop-trend", trend_n=16, trend_m=(8, 16),
                           trend_reps=3, density="custom:" + ";".join(["4", "2"] * 8),
                           kappa=1.0, seed=3)
    out = rbop_trend(cfg)
    # kappa 1 frame is tight: dual isotropy exact, plain isotropy broken
    assert out["exact"]["dual_isotropy_gap"] <= 1e-9
    assert out["exact"]["plain_isotropy_gap"] >= 0.2
    assert abs(out["exact"]["nu_max"] / out["exact"]["nu_min"] - 2.0) < 1e-9
    assert len(out["medians"]) == 2
    uni = rbop_trend(ExperimentConfig(kind="rbop-trend", trend_n=16, trend_m=(8,),
                                      trend_reps=2, density="uniform", kappa=1.0))
    assert uni["exact"]["plain_isotropy_gap"] <= 1e-9
    assert uni["exact"]["dual_isotropy_gap"] <= 1e-9


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_parse_config_roundtrip():
    text = """
    # comment
    kind = phase-transition
    n = 64
    m_over_n = 0.25, 0.5
    s_over_m = 0.1
    reps = 3
    snr_db = none
    algorithms = thres, iht
    seed = 9
    """
    cfg = parse_config_text(text)
    assert cfg.n == 64
    assert cfg.m_over_n == (0.25, 0.5)
    assert cfg.snr_db is None
    assert cfg.algorithms == ("thres", "iht")
    assert cfg.seed == 9


def test_parse_config_override_wins():
    cfg = parse_config_text("n = 64\nseed = 1\n", overrides={"seed": 5})
    assert cfg.seed == 5 and cfg.n == 64


def test_parse_config_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("n = 64\nwhat is this\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("unknown_key = 3\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("n = sixty-four\n")


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(m_over_n=(1.5,))
    with pytest.raises(ConfigError):
        ExperimentConfig(reps=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(algorithms=("nope",))
