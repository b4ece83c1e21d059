import math

import numpy as np
import pytest

from isingsel import graphs, harness
from isingsel.harness import ExperimentConfig
from isingsel.logreg import SolverOptions


def small_config(**over):
    base = dict(
        graph_class="grid4",
        p_list=(9,),
        coupling="mixed",
        omega=0.5,
        beta_grid=(0.5, 1.0),
        trials=2,
        lambda_scale=1.0,
        sampler="gibbs",
        gibbs_burn_in=50,
        gibbs_spacing=2,
        base_seed=7,
        methods=("L1", "CL"),
    )
    base.update(over)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(graph_class="ring")
    with pytest.raises(ValueError):
        small_config(beta_grid=(1.0, 0.5))
    with pytest.raises(ValueError):
        small_config(trials=0)
    with pytest.raises(ValueError):
        small_config(lambda_scale=0.0)
    with pytest.raises(ValueError):
        small_config(methods=("L1", "PC"))
    with pytest.raises(ValueError):
        small_config(coupling="ferro")
    with pytest.raises(ValueError):
        small_config(beta_grid=(-1.0, 0.5))
    with pytest.raises(ValueError):
        small_config(p_list=(10,))  # not a square for grid4


def test_build_topology():
    assert harness.build_topology("grid4", 64).d == 4
    assert harness.build_topology("grid8", 64).d == 8
    assert harness.build_topology("star_linear", 64).d == 7
    assert harness.build_topology("star_log", 64).d == 5
    with pytest.raises(ValueError):
        harness.build_topology("grid4", 10)  # not a square


def test_sample_size_formula():
    # n = ceil(10 * beta * d * ln p)
    assert harness.sample_size(2.0, 4, 64) == 333
    assert harness.sample_size(0.2, 4, 64) == 34
    assert harness.sample_size(1e-9, 4, 64) == 1


def test_run_trial_fields_and_determinism():
    cfg = small_config()
    a = harness.run_trial(cfg, 9, 1.0, 0)
    b = harness.run_trial(cfg, 9, 1.0, 0)
    assert a.error is None
    assert a.n == harness.sample_size(1.0, a.d, 9)
    assert a.seed == b.seed
    assert a.success == b.success
    assert a.l1_disagree_signed == b.l1_disagree_signed
    assert a.cl_disagree_signed == b.cl_disagree_signed
    assert a.max_kkt == b.max_kkt
    assert a.d == 4  # grid4(3) has an interior vertex


def test_run_trial_rejects_off_grid_beta():
    cfg = small_config()
    with pytest.raises(ValueError):
        harness.run_trial(cfg, 9, 0.7, 0)


def test_run_trial_records_failures():
    # exact sampler on a large grid exceeds the enumeration cap
    cfg = small_config(p_list=(64,), sampler="exact")
    res = harness.run_trial(cfg, 64, 1.0, 0)
    assert res.error is not None
    assert "cap" in res.error
    assert math.isnan(res.l1_disagree_signed)
    assert res.success is False


def test_run_sweep_shape_and_aggregate():
    cfg = small_config()
    sweep = harness.run_sweep(cfg)
    assert len(sweep.rows) == 1 * 2 * 2
    keys = [(r.p, r.beta, r.trial) for r in sweep.rows]
    assert keys == sorted(keys)
    assert len(sweep.aggregate) == 2
    agg = sweep.aggregate[0]
    assert agg["trials"] == 2
    assert agg["failures"] == 0
    assert 0.0 <= agg["success_rate"] <= 1.0


def test_run_sweep_deterministic_and_order_independent():
    cfg = small_config()
    rows1 = harness.run_sweep(cfg).rows
    rows2 = harness.run_sweep(cfg).rows
    for a, b in zip(rows1, rows2):
        for col in harness.RESULT_COLUMNS:
            if col == "wall_ms":
                continue
            va, vb = getattr(a, col), getattr(b, col)
            assert va == vb or (isinstance(va, float) and math.isnan(va) and math.isnan(vb))


def test_trial_results_match_sweep_cells():
    cfg = small_config(trials=2)
    sweep = harness.run_sweep(cfg)
    single = harness.run_trial(cfg, 9, 0.5, 1)
    row = next(r for r in sweep.rows if r.beta == 0.5 and r.trial == 1)
    assert row.seed == single.seed
    assert row.success == single.success
    assert row.l1_disagree_signed == single.l1_disagree_signed


def test_n_recomputable_from_row_fields():
    cfg = small_config()
    for r in harness.run_sweep(cfg).rows:
        assert r.n == harness.sample_size(r.beta, r.d, r.p)


def test_csv_output(tmp_path):
    cfg = small_config()
    sweep = harness.run_sweep(cfg)
    rp = tmp_path / "results.csv"
    ap = tmp_path / "aggregate.csv"
    harness.write_results_csv(sweep, rp)
    harness.write_aggregate_csv(sweep, ap)
    lines = rp.read_text().strip().split("\n")
    assert lines[0] == (
        "p,d,beta,n,trial,seed,success,l1_disagree_signed,l1_disagree_unsigned,"
        "cl_disagree_signed,cl_disagree_unsigned,max_kkt,max_dual_inf,wall_ms"
    )
    assert len(lines) == 1 + len(sweep.rows)
    first = lines[1].split(",")
    assert first[6] in ("0", "1")  # booleans as 0/1
    agg_lines = ap.read_text().strip().split("\n")
    assert agg_lines[0].startswith("p,d,beta,n,trials,failures,success_rate")
    assert len(agg_lines) == 1 + len(sweep.aggregate)


def test_float_formatting_six_significant_digits():
    assert harness._fmt(1.2345678901) == "1.23457"
    assert harness._fmt(float("nan")) == "nan"
    assert harness._fmt(True) == "1"
    assert harness._fmt(12) == "12"


def test_config_file_roundtrip(tmp_path):
    text = """
# desk-scale check
graph_class = grid4
p_list = 9, 16
coupling = positive
omega = 0.25
beta_grid = 0.5, 1.0, 1.5
trials = 3
lambda_scale = 0.4
support_threshold = 0.18
sampler = gibbs
gibbs_burn_in = 100
gibbs_spacing = 3
base_seed = 11
methods = L1
kkt_tol = 1e-7
max_iters = 2000
backtrack_factor = 0.5
"""
    path = tmp_path / "sweep.cfg"
    path.write_text(text)
    cfg, opts = harness.parse_config(path)
    assert cfg.p_list == (9, 16)
    assert cfg.beta_grid == (0.5, 1.0, 1.5)
    assert cfg.omega == 0.25
    assert cfg.support_threshold == 0.18
    assert cfg.methods == ("L1",)
    assert opts.kkt_tol == 1e-7
    assert opts.max_iters == 2000
    assert isinstance(opts, SolverOptions)


def test_config_file_rejects_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("graph_class = grid4\nwarp_speed = 11\n")
    with pytest.raises(ValueError, match="bad.cfg:2"):
        harness.parse_config(path)


def test_config_file_rejects_bad_value(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("trials = many\n")
    with pytest.raises(ValueError, match="bad.cfg:1"):
        harness.parse_config(path)


def test_success_implies_and_disagreement_zero():
    cfg = small_config(
        p_list=(9,), beta_grid=(6.0,), trials=3, coupling="positive", omega=0.25,
        lambda_scale=1.5,
    )
    rows = harness.run_sweep(cfg).rows
    assert any(r.success for r in rows)  # plenty of data on a tiny graph
    for r in rows:
        if r.success:
            assert r.l1_disagree_signed == 0


def test_dual_infeasibility_column():
    cfg = small_config()
    res = harness.run_trial(cfg, 9, 1.0, 0)
    assert res.max_dual_inf >= 0.0
    assert res.max_abs_z <= 1.0 + 1e-6
    assert res.strict_dual_feasible == (res.max_dual_inf < 1.0)


def test_single_cell_sweep_has_one_row():
    cfg = small_config(p_list=(9,), beta_grid=(1.0,), trials=1)
    sweep = harness.run_sweep(cfg)
    assert len(sweep.rows) == 1
    assert len(sweep.aggregate) == 1
