import math

import pytest

import machslab


def small_run():
    return {
        "kind": "compressible",
        "grid": {"dim": 2, "n_tangential": [16], "n_normal": 13},
        "eos": {"epsilon": 0.3, "gamma": 1.4, "c_v": 1.0},
        "dt_cfl": 1.0,
        "t_final": 0.1,
        "output_every": 0.05,
        "initial_data": {"kind": "vortex", "parameters": {"amplitude": 0.2, "b_amplitude": 0.1}},
    }


def test_counts():
    for d in (2, 3):
        for m in range(9):
            assert machslab.enumerate_count(d, m) == machslab.lattice_count(d, m)


def test_grid_and_sobolev():
    pts = machslab.grid_points(2, [8], 9)
    assert pts.shape == (8 * 9, 2)
    assert pts[:, 1].min() == pytest.approx(-1.0)
    val = machslab.sobolev_norm([1.0] * len(pts), 2, [8], 9)
    assert val == pytest.approx(math.sqrt(2 * math.pi * 2))


def test_fit_rate():
    slope, r2 = machslab.fit_rate([0.4, 0.2, 0.1], [0.16, 0.04, 0.01])
    assert slope == pytest.approx(2.0)
    assert r2 == pytest.approx(1.0)


def test_run_and_energy(tmp_path):
    r = machslab.run(small_run(), str(tmp_path))
    assert len(r["monitors"]) == 3
    assert all(c["passed"] for c in r["checks"])
    assert (tmp_path / "monitors.csv").exists()
    e = machslab.energy(small_run())
    assert e and math.isfinite(e["total"])


def test_identities():
    reps = machslab.identities(dim=2, seeds=1)
    assert reps and all(x["residual"] <= 1e-7 for x in reps)


def test_bad_config():
    cfg = small_run()
    cfg["grid"]["n_tangential"] = [15]
    with pytest.raises(ValueError):
        machslab.run(cfg)
