import math
from dataclasses import replace

import numpy as np
import pytest

from longwave import grid as gs
from longwave import unidirectional as ud
from longwave import experiments as ex
from longwave.errors import ConfigError, DegenerateFit

SMALL = ex.GridConfig(L=64 * math.pi, N=256)


def _synthetic(fn, eps_values=(0.2, 0.1, 0.05), times=(0.0, 1.0, 2.0, 5.0)):
    return [ex.RunRecord("CH", "ib", None, e, e, 1.0, list(times), [fn(e, t) for t in times])
            for e in eps_values]


def test_exact_power_law_is_recovered():
    recs = _synthetic(lambda e, t: 3 * e**2 * t)
    fit = ex.fit_error_law(recs, "eps2")
    for f in fit["eps_fits"].values():
        assert f["slope"] == pytest.approx(2.0, abs=1e-12)
        assert f["verdict"] == "consistent"
    for f in fit["t_fits"]:
        assert f["slope"] == pytest.approx(1.0, abs=1e-12)
    assert fit["C"] == pytest.approx(3.0)
    assert fit["max_violation"] == pytest.approx(0.0, abs=1e-12)


def test_sharper_rate_is_reported():
    fit = ex.fit_error_law(_synthetic(lambda e, t: e**3 * t), "eps2")
    assert all(f["slope"] == pytest.approx(3.0) for f in fit["eps_fits"].values())
    assert {f["verdict"] for f in fit["eps_fits"].values()} == {"sharper than bound"}


def test_combined_law_constant():
    recs = _synthetic(lambda e, t: 0.5 * (e**2 + e**4) * t)
    assert ex.fit_error_law(recs, "eps2+delta4")["C"] == pytest.approx(0.5)


def test_degenerate_fits():
    with pytest.raises(DegenerateFit):
        ex.fit_error_law(_synthetic(lambda e, t: e * t, eps_values=(0.2, 0.1)))
    with pytest.raises(DegenerateFit):
        ex.fit_error_law(_synthetic(lambda e, t: 0.0))
    with pytest.raises(DegenerateFit):
        ex.fit_error_law(_synthetic(lambda e, t: e * t, times=(0.0, 1.0, 2.0)))


def test_envelope_flags():
    recs = _synthetic(lambda e, t: (0.3 - e) * t)
    flags = ex.fit_error_law(recs, "eps2")["envelope_flags"]
    assert [f["eps"] for f in flags] == [0.1, 0.05]
    assert ex.fit_error_law(_synthetic(lambda e, t: e**2 * t))["envelope_flags"] == []


@pytest.mark.parametrize("kw,msg", [
    (dict(path=()), "empty"),
    (dict(path=((0.2, 0.1),)), "0 < eps <= delta <= 1"),
    (dict(kernel="nope"), "registered: bessel6, exponential, gaussian"),
    (dict(target="nonlocal"), "needs a kernel"),
    (dict(target="kdv"), "target must be"),
    (dict(model="KdV", path=((0.2, 0.2),)), "outside"),
    (dict(model="KdV", path=((0.5, math.sqrt(0.5)),)), "1/3"),
    (dict(sample_dt=0.0015), "multiple of dt"),
    (dict(t_star=(0.3,)), "multiple of sample_dt"),
    (dict(model="Boussinesq"), "unknown model"),
])
def test_config_validation(kw, msg):
    with pytest.raises(ConfigError, match=msg):
        ex.SweepConfig(**kw)


def test_kdv_path_and_band():
    path = ex.kdv_path([0.2, 0.1])
    assert path[0] == (0.2, math.sqrt(0.2))
    ex.SweepConfig(model="KdV", path=path)
    ex.check_kdv_point(0.1, math.sqrt(0.15), band=(1.0, 2.0))
    with pytest.raises(ConfigError):
        ex.check_kdv_point(0.1, math.sqrt(0.15), band=(2.0, 1.0))


def test_custom_kernels_register():
    reg = ex.kernel_registry([{"name": "bessel4", "bessel": 4},
                              {"name": "tab", "eta": [0, 1, 2], "values": [1, 0.5, 0.2], "order": 2}])
    assert {"bessel4", "tab", "exponential"} <= set(reg)
    with pytest.raises(ConfigError):
        ex.build_kernel({"name": "broken", "eta": [0, 1]})


@pytest.fixture(scope="module")
def quick_cfg():
    return ex.SweepConfig(model="CH", path=((0.2, 0.2), (0.1, 0.1), (0.05, 0.05)), t_cap=1.0,
                          t_star=(0.25, 0.5, 1.0), sample_dt=0.25, dt=0.01, grid=SMALL,
                          w0=ex.DatumConfig(1.0, 0.25), workers=1)


@pytest.fixture(scope="module")
def quick_records(quick_cfg):
    return ex.run_approximation(quick_cfg)


def test_run_records(quick_records):
    assert [r.eps for r in quick_records] == [0.2, 0.1, 0.05]
    for r in quick_records:
        assert r.status == "ok"
        assert r.times == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert r.errors[0] <= 1e-10
        assert all(e >= 0 for e in r.errors)
        assert r.energy[0]["E_s"] <= 1e-10
        assert len(r.energy) == len(r.times)


def test_exponential_kernel_reproduces_ib_records(quick_cfg, quick_records):
    cfg = replace(quick_cfg, target="nonlocal", kernel="exponential")
    recs = ex.run_approximation(cfg)
    for a, b in zip(recs, quick_records):
        assert a.target == "nonlocal" and a.kernel == "exponential"
        assert np.abs(np.array(a.errors) - np.array(b.errors)).max() <= 1e-10


def test_parallel_run_matches_serial(quick_cfg, quick_records):
    recs = ex.run_approximation(quick_cfg, workers=2)
    assert [r.to_dict() for r in recs] == [r.to_dict() for r in quick_records]


def test_horizon_cap():
    cfg = ex.SweepConfig(T=1.0, t_cap=10.0)
    assert cfg.horizon(0.2) == pytest.approx(5.0)
    assert cfg.horizon(0.05) == 10.0
    assert ex.SweepConfig(model="KdV", path=ex.kdv_path([0.1])).law == "eps2"


def test_blowup_recorded_not_raised(quick_cfg):
    cfg = replace(quick_cfg, path=((0.2, 0.2),), threshold=0.9)
    (rec,) = ex.run_approximation(cfg)
    assert rec.status == "blowup"
    assert "blew up" in rec.message


def test_kdv_normalization_scalars(long_grid):
    w0 = ud.sech2(long_grid)
    eps, d = 0.1, math.sqrt(0.12)
    q0, eb = ex.kdv_normalization(w0, eps, d)
    assert eb == pytest.approx(3 * d**2)
    assert gs.sobolev_norm(long_grid, q0, 1) == pytest.approx((2 / 9) * (eps / d**2) * gs.sobolev_norm(long_grid, w0, 1), rel=1e-14)
    assert ex.kdv_normalization(w0, 0.2, math.sqrt(1 / 3))[1] == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        ex.kdv_normalization(w0, 0.1, 0.1, band=(0.5, 2.0))


def test_bbm_ch_gap_scales_like_eps_delta2_t():
    g = gs.make_grid(64 * math.pi, 256)
    w0 = ud.sech2(g, b=0.25)
    ratios = []
    for e in (0.2, 0.1, 0.05):
        t, gap = ex.unidirectional_gap(g, w0, ud.CH, ud.BBM, e, e, 2.0, dt=0.01, stride=50)
        ratios.extend(gap[1:] / (e * e**2 * t[1:]))
    assert max(ratios) / min(ratios) < 1.2
