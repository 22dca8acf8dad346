import numpy as np
import pytest

from fsencompass import (
    ComponentModelSpec,
    DataError,
    ForecastPanel,
    Quarter,
    RollingScheme,
    Series,
    build_component_forecasts,
    csar4,
    isar4,
    osar4,
    other_from_identity,
    ysar4,
)
from fsencompass.components import aggregate_actuals, build_aggregate_ar

from .synth import economy

SCHEME = RollingScheme("1954Q1", "1974Q4", "1980Q4", 8)


@pytest.fixture(scope="module")
def data():
    return economy()


def test_ysar4_layout():
    spec = ysar4()
    assert len(spec.components) == 10
    signs = {c.name: c.sign for c in spec.components}
    logs = {c.name: c.use_logs for c in spec.components}
    assert signs["im"] == -1 and sum(s == 1 for s in signs.values()) == 9
    assert not logs["iv"] and not logs["sd"]
    assert sum(logs.values()) == 8


def test_subsets_partition_ysar4():
    names = [c.name for m in (csar4(), isar4(), osar4()) for c in m.components]
    assert sorted(names) == sorted(c.name for c in ysar4().components)


def test_renaming():
    spec = ysar4({"cs": "services", "gdp": "rgdp"})
    assert spec.components[0].name == "services"
    assert spec.aggregate_name == "rgdp"


@pytest.mark.parametrize("comps", [(), (("a", 1, True), ("a", -1, True)), (("a", 2, True),)])
def test_spec_validation(comps):
    with pytest.raises(DataError):
        ComponentModelSpec("bad", comps, "agg")


def test_single_level_component_equals_its_panel(data):
    spec = ComponentModelSpec("one", (("iv", 1, False),), "iv")
    agg = build_component_forecasts(spec, data, SCHEME)
    comp = agg.component_panels["iv"]
    assert agg.panel.origins == comp.origins
    assert all(np.array_equal(agg.panel.entries[o], comp.entries[o]) for o in comp.origins)


def test_constant_components():
    # a level series with exact AR(1) decay toward a; its forecast is exact
    n = 120
    t = np.arange(n)
    a = Series("a", "1954Q1", 10.0 + 0.5 ** t)
    b = Series("b", "1954Q1", 3.0 + 0.25 ** t)
    spec = ComponentModelSpec("ab", (("a", 1, False), ("b", 1, False)), "ab")
    agg = build_component_forecasts(spec, {"a": a, "b": b}, RollingScheme("1954Q1", "1974Q4", "1975Q2", 6), p=1)
    for o, path in agg.panel.entries.items():
        k = (o - Quarter(1954, 1)) + np.arange(1, 7)
        assert np.allclose(path, 13.0 + 0.5**k + 0.25**k, rtol=1e-9)


def test_ten_component_sum_oracle(data):
    spec = ysar4()
    agg = build_component_forecasts(spec, data, SCHEME)
    for o in agg.panel.origins:
        oracle = np.zeros(SCHEME.horizon)
        for c in spec.components:
            oracle = oracle + c.sign * agg.component_panels[c.name].entries[o]
        assert np.array_equal(agg.panel.entries[o], oracle)


def test_logged_components_exponentiated(data):
    agg = build_component_forecasts(csar4(), data, SCHEME)
    assert agg.component_panels["cs"].form == "level"
    o = agg.panel.origins[0]
    assert agg.component_panels["cs"].entries[o][0] == pytest.approx(data["cs"].get(o), rel=0.05)


def test_sign_flip_invariance(data):
    neg = data["iv"].replace(values=-data["iv"].values)
    d2 = dict(data, iv_neg=neg.replace(name="iv_neg"))
    a = build_component_forecasts(ComponentModelSpec("x", (("iv", 1, False), ("sd", 1, False)), "x"), d2, SCHEME)
    b = build_component_forecasts(ComponentModelSpec("x", (("iv_neg", -1, False), ("sd", 1, False)), "x"), d2, SCHEME)
    for o in a.panel.origins:
        assert np.allclose(a.panel.entries[o], b.panel.entries[o], rtol=1e-12, atol=1e-9)


def test_identity_closure_on_history(data):
    total = aggregate_actuals(ysar4(), data)
    assert np.allclose(total.values, data["gdp"].values, rtol=1e-12)


def test_missing_component(data):
    d = {k: v for k, v in data.items() if k != "ex"}
    with pytest.raises(DataError, match="ex"):
        build_component_forecasts(ysar4(), d, SCHEME)


def test_nonpositive_logged_component_tagged(data):
    bad = data["cd"].values.copy()
    bad[10] = -1.0
    d = dict(data, cd=Series("cd", data["cd"].start, bad))
    with pytest.raises(DataError, match="component 'cd'"):
        build_component_forecasts(csar4(), d, SCHEME)


def test_single_equation_variant(data):
    panel = build_aggregate_ar(osar4(), data, SCHEME)
    assert len(panel) == len(SCHEME.origins) and panel.form == "level"


def panel(entries, form="level"):
    return ForecastPanel("m", "v", form, entries)


class TestOther:
    def test_simple(self):
        o = Quarter(2000, 1)
        out = other_from_identity(panel({o: [100.0]}), panel({o: [60.0]}), panel({o: [20.0]}))
        assert out.get(o, 1) == 20.0
        assert out.variable == "other"

    def test_zero_when_closed(self):
        rng = np.random.default_rng(0)
        qs = [Quarter(2000, 1) + i for i in range(5)]
        c = {q: rng.uniform(10, 20, 4) for q in qs}
        i = {q: rng.uniform(1, 5, 4) for q in qs}
        g = {q: c[q] + i[q] for q in qs}
        out = other_from_identity(panel(g), panel(c), panel(i))
        assert all(np.allclose(out.entries[q], 0.0, atol=1e-12) for q in qs)

    def test_loop_oracle(self):
        rng = np.random.default_rng(1)
        qs = [Quarter(2000, 1) + i for i in range(7)]
        g, c, i = ({q: rng.standard_normal(3) for q in qs} for _ in range(3))
        out = other_from_identity(panel(g), panel(c), panel(i))
        for q in qs:
            for h in range(3):
                assert out.entries[q][h] == g[q][h] - c[q][h] - i[q][h]

    def test_mismatch(self):
        a, b = Quarter(2000, 1), Quarter(2000, 2)
        with pytest.raises(DataError):
            other_from_identity(panel({a: [1.0]}), panel({b: [1.0]}), panel({a: [1.0]}))
        with pytest.raises(DataError):
            other_from_identity(panel({a: [1.0, 2.0]}), panel({a: [1.0]}), panel({a: [1.0]}))
        with pytest.raises(DataError):
            other_from_identity(panel({a: [1.0]}, "log_level"), panel({a: [1.0]}), panel({a: [1.0]}))
