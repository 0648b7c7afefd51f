"""Case generator tests: determinism, published structure, scaling."""

import filecmp

import pytest

from flowgraph import (
    ALL_APPROACHES,
    Approach,
    AssetKind,
    CaseSpec,
    INSTANCE_HOURS,
    build_model,
    export_case,
    hybrid_fixture,
    scale_horizon,
    size_report,
    tri_area_case,
)
from flowgraph.errors import InvariantViolation


class TestCaseSpec:
    def test_instance_horizons(self):
        assert INSTANCE_HOURS == {1: 672, 2: 4032, 3: 8760, 4: 17520,
                                  5: 26280, 6: 35040}
        assert CaseSpec(instance=3).horizon_t == 8760

    def test_bad_instance_rejected(self):
        with pytest.raises(InvariantViolation):
            CaseSpec(instance=7)


class TestHybridFixture:
    def test_shape(self):
        sy = hybrid_fixture()
        assert set(sy.arcs) == {("pv", "bt"), ("pv", "ed"), ("bt", "ed")}
        assert sy.hubs["cp"].forbidden_routes == (("ed", "bt"),)
        assert sy.validate() == []

    def test_deterministic(self):
        a, b = hybrid_fixture(), hybrid_fixture()
        assert a.assets == b.assets and a.arcs == b.arcs


class TestTriAreaGenerator:
    def test_validates(self):
        assert tri_area_case(CaseSpec()).validate() == []

    def test_identical_spec_byte_identical_export(self, tmp_path):
        for label in ("a", "b"):
            export_case(scale_horizon(tri_area_case(CaseSpec(seed=13)), 48),
                        tmp_path / label)
        for name in ("assets.csv", "flows.csv", "hubs.csv", "forbidden.csv",
                     "profiles.csv", "port_caps.csv"):
            assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name,
                               shallow=False)

    def test_seed_changes_profiles_not_topology(self, tmp_path):
        a = tri_area_case(CaseSpec(seed=13))
        b = tri_area_case(CaseSpec(seed=14))
        assert set(a.arcs) == set(b.arcs)
        assert a.assets["ed_a"].demand_profile != b.assets["ed_a"].demand_profile

    def test_asset_roster(self):
        sy = tri_area_case(CaseSpec())
        kinds = {a.id: a.kind for a in sy.assets.values()}
        assert kinds["solar"] is AssetKind.PRODUCER
        assert kinds["battery"] is AssetKind.STORAGE
        assert kinds["electrolyzer"] is AssetKind.CONVERSION
        assert kinds["h2store"] is AssetKind.STORAGE
        assert kinds["fuelcell"] is AssetKind.CONVERSION
        assert kinds["hydro"] is AssetKind.STORAGE
        investables = sorted(a.id for a in sy.assets.values() if a.investable)
        assert {"battery", "electrolyzer", "h2store", "solar", "wind"} <= set(investables)
        assert len(investables) == 12

    def test_profiles_in_range(self):
        sy = tri_area_case(CaseSpec())
        for asset in sy.assets.values():
            if asset.availability_profile is not None:
                assert all(0.0 <= v <= 1.0 for v in asset.availability_profile)
            if asset.demand_profile is not None:
                assert all(v >= 0.0 for v in asset.demand_profile)
                assert len(asset.demand_profile) == sy.horizon_t


class TestScaleHorizon:
    def test_profiles_tiled(self):
        sy = scale_horizon(hybrid_fixture(), 48)
        demand = sy.assets["ed"].demand_profile
        assert len(demand) == 48 and demand[:24] == demand[24:]

    def test_truncate_then_rescale_recovers_profiles(self):
        base = hybrid_fixture()
        short = scale_horizon(base, 12)
        back = scale_horizon(short, 24)
        # the first 12 hours survive; the tail is a tile of them
        assert back.assets["ed"].demand_profile[:12] == \
            base.assets["ed"].demand_profile[:12]

    def test_rejects_nonpositive_horizon(self):
        with pytest.raises(InvariantViolation):
            scale_horizon(hybrid_fixture(), 0)

    def test_single_timestep(self):
        sy = scale_horizon(hybrid_fixture(), 1)
        assert sy.horizon_t == 1
        for approach in ALL_APPROACHES:
            build_model(sy, approach)


def test_per_timestep_size_is_topology_determined():
    """size(T2) - size(T1) is the same for any horizon pair (steady state)."""
    base = tri_area_case(CaseSpec())

    def per_t(lo, hi, approach):
        a = size_report(build_model(scale_horizon(base, lo), approach)).as_tuple()
        b = size_report(build_model(scale_horizon(base, hi), approach)).as_tuple()
        return tuple((y - x) / (hi - lo) for x, y in zip(a, b))

    for approach in (Approach.TWO_BB_2F, Approach.ONE_BB_1F):
        assert per_t(2, 3, approach) == per_t(5, 9, approach)
