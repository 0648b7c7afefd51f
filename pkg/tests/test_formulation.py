"""Lowering and model-building tests: per-timestep counts, node forms,
extension rows, and the invariant that every valid system lowers cleanly."""

import pytest

from flowgraph import (
    ALL_APPROACHES,
    Approach,
    Asset,
    AssetKind,
    CaseSpec,
    DcFlowParams,
    EnergySystem,
    FlowArc,
    HubAnnotation,
    build_model,
    hybrid_fixture,
    lower_to_node_form,
    scale_horizon,
    size_report,
    tri_area_case,
)
from flowgraph.errors import MissingAngleAsset, UnsupportedCombination
from flowgraph.lp import RowFamily, VarRole


def hybrid_t1():
    return scale_horizon(hybrid_fixture(), 1)


TABLE_1 = {
    Approach.THREE_BB_4F: (8, 11, 18),
    Approach.TWO_BB_2F: (6, 9, 16),
    Approach.TWO_BB_1F: (5, 9, 13),
}


class TestPublishedCounts:
    @pytest.mark.parametrize("approach,expected", sorted(TABLE_1.items(), key=str))
    def test_hybrid_t1_node_forms(self, approach, expected):
        assert size_report(build_model(hybrid_t1(), approach)).as_tuple() == expected

    def test_hybrid_t1_asset_to_asset(self):
        size = size_report(build_model(hybrid_t1(), Approach.ONE_BB_1F))
        assert (size.n_vars, size.n_constraints) == (4, 6)
        # 9 +/- 1: the forbidden-route bound is a single-coefficient row
        assert abs(size.n_nonzeros - 9) <= 1

    def test_empty_system(self):
        sy = EnergySystem(horizon_t=1)
        for approach in ALL_APPROACHES:
            assert size_report(build_model(sy, approach)).as_tuple() == (0, 0, 0)


class TestLowering:
    def test_two_bb_2f_hybrid_arcs(self):
        lowered = lower_to_node_form(hybrid_fixture(), Approach.TWO_BB_2F)
        assert set(lowered.arcs) == {("bt", "cp"), ("pv", "cp"), ("ed", "cp"),
                                     ("cp", "bt"), ("cp", "ed")}
        assert lowered.assets["cp"].kind is AssetKind.HUB

    def test_two_bb_1f_hybrid_arcs(self):
        lowered = lower_to_node_form(hybrid_fixture(), Approach.TWO_BB_1F)
        assert len(lowered.arcs) == 4
        assert lowered.arcs[("cp", "ed")].two_sided

    def test_three_bb_4f_hybrid_structure(self):
        lowered = lower_to_node_form(hybrid_fixture(), Approach.THREE_BB_4F)
        kinds = {a.kind for a in lowered.assets.values()}
        assert AssetKind.TRANSPORT in kinds
        assert len(lowered.arcs) == 7

    def test_forbidden_route_becomes_zero_bound(self):
        # in the node form the battery may only be reached through the hub,
        # so the forbidden demand->battery route caps that flow at zero
        instance = build_model(hybrid_t1(), Approach.TWO_BB_2F)
        bounds = [r for r in instance.rows
                  if r.family is RowFamily.FLOW_BOUND and r.rhs == 0.0]
        assert len(bounds) == 1
        # the asset-to-asset form has no such arc in the first place
        assert ("ed", "bt") not in hybrid_fixture().arcs

    def test_lowering_leaves_input_untouched(self):
        sy = hybrid_fixture()
        arcs_before = dict(sy.arcs)
        lower_to_node_form(sy, Approach.TWO_BB_2F)
        assert sy.arcs == arcs_before

    def test_every_valid_case_lowers_under_every_approach(self):
        for system in (hybrid_fixture(), scale_horizon(tri_area_case(CaseSpec()), 3)):
            assert system.validate() == []
            for approach in ALL_APPROACHES:
                build_model(system, approach).check()


class TestDeterminism:
    @pytest.mark.parametrize("approach", ALL_APPROACHES, ids=lambda a: a.value)
    def test_variable_order_is_sorted(self, approach):
        instance = build_model(hybrid_fixture(), approach)
        keys = [v.sort_key() for v in instance.variables]
        assert keys == sorted(keys)

    def test_rebuild_is_identical(self):
        a = build_model(hybrid_fixture(), Approach.TWO_BB_2F)
        b = build_model(hybrid_fixture(), Approach.TWO_BB_2F)
        assert [v.name for v in a.variables] == [v.name for v in b.variables]
        assert [(r.name, r.terms, r.rhs) for r in a.rows] == \
               [(r.name, r.terms, r.rhs) for r in b.rows]


class TestScaling:
    def test_constraints_affine_in_horizon(self):
        base = tri_area_case(CaseSpec())
        counts = {}
        for T in (2, 3, 5):
            instance = build_model(scale_horizon(base, T), Approach.TWO_BB_2F)
            counts[T] = size_report(instance).n_constraints
        slope = counts[3] - counts[2]
        assert counts[5] - counts[3] == 2 * slope

    def test_invest_variables_are_horizon_independent(self):
        base = tri_area_case(CaseSpec())
        for T in (1, 7):
            instance = build_model(scale_horizon(base, T), Approach.TWO_BB_2F)
            invest = [v for v in instance.variables if v.role is VarRole.INVEST]
            assert len(invest) == 12
            assert all(v.timestep is None for v in invest)


class TestExtensions:
    def _dc_pair(self):
        sy = EnergySystem(horizon_t=1)
        sy.add_asset(Asset(id="g", kind=AssetKind.PRODUCER, capacity_mw=5.0,
                           voltage_angle_enabled=True))
        sy.add_asset(Asset(id="d", kind=AssetKind.CONSUMER, demand_profile=(2.0,)))
        sy.add_flow(FlowArc("g", "d", dc_params=DcFlowParams(reactance_pu=0.2)))
        return sy

    def test_dc_opf_rejected_on_four_flow_connections(self):
        sy = self._dc_pair()
        with pytest.raises(UnsupportedCombination):
            build_model(sy, Approach.THREE_BB_4F, dc_opf=True)

    def test_dc_opf_missing_angle_asset(self):
        sy = self._dc_pair()
        sy.assets["d"] = Asset(id="d", kind=AssetKind.CONSUMER, demand_profile=(2.0,))
        with pytest.raises(MissingAngleAsset):
            build_model(sy, Approach.ONE_BB_1F, dc_opf=True)

    def test_dc_opf_emits_angle_rows(self):
        sy = self._dc_pair()
        sy.assets["d"] = Asset(id="d", kind=AssetKind.CONSUMER, demand_profile=(2.0,),
                               voltage_angle_enabled=True)
        instance = build_model(sy, Approach.ONE_BB_1F, dc_opf=True)
        assert any(r.family is RowFamily.DC_ANGLE for r in instance.rows)
        angles = [v for v in instance.variables if v.role is VarRole.VOLTAGE_ANGLE]
        assert len(angles) == 2
        reference = [v for v in angles if v.lower == v.upper == 0.0]
        assert len(reference) == 1  # exactly one reference bus

    def test_unit_commitment_rows(self):
        sy = EnergySystem(horizon_t=2)
        sy.add_asset(Asset(id="g", kind=AssetKind.PRODUCER, capacity_mw=10.0,
                           min_capacity_mw=4.0, uc_enabled=True))
        sy.add_asset(Asset(id="d", kind=AssetKind.CONSUMER, demand_profile=(6.0, 6.0)))
        sy.add_flow(FlowArc("g", "d"))
        instance = build_model(sy, Approach.ONE_BB_1F, unit_commitment=True)
        families = {r.family for r in instance.rows}
        assert {RowFamily.UC_MIN_OPER, RowFamily.UC_LIMIT, RowFamily.UC_MAX_ABOVE} <= families
        units = [v for v in instance.variables if v.role is VarRole.UNITS_ON]
        assert len(units) == 2 and all(v.integrality for v in units)
