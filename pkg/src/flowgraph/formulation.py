"""Lower an energy system into an LP under four modelling approaches.

The asset-to-asset description is lowered to node-based graphs by routing
hub-annotated arcs through explicit balance assets; the LP is then generated
uniformly from whichever graph results.  The four approaches differ only in
how node links are represented: four positive flows through a transport
asset, two opposing positive flows, or one free two-sided flow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import (
    InvariantViolation,
    MissingAngleAsset,
    MissingHubAnnotation,
    UnsupportedCombination,
)
from .lp import INF, ConstraintRow, LpInstance, RowFamily, VariableRef, VarRole
from .model import Asset, AssetKind, EnergySystem, FlowArc, HubAnnotation


class Approach(enum.Enum):
    THREE_BB_4F = "3BB-4F"
    TWO_BB_2F = "2BB-2F"
    TWO_BB_1F = "2BB-1F"
    ONE_BB_1F = "1BB-1F"

    @classmethod
    def from_label(cls, label: str) -> "Approach":
        for member in cls:
            if member.value.lower() == label.lower():
                return member
        raise ValueError(f"unknown approach {label!r}")


ALL_APPROACHES = (
    Approach.THREE_BB_4F,
    Approach.TWO_BB_2F,
    Approach.TWO_BB_1F,
    Approach.ONE_BB_1F,
)


# ---------------------------------------------------------------------------
# Lowering to node-based graphs
# ---------------------------------------------------------------------------


def _system_cap_bound(system: EnergySystem) -> Optional[float]:
    """A finite flow level no feasible dispatch can exceed (for link caps)."""
    total = 0.0
    for asset in system.assets.values():
        if asset.kind is AssetKind.CONSUMER:
            continue
        if asset.capacity_mw is None:
            return None
        units = asset.initial_units
        if asset.investable:
            if asset.invest_limit is None:
                return None
            units += asset.invest_limit
        total += asset.capacity_mw * units
    return total


@dataclass
class _PortMap:
    """Where each asset connects to hubs, split by role in the lowering.

    Multi-commodity assets (a conversion with electric and heat outputs) can
    feed several hubs, hence sets; a consumer belongs to exactly one hub.
    """

    in_hubs: dict[str, set[str]]
    out_hubs: dict[str, set[str]]
    node_hub: dict[str, str]  # consumer acting as a balance node of this hub
    node_linked: dict[str, str]  # consumer with both ports: explicit node link


def _build_port_map(system: EnergySystem) -> _PortMap:
    in_hubs: dict[str, set[str]] = {}
    out_hubs: dict[str, set[str]] = {}
    node_hub: dict[str, str] = {}
    node_linked: dict[str, str] = {}
    for hub in system.hubs.values():
        ins = set(hub.ports("in"))
        outs = set(hub.ports("out"))
        for member in hub.members:
            asset = system.assets[member]
            if asset.kind is AssetKind.CONSUMER:
                if node_hub.setdefault(member, hub.id) != hub.id:
                    raise InvariantViolation(f"consumer {member!r} belongs to several hubs")
                if member in ins and member in outs:
                    node_linked[member] = hub.id
                continue
            if member in ins:
                in_hubs.setdefault(member, set()).add(hub.id)
            if member in outs:
                out_hubs.setdefault(member, set()).add(hub.id)
    return _PortMap(in_hubs, out_hubs, node_hub, node_linked)


def _forbidden_sources(hub: HubAnnotation) -> set[str]:
    return {src for src, _ in hub.forbidden_routes}


def lower_to_node_form(system: EnergySystem, approach: Approach) -> EnergySystem:
    """Reroute hub-annotated arcs through explicit balance assets.

    Intra-hub arcs collapse onto one connection arc per member port;
    cross-hub arcs become hub-to-hub links whose shape depends on the
    approach.  Consumers annotated with both an in and an out port get a
    bidirectional node link; forbidden routes zero its toward-hub capacity.
    """
    if approach is Approach.ONE_BB_1F:
        return system
    if system.arcs and not system.hubs:
        raise MissingHubAnnotation(f"{system.name}: node-based lowering needs hub annotations")

    ports = _build_port_map(system)
    cap_big = _system_cap_bound(system)
    lowered = EnergySystem(horizon_t=system.horizon_t, name=f"{system.name}:{approach.value}")
    for asset in system.assets.values():
        lowered.add_asset(asset)
    for hub_id in sorted(system.hubs):
        lowered.add_asset(Asset(id=hub_id, kind=AssetKind.HUB))

    member_arcs: dict[tuple[str, str], float] = {}  # (from, to) -> op_cost

    def note_member_arc(u: str, v: str, op_cost: float = 0.0) -> None:
        key = (u, v)
        if key in member_arcs and member_arcs[key] != op_cost:
            raise InvariantViolation(
                f"conflicting operation costs on lowered arc {key}: "
                f"{member_arcs[key]} vs {op_cost}"
            )
        member_arcs[key] = op_cost

    links_done: set[tuple[str, str]] = set()
    # capacity demand per hub-to-hub link: several lowered routes may share
    # one physical connection, so their capacities accumulate
    link_caps: dict[tuple[str, str], list] = {}

    def note_link(a: str, b: str, fwd: Optional[float], bwd: Optional[float], dc=None) -> None:
        if (b, a) in link_caps:
            a, b, fwd, bwd = b, a, bwd, fwd
        entry = link_caps.setdefault((a, b), [0.0, 0.0, None])
        entry[0] = None if (entry[0] is None or fwd is None) else entry[0] + fwd
        entry[1] = None if (entry[1] is None or bwd is None) else entry[1] + bwd
        if dc is not None:
            entry[2] = dc

    def add_link(
        a: str, b: str, fwd: Optional[float], bwd: Optional[float], dc=None, interval: bool = False
    ) -> None:
        # interval marks hub-to-hub connections whose capacity limits are
        # two-sided interval rows in every node form; node links keep plain
        # one-sided rows, matching the published per-approach listings
        if (a, b) in links_done or (b, a) in links_done:
            return
        links_done.add((a, b))
        two_way = interval and (bwd is None or bwd > 0)
        if approach is Approach.TWO_BB_2F:
            lowered.add_flow(FlowArc(a, b, max_fwd_mw=fwd, two_sided=two_way, dc_params=dc))
            lowered.add_flow(FlowArc(b, a, max_fwd_mw=bwd, two_sided=two_way))
        elif approach is Approach.TWO_BB_1F:
            if interval and not two_way:
                # a one-way connection is a plain directed flow
                lowered.add_flow(FlowArc(a, b, max_fwd_mw=fwd, dc_params=dc))
            else:
                lowered.add_flow(
                    FlowArc(
                        a,
                        b,
                        max_fwd_mw=fwd,
                        max_bwd_mw=INF if bwd is None else bwd,
                        two_sided=True,
                        dc_params=dc,
                    )
                )
        else:  # THREE_BB_4F: transport asset with four positive flows
            tr = f"cl_{a}_{b}"
            lowered.add_asset(Asset(id=tr, kind=AssetKind.TRANSPORT))
            lowered.add_flow(FlowArc(a, tr, max_fwd_mw=fwd))
            lowered.add_flow(FlowArc(tr, b, max_fwd_mw=fwd, dc_params=dc))
            lowered.add_flow(FlowArc(b, tr, max_fwd_mw=bwd))
            lowered.add_flow(FlowArc(tr, a, max_fwd_mw=bwd))

    # hub-to-hub links derived from cross-hub arcs (possibly via relay hubs)
    for key in sorted(system.arcs):
        arc = system.arcs[key]
        u, v = key
        source_hubs = set(ports.in_hubs.get(u, ()))
        sink_hubs = set(ports.out_hubs.get(v, ()))
        if u in ports.node_hub:
            source_hubs.add(ports.node_hub[u])
        if v in ports.node_hub:
            sink_hubs.add(ports.node_hub[v])
        if not source_hubs or not sink_hubs:
            lowered.add_flow(arc)  # direct arc, identical in every approach
            continue
        common = source_hubs & sink_hubs
        if common:
            # intra-hub arc: collapses onto the member connection arcs
            hub_id = min(common)
            if u not in ports.node_hub:
                note_member_arc(u, hub_id, arc.op_cost)
            if v not in ports.node_hub:
                note_member_arc(hub_id, v)
            continue
        hu, hv = min(source_hubs), min(sink_hubs)
        chain = [hu, *arc.via_hubs, hv]
        for a, b in zip(chain, chain[1:]):
            note_link(a, b, arc.max_fwd_mw, arc.max_bwd_mw, dc=arc.dc_params)
        if u not in ports.node_hub:
            note_member_arc(u, hu, arc.op_cost)
        if v not in ports.node_hub:
            note_member_arc(hv, v)

    for a, b in sorted(link_caps):
        fwd, bwd, dc = link_caps[(a, b)]
        add_link(a, b, fwd, bwd, dc=dc, interval=True)

    for (u, v), cost in sorted(member_arcs.items()):
        hub = system.hubs.get(u) or system.hubs.get(v)
        if u in system.hubs:
            cap = hub.port_cap(v, "out")
        else:
            cap = hub.port_cap(u, "in")
        lowered.add_flow(FlowArc(u, v, max_fwd_mw=cap, op_cost=cost))

    # consumers attached as direct members (single delivery arc)
    for consumer, hub_id in sorted(ports.node_hub.items()):
        if consumer in ports.node_linked:
            continue
        hub = system.hubs[hub_id]
        cap = hub.port_cap(consumer, "out")
        if (hub_id, consumer) not in lowered.arcs:
            lowered.add_flow(FlowArc(hub_id, consumer, max_fwd_mw=cap))

    # consumers with both ports: bidirectional node link
    for consumer, hub_id in sorted(ports.node_linked.items()):
        hub = system.hubs[hub_id]
        toward_cap = 0.0 if consumer in _forbidden_sources(hub) else cap_big
        out_cap = hub.port_cap(consumer, "out")
        if out_cap is None:
            out_cap = cap_big
        add_link(hub_id, consumer, out_cap, toward_cap)

    return lowered


# ---------------------------------------------------------------------------
# LP generation (uniform over any graph)
# ---------------------------------------------------------------------------


class _Builder:
    def __init__(self, system: EnergySystem, dc_opf: bool, unit_commitment: bool):
        self.system = system
        self.dc_opf = dc_opf
        self.uc = unit_commitment
        self.lp = LpInstance(name=system.name)
        self.index: dict[tuple, int] = {}

    def add_var(self, ref: VariableRef) -> int:
        j = len(self.lp.variables)
        self.lp.variables.append(ref)
        self.index[(ref.role, ref.key, ref.timestep)] = j
        return j

    def var(self, role: VarRole, key: tuple[str, ...], t: Optional[int]) -> int:
        return self.index[(role, key, t)]

    def flow(self, u: str, v: str, t: int) -> int:
        return self.var(VarRole.FLOW, (u, v), t)

    def row(self, family, sense, rhs, terms, name, rhs_low=None) -> None:
        self.lp.rows.append(
            ConstraintRow(family=family, sense=sense, rhs=rhs, terms=terms, name=name, rhs_low=rhs_low)
        )

    # -- variables -------------------------------------------------------

    def create_variables(self) -> None:
        sy = self.system
        T = sy.horizon_t
        refs: list[VariableRef] = []
        for key in sorted(sy.arcs):
            arc = sy.arcs[key]
            free = arc.two_sided or (self.dc_opf and arc.dc_params is not None)
            lower = -INF if free else 0.0
            for t in range(1, T + 1):
                refs.append(VariableRef(VarRole.FLOW, key, t, lower=lower))
        for asset in sorted(sy.assets):
            a = sy.assets[asset]
            if a.kind is AssetKind.STORAGE:
                for t in range(1, T + 1):
                    refs.append(
                        VariableRef(VarRole.STORAGE_LEVEL, (asset,), t, upper=a.storage_capacity_mwh)
                    )
            if a.investable:
                upper = INF if a.invest_limit is None else float(a.invest_limit)
                refs.append(VariableRef(VarRole.INVEST, (asset,), None, upper=upper))
            if self.uc and a.uc_enabled:
                for t in range(1, T + 1):
                    refs.append(VariableRef(VarRole.UNITS_ON, (asset,), t, integrality=True))
                    refs.append(VariableRef(VarRole.FLOW_ABOVE_MIN, (asset,), t))
        if self.dc_opf:
            angle_assets = sorted(a for a, ref in sy.assets.items() if ref.voltage_angle_enabled)
            for rank, asset in enumerate(angle_assets):
                for t in range(1, T + 1):
                    # first angle-enabled asset is the reference bus
                    lo, up = (0.0, 0.0) if rank == 0 else (-INF, INF)
                    refs.append(VariableRef(VarRole.VOLTAGE_ANGLE, (asset,), t, lower=lo, upper=up))
        refs.sort(key=VariableRef.sort_key)
        for ref in refs:
            self.add_var(ref)

    # -- objective -------------------------------------------------------

    def emit_objective(self) -> None:
        terms: dict[int, float] = {}
        for asset in sorted(self.system.assets):
            a = self.system.assets[asset]
            if a.investable and a.invest_cost:
                terms[self.var(VarRole.INVEST, (asset,), None)] = a.invest_cost
        for key in sorted(self.system.arcs):
            arc = self.system.arcs[key]
            if arc.op_cost:
                for t in range(1, self.system.horizon_t + 1):
                    terms[self.flow(*key, t)] = arc.op_cost
        self.lp.objective = sorted(terms.items())

    # -- balance rows ----------------------------------------------------

    def _balance_terms(self, asset_id: str, t: int, w_in: float, w_out: float):
        terms = []
        for arc in sorted(self.system.inflows(asset_id), key=lambda a: a.key):
            terms.append((self.flow(*arc.key, t), w_in))
        for arc in sorted(self.system.outflows(asset_id), key=lambda a: a.key):
            terms.append((self.flow(*arc.key, t), w_out))
        return terms

    def emit_consumer_balance(self, t: int) -> None:
        for asset in sorted(self.system.assets):
            a = self.system.assets[asset]
            if a.kind is not AssetKind.CONSUMER:
                continue
            terms = self._balance_terms(asset, t, 1.0, -1.0)
            self.row(RowFamily.CONSUMER_BALANCE, "=", a.demand(t), terms, f"bal_{asset}_t{t}")

    def emit_node_balance(self, t: int) -> None:
        for asset in sorted(self.system.assets):
            if self.system.assets[asset].kind is not AssetKind.HUB:
                continue
            terms = self._balance_terms(asset, t, 1.0, -1.0)
            if terms:
                self.row(RowFamily.NODE_BALANCE, "=", 0.0, terms, f"node_{asset}_t{t}")

    def emit_storage_balance(self, t: int) -> None:
        for asset in sorted(self.system.assets):
            a = self.system.assets[asset]
            if a.kind is not AssetKind.STORAGE:
                continue
            terms = [(self.var(VarRole.STORAGE_LEVEL, (asset,), t), 1.0)]
            if t > 1:
                terms.append((self.var(VarRole.STORAGE_LEVEL, (asset,), t - 1), -1.0))
            terms += self._balance_terms(asset, t, -a.eta_in, 1.0 / a.eta_out)
            rhs = a.initial_storage_mwh if t == 1 else 0.0
            self.row(RowFamily.STORAGE_BALANCE, "=", rhs, terms, f"sto_{asset}_t{t}")

    def emit_transport_balance(self, t: int) -> None:
        for asset in sorted(self.system.assets):
            if self.system.assets[asset].kind is not AssetKind.TRANSPORT:
                continue
            terms = self._balance_terms(asset, t, 1.0, -1.0)
            self.row(RowFamily.TRANSPORT_BALANCE, "=", 0.0, terms, f"trn_{asset}_t{t}")

    def emit_conversion_balance(self, t: int) -> None:
        for asset in sorted(self.system.assets):
            a = self.system.assets[asset]
            if a.kind is not AssetKind.CONVERSION:
                continue
            terms = self._balance_terms(asset, t, a.eta_in, -1.0)
            self.row(RowFamily.CONVERSION_BALANCE, "=", 0.0, terms, f"cnv_{asset}_t{t}")

    # -- limit rows ------------------------------------------------------

    def _capacity_row(self, asset: Asset, t: int, direction: str, family, name: str) -> None:
        arcs = (
            self.system.outflows(asset.id) if direction == "out" else self.system.inflows(asset.id)
        )
        if not arcs or asset.capacity_mw is None:
            return
        avail = asset.availability(t) if direction == "out" else 1.0
        terms = [(self.flow(*arc.key, t), 1.0) for arc in sorted(arcs, key=lambda a: a.key)]
        if asset.investable:
            terms.append(
                (self.var(VarRole.INVEST, (asset.id,), None), -asset.capacity_mw * avail)
            )
        rhs = asset.capacity_mw * avail * asset.initial_units
        self.row(family, "<=", rhs, terms, name)

    def emit_capacity_rows(self, t: int) -> None:
        for asset_id in sorted(self.system.assets):
            a = self.system.assets[asset_id]
            if a.kind in (AssetKind.HUB, AssetKind.TRANSPORT, AssetKind.CONSUMER):
                continue
            self._capacity_row(a, t, "out", RowFamily.CAPACITY_LIMIT, f"cap_{asset_id}_t{t}")

    def emit_charging_rows(self, t: int) -> None:
        for asset_id in sorted(self.system.assets):
            a = self.system.assets[asset_id]
            if a.kind is AssetKind.STORAGE:
                self._capacity_row(a, t, "in", RowFamily.CHARGING_LIMIT, f"chg_{asset_id}_t{t}")

    def emit_storage_capacity(self, t: int) -> None:
        for asset_id in sorted(self.system.assets):
            a = self.system.assets[asset_id]
            if a.kind is not AssetKind.STORAGE:
                continue
            terms = [(self.var(VarRole.STORAGE_LEVEL, (asset_id,), t), 1.0)]
            self.row(RowFamily.STORAGE_CAPACITY, "<=", a.storage_capacity_mwh, terms, f"scap_{asset_id}_t{t}")

    def emit_flow_bounds(self, t: int) -> None:
        for key in sorted(self.system.arcs):
            arc = self.system.arcs[key]
            j = self.flow(*key, t)
            name = f"fb_{key[0]}_{key[1]}_t{t}"
            if arc.two_sided:
                if arc.max_fwd_mw is not None:
                    low = None if arc.max_bwd_mw == INF else -arc.max_bwd_mw
                    self.row(
                        RowFamily.FLOW_BOUND,
                        "<=",
                        arc.max_fwd_mw,
                        [(j, 1.0)],
                        name,
                        rhs_low=low,
                    )
                # an unbounded two-sided flow needs no row at all
            elif arc.max_fwd_mw is not None:
                self.row(RowFamily.FLOW_BOUND, "<=", arc.max_fwd_mw, [(j, 1.0)], name)

    # -- extensions ------------------------------------------------------

    def emit_dc_opf(self, t: int) -> None:
        for key in sorted(self.system.arcs):
            arc = self.system.arcs[key]
            if arc.dc_params is None:
                continue
            u, v = key
            for endpoint in key:
                if not self.system.assets[endpoint].voltage_angle_enabled:
                    raise MissingAngleAsset(
                        f"arc {key}: endpoint {endpoint!r} has no voltage angle"
                    )
            b = arc.dc_params.susceptance
            terms = [
                (self.flow(u, v, t), 1.0),
                (self.var(VarRole.VOLTAGE_ANGLE, (u,), t), -b),
                (self.var(VarRole.VOLTAGE_ANGLE, (v,), t), b),
            ]
            self.row(RowFamily.DC_ANGLE, "=", 0.0, terms, f"dc_{u}_{v}_t{t}")

    def emit_unit_commitment(self, t: int) -> None:
        for asset_id in sorted(self.system.assets):
            a = self.system.assets[asset_id]
            if not a.uc_enabled:
                continue
            u_j = self.var(VarRole.UNITS_ON, (asset_id,), t)
            fa_j = self.var(VarRole.FLOW_ABOVE_MIN, (asset_id,), t)
            out = sorted(self.system.outflows(asset_id), key=lambda arc: arc.key)
            terms = [(fa_j, 1.0)] + [(self.flow(*arc.key, t), -1.0) for arc in out]
            terms.append((u_j, a.min_capacity_mw))
            self.row(RowFamily.UC_MIN_OPER, "=", 0.0, terms, f"ucm_{asset_id}_t{t}")
            lim_terms = [(u_j, 1.0)]
            if a.investable:
                lim_terms.append((self.var(VarRole.INVEST, (asset_id,), None), -1.0))
            self.row(RowFamily.UC_LIMIT, "<=", float(a.initial_units), lim_terms, f"ucl_{asset_id}_t{t}")
            cap = (a.capacity_mw or 0.0) - a.min_capacity_mw
            self.row(
                RowFamily.UC_MAX_ABOVE,
                "<=",
                0.0,
                [(fa_j, 1.0), (u_j, -cap)],
                f"uca_{asset_id}_t{t}",
            )

    def build(self) -> LpInstance:
        self.create_variables()
        self.emit_objective()
        for t in range(1, self.system.horizon_t + 1):
            self.emit_consumer_balance(t)
        for t in range(1, self.system.horizon_t + 1):
            self.emit_storage_balance(t)
        for t in range(1, self.system.horizon_t + 1):
            self.emit_conversion_balance(t)
        for t in range(1, self.system.horizon_t + 1):
            self.emit_node_balance(t)
        for t in range(1, self.system.horizon_t + 1):
            self.emit_transport_balance(t)
        for t in range(1, self.system.horizon_t + 1):
            self.emit_capacity_rows(t)
            self.emit_charging_rows(t)
            self.emit_storage_capacity(t)
            self.emit_flow_bounds(t)
            if self.dc_opf:
                self.emit_dc_opf(t)
            if self.uc:
                self.emit_unit_commitment(t)
        self.lp.check()
        return self.lp


def build_model(
    system: EnergySystem,
    approach: Approach,
    *,
    dc_opf: bool = False,
    unit_commitment: bool = False,
) -> LpInstance:
    """Build the LP for ``system`` under the given modelling approach."""
    diagnostics = [d for d in system.validate() if d.severity == "error"]
    if diagnostics:
        raise InvariantViolation(
            "; ".join(f"{d.entity}: {d.message}" for d in diagnostics)
        )
    if dc_opf and approach is Approach.THREE_BB_4F:
        if any(arc.dc_params is not None for arc in system.arcs.values()):
            raise UnsupportedCombination(
                "DC power flow is not defined on four-flow connections"
            )
    lowered = lower_to_node_form(system, approach) if approach is not Approach.ONE_BB_1F else system
    return _Builder(lowered, dc_opf, unit_commitment).build()
