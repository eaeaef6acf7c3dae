"""Demand not served, generation not served and wheeling loss from a flow solution.

For every bus the imbalance is

    diff = D - Σ_in min(|inflow|, cap) + Σ_out min(|outflow|, cap) - G

with the min taken line by line. Incoming/outgoing follow the sign of the
solved flow, inflows are measured at the receiving end and outflows at the
sending end, and G is the dispatched generation (the slack's balancing
injection at the slack bus). Positive diff is unserved demand, negative diff
is generation that cannot be evacuated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dcflow import FlowSolution, dispatched_generation_mw
from .network import Bus, Network

DEFAULT_EPS_MW = 1e-6


@dataclass(frozen=True)
class BusAdequacy:
    bus_id: str
    diff_mw: float
    dns_mw: float
    gns_mw: float


@dataclass(frozen=True)
class AdequacyReport:
    per_bus: tuple[BusAdequacy, ...]
    dns_total_mw: float
    gns_total_mw: float
    wheeling_loss_mw: float
    congested_line_ids: frozenset[str]

    def bus(self, bus_id: str) -> BusAdequacy:
        for entry in self.per_bus:
            if entry.bus_id == bus_id:
                return entry
        raise KeyError(bus_id)

    @property
    def diffs(self) -> list[float]:
        return [entry.diff_mw for entry in self.per_bus]


def sending_receiving_mw(flow: FlowSolution, k: int) -> tuple[float, float, bool]:
    """(sending-end MW, receiving-end MW, True if from_bus is the sender) for line k."""
    f_from = float(flow.from_flow_mw[k])
    f_to = float(flow.to_flow_mw[k])
    if f_from + f_to >= 0:
        return f_from, f_to, True
    return -f_to, -f_from, False


def congested_lines(
    network: Network, flow: FlowSolution, eps_mw: float = DEFAULT_EPS_MW
) -> frozenset[str]:
    """Lines whose sending-end flow exceeds capacity by more than ``eps_mw``."""
    return frozenset(
        ln.id
        for k, ln in enumerate(network.lines)
        if sending_receiving_mw(flow, k)[0] > ln.capacity_mw + eps_mw
    )


def bus_diff(network: Network, flow: FlowSolution, bus: Bus) -> float:
    generation = dispatched_generation_mw(network, flow)[network.bus_index()[bus.id]]
    diff = bus.demand_mw - generation
    for k, ln in enumerate(network.lines):
        if bus.id not in (ln.from_bus, ln.to_bus):
            continue
        sending, receiving, from_sends = sending_receiving_mw(flow, k)
        if sending == 0.0:
            continue
        outgoing = from_sends == (bus.id == ln.from_bus)
        if outgoing:
            diff += min(sending, ln.capacity_mw)
        else:
            diff -= min(receiving, ln.capacity_mw)
    return float(diff)


def classify_diff(diff_mw: float) -> tuple[float, float]:
    """Split a signed imbalance into (dns, gns)."""
    if diff_mw > 0:
        return diff_mw, 0.0
    if diff_mw < 0:
        return 0.0, -diff_mw
    return 0.0, 0.0


def wheeling_loss(network: Network, flow: FlowSolution, eps_mw: float = DEFAULT_EPS_MW) -> float:
    """Total sending-end overload of the congested lines."""
    congested = congested_lines(network, flow, eps_mw)
    return float(
        sum(
            sending_receiving_mw(flow, k)[0] - ln.capacity_mw
            for k, ln in enumerate(network.lines)
            if ln.id in congested
        )
    )


def aggregate_adequacy(
    network: Network,
    flow: FlowSolution,
    eps_mw: float = DEFAULT_EPS_MW,
    filtered: bool = True,
) -> AdequacyReport:
    """Per-bus imbalance and system totals.

    With ``filtered`` (the default) only buses touching a congested line are
    evaluated; the rest report zero, which is exact for lossless flows since
    their imbalance reduces to KCL there.
    """
    congested = congested_lines(network, flow, eps_mw)
    touched = set()
    for ln in network.lines:
        if ln.id in congested:
            touched.update((ln.from_bus, ln.to_bus))

    per_bus = []
    for bus in network.buses:
        diff = bus_diff(network, flow, bus) if (bus.id in touched or not filtered) else 0.0
        dns, gns = classify_diff(diff)
        per_bus.append(BusAdequacy(bus.id, diff, dns, gns))
    return AdequacyReport(
        per_bus=tuple(per_bus),
        dns_total_mw=sum(b.dns_mw for b in per_bus),
        gns_total_mw=sum(b.gns_mw for b in per_bus),
        wheeling_loss_mw=wheeling_loss(network, flow, eps_mw),
        congested_line_ids=congested,
    )
