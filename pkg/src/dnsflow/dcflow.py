"""Lossless DC load flow with slack-bus dispatch.

Line limits are deliberately not enforced here: the adequacy step measures
violations of the unconstrained flow afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Network, connected_components

RESIDUAL_TOL_PU = 1e-9


class SingularNetworkError(ValueError):
    """The reduced susceptance system has no unique solution."""


@dataclass(frozen=True, eq=False)
class AngleSolution:
    angle_rad: np.ndarray  # per bus, document order; slack entry is exactly 0


@dataclass(frozen=True, eq=False)
class FlowSolution:
    """Per-line flows in MW, signed with the line's (from, to) orientation.

    ``from_flow_mw`` is the power leaving ``from_bus`` into the line and
    ``to_flow_mw`` the power delivered at ``to_bus``; their difference is the
    line loss whatever the direction of the flow.
    """

    line_ids: tuple[str, ...]
    from_flow_mw: np.ndarray
    to_flow_mw: np.ndarray
    loss_mw: np.ndarray
    slack_injection_mw: float
    converged: bool = True
    iterations: int = 1

    @property
    def mid_flow_mw(self) -> np.ndarray:
        return 0.5 * (self.from_flow_mw + self.to_flow_mw)

    @property
    def total_loss_mw(self) -> float:
        return float(self.loss_mw.sum())

    def index(self, line_id: str) -> int:
        return self.line_ids.index(line_id)


def _non_slack_indices(network: Network) -> list[int]:
    return [i for i, bus in enumerate(network.buses) if not bus.is_slack]


def build_reduced_susceptance(network: Network) -> np.ndarray:
    """Nodal susceptance matrix (1/x stencil) with the slack row/column removed."""
    if len(connected_components(network)) != 1:
        raise SingularNetworkError("network is not connected")
    idx = network.bus_index()
    n = len(network.buses)
    full = np.zeros((n, n))
    for line in network.lines:
        if line.reactance_pu <= 0:
            raise SingularNetworkError(f"nonpositive reactance on {line.id}")
        y = 1.0 / line.reactance_pu
        i, j = idx[line.from_bus], idx[line.to_bus]
        full[i, i] += y
        full[j, j] += y
        full[i, j] -= y
        full[j, i] -= y
    keep = _non_slack_indices(network)
    return full[np.ix_(keep, keep)]


def solve_angles(network: Network, injections_pu: np.ndarray) -> AngleSolution:
    """Solve B·θ = P over the non-slack buses; the slack angle is pinned to 0."""
    B = build_reduced_susceptance(network)
    P = np.asarray(injections_pu, dtype=float)
    if P.shape != (B.shape[0],):
        raise ValueError(f"expected {B.shape[0]} injections, got shape {P.shape}")
    try:
        theta = np.linalg.solve(B, P)
    except np.linalg.LinAlgError as exc:
        raise SingularNetworkError(str(exc)) from exc
    residual = np.max(np.abs(B @ theta - P), initial=0.0)
    if not residual < RESIDUAL_TOL_PU:
        raise SingularNetworkError(f"angle solve residual {residual:.3e} pu")
    angles = np.zeros(len(network.buses))
    angles[_non_slack_indices(network)] = theta
    return AngleSolution(angles)


def line_mid_flows_mw(network: Network, angles: AngleSolution) -> np.ndarray:
    idx = network.bus_index()
    theta = angles.angle_rad
    return np.array(
        [
            (theta[idx[ln.from_bus]] - theta[idx[ln.to_bus]]) / ln.reactance_pu * network.base_mva
            for ln in network.lines
        ]
    )


def compute_line_flows(
    network: Network,
    angles: AngleSolution,
    slack_injection_mw: float | None = None,
) -> FlowSolution:
    flows = line_mid_flows_mw(network, angles)
    if slack_injection_mw is None:
        slack_injection_mw = _slack_from_flows(network, flows)
    return FlowSolution(
        line_ids=tuple(ln.id for ln in network.lines),
        from_flow_mw=flows.copy(),
        to_flow_mw=flows.copy(),
        loss_mw=np.zeros(len(network.lines)),
        slack_injection_mw=slack_injection_mw,
    )


def _slack_from_flows(network: Network, flows: np.ndarray) -> float:
    slack = network.slack
    out = sum(f for ln, f in zip(network.lines, flows) if ln.from_bus == slack.id)
    inflow = sum(f for ln, f in zip(network.lines, flows) if ln.to_bus == slack.id)
    return float(out - inflow + slack.demand_mw)


def non_slack_setpoint_mw(network: Network) -> float:
    return sum(b.gen_setpoint_mw for b in network.buses if not b.is_slack)


def slack_balance_mw(network: Network, total_loss_mw: float = 0.0) -> float:
    """Slack output covering demand and losses not met by fixed setpoints."""
    return network.total_demand_mw - non_slack_setpoint_mw(network) + total_loss_mw


def injections_pu(network: Network, extra_demand_mw: np.ndarray | None = None) -> np.ndarray:
    """Net injections (generation − demand − extra demand) at non-slack buses, in pu."""
    buses = network.buses
    extra = np.zeros(len(buses)) if extra_demand_mw is None else extra_demand_mw
    net = np.array([b.gen_setpoint_mw - b.demand_mw for b in buses]) - extra
    return net[_non_slack_indices(network)] / network.base_mva


def run_lossless_dispatch_flow(network: Network) -> FlowSolution:
    """Non-slack generators at their setpoints, slack balances, limits ignored."""
    angles = solve_angles(network, injections_pu(network))
    return compute_line_flows(network, angles, slack_balance_mw(network))


def dispatched_generation_mw(network: Network, flow: FlowSolution) -> np.ndarray:
    """Generation per bus: setpoints, with the slack's balancing injection."""
    return np.array(
        [flow.slack_injection_mw if b.is_slack else b.gen_setpoint_mw for b in network.buses]
    )


def kcl_residuals_mw(network: Network, flow: FlowSolution) -> np.ndarray:
    """Generation − demand − power sent into lines + power received, per bus."""
    idx = network.bus_index()
    residual = dispatched_generation_mw(network, flow) - np.array(
        [b.demand_mw for b in network.buses]
    )
    for k, ln in enumerate(network.lines):
        residual[idx[ln.from_bus]] -= flow.from_flow_mw[k]
        residual[idx[ln.to_bus]] += flow.to_flow_mw[k]
    return residual
