"""Loss-compensated DC flow.

Each line's I²R loss is computed from its midpoint flow and charged half to
each terminal bus as extra demand; the DC flow is re-solved until the losses
stop changing. The slack picks up the total loss through the balance.
"""

from __future__ import annotations

import logging

import numpy as np

from .dcflow import (
    FlowSolution,
    injections_pu,
    line_mid_flows_mw,
    slack_balance_mw,
    solve_angles,
)
from .network import Network

log = logging.getLogger(__name__)

DEFAULT_TOL_MW = 1e-6
DEFAULT_MAX_ITER = 50


def line_loss(resistance_pu: float, flow_pu: float) -> float:
    """I²R loss in pu, taking current ≈ power at flat 1 pu voltage."""
    return resistance_pu * flow_pu * flow_pu


def _allocate_half_losses(network: Network, loss_mw: np.ndarray) -> np.ndarray:
    idx = network.bus_index()
    extra = np.zeros(len(network.buses))
    for ln, loss in zip(network.lines, loss_mw):
        extra[idx[ln.from_bus]] += 0.5 * loss
        extra[idx[ln.to_bus]] += 0.5 * loss
    return extra


def run_lossy_flow(
    network: Network,
    tol_mw: float = DEFAULT_TOL_MW,
    max_iter: int = DEFAULT_MAX_ITER,
) -> FlowSolution:
    """Fixed-point loss iteration.

    Stops once the largest per-line loss change is below ``tol_mw``. If
    ``max_iter`` solves are not enough, the last iterate is returned with
    ``converged=False``.
    """
    if tol_mw <= 0:
        raise ValueError("tol_mw must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    base = network.base_mva
    resistance = np.array([ln.resistance_pu for ln in network.lines])
    loss = np.zeros(len(network.lines))
    converged = False
    iteration = 0
    mid = np.zeros(len(network.lines))
    while iteration < max_iter:
        iteration += 1
        extra = None if not loss.any() else _allocate_half_losses(network, loss)
        angles = solve_angles(network, injections_pu(network, extra))
        mid = line_mid_flows_mw(network, angles)
        new_loss = line_loss(resistance, mid / base) * base
        change = float(np.max(np.abs(new_loss - loss), initial=0.0))
        loss = new_loss
        if change < tol_mw:
            converged = True
            break
    if not converged:
        log.warning("loss iteration did not converge in %d iterations", max_iter)

    half = 0.5 * loss
    return FlowSolution(
        line_ids=tuple(ln.id for ln in network.lines),
        from_flow_mw=mid + half,
        to_flow_mw=mid - half,
        loss_mw=loss,
        slack_injection_mw=slack_balance_mw(network, float(loss.sum())),
        converged=converged,
        iterations=iteration,
    )
