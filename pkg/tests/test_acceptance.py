"""Exit criteria for the case-study reproduction and the property suites.

Each test appends one PASS/FAIL line that the terminal summary prints.
"""

import json
import subprocess
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from dnsflow import reference as ref
from dnsflow.adequacy import aggregate_adequacy, bus_diff, congested_lines
from dnsflow.dcflow import kcl_residuals_mw, run_lossless_dispatch_flow
from dnsflow.loss import run_lossy_flow
from dnsflow.mcmf import build_flow_graph, dns_mcmf, max_flow, min_cut_enumeration_oracle
from dnsflow.network import Bus, CaseVariant, Line, Network, apply_case_variant

from .strategies import random_flow_graph, random_network

DEVIATIONS = Path(__file__).resolve().parents[1] / "docs" / "table3_deviations.json"


@pytest.fixture
def record(acceptance_log, request):
    name = request.node.name

    def _record(ok: bool, detail: str, status: str | None = None) -> None:
        acceptance_log.append(f"{status or ('PASS' if ok else 'FAIL')} {name}: {detail}")

    return _record


def cases(network):
    return {v.number: apply_case_variant(network, v) for v in CaseVariant}


def test_criterion_1_lossless_flows(fixture_network, record):
    flow = run_lossless_dispatch_flow(fixture_network)
    residuals = {k: flow.from_flow_mw[flow.index(k)] - v for k, v in ref.LOSSLESS_FLOWS_MW.items()}
    worst = max(abs(r) for r in residuals.values())
    record(worst <= 0.1, f"max |flow - published| = {worst:.3f} MW (tol 0.1)")
    assert worst <= 0.1, residuals


def test_criterion_2_table_i(fixture_network, record):
    failures = []
    for case, net in cases(fixture_network).items():
        rep = aggregate_adequacy(net, run_lossless_dispatch_flow(net))
        for bus, got, want in zip(net.buses, rep.diffs, ref.LOSSLESS_PER_BUS_MW[case]):
            if abs(got - want) > 0.15:
                failures.append(f"case {case} bus {bus.id}: {got:.2f} vs {want}")
        if abs(rep.dns_total_mw - ref.LOSSLESS_DNS_PM_MW[case]) > 0.15:
            failures.append(f"case {case} DNS_pm {rep.dns_total_mw:.2f}")
        gns_ref = -sum(v for v in ref.LOSSLESS_PER_BUS_MW[case] if v < 0)
        if abs(rep.gns_total_mw - gns_ref) > 0.15:
            failures.append(f"case {case} GNS {rep.gns_total_mw:.2f} vs {gns_ref:.2f}")
        mc = dns_mcmf(net, max_flow(build_flow_graph(net)))
        if abs(mc - ref.LOSSLESS_DNS_MCMF_MW[case]) > 0.15:
            failures.append(f"case {case} DNS_mcmf {mc}")
    record(not failures, "per-bus, DNS_pm, GNS and DNS_mcmf within 0.15 MW" if not failures else "; ".join(failures))
    assert not failures


def test_criterion_3_max_flow(fixture_network, record):
    got = {}
    for case, net in cases(fixture_network).items():
        g = build_flow_graph(net)
        got[case] = (max_flow(g).max_flow_mw, min_cut_enumeration_oracle(g))
    ok = all(mf == cut == ref.MAX_FLOW_MW[c] for c, (mf, cut) in got.items())
    record(ok, "max flow / min cut = " + ", ".join(f"{mf:g}/{cut:g}" for mf, cut in got.values()))
    assert ok, got


def test_criterion_4_table_iii(fixture_network, record):
    documented = {
        (d["case"], d["quantity"]): d["computed"]
        for d in json.loads(DEVIATIONS.read_text())["deviations"]
    }
    within, noted, failures = [], [], []
    for case, net in cases(fixture_network).items():
        flow = run_lossy_flow(net)
        assert flow.converged
        # invariants enforced regardless of the published values
        np.testing.assert_allclose(flow.from_flow_mw - flow.to_flow_mw, flow.loss_mw, atol=1e-9)
        assert np.max(np.abs(kcl_residuals_mw(net, flow))) < 1e-5
        rep = aggregate_adequacy(net, flow)
        values = {
            "dns_mw": (rep.dns_total_mw, ref.LOSSY_DNS_MW[case]),
            "gns_mw": (rep.gns_total_mw, ref.LOSSY_GNS_MW[case]),
            "gns_minus_dns_mw": (rep.gns_total_mw - rep.dns_total_mw, ref.LOSSY_GAP_MW[case]),
        }
        for quantity, (got, want) in values.items():
            label = f"case {case} {quantity} {got:.2f} vs {want}"
            if abs(got - want) <= 0.5:
                within.append(label)
            elif (case, quantity) in documented and abs(documented[(case, quantity)] - got) < 1e-3:
                noted.append(label)
            else:
                failures.append(label)
    detail = f"{len(within)}/9 within 0.5 MW; {len(noted)} documented deviations in docs/table3_deviations.json"
    if noted:
        detail += " (" + "; ".join(noted) + ")"
    if failures:
        detail += "; UNDOCUMENTED: " + "; ".join(failures)
    status = "FAIL" if failures else ("PASS (documented deviations)" if noted else "PASS")
    record(not failures, detail, status)
    assert not failures


def test_criterion_5_underestimation_factor(fixture_network, record):
    net = apply_case_variant(fixture_network, CaseVariant.CASE3)
    pm = aggregate_adequacy(net, run_lossless_dispatch_flow(net)).dns_total_mw
    mc = dns_mcmf(net, max_flow(build_flow_graph(net)))
    ratio = pm / mc
    ok = abs(ratio - ref.UNDERESTIMATE_FACTOR_CASE3) <= 0.05
    record(ok, f"DNS_pm/DNS_mcmf = {pm:.2f}/{mc:g} = {ratio:.3f} (target 2.45 +/- 0.05)")
    assert ok


def test_criterion_6_lossless_property_suite(record):
    rng = np.random.default_rng(20241018)
    n_networks = 500
    congested_count = 0
    for _ in range(n_networks):
        net = random_network(rng)
        net = replace(net, lines=tuple(replace(ln, resistance_pu=0.0) for ln in net.lines))
        flow = run_lossless_dispatch_flow(net)
        rep = aggregate_adequacy(net, flow)
        full = aggregate_adequacy(net, flow, filtered=False)
        congested = congested_lines(net, flow)
        congested_count += bool(congested)
        # (a) lossless DNS = GNS
        assert abs(rep.dns_total_mw - rep.gns_total_mw) < 1e-6
        # (b) KCL
        assert np.max(np.abs(kcl_residuals_mw(net, flow))) < 1e-6
        # (c) no congested incident line -> DIFF = 0
        for bus in net.buses:
            if not any(ln.id in congested and bus.id in (ln.from_bus, ln.to_bus) for ln in net.lines):
                assert abs(bus_diff(net, flow, bus)) < 1e-6
        # (d) filtered = unfiltered
        np.testing.assert_allclose(rep.diffs, full.diffs, atol=1e-6)
        # (e) WL >= 0, zero iff uncongested
        assert rep.wheeling_loss_mw >= 0
        assert (rep.wheeling_loss_mw > 0) == bool(congested)
    record(True, f"{n_networks} random networks (3-10 buses), {congested_count} with congestion: (a)-(e) hold")
    assert congested_count > n_networks // 10


def test_criterion_7_max_flow_duality(record):
    rng = np.random.default_rng(7)
    n_graphs = 200
    mismatches = []
    for i in range(n_graphs):
        g = random_flow_graph(rng, max_nodes=12)
        a, b = max_flow(g).max_flow_mw, min_cut_enumeration_oracle(g)
        if a != b:
            mismatches.append((i, a, b))
    record(not mismatches, f"{n_graphs} random graphs (<= 12 nodes): solver == enumeration exactly")
    assert not mismatches


def test_criterion_8_lossy_solver(fixture_network, record):
    tol = 1e-6
    for net in cases(fixture_network).values():
        flow = run_lossy_flow(net, tol_mw=tol)
        assert flow.converged and flow.iterations <= 20
        np.testing.assert_allclose(flow.from_flow_mw - flow.to_flow_mw, flow.loss_mw, rtol=0, atol=1e-12)
        setpoints = sum(b.gen_setpoint_mw for b in net.buses if not b.is_slack)
        assert abs(flow.slack_injection_mw + setpoints - net.total_demand_mw - flow.total_loss_mw) < tol

    r0 = replace(fixture_network, lines=tuple(replace(ln, resistance_pu=0.0) for ln in fixture_network.lines))
    lossy, lossless = run_lossy_flow(r0), run_lossless_dispatch_flow(r0)
    bitwise = (
        lossy.iterations == 1
        and np.array_equal(lossy.from_flow_mw, lossless.from_flow_mw)
        and np.array_equal(lossy.to_flow_mw, lossless.to_flow_mw)
        and lossy.slack_injection_mw == lossless.slack_injection_mw
    )
    assert bitwise

    two_bus = Network(
        buses=(Bus("1", gen_capacity_mw=200, is_slack=True), Bus("2", demand_mw=100)),
        lines=(Line("L", "1", "2", 0.1, 0.01, 150.0),),
    )
    loss = run_lossy_flow(two_bus).loss_mw[0]
    ok = abs(loss - 1.01) < 1e-3
    record(ok, f"from-to=loss, balance within tol, r=0 bitwise lossless, 2-bus loss {loss:.5f} MW")
    assert ok


def test_criterion_9_cli_end_to_end(record):
    cmd = [sys.executable, "-m", "dnsflow.cli", "run", "--case", "all", "--method", "both", "--losses", "both"]
    outputs, times = [], []
    for _ in range(2):
        start = time.perf_counter()
        result = subprocess.run(cmd, capture_output=True, check=True)
        times.append(time.perf_counter() - start)
        outputs.append(result.stdout)
    structured = [
        subprocess.run(cmd + ["--format", "structured"], capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    ok = max(times) < 1.0 and outputs[0] == outputs[1] and structured[0] == structured[1]
    record(ok, f"wall time {max(times):.2f} s (< 1 s), byte-identical table and structured output")
    assert ok
