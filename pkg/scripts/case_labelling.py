"""Compare two readings of the case-study capacity edits.

literal:  case 2 caps T1 at 25 MW, case 3 caps T2 at 25 MW (line names as in
          the prose describing the cases)
adopted:  case 2 caps T2 at 25 MW, case 3 additionally caps T5 at 25 MW (line
          names as in the flow table; the library's CASE_EDITS)

Flows do not depend on capacities, so only the per-bus DIFF rows move.

    python scripts/case_labelling.py
"""

from __future__ import annotations

from dataclasses import replace

from dnsflow import reference as ref
from dnsflow.adequacy import aggregate_adequacy
from dnsflow.dcflow import run_lossless_dispatch_flow
from dnsflow.mcmf import build_flow_graph, max_flow
from dnsflow.network import CASE_EDITS, CaseVariant, load_fixture

LITERAL = {1: {}, 2: {"T1": 25.0}, 3: {"T2": 25.0}}


def with_caps(network, edits):
    return replace(
        network,
        lines=tuple(replace(ln, capacity_mw=edits.get(ln.id, ln.capacity_mw)) for ln in network.lines),
    )


def main() -> None:
    base = load_fixture()
    readings = {
        "literal": LITERAL,
        "adopted": {v.number: CASE_EDITS[v] for v in CaseVariant},
    }
    for name, edits in readings.items():
        print(f"{name}:")
        for case in (1, 2, 3):
            net = with_caps(base, edits[case])
            report = aggregate_adequacy(net, run_lossless_dispatch_flow(net))
            mf = max_flow(build_flow_graph(net)).max_flow_mw
            worst = max(abs(a - b) for a, b in zip(report.diffs, ref.LOSSLESS_PER_BUS_MW[case]))
            diffs = ", ".join(f"{d:7.2f}" for d in report.diffs)
            print(
                f"  case {case}: DIFF [{diffs}]  DNS {report.dns_total_mw:6.2f}"
                f"  max flow {mf:g}  worst |diff - published| {worst:.2f} MW"
            )


if __name__ == "__main__":
    main()
