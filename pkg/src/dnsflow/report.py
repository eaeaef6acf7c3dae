"""Case runner and Table I/II/III-shaped reports.

A ComparisonReport is a nested dict keyed case -> loss mode ->
{per_bus, totals, per_line, convergence, mcmf, comparison}. The JSON output
and the text tables are both rendered from it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .adequacy import DEFAULT_EPS_MW, aggregate_adequacy, sending_receiving_mw
from .dcflow import FlowSolution, run_lossless_dispatch_flow
from .loss import DEFAULT_MAX_ITER, DEFAULT_TOL_MW, run_lossy_flow
from .mcmf import build_flow_graph, dns_mcmf, line_flows_mw, max_flow
from .network import (
    CaseVariant,
    Network,
    NetworkFormatError,
    apply_case_variant,
    fixture_path,
    parse_network,
    validate_network,
)

LOSSLESS = "lossless"
LOSSY = "lossy"
METHODS = ("pm", "mcmf", "both")
LOSS_CHOICES = {"off": (LOSSLESS,), "on": (LOSSY,), "both": (LOSSLESS, LOSSY)}

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_INPUT_ERROR = 2


class InputError(ValueError):
    """Unreadable or invalid input; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    network_path: Path = field(default_factory=fixture_path)
    cases: tuple[CaseVariant, ...] = tuple(CaseVariant)
    method: str = "both"
    losses: str = "both"
    eps_mw: float = DEFAULT_EPS_MW
    tol_mw: float = DEFAULT_TOL_MW
    max_iter: int = DEFAULT_MAX_ITER
    output_format: str = "table"

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise InputError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.losses not in LOSS_CHOICES:
            raise InputError(f"losses must be on, off or both, got {self.losses!r}")
        if self.output_format not in ("table", "structured"):
            raise InputError(f"format must be table or structured, got {self.output_format!r}")
        if not (self.eps_mw > 0 and self.tol_mw > 0 and self.max_iter > 0):
            raise InputError("eps, tol and max-iter must be positive")

    @property
    def loss_modes(self) -> tuple[str, ...]:
        return LOSS_CHOICES[self.losses]

    @property
    def with_pm(self) -> bool:
        return self.method in ("pm", "both")

    @property
    def with_mcmf(self) -> bool:
        return self.method in ("mcmf", "both")


@dataclass(frozen=True)
class ComparisonReport:
    metadata: dict[str, Any]
    bus_ids: tuple[str, ...]
    line_ids: tuple[str, ...]
    cases: dict[str, dict[str, dict[str, Any]]]

    def to_structured(self) -> dict[str, Any]:
        return {
            "metadata": self.metadata,
            "bus_ids": list(self.bus_ids),
            "line_ids": list(self.line_ids),
            "cases": self.cases,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_structured(), indent=2) + "\n"

    @property
    def all_converged(self) -> bool:
        return all(
            mode["convergence"]["converged"]
            for modes in self.cases.values()
            for mode in modes.values()
            if "convergence" in mode
        )


def load_checked_network(path: Path) -> tuple[Network, str]:
    """Read, parse and validate; returns the network and the file's sha256."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read network file {path}: {exc.strerror or exc}") from exc
    try:
        network = parse_network(raw.decode("utf-8"))
    except (NetworkFormatError, UnicodeDecodeError) as exc:
        raise InputError(f"invalid network file {path}: {exc}") from exc
    report = validate_network(network)
    if not report.ok:
        raise InputError(f"invalid network file {path}: " + "; ".join(report))
    return network, hashlib.sha256(raw).hexdigest()


def _flow_rows(network: Network, flow: FlowSolution, congested: frozenset[str]) -> list[dict]:
    rows = []
    for k, ln in enumerate(network.lines):
        sending, receiving, _ = sending_receiving_mw(flow, k)
        rows.append(
            {
                "id": ln.id,
                "from_mw": float(flow.from_flow_mw[k]),
                "to_mw": float(flow.to_flow_mw[k]),
                "loss_mw": float(flow.loss_mw[k]),
                "sending_mw": sending,
                "receiving_mw": receiving,
                "capacity_mw": ln.capacity_mw,
                "congested": ln.id in congested,
            }
        )
    return rows


def _pm_block(network: Network, flow: FlowSolution, eps_mw: float) -> dict[str, Any]:
    adequacy = aggregate_adequacy(network, flow, eps_mw)
    return {
        "per_bus": [
            {"bus": b.bus_id, "diff_mw": b.diff_mw, "dns_mw": b.dns_mw, "gns_mw": b.gns_mw}
            for b in adequacy.per_bus
        ],
        "totals": {
            "dns_mw": adequacy.dns_total_mw,
            "gns_mw": adequacy.gns_total_mw,
            "gns_minus_dns_mw": adequacy.gns_total_mw - adequacy.dns_total_mw,
            "wheeling_loss_mw": adequacy.wheeling_loss_mw,
            "network_loss_mw": flow.total_loss_mw,
            "slack_injection_mw": flow.slack_injection_mw,
        },
        "congested_lines": [ln.id for ln in network.lines if ln.id in adequacy.congested_line_ids],
        "per_line": _flow_rows(network, flow, adequacy.congested_line_ids),
        "convergence": {"converged": flow.converged, "iterations": flow.iterations},
    }


def _mcmf_block(network: Network) -> dict[str, Any]:
    graph = build_flow_graph(network)
    result = max_flow(graph)
    cut = []
    for i in sorted(result.min_cut_arcs):
        arc = graph.arcs[i]
        cut.append(
            {
                "tail": graph.nodes[arc.tail],
                "head": graph.nodes[arc.head],
                "kind": arc.kind,
                "line": arc.line_id,
                "capacity_mw": arc.capacity_mw,
            }
        )
    return {
        "max_flow_mw": result.max_flow_mw,
        "dns_mw": dns_mcmf(network, result),
        "min_cut": cut,
        "line_flows_mw": line_flows_mw(graph, result),
    }


def _comparison(dns_pm: float, dns_mc: float, eps_mw: float) -> dict[str, Any]:
    ratio = dns_pm / dns_mc if dns_mc > eps_mw else None
    if dns_pm > dns_mc + eps_mw:
        verdict = "MCMF underestimate"
    elif dns_pm < dns_mc - eps_mw:
        verdict = "MCMF overestimate"
    else:
        verdict = "agree"
    return {"dns_pm_mw": dns_pm, "dns_mcmf_mw": dns_mc, "ratio": ratio, "verdict": verdict}


def run(config: RunConfig) -> tuple[ComparisonReport, int]:
    """Evaluate every requested case and loss mode.

    Raises InputError for unreadable or invalid networks. The exit code is 1
    when a lossy solve fails to converge, 0 otherwise.
    """
    base, digest = load_checked_network(config.network_path)
    cases: dict[str, dict[str, dict[str, Any]]] = {}
    for variant in config.cases:
        try:
            network = apply_case_variant(base, variant)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from exc
        mcmf = _mcmf_block(network) if config.with_mcmf else None
        modes: dict[str, dict[str, Any]] = {}
        for mode in config.loss_modes:
            entry: dict[str, Any] = {}
            if config.with_pm:
                if mode == LOSSLESS:
                    flow = run_lossless_dispatch_flow(network)
                else:
                    flow = run_lossy_flow(network, config.tol_mw, config.max_iter)
                entry.update(_pm_block(network, flow, config.eps_mw))
            if mcmf is not None:
                entry["mcmf"] = mcmf
            if config.with_pm and mcmf is not None:
                entry["comparison"] = _comparison(
                    entry["totals"]["dns_mw"], mcmf["dns_mw"], config.eps_mw
                )
            modes[mode] = entry
        cases[variant.value] = modes

    metadata = {
        "tool": "dnsflow",
        "tool_version": __version__,
        "network_file": Path(config.network_path).name,
        "network_sha256": digest,
        "method": config.method,
        "losses": config.losses,
        "eps_mw": config.eps_mw,
        "tol_mw": config.tol_mw,
        "max_iter": config.max_iter,
    }
    report = ComparisonReport(
        metadata=metadata,
        bus_ids=tuple(b.id for b in base.buses),
        line_ids=tuple(ln.id for ln in base.lines),
        cases=cases,
    )
    return report, EXIT_OK if report.all_converged else EXIT_NOT_CONVERGED


# -- text rendering ------------------------------------------------------------


def fmt_mw(value: float | None, digits: int = 1) -> str:
    """Fixed decimals with trailing zeros and '-0' dropped (25.0 -> '25')."""
    if value is None:
        return "-"
    text = f"{value:.{digits}f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _table(title: str, header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def line(cells: list[str]) -> str:
        first = cells[0].ljust(widths[0])
        return " | ".join([first] + [c.rjust(w) for c, w in zip(cells[1:], widths[1:])])

    out = [title, line(header), "-+-".join("-" * w for w in widths)]
    out.extend(line(r) for r in rows)
    return "\n".join(out)


def _per_bus_cells(entry: dict[str, Any], n_bus: int) -> list[str]:
    if "per_bus" not in entry:
        return ["-"] * n_bus
    return [fmt_mw(b["diff_mw"]) for b in entry["per_bus"]]


def render_tables(report: ComparisonReport) -> str:
    buses = [f"Bus-{b}" for b in report.bus_ids]
    n_bus = len(buses)
    modes = report.metadata["losses"]
    sections = []

    if LOSSLESS in LOSS_CHOICES[modes]:
        rows = []
        for case, by_mode in report.cases.items():
            entry = by_mode[LOSSLESS]
            rows.append(
                [case[-1], *_per_bus_cells(entry, n_bus)]
                + [
                    fmt_mw(entry["totals"]["dns_mw"]) if "totals" in entry else "-",
                    fmt_mw(entry["mcmf"]["dns_mw"]) if "mcmf" in entry else "-",
                ]
            )
        sections.append(
            _table(
                "TABLE I. DNS/GNS FOR LOSSLESS NETWORK (MW; negative = GNS, positive = DNS)",
                ["Case", *buses, "DNS PM", "DNS MCMF"],
                rows,
            )
        )

    sections.append(_render_flow_table(report))

    if LOSSY in LOSS_CHOICES[modes]:
        rows = []
        for case, by_mode in report.cases.items():
            entry = by_mode[LOSSY]
            totals = entry.get("totals")
            rows.append(
                [case[-1], *_per_bus_cells(entry, n_bus)]
                + (
                    [
                        fmt_mw(totals["dns_mw"]),
                        fmt_mw(totals["gns_mw"]),
                        fmt_mw(totals["gns_minus_dns_mw"]),
                    ]
                    if totals
                    else ["-", "-", "-"]
                )
            )
        sections.append(
            _table(
                "TABLE III. DNS/GNS FOR NETWORK WITH LOSSES (MW)",
                ["Case", *buses, "DNS", "GNS", "GNS-DNS"],
                rows,
            )
        )

    comparisons = []
    for case, by_mode in report.cases.items():
        for mode, entry in by_mode.items():
            cmp_ = entry.get("comparison")
            if cmp_ is None:
                continue
            ratio = "n/a" if cmp_["ratio"] is None else f"{cmp_['ratio']:.2f}"
            comparisons.append(
                f"{case} {mode}: DNS PM {fmt_mw(cmp_['dns_pm_mw'], 2)}"
                f" vs MCMF {fmt_mw(cmp_['dns_mcmf_mw'], 2)}, ratio {ratio}: {cmp_['verdict']}"
            )
    if comparisons:
        sections.append("DNS COMPARISON\n" + "\n".join(comparisons))
    return "\n\n".join(sections) + "\n"


def _render_flow_table(report: ComparisonReport) -> str:
    case_keys = list(report.cases)
    first = report.cases[case_keys[0]] if case_keys else {}
    lossless = first.get(LOSSLESS, {}).get("per_line")
    lossy = first.get(LOSSY, {}).get("per_line")

    def mcmf_of(case: str) -> dict[str, Any] | None:
        for entry in report.cases[case].values():
            if "mcmf" in entry:
                return entry["mcmf"]
        return None

    header = ["Line", "LLN", "NL from", "NL to", *(f"MCMF {c}" for c in case_keys)]
    rows = []
    for k, line_id in enumerate(report.line_ids):
        row = [
            line_id,
            fmt_mw(lossless[k]["from_mw"], 2) if lossless else "-",
            fmt_mw(lossy[k]["from_mw"], 2) if lossy else "-",
            fmt_mw(lossy[k]["to_mw"], 2) if lossy else "-",
        ]
        for case in case_keys:
            mc = mcmf_of(case)
            row.append(fmt_mw(abs(mc["line_flows_mw"][line_id]), 2) if mc else "-")
        rows.append(row)

    blank = ["", "", ""]
    rows.append(
        ["Max flow at min cut", *blank]
        + [fmt_mw(m["max_flow_mw"], 2) if (m := mcmf_of(c)) else "-" for c in case_keys]
    )
    for mode, label in ((LOSSLESS, "WL (lossless flows)"), (LOSSY, "WL (lossy flows)")):
        cells = []
        for case in case_keys:
            totals = report.cases[case].get(mode, {}).get("totals")
            cells.append(fmt_mw(totals["wheeling_loss_mw"]) if totals else "-")
        if any(c != "-" for c in cells):
            rows.append([label, *blank, *cells])
    return _table("TABLE II. POWER FLOW IN THE ELECTRICAL NETWORK (MW)", header, rows)
