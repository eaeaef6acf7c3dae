"""Network data model, document parsing and validation.

A network document is YAML (JSON also parses) with top-level keys
``base_mva``, ``buses`` and ``lines``::

    base_mva: 100
    buses:
      - {id: 1, demand_mw: 0, gen_capacity_mw: 150, gen_setpoint_mw: 0, slack: true}
      - {id: 2, demand_mw: 50, gen_capacity_mw: 0, gen_setpoint_mw: 0, slack: false}
    lines:
      - {id: L1, from: 1, to: 2, reactance_pu: 0.1, resistance_pu: 0.0, capacity_mw: 100}

Document order of buses and lines is canonical; downstream matrices index
buses in that order.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Iterator

import yaml

FIXTURE_NAME = "ieee5.net"


class NetworkFormatError(ValueError):
    """Raised when a network document cannot be turned into a Network."""


@dataclass(frozen=True)
class Bus:
    id: str
    demand_mw: float = 0.0
    gen_capacity_mw: float = 0.0
    gen_setpoint_mw: float = 0.0
    is_slack: bool = False

    @property
    def has_generator(self) -> bool:
        return self.gen_capacity_mw > 0


@dataclass(frozen=True)
class Line:
    id: str
    from_bus: str
    to_bus: str
    reactance_pu: float
    resistance_pu: float
    capacity_mw: float


@dataclass(frozen=True)
class Network:
    buses: tuple[Bus, ...]
    lines: tuple[Line, ...]
    base_mva: float = 100.0

    @property
    def slack(self) -> Bus:
        for bus in self.buses:
            if bus.is_slack:
                return bus
        raise ValueError("network has no slack bus")

    def bus(self, bus_id: str) -> Bus:
        for bus in self.buses:
            if bus.id == bus_id:
                return bus
        raise KeyError(bus_id)

    def line(self, line_id: str) -> Line:
        for line in self.lines:
            if line.id == line_id:
                return line
        raise KeyError(line_id)

    def bus_index(self) -> dict[str, int]:
        return {bus.id: i for i, bus in enumerate(self.buses)}

    @property
    def total_demand_mw(self) -> float:
        return sum(bus.demand_mw for bus in self.buses)


@dataclass(frozen=True)
class ValidationReport:
    """Every violated invariant of a network, one message per violation."""

    issues: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __iter__(self) -> Iterator[str]:
        return iter(self.issues)

    def __len__(self) -> int:
        return len(self.issues)

    def __contains__(self, item: object) -> bool:
        return item in self.issues


class CaseVariant(enum.Enum):
    """The three capacity configurations of the 5-bus case study."""

    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"

    @classmethod
    def parse(cls, text: str) -> CaseVariant:
        key = text.strip().lower()
        if not key.startswith("case"):
            key = "case" + key
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown case variant {text!r}") from None

    @property
    def number(self) -> int:
        return int(self.value[-1])


# Capacity overrides per case, cumulative: case3 keeps the case2 reduction.
# Line ids follow the flow-table labelling of the fixture (see the fixture header).
CASE_EDITS: dict[CaseVariant, dict[str, float]] = {
    CaseVariant.CASE1: {},
    CaseVariant.CASE2: {"T2": 25.0},
    CaseVariant.CASE3: {"T2": 25.0, "T5": 25.0},
}


def apply_case_variant(network: Network, variant: CaseVariant) -> Network:
    """Return a copy of ``network`` with the case's line capacities applied."""
    edits = CASE_EDITS[variant]
    if not edits:
        return network
    known = {line.id for line in network.lines}
    missing = sorted(set(edits) - known)
    if missing:
        raise KeyError(f"{variant.value} needs line(s) {', '.join(missing)}")
    lines = tuple(
        replace(line, capacity_mw=edits[line.id]) if line.id in edits else line
        for line in network.lines
    )
    return replace(network, lines=lines)


# -- parsing -----------------------------------------------------------------

_BUS_KEYS = ("id", "demand_mw", "gen_capacity_mw", "gen_setpoint_mw", "slack")
_LINE_KEYS = ("id", "from", "to", "reactance_pu", "resistance_pu", "capacity_mw")


def _number(record: dict[str, Any], key: str, where: str) -> float:
    value = record.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise NetworkFormatError(f"{where}: '{key}' must be a number, got {value!r}")
    return float(value)


def _require_keys(record: Any, keys: tuple[str, ...], where: str) -> dict[str, Any]:
    if not isinstance(record, dict):
        raise NetworkFormatError(f"{where}: expected a mapping, got {type(record).__name__}")
    missing = [k for k in keys if k not in record]
    if missing:
        raise NetworkFormatError(f"{where}: missing key(s) {', '.join(missing)}")
    unknown = sorted(set(record) - set(keys))
    if unknown:
        raise NetworkFormatError(f"{where}: unknown key(s) {', '.join(map(str, unknown))}")
    return record


def parse_network(document: str) -> Network:
    """Parse a network document.

    Raises NetworkFormatError on malformed documents, duplicate ids, dangling
    bus references and multiple slack buses. Physical invariants (positive
    reactance, connectivity, ...) are left to ``validate_network``.
    """
    try:
        data = yaml.safe_load(document)
    except yaml.YAMLError as exc:
        raise NetworkFormatError(f"malformed document: {exc}") from exc
    if not isinstance(data, dict):
        raise NetworkFormatError("malformed document: top level must be a mapping")
    for key in ("buses", "lines"):
        if not isinstance(data.get(key), list):
            raise NetworkFormatError(f"malformed document: '{key}' must be a list")
    unknown = sorted(set(data) - {"base_mva", "buses", "lines"})
    if unknown:
        raise NetworkFormatError(f"malformed document: unknown key(s) {', '.join(unknown)}")
    base_mva = _number(data, "base_mva", "document") if "base_mva" in data else 100.0

    buses: list[Bus] = []
    seen: set[str] = set()
    for i, raw in enumerate(data["buses"]):
        rec = _require_keys(raw, _BUS_KEYS, f"buses[{i}]")
        bus_id = str(rec["id"])
        where = f"bus {bus_id}"
        if bus_id in seen:
            raise NetworkFormatError(f"duplicate bus id: {bus_id}")
        seen.add(bus_id)
        if not isinstance(rec["slack"], bool):
            raise NetworkFormatError(f"{where}: 'slack' must be true or false")
        buses.append(
            Bus(
                id=bus_id,
                demand_mw=_number(rec, "demand_mw", where),
                gen_capacity_mw=_number(rec, "gen_capacity_mw", where),
                gen_setpoint_mw=_number(rec, "gen_setpoint_mw", where),
                is_slack=rec["slack"],
            )
        )
    slack_ids = [b.id for b in buses if b.is_slack]
    if len(slack_ids) > 1:
        raise NetworkFormatError(f"multiple slack buses: {', '.join(slack_ids)}")

    lines: list[Line] = []
    line_ids: set[str] = set()
    for i, raw in enumerate(data["lines"]):
        rec = _require_keys(raw, _LINE_KEYS, f"lines[{i}]")
        line_id = str(rec["id"])
        where = f"line {line_id}"
        if line_id in line_ids:
            raise NetworkFormatError(f"duplicate line id: {line_id}")
        line_ids.add(line_id)
        for end in ("from", "to"):
            if str(rec[end]) not in seen:
                raise NetworkFormatError(f"{where}: '{end}' references unknown bus {rec[end]}")
        lines.append(
            Line(
                id=line_id,
                from_bus=str(rec["from"]),
                to_bus=str(rec["to"]),
                reactance_pu=_number(rec, "reactance_pu", where),
                resistance_pu=_number(rec, "resistance_pu", where),
                capacity_mw=_number(rec, "capacity_mw", where),
            )
        )
    return Network(buses=tuple(buses), lines=tuple(lines), base_mva=base_mva)


def render_network(network: Network) -> str:
    """Serialize to the document format; ``parse_network`` inverts it exactly."""
    doc = {
        "base_mva": network.base_mva,
        "buses": [
            {
                "id": b.id,
                "demand_mw": b.demand_mw,
                "gen_capacity_mw": b.gen_capacity_mw,
                "gen_setpoint_mw": b.gen_setpoint_mw,
                "slack": b.is_slack,
            }
            for b in network.buses
        ],
        "lines": [
            {
                "id": ln.id,
                "from": ln.from_bus,
                "to": ln.to_bus,
                "reactance_pu": ln.reactance_pu,
                "resistance_pu": ln.resistance_pu,
                "capacity_mw": ln.capacity_mw,
            }
            for ln in network.lines
        ],
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def load_network(path: str | Path) -> Network:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def fixture_path() -> Path:
    """Path of the bundled 5-bus case-study network."""
    return Path(str(resources.files("dnsflow") / "data" / FIXTURE_NAME))


def load_fixture() -> Network:
    return load_network(fixture_path())


# -- validation --------------------------------------------------------------


def connected_components(network: Network) -> list[list[str]]:
    adjacency: dict[str, list[str]] = {b.id: [] for b in network.buses}
    for line in network.lines:
        if line.from_bus in adjacency and line.to_bus in adjacency:
            adjacency[line.from_bus].append(line.to_bus)
            adjacency[line.to_bus].append(line.from_bus)
    seen: set[str] = set()
    components = []
    for bus in network.buses:
        if bus.id in seen:
            continue
        comp = []
        queue = deque([bus.id])
        seen.add(bus.id)
        while queue:
            node = queue.popleft()
            comp.append(node)
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        components.append(comp)
    return components


def validate_network(network: Network) -> ValidationReport:
    issues: list[str] = []
    if network.base_mva <= 0:
        issues.append(f"nonpositive base_mva: {network.base_mva}")
    if len(network.buses) < 2:
        issues.append(f"too few buses: {len(network.buses)}")

    bus_ids = [b.id for b in network.buses]
    for dup in sorted({b for b in bus_ids if bus_ids.count(b) > 1}):
        issues.append(f"duplicate bus id: {dup}")
    line_ids = [ln.id for ln in network.lines]
    for dup in sorted({ln for ln in line_ids if line_ids.count(ln) > 1}):
        issues.append(f"duplicate line id: {dup}")

    n_slack = sum(b.is_slack for b in network.buses)
    if n_slack == 0:
        issues.append("no slack bus")
    elif n_slack > 1:
        issues.append("multiple slack buses")

    for b in network.buses:
        if b.demand_mw < 0:
            issues.append(f"negative demand: bus-{b.id}")
        if b.gen_capacity_mw < 0:
            issues.append(f"negative generation capacity: bus-{b.id}")
        if b.gen_setpoint_mw < 0:
            issues.append(f"negative generation setpoint: bus-{b.id}")
        if b.gen_setpoint_mw > b.gen_capacity_mw:
            issues.append(f"setpoint exceeds capacity: bus-{b.id}")

    known = set(bus_ids)
    for ln in network.lines:
        if ln.reactance_pu <= 0:
            issues.append(f"nonpositive reactance: {ln.id}")
        if ln.resistance_pu < 0:
            issues.append(f"negative resistance: {ln.id}")
        if ln.capacity_mw <= 0:
            issues.append(f"nonpositive capacity: {ln.id}")
        if ln.from_bus == ln.to_bus:
            issues.append(f"self loop: {ln.id}")
        for end in (ln.from_bus, ln.to_bus):
            if end not in known:
                issues.append(f"dangling bus reference: {ln.id} -> {end}")

    components = connected_components(network)
    if len(components) > 1:
        main = max(components, key=len)
        for comp in components:
            if comp is main:
                continue
            issues.extend(f"disconnected: bus-{bus_id}" for bus_id in comp)
    return ValidationReport(tuple(issues))
