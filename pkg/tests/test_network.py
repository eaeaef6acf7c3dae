from dataclasses import replace

import pytest
from hypothesis import given

from dnsflow.network import (
    Bus,
    CaseVariant,
    Line,
    Network,
    NetworkFormatError,
    apply_case_variant,
    fixture_path,
    load_network,
    parse_network,
    render_network,
    validate_network,
)

from .strategies import networks

TWO_BUS = """
base_mva: 100
buses:
  - {id: 1, demand_mw: 0, gen_capacity_mw: 100, gen_setpoint_mw: 0, slack: true}
  - {id: 2, demand_mw: 50, gen_capacity_mw: 0, gen_setpoint_mw: 0, slack: false}
lines:
  - {id: L1, from: 1, to: 2, reactance_pu: 1.0, resistance_pu: 0.0, capacity_mw: 100}
"""


def test_parse_minimal_two_bus():
    net = parse_network(TWO_BUS)
    assert [b.id for b in net.buses] == ["1", "2"]
    assert len(net.lines) == 1
    assert net.slack.id == "1"
    assert net.lines[0] == Line("L1", "1", "2", 1.0, 0.0, 100.0)
    assert validate_network(net).ok


def test_parse_fixture(fixture_network):
    net = fixture_network
    assert len(net.buses) == 5
    assert [ln.id for ln in net.lines] == [f"T{k}" for k in range(1, 8)]
    assert net.slack.id == "1"
    assert [b.id for b in net.buses if b.gen_capacity_mw > 0] == ["1", "2"]
    assert [b.id for b in net.buses if b.demand_mw > 0] == ["2", "3", "4", "5"]
    assert net.total_demand_mw == 200.0
    assert net.base_mva == 100.0


def test_json_documents_parse():
    doc = (
        '{"buses": [{"id": "a", "demand_mw": 0, "gen_capacity_mw": 10, "gen_setpoint_mw": 0,'
        ' "slack": true}, {"id": "b", "demand_mw": 5, "gen_capacity_mw": 0,'
        ' "gen_setpoint_mw": 0, "slack": false}], "lines": [{"id": "x", "from": "a", "to": "b",'
        ' "reactance_pu": 0.2, "resistance_pu": 0, "capacity_mw": 9.5}]}'
    )
    net = parse_network(doc)
    assert net.base_mva == 100.0
    assert net.line("x").capacity_mw == 9.5


@pytest.mark.parametrize(
    "edit, message",
    [
        (lambda d: d.replace("slack: false", "slack: true"), "multiple slack buses"),
        (lambda d: d.replace("id: 2,", "id: 1,"), "duplicate bus id: 1"),
        (lambda d: d.replace("to: 2", "to: 7"), "unknown bus 7"),
        (lambda d: d.replace("reactance_pu: 1.0", "reactance_pu: abc"), "'reactance_pu' must be a number"),
        (lambda d: d.replace("capacity_mw: 100", "capacity_mw: 100, colour: red"), "unknown key(s) colour"),
        (lambda d: d.replace(", slack: false", ""), "missing key(s) slack"),
        (lambda d: "buses: [", "malformed document"),
        (lambda d: "- 1\n- 2\n", "top level must be a mapping"),
    ],
)
def test_parse_errors_name_the_offending_key(edit, message):
    with pytest.raises(NetworkFormatError, match=None) as info:
        parse_network(edit(TWO_BUS))
    assert message in str(info.value)


def test_duplicate_line_id():
    doc = TWO_BUS + "  - {id: L1, from: 2, to: 1, reactance_pu: 1.0, resistance_pu: 0.0, capacity_mw: 1}\n"
    with pytest.raises(NetworkFormatError, match="duplicate line id: L1"):
        parse_network(doc)


def test_validate_fixture_is_clean(fixture_network):
    assert validate_network(fixture_network).issues == ()


def test_validate_reports_every_violation():
    net = parse_network(TWO_BUS)
    isolated = Bus("3", demand_mw=5.0)
    bad_line = replace(net.lines[0], reactance_pu=0.0)
    broken = replace(net, buses=net.buses + (isolated,), lines=(bad_line,))
    report = validate_network(broken)
    assert "disconnected: bus-3" in report
    assert "nonpositive reactance: L1" in report
    assert not report.ok


def test_validate_other_invariants():
    net = Network(
        buses=(
            Bus("1", gen_capacity_mw=10, gen_setpoint_mw=20),
            Bus("2", demand_mw=-1),
        ),
        lines=(Line("a", "1", "1", 0.1, -0.1, 0.0),),
    )
    issues = set(validate_network(net))
    assert {
        "no slack bus",
        "setpoint exceeds capacity: bus-1",
        "negative demand: bus-2",
        "negative resistance: a",
        "nonpositive capacity: a",
        "self loop: a",
        "disconnected: bus-2",
    } <= issues


def test_single_bus_is_too_small():
    assert "too few buses: 1" in validate_network(Network((Bus("1", is_slack=True),), ()))


@pytest.mark.parametrize(
    "variant, expected",
    [
        (CaseVariant.CASE1, {}),
        (CaseVariant.CASE2, {"T2": 25.0}),
        (CaseVariant.CASE3, {"T2": 25.0, "T5": 25.0}),
    ],
)
def test_case_variants(fixture_network, variant, expected):
    before = {ln.id: ln.capacity_mw for ln in fixture_network.lines}
    out = apply_case_variant(fixture_network, variant)
    after = {ln.id: ln.capacity_mw for ln in out.lines}
    changed = {k: v for k, v in after.items() if v != before[k]}
    assert changed == expected
    # input untouched, everything but capacities identical
    assert {ln.id: ln.capacity_mw for ln in fixture_network.lines} == before
    assert out.buses == fixture_network.buses
    assert [replace(a, capacity_mw=0) for a in out.lines] == [
        replace(b, capacity_mw=0) for b in fixture_network.lines
    ]


def test_case_capacities_before_edit(fixture_network):
    # the edited lines start at the capacities stated for the case study
    assert fixture_network.line("T2").capacity_mw == 100.0
    assert fixture_network.line("T5").capacity_mw == 75.0


def test_case1_is_identity(fixture_network):
    assert apply_case_variant(fixture_network, CaseVariant.CASE1) == fixture_network


def test_case_variant_needs_lines():
    net = parse_network(TWO_BUS)
    with pytest.raises(KeyError, match="T2"):
        apply_case_variant(net, CaseVariant.CASE2)


@pytest.mark.parametrize("text", ["1", "case2", "CASE3", " 3 "])
def test_case_variant_parse(text):
    assert CaseVariant.parse(text).number == int(text.strip()[-1])


def test_fixture_round_trip(fixture_network):
    assert parse_network(render_network(fixture_network)) == fixture_network
    assert load_network(fixture_path()) == fixture_network


@given(networks())
def test_round_trip_random(net):
    assert parse_network(render_network(net)) == net
