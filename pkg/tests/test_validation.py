"""Flow-grammar validation: the five strict rules, the simplified rule set,
integrity checking, and the report contract."""

from __future__ import annotations

import pytest

from tmkit import (
    ActionKind,
    ActionNode,
    Edge,
    EdgeKind,
    Mode,
    ModelBuilder,
    StaticModel,
    Thimac,
    validate_static,
)
from tmkit.errors import DuplicateIdError
from tmkit.validation import RULESET_VERSION


def two_thimac_builder(mode=Mode.STRICT):
    b = ModelBuilder("m", mode=mode)
    return b, b.thimac("A"), b.thimac("B")


def test_underpants_is_strict_clean(underpants):
    report = validate_static(underpants.static)
    assert report.violations == ()
    assert report.ok


def test_empty_model_is_clean():
    report = validate_static(ModelBuilder("empty").build())
    assert report.violations == ()


def test_v2_forbids_process_to_receive_in_one_thimac():
    b = ModelBuilder("m")
    t = b.thimac("T")
    p = b.action(t, ActionKind.PROCESS, "p1")
    r = b.action(t, ActionKind.RECEIVE, "r1")
    b.flow(p, r)
    report = validate_static(b.build())
    assert [v.rule for v in report.errors] == ["V2"]
    assert "T.p1 -> T.r1" in report.errors[0].location


@pytest.mark.parametrize(
    "src_kind,dst_kind",
    [
        (ActionKind.TRANSFER, ActionKind.RECEIVE),
        (ActionKind.RECEIVE, ActionKind.PROCESS),
        (ActionKind.RECEIVE, ActionKind.RELEASE),
        (ActionKind.CREATE, ActionKind.PROCESS),
        (ActionKind.CREATE, ActionKind.RELEASE),
        (ActionKind.PROCESS, ActionKind.RELEASE),
        (ActionKind.RELEASE, ActionKind.TRANSFER),
    ],
)
def test_v2_whitelist_is_exactly_the_legal_adjacency(src_kind, dst_kind):
    b = ModelBuilder("m")
    t = b.thimac("T")
    s = b.action(t, src_kind, "s")
    d = b.action(t, dst_kind, "d")
    b.flow(s, d)
    report = validate_static(b.build())
    assert not [v for v in report.errors if v.rule == "V2"]


def test_v1_inter_thimac_flow_must_join_transfers():
    b, ta, tb = two_thimac_builder()
    p = b.action(ta, ActionKind.PROCESS, "p")
    q = b.action(tb, ActionKind.PROCESS, "q")
    b.flow(p, q)
    report = validate_static(b.build())
    assert "V1" in [v.rule for v in report.errors]


def test_v1_transfer_to_transfer_crossing_is_legal():
    b, ta, tb = two_thimac_builder()
    x = b.action(ta, ActionKind.TRANSFER, "out")
    y = b.action(tb, ActionKind.TRANSFER, "in_")
    b.flow(x, y)
    report = validate_static(b.build())
    assert not [v for v in report.errors if v.rule == "V1"]


def test_v3_release_fan_out_and_receive_fan_in():
    b = ModelBuilder("m")
    t = b.thimac("T")
    rel = b.action(t, ActionKind.RELEASE, "rel")
    t1 = b.action(t, ActionKind.TRANSFER, "t1")
    t2 = b.action(t, ActionKind.TRANSFER, "t2")
    b.flow(rel, t1)
    b.flow(rel, t2)
    rcv = b.action(t, ActionKind.RECEIVE, "rcv")
    u1 = b.action(t, ActionKind.TRANSFER, "u1")
    u2 = b.action(t, ActionKind.TRANSFER, "u2")
    b.flow(u1, rcv)
    b.flow(u2, rcv)
    report = validate_static(b.build())
    v3 = [v for v in report.errors if v.rule == "V3"]
    assert len(v3) == 2
    locations = {v.location for v in v3}
    assert "T.rel" in locations and "T.rcv" in locations


def test_v4_trigger_endpoints():
    b = ModelBuilder("m")
    t = b.thimac("T")
    rel = b.action(t, ActionKind.RELEASE, "rel")
    c = b.action(t, ActionKind.CREATE, "c")
    b.trigger(rel, c)  # bad source
    report = validate_static(b.build())
    assert "V4" in [v.rule for v in report.errors]

    b2 = ModelBuilder("m")
    t2 = b2.thimac("T")
    p = b2.action(t2, ActionKind.PROCESS, "p")
    q = b2.action(t2, ActionKind.PROCESS, "q")
    b2.trigger(p, q)  # bad target
    report2 = validate_static(b2.build())
    assert "V4" in [v.rule for v in report2.errors]


def test_v4_relaxation_downgrades_to_warning():
    b = ModelBuilder("m")
    t = b.thimac("T")
    p = b.action(t, ActionKind.PROCESS, "p")
    q = b.action(t, ActionKind.PROCESS, "q")
    b.trigger(p, q)
    model = b.build()
    strict = validate_static(model)
    relaxed = validate_static(model, relaxed_triggers=True)
    assert "V4" in [v.rule for v in strict.errors]
    assert "V4" not in [v.rule for v in relaxed.errors]
    assert "V4" in [v.rule for v in relaxed.warnings]


def test_v5_unreachable_action_is_a_warning_only():
    b = ModelBuilder("m")
    t = b.thimac("T")
    b.action(t, ActionKind.PROCESS, "orphan")
    report = validate_static(b.build())
    assert report.errors == ()
    assert [v.rule for v in report.warnings] == ["V5"]
    assert "T.orphan" == report.warnings[0].location


def test_v5_accepts_entry_transfer_as_a_source():
    b = ModelBuilder("m")
    t = b.thimac("T")
    gate = b.action(t, ActionKind.TRANSFER, "gate")
    rcv = b.action(t, ActionKind.RECEIVE, "rcv")
    b.flow(gate, rcv)
    report = validate_static(b.build())
    assert "V5" not in [v.rule for v in report.warnings]


def test_simplified_mode_allows_arbitrary_flow_adjacency():
    b = ModelBuilder("m", mode=Mode.SIMPLIFIED)
    t = b.thimac("T")
    p = b.action(t, ActionKind.PROCESS, "p")
    q = b.action(t, ActionKind.PROCESS, "q")
    b.flow(p, q)  # illegal under strict V2, fine simplified
    report = validate_static(b.build())
    assert report.errors == ()


def test_simplified_mode_still_rejects_flow_into_create():
    b = ModelBuilder("m", mode=Mode.SIMPLIFIED)
    t = b.thimac("T")
    p = b.action(t, ActionKind.PROCESS, "p")
    c = b.action(t, ActionKind.CREATE, "c")
    b.flow(p, c)
    report = validate_static(b.build())
    assert [v.rule for v in report.errors] == ["S1"]


def test_simplified_mode_still_rejects_gate_fan_out():
    b = ModelBuilder("m", mode=Mode.SIMPLIFIED)
    t = b.thimac("T")
    rel = b.action(t, ActionKind.RELEASE, "rel")
    p1 = b.action(t, ActionKind.PROCESS, "p1")
    p2 = b.action(t, ActionKind.PROCESS, "p2")
    b.flow(rel, p1)
    b.flow(rel, p2)
    report = validate_static(b.build())
    assert [v.rule for v in report.errors] == ["S2"]


def test_integrity_dangling_edge_endpoint_short_circuits_rules():
    model = StaticModel(
        name="broken",
        thimacs=(Thimac(id="T", name="T", parent=None, children=(), actions=("T.a",)),),
        actions=(ActionNode(id="T.a", kind=ActionKind.PROCESS, owner="T"),),
        edges=(Edge(src="T.a", dst="T.ghost", kind=EdgeKind.FLOW),),
    )
    report = validate_static(model)
    assert [v.rule for v in report.errors] == ["DANGLING"]
    assert "T.ghost" in report.errors[0].message


def test_integrity_rejects_self_edges():
    model = StaticModel(
        name="broken",
        thimacs=(Thimac(id="T", name="T", parent=None, children=(), actions=("T.a",)),),
        actions=(ActionNode(id="T.a", kind=ActionKind.PROCESS, owner="T"),),
        edges=(Edge(src="T.a", dst="T.a", kind=EdgeKind.FLOW),),
    )
    report = validate_static(model)
    assert "DANGLING" in [v.rule for v in report.errors]


def test_builder_rejects_duplicate_sibling_names():
    b = ModelBuilder("m")
    t = b.thimac("T")
    b.action(t, ActionKind.CREATE, "x")
    with pytest.raises(DuplicateIdError):
        b.action(t, ActionKind.PROCESS, "x")
    with pytest.raises(DuplicateIdError):
        b.thimac("T")


def test_reports_are_deterministic_and_pure(order):
    first = validate_static(order.static)
    second = validate_static(order.static)
    assert first == second
    assert first.render() == second.render()


def test_report_render_shape():
    b = ModelBuilder("m")
    t = b.thimac("T")
    p = b.action(t, ActionKind.PROCESS, "p")
    r = b.action(t, ActionKind.RECEIVE, "r")
    b.flow(p, r)
    report = validate_static(b.build())
    lines = report.render().splitlines()
    assert lines[0].startswith("error[V2] T.p -> T.r:")
    assert lines[-1] == "1 errors, 2 warnings"
    obj = report.to_json_obj()
    assert set(obj) == {"errors", "warnings"}
    assert obj["errors"][0]["rule"] == "V2"


def test_ruleset_is_versioned():
    assert RULESET_VERSION == 1
