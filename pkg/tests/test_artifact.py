import json

import pytest
from hypothesis import given, strategies as st

from kidmodel.artifact import (
    FORMAT_VERSION,
    ModelArtifact,
    format_event,
    parse_events,
    parse_output,
    parse_report,
    parse_weights,
    render_output,
)
from kidmodel.data import fixture_text
from kidmodel.engine import EndReason, EngineOutput, OutputKind, Status, Timestamp
from kidmodel.errors import ParseError
from kidmodel.space import DimensionWeights, build_memory


@pytest.fixture
def artifact(ctx, reftimes):
    return ModelArtifact(ctx, reftimes, DimensionWeights({"Electric": 2}))


def test_artifact_round_trip(artifact):
    text = artifact.to_json()
    back = ModelArtifact.from_json(text)
    assert back == artifact
    assert back.to_json() == text
    assert back.memory() == build_memory(artifact.context, artifact.weights)


def test_artifact_version_checked(artifact):
    doc = json.loads(artifact.to_json())
    doc["format"] = "kidmodel/0"
    with pytest.raises(ParseError, match="unsupported model format"):
        ModelArtifact.from_json(json.dumps(doc))


def test_artifact_basis_checked(artifact):
    doc = json.loads(artifact.to_json())
    doc["basis"] = list(reversed(doc["basis"]))
    with pytest.raises(ParseError, match="basis"):
        ModelArtifact.from_json(json.dumps(doc))


def test_artifact_document_shape(artifact):
    doc = json.loads(artifact.to_json())
    assert doc["format"] == FORMAT_VERSION
    assert len(doc["activities"]) == 10 and len(doc["basis"]) == 13
    assert doc["reference_times"]["Dinner"] == "NA"
    assert doc["weights"]["Electric"] == 2.0 and doc["weights"]["PIR"] == 1.0


def test_parse_weights():
    assert parse_weights('{"Electric": 2}').of("Electric") == 2.0
    with pytest.raises(ParseError):
        parse_weights("[1, 2]")
    with pytest.raises(ParseError):
        parse_weights('{"Electric": -1}')


def test_parse_events_fixture(ctx):
    events = parse_events(fixture_text("case2_events.jsonl"), ctx)
    assert [str(e.attr) for e in events] == ["Magnetic.Fridge", "Magnetic.Cupboard", "Electric.Toaster"]
    assert events[0].at == Timestamp.parse("0:10:34:00")
    assert "".join(format_event(e) + "\n" for e in events) == fixture_text("case2_events.jsonl")


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ('{"time": "0:10:00:00", "dimension": "PIR", "attribute": "Garage"}\n', 1, "unknown attribute"),
        (
            '{"time": "0:10:00:00", "dimension": "PIR", "attribute": "Shower"}\n'
            '{"time": "0:09:00:00", "dimension": "PIR", "attribute": "Shower"}\n',
            2,
            "earlier",
        ),
        ('{"time": "10:00", "dimension": "PIR", "attribute": "Shower"}\n', 1, "malformed"),
        ('\n{"time": "0:10:00:00", "dimension": "PIR", "attribute": "Shower", "value": 5}\n', 2, "0 or 1"),
        ("not json\n", 1, "invalid JSON"),
    ],
)
def test_parse_events_errors(ctx, text, line, fragment):
    with pytest.raises(ParseError, match=fragment) as info:
        parse_events(text, ctx)
    assert info.value.line == line


outputs = st.builds(
    EngineOutput,
    at=st.builds(Timestamp.from_seconds, st.integers(0, 10**7)),
    kind=st.sampled_from(OutputKind),
    activity=st.one_of(st.none(), st.text(min_size=1)),
    status=st.one_of(st.none(), st.sampled_from(Status)),
    candidates=st.lists(st.text(min_size=1), max_size=4).map(tuple),
    deadline=st.one_of(st.none(), st.builds(Timestamp.from_seconds, st.integers(0, 10**7))),
    similarity=st.one_of(st.none(), st.floats(0, 1)),
    reason=st.one_of(st.none(), st.sampled_from(EndReason)),
)


@given(outputs)
def test_report_round_trip(out):
    line = render_output(out)
    assert "\n" not in line
    assert parse_output(line) == out


def test_report_key_order():
    out = EngineOutput(
        Timestamp.parse("0:17:39:25"),
        OutputKind.ALERT,
        activity="Leaving",
        status=Status.RECOGNIZED,
        candidates=("Leaving",),
        deadline=Timestamp.parse("0:17:39:25"),
        similarity=1.0,
    )
    assert list(json.loads(render_output(out))) == [
        "at",
        "kind",
        "activity",
        "status",
        "candidates",
        "deadline",
        "similarity",
    ]


def test_golden_reports_parse():
    for case in (1, 2, 3):
        outs = parse_report(fixture_text(f"case{case}_report.jsonl"))
        assert outs and outs[0].kind is OutputKind.EPISODE_START
