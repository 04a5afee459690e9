import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clipsmith.errors import ParseError
from clipsmith.transcript_io import (
    FormatKind,
    TimedSegment,
    Transcript,
    detect_format,
    format_timestamp,
    parse,
    parse_auto,
    round_ms,
    write_srt,
    write_vtt,
    write_youtube_json,
)

from conftest import FIXTURES


@pytest.mark.parametrize(
    "raw, kind",
    [
        (b"WEBVTT\n\n00:00.000 --> 00:02.000\nhi", FormatKind.VTT),
        (b"1\n00:00:01,000 --> 00:00:03,500\nhello", FormatKind.SRT),
        (b"plain prose with no timing", FormatKind.UNKNOWN),
        (b'  [{"text": "a", "start": 0, "duration": 1}]', FormatKind.YOUTUBE_JSON),
        (b'{"segments": []}', FormatKind.YOUTUBE_JSON),
        (b"\n\n1\n00:00:01.000 --> 00:00:03.500\nhello", FormatKind.UNKNOWN),
    ],
)
def test_detect_format(raw, kind):
    assert detect_format(raw) is kind


def test_youtube_json_field_mapping():
    t = parse(b'[{"text":"hello world","start":1.0,"duration":2.5}]', "youtube-json", "v")
    assert t.segments == (TimedSegment("hello world", 1.0, 2.5, "v"),)
    assert t.source_format is FormatKind.YOUTUBE_JSON


def test_srt_single_cue():
    t = parse(b"1\n00:00:01,000 --> 00:00:03,500\nhello world\n", FormatKind.SRT, "v")
    (seg,) = t.segments
    assert (seg.text, seg.start, seg.duration) == ("hello world", 1.0, 2.5)


def test_srt_end_before_start_is_error():
    with pytest.raises(ParseError, match="end <= start") as info:
        parse(b"1\n00:00:04,000 --> 00:00:03,000\nx\n", FormatKind.SRT, "v")
    assert info.value.location == "line 2"


def test_srt_multiline_cue_joined_and_sorted():
    raw = (
        b"1\n00:00:05,000 --> 00:00:06,000\nlater\n\n"
        b"2\n00:00:01,000 --> 00:00:02,000\nfirst\nsecond line\n"
    )
    t = parse(raw, FormatKind.SRT, "v")
    assert [s.text for s in t.segments] == ["first second line", "later"]


def test_equal_starts_keep_input_order():
    raw = json.dumps([
        {"text": "b", "start": 2, "duration": 1},
        {"text": "a1", "start": 1, "duration": 1},
        {"text": "a2", "start": 1, "duration": 3},
    ]).encode()
    assert [s.text for s in parse(raw, "youtube-json", "v").segments] == ["a1", "a2", "b"]


def test_youtube_overlap_is_allowed():
    raw = b'[{"text":"a","start":0,"duration":3},{"text":"b","start":1,"duration":3}]'
    assert len(parse(raw, "youtube-json", "v").segments) == 2


def test_vtt_tags_entities_and_short_timestamps():
    raw = (
        b"WEBVTT\n\nNOTE a comment\n\n"
        b"intro\n00:01.500 --> 00:02.000 align:start\n<v Bob>Hi &amp; <c>welcome</c></v>\n"
    )
    (seg,) = parse(raw, FormatKind.VTT, "v").segments
    assert (seg.text, seg.start, seg.duration) == ("Hi & welcome", 1.5, 0.5)


def test_sub_millisecond_rounds_half_away_from_zero():
    t = parse(b'[{"text":"a","start":1.0005,"duration":1.0}]', "youtube-json", "v")
    assert t.segments[0].start == 1.001
    assert round_ms(2.0004) == 2.0


@pytest.mark.parametrize(
    "raw, fmt, reason",
    [
        (b"1\n00:00:01,000 -> 00:00:02,000\nx\n", "srt", "malformed timing"),
        (b"1\n00:00:01,000 --> 00:00:02,000\nh\xffi\n", "srt", "invalid UTF-8"),
        (b'[{"text":"x","start":-1,"duration":1}]', "youtube-json", "negative"),
        (b'[{"text":"x","start":1,"duration":0}]', "youtube-json", "end <= start"),
        (b"00:00.000 --> 00:01.000\nx\n", "vtt", "WEBVTT"),
        (b"1\n00:00:01,000 --> 00:00:02,000\n   \n", "srt", "no cues"),
    ],
)
def test_parse_errors(raw, fmt, reason):
    with pytest.raises(ParseError, match=reason):
        parse(raw, fmt, "v")


def test_unknown_format_rejected():
    with pytest.raises(ParseError):
        parse(b"hello", FormatKind.UNKNOWN, "v")


def test_write_srt_format():
    t = Transcript("v", (TimedSegment("hi", 0.0, 1.0, "v"),), FormatKind.SRT)
    assert write_srt(t) == b"1\n00:00:00,000 --> 00:00:01,000\nhi\n\n"


def test_hour_timestamp():
    # 3661.5 s = 1 h + 1 min + 1.5 s
    assert format_timestamp(3661.5) == "01:01:01,500"


ms_times = st.integers(min_value=0, max_value=10 * 3600 * 1000)
words = st.text(alphabet="abcdefghij KLMN.,?!&<'", min_size=1, max_size=40).filter(lambda s: s.strip())


@st.composite
def transcripts(draw):
    n = draw(st.integers(1, 12))
    starts = sorted(draw(st.lists(ms_times, min_size=n, max_size=n)))
    segs = tuple(
        TimedSegment(" ".join(draw(words).split()), s / 1000, draw(st.integers(1, 60_000)) / 1000, "vid")
        for s in starts
    )
    return Transcript("vid", segs, FormatKind.SRT)


@settings(max_examples=200, deadline=None)
@given(transcripts())
def test_srt_round_trip(t):
    back = parse(write_srt(t), FormatKind.SRT, "vid")
    assert back.segments == t.segments


@settings(max_examples=100, deadline=None)
@given(transcripts())
def test_vtt_and_json_round_trip(t):
    assert parse(write_vtt(t), FormatKind.VTT, "vid").segments == t.segments
    assert parse(write_youtube_json(t), FormatKind.YOUTUBE_JSON, "vid").segments == t.segments


def test_fixture_corpus_is_total():
    files = sorted(p for p in FIXTURES.rglob("*") if p.is_file())
    assert len(files) >= 150
    for path in files:
        try:
            t = parse_auto(path.read_bytes(), path.stem)
        except ParseError as exc:
            assert exc.location
            assert "malformed" in path.parts, path
        else:
            assert "malformed" not in path.parts, path
            assert t.segments and all(s.video_id == path.stem for s in t.segments)
