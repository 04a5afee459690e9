import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clipsmith.errors import AdapterFailed, EmptyTranscript
from clipsmith.segmenter import (
    PunctuationPolicy,
    TimedSentence,
    filter_questions,
    restore_punctuation,
    segment_sentences,
    split_sentences,
)
from clipsmith.transcript_io import FormatKind, TimedSegment, Transcript

from conftest import adapter


def tr(*segs):
    return Transcript("v", tuple(TimedSegment(t, s, d, "v") for t, s, d in segs), FormatKind.YOUTUBE_JSON)


def test_passthrough_is_identity():
    t = tr(("hello world", 0, 1), ("next", 1.1, 1))
    assert restore_punctuation(t, PunctuationPolicy("passthrough")) is t


def test_heuristic_gap_rule():
    t = tr(("hello world", 0.0, 1.0), ("next part", 2.5, 0.5))
    out = restore_punctuation(t, PunctuationPolicy("heuristic"))
    assert [s.text for s in out.segments] == ["hello world.", "Next part."]


def test_heuristic_short_gap_leaves_boundary():
    t = tr(("hello world", 0.0, 1.0), ("and more", 1.2, 1.0))
    out = restore_punctuation(t, PunctuationPolicy("heuristic", gap_threshold=0.8))
    assert [s.text for s in out.segments] == ["hello world", "and more."]


def test_heuristic_keeps_existing_punctuation():
    t = tr(("is it?", 0.0, 1.0), ("yes", 3.0, 1.0))
    out = restore_punctuation(t, PunctuationPolicy("heuristic"))
    assert [s.text for s in out.segments] == ["is it?", "yes."]


def test_policy_validation():
    with pytest.raises(ValueError):
        PunctuationPolicy("external")
    with pytest.raises(ValueError):
        PunctuationPolicy("heuristic", external_command="cat")


def test_external_punctuation_redistributes_by_character():
    t = tr(("one two three", 0, 1), ("four five six seven", 1, 1))
    out = restore_punctuation(t, PunctuationPolicy("external", external_command=adapter("punctuate.py")))
    assert [s.text for s in out.segments] == ["One two three", "four five. Six seven."]
    assert [s.start for s in out.segments] == [0, 1]


def test_external_command_that_deletes_words_fails_alignment():
    t = tr(("one two three", 0, 1), ("four five", 1, 1))
    with pytest.raises(AdapterFailed, match="alignment"):
        restore_punctuation(t, PunctuationPolicy("external", external_command=adapter("drop_words.py")))


def test_external_nonzero_exit():
    t = tr(("one", 0, 1),)
    with pytest.raises(AdapterFailed) as info:
        restore_punctuation(t, PunctuationPolicy("external", external_command=adapter("fail.py")))
    assert info.value.exit_code == 1
    assert "model not available" in info.value.stderr


def test_interpolation_by_character_share():
    # "A. B." over [0, 4]: "A." is 2 of 5 characters
    (a, b) = segment_sentences(tr(("A. B.", 0.0, 4.0),))
    assert (a.text, a.start, a.end) == ("A.", 0.0, 1.6)
    assert (b.text, b.start, b.end) == ("B.", 1.6, 4.0)
    assert (a.index, b.index) == (0, 1)


def test_single_sentence_segment_keeps_its_times():
    (s,) = segment_sentences(tr(("Just one sentence here.", 2.0, 3.0),))
    assert (s.start, s.end) == (2.0, 5.0)


def test_sentence_spanning_segments_uses_next_segment_start():
    sents = segment_sentences(tr(("First part", 0.0, 2.0), ("ends here. Second.", 5.0, 2.0)))
    assert [s.text for s in sents] == ["First part ends here.", "Second."]
    assert sents[0].start == 0.0
    assert sents[1].start > 5.0 and sents[1].end == 7.0


def test_sentence_starts_at_following_segment_after_gap():
    sents = segment_sentences(tr(("One.", 0.0, 1.0), ("Two.", 3.0, 1.0)))
    assert [(s.start, s.end) for s in sents] == [(0.0, 1.0), (3.0, 4.0)]


def test_no_terminal_punctuation():
    with pytest.raises(EmptyTranscript):
        segment_sentences(tr(("no punctuation at all", 0, 1),))


def test_unterminated_tail_gets_a_period():
    sents = segment_sentences(tr(("Done. and then", 0, 2),))
    assert [s.text for s in sents] == ["Done.", "and then."]


def test_split_sentences():
    assert split_sentences("A b. C d? e") == ["A b.", "C d?", "e."]
    assert split_sentences("no stop") == ["no stop."]
    assert split_sentences("  ") == []


def s(text, i):
    return TimedSentence(text, float(i), i + 1.0, "v", i)


def test_filter_questions():
    out = filter_questions([s("What is this?", 0), s("It is a filter.", 1)])
    assert [(x.text, x.index, x.start) for x in out] == [("It is a filter.", 0, 1.0)]
    kept = [s("A.", 0), s("B.", 1)]
    assert filter_questions(kept) == kept
    assert filter_questions([s("Why?", 0), s("How?", 1)]) == []


segment_text = st.lists(
    st.sampled_from(["alpha", "beta", "gamma.", "delta!", "eps?", "zeta", "Eta."]), min_size=1, max_size=8
).map(" ".join)


@st.composite
def punctuated_transcripts(draw):
    n = draw(st.integers(1, 8))
    t, segs = 0.0, []
    for _ in range(n):
        t += draw(st.integers(0, 3000)) / 1000
        dur = draw(st.integers(100, 5000)) / 1000
        segs.append((draw(segment_text), round(t, 3), dur))
    segs[-1] = (segs[-1][0] + ".", segs[-1][1], segs[-1][2])
    return tr(*segs)


@settings(max_examples=200, deadline=None)
@given(punctuated_transcripts())
def test_segmentation_invariants(t):
    sents = segment_sentences(t)
    assert [x.index for x in sents] == list(range(len(sents)))
    assert " ".join(x.text for x in sents).split() == " ".join(seg.text for seg in t.segments).split()
    starts = [x.start for x in sents]
    assert starts == sorted(starts)
    lo = t.segments[0].start
    hi = max(seg.end for seg in t.segments)
    for x in sents:
        assert lo <= x.start < x.end <= hi + 0.001
        assert x.text[-1] in ".!?"


@settings(max_examples=100, deadline=None)
@given(punctuated_transcripts())
def test_filter_questions_idempotent(t):
    once = filter_questions(segment_sentences(t))
    assert filter_questions(once) == once
