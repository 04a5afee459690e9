"""Transcript-driven video summarization."""
from .errors import (
    AdapterFailed,
    AlignmentMiss,
    ClipsmithError,
    DegenerateMatch,
    EmptyPlan,
    EmptyTranscript,
    FetchError,
    MissingInput,
    NoContent,
    NotFound,
    ParseError,
)
from .pipeline import SummaryBundle, SummaryParams, summarize_multi_concat, summarize_multi_dnc, summarize_single
from .transcript_io import FormatKind, TimedSegment, Transcript, detect_format, parse, write_srt

__version__ = "0.1.0"
