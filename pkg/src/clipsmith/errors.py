"""Exception hierarchy. The CLI maps each family to an exit code."""
from __future__ import annotations


class ClipsmithError(Exception):
    pass


class ParseError(ClipsmithError):
    def __init__(self, location: str, reason: str):
        self.location = location
        self.reason = reason
        super().__init__(f"{location}: {reason}")


class AdapterFailed(ClipsmithError):
    def __init__(self, exit_code: int | None, stderr: str = "", reason: str = ""):
        self.exit_code = exit_code
        self.stderr = stderr[-500:]
        self.reason = reason
        msg = f"adapter failed (exit {exit_code})"
        if reason:
            msg += f": {reason}"
        if self.stderr.strip():
            msg += f"; stderr: {self.stderr.strip()}"
        super().__init__(msg)


class EmptyTranscript(ClipsmithError):
    pass


class NoContent(ClipsmithError):
    pass


class AlignmentMiss(ClipsmithError):
    def __init__(self, summary_index: int):
        self.summary_index = summary_index
        super().__init__(f"summary sentence {summary_index} not found in original")


class DegenerateMatch(ClipsmithError):
    def __init__(self, summary_index: int):
        self.summary_index = summary_index
        super().__init__(f"summary sentence {summary_index} shares no vocabulary with any original")


class EmptyPlan(ClipsmithError):
    pass


class MissingInput(ClipsmithError):
    def __init__(self, video_id: str):
        self.video_id = video_id
        super().__init__(f"no input media for video {video_id!r}")


class FetchError(ClipsmithError):
    def __init__(self, attempts: int, last: str):
        self.attempts = attempts
        self.last = last
        super().__init__(f"fetch failed after {attempts} attempt(s): {last}")


class NotFound(ClipsmithError):
    pass
