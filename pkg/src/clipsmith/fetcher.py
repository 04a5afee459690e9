"""Transcript retrieval from an HTTP transcript service, or from a local directory."""
from __future__ import annotations

import logging
import os
import re
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import FetchError, NotFound

log = logging.getLogger(__name__)

ENDPOINT_ENV = "CLIPSMITH_ENDPOINT"
_VIDEO_ID = re.compile(r"[A-Za-z0-9_-]{1,64}")


@dataclass(frozen=True)
class FetchConfig:
    endpoint: str | None = None
    timeout: float = 10.0
    retries: int = 3
    offline_dir: Path | None = None
    backoff_base: float = 0.5

    def __post_init__(self):
        if self.retries < 0:
            raise ValueError("retries must be >= 0")
        if self.endpoint is None and self.offline_dir is None and not os.environ.get(ENDPOINT_ENV):
            raise ValueError(f"set an endpoint, {ENDPOINT_ENV}, or an offline directory")


def fetch_transcript(video_id: str, cfg: FetchConfig, sleep: Callable[[float], None] = time.sleep) -> bytes:
    """Raw YouTube-JSON bytes for `video_id`, passed through unmodified.

    5xx responses and transport errors are retried up to `cfg.retries` times with
    exponential backoff; 4xx responses are never retried.
    """
    if not _VIDEO_ID.fullmatch(video_id):
        raise ValueError(f"invalid video id {video_id!r}")
    if cfg.offline_dir is not None:
        path = Path(cfg.offline_dir) / f"{video_id}.json"
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise NotFound(f"{path} does not exist") from None

    endpoint = os.environ.get(ENDPOINT_ENV) or cfg.endpoint
    url = f"{endpoint.rstrip('/')}/transcript?{urllib.parse.urlencode({'video_id': video_id})}"
    last = ""
    for attempt in range(1, cfg.retries + 2):
        try:
            with urllib.request.urlopen(url, timeout=cfg.timeout) as resp:
                return resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise NotFound(f"{url}: 404") from None
            if exc.code < 500:
                raise FetchError(attempt, f"HTTP {exc.code}") from None
            last = f"HTTP {exc.code}"
        except (urllib.error.URLError, OSError) as exc:
            last = str(getattr(exc, "reason", exc))
        if attempt <= cfg.retries:
            delay = cfg.backoff_base * 2 ** (attempt - 1)
            log.info("attempt %d for %s failed (%s); retrying in %.2fs", attempt, video_id, last, delay)
            sleep(delay)
    raise FetchError(cfg.retries + 1, last)
