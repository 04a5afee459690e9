from __future__ import annotations

import shlex
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
ADAPTERS = HERE / "adapters"

_criteria: list[tuple[str, bool, str]] = []


def adapter(name: str) -> str:
    """Command string running one of the stub adapters with this interpreter."""
    return f"{shlex.quote(sys.executable)} {shlex.quote(str(ADAPTERS / name))}"


class ScriptedServer:
    """Serves a fixed sequence of status codes, then 200 with `body`; records request paths."""

    def __init__(self, statuses, body=b"[]"):
        self.statuses = list(statuses)
        self.requests = []
        owner = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):
                owner.requests.append(self.path)
                status = owner.statuses.pop(0) if owner.statuses else 200
                payload = body if status == 200 else b"error"
                self.send_response(status)
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

            def log_message(self, *args):
                pass

        self.httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.url = f"http://127.0.0.1:{self.httpd.server_address[1]}"
        threading.Thread(target=self.httpd.serve_forever, daemon=True).start()

    def close(self):
        self.httpd.shutdown()
        self.httpd.server_close()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the end-of-run summary."""
    label = request.node.get_closest_marker("criterion").args[0]
    yield
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    _criteria.append((label, ok, "" if ok else "see failure above"))


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, _ in sorted(_criteria):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
