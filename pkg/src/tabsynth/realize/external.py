"""Client for an external sentence generator.

Wire protocol: one JSON object per line.  Request {"family": ..,
"program": ..}; response {"text": ..}.  Transports: a persistent
subprocess speaking the protocol over stdin/stdout, or an HTTP endpoint
accepting the request as a POST body.  Failures retry a bounded number of
times, then raise EndpointUnavailableError; callers fall back to the rule
realizer.  External text that fails the fidelity gate is likewise replaced
by the rule realization.
"""
from __future__ import annotations

import json
import logging
import os
import select
import shlex
import subprocess
import threading
from dataclasses import dataclass

import httpx

from ..errors import ConfigError, EndpointUnavailableError
from ..programs.ast import family_of
from ..programs.render import print_program
from .rules import Realization, check_fidelity, realize_rule

log = logging.getLogger(__name__)


@dataclass
class GeneratorEndpoint:
    transport: str  # subprocess | http
    address: str
    timeout_ms: int = 5000
    max_retries: int = 2
    max_inflight: int = 4

    def __post_init__(self):
        if self.transport not in ("subprocess", "http"):
            raise ConfigError(f"unknown realizer transport {self.transport!r}")
        if self.timeout_ms <= 0:
            raise ConfigError("realizer timeout_ms must be positive")
        if self.max_retries < 0 or self.max_inflight < 1:
            raise ConfigError("realizer retry/inflight bounds out of range")


class ExternalRealizer:
    """Owns one transport connection; safe for concurrent realize calls
    (requests are serialized per connection, bounded by max_inflight)."""

    def __init__(self, endpoint: GeneratorEndpoint):
        self.endpoint = endpoint
        self._proc: subprocess.Popen | None = None
        self._lock = threading.Lock()
        self._slots = threading.BoundedSemaphore(endpoint.max_inflight)

    # -- subprocess transport --

    def _ensure_proc(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                shlex.split(self.endpoint.address),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
            )
        return self._proc

    def _kill_proc(self):
        if self._proc is not None:
            self._proc.kill()
            self._proc.wait()
            self._proc = None

    def _read_line(self, proc: subprocess.Popen) -> bytes:
        deadline = self.endpoint.timeout_ms / 1000.0
        fd = proc.stdout.fileno()
        buf = bytearray()
        while True:
            ready, _, _ = select.select([fd], [], [], deadline)
            if not ready:
                raise TimeoutError("generator did not answer in time")
            chunk = os.read(fd, 4096)
            if not chunk:
                raise BrokenPipeError("generator closed its output")
            buf.extend(chunk)
            if b"\n" in buf:
                line, _, rest = bytes(buf).partition(b"\n")
                # anything past the newline belongs to no one; the protocol
                # is strictly one response line per request
                if rest:
                    raise ValueError("generator sent more than one line")
                return line

    def _roundtrip_subprocess(self, payload: bytes) -> bytes:
        with self._lock:
            proc = self._ensure_proc()
            try:
                proc.stdin.write(payload + b"\n")
                proc.stdin.flush()
                return self._read_line(proc)
            except Exception:
                self._kill_proc()
                raise

    # -- http transport --

    def _roundtrip_http(self, payload: bytes) -> bytes:
        timeout = self.endpoint.timeout_ms / 1000.0
        response = httpx.post(
            self.endpoint.address,
            content=payload,
            headers={"content-type": "application/json"},
            timeout=timeout,
        )
        response.raise_for_status()
        return response.content

    def realize_text(self, program) -> str:
        request = {"family": family_of(program), "program": print_program(program)}
        payload = json.dumps(request, ensure_ascii=False).encode("utf-8")
        last_error: Exception | None = None
        with self._slots:
            for _ in range(self.endpoint.max_retries + 1):
                try:
                    if self.endpoint.transport == "subprocess":
                        raw = self._roundtrip_subprocess(payload)
                    else:
                        raw = self._roundtrip_http(payload)
                    reply = json.loads(raw.decode("utf-8"))
                    text = reply["text"]
                    if not isinstance(text, str) or not text.strip():
                        raise ValueError("generator reply lacks a text field")
                    return text
                except Exception as exc:
                    last_error = exc
        raise EndpointUnavailableError(
            f"{self.endpoint.transport} generator at {self.endpoint.address!r} "
            f"failed: {last_error}"
        )

    def close(self):
        if self._proc is not None:
            try:
                self._proc.stdin.close()
            except Exception:
                pass
            self._kill_proc()


def realize_external(program, realizer: ExternalRealizer) -> Realization:
    """Realize via the external generator, falling back to the rule
    realizer when the endpoint fails or its text drops a required surface."""
    try:
        text = realizer.realize_text(program)
    except EndpointUnavailableError as exc:
        log.warning("external realizer unavailable, using rules: %s", exc)
        return realize_rule(program)
    if check_fidelity(program, text):
        return Realization(text, "external", True)
    log.info("external text failed the fidelity gate, using rules")
    return realize_rule(program)
