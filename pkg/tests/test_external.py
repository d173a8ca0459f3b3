"""External sentence-generator client: transports, retries, and fallback."""

import json
import sys

import httpx
import pytest

from tabsynth.errors import ConfigError, EndpointUnavailableError
from tabsynth.programs.parse import parse_sql
from tabsynth.realize.external import ExternalRealizer, GeneratorEndpoint, realize_external
from tabsynth.realize.rules import realize_rule


PROGRAM = parse_sql("select department from w order by `total deputies` desc limit 1")

ECHO_SCRIPT = """
import json, sys
for line in sys.stdin:
    req = json.loads(line)
    out = {"text": "Tell me: " + req["program"]}
    sys.stdout.write(json.dumps(out) + "\\n")
    sys.stdout.flush()
"""

UNFAITHFUL_SCRIPT = """
import json, sys
for line in sys.stdin:
    json.loads(line)
    sys.stdout.write(json.dumps({"text": "A sentence about nothing."}) + "\\n")
    sys.stdout.flush()
"""

SLEEPY_SCRIPT = """
import sys, time
for line in sys.stdin:
    time.sleep(60)
"""


def script_endpoint(script, **kw):
    # The address is split with shlex, so single quotes keep the script whole.
    address = f"{sys.executable} -u -c '{script}'"
    return GeneratorEndpoint(transport="subprocess", address=address, **kw)


class TestSubprocessTransport:
    def test_echo_generator_is_used_verbatim(self):
        realizer = ExternalRealizer(script_endpoint(ECHO_SCRIPT))
        try:
            r = realize_external(PROGRAM, realizer)
        finally:
            realizer.close()
        assert r.source == "external"
        assert r.fidelity_ok is True
        assert r.text.startswith("Tell me: ")
        assert "total deputies" in r.text

    def test_one_process_serves_many_requests(self):
        realizer = ExternalRealizer(script_endpoint(ECHO_SCRIPT))
        try:
            first = realizer.realize_text(PROGRAM)
            pid = realizer._proc.pid
            second = realizer.realize_text(PROGRAM)
            assert realizer._proc.pid == pid
        finally:
            realizer.close()
        assert first == second

    def test_unfaithful_reply_falls_back_to_rules(self):
        realizer = ExternalRealizer(script_endpoint(UNFAITHFUL_SCRIPT))
        try:
            r = realize_external(PROGRAM, realizer)
        finally:
            realizer.close()
        assert r.source == "rule"
        assert r.text == realize_rule(PROGRAM).text
        assert r.fidelity_ok is True

    def test_timeout_raises_after_retries(self):
        endpoint = script_endpoint(SLEEPY_SCRIPT, timeout_ms=200, max_retries=1)
        realizer = ExternalRealizer(endpoint)
        try:
            with pytest.raises(EndpointUnavailableError, match="subprocess"):
                realizer.realize_text(PROGRAM)
        finally:
            realizer.close()

    def test_timeout_falls_back_to_rules(self):
        endpoint = script_endpoint(SLEEPY_SCRIPT, timeout_ms=200, max_retries=0)
        realizer = ExternalRealizer(endpoint)
        try:
            r = realize_external(PROGRAM, realizer)
        finally:
            realizer.close()
        assert r.source == "rule"

    def test_dead_process_falls_back_to_rules(self):
        endpoint = script_endpoint("import sys; sys.exit(0)", timeout_ms=500, max_retries=1)
        realizer = ExternalRealizer(endpoint)
        try:
            r = realize_external(PROGRAM, realizer)
        finally:
            realizer.close()
        assert r.source == "rule"


class TestHttpTransport:
    def test_successful_post(self, monkeypatch):
        seen = {}

        def fake_post(url, content, headers, timeout):
            seen["url"] = url
            seen["request"] = json.loads(content)
            body = json.dumps({"text": "Paraphrase: " + seen["request"]["program"]})
            req = httpx.Request("POST", url)
            return httpx.Response(200, content=body.encode(), request=req)

        monkeypatch.setattr(httpx, "post", fake_post)
        endpoint = GeneratorEndpoint(transport="http", address="http://generator.test/v1")
        r = realize_external(PROGRAM, ExternalRealizer(endpoint))
        assert seen["url"] == "http://generator.test/v1"
        assert seen["request"]["family"] == "sql"
        assert r.source == "external"

    def test_http_error_falls_back(self, monkeypatch):
        def fake_post(url, content, headers, timeout):
            return httpx.Response(503, content=b"busy", request=httpx.Request("POST", url))

        monkeypatch.setattr(httpx, "post", fake_post)
        endpoint = GeneratorEndpoint(
            transport="http", address="http://generator.test/v1", max_retries=1
        )
        r = realize_external(PROGRAM, ExternalRealizer(endpoint))
        assert r.source == "rule"

    def test_malformed_reply_falls_back(self, monkeypatch):
        monkeypatch.setattr(
            httpx, "post",
            lambda url, content, headers, timeout: httpx.Response(
                200, content=b"{}", request=httpx.Request("POST", url)
            ),
        )
        endpoint = GeneratorEndpoint(transport="http", address="http://generator.test/v1")
        r = realize_external(PROGRAM, ExternalRealizer(endpoint))
        assert r.source == "rule"


class TestEndpointValidation:
    def test_unknown_transport(self):
        with pytest.raises(ConfigError, match="transport"):
            GeneratorEndpoint(transport="carrier-pigeon", address="x")

    def test_timeout_must_be_positive(self):
        with pytest.raises(ConfigError, match="timeout"):
            GeneratorEndpoint(transport="http", address="x", timeout_ms=0)

    def test_retry_and_inflight_bounds(self):
        with pytest.raises(ConfigError):
            GeneratorEndpoint(transport="http", address="x", max_retries=-1)
        with pytest.raises(ConfigError):
            GeneratorEndpoint(transport="http", address="x", max_inflight=0)
