# -*- coding: utf-8 -*-
"""
测量数据读取测试（本地文件与 HTTP）
"""

import pytest
import requests

from railchan.errors import MeasurementError
from railchan.services import measurement
from railchan.services.measurement import is_url, load_trace

TRACE_TEXT = "position_m,snr_db,note\n0.0,20.5,a\n1.5,18.25,b\n3.0,n/a,c\n4.5,15.0,d\n"


class FakeResponse:
    def __init__(self, text, status=200, encoding=None):
        self.text = text
        self.content = text.encode("utf-8")
        self.encoding = encoding
        self.status = status

    def raise_for_status(self):
        if self.status >= 400:
            raise requests.HTTPError(f"{self.status} error")


def test_is_url():
    assert is_url("https://example.org/snr.csv")
    assert is_url("HTTP://example.org/snr.csv")
    assert not is_url("out/snr.csv")


def test_local_trace_skips_invalid_rows(tmp_path):
    path = tmp_path / "snr.csv"
    path.write_text(TRACE_TEXT, encoding="utf-8")
    assert load_trace(str(path)) == [(0.0, 20.5), (1.5, 18.25), (4.5, 15.0)]


def test_missing_file(tmp_path):
    with pytest.raises(MeasurementError):
        load_trace(str(tmp_path / "absent.csv"))


def test_missing_columns(tmp_path):
    path = tmp_path / "snr.csv"
    path.write_text("x,y\n1,2\n", encoding="utf-8")
    with pytest.raises(MeasurementError) as excinfo:
        load_trace(str(path))
    assert "position_m" in str(excinfo.value)


def test_empty_file(tmp_path):
    path = tmp_path / "snr.csv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(MeasurementError):
        load_trace(str(path))


def test_no_valid_rows(tmp_path):
    path = tmp_path / "snr.csv"
    path.write_text("position_m,snr_db\nfoo,bar\n", encoding="utf-8")
    with pytest.raises(MeasurementError):
        load_trace(str(path))


def test_remote_trace(monkeypatch):
    calls = []

    def fake_get(url, headers=None, timeout=None):
        calls.append((url, timeout))
        return FakeResponse(TRACE_TEXT)

    monkeypatch.setattr(measurement.requests, "get", fake_get)
    data = load_trace("https://example.org/snr.csv")
    assert data == [(0.0, 20.5), (1.5, 18.25), (4.5, 15.0)]
    assert calls[0][0] == "https://example.org/snr.csv"
    assert calls[0][1] == measurement.MEASUREMENT_TIMEOUT


def test_remote_http_error(monkeypatch):
    monkeypatch.setattr(measurement.requests, "get", lambda url, **kw: FakeResponse("", status=404))
    with pytest.raises(MeasurementError):
        load_trace("https://example.org/missing.csv")


def test_remote_connection_error(monkeypatch):
    def fail(url, **kw):
        raise requests.ConnectionError("refused")

    monkeypatch.setattr(measurement.requests, "get", fail)
    with pytest.raises(MeasurementError):
        load_trace("http://example.org/snr.csv")
