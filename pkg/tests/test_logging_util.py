"""Tests for spextree.logging_util."""

import io

from spextree.logging_util import CampaignLog


def _log():
    return CampaignLog("demo", progress_interval=2, stream=io.StringIO())


def test_counters():
    log = _log()
    log.record("a", True)
    log.record("b", False, "slack -1")
    log.record("c", False)
    log.skip("d", "too big")
    assert (log.cells, log.passed, log.failed, log.skipped) == (4, 1, 2, 1)
    assert log.failures == ["b  -- slack -1", "c  -- check failed"]


def test_log_failure_does_not_count_a_cell():
    log = _log()
    log.log_failure("graph X", "7 vertices of degree 2")
    assert log.failed == 1
    assert log.cells == 0


def test_progress_respects_interval():
    log = _log()
    log.progress(1, 5)
    assert log.stream.getvalue() == ""
    log.progress(2, 5)
    assert "[demo] 2/5 (40.0%)" in log.stream.getvalue()
    log.progress(5, 5)
    assert log.stream.getvalue().endswith("\n")


def test_summary_contents():
    log = _log()
    log.record("a", True)
    summary = log.summary()
    assert "Campaign Summary (demo)" in summary
    assert "Cells:        1" in summary
    assert "Passed:       1" in summary


def test_write_logs_without_directory_prints_summary():
    log = _log()
    log.write_logs()
    assert "Campaign Summary" in log.stream.getvalue()


def test_write_logs_no_failures(output_dir):
    log = _log()
    log.record("a", True)
    log.log("note")
    log.write_logs(output_dir)
    text = (output_dir / "sweep_log.txt").read_text(encoding="utf-8")
    assert "PASS: a" in text
    assert "note" in text
    assert not (output_dir / "failures.txt").exists()


def test_write_logs_with_failures(output_dir):
    log = _log()
    log.record("cell 1", False, "lambda too big")
    log.write_logs(output_dir / "logs")
    failures = (output_dir / "logs" / "failures.txt").read_text(encoding="utf-8")
    assert "cell 1  -- lambda too big" in failures
    assert "FAIL: cell 1 -- lambda too big" in (output_dir / "logs" / "sweep_log.txt").read_text(encoding="utf-8")
