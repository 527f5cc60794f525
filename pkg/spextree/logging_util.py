"""Campaign logging: stderr progress, run log and failure list."""

import sys
import time
from pathlib import Path
from typing import List, Optional, TextIO


class CampaignLog:
    """Handles logging to file and console progress for a sweep.

    stdout belongs to the report, so everything here goes to ``stream``
    (stderr by default).
    """

    def __init__(self, name: str = "sweep", progress_interval: int = 50, stream: Optional[TextIO] = None):
        self.name = name
        self.progress_interval = max(1, progress_interval)
        self.stream = stream if stream is not None else sys.stderr
        self.cells = 0
        self.passed = 0
        self.failed = 0
        self.skipped = 0
        self._log_lines: List[str] = []
        self._failure_lines: List[str] = []
        self._start_time = time.time()

    def log(self, msg: str):
        self._log_lines.append(msg)

    def log_failure(self, cell: str, reason: str):
        self.failed += 1
        self._failure_lines.append(f"{cell}  -- {reason}")
        self._log_lines.append(f"FAIL: {cell} -- {reason}")

    def record(self, cell: str, ok: bool, reason: str = ""):
        """Count one finished cell."""
        self.cells += 1
        if ok:
            self.passed += 1
            self._log_lines.append(f"PASS: {cell}")
        else:
            self.log_failure(cell, reason or "check failed")

    def skip(self, cell: str, reason: str):
        self.cells += 1
        self.skipped += 1
        self._log_lines.append(f"SKIP: {cell} -- {reason}")

    @property
    def failures(self) -> List[str]:
        return list(self._failure_lines)

    def progress(self, current: int, total: int):
        if current % self.progress_interval == 0 or current == total:
            elapsed = time.time() - self._start_time
            rate = current / elapsed if elapsed > 0 else 0
            pct = current / total * 100 if total > 0 else 0
            print(
                f"\r[{self.name}] {current}/{total} ({pct:.1f}%) "
                f"| {rate:.0f} cells/sec "
                f"| passed={self.passed} failed={self.failed} skipped={self.skipped}",
                end="", flush=True, file=self.stream,
            )
            if current == total:
                print(file=self.stream)

    def summary(self) -> str:
        elapsed = time.time() - self._start_time
        return (
            f"\n{'='*60}\n"
            f"Campaign Summary ({self.name})\n"
            f"{'='*60}\n"
            f"Cells:        {self.cells}\n"
            f"Passed:       {self.passed}\n"
            f"Failed:       {self.failed}\n"
            f"Skipped:      {self.skipped}\n"
            f"Time elapsed: {elapsed:.1f}s\n"
            f"{'='*60}\n"
        )

    def write_logs(self, out_dir: Optional[Path] = None):
        summary = self.summary()
        print(summary, file=self.stream)
        if out_dir is None:
            return
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        log_path = out_dir / "sweep_log.txt"
        with open(log_path, "w", encoding="utf-8") as f:
            f.write(summary)
            f.write("\nDetailed Log:\n")
            for line in self._log_lines:
                f.write(line + "\n")
        print(f"Log written to: {log_path}", file=self.stream)

        if self._failure_lines:
            failures = out_dir / "failures.txt"
            with open(failures, "w", encoding="utf-8") as f:
                f.write("Cells whose check did not hold.\n\n")
                for line in self._failure_lines:
                    f.write(line + "\n")
            print(f"Failure list written to: {failures}", file=self.stream)
