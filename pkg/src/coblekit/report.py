"""VerificationReport: the result record every check returns."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

__version__ = "0.1.0"

STATUSES = ("pass", "fail", "inconclusive", "skipped")


@dataclass
class VerificationReport:
    check: str
    status: str = "pass"
    prime: int | None = None
    seed: int | None = None
    witnesses: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    version: str = __version__
    notes: list = field(default_factory=list)

    def expect(self, label: str, ok: bool, witness=None):
        """Record a sub-check; a failure flips the status and stores a witness."""
        if not ok:
            self.status = "fail"
            self.witnesses.append({"label": label, "witness": _jsonable(witness)})
        return ok

    def certify(self, label: str, witness):
        """Attach evidence for a sub-check that passed."""
        self.witnesses.append({"label": label, "certificate": _jsonable(witness)})

    def inconclusive(self, label: str, witness=None):
        if self.status == "pass":
            self.status = "inconclusive"
        self.witnesses.append({"label": label, "inconclusive": _jsonable(witness)})

    def note(self, text: str):
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        d = asdict(self)
        d["counts"] = _jsonable(self.counts)
        return d

    @contextmanager
    def timed(self):
        t = time.perf_counter()
        try:
            yield self
        finally:
            self.elapsed_ms = round((time.perf_counter() - t) * 1000, 3)


def _jsonable(x):
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "render"):
        return x.render()
    try:
        return int(x)
    except (TypeError, ValueError):
        return str(x)


def merge_status(reports) -> int:
    """Exit code: 0 all pass, 1 any fail, 3 inconclusive without failures."""
    sts = [r.status for r in reports]
    if "fail" in sts:
        return 1
    if "inconclusive" in sts:
        return 3
    return 0
