"""Sweep configuration: a ``key = value`` text file parsed into SweepConfig."""

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Tuple, Union

from .embedder import DEFAULT_BUDGET
from .errors import ConfigError
from .spectral import DEFAULT_TOL

# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

CAMPAIGN_NAMES = (
    "embedding_completeness",
    "nonembedding_soundness",
    "threshold_embedding",
    "f_consistency",
    "sandwich_lower",
    "refined_upper",
    "degree_count",
    "perron_entries",
    "brute_force_spex",
    "construction_soundness",
    "gap_asymptotics",
    "constants_threshold",
)

_INT_LISTS = ("n_values", "l_values", "d_values", "delta_values")
_INTS = ("m_max", "samples", "seed", "budget")


@dataclass(frozen=True)
class SweepConfig:
    """Parameters shared by every campaign. Empty tuples mean "campaign default"."""

    campaigns: Tuple[str, ...] = ()
    m_max: Optional[int] = None
    n_values: Tuple[int, ...] = ()
    l_values: Tuple[int, ...] = ()
    d_values: Tuple[int, ...] = ()
    delta_values: Tuple[int, ...] = ()
    samples: Optional[int] = None
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    tol: float = DEFAULT_TOL

    def override(self, seed: Optional[int] = None, budget: Optional[int] = None,
                 tol: Optional[float] = None) -> "SweepConfig":
        changes = {}
        if seed is not None:
            changes["seed"] = seed
        if budget is not None:
            changes["budget"] = budget
        if tol is not None:
            changes["tol"] = tol
        return replace(self, **changes) if changes else self

    def as_report(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _int(key: str, raw: str, lineno: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be an integer, got {raw!r}", key=key)


def _int_list(key: str, raw: str, lineno: int) -> Tuple[int, ...]:
    items = [x.strip() for x in raw.split(",") if x.strip()]
    return tuple(_int(key, x, lineno) for x in items)


def parse_config(text: str) -> SweepConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"line {lineno}: {key} given twice", key=key)
        if key == "campaigns":
            names = tuple(x.strip() for x in value.split(",") if x.strip())
            unknown = [x for x in names if x not in CAMPAIGN_NAMES]
            if unknown:
                raise ConfigError(f"line {lineno}: unknown campaigns {unknown}", key=key)
            values[key] = names
        elif key in _INT_LISTS:
            values[key] = _int_list(key, value, lineno)
        elif key in _INTS:
            values[key] = _int(key, value, lineno)
        elif key == "tol":
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: tol must be a number, got {value!r}", key=key)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key=key)

    if values.get("budget", 1) <= 0:
        raise ConfigError("budget must be positive", key="budget")
    if values.get("samples", 1) < 0:
        raise ConfigError("samples must be non-negative", key="samples")
    if values.get("tol", 1.0) <= 0:
        raise ConfigError("tol must be positive", key="tol")
    return SweepConfig(**values)


def load_config(path: Union[str, Path]) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}", path=str(path))
    return parse_config(text)
