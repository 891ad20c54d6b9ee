"""Numerical tolerances.

All thresholds live in a single :class:`Tolerances` record. Library
functions read :func:`get` at call time, so a front end can install
overrides once (from a file, the ``COHERENCE_COST_TOL_OVERRIDES``
environment variable, or flags) without threading them through every call.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigInvalid

ENV_VAR = "COHERENCE_COST_TOL_OVERRIDES"

# Hard cap on a single Hilbert-space factor.
MAX_DIM = 64


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10
    recon: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    rank: float = 1e-12
    degen: float = 1e-9
    symm: float = 1e-9
    gto: float = 1e-10
    coh: float = 1e-12
    coh_warn: float = 1e-8
    work: float = 1e-9
    support: float = 1e-9
    max_steps: int = 10**6


_current = Tolerances()


def get() -> Tolerances:
    return _current


def set_tolerances(tol: Tolerances) -> None:
    global _current
    _current = tol


def reset() -> None:
    set_tolerances(Tolerances())


def with_overrides(base: Tolerances, overrides: dict[str, str | float]) -> Tolerances:
    """Return ``base`` with fields replaced; keys may carry a ``tol_`` prefix."""
    names = {f.name: f.type for f in dataclasses.fields(Tolerances)}
    changes = {}
    for key, raw in overrides.items():
        name = key[4:] if key.startswith("tol_") else key
        if name not in names:
            raise ConfigInvalid(f"unknown tolerance {key!r}")
        try:
            value = int(raw) if name == "max_steps" else float(raw)
        except (TypeError, ValueError):
            raise ConfigInvalid(f"tolerance {key!r} is not numeric: {raw!r}") from None
        if value < 0:
            raise ConfigInvalid(f"tolerance {key!r} must be non-negative")
        changes[name] = value
    return dataclasses.replace(base, **changes)


def parse_kv_file(path: str | os.PathLike) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read {path}: {exc}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
        elif ":" in line:
            key, value = line.split(":", 1)
        else:
            raise ConfigInvalid(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def load_env_overrides(base: Tolerances | None = None) -> Tolerances:
    base = base or Tolerances()
    path = os.environ.get(ENV_VAR)
    if not path:
        return base
    return with_overrides(base, parse_kv_file(path))
