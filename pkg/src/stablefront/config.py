"""Run configuration records and engine-wide defaults.

A :class:`Rig` bundles the discretization knobs that every distance
query depends on: nodes per unit cell ``N``, stencil reach ``S`` and
quadrature subdivisions ``M``.  A :class:`RunConfig` is the user-facing
record the command line driver builds from flags and/or a JSON config
file; unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

from .errors import StableFrontError

# Engine defaults.  N*M controls quadrature density along an axis edge,
# S the angular resolution of the move set.
DEFAULT_N = 64
DEFAULT_S = 3
DEFAULT_M = 8
DEFAULT_Q = 4
DEFAULT_LAMBDA = 8
DEFAULT_KMAX = 4

# Dense sampling resolution used to locate preset extrema.
N_EXT = 1024

# Corners are hull vertices turning by at least this many degrees.
CORNER_ANGLE_DEG = 10.0

# Node budget for a single window (raises CapacityExceeded beyond it).
DEFAULT_CAPACITY = 48_000_000

THREADS_ENV = "STABLEFRONT_THREADS"

_BOUNDS = {
    "N": (8, 512),
    "S": (1, 4),
    "Q": (1, 16),
    "lam": (1, 32),
}


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise StableFrontError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, n)


def _check_bounds(name: str, value: int) -> None:
    lo, hi = _BOUNDS[name]
    if not isinstance(value, int) or isinstance(value, bool) or not lo <= value <= hi:
        raise StableFrontError(f"{name} must be an integer in [{lo}, {hi}], got {value!r}")


@dataclass(frozen=True)
class Rig:
    """Discretization parameters shared by every distance computation."""

    N: int = DEFAULT_N
    S: int = DEFAULT_S
    M: int = DEFAULT_M
    capacity: int = DEFAULT_CAPACITY
    validate_windows: bool = False

    def __post_init__(self):
        # engine-internal bounds are loose (tests use tiny windows); the
        # user-facing RunConfig enforces the documented ranges
        if self.N < 1:
            raise StableFrontError(f"N must be >= 1, got {self.N}")
        if not 1 <= self.S <= 8:
            raise StableFrontError(f"S must be in [1, 8], got {self.S}")
        if self.M < 1:
            raise StableFrontError(f"M must be >= 1, got {self.M}")

    @property
    def h(self) -> float:
        return 1.0 / self.N

    def key(self) -> tuple:
        return (self.N, self.S, self.M)


DEFAULT_RIG = Rig()


@dataclass
class RunConfig:
    """User-facing run settings: rig sizes, sweep sizes, tolerances, output."""

    N: int = DEFAULT_N
    S: int = DEFAULT_S
    M: int = DEFAULT_M
    Q: int = DEFAULT_Q
    lam: int = DEFAULT_LAMBDA
    kmax: int = DEFAULT_KMAX
    tol: float = 1e-2
    threads: int = 0  # 0 = take STABLEFRONT_THREADS (default 1)
    out: str = "."

    def __post_init__(self):
        for name in ("N", "S", "Q", "lam"):
            _check_bounds(name, getattr(self, name))
        if self.M < 1:
            raise StableFrontError(f"M must be >= 1, got {self.M}")
        if self.kmax < 0:
            raise StableFrontError(f"kmax must be >= 0, got {self.kmax}")
        if not self.tol > 0:
            raise StableFrontError(f"tol must be positive, got {self.tol}")
        if self.threads < 0:
            raise StableFrontError(f"threads must be >= 0, got {self.threads}")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise StableFrontError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise StableFrontError("config file must hold a JSON object")
        return cls.from_dict(data)

    def rig(self) -> Rig:
        return Rig(N=self.N, S=self.S, M=self.M)

    def effective_threads(self) -> int:
        return self.threads if self.threads > 0 else default_threads()
