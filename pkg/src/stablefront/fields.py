"""Periodic scalar fields on the unit torus.

A :class:`ScalarField2` is a Z^2-periodic function a(y) on R^2, given
either by a named closed-form preset or by an n x n grid of node values
with bilinear interpolation.  Speed fields enter the length element
|dx| / a(x); potentials V enter through the energy-level map

    a_c(y) = 1 / sqrt(2 (c - V(y))),   c > max V,

which turns a mechanical system at energy c into a metric of the same
kind.  Fields are immutable after construction and carry cached extrema
plus a fingerprint of their defining data, so downstream records can
verify that two computations really ran against the same field.

Presets
-------
constant(v)                 a = v
layered(A, B)               a = A + B cos(2 pi y1)        (vertical fast lane)
channel(base, boost, width) fast horizontal strip around y2 = 0, raised-cosine
                            ramp of half-width `width`
bumps(base, amp, sigma)     Gaussian bump at each lattice point, nearest-image
                            periodization
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Optional, Tuple

import numpy as np

from .config import N_EXT
from .errors import EnergyBelowPotential, StableFrontError

__all__ = [
    "ScalarField2",
    "preset_field",
    "grid_field",
    "field_from_spec",
    "mechanical_to_metric",
]


def _reduce_unit(x: np.ndarray) -> np.ndarray:
    """Reduce coordinates to [0, 1) (second pass guards the u == 1.0 corner)."""
    u = x - np.floor(x)
    return np.where(u >= 1.0, u - np.floor(u), u)


# ----------------------------------------------------------------------
# preset evaluators: vectorized over already-reduced coordinates
# ----------------------------------------------------------------------

def _eval_constant(p, x1, x2):
    return np.full_like(x1, float(p["v"]))


def _eval_layered(p, x1, x2):
    return p["A"] + p["B"] * np.cos(2.0 * np.pi * x1)


def _eval_channel(p, x1, x2):
    # torus distance of y2 to the strip center line y2 = 0
    d = np.abs(x2 - np.round(x2))
    ramp = 0.5 * (1.0 + np.cos(np.pi * np.minimum(d, p["width"]) / p["width"]))
    return p["base"] + p["boost"] * np.where(d <= p["width"], ramp, 0.0)


def _eval_bumps(p, x1, x2):
    dx = x1 - np.round(x1)
    dy = x2 - np.round(x2)
    s2 = p["sigma"] * p["sigma"]
    return p["base"] + p["amp"] * np.exp(-(dx * dx + dy * dy) / s2)


def _check_channel(p):
    if not 0.0 < p["width"] <= 0.5:
        raise StableFrontError(f"channel width must lie in (0, 0.5], got {p['width']}")


def _check_bumps(p):
    if not p["sigma"] > 0.0:
        raise StableFrontError(f"bumps sigma must be positive, got {p['sigma']}")


_PRESETS = {
    "constant": (("v",), _eval_constant, None),
    "layered": (("A", "B"), _eval_layered, None),
    "channel": (("base", "boost", "width"), _eval_channel, _check_channel),
    "bumps": (("base", "amp", "sigma"), _eval_bumps, _check_bumps),
}


class ScalarField2:
    """Immutable Z^2-periodic scalar field (preset or bilinear grid)."""

    __slots__ = ("kind", "name", "params", "n", "values", "_vfield",
                 "_extrema", "_fingerprint", "_table_cache")

    def __init__(self, *, kind: str, name: str = "", params: Optional[dict] = None,
                 n: int = 0, values: Optional[np.ndarray] = None,
                 vfield: "Optional[ScalarField2]" = None):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "params", dict(params or {}))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_vfield", vfield)
        object.__setattr__(self, "_extrema", None)
        object.__setattr__(self, "_fingerprint", None)
        object.__setattr__(self, "_table_cache", {})
        if kind == "grid":
            arr = np.array(values, dtype=np.float64).reshape(n, n)
            arr.setflags(write=False)
            object.__setattr__(self, "values", arr)
        elif kind == "preset":
            object.__setattr__(self, "values", None)
            if name == "mechanical":
                if vfield is None or "c" not in self.params:
                    raise StableFrontError("mechanical preset needs a potential and an energy")
            else:
                try:
                    required, _, check = _PRESETS[name]
                except KeyError:
                    raise StableFrontError(f"unknown preset {name!r}") from None
                missing = [k for k in required if k not in self.params]
                if missing:
                    raise StableFrontError(f"preset {name!r} missing params: {missing}")
                for key in self.params:
                    if key not in required:
                        raise StableFrontError(f"preset {name!r} got unknown param {key!r}")
                for key in required:
                    object.__setattr__(self, "params",
                                       {**self.params, key: float(self.params[key])})
                if check is not None:
                    check(self.params)
        else:
            raise StableFrontError(f"unknown field kind {kind!r}")

    def __setattr__(self, *a):
        raise AttributeError("ScalarField2 is immutable")

    # ------------------------------------------------------------ sampling

    def sample_many(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """Vectorized periodic evaluation at arbitrary real coordinates."""
        u1 = _reduce_unit(np.asarray(x1, dtype=np.float64))
        u2 = _reduce_unit(np.asarray(x2, dtype=np.float64))
        if self.kind == "preset":
            if self.name == "mechanical":
                v = self._vfield.sample_many(u1, u2)
                gap = self.params["c"] - v
                if np.min(gap) <= 0.0:
                    raise EnergyBelowPotential(
                        f"energy {self.params['c']} does not exceed the potential")
                return 1.0 / np.sqrt(2.0 * gap)
            _, ev, _ = _PRESETS[self.name]
            return ev(self.params, u1, u2)
        # bilinear grid with wrap-around
        n = self.n
        t1 = u1 * n
        t2 = u2 * n
        i0 = np.floor(t1).astype(np.int64)
        j0 = np.floor(t2).astype(np.int64)
        f1 = t1 - i0
        f2 = t2 - j0
        i0 %= n
        j0 %= n
        i1 = (i0 + 1) % n
        j1 = (j0 + 1) % n
        v = self.values
        return ((1.0 - f2) * ((1.0 - f1) * v[j0, i0] + f1 * v[j0, i1])
                + f2 * ((1.0 - f1) * v[j1, i0] + f1 * v[j1, i1]))

    def sample(self, y) -> float:
        """a(y) for a single point y = (y1, y2)."""
        out = self.sample_many(np.float64(y[0]), np.float64(y[1]))
        return float(out)

    # ------------------------------------------------------------ extrema

    def extrema(self) -> Tuple[float, float]:
        """(min, max) of the field.

        Grid fields take exact node extrema (bilinear interpolation
        attains its range on nodes).  The mechanical preset transforms
        the potential's extrema through the monotone level map.  Other
        presets are scanned on a dense N_EXT x N_EXT grid, which hits
        the extremal sets of every shipped preset exactly.
        """
        cached = self._extrema
        if cached is not None:
            return cached
        if self.kind == "grid":
            ext = (float(self.values.min()), float(self.values.max()))
        elif self.name == "mechanical":
            vmin, vmax = self._vfield.extrema()
            c = self.params["c"]
            if c <= vmax:
                raise EnergyBelowPotential(f"energy {c} does not exceed max V = {vmax}")
            # a_c is increasing in V
            ext = (1.0 / math.sqrt(2.0 * (c - vmin)), 1.0 / math.sqrt(2.0 * (c - vmax)))
        else:
            g = np.arange(N_EXT, dtype=np.float64) / N_EXT
            vals = self.sample_many(g[None, :], g[:, None])
            ext = (float(vals.min()), float(vals.max()))
        object.__setattr__(self, "_extrema", ext)
        return ext

    # ------------------------------------------------------------ identity

    def spec(self) -> dict:
        """JSON-able defining data."""
        if self.kind == "grid":
            return {"n": self.n, "values": [float(v) for v in self.values.ravel()]}
        if self.name == "mechanical":
            return {"preset": "mechanical",
                    "params": {"c": self.params["c"], "V": self._vfield.spec()}}
        return {"preset": self.name, "params": dict(self.params)}

    @property
    def fingerprint(self) -> str:
        fp = self._fingerprint
        if fp is None:
            blob = json.dumps(self.spec(), sort_keys=True).encode()
            fp = hashlib.sha256(blob).hexdigest()[:16]
            object.__setattr__(self, "_fingerprint", fp)
        return fp

    def __repr__(self):
        if self.kind == "grid":
            return f"ScalarField2(grid {self.n}x{self.n})"
        return f"ScalarField2({self.name} {self.params if self.name != 'mechanical' else ''})"


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def preset_field(name: str, **params) -> ScalarField2:
    return ScalarField2(kind="preset", name=name, params=params)


def grid_field(n: int, values) -> ScalarField2:
    flat = np.asarray(values, dtype=np.float64).ravel()
    if n < 1 or flat.size != n * n:
        raise StableFrontError(f"grid needs n*n values, got {flat.size} for n={n}")
    return ScalarField2(kind="grid", n=int(n), values=flat)


def field_from_spec(data: dict) -> ScalarField2:
    """Rebuild a field from its JSON spec (grid or preset form)."""
    if "n" in data:
        return grid_field(int(data["n"]), data["values"])
    if "preset" in data:
        name = data["preset"]
        params = dict(data.get("params", {}))
        if name == "mechanical":
            vspec = params.pop("V")
            return mechanical_to_metric(field_from_spec(vspec), float(params["c"]))
        return preset_field(name, **params)
    raise StableFrontError("field spec needs either 'n'/'values' or 'preset'/'params'")


def mechanical_to_metric(V: ScalarField2, c: float) -> ScalarField2:
    """Speed field a_c = 1 / sqrt(2 (c - V)) of the energy-c level.

    Grid potentials map node values and re-interpolate (an approximation:
    the bilinear interpolant of a_c is not the level map of the bilinear
    interpolant of V, but they agree on nodes and converge together).
    Preset potentials are wrapped so a_c evaluates pointwise exactly.
    """
    c = float(c)
    _, vmax = V.extrema()
    if c <= vmax:
        raise EnergyBelowPotential(f"energy {c} does not exceed max V = {vmax}")
    if V.kind == "grid":
        return grid_field(V.n, 1.0 / np.sqrt(2.0 * (c - V.values)))
    return ScalarField2(kind="preset", name="mechanical", params={"c": c}, vfield=V)
