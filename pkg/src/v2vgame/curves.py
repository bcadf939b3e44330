"""Monotone curve primitives shared by the technology and crash models.

Three families are supported, chosen to cover the shapes used in the
analyses while staying cheap to evaluate in the solver's inner loop:

* ``affine``     params ``(a, b)``:      ``a + b*x``
* ``power``      params ``(a, b, k)``:   ``a + b*x**k`` with ``k > 0``
* ``piecewise``  params ``(x0, v0, x1, v1, ...)``: linear interpolation
  through knots with strictly increasing abscissae spanning [0, 1]

A ``Curve`` is structurally validated at construction (family known,
parameter counts right, knots ordered).  Role-specific requirements — the
crash curve must be strictly increasing with values inside [0, 1], and the
false-positive curve must sit strictly below the true-positive curve — are
enforced by ``ModelCurves.validate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._backend import kernel
from .errors import CurveError

_KIND_CODES = {"affine": 0, "power": 1, "piecewise": 2}

# grid used for the pointwise technology-ordering check
_VALIDATION_GRID = np.linspace(0.0, 1.0, 201)


@dataclass(frozen=True)
class Curve:
    """One monotone curve, evaluatable on [0, 1]."""

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in _KIND_CODES:
            raise CurveError(
                "unknown curve family %r (expected one of %s)"
                % (self.family, ", ".join(sorted(_KIND_CODES)))
            )
        params = tuple(float(v) for v in self.params)
        if any(not math.isfinite(v) for v in params):
            raise CurveError("curve parameters must be finite, got %r" % (params,))
        if self.family == "affine":
            if len(params) != 2:
                raise CurveError("affine curve needs 2 parameters, got %d" % len(params))
        elif self.family == "power":
            if len(params) != 3:
                raise CurveError("power curve needs 3 parameters, got %d" % len(params))
            if params[2] <= 0.0:
                raise CurveError("power curve exponent must be positive, got %r" % params[2])
        else:
            if len(params) < 4 or len(params) % 2 != 0:
                raise CurveError(
                    "piecewise curve needs an even number (>= 4) of parameters, got %d"
                    % len(params)
                )
            xs = params[0::2]
            if xs[0] != 0.0 or xs[-1] != 1.0:
                raise CurveError("piecewise knots must span [0, 1], got %r" % (xs,))
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise CurveError("piecewise knot abscissae must strictly increase")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "_kind", _KIND_CODES[self.family])
        object.__setattr__(self, "_arr", np.asarray(params, dtype=np.float64))

    @property
    def kernel_args(self) -> tuple[int, np.ndarray]:
        """(kind code, parameter array) as consumed by the scalar kernels."""
        return self._kind, self._arr

    def __call__(self, x: float) -> float:
        return kernel.curve_eval(self._kind, self._arr, float(x))

    def inverse(self, v: float) -> float:
        """Preimage of v under a strictly increasing curve, clamped to [0, 1]."""
        return kernel.curve_inv(self._kind, self._arr, float(v))

    def value_range(self) -> tuple[float, float]:
        return self(0.0), self(1.0)

    def is_strictly_increasing(self) -> bool:
        if self.family == "affine":
            return self.params[1] > 0.0
        if self.family == "power":
            return self.params[1] > 0.0
        vs = self.params[1::2]
        return all(b > a for a, b in zip(vs, vs[1:]))

    # ---- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {"family": self.family, "params": list(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "Curve":
        try:
            return cls(str(data["family"]), tuple(data["params"]))
        except (KeyError, TypeError) as exc:
            raise CurveError("curve mapping needs 'family' and 'params': %r" % (data,)) from exc

    @classmethod
    def parse(cls, text: str) -> "Curve":
        """Parse the compact CLI form ``family:p1,p2,...``."""
        family, sep, rest = text.partition(":")
        if not sep:
            raise CurveError("curve spec %r lacks ':' between family and parameters" % text)
        try:
            params = tuple(float(tok) for tok in rest.split(",") if tok.strip())
        except ValueError as exc:
            raise CurveError("unparseable curve parameters in %r" % text) from exc
        return cls(family.strip(), params)

    def spec(self) -> str:
        """Inverse of parse: the compact ``family:p1,p2,...`` form."""
        return "%s:%s" % (self.family, ",".join("%.17g" % v for v in self.params))


@dataclass(frozen=True)
class ModelCurves:
    """The technology pair and the crash curve of one game instance."""

    true_positive: Curve
    false_positive: Curve
    crash: Curve

    def validate(self) -> "ModelCurves":
        """Check role-specific requirements; returns self when sound.

        The detection ordering 0 <= false < true <= 1 is checked pointwise
        on a 201-point grid over the penetration range, and the crash curve
        must be strictly increasing with both endpoint values in [0, 1].
        """
        for share in _VALIDATION_GRID:
            tv = self.true_positive(share)
            fv = self.false_positive(share)
            if not (0.0 <= fv < tv <= 1.0):
                raise CurveError(
                    "technology ordering violated at y=%.4f: "
                    "false=%.6g true=%.6g (need 0 <= false < true <= 1)" % (share, fv, tv)
                )
        if not self.crash.is_strictly_increasing():
            raise CurveError("crash curve must be strictly increasing")
        lo, hi = self.crash.value_range()
        if not (0.0 <= lo < hi <= 1.0):
            raise CurveError(
                "crash curve range [%.6g, %.6g] must lie inside [0, 1]" % (lo, hi)
            )
        return self

    def to_dict(self) -> dict:
        return {
            "true_positive": self.true_positive.to_dict(),
            "false_positive": self.false_positive.to_dict(),
            "crash": self.crash.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelCurves":
        def load(key: str) -> Curve:
            try:
                raw = data[key]
            except KeyError as exc:
                raise CurveError("curve set is missing %r" % key) from exc
            if isinstance(raw, str):
                return Curve.parse(raw)
            return Curve.from_dict(raw)

        return cls(load("true_positive"), load("false_positive"), load("crash"))


def affine(a: float, b: float) -> Curve:
    return Curve("affine", (a, b))


def constant(value: float) -> Curve:
    return Curve("affine", (value, 0.0))


def power(a: float, b: float, k: float) -> Curve:
    return Curve("power", (a, b, k))


def piecewise(knots: Iterable[tuple[float, float]]) -> Curve:
    flat: list[float] = []
    for x, v in knots:
        flat.append(x)
        flat.append(v)
    return Curve("piecewise", tuple(flat))
