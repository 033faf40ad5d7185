"""Rotation-invariant convex domain geometry in two complex variables.

A domain is described by a boundary exponent profile p(s) on (0, 1) together
with two axis intercepts b1, b2.  The radial profiles are

    r1(s) = b1 * exp(-int_s^1 dt / (t p(t))),
    r2(s) = b2 * exp(-int_0^s dt / ((1 - t) p(t))),

and the dual (polar complement) domain has conjugate exponent p/(p-1) with
reciprocal intercepts; its radial profiles satisfy r1*(s) r1(s) = s and
r2*(s) r2(s) = 1 - s pointwise.  All radial evaluation happens in log space
so that high powers r1^{2 m} stay representable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (DomainError, ExponentOutOfRange, NonEvaluableProfile)
from .exprdsl import Expr, parse_expr
from .numerics import QuadConfig, extrapolate_limit

__all__ = [
    "ExponentProfile",
    "DomainGeometry",
    "CurvatureTriple",
    "Flag",
    "egg_profile",
    "expression_profile",
    "tabulated_profile",
    "domain_from_exponent",
    "dual_complement",
    "curvatures_at",
    "classify_boundary",
    "domain_from_spec",
]

_VALIDATION_GRID = np.linspace(1e-6, 1.0 - 1e-6, 513)


# ---------------------------------------------------------------------------
# exponent profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentProfile:
    """The defining tuple (p, b1, b2) of a domain.

    kind is one of "egg", "expression", "tabulated", or "conjugate" (the
    profile of a dual domain, kept callable rather than re-parsed).
    """

    kind: str
    b1: float
    b2: float
    p_fn: Callable[[np.ndarray], np.ndarray]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.b1 <= 0 or self.b2 <= 0:
            raise DomainError("axis intercepts b1, b2 must be positive")
        self._validate_samples()

    def _validate_samples(self):
        try:
            with np.errstate(all="ignore"):
                vals = np.asarray(self.p_fn(_VALIDATION_GRID), dtype=float)
        except Exception as exc:  # noqa: BLE001 - surface as library error
            raise NonEvaluableProfile(str(exc)) from exc
        if vals.shape != _VALIDATION_GRID.shape or not np.all(np.isfinite(vals)):
            raise NonEvaluableProfile(
                "exponent profile is not finite on (0, 1)")
        if np.any(vals <= 1.0):
            bad = float(_VALIDATION_GRID[np.argmin(vals)])
            raise ExponentOutOfRange(
                f"p(s) <= 1 detected near s = {bad:.6g}")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(self.p_fn(s), dtype=float)
        if out.shape != s.shape:
            out = np.broadcast_to(out, s.shape).copy()
        return out

    @property
    def constant_p(self) -> Optional[float]:
        """The constant exponent value, or None if p varies with s."""
        if self.kind == "egg":
            return float(self.meta["p"])
        vals = self(_VALIDATION_GRID)
        lo, hi = float(vals.min()), float(vals.max())
        if hi - lo <= 1e-13 * max(1.0, abs(hi)):
            return 0.5 * (lo + hi)
        return None


def egg_profile(p: float, a1: float = 1.0, a2: float = 1.0) -> ExponentProfile:
    """Profile of the model domain a1|z1|^p + a2|z2|^p < 1."""
    if p <= 1:
        raise ExponentOutOfRange("egg exponent must exceed 1")
    if a1 <= 0 or a2 <= 0:
        raise DomainError("egg weights must be positive")
    b1 = a1 ** (-1.0 / p)
    b2 = a2 ** (-1.0 / p)
    return ExponentProfile("egg", b1, b2,
                           lambda s, _p=float(p): np.full_like(np.asarray(s, float), _p),
                           meta={"p": float(p), "a1": float(a1), "a2": float(a2)})


def expression_profile(source: str | Expr, b1: float = 1.0,
                       b2: float = 1.0) -> ExponentProfile:
    expr = source if isinstance(source, Expr) else parse_expr(source)
    return ExponentProfile("expression", b1, b2, expr,
                           meta={"source": expr.source})


def tabulated_profile(s_samples, p_samples, b1: float = 1.0,
                      b2: float = 1.0) -> ExponentProfile:
    """Profile interpolated monotonically through (s, p) samples.

    Shape-preserving piecewise cubic interpolation keeps values between the
    sample extremes, so p > 1 at the samples implies p > 1 everywhere.
    Outside the sampled range the boundary values are held constant.
    """
    from scipy.interpolate import PchipInterpolator

    s_arr = np.asarray(s_samples, dtype=float)
    p_arr = np.asarray(p_samples, dtype=float)
    if s_arr.ndim != 1 or s_arr.shape != p_arr.shape or s_arr.size < 2:
        raise DomainError("tabulated profile needs matching 1-D s and p arrays")
    if np.any(np.diff(s_arr) <= 0):
        raise DomainError("tabulated s samples must be strictly increasing")
    interp = PchipInterpolator(s_arr, p_arr, extrapolate=False)
    lo_s, hi_s = float(s_arr[0]), float(s_arr[-1])
    lo_p, hi_p = float(p_arr[0]), float(p_arr[-1])

    def p_fn(s):
        s = np.asarray(s, dtype=float)
        out = interp(np.clip(s, lo_s, hi_s))
        out = np.where(s <= lo_s, lo_p, out)
        out = np.where(s >= hi_s, hi_p, out)
        return out

    return ExponentProfile("tabulated", b1, b2, p_fn,
                           meta={"s": s_arr.tolist(), "p": p_arr.tolist()})


# ---------------------------------------------------------------------------
# exponent integrals (u = log t substitution)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4)
def _gl_rule(n: int = 32):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_edges(a: float, b: float) -> np.ndarray:
    """Panel edges on [a, b]: unit-length interior panels plus dyadically
    graded panels toward both endpoints.

    The grading absorbs integrands that are bounded but only log-smooth at
    an endpoint (profiles like 2 + 1/log(10/s) produce exactly that after
    the log substitution)."""
    width = b - a
    graded = [width * 2.0 ** (-k) for k in range(1, 48)]
    left = [a + g for g in reversed(graded)]
    right = [b - g for g in graded]
    mid_lo, mid_hi = left[-1], right[0]
    n_mid = max(1, int(math.ceil(mid_hi - mid_lo)))
    middle = list(np.linspace(mid_lo, mid_hi, n_mid + 1))[1:-1]
    return np.array([a] + left + middle + right + [b])


def _panelled_integral(f: Callable, a: float, b: float) -> float:
    """Integral of f over [a, b] by composite 32-point Gauss panels."""
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    gx, gw = _gl_rule()
    edges = _panel_edges(a, b)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = (0.5 * (edges[1:] - edges[:-1]))[:, None]
    u = mid + half * gx[None, :]
    return sign * float(np.sum(half * gw[None, :] * f(u)))


# ---------------------------------------------------------------------------
# domain geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Flag:
    """A boolean judgement with an attached confidence in [0, 1]."""

    value: bool
    confidence: float
    note: str = ""


@dataclass(frozen=True)
class CurvatureTriple:
    kappa1: float
    kappa2: float
    kappa3: float
    kappa_ratio: float
    p_recovered: float


class DomainGeometry:
    """Immutable geometry of a domain given by an exponent profile.

    Radial profiles are exposed in log space (log_r1, log_r2) together with
    the dual profiles (log_r1_star, log_r2_star) defined by the exact
    pointwise identities r1*(s) r1(s) = s and r2*(s) r2(s) = 1 - s.
    Evaluators are pure; instances are safe to share across threads.
    """

    def __init__(self, profile: ExponentProfile,
                 quad_cfg: QuadConfig | None = None,
                 _log_r1_xy: Callable | None = None,
                 _log_r2_xy: Callable | None = None,
                 _parent: "DomainGeometry | None" = None):
        self.profile = profile
        self.quad_cfg = quad_cfg or QuadConfig()
        self._parent = _parent
        const_p = profile.constant_p
        if _log_r1_xy is not None:
            self._lr1_xy = _log_r1_xy
            self._lr2_xy = _log_r2_xy
        elif const_p is not None:
            lb1, lb2, inv_p = math.log(profile.b1), math.log(profile.b2), 1.0 / const_p

            def _egg_log_r1(s, sm, c=lb1, q=inv_p):
                with np.errstate(divide="ignore"):
                    return c + q * np.log(s)

            def _egg_log_r2(s, sm, c=lb2, q=inv_p):
                with np.errstate(divide="ignore"):
                    return c + q * np.log(sm)

            self._lr1_xy = _egg_log_r1
            self._lr2_xy = _egg_log_r2
        else:
            self._lr1_xy = self._quadrature_log_r1
            self._lr2_xy = self._quadrature_log_r2
        self.p_limits = self._estimate_p_limits()
        self.membership = self._estimate_membership()

    # -- radial evaluators --------------------------------------------------
    # the two-argument forms take the parameter s together with its
    # complement sm = 1 - s so that callers near the right endpoint can pass
    # a complement that has not been rounded through 1 - s

    def _quadrature_log_r1(self, s: np.ndarray, sm: np.ndarray) -> np.ndarray:
        p = self.profile
        out = np.empty_like(s)
        for i, si in np.ndenumerate(s):
            if si <= 0.0:
                out[i] = -np.inf
                continue
            out[i] = math.log(p.b1) - _panelled_integral(
                lambda u: 1.0 / p(np.exp(u)), math.log(si), 0.0)
        return out

    def _quadrature_log_r2(self, s: np.ndarray, sm: np.ndarray) -> np.ndarray:
        p = self.profile
        out = np.empty_like(sm)
        for i, smi in np.ndenumerate(sm):
            if smi <= 0.0:
                out[i] = -np.inf
                continue
            out[i] = math.log(p.b2) - _panelled_integral(
                lambda u: 1.0 / p(1.0 - np.exp(u)), math.log(smi), 0.0)
        return out

    def log_r1_xy(self, s, sm):
        return self._lr1_xy(np.asarray(s, float), np.asarray(sm, float))

    def log_r2_xy(self, s, sm):
        return self._lr2_xy(np.asarray(s, float), np.asarray(sm, float))

    def log_r1_star_xy(self, s, sm):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(s) - self.log_r1_xy(s, sm)

    def log_r2_star_xy(self, s, sm):
        sm = np.asarray(sm, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(sm) - self.log_r2_xy(s, sm)

    def log_r1(self, s):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        sv = np.atleast_1d(s)
        out = self._lr1_xy(sv, 1.0 - sv)
        return float(out[0]) if scalar else out

    def log_r2(self, s):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        sv = np.atleast_1d(s)
        out = self._lr2_xy(sv, 1.0 - sv)
        return float(out[0]) if scalar else out

    def r1(self, s):
        return np.exp(self.log_r1(s))

    def r2(self, s):
        return np.exp(self.log_r2(s))

    def log_r1_star(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(s) - self.log_r1(s)

    def log_r2_star(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log1p(-s) - self.log_r2(s)

    def r1_star(self, s):
        return np.exp(self.log_r1_star(s))

    def r2_star(self, s):
        return np.exp(self.log_r2_star(s))

    def p_at(self, s):
        return self.profile(s)

    # -- membership heuristics ----------------------------------------------

    def _estimate_p_limits(self):
        # doubly exponential approach to the endpoint: profiles whose tail
        # behaves like a power of s or like 1/log(1/s) both produce
        # geometrically converging samples, which Aitken then accelerates
        depth = 2.0 ** np.arange(0, 9)
        limits = {}
        for end in (0, 1):
            s = 2.0 ** (-depth) if end == 0 else 1.0 - 2.0 ** (-depth)
            vals = self.profile(s)
            if not np.all(np.isfinite(vals)):
                limits[end] = math.inf
                continue
            if vals[-1] > 1e6 and vals[-1] > 2.0 * vals[len(vals) // 2]:
                limits[end] = math.inf
                continue
            res = extrapolate_limit(vals)
            limits[end] = res.limit if res.converged else (
                math.inf if vals[-1] > 10.0 * vals[0] else None)
        return {"s0": limits[0], "s1": limits[1]}

    def _truncated_exponent_integrals(self, eps: float):
        p = self.profile
        i1 = _panelled_integral(lambda u: 1.0 / p(np.exp(u)),
                                math.log(eps), math.log(0.5))
        i2 = _panelled_integral(lambda u: 1.0 / p(1.0 - np.exp(u)),
                                math.log(eps), math.log(0.5))
        return i1, i2

    def _estimate_membership(self):
        # the class requires int_0 dt/(t p(t)) and int^1 dt/((1-t) p(t)) to
        # diverge; after u = log t this is divergence of int 1/p du as the
        # lower limit recedes.  Sampled truncations must keep growing with
        # slope bounded away from zero on a log scale.  This is a heuristic
        # (finitely many samples prove nothing), hence the confidence field.
        eps_list = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10]
        vals = np.array([self._truncated_exponent_integrals(e) for e in eps_list])
        growth = np.diff(vals, axis=0)  # per factor-100 shrink of eps
        diverging = bool(np.all(growth > 1e-3))
        conf = 0.9 if diverging and np.all(growth > 0.1 * growth[0]) else 0.6
        in_r_tilde = Flag(diverging, conf if diverging else 0.9,
                          "truncated exponent integrals keep growing"
                          if diverging else "truncated integrals stalled")

        l0, l1 = self.p_limits["s0"], self.p_limits["s1"]
        finite_limits = all(
            isinstance(v, float) and math.isfinite(v) and v > 1.0
            for v in (l0, l1))
        in_r_prime = Flag(bool(diverging and finite_limits),
                          0.85 if finite_limits else 0.7,
                          "endpoint limits of p estimated finite and > 1"
                          if finite_limits else "endpoint limit missing")
        return {"in_R_tilde": in_r_tilde, "in_R_prime": in_r_prime}

    # -- misc ---------------------------------------------------------------

    def describe(self) -> dict:
        lim = {k: ("divergent" if v == math.inf else v)
               for k, v in self.p_limits.items()}
        return {
            "kind": self.profile.kind,
            "b1": self.profile.b1,
            "b2": self.profile.b2,
            "p_limits": lim,
            "in_R_tilde": {"value": self.membership["in_R_tilde"].value,
                           "confidence": self.membership["in_R_tilde"].confidence},
            "in_R_prime": {"value": self.membership["in_R_prime"].value,
                           "confidence": self.membership["in_R_prime"].confidence},
            "classification": classify_boundary(self),
        }


def domain_from_exponent(profile: ExponentProfile,
                         quad_cfg: QuadConfig | None = None) -> DomainGeometry:
    """Build the geometry determined by an exponent profile."""
    return DomainGeometry(profile, quad_cfg)


def dual_complement(geom: DomainGeometry) -> DomainGeometry:
    """Geometry of the polar-complement domain.

    Conjugate exponent p/(p - 1), reciprocal intercepts, and radial profiles
    taken from the exact identities r1*(s) = s / r1(s), r2*(s) = (1-s)/r2(s)
    rather than re-quadrature, so dual(dual(geom)) reproduces geom's
    profiles to machine precision.
    """
    src = geom.profile

    def p_star(s):
        p = src(s)
        return p / (p - 1.0)

    if src.kind == "egg":
        p = src.meta["p"]
        ps = p / (p - 1.0)
        star = ExponentProfile(
            "egg", 1.0 / src.b1, 1.0 / src.b2,
            lambda s, _p=ps: np.full_like(np.asarray(s, float), _p),
            meta={"p": ps, "a1": (1.0 / src.b1) ** (-ps),
                  "a2": (1.0 / src.b2) ** (-ps)})
    else:
        star = ExponentProfile("conjugate", 1.0 / src.b1, 1.0 / src.b2,
                               p_star, meta={"base_kind": src.kind})

    return DomainGeometry(star, geom.quad_cfg,
                          _log_r1_xy=geom.log_r1_star_xy,
                          _log_r2_xy=geom.log_r2_star_xy,
                          _parent=geom)


def curvatures_at(geom: DomainGeometry, s: float) -> CurvatureTriple:
    """Principal curvatures of the boundary at parameter s.

    With Q = (s/r1)^2 + ((1-s)/r2)^2 the three curvatures are

        k1 = s / (r1^2 sqrt(Q)),
        k2 = (1-s) / (r2^2 sqrt(Q)),
        k3 = (p(s)-1) s(1-s) / (r1^2 r2^2) * Q^{-3/2},

    and the exponent is recovered as p = 1 + (k3/(k1 k2)) * sqrt(Q).
    """
    if not (0.0 < s < 1.0):
        raise DomainError("curvatures are defined for s in (0, 1)")
    r1 = float(geom.r1(s))
    r2 = float(geom.r2(s))
    q = (s / r1) ** 2 + ((1.0 - s) / r2) ** 2
    sq = math.sqrt(q)
    k1 = s / (r1 * r1 * sq)
    k2 = (1.0 - s) / (r2 * r2 * sq)
    p = float(geom.p_at(s))
    k3 = (p - 1.0) * s * (1.0 - s) / (r1 * r1 * r2 * r2) * q ** (-1.5)
    ratio = k3 / (k1 * k2)
    return CurvatureTriple(k1, k2, k3, ratio, 1.0 + ratio * sq)


def classify_boundary(geom: DomainGeometry) -> dict:
    """Heuristic contact-order classification at the two axis points.

    A finite exponent limit equal to an even integer 2m marks finite
    type 2m; a divergent limit marks infinite type; a limit below 2 means
    the boundary cannot be twice differentiable there.  Anything else is
    reported inconclusive together with the raw limit estimate.
    """
    out = {}
    for axis, key in (("axis0", "s1"), ("axis1", "s0")):
        # axis0 is the point where z2 = 0 (s -> 1); axis1 where z1 = 0
        lim = geom.p_limits[key]
        if lim is None:
            out[axis] = {"class": "inconclusive", "limit": None}
        elif lim == math.inf:
            out[axis] = {"class": "infinite_type", "limit": "divergent"}
        elif lim < 2.0 - 1e-4:
            out[axis] = {"class": "not_C2", "limit": lim}
        else:
            near_even = round(lim / 2.0) * 2.0
            if near_even >= 2.0 and abs(lim - near_even) < 1e-4:
                low_conf = abs(lim - 2.0) < 1e-4 and geom.profile.constant_p is None
                out[axis] = {"class": f"finite_type({int(near_even)})",
                             "limit": lim,
                             "confidence": 0.5 if low_conf else 0.9}
            else:
                out[axis] = {"class": "inconclusive", "limit": lim}
    return out


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------

def domain_from_spec(spec: dict | str,
                     quad_cfg: QuadConfig | None = None) -> DomainGeometry:
    """Build a geometry from a JSON object (or JSON text).

    Recognized forms:
      {"kind": "egg",   "p": 4, "a1": 1.0, "a2": 1.0}
      {"kind": "expr",  "p_check": "2+1/log(10/s)", "b1": 1.0, "b2": 1.0}
      {"kind": "table", "s": [...], "p": [...], "b1": 1.0, "b2": 1.0}
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid domain JSON: {exc}") from exc
    if not isinstance(spec, dict) or "kind" not in spec:
        raise DomainError("domain spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "egg":
            prof = egg_profile(spec["p"], spec.get("a1", 1.0), spec.get("a2", 1.0))
        elif kind == "expr":
            prof = expression_profile(spec["p_check"],
                                      spec.get("b1", 1.0), spec.get("b2", 1.0))
        elif kind == "table":
            prof = tabulated_profile(spec["s"], spec["p"],
                                     spec.get("b1", 1.0), spec.get("b2", 1.0))
        else:
            raise DomainError(f"unknown domain kind {kind!r}")
    except KeyError as exc:
        raise DomainError(f"domain spec missing field {exc.args[0]!r}") from exc
    return domain_from_exponent(prof, quad_cfg)
