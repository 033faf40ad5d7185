"""Shared numerical kernels.

Adaptive quadrature (Gauss-Kronrod and tanh-sinh double-exponential),
log-space scalars, log-Gamma/Beta, the modified Bessel function I0 in log
space, and sequence-limit extrapolation.  Everything here is pure and
reentrant; moment-type integrands elsewhere in the library are evaluated as
exp(sum of m_i * log r_i) through these helpers so that degrees up to a few
hundred stay inside double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _sci_integrate
from scipy.special import expit as _expit

from .errors import DomainError

__all__ = [
    "QuadConfig",
    "QuadResult",
    "LogValue",
    "log_add",
    "integrate",
    "tanh_sinh_nodes",
    "tanh_sinh_nodes_sym",
    "log_gamma",
    "log_beta",
    "log_factorial",
    "bessel_i0_log",
    "ExtrapolationResult",
    "extrapolate_limit",
]


# ---------------------------------------------------------------------------
# configuration / result containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and scheme selection for 1-D quadrature."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    scheme: str = "double_exponential"  # or "adaptive_nested"

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 8:
            raise DomainError("max_subdivisions must be >= 8")
        if self.scheme not in ("double_exponential", "adaptive_nested"):
            raise DomainError(f"unknown quadrature scheme {self.scheme!r}")


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    converged: bool = True


# ---------------------------------------------------------------------------
# log-space scalars
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogValue:
    """A real number stored as (sign, log|value|).

    sign == 0 encodes an exact zero; log_magnitude is ignored in that case.
    """

    log_magnitude: float
    sign: int = 1

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue(-math.inf, 0)
        return LogValue(self.log_magnitude + other.log_magnitude,
                        self.sign * other.sign)

    def scaled(self, log_factor: float) -> "LogValue":
        if self.sign == 0:
            return self
        return LogValue(self.log_magnitude + log_factor, self.sign)


def log_add(a: LogValue, b: LogValue) -> LogValue:
    """Sum of two signed log-space numbers."""
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    hi, lo = (a, b) if a.log_magnitude >= b.log_magnitude else (b, a)
    d = lo.log_magnitude - hi.log_magnitude  # <= 0
    if a.sign == b.sign:
        return LogValue(hi.log_magnitude + math.log1p(math.exp(d)), hi.sign)
    em = -math.expm1(d)  # 1 - e^d, accurate for d near 0
    if em == 0.0:
        return LogValue(-math.inf, 0)
    return LogValue(hi.log_magnitude + math.log(em), hi.sign)


def logsumexp_w(log_terms: np.ndarray, axis=None) -> np.ndarray:
    """logsumexp that tolerates -inf entries (empty contributions)."""
    m = np.max(log_terms, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    out = np.log(np.sum(np.exp(log_terms - m), axis=axis)) + np.squeeze(m, axis=axis or ())
    return out


# ---------------------------------------------------------------------------
# tanh-sinh (double exponential) rules
# ---------------------------------------------------------------------------

_TS_TMAX = 6.5  # |t| beyond which weights underflow double range


def tanh_sinh_nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Tanh-sinh abscissae and weights on the open interval (0, 1).

    h = 2^-level.  Nodes mapping to exactly 0 or 1 in double precision are
    dropped; the double-exponential weight decay makes the truncation error
    negligible relative to the rule's own accuracy.
    """
    h = 2.0 ** (-level)
    k = np.arange(-int(_TS_TMAX / h), int(_TS_TMAX / h) + 1)
    t = k * h
    with np.errstate(over="ignore"):
        u = np.pi * np.sinh(t)
        # sigmoid form keeps relative accuracy for nodes near 0, which
        # matters for integrands with an endpoint singularity there
        x = _expit(u)
        w = 0.25 * np.pi * h * np.cosh(t) / np.cosh(0.5 * u) ** 2
    keep = (x > 0.0) & (x < 1.0) & (w > 1e-320)
    return x[keep], w[keep]


def tanh_sinh_nodes_sym(level: int):
    """Like tanh_sinh_nodes but also returns 1 - x to full relative accuracy.

    Near the right endpoint 1 - x underflows the spacing of doubles around
    1; integrands singular (or steep) there need the complement directly.
    """
    h = 2.0 ** (-level)
    k = np.arange(-int(_TS_TMAX / h), int(_TS_TMAX / h) + 1)
    t = k * h
    with np.errstate(over="ignore"):
        u = np.pi * np.sinh(t)
        x = _expit(u)
        xm = _expit(-u)
        w = 0.25 * np.pi * h * np.cosh(t) / np.cosh(0.5 * u) ** 2
    keep = (x > 0.0) & (xm > 0.0) & (w > 1e-320)
    return x[keep], xm[keep], w[keep]


def _expsinh_nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Exp-sinh abscissae/weights for (0, inf); for exponentially decaying f."""
    h = 2.0 ** (-level)
    k = np.arange(-int(_TS_TMAX / h), int(_TS_TMAX / h) + 1)
    t = k * h
    with np.errstate(over="ignore"):
        x = np.exp(np.sinh(t))
        w = h * np.cosh(t) * x
    keep = np.isfinite(x) & (x > 0.0) & np.isfinite(w) & (w > 1e-320) & (x < 1e300)
    return x[keep], w[keep]


def _de_sum(f: Callable, x: np.ndarray, w: np.ndarray) -> float:
    with np.errstate(invalid="ignore", over="ignore"):
        fx = np.asarray(f(x), dtype=float)
    fx = np.where(np.isfinite(fx), fx, 0.0)
    return float(np.dot(fx, w))


def _integrate_de(f: Callable, a: float, b: float, cfg: QuadConfig) -> QuadResult:
    if math.isinf(b):
        if a != 0.0:
            g = lambda u: f(u + a)
        else:
            g = f
        nodes = _expsinh_nodes
        scale = lambda x: x
        jac = 1.0
    else:
        width = b - a
        g = lambda u: f(a + width * u)
        nodes = tanh_sinh_nodes
        jac = width
        scale = None

    prev = None
    max_level = max(4, min(12, int(math.log2(cfg.max_subdivisions)) + 3))
    for level in range(3, max_level + 1):
        x, w = nodes(level)
        s = jac * _de_sum(g, x, w)
        if prev is not None:
            err = abs(s - prev)
            tol = max(cfg.abs_tol, cfg.rel_tol * abs(s))
            if err <= tol:
                return QuadResult(s, err, True)
        prev = s
    return QuadResult(prev, abs(s - prev) if prev is not None else math.inf, False)


def _integrate_adaptive(f: Callable, a: float, b: float, cfg: QuadConfig) -> QuadResult:
    with np.errstate(all="ignore"):
        val, err, *rest = _sci_integrate.quad(
            f, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
            limit=cfg.max_subdivisions, full_output=1)[:2] + (None,)
    converged = err <= max(cfg.abs_tol, cfg.rel_tol * abs(val)) * 10
    return QuadResult(float(val), float(err), bool(converged))


def integrate(f: Callable, a: float, b: float, cfg: QuadConfig | None = None) -> QuadResult:
    """Integrate f over (a, b); b may be inf.

    Returns the best estimate with an error estimate; converged=False marks
    an exhausted refinement budget (no exception is raised).
    """
    cfg = cfg or QuadConfig()
    if cfg.scheme == "adaptive_nested":
        return _integrate_adaptive(f, a, b, cfg)
    return _integrate_de(f, a, b, cfg)


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array([
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248, 14.136097974741747174,
    -0.49191381609762019978, 0.33994649984811888699e-4,
    0.46523628927048575665e-4, -0.98374475304879564677e-4,
    0.15808870322491248884e-3, -0.21026444172410488319e-3,
    0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4, -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log_gamma(x: np.ndarray) -> np.ndarray:
    # valid for x >= 0.5
    a = np.full_like(x, _LANCZOS_C[0])
    for k in range(1, 15):
        a = a + _LANCZOS_C[k] / (x + (k - 1))
    t = x + _LANCZOS_G - 0.5
    return _LOG_SQRT_2PI + np.log(a) + (x - 0.5) * np.log(t) - t


def log_gamma(x):
    """log Gamma(x) for x > 0 (Lanczos approximation, reflection below 1/2)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x <= 0.0):
        raise DomainError("log_gamma requires x > 0")
    out = np.empty_like(x)
    small = x < 0.5
    if np.any(small):
        xs = x[small]
        out[small] = (np.log(np.pi / np.sin(np.pi * xs))
                      - _lanczos_log_gamma(1.0 - xs))
    out[~small] = _lanczos_log_gamma(x[~small])
    return float(out[0]) if scalar else out


def log_beta(x, y):
    """log B(x, y) = log Gamma(x) + log Gamma(y) - log Gamma(x + y)."""
    return log_gamma(x) + log_gamma(y) - log_gamma(np.asarray(x, float) + y)


def log_factorial(n):
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise DomainError("factorial of a negative integer")
    return log_gamma(n + 1.0)


# I0 asymptotic series coefficients a_k = ((2k-1)!!)^2 / (k! 8^k)
_I0_ASYM = [1.0]
for _k in range(1, 22):
    _I0_ASYM.append(_I0_ASYM[-1] * (2 * _k - 1) ** 2 / (8.0 * _k))
_I0_ASYM = np.array(_I0_ASYM)


def bessel_i0_log(x):
    """log I0(x) for x >= 0; power series below 30, asymptotic above.

    Stays finite for arguments far past the overflow point of I0 itself.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < 0.0):
        raise DomainError("bessel_i0_log requires x >= 0")
    out = np.zeros_like(x)

    small = x <= 30.0
    if np.any(small):
        xs = x[small]
        q = 0.25 * xs * xs
        term = np.ones_like(xs)
        acc = np.ones_like(xs)
        for k in range(1, 80):
            term = term * q / (k * k)
            acc = acc + term
            if np.all(term <= 1e-18 * acc):
                break
        out[small] = np.log(acc)

    big = ~small
    if np.any(big):
        xb = x[big]
        acc = np.zeros_like(xb)
        pw = np.ones_like(xb)
        for ak in _I0_ASYM:
            acc = acc + ak * pw
            pw = pw / xb
        out[big] = xb - 0.5 * np.log(2.0 * np.pi * xb) + np.log(acc)

    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# limit extrapolation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtrapolationResult:
    limit: float
    confidence: float
    converged: bool
    residuals: tuple = field(default_factory=tuple)


def extrapolate_limit(seq: Sequence[float]) -> ExtrapolationResult:
    """Estimate lim a_n from a finite tail via iterated Aitken acceleration.

    Confidence comes from the decay of successive differences; sequences
    whose residuals fail to shrink are reported converged=False with the raw
    tail value as the limit estimate.
    """
    s = np.asarray(seq, dtype=float)
    if s.size < 4:
        raise DomainError("extrapolate_limit needs at least 4 terms")

    rows = [s]
    cur = s
    while cur.size >= 3:
        d2 = cur[2:] - 2.0 * cur[1:-1] + cur[:-2]
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = cur[2:] - (cur[2:] - cur[1:-1]) ** 2 / np.where(d2 == 0.0, np.nan, d2)
        if not np.all(np.isfinite(nxt)):
            break
        rows.append(nxt)
        cur = nxt

    # pick the acceleration depth with the smallest trailing difference;
    # deeper rows can be polluted by cancellation noise
    raw_resid = float(abs(s[-1] - s[-2]))
    best_row = s
    best_resid = raw_resid
    for row in rows[1:]:
        if row.size < 2:
            continue
        r = float(abs(row[-1] - row[-2]))
        if r < best_resid:
            best_resid = r
            best_row = row
    limit = float(best_row[-1])

    scale = max(abs(limit), 1e-300)
    converged = bool(best_resid <= 1e-6 * scale
                     or best_resid <= 1e-3 * raw_resid + 1e-15 * scale)
    # a tail whose raw differences are not shrinking is not Cauchy; Aitken
    # can still stabilize on such input (it Abel-sums oscillations), so
    # refuse to certify convergence in that case
    first_resid = float(abs(s[1] - s[0]))
    if raw_resid > 1e-9 * scale and raw_resid >= first_resid > 0.0:
        converged = False
    confidence = float(np.clip(1.0 - best_resid / (raw_resid + best_resid + 1e-300),
                               0.0, 1.0))
    if not converged:
        confidence = min(confidence, 0.5)
    return ExtrapolationResult(limit, confidence, converged,
                               residuals=(raw_resid, best_resid))
