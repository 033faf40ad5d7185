"""Coefficient grids, the Laplace coefficient map, and weighted norms.

Monomials z1^{m1} z2^{m2} are orthogonal in every norm here (all weights are
rotation invariant), so norms reduce to diagonal series over the coefficient
support, with per-index radial factors computed by quadrature in log space.

The boundary measure in the (s, theta1, theta2) parametrization is
ds dtheta1 dtheta2 / (16 pi^2); integrating out the two angles produces the
exact constant 1/4 that appears in front of every formula below.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .errors import DomainError, IndexOutOfTable
from .geometry import DomainGeometry, dual_complement
from .leray import MomentTable, _radial_log_nodes
from .numerics import (LogValue, QuadConfig, bessel_i0_log, log_gamma,
                       tanh_sinh_nodes_sym)

__all__ = [
    "CoefficientGrid",
    "NormReport",
    "hardy_norm_sq",
    "laplace_map",
    "invert_laplace",
    "bergman_nu_norm_sq",
    "exp_norm_sq",
    "bergman_omega_norm_sq",
]

_SIDES = ("hardy", "bergman", "laplace")
_LOG4 = math.log(4.0)


@dataclass(frozen=True)
class CoefficientGrid:
    """Finitely supported complex coefficients indexed by (m1, m2)."""

    side: str
    entries: Dict[Tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.side not in _SIDES:
            raise DomainError(f"unknown coefficient side {self.side!r}")
        for (m1, m2) in self.entries:
            if m1 < 0 or m2 < 0 or m1 != int(m1) or m2 != int(m2):
                raise DomainError(f"invalid index ({m1},{m2})")

    @property
    def support(self):
        return sorted(self.entries)

    @classmethod
    def from_json(cls, text: str | dict) -> "CoefficientGrid":
        obj = json.loads(text) if isinstance(text, str) else text
        entries = {}
        for item in obj.get("entries", []):
            key = (int(item["m1"]), int(item["m2"]))
            entries[key] = complex(float(item.get("re", 0.0)),
                                   float(item.get("im", 0.0)))
        return cls(obj.get("side", "hardy"), entries)

    def to_json(self) -> dict:
        return {"side": self.side,
                "entries": [{"m1": k[0], "m2": k[1],
                             "re": v.real, "im": v.imag}
                            for k, v in sorted(self.entries.items())]}


@dataclass(frozen=True)
class NormReport:
    value: float
    log_value: float
    breakdown: Dict[Tuple[int, int], float]
    err_est: float
    convention: str


def _sum_report(terms: Dict[Tuple[int, int], float], err: float,
                convention: str) -> NormReport:
    total = math.fsum(terms.values())
    logv = math.log(total) if total > 0 else -math.inf
    return NormReport(total, logv, terms, err, convention)


# ---------------------------------------------------------------------------
# Hardy norm and the Laplace coefficient map
# ---------------------------------------------------------------------------

def hardy_norm_sq(geom: DomainGeometry, a: CoefficientGrid,
                  table: MomentTable) -> NormReport:
    """||f||^2 = (1/4) sum |a_{m1,m2}|^2 I(m1, m2) on the boundary measure."""
    if a.side != "hardy":
        raise DomainError("hardy_norm_sq expects a hardy-side grid")
    terms = {}
    err = 0.0
    for (m1, m2), amp in a.entries.items():
        log_i = table.log_I_at(m1, m2)  # raises IndexOutOfTable
        terms[(m1, m2)] = 0.25 * abs(amp) ** 2 * math.exp(log_i)
        err += terms[(m1, m2)] * float(table.err[m1, m2])
    return _sum_report(terms, err, "exact_parametrized")


def laplace_map(geom: DomainGeometry, a: CoefficientGrid,
                table: MomentTable) -> CoefficientGrid:
    """Coefficients of the transformed entire function:
    t = (1/4) conj(a) I(m1, m2) / (m1! m2!)."""
    if a.side != "hardy":
        raise DomainError("laplace_map expects a hardy-side grid")
    out = {}
    for (m1, m2), amp in a.entries.items():
        log_scale = (table.log_I_at(m1, m2) - _LOG4
                     - log_gamma(m1 + 1.0) - log_gamma(m2 + 1.0))
        out[(m1, m2)] = amp.conjugate() * math.exp(log_scale)
    return CoefficientGrid("laplace", out)


def invert_laplace(geom: DomainGeometry, t: CoefficientGrid,
                   table: MomentTable) -> CoefficientGrid:
    """Inverse of laplace_map: a = 4 conj(t) m1! m2! / I(m1, m2)."""
    if t.side != "laplace":
        raise DomainError("invert_laplace expects a laplace-side grid")
    out = {}
    for (m1, m2), amp in t.entries.items():
        log_scale = (_LOG4 + log_gamma(m1 + 1.0) + log_gamma(m2 + 1.0)
                     - table.log_I_at(m1, m2))
        out[(m1, m2)] = amp.conjugate() * math.exp(log_scale)
    return CoefficientGrid("hardy", out)


# ---------------------------------------------------------------------------
# explicit-weight Bergman norm (nu)
# ---------------------------------------------------------------------------

def _log_j_integrals(dual: DomainGeometry, pairs, level: int,
                     h_variant: bool) -> dict:
    """log of J(m1,m2) = int r1*^{2m1} r2*^{2m2} (r1*^2 + r2*^2)^{3/4} ds.

    The dual radii are the radial profiles of the dual-complement geometry.
    With h_variant the norm factor ||z||^{3/2} is replaced by H(z)^{3/2},
    which drops the (r1*^2 + r2*^2)^{3/4} factor entirely.
    """
    logw, lr1s, lr2s = _radial_log_nodes(dual, level)
    extra = 0.0 if h_variant else 0.75 * np.logaddexp(2.0 * lr1s, 2.0 * lr2s)
    out = {}
    for (m1, m2) in pairs:
        t = logw + 2.0 * m1 * lr1s + 2.0 * m2 * lr2s + extra
        mx = t.max()
        out[(m1, m2)] = float(mx + math.log(np.sum(np.exp(t - mx))))
    return out


def bergman_nu_norm_sq(geom: DomainGeometry, beta: CoefficientGrid,
                       cfg: QuadConfig | None = None,
                       convention: str = "exact_parametrized",
                       h_variant: bool = False,
                       dual: DomainGeometry | None = None) -> NormReport:
    """Squared norm against the explicit weight e^{-2 H(z)} ||z||^{3/2}.

    exact_parametrized (default):
        (1/4) sum |beta|^2 Gamma(2M + 7/2) / 2^{2M + 7/2} * J(m1, m2),
    with M = m1 + m2 and J the dual-radial integral above.

    paper_equivalent: the model series sum |beta|^2 ((M + 1)!)^2 I*(m1, m2),
    comparable to the exact value up to fixed constants.
    """
    if beta.side != "bergman":
        raise DomainError("bergman_nu_norm_sq expects a bergman-side grid")
    if convention not in ("exact_parametrized", "paper_equivalent"):
        raise DomainError(f"unknown convention {convention!r}")
    dual = dual or dual_complement(geom)
    pairs = beta.support
    terms = {}
    if convention == "paper_equivalent":
        logs = _log_j_integrals(dual, pairs, 7, h_variant=True)  # plain I*
        for key in pairs:
            m = key[0] + key[1]
            lg = 2.0 * log_gamma(m + 2.0)
            terms[key] = abs(beta.entries[key]) ** 2 * math.exp(lg + logs[key])
        return _sum_report(terms, 0.0, "paper_equivalent")

    logs_a = _log_j_integrals(dual, pairs, 6, h_variant)
    logs_b = _log_j_integrals(dual, pairs, 7, h_variant)
    err = 0.0
    for key in pairs:
        m = key[0] + key[1]
        log_radial = log_gamma(2.0 * m + 3.5) - (2.0 * m + 3.5) * math.log(2.0)
        terms[key] = 0.25 * abs(beta.entries[key]) ** 2 * math.exp(
            log_radial + logs_b[key])
        err += terms[key] * abs(logs_b[key] - logs_a[key])
    tag = "exact_parametrized" + ("/H32" if h_variant else "")
    return _sum_report(terms, err, tag)


# ---------------------------------------------------------------------------
# exponential-moment weight (omega)
# ---------------------------------------------------------------------------

def exp_norm_sq(geom: DomainGeometry, r: float, t: float,
                cfg: QuadConfig | None = None, level: int = 6) -> LogValue:
    """log-space squared boundary norm of the exponential e^{<z, .>}
    at z = r (r1*(t), r2*(t)):

        E(r, t) = (1/4) int_0^1 I0(2 r r1(s) r1*(t)) I0(2 r r2(s) r2*(t)) ds.

    The two angular integrals produce the Bessel factors; rotation
    invariance makes the phases of z irrelevant.
    """
    if r < 0:
        raise DomainError("exp_norm_sq needs r >= 0")
    if not (0.0 <= t <= 1.0):
        raise DomainError("t must lie in [0, 1]")
    logw, lr1, lr2 = _radial_log_nodes(geom, level)
    lr1t = float(geom.log_r1_star(t)) if t > 0 else -math.inf
    lr2t = float(geom.log_r2_star(t)) if t < 1 else -math.inf
    a1 = np.exp(math.log(2.0 * r) + lr1 + lr1t) if (r > 0 and lr1t > -math.inf) \
        else np.zeros_like(lr1)
    a2 = np.exp(math.log(2.0 * r) + lr2 + lr2t) if (r > 0 and lr2t > -math.inf) \
        else np.zeros_like(lr2)
    terms = logw + bessel_i0_log(a1) + bessel_i0_log(a2)
    mx = terms.max()
    return LogValue(float(mx + math.log(np.sum(np.exp(terms - mx)))
                          - _LOG4), 1)


def _omega_log_weight_grid(geom: DomainGeometry, rs: np.ndarray,
                           t_nodes, level: int) -> np.ndarray:
    """log E(r, t) on the outer product of r values and t nodes."""
    x, xm, _w = t_nodes
    logw, lr1, lr2 = _radial_log_nodes(geom, level)
    lr1t = geom.log_r1_star_xy(x, xm)
    lr2t = geom.log_r2_star_xy(x, xm)
    out = np.empty((rs.size, x.size))
    # chunk over r so the (chunk, n_s, n_t) argument arrays stay small
    chunk = max(1, int(2e6 // (lr1.size * x.size)))
    radial1 = np.exp(lr1[:, None] + lr1t[None, :])   # (n_s, n_t)
    radial2 = np.exp(lr2[:, None] + lr2t[None, :])
    for lo in range(0, rs.size, chunk):
        r = rs[lo:lo + chunk, None, None]
        terms = (logw[None, :, None]
                 + bessel_i0_log(2.0 * r * radial1[None, :, :])
                 + bessel_i0_log(2.0 * r * radial2[None, :, :]))
        mx = terms.max(axis=1)
        out[lo:lo + chunk] = mx + np.log(
            np.sum(np.exp(terms - mx[:, None, :]), axis=1)) - _LOG4
    return out


def bergman_omega_norm_sq(geom: DomainGeometry, beta: CoefficientGrid,
                          cfg: QuadConfig | None = None) -> NormReport:
    """Squared norm against the reciprocal exponential-moment weight.

    By rotation invariance monomials are orthogonal and

        ||F||^2 = (1/4) sum |beta|^2
                  int_0^inf int_0^1 r^{2M} r1*(t)^{2m1} r2*(t)^{2m2}
                                    E(r, t)^{-1} r dt dr,

    a 2-D quadrature.  The weight grows like e^{2r} r^{-3/2}, so each radial
    integrand behaves like r^{2M + 5/2} e^{-2r}; the r-range is truncated
    where the log-integrand falls 40 nats below its peak.
    """
    if beta.side != "bergman":
        raise DomainError("bergman_omega_norm_sq expects a bergman-side grid")
    pairs = beta.support
    if not pairs:
        return _sum_report({}, 0.0, "exact_parametrized")

    t_nodes = tanh_sinh_nodes_sym(3)
    x, xm, w = t_nodes
    lr1t = geom.log_r1_star_xy(x, xm)
    lr2t = geom.log_r2_star_xy(x, xm)
    logw_t = np.log(w)

    max_m = max(k[0] + k[1] for k in pairs)
    peak = max_m + 1.25
    r_max = peak + 40.0 + 6.0 * math.sqrt(peak + 1.0)
    gx, gw = np.polynomial.legendre.leggauss(12)
    panel = max(2.0, math.sqrt(peak))
    n_panels = int(math.ceil(r_max / panel))
    edges = np.linspace(0.0, r_max, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    rs = (mid[:, None] + half * gx[None, :]).ravel()
    r_weights = np.tile(half * gw, n_panels)

    log_e = _omega_log_weight_grid(geom, rs, t_nodes, level=4)

    terms = {}
    with np.errstate(divide="ignore"):
        log_rs = np.log(rs)
    for (m1, m2) in pairs:
        m = m1 + m2
        g = ((2.0 * m + 1.0) * log_rs[:, None]
             + 2.0 * m1 * lr1t[None, :] + 2.0 * m2 * lr2t[None, :]
             - log_e
             + logw_t[None, :])
        mx = g.max()
        rel = np.exp(np.maximum(g - mx, -745.0))
        rel[g < mx - 40.0] = 0.0  # truncation contract: 40 nats below peak
        inner = float(np.sum(rel * r_weights[:, None]))
        terms[(m1, m2)] = (0.25 * abs(beta.entries[(m1, m2)]) ** 2
                           * math.exp(mx) * inner)
    return _sum_report(terms, 0.0, "exact_parametrized")
