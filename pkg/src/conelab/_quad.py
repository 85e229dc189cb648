"""Composite Gauss-Legendre quadrature on log-uniform radius grids."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


class LogGridQuadrature:
    """Integrals ``int g(s) ds`` over a grid of radii, integrated in t = ln s.

    Each grid interval gets an 8-point Gauss-Legendre rule in t, so integrands
    behaving like powers of s are resolved to rounding.  The piece below the
    first node is added from a power-law fit of the integrand at s0 and 2 s0.

    The ``log_*`` variants take ``log g`` instead of ``g`` and return the
    logarithm of the integral, which keeps exponentially large integrands
    finite.
    """

    def __init__(self, nodes):
        self.nodes = np.asarray(nodes, dtype=float)
        self.t = np.log(self.nodes)
        a, b = self.t[:-1], self.t[1:]
        half = 0.5 * (b - a)
        self._tq = (0.5 * (a + b))[:, None] + half[:, None] * _GL_X[None, :]
        self._wq = half[:, None] * _GL_W[None, :]
        self.points = np.exp(self._tq)

    # -- linear space -------------------------------------------------------

    def _head(self, g):
        s0 = self.nodes[0]
        g0, g1 = g(np.array([s0, 2.0 * s0]))
        if g0 == 0:
            return 0.0
        if g1 == 0 or g0 * g1 < 0:
            return g0 * s0
        p = math.log(abs(g1 / g0)) / math.log(2.0)
        if p <= -1:
            return math.inf
        return g0 * s0 / (p + 1.0)

    def pieces(self, g):
        """Integral over each grid interval."""
        vals = g(self.points.ravel()).reshape(self.points.shape)
        return np.sum(vals * self.points * self._wq, axis=1)

    def cumulative(self, g):
        """Integral from 0 to every node."""
        return np.concatenate([[0.0], np.cumsum(self.pieces(g))]) + self._head(g)

    def _segment_points(self, x):
        i = np.clip(np.searchsorted(self.nodes, x, side="right") - 1, 0, self.nodes.size - 1)
        ta = self.t[i]
        tb = np.log(x)
        half = 0.5 * (tb - ta)
        tq = (0.5 * (ta + tb))[:, None] + half[:, None] * _GL_X[None, :]
        return i, np.exp(tq), half[:, None] * _GL_W[None, :]

    def at(self, g, x, cumulative=None):
        """Integral from 0 to each x (x within the grid)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        cum = self.cumulative(g) if cumulative is None else cumulative
        i, sq, w = self._segment_points(x)
        vals = g(sq.ravel()).reshape(sq.shape)
        return cum[i] + np.sum(vals * sq * w, axis=1)

    # -- log space --------------------------------------------------------------

    def _log_power(self, log_g):
        s0 = self.nodes[0]
        l0, l1 = log_g(np.array([s0, 2.0 * s0]))
        return l0, (l1 - l0) / math.log(2.0)

    def _log_head(self, log_g, x=None):
        """Power-law estimate of ln int_0^x g for x at or below the first node."""
        s0 = self.nodes[0]
        l0, p = self._log_power(log_g)
        if not np.isfinite(l0):
            return -math.inf
        if p <= -1:
            return math.inf
        if x is None:
            return l0 + math.log(s0) - math.log(p + 1.0)
        with np.errstate(divide="ignore"):
            return l0 + (p + 1.0) * np.log(x / s0) + math.log(s0) - math.log(p + 1.0)

    def log_cumulative(self, log_g):
        """ln of the integral from 0 to every node, for a positive integrand."""
        lv = log_g(self.points.ravel()).reshape(self.points.shape)
        with np.errstate(divide="ignore"):
            lp = logsumexp(lv + self._tq + np.log(self._wq), axis=1)
        lp = np.concatenate([[self._log_head(log_g)], lp])
        return np.logaddexp.accumulate(lp)

    def log_at(self, log_g, x, log_cumulative=None):
        """ln of the integral from 0 to each x (x at most the last node)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.shape)
        below = x < self.nodes[0]
        if np.any(below):
            out[below] = self._log_head(log_g, x[below])
        above = ~below
        if np.any(above):
            cum = self.log_cumulative(log_g) if log_cumulative is None else log_cumulative
            i, sq, w = self._segment_points(x[above])
            lv = log_g(sq.ravel()).reshape(sq.shape)
            with np.errstate(divide="ignore"):
                part = logsumexp(lv + np.log(sq) + np.log(w), axis=1)
            out[above] = np.logaddexp(cum[i], part)
        return out
