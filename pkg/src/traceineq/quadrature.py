"""Quadrature rules and the hyperbolic weight density.

The weight is beta(t) = (pi/2) / (1 + cosh(pi t)), evaluated in the
overflow-free form pi e^{-pi|t|} / (1 + e^{-pi|t|})^2. It is an even
probability density with tails bounded by pi e^{-pi|t|}, so truncating
the real line to [-T, T] loses at most 2 e^{-pi T} of the mass.

Two rules cover every integral in the library: Gauss-Legendre on a
truncated real line for beta-averages, and Gauss-Legendre in the
variable s with tau = s / (1 - s) for half-line resolvent integrals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidRange
from .linalg import logarithmic_ratio, real_trace
from .report import TrialReport, identity_report

BETA_HALF_WIDTH = 12.0
BETA_NODE_COUNT = 400
HALFLINE_NODE_COUNT = 200


def beta_density(t):
    """Even density (pi/2) / (1 + cosh(pi t)), stable for large |t|."""
    e = np.exp(-np.pi * np.abs(t))
    return np.pi * e / (1.0 + e) ** 2


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights plus the metadata needed for error reporting."""

    kind: str  # "real-line" or "half-line"
    nodes: np.ndarray
    weights: np.ndarray
    node_count: int
    half_width: float | None = None

    def tail_bound(self, sup_abs: float = 1.0) -> float:
        """Truncation bound for real-line beta integrals: the discarded
        tails carry at most sup|f| * 2 e^{-pi T}."""
        if self.kind != "real-line":
            return 0.0
        return float(sup_abs) * 2.0 * np.exp(-np.pi * self.half_width)


def real_line_rule(half_width: float = BETA_HALF_WIDTH,
                   node_count: int = BETA_NODE_COUNT) -> QuadratureRule:
    """Gauss-Legendre on [-T, T] for beta-weighted averages."""
    if half_width <= 0 or node_count < 2:
        raise InvalidRange(f"need half_width > 0 and node_count >= 2, "
                           f"got ({half_width}, {node_count})")
    x, w = np.polynomial.legendre.leggauss(int(node_count))
    return QuadratureRule("real-line", half_width * x, half_width * w,
                          int(node_count), float(half_width))


def half_line_rule(node_count: int = HALFLINE_NODE_COUNT) -> QuadratureRule:
    """Gauss-Legendre on (0, infinity) via tau = s / (1 - s).

    The Jacobian 1/(1-s)^2 is folded into the weights, so integrands
    decaying like tau^{-2} become smooth bounded functions of s.
    """
    if node_count < 2:
        raise InvalidRange(f"need node_count >= 2, got {node_count}")
    x, w = np.polynomial.legendre.leggauss(int(node_count))
    s = 0.5 * (x + 1.0)
    ws = 0.5 * w
    tau = s / (1.0 - s)
    return QuadratureRule("half-line", tau, ws / (1.0 - s) ** 2, int(node_count))


def doubled(rule: QuadratureRule) -> QuadratureRule:
    """Same rule with twice the nodes, for convergence self-checks."""
    if rule.kind == "real-line":
        return real_line_rule(rule.half_width, 2 * rule.node_count)
    return half_line_rule(2 * rule.node_count)


def integrate_beta(f, rule: QuadratureRule | None = None) -> complex:
    """Integral of f(t) beta(t) dt over the truncated real line.

    f is called on the node array first; scalar-only callables fall
    back to a python loop.
    """
    rule = rule or real_line_rule()
    try:
        vals = np.asarray(f(rule.nodes), dtype=complex)
        if vals.shape != rule.nodes.shape:
            raise ValueError
    except Exception:
        vals = np.asarray([f(t) for t in rule.nodes], dtype=complex)
    return complex(np.dot(rule.weights * beta_density(rule.nodes), vals))


def integrate_halfline(g, rule: QuadratureRule | None = None):
    """Integral of a scalar- or matrix-valued g(tau) over (0, infinity)."""
    rule = rule or half_line_rule()
    acc = None
    for tau, w in zip(rule.nodes, rule.weights):
        term = w * np.asarray(g(tau))
        acc = term if acc is None else acc + term
    return acc


def beta_normalization_gap(rule: QuadratureRule | None = None) -> float:
    rule = rule or real_line_rule()
    return abs(float(np.dot(rule.weights, beta_density(rule.nodes))) - 1.0)


def scalar_power_average(x: float, y: float,
                         rule: QuadratureRule | None = None) -> float:
    """The beta-average of x^{(1+it)/2} y^{(1-it)/2} for scalars x, y > 0."""
    if x <= 0 or y <= 0:
        raise InvalidRange(f"scalar arguments must be positive, got ({x}, {y})")
    rule = rule or real_line_rule()
    root = np.sqrt(x * y)
    phase = 0.5 * np.log(x / y)
    vals = root * np.exp(1j * phase * rule.nodes)
    return real_trace(np.dot(rule.weights * beta_density(rule.nodes), vals),
                      context="scalar power average")


def scalar_log_kernel(x: float, y: float) -> float:
    """Closed form of the same average: x y log(y/x) / (y - x), with the
    diagonal limit x at y = x. Equals the divided difference of log at
    the inverse arguments."""
    if x <= 0 or y <= 0:
        raise InvalidRange(f"scalar arguments must be positive, got ({x}, {y})")
    return float(logarithmic_ratio(1.0 / x, 1.0 / y))


def scalar_identity_check(x: float, y: float,
                          rule: QuadratureRule | None = None,
                          atol: float = 1e-8) -> TrialReport:
    """Quadrature vs closed form for the scalar conjugated-power average."""
    lhs = scalar_power_average(x, y, rule)
    rhs = scalar_log_kernel(x, y)
    return identity_report("scalar_power_identity", lhs, rhs, atol=atol,
                           params={"x": x, "y": y})
