"""The log-derivative operator and its cross-checked evaluations.

T_X(Y) is the Frechet derivative of the matrix logarithm at X applied
to Y. Three independent routes are kept deliberately separate:

* closed form, the divided-difference (Loewner) kernel of log in the
  eigenbasis of X, used everywhere in production;
* resolvent quadrature of (X + tau)^{-1} Y (X + tau)^{-1} over the
  half line, built on linear solves rather than the eigenbasis;
* central finite differences of the matrix log.

The three must agree pairwise; collapsing them would turn the
verification into a tautology, so do not "simplify" the quadrature or
difference routes into calls of the closed form.

The same operator admits a conjugated-power average: integrating
A2^{(1+it)/2} A1 A2^{(1-it)/2} against the hyperbolic density equals
T at the inverse base, T_{A2^{-1}}(A1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, StepTooLarge
from .linalg import (
    PosDefMatrix,
    as_posdef,
    logarithmic_ratio,
)
from .quadrature import QuadratureRule, beta_density, half_line_rule, real_line_rule
from .report import TrialReport, identity_report

FD_STEP_SCALE = 1e-5


@dataclass(frozen=True)
class TOperatorResult:
    value: np.ndarray
    method: str


def _conformable(x: PosDefMatrix, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=complex)
    if y.shape != (x.dim, x.dim):
        raise DimensionMismatch(f"direction shape {y.shape} does not match "
                                f"base dimension {x.dim}")
    return y


def log_derivative_closed(x, y) -> TOperatorResult:
    """Divided-difference kernel: in the eigenbasis of X the entries of
    T_X(Y) are Y_ij (log li - log lj) / (li - lj), diagonal 1 / li."""
    x = as_posdef(x)
    y = _conformable(x, y)
    lam = x.spectral.eigenvalues
    vec = x.spectral.eigenvectors
    ytil = vec.conj().T @ y @ vec
    phi = logarithmic_ratio(lam[:, None], lam[None, :])
    return TOperatorResult(vec @ (ytil * phi) @ vec.conj().T, "closed")


def log_derivative_quadrature(x, y, rule: QuadratureRule | None = None) -> TOperatorResult:
    """Half-line integral of resolvent sandwiches, via batched solves.

    Kept eigenbasis-free on purpose: the resolvents come from
    np.linalg.inv, so agreement with the closed form is a genuine
    two-route consistency check.
    """
    x = as_posdef(x)
    y = _conformable(x, y)
    rule = rule or half_line_rule()
    eye = np.eye(x.dim)
    shifted = x.matrix[None, :, :] + rule.nodes[:, None, None] * eye[None, :, :]
    res = np.linalg.inv(shifted)
    sandwiched = res @ y[None, :, :] @ res
    val = np.einsum("t,tij->ij", rule.weights, sandwiched)
    return TOperatorResult(val, "quadrature")


def log_derivative_finite_difference(x, y, step: float | None = None) -> TOperatorResult:
    """Central difference (log(X + rY) - log(X - rY)) / 2r.

    The default step is FD_STEP_SCALE * ||X|| / ||Y||. Steps that push
    X - rY out of the positive cone (margin one half of the smallest
    eigenvalue) raise StepTooLarge instead of silently producing NaNs.
    """
    x = as_posdef(x)
    y = _conformable(x, y)
    norm_y = float(np.linalg.norm(y, 2))
    if norm_y == 0.0:
        return TOperatorResult(np.zeros_like(y), "finite-difference")
    if step is None:
        step = FD_STEP_SCALE * float(np.linalg.norm(x.matrix, 2)) / norm_y
    lam_min = float(x.spectral.eigenvalues[0])
    if step * norm_y >= 0.5 * lam_min:
        raise StepTooLarge(
            f"step {step:.3e} times ||Y|| {norm_y:.3e} is not well inside "
            f"the smallest eigenvalue {lam_min:.3e}")
    plus = PosDefMatrix(x.matrix + step * y).log()
    minus = PosDefMatrix(x.matrix - step * y).log()
    return TOperatorResult((plus - minus) / (2.0 * step), "finite-difference")


def conjugated_power_average(a1, a2, rule: QuadratureRule | None = None) -> np.ndarray:
    """Beta-weighted average of A2^{(1+it)/2} A1 A2^{(1-it)/2}.

    The complex powers for all nodes come from one eigendecomposition
    of A2, assembled as a stacked array.
    """
    a2 = as_posdef(a2)
    a1 = _conformable(a2, np.asarray(a1, dtype=complex))
    rule = rule or real_line_rule()
    lam = a2.spectral.eigenvalues
    vec = a2.spectral.eigenvectors
    z = 0.5 * (1.0 + 1j * rule.nodes)  # (T,)
    powers = np.exp(z[:, None] * np.log(lam)[None, :])  # (T, d)
    stack = np.einsum("ij,tj,kj->tik", vec, powers, vec.conj())
    sandwiched = stack @ a1[None, :, :] @ stack.conj().transpose(0, 2, 1)
    w = rule.weights * beta_density(rule.nodes)
    return np.einsum("t,tij->ij", w, sandwiched)


def power_average_identity_check(a1, a2, rule: QuadratureRule | None = None,
                                 rtol: float = 1e-8, seed=None) -> TrialReport:
    """The average above vs T_{A2^{-1}}(A1), compared in Frobenius norm."""
    a2 = as_posdef(a2)
    avg = conjugated_power_average(a1, a2, rule)
    closed = log_derivative_closed(PosDefMatrix(a2.inverse()), a1).value
    gap = float(np.linalg.norm(avg - closed))
    scale = max(float(np.linalg.norm(closed)), 1e-300)
    return identity_report("power_average_identity", gap, 0.0, atol=0.0,
                           rtol=rtol, scale=scale, seed=seed,
                           params={"dim": a2.dim})
