"""Maximally entangled pairings and the tensor factor layout.

The unnormalized vector Omega_m = sum_L |L> (x) |L> over the product
basis of m local factors turns traces of products into expectation
values: <Omega| X (x) Y^T |Omega> = Tr[X Y]. With row-major (kron)
flattening Omega_m is literally the flattened identity, and the rank-one
pairing operator P_m = |Omega_m><Omega_m| at local dimension d coincides
entrywise with P_{m/2} at local dimension d^2, which is what lets the
doubling construction nest.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .combinatorics import shape_params, slot_sources, thue_morse
from .errors import DimensionCap, DimensionMismatch
from .report import TrialReport, identity_report

DIM_CAP = 512  # total tensor dimension ceiling


def omega_vector(local_dim: int, copies: int) -> np.ndarray:
    """Flattened identity on (C^d)^{(x) m}; squared norm d^m."""
    if local_dim < 2 or copies < 1:
        raise DimensionMismatch(
            f"need local_dim >= 2 and copies >= 1, got ({local_dim}, {copies})"
        )
    return np.eye(local_dim ** copies, dtype=complex).reshape(-1)


@dataclass(frozen=True)
class EntangledState:
    local_dim: int
    copies: int
    vector: np.ndarray


@dataclass(frozen=True)
class EntangledProjector:
    """Rank-one pairing operator, trace d^m, squares to d^m times itself."""

    local_dim: int
    copies: int
    matrix: np.ndarray


def omega(local_dim: int, copies: int) -> EntangledState:
    return EntangledState(local_dim, copies, omega_vector(local_dim, copies))


def projector(local_dim: int, copies: int) -> EntangledProjector:
    v = omega_vector(local_dim, copies)
    return EntangledProjector(local_dim, copies, np.outer(v, v))


def pairing_check(x, y, copies: int = 1, atol: float = 1e-12,
                  seed=None) -> TrialReport:
    """Tr[X Y] against <Omega| X (x) Y^T |Omega>, normalized by the
    Frobenius norms of the operands."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatch(f"operands must be square and congruent, "
                                f"got {x.shape} and {y.shape}")
    dim = x.shape[0]
    local = round(dim ** (1.0 / copies))
    if local ** copies != dim:
        raise DimensionMismatch(
            f"dimension {dim} is not a perfect {copies}-th power")
    om = omega_vector(local, copies)
    lhs = complex(np.trace(x @ y))
    rhs = complex(om.conj() @ np.kron(x, y.T) @ om)
    # both sides may be complex; judge the full complex gap per unit norm
    gap = abs(lhs - rhs)
    scale = max(1.0, float(np.linalg.norm(x) * np.linalg.norm(y)))
    return TrialReport("pairing_identity", "identity", lhs.real, rhs.real,
                       gap, gap / scale, atol, 0.0, gap <= atol * scale,
                       seed=seed, params={"copies": copies, "dim": dim})


@dataclass(frozen=True)
class MidSlot:
    """One middle factor: its slot index, source matrix (None for an
    identity pad), and whether the content enters conjugated."""

    slot: int
    source: int | None
    conjugate: bool


@dataclass(frozen=True)
class FactorLayout:
    """Placement of every factor in the two tensor operands.

    The base operand (argument of the log-derivative) is the Kronecker
    product over ``mid_slots`` in order. The sandwiched operand is
    X_1 (x) conj(X_n) followed by one pairing block per entry of
    ``pair_copies``, the block with m copies spanning 2m consecutive
    factors. The outer expectation pairs the first half of all factors
    with the second half via ``outer_copies`` copies.
    """

    n: int
    local_dim: int
    level_count: int
    factor_count: int
    total_dim: int
    mid_slots: tuple[MidSlot, ...]
    pair_copies: tuple[int, ...]
    outer_copies: int


def build_layout(n: int, local_dim: int, dim_cap: int = DIM_CAP) -> FactorLayout:
    """Factor placement for an n-matrix chain at local dimension d."""
    if local_dim < 2:
        raise DimensionMismatch(f"local dimension must be >= 2, got {local_dim}")
    shape = shape_params(n)
    total = local_dim ** shape.factor_count
    if total > dim_cap:
        raise DimensionCap(
            f"total dimension {local_dim}^{shape.factor_count} = {total} "
            f"exceeds cap {dim_cap}")
    slots = tuple(
        MidSlot(slot=j + 2, source=src,
                conjugate=bool(thue_morse(j + 2)) if src is not None else False)
        for j, src in enumerate(slot_sources(n))
    )
    pair_copies = tuple(2 ** j for j in range(shape.level_count - 1))
    return FactorLayout(
        n=n,
        local_dim=local_dim,
        level_count=shape.level_count,
        factor_count=shape.factor_count,
        total_dim=total,
        mid_slots=slots,
        pair_copies=pair_copies,
        outer_copies=2 ** (shape.level_count - 1),
    )
