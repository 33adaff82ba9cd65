"""Triangular norms and conorms on the unit interval.

An :class:`OperatorPair` bundles a t-norm (graded conjunction, identity 1)
with a t-conorm (graded disjunction, identity 0).  Both are audited on
uniform grids: commutativity, associativity, identity element, and joint
monotonicity, plus a range check and a finite-difference continuity
modulus.  Pointwise continuity itself is not falsifiable from samples; it
is certified indirectly by the modulus check and by the monotone bisection
searches in :func:`find_separation_witnesses` succeeding.

Shipped pairs: ``min-max`` (the only idempotent pair), ``product-probsum``,
and ``lukasiewicz``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .report import AuditReport, ClauseResult

BinaryOp = Callable[[np.ndarray, np.ndarray], np.ndarray]

DEFAULT_AUDIT_TOLERANCE = 1e-12


class NoWitnessError(RuntimeError):
    """Raised when a bisection search exhausts its budget without a witness.

    For operators satisfying the continuity and monotonicity axioms the
    witnesses are guaranteed to exist, so this signals a malformed operator.
    """


def unit_scalar(value: float, name: str = "value") -> float:
    """Validate and return a scalar in [0, 1]."""
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return v


@dataclass
class OperatorPair:
    """A t-norm/t-conorm pair with idempotency metadata.

    The callables must accept numpy arrays (scalar inputs also work);
    audits fall back to elementwise application for callables that do not
    broadcast.
    """

    name: str
    tnorm: BinaryOp
    tconorm: BinaryOp
    idempotent_tnorm: bool = False
    idempotent_tconorm: bool = False

    def __repr__(self) -> str:  # keep reports compact
        return f"OperatorPair({self.name!r})"


def min_max() -> OperatorPair:
    return OperatorPair("min-max", np.minimum, np.maximum, True, True)


def product_probsum() -> OperatorPair:
    def probsum(a, b):
        return a + b - a * b

    return OperatorPair("product-probsum", np.multiply, probsum)


def lukasiewicz() -> OperatorPair:
    def luk_norm(a, b):
        return np.maximum(a + b - 1.0, 0.0)

    def luk_conorm(a, b):
        return np.minimum(a + b, 1.0)

    return OperatorPair("lukasiewicz", luk_norm, luk_conorm)


OPERATOR_FACTORIES: dict[str, Callable[[], OperatorPair]] = {
    "min-max": min_max,
    "product-probsum": product_probsum,
    "lukasiewicz": lukasiewicz,
}


def operator_pair(name: str) -> OperatorPair:
    """Look up a shipped operator pair by name."""
    try:
        return OPERATOR_FACTORIES[name]()
    except KeyError:
        known = ", ".join(sorted(OPERATOR_FACTORIES))
        raise ValueError(f"unknown operator pair {name!r} (known: {known})") from None


def _apply(op: BinaryOp, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Apply ``op`` with broadcasting, falling back to elementwise calls."""
    expected = np.broadcast_shapes(np.shape(a), np.shape(b))
    try:
        out = np.asarray(op(a, b), dtype=float)
        if out.shape == expected:
            return out
    except Exception:
        pass
    return np.vectorize(op, otypes=[float])(a, b)


def _argmax_witness(values: np.ndarray, grids: list[np.ndarray], names: list[str]) -> dict:
    flat = int(np.argmax(values))
    idx = np.unravel_index(flat, values.shape)
    witness = {n: float(g[i]) for n, g, i in zip(names, grids, idx)}
    witness["violation"] = float(values[idx])
    return witness


def _audit_one_operator(
    label: str, op: BinaryOp, identity: float, grid: np.ndarray, tolerance: float
) -> list[ClauseResult]:
    clauses: list[ClauseResult] = []
    a = grid[:, None]
    b = grid[None, :]
    table = _apply(op, a, b)

    # Range: values outside [0, 1] signal a malformed operator, not an
    # axiom failure, but they invalidate everything downstream.
    over = np.maximum(table - 1.0, 0.0)
    under = np.maximum(-table, 0.0)
    range_viol = np.maximum(over, under)
    worst = float(range_viol.max())
    clauses.append(
        ClauseResult(
            clause=f"{label}.range",
            passed=worst <= tolerance,
            worst=worst,
            witness=_argmax_witness(range_viol, [grid, grid], ["a", "b"]),
            note="" if worst <= tolerance else "operator returned a value outside [0, 1]",
        )
    )

    comm = np.abs(table - table.T)
    clauses.append(
        ClauseResult(
            clause=f"{label}.commutativity",
            passed=float(comm.max()) <= tolerance,
            worst=float(comm.max()),
            witness=_argmax_witness(comm, [grid, grid], ["a", "b"]),
        )
    )

    a3 = grid[:, None, None]
    b3 = grid[None, :, None]
    c3 = grid[None, None, :]
    left = _apply(op, _apply(op, a3, b3), c3)
    right = _apply(op, a3, _apply(op, b3, c3))
    assoc = np.abs(left - right)
    clauses.append(
        ClauseResult(
            clause=f"{label}.associativity",
            passed=float(assoc.max()) <= tolerance,
            worst=float(assoc.max()),
            witness=_argmax_witness(assoc, [grid, grid, grid], ["a", "b", "c"]),
        )
    )

    ident = np.abs(_apply(op, grid, np.full_like(grid, identity)) - grid)
    clauses.append(
        ClauseResult(
            clause=f"{label}.identity",
            passed=float(ident.max()) <= tolerance,
            worst=float(ident.max()),
            witness=_argmax_witness(ident, [grid], ["a"]),
        )
    )

    # Monotonicity in both arguments reduces to monotonicity along adjacent
    # grid steps: any a <= c, b <= d decomposes into such steps.
    step_a = table[:-1, :] - table[1:, :]
    step_b = table[:, :-1] - table[:, 1:]
    worst_mono = max(float(step_a.max(initial=0.0)), float(step_b.max(initial=0.0)), 0.0)
    if step_a.size and float(step_a.max()) >= float(step_b.max(initial=-np.inf)):
        wit = _argmax_witness(step_a, [grid, grid], ["a", "b"])
    else:
        wit = _argmax_witness(step_b, [grid, grid], ["a", "b"])
    clauses.append(
        ClauseResult(
            clause=f"{label}.monotonicity",
            passed=worst_mono <= tolerance,
            worst=worst_mono,
            witness=wit,
        )
    )

    # Continuity modulus: jumps between adjacent grid points must stay a
    # small multiple of the grid step.  Catches genuine discontinuities;
    # cannot certify pointwise continuity.
    step = grid[1] - grid[0] if grid.size > 1 else 1.0
    bound = 4.0 * step + tolerance
    jump_a = np.abs(table[1:, :] - table[:-1, :])
    jump_b = np.abs(table[:, 1:] - table[:, :-1])
    worst_jump = max(float(jump_a.max(initial=0.0)), float(jump_b.max(initial=0.0)))
    clauses.append(
        ClauseResult(
            clause=f"{label}.continuity_modulus",
            passed=worst_jump <= bound,
            worst=worst_jump,
            witness={"bound": float(bound)},
            note=f"max adjacent-grid jump vs bound {bound:.3g}",
        )
    )
    return clauses


def audit_operator_pair(
    pair: OperatorPair, grid_size: int, tolerance: float = DEFAULT_AUDIT_TOLERANCE
) -> AuditReport:
    """Audit both operators of ``pair`` on a uniform grid over [0, 1].

    Produces one clause per axiom (commutativity, associativity, identity,
    monotonicity) and per operator, each with the maximum observed
    violation and the grid arguments achieving it, plus range and
    continuity-modulus clauses.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    grid = np.linspace(0.0, 1.0, grid_size)
    clauses = _audit_one_operator("tnorm", pair.tnorm, 1.0, grid, tolerance)
    clauses += _audit_one_operator("tconorm", pair.tconorm, 0.0, grid, tolerance)
    return AuditReport(subject=pair.name, clauses=clauses)


def check_idempotent(
    pair: OperatorPair, grid_size: int = 101, tolerance: float = DEFAULT_AUDIT_TOLERANCE
) -> tuple[bool, bool]:
    """Test a(op)a = a for both operators on a grid; update pair metadata."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    grid = np.linspace(0.0, 1.0, grid_size)
    tnorm_ok = bool(np.abs(_apply(pair.tnorm, grid, grid) - grid).max() <= tolerance)
    tconorm_ok = bool(np.abs(_apply(pair.tconorm, grid, grid) - grid).max() <= tolerance)
    pair.idempotent_tnorm = tnorm_ok
    pair.idempotent_tconorm = tconorm_ok
    return tnorm_ok, tconorm_ok


def idempotency_witness(
    pair: OperatorPair, grid_size: int = 101
) -> tuple[dict | None, dict | None]:
    """Worst idempotency violations (or ``None`` for a clean operator)."""
    grid = np.linspace(0.0, 1.0, grid_size)
    out = []
    for op in (pair.tnorm, pair.tconorm):
        gap = np.abs(_apply(op, grid, grid) - grid)
        i = int(np.argmax(gap))
        out.append(None if gap[i] == 0.0 else {"a": float(grid[i]), "violation": float(gap[i])})
    return out[0], out[1]


@dataclass(frozen=True)
class SeparationWitnesses:
    """Unit-interval scalars witnessing the separation properties.

    Given ``upper > lower`` and a ``level`` in (0, 1):

    - ``tnorm_partner``   combines with ``upper`` to stay above ``lower``;
    - ``tconorm_partner`` combines with ``lower`` to stay below ``upper``;
    - ``tnorm_self``      combined with itself stays at or above ``level``;
    - ``tconorm_self``    combined with itself stays at or below ``level``.
    """

    tnorm_partner: float
    tconorm_partner: float
    tnorm_self: float
    tconorm_self: float


def _bisect_smallest(predicate: Callable[[float], bool], iterations: int) -> float | None:
    """Smallest c in (0, 1) with predicate true, assuming monotone predicate."""
    lo, hi = 0.0, 1.0
    found = False
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
            found = True
        else:
            lo = mid
    if found and predicate(hi):
        return hi
    return None


def _bisect_largest(predicate: Callable[[float], bool], iterations: int) -> float | None:
    """Largest c in (0, 1) with predicate true, assuming monotone predicate."""
    lo, hi = 0.0, 1.0
    found = False
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
            found = True
        else:
            hi = mid
    if found and predicate(lo):
        return lo
    return None


def find_separation_witnesses(
    pair: OperatorPair,
    upper: float,
    lower: float,
    level: float,
    iterations: int = 64,
) -> SeparationWitnesses:
    """Locate the four separation witnesses by monotone bisection.

    Requires ``upper > lower``, all three inputs strictly inside (0, 1).
    Any witness satisfying its defining inequality is acceptable; the
    bisection returns one near the boundary of the witness set.  A search
    that exhausts its budget raises :class:`NoWitnessError`, which for a
    continuous monotone pair cannot happen.
    """
    upper = unit_scalar(upper, "upper")
    lower = unit_scalar(lower, "lower")
    level = unit_scalar(level, "level")
    if not (0.0 < upper < 1.0 and 0.0 < lower < 1.0 and 0.0 < level < 1.0):
        raise ValueError("upper, lower and level must lie strictly inside (0, 1)")
    if upper <= lower:
        raise ValueError(f"need upper > lower, got {upper} <= {lower}")

    tnorm = pair.tnorm
    tconorm = pair.tconorm

    searches = [
        ("tnorm_partner", _bisect_smallest, lambda c: float(tnorm(upper, c)) > lower),
        ("tconorm_partner", _bisect_largest, lambda c: float(tconorm(c, lower)) < upper),
        ("tnorm_self", _bisect_smallest, lambda c: float(tnorm(c, c)) >= level),
        ("tconorm_self", _bisect_largest, lambda c: float(tconorm(c, c)) <= level),
    ]
    found: dict[str, float] = {}
    for name, bisect, predicate in searches:
        witness = bisect(predicate, iterations)
        if witness is None or not 0.0 < witness < 1.0:
            raise NoWitnessError(
                f"no {name} witness found for pair {pair.name!r} within "
                f"{iterations} bisection steps; the operator likely violates "
                "continuity or monotonicity"
            )
        found[name] = witness
    return SeparationWitnesses(**found)
