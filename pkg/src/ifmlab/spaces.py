"""Intuitionistic fuzzy metric spaces: constructors, audits, and probes.

A space assigns every pair of points and every time parameter ``t > 0`` a
degree of nearness ``mu`` and a degree of non-nearness ``nu``, tied to an
idempotent t-norm/t-conorm pair.  Two constructors ship:

- :func:`induced_from_metric` lifts a classical metric ``d`` on a
  coordinate domain via ``mu = t / (t + d)`` and ``nu = 1 - mu``;
- :func:`finite_tabulated` builds desk-scale spaces from per-pair curves
  over ``t``.

The twelve defining clauses plus the monotonicity-in-``t`` facts are not
machine-checkable as stated (they quantify over all points and all
``t > 0``), so :func:`axiom_audit` checks them on seeded samples and a
finite ``t`` grid and reports per-clause worst-case witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .operators import OperatorPair, check_idempotent, idempotency_witness, unit_scalar
from .report import AuditReport, ClauseResult

# Geometric grid spanning two decades; the finite stand-in for "all t > 0".
DEFAULT_PROBE_TS: tuple[float, ...] = tuple(0.1 * 2.0**i for i in range(10))

DEFAULT_AUDIT_BOX_HALFWIDTH = 5.0

BASE_METRICS = ("euclidean", "chebyshev", "absolute-difference")


def time_parameter(t: float, name: str = "t") -> float:
    """Validate and return a strictly positive time parameter."""
    v = float(t)
    if not v > 0.0:
        raise ValueError(f"{name} must be strictly positive, got {t!r}")
    return v


def probe_grid(ts: Iterable[float] | None) -> np.ndarray:
    """Normalize a probe grid: positive, strictly increasing."""
    arr = np.asarray(list(DEFAULT_PROBE_TS if ts is None else ts), dtype=float)
    if arr.size == 0:
        raise ValueError("probe grid must be nonempty")
    if np.any(arr <= 0.0):
        raise ValueError("probe times must be strictly positive")
    if np.any(np.diff(arr) <= 0.0):
        raise ValueError("probe times must be strictly increasing")
    return arr


class MembershipPair(NamedTuple):
    """Degrees of nearness and non-nearness for one evaluation."""

    mu: float
    nu: float


@dataclass(frozen=True)
class CoordinateSpace:
    """Real coordinate domain with a base metric."""

    dimension: int
    base_metric: str = "euclidean"

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if self.base_metric not in BASE_METRICS:
            raise ValueError(
                f"unknown base metric {self.base_metric!r} (known: {', '.join(BASE_METRICS)})"
            )

    def distance(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        delta = np.abs(np.asarray(x, float) - np.asarray(y, float))
        if self.base_metric == "euclidean":
            return np.sqrt(np.sum(delta * delta, axis=-1))
        if self.base_metric == "chebyshev":
            return np.max(delta, axis=-1)
        return np.sum(delta, axis=-1)  # absolute-difference (|x - y| on the line)

    def as_point(self, p: Any) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(p, dtype=float))
        if arr.shape != (self.dimension,):
            raise ValueError(f"expected a point of dimension {self.dimension}, got shape {arr.shape}")
        return arr


@dataclass(frozen=True)
class Curve:
    """Value over ``t``: constant, or linear between breakpoints.

    Extends constantly beyond the first and last breakpoints, which
    preserves monotonicity and continuity by construction.
    """

    ts: tuple[float, ...]
    values: tuple[float, ...]

    @classmethod
    def from_spec(cls, spec: Any) -> "Curve":
        if isinstance(spec, Curve):
            return spec
        if isinstance(spec, (int, float)):
            return cls((1.0,), (float(spec),))
        points = [(time_parameter(t, "breakpoint t"), float(v)) for t, v in spec]
        ts = tuple(t for t, _ in points)
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("curve breakpoints must have strictly increasing t")
        return cls(ts, tuple(v for _, v in points))

    def __call__(self, t):
        return np.interp(t, self.ts, self.values)

    def is_monotone(self, direction: str) -> bool:
        diffs = np.diff(self.values)
        return bool(np.all(diffs >= 0.0) if direction == "nondecreasing" else np.all(diffs <= 0.0))


class FiniteTabulated:
    """Finite point set with tabulated nearness curves per unordered pair.

    ``pairwise`` maps label pairs to ``(mu_curve, nu_curve)``; each curve is
    a constant or a list of ``(t, value)`` breakpoints.  Construction
    rejects missing pairs, out-of-range values, nearness curves that
    decrease in ``t``, and non-nearness curves that increase in ``t``.
    """

    def __init__(self, labels: Sequence[str], pairwise: dict[tuple[str, str], tuple[Any, Any]]):
        labels = list(labels)
        if not labels:
            raise ValueError("at least one label is required")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique")
        self.labels = labels
        self.index = {lab: i for i, lab in enumerate(labels)}

        curves: dict[tuple[int, int], tuple[Curve, Curve]] = {}
        for (a, b), (mu_spec, nu_spec) in pairwise.items():
            if a not in self.index or b not in self.index:
                raise ValueError(f"pair ({a!r}, {b!r}) references an unknown label")
            if a == b:
                raise ValueError(f"pair data for coincident labels ({a!r}, {a!r}) is not allowed")
            key = tuple(sorted((self.index[a], self.index[b])))
            if key in curves:
                raise ValueError(f"duplicate data for pair ({a!r}, {b!r})")
            mu_curve = Curve.from_spec(mu_spec)
            nu_curve = Curve.from_spec(nu_spec)
            if not all(0.0 < v <= 1.0 for v in mu_curve.values):
                raise ValueError(f"nearness values for pair ({a!r}, {b!r}) must lie in (0, 1]")
            if not all(0.0 <= v < 1.0 for v in nu_curve.values):
                raise ValueError(f"non-nearness values for pair ({a!r}, {b!r}) must lie in [0, 1)")
            if not mu_curve.is_monotone("nondecreasing"):
                raise ValueError(f"nearness curve for pair ({a!r}, {b!r}) must be nondecreasing in t")
            if not nu_curve.is_monotone("nonincreasing"):
                raise ValueError(f"non-nearness curve for pair ({a!r}, {b!r}) must be nonincreasing in t")
            curves[key] = (mu_curve, nu_curve)

        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                if (i, j) not in curves:
                    raise ValueError(f"missing curve data for pair ({labels[i]!r}, {labels[j]!r})")
        self.pair_curves = curves

    def as_point(self, p: Any) -> str:
        if p not in self.index:
            raise ValueError(f"unknown label {p!r}")
        return p

    def as_indices(self, points) -> np.ndarray:
        if isinstance(points, str):
            return np.asarray([self.index[points]], dtype=int)
        try:
            return np.asarray([self.index[p] for p in points], dtype=int)
        except KeyError as exc:
            raise ValueError(f"unknown label {exc.args[0]!r}") from None


PointDomain = CoordinateSpace | FiniteTabulated


@dataclass
class IfmSpace:
    """A point domain with nearness/non-nearness evaluators and operators.

    ``membership(x, y, t)`` accepts single points or equal-length batches
    (arrays of shape ``(n, dim)`` for coordinate domains, label sequences
    for tabulated ones) with scalar or matching-shape ``t`` and returns the
    ``(mu, nu)`` arrays.  Spaces are immutable after construction and all
    evaluation is pure.
    """

    domain: PointDomain
    operators: OperatorPair
    membership: Callable[[Any, Any, Any], tuple[np.ndarray, np.ndarray]]
    base_distance: Callable[[Any, Any], np.ndarray] | None = None
    description: str = ""

    def mu_nu(self, x, y, t):
        return self.membership(x, y, t)

    def mu(self, x, y, t):
        return self.membership(x, y, t)[0]

    def nu(self, x, y, t):
        return self.membership(x, y, t)[1]

    def as_point(self, p):
        return self.domain.as_point(p)

    def default_start(self):
        if isinstance(self.domain, CoordinateSpace):
            return np.zeros(self.domain.dimension)
        return self.domain.labels[0]


def points_equal(a, b) -> bool:
    """Exact equality of two domain points (labels or coordinate arrays)."""
    if isinstance(a, str) or isinstance(b, str):
        return a == b
    return bool(np.array_equal(np.asarray(a, float), np.asarray(b, float)))


def point_jsonable(p):
    if isinstance(p, str):
        return p
    return [float(v) for v in np.atleast_1d(np.asarray(p, dtype=float))]


def _require_idempotent(operators: OperatorPair) -> None:
    tnorm_ok, tconorm_ok = check_idempotent(operators)
    if not (tnorm_ok and tconorm_ok):
        wit_t, wit_s = idempotency_witness(operators)
        raise ValueError(
            f"operator pair {operators.name!r} is not idempotent "
            f"(tnorm witness {wit_t}, tconorm witness {wit_s}); "
            "spaces require idempotent operators"
        )


def induced_from_metric(domain: CoordinateSpace, operators: OperatorPair) -> IfmSpace:
    """Space induced by a base metric: ``mu = t/(t+d)``, ``nu = 1 - mu``.

    ``nu`` is computed as the exact floating-point complement of ``mu``,
    so ``mu + nu == 1`` holds bit-exactly (a constructor identity stronger
    than the bounded-sum clause).  Requires idempotent operators.
    """
    if not isinstance(domain, CoordinateSpace):
        raise TypeError("induced_from_metric needs a CoordinateSpace domain")
    _require_idempotent(operators)

    def membership(x, y, t):
        d = domain.distance(np.asarray(x, float), np.asarray(y, float))
        t_arr = np.asarray(t, dtype=float)
        mu = t_arr / (t_arr + d)
        return mu, 1.0 - mu

    return IfmSpace(
        domain=domain,
        operators=operators,
        membership=membership,
        base_distance=domain.distance,
        description=f"induced({domain.base_metric}, dim={domain.dimension})",
    )


def finite_tabulated(domain: FiniteTabulated, operators: OperatorPair) -> IfmSpace:
    """Space evaluating by table lookup and interpolation in ``t``.

    Coincident labels are hard-wired to ``(1, 0)``.  Requires idempotent
    operators; pair coverage and curve monotonicity were already enforced
    when the domain was built.
    """
    if not isinstance(domain, FiniteTabulated):
        raise TypeError("finite_tabulated needs a FiniteTabulated domain")
    _require_idempotent(operators)

    def membership(x, y, t):
        xi = domain.as_indices(x)
        yi = domain.as_indices(y)
        if xi.shape != yi.shape:
            raise ValueError("point batches must have equal length")
        t_arr = np.broadcast_to(np.asarray(t, dtype=float), xi.shape)
        mu = np.ones(xi.shape, dtype=float)
        nu = np.zeros(xi.shape, dtype=float)
        lo = np.minimum(xi, yi)
        hi = np.maximum(xi, yi)
        off_diag = lo != hi
        for key, (mu_curve, nu_curve) in domain.pair_curves.items():
            mask = off_diag & (lo == key[0]) & (hi == key[1])
            if np.any(mask):
                mu[mask] = mu_curve(t_arr[mask])
                nu[mask] = nu_curve(t_arr[mask])
        scalar_in = isinstance(x, str)
        if scalar_in:
            return mu[0], nu[0]
        return mu, nu

    return IfmSpace(
        domain=domain,
        operators=operators,
        membership=membership,
        description=f"tabulated({len(domain.labels)} points)",
    )


def evaluate(space: IfmSpace, x, y, t: float) -> MembershipPair:
    """Evaluate one pair at one time; the shared scalar accessor."""
    t = time_parameter(t)
    px = space.as_point(x)
    py = space.as_point(y)
    mu, nu = space.mu_nu(px, py, t)
    return MembershipPair(float(np.asarray(mu).reshape(())), float(np.asarray(nu).reshape(())))


def membership_grid(space: IfmSpace, xs, ys, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate batches against every probe time; returns ``(n, k)`` arrays."""
    mu_cols = []
    nu_cols = []
    for t in ts:
        mu, nu = space.mu_nu(xs, ys, float(t))
        mu_cols.append(np.atleast_1d(mu))
        nu_cols.append(np.atleast_1d(nu))
    return np.stack(mu_cols, axis=1), np.stack(nu_cols, axis=1)


# ---------------------------------------------------------------------------
# axiom audit


def _sample_audit_points(space, count, rng, box):
    """Three independent point batches from the domain."""
    domain = space.domain
    if isinstance(domain, CoordinateSpace):
        low, high = box
        shape = (count, domain.dimension)
        return tuple(rng.uniform(low, high, shape) for _ in range(3))
    n_labels = len(domain.labels)
    labels = np.asarray(domain.labels, dtype=object)
    return tuple(labels[rng.integers(0, n_labels, count)] for _ in range(3))


def _distinct_mask(space, xs, ys) -> np.ndarray:
    if isinstance(space.domain, CoordinateSpace):
        return ~np.all(np.asarray(xs, float) == np.asarray(ys, float), axis=-1)
    return np.asarray([a != b for a, b in zip(xs, ys)])


def _take(points, idx):
    if isinstance(points, np.ndarray) and points.dtype != object:
        return points[idx]
    return points[idx]


def _grid_witness(space, xs, ys, values, ts, extra=None) -> dict:
    """Witness for the worst entry of a (pairs x times) violation array."""
    flat = int(np.argmax(values))
    i, j = np.unravel_index(flat, values.shape)
    wit = {
        "x": point_jsonable(_take(xs, i)),
        "y": point_jsonable(_take(ys, i)),
        "t": float(ts[j]),
        "violation": float(values[i, j]),
    }
    if extra:
        wit.update(extra)
    return wit


def axiom_audit(
    space: IfmSpace,
    sample_count: int,
    t_samples: Iterable[float] | None = None,
    tolerance: float = 1e-9,
    seed: int = 0,
    box: tuple[float, float] | None = None,
    continuity_bound: float = 0.25,
    continuity_refinement: int = 16,
) -> AuditReport:
    """Audit the defining clauses of a space on seeded samples.

    Checks, per clause: bounded sum ``mu + nu <= 1``; positivity of ``mu``;
    identity of indiscernibles for ``mu`` and ``nu`` on coincident and
    distinct pairs; symmetry; the two time-shifted triangle inequalities
    over sampled triples and ``(s, t)`` grid pairs; continuity in ``t`` by
    a refined finite-difference modulus; operator idempotency; and
    monotonicity of ``mu`` (nondecreasing) and ``nu`` (nonincreasing)
    along the ``t`` grid.  Deterministic for a fixed seed; failures are
    report entries, never exceptions.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    ts = probe_grid(t_samples)
    rng = np.random.default_rng(seed)
    if box is None:
        box = (-DEFAULT_AUDIT_BOX_HALFWIDTH, DEFAULT_AUDIT_BOX_HALFWIDTH)
    xs, ys, zs = _sample_audit_points(space, sample_count, rng, box)

    mu_xy, nu_xy = membership_grid(space, xs, ys, ts)
    mu_yx, nu_yx = membership_grid(space, ys, xs, ts)
    mu_xx, nu_xx = membership_grid(space, xs, xs, ts)

    distinct = _distinct_mask(space, xs, ys)
    clauses: list[ClauseResult] = []

    # bounded sum
    excess = mu_xy + nu_xy - 1.0
    worst = float(excess.max())
    clauses.append(
        ClauseResult(
            "bounded_sum",
            passed=worst <= tolerance,
            worst=max(worst, 0.0),
            witness=_grid_witness(space, xs, ys, excess, ts),
        )
    )

    # mu positivity
    min_mu = float(mu_xy.min())
    clauses.append(
        ClauseResult(
            "mu_positive",
            passed=min_mu > 0.0,
            worst=max(0.0, -min_mu),
            witness=_grid_witness(space, xs, ys, -mu_xy, ts, {"min_mu": min_mu}),
        )
    )

    # identity of indiscernibles, mu side
    diag_gap = np.abs(mu_xx - 1.0)
    worst_diag = float(diag_gap.max())
    if np.any(distinct):
        max_mu_distinct = float(mu_xy[distinct].max())
        distinct_ok = max_mu_distinct < 1.0
        note = ""
    else:
        max_mu_distinct = float("nan")
        distinct_ok = True
        note = "no distinct pairs sampled"
    clauses.append(
        ClauseResult(
            "mu_identity",
            passed=(worst_diag <= tolerance) and distinct_ok,
            worst=worst_diag,
            witness=_grid_witness(
                space, xs, xs, diag_gap, ts, {"max_mu_distinct": max_mu_distinct}
            ),
            note=note,
        )
    )

    # symmetry, mu side
    sym = np.abs(mu_xy - mu_yx)
    clauses.append(
        ClauseResult(
            "mu_symmetry",
            passed=float(sym.max()) <= tolerance,
            worst=float(sym.max()),
            witness=_grid_witness(space, xs, ys, sym, ts),
        )
    )

    # triangle inequalities over (s, t) grid pairs
    mu_yz, nu_yz = membership_grid(space, ys, zs, ts)
    k = len(ts)
    tri_mu_worst = -np.inf
    tri_nu_worst = -np.inf
    tri_mu_wit: dict | None = None
    tri_nu_wit: dict | None = None
    tnorm = space.operators.tnorm
    tconorm = space.operators.tconorm
    for i in range(k):
        for j in range(k):
            mu_xz, nu_xz = space.mu_nu(xs, zs, float(ts[i] + ts[j]))
            lhs_mu = np.asarray(tnorm(mu_xy[:, i], mu_yz[:, j]), dtype=float)
            viol_mu = lhs_mu - np.atleast_1d(mu_xz)
            m = int(np.argmax(viol_mu))
            if float(viol_mu[m]) > tri_mu_worst:
                tri_mu_worst = float(viol_mu[m])
                tri_mu_wit = {
                    "x": point_jsonable(_take(xs, m)),
                    "y": point_jsonable(_take(ys, m)),
                    "z": point_jsonable(_take(zs, m)),
                    "s": float(ts[i]),
                    "t": float(ts[j]),
                    "violation": tri_mu_worst,
                }
            lhs_nu = np.asarray(tconorm(nu_xy[:, i], nu_yz[:, j]), dtype=float)
            viol_nu = np.atleast_1d(nu_xz) - lhs_nu
            m = int(np.argmax(viol_nu))
            if float(viol_nu[m]) > tri_nu_worst:
                tri_nu_worst = float(viol_nu[m])
                tri_nu_wit = {
                    "x": point_jsonable(_take(xs, m)),
                    "y": point_jsonable(_take(ys, m)),
                    "z": point_jsonable(_take(zs, m)),
                    "s": float(ts[i]),
                    "t": float(ts[j]),
                    "violation": tri_nu_worst,
                }
    clauses.append(
        ClauseResult(
            "mu_triangle",
            passed=tri_mu_worst <= tolerance,
            worst=max(tri_mu_worst, 0.0),
            witness=tri_mu_wit,
        )
    )

    # continuity in t (checked for both mu and nu in one sweep)
    worst_mu_jump = 0.0
    worst_nu_jump = 0.0
    for lo_t, hi_t in zip(ts[:-1], ts[1:]):
        sub = np.linspace(lo_t, hi_t, continuity_refinement + 1)
        mu_sub, nu_sub = membership_grid(space, xs, ys, sub)
        worst_mu_jump = max(worst_mu_jump, float(np.abs(np.diff(mu_sub, axis=1)).max()))
        worst_nu_jump = max(worst_nu_jump, float(np.abs(np.diff(nu_sub, axis=1)).max()))
    clauses.append(
        ClauseResult(
            "mu_time_continuity",
            passed=worst_mu_jump <= continuity_bound,
            worst=worst_mu_jump,
            witness={"bound": continuity_bound, "refinement": continuity_refinement},
            note="finite-difference modulus on a refined t grid",
        )
    )

    # nu nonnegative (zero allowed off the diagonal only as a limit; the
    # strict positivity for distinct points is part of nu_identity)
    min_nu = float(nu_xy.min())
    clauses.append(
        ClauseResult(
            "nu_nonnegative",
            passed=min_nu >= 0.0,
            worst=max(0.0, -min_nu),
            witness=_grid_witness(space, xs, ys, -nu_xy, ts, {"min_nu": min_nu}),
        )
    )

    # identity of indiscernibles, nu side
    diag_nu = np.abs(nu_xx)
    worst_diag_nu = float(diag_nu.max())
    if np.any(distinct):
        min_nu_distinct = float(nu_xy[distinct].min())
        distinct_ok = min_nu_distinct > 0.0
        note = ""
    else:
        min_nu_distinct = float("nan")
        distinct_ok = True
        note = "no distinct pairs sampled"
    clauses.append(
        ClauseResult(
            "nu_identity",
            passed=(worst_diag_nu <= tolerance) and distinct_ok,
            worst=worst_diag_nu,
            witness=_grid_witness(
                space, xs, xs, diag_nu, ts, {"min_nu_distinct": min_nu_distinct}
            ),
            note=note,
        )
    )

    # symmetry, nu side
    sym_nu = np.abs(nu_xy - nu_yx)
    clauses.append(
        ClauseResult(
            "nu_symmetry",
            passed=float(sym_nu.max()) <= tolerance,
            worst=float(sym_nu.max()),
            witness=_grid_witness(space, xs, ys, sym_nu, ts),
        )
    )

    clauses.append(
        ClauseResult(
            "nu_triangle",
            passed=tri_nu_worst <= tolerance,
            worst=max(tri_nu_worst, 0.0),
            witness=tri_nu_wit,
        )
    )

    clauses.append(
        ClauseResult(
            "nu_time_continuity",
            passed=worst_nu_jump <= continuity_bound,
            worst=worst_nu_jump,
            witness={"bound": continuity_bound, "refinement": continuity_refinement},
            note="finite-difference modulus on a refined t grid",
        )
    )

    # operator idempotency
    tnorm_ok, tconorm_ok = check_idempotent(space.operators, tolerance=max(tolerance, 1e-12))
    wit_t, wit_s = idempotency_witness(space.operators)
    clauses.append(
        ClauseResult(
            "idempotent_operators",
            passed=tnorm_ok and tconorm_ok,
            worst=0.0 if (tnorm_ok and tconorm_ok) else 1.0,
            witness={"tnorm": wit_t, "tconorm": wit_s, "pair": space.operators.name},
        )
    )

    # monotonicity along the t grid
    mono_mu = mu_xy[:, :-1] - mu_xy[:, 1:]
    worst_mono_mu = float(mono_mu.max(initial=0.0))
    clauses.append(
        ClauseResult(
            "mu_nondecreasing_t",
            passed=worst_mono_mu <= tolerance,
            worst=max(worst_mono_mu, 0.0),
            witness=_grid_witness(space, xs, ys, mono_mu, ts[:-1]) if mono_mu.size else None,
        )
    )
    mono_nu = nu_xy[:, 1:] - nu_xy[:, :-1]
    worst_mono_nu = float(mono_nu.max(initial=0.0))
    clauses.append(
        ClauseResult(
            "nu_nonincreasing_t",
            passed=worst_mono_nu <= tolerance,
            worst=max(worst_mono_nu, 0.0),
            witness=_grid_witness(space, xs, ys, mono_nu, ts[:-1]) if mono_nu.size else None,
        )
    )

    return AuditReport(subject=space.description or "space", clauses=clauses)


# ---------------------------------------------------------------------------
# probes and predicates


@dataclass
class AsymptoticReport:
    """Finite-horizon proxy for nearness approaching certainty as t grows."""

    t_horizon: float
    epsilon: float
    entries: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e["ok"] for e in self.entries)


def asymptotic_nearness_probe(
    space: IfmSpace, pairs: Sequence[tuple[Any, Any]], t_horizon: float, epsilon: float
) -> AsymptoticReport:
    """Check ``mu >= 1 - epsilon`` and ``nu <= epsilon`` at a large horizon.

    The horizon should be large relative to the scale of the pairs; this is
    a finite-horizon stand-in for the limit as ``t`` grows without bound.
    """
    t_horizon = time_parameter(t_horizon, "t_horizon")
    epsilon = unit_scalar(epsilon, "epsilon")
    report = AsymptoticReport(t_horizon=t_horizon, epsilon=epsilon)
    for x, y in pairs:
        mu, nu = evaluate(space, x, y, t_horizon)
        report.entries.append(
            {
                "x": point_jsonable(x),
                "y": point_jsonable(y),
                "mu": mu,
                "nu": nu,
                "ok": bool(mu >= 1.0 - epsilon and nu <= epsilon),
            }
        )
    return report


@dataclass(frozen=True)
class BallSpec:
    """Center, radius in (0, 1), and time parameter of a nearness ball."""

    center: Any
    radius: float
    time: float

    def __post_init__(self) -> None:
        if not 0.0 < float(self.radius) < 1.0:
            raise ValueError(f"radius must lie strictly inside (0, 1), got {self.radius!r}")
        time_parameter(self.time, "time")


def ball_contains(space: IfmSpace, ball: BallSpec, y, mode: str = "open") -> bool:
    """Ball membership: strict inequalities in open mode, closed otherwise.

    Open mode mirrors the defining strict bounds; closed mode is its
    closure and is what limit points of in-ball sequences satisfy.
    """
    if mode not in ("open", "closed"):
        raise ValueError(f"mode must be 'open' or 'closed', got {mode!r}")
    mu, nu = evaluate(space, ball.center, y, ball.time)
    r = float(ball.radius)
    if mode == "open":
        return mu > 1.0 - r and nu < r
    return mu >= 1.0 - r and nu <= r


# ---------------------------------------------------------------------------
# sequence diagnostics


def _normalize_prefix(space: IfmSpace, prefix) -> list:
    pts = [space.as_point(p) for p in prefix]
    if not pts:
        raise ValueError("sequence prefix must be nonempty")
    return pts


def _prefix_batch(space: IfmSpace, pts: list):
    if isinstance(space.domain, CoordinateSpace):
        return np.asarray(pts, dtype=float)
    return np.asarray(pts, dtype=object)


@dataclass
class SequenceReport:
    """Windowed Cauchy/convergence verdicts for a finite sequence prefix."""

    cauchy: bool
    cauchy_from: int | None
    convergent: bool | None
    convergent_from: int | None
    epsilon: float
    window: int
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        conv_ok = True if self.convergent is None else self.convergent
        return self.cauchy and conv_ok


def sequence_diagnostics(
    space: IfmSpace,
    prefix,
    probe_ts: Iterable[float] | None = None,
    epsilon: float = 1e-2,
    window: int = 8,
    candidate_limit=None,
) -> SequenceReport:
    """Windowed Cauchy test and optional convergence test for a prefix.

    Cauchy verdict: the earliest index ``n0`` such that every pair of
    later entries at most ``window`` apart has ``mu > 1 - epsilon`` and
    ``nu < epsilon`` at every probe time, with at least one full window
    after ``n0``.  Convergence is the same tail test against the candidate
    limit.  Reports the earliest admissible start or the failing witness.
    """
    epsilon = unit_scalar(epsilon, "epsilon")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie strictly inside (0, 1)")
    if window < 1:
        raise ValueError("window must be at least 1")
    pts = _normalize_prefix(space, prefix)
    length = len(pts)
    if length <= window:
        raise ValueError(f"prefix length {length} must exceed the window {window}")
    ts = probe_grid(probe_ts)
    batch = _prefix_batch(space, pts)

    last_fail = -1
    witness: dict | None = None
    for p in range(1, window + 1):
        mu, nu = membership_grid(space, batch[:-p], batch[p:], ts)
        ok = np.all((mu > 1.0 - epsilon) & (nu < epsilon), axis=1)
        fails = np.nonzero(~ok)[0]
        if fails.size:
            i = int(fails[-1])
            if i > last_fail:
                last_fail = i
                margin = np.minimum(mu[i] - (1.0 - epsilon), epsilon - nu[i])
                bad_t = int(np.argmin(margin))
                witness = {
                    "n": i,
                    "m": i + p,
                    "t": float(ts[bad_t]),
                    "mu": float(mu[i, bad_t]),
                    "nu": float(nu[i, bad_t]),
                }
    n0 = last_fail + 1
    cauchy = n0 + window <= length - 1

    convergent = None
    conv_from = None
    if candidate_limit is not None:
        limit = space.as_point(candidate_limit)
        limit_batch = _prefix_batch(space, [limit] * length)
        mu, nu = membership_grid(space, batch, limit_batch, ts)
        ok = np.all((mu > 1.0 - epsilon) & (nu < epsilon), axis=1)
        fails = np.nonzero(~ok)[0]
        m0 = int(fails[-1]) + 1 if fails.size else 0
        convergent = m0 <= length - 1
        conv_from = m0 if convergent else None

    return SequenceReport(
        cauchy=cauchy,
        cauchy_from=n0 if cauchy else None,
        convergent=convergent,
        convergent_from=conv_from,
        epsilon=epsilon,
        window=window,
        witness=witness if not cauchy or convergent is False else None,
    )


@dataclass
class JointContinuityReport:
    """Tail deviation of pairwise nearness along two convergent sequences."""

    mu_tail: float
    nu_tail: float
    mu_limit: float
    nu_limit: float
    tolerance: float
    passed: bool

    @property
    def mu_delta(self) -> float:
        return abs(self.mu_tail - self.mu_limit)

    @property
    def nu_delta(self) -> float:
        return abs(self.nu_tail - self.nu_limit)


def joint_continuity_probe(
    space: IfmSpace,
    xs,
    x_limit,
    ys,
    y_limit,
    t: float,
    tolerance: float,
    seq_epsilon: float = 1e-2,
    probe_ts: Iterable[float] | None = None,
    window: int = 4,
) -> JointContinuityReport:
    """Compare tail values of ``mu(x_n, y_n, t)`` against the limit pair.

    Both prefixes are first verified convergent to their stated limits
    (raises ``ValueError`` otherwise); the probe then passes iff the tail
    deviations of ``mu`` and ``nu`` are within ``tolerance``.
    """
    t = time_parameter(t)
    for seq, limit, name in ((xs, x_limit, "xs"), (ys, y_limit, "ys")):
        diag = sequence_diagnostics(
            space, seq, probe_ts=probe_ts, epsilon=seq_epsilon, window=window, candidate_limit=limit
        )
        if not diag.convergent:
            raise ValueError(f"sequence {name} is not convergent to its stated limit: {diag.witness}")
    mu_tail, nu_tail = evaluate(space, xs[-1], ys[-1], t)
    mu_lim, nu_lim = evaluate(space, x_limit, y_limit, t)
    passed = abs(mu_tail - mu_lim) <= tolerance and abs(nu_tail - nu_lim) <= tolerance
    return JointContinuityReport(
        mu_tail=mu_tail,
        nu_tail=nu_tail,
        mu_limit=mu_lim,
        nu_limit=nu_lim,
        tolerance=tolerance,
        passed=passed,
    )


@dataclass
class ClosednessReport:
    """Whether limits of in-set convergent sequences stay in the set."""

    passed: bool
    escapes: list[dict] = field(default_factory=list)
    checked: int = 0


def closedness_probe(
    space: IfmSpace,
    member_predicate: Callable[[Any], bool],
    test_sequences: Sequence[tuple[Sequence[Any], Any]],
    epsilon: float = 1e-6,
    probe_ts: Iterable[float] | None = None,
    window: int = 4,
) -> ClosednessReport:
    """Test sequential closedness of a point set given by a predicate.

    Every listed ``(prefix, limit)`` must have its prefix inside the set
    and be convergent to the stated limit (otherwise the input is
    rejected).  The probe passes iff every limit satisfies the predicate;
    escaping sequences are reported with their index.
    """
    escapes: list[dict] = []
    for idx, (prefix, limit) in enumerate(test_sequences):
        pts = _normalize_prefix(space, prefix)
        outside = [i for i, p in enumerate(pts) if not member_predicate(p)]
        if outside:
            raise ValueError(
                f"sequence {idx} leaves the candidate set at position {outside[0]}; "
                "closedness only constrains sequences inside the set"
            )
        diag = sequence_diagnostics(
            space, pts, probe_ts=probe_ts, epsilon=epsilon, window=window, candidate_limit=limit
        )
        if not diag.convergent:
            raise ValueError(f"sequence {idx} is not convergent to its stated limit: {diag.witness}")
        if not member_predicate(space.as_point(limit)):
            escapes.append({"sequence": idx, "limit": point_jsonable(limit)})
    return ClosednessReport(passed=not escapes, escapes=escapes, checked=len(test_sequences))
