"""Contraction notions for self-maps of a space, checked on samples.

Two inequality families are supported.  The reciprocal-gap notion bounds
``1/mu - 1`` of image pairs by ``k`` times the same gap of the original
pair (and the mirrored ``nu`` inequality with ``1/k``); on induced spaces
it coincides exactly with classical Lipschitz contraction of the base
metric.  The direct-ratio notion bounds ``mu(x,y,t) / mu(Tx,Ty,t)`` by
``k`` directly; note that it is unsatisfiable once coincident pairs are
included (``k * 1 >= 1`` fails for every ``k < 1``) and, on spaces where
nearness tends to certainty for large ``t``, the ratio supremum tends to 1
so no admissible constant exists either.  The checkers report these
findings honestly instead of repairing the definitions.

All checks are sampled: verdicts hold over a seeded pair stream and a
finite probe grid, never globally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from .report import ClauseResult
from .sampling import sample_pairs
from .spaces import (
    CoordinateSpace,
    FiniteTabulated,
    IfmSpace,
    membership_grid,
    point_jsonable,
    points_equal,
    probe_grid,
    time_parameter,
)

# Reported constants carry this safety margin above the observed supremum,
# and sequence comparisons allow the same relative slack.
K_SAFETY_MARGIN = 1e-9

# A sampled ratio supremum this close to 1 is treated as "no constant
# bounded away from 1": the strict existential cannot be met.
UNIT_RESOLUTION = 1e-3


class DomainEscapeError(RuntimeError):
    """A self-map produced a point outside its space's domain."""

    def __init__(self, message: str, point=None, index: int | None = None):
        super().__init__(message)
        self.point = point
        self.index = index


class SelfMap:
    """A self-map of a space's point domain.

    Wraps an evaluator together with a serializable descriptor (used by
    the CLI to reconstruct maps from result documents).  Coordinate-domain
    evaluators should accept both single points ``(dim,)`` and batches
    ``(n, dim)``; non-broadcasting callables are applied row by row.
    """

    def __init__(self, fn: Callable, label: str = "custom", spec: dict | None = None):
        self.fn = fn
        self.label = label
        self.spec = spec

    def __call__(self, x):
        return self.fn(x)

    def __repr__(self) -> str:
        return f"SelfMap({self.label})"

    @classmethod
    def affine(cls, matrix, offset) -> "SelfMap":
        a = np.atleast_2d(np.asarray(matrix, dtype=float))
        b = np.atleast_1d(np.asarray(offset, dtype=float))
        if a.shape[0] != a.shape[1] or a.shape[0] != b.shape[0]:
            raise ValueError(f"incompatible affine shapes: matrix {a.shape}, offset {b.shape}")

        def fn(x):
            return np.asarray(x, dtype=float) @ a.T + b

        return cls(fn, label=f"affine(dim={b.shape[0]})",
                   spec={"affine": {"matrix": a.tolist(), "offset": b.tolist()}})

    @classmethod
    def table(cls, mapping: dict[str, str]) -> "SelfMap":
        table = dict(mapping)

        def fn(x):
            if isinstance(x, str):
                if x not in table:
                    raise DomainEscapeError(f"label {x!r} has no image in the table map", point=x)
                return table[x]
            return np.asarray([fn(p) for p in x], dtype=object)

        return cls(fn, label=f"table({len(table)} labels)", spec={"table": table})

    @classmethod
    def constant(cls, value) -> "SelfMap":
        if isinstance(value, str):
            def fn(x):
                if isinstance(x, str):
                    return value
                return np.asarray([value] * len(x), dtype=object)
        else:
            target = np.atleast_1d(np.asarray(value, dtype=float))

            def fn(x):
                arr = np.asarray(x, dtype=float)
                if arr.ndim <= 1:
                    return target.copy()
                return np.broadcast_to(target, arr.shape).copy()

        return cls(fn, label="constant", spec={"constant": point_jsonable(value)})

    @classmethod
    def identity(cls) -> "SelfMap":
        return cls(lambda x: x, label="identity", spec={"builtin": "identity"})

    def power(self, m: int) -> "SelfMap":
        """The m-fold composition of this map with itself."""
        if m < 1:
            raise ValueError("power exponent must be at least 1")
        if m == 1:
            return self

        def fn(x):
            for _ in range(m):
                x = self.fn(x)
            return x

        spec = {"power": {"of": self.spec, "m": m}} if self.spec is not None else None
        return SelfMap(fn, label=f"{self.label}^{m}", spec=spec)

    @classmethod
    def compose(cls, outer: "SelfMap", inner: "SelfMap") -> "SelfMap":
        spec = None
        if outer.spec is not None and inner.spec is not None:
            spec = {"compose": {"outer": outer.spec, "inner": inner.spec}}
        return cls(lambda x: outer.fn(inner.fn(x)), label=f"{outer.label}*{inner.label}", spec=spec)


BUILTIN_MAPS: dict[str, Callable[[], SelfMap]] = {
    "identity": SelfMap.identity,
}


def self_map_from_spec(spec: dict) -> SelfMap:
    """Rebuild a map from its serializable descriptor."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ValueError(f"map descriptor must have exactly one kind, got {spec!r}")
    kind, payload = next(iter(spec.items()))
    if kind == "affine":
        return SelfMap.affine(payload["matrix"], payload["offset"])
    if kind == "table":
        return SelfMap.table(payload)
    if kind == "constant":
        return SelfMap.constant(payload)
    if kind == "builtin":
        if payload not in BUILTIN_MAPS:
            raise ValueError(f"unknown builtin map {payload!r}")
        return BUILTIN_MAPS[payload]()
    if kind == "power":
        return self_map_from_spec(payload["of"]).power(int(payload["m"]))
    if kind == "compose":
        return SelfMap.compose(self_map_from_spec(payload["outer"]), self_map_from_spec(payload["inner"]))
    raise ValueError(f"unknown map kind {kind!r}")


def apply_point(space: IfmSpace, map_: SelfMap, p):
    """Apply a map to one point, validating the image stays in the domain."""
    p = space.as_point(p)
    image = map_(p)
    if isinstance(space.domain, FiniteTabulated):
        if image not in space.domain.index:
            raise DomainEscapeError(f"image {image!r} is not a domain label", point=image)
        return image
    arr = np.atleast_1d(np.asarray(image, dtype=float))
    if arr.shape != (space.domain.dimension,):
        raise DomainEscapeError(f"image has shape {arr.shape}, expected ({space.domain.dimension},)",
                                point=image)
    if not np.all(np.isfinite(arr)):
        raise DomainEscapeError(f"image {arr.tolist()} left the coordinate domain", point=arr)
    return arr


def apply_batch(space: IfmSpace, map_: SelfMap, pts):
    """Apply a map to a point batch; row-by-row fallback for scalar maps."""
    if isinstance(space.domain, FiniteTabulated):
        return np.asarray([apply_point(space, map_, p) for p in pts], dtype=object)
    arr = np.asarray(pts, dtype=float)
    try:
        out = np.asarray(map_(arr), dtype=float)
    except Exception:
        out = None
    if out is None or out.shape != arr.shape:
        out = np.stack([apply_point(space, map_, row) for row in arr])
    bad = ~np.all(np.isfinite(out), axis=-1)
    if np.any(bad):
        i = int(np.nonzero(bad)[0][0])
        raise DomainEscapeError(
            f"map left the domain at sample {i}: {out[i].tolist()}", point=out[i], index=i
        )
    return out


@dataclass
class ContractivityReport:
    """Outcome of one sampled contraction check.

    ``estimated_k`` is the observed ratio supremum plus a small safety
    margin and is present only on pass; ``worst_witness`` is present on
    fail.  ``details`` carries check-specific numbers (observed supremum,
    skip counts, inequality sides, witness tables).
    """

    notion: str
    verdict: str  # "pass" | "fail" | "vacuous"
    estimated_k: float | None = None
    worst_witness: dict | None = None
    samples_used: int = 0
    notes: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "clause": self.notion,
            "verdict": self.verdict,
            "estimated_k": self.estimated_k,
            "witness": self.worst_witness,
            "samples_used": self.samples_used,
        }
        if self.notes:
            rec["note"] = self.notes
        if self.details:
            rec["details"] = self.details
        return rec

    def as_clause(self) -> ClauseResult:
        return ClauseResult(
            clause=self.notion,
            passed=self.passed,
            worst=float(self.details.get("sup_ratio", 0.0) or 0.0),
            witness=self.worst_witness,
            note=self.notes,
        )


def _ratio_argmax(ratios: np.ndarray) -> tuple[int, int]:
    flat = int(np.argmax(ratios))
    return np.unravel_index(flat, ratios.shape)  # type: ignore[return-value]


def if_contractive_check(
    space: IfmSpace,
    map_: SelfMap,
    sample_pairs_count: int,
    probe_ts: Iterable[float] | None = None,
    seed: int = 0,
    box: tuple[Any, Any] | None = None,
    pairs: tuple[Any, Any] | None = None,
) -> ContractivityReport:
    """Sampled check of the reciprocal-gap contraction inequalities.

    For each sampled distinct pair and probe time the minimal admissible
    constant is the larger of the gap ratio
    ``(1/mu(Tx,Ty,t) - 1) / (1/mu(x,y,t) - 1)`` and the mirrored ``nu``
    ratio; the reported constant is the supremum over all samples plus a
    1e-9 safety margin, and the verdict is pass iff it stays below 1.
    Coincident images contribute ratio 0 on the ``mu`` side and are
    skipped on the ``nu`` side (their infinite gap satisfies the
    inequality in the limit).

    ``pairs`` overrides the seeded sampler with an explicit pair batch.
    """
    ts = probe_grid(probe_ts)
    if pairs is None:
        xs, ys = sample_pairs(space, sample_pairs_count, seed, box)
    else:
        xs, ys = pairs
    fxs = apply_batch(space, map_, xs)
    fys = apply_batch(space, map_, ys)

    mu1, nu1 = membership_grid(space, xs, ys, ts)
    mu2, nu2 = membership_grid(space, fxs, fys, ts)

    with np.errstate(divide="ignore", invalid="ignore"):
        gap1 = 1.0 / mu1 - 1.0
        gap2 = 1.0 / mu2 - 1.0
        mu_ratio = np.where(gap2 == 0.0, 0.0, gap2 / gap1)
        co_gap1 = np.where(nu1 == 0.0, np.inf, 1.0 / nu1 - 1.0)
        co_gap2 = np.where(nu2 == 0.0, np.inf, 1.0 / nu2 - 1.0)
        nu_skip = np.isinf(co_gap2)
        nu_ratio = np.where(nu_skip, 0.0, co_gap1 / co_gap2)

    degenerate = gap1 <= 0.0  # coincident or mu==1 originals; sampler avoids these
    mu_ratio = np.where(degenerate, 0.0, mu_ratio)
    nu_ratio = np.where(degenerate, 0.0, nu_ratio)

    sup_mu = float(mu_ratio.max()) if mu_ratio.size else 0.0
    sup_nu = float(nu_ratio.max()) if nu_ratio.size else 0.0
    sup = max(sup_mu, sup_nu)
    estimated = sup + K_SAFETY_MARGIN

    if sup_mu >= sup_nu:
        i, j = _ratio_argmax(mu_ratio)
        side, lhs, rhs_gap = "mu", float(gap2[i, j]), float(gap1[i, j])
    else:
        i, j = _ratio_argmax(nu_ratio)
        side, lhs, rhs_gap = "nu", float(co_gap1[i, j]), float(co_gap2[i, j])
    witness = {
        "x": point_jsonable(xs[i]),
        "y": point_jsonable(ys[i]),
        "t": float(ts[j]),
        "side": side,
        "lhs": lhs,
        "rhs_gap": rhs_gap,
        "ratio": float(max(sup_mu, sup_nu)),
    }

    skipped = int(np.count_nonzero(nu_skip & ~degenerate))
    notes = ""
    if skipped:
        notes = f"{skipped} nu-side samples with coincident images satisfy the inequality in the limit and were skipped"
    passed = estimated < 1.0
    return ContractivityReport(
        notion="if_contractive",
        verdict="pass" if passed else "fail",
        estimated_k=estimated if passed else None,
        worst_witness=None if passed else witness,
        samples_used=int(np.shape(mu1)[0]),
        notes=notes,
        details={"sup_ratio": sup, "sup_mu_ratio": sup_mu, "sup_nu_ratio": sup_nu,
                 "nu_skipped": skipped, "witness": witness},
    )


def direct_ratio_contractive_check(
    space: IfmSpace,
    map_: SelfMap,
    sample_pairs_count: int,
    probe_ts: Iterable[float] | None = None,
    include_coincident: bool = False,
    seed: int = 0,
    box: tuple[Any, Any] | None = None,
    unit_margin: float = UNIT_RESOLUTION,
) -> ContractivityReport:
    """Sampled check of the direct membership-ratio contraction.

    The notion requires ``k * mu(Tx,Ty,t) >= mu(x,y,t)`` and
    ``nu(Tx,Ty,t) <= k * nu(x,y,t)`` for a single ``k`` in (0, 1).  With
    coincident pairs included the requirement collapses to ``k >= 1`` and
    the report is a vacuous fail.  Over distinct pairs the verdict is pass
    iff the ratio supremum stays below ``1 - unit_margin``: a sampled
    supremum within the margin of 1 means no constant bounded away from 1
    exists on the probe grid (typical for large-``t`` probes on spaces
    whose nearness tends to certainty).
    """
    if include_coincident:
        return ContractivityReport(
            notion="direct_ratio_contractive",
            verdict="vacuous",
            samples_used=0,
            notes=(
                "with coincident pairs the requirement reads k*mu(Tx,Tx,t) = k < 1 = mu(x,x,t) "
                "for every k in (0, 1); no map on any space can satisfy it"
            ),
        )
    ts = probe_grid(probe_ts)
    xs, ys = sample_pairs(space, sample_pairs_count, seed, box)
    fxs = apply_batch(space, map_, xs)
    fys = apply_batch(space, map_, ys)
    mu1, nu1 = membership_grid(space, xs, ys, ts)
    mu2, nu2 = membership_grid(space, fxs, fys, ts)

    with np.errstate(divide="ignore", invalid="ignore"):
        mu_ratio = np.where(mu2 == 0.0, np.inf, mu1 / mu2)
        nu_ratio = np.where(nu2 == 0.0, 0.0, nu2 / nu1)

    sup_mu = float(mu_ratio.max())
    sup_nu = float(nu_ratio.max())
    sup = max(sup_mu, sup_nu)
    estimated = sup + K_SAFETY_MARGIN

    if sup_mu >= sup_nu:
        i, j = _ratio_argmax(mu_ratio)
        side, lhs, rhs = "mu", float(mu1[i, j]), float(mu2[i, j])
    else:
        i, j = _ratio_argmax(nu_ratio)
        side, lhs, rhs = "nu", float(nu2[i, j]), float(nu1[i, j])
    witness = {
        "x": point_jsonable(xs[i]),
        "y": point_jsonable(ys[i]),
        "t": float(ts[j]),
        "side": side,
        "numerator": lhs,
        "denominator": rhs,
        "ratio": sup,
    }

    passed = estimated <= 1.0 - unit_margin
    notes = ""
    if not passed and sup <= 1.0:
        notes = (
            f"ratio supremum {sup:.9f} lies within {unit_margin:g} of 1 on the probe grid; "
            "no contraction constant bounded away from 1 is admissible"
        )
    return ContractivityReport(
        notion="direct_ratio_contractive",
        verdict="pass" if passed else "fail",
        estimated_k=estimated if passed else None,
        worst_witness=None if passed else witness,
        samples_used=int(np.shape(mu1)[0]),
        notes=notes,
        details={"sup_ratio": sup, "sup_mu_ratio": sup_mu, "sup_nu_ratio": sup_nu,
                 "unit_margin": unit_margin, "witness": witness},
    )


def t_uniform_continuity_probe(
    space: IfmSpace,
    map_: SelfMap,
    epsilons: Iterable[float],
    sample_pairs_count: int,
    probe_ts: Iterable[float] | None = None,
    seed: int = 0,
    box: tuple[Any, Any] | None = None,
) -> ContractivityReport:
    """Search nearness thresholds certifying t-uniform continuity.

    For each target ``epsilon`` a descending grid of thresholds ``r`` is
    scanned for one where every sampled pair already ``r``-near at some
    probe time maps to an ``epsilon``-near image pair at that time.  The
    probe passes iff a threshold is found for every ``epsilon``; the
    ``(epsilon, r)`` table, with the number of qualifying samples, is
    recorded in the details.
    """
    ts = probe_grid(probe_ts)
    eps_list = [float(e) for e in epsilons]
    if not eps_list or any(not 0.0 < e < 1.0 for e in eps_list):
        raise ValueError("epsilons must be a nonempty collection inside (0, 1)")
    xs, ys = sample_pairs(space, sample_pairs_count, seed, box)
    fxs = apply_batch(space, map_, xs)
    fys = apply_batch(space, map_, ys)
    mu1, nu1 = membership_grid(space, xs, ys, ts)
    mu2, nu2 = membership_grid(space, fxs, fys, ts)

    table: list[dict] = []
    witness: dict | None = None
    all_found = True
    for eps in eps_list:
        image_ok = (mu2 >= 1.0 - eps) & (nu2 <= eps)
        found_r = None
        qualifying = 0
        candidates = [eps * 2.0**j for j in range(4, -25, -1) if eps * 2.0**j < 1.0]
        for r in candidates:
            qualify = (mu1 >= 1.0 - r) & (nu1 <= r)
            if np.all(image_ok[qualify]):
                found_r = r
                qualifying = int(np.count_nonzero(qualify))
                break
        if found_r is None:
            all_found = False
            qualify = (mu1 >= 1.0 - candidates[-1]) & (nu1 <= candidates[-1])
            bad = qualify & ~image_ok
            if np.any(bad):
                i, j = _ratio_argmax(bad.astype(float))
                witness = {
                    "epsilon": eps,
                    "x": point_jsonable(xs[i]),
                    "y": point_jsonable(ys[i]),
                    "t": float(ts[j]),
                    "mu_image": float(mu2[i, j]),
                    "nu_image": float(nu2[i, j]),
                }
        table.append({"epsilon": eps, "r": found_r, "qualifying_samples": qualifying})

    return ContractivityReport(
        notion="t_uniform_continuity",
        verdict="pass" if all_found else "fail",
        worst_witness=None if all_found else witness,
        samples_used=int(np.shape(mu1)[0]),
        details={"table": table},
    )


def contractive_sequence_check(
    space: IfmSpace,
    prefix,
    k: float,
    probe_ts: Iterable[float] | None = None,
) -> ContractivityReport:
    """Verify the per-step gap decay of a sequence for a given constant.

    For every consecutive triple and probe time the reciprocal nearness
    gap of the later step must be at most ``k`` times the earlier one and
    the mirrored ``nu`` inequality must hold with ``1/k``.  Comparisons
    carry a 1e-9 relative allowance matching the constant-estimation
    margin plus a first-order floating-point allowance: the gaps are
    reciprocals of values near 0 or 1, so their absolute rounding error
    grows like ``eps * (1 + gap)**2`` and a fixed relative slack would
    reject exact-ratio sequences once the iterates are nearly coincident.
    A coincident consecutive pair fixes the tail exactly and is treated
    as a pass from that index.  Reports the first violation.
    """
    if not 0.0 < float(k) < 1.0:
        raise ValueError(f"k must lie strictly inside (0, 1), got {k!r}")
    k = float(k)
    pts = [space.as_point(p) for p in prefix]
    if len(pts) < 3:
        raise ValueError("prefix must contain at least 3 points")
    ts = probe_grid(probe_ts)

    fixed_from: int | None = None
    for n in range(len(pts) - 1):
        if points_equal(pts[n], pts[n + 1]):
            fixed_from = n
            break

    slack = 1.0 + K_SAFETY_MARGIN
    eps_fp = 4.0 * np.finfo(float).eps
    checked = 0
    for n in range(len(pts) - 2):
        if fixed_from is not None and n >= fixed_from:
            break
        mu_a, nu_a = membership_grid(space, [pts[n]], [pts[n + 1]], ts)
        mu_b, nu_b = membership_grid(space, [pts[n + 1]], [pts[n + 2]], ts)
        gap_a = 1.0 / mu_a[0] - 1.0
        gap_b = 1.0 / mu_b[0] - 1.0
        mu_allow = eps_fp * ((1.0 + gap_b) ** 2 + k * (1.0 + gap_a) ** 2)
        mu_bad = gap_b > k * gap_a * slack + mu_allow
        with np.errstate(divide="ignore"):
            co_a = np.where(nu_a[0] == 0.0, np.inf, 1.0 / nu_a[0] - 1.0)
            co_b = np.where(nu_b[0] == 0.0, np.inf, 1.0 / nu_b[0] - 1.0)
        with np.errstate(invalid="ignore"):
            nu_allow = eps_fp * ((1.0 + co_b) ** 2 + (1.0 + co_a) ** 2 / k)
            nu_bad = co_b < (co_a / k) / slack - nu_allow
        checked += 1
        if np.any(mu_bad) or np.any(nu_bad):
            j = int(np.argmax(mu_bad)) if np.any(mu_bad) else int(np.argmax(nu_bad))
            side = "mu" if np.any(mu_bad) else "nu"
            lhs = float(gap_b[j]) if side == "mu" else float(co_b[j])
            bound = float(k * gap_a[j]) if side == "mu" else float(co_a[j] / k)
            return ContractivityReport(
                notion="contractive_sequence",
                verdict="fail",
                worst_witness={"n": n, "t": float(ts[j]), "side": side, "lhs": lhs, "bound": bound},
                samples_used=checked,
                details={"k": k},
            )
    notes = ""
    if fixed_from is not None:
        notes = f"sequence is exactly fixed from index {fixed_from}; remaining steps pass trivially"
    return ContractivityReport(
        notion="contractive_sequence",
        verdict="pass",
        estimated_k=k,
        samples_used=checked,
        notes=notes,
        details={"k": k},
    )


def closed_ball_hypotheses(
    space: IfmSpace,
    map_: SelfMap,
    x0,
    r: float,
    t: float,
    k: float,
) -> ContractivityReport:
    """Evaluate the strict first-step bounds for contraction on a ball.

    Checks ``1/mu(x0, Tx0, t) - 1 < (1 - k) * (1/(1 - r) - 1)`` and
    ``1/nu(x0, Tx0, t) - 1 > (1/(1 - k)) * (1/r - 1)`` and reports the
    numeric sides.  A center already fixed by the map passes degenerately
    (zero gap on the ``mu`` side, unbounded gap on the ``nu`` side).  The
    constant ``k`` should come from a passing contraction check restricted
    to the ball.
    """
    if not 0.0 < float(r) < 1.0:
        raise ValueError(f"r must lie strictly inside (0, 1), got {r!r}")
    if not 0.0 < float(k) < 1.0:
        raise ValueError(f"k must lie strictly inside (0, 1), got {k!r}")
    t = time_parameter(t)
    r, k = float(r), float(k)
    x0p = space.as_point(x0)
    tx0 = apply_point(space, map_, x0p)

    mu_rhs = (1.0 - k) * (1.0 / (1.0 - r) - 1.0)
    nu_rhs = (1.0 / (1.0 - k)) * (1.0 / r - 1.0)

    if points_equal(x0p, tx0):
        details = {"mu_lhs": 0.0, "mu_rhs": mu_rhs, "nu_lhs": float("inf"), "nu_rhs": nu_rhs,
                   "degenerate": True}
        return ContractivityReport(
            notion="closed_ball_hypotheses",
            verdict="pass",
            estimated_k=k,
            samples_used=1,
            notes="center is already fixed by the map; bounds hold degenerately",
            details=details,
        )

    mu0, nu0 = membership_grid(space, [x0p], [tx0], np.asarray([t]))
    mu0, nu0 = float(mu0[0, 0]), float(nu0[0, 0])
    mu_lhs = 1.0 / mu0 - 1.0
    nu_lhs = float("inf") if nu0 == 0.0 else 1.0 / nu0 - 1.0

    mu_ok = mu_lhs < mu_rhs
    nu_ok = nu_lhs > nu_rhs
    details = {"mu_lhs": mu_lhs, "mu_rhs": mu_rhs, "nu_lhs": nu_lhs, "nu_rhs": nu_rhs,
               "degenerate": False}
    if mu_ok and nu_ok:
        return ContractivityReport(
            notion="closed_ball_hypotheses",
            verdict="pass",
            estimated_k=k,
            samples_used=1,
            details=details,
        )
    failing = []
    if not mu_ok:
        failing.append(f"mu side: {mu_lhs!r} is not < {mu_rhs!r}")
    if not nu_ok:
        failing.append(f"nu side: {nu_lhs!r} is not > {nu_rhs!r}")
    return ContractivityReport(
        notion="closed_ball_hypotheses",
        verdict="fail",
        worst_witness={"x0": point_jsonable(x0p), "image": point_jsonable(tx0), "t": t, **details},
        samples_used=1,
        notes="; ".join(failing),
        details=details,
    )
