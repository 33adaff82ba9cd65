"""Declarative experiment configs: schema validation and object building.

A config is a single YAML document selecting a space, an operator pair, an
optional self-map, exactly one action (audit, check, or solve) with its
parameters, solver settings, sampling settings, and output paths.
Validation errors carry the offending field path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import yaml

from .contractions import SelfMap, self_map_from_spec
from .operators import OPERATOR_FACTORIES, operator_pair
from .spaces import (
    BallSpec,
    CoordinateSpace,
    FiniteTabulated,
    IfmSpace,
    finite_tabulated,
    induced_from_metric,
)
from .solver import SolveConfig


class ConfigError(ValueError):
    """Config validation failure, annotated with the field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


CHECK_NOTIONS = (
    "if_contractive",
    "direct_ratio",
    "t_uniform_continuity",
    "contractive_sequence",
    "closed_ball_hypotheses",
)
SOLVE_REGIMES = ("picard", "closed_ball", "power", "direct_ratio")
AUDIT_TARGETS = ("space", "operators")


@dataclass
class ExperimentConfig:
    seed: int
    operators_name: str
    space_spec: dict
    action_kind: str  # "audit" | "check" | "solve"
    action: dict
    map_spec: dict | None = None
    solve: dict = field(default_factory=dict)
    sampling: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def solve_config(self, hypothesis_override: bool | None = None) -> SolveConfig:
        kwargs: dict[str, Any] = dict(self.solve)
        kwargs.setdefault("seed", self.seed)
        kwargs["sample_pairs"] = int(self.sampling.get("pairs", kwargs.pop("sample_pairs", 400)))
        if "halfwidth" in self.sampling:
            kwargs["sample_halfwidth"] = float(self.sampling["halfwidth"])
        if "probe_ts" in kwargs and kwargs["probe_ts"] is not None:
            kwargs["probe_ts"] = tuple(float(t) for t in kwargs["probe_ts"])
        else:
            kwargs.pop("probe_ts", None)
        if hypothesis_override is not None:
            kwargs["hypothesis_checks"] = hypothesis_override
        try:
            return SolveConfig(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError("solve", str(exc)) from exc


def _expect_mapping(obj: Any, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(path, f"expected a mapping, got {type(obj).__name__}")
    return obj


def _expect_list(obj: Any, path: str) -> list:
    if not isinstance(obj, list):
        raise ConfigError(path, f"expected a list, got {type(obj).__name__}")
    return obj


def _get(d: dict, key: str, path: str, required: bool = True, default: Any = None) -> Any:
    if key not in d:
        if required:
            raise ConfigError(f"{path}.{key}", "required field is missing")
        return default
    return d[key]


def _validate_space(spec: Any) -> dict:
    spec = _expect_mapping(spec, "space")
    kinds = [k for k in ("induced", "tabulated") if k in spec]
    if len(kinds) != 1:
        raise ConfigError("space", "exactly one of 'induced' or 'tabulated' is required")
    kind = kinds[0]
    body = _expect_mapping(spec[kind], f"space.{kind}")
    if kind == "induced":
        dim = _get(body, "dimension", "space.induced")
        if not isinstance(dim, int) or dim < 1:
            raise ConfigError("space.induced.dimension", f"must be a positive integer, got {dim!r}")
        metric = body.get("base_metric", "euclidean")
        try:
            CoordinateSpace(dim, metric)
        except ValueError as exc:
            raise ConfigError("space.induced.base_metric", str(exc)) from exc
        return {"induced": {"dimension": dim, "base_metric": metric}}
    labels = _expect_list(_get(body, "labels", "space.tabulated"), "space.tabulated.labels")
    pairs_raw = _expect_list(_get(body, "pairs", "space.tabulated"), "space.tabulated.pairs")
    pairs = []
    for i, entry in enumerate(pairs_raw):
        p = f"space.tabulated.pairs[{i}]"
        entry = _expect_mapping(entry, p)
        between = _expect_list(_get(entry, "between", p), f"{p}.between")
        if len(between) != 2:
            raise ConfigError(f"{p}.between", "must name exactly two labels")
        pairs.append(
            {"between": [str(between[0]), str(between[1])],
             "mu": _get(entry, "mu", p), "nu": _get(entry, "nu", p)}
        )
    normalized = {"tabulated": {"labels": [str(l) for l in labels], "pairs": pairs}}
    try:
        _domain_from_spec(normalized)
    except ValueError as exc:
        raise ConfigError("space.tabulated", str(exc)) from exc
    return normalized


def _domain_from_spec(space_spec: dict) -> CoordinateSpace | FiniteTabulated:
    if "induced" in space_spec:
        body = space_spec["induced"]
        return CoordinateSpace(body["dimension"], body.get("base_metric", "euclidean"))
    body = space_spec["tabulated"]
    pairwise = {
        tuple(entry["between"]): (entry["mu"], entry["nu"]) for entry in body["pairs"]
    }
    return FiniteTabulated(body["labels"], pairwise)


def build_space(space_spec: dict, operators_name: str) -> IfmSpace:
    domain = _domain_from_spec(space_spec)
    pair = operator_pair(operators_name)
    if isinstance(domain, CoordinateSpace):
        return induced_from_metric(domain, pair)
    return finite_tabulated(domain, pair)


def _validate_map(spec: Any, space_spec: dict) -> dict:
    spec = _expect_mapping(spec, "map")
    try:
        built = self_map_from_spec(spec)
    except (ValueError, KeyError) as exc:
        raise ConfigError("map", str(exc)) from exc
    if "affine" in spec and "induced" in space_spec:
        dim = space_spec["induced"]["dimension"]
        a = np.atleast_2d(np.asarray(spec["affine"]["matrix"], float))
        if a.shape != (dim, dim):
            raise ConfigError("map.affine.matrix",
                              f"matrix shape {a.shape} does not match space dimension {dim}")
    if ("table" in spec or ("constant" in spec and isinstance(spec["constant"], str))) \
            and "tabulated" not in space_spec:
        raise ConfigError("map", "label-valued maps require a tabulated space")
    del built
    return spec


def build_map(config: ExperimentConfig) -> SelfMap:
    if config.map_spec is None:
        raise ConfigError("map", "this action requires a map")
    return self_map_from_spec(config.map_spec)


def _validate_action(raw: Any) -> tuple[str, dict]:
    raw = _expect_mapping(raw, "action")
    kinds = [k for k in ("audit", "check", "solve") if k in raw]
    if len(kinds) != 1:
        raise ConfigError("action", "exactly one of 'audit', 'check' or 'solve' is required")
    kind = kinds[0]
    body = _expect_mapping(raw[kind], f"action.{kind}")
    if kind == "audit":
        target = body.get("target", "space")
        if target not in AUDIT_TARGETS:
            raise ConfigError("action.audit.target",
                              f"must be one of {AUDIT_TARGETS}, got {target!r}")
    elif kind == "check":
        notion = _get(body, "notion", "action.check")
        if notion not in CHECK_NOTIONS:
            raise ConfigError("action.check.notion",
                              f"must be one of {CHECK_NOTIONS}, got {notion!r}")
    else:
        regime = _get(body, "regime", "action.solve")
        if regime not in SOLVE_REGIMES:
            raise ConfigError("action.solve.regime",
                              f"must be one of {SOLVE_REGIMES}, got {regime!r}")
    return kind, dict(body)


def parse_ball(params: dict, path: str) -> BallSpec:
    ball = _expect_mapping(_get(params, "ball", path), f"{path}.ball")
    try:
        return BallSpec(
            center=_get(ball, "center", f"{path}.ball"),
            radius=float(_get(ball, "radius", f"{path}.ball")),
            time=float(_get(ball, "time", f"{path}.ball")),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}.ball", str(exc)) from exc


def validate_config(doc: Any) -> ExperimentConfig:
    doc = _expect_mapping(doc, "config")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("seed", f"must be an integer, got {seed!r}")
    operators_name = doc.get("operators", "min-max")
    if operators_name not in OPERATOR_FACTORIES:
        raise ConfigError(
            "operators",
            f"unknown operator pair {operators_name!r} (known: {', '.join(sorted(OPERATOR_FACTORIES))})",
        )
    space_spec = _validate_space(_get(doc, "space", "config"))
    action_kind, action = _validate_action(_get(doc, "action", "config"))

    map_spec = None
    if "map" in doc and doc["map"] is not None:
        map_spec = _validate_map(doc["map"], space_spec)
    needs_map = action_kind in ("solve", "check")
    if (action_kind == "check" and action.get("notion") == "contractive_sequence"
            and "prefix" in action):
        needs_map = False
    if map_spec is None and needs_map:
        raise ConfigError("map", f"action {action_kind!r} requires a map")

    solve = doc.get("solve", {}) or {}
    _expect_mapping(solve, "solve")
    sampling = doc.get("sampling", {}) or {}
    _expect_mapping(sampling, "sampling")
    output = doc.get("output", {}) or {}
    _expect_mapping(output, "output")
    for key, value in output.items():
        if not isinstance(value, str):
            raise ConfigError(f"output.{key}", "output paths must be strings")

    return ExperimentConfig(
        seed=seed,
        operators_name=operators_name,
        space_spec=space_spec,
        action_kind=action_kind,
        action=action,
        map_spec=map_spec,
        solve=dict(solve),
        sampling=dict(sampling),
        output=dict(output),
    )


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate a YAML experiment config file."""
    try:
        with open(path) as handle:
            doc = yaml.safe_load(handle)
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}") from None
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError("config", f"YAML parse error{where}: {exc}") from exc
    return validate_config(doc)
