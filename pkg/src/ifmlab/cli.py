"""Command-line front end.

Subcommands: ``audit``, ``check``, ``solve`` (all driven by a YAML config),
``defaults`` (emit the default probe grid and solver settings), and
``validate`` (re-verify the convergence certificate stored in a result
document).  Exit codes: 0 for pass/converged, 1 for fail or hypothesis
failure (reports are still written), 2 for input errors.

Identical config and seed produce byte-identical output files: writers are
deterministic, floats are rendered with 17 significant digits, and files
are written atomically (write then rename).  Relative output paths resolve
against ``--out``, the ``IFMLAB_OUT`` environment variable, or the current
directory, in that order of precedence.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .config import ConfigError, ExperimentConfig, build_map, build_space, load_config, parse_ball
from .contractions import (
    DomainEscapeError,
    SelfMap,
    closed_ball_hypotheses,
    contractive_sequence_check,
    direct_ratio_contractive_check,
    if_contractive_check,
    self_map_from_spec,
    t_uniform_continuity_probe,
)
from .operators import audit_operator_pair, check_idempotent, operator_pair
from .report import format_float, json_text, records_to_jsonl, write_text_atomic
from .sampling import coordinate_box
from .solver import (
    SolveConfig,
    SolveResult,
    closed_ball_solve,
    direct_ratio_solve,
    iterate_trace,
    picard_solve,
    power_map_solve,
)
from .spaces import (
    CoordinateSpace,
    IfmSpace,
    axiom_audit,
    membership_grid,
)

OUTPUT_DIR_ENV = "IFMLAB_OUT"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2


@dataclass
class RunSummary:
    """What a run did: verdicts, key numbers, files written, duration."""

    action: str
    verdicts: dict[str, str] = field(default_factory=dict)
    key_numbers: dict[str, Any] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)
    duration_s: float = 0.0

    def render(self) -> str:
        lines = [f"action: {self.action}"]
        for name, verdict in self.verdicts.items():
            lines.append(f"{name}: {verdict}")
        for name, value in self.key_numbers.items():
            if isinstance(value, float):
                value = format_float(value)
            lines.append(f"{name}: {value}")
        for path in self.files:
            lines.append(f"wrote: {path}")
        lines.append(f"duration: {self.duration_s:.3f}s")
        return "\n".join(lines)


def _resolve_out(path: str, out_dir: str | None) -> str:
    if os.path.isabs(path):
        return path
    base = out_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
    return os.path.join(base, path)


# ---------------------------------------------------------------------------
# trace and result documents


def trace_rows(result: SolveResult) -> tuple[list[str], list[list[str]]]:
    """Header and rows of the tabular trace (17-significant-digit floats)."""
    trace = result.trace
    ts = trace.probe_ts
    first = trace.points[0] if trace.points else None
    coordinate = not isinstance(first, str)
    if coordinate:
        dim = int(np.atleast_1d(np.asarray(first, float)).shape[0]) if first is not None else 0
        point_cols = [f"x{i}" for i in range(dim)]
    else:
        point_cols = ["label"]
    header = ["iteration", *point_cols]
    for t in ts:
        header.append(f"mu@t={format_float(float(t))}")
    for t in ts:
        header.append(f"nu@t={format_float(float(t))}")
    if trace.ball_flags is not None:
        header.append("in_ball")
    rows = []
    n_steps = trace.step_mu.shape[0]
    for i, p in enumerate(trace.points):
        row = [str(i)]
        if coordinate:
            row.extend(format_float(float(v)) for v in np.atleast_1d(np.asarray(p, float)))
        else:
            row.append(str(p))
        if i < n_steps:
            row.extend(format_float(float(v)) for v in trace.step_mu[i])
            row.extend(format_float(float(v)) for v in trace.step_nu[i])
        else:
            row.extend("" for _ in range(2 * len(ts)))
        if trace.ball_flags is not None:
            row.append(str(trace.ball_flags[i]).lower() if i < len(trace.ball_flags) else "")
        rows.append(row)
    return header, rows


def result_document(result: SolveResult, experiment: dict[str, Any]) -> dict[str, Any]:
    """Structured result: enough to re-verify the certificate offline."""
    doc: dict[str, Any] = {
        "kind": "solve_result",
        "experiment": experiment,
        "status": result.status,
        "stop_reason": result.stop_reason,
        "iterations": result.iterations,
        "fixed_point": _point_doc(result.fixed_point),
        "trace_points": [_point_doc(p) for p in result.trace.points],
        "probe_ts": [float(t) for t in result.trace.probe_ts],
        "residual_mu": None if result.residual_mu is None else [float(v) for v in result.residual_mu],
        "residual_nu": None if result.residual_nu is None else [float(v) for v in result.residual_nu],
        "notes": result.notes,
    }
    if result.trace.ball_flags is not None:
        doc["ball_flags"] = [bool(b) for b in result.trace.ball_flags]
    if result.hypothesis_report is not None:
        doc["hypothesis"] = result.hypothesis_report.to_record()
    return doc


def _point_doc(p):
    if p is None:
        return None
    if isinstance(p, str):
        return p
    return [float(v) for v in np.atleast_1d(np.asarray(p, float))]


def export_trace(result: SolveResult, path: str, format: str = "tabular",
                 experiment: dict[str, Any] | None = None) -> str:
    """Write a solve trace to ``path`` and return the path.

    ``tabular`` emits a CSV with one row per iterate carrying the point,
    the per-step nearness records at each probe time, and the ball flag
    when present.  ``structured`` emits the full result document and needs
    the experiment context for later re-validation.
    """
    if format == "tabular":
        header, rows = trace_rows(result)
        text = "\n".join([",".join(header), *(",".join(r) for r in rows)]) + "\n"
    elif format == "structured":
        if experiment is None:
            raise ValueError("structured export needs the experiment context")
        text = json_text(result_document(result, experiment)) + "\n"
    else:
        raise ValueError(f"unknown trace format {format!r}")
    write_text_atomic(path, text)
    return path


def validate_result_document(doc: dict[str, Any]) -> list[str]:
    """Re-verify a stored result from its own points; returns problems."""
    problems: list[str] = []
    exp = doc.get("experiment") or {}
    try:
        space = build_space(exp["space"], exp.get("operators", "min-max"))
        map_ = self_map_from_spec(exp["map"])
    except (KeyError, ValueError) as exc:
        return [f"cannot rebuild experiment: {exc}"]

    def norm(p):
        return p if isinstance(p, str) else np.asarray(p, dtype=float)

    points = [norm(p) for p in doc.get("trace_points", [])]
    if not points:
        return ["document carries no trace points"]
    from .spaces import points_equal
    from .contractions import apply_point

    for i in range(len(points) - 1):
        image = apply_point(space, map_, points[i])
        if not points_equal(image, points[i + 1]):
            problems.append(f"trace breaks at step {i}: stored successor differs from the map image")
            break

    if doc.get("status") == "converged":
        ts = np.asarray(doc["probe_ts"], dtype=float)
        epsilon = float(exp.get("solve_config", {}).get("epsilon", 1e-8))
        x_star = norm(doc["fixed_point"])
        iterations = int(doc["iterations"])
        if iterations >= len(points) or not points_equal(points[iterations], x_star):
            problems.append("fixed_point does not match the trace at the stated iteration")
        image = apply_point(space, map_, x_star)
        from .solver import _batch

        mu, nu = membership_grid(space, _batch(space, [x_star]), _batch(space, [image]), ts)
        if not bool(np.all((mu[0] >= 1.0 - epsilon) & (nu[0] <= epsilon))):
            problems.append(
                f"residual certificate fails: mu_min={mu[0].min()!r}, nu_max={nu[0].max()!r}, "
                f"epsilon={epsilon!r}"
            )
        stored_mu = doc.get("residual_mu")
        if stored_mu is not None and not np.array_equal(np.asarray(stored_mu, float), mu[0]):
            problems.append("stored residual_mu does not reproduce from the stored points")
        stored_nu = doc.get("residual_nu")
        if stored_nu is not None and not np.array_equal(np.asarray(stored_nu, float), nu[0]):
            problems.append("stored residual_nu does not reproduce from the stored points")
    return problems


# ---------------------------------------------------------------------------
# action runners


def _space_and_map(config: ExperimentConfig) -> tuple[IfmSpace, SelfMap | None]:
    space = build_space(config.space_spec, config.operators_name)
    map_ = build_map(config) if config.map_spec is not None else None
    return space, map_


def _sampling_box(space: IfmSpace, config: ExperimentConfig):
    if isinstance(space.domain, CoordinateSpace):
        return coordinate_box(space.domain.dimension,
                              halfwidth=float(config.sampling.get("halfwidth", 8.0)))
    return None


def _run_audit(config: ExperimentConfig, out_dir: str | None, summary: RunSummary) -> int:
    params = config.action
    target = params.get("target", "space")
    tolerance = float(params.get("tolerance", 1e-9 if target == "space" else 1e-12))
    if target == "operators":
        pair = operator_pair(config.operators_name)
        grid = int(params.get("grid_size", 100))
        report = audit_operator_pair(pair, grid, tolerance)
        idem = check_idempotent(pair)
        summary.key_numbers["idempotent"] = f"tnorm={idem[0]} tconorm={idem[1]}"
    else:
        space, _ = _space_and_map(config)
        solve_cfg = config.solve_config()
        report = axiom_audit(
            space,
            sample_count=int(params.get("samples", 1000)),
            t_samples=solve_cfg.probe_ts,
            tolerance=tolerance,
            seed=config.seed,
            box=_sampling_box(space, config),
        )
    path = _resolve_out(config.output.get("report", "audit_report.jsonl"), out_dir)
    write_text_atomic(path, records_to_jsonl(report.to_records()))
    summary.files.append(path)
    summary.verdicts["audit"] = "pass" if report.passed else "fail"
    for clause in report.failures():
        summary.verdicts[f"clause {clause.clause}"] = "fail"
    return EXIT_PASS if report.passed else EXIT_FAIL


def _run_check(config: ExperimentConfig, out_dir: str | None, summary: RunSummary) -> int:
    params = config.action
    notion = params["notion"]
    space, map_ = _space_and_map(config)
    solve_cfg = config.solve_config()
    pairs_count = int(config.sampling.get("pairs", 1000))
    box = _sampling_box(space, config)

    if notion == "if_contractive":
        report = if_contractive_check(space, map_, pairs_count, solve_cfg.probe_ts,
                                      seed=config.seed, box=box)
    elif notion == "direct_ratio":
        report = direct_ratio_contractive_check(
            space, map_, pairs_count, solve_cfg.probe_ts,
            include_coincident=bool(params.get("include_coincident", False)),
            seed=config.seed, box=box,
        )
    elif notion == "t_uniform_continuity":
        epsilons = [float(e) for e in params.get("epsilons", [0.1, 0.01])]
        report = t_uniform_continuity_probe(space, map_, epsilons, pairs_count,
                                            solve_cfg.probe_ts, seed=config.seed, box=box)
    elif notion == "contractive_sequence":
        k = float(params.get("k", 0.5))
        if "prefix" in params:
            prefix = params["prefix"]
        else:
            x0 = params.get("x0", space.default_start())
            steps = int(params.get("steps", 16))
            prefix = iterate_trace(space, map_, x0, steps)
        report = contractive_sequence_check(space, prefix, k, solve_cfg.probe_ts)
    else:  # closed_ball_hypotheses
        ball = parse_ball(params, "action.check")
        report = closed_ball_hypotheses(space, map_, ball.center, ball.radius,
                                        ball.time, float(params.get("k", 0.5)))

    path = _resolve_out(config.output.get("report", "check_report.jsonl"), out_dir)
    write_text_atomic(path, records_to_jsonl([report.to_record()]))
    summary.files.append(path)
    summary.verdicts[notion] = report.verdict
    if report.estimated_k is not None:
        summary.key_numbers["estimated_k"] = report.estimated_k
    if report.notes:
        summary.key_numbers["note"] = report.notes
    return EXIT_PASS if report.passed else EXIT_FAIL


def _run_solve(config: ExperimentConfig, out_dir: str | None, summary: RunSummary,
               hypothesis_override: bool | None) -> int:
    params = config.action
    regime = params["regime"]
    space, map_ = _space_and_map(config)
    solve_cfg = config.solve_config(hypothesis_override)

    if regime == "picard":
        x0 = params.get("x0", space.default_start())
        result = picard_solve(space, map_, x0, solve_cfg)
    elif regime == "closed_ball":
        ball = parse_ball(params, "action.solve")
        result = closed_ball_solve(space, map_, ball, float(params.get("k", 0.5)), solve_cfg)
    elif regime == "power":
        result = power_map_solve(space, map_, int(params.get("m", 1)), solve_cfg,
                                 x0=params.get("x0"))
    else:  # direct_ratio
        result = direct_ratio_solve(space, map_, solve_cfg, x0=params.get("x0"),
                                    include_coincident=bool(params.get("include_coincident", False)))

    experiment = {
        "space": config.space_spec,
        "operators": config.operators_name,
        "map": config.map_spec,
        # the map applied at each trace step; differs from "map" only for
        # the power regime, whose residual certificate is about the
        # original map while the iteration runs its m-th power
        "iteration_map": (
            {"power": {"of": config.map_spec, "m": int(params.get("m", 1))}}
            if regime == "power"
            else config.map_spec
        ),
        "action": {"solve": params},
        "seed": config.seed,
        "solve_config": {
            "epsilon": solve_cfg.epsilon,
            "max_iterations": solve_cfg.max_iterations,
            "probe_ts": list(solve_cfg.probe_ts),
            "window": solve_cfg.window,
            "hypothesis_checks": solve_cfg.hypothesis_checks,
        },
    }
    result_path = _resolve_out(config.output.get("result", "result.json"), out_dir)
    export_trace(result, result_path, format="structured", experiment=experiment)
    summary.files.append(result_path)
    trace_path = _resolve_out(config.output.get("trace", "trace.csv"), out_dir)
    export_trace(result, trace_path, format="tabular")
    summary.files.append(trace_path)

    records = []
    if result.hypothesis_report is not None:
        records.append(result.hypothesis_report.to_record())
    records.append({
        "clause": f"solve.{regime}",
        "verdict": result.status,
        "iterations": result.iterations,
        "fixed_point": _point_doc(result.fixed_point),
        "note": result.stop_reason,
    })
    report_path = _resolve_out(config.output.get("report", "solve_report.jsonl"), out_dir)
    write_text_atomic(report_path, records_to_jsonl(records))
    summary.files.append(report_path)

    summary.verdicts[f"solve.{regime}"] = result.status
    summary.key_numbers["iterations"] = result.iterations
    if result.fixed_point is not None:
        summary.key_numbers["fixed_point"] = json_text(_point_doc(result.fixed_point))
    if result.hypothesis_report is not None and not result.hypothesis_report.passed:
        summary.key_numbers["hypothesis_note"] = (
            result.hypothesis_report.notes or result.hypothesis_report.verdict
        )
    summary.key_numbers["stop_reason"] = result.stop_reason
    return EXIT_PASS if result.converged else EXIT_FAIL


def run(config: ExperimentConfig, out_dir: str | None = None,
        hypothesis_override: bool | None = None) -> tuple[int, RunSummary]:
    """Dispatch a validated config to its action; returns (exit code, summary)."""
    started = time.perf_counter()
    summary = RunSummary(action=config.action_kind)
    if config.action_kind == "audit":
        code = _run_audit(config, out_dir, summary)
    elif config.action_kind == "check":
        code = _run_check(config, out_dir, summary)
    else:
        code = _run_solve(config, out_dir, summary, hypothesis_override)
    summary.duration_s = time.perf_counter() - started
    return code, summary


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="path to the YAML experiment config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None,
                        help=f"output directory for relative paths (overrides ${OUTPUT_DIR_ENV})")
    parser.add_argument("--no-hypothesis-checks", action="store_true",
                        help="skip solver hypothesis checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifmlab",
        description="Audit nearness spaces, classify contractions, and solve for fixed points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("audit", "run an operator or space axiom audit"),
        ("check", "run a contraction or continuity check"),
        ("solve", "run a fixed-point solve"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    defaults = sub.add_parser("defaults", help="print the default probe grid and solver settings")
    defaults.add_argument("--out", default=None, help="also write the defaults to this file")
    validate = sub.add_parser("validate", help="re-verify a stored solve-result document")
    validate.add_argument("result", help="path to a structured result JSON file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "defaults":
        cfg = SolveConfig()
        doc = {
            "probe_ts": list(cfg.probe_ts),
            "solve": {
                "epsilon": cfg.epsilon,
                "max_iterations": cfg.max_iterations,
                "window": cfg.window,
                "hypothesis_checks": cfg.hypothesis_checks,
            },
            "sampling": {"pairs": cfg.sample_pairs, "halfwidth": cfg.sample_halfwidth},
        }
        text = json_text(doc)
        print(text)
        if args.out:
            write_text_atomic(args.out, text + "\n")
        return EXIT_PASS

    if args.command == "validate":
        import json

        try:
            with open(args.result) as handle:
                doc = json.load(handle)
        except (OSError, ValueError) as exc:
            print(f"error: cannot read result document: {exc}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        problems = validate_result_document(doc)
        if problems:
            for p in problems:
                print(f"certificate problem: {p}")
            return EXIT_FAIL
        print("certificate verified: trace is consistent and the residual bounds hold")
        return EXIT_PASS

    try:
        config = load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        expected = {"audit": "audit", "check": "check", "solve": "solve"}[args.command]
        if config.action_kind != expected:
            raise ConfigError("action", f"config declares a {config.action_kind!r} action "
                                        f"but the {expected!r} subcommand was invoked")
        override = False if args.no_hypothesis_checks else None
        code, summary = run(config, out_dir=args.out, hypothesis_override=override)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except DomainEscapeError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    print(summary.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
