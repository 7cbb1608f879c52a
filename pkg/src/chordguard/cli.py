"""Command-line interface: constants derivation, single simulations, batch
experiments, and the interactive HTTP server.

Workspaces are JSON ({"vertices": [[x, y], ...]}, counter-clockwise), traces
are JSON-lines, batch summaries are CSV. Exit codes: 0 capture, 1 input
error, 2 bound exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys

from . import geometry as geo
from .ddr_motion import Pose
from .game_engine import (
    EngineError,
    GameState,
    make_policy,
    new_game,
    run,
    theoretical_step_bound,
    write_trace,
)
from .geometry import ConvexPolygon, NotConvex
from .guard_strategy import StrategyConstants
from .scalar_solver import second_derivative_at

log = logging.getLogger("chordguard")


class ParseError(Exception):
    pass


def _configure_logging() -> None:
    level = os.environ.get("CHORDGUARD_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def parse_workspace(data: bytes | str) -> ConvexPolygon:
    """Parse and validate a workspace document.

    Clockwise input is accepted with a warning and reversed; non-convex
    vertex lists are rejected with the offending index.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise ParseError('workspace document must be an object with a "vertices" field')
    raw = doc["vertices"]
    if not isinstance(raw, list) or len(raw) < 3:
        raise ParseError('"vertices" must be a list of at least 3 [x, y] pairs')
    verts = []
    for i, item in enumerate(raw):
        if (not isinstance(item, (list, tuple)) or len(item) != 2
                or not all(isinstance(c, (int, float)) for c in item)):
            raise ParseError(f'"vertices"[{i}] is not an [x, y] number pair')
        verts.append((float(item[0]), float(item[1])))
    if _signed_area(verts) < 0:
        log.warning("workspace vertices are clockwise; reversing to counter-clockwise")
        verts.reverse()
    return ConvexPolygon(tuple(verts))  # raises NotConvex with the vertex index


def serialize_workspace(polygon: ConvexPolygon, name: str | None = None) -> str:
    doc: dict = {"vertices": [[x, y] for x, y in polygon.vertices]}
    if name:
        doc["name"] = name
    return json.dumps(doc)


def _signed_area(verts: list[tuple[float, float]]) -> float:
    s = 0.0
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        s += a[0] * b[1] - a[1] * b[0]
    return 0.5 * s


def cmd_constants(out=sys.stdout) -> int:
    """Derive the strategy constants and print them next to the reference
    values from the published analysis."""
    derived = StrategyConstants.derive(1.0)
    reference = StrategyConstants()

    def objective(a: float) -> float:
        return (0.5 - 2.0 * a) * math.tan(a / 2.0)

    d2 = second_derivative_at(objective, derived.alpha_star, h=1e-4)
    rows = [
        ("alpha*", derived.alpha_star, reference.alpha_star),
        ("k_v", derived.k_v, reference.k_v),
        ("k_h", derived.k_h, reference.k_h),
        ("alpha_kh", derived.alpha_kh, reference.alpha_kh),
        ("d2_at_alpha*", d2, -1.9999),
    ]
    print(f"{'constant':<14}{'derived':>14}{'reference':>12}{'delta':>12}", file=out)
    for name, got, ref in rows:
        print(f"{name:<14}{got:>14.6f}{ref:>12.4f}{got - ref:>12.2e}", file=out)
    return 0


def _load_workspace_file(path: str) -> ConvexPolygon:
    try:
        with open(path, "rb") as fh:
            return parse_workspace(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read workspace {path}: {exc}") from exc


def _build_game(workspace: ConvexPolygon, policy_id: str, seed: int,
                epsilon: float, pursuer: tuple[float, float, float] | None,
                evader: tuple[float, float] | None) -> GameState:
    q = geo.erode(workspace, 1.0)
    chord = geo.longest_chord(q)
    if pursuer is None:
        # default: near one end of the longest chord, aligned with it
        d = chord.direction
        start = geo.add(chord.a, geo.scale(d, 1.0))
        pursuer = (start[0], start[1], math.atan2(d[1], d[0]))
    if evader is None:
        far = geo.add(chord.b, geo.scale(chord.direction, -1.0))
        evader = far
    return new_game(workspace, Pose(*pursuer), evader,
                    make_policy(policy_id), epsilon=epsilon, seed=seed)


def cmd_simulate(args) -> int:
    try:
        workspace = _load_workspace_file(args.workspace)
        state = _build_game(workspace, args.policy, args.seed, args.epsilon,
                            args.pursuer, args.evader)
    except (ParseError, NotConvex, geo.EmptyWorkspace, EngineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    state, trace = run(state, max_steps=args.max_steps)
    if args.trace:
        write_trace(trace, args.trace)
    if state.captured:
        log.info("captured in %d half-turns", state.step)
        return 0
    print("error: step bound exceeded without capture", file=sys.stderr)
    return 2


def cmd_batch(spec: dict, out_path: str) -> int:
    """Run every (workspace, policy, seed) row of a batch spec into a CSV."""
    rows = spec.get("rows", [])
    if not rows:
        raise ParseError("batch spec has no rows")
    fieldnames = ["workspace", "policy", "seed", "epsilon", "diam", "bound",
                  "steps_to_capture", "establishment_steps", "zigzag_count",
                  "follow_count", "captured"]
    results = []
    for row in rows:
        workspace_path = row["workspace"]
        policy_id = row["policy"]
        epsilon = float(row.get("epsilon", 1.0))
        seeds = row["seeds"]
        if len(set(seeds)) != len(seeds):
            raise ParseError(f"duplicate seeds in batch row for {workspace_path}")
        for seed in seeds:
            results.append(_batch_row(workspace_path, policy_id, int(seed), epsilon))
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(results)
    return 0


def _batch_row(workspace_path: str, policy_id: str, seed: int,
               epsilon: float) -> dict:
    base = {"workspace": workspace_path, "policy": policy_id, "seed": seed,
            "epsilon": epsilon}
    try:
        workspace = _load_workspace_file(workspace_path)
        state = _build_game(workspace, policy_id, seed, epsilon, None, None)
        diam = state.initial_chord.length
        bound = theoretical_step_bound(state.q, StrategyConstants(), epsilon)
        state, _ = run(state)
        return {**base, "diam": f"{diam:.6f}", "bound": bound,
                "steps_to_capture": state.guarding_rounds,
                "establishment_steps": state.establishment_evader_turns,
                "zigzag_count": state.zigzag_count,
                "follow_count": state.follow_count,
                "captured": state.captured}
    except Exception as exc:  # per-row failure: record and continue
        log.error("batch row failed (%s, %s, %d): %s", workspace_path, policy_id, seed, exc)
        return {**base, "diam": "", "bound": "", "steps_to_capture": "",
                "establishment_steps": "", "zigzag_count": "",
                "follow_count": "", "captured": False}


def _parse_pursuer(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected X,Y,THETA")
    return (float(parts[0]), float(parts[1]), float(parts[2]))


def _parse_point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected X,Y")
    return (float(parts[0]), float(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chordguard",
                                     description="DDR pursuit-evasion simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", help="derive and print the strategy constants")

    sim = sub.add_parser("simulate", help="run one game")
    sim.add_argument("--workspace", required=True)
    sim.add_argument("--policy", default="greedy_runner")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--epsilon", type=float, default=1.0)
    sim.add_argument("--max-steps", type=int, default=None)
    sim.add_argument("--trace", default=None, help="write a JSONL trace here")
    sim.add_argument("--pursuer", type=_parse_pursuer, default=None, metavar="X,Y,THETA")
    sim.add_argument("--evader", type=_parse_point, default=None, metavar="X,Y")

    batch = sub.add_parser("batch", help="run a batch spec into a CSV")
    batch.add_argument("--spec", required=True, help="JSON batch specification")
    batch.add_argument("--out", required=True, help="output CSV path")

    serve = sub.add_parser("serve", help="serve the interactive session API")
    serve.add_argument("--addr", default="127.0.0.1:8497")
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "constants":
        return cmd_constants()
    if args.command == "simulate":
        return cmd_simulate(args)
    if args.command == "batch":
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                spec = json.load(fh)
            return cmd_batch(spec, args.out)
        except (ParseError, OSError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    if args.command == "serve":
        from .session_service import serve_forever
        host, _, port = args.addr.rpartition(":")
        serve_forever(host or "127.0.0.1", int(port))
        return 0
    parser.error(f"unknown command {args.command}")
    return 1


if __name__ == "__main__":
    sys.exit(main())
