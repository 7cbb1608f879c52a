"""Deterministic turn-based game loop.

The evader moves first each round. Capture is checked continuously along
every swept segment (both players'), never just at endpoints, so nobody can
tunnel through the capture disk. A fixed seed, workspace, and policy id
reproduce a bit-identical trace.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from . import geometry as geo
from .ddr_motion import Pose, Rotate, Translate, TurnPlan, execute, normalize_angle
from .geometry import Chord, ConvexPolygon, Point
from .guard_strategy import (
    GuardLine,
    StrategyConstants,
    plan_turn,
)

POS_TOL = 1e-9
INV_TOL = 1e-6


class EngineError(Exception):
    pass


class StartInCollision(EngineError):
    pass


class StartOutside(EngineError):
    pass


class IllegalMove(EngineError):
    """The engine rejects illegal evader moves; it never clamps them."""


class GameOver(EngineError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    step: int
    actor: str  # "evader" | "pursuer"
    x: float
    y: float
    theta: float | None
    case: str | None
    shift: float | None
    v_progress: float
    band_height: float
    captured: bool

    def to_json_line(self) -> str:
        return json.dumps({
            "step": self.step,
            "actor": self.actor,
            "x": self.x,
            "y": self.y,
            "theta": self.theta,
            "case": self.case,
            "shift": self.shift,
            "v_progress": self.v_progress,
            "band_height": self.band_height,
            "captured": self.captured,
        }, separators=(",", ":"))


@dataclass
class GameState:
    q: ConvexPolygon
    w: ConvexPolygon
    pursuer: Pose
    evader: Point
    policy: "EvaderPolicy"
    epsilon: float
    rng_seed: int
    constants: StrategyConstants
    initial_chord: Chord
    guard: GuardLine | None = None
    phase: str = "approach"  # approach | establishing | guarding | captured
    step: int = 0
    next_actor: str = "evader"
    evader_prev: Point = (0.0, 0.0)
    captured_by: str | None = None
    bound_exceeded: bool = False
    event_log: list[TraceRecord] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    rng: random.Random = field(default_factory=random.Random)
    last_case: str | None = None
    prev_band_height: float | None = None
    establishment_evader_turns: int = 0
    guarding_rounds: int = 0
    zigzag_count: int = 0
    follow_count: int = 0

    @property
    def captured(self) -> bool:
        return self.phase == "captured"


def new_game(workspace: ConvexPolygon, pursuer_start: Pose, evader_start: Point,
             policy: "EvaderPolicy", epsilon: float = 1.0,
             seed: int = 0) -> GameState:
    """Validate starts, erode the workspace, and set up the approach phase."""
    if not (0.0 < epsilon <= 1.0):
        raise ValueError("epsilon must be in (0, 1]")
    q = geo.erode(workspace, 1.0)
    if not q.contains(pursuer_start.position, tol=POS_TOL):
        raise StartOutside(f"pursuer start {pursuer_start.position} is outside the playing space")
    if not q.contains(evader_start, tol=POS_TOL):
        raise StartOutside(f"evader start {evader_start} is outside the playing space")
    constants = StrategyConstants.derive(epsilon)
    if geo.dist(pursuer_start.position, evader_start) <= constants.r_capture:
        raise StartInCollision("players start already in contact")
    state = GameState(
        q=q, w=workspace, pursuer=pursuer_start,
        evader=(float(evader_start[0]), float(evader_start[1])),
        policy=policy, epsilon=float(epsilon), rng_seed=int(seed),
        constants=constants, initial_chord=geo.longest_chord(q),
        evader_prev=(float(evader_start[0]), float(evader_start[1])),
    )
    state.rng = random.Random(seed)
    return state


def _first_contact(moving_start: Point, moving_end: Point, fixed: Point,
                   radius: float) -> Point | None:
    """Earliest point of a straight move at distance == radius from ``fixed``,
    or the start itself when it already is that close."""
    d = geo.sub(moving_end, moving_start)
    f = geo.sub(moving_start, fixed)
    if geo.norm(f) <= radius:
        return moving_start
    a = geo.dot(d, d)
    if a <= POS_TOL * POS_TOL:
        return None
    b = 2.0 * geo.dot(f, d)
    c = geo.dot(f, f) - radius * radius
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return None
    t = (-b - math.sqrt(disc)) / (2.0 * a)
    if t < 0.0 or t > 1.0:
        return None
    return geo.add(moving_start, geo.scale(d, t))


def band_height(q: ConvexPolygon, guard: GuardLine) -> float:
    """Extent of the evader-side region measured along the guard normal."""
    h = 0.0
    for v in q.vertices:
        h = max(h, geo.dot(geo.sub(v, guard.chord.a), guard.evader_normal))
    return h


def _trace(state: GameState, actor: str, case: str | None, shift: float | None,
           v_progress: float) -> None:
    if actor == "evader":
        x, y = state.evader
        theta = None
    else:
        x, y = state.pursuer.position
        theta = state.pursuer.theta
    bh = band_height(state.q, state.guard) if state.guard is not None else 0.0
    state.event_log.append(TraceRecord(
        step=state.step, actor=actor, x=x, y=y, theta=theta, case=case,
        shift=shift, v_progress=v_progress, band_height=bh,
        captured=state.captured))


def evader_turn(state: GameState, target: Point) -> GameState:
    """Apply the evader's straight move; reject illegal ones outright."""
    if state.captured:
        raise GameOver("game already ended in capture")
    if state.next_actor != "evader":
        raise EngineError("it is not the evader's turn")
    target = (float(target[0]), float(target[1]))
    if geo.dist(state.evader, target) > state.epsilon + POS_TOL:
        raise IllegalMove(
            f"move of length {geo.dist(state.evader, target):.6f} exceeds {state.epsilon}")
    if not state.q.contains(target, tol=POS_TOL):
        raise IllegalMove(f"target {target} is outside the playing space")
    state.evader_prev = state.evader
    contact = _first_contact(state.evader, target, state.pursuer.position,
                             state.constants.r_capture)
    if contact is not None:
        state.evader = contact
        state.phase = "captured"
        state.captured_by = "evader"
    else:
        state.evader = target
    if state.phase == "establishing":
        state.establishment_evader_turns += 1
    state.step += 1
    state.next_actor = "pursuer"
    _trace(state, "evader", None, None, 0.0)
    return state


def _approach_plan(state: GameState) -> tuple[TurnPlan, bool]:
    """Rotate toward the nearest chord point, drive, then align with the
    chord; returns (plan, arrived_and_aligned)."""
    budget = state.epsilon
    prims: list[Rotate | Translate] = []
    pose = state.pursuer
    chord = state.initial_chord
    x, y, theta = pose.x, pose.y, pose.theta
    target = geo.closest_point_on_segment((x, y), chord)
    dist = geo.dist((x, y), target)
    if dist > POS_TOL:
        want = math.atan2(target[1] - y, target[0] - x)
        dtheta = normalize_angle(want - theta)
        if abs(dtheta) > POS_TOL:
            rot = max(-budget, min(budget, dtheta))
            prims.append(Rotate(rot))
            budget -= abs(rot)
            theta = normalize_angle(theta + rot)
            if abs(normalize_angle(want - theta)) > POS_TOL:
                return TurnPlan(tuple(prims)), False
        step = min(budget, dist)
        if step > POS_TOL:
            prims.append(Translate(step))
            budget -= step
        if step < dist - POS_TOL:
            return TurnPlan(tuple(prims)), False
    # on the chord: align heading with it (mod pi, nearer option)
    d = chord.direction
    want = math.atan2(d[1], d[0])
    dtheta = normalize_angle(want - theta)
    if abs(dtheta) > math.pi / 2.0:
        dtheta = normalize_angle(dtheta + math.pi)
    if abs(dtheta) > POS_TOL:
        rot = max(-budget, min(budget, dtheta))
        prims.append(Rotate(rot))
        if abs(rot) < abs(dtheta) - POS_TOL:
            return TurnPlan(tuple(prims)), False
    return TurnPlan(tuple(prims)), True


def _run_plan(state: GameState, plan: TurnPlan) -> None:
    """Execute a pursuer plan with continuous capture checking."""
    new_pose, swept = execute(state.pursuer, plan, budget=state.epsilon)
    for seg_start, seg_end in swept:
        contact = _first_contact(seg_start, seg_end, state.evader,
                                 state.constants.r_capture)
        if contact is not None:
            state.pursuer = _pose_at_contact(state.pursuer, plan, seg_start, contact)
            state.phase = "captured"
            state.captured_by = "pursuer"
            return
    state.pursuer = new_pose


def _pose_at_contact(pose: Pose, plan: TurnPlan, seg_start: Point,
                     contact: Point) -> Pose:
    x, y, theta = pose.x, pose.y, pose.theta
    for prim in plan.primitives:
        if isinstance(prim, Rotate):
            theta = normalize_angle(theta + prim.angle)
        else:
            start = (x, y)
            nx = x + prim.distance * math.cos(theta)
            ny = y + prim.distance * math.sin(theta)
            if geo.dist(start, seg_start) <= 1e-12:
                return Pose(contact[0], contact[1], theta)
            x, y = nx, ny
    return Pose(contact[0], contact[1], theta)


def pursuer_turn(state: GameState) -> GameState:
    if state.captured:
        raise GameOver("game already ended in capture")
    if state.next_actor != "pursuer":
        raise EngineError("it is not the pursuer's turn")

    case: str | None = None
    shift: float | None = None
    v_progress = 0.0

    if state.phase == "approach":
        plan, arrived = _approach_plan(state)
        _run_plan(state, plan)
        case = "approach"
        if state.phase != "captured" and arrived:
            state.phase = "establishing"
    elif state.phase == "establishing":
        decision = plan_turn(state)
        _run_plan(state, decision.plan)
        case = decision.case
        if state.phase != "captured":
            proj = geo.closest_point_on_segment(state.evader, state.initial_chord)
            if abs(geo.dist(state.pursuer.position, proj) - 0.5) <= POS_TOL:
                state.phase = "guarding"
                side = geo.side_of(state.evader, state.initial_chord)
                n = geo.unit(geo.perp_left(geo.sub(state.initial_chord.b,
                                                   state.initial_chord.a)))
                if side is geo.Side.NEGATIVE:
                    n = geo.scale(n, -1.0)
                state.guard = GuardLine(chord=state.initial_chord, evader_normal=n)
                state.prev_band_height = band_height(state.q, state.guard)
    elif state.phase == "guarding":
        state.guarding_rounds += 1
        decision = plan_turn(state)
        _run_plan(state, decision.plan)
        case = decision.case
        shift = decision.shift
        v_progress = decision.predicted_vertical_progress
        if case in ("zigzag-negative", "zigzag-small-positive"):
            state.zigzag_count += 1
        elif case == "horizontal-follow":
            state.follow_count += 1
        if state.phase != "captured" and decision.new_guard_line is not None:
            state.guard = decision.new_guard_line
    else:  # pragma: no cover - guarded by the captured check above
        raise GameOver("game already ended")

    state.step += 1
    state.next_actor = "evader"
    state.last_case = case
    _trace(state, "pursuer", case, shift, v_progress)
    if state.phase == "guarding":
        state.violations.extend(monitors(state))
        state.prev_band_height = band_height(state.q, state.guard)
    return state


def monitors(state: GameState) -> list[str]:
    """Invariant checks run after each guarding pursuer turn; empty on a
    healthy run."""
    out: list[str] = []
    guard = state.guard
    if guard is None:
        return out
    d = guard.direction
    want = math.atan2(d[1], d[0])
    dtheta = normalize_angle(want - state.pursuer.theta)
    if abs(dtheta) > math.pi / 2.0:
        dtheta = normalize_angle(dtheta + math.pi)
    if abs(dtheta) > INV_TOL:
        out.append(f"Invariant1Violation: step {state.step}, heading off by {dtheta:.3e} rad")
    proj = geo.closest_point_on_segment(state.evader, guard.chord)
    gap = geo.dist(state.pursuer.position, proj) - 0.5
    if abs(gap) > INV_TOL:
        out.append(f"Invariant2Violation: step {state.step}, projection distance off by {gap:.3e}")
    side = geo.dot(geo.sub(state.evader, guard.chord.a), guard.evader_normal)
    if side < -POS_TOL:
        out.append(f"ContainmentViolation: step {state.step}, evader on the cleared side ({side:.3e})")
    if not state.q.contains(state.pursuer.position, tol=1e-7):
        out.append(f"PursuerOutsideViolation: step {state.step}, at {state.pursuer.position}")
    bh = band_height(state.q, guard)
    if state.prev_band_height is not None and bh > state.prev_band_height + POS_TOL:
        out.append(f"BandGrowthViolation: step {state.step}, {state.prev_band_height:.9f} -> {bh:.9f}")
    if not state.captured:
        d_line = geo.dist(state.evader, proj)
        if geo.dist(state.pursuer.position, state.evader) > state.constants.r_capture \
                and d_line <= state.constants.safe_margin - POS_TOL:
            out.append(f"AliveConsistencyViolation: step {state.step}, evader {d_line:.6f} from line")
    return out


def theoretical_step_bound(q: ConvexPolygon, constants: StrategyConstants,
                           epsilon: float = 1.0) -> int:
    """Capture bound: establishment plus the horizontal x vertical grid,
    scaled by 1/epsilon^2 for shorter turns."""
    diam = geo.longest_chord(q).length
    product = math.ceil(diam / constants.k_h) * math.ceil(diam / constants.k_v)
    if epsilon != 1.0:
        product = math.ceil(product / (epsilon * epsilon))
        return math.ceil(diam / epsilon) + product
    return math.ceil(diam) + product


def run(state: GameState, max_steps: int | None = None) -> tuple[GameState, list[TraceRecord]]:
    """Alternate policy-driven evader turns and pursuer turns until capture.

    ``max_steps`` counts full rounds; hitting it sets the bound_exceeded
    flag instead of raising.
    """
    if max_steps is None:
        max_steps = theoretical_step_bound(state.q, StrategyConstants(),
                                           state.epsilon)
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    rounds = 0
    while not state.captured and rounds < max_steps:
        target = state.policy.propose(state)
        evader_turn(state, target)
        if state.captured:
            break
        pursuer_turn(state)
        rounds += 1
    if not state.captured:
        state.bound_exceeded = True
    return state, state.event_log


def write_trace(records: list[TraceRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json_line())
            fh.write("\n")


# ---------------------------------------------------------------------------
# Built-in evader policies
# ---------------------------------------------------------------------------

class EvaderPolicy:
    """Base: proposes a legal straight move (length <= epsilon, end in Q)."""

    id = "base"

    def propose(self, state: GameState) -> Point:
        raise NotImplementedError


def _clip_into(q: ConvexPolygon, start: Point, target: Point) -> Point:
    """Longest prefix of the move that stays inside Q (binary shrink)."""
    if q.contains(target, tol=POS_TOL):
        return target
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        p = geo.add(start, geo.scale(geo.sub(target, start), mid))
        if q.contains(p, tol=POS_TOL):
            lo = mid
        else:
            hi = mid
    # step back slightly so the endpoint is strictly inside
    t = max(0.0, lo - 1e-9)
    return geo.add(start, geo.scale(geo.sub(target, start), t))


class RandomPolicy(EvaderPolicy):
    id = "random"

    def propose(self, state: GameState) -> Point:
        e = state.evader
        for _ in range(32):
            ang = state.rng.uniform(0.0, 2.0 * math.pi)
            length = state.rng.uniform(0.0, state.epsilon)
            target = (e[0] + length * math.cos(ang), e[1] + length * math.sin(ang))
            if state.q.contains(target, tol=POS_TOL):
                return target
        return e


def _greedy_move(state: GameState) -> Point:
    """Legal move maximizing post-move distance to the pursuer (direction fan)."""
    e = state.evader
    p = state.pursuer.position
    away = math.atan2(e[1] - p[1], e[0] - p[0])
    best, best_d = e, geo.dist(e, p)
    for k in range(-12, 13):
        ang = away + k * (math.pi / 12.0)
        raw = (e[0] + state.epsilon * math.cos(ang),
               e[1] + state.epsilon * math.sin(ang))
        target = _clip_into(state.q, e, raw)
        d = geo.dist(target, p)
        if d > best_d + POS_TOL:
            best, best_d = target, d
    return best


class GreedyRunner(EvaderPolicy):
    id = "greedy_runner"

    def propose(self, state: GameState) -> Point:
        return _greedy_move(state)


class ThresholdDancer(EvaderPolicy):
    """Skirts the horizontal-progress threshold: alternates sub-threshold and
    supra-threshold sideways shifts while keeping a safe height."""

    id = "threshold_dancer"

    def __init__(self):
        self.tick = 0
        self.sign = 1.0

    def propose(self, state: GameState) -> Point:
        self.tick += 1
        e = state.evader
        if state.guard is None:
            return _greedy_move(state)
        chord = state.guard.chord
        proj = geo.closest_point_on_segment(e, chord)
        pattern = (0.8 * state.constants.k_h, 3.0 * state.constants.k_h,
                   0.0, state.epsilon * 0.9)
        dx = pattern[self.tick % len(pattern)]
        forward = geo.unit(geo.sub(proj, state.pursuer.position)) \
            if geo.dist(proj, state.pursuer.position) > POS_TOL else chord.direction
        move = geo.scale(forward, self.sign * dx)
        # retreat if the safe margin is getting thin
        height = geo.dist(e, proj)
        room = state.constants.safe_margin + 0.5 - height
        if room > 0:
            lift = geo.scale(state.guard.evader_normal, min(room, 0.3))
            move = geo.add(move, lift)
        n = geo.norm(move)
        if n > state.epsilon:
            move = geo.scale(move, state.epsilon / n)
        target = _clip_into(state.q, e, geo.add(e, move))
        if dx > 0 and geo.dist(target, e) < 0.25 * geo.norm(move):
            self.sign = -self.sign  # bounce off the wall next turn
        return target


class CornerHugger(EvaderPolicy):
    """Runs to the reachable arena corner farthest from the pursuer and sits."""

    id = "corner_hugger"

    def propose(self, state: GameState) -> Point:
        e = state.evader
        p = state.pursuer.position
        candidates = list(state.q.vertices)
        if state.guard is not None:
            g = state.guard
            candidates = [v for v in candidates
                          if geo.dot(geo.sub(v, g.chord.a), g.evader_normal) > POS_TOL]
        if not candidates:
            return e
        corner = max(candidates, key=lambda v: (geo.dist(v, p), v))
        d = geo.dist(e, corner)
        if d <= POS_TOL:
            return e
        step = min(state.epsilon, d)
        target = geo.add(e, geo.scale(geo.unit(geo.sub(corner, e)), step))
        return _clip_into(state.q, e, target)


class ProjectionPusher(EvaderPolicy):
    """Adversary for the establishment bound: always drags its projection
    along the chord, away from the pursuer, at full speed."""

    id = "projection_pusher"

    def propose(self, state: GameState) -> Point:
        e = state.evader
        chord = state.initial_chord if state.guard is None else state.guard.chord
        proj = geo.closest_point_on_segment(e, chord)
        d = chord.direction
        away = geo.dot(geo.sub(proj, state.pursuer.position), d)
        sign = 1.0 if away >= 0 else -1.0
        target = geo.add(e, geo.scale(d, sign * state.epsilon))
        clipped = _clip_into(state.q, e, target)
        if geo.dist(clipped, e) <= POS_TOL:
            # no room left in this direction: reverse
            target = geo.add(e, geo.scale(d, -sign * state.epsilon))
            clipped = _clip_into(state.q, e, target)
        return clipped


class ScriptedPolicy(EvaderPolicy):
    id = "scripted"

    def __init__(self, targets: list[Point]):
        self.targets = list(targets)
        self.cursor = 0

    def propose(self, state: GameState) -> Point:
        if self.cursor >= len(self.targets):
            return state.evader
        t = self.targets[self.cursor]
        self.cursor += 1
        return (float(t[0]), float(t[1]))


class ExternalPolicy(EvaderPolicy):
    """Moves arrive via the session service; run() cannot drive this one."""

    id = "external"

    def propose(self, state: GameState) -> Point:
        raise EngineError("external evader moves must be submitted explicitly")


_POLICY_FACTORIES = {
    "random": RandomPolicy,
    "greedy_runner": GreedyRunner,
    "threshold_dancer": ThresholdDancer,
    "corner_hugger": CornerHugger,
    "projection_pusher": ProjectionPusher,
    "external": ExternalPolicy,
}


def make_policy(policy_id: str, targets: list[Point] | None = None) -> EvaderPolicy:
    if policy_id == "scripted":
        return ScriptedPolicy(targets or [])
    try:
        return _POLICY_FACTORIES[policy_id]()
    except KeyError:
        raise ValueError(f"unknown evader policy: {policy_id}") from None
