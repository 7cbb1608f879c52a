"""The pursuer's brain.

Once the robot guards a chord (heading parallel to it, sitting half a unit
from the evader's projection), each of its turns falls into one of four
cases: capture a breaching evader, zig-zag the guarded line toward the
evader when the projection shift is negative or below the horizontal
threshold, or follow the projection sideways. The zig-zag advances the
guarded chord by a guaranteed amount per turn, so the evader's region
shrinks until no safe position remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from . import geometry as geo
from .ddr_motion import Rotate, Translate, TurnPlan
from .geometry import Chord, ConvexPolygon, Point
from .scalar_solver import find_root_monotone, maximize_unimodal

if TYPE_CHECKING:  # pragma: no cover
    from .game_engine import GameState


class StrategyError(Exception):
    pass


class InvariantViolated(StrategyError):
    """Guarding preconditions do not hold."""


class NonPositiveBudget(StrategyError):
    """Zig-zag time budget cannot pay for the requested rotations."""


class InfeasiblePlan(StrategyError):
    """Internal consistency failure; any occurrence is a bug."""


class NotPursuerTurn(StrategyError):
    pass


POS_TOL = 1e-9
INV_TOL = 1e-6


@dataclass(frozen=True)
class GuardLine:
    """The guarded chord plus the unit normal pointing into the evader's region."""

    chord: Chord
    evader_normal: Point

    @property
    def direction(self) -> Point:
        return self.chord.direction


@dataclass(frozen=True)
class LocalFrame:
    """Per-turn frame: origin at the evader's pre-move projection, +x from
    the pursuer toward the origin (so the pursuer sits at x = -1/2)."""

    origin: Point
    forward: Point
    chord: Chord


@dataclass(frozen=True)
class Classification:
    positive: bool
    shift: float


def progress_objective(budget: float):
    """Vertical advance of a zig-zag with the given time budget, as a
    function of the rotation angle."""
    return lambda alpha: (budget - 2.0 * alpha) * math.tan(alpha / 2.0)


def max_progress(budget: float, tol: float = 1e-10) -> tuple[float, float]:
    """(alpha, advance) maximizing the zig-zag objective for a budget."""
    res = maximize_unimodal(progress_objective(budget), 0.0, math.pi / 2.0, tol)
    return res.argmax, res.max_value


@dataclass(frozen=True)
class StrategyConstants:
    """Numeric constants of the strategy, derivable from first principles.

    Defaults are the published reference values for a unit turn duration;
    ``derive`` recomputes them numerically.
    """

    k_v: float = 0.0156
    k_h: float = 0.056
    alpha_star: float = 0.1251
    alpha_kh: float = 0.2371
    d_guard: float = 0.5
    settle_threshold: float = 1.5
    safe_margin: float = math.sqrt(15.0) / 2.0
    r_capture: float = 2.0

    def __post_init__(self):
        for name in ("k_v", "k_h", "alpha_star", "alpha_kh", "d_guard",
                     "settle_threshold", "safe_margin", "r_capture"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        gap = self.safe_margin ** 2 + self.d_guard ** 2 - self.r_capture ** 2
        if abs(gap) > 1e-12:
            raise ValueError("safe_margin^2 + d_guard^2 must equal r_capture^2")

    @classmethod
    def derive(cls, epsilon: float = 1.0) -> "StrategyConstants":
        """Recompute the constants for a turn of duration epsilon.

        The worst zig-zag budget occurs when the whole guard-restoring
        translation (up to 1/2) competes with the zig-zag itself.
        """
        worst_budget = epsilon - min(epsilon, 0.5)
        if worst_budget > 0:
            alpha_star, k_v = max_progress(worst_budget)
        else:
            alpha_star, k_v = 1e-12, 1e-12  # degenerate: tiny turns

        def follow_gap(d: float) -> float:
            return max_progress(epsilon - d)[1] - d

        k_h = find_root_monotone(follow_gap, 0.0, epsilon / 2.0, tol=1e-8)
        alpha_kh = max_progress(epsilon - k_h)[0]
        return cls(k_v=k_v, k_h=k_h, alpha_star=alpha_star, alpha_kh=alpha_kh,
                   settle_threshold=0.5 + epsilon)


@dataclass(frozen=True)
class TurnDecision:
    case: str  # establishing | breach-capture | zigzag-negative | zigzag-small-positive | horizontal-follow
    plan: TurnPlan
    predicted_vertical_progress: float = 0.0
    new_guard_line: GuardLine | None = None
    shift: float | None = None


def local_frame(guard: GuardLine, pursuer, evader_before: Point) -> LocalFrame:
    """Frame for classifying the evader's move; requires Invariants 1-2."""
    origin = geo.closest_point_on_segment(evader_before, guard.chord)
    p = (pursuer.x, pursuer.y)
    d = geo.dist(p, origin)
    if abs(d - 0.5) > INV_TOL:
        raise InvariantViolated(f"pursuer is {d:.6f} from the projection, not 1/2")
    forward = geo.unit(geo.sub(origin, p))
    return LocalFrame(origin=origin, forward=forward, chord=guard.chord)


def classify(frame: LocalFrame, evader_after: Point) -> Classification:
    """Signed x-coordinate of the evader's new projection; the origin itself
    counts as negative."""
    new_proj = geo.closest_point_on_segment(evader_after, frame.chord)
    shift = geo.dot(geo.sub(new_proj, frame.origin), frame.forward)
    return Classification(positive=shift > 0.0, shift=shift)


def establishment_step(q: ConvexPolygon, chord: Chord, pursuer,
                       target_proj: Point, epsilon: float = 1.0) -> TurnPlan:
    """One establishing move along the chord toward the evader's projection.

    Far away (beyond 1/2 + epsilon) the robot takes a full step; otherwise it
    settles at exactly 1/2 from the projection on its current side.
    """
    p = (pursuer.x, pursuer.y)
    d = geo.dist(p, target_proj)
    if abs(d - 0.5) <= POS_TOL:
        return TurnPlan(())
    direction = chord.direction
    along = geo.dot(geo.sub(target_proj, p), direction)  # signed chord coordinate of the projection
    if d > 0.5 + epsilon:
        move = epsilon if along > 0 else -epsilon
    else:
        # settle at 1/2 on the current side of the projection
        side = 1.0 if along >= 0 else -1.0
        move = side * (d - 0.5)
        move = max(-epsilon, min(epsilon, move))
    move = _clamp_to_chord(chord, p, move, direction)
    if abs(move) <= POS_TOL:
        return TurnPlan(())
    sign = _heading_sign(pursuer, direction)
    return TurnPlan((Translate(move * sign),))


def _heading_sign(pursuer, direction: Point) -> float:
    h = pursuer.heading
    s = geo.dot(h, direction)
    if abs(abs(s) - 1.0) > 1e-6:
        raise InvariantViolated("pursuer heading is not parallel to the chord")
    return 1.0 if s > 0 else -1.0


def _clamp_to_chord(chord: Chord, p: Point, move: float,
                    direction: Point) -> float:
    """Keep a translation of ``move`` along ``direction`` on the chord;
    overshoots beyond tolerance are bugs."""
    lo = 0.0
    hi = geo.dot(geo.sub(chord.b, chord.a), direction)
    lo, hi = min(lo, hi), max(lo, hi)
    cur = geo.dot(geo.sub(p, chord.a), direction)
    t = cur + move
    if t < lo - 1e-7 or t > hi + 1e-7:
        raise InfeasiblePlan("translation target leaves the guarded chord")
    return max(lo, min(hi, t)) - cur


def zigzag_plan(budget: float, alpha: float, restore_translate: float,
                rotation_sign: float, heading_sign: float) -> TurnPlan:
    """Zig-zag: rotate, advance, rotate back, reverse, then restore sideways.

    ``budget`` is the time available for the zig-zag proper (the restore leg
    is paid separately); ``rotation_sign`` picks the world rotation direction
    that tilts the heading toward the evader's side; ``restore_translate`` is
    the signed slide along the new line (in frame +x units) and
    ``heading_sign`` maps frame +x onto the robot's forward axis.
    """
    if budget <= 2.0 * alpha:
        raise NonPositiveBudget(
            f"budget {budget:.6f} cannot pay for two rotations of {alpha:.6f}")
    d_pt = (budget - 2.0 * alpha) / (1.0 + math.cos(alpha))
    prims: list[Rotate | Translate] = [
        Rotate(rotation_sign * alpha),
        Translate(d_pt),
        Rotate(-rotation_sign * alpha),
        Translate(-d_pt * math.cos(alpha)),
    ]
    if restore_translate != 0.0:
        prims.append(Translate(restore_translate * heading_sign))
    return TurnPlan(tuple(prims))


def vertical_progress_floor(case: str, value: float,
                            epsilon: float = 1.0) -> float:
    """Analytic lower bound on the vertical advance for a zig-zag case.

    For the negative case ``value`` is the post-zig-zag distance to the
    projection; for the small-positive case it is the projection shift.
    """
    if case == "zigzag-negative":
        budget = epsilon - (0.5 - value)
    elif case == "zigzag-small-positive":
        budget = epsilon - value
    else:
        raise ValueError(f"not a zig-zag case: {case}")
    return max_progress(budget)[1]


def plan_turn(state: "GameState",
              constants: StrategyConstants | None = None) -> TurnDecision:
    """Select and build the pursuer's reply to the evader's last move."""
    if state.next_actor != "pursuer":
        raise NotPursuerTurn("it is not the pursuer's turn")
    constants = constants or state.constants
    epsilon = state.epsilon
    guard = state.guard
    pursuer = state.pursuer
    evader = state.evader
    chord = guard.chord if guard is not None else state.initial_chord

    # (1) breach response: the evader came too close to the guarded line
    proj = geo.closest_point_on_segment(evader, chord)
    d_line = geo.dist(evader, proj)
    if state.phase == "guarding" and d_line < constants.safe_margin:
        frame = local_frame(guard, pursuer, state.evader_prev)
        shift = classify(frame, evader).shift
        x_p = geo.dot(geo.sub((pursuer.x, pursuer.y), frame.origin), frame.forward)
        target_x = shift - 0.5 if x_p <= shift else shift + 0.5
        delta = target_x - x_p
        if abs(delta) > epsilon + POS_TOL:
            raise InfeasiblePlan("breach settle point is out of reach")
        sign = _heading_sign(pursuer, frame.forward)
        plan = TurnPlan((Translate(delta * sign),) if abs(delta) > POS_TOL else ())
        return TurnDecision(case="breach-capture", plan=plan, shift=shift)

    # (2) invariants not yet established: keep chasing the projection
    if state.phase != "guarding":
        plan = establishment_step(state.q, chord, pursuer, proj, epsilon)
        return TurnDecision(case="establishing", plan=plan)

    frame = local_frame(guard, pursuer, state.evader_prev)
    cls = classify(frame, evader)
    shift = cls.shift
    x_p = geo.dot(geo.sub((pursuer.x, pursuer.y), frame.origin), frame.forward)

    # (5) large positive shift: slide along the line, no vertical progress
    if cls.positive and shift >= constants.k_h:
        sign = _heading_sign(pursuer, frame.forward)
        p = (pursuer.x, pursuer.y)
        move = _clamp_to_chord(chord, p, (shift - 0.5) - x_p, frame.forward)
        plan = TurnPlan((Translate(move * sign),))
        return TurnDecision(case="horizontal-follow", plan=plan, shift=shift)

    # (3)/(4) zig-zag: advance the guarded line toward the evader
    if cls.positive:
        case = "zigzag-small-positive"
        restore = (shift - 0.5) - x_p
    else:
        case = "zigzag-negative"
        target_x = shift - 0.5 if x_p <= shift else shift + 0.5
        restore = target_x - x_p
    budget = epsilon - abs(restore)
    alpha, progress = max_progress(budget)
    if progress <= POS_TOL or budget <= 2.0 * alpha:
        # zero-advance corner (only reachable for tiny epsilon): just restore
        sign = _heading_sign(pursuer, frame.forward)
        plan = TurnPlan((Translate(restore * sign),) if abs(restore) > POS_TOL else ())
        return TurnDecision(case="horizontal-follow", plan=plan, shift=shift)

    heading = pursuer.heading
    rot_sign = 1.0 if geo.cross(heading, guard.evader_normal) > 0 else -1.0
    head_sign = _heading_sign(pursuer, frame.forward)
    plan = zigzag_plan(budget, alpha, restore, rot_sign, head_sign)

    lifted = geo.add((pursuer.x, pursuer.y),
                     geo.scale(guard.evader_normal, progress))
    try:
        new_chord = geo.chord_through(state.q, lifted, chord.direction)
    except geo.PointOutside as exc:
        raise InfeasiblePlan(f"advanced guard position {lifted} left the arena") from exc
    new_guard = GuardLine(chord=new_chord, evader_normal=guard.evader_normal)
    # the restore leg must stay on the advanced chord
    _clamp_to_chord(new_chord, lifted, restore, frame.forward)
    return TurnDecision(case=case, plan=plan,
                        predicted_vertical_progress=progress,
                        new_guard_line=new_guard, shift=shift)
