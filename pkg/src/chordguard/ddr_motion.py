"""Differential-drive kinematics: poses, motion primitives, turn budgets.

The robot rotates in place and translates in separate legs, each at maximal
speed, so a rotation by ``a`` costs ``|a| * R / v_max`` seconds and a
translation by ``s`` costs ``|s| / v_max``. Reverse translation is allowed;
the control space is symmetric in v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

TIME_TOL = 1e-9


class MotionError(Exception):
    pass


class BudgetExceeded(MotionError):
    """Plan does not fit in the turn duration."""


class EnvelopeViolation(MotionError):
    """Commanded (v, omega) pair is outside the feasible envelope."""


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    t = math.fmod(theta, 2.0 * math.pi)
    if t <= -math.pi:
        t += 2.0 * math.pi
    elif t > math.pi:
        t -= 2.0 * math.pi
    return t


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def heading(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class SpeedLimits:
    v_max: float = 1.0
    wheel_radius: float = 1.0
    axle_half_length: float = 1.0

    def __post_init__(self):
        if self.v_max <= 0 or self.wheel_radius <= 0 or self.axle_half_length <= 0:
            raise ValueError("speed limits must be strictly positive")


@dataclass(frozen=True)
class Rotate:
    """Rotate in place by a signed angle (radians, CCW positive)."""
    angle: float

    def time_cost(self, limits: SpeedLimits) -> float:
        return abs(self.angle) * limits.axle_half_length / limits.v_max


@dataclass(frozen=True)
class Translate:
    """Drive straight a signed distance along the current heading."""
    distance: float

    def time_cost(self, limits: SpeedLimits) -> float:
        return abs(self.distance) / limits.v_max


MotionPrimitive = Rotate | Translate


@dataclass(frozen=True)
class TurnPlan:
    primitives: tuple[MotionPrimitive, ...] = field(default_factory=tuple)

    def reversed(self) -> "TurnPlan":
        """Undo plan: negated primitives in reverse order."""
        rev: list[MotionPrimitive] = []
        for prim in reversed(self.primitives):
            if isinstance(prim, Rotate):
                rev.append(Rotate(-prim.angle))
            else:
                rev.append(Translate(-prim.distance))
        return TurnPlan(tuple(rev))


def plan_time(plan: TurnPlan, limits: SpeedLimits = SpeedLimits()) -> float:
    return sum(p.time_cost(limits) for p in plan.primitives)


def execute(pose: Pose, plan: TurnPlan, budget: float = 1.0,
            limits: SpeedLimits = SpeedLimits()) -> tuple[Pose, list[tuple[tuple[float, float], tuple[float, float]]]]:
    """Apply primitives in order; returns the final pose and swept segments.

    Each translation contributes one (start, end) segment used for the
    continuous capture check. Raises BudgetExceeded when the plan does not
    fit the turn duration.
    """
    t = plan_time(plan, limits)
    if t > budget + TIME_TOL:
        raise BudgetExceeded(f"plan time {t:.9f} exceeds budget {budget}")
    x, y, theta = pose.x, pose.y, pose.theta
    swept: list[tuple[tuple[float, float], tuple[float, float]]] = []
    for prim in plan.primitives:
        if isinstance(prim, Rotate):
            theta = normalize_angle(theta + prim.angle)
        else:
            nx = x + prim.distance * math.cos(theta)
            ny = y + prim.distance * math.sin(theta)
            swept.append(((x, y), (nx, ny)))
            x, y = nx, ny
    return Pose(x, y, theta), swept


def wheel_speeds(v: float, omega: float,
                 limits: SpeedLimits = SpeedLimits()) -> tuple[float, float]:
    """Convert a body-frame command to per-wheel angular velocities.

    Raises EnvelopeViolation when |omega| > (v_max - |v|) / R, i.e. the
    command asks for more turning than the remaining speed budget allows.
    """
    bound = (limits.v_max - abs(v)) / limits.axle_half_length
    if abs(omega) > bound + TIME_TOL:
        raise EnvelopeViolation(
            f"|omega|={abs(omega):.6f} exceeds {bound:.6f} at |v|={abs(v):.6f}")
    w1 = (v - limits.axle_half_length * omega) / limits.wheel_radius
    w2 = (v + limits.axle_half_length * omega) / limits.wheel_radius
    return (w1, w2)
