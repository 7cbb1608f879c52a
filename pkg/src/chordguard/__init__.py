"""Turn-based pursuit-evasion simulator: a differential drive robot captures
an equal-speed omnidirectional evader in any convex arena by guarding and
advancing a chord of the playing space."""

from .ddr_motion import Pose, SpeedLimits, TurnPlan
from .game_engine import GameState, make_policy, new_game, run, theoretical_step_bound
from .geometry import Chord, ConvexPolygon, erode, longest_chord
from .guard_strategy import GuardLine, StrategyConstants, plan_turn

__all__ = [
    "Chord",
    "ConvexPolygon",
    "GameState",
    "GuardLine",
    "Pose",
    "SpeedLimits",
    "StrategyConstants",
    "TurnPlan",
    "erode",
    "longest_chord",
    "make_policy",
    "new_game",
    "plan_turn",
    "run",
    "theoretical_step_bound",
]
