import math
import random

import pytest

from chordguard import ConvexPolygon, Pose, new_game
from chordguard import geometry as geo
from chordguard.game_engine import GameState, band_height, make_policy
from chordguard.guard_strategy import GuardLine


def square_workspace(side: float = 20.0) -> ConvexPolygon:
    return ConvexPolygon(((0.0, 0.0), (side, 0.0), (side, side), (0.0, side)))


def skewed_quad() -> ConvexPolygon:
    return ConvexPolygon(((0.0, 0.0), (24.0, 2.0), (20.0, 18.0), (3.0, 14.0)))


def regular_heptagon(radius: float = 9.0) -> ConvexPolygon:
    cx = cy = 10.0
    return ConvexPolygon(tuple(
        (cx + radius * math.cos(2.0 * math.pi * k / 7 + 0.3),
         cy + radius * math.sin(2.0 * math.pi * k / 7 + 0.3))
        for k in range(7)))


def make_guarding_state(rng: random.Random, side: float = 20.0,
                        min_height: float | None = None,
                        max_height: float | None = None) -> GameState:
    """Random invariant-satisfying guarding state in a square arena.

    The guard line is drawn from the family parallel to the diagonal (the
    longest chord), where every projection is an interior perpendicular foot.
    """
    w = square_workspace(side)
    state = new_game(w, Pose(2.0, 2.0, 0.0), (side - 5.0, side - 5.0),
                     make_policy("random"), seed=rng.randrange(2 ** 31))
    q = state.q
    d = state.initial_chord.direction
    n = geo.unit(geo.perp_left(d))  # toward the upper-left triangle
    margin = state.constants.safe_margin
    if min_height is None:
        min_height = margin
    for _ in range(10_000):
        # lift the diagonal by a random offset, keeping enough band above it
        base = band_height(q, GuardLine(state.initial_chord, n))
        h = rng.uniform(0.0, max(0.0, base - min_height - 0.3))
        anchor = geo.add(geo.closest_point_on_segment(
            ((side / 2), (side / 2)), state.initial_chord), geo.scale(n, h))
        if not q.contains(anchor, tol=1e-9):
            continue
        chord = geo.chord_through(q, anchor, d)
        guard = GuardLine(chord, n)
        top = band_height(q, guard)
        if top < min_height + 0.2:
            continue
        hi = top - 0.05 if max_height is None else min(top - 0.05, max_height)
        if hi <= min_height + 0.05:
            continue
        height = rng.uniform(min_height + 0.05, hi)
        along = rng.uniform(0.0, chord.length)
        evader = geo.add(geo.add(chord.a, geo.scale(d, along)),
                         geo.scale(n, height))
        if not q.contains(evader, tol=1e-9):
            continue
        foot = geo.closest_point_on_segment(evader, chord)
        if geo.dist(foot, evader) < min_height:  # clamped foot: resample
            continue
        side_sign = rng.choice((-1.0, 1.0))
        p = geo.add(foot, geo.scale(d, side_sign * 0.5))
        t = geo.dot(geo.sub(p, chord.a), d)
        if t < 1e-6 or t > chord.length - 1e-6:
            continue
        heading = math.atan2(d[1], d[0])
        if rng.random() < 0.5:
            heading = heading + math.pi
        state.pursuer = Pose(p[0], p[1], heading)
        state.evader = evader
        state.evader_prev = evader
        state.guard = guard
        state.phase = "guarding"
        state.next_actor = "pursuer"
        state.prev_band_height = top
        return state
    raise RuntimeError("failed to sample a guarding state")


BATCH_POLICIES = ("random", "greedy_runner", "threshold_dancer", "corner_hugger")
BATCH_SEEDS = (0, 1, 2, 3, 4)


def batch_arenas() -> dict[str, ConvexPolygon]:
    return {
        "square20": square_workspace(20.0),
        "skewquad": skewed_quad(),
        "heptagon": regular_heptagon(),
    }


def batch_cases():
    for name, w in batch_arenas().items():
        for policy in BATCH_POLICIES:
            for seed in BATCH_SEEDS:
                yield name, w, policy, seed


def run_batch_case(w: ConvexPolygon, policy: str, seed: int):
    from chordguard.game_engine import run

    state = new_game(w, Pose(10.0, 3.0, 0.3), (4.0, 12.0),
                     make_policy(policy), seed=seed)
    return run(state)


@pytest.fixture
def square20() -> ConvexPolygon:
    return square_workspace(20.0)
