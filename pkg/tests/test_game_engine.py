import json
import math
import random

import pytest

from chordguard import geometry as geo
from chordguard.ddr_motion import Pose
from chordguard.game_engine import (
    EngineError,
    IllegalMove,
    StartInCollision,
    StartOutside,
    TraceRecord,
    _first_contact,
    band_height,
    evader_turn,
    make_policy,
    monitors,
    new_game,
    pursuer_turn,
    run,
    theoretical_step_bound,
    write_trace,
)
from chordguard.geometry import ConvexPolygon, EmptyWorkspace
from chordguard.guard_strategy import StrategyConstants

from conftest import make_guarding_state, square_workspace


def fresh_square_game(policy="random", seed=0, pursuer=Pose(2.0, 2.0, 0.0),
                      evader=(15.0, 15.0)):
    return new_game(square_workspace(20.0), pursuer, evader,
                    make_policy(policy), seed=seed)


class TestNewGame:
    def test_valid_start(self):
        state = fresh_square_game()
        assert state.phase == "approach"
        assert state.step == 0
        assert sorted(state.q.vertices) == [(1.0, 1.0), (1.0, 19.0),
                                            (19.0, 1.0), (19.0, 19.0)]

    def test_start_in_collision(self):
        with pytest.raises(StartInCollision):
            fresh_square_game(evader=(3.0, 3.0))

    def test_empty_workspace(self):
        w = ConvexPolygon(((0.0, 0.0), (1.5, 0.0), (1.5, 1.5), (0.0, 1.5)))
        with pytest.raises(EmptyWorkspace):
            new_game(w, Pose(0.7, 0.7, 0.0), (0.8, 0.8), make_policy("random"))

    def test_start_outside_eroded_space(self):
        with pytest.raises(StartOutside):
            fresh_square_game(pursuer=Pose(0.5, 0.5, 0.0))
        with pytest.raises(StartOutside):
            fresh_square_game(evader=(19.5, 10.0))

    def test_epsilon_range(self):
        w = square_workspace(20.0)
        with pytest.raises(ValueError):
            new_game(w, Pose(2, 2, 0), (15, 15), make_policy("random"), epsilon=0.0)
        with pytest.raises(ValueError):
            new_game(w, Pose(2, 2, 0), (15, 15), make_policy("random"), epsilon=1.5)


class TestFirstContact:
    def test_crossing_move(self):
        c = _first_contact((4.5, 0.0), (3.5, 0.0), (2.0, 0.0), 2.0)
        assert c == pytest.approx((4.0, 0.0))

    def test_no_contact(self):
        assert _first_contact((5.0, 5.0), (6.0, 5.0), (0.0, 0.0), 2.0) is None

    def test_already_inside(self):
        assert _first_contact((1.0, 0.0), (3.0, 0.0), (0.0, 0.0), 2.0) == (1.0, 0.0)

    def test_grazing_midpath(self):
        # endpoints outside the disk, the middle dips inside
        c = _first_contact((1.95, 1.0), (1.95, -1.0), (0.0, 0.0), 2.0)
        assert c is not None
        assert geo.dist(c, (0.0, 0.0)) == pytest.approx(2.0, abs=1e-9)


class TestEvaderTurn:
    def test_legal_move_advances(self):
        state = fresh_square_game()
        evader_turn(state, (15.5, 15.0))
        assert state.evader == (15.5, 15.0)
        assert state.step == 1
        assert state.next_actor == "pursuer"
        assert not state.captured

    def test_too_long_rejected_not_clamped(self):
        state = fresh_square_game()
        with pytest.raises(IllegalMove):
            evader_turn(state, (16.2, 15.0))
        assert state.evader == (15.0, 15.0)
        assert state.step == 0

    def test_outside_q_rejected(self):
        state = fresh_square_game(evader=(18.5, 15.0))
        with pytest.raises(IllegalMove):
            evader_turn(state, (19.4, 15.0))

    def test_walk_into_capture_disk(self):
        state = fresh_square_game(evader=(5.0, 2.0))
        evader_turn(state, (4.0, 2.0))
        assert state.captured
        assert state.captured_by == "evader"
        # stopped at first contact with the disk boundary, not the target
        assert geo.dist(state.evader, (2.0, 2.0)) == pytest.approx(2.0, abs=1e-9)

    def test_tunneling_through_disk_detected(self):
        state = fresh_square_game(pursuer=Pose(5.0, 5.0, 0.0), evader=(6.95, 5.5))
        evader_turn(state, (6.95, 4.5))
        assert state.captured
        assert state.evader[1] > 4.5

    def test_wrong_actor(self):
        state = fresh_square_game()
        evader_turn(state, (15.5, 15.0))
        with pytest.raises(EngineError):
            evader_turn(state, (15.0, 15.0))


class TestPhaseProgression:
    def test_approach_establish_guard_capture(self):
        state = fresh_square_game(policy="scripted", pursuer=Pose(3.0, 5.0, 1.0),
                                  evader=(4.0, 16.0))
        state.policy = make_policy("scripted", targets=[])
        seen = set()
        guard_before = None
        for _ in range(5000):
            if state.captured:
                break
            evader_turn(state, state.policy.propose(state))
            if state.captured:
                break
            pursuer_turn(state)
            seen.add(state.phase)
            if state.phase == "guarding" and guard_before is None:
                guard_before = state.guard
        assert state.captured
        assert {"establishing", "guarding", "captured"} <= seen
        assert not state.violations
        # guard line advanced from where it started
        assert state.guard.chord != guard_before.chord

    def test_stationary_evader_zigzags_every_turn(self):
        state = make_guarding_state(random.Random(7))
        state.next_actor = "evader"
        for _ in range(5):
            evader_turn(state, state.evader)  # refuses to move
            pursuer_turn(state)
            if state.captured:
                break
            assert state.last_case == "zigzag-negative"
        pursuer_records = [r for r in state.event_log if r.actor == "pursuer"]
        for rec in pursuer_records:
            if rec.case == "zigzag-negative" and not rec.captured:
                assert rec.v_progress >= state.constants.k_v - 1e-6
        assert not state.violations

    def test_crossing_attempt_captured_next_turn(self):
        # dip under the safe margin while staying outside the capture disk:
        # the guard response settles opposite the new projection and wins
        state = make_guarding_state(random.Random(8), max_height=2.15)
        state.next_actor = "evader"
        n = state.guard.evader_normal
        origin = geo.closest_point_on_segment(state.evader, state.guard.chord)
        forward = geo.unit(geo.sub(origin, state.pursuer.position))
        target = geo.add(state.evader,
                         geo.add(geo.scale(forward, 0.95), geo.scale(n, -0.31)))
        assert state.q.contains(target, tol=1e-9)
        evader_turn(state, target)
        assert not state.captured  # the dip itself stays clear of the disk
        pursuer_turn(state)
        assert state.captured
        assert state.captured_by == "pursuer"
        assert state.last_case == "breach-capture"


class TestMonitors:
    def guarding_state(self, seed=21):
        state = make_guarding_state(random.Random(seed))
        state.prev_band_height = band_height(state.q, state.guard)
        return state

    def test_healthy_state_clean(self):
        assert monitors(self.guarding_state()) == []

    def test_heading_fault(self):
        state = self.guarding_state()
        p = state.pursuer
        state.pursuer = Pose(p.x, p.y, p.theta + 0.01)
        assert any(v.startswith("Invariant1Violation") for v in monitors(state))

    def test_projection_distance_fault(self):
        state = self.guarding_state()
        p = state.pursuer
        d = state.guard.direction
        state.pursuer = Pose(p.x + 0.01 * d[0], p.y + 0.01 * d[1], p.theta)
        assert any(v.startswith("Invariant2Violation") for v in monitors(state))

    def test_containment_fault(self):
        state = self.guarding_state()
        n = state.guard.evader_normal
        height = geo.dot(geo.sub(state.evader, state.guard.chord.a), n)
        state.evader = geo.sub(state.evader, geo.scale(n, height + 0.1))
        out = monitors(state)
        assert any(v.startswith("ContainmentViolation") for v in out)

    def test_pursuer_outside_fault(self):
        state = self.guarding_state()
        state.pursuer = Pose(0.2, 0.2, state.pursuer.theta)
        assert any(v.startswith("PursuerOutsideViolation") for v in monitors(state))

    def test_band_growth_fault(self):
        state = self.guarding_state()
        state.prev_band_height = band_height(state.q, state.guard) - 0.5
        assert any(v.startswith("BandGrowthViolation") for v in monitors(state))


class TestStepBound:
    def test_square_20(self):
        q = ConvexPolygon(((1.0, 1.0), (19.0, 1.0), (19.0, 19.0), (1.0, 19.0)))
        assert theoretical_step_bound(q, StrategyConstants()) == 742_586

    def test_diam_5(self):
        s = 5.0 / math.sqrt(2.0)
        q = ConvexPolygon(((0.0, 0.0), (s, 0.0), (s, s), (0.0, s)))
        assert theoretical_step_bound(q, StrategyConstants()) == 28_895

    def test_epsilon_scaling_quadruples_product_term(self):
        q = ConvexPolygon(((1.0, 1.0), (19.0, 1.0), (19.0, 19.0), (1.0, 19.0)))
        diam = 18.0 * math.sqrt(2.0)
        product = 455 * 1632
        expected = math.ceil(diam / 0.5) + 4 * product
        assert theoretical_step_bound(q, StrategyConstants(), epsilon=0.5) == expected


class TestRun:
    def test_bound_exceeded_flag(self):
        state = fresh_square_game(policy="greedy_runner", seed=3)
        state, _ = run(state, max_steps=3)
        assert not state.captured
        assert state.bound_exceeded

    def test_capture_and_counters(self):
        state = fresh_square_game(policy="greedy_runner", seed=7, evader=(4.0, 16.0))
        state, trace = run(state)
        assert state.captured
        assert not state.bound_exceeded
        assert not state.violations
        assert state.guarding_rounds <= theoretical_step_bound(state.q, state.constants)
        assert trace[-1].captured

    def test_same_seed_same_trace(self):
        a, _ = run(fresh_square_game(policy="random", seed=42, evader=(4.0, 16.0)))
        b, _ = run(fresh_square_game(policy="random", seed=42, evader=(4.0, 16.0)))
        assert [r.to_json_line() for r in a.event_log] == \
               [r.to_json_line() for r in b.event_log]

    def test_different_seed_diverges(self):
        a, _ = run(fresh_square_game(policy="random", seed=1, evader=(4.0, 16.0)))
        b, _ = run(fresh_square_game(policy="random", seed=2, evader=(4.0, 16.0)))
        assert [r.to_json_line() for r in a.event_log] != \
               [r.to_json_line() for r in b.event_log]


class TestTrace:
    def test_json_line_schema(self):
        rec = TraceRecord(step=3, actor="pursuer", x=1.0, y=2.0, theta=0.5,
                          case="horizontal-follow", shift=0.4, v_progress=0.0,
                          band_height=7.0, captured=False)
        line = rec.to_json_line()
        assert list(json.loads(line).keys()) == [
            "step", "actor", "x", "y", "theta", "case", "shift",
            "v_progress", "band_height", "captured"]

    def test_write_trace_round_trips(self, tmp_path):
        state, trace = run(fresh_square_game(policy="corner_hugger", seed=5,
                                             evader=(4.0, 16.0)))
        out = tmp_path / "trace.jsonl"
        write_trace(trace, str(out))
        lines = out.read_text().splitlines()
        assert len(lines) == len(trace)
        assert lines[0] == trace[0].to_json_line()


class TestPolicies:
    @pytest.mark.parametrize("policy_id", ["random", "greedy_runner",
                                           "threshold_dancer", "corner_hugger",
                                           "projection_pusher"])
    def test_policies_propose_legal_moves(self, policy_id):
        state = fresh_square_game(policy=policy_id, seed=11, evader=(4.0, 16.0))
        for _ in range(40):
            if state.captured:
                break
            target = state.policy.propose(state)
            assert geo.dist(state.evader, target) <= state.epsilon + 1e-9
            assert state.q.contains(target, tol=1e-9)
            evader_turn(state, target)
            if not state.captured:
                pursuer_turn(state)

    def test_scripted_policy_replays_then_holds(self):
        state = fresh_square_game(policy="scripted", evader=(4.0, 16.0))
        state.policy = make_policy("scripted", targets=[(4.5, 16.0)])
        assert state.policy.propose(state) == (4.5, 16.0)
        assert state.policy.propose(state) == state.evader

    def test_external_policy_refuses_to_propose(self):
        state = fresh_square_game(policy="external")
        with pytest.raises(EngineError):
            state.policy.propose(state)

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            make_policy("clairvoyant")
