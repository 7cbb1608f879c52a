import { Api, ApiError } from "./api.js";
import { dist, insideConvex } from "./geometry.js";
import type { Point, StateView } from "./types.js";

/** Mediates between clicks and the session API: rejects illegal targets
 * locally (no request), allows one in-flight move at a time, and keeps the
 * latest server state plus a user-facing status line. */
export class GameController {
    state: StateView | null = null;
    pending = false;
    message = "";

    constructor(private api: Api, private onChange: () => void = () => {}) {}

    async newGame(vertices: Point[], pursuer: [number, number, number],
                  evader: Point, epsilon: number): Promise<void> {
        this.pending = true;
        this.message = "";
        this.onChange();
        try {
            this.state = await this.api.createSession({
                workspace: { vertices },
                pursuer_start: pursuer,
                evader_start: evader,
                epsilon,
            });
            this.message = `session ${this.state.session_id.slice(0, 8)} started`;
        } catch (err) {
            this.message = err instanceof ApiError ? err.detail : String(err);
        } finally {
            this.pending = false;
            this.onChange();
        }
    }

    /** True iff a click at `target` is a legal evader move given local state:
     * within the move radius and inside the eroded arena. */
    canMove(target: Point): boolean {
        const s = this.state;
        if (s === null || s.captured || this.pending) return false;
        if (dist([s.evader.x, s.evader.y], target) > s.move_radius + 1e-9) return false;
        return insideConvex(s.q_vertices, target);
    }

    /** Submit a move; returns the new state, or null if the click was
     * rejected locally and no request was sent. */
    async submitMove(target: Point): Promise<StateView | null> {
        const s = this.state;
        if (s === null || s.captured || this.pending) return null;
        if (!this.canMove(target)) {
            this.message = "illegal move: out of reach or outside the arena";
            this.onChange();
            return null;
        }
        this.pending = true;
        this.onChange();
        try {
            this.state = await this.api.move(s.session_id, target);
            this.message = this.state.captured
                ? `captured by ${this.state.captured_by} at step ${this.state.step}`
                : `step ${this.state.step} (${this.state.last_case ?? this.state.phase})`;
            return this.state;
        } catch (err) {
            this.message = err instanceof ApiError ? err.detail : String(err);
            return null;
        } finally {
            this.pending = false;
            this.onChange();
        }
    }

    get captureBanner(): string | null {
        if (this.state === null || !this.state.captured) return null;
        return `CAPTURED by ${this.state.captured_by ?? "?"} at step ${this.state.step}`;
    }
}
