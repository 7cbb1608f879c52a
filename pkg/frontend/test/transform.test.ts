import { describe, expect, it } from "vitest";
import { Transform } from "../src/transform.js";
import type { Point } from "../src/types.js";

const SQUARE: Point[] = [[0, 0], [20, 0], [20, 20], [0, 20]];

describe("Transform", () => {
    it("round-trips world coordinates through screen space", () => {
        const t = new Transform(SQUARE, 860, 640);
        for (const p of [[0, 0], [20, 20], [3.25, 17.5], [10, 10]] as Point[]) {
            const back = t.toWorld(t.toScreen(p));
            expect(back[0]).toBeCloseTo(p[0], 9);
            expect(back[1]).toBeCloseTo(p[1], 9);
        }
    });

    it("preserves aspect ratio for non-square arenas", () => {
        const t = new Transform([[0, 0], [40, 0], [40, 10], [0, 10]], 800, 600);
        const a = t.toScreen([0, 0]);
        const b = t.toScreen([40, 0]);
        const c = t.toScreen([0, 10]);
        const sx = Math.abs(b[0] - a[0]) / 40;
        const sy = Math.abs(c[1] - a[1]) / 10;
        expect(sx).toBeCloseTo(sy, 9);
    });

    it("keeps the arena inside the canvas with padding", () => {
        const t = new Transform(SQUARE, 860, 640);
        for (const p of SQUARE) {
            const [x, y] = t.toScreen(p);
            expect(x).toBeGreaterThanOrEqual(0);
            expect(x).toBeLessThanOrEqual(860);
            expect(y).toBeGreaterThanOrEqual(640 * 0.05 - 1e-9);
            expect(y).toBeLessThanOrEqual(640 * 0.95 + 1e-9);
        }
    });

    it("flips the y axis (world up is screen up)", () => {
        const t = new Transform(SQUARE, 860, 640);
        const low = t.toScreen([10, 2]);
        const high = t.toScreen([10, 18]);
        expect(high[1]).toBeLessThan(low[1]);
    });
});
