import { describe, expect, it } from "vitest";
import { clipHalfPlane, dist, insideConvex } from "../src/geometry.js";
import type { Point } from "../src/types.js";

const SQUARE: Point[] = [[0, 0], [4, 0], [4, 4], [0, 4]];

describe("dist", () => {
    it("computes euclidean distance", () => {
        expect(dist([0, 0], [3, 4])).toBeCloseTo(5, 12);
    });
});

describe("insideConvex", () => {
    it("accepts interior and boundary points", () => {
        expect(insideConvex(SQUARE, [2, 2])).toBe(true);
        expect(insideConvex(SQUARE, [0, 0])).toBe(true);
        expect(insideConvex(SQUARE, [4, 2])).toBe(true);
    });

    it("rejects exterior points", () => {
        expect(insideConvex(SQUARE, [4.01, 2])).toBe(false);
        expect(insideConvex(SQUARE, [-0.1, 1])).toBe(false);
        expect(insideConvex(SQUARE, [2, 5])).toBe(false);
    });
});

describe("clipHalfPlane", () => {
    it("cuts a square along a horizontal line", () => {
        const upper = clipHalfPlane(SQUARE, [0, 1], [0, 1]);
        expect(upper.length).toBe(4);
        for (const [, y] of upper) expect(y).toBeGreaterThanOrEqual(1 - 1e-9);
        const area = polygonArea(upper);
        expect(area).toBeCloseTo(12, 9);
    });

    it("returns the whole polygon when fully inside", () => {
        const out = clipHalfPlane(SQUARE, [0, -1], [0, 1]);
        expect(polygonArea(out)).toBeCloseTo(16, 9);
    });

    it("returns nothing when fully outside", () => {
        expect(clipHalfPlane(SQUARE, [0, 5], [0, 1]).length).toBe(0);
    });
});

function polygonArea(vertices: Point[]): number {
    let area = 0;
    for (let i = 0; i < vertices.length; i++) {
        const [x1, y1] = vertices[i];
        const [x2, y2] = vertices[(i + 1) % vertices.length];
        area += x1 * y2 - x2 * y1;
    }
    return Math.abs(area) / 2;
}
