import type { Point } from "./types.js";

export function dist(a: Point, b: Point): number {
    return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

/** Point-in-convex-polygon for counter-clockwise vertices. */
export function insideConvex(vertices: Point[], p: Point, tol = 1e-9): boolean {
    const n = vertices.length;
    for (let i = 0; i < n; i++) {
        const a = vertices[i];
        const b = vertices[(i + 1) % n];
        const cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        if (cross < -tol) return false;
    }
    return true;
}

/** Clip a convex polygon to the half-plane dot(p - anchor, normal) >= 0. */
export function clipHalfPlane(vertices: Point[], anchor: Point, normal: Point): Point[] {
    const out: Point[] = [];
    const n = vertices.length;
    for (let i = 0; i < n; i++) {
        const cur = vertices[i];
        const nxt = vertices[(i + 1) % n];
        const dc = (cur[0] - anchor[0]) * normal[0] + (cur[1] - anchor[1]) * normal[1];
        const dn = (nxt[0] - anchor[0]) * normal[0] + (nxt[1] - anchor[1]) * normal[1];
        if (dc >= -1e-9) out.push(cur);
        if ((dc > 1e-9 && dn < -1e-9) || (dc < -1e-9 && dn > 1e-9)) {
            const t = dc / (dc - dn);
            out.push([cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])]);
        }
    }
    return out;
}
