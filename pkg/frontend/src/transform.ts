import type { Point } from "./types.js";

/** Aspect-preserving world-to-screen mapping with 5% padding; world y is up. */
export class Transform {
    readonly scale: number;
    readonly offsetX: number;
    readonly offsetY: number;

    constructor(worldVertices: Point[], readonly width: number, readonly height: number) {
        let xmin = Infinity, ymin = Infinity, xmax = -Infinity, ymax = -Infinity;
        for (const [x, y] of worldVertices) {
            xmin = Math.min(xmin, x);
            ymin = Math.min(ymin, y);
            xmax = Math.max(xmax, x);
            ymax = Math.max(ymax, y);
        }
        const padX = width * 0.05;
        const padY = height * 0.05;
        const spanX = Math.max(xmax - xmin, 1e-9);
        const spanY = Math.max(ymax - ymin, 1e-9);
        this.scale = Math.min((width - 2 * padX) / spanX, (height - 2 * padY) / spanY);
        // center the arena inside the canvas
        this.offsetX = (width - this.scale * spanX) / 2 - this.scale * xmin;
        this.offsetY = (height + this.scale * spanY) / 2 + this.scale * ymin;
    }

    toScreen(p: Point): Point {
        return [this.offsetX + this.scale * p[0], this.offsetY - this.scale * p[1]];
    }

    toWorld(p: Point): Point {
        return [(p[0] - this.offsetX) / this.scale, (this.offsetY - p[1]) / this.scale];
    }
}
