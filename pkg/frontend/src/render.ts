import { clipHalfPlane } from "./geometry.js";
import { Transform } from "./transform.js";
import type { Point, StateView } from "./types.js";

const SAFE_MARGIN = Math.sqrt(15) / 2;

function tracePolygon(ctx: CanvasRenderingContext2D, t: Transform, vertices: Point[]): void {
    ctx.beginPath();
    vertices.forEach((v, i) => {
        const [x, y] = t.toScreen(v);
        if (i === 0) ctx.moveTo(x, y);
        else ctx.lineTo(x, y);
    });
    ctx.closePath();
}

function circle(ctx: CanvasRenderingContext2D, t: Transform,
                center: Point, radius: number): void {
    const [x, y] = t.toScreen(center);
    ctx.beginPath();
    ctx.arc(x, y, radius * t.scale, 0, 2 * Math.PI);
}

export function render(canvas: HTMLCanvasElement, state: StateView | null,
                       message: string, pending: boolean): void {
    const ctx = canvas.getContext("2d");
    if (ctx === null) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#14161a";
    ctx.fillRect(0, 0, canvas.width, canvas.height);

    if (state === null) {
        ctx.fillStyle = "#9aa4b0";
        ctx.font = "16px monospace";
        ctx.fillText(message || "start a game to play", 20, 30);
        return;
    }

    const t = new Transform(state.w_vertices, canvas.width, canvas.height);
    const evader: Point = [state.evader.x, state.evader.y];
    const pursuer: Point = [state.pursuer.x, state.pursuer.y];

    // workspace outline and eroded playing area
    tracePolygon(ctx, t, state.w_vertices);
    ctx.strokeStyle = "#5a6470";
    ctx.lineWidth = 1.5;
    ctx.stroke();
    tracePolygon(ctx, t, state.q_vertices);
    ctx.fillStyle = "#1e2730";
    ctx.fill();
    ctx.strokeStyle = "#34414f";
    ctx.stroke();

    if (state.guard !== null) {
        // evader-side region still to be conquered
        const g = state.guard;
        const region = clipHalfPlane(state.q_vertices, g.a, g.normal);
        if (region.length >= 3) {
            tracePolygon(ctx, t, region);
            ctx.fillStyle = "rgba(196, 92, 60, 0.12)";
            ctx.fill();
        }
        ctx.beginPath();
        ctx.moveTo(...t.toScreen(g.a));
        ctx.lineTo(...t.toScreen(g.b));
        ctx.strokeStyle = "#e0a14c";
        ctx.lineWidth = 2;
        ctx.stroke();
        // parallel line at the safe margin: crossing it concedes capture
        const off: Point = [SAFE_MARGIN * g.normal[0], SAFE_MARGIN * g.normal[1]];
        ctx.beginPath();
        ctx.moveTo(...t.toScreen([g.a[0] + off[0], g.a[1] + off[1]]));
        ctx.lineTo(...t.toScreen([g.b[0] + off[0], g.b[1] + off[1]]));
        ctx.strokeStyle = "rgba(224, 161, 76, 0.35)";
        ctx.setLineDash([6, 6]);
        ctx.stroke();
        ctx.setLineDash([]);
    }

    if (!state.captured && !pending) {
        // reachable disk for the next evader move
        circle(ctx, t, evader, state.move_radius);
        ctx.strokeStyle = "rgba(110, 190, 255, 0.5)";
        ctx.lineWidth = 1;
        ctx.setLineDash([4, 4]);
        ctx.stroke();
        ctx.setLineDash([]);
    }

    circle(ctx, t, pursuer, state.capture_radius);
    ctx.strokeStyle = "rgba(230, 90, 90, 0.45)";
    ctx.lineWidth = 1;
    ctx.stroke();

    circle(ctx, t, pursuer, 1);
    ctx.fillStyle = "#c4564a";
    ctx.fill();
    const [px, py] = t.toScreen(pursuer);
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(px + 1.6 * t.scale * Math.cos(state.pursuer.theta),
               py - 1.6 * t.scale * Math.sin(state.pursuer.theta));
    ctx.strokeStyle = "#ffd7d0";
    ctx.lineWidth = 2;
    ctx.stroke();

    circle(ctx, t, evader, 1);
    ctx.fillStyle = "#4a8fc4";
    ctx.fill();

    ctx.fillStyle = "#c9d3dd";
    ctx.font = "14px monospace";
    ctx.fillText(`step ${state.step}  phase ${state.phase}` +
                 (state.last_case ? `  case ${state.last_case}` : ""), 12, 20);
    if (message) {
        ctx.fillStyle = "#9aa4b0";
        ctx.fillText(message, 12, canvas.height - 12);
    }

    if (state.captured) {
        ctx.fillStyle = "rgba(0, 0, 0, 0.55)";
        ctx.fillRect(0, canvas.height / 2 - 34, canvas.width, 68);
        ctx.fillStyle = "#ffce54";
        ctx.font = "bold 26px monospace";
        ctx.textAlign = "center";
        ctx.fillText(`CAPTURED by ${state.captured_by ?? "?"} at step ${state.step}`,
                     canvas.width / 2, canvas.height / 2 + 9);
        ctx.textAlign = "left";
    }
}
