import { Api } from "./api.js";
import { GameController } from "./controller.js";
import { render } from "./render.js";
import { Transform } from "./transform.js";
import type { Point } from "./types.js";

const PRESETS: Record<string, Point[]> = {
    "square-20": [[0, 0], [20, 0], [20, 20], [0, 20]],
    "skewed-quad": [[0, 0], [24, 2], [20, 18], [3, 14]],
    "heptagon": Array.from({ length: 7 }, (_, i): Point => {
        const angle = 0.3 + (2 * Math.PI * i) / 7;
        return [10 + 9 * Math.cos(angle), 10 + 9 * Math.sin(angle)];
    }),
};

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (node === null) throw new Error(`missing element #${id}`);
    return node as T;
}

function main(): void {
    const canvas = el<HTMLCanvasElement>("board");
    const presetSelect = el<HTMLSelectElement>("preset");
    const verticesInput = el<HTMLInputElement>("vertices");
    const pursuerInput = el<HTMLInputElement>("pursuer");
    const evaderInput = el<HTMLInputElement>("evader");
    const epsilonInput = el<HTMLInputElement>("epsilon");
    const serverInput = el<HTMLInputElement>("server");
    const startButton = el<HTMLButtonElement>("start");

    for (const name of Object.keys(PRESETS)) {
        const opt = document.createElement("option");
        opt.value = name;
        opt.textContent = name;
        presetSelect.appendChild(opt);
    }
    const custom = document.createElement("option");
    custom.value = "custom";
    custom.textContent = "custom";
    presetSelect.appendChild(custom);

    const syncPreset = () => {
        const preset = PRESETS[presetSelect.value];
        if (preset !== undefined) {
            verticesInput.value = preset.map(([x, y]) => `${x.toFixed(3)},${y.toFixed(3)}`).join(" ");
        }
        verticesInput.disabled = presetSelect.value !== "custom";
    };
    presetSelect.addEventListener("change", syncPreset);
    syncPreset();

    let controller = new GameController(new Api(serverInput.value), redraw);

    function redraw(): void {
        render(canvas, controller.state, controller.message, controller.pending);
    }

    startButton.addEventListener("click", () => {
        const vertices = verticesInput.value.trim().split(/\s+/).map((pair): Point => {
            const [x, y] = pair.split(",").map(Number);
            return [x, y];
        });
        const [px, py, ptheta] = pursuerInput.value.split(",").map(Number);
        const [ex, ey] = evaderInput.value.split(",").map(Number);
        controller = new GameController(new Api(serverInput.value), redraw);
        void controller.newGame(vertices, [px, py, ptheta], [ex, ey],
                                Number(epsilonInput.value));
    });

    canvas.addEventListener("click", (event) => {
        const state = controller.state;
        if (state === null) return;
        const rect = canvas.getBoundingClientRect();
        const t = new Transform(state.w_vertices, canvas.width, canvas.height);
        const target = t.toWorld([
            ((event.clientX - rect.left) * canvas.width) / rect.width,
            ((event.clientY - rect.top) * canvas.height) / rect.height,
        ]);
        void controller.submitMove(target);
    });

    redraw();
}

main();
