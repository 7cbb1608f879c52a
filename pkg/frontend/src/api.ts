import type { NewSessionRequest, Point, StateView } from "./types.js";

export class ApiError extends Error {
    constructor(readonly status: number, readonly detail: string) {
        super(`${status}: ${detail}`);
    }
}

export type FetchLike = typeof fetch;

export class Api {
    constructor(readonly base: string, private fetchFn: FetchLike = fetch) {}

    private async request(path: string, init?: RequestInit): Promise<Response> {
        const res = await this.fetchFn(`${this.base}${path}`, init);
        if (!res.ok) {
            let detail = res.statusText;
            try {
                const body = await res.json();
                if (body && typeof body.detail === "string") detail = body.detail;
            } catch {
                // keep the status text
            }
            throw new ApiError(res.status, detail);
        }
        return res;
    }

    async createSession(req: NewSessionRequest): Promise<StateView> {
        const res = await this.request("/sessions", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(req),
        });
        return res.json();
    }

    async move(sessionId: string, target: Point): Promise<StateView> {
        const res = await this.request(`/sessions/${sessionId}/move`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ target }),
        });
        return res.json();
    }

    async getState(sessionId: string): Promise<StateView> {
        const res = await this.request(`/sessions/${sessionId}/state`);
        return res.json();
    }

    async getTrace(sessionId: string): Promise<string> {
        const res = await this.request(`/sessions/${sessionId}/trace`);
        return res.text();
    }
}
