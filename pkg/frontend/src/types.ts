export type Point = [number, number];

export interface GuardView {
    a: Point;
    b: Point;
    normal: Point;
}

export interface StateView {
    session_id: string;
    phase: string;
    step: number;
    pursuer: { x: number; y: number; theta: number };
    evader: { x: number; y: number };
    guard: GuardView | null;
    capture_radius: number;
    move_radius: number;
    q_vertices: Point[];
    w_vertices: Point[];
    captured: boolean;
    captured_by: string | null;
    last_case: string | null;
    event_log_tail: string[];
}

export interface NewSessionRequest {
    workspace: { vertices: Point[]; name?: string };
    pursuer_start: [number, number, number];
    evader_start: Point;
    epsilon: number;
}
