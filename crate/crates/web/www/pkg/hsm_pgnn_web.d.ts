/* tslint:disable */
/* eslint-disable */

export class Cosine {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly mod_extrapolation_error: number;
    readonly raw: Float64Array;
    readonly raw_extrapolation_error: number;
    readonly target: Float64Array;
    readonly wrapped: Float64Array;
    readonly y: Float64Array;
}

/**
 * Simulated plant plus the models identified on it.
 */
export class Lab {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Records `seconds` of closed-loop data and identifies the physical
     * model and the PGNN on it. Returns a one-line summary.
     */
    identify(seconds: number, epochs: number): string;
    constructor(parasitic: boolean);
    /**
     * Measured back-and-forth stroke (after one warm-up stroke) with the
     * given feedforward: `none`, `physical` or `pgnn`.
     */
    stroke(controller: string, velocity: number): Stroke;
}

export class Motion {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly acceleration: Float64Array;
    readonly duration: number;
    readonly peak_acceleration: number;
    readonly peak_velocity: number;
    readonly position: Float64Array;
    readonly t: Float64Array;
    readonly velocity: Float64Array;
}

export class Stroke {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Tracking error y* − y.
     */
    readonly error: Float64Array;
    readonly feedforward: Float64Array;
    readonly mae: number;
    readonly max_error: number;
    readonly reference: Float64Array;
    readonly standstill_error: number;
    readonly t: Float64Array;
}

/**
 * Trains raw-input and wrapped-input networks of width `n1` on one cosine
 * period and evaluates them over three periods.
 */
export function cosine_demo(n1: number, epochs: number, seed: bigint): Cosine;

/**
 * Samples a jerk-limited point-to-point move from 0 to `distance` rad.
 */
export function jerk_limited_move(distance: number, v_max: number, a_max: number, j_max: number): Motion;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_cosine_free: (a: number, b: number) => void;
    readonly __wbg_lab_free: (a: number, b: number) => void;
    readonly __wbg_motion_free: (a: number, b: number) => void;
    readonly __wbg_stroke_free: (a: number, b: number) => void;
    readonly cosine_demo: (a: number, b: number, c: bigint) => [number, number, number];
    readonly cosine_mod_extrapolation_error: (a: number) => number;
    readonly cosine_raw: (a: number) => [number, number];
    readonly cosine_raw_extrapolation_error: (a: number) => number;
    readonly cosine_target: (a: number) => [number, number];
    readonly cosine_wrapped: (a: number) => [number, number];
    readonly cosine_y: (a: number) => [number, number];
    readonly jerk_limited_move: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly lab_identify: (a: number, b: number, c: number) => [number, number, number, number];
    readonly lab_new: (a: number) => number;
    readonly lab_stroke: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly motion_acceleration: (a: number) => [number, number];
    readonly motion_duration: (a: number) => number;
    readonly motion_peak_acceleration: (a: number) => number;
    readonly motion_peak_velocity: (a: number) => number;
    readonly motion_position: (a: number) => [number, number];
    readonly motion_t: (a: number) => [number, number];
    readonly motion_velocity: (a: number) => [number, number];
    readonly stroke_error: (a: number) => [number, number];
    readonly stroke_feedforward: (a: number) => [number, number];
    readonly stroke_mae: (a: number) => number;
    readonly stroke_max_error: (a: number) => number;
    readonly stroke_reference: (a: number) => [number, number];
    readonly stroke_standstill_error: (a: number) => number;
    readonly stroke_t: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
