/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_cosine_free: (a: number, b: number) => void;
export const __wbg_lab_free: (a: number, b: number) => void;
export const __wbg_motion_free: (a: number, b: number) => void;
export const __wbg_stroke_free: (a: number, b: number) => void;
export const cosine_demo: (a: number, b: number, c: bigint) => [number, number, number];
export const cosine_mod_extrapolation_error: (a: number) => number;
export const cosine_raw: (a: number) => [number, number];
export const cosine_raw_extrapolation_error: (a: number) => number;
export const cosine_target: (a: number) => [number, number];
export const cosine_wrapped: (a: number) => [number, number];
export const cosine_y: (a: number) => [number, number];
export const jerk_limited_move: (a: number, b: number, c: number, d: number) => [number, number, number];
export const lab_identify: (a: number, b: number, c: number) => [number, number, number, number];
export const lab_new: (a: number) => number;
export const lab_stroke: (a: number, b: number, c: number, d: number) => [number, number, number];
export const motion_acceleration: (a: number) => [number, number];
export const motion_duration: (a: number) => number;
export const motion_peak_acceleration: (a: number) => number;
export const motion_peak_velocity: (a: number) => number;
export const motion_position: (a: number) => [number, number];
export const motion_t: (a: number) => [number, number];
export const motion_velocity: (a: number) => [number, number];
export const stroke_error: (a: number) => [number, number];
export const stroke_feedforward: (a: number) => [number, number];
export const stroke_mae: (a: number) => number;
export const stroke_max_error: (a: number) => number;
export const stroke_reference: (a: number) => [number, number];
export const stroke_standstill_error: (a: number) => number;
export const stroke_t: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
