/* tslint:disable */
/* eslint-disable */

/**
 * Rows of `[n, Var ∂C/∂θ₁]` for `n` in `2..=n_max`.
 */
export function barren_variance(n_max: number, layers: number, samples: number, seed: number): Float64Array;

/**
 * Rows of `[m, median fidelity, min fidelity]` for `m` in `m_min..=m_max`.
 */
export function hhl_sweep(size: number, m_min: number, m_max: number, trials: number, seed: number): Float64Array;

/**
 * Rows of `[x, true, classical, quantum]` in `[0, 1]` units.
 */
export function qspline_curve(_function: string, intervals: number, clock_qubits: number, probes: number): Float64Array;

export function spline_functions(): string[];

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly barren_variance: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly hhl_sweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly qspline_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly spline_functions: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
