/* tslint:disable */
/* eslint-disable */

/**
 * Mean and variance of `min(N_t, m)` for a Poisson process of rate `lambda`.
 */
export function capped_poisson(m: number, lambda: number, dt: number, horizon: number): string;

/**
 * Checks a nearest-neighbour walk with up/down probabilities `p`, `q` and
 * runs coupled paths from every state.
 */
export function coupled_walk(p: Float64Array, q: Float64Array, steps: number, seed: number): string;

/**
 * Stationary autocorrelation of a reflected ±1 walk: exact curve, shape
 * certificate, and a Monte Carlo estimate with standard errors.
 */
export function walk_autocorrelation(p: number, max_state: number, horizon: number, n_paths: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly capped_poisson: (a: number, b: number, c: number, d: number) => [number, number];
    readonly coupled_walk: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly walk_autocorrelation: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
