/* tslint:disable */
/* eslint-disable */

export class Thresholds {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    analytic: number;
    binding_p: number;
    empirical: number;
}

/**
 * Stream counts of the allocation at `index` in [`sum_grid_js`] order.
 */
export function allocationAt(links: number, antennas: number, index: number): Uint32Array;

/**
 * C_1(k_1) for k_1 = 1..=M with every other link at one stream.
 */
export function capacityCurve(links: number, antennas: number, beta: number, rate: number): Float64Array;

/**
 * Link counts above which one stream per link is best.
 */
export function singleStreamThresholds(antennas: number, beta: number): Thresholds;

/**
 * C_sum of every allocation in {1..M}^N, last link varying fastest.
 */
export function sumCapacityGrid(links: number, antennas: number, beta: number, rate: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_thresholds_analytic: (a: number) => number;
    readonly __wbg_get_thresholds_binding_p: (a: number) => number;
    readonly __wbg_get_thresholds_empirical: (a: number) => number;
    readonly __wbg_set_thresholds_analytic: (a: number, b: number) => void;
    readonly __wbg_set_thresholds_binding_p: (a: number, b: number) => void;
    readonly __wbg_set_thresholds_empirical: (a: number, b: number) => void;
    readonly __wbg_thresholds_free: (a: number, b: number) => void;
    readonly allocationAt: (a: number, b: number, c: number) => [number, number, number, number];
    readonly capacityCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly singleStreamThresholds: (a: number, b: number) => [number, number, number];
    readonly sumCapacityGrid: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
