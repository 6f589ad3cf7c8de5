/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_thresholds_analytic: (a: number) => number;
export const __wbg_get_thresholds_binding_p: (a: number) => number;
export const __wbg_get_thresholds_empirical: (a: number) => number;
export const __wbg_set_thresholds_analytic: (a: number, b: number) => void;
export const __wbg_set_thresholds_binding_p: (a: number, b: number) => void;
export const __wbg_set_thresholds_empirical: (a: number, b: number) => void;
export const __wbg_thresholds_free: (a: number, b: number) => void;
export const allocationAt: (a: number, b: number, c: number) => [number, number, number, number];
export const capacityCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const singleStreamThresholds: (a: number, b: number) => [number, number, number];
export const sumCapacityGrid: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
