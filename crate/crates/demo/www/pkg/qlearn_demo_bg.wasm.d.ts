/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const barren_variance: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const hhl_sweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const qspline_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const spline_functions: () => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
