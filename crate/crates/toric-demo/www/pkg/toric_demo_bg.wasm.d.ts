/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const find_lambda: (a: number, b: number, c: number, d: number) => [number, number];
export const hilbert_symbol: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
export const quadratic_epsilon: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
