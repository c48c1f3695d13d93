/* tslint:disable */
/* eslint-disable */

/**
 * lambda for K = Q(sqrt d) from targets such as {"3": -1, "inf": -1}.
 */
export function find_lambda(d: number, targets: string, search_bound: number): string;

/**
 * (a, b)_v for rationals a, b and a place v ("inf" or a prime).
 */
export function hilbert_symbol(place: string, a: string, b: string): string;

/**
 * epsilon(1/2, chi, psi_p) for the quadratic character chi of Z_p^x
 * (trivial on p), which is the normalized Gauss sum.
 */
export function quadratic_epsilon(p: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly find_lambda: (a: number, b: number, c: number, d: number) => [number, number];
    readonly hilbert_symbol: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly quadratic_epsilon: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
