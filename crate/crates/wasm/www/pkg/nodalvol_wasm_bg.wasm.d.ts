/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_profile_free: (a: number, b: number) => void;
export const __wbg_sigmahistogram_free: (a: number, b: number) => void;
export const density_profile: (a: number, b: number, c: number) => [number, number, number];
export const limiting_distribution: (a: number, b: number, c: number, d: number) => [number, number, number];
export const profile_asymptote: (a: number) => [number, number];
export const profile_distances: (a: number) => [number, number];
export const profile_ratios: (a: number) => [number, number];
export const sigmahistogram_densities: (a: number) => [number, number];
export const sigmahistogram_edges: (a: number) => [number, number];
export const sigmahistogram_limit: (a: number) => [number, number];
export const sigmahistogram_modes: (a: number) => number;
export const wave_field: (a: number, b: bigint, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
