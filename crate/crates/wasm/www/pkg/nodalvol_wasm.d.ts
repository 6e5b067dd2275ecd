/* tslint:disable */
/* eslint-disable */

/**
 * Nodal density of boundary-adapted random waves against distance from the
 * wall, normalized by its bulk value.
 */
export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Large-distance expansion; NaN where it is not meaningful.
     */
    readonly asymptote: Float64Array;
    readonly distances: Float64Array;
    readonly ratios: Float64Array;
}

/**
 * Histogram of the rescaled nodal volume over the modes of one spectral
 * window of the incommensurate cuboid, with the limiting density.
 */
export class SigmaHistogram {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly densities: Float64Array;
    readonly edges: Float64Array;
    /**
     * Limiting density at the bin centres.
     */
    readonly limit: Float64Array;
    readonly modes: number;
}

export function density_profile(dim: number, r_max: number, points: number): Profile;

export function limiting_distribution(dim: number, energy: number, min_modes: number, bins: number): SigmaHistogram;

/**
 * Values of one planar boundary-adapted random wave on a `width x height`
 * raster covering `[0, x_max] x [0, y_max]`, row by row starting at the
 * wall. The nodal set is where the sign changes.
 */
export function wave_field(n_waves: number, seed: bigint, x_max: number, y_max: number, width: number, height: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly __wbg_sigmahistogram_free: (a: number, b: number) => void;
    readonly density_profile: (a: number, b: number, c: number) => [number, number, number];
    readonly limiting_distribution: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly profile_asymptote: (a: number) => [number, number];
    readonly profile_distances: (a: number) => [number, number];
    readonly profile_ratios: (a: number) => [number, number];
    readonly sigmahistogram_densities: (a: number) => [number, number];
    readonly sigmahistogram_edges: (a: number) => [number, number];
    readonly sigmahistogram_limit: (a: number) => [number, number];
    readonly sigmahistogram_modes: (a: number) => number;
    readonly wave_field: (a: number, b: bigint, c: number, d: number, e: number, f: number) => [number, number, number, number];
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
