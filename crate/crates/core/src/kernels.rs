//! Amplitude kernels behind the engine.
//!
//! Each kernel exists in [`sequential`] form and, with the `parallel` feature,
//! in a rayon-backed [`parallel`] form with the same signature. The two are
//! bit-identical: elementwise passes apply the same arithmetic to each
//! amplitude in the same pass order, and reductions always sum fixed
//! [`REDUCE_CHUNK`]-sized blocks first and then combine the block partials in
//! index order. Results therefore never depend on the worker count.

use num_complex::Complex64;

/// Sites `0..BLOCK_BITS` are rotated block-by-block so that one block stays
/// resident in cache across all low-order butterfly passes.
pub const BLOCK_BITS: usize = 10;

/// Block length of every reduction.
pub const REDUCE_CHUNK: usize = 1 << 12;

#[inline(always)]
fn rotate_pair(a: &mut Complex64, b: &mut Complex64, c: f64, s: f64) {
    // [[c, -is], [-is, c]] acting on (a, b)
    let (ar, ai, br, bi) = (a.re, a.im, b.re, b.im);
    a.re = c * ar + s * bi;
    a.im = c * ai - s * br;
    b.re = c * br + s * ai;
    b.im = c * bi - s * ar;
}

#[inline(always)]
fn butterfly_stride(amps: &mut [Complex64], site: usize, c: f64, s: f64) {
    let half = 1usize << site;
    for chunk in amps.chunks_mut(half << 1) {
        let (lo, hi) = chunk.split_at_mut(half);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            rotate_pair(a, b, c, s);
        }
    }
}

#[inline(always)]
fn phase_derivative_one(psi: &mut Complex64, dpsi: &mut Complex64, phase: Complex64, energy: i64) {
    let a = phase * *psi;
    let d = phase * *dpsi;
    let e = energy as f64;
    // d + i e a
    *dpsi = Complex64::new(d.re - e * a.im, d.im + e * a.re);
    *psi = a;
}

#[inline(always)]
fn phase_of(theta: f64, energy: i64) -> Complex64 {
    let (s, c) = (theta * energy as f64).sin_cos();
    Complex64::new(c, -s)
}

fn block_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

fn block_norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

fn block_residual_sqr(d: &[Complex64], psi: &[Complex64], c: Complex64) -> f64 {
    d.iter().zip(psi).map(|(x, p)| (x - c * p).norm_sqr()).sum()
}

fn block_aligned_distance_sqr(a: &[Complex64], b: &[Complex64], u: Complex64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - u * y).norm_sqr()).sum()
}

/// Single-threaded kernels.
pub mod sequential {
    use super::*;

    /// Applies `[[c, -is], [-is, c]]` to every one of `sites` qubits.
    pub fn rotate_all_x(amps: &mut [Complex64], sites: usize, c: f64, s: f64) {
        let low = BLOCK_BITS.min(sites);
        for block in amps.chunks_mut(1 << low) {
            for site in 0..low {
                butterfly_stride(block, site, c, s);
            }
        }
        for site in low..sites {
            butterfly_stride(amps, site, c, s);
        }
    }

    /// `amp_z <- phases_z * amp_z`.
    pub fn apply_phases(amps: &mut [Complex64], phases: &[Complex64]) {
        for (a, p) in amps.iter_mut().zip(phases) {
            *a *= p;
        }
    }

    /// `amp_z <- exp(-i theta E_z) amp_z`, with the phase computed on the fly.
    pub fn apply_energy_phases(amps: &mut [Complex64], energies: &[i64], theta: f64) {
        for (a, &e) in amps.iter_mut().zip(energies) {
            *a *= phase_of(theta, e);
        }
    }

    /// Product-rule step of the diagonal pass: `psi <- P psi`,
    /// `dpsi <- P dpsi + i E (P psi)`.
    pub fn phase_with_derivative(
        psi: &mut [Complex64],
        dpsi: &mut [Complex64],
        phases: &[Complex64],
        energies: &[i64],
    ) {
        for ((p, d), (&ph, &e)) in psi.iter_mut().zip(dpsi.iter_mut()).zip(phases.iter().zip(energies)) {
            phase_derivative_one(p, d, ph, e);
        }
    }

    pub fn phase_table(energies: &[i64], theta: f64) -> Vec<Complex64> {
        energies.iter().map(|&e| phase_of(theta, e)).collect()
    }

    pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.chunks(REDUCE_CHUNK)
            .zip(b.chunks(REDUCE_CHUNK))
            .map(|(x, y)| block_inner(x, y))
            .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
    }

    pub fn norm_sqr(a: &[Complex64]) -> f64 {
        a.chunks(REDUCE_CHUNK).map(block_norm_sqr).fold(0.0, |acc, v| acc + v)
    }

    /// `sum_z |d_z - c psi_z|^2`.
    pub fn residual_sqr(d: &[Complex64], psi: &[Complex64], c: Complex64) -> f64 {
        d.chunks(REDUCE_CHUNK)
            .zip(psi.chunks(REDUCE_CHUNK))
            .map(|(x, p)| block_residual_sqr(x, p, c))
            .fold(0.0, |acc, v| acc + v)
    }

    /// `sum_z |a_z - u b_z|^2`.
    pub fn aligned_distance_sqr(a: &[Complex64], b: &[Complex64], u: Complex64) -> f64 {
        a.chunks(REDUCE_CHUNK)
            .zip(b.chunks(REDUCE_CHUNK))
            .map(|(x, y)| block_aligned_distance_sqr(x, y, u))
            .fold(0.0, |acc, v| acc + v)
    }

    pub fn scale(a: &mut [Complex64], factor: f64) {
        for x in a.iter_mut() {
            *x *= factor;
        }
    }

    /// `E(z) = sum_j w_j s_j s_{j+1}` for every basis index.
    pub fn fill_energies(energies: &mut [i64], weights: &[i64]) {
        for (z, e) in energies.iter_mut().enumerate() {
            *e = super::energy_of(z, weights);
        }
    }
}

#[inline(always)]
fn energy_of(z: usize, weights: &[i64]) -> i64 {
    // bond j couples bits j and j+1; the product of spins is -1 when they differ
    let differ = z ^ (z >> 1);
    weights
        .iter()
        .enumerate()
        .map(|(j, &w)| if (differ >> j) & 1 == 1 { -w } else { w })
        .sum()
}

/// Rayon-backed kernels, bit-identical to [`sequential`].
#[cfg(feature = "parallel")]
pub mod parallel {
    use super::*;
    use rayon::prelude::*;

    // Below this many amplitudes the rayon overhead dominates.
    const MIN_LEN: usize = 1 << 12;

    pub fn rotate_all_x(amps: &mut [Complex64], sites: usize, c: f64, s: f64) {
        let low = BLOCK_BITS.min(sites);
        amps.par_chunks_mut(1 << low).for_each(|block| {
            for site in 0..low {
                butterfly_stride(block, site, c, s);
            }
        });
        for site in low..sites {
            let half = 1usize << site;
            let chunks = amps.len() / (half << 1);
            if chunks >= 64 {
                amps.par_chunks_mut(half << 1).for_each(|chunk| {
                    let (lo, hi) = chunk.split_at_mut(half);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        rotate_pair(a, b, c, s);
                    }
                });
            } else {
                for chunk in amps.chunks_mut(half << 1) {
                    let (lo, hi) = chunk.split_at_mut(half);
                    lo.par_iter_mut()
                        .zip(hi.par_iter_mut())
                        .with_min_len(MIN_LEN)
                        .for_each(|(a, b)| rotate_pair(a, b, c, s));
                }
            }
        }
    }

    pub fn apply_phases(amps: &mut [Complex64], phases: &[Complex64]) {
        amps.par_iter_mut()
            .zip(phases.par_iter())
            .with_min_len(MIN_LEN)
            .for_each(|(a, p)| *a *= p);
    }

    pub fn apply_energy_phases(amps: &mut [Complex64], energies: &[i64], theta: f64) {
        amps.par_iter_mut()
            .zip(energies.par_iter())
            .with_min_len(MIN_LEN)
            .for_each(|(a, &e)| *a *= phase_of(theta, e));
    }

    pub fn phase_with_derivative(
        psi: &mut [Complex64],
        dpsi: &mut [Complex64],
        phases: &[Complex64],
        energies: &[i64],
    ) {
        psi.par_iter_mut()
            .zip(dpsi.par_iter_mut())
            .zip(phases.par_iter().zip(energies.par_iter()))
            .with_min_len(MIN_LEN)
            .for_each(|((p, d), (&ph, &e))| phase_derivative_one(p, d, ph, e));
    }

    pub fn phase_table(energies: &[i64], theta: f64) -> Vec<Complex64> {
        energies
            .par_iter()
            .with_min_len(MIN_LEN)
            .map(|&e| phase_of(theta, e))
            .collect()
    }

    pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let partials: Vec<Complex64> = a
            .par_chunks(REDUCE_CHUNK)
            .zip(b.par_chunks(REDUCE_CHUNK))
            .map(|(x, y)| block_inner(x, y))
            .collect();
        partials.into_iter().fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
    }

    pub fn norm_sqr(a: &[Complex64]) -> f64 {
        let partials: Vec<f64> = a.par_chunks(REDUCE_CHUNK).map(block_norm_sqr).collect();
        partials.into_iter().fold(0.0, |acc, v| acc + v)
    }

    pub fn residual_sqr(d: &[Complex64], psi: &[Complex64], c: Complex64) -> f64 {
        let partials: Vec<f64> = d
            .par_chunks(REDUCE_CHUNK)
            .zip(psi.par_chunks(REDUCE_CHUNK))
            .map(|(x, p)| block_residual_sqr(x, p, c))
            .collect();
        partials.into_iter().fold(0.0, |acc, v| acc + v)
    }

    pub fn aligned_distance_sqr(a: &[Complex64], b: &[Complex64], u: Complex64) -> f64 {
        let partials: Vec<f64> = a
            .par_chunks(REDUCE_CHUNK)
            .zip(b.par_chunks(REDUCE_CHUNK))
            .map(|(x, y)| block_aligned_distance_sqr(x, y, u))
            .collect();
        partials.into_iter().fold(0.0, |acc, v| acc + v)
    }

    pub fn scale(a: &mut [Complex64], factor: f64) {
        a.par_iter_mut().with_min_len(MIN_LEN).for_each(|x| *x *= factor);
    }

    pub fn fill_energies(energies: &mut [i64], weights: &[i64]) {
        energies
            .par_iter_mut()
            .with_min_len(MIN_LEN)
            .enumerate()
            .for_each(|(z, e)| *e = super::energy_of(z, weights));
    }

    /// Order-preserving parallel map.
    pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        items.par_iter().map(f).collect()
    }
}

#[cfg(feature = "parallel")]
pub(crate) use parallel as active;
#[cfg(not(feature = "parallel"))]
pub(crate) use sequential as active;

/// Order-preserving map over independent evaluation points.
pub(crate) fn map_points<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        parallel::map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
