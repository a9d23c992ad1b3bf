//! Dense 2^L × 2^L reference implementation, built straight from the
//! Kronecker-product definition of the drive. Shared by integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use dtc_probe::ProbeSpec;
use num_complex::Complex64;
use rand::Rng;

pub type C = Complex64;

pub struct Dense {
    pub dim: usize,
    /// Row-major entries.
    pub data: Vec<C>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Dense {
            dim,
            data: vec![C::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> C {
        self.data[r * self.dim + c]
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let n = self.dim;
        let mut out = Dense::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if a == C::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.at(k, c);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Dense {
        let n = self.dim;
        let mut out = Dense::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.at(r, c).conj();
            }
        }
        out
    }
}

/// Spin of `site` (1-based) in basis state `z`: bit `site − 1` clear is +1.
pub fn spin(z: usize, site: usize) -> f64 {
    if (z >> (site - 1)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_{j=1}^{L−1} j^γ s_j s_{j+1}` from explicit spin products.
pub fn energy(sites: usize, gamma: u32, z: usize) -> f64 {
    (1..sites)
        .map(|j| (j as f64).powi(gamma as i32) * spin(z, j) * spin(z, j + 1))
        .sum()
}

/// Tensor product of one 2×2 block on every site.
pub fn kron_all(sites: usize, m: [[C; 2]; 2]) -> Dense {
    let dim = 1usize << sites;
    let mut out = Dense::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut v = C::new(1.0, 0.0);
            for q in 0..sites {
                v *= m[(r >> q) & 1][(c >> q) & 1];
            }
            out.data[r * dim + c] = v;
        }
    }
    out
}

pub fn diagonal(values: &[C]) -> Dense {
    let mut out = Dense::zeros(values.len());
    for (i, v) in values.iter().enumerate() {
        out.data[i * values.len() + i] = *v;
    }
    out
}

/// Floquet matrix `U = R·D` and its ω-derivative.
pub fn floquet_matrices(spec: &ProbeSpec) -> (Dense, Dense) {
    let l = spec.sites();
    let phi = (1.0 - spec.epsilon()) * FRAC_PI_2;
    let theta = FRAC_PI_2 - spec.omega();
    let (c, s) = (C::new(phi.cos(), 0.0), C::new(0.0, -phi.sin()));
    let r = kron_all(l, [[c, s], [s, c]]);
    let energies: Vec<f64> = (0..1usize << l).map(|z| energy(l, spec.gamma(), z)).collect();
    let d: Vec<C> = energies.iter().map(|&e| C::from_polar(1.0, -theta * e)).collect();
    let dd: Vec<C> = energies.iter().zip(&d).map(|(&e, &p)| C::new(0.0, e) * p).collect();
    (r.mul(&diagonal(&d)), r.mul(&diagonal(&dd)))
}

/// `(U^n ψ₀, ∂_ω U^n ψ₀)` by the product rule on dense matrices.
pub fn dense_evolve(spec: &ProbeSpec, psi0: &[C], cycles: usize) -> (Vec<C>, Vec<C>) {
    let (u, du) = floquet_matrices(spec);
    let mut psi = psi0.to_vec();
    let mut dpsi = vec![C::new(0.0, 0.0); psi0.len()];
    for _ in 0..cycles {
        let a = u.apply(&dpsi);
        let b = du.apply(&psi);
        dpsi = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        psi = u.apply(&psi);
    }
    (psi, dpsi)
}

pub fn basis(dim: usize, index: usize) -> Vec<C> {
    let mut v = vec![C::new(0.0, 0.0); dim];
    v[index] = C::new(1.0, 0.0);
    v
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn max_abs_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Pure-state QFI `4(⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²)`.
pub fn direct_qfi(psi: &[C], dpsi: &[C]) -> f64 {
    4.0 * (norm_sqr(dpsi) - inner(psi, dpsi).norm_sqr())
}

/// QFI as four times the variance of the accumulated generator
/// `G_n = −Σ_{k<n} U^{†k} E U^k` in the initial state.
pub fn generator_qfi(spec: &ProbeSpec, psi0: &[C], cycles: usize) -> f64 {
    let (u, _) = floquet_matrices(spec);
    let ud = u.adjoint();
    let l = spec.sites();
    let energies: Vec<f64> = (0..1usize << l).map(|z| energy(l, spec.gamma(), z)).collect();
    let mut g = vec![C::new(0.0, 0.0); psi0.len()];
    let mut psi_k = psi0.to_vec();
    for k in 0..cycles {
        let mut v: Vec<C> = psi_k.iter().zip(&energies).map(|(a, &e)| a * e).collect();
        for _ in 0..k {
            v = ud.apply(&v);
        }
        for (gi, vi) in g.iter_mut().zip(&v) {
            *gi -= vi;
        }
        psi_k = u.apply(&psi_k);
    }
    4.0 * (norm_sqr(&g) - inner(psi0, &g).norm_sqr())
}

/// Uniform spec draw used by randomized checks.
pub fn random_spec<R: Rng>(rng: &mut R, sites: std::ops::RangeInclusive<usize>, gammas: std::ops::RangeInclusive<u32>) -> ProbeSpec {
    let l = rng.gen_range(sites);
    let gamma = rng.gen_range(gammas);
    let eps = rng.gen_range(0.0..0.5);
    let omega = rng.gen_range(1e-4..0.6);
    let init = rng.gen_range(0..1u64 << l);
    ProbeSpec::new(l, gamma, eps, omega, init).unwrap()
}
