//! Naive reference implementations used as test oracles.
#![allow(dead_code, clippy::needless_range_loop)]

use qworlds::sampling::random_state;
use qworlds::statecore::{seeded_rng, Amplitude, DensityMatrix, StateVector};

pub fn zero() -> Amplitude {
    Amplitude::new(0.0, 0.0)
}

pub fn rand_state(n: usize, seed: u64) -> StateVector {
    random_state(n, &mut seeded_rng(seed)).unwrap()
}

/// Bit `q` of `index` in an `n`-qubit register, qubit 0 most significant.
pub fn bit(index: usize, n: usize, q: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

/// Dense `2^n x 2^n` matrix for a 2x2 `m` on qubit `target`, built as an explicit Kronecker chain.
pub fn embed_single(n: usize, target: usize, m: [[Amplitude; 2]; 2]) -> Vec<Vec<Amplitude>> {
    let dim = 1 << n;
    let mut out = vec![vec![zero(); dim]; dim];
    for r in 0..dim {
        for c in 0..dim {
            let mut v = Amplitude::new(1.0, 0.0);
            for q in 0..n {
                let (br, bc) = (bit(r, n, q), bit(c, n, q));
                v *= if q == target {
                    m[br][bc]
                } else if br == bc {
                    Amplitude::new(1.0, 0.0)
                } else {
                    zero()
                };
            }
            out[r][c] = v;
        }
    }
    out
}

pub fn matvec(m: &[Vec<Amplitude>], v: &[Amplitude]) -> Vec<Amplitude> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Reduced density matrix by explicit summation over every pair of full indices.
pub fn naive_partial_trace(state: &StateVector, keep: &[usize]) -> Vec<Vec<Amplitude>> {
    let n = state.num_qubits();
    let amps = state.amplitudes();
    let dk = 1 << keep.len();
    let mut out = vec![vec![zero(); dk]; dk];
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    for i in 0..amps.len() {
        for j in 0..amps.len() {
            if traced.iter().any(|&q| bit(i, n, q) != bit(j, n, q)) {
                continue;
            }
            let mut r = 0;
            let mut c = 0;
            for &q in keep {
                r = (r << 1) | bit(i, n, q);
                c = (c << 1) | bit(j, n, q);
            }
            out[r][c] += amps[i] * amps[j].conj();
        }
    }
    out
}

/// Eigenvalues of a 2x2 Hermitian matrix from the characteristic quadratic.
pub fn eig2x2(rho: &DensityMatrix) -> (f64, f64) {
    let a = rho.entry(0, 0).re;
    let d = rho.entry(1, 1).re;
    let b = rho.entry(0, 1).norm();
    let mean = (a + d) / 2.0;
    let disc = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    (mean - disc, mean + disc)
}

pub fn h_bits(ps: &[f64]) -> f64 {
    ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

pub fn max_abs_diff(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
