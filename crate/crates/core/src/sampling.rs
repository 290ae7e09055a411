//! Seeded random states and unitaries for property sweeps and test batteries.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::statecore::{check_cap, Amplitude, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Amplitude {
    Amplitude::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state on `num_qubits` qubits.
pub fn random_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<StateVector> {
    check_cap(num_qubits)?;
    let amps = (0..1usize << num_qubits).map(|_| gaussian(rng)).collect();
    StateVector::normalized(amps)
}

/// Haar-random `dim x dim` unitary, row-major.
///
/// QR of a complex Ginibre matrix with the phases of `R`'s diagonal folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Amplitude> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let (q, r) = g.qr().unpack();
    let mut out = vec![Amplitude::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Amplitude::new(1.0, 0.0)
        };
        for i in 0..dim {
            out[i * dim + j] = q[(i, j)] * phase;
        }
    }
    out
}

/// Kronecker product of row-major square matrices; `a` acts on the more significant factor.
pub fn kron(a: &[Amplitude], b: &[Amplitude]) -> Vec<Amplitude> {
    let da = (a.len() as f64).sqrt().round() as usize;
    let db = (b.len() as f64).sqrt().round() as usize;
    let d = da * db;
    let mut out = vec![Amplitude::new(0.0, 0.0); d * d];
    for i in 0..da {
        for j in 0..da {
            let aij = a[i * da + j];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + (j * db + l)] = aij * b[k * db + l];
                }
            }
        }
    }
    out
}

/// Tensor product of independent random single-qubit unitaries on `num_qubits` qubits.
pub fn random_product_unitary<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Vec<Amplitude> {
    let mut acc = vec![Amplitude::new(1.0, 0.0)];
    for _ in 0..num_qubits {
        acc = kron(&acc, &random_unitary(2, rng));
    }
    acc
}
