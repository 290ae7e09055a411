use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::state::{check_qubits, qubit_mask, Amplitude, StateVector};

/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Eigenvalues down to this value are treated as round-off and clipped to zero.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// Dense density operator on `num_qubits` qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: Vec<Amplitude>,
}

impl DensityMatrix {
    /// Rank-1 projector `|ψ><ψ|`.
    pub fn from_state(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let mut entries = Vec::with_capacity(amps.len() * amps.len());
        for a in amps {
            entries.extend(amps.iter().map(|b| a * b.conj()));
        }
        Self {
            num_qubits: state.num_qubits(),
            entries,
        }
    }

    /// Validated construction from row-major entries.
    pub fn from_entries(entries: Vec<Amplitude>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "{} entries do not form a 2^n x 2^n matrix",
                entries.len()
            )));
        }
        let rho = Self {
            num_qubits: dim.trailing_zeros() as usize,
            entries,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// `Σ p_i |ψ_i><ψ_i|`; weights are used as given.
    pub fn mixture<'a>(members: impl IntoIterator<Item = (f64, &'a StateVector)>) -> Result<Self> {
        let mut acc: Option<DensityMatrix> = None;
        for (p, state) in members {
            let term = DensityMatrix::from_state(state);
            match acc.as_mut() {
                None => {
                    acc = Some(term.scaled(p));
                }
                Some(sum) => {
                    if sum.num_qubits != term.num_qubits {
                        return Err(Error::DimensionMismatch {
                            expected: sum.num_qubits,
                            actual: term.num_qubits,
                        });
                    }
                    for (s, t) in sum.entries.iter_mut().zip(&term.entries) {
                        *s += t * p;
                    }
                }
            }
        }
        acc.ok_or_else(|| Error::InvalidParameter("empty mixture".into()))
    }

    fn scaled(mut self, p: f64) -> Self {
        for e in &mut self.entries {
            *e *= p;
        }
        self
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, entries: Vec<Amplitude>) -> Self {
        debug_assert_eq!(entries.len(), 1 << (2 * num_qubits));
        Self { num_qubits, entries }
    }

    /// Check Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self.entries.iter().find(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite entry {bad}")));
        }
        let deviation = self.hermiticity_deviation();
        if deviation > DENSITY_TOLERANCE {
            return Err(Error::NonHermitian { deviation });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::BadTrace(tr.re));
        }
        if let Some(&low) = self
            .eigenvalues()?
            .iter()
            .find(|&&l| l < -NEGATIVE_EIGENVALUE_TOLERANCE)
        {
            return Err(Error::NegativeEigenvalue(low));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Amplitude] {
        &mut self.entries
    }

    pub fn trace(&self) -> Amplitude {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // ρ Hermitian: Tr(ρ²) = Σ |ρ_ij|²
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest `|ρ_ij|` with `i != j`.
    pub fn max_off_diagonal(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    worst = worst.max(self.entry(i, j).norm());
                }
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entry(i, i).re).collect()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let deviation = self.hermiticity_deviation();
        if deviation > DENSITY_TOLERANCE {
            return Err(Error::NonHermitian { deviation });
        }
        let dim = self.dim();
        let m = DMatrix::from_fn(dim, dim, |i, j| {
            // symmetrize so round-off asymmetry cannot leak into the solver
            (self.entry(i, j) + self.entry(j, i).conj()) * 0.5
        });
        let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Trace out every qubit not in `keep`; `keep[0]` becomes the most significant qubit.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_qubits(self.num_qubits, keep)?;
        let (kept, traced) = split_offsets(self.num_qubits, keep);
        let full_dim = self.dim();
        let out_dim = kept.len();
        let mut entries = vec![Amplitude::new(0.0, 0.0); out_dim * out_dim];
        for (r, &row_off) in kept.iter().enumerate() {
            for (c, &col_off) in kept.iter().enumerate() {
                entries[r * out_dim + c] = traced
                    .iter()
                    .map(|&e| self.entries[(row_off | e) * full_dim + (col_off | e)])
                    .sum();
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(keep.len(), entries))
    }
}

/// Basis-index offsets for every assignment of the kept qubits and of the rest.
fn split_offsets(num_qubits: usize, keep: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let kept = (0..1usize << keep.len())
        .map(|s| {
            keep.iter().enumerate().fold(0, |acc, (pos, &q)| {
                if s & (1 << (keep.len() - 1 - pos)) != 0 {
                    acc | qubit_mask(num_qubits, q)
                } else {
                    acc
                }
            })
        })
        .collect();
    let rest: Vec<usize> = (0..num_qubits).filter(|q| !keep.contains(q)).collect();
    let traced = (0..1usize << rest.len())
        .map(|s| {
            rest.iter().enumerate().fold(0, |acc, (pos, &q)| {
                if s & (1 << (rest.len() - 1 - pos)) != 0 {
                    acc | qubit_mask(num_qubits, q)
                } else {
                    acc
                }
            })
        })
        .collect();
    (kept, traced)
}

impl StateVector {
    /// Reduced density matrix on `keep`, computed without forming `|ψ><ψ|`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_qubits(self.num_qubits(), keep)?;
        let (kept, traced) = split_offsets(self.num_qubits(), keep);
        let amps = self.amplitudes();
        let out_dim = kept.len();
        let mut entries = vec![Amplitude::new(0.0, 0.0); out_dim * out_dim];
        for (r, &row_off) in kept.iter().enumerate() {
            for (c, &col_off) in kept.iter().enumerate() {
                entries[r * out_dim + c] = traced
                    .iter()
                    .map(|&e| amps[row_off | e] * amps[col_off | e].conj())
                    .sum();
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(keep.len(), entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    fn bell() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]).unwrap()
    }

    #[test]
    fn projector_of_zero() {
        let rho = DensityMatrix::from_state(&StateVector::zero_state(1).unwrap());
        assert_eq!(rho.entries(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projector_of_plus_is_all_halves() {
        let plus = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let rho = DensityMatrix::from_state(&plus);
        for e in rho.entries() {
            assert!((e - c(0.5)).norm() < 1e-15);
        }
        assert!(rho.validate().is_ok());
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let reduced = DensityMatrix::from_state(&bell()).partial_trace(&[1]).unwrap();
        let expected = [c(0.5), c(0.0), c(0.0), c(0.5)];
        for (a, b) in reduced.entries().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn product_state_factorizes() {
        // |0> ⊗ |+>, keep qubit 0
        let s = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0), c(0.0)]).unwrap();
        let reduced = DensityMatrix::from_state(&s).partial_trace(&[0]).unwrap();
        let expected = [c(1.0), c(0.0), c(0.0), c(0.0)];
        for (a, b) in reduced.entries().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn reduced_density_matches_partial_trace() {
        let s = StateVector::normalized(
            (0..8)
                .map(|i| Amplitude::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect(),
        )
        .unwrap();
        for keep in [vec![0], vec![2], vec![2, 0], vec![0, 1, 2]] {
            let a = DensityMatrix::from_state(&s).partial_trace(&keep).unwrap();
            let b = s.reduced_density(&keep).unwrap();
            for (x, y) in a.entries().iter().zip(b.entries()) {
                assert!((x - y).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn from_entries_validation() {
        assert!(DensityMatrix::from_entries(vec![c(0.5), c(0.0), c(0.0), c(0.5)]).is_ok());
        assert!(matches!(
            DensityMatrix::from_entries(vec![c(0.5), c(0.1), c(0.0), c(0.5)]),
            Err(Error::NonHermitian { .. })
        ));
        assert!(matches!(
            DensityMatrix::from_entries(vec![c(0.6), c(0.0), c(0.0), c(0.6)]),
            Err(Error::BadTrace(_))
        ));
        assert!(matches!(
            DensityMatrix::from_entries(vec![c(1.5), c(0.0), c(0.0), c(-0.5)]),
            Err(Error::NegativeEigenvalue(_))
        ));
        assert!(DensityMatrix::from_entries(vec![c(1.0), c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = DensityMatrix::from_state(&bell());
        assert!(rho.partial_trace(&[]).is_err());
        assert!(rho.partial_trace(&[2]).is_err());
        assert!(rho.partial_trace(&[1, 1]).is_err());
    }

    #[test]
    fn mixture_rejects_mixed_dimensions() {
        let a = StateVector::zero_state(1).unwrap();
        let b = StateVector::zero_state(2).unwrap();
        assert!(DensityMatrix::mixture([(0.5, &a), (0.5, &b)]).is_err());
    }
}
