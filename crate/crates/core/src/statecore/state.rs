use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex probability amplitude.
pub type Amplitude = Complex64;

/// Largest register the dense kernel will allocate.
pub const MAX_QUBITS: usize = 22;

/// Squared-norm tolerance accepted when constructing a state from raw amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Bit mask selecting `qubit` within an `num_qubits`-wide basis index.
///
/// Qubit 0 is the most significant bit of the index.
#[inline]
pub(crate) fn qubit_mask(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

pub(crate) fn check_cap(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::QubitCap {
            requested: num_qubits,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Validate a list of qubit indices: non-empty, in range, no repeats.
pub(crate) fn check_qubits(num_qubits: usize, qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::EmptyQubitSet);
    }
    let mut seen = 0usize;
    for &q in qubits {
        if q >= num_qubits {
            return Err(Error::InvalidQubit { qubit: q, num_qubits });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Dense pure state over `2^num_qubits` computational basis states.
///
/// Always unit-norm. A zero-qubit state holds a single amplitude and is used for
/// the (trivial) register-B relative state when register B is empty.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter("a register needs at least one qubit".into()));
        }
        check_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, num_qubits });
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wrap raw amplitudes that are already unit-norm (within [`NORM_TOLERANCE`]).
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let num_qubits = dimension_to_qubits(amps.len())?;
        if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Rescale arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<Amplitude>) -> Result<Self> {
        let num_qubits = dimension_to_qubits(amps.len())?;
        if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { num_qubits, amps })
    }

    /// Tensor product `self ⊗ other`; `self` takes the most-significant positions.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_cap(num_qubits)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Amplitude> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Exact Born probabilities of the joint outcomes on `qubits`.
    ///
    /// Outcome index bit order follows `qubits`: `qubits[0]` is the most significant bit.
    pub fn outcome_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_qubits(self.num_qubits, qubits)?;
        let mut dist = vec![0.0; 1 << qubits.len()];
        for (index, amp) in self.amps.iter().enumerate() {
            dist[self.extract_bits(index, qubits)] += amp.norm_sqr();
        }
        Ok(dist)
    }

    /// Gather the bits of `index` belonging to `qubits`, `qubits[0]` most significant.
    pub(crate) fn extract_bits(&self, index: usize, qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |acc, &q| {
            (acc << 1) | usize::from(index & qubit_mask(self.num_qubits, q) != 0)
        })
    }

    /// True when every amplitude agrees with `other` within `tol` (no phase freedom).
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.num_qubits == other.num_qubits && self.amps.iter().zip(&other.amps).all(|(a, b)| (a - b).norm() <= tol)
    }
}

fn dimension_to_qubits(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "amplitude count {len} is not a power of two"
        )));
    }
    let num_qubits = len.trailing_zeros() as usize;
    check_cap(num_qubits)?;
    Ok(num_qubits)
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateVector")
            .field("num_qubits", &self.num_qubits)
            .field("amps", &self.amps)
            .finish()
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{:0width$b}>", a.re, a.im, i, width = self.num_qubits)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Split of the qubits into register A (world labels, most-significant positions)
/// and register B (values correlated with each label).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    n_a: usize,
    n_b: usize,
}

impl RegisterLayout {
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a == 0 {
            return Err(Error::InvalidLayout("register A needs at least one qubit".into()));
        }
        check_cap(n_a + n_b)?;
        Ok(Self { n_a, n_b })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn num_qubits(&self) -> usize {
        self.n_a + self.n_b
    }

    pub fn register_a(&self) -> Vec<usize> {
        (0..self.n_a).collect()
    }

    pub fn register_b(&self) -> Vec<usize> {
        (self.n_a..self.n_a + self.n_b).collect()
    }

    pub fn check(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits() {
            return Err(Error::LayoutMismatch {
                n_a: self.n_a,
                n_b: self.n_b,
                num_qubits: state.num_qubits(),
            });
        }
        Ok(())
    }

    /// Basis index of `|label> ⊗ |value>`.
    #[inline]
    pub fn join(&self, label: usize, value: usize) -> usize {
        (label << self.n_b) | value
    }

    /// Split a basis index into `(label, value)`.
    #[inline]
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index >> self.n_b, index & ((1 << self.n_b) - 1))
    }

    /// Label rendered as a bitstring of length `n_a`.
    pub fn label_string(&self, label: usize) -> String {
        format!("{:0width$b}", label, width = self.n_a)
    }
}
