//! Boolean functions `f: {0,1}^n -> {0,1}` and the reversible oracle
//! `U_f: |x, y> -> |x, y ⊕ f(x)>`.
//!
//! Functions are stored as explicit truth tables indexed by `x` read as a
//! big-endian bit string, matching the basis-index order of register A.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::statecore::{Amplitude, RegisterLayout, StateVector, MAX_QUBITS};

/// Truth table of a single-output boolean function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionClass {
    Constant,
    Balanced,
    Neither,
}

impl FunctionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            FunctionClass::Constant => "constant",
            FunctionClass::Balanced => "balanced",
            FunctionClass::Neither => "neither",
        }
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl BooleanFunction {
    pub fn new(table: Vec<bool>) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidTruthTable(format!(
                "length {len} is not a power of two >= 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n + 1 > MAX_QUBITS {
            return Err(Error::QubitCap {
                requested: n + 1,
                cap: MAX_QUBITS,
            });
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTruthTable("function needs at least one input bit".into()));
        }
        if n + 1 > MAX_QUBITS {
            return Err(Error::QubitCap {
                requested: n + 1,
                cap: MAX_QUBITS,
            });
        }
        Self::new((0..1usize << n).map(f).collect())
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// Uniformly random truth table.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let table: Vec<bool> = (0..1usize << n).map(|_| rng.random()).collect();
        Self::new(table)
    }

    /// Uniformly random balanced table (exactly half the entries are 1).
    pub fn random_balanced<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let len = 1usize << n;
        let mut table: Vec<bool> = (0..len).map(|i| i < len / 2).collect();
        table.shuffle(rng);
        Self::new(table)
    }

    /// Number of input bits.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// `f(x)`. Panics if `x >= 2^n`.
    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn classify(&self) -> FunctionClass {
        let ones = self.table.iter().filter(|&&b| b).count();
        if ones == 0 || ones == self.table.len() {
            FunctionClass::Constant
        } else if 2 * ones == self.table.len() {
            FunctionClass::Balanced
        } else {
            FunctionClass::Neither
        }
    }
}

impl FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_truth_table(s)
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.table {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parse a line of `2^n` characters from `{0,1}`. Surrounding whitespace is ignored.
pub fn parse_truth_table(text: &str) -> Result<BooleanFunction> {
    let line = text.trim();
    let table = line
        .chars()
        .enumerate()
        .map(|(pos, ch)| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidTruthTable(format!(
                "invalid character {other:?} at position {pos}"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    BooleanFunction::new(table)
}

pub fn classify(f: &BooleanFunction) -> FunctionClass {
    f.classify()
}

/// Layout requirements for running `f` as an oracle.
pub(crate) fn check_oracle_layout(f: &BooleanFunction, layout: &RegisterLayout) -> Result<()> {
    if layout.n_a() != f.n() {
        return Err(Error::ArityMismatch {
            expected: layout.n_a(),
            actual: f.n(),
        });
    }
    if layout.n_b() != 1 {
        return Err(Error::InvalidLayout(format!(
            "oracle output register must be one qubit, got {}",
            layout.n_b()
        )));
    }
    Ok(())
}

/// XOR `f(x)` into the register-B bit by swapping amplitude pairs.
pub(crate) fn permute_in_place(amps: &mut [Amplitude], f: &BooleanFunction, layout: &RegisterLayout) {
    for (x, _) in f.table.iter().enumerate().filter(|(_, &fx)| fx) {
        amps.swap(layout.join(x, 0), layout.join(x, 1));
    }
}

/// Apply `U_f` to `state`.
pub fn apply_uf(state: &StateVector, f: &BooleanFunction, layout: &RegisterLayout) -> Result<StateVector> {
    check_oracle_layout(f, layout)?;
    layout.check(state)?;
    let mut out = state.clone();
    permute_in_place(out.amplitudes_mut(), f, layout);
    Ok(out)
}

/// Reference implementation of [`apply_uf`]: a literal walk over every basis
/// index, decoding its bits and writing the amplitude to the permuted index.
#[allow(clippy::needless_range_loop)]
pub fn brute_force_uf(state: &StateVector, f: &BooleanFunction, layout: &RegisterLayout) -> Result<StateVector> {
    check_oracle_layout(f, layout)?;
    layout.check(state)?;
    let total = layout.num_qubits();
    let amps = state.amplitudes();
    let mut out = vec![Amplitude::new(0.0, 0.0); amps.len()];
    for index in 0..amps.len() {
        let bits: Vec<u8> = (0..total).map(|q| ((index >> (total - 1 - q)) & 1) as u8).collect();
        let mut x = 0usize;
        for &b in &bits[..f.n()] {
            x = 2 * x + b as usize;
        }
        let y = bits[total - 1];
        let fx = u8::from(f.table()[x]);
        let mut new_bits = bits.clone();
        new_bits[total - 1] = (y + fx) % 2;
        let mut target = 0usize;
        for &b in &new_bits {
            target = 2 * target + b as usize;
        }
        out[target] = amps[index];
    }
    Ok(StateVector::from_parts_unchecked(state.num_qubits(), out))
}
