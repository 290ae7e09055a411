use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::oracle::{self, BooleanFunction};

use super::state::{check_qubits, qubit_mask, Amplitude, RegisterLayout, StateVector};

/// Tolerance on `U U^† = I` for matrices carried by a [`GateSpec`].
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Largest target set for which an explicit full matrix may be supplied.
pub const FULL_MATRIX_MAX_QUBITS: usize = 8;

/// Row-major 2x2 complex matrix.
pub type Matrix2 = [[Amplitude; 2]; 2];

const fn re(x: f64) -> Amplitude {
    Amplitude::new(x, 0.0)
}

pub const HADAMARD: Matrix2 = [
    [re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)],
    [re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2)],
];
pub const PAULI_X: Matrix2 = [[re(0.0), re(1.0)], [re(1.0), re(0.0)]];
pub const PAULI_Z: Matrix2 = [[re(1.0), re(0.0)], [re(0.0), re(-1.0)]];
pub const IDENTITY: Matrix2 = [[re(1.0), re(0.0)], [re(0.0), re(1.0)]];

/// Rotation about Y: `|0> -> cos(θ/2)|0> + sin(θ/2)|1>`.
pub fn ry_matrix(theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[re(c), re(-s)], [re(s), re(c)]]
}

/// A gate to apply to a state vector.
#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    Single {
        target: usize,
        matrix: Matrix2,
    },
    Controlled {
        control: usize,
        target: usize,
        matrix: Matrix2,
    },
    HadamardLayer {
        targets: Vec<usize>,
    },
    /// `|x, y> -> |x, y ⊕ f(x)>` over the given layout.
    Oracle {
        function: BooleanFunction,
        layout: RegisterLayout,
    },
    /// Explicit `2^k x 2^k` row-major matrix acting on `targets` (`targets[0]` most significant).
    Unitary {
        targets: Vec<usize>,
        matrix: Vec<Amplitude>,
    },
}

impl GateSpec {
    /// Identity on qubit 0; reads a state in the computational basis.
    pub fn identity() -> Self {
        GateSpec::Single {
            target: 0,
            matrix: IDENTITY,
        }
    }

    pub fn hadamard(target: usize) -> Self {
        GateSpec::Single {
            target,
            matrix: HADAMARD,
        }
    }

    pub fn pauli_x(target: usize) -> Self {
        GateSpec::Single {
            target,
            matrix: PAULI_X,
        }
    }

    pub fn ry(target: usize, theta: f64) -> Self {
        GateSpec::Single {
            target,
            matrix: ry_matrix(theta),
        }
    }

    pub fn controlled_ry(control: usize, target: usize, theta: f64) -> Self {
        GateSpec::Controlled {
            control,
            target,
            matrix: ry_matrix(theta),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateSpec::Controlled {
            control,
            target,
            matrix: PAULI_X,
        }
    }

    pub fn hadamard_layer(targets: impl IntoIterator<Item = usize>) -> Self {
        GateSpec::HadamardLayer {
            targets: targets.into_iter().collect(),
        }
    }

    pub fn oracle(function: BooleanFunction, layout: RegisterLayout) -> Self {
        GateSpec::Oracle { function, layout }
    }

    pub fn unitary(targets: Vec<usize>, matrix: Vec<Amplitude>) -> Self {
        GateSpec::Unitary { targets, matrix }
    }

    /// Check the gate against a register of `num_qubits` qubits.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        match self {
            GateSpec::Single { target, matrix } => {
                check_qubits(num_qubits, &[*target])?;
                check_unitary(&flatten(matrix), 2)
            }
            GateSpec::Controlled {
                control,
                target,
                matrix,
            } => {
                if control == target {
                    return Err(Error::ControlIsTarget(*control));
                }
                check_qubits(num_qubits, &[*control, *target])?;
                check_unitary(&flatten(matrix), 2)
            }
            GateSpec::HadamardLayer { targets } => check_qubits(num_qubits, targets),
            GateSpec::Oracle { function, layout } => {
                if layout.num_qubits() != num_qubits {
                    return Err(Error::LayoutMismatch {
                        n_a: layout.n_a(),
                        n_b: layout.n_b(),
                        num_qubits,
                    });
                }
                oracle::check_oracle_layout(function, layout)
            }
            GateSpec::Unitary { targets, matrix } => {
                check_qubits(num_qubits, targets)?;
                if targets.len() > FULL_MATRIX_MAX_QUBITS {
                    return Err(Error::QubitCap {
                        requested: targets.len(),
                        cap: FULL_MATRIX_MAX_QUBITS,
                    });
                }
                let dim = 1usize << targets.len();
                if matrix.len() != dim * dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim * dim,
                        actual: matrix.len(),
                    });
                }
                check_unitary(matrix, dim)
            }
        }
    }
}

fn flatten(m: &Matrix2) -> [Amplitude; 4] {
    [m[0][0], m[0][1], m[1][0], m[1][1]]
}

/// Max-entry deviation of `U U^†` from the identity.
pub fn unitarity_deviation(matrix: &[Amplitude], dim: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let dot: Amplitude = (0..dim).map(|k| matrix[i * dim + k] * matrix[j * dim + k].conj()).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - expected).norm());
        }
    }
    worst
}

fn check_unitary(matrix: &[Amplitude], dim: usize) -> Result<()> {
    if matrix.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NonUnitary {
            deviation: f64::INFINITY,
        });
    }
    let deviation = unitarity_deviation(matrix, dim);
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(())
}

/// `U · state`, leaving the input untouched.
pub fn apply_gate(state: &StateVector, gate: &GateSpec) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_in_place(gate)?;
    Ok(out)
}

impl StateVector {
    pub fn apply(&self, gate: &GateSpec) -> Result<StateVector> {
        apply_gate(self, gate)
    }

    pub fn apply_in_place(&mut self, gate: &GateSpec) -> Result<()> {
        gate.validate(self.num_qubits())?;
        let n = self.num_qubits();
        match gate {
            GateSpec::Single { target, matrix } => apply_single(self.amplitudes_mut(), n, *target, matrix, None),
            GateSpec::Controlled {
                control,
                target,
                matrix,
            } => apply_single(self.amplitudes_mut(), n, *target, matrix, Some(*control)),
            GateSpec::HadamardLayer { targets } => {
                for &t in targets {
                    apply_single(self.amplitudes_mut(), n, t, &HADAMARD, None);
                }
            }
            GateSpec::Oracle { function, layout } => oracle::permute_in_place(self.amplitudes_mut(), function, layout),
            GateSpec::Unitary { targets, matrix } => apply_full(self.amplitudes_mut(), n, targets, matrix),
        }
        Ok(())
    }
}

/// Stride iteration over amplitude pairs differing only in the target bit.
fn apply_single(amps: &mut [Amplitude], num_qubits: usize, target: usize, m: &Matrix2, control: Option<usize>) {
    let t = qubit_mask(num_qubits, target);
    let c = control.map_or(0, |q| qubit_mask(num_qubits, q));
    let dim = amps.len();
    let mut block = 0;
    while block < dim {
        for i in block..block + t {
            if i & c != c {
                continue;
            }
            let j = i | t;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
        block += 2 * t;
    }
}

fn apply_full(amps: &mut [Amplitude], num_qubits: usize, targets: &[usize], matrix: &[Amplitude]) {
    let k = targets.len();
    let sub_dim = 1usize << k;
    // offset[s] = basis-index bits contributed by sub-index s
    let offsets: Vec<usize> = (0..sub_dim)
        .map(|s| {
            targets.iter().enumerate().fold(0, |acc, (pos, &q)| {
                if s & (1 << (k - 1 - pos)) != 0 {
                    acc | qubit_mask(num_qubits, q)
                } else {
                    acc
                }
            })
        })
        .collect();
    let target_mask = offsets[sub_dim - 1];
    let mut gathered = vec![Amplitude::new(0.0, 0.0); sub_dim];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        for (row, off) in offsets.iter().enumerate() {
            amps[base | off] = matrix[row * sub_dim..(row + 1) * sub_dim]
                .iter()
                .zip(&gathered)
                .map(|(m, g)| m * g)
                .sum();
        }
    }
}
