//! Qutrit contextuality witnesses: the stabilizer family `A^{xz}` whose
//! maximum `M` certifies a magic-state-distillation resource, and the
//! five-setting KCBS sum.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    c, clock_shift_ops, identity, mat_pow, omega_pow, DensityMatrix, Operator, C64,
};

/// `a = (1,0,1,2)`
pub const WITNESS_A: [u8; 4] = [1, 0, 1, 2];
/// `b = −(0,1,1,1) mod 3`
pub const WITNESS_B: [u8; 4] = [0, 2, 2, 2];

/// Weyl–Heisenberg displacement `D_{x,z} = ω^{2xz} τ^x σ^z` (2 = 2⁻¹ mod 3).
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementOp {
    pub x: u8,
    pub z: u8,
    pub matrix: Operator,
}

impl DisplacementOp {
    pub fn new(x: u8, z: u8) -> Self {
        let (tau, sigma) = clock_shift_ops(3).expect("n = 3");
        let (x, z) = (x % 3, z % 3);
        let phase = omega_pow(3, (2 * x as i64 * z as i64) % 3);
        let matrix = mat_pow(&tau, x as u32) * mat_pow(&sigma, z as u32) * phase;
        Self { x, z, matrix }
    }

    /// `Π^r = (1/3)Σ_m ω^{−rm} D^m`, the projector onto eigenvalue `ω^r`.
    pub fn eigenprojector(&self, r: u8) -> Operator {
        let mut p = Operator::zeros(3, 3);
        for m in 0..3u32 {
            p += mat_pow(&self.matrix, m) * omega_pow(3, -(r as i64) * m as i64);
        }
        p / c(3.0, 0.0)
    }
}

/// `D₀,₁, D₁,₀, D₁,₁, D₁,₂` in this order.
pub fn displacement_list() -> [DisplacementOp; 4] {
    [
        DisplacementOp::new(0, 1),
        DisplacementOp::new(1, 0),
        DisplacementOp::new(1, 1),
        DisplacementOp::new(1, 2),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WitnessVector {
    pub r: [u8; 4],
}

impl WitnessVector {
    /// `r = x·a + z·b mod 3`
    pub fn new(x: u8, z: u8) -> Self {
        let mut r = [0u8; 4];
        for j in 0..4 {
            r[j] = ((x as u32 * WITNESS_A[j] as u32 + z as u32 * WITNESS_B[j] as u32) % 3) as u8;
        }
        Self { r }
    }
}

fn check_index(x: u8, z: u8) -> Result<()> {
    if x > 2 || z > 2 {
        return Err(Error::InvalidArgument(format!(
            "witness index ({x},{z}) outside 0..=2"
        )));
    }
    Ok(())
}

/// `A^{xz} = I − Σ_j Π_j^{r_j}`
pub fn witness_operator(x: u8, z: u8) -> Result<Operator> {
    check_index(x, z)?;
    let r = WitnessVector::new(x, z).r;
    let mut a = identity(3);
    for (d, rj) in displacement_list().iter().zip(r) {
        a -= d.eigenprojector(rj);
    }
    Ok(a)
}

/// `Tr[A^{xz}ρ]` indexed `[x][z]`.
pub type WitnessTable = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagicResult {
    pub value: f64,
    pub argmax: (u8, u8),
}

#[derive(Debug, Clone)]
pub struct WitnessFamily {
    ops: Vec<Operator>,
}

impl Default for WitnessFamily {
    fn default() -> Self {
        Self::new()
    }
}

impl WitnessFamily {
    pub fn new() -> Self {
        let ops = (0..9)
            .map(|i| witness_operator(i / 3, i % 3).expect("index in range"))
            .collect();
        Self { ops }
    }

    pub fn operator(&self, x: u8, z: u8) -> &Operator {
        &self.ops[3 * x as usize + z as usize]
    }

    pub fn operators(&self) -> &[Operator] {
        &self.ops
    }

    pub fn table(&self, rho: &DensityMatrix) -> Result<WitnessTable> {
        if rho.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: rho.dim(),
            });
        }
        let mut t = [[0.0; 3]; 3];
        for x in 0..3 {
            for z in 0..3 {
                t[x][z] = rho.expectation(self.operator(x as u8, z as u8));
            }
        }
        Ok(t)
    }

    /// Max over the table; ties resolve to the lexicographically first `(x,z)`.
    pub fn magic(&self, rho: &DensityMatrix) -> Result<MagicResult> {
        Ok(table_max(&self.table(rho)?))
    }
}

pub fn table_max(t: &WitnessTable) -> MagicResult {
    let mut best = MagicResult {
        value: t[0][0],
        argmax: (0, 0),
    };
    for x in 0..3 {
        for z in 0..3 {
            if t[x][z] > best.value + 1e-12 {
                best = MagicResult {
                    value: t[x][z],
                    argmax: (x as u8, z as u8),
                };
            }
        }
    }
    best
}

pub fn witness_table(rho: &DensityMatrix) -> Result<WitnessTable> {
    WitnessFamily::new().table(rho)
}

/// `M = max_{x,z} Tr[A^{xz}ρ]`; `M ≤ 0` is explainable without contextuality.
pub fn magic_witness(rho: &DensityMatrix) -> Result<MagicResult> {
    WitnessFamily::new().magic(rho)
}

pub fn flatten(t: &WitnessTable) -> [f64; 9] {
    let mut out = [0.0; 9];
    for x in 0..3 {
        for z in 0..3 {
            out[3 * x + z] = t[x][z];
        }
    }
    out
}

/// For each `A^i`, the index `j` with `U A^i U† = A^j`, if conjugation by `U`
/// permutes the family.
pub fn conjugation_permutation(family: &WitnessFamily, u: &Operator, tol: f64) -> Option<[usize; 9]> {
    let mut perm = [0usize; 9];
    let mut used = [false; 9];
    for (i, a) in family.operators().iter().enumerate() {
        let conj = u * a * u.adjoint();
        let j = family
            .operators()
            .iter()
            .position(|b| (&conj - b).norm() < tol)?;
        if used[j] {
            return None;
        }
        used[j] = true;
        perm[i] = j;
    }
    Some(perm)
}

/// Five rank-one KCBS projectors, stored so that cyclic neighbours are
/// compatible (orthogonal).
#[derive(Debug, Clone, PartialEq)]
pub struct KcbsSettings {
    pub vectors: [DVector<C64>; 5],
}

impl KcbsSettings {
    pub fn projectors(&self) -> Vec<Operator> {
        self.vectors.iter().map(|v| v * v.adjoint()).collect()
    }

    /// `|⟨i|j⟩|` for all pairs.
    pub fn orthogonality_table(&self) -> [[f64; 5]; 5] {
        let mut t = [[0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                t[i][j] = self.vectors[i].dotc(&self.vectors[j]).norm();
            }
        }
        t
    }

    /// Cyclic-neighbour overlaps `|⟨k|k+1⟩|`.
    pub fn neighbour_overlaps(&self) -> [f64; 5] {
        let t = self.orthogonality_table();
        std::array::from_fn(|k| t[k][(k + 1) % 5])
    }

    pub fn check_compatible(&self, tol: f64) -> Result<()> {
        for (k, &ov) in self.neighbour_overlaps().iter().enumerate() {
            if ov > tol {
                return Err(Error::IncompatibleSettings {
                    first: k,
                    second: (k + 1) % 5,
                    overlap: ov,
                });
            }
        }
        Ok(())
    }
}

/// `√(1−1/√5)·(cos(2kπ/5), sin(2kπ/5), √(1+√5)/2)`, `k = 1…5`, returned in
/// the pentagram order `1, 3, 5, 2, 4` (entries `k` and `k+2` are orthogonal).
pub fn kcbs_optimal_settings() -> KcbsSettings {
    let s5 = 5f64.sqrt();
    let pre = (1.0 - 1.0 / s5).sqrt();
    let h = (1.0 + s5).sqrt() / 2.0;
    let v = |k: usize| {
        let a = 2.0 * k as f64 * PI / 5.0;
        DVector::from_vec(vec![c(pre * a.cos(), 0.0), c(pre * a.sin(), 0.0), c(pre * h, 0.0)])
    };
    KcbsSettings {
        vectors: [v(1), v(3), v(5), v(2), v(4)],
    }
}

pub const KCBS_COMPAT_TOL: f64 = 1e-10;

/// `K = Σ_i Tr[B_i ρ]`; NCHV bound 2, quantum maximum √5.
pub fn kcbs_value(rho: &DensityMatrix, settings: &KcbsSettings) -> Result<f64> {
    settings.check_compatible(KCBS_COMPAT_TOL)?;
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: rho.dim(),
        });
    }
    Ok(settings.projectors().iter().map(|b| rho.expectation(b)).sum())
}

pub fn kcbs_quantum_max() -> f64 {
    5f64.sqrt()
}

/// `√5 − K_obs`. The robust self-testing bound puts the trace distance to the
/// ideal state at order `√deficit`; its constant is not reproduced here.
pub fn self_test_deficit(k_obs: f64) -> Result<f64> {
    let kmax = kcbs_quantum_max();
    if k_obs > kmax + 1e-12 {
        return Err(Error::KcbsAboveQuantumBound(k_obs));
    }
    if k_obs < 0.0 {
        return Err(Error::NegativeKcbs(k_obs));
    }
    Ok((kmax - k_obs).max(0.0))
}
