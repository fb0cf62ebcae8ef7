//! Braiding as a cycle of ground-space projections on the three-site chain,
//! the equivalent three-mode (dense) pipeline, and Berry-phase extraction.
//!
//! A projector sequence is stored in application order: the braid cycle is
//! `Π₀ → Π₁ → Π₂ → Π₀`, i.e. the operator `Π₀Π₂Π₁Π₀`.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    braiding_hamiltonian, ground_space_default, ChainSpec, HamiltonianStage, Stage,
};
use crate::error::{Error, Result};
use crate::tensor::{
    c, cis, eigenbasis, eigh, ensure_hermitian, identity, omega_pow, BasisKind, BasisLabel,
    Operator, StateVector, C64, ONE, ZERO,
};

pub const LOGICAL_DIM: usize = 3;
pub const CHAIN_DIM: usize = 27;

/// Reduce an angle to `(−π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ProjectorMode {
    Exact,
    Exponential { time: f64 },
}

/// Exact mode: spectral projector onto the ground space. Exponential mode:
/// `e^{−(H−E₀)t}`, whose ground sector has unit gain.
pub fn imaginary_time_projector(h: &Operator, mode: ProjectorMode) -> Result<Operator> {
    ensure_hermitian(h, 1e-10 * h.norm().max(1.0))?;
    match mode {
        ProjectorMode::Exact => Ok(ground_space_default(h)?.projector()),
        ProjectorMode::Exponential { time } => {
            if !(time >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "imaginary time must be non-negative, got {time}"
                )));
            }
            let (vals, vecs) = eigh(h)?;
            let e0 = vals[0];
            let d = DVector::from_iterator(
                vals.len(),
                vals.iter().map(|&e| c((-(e - e0) * time).exp(), 0.0)),
            );
            Ok(&vecs * Operator::from_diagonal(&d) * vecs.adjoint())
        }
    }
}

/// Projector onto the `+1` eigenspace of an operator with `X³ = I`.
pub fn unit_eigenspace_projector(x: &Operator) -> Operator {
    (identity(x.nrows()) + x + x * x) / c(3.0, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorStep {
    pub stage: Stage,
    pub projector: Operator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSequence {
    pub steps: Vec<ProjectorStep>,
}

fn product_ket(labels: &[BasisLabel]) -> Result<DVector<C64>> {
    let mut acc = DVector::from_element(1, ONE);
    for &l in labels {
        acc = acc.kronecker(eigenbasis(l, 3)?.amplitudes());
    }
    Ok(acc)
}

fn projector_from_kets(kets: &[DVector<C64>]) -> Operator {
    let dim = kets[0].len();
    let mut p = Operator::zeros(dim, dim);
    for k in kets {
        p += k * k.adjoint();
    }
    p
}

use BasisKind::{Chi, Sigma as Sg, Tau as Tu};

/// Per-term ground states of `H₁`: the field term fixes `|0⟩_τ` on site 1,
/// the bond term fixes equal σ labels on sites 2 and 3.
pub fn stage_one_term_projector() -> Result<Operator> {
    let kets = (0..3)
        .map(|k| {
            product_ket(&[
                BasisLabel::new(Tu, 0),
                BasisLabel::new(Sg, k),
                BasisLabel::new(Sg, k),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(projector_from_kets(&kets))
}

/// Ground states `|k⟩_σ|l⟩_τ|k−l⟩_χ` of the long term `σ₁τ₂†τ₃†σ₃†` of `H₂`.
pub fn stage_two_term_projector() -> Result<Operator> {
    let mut kets = Vec::with_capacity(9);
    for k in 0..3 {
        for l in 0..3 {
            kets.push(product_ket(&[
                BasisLabel::new(Sg, k),
                BasisLabel::new(Tu, l),
                BasisLabel::new(Chi, (k + 3 - l) % 3),
            ])?);
        }
    }
    Ok(projector_from_kets(&kets))
}

fn stage_projector(stage: Stage, mode: ProjectorMode) -> Result<Operator> {
    let h = braiding_hamiltonian(HamiltonianStage::spin(stage), &ChainSpec::braiding())?;
    imaginary_time_projector(&h, mode)
}

impl ProjectorSequence {
    /// Full-stage projectors `Π₀ → Π₁ → Π₂ → Π₀`.
    pub fn spectral(mode: ProjectorMode) -> Result<Self> {
        let p0 = stage_projector(Stage::H0, mode)?;
        let p1 = stage_projector(Stage::H1, mode)?;
        let p2 = stage_projector(Stage::H2, mode)?;
        Ok(Self::from_stages([p0.clone(), p1, p2, p0]))
    }

    /// `Π₀ → Π₁' → Π₂' → Π₀` with the intermediate projections done term by
    /// term on product eigenstates of σ, τ and χ.
    pub fn decomposed() -> Result<Self> {
        let p0 = stage_projector(Stage::H0, ProjectorMode::Exact)?;
        Ok(Self::from_stages([
            p0.clone(),
            stage_one_term_projector()?,
            stage_two_term_projector()?,
            p0,
        ]))
    }

    fn from_stages(p: [Operator; 4]) -> Self {
        let stages = [Stage::H0, Stage::H1, Stage::H2, Stage::H0];
        Self {
            steps: stages
                .into_iter()
                .zip(p)
                .map(|(stage, projector)| ProjectorStep { stage, projector })
                .collect(),
        }
    }

    /// Product in application order (first step rightmost).
    pub fn operator(&self) -> Operator {
        let mut acc = identity(CHAIN_DIM);
        for s in &self.steps {
            acc = &s.projector * acc;
        }
        acc
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        self.steps.iter().fold(v.clone(), |acc, s| &s.projector * acc)
    }

    /// Largest `‖Π² − Π‖` and `‖Π† − Π‖` over the steps.
    pub fn idempotency_residual(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| {
                let p = &s.projector;
                (p * p - p).norm().max((p.adjoint() - p).norm())
            })
            .fold(0.0, f64::max)
    }
}

/// `|ψ_l⟩ = Σ_k ω^{lk}|kkk⟩_σ/√3`
pub fn logical_basis() -> [StateVector; 3] {
    let r = 1.0 / 3f64.sqrt();
    let make = |l: usize| {
        let mut v = DVector::zeros(CHAIN_DIM);
        for k in 0..3 {
            v[13 * k] = omega_pow(3, (l * k) as i64) * r;
        }
        StateVector::normalized(v).expect("logical basis is normalized")
    };
    [make(0), make(1), make(2)]
}

/// Columns are the logical basis states.
pub fn logical_isometry() -> Operator {
    let mut v = Operator::zeros(CHAIN_DIM, 3);
    for (l, psi) in logical_basis().iter().enumerate() {
        v.set_column(l, psi.amplitudes());
    }
    v
}

pub fn check_coeffs(coeffs: &[C64; 3]) -> Result<()> {
    let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

pub fn encode_logical(coeffs: &[C64; 3]) -> Result<StateVector> {
    check_coeffs(coeffs)?;
    let v = logical_isometry() * DVector::from_column_slice(coeffs);
    StateVector::new(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decoded {
    pub coeffs: [C64; 3],
    pub leakage: f64,
}

/// Project onto the logical span, renormalize, and report the squared norm
/// that fell outside it.
pub fn decode_logical(state: &DVector<C64>) -> Result<Decoded> {
    if state.len() != CHAIN_DIM {
        return Err(Error::DimensionMismatch {
            expected: CHAIN_DIM,
            got: state.len(),
        });
    }
    let total = state.norm_squared();
    if total <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let amps = logical_isometry().adjoint() * state;
    let inside = amps.norm_squared();
    if inside <= 1e-24 * total {
        return Err(Error::FullyLeaked);
    }
    let s = 1.0 / inside.sqrt();
    Ok(Decoded {
        coeffs: [amps[0] * s, amps[1] * s, amps[2] * s],
        leakage: ((total - inside) / total).max(0.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BraidOutcome {
    pub state: StateVector,
    /// Squared norm removed by the projections.
    pub dissipated: f64,
    /// Weight of the input outside the ground space of `H₀`.
    pub input_leakage: f64,
    /// Weight of the output outside the logical span.
    pub leakage: f64,
}

pub fn braid_with(seq: &ProjectorSequence, state: &StateVector) -> Result<BraidOutcome> {
    if state.dim() != CHAIN_DIM {
        return Err(Error::DimensionMismatch {
            expected: CHAIN_DIM,
            got: state.dim(),
        });
    }
    let p0 = &seq.steps[0].projector;
    let input_leakage = (1.0 - (p0 * state.amplitudes()).norm_squared()).max(0.0);
    let out = seq.apply(state.amplitudes());
    let kept = out.norm_squared();
    if kept < 1e-28 {
        return Err(Error::OrthogonalEvolution);
    }
    let leakage = decode_logical(&out).map(|d| d.leakage).unwrap_or(1.0);
    Ok(BraidOutcome {
        state: StateVector::new(out)?,
        dissipated: 1.0 - kept,
        input_leakage,
        leakage,
    })
}

/// One braid with the term-by-term projections.
pub fn braid_full_space(state: &StateVector) -> Result<BraidOutcome> {
    braid_with(&ProjectorSequence::decomposed()?, state)
}

/// `−arg⟨ψ_l|Π₁Π₂|ψ_l⟩` in `(−π, π]`, where `Π₁Π₂` is read as the evolution
/// that applies `Π₁` first.
pub fn berry_phase_with(seq: &ProjectorSequence, l: usize) -> Result<f64> {
    if l >= 3 {
        return Err(Error::BasisIndexOutOfRange { index: l, order: 3 });
    }
    let psi = &logical_basis()[l];
    // ⟨ψ|Π₁Π₂|ψ⟩ = conj⟨ψ|Π₂Π₁|ψ⟩ for Hermitian projectors.
    let evolved = &seq.steps[2].projector * (&seq.steps[1].projector * psi.amplitudes());
    let overlap = psi.amplitudes().dotc(&evolved).conj();
    if overlap.norm() < 1e-12 {
        return Err(Error::VanishingOverlap {
            magnitude: overlap.norm(),
        });
    }
    Ok(wrap_pi(-overlap.arg()))
}

pub fn berry_phase(l: usize, mode: ProjectorMode) -> Result<f64> {
    berry_phase_with(&ProjectorSequence::spectral(mode)?, l)
}

/// `δφ_{B,l} = φ_{B,l} − φ_{B,0}` for `l = 0, 1, 2`.
pub fn relative_berry_phases(mode: ProjectorMode) -> Result<[f64; 3]> {
    let seq = ProjectorSequence::spectral(mode)?;
    let phi: Vec<f64> = (0..3)
        .map(|l| berry_phase_with(&seq, l))
        .collect::<Result<_>>()?;
    Ok([0.0, wrap_pi(phi[1] - phi[0]), wrap_pi(phi[2] - phi[0])])
}

/// Braid operator restricted to the logical span, `⟨ψ_i|B|ψ_j⟩`, rescaled
/// to be unitary. Also returns the scale that was divided out.
pub fn restricted_braid_matrix(seq: &ProjectorSequence) -> Result<(Operator, f64)> {
    let v = logical_isometry();
    let m = v.adjoint() * seq.operator() * &v;
    let scale = m.determinant().norm().powf(1.0 / 3.0);
    if scale < 1e-14 {
        return Err(Error::OrthogonalEvolution);
    }
    Ok((m / c(scale, 0.0), scale))
}

/// Entrywise max distance between `a` and `b` after removing the best
/// global phase.
pub fn phase_aligned_distance(a: &Operator, b: &Operator) -> f64 {
    let ov: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
    (a - b * phase)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Logical phases picked up by one braid of a state with all coefficients
/// nonzero, relative to the first: `arg(c'_l/c_l) − arg(c'_0/c_0)`.
pub fn state_relative_phases(
    seq: &ProjectorSequence,
    coeffs: &[C64; 3],
) -> Result<[f64; 3]> {
    for z in coeffs {
        if z.norm() < 1e-9 {
            return Err(Error::VanishingOverlap { magnitude: z.norm() });
        }
    }
    let out = braid_with(seq, &encode_logical(coeffs)?)?;
    let d = decode_logical(out.state.amplitudes())?;
    let ph: Vec<f64> = (0..3).map(|l| (d.coeffs[l] / coeffs[l]).arg()).collect();
    Ok([0.0, wrap_pi(ph[1] - ph[0]), wrap_pi(ph[2] - ph[0])])
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGateSet {
    pub p1: Operator,
    pub r2: Operator,
    pub p3: Operator,
    pub btilde: Operator,
    pub bs: Operator,
}

/// `F_{kl} = ω^{kl}/√3`; its columns are the coefficient vectors of `|ψ_l⟩`
/// on the modes `|kkk⟩`.
pub fn fourier_matrix() -> Operator {
    let r = 1.0 / 3f64.sqrt();
    Operator::from_fn(3, 3, |k, l| omega_pow(3, (k * l) as i64) * r)
}

/// Three-mode gates; `B̃ = P₃R₂P₁` and `B^S = F†B̃F` are computed, not typed in.
pub fn dense_braid_gates() -> DenseGateSet {
    let w = omega_pow(3, 1);
    let wb = w.conj();
    let r = c(1.0 / 3f64.sqrt(), 0.0);
    let p1 = identity(3);
    let r2 = Operator::from_row_slice(3, 3, &[ONE, wb, ONE, ONE, ONE, wb, ONE, w, w]) * r;
    let p3 = Operator::from_diagonal(&DVector::from_vec(vec![ONE, ONE, wb]));
    let btilde = &p3 * &r2 * &p1;
    let f = fourier_matrix();
    let bs = f.adjoint() * &btilde * &f;
    DenseGateSet {
        p1,
        r2,
        p3,
        btilde,
        bs,
    }
}

/// `e^{−iπ/6}·diag(1, 1, ω)`
pub fn expected_logical_braid() -> Operator {
    Operator::from_diagonal(&DVector::from_vec(vec![ONE, ONE, omega_pow(3, 1)])) * cis(-PI / 6.0)
}

/// Mode amplitudes `k₀ = F·c` pushed through `P₁`, `R₂`, `P₃`, then read back
/// as logical coefficients. Intermediate normalizations are dropped; the
/// result is renormalized once.
pub fn dense_pipeline(gates: &DenseGateSet, coeffs: &[C64; 3]) -> Result<[C64; 3]> {
    check_coeffs(coeffs)?;
    let f = fourier_matrix();
    let k0 = &f * DVector::from_column_slice(coeffs);
    let k1 = &gates.p1 * k0;
    let k2 = &gates.r2 * k1;
    let k3 = &gates.p3 * k2;
    let out = f.adjoint() * k3;
    let n = out.norm();
    if n < 1e-14 {
        return Err(Error::OrthogonalEvolution);
    }
    Ok([out[0] / n, out[1] / n, out[2] / n])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenseComparison {
    pub dense: [C64; 3],
    pub full: [C64; 3],
    pub distance: f64,
}

/// `√(1 − |⟨a|b⟩|²)`, evaluated as the norm of the part of `a` orthogonal
/// to `b` so that near-identical states don't lose half their digits.
pub fn pure_trace_distance(a: &[C64; 3], b: &[C64; 3]) -> f64 {
    let ov: C64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - ov * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn dense_vs_full_with(seq: &ProjectorSequence, coeffs: &[C64; 3]) -> Result<DenseComparison> {
    let dense = dense_pipeline(&dense_braid_gates(), coeffs)?;
    let out = braid_with(seq, &encode_logical(coeffs)?)?;
    let full = decode_logical(out.state.amplitudes())?.coeffs;
    Ok(DenseComparison {
        dense,
        full,
        distance: pure_trace_distance(&dense, &full),
    })
}

pub fn dense_vs_full_equivalence(coeffs: &[C64; 3]) -> Result<DenseComparison> {
    dense_vs_full_with(&ProjectorSequence::decomposed()?, coeffs)
}

pub fn basis_coeffs(l: usize) -> [C64; 3] {
    let mut v = [ZERO; 3];
    v[l] = ONE;
    v
}
