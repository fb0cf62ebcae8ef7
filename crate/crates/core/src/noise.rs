//! Noise channels on the encoded chain (hopping `X^S`, phase `Z^S`) and on a
//! bare qutrit (flip `T`, dephase `Σ`), plus witness sweeps over them.
//!
//! Chain channels are trace non-increasing in effect: after the channel the
//! state is projected back onto the ground space of `H₀^S` (the dissipative
//! imaginary-time step) and renormalized, and whatever was removed is
//! reported as leakage.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::braid::logical_isometry;
use crate::error::{Error, Result};
use crate::tensor::{
    c, clock_shift_ops, embed_site, ensure_dim, identity, kron_all, DensityMatrix, Operator,
    StateVector, C64,
};
use crate::witness::{
    flatten, kcbs_optimal_settings, kcbs_value, table_max, KcbsSettings, WitnessFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceMode {
    Preserving,
    Renormalize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTerm {
    pub weight: f64,
    pub op: Operator,
}

/// `ρ ↦ Σ_i w_i K_i ρ K_i†`
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub name: String,
    pub terms: Vec<ChannelTerm>,
    pub trace_mode: TraceMode,
}

fn check_prob(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange { value: p });
    }
    Ok(p)
}

impl Channel {
    pub fn new(name: impl Into<String>, terms: Vec<ChannelTerm>, trace_mode: TraceMode) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("channel needs at least one term".into()))?;
        let dim = first.op.nrows();
        for t in &terms {
            check_prob(t.weight)?;
            ensure_dim(&t.op, dim)?;
        }
        Ok(Self {
            name: name.into(),
            terms,
            trace_mode,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            name: "id".into(),
            terms: vec![ChannelTerm {
                weight: 1.0,
                op: identity(dim),
            }],
            trace_mode: TraceMode::Preserving,
        }
    }

    pub fn dim(&self) -> usize {
        self.terms[0].op.nrows()
    }

    /// Raw (unrenormalized) action.
    pub fn apply(&self, rho: &Operator) -> Result<Operator> {
        ensure_dim(rho, self.dim())?;
        let mut out = Operator::zeros(rho.nrows(), rho.ncols());
        for t in &self.terms {
            if t.weight != 0.0 {
                out += &t.op * rho * t.op.adjoint() * c(t.weight, 0.0);
            }
        }
        Ok(out)
    }

    /// Apply to a density matrix, renormalizing in `Renormalize` mode.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply(rho.matrix())?;
        let out = match self.trace_mode {
            TraceMode::Preserving => out,
            TraceMode::Renormalize => {
                let tr = out.trace().re;
                if tr <= 0.0 {
                    return Err(Error::FullyLeaked);
                }
                out / c(tr, 0.0)
            }
        };
        DensityMatrix::new(out)
    }
}

/// Sequential application in list order; any renormalizing member makes the
/// composite renormalize at the end.
pub fn compose(channels: &[Channel]) -> Result<Channel> {
    let first = channels
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to compose".into()))?;
    let dim = first.dim();
    let mut terms = vec![ChannelTerm {
        weight: 1.0,
        op: identity(dim),
    }];
    let mut mode = TraceMode::Preserving;
    for ch in channels {
        if ch.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: ch.dim(),
            });
        }
        if ch.trace_mode == TraceMode::Renormalize {
            mode = TraceMode::Renormalize;
        }
        let mut next = Vec::with_capacity(terms.len() * ch.terms.len());
        for a in &terms {
            for b in &ch.terms {
                next.push(ChannelTerm {
                    weight: a.weight * b.weight,
                    op: &b.op * &a.op,
                });
            }
        }
        terms = next;
    }
    let name = channels
        .iter()
        .rev()
        .map(|c| c.name.as_str())
        .collect::<Vec<_>>()
        .join("∘");
    Ok(Channel {
        name,
        terms,
        trace_mode: mode,
    })
}

/// `X^S = (1/9)σ₁†(2−τ₁−τ₁†)τ₁ σ₂(2−τ₂−τ₂†)` on the three-site chain.
pub fn hopping_operator() -> Operator {
    let (t, s) = clock_shift_ops(3).expect("n = 3");
    let bump = identity(3) * c(2.0, 0.0) - &t - t.adjoint();
    let site1 = s.adjoint() * &bump * &t;
    let site2 = &s * &bump;
    kron_all(&[site1, site2, identity(3)]).expect("27 states") / c(9.0, 0.0)
}

/// `Z^S = (1/3)(3 − τ₁ − τ₁†)`
pub fn phase_operator() -> Operator {
    let (t, _) = clock_shift_ops(3).expect("n = 3");
    let site = (identity(3) * c(3.0, 0.0) - &t - t.adjoint()) / c(3.0, 0.0);
    embed_site(&site, 1, 3).expect("27 states")
}

fn mix(name: &str, p: f64, noise: Vec<(f64, Operator)>, mode: TraceMode) -> Result<Channel> {
    check_prob(p)?;
    let dim = noise[0].1.nrows();
    let mut terms = vec![ChannelTerm {
        weight: 1.0 - p,
        op: identity(dim),
    }];
    terms.extend(noise.into_iter().map(|(w, op)| ChannelTerm { weight: w, op }));
    Channel::new(name, terms, mode)
}

/// `ρ ↦ (1−p)ρ + p X^S ρ X^S†`
pub fn hopping_channel(p: f64) -> Result<Channel> {
    mix("X", p, vec![(p, hopping_operator())], TraceMode::Renormalize)
}

/// `ρ ↦ (1−q)ρ + q Z^S ρ Z^S†`
pub fn phase_channel(q: f64) -> Result<Channel> {
    mix("Z", q, vec![(q, phase_operator())], TraceMode::Renormalize)
}

/// `T(ρ) = (1−p)ρ + (p/2)(τρτ† + τ†ρτ)`
pub fn flip_channel(p: f64) -> Result<Channel> {
    let (t, _) = clock_shift_ops(3)?;
    let td = t.adjoint();
    mix("T", p, vec![(p / 2.0, t), (p / 2.0, td)], TraceMode::Preserving)
}

/// `Σ(ρ) = (1−q)ρ + (q/2)(σρσ† + σ†ρσ)`
pub fn dephase_channel(q: f64) -> Result<Channel> {
    let (_, s) = clock_shift_ops(3)?;
    let sd = s.adjoint();
    mix("Σ", q, vec![(q / 2.0, s), (q / 2.0, sd)], TraceMode::Preserving)
}

/// `⟨ψ_i|E(|ψ_j⟩⟨ψ_j|)|ψ_i⟩` for a chain channel, indexed `[i][j]`.
pub fn logical_transfer_table(channel: &Channel) -> Result<[[f64; 3]; 3]> {
    let v = logical_isometry();
    let mut out = [[0.0; 3]; 3];
    for j in 0..3 {
        let psi = v.column(j).into_owned();
        let rho = &psi * psi.adjoint();
        let e = channel.apply(&rho)?;
        for (i, row) in out.iter_mut().enumerate() {
            let phi = v.column(i).into_owned();
            row[j] = phi.dotc(&(&e * &phi)).re;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainNoiseOutcome {
    /// Decoded logical state after projection and renormalization.
    pub logical: DensityMatrix,
    /// Trace left in the ground space.
    pub retained: f64,
    /// Trace the channel put outside the ground space.
    pub outside: f64,
    /// Trace the channel itself removed.
    pub lost: f64,
}

impl ChainNoiseOutcome {
    pub fn leakage(&self) -> f64 {
        self.outside + self.lost
    }
}

/// Encode a logical density matrix, apply the chain channel, project onto
/// the ground space of `H₀^S`, and decode.
pub fn apply_chain_channel(channel: &Channel, logical: &DensityMatrix) -> Result<ChainNoiseOutcome> {
    if logical.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: logical.dim(),
        });
    }
    let v = logical_isometry();
    ensure_dim(&channel.terms[0].op, v.nrows())?;
    let rho = &v * logical.matrix() * v.adjoint();
    let out = channel.apply(&rho)?;
    let total = out.trace().re;
    let block = v.adjoint() * &out * &v;
    let retained = block.trace().re;
    if retained <= 1e-15 {
        return Err(Error::FullyLeaked);
    }
    let block = (&block + block.adjoint()) * c(0.5 / retained, 0.0);
    Ok(ChainNoiseOutcome {
        logical: DensityMatrix::new(block)?,
        retained,
        outside: total - retained,
        lost: 1.0 - total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseFamily {
    /// `T∘Σ` on a bare qutrit.
    FlipDephase,
    /// `X^S∘Z^S` on the encoded chain.
    HoppingPhase,
}

impl NoiseFamily {
    /// Σ (resp. Z^S) is applied first, then T (resp. X^S).
    pub fn channel(self, p: f64, q: f64) -> Result<Channel> {
        match self {
            NoiseFamily::FlipDephase => compose(&[dephase_channel(q)?, flip_channel(p)?]),
            NoiseFamily::HoppingPhase => compose(&[phase_channel(q)?, hopping_channel(p)?]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NoiseFamily::FlipDephase => "T∘Σ",
            NoiseFamily::HoppingPhase => "X^S∘Z^S",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

fn axis(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidArgument(format!("grid step {step} not in (0, 1]")));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    let mut v: Vec<f64> = (0..=n)
        .map(|i| ((i as f64 * step) * 1e12).round() / 1e12)
        .collect();
    if *v.last().unwrap() < 1.0 - 1e-12 {
        v.push(1.0);
    }
    Ok(v)
}

impl Grid {
    /// `p, q ∈ {0, step, …, 1}`
    pub fn uniform(step: f64) -> Result<Self> {
        let a = axis(step)?;
        Ok(Self { p: a.clone(), q: a })
    }

    /// `p ∈ {0, step, …, 1}`, `q = 0`.
    pub fn line(step: f64) -> Result<Self> {
        Ok(Self {
            p: axis(step)?,
            q: vec![0.0],
        })
    }

    pub fn from_points(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        for &x in p.iter().chain(&q) {
            check_prob(x)?;
        }
        let mut g = Self { p, q };
        g.p.sort_by(f64::total_cmp);
        g.q.sort_by(f64::total_cmp);
        Ok(g)
    }
}

/// Logical states fed to a sweep: `M` is evaluated on one, `K` on the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepStates {
    pub magic: [C64; 3],
    pub kcbs: [C64; 3],
}

impl Default for SweepStates {
    /// `(1/2, 0, −√3/2)` for `M` and `(0, 0, 1)` for `K`.
    fn default() -> Self {
        Self {
            magic: resource_state(),
            kcbs: [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        }
    }
}

/// `(1/2, 0, −√3/2)`, the magic resource state used in the sweeps.
pub fn resource_state() -> [C64; 3] {
    [c(0.5, 0.0), c(0.0, 0.0), c(-(3f64.sqrt()) / 2.0, 0.0)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub q: f64,
    pub m: f64,
    pub m_argmax: (u8, u8),
    pub k: f64,
    pub leakage: f64,
    /// `Tr[A^{xz}ρ]` flattened as `3x + z`.
    pub table: [f64; 9],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: NoiseFamily,
    pub grid: Grid,
    pub points: Vec<SweepPoint>,
}

struct Evaluator {
    family: WitnessFamily,
    kcbs: KcbsSettings,
}

fn noisy_logical(fam: NoiseFamily, ch: &Channel, state: &[C64; 3]) -> Result<(DensityMatrix, f64)> {
    let rho = DensityMatrix::pure(&StateVector::new(DVector::from_column_slice(state))?);
    match fam {
        NoiseFamily::FlipDephase => Ok((ch.apply_state(&rho)?, 0.0)),
        NoiseFamily::HoppingPhase => {
            let out = apply_chain_channel(ch, &rho)?;
            let leak = out.leakage();
            Ok((out.logical, leak))
        }
    }
}

impl Evaluator {
    fn point(&self, fam: NoiseFamily, states: &SweepStates, p: f64, q: f64) -> Result<SweepPoint> {
        let ch = fam.channel(p, q)?;
        let (rho_m, leak_m) = noisy_logical(fam, &ch, &states.magic)?;
        let (rho_k, _) = noisy_logical(fam, &ch, &states.kcbs)?;
        let table = self.family.table(&rho_m)?;
        let best = table_max(&table);
        Ok(SweepPoint {
            p,
            q,
            m: best.value,
            m_argmax: best.argmax,
            k: kcbs_value(&rho_k, &self.kcbs)?,
            leakage: leak_m,
            table: flatten(&table),
        })
    }
}

/// `M` and `K` at every grid point (q-major within each p), on the decoded
/// logical state for chain noise.
pub fn sweep_witness(family: NoiseFamily, states: &SweepStates, grid: &Grid) -> Result<SweepResult> {
    let ev = Evaluator {
        family: WitnessFamily::new(),
        kcbs: kcbs_optimal_settings(),
    };
    let mut points = Vec::with_capacity(grid.p.len() * grid.q.len());
    for &p in &grid.p {
        check_prob(p)?;
        for &q in &grid.q {
            check_prob(q)?;
            points.push(ev.point(family, states, p, q)?);
        }
    }
    Ok(SweepResult {
        family,
        grid: grid.clone(),
        points,
    })
}

/// `√5 − ((3√5−5)/2)·p`
pub fn kcbs_under_flip(p: f64) -> f64 {
    let s5 = 5f64.sqrt();
    s5 - (3.0 * s5 - 5.0) / 2.0 * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fock_parafermion, ChainSpec};
    use crate::braid::encode_logical;
    use crate::tensor::{max_abs_diff, ONE, ZERO};
    use crate::witness::magic_witness;
    use nalgebra::DMatrix;

    fn pure(v: &[C64; 3]) -> DensityMatrix {
        DensityMatrix::pure(&StateVector::from_slice(v).unwrap())
    }

    fn random_rho(seed: u64) -> DensityMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(3, 3, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let m = &a * a.adjoint();
        let tr = m.trace();
        DensityMatrix::new(m / tr).unwrap()
    }

    #[test]
    fn hopping_ground_block_is_scalar() {
        // X^S restricted to the logical span is −(2/9)·I
        let v = logical_isometry();
        let blk = v.adjoint() * hopping_operator() * &v;
        assert!(max_abs_diff(&blk, &(identity(3) * c(-2.0 / 9.0, 0.0))) < 1e-15);
        let blk = v.adjoint() * phase_operator() * &v;
        assert!(max_abs_diff(&blk, &identity(3)) < 1e-15);
    }

    #[test]
    fn hopping_transfer_law() {
        // actual law: (1 − p + 4p/81)·δ_ij
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let t = logical_transfer_table(&hopping_channel(p).unwrap()).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { 1.0 - p + 4.0 * p / 81.0 } else { 0.0 };
                    assert!((t[i][j] - want).abs() < 1e-14, "p={p} ({i},{j})");
                }
            }
        }
        let t = logical_transfer_table(&phase_channel(0.4).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((t[i][j] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn fock_hopping_on_ground_space() {
        // C₁†C₂ restricted to span{ψ_l}: (2/9)e^{iπ/3}·I, not the printed X^S
        let s = ChainSpec::braiding();
        let c1 = fock_parafermion(1, &s).unwrap();
        let c2 = fock_parafermion(2, &s).unwrap();
        let hop = c1.adjoint() * &c2;
        let v = logical_isometry();
        let blk = v.adjoint() * &hop * &v;
        let want = identity(3) * crate::tensor::cis(std::f64::consts::PI / 3.0) * c(2.0 / 9.0, 0.0);
        assert!(max_abs_diff(&blk, &want) < 1e-14);
        let x = hopping_operator();
        let ov = crate::tensor::hs_inner(&hop, &x).norm() / (hop.norm() * x.norm());
        assert!((ov - 0.5).abs() < 1e-12);
    }

    #[test]
    fn chain_noise_keeps_logical_state() {
        let coeffs = resource_state();
        let rho = pure(&coeffs);
        for p in [0.1, 0.5, 0.9, 0.99] {
            for ch in [hopping_channel(p).unwrap(), phase_channel(p).unwrap()] {
                let out = apply_chain_channel(&ch, &rho).unwrap();
                assert!(max_abs_diff(out.logical.matrix(), rho.matrix()) < 1e-13);
                assert!((out.leakage() + out.retained - 1.0).abs() < 1e-12);
            }
        }
        let id = apply_chain_channel(&hopping_channel(0.0).unwrap(), &rho).unwrap();
        assert!(id.leakage().abs() < 1e-14);
    }

    #[test]
    fn phase_noise_leaves_magic() {
        let rho = pure(&resource_state());
        let m0 = magic_witness(&rho).unwrap().value;
        for q in [0.3, 0.6, 0.9] {
            let out = apply_chain_channel(&phase_channel(q).unwrap(), &rho).unwrap();
            assert!((magic_witness(&out.logical).unwrap().value - m0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_noise_is_identity() {
        let rho = random_rho(3);
        for ch in [flip_channel(0.0).unwrap(), dephase_channel(0.0).unwrap()] {
            assert!(max_abs_diff(&ch.apply(rho.matrix()).unwrap(), rho.matrix()) < 1e-15);
        }
        let big = encode_logical(&resource_state()).unwrap().projector();
        for ch in [hopping_channel(0.0).unwrap(), phase_channel(0.0).unwrap()] {
            assert!(max_abs_diff(&ch.apply(&big).unwrap(), &big) < 1e-15);
        }
    }

    #[test]
    fn flip_and_dephase_actions() {
        let out = flip_channel(1.0).unwrap().apply(pure(&[ONE, ZERO, ZERO]).matrix()).unwrap();
        let want = Operator::from_diagonal(&DVector::from_vec(vec![ZERO, c(0.5, 0.0), c(0.5, 0.0)]));
        assert!(max_abs_diff(&out, &want) < 1e-15);
        for seed in 0..20 {
            let rho = random_rho(seed);
            for q in [0.2, 0.7, 1.0] {
                let out = dephase_channel(q).unwrap().apply(rho.matrix()).unwrap();
                for k in 0..3 {
                    assert!((out[(k, k)] - rho.matrix()[(k, k)]).norm() < 1e-15);
                }
            }
            let out = flip_channel(0.37).unwrap().apply(rho.matrix()).unwrap();
            assert!((out.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probabilities_are_checked() {
        assert!(matches!(hopping_channel(1.5), Err(Error::ProbabilityOutOfRange { .. })));
        assert!(flip_channel(-0.1).is_err());
        assert!(Grid::from_points(vec![0.2, 1.2], vec![0.0]).is_err());
    }

    #[test]
    fn compose_semantics() {
        let t = flip_channel(0.3).unwrap();
        let s = dephase_channel(0.6).unwrap();
        let id = Channel::identity(3);
        let rho = random_rho(11);
        let a = compose(&[id.clone(), t.clone()]).unwrap().apply(rho.matrix()).unwrap();
        assert!(max_abs_diff(&a, &t.apply(rho.matrix()).unwrap()) < 1e-15);
        let ts = compose(&[s.clone(), t.clone()]).unwrap();
        let seq = t.apply(&s.apply(rho.matrix()).unwrap()).unwrap();
        assert!(max_abs_diff(&ts.apply(rho.matrix()).unwrap(), &seq) < 1e-15);
        assert_eq!(ts.name, "T∘Σ");
        assert_eq!(ts.trace_mode, TraceMode::Preserving);
        let xz = compose(&[phase_channel(0.2).unwrap(), hopping_channel(0.2).unwrap()]).unwrap();
        assert_eq!(xz.trace_mode, TraceMode::Renormalize);
        assert!(matches!(compose(&[t, xz]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn flip_kcbs_closed_form() {
        let r = sweep_witness(NoiseFamily::FlipDephase, &SweepStates::default(), &Grid::line(0.1).unwrap()).unwrap();
        assert_eq!(r.points.len(), 11);
        for pt in &r.points {
            assert!((pt.k - kcbs_under_flip(pt.p)).abs() < 1e-12);
        }
        assert!((r.points[10].k - (5.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn flip_magic_crossing() {
        let g = Grid::from_points(vec![0.0, 0.5, 2.0 / 3.0, 0.8, 1.0], vec![0.0]).unwrap();
        let r = sweep_witness(NoiseFamily::FlipDephase, &SweepStates::default(), &g).unwrap();
        let m: Vec<f64> = r.points.iter().map(|p| p.m).collect();
        assert!((m[0] - 3f64.sqrt() / 2.0).abs() < 1e-12);
        // branch (1,0) falls linearly: √3/2 − ((1+√3)/2)p
        assert!((m[1] - (3f64.sqrt() / 2.0 - (1.0 + 3f64.sqrt()) / 4.0)).abs() < 1e-12);
        assert!(m[2] <= 1e-9);
        assert!(m[3] > m[2] && m[4] > m[3]);
        assert_eq!(r.points[0].m_argmax, (1, 0));
        assert_ne!(r.points[3].m_argmax, (1, 0));
    }

    #[test]
    fn chain_sweep_is_flat() {
        let r = sweep_witness(NoiseFamily::HoppingPhase, &SweepStates::default(), &Grid::uniform(0.25).unwrap()).unwrap();
        let m0 = r.points[0].m;
        for pt in &r.points {
            assert!((pt.m - m0).abs() < 1e-9);
            assert!((pt.k - 5f64.sqrt()).abs() < 1e-10);
            assert!(pt.leakage >= -1e-12 && pt.leakage <= 1.0);
        }
        assert!(m0 > 0.58);
    }

    #[test]
    fn flip_dephase_surface_has_negative_region() {
        let r = sweep_witness(NoiseFamily::FlipDephase, &SweepStates::default(), &Grid::uniform(0.1).unwrap()).unwrap();
        assert_eq!(r.points.len(), 121);
        assert!(r.points.iter().any(|p| p.m < 0.0));
        assert!(r.points.iter().any(|p| p.m > 0.0));
    }

    #[test]
    fn grid_axes() {
        let g = Grid::uniform(0.1).unwrap();
        assert_eq!(g.p.len(), 11);
        assert_eq!(g.p[3], 0.3);
        assert_eq!(*g.p.last().unwrap(), 1.0);
        assert_eq!(Grid::uniform(0.3).unwrap().p, vec![0.0, 0.3, 0.6, 0.9, 1.0]);
        assert!(Grid::uniform(0.0).is_err());
    }

    #[test]
    fn logical_basis_states_survive_hopping() {
        for l in 0..3 {
            let mut coeffs = [ZERO; 3];
            coeffs[l] = ONE;
            let out = apply_chain_channel(&hopping_channel(0.7).unwrap(), &pure(&coeffs)).unwrap();
            assert!((out.logical.matrix()[(l, l)].re - 1.0).abs() < 1e-13);
        }
    }
}
