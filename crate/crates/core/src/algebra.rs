//! Parafermion operators from the Fradkin–Kadanoff map, the Z_n parity, Fock
//! parafermions and the three-site braiding Hamiltonians.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    c, checked_dim, cis, clock_shift_ops, eigh, embed_site, ensure_hermitian, identity, kron_all,
    mat_pow, omega_pow, Operator,
};

/// Chiral phase of the bond terms in the braiding Hamiltonians.
pub const BRAID_CHIRAL_PHASE: f64 = PI / 6.0;

/// Relative degeneracy tolerance used by [`ground_space_default`].
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n: usize,
    pub sites: usize,
    pub f: f64,
    pub j: f64,
    pub theta: f64,
    pub phi: f64,
}

fn wrap_phase(x: f64) -> f64 {
    x.rem_euclid(2.0 * PI)
}

impl ChainSpec {
    pub fn new(n: usize, sites: usize) -> Result<Self> {
        checked_dim(n, sites)?;
        Ok(Self {
            n,
            sites,
            f: 0.0,
            j: 0.0,
            theta: 0.0,
            phi: 0.0,
        })
    }

    /// The n = 3, L = 3 chain used for braiding.
    pub fn braiding() -> Self {
        Self::new(3, 3).expect("27 is within the size guard")
    }

    pub fn with_field(mut self, f: f64, theta: f64) -> Self {
        self.f = f;
        self.theta = wrap_phase(theta);
        self
    }

    pub fn with_bond(mut self, j: f64, phi: f64) -> Self {
        self.j = j;
        self.phi = wrap_phase(phi);
        self
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.sites as u32)
    }

    fn validate(&self) -> Result<usize> {
        checked_dim(self.n, self.sites)
    }

    fn require_braiding(&self) -> Result<()> {
        if self.n != 3 {
            return Err(Error::UnsupportedOrder {
                expected: 3,
                got: self.n,
            });
        }
        if self.sites != 3 {
            return Err(Error::InvalidArgument(format!(
                "braiding chain has 3 sites, got {}",
                self.sites
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParafermionMode {
    pub site: usize,
    pub flavor: Flavor,
}

impl ParafermionMode {
    pub fn a(site: usize) -> Self {
        Self {
            site,
            flavor: Flavor::A,
        }
    }

    pub fn b(site: usize) -> Self {
        Self {
            site,
            flavor: Flavor::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Parafermion,
    Spin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    H0,
    H1,
    H2,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::H0, Stage::H1, Stage::H2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("stage {i} not in 0..=2")))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HamiltonianStage {
    pub stage: Stage,
    pub picture: Picture,
}

impl HamiltonianStage {
    pub fn spin(stage: Stage) -> Self {
        Self {
            stage,
            picture: Picture::Spin,
        }
    }

    pub fn parafermion(stage: Stage) -> Self {
        Self {
            stage,
            picture: Picture::Parafermion,
        }
    }
}

/// `α_{ka} = σ_k ∏_{j<k} τ_j`, `α_{kb} = σ_k ∏_{j≤k} τ_j`, built as one
/// Kronecker product of site factors.
pub fn fk_operator(mode: ParafermionMode, spec: &ChainSpec) -> Result<Operator> {
    spec.validate()?;
    let k = mode.site;
    if k == 0 || k > spec.sites {
        return Err(Error::SiteOutOfRange {
            site: k,
            len: spec.sites,
        });
    }
    let (tau, sigma) = clock_shift_ops(spec.n)?;
    let local = match mode.flavor {
        Flavor::A => sigma,
        Flavor::B => &sigma * &tau,
    };
    let factors: Vec<Operator> = (1..=spec.sites)
        .map(|j| {
            if j < k {
                tau.clone()
            } else if j == k {
                local.clone()
            } else {
                identity(spec.n)
            }
        })
        .collect();
    kron_all(&factors)
}

/// `Q = ∏_k τ_k`, the spin-picture form of `∏_k α†_{ka}α_{kb}`.
pub fn parity_operator(spec: &ChainSpec) -> Result<Operator> {
    spec.validate()?;
    let (tau, _) = clock_shift_ops(spec.n)?;
    kron_all(&vec![tau; spec.sites])
}

/// `Q` assembled from the parafermion operators themselves.
pub fn parity_from_modes(spec: &ChainSpec) -> Result<Operator> {
    let mut q = identity(spec.validate()?);
    for k in 1..=spec.sites {
        q = q * fk_inverse_tau(k, spec)?;
    }
    Ok(q)
}

/// `τ_k = α†_{ka}α_{kb}`
pub fn fk_inverse_tau(k: usize, spec: &ChainSpec) -> Result<Operator> {
    let a = fk_operator(ParafermionMode::a(k), spec)?;
    let b = fk_operator(ParafermionMode::b(k), spec)?;
    Ok(a.adjoint() * b)
}

/// `σ_k = α_{ka} ∏_{j<k} α†_{jb}α_{ja}`
pub fn fk_inverse_sigma(k: usize, spec: &ChainSpec) -> Result<Operator> {
    let mut out = fk_operator(ParafermionMode::a(k), spec)?;
    for j in 1..k {
        let a = fk_operator(ParafermionMode::a(j), spec)?;
        let b = fk_operator(ParafermionMode::b(j), spec)?;
        out = out * b.adjoint() * a;
    }
    Ok(out)
}

/// `C_k = (2/3)α_{ka} − (1/3)Σ_{m=1}^{2} ω^{m(m+1)/2} α_{ka}^{m+1} (α†_{kb})^m`
pub fn fock_parafermion(k: usize, spec: &ChainSpec) -> Result<Operator> {
    if spec.n != 3 {
        return Err(Error::UnsupportedOrder {
            expected: 3,
            got: spec.n,
        });
    }
    let a = fk_operator(ParafermionMode::a(k), spec)?;
    let bd = fk_operator(ParafermionMode::b(k), spec)?.adjoint();
    let mut out = &a * c(2.0 / 3.0, 0.0);
    for m in 1..=2u32 {
        let phase = omega_pow(3, (m * (m + 1) / 2) as i64);
        out -= mat_pow(&a, m + 1) * mat_pow(&bd, m) * (phase / 3.0);
    }
    Ok(out)
}

fn hc(op: Operator) -> Operator {
    let adj = op.adjoint();
    op + adj
}

fn site_ops(spec: &ChainSpec) -> Result<(Vec<Operator>, Vec<Operator>)> {
    let (tau, sigma) = clock_shift_ops(spec.n)?;
    let mut t = Vec::with_capacity(spec.sites);
    let mut s = Vec::with_capacity(spec.sites);
    for k in 1..=spec.sites {
        t.push(embed_site(&tau, k, spec.sites)?);
        s.push(embed_site(&sigma, k, spec.sites)?);
    }
    Ok((t, s))
}

/// Braiding Hamiltonians of the three-site Z₃ chain (h.c. included), with
/// chiral phase `e^{iπ/6}` on the bond terms.
pub fn braiding_hamiltonian(stage: HamiltonianStage, spec: &ChainSpec) -> Result<Operator> {
    spec.require_braiding()?;
    let e = cis(BRAID_CHIRAL_PHASE);
    let h = match stage.picture {
        Picture::Spin => {
            let (t, s) = site_ops(spec)?;
            let bond12 = &s[0] * s[1].adjoint();
            let bond23 = &s[1] * s[2].adjoint();
            match stage.stage {
                Stage::H0 => hc((bond12 + &bond23) * (-e)),
                Stage::H1 => hc(bond23 * (-e) - &t[0]),
                Stage::H2 => {
                    let long = &s[0] * t[1].adjoint() * t[2].adjoint() * s[2].adjoint();
                    hc((bond23 + long) * (-e))
                }
            }
        }
        Picture::Parafermion => {
            let al = |k, f| fk_operator(ParafermionMode { site: k, flavor: f }, spec);
            let (a1, b1) = (al(1, Flavor::A)?, al(1, Flavor::B)?);
            let (a2, b2) = (al(2, Flavor::A)?, al(2, Flavor::B)?);
            let (a3, b3) = (al(3, Flavor::A)?, al(3, Flavor::B)?);
            let bond12 = &b1 * a2.adjoint();
            let bond23 = &b2 * a3.adjoint();
            match stage.stage {
                Stage::H0 => hc((bond12 + &bond23) * (-e)),
                Stage::H1 => hc(bond23 * (-e) - &a1 * b1.adjoint()),
                Stage::H2 => hc((bond23 + &b3 * b1.adjoint()) * (-e)),
            }
        }
    };
    ensure_hermitian(&h, 1e-12).map_err(|_| {
        Error::Internal(format!("{} ({:?}) is not Hermitian", stage.stage, stage.picture))
    })?;
    Ok(h)
}

/// `H = −f e^{iθ} Σ_j α†_{ja}α_{jb} − J e^{iφ} Σ_{j<L} α†_{jb}α_{(j+1)a} + h.c.`
pub fn generic_chain_hamiltonian(spec: &ChainSpec) -> Result<Operator> {
    let dim = spec.validate()?;
    let mut h = Operator::zeros(dim, dim);
    let field = cis(spec.theta) * (-spec.f);
    let bond = cis(spec.phi) * (-spec.j);
    for k in 1..=spec.sites {
        let a = fk_operator(ParafermionMode::a(k), spec)?;
        let b = fk_operator(ParafermionMode::b(k), spec)?;
        h += a.adjoint() * &b * field;
        if k < spec.sites {
            let next = fk_operator(ParafermionMode::a(k + 1), spec)?;
            h += b.adjoint() * next * bond;
        }
    }
    Ok(hc(h))
}

/// Bond phase `φ` of the generic chain that reproduces a braiding bond term
/// `−e^{iϑ}σ_jσ_{j+1}† + h.c.`.
///
/// `α†_{jb}α_{(j+1)a} = ω̄ σ_j†σ_{j+1}`, whose conjugate carries `e^{−iφ}ω`,
/// so `φ = 2π/n − ϑ`.
pub fn braid_phase_to_generic(n: usize, braid_phase: f64) -> f64 {
    wrap_phase(2.0 * PI / n as f64 - braid_phase)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundSpace {
    pub energy: f64,
    /// Orthonormal ground states as columns.
    pub vectors: Operator,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn projector(&self) -> Operator {
        &self.vectors * self.vectors.adjoint()
    }
}

/// Eigenvectors whose eigenvalue lies within `tol·max(range, 1)` of the
/// minimum. The eigensolver returns them orthonormal.
pub fn ground_space(h: &Operator, tol: f64) -> Result<GroundSpace> {
    let (vals, vecs) = eigh(h)?;
    let e0 = vals[0];
    let range = vals[vals.len() - 1] - e0;
    let cut = tol * range.max(1.0);
    let d = vals.iter().take_while(|&&v| v - e0 <= cut).count();
    Ok(GroundSpace {
        energy: e0,
        vectors: vecs.columns(0, d).into_owned(),
    })
}

pub fn ground_space_default(h: &Operator) -> Result<GroundSpace> {
    ground_space(h, DEFAULT_DEGENERACY_TOL)
}

/// Sorted spectrum of every braiding stage in one picture.
pub fn braiding_spectra(picture: Picture) -> Result<[Vec<f64>; 3]> {
    let spec = ChainSpec::braiding();
    let mut out: [Vec<f64>; 3] = Default::default();
    for stage in Stage::ALL {
        let h = braiding_hamiltonian(HamiltonianStage { stage, picture }, &spec)?;
        out[stage.index()] = crate::tensor::eigvalsh(&h)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{max_abs_diff, omega, tau, ONE};

    fn spec() -> ChainSpec {
        ChainSpec::braiding()
    }

    fn all_modes(spec: &ChainSpec) -> Vec<(ParafermionMode, Operator)> {
        let mut v = Vec::new();
        for k in 1..=spec.sites {
            for f in [Flavor::A, Flavor::B] {
                let m = ParafermionMode { site: k, flavor: f };
                v.push((m, fk_operator(m, spec).unwrap()));
            }
        }
        v
    }

    #[test]
    fn first_mode_is_bare_sigma() {
        let s = spec();
        let (_, sigma) = clock_shift_ops(3).unwrap();
        let a1 = fk_operator(ParafermionMode::a(1), &s).unwrap();
        assert_eq!(a1, embed_site(&sigma, 1, 3).unwrap());
    }

    #[test]
    fn exchange_relations_all_pairs() {
        let s = spec();
        let w = omega(3);
        let modes = all_modes(&s);
        for (i, (mi, ai)) in modes.iter().enumerate() {
            for (mj, aj) in &modes[i + 1..] {
                if mi.site == mj.site {
                    continue;
                }
                let lhs = ai * aj;
                let rhs = aj * ai * w;
                assert!(max_abs_diff(&lhs, &rhs) < 1e-14, "{mi:?} {mj:?}");
            }
        }
    }

    #[test]
    fn same_site_pair_relation() {
        // α_{ka}α_{kb} = ω α_{kb}α_{ka}
        let s = spec();
        let w = omega(3);
        for k in 1..=3 {
            let a = fk_operator(ParafermionMode::a(k), &s).unwrap();
            let b = fk_operator(ParafermionMode::b(k), &s).unwrap();
            assert!(max_abs_diff(&(&a * &b), &(&b * &a * w)) < 1e-14);
        }
    }

    #[test]
    fn cube_is_identity_and_dagger_is_square() {
        let s = spec();
        for (m, a) in all_modes(&s) {
            assert!(max_abs_diff(&mat_pow(&a, 3), &identity(27)) < 1e-14, "{m:?}");
            assert!(max_abs_diff(&a.adjoint(), &mat_pow(&a, 2)) < 1e-14, "{m:?}");
        }
    }

    #[test]
    fn inverse_map_round_trips() {
        let s = spec();
        let (tau, sigma) = clock_shift_ops(3).unwrap();
        for k in 1..=3 {
            let t = fk_inverse_tau(k, &s).unwrap();
            assert!(max_abs_diff(&t, &embed_site(&tau, k, 3).unwrap()) < 1e-14);
            let sg = fk_inverse_sigma(k, &s).unwrap();
            assert!(max_abs_diff(&sg, &embed_site(&sigma, k, 3).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn parity_properties() {
        let s = spec();
        let q = parity_operator(&s).unwrap();
        assert!(max_abs_diff(&q, &parity_from_modes(&s).unwrap()) < 1e-14);
        assert!(max_abs_diff(&mat_pow(&q, 3), &identity(27)) < 1e-14);
        let single = ChainSpec::new(3, 1).unwrap();
        assert_eq!(parity_operator(&single).unwrap(), tau(3).unwrap());
    }

    #[test]
    fn fock_parafermion_properties() {
        let s = spec();
        for k in 1..=3 {
            let ck = fock_parafermion(k, &s).unwrap();
            assert!(ck.trace().norm() < 1e-14);
            assert!(mat_pow(&ck, 3).norm() < 1e-13);
            assert!(ck.norm() > 0.1);
        }
        let wrong = ChainSpec::new(2, 3).unwrap();
        assert!(matches!(
            fock_parafermion(1, &wrong),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn fock_number_operator_is_local() {
        // C†C on one site: (1/3)(2 − τ − τ†) = I − |0⟩_τ⟨0|_τ
        let s = ChainSpec::new(3, 1).unwrap();
        let ck = fock_parafermion(1, &s).unwrap();
        let t = tau(3).unwrap();
        let want = (identity(3) * c(2.0, 0.0) - &t - t.adjoint()) / c(3.0, 0.0);
        assert!(max_abs_diff(&(ck.adjoint() * &ck), &want) < 1e-14);
    }

    #[test]
    fn spectra_agree_between_pictures() {
        let spin = braiding_spectra(Picture::Spin).unwrap();
        let pf = braiding_spectra(Picture::Parafermion).unwrap();
        let s3 = 3f64.sqrt();
        let ground = [-2.0 * s3, -2.0 - s3, -2.0 * s3];
        for i in 0..3 {
            for (a, b) in spin[i].iter().zip(&pf[i]) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!((spin[i][0] - ground[i]).abs() < 1e-12, "stage {i}");
            // triple ground level, gap √3
            assert!((spin[i][2] - spin[i][0]).abs() < 1e-12);
            assert!((spin[i][3] - spin[i][0] - s3).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_spaces_three_fold() {
        let s = spec();
        for stage in Stage::ALL {
            for picture in [Picture::Spin, Picture::Parafermion] {
                let h = braiding_hamiltonian(HamiltonianStage { stage, picture }, &s).unwrap();
                assert_eq!(ground_space_default(&h).unwrap().degeneracy(), 3);
            }
        }
    }

    #[test]
    fn stage_one_contains_local_field() {
        let s = spec();
        let h1 = braiding_hamiltonian(HamiltonianStage::spin(Stage::H1), &s).unwrap();
        let (t, sg) = site_ops(&s).unwrap();
        let bond = hc(&sg[1] * sg[2].adjoint() * (-cis(PI / 6.0)));
        let field = &h1 - bond;
        let want = -(&t[0] + t[0].adjoint());
        assert!(max_abs_diff(&field, &want) < 1e-14);
    }

    #[test]
    fn hamiltonians_commute_with_parity() {
        let s = spec();
        let q = parity_operator(&s).unwrap();
        for stage in Stage::ALL {
            for picture in [Picture::Spin, Picture::Parafermion] {
                let h = braiding_hamiltonian(HamiltonianStage { stage, picture }, &s).unwrap();
                assert!((&h * &q - &q * &h).norm() < 1e-12);
                let p = ground_space_default(&h).unwrap().projector();
                assert!((&p * &q - &q * &p).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn braiding_requires_three_site_z3() {
        let s = ChainSpec::new(3, 4).unwrap();
        assert!(braiding_hamiltonian(HamiltonianStage::spin(Stage::H0), &s).is_err());
        let s = ChainSpec::new(2, 3).unwrap();
        assert!(braiding_hamiltonian(HamiltonianStage::spin(Stage::H0), &s).is_err());
    }

    #[test]
    fn generic_chain_matches_first_braiding_stage() {
        let phi = braid_phase_to_generic(3, BRAID_CHIRAL_PHASE);
        assert!((phi - PI / 2.0).abs() < 1e-15);
        let s = spec().with_bond(1.0, phi);
        let h = generic_chain_hamiltonian(&s).unwrap();
        let h0 = braiding_hamiltonian(HamiltonianStage::spin(Stage::H0), &spec()).unwrap();
        assert!(max_abs_diff(&h, &h0) < 1e-14);
        // the literal braiding phase gives a chirally rotated, different matrix
        let lit = generic_chain_hamiltonian(&spec().with_bond(1.0, BRAID_CHIRAL_PHASE)).unwrap();
        assert!(max_abs_diff(&lit, &h0) > 0.1);
    }

    #[test]
    fn qubit_field_only_chain_is_transverse_field() {
        let s = ChainSpec::new(2, 3).unwrap().with_field(1.0, 0.0);
        let h = generic_chain_hamiltonian(&s).unwrap();
        let x = tau(2).unwrap();
        let mut want = Operator::zeros(8, 8);
        for k in 1..=3 {
            want -= embed_site(&x, k, 3).unwrap() * c(2.0, 0.0);
        }
        assert!(max_abs_diff(&h, &want) < 1e-14);
    }

    #[test]
    fn qubit_bond_chain_is_ising() {
        // n = 2: α†_{jb}α_{(j+1)a} = −Z_jZ_{j+1}
        let s = ChainSpec::new(2, 3).unwrap().with_bond(1.0, 0.0);
        let h = generic_chain_hamiltonian(&s).unwrap();
        let z = crate::tensor::sigma(2).unwrap();
        let mut want = Operator::zeros(8, 8);
        for k in 1..3 {
            want += embed_site(&z, k, 3).unwrap() * embed_site(&z, k + 1, 3).unwrap() * c(2.0, 0.0);
        }
        assert!(max_abs_diff(&h, &want) < 1e-14);
        assert_eq!(ground_space_default(&h).unwrap().degeneracy(), 2);
    }

    #[test]
    fn ground_crosstalk_shrinks_with_length() {
        // splitting of the n lowest levels in the weak-field regime
        let split = |sites: usize| {
            let s = ChainSpec::new(3, sites)
                .unwrap()
                .with_field(0.2, 0.0)
                .with_bond(1.0, braid_phase_to_generic(3, BRAID_CHIRAL_PHASE));
            let v = crate::tensor::eigvalsh(&generic_chain_hamiltonian(&s).unwrap()).unwrap();
            v[2] - v[0]
        };
        let (s3, s4) = (split(3), split(4));
        assert!(s4 < s3, "{s3} {s4}");
    }

    #[test]
    fn ground_space_trivial_cases() {
        let g = ground_space_default(&(-identity(4))).unwrap();
        assert_eq!(g.degeneracy(), 4);
        let d = Operator::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.0, 0.0),
            ONE,
            c(2.0, 0.0),
        ]));
        let g = ground_space_default(&d).unwrap();
        assert_eq!(g.degeneracy(), 1);
        assert_eq!(g.energy, 0.0);
        let bad = tau(3).unwrap();
        assert!(matches!(ground_space_default(&bad), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn chain_phases_wrapped() {
        let s = ChainSpec::new(3, 2).unwrap().with_bond(1.0, -PI / 2.0);
        assert!((s.phi - 1.5 * PI).abs() < 1e-15);
        assert!(ChainSpec::new(3, 7).is_err());
        assert!(ChainSpec::new(1, 2).is_err());
        assert!(ChainSpec::new(3, 0).is_err());
    }
}
