//! Dense complex linear algebra on small qudit registers.
//!
//! Tensor convention: site 1 is the leftmost (most significant) Kronecker
//! factor, so the basis index of `|k₁ k₂ … k_L⟩` is `Σ k_j n^{L-j}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Operator = DMatrix<C64>;

/// Largest Hilbert-space dimension built densely (3⁶).
pub const MAX_DIM: usize = 729;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// `ω^k` with `ω = e^{2πi/n}`; `k` is reduced mod n first so the phase is
/// always built from an angle in `[0, 2π)`.
pub fn omega_pow(n: usize, k: i64) -> C64 {
    let r = k.rem_euclid(n as i64);
    cis(2.0 * PI * r as f64 / n as f64)
}

pub fn omega(n: usize) -> C64 {
    omega_pow(n, 1)
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn check_order(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    Ok(())
}

/// Returns `(τ, σ)`: the cyclic shift `τ|k⟩ = |k+1⟩` and the clock
/// `σ = diag(1, ω, …, ω^{n-1})`.
pub fn clock_shift_ops(n: usize) -> Result<(Operator, Operator)> {
    check_order(n)?;
    let mut tau = Operator::zeros(n, n);
    let mut sigma = Operator::zeros(n, n);
    for k in 0..n {
        tau[((k + 1) % n, k)] = ONE;
        sigma[(k, k)] = omega_pow(n, k as i64);
    }
    Ok((tau, sigma))
}

pub fn tau(n: usize) -> Result<Operator> {
    clock_shift_ops(n).map(|(t, _)| t)
}

pub fn sigma(n: usize) -> Result<Operator> {
    clock_shift_ops(n).map(|(_, s)| s)
}

/// `χ = στ`
pub fn chi(n: usize) -> Result<Operator> {
    let (t, s) = clock_shift_ops(n)?;
    Ok(s * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Sigma,
    Tau,
    Chi,
}

/// `|k⟩_kind`, the eigenvector of the named operator with eigenvalue `ω^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub kind: BasisKind,
    pub index: usize,
}

impl BasisLabel {
    pub fn new(kind: BasisKind, index: usize) -> Self {
        Self { kind, index }
    }

    pub fn operator(&self, n: usize) -> Result<Operator> {
        match self.kind {
            BasisKind::Sigma => sigma(n),
            BasisKind::Tau => tau(n),
            BasisKind::Chi => chi(n),
        }
    }
}

/// Closed-form eigenvectors:
/// σ: `e_k`; τ: `ω^{-jk}/√n`; χ (odd n): `ω^{k(k+1)/2 - jk}/√n`.
pub fn eigenbasis(label: BasisLabel, n: usize) -> Result<StateVector> {
    check_order(n)?;
    let j = label.index;
    if j >= n {
        return Err(Error::BasisIndexOutOfRange { index: j, order: n });
    }
    let norm = 1.0 / (n as f64).sqrt();
    let amps: Vec<C64> = match label.kind {
        BasisKind::Sigma => (0..n).map(|k| if k == j { ONE } else { ZERO }).collect(),
        BasisKind::Tau => (0..n)
            .map(|k| omega_pow(n, -((j * k) as i64)) * norm)
            .collect(),
        BasisKind::Chi => {
            if n % 2 == 0 {
                return Err(Error::EvenChiBasis(n));
            }
            (0..n)
                .map(|k| {
                    let e = (k * (k + 1) / 2) as i64 - (j * k) as i64;
                    omega_pow(n, e) * norm
                })
                .collect()
        }
    };
    StateVector::new(DVector::from_vec(amps))
}

/// All `n` eigenvectors of one kind as the columns of a unitary.
pub fn eigenbasis_matrix(kind: BasisKind, n: usize) -> Result<Operator> {
    let mut m = Operator::zeros(n, n);
    for j in 0..n {
        let v = eigenbasis(BasisLabel::new(kind, j), n)?;
        m.set_column(j, v.amplitudes());
    }
    Ok(m)
}

pub fn checked_dim(n: usize, sites: usize) -> Result<usize> {
    check_order(n)?;
    if sites == 0 {
        return Err(Error::EmptyChain);
    }
    let mut dim: usize = 1;
    for _ in 0..sites {
        dim = dim.saturating_mul(n);
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, limit: MAX_DIM });
        }
    }
    Ok(dim)
}

/// Kronecker product of a list of site factors, first factor leftmost.
pub fn kron_all(factors: &[Operator]) -> Result<Operator> {
    let mut it = factors.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty factor list".into()))?;
    let mut acc = first.clone();
    for f in it {
        if acc.nrows() * f.nrows() > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: acc.nrows() * f.nrows(),
                limit: MAX_DIM,
            });
        }
        acc = acc.kronecker(f);
    }
    Ok(acc)
}

/// `I^{⊗(j-1)} ⊗ op ⊗ I^{⊗(L-j)}` with 1-based `site`.
pub fn embed_site(op: &Operator, site: usize, sites: usize) -> Result<Operator> {
    ensure_square(op)?;
    let n = op.nrows();
    checked_dim(n, sites)?;
    if site == 0 || site > sites {
        return Err(Error::SiteOutOfRange { site, len: sites });
    }
    let left = n.pow(site as u32 - 1);
    let right = n.pow((sites - site) as u32);
    Ok(identity(left).kronecker(op).kronecker(&identity(right)))
}

pub fn ensure_square(op: &Operator) -> Result<()> {
    if op.nrows() != op.ncols() || op.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: op.nrows(),
            cols: op.ncols(),
        });
    }
    Ok(())
}

pub fn ensure_dim(op: &Operator, dim: usize) -> Result<()> {
    ensure_square(op)?;
    if op.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: op.nrows(),
        });
    }
    Ok(())
}

/// Frobenius norm of `A − A†`.
pub fn hermiticity_residual(op: &Operator) -> f64 {
    (op - op.adjoint()).norm()
}

pub fn is_hermitian(op: &Operator, tol: f64) -> bool {
    op.is_square() && hermiticity_residual(op) <= tol
}

pub fn unitarity_residual(op: &Operator) -> f64 {
    let n = op.nrows();
    (op.adjoint() * op - identity(n)).norm()
}

pub fn is_unitary(op: &Operator, tol: f64) -> bool {
    op.is_square() && unitarity_residual(op) <= tol
}

pub fn ensure_hermitian(op: &Operator, tol: f64) -> Result<()> {
    ensure_square(op)?;
    let residual = hermiticity_residual(op);
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

pub fn ensure_unitary(op: &Operator, tol: f64) -> Result<()> {
    ensure_square(op)?;
    let residual = unitarity_residual(op);
    if residual > tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

pub fn mat_pow(op: &Operator, k: u32) -> Operator {
    let mut acc = identity(op.nrows());
    for _ in 0..k {
        acc = &acc * op;
    }
    acc
}

/// Max-modulus entry of `a − b`.
pub fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `Tr[A†B]`
pub fn hs_inner(a: &Operator, b: &Operator) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as matching columns.
pub fn eigh(op: &Operator) -> Result<(Vec<f64>, Operator)> {
    ensure_hermitian(op, 1e-10 * op.norm().max(1.0))?;
    // Symmetrize so the solver sees an exactly Hermitian input.
    let h = (op + op.adjoint()) * c(0.5, 0.0);
    let dim = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = Operator::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vecs))
}

pub fn eigvalsh(op: &Operator) -> Result<Vec<f64>> {
    eigh(op).map(|(v, _)| v)
}

/// `V·f(Λ)·V†` for a Hermitian input.
pub fn hermitian_function(op: &Operator, f: impl Fn(f64) -> f64) -> Result<Operator> {
    let (vals, vecs) = eigh(op)?;
    let d = DVector::from_iterator(vals.len(), vals.iter().map(|&x| c(f(x), 0.0)));
    Ok(&vecs * Operator::from_diagonal(&d) * vecs.adjoint())
}

/// `Ê₀ = √(2/3)·I`, `Ê₁…Ê₈` the Gell-Mann matrices; `Tr[Êⱼ†Êₖ] = 2δⱼₖ`.
pub fn gell_mann_basis() -> [Operator; 9] {
    let s3 = 3f64.sqrt();
    let z = ZERO;
    let o = ONE;
    let m = |e: [C64; 9]| Operator::from_row_slice(3, 3, &e);
    [
        identity(3) * c((2.0f64 / 3.0).sqrt(), 0.0),
        m([z, o, z, o, z, z, z, z, z]),
        m([z, -I, z, I, z, z, z, z, z]),
        m([o, z, z, z, -o, z, z, z, z]),
        m([z, z, o, z, z, z, o, z, z]),
        m([z, z, -I, z, z, z, I, z, z]),
        m([z, z, z, z, z, o, z, o, z]),
        m([z, z, z, z, z, -I, z, I, z]),
        m([o, z, z, z, o, z, z, z, c(-2.0, 0.0)]) * c(1.0 / s3, 0.0),
    ]
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    /// Normalizes the input; fails on a zero vector.
    pub fn new(amps: DVector<C64>) -> Result<Self> {
        let norm = amps.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self(amps / c(norm, 0.0)))
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amps))
    }

    /// Accepts only vectors already normalized to 1e-12.
    pub fn normalized(amps: DVector<C64>) -> Result<Self> {
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amps))
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::BasisIndexOutOfRange { index: k, order: dim });
        }
        let mut v = DVector::zeros(dim);
        v[k] = ONE;
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<C64> {
        self.0
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn projector(&self) -> Operator {
        &self.0 * self.0.adjoint()
    }

    pub fn apply(&self, op: &Operator) -> Result<StateVector> {
        ensure_dim(op, self.dim())?;
        StateVector::new(op * &self.0)
    }

    /// Trace distance between the two pure states, `√(1 − |⟨a|b⟩|²)`.
    pub fn trace_distance(&self, other: &StateVector) -> f64 {
        let ov = other.inner(self);
        (&self.0 - &other.0 * ov).norm()
    }
}

/// Unit-trace positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub const TOL: f64 = 1e-10;

    pub fn new(rho: Operator) -> Result<Self> {
        ensure_square(&rho)?;
        let herm = hermiticity_residual(&rho);
        if herm > Self::TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (residual {herm:.3e})"
            )));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > Self::TOL || tr.im.abs() > Self::TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {tr} is not 1"
            )));
        }
        let min = eigvalsh(&rho)?[0];
        if min < -Self::TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self(rho))
    }

    pub fn pure(psi: &StateVector) -> Self {
        Self(psi.projector())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(identity(dim) / c(dim as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Operator {
        &self.0
    }

    pub fn into_inner(self) -> Operator {
        self.0
    }

    /// `Re Tr[Aρ]`
    pub fn expectation(&self, op: &Operator) -> f64 {
        (op * &self.0).trace().re
    }

    pub fn conjugate_by(&self, u: &Operator) -> Result<DensityMatrix> {
        ensure_dim(u, self.dim())?;
        Ok(Self(u * &self.0 * u.adjoint()))
    }

    /// Nearest density matrix in eigenvalue space: clip negative eigenvalues
    /// and renormalize.
    pub fn project_physical(rho: &Operator) -> Result<Self> {
        let (vals, vecs) = eigh(rho)?;
        let clipped: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let d = DVector::from_iterator(clipped.len(), clipped.iter().map(|&x| c(x / total, 0.0)));
        Ok(Self(&vecs * Operator::from_diagonal(&d) * vecs.adjoint()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w() -> C64 {
        omega(3)
    }

    #[test]
    fn qutrit_ops_match_printed_matrices() {
        let (t, s) = clock_shift_ops(3).unwrap();
        let t_ref = Operator::from_row_slice(3, 3, &[ZERO, ZERO, ONE, ONE, ZERO, ZERO, ZERO, ONE, ZERO]);
        assert_eq!(t, t_ref);
        let s_ref = Operator::from_diagonal(&DVector::from_vec(vec![ONE, w(), w() * w()]));
        assert!(max_abs_diff(&s, &s_ref) < 1e-15);
        assert!((&s * &t - &t * &s * w()).norm() < 1e-15);
    }

    #[test]
    fn qubit_reduction_is_pauli() {
        let (t, s) = clock_shift_ops(2).unwrap();
        let x = Operator::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let z = Operator::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        assert!(max_abs_diff(&t, &x) < 1e-15);
        assert!(max_abs_diff(&s, &z) < 1e-15);
    }

    #[test]
    fn order_below_two_rejected() {
        assert_eq!(clock_shift_ops(1), Err(Error::InvalidOrder(1)));
        assert_eq!(clock_shift_ops(0), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn printed_eigenkets() {
        let s0 = eigenbasis(BasisLabel::new(BasisKind::Sigma, 0), 3).unwrap();
        assert_eq!(s0.amplitudes().as_slice(), &[ONE, ZERO, ZERO]);

        let r = 1.0 / 3f64.sqrt();
        let t1 = eigenbasis(BasisLabel::new(BasisKind::Tau, 1), 3).unwrap();
        let expect = [ONE * r, w().conj() * r, w() * r];
        for (a, b) in t1.amplitudes().iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-15);
        }

        let x2 = eigenbasis(BasisLabel::new(BasisKind::Chi, 2), 3).unwrap();
        let expect = [ONE * r, w().conj() * r, w().conj() * r];
        for (a, b) in x2.amplitudes().iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
        let applied = chi(3).unwrap() * x2.amplitudes();
        assert!((applied - x2.amplitudes() * (w() * w())).norm() < 1e-15);
    }

    #[test]
    fn eigenbasis_rejects_bad_labels() {
        assert!(eigenbasis(BasisLabel::new(BasisKind::Tau, 3), 3).is_err());
        assert_eq!(
            eigenbasis(BasisLabel::new(BasisKind::Chi, 0), 4),
            Err(Error::EvenChiBasis(4))
        );
    }

    #[test]
    fn eigenvalue_equation_all_labels() {
        for n in [2usize, 3, 4, 5] {
            for kind in [BasisKind::Sigma, BasisKind::Tau, BasisKind::Chi] {
                if kind == BasisKind::Chi && n % 2 == 0 {
                    continue;
                }
                for k in 0..n {
                    let label = BasisLabel::new(kind, k);
                    let v = eigenbasis(label, n).unwrap();
                    let op = label.operator(n).unwrap();
                    let lhs = &op * v.amplitudes();
                    let rhs = v.amplitudes() * omega_pow(n, k as i64);
                    assert!((lhs - rhs).norm() < 1e-13, "{kind:?} {k} n={n}");
                }
            }
        }
    }

    #[test]
    fn qutrit_bases_mutually_unbiased() {
        let kinds = [BasisKind::Sigma, BasisKind::Tau, BasisKind::Chi];
        for (ia, &a) in kinds.iter().enumerate() {
            let ma = eigenbasis_matrix(a, 3).unwrap();
            assert!(is_unitary(&ma, 1e-14));
            for &b in &kinds[ia + 1..] {
                let mb = eigenbasis_matrix(b, 3).unwrap();
                let overlaps = ma.adjoint() * mb;
                for z in overlaps.iter() {
                    assert!((z.norm_sqr() - 1.0 / 3.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn embed_examples() {
        let (t, s) = clock_shift_ops(3).unwrap();
        assert_eq!(embed_site(&s, 1, 1).unwrap(), s);

        let t2 = embed_site(&t, 2, 2).unwrap();
        let s1 = embed_site(&s, 1, 2).unwrap();
        assert!((&t2 * &s1 - &s1 * &t2).norm() < 1e-15);

        // same site: entries of σ₁τ₁ are ω times those of τ₁σ₁
        let s1 = embed_site(&s, 1, 3).unwrap();
        let t1 = embed_site(&t, 1, 3).unwrap();
        let st = &s1 * &t1;
        let ts = &t1 * &s1;
        assert!((&st - &ts).norm() > 1.0);
        let mut matched = 0;
        for (a, b) in st.iter().zip(ts.iter()) {
            if b.norm() > 0.5 {
                assert!((a / b - w()).norm() < 1e-14);
                matched += 1;
            }
        }
        assert_eq!(matched, 27);
    }

    #[test]
    fn embed_orders_site_one_leftmost() {
        let (t, _) = clock_shift_ops(3).unwrap();
        let t1 = embed_site(&t, 1, 2).unwrap();
        // τ₁|0,2⟩ = |1,2⟩: index 0·3+2 → 1·3+2
        assert_eq!(t1[(5, 2)], ONE);
    }

    #[test]
    fn embed_errors() {
        let (t, _) = clock_shift_ops(3).unwrap();
        assert!(matches!(
            embed_site(&t, 0, 3),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            embed_site(&t, 4, 3),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(embed_site(&t, 1, 6).is_ok());
        assert!(matches!(
            embed_site(&t, 1, 7),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn gell_mann_orthonormal() {
        let e = gell_mann_basis();
        let s3 = 3f64.sqrt();
        let e8 = Operator::from_diagonal(&DVector::from_vec(vec![
            c(1.0 / s3, 0.0),
            c(1.0 / s3, 0.0),
            c(-2.0 / s3, 0.0),
        ]));
        assert!(max_abs_diff(&e[8], &e8) < 1e-15);
        for j in 0..9 {
            assert!(is_hermitian(&e[j], 0.0));
            for k in 0..9 {
                let g = hs_inner(&e[j], &e[k]);
                let want = if j == k { 2.0 } else { 0.0 };
                assert!((g - c(want, 0.0)).norm() < 1e-14, "({j},{k})");
            }
        }
    }

    #[test]
    fn eigh_sorted_and_reconstructs() {
        let (t, _) = clock_shift_ops(3).unwrap();
        let h = &t + t.adjoint();
        let (vals, vecs) = eigh(&h).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[2] - 2.0).abs() < 1e-14);
        let d = Operator::from_diagonal(&DVector::from_iterator(3, vals.iter().map(|&x| c(x, 0.0))));
        assert!((&vecs * d * vecs.adjoint() - h).norm() < 1e-13);
        assert!(eigh(&t).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(identity(3)).is_err());
        let bad = Operator::from_diagonal(&DVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(DensityMatrix::new(bad).is_err());
        let mm = DensityMatrix::maximally_mixed(3);
        assert!(DensityMatrix::new(mm.matrix().clone()).is_ok());
        assert!(StateVector::new(DVector::zeros(3)).is_err());
    }

    fn arb_op(n: usize) -> impl Strategy<Value = Operator> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| Operator::from_iterator(n, n, v.into_iter().map(|(a, b)| c(a, b))))
    }

    proptest! {
        #[test]
        fn commutation_all_orders(n in 2usize..9) {
            let (t, s) = clock_shift_ops(n).unwrap();
            prop_assert!((&s * &t - &t * &s * omega(n)).norm() < 1e-13);
        }

        #[test]
        fn embedding_preserves_spectrum(a in arb_op(3), site in 1usize..4) {
            let h = &a + a.adjoint();
            let base = eigvalsh(&h).unwrap();
            let big = eigvalsh(&embed_site(&h, site, 3).unwrap()).unwrap();
            prop_assert_eq!(big.len(), 27);
            for (i, v) in big.iter().enumerate() {
                prop_assert!((v - base[i / 9]).abs() < 1e-10);
            }
        }

        #[test]
        fn normalized_after_construction(v in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..10)) {
            let amps: Vec<C64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            if let Ok(s) = StateVector::from_slice(&amps) {
                prop_assert!((s.amplitudes().norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
