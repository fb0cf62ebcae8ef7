//! Simulated qutrit state and process tomography.
//!
//! Processes are expanded in `Ê₀ = √(2/3)I, Ê₁…Ê₈ = λ₁…λ₈`, so that
//! `E(ρ) = Σ_jk χ_jk Ê_j ρ Ê_k†`. With `Tr[Ê_j†Ê_k] = 2δ_jk` a unitary
//! `U = Σ c_j Ê_j` has `c_j = Tr[Ê_j†U]/2` and `χ = cc†`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::braid::fourier_matrix;
use crate::error::{Error, Result};
use crate::noise::Channel;
use crate::tensor::{
    c, ensure_dim, ensure_unitary, eigh, gell_mann_basis, hs_inner, identity, DensityMatrix,
    Operator, C64, I, ONE, ZERO,
};

pub const CHI_DIM: usize = 9;

/// `p[m][n]`: preparation `m`, measurement `n`.
pub type ProbTable = [[f64; 9]; 9];

/// Nine qutrit kets used both as preparations and as measurement projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyBasisSet {
    pub states: Vec<DVector<C64>>,
}

impl Default for TomographyBasisSet {
    fn default() -> Self {
        Self::standard()
    }
}

impl TomographyBasisSet {
    /// `|0⟩, |1⟩, |2⟩`, then `(|a⟩+|b⟩)/√2` and `(|a⟩−i|b⟩)/√2` for the
    /// pairs `(1,2), (0,2), (0,1)`.
    pub fn standard() -> Self {
        let r = 1.0 / 2f64.sqrt();
        let ket = |v: [C64; 3]| DVector::from_vec(v.to_vec());
        let e = |k: usize| {
            let mut v = [ZERO; 3];
            v[k] = ONE;
            v
        };
        let pair = |a: usize, b: usize, ph: C64| {
            let mut v = [ZERO; 3];
            v[a] = c(r, 0.0);
            v[b] = ph * r;
            v
        };
        let mut states = vec![ket(e(0)), ket(e(1)), ket(e(2))];
        for (a, b) in [(1, 2), (0, 2), (0, 1)] {
            states.push(ket(pair(a, b, ONE)));
        }
        for (a, b) in [(1, 2), (0, 2), (0, 1)] {
            states.push(ket(pair(a, b, -I)));
        }
        Self { states }
    }

    pub fn projectors(&self) -> Vec<Operator> {
        self.states.iter().map(|v| v * v.adjoint()).collect()
    }

    /// Gram matrix `Tr[P_i P_j]` of the vectorized projectors.
    pub fn gram(&self) -> DMatrix<f64> {
        let p = self.projectors();
        DMatrix::from_fn(9, 9, |i, j| hs_inner(&p[i], &p[j]).re)
    }

    /// Ratio of extreme singular values of the Gram matrix; finite iff the
    /// set is tomographically complete.
    pub fn gram_condition_number(&self) -> f64 {
        let sv = self.gram().singular_values();
        let max = sv.max();
        let min = sv.min();
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    pub fn is_complete(&self) -> bool {
        self.gram_condition_number() < 1e12
    }
}

/// 9×9 process matrix in the `Ê` basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ChiJson", try_from = "ChiJson")]
pub struct ProcessMatrix {
    pub chi: Operator,
}

#[derive(Serialize, Deserialize)]
struct ChiJson {
    real: Vec<Vec<f64>>,
    imag: Vec<Vec<f64>>,
}

impl From<ProcessMatrix> for ChiJson {
    fn from(p: ProcessMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| {
            (0..p.chi.nrows())
                .map(|i| (0..p.chi.ncols()).map(|j| f(&p.chi[(i, j)])).collect())
                .collect()
        };
        ChiJson {
            real: rows(|z| z.re),
            imag: rows(|z| z.im),
        }
    }
}

impl TryFrom<ChiJson> for ProcessMatrix {
    type Error = Error;

    fn try_from(j: ChiJson) -> Result<Self> {
        let n = j.real.len();
        if j.imag.len() != n || j.real.iter().chain(&j.imag).any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("chi JSON must hold two equal square arrays".into()));
        }
        Ok(ProcessMatrix {
            chi: Operator::from_fn(n, n, |a, b| c(j.real[a][b], j.imag[a][b])),
        })
    }
}

impl ProcessMatrix {
    pub fn new(chi: Operator) -> Result<Self> {
        ensure_dim(&chi, CHI_DIM)?;
        Ok(Self { chi })
    }

    /// `Σ_jk χ_jk Ê_j ρ Ê_k†`
    pub fn apply(&self, rho: &Operator) -> Operator {
        let e = gell_mann_basis();
        let mut out = Operator::zeros(3, 3);
        for j in 0..9 {
            let left = &e[j] * rho;
            for k in 0..9 {
                let x = self.chi[(j, k)];
                if x != ZERO {
                    out += &left * e[k].adjoint() * x;
                }
            }
        }
        out
    }

    /// `Σ_jk χ_jk Ê_k†Ê_j`; equals `I` for a trace-preserving process.
    pub fn tp_operator(&self) -> Operator {
        let e = gell_mann_basis();
        let mut g = Operator::zeros(3, 3);
        for j in 0..9 {
            for k in 0..9 {
                g += e[k].adjoint() * &e[j] * self.chi[(j, k)];
            }
        }
        g
    }

    pub fn tp_residual(&self) -> f64 {
        (self.tp_operator() - identity(3)).norm()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigh(&self.chi)?.0[0])
    }

    pub fn trace(&self) -> f64 {
        self.chi.trace().re
    }
}

/// Process whose tomography data is simulated.
#[derive(Debug, Clone, Copy)]
pub enum Process<'a> {
    Unitary(&'a Operator),
    Channel(&'a Channel),
    Chi(&'a ProcessMatrix),
}

impl Process<'_> {
    fn apply(&self, rho: &Operator) -> Result<Operator> {
        match self {
            Process::Unitary(u) => {
                ensure_dim(u, 3)?;
                Ok(*u * rho * u.adjoint())
            }
            Process::Channel(ch) => ch.apply(rho),
            Process::Chi(p) => Ok(p.apply(rho)),
        }
    }
}

/// `p_mn = ⟨Φ_n|E(|Ψ_m⟩⟨Ψ_m|)|Φ_n⟩`
pub fn probabilities(process: Process<'_>, bases: &TomographyBasisSet) -> Result<ProbTable> {
    let mut p = [[0.0; 9]; 9];
    for (m, psi) in bases.states.iter().enumerate() {
        let out = process.apply(&(psi * psi.adjoint()))?;
        for (n, phi) in bases.states.iter().enumerate() {
            p[m][n] = phi.dotc(&(&out * phi)).re;
        }
    }
    Ok(p)
}

/// `U = Σ_j c_j Ê_j`, `c_j = Tr[Ê_j†U]/2`, `χ = cc†`.
pub fn chi_coefficients(u: &Operator) -> [C64; 9] {
    let e = gell_mann_basis();
    std::array::from_fn(|j| hs_inner(&e[j], u) / 2.0)
}

pub fn chi_theoretical(u: &Operator) -> Result<ProcessMatrix> {
    ensure_dim(u, 3)?;
    ensure_unitary(u, 1e-10)?;
    let cv = DVector::from_vec(chi_coefficients(u).to_vec());
    Ok(ProcessMatrix {
        chi: &cv * cv.adjoint(),
    })
}

/// `χ' = RχR†` with `R_ij = Tr[Ê_i† W†Ê_j W]/2`, the process matrix of
/// `W†·E(W·ρ·W†)·W`.
pub fn chi_conjugate(chi: &ProcessMatrix, w: &Operator) -> Result<ProcessMatrix> {
    ensure_dim(w, 3)?;
    let e = gell_mann_basis();
    let r = Operator::from_fn(9, 9, |i, j| {
        let ej = w.adjoint() * &e[j] * w;
        hs_inner(&e[i], &ej) / 2.0
    });
    Ok(ProcessMatrix {
        chi: &r * &chi.chi * r.adjoint(),
    })
}

/// Process matrix in the parity eigenbasis, via the Fourier matrix `F`.
pub fn chi_basis_change(chi: &ProcessMatrix) -> Result<ProcessMatrix> {
    chi_conjugate(chi, &fourier_matrix())
}

/// `Tr[χ_aχ_b] / √(Tr[χ_a²]·Tr[χ_b²])`
pub fn process_fidelity(a: &ProcessMatrix, b: &ProcessMatrix) -> Result<f64> {
    let na = hs_inner(&a.chi, &a.chi).re;
    let nb = hs_inner(&b.chi, &b.chi).re;
    if na <= 0.0 || nb <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(hs_inner(&a.chi, &b.chi).re / (na * nb).sqrt())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub counts: [[u64; 9]; 9],
    /// Shots per (preparation, measurement) setting.
    pub shots: u64,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct CountRow {
    prep: usize,
    meas: usize,
    count: u64,
}

impl CountTable {
    pub fn frequencies(&self) -> ProbTable {
        let s = self.shots as f64;
        std::array::from_fn(|m| std::array::from_fn(|n| self.counts[m][n] as f64 / s))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (m, row) in self.counts.iter().enumerate() {
            for (n, &count) in row.iter().enumerate() {
                w.serialize(CountRow { prep: m, meas: n, count })
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn from_csv(text: &str, shots: u64, seed: u64) -> Result<Self> {
        let mut counts = [[0u64; 9]; 9];
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        for row in rdr.deserialize::<CountRow>() {
            let row = row.map_err(|e| Error::InvalidArgument(e.to_string()))?;
            if row.prep >= 9 || row.meas >= 9 {
                return Err(Error::InvalidArgument(format!(
                    "setting ({}, {}) out of range",
                    row.prep, row.meas
                )));
            }
            counts[row.prep][row.meas] = row.count;
        }
        Ok(Self { counts, shots, seed })
    }
}

/// Poisson draw; a zero mean always gives zero.
pub fn poisson_draw<R: rand::Rng>(rng: &mut R, mean: f64) -> Result<u64> {
    if !(mean.is_finite() && mean >= 0.0) {
        return Err(Error::InvalidProbability(mean));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(d.sample(rng) as u64)
}

fn clean_prob(p: f64) -> Result<f64> {
    if !p.is_finite() || p < -1e-12 {
        return Err(Error::InvalidProbability(p));
    }
    Ok(p.max(0.0))
}

/// Counts drawn Poisson with mean `shots·p_mn`, row-major, from a ChaCha8
/// stream seeded by `seed`.
pub fn simulate_counts(probs: &ProbTable, shots: u64, seed: u64) -> Result<CountTable> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [[0u64; 9]; 9];
    for m in 0..9 {
        for n in 0..9 {
            counts[m][n] = poisson_draw(&mut rng, shots as f64 * clean_prob(probs[m][n])?)?;
        }
    }
    Ok(CountTable {
        counts,
        shots,
        seed,
    })
}

/// `b_j = conj⟨Φ_n|Ê_j|Ψ_m⟩`, so that the model is `p_mn = b†χb`.
fn model_vectors(bases: &TomographyBasisSet) -> Vec<DVector<C64>> {
    let e = gell_mann_basis();
    let mut out = Vec::with_capacity(81);
    for psi in &bases.states {
        for phi in &bases.states {
            out.push(DVector::from_iterator(9, e.iter().map(|ej| phi.dotc(&(ej * psi)).conj())));
        }
    }
    out
}

/// Real coordinates of a 9×9 Hermitian matrix: diagonal, then `Re`/`Im`
/// pairs of the strict upper triangle.
fn hermitian_basis_value(b: &DVector<C64>, r: usize) -> f64 {
    if r < 9 {
        return b[r].norm_sqr();
    }
    let (j, k, imag) = upper_index(r);
    let z = b[j].conj() * b[k];
    if imag {
        -2.0 * z.im
    } else {
        2.0 * z.re
    }
}

fn upper_index(r: usize) -> (usize, usize, bool) {
    let mut idx = (r - 9) / 2;
    let imag = (r - 9) % 2 == 1;
    for j in 0..9 {
        let row = 8 - j;
        if idx < row {
            return (j, j + 1 + idx, imag);
        }
        idx -= row;
    }
    unreachable!("index within 81")
}

fn hermitian_from_coords(theta: &DVector<f64>) -> Operator {
    let mut m = Operator::zeros(9, 9);
    for r in 0..81 {
        let t = theta[r];
        if r < 9 {
            m[(r, r)] += c(t, 0.0);
        } else {
            let (j, k, imag) = upper_index(r);
            let z = if imag { c(0.0, t) } else { c(t, 0.0) };
            m[(j, k)] += z;
            m[(k, j)] += z.conj();
        }
    }
    m
}

/// Unconstrained least-squares χ (Hermitian, possibly not PSD).
pub fn linear_inversion(probs: &ProbTable, bases: &TomographyBasisSet) -> Result<ProcessMatrix> {
    let b = model_vectors(bases);
    let design = DMatrix::from_fn(81, 81, |row, r| hermitian_basis_value(&b[row], r));
    let rhs = DVector::from_iterator(81, (0..81).map(|row| probs[row / 9][row % 9]));
    let theta = design
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Internal(e.to_string()))?;
    Ok(ProcessMatrix {
        chi: hermitian_from_coords(&theta),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub gradient_tol: f64,
    /// Stop once an accepted step lowers the cost by less than this fraction.
    pub cost_tol: f64,
    /// Weight of `‖Σχ_jkÊ_k†Ê_j − I‖²` in the cost.
    pub tp_weight: f64,
    /// Linear-inversion `Tr[Σχ_jkÊ_k†Ê_j]/3` below `1 − loss_tol` marks the
    /// data as lossy; the trace constraint is then dropped.
    pub loss_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
            gradient_tol: 1e-10,
            cost_tol: 1e-12,
            tp_weight: 100.0,
            loss_tol: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub chi: ProcessMatrix,
    pub iterations: usize,
    /// `Σ_mn (model − p)²` at the optimum.
    pub residual: f64,
    pub gradient_norm: f64,
    pub tp_residual: f64,
    pub lossy: bool,
}

const N_PARAMS: usize = 90;

fn tril_pairs() -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(45);
    for i in 0..9 {
        for k in 0..=i {
            v.push((i, k));
        }
    }
    v
}

fn unpack(x: &DVector<f64>, pairs: &[(usize, usize)]) -> Operator {
    let mut l = Operator::zeros(9, 9);
    for (p, &(i, k)) in pairs.iter().enumerate() {
        l[(i, k)] = c(x[2 * p], x[2 * p + 1]);
    }
    l
}

fn pack(l: &Operator, pairs: &[(usize, usize)]) -> DVector<f64> {
    let mut x = DVector::zeros(N_PARAMS);
    for (p, &(i, k)) in pairs.iter().enumerate() {
        x[2 * p] = l[(i, k)].re;
        x[2 * p + 1] = l[(i, k)].im;
    }
    x
}

/// Lower-triangular `L` with `LL† = χ` for PSD `χ`, including rank-deficient
/// ones: with `χ = AA†` and `A† = QR`, `L = R†`.
fn lower_factor(chi: &Operator) -> Result<Operator> {
    let (vals, vecs) = eigh(chi)?;
    let d = DVector::from_iterator(9, vals.iter().map(|&v| c(v.max(0.0).sqrt(), 0.0)));
    let a = vecs * Operator::from_diagonal(&d);
    let r = a.adjoint().qr().r();
    Ok(r.adjoint())
}

struct Problem<'a> {
    b: &'a [DVector<C64>],
    p: Vec<f64>,
    e: [Operator; 9],
    pairs: Vec<(usize, usize)>,
    tp_scale: Option<f64>,
}

impl Problem<'_> {
    fn n_res(&self) -> usize {
        81 + if self.tp_scale.is_some() { 18 } else { 0 }
    }

    fn eval(&self, x: &DVector<f64>, want_jac: bool) -> (DVector<f64>, Option<DMatrix<f64>>) {
        let l = unpack(x, &self.pairs);
        let mut r = DVector::zeros(self.n_res());
        let mut jac = want_jac.then(|| DMatrix::zeros(self.n_res(), N_PARAMS));
        let ld = l.adjoint();
        for (row, b) in self.b.iter().enumerate() {
            let y = &ld * b;
            r[row] = y.norm_squared() - self.p[row];
            if let Some(j) = jac.as_mut() {
                for (q, &(i, k)) in self.pairs.iter().enumerate() {
                    let z = b[i].conj() * y[k];
                    j[(row, 2 * q)] = 2.0 * z.re;
                    j[(row, 2 * q + 1)] = -2.0 * z.im;
                }
            }
        }
        if let Some(w) = self.tp_scale {
            // G = Σ_l M_l†M_l − I with M_l = Σ_j L_jl Ê_j
            let m: Vec<Operator> = (0..9)
                .map(|col| {
                    let mut acc = Operator::zeros(3, 3);
                    for j in col..9 {
                        acc += &self.e[j] * l[(j, col)];
                    }
                    acc
                })
                .collect();
            let mut g = -identity(3);
            for ml in &m {
                g += ml.adjoint() * ml;
            }
            for a in 0..9 {
                r[81 + 2 * a] = w * g[(a / 3, a % 3)].re;
                r[81 + 2 * a + 1] = w * g[(a / 3, a % 3)].im;
            }
            if let Some(jm) = jac.as_mut() {
                for (q, &(j, col)) in self.pairs.iter().enumerate() {
                    let mix = self.e[j].adjoint() * &m[col];
                    let d_re = &mix + mix.adjoint();
                    let d_im = (mix.adjoint() - &mix) * I;
                    for a in 0..9 {
                        let (u, v) = (a / 3, a % 3);
                        jm[(81 + 2 * a, 2 * q)] = w * d_re[(u, v)].re;
                        jm[(81 + 2 * a + 1, 2 * q)] = w * d_re[(u, v)].im;
                        jm[(81 + 2 * a, 2 * q + 1)] = w * d_im[(u, v)].re;
                        jm[(81 + 2 * a + 1, 2 * q + 1)] = w * d_im[(u, v)].im;
                    }
                }
            }
        }
        (r, jac)
    }
}

/// Least-squares χ over physical process matrices (`χ = LL†`), started from
/// the PSD-clipped linear-inversion estimate and refined by
/// Levenberg–Marquardt with trace preservation as a penalty.
pub fn qpt_fit(probs: &ProbTable, bases: &TomographyBasisSet, opts: &FitOptions) -> Result<FitReport> {
    for row in probs {
        for &p in row {
            if !p.is_finite() {
                return Err(Error::InvalidProbability(p));
            }
        }
    }
    let b = model_vectors(bases);
    let lin = linear_inversion(probs, bases)?;
    let lossy = lin.tp_operator().trace().re / 3.0 < 1.0 - opts.loss_tol;
    let problem = Problem {
        b: &b,
        p: (0..81).map(|row| probs[row / 9][row % 9]).collect(),
        e: gell_mann_basis(),
        pairs: tril_pairs(),
        tp_scale: (!lossy).then(|| opts.tp_weight.sqrt()),
    };

    let mut x = pack(&lower_factor(&lin.chi)?, &problem.pairs);
    let (mut r, mut jac) = problem.eval(&x, true);
    let mut cost = r.norm_squared();
    let mut lambda = {
        let j = jac.as_ref().unwrap();
        1e-3 * (j.transpose() * j).diagonal().max().max(1e-12)
    };
    let mut iterations = 0;
    let mut grad_norm;
    loop {
        let j = jac.as_ref().unwrap();
        let g = j.transpose() * &r;
        grad_norm = g.norm();
        if grad_norm < opts.gradient_tol {
            break;
        }
        if iterations >= opts.max_iterations {
            return Err(Error::FitFailure {
                iterations,
                residual: cost,
            });
        }
        iterations += 1;
        let jtj = j.transpose() * j;
        let mut improved = false;
        while lambda < 1e20 {
            let mut a = jtj.clone();
            for d in 0..N_PARAMS {
                a[(d, d)] += lambda;
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let x_new = &x + &step;
            let (r_new, _) = problem.eval(&x_new, false);
            let cost_new = r_new.norm_squared();
            if cost_new < cost {
                let small = step.norm() <= 1e-15 * (x.norm() + 1e-15);
                x = x_new;
                let (r2, j2) = problem.eval(&x, true);
                r = r2;
                jac = j2;
                let drop = cost - cost_new;
                cost = cost_new;
                lambda = (lambda / 3.0).max(1e-18);
                improved = true;
                if small || drop <= 1e-30 || drop <= opts.cost_tol * cost {
                    lambda = 1e20;
                }
                break;
            }
            lambda *= 4.0;
        }
        if !improved || lambda >= 1e20 {
            let j = jac.as_ref().unwrap();
            grad_norm = (j.transpose() * &r).norm();
            break;
        }
    }

    let l = unpack(&x, &problem.pairs);
    let chi = ProcessMatrix { chi: &l * l.adjoint() };
    let residual = r.rows(0, 81).norm_squared();
    Ok(FitReport {
        tp_residual: chi.tp_residual(),
        chi,
        iterations,
        residual,
        gradient_norm: grad_norm,
        lossy,
    })
}

pub fn qpt_fit_counts(counts: &CountTable, bases: &TomographyBasisSet, opts: &FitOptions) -> Result<FitReport> {
    qpt_fit(&counts.frequencies(), bases, opts)
}

pub const DEFAULT_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bootstrap {
    pub mean: f64,
    pub sigma: f64,
    pub resamples: usize,
}

/// Redraw every count Poisson with its observed value as mean, recompute the
/// statistic, and report sample mean and standard deviation. Resample `r`
/// uses stream `r` of a ChaCha8 generator seeded with `seed`.
pub fn bootstrap<T, F>(data: &T, resamples: usize, seed: u64, statistic: F) -> Result<Bootstrap>
where
    T: Resample,
    F: Fn(&T) -> Result<f64>,
{
    if resamples < 2 {
        return Err(Error::InvalidArgument("bootstrap needs at least two resamples".into()));
    }
    let mut values = Vec::with_capacity(resamples);
    for r in 0..resamples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64 + 1);
        values.push(statistic(&data.resample(&mut rng)?)?);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Bootstrap {
        mean,
        sigma: var.sqrt(),
        resamples,
    })
}

pub trait Resample: Sized {
    fn resample(&self, rng: &mut ChaCha8Rng) -> Result<Self>;
}

impl Resample for CountTable {
    fn resample(&self, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mut counts = [[0u64; 9]; 9];
        for m in 0..9 {
            for n in 0..9 {
                counts[m][n] = poisson_draw(rng, self.counts[m][n] as f64)?;
            }
        }
        Ok(Self {
            counts,
            shots: self.shots,
            seed: self.seed,
        })
    }
}

/// Nine projective measurement counts on one qutrit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCounts {
    pub counts: [u64; 9],
    pub shots: u64,
}

impl Resample for StateCounts {
    fn resample(&self, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mut counts = [0u64; 9];
        for (dst, &src) in counts.iter_mut().zip(&self.counts) {
            *dst = poisson_draw(rng, src as f64)?;
        }
        Ok(Self {
            counts,
            shots: self.shots,
        })
    }
}

impl StateCounts {
    pub fn frequencies(&self) -> [f64; 9] {
        std::array::from_fn(|n| self.counts[n] as f64 / self.shots as f64)
    }
}

pub fn state_probabilities(rho: &DensityMatrix, bases: &TomographyBasisSet) -> Result<[f64; 9]> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: rho.dim(),
        });
    }
    let mut p = [0.0; 9];
    for (n, phi) in bases.states.iter().enumerate() {
        p[n] = phi.dotc(&(rho.matrix() * phi)).re;
    }
    Ok(p)
}

pub fn simulate_state_counts(probs: &[f64; 9], shots: u64, seed: u64) -> Result<StateCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 9];
    for (dst, &p) in counts.iter_mut().zip(probs) {
        *dst = poisson_draw(&mut rng, shots as f64 * clean_prob(p)?)?;
    }
    Ok(StateCounts { counts, shots })
}

/// Linear inversion of `p_n = ⟨Φ_n|ρ|Φ_n⟩`, then projection onto the
/// nearest density matrix.
pub fn reconstruct_state(freqs: &[f64; 9], bases: &TomographyBasisSet) -> Result<DensityMatrix> {
    // Hermitian 3×3 coordinates: diagonal, then Re/Im of (0,1), (0,2), (1,2).
    let upper = [(0usize, 1usize), (0, 2), (1, 2)];
    let coord = |v: &DVector<C64>, r: usize| -> f64 {
        if r < 3 {
            v[r].norm_sqr()
        } else {
            let (j, k) = upper[(r - 3) / 2];
            let z = v[j].conj() * v[k];
            if (r - 3) % 2 == 0 {
                2.0 * z.re
            } else {
                -2.0 * z.im
            }
        }
    };
    let design = DMatrix::from_fn(9, 9, |n, r| coord(&bases.states[n], r));
    let theta = design
        .svd(true, true)
        .solve(&DVector::from_column_slice(freqs), 1e-12)
        .map_err(|e| Error::Internal(e.to_string()))?;
    let mut rho = Operator::zeros(3, 3);
    for r in 0..9 {
        if r < 3 {
            rho[(r, r)] = c(theta[r], 0.0);
        } else {
            let (j, k) = upper[(r - 3) / 2];
            let z = if (r - 3) % 2 == 0 { c(theta[r], 0.0) } else { c(0.0, theta[r]) };
            rho[(j, k)] += z;
            rho[(k, j)] += z.conj();
        }
    }
    DensityMatrix::project_physical(&rho)
}
