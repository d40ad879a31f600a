//! Bipartite states: validated density matrices, the two-qubit Bloch
//! picture, Schmidt spectra, the standard state families and random
//! ensembles.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{check_range, Error, Result};
use crate::linalg::{self, kron, pauli, ComplexMatrix, HermitianSpectrum, Subsystem, HERMITIAN_TOL};
use crate::rng::complex_gaussian;

/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are round-off; anything lower is rejected.
pub const PSD_TOL: f64 = 1e-9;
/// Normalization tolerance for Schmidt spectra.
pub const SPECTRUM_TOL: f64 = 1e-12;

/// Density matrix on C^{d_A} ⊗ C^{d_B}, with index `a * d_B + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteDensityMatrix {
    matrix: ComplexMatrix,
    d_a: usize,
    d_b: usize,
}

impl BipartiteDensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        let state = Self::from_parts(matrix, d_a, d_b)?;
        state.validate()?;
        Ok(state)
    }

    /// Shape-checked only; for constructors that are positive by construction.
    pub(crate) fn from_parts(matrix: ComplexMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 || matrix.rows() != d_a * d_b || matrix.cols() != d_a * d_b {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a {d_a}x{d_b} bipartition",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { matrix, d_a, d_b })
    }

    /// Checks every density-matrix invariant, returning the spectrum.
    pub fn validate(&self) -> Result<HermitianSpectrum> {
        let deviation = self.matrix.hermitian_deviation();
        if deviation.is_nan() || deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let spectrum = linalg::hermitian_eigenvalues(&self.matrix)?;
        if spectrum.min() < -PSD_TOL {
            return Err(Error::NotAState(format!("eigenvalue {:.3e}", spectrum.min())));
        }
        Ok(spectrum)
    }

    pub fn maximally_mixed(d_a: usize, d_b: usize) -> Self {
        let n = d_a * d_b;
        Self {
            matrix: ComplexMatrix::identity(n).scale(1.0 / n as f64),
            d_a,
            d_b,
        }
    }

    /// Pure state from a normalized amplitude vector.
    pub fn from_pure(psi: &[Complex64], d_a: usize, d_b: usize) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("vector norm^2 {norm}")));
        }
        Self::from_parts(ComplexMatrix::outer(psi), d_a, d_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::A => self.d_a,
            Subsystem::B => self.d_b,
        }
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn spectrum(&self) -> Result<HermitianSpectrum> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn partial_transpose(&self, subsystem: Subsystem) -> ComplexMatrix {
        linalg::partial_transpose(&self.matrix, self.d_a, self.d_b, subsystem)
            .expect("dimensions checked at construction")
    }

    pub fn partial_trace(&self, keep: Subsystem) -> ComplexMatrix {
        linalg::partial_trace(&self.matrix, self.d_a, self.d_b, keep).expect("dimensions checked at construction")
    }

    /// Same state with the roles of A and B exchanged.
    pub fn swap(&self) -> Self {
        let (da, db) = (self.d_a, self.d_b);
        let n = da * db;
        let idx = |r: usize| (r % da) * db + r / da;
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| self.matrix[(idx(r), idx(c))]);
        Self {
            matrix,
            d_a: db,
            d_b: da,
        }
    }

    /// (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†.
    pub fn conjugate_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        if u_a.rows() != self.d_a || u_b.rows() != self.d_b || !u_a.is_square() || !u_b.is_square() {
            return Err(Error::DimensionMismatch("local unitary sizes".into()));
        }
        let u = kron(u_a, u_b);
        Ok(Self {
            matrix: self.matrix.conjugate_by(&u.adjoint()),
            d_a: self.d_a,
            d_b: self.d_b,
        })
    }

    /// p·self + (1-p)·other.
    pub fn mix(&self, p: f64, other: &Self) -> Result<Self> {
        check_range("p", p, 0.0, 1.0, "[0, 1]")?;
        if (self.d_a, self.d_b) != (other.d_a, other.d_b) {
            return Err(Error::DimensionMismatch("mixing states of different dimensions".into()));
        }
        let matrix = &self.matrix.scale(p) + &other.matrix.scale(1.0 - p);
        Self::from_parts(matrix, self.d_a, self.d_b)
    }
}

/// Squared Schmidt coefficients of a pure bipartite state, sorted decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    alpha: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn new(mut alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::BadSpectrum("empty".into()));
        }
        if let Some(bad) = alpha.iter().find(|&&x| x.is_nan() || x < 0.0) {
            return Err(Error::BadSpectrum(format!("negative or non-finite entry {bad}")));
        }
        let total: f64 = alpha.iter().sum();
        if (total - 1.0).abs() > SPECTRUM_TOL {
            return Err(Error::BadSpectrum(format!("sums to {total}")));
        }
        alpha.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Zero-padded to dimension `d`.
    pub fn padded(&self, d: usize) -> Result<Self> {
        if d < self.alpha.len() {
            return Err(Error::BadSpectrum(format!(
                "{} coefficients in dimension {d}",
                self.alpha.len()
            )));
        }
        let mut alpha = self.alpha.clone();
        alpha.resize(d, 0.0);
        Ok(Self { alpha })
    }
}

/// Two-qubit state in the Pauli basis:
/// ρ = ¼ (I + Σ x_i σ_i⊗I + Σ y_j I⊗σ_j + Σ t_ij σ_i⊗σ_j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochForm {
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochForm {
    /// R_ij = Tr[ρ σ_i⊗σ_j] for i, j = 0..3.
    pub fn correlation_matrix(&self) -> [[f64; 4]; 4] {
        let mut r = [[0.0; 4]; 4];
        r[0][0] = 1.0;
        for i in 0..3 {
            r[i + 1][0] = self.x[i];
            r[0][i + 1] = self.y[i];
            for j in 0..3 {
                r[i + 1][j + 1] = self.t[i][j];
            }
        }
        r
    }
}

/// Tr[ρ op] without forming the product.
fn expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> Complex64 {
    let n = rho.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * op[(j, i)];
        }
    }
    acc
}

pub fn bloch_decompose(rho: &BipartiteDensityMatrix) -> Result<BlochForm> {
    if (rho.d_a, rho.d_b) != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "Bloch form needs 2x2, got {}x{}",
            rho.d_a, rho.d_b
        )));
    }
    let m = rho.matrix();
    let mut r = [[0.0; 4]; 4];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = expectation(m, &kron(&pauli(i), &pauli(j))).re;
        }
    }
    let mut form = BlochForm {
        x: [0.0; 3],
        y: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        form.x[i] = r[i + 1][0];
        form.y[i] = r[0][i + 1];
        for j in 0..3 {
            form.t[i][j] = r[i + 1][j + 1];
        }
    }
    Ok(form)
}

pub fn bloch_compose(form: &BlochForm) -> Result<BipartiteDensityMatrix> {
    let r = form.correlation_matrix();
    let mut m = ComplexMatrix::zeros(4, 4);
    for (i, row) in r.iter().enumerate() {
        for (j, &coef) in row.iter().enumerate() {
            if coef != 0.0 {
                m = &m + &kron(&pauli(i), &pauli(j)).scale(coef / 4.0);
            }
        }
    }
    let state = BipartiteDensityMatrix::from_parts(m, 2, 2)?;
    state.validate()?;
    Ok(state)
}

/// |ψ⟩ = Σ_j √α_j |j⟩|j⟩.
pub fn from_schmidt(alpha: &SchmidtSpectrum, d_a: usize, d_b: usize) -> Result<BipartiteDensityMatrix> {
    if alpha.len() > d_a.min(d_b) {
        return Err(Error::BadSpectrum(format!(
            "{} Schmidt coefficients do not fit in {d_a}x{d_b}",
            alpha.len()
        )));
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); d_a * d_b];
    for (j, &a) in alpha.alpha().iter().enumerate() {
        psi[j * d_b + j] = Complex64::new(a.sqrt(), 0.0);
    }
    BipartiteDensityMatrix::from_parts(ComplexMatrix::outer(&psi), d_a, d_b)
}

/// Two-qubit pure state in Schmidt form with negativity `n`.
pub fn pure_2q_from_negativity(n: f64) -> Result<BipartiteDensityMatrix> {
    check_range("negativity", n, 0.0, 1.0, "[0, 1]")?;
    let root = (1.0 - n * n).sqrt();
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(0.5 * (1.0 + root), 0.0);
    m[(3, 3)] = Complex64::new(0.5 * (1.0 - root), 0.0);
    m[(0, 3)] = Complex64::new(0.5 * n, 0.0);
    m[(3, 0)] = Complex64::new(0.5 * n, 0.0);
    BipartiteDensityMatrix::from_parts(m, 2, 2)
}

/// Schmidt spectrum of a pure state, read off the A marginal.
pub fn schmidt_spectrum(rho: &BipartiteDensityMatrix, purity_tol: f64) -> Result<SchmidtSpectrum> {
    let purity = rho.purity();
    if purity < 1.0 - purity_tol {
        return Err(Error::NotPure { purity });
    }
    let marginal = rho.partial_trace(Subsystem::A);
    let mut alpha: Vec<f64> = linalg::hermitian_eigenvalues(&marginal)?
        .into_vec()
        .into_iter()
        .map(|x| x.max(0.0))
        .collect();
    let total: f64 = alpha.iter().sum();
    alpha.iter_mut().for_each(|x| *x /= total);
    SchmidtSpectrum::new(alpha)
}

/// Swap operator F = Σ_ij |ij⟩⟨ji| on C^d ⊗ C^d.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut f = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    f
}

/// d^{-1/2} Σ_i |ii⟩.
pub fn max_entangled_vector(d: usize) -> Vec<Complex64> {
    let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        psi[i * d + i] = amp;
    }
    psi
}

/// Werner state with ⟨F⟩ = -k: [(d + k) I - (dk + 1) F] / (d³ - d).
pub fn werner(d: usize, k: f64) -> Result<BipartiteDensityMatrix> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: ">= 2",
        });
    }
    check_range("k", k, -1.0, 1.0, "[-1, 1]")?;
    let df = d as f64;
    let norm = df * df * df - df;
    let id = ComplexMatrix::identity(d * d).scale((df + k) / norm);
    let f = swap_operator(d).scale((df * k + 1.0) / norm);
    BipartiteDensityMatrix::from_parts(&id - &f, d, d)
}

/// Isotropic state with fidelity `p` to the maximally entangled state.
pub fn isotropic(d: usize, p: f64) -> Result<BipartiteDensityMatrix> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: ">= 2",
        });
    }
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let d2 = (d * d) as f64;
    let id = ComplexMatrix::identity(d * d).scale((1.0 - p) / (d2 - 1.0));
    let proj = ComplexMatrix::outer(&max_entangled_vector(d)).scale((d2 * p - 1.0) / (d2 - 1.0));
    BipartiteDensityMatrix::from_parts(&id + &proj, d, d)
}

/// Left-hand side of the admissibility condition of the rank-two X family;
/// the family is defined where this is non-negative.
pub fn x_boundary_discriminant(a: f64, c: f64) -> f64 {
    -1.0 + 6.0 * a - 7.0 * a * a + 6.0 * c - 18.0 * a * c - 7.0 * c * c
        + 4.0 * SQRT_2 * (a * c).sqrt() * (2.0 * a + 2.0 * c - 1.0).abs()
}

/// Round-off allowance on the admissibility condition.
const REGION_TOL: f64 = 1e-12;

/// Rank-two X state parameterized by its (|00⟩, |10⟩) populations `a`, `c`;
/// `b` follows from the boundary condition and `d = 1 - a - b - c`.
pub fn x_boundary_state(a: f64, c: f64) -> Result<BipartiteDensityMatrix> {
    let disc = x_boundary_discriminant(a, c);
    if !(0.0..=0.5).contains(&a) || !(0.0..=0.5).contains(&c) || disc.is_nan() || disc < -REGION_TOL {
        return Err(Error::OutsideRegion { a, c });
    }
    let b = (2.0 - 2.0 * a - 2.0 * c + 2.0 * disc.max(0.0).sqrt()) / 4.0;
    let d = 1.0 - a - b - c;
    if d < -PSD_TOL {
        return Err(Error::NotAState(format!("population d = {d:.3e}")));
    }
    let d = d.max(0.0);
    let mut m = ComplexMatrix::from_diagonal(&[a, b, c, d]);
    let ad = Complex64::new((a * d).sqrt(), 0.0);
    let bc = Complex64::new((b * c).sqrt(), 0.0);
    m[(0, 3)] = ad;
    m[(3, 0)] = ad;
    m[(1, 2)] = bc;
    m[(2, 1)] = bc;
    BipartiteDensityMatrix::from_parts(m, 2, 2)
}

/// Separable two-qubit state of maximal geometric discord (measured on B).
pub fn sep_opt_state() -> BipartiteDensityMatrix {
    let hi = (2.0 + SQRT_2) / 8.0;
    let lo = (2.0 - SQRT_2) / 8.0;
    let off = 1.0 / (4.0 * SQRT_2);
    #[rustfmt::skip]
    let entries = [
        hi, 0.0, 0.0, off,
        0.0, lo, off, 0.0,
        0.0, off, hi, 0.0,
        off, 0.0, 0.0, lo,
    ];
    let m = ComplexMatrix::from_real(4, 4, &entries).expect("4x4");
    BipartiteDensityMatrix::from_parts(m, 2, 2).expect("4x4")
}

/// p·sep_opt + (1 - p)·I/4.
pub fn sep_mixture(p: f64) -> Result<BipartiteDensityMatrix> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    sep_opt_state().mix(p, &BipartiteDensityMatrix::maximally_mixed(2, 2))
}

/// Schmidt spectra attaining the minimum discord at fixed negativity:
/// α_0 = sin²θ, α_i = cos²θ/(d-1).
pub fn saturating_schmidt(d: usize, theta: f64) -> Result<SchmidtSpectrum> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: ">= 2",
        });
    }
    let lo = saturating_theta_min(d);
    // tolerate round-off at the maximally entangled end
    check_range(
        "theta",
        theta,
        lo - 1e-12,
        FRAC_PI_2 + 1e-12,
        "[arccos sqrt((d-1)/d), pi/2]",
    )?;
    let s2 = theta.sin().powi(2);
    let rest = (1.0 - s2) / (d - 1) as f64;
    let mut alpha = vec![rest; d];
    alpha[0] = s2;
    let total: f64 = alpha.iter().sum();
    alpha.iter_mut().for_each(|x| *x /= total);
    SchmidtSpectrum::new(alpha)
}

pub fn saturating_theta_min(d: usize) -> f64 {
    ((d - 1) as f64 / d as f64).sqrt().acos()
}

/// Parameterized state families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Werner { d: usize, k: f64 },
    Isotropic { d: usize, p: f64 },
    XBoundary { a: f64, c: f64 },
    SepMixture { p: f64 },
}

impl Family {
    pub fn state(&self) -> Result<BipartiteDensityMatrix> {
        match *self {
            Family::Werner { d, k } => werner(d, k),
            Family::Isotropic { d, p } => isotropic(d, p),
            Family::XBoundary { a, c } => x_boundary_state(a, c),
            Family::SepMixture { p } => sep_mixture(p),
        }
    }
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn random_pure<R: Rng + ?Sized>(d_a: usize, d_b: usize, rng: &mut R) -> BipartiteDensityMatrix {
    let mut psi: Vec<Complex64> = (0..d_a * d_b).map(|_| complex_gaussian(rng)).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    BipartiteDensityMatrix::from_parts(ComplexMatrix::outer(&psi), d_a, d_b).expect("shape")
}

/// ρ = G G† / Tr(G G†) with G a (d_A d_B) x rank complex Ginibre matrix.
/// `rank = d_A d_B` gives the Hilbert–Schmidt measure.
pub fn random_mixed<R: Rng + ?Sized>(
    d_a: usize,
    d_b: usize,
    rank: usize,
    rng: &mut R,
) -> Result<BipartiteDensityMatrix> {
    let n = d_a * d_b;
    if rank == 0 || rank > n {
        return Err(Error::BadRank { rank, dim: n });
    }
    let g = ComplexMatrix::from_fn(n, rank, |_, _| complex_gaussian(rng));
    let ggt = &g * &g.adjoint();
    let tr = ggt.trace().re;
    let mut m = ggt.scale(1.0 / tr);
    // exact Hermiticity
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in i + 1..n {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    BipartiteDensityMatrix::from_parts(m, d_a, d_b)
}

/// Flat-Dirichlet point on the probability simplex, sorted decreasing.
pub fn random_schmidt<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<SchmidtSpectrum> {
    if d == 0 {
        return Err(Error::BadSpectrum("dimension 0".into()));
    }
    let draws: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    SchmidtSpectrum::new(draws.into_iter().map(|x| x / total).collect())
}

/// Haar-random unitary via Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}
