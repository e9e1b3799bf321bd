//! Gaussian states of one or two beams over a truncated mode basis.
//!
//! Quadratures are stored beam-major and interleaved per mode,
//! `(X⁺_0, X⁻_0, X⁺_1, X⁻_1, ...)`, with vacuum variance 1 and
//! `[X⁺, X⁻] = 2i`. A coherent amplitude `α` has quadrature means
//! `(2 Re α, 2 Im α)`. The photon number `N` only scales readouts; the
//! covariance matrix is independent of it (linearized fluctuations).

use crate::error::{Error, Result};
use crate::modes::{ModalCoefficients, ModeBasis};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use std::sync::Arc;

/// Squeezing parameters above this are rejected; `e^{2r}` would swamp every
/// other entry of the covariance matrix.
pub const MAX_SQUEEZING: f64 = 20.0;

const SYMPLECTIC_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const PHYSICAL_TOL: f64 = 1e-9;

/// The block-diagonal symplectic form with `[[0, 1], [-1, 0]]` per mode.
pub fn symplectic_form(dim: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(dim, dim);
    for k in (0..dim).step_by(2) {
        omega[(k, k + 1)] = 1.0;
        omega[(k + 1, k)] = -1.0;
    }
    omega
}

/// A real linear map on the quadrature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    label: String,
}

impl SymplecticTransform {
    /// Wraps `matrix`, rejecting it unless `S Ω Sᵀ = Ω` within 1e-10.
    pub fn new(matrix: DMatrix<f64>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if !matrix.is_square() || !matrix.nrows().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "{label}: symplectic matrix must be square with even dimension"
            )));
        }
        let t = Self { matrix, label };
        let deviation = t.symplectic_deviation();
        if deviation > SYMPLECTIC_TOL {
            return Err(Error::InvalidArgument(format!(
                "{}: not symplectic (deviation {deviation:.3e})",
                t.label
            )));
        }
        Ok(t)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest entry of `|S Ω Sᵀ - Ω|`.
    pub fn symplectic_deviation(&self) -> f64 {
        let omega = symplectic_form(self.matrix.nrows());
        let lhs = &self.matrix * &omega * self.matrix.transpose();
        (lhs - omega).abs().max()
    }

    pub fn compose(&self, after: &SymplecticTransform) -> Result<SymplecticTransform> {
        if self.matrix.nrows() != after.matrix.nrows() {
            return Err(Error::InvalidArgument("dimension mismatch in composition".into()));
        }
        Ok(SymplecticTransform {
            matrix: &after.matrix * &self.matrix,
            label: format!("{} then {}", self.label, after.label),
        })
    }
}

/// One weighted quadrature `weight · X_φ` of a given beam and mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureTerm {
    pub beam: usize,
    pub mode: usize,
    pub angle: f64,
    pub weight: f64,
}

impl QuadratureTerm {
    pub fn new(beam: usize, mode: usize, angle: f64, weight: f64) -> Self {
        Self {
            beam,
            mode,
            angle,
            weight,
        }
    }
}

/// Mean vector and covariance matrix of one or two beams.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    basis: Arc<ModeBasis>,
    beams: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    photon_scale: f64,
}

impl GaussianState {
    /// All modes of every beam in vacuum.
    pub fn vacuum(beams: usize, basis: Arc<ModeBasis>, photon_scale: f64) -> Result<Self> {
        check_beams(beams)?;
        check_photon_scale(photon_scale)?;
        let dim = 2 * beams * basis.truncation();
        Ok(Self {
            basis,
            beams,
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim),
            photon_scale,
        })
    }

    /// Builds a state from explicit moments, checking symmetry and physicality.
    pub fn from_moments(
        beams: usize,
        basis: Arc<ModeBasis>,
        mean: DVector<f64>,
        cov: DMatrix<f64>,
        photon_scale: f64,
    ) -> Result<Self> {
        check_beams(beams)?;
        check_photon_scale(photon_scale)?;
        let dim = 2 * beams * basis.truncation();
        if mean.len() != dim || cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::State(format!("moments must have dimension {dim}")));
        }
        if (&cov - cov.transpose()).abs().max() > 1e-12 {
            return Err(Error::State("covariance matrix is not symmetric".into()));
        }
        let state = Self {
            basis,
            beams,
            mean,
            cov,
            photon_scale,
        };
        if !state.is_physical() {
            return Err(Error::State(
                "covariance matrix violates the uncertainty principle".into(),
            ));
        }
        Ok(state)
    }

    pub fn basis(&self) -> &Arc<ModeBasis> {
        &self.basis
    }

    pub fn beams(&self) -> usize {
        self.beams
    }

    pub fn modes_per_beam(&self) -> usize {
        self.basis.truncation()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn photon_scale(&self) -> f64 {
        self.photon_scale
    }

    pub fn waist(&self) -> f64 {
        self.basis.waist()
    }

    /// Same state with a different photon number `N`.
    pub fn with_photon_scale(&self, photon_scale: f64) -> Result<Self> {
        check_photon_scale(photon_scale)?;
        Ok(Self {
            photon_scale,
            ..self.clone()
        })
    }

    /// Index of `X⁺` for `(beam, mode)` in the quadrature vector.
    pub fn quadrature_index(&self, beam: usize, mode: usize) -> Result<usize> {
        if beam >= self.beams {
            return Err(Error::IndexOutOfRange {
                what: "beam",
                index: beam,
                limit: self.beams,
            });
        }
        let m = self.modes_per_beam();
        if mode >= m {
            return Err(Error::IndexOutOfRange {
                what: "mode",
                index: mode,
                limit: m,
            });
        }
        Ok(2 * (beam * m + mode))
    }

    /// Coherent amplitude `⟨a⟩` of a mode.
    pub fn amplitude(&self, beam: usize, mode: usize) -> Result<C64> {
        let i = self.quadrature_index(beam, mode)?;
        Ok(C64::new(self.mean[i], self.mean[i + 1]) * 0.5)
    }

    /// Sets the coherent amplitude of one mode; the covariance is untouched.
    pub fn set_coherent(&self, beam: usize, mode: usize, amplitude: C64) -> Result<Self> {
        let i = self.quadrature_index(beam, mode)?;
        let mut out = self.clone();
        out.mean[i] = 2.0 * amplitude.re;
        out.mean[i + 1] = 2.0 * amplitude.im;
        Ok(out)
    }

    /// Sets the coherent amplitudes of a whole beam to `amplitude · c_n` for a
    /// transverse profile expressed in this state's basis.
    pub fn set_coherent_profile(&self, beam: usize, profile: &ModalCoefficients, amplitude: C64) -> Result<Self> {
        self.require_same_basis(profile.basis())?;
        let mut out = self.clone();
        for (mode, c) in profile.coeffs().iter().enumerate() {
            out = out.set_coherent(beam, mode, amplitude * c)?;
        }
        Ok(out)
    }

    pub(crate) fn require_same_basis(&self, other: &Arc<ModeBasis>) -> Result<()> {
        if Arc::ptr_eq(&self.basis, other) || *self.basis == **other {
            Ok(())
        } else {
            Err(Error::BasisMismatch(
                "profile is expressed in a different mode basis".into(),
            ))
        }
    }

    /// Applies a symplectic map to mean and covariance.
    pub fn apply(&self, transform: &SymplecticTransform) -> Result<Self> {
        let s = transform.matrix();
        if s.nrows() != self.dim() {
            return Err(Error::State(format!(
                "transform `{}` has dimension {}, state has {}",
                transform.label(),
                s.nrows(),
                self.dim()
            )));
        }
        let mean = s * &self.mean;
        let cov = s * &self.cov * s.transpose();
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self {
            mean,
            cov,
            ..self.clone()
        })
    }

    fn embed_single_mode(
        &self,
        beam: usize,
        mode: usize,
        block: [[f64; 2]; 2],
        label: String,
    ) -> Result<SymplecticTransform> {
        let i = self.quadrature_index(beam, mode)?;
        let mut s = DMatrix::identity(self.dim(), self.dim());
        for r in 0..2 {
            for c in 0..2 {
                s[(i + r, i + c)] = block[r][c];
            }
        }
        SymplecticTransform::new(s, label)
    }

    /// Squeezer on one mode: `R(angle) diag(e^{-r}, e^{r}) R(angle)ᵀ`, so the
    /// quadrature `X_angle` is the squeezed one.
    pub fn squeezer(&self, beam: usize, mode: usize, r: f64, angle: f64) -> Result<SymplecticTransform> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidArgument(format!("squeezing r must be ≥ 0, got {r}")));
        }
        if r > MAX_SQUEEZING {
            return Err(Error::InvalidArgument(format!(
                "squeezing r = {r} exceeds the supported maximum {MAX_SQUEEZING}"
            )));
        }
        let (sn, cs) = angle.sin_cos();
        let (lo, hi) = ((-r).exp(), r.exp());
        let block = [
            [lo * cs * cs + hi * sn * sn, (lo - hi) * cs * sn],
            [(lo - hi) * cs * sn, lo * sn * sn + hi * cs * cs],
        ];
        self.embed_single_mode(beam, mode, block, format!("squeeze(beam {beam}, mode {mode}, r={r})"))
    }

    pub fn apply_squeezer(&self, beam: usize, mode: usize, r: f64, angle: f64) -> Result<Self> {
        self.apply(&self.squeezer(beam, mode, r, angle)?)
    }

    /// Phase shift `a -> e^{iφ} a` of one mode.
    pub fn phase_shifter(&self, beam: usize, mode: usize, phi: f64) -> Result<SymplecticTransform> {
        let (sn, cs) = phi.sin_cos();
        self.embed_single_mode(
            beam,
            mode,
            [[cs, -sn], [sn, cs]],
            format!("phase(beam {beam}, mode {mode}, φ={phi})"),
        )
    }

    pub fn apply_phase_shift(&self, beam: usize, mode: usize, phi: f64) -> Result<Self> {
        self.apply(&self.phase_shifter(beam, mode, phi)?)
    }

    /// Common phase shift of every mode of one beam (a path-length change).
    pub fn apply_beam_phase(&self, beam: usize, phi: f64) -> Result<Self> {
        let mut out = self.clone();
        for mode in 0..self.modes_per_beam() {
            out = out.apply_phase_shift(beam, mode, phi)?;
        }
        Ok(out)
    }

    /// The 50:50 beam splitter pairing same-index modes of the two beams:
    /// `out_0 = (in_0 + in_1)/√2`, `out_1 = (in_0 - in_1)/√2` per quadrature.
    pub fn beam_splitter_5050(&self) -> Result<SymplecticTransform> {
        if self.beams != 2 {
            return Err(Error::State("beam splitter needs a two-beam state".into()));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m2 = 2 * self.modes_per_beam();
        let mut s = DMatrix::zeros(self.dim(), self.dim());
        for k in 0..m2 {
            s[(k, k)] = h;
            s[(k, m2 + k)] = h;
            s[(m2 + k, k)] = h;
            s[(m2 + k, m2 + k)] = -h;
        }
        SymplecticTransform::new(s, "50:50 beam splitter")
    }

    pub fn apply_beam_splitter_5050(&self) -> Result<Self> {
        self.apply(&self.beam_splitter_5050()?)
    }

    /// Real symplectic image of a mode unitary `U` (`a' = U a`), applied to
    /// every beam.
    pub fn mode_transform(&self, unitary: &DMatrix<C64>) -> Result<SymplecticTransform> {
        let m = self.modes_per_beam();
        if unitary.nrows() != m || unitary.ncols() != m {
            return Err(Error::InvalidArgument(format!("mode unitary must be {m}×{m}")));
        }
        let deviation = (unitary.adjoint() * unitary - DMatrix::<C64>::identity(m, m))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        let mut s = DMatrix::zeros(self.dim(), self.dim());
        for beam in 0..self.beams {
            let off = 2 * beam * m;
            for j in 0..m {
                for k in 0..m {
                    let u = unitary[(j, k)];
                    s[(off + 2 * j, off + 2 * k)] = u.re;
                    s[(off + 2 * j, off + 2 * k + 1)] = -u.im;
                    s[(off + 2 * j + 1, off + 2 * k)] = u.im;
                    s[(off + 2 * j + 1, off + 2 * k + 1)] = u.re;
                }
            }
        }
        SymplecticTransform::new(s, "mode-basis change")
    }

    pub fn change_mode_basis(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        self.apply(&self.mode_transform(unitary)?)
    }

    fn weight_vector(&self, terms: &[QuadratureTerm]) -> Result<DVector<f64>> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("need at least one quadrature term".into()));
        }
        let mut g = DVector::zeros(self.dim());
        for t in terms {
            let i = self.quadrature_index(t.beam, t.mode)?;
            let (sn, cs) = t.angle.sin_cos();
            g[i] += t.weight * cs;
            g[i + 1] += t.weight * sn;
        }
        Ok(g)
    }

    /// Mean and variance of `X_φ = X⁺ cos φ + X⁻ sin φ`.
    pub fn quadrature_stats(&self, beam: usize, mode: usize, phi: f64) -> Result<(f64, f64)> {
        self.joint_moments(&[QuadratureTerm::new(beam, mode, phi, 1.0)])
    }

    /// Mean and variance of a weighted sum of quadratures.
    pub fn joint_moments(&self, terms: &[QuadratureTerm]) -> Result<(f64, f64)> {
        let g = self.weight_vector(terms)?;
        let mean = g.dot(&self.mean);
        let var = (g.transpose() * &self.cov * &g)[(0, 0)];
        Ok((mean, var))
    }

    pub fn joint_variance(&self, terms: &[QuadratureTerm]) -> Result<f64> {
        Ok(self.joint_moments(terms)?.1)
    }

    /// Covariance between two weighted quadrature sums.
    pub fn joint_covariance(&self, a: &[QuadratureTerm], b: &[QuadratureTerm]) -> Result<f64> {
        let ga = self.weight_vector(a)?;
        let gb = self.weight_vector(b)?;
        Ok((ga.transpose() * &self.cov * &gb)[(0, 0)])
    }

    /// Symplectic eigenvalues, ascending, one per mode.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let omega = symplectic_form(self.dim());
        let eig = SymmetricEigen::new(self.cov.clone());
        let sqrt_cov = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()))
            * eig.eigenvectors.transpose();
        // ν² are the eigenvalues of V^{1/2} Ω V Ωᵀ V^{1/2}, each doubled
        let inner = &sqrt_cov * &omega * &self.cov * omega.transpose() * &sqrt_cov;
        let inner = (&inner + inner.transpose()) * 0.5;
        let mut nu2: Vec<f64> = SymmetricEigen::new(inner).eigenvalues.iter().copied().collect();
        nu2.sort_by(|a, b| a.total_cmp(b));
        nu2.chunks(2).map(|pair| pair[0].max(0.0).sqrt()).collect()
    }

    /// Every symplectic eigenvalue ≥ 1 - 1e-9.
    pub fn is_physical(&self) -> bool {
        self.symplectic_eigenvalues().iter().all(|&nu| nu >= 1.0 - PHYSICAL_TOL)
    }

    pub fn cov_determinant(&self) -> f64 {
        self.cov.determinant()
    }
}

fn check_beams(beams: usize) -> Result<()> {
    if beams == 1 || beams == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "beam count must be 1 or 2, got {beams}"
        )))
    }
}

fn check_photon_scale(n: f64) -> Result<()> {
    if n.is_finite() && n > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "photon number must be positive, got {n}"
        )))
    }
}
