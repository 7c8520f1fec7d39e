//! Dense discretisation of the fixed-energy scattering operator
//!
//! ```text
//! (S u)(θ) = u(θ) − iπ|k|^{d−2} ∫ f(|k|θ', |k|θ) u(θ') dθ'
//! ```
//!
//! on a [`QuadratureRule`]. Rows index the output direction `θ_m`, columns
//! the integration node `θ'_{m'}` with its weight folded in.
//!
//! The kernel is assembled through the reciprocal form
//! `f(|k|θ', |k|θ) = (2π)^{-d} Σ_j q_j(−|k|θ) e^{i|k|θ'·y_j}`, so that
//! `S − I = c·Q·W` with `Q` the `M × n` table of charges `q_j(−|k|θ_m)` and
//! `W` the `n × M` weighted moment matrix. In particular `rank(S − I) ≤ n`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, svd, ComplexMatrix};
use crate::quadrature::QuadratureRule;
use crate::real::{cis, dot, imag_unit, Real};
use crate::scatterer::{amplitude_prefactor, ChargeSystem, MultipointScatterer};
use crate::space::scale;
use crate::special::Wavenumber;
use crate::tev_strong::{moment_matrix, MomentMatrix};

#[derive(Debug, Clone)]
pub struct SMatrix<T> {
    rule: QuadratureRule<T>,
    energy: T,
    modulus: T,
    entries: ComplexMatrix<T>,
    defect: ComplexMatrix<T>,
    charge_table: ComplexMatrix<T>,
    moments: MomentMatrix<T>,
    coupling: Complex<T>,
}

pub(crate) fn check_rule<T: Real>(
    s: &MultipointScatterer<T>,
    rule: &QuadratureRule<T>,
) -> Result<()> {
    if rule.dimension() != s.dimension() {
        return Err(Error::Shape(format!(
            "quadrature rule on S^{} for a scatterer in dimension {}",
            rule.dimension().get() - 1,
            s.dimension()
        )));
    }
    Ok(())
}

pub(crate) fn real_energy<T: Real>(energy: T) -> Result<Wavenumber<T>> {
    Wavenumber::from_real_energy(energy)
}

/// `−iπ|k|^{d−2}(2π)^{−d}`, the factor in front of `Σ_j q_j e^{...}`.
fn coupling<T: Real>(s: &MultipointScatterer<T>, modulus: T) -> Complex<T> {
    let d = s.dimension().get() as i32;
    -imag_unit::<T>() * T::PI() * modulus.powi(d - 2) * amplitude_prefactor::<T>(s.dimension())
}

/// `M × n` table of `q_j(−|k|θ_m)`.
pub(crate) fn reversed_charge_table<T: Real>(
    system: &ChargeSystem<T>,
    rule: &QuadratureRule<T>,
) -> Result<ComplexMatrix<T>> {
    let n = system.active_indices().len();
    let modulus = system.modulus();
    let mut table = ComplexMatrix::zeros(rule.len(), n);
    for (m, theta) in rule.nodes().iter().enumerate() {
        let q = system.charges(&scale(theta, -modulus))?;
        for (j, v) in q.into_iter().enumerate() {
            table[(m, j)] = v;
        }
    }
    Ok(table)
}

/// Builds the discretised scattering operator at energy `E > 0`.
pub fn build_s_matrix<T: Real>(
    s: &MultipointScatterer<T>,
    energy: T,
    rule: &QuadratureRule<T>,
) -> Result<SMatrix<T>> {
    check_rule(s, rule)?;
    let k = real_energy(energy)?;
    let modulus = k.value().re;
    let system = s.charge_system(&k)?;
    let charge_table = reversed_charge_table(&system, rule)?;
    let moments = moment_matrix(s, energy, rule)?;
    let c = coupling(s, modulus);
    let defect = charge_table.matmul(moments.matrix())?.scale(c);
    let mut entries = defect.clone();
    for m in 0..rule.len() {
        entries[(m, m)] = entries[(m, m)] + T::one();
    }
    Ok(SMatrix {
        rule: rule.clone(),
        energy,
        modulus,
        entries,
        defect,
        charge_table,
        moments,
        coupling: c,
    })
}

/// The same discretisation with the amplitude arguments swapped,
/// `δ_{mm'} − iπ|k|^{d−2} f(|k|θ_m, |k|θ_{m'}) w_{m'}`, evaluated entry by
/// entry through the direct amplitude formula. Only used to pin the kernel
/// orientation.
pub fn build_s_matrix_transposed_kernel<T: Real>(
    s: &MultipointScatterer<T>,
    energy: T,
    rule: &QuadratureRule<T>,
) -> Result<ComplexMatrix<T>> {
    check_rule(s, rule)?;
    let k = real_energy(energy)?;
    let modulus = k.value().re;
    let system = s.charge_system(&k)?;
    let c = coupling(s, modulus) / amplitude_prefactor::<T>(s.dimension());
    let m_count = rule.len();
    let mut out = ComplexMatrix::identity(m_count);
    for m in 0..m_count {
        let km = scale(&rule.nodes()[m], modulus);
        for mp in 0..m_count {
            let lm = scale(&rule.nodes()[mp], modulus);
            let f = system.amplitude(&km, &lm)?;
            out[(m, mp)] = out[(m, mp)] + c * f * rule.weights()[mp];
        }
    }
    Ok(out)
}

impl<T: Real> SMatrix<T> {
    pub fn rule(&self) -> &QuadratureRule<T> {
        &self.rule
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    pub fn modulus(&self) -> T {
        self.modulus
    }

    pub fn entries(&self) -> &ComplexMatrix<T> {
        &self.entries
    }

    /// `S − I`, formed without the cancellation of subtracting the identity.
    pub fn defect(&self) -> &ComplexMatrix<T> {
        &self.defect
    }

    pub fn moments(&self) -> &MomentMatrix<T> {
        &self.moments
    }

    /// Kernel samples `f(|k|θ_{m'}, |k|θ_m)` (row `m`, column `m'`), weights
    /// removed.
    pub fn kernel(&self) -> ComplexMatrix<T> {
        let pref = amplitude_prefactor::<T>(self.rule.dimension());
        let raw = self.defect.scale(self.coupling.inv());
        let w = self.rule.weights();
        ComplexMatrix::from_fn(raw.rows(), raw.cols(), |m, mp| raw[(m, mp)] * pref / w[mp])
    }

    pub fn apply(&self, u: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.entries.mul_vec(u)
    }

    /// `‖S u − u‖₂`
    pub fn fixed_point_residual(&self, u: &[Complex<T>]) -> Result<T> {
        let su = self.apply(u)?;
        Ok(crate::real::norm2(
            &su.iter().zip(u).map(|(&a, &b)| a - b).collect::<Vec<_>>(),
        ))
    }

    /// Numerical rank of `S − I` at relative threshold `tol`, with its
    /// singular values.
    pub fn defect_rank(&self, tol: T) -> (usize, Vec<T>) {
        let dec = svd(&self.defect);
        (dec.rank(tol), dec.singular_values)
    }

    /// Eigenvalues of `S` other than the trivial `1`s: `1 + λ` for the
    /// eigenvalues `λ` of the `n × n` matrix `c·W·Q`.
    pub fn nontrivial_eigenvalues(&self) -> Result<Vec<Complex<T>>> {
        if self.charge_table.cols() == 0 {
            return Ok(Vec::new());
        }
        let small = self
            .moments
            .matrix()
            .matmul(&self.charge_table)?
            .scale(self.coupling);
        Ok(eigenvalues(&small)?
            .into_iter()
            .map(|l| l + T::one())
            .collect())
    }
}

/// Herglotz-type superposition `Σ_m e^{i|k|θ_m·x} w_m u_m`.
pub fn herglotz<T: Real>(
    rule: &QuadratureRule<T>,
    modulus: T,
    u: &[Complex<T>],
    x: &[T],
) -> Complex<T> {
    rule.nodes()
        .iter()
        .zip(rule.weights())
        .zip(u)
        .fold(Complex::zero(), |acc, ((theta, &w), &um)| {
            acc + cis(modulus * dot(theta, x)) * um * w
        })
}

/// Gradient of [`herglotz`].
pub fn herglotz_gradient<T: Real>(
    rule: &QuadratureRule<T>,
    modulus: T,
    u: &[Complex<T>],
    x: &[T],
) -> Vec<Complex<T>> {
    let i = imag_unit::<T>();
    let mut g = vec![Complex::zero(); x.len()];
    for ((theta, &w), &um) in rule.nodes().iter().zip(rule.weights()).zip(u) {
        let base = i * cis(modulus * dot(theta, x)) * um * w * modulus;
        for (gc, &t) in g.iter_mut().zip(theta) {
            *gc = *gc + base * t;
        }
    }
    g
}
