//! Multipoint point-interaction scatterers.
//!
//! The scattered field of `n` point scatterers at `y_j` with strength
//! parameters `α_j` is a superposition of outgoing Green functions,
//!
//! ```text
//! ψ⁺(x, k) = e^{ik·x} + Σ_j q_j(k) G⁺(x − y_j, |k|²),
//! ```
//!
//! with charges fixed by the symmetric system `A(|k|) q = b(k)`,
//! `b_j = −e^{ik·y_j}`. The diagonal of `A` is `α_j` plus the regular part of
//! `G⁺` at the origin with the sign flipped (d = 2, 3) or added (d = 1).

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Lu};
use crate::real::{cis, cplx, dot, imag_unit, lit, norm, real, Real};
use crate::space::{distance, sub, Dimension};
use crate::special::{
    green_plus_radial, green_plus_radial_derivative, green_regular_part, Wavenumber,
};

/// Minimum separation between two sites.
pub const MIN_SEPARATION: f64 = 1e-12;

/// Condition-number estimate above which `A(|k|)` is treated as singular.
pub fn resonance_condition_limit<T: Real>() -> T {
    lit::<T>(1e12).min((T::epsilon() * lit(1e3)).recip())
}

/// Strength parameter `α` of a point scatterer. `Infinite` is the inert
/// limit in which the site does not scatter at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Strength<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Strength<T> {
    pub fn is_active(&self) -> bool {
        matches!(self, Strength::Finite(_))
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Strength::Finite(a) => Some(a),
            Strength::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Site<T> {
    pub position: Vec<T>,
    pub alpha: Strength<T>,
}

impl<T: Real> Site<T> {
    pub fn new(position: Vec<T>, alpha: T) -> Self {
        Site {
            position,
            alpha: Strength::Finite(alpha),
        }
    }

    pub fn inert(position: Vec<T>) -> Self {
        Site {
            position,
            alpha: Strength::Infinite,
        }
    }
}

/// Immutable scatterer configuration: dimension plus sites with pairwise
/// distinct positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultipointScatterer<T> {
    dimension: Dimension,
    sites: Vec<Site<T>>,
}

impl<T: Real> MultipointScatterer<T> {
    pub fn new(dimension: Dimension, sites: Vec<Site<T>>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::NoSites);
        }
        for (i, s) in sites.iter().enumerate() {
            dimension.check_point(&s.position)?;
            let finite_alpha = match s.alpha {
                Strength::Finite(a) => a.is_finite(),
                Strength::Infinite => true,
            };
            if !finite_alpha || s.position.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(i));
            }
        }
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                let sep = distance(&sites[i].position, &sites[j].position);
                if sep <= lit(MIN_SEPARATION) {
                    return Err(Error::CoincidentSites {
                        first: i,
                        second: j,
                        separation: sep.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(MultipointScatterer { dimension, sites })
    }

    #[inline]
    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn sites(&self) -> &[Site<T>] {
        &self.sites
    }

    /// Indices of sites with finite `α`, in configuration order.
    pub fn active_indices(&self) -> Vec<usize> {
        self.sites
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alpha.is_active())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn n_active(&self) -> usize {
        self.sites.iter().filter(|s| s.alpha.is_active()).count()
    }

    /// The same configuration with inert sites removed. `None` if no site is
    /// active.
    pub fn without_inert(&self) -> Option<Self> {
        let sites: Vec<_> = self
            .sites
            .iter()
            .filter(|s| s.alpha.is_active())
            .cloned()
            .collect();
        if sites.is_empty() {
            None
        } else {
            Some(MultipointScatterer {
                dimension: self.dimension,
                sites,
            })
        }
    }

    /// Centroid of all site positions.
    pub fn centroid(&self) -> Vec<T> {
        let d = self.dimension.get();
        let n: T = lit(self.sites.len() as f64);
        (0..d)
            .map(|c| {
                self.sites
                    .iter()
                    .fold(T::zero(), |acc, s| acc + s.position[c])
                    / n
            })
            .collect()
    }

    /// `A(|k|)` restricted to active sites.
    pub fn assemble_matrix(&self, k: &Wavenumber<T>) -> Result<ComplexMatrix<T>> {
        let modulus = k.real_modulus()?;
        let active = self.active_indices();
        let n = active.len();
        let i = imag_unit::<T>();
        let four_pi = lit::<T>(4.0) * T::PI();
        let diag_shift = match self.dimension {
            Dimension::Three => -i * modulus / four_pi,
            Dimension::Two => -(cplx(-lit::<T>(2.0) * modulus.ln(), T::PI())) / four_pi,
            Dimension::One => (i * modulus * lit::<T>(2.0)).inv(),
        };
        let mut a = ComplexMatrix::zeros(n, n);
        for (r, &jr) in active.iter().enumerate() {
            let alpha = self.sites[jr].alpha.finite().expect("active site");
            a[(r, r)] = real(alpha) + diag_shift;
            for (c, &jc) in active.iter().enumerate().skip(r + 1) {
                let dist = distance(&self.sites[jr].position, &self.sites[jc].position);
                let g = green_plus_radial(self.dimension, dist, k)?;
                a[(r, c)] = g;
                a[(c, r)] = g;
            }
        }
        Ok(a)
    }

    /// Factors `A(|k|)` once for repeated charge solves at fixed energy.
    pub fn charge_system(&self, k: &Wavenumber<T>) -> Result<ChargeSystem<T>> {
        let modulus = k.real_modulus()?;
        let a = self.assemble_matrix(k)?;
        let active = self.active_indices();
        let modulus_f64 = modulus.to_f64().unwrap_or(f64::NAN);
        if active.is_empty() {
            return Ok(ChargeSystem {
                dimension: self.dimension,
                wavenumber: *k,
                positions: Vec::new(),
                active,
                lu: None,
                condition: T::one(),
            });
        }
        let lu = Lu::factor(&a).map_err(|e| match e {
            Error::SingularMatrix { .. } => Error::Resonance {
                modulus: modulus_f64,
                condition: f64::INFINITY,
            },
            other => other,
        })?;
        let condition = lu.condition_estimate()?;
        if !(condition <= resonance_condition_limit::<T>()) {
            return Err(Error::Resonance {
                modulus: modulus_f64,
                condition: condition.to_f64().unwrap_or(f64::INFINITY),
            });
        }
        Ok(ChargeSystem {
            dimension: self.dimension,
            wavenumber: *k,
            positions: active
                .iter()
                .map(|&j| self.sites[j].position.clone())
                .collect(),
            active,
            lu: Some(lu),
            condition,
        })
    }

    /// Charges `q(k)` for incident wave vector `k = modulus·direction`.
    pub fn solve_charges(&self, direction: &[T], modulus: T) -> Result<ChargeSolution<T>> {
        self.dimension.check_point(direction)?;
        let dn = norm(direction);
        if !(dn > T::zero()) {
            return Err(Error::InvalidArgument("zero incident direction".into()));
        }
        let unit: Vec<T> = direction.iter().map(|&x| x / dn).collect();
        let k = Wavenumber::from_modulus(modulus)?;
        let system = self.charge_system(&k)?;
        let kvec: Vec<T> = unit.iter().map(|&x| x * modulus).collect();
        let charges = system.charges(&kvec)?;
        Ok(ChargeSolution {
            k_direction: unit,
            k_modulus: k,
            charges,
            site_indices: system.active.clone(),
            condition_estimate: system.condition,
        })
    }

    fn shell_modulus(&self, k: &[T], l: &[T]) -> Result<T> {
        self.dimension.check_point(k)?;
        self.dimension.check_point(l)?;
        let (nk, nl) = (norm(k), norm(l));
        if !(nk > T::zero()) {
            return Err(Error::ZeroWavenumber);
        }
        if (nk - nl).abs() > lit::<T>(1e-12) * nk {
            return Err(Error::EnergyShellMismatch {
                k: nk.to_f64().unwrap_or(f64::NAN),
                l: nl.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(nk)
    }

    /// `f(k, l) = (2π)^{-d} Σ_j q_j(k) e^{-il·y_j}`.
    pub fn amplitude(&self, k: &[T], l: &[T]) -> Result<Complex<T>> {
        let modulus = self.shell_modulus(k, l)?;
        let system = self.charge_system(&Wavenumber::from_modulus(modulus)?)?;
        system.amplitude(k, l)
    }

    /// `f(k, l)` through the reciprocal route `(2π)^{-d} Σ_j q_j(−l) e^{ik·y_j}`.
    pub fn amplitude_reciprocal(&self, k: &[T], l: &[T]) -> Result<Complex<T>> {
        let modulus = self.shell_modulus(k, l)?;
        let system = self.charge_system(&Wavenumber::from_modulus(modulus)?)?;
        system.amplitude_reciprocal(k, l)
    }

    /// Far-field pattern `f⁺ = c(d, |k|)·f(k, l)`.
    pub fn far_field(&self, k: &[T], l: &[T]) -> Result<Complex<T>> {
        let modulus = self.shell_modulus(k, l)?;
        Ok(far_field_constant(self.dimension, modulus) * self.amplitude(k, l)?)
    }

    /// `ψ⁺(x, k)`.
    pub fn total_field(&self, x: &[T], k: &[T]) -> Result<Complex<T>> {
        self.dimension.check_point(x)?;
        self.dimension.check_point(k)?;
        let system = self.charge_system(&Wavenumber::from_modulus(norm(k))?)?;
        let q = system.charges(k)?;
        system.total_field(x, k, &q)
    }

    /// Coefficients `ψ_{j,−1}`, `ψ_{j,0}` of the solved field at site `j` and
    /// the residual of the local boundary condition there.
    pub fn local_coefficients(&self, k: &[T], site: usize) -> Result<LocalExpansion<T>> {
        self.dimension.check_point(k)?;
        let alpha = self
            .sites
            .get(site)
            .ok_or_else(|| Error::InvalidArgument(format!("no site {site}")))?
            .alpha
            .finite()
            .ok_or_else(|| Error::InvalidArgument(format!("site {site} is inert")))?;
        let wk = Wavenumber::from_modulus(norm(k))?;
        let system = self.charge_system(&wk)?;
        let q = system.charges(k)?;
        let slot = system
            .active
            .iter()
            .position(|&j| j == site)
            .expect("active site present in system");
        let y = &self.sites[site].position;
        let i = imag_unit::<T>();

        // incident wave plus the other sites' fields at y_j
        let mut smooth = cis(dot(k, y));
        for (r, &j) in system.active.iter().enumerate() {
            if r != slot {
                let dist = distance(y, &self.sites[j].position);
                smooth = smooth + q[r] * green_plus_radial(self.dimension, dist, &wk)?;
            }
        }
        let qj = q[slot];
        let regular = green_regular_part(self.dimension, &wk)?;
        let psi_0 = smooth + qj * regular;

        let (psi_minus1, lhs) = match self.dimension {
            Dimension::One => {
                // one-sided derivatives of ψ⁺ at y_j
                let modulus = wk.value().re;
                let mut left = i * k[0] * cis(k[0] * y[0]);
                let mut right = left;
                for (r, &j) in system.active.iter().enumerate() {
                    let yj = self.sites[j].position[0];
                    let half: T = lit(0.5);
                    if r == slot {
                        right = right + q[r] * half;
                        left = left - q[r] * half;
                    } else {
                        let dx = y[0] - yj;
                        let g = cis(modulus * dx.abs()) * half * dx.signum();
                        right = right + q[r] * g;
                        left = left + q[r] * g;
                    }
                }
                let jump = right - left;
                (jump, -jump * alpha)
            }
            Dimension::Two => {
                let psi_m1 = qj / T::TAU();
                let coeff = -T::TAU() * alpha - T::LN_2() + T::euler_gamma();
                (psi_m1, psi_m1 * coeff)
            }
            Dimension::Three => {
                let four_pi = lit::<T>(4.0) * T::PI();
                let psi_m1 = -qj / four_pi;
                (psi_m1, psi_m1 * four_pi * alpha)
            }
        };
        let scale = psi_minus1.norm().max(psi_0.norm()).max(T::one());
        Ok(LocalExpansion {
            site,
            psi_minus1,
            psi_0,
            residual: (lhs - psi_0).norm() / scale,
        })
    }
}

/// `c(d, |k|) = −πi (−2πi)^{(d−1)/2} |k|^{(d−3)/2}` with the branch
/// `√(−2πi) = √(2π) e^{−iπ/4}`.
pub fn far_field_constant<T: Real>(d: Dimension, modulus: T) -> Complex<T> {
    let i = imag_unit::<T>();
    let root = Complex::from_polar(T::TAU().sqrt(), -T::FRAC_PI_4());
    let power = match d {
        Dimension::One => real(T::one()),
        Dimension::Two => root,
        Dimension::Three => root * root,
    };
    let exponent = (lit::<T>(d.get() as f64) - lit(3.0)) / lit(2.0);
    -i * T::PI() * power * modulus.powf(exponent)
}

/// `(2π)^{-d}`
pub(crate) fn amplitude_prefactor<T: Real>(d: Dimension) -> T {
    T::TAU().powi(d.get() as i32).recip()
}

/// Factored charge system at one real energy.
#[derive(Debug, Clone)]
pub struct ChargeSystem<T> {
    dimension: Dimension,
    wavenumber: Wavenumber<T>,
    active: Vec<usize>,
    positions: Vec<Vec<T>>,
    lu: Option<Lu<T>>,
    condition: T,
}

impl<T: Real> ChargeSystem<T> {
    pub fn wavenumber(&self) -> Wavenumber<T> {
        self.wavenumber
    }

    pub fn modulus(&self) -> T {
        self.wavenumber.value().re
    }

    pub fn condition(&self) -> T {
        self.condition
    }

    pub fn active_indices(&self) -> &[usize] {
        &self.active
    }

    pub fn active_positions(&self) -> &[Vec<T>] {
        &self.positions
    }

    /// `b(k)` for the active sites.
    pub fn rhs(&self, k: &[T]) -> Vec<Complex<T>> {
        self.positions.iter().map(|y| -cis(dot(k, y))).collect()
    }

    /// `q(k)` for a wave vector on the energy shell.
    pub fn charges(&self, k: &[T]) -> Result<Vec<Complex<T>>> {
        self.dimension.check_point(k)?;
        match &self.lu {
            None => Ok(Vec::new()),
            Some(lu) => lu.solve_vec(&self.rhs(k)),
        }
    }

    pub fn amplitude(&self, k: &[T], l: &[T]) -> Result<Complex<T>> {
        let q = self.charges(k)?;
        let sum = q
            .iter()
            .zip(&self.positions)
            .fold(Complex::zero(), |acc, (&qj, y)| acc + qj * cis(-dot(l, y)));
        Ok(sum * amplitude_prefactor::<T>(self.dimension))
    }

    pub fn amplitude_reciprocal(&self, k: &[T], l: &[T]) -> Result<Complex<T>> {
        let minus_l: Vec<T> = l.iter().map(|&x| -x).collect();
        let q = self.charges(&minus_l)?;
        let sum = q
            .iter()
            .zip(&self.positions)
            .fold(Complex::zero(), |acc, (&qj, y)| acc + qj * cis(dot(k, y)));
        Ok(sum * amplitude_prefactor::<T>(self.dimension))
    }

    /// Scattered part `Σ_j q_j G⁺(x − y_j)` for given charges.
    pub fn scattered_field(&self, x: &[T], q: &[Complex<T>]) -> Result<Complex<T>> {
        let mut acc = Complex::zero();
        for (&qj, y) in q.iter().zip(&self.positions) {
            let r = distance(x, y);
            acc = acc + qj * green_plus_radial(self.dimension, r, &self.wavenumber)?;
        }
        Ok(acc)
    }

    /// Gradient of the scattered part.
    pub fn scattered_gradient(&self, x: &[T], q: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let mut grad = vec![Complex::zero(); self.dimension.get()];
        for (&qj, y) in q.iter().zip(&self.positions) {
            let delta = sub(x, y);
            let r = norm(&delta);
            let dg = green_plus_radial_derivative(self.dimension, r, &self.wavenumber)?;
            for (g, &dx) in grad.iter_mut().zip(&delta) {
                *g = *g + qj * dg * (dx / r);
            }
        }
        Ok(grad)
    }

    pub fn total_field(&self, x: &[T], k: &[T], q: &[Complex<T>]) -> Result<Complex<T>> {
        self.dimension.check_point(x)?;
        Ok(cis(dot(k, x)) + self.scattered_field(x, q)?)
    }
}

/// Charges of one solved incident wave.
#[derive(Debug, Clone)]
pub struct ChargeSolution<T> {
    pub k_direction: Vec<T>,
    pub k_modulus: Wavenumber<T>,
    /// One charge per active site, ordered as `site_indices`.
    pub charges: Vec<Complex<T>>,
    pub site_indices: Vec<usize>,
    pub condition_estimate: T,
}

/// Singular and constant coefficients of `ψ⁺` at a site.
///
/// In one dimension `psi_minus1` holds the jump `ψ'(y+0) − ψ'(y−0)` and
/// `psi_0` the value `ψ(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalExpansion<T> {
    pub site: usize,
    pub psi_minus1: Complex<T>,
    pub psi_0: Complex<T>,
    /// Boundary-condition residual relative to `max(|ψ₋₁|, |ψ₀|, 1)`.
    pub residual: T,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type C = Complex<f64>;

    fn single_1d(alpha: f64, y: f64) -> MultipointScatterer<f64> {
        MultipointScatterer::new(Dimension::One, vec![Site::new(vec![y], alpha)]).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert_eq!(
            MultipointScatterer::<f64>::new(Dimension::Two, vec![]),
            Err(Error::NoSites)
        );
        let dup = MultipointScatterer::new(
            Dimension::Two,
            vec![
                Site::new(vec![0.0, 1.0], 1.0),
                Site::new(vec![0.0, 1.0], 2.0),
            ],
        );
        assert!(matches!(
            dup,
            Err(Error::CoincidentSites {
                first: 0,
                second: 1,
                ..
            })
        ));
        let bad_len =
            MultipointScatterer::new(Dimension::Three, vec![Site::new(vec![0.0, 1.0], 1.0)]);
        assert!(matches!(bad_len, Err(Error::PointLength { .. })));
        let nan = MultipointScatterer::new(Dimension::One, vec![Site::new(vec![f64::NAN], 1.0)]);
        assert_eq!(nan, Err(Error::NonFinite(0)));
    }

    #[test]
    fn one_dimensional_matrix_and_charge() {
        let s = single_1d(1.0, 0.0);
        let k = Wavenumber::from_modulus(1.0).unwrap();
        let a = s.assemble_matrix(&k).unwrap();
        assert_eq!((a.rows(), a.cols()), (1, 1));
        assert_abs_diff_eq!((a[(0, 0)] - C::new(1.0, -0.5)).norm(), 0.0, epsilon = 1e-15);
        let sol = s.solve_charges(&[1.0], 1.0).unwrap();
        assert_abs_diff_eq!(
            (sol.charges[0] - C::new(-0.8, -0.4)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn three_dimensional_matrix() {
        let s = MultipointScatterer::new(
            Dimension::Three,
            vec![
                Site::new(vec![0.0, 0.0, 0.0], 0.0),
                Site::new(vec![1.0, 0.0, 0.0], 0.0),
            ],
        )
        .unwrap();
        let a = s
            .assemble_matrix(&Wavenumber::from_modulus(1.0).unwrap())
            .unwrap();
        let diag = C::new(0.0, -1.0 / (4.0 * std::f64::consts::PI));
        assert_abs_diff_eq!((a[(0, 0)] - diag).norm(), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(a[(0, 0)].im, -0.079_577_471_545_947_67, epsilon = 1e-15);
        let off = -C::new(0.0, 1.0).exp() / (4.0 * std::f64::consts::PI);
        assert_eq!(a[(0, 1)], a[(1, 0)]);
        assert_abs_diff_eq!((a[(0, 1)] - off).norm(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn all_inert_gives_empty_system_and_free_field() {
        let s = MultipointScatterer::new(
            Dimension::Two,
            vec![Site::inert(vec![0.0, 0.0]), Site::inert(vec![1.0, 0.0])],
        )
        .unwrap();
        let k = Wavenumber::from_modulus(2.0).unwrap();
        let a = s.assemble_matrix(&k).unwrap();
        assert_eq!((a.rows(), a.cols()), (0, 0));
        let sol = s.solve_charges(&[1.0, 0.0], 2.0).unwrap();
        assert!(sol.charges.is_empty());
        let f = s.amplitude(&[2.0, 0.0], &[0.0, 2.0]).unwrap();
        assert_eq!(f, C::zero());
        let x = [0.3, -0.7];
        let psi = s.total_field(&x, &[2.0, 0.0]).unwrap();
        assert_eq!(psi, cis(0.6));
    }

    #[test]
    fn d1_amplitude_is_sign_independent() {
        let s = single_1d(1.0, 0.0);
        let expect = C::new(-0.8, -0.4) / std::f64::consts::TAU;
        for &(k, l) in &[(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let f = s.amplitude(&[k], &[l]).unwrap();
            assert_abs_diff_eq!((f - expect).norm(), 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(expect.re, -0.127_324, epsilon = 1e-6);
        assert_abs_diff_eq!(expect.im, -0.063_662, epsilon = 1e-6);
    }

    #[test]
    fn amplitude_rejects_off_shell() {
        let s = single_1d(1.0, 0.0);
        assert!(matches!(
            s.amplitude(&[1.0], &[1.1]),
            Err(Error::EnergyShellMismatch { .. })
        ));
    }

    #[test]
    fn far_field_constants() {
        let c3 = far_field_constant(Dimension::Three, 1.0_f64);
        let pi = std::f64::consts::PI;
        assert_abs_diff_eq!(
            (c3 - C::new(-2.0 * pi * pi, 0.0)).norm(),
            0.0,
            epsilon = 1e-13
        );
        let c1 = far_field_constant(Dimension::One, 2.0_f64);
        assert_abs_diff_eq!((c1 - C::new(0.0, -pi / 2.0)).norm(), 0.0, epsilon = 1e-15);
        let c2 = far_field_constant(Dimension::Two, 4.0_f64);
        let expect = -C::new(0.0, pi) * C::from_polar((2.0 * pi).sqrt(), -pi / 4.0) * 0.5;
        assert_abs_diff_eq!((c2 - expect).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn d1_total_field_worked_value() {
        let s = single_1d(1.0, 0.0);
        let psi = s.total_field(&[1.0], &[1.0]).unwrap();
        let g = C::new(1.0_f64.sin() / 2.0, -(1.0_f64.cos()) / 2.0);
        let expect = cis(1.0) + C::new(-0.8, -0.4) * g;
        assert_abs_diff_eq!((psi - expect).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn total_field_rejects_site() {
        let s = single_1d(1.0, 0.5);
        assert_eq!(s.total_field(&[0.5], &[1.0]), Err(Error::SingularPoint));
    }

    #[test]
    fn d1_jump_condition() {
        let s = MultipointScatterer::new(
            Dimension::One,
            vec![Site::new(vec![-0.4], 0.7), Site::new(vec![1.1], -1.3)],
        )
        .unwrap();
        for j in 0..2 {
            let loc = s.local_coefficients(&[1.7], j).unwrap();
            let q = s.solve_charges(&[1.0], 1.7).unwrap().charges[j];
            assert_abs_diff_eq!((loc.psi_minus1 - q).norm(), 0.0, epsilon = 1e-14);
            assert!(loc.residual <= 1e-13, "{}", loc.residual);
        }
    }

    /// Extracts ψ_{j,0} from the field itself, independently of the
    /// regular-part constants used by `local_coefficients`.
    #[test]
    fn constant_term_matches_field_limit() {
        let s3 = MultipointScatterer::new(
            Dimension::Three,
            vec![
                Site::new(vec![0.1, 0.0, -0.2], 0.3),
                Site::new(vec![-0.5, 0.4, 0.2], -0.6),
            ],
        )
        .unwrap();
        let k = [0.0, 1.2, 0.5];
        let loc = s3.local_coefficients(&k, 0).unwrap();
        let y = &s3.sites()[0].position;
        // average over ±e cancels odd terms; the remaining O(ρ) term of the
        // self field is removed by Richardson extrapolation
        let mean = |rho: f64| {
            let mut acc = C::zero();
            for e in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
                for sgn in [1.0, -1.0] {
                    let x: Vec<f64> = y.iter().zip(e).map(|(&a, b)| a + sgn * rho * b).collect();
                    acc += s3.total_field(&x, &k).unwrap() - loc.psi_minus1 / rho;
                }
            }
            acc / 6.0
        };
        let limit = mean(1e-4) * 2.0 - mean(2e-4);
        assert!((limit - loc.psi_0).norm() <= 1e-8 * loc.psi_0.norm().max(1.0));

        let s2 = MultipointScatterer::new(
            Dimension::Two,
            vec![
                Site::new(vec![0.1, 0.0], 0.3),
                Site::new(vec![-0.5, 0.4], -0.6),
            ],
        )
        .unwrap();
        let k = [1.2, 0.5];
        let loc = s2.local_coefficients(&k, 1).unwrap();
        let rho = 1e-5;
        let y = &s2.sites()[1].position;
        let mut acc = C::zero();
        for e in [[1.0, 0.0], [0.0, 1.0]] {
            for sgn in [1.0, -1.0] {
                let x: Vec<f64> = y.iter().zip(e).map(|(&a, b)| a + sgn * rho * b).collect();
                acc += s2.total_field(&x, &k).unwrap() - loc.psi_minus1 * rho.ln();
            }
        }
        let limit = acc / 4.0;
        assert!((limit - loc.psi_0).norm() <= 1e-7 * loc.psi_0.norm().max(1.0));
    }

    #[test]
    fn resonance_is_reported() {
        // α = 0 at both ends of an interval of length π: Dirichlet mode sin(x) at |k| = 1
        let s = MultipointScatterer::new(
            Dimension::One,
            vec![
                Site::new(vec![0.0], 0.0),
                Site::new(vec![std::f64::consts::PI], 0.0),
            ],
        )
        .unwrap();
        let err = s.solve_charges(&[1.0], 1.0).unwrap_err();
        match err {
            Error::Resonance { modulus, .. } => assert_abs_diff_eq!(modulus, 1.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(s.solve_charges(&[1.0], 1.3).is_ok());
    }

    #[test]
    fn inert_local_coefficients_rejected() {
        let s = MultipointScatterer::new(
            Dimension::One,
            vec![Site::new(vec![0.0], 1.0), Site::inert(vec![1.0])],
        )
        .unwrap();
        assert!(s.local_coefficients(&[1.0], 1).is_err());
        assert!(s.local_coefficients(&[1.0], 7).is_err());
    }

    #[test]
    fn d2_single_site_at_origin_is_direction_independent() {
        let s =
            MultipointScatterer::new(Dimension::Two, vec![Site::new(vec![0.0, 0.0], 0.4)]).unwrap();
        let a = s.solve_charges(&[1.0, 0.0], 1.5).unwrap().charges[0];
        let b = s.solve_charges(&[-0.3, 0.8], 1.5).unwrap().charges[0];
        assert_eq!(a, b);
    }
}
