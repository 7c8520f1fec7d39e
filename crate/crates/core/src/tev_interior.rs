//! Interior transmission eigenfunctions at arbitrary complex energy.
//!
//! A smooth solution `Φ` of `−ΔΦ = EΦ` that vanishes at every active site
//! also solves the perturbed problem: its singular coefficient is zero and
//! the site conditions reduce to `0 = Φ(y_j)`. With a family of `N`
//! independent solutions the `n` point constraints
//!
//! ```text
//! Σ_l z_l φ_l(y_j) = 0
//! ```
//!
//! leave at least `N − n` independent eigenfunctions, and `N` is arbitrary.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{null_space, svd, ComplexMatrix};
use crate::quadrature::QuadratureRule;
use crate::real::{cis, cplx, dot, imag_unit, lit, norm, norm1, real, Real};
use crate::s_operator::{check_rule, real_energy};
use crate::scatterer::{MultipointScatterer, Strength};
use crate::space::{scale, Dimension};
use crate::special::{plane_wave, Wavenumber};

/// Default finite-difference step of [`lemma1_verify`].
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Site-value tolerance, relative to `‖z‖₁`.
pub const SITE_TOL: f64 = 1e-12;
/// Admissible deviation of the step-halving ratio from 4.
pub const FD_RATIO_SLACK: f64 = 0.2;
/// Interior points at which the Helmholtz residual is sampled.
pub const FD_POINT_COUNT: usize = 8;
pub const FD_SEED: u64 = 42;
/// Boundary samples on a circle or sphere.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 64;

/// Ball `D` enclosing the scatterer.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Real> Ball<T> {
    /// Centroid of the sites, radius `2·max_j|y_j| + 1`.
    pub fn enclosing(s: &MultipointScatterer<T>) -> Self {
        let reach = s
            .sites()
            .iter()
            .map(|site| norm(&site.position))
            .fold(T::zero(), T::max);
        Ball {
            center: s.centroid(),
            radius: lit::<T>(2.0) * reach + T::one(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    /// Boundary points with their outward normals: the two end points in
    /// d = 1, equispaced on the circle, Fibonacci points on the sphere.
    pub fn boundary(&self, count: usize) -> Vec<(Vec<T>, Vec<T>)> {
        let normals = match self.dimension() {
            1 => vec![vec![T::one()], vec![-T::one()]],
            2 => (0..count)
                .map(|i| {
                    let (s, c) = (T::TAU() * lit(i as f64) / lit(count as f64)).sin_cos();
                    vec![c, s]
                })
                .collect(),
            _ => fibonacci_sphere(count),
        };
        normals
            .into_iter()
            .map(|nu| {
                let x = self
                    .center
                    .iter()
                    .zip(&nu)
                    .map(|(&c, &v)| c + v * self.radius)
                    .collect();
                (x, nu)
            })
            .collect()
    }

    /// Seeded points distributed uniformly in the ball.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<T>> {
        let d = self.dimension();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if v.iter().map(|a| a * a).sum::<f64>() > 1.0 {
                continue;
            }
            out.push(
                v.iter()
                    .zip(&self.center)
                    .map(|(&a, &c)| c + lit::<T>(a) * self.radius)
                    .collect(),
            );
        }
        out
    }
}

/// `count` nearly uniform unit vectors on the sphere (golden-angle spiral).
pub fn fibonacci_sphere<T: Real>(count: usize) -> Vec<Vec<T>> {
    let golden = T::PI() * (lit::<T>(3.0) - lit::<T>(5.0).sqrt());
    let n: T = lit(count as f64);
    (0..count)
        .map(|i| {
            let fi: T = lit(i as f64);
            let z = T::one() - (lit::<T>(2.0) * fi + T::one()) / n;
            let rho = (T::one() - z * z).max(T::zero()).sqrt();
            let (s, c) = (golden * fi).sin_cos();
            vec![rho * c, rho * s, z]
        })
        .collect()
}

/// Harmonic polynomial `[x_d·] Re/Im (x₁ + i x₂)^degree`. In one dimension
/// only `1` and `x` exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicPolynomial {
    pub degree: usize,
    pub imaginary: bool,
    /// Multiply by the last coordinate (d = 3 only).
    pub times_last: bool,
}

impl HarmonicPolynomial {
    fn sequence(d: Dimension, count: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(count);
        let mut degree = 0;
        while out.len() < count {
            let parts: &[bool] = if degree == 0 {
                &[false]
            } else {
                &[false, true]
            };
            let lifts: &[bool] = if d == Dimension::Three {
                &[false, true]
            } else {
                &[false]
            };
            for &times_last in lifts {
                for &imaginary in parts {
                    out.push(HarmonicPolynomial {
                        degree,
                        imaginary,
                        times_last,
                    });
                }
            }
            degree += 1;
        }
        out.truncate(count);
        out
    }

    fn power<T: Real>(x: &[T], n: usize) -> Complex<T> {
        let w = if x.len() == 1 {
            real(x[0])
        } else {
            cplx(x[0], x[1])
        };
        if n == 0 {
            real(T::one())
        } else {
            w.powu(n as u32)
        }
    }

    fn part<T: Real>(&self, w: Complex<T>) -> T {
        if self.imaginary {
            w.im
        } else {
            w.re
        }
    }

    fn value<T: Real>(&self, x: &[T]) -> T {
        let p = self.part(Self::power(x, self.degree));
        if self.times_last {
            p * x[x.len() - 1]
        } else {
            p
        }
    }

    fn gradient<T: Real>(&self, x: &[T]) -> Vec<T> {
        let n = self.degree;
        // ∂₁wⁿ = n wⁿ⁻¹, ∂₂wⁿ = i n wⁿ⁻¹
        let dw = if n == 0 {
            Complex::zero()
        } else {
            Self::power(x, n - 1) * lit::<T>(n as f64)
        };
        let mut g = vec![T::zero(); x.len()];
        g[0] = self.part(dw);
        if x.len() >= 2 {
            g[1] = self.part(dw * imag_unit::<T>());
        }
        if self.times_last {
            let z = x[x.len() - 1];
            for gi in g.iter_mut() {
                *gi = *gi * z;
            }
            g[x.len() - 1] = self.part(Self::power(x, n));
        }
        g
    }
}

/// Members of a solution family of `−Δφ = Eφ`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyMembers<T> {
    /// Directions `θ_l`; member `l` is `e^{iκθ_l·x}`.
    PlaneWaves(Vec<Vec<T>>),
    /// Used at `E = 0`, where plane waves collapse to constants.
    Harmonic(Vec<HarmonicPolynomial>),
}

/// `N` independent smooth solutions of `−Δφ = Eφ` on all of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveFamily<T> {
    dimension: Dimension,
    energy: Complex<T>,
    kappa: Wavenumber<T>,
    members: FamilyMembers<T>,
}

/// Equidistributed plane waves: roots of unity in d = 2, Fibonacci points in
/// d = 3, `{+1, −1}` in d = 1. At `E = 0` harmonic polynomials are used.
pub fn plane_wave_family<T: Real>(
    energy: Complex<T>,
    count: usize,
    d: Dimension,
) -> Result<PlaneWaveFamily<T>> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "plane-wave family needs at least one member".into(),
        ));
    }
    if d == Dimension::One && count > 2 {
        return Err(Error::InvalidArgument(format!(
            "only two independent solutions exist in dimension 1, requested {count}"
        )));
    }
    if !(energy.re.is_finite() && energy.im.is_finite()) {
        return Err(Error::NonFinite(0));
    }
    let kappa = Wavenumber::from_energy(energy);
    let members = if energy.is_zero() {
        FamilyMembers::Harmonic(HarmonicPolynomial::sequence(d, count))
    } else {
        FamilyMembers::PlaneWaves(match d {
            Dimension::One => [vec![T::one()], vec![-T::one()]][..count].to_vec(),
            Dimension::Two => (0..count)
                .map(|l| {
                    let (s, c) = (T::TAU() * lit(l as f64) / lit(count as f64)).sin_cos();
                    vec![c, s]
                })
                .collect(),
            Dimension::Three => fibonacci_sphere(count),
        })
    };
    Ok(PlaneWaveFamily {
        dimension: d,
        energy,
        kappa,
        members,
    })
}

impl<T: Real> PlaneWaveFamily<T> {
    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn energy(&self) -> Complex<T> {
        self.energy
    }

    pub fn kappa(&self) -> Wavenumber<T> {
        self.kappa
    }

    pub fn members(&self) -> &FamilyMembers<T> {
        &self.members
    }

    pub fn len(&self) -> usize {
        match &self.members {
            FamilyMembers::PlaneWaves(d) => d.len(),
            FamilyMembers::Harmonic(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, l: usize, x: &[T]) -> Complex<T> {
        match &self.members {
            FamilyMembers::PlaneWaves(d) => plane_wave(self.kappa.value(), &d[l], x),
            FamilyMembers::Harmonic(h) => real(h[l].value(x)),
        }
    }

    pub fn gradient(&self, l: usize, x: &[T]) -> Vec<Complex<T>> {
        match &self.members {
            FamilyMembers::PlaneWaves(d) => {
                let f = imag_unit::<T>()
                    * self.kappa.value()
                    * plane_wave(self.kappa.value(), &d[l], x);
                d[l].iter().map(|&t| f * t).collect()
            }
            FamilyMembers::Harmonic(h) => h[l].gradient(x).into_iter().map(real).collect(),
        }
    }

    /// Analytic `Δφ_l`.
    pub fn laplacian(&self, l: usize, x: &[T]) -> Complex<T> {
        match &self.members {
            FamilyMembers::PlaneWaves(d) => {
                let k = self.kappa.value();
                -(k * k) * dot(&d[l], &d[l]) * plane_wave(k, &d[l], x)
            }
            FamilyMembers::Harmonic(_) => Complex::zero(),
        }
    }

    /// `n × N` matrix `[φ_l(y_j)]` over the given points.
    pub fn evaluation_matrix(&self, points: &[Vec<T>]) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(points.len(), self.len(), |j, l| self.value(l, &points[j]))
    }
}

/// `Φ = Σ_l z_l φ_l` on the ball `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorEigenfunction<T> {
    pub coefficients: Vec<Complex<T>>,
    pub family: PlaneWaveFamily<T>,
    pub domain: Ball<T>,
}

impl<T: Real> InteriorEigenfunction<T> {
    pub fn energy(&self) -> Complex<T> {
        self.family.energy
    }

    pub fn z_norm1(&self) -> T {
        norm1(&self.coefficients)
    }

    pub fn value(&self, x: &[T]) -> Complex<T> {
        self.coefficients
            .iter()
            .enumerate()
            .fold(Complex::zero(), |acc, (l, &z)| {
                acc + z * self.family.value(l, x)
            })
    }

    pub fn gradient(&self, x: &[T]) -> Vec<Complex<T>> {
        let mut g = vec![Complex::zero(); x.len()];
        for (l, &z) in self.coefficients.iter().enumerate() {
            for (gi, v) in g.iter_mut().zip(self.family.gradient(l, x)) {
                *gi = *gi + z * v;
            }
        }
        g
    }

    pub fn laplacian(&self, x: &[T]) -> Complex<T> {
        self.coefficients
            .iter()
            .enumerate()
            .fold(Complex::zero(), |acc, (l, &z)| {
                acc + z * self.family.laplacian(l, x)
            })
    }

    /// `Σ_l |z_l||φ_l(x)|`, the cancellation-free size of `Φ(x)`.
    pub fn magnitude(&self, x: &[T]) -> T {
        self.coefficients
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (l, z)| {
                acc + z.norm() * self.family.value(l, x).norm()
            })
    }

    /// Second-order central-difference Laplacian, three points per axis.
    pub fn fd_laplacian(&self, x: &[T], h: T) -> Complex<T> {
        let centre = self.value(x) * lit::<T>(2.0);
        let mut acc = Complex::zero();
        let mut p = x.to_vec();
        for i in 0..x.len() {
            p[i] = x[i] + h;
            let fwd = self.value(&p);
            p[i] = x[i] - h;
            let bwd = self.value(&p);
            p[i] = x[i];
            acc = acc + (fwd + bwd - centre);
        }
        acc / (h * h)
    }
}

/// Orthonormal basis of `{z : Σ_l z_l φ_l(y_j) = 0 for active j}`.
pub fn interior_eigenfunctions<T: Real>(
    s: &MultipointScatterer<T>,
    family: &PlaneWaveFamily<T>,
    tol: T,
) -> Result<Vec<InteriorEigenfunction<T>>> {
    if family.dimension != s.dimension() {
        return Err(Error::Shape(format!(
            "family in dimension {} for a scatterer in dimension {}",
            family.dimension,
            s.dimension()
        )));
    }
    let n = s.n_active();
    if family.len() <= n {
        return Err(Error::InvalidArgument(format!(
            "family of {} members cannot beat {n} active site constraints",
            family.len()
        )));
    }
    let domain = Ball::enclosing(s);
    let wrap = |coefficients| InteriorEigenfunction {
        coefficients,
        family: family.clone(),
        domain: domain.clone(),
    };
    if n == 0 {
        let n_fam = family.len();
        return Ok((0..n_fam)
            .map(|l| {
                let mut z = vec![Complex::zero(); n_fam];
                z[l] = real(T::one());
                wrap(z)
            })
            .collect());
    }
    let sites: Vec<Vec<T>> = s
        .active_indices()
        .into_iter()
        .map(|j| s.sites()[j].position.clone())
        .collect();
    let ns = null_space(&family.evaluation_matrix(&sites), tol)?;
    Ok(ns.basis.into_iter().map(wrap).collect())
}

/// `Φ(x) = sin(κ(x − y₁))` on the line, written in the two-member plane-wave
/// family; at `E = 0` the linear function `x − y₁`.
pub fn d1_sine_witness<T: Real>(
    s: &MultipointScatterer<T>,
    energy: Complex<T>,
) -> Result<InteriorEigenfunction<T>> {
    if s.dimension() != Dimension::One || s.sites().len() != 1 {
        return Err(Error::InvalidArgument(
            "sine witness needs a single site in dimension 1".into(),
        ));
    }
    let family = plane_wave_family(energy, 2, Dimension::One)?;
    let y = s.sites()[0].position[0];
    let coefficients = if energy.is_zero() {
        vec![real(-y), real(T::one())]
    } else {
        // sin(κ(x−y)) = (e^{iκx}e^{−iκy} − e^{−iκx}e^{iκy}) / 2i
        let k = family.kappa.value();
        let i = imag_unit::<T>();
        let two_i = i * lit::<T>(2.0);
        vec![(-i * k * y).exp() / two_i, -(i * k * y).exp() / two_i]
    };
    Ok(InteriorEigenfunction {
        coefficients,
        family,
        domain: Ball::enclosing(s),
    })
}

/// Site condition of the perturbed problem evaluated on a smooth `Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteCondition<T> {
    pub site: usize,
    /// Singular coefficient; in d = 1 the derivative jump. Zero for smooth `Φ`.
    pub psi_minus1: Complex<T>,
    /// Regular coefficient `Φ(y_j)`.
    pub psi_0: Complex<T>,
    /// Left-hand side of the site condition, built from `psi_minus1`.
    pub lhs: Complex<T>,
    /// Right-hand side, `psi_0`.
    pub rhs: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report<T> {
    pub energy: Complex<T>,
    pub z_norm1: T,
    pub site_values: Vec<Complex<T>>,
    pub max_site_value: T,
    pub step: T,
    pub fd_points: Vec<Vec<T>>,
    /// `max_x |−Δ_hΦ − EΦ|` at steps `h` and `2h`.
    pub fd_residual: T,
    pub fd_residual_double: T,
    /// `fd_residual_double / fd_residual`, 4 for a second-order stencil.
    pub fd_ratio: T,
    /// Rounding level of the finite-difference residual at step `h`.
    pub fd_roundoff_floor: T,
    /// `max_x |−ΔΦ − EΦ|` with the analytic Laplacian.
    pub analytic_residual: T,
    /// `max_x Σ_l |z_l||φ_l(x)|` over the residual points.
    pub scale: T,
    pub site_conditions: Vec<SiteCondition<T>>,
    pub sites_ok: bool,
    pub fd_ok: bool,
    pub analytic_ok: bool,
    pub conditions_ok: bool,
    pub passed: bool,
}

/// Checks the hypothesis `Φ(y_j) = 0` and the conclusion (Helmholtz equation
/// away from the sites, site conditions at the sites).
pub fn lemma1_verify<T: Real>(
    s: &MultipointScatterer<T>,
    phi: &InteriorEigenfunction<T>,
    h: T,
) -> Result<Lemma1Report<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidArgument(
            "finite-difference step must be positive".into(),
        ));
    }
    if phi.family.dimension != s.dimension() {
        return Err(Error::Shape(
            "eigenfunction and scatterer dimensions differ".into(),
        ));
    }
    let energy = phi.energy();
    let z_norm1 = phi.z_norm1();
    let site_tol = lit::<T>(SITE_TOL) * z_norm1;
    let active = s.active_indices();
    let site_values: Vec<Complex<T>> = active
        .iter()
        .map(|&j| phi.value(&s.sites()[j].position))
        .collect();
    let max_site_value = site_values.iter().fold(T::zero(), |a, v| a.max(v.norm()));

    let fd_points = phi.domain.sample(FD_POINT_COUNT, FD_SEED);
    let double = h * lit(2.0);
    let (mut fd, mut fd_double, mut analytic, mut scale) =
        (T::zero(), T::zero(), T::zero(), T::zero());
    for x in &fd_points {
        let v = phi.value(x);
        fd = fd.max((-phi.fd_laplacian(x, h) - v * energy).norm());
        fd_double = fd_double.max((-phi.fd_laplacian(x, double) - v * energy).norm());
        analytic = analytic.max((-phi.laplacian(x) - v * energy).norm());
        scale = scale.max(phi.magnitude(x));
    }
    let d: T = lit(s.dimension().get() as f64);
    let kr =
        T::one() + phi.family.kappa.value().norm() * (phi.domain.radius + norm(&phi.domain.center));
    let floor = d * T::epsilon() * scale * kr / (h * h);
    let fd_ratio = fd_double / fd;
    let fd_ok = (fd <= lit::<T>(10.0) * floor)
        || (fd_ratio - lit(4.0)).abs() <= lit::<T>(4.0 * FD_RATIO_SLACK);
    let analytic_ok = analytic <= lit::<T>(1e-12) * scale * (T::one() + energy.norm());

    let site_conditions: Vec<SiteCondition<T>> = active
        .iter()
        .zip(&site_values)
        .map(|(&j, &value)| {
            let psi_minus1 = Complex::zero();
            let alpha = match s.sites()[j].alpha {
                Strength::Finite(a) => a,
                Strength::Infinite => unreachable!("active sites have finite strength"),
            };
            let lhs = match s.dimension() {
                Dimension::One => psi_minus1 * (-alpha),
                Dimension::Two => psi_minus1 * (-T::TAU() * alpha - T::LN_2() + T::euler_gamma()),
                Dimension::Three => psi_minus1 * (lit::<T>(2.0) * T::TAU() * alpha),
            };
            SiteCondition {
                site: j,
                psi_minus1,
                psi_0: value,
                lhs,
                rhs: value,
            }
        })
        .collect();
    let conditions_ok = site_conditions.iter().all(|c| {
        c.lhs.norm() <= site_tol && c.rhs.norm() <= site_tol && (c.lhs - c.rhs).norm() <= site_tol
    });
    let sites_ok = max_site_value <= site_tol;
    Ok(Lemma1Report {
        energy,
        z_norm1,
        site_values,
        max_site_value,
        step: h,
        fd_points,
        fd_residual: fd,
        fd_residual_double: fd_double,
        fd_ratio,
        fd_roundoff_floor: floor,
        analytic_residual: analytic,
        scale,
        site_conditions,
        sites_ok,
        fd_ok,
        analytic_ok,
        conditions_ok,
        passed: sites_ok && fd_ok && analytic_ok && conditions_ok,
    })
}

/// Largest mismatch of values and normal derivatives on `∂D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMatch<T> {
    pub value: T,
    pub normal: T,
    pub u_norm1: T,
}

/// `ψ⁺(x, |k|θ_m)`, `e^{i|k|θ_m·x}` and their normal derivatives at the
/// boundary samples of a ball, shared by every incident superposition.
#[derive(Debug, Clone)]
pub struct BoundaryProbe<T> {
    weights: Vec<T>,
    total: ComplexMatrix<T>,
    total_normal: ComplexMatrix<T>,
    free: ComplexMatrix<T>,
    free_normal: ComplexMatrix<T>,
}

impl<T: Real> BoundaryProbe<T> {
    pub fn new(
        s: &MultipointScatterer<T>,
        energy: T,
        rule: &QuadratureRule<T>,
        ball: &Ball<T>,
        samples: usize,
    ) -> Result<Self> {
        check_rule(s, rule)?;
        if ball.dimension() != s.dimension().get() {
            return Err(Error::Shape(
                "boundary and scatterer dimensions differ".into(),
            ));
        }
        let k = real_energy(energy)?;
        let modulus = k.value().re;
        let system = s.charge_system(&k)?;
        let charges = rule
            .nodes()
            .iter()
            .map(|theta| system.charges(&scale(theta, modulus)))
            .collect::<Result<Vec<_>>>()?;
        let points = ball.boundary(samples);
        let shape = (points.len(), rule.len());
        let mut total = ComplexMatrix::zeros(shape.0, shape.1);
        let mut total_normal = total.clone();
        let mut free = total.clone();
        let mut free_normal = total.clone();
        let i = imag_unit::<T>();
        for (p, (x, nu)) in points.iter().enumerate() {
            for (m, theta) in rule.nodes().iter().enumerate() {
                let e = cis(modulus * dot(theta, x));
                let de = i * e * (modulus * dot(theta, nu));
                let grad = system.scattered_gradient(x, &charges[m])?;
                let ds = grad
                    .iter()
                    .zip(nu)
                    .fold(Complex::zero(), |a, (&g, &n)| a + g * n);
                free[(p, m)] = e;
                free_normal[(p, m)] = de;
                total[(p, m)] = e + system.scattered_field(x, &charges[m])?;
                total_normal[(p, m)] = de + ds;
            }
        }
        Ok(BoundaryProbe {
            weights: rule.weights().to_vec(),
            total,
            total_normal,
            free,
            free_normal,
        })
    }

    pub fn check(&self, u: &[Complex<T>]) -> Result<BoundaryMatch<T>> {
        if u.len() != self.weights.len() {
            return Err(Error::Shape(format!(
                "{} samples for a rule with {} nodes",
                u.len(),
                self.weights.len()
            )));
        }
        let wu: Vec<Complex<T>> = u.iter().zip(&self.weights).map(|(&a, &w)| a * w).collect();
        let gap = |a: &ComplexMatrix<T>, b: &ComplexMatrix<T>| -> Result<T> {
            let (x, y) = (a.mul_vec(&wu)?, b.mul_vec(&wu)?);
            Ok(x.iter()
                .zip(&y)
                .fold(T::zero(), |acc, (&p, &q)| acc.max((p - q).norm())))
        };
        Ok(BoundaryMatch {
            value: gap(&self.total, &self.free)?,
            normal: gap(&self.total_normal, &self.free_normal)?,
            u_norm1: norm1(u),
        })
    }
}

/// Compares `ψ = Σ_m w_m u_m ψ⁺(·, |k|θ_m)` with the Herglotz field
/// `φ = Σ_m w_m u_m e^{i|k|θ_m·x}` on the boundary of `ball`.
pub fn boundary_match_check<T: Real>(
    s: &MultipointScatterer<T>,
    u: &[Complex<T>],
    energy: T,
    rule: &QuadratureRule<T>,
    ball: &Ball<T>,
    samples: usize,
) -> Result<BoundaryMatch<T>> {
    BoundaryProbe::new(s, energy, rule, ball, samples)?.check(u)
}

/// Numerical independence of a family restricted to a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct GramReport<T> {
    pub points: usize,
    /// Singular values of the sampled evaluation matrix, descending.
    pub singular_values: Vec<T>,
    /// `σ_min / σ_max`; the Gram matrix condition number is its inverse
    /// squared.
    pub ratio: T,
    pub rank: usize,
}

/// Samples the family at `points` seeded points of `ball` and reports the
/// numerical rank of the evaluation matrix.
pub fn gram_independence<T: Real>(
    family: &PlaneWaveFamily<T>,
    ball: &Ball<T>,
    points: usize,
    seed: u64,
    tol: T,
) -> Result<GramReport<T>> {
    if points < family.len() {
        return Err(Error::InvalidArgument(format!(
            "{points} sample points cannot resolve {} members",
            family.len()
        )));
    }
    let a = family.evaluation_matrix(&ball.sample(points, seed));
    let dec = svd(&a);
    let sv = dec.singular_values.clone();
    let ratio = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > T::zero() => lo / hi,
        _ => T::zero(),
    };
    Ok(GramReport {
        points,
        rank: dec.rank(tol),
        singular_values: sv,
        ratio,
    })
}
