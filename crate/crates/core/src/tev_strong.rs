//! Strong transmission eigenfunctions: fixed points of the discretised
//! scattering operator.
//!
//! Any `u` on the sphere whose plane-wave moments at every active site
//! vanish,
//!
//! ```text
//! Σ_m e^{i|k|θ_m·y_j} w_m u_m = 0,   j = 1..n,
//! ```
//!
//! is annihilated by `S − I`, because that operator factors through exactly
//! these moments. The same moments are the induced charges of the
//! superposition `∫ψ⁺(x, |k|θ)u(θ)dθ`, which is therefore identical to the
//! free Herglotz field: the scatterer is transparent for such an incident
//! field.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{null_space, ComplexMatrix};
use crate::quadrature::QuadratureRule;
use crate::real::{cis, dot, lit, norm1, norm2, Real};
use crate::s_operator::{build_s_matrix, check_rule, real_energy};
use crate::scatterer::{ChargeSystem, MultipointScatterer};
use crate::space::{distance, scale, Dimension};

/// Number of interior sample points used by [`strong_eigenfunctions`].
pub const DEFAULT_SAMPLE_COUNT: usize = 20;

/// Weighted moment matrix, row `j` (active site), column `m` (node):
/// `e^{i|k|θ_m·y_j} w_m`.
#[derive(Debug, Clone)]
pub struct MomentMatrix<T> {
    matrix: ComplexMatrix<T>,
    site_indices: Vec<usize>,
}

impl<T: Real> MomentMatrix<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn site_indices(&self) -> &[usize] {
        &self.site_indices
    }

    /// Moments `W u` of a node-sample vector.
    pub fn apply(&self, u: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.matrix.mul_vec(u)
    }
}

pub fn moment_matrix<T: Real>(
    s: &MultipointScatterer<T>,
    energy: T,
    rule: &QuadratureRule<T>,
) -> Result<MomentMatrix<T>> {
    check_rule(s, rule)?;
    let modulus = real_energy(energy)?.value().re;
    let site_indices = s.active_indices();
    let matrix = ComplexMatrix::from_fn(site_indices.len(), rule.len(), |j, m| {
        let y = &s.sites()[site_indices[j]].position;
        cis(modulus * dot(&rule.nodes()[m], y)) * rule.weights()[m]
    });
    Ok(MomentMatrix {
        matrix,
        site_indices,
    })
}

/// Transparency defects of one incident superposition `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransparencyDefect<T> {
    /// `max_x |ψ(x) − φ(x)|` over the sample points.
    pub field: T,
    /// `max_j |Q_j|` with `Q_j = Σ_m q_j(|k|θ_m) w_m u_m`.
    pub charge: T,
    /// `‖u‖₁`, the scale both defects are measured against.
    pub u_norm1: T,
}

/// Precomputed `ψ⁺(x, |k|θ_m)` and `e^{i|k|θ_m·x}` on a fixed point set.
#[derive(Debug, Clone)]
pub struct TransparencyProbe<T> {
    modulus: T,
    weights: Vec<T>,
    total: ComplexMatrix<T>,
    free: ComplexMatrix<T>,
    forward_charges: ComplexMatrix<T>,
}

impl<T: Real> TransparencyProbe<T> {
    pub fn new(
        s: &MultipointScatterer<T>,
        energy: T,
        rule: &QuadratureRule<T>,
        points: &[Vec<T>],
    ) -> Result<Self> {
        check_rule(s, rule)?;
        let k = real_energy(energy)?;
        let modulus = k.value().re;
        let system = s.charge_system(&k)?;
        let forward_charges = forward_charge_table(&system, rule)?;
        let m_count = rule.len();
        let mut total = ComplexMatrix::zeros(points.len(), m_count);
        let mut free = ComplexMatrix::zeros(points.len(), m_count);
        for (p, x) in points.iter().enumerate() {
            s.dimension().check_point(x)?;
            for (m, theta) in rule.nodes().iter().enumerate() {
                let kvec = scale(theta, modulus);
                let q = forward_charges.row(m);
                free[(p, m)] = cis(dot(&kvec, x));
                total[(p, m)] = system.total_field(x, &kvec, q)?;
            }
        }
        Ok(TransparencyProbe {
            modulus,
            weights: rule.weights().to_vec(),
            total,
            free,
            forward_charges,
        })
    }

    pub fn modulus(&self) -> T {
        self.modulus
    }

    /// `ψ(x)` and `φ(x)` at every probe point.
    pub fn fields(&self, u: &[Complex<T>]) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
        if u.len() != self.weights.len() {
            return Err(Error::Shape(format!(
                "{} samples for a rule with {} nodes",
                u.len(),
                self.weights.len()
            )));
        }
        let wu: Vec<Complex<T>> = u.iter().zip(&self.weights).map(|(&a, &w)| a * w).collect();
        Ok((self.total.mul_vec(&wu)?, self.free.mul_vec(&wu)?))
    }

    /// Induced charges `Q_j`.
    pub fn induced_charges(&self, u: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.forward_charges.cols();
        let mut out = vec![Complex::zero(); n];
        for (m, (&um, &w)) in u.iter().zip(&self.weights).enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o = *o + self.forward_charges[(m, j)] * um * w;
            }
        }
        Ok(out)
    }

    pub fn check(&self, u: &[Complex<T>]) -> Result<TransparencyDefect<T>> {
        let (psi, phi) = self.fields(u)?;
        let field = psi
            .iter()
            .zip(&phi)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).norm()));
        let charge = self
            .induced_charges(u)?
            .iter()
            .fold(T::zero(), |acc, q| acc.max(q.norm()));
        Ok(TransparencyDefect {
            field,
            charge,
            u_norm1: norm1(u),
        })
    }
}

/// `M × n` table of `q_j(|k|θ_m)`.
fn forward_charge_table<T: Real>(
    system: &ChargeSystem<T>,
    rule: &QuadratureRule<T>,
) -> Result<ComplexMatrix<T>> {
    let n = system.active_indices().len();
    let mut table = ComplexMatrix::zeros(rule.len(), n);
    for (m, theta) in rule.nodes().iter().enumerate() {
        let q = system.charges(&scale(theta, system.modulus()))?;
        for (j, v) in q.into_iter().enumerate() {
            table[(m, j)] = v;
        }
    }
    Ok(table)
}

/// Deterministic sample points in the ball around the site centroid with
/// twice the largest centroid distance as radius (at least 1), kept away
/// from the sites.
pub fn sample_points<T: Real>(s: &MultipointScatterer<T>, count: usize, seed: u64) -> Vec<Vec<T>> {
    let center = s.centroid();
    let spread = s
        .sites()
        .iter()
        .map(|site| distance(&site.position, &center))
        .fold(T::zero(), T::max);
    let radius = (lit::<T>(2.0) * spread).max(T::one());
    let clearance = radius * lit(1e-3);
    let d = s.dimension().get();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<T> = (0..d).map(|_| lit(rng.gen_range(-1.0..1.0))).collect();
        if crate::real::norm(&v) > T::one() {
            continue;
        }
        let x: Vec<T> = v
            .iter()
            .zip(&center)
            .map(|(&a, &c)| c + a * radius)
            .collect();
        if s.sites()
            .iter()
            .any(|site| distance(&site.position, &x) < clearance)
        {
            continue;
        }
        out.push(x);
    }
    out
}

/// Strong transmission eigenfunctions at one energy and their checks.
#[derive(Debug, Clone)]
pub struct StrongTevReport<T> {
    pub energy: T,
    /// Node count `M` of the discretisation.
    pub resolution: usize,
    pub n_active: usize,
    pub tol: T,
    /// Orthonormal basis of the moment null space (node samples).
    pub basis: Vec<Vec<Complex<T>>>,
    pub moment_rank: usize,
    pub moment_singular_values: Vec<T>,
    /// `‖S u − u‖₂ / ‖u‖₂` per basis vector.
    pub fixed_point_residuals: Vec<T>,
    pub transparency: Vec<TransparencyDefect<T>>,
    pub defect_rank: usize,
    pub defect_singular_values: Vec<T>,
    pub sample_points: Vec<Vec<T>>,
    pub seed: u64,
}

impl<T: Real> StrongTevReport<T> {
    pub fn multiplicity(&self) -> usize {
        self.basis.len()
    }

    pub fn max_fixed_point_residual(&self) -> T {
        self.fixed_point_residuals
            .iter()
            .copied()
            .fold(T::zero(), T::max)
    }

    /// `max_u max_x |ψ − φ| / ‖u‖₁`
    pub fn max_field_defect(&self) -> T {
        self.transparency
            .iter()
            .fold(T::zero(), |acc, t| acc.max(t.field / t.u_norm1))
    }

    /// `max_u max_j |Q_j| / ‖u‖₁`
    pub fn max_charge_defect(&self) -> T {
        self.transparency
            .iter()
            .fold(T::zero(), |acc, t| acc.max(t.charge / t.u_norm1))
    }
}

pub fn strong_eigenfunctions<T: Real>(
    s: &MultipointScatterer<T>,
    energy: T,
    rule: &QuadratureRule<T>,
    tol: T,
    seed: u64,
) -> Result<StrongTevReport<T>> {
    let smat = build_s_matrix(s, energy, rule)?;
    let m_count = rule.len();
    let (basis, moment_rank, moment_singular_values) = if s.n_active() == 0 {
        let basis = (0..m_count)
            .map(|i| {
                let mut e = vec![Complex::zero(); m_count];
                e[i] = Complex::new(T::one(), T::zero());
                e
            })
            .collect();
        (basis, 0, Vec::new())
    } else {
        let ns = null_space(smat.moments().matrix(), tol)?;
        (ns.basis, ns.rank, ns.singular_values)
    };
    let fixed_point_residuals = basis
        .iter()
        .map(|u| Ok(smat.fixed_point_residual(u)? / norm2(u)))
        .collect::<Result<Vec<T>>>()?;
    let sample_points = sample_points(s, DEFAULT_SAMPLE_COUNT, seed);
    let probe = TransparencyProbe::new(s, energy, rule, &sample_points)?;
    let transparency = basis
        .iter()
        .map(|u| probe.check(u))
        .collect::<Result<Vec<_>>>()?;
    let (defect_rank, defect_singular_values) = smat.defect_rank(tol);
    Ok(StrongTevReport {
        energy,
        resolution: m_count,
        n_active: s.n_active(),
        tol,
        basis,
        moment_rank,
        moment_singular_values,
        fixed_point_residuals,
        transparency,
        defect_rank,
        defect_singular_values,
        sample_points,
        seed,
    })
}

/// Explicit fixed point of the two-direction scattering matrix for a single
/// site on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineEigenvector<T> {
    /// Sample at the direction `−1`.
    pub minus: Complex<T>,
    /// Sample at the direction `+1`.
    pub plus: Complex<T>,
}

impl<T: Real> LineEigenvector<T> {
    /// Samples ordered like the one-dimensional quadrature nodes `{+1, −1}`.
    pub fn in_node_order(&self) -> Vec<Complex<T>> {
        vec![self.plus, self.minus]
    }
}

/// `(u⁻, u⁺) = (e^{i|k|y}, −e^{−i|k|y})/√2`, the normalised solution of
/// `e^{−i|k|y}u⁻ + e^{i|k|y}u⁺ = 0`.
pub fn d1_single_point_eigenvector<T: Real>(
    s: &MultipointScatterer<T>,
    energy: T,
) -> Result<LineEigenvector<T>> {
    if s.dimension() != Dimension::One {
        return Err(Error::InvalidArgument(format!(
            "single-point line eigenvector needs dimension 1, got {}",
            s.dimension()
        )));
    }
    if s.sites().len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "single-point line eigenvector needs exactly one site, got {}",
            s.sites().len()
        )));
    }
    let modulus = real_energy(energy)?.value().re;
    let y = s.sites()[0].position[0];
    let r = T::FRAC_1_SQRT_2();
    Ok(LineEigenvector {
        minus: cis(modulus * y) * r,
        plus: -cis(-modulus * y) * r,
    })
}
