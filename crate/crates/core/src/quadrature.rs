//! Quadrature on the unit sphere `S^{d-1}`.
//!
//! * d = 1: the two points `±1` with unit weights (counting measure on `S⁰`).
//! * d = 2: uniform trapezoid on the circle.
//! * d = 3: Gauss–Legendre in `cos ϑ` times a uniform azimuthal rule with
//!   twice as many nodes. Nodes are ordered polar-major.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{lit, Real};
use crate::space::Dimension;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule<T> {
    dimension: Dimension,
    resolution: usize,
    nodes: Vec<Vec<T>>,
    weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    /// Builds the rule. `resolution` is the node count for d = 2 and the
    /// polar node count for d = 3; it is ignored for d = 1.
    pub fn new(dimension: Dimension, resolution: usize) -> Result<Self> {
        if resolution == 0 && dimension != Dimension::One {
            return Err(Error::InvalidArgument(
                "quadrature resolution must be at least 1".into(),
            ));
        }
        let (nodes, weights) = match dimension {
            Dimension::One => (
                vec![vec![T::one()], vec![-T::one()]],
                vec![T::one(), T::one()],
            ),
            Dimension::Two => {
                let m: T = lit(resolution as f64);
                let step = T::TAU() / m;
                let nodes = (0..resolution)
                    .map(|i| {
                        let (s, c) = (step * lit(i as f64)).sin_cos();
                        vec![c, s]
                    })
                    .collect();
                (nodes, vec![step; resolution])
            }
            Dimension::Three => {
                let (xs, ws) = gauss_legendre::<T>(resolution);
                let n_az = 2 * resolution;
                let az_step = T::TAU() / lit(n_az as f64);
                let mut nodes = Vec::with_capacity(resolution * n_az);
                let mut weights = Vec::with_capacity(resolution * n_az);
                for (&z, &w) in xs.iter().zip(&ws) {
                    let rho = (T::one() - z * z).max(T::zero()).sqrt();
                    for a in 0..n_az {
                        let (s, c) = (az_step * lit(a as f64)).sin_cos();
                        nodes.push(vec![rho * c, rho * s, z]);
                        weights.push(w * az_step);
                    }
                }
                (nodes, weights)
            }
        };
        Ok(QuadratureRule {
            dimension,
            resolution,
            nodes,
            weights,
        })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `Σ_m w_m·samples_m`.
    pub fn integrate(&self, samples: &[Complex<T>]) -> Result<Complex<T>> {
        if samples.len() != self.len() {
            return Err(Error::Shape(format!(
                "{} samples for a rule with {} nodes",
                samples.len(),
                self.len()
            )));
        }
        Ok(samples
            .iter()
            .zip(&self.weights)
            .fold(Complex::zero(), |acc, (&s, &w)| acc + s * w))
    }
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`, by Newton
/// iteration on `P_n` from the Tricomi initial guesses.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut xs = vec![T::zero(); n];
    let mut ws = vec![T::zero(); n];
    let nf: T = lit(n as f64);
    for i in 0..n.div_ceil(2) {
        let mut x = (T::PI() * (lit::<T>(i as f64) + lit(0.75)) / (nf + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        // x descends with i; store ascending and mirror
        xs[n - 1 - i] = x;
        xs[i] = -x;
        ws[n - 1 - i] = w;
        ws[i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = T::zero();
    }
    (xs, ws)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf: T = lit(k as f64);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf: T = lit(n as f64);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{cis, dot};
    use crate::special::bessel_j0;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, TAU};

    type C = Complex<f64>;

    #[test]
    fn one_dimensional_rule() {
        let r = QuadratureRule::<f64>::new(Dimension::One, 99).unwrap();
        assert_eq!(r.nodes(), &[vec![1.0], vec![-1.0]]);
        assert_eq!(r.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn circle_rule() {
        let r = QuadratureRule::<f64>::new(Dimension::Two, 16).unwrap();
        assert_eq!(r.len(), 16);
        for (m, (n, &w)) in r.nodes().iter().zip(r.weights()).enumerate() {
            let t = TAU * m as f64 / 16.0;
            assert_abs_diff_eq!(n[0], t.cos(), epsilon = 1e-15);
            assert_abs_diff_eq!(n[1], t.sin(), epsilon = 1e-15);
            assert_abs_diff_eq!(w, TAU / 16.0, epsilon = 1e-16);
        }
    }

    #[test]
    fn sphere_rule_counts_and_measure() {
        for res in [1, 2, 5, 8, 13] {
            let r = QuadratureRule::<f64>::new(Dimension::Three, res).unwrap();
            assert_eq!(r.len(), 2 * res * res);
            let total: f64 = r.weights().iter().sum();
            assert_abs_diff_eq!(total, 4.0 * PI, epsilon = 1e-13);
            assert!(r.weights().iter().all(|&w| w > 0.0));
            for n in r.nodes() {
                assert_abs_diff_eq!(crate::real::norm(n), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn rejects_zero_resolution() {
        assert!(QuadratureRule::<f64>::new(Dimension::Two, 0).is_err());
        assert!(QuadratureRule::<f64>::new(Dimension::Three, 0).is_err());
        assert!(Dimension::new(0).is_err());
    }

    #[test]
    fn gauss_legendre_exactness() {
        // exact for polynomials of degree 2n−1
        let (x, w) = gauss_legendre::<f64>(6);
        for p in 0..12 {
            let q: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(p)).sum();
            let exact = if p % 2 == 1 {
                0.0
            } else {
                2.0 / (p as f64 + 1.0)
            };
            assert_abs_diff_eq!(q, exact, epsilon = 1e-14);
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn integrate_constant_and_harmonic() {
        let r = QuadratureRule::<f64>::new(Dimension::Two, 32).unwrap();
        let ones = vec![C::new(1.0, 0.0); r.len()];
        assert_abs_diff_eq!(
            (r.integrate(&ones).unwrap() - C::new(TAU, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        let harmonic: Vec<C> = r
            .nodes()
            .iter()
            .map(|n| cis(5.0 * n[1].atan2(n[0])))
            .collect();
        assert_abs_diff_eq!(r.integrate(&harmonic).unwrap().norm(), 0.0, epsilon = 1e-14);
        assert!(r.integrate(&ones[..3]).is_err());
    }

    #[test]
    fn sphere_plane_wave_moment() {
        let r = QuadratureRule::<f64>::new(Dimension::Three, 8).unwrap();
        let x = [0.6, 0.0, 0.8];
        let s: Vec<C> = r.nodes().iter().map(|n| cis(dot(n, &x))).collect();
        let v = r.integrate(&s).unwrap();
        assert_abs_diff_eq!(
            (v - C::new(4.0 * PI * 1.0_f64.sin(), 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn plane_wave_moments_converge() {
        let x2 = [3.0, 4.0];
        let exact2 = TAU * bessel_j0(5.0);
        let x3 = [1.0_f64, -2.0, 2.5];
        let r3: f64 = crate::real::norm(&x3);
        let exact3 = 4.0 * PI * r3.sin() / r3;
        let err = |d: Dimension, res: usize| {
            let r = QuadratureRule::<f64>::new(d, res).unwrap();
            let (x, exact): (&[f64], f64) = if d == Dimension::Two {
                (&x2, exact2)
            } else {
                (&x3, exact3)
            };
            let s: Vec<C> = r.nodes().iter().map(|n| cis(dot(n, x))).collect();
            (r.integrate(&s).unwrap() - C::new(exact, 0.0)).norm()
        };
        // spectral regime starts once the resolution exceeds the bandwidth |x|
        for (d, res) in [
            (Dimension::Two, [8, 16, 32]),
            (Dimension::Three, [4, 8, 16]),
        ] {
            let e: Vec<f64> = res.iter().map(|&r| err(d, r)).collect();
            assert!(e[1] <= 0.5 * e[0] && e[2] <= 0.5 * e[1], "{d}: {e:?}");
            assert!(err(d, 32) <= 1e-12);
        }
    }
}
