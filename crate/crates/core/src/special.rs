//! Bessel functions of order 0 and 1, the Hankel function `H₀⁽¹⁾`, and the
//! outgoing free-space Green functions of `Δ + E` in one, two and three
//! dimensions.
//!
//! For `x ≤ 8` the Bessel functions come from their power series (with the
//! harmonic-number companion series for `Y₀`, `Y₁`). Above the switch point
//! the Hankel asymptotic form
//!
//! ```text
//! J_ν(x) = √(2/(πx)) [P(x) cos χ − Q(x) sin χ]
//! Y_ν(x) = √(2/(πx)) [P(x) sin χ + Q(x) cos χ],   χ = x − (2ν+1)π/4
//! ```
//!
//! is evaluated with rational amplitude/phase approximations in `25/x²`
//! (the Cephes coefficient sets), which stay at machine accuracy down to
//! `x = 5`; this leaves an overlap window `[5, 8]` where both branches are
//! valid.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{cis, cplx, imag_unit, lit, real, Real};
use crate::space::Dimension;

/// Argument above which the asymptotic branch is used.
pub const SERIES_SWITCH: f64 = 8.0;

/// Outgoing wavenumber `κ` with `κ² = E`.
///
/// Built from a complex energy with the square-root branch `Im κ ≥ 0`, which
/// agrees with the principal branch whenever `Im E ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber<T> {
    value: Complex<T>,
}

impl<T: Real> Wavenumber<T> {
    pub fn from_energy(energy: Complex<T>) -> Self {
        // normalise a signed zero so that negative reals map to +i√|E|
        let e = Complex::new(energy.re, energy.im + T::zero());
        let mut value = e.sqrt();
        if value.im < T::zero() {
            value = -value;
        }
        Wavenumber { value }
    }

    /// `|k| > 0` on the real axis.
    pub fn from_modulus(modulus: T) -> Result<Self> {
        if !(modulus > T::zero()) || !modulus.is_finite() {
            return Err(Error::ZeroWavenumber);
        }
        Ok(Wavenumber {
            value: real(modulus),
        })
    }

    pub fn from_real_energy(energy: T) -> Result<Self> {
        if !(energy > T::zero()) || !energy.is_finite() {
            return Err(Error::NonPositiveEnergy {
                re: energy.to_f64().unwrap_or(f64::NAN),
                im: 0.0,
            });
        }
        Self::from_modulus(energy.sqrt())
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        self.value
    }

    pub fn energy(&self) -> Complex<T> {
        self.value * self.value
    }

    pub fn is_real_positive(&self) -> bool {
        self.value.im == T::zero() && self.value.re > T::zero()
    }

    /// Real modulus, if the wavenumber lies on the positive real axis.
    pub fn real_modulus(&self) -> Result<T> {
        if self.is_real_positive() {
            Ok(self.value.re)
        } else if self.value == Complex::new(T::zero(), T::zero()) {
            Err(Error::ZeroWavenumber)
        } else {
            Err(Error::ComplexWavenumber {
                re: self.value.re.to_f64().unwrap_or(f64::NAN),
                im: self.value.im.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

fn domain_err<T: Real>(function: &'static str, x: T) -> Error {
    Error::Domain {
        function,
        value: x.to_f64().unwrap_or(f64::NAN),
    }
}

/// `J₀(x)` for any real `x` (even function).
pub fn bessel_j0<T: Real>(x: T) -> T {
    let x = x.abs();
    if x <= lit(SERIES_SWITCH) {
        series_j0(x)
    } else {
        asymptotic_order0(x).0
    }
}

/// `(J₀(x), Y₀(x))` for `x > 0`.
pub fn bessel_j0_y0<T: Real>(x: T) -> Result<(T, T)> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain_err("Y0", x));
    }
    Ok(if x <= lit(SERIES_SWITCH) {
        series_order0(x)
    } else {
        asymptotic_order0(x)
    })
}

/// `(J₁(x), Y₁(x))` for `x > 0`.
pub fn bessel_j1_y1<T: Real>(x: T) -> Result<(T, T)> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain_err("Y1", x));
    }
    Ok(if x <= lit(SERIES_SWITCH) {
        series_order1(x)
    } else {
        asymptotic_order1(x)
    })
}

/// `H₀⁽¹⁾(x) = J₀(x) + i·Y₀(x)` for real `x > 0`.
pub fn hankel1_0<T: Real>(x: T) -> Result<Complex<T>> {
    bessel_j0_y0(x).map(|(j, y)| cplx(j, y))
}

/// `H₁⁽¹⁾(x) = J₁(x) + i·Y₁(x)` for real `x > 0`.
pub fn hankel1_1<T: Real>(x: T) -> Result<Complex<T>> {
    bessel_j1_y1(x).map(|(j, y)| cplx(j, y))
}

const MAX_SERIES_TERMS: usize = 120;

fn series_j0<T: Real>(x: T) -> T {
    let q = -(x * x) / lit(4.0);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..MAX_SERIES_TERMS {
        let kf: T = lit(k as f64);
        term = term * q / (kf * kf);
        sum = sum + term;
        if term.abs() <= T::epsilon() * lit(1e-3) {
            break;
        }
    }
    sum
}

pub(crate) fn series_order0<T: Real>(x: T) -> (T, T) {
    let q = -(x * x) / lit(4.0);
    let mut term = T::one();
    let mut j0 = T::one();
    let mut harmonic = T::zero();
    let mut tail = T::zero();
    for k in 1..MAX_SERIES_TERMS {
        let kf: T = lit(k as f64);
        term = term * q / (kf * kf);
        harmonic = harmonic + kf.recip();
        j0 = j0 + term;
        tail = tail - term * harmonic;
        if term.abs() * (harmonic + T::one()) <= T::epsilon() * lit(1e-3) {
            break;
        }
    }
    let two_over_pi = T::FRAC_2_PI();
    let log_part = (x / lit(2.0)).ln() + T::euler_gamma();
    (j0, two_over_pi * (log_part * j0 + tail))
}

pub(crate) fn series_order1<T: Real>(x: T) -> (T, T) {
    let q = -(x * x) / lit(4.0);
    let mut term = x / lit(2.0);
    let mut j1 = term;
    let mut h_k = T::zero();
    let mut h_k1 = T::one();
    let mut tail = term * (h_k + h_k1);
    for k in 1..MAX_SERIES_TERMS {
        let kf: T = lit(k as f64);
        term = term * q / (kf * (kf + T::one()));
        h_k = h_k1;
        h_k1 = h_k1 + (kf + T::one()).recip();
        j1 = j1 + term;
        tail = tail + term * (h_k + h_k1);
        if term.abs() * (h_k + h_k1 + T::one()) <= T::epsilon() * lit(1e-3) {
            break;
        }
    }
    let log_part = (x / lit(2.0)).ln() + T::euler_gamma();
    let y1 = T::FRAC_2_PI() * (log_part * j1 - x.recip()) - T::FRAC_1_PI() * tail;
    (j1, y1)
}

fn polevl<T: Real>(z: T, coeffs: &[f64]) -> T {
    coeffs.iter().fold(T::zero(), |acc, &c| acc * z + lit(c))
}

/// Polynomial with an implied leading coefficient of one.
fn p1evl<T: Real>(z: T, coeffs: &[f64]) -> T {
    coeffs.iter().fold(T::one(), |acc, &c| acc * z + lit(c))
}

pub(crate) fn asymptotic_order0<T: Real>(x: T) -> (T, T) {
    let w = lit::<T>(5.0) / x;
    let z = w * w;
    let p = polevl(z, &J0_PP) / polevl(z, &J0_PQ);
    let q = w * polevl(z, &J0_QP) / p1evl(z, &J0_QQ);
    // χ = x − π/4, expanded to avoid cancellation in the phase
    let (s, c) = x.sin_cos();
    let r = T::FRAC_1_SQRT_2();
    let (sin_chi, cos_chi) = ((s - c) * r, (c + s) * r);
    let amp = (T::FRAC_2_PI() / x).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

pub(crate) fn asymptotic_order1<T: Real>(x: T) -> (T, T) {
    let w = lit::<T>(5.0) / x;
    let z = w * w;
    let p = polevl(z, &J1_PP) / polevl(z, &J1_PQ);
    let q = w * polevl(z, &J1_QP) / p1evl(z, &J1_QQ);
    // χ = x − 3π/4
    let (s, c) = x.sin_cos();
    let r = T::FRAC_1_SQRT_2();
    let (sin_chi, cos_chi) = ((-s - c) * r, (s - c) * r);
    let amp = (T::FRAC_2_PI() / x).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

/// Outgoing Green function `G⁺(x, E)` of `Δ + E` at a point `x ≠ 0`.
pub fn green_plus<T: Real>(d: Dimension, x: &[T], k: &Wavenumber<T>) -> Result<Complex<T>> {
    d.check_point(x)?;
    green_plus_radial(d, crate::real::norm(x), k)
}

/// `G⁺` as a function of `r = |x|`.
pub fn green_plus_radial<T: Real>(d: Dimension, r: T, k: &Wavenumber<T>) -> Result<Complex<T>> {
    if !(r > T::zero()) {
        return Err(Error::SingularPoint);
    }
    let kv = k.value();
    if kv.norm() == T::zero() {
        return Err(Error::ZeroWavenumber);
    }
    let i = imag_unit::<T>();
    match d {
        Dimension::One => Ok((i * kv * r).exp() / (i * kv * lit::<T>(2.0))),
        Dimension::Two => {
            let km = k.real_modulus()?;
            let h = hankel1_0(km * r)?;
            Ok(-i * h / lit::<T>(4.0))
        }
        Dimension::Three => Ok(-(i * kv * r).exp() / (lit::<T>(4.0) * T::PI() * r)),
    }
}

/// Radial derivative `∂G⁺/∂r` at `r > 0`; the gradient is this times `x/|x|`.
pub fn green_plus_radial_derivative<T: Real>(
    d: Dimension,
    r: T,
    k: &Wavenumber<T>,
) -> Result<Complex<T>> {
    if !(r > T::zero()) {
        return Err(Error::SingularPoint);
    }
    let kv = k.value();
    if kv.norm() == T::zero() {
        return Err(Error::ZeroWavenumber);
    }
    let i = imag_unit::<T>();
    match d {
        Dimension::One => Ok((i * kv * r).exp() / lit::<T>(2.0)),
        Dimension::Two => {
            // d/dr H₀⁽¹⁾(kr) = −k H₁⁽¹⁾(kr)
            let km = k.real_modulus()?;
            let h1 = hankel1_1(km * r)?;
            Ok(i * h1 * km / lit::<T>(4.0))
        }
        Dimension::Three => {
            let four_pi = lit::<T>(4.0) * T::PI();
            Ok(-(i * kv * r).exp() * (i * kv * r - T::one()) / (four_pi * r * r))
        }
    }
}

/// Constant term of `G⁺` at the origin after the singular part is removed:
/// `1/(2i|k|)` (d=1), `(1/2π)(ln|k| − ln 2 + γ − πi/2)` (d=2),
/// `−i|k|/(4π)` (d=3).
pub fn green_regular_part<T: Real>(d: Dimension, k: &Wavenumber<T>) -> Result<Complex<T>> {
    let kv = k.value();
    if kv.norm() == T::zero() {
        return Err(Error::ZeroWavenumber);
    }
    let i = imag_unit::<T>();
    match d {
        Dimension::One => Ok((i * kv * lit::<T>(2.0)).inv()),
        Dimension::Two => {
            let km = k.real_modulus()?;
            let re = km.ln() - T::LN_2() + T::euler_gamma();
            Ok(cplx(re, -T::FRAC_PI_2()) / T::TAU())
        }
        Dimension::Three => Ok(-i * kv / (lit::<T>(4.0) * T::PI())),
    }
}

/// Leading small-`|x|` behaviour of `G⁺` in two dimensions,
/// `(1/2π)[ln|x| + ln|k| − ln 2 + γ − πi/2]`.
pub fn green_plus_2d_small_argument<T: Real>(r: T, modulus: T) -> Complex<T> {
    let re = r.ln() + modulus.ln() - T::LN_2() + T::euler_gamma();
    cplx(re, -T::FRAC_PI_2()) / T::TAU()
}

/// Plane wave `e^{i κ θ·x}` for a complex wavenumber and real direction.
pub(crate) fn plane_wave<T: Real>(kappa: Complex<T>, direction: &[T], x: &[T]) -> Complex<T> {
    let phase = crate::real::dot(direction, x);
    if kappa.im == T::zero() {
        cis(kappa.re * phase)
    } else {
        (imag_unit::<T>() * kappa * phase).exp()
    }
}

// Rational approximations of the Hankel amplitude/phase functions, from the
// Cephes j0.c / j1.c coefficient sets (argument 25/x²).

const J0_PP: [f64; 7] = [
    7.969367292973471e-4,
    8.283523921074408e-2,
    1.239533716464143,
    5.447250030587687,
    8.74716500199817,
    5.303240382353949,
    1.0,
];

const J0_PQ: [f64; 7] = [
    9.244088105588637e-4,
    8.562884743544745e-2,
    1.2535274390105895,
    5.470977403304171,
    8.761908832370695,
    5.306052882353947,
    1.0,
];

const J0_QP: [f64; 8] = [
    -1.1366383889846916e-2,
    -1.2825271867050931,
    -1.9553954425773597e1,
    -9.320601521237683e1,
    -1.7768116798048806e2,
    -1.4707750515495118e2,
    -5.141053267665993e1,
    -6.050143506007285,
];

const J0_QQ: [f64; 7] = [
    6.43178256118178e1,
    8.564300259769806e2,
    3.8824018360540163e3,
    7.240467741956525e3,
    5.930727011873169e3,
    2.0620933166032783e3,
    2.420057402402914e2,
];

const J1_PP: [f64; 7] = [
    7.621256162081731e-4,
    7.313970569409176e-2,
    1.1271960812968493,
    5.112079511468076,
    8.424045901417724,
    5.214515986823615,
    1.0,
];

const J1_PQ: [f64; 7] = [
    5.713231280725487e-4,
    6.884559087544954e-2,
    1.105142326340617,
    5.073863861286015,
    8.399855543276042,
    5.209828486823619,
    1.0,
];

const J1_QP: [f64; 8] = [
    5.108625947501766e-2,
    4.982138729512334,
    7.582382841325453e1,
    3.667796093601508e2,
    7.108563049989261e2,
    5.974896124006136e2,
    2.1168875710057213e2,
    2.5207020585802372e1,
];

const J1_QQ: [f64; 7] = [
    7.423732770356752e1,
    1.0564488603826283e3,
    4.986410583376536e3,
    9.562318924047562e3,
    7.997041604473507e3,
    2.8261927851763908e3,
    3.360936078106983e2,
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn j0_at_zero_is_one() {
        assert_eq!(bessel_j0(0.0_f64), 1.0);
        assert_abs_diff_eq!(bessel_j0(1e-9_f64), 1.0, epsilon = 1e-16);
    }

    #[test]
    fn y0_rejects_non_positive() {
        assert!(bessel_j0_y0(0.0_f64).is_err());
        assert!(bessel_j0_y0(-1.0_f64).is_err());
        assert!(hankel1_0(0.0_f64).is_err());
        assert!(bessel_j0_y0(f64::NAN).is_err());
    }

    #[test]
    fn values_at_one() {
        let (j0, y0) = bessel_j0_y0(1.0_f64).unwrap();
        assert_abs_diff_eq!(j0, 0.765_197_686_557_966_6, epsilon = 1e-15);
        assert_abs_diff_eq!(y0, 0.088_256_964_215_676_96, epsilon = 1e-15);
        let (j1, y1) = bessel_j1_y1(1.0_f64).unwrap();
        assert_abs_diff_eq!(j1, 0.440_050_585_744_933_5, epsilon = 1e-15);
        assert_abs_diff_eq!(y1, -0.781_212_821_300_288_7, epsilon = 1e-15);
    }

    #[test]
    fn first_zero_of_j0() {
        assert_abs_diff_eq!(bessel_j0(2.404_825_557_695_773_f64), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hankel_imaginary_part_is_y0() {
        for &x in &[0.3_f64, 1.0, 7.9, 8.1, 40.0, 1234.5] {
            let h = hankel1_0(x).unwrap();
            let (j, y) = bessel_j0_y0(x).unwrap();
            assert_eq!(h.re, j);
            assert_eq!(h.im, y);
        }
    }

    #[test]
    fn branches_agree_in_overlap_window() {
        let mut worst = 0.0_f64;
        for i in 0..=60 {
            let x = 5.5 + 2.5 * i as f64 / 60.0;
            let (sj0, sy0) = series_order0(x);
            let (aj0, ay0) = asymptotic_order0(x);
            let (sj1, sy1) = series_order1(x);
            let (aj1, ay1) = asymptotic_order1(x);
            worst = worst
                .max((sj0 - aj0).abs())
                .max((sy0 - ay0).abs())
                .max((sj1 - aj1).abs())
                .max((sy1 - ay1).abs());
        }
        assert!(worst <= 1e-11, "branch mismatch {worst:e}");
    }

    #[test]
    fn small_argument_hankel_expansion() {
        // H₀⁽¹⁾(x) − (2i/π)(ln(x/2) + γ) → 1
        for &x in &[1e-3_f64, 1e-5, 1e-7] {
            let h = hankel1_0(x).unwrap();
            let log_part = (2.0 / std::f64::consts::PI) * ((x / 2.0).ln() + EULER);
            assert_abs_diff_eq!(h.re, 1.0, epsilon = x);
            assert_abs_diff_eq!(h.im - log_part, 0.0, epsilon = x);
        }
    }
    const EULER: f64 = crate::real::EULER_GAMMA;

    #[test]
    fn green_worked_values() {
        let k = Wavenumber::from_real_energy(1.0_f64).unwrap();
        let g3 = green_plus(Dimension::Three, &[1.0, 0.0, 0.0], &k).unwrap();
        // −e^{i}/(4π) evaluated directly
        assert_abs_diff_eq!(g3.re, -0.042_995_891_371_431_8, epsilon = 1e-15);
        assert_abs_diff_eq!(g3.im, -0.066_962_133_350_290_94, epsilon = 1e-15);
        let g1 = green_plus(Dimension::One, &[1.0], &k).unwrap();
        assert_abs_diff_eq!(g1.re, 1.0_f64.sin() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g1.im, -(1.0_f64.cos()) / 2.0, epsilon = 1e-15);
        let g2 = green_plus(Dimension::Two, &[0.0, 1.0], &k).unwrap();
        assert_abs_diff_eq!(g2.re, 0.022_064, epsilon = 1e-6);
        assert_abs_diff_eq!(g2.im, -0.191_299, epsilon = 1e-6);
    }

    #[test]
    fn green_rejects_origin_and_bad_points() {
        let k = Wavenumber::from_real_energy(1.0_f64).unwrap();
        assert_eq!(
            green_plus(Dimension::Three, &[0.0, 0.0, 0.0], &k),
            Err(Error::SingularPoint)
        );
        assert!(matches!(
            green_plus(Dimension::Two, &[1.0], &k),
            Err(Error::PointLength { .. })
        ));
        assert!(Dimension::new(4).is_err());
        assert!(Wavenumber::from_modulus(0.0_f64).is_err());
    }

    #[test]
    fn complex_wavenumber_only_in_odd_dimensions() {
        let k = Wavenumber::from_energy(Complex::new(1.0_f64, 0.5));
        assert!(green_plus(Dimension::Three, &[1.0, 0.0, 0.0], &k).is_ok());
        assert!(green_plus(Dimension::One, &[1.0], &k).is_ok());
        assert!(matches!(
            green_plus(Dimension::Two, &[1.0, 0.0], &k),
            Err(Error::ComplexWavenumber { .. })
        ));
    }

    #[test]
    fn wavenumber_branch() {
        let k = Wavenumber::from_energy(Complex::new(0.0_f64, 1.0));
        let expect = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert_abs_diff_eq!((k.value() - expect).norm(), 0.0, epsilon = 1e-15);
        let k = Wavenumber::from_energy(Complex::new(-4.0_f64, -0.0));
        assert_abs_diff_eq!(
            (k.value() - Complex::new(0.0, 2.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        let k = Wavenumber::from_energy(Complex::new(1.0_f64, -1.0));
        assert!(k.value().im >= 0.0);
        assert_abs_diff_eq!(
            (k.energy() - Complex::new(1.0, -1.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn radial_derivative_matches_finite_difference() {
        let k = Wavenumber::from_real_energy(2.3_f64).unwrap();
        for d in [Dimension::One, Dimension::Two, Dimension::Three] {
            for &r in &[0.4_f64, 1.7, 9.5] {
                let h = 1e-5;
                let fd = (green_plus_radial(d, r + h, &k).unwrap()
                    - green_plus_radial(d, r - h, &k).unwrap())
                    / (2.0 * h);
                let an = green_plus_radial_derivative(d, r, &k).unwrap();
                assert!((fd - an).norm() <= 1e-8 * an.norm().max(1.0), "d={d} r={r}");
            }
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let (j0, y0) = bessel_j0_y0(1.0_f32).unwrap();
        assert!((j0 - 0.765_197_7).abs() < 1e-6);
        assert!((y0 - 0.088_256_96).abs() < 1e-6);
        let (j0, _) = bessel_j0_y0(30.0_f32).unwrap();
        assert!((j0 - (-0.086_367_98)).abs() < 1e-5);
    }
}
