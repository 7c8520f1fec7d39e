//! Dense complex linear algebra: LU with partial pivoting, one-sided Jacobi
//! SVD, thresholded rank and null spaces, and a small shifted-QR eigenvalue
//! routine.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Default relative threshold for numerical rank, `σ > tol·σ_max`.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Single-column matrix.
    pub fn column(v: &[Complex<T>]) -> Self {
        ComplexMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = *d + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("subtraction of mismatched matrices".into()));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |acc, z| acc + z.norm()))
            .fold(T::zero(), T::max)
    }

    pub fn norm_fro(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Relative pivot threshold below which a matrix is declared singular.
pub fn pivot_threshold<T: Real>() -> T {
    lit::<T>(1e-14).max(T::epsilon() * lit(50.0))
}

/// LU factorisation `PA = LU` with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
    norm_inf: T,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &ComplexMatrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape(format!(
                "LU of a non-square {}x{} matrix",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let norm_inf = a.norm_inf();
        let threshold = pivot_threshold::<T>() * norm_inf;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, -T::one()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if !(pmax > threshold) || (norm_inf == T::zero()) {
                return Err(Error::SingularMatrix {
                    step: k,
                    pivot: pmax.to_f64().unwrap_or(f64::NAN),
                });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - factor * u;
                }
            }
        }
        Ok(Lu { lu, perm, norm_inf })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    pub fn solve_vec(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Shape(format!(
                "right-hand side of length {} for a {n}x{n} system",
                b.len()
            )));
        }
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn solve(&self, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if b.rows != self.dim() {
            return Err(Error::Shape(format!(
                "right-hand side with {} rows for a {}x{} system",
                b.rows,
                self.dim(),
                self.dim()
            )));
        }
        let mut out = ComplexMatrix::zeros(b.rows, b.cols);
        for j in 0..b.cols {
            let x = self.solve_vec(&b.col(j))?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix<T>> {
        self.solve(&ComplexMatrix::identity(self.dim()))
    }

    /// `‖A‖∞·‖A⁻¹‖∞`, formed from the explicit inverse.
    pub fn condition_estimate(&self) -> Result<T> {
        Ok(self.norm_inf * self.inverse()?.norm_inf())
    }
}

/// Solution of `AX = B` together with the `∞`-norm condition estimate of `A`.
#[derive(Debug, Clone)]
pub struct Solved<T> {
    pub x: ComplexMatrix<T>,
    pub condition: T,
}

pub fn solve<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<Solved<T>> {
    let lu = Lu::factor(a)?;
    Ok(Solved {
        x: lu.solve(b)?,
        condition: lu.condition_estimate()?,
    })
}

/// Singular value decomposition `A = U Σ Vᴴ`.
///
/// `u` is `rows × cols`; columns belonging to zero singular values are zero.
/// `v` is square and unitary. Singular values are sorted non-increasing.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let (m, n) = (self.u.rows, self.v.rows);
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, l| {
                acc + self.u[(i, l)] * self.v[(j, l)].conj() * self.singular_values[l]
            })
        })
    }

    pub fn sigma_max(&self) -> T {
        self.singular_values
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Number of singular values above `tol·σ_max`.
    pub fn rank(&self, tol: T) -> usize {
        let cutoff = tol * self.sigma_max();
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }
}

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Svd<T> {
    let (m, n) = (a.rows, a.cols);
    // column-major working copies
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex::zero(); n];
            e[j] = Complex::new(T::one(), T::zero());
            e
        })
        .collect();
    let eps = T::epsilon();
    let scale2 = a.norm_fro().powi(2);
    let floor = eps * eps * scale2;

    let mut norms: Vec<T> = cols.iter().map(|c| sq_norm(c)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                let gamma = inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() || g <= floor {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (lit::<T>(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = c * t;
                let omega = gamma / g;
                rotate(&mut cols, p, q, c, s, omega);
                rotate(&mut v, p, q, c, s, omega);
                norms[p] = sq_norm(&cols[p]);
                norms[q] = sq_norm(&cols[q]);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<T> = norms.iter().map(|x| x.sqrt()).collect();
    order.sort_by(|&i, &j| {
        sig[j]
            .partial_cmp(&sig[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut u = ComplexMatrix::zeros(m, n);
    let mut vm = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let s = sig[src];
        singular_values.push(s);
        if s > T::zero() {
            for i in 0..m {
                u[(i, dst)] = cols[src][i] / s;
            }
        }
        for i in 0..n {
            vm[(i, dst)] = v[src][i];
        }
    }
    Svd {
        u,
        singular_values,
        v: vm,
    }
}

#[inline]
fn sq_norm<T: Real>(c: &[Complex<T>]) -> T {
    c.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// `aᴴ b`
#[inline]
fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc, (x, &y)| acc + x.conj() * y)
}

/// `[a_p, a_q] ← [a_p, a_q]·[[c, sω], [−sω̄, c]]`
fn rotate<T: Real>(
    cols: &mut [Vec<Complex<T>>],
    p: usize,
    q: usize,
    c: T,
    s: T,
    omega: Complex<T>,
) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    let so = omega * s;
    let sob = omega.conj() * s;
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = xp * c - sob * xq;
        *y = so * xp + xq * c;
    }
}

/// Numerical rank and an orthonormal basis of the numerical null space.
#[derive(Debug, Clone)]
pub struct NullSpace<T> {
    pub rank: usize,
    pub basis: Vec<Vec<Complex<T>>>,
    pub singular_values: Vec<T>,
}

/// Right null space of `a`: singular vectors whose singular value is at most
/// `tol·σ_max`. A zero matrix has rank 0 and the full coordinate space as
/// null space.
pub fn null_space<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<NullSpace<T>> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::Shape("null space of an empty matrix".into()));
    }
    if !(tol > T::zero() && tol < T::one()) {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let dec = svd(a);
    let rank = dec.rank(tol);
    let basis = (rank..a.cols).map(|j| dec.v.col(j)).collect();
    Ok(NullSpace {
        rank,
        basis,
        singular_values: dec.singular_values,
    })
}

/// Eigenvalues of a small square matrix by shifted QR on the Hessenberg form.
pub fn eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    if !a.is_square() {
        return Err(Error::Shape("eigenvalues of a non-square matrix".into()));
    }
    let mut h = hessenberg(a);
    let mut out = Vec::with_capacity(a.rows);
    let mut hi = a.rows;
    let eps = T::epsilon();
    let mut iter = 0usize;
    while hi > 0 {
        if hi == 1 {
            out.push(h[(0, 0)]);
            break;
        }
        // deflate on a negligible sub-diagonal
        let l = hi - 1;
        let sub = h[(l, l - 1)].norm();
        if sub <= eps * (h[(l, l)].norm() + h[(l - 1, l - 1)].norm()) || sub == T::zero() {
            out.push(h[(l, l)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 500 {
            return Err(Error::InvalidArgument(
                "QR iteration did not converge".into(),
            ));
        }
        let shift = if iter % 11 == 0 {
            // exceptional shift
            h[(l, l)] + Complex::new(sub, T::zero())
        } else {
            wilkinson_shift(h[(l - 1, l - 1)], h[(l - 1, l)], h[(l, l - 1)], h[(l, l)])
        };
        qr_step(&mut h, hi, shift);
    }
    Ok(out)
}

fn wilkinson_shift<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let half = lit::<T>(0.5);
    let tr = (a + d) * half;
    let det = a * d - b * c;
    let disc = (tr * tr - det).sqrt();
    let (l1, l2) = (tr + disc, tr - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = a.rows;
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        for i in k + 2..n {
            let x = h[(k + 1, k)];
            let y = h[(i, k)];
            if y.is_zero() {
                continue;
            }
            let (c, s) = givens(x, y);
            apply_givens_rows(&mut h, k + 1, i, c, s, 0, n);
            apply_givens_cols(&mut h, k + 1, i, c, s, n);
        }
    }
    h
}

/// Givens rotation with real `c` zeroing `y` against `x`:
/// `[c, s; −s̄, c]·[x; y] = [r; 0]`.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let nx = x.norm();
    let ny = y.norm();
    let r = nx.hypot(ny);
    if nx == T::zero() {
        return (T::zero(), (y.conj() / ny));
    }
    let phase = x / nx;
    (nx / r, phase * y.conj() / r)
}

fn apply_givens_rows<T: Real>(
    h: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    c: T,
    s: Complex<T>,
    from: usize,
    to: usize,
) {
    for j in from..to {
        let (x, y) = (h[(p, j)], h[(q, j)]);
        h[(p, j)] = x * c + s * y;
        h[(q, j)] = -s.conj() * x + y * c;
    }
}

fn apply_givens_cols<T: Real>(
    h: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    c: T,
    s: Complex<T>,
    to: usize,
) {
    for i in 0..to {
        let (x, y) = (h[(i, p)], h[(i, q)]);
        h[(i, p)] = x * c + y * s.conj();
        h[(i, q)] = -x * s + y * c;
    }
}

fn qr_step<T: Real>(h: &mut ComplexMatrix<T>, hi: usize, shift: Complex<T>) {
    let n = h.rows;
    for i in 0..hi {
        h[(i, i)] = h[(i, i)] - shift;
    }
    let mut rots = Vec::with_capacity(hi);
    for k in 0..hi - 1 {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        apply_givens_rows(h, k, k + 1, c, s, 0, n);
        rots.push((c, s));
    }
    for (k, &(c, s)) in rots.iter().enumerate() {
        apply_givens_cols(h, k, k + 1, c, s, n);
    }
    for i in 0..hi {
        h[(i, i)] = h[(i, i)] + shift;
    }
}
