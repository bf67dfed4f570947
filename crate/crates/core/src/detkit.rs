//! Small dense determinants and the Vandermonde, Cauchy and Ishikawa
//! determinant identities.

use std::ops::{Index, IndexMut};

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use crate::error::{domain, Error, Result};

/// Scalars the LU determinant works over.
pub trait Scalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    fn modulus(self) -> f64;
    fn real(x: f64) -> Self;
    /// `self / p`.
    fn ratio(self, p: Self) -> Self {
        self / p
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn real(x: f64) -> Self {
        x
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

/// Complex numbers in double-double precision, for determinants whose
/// LU factorisation cancels too much in `f64`.
pub type WideComplex = Complex<TwoFloat>;

impl Scalar for WideComplex {
    const ZERO: Self = Complex::new(TwoFloat::from_f64(0.0), TwoFloat::from_f64(0.0));
    const ONE: Self = Complex::new(TwoFloat::from_f64(1.0), TwoFloat::from_f64(0.0));
    fn modulus(self) -> f64 {
        self.re.hi().hypot(self.im.hi())
    }
    fn real(x: f64) -> Self {
        Complex::new(TwoFloat::from(x), TwoFloat::from(0.0))
    }
    // `TwoFloat` division is only accurate to `f64` precision, so divide
    // through a Newton-refined reciprocal of `|p|²` instead.
    fn ratio(self, p: Self) -> Self {
        let d = p.re * p.re + p.im * p.im;
        let r0 = TwoFloat::from(1.0 / d.hi());
        let r = r0 + r0 * (TwoFloat::from(1.0) - d * r0);
        self * p.conj() * Complex::new(r, TwoFloat::from(0.0))
    }
}

pub fn widen(z: Complex64) -> WideComplex {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

pub fn narrow(z: WideComplex) -> Complex64 {
    Complex64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

/// Determinant of the `n×n` row-major matrix `a`, destroyed in the process,
/// by LU factorisation with partial pivoting.
pub fn det_in_place<T: Scalar>(a: &mut [T], n: usize) -> T {
    debug_assert_eq!(a.len(), n * n);
    let mut det = T::ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i * n + col]
                    .modulus()
                    .total_cmp(&a[j * n + col].modulus())
            })
            .expect("nonempty");
        if a[pivot * n + col].modulus() == 0.0 {
            return T::ZERO;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det = det * p;
        for row in col + 1..n {
            let factor = a[row * n + col].ratio(p);
            if factor.modulus() == 0.0 {
                continue;
            }
            for k in col + 1..n {
                let v = a[col * n + k];
                a[row * n + k] = a[row * n + k] - factor * v;
            }
        }
    }
    det
}

/// Determinant of a real square matrix given row-major.
pub fn det_real(entries: &[f64], n: usize) -> f64 {
    det_in_place(&mut entries.to_vec(), n)
}

/// A dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(domain("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(domain("matrix entries must be finite"));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                got: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        }))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Determinant of a square complex matrix.
pub fn det(m: &ComplexMatrix) -> Result<Complex64> {
    if m.rows != m.cols {
        return Err(Error::Dimension {
            expected: m.rows,
            got: m.cols,
        });
    }
    Ok(det_in_place(&mut m.entries.clone(), m.rows))
}

/// `h_n(x) = Π_{1≤j<k≤n} (x_k - x_j)` over the first `n` entries of `x`.
pub fn vandermonde_product<T: Scalar>(x: &[T], n: usize) -> Result<T> {
    if x.len() < n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    let mut acc = T::ONE;
    for k in 0..n {
        for j in 0..k {
            acc = acc * (x[k] - x[j]);
        }
    }
    Ok(acc)
}

/// The matrix `V^{p,q}(x; a)` whose `j`-th row is
/// `(1, x_j, …, x_j^{p-1}, a_j, a_j x_j, …, a_j x_j^{q-1})`.
pub fn gen_vandermonde_matrix(
    p: usize,
    q: usize,
    x: &[Complex64],
    a: &[Complex64],
) -> Result<ComplexMatrix> {
    let n = p + q;
    if n == 0 {
        return Err(domain("generalized Vandermonde matrix needs p + q ≥ 1"));
    }
    for len in [x.len(), a.len()] {
        if len != n {
            return Err(Error::Dimension {
                expected: n,
                got: len,
            });
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |j, k| {
        if k < p {
            x[j].powu(k as u32)
        } else {
            a[j] * x[j].powu((k - p) as u32)
        }
    }))
}

/// `det V^{p,q}(x; a)`; `p = q = 0` gives the empty determinant `1`.
pub fn gen_vandermonde_det(
    p: usize,
    q: usize,
    x: &[Complex64],
    a: &[Complex64],
) -> Result<Complex64> {
    if p + q == 0 {
        return Ok(Complex64::ONE);
    }
    det(&gen_vandermonde_matrix(p, q, x, a)?)
}

/// `det[1/(x_j + y_k)]`.
pub fn cauchy_det(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: y.len(),
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    for xj in x {
        for yk in y {
            let s = xj + yk;
            if s.norm() == 0.0 {
                return Err(Error::Singular("Cauchy determinant"));
            }
            entries.push(1.0 / s);
        }
    }
    Ok(det_in_place(&mut entries, n))
}

/// The Cauchy closed form `h_n(x) h_n(y) / Π_{j,k} (x_j + y_k)`.
pub fn cauchy_closed_form(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: y.len(),
        });
    }
    let mut denom = Complex64::ONE;
    for xj in x {
        for yk in y {
            denom *= xj + yk;
        }
    }
    if denom.norm() == 0.0 {
        return Err(Error::Singular("Cauchy determinant"));
    }
    Ok(vandermonde_product(x, n)? * vandermonde_product(y, n)? / denom)
}

fn check_lengths(n: usize, seqs: &[&[Complex64]]) -> Result<()> {
    for s in seqs {
        if s.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: s.len(),
            });
        }
    }
    Ok(())
}

fn cross_product(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    let mut prod = Complex64::ONE;
    for xj in x {
        for yk in y {
            let d = yk - xj;
            if d.norm() == 0.0 {
                return Err(Error::Coincident { separation: 0.0 });
            }
            prod *= d;
        }
    }
    Ok(prod)
}

fn sign_of_pairs(n: usize) -> f64 {
    if (n * (n.saturating_sub(1)) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Both sides of the Ishikawa determinant identity
///
/// `det[(b_k - a_j)/(y_k - x_j)] = (-1)^{n(n-1)/2} / Π(y_k - x_j) · det V^{n,n}(x, y; a, b)`.
pub fn ishikawa_both_sides(
    x: &[Complex64],
    y: &[Complex64],
    a: &[Complex64],
    b: &[Complex64],
) -> Result<(Complex64, Complex64)> {
    let n = x.len();
    if n == 0 {
        return Err(domain("Ishikawa identity needs n ≥ 1"));
    }
    check_lengths(n, &[y, a, b])?;
    let prod = cross_product(x, y)?;
    let mut lhs = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            lhs.push((b[k] - a[j]) / (y[k] - x[j]));
        }
    }
    let lhs = det_in_place(&mut lhs, n);
    let xy: Vec<Complex64> = x.iter().chain(y).copied().collect();
    let ab: Vec<Complex64> = a.iter().chain(b).copied().collect();
    let rhs = sign_of_pairs(n) / prod * gen_vandermonde_det(n, n, &xy, &ab)?;
    Ok((lhs, rhs))
}

/// Both sides of the general `(p, q)` Ishikawa identity
///
/// `det[det V^{p+1,q+1}(x_j, y_k, z; a_j, b_k, c) / (y_k - x_j)]
///   = (-1)^{n(n-1)/2} / Π(y_k - x_j) · det V^{p,q}(z; c)^{n-1} · det V^{n+p,n+q}(x, y, z; a, b, c)`,
///
/// supported for `p + q ≤ 4`.
#[allow(clippy::too_many_arguments)]
pub fn ishikawa_general_both_sides(
    p: usize,
    q: usize,
    x: &[Complex64],
    y: &[Complex64],
    a: &[Complex64],
    b: &[Complex64],
    z: &[Complex64],
    c: &[Complex64],
) -> Result<(Complex64, Complex64)> {
    if p + q > 4 {
        return Err(Error::Unsupported(format!(
            "Ishikawa identity with p + q = {} > 4",
            p + q
        )));
    }
    let n = x.len();
    if n == 0 {
        return Err(domain("Ishikawa identity needs n ≥ 1"));
    }
    check_lengths(n, &[y, a, b])?;
    check_lengths(p + q, &[z, c])?;
    let prod = cross_product(x, y)?;
    let mut lhs = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let xs: Vec<Complex64> = [x[j], y[k]].into_iter().chain(z.iter().copied()).collect();
            let cs: Vec<Complex64> = [a[j], b[k]].into_iter().chain(c.iter().copied()).collect();
            lhs.push(gen_vandermonde_det(p + 1, q + 1, &xs, &cs)? / (y[k] - x[j]));
        }
    }
    let lhs = det_in_place(&mut lhs, n);
    let small = gen_vandermonde_det(p, q, z, c)?;
    let xs: Vec<Complex64> = x.iter().chain(y).chain(z).copied().collect();
    let cs: Vec<Complex64> = a.iter().chain(b).chain(c).copied().collect();
    let big = gen_vandermonde_det(n + p, n + q, &xs, &cs)?;
    let rhs = sign_of_pairs(n) / prod * small.powu(n as u32 - 1) * big;
    Ok((lhs, rhs))
}
