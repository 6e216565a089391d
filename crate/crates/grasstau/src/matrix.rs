//! Dense matrices over [`Scalar`].
//!
//! Determinants use fraction-free Bareiss elimination on the exact lane and
//! partially pivoted LU on the complex lane. Rank is computed exactly for
//! rational matrices; for complex ones it counts singular values above a
//! relative threshold, with the singular values obtained from a Jacobi
//! eigensolver on the Gram matrix (the blocks here are tiny).

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{}", self.at(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn is_all_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn to_complex(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| Scalar::Cpx(self.at(r, c).to_complex()))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| f(self.at(r, c)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c) + &(a * b);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for c in 0..self.cols {
                    if !v[c].is_zero() {
                        acc += &(self.at(r, c) * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols, "pow: square matrix required");
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self.at(rows[r], cols[c]).clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols { self.at(r, c).clone() } else { other.at(r, c - self.cols).clone() }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack: col mismatch");
        Matrix::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows { self.at(r, c).clone() } else { other.at(r - self.rows, c).clone() }
        })
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "det: square matrix required");
        if self.rows == 0 {
            return Scalar::one();
        }
        if self.is_all_rational() {
            self.det_bareiss()
        } else {
            self.det_complex()
        }
    }

    /// One-step fraction-free Bareiss elimination. Divisions are exact, so
    /// intermediate entries stay the size of minors of the input.
    fn det_bareiss(&self) -> Scalar {
        let n = self.rows;
        let mut a: Vec<Vec<Scalar>> = (0..n).map(|r| self.row(r)).collect();
        let mut sign = 1i64;
        let mut prev = Scalar::one();
        for p in 0..n - 1 {
            let pivot = match (p..n).find(|&r| !a[r][p].is_zero()) {
                Some(r) => r,
                None => return Scalar::zero(),
            };
            if pivot != p {
                a.swap(p, pivot);
                sign = -sign;
            }
            for i in p + 1..n {
                for j in p + 1..n {
                    let num = &(&a[i][j] * &a[p][p]) - &(&a[i][p] * &a[p][j]);
                    a[i][j] = &num / &prev;
                }
                a[i][p] = Scalar::zero();
            }
            prev = a[p][p].clone();
        }
        &Scalar::int(sign) * &a[n - 1][n - 1]
    }

    fn det_complex(&self) -> Scalar {
        let n = self.rows;
        let mut a: Vec<Vec<Complex64>> =
            (0..n).map(|r| (0..n).map(|c| self.at(r, c).to_complex()).collect()).collect();
        let mut det = Complex64::new(1.0, 0.0);
        for p in 0..n {
            let pivot = (p..n).max_by(|&x, &y| a[x][p].norm().total_cmp(&a[y][p].norm())).unwrap();
            if a[pivot][p].norm() == 0.0 {
                return Scalar::c(0.0, 0.0);
            }
            if pivot != p {
                a.swap(p, pivot);
                det = -det;
            }
            det *= a[p][p];
            for i in p + 1..n {
                let f = a[i][p] / a[p][p];
                for j in p..n {
                    let t = a[p][j];
                    a[i][j] -= f * t;
                }
            }
        }
        Scalar::Cpx(det)
    }

    /// Rank: exact Gaussian elimination on the rational lane; on the complex
    /// lane, the number of singular values above `tol` times the largest.
    pub fn rank(&self, tol: f64) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.is_all_rational() {
            self.rank_exact()
        } else {
            let sv = self.singular_values();
            let top = sv.first().copied().unwrap_or(0.0);
            if top <= 0.0 {
                return 0;
            }
            sv.iter().filter(|&&s| s > tol * top).count()
        }
    }

    fn rank_exact(&self) -> usize {
        let mut a: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.row(r)).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, p);
            let inv = a[rank][c].inv().expect("nonzero pivot");
            for j in c..self.cols {
                a[rank][j] = &a[rank][j] * &inv;
            }
            for i in 0..self.rows {
                if i != rank && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..self.cols {
                        let t = &a[rank][j] * &f;
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Singular values in descending order, via Jacobi iteration on the
    /// Hermitian Gram matrix. Intended for the small blocks handled here.
    pub fn singular_values(&self) -> Vec<f64> {
        let m = self.cols;
        let a: Vec<Vec<Complex64>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).to_complex()).collect())
            .collect();
        // Gram matrix A^H A.
        let mut b = vec![vec![Complex64::new(0.0, 0.0); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..self.rows {
                    acc += a[r][i].conj() * a[r][j];
                }
                b[i][j] = acc;
            }
        }
        let scale = (0..m).map(|i| b[i][i].re).fold(0.0f64, f64::max).max(1e-300);
        for _sweep in 0..60 {
            let mut off = 0.0f64;
            for p in 0..m {
                for q in p + 1..m {
                    off = off.max(b[p][q].norm());
                }
            }
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..m {
                for q in p + 1..m {
                    let bpq = b[p][q];
                    if bpq.norm() <= 1e-18 * scale {
                        continue;
                    }
                    let app = b[p][p].re;
                    let aqq = b[q][q].re;
                    let beta = bpq.arg();
                    let theta = if app == aqq {
                        std::f64::consts::FRAC_PI_4
                    } else {
                        0.5 * (2.0 * bpq.norm() / (app - aqq)).atan()
                    };
                    let (cs, sn) = (theta.cos(), theta.sin());
                    let eip = Complex64::from_polar(1.0, beta);
                    // Columns p, q of the unitary update.
                    for i in 0..m {
                        let bip = b[i][p];
                        let biq = b[i][q];
                        b[i][p] = bip * cs + biq * eip.conj() * sn;
                        b[i][q] = -bip * eip * sn + biq * cs;
                    }
                    for j in 0..m {
                        let bpj = b[p][j];
                        let bqj = b[q][j];
                        b[p][j] = bpj * cs + bqj * eip * sn;
                        b[q][j] = -bpj * eip.conj() * sn + bqj * cs;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..m).map(|i| b[i][i].re.max(0.0).sqrt()).collect();
        ev.sort_by(|x, y| y.total_cmp(x));
        ev
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let rational = self.is_all_rational();
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row = self.row(r);
                row.extend((0..n).map(|c| if c == r { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        for p in 0..n {
            let pivot = if rational {
                (p..n).find(|&r| !a[r][p].is_zero())
            } else {
                (p..n)
                    .filter(|&r| !a[r][p].is_zero())
                    .max_by(|&x, &y| a[x][p].modulus().total_cmp(&a[y][p].modulus()))
            };
            let Some(pivot) = pivot else {
                return Err(Error::Singular("matrix not invertible".into()));
            };
            a.swap(p, pivot);
            let inv = a[p][p].inv()?;
            for j in 0..2 * n {
                a[p][j] = &a[p][j] * &inv;
            }
            for i in 0..n {
                if i != p && !a[i][p].is_zero() {
                    let f = a[i][p].clone();
                    for j in 0..2 * n {
                        let t = &a[p][j] * &f;
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
        }
        Ok(Matrix::from_fn(n, n, |r, c| a[r][n + c].clone()))
    }

    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        self.pow(self.rows as u32).is_zero()
    }

    /// Terminating exponential series for a nilpotent matrix; exact on the
    /// rational lane.
    pub fn exp_nilpotent(&self) -> Result<Matrix> {
        if !self.is_nilpotent() {
            return Err(Error::ExactUnsupported(
                "matrix exponential of a non-nilpotent matrix needs the float lane".into(),
            ));
        }
        let n = self.rows;
        let mut sum = Matrix::identity(n);
        let mut term = Matrix::identity(n);
        for j in 1..n {
            term = term.mul(self).scale(&Scalar::int(j as i64).inv().expect("j > 0"));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        Ok(sum)
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Scaling-and-squaring matrix exponential on the complex lane: scale to
    /// norm at most 1/2, sum the Taylor series, square back.
    pub fn expm(&self) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let a = self.to_complex();
        let norm = a.norm_inf();
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil().max(0.0) as u32 } else { 0 };
        let scaled = a.scale(&Scalar::re(0.5f64.powi(s as i32)));
        let n = self.rows;
        let mut sum = Matrix::identity(n).to_complex();
        let mut term = Matrix::identity(n).to_complex();
        for j in 1..=30u32 {
            term = term.mul(&scaled).scale(&Scalar::re(1.0 / j as f64));
            sum = sum.add(&term);
            if term.norm_inf() <= 1e-19 * sum.norm_inf() {
                break;
            }
        }
        let mut out = sum;
        for _ in 0..s {
            out = out.mul(&out);
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }
}

pub fn outer(u: &[Scalar], v: &[Scalar]) -> Matrix {
    Matrix::from_fn(u.len(), v.len(), |r, c| &u[r] * &v[c])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::int(v)).collect()).collect(),
        )
        .unwrap()
    }

    /// Cofactor-expansion determinant: an independent oracle for Bareiss.
    fn det_cofactor(m: &Matrix) -> Scalar {
        let n = m.rows();
        if n == 0 {
            return Scalar::one();
        }
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = Scalar::zero();
        let cols: Vec<usize> = (1..n).collect();
        for r in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&i| i != r).collect();
            let minor = det_cofactor(&m.submatrix(&rows, &cols));
            let signed = if r % 2 == 0 { minor } else { -minor };
            acc += &(m.at(r, 0) * &signed);
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let cases = [
            mat(&[&[2, 1], &[7, 4]]),
            mat(&[&[0, 1, 2], &[3, 0, 5], &[1, 1, 1]]),
            mat(&[&[1, 2, 3, 4], &[0, 0, 1, 2], &[5, -3, 2, 2], &[1, 1, 1, 1]]),
            mat(&[&[0, 0], &[0, 0]]),
        ];
        for m in cases {
            assert_eq!(m.det(), det_cofactor(&m));
        }
    }

    #[test]
    fn bareiss_handles_rational_entries() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::rat(1, 2), Scalar::rat(1, 3)],
            vec![Scalar::rat(1, 5), Scalar::rat(1, 7)],
        ])
        .unwrap();
        assert_eq!(m.det(), Scalar::rat(1, 14) - Scalar::rat(1, 15));
    }

    #[test]
    fn complex_det_and_rank() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::c(0.0, 1.0), Scalar::re(1.0)],
            vec![Scalar::re(1.0), Scalar::c(0.0, -1.0)],
        ])
        .unwrap();
        // det = i*(-i) - 1 = 0
        assert!(m.det().modulus() < 1e-12);
        assert_eq!(m.rank(1e-9), 1);
    }

    #[test]
    fn exact_rank_counts_pivots() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(0.0), 2);
        assert_eq!(Matrix::zeros(3, 2).rank(0.0), 0);
        assert_eq!(Matrix::identity(4).rank(0.0), 4);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn nilpotent_exponential_terminates() {
        // Shift-type nilpotent.
        let mut s = Matrix::zeros(3, 3);
        s.set(1, 0, Scalar::one());
        s.set(2, 1, Scalar::one());
        let e = s.exp_nilpotent().unwrap();
        assert_eq!(e.at(2, 0), &Scalar::rat(1, 2));
        assert_eq!(e.at(1, 0), &Scalar::one());
        assert!(Matrix::identity(2).exp_nilpotent().is_err());
    }

    #[test]
    fn expm_matches_diagonal_closed_form() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::re(1.0), Scalar::zero()],
            vec![Scalar::zero(), Scalar::re(-2.0)],
        ])
        .unwrap();
        let e = m.expm();
        assert!((e.at(0, 0).to_complex().re - 1f64.exp()).abs() < 1e-12);
        assert!((e.at(1, 1).to_complex().re - (-2f64).exp()).abs() < 1e-12);
        assert!(e.at(0, 1).modulus() < 1e-15);
    }

    #[test]
    fn singular_values_of_projection() {
        let m = mat(&[&[3, 0], &[0, 4], &[0, 0]]);
        let sv = m.singular_values();
        assert!((sv[0] - 4.0).abs() < 1e-10);
        assert!((sv[1] - 3.0).abs() < 1e-10);
    }
}
