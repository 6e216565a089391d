//! Minimal dense univariate polynomials over [`Scalar`], used where a
//! determinant has to be differentiated before it is evaluated.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    /// coeffs[i] is the coefficient of x^i; no trailing zeros.
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
            out.push(a + b);
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Poly::from_coeffs(out)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &Scalar::int((i + 1) as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// the first column. Sizes here are tiny, so the factorial cost is fine.
pub fn det_poly(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::constant(Scalar::one());
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for r in 0..n {
        if m[r][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = (0..n)
            .filter(|&i| i != r)
            .map(|i| m[i][1..].to_vec())
            .collect();
        let term = m[r][0].mul(&det_poly(&minor));
        acc = if r % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        // (1 + x)(1 - x) = 1 - x^2
        let p = Poly::from_coeffs(vec![Scalar::int(1), Scalar::int(1)]);
        let q = Poly::from_coeffs(vec![Scalar::int(1), Scalar::int(-1)]);
        let pq = p.mul(&q);
        assert_eq!(pq, Poly::from_coeffs(vec![Scalar::int(1), Scalar::zero(), Scalar::int(-1)]));
        assert_eq!(pq.eval(&Scalar::int(3)), Scalar::int(-8));
        assert_eq!(pq.derivative().eval(&Scalar::int(3)), Scalar::int(-6));
    }

    #[test]
    fn det_poly_matches_scalar_det() {
        // det [[1+x, 2], [3, 4]] = 4 + 4x - 6
        let m = vec![
            vec![Poly::from_coeffs(vec![Scalar::int(1), Scalar::int(1)]), Poly::constant(Scalar::int(2))],
            vec![Poly::constant(Scalar::int(3)), Poly::constant(Scalar::int(4))],
        ];
        let d = det_poly(&m);
        assert_eq!(d, Poly::from_coeffs(vec![Scalar::int(-2), Scalar::int(4)]));
    }
}
