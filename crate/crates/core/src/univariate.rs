//! Just enough dense univariate polynomial arithmetic over `ℚ` to count the
//! distinct roots of a cubic.

use num_traits::{One, Zero};

use crate::forms::Scalar;

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_integer((i as i64).into()))
                .collect(),
        )
    }

    fn rem(&self, div: &Poly) -> Poly {
        let dd = div.degree().expect("division by the zero polynomial");
        let lead = div.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let factor = r[r.len() - 1].clone() / &lead;
            for (i, c) in div.0.iter().enumerate() {
                r[shift + i] -= &factor * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    fn monic(&self) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.recip();
                Poly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Number of distinct complex roots.
    pub fn distinct_roots(&self) -> usize {
        match self.degree() {
            None | Some(0) => 0,
            Some(d) => {
                let g = self.gcd(&self.derivative());
                d - g.degree().unwrap_or(0)
            }
        }
    }

    /// Lagrange interpolation through `(xᵢ, yᵢ)` with distinct `xᵢ`.
    pub fn interpolate(points: &[(Scalar, Scalar)]) -> Poly {
        let n = points.len();
        let mut acc = vec![Scalar::zero(); n];
        for (i, (xi, yi)) in points.iter().enumerate() {
            // basis polynomial Π_{j≠i} (x − xⱼ)/(xᵢ − xⱼ)
            let mut basis = vec![Scalar::one()];
            let mut denom = Scalar::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![Scalar::zero(); basis.len() + 1];
                for (k, c) in basis.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * xj;
                }
                basis = next;
                denom *= xi - xj;
            }
            let scale = yi / denom;
            for (k, c) in basis.iter().enumerate() {
                acc[k] += c * &scale;
            }
        }
        Poly::new(acc)
    }
}
