//! Univariate polynomials over the Gaussian rationals, plus the jet map
//! `F_n(f) = (f, f + f', …, f + f^{(n-1)})` and the multiplicity part.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;

/// Coefficients `c_0 … c_d` in ascending order; no trailing zeros, so the
/// zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    coeffs: Vec<GaussRat>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(GaussRat::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussRat) -> Self {
        RationalPoly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RationalPoly::new(coeffs.iter().map(|&c| GaussRat::from_ints(c, 0)).collect())
    }

    /// `∏ (z - α)^m` over the given roots.
    pub fn from_roots(roots: &[(GaussRat, u32)]) -> Self {
        let mut p = RationalPoly::constant(GaussRat::one());
        for (alpha, m) in roots {
            let lin = RationalPoly::new(vec![-alpha, GaussRat::one()]);
            for _ in 0..*m {
                p = p.mul(&lin);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(GaussRat::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => RationalPoly::zero(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                RationalPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn add(&self, o: &RationalPoly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = GaussRat::zero();
        RationalPoly::new(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) + o.coeffs.get(i).unwrap_or(&zero)).collect(),
        )
    }

    pub fn sub(&self, o: &RationalPoly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = GaussRat::zero();
        RationalPoly::new(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) - o.coeffs.get(i).unwrap_or(&zero)).collect(),
        )
    }

    pub fn mul(&self, o: &RationalPoly) -> Self {
        if self.is_zero() || o.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        RationalPoly::new(out)
    }

    /// Formal derivative of the given order; zero once the order exceeds the degree.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(i, c)| c.scale(&BigRational::from_integer(falling_factorial(i, order))))
            .collect();
        RationalPoly::new(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        self.coeffs.iter().rev().fold(GaussRat::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RationalPoly) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussRat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let q = &rem[top] * &inv;
            let shift = top - dd;
            for (k, dc) in d.coeffs.iter().enumerate() {
                rem[shift + k] -= &(&q * dc);
            }
            quot[shift] = q;
            rem.pop();
            while rem.last().is_some_and(GaussRat::is_zero) {
                rem.pop();
            }
        }
        (RationalPoly::new(quot), RationalPoly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &RationalPoly) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

pub(crate) fn falling_factorial(i: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, t| acc * BigInt::from(i - t))
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            // real coefficients fold their sign into the separator
            let negative_real = c.im.is_zero() && c.re.is_negative();
            let shown = if negative_real { -c } else { c.clone() };
            match (first, negative_real) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let coeff = if shown.im.is_zero() { shown.to_string() } else { format!("({shown})") };
            match (i, shown.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{coeff}*z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{coeff}*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// The n-tuple `(f, f + f', …, f + f^{(n-1)})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetTuple(Vec<RationalPoly>);

impl JetTuple {
    pub fn entries(&self) -> &[RationalPoly] {
        &self.0
    }

    pub fn eval(&self, x: &GaussRat) -> Vec<GaussRat> {
        self.0.iter().map(|p| p.eval(x)).collect()
    }
}

pub fn jet(f: &RationalPoly, n: usize) -> Result<JetTuple> {
    if n == 0 {
        return Err(Error::invalid("jet order must be positive"));
    }
    Ok(JetTuple((0..n).map(|j| if j == 0 { f.clone() } else { f.add(&f.derivative(j)) }).collect()))
}

/// `gcd(f, f', …, f^{(n-1)})`, monic: the roots of `f` of multiplicity at
/// least `n`, each with multiplicity lowered by `n - 1`.
pub fn mult_part(f: &RationalPoly, n: usize) -> Result<RationalPoly> {
    if f.is_zero() {
        return Err(Error::invalid("multiplicity part of the zero polynomial"));
    }
    if n == 0 {
        return Err(Error::invalid("multiplicity bound must be positive"));
    }
    let mut g = f.monic();
    for j in 1..n {
        if g.degree() == Some(0) {
            break;
        }
        g = g.gcd(&f.derivative(j));
    }
    Ok(g)
}

/// `f_b(z) = b_0 + Σ_{k≥1} (b_k - b_0) z^k / k!`, whose jet at zero is `b`.
pub fn jet_section(b: &[GaussRat]) -> Result<RationalPoly> {
    let b0 = b.first().ok_or_else(|| Error::invalid("jet section of an empty vector"))?;
    let mut coeffs = vec![b0.clone()];
    let mut fact = BigInt::from(1);
    for (k, bk) in b.iter().enumerate().skip(1) {
        fact *= BigInt::from(k);
        coeffs.push((bk - b0).scale(&BigRational::new(1.into(), fact.clone())));
    }
    Ok(RationalPoly::new(coeffs))
}
