//! Exact certification of confluent Vandermonde ranks and of the
//! dimension of Hermite interpolation spaces of monic polynomials.
//!
//! No floating point: matrices are cleared to integers row by row and
//! reduced by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::DegreeVector;
use crate::poly::falling_factorial;

/// Rectangular matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        ExactMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        ExactMatrix::from_rows(rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    fn vstack(mut self, other: ExactMatrix) -> Self {
        if self.rows == 0 {
            return other;
        }
        assert_eq!(self.cols, other.cols);
        self.rows += other.rows;
        self.data.extend(other.data);
        self
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }
}

/// Fraction-free row echelon form. Returns the reduced rows and the pivot
/// column of each nonzero row.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = &a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        pivots.push(col);
        rank += 1;
    }
    (a, pivots)
}

/// Rank over the rationals.
pub fn exact_rank(m: &ExactMatrix) -> usize {
    bareiss(m.integer_rows(), m.cols).1.len()
}

fn check_distinct(points: &[BigRational]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if let Some(j) = points[i + 1..].iter().position(|b| b == a) {
            return Err(Error::invalid(format!("interpolation points {i} and {} coincide", i + 1 + j)));
        }
    }
    Ok(())
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Row `j` holds the coefficients of `a_0 … a_{d-1}` in `f^{(l)}(x_j)` for
/// `f = z^d + Σ a_i z^i`.
pub fn confluent_vandermonde(points: &[BigRational], l: usize, d: usize) -> Result<ExactMatrix> {
    check_distinct(points)?;
    if d == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let rows = points
        .iter()
        .map(|x| {
            (0..d)
                .map(|i| {
                    if i < l {
                        BigRational::zero()
                    } else {
                        BigRational::from_integer(falling_factorial(i, l)) * pow(x, i - l)
                    }
                })
                .collect()
        })
        .collect();
    Ok(ExactMatrix::from_rows(rows))
}

/// Derivative orders `0 … n-1` stacked into an `nk x d` matrix.
pub fn stacked_system(points: &[BigRational], n: usize, d: usize) -> Result<ExactMatrix> {
    let mut m = ExactMatrix::zeros(0, d);
    for l in 0..n {
        m = m.vstack(confluent_vandermonde(points, l, d)?);
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankClaim {
    pub rank: usize,
    pub expected: usize,
    /// `d >= n k`; outside it the rank is capped by `d`.
    pub in_regime: bool,
    pub holds: bool,
}

/// Checks that the stacked confluent Vandermonde matrix has rank `n k`.
pub fn verify_rank_claim(points: &[BigRational], n: usize, d: usize) -> Result<RankClaim> {
    let rank = exact_rank(&stacked_system(points, n, d)?);
    let expected = n * points.len();
    Ok(RankClaim { rank, expected, in_regime: d >= expected, holds: rank == expected })
}

/// Hermite data: values `targets[l][j]` prescribed for `f^{(l)}(x_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteSpec {
    pub points: Vec<BigRational>,
    pub order: usize,
    pub degree: usize,
    pub targets: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteSolution {
    /// Dimension of the affine space of monic solutions.
    pub dimension: usize,
    /// One monic solution, coefficients ascending (leading 1 included).
    pub particular: Vec<BigRational>,
}

/// Solves the Hermite conditions for monic polynomials of the given degree.
pub fn hermite_dimension(spec: &HermiteSpec) -> Result<HermiteSolution> {
    let (n, d, k) = (spec.order, spec.degree, spec.points.len());
    if spec.targets.len() != n || spec.targets.iter().any(|t| t.len() != k) {
        return Err(Error::invalid("targets must be an order x points table"));
    }
    if d < n * k {
        return Err(Error::invalid(format!("degree {d} is below n k = {}", n * k)));
    }
    let c = stacked_system(&spec.points, n, d)?;
    // right-hand side: s - (z^d)^{(l)}(x_j)
    let mut aug = Vec::with_capacity(n * k);
    for l in 0..n {
        for (j, x) in spec.points.iter().enumerate() {
            let lead = if l <= d { BigRational::from_integer(falling_factorial(d, l)) * pow(x, d - l) } else { BigRational::zero() };
            let mut row = c.row(l * k + j).to_vec();
            row.push(&spec.targets[l][j] - lead);
            aug.push(row);
        }
    }
    let aug = ExactMatrix::from_rows(aug);
    let (ech, pivots) = bareiss(aug.integer_rows(), d + 1);
    if pivots.last() == Some(&d) {
        return Err(Error::Internal("Hermite system is inconsistent".into()));
    }
    // back substitution with free variables at zero
    let mut a = vec![BigRational::zero(); d];
    for (row, &pc) in ech.iter().zip(&pivots).rev() {
        let mut rhs = BigRational::from_integer(row[d].clone());
        for j in pc + 1..d {
            rhs -= BigRational::from_integer(row[j].clone()) * &a[j];
        }
        a[pc] = rhs / BigRational::from_integer(row[pc].clone());
    }
    a.push(BigRational::one());
    Ok(HermiteSolution { dimension: d - pivots.len(), particular: a })
}

/// Rank `2N(D) - 2nrk + k - 1` of the affine bundle over the k-th stratum.
pub fn bundle_rank(d: &DegreeVector, k: u64, n: u64, r: u64) -> i64 {
    2 * d.total() as i64 - 2 * (n * r * k) as i64 + k as i64 - 1
}

/// Distinct rationals with numerator in `[-height, height]` and
/// denominator in `[1, height]`.
pub fn random_points<R: Rng + ?Sized>(rng: &mut R, k: usize, height: i64) -> Vec<BigRational> {
    let mut pts: Vec<BigRational> = Vec::with_capacity(k);
    while pts.len() < k {
        let q = random_rational(rng, height);
        if !pts.contains(&q) {
            pts.push(q);
        }
    }
    pts
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, height: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-height..=height)), BigInt::from(rng.gen_range(1..=height)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn vandermonde_rows() {
        let x = q(3, 2);
        let a1 = confluent_vandermonde(std::slice::from_ref(&x), 0, 3).unwrap();
        assert_eq!(a1.row(0), &[q(1, 1), x.clone(), &x * &x]);
        let a2 = confluent_vandermonde(std::slice::from_ref(&x), 1, 3).unwrap();
        assert_eq!(a2.row(0), &[q(0, 1), q(1, 1), &x * q(2, 1)]);
        let a3 = confluent_vandermonde(std::slice::from_ref(&x), 2, 4).unwrap();
        assert_eq!(a3.row(0), &[q(0, 1), q(0, 1), q(2, 1), &x * q(6, 1)]);
        assert!(confluent_vandermonde(&[x.clone(), x], 0, 3).is_err());
    }

    #[test]
    fn stacked_shapes() {
        let m = stacked_system(&[q(5, 1)], 1, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert_eq!(m.row(0), &[q(1, 1), q(5, 1)]);
        let m = stacked_system(&ints(&[1, 2]), 2, 4).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 4));
        for (k, n) in [(3, 4), (5, 1), (2, 3)] {
            let pts: Vec<BigRational> = (0..k).map(|i| q(i as i64, 3)).collect();
            assert_eq!(stacked_system(&pts, n, 25).unwrap().rows(), n * k);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(exact_rank(&ExactMatrix::identity(3)), 3);
        assert_eq!(exact_rank(&ExactMatrix::zeros(3, 4)), 0);
        assert_eq!(exact_rank(&stacked_system(&ints(&[1, 2]), 2, 4).unwrap()), 4);
        let dependent = ExactMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(3, 1), q(2, 1)]]);
        assert_eq!(exact_rank(&dependent), 1);
    }

    #[test]
    fn rank_claim_regimes() {
        let c = verify_rank_claim(&[q(-7, 3)], 1, 1).unwrap();
        assert!(c.holds && c.in_regime);
        let c = verify_rank_claim(&ints(&[0, 1, 2]), 2, 4).unwrap();
        assert_eq!(c, RankClaim { rank: 4, expected: 6, in_regime: false, holds: false });
    }

    #[test]
    fn hermite_examples() {
        let spec = HermiteSpec {
            points: vec![q(1, 2), q(-3, 1)],
            order: 2,
            degree: 5,
            targets: vec![vec![q(1, 1), q(2, 7)], vec![q(0, 1), q(-5, 3)]],
        };
        let sol = hermite_dimension(&spec).unwrap();
        assert_eq!(sol.dimension, 1);
        let spec = HermiteSpec { points: vec![q(4, 1)], order: 1, degree: 1, targets: vec![vec![q(9, 1)]] };
        let sol = hermite_dimension(&spec).unwrap();
        assert_eq!(sol.dimension, 0);
        // z + a_0 with 4 + a_0 = 9
        assert_eq!(sol.particular, vec![q(5, 1), q(1, 1)]);
    }

    #[test]
    fn bundle_rank_examples() {
        let d = DegreeVector::new(vec![5, 7, 5, 12]).unwrap();
        assert_eq!(bundle_rank(&d, 2, 2, 4), 27);
        assert_eq!(bundle_rank(&d, 0, 2, 4), 57);
    }
}
