//! Closed-form stability dimensions, connectivity bounds, the vanishing
//! table of the first page of the truncated spectral sequence, and the
//! band of undetermined cells left by the comparison argument.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{dim_config, r_min};
use crate::error::{Error, Result};
use crate::fan::{DegreeVector, Fan};
use crate::hermite::bundle_rank;

/// Largest `⌊d_min/n⌋` for which the band tuples are enumerated.
pub const BAND_CAP: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub r_min: u64,
    pub d_min: u64,
    pub n: u64,
    pub d_prime: u64,
    pub stability_dim: i64,
    pub connectivity: i64,
    pub degree_null: bool,
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid("n must be at least 2 here; use stability_dim_n1 for n = 1"));
    }
    Ok(())
}

fn check_len(d: &DegreeVector, fan: &Fan) -> Result<()> {
    if d.len() != fan.ray_count() {
        return Err(Error::LengthMismatch { expected: fan.ray_count(), got: d.len() });
    }
    Ok(())
}

/// `(2n r_min - 3) ⌊d_min/n⌋ - 2`.
pub fn stability_formula(r_min: u64, d_min: u64, n: u64) -> i64 {
    (2 * n * r_min - 3) as i64 * (d_min / n) as i64 - 2
}

pub fn stability_dim(d: &DegreeVector, fan: &Fan, n: u64) -> Result<i64> {
    check_n(n)?;
    check_len(d, fan)?;
    Ok(stability_formula(r_min(fan)? as u64, d.min(), n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceKind {
    Homotopy,
    Homology,
}

/// The `n = 1` stability dimension: `(2 r_min - 3) d_min - 2` as a homotopy
/// equivalence when `r_min >= 3`, `d_min - 2` as a homology equivalence
/// when `r_min = 2`.
pub fn stability_dim_n1(d: &DegreeVector, fan: &Fan) -> Result<(i64, EquivalenceKind)> {
    check_len(d, fan)?;
    let rm = r_min(fan)? as i64;
    let dmin = d.min() as i64;
    Ok(if rm >= 3 {
        ((2 * rm - 3) * dmin - 2, EquivalenceKind::Homotopy)
    } else {
        (dmin - 2, EquivalenceKind::Homology)
    })
}

/// `(2mn - 3)(⌊d/n⌋ + 1) - 1` for the projective-space case.
pub fn stability_dim_projective(d: u64, m: u64, n: u64) -> Result<i64> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("m and n must be positive"));
    }
    if (m, n) == (1, 1) {
        return Err(Error::invalid("(m, n) = (1, 1) is excluded"));
    }
    Ok((2 * m * n - 3) as i64 * ((d / n) as i64 + 1) - 1)
}

/// `2n r_min - 5`.
pub fn connectivity_bound(fan: &Fan, n: u64) -> Result<i64> {
    check_n(n)?;
    Ok((2 * n * r_min(fan)? as u64) as i64 - 5)
}

pub fn report(d: &DegreeVector, fan: &Fan, n: u64) -> Result<StabilityReport> {
    check_n(n)?;
    check_len(d, fan)?;
    let rm = r_min(fan)? as u64;
    Ok(StabilityReport {
        r_min: rm,
        d_min: d.min(),
        n,
        d_prime: d.min() / n,
        stability_dim: stability_formula(rm, d.min(), n),
        connectivity: (2 * n * rm) as i64 - 5,
        degree_null: fan.degree_is_null(d)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Zero,
    PossiblyNonzero,
    TailUnknown,
}

impl CellStatus {
    fn glyph(self) -> char {
        match self {
            CellStatus::Zero => '.',
            CellStatus::PossiblyNonzero => '?',
            CellStatus::TailUnknown => '~',
        }
    }
}

/// Status of every cell `(k, s)` with `0 <= k <= d' + 1` and `s` in the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E1Support {
    pub d_prime: u64,
    pub r_min: u64,
    pub n: u64,
    pub r: u64,
    pub s_max: i64,
    #[serde(serialize_with = "serialize_cells")]
    pub cells: BTreeMap<(i64, i64), CellStatus>,
}

fn serialize_cells<S: serde::Serializer>(cells: &BTreeMap<(i64, i64), CellStatus>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Cell {
        k: i64,
        s: i64,
        status: CellStatus,
    }
    let mut seq = s.serialize_seq(Some(cells.len()))?;
    for (&(k, s), &status) in cells {
        seq.serialize_element(&Cell { k, s, status })?;
    }
    seq.end()
}

impl E1Support {
    pub fn status(&self, k: i64, s: i64) -> CellStatus {
        if k < 0 || k >= self.d_prime as i64 + 2 {
            return CellStatus::Zero;
        }
        self.cells.get(&(k, s)).copied().unwrap_or_else(|| classify(k, s, self.d_prime, self.r_min, self.n, self.r))
    }

    /// Rows `s` from top to bottom, columns `k`.
    pub fn render_table(&self) -> String {
        let kmax = self.d_prime as i64 + 1;
        let mut out = String::from("   s |");
        for k in 0..=kmax {
            out.push_str(&format!(" {k:>3}"));
        }
        out.push('\n');
        out.push_str(&"-".repeat(6 + 4 * (kmax as usize + 1)));
        out.push('\n');
        for s in (0..=self.s_max).rev() {
            out.push_str(&format!("{s:>4} |"));
            for k in 0..=kmax {
                out.push_str(&format!("   {}", self.status(k, s).glyph()));
            }
            out.push('\n');
        }
        out.push_str(". zero   ? possibly nonzero   ~ beyond truncation\n");
        out
    }
}

fn classify(k: i64, s: i64, d_prime: u64, r_min: u64, n: u64, r: u64) -> CellStatus {
    let dp = d_prime as i64;
    let slope = (2 * n * r_min) as i64 - 2;
    if k < 0 || k >= dp + 2 {
        return CellStatus::Zero;
    }
    if k == 0 {
        return if s == 0 { CellStatus::PossiblyNonzero } else { CellStatus::Zero };
    }
    if k <= dp {
        let dim_c = 2 * k * (1 + (n * r) as i64 - (n * r_min) as i64);
        let degree = (2 * n * r) as i64 * k - s;
        if s < slope * k || degree < 0 || degree > dim_c {
            return CellStatus::Zero;
        }
        return CellStatus::PossiblyNonzero;
    }
    // k = d' + 1
    if s < slope * dp {
        CellStatus::Zero
    } else {
        CellStatus::TailUnknown
    }
}

/// Labels each cell by the vanishing conditions that apply to it.
pub fn e1_support(d: &DegreeVector, fan: &Fan, n: u64, s_window: Option<i64>) -> Result<E1Support> {
    check_n(n)?;
    check_len(d, fan)?;
    let rm = r_min(fan)? as u64;
    let d_prime = d.min() / n;
    let r = fan.ray_count() as u64;
    let s_max = s_window.unwrap_or_else(|| stability_formula(rm, d.min(), n) + (2 * n * rm) as i64 + 4);
    let cells = crate::par::map_collect(0..=(d_prime as i64 + 1), |k| {
        (0..=s_max).map(|s| ((k, s), classify(k, s, d_prime, rm, n, r))).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(E1Support { d_prime, r_min: rm, n, r, s_max, cells })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandTerm {
    pub t: u64,
    /// Minimum of `s - k` over the enumerated cells of `A_t`.
    pub brute_force: i64,
    /// `(2n r_min - 3) d' + t - 1`.
    pub closed_form: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Band {
    /// `d' = 0`: no undetermined band.
    NoBand,
    Found { min: i64, stability_dim: i64, terms: Vec<BandTerm> },
}

/// Minimum of `s - k` over `A_t`, `t >= 1`, by enumerating strictly
/// increasing tuples `l_1 < … < l_t` with `u + Σ l_j = d' + 1`, `u >= 0`,
/// and taking the least admissible `v`.
pub fn band_brute_force(d_prime: u64, r_min: u64, n: u64) -> Vec<(u64, i64)> {
    let target = d_prime + 1;
    let edge = (2 * n * r_min - 2) as i64 * d_prime as i64;
    let mut best: BTreeMap<u64, i64> = BTreeMap::new();
    // (last part, number of parts, sum)
    let mut stack: Vec<(u64, u64, u64)> = (1..=target).map(|l| (l, 1, l)).collect();
    while let Some((last, t, sum)) = stack.pop() {
        let u = (target - sum) as i64;
        let v = edge - (sum as i64 - t as i64);
        let entry = best.entry(t).or_insert(i64::MAX);
        *entry = (*entry).min(v - u);
        for l in last + 1..=target - sum {
            stack.push((l, t + 1, sum + l));
        }
    }
    best.into_iter().collect()
}

pub fn band_closed_form(d_prime: u64, r_min: u64, n: u64, t: u64) -> i64 {
    (2 * n * r_min - 3) as i64 * d_prime as i64 + t as i64 - 1
}

pub fn min_unknown_band(d: &DegreeVector, fan: &Fan, n: u64) -> Result<Band> {
    check_n(n)?;
    check_len(d, fan)?;
    let rm = r_min(fan)? as u64;
    band_from_parts(d.min() / n, rm, n)
}

pub fn band_from_parts(d_prime: u64, r_min: u64, n: u64) -> Result<Band> {
    if d_prime == 0 {
        return Ok(Band::NoBand);
    }
    if d_prime > BAND_CAP {
        return Err(Error::CapExceeded(format!("band enumeration needs d' <= {BAND_CAP}, got {d_prime}")));
    }
    let terms: Vec<BandTerm> = band_brute_force(d_prime, r_min, n)
        .into_iter()
        .map(|(t, bf)| BandTerm { t, brute_force: bf, closed_form: band_closed_form(d_prime, r_min, n, t) })
        .collect();
    if let Some(bad) = terms.iter().find(|t| t.brute_force != t.closed_form) {
        return Err(Error::Internal(format!("band term t = {} disagrees: {bad:?}", bad.t)));
    }
    let min = terms.iter().map(|t| t.brute_force).min().expect("t = 1 always present");
    let stability_dim = stability_formula(r_min, d_prime * n, n);
    if min != stability_dim + 2 {
        return Err(Error::Internal(format!("band minimum {min} is not stability_dim + 2 = {}", stability_dim + 2)));
    }
    Ok(Band::Found { min, stability_dim, terms })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationDim {
    pub d_prime: u64,
    pub closed_form: i64,
    pub bundle_rank: i64,
    pub config_dim: i64,
    pub decomposed: i64,
}

/// Dimension `2N(D) + 3d' - 2n r_min d'` of the last filtration step,
/// checked against `l_{D,d',n} + dim C_{d'} + 1`.
pub fn truncation_dim(d: &DegreeVector, fan: &Fan, n: u64) -> Result<TruncationDim> {
    check_len(d, fan)?;
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let d_prime = d.min() / n;
    if d_prime == 0 {
        return Err(Error::invalid("truncation dimension needs d_min >= n"));
    }
    let rm = r_min(fan)? as i64;
    let dp = d_prime as i64;
    let closed_form = 2 * d.total() as i64 + 3 * dp - 2 * n as i64 * rm * dp;
    let bundle = bundle_rank(d, d_prime, n, fan.ray_count() as u64);
    let config = dim_config(fan, n, d_prime)?;
    let decomposed = bundle + config + 1;
    if decomposed != closed_form {
        return Err(Error::Internal(format!("truncation dimension {closed_form} != {decomposed}")));
    }
    Ok(TruncationDim { d_prime, closed_form, bundle_rank: bundle, config_dim: config, decomposed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::BuiltinFan;

    fn h(k: u64) -> Fan {
        BuiltinFan::Hirzebruch(k).build().unwrap()
    }

    fn dv(v: &[u64]) -> DegreeVector {
        DegreeVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn stability_examples() {
        assert_eq!(stability_dim(&dv(&[5, 7, 5, 12]), &h(1), 2).unwrap(), 8);
        assert_eq!(stability_dim(&dv(&[1, 7, 1, 8]), &h(1), 2).unwrap(), -2);
        for m in 2..=4u64 {
            let fan = BuiltinFan::ProjectiveSpace(m as usize - 1).build().unwrap();
            for d in 1..=9u64 {
                for n in 2..=3u64 {
                    let want = (2 * n * m - 3) as i64 * (d / n) as i64 - 2;
                    assert_eq!(stability_dim(&dv(&vec![d; m as usize]), &fan, n).unwrap(), want);
                }
            }
        }
        assert!(stability_dim(&dv(&[5, 7, 5, 12]), &h(1), 1).is_err());
    }

    #[test]
    fn n1_examples() {
        assert_eq!(stability_dim_n1(&dv(&[5, 7, 5, 12]), &h(1)).unwrap(), (3, EquivalenceKind::Homology));
        let cp2 = BuiltinFan::ProjectiveSpace(2).build().unwrap();
        for d in 1..6 {
            assert_eq!(stability_dim_n1(&dv(&[d, d, d]), &cp2).unwrap(), (3 * d as i64 - 2, EquivalenceKind::Homotopy));
        }
    }

    #[test]
    fn projective_examples() {
        assert_eq!(stability_dim_projective(6, 2, 2).unwrap(), 19);
        assert_eq!(stability_dim_projective(1, 2, 3).unwrap(), 8);
        assert!(stability_dim_projective(4, 1, 1).is_err());
        let seq: Vec<i64> = (0..30).map(|d| stability_dim_projective(d, 3, 2).unwrap()).collect();
        assert!(seq.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(connectivity_bound(&h(4), 2).unwrap(), 3);
        assert_eq!(connectivity_bound(&BuiltinFan::ProjectiveSpace(2).build().unwrap(), 2).unwrap(), 7);
    }

    #[test]
    fn e1_cell_examples() {
        let e = e1_support(&dv(&[5, 7, 5, 12]), &h(1), 2, None).unwrap();
        assert_eq!(e.d_prime, 2);
        assert_eq!(e.s_max, 8 + 8 + 4);
        assert_eq!(e.status(1, 5), CellStatus::Zero);
        assert_eq!(e.status(0, 0), CellStatus::PossiblyNonzero);
        assert_eq!(e.status(0, 3), CellStatus::Zero);
        // band edge for k = d' + 1 sits at s = 6 d' = 12
        assert_eq!(e.status(3, 11), CellStatus::Zero);
        assert_eq!(e.status(3, 12), CellStatus::TailUnknown);
        assert_eq!(e.status(4, 12), CellStatus::Zero);
        assert_eq!(e.status(-1, 0), CellStatus::Zero);
        assert!(e.render_table().contains('~'));
    }

    #[test]
    fn band_examples() {
        match min_unknown_band(&dv(&[5, 7, 5, 12]), &h(1), 2).unwrap() {
            Band::Found { min, stability_dim, terms } => {
                assert_eq!((min, stability_dim), (10, 8));
                assert_eq!(terms[0].t, 1);
                assert_eq!(terms[0].brute_force, 10);
            }
            Band::NoBand => panic!("band expected"),
        }
        assert_eq!(min_unknown_band(&dv(&[1, 3, 1, 4]), &h(1), 2).unwrap(), Band::NoBand);
        assert!(matches!(band_from_parts(13, 2, 2), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn truncation_examples() {
        let t = truncation_dim(&dv(&[5, 7, 5, 12]), &h(1), 2).unwrap();
        // 2*29 + 3*2 - 2*2*2*2
        assert_eq!(t.closed_form, 48);
        assert_eq!(t.decomposed, 48);
    }
}
