//! Seeded certification suites. Each trial draws from its own ChaCha
//! stream, so a suite's outcome depends only on `(seed, trials, config)`
//! and not on how the trials are scheduled.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{in_polyhedral_product, primitive_collections, underlying_complex, Arrangement, PointInProduct};
use crate::error::{Error, Result};
use crate::fan::{BuiltinFan, DegreeVector, Fan};
use crate::gauss::GaussRat;
use crate::hermite::{hermite_dimension, random_points, random_rational, verify_rank_claim, HermiteSpec};
use crate::par::map_collect;
use crate::poly::{jet, jet_section, RationalPoly};
use crate::stability::{band_from_parts, stability_formula, Band, BAND_CAP};
use crate::system::{is_member_with, stabilize, PolySystem, RootPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Vandermonde,
    Band,
    Complement,
    Jetsection,
    Membership,
    Stabilization,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Vandermonde => "vandermonde",
            Suite::Band => "band",
            Suite::Complement => "complement",
            Suite::Jetsection => "jetsection",
            Suite::Membership => "membership",
            Suite::Stabilization => "stabilization",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialFailure {
    pub index: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    /// Individual checks performed; a trial may run several.
    pub checks: u64,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
    pub failures: Vec<TrialFailure>,
}

/// Outcome of one trial: number of checks run, or the first failure.
type Trial = std::result::Result<u64, String>;

pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run<F>(suite: Suite, seed: u64, trials: usize, f: F) -> Result<SuiteSummary>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Trial> + Sync + Send,
{
    run_indexed(suite, seed, trials, |_, rng| f(rng))
}

fn run_indexed<F>(suite: Suite, seed: u64, trials: usize, f: F) -> Result<SuiteSummary>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Trial> + Sync + Send,
{
    let outcomes: Vec<Result<Trial>> = map_collect(0..trials, |i| f(i, &mut trial_rng(seed, i)));
    let mut checks = 0;
    let mut failures = Vec::new();
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(Ok(c)) => checks += c,
            Ok(Err(detail)) => failures.push(TrialFailure { index, detail }),
            Err(e @ Error::CapExceeded(_)) => return Err(e),
            Err(e) => failures.push(TrialFailure { index, detail: e.to_string() }),
        }
    }
    let failed = failures.len();
    Ok(SuiteSummary { suite, seed, trials, checks, passed: trials - failed, failed, all_passed: failed == 0, failures })
}

/// The fans the suites sample from.
pub fn fixture_fans() -> Vec<(String, Fan)> {
    [
        BuiltinFan::ProjectiveSpace(1),
        BuiltinFan::ProjectiveSpace(2),
        BuiltinFan::ProjectiveSpace(3),
        BuiltinFan::Hirzebruch(1),
        BuiltinFan::Hirzebruch(2),
        BuiltinFan::Hirzebruch(3),
    ]
    .into_iter()
    .map(|b| (b.to_string(), b.build().expect("builtin fans are valid")))
    .collect()
}

// ---------------------------------------------------------------- vandermonde

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VandermondeConfig {
    /// Fixed values, or `None` to draw per trial.
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k_max: usize,
    pub n_max: usize,
    pub d_max: usize,
    pub height: i64,
}

impl Default for VandermondeConfig {
    fn default() -> Self {
        VandermondeConfig { k: None, n: None, d: None, k_max: 5, n_max: 4, d_max: 30, height: 50 }
    }
}

/// `f^{(l)}(x)` by repeated formal differentiation and Horner evaluation.
fn derivative_at(coeffs: &[BigRational], l: usize, x: &BigRational) -> BigRational {
    let mut c = coeffs.to_vec();
    for _ in 0..l {
        c = c.iter().enumerate().skip(1).map(|(i, a)| a * BigRational::from_integer(BigInt::from(i))).collect();
    }
    c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
}

fn vandermonde_trial(cfg: &VandermondeConfig, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let k = cfg.k.unwrap_or_else(|| rng.gen_range(1..=cfg.k_max));
    let n = cfg.n.unwrap_or_else(|| rng.gen_range(1..=cfg.n_max));
    let d = match cfg.d {
        Some(d) => d,
        None if n * k > cfg.d_max => return Err(Error::invalid(format!("n k = {} exceeds d_max = {}", n * k, cfg.d_max))),
        None => rng.gen_range(n * k..=cfg.d_max),
    };
    let points = random_points(rng, k, cfg.height);
    let claim = verify_rank_claim(&points, n, d)?;
    if !claim.in_regime {
        return Ok(Err(format!("d = {d} is below n k = {}", n * k)));
    }
    if !claim.holds {
        return Ok(Err(format!("rank {} != {} for points {points:?}, n = {n}, d = {d}", claim.rank, claim.expected)));
    }
    let targets: Vec<Vec<BigRational>> = (0..n).map(|_| (0..k).map(|_| random_rational(rng, cfg.height)).collect()).collect();
    let spec = HermiteSpec { points: points.clone(), order: n, degree: d, targets: targets.clone() };
    let sol = hermite_dimension(&spec)?;
    if sol.dimension != d - n * k {
        return Ok(Err(format!("solution dimension {} != {}", sol.dimension, d - n * k)));
    }
    if sol.particular.len() != d + 1 || !sol.particular[d].is_one() {
        return Ok(Err("particular solution is not monic of degree d".into()));
    }
    for (l, row) in targets.iter().enumerate() {
        for (x, s) in points.iter().zip(row) {
            if &derivative_at(&sol.particular, l, x) != s {
                return Ok(Err(format!("f^({l})({x}) != {s}")));
            }
        }
    }
    Ok(Ok(2 + (n * k) as u64))
}

pub fn vandermonde_suite(cfg: &VandermondeConfig, seed: u64, trials: usize) -> Result<SuiteSummary> {
    if let (Some(k), Some(n), Some(d)) = (cfg.k, cfg.n, cfg.d) {
        if d < n * k {
            return Err(Error::invalid(format!("d = {d} is below n k = {}", n * k)));
        }
    }
    if cfg.k == Some(0) || cfg.n == Some(0) || cfg.d == Some(0) || cfg.height < 1 {
        return Err(Error::invalid("k, n, d and height must be positive"));
    }
    run(Suite::Vandermonde, seed, trials, |rng| vandermonde_trial(cfg, rng))
}

// ----------------------------------------------------------------------- band

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandConfig {
    pub d_prime_max: u64,
    pub n_max: u64,
}

impl Default for BandConfig {
    fn default() -> Self {
        BandConfig { d_prime_max: 8, n_max: 4 }
    }
}

/// Draws a fan, `n` and a degree vector with `1 <= d' <= d_prime_max`, then
/// checks brute force against the closed form and the stability dimension.
fn band_trial(cfg: &BandConfig, fans: &[(String, Fan)], rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (name, fan) = fans.choose(rng).expect("fixture list is nonempty");
    let n = rng.gen_range(2..=cfg.n_max.max(2));
    let d_prime = rng.gen_range(1..=cfg.d_prime_max);
    let d_min = n * d_prime + rng.gen_range(0..n);
    let mut degrees: Vec<u64> = (0..fan.ray_count()).map(|_| d_min + rng.gen_range(0..=3 * n)).collect();
    let pin = rng.gen_range(0..degrees.len());
    degrees[pin] = d_min;
    let d = DegreeVector::new(degrees)?;
    let rm = r_min_of(fan)?;
    let band = band_from_parts(d.min() / n, rm, n)?;
    let expected = crate::stability::stability_dim(&d, fan, n)? + 2;
    match band {
        Band::Found { min, terms, .. } => {
            if min != expected {
                return Ok(Err(format!("{name}, D = {:?}, n = {n}: band {min} != {expected}", d.entries())));
            }
            if let Some(t) = terms.iter().find(|t| t.brute_force != t.closed_form) {
                return Ok(Err(format!("{name}: a({}) = {} but enumeration gives {}", t.t, t.closed_form, t.brute_force)));
            }
            // a(t) increases with t, so the minimum is at t = 1
            if terms.windows(2).any(|w| w[0].closed_form >= w[1].closed_form) {
                return Ok(Err(format!("{name}: a(t) not increasing")));
            }
            Ok(Ok(terms.len() as u64 + 1))
        }
        Band::NoBand => Ok(Err(format!("{name}: no band at d' = {d_prime}"))),
    }
}

fn r_min_of(fan: &Fan) -> Result<u64> {
    Ok(crate::complex::r_min(fan)? as u64)
}

pub fn band_suite(cfg: &BandConfig, seed: u64, trials: usize) -> Result<SuiteSummary> {
    if cfg.d_prime_max > BAND_CAP {
        return Err(Error::CapExceeded(format!("band enumeration needs d' <= {BAND_CAP}, got {}", cfg.d_prime_max)));
    }
    if cfg.d_prime_max == 0 {
        return Err(Error::invalid("d_prime_max must be positive"));
    }
    let fans = fixture_fans();
    run(Suite::Band, seed, trials, |rng| band_trial(cfg, &fans, rng))
}

/// Deterministic sweep of the band oracle over every fixture fan, `n` in
/// `2..=n_max` and `d'` in `1..=d_prime_max`.
pub fn band_sweep(d_prime_max: u64, n_max: u64) -> Result<Vec<(String, u64, u64, i64)>> {
    let mut out = Vec::new();
    for (name, fan) in fixture_fans() {
        let rm = r_min_of(&fan)?;
        for n in 2..=n_max {
            for dp in 1..=d_prime_max {
                match band_from_parts(dp, rm, n)? {
                    Band::Found { min, .. } if min == stability_formula(rm, dp * n, n) + 2 => out.push((name.clone(), n, dp, min)),
                    other => return Err(Error::Internal(format!("{name}, n = {n}, d' = {dp}: {other:?}"))),
                }
            }
        }
    }
    Ok(out)
}

// ----------------------------------------------------------------- complement

fn random_nonzero_block<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let mut b: Vec<Complex64> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)) } else { Complex64::new(0.0, 0.0) })
        .collect();
    if b.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        let j = rng.gen_range(0..n);
        b[j] = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-2.0..2.0));
    }
    b
}

fn point_with_support<R: Rng + ?Sized>(rng: &mut R, r: usize, n: usize, zero_mask: u64) -> Result<PointInProduct> {
    let blocks = (0..r)
        .map(|i| if zero_mask >> i & 1 == 1 { vec![Complex64::new(0.0, 0.0); n] } else { random_nonzero_block(rng, n) })
        .collect();
    PointInProduct::new(blocks)
}

/// Largest ray count swept exhaustively.
pub const COMPLEMENT_EXHAUSTIVE_MAX: usize = 12;

/// For each fixture fan: every zero-support pattern once (when `r <= 12`),
/// then `samples` random points; polyhedral-product membership must be the
/// exact negation of arrangement membership.
fn complement_trial(fan_name: &str, fan: &Fan, samples: usize, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let r = fan.ray_count();
    let k = underlying_complex(fan)?;
    let arr = Arrangement::of_fan(fan)?;
    let mut checks = 0u64;
    let mut check = |x: &PointInProduct| -> Result<Option<String>> {
        checks += 1;
        let a = in_polyhedral_product(x, &k, 0.0)?;
        let b = arr.contains(x, 0.0)?;
        Ok((a == b).then(|| format!("{fan_name}: zero support {:?} gives {a} for both", x.zero_support(0.0).vertices())))
    };
    if r <= COMPLEMENT_EXHAUSTIVE_MAX {
        for mask in 0..1u64 << r {
            let n = rng.gen_range(1..=3);
            if let Some(msg) = check(&point_with_support(rng, r, n, mask)?)? {
                return Ok(Err(msg));
            }
        }
    }
    for _ in 0..samples {
        let n = rng.gen_range(1..=4);
        let p = rng.gen_range(0.0..1.0);
        let mask = (0..r).filter(|_| rng.gen_bool(p)).fold(0u64, |m, i| m | 1 << i);
        if let Some(msg) = check(&point_with_support(rng, r, n, mask)?)? {
            return Ok(Err(msg));
        }
    }
    Ok(Ok(checks))
}

/// One trial per fan in `fans`.
pub fn complement_suite_on(fans: &[(String, Fan)], samples: usize, seed: u64) -> Result<SuiteSummary> {
    run_indexed(Suite::Complement, seed, fans.len(), |i, rng| complement_trial(&fans[i].0, &fans[i].1, samples, rng))
}

/// `trials` passes over the fixture fans.
pub fn complement_suite(samples: usize, seed: u64, trials: usize) -> Result<SuiteSummary> {
    let fans = fixture_fans();
    run_indexed(Suite::Complement, seed, trials, |i, rng| {
        let (name, fan) = &fans[i % fans.len()];
        complement_trial(name, fan, samples, rng)
    })
}

// ----------------------------------------------------------------- jetsection

pub fn random_gauss<R: Rng + ?Sized>(rng: &mut R, height: i64) -> GaussRat {
    GaussRat::new(random_rational(rng, height), random_rational(rng, height))
}

fn jetsection_trial(n_max: usize, height: i64, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let n = rng.gen_range(1..=n_max);
    let b: Vec<GaussRat> = (0..n).map(|_| random_gauss(rng, height)).collect();
    let f = jet_section(&b)?;
    let back = jet(&f, n)?.eval(&GaussRat::zero());
    if back != b {
        return Ok(Err(format!("jet of section differs for n = {n}")));
    }
    Ok(Ok(n as u64))
}

pub fn jetsection_suite(n_max: usize, height: i64, seed: u64, trials: usize) -> Result<SuiteSummary> {
    if n_max == 0 || height < 1 {
        return Err(Error::invalid("n_max and height must be positive"));
    }
    run(Suite::Jetsection, seed, trials, |rng| jetsection_trial(n_max, height, rng))
}

// ----------------------------------------------------------------- membership

/// A system built with known roots, in both representations.
#[derive(Debug, Clone)]
pub struct PlantedSystem {
    pub fan_name: String,
    pub n: usize,
    pub roots: Vec<Vec<(GaussRat, u32)>>,
    /// The collection carrying a shared root of multiplicity `n`, if planted.
    pub planted: Option<Vec<usize>>,
}

impl PlantedSystem {
    pub fn coefficient_form(&self) -> Result<PolySystem> {
        PolySystem::coefficients(self.roots.iter().map(|r| RationalPoly::from_roots(r)).collect())
    }

    pub fn root_form(&self) -> Result<PolySystem> {
        PolySystem::roots(
            self.roots
                .iter()
                .map(|r| RootPoly::new(r.iter().map(|(z, m)| (z.to_complex(), *m)).collect()))
                .collect::<Result<_>>()?,
        )
    }
}

fn fresh_root<R: Rng + ?Sized>(rng: &mut R, height: i64, used: &mut Vec<GaussRat>) -> GaussRat {
    loop {
        let z = GaussRat::new(random_rational(rng, height), random_rational(rng, height));
        if !used.contains(&z) {
            used.push(z.clone());
            return z;
        }
    }
}

/// Every non-planted root is globally unique, so the only common roots of
/// a planted system are the planted one and a generic system has none.
/// Roots are Gaussian rationals whose parts have numerator and
/// denominator bounded by `height`.
pub fn planted_system<R: Rng + ?Sized>(
    rng: &mut R,
    fan_name: &str,
    fan: &Fan,
    n: usize,
    plant: bool,
    height: i64,
) -> Result<PlantedSystem> {
    let r = fan.ray_count();
    let mut used = Vec::new();
    let mut roots: Vec<Vec<(GaussRat, u32)>> = (0..r)
        .map(|_| {
            let count = rng.gen_range(if plant { 0 } else { 1 }..=3);
            (0..count).map(|_| (fresh_root(rng, height, &mut used), rng.gen_range(1..=n as u32 + 1))).collect()
        })
        .collect();
    let planted = if plant {
        let collections = primitive_collections(fan)?;
        let sigma = collections.choose(rng).ok_or_else(|| Error::Undefined("fan has no primitive collection".into()))?;
        let alpha = fresh_root(rng, height, &mut used);
        for &i in sigma.vertices() {
            roots[i].push((alpha.clone(), n as u32));
        }
        Some(sigma.vertices().to_vec())
    } else {
        None
    };
    for (i, rs) in roots.iter_mut().enumerate() {
        if rs.is_empty() {
            rs.push((fresh_root(rng, height, &mut used), 1));
        }
        debug_assert!(i < r);
    }
    Ok(PlantedSystem { fan_name: fan_name.to_string(), n, roots, planted })
}

fn membership_trial(fans: &[(String, Fan, Vec<crate::complex::Face>)], plant: bool, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (name, fan, collections) = fans.choose(rng).expect("fixture list is nonempty");
    let n = rng.gen_range(1..=3);
    let sys = planted_system(rng, name, fan, n, plant, 20)?;
    let exact = is_member_with(&sys.coefficient_form()?, collections, fan.ray_count(), n)?;
    let float = is_member_with(&sys.root_form()?, collections, fan.ray_count(), n)?;
    if exact.member != float.member {
        return Ok(Err(format!("{name}, n = {n}: exact gcd says {}, root multiset says {}", exact.member, float.member)));
    }
    if exact.member == plant {
        return Ok(Err(format!("{name}, n = {n}: planted = {plant} but member = {}", exact.member)));
    }
    Ok(Ok(2))
}

/// First half of the trials plant a shared root, the second half are generic.
pub fn membership_suite(seed: u64, trials: usize) -> Result<SuiteSummary> {
    let fans = fixture_fans()
        .into_iter()
        .map(|(name, fan)| {
            let pc = primitive_collections(&fan)?;
            Ok((name, fan, pc))
        })
        .collect::<Result<Vec<_>>>()?;
    let half = trials / 2;
    run_indexed(Suite::Membership, seed, trials, |i, rng| membership_trial(&fans, i < half, rng))
}

// -------------------------------------------------------------- stabilization

fn stabilization_trial(fans: &[(String, Fan, Vec<crate::complex::Face>)], rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (name, fan, collections) = fans.choose(rng).expect("fixture list is nonempty");
    let n = rng.gen_range(1..=3);
    let plant = rng.gen_bool(0.5);
    // φ_D contracts the half-plane Re w > 0 by e^{-Re w}; small heights keep
    // distinct roots farther apart than the clustering tolerance after it.
    let sys = planted_system(rng, name, fan, n, plant, 3)?.root_form()?;
    let r = fan.ray_count();
    let shift = |rng: &mut ChaCha8Rng| -> Vec<u64> {
        let mut a: Vec<u64> = (0..r).map(|_| rng.gen_range(0..=3)).collect();
        if a.iter().all(|&x| x == 0) {
            a[rng.gen_range(0..r)] = 1;
        }
        a
    };
    let (a, b) = (shift(rng), shift(rng));
    let d = sys.degrees();
    let once = stabilize(&sys, &a)?;
    let twice = stabilize(&once, &b)?;
    let want_once = d.shifted(&a)?;
    let want_twice = want_once.shifted(&b)?;
    if once.degrees() != want_once {
        return Ok(Err(format!("{name}: degrees {:?} != D + a = {:?}", once.degrees().entries(), want_once.entries())));
    }
    if twice.degrees() != want_twice {
        return Ok(Err(format!("{name}: degrees {:?} != D + a + b = {:?}", twice.degrees().entries(), want_twice.entries())));
    }
    // Only the single map is compared: composing two maps pushes the first
    // anchor points to within e^{-N(D)} of each other, below any fixed
    // clustering tolerance, so only the degree law is checked for the pair.
    let v0 = is_member_with(&sys, collections, r, n)?.member;
    let v1 = is_member_with(&once, collections, r, n)?.member;
    if v0 != !plant || v1 != v0 {
        return Ok(Err(format!("{name}, n = {n}: verdict {v0} -> {v1}, planted = {plant}")));
    }
    Ok(Ok(4))
}

pub fn stabilization_suite(seed: u64, trials: usize) -> Result<SuiteSummary> {
    let fans = fixture_fans()
        .into_iter()
        .map(|(name, fan)| {
            let pc = primitive_collections(&fan)?;
            Ok((name, fan, pc))
        })
        .collect::<Result<Vec<_>>>()?;
    run(Suite::Stabilization, seed, trials, |rng| stabilization_trial(&fans, rng))
}
