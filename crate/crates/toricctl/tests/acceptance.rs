//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! wall time checked against the criterion's budget.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde_json::Value;

use toric_core::complex::{complex_power, dim_arrangement, dim_config, r_min, underlying_complex};
use toric_core::fan::{BuiltinFan, DegreeVector, Fan};
use toric_core::hermite::bundle_rank;
use toric_core::oracle::{self, BandConfig, VandermondeConfig};
use toric_core::stability::{min_unknown_band, stability_dim, truncation_dim, Band};
use toric_core::system::ROOT_TOLERANCE;

/// Seed shared by every randomized criterion.
const SEED: u64 = 0x5EED_2024;
/// Root-form clustering tolerance the membership criterion is stated at.
const MEMBERSHIP_TOLERANCE: f64 = 1e-6;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    check: fn() -> Result<String, String>,
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Minimal ray subsets contained in no maximal cone, by subset enumeration.
fn brute_primitive_collections(r: usize, max_cones: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let is_face = |mask: u32| max_cones.iter().any(|c| c.iter().fold(0u32, |m, &i| m | 1 << i) & mask == mask);
    let mut out: Vec<Vec<usize>> = (1u32..1 << r)
        .filter(|&m| !is_face(m) && (0..r).filter(|&i| m >> i & 1 == 1).all(|i| is_face(m & !(1 << i))))
        .map(|m| (0..r).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    out.sort();
    out
}

fn c1_hirzebruch() -> Result<String, String> {
    for k in 1..=3i64 {
        let path = fixture(&format!("hirzebruch{k}.json"));
        let out = toricctl::run_args(["toricctl", "fan", "analyze", &path]);
        ensure(out.code == 0, || format!("H({k}): exit {} {}", out.code, out.stderr))?;
        let v: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
        let res = &v["result"];
        let raw: Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rays: Vec<Vec<i64>> = serde_json::from_value(raw["rays"].clone()).map_err(|e| e.to_string())?;
        let cones: Vec<Vec<usize>> = serde_json::from_value(raw["max_cones"].clone()).map_err(|e| e.to_string())?;
        let pcs: Vec<Vec<usize>> = serde_json::from_value(res["primitive_collections_one_based"].clone()).map_err(|e| e.to_string())?;
        ensure(pcs == vec![vec![1, 3], vec![2, 4]], || format!("H({k}): primitive collections {pcs:?}"))?;
        ensure(pcs == brute_primitive_collections(rays.len(), &cones), || format!("H({k}): brute force disagrees"))?;
        ensure(res["r_min"] == 2, || format!("H({k}): r_min {}", res["r_min"]))?;
        let d: Vec<i64> = serde_json::from_value(res["degree_search"]["degrees"].clone()).map_err(|e| format!("H({k}): no degree vector: {e}"))?;
        ensure(d.len() == 4 && d[2] == d[0] && d[3] == k * d[0] + d[1], || format!("H({k}): degrees {d:?} not of the form (d1,d2,d1,k d1+d2)"))?;
        let sum: Vec<i64> = (0..2).map(|c| rays.iter().zip(&d).map(|(r, di)| r[c] * di).sum()).collect();
        ensure(sum == vec![0, 0], || format!("H({k}): Σ d_i v_i = {sum:?}"))?;
    }
    Ok("H(1..3): {{1,3},{2,4}}, r_min 2, degrees (d1,d2,d1,k d1+d2)".into())
}

fn c2_stability() -> Result<String, String> {
    let h1 = BuiltinFan::Hirzebruch(1).build().map_err(|e| e.to_string())?;
    let d = DegreeVector::new(vec![5, 7, 5, 12]).map_err(|e| e.to_string())?;
    let sd = stability_dim(&d, &h1, 2).map_err(|e| e.to_string())?;
    // (2·2·2 − 3)·⌊5/2⌋ − 2
    ensure(sd == 8, || format!("stability_dim {sd}"))?;
    match min_unknown_band(&d, &h1, 2).map_err(|e| e.to_string())? {
        Band::Found { min, .. } => ensure(min == 10 && min == sd + 2, || format!("band {min}"))?,
        Band::NoBand => return Err("no band".into()),
    }
    let s = oracle::band_suite(&BandConfig { d_prime_max: 8, n_max: 4 }, SEED, 50).map_err(|e| e.to_string())?;
    ensure(s.all_passed && s.trials == 50, || format!("band suite: {:?}", s.failures))?;
    Ok(format!("stability_dim 8, band 10; 50 random (D,Σ,n) agree over {} a(t) terms", s.checks - 50))
}

fn c3_vandermonde() -> Result<String, String> {
    let cfg = VandermondeConfig { k_max: 5, n_max: 4, d_max: 30, height: 50, ..VandermondeConfig::default() };
    let s = oracle::vandermonde_suite(&cfg, SEED, 500).map_err(|e| e.to_string())?;
    ensure(s.all_passed && s.trials == 500, || format!("{} failures: {:?}", s.failed, s.failures.first()))?;
    Ok("500/500 instances: rank nk and dimension d − nk, exact".into())
}

fn c4_membership() -> Result<String, String> {
    ensure(ROOT_TOLERANCE == MEMBERSHIP_TOLERANCE, || format!("root tolerance {ROOT_TOLERANCE}"))?;
    let s = oracle::membership_suite(SEED, 400).map_err(|e| e.to_string())?;
    ensure(s.all_passed && s.trials == 400, || format!("{} disagreements: {:?}", s.failed, s.failures.first()))?;
    Ok("200 planted rejected and 200 generic accepted by both tests".into())
}

fn c5_power() -> Result<String, String> {
    let mut checked = 0;
    for b in [BuiltinFan::ProjectiveSpace(1), BuiltinFan::ProjectiveSpace(2), BuiltinFan::Hirzebruch(1)] {
        let fan = b.build().map_err(|e| e.to_string())?;
        let k = underlying_complex(&fan).map_err(|e| e.to_string())?;
        for n in 1..=3 {
            let via_fan = underlying_complex(&fan.power(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let via_complex = complex_power(&k, n).map_err(|e| e.to_string())?;
            ensure(via_fan.faces() == via_complex.faces(), || format!("{b}, n = {n}: face lists differ"))?;
            checked += via_fan.faces().len();
        }
    }
    Ok(format!("9 (Σ, n) pairs, {checked} faces equal"))
}

fn c6_complement() -> Result<String, String> {
    let mut fans = oracle::fixture_fans();
    for b in [BuiltinFan::ProjectiveSpace(11), BuiltinFan::Affine(3)] {
        fans.push((b.to_string(), b.build().map_err(|e| e.to_string())?));
    }
    ensure(fans.iter().any(|(_, f)| f.ray_count() == 12), || "no fan with r = 12".into())?;
    let s = oracle::complement_suite_on(&fans, 1000, SEED).map_err(|e| e.to_string())?;
    ensure(s.all_passed, || format!("{:?}", s.failures))?;
    Ok(format!("{} fans, {} points: exactly one of the two memberships holds", fans.len(), s.checks))
}

fn c7_jetsection() -> Result<String, String> {
    let s = oracle::jetsection_suite(6, 50, SEED, 100).map_err(|e| e.to_string())?;
    ensure(s.all_passed && s.trials == 100, || format!("{:?}", s.failures))?;
    Ok("100 vectors recovered exactly".into())
}

fn c8_stabilization() -> Result<String, String> {
    let s = oracle::stabilization_suite(SEED, 100).map_err(|e| e.to_string())?;
    ensure(s.all_passed && s.trials == 100, || format!("{:?}", s.failures))?;
    Ok("100 systems: verdict kept, D → D + a, D → D + a + b".into())
}

fn c9_bookkeeping() -> Result<String, String> {
    let mut cases: Vec<(String, Fan, DegreeVector, u64)> = Vec::new();
    for (name, fan) in oracle::fixture_fans() {
        let base = fan.find_degree_vector(None).degrees.ok_or(format!("{name}: no degree vector"))?;
        for scale in 1..=4u64 {
            let d = DegreeVector::new(base.entries().iter().map(|x| x * scale * 2).collect()).map_err(|e| e.to_string())?;
            for n in 2..=3 {
                if d.min() >= n {
                    cases.push((name.clone(), fan.clone(), d.clone(), n));
                }
            }
        }
    }
    let h1 = BuiltinFan::Hirzebruch(1).build().map_err(|e| e.to_string())?;
    cases.push(("hirzebruch(1)".into(), h1, DegreeVector::new(vec![5, 7, 5, 12]).map_err(|e| e.to_string())?, 2));
    for (name, fan, d, n) in &cases {
        let t = truncation_dim(d, fan, *n).map_err(|e| format!("{name}: {e}"))?;
        let rm = r_min(fan).map_err(|e| e.to_string())? as i64;
        let dp = (d.min() / n) as i64;
        let closed = 2 * d.total() as i64 + 3 * dp - 2 * *n as i64 * rm * dp;
        let parts = bundle_rank(d, dp as u64, *n, fan.ray_count() as u64) + dim_config(fan, *n, dp as u64).map_err(|e| e.to_string())? + 1;
        ensure(t.closed_form == closed && closed == parts, || format!("{name}, D = {:?}, n = {n}: {closed} vs {parts}", d.entries()))?;
        for k in 0..=dp as u64 + 1 {
            let lhs = dim_config(fan, *n, k).map_err(|e| e.to_string())?;
            let rhs = 2 * k as i64 + k as i64 * dim_arrangement(fan, *n).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("{name}: dim C_{k} = {lhs} but 2k + k·dim L = {rhs}"))?;
        }
    }
    Ok(format!("{} fixture (D, Σ, n) triples", cases.len()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "Hirzebruch reproduction", budget: Duration::from_secs(1), check: c1_hirzebruch },
        Criterion { id: 2, name: "stability formula and band", budget: Duration::from_secs(10), check: c2_stability },
        Criterion { id: 3, name: "Vandermonde certification", budget: Duration::from_secs(60), check: c3_vandermonde },
        Criterion { id: 4, name: "membership oracle equivalence", budget: Duration::from_secs(30), check: c4_membership },
        Criterion { id: 5, name: "power-structure coherence", budget: Duration::from_secs(5), check: c5_power },
        Criterion { id: 6, name: "complement identity", budget: Duration::from_secs(5), check: c6_complement },
        Criterion { id: 7, name: "jet-section identity", budget: Duration::from_secs(1), check: c7_jetsection },
        Criterion { id: 8, name: "stabilization laws", budget: Duration::from_secs(5), check: c8_stabilization },
        Criterion { id: 9, name: "dimension bookkeeping", budget: Duration::from_secs(1), check: c9_bookkeeping },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if elapsed <= c.budget => format!("PASS  [{}] {}: {detail}", c.id, c.name),
            Ok(detail) => format!("FAIL  [{}] {}: {detail}, but over budget", c.id, c.name),
            Err(why) => format!("FAIL  [{}] {}: {why}", c.id, c.name),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict} ({:.2?} of {:?})", elapsed, c.budget);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
