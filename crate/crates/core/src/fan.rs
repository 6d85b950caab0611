//! Lattice vectors, simplicial cones and fans, with the global fan
//! predicates (smoothness, completeness, lattice spanning, degree-null
//! solvability) and the power fan.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::{gcd_all, integer_kernel_basis, smith_invariants, IntMatrix};
use crate::lp::{rat, rat_big, LpOutcome, StandardLp};

/// Largest ray count of a power fan; its cones are found by scanning all
/// `2^(rn)` ray subsets.
pub const POWER_RAY_CAP: usize = 20;

/// A primitive integer vector spanning a ray of a fan.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    /// Divides `v` by the gcd of its entries. The result is a positive
    /// multiple of `v` with coprime coordinates.
    pub fn primitive(v: &[BigInt]) -> Result<Self> {
        let g = gcd_all(v);
        if g.is_zero() {
            return Err(Error::invalid("zero vector has no primitive generator"));
        }
        Ok(LatticeVector(v.iter().map(|x| x / &g).collect()))
    }

    pub fn from_i64(v: &[i64]) -> Result<Self> {
        Self::primitive(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_primitive(&self) -> bool {
        gcd_all(&self.0).is_one()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `primitive_ray` on plain integer input.
pub fn primitive_ray(v: &[i64]) -> Result<LatticeVector> {
    LatticeVector::from_i64(v)
}

/// A cone, named by the sorted indices of its generating rays. The empty
/// index set is the zero cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    pub fn zero() -> Self {
        Cone(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The zero cone has no rays.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Cone) -> bool {
        self.0.iter().all(|i| other.0.binary_search(i).is_ok())
    }

    /// All index subsets, the cone itself and the zero cone included.
    pub fn subsets(&self) -> impl Iterator<Item = Cone> + '_ {
        let s = self.0.len();
        assert!(s < 64, "cone with {s} generators");
        (0u64..(1u64 << s)).map(move |mask| {
            Cone((0..s).filter(|&b| mask >> b & 1 == 1).map(|b| self.0[b]).collect())
        })
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Degrees `d_1 … d_r` of a polynomial system, all at least one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DegreeVector(Vec<u64>);

impl DegreeVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("empty degree vector"));
        }
        if let Some(i) = entries.iter().position(|&d| d == 0) {
            return Err(Error::invalid(format!("degree d_{} must be positive", i + 1)));
        }
        Ok(DegreeVector(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> u64 {
        *self.0.iter().min().expect("nonempty")
    }

    /// Total degree `N(D) = d_1 + … + d_r`.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `D + a` for a nonnegative shift.
    pub fn shifted(&self, a: &[u64]) -> Result<Self> {
        if a.len() != self.0.len() {
            return Err(Error::LengthMismatch { expected: self.0.len(), got: a.len() });
        }
        Ok(DegreeVector(self.0.iter().zip(a).map(|(d, s)| d + s).collect()))
    }
}

impl FromStr for DegreeVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|e| Error::invalid(format!("degree {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        DegreeVector::new(entries)
    }
}

/// A fan of simplicial cones in `R^dim`. Cones are stored face-closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    cones: BTreeSet<Cone>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotStronglyConvex { cone: Cone },
    NotSimplicial { cone: Cone },
    MissingFace { cone: Cone, face: Cone },
    BadIntersection { first: Cone, second: Cone },
    MissingZeroCone,
    NoNonzeroCone,
    UnusedRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotStronglyConvex { cone } => write!(f, "cone {cone} contains a line"),
            Violation::NotSimplicial { cone } => write!(f, "cone {cone} has linearly dependent generators"),
            Violation::MissingFace { cone, face } => write!(f, "face {face} of cone {cone} is missing"),
            Violation::BadIntersection { first, second } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
            Violation::MissingZeroCone => write!(f, "zero cone is missing"),
            Violation::NoNonzeroCone => write!(f, "fan has no nonzero cone"),
            Violation::UnusedRay { ray } => write!(f, "ray {ray} spans no cone"),
            Violation::DuplicateRay { first, second } => write!(f, "rays {first} and {second} coincide"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of the completeness decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    Complete,
    Incomplete,
    /// Mixed-dimension fan in dimension three or more.
    Unknown,
}

/// Result of searching for a strictly positive degree-null vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSearch {
    pub degrees: Option<DegreeVector>,
    /// A positive kernel vector exists but its smallest integer
    /// representative exceeds the coordinate bound.
    pub bound_hit: bool,
    pub bound: u64,
}

impl Fan {
    /// Builds a fan from its maximal cones and closes it under faces.
    pub fn from_max_cones(dim: usize, rays: Vec<LatticeVector>, max_cones: &[Vec<usize>]) -> Result<Self> {
        check_structure(dim, &rays, max_cones)?;
        let mut cones = BTreeSet::new();
        for mc in max_cones {
            cones.extend(Cone::new(mc.clone()).subsets());
        }
        cones.insert(Cone::zero());
        Ok(Fan { dim, rays, cones })
    }

    /// Builds a fan from an explicit cone list without adding faces.
    pub fn from_cones_unclosed(dim: usize, rays: Vec<LatticeVector>, cones: &[Vec<usize>]) -> Result<Self> {
        check_structure(dim, &rays, cones)?;
        Ok(Fan { dim, rays, cones: cones.iter().map(|c| Cone::new(c.clone())).collect() })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Self> {
        let rays = rays.iter().map(|r| LatticeVector::from_i64(r)).collect::<Result<Vec<_>>>()?;
        let mc: Vec<Vec<usize>> = max_cones.iter().map(|c| c.to_vec()).collect();
        Fan::from_max_cones(dim, rays, &mc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &BTreeSet<Cone> {
        &self.cones
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones.contains(c)
    }

    /// Cones not strictly contained in another cone of the fan.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
            .cloned()
            .collect()
    }

    fn ray_matrix(&self, idx: &[usize]) -> IntMatrix {
        let cols: Vec<&[BigInt]> = idx.iter().map(|&i| self.rays[i].coords()).collect();
        IntMatrix::from_columns(self.dim, &cols)
    }

    fn all_rays_matrix(&self) -> IntMatrix {
        self.ray_matrix(&(0..self.rays.len()).collect::<Vec<_>>())
    }

    pub fn cone_is_strongly_convex(&self, c: &Cone) -> bool {
        if c.is_zero() {
            return true;
        }
        // a line exists iff some nonzero λ ≥ 0 has Σ λ_i v_i = 0
        let mut a: Vec<Vec<BigRational>> = (0..self.dim)
            .map(|j| c.rays().iter().map(|&i| rat_big(&self.rays[i].coords()[j])).collect())
            .collect();
        a.push(vec![rat(1); c.len()]);
        let mut b = vec![rat(0); self.dim];
        b.push(rat(1));
        !StandardLp::feasibility(a, b).is_feasible()
    }

    pub fn cone_is_simplicial(&self, c: &Cone) -> bool {
        smith_invariants(&self.ray_matrix(c.rays())).len() == c.len()
    }

    /// Whether simplicial cones `s` and `t` meet in the common face spanned
    /// by their shared rays, decided by an exact separating functional.
    fn meet_in_common_face(&self, s: &Cone, t: &Cone) -> bool {
        let m = self.dim;
        let shared: Vec<usize> = s.rays().iter().copied().filter(|i| t.rays().contains(i)).collect();
        let only_s: Vec<usize> = s.rays().iter().copied().filter(|i| !t.rays().contains(i)).collect();
        let only_t: Vec<usize> = t.rays().iter().copied().filter(|i| !s.rays().contains(i)).collect();
        let slack = only_s.len() + only_t.len();
        let width = 2 * m + slack;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut row_for = |ray: usize, sign: i64, slot: Option<usize>, rhs: i64| {
            let mut row = vec![rat(0); width];
            for j in 0..m {
                let v = rat_big(&self.rays[ray].coords()[j]) * rat(sign);
                row[j] = v.clone();
                row[m + j] = -v;
            }
            if let Some(k) = slot {
                row[2 * m + k] = rat(-1);
            }
            a.push(row);
            b.push(rat(rhs));
        };
        for &i in &shared {
            row_for(i, 1, None, 0);
        }
        for (k, &i) in only_s.iter().enumerate() {
            row_for(i, 1, Some(k), 1);
        }
        for (k, &i) in only_t.iter().enumerate() {
            row_for(i, -1, Some(only_s.len() + k), 1);
        }
        StandardLp::feasibility(a, b).is_feasible()
    }

    /// Checks every fan axiom and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if !self.cones.contains(&Cone::zero()) {
            violations.push(Violation::MissingZeroCone);
        }
        if self.cones.iter().all(Cone::is_zero) {
            violations.push(Violation::NoNonzeroCone);
        }
        for (i, a) in self.rays.iter().enumerate() {
            for (j, b) in self.rays.iter().enumerate().skip(i + 1) {
                if a == b {
                    violations.push(Violation::DuplicateRay { first: i, second: j });
                }
            }
        }
        for ray in 0..self.rays.len() {
            if !self.cones.contains(&Cone(vec![ray])) {
                violations.push(Violation::UnusedRay { ray });
            }
        }
        let mut sound = BTreeSet::new();
        for c in &self.cones {
            if !self.cone_is_strongly_convex(c) {
                violations.push(Violation::NotStronglyConvex { cone: c.clone() });
            } else if !self.cone_is_simplicial(c) {
                violations.push(Violation::NotSimplicial { cone: c.clone() });
            } else {
                sound.insert(c.clone());
            }
            for face in c.subsets() {
                if !self.cones.contains(&face) {
                    violations.push(Violation::MissingFace { cone: c.clone(), face });
                }
            }
        }
        let maximal: Vec<Cone> = self.maximal_cones().into_iter().filter(|c| sound.contains(c)).collect();
        for (i, s) in maximal.iter().enumerate() {
            for t in &maximal[i + 1..] {
                if !self.meet_in_common_face(s, t) {
                    violations.push(Violation::BadIntersection { first: s.clone(), second: t.clone() });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Whether the support of the fan is all of `R^dim`. `None` when the
    /// fan is of mixed dimension and `dim >= 3`.
    pub fn is_complete(&self) -> Option<bool> {
        match self.completeness() {
            Completeness::Complete => Some(true),
            Completeness::Incomplete => Some(false),
            Completeness::Unknown => None,
        }
    }

    pub fn completeness(&self) -> Completeness {
        let verdict = |b: bool| if b { Completeness::Complete } else { Completeness::Incomplete };
        match self.dim {
            0 => Completeness::Complete,
            1 => {
                let has = |s: i64| {
                    self.rays.iter().enumerate().any(|(i, r)| {
                        r.coords()[0] == BigInt::from(s) && self.cones.contains(&Cone(vec![i]))
                    })
                };
                verdict(has(1) && has(-1))
            }
            2 => verdict(self.angular_sweep_covers()),
            m => {
                let maximal = self.maximal_cones();
                if maximal.iter().any(|c| c.len() != m) {
                    return Completeness::Unknown;
                }
                let mut facets: BTreeMap<Cone, usize> = BTreeMap::new();
                for c in &maximal {
                    for skip in 0..m {
                        let f = Cone(c.rays().iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect());
                        *facets.entry(f).or_default() += 1;
                    }
                }
                verdict(facets.values().all(|&n| n == 2))
            }
        }
    }

    fn angular_sweep_covers(&self) -> bool {
        let used: Vec<usize> = (0..self.rays.len()).filter(|&i| self.cones.contains(&Cone(vec![i]))).collect();
        if used.len() < 3 {
            return false;
        }
        let mut order = used.clone();
        order.sort_by(|&a, &b| angle_cmp(self.rays[a].coords(), self.rays[b].coords()));
        (0..order.len()).all(|k| {
            let (a, b) = (order[k], order[(k + 1) % order.len()]);
            self.cones.contains(&Cone::new(vec![a, b]))
        })
    }

    /// Every cone's generators extend to a basis of `Z^dim`.
    pub fn is_smooth(&self) -> bool {
        self.maximal_cones().iter().all(|c| {
            let inv = smith_invariants(&self.ray_matrix(c.rays()));
            inv.len() == c.len() && inv.iter().all(One::is_one)
        })
    }

    /// The rays generate `Z^dim` as a group.
    pub fn spans_lattice(&self) -> bool {
        let inv = smith_invariants(&self.all_rays_matrix());
        inv.len() == self.dim && inv.iter().all(One::is_one)
    }

    /// Whether `Σ d_k n_k = 0`.
    pub fn degree_is_null(&self, degrees: &DegreeVector) -> Result<bool> {
        if degrees.len() != self.rays.len() {
            return Err(Error::LengthMismatch { expected: self.rays.len(), got: degrees.len() });
        }
        Ok((0..self.dim).all(|j| {
            self.rays
                .iter()
                .zip(degrees.entries())
                .map(|(r, &d)| &r.coords()[j] * BigInt::from(d))
                .sum::<BigInt>()
                .is_zero()
        }))
    }

    pub fn default_degree_bound(&self) -> u64 {
        10 * self.rays.len() as u64
    }

    /// Searches for a strictly positive integer vector in the kernel of
    /// the ray matrix.
    ///
    /// Minimizes `Σ d_k` over the rational polyhedron `{M d = 0, d ≥ 1}`
    /// and clears denominators of the optimal vertex. Representatives with
    /// a coordinate above `bound` are withheld and flagged.
    pub fn find_degree_vector(&self, bound: Option<u64>) -> DegreeSearch {
        let bound = bound.unwrap_or_else(|| self.default_degree_bound());
        let r = self.rays.len();
        // d = 1 + y with y ≥ 0:  M y = -M 1
        let a: Vec<Vec<BigRational>> =
            (0..self.dim).map(|j| self.rays.iter().map(|v| rat_big(&v.coords()[j])).collect()).collect();
        let b: Vec<BigRational> = a.iter().map(|row| -row.iter().sum::<BigRational>()).collect();
        let lp = StandardLp { a, b, cost: vec![rat(1); r] };
        let y = match lp.solve() {
            LpOutcome::Optimal(y) => y,
            _ => return DegreeSearch { degrees: None, bound_hit: false, bound },
        };
        let x: Vec<BigRational> = y.into_iter().map(|v| v + rat(1)).collect();
        let lcm = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let ints: Vec<BigInt> = x.iter().map(|v| (v * rat_big(&lcm)).to_integer()).collect();
        let g = gcd_all(&ints);
        let ints: Vec<BigInt> = ints.iter().map(|v| v / &g).collect();
        if ints.iter().any(|v| *v > BigInt::from(bound)) {
            return DegreeSearch { degrees: None, bound_hit: true, bound };
        }
        let entries = ints.iter().map(|v| v.to_u64().expect("bounded")).collect();
        DegreeSearch { degrees: Some(DegreeVector(entries)), bound_hit: false, bound }
    }

    /// Rank `r - m` of the torus acting in the quotient construction.
    pub fn cox_group_rank(&self) -> Result<usize> {
        if !self.spans_lattice() {
            return Err(Error::UnsupportedFan("rays do not span the lattice".into()));
        }
        Ok(self.rays.len() - self.dim)
    }

    /// Integer basis of the relations `Σ q_k n_k = 0`, one row per basis vector.
    pub fn relation_basis(&self) -> Vec<Vec<BigInt>> {
        integer_kernel_basis(&self.all_rays_matrix())
    }

    /// A point of the torus cut out by `∏ μ_k^{⟨n_k, e_j⟩} = 1`,
    /// parametrized by `(C^*)^{r-m}` through the relation basis.
    pub fn cox_group_sample(&self, params: &[Complex64]) -> Result<Vec<Complex64>> {
        let rank = self.cox_group_rank()?;
        if params.len() != rank {
            return Err(Error::LengthMismatch { expected: rank, got: params.len() });
        }
        if params.iter().any(|t| t.norm() == 0.0) {
            return Err(Error::invalid("torus parameters must be nonzero"));
        }
        let basis = self.relation_basis();
        let mut mu = vec![Complex64::new(1.0, 0.0); self.rays.len()];
        for (row, t) in basis.iter().zip(params) {
            for (k, q) in row.iter().enumerate() {
                let e = q.to_i32().ok_or_else(|| Error::Internal(format!("relation exponent {q} too large")))?;
                mu[k] *= t.powi(e);
            }
        }
        Ok(mu)
    }

    /// The power fan in `R^{m n}`: ray `(i, j)` (index `i*n + j`) places
    /// `n_i` in block `j`; cones are the sets of `(i, j)` whose fully
    /// occupied rows `{i : (i, j) ∈ τ for all j}` span a cone of this fan.
    pub fn power(&self, n: usize) -> Result<Fan> {
        if n == 0 {
            return Err(Error::invalid("power exponent must be positive"));
        }
        let r = self.rays.len();
        let total = r * n;
        if total > POWER_RAY_CAP {
            return Err(Error::CapExceeded(format!("power fan with {total} rays")));
        }
        let mut rays = Vec::with_capacity(total);
        for ray in &self.rays {
            for j in 0..n {
                let mut coords = vec![BigInt::zero(); self.dim * n];
                coords[j * self.dim..(j + 1) * self.dim].clone_from_slice(ray.coords());
                rays.push(LatticeVector(coords));
            }
        }
        let mut cones = BTreeSet::new();
        for mask in 0u64..(1u64 << total) {
            let full: Vec<usize> = (0..r).filter(|&i| (0..n).all(|j| mask >> (i * n + j) & 1 == 1)).collect();
            if self.cones.contains(&Cone(full)) {
                cones.insert(Cone((0..total).filter(|&b| mask >> b & 1 == 1).collect()));
            }
        }
        Ok(Fan { dim: self.dim * n, rays, cones })
    }

    /// Rebuilds a fan from a face list on the ray indices.
    pub fn from_faces(dim: usize, rays: Vec<LatticeVector>, faces: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let cones: Vec<Vec<usize>> = faces.into_iter().collect();
        Fan::from_cones_unclosed(dim, rays, &cones)
    }
}

fn angle_cmp(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    let half = |v: &[BigInt]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        // positive cross product: a comes first counterclockwise
        BigInt::zero().cmp(&cross)
    })
}

fn check_structure(dim: usize, rays: &[LatticeVector], cones: &[Vec<usize>]) -> Result<()> {
    if dim == 0 {
        return Err(Error::Structure { pointer: "/dim".into(), message: "dimension must be positive".into() });
    }
    for (i, r) in rays.iter().enumerate() {
        if r.dim() != dim {
            return Err(Error::Structure {
                pointer: format!("/rays/{i}"),
                message: format!("expected {dim} coordinates, found {}", r.dim()),
            });
        }
        if !r.is_primitive() {
            return Err(Error::Structure { pointer: format!("/rays/{i}"), message: format!("ray {r} is not primitive") });
        }
    }
    for (c, cone) in cones.iter().enumerate() {
        for (k, &i) in cone.iter().enumerate() {
            if i >= rays.len() {
                return Err(Error::Structure {
                    pointer: format!("/max_cones/{c}/{k}"),
                    message: format!("ray index {i} out of range (fan has {} rays)", rays.len()),
                });
            }
        }
    }
    Ok(())
}

/// The standard fans shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFan {
    /// Projective space `CP^m`: rays `e_1 … e_m, -Σ e_i`.
    ProjectiveSpace(usize),
    /// Hirzebruch surface `H(k)`.
    Hirzebruch(u64),
    /// Affine space `C^m`: one maximal cone on the standard basis.
    Affine(usize),
}

impl BuiltinFan {
    pub fn build(self) -> Result<Fan> {
        match self {
            BuiltinFan::ProjectiveSpace(m) => {
                if m == 0 {
                    return Err(Error::invalid("cp(m) needs m >= 1"));
                }
                let mut rays: Vec<Vec<i64>> = (0..m).map(|i| unit(m, i)).collect();
                rays.push(vec![-1; m]);
                let max: Vec<Vec<usize>> = (0..=m).map(|skip| (0..=m).filter(|&i| i != skip).collect()).collect();
                build_i64(m, &rays, &max)
            }
            BuiltinFan::Hirzebruch(k) => {
                if k == 0 {
                    return Err(Error::invalid("hirzebruch(k) needs k >= 1"));
                }
                let k = i64::try_from(k).map_err(|_| Error::invalid("k too large"))?;
                let rays = vec![vec![1, 0], vec![0, 1], vec![-1, k], vec![0, -1]];
                build_i64(2, &rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
            }
            BuiltinFan::Affine(m) => {
                if m == 0 {
                    return Err(Error::invalid("affine(m) needs m >= 1"));
                }
                let rays: Vec<Vec<i64>> = (0..m).map(|i| unit(m, i)).collect();
                build_i64(m, &rays, &[(0..m).collect()])
            }
        }
    }
}

fn unit(m: usize, i: usize) -> Vec<i64> {
    (0..m).map(|j| i64::from(i == j)).collect()
}

fn build_i64(dim: usize, rays: &[Vec<i64>], max: &[Vec<usize>]) -> Result<Fan> {
    let rays = rays.iter().map(|r| LatticeVector::from_i64(r)).collect::<Result<Vec<_>>>()?;
    Fan::from_max_cones(dim, rays, max)
}

impl FromStr for BuiltinFan {
    type Err = Error;

    /// Parses `cp(m)`, `hirzebruch(k)` or `affine(m)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(|| Error::invalid(format!("unknown fan {s:?}")))?;
        let arg = rest
            .strip_suffix(')')
            .and_then(|a| a.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::invalid(format!("bad parameter in {s:?}")))?;
        if arg == 0 {
            return Err(Error::invalid(format!("parameter of {name} must be >= 1")));
        }
        match name.trim() {
            "cp" => Ok(BuiltinFan::ProjectiveSpace(arg as usize)),
            "hirzebruch" => Ok(BuiltinFan::Hirzebruch(arg)),
            "affine" => Ok(BuiltinFan::Affine(arg as usize)),
            other => Err(Error::invalid(format!("unknown fan {other:?}"))),
        }
    }
}

impl fmt::Display for BuiltinFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinFan::ProjectiveSpace(m) => write!(f, "cp({m})"),
            BuiltinFan::Hirzebruch(k) => write!(f, "hirzebruch({k})"),
            BuiltinFan::Affine(m) => write!(f, "affine({m})"),
        }
    }
}

/// `builtin_fan` by name.
pub fn builtin_fan(name: &str) -> Result<Fan> {
    name.parse::<BuiltinFan>()?.build()
}
