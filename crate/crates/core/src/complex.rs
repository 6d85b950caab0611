//! Simplicial complexes attached to fans: the underlying complex, its
//! non-faces and primitive collections, the power complex on `[r] x [n]`,
//! and membership in the polyhedral product and in the coordinate
//! subspace arrangement it complements.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::Fan;

/// Largest vertex count for which the full non-face family is materialized.
pub const MATERIALIZE_LIMIT: usize = 24;
const FACE_LIMIT: usize = 1 << 22;

/// A sorted set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }

    fn from_mask(mask: u64) -> Self {
        Face((0..64).filter(|&b| mask >> b & 1 == 1).collect())
    }

    fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Labels `i` shifted to one-based, for display in the usual notation.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An abstract simplicial complex on `0..vertex_count`, stored as its full
/// (subset-closed) face set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    faces: BTreeSet<Face>,
}

impl SimplicialComplex {
    /// Checks closure under subsets and that every vertex is in range.
    pub fn new(vertex_count: usize, faces: impl IntoIterator<Item = Face>) -> Result<Self> {
        let mut faces: BTreeSet<Face> = faces.into_iter().collect();
        faces.insert(Face::empty());
        for f in &faces {
            if let Some(&v) = f.0.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::invalid(format!("vertex {v} out of range in face {f}")));
            }
            for skip in 0..f.len() {
                let mut sub = f.0.clone();
                sub.remove(skip);
                if !faces.contains(&Face(sub.clone())) {
                    return Err(Error::invalid(format!("face {f} present but its facet {} is not", Face(sub))));
                }
            }
        }
        Ok(SimplicialComplex { vertex_count, faces })
    }

    /// The complex generated by the given faces.
    pub fn from_max_faces(vertex_count: usize, max_faces: &[Vec<usize>]) -> Result<Self> {
        if vertex_count > 63 {
            return Err(Error::CapExceeded(format!("{vertex_count} vertices")));
        }
        let mut faces = BTreeSet::new();
        faces.insert(Face::empty());
        for mf in max_faces {
            let mf = Face::new(mf.clone());
            if let Some(&v) = mf.0.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::invalid(format!("vertex {v} out of range")));
            }
            if mf.len() > 24 {
                return Err(Error::CapExceeded(format!("face with {} vertices", mf.len())));
            }
            let s = mf.len();
            for sub in 0u64..(1 << s) {
                faces.insert(Face((0..s).filter(|&b| sub >> b & 1 == 1).map(|b| mf.0[b]).collect()));
            }
        }
        Ok(SimplicialComplex { vertex_count, faces })
    }

    /// The full simplex on `n` vertices.
    pub fn simplex(n: usize) -> Result<Self> {
        Self::from_max_faces(n, &[(0..n).collect()])
    }

    /// The boundary of the simplex on `n` vertices.
    pub fn simplex_boundary(n: usize) -> Result<Self> {
        let max: Vec<Vec<usize>> = (0..n).map(|s| (0..n).filter(|&i| i != s).collect()).collect();
        Self::from_max_faces(n, &max)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn faces(&self) -> &BTreeSet<Face> {
        &self.faces
    }

    pub fn contains(&self, f: &Face) -> bool {
        self.faces.contains(f)
    }

    pub fn maximal_faces(&self) -> Vec<Face> {
        self.faces
            .iter()
            .filter(|f| {
                (0..self.vertex_count).all(|v| f.0.binary_search(&v).is_ok() || !self.faces.contains(&with_vertex(f, v)))
            })
            .cloned()
            .collect()
    }

    /// Non-faces all of whose proper subsets are faces.
    pub fn minimal_non_faces(&self) -> Vec<Face> {
        let mut out = BTreeSet::new();
        for f in &self.faces {
            for v in 0..self.vertex_count {
                if f.0.binary_search(&v).is_ok() {
                    continue;
                }
                let cand = with_vertex(f, v);
                if self.faces.contains(&cand) || out.contains(&cand) {
                    continue;
                }
                let minimal = (0..cand.len()).all(|skip| {
                    let mut sub = cand.0.clone();
                    sub.remove(skip);
                    self.faces.contains(&Face(sub))
                });
                if minimal {
                    out.insert(cand);
                }
            }
        }
        out.into_iter().collect()
    }

    /// The induced subcomplex on `vertices`, relabelled `0..vertices.len()`
    /// in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let faces = self.faces.iter().filter_map(|f| {
            let mut labels = Vec::with_capacity(f.len());
            for v in &f.0 {
                labels.push(vertices.iter().position(|w| w == v)?);
            }
            Some(Face::new(labels))
        });
        SimplicialComplex::new(vertices.len(), faces)
    }
}

fn with_vertex(f: &Face, v: usize) -> Face {
    let mut w = f.0.clone();
    let pos = w.binary_search(&v).unwrap_or_else(|p| p);
    w.insert(pos, v);
    Face(w)
}

/// The non-faces `I(K)` of a complex, an upward-closed family represented
/// by its minimal members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonFaceFamily {
    vertex_count: usize,
    minimal: Vec<Face>,
}

impl NonFaceFamily {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn minimal(&self) -> &[Face] {
        &self.minimal
    }

    pub fn contains(&self, s: &Face) -> bool {
        self.minimal.iter().any(|m| m.is_subset(s))
    }

    /// Streams every non-face, in increasing bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = Face> + '_ {
        assert!(self.vertex_count < 64, "streaming limited to 63 vertices");
        let masks: Vec<u64> = self.minimal.iter().map(Face::mask).collect();
        (0u64..(1u64 << self.vertex_count))
            .filter(move |s| masks.iter().any(|m| m & s == *m))
            .map(Face::from_mask)
    }

    /// Materializes the whole family; refused above [`MATERIALIZE_LIMIT`] vertices.
    pub fn to_set(&self) -> Result<BTreeSet<Face>> {
        if self.vertex_count > MATERIALIZE_LIMIT {
            return Err(Error::CapExceeded(format!(
                "{} vertices exceeds the materialization limit {MATERIALIZE_LIMIT}",
                self.vertex_count
            )));
        }
        Ok(self.iter().collect())
    }
}

pub fn non_faces(k: &SimplicialComplex) -> NonFaceFamily {
    NonFaceFamily { vertex_count: k.vertex_count, minimal: k.minimal_non_faces() }
}

/// Ray subsets spanning a cone of the fan.
pub fn underlying_complex(fan: &Fan) -> Result<SimplicialComplex> {
    let faces = fan.cones().iter().map(|c| Face(c.rays().to_vec()));
    SimplicialComplex::new(fan.ray_count(), faces)
}

/// Minimal ray subsets spanning no cone of the fan.
pub fn primitive_collections(fan: &Fan) -> Result<Vec<Face>> {
    Ok(underlying_complex(fan)?.minimal_non_faces())
}

/// Smallest size of a primitive collection.
pub fn r_min(fan: &Fan) -> Result<usize> {
    primitive_collections(fan)?
        .iter()
        .map(Face::len)
        .min()
        .ok_or_else(|| Error::Undefined("fan has no primitive collection".into()))
}

/// Vertex label of `(i, j)` in `[r] x [n]`, zero-based.
pub fn power_vertex(i: usize, j: usize, n: usize) -> usize {
    i * n + j
}

/// The complex on `[r] x [n]` whose faces are the sets containing no
/// `σ x [n]` for a non-face `σ` of `k`.
pub fn complex_power(k: &SimplicialComplex, n: usize) -> Result<SimplicialComplex> {
    if n == 0 {
        return Err(Error::invalid("power exponent must be positive"));
    }
    let total = k.vertex_count * n;
    if total > 63 {
        return Err(Error::CapExceeded(format!("power complex on {total} vertices")));
    }
    let forbidden: Vec<u64> = k
        .minimal_non_faces()
        .iter()
        .map(|s| s.0.iter().flat_map(|&i| (0..n).map(move |j| 1u64 << power_vertex(i, j, n))).fold(0, |a, b| a | b))
        .collect();
    // depth-first over increasing vertex sequences; faces are down-closed
    let mut faces = BTreeSet::new();
    let mut stack: Vec<(u64, usize)> = vec![(0, 0)];
    while let Some((mask, next)) = stack.pop() {
        faces.insert(Face::from_mask(mask));
        if faces.len() > FACE_LIMIT {
            return Err(Error::CapExceeded(format!("power complex has more than {FACE_LIMIT} faces")));
        }
        for v in next..total {
            let grown = mask | 1 << v;
            if forbidden.iter().all(|f| grown & f != *f) {
                stack.push((grown, v + 1));
            }
        }
    }
    Ok(SimplicialComplex { vertex_count: total, faces })
}

fn checked_r_min(fan: &Fan) -> Result<i64> {
    Ok(r_min(fan)? as i64)
}

/// Real dimension `2n(r - r_min)` of the coordinate arrangement.
pub fn dim_arrangement(fan: &Fan, n: u64) -> Result<i64> {
    let r = fan.ray_count() as i64;
    Ok(2 * n as i64 * (r - checked_r_min(fan)?))
}

/// Real dimension `2k(1 + nr - n r_min)` of the configuration space of
/// `k` distinct points labelled by arrangement points.
pub fn dim_config(fan: &Fan, n: u64, k: u64) -> Result<i64> {
    let (n, k) = (n as i64, k as i64);
    let r = fan.ray_count() as i64;
    Ok(2 * k * (1 + n * r - n * checked_r_min(fan)?))
}

/// A point `(x_1, …, x_r)` of `(C^n)^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointInProduct {
    blocks: Vec<Vec<Complex64>>,
}

impl PointInProduct {
    pub fn new(blocks: Vec<Vec<Complex64>>) -> Result<Self> {
        if let Some(first) = blocks.first() {
            let n = first.len();
            if let Some(bad) = blocks.iter().find(|b| b.len() != n) {
                return Err(Error::LengthMismatch { expected: n, got: bad.len() });
            }
        }
        Ok(PointInProduct { blocks })
    }

    pub fn blocks(&self) -> &[Vec<Complex64>] {
        &self.blocks
    }

    /// Indices of the blocks equal to `0_n`. `tol = 0` is the exact test.
    pub fn zero_support(&self, tol: f64) -> Face {
        Face(
            self.blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.iter().all(|z| if tol == 0.0 { *z == Complex64::new(0.0, 0.0) } else { z.norm() <= tol }))
                .map(|(i, _)| i)
                .collect(),
        )
    }
}

/// Membership in the polyhedral product of `(C^n, (C^n)^*)` over `k`.
pub fn in_polyhedral_product(x: &PointInProduct, k: &SimplicialComplex, tol: f64) -> Result<bool> {
    if x.blocks.len() != k.vertex_count {
        return Err(Error::LengthMismatch { expected: k.vertex_count, got: x.blocks.len() });
    }
    Ok(k.contains(&x.zero_support(tol)))
}

/// The coordinate subspace arrangement of a fan, by its primitive collections.
#[derive(Debug, Clone)]
pub struct Arrangement {
    ray_count: usize,
    primitive: Vec<Face>,
}

impl Arrangement {
    pub fn of_fan(fan: &Fan) -> Result<Self> {
        Ok(Arrangement { ray_count: fan.ray_count(), primitive: primitive_collections(fan)? })
    }

    pub fn contains(&self, x: &PointInProduct, tol: f64) -> Result<bool> {
        if x.blocks.len() != self.ray_count {
            return Err(Error::LengthMismatch { expected: self.ray_count, got: x.blocks.len() });
        }
        let zs = x.zero_support(tol);
        Ok(self.primitive.iter().any(|p| p.is_subset(&zs)))
    }
}

pub fn in_arrangement(x: &PointInProduct, fan: &Fan, tol: f64) -> Result<bool> {
    Arrangement::of_fan(fan)?.contains(x, tol)
}
