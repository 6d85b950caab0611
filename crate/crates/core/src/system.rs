//! Polynomial systems `(f_1, …, f_r)` of monic polynomials, the bounded
//! multiplicity membership test, jet evaluation and stabilization maps.

use num_complex::Complex64;
use serde::Serialize;

use crate::complex::{primitive_collections, Face, PointInProduct};
use crate::error::{Error, Result};
use crate::fan::{DegreeVector, Fan};
use crate::gauss::GaussRat;
use crate::poly::{mult_part, RationalPoly};

/// Relative tolerance used when clustering float roots.
pub const ROOT_TOLERANCE: f64 = 1e-6;

/// A monic polynomial given by its roots with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct RootPoly {
    roots: Vec<(Complex64, u32)>,
}

impl RootPoly {
    pub fn new(roots: Vec<(Complex64, u32)>) -> Result<Self> {
        if roots.iter().any(|&(_, m)| m == 0) {
            return Err(Error::invalid("root multiplicities must be positive"));
        }
        if roots.iter().any(|(z, _)| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("roots must be finite"));
        }
        Ok(RootPoly { roots })
    }

    pub fn roots(&self) -> &[(Complex64, u32)] {
        &self.roots
    }

    pub fn degree(&self) -> u64 {
        self.roots.iter().map(|&(_, m)| u64::from(m)).sum()
    }

    /// Float coefficients in ascending order.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &(alpha, m) in &self.roots {
            for _ in 0..m {
                let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
                for (i, ci) in c.iter().enumerate() {
                    next[i + 1] += ci;
                    next[i] -= ci * alpha;
                }
                c = next;
            }
        }
        c
    }

    /// Roots merged into clusters at the relative tolerance, with summed
    /// multiplicities.
    pub fn clusters(&self, tol: f64) -> Vec<(Complex64, u32)> {
        let mut out: Vec<(Complex64, u32)> = Vec::new();
        for &(z, m) in &self.roots {
            match out.iter_mut().find(|(c, _)| close(*c, z, tol)) {
                Some(cluster) => cluster.1 += m,
                None => out.push((z, m)),
            }
        }
        out
    }
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
}

/// An r-tuple of monic polynomials in one of the two representations.
#[derive(Debug, Clone, PartialEq)]
pub enum PolySystem {
    Coefficients(Vec<RationalPoly>),
    Roots(Vec<RootPoly>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Coefficients,
    Roots,
}

impl PolySystem {
    pub fn coefficients(polys: Vec<RationalPoly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::invalid("empty polynomial system"));
        }
        for (i, p) in polys.iter().enumerate() {
            if !p.is_monic() || p.degree() == Some(0) {
                return Err(Error::invalid(format!("f_{} must be monic of positive degree", i + 1)));
            }
        }
        Ok(PolySystem::Coefficients(polys))
    }

    pub fn roots(polys: Vec<RootPoly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::invalid("empty polynomial system"));
        }
        if let Some(i) = polys.iter().position(|p| p.degree() == 0) {
            return Err(Error::invalid(format!("f_{} must have positive degree", i + 1)));
        }
        Ok(PolySystem::Roots(polys))
    }

    pub fn len(&self) -> usize {
        match self {
            PolySystem::Coefficients(p) => p.len(),
            PolySystem::Roots(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn representation(&self) -> Representation {
        match self {
            PolySystem::Coefficients(_) => Representation::Coefficients,
            PolySystem::Roots(_) => Representation::Roots,
        }
    }

    pub fn degrees(&self) -> DegreeVector {
        let d = match self {
            PolySystem::Coefficients(p) => p.iter().map(|f| f.degree().unwrap_or(0) as u64).collect(),
            PolySystem::Roots(p) => p.iter().map(RootPoly::degree).collect(),
        };
        DegreeVector::new(d).expect("systems hold positive degrees")
    }

    /// Float coefficients of every `f_i`.
    fn float_coefficients(&self) -> Vec<Vec<Complex64>> {
        match self {
            PolySystem::Coefficients(p) => p.iter().map(|f| f.coeffs().iter().map(GaussRat::to_complex).collect()).collect(),
            PolySystem::Roots(p) => p.iter().map(RootPoly::coefficients).collect(),
        }
    }
}

/// Why a system fails the membership test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Primitive collection whose polynomials share a root of multiplicity ≥ n.
    pub collection: Face,
    /// Common factor, present for coefficient-form systems.
    #[serde(skip)]
    pub factor: Option<RationalPoly>,
    /// Shared root, present for root-form systems.
    #[serde(skip)]
    pub root: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<Witness>,
    pub representation: Representation,
}

/// Whether the system has, for every primitive collection `σ`, no root of
/// multiplicity at least `n` common to all `f_i` with `i ∈ σ`.
pub fn is_member(system: &PolySystem, fan: &Fan, n: usize) -> Result<Membership> {
    let collections = primitive_collections(fan)?;
    is_member_with(system, &collections, fan.ray_count(), n)
}

/// Membership against a precomputed list of primitive collections.
pub fn is_member_with(system: &PolySystem, collections: &[Face], ray_count: usize, n: usize) -> Result<Membership> {
    if system.len() != ray_count {
        return Err(Error::LengthMismatch { expected: ray_count, got: system.len() });
    }
    if n == 0 {
        return Err(Error::invalid("multiplicity bound must be positive"));
    }
    let representation = system.representation();
    let witness = match system {
        PolySystem::Coefficients(polys) => {
            let parts = polys.iter().map(|f| mult_part(f, n)).collect::<Result<Vec<_>>>()?;
            collections.iter().find_map(|sigma| {
                let common = sigma
                    .vertices()
                    .iter()
                    .fold(RationalPoly::zero(), |g, &i| g.gcd(&parts[i]));
                (common.degree().unwrap_or(0) > 0).then(|| Witness { collection: sigma.clone(), factor: Some(common), root: None })
            })
        }
        PolySystem::Roots(polys) => {
            let heavy: Vec<Vec<Complex64>> = polys
                .iter()
                .map(|f| f.clusters(ROOT_TOLERANCE).into_iter().filter(|&(_, m)| m as usize >= n).map(|(z, _)| z).collect())
                .collect();
            collections.iter().find_map(|sigma| {
                let (&first, rest) = sigma.vertices().split_first()?;
                heavy[first]
                    .iter()
                    .find(|&&z| rest.iter().all(|&i| heavy[i].iter().any(|&w| close(z, w, ROOT_TOLERANCE))))
                    .map(|&z| Witness { collection: sigma.clone(), factor: None, root: Some(z) })
            })
        }
    };
    Ok(Membership { member: witness.is_none(), witness, representation })
}

/// Total degree `N(E) = e_1 + … + e_r`.
pub fn n_of(d: &DegreeVector) -> u64 {
    d.total()
}

/// The fixed homeomorphism of `C` onto the half-plane `Re w < N(D)`:
/// `w ↦ (N(D) - e^{-Re w}) + i Im w`.
pub fn phi_map(d: &DegreeVector, w: Complex64) -> Complex64 {
    Complex64::new(d.total() as f64 - (-w.re).exp(), w.im)
}

/// Anchor point `x_i = N(D) + i` (one-based `i`) outside the half-plane.
pub fn anchor_point(d: &DegreeVector, i: usize) -> Complex64 {
    Complex64::new((d.total() + i as u64 + 1) as f64, 0.0)
}

/// The stabilization map `f ↦ (φ_D(f_i) (z - x_i)^{a_i})_i` on root-form systems.
pub fn stabilize(system: &PolySystem, a: &[u64]) -> Result<PolySystem> {
    let PolySystem::Roots(polys) = system else {
        return Err(Error::invalid("stabilization needs a root-form system"));
    };
    if a.len() != polys.len() {
        return Err(Error::LengthMismatch { expected: polys.len(), got: a.len() });
    }
    if a.iter().all(|&x| x == 0) {
        return Err(Error::invalid("stabilization shift a must be nonzero"));
    }
    let d = system.degrees();
    let mut out = Vec::with_capacity(polys.len());
    for (i, (f, &ai)) in polys.iter().zip(a).enumerate() {
        let mut roots: Vec<(Complex64, u32)> = f.roots.iter().map(|&(z, m)| (phi_map(&d, z), m)).collect();
        if ai > 0 {
            let m = u32::try_from(ai).map_err(|_| Error::invalid("stabilization shift too large"))?;
            roots.push((anchor_point(&d, i), m));
        }
        out.push(RootPoly::new(roots)?);
    }
    PolySystem::roots(out)
}

/// `(F_n(f_1)(α), …, F_n(f_r)(α))` in float arithmetic.
pub fn evaluate_jet(system: &PolySystem, n: usize, alpha: Complex64) -> Result<PointInProduct> {
    if n == 0 {
        return Err(Error::invalid("jet order must be positive"));
    }
    let blocks = system
        .float_coefficients()
        .iter()
        .map(|c| {
            let derivs: Vec<Complex64> = (0..n).map(|j| eval_derivative(c, j, alpha)).collect();
            (0..n).map(|j| if j == 0 { derivs[0] } else { derivs[0] + derivs[j] }).collect()
        })
        .collect();
    PointInProduct::new(blocks)
}

/// Exact jet evaluation of a coefficient-form system at a Gaussian
/// rational point; exact zeros stay exact after conversion to floats.
pub fn evaluate_jet_exact(polys: &[RationalPoly], n: usize, alpha: &GaussRat) -> Result<PointInProduct> {
    let blocks = polys
        .iter()
        .map(|f| Ok(crate::poly::jet(f, n)?.eval(alpha).iter().map(GaussRat::to_complex).collect()))
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    PointInProduct::new(blocks)
}

fn eval_derivative(c: &[Complex64], order: usize, x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ci) in c.iter().enumerate().skip(order).rev() {
        let ff: f64 = (0..order).map(|t| (i - t) as f64).product();
        acc = acc * x + ci * ff;
    }
    acc
}
