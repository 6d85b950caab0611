//! JSON formats for fans, simplicial complexes and polynomial systems.
//!
//! Structural problems are reported with a JSON pointer into the input so
//! that a malformed fixture can be fixed without guessing.

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use toric_core::complex::SimplicialComplex;
use toric_core::error::{Error, Result};
use toric_core::fan::{BuiltinFan, Fan, LatticeVector};
use toric_core::gauss::GaussRat;
use toric_core::poly::RationalPoly;
use toric_core::system::{PolySystem, RootPoly};

fn at(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Structure { pointer: pointer.into(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| at("", format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column())))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| at("", "expected a JSON object"))?
        .get(key)
        .ok_or_else(|| at(format!("/{key}"), "missing field"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| at(ptr, "expected an array"))
}

fn uint(v: &Value, ptr: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| at(ptr, "expected a non-negative integer"))
}

fn bigint(v: &Value, ptr: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| at(ptr, "expected an integer")),
        Value::String(s) => s.trim().parse().map_err(|_| at(ptr, format!("{s:?} is not an integer"))),
        _ => Err(at(ptr, "expected an integer")),
    }
}

fn index_lists(v: &Value, key: &str) -> Result<Vec<Vec<usize>>> {
    let outer = array(field(v, key)?, &format!("/{key}"))?;
    outer
        .iter()
        .enumerate()
        .map(|(c, inner)| {
            let p = format!("/{key}/{c}");
            array(inner, &p)?
                .iter()
                .enumerate()
                .map(|(k, x)| uint(x, &format!("{p}/{k}")).map(|u| u as usize))
                .collect()
        })
        .collect()
}

/// Parses `{"dim": m, "rays": [[…], …], "max_cones": [[…], …]}` with
/// 0-based ray indices. Rays must be primitive.
pub fn fan_from_value(v: &Value) -> Result<Fan> {
    let dim = uint(field(v, "dim")?, "/dim")? as usize;
    let rays_v = array(field(v, "rays")?, "/rays")?;
    let mut rays = Vec::with_capacity(rays_v.len());
    for (i, r) in rays_v.iter().enumerate() {
        let p = format!("/rays/{i}");
        let coords = array(r, &p)?
            .iter()
            .enumerate()
            .map(|(j, x)| bigint(x, &format!("{p}/{j}")))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != dim {
            return Err(at(p, format!("expected {dim} coordinates, found {}", coords.len())));
        }
        let lv = LatticeVector::primitive(&coords).map_err(|_| at(&p, "zero vector is not a ray"))?;
        if lv.coords() != coords.as_slice() {
            return Err(at(p, format!("ray is not primitive; did you mean {lv}?")));
        }
        rays.push(lv);
    }
    let cones = index_lists(v, "max_cones")?;
    Fan::from_max_cones(dim, rays, &cones)
}

/// A fan from a file path, or a builtin name such as `hirzebruch(2)`.
pub fn load_fan(source: &str) -> Result<Fan> {
    if let Ok(b) = source.parse::<BuiltinFan>() {
        return b.build();
    }
    let text = std::fs::read_to_string(source).map_err(|e| Error::InvalidInput(format!("cannot read {source}: {e}")))?;
    fan_from_value(&parse_json(&text)?)
}

fn int_json(x: &BigInt) -> Value {
    i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string()))
}

/// Canonical form: rays as given, maximal cones sorted.
pub fn fan_to_value(fan: &Fan) -> Value {
    let rays: Vec<Value> = fan.rays().iter().map(|r| Value::Array(r.coords().iter().map(int_json).collect())).collect();
    let mut max: Vec<Vec<usize>> = fan.maximal_cones().iter().map(|c| c.rays().to_vec()).collect();
    max.sort();
    json!({ "dim": fan.dim(), "rays": rays, "max_cones": max })
}

/// SHA-256 of the canonical fan JSON, hex encoded.
pub fn fan_hash(fan: &Fan) -> String {
    hex::encode(Sha256::digest(fan_to_value(fan).to_string().as_bytes()))
}

/// `{"vertices": r, "max_faces": [[…], …]}`.
pub fn complex_from_value(v: &Value) -> Result<SimplicialComplex> {
    let n = uint(field(v, "vertices")?, "/vertices")? as usize;
    let faces = index_lists(v, "max_faces")?;
    for (c, f) in faces.iter().enumerate() {
        if let Some(k) = f.iter().position(|&i| i >= n) {
            return Err(at(format!("/max_faces/{c}/{k}"), format!("vertex {} out of range (complex has {n})", f[k])));
        }
    }
    SimplicialComplex::from_max_faces(n, &faces)
}

pub fn complex_to_value(k: &SimplicialComplex) -> Value {
    let max: Vec<Vec<usize>> = k.maximal_faces().iter().map(|f| f.vertices().to_vec()).collect();
    json!({ "vertices": k.vertex_count(), "max_faces": max })
}

/// Either a fan or a complex; fans are recognised by their `rays` field.
pub enum ComplexSource {
    Fan(Fan),
    Complex(SimplicialComplex),
}

pub fn load_complex_source(source: &str) -> Result<ComplexSource> {
    if let Ok(b) = source.parse::<BuiltinFan>() {
        return Ok(ComplexSource::Fan(b.build()?));
    }
    let text = std::fs::read_to_string(source).map_err(|e| Error::InvalidInput(format!("cannot read {source}: {e}")))?;
    let v = parse_json(&text)?;
    if v.get("rays").is_some() {
        Ok(ComplexSource::Fan(fan_from_value(&v)?))
    } else {
        Ok(ComplexSource::Complex(complex_from_value(&v)?))
    }
}

fn gauss(v: &Value, ptr: &str) -> Result<GaussRat> {
    let pair = array(v, ptr)?;
    if pair.len() != 2 {
        return Err(at(ptr, "expected [re, im]"));
    }
    let part = |x: &Value, p: String| -> Result<_> {
        match x {
            Value::String(s) => GaussRat::parse_component(s).map_err(|e| at(p, e.to_string())),
            Value::Number(n) if n.is_i64() => Ok(num_rational::BigRational::from_integer(n.as_i64().unwrap_or(0).into())),
            _ => Err(at(p, "expected an integer or a \"n/d\" string")),
        }
    };
    Ok(GaussRat::new(part(&pair[0], format!("{ptr}/0"))?, part(&pair[1], format!("{ptr}/1"))?))
}

fn float(v: &Value, ptr: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| at(ptr, "expected a finite number"))
}

/// Coefficient form `{"polys": [[[re, im], …], …]}` with ascending
/// Gaussian-rational coefficients, optionally with `"degrees"`; or root form
/// `{"roots": [[[re, im, mult], …], …]}`.
pub fn system_from_value(v: &Value) -> Result<PolySystem> {
    let obj = v.as_object().ok_or_else(|| at("", "expected a JSON object"))?;
    match (obj.get("polys"), obj.get("roots")) {
        (Some(_), Some(_)) => Err(at("", "give either \"polys\" or \"roots\", not both")),
        (Some(polys), None) => {
            let mut out = Vec::new();
            for (i, p) in array(polys, "/polys")?.iter().enumerate() {
                let ptr = format!("/polys/{i}");
                let coeffs = array(p, &ptr)?
                    .iter()
                    .enumerate()
                    .map(|(j, c)| gauss(c, &format!("{ptr}/{j}")))
                    .collect::<Result<Vec<_>>>()?;
                let f = RationalPoly::new(coeffs);
                if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
                    return Err(at(ptr, "polynomial must be monic of positive degree"));
                }
                out.push(f);
            }
            let sys = PolySystem::coefficients(out)?;
            if let Some(d) = obj.get("degrees") {
                let want = array(d, "/degrees")?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| uint(x, &format!("/degrees/{i}")))
                    .collect::<Result<Vec<_>>>()?;
                if want.len() != sys.len() {
                    return Err(Error::LengthMismatch { expected: sys.len(), got: want.len() });
                }
                if let Some(i) = want.iter().zip(sys.degrees().entries()).position(|(a, b)| a != b) {
                    return Err(at(format!("/degrees/{i}"), format!("polynomial {i} has degree {}", sys.degrees().entries()[i])));
                }
            }
            Ok(sys)
        }
        (None, Some(roots)) => {
            let mut out = Vec::new();
            for (i, p) in array(roots, "/roots")?.iter().enumerate() {
                let ptr = format!("/roots/{i}");
                let mut rs = Vec::new();
                for (j, r) in array(p, &ptr)?.iter().enumerate() {
                    let rp = format!("{ptr}/{j}");
                    let t = array(r, &rp)?;
                    if t.len() != 3 {
                        return Err(at(rp, "expected [re, im, multiplicity]"));
                    }
                    let m = uint(&t[2], &format!("{rp}/2"))?;
                    let m = u32::try_from(m).ok().filter(|&m| m > 0).ok_or_else(|| at(format!("{rp}/2"), "multiplicity must be a positive 32-bit integer"))?;
                    rs.push((Complex64::new(float(&t[0], &format!("{rp}/0"))?, float(&t[1], &format!("{rp}/1"))?), m));
                }
                out.push(RootPoly::new(rs).map_err(|e| at(&ptr, e.to_string()))?);
            }
            PolySystem::roots(out)
        }
        (None, None) => Err(at("", "expected \"polys\" or \"roots\"")),
    }
}

pub fn load_system(path: &str) -> Result<PolySystem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    system_from_value(&parse_json(&text)?)
}

#[derive(Serialize)]
struct RootEntry(f64, f64, u32);

pub fn system_to_value(sys: &PolySystem) -> Value {
    match sys {
        PolySystem::Roots(ps) => {
            let roots: Vec<Vec<RootEntry>> = ps.iter().map(|p| p.roots().iter().map(|(z, m)| RootEntry(z.re, z.im, *m)).collect()).collect();
            json!({ "roots": roots })
        }
        PolySystem::Coefficients(ps) => {
            let polys: Vec<Vec<[String; 2]>> = ps
                .iter()
                .map(|p| p.coeffs().iter().map(|c| [GaussRat::component_string(&c.re), GaussRat::component_string(&c.im)]).collect())
                .collect();
            json!({ "polys": polys, "degrees": sys.degrees().entries() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_round_trip_and_hash() {
        let fan = BuiltinFan::Hirzebruch(2).build().unwrap();
        let v = fan_to_value(&fan);
        let back = fan_from_value(&v).unwrap();
        assert_eq!(back, fan);
        assert_eq!(fan_hash(&back), fan_hash(&fan));
        assert_eq!(fan_hash(&fan).len(), 64);
    }

    #[test]
    fn pointers_name_the_bad_spot() {
        let cases = [
            (r#"{"dim":2,"rays":[[1,0],[0,1,3]],"max_cones":[[0,1]]}"#, "/rays/1"),
            (r#"{"dim":2,"rays":[[1,0],[0,2]],"max_cones":[[0,1]]}"#, "/rays/1"),
            (r#"{"dim":2,"rays":[[1,0],[0,1]],"max_cones":[[0,5]]}"#, "/max_cones/0/1"),
            (r#"{"dim":2,"rays":[[1,0],[0,"x"]],"max_cones":[[0,1]]}"#, "/rays/1/1"),
            (r#"{"dim":2,"rays":[[1,0],[0,1]]}"#, "/max_cones"),
        ];
        for (text, want) in cases {
            match fan_from_value(&parse_json(text).unwrap()) {
                Err(Error::Structure { pointer, .. }) => assert_eq!(pointer, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_json("{\"dim\": 2,"), Err(Error::Structure { .. })));
    }

    #[test]
    fn systems_parse_in_both_forms() {
        let c = parse_json(r#"{"degrees":[2,1],"polys":[[["1","0"],["0","0"],["1","0"]],[["-1/2","3"],["1","0"]]]}"#).unwrap();
        let sys = system_from_value(&c).unwrap();
        assert_eq!(sys.degrees().entries(), &[2, 1]);
        assert_eq!(system_from_value(&system_to_value(&sys)).unwrap(), sys);
        let r = parse_json(r#"{"roots":[[[0.5,0,2]],[[1,1,1],[2,0,1]]]}"#).unwrap();
        let sys = system_from_value(&r).unwrap();
        assert_eq!(sys.degrees().entries(), &[2, 2]);
        let bad = parse_json(r#"{"polys":[[["1","0"],["2","0"]]]}"#).unwrap();
        assert!(matches!(system_from_value(&bad), Err(Error::Structure { pointer, .. }) if pointer == "/polys/0"));
        let mismatch = parse_json(r#"{"degrees":[1,1],"polys":[[["1","0"],["1","0"]]]}"#).unwrap();
        assert!(matches!(system_from_value(&mismatch), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn complexes_parse() {
        let v = parse_json(r#"{"vertices":3,"max_faces":[[0,1],[1,2]]}"#).unwrap();
        let k = complex_from_value(&v).unwrap();
        assert_eq!(k.maximal_faces().len(), 2);
        let bad = parse_json(r#"{"vertices":2,"max_faces":[[0,2]]}"#).unwrap();
        assert!(matches!(complex_from_value(&bad), Err(Error::Structure { pointer, .. }) if pointer == "/max_faces/0/1"));
    }
}
