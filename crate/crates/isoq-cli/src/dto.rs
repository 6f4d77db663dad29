//! JSON shapes for the command line.
//!
//! Rationals travel as strings ("3/4", "-5") so nothing is rounded and the
//! output is byte-stable. Struct field order below is the key order of the
//! emitted JSON; serde_json preserves it.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use isoq_core::arith::Place;
use isoq_core::kxmodule::ModuleSpec;
use isoq_core::poly::Poly;
use isoq_core::qspace::{Mat, QuadraticSpace};
use isoq_core::transfer::IsometryCertificate;

/// One primary block f^e of a module, with multiplicity n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentDto {
    /// Coefficients of the irreducible polynomial, constant term first.
    pub poly: Vec<String>,
    pub e: u32,
    pub n: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDto {
    pub components: Vec<ComponentDto>,
}

/// Input shape shared by decide, construct, and invariants. Unknown keys
/// are tolerated so a certificate file can be replayed through decide.
#[derive(Debug, Default, Deserialize)]
pub struct Request {
    #[serde(default)]
    pub gram: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub module: Option<ModuleDto>,
    #[serde(default)]
    pub det: Option<String>,
    #[serde(default)]
    pub place: Option<String>,
    #[serde(default)]
    pub prime_bound: Option<u64>,
}

/// Certificate on the wire: a Gram matrix, the isometry t, and the module
/// it carries.
#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateDto {
    pub gram: Vec<Vec<String>>,
    pub t: Vec<Vec<String>>,
    pub module: ModuleDto,
}

#[derive(Debug, Serialize)]
pub struct VerdictDto {
    pub answer: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct PlaceSymbol {
    pub place: String,
    pub hasse: i32,
}

#[derive(Debug, Serialize)]
pub struct InvariantsDto {
    pub dim: usize,
    pub det: String,
    pub det_class: String,
    pub signature: [usize; 2],
    pub support: Vec<String>,
    pub hasse: Vec<PlaceSymbol>,
    pub global_witt_index: usize,
    pub hyperbolic: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyDto {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let (ns, ds) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(ns).map_err(|_| format!("bad rational {:?}", s))?;
    let d = BigInt::from_str(ds).map_err(|_| format!("bad rational {:?}", s))?;
    if d.is_zero() {
        return Err(format!("bad rational {:?}: zero denominator", s));
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_place(s: &str) -> Result<Place, String> {
    if s == "inf" {
        return Ok(Place::Real);
    }
    match s.parse::<u64>() {
        Ok(p) => Ok(Place::Prime(p)),
        Err(_) => Err(format!("bad place {:?}: want a prime or \"inf\"", s)),
    }
}

pub fn parse_matrix(rows: &[Vec<String>]) -> Result<Mat, String> {
    let mut out: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    for row in rows {
        out.push(row.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?);
    }
    Mat::from_rows(out).map_err(|e| format!("bad matrix: {}", e))
}

pub fn parse_gram(rows: &[Vec<String>]) -> Result<QuadraticSpace, String> {
    let m = parse_matrix(rows)?;
    QuadraticSpace::new(m).map_err(|e| format!("bad gram matrix: {}", e))
}

pub fn matrix_strings(m: &Mat) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn parse_module(dto: &ModuleDto) -> Result<ModuleSpec, String> {
    let mut raw = Vec::with_capacity(dto.components.len());
    for c in &dto.components {
        let coeffs =
            c.poly.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
        raw.push((Poly::from_coeffs(coeffs), c.e, c.n));
    }
    ModuleSpec::new(raw).map_err(|e| format!("bad module: {}", e))
}

pub fn module_dto(spec: &ModuleSpec) -> ModuleDto {
    ModuleDto {
        components: spec
            .components()
            .iter()
            .map(|c| ComponentDto {
                poly: c.f.coeffs().iter().map(|x| x.to_string()).collect(),
                e: c.e,
                n: c.n,
            })
            .collect(),
    }
}

pub fn certificate_dto(cert: &IsometryCertificate) -> CertificateDto {
    CertificateDto {
        gram: matrix_strings(&cert.gram),
        t: matrix_strings(&cert.isometry),
        module: module_dto(&cert.module),
    }
}

pub fn parse_certificate(dto: &CertificateDto) -> Result<IsometryCertificate, String> {
    Ok(IsometryCertificate {
        gram: parse_matrix(&dto.gram)?,
        isometry: parse_matrix(&dto.t)?,
        module: parse_module(&dto.module)?,
    })
}
