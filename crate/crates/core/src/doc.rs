//! Versioned JSON documents with content hashes.
//!
//! A document is `{"kind", "version", "hash", "body"}`. The hash is `sha256:` followed by the
//! hex digest of the compact JSON encoding of the body; object keys are always sorted, so the
//! encoding (and hence the hash) does not depend on how the body was built. Exponents are
//! strings `"p/q"` and matrices are `[row, col, scalar]` triples in lexicographic order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::complexes::{FilteredComplex, NovikovMatrix};
use crate::gcw::{FiniteGroup, GcwComplex};
use crate::homology::{Bar, Barcode};
use crate::novikov::{format_energy, parse_energy, NovikovScalar, Valuation, Variant};
use crate::z2::{Generator, Z2Complex, Z2Matrix};
use crate::{Error, Result};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Complex,
    Gcw,
    Telescope,
    Map,
    Barcode,
    Report,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(v.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub kind: Kind,
    pub version: u32,
    pub hash: String,
    pub body: Value,
}

/// `sha256:<hex>` of the compact encoding of `body`.
pub fn content_hash(body: &Value) -> String {
    let bytes = serde_json::to_vec(body).expect("JSON values always serialize");
    format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))
}

impl Document {
    pub fn new(kind: Kind, body: Value) -> Self {
        Document { kind, version: VERSION, hash: content_hash(&body), body }
    }

    pub fn from_body<T: Serialize>(kind: Kind, body: &T) -> Result<Self> {
        Ok(Document::new(kind, serde_json::to_value(body)?))
    }

    pub fn body_as<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        Ok(serde_json::from_value(self.body.clone())?)
    }

    pub fn expect_kind(&self, kind: Kind) -> Result<&Self> {
        if self.kind != kind {
            return Err(Error::Parse(format!("expected a {kind} document, got {}", self.kind)));
        }
        Ok(self)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

impl FromStr for Document {
    type Err = Error;

    /// Parses and checks the version and hash.
    fn from_str(s: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(s)?;
        if doc.version != VERSION {
            return Err(Error::Parse(format!("unsupported document version {}", doc.version)));
        }
        let expected = content_hash(&doc.body);
        if doc.hash != expected {
            return Err(Error::Parse(format!("hash mismatch: document says {}, body hashes to {expected}", doc.hash)));
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorBody {
    pub label: String,
    pub degree: i32,
}

/// `[row, col, exponents]`.
pub type EntryBody = (usize, usize, Vec<String>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexBody {
    pub generators: Vec<GeneratorBody>,
    pub differential: Vec<EntryBody>,
    pub gap: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcwBody {
    pub generators: Vec<GeneratorBody>,
    /// `[row, col]` pairs of the `Z/2` boundary.
    pub boundary: Vec<(usize, usize)>,
    pub group: Vec<Vec<usize>>,
    pub action: Vec<Vec<usize>>,
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageBody {
    pub hash: String,
    pub complex: ComplexBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelescopeBody {
    pub stages: Vec<StageBody>,
    /// `maps[n]` is the matrix of `Cⁿ → Cⁿ⁺¹`.
    pub maps: Vec<Vec<EntryBody>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapBody {
    pub source: String,
    pub target: String,
    pub degree_shift: i32,
    pub entries: Vec<EntryBody>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarBody {
    pub degree: i32,
    pub birth: String,
    /// `"inf"` for free summands.
    pub length: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarcodeBody {
    pub bars: Vec<BarBody>,
}

fn generators_body(gens: &[Generator]) -> Vec<GeneratorBody> {
    gens.iter().map(|g| GeneratorBody { label: g.label.clone(), degree: g.degree }).collect()
}

fn generators_from(body: &[GeneratorBody]) -> Vec<Generator> {
    body.iter().map(|g| Generator::new(g.label.clone(), g.degree)).collect()
}

pub fn matrix_body(m: &NovikovMatrix) -> Vec<EntryBody> {
    m.entries().into_iter().map(|(r, c, s)| (r, c, s.exponents().iter().map(format_energy).collect())).collect()
}

pub fn matrix_from(nrows: usize, ncols: usize, entries: &[EntryBody]) -> Result<NovikovMatrix> {
    let parsed = entries
        .iter()
        .map(|(r, c, exps)| {
            let e = exps.iter().map(|x| parse_energy(x)).collect::<Result<Vec<_>>>()?;
            Ok((*r, *c, NovikovScalar::from_exponents(Variant::Ring, e)?))
        })
        .collect::<Result<Vec<_>>>()?;
    NovikovMatrix::from_entries(nrows, ncols, parsed)
}

pub fn complex_body(c: &FilteredComplex) -> ComplexBody {
    ComplexBody {
        generators: generators_body(c.generators()),
        differential: matrix_body(c.differential()),
        gap: c.claimed_gap().map(|g| format_energy(&g)),
    }
}

/// Rebuilds a complex without validating it (see [`FilteredComplex::validate`]).
pub fn complex_from(body: &ComplexBody) -> Result<FilteredComplex> {
    let n = body.generators.len();
    let gap = body.gap.as_deref().map(parse_energy).transpose()?;
    Ok(FilteredComplex::from_parts(generators_from(&body.generators), matrix_from(n, n, &body.differential)?, gap))
}

pub fn complex_doc(c: &FilteredComplex) -> Result<Document> {
    Document::from_body(Kind::Complex, &complex_body(c))
}

pub fn z2_complex_doc(c: &Z2Complex) -> Result<Document> {
    complex_doc(&FilteredComplex::lift(c))
}

pub fn complex_from_doc(doc: &Document) -> Result<FilteredComplex> {
    complex_from(&doc.expect_kind(Kind::Complex)?.body_as()?)
}

pub fn gcw_doc(c: &GcwComplex) -> Result<Document> {
    let body = GcwBody {
        generators: generators_body(c.complex().generators()),
        boundary: c.complex().differential().entries(),
        group: c.group().table().to_vec(),
        action: c.action().to_vec(),
        free: c.is_free(),
    };
    Document::from_body(Kind::Gcw, &body)
}

/// Rebuilds a G-CW complex with its claimed free flag, without validating the action.
pub fn gcw_from_doc(doc: &Document) -> Result<GcwComplex> {
    let body: GcwBody = doc.expect_kind(Kind::Gcw)?.body_as()?;
    let n = body.generators.len();
    let d = Z2Matrix::from_entries(n, n, body.boundary.iter().copied())?;
    let complex = Z2Complex::new_unchecked(generators_from(&body.generators), d);
    Ok(GcwComplex::from_parts(complex, FiniteGroup::new(body.group)?, body.action, body.free))
}

pub fn telescope_doc(stages: &[FilteredComplex], maps: &[NovikovMatrix]) -> Result<Document> {
    let stages = stages
        .iter()
        .map(|c| {
            let complex = complex_body(c);
            Ok(StageBody { hash: content_hash(&serde_json::to_value(&complex)?), complex })
        })
        .collect::<Result<Vec<_>>>()?;
    Document::from_body(Kind::Telescope, &TelescopeBody { stages, maps: maps.iter().map(matrix_body).collect() })
}

/// Stages and connecting matrices of a telescope document; every stage hash is checked.
pub fn telescope_from_doc(doc: &Document) -> Result<(Vec<FilteredComplex>, Vec<NovikovMatrix>)> {
    let body: TelescopeBody = doc.expect_kind(Kind::Telescope)?.body_as()?;
    let mut stages = Vec::with_capacity(body.stages.len());
    for (n, s) in body.stages.iter().enumerate() {
        let h = content_hash(&serde_json::to_value(&s.complex)?);
        if h != s.hash {
            return Err(Error::Parse(format!("stage {n} hash mismatch: {} vs {h}", s.hash)));
        }
        stages.push(complex_from(&s.complex)?);
    }
    if body.maps.len() + 1 != stages.len().max(1) {
        return Err(Error::Parse(format!("{} stages need {} maps, got {}", stages.len(), stages.len().saturating_sub(1), body.maps.len())));
    }
    let maps = body
        .maps
        .iter()
        .enumerate()
        .map(|(n, m)| matrix_from(stages[n + 1].len(), stages[n].len(), m))
        .collect::<Result<Vec<_>>>()?;
    Ok((stages, maps))
}

pub fn barcode_body(b: &Barcode) -> BarcodeBody {
    BarcodeBody {
        bars: b
            .bars
            .iter()
            .map(|bar| BarBody { degree: bar.degree, birth: format_energy(&bar.birth), length: bar.length.to_string() })
            .collect(),
    }
}

pub fn barcode_from(body: &BarcodeBody) -> Result<Barcode> {
    let bars = body
        .bars
        .iter()
        .map(|b| {
            let length = if b.length == "inf" { Valuation::Infinity } else { Valuation::Finite(parse_energy(&b.length)?) };
            Ok(Bar { degree: b.degree, birth: parse_energy(&b.birth)?, length })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Barcode::new(bars))
}

pub fn barcode_doc(b: &Barcode) -> Result<Document> {
    Document::from_body(Kind::Barcode, &barcode_body(b))
}
