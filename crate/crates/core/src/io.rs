//! JSON file formats.
//!
//! Every integer is written as a decimal string; readers also accept JSON
//! integers. A polynomial is an object from exponent to coefficient, e.g.
//! `{"0": "1", "1": "-1"}` for `1 - t`. Matrices are row-major lists of
//! polynomials. Move indices are 1-based.
//!
//! ```text
//! form         {"rank", "entries"}
//! certificate  {"g", "c_list", "P", "det_canonical"}
//! surface      {"label", "euler", "events": [{"kind", "sign", "k"}]}
//! complex      {"ranks", "differentials"}   top degree first
//! bounds       {"max_depth", "degree", "coeff", "unit_exponent"}
//! ```

use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::forms::{FormError, HermitianForm, MainStrategyCertificate};
use crate::homology::{ChainComplex, HomologyError};
use crate::laurent::{LaurentPoly, Sign};
use crate::matrix::Matrix;
use crate::search::{MoveSpec, SearchBounds, SearchOutcome};
use crate::wallcalc::{EventKind, IntersectionEvent, SurfaceModel, WallClass};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// An integer carried as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dec<T>(pub T);

impl<T: fmt::Display> Serialize for Dec<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

struct DecVisitor<T>(PhantomData<T>);

impl<T> Visitor<'_> for DecVisitor<T>
where
    T: FromStr,
{
    type Value = Dec<T>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a decimal integer string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
        v.trim().parse().map(Dec).map_err(|_| E::custom(format!("invalid integer {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
        self.visit_str(&v.to_string())
    }
}

impl<'de, T: FromStr> Deserialize<'de> for Dec<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(DecVisitor(PhantomData))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.num_terms()))?;
        for (k, c) in self.terms() {
            map.serialize_entry(&k.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

struct PolyVisitor;

impl<'de> Visitor<'de> for PolyVisitor {
    type Value = LaurentPoly;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an object mapping exponents to coefficients")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
        let mut terms = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        while let Some((key, Dec(c))) = access.next_entry::<String, Dec<BigInt>>()? {
            let k: i64 = key.trim().parse().map_err(|_| de::Error::custom(format!("invalid exponent {key:?}")))?;
            if !seen.insert(k) {
                return Err(de::Error::custom(format!("duplicate exponent {k}")));
            }
            terms.push((k, c));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_map(PolyVisitor)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub rank: Dec<usize>,
    pub entries: Vec<LaurentPoly>,
}

impl FormFile {
    pub fn from_form(a: &HermitianForm) -> Self {
        FormFile { rank: Dec(a.rank()), entries: a.matrix().entries().to_vec() }
    }

    pub fn into_form(self) -> Result<HermitianForm, IoError> {
        let n = self.rank.0;
        if self.entries.len() != n * n {
            return Err(IoError::Invalid(format!("rank {n} form needs {} entries, got {}", n * n, self.entries.len())));
        }
        let m = Matrix::from_row_major(n, n, self.entries).map_err(FormError::from)?;
        Ok(HermitianForm::new(m)?)
    }
}

#[derive(Serialize, Deserialize)]
pub struct CertificateFile {
    pub g: Dec<usize>,
    pub c_list: Vec<LaurentPoly>,
    #[serde(rename = "P")]
    pub p: Vec<LaurentPoly>,
    pub det_canonical: LaurentPoly,
}

impl CertificateFile {
    pub fn from_certificate(cert: &MainStrategyCertificate) -> Self {
        CertificateFile {
            g: Dec(cert.genus),
            c_list: cert.c_list.clone(),
            p: cert.reduction.matrix().entries().to_vec(),
            det_canonical: cert.det_canonical.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct EventRecord {
    pub kind: String,
    pub sign: String,
    pub k: Dec<i64>,
}

#[derive(Serialize, Deserialize)]
pub struct SurfaceFile {
    #[serde(default)]
    pub label: String,
    pub euler: Dec<BigInt>,
    pub events: Vec<EventRecord>,
}

fn parse_kind(s: &str) -> Option<EventKind> {
    match s {
        "generic_double_point" | "GenericDoublePoint" => Some(EventKind::GenericDoublePoint),
        "torus_piercing" | "TorusPiercing" => Some(EventKind::TorusPiercing),
        "disc_self_intersection" | "DiscSelfIntersection" => Some(EventKind::DiscSelfIntersection),
        _ => None,
    }
}

fn kind_name(k: EventKind) -> &'static str {
    match k {
        EventKind::GenericDoublePoint => "generic_double_point",
        EventKind::TorusPiercing => "torus_piercing",
        EventKind::DiscSelfIntersection => "disc_self_intersection",
    }
}

pub fn parse_sign(s: &str) -> Option<Sign> {
    match s.trim() {
        "+" | "+1" | "1" => Some(Sign::Plus),
        "-" | "-1" => Some(Sign::Minus),
        _ => None,
    }
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "1",
        Sign::Minus => "-1",
    }
}

impl SurfaceFile {
    pub fn from_model(s: &SurfaceModel) -> Self {
        SurfaceFile {
            label: s.label.clone(),
            euler: Dec(s.euler.clone()),
            events: s
                .events
                .iter()
                .map(|e| EventRecord { kind: kind_name(e.kind).into(), sign: sign_str(e.sign).into(), k: Dec(e.k) })
                .collect(),
        }
    }

    pub fn into_model(self) -> Result<SurfaceModel, IoError> {
        let events = self
            .events
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                let kind = parse_kind(&e.kind)
                    .ok_or_else(|| IoError::Invalid(format!("event {i}: unknown event kind {:?}", e.kind)))?;
                let sign = parse_sign(&e.sign)
                    .ok_or_else(|| IoError::Invalid(format!("event {i}: invalid sign {:?}", e.sign)))?;
                Ok(IntersectionEvent::new(kind, sign, e.k.0))
            })
            .collect::<Result<_, IoError>>()?;
        Ok(SurfaceModel { label: self.label, events, euler: self.euler.0 })
    }
}

#[derive(Serialize, Deserialize)]
pub struct ComplexFile {
    pub ranks: Vec<Dec<usize>>,
    pub differentials: Vec<Vec<LaurentPoly>>,
}

impl ComplexFile {
    pub fn from_complex(c: &ChainComplex) -> Self {
        ComplexFile {
            ranks: c.ranks().iter().map(|&r| Dec(r)).collect(),
            differentials: c.differentials().iter().map(|d| d.entries().to_vec()).collect(),
        }
    }

    pub fn into_complex(self) -> Result<ChainComplex, IoError> {
        let ranks: Vec<usize> = self.ranks.into_iter().map(|d| d.0).collect();
        if self.differentials.len() + 1 != ranks.len().max(1) {
            return Err(IoError::Invalid(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                self.differentials.len()
            )));
        }
        let mats = self
            .differentials
            .into_iter()
            .enumerate()
            .map(|(idx, entries)| {
                let (rows, cols) = (ranks[idx + 1], ranks[idx]);
                Matrix::from_row_major(rows, cols, entries)
                    .map_err(|e| IoError::Invalid(format!("differential {}: {e}", ranks.len() - 1 - idx)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChainComplex::new(ranks, mats)?)
    }
}

#[derive(Serialize, Deserialize)]
pub struct BoundsRecord {
    pub max_depth: Dec<usize>,
    pub degree: Dec<u32>,
    pub coeff: Dec<u32>,
    pub unit_exponent: Dec<u32>,
}

impl From<&SearchBounds> for BoundsRecord {
    fn from(b: &SearchBounds) -> Self {
        BoundsRecord {
            max_depth: Dec(b.max_depth),
            degree: Dec(b.degree),
            coeff: Dec(b.coeff),
            unit_exponent: Dec(b.unit_exponent),
        }
    }
}

impl From<BoundsRecord> for SearchBounds {
    fn from(b: BoundsRecord) -> Self {
        SearchBounds {
            max_depth: b.max_depth.0,
            degree: b.degree.0,
            coeff: b.coeff.0,
            unit_exponent: b.unit_exponent.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: String,
    pub i: Dec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Dec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<LaurentPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Dec<i64>>,
}

impl From<&MoveSpec> for MoveRecord {
    fn from(m: &MoveSpec) -> Self {
        let blank = |kind: &str, i: usize| MoveRecord {
            kind: kind.into(),
            i: Dec(i + 1),
            j: None,
            p: None,
            sign: None,
            k: None,
        };
        match m {
            MoveSpec::Transvection { i, j, p } => {
                MoveRecord { j: Some(Dec(j + 1)), p: Some(p.clone()), ..blank("transvection", *i) }
            }
            MoveSpec::UnitScale { i, sign, k } => {
                MoveRecord { sign: Some(sign_str(*sign).into()), k: Some(Dec(*k)), ..blank("unit_scale", *i) }
            }
            MoveSpec::Swap { i, j } => MoveRecord { j: Some(Dec(j + 1)), ..blank("swap", *i) },
        }
    }
}

impl TryFrom<MoveRecord> for MoveSpec {
    type Error = IoError;
    fn try_from(r: MoveRecord) -> Result<Self, IoError> {
        let idx = |v: usize| v.checked_sub(1).ok_or_else(|| IoError::Invalid("move indices are 1-based".into()));
        let i = idx(r.i.0)?;
        let need_j = || -> Result<usize, IoError> {
            idx(r.j.as_ref().ok_or_else(|| IoError::Invalid(format!("{} needs j", r.kind)))?.0)
        };
        match r.kind.as_str() {
            "transvection" => Ok(MoveSpec::Transvection {
                i,
                j: need_j()?,
                p: r.p.clone().ok_or_else(|| IoError::Invalid("transvection needs p".into()))?,
            }),
            "unit_scale" => Ok(MoveSpec::UnitScale {
                i,
                sign: r
                    .sign
                    .as_deref()
                    .and_then(parse_sign)
                    .ok_or_else(|| IoError::Invalid("unit_scale needs sign".into()))?,
                k: r.k.as_ref().ok_or_else(|| IoError::Invalid("unit_scale needs k".into()))?.0,
            }),
            "swap" => Ok(MoveSpec::Swap { i, j: need_j()? }),
            other => Err(IoError::Invalid(format!("unknown move kind {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<Dec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moves: Option<Vec<MoveRecord>>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<LaurentPoly>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<FormFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Dec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl OutcomeRecord {
    pub fn new(outcome: &SearchOutcome, target: &HermitianForm) -> Self {
        let empty = OutcomeRecord {
            status: String::new(),
            depth: None,
            moves: None,
            p: None,
            target: None,
            states: None,
            reason: None,
        };
        match outcome {
            SearchOutcome::Found { moves, base_change } => OutcomeRecord {
                status: "found".into(),
                depth: Some(Dec(moves.len())),
                moves: Some(moves.iter().map(MoveRecord::from).collect()),
                p: Some(base_change.matrix().entries().to_vec()),
                target: Some(FormFile::from_form(target)),
                ..empty
            },
            SearchOutcome::Exhausted { states } => {
                OutcomeRecord { status: "exhausted".into(), states: Some(Dec(*states)), ..empty }
            }
            SearchOutcome::ObstructionMismatch { reason } => {
                OutcomeRecord { status: "obstruction_mismatch".into(), reason: Some(reason.clone()), ..empty }
            }
        }
    }
}

pub fn wall_class_json(w: &WallClass) -> serde_json::Value {
    let map = w.classes().map(|(r, c)| (r.to_string(), serde_json::Value::String(c.to_string()))).collect();
    serde_json::Value::Object(map)
}
