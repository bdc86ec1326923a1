//! JSON input records and their conversion into checked domain values.
//! Frame indices are 1-based in files; polynomials are strings over `x1..xm`
//! (`x1..xm, xi1..xir` for linear records).

use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bialgebroid::{AlgebroidData, BialgebroidData, BundleMorphism};
use crate::error::{Error, Result};
use crate::exterior::{Frame, FrameKind, MultiVector};
use crate::extension::{AnchorMap, GeneratorBracket, GradedBracket};
use crate::filippov::StructureConstants;
use crate::linalg::RatMatrix;
use crate::linear::{total_space_names, LinearNambuData};
use crate::nambu::NambuTensor;
use crate::poly::{default_names, Poly};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub indices: Vec<usize>,
    pub coeff: String,
}

pub type MultiVectorRecord = Vec<TermRecord>;

/// One table entry: `[e_{i1},…] = value` or `ρ(e_{i1}∧…) = value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub indices: Vec<usize>,
    pub value: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConstantsRecord {
    pub dim: usize,
    pub arity: usize,
    #[serde(default)]
    pub base_dim: usize,
    pub entries: Vec<EntryRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorRecord {
    pub base_dim: usize,
    pub order: usize,
    pub tensor: MultiVectorRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearRecord {
    pub base_dim: usize,
    pub fiber_rank: usize,
    pub order: usize,
    pub tensor: MultiVectorRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKindRecord {
    Tangent,
    Cotangent,
    #[default]
    Bundle,
    DualBundle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub base_dim: usize,
    pub rank: usize,
    #[serde(default)]
    pub kind: FrameKindRecord,
}

/// Either a structure-constants table or `{"nambu_form": <tensor>}`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nambu_form: Option<TensorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidRecord {
    pub frame: FrameRecord,
    pub bracket: StructureConstantsRecord,
    pub anchor: Vec<EntryRecord>,
}

/// The full form `{algebroid, dual_bracket, rho}` or the shorthand
/// `{nambu, transport?}` for `(TM, T*M)` of a tensor, optionally moved to a
/// trivial bundle through a constant invertible matrix.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BialgebroidRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nambu: Option<TensorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebroid: Option<AlgebroidRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_bracket: Option<GeneratorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<EntryRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismRecord {
    pub source: BialgebroidRecord,
    pub target: BialgebroidRecord,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedBracketRecord {
    pub frame: FrameRecord,
    pub generator: GeneratorRecord,
    #[serde(default)]
    pub anchor: Vec<EntryRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendRecord {
    pub bracket: GradedBracketRecord,
    pub arguments: Vec<MultiVectorRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormBracketRecord {
    pub tensor: TensorRecord,
    pub forms: Vec<MultiVectorRecord>,
}

/// Deserializes a record; errors carry the field path and line/column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("at {path}: {}", e.into_inner()))
    })
}

fn at(path: &str, e: Error) -> Error {
    Error::Parse(format!("at {path}: {e}"))
}

fn zero_based(indices: &[usize], bound: usize, path: &str) -> Result<Vec<usize>> {
    indices
        .iter()
        .map(|&i| {
            if i == 0 || i > bound {
                Err(at(path, Error::IndexOutOfRange { index: i, bound, what: "1-based frame elements" }))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

fn polys(values: &[String], names: &[String], path: &str) -> Result<Vec<Poly>> {
    values.iter().enumerate().map(|(k, s)| Poly::parse(s, names).map_err(|e| at(&format!("{path}[{k}]"), e))).collect()
}

fn check_unique(seen: &mut BTreeSet<Vec<usize>>, idx: &[usize], path: &str) -> Result<()> {
    let mut key = idx.to_vec();
    key.sort_unstable();
    if !seen.insert(key) {
        return Err(at(path, Error::Invalid("duplicate entry".into())));
    }
    Ok(())
}

pub fn multivector(rec: &[TermRecord], frame: Frame, names: &[String], path: &str) -> Result<MultiVector> {
    let mut out = MultiVector::zero(frame);
    for (k, t) in rec.iter().enumerate() {
        let p = format!("{path}[{k}]");
        let idx = zero_based(&t.indices, frame.rank, &format!("{p}.indices"))?;
        let c = Poly::parse(&t.coeff, names).map_err(|e| at(&format!("{p}.coeff"), e))?;
        out.add_assign(&MultiVector::monomial(frame, &idx, c).map_err(|e| at(&p, e))?);
    }
    Ok(out)
}

fn table(dim: usize, arity: usize, base_dim: usize, entries: &[EntryRecord], path: &str) -> Result<StructureConstants> {
    let names = default_names(base_dim);
    let mut sc = StructureConstants::new(dim, arity, base_dim).map_err(|e| at(path, e))?;
    let mut seen = BTreeSet::new();
    for (k, e) in entries.iter().enumerate() {
        let p = format!("{path}.entries[{k}]");
        let idx = zero_based(&e.indices, dim, &format!("{p}.indices"))?;
        check_unique(&mut seen, &idx, &p)?;
        sc.set(&idx, polys(&e.value, &names, &format!("{p}.value"))?).map_err(|err| at(&p, err))?;
    }
    Ok(sc)
}

pub fn structure_constants(rec: &StructureConstantsRecord, path: &str) -> Result<StructureConstants> {
    table(rec.dim, rec.arity, rec.base_dim, &rec.entries, path)
}

pub fn anchor(entries: &[EntryRecord], source: Frame, arity_in: usize, path: &str) -> Result<AnchorMap> {
    let names = default_names(source.base_dim);
    let mut a = AnchorMap::new(source, arity_in);
    let mut seen = BTreeSet::new();
    for (k, e) in entries.iter().enumerate() {
        let p = format!("{path}[{k}]");
        let idx = zero_based(&e.indices, source.rank, &format!("{p}.indices"))?;
        check_unique(&mut seen, &idx, &p)?;
        a.set(&idx, polys(&e.value, &names, &format!("{p}.value"))?).map_err(|err| at(&p, err))?;
    }
    Ok(a)
}

fn tensor_with_names(base_dim: usize, order: usize, rec: &[TermRecord], names: &[String], path: &str) -> Result<NambuTensor> {
    let p = multivector(rec, Frame::tangent(base_dim), names, &format!("{path}.tensor"))?;
    NambuTensor::new(p, order).map_err(|e| at(path, e))
}

pub fn tensor(rec: &TensorRecord, path: &str) -> Result<NambuTensor> {
    tensor_with_names(rec.base_dim, rec.order, &rec.tensor, &default_names(rec.base_dim), path)
}

pub fn linear(rec: &LinearRecord) -> Result<LinearNambuData> {
    let names = total_space_names(rec.base_dim, rec.fiber_rank);
    let t = tensor_with_names(rec.base_dim + rec.fiber_rank, rec.order, &rec.tensor, &names, "$")?;
    LinearNambuData::new(rec.base_dim, rec.fiber_rank, t).map_err(|e| at("$", e))
}

pub fn frame(rec: &FrameRecord) -> Frame {
    let kind = match rec.kind {
        FrameKindRecord::Tangent => FrameKind::Tangent,
        FrameKindRecord::Cotangent => FrameKind::Cotangent,
        FrameKindRecord::Bundle => FrameKind::Bundle,
        FrameKindRecord::DualBundle => FrameKind::DualBundle,
    };
    Frame { base_dim: rec.base_dim, rank: rec.rank, kind }
}

fn frame_checked(rec: &FrameRecord, path: &str) -> Result<Frame> {
    let f = frame(rec);
    if matches!(f.kind, FrameKind::Tangent | FrameKind::Cotangent) && f.rank != f.base_dim {
        return Err(at(path, Error::Invalid("tangent and cotangent frames have rank = base_dim".into())));
    }
    Ok(f)
}

pub fn generator(rec: &GeneratorRecord, path: &str) -> Result<GeneratorBracket> {
    let table_fields = rec.dim.is_some() || rec.arity.is_some() || rec.base_dim.is_some() || rec.entries.is_some();
    match (&rec.nambu_form, table_fields) {
        (Some(t), false) => Ok(GeneratorBracket::NambuForm(tensor(t, &format!("{path}.nambu_form"))?)),
        (None, true) => {
            let missing = |f: &str| at(path, Error::Parse(format!("missing field `{f}`")));
            let dim = rec.dim.ok_or_else(|| missing("dim"))?;
            let arity = rec.arity.ok_or_else(|| missing("arity"))?;
            let entries = rec.entries.as_deref().ok_or_else(|| missing("entries"))?;
            Ok(GeneratorBracket::Table(table(dim, arity, rec.base_dim.unwrap_or(0), entries, path)?))
        }
        _ => Err(at(path, Error::Parse("expected either a structure-constants table or `nambu_form`".into()))),
    }
}

pub fn graded_bracket(rec: &GradedBracketRecord, path: &str) -> Result<GradedBracket> {
    let f = frame_checked(&rec.frame, &format!("{path}.frame"))?;
    let g = generator(&rec.generator, &format!("{path}.generator"))?;
    let n = match &g {
        GeneratorBracket::Table(sc) => sc.arity(),
        GeneratorBracket::NambuForm(t) => t.order(),
    };
    let a = anchor(&rec.anchor, f, n - 1, &format!("{path}.anchor"))?;
    GradedBracket::new(g, a, f).map_err(|e| at(path, e))
}

pub fn algebroid(rec: &AlgebroidRecord, path: &str) -> Result<AlgebroidData> {
    let f = frame_checked(&rec.frame, &format!("{path}.frame"))?;
    if f.is_covariant() {
        return Err(at(&format!("{path}.frame"), Error::Invalid("an algebroid frame is tangent or bundle".into())));
    }
    let sc = structure_constants(&rec.bracket, &format!("{path}.bracket"))?;
    let a = anchor(&rec.anchor, f, 1, &format!("{path}.anchor"))?;
    AlgebroidData::new(f, sc, a).map_err(|e| at(path, e))
}

fn constant_matrix(rows: &[Vec<String>], path: &str) -> Result<RatMatrix> {
    let parsed: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    let p = Poly::parse(s, &[]).map_err(|e| at(&format!("{path}[{i}][{j}]"), e))?;
                    Ok(p.constant_term())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    if parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(at(path, Error::Invalid("transport matrix must be square".into())));
    }
    Ok(RatMatrix::from_rows(parsed))
}

pub fn bialgebroid(rec: &BialgebroidRecord, path: &str) -> Result<BialgebroidData> {
    let full = rec.algebroid.is_some() || rec.dual_bracket.is_some() || rec.rho.is_some();
    match (&rec.nambu, full) {
        (Some(t), false) => {
            let t = tensor(t, &format!("{path}.nambu"))?;
            match &rec.transport {
                None => Ok(BialgebroidData::tangent_cotangent(t)),
                Some(rows) => {
                    let p = format!("{path}.transport");
                    let mat = constant_matrix(rows, &p)?;
                    if mat.rows() != t.base_dim() {
                        return Err(at(&p, Error::DimensionMismatch { expected: t.base_dim(), got: mat.rows() }));
                    }
                    BialgebroidData::transported(&t, &mat).map_err(|e| at(&p, e))
                }
            }
        }
        (None, true) if rec.transport.is_none() => {
            let missing = |f: &str| at(path, Error::Parse(format!("missing field `{f}`")));
            let a = algebroid(rec.algebroid.as_ref().ok_or_else(|| missing("algebroid"))?, &format!("{path}.algebroid"))?;
            let g = generator(rec.dual_bracket.as_ref().ok_or_else(|| missing("dual_bracket"))?, &format!("{path}.dual_bracket"))?;
            let n = match &g {
                GeneratorBracket::Table(sc) => sc.arity(),
                GeneratorBracket::NambuForm(t) => t.order(),
            };
            let rho = anchor(rec.rho.as_ref().ok_or_else(|| missing("rho"))?, a.dual_frame(), n - 1, &format!("{path}.rho"))?;
            BialgebroidData::from_parts(a, g, rho).map_err(|e| at(path, e))
        }
        _ => Err(at(path, Error::Parse("expected either `nambu` (with optional `transport`) or `algebroid`, `dual_bracket`, `rho`".into()))),
    }
}

pub fn morphism(rec: &MorphismRecord) -> Result<(BialgebroidData, BialgebroidData, BundleMorphism)> {
    let src = bialgebroid(&rec.source, "$.source")?;
    let dst = bialgebroid(&rec.target, "$.target")?;
    let names = default_names(src.algebroid().base_dim());
    let rows = rec
        .matrix
        .iter()
        .enumerate()
        .map(|(i, row)| polys(row, &names, &format!("$.matrix[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let f = BundleMorphism::new(rows).map_err(|e| at("$.matrix", e))?;
    Ok((src, dst, f))
}

pub fn multivector_record(x: &MultiVector) -> MultiVectorRecord {
    x.terms()
        .map(|(k, c)| TermRecord { indices: k.iter().map(|&i| i as usize + 1).collect(), coeff: c.to_string() })
        .collect()
}

pub fn tensor_record(t: &NambuTensor) -> TensorRecord {
    TensorRecord { base_dim: t.base_dim(), order: t.order(), tensor: multivector_record(t.tensor()) }
}

pub fn structure_constants_record(sc: &StructureConstants) -> StructureConstantsRecord {
    StructureConstantsRecord {
        dim: sc.dim(),
        arity: sc.arity(),
        base_dim: sc.num_vars(),
        entries: sc
            .entries()
            .map(|(k, v)| EntryRecord {
                indices: k.iter().map(|&i| i as usize + 1).collect(),
                value: v.iter().map(Poly::to_string).collect(),
            })
            .collect(),
    }
}

pub fn anchor_record(a: &AnchorMap) -> Vec<EntryRecord> {
    a.entries()
        .map(|(k, v)| EntryRecord {
            indices: k.iter().map(|&i| i as usize + 1).collect(),
            value: v.iter().map(Poly::to_string).collect(),
        })
        .collect()
}
