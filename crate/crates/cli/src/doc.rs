//! JSON documents: `{schema_version, kind, payload}` with one kind per file.
//!
//! Field elements are strings (`"3"`, `"-1/2"`); matrices are lists of rows.
//! Every conversion into library types validates shapes and names the
//! offending entry by its path.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use quivercell_core::cells::{Cell, Flag, Mosaic};
use quivercell_core::cover::{CoverRepresentation, CoverWindow};
use quivercell_core::{DimVector, Field, FieldSpec, Matrix, Quiver, RElement, Representation};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Quiver,
    Representation,
    Relement,
    Cell,
    Mosaic,
    CoverRep,
    Report,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Quiver => "quiver",
            Kind::Representation => "representation",
            Kind::Relement => "relement",
            Kind::Cell => "cell",
            Kind::Mosaic => "mosaic",
            Kind::CoverRep => "cover_rep",
            Kind::Report => "report",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: String,
    pub kind: Kind,
    pub payload: Value,
}

/// A schema or invariant violation, with the path of the offending entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for DocError {}

fn err(path: impl Into<String>, message: impl fmt::Display) -> DocError {
    DocError { path: path.into(), message: message.to_string() }
}

pub type DocResult<T> = Result<T, DocError>;

pub type MatrixDoc = Vec<Vec<String>>;
pub type Blocks = BTreeMap<String, MatrixDoc>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arrows: Vec<ArrowDoc>,
}

impl QuiverDoc {
    pub fn builtin(name: &str) -> Self {
        QuiverDoc { builtin: Some(name.to_string()), vertices: Vec::new(), arrows: Vec::new() }
    }

    pub fn explicit(q: &Quiver) -> Self {
        QuiverDoc {
            builtin: None,
            vertices: q.vertices().to_vec(),
            arrows: q.arrows().iter().map(|a| ArrowDoc { id: a.id.clone(), src: q.vertices()[a.src].clone(), tgt: q.vertices()[a.tgt].clone() }).collect(),
        }
    }

    pub fn to_quiver(&self, path: &str) -> DocResult<Quiver> {
        match &self.builtin {
            Some(b) => {
                if !self.vertices.is_empty() || !self.arrows.is_empty() {
                    return Err(err(path, "give either `builtin` or explicit vertices and arrows"));
                }
                Quiver::builtin(b).map_err(|e| err(format!("{}.builtin", path), e))
            }
            None => {
                let arrows: Vec<(&str, &str, &str)> = self.arrows.iter().map(|a| (a.id.as_str(), a.src.as_str(), a.tgt.as_str())).collect();
                let vertices: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
                Quiver::new(&vertices, &arrows).map_err(|e| err(path, e))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDoc {
    pub field: String,
    pub quiver: QuiverDoc,
    pub dims: Vec<usize>,
    /// Arrows without an entry act by zero.
    #[serde(default)]
    pub maps: Blocks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RElementDoc {
    pub field: String,
    pub quiver: QuiverDoc,
    pub src_dims: Vec<usize>,
    pub tgt_dims: Vec<usize>,
    #[serde(default)]
    pub blocks: Blocks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagDoc {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub base: Blocks,
    #[serde(default)]
    pub params: Vec<Blocks>,
    pub strong: FlagDoc,
    pub separating: FlagDoc,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MosaicDoc {
    pub field: String,
    pub quiver: QuiverDoc,
    pub dimvector: Vec<usize>,
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportDoc {
    pub vertex: String,
    pub chi: Vec<i64>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverBlockDoc {
    pub arrow: String,
    pub chi_src: Vec<i64>,
    pub matrix: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverRepDoc {
    pub field: String,
    pub quiver: QuiverDoc,
    pub gamma: Vec<i64>,
    /// Support points in push-down basis order.
    pub support: Vec<SupportDoc>,
    #[serde(default)]
    pub blocks: Vec<CoverBlockDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

pub fn parse_document(text: &str) -> DocResult<Document> {
    let doc: Document = serde_json::from_str(text).map_err(|e| err(format!("line {} column {}", e.line(), e.column()), e))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(err("schema_version", format!("unsupported version `{}`", doc.schema_version)));
    }
    Ok(doc)
}

pub fn payload<T: for<'de> Deserialize<'de>>(doc: &Document, kind: Kind) -> DocResult<T> {
    if doc.kind != kind {
        return Err(err("kind", format!("expected `{}`, found `{}`", kind.as_str(), doc.kind.as_str())));
    }
    serde_json::from_value(doc.payload.clone()).map_err(|e| err("payload", e))
}

pub fn wrap<T: Serialize>(kind: Kind, payload: &T) -> Document {
    Document { schema_version: SCHEMA_VERSION.into(), kind, payload: serde_json::to_value(payload).expect("document payloads serialize") }
}

/// Canonical text: pretty JSON with a trailing newline.
pub fn to_text(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn field_spec(s: &str, path: &str) -> DocResult<FieldSpec> {
    FieldSpec::parse(s).map_err(|e| err(path, e))
}

pub fn matrix_from_doc<F: Field>(f: &F, rows: &MatrixDoc, r: usize, c: usize, path: &str) -> DocResult<Matrix<F>> {
    if rows.len() != r {
        return Err(err(path, format!("expected {} rows, found {}", r, rows.len())));
    }
    let mut data = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(err(format!("{}[{}]", path, i), format!("expected {} entries, found {}", c, row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            data.push(f.parse(x).map_err(|e| err(format!("{}[{}][{}]", path, i, j), e))?);
        }
    }
    Ok(Matrix::from_entries(f, r, c, data))
}

pub fn matrix_to_doc<F: Field>(m: &Matrix<F>) -> MatrixDoc {
    let f = m.field();
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| f.format(x)).collect()).collect()
}

fn blocks_from_doc<F: Field>(f: &F, q: &Quiver, blocks: &Blocks, src: &[usize], tgt: &[usize], path: &str) -> DocResult<Vec<Matrix<F>>> {
    for k in blocks.keys() {
        if q.arrow_index(k).is_none() {
            return Err(err(format!("{}.{}", path, k), "no such arrow"));
        }
    }
    q.arrows()
        .iter()
        .map(|a| {
            let (r, c) = (tgt[a.tgt], src[a.src]);
            match blocks.get(&a.id) {
                Some(m) => matrix_from_doc(f, m, r, c, &format!("{}.{}", path, a.id)),
                None => Ok(Matrix::zeros(f, r, c)),
            }
        })
        .collect()
}

fn blocks_to_doc<F: Field>(q: &Quiver, mats: &[Matrix<F>]) -> Blocks {
    q.arrows().iter().zip(mats).map(|(a, m)| (a.id.clone(), matrix_to_doc(m))).collect()
}

fn check_dims(q: &Quiver, d: &[usize], path: &str) -> DocResult<()> {
    if d.len() != q.n_vertices() {
        return Err(err(path, format!("expected {} entries, found {}", q.n_vertices(), d.len())));
    }
    Ok(())
}

impl RepDoc {
    pub fn to_rep<F: Field>(&self, f: &F, path: &str) -> DocResult<Representation<F>> {
        let q = Arc::new(self.quiver.to_quiver(&format!("{}.quiver", path))?);
        check_dims(&q, &self.dims, &format!("{}.dims", path))?;
        let mats = blocks_from_doc(f, &q, &self.maps, &self.dims, &self.dims, &format!("{}.maps", path))?;
        Representation::new(q, f, DimVector(self.dims.clone()), mats).map_err(|e| err(path, e))
    }

    pub fn from_rep<F: Field>(r: &Representation<F>, quiver: &QuiverDoc) -> Self {
        RepDoc { field: r.field().spec().to_string(), quiver: quiver.clone(), dims: r.dims().0.clone(), maps: blocks_to_doc(r.quiver(), r.matrices()) }
    }
}

impl RElementDoc {
    pub fn to_relement<F: Field>(&self, f: &F, path: &str) -> DocResult<(Arc<Quiver>, RElement<F>)> {
        let q = Arc::new(self.quiver.to_quiver(&format!("{}.quiver", path))?);
        check_dims(&q, &self.src_dims, &format!("{}.src_dims", path))?;
        check_dims(&q, &self.tgt_dims, &format!("{}.tgt_dims", path))?;
        let blocks = blocks_from_doc(f, &q, &self.blocks, &self.src_dims, &self.tgt_dims, &format!("{}.blocks", path))?;
        Ok((q, RElement { src_dims: DimVector(self.src_dims.clone()), tgt_dims: DimVector(self.tgt_dims.clone()), blocks }))
    }

    pub fn from_relement<F: Field>(f: &F, q: &Quiver, x: &RElement<F>, quiver: &QuiverDoc) -> Self {
        RElementDoc { field: f.spec().to_string(), quiver: quiver.clone(), src_dims: x.src_dims.0.clone(), tgt_dims: x.tgt_dims.0.clone(), blocks: blocks_to_doc(q, &x.blocks) }
    }
}

pub fn flag_to_doc(flag: &Flag) -> FlagDoc {
    FlagDoc { status: flag.as_str().into(), note: flag.note().map(String::from) }
}

pub fn flag_from_doc(d: &FlagDoc, path: &str) -> DocResult<Flag> {
    let note = d.note.clone().unwrap_or_default();
    match d.status.as_str() {
        "unknown" => Ok(Flag::Unknown),
        "certified" => Ok(Flag::Certified(note)),
        "verified" => Ok(Flag::Verified(note)),
        "failed" => Ok(Flag::Failed(note)),
        s => Err(err(format!("{}.status", path), format!("unknown flag `{}`", s))),
    }
}

impl MosaicDoc {
    pub fn to_mosaic<F: Field>(&self, f: &F) -> DocResult<Mosaic<F>> {
        let q = Arc::new(self.quiver.to_quiver("payload.quiver")?);
        check_dims(&q, &self.dimvector, "payload.dimvector")?;
        let d = &self.dimvector;
        let mut m = Mosaic::new(DimVector(d.clone()));
        for (i, c) in self.cells.iter().enumerate() {
            let path = format!("payload.cells[{}]", i);
            let mats = blocks_from_doc(f, &q, &c.base, d, d, &format!("{}.base", path))?;
            let base = Representation::new(q.clone(), f, DimVector(d.clone()), mats).map_err(|e| err(&path, e))?;
            let params = c
                .params
                .iter()
                .enumerate()
                .map(|(k, p)| blocks_from_doc(f, &q, p, d, d, &format!("{}.params[{}]", path, k)).map(|blocks| RElement { src_dims: DimVector(d.clone()), tgt_dims: DimVector(d.clone()), blocks }))
                .collect::<DocResult<Vec<_>>>()?;
            let mut cell = Cell::new(base, params).map_err(|e| err(format!("{}.params", path), e))?;
            cell.strong = flag_from_doc(&c.strong, &format!("{}.strong", path))?;
            cell.separating = flag_from_doc(&c.separating, &format!("{}.separating", path))?;
            m.push(cell, c.provenance.clone()).map_err(|e| err(&path, e))?;
        }
        Ok(m)
    }

    pub fn from_mosaic<F: Field>(f: &F, m: &Mosaic<F>, quiver: &QuiverDoc) -> Self {
        let cells = m
            .cells
            .iter()
            .zip(&m.provenance)
            .map(|(c, p)| CellDoc {
                base: blocks_to_doc(c.base.quiver(), c.base.matrices()),
                params: c.params.iter().map(|x| blocks_to_doc(c.base.quiver(), &x.blocks)).collect(),
                strong: flag_to_doc(&c.strong),
                separating: flag_to_doc(&c.separating),
                provenance: p.clone(),
            })
            .collect();
        MosaicDoc { field: f.spec().to_string(), quiver: quiver.clone(), dimvector: m.dimvector.0.clone(), cells }
    }
}

impl CoverRepDoc {
    /// Builds the window (the smallest containing the support, or `radius`
    /// if larger) and the cover representation.
    pub fn to_cover<F: Field>(&self, f: &F, radius: Option<usize>) -> DocResult<CoverRepresentation<F>> {
        let base = Arc::new(self.quiver.to_quiver("payload.quiver")?);
        let mut pts = Vec::new();
        for (i, s) in self.support.iter().enumerate() {
            let path = format!("payload.support[{}]", i);
            let v = base.vertex_index(&s.vertex).ok_or_else(|| err(format!("{}.vertex", path), "no such vertex"))?;
            if s.chi.len() != base.n_arrows() {
                return Err(err(format!("{}.chi", path), format!("expected {} entries", base.n_arrows())));
            }
            pts.push(((v, s.chi.clone()), s.dim));
        }
        let points: Vec<_> = pts.iter().map(|p| p.0.clone()).collect();
        let mut w = CoverWindow::containing(base.clone(), &points).map_err(|e| err("payload.support", e))?;
        if let Some(r) = radius.or(self.window) {
            if r > w.radius {
                w = CoverWindow::new(base.clone(), r);
            }
        }
        let w = Arc::new(w);
        let dim_of = |p: &(usize, Vec<i64>)| pts.iter().find(|x| &x.0 == p).map_or(0, |x| x.1);
        let mut blocks = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let path = format!("payload.blocks[{}]", i);
            let a = base.arrow_index(&b.arrow).ok_or_else(|| err(format!("{}.arrow", path), "no such arrow"))?;
            let src = (base.src(a), b.chi_src.clone());
            let mut tgt_chi = b.chi_src.clone();
            if tgt_chi.len() != base.n_arrows() {
                return Err(err(format!("{}.chi_src", path), format!("expected {} entries", base.n_arrows())));
            }
            tgt_chi[a] += 1;
            let tgt = (base.tgt(a), tgt_chi);
            let m = matrix_from_doc(f, &b.matrix, dim_of(&tgt), dim_of(&src), &format!("{}.matrix", path))?;
            blocks.push((a, b.chi_src.clone(), m));
        }
        CoverRepresentation::from_parts(w, f, &pts, &blocks, self.gamma.clone()).map_err(|e| err("payload", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use quivercell_core::{PrimeField, Rationals};

    #[test]
    fn minimal_quiver_document() {
        let text = r#"{"schema_version":"1","kind":"quiver","payload":{"vertices":["0","1"],"arrows":[{"id":"a","src":"0","tgt":"1"}]}}"#;
        let doc = parse_document(text).unwrap();
        let q: QuiverDoc = payload(&doc, Kind::Quiver).unwrap();
        assert_eq!(q.to_quiver("payload").unwrap(), Quiver::kronecker(1));
    }

    #[test]
    fn t1_representation() {
        let text = r#"{"schema_version":"1","kind":"representation","payload":{"field":"Q","quiver":{"builtin":"K(2)"},"dims":[1,1],"maps":{"a":[["1"]],"b":[["0"]]}}}"#;
        let r: RepDoc = payload(&parse_document(text).unwrap(), Kind::Representation).unwrap();
        let rep = r.to_rep(&Rationals, "payload").unwrap();
        let t1 = Representation::from_i64(Arc::new(Quiver::kronecker(2)), &Rationals, &[1, 1], &[("a", &[1])]).unwrap();
        assert_eq!(rep, t1);
        assert_eq!(RepDoc::from_rep(&rep, &r.quiver), r);
    }

    #[test]
    fn bad_fraction_names_entry() {
        let text = r#"{"schema_version":"1","kind":"representation","payload":{"field":"Q","quiver":{"builtin":"K(2)"},"dims":[1,2],"maps":{"a":[["1"],["3/0"]]}}}"#;
        let r: RepDoc = payload(&parse_document(text).unwrap(), Kind::Representation).unwrap();
        let e = r.to_rep(&Rationals, "payload").unwrap_err();
        assert_eq!(e.path, "payload.maps.a[1][0]");
    }

    #[test]
    fn shape_and_kind_errors() {
        let text = r#"{"schema_version":"1","kind":"representation","payload":{"field":"Q","quiver":{"builtin":"K(2)"},"dims":[1,1],"maps":{"z":[["1"]]}}}"#;
        let doc = parse_document(text).unwrap();
        let r: RepDoc = payload(&doc, Kind::Representation).unwrap();
        assert_eq!(r.to_rep(&Rationals, "payload").unwrap_err().path, "payload.maps.z");
        assert_eq!(payload::<MosaicDoc>(&doc, Kind::Mosaic).unwrap_err().path, "kind");
        assert!(parse_document(r#"{"schema_version":"9","kind":"quiver","payload":{}}"#).is_err());
        assert!(parse_document("{").unwrap_err().path.starts_with("line 1"));
    }

    #[test]
    fn mosaic_round_trip() {
        let f = PrimeField::new(3).unwrap();
        let m = quivercell_core::cells::kronecker22_mosaic(&f);
        let qd = QuiverDoc::builtin("K(2)");
        let d = MosaicDoc::from_mosaic(&f, &m, &qd);
        let text = to_text(&wrap(Kind::Mosaic, &d));
        let back: MosaicDoc = payload(&parse_document(&text).unwrap(), Kind::Mosaic).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_mosaic(&f).unwrap(), m);
        assert_eq!(to_text(&wrap(Kind::Mosaic, &back)), text);
    }
}
