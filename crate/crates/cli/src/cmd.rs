//! Subcommands. Each produces plain text, a JSON result and optionally a document.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use quivercell_core::cells::{apply_verification, grassmann_mosaic, subspace_tnf, tree_cell_recursion, verify_mosaic, Cell, Mosaic, Sampling};
use quivercell_core::cover::{pushdown, CoverRepresentation, CoverWindow};
use quivercell_core::ext::{assemble_d, hom_basis};
use quivercell_core::homalg::{analyze_end, describe, is_isomorphic};
use quivercell_core::kac::{crosscheck_cells, default_degree_bound, interpolate, KacSample};
use quivercell_core::labeled::{coefficient_quiver, is_tree};
use quivercell_core::quiver::euler_form;
use quivercell_core::rep::extension;
use quivercell_core::stability::{is_stable, schur_level, scss_and_hn, StabilityWeights};
use quivercell_core::torus::{attracting_space, fixed_points, poincare, AttractorData};
use quivercell_core::{Budget, DimVector, Error, Field, FieldSpec, Matrix, PrimeField, Quiver, Rationals, Representation};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::doc::{self, CoverBlockDoc, CoverRepDoc, DocError, Document, Kind, MosaicDoc, QuiverDoc, RElementDoc, RepDoc, SupportDoc};
use crate::shard::count_classes_sharded;

#[derive(Parser, Debug)]
#[command(name = "quivercell", version, about = "Hom/Ext, cells of indecomposables, torus cells and Kac polynomials of quiver representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// Ground field: Q or Fp:<p>. Overrides the field written in input documents.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Prime field size, shorthand for --field Fp:<q>
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Cover window radius
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub gamma: Option<Vec<i64>>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<i64>>,
    /// Cap on enumerated objects
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    #[arg(long, global = true, default_value_t = 1)]
    pub shards: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the produced document, or a JSON report, to this path
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Builtin quiver (K(m), S(n), K(2,1), T(n)) or path to a quiver document
    #[arg(long, global = true)]
    pub quiver: Option<String>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Grassmannian rank for schubert-mosaic
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Sample primes for kac-poly and crosscheck
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub degree_bound: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// dim Hom(N, M), dim Ext(N, M) and the Euler form
    Hom { source: PathBuf, target: PathBuf },
    /// Standard vectors of R(N, M) representing a basis of Ext(N, M)
    ExtBasis { source: PathBuf, target: PathBuf },
    /// Middle term of the extension of QUOTIENT by SUB with class TAU ∈ R(QUOTIENT, SUB)
    MiddleTerm { sub: PathBuf, quotient: PathBuf, tau: PathBuf },
    /// M + λ for λ ∈ R(M, M)
    Deform { rep: PathBuf, lambda: PathBuf },
    /// Endomorphism ring analysis
    Indec { rep: PathBuf },
    Iso { first: PathBuf, second: PathBuf },
    /// Θ-stability (--theta)
    Stable { rep: PathBuf },
    /// Harder-Narasimhan filtration (--theta)
    Hn { rep: PathBuf },
    /// Largest endomorphism dimension among indecomposables of --dims over F_q
    SchurLevel,
    /// Grassmann cells for extensions of QUOTIENT by SUB^d (--d)
    SchubertMosaic { sub: PathBuf, quotient: PathBuf },
    /// Tree-module cells (B_i, A_i) for extensions of QUOTIENT by SUB
    TreeCells { sub: PathBuf, quotient: PathBuf },
    /// Cellular tree normal form for 2q_0 + Σ q_i on S(n) (--n)
    SubspaceTnf,
    /// Exhaustive check of a mosaic over F_q
    MosaicVerify { mosaic: PathBuf },
    /// Torus fixed points (--quiver --dims --theta --gamma --window)
    FixedPoints,
    /// Attracting cell of a cover representation document
    AttCell { cover: PathBuf },
    /// Poincaré polynomial from the cell dimensions of all fixed points
    Poincare,
    /// Number of (absolutely) indecomposable classes over F_q
    KacCount,
    /// Interpolated Kac polynomial (--primes)
    KacPoly,
    /// Kac polynomial coefficients against the cell dimensions of a mosaic
    Crosscheck { mosaic: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hom { .. } => "hom",
            Command::ExtBasis { .. } => "ext-basis",
            Command::MiddleTerm { .. } => "middle-term",
            Command::Deform { .. } => "deform",
            Command::Indec { .. } => "indec",
            Command::Iso { .. } => "iso",
            Command::Stable { .. } => "stable",
            Command::Hn { .. } => "hn",
            Command::SchurLevel => "schur-level",
            Command::SchubertMosaic { .. } => "schubert-mosaic",
            Command::TreeCells { .. } => "tree-cells",
            Command::SubspaceTnf => "subspace-tnf",
            Command::MosaicVerify { .. } => "mosaic-verify",
            Command::FixedPoints => "fixed-points",
            Command::AttCell { .. } => "att-cell",
            Command::Poincare => "poincare",
            Command::KacCount => "kac-count",
            Command::KacPoly => "kac-poly",
            Command::Crosscheck { .. } => "crosscheck",
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() {
            EXIT_BUDGET
        } else if e.is_verification() || matches!(e, Error::NotTree(_)) {
            EXIT_VERIFICATION
        } else {
            EXIT_INPUT
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError { code: EXIT_INPUT, message: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, message: msg.into() }
}

type CliResult<T> = Result<T, CliError>;

/// What a command produced.
#[derive(Debug, Default)]
pub struct Produced {
    pub text: String,
    pub result: Value,
    pub document: Option<Document>,
    pub warnings: Vec<String>,
    /// Nonzero when the command ran but its check failed.
    pub code: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// The report document (also written to --out when no other document is produced).
    pub report: Option<Value>,
}

struct Ctx {
    opts: Opts,
    args: Vec<String>,
    inputs: Vec<(String, String)>,
}

impl Ctx {
    fn budget(&self) -> Budget {
        self.opts.budget.map(Budget).unwrap_or_default()
    }

    fn sampling(&self) -> Sampling {
        Sampling { seed: self.opts.seed, ..Sampling::default() }
    }

    fn read(&mut self, path: &Path) -> CliResult<Document> {
        let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {}", path.display(), e)))?;
        let d = doc::parse_document(&text).map_err(|e| input_error(format!("{}: {}", path.display(), e)))?;
        self.inputs.push((path.display().to_string(), text));
        Ok(d)
    }

    fn read_payload<T: for<'de> serde::Deserialize<'de>>(&mut self, path: &Path, kind: Kind) -> CliResult<T> {
        let d = self.read(path)?;
        doc::payload(&d, kind).map_err(|e| input_error(format!("{}: {}", path.display(), e)))
    }

    /// --q, then --field, then the documents' field, then Q.
    fn field(&self, doc_field: Option<&str>) -> CliResult<FieldSpec> {
        let from_q = self.opts.q.map(FieldSpec::prime).transpose()?;
        let from_flag = self.opts.field.as_deref().map(FieldSpec::parse).transpose()?;
        if let (Some(a), Some(b)) = (from_q, from_flag) {
            if a != b {
                return Err(input_error(format!("--q {} disagrees with --field {}", a, b)));
            }
        }
        match from_q.or(from_flag) {
            Some(s) => Ok(s),
            None => match doc_field {
                Some(s) => Ok(doc::field_spec(s, "payload.field")?),
                None => Ok(FieldSpec::Rationals),
            },
        }
    }

    fn quiver(&mut self) -> CliResult<(Arc<Quiver>, QuiverDoc)> {
        let name = self.opts.quiver.clone().ok_or_else(|| input_error("--quiver is required"))?;
        let qd = if Path::new(&name).is_file() { self.read_payload::<QuiverDoc>(Path::new(&name), Kind::Quiver)? } else { QuiverDoc::builtin(&name) };
        Ok((Arc::new(qd.to_quiver("--quiver")?), qd))
    }

    fn dims(&self, q: &Quiver) -> CliResult<DimVector> {
        let d = self.opts.dims.clone().ok_or_else(|| input_error("--dims is required"))?;
        if d.len() != q.n_vertices() {
            return Err(input_error(format!("--dims needs {} entries", q.n_vertices())));
        }
        Ok(DimVector(d))
    }

    fn theta(&self, q: &Quiver) -> CliResult<StabilityWeights> {
        let t = self.opts.theta.clone().ok_or_else(|| input_error("--theta is required"))?;
        Ok(StabilityWeights::new(q, t)?)
    }

    fn inputs_hash(&self) -> String {
        let mut h = Sha256::new();
        for a in &self.args {
            h.update(a.as_bytes());
            h.update([0u8]);
        }
        for (p, t) in &self.inputs {
            h.update(p.as_bytes());
            h.update([0u8]);
            h.update(t.as_bytes());
            h.update([0u8]);
        }
        format!("{:x}", h.finalize())
    }
}

/// Runs `field`-generic code with the concrete field type.
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn fmt_matrix<F: Field>(m: &Matrix<F>) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("({}x{})", m.rows(), m.cols());
    }
    let f = m.field();
    let rows: Vec<String> = (0..m.rows()).map(|i| m.row(i).iter().map(|x| f.format(x)).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

fn fmt_rep<F: Field>(r: &Representation<F>) -> String {
    let q = r.quiver();
    let mut s = format!("dims {:?}", r.dims().0);
    for (a, ar) in q.arrows().iter().enumerate() {
        let _ = write!(s, "\n  {}: {}", ar.id, fmt_matrix(r.matrix(a)));
    }
    s
}

fn rep_json<F: Field>(r: &Representation<F>) -> Value {
    json!({
        "dims": r.dims().0,
        "maps": r.quiver().arrows().iter().zip(r.matrices()).map(|(a, m)| (a.id.clone(), json!(doc::matrix_to_doc(m)))).collect::<serde_json::Map<_, _>>(),
    })
}

fn arrow_ids(q: &Quiver) -> Vec<String> {
    q.arrows().iter().map(|a| a.id.clone()).collect()
}

fn load_rep<F: Field>(f: &F, d: &RepDoc, path: &Path) -> CliResult<Representation<F>> {
    d.to_rep(f, "payload").map_err(|e| input_error(format!("{}: {}", path.display(), e)))
}

fn format_poly(c: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (i, x) in c.iter().enumerate().rev() {
        if x.is_zero() {
            continue;
        }
        let coeff = if i > 0 && x.abs() == BigInt::from(1) { String::new() } else { x.abs().to_string() };
        let var = match i {
            0 => String::new(),
            1 => "q".into(),
            _ => format!("q^{}", i),
        };
        let sign = if x.is_negative() { "-" } else { "+" };
        terms.push((sign, format!("{}{}", coeff, var)));
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (sign, t)) in terms.iter().enumerate() {
        if k == 0 {
            if *sign == "-" {
                s.push('-');
            }
        } else {
            let _ = write!(s, " {} ", sign);
        }
        s.push_str(t);
    }
    s
}

fn mosaic_summary<F: Field>(m: &Mosaic<F>) -> (String, Value) {
    let mut s = format!("cells: {}\ncell dims: {:?}", m.cells.len(), m.cell_dims());
    for (i, (c, p)) in m.cells.iter().zip(&m.provenance).enumerate() {
        let _ = write!(s, "\ncell {} (dim {}, {}): {}", i, c.dim(), p, fmt_rep(&c.base).replace('\n', "\n    "));
    }
    let v = json!({
        "cells": m.cells.len(),
        "cell_dims": m.cell_dims(),
        "dim_histogram": m.dim_histogram(),
        "provenance": m.provenance,
    });
    (s, v)
}

fn mosaic_doc<F: Field>(f: &F, m: &Mosaic<F>, qd: &QuiverDoc) -> Document {
    doc::wrap(Kind::Mosaic, &MosaicDoc::from_mosaic(f, m, qd))
}

fn cover_doc<F: Field>(cr: &CoverRepresentation<F>) -> CoverRepDoc {
    let w = &cr.window;
    let base = &w.base;
    let support = cr.order.iter().map(|&i| SupportDoc { vertex: base.vertices()[w.points[i].0].clone(), chi: w.points[i].1.clone(), dim: cr.rep.dims()[i] }).collect();
    let mut blocks = Vec::new();
    for (k, ar) in w.quiver.arrows().iter().enumerate() {
        let m = cr.rep.matrix(k);
        if m.rows() > 0 && m.cols() > 0 && !m.is_zero() {
            blocks.push(CoverBlockDoc { arrow: base.arrows()[w.arrow_base[k]].id.clone(), chi_src: w.points[ar.src].1.clone(), matrix: doc::matrix_to_doc(m) });
        }
    }
    CoverRepDoc { field: cr.field().spec().to_string(), quiver: QuiverDoc::explicit(base), gamma: cr.gamma.clone(), support, blocks, window: Some(w.radius) }
}

/// Flags implied by --n for the two torus examples.
fn torus_preset(q: &Quiver, qd: &QuiverDoc, n: Option<usize>) -> Option<(Vec<usize>, Vec<i64>, Vec<i64>, usize)> {
    let name: String = qd.builtin.as_deref()?.chars().filter(|c| !c.is_whitespace()).collect();
    if name == "K(2,1)" {
        let n = n?;
        return Some((vec![n, n, 1], vec![1, 0, 1], vec![1, 3, 1], 2 * n + 1));
    }
    if name.starts_with("T(") {
        let k = q.n_vertices() - 2;
        let mut dims = vec![k];
        dims.extend(std::iter::repeat(1).take(k + 1));
        let mut theta = vec![0];
        theta.extend(std::iter::repeat(1).take(k + 1));
        let mut gamma = vec![1, 2];
        gamma.extend(std::iter::repeat(0).take(k));
        return Some((dims, theta, gamma, 4));
    }
    None
}

struct TorusSetup {
    window: Arc<CoverWindow>,
    alpha: DimVector,
    theta: StabilityWeights,
    gamma: Vec<i64>,
}

fn torus_setup(ctx: &mut Ctx) -> CliResult<TorusSetup> {
    let (q, qd) = ctx.quiver()?;
    let preset = torus_preset(&q, &qd, ctx.opts.n);
    let alpha = match (&ctx.opts.dims, &preset) {
        (Some(_), _) => ctx.dims(&q)?,
        (None, Some(p)) => DimVector(p.0.clone()),
        (None, None) => return Err(input_error("--dims is required")),
    };
    let theta = match (&ctx.opts.theta, &preset) {
        (Some(_), _) => ctx.theta(&q)?,
        (None, Some(p)) => StabilityWeights::new(&q, p.1.clone())?,
        (None, None) => return Err(input_error("--theta is required")),
    };
    let gamma = match (&ctx.opts.gamma, &preset) {
        (Some(g), _) => g.clone(),
        (None, Some(p)) => p.2.clone(),
        (None, None) => return Err(input_error("--gamma is required")),
    };
    if gamma.len() != q.n_arrows() {
        return Err(input_error(format!("--gamma needs {} entries", q.n_arrows())));
    }
    let radius = ctx.opts.window.or(preset.as_ref().map(|p| p.3)).ok_or_else(|| input_error("--window is required"))?;
    Ok(TorusSetup { window: Arc::new(CoverWindow::new(q, radius)), alpha, theta, gamma })
}

fn att_json<F: Field>(q: &Quiver, ad: &AttractorData<F>) -> Value {
    let coord = |&(a, i, j): &(usize, usize, usize)| json!([q.arrows()[a].id, i, j]);
    json!({
        "weights": ad.weights,
        "v_t": ad.v_t.iter().map(coord).collect::<Vec<_>>(),
        "u_psi": ad.u_psi.iter().map(|&(v, i, j)| json!([q.vertices()[v], i, j])).collect::<Vec<_>>(),
        "section": ad.section.as_ref().map(|s| s.iter().map(coord).collect::<Vec<_>>()),
        "cell_dim": ad.cell_dim,
    })
}

/// Per-arrow masks: `1` for a nonzero entry of T, `x` for a section coordinate,
/// `*` for the rest of V_T, `.` elsewhere.
fn att_text<F: Field>(ad: &AttractorData<F>) -> String {
    let t = &ad.lift;
    let q = t.quiver();
    let f = t.field();
    let section = ad.section.clone().unwrap_or_default();
    let mut s = format!("weights: {:?}\ncell dim: {}", ad.weights, ad.cell_dim);
    for (a, ar) in q.arrows().iter().enumerate() {
        let _ = write!(s, "\n{}:", ar.id);
        for i in 0..t.dims()[ar.tgt] {
            let row: String = (0..t.dims()[ar.src])
                .map(|j| {
                    if !f.is_zero(t.matrix(a).get(i, j)) {
                        '1'
                    } else if section.contains(&(a, i, j)) {
                        'x'
                    } else if ad.v_t.contains(&(a, i, j)) {
                        '*'
                    } else {
                        '.'
                    }
                })
                .collect();
            let _ = write!(s, " {}", row);
        }
    }
    for v in 0..t.dims().len() {
        let n = t.dims()[v];
        if n == 0 {
            continue;
        }
        let _ = write!(s, "\nU_psi {}:", q.vertices()[v]);
        for i in 0..n {
            let row: String = (0..n).map(|j| if ad.u_psi.contains(&(v, i, j)) { '*' } else { '.' }).collect();
            let _ = write!(s, " {}", row);
        }
    }
    s
}

fn kac_samples(ctx: &Ctx, q: &Arc<Quiver>, alpha: &DimVector, primes: &[u32]) -> CliResult<Vec<KacSample>> {
    primes.iter().map(|&p| Ok(count_classes_sharded(q.clone(), &PrimeField::new(p)?, alpha, ctx.opts.shards, ctx.budget())?)).collect()
}

fn sample_json(s: &KacSample) -> Value {
    json!({
        "q": s.q,
        "alpha": s.alpha.0,
        "all_classes": s.all_classes.to_string(),
        "indec_classes": s.indec_classes.to_string(),
        "abs_indec_classes": s.abs_indec_classes.to_string(),
        "point_count": s.point_count.to_string(),
    })
}

fn execute(ctx: &mut Ctx, cmd: &Command) -> CliResult<Produced> {
    let budget = ctx.budget();
    let mut out = Produced::default();
    match cmd {
        Command::Hom { source, target } => {
            let (nd, md): (RepDoc, RepDoc) = (ctx.read_payload(source, Kind::Representation)?, ctx.read_payload(target, Kind::Representation)?);
            with_field!(ctx.field(Some(&nd.field))?, f => {
                let n = load_rep(&f, &nd, source)?;
                let m = load_rep(&f, &md, target)?;
                n.same_context(&m)?;
                let ep = assemble_d(&n, &m)?;
                let hb = hom_basis(&n, &m)?;
                let euler = euler_form(n.quiver(), n.dims(), m.dims())?;
                out.text = format!("dim Hom: {}\ndim Ext: {}\nEuler form: {}", hb.len(), ep.ext_dim, euler);
                for (i, h) in hb.iter().enumerate() {
                    let comps: Vec<String> = h.components.iter().enumerate().map(|(v, c)| format!("{}: {}", n.quiver().vertices()[v], fmt_matrix(c))).collect();
                    let _ = write!(out.text, "\nhom basis {}: {}", i, comps.join(", "));
                }
                out.result = json!({
                    "hom_dim": hb.len(),
                    "ext_dim": ep.ext_dim,
                    "euler": euler,
                    "hom_basis": hb.iter().map(|h| h.components.iter().map(doc::matrix_to_doc).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
            })
        }
        Command::ExtBasis { source, target } => {
            let (nd, md): (RepDoc, RepDoc) = (ctx.read_payload(source, Kind::Representation)?, ctx.read_payload(target, Kind::Representation)?);
            with_field!(ctx.field(Some(&nd.field))?, f => {
                let n = load_rep(&f, &nd, source)?;
                let m = load_rep(&f, &md, target)?;
                n.same_context(&m)?;
                let ep = assemble_d(&n, &m)?;
                let ids = arrow_ids(n.quiver());
                let mut items = Vec::new();
                out.text = format!("dim Ext: {}", ep.ext_dim);
                for e in ep.standard_ext_basis() {
                    let tree = is_tree(&coefficient_quiver(&extension(&m, &n, &e)?, None)?);
                    let label = describe(&e, &ids);
                    let _ = write!(out.text, "\n{}{}", label, if tree { "" } else { "  (middle term not a tree module)" });
                    items.push(json!({"element": label, "tree_middle_term": tree}));
                }
                out.result = json!({"ext_dim": ep.ext_dim, "basis": items});
            })
        }
        Command::MiddleTerm { sub, quotient, tau } => {
            let md: RepDoc = ctx.read_payload(sub, Kind::Representation)?;
            let nd: RepDoc = ctx.read_payload(quotient, Kind::Representation)?;
            let td: RElementDoc = ctx.read_payload(tau, Kind::Relement)?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                let m = load_rep(&f, &md, sub)?;
                let n = load_rep(&f, &nd, quotient)?;
                let (_, t) = td.to_relement(&f, "payload").map_err(|e| input_error(format!("{}: {}", tau.display(), e)))?;
                let b = extension(&m, &n, &t)?;
                let tree = is_tree(&coefficient_quiver(&b, None)?);
                let split = assemble_d(&n, &m)?.is_trivial(&t);
                out.text = format!("{}\ntree module: {}\nsplit: {}", fmt_rep(&b), tree, split);
                out.result = json!({"middle_term": rep_json(&b), "tree_module": tree, "split": split});
                out.document = Some(doc::wrap(Kind::Representation, &RepDoc::from_rep(&b, &md.quiver)));
            })
        }
        Command::Deform { rep, lambda } => {
            let md: RepDoc = ctx.read_payload(rep, Kind::Representation)?;
            let ld: RElementDoc = ctx.read_payload(lambda, Kind::Relement)?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                let m = load_rep(&f, &md, rep)?;
                let (_, l) = ld.to_relement(&f, "payload").map_err(|e| input_error(format!("{}: {}", lambda.display(), e)))?;
                let d = m.deform(&l)?;
                out.text = fmt_rep(&d);
                out.result = rep_json(&d);
                out.document = Some(doc::wrap(Kind::Representation, &RepDoc::from_rep(&d, &md.quiver)));
            })
        }
        Command::Indec { rep } => {
            let md: RepDoc = ctx.read_payload(rep, Kind::Representation)?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                let m = load_rep(&f, &md, rep)?;
                if f.size().is_some() {
                    let a = analyze_end(&m, budget)?;
                    out.text = format!("dim End: {}\nindecomposable: {}\nabsolutely indecomposable: {}\n|Aut|: {}", a.end_dim, a.is_local, a.is_absolutely_indec, a.unit_count);
                    out.result = json!({"end_dim": a.end_dim, "indecomposable": a.is_local, "absolutely_indecomposable": a.is_absolutely_indec, "aut_count": a.unit_count.to_string(), "nilpotent_count": a.nilpotent_count.to_string()});
                } else {
                    let e = quivercell_core::homalg::hom_dimension(&m, &m);
                    if e != 1 {
                        return Err(CliError::from(Error::Undecided(format!("dim End = {} over Q; rerun over a prime field", e))));
                    }
                    out.text = "dim End: 1\nindecomposable: true (Schurian)".into();
                    out.result = json!({"end_dim": 1, "indecomposable": true, "absolutely_indecomposable": true});
                }
            })
        }
        Command::Iso { first, second } => {
            let (ad, bd): (RepDoc, RepDoc) = (ctx.read_payload(first, Kind::Representation)?, ctx.read_payload(second, Kind::Representation)?);
            with_field!(ctx.field(Some(&ad.field))?, f => {
                let a = load_rep(&f, &ad, first)?;
                let b = load_rep(&f, &bd, second)?;
                let iso = is_isomorphic(&a, &b, budget, ctx.opts.seed)?;
                out.text = format!("isomorphic: {}", iso);
                out.result = json!({"isomorphic": iso});
            })
        }
        Command::Stable { rep } => {
            let md: RepDoc = ctx.read_payload(rep, Kind::Representation)?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                let m = load_rep(&f, &md, rep)?;
                let th = ctx.theta(m.quiver())?;
                let s = is_stable(&m, &th, budget)?;
                out.text = format!("{}", s.as_str());
                out.result = json!({"stability": s.as_str()});
            })
        }
        Command::Hn { rep } => {
            let md: RepDoc = ctx.read_payload(rep, Kind::Representation)?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                let m = load_rep(&f, &md, rep)?;
                let th = ctx.theta(m.quiver())?;
                let hn = scss_and_hn(&m, &th, budget)?;
                let slopes: Vec<String> = hn.slopes.iter().map(|s| s.to_string()).collect();
                out.text = format!("length: {}\nscss dims: {:?}", hn.length, hn.scss.dims().0);
                for (i, (d, s)) in hn.filtration.iter().zip(&slopes).enumerate() {
                    let _ = write!(out.text, "\nstep {}: dims {:?}, slope {}", i + 1, d.0, s);
                }
                out.result = json!({
                    "length": hn.length,
                    "filtration": hn.filtration.iter().map(|d| d.0.clone()).collect::<Vec<_>>(),
                    "slopes": slopes,
                    "subquotients": hn.subquotients.iter().map(rep_json).collect::<Vec<_>>(),
                });
            })
        }
        Command::SchurLevel => {
            let (q, _) = ctx.quiver()?;
            let alpha = ctx.dims(&q)?;
            with_field!(ctx.field(None)?, f => {
                let lvl = schur_level(q.clone(), &f, &alpha, budget)?;
                out.text = format!("Schur level: {}", lvl);
                out.result = json!({"schur_level": lvl});
            })
        }
        Command::SchubertMosaic { sub, quotient } => {
            let md: RepDoc = ctx.read_payload(sub, Kind::Representation)?;
            let nd: RepDoc = ctx.read_payload(quotient, Kind::Representation)?;
            let d = ctx.opts.d.ok_or_else(|| input_error("--d is required"))?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                let m = load_rep(&f, &md, sub)?;
                let n = load_rep(&f, &nd, quotient)?;
                let basis = assemble_d(&n, &m)?.standard_ext_basis();
                let mosaic = grassmann_mosaic(&Cell::point(m), &Cell::point(n), &basis, d, &ctx.sampling())?;
                let (t, v) = mosaic_summary(&mosaic);
                out.text = t;
                out.result = v;
                out.document = Some(mosaic_doc(&f, &mosaic, &md.quiver));
            })
        }
        Command::TreeCells { sub, quotient } => {
            let md: RepDoc = ctx.read_payload(sub, Kind::Representation)?;
            let nd: RepDoc = ctx.read_payload(quotient, Kind::Representation)?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                let t = load_rep(&f, &md, sub)?;
                let s = load_rep(&f, &nd, quotient)?;
                let basis = assemble_d(&s, &t)?.standard_ext_basis();
                let mosaic = tree_cell_recursion(&Cell::point(s), &Cell::point(t), &basis, &ctx.sampling())?;
                let (txt, v) = mosaic_summary(&mosaic);
                out.text = txt;
                out.result = v;
                out.document = Some(mosaic_doc(&f, &mosaic, &md.quiver));
            })
        }
        Command::SubspaceTnf => {
            let n = ctx.opts.n.ok_or_else(|| input_error("--n is required"))?;
            let qd = QuiverDoc::builtin(&format!("S({})", n));
            with_field!(ctx.field(None)?, f => {
                let mosaic = subspace_tnf(n, &f, &ctx.sampling())?;
                let (t, v) = mosaic_summary(&mosaic);
                out.text = t;
                out.result = v;
                out.document = Some(mosaic_doc(&f, &mosaic, &qd));
            })
        }
        Command::MosaicVerify { mosaic } => {
            let md: MosaicDoc = ctx.read_payload(mosaic, Kind::Mosaic)?;
            with_field!(ctx.field(Some(&md.field))?, f => {
                if f.size().is_none() {
                    return Err(CliError::from(Error::NeedsFiniteField));
                }
                let mut m = md.to_mosaic(&f)?;
                let r = verify_mosaic(&m, budget)?;
                apply_verification(&mut m, &r);
                out.text = format!(
                    "q: {}\ncells: {}\ncell dims: {:?}\ncovered: {}\ntotal absolutely indecomposable classes: {}\nnon-absolute indecomposable classes: {}\nmultiply covered: {}\ndecomposable cell points: {:?}\ncellular tree normal form: {}",
                    r.q, m.cells.len(), r.cell_dims, r.covered, r.total_indec_classes, r.non_absolute_classes, r.multiply_covered, r.decomposable_points, r.is_tnf()
                );
                out.result = json!({
                    "q": r.q,
                    "cells": m.cells.len(),
                    "cell_dims": r.cell_dims,
                    "covered": r.covered,
                    "total_indec_classes": r.total_indec_classes,
                    "non_absolute_classes": r.non_absolute_classes,
                    "multiply_covered": r.multiply_covered,
                    "decomposable_points": r.decomposable_points.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "internal_collisions": r.internal_collisions.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "is_tnf": r.is_tnf(),
                });
                if !r.is_tnf() {
                    out.code = EXIT_VERIFICATION;
                }
            })
        }
        Command::FixedPoints | Command::Poincare => {
            let setup = torus_setup(ctx)?;
            with_field!(ctx.field(None)?, f => {
                let fps = fixed_points(setup.window.clone(), &f, &setup.alpha, &setup.theta, &setup.gamma, 101, budget)?;
                let mut dims = Vec::new();
                let mut items = Vec::new();
                let mut text = String::new();
                for (i, cr) in fps.iter().enumerate() {
                    let ad = attracting_space(cr)?;
                    dims.push(ad.cell_dim);
                    let _ = write!(text, "\nfixed point {} (cell dim {}): {}", i, ad.cell_dim, fmt_rep(&pushdown(cr)).replace('\n', "\n    "));
                    items.push(json!({"lift": rep_json(&ad.lift), "cell": att_json(setup.window.base.as_ref(), &ad), "cover": serde_json::to_value(cover_doc(cr)).expect("serializes")}));
                }
                let p = poincare(&dims);
                if matches!(cmd, Command::Poincare) {
                    out.text = format!("coefficients: {:?}", p);
                    out.result = json!({"coefficients": p, "cell_dims": dims});
                } else {
                    out.text = format!("fixed points: {}\ncell dims: {:?}\nPoincaré coefficients: {:?}{}", fps.len(), dims, p, text);
                    out.result = json!({"fixed_points": items, "cell_dims": dims, "poincare": p});
                }
            })
        }
        Command::AttCell { cover } => {
            let cd: CoverRepDoc = ctx.read_payload(cover, Kind::CoverRep)?;
            with_field!(ctx.field(Some(&cd.field))?, f => {
                let cr = cd.to_cover(&f, ctx.opts.window)?;
                let ad = attracting_space(&cr)?;
                out.text = att_text(&ad);
                out.result = att_json(cr.window.base.as_ref(), &ad);
            })
        }
        Command::KacCount => {
            let (q, _) = ctx.quiver()?;
            let alpha = ctx.dims(&q)?;
            let spec = ctx.field(None)?;
            let p = match spec {
                FieldSpec::Prime(p) => p,
                FieldSpec::Rationals => return Err(CliError::from(Error::NeedsFiniteField)),
            };
            let s = &kac_samples(ctx, &q, &alpha, &[p])?[0];
            out.text = format!("q: {}\npoints: {}\nclasses: {}\nindecomposable classes: {}\nabsolutely indecomposable classes: {}", s.q, s.point_count, s.all_classes, s.indec_classes, s.abs_indec_classes);
            out.result = sample_json(s);
        }
        Command::KacPoly | Command::Crosscheck { .. } => {
            let (q, alpha, mosaic_doc_opt) = match cmd {
                Command::Crosscheck { mosaic } => {
                    let md: MosaicDoc = ctx.read_payload(mosaic, Kind::Mosaic)?;
                    let q = Arc::new(md.quiver.to_quiver("payload.quiver")?);
                    (q, DimVector(md.dimvector.clone()), Some(md))
                }
                _ => {
                    let (q, _) = ctx.quiver()?;
                    let a = ctx.dims(&q)?;
                    (q, a, None)
                }
            };
            let primes = ctx.opts.primes.clone().unwrap_or_else(|| vec![2, 3]);
            let bound = match ctx.opts.degree_bound {
                Some(b) => b,
                None => default_degree_bound(&q, &alpha)?,
            };
            let samples = kac_samples(ctx, &q, &alpha, &primes)?;
            let r = interpolate(&samples, bound)?;
            let poly_txt = r.polynomial.as_ref().map(|c| format_poly(c)).unwrap_or_else(|| "none".into());
            out.text = format!("samples: {:?}\ndegree bound: {}\npolynomial: {}\ntrusted: {}\nnonnegative coefficients: {}", r.samples, r.degree_bound_used, poly_txt, r.trusted, r.nonnegative);
            if let Some(i) = &r.inconsistency {
                let _ = write!(out.text, "\ninconsistency: {}", i);
                out.code = EXIT_VERIFICATION;
            }
            if !r.trusted {
                out.warnings.push(format!("{} samples for degree bound {}: interpolation is not overdetermined", r.samples.len(), bound));
            }
            let mut result = json!({
                "samples": samples.iter().map(sample_json).collect::<Vec<_>>(),
                "polynomial": r.polynomial.as_ref().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                "degree_bound_used": r.degree_bound_used,
                "trusted": r.trusted,
                "nonnegative": r.nonnegative,
                "inconsistency": r.inconsistency,
            });
            if let Some(md) = mosaic_doc_opt {
                // only cell dimensions matter; read the mosaic over Q
                let m = md.to_mosaic(&Rationals)?;
                let c = crosscheck_cells(&r, &m)?;
                for (i, ci, n) in &c.per_degree {
                    let _ = write!(out.text, "\nc_{} = {} vs {} cells of dimension {}: {}", i, ci, n, i, if *ci == BigInt::from(*n) { "match" } else { "mismatch" });
                }
                let _ = write!(out.text, "\na(1) = {} vs {} cells: {}", c.value_at_one, c.cell_count, if c.matches() { "match" } else { "mismatch" });
                result["crosscheck"] = json!({
                    "per_degree": c.per_degree.iter().map(|(i, ci, n)| json!({"degree": i, "coefficient": ci.to_string(), "cells": n})).collect::<Vec<_>>(),
                    "value_at_one": c.value_at_one.to_string(),
                    "cell_count": c.cell_count,
                    "matches": c.matches(),
                });
            }
            out.result = result;
        }
    }
    Ok(out)
}

/// Parses arguments (without the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("quivercell".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.to_string();
            return if code == EXIT_OK { Outcome { code, stdout: text, stderr: String::new(), report: None } } else { Outcome { code, stdout: String::new(), stderr: text, report: None } };
        }
    };
    let mut ctx = Ctx { opts: cli.opts.clone(), args, inputs: Vec::new() };
    match execute(&mut ctx, &cli.command) {
        Ok(p) => {
            let report = json!({
                "schema_version": doc::SCHEMA_VERSION,
                "kind": "report",
                "payload": {
                    "command": cli.command.name(),
                    "version": env!("CARGO_PKG_VERSION"),
                    "core_version": quivercell_core::VERSION,
                    "inputs_sha256": ctx.inputs_hash(),
                    "seed": ctx.opts.seed,
                    "result": p.result,
                    "warnings": p.warnings,
                },
            });
            let mut stderr = String::new();
            for w in &p.warnings {
                let _ = writeln!(stderr, "warning: {}", w);
            }
            if let Some(path) = &ctx.opts.out {
                let text = match &p.document {
                    Some(d) => doc::to_text(d),
                    None => {
                        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
                        s.push('\n');
                        s
                    }
                };
                if let Err(e) = fs::write(path, text) {
                    return Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("{}: {}\n", path.display(), e), report: None };
                }
            }
            let mut stdout = p.text;
            stdout.push('\n');
            Outcome { code: p.code, stdout, stderr, report: Some(report) }
        }
        Err(e) => {
            let prefix = match e.code {
                EXIT_BUDGET => "warning",
                _ => "error",
            };
            Outcome { code: e.code, stdout: String::new(), stderr: format!("{}: {}\n", prefix, e.message), report: None }
        }
    }
}
