use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;
use quivercell::doc::{self, Kind, QuiverDoc, RElementDoc, RepDoc};
use quivercell::run;
use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quivercell"))
}

fn result(o: &quivercell::Outcome) -> Value {
    o.report.as_ref().expect("report")["payload"]["result"].clone()
}

#[test]
fn subspace_tnf_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let m: PathBuf = dir.path().join("m.json");
    let o = run(["subspace-tnf", "--n", "4", "--out", m.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{:?}", o);
    let text = std::fs::read_to_string(&m).unwrap();
    let d = doc::parse_document(&text).unwrap();
    assert_eq!(d.kind, Kind::Mosaic);

    let o = run(["mosaic-verify", m.to_str().unwrap(), "--q", "2"]);
    assert_eq!(o.code, 0, "{:?}", o);
    let r = result(&o);
    assert_eq!(r["covered"], 6);
    assert_eq!(r["total_indec_classes"], 6);
    assert_eq!(r["multiply_covered"], 0);
    assert_eq!(r["is_tnf"], true);
    assert!(o.stdout.contains("cellular tree normal form: true"));
}

#[test]
fn mosaic_verify_needs_a_finite_field() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    assert_eq!(run(["subspace-tnf", "--n", "3", "--out", m.to_str().unwrap()]).code, 0);
    assert_eq!(run(["mosaic-verify", m.to_str().unwrap()]).code, 2);
}

#[test]
fn att_cell_of_k3_cover() {
    let o = run(["att-cell", &data("k3_cover.json")]);
    assert_eq!(o.code, 0, "{:?}", o);
    let r = result(&o);
    assert_eq!(r["cell_dim"], 4);
    let s = |v: &Value| serde_json::to_string(v).unwrap();
    assert_eq!(s(&r["section"]), r#"[["a",1,1],["a",2,1],["b",2,0],["b",2,1]]"#);
    assert_eq!(s(&r["u_psi"]), r#"[["0",1,0],["1",1,0],["1",2,0],["1",2,1]]"#);
    assert_eq!(s(&r["weights"]), "[[-1,1],[0,4,6]]");
    let expected = "weights: [[-1, 1], [0, 4, 6]]\ncell dim: 4\na: 1. *x *x\nb: .. *1 xx\nc: .. 1. *1\nU_psi 0: .. *.\nU_psi 1: ... *.. **.\n";
    assert_eq!(o.stdout, expected);
}

#[test]
fn hom_and_ext_on_simples() {
    let o = run(["hom", &data("k2_s0.json"), &data("k2_s1.json")]);
    assert_eq!(o.code, 0, "{:?}", o);
    assert!(o.stdout.starts_with("dim Hom: 0\ndim Ext: 2\nEuler form: -2"), "{}", o.stdout);
    let o = run(["tree-cells", &data("k2_s1.json"), &data("k2_s0.json")]);
    assert_eq!(o.code, 0, "{:?}", o);
    assert_eq!(result(&o)["cell_dims"].to_string(), "[0,1]");
}

#[test]
fn indec_and_iso() {
    let o = run(["indec", &data("k2_t.json"), "--q", "3"]);
    assert_eq!(o.code, 0, "{:?}", o);
    assert_eq!(result(&o)["indecomposable"], true);
    let o = run(["iso", &data("k2_t.json"), &data("k2_t.json")]);
    assert_eq!(result(&o)["isomorphic"], true);
}

#[test]
fn kac_poly_of_subspace_four() {
    let o = run(["kac-poly", "--quiver", "S(4)", "--dims", "2,1,1,1,1", "--primes", "2,3,5"]);
    assert_eq!(o.code, 0, "{:?}", o);
    assert!(o.stdout.contains("polynomial: q + 4"), "{}", o.stdout);
    assert!(o.stdout.contains("trusted: true"), "{}", o.stdout);
}

#[test]
fn binary_exit_codes() {
    let ok = bin().args(["kac-count", "--quiver", "K(2)", "--dims", "1,1", "--q", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("absolutely indecomposable classes: 4"));

    let bad = bin().args(["kac-count", "--quiver", "K(9", "--dims", "1,1", "--q", "3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());

    let missing = bin().args(["hom", "/nonexistent/a.json", "/nonexistent/b.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let budget = bin().args(["kac-count", "--quiver", "K(2)", "--dims", "2,2", "--q", "3", "--budget", "5"]).output().unwrap();
    assert_eq!(budget.status.code(), Some(3));
}

#[test]
fn malformed_document_names_the_entry() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"schema_version":"1","kind":"representation","payload":{"field":"Q","quiver":{"builtin":"K(2)"},"dims":[1,1],"maps":{"a":[["1","2"]]}}}"#).unwrap();
    let o = run(["indec", p.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("payload.maps.a"), "{}", o.stderr);
}

#[test]
fn report_written_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let o = run(["poincare", "--quiver", "T(2)", "--out", p.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{:?}", o);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["kind"], "report");
    assert_eq!(v["payload"]["command"], "poincare");
    assert_eq!(v["payload"]["result"]["coefficients"].to_string(), "[1,0,2,0,1]");
}

fn small_entry() -> impl Strategy<Value = String> {
    (-9i64..10, 1i64..5).prop_map(|(n, d)| if d == 1 { n.to_string() } else { format!("{}/{}", n, d) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representation_round_trip(d0 in 0usize..3, d1 in 0usize..3, entries in proptest::collection::vec(small_entry(), 8)) {
        let mut maps = doc::Blocks::new();
        for (k, id) in ["a", "b"].iter().enumerate() {
            let m: Vec<Vec<String>> = (0..d1).map(|i| (0..d0).map(|j| entries[(k * 4 + i * 2 + j) % 8].clone()).collect()).collect();
            maps.insert(id.to_string(), m);
        }
        let rd = RepDoc { field: "Q".into(), quiver: QuiverDoc::builtin("K(2)"), dims: vec![d0, d1], maps };
        let rep = rd.to_rep(&quivercell_core::Rationals, "payload").unwrap();
        let back = RepDoc::from_rep(&rep, &rd.quiver);
        let again = back.to_rep(&quivercell_core::Rationals, "payload").unwrap();
        prop_assert_eq!(&rep, &again);
        let text = doc::to_text(&doc::wrap(Kind::Representation, &back));
        let parsed: RepDoc = doc::payload(&doc::parse_document(&text).unwrap(), Kind::Representation).unwrap();
        prop_assert_eq!(parsed, back);
    }

    #[test]
    fn relement_round_trip(vals in proptest::collection::vec(0i64..5, 6)) {
        let f = quivercell_core::PrimeField::new(5).unwrap();
        let mut blocks = doc::Blocks::new();
        blocks.insert("a".into(), vec![vec![vals[0].to_string(), vals[1].to_string()]]);
        blocks.insert("b".into(), vec![vec![vals[2].to_string(), vals[3].to_string()]]);
        let ed = RElementDoc { field: "Fp:5".into(), quiver: QuiverDoc::builtin("K(2)"), src_dims: vec![2, 0], tgt_dims: vec![0, 1], blocks };
        let (q, x) = ed.to_relement(&f, "payload").unwrap();
        let back = RElementDoc::from_relement(&f, &q, &x, &ed.quiver);
        let (_, y) = back.to_relement(&f, "payload").unwrap();
        prop_assert_eq!(x, y);
    }
}
