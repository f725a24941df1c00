//! Quivers, dimension vectors and the Euler form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite quiver. Loops and parallel arrows are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(arrow id, source id, target id)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let index: BTreeMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if index.len() != vertices.len() {
            return Err(Error::InvalidInput("duplicate vertex id".into()));
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            let look = |v: &S| {
                index.get(v.as_ref()).copied().ok_or_else(|| {
                    Error::InvalidInput(format!("arrow `{}` references unknown vertex `{}`", id.as_ref(), v.as_ref()))
                })
            };
            out.push(Arrow { id: id.as_ref().to_string(), src: look(s)?, tgt: look(t)? });
        }
        Self::from_parts(vertices, out)
    }

    pub fn from_parts(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for v in &vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vertex id `{}`", v)));
            }
        }
        let mut seen = BTreeMap::new();
        for a in &arrows {
            if a.src >= vertices.len() || a.tgt >= vertices.len() {
                return Err(Error::InvalidInput(format!("arrow `{}` has a dangling endpoint", a.id)));
            }
            if seen.insert(a.id.as_str(), ()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate arrow id `{}`", a.id)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }
    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }
    pub fn src(&self, a: usize) -> usize {
        self.arrows[a].src
    }
    pub fn tgt(&self, a: usize) -> usize {
        self.arrows[a].tgt
    }

    /// Vertices in an order where every arrow goes forward, if one exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n_vertices();
        let mut indeg = alloc::vec![0usize; n];
        for a in &self.arrows {
            indeg[a.tgt] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indeg[a.tgt] -= 1;
                if indeg[a.tgt] == 0 {
                    ready.push(a.tgt);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Full subquiver on `keep` (in that order) and the indices of the retained arrows.
    pub fn full_subquiver(&self, keep: &[usize]) -> (Quiver, Vec<usize>) {
        let mut pos = alloc::vec![usize::MAX; self.n_vertices()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let mut arrows = Vec::new();
        let mut kept = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if pos[a.src] != usize::MAX && pos[a.tgt] != usize::MAX {
                arrows.push(Arrow { id: a.id.clone(), src: pos[a.src], tgt: pos[a.tgt] });
                kept.push(i);
            }
        }
        (Quiver { vertices, arrows }, kept)
    }

    /// The generalized Kronecker quiver K(m): two vertices, m arrows 0 → 1.
    pub fn kronecker(m: usize) -> Self {
        let arrows = (0..m)
            .map(|i| Arrow { id: arrow_letter(i, m), src: 0, tgt: 1 })
            .collect();
        Quiver { vertices: ids(2), arrows }
    }

    /// The subspace quiver S(n): arrows a_i from q_i to q_0.
    pub fn subspace(n: usize) -> Self {
        let arrows = (1..=n).map(|i| Arrow { id: format!("a{}", i), src: i, tgt: 0 }).collect();
        Quiver { vertices: ids(n + 1), arrows }
    }

    /// The quiver with arrows a, b: 0 → 1 and c: 2 → 1.
    pub fn k21() -> Self {
        let arrows = alloc::vec![
            Arrow { id: "a".into(), src: 0, tgt: 1 },
            Arrow { id: "b".into(), src: 0, tgt: 1 },
            Arrow { id: "c".into(), src: 2, tgt: 1 },
        ];
        Quiver { vertices: ids(3), arrows }
    }

    /// T(n): arrows a1, a2: q_1 → q_0 and b_i: q_{i+1} → q_0 for i = 1..n.
    pub fn t_quiver(n: usize) -> Self {
        let mut arrows = alloc::vec![
            Arrow { id: "a1".into(), src: 1, tgt: 0 },
            Arrow { id: "a2".into(), src: 1, tgt: 0 },
        ];
        for i in 1..=n {
            arrows.push(Arrow { id: format!("b{}", i), src: i + 1, tgt: 0 });
        }
        Quiver { vertices: ids(n + 2), arrows }
    }

    /// Parses `K(m)`, `S(n)`, `K(2,1)` and `T(n)`.
    pub fn builtin(name: &str) -> Result<Self> {
        let t: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unknown builtin quiver `{}`", name));
        if t == "K(2,1)" {
            return Ok(Self::k21());
        }
        let (head, rest) = t.split_at(t.find('(').ok_or_else(bad)?);
        let n: usize = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.parse().ok())
            .ok_or_else(bad)?;
        match head {
            "K" => Ok(Self::kronecker(n)),
            "S" => Ok(Self::subspace(n)),
            "T" => Ok(Self::t_quiver(n)),
            _ => Err(bad()),
        }
    }
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn arrow_letter(i: usize, m: usize) -> String {
    if m <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{}", i + 1)
    }
}

/// A dimension vector indexed by vertex position.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(alloc::vec![0; n])
    }
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn add(&self, other: &Self) -> Self {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    /// Sum of per-vertex offsets: where vertex q starts in a concatenated basis.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.0
            .iter()
            .map(|&d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }
}

impl core::ops::Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl From<Vec<usize>> for DimVector {
    fn from(v: Vec<usize>) -> Self {
        DimVector(v)
    }
}

/// ⟨a, b⟩ = Σ_q a_q b_q − Σ_arrows a_{s(α)} b_{t(α)}.
pub fn euler_form(q: &Quiver, a: &DimVector, b: &DimVector) -> Result<i64> {
    if a.len() != q.n_vertices() || b.len() != q.n_vertices() {
        return Err(Error::Mismatch("dimension vector on wrong quiver".into()));
    }
    let diag: i64 = a.0.iter().zip(&b.0).map(|(&x, &y)| (x * y) as i64).sum();
    let arrows: i64 = q.arrows().iter().map(|ar| (a[ar.src] * b[ar.tgt]) as i64).sum();
    Ok(diag - arrows)
}

/// Number of points of R_α: Σ_arrows α_{s} α_{t}.
pub fn rep_space_dim(q: &Quiver, a: &DimVector) -> usize {
    q.arrows().iter().map(|ar| a[ar.src] * a[ar.tgt]).sum()
}
