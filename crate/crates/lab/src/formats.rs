//! JSON file formats and their conversion to and from core types.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use shimura_core::dualgraph::{Edge, Graph, Vertex};
use shimura_core::exactalg::{Int, IntPoly, NFElem, NumberField, Rat};
use shimura_core::fuchsian::{CMOrderRecord, LocalSplitting, Signature, SplittingTable};
use shimura_core::hecke::{BrandtDataset, BrandtEdge, EigenTable};
use shimura_core::quatarith::{PrimeRecord, QuaternionData};

use crate::error::{LabError, Result};

/// An integer or rational written either as a JSON number or as text
/// (`"-12"`, `"3/4"`); text is needed once values leave the i64 range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn to_int(&self) -> Result<Int> {
        match self {
            Num::Int(i) => Ok(Int::from(*i)),
            Num::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| LabError::invalid(format!("not an integer: {s:?}"))),
        }
    }

    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            Num::Int(i) => Ok(Rat::from_integer(Int::from(*i))),
            Num::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| LabError::invalid(format!("not a rational: {s:?}"))),
        }
    }

    pub fn from_int(x: &Int) -> Num {
        i64::try_from(x)
            .map(Num::Int)
            .unwrap_or_else(|_| Num::Text(x.to_string()))
    }

    pub fn from_rat(x: &Rat) -> Num {
        if x.is_integer() {
            Num::from_int(x.numer())
        } else {
            Num::Text(x.to_string())
        }
    }
}

fn ints(v: &[Num]) -> Result<Vec<Int>> {
    v.iter().map(Num::to_int).collect()
}

fn rats(v: &[Num]) -> Result<Vec<Rat>> {
    v.iter().map(Num::to_rat).collect()
}

pub fn int_poly(v: &[Num]) -> Result<IntPoly> {
    Ok(IntPoly::new(ints(v)?))
}

pub fn poly_nums(p: &IntPoly) -> Vec<Num> {
    p.coeffs().iter().map(Num::from_int).collect()
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Io(path.to_path_buf(), e))?;
    serde_json::from_str(&text).map_err(|e| LabError::Json(path.to_path_buf(), e))
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

/// Resolves `rel` against the directory holding `base`.
pub fn sibling(base: &Path, rel: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(rel)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberFieldFile {
    pub name: String,
    /// coefficients, low to high
    pub poly: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<Num>,
    /// real places v1, v2, ... as indices into the ascending list of real roots
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place_order: Option<Vec<usize>>,
    /// asserted, never computed
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub narrow_class_number_one: Option<bool>,
    pub provenance: String,
}

impl NumberFieldFile {
    pub fn build(&self) -> Result<Arc<NumberField>> {
        let mut nf = NumberField::new(self.name.clone(), int_poly(&self.poly)?)?;
        if let Some(d) = &self.disc {
            nf = nf.with_discriminant(d.to_int()?)?;
        }
        if let Some(order) = &self.place_order {
            nf = nf.with_place_order(order.clone())?;
        }
        Ok(Arc::new(nf))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub name: String,
    pub poly: Vec<Num>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub p: u64,
    pub f: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default)]
    pub trusted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl PrimeEntry {
    pub fn record(&self) -> PrimeRecord {
        let label = self.label.clone().unwrap_or_else(|| format!("p{}", self.p));
        let mut r = PrimeRecord::new(self.p, self.f, label);
        r.index = self.index;
        if self.trusted {
            r = r.trusted(self.provenance.clone().unwrap_or_default());
        } else {
            r.provenance = self.provenance.clone();
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionFile {
    pub name: String,
    /// number field file, relative to this one
    pub field: String,
    pub a: Vec<Num>,
    pub b: Vec<Num>,
    pub ramified_finite: Vec<PrimeEntry>,
    /// real places numbered from 1 (v1, v2, ...)
    pub ramified_real: Vec<usize>,
    /// display only: each basis element as four coordinate vectors over the power basis
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_basis: Option<Vec<[Vec<Num>; 4]>>,
    pub provenance: String,
}

impl QuaternionFile {
    pub fn primes(&self) -> Vec<PrimeRecord> {
        self.ramified_finite
            .iter()
            .map(PrimeEntry::record)
            .collect()
    }

    pub fn build(&self, nf: &Arc<NumberField>) -> Result<QuaternionData> {
        let a = NFElem::new(nf, rats(&self.a)?)?;
        let b = NFElem::new(nf, rats(&self.b)?)?;
        let real = self
            .ramified_real
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or_else(|| LabError::invalid("real places are numbered from 1"))
            })
            .collect::<Result<_>>()?;
        Ok(QuaternionData::new(a, b, self.primes(), real)?)
    }

    pub fn order_basis_text(&self, nf: &Arc<NumberField>) -> Result<Vec<String>> {
        let Some(basis) = &self.order_basis else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for elem in basis {
            let mut terms = Vec::new();
            for (c, unit) in elem.iter().zip(["", "i", "j", "k"]) {
                let x = NFElem::new(nf, rats(c)?)?;
                if !x.is_zero() {
                    let s = x.as_poly().to_string();
                    terms.push(if unit.is_empty() {
                        s
                    } else {
                        format!("({s}){unit}")
                    });
                }
            }
            out.push(if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmRecordEntry {
    pub label: String,
    /// order of the elliptic elements this CM order accounts for
    pub q: u64,
    pub h: u64,
    pub torsion_unit_order: u64,
    pub splitting_at: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor_note: Option<String>,
    pub provenance: String,
}

impl CmRecordEntry {
    pub fn record(&self) -> Result<CMOrderRecord> {
        let splitting_at = self
            .splitting_at
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.parse::<LocalSplitting>()?)))
            .collect::<Result<_>>()?;
        let r = CMOrderRecord {
            label: self.label.clone(),
            q: self.q,
            h: self.h,
            provenance: self.provenance.clone(),
            torsion_unit_order: self.torsion_unit_order,
            splitting_at,
            conductor_note: self.conductor_note.clone(),
        };
        r.validate()?;
        Ok(r)
    }
}

pub fn cm_records(entries: &[CmRecordEntry]) -> Result<Vec<CMOrderRecord>> {
    entries.iter().map(CmRecordEntry::record).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingEntry {
    pub q: u64,
    pub prime: String,
    pub splitting: String,
    pub provenance: String,
}

pub fn splitting_table(entries: &[SplittingEntry]) -> Result<SplittingTable> {
    let mut t = SplittingTable::default();
    for e in entries {
        t.insert(e.q, &e.prime, e.splitting.parse()?, &e.provenance);
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: String,
    pub w: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub id: String,
    pub u: String,
    pub v: String,
    pub w: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipartition: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            vertices: g
                .vertices
                .iter()
                .map(|v| VertexEntry {
                    id: v.id.clone(),
                    w: v.w,
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeEntry {
                    id: e.id.clone(),
                    u: g.vertices[e.u].id.clone(),
                    v: g.vertices[e.v].id.clone(),
                    w: e.w,
                })
                .collect(),
            bipartition: g.bipartition.clone(),
            notes: g.notes.clone(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        if index.len() != self.vertices.len() {
            return Err(LabError::invalid("duplicate vertex id"));
        }
        let look = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| LabError::invalid(format!("edge endpoint {id:?} is not a vertex")))
        };
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                w: v.w,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    id: e.id.clone(),
                    u: look(&e.u)?,
                    v: look(&e.v)?,
                    w: e.w,
                })
            })
            .collect::<Result<_>>()?;
        let mut g = Graph::new(vertices, edges)?;
        if let Some(b) = &self.bipartition {
            if b.len() != g.vertex_count() {
                return Err(LabError::invalid(
                    "bipartition length differs from vertex count",
                ));
            }
            g.bipartition = Some(b.clone());
        }
        g.notes = self.notes.clone();
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrandtEdgeEntry {
    pub i: usize,
    pub j: usize,
    pub w: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// row i lists the neighbours of class i
    #[default]
    Rows,
    /// column j lists the neighbours of class j
    Columns,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrandtFile {
    pub field: String,
    pub classes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub weights: Vec<u64>,
    pub matrices: BTreeMap<String, Vec<Vec<i64>>>,
    /// N(q) per matrix label, enabling the row-sum check
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub norms: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edges: BTreeMap<String, Vec<BrandtEdgeEntry>>,
    #[serde(default)]
    pub normalization: Normalization,
    pub provenance: String,
}

impl BrandtFile {
    pub fn build(&self) -> Result<BrandtDataset> {
        let labels = match &self.labels {
            Some(l) if l.len() == self.classes => l.clone(),
            Some(l) => {
                return Err(LabError::invalid(format!(
                    "{} labels for {} classes",
                    l.len(),
                    self.classes
                )))
            }
            None => (0..self.classes).map(|i| format!("I{i}")).collect(),
        };
        let edges = self
            .edges
            .iter()
            .map(|(k, es)| {
                (
                    k.clone(),
                    es.iter()
                        .map(|e| BrandtEdge {
                            i: e.i,
                            j: e.j,
                            w: e.w,
                        })
                        .collect(),
                )
            })
            .collect();
        let ctor = match self.normalization {
            Normalization::Rows => BrandtDataset::new,
            Normalization::Columns => BrandtDataset::from_columns,
        };
        Ok(ctor(
            self.field.clone(),
            labels,
            self.weights.clone(),
            self.matrices.clone(),
            self.norms.clone(),
            edges,
            self.provenance.clone(),
        )?)
    }

    pub fn from_dataset(ds: &BrandtDataset) -> Self {
        BrandtFile {
            field: ds.field.clone(),
            classes: ds.dim(),
            labels: Some(ds.labels.clone()),
            weights: ds.weights.clone(),
            matrices: ds.matrices.clone(),
            norms: ds.norms.clone(),
            edges: ds
                .edges
                .iter()
                .map(|(k, es)| {
                    (
                        k.clone(),
                        es.iter()
                            .map(|e| BrandtEdgeEntry {
                                i: e.i,
                                j: e.j,
                                w: e.w,
                            })
                            .collect(),
                    )
                })
                .collect(),
            normalization: Normalization::Rows,
            provenance: ds.provenance.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituentEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alsign: Option<i8>,
    /// characteristic polynomial over Q of the eigenvalue at each prime label
    pub charpolys: BTreeMap<String, Vec<Num>>,
    /// defining polynomial of the coefficient field
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_poly: Option<Vec<Num>>,
    /// eigenvalues as power-basis coordinates in the coefficient field
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub eigenvalues: BTreeMap<String, Vec<Num>>,
    /// rows are power-basis coordinates of a Z-basis of the maximal order
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_basis: Option<Vec<Vec<Num>>>,
}

impl ConstituentEntry {
    pub fn table(&self) -> Result<EigenTable> {
        self.charpolys
            .iter()
            .map(|(k, v)| Ok((k.clone(), int_poly(v)?)))
            .collect()
    }

    pub fn eigenvalue_coords(&self) -> Result<BTreeMap<String, Vec<Rat>>> {
        self.eigenvalues
            .iter()
            .map(|(k, v)| Ok((k.clone(), rats(v)?)))
            .collect()
    }

    pub fn order_basis_rat(&self) -> Result<Option<Vec<Vec<Rat>>>> {
        self.order_basis
            .as_ref()
            .map(|b| b.iter().map(|r| rats(r)).collect())
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenFile {
    pub constituents: Vec<ConstituentEntry>,
    #[serde(default)]
    pub provenance: String,
}

impl EigenFile {
    pub fn get(&self, label: &str) -> Result<&ConstituentEntry> {
        self.constituents
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| {
                LabError::invalid(format!("no constituent {label:?} in eigenvalue data"))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureFile {
    pub genus: u64,
    pub elliptic: Vec<(u64, u64)>,
    pub text: String,
}

impl SignatureFile {
    pub fn from_signature(s: &Signature) -> Self {
        SignatureFile {
            genus: s.genus,
            elliptic: s.elliptic.clone(),
            text: s.to_string(),
        }
    }

    pub fn to_signature(&self) -> Result<Signature> {
        let s = Signature::new(self.genus, &self.elliptic)?;
        if s.to_string() != self.text {
            return Err(LabError::invalid(format!(
                "signature text {:?} disagrees with its fields",
                self.text
            )));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clique {
    pub ell: u64,
    pub members: Vec<String>,
    pub source: String,
}

/// Congruences asserted between constituents, used when eigenvalue data is absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceFile {
    pub nodes: Vec<String>,
    pub cliques: Vec<Clique>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignTable {
    /// eigenvalue of the involution on each constituent
    pub signs: BTreeMap<String, i8>,
    pub relation: String,
    pub provenance: String,
}
