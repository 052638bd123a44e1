//! Loading the shipped fixture directory.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use shimura_core::exactalg::NumberField;
use shimura_core::fuchsian::CMOrderRecord;
use shimura_core::quatarith::{PrimeRecord, QuaternionData};

use crate::error::Result;
use crate::formats::*;

/// Optional external data: Brandt matrices for the definite algebra over F.
pub const BRANDT_F: &str = "brandt_F.json";
/// Optional external data: eigenvalue tables of the five constituents.
pub const EIGENDATA: &str = "eigendata.json";

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub dir: PathBuf,
}

impl Fixtures {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Fixtures { dir: dir.into() }
    }

    /// The fixture directory shipped at the workspace root.
    pub fn shipped() -> Self {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
        Fixtures::new(dir.canonicalize().unwrap_or(dir))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn has(&self, name: &str) -> bool {
        self.path(name).is_file()
    }

    pub fn field(&self, name: &str) -> Result<Arc<NumberField>> {
        read_json::<NumberFieldFile>(&self.path(name))?.build()
    }

    pub fn quaternion_file(&self, name: &str) -> Result<QuaternionFile> {
        read_json(&self.path(name))
    }

    /// The algebra together with its finite ramification records.
    pub fn quaternion(
        &self,
        name: &str,
    ) -> Result<(Arc<NumberField>, QuaternionData, Vec<PrimeRecord>)> {
        let path = self.path(name);
        let qf: QuaternionFile = read_json(&path)?;
        let nf = read_json::<NumberFieldFile>(&sibling(&path, &qf.field))?.build()?;
        let q = qf.build(&nf)?;
        Ok((nf, q, qf.primes()))
    }

    pub fn cm_records(&self) -> Result<Vec<CMOrderRecord>> {
        cm_records(&read_json::<Vec<CmRecordEntry>>(
            &self.path("cmorders.json"),
        )?)
    }

    pub fn poly(&self, name: &str) -> Result<PolyFile> {
        read_json(&self.path(name))
    }

    pub fn congruences(&self, name: &str) -> Result<CongruenceFile> {
        read_json(&self.path(name))
    }

    pub fn signs(&self) -> Result<SignTable> {
        read_json(&self.path("al_signs.json"))
    }

    pub fn graph(&self, name: &str) -> Result<shimura_core::dualgraph::Graph> {
        read_json::<GraphFile>(&self.path(name))?.to_graph()
    }
}
