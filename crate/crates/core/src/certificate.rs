//! JSON certificate for a constructed cycle.
//!
//! Layout (field order is fixed so identical runs give identical bytes):
//!
//! ```text
//! {"q":..,"n":..,"k":..,
//!  "field":{"p":..,"m":..,"n":..,"poly":[ascending coefficients over GF(q)]},
//!  "meta":{"seed":..,"ell":..,"g":..,"flips":..},
//!  "vertices":[{"dim":..,"points":[ascending residues mod s]},...],
//!  "verdict":"HAMILTONIAN_CYCLE"}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldTable;
use crate::geometry::Subspace;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("cannot read certificate: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed certificate: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDescription {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub poly: Vec<u32>,
}

impl FieldDescription {
    pub fn of(table: &FieldTable) -> Self {
        Self {
            p: table.p(),
            m: table.m(),
            n: table.n(),
            poly: table.modulus().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleMeta {
    pub seed: u64,
    pub ell: u32,
    pub g: u32,
    pub flips: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    HamiltonianCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleCertificate {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub field: FieldDescription,
    pub meta: CycleMeta,
    pub vertices: Vec<Subspace>,
    pub verdict: Verdict,
}

impl CycleCertificate {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("certificate serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, CertificateError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), CertificateError> {
        fs::write(path, self.to_json())?;
        Ok(())
    }
}
