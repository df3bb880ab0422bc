//! TOML presentation files.
//!
//! ```toml
//! p = 2
//! relations = ["x*y"]
//!
//! [[generators]]
//! name = "x"
//! degree = 1
//!
//! [[generators]]
//! name = "y"
//! degree = 1
//!
//! [[generators]]
//! name = "z"
//! degree = 2
//! exterior = false
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, GeneratorDecl, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub p: u32,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorDecl>,
}

impl PresentationFile {
    pub fn from_toml(text: &str) -> Result<Self, AlgebraError> {
        toml::from_str(text).map_err(|e| AlgebraError::File(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("presentation file serializes")
    }

    pub fn build(&self) -> Result<Arc<Presentation>, AlgebraError> {
        let rels: Vec<&str> = self.relations.iter().map(String::as_str).collect();
        Presentation::new(self.p, self.generators.clone(), &rels)
    }
}

impl Presentation {
    pub fn from_toml(text: &str) -> Result<Arc<Presentation>, AlgebraError> {
        PresentationFile::from_toml(text)?.build()
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            p: self.p,
            relations: self.relation_strings(),
            generators: self.generators.clone(),
        }
    }
}
