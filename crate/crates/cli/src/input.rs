use std::fs;
use std::path::Path;

use tropline::tree::parse_newick;
use tropline::{EquidistantTree, UltraVector};

use crate::Failure;

/// A tree read from disk, in whichever format the file used.
pub enum TreeInput {
    Newick(EquidistantTree),
    Vector(UltraVector),
}

impl TreeInput {
    pub fn kind(&self) -> &'static str {
        match self {
            TreeInput::Newick(_) => "newick",
            TreeInput::Vector(_) => "vector",
        }
    }

    pub fn ultrametric(&self) -> UltraVector {
        match self {
            TreeInput::Newick(t) => t.to_ultrametric(),
            TreeInput::Vector(u) => u.clone(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// Newick if the first non-blank character is `(`, otherwise the vector format.
pub fn load(path: &Path) -> Result<TreeInput, Failure> {
    let text = read(path)?;
    let located = |e: tropline::Error| Failure::Invalid(format!("{}: {e}", path.display()));
    if text.trim_start().starts_with('(') {
        parse_newick(text.trim()).map(TreeInput::Newick).map_err(located)
    } else {
        UltraVector::parse_text(&text).map(TreeInput::Vector).map_err(located)
    }
}

pub fn load_ultrametric(path: &Path) -> Result<UltraVector, Failure> {
    Ok(load(path)?.ultrametric())
}
