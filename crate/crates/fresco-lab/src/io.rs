//! Reading element, module and operator files.

use std::fs;
use std::path::{Path, PathBuf};

use fresco_core::module::{ClosureSet, ElementRef, ModuleFile, SubModule, DEFAULT_GUARD};
use fresco_core::ops::{ABOperator, OperatorFile, StructureWord, WordFile};
use fresco_core::xi::ElementFile;
use fresco_core::{FrescoError, Result, XiElement};
use serde::de::DeserializeOwned;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| FrescoError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| FrescoError::Parse(format!("{}: {e}", path.display())))
}

pub fn load_element(path: &Path) -> Result<XiElement> {
    XiElement::from_file(&read_json::<ElementFile>(path)?)
}

fn resolve(r: &ElementRef, base: Option<&Path>) -> Result<XiElement> {
    match r {
        ElementRef::Inline(f) => XiElement::from_file(f),
        ElementRef::Path(p) => {
            let p = PathBuf::from(p);
            let full = match base {
                Some(dir) if p.is_relative() => dir.join(p),
                _ => p,
            };
            load_element(&full)
        }
    }
}

/// Builds the module of a file; relative element paths resolve against `base`. The level is the
/// smallest generator certification, capped by `trunc`.
pub fn module_from_file(f: &ModuleFile, base: Option<&Path>, trunc: Option<usize>) -> Result<SubModule> {
    let gens = f.generators.iter().map(|r| resolve(r, base)).collect::<Result<Vec<_>>>()?;
    let Some(first) = gens.first() else {
        return Err(FrescoError::Parse("module file without generators".into()));
    };
    let amb = gens.iter().skip(1).fold(first.ambient().clone(), |a, g| a.union(g.ambient()));
    let cert = gens.iter().map(XiElement::cert_degree).min().unwrap_or(0);
    let cert = trunc.map_or(cert, |t| t.min(cert));
    let closure = ClosureSet::from_gens(&f.closure)?;
    SubModule::generate(&amb, cert, &gens, closure, f.guard.unwrap_or(DEFAULT_GUARD))
}

/// A module file, or a single element file read as its `B[a]`-module.
pub fn load_module(path: &Path, trunc: Option<usize>, guard: Option<usize>) -> Result<SubModule> {
    let value: serde_json::Value = read_json(path)?;
    let mut file: ModuleFile = if value.get("generators").is_some() {
        serde_json::from_value(value).map_err(|e| FrescoError::Parse(format!("{}: {e}", path.display())))?
    } else {
        let e: ElementFile =
            serde_json::from_value(value).map_err(|e| FrescoError::Parse(format!("{}: {e}", path.display())))?;
        ModuleFile { generators: vec![ElementRef::Inline(e)], closure: ClosureSet::AB.gens(), guard: None }
    };
    if guard.is_some() {
        file.guard = guard;
    }
    module_from_file(&file, path.parent(), trunc)
}

/// An operator in normal form or a word of factors; words expand at `trunc` (default 24).
pub fn load_operator(path: &Path, trunc: Option<usize>) -> Result<(ABOperator, Option<StructureWord>)> {
    let value: serde_json::Value = read_json(path)?;
    let parse = |e: serde_json::Error| FrescoError::Parse(format!("{}: {e}", path.display()));
    if value.get("word").is_some() {
        let wf: WordFile = serde_json::from_value(value).map_err(parse)?;
        let w = StructureWord::from_file(&wf)?;
        let t = trunc.or(wf.trunc_order).unwrap_or(24);
        Ok((w.expand(t)?, Some(w)))
    } else {
        let of: OperatorFile = serde_json::from_value(value).map_err(parse)?;
        Ok((ABOperator::from_file(&of)?, None))
    }
}
