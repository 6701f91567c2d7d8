//! System-file ingestion: a JSON document declaring the ring and either a
//! full polynomial system (resultant mode) or a single invariant polynomial
//! (discriminant mode).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;

use equires::polyring::{parse, Polynomial, RingContext, Scalar};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    pub p: usize,
    pub degree: u32,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    #[serde(default)]
    pub system: Option<Vec<String>>,
    #[serde(default)]
    pub polynomial: Option<String>,
}

pub enum LoadedInput {
    /// Resultant mode: `n` labeled polynomials.
    System(Vec<Polynomial>),
    /// Discriminant mode: one invariant polynomial.
    Invariant(Polynomial),
}

pub struct Loaded {
    pub ctx: Arc<RingContext>,
    pub degree: u32,
    pub input: LoadedInput,
}

pub fn load_system_file(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::IoParse(format!("cannot read {}: {e}", path.display())))?;
    let file: SystemFile = serde_json::from_str(&text)
        .map_err(|e| CliError::IoParse(format!("invalid system file {}: {e}", path.display())))?;

    if file.variables.len() != file.n {
        return Err(CliError::Validation(format!(
            "n = {} but {} variables declared",
            file.n,
            file.variables.len()
        )));
    }
    if file.p == 0 || file.p >= file.n {
        return Err(CliError::Validation(format!(
            "block split must satisfy 1 <= p < n, got p = {}, n = {}",
            file.p, file.n
        )));
    }
    let ctx = RingContext::with_split(
        file.variables.clone(),
        file.parameters.clone(),
        file.p,
    )
    .map_err(|e| CliError::Validation(e.to_string()))?;

    let input = match (&file.system, &file.polynomial) {
        (Some(system), None) => {
            if system.len() != file.n {
                return Err(CliError::Validation(format!(
                    "system lists {} polynomials for n = {}",
                    system.len(),
                    file.n
                )));
            }
            let polys = system
                .iter()
                .enumerate()
                .map(|(i, text)| {
                    parse(text, &ctx).map_err(|e| {
                        CliError::IoParse(format!("polynomial {} does not parse: {e}", i + 1))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            for (i, f) in polys.iter().enumerate() {
                let (deg, homogeneous) = f.degree_and_homogeneity();
                if !homogeneous || deg != Some(file.degree) {
                    return Err(CliError::Validation(format!(
                        "polynomial {} is not homogeneous of the declared degree {}",
                        i + 1,
                        file.degree
                    )));
                }
            }
            LoadedInput::System(polys)
        }
        (None, Some(text)) => {
            let f = parse(text, &ctx)
                .map_err(|e| CliError::IoParse(format!("polynomial does not parse: {e}")))?;
            let (deg, homogeneous) = f.degree_and_homogeneity();
            if !homogeneous || deg != Some(file.degree) {
                return Err(CliError::Validation(format!(
                    "polynomial is not homogeneous of the declared degree {}",
                    file.degree
                )));
            }
            LoadedInput::Invariant(f)
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(
                "declare either `system` or `polynomial`, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Validation(
                "declare a `system` (resultant mode) or a `polynomial` (discriminant mode)".into(),
            ))
        }
    };

    Ok(Loaded {
        ctx,
        degree: file.degree,
        input,
    })
}

/// Parse `--at a=1,b=2/3,...` against the declared parameters.
pub fn parse_assignments(
    spec: &str,
    ctx: &Arc<RingContext>,
) -> Result<BTreeMap<String, Scalar>, CliError> {
    let mut values = BTreeMap::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (name, value) = item.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("`{item}` is not a name=value assignment"))
        })?;
        let name = name.trim();
        match ctx.symbol(name) {
            Some(id) if !ctx.is_main(id) => {}
            _ => {
                return Err(CliError::Validation(format!(
                    "`{name}` is not a declared parameter"
                )))
            }
        }
        let value = Scalar::from_str(value.trim()).map_err(|e| {
            CliError::Validation(format!("value for `{name}` does not parse: {e}"))
        })?;
        values.insert(name.to_string(), value);
    }
    // every parameter must be assigned for exact evaluation
    for p in ctx.params() {
        if !values.contains_key(p) {
            return Err(CliError::Validation(format!(
                "parameter `{p}` has no value in --at"
            )));
        }
    }
    Ok(values)
}
