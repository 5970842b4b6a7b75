//! Resolution of `builtin:`, `census:` and `file:` references.

use std::path::Path;

use alterfold_core::census::census;
use alterfold_core::surgery::PlumbingGraph;
use alterfold_core::triangulation::Triangulation;
use alterfold_core::{builtin_category, FusionCategory};

use crate::formats::{load_category, parse_plumbing, parse_triangulation};
use crate::Error;

/// Environment variable overriding the tolerance of every resolved category.
pub const TOL_ENV: &str = "ALTERFOLD_TOL";

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(Path::new(path)).map_err(|source| Error::Io { path: path.to_string(), source })
}

/// Splits `NAME[:p1:p2…]` and maps the aliases `vec_z<n>` and `su2_<k>`.
fn builtin_spec(spec: &str) -> Result<(String, Vec<i64>), Error> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default().to_string();
    let params = parts
        .map(|p| p.parse::<i64>().map_err(|_| Error::Usage(format!("bad built-in parameter `{p}` in `{spec}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(n) = name.strip_prefix("vec_z").and_then(|s| s.parse::<i64>().ok()) {
        let params = match params.as_slice() {
            [] => vec![n, 0],
            [p] => vec![n, *p],
            [m, p] if *m == n => vec![n, *p],
            _ => return Err(Error::Usage(format!("`{spec}`: expected vec_z{n}[:p] or vec_z{n}:{n}:p"))),
        };
        return Ok(("vec_zn".into(), params));
    }
    if let Some(k) = name.strip_prefix("su2_").and_then(|s| s.parse::<i64>().ok()) {
        if !params.is_empty() {
            return Err(Error::Usage(format!("`{spec}`: su2_{k} takes no parameters")));
        }
        return Ok(("su2_level".into(), vec![k]));
    }
    Ok((name, params))
}

/// Reads the tolerance override, if set.
pub fn tol_override() -> Result<Option<f64>, Error> {
    match std::env::var(TOL_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(x) if x >= 0.0 => Ok(Some(x)),
            _ => Err(Error::Usage(format!("{TOL_ENV} must be a nonnegative number, got `{s}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Resolves `builtin:NAME[:params]` or `file:PATH`, applying the tolerance override.
pub fn resolve_category(reference: &str) -> Result<FusionCategory, Error> {
    let cat = if let Some(spec) = reference.strip_prefix("builtin:") {
        let (name, params) = builtin_spec(spec)?;
        builtin_category(&name, &params).map_err(Error::Input)?
    } else if let Some(path) = reference.strip_prefix("file:") {
        load_category(&read(path)?).map_err(Error::Input)?
    } else {
        return Err(Error::Usage(format!("category reference `{reference}` must start with builtin: or file:")));
    };
    Ok(match tol_override()? {
        Some(tol) => cat.with_tol(tol),
        None => cat,
    })
}

/// Resolves `census:NAME` or `file:PATH`.
pub fn resolve_triangulation(reference: &str) -> Result<Triangulation, Error> {
    if let Some(name) = reference.strip_prefix("census:") {
        census(name).map_err(Error::Input)
    } else if let Some(path) = reference.strip_prefix("file:") {
        parse_triangulation(&read(path)?).map_err(Error::Input)
    } else {
        Err(Error::Usage(format!("triangulation reference `{reference}` must start with census: or file:")))
    }
}

/// Reads a plumbing file; a leading `file:` is optional.
pub fn resolve_plumbing(reference: &str) -> Result<PlumbingGraph, Error> {
    let path = reference.strip_prefix("file:").unwrap_or(reference);
    parse_plumbing(&read(path)?).map_err(Error::Input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_aliases() {
        assert_eq!(builtin_spec("vec_z2").unwrap(), ("vec_zn".into(), vec![2, 0]));
        assert_eq!(builtin_spec("vec_z2:2:0").unwrap(), ("vec_zn".into(), vec![2, 0]));
        assert_eq!(builtin_spec("vec_z3:1").unwrap(), ("vec_zn".into(), vec![3, 1]));
        assert_eq!(builtin_spec("su2_2").unwrap(), ("su2_level".into(), vec![2]));
        assert_eq!(builtin_spec("vec_zn:4:2").unwrap(), ("vec_zn".into(), vec![4, 2]));
        assert!(builtin_spec("vec_z2:3:0").is_err());
        assert!(builtin_spec("fibonacci:x").is_err());
    }

    #[test]
    fn reference_errors() {
        assert!(matches!(resolve_category("fibonacci"), Err(Error::Usage(_))));
        assert!(matches!(resolve_category("builtin:nope"), Err(Error::Input(_))));
        assert!(matches!(resolve_triangulation("census:nope"), Err(Error::Input(_))));
        assert!(matches!(resolve_category("file:/nonexistent/x"), Err(Error::Io { .. })));
        assert_eq!(resolve_triangulation("census:s3_2tet").unwrap().num_tets(), 2);
    }
}
