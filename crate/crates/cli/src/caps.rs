//! `key=value,...` cap specifications, also read from `CTRSLAB_DEFAULT_CAPS`.

use ctrslab_core::EngineCaps;

pub const ENV_VAR: &str = "CTRSLAB_DEFAULT_CAPS";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CapsError {
    #[error("cap entry {0:?} is not of the form key=value")]
    Malformed(String),
    #[error("unknown cap {0:?} (expected max_steps, max_nodes, max_level or max_term_size)")]
    UnknownKey(String),
    #[error("cap {key}: {value:?} is not a non-negative integer")]
    BadValue { key: String, value: String },
}

/// Applies `spec` on top of `base`. Keys may omit the `max_` prefix.
pub fn parse_caps(spec: &str, base: EngineCaps) -> Result<EngineCaps, CapsError> {
    let mut caps = base;
    for entry in spec.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| CapsError::Malformed(entry.to_string()))?;
        let key = key.trim();
        let n: usize = value.trim().parse().map_err(|_| CapsError::BadValue {
            key: key.to_string(),
            value: value.trim().to_string(),
        })?;
        match key.strip_prefix("max_").unwrap_or(key) {
            "steps" => caps.max_steps = n,
            "nodes" => caps.max_nodes = n,
            "level" => caps.max_level = n,
            "term_size" => caps.max_term_size = n,
            _ => return Err(CapsError::UnknownKey(key.to_string())),
        }
    }
    Ok(caps)
}

/// `base` overridden by the environment, if set.
pub fn default_caps(base: EngineCaps) -> Result<EngineCaps, CapsError> {
    match std::env::var(ENV_VAR) {
        Ok(spec) => parse_caps(&spec, base),
        Err(_) => Ok(base),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let c = parse_caps("max_steps=5, nodes=10", EngineCaps::default()).unwrap();
        assert_eq!((c.max_steps, c.max_nodes), (5, 10));
        assert_eq!(c.max_level, EngineCaps::default().max_level);
        assert_eq!(parse_caps("", EngineCaps::default()).unwrap(), EngineCaps::default());
    }

    #[test]
    fn rejects_bad_entries() {
        let base = EngineCaps::default();
        assert!(matches!(parse_caps("steps", base), Err(CapsError::Malformed(_))));
        assert!(matches!(parse_caps("depth=3", base), Err(CapsError::UnknownKey(_))));
        assert!(matches!(parse_caps("steps=-1", base), Err(CapsError::BadValue { .. })));
    }
}
