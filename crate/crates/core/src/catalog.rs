//! Label → input value catalog with a default fallback.
//!
//! File format: one record per line, `label<TAB>value<TAB>value...`. A line
//! whose label is `@default` sets the fallback values; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("line {line}, field {field}: {message}")]
    Parse { line: usize, field: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("catalog needs at least one default value")]
    NoDefaults,
}

const BUILTIN_DEFAULTS: [&str; 3] = ["Lorem", "Ipsum", "Dolor"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: BTreeMap<String, Vec<String>>,
    default_values: Vec<String>,
    warnings: Vec<String>,
}

/// Lower-cases and collapses whitespace; idempotent.
pub fn normalize(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog {
            entries: BTreeMap::new(),
            default_values: BUILTIN_DEFAULTS.iter().map(|s| s.to_string()).collect(),
            warnings: Vec::new(),
        }
    }
}

impl Catalog {
    pub fn new<I, L, V>(entries: I, default_values: Vec<String>) -> Result<Self, CatalogError>
    where
        I: IntoIterator<Item = (L, V)>,
        L: AsRef<str>,
        V: IntoIterator<Item = String>,
    {
        if default_values.is_empty() {
            return Err(CatalogError::NoDefaults);
        }
        let mut catalog = Catalog { default_values, ..Catalog::default() };
        for (label, values) in entries {
            let values: Vec<String> = values.into_iter().collect();
            if !values.is_empty() {
                catalog.insert(label.as_ref(), values);
            }
        }
        Ok(catalog)
    }

    fn insert(&mut self, label: &str, values: Vec<String>) {
        let key = normalize(label);
        if self.entries.insert(key.clone(), values).is_some() {
            let msg = format!("duplicate catalog label {key:?}; keeping the last entry");
            log::warn!("{msg}");
            self.warnings.push(msg);
        }
    }

    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut catalog = Catalog::default();
        let mut defaults: Option<Vec<String>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split('\t');
            let label = fields.next().unwrap_or_default().trim();
            if label.is_empty() {
                return Err(CatalogError::Parse { line, field: 1, message: "empty label".into() });
            }
            let mut values = Vec::new();
            for (j, v) in fields.enumerate() {
                let v = v.trim();
                if v.is_empty() {
                    return Err(CatalogError::Parse {
                        line,
                        field: j + 2,
                        message: format!("empty value for label {label:?}"),
                    });
                }
                values.push(v.to_string());
            }
            if values.is_empty() {
                return Err(CatalogError::Parse {
                    line,
                    field: 2,
                    message: format!("label {label:?} has no values (values are tab-separated)"),
                });
            }
            if label == "@default" {
                defaults = Some(values);
            } else {
                catalog.insert(label, values);
            }
        }
        if let Some(d) = defaults {
            catalog.default_values = d;
        }
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn values(&self, label: &str) -> Option<&[String]> {
        self.entries.get(&normalize(label)).map(Vec::as_slice)
    }

    pub fn default_values(&self) -> &[String] {
        &self.default_values
    }

    /// Warnings raised while loading (duplicate labels).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// A uniformly chosen value for `label`, or a default if the label is unknown.
    pub fn lookup<R: Rng + ?Sized>(&self, label: &str, rng: &mut R) -> &str {
        let pool = self.entries.get(&normalize(label)).unwrap_or(&self.default_values);
        &pool[rng.random_range(0..pool.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_match_and_fallback() {
        let c = Catalog::parse("email\tmariani@disco.unimib.it\ndate\t20-04-2019\n@default\tzz\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(c.lookup("email", &mut rng), "mariani@disco.unimib.it");
        assert_eq!(c.lookup("  Date ", &mut rng), "20-04-2019");
        assert_eq!(c.lookup("zzz-unknown", &mut rng), "zz");
    }

    #[test]
    fn normalize_idempotent() {
        for s in ["  Zip   Code ", "EMAIL", "a\tb"] {
            assert_eq!(normalize(&normalize(s)), normalize(s));
        }
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let err = Catalog::parse("# c\nname\tPaul\ncity\n").unwrap_err();
        assert_eq!(err, CatalogError::Parse { line: 3, field: 2, message: err_msg(&err) });
        let err = Catalog::parse("name\tPaul\t\tAnna\n").unwrap_err();
        assert!(matches!(err, CatalogError::Parse { line: 1, field: 3, .. }));
    }

    fn err_msg(e: &CatalogError) -> String {
        match e {
            CatalogError::Parse { message, .. } => message.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn duplicates_keep_last() {
        let c = Catalog::parse("City\tMilan\ncity\tRome\n").unwrap();
        assert_eq!(c.values("CITY").unwrap(), ["Rome".to_string()]);
        assert_eq!(c.warnings().len(), 1);
    }
}
