use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Startup settings, read from a TOML file and then overridden by
/// `TASHIH_*` environment variables.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub listen: String,
    pub store_path: PathBuf,
    /// Bearer token for exam creation, policy edits and the review queue.
    pub instructor_token: String,
    /// Bearer token allowed to open student sessions.
    pub student_token: String,
    pub session_ttl_secs: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen: "127.0.0.1:8080".into(),
            store_path: PathBuf::from("tashih-data"),
            instructor_token: String::new(),
            student_token: String::new(),
            session_ttl_secs: 4 * 60 * 60,
        }
    }
}

impl ServiceConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source: Box::new(source),
        })
    }

    /// Reads `path` if given, applies environment overrides and validates.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        config.apply_overrides(|key| std::env::var(key).ok())?;
        config.validate()?;
        Ok(config)
    }

    pub fn apply_overrides(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(v) = var("TASHIH_LISTEN") {
            self.listen = v;
        }
        if let Some(v) = var("TASHIH_STORE_PATH") {
            self.store_path = v.into();
        }
        if let Some(v) = var("TASHIH_INSTRUCTOR_TOKEN") {
            self.instructor_token = v;
        }
        if let Some(v) = var("TASHIH_STUDENT_TOKEN") {
            self.student_token = v;
        }
        if let Some(v) = var("TASHIH_SESSION_TTL_SECS") {
            self.session_ttl_secs = v
                .parse()
                .map_err(|_| ConfigError::Invalid(format!("TASHIH_SESSION_TTL_SECS: `{v}` is not a number")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.instructor_token.is_empty() || self.student_token.is_empty() {
            return Err(ConfigError::Invalid(
                "instructor_token and student_token must both be set".into(),
            ));
        }
        if self.instructor_token == self.student_token {
            return Err(ConfigError::Invalid(
                "instructor_token and student_token must differ".into(),
            ));
        }
        if self.session_ttl_secs == 0 {
            return Err(ConfigError::Invalid("session_ttl_secs must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tashih.toml");
        std::fs::write(
            &path,
            "\u{feff}listen = \"0.0.0.0:9000\"\ninstructor_token = \"i\"\nstudent_token = \"s\"\n",
        )
        .unwrap();
        let mut c = ServiceConfig::from_file(&path).unwrap();
        assert_eq!(c.listen, "0.0.0.0:9000");
        assert_eq!(c.session_ttl_secs, 14_400);
        c.apply_overrides(|k| (k == "TASHIH_LISTEN").then(|| "127.0.0.1:1".to_string()))
            .unwrap();
        assert_eq!(c.listen, "127.0.0.1:1");
        c.validate().unwrap();
    }

    #[test]
    fn tokens_required_and_distinct() {
        assert!(ServiceConfig::default().validate().is_err());
        let same = ServiceConfig {
            instructor_token: "x".into(),
            student_token: "x".into(),
            ..ServiceConfig::default()
        };
        assert!(same.validate().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "lisen = \"x\"\n").unwrap();
        assert!(matches!(ServiceConfig::from_file(&path), Err(ConfigError::Parse { .. })));
    }
}
