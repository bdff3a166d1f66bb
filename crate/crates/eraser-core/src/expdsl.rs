//! The `.exp` experiment-description format.
//!
//! Line-oriented, case-sensitive, `#` starts a comment line:
//!
//! ```text
//! # full eraser at 64 bins
//! layout eraser
//! bins 64
//! cycles 2
//! phi0 0
//! merge_paths false
//! seed 42
//! trials 100000
//! ```
//!
//! Every key is optional; omitted keys take the defaults above (seed and
//! trials default to absent). Unknown and duplicate keys are rejected, and
//! every rejection carries the 1-based line and column (in characters) of
//! the offending token. [`emit`] produces the canonical text form, and
//! `parse(emit(c)) == c` for every valid config.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Which beam-splitter topology photon I meets.
///
/// `Eraser` is the full random-choice layout. `Mirrors` replaces the first
/// splitters by mirrors, so every photon takes the interferometer arm
/// (wave-like option). `Removed` deletes them, so every photon flies
/// straight to a which-path detector (particle-like option).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Eraser,
    Mirrors,
    Removed,
}

impl Layout {
    pub fn as_str(&self) -> &'static str {
        match self {
            Layout::Eraser => "eraser",
            Layout::Mirrors => "mirrors",
            Layout::Removed => "removed",
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parsed experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub layout: Layout,
    pub bins: usize,
    pub cycles: f64,
    pub phi0: f64,
    pub merge_paths: bool,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            layout: Layout::Eraser,
            bins: 64,
            cycles: 2.0,
            phi0: 0.0,
            merge_paths: false,
            seed: None,
            trials: None,
        }
    }
}

/// Largest accepted `bins` value; keeps downstream dense states at a sane
/// size.
pub const MAX_BINS: usize = 65_536;

/// Why a config was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    InvalidUtf8,
    UnknownKey(String),
    MissingValue(String),
    TrailingToken(String),
    InvalidInteger(String),
    InvalidNumber(String),
    InvalidValue { key: String, value: String },
    DuplicateKey(String),
    Semantic { key: String, reason: &'static str },
}

/// A rejection with the 1-based line and character column of the first
/// offending token.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::InvalidUtf8 => write!(f, "input is not valid UTF-8"),
            ParseErrorKind::UnknownKey(k) => write!(f, "unknown key `{k}`"),
            ParseErrorKind::MissingValue(k) => write!(f, "key `{k}` has no value"),
            ParseErrorKind::TrailingToken(t) => write!(f, "unexpected trailing token `{t}`"),
            ParseErrorKind::InvalidInteger(k) => write!(f, "key `{k}` expects an integer"),
            ParseErrorKind::InvalidNumber(k) => write!(f, "key `{k}` expects a number"),
            ParseErrorKind::InvalidValue { key, value } => {
                write!(f, "invalid value `{value}` for key `{key}`")
            }
            ParseErrorKind::DuplicateKey(k) => write!(f, "duplicate key `{k}`"),
            ParseErrorKind::Semantic { key, reason } => write!(f, "key `{key}`: {reason}"),
        }
    }
}

impl core::error::Error for ParseError {}

/// Parse raw bytes: UTF-8 is validated first, then the text grammar.
pub fn parse_bytes(bytes: &[u8]) -> Result<ExperimentConfig, ParseError> {
    match core::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let prefix = core::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
            let line = prefix.chars().filter(|&c| c == '\n').count() + 1;
            let column = prefix
                .rsplit('\n')
                .next()
                .map(|tail| tail.chars().count())
                .unwrap_or(0)
                + 1;
            Err(ParseError {
                line,
                column,
                kind: ParseErrorKind::InvalidUtf8,
            })
        }
    }
}

/// Parse UTF-8 text into a config, applying defaults for omitted keys.
pub fn parse(text: &str) -> Result<ExperimentConfig, ParseError> {
    let mut config = ExperimentConfig::default();
    let mut seen: Vec<&str> = Vec::new();

    for (line_idx, raw_line) in text.split('\n').enumerate() {
        let line_no = line_idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);

        // Tokenize by character so error columns count characters, not bytes.
        let chars: Vec<char> = line.chars().collect();
        let mut at = 0usize;
        while at < chars.len() && chars[at].is_whitespace() {
            at += 1;
        }
        if at == chars.len() || chars[at] == '#' {
            continue;
        }

        let key_col = at + 1;
        let key_start = at;
        while at < chars.len() && !chars[at].is_whitespace() {
            at += 1;
        }
        let key: String = chars[key_start..at].iter().collect();

        while at < chars.len() && chars[at].is_whitespace() {
            at += 1;
        }
        let value_col = at + 1;
        let value_start = at;
        while at < chars.len() && !chars[at].is_whitespace() {
            at += 1;
        }
        let value: String = chars[value_start..at].iter().collect();

        // Anything after the value other than whitespace is an error.
        while at < chars.len() && chars[at].is_whitespace() {
            at += 1;
        }
        if at < chars.len() {
            let extra_col = at + 1;
            let extra: String = chars[at..]
                .iter()
                .take_while(|c| !c.is_whitespace())
                .collect();
            return Err(ParseError {
                line: line_no,
                column: extra_col,
                kind: ParseErrorKind::TrailingToken(extra),
            });
        }

        let known = [
            "layout",
            "bins",
            "cycles",
            "phi0",
            "merge_paths",
            "seed",
            "trials",
        ];
        let Some(&key_str) = known.iter().find(|&&k| k == key) else {
            return Err(ParseError {
                line: line_no,
                column: key_col,
                kind: ParseErrorKind::UnknownKey(key),
            });
        };
        if value.is_empty() {
            return Err(ParseError {
                line: line_no,
                column: value_col,
                kind: ParseErrorKind::MissingValue(key),
            });
        }
        if seen.contains(&key_str) {
            return Err(ParseError {
                line: line_no,
                column: key_col,
                kind: ParseErrorKind::DuplicateKey(key),
            });
        }
        seen.push(key_str);

        let semantic = |reason: &'static str| ParseError {
            line: line_no,
            column: value_col,
            kind: ParseErrorKind::Semantic {
                key: key_str.to_string(),
                reason,
            },
        };
        let int_value = || -> Result<u64, ParseError> {
            value.parse::<u64>().map_err(|_| ParseError {
                line: line_no,
                column: value_col,
                kind: ParseErrorKind::InvalidInteger(key_str.to_string()),
            })
        };
        let num_value = || -> Result<f64, ParseError> {
            value.parse::<f64>().map_err(|_| ParseError {
                line: line_no,
                column: value_col,
                kind: ParseErrorKind::InvalidNumber(key_str.to_string()),
            })
        };

        match key_str {
            "layout" => {
                config.layout = match value.as_str() {
                    "eraser" => Layout::Eraser,
                    "mirrors" => Layout::Mirrors,
                    "removed" => Layout::Removed,
                    _ => {
                        return Err(ParseError {
                            line: line_no,
                            column: value_col,
                            kind: ParseErrorKind::InvalidValue { key, value },
                        })
                    }
                };
            }
            "bins" => {
                let bins = int_value()?;
                if bins == 0 {
                    return Err(semantic("must be at least 1"));
                }
                if bins > MAX_BINS as u64 {
                    return Err(semantic("exceeds the maximum bin count"));
                }
                config.bins = bins as usize;
            }
            "cycles" => {
                let cycles = num_value()?;
                if !cycles.is_finite() {
                    return Err(semantic("must be finite"));
                }
                if cycles < 0.0 {
                    return Err(semantic("must be nonnegative"));
                }
                config.cycles = cycles;
            }
            "phi0" => {
                let phi0 = num_value()?;
                if !phi0.is_finite() {
                    return Err(semantic("must be finite"));
                }
                config.phi0 = phi0;
            }
            "merge_paths" => {
                config.merge_paths = match value.as_str() {
                    "true" => true,
                    "false" => false,
                    _ => {
                        return Err(ParseError {
                            line: line_no,
                            column: value_col,
                            kind: ParseErrorKind::InvalidValue { key, value },
                        })
                    }
                };
            }
            "seed" => config.seed = Some(int_value()?),
            "trials" => {
                let trials = int_value()?;
                if trials == 0 {
                    return Err(semantic("must be at least 1"));
                }
                config.trials = Some(trials);
            }
            _ => unreachable!("key filtered above"),
        }
    }

    Ok(config)
}

/// Canonical text form. Deterministic: equal configs emit byte-equal text,
/// and `parse(emit(c)) == c`.
pub fn emit(config: &ExperimentConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("layout {}\n", config.layout));
    out.push_str(&format!("bins {}\n", config.bins));
    out.push_str(&format!("cycles {}\n", config.cycles));
    out.push_str(&format!("phi0 {}\n", config.phi0));
    out.push_str(&format!("merge_paths {}\n", config.merge_paths));
    if let Some(seed) = config.seed {
        out.push_str(&format!("seed {seed}\n"));
    }
    if let Some(trials) = config.trials {
        out.push_str(&format!("trials {trials}\n"));
    }
    out
}
