//! Problem-file parsing and rendering.
//!
//! Grammar (one declaration per line, `#` comments):
//!
//! ```text
//! ring z1 z2 ; nil w1 w2
//! ideal: w1^2, w2^2, w1*w2
//! option p = 0
//! option seed = 0
//! ```

use nilform::ideal::Ideal;
use nilform::parse::parse_poly;
use nilform::{Poly, Rat, Ring};
use std::fmt;

#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub zvars: Vec<String>,
    pub wvars: Vec<String>,
    pub generators: Vec<String>,
    pub p: Vec<usize>,
    pub m_override: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub format: OutputFormat,
    pub max_len: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Machine,
}

impl ProblemSpec {
    pub fn ring(&self) -> Result<Ring, Diagnostic> {
        let z: Vec<&str> = self.zvars.iter().map(|s| s.as_str()).collect();
        let w: Vec<&str> = self.wvars.iter().map(|s| s.as_str()).collect();
        Ring::new(&z, &w).map_err(|e| Diagnostic {
            line: 1,
            col: 1,
            message: e.to_string(),
        })
    }

    pub fn ideal(&self) -> Result<Ideal<Rat>, Diagnostic> {
        let ring = self.ring()?;
        let mut gens: Vec<Poly> = Vec::new();
        for g in &self.generators {
            let p = parse_poly::<Rat>(&ring, g).map_err(|e| Diagnostic {
                line: 0,
                col: e.pos + 1,
                message: format!("in generator `{g}`: {}", e.message),
            })?;
            gens.push(p);
        }
        Ok(Ideal::new(&ring, gens))
    }

    /// Canonical rendering; `parse_problem(render(spec))` reproduces the
    /// spec exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "ring {} ; nil {}\n",
            self.zvars.join(" "),
            self.wvars.join(" ")
        ));
        out.push_str(&format!("ideal: {}\n", self.generators.join(", ")));
        let ps: Vec<String> = self.p.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("option p = {}\n", ps.join(",")));
        if let Some(m) = self.m_override {
            out.push_str(&format!("option m = {m}\n"));
        }
        out.push_str(&format!("option seed = {}\n", self.seed));
        out.push_str(&format!("option trials = {}\n", self.trials));
        if let Some(l) = self.max_len {
            out.push_str(&format!("option max-len = {l}\n"));
        }
        out.push_str(&format!(
            "option format = {}\n",
            match self.format {
                OutputFormat::Human => "human",
                OutputFormat::Machine => "machine",
            }
        ));
        out
    }
}

impl Default for ProblemSpec {
    fn default() -> Self {
        ProblemSpec {
            zvars: vec![],
            wvars: vec![],
            generators: vec![],
            p: vec![0],
            m_override: None,
            seed: 0,
            trials: 100,
            format: OutputFormat::Human,
            max_len: None,
        }
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, Diagnostic> {
    let mut spec = ProblemSpec::default();
    let mut saw_ring = false;
    let mut saw_ideal = false;
    for (li, raw) in text.lines().enumerate() {
        let line_no = li + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("ring") {
            let col = raw.find("ring").unwrap_or(0) + 1;
            let (zpart, wpart) = match rest.split_once(';') {
                Some((z, w)) => (z, w),
                None => {
                    return Err(Diagnostic {
                        line: line_no,
                        col,
                        message: "ring declaration needs `; nil w...`".into(),
                    })
                }
            };
            let wpart = wpart.trim();
            let wpart = wpart.strip_prefix("nil").ok_or(Diagnostic {
                line: line_no,
                col,
                message: "conormal block must start with `nil`".into(),
            })?;
            spec.zvars = zpart.split_whitespace().map(|s| s.to_string()).collect();
            spec.wvars = wpart.split_whitespace().map(|s| s.to_string()).collect();
            for v in spec.zvars.iter().chain(&spec.wvars) {
                if !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    || !v.chars().next().map(|c| c.is_ascii_alphabetic()).unwrap_or(false)
                {
                    return Err(Diagnostic {
                        line: line_no,
                        col,
                        message: format!("malformed variable name `{v}`"),
                    });
                }
            }
            saw_ring = true;
        } else if let Some(rest) = trimmed.strip_prefix("ideal:") {
            if !saw_ring {
                return Err(Diagnostic {
                    line: line_no,
                    col: 1,
                    message: "ring declaration required before the ideal".into(),
                });
            }
            spec.generators = rest
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if spec.generators.is_empty() {
                return Err(Diagnostic {
                    line: line_no,
                    col: 1,
                    message: "empty ideal".into(),
                });
            }
            // validate each generator in the declared ring, reporting the
            // offending position
            let ring = spec.ring().map_err(|mut d| {
                d.line = line_no;
                d
            })?;
            for g in &spec.generators {
                if let Err(e) = parse_poly::<Rat>(&ring, g) {
                    let col = raw.find(g.as_str()).map(|c| c + e.pos + 1).unwrap_or(1);
                    return Err(Diagnostic {
                        line: line_no,
                        col,
                        message: e.message,
                    });
                }
            }
            saw_ideal = true;
        } else if let Some(rest) = trimmed.strip_prefix("option") {
            let (key, value) = rest.split_once('=').ok_or(Diagnostic {
                line: line_no,
                col: 1,
                message: "option must be `option key = value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |message: String| Diagnostic {
                line: line_no,
                col: 1,
                message,
            };
            match key {
                "p" => {
                    let mut ps = Vec::new();
                    for part in value.split(',') {
                        ps.push(
                            part.trim()
                                .parse::<usize>()
                                .map_err(|_| bad(format!("malformed p value `{part}`")))?,
                        );
                    }
                    spec.p = ps;
                }
                "m" => {
                    spec.m_override = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("malformed m value `{value}`")))?,
                    )
                }
                "seed" => {
                    spec.seed = value
                        .parse()
                        .map_err(|_| bad(format!("malformed seed `{value}`")))?
                }
                "trials" => {
                    spec.trials = value
                        .parse()
                        .map_err(|_| bad(format!("malformed trials `{value}`")))?
                }
                "max-len" => {
                    spec.max_len = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("malformed max-len `{value}`")))?,
                    )
                }
                "format" => {
                    spec.format = match value {
                        "human" => OutputFormat::Human,
                        "machine" => OutputFormat::Machine,
                        other => return Err(bad(format!("unknown format `{other}`"))),
                    }
                }
                other => return Err(bad(format!("unknown option `{other}`"))),
            }
        } else {
            return Err(Diagnostic {
                line: line_no,
                col: 1,
                message: format!("unrecognized declaration `{trimmed}`"),
            });
        }
    }
    if !saw_ring {
        return Err(Diagnostic {
            line: 1,
            col: 1,
            message: "ring declaration required".into(),
        });
    }
    if !saw_ideal {
        return Err(Diagnostic {
            line: 1,
            col: 1,
            message: "ideal declaration required".into(),
        });
    }
    Ok(spec)
}
