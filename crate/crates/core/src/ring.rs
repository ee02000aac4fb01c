//! The ambient polynomial ring in split coordinates (z; w).
//!
//! Variables are ordered z_1, …, z_n, w_1, …, w_κ; the base coordinates z
//! parametrize the smooth reduction Z = {w = 0} and the conormal
//! coordinates w cut it out.

use std::fmt;
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    zvars: Vec<String>,
    wvars: Vec<String>,
}

/// Ambient ring ℚ[z_1..z_n, w_1..w_κ]. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring(Arc<RingData>);

impl Ring {
    pub fn new(zvars: &[&str], wvars: &[&str]) -> Result<Self, RingError> {
        let zvars: Vec<String> = zvars.iter().map(|s| s.to_string()).collect();
        let wvars: Vec<String> = wvars.iter().map(|s| s.to_string()).collect();
        if zvars.len() + wvars.len() == 0 {
            return Err(RingError::NoVariables);
        }
        let mut seen = std::collections::HashSet::new();
        for v in zvars.iter().chain(wvars.iter()) {
            if !seen.insert(v.clone()) {
                return Err(RingError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Ring(Arc::new(RingData { zvars, wvars })))
    }

    /// Number of base variables n.
    pub fn nz(&self) -> usize {
        self.0.zvars.len()
    }

    /// Number of conormal variables κ.
    pub fn nw(&self) -> usize {
        self.0.wvars.len()
    }

    /// Total number of variables N = n + κ.
    pub fn nvars(&self) -> usize {
        self.nz() + self.nw()
    }

    pub fn var_name(&self, i: usize) -> &str {
        if i < self.nz() {
            &self.0.zvars[i]
        } else {
            &self.0.wvars[i - self.nz()]
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0
            .zvars
            .iter()
            .chain(self.0.wvars.iter())
            .position(|v| v == name)
    }

    /// Index of w_k (0-based k) in the full variable list.
    pub fn w_index(&self, k: usize) -> usize {
        self.nz() + k
    }

    pub fn is_wvar(&self, i: usize) -> bool {
        i >= self.nz()
    }

    pub fn zvar_names(&self) -> &[String] {
        &self.0.zvars
    }

    pub fn wvar_names(&self) -> &[String] {
        &self.0.wvars
    }

    /// The base ring ℚ[z] of the reduction Z, as a ring with no w-variables.
    pub fn z_subring(&self) -> Ring {
        Ring(Arc::new(RingData {
            zvars: self.0.zvars.clone(),
            wvars: Vec::new(),
        }))
    }

    /// Extension by auxiliary variables placed *before* all present ones,
    /// used with block elimination orders.
    pub fn extend_front(&self, aux: &[&str]) -> Ring {
        let mut zvars: Vec<String> = aux.iter().map(|s| s.to_string()).collect();
        zvars.extend(self.0.zvars.iter().cloned());
        Ring(Arc::new(RingData {
            zvars,
            wvars: self.0.wvars.clone(),
        }))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q[{}; {}]",
            self.0.zvars.join(","),
            self.0.wvars.join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    NoVariables,
    DuplicateVariable(String),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::NoVariables => write!(f, "ring must have at least one variable"),
            RingError::DuplicateVariable(v) => write!(f, "duplicate variable name `{v}`"),
        }
    }
}

impl std::error::Error for RingError {}
