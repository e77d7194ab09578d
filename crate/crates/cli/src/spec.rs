//! Declarative state specifications.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use fermient::fock::{DensityMatrix, FockSpace, OccupationState, StateVector};
use fermient::linalg::CMatrix;
use fermient::{random, tolerance};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Basis ordering tag accepted in density files.
pub const ORDERING: &str = "descending_lex";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub occupations: Vec<u8>,
    /// `[re, im]`
    pub amplitude: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub weight: f64,
    pub state: StateSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Fock {
        occupations: Vec<u8>,
    },
    Superposition {
        terms: Vec<Term>,
    },
    /// `(|N;0⟩ + |0;N⟩)/√2` on `2m` modes.
    Noon {
        n: usize,
        m: usize,
    },
    Mixture {
        components: Vec<Component>,
    },
    MixedRandom {
        n: usize,
        modes: usize,
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<usize>,
    },
    MaximallyMixed {
        n: usize,
        modes: usize,
    },
    FromFile {
        path: PathBuf,
    },
}

/// Density matrix file: row-major `[re, im]` entries in the global basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub n: usize,
    pub modes: usize,
    pub ordering: String,
    pub data: Vec<Complex64>,
}

impl DensityFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let d = m.nrows();
        Self {
            n: rho.space().particles(),
            modes: rho.space().modes(),
            ordering: ORDERING.to_string(),
            data: (0..d * d).map(|i| m[(i / d, i % d)]).collect(),
        }
    }
}

/// Builds states, sharing one dimension cap and collecting warnings.
pub struct Builder {
    pub cap: usize,
    pub base_dir: PathBuf,
    pub warnings: Vec<String>,
}

impl Builder {
    pub fn new(cap: usize, base_dir: impl Into<PathBuf>) -> Self {
        Self {
            cap,
            base_dir: base_dir.into(),
            warnings: Vec::new(),
        }
    }

    fn space(&self, n: usize, modes: usize) -> Result<Arc<FockSpace>, CliError> {
        Ok(Arc::new(FockSpace::with_cap(n, modes, self.cap)?))
    }

    pub fn build(&mut self, spec: &StateSpec) -> Result<DensityMatrix, CliError> {
        match spec {
            StateSpec::Fock { occupations } => {
                let state = OccupationState::from_occupations(occupations)?;
                let space = self.space(state.particle_count(), state.modes())?;
                Ok(StateVector::fock(space, &state)?.to_density())
            }
            StateSpec::Superposition { terms } => {
                let first = terms
                    .first()
                    .ok_or_else(|| CliError::User("superposition has no terms".into()))?;
                let head = OccupationState::from_occupations(&first.occupations)?;
                let mut parsed = Vec::with_capacity(terms.len());
                for t in terms {
                    let s = OccupationState::from_occupations(&t.occupations)?;
                    if s.modes() != head.modes() || s.particle_count() != head.particle_count() {
                        return Err(CliError::User(format!(
                            "term {s:?} does not match N={}, M={} of the first term",
                            head.particle_count(),
                            head.modes()
                        )));
                    }
                    parsed.push((s, t.amplitude));
                }
                let space = self.space(head.particle_count(), head.modes())?;
                let psi = StateVector::from_terms(space, &parsed)?;
                let norm = psi.norm_sqr();
                if (norm - 1.0).abs() > tolerance::NORM {
                    self.warnings
                        .push(format!("amplitudes renormalized (squared norm was {norm})"));
                }
                Ok(psi.normalized()?.to_density())
            }
            StateSpec::Noon { n, m } => {
                if *n == 0 || n > m {
                    return Err(CliError::User(format!("noon state needs 1 ≤ N ≤ m, got N={n}, m={m}")));
                }
                let modes = 2 * m;
                let space = self.space(*n, modes)?;
                let left: Vec<usize> = (1..=*n).collect();
                let right: Vec<usize> = (m + 1..=m + n).collect();
                let one = Complex64::new(1.0, 0.0);
                let psi = StateVector::from_terms(
                    space,
                    &[
                        (OccupationState::from_modes(&left, modes)?, one),
                        (OccupationState::from_modes(&right, modes)?, one),
                    ],
                )?;
                Ok(psi.normalized()?.to_density())
            }
            StateSpec::Mixture { components } => {
                let mut parts = Vec::with_capacity(components.len());
                for c in components {
                    parts.push((c.weight, self.build(&c.state)?));
                }
                Ok(DensityMatrix::mixture(&parts)?)
            }
            StateSpec::MixedRandom {
                n,
                modes,
                seed,
                rank,
            } => {
                let space = self.space(*n, *modes)?;
                let rank = rank.unwrap_or(space.dim());
                Ok(random::density_matrix(&mut random::rng(*seed), &space, rank))
            }
            StateSpec::MaximallyMixed { n, modes } => {
                Ok(DensityMatrix::maximally_mixed(self.space(*n, *modes)?))
            }
            StateSpec::FromFile { path } => self.load(path),
        }
    }

    fn load(&self, path: &Path) -> Result<DensityMatrix, CliError> {
        let full = self.base_dir.join(path);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| CliError::User(format!("{}: {e}", full.display())))?;
        let file: DensityFile = serde_json::from_str(&text)
            .map_err(|e| CliError::User(format!("{}: {e}", full.display())))?;
        if file.ordering != ORDERING {
            return Err(CliError::User(format!(
                "unsupported basis ordering {:?}, expected {ORDERING:?}",
                file.ordering
            )));
        }
        let space = self.space(file.n, file.modes)?;
        let d = space.dim();
        if file.data.len() != d * d {
            return Err(CliError::User(format!(
                "density file has {} entries, expected {}",
                file.data.len(),
                d * d
            )));
        }
        let matrix = CMatrix::from_row_slice(d, d, &file.data);
        Ok(DensityMatrix::new(space, matrix)?)
    }
}
