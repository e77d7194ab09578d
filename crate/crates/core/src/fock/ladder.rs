use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;

use super::basis::OccupationState;
use crate::error::{FermiError, Result};

/// A single creation (`dagger = true`) or annihilation operator on a 1-based
/// mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }

    pub fn adjoint(self) -> Self {
        Self {
            dagger: !self.dagger,
            ..self
        }
    }

    /// Act on a basis vector. Returns the sign and image, or `None` for the
    /// zero vector. The sign is `(-1)^{n_1 + ... + n_{mode-1}}`, matching
    /// `|n⟩ = (a†_1)^{n_1} ... (a†_M)^{n_M} |0⟩`.
    #[inline]
    pub fn act(self, state: OccupationState) -> Option<(f64, OccupationState)> {
        let occupied = state.is_occupied(self.mode);
        if occupied == self.dagger {
            return None;
        }
        let sign = if state.count_before(self.mode).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        Some((sign, state.with_mode(self.mode, self.dagger)))
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "a†{}", self.mode)
        } else {
            write!(f, "a{}", self.mode)
        }
    }
}

/// Ordered product of ladder operators with a complex prefactor. No normal
/// ordering is applied: the rightmost factor acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderMonomial {
    pub factors: Vec<Ladder>,
    pub coefficient: Complex64,
}

impl LadderMonomial {
    pub fn identity() -> Self {
        Self::from_factors(Vec::new())
    }

    pub fn from_factors(factors: Vec<Ladder>) -> Self {
        Self {
            factors,
            coefficient: Complex64::new(1.0, 0.0),
        }
    }

    pub fn creator(mode: usize) -> Self {
        Self::from_factors(vec![Ladder::create(mode)])
    }

    pub fn annihilator(mode: usize) -> Self {
        Self::from_factors(vec![Ladder::annihilate(mode)])
    }

    /// `a†_i a_j`
    pub fn hop(i: usize, j: usize) -> Self {
        Self::from_factors(vec![Ladder::create(i), Ladder::annihilate(j)])
    }

    pub fn number(mode: usize) -> Self {
        Self::hop(mode, mode)
    }

    pub fn scaled(mut self, c: impl Into<Complex64>) -> Self {
        self.coefficient *= c.into();
        self
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// Creators minus annihilators.
    pub fn particle_shift(&self) -> i64 {
        self.factors
            .iter()
            .map(|l| if l.dagger { 1 } else { -1 })
            .sum()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(|l| l.adjoint()).collect(),
            coefficient: self.coefficient.conj(),
        }
    }

    pub fn check_modes(&self, modes: usize) -> Result<()> {
        match self.factors.iter().find(|l| l.mode == 0 || l.mode > modes) {
            Some(l) => Err(FermiError::ModeOutOfRange {
                mode: l.mode,
                modes,
            }),
            None => Ok(()),
        }
    }

    /// Act on a basis vector, ignoring the coefficient. Modes must already be
    /// validated.
    #[inline]
    pub fn act_unit(&self, state: OccupationState) -> Option<(f64, OccupationState)> {
        let mut sign = 1.0;
        let mut current = state;
        for l in self.factors.iter().rev() {
            let (s, next) = l.act(current)?;
            sign *= s;
            current = next;
        }
        Some((sign, current))
    }

    pub fn act(&self, state: OccupationState) -> Option<(Complex64, OccupationState)> {
        self.act_unit(state)
            .map(|(s, next)| (self.coefficient * s, next))
    }
}

impl fmt::Display for LadderMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != Complex64::new(1.0, 0.0) {
            write!(f, "({}) ", self.coefficient)?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Mul for LadderMonomial {
    type Output = LadderMonomial;

    fn mul(mut self, rhs: LadderMonomial) -> LadderMonomial {
        self.factors.extend(rhs.factors);
        self.coefficient *= rhs.coefficient;
        self
    }
}

impl Neg for LadderMonomial {
    type Output = LadderMonomial;

    fn neg(self) -> LadderMonomial {
        self.scaled(-1.0)
    }
}

/// Sum of ladder monomials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorExpr {
    pub terms: Vec<LadderMonomial>,
}

impl OperatorExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, term: LadderMonomial) {
        self.terms.push(term);
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(LadderMonomial::adjoint).collect(),
        }
    }

    /// `AB + BA`
    pub fn anticommutator(a: &OperatorExpr, b: &OperatorExpr) -> Self {
        a.clone() * b.clone() + b.clone() * a.clone()
    }

    /// `AB - BA`
    pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> Self {
        a.clone() * b.clone() + -(b.clone() * a.clone())
    }
}

impl From<LadderMonomial> for OperatorExpr {
    fn from(m: LadderMonomial) -> Self {
        Self { terms: vec![m] }
    }
}

impl FromIterator<LadderMonomial> for OperatorExpr {
    fn from_iter<I: IntoIterator<Item = LadderMonomial>>(iter: I) -> Self {
        Self {
            terms: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;

    fn add(mut self, rhs: OperatorExpr) -> OperatorExpr {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Add<LadderMonomial> for OperatorExpr {
    type Output = OperatorExpr;

    fn add(mut self, rhs: LadderMonomial) -> OperatorExpr {
        self.terms.push(rhs);
        self
    }
}

impl Add for LadderMonomial {
    type Output = OperatorExpr;

    fn add(self, rhs: LadderMonomial) -> OperatorExpr {
        OperatorExpr {
            terms: vec![self, rhs],
        }
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;

    fn neg(self) -> OperatorExpr {
        self.terms.into_iter().map(|t| -t).collect()
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        let mut out = OperatorExpr::new();
        for a in &self.terms {
            for b in &rhs.terms {
                out.push(a.clone() * b.clone());
            }
        }
        out
    }
}

impl Mul<Complex64> for OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, c: Complex64) -> OperatorExpr {
        self.terms.into_iter().map(|t| t.scaled(c)).collect()
    }
}
