//! NEC signatures and their area arithmetic.
//!
//! Areas are reduced areas (hyperbolic area divided by 2π) and are kept as
//! exact rationals throughout.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::Word;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("a non-orientable signature needs genus at least 1")]
    NonOrientableGenusZero,
    #[error("period {0} is smaller than 2")]
    PeriodTooSmall(u32),
    #[error("the quotient must be non-orientable: gamma = 0 is not a valid input")]
    GammaZero,
    #[error("signature {sig} is not hyperbolic (reduced area {area})")]
    NotHyperbolic { sig: String, area: Rational },
    #[error("no surface kernel of index {index} exists: 2g - 2 = {euler} is not an even integer")]
    NoSurfaceKernel { index: u64, euler: Rational },
    #[error("index must be a positive even integer, got {0}")]
    BadIndex(u64),
    #[error("generator {0} has no declared kind")]
    UndeclaredKind(String),
}

/// Combinatorial signature `(g; ±; [m_1, ..., m_r]; {C_1, ..., C_k})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NecSignature {
    pub orientable: bool,
    pub genus: u32,
    pub proper_periods: Vec<u32>,
    /// Period cycles; an empty inner list is a boundary component without corners.
    pub period_cycles: Vec<Vec<u32>>,
}

impl NecSignature {
    pub fn new(
        orientable: bool,
        genus: u32,
        proper_periods: Vec<u32>,
        period_cycles: Vec<Vec<u32>>,
    ) -> Result<Self, SignatureError> {
        if !orientable && genus == 0 {
            return Err(SignatureError::NonOrientableGenusZero);
        }
        for &p in proper_periods.iter().chain(period_cycles.iter().flatten()) {
            if p < 2 {
                return Err(SignatureError::PeriodTooSmall(p));
            }
        }
        Ok(NecSignature {
            orientable,
            genus,
            proper_periods,
            period_cycles,
        })
    }

    /// `(γ; −; [n_1, ..., n_r])` with no period cycles.
    pub fn non_orientable(genus: u32, periods: Vec<u32>) -> Result<Self, SignatureError> {
        Self::new(false, genus, periods, Vec::new())
    }

    pub fn reduced_area(&self) -> Rational {
        reduced_area(self)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.reduced_area().is_positive()
    }

    /// Equality of signatures as invariants: proper periods are a multiset,
    /// each period cycle is read up to rotation and reversal, and the cycles
    /// themselves form a multiset.
    pub fn same_type(&self, other: &NecSignature) -> bool {
        let sorted = |v: &[u32]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        let cycles = |s: &NecSignature| {
            let mut c: Vec<Vec<u32>> = s.period_cycles.iter().map(|c| canonical_cycle(c)).collect();
            c.sort();
            c
        };
        self.orientable == other.orientable
            && self.genus == other.genus
            && sorted(&self.proper_periods) == sorted(&other.proper_periods)
            && cycles(self) == cycles(other)
    }
}

/// Lexicographically least rotation of the cycle or of its reverse.
fn canonical_cycle(c: &[u32]) -> Vec<u32> {
    let mut reversed = c.to_vec();
    reversed.reverse();
    (0..c.len().max(1))
        .flat_map(|i| {
            let rot = |v: &[u32]| -> Vec<u32> {
                v.iter().cycle().skip(i).take(v.len()).copied().collect()
            };
            [rot(c), rot(&reversed)]
        })
        .min()
        .unwrap_or_default()
}

impl fmt::Display for NecSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.orientable { "+" } else { "\u{2212}" };
        write!(
            f,
            "({};{};[{}]",
            self.genus,
            sign,
            join(&self.proper_periods)
        )?;
        if !self.period_cycles.is_empty() {
            let cycles: Vec<String> = self
                .period_cycles
                .iter()
                .map(|c| format!("({})", join(c)))
                .collect();
            write!(f, ";{{{}}}", cycles.join(","))?;
        }
        write!(f, ")")
    }
}

fn join(v: &[u32]) -> String {
    v.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn one_minus_inverse(m: u32) -> Rational {
    Rational::one() - Rational::new(1, m as i64)
}

/// `α·g + k − 2 + Σ(1 − 1/m_i) + ½·Σ_cycles Σ_j (1 − 1/n_j)` with α = 2 for
/// orientable signatures and 1 otherwise.
pub fn reduced_area(sig: &NecSignature) -> Rational {
    let alpha = if sig.orientable { 2 } else { 1 };
    let mut area =
        Rational::from_integer(alpha * sig.genus as i64 + sig.period_cycles.len() as i64 - 2);
    for &m in &sig.proper_periods {
        area += one_minus_inverse(m);
    }
    let half = Rational::new(1, 2);
    for cycle in &sig.period_cycles {
        for &n in cycle {
            area += half * one_minus_inverse(n);
        }
    }
    area
}

/// Signature of the group uniformizing the closed disc with `gamma` interior
/// order-2 cone points and the given corner periods on the boundary:
/// `(0; +; [2, ..., 2]; {(n_1, ..., n_r)})`.
pub fn quotient_disc_signature(
    gamma: u32,
    periods: &[u32],
) -> Result<NecSignature, SignatureError> {
    if gamma == 0 {
        return Err(SignatureError::GammaZero);
    }
    NecSignature::new(true, 0, vec![2; gamma as usize], vec![periods.to_vec()])
}

/// Genus of a closed surface uniformized by a torsion-free Fuchsian subgroup of
/// the given index, via `2g − 2 = index · area`.
pub fn surface_kernel_genus(sig: &NecSignature, index: u64) -> Result<u32, SignatureError> {
    if index == 0 || !index.is_multiple_of(2) {
        return Err(SignatureError::BadIndex(index));
    }
    let area = sig.reduced_area();
    if !area.is_positive() {
        return Err(SignatureError::NotHyperbolic {
            sig: sig.to_string(),
            area,
        });
    }
    let euler = area * Rational::from_integer(index as i64);
    if !euler.is_integer() || euler.to_integer() % 2 != 0 {
        return Err(SignatureError::NoSurfaceKernel { index, euler });
    }
    Ok((euler.to_integer() / 2 + 1) as u32)
}

/// Index predicted by Riemann–Hurwitz: `area(sub) / area(super)`.
pub fn riemann_hurwitz_index(
    sub: &NecSignature,
    sup: &NecSignature,
) -> Result<Rational, SignatureError> {
    for sig in [sub, sup] {
        let area = sig.reduced_area();
        if !area.is_positive() {
            return Err(SignatureError::NotHyperbolic {
                sig: sig.to_string(),
                area,
            });
        }
    }
    Ok(sub.reduced_area() / sup.reduced_area())
}

/// Geometric type of a canonical generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Elliptic(u32),
    Reflection,
    Glide,
    /// Orientation-preserving generator with no declared finite order
    /// (hyperbolic connectors, and orientation-preserving Schreier generators).
    Connector,
    Undeclared,
}

impl GeneratorKind {
    pub fn orientation_sign(self) -> Option<i8> {
        match self {
            GeneratorKind::Glide | GeneratorKind::Reflection => Some(-1),
            GeneratorKind::Elliptic(_) | GeneratorKind::Connector => Some(1),
            GeneratorKind::Undeclared => None,
        }
    }

    /// Reflections and order-two elliptics satisfy `g² = 1`.
    pub fn is_involution(self) -> bool {
        matches!(self, GeneratorKind::Reflection | GeneratorKind::Elliptic(2))
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Elliptic(m) => write!(f, "elliptic({m})"),
            GeneratorKind::Reflection => write!(f, "reflection"),
            GeneratorKind::Glide => write!(f, "glide"),
            GeneratorKind::Connector => write!(f, "connector"),
            GeneratorKind::Undeclared => write!(f, "undeclared"),
        }
    }
}

/// Orientation character on the generators: reflections and glides go to −1.
pub fn orientation_character(p: &Presentation) -> Result<Vec<i8>, SignatureError> {
    p.generators()
        .iter()
        .map(|g| {
            g.kind
                .orientation_sign()
                .ok_or_else(|| SignatureError::UndeclaredKind(g.name.clone()))
        })
        .collect()
}

/// The orientation character extended multiplicatively to a word.
pub fn word_orientation(p: &Presentation, w: &Word) -> Result<i8, SignatureError> {
    let chi = orientation_character(p)?;
    Ok(w.letters().iter().map(|l| chi[l.gen]).product())
}
