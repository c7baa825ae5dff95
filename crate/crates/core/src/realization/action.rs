use std::ops::ControlFlow;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite::{FiniteHom, GroupElement};
use crate::kernel::surface_kernel_check;
use crate::presentation::{canonical_presentation, Presentation};
use crate::signature::{surface_kernel_genus, NecSignature, Rational};

/// Images of the canonical generators `d_1..d_γ`, `x_1..x_r` in `Z/2n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RhoImages {
    pub d: Vec<u32>,
    pub x: Vec<u32>,
}

impl RhoImages {
    pub fn residues(&self) -> Vec<i64> {
        self.d.iter().chain(&self.x).map(|&v| v as i64).collect()
    }

    /// Image under the automorphism `k ↦ unit·k` of `Z/m`.
    pub fn scaled(&self, unit: u32, m: u32) -> RhoImages {
        let f = |v: &u32| ((*v as u64 * unit as u64) % m as u64) as u32;
        RhoImages {
            d: self.d.iter().map(f).collect(),
            x: self.x.iter().map(f).collect(),
        }
    }
}

/// An anticonformal automorphism of order `2n` given by its quotient data:
/// the quotient is a connected sum of `gamma` projective planes with cone
/// points of the given orders, and `rho` is the monodromy onto `C_2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDatum {
    pub gamma: u32,
    pub periods: Vec<u32>,
    pub n: u32,
    pub rho: RhoImages,
}

impl ActionDatum {
    pub fn order(&self) -> u32 {
        2 * self.n
    }

    pub fn delta_signature(&self) -> Option<NecSignature> {
        NecSignature::non_orientable(self.gamma, self.periods.clone()).ok()
    }

    pub fn rho_hom(&self) -> FiniteHom {
        FiniteHom::cyclic(self.order(), &self.rho.residues())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum ValidationIssue {
    #[error("gamma must be at least 1 (the quotient is a non-orientable surface)")]
    GammaZero,
    #[error("n = {n} is too small: the automorphism has order 2n with n >= 2")]
    OrderTooSmall { n: u32 },
    #[error("n = {n} is odd: the automorphism has order 2n with n even")]
    OddOrder { n: u32 },
    #[error("period {period} (position {position}) must lie in 2..={n}")]
    PeriodOutOfRange {
        position: usize,
        period: u32,
        n: u32,
    },
    #[error("period {period} (position {position}) does not divide n = {n}")]
    PeriodNotDivisor {
        position: usize,
        period: u32,
        n: u32,
    },
    #[error("signature {signature} has non-positive reduced area {area}")]
    NotHyperbolic { signature: String, area: String },
    #[error("rho.{field} has {found} entries, expected {expected}")]
    RhoLength {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("rho.d[{position}] = {image} is even: glide reflections must map to odd residues")]
    OrientationMismatch { position: usize, image: u32 },
    #[error("rho.x[{position}] = {image} has order {image_order}, expected period {period}")]
    TorsionCollapse {
        position: usize,
        image: u32,
        image_order: u32,
        period: u32,
    },
    #[error("long relator x1...xr d1^2...dg^2 maps to {value}, not 0 mod {modulus}")]
    LongRelator { value: u32, modulus: u32 },
    #[error("rho is not surjective: its image has order {image_order} < {modulus}")]
    NotSurjective { image_order: u64, modulus: u32 },
    #[error("genus is not an integer: {reason}")]
    NonIntegralGenus { reason: String },
    #[error("no surface-kernel epimorphism onto C{modulus} exists for this signature")]
    NoSmoothEpimorphism { modulus: u32 },
}

/// Checks every requirement on the action data and returns the genus
/// `g = n · area(Δ) + 1` of the surface.
pub fn validate_action(d: &ActionDatum) -> Result<u32, Vec<ValidationIssue>> {
    let mut issues = structural_issues(d);
    if !issues.is_empty() {
        return Err(issues);
    }
    let sig = d.delta_signature().expect("structure checked");
    let m = d.order();
    let delta = canonical_presentation(&sig).expect("non-orientable family");

    let report = surface_kernel_check(&delta, &d.rho_hom(), &sig);
    for (j, &img) in d.rho.d.iter().enumerate() {
        if img % 2 == 0 {
            issues.push(ValidationIssue::OrientationMismatch {
                position: j,
                image: img,
            });
        }
    }
    for (i, t) in report.torsion.iter().enumerate() {
        if !t.ok {
            issues.push(ValidationIssue::TorsionCollapse {
                position: i,
                image: d.rho.x[i] % m,
                image_order: t.image_order,
                period: t.declared_order,
            });
        }
    }
    if !report.relators_ok {
        let long = delta.relators().last().expect("long relator");
        let value = match d.rho_hom().evaluate(long) {
            GroupElement::Cyclic(c) => c.k,
            _ => unreachable!("cyclic target"),
        };
        issues.push(ValidationIssue::LongRelator { value, modulus: m });
    }
    if !report.surjective {
        issues.push(ValidationIssue::NotSurjective {
            image_order: report.kernel_index,
            modulus: m,
        });
    }
    // x_i of order n_i | n has an even image, so odd d_j is all the character needs
    debug_assert!(report.fuchsian || !issues.is_empty());
    if !issues.is_empty() {
        if first_smooth_epimorphism(d.gamma, &d.periods, m).is_none() {
            issues.push(ValidationIssue::NoSmoothEpimorphism { modulus: m });
        }
        return Err(issues);
    }
    surface_kernel_genus(&sig, m as u64).map_err(|e| {
        vec![ValidationIssue::NonIntegralGenus {
            reason: e.to_string(),
        }]
    })
}

/// Checks that do not involve `rho` beyond its lengths.
pub fn structural_issues(d: &ActionDatum) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    if d.gamma == 0 {
        issues.push(ValidationIssue::GammaZero);
    }
    if d.n < 2 {
        issues.push(ValidationIssue::OrderTooSmall { n: d.n });
    } else if !d.n.is_multiple_of(2) {
        issues.push(ValidationIssue::OddOrder { n: d.n });
    }
    for (position, &period) in d.periods.iter().enumerate() {
        if period < 2 || period > d.n {
            issues.push(ValidationIssue::PeriodOutOfRange {
                position,
                period,
                n: d.n,
            });
        } else if !d.n.is_multiple_of(period) {
            issues.push(ValidationIssue::PeriodNotDivisor {
                position,
                period,
                n: d.n,
            });
        }
    }
    if d.rho.d.len() != d.gamma as usize {
        issues.push(ValidationIssue::RhoLength {
            field: "d".into(),
            expected: d.gamma as usize,
            found: d.rho.d.len(),
        });
    }
    if d.rho.x.len() != d.periods.len() {
        issues.push(ValidationIssue::RhoLength {
            field: "x".into(),
            expected: d.periods.len(),
            found: d.rho.x.len(),
        });
    }
    if d.gamma >= 1 && d.periods.iter().all(|&p| p >= 2) {
        let sig = NecSignature::non_orientable(d.gamma, d.periods.clone()).expect("valid periods");
        let area = sig.reduced_area();
        if area <= Rational::from_integer(0) {
            issues.push(ValidationIssue::NotHyperbolic {
                signature: sig.to_string(),
                area: area.to_string(),
            });
        }
    }
    issues
}

/// Visits, in lexicographic order of `(d_1..d_γ, x_1..x_r)`, every tuple
/// with odd `d_j`, `x_i` of exact order `n_i`, `x_1⋯x_r d_1²⋯d_γ² = 0` and
/// full image in `Z/order`.
///
/// The last coordinate is solved from the long relator instead of searched.
pub fn for_each_smooth_epimorphism<F>(gamma: u32, periods: &[u32], order: u32, mut visit: F)
where
    F: FnMut(&RhoImages) -> ControlFlow<()>,
{
    let gamma = gamma as usize;
    let r = periods.len();
    if order == 0 || !order.is_multiple_of(2) || gamma + r == 0 {
        return;
    }
    let m = order as i64;
    let odd: Vec<i64> = (1..m).step_by(2).collect();
    let of_order: Vec<Vec<i64>> = periods
        .iter()
        .map(|&p| (0..m).filter(|&k| m / k.gcd(&m) == p as i64).collect())
        .collect();
    let choices = |pos: usize| -> &[i64] {
        if pos < gamma {
            &odd
        } else {
            &of_order[pos - gamma]
        }
    };
    let total = gamma + r;
    let mut tuple = vec![0i64; total];

    // Iterative odometer over the free coordinates 0..total-1.
    let free = total - 1;
    let mut idx = vec![0usize; free];
    if (0..free).any(|p| choices(p).is_empty()) {
        return;
    }
    loop {
        for p in 0..free {
            tuple[p] = choices(p)[idx[p]];
        }
        let partial: i64 = (0..free)
            .map(|p| if p < gamma { 2 * tuple[p] } else { tuple[p] })
            .sum();
        let last_candidates: Vec<i64> = if r > 0 {
            let v = (-partial).rem_euclid(m);
            if m / v.gcd(&m) == periods[r - 1] as i64 {
                vec![v]
            } else {
                vec![]
            }
        } else {
            // 2·d ≡ −partial (mod m); partial is even here
            let n = m / 2;
            let base = (-partial / 2).rem_euclid(n);
            [base, base + n]
                .into_iter()
                .filter(|v| v % 2 == 1)
                .collect()
        };
        for v in last_candidates {
            tuple[total - 1] = v;
            let g = tuple.iter().fold(m, |acc, &t| acc.gcd(&t));
            if g == 1 {
                let rho = RhoImages {
                    d: tuple[..gamma].iter().map(|&t| t as u32).collect(),
                    x: tuple[gamma..].iter().map(|&t| t as u32).collect(),
                };
                if visit(&rho).is_break() {
                    return;
                }
            }
        }
        // advance odometer, last free coordinate fastest
        let mut p = free;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < choices(p).len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub gamma: u32,
    pub periods: Vec<u32>,
    pub order: u32,
    pub count: usize,
    pub epimorphisms: Vec<RhoImages>,
}

pub fn enumerate_smooth_epimorphisms(gamma: u32, periods: &[u32], order: u32) -> Enumeration {
    let mut epimorphisms = Vec::new();
    for_each_smooth_epimorphism(gamma, periods, order, |rho| {
        epimorphisms.push(rho.clone());
        ControlFlow::Continue(())
    });
    Enumeration {
        gamma,
        periods: periods.to_vec(),
        order,
        count: epimorphisms.len(),
        epimorphisms,
    }
}

pub fn first_smooth_epimorphism(gamma: u32, periods: &[u32], order: u32) -> Option<RhoImages> {
    let mut found = None;
    for_each_smooth_epimorphism(gamma, periods, order, |rho| {
        found = Some(rho.clone());
        ControlFlow::Break(())
    });
    found
}

/// Canonical presentation of the signature `(γ; −; [n_1..n_r])`.
pub fn delta_presentation(d: &ActionDatum) -> Option<Presentation> {
    d.delta_signature()
        .and_then(|s| canonical_presentation(&s).ok())
}
