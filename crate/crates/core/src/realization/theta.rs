use crate::finite::{FiniteHom, GroupElement};
use crate::presentation::{
    canonical_presentation, check_homomorphism, DiscLayout, HomCheck, Presentation,
};
use crate::signature::{quotient_disc_signature, NecSignature, SignatureError};

/// The disc group `K` with signature `(0; +; [2^γ]; {(n_1, ..., n_r)})`.
#[derive(Debug, Clone)]
pub struct DiscGroup {
    pub signature: NecSignature,
    pub layout: DiscLayout,
    pub presentation: Presentation,
}

impl DiscGroup {
    pub fn new(gamma: u32, periods: &[u32]) -> Result<Self, SignatureError> {
        let signature = quotient_disc_signature(gamma, periods)?;
        let layout = DiscLayout::from_signature(&signature).expect("disc signature");
        let presentation = canonical_presentation(&signature).expect("disc family is supported");
        Ok(DiscGroup {
            signature,
            layout,
            presentation,
        })
    }
}

/// `θ: K → C_2 = ⟨a⟩` sending every `x_i` and `τ_j` to `a` and `e` to `a^γ`,
/// the only choice compatible with `x_γ⋯x_1 e = 1`.
pub fn build_theta(layout: DiscLayout) -> FiniteHom {
    theta_with_connector(layout, (layout.gamma % 2) as i64)
}

/// The assignment with `e ↦ 1` regardless of `γ`.
pub fn printed_theta(layout: DiscLayout) -> FiniteHom {
    theta_with_connector(layout, 0)
}

fn theta_with_connector(layout: DiscLayout, e: i64) -> FiniteHom {
    let mut images = vec![1; layout.rank()];
    images[layout.e()] = e;
    FiniteHom::cyclic(2, &images)
}

/// Outcome of checking both assignments against the relators of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCheck {
    pub printed_valid: bool,
    /// Rendered relator the `e ↦ 1` assignment fails, if any.
    pub printed_failing_relator: Option<String>,
    pub fixed_valid: bool,
    pub parity_fix_applied: bool,
}

pub fn check_theta(k: &DiscGroup) -> ThetaCheck {
    let p = &k.presentation;
    let printed = check_homomorphism(p, &printed_theta(k.layout));
    let printed_failing_relator = match &printed {
        HomCheck::Failing { relator, .. } => Some(p.render(&p.relators()[*relator])),
        _ => None,
    };
    let fixed = build_theta(k.layout);
    ThetaCheck {
        printed_valid: printed.is_valid(),
        printed_failing_relator,
        fixed_valid: check_homomorphism(p, &fixed).is_valid(),
        parity_fix_applied: fixed.images()[k.layout.e()]
            != GroupElement::Cyclic(crate::finite::CyclicElement::new(0, 2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_assignment_fails_for_odd_gamma() {
        let k = DiscGroup::new(1, &[2, 2, 2]).unwrap();
        let c = check_theta(&k);
        assert!(!c.printed_valid);
        assert_eq!(c.printed_failing_relator.as_deref(), Some("x₁e"));
        assert!(c.fixed_valid);
        assert!(c.parity_fix_applied);
    }

    #[test]
    fn even_gamma_needs_no_fix() {
        let k = DiscGroup::new(2, &[3]).unwrap();
        let c = check_theta(&k);
        assert!(c.printed_valid);
        assert!(c.fixed_valid);
        assert!(!c.parity_fix_applied);
        assert_eq!(build_theta(k.layout), printed_theta(k.layout));
    }

    #[test]
    fn theta_is_valid_across_small_cases() {
        for gamma in 1..=5 {
            for periods in [vec![], vec![2], vec![3, 4], vec![2, 2, 2]] {
                let Ok(k) = DiscGroup::new(gamma, &periods) else {
                    continue;
                };
                let theta = build_theta(k.layout);
                assert!(check_homomorphism(&k.presentation, &theta).is_valid());
                assert!(theta.is_surjective());
            }
        }
    }
}
