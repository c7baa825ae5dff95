//! Conjugation by `τ_1` acts on `Δ̂` and inverts its abelianization.

use serde::Serialize;

use super::delta_hat::{DeltaHat, NamedRelation};
use super::theta::DiscGroup;
use crate::finite::abelianization;
use crate::presentation::{verify_derived_relator, RelatorVerdict};
use crate::word::{subscript, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectorProduct {
    pub product: String,
    pub class: String,
    pub is_zero: bool,
    /// Whether vanishing is a required part of the check (even `γ` only).
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inversion {
    pub generator: String,
    /// `τ_1 w τ_1` rewritten in the generators of `Δ̂`.
    pub conjugate: String,
    pub class: String,
    pub conjugate_class: String,
    pub inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub abelianization: String,
    pub connector_product: ConnectorProduct,
    pub inversions: Vec<Inversion>,
    pub identities: Vec<NamedRelation>,
    pub holds: bool,
}

pub fn lemma1_check(k: &DiscGroup, dh: &DeltaHat) -> Lemma1Report {
    let sub = &dh.subgroup;
    let sp = sub.presentation();
    let ab = abelianization(sp);
    let layout = k.layout;
    let t1 = Word::gen(layout.tau(1));

    let [first, second] = &dh.connectors;
    let product = &Word::gen(first.generator) * &Word::gen(second.generator);
    let class = ab.class_of(&product);
    let connector_product = ConnectorProduct {
        product: format!("{}{}", paren(&first.symbol), paren(&second.symbol)),
        class: class.to_string(),
        is_zero: class.is_zero(),
        required: dh.gamma.is_multiple_of(2),
    };

    let inversions: Vec<Inversion> = sub
        .schreier_generators()
        .iter()
        .enumerate()
        .map(|(g, s)| {
            let conj = &(&t1 * &s.word) * &t1;
            let class = ab.generator_class(g);
            match sub.rewrite(&conj) {
                Ok(w) => {
                    let conjugate_class = ab.class_of(&w);
                    Inversion {
                        generator: sp.generators()[g].name.clone(),
                        conjugate: sp.render(&w),
                        class: class.to_string(),
                        conjugate_class: conjugate_class.to_string(),
                        inverted: conjugate_class == ab.negate(&class),
                    }
                }
                Err(e) => Inversion {
                    generator: sp.generators()[g].name.clone(),
                    conjugate: e.to_string(),
                    class: class.to_string(),
                    conjugate_class: String::new(),
                    inverted: false,
                },
            }
        })
        .collect();

    // symbols: τ_1, δ_1..δ_γ, c_1..c_r
    let mut substitution = vec![t1.clone()];
    substitution.extend((1..=layout.gamma).map(|j| &t1 * &Word::gen(layout.x(j))));
    substitution.extend((1..=layout.r).map(|kk| &t1 * &Word::gen(layout.tau(kk + 1))));
    let mut identities = Vec::new();
    let named = (1..=layout.gamma)
        .map(|j| format!("δ{}", subscript(j)))
        .chain((1..=layout.r).map(|kk| format!("c{}", subscript(kk))));
    for (i, name) in named.enumerate() {
        let sym = Word::gen(i + 1);
        let relator = &(&(&Word::gen(0) * &sym) * &Word::gen(0)) * &sym;
        let verdict = verify_derived_relator(&k.presentation, &relator, &substitution);
        identities.push(NamedRelation {
            relation: format!("τ₁{name}τ₁ = {name}⁻¹"),
            certified: verdict.is_certified(),
            relators_used: match verdict {
                RelatorVerdict::Certified { relators_used, .. } => relators_used,
                RelatorVerdict::Unresolved { .. } => Vec::new(),
            },
        });
    }

    let holds = (!connector_product.required || connector_product.is_zero)
        && inversions.iter().all(|i| i.inverted)
        && identities.iter().all(|i| i.certified);
    Lemma1Report {
        abelianization: ab.to_string(),
        connector_product,
        inversions,
        identities,
        holds,
    }
}

fn paren(s: &str) -> String {
    if s.chars().count() > 2 {
        format!("({s})")
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::delta_hat::derive_delta_hat;
    use crate::realization::theta::build_theta;

    fn check(gamma: u32, periods: &[u32]) -> Lemma1Report {
        let k = DiscGroup::new(gamma, periods).unwrap();
        let dh = derive_delta_hat(&k, &build_theta(k.layout)).unwrap();
        lemma1_check(&k, &dh)
    }

    #[test]
    fn holds_for_even_gamma() {
        let rep = check(2, &[3]);
        assert!(rep.holds, "{rep:#?}");
        assert_eq!(rep.connector_product.product, "e₁e₂");
        assert!(rep.connector_product.required && rep.connector_product.is_zero);
    }

    #[test]
    fn holds_for_odd_gamma() {
        let rep = check(1, &[2, 2, 2]);
        assert!(rep.holds, "{rep:#?}");
        assert!(!rep.connector_product.required);
        assert_eq!(rep.connector_product.product, "(τ₁e)(eτ₁)");
        // observed: the connector pair classes are mutually inverse
        assert!(rep.connector_product.is_zero);
        assert_eq!(rep.abelianization, "Z/2 + Z/2 + Z/4");
    }

    #[test]
    fn identities_listed() {
        let rep = check(3, &[2, 4]);
        let names: Vec<&str> = rep.identities.iter().map(|i| i.relation.as_str()).collect();
        assert_eq!(names[0], "τ₁δ₁τ₁ = δ₁⁻¹");
        assert_eq!(names.len(), 5);
        assert!(rep.identities.iter().all(|i| i.certified));
    }
}
