use serde::Serialize;
use thiserror::Error;

use super::theta::DiscGroup;
use crate::finite::{
    cayley_coset_table_with_priority, reidemeister_schreier, CosetError, FiniteHom,
    SubgroupPresentation,
};
use crate::kernel::{kernel_signature_index2, KernelError, KernelSignatureReport};
use crate::presentation::{verify_derived_relator, RelatorVerdict, TorsionWord};
use crate::signature::NecSignature;
use crate::word::{subscript, GenId, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaHatError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error("kernel signature {found} differs from the expected {expected}")]
    SignatureMismatch { found: String, expected: String },
    #[error("transversal does not start with 1, τ₁")]
    Transversal,
}

/// A named element of `Δ̂` with its word in `K` and in the Schreier generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub symbol: String,
    pub base_word: String,
    pub subgroup_word: String,
    #[serde(skip)]
    pub generator: GenId,
}

/// A relation among the named elements, checked by rewriting in `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedRelation {
    pub relation: String,
    pub certified: bool,
    pub relators_used: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct DeltaHat {
    pub subgroup: SubgroupPresentation,
    pub report: KernelSignatureReport,
    pub expected: NecSignature,
    pub signature_match: bool,
    pub gamma: usize,
    pub r: usize,
    /// `δ_j = τ_1 x_j`.
    pub deltas: Vec<Correspondence>,
    /// `c_k = τ_1 τ_{k+1}`.
    pub corners: Vec<Correspondence>,
    /// `(e, τ_1 e τ_1)` for even `γ`, `(τ_1 e, e τ_1)` for odd `γ`.
    pub connectors: [Correspondence; 2],
    /// Relations among `δ_j`, `c_k`, `e_1`, `e_2`; only stated for even `γ`.
    pub relations: Vec<NamedRelation>,
}

impl DeltaHat {
    pub fn signature(&self) -> &NecSignature {
        &self.report.signature
    }

    pub fn torsion(&self) -> &[TorsionWord] {
        self.subgroup.presentation().torsion()
    }
}

/// Kernel `Δ̂` of `θ`, presented by Reidemeister–Schreier with the
/// transversal `{1, τ_1}`, together with its signature and the named
/// generators `δ_j`, `c_k` and the connector pair.
pub fn derive_delta_hat(k: &DiscGroup, theta: &FiniteHom) -> Result<DeltaHat, DeltaHatError> {
    let layout = k.layout;
    let base = &k.presentation;
    let tau1 = layout.tau(1);
    let table = cayley_coset_table_with_priority(base, theta, &[tau1])?;
    if table.len() != 2 || *table.representative(1) != Word::gen(tau1) {
        return Err(DeltaHatError::Transversal);
    }
    let mut subgroup = reidemeister_schreier(base, &table);
    let report = kernel_signature_index2(&k.signature, base, theta)?;
    let periods: Vec<u32> = k.signature.period_cycles[0].clone();
    let expected =
        NecSignature::non_orientable(layout.gamma as u32, periods.clone()).expect("valid periods");
    let signature_match = report.signature.same_type(&expected);
    if !signature_match {
        return Err(DeltaHatError::SignatureMismatch {
            found: report.signature.to_string(),
            expected: expected.to_string(),
        });
    }

    let sp = subgroup.presentation().clone();
    let entry = |symbol: String, base_word: Word, coset: usize, gen: GenId| {
        let generator = subgroup.generator_for(coset, gen).expect("non-tree edge");
        let rewritten = subgroup.rewrite(&base_word).expect("element of the kernel");
        Correspondence {
            symbol,
            base_word: base.render(&base_word),
            subgroup_word: sp.render(&rewritten),
            generator,
        }
    };
    let t1 = Word::gen(tau1);
    let deltas: Vec<Correspondence> = (1..=layout.gamma)
        .map(|j| {
            entry(
                format!("δ{}", subscript(j)),
                &t1 * &Word::gen(layout.x(j)),
                1,
                layout.x(j),
            )
        })
        .collect();
    let corners: Vec<Correspondence> = (1..=layout.r)
        .map(|kk| {
            entry(
                format!("c{}", subscript(kk)),
                &t1 * &Word::gen(layout.tau(kk + 1)),
                1,
                layout.tau(kk + 1),
            )
        })
        .collect();
    let e = Word::gen(layout.e());
    let connectors = if layout.gamma.is_multiple_of(2) {
        [
            entry("e₁".into(), e.clone(), 0, layout.e()),
            entry("e₂".into(), &(&t1 * &e) * &t1, 1, layout.e()),
        ]
    } else {
        [
            entry("τ₁e".into(), &t1 * &e, 1, layout.e()),
            entry("eτ₁".into(), &e * &t1, 0, layout.e()),
        ]
    };

    let mut torsion = Vec::new();
    for (i, &p) in periods.iter().enumerate() {
        let word = if i == 0 {
            Word::gen(corners[0].generator)
        } else {
            &Word::inv_gen(corners[i - 1].generator) * &Word::gen(corners[i].generator)
        };
        torsion.push(TorsionWord { word, order: p });
    }
    subgroup.set_torsion(torsion);

    let relations = if layout.gamma.is_multiple_of(2) {
        named_relations(k, &periods)
    } else {
        Vec::new()
    };

    Ok(DeltaHat {
        subgroup,
        report,
        expected,
        signature_match,
        gamma: layout.gamma,
        r: layout.r,
        deltas,
        corners,
        connectors,
        relations,
    })
}

/// For even `γ`: `c_1^{n_1}`, `(c_{k-1}⁻¹ c_k)^{n_k}`, `e_1 e_2⁻¹ c_r` and the
/// two alternating products of the `δ_j` equal to `e_1` and `e_2`.
fn named_relations(k: &DiscGroup, periods: &[u32]) -> Vec<NamedRelation> {
    let layout = k.layout;
    let (g, r) = (layout.gamma, layout.r);
    // symbols: δ_1..δ_γ, c_1..c_r, e_1, e_2
    let delta = |j: usize| j - 1;
    let corner = |kk: usize| g + kk - 1;
    let (e1, e2) = (g + r, g + r + 1);
    let t1 = Word::gen(layout.tau(1));
    let mut substitution: Vec<Word> = (1..=g).map(|j| &t1 * &Word::gen(layout.x(j))).collect();
    substitution.extend((1..=r).map(|kk| &t1 * &Word::gen(layout.tau(kk + 1))));
    substitution.push(Word::gen(layout.e()));
    substitution.push(&(&t1 * &Word::gen(layout.e())) * &t1);

    let mut stated: Vec<(String, Word)> = Vec::new();
    if r >= 1 {
        stated.push((
            format!("c₁^{}", periods[0]),
            Word::gen(corner(1)).pow(periods[0]),
        ));
    }
    for kk in 2..=r {
        let w = &Word::inv_gen(corner(kk - 1)) * &Word::gen(corner(kk));
        stated.push((
            format!(
                "(c{}⁻¹c{})^{}",
                subscript(kk - 1),
                subscript(kk),
                periods[kk - 1]
            ),
            w.pow(periods[kk - 1]),
        ));
    }
    let mut link = &Word::gen(e1) * &Word::inv_gen(e2);
    if r >= 1 {
        link = &link * &Word::gen(corner(r));
        stated.push((format!("e₁e₂⁻¹c{}", subscript(r)), link));
    } else {
        stated.push(("e₁e₂⁻¹".into(), link));
    }
    // δ_1⁻¹ δ_2 δ_3⁻¹ ⋯ δ_γ = e_1 and δ_1 δ_2⁻¹ ⋯ δ_γ⁻¹ = e_2
    for (target, odd_inverse, label) in [(e1, true, "e₁"), (e2, false, "e₂")] {
        let mut w = Word::identity();
        let mut text = String::new();
        for j in 1..=g {
            let inverse = (j % 2 == 1) == odd_inverse;
            w.push(Letter::new(delta(j), inverse));
            text.push_str(&format!(
                "δ{}{}",
                subscript(j),
                if inverse { "⁻¹" } else { "" }
            ));
        }
        w.push(Letter::new(target, true));
        stated.push((format!("{text} = {label}"), w));
    }

    stated
        .into_iter()
        .map(|(relation, w)| {
            let verdict = verify_derived_relator(&k.presentation, &w, &substitution);
            let relators_used = match &verdict {
                RelatorVerdict::Certified { relators_used, .. } => relators_used.clone(),
                RelatorVerdict::Unresolved { .. } => Vec::new(),
            };
            NamedRelation {
                relation,
                certified: verdict.is_certified(),
                relators_used,
            }
        })
        .collect()
}
