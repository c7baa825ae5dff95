use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::action::{validate_action, ActionDatum, ValidationIssue};
use super::delta_hat::{derive_delta_hat, Correspondence, DeltaHat, NamedRelation};
use super::dihedral::{extend_to_dihedral, DihedralExtension, GeneratorImage};
use super::eta::construct_eta;
use super::lemma::{lemma1_check, Lemma1Report};
use super::theta::{build_theta, check_theta, DiscGroup};
use crate::kernel::{surface_kernel_check, KernelSignatureReport, SurfaceKernelReport};
use crate::presentation::{canonical_presentation, Presentation};
use crate::signature::NecSignature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("invalid action datum ({} issue(s))", .0.len())]
    Invalid(Vec<ValidationIssue>),
    #[error("internal check failed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureRecord {
    pub display: String,
    pub orientable: bool,
    pub genus: u32,
    pub proper_periods: Vec<u32>,
    pub period_cycles: Vec<Vec<u32>>,
    pub reduced_area: String,
}

impl From<&NecSignature> for SignatureRecord {
    fn from(s: &NecSignature) -> Self {
        SignatureRecord {
            display: s.to_string(),
            orientable: s.orientable,
            genus: s.genus,
            proper_periods: s.proper_periods.clone(),
            period_cycles: s.period_cycles.clone(),
            reduced_area: s.reduced_area().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationRecord {
    pub generators: Vec<GeneratorRecord>,
    pub relators: Vec<String>,
    pub torsion: Vec<String>,
}

impl From<&Presentation> for PresentationRecord {
    fn from(p: &Presentation) -> Self {
        PresentationRecord {
            generators: p
                .generators()
                .iter()
                .map(|g| GeneratorRecord {
                    name: g.name.clone(),
                    kind: g.kind.to_string(),
                })
                .collect(),
            relators: p.relators().iter().map(|r| p.render(r)).collect(),
            torsion: p
                .torsion()
                .iter()
                .map(|t| format!("{} (order {})", p.render(&t.word), t.order))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaRecord {
    pub images: Vec<GeneratorImage>,
    pub printed_assignment_valid: bool,
    pub printed_failing_relator: Option<String>,
    pub parity_fix_applied: bool,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaHatRecord {
    pub presentation: PresentationRecord,
    pub correspondence: Vec<Correspondence>,
    pub kernel: KernelSignatureReport,
    pub relations: Vec<NamedRelation>,
    pub relations_note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaRecord {
    pub unit: u32,
    pub assignment: Vec<usize>,
    pub torsion_images: Vec<u32>,
    pub images: Vec<GeneratorImage>,
    pub check: SurfaceKernelReport,
}

/// Every intermediate object of the realization chain with its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct RealizationCertificate {
    pub action: ActionDatum,
    pub genus: u32,
    pub delta_signature: SignatureRecord,
    pub rho_check: SurfaceKernelReport,
    pub k_signature: SignatureRecord,
    pub k_presentation: PresentationRecord,
    pub theta: ThetaRecord,
    pub delta_hat: DeltaHatRecord,
    pub delta_hat_signature: SignatureRecord,
    pub signature_match: bool,
    pub lemma1: Lemma1Report,
    pub eta: EtaRecord,
    pub theta_extension: DihedralExtension,
    pub genus_hat: Option<u32>,
    pub genus_match: bool,
    pub notes: Vec<String>,
    pub conclusion: bool,
}

/// Runs validation, `K`, `θ`, `Δ̂`, the `τ_1`-inversion checks, `η` and `Θ`,
/// and concludes when `Θ` is a smooth epimorphism onto `D_2n` whose kernel
/// uniformizes a surface of the original genus.
pub fn realize(datum: &ActionDatum) -> Result<RealizationCertificate, RealizeError> {
    let genus = validate_action(datum).map_err(RealizeError::Invalid)?;
    let internal = |e: &dyn std::fmt::Display| RealizeError::Internal(e.to_string());
    let delta_sig = datum.delta_signature().expect("validated");
    let delta = canonical_presentation(&delta_sig).map_err(|e| internal(&e))?;
    let rho_check = surface_kernel_check(&delta, &datum.rho_hom(), &delta_sig);

    let k = DiscGroup::new(datum.gamma, &datum.periods).map_err(|e| internal(&e))?;
    let theta = build_theta(k.layout);
    let theta_check = check_theta(&k);
    let theta_record = ThetaRecord {
        images: images_of(
            &k.presentation,
            &theta
                .images()
                .iter()
                .map(|g| if g.is_identity() { "1" } else { "a" })
                .collect::<Vec<_>>(),
        ),
        printed_assignment_valid: theta_check.printed_valid,
        printed_failing_relator: theta_check.printed_failing_relator.clone(),
        parity_fix_applied: theta_check.parity_fix_applied,
        valid: theta_check.fixed_valid,
    };

    let dh = derive_delta_hat(&k, &theta).map_err(|e| internal(&e))?;
    let lemma1 = lemma1_check(&k, &dh);
    let eta = construct_eta(&dh, datum).map_err(|e| internal(&e))?;
    let sp = dh.subgroup.presentation();
    let eta_check = surface_kernel_check(sp, &eta.hom, dh.signature());
    let ext = extend_to_dihedral(&k, &dh, &theta, &eta.hom).map_err(|e| internal(&e))?;

    let genus_hat = ext.genus;
    let genus_match = genus_hat == Some(genus);
    let relations_ok = dh.relations.iter().all(|r| r.certified);
    let conclusion = rho_check.is_smooth()
        && theta_record.valid
        && dh.signature_match
        && relations_ok
        && lemma1.holds
        && eta_check.is_smooth()
        && eta_check.genus == Some(genus)
        && ext.holds(datum.n)
        && genus_match;

    let mut notes = Vec::new();
    if theta_record.parity_fix_applied {
        notes.push(format!(
            "θ(e) = a because γ = {} is odd: the assignment e ↦ 1 fails the relator {}",
            datum.gamma,
            theta_record
                .printed_failing_relator
                .as_deref()
                .unwrap_or("?")
        ));
    }
    if eta.unit != 1 || eta.assignment.iter().enumerate().any(|(k, &i)| k != i) {
        notes.push(format!(
            "η matches ρ after the automorphism k ↦ {}k and branch assignment {:?}",
            eta.unit, eta.assignment
        ));
    }
    notes.push(
        "topological equivalence is certified through invariants only: quotient signature, order and branch data"
            .into(),
    );

    let relations_note = (dh.gamma % 2 == 1).then(|| {
        format!(
            "γ odd: e is not in Δ̂; the connector pair is {} and {}",
            dh.connectors[0].base_word, dh.connectors[1].base_word
        )
    });

    Ok(RealizationCertificate {
        action: datum.clone(),
        genus,
        delta_signature: (&delta_sig).into(),
        rho_check,
        k_signature: (&k.signature).into(),
        k_presentation: (&k.presentation).into(),
        theta: theta_record,
        delta_hat: DeltaHatRecord {
            presentation: sp.into(),
            correspondence: correspondence(&dh),
            kernel: dh.report.clone(),
            relations: dh.relations.clone(),
            relations_note,
        },
        delta_hat_signature: dh.signature().into(),
        signature_match: dh.signature_match,
        lemma1,
        eta: EtaRecord {
            unit: eta.unit,
            assignment: eta.assignment.clone(),
            torsion_images: eta.torsion_images.clone(),
            images: images_of(sp, eta.hom.images()),
            check: eta_check,
        },
        theta_extension: ext,
        genus_hat,
        genus_match,
        notes,
        conclusion,
    })
}

fn correspondence(dh: &DeltaHat) -> Vec<Correspondence> {
    dh.deltas
        .iter()
        .chain(&dh.corners)
        .chain(dh.connectors.iter())
        .cloned()
        .collect()
}

fn images_of<T: std::fmt::Display>(p: &Presentation, images: &[T]) -> Vec<GeneratorImage> {
    p.generators()
        .iter()
        .zip(images)
        .map(|(g, img)| GeneratorImage {
            generator: g.name.clone(),
            image: img.to_string(),
        })
        .collect()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl RealizationCertificate {
    /// Human-readable audit: one line per claim with its verdict.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let a = &self.action;
        let _ = writeln!(out, "Realization certificate");
        let _ = writeln!(
            out,
            "input: γ = {}, periods {:?}, n = {}, ρ(d) = {:?}, ρ(x) = {:?}",
            a.gamma, a.periods, a.n, a.rho.d, a.rho.x
        );
        let _ = writeln!(
            out,
            "Δ signature {} (area {})",
            self.delta_signature.display, self.delta_signature.reduced_area
        );
        let _ = writeln!(out, "genus g = {}", self.genus);
        let _ = writeln!(
            out,
            "ρ is a surface-kernel epimorphism onto C{}: {}",
            2 * a.n,
            verdict(self.rho_check.is_smooth())
        );
        let _ = writeln!(out);

        let _ = writeln!(
            out,
            "K signature {} (area {})",
            self.k_signature.display, self.k_signature.reduced_area
        );
        let _ = writeln!(out, "K relators:");
        for r in &self.k_presentation.relators {
            let _ = writeln!(out, "  {r}");
        }
        let images: Vec<String> = self
            .theta
            .images
            .iter()
            .map(|i| format!("{} ↦ {}", i.generator, i.image))
            .collect();
        let _ = writeln!(out, "θ: {}", images.join(", "));
        let _ = writeln!(
            out,
            "θ is a homomorphism onto C₂: {}",
            verdict(self.theta.valid)
        );
        if let Some(rel) = &self.theta.printed_failing_relator {
            let _ = writeln!(
                out,
                "θ with e ↦ 1 fails relator {rel}; parity fix e ↦ a applied"
            );
        }
        let _ = writeln!(out);

        let _ = writeln!(out, "Δ̂ = ker θ generators:");
        for c in &self.delta_hat.correspondence {
            let _ = writeln!(out, "  {} = {}", c.symbol, c.base_word);
        }
        let _ = writeln!(
            out,
            "Δ̂ signature {} matches (γ;−;[n₁..n_r]): {}",
            self.delta_hat_signature.display,
            verdict(self.signature_match)
        );
        let _ = writeln!(
            out,
            "index-2 area {} = 2 · {}: {}",
            self.delta_hat.kernel.area.kernel_area,
            self.delta_hat.kernel.area.base_area,
            verdict(self.delta_hat.kernel.area.consistent)
        );
        for rel in &self.delta_hat.relations {
            let _ = writeln!(out, "relation {}: {}", rel.relation, verdict(rel.certified));
        }
        if let Some(note) = &self.delta_hat.relations_note {
            let _ = writeln!(out, "{note}");
        }
        let _ = writeln!(out);

        render_lemma(&mut out, &self.lemma1);
        let _ = writeln!(out);

        let eta: Vec<String> = self
            .eta
            .images
            .iter()
            .map(|i| format!("{} ↦ {}", i.generator, i.image))
            .collect();
        let _ = writeln!(out, "η: {}", eta.join(", "));
        let _ = writeln!(
            out,
            "η is a surface-kernel epimorphism onto C{}: {}",
            2 * a.n,
            verdict(self.eta.check.is_smooth())
        );
        let ext = &self.theta_extension;
        let theta_imgs: Vec<String> = ext
            .images
            .iter()
            .map(|i| format!("{} ↦ {}", i.generator, i.image))
            .collect();
        let _ = writeln!(
            out,
            "Θ: {} (Θ(τ₁) = ts^{})",
            theta_imgs.join(", "),
            ext.reflection_shift
        );
        let _ = writeln!(
            out,
            "Θ respects the relators of K: {}",
            verdict(ext.relators_ok)
        );
        let _ = writeln!(
            out,
            "Θ restricted to Δ̂ equals η: {}",
            verdict(ext.restricts_to_eta)
        );
        let _ = writeln!(out, "Θ is onto {}: {}", ext.group, verdict(ext.surjective));
        let _ = writeln!(
            out,
            "|K : ker Θ| = {} = 4n: {}",
            ext.kernel_index,
            verdict(ext.kernel_index == 4 * a.n as u64)
        );
        let _ = writeln!(
            out,
            "ker Θ is a surface group: {}",
            verdict(ext.smooth.is_smooth())
        );
        match self.genus_hat {
            Some(h) => {
                let _ = writeln!(
                    out,
                    "ĝ = {h} equals g = {}: {}",
                    self.genus,
                    verdict(self.genus_match)
                );
            }
            None => {
                let _ = writeln!(out, "ĝ unavailable: FAIL");
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let _ = writeln!(out, "conclusion: {}", self.conclusion);
        out
    }
}

pub fn render_lemma(out: &mut String, l: &Lemma1Report) {
    let _ = writeln!(out, "H₁(Δ̂) = {}", l.abelianization);
    let cp = &l.connector_product;
    if cp.required {
        let _ = writeln!(
            out,
            "class of {} is zero: {}",
            cp.product,
            verdict(cp.is_zero)
        );
    } else {
        let _ = writeln!(
            out,
            "observed: class of {} = {} (zero: {})",
            cp.product, cp.class, cp.is_zero
        );
    }
    let inverted = l.inversions.iter().filter(|i| i.inverted).count();
    let _ = writeln!(
        out,
        "conjugation by τ₁ inverts H₁(Δ̂) on {}/{} generators: {}",
        inverted,
        l.inversions.len(),
        verdict(inverted == l.inversions.len())
    );
    for id in &l.identities {
        let _ = writeln!(out, "{}: {}", id.relation, verdict(id.certified));
    }
    let _ = writeln!(out, "τ₁-inversion checks: {}", verdict(l.holds));
}
