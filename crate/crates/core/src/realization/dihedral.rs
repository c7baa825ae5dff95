use serde::Serialize;
use thiserror::Error;

use super::delta_hat::DeltaHat;
use super::theta::DiscGroup;
use crate::finite::{DihedralElement, FiniteGroup, FiniteHom, GroupElement};
use crate::kernel::{surface_kernel_check, SurfaceKernelReport};
use crate::presentation::check_homomorphism;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("η is not a homomorphism into a cyclic group")]
    NotCyclic,
    #[error("no choice of Θ(τ₁) extends η to a homomorphism K → {group}")]
    NoExtension { group: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorImage {
    pub generator: String,
    pub image: String,
}

/// `Θ: K → D_2n` restricting to `η` on `Δ̂`, with its smoothness evidence.
#[derive(Debug, Clone, Serialize)]
pub struct DihedralExtension {
    #[serde(skip)]
    pub hom: FiniteHom,
    pub group: String,
    pub reflection_shift: u32,
    pub images: Vec<GeneratorImage>,
    pub relators_ok: bool,
    pub restricts_to_eta: bool,
    pub surjective: bool,
    pub image_order: u64,
    pub kernel_index: u64,
    pub smooth: SurfaceKernelReport,
    pub genus: Option<u32>,
}

impl DihedralExtension {
    pub fn holds(&self, n: u32) -> bool {
        self.relators_ok
            && self.restricts_to_eta
            && self.surjective
            && self.kernel_index == 4 * n as u64
            && self.smooth.is_smooth()
    }
}

/// Extends `η: Δ̂ → C_2n` to `Θ: K → D_2n = ⟨s, t⟩` by `Θ(τ_1) = t s^k`,
/// `Θ(g) = Θ(τ_1)·s^{η(τ_1 g)}` when `θ(g) ≠ 1` and `Θ(g) = s^{η(g)}`
/// otherwise, trying `k = 0, 1, ...` until `Θ` respects every relator of `K`
/// and agrees with `η` on every generator of `Δ̂`.
pub fn extend_to_dihedral(
    k: &DiscGroup,
    dh: &DeltaHat,
    theta: &FiniteHom,
    eta: &FiniteHom,
) -> Result<DihedralExtension, ExtensionError> {
    let residues = eta.residues().ok_or(ExtensionError::NotCyclic)?;
    let m = match eta.target() {
        FiniteGroup::Cyclic(m) => m,
        _ => return Err(ExtensionError::NotCyclic),
    };
    let base = &k.presentation;
    let sub = &dh.subgroup;
    let tau1 = Word::gen(k.layout.tau(1));
    let eta_of = |w: &Word| -> i64 {
        let s = sub.rewrite(w).expect("word lies in Δ̂");
        s.letters()
            .iter()
            .map(|l| l.exponent() * residues[l.gen] as i64)
            .sum()
    };
    let shifts: Vec<i64> = (0..base.rank())
        .map(|g| {
            let flips = !theta.images()[g].is_identity();
            let g = Word::from_letters(vec![Letter::new(g, false)]);
            if flips {
                eta_of(&(&tau1 * &g))
            } else {
                eta_of(&g)
            }
        })
        .collect();

    for shift in 0..m {
        let reflection = DihedralElement::reflection(shift as i64, m);
        let images: Vec<DihedralElement> = (0..base.rank())
            .map(|g| {
                let rot = DihedralElement::rotation(shifts[g], m);
                if theta.images()[g].is_identity() {
                    rot
                } else {
                    reflection.op(rot).expect("same order")
                }
            })
            .collect();
        let hom = FiniteHom::dihedral(m, images).expect("members of D_m");
        if !check_homomorphism(base, &hom).is_valid() {
            continue;
        }
        let restricts_to_eta = sub.schreier_generators().iter().enumerate().all(|(g, s)| {
            hom.evaluate(&s.word)
                == GroupElement::Dihedral(DihedralElement::rotation(residues[g] as i64, m))
        });
        if !restricts_to_eta {
            continue;
        }
        let smooth = surface_kernel_check(base, &hom, &k.signature);
        let image_order = hom.image().len() as u64;
        return Ok(DihedralExtension {
            group: hom.target().to_string(),
            reflection_shift: shift,
            images: base
                .generators()
                .iter()
                .zip(hom.images())
                .map(|(g, img)| GeneratorImage {
                    generator: g.name.clone(),
                    image: img.to_string(),
                })
                .collect(),
            relators_ok: true,
            restricts_to_eta,
            surjective: image_order == hom.target().order(),
            image_order,
            kernel_index: image_order,
            genus: smooth.genus,
            smooth,
            hom,
        });
    }
    Err(ExtensionError::NoExtension {
        group: FiniteGroup::Dihedral(m).to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::action::{ActionDatum, RhoImages};
    use crate::realization::delta_hat::derive_delta_hat;
    use crate::realization::eta::construct_eta;
    use crate::realization::theta::build_theta;

    fn setup(
        gamma: u32,
        periods: &[u32],
        n: u32,
        d: &[u32],
        x: &[u32],
    ) -> (DiscGroup, DeltaHat, FiniteHom, FiniteHom) {
        let k = DiscGroup::new(gamma, periods).unwrap();
        let theta = build_theta(k.layout);
        let dh = derive_delta_hat(&k, &theta).unwrap();
        let datum = ActionDatum {
            gamma,
            periods: periods.to_vec(),
            n,
            rho: RhoImages {
                d: d.to_vec(),
                x: x.to_vec(),
            },
        };
        let eta = construct_eta(&dh, &datum).unwrap().hom;
        (k, dh, theta, eta)
    }

    #[test]
    fn genus_two_extends_to_d4() {
        let (k, dh, theta, eta) = setup(1, &[2, 2, 2], 2, &[1], &[2, 2, 2]);
        let ext = extend_to_dihedral(&k, &dh, &theta, &eta).unwrap();
        assert_eq!(ext.group, "D₄");
        assert_eq!(ext.kernel_index, 8);
        assert!(ext.holds(2), "{ext:#?}");
        assert_eq!(ext.genus, Some(2));
    }

    #[test]
    fn genus_five_extends() {
        let (k, dh, theta, eta) = setup(4, &[], 2, &[1, 1, 1, 1], &[]);
        let ext = extend_to_dihedral(&k, &dh, &theta, &eta).unwrap();
        assert!(ext.holds(2));
        assert_eq!(ext.genus, Some(5));
    }

    #[test]
    fn perturbed_eta_has_no_extension() {
        let (k, dh, theta, eta) = setup(2, &[2, 2], 2, &[1, 1], &[2, 2]);
        let mut residues: Vec<i64> = eta.residues().unwrap().iter().map(|&v| v as i64).collect();
        residues[0] += 2;
        let broken = FiniteHom::cyclic(4, &residues);
        assert_eq!(
            extend_to_dihedral(&k, &dh, &theta, &broken).unwrap_err(),
            ExtensionError::NoExtension {
                group: "D₄".into()
            }
        );
    }
}
