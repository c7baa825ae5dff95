//! Signatures of the kernels the realization pipeline needs: the index-two
//! reflection-free kernel of a map from the disc group onto `C_2`, and
//! surface kernels of maps onto cyclic or dihedral groups.

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::finite::{cayley_coset_table, CosetError, FiniteGroup, FiniteHom};
use crate::presentation::{check_homomorphism, DiscLayout, Presentation};
use crate::signature::{
    orientation_character, surface_kernel_genus, word_orientation, GeneratorKind, NecSignature,
    Rational, SignatureError,
};
use crate::word::{free_reduce, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("signature {0} is not a bordered disc signature")]
    UnsupportedSignature(String),
    #[error("the map does not have index 2 onto C2")]
    NotIndexTwo,
    #[error("reflection {0} lies in the kernel")]
    ReflectionSurvives(String),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("kernel genus {0} is not a valid integer genus")]
    NonIntegralGenus(Rational),
}

/// Cone points of the kernel coming from one elliptic element of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitEvidence {
    pub element: String,
    pub order: u32,
    pub image_order: u32,
    pub orbits: usize,
    /// Period contributed by each orbit; 1 means no cone point.
    pub period: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationWitness {
    pub word: String,
    pub character: i8,
    pub image: String,
    #[serde(skip)]
    pub letters: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AreaBookkeeping {
    pub base_area: String,
    pub index: u64,
    pub kernel_area: String,
    /// `area(kernel signature) == index · area(base)`
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelSignatureReport {
    pub signature: NecSignature,
    pub elliptic_orbits: Vec<OrbitEvidence>,
    pub corner_orbits: Vec<OrbitEvidence>,
    pub orientable: bool,
    pub witness: Option<OrientationWitness>,
    pub area: AreaBookkeeping,
}

/// Signature of the kernel of an index-two map from the disc group
/// `(0; +; [2^γ]; {(n_1..n_r)})` that sends every reflection to the generator
/// of `C_2`.
///
/// Proper periods come from orbit counts: each elliptic `x` of order `m`
/// gives `m / ord θ(x)` per orbit of `⟨θ(x)⟩`, and each corner `τ_k τ_{k+1}`
/// of link period `n_k` gives `n_k / ord θ(τ_k τ_{k+1})` per orbit of
/// `⟨θ(τ_k), θ(τ_{k+1})⟩`. No reflection survives, so there are no period
/// cycles. Orientability is decided by whether the orientation character
/// factors through the map, and the genus then follows from the area.
pub fn kernel_signature_index2(
    base_sig: &NecSignature,
    base: &Presentation,
    theta: &FiniteHom,
) -> Result<KernelSignatureReport, KernelError> {
    let layout = DiscLayout::from_signature(base_sig)
        .ok_or_else(|| KernelError::UnsupportedSignature(base_sig.to_string()))?;
    if theta.target() != FiniteGroup::Cyclic(2) || !theta.is_surjective() {
        return Err(KernelError::NotIndexTwo);
    }
    for (g, gen) in base.generators().iter().enumerate() {
        if gen.kind == GeneratorKind::Reflection && theta.images()[g].is_identity() {
            return Err(KernelError::ReflectionSurvives(gen.name.clone()));
        }
    }
    let table = cayley_coset_table(base, theta)?;
    let index = table.len() as u64;

    let mut periods = Vec::new();
    let mut elliptic_orbits = Vec::new();
    for (g, gen) in base.generators().iter().enumerate() {
        let GeneratorKind::Elliptic(m) = gen.kind else {
            continue;
        };
        let image_order = theta.images()[g].order();
        let ev = OrbitEvidence {
            element: gen.name.clone(),
            order: m,
            image_order,
            orbits: table.orbit_count(&[g]),
            period: m / image_order,
        };
        if ev.period > 1 {
            periods.extend(std::iter::repeat_n(ev.period, ev.orbits));
        }
        elliptic_orbits.push(ev);
    }

    let mut corner_orbits = Vec::new();
    for (k, &n) in base_sig.period_cycles[0].iter().enumerate() {
        let (a, b) = (layout.tau(k + 1), layout.tau(k + 2));
        let corner = Word::from_letters(vec![Letter::new(a, false), Letter::new(b, false)]);
        let image_order = theta.evaluate(&corner).order();
        let ev = OrbitEvidence {
            element: base.render(&corner),
            order: n,
            image_order,
            orbits: table.orbit_count(&[a, b]),
            period: n / image_order,
        };
        if ev.period > 1 {
            periods.extend(std::iter::repeat_n(ev.period, ev.orbits));
        }
        corner_orbits.push(ev);
    }
    periods.sort_unstable();

    let chi = orientation_character(base)?;
    let orientable = theta.character_factors(&chi);
    let witness = if orientable {
        None
    } else {
        Some(orientation_witness(base, layout, theta, &table, &chi)?)
    };

    let base_area = base_sig.reduced_area();
    let kernel_area = base_area * Rational::from_integer(index as i64);
    let cone_sum: Rational = periods
        .iter()
        .map(|&m| Rational::from_integer(1) - Rational::new(1, m as i64))
        .sum();
    let raw = kernel_area + Rational::from_integer(2) - cone_sum;
    let genus = if orientable {
        raw / Rational::from_integer(2)
    } else {
        raw
    };
    let min_genus = if orientable { 0 } else { 1 };
    if !genus.is_integer() || genus.to_integer() < min_genus || genus.is_negative() {
        return Err(KernelError::NonIntegralGenus(genus));
    }
    let signature = NecSignature::new(orientable, genus.to_integer() as u32, periods, Vec::new())?;
    let area = AreaBookkeeping {
        base_area: base_area.to_string(),
        index,
        kernel_area: kernel_area.to_string(),
        consistent: signature.reduced_area() == kernel_area,
    };
    Ok(KernelSignatureReport {
        signature,
        elliptic_orbits,
        corner_orbits,
        orientable,
        witness,
        area,
    })
}

/// `τ_1 x_1` when it qualifies, otherwise the Schreier generator on the
/// first edge where the orientation character fails to factor.
fn orientation_witness(
    base: &Presentation,
    layout: DiscLayout,
    theta: &FiniteHom,
    table: &crate::finite::CosetTable,
    chi: &[i8],
) -> Result<OrientationWitness, KernelError> {
    let mut candidates = Vec::new();
    if layout.gamma >= 1 {
        candidates.push(Word::from_letters(vec![
            Letter::new(layout.tau(1), false),
            Letter::new(layout.x(1), false),
        ]));
    }
    if let Some((h, g)) = theta.character_obstruction(chi) {
        let coset = (0..table.len())
            .find(|&i| *table.coset_element(i) == h)
            .expect("image element is a coset");
        let target = table.act(coset, Letter::new(g, false));
        let mut w = table.representative(coset).clone();
        w.push(Letter::new(g, false));
        candidates.push(free_reduce(&(&w * &table.representative(target).inverse())));
    }
    for w in candidates {
        let character = word_orientation(base, &w)?;
        let image = theta.evaluate(&w);
        if character == -1 && image.is_identity() {
            return Ok(OrientationWitness {
                word: base.render(&w),
                character,
                image: image.to_string(),
                letters: w,
            });
        }
    }
    unreachable!("a failing character always yields a reversing kernel element")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionEvidence {
    pub word: String,
    pub declared_order: u32,
    pub image: String,
    pub image_order: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceKernelReport {
    pub relators_ok: bool,
    pub surjective: bool,
    pub torsion: Vec<TorsionEvidence>,
    pub torsion_free: bool,
    pub fuchsian: bool,
    pub kernel_index: u64,
    pub genus: Option<u32>,
    pub genus_error: Option<String>,
}

impl SurfaceKernelReport {
    pub fn is_smooth(&self) -> bool {
        self.relators_ok
            && self.surjective
            && self.torsion_free
            && self.fuchsian
            && self.genus.is_some()
    }
}

/// Checks that the kernel of `hom` is a torsion-free Fuchsian group: every
/// designated torsion word keeps its declared order, and the orientation
/// character factors through the image. The genus of the uniformized surface
/// is computed from `sig` when both hold.
pub fn surface_kernel_check(
    p: &Presentation,
    hom: &FiniteHom,
    sig: &NecSignature,
) -> SurfaceKernelReport {
    let relators_ok = check_homomorphism(p, hom).is_valid();
    let image_size = hom.image().len() as u64;
    let surjective = image_size == hom.target().order();
    let torsion: Vec<TorsionEvidence> = p
        .torsion()
        .iter()
        .map(|t| {
            let image = hom.evaluate(&t.word);
            let image_order = image.order();
            TorsionEvidence {
                word: p.render(&t.word),
                declared_order: t.order,
                image: image.to_string(),
                image_order,
                ok: image_order == t.order,
            }
        })
        .collect();
    let torsion_free = torsion.iter().all(|t| t.ok);
    let fuchsian = match orientation_character(p) {
        Ok(chi) => hom.character_factors(&chi),
        Err(_) => false,
    };
    let (genus, genus_error) = if relators_ok && torsion_free && fuchsian {
        match surface_kernel_genus(sig, image_size) {
            Ok(g) => (Some(g), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    SurfaceKernelReport {
        relators_ok,
        surjective,
        torsion,
        torsion_free,
        fuchsian,
        kernel_index: image_size,
        genus,
        genus_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::canonical_presentation;
    use crate::signature::quotient_disc_signature;

    fn theta(layout: DiscLayout, parity_fix: bool) -> FiniteHom {
        let mut images = vec![1; layout.rank()];
        images[layout.e()] = if parity_fix {
            (layout.gamma % 2) as i64
        } else {
            0
        };
        FiniteHom::cyclic(2, &images)
    }

    fn kernel_sig(gamma: u32, periods: &[u32]) -> KernelSignatureReport {
        let sig = quotient_disc_signature(gamma, periods).unwrap();
        let p = canonical_presentation(&sig).unwrap();
        let layout = DiscLayout::from_signature(&sig).unwrap();
        kernel_signature_index2(&sig, &p, &theta(layout, true)).unwrap()
    }

    #[test]
    fn index_two_kernels() {
        let r = kernel_sig(1, &[2, 2, 2]);
        assert_eq!(
            r.signature,
            NecSignature::non_orientable(1, vec![2, 2, 2]).unwrap()
        );
        assert!(r.area.consistent);
        assert_eq!(r.witness.as_ref().unwrap().word, "τ₁x₁");

        let r = kernel_sig(4, &[]);
        assert_eq!(
            r.signature,
            NecSignature::non_orientable(4, vec![]).unwrap()
        );
    }

    #[test]
    fn index_two_kernel_mixed_periods() {
        // Hand oracle: area(K) = 17/24, kernel area 17/12, cone points 3 and 4
        // from the corners, non-orientable, so h = 17/12 + 2 − (2/3 + 3/4) = 2.
        let r = kernel_sig(2, &[3, 4]);
        assert_eq!(r.signature.to_string(), "(2;\u{2212};[3,4])");
        assert_eq!(r.area.kernel_area, "17/12");
        assert!(r
            .elliptic_orbits
            .iter()
            .all(|e| e.period == 1 && e.orbits == 1));
        assert_eq!(
            r.corner_orbits.iter().map(|c| c.period).collect::<Vec<_>>(),
            vec![3, 4]
        );
    }

    #[test]
    fn surviving_reflection_rejected() {
        let sig = quotient_disc_signature(2, &[3]).unwrap();
        let p = canonical_presentation(&sig).unwrap();
        let layout = DiscLayout::from_signature(&sig).unwrap();
        let mut images = vec![1; layout.rank()];
        images[layout.e()] = 0;
        images[layout.tau(2)] = 0;
        images[layout.tau(1)] = 0;
        let err = kernel_signature_index2(&sig, &p, &FiniteHom::cyclic(2, &images)).unwrap_err();
        assert!(matches!(err, KernelError::ReflectionSurvives(_)));
    }

    fn delta_check(rho: &[i64]) -> SurfaceKernelReport {
        let sig = NecSignature::non_orientable(1, vec![2, 2, 2]).unwrap();
        let p = canonical_presentation(&sig).unwrap();
        surface_kernel_check(&p, &FiniteHom::cyclic(4, rho), &sig)
    }

    #[test]
    fn genus_two_surface_kernel() {
        // generator order d₁, x₁, x₂, x₃
        let r = delta_check(&[1, 2, 2, 2]);
        assert!(r.torsion_free && r.fuchsian && r.relators_ok && r.surjective);
        assert_eq!(r.genus, Some(2));
        assert!(r.is_smooth());
    }

    #[test]
    fn torsion_collapse_detected() {
        let r = delta_check(&[1, 0, 2, 2]);
        assert!(!r.torsion_free);
        assert_eq!(r.torsion[0].image_order, 1);
        assert_eq!(r.genus, None);
    }

    #[test]
    fn orientation_mismatch_detected() {
        let r = delta_check(&[2, 2, 2, 2]);
        assert!(r.torsion_free);
        assert!(!r.fuchsian);
    }
}
