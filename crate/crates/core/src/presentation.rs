//! Finite presentations with generator kinds, the two canonical NEC families
//! used by the realization pipeline, and relator checking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite::{FiniteHom, GroupElement};
use crate::signature::{GeneratorKind, NecSignature};
use crate::word::{subscript, GenId, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relator {relator} references undeclared generator {gen}")]
    UnknownGenerator { relator: usize, gen: GenId },
    #[error("generator {0} has no order relator")]
    MissingOrderRelator(String),
    #[error("signature {0} is not in a supported canonical family")]
    UnsupportedFamily(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
}

/// A word whose image under a surface-kernel map must keep its full order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionWord {
    pub word: Word,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
    torsion: Vec<TorsionWord>,
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_gen().filter(|&g| g >= generators.len()) {
                return Err(PresentationError::UnknownGenerator { relator: i, gen: g });
            }
        }
        Ok(Presentation {
            generators,
            relators,
            torsion: Vec::new(),
        })
    }

    pub fn with_torsion(mut self, torsion: Vec<TorsionWord>) -> Self {
        self.torsion = torsion;
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn torsion(&self) -> &[TorsionWord] {
        &self.torsion
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn kind(&self, g: GenId) -> GeneratorKind {
        self.generators[g].kind
    }

    pub fn render(&self, w: &Word) -> String {
        w.display(&self.names()).to_string()
    }

    /// Every declared elliptic generator has its `g^m` relator and every
    /// reflection its `g²` relator.
    pub fn check_well_formed(&self) -> Result<(), PresentationError> {
        for (g, gen) in self.generators.iter().enumerate() {
            let order = match gen.kind {
                GeneratorKind::Elliptic(m) => m,
                GeneratorKind::Reflection => 2,
                _ => continue,
            };
            let power = Word::gen(g).pow(order);
            let inverse_power = power.inverse();
            if !self
                .relators
                .iter()
                .any(|r| *r == power || *r == inverse_power)
            {
                return Err(PresentationError::MissingOrderRelator(gen.name.clone()));
            }
        }
        Ok(())
    }

    /// Free reduction that also uses `g² = 1` for reflections and order-two
    /// elliptics; inverse letters of such generators are written positively.
    pub fn involution_reduce(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let l = if self.kind(l.gen).is_involution() {
                Letter::new(l.gen, false)
            } else {
                l
            };
            let cancels = match out.last() {
                Some(&prev) => prev == l.inv() || (prev == l && self.kind(l.gen).is_involution()),
                None => false,
            };
            if cancels {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word::from_letters(out)
    }

    fn letters_cancel(&self, a: Letter, b: Letter) -> bool {
        a == b.inv() || (a.gen == b.gen && self.kind(a.gen).is_involution())
    }

    /// `involution_reduce` followed by cancellation around the cyclic end.
    pub fn cyclic_involution_reduce(&self, w: &Word) -> Word {
        let mut letters = self.involution_reduce(w).into_letters();
        while letters.len() >= 2 && self.letters_cancel(letters[0], letters[letters.len() - 1]) {
            letters.pop();
            letters.remove(0);
        }
        Word::from_letters(letters)
    }
}

/// Generator layout of the disc family `(0; +; [2^γ]; {(n_1, ..., n_r)})`:
/// `x_1..x_γ`, then `e`, then `τ_1..τ_{r+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscLayout {
    pub gamma: usize,
    pub r: usize,
}

impl DiscLayout {
    /// `x_j`, 1-based.
    pub fn x(&self, j: usize) -> GenId {
        j - 1
    }

    pub fn e(&self) -> GenId {
        self.gamma
    }

    /// `τ_j`, 1-based, `j ≤ r + 1`.
    pub fn tau(&self, j: usize) -> GenId {
        self.gamma + j
    }

    pub fn rank(&self) -> usize {
        self.gamma + self.r + 2
    }

    pub fn from_signature(sig: &NecSignature) -> Option<Self> {
        let disc = sig.orientable
            && sig.genus == 0
            && !sig.proper_periods.is_empty()
            && sig.proper_periods.iter().all(|&p| p == 2)
            && sig.period_cycles.len() == 1;
        disc.then(|| DiscLayout {
            gamma: sig.proper_periods.len(),
            r: sig.period_cycles[0].len(),
        })
    }
}

/// Generator layout of `(γ; −; [n_1, ..., n_r])`: glides `d_1..d_γ`, then
/// elliptics `x_1..x_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonOrientableLayout {
    pub gamma: usize,
    pub r: usize,
}

impl NonOrientableLayout {
    pub fn d(&self, j: usize) -> GenId {
        j - 1
    }

    pub fn x(&self, i: usize) -> GenId {
        self.gamma + i - 1
    }

    pub fn rank(&self) -> usize {
        self.gamma + self.r
    }

    pub fn from_signature(sig: &NecSignature) -> Option<Self> {
        (!sig.orientable && sig.period_cycles.is_empty() && sig.genus >= 1).then_some(
            NonOrientableLayout {
                gamma: sig.genus as usize,
                r: sig.proper_periods.len(),
            },
        )
    }
}

/// Canonical presentation for the disc family or the non-orientable
/// family without period cycles.
pub fn canonical_presentation(sig: &NecSignature) -> Result<Presentation, PresentationError> {
    if let Some(layout) = DiscLayout::from_signature(sig) {
        return Ok(disc_presentation(layout, &sig.period_cycles[0]));
    }
    if let Some(layout) = NonOrientableLayout::from_signature(sig) {
        return Ok(non_orientable_presentation(layout, &sig.proper_periods));
    }
    Err(PresentationError::UnsupportedFamily(sig.to_string()))
}

fn disc_presentation(layout: DiscLayout, links: &[u32]) -> Presentation {
    let DiscLayout { gamma, r } = layout;
    let mut generators = Vec::with_capacity(layout.rank());
    for j in 1..=gamma {
        generators.push(Generator {
            name: format!("x{}", subscript(j)),
            kind: GeneratorKind::Elliptic(2),
        });
    }
    generators.push(Generator {
        name: "e".into(),
        kind: GeneratorKind::Connector,
    });
    for j in 1..=r + 1 {
        generators.push(Generator {
            name: format!("τ{}", subscript(j)),
            kind: GeneratorKind::Reflection,
        });
    }

    let mut relators = Vec::new();
    let mut torsion = Vec::new();
    for j in 1..=gamma {
        relators.push(Word::gen(layout.x(j)).pow(2));
        torsion.push(TorsionWord {
            word: Word::gen(layout.x(j)),
            order: 2,
        });
    }
    for j in 1..=r + 1 {
        relators.push(Word::gen(layout.tau(j)).pow(2));
        torsion.push(TorsionWord {
            word: Word::gen(layout.tau(j)),
            order: 2,
        });
    }
    // e⁻¹ τ_{r+1} e τ_1⁻¹
    relators.push(Word::from_letters(vec![
        Letter::new(layout.e(), true),
        Letter::new(layout.tau(r + 1), false),
        Letter::new(layout.e(), false),
        Letter::new(layout.tau(1), true),
    ]));
    // x_γ ⋯ x_1 e
    let mut long: Vec<Letter> = (1..=gamma)
        .rev()
        .map(|j| Letter::new(layout.x(j), false))
        .collect();
    long.push(Letter::new(layout.e(), false));
    relators.push(Word::from_letters(long));
    for (k, &n) in links.iter().enumerate() {
        let link = Word::from_letters(vec![
            Letter::new(layout.tau(k + 1), false),
            Letter::new(layout.tau(k + 2), false),
        ]);
        relators.push(link.pow(n));
        torsion.push(TorsionWord {
            word: link,
            order: n,
        });
    }
    Presentation {
        generators,
        relators,
        torsion,
    }
}

fn non_orientable_presentation(layout: NonOrientableLayout, periods: &[u32]) -> Presentation {
    let NonOrientableLayout { gamma, r } = layout;
    let mut generators = Vec::with_capacity(layout.rank());
    for j in 1..=gamma {
        generators.push(Generator {
            name: format!("d{}", subscript(j)),
            kind: GeneratorKind::Glide,
        });
    }
    for (i, &n) in periods.iter().enumerate() {
        generators.push(Generator {
            name: format!("x{}", subscript(i + 1)),
            kind: GeneratorKind::Elliptic(n),
        });
    }
    let mut relators = Vec::new();
    let mut torsion = Vec::new();
    for (i, &n) in periods.iter().enumerate() {
        relators.push(Word::gen(layout.x(i + 1)).pow(n));
        torsion.push(TorsionWord {
            word: Word::gen(layout.x(i + 1)),
            order: n,
        });
    }
    // x_1 ⋯ x_r d_1² ⋯ d_γ²
    let mut long: Vec<Letter> = (1..=r).map(|i| Letter::new(layout.x(i), false)).collect();
    for j in 1..=gamma {
        long.push(Letter::new(layout.d(j), false));
        long.push(Letter::new(layout.d(j), false));
    }
    relators.push(Word::from_letters(long));
    Presentation {
        generators,
        relators,
        torsion,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomCheck {
    Valid,
    Failing { relator: usize, value: GroupElement },
    WrongRank { expected: usize, found: usize },
}

impl HomCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, HomCheck::Valid)
    }
}

/// Evaluates every relator; the first one with a nontrivial image is reported.
pub fn check_homomorphism(p: &Presentation, hom: &FiniteHom) -> HomCheck {
    if hom.rank() != p.rank() {
        return HomCheck::WrongRank {
            expected: p.rank(),
            found: hom.rank(),
        };
    }
    for (i, r) in p.relators().iter().enumerate() {
        let value = hom.evaluate(r);
        if !value.is_identity() {
            return HomCheck::Failing { relator: i, value };
        }
    }
    HomCheck::Valid
}

const MAX_REWRITE_STEPS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelatorVerdict {
    /// The substituted word is trivial in the base group. `relators_used`
    /// lists base relator indices consumed by the rewriting, in order.
    Certified {
        normalized: Word,
        relators_used: Vec<usize>,
    },
    Unresolved {
        residual: Word,
    },
}

impl RelatorVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, RelatorVerdict::Certified { .. })
    }
}

/// Substitutes each subgroup symbol by its word in `base`'s generators and
/// tries to rewrite the result to the identity: free and involution
/// reduction, elimination of a connector generator through a relator that
/// contains it once, then length-decreasing replacements using cyclic
/// rotations of the remaining relators and their inverses.
pub fn verify_derived_relator(
    base: &Presentation,
    relator: &Word,
    substitution: &[Word],
) -> RelatorVerdict {
    let mut word = base.involution_reduce(&relator.substitute(substitution));
    let mut pool_relators: Vec<(usize, Word)> =
        base.relators().iter().cloned().enumerate().collect();

    if let Some((connector, source)) = find_connector(base) {
        let replacement = solve_for(&base.relators()[source], connector);
        let mut images: Vec<Word> = (0..base.rank()).map(Word::gen).collect();
        images[connector] = replacement;
        word = word.substitute(&images);
        pool_relators = pool_relators
            .into_iter()
            .filter(|(i, _)| *i != source)
            .map(|(i, r)| (i, r.substitute(&images)))
            .collect();
    }
    let normalized = base.cyclic_involution_reduce(&word);

    let mut pool: Vec<(usize, Vec<Letter>)> = Vec::new();
    for (i, r) in &pool_relators {
        for w in [r.clone(), r.inverse()] {
            let w = base.cyclic_involution_reduce(&w);
            if w.is_empty() {
                continue;
            }
            for rot in w.rotations() {
                pool.push((*i, rot.into_letters()));
            }
        }
    }

    let mut current = normalized.clone();
    let mut used = Vec::new();
    for _ in 0..MAX_REWRITE_STEPS {
        if current.is_empty() {
            return RelatorVerdict::Certified {
                normalized,
                relators_used: used,
            };
        }
        match dehn_step(base, &current, &pool) {
            Some((next, idx)) => {
                used.push(idx);
                current = next;
            }
            None => break,
        }
    }
    RelatorVerdict::Unresolved { residual: current }
}

fn find_connector(base: &Presentation) -> Option<(GenId, usize)> {
    base.generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.kind == GeneratorKind::Connector)
        .find_map(|(c, _)| {
            base.relators()
                .iter()
                .position(|r| r.letters().iter().filter(|l| l.gen == c).count() == 1)
                .map(|j| (c, j))
        })
}

/// For `relator = A c^{±1} B`, the word equal to `c`.
fn solve_for(relator: &Word, gen: GenId) -> Word {
    let letters = relator.letters();
    let pos = letters
        .iter()
        .position(|l| l.gen == gen)
        .expect("generator occurs in relator");
    let a = Word::from_letters(letters[..pos].to_vec());
    let b = Word::from_letters(letters[pos + 1..].to_vec());
    if letters[pos].inverse {
        // A c⁻¹ B = 1  =>  c = B A
        &b * &a
    } else {
        // A c B = 1  =>  c = A⁻¹ B⁻¹
        &a.inverse() * &b.inverse()
    }
}

/// Replaces more than half of some pool word, read cyclically in `w`, by the
/// inverse of the rest. Returns the shorter word and the relator index used.
fn dehn_step(
    base: &Presentation,
    w: &Word,
    pool: &[(usize, Vec<Letter>)],
) -> Option<(Word, usize)> {
    let letters = w.letters();
    let n = letters.len();
    for start in 0..n {
        let rotated: Vec<Letter> = letters[start..]
            .iter()
            .chain(&letters[..start])
            .copied()
            .collect();
        for (idx, piece) in pool {
            let common = rotated
                .iter()
                .zip(piece)
                .take_while(|(a, b)| a == b)
                .count();
            if 2 * common > piece.len() {
                let rest = Word::from_letters(piece[common..].to_vec()).inverse();
                let tail = Word::from_letters(rotated[common..].to_vec());
                let next = base.cyclic_involution_reduce(&(&rest * &tail));
                if next.len() < n {
                    return Some((next, *idx));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{CyclicElement, FiniteGroup};
    use crate::signature::quotient_disc_signature;

    fn k(gamma: u32, periods: &[u32]) -> (Presentation, DiscLayout) {
        let sig = quotient_disc_signature(gamma, periods).unwrap();
        let layout = DiscLayout::from_signature(&sig).unwrap();
        (canonical_presentation(&sig).unwrap(), layout)
    }

    fn render_all(p: &Presentation) -> Vec<String> {
        p.relators().iter().map(|r| p.render(r)).collect()
    }

    #[test]
    fn disc_family_relators() {
        let (p, _) = k(1, &[2, 2, 2]);
        assert_eq!(p.names(), vec!["x₁", "e", "τ₁", "τ₂", "τ₃", "τ₄"]);
        assert_eq!(
            render_all(&p),
            vec![
                "x₁x₁",
                "τ₁τ₁",
                "τ₂τ₂",
                "τ₃τ₃",
                "τ₄τ₄",
                "e⁻¹τ₄eτ₁⁻¹",
                "x₁e",
                "τ₁τ₂τ₁τ₂",
                "τ₂τ₃τ₂τ₃",
                "τ₃τ₄τ₃τ₄"
            ]
        );
        p.check_well_formed().unwrap();
    }

    #[test]
    fn non_orientable_family_relators() {
        let sig = NecSignature::non_orientable(1, vec![2, 2, 2]).unwrap();
        let p = canonical_presentation(&sig).unwrap();
        assert_eq!(p.names(), vec!["d₁", "x₁", "x₂", "x₃"]);
        assert_eq!(render_all(&p), vec!["x₁x₁", "x₂x₂", "x₃x₃", "x₁x₂x₃d₁d₁"]);
        assert_eq!(p.relators().len(), 3 + 1);
    }

    #[test]
    fn degenerate_disc_without_corners() {
        let (p, _) = k(2, &[]);
        let rels = render_all(&p);
        assert!(rels.contains(&"x₂x₁e".to_string()));
        assert!(rels.contains(&"e⁻¹τ₁eτ₁⁻¹".to_string()));
        assert_eq!(
            p.generators()
                .iter()
                .filter(|g| g.kind == GeneratorKind::Reflection)
                .count(),
            1
        );
    }

    #[test]
    fn unsupported_family() {
        let sig = NecSignature::new(true, 2, vec![], vec![]).unwrap();
        assert!(matches!(
            canonical_presentation(&sig),
            Err(PresentationError::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn undeclared_generator_rejected() {
        let gens = vec![Generator {
            name: "a".into(),
            kind: GeneratorKind::Undeclared,
        }];
        assert!(Presentation::new(gens, vec![Word::gen(1)]).is_err());
    }

    #[test]
    fn theta_checks() {
        let a = 1;
        let (p, layout) = k(2, &[3]);
        let mut images = vec![a; layout.rank()];
        images[layout.e()] = 0;
        assert!(check_homomorphism(&p, &FiniteHom::cyclic(2, &images)).is_valid());

        let (p, layout) = k(1, &[2, 2, 2]);
        let mut images = vec![a; layout.rank()];
        images[layout.e()] = 0;
        let check = check_homomorphism(&p, &FiniteHom::cyclic(2, &images));
        let HomCheck::Failing { relator, value } = check else {
            panic!("printed θ must fail for odd γ");
        };
        assert_eq!(p.render(&p.relators()[relator]), "x₁e");
        assert_eq!(value, GroupElement::Cyclic(CyclicElement::new(1, 2)));

        let trivial = FiniteHom::trivial(FiniteGroup::Dihedral(3), layout.rank());
        assert!(check_homomorphism(&p, &trivial).is_valid());
    }

    #[test]
    fn involution_reduction() {
        let (p, layout) = k(1, &[3]);
        let t1 = layout.tau(1);
        let t2 = layout.tau(2);
        let w = Word::from_letters(vec![
            Letter::new(t2, false),
            Letter::new(t1, true),
            Letter::new(t1, false),
            Letter::new(t2, true),
        ]);
        assert!(p.involution_reduce(&w).is_empty());
        let e = layout.e();
        let w = Word::from_letters(vec![Letter::new(e, false), Letter::new(e, false)]);
        assert_eq!(p.involution_reduce(&w).len(), 2);
    }

    #[test]
    fn derived_relators_certified() {
        let (p, layout) = k(2, &[3, 4]);
        // symbols: c1 = τ₁τ₂, c2 = τ₁τ₃
        let c1 = Word::from_letters(vec![
            Letter::new(layout.tau(1), false),
            Letter::new(layout.tau(2), false),
        ]);
        let c2 = Word::from_letters(vec![
            Letter::new(layout.tau(1), false),
            Letter::new(layout.tau(3), false),
        ]);
        let subst = vec![c1, c2];
        assert!(verify_derived_relator(&p, &Word::gen(0).pow(3), &subst).is_certified());
        let w = Word::from_letters(vec![Letter::new(0, true), Letter::new(1, false)]).pow(4);
        assert!(verify_derived_relator(&p, &w, &subst).is_certified());
        // c1² is not trivial
        let verdict = verify_derived_relator(&p, &Word::gen(0).pow(2), &subst);
        assert!(!verdict.is_certified());
    }

    #[test]
    fn connector_elimination() {
        let (p, layout) = k(2, &[3]);
        // δ₁⁻¹δ₂e₁⁻¹ with δ_j = τ₁x_j and e₁ = e
        let d1 = Word::from_letters(vec![
            Letter::new(layout.tau(1), false),
            Letter::new(layout.x(1), false),
        ]);
        let d2 = Word::from_letters(vec![
            Letter::new(layout.tau(1), false),
            Letter::new(layout.x(2), false),
        ]);
        let e1 = Word::gen(layout.e());
        let w = Word::from_signed(&[-1, 2, -3]);
        assert!(verify_derived_relator(&p, &w, &[d1, d2, e1]).is_certified());
    }
}
