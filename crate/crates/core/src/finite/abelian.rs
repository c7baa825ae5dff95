use std::fmt;

use serde::{Deserialize, Serialize};

use super::smith::{smith_normal_form, IntMatrix};
use crate::presentation::Presentation;
use crate::word::Word;

/// Abelianization of a finite presentation, `Z^rank / ⟨relator exponent rows⟩`,
/// read off a Smith normal form `U·M·V = D`.
#[derive(Debug, Clone)]
pub struct Abelianization {
    /// Modulus of each retained coordinate; 0 means a free `Z` factor.
    /// Coordinates with modulus 1 are dropped.
    moduli: Vec<i64>,
    /// `coordinates[g]` is the class of generator `g`.
    coordinates: Vec<Vec<i64>>,
}

/// Element of the abelianization, reduced coordinatewise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianClass(pub Vec<i64>);

impl AbelianClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for AbelianClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

pub fn abelianization(p: &Presentation) -> Abelianization {
    let rank = p.rank();
    let rows: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(rank)).collect();
    let m = if rows.is_empty() {
        IntMatrix::zeros(0, rank)
    } else {
        IntMatrix::from_rows(&rows)
    };
    let snf = smith_normal_form(&m);
    let diagonal = snf.diagonal();
    let modulus_of = |i: usize| diagonal.get(i).copied().unwrap_or(0);
    let kept: Vec<usize> = (0..rank).filter(|&i| modulus_of(i) != 1).collect();
    let moduli: Vec<i64> = kept.iter().map(|&i| modulus_of(i)).collect();
    let coordinates = (0..rank)
        .map(|g| {
            kept.iter()
                .zip(&moduli)
                .map(|(&i, &d)| reduce(snf.v[(g, i)], d))
                .collect()
        })
        .collect();
    Abelianization {
        moduli,
        coordinates,
    }
}

fn reduce(c: i64, d: i64) -> i64 {
    if d == 0 {
        c
    } else {
        c.rem_euclid(d)
    }
}

impl Abelianization {
    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|&&d| d == 0).count()
    }

    /// Torsion invariant factors, each dividing the next.
    pub fn torsion(&self) -> Vec<i64> {
        self.moduli.iter().copied().filter(|&d| d != 0).collect()
    }

    pub fn generator_class(&self, g: usize) -> AbelianClass {
        AbelianClass(self.coordinates[g].clone())
    }

    pub fn class_of(&self, w: &Word) -> AbelianClass {
        let mut acc = vec![0i64; self.moduli.len()];
        for l in w.letters() {
            for (a, c) in acc.iter_mut().zip(&self.coordinates[l.gen]) {
                *a += l.exponent() * c;
            }
        }
        self.normalize(acc)
    }

    pub fn negate(&self, c: &AbelianClass) -> AbelianClass {
        self.normalize(c.0.iter().map(|v| -v).collect())
    }

    pub fn add(&self, a: &AbelianClass, b: &AbelianClass) -> AbelianClass {
        self.normalize(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn normalize(&self, v: Vec<i64>) -> AbelianClass {
        AbelianClass(
            v.into_iter()
                .zip(&self.moduli)
                .map(|(c, &d)| reduce(c, d))
                .collect(),
        )
    }
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            n => parts.push(format!("Z^{n}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Generator;
    use crate::signature::{GeneratorKind, NecSignature};

    fn free(rank: usize, relators: Vec<Word>) -> Presentation {
        let gens = (0..rank)
            .map(|i| Generator {
                name: format!("a{i}"),
                kind: GeneratorKind::Undeclared,
            })
            .collect();
        Presentation::new(gens, relators).unwrap()
    }

    #[test]
    fn cyclic_of_order_two() {
        let ab = abelianization(&free(1, vec![Word::gen(0).pow(2)]));
        assert_eq!(ab.torsion(), vec![2]);
        assert_eq!(ab.free_rank(), 0);
        assert!(!ab.generator_class(0).is_zero());
        assert!(ab.class_of(&Word::gen(0).pow(2)).is_zero());
        assert_eq!(ab.to_string(), "Z/2");
    }

    #[test]
    fn free_rank_two() {
        let ab = abelianization(&free(2, vec![]));
        assert_eq!(ab.free_rank(), 2);
        assert!(ab.torsion().is_empty());
        let w = Word::from_signed(&[1, 2, -1, -2]);
        assert!(ab.class_of(&w).is_zero());
        assert_eq!(ab.to_string(), "Z^2");
    }

    #[test]
    fn non_orientable_orbifold_group() {
        // (1;−;[2,2,2]): ⟨d, x1, x2, x3 | x_i², x1x2x3d²⟩ has abelianization Z/2 ⊕ Z/2 ⊕ Z/4
        let sig = NecSignature::non_orientable(1, vec![2, 2, 2]).unwrap();
        let p = crate::presentation::canonical_presentation(&sig).unwrap();
        let ab = abelianization(&p);
        assert_eq!(ab.torsion(), vec![2, 2, 4]);
        assert_eq!(ab.free_rank(), 0);
        for r in p.relators() {
            assert!(ab.class_of(r).is_zero());
        }
    }
}
