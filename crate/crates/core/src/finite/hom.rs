use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::group::{CyclicElement, DihedralElement, FiniteGroup, GroupElement, GroupError};
use crate::word::Word;

/// Homomorphism from a finitely presented group to a finite group, given by
/// the images of the generators in presentation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteHom {
    target: FiniteGroup,
    images: Vec<GroupElement>,
}

impl FiniteHom {
    pub fn new(target: FiniteGroup, images: Vec<GroupElement>) -> Result<Self, GroupError> {
        for g in &images {
            if !target.contains(g) {
                return Err(GroupError::NotAMember {
                    element: g.to_string(),
                    group: target.to_string(),
                });
            }
        }
        Ok(FiniteHom { target, images })
    }

    /// Residues taken modulo `m`.
    pub fn cyclic(m: u32, residues: &[i64]) -> Self {
        FiniteHom {
            target: FiniteGroup::Cyclic(m),
            images: residues
                .iter()
                .map(|&k| GroupElement::Cyclic(CyclicElement::new(k, m)))
                .collect(),
        }
    }

    pub fn dihedral(m: u32, images: Vec<DihedralElement>) -> Result<Self, GroupError> {
        Self::new(
            FiniteGroup::Dihedral(m),
            images.into_iter().map(GroupElement::Dihedral).collect(),
        )
    }

    pub fn trivial(target: FiniteGroup, rank: usize) -> Self {
        FiniteHom {
            images: vec![target.identity(); rank],
            target,
        }
    }

    pub fn target(&self) -> FiniteGroup {
        self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Residues of a hom into a cyclic group; `None` for other targets.
    pub fn residues(&self) -> Option<Vec<u32>> {
        self.images
            .iter()
            .map(|g| match g {
                GroupElement::Cyclic(c) => Some(c.k),
                _ => None,
            })
            .collect()
    }

    pub fn evaluate(&self, w: &Word) -> GroupElement {
        let mut acc = self.target.identity();
        for l in w.letters() {
            let img = &self.images[l.gen];
            let factor = if l.inverse {
                img.inverse()
            } else {
                img.clone()
            };
            acc = acc
                .op(&factor)
                .expect("images are members of the target group");
        }
        acc
    }

    pub fn image(&self) -> BTreeSet<GroupElement> {
        super::group::generated_subgroup(&self.target.identity(), &self.images)
            .expect("images are members of the target group")
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() as u64 == self.target.order()
    }

    /// Whether a sign character on the generators factors through this map,
    /// i.e. is trivial on its kernel. The character must itself respect the
    /// domain relators.
    ///
    /// Labels image elements along a breadth-first spanning tree and checks
    /// every remaining edge. Returns the first inconsistent edge `h --g-->`.
    pub fn character_obstruction(&self, character: &[i8]) -> Option<(GroupElement, usize)> {
        let identity = self.target.identity();
        let mut sign: HashMap<GroupElement, i8> = HashMap::new();
        let mut queue = VecDeque::new();
        sign.insert(identity.clone(), 1);
        queue.push_back(identity);
        while let Some(h) = queue.pop_front() {
            let s = sign[&h];
            for (g, img) in self.images.iter().enumerate() {
                let next = h.op(img).expect("images are members of the target group");
                let expected = s * character[g];
                match sign.get(&next) {
                    Some(&existing) if existing != expected => return Some((h, g)),
                    Some(_) => {}
                    None => {
                        sign.insert(next.clone(), expected);
                        queue.push_back(next);
                    }
                }
            }
        }
        None
    }

    pub fn character_factors(&self, character: &[i8]) -> bool {
        self.character_obstruction(character).is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjectivity() {
        assert!(!FiniteHom::cyclic(4, &[2]).is_surjective());
        assert!(FiniteHom::cyclic(4, &[1]).is_surjective());
        assert!(!FiniteHom::cyclic(12, &[4, 6]).is_surjective());
        assert!(FiniteHom::cyclic(12, &[4, 3]).is_surjective());
    }

    #[test]
    fn parity_character() {
        // generator 0 reversing, generator 1 preserving
        let chi = [-1, 1];
        assert!(FiniteHom::cyclic(4, &[1, 2]).character_factors(&chi));
        assert!(!FiniteHom::cyclic(4, &[2, 2]).character_factors(&chi));
        assert!(!FiniteHom::cyclic(4, &[1, 1]).character_factors(&chi));
    }

    #[test]
    fn membership_checked() {
        let bad = GroupElement::Cyclic(CyclicElement::new(1, 3));
        assert!(FiniteHom::new(FiniteGroup::Cyclic(4), vec![bad]).is_err());
    }
}
