use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use super::group::GroupElement;
use super::hom::FiniteHom;
use crate::presentation::{check_homomorphism, HomCheck, Presentation};
use crate::word::{GenId, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("map is not a homomorphism: {0:?}")]
    InvalidHom(HomCheck),
}

/// Right action of the generators on the cosets of a kernel, realized on the
/// image elements of the map. Coset 0 is the kernel itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    cosets: Vec<GroupElement>,
    /// `columns[g][i]` is the coset reached from `i` by generator `g`.
    columns: Vec<Vec<usize>>,
    inverse_columns: Vec<Vec<usize>>,
    /// Schreier transversal: representative word of each coset.
    representatives: Vec<Word>,
    /// Tree edge `(coset, generator)` that first reached each coset.
    parents: Vec<Option<(usize, GenId)>>,
}

pub fn cayley_coset_table(p: &Presentation, hom: &FiniteHom) -> Result<CosetTable, CosetError> {
    cayley_coset_table_with_priority(p, hom, &[])
}

/// Breadth-first transversal from the identity coset. Generators listed in
/// `priority` are tried first, the rest in presentation order.
pub fn cayley_coset_table_with_priority(
    p: &Presentation,
    hom: &FiniteHom,
    priority: &[GenId],
) -> Result<CosetTable, CosetError> {
    let check = check_homomorphism(p, hom);
    if !check.is_valid() {
        return Err(CosetError::InvalidHom(check));
    }
    let mut order: Vec<GenId> = priority.to_vec();
    order.extend((0..p.rank()).filter(|g| !priority.contains(g)));

    let identity = hom.target().identity();
    let mut index: HashMap<GroupElement, usize> = HashMap::new();
    let mut cosets = vec![identity.clone()];
    let mut representatives = vec![Word::identity()];
    let mut parents = vec![None];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for &g in &order {
            let next = cosets[i]
                .op(&hom.images()[g])
                .expect("hom images lie in the target");
            if !index.contains_key(&next) {
                let j = cosets.len();
                index.insert(next.clone(), j);
                cosets.push(next);
                let mut rep = representatives[i].clone();
                rep.push(Letter::new(g, false));
                representatives.push(rep);
                parents.push(Some((i, g)));
                queue.push_back(j);
            }
        }
    }

    let mut columns = vec![vec![0; cosets.len()]; p.rank()];
    let mut inverse_columns = vec![vec![0; cosets.len()]; p.rank()];
    for g in 0..p.rank() {
        for (i, h) in cosets.iter().enumerate() {
            let j = index[&h
                .op(&hom.images()[g])
                .expect("hom images lie in the target")];
            columns[g][i] = j;
            inverse_columns[g][j] = i;
        }
    }
    Ok(CosetTable {
        cosets,
        columns,
        inverse_columns,
        representatives,
        parents,
    })
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn coset_element(&self, i: usize) -> &GroupElement {
        &self.cosets[i]
    }

    pub fn column(&self, g: GenId) -> &[usize] {
        &self.columns[g]
    }

    pub fn representative(&self, i: usize) -> &Word {
        &self.representatives[i]
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        if l.inverse {
            self.inverse_columns[l.gen][coset]
        } else {
            self.columns[l.gen][coset]
        }
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    pub fn is_tree_edge(&self, coset: usize, g: GenId) -> bool {
        let target = self.columns[g][coset];
        self.parents[target] == Some((coset, g))
    }

    /// Number of orbits of the subgroup generated by the given generators.
    pub fn orbit_count(&self, gens: &[GenId]) -> usize {
        let mut seen = vec![false; self.len()];
        let mut orbits = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            orbits += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                for &g in gens {
                    let j = self.columns[g][i];
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        orbits
    }

    /// Cycle decomposition of one generator's column.
    pub fn cycles(&self, g: GenId) -> Vec<Vec<usize>> {
        let col = &self.columns[g];
        let mut seen = vec![false; col.len()];
        let mut out = Vec::new();
        for start in 0..col.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = col[i];
            }
            out.push(cycle);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteGroup;
    use crate::presentation::{canonical_presentation, DiscLayout, Generator};
    use crate::signature::{quotient_disc_signature, GeneratorKind};

    #[test]
    fn theta_table() {
        let sig = quotient_disc_signature(2, &[3]).unwrap();
        let p = canonical_presentation(&sig).unwrap();
        let layout = DiscLayout::from_signature(&sig).unwrap();
        let mut images = vec![1; layout.rank()];
        images[layout.e()] = 0;
        let table = cayley_coset_table(&p, &FiniteHom::cyclic(2, &images)).unwrap();
        assert_eq!(table.len(), 2);
        for j in 1..=2 {
            assert_eq!(table.column(layout.tau(j)), &[1, 0]);
        }
        assert_eq!(table.column(layout.e()), &[0, 1]);
    }

    #[test]
    fn trivial_table() {
        let sig = quotient_disc_signature(1, &[2, 2, 2]).unwrap();
        let p = canonical_presentation(&sig).unwrap();
        let table =
            cayley_coset_table(&p, &FiniteHom::trivial(FiniteGroup::Cyclic(5), p.rank())).unwrap();
        assert_eq!(table.len(), 1);
        for g in 0..p.rank() {
            assert_eq!(table.column(g), &[0]);
        }
    }

    #[test]
    fn priority_controls_transversal() {
        let sig = quotient_disc_signature(2, &[3]).unwrap();
        let p = canonical_presentation(&sig).unwrap();
        let layout = DiscLayout::from_signature(&sig).unwrap();
        let mut images = vec![1; layout.rank()];
        images[layout.e()] = 0;
        let hom = FiniteHom::cyclic(2, &images);
        let default = cayley_coset_table(&p, &hom).unwrap();
        assert_eq!(default.representative(1), &Word::gen(layout.x(1)));
        let tau_first = cayley_coset_table_with_priority(&p, &hom, &[layout.tau(1)]).unwrap();
        assert_eq!(tau_first.representative(1), &Word::gen(layout.tau(1)));
        assert!(tau_first.is_tree_edge(0, layout.tau(1)));
    }

    #[test]
    fn invalid_hom_rejected() {
        let gens = vec![Generator {
            name: "a".into(),
            kind: GeneratorKind::Undeclared,
        }];
        let p = Presentation::new(gens, vec![Word::gen(0).pow(2)]).unwrap();
        assert!(cayley_coset_table(&p, &FiniteHom::cyclic(4, &[1])).is_err());
    }
}
