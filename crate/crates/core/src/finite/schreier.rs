//! Reidemeister–Schreier presentations of kernels of maps to finite groups.

use std::collections::HashMap;

use thiserror::Error;

use super::coset::CosetTable;
use crate::presentation::{Generator, Presentation, TorsionWord};
use crate::signature::{word_orientation, GeneratorKind};
use crate::word::{free_reduce, GenId, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("word does not lie in the subgroup (ends at coset {0})")]
    NotInSubgroup(usize),
}

/// Schreier generator `u_i · g · rep(u_i g)⁻¹` for coset `i` and generator `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGenerator {
    pub coset: usize,
    pub gen: GenId,
    /// The generator as a freely reduced word in the base group.
    pub word: Word,
}

#[derive(Debug, Clone)]
pub struct SubgroupPresentation {
    presentation: Presentation,
    schreier: Vec<SchreierGenerator>,
    lookup: HashMap<(usize, GenId), usize>,
    table: CosetTable,
}

/// Kernel presentation from a coset table. Generators on transversal tree
/// edges are dropped; relators are the rewritten conjugates `u·R·u⁻¹`,
/// freely reduced, with empty ones removed.
///
/// Generator names are the base words with inverse involution letters written
/// positively. Kinds record the orientation class only: orientation-reversing
/// generators become glides and the rest connectors. If the base kinds are
/// undeclared, so are these.
pub fn reidemeister_schreier(base: &Presentation, table: &CosetTable) -> SubgroupPresentation {
    let mut schreier = Vec::new();
    let mut lookup = HashMap::new();
    for coset in 0..table.len() {
        for gen in 0..base.rank() {
            if table.is_tree_edge(coset, gen) {
                continue;
            }
            let target = table.act(coset, Letter::new(gen, false));
            let mut word = table.representative(coset).clone();
            word.push(Letter::new(gen, false));
            let word = free_reduce(&(&word * &table.representative(target).inverse()));
            lookup.insert((coset, gen), schreier.len());
            schreier.push(SchreierGenerator { coset, gen, word });
        }
    }

    let mut used_names: HashMap<String, usize> = HashMap::new();
    let generators = schreier
        .iter()
        .map(|s| {
            let mut name = base.render(&display_form(base, &s.word));
            let count = used_names.entry(name.clone()).or_insert(0);
            *count += 1;
            if *count > 1 {
                name = format!("{name}#{count}");
            }
            let kind = match word_orientation(base, &s.word) {
                Ok(-1) => GeneratorKind::Glide,
                Ok(_) => GeneratorKind::Connector,
                Err(_) => GeneratorKind::Undeclared,
            };
            Generator { name, kind }
        })
        .collect();

    let mut sub = SubgroupPresentation {
        presentation: Presentation::new(generators, Vec::new()).expect("no relators yet"),
        schreier,
        lookup,
        table: table.clone(),
    };
    let mut relators = Vec::new();
    for coset in 0..table.len() {
        for r in base.relators() {
            let rewritten = free_reduce(
                &sub.rewrite_from(coset, r)
                    .expect("relators fix every coset")
                    .0,
            );
            if !rewritten.is_empty() {
                relators.push(rewritten);
            }
        }
    }
    let generators = sub.presentation.generators().to_vec();
    sub.presentation =
        Presentation::new(generators, relators).expect("relators use Schreier generators");
    sub
}

fn display_form(base: &Presentation, w: &Word) -> Word {
    Word::from_letters(
        w.letters()
            .iter()
            .map(|&l| {
                if base.kind(l.gen).is_involution() {
                    Letter::new(l.gen, false)
                } else {
                    l
                }
            })
            .collect(),
    )
}

impl SubgroupPresentation {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Attaches designated finite-order words to the subgroup presentation.
    pub fn set_torsion(&mut self, torsion: Vec<TorsionWord>) {
        self.presentation = self.presentation.clone().with_torsion(torsion);
    }

    pub fn schreier_generators(&self) -> &[SchreierGenerator] {
        &self.schreier
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn index(&self) -> usize {
        self.table.len()
    }

    /// Subgroup generator for the edge `(coset, gen)`, unless it is a tree edge.
    pub fn generator_for(&self, coset: usize, gen: GenId) -> Option<GenId> {
        self.lookup.get(&(coset, gen)).copied()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.table.trace(0, w) == 0
    }

    /// Expresses a base word lying in the subgroup in Schreier generators.
    pub fn rewrite(&self, w: &Word) -> Result<Word, RewriteError> {
        let (word, end) = self.rewrite_from(0, w)?;
        if end != 0 {
            return Err(RewriteError::NotInSubgroup(end));
        }
        Ok(word)
    }

    fn rewrite_from(&self, start: usize, w: &Word) -> Result<(Word, usize), RewriteError> {
        let mut out = Word::identity();
        let mut coset = start;
        for &l in w.letters() {
            if l.inverse {
                let prev = self.table.act(coset, l);
                if let Some(s) = self.generator_for(prev, l.gen) {
                    out.push(Letter::new(s, true));
                }
                coset = prev;
            } else {
                if let Some(s) = self.generator_for(coset, l.gen) {
                    out.push(Letter::new(s, false));
                }
                coset = self.table.act(coset, l);
            }
        }
        if coset != start {
            return Err(RewriteError::NotInSubgroup(coset));
        }
        Ok((out, coset))
    }
}
