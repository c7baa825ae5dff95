use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("elements {0} and {1} belong to different groups")]
    Mismatch(String, String),
    #[error("element {element} does not belong to {group}")]
    NotAMember { element: String, group: String },
    #[error("invalid group descriptor: {0}")]
    BadDescriptor(String),
}

/// Residue `k` in `Z/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicElement {
    pub k: u32,
    pub m: u32,
}

impl CyclicElement {
    pub fn new(k: i64, m: u32) -> Self {
        CyclicElement {
            k: k.rem_euclid(m as i64) as u32,
            m,
        }
    }

    pub fn op(self, other: Self) -> Result<Self, GroupError> {
        if self.m != other.m {
            return Err(GroupError::Mismatch(self.to_string(), other.to_string()));
        }
        Ok(CyclicElement::new(self.k as i64 + other.k as i64, self.m))
    }

    pub fn inverse(self) -> Self {
        CyclicElement::new(-(self.k as i64), self.m)
    }

    pub fn order(self) -> u32 {
        self.m / self.k.gcd(&self.m)
    }
}

impl fmt::Display for CyclicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.k)
    }
}

/// `t^flip s^k` in the dihedral group of order `2m`, with `t s t = s⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralElement {
    pub flip: bool,
    pub k: u32,
    pub m: u32,
}

impl DihedralElement {
    pub fn rotation(k: i64, m: u32) -> Self {
        DihedralElement {
            flip: false,
            k: k.rem_euclid(m as i64) as u32,
            m,
        }
    }

    pub fn reflection(k: i64, m: u32) -> Self {
        DihedralElement {
            flip: true,
            k: k.rem_euclid(m as i64) as u32,
            m,
        }
    }

    /// `(t^a s^i)(t^b s^j) = t^(a+b) s^(j + (−1)^b i)`.
    pub fn op(self, other: Self) -> Result<Self, GroupError> {
        if self.m != other.m {
            return Err(GroupError::Mismatch(self.to_string(), other.to_string()));
        }
        let i = self.k as i64;
        let moved = if other.flip { -i } else { i };
        Ok(DihedralElement {
            flip: self.flip ^ other.flip,
            k: (other.k as i64 + moved).rem_euclid(self.m as i64) as u32,
            m: self.m,
        })
    }

    pub fn inverse(self) -> Self {
        if self.flip {
            self
        } else {
            DihedralElement::rotation(-(self.k as i64), self.m)
        }
    }

    pub fn order(self) -> u32 {
        if self.flip {
            2
        } else {
            self.m / self.k.gcd(&self.m)
        }
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = if self.flip { "t" } else { "" };
        match (self.flip, self.k) {
            (false, 0) => write!(f, "1"),
            (_, 0) => write!(f, "{t}"),
            (_, 1) => write!(f, "{t}s"),
            (_, k) => write!(f, "{t}s^{k}"),
        }
    }
}

/// Permutation of `0..N`, composed left to right: `(p·q)(i) = q(p(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || seen[i as usize] {
                return Err(GroupError::BadDescriptor(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: u32) -> Self {
        Permutation((0..n).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn op(&self, other: &Self) -> Result<Self, GroupError> {
        if self.0.len() != other.0.len() {
            return Err(GroupError::Mismatch(self.to_string(), other.to_string()));
        }
        Ok(Permutation(
            self.0.iter().map(|&i| other.apply(i)).collect(),
        ))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn order(&self) -> u32 {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1u32;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            order = order.lcm(&len);
        }
        order
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", body.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    Cyclic(CyclicElement),
    Dihedral(DihedralElement),
    Perm(Permutation),
}

impl GroupElement {
    pub fn op(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        match (self, other) {
            (GroupElement::Cyclic(a), GroupElement::Cyclic(b)) => {
                a.op(*b).map(GroupElement::Cyclic)
            }
            (GroupElement::Dihedral(a), GroupElement::Dihedral(b)) => {
                a.op(*b).map(GroupElement::Dihedral)
            }
            (GroupElement::Perm(a), GroupElement::Perm(b)) => a.op(b).map(GroupElement::Perm),
            _ => Err(GroupError::Mismatch(self.to_string(), other.to_string())),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Cyclic(a) => GroupElement::Cyclic(a.inverse()),
            GroupElement::Dihedral(a) => GroupElement::Dihedral(a.inverse()),
            GroupElement::Perm(a) => GroupElement::Perm(a.inverse()),
        }
    }

    pub fn order(&self) -> u32 {
        match self {
            GroupElement::Cyclic(a) => a.order(),
            GroupElement::Dihedral(a) => a.order(),
            GroupElement::Perm(a) => a.order(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.order() == 1
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Cyclic(a) => a.fmt(f),
            GroupElement::Dihedral(a) => a.fmt(f),
            GroupElement::Perm(a) => a.fmt(f),
        }
    }
}

/// Target group of a finite homomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteGroup {
    /// `C_m`
    Cyclic(u32),
    /// `D_m`, of order `2m`
    Dihedral(u32),
    /// `Sym(N)`
    Symmetric(u32),
}

impl FiniteGroup {
    pub fn identity(&self) -> GroupElement {
        match *self {
            FiniteGroup::Cyclic(m) => GroupElement::Cyclic(CyclicElement::new(0, m)),
            FiniteGroup::Dihedral(m) => GroupElement::Dihedral(DihedralElement::rotation(0, m)),
            FiniteGroup::Symmetric(n) => GroupElement::Perm(Permutation::identity(n)),
        }
    }

    pub fn order(&self) -> u64 {
        match *self {
            FiniteGroup::Cyclic(m) => m as u64,
            FiniteGroup::Dihedral(m) => 2 * m as u64,
            FiniteGroup::Symmetric(n) => (1..=n as u64).product(),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (FiniteGroup::Cyclic(m), GroupElement::Cyclic(a)) => a.m == *m && a.k < *m,
            (FiniteGroup::Dihedral(m), GroupElement::Dihedral(a)) => a.m == *m && a.k < *m,
            (FiniteGroup::Symmetric(n), GroupElement::Perm(p)) => p.degree() == *n,
            _ => false,
        }
    }

    /// Every element, in a fixed order. Not offered for symmetric groups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        match *self {
            FiniteGroup::Cyclic(m) => Some(
                (0..m as i64)
                    .map(|k| GroupElement::Cyclic(CyclicElement::new(k, m)))
                    .collect(),
            ),
            FiniteGroup::Dihedral(m) => Some(
                (0..m as i64)
                    .map(|k| GroupElement::Dihedral(DihedralElement::rotation(k, m)))
                    .chain(
                        (0..m as i64)
                            .map(|k| GroupElement::Dihedral(DihedralElement::reflection(k, m))),
                    )
                    .collect(),
            ),
            FiniteGroup::Symmetric(_) => None,
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteGroup::Cyclic(m) => write!(f, "C{}", crate::word::subscript(*m as usize)),
            FiniteGroup::Dihedral(m) => write!(f, "D{}", crate::word::subscript(*m as usize)),
            FiniteGroup::Symmetric(n) => write!(f, "Sym({n})"),
        }
    }
}

/// Closure of `generators` under multiplication, starting from `identity`.
pub fn generated_subgroup(
    identity: &GroupElement,
    generators: &[GroupElement],
) -> Result<BTreeSet<GroupElement>, GroupError> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity.clone());
    while let Some(h) = queue.pop_front() {
        for g in generators {
            let next = h.op(g)?;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}
