use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use super::action::ActionDatum;
use super::delta_hat::DeltaHat;
use crate::finite::FiniteHom;
use crate::signature::GeneratorKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("periods of Δ̂ {found:?} differ from the action periods {expected:?}")]
    PeriodMismatch { found: Vec<u32>, expected: Vec<u32> },
    #[error("no epimorphism Δ̂ → C{modulus} matches the branch data")]
    NotFound { modulus: u32 },
}

/// A surface-kernel epimorphism `η: Δ̂ → C_2n` realizing the branch data of `ρ`
/// up to the automorphism `k ↦ unit·k` and a reordering of equal periods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eta {
    pub hom: FiniteHom,
    pub unit: u32,
    /// `assignment[k]` is the index `i` with `η(torsion_k) = unit·ρ(x_i)`.
    pub assignment: Vec<usize>,
    pub torsion_images: Vec<u32>,
}

/// Searches units of `Z/2n` in increasing order, then order-respecting
/// assignments of the `ρ(x_i)` to the torsion words of `Δ̂` in lexicographic
/// order, then generator images by depth-first search. Glides take odd
/// values and the other generators even ones; every relator must vanish and
/// the images must generate `Z/2n`. The first solution found is returned.
pub fn construct_eta(dh: &DeltaHat, datum: &ActionDatum) -> Result<Eta, EtaError> {
    let m = datum.order() as i64;
    let p = dh.subgroup.presentation();
    let torsion = p.torsion();
    let orders: Vec<u32> = torsion.iter().map(|t| t.order).collect();
    if orders != datum.periods {
        return Err(EtaError::PeriodMismatch {
            found: orders,
            expected: datum.periods.clone(),
        });
    }
    let rank = p.rank();
    let parity: Vec<i64> = (0..rank)
        .map(|g| i64::from(p.kind(g) == GeneratorKind::Glide))
        .collect();
    let mut base_equations: Vec<Equation> = p
        .relators()
        .iter()
        .map(|r| Equation::new(&r.exponent_sums(rank), 0, m))
        .collect();
    base_equations.retain(|e| !e.terms.is_empty());
    let torsion_rows: Vec<Vec<i64>> = torsion.iter().map(|t| t.word.exponent_sums(rank)).collect();

    let units: Vec<i64> = (1..m).filter(|u| u.gcd(&m) == 1).collect();
    for &unit in &units {
        let targets: Vec<i64> = datum
            .rho
            .x
            .iter()
            .map(|&v| (v as i64 * unit).rem_euclid(m))
            .collect();
        let mut found = None;
        assignments(&datum.periods, &targets, &mut |assignment| {
            let mut eqs = base_equations.clone();
            for (row, &i) in torsion_rows.iter().zip(assignment) {
                eqs.push(Equation::new(row, targets[i], m));
            }
            let system = System {
                m,
                eqs,
                parity: &parity,
            };
            match system.solve(vec![None; rank]) {
                Some(values) => {
                    found = Some((assignment.to_vec(), values));
                    true
                }
                None => false,
            }
        });
        if let Some((assignment, values)) = found {
            let torsion_images = assignment.iter().map(|&i| targets[i] as u32).collect();
            return Ok(Eta {
                hom: FiniteHom::cyclic(m as u32, &values),
                unit: unit as u32,
                assignment,
                torsion_images,
            });
        }
    }
    Err(EtaError::NotFound { modulus: m as u32 })
}

/// Calls `visit` on each assignment `k ↦ i` with `periods[i] == periods[k]`,
/// skipping repeats of the same target tuple. Stops when `visit` returns true.
fn assignments(periods: &[u32], targets: &[i64], visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(
        k: usize,
        periods: &[u32],
        targets: &[i64],
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == periods.len() {
            return visit(current);
        }
        let mut tried: Vec<i64> = Vec::new();
        for i in 0..periods.len() {
            if used[i] || periods[i] != periods[k] || tried.contains(&targets[i]) {
                continue;
            }
            tried.push(targets[i]);
            used[i] = true;
            current.push(i);
            if go(k + 1, periods, targets, used, current, visit) {
                return true;
            }
            current.pop();
            used[i] = false;
        }
        false
    }
    let mut used = vec![false; periods.len()];
    go(0, periods, targets, &mut used, &mut Vec::new(), visit);
}

#[derive(Debug, Clone)]
struct Equation {
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

impl Equation {
    fn new(row: &[i64], rhs: i64, m: i64) -> Self {
        let terms = row
            .iter()
            .enumerate()
            .filter_map(|(g, &c)| {
                let c = c.rem_euclid(m);
                (c != 0).then_some((g, c))
            })
            .collect();
        Equation {
            terms,
            rhs: rhs.rem_euclid(m),
        }
    }
}

struct System<'a> {
    m: i64,
    eqs: Vec<Equation>,
    parity: &'a [i64],
}

impl System<'_> {
    fn solve(&self, values: Vec<Option<i64>>) -> Option<Vec<i64>> {
        let values = self.propagate(values)?;
        match values.iter().position(Option::is_none) {
            None => {
                let full: Vec<i64> = values.into_iter().map(|v| v.expect("assigned")).collect();
                let g = full.iter().fold(self.m, |acc, v| acc.gcd(v));
                (g == 1).then_some(full)
            }
            Some(var) => (self.parity[var]..self.m).step_by(2).find_map(|v| {
                let mut next = values.clone();
                next[var] = Some(v);
                self.solve(next)
            }),
        }
    }

    /// Solves equations with one unknown and a unit coefficient until nothing
    /// changes; `None` on a contradiction.
    fn propagate(&self, mut values: Vec<Option<i64>>) -> Option<Vec<Option<i64>>> {
        let m = self.m;
        loop {
            let mut changed = false;
            for eq in &self.eqs {
                let mut sum = 0i64;
                let mut unknown = None;
                let mut unknowns = 0;
                for &(g, c) in &eq.terms {
                    match values[g] {
                        Some(v) => sum = (sum + c * v) % m,
                        None => {
                            unknowns += 1;
                            unknown = Some((g, c));
                        }
                    }
                }
                let residual = (eq.rhs - sum).rem_euclid(m);
                match (unknowns, unknown) {
                    (0, _) if residual != 0 => return None,
                    (1, Some((g, c))) => {
                        let ext = c.extended_gcd(&m);
                        if residual % ext.gcd != 0 {
                            return None;
                        }
                        if ext.gcd == 1 {
                            let v = (ext.x * residual).rem_euclid(m);
                            if v % 2 != self.parity[g] {
                                return None;
                            }
                            values[g] = Some(v);
                            changed = true;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return Some(values);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::surface_kernel_check;
    use crate::realization::action::RhoImages;
    use crate::realization::delta_hat::derive_delta_hat;
    use crate::realization::theta::{build_theta, DiscGroup};

    fn eta_for(gamma: u32, periods: &[u32], n: u32, d: &[u32], x: &[u32]) -> (DeltaHat, Eta) {
        let k = DiscGroup::new(gamma, periods).unwrap();
        let dh = derive_delta_hat(&k, &build_theta(k.layout)).unwrap();
        let datum = ActionDatum {
            gamma,
            periods: periods.to_vec(),
            n,
            rho: RhoImages {
                d: d.to_vec(),
                x: x.to_vec(),
            },
        };
        let eta = construct_eta(&dh, &datum).unwrap();
        (dh, eta)
    }

    #[test]
    fn genus_two_eta_is_smooth() {
        let (dh, eta) = eta_for(1, &[2, 2, 2], 2, &[1], &[2, 2, 2]);
        assert_eq!(eta.unit, 1);
        assert_eq!(eta.torsion_images, vec![2, 2, 2]);
        let rep = surface_kernel_check(dh.subgroup.presentation(), &eta.hom, dh.signature());
        assert!(rep.is_smooth(), "{rep:#?}");
        assert_eq!(rep.genus, Some(2));
    }

    #[test]
    fn larger_orders() {
        let (dh, eta) = eta_for(2, &[2, 6], 6, &[1, 1], &[6, 2]);
        let rep = surface_kernel_check(dh.subgroup.presentation(), &eta.hom, dh.signature());
        assert!(rep.is_smooth(), "{rep:#?}");
        let (dh, eta) = eta_for(4, &[], 2, &[1, 1, 1, 1], &[]);
        let rep = surface_kernel_check(dh.subgroup.presentation(), &eta.hom, dh.signature());
        assert_eq!(rep.genus, Some(5));
    }

    #[test]
    fn assignments_skip_duplicate_targets() {
        let mut seen = Vec::new();
        assignments(&[2, 2, 4], &[2, 2, 1], &mut |a| {
            seen.push(a.to_vec());
            false
        });
        assert_eq!(seen, vec![vec![0, 1, 2]]);
        seen.clear();
        assignments(&[2, 2], &[2, 6], &mut |a| {
            seen.push(a.to_vec());
            false
        });
        assert_eq!(seen, vec![vec![0, 1], vec![1, 0]]);
    }
}
