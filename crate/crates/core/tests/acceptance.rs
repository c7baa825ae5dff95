//! Acceptance suite: one line per criterion, exit status nonzero on any failure.

use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nec_realize::finite::{
    smith_normal_form, CyclicElement, DihedralElement, FiniteGroup, GroupElement, IntMatrix,
};
use nec_realize::presentation::{canonical_presentation, check_homomorphism, HomCheck};
use nec_realize::realization::{
    build_theta, derive_delta_hat, enumerate_smooth_epimorphisms, first_smooth_epimorphism,
    lemma1_check, printed_theta, realize, ActionDatum, DiscGroup, RhoImages,
};
use nec_realize::signature::{quotient_disc_signature, NecSignature, Rational};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn multisets(values: &[u32], max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for &v in values.iter().filter(|&&v| v >= start) {
                let mut w: Vec<u32> = m.clone();
                w.push(v);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Area of `(γ; −; [n_1..n_r])` from scratch: `γ − 2 + Σ(1 − 1/n_i)`.
fn delta_area(gamma: u32, periods: &[u32]) -> Rational {
    periods
        .iter()
        .fold(Rational::from_integer(gamma as i64 - 2), |acc, &p| {
            acc + Rational::new(p as i64 - 1, p as i64)
        })
}

/// Area of `(0; +; [2^γ]; {(n_1..n_r)})` from scratch: `−1 + γ/2 + ½Σ(1 − 1/n_k)`.
fn disc_area(gamma: u32, periods: &[u32]) -> Rational {
    periods
        .iter()
        .fold(Rational::new(gamma as i64 - 2, 2), |acc, &p| {
            acc + Rational::new(p as i64 - 1, 2 * p as i64)
        })
}

/// γ ∈ 1..=5, nondecreasing periods in 2..=8 of length ≤ 4, positive area.
fn signature_battery() -> Vec<(u32, Vec<u32>)> {
    let periods: Vec<u32> = (2..=8).collect();
    let mut out = Vec::new();
    for gamma in 1..=5 {
        for p in multisets(&periods, 4) {
            if delta_area(gamma, &p) > Rational::from_integer(0) {
                out.push((gamma, p));
            }
        }
    }
    out
}

/// Valid data with `2n ≤ 12`: the first epimorphism and its negation.
fn action_battery() -> Vec<ActionDatum> {
    let mut out = Vec::new();
    for n in [2u32, 4, 6] {
        let divisors: Vec<u32> = (2..=n).filter(|d| n % d == 0).collect();
        for gamma in 1..=5 {
            for p in multisets(&divisors, 4) {
                if delta_area(gamma, &p) <= Rational::from_integer(0) {
                    continue;
                }
                let Some(rho) = first_smooth_epimorphism(gamma, &p, 2 * n) else {
                    continue;
                };
                let neg = rho.scaled(2 * n - 1, 2 * n);
                for rho in [rho.clone(), neg]
                    .into_iter()
                    .enumerate()
                    .filter(|(i, r)| *i == 0 || *r != rho)
                    .map(|(_, r)| r)
                {
                    out.push(ActionDatum {
                        gamma,
                        periods: p.clone(),
                        n,
                        rho,
                    });
                }
            }
        }
    }
    out
}

fn criterion_1(battery: &[(u32, Vec<u32>)]) -> Outcome {
    ensure(battery.len() >= 50, || {
        format!("battery has only {} cases", battery.len())
    })?;
    for (gamma, p) in battery {
        let k = DiscGroup::new(*gamma, p).map_err(|e| e.to_string())?;
        let dh = derive_delta_hat(&k, &build_theta(k.layout))
            .map_err(|e| format!("γ={gamma} {p:?}: {e}"))?;
        let expected = NecSignature::non_orientable(*gamma, p.clone()).unwrap();
        ensure(*dh.signature() == expected, || {
            format!(
                "γ={gamma} {p:?}: derived {} expected {expected}",
                dh.signature()
            )
        })?;
    }
    Ok(format!("{} signatures", battery.len()))
}

fn criterion_2(battery: &[(u32, Vec<u32>)]) -> Outcome {
    for (gamma, p) in battery {
        let k = quotient_disc_signature(*gamma, p).map_err(|e| e.to_string())?;
        let delta = NecSignature::non_orientable(*gamma, p.clone()).unwrap();
        let (ka, da) = (k.reduced_area(), delta.reduced_area());
        ensure(
            ka == disc_area(*gamma, p) && da == delta_area(*gamma, p),
            || format!("γ={gamma} {p:?}: library areas {ka}, {da} disagree with direct formulas"),
        )?;
        ensure(ka * 2 == da, || format!("γ={gamma} {p:?}: {ka} ≠ {da}/2"))?;
    }
    Ok(format!("{} cases", battery.len()))
}

fn criterion_3(battery: &[(u32, Vec<u32>)]) -> Outcome {
    let (mut even, mut generators) = (0, 0);
    for (gamma, p) in battery {
        let k = DiscGroup::new(*gamma, p).map_err(|e| e.to_string())?;
        let dh = derive_delta_hat(&k, &build_theta(k.layout)).map_err(|e| e.to_string())?;
        let rep = lemma1_check(&k, &dh);
        if gamma % 2 == 0 {
            even += 1;
            ensure(rep.connector_product.is_zero, || {
                format!(
                    "γ={gamma} {p:?}: class of e₁e₂ is {}",
                    rep.connector_product.class
                )
            })?;
        }
        for inv in &rep.inversions {
            ensure(inv.inverted, || {
                format!(
                    "γ={gamma} {p:?}: τ₁{}τ₁ has class {} vs {}",
                    inv.generator, inv.conjugate_class, inv.class
                )
            })?;
        }
        generators += rep.inversions.len();
    }
    Ok(format!(
        "{even} even-γ cases, {generators} Schreier generators inverted"
    ))
}

fn criterion_4(battery: &[ActionDatum]) -> Outcome {
    for d in battery {
        let c = realize(d).map_err(|e| format!("{d:?}: {e}"))?;
        let ext = &c.theta_extension;
        ensure(ext.surjective && ext.image_order == 4 * d.n as u64, || {
            format!("{d:?}: Θ not onto D_2n")
        })?;
        ensure(ext.restricts_to_eta, || format!("{d:?}: Θ|Δ̂ ≠ η"))?;
        ensure(ext.kernel_index == 4 * d.n as u64, || {
            format!("{d:?}: index {}", ext.kernel_index)
        })?;
        ensure(c.conclusion && c.genus_hat == Some(c.genus), || {
            format!("{d:?}: conclusion false")
        })?;
    }
    Ok(format!("{} action data", battery.len()))
}

/// Genus of the kernel of a map onto a cyclic group of order `m` from the
/// cell structure of the quotient: one base vertex, one vertex per cone
/// point, a loop per crosscap and an edge to each cone point, one face.
/// Cone point `i` lifts to `m / ord(image_i)` vertices.
fn genus_by_orbits(m: u64, gamma: u64, cone_images: &[u64]) -> u64 {
    let cone_vertices: u64 = cone_images.iter().map(|&k| k.gcd(&m)).sum();
    let r = cone_images.len() as u64;
    let chi = (m + cone_vertices + m) as i64 - (m * (gamma + r)) as i64;
    ((2 - chi) / 2) as u64
}

fn criterion_5() -> Outcome {
    let d = ActionDatum {
        gamma: 1,
        periods: vec![2, 2, 2],
        n: 2,
        rho: RhoImages {
            d: vec![1],
            x: vec![2, 2, 2],
        },
    };
    let c = realize(&d).map_err(|e| e.to_string())?;
    // enumeration oracle: the datum is one of the two epimorphisms
    let all = enumerate_smooth_epimorphisms(1, &[2, 2, 2], 4);
    ensure(all.epimorphisms.contains(&d.rho), || {
        "ρ is not a smooth epimorphism".into()
    })?;
    let g = genus_by_orbits(4, 1, &[2, 2, 2]);
    ensure(g == 2 && c.genus == 2, || {
        format!("g = {} (orbit count {g})", c.genus)
    })?;
    ensure(c.delta_hat_signature.display == "(1;−;[2,2,2])", || {
        c.delta_hat_signature.display.clone()
    })?;
    ensure(
        c.theta_extension.group == "D₄" && c.theta_extension.kernel_index == 8,
        || {
            format!(
                "{} index {}",
                c.theta_extension.group, c.theta_extension.kernel_index
            )
        },
    )?;
    // ĝ through Δ̂ and η by orbit counting
    let eta_images: Vec<u64> = c.eta.torsion_images.iter().map(|&v| v as u64).collect();
    let g_hat = genus_by_orbits(4, 1, &eta_images);
    ensure(c.genus_hat == Some(2) && g_hat == 2, || {
        format!("ĝ = {:?} (orbit count {g_hat})", c.genus_hat)
    })?;
    ensure(c.conclusion, || "conclusion false".into())?;
    Ok("g = ĝ = 2, Δ̂ = (1;−;[2,2,2]), K/Γ̂ ≅ D₄ of index 8".into())
}

/// Every tuple in `(Z/m)^(γ+r)`, filtered without pruning.
fn brute_count(gamma: usize, periods: &[u32], m: i64) -> usize {
    let len = gamma + periods.len();
    let total = (m as u64).pow(len as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let t: Vec<i64> = (0..len)
            .map(|_| {
                let v = (c % m as u64) as i64;
                c /= m as u64;
                v
            })
            .collect();
        let glides_odd = t[..gamma].iter().all(|v| v % 2 == 1);
        let orders = t[gamma..]
            .iter()
            .zip(periods)
            .all(|(&v, &p)| m / v.gcd(&m) == p as i64);
        let relator =
            (t[gamma..].iter().sum::<i64>() + 2 * t[..gamma].iter().sum::<i64>()) % m == 0;
        let onto = t.iter().fold(m, |a, v| a.gcd(v)) == 1;
        if glides_odd && orders && relator && onto {
            count += 1;
        }
    }
    count
}

fn criterion_6() -> Outcome {
    let fixed = [
        ((1, vec![2, 2, 2]), 4, 2),
        ((3, vec![]), 4, 0),
        ((4, vec![]), 4, 16),
    ];
    for ((gamma, p), m, expected) in &fixed {
        let got = enumerate_smooth_epimorphisms(*gamma, p, *m).count;
        ensure(got == *expected, || {
            format!("({gamma},{p:?},{m}) → {got}, expected {expected}")
        })?;
    }
    let cases: Vec<(u32, Vec<u32>, u32)> = vec![
        (1, vec![2, 2, 2], 4),
        (3, vec![], 4),
        (4, vec![], 4),
        (2, vec![2], 4),
        (2, vec![2, 2], 4),
        (1, vec![4, 4], 8),
        (2, vec![4], 8),
        (3, vec![2], 8),
        (2, vec![3], 12),
        (1, vec![3, 6], 12),
        (2, vec![2, 6], 12),
        (3, vec![], 8),
        (5, vec![], 4),
        (1, vec![2, 2, 2, 2], 4),
    ];
    for (gamma, p, m) in &cases {
        let fast = enumerate_smooth_epimorphisms(*gamma, p, *m);
        let slow = brute_count(*gamma as usize, p, *m as i64);
        ensure(fast.count == slow, || {
            format!("({gamma},{p:?},{m}): {} vs oracle {slow}", fast.count)
        })?;
        ensure(fast.epimorphisms.windows(2).all(|w| w[0] < w[1]), || {
            "not in lexicographic order".into()
        })?;
    }
    Ok(format!(
        "{} cases agree with the unpruned filter",
        cases.len()
    ))
}

fn criterion_7(battery: &[(u32, Vec<u32>)]) -> Outcome {
    for (gamma, p) in battery {
        let sig = quotient_disc_signature(*gamma, p).map_err(|e| e.to_string())?;
        let k = canonical_presentation(&sig).map_err(|e| e.to_string())?;
        let layout = DiscGroup::new(*gamma, p).map_err(|e| e.to_string())?.layout;
        let printed = check_homomorphism(&k, &printed_theta(layout));
        if gamma % 2 == 0 {
            ensure(printed.is_valid(), || {
                format!("γ={gamma} {p:?}: e ↦ 1 rejected")
            })?;
        } else {
            let long = k.relators().len() - p.len() - 1;
            ensure(
                matches!(printed, HomCheck::Failing { relator, .. } if relator == long),
                || format!("γ={gamma} {p:?}: e ↦ 1 gave {printed:?}"),
            )?;
        }
        ensure(
            check_homomorphism(&k, &build_theta(layout)).is_valid(),
            || format!("γ={gamma} {p:?}: parity-fixed θ rejected"),
        )?;
    }
    Ok(format!("{} cases", battery.len()))
}

fn group_laws(g: FiniteGroup) -> Result<(), String> {
    let els = g.elements().expect("enumerable");
    ensure(els.len() as u64 == g.order(), || {
        format!("{g}: wrong element count")
    })?;
    let e = g.identity();
    for a in &els {
        ensure(a.op(&e).unwrap() == *a && e.op(a).unwrap() == *a, || {
            format!("{g}: identity law at {a}")
        })?;
        ensure(a.op(&a.inverse()).unwrap().is_identity(), || {
            format!("{g}: inverse law at {a}")
        })?;
        for b in &els {
            let ab = a.op(b).unwrap();
            ensure(g.contains(&ab), || format!("{g}: not closed"))?;
            for c in &els {
                ensure(
                    ab.op(c).unwrap() == a.op(&b.op(c).unwrap()).unwrap(),
                    || format!("{g}: associativity at {a}, {b}, {c}"),
                )?;
            }
        }
    }
    Ok(())
}

/// Determinant by fraction-free elimination.
fn bareiss_det(m: &IntMatrix) -> i128 {
    let n = m.rows();
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|i| m.row(i).iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn criterion_8() -> Outcome {
    let mut groups = 0;
    for m in 1..=32u32 {
        group_laws(FiniteGroup::Cyclic(m))?;
        groups += 1;
        if 2 * m <= 32 {
            group_laws(FiniteGroup::Dihedral(m))?;
            groups += 1;
        }
    }
    // spot-check the dihedral convention t s t = s⁻¹
    let t = GroupElement::Dihedral(DihedralElement::reflection(0, 5));
    let s = GroupElement::Dihedral(DihedralElement::rotation(1, 5));
    ensure(t.op(&s).unwrap().op(&t).unwrap() == s.inverse(), || {
        "t s t ≠ s⁻¹".into()
    })?;
    ensure(
        GroupElement::Cyclic(CyclicElement::new(-1, 6)).order() == 6,
        || "order of -1 in Z/6".into(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..100 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let m = IntMatrix::from_rows(&data);
        let snf = smith_normal_form(&m);
        ensure(snf.u.mul(&m).mul(&snf.v) == snf.d, || {
            format!("trial {trial}: U·M·V ≠ D")
        })?;
        ensure(snf.d.is_diagonal(), || {
            format!("trial {trial}: D not diagonal")
        })?;
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            ensure(
                w[0] >= 0 && (w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0)),
                || format!("trial {trial}: divisibility fails on {diag:?}"),
            )?;
        }
        ensure(
            bareiss_det(&snf.u).abs() == 1 && bareiss_det(&snf.v).abs() == 1,
            || format!("trial {trial}: U or V not unimodular"),
        )?;
    }
    Ok(format!("{groups} groups, 100 Smith forms"))
}

fn main() {
    let signatures = signature_battery();
    let actions = action_battery();
    let criteria: Vec<Criterion> = vec![
        (
            "1 Δ̂ signature equals (γ;−;[n₁..n_r])",
            Duration::from_secs(10),
            Box::new(|| criterion_1(&signatures)),
        ),
        (
            "2 index-2 area identity",
            Duration::from_secs(1),
            Box::new(|| criterion_2(&signatures)),
        ),
        (
            "3 e₁e₂ ∈ ker and τ₁-inversion on H₁(Δ̂)",
            Duration::from_secs(10),
            Box::new(|| criterion_3(&signatures)),
        ),
        (
            "4 dihedral extension with |K : ker Θ| = 4n",
            Duration::from_secs(30),
            Box::new(|| criterion_4(&actions)),
        ),
        (
            "5 genus-2 end to end",
            Duration::from_secs(1),
            Box::new(criterion_5),
        ),
        (
            "6 enumeration against unpruned oracle",
            Duration::from_secs(5),
            Box::new(criterion_6),
        ),
        (
            "7 θ parity behaviour",
            Duration::from_secs(1),
            Box::new(|| criterion_7(&signatures)),
        ),
        (
            "8 group laws and Smith normal form",
            Duration::from_secs(5),
            Box::new(criterion_8),
        ),
    ];
    let mut failures = 0;
    for (name, budget, run) in &criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(_) if elapsed > *budget => ("FAIL", format!("exceeded {budget:?}")),
            Ok(detail) => ("PASS", detail),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {name}: {status} ({detail}; {:.2?})", elapsed);
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
