//! Seeded generators of matrices and stable systems for property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::eps_rational::EpsRational;
use crate::eps_scalar::rat;
use crate::external_number::ExternalNumber;
use crate::flex_matrix::{
    is_diagonally_eliminable, is_properly_arranged, is_reduced_representative, properly_arrange, ExtMatrix,
    ExtVector, RealMatrix,
};
use crate::neutrix::Neutrix;
use crate::solver::{analyze_stability, probe_offsets, FlexSystem};

fn rational_in(rng: &mut impl Rng, max_num: i64, max_den: i64) -> EpsRational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-max_num * den..=max_num * den);
    EpsRational::constant(rat(num, den))
}

fn eps_term(rng: &mut impl Rng, k: i32) -> EpsRational {
    let c = [(1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-3, 2)]
        .choose(rng)
        .copied()
        .expect("nonempty");
    EpsRational::monomial(rat(c.0, c.1), k)
}

/// A matrix with every leading principal minor nonzero. With `with_eps`,
/// some entries get first- and second-order terms in `ε`.
pub fn diagonally_eliminable(rng: &mut impl Rng, n: usize, with_eps: bool) -> RealMatrix {
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let mut x = rational_in(rng, 3, 5);
                        if with_eps && rng.gen_bool(0.3) {
                            let k = rng.gen_range(1..=2);
                            x = &x + &eps_term(rng, k);
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        let p = RealMatrix::new(rows).expect("square");
        if is_diagonally_eliminable(&p).is_ok() {
            return p;
        }
    }
}

/// A stable, uniform, properly arranged system with reduced canonical
/// representative matrix, and a second valid representative matrix.
#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub system: FlexSystem,
    pub alternative: RealMatrix,
}

const RHS_NEUTRICES: [Neutrix; 5] = [
    Neutrix::OSLASH,
    Neutrix::Scale(1, crate::neutrix::Class::Pounds),
    Neutrix::Scale(1, crate::neutrix::Class::Oslash),
    Neutrix::Scale(2, crate::neutrix::Class::Pounds),
    Neutrix::Scale(2, crate::neutrix::Class::Oslash),
];

const ENTRY_NEUTRICES: [Neutrix; 8] = [
    Neutrix::Zero,
    Neutrix::Micro(1),
    Neutrix::Scale(1, crate::neutrix::Class::Oslash),
    Neutrix::Scale(1, crate::neutrix::Class::Pounds),
    Neutrix::Scale(2, crate::neutrix::Class::Oslash),
    Neutrix::Scale(2, crate::neutrix::Class::Pounds),
    Neutrix::Scale(3, crate::neutrix::Class::Oslash),
    Neutrix::Scale(3, crate::neutrix::Class::Pounds),
];

fn arranged_representative(rng: &mut impl Rng, n: usize) -> Option<RealMatrix> {
    let mut rows: Vec<Vec<EpsRational>> = (0..n)
        .map(|_| (0..n).map(|_| rational_in(rng, 1, 4)).collect())
        .collect();
    if n > 1 && rng.gen_bool(0.25) {
        // nearly dependent last row, so that the determinant is infinitesimal
        let c = rational_in(rng, 1, 2);
        let last: Vec<EpsRational> = (0..n)
            .map(|j| &(&c * &rows[0][j]) + &eps_term(rng, 1))
            .collect();
        rows[n - 1] = last;
    }
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            if (i, j) != (0, 0) && rng.gen_bool(0.2) {
                let k = rng.gen_range(1..=2);
                *x = &*x + &eps_term(rng, k);
            }
        }
    }
    let m = RealMatrix::new(rows).ok()?;
    if m.det().is_zero() {
        return None;
    }
    let arr = properly_arrange(&m).ok()?;
    let p = arr.matrix.scaled(&arr.matrix.get(0, 0).recip().ok()?);
    (is_properly_arranged(&p).is_ok() && is_reduced_representative(&p).is_ok()).then_some(p)
}

/// A different representative matrix of `a`, still arranged and reduced.
pub fn alternative_representative(rng: &mut impl Rng, a: &ExtMatrix) -> Option<RealMatrix> {
    let p = a.representative();
    let n = a.n();
    let movable: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| (i, j) != (0, 0) && !probe_offsets(a.get(i, j).neutrix()).is_empty())
        .collect();
    if movable.is_empty() {
        return None;
    }
    for _ in 0..20 {
        let mut q = p.clone();
        let mut changed = false;
        for &(i, j) in &movable {
            if rng.gen_bool(0.6) {
                let offs = probe_offsets(a.get(i, j).neutrix());
                let d = offs.choose(rng).expect("nonempty");
                q.set(i, j, p.get(i, j) + d);
                changed = true;
            }
        }
        if changed
            && a.has_representative(&q)
            && is_properly_arranged(&q).is_ok()
            && is_reduced_representative(&q).is_ok()
        {
            return Some(q);
        }
    }
    None
}

pub fn stable_system(rng: &mut impl Rng, n: usize) -> RandomSystem {
    loop {
        let Some(p) = arranged_representative(rng, n) else {
            continue;
        };
        let b_min = *RHS_NEUTRICES.choose(rng).expect("nonempty");
        let allowed: Vec<Neutrix> = ENTRY_NEUTRICES
            .iter()
            .copied()
            .filter(|x| *x <= b_min && *x <= Neutrix::OSLASH)
            .collect();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let nx = *allowed.choose(rng).expect("nonempty");
                        ExternalNumber::new(p.get(i, j).clone(), nx)
                    })
                    .collect()
            })
            .collect();
        let a = ExtMatrix::new(rows).expect("square");
        let canonical = a.representative();
        if is_properly_arranged(&canonical).is_err() || is_reduced_representative(&canonical).is_err() {
            continue;
        }
        let homogeneous = rng.gen_bool(0.1);
        let b = ExtVector::new(
            (0..n)
                .map(|_| {
                    let mut r = if homogeneous { EpsRational::zero() } else { rational_in(rng, 2, 4) };
                    if !homogeneous && rng.gen_bool(0.2) {
                        r = &r + &eps_term(rng, 1);
                    }
                    ExternalNumber::new(r, b_min)
                })
                .collect(),
        )
        .expect("nonempty");
        let Ok(sys) = FlexSystem::new(a, b) else {
            continue;
        };
        match analyze_stability(&sys) {
            Ok(r) if r.stable => {}
            _ => continue,
        }
        if let Some(alternative) = alternative_representative(rng, &sys.a) {
            return RandomSystem {
                system: sys,
                alternative,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_systems_meet_their_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let r = stable_system(&mut rng, n);
            assert!(analyze_stability(&r.system).unwrap().stable);
            assert!(r.system.is_uniform());
            assert!(is_properly_arranged(&r.system.p).is_ok());
            assert!(r.system.a.has_representative(&r.alternative));
            assert_ne!(r.alternative, r.system.p);
        }
        let p = diagonally_eliminable(&mut rng, 4, true);
        assert!(is_diagonally_eliminable(&p).is_ok());
    }
}
