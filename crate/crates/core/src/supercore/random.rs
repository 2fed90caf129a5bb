use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::monomial::SuperMonomial;
use super::poly::SuperPoly;
use super::vars::VarTable;
use crate::error::{Error, Result};
use crate::rat::{frac, Rat};

/// Reproducible pseudo-random element of the given total degree and parity.
pub fn random_homogeneous(
    table: &Arc<VarTable>,
    degree: u32,
    parity: u8,
    seed: u64,
) -> Result<SuperPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_homogeneous_with(table, degree, parity, &mut rng)
}

pub fn random_homogeneous_with<R: Rng>(
    table: &Arc<VarTable>,
    degree: u32,
    parity: u8,
    rng: &mut R,
) -> Result<SuperPoly> {
    let (e, o) = (table.n_even(), table.n_odd());
    let odd_counts: Vec<usize> = (0..=o.min(degree as usize))
        .filter(|&j| j % 2 == parity as usize % 2)
        .filter(|&j| degree as usize == j || e > 0)
        .collect();
    if odd_counts.is_empty() {
        return Err(Error::Invalid(format!(
            "no monomials of degree {degree} and parity {parity} in this table"
        )));
    }
    let n_terms = rng.gen_range(1..=4);
    let mut p = SuperPoly::zero(table);
    for _ in 0..n_terms {
        let j = odd_counts[rng.gen_range(0..odd_counts.len())];
        let mut m = SuperMonomial::one(e);
        for k in sample(rng, o, j).into_iter() {
            m.odd |= 1 << k;
        }
        for _ in 0..(degree as usize - j) {
            m.even[rng.gen_range(0..e)] += 1;
        }
        p.add_term(m, random_coeff(rng));
    }
    if p.is_zero() {
        return random_homogeneous_with(table, degree, parity, rng);
    }
    Ok(p)
}

fn random_coeff<R: Rng>(rng: &mut R) -> Rat {
    let mut num: i64 = rng.gen_range(-6..=6);
    if num == 0 {
        num = 1;
    }
    let den: i64 = if rng.gen_bool(0.2) { rng.gen_range(2..=3) } else { 1 };
    frac(num, den)
}
