//! Seeded random elements for property checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::poly::{DeltaPoly, Monomial, Sym};

/// Random integral element with at most `max_terms` monomials of small degree.
pub fn random_delta_poly<R: Rng>(rng: &mut R, p: u64, gens: u8, trunc: Option<u32>, max_terms: usize) -> DeltaPoly {
    let mut out = DeltaPoly::zero(p, gens, trunc);
    let count = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..count {
        let mut pairs = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let r = rng.gen_range(1..=gens);
            let j = rng.gen_range(0..=1);
            pairs.push((Sym { r, j }, rng.gen_range(1..=2)));
        }
        if let Some(n) = trunc {
            if rng.gen_bool(0.3) {
                pairs.push((Sym::S, rng.gen_range(1..n.max(2))));
            }
        }
        let c = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
        out = out.add(&out.monomial(Monomial::from_pairs(pairs), c));
    }
    out
}
