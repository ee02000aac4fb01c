//! Seeded random polynomial and form samplers for the verification
//! harnesses. All randomness flows from one ChaCha8 seed; coefficients are
//! nonzero integers in [−9, 9] and exponent vectors are drawn uniformly
//! among monomials of total degree ≤ the requested bound.

use crate::forms::FormBasis;
use crate::gb::VecPoly;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn coeff<K: Scalar>(&mut self) -> K {
        let mut c = 0i64;
        while c == 0 {
            c = self.rng.gen_range(-9..=9);
        }
        K::from_int(c)
    }

    pub fn monomial(&mut self, nvars: usize, max_deg: u32) -> Vec<u32> {
        let d = self.rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; nvars];
        for _ in 0..d {
            let i = self.rng.gen_range(0..nvars);
            e[i] += 1;
        }
        e
    }

    /// Random polynomial with 1..=max_terms monomials of degree ≤ max_deg.
    pub fn poly<K: Scalar>(&mut self, ring: &Ring, max_deg: u32, max_terms: usize) -> Polynomial<K> {
        let t = self.rng.gen_range(1..=max_terms);
        let mut p = Polynomial::zero(ring.nvars());
        for _ in 0..t {
            p.add_term(self.monomial(ring.nvars(), max_deg), self.coeff());
        }
        p
    }

    /// Random p-form: a sparse vector over the label basis.
    pub fn form<K: Scalar>(
        &mut self,
        ring: &Ring,
        basis: &FormBasis,
        max_deg: u32,
        max_terms: usize,
    ) -> VecPoly<K> {
        let mut v = VecPoly::zero(basis.len());
        let picks = self.rng.gen_range(1..=basis.len());
        for _ in 0..picks {
            let c = self.rng.gen_range(0..basis.len());
            v.add_to(c, self.poly(ring, max_deg, max_terms));
        }
        v
    }

    /// Random combination Σ rᵢ·genᵢ with polynomial coefficients.
    pub fn combination<K: Scalar>(
        &mut self,
        ring: &Ring,
        gens: &[VecPoly<K>],
        max_deg: u32,
    ) -> VecPoly<K> {
        let rank = gens.first().map(|g| g.rank()).unwrap_or(1);
        let mut acc = VecPoly::zero(rank);
        for g in gens {
            if self.rng.gen_bool(0.5) {
                continue;
            }
            let r: Polynomial<K> = self.poly(ring, max_deg, 3);
            acc = acc.add(&g.mul_poly(&r));
        }
        // ensure at least one generator participates
        if acc.is_zero() {
            if let Some(g) = gens.first() {
                let r: Polynomial<K> = self.poly(ring, max_deg, 3);
                acc = g.mul_poly(&r);
            }
        }
        acc
    }
}
