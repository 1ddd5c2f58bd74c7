//! Certified summation of series in Q_p.
//!
//! Convergence is never guessed: the caller either declares a nondecreasing
//! lower bound on term valuations (so a tail witness can be found for any
//! target precision) or declares the series finite beyond a cutoff. Without
//! a witness, summation refuses rather than under-summing.

use crate::error::{Error, Result};
use crate::number::PadicNumber;
use crate::valuation::Prime;

/// A series Σ a_j given by a pure term map, with an optional convergence
/// witness: either a nondecreasing valuation lower bound j -> v(a_j), or a
/// cutoff J with a_j = 0 exactly for all j >= J.
pub struct TermGenerator<'a> {
    prime: Prime,
    term: Box<dyn Fn(u64) -> PadicNumber + 'a>,
    valuation_growth: Option<Box<dyn Fn(u64) -> i64 + 'a>>,
    cutoff: Option<u64>,
}

impl<'a> TermGenerator<'a> {
    pub fn new(prime: Prime, term: impl Fn(u64) -> PadicNumber + 'a) -> Self {
        TermGenerator {
            prime,
            term: Box::new(term),
            valuation_growth: None,
            cutoff: None,
        }
    }

    /// Declare v(a_j) >= growth(j) with growth nondecreasing.
    pub fn with_valuation_growth(mut self, growth: impl Fn(u64) -> i64 + 'a) -> Self {
        self.valuation_growth = Some(Box::new(growth));
        self
    }

    /// Declare a_j = 0 exactly for all j >= cutoff.
    pub fn with_cutoff(mut self, cutoff: u64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn term(&self, j: u64) -> PadicNumber {
        (self.term)(j)
    }
}

const WITNESS_SCAN_CAP: u64 = 1 << 20;

/// Sum the series to absolute precision k. With a declared growth bound the
/// result is the certified partial sum plus O(p^k); with a cutoff the series
/// is finite and the sum is exact (no error term).
pub fn sum_series(g: &TermGenerator, k: i64) -> Result<PadicNumber> {
    if let Some(j_end) = g.cutoff {
        return partial_sum(g, j_end);
    }
    if let Some(growth) = &g.valuation_growth {
        let j_end = (0..=WITNESS_SCAN_CAP)
            .find(|&j| growth(j) >= k)
            .ok_or(Error::NoConvergenceWitness)?;
        return Ok(partial_sum(g, j_end)?.with_error_term(k));
    }
    Err(Error::NoConvergenceWitness)
}

fn partial_sum(g: &TermGenerator, j_end: u64) -> Result<PadicNumber> {
    let mut acc = PadicNumber::exact_zero(g.prime);
    for j in 0..j_end {
        acc = acc.add(&g.term(j))?;
    }
    Ok(acc)
}

/// Σ x^j = 1/(1 - x) for |x|_p < 1, computed as invert(1 - x) and reported
/// to absolute precision k. The hypothesis must be certified by the ball:
/// units need v >= 1, zero balls need a >= 1.
pub fn geometric_sum(x: &PadicNumber, k: i64) -> Result<PadicNumber> {
    assert!(k >= 1, "target absolute precision must be positive");
    let certified_small = match x.valuation_info() {
        crate::number::ValuationInfo::Infinite => true,
        crate::number::ValuationInfo::Exact(v) => {
            if v <= 0 {
                return Err(Error::Diverges);
            }
            true
        }
        crate::number::ValuationInfo::AtLeast(a) => a >= 1,
    };
    if !certified_small {
        return Err(Error::Diverges);
    }
    let one = PadicNumber::one(x.prime(), k as u32);
    let denom = one.sub(x)?;
    Ok(denom.invert()?.with_error_term(k))
}

/// Check (1 - x) Σ_{j<=n} x^j = 1 - x^(n+1) at the precision the operand
/// balls support.
pub fn partial_sum_identity_check(x: &PadicNumber, n: u64) -> Result<bool> {
    let p = x.prime();
    let prec = x.rel_precision().unwrap_or(1);
    let one = PadicNumber::one(p, prec);
    let mut powers_sum = PadicNumber::exact_zero(p);
    let mut xj = one.clone();
    for _ in 0..=n {
        powers_sum = powers_sum.add(&xj)?;
        xj = xj.mul(x)?;
    }
    // xj is now x^(n+1)
    let lhs = one.sub(x)?.mul(&powers_sum)?;
    let rhs = one.sub(&xj)?;
    let k = match (lhs.abs_precision(), rhs.abs_precision()) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return Ok(lhs == rhs),
    };
    lhs.eq_mod_pk(&rhs, k)
}

/// α Σ a_j + β Σ b_j to absolute precision k, with each inner sum carried
/// out to enough extra digits to survive the scalar factor.
pub fn linear_combination(
    a: &TermGenerator,
    b: &TermGenerator,
    alpha: &PadicNumber,
    beta: &PadicNumber,
    k: i64,
) -> Result<PadicNumber> {
    let first = scaled_sum(a, alpha, k)?;
    let second = scaled_sum(b, beta, k)?;
    Ok(first.add(&second)?.with_error_term(k))
}

fn scaled_sum(g: &TermGenerator, coeff: &PadicNumber, k: i64) -> Result<PadicNumber> {
    let shift = match coeff.valuation_info() {
        crate::number::ValuationInfo::Infinite => {
            return Ok(PadicNumber::exact_zero(g.prime()));
        }
        crate::number::ValuationInfo::Exact(v) => v,
        crate::number::ValuationInfo::AtLeast(a) => a,
    };
    coeff.mul(&sum_series(g, k - shift)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn embed(q: &BigRational, pr: Prime, n: u32) -> PadicNumber {
        PadicNumber::from_rational(q, pr, n)
    }

    #[test]
    fn all_zero_series_sums_to_exact_zero() {
        let g = TermGenerator::new(p(5), |_| PadicNumber::exact_zero(p(5))).with_cutoff(10);
        assert!(sum_series(&g, 8).unwrap().is_exact_zero());
    }

    #[test]
    fn geometric_terms_sum_to_minus_quarter() {
        // Σ 5^j = 1/(1-5) = -1/4
        let g = TermGenerator::new(p(5), |j| embed(&p(5).power_rational(j as i64), p(5), 12))
            .with_valuation_growth(|j| j as i64);
        let s = sum_series(&g, 8).unwrap();
        let oracle = embed(&rat(-1, 4), p(5), 8);
        assert!(s.eq_mod_pk(&oracle, 8).unwrap());
        // all-ones digit pattern: -1/4 mod 5^8 = 97656
        assert_eq!(
            oracle.rational_representative(),
            BigRational::from_integer(BigInt::from(97656))
        );
    }

    #[test]
    fn truncated_factorial_series_matches_rational_oracle() {
        // a_j = j! 5^j for j < 6, zero beyond
        let term = |j: u64| -> BigRational {
            if j >= 6 {
                return BigRational::zero();
            }
            let fact: i64 = (1..=j as i64).product::<i64>().max(1);
            BigRational::from_integer(BigInt::from(fact)) * p(5).power_rational(j as i64)
        };
        let g = TermGenerator::new(p(5), move |j| embed(&term(j), p(5), 16)).with_cutoff(6);
        let s = sum_series(&g, 12).unwrap();
        let exact: BigRational = (0..6).map(term).sum();
        assert!(s.contains_rational(&exact));
    }

    #[test]
    fn missing_witness_is_refused() {
        let g = TermGenerator::new(p(5), |j| embed(&p(5).power_rational(j as i64), p(5), 12));
        assert_eq!(sum_series(&g, 8), Err(Error::NoConvergenceWitness));
    }

    #[test]
    fn tail_invariance_beyond_witness() {
        let mk = |extra: u64| {
            TermGenerator::new(p(3), move |j| {
                if j < 10 + extra {
                    embed(&p(3).power_rational(j as i64), p(3), 16)
                } else {
                    PadicNumber::exact_zero(p(3))
                }
            })
            .with_valuation_growth(|j| j as i64)
        };
        let s1 = sum_series(&mk(0), 10).unwrap();
        let s2 = sum_series(&mk(5), 10).unwrap();
        assert!(s1.eq_mod_pk(&s2, 10).unwrap());
    }

    #[test]
    fn reordering_finitely_many_terms_is_invisible() {
        let base = [3i64, 7, 1, 9, 4];
        let fwd = TermGenerator::new(p(5), move |j| {
            let c = base.get(j as usize).copied().unwrap_or(0);
            embed(&(rat(c, 1) * p(5).power_rational(j.min(4) as i64)), p(5), 16)
        })
        .with_cutoff(5);
        let rev = TermGenerator::new(p(5), move |j| {
            let i = 4 - j as usize;
            embed(&(rat(base[i], 1) * p(5).power_rational(i as i64)), p(5), 16)
        })
        .with_cutoff(5);
        let a = sum_series(&fwd, 12).unwrap();
        let b = sum_series(&rev, 12).unwrap();
        assert!(a.eq_mod_pk(&b, 12).unwrap());
    }

    #[test]
    fn geometric_sum_examples() {
        // x = 0 -> 1
        let s = geometric_sum(&PadicNumber::exact_zero(p(7)), 6).unwrap();
        assert!(s.contains_rational(&rat(1, 1)));
        // x = 2 at p = 2: 1/(1-2) = -1, digits all ones
        let two = embed(&rat(2, 1), p(2), 12);
        let s = geometric_sum(&two, 10).unwrap();
        assert!(s.eq_mod_pk(&embed(&rat(-1, 1), p(2), 10), 10).unwrap());
        let digits = s.digits().unwrap();
        assert!(digits.iter().take(10).all(|&(_, d)| d == 1));
        // x = p w for an integer w
        let x = embed(&rat(15, 1), p(5), 12);
        let s = geometric_sum(&x, 10).unwrap();
        assert!(s.eq_mod_pk(&embed(&rat(-1, 14), p(5), 10), 10).unwrap());
    }

    #[test]
    fn geometric_sum_divergence_rejected() {
        let unit = embed(&rat(2, 1), p(5), 8);
        assert_eq!(geometric_sum(&unit, 8), Err(Error::Diverges));
        let too_coarse = PadicNumber::zero_ball(p(5), 0);
        assert_eq!(geometric_sum(&too_coarse, 8), Err(Error::Diverges));
    }

    #[test]
    fn geometric_sum_times_one_minus_x_is_one() {
        for c in [5i64, 10, 35, 125, -20] {
            let x = embed(&rat(c, 1), p(5), 16);
            let s = geometric_sum(&x, 12).unwrap();
            let one_minus_x = PadicNumber::one(p(5), 16).sub(&x).unwrap();
            let prod = s.mul(&one_minus_x).unwrap();
            assert!(prod
                .eq_mod_pk(&PadicNumber::one(p(5), 12), 12)
                .unwrap());
        }
    }

    #[test]
    fn partial_sum_identity_examples() {
        assert!(partial_sum_identity_check(&PadicNumber::exact_zero(p(3)), 4).unwrap());
        let x = embed(&rat(1, 5), p(3), 16);
        assert!(partial_sum_identity_check(&x, 7).unwrap());
        let x = embed(&rat(5, 1), p(5), 32);
        assert!(partial_sum_identity_check(&x, 20).unwrap());
    }

    #[test]
    fn linear_combination_examples() {
        let geo = || {
            TermGenerator::new(p(3), |j| embed(&p(3).power_rational(j as i64), p(3), 20))
                .with_valuation_growth(|j| j as i64)
        };
        let zero_series =
            || TermGenerator::new(p(3), |_| PadicNumber::exact_zero(p(3))).with_cutoff(0);
        let one = PadicNumber::one(p(3), 16);
        let zero = PadicNumber::exact_zero(p(3));
        // α = 1, β = 0 reduces to the first sum
        let lc = linear_combination(&geo(), &zero_series(), &one, &zero, 10).unwrap();
        let direct = sum_series(&geo(), 10).unwrap();
        assert!(lc.eq_mod_pk(&direct, 10).unwrap());
        // α = β = 1 on the same geometric series doubles it: 2/(1-p)
        let lc = linear_combination(&geo(), &geo(), &one, &one, 10).unwrap();
        assert!(lc.eq_mod_pk(&embed(&rat(-1, 1), p(3), 10), 10).unwrap());
    }

    #[test]
    fn linear_combination_with_scaling_coefficient() {
        // β = p shifts how many digits the second sum must carry; the
        // result must still be correct to the requested precision
        let geo = || {
            TermGenerator::new(p(5), |j| embed(&p(5).power_rational(j as i64), p(5), 24))
                .with_valuation_growth(|j| j as i64)
        };
        let alpha = PadicNumber::one(p(5), 20);
        let beta = embed(&rat(5, 1), p(5), 20);
        let lc = linear_combination(&geo(), &geo(), &alpha, &beta, 10).unwrap();
        // (1 + 5) * (-1/4) = -3/2
        assert!(lc.eq_mod_pk(&embed(&rat(-3, 2), p(5), 10), 10).unwrap());
    }
}
