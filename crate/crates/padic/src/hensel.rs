//! Polynomials over Z_p and root lifting by Newton iteration.
//!
//! Two hypotheses are supported: the basic one (f(z) ∈ pZ_p and f'(z) a
//! unit) and the refined one (|f(z)|_p < |f'(z)|_p^2). Iteration runs on
//! exact integer representatives modulo a raised working power of p; the
//! returned root is certified independently of the iteration bookkeeping
//! by re-evaluating the polynomial on the result ball.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number::{NormBound, PadicNumber, ValuationInfo};
use crate::valuation::{vp_int, Prime};

/// A polynomial with p-adic integer coefficients, constant term first.
#[derive(Clone, Debug)]
pub struct Polynomial {
    prime: Prime,
    coeffs: Vec<PadicNumber>,
}

impl Polynomial {
    /// Coefficients a_0..a_n, each certified inside Z_p by its ball.
    pub fn new(prime: Prime, coeffs: Vec<PadicNumber>) -> Result<Self> {
        for c in &coeffs {
            if c.prime() != prime {
                return Err(Error::PrimeMismatch(prime.get(), c.prime().get()));
            }
            if !c.in_zp() {
                return Err(Error::HypothesisFailed(format!(
                    "coefficient {c} is not certified to lie in Z_{prime}"
                )));
            }
        }
        Ok(Polynomial { prime, coeffs })
    }

    pub fn from_rational_coeffs(
        prime: Prime,
        coeffs: &[BigRational],
        rel_precision: u32,
    ) -> Result<Self> {
        Self::new(
            prime,
            coeffs
                .iter()
                .map(|q| PadicNumber::from_rational(q, prime, rel_precision))
                .collect(),
        )
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation; the result ball is sound for any member of the
    /// coefficient and argument balls.
    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let mut acc = PadicNumber::exact_zero(self.prime);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    /// Formal derivative; coefficient j becomes (j+1) * a_{j+1}, again a
    /// Z_p polynomial.
    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.mul_rational(&BigRational::from_integer(BigInt::from(j))))
            .collect();
        Polynomial {
            prime: self.prime,
            coeffs,
        }
    }

    /// Exact integer coefficients representing each ball modulo p^w, used
    /// by the modular Newton loop.
    fn integer_model(&self, w: i64) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .map(|c| {
                let t = c.abs_precision().map_or(w, |a| a.min(w));
                let q = c.truncated_representative(t).expect("within precision");
                debug_assert!(q.denom().is_one());
                q.numer().clone()
            })
            .collect()
    }

    /// Parse `p; a_0, a_1, …, a_n` with each coefficient a rational or a
    /// ball literal.
    pub fn parse(s: &str, default_rel_precision: u32) -> Result<Self> {
        let (p_str, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse("expected `p; a_0, a_1, …`".into()))?;
        let p_val: u64 = p_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse("bad prime".into()))?;
        let prime = Prime::new(p_val)?;
        let coeffs = rest
            .split(',')
            .map(|c| PadicNumber::parse(prime, c, default_rel_precision))
            .collect::<Result<Vec<_>>>()?;
        Self::new(prime, coeffs)
    }
}

fn eval_int(coeffs: &[BigInt], x: &BigInt, modulus: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * x + c).mod_floor(modulus);
    }
    acc
}

/// Decide `lhs <= rhs` between norm bounds, soundly: true or false only
/// when every member of the bounds satisfies the verdict.
fn norm_leq(lhs: &NormBound, rhs: &NormBound) -> Result<bool> {
    let (lhs_hi, lhs_lo) = match lhs {
        NormBound::Exactly(q) => (q.clone(), q.clone()),
        NormBound::AtMost(q) => (q.clone(), BigRational::zero()),
    };
    let (rhs_hi, rhs_lo) = match rhs {
        NormBound::Exactly(q) => (q.clone(), q.clone()),
        NormBound::AtMost(q) => (q.clone(), BigRational::zero()),
    };
    if lhs_hi <= rhs_lo {
        Ok(true)
    } else if lhs_lo > rhs_hi {
        Ok(false)
    } else {
        Err(Error::Undecidable(
            "norm comparison not separated at current precision".into(),
        ))
    }
}

fn require_in_zp(x: &PadicNumber, name: &str) -> Result<()> {
    if x.in_zp() {
        Ok(())
    } else {
        Err(Error::HypothesisFailed(format!("{name} is not in Z_p")))
    }
}

/// Evaluate the three polynomial estimates at x, y in Z_p:
/// |f(x)-f(y)| <= |x-y|, |f'(x)-f'(y)| <= |x-y|, and the second-order bound
/// |f(x)-f(y)-f'(y)(x-y)| <= |x-y|^2.
pub fn contraction_check(
    f: &Polynomial,
    x: &PadicNumber,
    y: &PadicNumber,
) -> Result<(bool, bool, bool)> {
    require_in_zp(x, "x")?;
    require_in_zp(y, "y")?;
    if x == y {
        return Ok((true, true, true));
    }
    let d = x.sub(y)?;
    let d_norm = d.norm();
    let d_sq_norm = d.mul(&d)?.norm();
    let fd = f.eval(x)?.sub(&f.eval(y)?)?;
    let first = norm_leq(&fd.norm(), &d_norm)?;
    let fp = f.derivative();
    let fpd = fp.eval(x)?.sub(&fp.eval(y)?)?;
    let second = norm_leq(&fpd.norm(), &d_norm)?;
    let taylor = fd.sub(&fp.eval(y)?.mul(&d)?)?;
    let third = norm_leq(&taylor.norm(), &d_sq_norm)?;
    Ok((first, second, third))
}

/// The Newton iteration record: successive approximations, their residual
/// norms |f(x_j)|_p, and the certified root.
#[derive(Clone, Debug)]
pub struct LiftTrace {
    pub iterates: Vec<PadicNumber>,
    pub residual_norms: Vec<BigRational>,
    pub root: PadicNumber,
}

const MAX_NEWTON_STEPS: u32 = 64;

/// Target absolute precision for a lift: the digits the inputs actually
/// carry, defaulting to 32 when everything is exact.
fn lift_target(f: &Polynomial, z: &PadicNumber) -> i64 {
    let mut t = z.abs_precision();
    for c in &f.coeffs {
        if let Some(a) = c.abs_precision() {
            t = Some(t.map_or(a, |cur| cur.min(a)));
        }
    }
    t.unwrap_or(32).max(1)
}

fn ball_from_integer(p: Prime, n: &BigInt, abs_precision: i64) -> PadicNumber {
    let reduced = n.mod_floor(&BigInt::from(p.power(abs_precision.max(0) as u64)));
    if reduced.is_zero() {
        return PadicNumber::zero_ball(p, abs_precision);
    }
    let v = vp_int(p, &reduced).expect("nonzero");
    debug_assert!(v < abs_precision);
    let unit = (&reduced / BigInt::from(p.power(v as u64)))
        .to_biguint()
        .expect("positive");
    PadicNumber::from_unit_parts(p, v, unit, (abs_precision - v) as u32).expect("unit residue")
}

/// Certified valuation of a ball, for hypothesis checks: Ok(v) when exact,
/// or the guaranteed lower bound for zero kinds.
fn hypothesis_valuation(x: &PadicNumber) -> (Option<i64>, i64) {
    match x.valuation_info() {
        ValuationInfo::Exact(v) => (Some(v), v),
        ValuationInfo::AtLeast(a) => (None, a),
        ValuationInfo::Infinite => (None, i64::MAX),
    }
}

/// Hensel's lemma, basic form: z in Z_p with f(z) ≡ 0 mod p and f'(z) a
/// unit lifts to a root w ≡ z mod p.
pub fn hensel_basic(f: &Polynomial, z: &PadicNumber) -> Result<LiftTrace> {
    require_in_zp(z, "z")?;
    let fz = f.eval(z)?;
    let (_, fz_floor) = hypothesis_valuation(&fz);
    if fz_floor < 1 {
        return Err(Error::HypothesisFailed(format!(
            "f(z) = {fz} is not certified to lie in pZ_p"
        )));
    }
    let fpz = f.derivative().eval(z)?;
    match fpz.valuation_info() {
        ValuationInfo::Exact(0) => {}
        ValuationInfo::Exact(v) => {
            return Err(Error::HypothesisFailed(format!(
                "|f'(z)|_p = p^(-{v}) is not 1"
            )))
        }
        ValuationInfo::Infinite => {
            return Err(Error::HypothesisFailed("f'(z) is exactly zero".into()))
        }
        ValuationInfo::AtLeast(_) => {
            return Err(Error::InsufficientPrecision(
                "f'(z) is indistinguishable from zero; cannot certify |f'(z)|_p = 1".into(),
            ))
        }
    }
    newton_lift(f, z, 0)
}

/// Hensel's lemma, refined form: z in Z_p with |f(z)|_p < |f'(z)|_p^2.
pub fn hensel_refined(f: &Polynomial, z: &PadicNumber) -> Result<LiftTrace> {
    require_in_zp(z, "z")?;
    let fpz = f.derivative().eval(z)?;
    let e = match fpz.valuation_info() {
        ValuationInfo::Exact(e) => e,
        ValuationInfo::Infinite => {
            return Err(Error::HypothesisFailed(
                "f'(z) is exactly zero; nothing is below |f'(z)|_p^2".into(),
            ))
        }
        ValuationInfo::AtLeast(_) => {
            return Err(Error::InsufficientPrecision(
                "f'(z) is indistinguishable from zero; cannot certify |f(z)|_p < |f'(z)|_p^2"
                    .into(),
            ))
        }
    };
    let fz = f.eval(z)?;
    let (fz_exact, fz_floor) = hypothesis_valuation(&fz);
    // |f(z)| < |f'(z)|^2 means v(f(z)) >= 2e + 1, certified either way
    if fz_floor < 2 * e + 1 {
        if fz_exact.is_some() {
            return Err(Error::HypothesisFailed(format!(
                "|f(z)|_p = p^(-{}) is not below |f'(z)|_p^2 = p^(-{})",
                fz_floor,
                2 * e
            )));
        }
        return Err(Error::InsufficientPrecision(
            "f(z) ball too coarse to certify |f(z)|_p < |f'(z)|_p^2".into(),
        ));
    }
    newton_lift(f, z, e)
}

/// Shared Newton loop on integer representatives mod p^W, where W is the
/// target precision plus a margin covering the p^e division losses. The
/// final root ball is certified by direct re-evaluation, independent of
/// the loop's internal bookkeeping.
fn newton_lift(f: &Polynomial, z: &PadicNumber, e: i64) -> Result<LiftTrace> {
    let p = f.prime;
    let target = lift_target(f, z);
    let w_prec = target + (MAX_NEWTON_STEPS as i64 + 2) * e + 4;
    let modulus = BigInt::from(p.power(w_prec as u64));
    let coeffs = f.integer_model(w_prec);
    let deriv_coeffs: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * BigInt::from(j))
        .collect();

    let z_scale = z.abs_precision().map_or(w_prec, |a| a.min(w_prec));
    let z_q = z.truncated_representative(z_scale)?;
    debug_assert!(z_q.denom().is_one());
    let mut x = z_q.numer().mod_floor(&modulus);

    let mut iterates = vec![ball_from_integer(p, &x, target)];
    let mut residual_norms = Vec::new();
    let mut converged = false;
    for _ in 0..MAX_NEWTON_STEPS {
        let fx = eval_int(&coeffs, &x, &modulus);
        let v_fx = if fx.is_zero() {
            w_prec
        } else {
            vp_int(p, &fx)?.min(w_prec)
        };
        residual_norms.push(if v_fx >= target {
            BigRational::zero()
        } else {
            p.power_rational(-v_fx)
        });
        if v_fx >= target {
            converged = true;
            break;
        }
        let fpx = eval_int(&deriv_coeffs, &x, &modulus);
        if fpx.is_zero() || vp_int(p, &fpx)? != e {
            return Err(Error::InsufficientPrecision(
                "derivative valuation drifted during iteration".into(),
            ));
        }
        let fpx_unit = &fpx / BigInt::from(p.power(e as u64));
        let inv = fpx_unit
            .extended_gcd(&modulus)
            .x
            .mod_floor(&modulus);
        // v(fx) > 2e ensures the quotient stays p-integral
        let delta = ((&fx / BigInt::from(p.power(e as u64))) * inv).mod_floor(&modulus);
        x = (x - delta).mod_floor(&modulus);
        iterates.push(ball_from_integer(p, &x, target));
    }
    if !converged {
        return Err(Error::NoConvergenceWitness);
    }

    let root = ball_from_integer(p, &x, target);
    let check = f.eval(&root)?;
    let certified = match check.valuation_info() {
        ValuationInfo::Infinite => true,
        ValuationInfo::AtLeast(a) => a >= target,
        ValuationInfo::Exact(_) => false,
    };
    if !certified {
        return Err(Error::InsufficientPrecision(
            "residual is not a zero ball at the target precision".into(),
        ));
    }
    Ok(LiftTrace {
        iterates,
        residual_norms,
        root,
    })
}

/// Outcome of a q-th root attempt on a unit.
#[derive(Clone, Debug)]
pub enum RootOutcome {
    Root(PadicNumber),
    NoRoot(String),
}

impl RootOutcome {
    pub fn root(&self) -> Option<&PadicNumber> {
        match self {
            RootOutcome::Root(w) => Some(w),
            RootOutcome::NoRoot(_) => None,
        }
    }
}

/// Solve x^q = a for a unit a (|a|_p = 1) and prime exponent q.
///
/// q different from p: a solution exists iff the residue of a is a q-th
/// power mod p (automatic when q does not divide p-1). q = p = 2: a
/// solution exists iff a ≡ 1 mod 8. q = p odd: the refined hypothesis at
/// the residue lift is attempted and its outcome reported; no complete
/// criterion is claimed.
pub fn qth_root(a: &PadicNumber, q: Prime) -> Result<RootOutcome> {
    let p = a.prime();
    if a.valuation() != Some(0) {
        return Err(Error::NotAUnit);
    }
    let n = a.rel_precision().expect("unit kind") as i64;
    let one = PadicNumber::one(p, n as u32);
    // f(x) = x^q - a
    let mut coeffs = vec![a.neg()];
    coeffs.resize(q.get() as usize, PadicNumber::exact_zero(p));
    coeffs.push(one);
    let f = Polynomial::new(p, coeffs)?;

    if q != p {
        let a_res = a
            .truncated_representative(1)?
            .numer()
            .to_u64()
            .expect("residue below p");
        let root_res = (1..p.get()).find(|&r| {
            let mut acc = 1u128;
            for _ in 0..q.get() {
                acc = acc * r as u128 % p.get() as u128;
            }
            acc == a_res as u128
        });
        return match root_res {
            Some(r) => {
                let z = PadicNumber::from_integer(r as i64, p, n as u32);
                let trace = hensel_basic(&f, &z)?;
                Ok(RootOutcome::Root(trace.root))
            }
            None => {
                debug_assert!((p.get() - 1).is_multiple_of(q.get()));
                Ok(RootOutcome::NoRoot("residue obstruction".into()))
            }
        };
    }

    if p.get() == 2 {
        if n < 3 {
            return Err(Error::InsufficientPrecision(
                "deciding squares in Z_2 needs at least 3 digits".into(),
            ));
        }
        let a_mod_8 = a.truncated_representative(3)?;
        if a_mod_8 == BigRational::one() {
            let z = PadicNumber::one(p, n as u32);
            let trace = hensel_refined(&f, &z)?;
            return Ok(RootOutcome::Root(trace.root));
        }
        return Ok(RootOutcome::NoRoot("mod 8 obstruction".into()));
    }

    // q = p odd: try the refined hypothesis from the residue lift
    let c = a.truncated_representative(1)?;
    let z = PadicNumber::from_rational(&c, p, n as u32);
    match hensel_refined(&f, &z) {
        Ok(trace) => Ok(RootOutcome::Root(trace.root)),
        Err(Error::HypothesisFailed(_)) => {
            Ok(RootOutcome::NoRoot("refined hypothesis fails".into()))
        }
        Err(other) => Err(other),
    }
}

/// Split x = p^(l n) x1 with x1 a unit, the normalization that reduces
/// x^n-th-power questions to units. Fails with NotAPowerShape when v(x)
/// is not divisible by n.
#[derive(Clone, Debug, PartialEq)]
pub enum PowerShape {
    Reduced { l: i64, unit: PadicNumber },
    NotAPowerShape,
}

pub fn unit_power_reduction(x: &PadicNumber, n: u64) -> Result<PowerShape> {
    assert!(n >= 1);
    let v = match x.valuation_info() {
        ValuationInfo::Exact(v) => v,
        ValuationInfo::Infinite => return Err(Error::ZeroValuation),
        ValuationInfo::AtLeast(_) => {
            return Err(Error::Undecidable(
                "valuation of a zero ball is not determined".into(),
            ))
        }
    };
    if v.rem_euclid(n as i64) != 0 {
        return Ok(PowerShape::NotAPowerShape);
    }
    let l = v / n as i64;
    let unit = x.mul_rational(&x.prime().power_rational(-v));
    Ok(PowerShape::Reduced { l, unit })
}
