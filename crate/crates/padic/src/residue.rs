//! Residue rings Z/p^j Z, reduction from Z_p, and their finite characters.
//!
//! Reduction forgets everything below exponent j and is a ring
//! homomorphism on the certified-integral part of Q_p. Characters of the
//! additive group Z/p^j Z are evaluated exactly as rotation numbers
//! k x / p^j mod 1 in [0, 1), so no transcendental function ever enters.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number::PadicNumber;
use crate::valuation::Prime;

/// An element of Z/p^j Z, stored by its canonical representative in
/// [0, p^j).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueClass {
    prime: Prime,
    level: u32,
    rep: BigUint,
}

impl ResidueClass {
    /// level >= 1; the representative is reduced mod p^level.
    pub fn new(prime: Prime, level: u32, rep: &BigInt) -> Result<Self> {
        if level == 0 {
            return Err(Error::Parse("residue level must be at least 1".into()));
        }
        let m = BigInt::from(prime.power(level as u64));
        let r = rep.mod_floor(&m);
        Ok(ResidueClass {
            prime,
            level,
            rep: r.to_biguint().expect("mod_floor is nonnegative"),
        })
    }

    pub fn zero(prime: Prime, level: u32) -> Self {
        ResidueClass::new(prime, level, &BigInt::zero()).expect("level checked by caller")
    }

    pub fn one(prime: Prime, level: u32) -> Self {
        ResidueClass::new(prime, level, &BigInt::one()).expect("level checked by caller")
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn representative(&self) -> &BigUint {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.prime.power(self.level as u64);
        Ok(ResidueClass {
            prime: self.prime,
            level: self.level,
            rep: (&self.rep + &other.rep) % m,
        })
    }

    pub fn neg(&self) -> Self {
        let m = self.prime.power(self.level as u64);
        let rep = if self.rep.is_zero() {
            BigUint::zero()
        } else {
            m - &self.rep
        };
        ResidueClass {
            prime: self.prime,
            level: self.level,
            rep,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.prime.power(self.level as u64);
        Ok(ResidueClass {
            prime: self.prime,
            level: self.level,
            rep: (&self.rep * &other.rep) % m,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let m = self.prime.power(self.level as u64);
        let mut base = self.rep.clone();
        let mut acc = BigUint::one() % &m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base % &m;
            }
            base = &base * &base % &m;
            e >>= 1;
        }
        ResidueClass {
            prime: self.prime,
            level: self.level,
            rep: acc,
        }
    }

    /// Inverse of a class whose representative is coprime to p. Works at
    /// every level, not only level 1: units mod p stay units mod p^j.
    pub fn unit_inverse(&self) -> Result<Self> {
        if (&self.rep % self.prime.to_biguint()).is_zero() {
            return Err(Error::NotAUnitResidue);
        }
        let m = BigInt::from(self.prime.power(self.level as u64));
        let r = BigInt::from(self.rep.clone());
        let e = r.extended_gcd(&m);
        debug_assert!(e.gcd.is_one());
        let inv = e.x.mod_floor(&m);
        Ok(ResidueClass {
            prime: self.prime,
            level: self.level,
            rep: inv.to_biguint().expect("mod_floor is nonnegative"),
        })
    }
}

impl std::fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {}^{})", self.rep, self.prime, self.level)
    }
}

/// Reduce a ball known to lie in Z_p to its class mod p^j. Needs certified
/// nonnegative valuation and at least j digits of absolute precision.
pub fn reduce(x: &PadicNumber, level: u32) -> Result<ResidueClass> {
    if level == 0 {
        return Err(Error::Parse("residue level must be at least 1".into()));
    }
    if !x.in_zp() {
        return Err(Error::HypothesisFailed(
            "reduction needs a certified element of Z_p".into(),
        ));
    }
    let rep = x.truncated_representative(level as i64)?;
    debug_assert!(rep.is_integer());
    ResidueClass::new(x.prime(), level, rep.numer())
}

/// The canonical section of reduce: lift the representative as an exact
/// integer. reduce(lift(r), j) == r, and lift(0) is exactly zero.
pub fn lift(r: &ResidueClass, rel_precision: u32) -> PadicNumber {
    let value = BigRational::from_integer(BigInt::from(r.rep.clone()));
    PadicNumber::from_rational(&value, r.prime, rel_precision.max(r.level))
}

/// A character of the additive group Z/p^j Z, indexed by its frequency k:
/// x maps to the rotation number k x / p^j mod 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteCharacter {
    prime: Prime,
    level: u32,
    frequency: BigUint,
}

impl FiniteCharacter {
    pub fn new(prime: Prime, level: u32, frequency: &BigInt) -> Result<Self> {
        let k = ResidueClass::new(prime, level, frequency)?;
        Ok(FiniteCharacter {
            prime,
            level,
            frequency: k.rep,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn frequency(&self) -> &BigUint {
        &self.frequency
    }

    pub fn is_trivial(&self) -> bool {
        self.frequency.is_zero()
    }

    /// Rotation number of the class: k rep / p^j mod 1 as an exact
    /// rational in [0, 1).
    pub fn eval_class(&self, x: &ResidueClass) -> Result<BigRational> {
        if x.prime != self.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), x.prime.get()));
        }
        if x.level != self.level {
            return Err(Error::LevelMismatch(self.level, x.level));
        }
        let m = self.prime.power(self.level as u64);
        let num = &self.frequency * &x.rep % &m;
        Ok(BigRational::new(BigInt::from(num), BigInt::from(m)))
    }

    /// Evaluate on a ball through reduction mod p^j; constant on cosets of
    /// p^j Z_p by construction.
    pub fn eval(&self, x: &PadicNumber) -> Result<BigRational> {
        self.eval_class(&reduce(x, self.level)?)
    }
}

impl std::fmt::Display for FiniteCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "chi_{{{}}} (mod {}^{})",
            self.frequency, self.prime, self.level
        )
    }
}

/// Convenience: the set of all p^j classes at a level, in representative
/// order. Desk-scale levels only.
pub fn all_classes(prime: Prime, level: u32) -> Vec<ResidueClass> {
    let m = prime
        .power(level as u64)
        .to_u64()
        .expect("desk-scale level");
    (0..m)
        .map(|r| ResidueClass::new(prime, level, &BigInt::from(r)).expect("level >= 1"))
        .collect()
}
