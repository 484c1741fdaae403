//! Quadratic symbols on residue fields, computed from exponent parities.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i64", try_from = "i64")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `(-1)^k`.
    pub fn pow_neg_one(k: u64) -> Self {
        Self::from_parity(k % 2 == 1)
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            self
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        s.value()
    }
}

impl TryFrom<i64> for Sign {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::NonQuadratic(other)),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A `{±1}`-valued character of `E^×` trivial on `1 + 𝔭_E`, given by its
/// values on the fixed generator `ζ_E` of `μ_E` and on `ϖ_E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TameQuadChar {
    pub on_unit_gen: Sign,
    pub on_uniformizer: Sign,
}

impl TameQuadChar {
    pub const TRIVIAL: Self = Self {
        on_unit_gen: Sign::Plus,
        on_uniformizer: Sign::Plus,
    };

    pub fn new(on_unit_gen: i64, on_uniformizer: i64) -> Result<Self> {
        Ok(Self {
            on_unit_gen: Sign::try_from(on_unit_gen)?,
            on_uniformizer: Sign::try_from(on_uniformizer)?,
        })
    }

    pub fn from_signs(on_unit_gen: Sign, on_uniformizer: Sign) -> Self {
        Self {
            on_unit_gen,
            on_uniformizer,
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::TRIVIAL
    }
}

impl Mul for TameQuadChar {
    type Output = TameQuadChar;
    fn mul(self, rhs: Self) -> Self {
        char_mul(self, rhs)
    }
}

impl fmt::Display for TameQuadChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.on_unit_gen, self.on_uniformizer)
    }
}

pub fn char_mul(a: TameQuadChar, b: TameQuadChar) -> TameQuadChar {
    TameQuadChar {
        on_unit_gen: a.on_unit_gen * b.on_unit_gen,
        on_uniformizer: a.on_uniformizer * b.on_uniformizer,
    }
}

/// Value at `ζ_E^u · ϖ_E^v`.
pub fn char_eval(chi: TameQuadChar, u: i64, v: i64) -> Sign {
    chi.on_unit_gen.pow(u) * chi.on_uniformizer.pow(v)
}

/// A root of unity `ζ^exp` in a cyclic group `μ` of order `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MuExponent {
    pub exp: u64,
    pub modulus: u64,
}

impl MuExponent {
    pub fn new(exp: u64, modulus: u64) -> Self {
        Self {
            exp: exp % modulus,
            modulus,
        }
    }

    /// Exponent of this element with respect to the generator
    /// `ζ^{modulus/(size-1)}` of the subgroup of order `size - 1`.
    pub fn reduced_index(&self, size: u64) -> Result<u64> {
        let sub = size - 1;
        let not_in = Error::NotInSubfield {
            exp: self.exp,
            modulus: self.modulus,
            sub,
        };
        if sub == 0 || !self.modulus.is_multiple_of(sub) {
            return Err(not_in);
        }
        let step = self.modulus / sub;
        if !self.exp.is_multiple_of(step) {
            return Err(not_in);
        }
        Ok(self.exp / step)
    }
}

/// The quadratic character of `k^×` for `|k| = q_alpha`.
pub fn legendre_kx(q_alpha: u64, x: MuExponent) -> Result<Sign> {
    Ok(Sign::from_parity(x.reduced_index(q_alpha)? % 2 == 1))
}

/// The quadratic character of the norm-one group `k^1 ⊂ k^×`, where
/// `|k| = q_alpha = q_pm²`. `k^1` is cyclic of order `q_pm + 1`, generated by
/// `ζ_α^{q_pm - 1}`.
pub fn legendre_k1(q_alpha: u64, q_pm: u64, x: MuExponent) -> Result<Sign> {
    if q_pm.checked_mul(q_pm) != Some(q_alpha) {
        return Err(Error::InvalidParams(format!(
            "{q_alpha} is not the square of {q_pm}"
        )));
    }
    let index = x.reduced_index(q_alpha)?;
    if index % (q_pm - 1) != 0 {
        return Err(Error::NotNormOne { index, q_pm });
    }
    Ok(Sign::from_parity((index / (q_pm - 1)) % 2 == 1))
}

/// Sign of `y ↦ x·y` as a permutation of a field with `q` elements.
pub fn perm_sign(q: u64, x: MuExponent) -> Result<Sign> {
    let index = x.reduced_index(q)?;
    let n = q - 1;
    let order = n / gcd(index, n);
    Ok(Sign::pow_neg_one(n - n / order))
}

/// Same as [`perm_sign`], by walking the cycles of the permutation.
pub fn perm_sign_bruteforce(q: u64, x: MuExponent) -> Result<Sign> {
    let index = x.reduced_index(q)?;
    let n = (q - 1) as usize;
    let mut seen = vec![false; n];
    // 0 is a fixed point, so it adds one cycle on top of the nonzero ones
    let mut cycles = 1usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = (k + index as usize) % n;
        }
    }
    Ok(Sign::from_parity((q as usize - cycles) % 2 == 1))
}
