//! Central simple algebras `A = M_m(D)` over `F`, their principal orders
//! normalized by `E^×`, and Brauer-group signs.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::chartools::Sign;
use crate::error::{Error, Result};
use crate::localfield::{ExtensionModel, SubfieldHandle};

/// `A = M_m(D)` with `D` of index `d` and Hasse invariant `h/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CsaParams {
    pub m: u64,
    pub d: u64,
    pub h: u64,
}

impl CsaParams {
    pub fn new(m: u64, d: u64, h: u64) -> Result<Self> {
        if m == 0 || d == 0 {
            return Err(Error::InvalidCsa("m and d must be positive".into()));
        }
        if h >= d {
            return Err(Error::InvalidCsa(format!("h = {h} must be below d = {d}")));
        }
        if gcd(h, d) != 1 {
            return Err(Error::InvalidCsa(format!(
                "gcd(h, d) = gcd({h}, {d}) is not 1"
            )));
        }
        Ok(Self { m, d, h })
    }

    pub fn split(n: u64) -> Self {
        Self { m: n, d: 1, h: 0 }
    }

    pub fn n(&self) -> u64 {
        self.m * self.d
    }

    pub fn is_split(&self) -> bool {
        self.d == 1
    }

    pub fn invariant(&self) -> BrauerClass {
        BrauerClass::new(self.h as i64, self.d as i64)
    }

    /// All algebras of degree `n`: every `(m, d)` with `md = n` and every
    /// `h` prime to `d`, in lexicographic order of `(d, h)`.
    pub fn all_of_degree(n: u64) -> Vec<Self> {
        let mut out = Vec::new();
        for d in 1..=n {
            if !n.is_multiple_of(d) {
                continue;
            }
            for h in 0..d {
                if gcd(h, d) == 1 {
                    out.push(Self { m: n / d, d, h });
                }
            }
        }
        out
    }
}

/// Invariants of the principal order `𝔄` of `A` normalized by `E^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderInvariants {
    pub r: u64,
    pub s: u64,
    pub e_f: u64,
    pub e_e: u64,
}

/// An element of `Q/Z`, kept reduced with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BrauerClass(Ratio<i64>);

impl BrauerClass {
    pub fn new(num: i64, den: i64) -> Self {
        let r = Ratio::new(num, den);
        Self(r - r.floor())
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn scale(&self, k: i64) -> Self {
        let r = self.0 * k;
        Self(r - r.floor())
    }

    pub fn is_two_torsion(&self) -> bool {
        *self.0.denom() <= 2
    }
}

pub fn order_invariants(x: &ExtensionModel, a: &CsaParams) -> Result<OrderInvariants> {
    let (e, f) = (x.params.e, x.params.f);
    if a.n() != e * f {
        return Err(Error::DimensionMismatch {
            md: a.n(),
            ef: e * f,
        });
    }
    let r = e / gcd(a.d, e);
    Ok(OrderInvariants {
        r,
        s: gcd(f, a.m),
        e_f: a.d * r,
        e_e: a.d / gcd(a.d, e),
    })
}

/// Invariants of the centralizer `A_k` of `E_k` in `A`, as
/// `(m(A_k), d(A_k), e(𝔄_k/O_E))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerInvariants {
    pub m_k: u64,
    pub d_k: u64,
    pub e_over_e: u64,
}

pub fn centralizer_invariants(
    x: &ExtensionModel,
    a: &CsaParams,
    h_k: &SubfieldHandle,
) -> Result<CentralizerInvariants> {
    if !x.gamma_e().is_subset_of(h_k) {
        return Err(Error::NotASubgroup);
    }
    let (e_k, f_k) = x.subfield_invariants(h_k);
    let deg_k = e_k * f_k;
    let f_rel = x.params.f / f_k;
    Ok(CentralizerInvariants {
        m_k: gcd(a.m, x.params.n() / deg_k),
        d_k: a.d / gcd(a.d, deg_k),
        e_over_e: f_rel / gcd(a.m, f_rel),
    })
}

/// The sign of `inv_F(n_α·[A])`, which must be 0 or 1/2.
pub fn brauer_torsion_sign(a: &CsaParams, n_alpha: u64) -> Result<Sign> {
    let class = a.invariant().scale(n_alpha as i64);
    if !class.is_two_torsion() {
        let v = class.value();
        return Err(Error::NotTwoTorsion {
            num: *v.numer(),
            den: *v.denom(),
        });
    }
    Ok(Sign::from_parity(*class.value().numer() != 0))
}

/// `(-1)^{m·v}`.
pub fn symram_epsilon_product(a: &CsaParams, v: i64) -> Sign {
    Sign::Minus.pow(a.m as i64 * v)
}
