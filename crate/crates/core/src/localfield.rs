//! Exponent-arithmetic model of a tamely ramified extension `E/F`.
//!
//! The Galois closure `L = E[z_e, z_{E/F,e}]` is unramified over `E`, so
//! `Gal(L/F)` is generated by its action on the uniformizer `ϖ_E` and on the
//! roots of unity `μ_L`. We fix an abstract generator `ζ` of `μ_L` and record
//! an automorphism `g` as the pair `(a, c)` with
//!
//! ```text
//! g(ϖ_E) = ζ^a · ϖ_E,    g(x) = x^(q^c)  for x in μ_L.
//! ```
//!
//! No field arithmetic is performed anywhere; `μ_L` is `Z/(Q-1)` and the
//! Frobenius is multiplication of exponents by `q`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, mul_mod, pow_mod, prime_power, solve_linear};
use crate::error::{Error, Result};

/// Parameters of a tame extension `E/F` of degree `n = e·f`.
///
/// `w` is the exponent of `z_{E/F}` (where `ϖ_E^e = z_{E/F}·ϖ_F`) with respect
/// to a generator of `μ_E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtensionParams {
    pub q: u64,
    pub e: u64,
    pub f: u64,
    pub w: u64,
}

impl ExtensionParams {
    pub fn new(q: u64, e: u64, f: u64, w: u64) -> Result<Self> {
        let (p, _) = prime_power(q).ok_or(Error::NotOddPrimePower(q))?;
        if p == 2 {
            return Err(Error::NotOddPrimePower(q));
        }
        if e == 0 || f == 0 {
            return Err(Error::InvalidParams("e and f must be positive".into()));
        }
        if e.is_multiple_of(p) {
            return Err(Error::TameViolation { p, e });
        }
        let qf = checked_pow(q, f)
            .ok_or_else(|| Error::InvalidParams(format!("q^f overflows for q={q}, f={f}")))?;
        if w >= qf - 1 {
            return Err(Error::InvalidParams(format!(
                "w = {w} must lie in [0, q^f - 1 = {})",
                qf - 1
            )));
        }
        Ok(Self { q, e, f, w })
    }

    pub fn n(&self) -> u64 {
        self.e * self.f
    }

    pub fn residue_char(&self) -> u64 {
        prime_power(self.q).map(|(p, _)| p).unwrap_or(0)
    }

    /// `q^f`, the size of the residue field of `E`.
    pub fn residue_size(&self) -> u64 {
        self.q.pow(self.f as u32)
    }
}

/// An element of `Gal(L/F)` in `(a, c)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisElement {
    pub a: u64,
    pub c: u64,
}

impl fmt::Display for GaloisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.c)
    }
}

/// A subgroup `H` with `Gal(L/E) ⊆ H ⊆ Gal(L/F)`, i.e. an intermediate field
/// `F ⊆ M ⊆ E` through the Galois correspondence.
///
/// Membership is a bitmask over the element indices of the owning model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubfieldHandle {
    bits: Vec<u64>,
    order: usize,
}

impl SubfieldHandle {
    fn from_members(group_order: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = vec![0u64; group_order.div_ceil(64)];
        let mut order = 0;
        for i in members {
            let (w, b) = (i / 64, i % 64);
            if bits[w] & (1 << b) == 0 {
                bits[w] |= 1 << b;
                order += 1;
            }
        }
        Self { bits, order }
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.bits[idx / 64] & (1 << (idx % 64)) != 0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.bits.len() * 64).filter(move |&i| self.contains(i))
    }

    pub fn is_subset_of(&self, other: &SubfieldHandle) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// The finite presentation of `Gal(L/F)` for one set of [`ExtensionParams`].
#[derive(Debug, Clone)]
pub struct ExtensionModel {
    pub params: ExtensionParams,
    /// Residue degree of `L/F`.
    pub f_l: u64,
    /// `Q = q^{f_L}`, the size of `k_L`.
    pub big_q: u64,
    /// Exponent of `z_{E/F}` in `μ_L`.
    pub w_l: u64,
    /// Exponent of the fixed `e`-th root `z_{E/F,e}`.
    pub w_e: u64,
    pub sigma: GaloisElement,
    pub phi: GaloisElement,
    elements: Vec<GaloisElement>,
    index: HashMap<GaloisElement, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    q_powers: Vec<u64>,
    gamma_e: SubfieldHandle,
    gamma_f: SubfieldHandle,
    inertia: SubfieldHandle,
    identity: usize,
}

impl ExtensionModel {
    pub fn build(params: ExtensionParams) -> Result<Self> {
        let ExtensionParams { q, e, f, w } = params;
        let qf = params.residue_size();
        let bound = f * e * e;
        let mut found = None;
        let mut fp = f;
        while fp <= bound {
            let big = checked_pow(q, fp)
                .ok_or_else(|| Error::InvalidParams(format!("q^{fp} overflows")))?;
            let w_l = (w as u128 * ((big - 1) / (qf - 1)) as u128 % (big - 1) as u128) as u64;
            if (big - 1) % e == 0 && w_l.is_multiple_of(e) {
                found = Some((fp, big, w_l));
                break;
            }
            fp += f;
        }
        let (f_l, big_q, w_l) = found.ok_or(Error::SearchExhausted { bound })?;
        let modulus = big_q - 1;
        let w_e = solve_linear(e, w_l, modulus).ok_or(Error::SearchExhausted { bound })?;

        let q_powers: Vec<u64> = (0..f_l).map(|c| pow_mod(q, c, modulus)).collect();
        let mut elements = Vec::with_capacity((e * f_l) as usize);
        for c in 0..f_l {
            // g fixes ϖ_F:  e·a ≡ (q^c − 1)·w_L  (mod Q − 1)
            let rhs = mul_mod((q_powers[c as usize] + modulus - 1) % modulus, w_l, modulus);
            let a0 = solve_linear(e, rhs, modulus).ok_or(Error::SearchExhausted { bound })?;
            let step = modulus / e;
            for k in 0..e {
                elements.push(GaloisElement {
                    a: (a0 + k * step) % modulus,
                    c,
                });
            }
        }
        elements.sort();
        let index: HashMap<_, _> = elements.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        let order = elements.len();

        let mut model = Self {
            params,
            f_l,
            big_q,
            w_l,
            w_e,
            sigma: GaloisElement {
                a: modulus / e % modulus,
                c: 0,
            },
            phi: GaloisElement {
                a: mul_mod(w_e, q - 1, modulus),
                c: 1 % f_l,
            },
            elements,
            index,
            mul: Vec::new(),
            inv: Vec::new(),
            q_powers,
            gamma_e: SubfieldHandle::from_members(order, []),
            gamma_f: SubfieldHandle::from_members(order, 0..order),
            inertia: SubfieldHandle::from_members(order, []),
            identity: 0,
        };
        let mut mul = vec![0u32; order * order];
        for i in 0..order {
            for j in 0..order {
                let prod = model.compose(model.elements[i], model.elements[j]);
                mul[i * order + j] = model.index[&prod] as u32;
            }
        }
        model.mul = mul;
        model.identity = model.index[&GaloisElement { a: 0, c: 0 }];
        model.inv = (0..order)
            .map(|i| {
                (0..order)
                    .find(|&j| model.mul[i * order + j] as usize == model.identity)
                    .expect("finite group element has an inverse") as u32
            })
            .collect();
        model.gamma_e = SubfieldHandle::from_members(
            order,
            (0..order).filter(|&i| {
                let g = model.elements[i];
                g.a == 0 && g.c.is_multiple_of(f)
            }),
        );
        model.inertia =
            SubfieldHandle::from_members(order, (0..order).filter(|&i| model.elements[i].c == 0));
        Ok(model)
    }

    /// `|μ_L| = Q − 1`.
    pub fn mu_order(&self) -> u64 {
        self.big_q - 1
    }

    /// Exponent step embedding `μ_E` into `μ_L`: `ζ_E = ζ^{u_E}`.
    pub fn mu_e_step(&self) -> u64 {
        self.mu_order() / (self.params.residue_size() - 1)
    }

    pub fn q_power(&self, c: u64) -> u64 {
        self.q_powers[(c % self.f_l) as usize]
    }

    /// Group law: `(a, c)(a', c') = (a + q^c·a', c + c')`.
    pub fn compose(&self, g: GaloisElement, h: GaloisElement) -> GaloisElement {
        let m = self.mu_order();
        GaloisElement {
            a: (g.a + mul_mod(self.q_power(g.c), h.a, m)) % m,
            c: (g.c + h.c) % self.f_l,
        }
    }

    pub fn inverse(&self, g: GaloisElement) -> GaloisElement {
        self.elements[self.inv[self.index[&g]] as usize]
    }

    pub fn enumerate_group(&self) -> &[GaloisElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, idx: usize) -> GaloisElement {
        self.elements[idx]
    }

    pub fn index_of(&self, g: GaloisElement) -> Option<usize> {
        self.index.get(&g).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.order() + j] as usize
    }

    pub fn inv_idx(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn pow_idx(&self, i: usize, k: u64) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul_idx(acc, i))
    }

    /// Index of `σ^i φ^j`.
    pub fn sigma_phi(&self, i: u64, j: u64) -> usize {
        let s = self.index[&self.sigma];
        let p = self.index[&self.phi];
        self.mul_idx(self.pow_idx(s, i), self.pow_idx(p, j))
    }

    pub fn gamma_e(&self) -> &SubfieldHandle {
        &self.gamma_e
    }

    pub fn gamma_f(&self) -> &SubfieldHandle {
        &self.gamma_f
    }

    /// Inertia subgroup `{g : c_g = 0}`.
    pub fn inertia(&self) -> &SubfieldHandle {
        &self.inertia
    }

    /// Validate an arbitrary set of element indices as a subfield handle.
    pub fn subfield(&self, members: &[usize]) -> Result<SubfieldHandle> {
        if members.iter().any(|&i| i >= self.order()) {
            return Err(Error::NotASubgroup);
        }
        let h = SubfieldHandle::from_members(self.order(), members.iter().copied());
        let closed = h
            .members()
            .all(|i| h.members().all(|j| h.contains(self.mul_idx(i, j))));
        if !closed || !self.gamma_e.is_subset_of(&h) {
            return Err(Error::NotASubgroup);
        }
        Ok(h)
    }

    /// Smallest subgroup containing `base` and `extra`.
    pub fn closure(&self, base: &SubfieldHandle, extra: usize) -> SubfieldHandle {
        let mut members: Vec<usize> = base.members().collect();
        let mut seen: BTreeSet<usize> = members.iter().copied().collect();
        let mut queue: VecDeque<usize> = VecDeque::from([extra]);
        while let Some(x) = queue.pop_front() {
            if !seen.insert(x) {
                continue;
            }
            members.push(x);
            for &y in members.clone().iter() {
                for z in [self.mul_idx(x, y), self.mul_idx(y, x)] {
                    if !seen.contains(&z) {
                        queue.push_back(z);
                    }
                }
            }
        }
        SubfieldHandle::from_members(self.order(), members)
    }

    /// Every subgroup between `Gal(L/E)` and `Gal(L/F)`, sorted by
    /// `(order, members)` so the listing is deterministic.
    pub fn intermediate_subgroups(&self) -> Vec<SubfieldHandle> {
        let mut found: BTreeSet<SubfieldHandle> = BTreeSet::from([self.gamma_e.clone()]);
        let mut queue = VecDeque::from([self.gamma_e.clone()]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.contains(g) {
                    continue;
                }
                let k = self.closure(&h, g);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort_by(|a, b| {
            a.order().cmp(&b.order()).then_with(|| {
                a.members()
                    .collect::<Vec<_>>()
                    .cmp(&b.members().collect::<Vec<_>>())
            })
        });
        out
    }

    /// `(e(M/F), f(M/F))` for the fixed field `M` of `H`.
    pub fn subfield_invariants(&self, h: &SubfieldHandle) -> (u64, u64) {
        let ram = h.members().filter(|&i| self.inertia.contains(i)).count() as u64;
        let order = h.order() as u64;
        (self.params.e / ram, self.f_l * ram / order)
    }

    /// `[M:F]` for the fixed field of `H`.
    pub fn subfield_degree(&self, h: &SubfieldHandle) -> u64 {
        (self.order() / h.order()) as u64
    }

    /// Intersection of two subgroups.
    pub fn intersect(&self, a: &SubfieldHandle, b: &SubfieldHandle) -> SubfieldHandle {
        SubfieldHandle::from_members(self.order(), a.members().filter(|&i| b.contains(i)))
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, g: usize, h: &SubfieldHandle) -> SubfieldHandle {
        let gi = self.inv_idx(g);
        SubfieldHandle::from_members(
            self.order(),
            h.members().map(|x| self.mul_idx(self.mul_idx(g, x), gi)),
        )
    }

    pub fn set_from(&self, members: impl IntoIterator<Item = usize>) -> SubfieldHandle {
        SubfieldHandle::from_members(self.order(), members)
    }

    /// Text name of an intermediate field: `E`, `F`, its degree over `F`
    /// when that is unambiguous, or `<degree>.<k>` with `k` counting fields of
    /// that degree in [`Self::intermediate_subgroups`] order.
    pub fn subfield_selector(&self, h: &SubfieldHandle) -> Result<String> {
        if h == &self.gamma_e {
            return Ok("E".into());
        }
        if h == &self.gamma_f {
            return Ok("F".into());
        }
        let deg = self.subfield_degree(h);
        let same: Vec<_> = self
            .intermediate_subgroups()
            .into_iter()
            .filter(|k| self.subfield_degree(k) == deg)
            .collect();
        match same.iter().position(|k| k == h) {
            Some(_) if same.len() == 1 => Ok(deg.to_string()),
            Some(k) => Ok(format!("{deg}.{k}")),
            None => Err(Error::NotASubgroup),
        }
    }

    pub fn parse_subfield(&self, token: &str) -> Result<SubfieldHandle> {
        let unknown = || Error::UnknownSubfield(token.to_string());
        match token.trim() {
            "E" => return Ok(self.gamma_e.clone()),
            "F" => return Ok(self.gamma_f.clone()),
            _ => {}
        }
        let (deg, k) = match token.trim().split_once('.') {
            Some((d, k)) => (d, Some(k.parse::<usize>().map_err(|_| unknown())?)),
            None => (token.trim(), None),
        };
        let deg: u64 = deg.parse().map_err(|_| unknown())?;
        let same: Vec<_> = self
            .intermediate_subgroups()
            .into_iter()
            .filter(|h| self.subfield_degree(h) == deg)
            .collect();
        match k {
            None if same.len() == 1 => Ok(same[0].clone()),
            Some(k) => same.get(k).cloned().ok_or_else(unknown),
            None => Err(unknown()),
        }
    }
}
