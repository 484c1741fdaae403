//! Shapes of Howe factorizations: a chain of subfields
//! `E ⊇ E_0 ⊋ E_1 ⊋ … ⊋ E_t = F` with jump levels `a_0 < … < a_{t-1}`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::csa::{centralizer_invariants, order_invariants, CsaParams};
use crate::error::{Error, Result};
use crate::localfield::{ExtensionModel, SubfieldHandle};

/// `subgroups[k] = Γ_{L/E_k}` for `k = 0..=t`, so the last entry is `Γ_{L/F}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerShape {
    pub subgroups: Vec<SubfieldHandle>,
    pub levels: Vec<u64>,
}

impl TowerShape {
    pub fn t(&self) -> usize {
        self.levels.len()
    }

    /// The shape with `t = 0` and no jumps.
    pub fn empty(x: &ExtensionModel) -> Self {
        Self {
            subgroups: vec![x.gamma_f().clone()],
            levels: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpData {
    pub k: usize,
    pub a_k: u64,
    /// `e(𝔄_{k+1}/O_E)`.
    pub e_next: u64,
    pub product_even: bool,
    /// `j_k = a_k·e(𝔄/O_E)/2`.
    pub j_k: Ratio<i64>,
}

pub fn validate_shape(x: &ExtensionModel, shape: &TowerShape) -> Result<()> {
    let t = shape.t();
    if shape.subgroups.len() != t + 1 {
        return Err(Error::MalformedShape(format!(
            "{} subfields for {} levels",
            shape.subgroups.len(),
            t
        )));
    }
    if shape
        .subgroups
        .iter()
        .any(|h| h.order() > x.order() || h.order() == 0)
    {
        return Err(Error::MalformedShape("subgroup from another model".into()));
    }
    if shape.subgroups[t] != *x.gamma_f() {
        return Err(Error::MalformedShape("the tower must end at F".into()));
    }
    if !x.gamma_e().is_subset_of(&shape.subgroups[0]) {
        return Err(Error::MalformedShape("E_0 is not a subfield of E".into()));
    }
    // The t = 0 shape carries no jump, so nothing constrains E/F.
    if t > 0 && x.intersect(&shape.subgroups[0], x.inertia()).order() != 1 {
        return Err(Error::UnramifiedViolation);
    }
    for k in 0..t {
        let (lo, hi) = (&shape.subgroups[k], &shape.subgroups[k + 1]);
        if !lo.is_subset_of(hi) || lo == hi {
            return Err(Error::NonStrictTower(k));
        }
    }
    if shape.levels.first() == Some(&0) || shape.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NonIncreasingLevels);
    }
    Ok(())
}

fn increasing_tuples(len: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(start: u64, len: usize, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if len == 0 {
            out.push(cur.clone());
            return;
        }
        for a in start..=max {
            cur.push(a);
            go(a + 1, len - 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, len, max, &mut Vec::new(), &mut out);
    out
}

/// Strict chains `H_0 ⊊ … ⊊ H_t = Γ_{L/F}` of length `t` with `E/E_0` unramified.
fn chains(x: &ExtensionModel, lattice: &[SubfieldHandle], t: usize) -> Vec<Vec<SubfieldHandle>> {
    let mut partial: Vec<Vec<SubfieldHandle>> = vec![vec![x.gamma_f().clone()]];
    for _ in 0..t {
        let mut next = Vec::new();
        for chain in &partial {
            let top = &chain[0];
            for h in lattice {
                if h != top && h.is_subset_of(top) {
                    let mut c = vec![h.clone()];
                    c.extend(chain.iter().cloned());
                    next.push(c);
                }
            }
        }
        partial = next;
    }
    partial.retain(|c| t == 0 || x.intersect(&c[0], x.inertia()).order() == 1);
    partial
}

pub fn enumerate_shapes(x: &ExtensionModel, max_t: usize, max_level: u64) -> Vec<TowerShape> {
    let lattice = x.intermediate_subgroups();
    let mut out = Vec::new();
    for t in 0..=max_t {
        let levels = increasing_tuples(t, max_level);
        for chain in chains(x, &lattice, t) {
            for lv in &levels {
                out.push(TowerShape {
                    subgroups: chain.clone(),
                    levels: lv.clone(),
                });
            }
        }
    }
    out
}

/// The `k` with `g ∈ H_{k+1} ∖ H_k`, or `-1` when `g ∈ H_0`.
pub fn depth_index(shape: &TowerShape, g: usize) -> i64 {
    shape
        .subgroups
        .iter()
        .position(|h| h.contains(g))
        .map_or(shape.t() as i64, |k| k as i64 - 1)
}

pub fn jump_data(
    x: &ExtensionModel,
    a: &CsaParams,
    shape: &TowerShape,
    k: usize,
) -> Result<JumpData> {
    if k >= shape.t() {
        return Err(Error::IndexOutOfRange { k, t: shape.t() });
    }
    let a_k = shape.levels[k];
    let e_next = centralizer_invariants(x, a, &shape.subgroups[k + 1])?.e_over_e;
    let f0 = order_invariants(x, a)?.e_e;
    Ok(JumpData {
        k,
        a_k,
        e_next,
        product_even: (a_k * e_next).is_multiple_of(2),
        j_k: Ratio::new((a_k * f0) as i64, 2),
    })
}
