//! Residue-field modules `𝔘_[g]`, graded pieces of principal orders, and the
//! modules `𝔙_A[g]` tracked up to isomorphism.

use serde::{Deserialize, Serialize};

use crate::csa::{order_invariants, CsaParams};
use crate::error::{Error, Result};
use crate::roots::{RootOrbit, RootSystem};
use crate::tower::{depth_index, jump_data, TowerShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleClass {
    Zero,
    U,
}

impl ModuleClass {
    pub fn flipped(self) -> Self {
        match self {
            ModuleClass::Zero => ModuleClass::U,
            ModuleClass::U => ModuleClass::Zero,
        }
    }
}

/// `[k_{F_α} : k_F]`.
pub fn u_dim(orbit: &RootOrbit) -> u64 {
    orbit.f_alpha()
}

/// A double coset `Γ_E σ^i φ^j Γ_E`, possibly the trivial one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coset {
    Trivial,
    Orbit(usize),
}

/// Cosets `[σ^i φ^j]` with `j ≡ h·j' (mod e(𝔄/O_E))`.
pub fn graded_piece(sys: &RootSystem, a: &CsaParams, j_prime: i64) -> Result<Vec<Coset>> {
    let f0 = order_invariants(&sys.model, a)?.e_e as i64;
    let target = (a.h as i64 * j_prime).rem_euclid(f0);
    let mut out = Vec::new();
    if target == 0 {
        out.push(Coset::Trivial);
    }
    out.extend(
        sys.orbits
            .iter()
            .enumerate()
            .filter(|(_, o)| (o.j() as i64).rem_euclid(f0) == target)
            .map(|(k, _)| Coset::Orbit(k)),
    );
    Ok(out)
}

/// Total `k_F`-dimension of a graded piece; the trivial coset contributes `k_E`.
pub fn graded_piece_dim(sys: &RootSystem, a: &CsaParams, j_prime: i64) -> Result<u64> {
    Ok(graded_piece(sys, a, j_prime)?
        .into_iter()
        .map(|c| match c {
            Coset::Trivial => sys.model.params.f,
            Coset::Orbit(k) => u_dim(&sys.orbits[k]),
        })
        .sum())
}

/// Class of `𝔙_A[g]` for the element with index `g`.
pub fn v_module(
    sys: &RootSystem,
    a: &CsaParams,
    shape: &TowerShape,
    g: usize,
) -> Result<ModuleClass> {
    let depth = depth_index(shape, g);
    if depth < 0 {
        return Ok(ModuleClass::Zero);
    }
    let x = &sys.model;
    let jd = jump_data(x, a, shape, depth as usize)?;
    if !jd.product_even {
        return Ok(ModuleClass::Zero);
    }
    let f0 = order_invariants(x, a)?.e_e as i64;
    let j = (x.element(g).c % x.params.f) as i64;
    let hit = jd.j_k.is_integer()
        && j.rem_euclid(f0) == (a.h as i64 * jd.j_k.to_integer()).rem_euclid(f0);
    Ok(if hit {
        ModuleClass::U
    } else {
        ModuleClass::Zero
    })
}

/// Orbits of depth `k` whose module is nonzero.
pub fn v_layer(
    sys: &RootSystem,
    a: &CsaParams,
    shape: &TowerShape,
    k: usize,
) -> Result<Vec<usize>> {
    jump_data(&sys.model, a, shape, k)?;
    let mut out = Vec::new();
    for (idx, o) in sys.orbits.iter().enumerate() {
        if depth_index(shape, o.rep_idx) == k as i64
            && v_module(sys, a, shape, o.rep_idx)? == ModuleClass::U
        {
            out.push(idx);
        }
    }
    Ok(out)
}

pub fn symp_iso_direct(
    sys: &RootSystem,
    a: &CsaParams,
    shape: &TowerShape,
    orbit: &RootOrbit,
) -> Result<bool> {
    if !orbit.cls.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let split = CsaParams::split(a.n());
    Ok(v_module(sys, a, shape, orbit.rep_idx)? == v_module(sys, &split, shape, orbit.rep_idx)?)
}

pub fn symp_iso_criterion(a: &CsaParams, orbit: &RootOrbit) -> Result<bool> {
    if !orbit.cls.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(orbit.j() == 0 || a.m.is_multiple_of(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{ExtensionModel, ExtensionParams};

    fn sys(q: u64, e: u64, f: u64) -> RootSystem {
        RootSystem::new(ExtensionModel::build(ExtensionParams::new(q, e, f, 0).unwrap()).unwrap())
    }

    fn e0_shape(s: &RootSystem, a0: u64) -> TowerShape {
        let x = &s.model;
        TowerShape {
            subgroups: vec![x.gamma_e().clone(), x.gamma_f().clone()],
            levels: vec![a0],
        }
    }

    fn by_ij(s: &RootSystem, ij: (u64, u64)) -> usize {
        s.orbits.iter().position(|o| o.ij == ij).unwrap()
    }

    #[test]
    fn u_dim_examples() {
        let s = sys(5, 2, 2);
        assert_eq!(u_dim(&s.orbits[by_ij(&s, (0, 1))]), 2);
        let s = sys(5, 4, 1);
        assert_eq!(u_dim(&s.orbits[by_ij(&s, (1, 0))]), 1);
        let s = sys(3, 1, 4);
        assert_eq!(u_dim(&s.orbits[by_ij(&s, (0, 1))]), 4);
    }

    #[test]
    fn graded_piece_examples() {
        let s = sys(3, 1, 4);
        let a = CsaParams::new(2, 2, 1).unwrap();
        let phi = |j| Coset::Orbit(by_ij(&s, (0, j)));
        assert_eq!(
            graded_piece(&s, &a, 0).unwrap(),
            vec![Coset::Trivial, phi(2)]
        );
        assert_eq!(graded_piece(&s, &a, 1).unwrap(), vec![phi(1), phi(3)]);
        assert_eq!(graded_piece_dim(&s, &a, 0), Ok(8));
        assert_eq!(graded_piece_dim(&s, &a, 1), Ok(8));
        let split = CsaParams::split(4);
        assert_eq!(graded_piece(&s, &split, 5).unwrap().len(), 4);
    }

    #[test]
    fn v_module_examples() {
        let s = sys(3, 1, 2);
        let quat = CsaParams::new(1, 2, 1).unwrap();
        let phi = s.orbits[0].rep_idx;
        let sh = e0_shape(&s, 1);
        assert_eq!(v_module(&s, &quat, &sh, phi), Ok(ModuleClass::U));
        assert_eq!(
            v_module(&s, &CsaParams::split(2), &sh, phi),
            Ok(ModuleClass::Zero)
        );
        assert_eq!(
            v_module(&s, &quat, &TowerShape::empty(&s.model), phi),
            Ok(ModuleClass::Zero)
        );
    }

    #[test]
    fn v_layer_examples() {
        let s = sys(3, 1, 2);
        let quat = CsaParams::new(1, 2, 1).unwrap();
        let split = CsaParams::split(2);
        assert_eq!(v_layer(&s, &quat, &e0_shape(&s, 1), 0), Ok(vec![0]));
        assert_eq!(v_layer(&s, &split, &e0_shape(&s, 1), 0), Ok(vec![]));
        let s = sys(5, 2, 2);
        assert_eq!(
            v_layer(&s, &CsaParams::split(4), &e0_shape(&s, 2), 0),
            Ok(vec![0, 1, 2])
        );
    }

    #[test]
    fn symp_iso_examples() {
        let s = sys(3, 1, 2);
        let quat = CsaParams::new(1, 2, 1).unwrap();
        let o = &s.orbits[0];
        assert_eq!(symp_iso_direct(&s, &quat, &e0_shape(&s, 1), o), Ok(false));
        assert_eq!(symp_iso_criterion(&quat, o), Ok(false));

        let s = sys(5, 2, 2);
        let ram = &s.orbits[by_ij(&s, (1, 0))];
        for a in CsaParams::all_of_degree(4) {
            for a0 in 1..=4 {
                assert_eq!(symp_iso_direct(&s, &a, &e0_shape(&s, a0), ram), Ok(true));
            }
        }
        let asym = sys(5, 4, 1);
        assert_eq!(
            symp_iso_criterion(&CsaParams::split(4), &asym.orbits[0]),
            Err(Error::NotSymmetric)
        );
    }
}
