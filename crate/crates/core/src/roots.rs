//! Galois orbits of roots of the elliptic torus `Res_{E/F} G_m`, realized as
//! the nontrivial double cosets `Γ_E g Γ_E`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{mul_mod, sub_mod};
use crate::chartools::MuExponent;
use crate::csa::{order_invariants, CsaParams};
use crate::error::{Error, Result};
use crate::localfield::{ExtensionModel, GaloisElement, SubfieldHandle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootClass {
    Asymmetric,
    SymmetricUnramified,
    SymmetricRamified,
}

impl RootClass {
    pub fn is_symmetric(self) -> bool {
        self != RootClass::Asymmetric
    }

    pub fn label(self) -> &'static str {
        match self {
            RootClass::Asymmetric => "asym",
            RootClass::SymmetricUnramified => "sym-unram",
            RootClass::SymmetricRamified => "sym-ram",
        }
    }
}

impl fmt::Display for RootClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone)]
pub struct RootOrbit {
    pub rep: GaloisElement,
    pub rep_idx: usize,
    /// `(i, j)` with `rep = σ^i φ^j`.
    pub ij: (u64, u64),
    pub cls: RootClass,
    /// `(e, f)` of `F_α = E·g(E)` over `F`.
    pub falpha: (u64, u64),
    pub q_alpha: u64,
    /// `(e, f)` of `F_{±α}` over `F`, symmetric orbits only.
    pub fpm: Option<(u64, u64)>,
    pub q_pm: Option<u64>,
    /// Index of the orbit of `[g⁻¹]` in the owning list (itself when symmetric).
    pub partner: usize,
    pub members: SubfieldHandle,
}

impl RootOrbit {
    pub fn i(&self) -> u64 {
        self.ij.0
    }

    pub fn j(&self) -> u64 {
        self.ij.1
    }

    /// `n_α = [F_{±α} : F]`.
    pub fn n_alpha(&self) -> Option<u64> {
        self.fpm.map(|(e, f)| e * f)
    }

    pub fn f_alpha(&self) -> u64 {
        self.falpha.1
    }
}

/// An [`ExtensionModel`] together with its root orbits.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub model: ExtensionModel,
    pub orbits: Vec<RootOrbit>,
    orbit_of: Vec<Option<usize>>,
}

impl RootSystem {
    pub fn new(model: ExtensionModel) -> Self {
        let orbits = enumerate_orbits(&model);
        let mut orbit_of = vec![None; model.order()];
        for (k, o) in orbits.iter().enumerate() {
            for g in o.members.members() {
                orbit_of[g] = Some(k);
            }
        }
        Self {
            model,
            orbits,
            orbit_of,
        }
    }

    /// Orbit containing the element with index `g`; `None` on `Γ_E`.
    pub fn orbit_of(&self, g: usize) -> Option<usize> {
        self.orbit_of[g]
    }

    /// One orbit per `±`-pair of asymmetric orbits: the one listed first.
    pub fn is_pair_leader(&self, k: usize) -> bool {
        self.orbits[k].partner >= k
    }
}

fn double_coset(x: &ExtensionModel, g: usize) -> SubfieldHandle {
    let ge: Vec<usize> = x.gamma_e().members().collect();
    x.set_from(
        ge.iter()
            .flat_map(|&h1| ge.iter().map(move |&h2| (h1, h2)))
            .map(|(h1, h2)| x.mul_idx(x.mul_idx(h1, g), h2)),
    )
}

/// `Γ_α = Γ_E ∩ gΓ_E g⁻¹` and `Γ_{±α} = Γ_α ∪ {x ∈ gΓ_E : xg ∈ Γ_E}`.
fn stabilizers(x: &ExtensionModel, g: usize) -> (SubfieldHandle, SubfieldHandle) {
    let ge = x.gamma_e();
    let gamma_alpha = x.intersect(ge, &x.conjugate(g, ge));
    let swaps = ge
        .members()
        .map(|h| x.mul_idx(g, h))
        .filter(|&y| ge.contains(x.mul_idx(y, g)));
    let gamma_pm = x.set_from(gamma_alpha.members().chain(swaps));
    (gamma_alpha, gamma_pm)
}

pub fn enumerate_orbits(x: &ExtensionModel) -> Vec<RootOrbit> {
    let (e, f) = (x.params.e, x.params.f);
    let mut covered = x.gamma_e().clone();
    let mut reps: Vec<((u64, u64), usize, SubfieldHandle)> = Vec::new();
    for i in 0..e {
        for j in 0..f {
            let g = x.sigma_phi(i, j);
            if covered.contains(g) {
                continue;
            }
            let members = double_coset(x, g);
            covered = x.set_from(covered.members().chain(members.members()));
            reps.push(((i, j), g, members));
        }
    }
    reps.sort_by_key(|&((i, j), _, _)| (j, i));
    let mut orbits: Vec<RootOrbit> = Vec::with_capacity(reps.len());
    for (ij, g, members) in reps {
        let mut orbit = RootOrbit {
            rep: x.element(g),
            rep_idx: g,
            ij,
            cls: RootClass::Asymmetric,
            falpha: (0, 0),
            q_alpha: 0,
            fpm: None,
            q_pm: None,
            partner: 0,
            members,
        };
        let (gamma_alpha, gamma_pm) = stabilizers(x, g);
        orbit.falpha = x.subfield_invariants(&gamma_alpha);
        orbit.q_alpha = x.params.q.pow(orbit.falpha.1 as u32);
        orbit.cls = classify_by_stabilizers(x, &orbit);
        if orbit.cls.is_symmetric() {
            let fpm = x.subfield_invariants(&gamma_pm);
            orbit.fpm = Some(fpm);
            orbit.q_pm = Some(x.params.q.pow(fpm.1 as u32));
        }
        orbits.push(orbit);
    }
    for k in 0..orbits.len() {
        let inv = x.inv_idx(orbits[k].rep_idx);
        orbits[k].partner = orbits
            .iter()
            .position(|o| o.members.contains(inv))
            .expect("inverse of a nontrivial element lies in a nontrivial double coset");
    }
    orbits
}

pub fn is_symmetric(x: &ExtensionModel, orbit: &RootOrbit) -> bool {
    orbit.members.contains(x.inv_idx(orbit.rep_idx))
}

pub fn classify_by_stabilizers(x: &ExtensionModel, orbit: &RootOrbit) -> RootClass {
    if !is_symmetric(x, orbit) {
        return RootClass::Asymmetric;
    }
    let (gamma_alpha, gamma_pm) = stabilizers(x, orbit.rep_idx);
    let (e_alpha, _) = x.subfield_invariants(&gamma_alpha);
    let (e_pm, _) = x.subfield_invariants(&gamma_pm);
    if e_alpha == e_pm {
        RootClass::SymmetricUnramified
    } else {
        RootClass::SymmetricRamified
    }
}

pub fn classify_by_criterion(x: &ExtensionModel, orbit: &RootOrbit) -> Result<RootClass> {
    if !is_symmetric(x, orbit) {
        return Ok(RootClass::Asymmetric);
    }
    let (e, f) = (x.params.e, x.params.f);
    let (i, j) = orbit.ij;
    if j != 0 && !(f % 2 == 0 && j == f / 2) {
        return Err(Error::CriterionViolation { i, j });
    }
    if e % 2 == 0 && orbit.members.contains(x.sigma_phi(e / 2, 0)) {
        Ok(RootClass::SymmetricRamified)
    } else {
        Ok(RootClass::SymmetricUnramified)
    }
}

/// Exponent of `α(γ) = γ / g(γ)` in `μ_L` for `γ = ζ_E^u ϖ_E^v`, computed with
/// the representative `g`.
pub fn root_eval_at(x: &ExtensionModel, g: GaloisElement, u: i64, v: i64) -> MuExponent {
    let m = x.mu_order();
    let u = u.rem_euclid(m as i64) as u64;
    let v = v.rem_euclid(m as i64) as u64;
    let unit_part = mul_mod(
        mul_mod(u, x.mu_e_step(), m),
        sub_mod(1, x.q_power(g.c), m),
        m,
    );
    MuExponent::new(sub_mod(unit_part, mul_mod(v, g.a, m), m), m)
}

pub fn root_eval(x: &ExtensionModel, orbit: &RootOrbit, u: i64, v: i64) -> MuExponent {
    root_eval_at(x, orbit.rep, u, v)
}

/// Whether the graded piece of `𝔤_α` at depth `r` is nonzero for the
/// principal order of `A`.
pub fn ord_contains(
    x: &ExtensionModel,
    a: &CsaParams,
    orbit: &RootOrbit,
    r: Ratio<i64>,
) -> Result<bool> {
    let inv = order_invariants(x, a)?;
    let j_prime = r * inv.e_f as i64;
    if !j_prime.is_integer() {
        return Ok(false);
    }
    let f0 = inv.e_e as i64;
    let lhs = (orbit.j() as i64).rem_euclid(f0);
    Ok(lhs == (a.h as i64 * j_prime.to_integer()).rem_euclid(f0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::ExtensionParams;

    fn sys(q: u64, e: u64, f: u64, w: u64) -> RootSystem {
        RootSystem::new(ExtensionModel::build(ExtensionParams::new(q, e, f, w).unwrap()).unwrap())
    }

    fn summary(s: &RootSystem) -> Vec<((u64, u64), RootClass)> {
        s.orbits.iter().map(|o| (o.ij, o.cls)).collect()
    }

    #[test]
    fn orbits_q5_e2_f2() {
        let s = sys(5, 2, 2, 0);
        assert_eq!(
            summary(&s),
            vec![
                ((1, 0), RootClass::SymmetricRamified),
                ((0, 1), RootClass::SymmetricUnramified),
                ((1, 1), RootClass::SymmetricUnramified),
            ]
        );
        let ram = &s.orbits[0];
        assert_eq!(ram.falpha, (2, 2));
        assert_eq!(ram.fpm, Some((1, 2)));
        let phi = &s.orbits[1];
        assert_eq!(phi.fpm, Some((2, 1)));
        assert_eq!((phi.q_alpha, phi.q_pm), (25, Some(5)));
    }

    #[test]
    fn orbits_q5_e4_f1() {
        let s = sys(5, 4, 1, 0);
        assert_eq!(
            summary(&s),
            vec![
                ((1, 0), RootClass::Asymmetric),
                ((2, 0), RootClass::SymmetricRamified),
                ((3, 0), RootClass::Asymmetric),
            ]
        );
        assert_eq!((s.orbits[0].partner, s.orbits[2].partner), (2, 0));
        assert!(s.is_pair_leader(0) && !s.is_pair_leader(2));
    }

    #[test]
    fn trivial_extension_has_no_roots() {
        assert!(sys(3, 1, 1, 0).orbits.is_empty());
    }

    #[test]
    fn criterion_matches_examples() {
        let s = sys(5, 2, 2, 0);
        assert_eq!(
            classify_by_criterion(&s.model, &s.orbits[0]),
            Ok(RootClass::SymmetricRamified)
        );
        let s = sys(3, 1, 2, 0);
        assert_eq!(s.orbits[0].ij, (0, 1));
        assert_eq!(
            classify_by_criterion(&s.model, &s.orbits[0]),
            Ok(RootClass::SymmetricUnramified)
        );
        let s = sys(5, 4, 1, 0);
        assert_eq!(
            classify_by_criterion(&s.model, &s.orbits[1]),
            Ok(RootClass::SymmetricRamified)
        );
    }

    #[test]
    fn root_eval_examples() {
        let s = sys(3, 1, 2, 0);
        assert_eq!(
            root_eval(&s.model, &s.orbits[0], 1, 0),
            MuExponent::new(6, 8)
        );
        let s = sys(5, 4, 1, 0);
        assert_eq!(
            root_eval(&s.model, &s.orbits[0], 0, 1),
            MuExponent::new(3, 4)
        );
        for o in &s.orbits {
            assert_eq!(root_eval(&s.model, o, 0, 0).exp, 0);
        }
    }

    #[test]
    fn ord_contains_examples() {
        let s = sys(3, 1, 4, 0);
        let a = CsaParams::new(2, 2, 1).unwrap();
        let phi = s.orbits.iter().find(|o| o.ij == (0, 1)).unwrap();
        let phi2 = s.orbits.iter().find(|o| o.ij == (0, 2)).unwrap();
        let half = Ratio::new(1, 2);
        assert_eq!(ord_contains(&s.model, &a, phi, half), Ok(true));
        assert_eq!(ord_contains(&s.model, &a, phi2, half), Ok(false));

        let s = sys(5, 2, 2, 0);
        let split = CsaParams::split(4);
        for o in &s.orbits {
            assert_eq!(
                ord_contains(&s.model, &split, o, Ratio::new(1, 2)),
                Ok(true)
            );
            assert_eq!(
                ord_contains(&s.model, &split, o, Ratio::new(1, 4)),
                Ok(false)
            );
        }
    }
}
