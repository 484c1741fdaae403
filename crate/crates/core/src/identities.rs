//! The two character families attached to an elliptic torus and the
//! per-orbit verifier comparing them.
//!
//! The ε side reads only the graded-piece gate, Legendre symbols and Brauer
//! signs. The ζ side reads only the tower congruences for `𝔙_A[g]`,
//! permutation signatures and `ι_g`. Neither chain calls into the other.

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::chartools::{legendre_k1, legendre_kx, perm_sign, MuExponent, Sign, TameQuadChar};
use crate::csa::{brauer_torsion_sign, order_invariants, CsaParams};
use crate::error::{Error, Result};
use crate::finmod::{v_module, ModuleClass};
use crate::localfield::GaloisElement;
use crate::roots::{ord_contains, root_eval_at, RootClass, RootOrbit, RootSystem};
use crate::tower::{depth_index, validate_shape, TowerShape};

#[derive(Debug, Clone)]
pub struct Instance {
    pub sys: Arc<RootSystem>,
    pub csa: CsaParams,
    pub shape: TowerShape,
}

impl Instance {
    pub fn new(sys: Arc<RootSystem>, csa: CsaParams, shape: TowerShape) -> Result<Self> {
        order_invariants(&sys.model, &csa)?;
        validate_shape(&sys.model, &shape)?;
        Ok(Self { sys, csa, shape })
    }

    pub fn algebra(&self, side: Side) -> CsaParams {
        match side {
            Side::Split => CsaParams::split(self.csa.n()),
            Side::Given => self.csa,
        }
    }

    fn orbit(&self, k: usize) -> &RootOrbit {
        &self.sys.orbits[k]
    }
}

/// `Split` is the quasi-split group `GL_n`, `Given` the inner form `A^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Split,
    Given,
}

/// Deliberate corruptions used to check that the verifier can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mutation {
    None,
    NegateIota,
    FlipLegendre,
    FlipModuleClass,
}

/// A double coset together with the representative used to evaluate it.
#[derive(Debug, Clone, Copy)]
pub struct RepChoice {
    pub orbit: usize,
    pub rep: GaloisElement,
}

impl RepChoice {
    pub fn canonical(inst: &Instance, orbit: usize) -> Self {
        Self {
            orbit,
            rep: inst.orbit(orbit).rep,
        }
    }
}

fn rep_index(inst: &Instance, rc: RepChoice) -> usize {
    inst.sys
        .model
        .index_of(rc.rep)
        .expect("representative belongs to the model")
}

fn eval(inst: &Instance, rc: RepChoice, u: i64, v: i64) -> MuExponent {
    root_eval_at(&inst.sys.model, rc.rep, u, v)
}

fn char_from(f: impl Fn(i64, i64) -> Result<Sign>) -> Result<TameQuadChar> {
    Ok(TameQuadChar::from_signs(f(1, 0)?, f(0, 1)?))
}

/// Whether the depth-`r_k/2` graded piece of `𝔤_α` is nonzero for the order
/// of the algebra on `side`.
fn epsilon_gate(inst: &Instance, rc: RepChoice, side: Side) -> Result<bool> {
    let g = rep_index(inst, rc);
    let depth = depth_index(&inst.shape, g);
    if depth < 0 {
        return Ok(false);
    }
    let x = &inst.sys.model;
    let r = Ratio::new(
        inst.shape.levels[depth as usize] as i64,
        2 * x.params.e as i64,
    );
    ord_contains(x, &inst.algebra(side), inst.orbit(rc.orbit), r)
}

pub fn epsilon_alpha(inst: &Instance, orbit: usize, side: Side) -> Result<TameQuadChar> {
    epsilon_alpha_mutated(
        inst,
        RepChoice::canonical(inst, orbit),
        side,
        Mutation::None,
    )
}

pub fn epsilon_alpha_mutated(
    inst: &Instance,
    rc: RepChoice,
    side: Side,
    mutation: Mutation,
) -> Result<TameQuadChar> {
    let o = inst.orbit(rc.orbit);
    let flip = if mutation == Mutation::FlipLegendre && side == Side::Given {
        Sign::Minus
    } else {
        Sign::Plus
    };
    match o.cls {
        RootClass::SymmetricRamified => {
            let on_unif = match side {
                Side::Split => Sign::Plus,
                Side::Given => {
                    brauer_torsion_sign(&inst.csa, o.n_alpha().expect("symmetric orbit"))?
                }
            };
            Ok(TameQuadChar::from_signs(Sign::Plus, on_unif))
        }
        _ if !epsilon_gate(inst, rc, side)? => Ok(TameQuadChar::TRIVIAL),
        RootClass::Asymmetric => {
            char_from(|u, v| Ok(flip * legendre_kx(o.q_alpha, eval(inst, rc, u, v))?))
        }
        RootClass::SymmetricUnramified => {
            let q_pm = o.q_pm.expect("symmetric orbit");
            char_from(|u, v| Ok(flip * legendre_k1(o.q_alpha, q_pm, eval(inst, rc, u, v))?))
        }
    }
}

/// Orbits indexing the ε and ν_ζ products: one per asymmetric `±`-pair and
/// every symmetric orbit.
pub fn product_index(sys: &RootSystem) -> Vec<usize> {
    (0..sys.orbits.len())
        .filter(|&k| sys.is_pair_leader(k))
        .collect()
}

pub fn epsilon_total(inst: &Instance, side: Side) -> Result<TameQuadChar> {
    product_index(&inst.sys)
        .into_iter()
        .try_fold(TameQuadChar::TRIVIAL, |acc, k| {
            Ok(acc * epsilon_alpha(inst, k, side)?)
        })
}

pub fn iota(inst: &Instance, orbit: usize) -> Result<Sign> {
    iota_at(inst, RepChoice::canonical(inst, orbit))
}

fn iota_at(inst: &Instance, rc: RepChoice) -> Result<Sign> {
    let o = inst.orbit(rc.orbit);
    let m_sign = Sign::pow_neg_one(inst.csa.m);
    match o.cls {
        RootClass::Asymmetric => Err(Error::NotSymmetric),
        RootClass::SymmetricRamified => Ok(m_sign),
        RootClass::SymmetricUnramified => {
            let x = &inst.sys.model;
            let power_of_sigma = rc.rep.c.is_multiple_of(x.params.f);
            // With ϖ_E taken in E_0, everything in Γ_{E_0} fixes it.
            let fixes_uniformizer =
                rc.rep.a == 0 || depth_index(&inst.shape, rep_index(inst, rc)) < 0;
            Ok(if power_of_sigma || fixes_uniformizer {
                Sign::Plus
            } else {
                m_sign
            })
        }
    }
}

fn module_class(
    inst: &Instance,
    rc: RepChoice,
    side: Side,
    mutation: Mutation,
) -> Result<ModuleClass> {
    let g = rep_index(inst, rc);
    let class = v_module(&inst.sys, &inst.algebra(side), &inst.shape, g)?;
    Ok(
        if mutation == Mutation::FlipModuleClass && side == Side::Given {
            class.flipped()
        } else {
            class
        },
    )
}

/// `ζ_α|_{E^×}` for symmetric orbits, and the pair product
/// `ζ_α|_{E^×}·ζ_{-α}|_{E^×}` for asymmetric ones.
pub fn zeta_tam_restricted(inst: &Instance, orbit: usize) -> Result<TameQuadChar> {
    zeta_tam_mutated(inst, RepChoice::canonical(inst, orbit), Mutation::None)
}

pub fn zeta_tam_mutated(
    inst: &Instance,
    rc: RepChoice,
    mutation: Mutation,
) -> Result<TameQuadChar> {
    let o = inst.orbit(rc.orbit);
    if o.cls == RootClass::Asymmetric {
        let mut chi = TameQuadChar::TRIVIAL;
        for side in [Side::Given, Side::Split] {
            if module_class(inst, rc, side, mutation)? == ModuleClass::U {
                chi = chi * char_from(|u, v| perm_sign(o.q_alpha, eval(inst, rc, u, v)))?;
            }
        }
        return Ok(chi);
    }

    let mut iota = iota_at(inst, rc)?;
    if mutation == Mutation::NegateIota {
        iota = -iota;
    }
    let iso = module_class(inst, rc, Side::Given, mutation)?
        == module_class(inst, rc, Side::Split, mutation)?;
    if iso || o.cls == RootClass::SymmetricRamified {
        if o.cls == RootClass::SymmetricUnramified && iota != Sign::Plus {
            return Err(Error::IotaIncoherence);
        }
        return Ok(TameQuadChar::from_signs(Sign::Plus, iota));
    }

    // Exactly one of the two modules is `𝔘_[g]`. On units the t-factors
    // contribute the k¹-symbol of α(γ). On ϖ_E the value is ι·t(ϖ_E) with
    // t(ϖ_E) = -t⁰·(α(ϖ_E)/k¹), where t⁰ = -1 exactly when g fixes ϖ_E.
    let q_pm = o.q_pm.expect("symmetric orbit");
    let on_unit = legendre_k1(o.q_alpha, q_pm, eval(inst, rc, 1, 0))?;
    let beta = eval(inst, rc, 0, 1);
    let t0 = Sign::from_parity(beta.exp == 0);
    let t_unif = -(t0 * legendre_k1(o.q_alpha, q_pm, beta)?);
    Ok(TameQuadChar::from_signs(on_unit, iota * t_unif))
}

pub fn nu_zeta_total(inst: &Instance) -> Result<TameQuadChar> {
    product_index(&inst.sys)
        .into_iter()
        .try_fold(TameQuadChar::TRIVIAL, |acc, k| {
            Ok(acc * zeta_tam_restricted(inst, k)?)
        })
}

/// Side data recorded with each verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub depth: i64,
    pub module_given: Option<ModuleClass>,
    pub module_split: Option<ModuleClass>,
    pub gate_given: Option<bool>,
    pub gate_split: Option<bool>,
    pub iota: Option<Sign>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitVerdict {
    pub orbit: usize,
    pub ij: (u64, u64),
    /// Coordinates of `[g⁻¹]` for asymmetric pairs.
    pub partner_ij: Option<(u64, u64)>,
    pub cls: RootClass,
    pub lhs: Option<TameQuadChar>,
    pub rhs: Option<TameQuadChar>,
    pub pass: bool,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub lhs: Option<TameQuadChar>,
    pub rhs: Option<TameQuadChar>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdicts: Vec<OrbitVerdict>,
    pub aggregate: Aggregate,
    pub pass: bool,
}

/// Per-orbit `(lhs, rhs)` for a chosen representative.
pub fn orbit_sides(
    inst: &Instance,
    rc: RepChoice,
    mutation: Mutation,
) -> Result<(TameQuadChar, TameQuadChar)> {
    let lhs = zeta_tam_mutated(inst, rc, mutation)?;
    let rhs = epsilon_alpha_mutated(inst, rc, Side::Split, mutation)?
        * epsilon_alpha_mutated(inst, rc, Side::Given, mutation)?;
    Ok((lhs, rhs))
}

fn diagnostics(inst: &Instance, rc: RepChoice, mutation: Mutation) -> Diagnostics {
    let g = rep_index(inst, rc);
    Diagnostics {
        depth: depth_index(&inst.shape, g),
        module_given: module_class(inst, rc, Side::Given, mutation).ok(),
        module_split: module_class(inst, rc, Side::Split, mutation).ok(),
        gate_given: epsilon_gate(inst, rc, Side::Given).ok(),
        gate_split: epsilon_gate(inst, rc, Side::Split).ok(),
        iota: iota_at(inst, rc).ok(),
        error: None,
    }
}

pub fn verify_instance(inst: &Instance) -> Report {
    verify_instance_mutated(inst, Mutation::None)
}

pub fn verify_instance_mutated(inst: &Instance, mutation: Mutation) -> Report {
    let sys = &inst.sys;
    let mut verdicts = Vec::new();
    for k in product_index(sys) {
        let o = &sys.orbits[k];
        let rc = RepChoice::canonical(inst, k);
        let mut diag = diagnostics(inst, rc, mutation);
        let (lhs, rhs) = match orbit_sides(inst, rc, mutation) {
            Ok((l, r)) => (Some(l), Some(r)),
            Err(e) => {
                diag.error = Some(e.to_string());
                (None, None)
            }
        };
        verdicts.push(OrbitVerdict {
            orbit: k,
            ij: o.ij,
            partner_ij: (o.partner != k).then(|| sys.orbits[o.partner].ij),
            cls: o.cls,
            lhs,
            rhs,
            pass: lhs.is_some() && lhs == rhs,
            diagnostics: diag,
        });
    }

    let product = |pick: fn(&OrbitVerdict) -> Option<TameQuadChar>| {
        verdicts
            .iter()
            .try_fold(TameQuadChar::TRIVIAL, |acc, v| Some(acc * pick(v)?))
    };
    let (lhs, rhs) = if mutation == Mutation::None {
        let lhs = nu_zeta_total(inst).ok();
        let rhs = epsilon_total(inst, Side::Split)
            .and_then(|s| Ok(s * epsilon_total(inst, Side::Given)?))
            .ok();
        // The totals must agree with the per-orbit products they summarize.
        let consistent = lhs == product(|v| v.lhs) && rhs == product(|v| v.rhs);
        (lhs.filter(|_| consistent), rhs.filter(|_| consistent))
    } else {
        (product(|v| v.lhs), product(|v| v.rhs))
    };
    let aggregate = Aggregate {
        lhs,
        rhs,
        pass: lhs.is_some() && lhs == rhs,
    };
    let pass = aggregate.pass && verdicts.iter().all(|v| v.pass);
    Report {
        verdicts,
        aggregate,
        pass,
    }
}
