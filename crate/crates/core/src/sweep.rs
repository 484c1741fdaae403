//! Exhaustive sweeps of [`verify_instance`] over a parameter grid.

use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csa::CsaParams;
use crate::error::{Error, Result};
use crate::identities::{verify_instance_mutated, Instance, Mutation, Report};
use crate::localfield::{ExtensionModel, ExtensionParams};
use crate::roots::RootSystem;
use crate::tower::{enumerate_shapes, TowerShape};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub q_list: Vec<u64>,
    pub n_max: u64,
    /// Nonzero `w` values sampled per `(q, e, f)` on top of `w = 0`.
    pub w_samples: usize,
    pub t_max: usize,
    pub a_max: u64,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            q_list: Vec::new(),
            n_max: 4,
            w_samples: 0,
            t_max: 1,
            a_max: 4,
            seed: 0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for &q in &self.q_list {
            ExtensionParams::new(q, 1, 1, 0)?;
        }
        Ok(())
    }

    fn w_values(&self, q: u64, e: u64, f: u64) -> Vec<u64> {
        let size = q.pow(f as u32) - 1;
        let nonzero = (size - 1) as usize;
        let mut ws = vec![0];
        if self.w_samples >= nonzero {
            ws.extend(1..size);
        } else if self.w_samples > 0 {
            let seed = self.seed ^ (q << 32) ^ (e << 16) ^ f;
            let mut rng = StdRng::seed_from_u64(seed);
            let mut picked: Vec<u64> = sample(&mut rng, nonzero, self.w_samples)
                .into_iter()
                .map(|i| i as u64 + 1)
                .collect();
            picked.sort_unstable();
            ws.extend(picked);
        }
        ws
    }

    /// Every extension in the grid, ordered by `(q, n, e, w)`.
    pub fn extensions(&self) -> Result<Vec<ExtensionParams>> {
        self.validate()?;
        let mut out = Vec::new();
        for &q in &self.q_list {
            let p = ExtensionParams::new(q, 1, 1, 0)?.residue_char();
            for n in 1..=self.n_max {
                for e in (1..=n).filter(|e| n % e == 0 && e % p != 0) {
                    let f = n / e;
                    for w in self.w_values(q, e, f) {
                        out.push(ExtensionParams::new(q, e, f, w)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Root systems and tower shapes for every extension, built in parallel.
    pub fn systems(&self) -> Result<Vec<(Arc<RootSystem>, Vec<TowerShape>)>> {
        self.extensions()?
            .into_par_iter()
            .map(|params| {
                let sys = RootSystem::new(ExtensionModel::build(params)?);
                let shapes = enumerate_shapes(&sys.model, self.t_max, self.a_max);
                Ok((Arc::new(sys), shapes))
            })
            .collect()
    }

    pub fn instances(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for (sys, shapes) in self.systems()? {
            for csa in CsaParams::all_of_degree(sys.model.params.n()) {
                for shape in &shapes {
                    out.push(Instance {
                        sys: sys.clone(),
                        csa,
                        shape: shape.clone(),
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Everything needed to rebuild an instance from text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coordinates {
    pub params: ExtensionParams,
    pub csa: CsaParams,
    /// Selectors for `E_0, …, E_{t-1}`.
    pub tower: Vec<String>,
    pub levels: Vec<u64>,
}

impl Coordinates {
    pub fn of(inst: &Instance) -> Result<Self> {
        let x = &inst.sys.model;
        let t = inst.shape.t();
        Ok(Self {
            params: x.params,
            csa: inst.csa,
            tower: inst.shape.subgroups[..t]
                .iter()
                .map(|h| x.subfield_selector(h))
                .collect::<Result<_>>()?,
            levels: inst.shape.levels.clone(),
        })
    }

    pub fn build(&self) -> Result<Instance> {
        let sys = Arc::new(RootSystem::new(ExtensionModel::build(self.params)?));
        let shape = parse_tower(&sys.model, &self.tower, &self.levels)?;
        Instance::new(sys, self.csa, shape)
    }
}

/// A tower from selectors for `E_0, …, E_{t-1}`; `F` is appended.
pub fn parse_tower(x: &ExtensionModel, tower: &[String], levels: &[u64]) -> Result<TowerShape> {
    if tower.len() != levels.len() {
        return Err(Error::MalformedShape(format!(
            "{} subfields but {} levels",
            tower.len(),
            levels.len()
        )));
    }
    let mut subgroups = tower
        .iter()
        .map(|s| x.parse_subfield(s))
        .collect::<Result<Vec<_>>>()?;
    subgroups.push(x.gamma_f().clone());
    Ok(TowerShape {
        subgroups,
        levels: levels.to_vec(),
    })
}

impl fmt::Display for Coordinates {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ExtensionParams { q, e, f, w } = self.params;
        let CsaParams { m, d, h } = self.csa;
        let levels: Vec<String> = self.levels.iter().map(u64::to_string).collect();
        write!(
            out,
            "--q {q} --e {e} --f {f} --w {w} --m {m} --d {d} --h {h} --tower [{}] --levels [{}]",
            self.tower.join(","),
            levels.join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FailureRow {
    pub coords: Coordinates,
    /// `(i, j)` of every failing orbit.
    pub orbits: Vec<(u64, u64)>,
    pub aggregate_failed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: u64,
    pub orbits: u64,
    pub orbit_failures: u64,
    pub passed: u64,
    pub failed: u64,
    /// Sorted by coordinates.
    pub failures: Vec<FailureRow>,
}

impl SweepSummary {
    pub fn of_report(inst: &Instance, report: &Report) -> Self {
        let orbit_failures = report.verdicts.iter().filter(|v| !v.pass).count() as u64;
        let mut s = Self {
            instances: 1,
            orbits: report.verdicts.len() as u64,
            orbit_failures,
            passed: report.pass as u64,
            failed: !report.pass as u64,
            failures: Vec::new(),
        };
        if !report.pass {
            s.failures.push(FailureRow {
                coords: Coordinates::of(inst).expect("grid shapes have selectors"),
                orbits: report
                    .verdicts
                    .iter()
                    .filter(|v| !v.pass)
                    .map(|v| v.ij)
                    .collect(),
                aggregate_failed: !report.aggregate.pass,
            });
        }
        s
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.instances += other.instances;
        self.orbits += other.orbits;
        self.orbit_failures += other.orbit_failures;
        self.passed += other.passed;
        self.failed += other.failed;
        self.failures.extend(other.failures);
        self.failures.sort();
        self
    }

    pub fn first_counterexample(&self) -> Option<&FailureRow> {
        self.failures.first()
    }
}

pub fn sweep(grid: &GridSpec) -> Result<SweepSummary> {
    sweep_mutated(grid, Mutation::None)
}

pub fn sweep_mutated(grid: &GridSpec, mutation: Mutation) -> Result<SweepSummary> {
    Ok(grid
        .instances()?
        .par_iter()
        .map(|inst| SweepSummary::of_report(inst, &verify_instance_mutated(inst, mutation)))
        .reduce(SweepSummary::default, SweepSummary::merge))
}
