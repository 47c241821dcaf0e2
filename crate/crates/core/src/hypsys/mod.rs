//! Hyperbolic systems of first-order partial difference equations:
//! Goursat problems, local consistency, essential dimension, and a
//! self-convergence harness for the canonical discretizations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::grid::Grid2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypError {
    /// Dependency locality violated: an equation reads a field whose
    /// static set is not contained in S_k + {i}.
    NonLocalDependency,
    /// Missing equation or Goursat data.
    MissingData,
    /// A right-hand side hit a singular configuration.
    SingularConfiguration,
    /// Fewer than three mesh levels for a convergence estimate.
    InsufficientLevels,
}

impl core::fmt::Display for HypError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Self::NonLocalDependency => "dependency locality violated",
            Self::MissingData => "missing equation or data",
            Self::SingularConfiguration => "singular right-hand side",
            Self::InsufficientLevels => "need at least three mesh levels",
        };
        write!(f, "{s}")
    }
}

/// One unknown of the system: a field with its static direction set and
/// value dimension.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub name: String,
    pub static_dirs: BTreeSet<usize>,
    pub dim: usize,
}

/// Right-hand sides: delta_i x_k = g_{k,i}(x), one per evolution direction
/// of each field; `reads` declares which fields the closure looks at, so
/// dependency locality can be validated structurally.
pub struct Equation<'a> {
    pub field: usize,
    pub dir: usize,
    pub reads: Vec<usize>,
    pub g: &'a dyn Fn(&[Vec<f64>]) -> Result<Vec<f64>, HypError>,
}

pub struct HyperbolicSystem<'a> {
    pub m: usize,
    pub fields: Vec<FieldSpec>,
    pub equations: Vec<Equation<'a>>,
    pub eps: Vec<f64>,
}

impl<'a> HyperbolicSystem<'a> {
    pub fn validate(&self) -> Result<(), HypError> {
        for eq in &self.equations {
            let fk = &self.fields[eq.field];
            if fk.static_dirs.contains(&eq.dir) {
                return Err(HypError::MissingData);
            }
            for &l in &eq.reads {
                let sl = &self.fields[l].static_dirs;
                let mut allowed = fk.static_dirs.clone();
                allowed.insert(eq.dir);
                if !sl.is_subset(&allowed) {
                    return Err(HypError::NonLocalDependency);
                }
            }
        }
        // every evolution direction of every field carries an equation
        for (k, f) in self.fields.iter().enumerate() {
            for i in 0..self.m {
                if !f.static_dirs.contains(&i)
                    && !self.equations.iter().any(|e| e.field == k && e.dir == i)
                {
                    return Err(HypError::MissingData);
                }
            }
        }
        Ok(())
    }

    pub fn essential_dimension(&self) -> usize {
        1 + self.fields.iter().map(|f| f.static_dirs.len()).max().unwrap_or(0)
    }

    /// Direction subsets of size d whose fields form closed subsystems.
    pub fn closed_subsystems(&self) -> Vec<BTreeSet<usize>> {
        let d = self.essential_dimension();
        if d >= self.m {
            return Vec::new();
        }
        let mut out = Vec::new();
        // all subsets of {0..m} of size d
        let mut stack = vec![(BTreeSet::new(), 0usize)];
        while let Some((cur, from)) = stack.pop() {
            if cur.len() == d {
                out.push(cur);
                continue;
            }
            for i in from..self.m {
                let mut next: BTreeSet<usize> = cur.clone();
                next.insert(i);
                stack.push((next, i + 1));
            }
        }
        out
    }

    fn eq_for(&self, field: usize, dir: usize) -> Option<&Equation<'a>> {
        self.equations.iter().find(|e| e.field == field && e.dir == dir)
    }

    /// Shift the whole local state one step in direction `j`: fields with
    /// j among their evolution directions are updated by their equations;
    /// static ones keep their value (never read across that shift by
    /// locality).
    fn shift_state(&self, state: &[Vec<f64>], j: usize) -> Result<Vec<Vec<f64>>, HypError> {
        let mut out = state.to_vec();
        for (k, f) in self.fields.iter().enumerate() {
            if f.static_dirs.contains(&j) {
                continue;
            }
            let eq = self.eq_for(k, j).ok_or(HypError::MissingData)?;
            let g = (eq.g)(state)?;
            for (o, gi) in out[k].iter_mut().zip(&g) {
                *o += self.eps[j] * gi;
            }
        }
        Ok(out)
    }

    /// Local consistency: delta_j g_{k,i} = delta_i g_{k,j} on random local
    /// data. Returns the worst residual.
    pub fn check_local_consistency<R: Rng + ?Sized>(
        &self,
        samples: usize,
        rng: &mut R,
        sampler: &dyn Fn(usize, &mut dyn FnMut() -> f64) -> Vec<f64>,
    ) -> Result<f64, HypError> {
        self.validate()?;
        let mut worst = 0.0f64;
        let mut done = 0;
        let mut attempts = 0;
        while done < samples {
            attempts += 1;
            if attempts > 50 * samples + 50 {
                return Err(HypError::SingularConfiguration);
            }
            let mut draw = || rng.gen::<f64>() * 2.0 - 1.0;
            let state: Vec<Vec<f64>> =
                (0..self.fields.len()).map(|k| sampler(k, &mut draw)).collect();
            let mut ok = true;
            'pairs: for (k, f) in self.fields.iter().enumerate() {
                let evo: Vec<usize> = (0..self.m).filter(|i| !f.static_dirs.contains(i)).collect();
                for (ai, &i) in evo.iter().enumerate() {
                    for &j in evo.iter().skip(ai + 1) {
                        let gi = self.eq_for(k, i).unwrap();
                        let gj = self.eq_for(k, j).unwrap();
                        let res = (|| -> Result<f64, HypError> {
                            let si = self.shift_state(&state, i)?;
                            let sj = self.shift_state(&state, j)?;
                            let gi0 = (gi.g)(&state)?;
                            let gij = (gi.g)(&sj)?;
                            let gj0 = (gj.g)(&state)?;
                            let gji = (gj.g)(&si)?;
                            let mut w = 0.0f64;
                            for c in 0..gi0.len() {
                                let dj_gi = (gij[c] - gi0[c]) / self.eps[j];
                                let di_gj = (gji[c] - gj0[c]) / self.eps[i];
                                w = w.max((dj_gi - di_gj).abs());
                            }
                            Ok(w)
                        })();
                        match res {
                            Ok(w) => worst = worst.max(w),
                            Err(HypError::SingularConfiguration) => {
                                ok = false;
                                break 'pairs;
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
            if ok {
                done += 1;
            }
        }
        Ok(worst)
    }

    /// Solve the Goursat problem on the brick [0, sizes_0] x ... ; data
    /// gives each field on its initial plane (evolution coordinates zero).
    /// The consistency of alternative evolution directions is asserted and
    /// the worst defect returned with the solution.
    pub fn solve_goursat(
        &self,
        data: &dyn Fn(usize, &[i64]) -> Vec<f64>,
        sizes: &[usize],
    ) -> Result<(Solution, f64), HypError> {
        self.validate()?;
        if sizes.len() != self.m {
            return Err(HypError::MissingData);
        }
        let mut sol: BTreeMap<(usize, Vec<i64>), Vec<f64>> = BTreeMap::new();
        let points = brick_points(sizes);
        let mut worst = 0.0f64;
        for p in points {
            // all fields at p
            for (k, f) in self.fields.iter().enumerate() {
                let evolution_active: Vec<usize> = (0..self.m)
                    .filter(|i| !f.static_dirs.contains(i) && p[*i] > 0)
                    .collect();
                if evolution_active.is_empty() {
                    sol.insert((k, p.clone()), data(k, &p));
                    continue;
                }
                let mut value: Option<Vec<f64>> = None;
                for &i in &evolution_active {
                    let mut prev = p.clone();
                    prev[i] -= 1;
                    let state: Vec<Vec<f64>> = (0..self.fields.len())
                        .map(|l| sol[&(l, prev.clone())].clone())
                        .collect();
                    let eq = self.eq_for(k, i).ok_or(HypError::MissingData)?;
                    let g = (eq.g)(&state)?;
                    let cand: Vec<f64> = state[k]
                        .iter()
                        .zip(&g)
                        .map(|(x, gi)| x + self.eps[i] * gi)
                        .collect();
                    match &value {
                        None => value = Some(cand),
                        Some(v) => {
                            let defect = v
                                .iter()
                                .zip(&cand)
                                .map(|(a, b)| (a - b).abs())
                                .fold(0.0f64, f64::max);
                            worst = worst.max(defect);
                        }
                    }
                }
                sol.insert((k, p.clone()), value.unwrap());
            }
        }
        Ok((Solution { values: sol }, worst))
    }
}

/// Solution of a Goursat problem, indexed by (field, lattice point).
pub struct Solution {
    pub values: BTreeMap<(usize, Vec<i64>), Vec<f64>>,
}

impl Solution {
    pub fn at(&self, field: usize, p: &[i64]) -> Option<&Vec<f64>> {
        self.values.get(&(field, p.to_vec()))
    }
}

fn brick_points(sizes: &[usize]) -> Vec<Vec<i64>> {
    let mut pts = vec![vec![]];
    for &s in sizes {
        let mut next = Vec::new();
        for p in pts {
            for v in 0..=s as i64 {
                let mut q: Vec<i64> = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        pts = next;
    }
    pts.sort_by_key(|p| p.iter().sum::<i64>());
    pts
}

/// Self-convergence estimate: run the family at the listed mesh sizes plus
/// one finer reference level, measure sup errors at common physical points
/// against the reference, and return the log-log slope.
pub struct ConvergenceReport {
    pub eps: Vec<f64>,
    pub sup_errors: Vec<f64>,
    pub slope: f64,
}

/// `family(eps)` returns values on the grid covering [0, extent]^2 with
/// spacing eps (the grid has extent/eps + 1 points per side); all eps must
/// divide the extent and each other (powers of two work).
pub fn convergence_order(
    family: &dyn Fn(f64) -> Result<Grid2<Vec<f64>>, HypError>,
    eps_list: &[f64],
    extent: f64,
) -> Result<ConvergenceReport, HypError> {
    if eps_list.len() < 3 {
        return Err(HypError::InsufficientLevels);
    }
    let eps_ref = eps_list.iter().cloned().fold(f64::INFINITY, f64::min) / 4.0;
    let reference = family(eps_ref)?;
    let mut sup_errors = Vec::new();
    for &eps in eps_list {
        let coarse = family(eps)?;
        let ratio = (eps / eps_ref).round() as usize;
        let mut sup = 0.0f64;
        let n = ((extent / eps).round() as usize).min(coarse.w - 1);
        for j in 0..=n {
            for i in 0..=n {
                let a = coarse.at(i, j);
                let b = reference.at(i * ratio, j * ratio);
                let d = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0f64, f64::max);
                sup = sup.max(d);
            }
        }
        sup_errors.push(sup);
    }
    // least-squares slope of ln err vs ln eps
    let n = eps_list.len() as f64;
    let xs: Vec<f64> = eps_list.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = sup_errors.iter().map(|e| e.max(1e-300).ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    Ok(ConvergenceReport { eps: eps_list.to_vec(), sup_errors, slope: num / den })
}

pub mod canonical;
