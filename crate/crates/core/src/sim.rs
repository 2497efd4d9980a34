//! Torus-level replay of the iterated maximal-couple construction.
//!
//! A selection `(i_1, ..., i_R)` of distinct simple roots defines the chain
//! `Δ = I_0 ⊋ I_1 ⊋ ... ⊋ I_R` with `I_l = I_{l-1} \ {i_l}`. The component at
//! level `l` lives in the line `a^{I_{l-1}}_{I_l}`; we take
//! `a^(l)_n = n t_l v_l` with `v_l` the point of that line where
//! `alpha_{i_l} = 1`. The ordering constraints on the partial products
//! `theta^(l) = a^(l) + ... + a^(R)` are linear and homogeneous in
//! `t = (t_1, ..., t_R)`, so the admissible scales form a polyhedral cone.
//! Traces are drawn as positive integer combinations of its extreme rays, which
//! makes every trace admissible by construction.

use std::cmp::Ordering;
use std::sync::Arc;

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::extreme_rays;
use crate::error::{Error, Result};
use crate::exact::small::{SmallFrac, SmallVector};
use crate::exact::{
    add, axpy, dot, fmt_rational, int, scale, sub, unit_vec, zero_vec, QVector, Rational, Subspace,
};
use crate::parabolic::{level_direction, relative_torus, verify_discon_within, RelativeWeights};
use crate::roots::{RootSet, RootSystem};

/// Upper bound for the random integer weight put on each extreme ray.
pub const MAX_RAY_WEIGHT: u64 = 8;

/// One level of a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupleStep {
    /// 1-based
    pub level: usize,
    pub root: usize,
    pub subset_before: RootSet,
    pub subset_after: RootSet,
    /// `v_l`, with `alpha_{i_l}(v_l) = 1`
    pub direction: QVector,
    /// `t_l`
    pub scale: Rational,
}

impl CoupleStep {
    /// `a^(l)_n`
    pub fn component(&self, n: u64) -> QVector {
        scale(&self.direction, &(&self.scale * int(n as i64)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTrace {
    pub rs: Arc<RootSystem>,
    pub steps: Vec<CoupleStep>,
    pub horizon: u64,
    /// First index from which every constraint holds.
    pub n0: u64,
    pub seed: Option<u64>,
    /// Integer weights on the extreme rays of the scale cone, when sampled.
    pub ray_weights: Option<Vec<u64>>,
}

impl SimTrace {
    pub fn selection(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.root).collect()
    }

    pub fn scales(&self) -> Vec<Rational> {
        self.steps.iter().map(|s| s.scale.clone()).collect()
    }

    /// `theta^(l)_n = a^(l)_n + ... + a^(R)_n`, with `l` 1-based.
    pub fn partial_product(&self, l: usize, n: u64) -> QVector {
        self.steps[l - 1..]
            .iter()
            .fold(zero_vec(self.rs.rank()), |acc, s| add(&acc, &s.component(n)))
    }
}

/// One ordering constraint on a partial product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelConstraint {
    /// 0-based level index
    pub level: usize,
    /// `Some(k)`: `w̄_{i_l} >= w̄_{i_k}` for the later level `k`; `None`:
    /// `w̄_{i_l} >= 0`.
    pub against: Option<usize>,
    /// The functional on the torus.
    pub functional: QVector,
    /// Its value on `theta^(l)` at `n = 1`, as a linear form in the scales.
    pub in_scales: QVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Disconnected,
    Connected,
}

/// What the induction step at one depth checks, as linear forms in the
/// scales.
#[derive(Clone, Debug)]
struct DepthPlan {
    level: usize,
    alpha: usize,
    branch: Branch,
    /// `alpha(theta^(l))`
    theta_alpha: SmallVector,
    /// `alpha(a^(l))`
    own_alpha: SmallVector,
    /// `w̄^{I_{l-1}}_alpha(theta^(l))`
    lead: SmallVector,
    /// `w̄^{I_{l-1}}_gamma(theta^(l))` for the later roots `gamma`
    others: Vec<SmallVector>,
}

/// `w̄_{i_k}(theta^(l))` and `w̄_{i_k}(c)` where `c` is the component of
/// `theta^(l)` in `a^{I_{l-1}}_{I_{l-1} \ {i_k}}`.
#[derive(Clone, Debug)]
struct SplitForms {
    level: usize,
    later: usize,
    on_theta: SmallVector,
    on_upper: SmallVector,
}

/// Everything about a selection that does not depend on the seed.
#[derive(Clone, Debug)]
pub struct SelectionModel {
    rs: Arc<RootSystem>,
    selection: Vec<usize>,
    subsets: Vec<RootSet>,
    directions: Vec<QVector>,
    constraints: Vec<LevelConstraint>,
    rays: Vec<QVector>,
    constraint_forms: Vec<SmallVector>,
    /// `alpha_{i_l}(theta^(1))` per level
    root_forms: Vec<SmallVector>,
    /// `alpha_{i_R}(a^(R))`
    base_form: SmallVector,
    plans: Vec<DepthPlan>,
    /// per level: `w̄_{i_l}(theta^(l))` and `w̄_{i_l}(a^(l))`
    leading: Vec<(SmallVector, SmallVector)>,
    splits: Vec<SplitForms>,
}

fn failure(root: usize, what: impl Into<String>) -> Error {
    Error::DivergenceFailure {
        root,
        series: what.into(),
    }
}

fn bookkeeping(what: String) -> Error {
    Error::CertificateFailure(format!("bookkeeping: {what}"))
}

/// Values `x * n` for `n` in `from..=to`.
fn along(x: SmallFrac, from: u64, to: u64) -> impl Iterator<Item = Result<(u64, SmallFrac)>> {
    (from..=to).map(move |n| Ok((n, x.times(n)?)))
}

fn small_forms(forms: &[QVector]) -> Result<Vec<SmallVector>> {
    forms.iter().map(|f| SmallVector::new(f)).collect()
}

impl SelectionModel {
    pub fn new(rs: Arc<RootSystem>, selection: &[usize]) -> Result<Self> {
        if selection.is_empty() {
            return Err(Error::PreconditionViolated("empty selection".into()));
        }
        let mut subsets = vec![rs.all()];
        for &a in selection {
            rs.check_root(a)?;
            let cur = *subsets.last().expect("nonempty");
            if !cur.contains(a) {
                return Err(Error::SubsetViolation(format!(
                    "root {} selected twice",
                    a + 1
                )));
            }
            subsets.push(cur.without(a));
        }
        let r = selection.len();
        let last = subsets[r];
        let directions = (0..r)
            .map(|j| level_direction(&rs, subsets[j], selection[j]))
            .collect::<Result<Vec<_>>>()?;
        let relative = (0..r)
            .map(|j| RelativeWeights::new(&rs, subsets[j]))
            .collect::<Result<Vec<_>>>()?;
        // value of a functional on theta^(j+1) (or on a^(j+1) alone) at n = 1
        let form = |f: &[Rational], j: usize, only: bool| -> QVector {
            (0..r)
                .map(|p| {
                    if p < j || (only && p != j) {
                        Rational::zero()
                    } else {
                        dot(f, &directions[p])
                    }
                })
                .collect()
        };

        let mut constraints = Vec::new();
        for j in 0..r {
            let own = relative[j].weighted(selection[j])?;
            for k in j + 1..r {
                let functional = sub(&own, &relative[j].weighted(selection[k])?);
                constraints.push(LevelConstraint {
                    level: j,
                    against: Some(k),
                    in_scales: form(&functional, j, false),
                    functional,
                });
            }
            constraints.push(LevelConstraint {
                level: j,
                against: None,
                in_scales: form(&own, j, false),
                functional: own,
            });
        }

        let mut inequalities: Vec<QVector> = (0..r).map(|p| unit_vec(r, p)).collect();
        inequalities.extend(constraints.iter().map(|c| c.in_scales.clone()));
        let rays = extreme_rays(r, &[], &inequalities)?.rays;
        for j in 0..r {
            if !rays.iter().any(|ray| ray[j].is_positive()) {
                return Err(Error::InfeasibleSelection {
                    level: j + 1,
                    reason: format!(
                        "no admissible scales give root {} positive growth",
                        selection[j] + 1
                    ),
                });
            }
        }

        // a^(p) lies in the kernel of every root selected after level p
        for j in 0..r {
            for p in 0..j {
                if !directions[p][selection[j]].is_zero() {
                    return Err(bookkeeping(format!(
                        "level {} component is not killed by root {}",
                        p + 1,
                        selection[j] + 1
                    )));
                }
            }
        }

        let root_forms: Vec<QVector> = selection
            .iter()
            .map(|&a| form(&unit_vec(rs.rank(), a), 0, false))
            .collect();
        let root_forms = small_forms(&root_forms)?;
        let base_form = SmallVector::new(&form(&unit_vec(rs.rank(), selection[r - 1]), r - 1, true))?;
        let constraint_forms = small_forms(
            &constraints.iter().map(|c| c.in_scales.clone()).collect::<Vec<_>>(),
        )?;

        let mut plans = Vec::new();
        for depth in 0..r.saturating_sub(1) {
            let j = r - 2 - depth;
            let alpha = selection[j];
            let ambient = subsets[j];
            let later: RootSet = selection[j + 1..].iter().copied().collect();
            let torus = relative_torus(&rs, ambient, last)?;
            for v in &directions[j..] {
                if !torus.contains(v)? {
                    return Err(Error::BranchMismatch {
                        depth,
                        reason: "partial product leaves its relative torus".into(),
                    });
                }
            }
            let branch = if rs.connected_within(ambient, alpha, later)? {
                Branch::Connected
            } else {
                if !verify_discon_within(&rs, ambient, alpha, last, subsets[j + 1])? {
                    return Err(Error::BranchMismatch {
                        depth,
                        reason: "disconnected root changes value".into(),
                    });
                }
                Branch::Disconnected
            };
            let e_alpha = unit_vec(rs.rank(), alpha);
            plans.push(DepthPlan {
                level: j,
                alpha,
                branch,
                theta_alpha: SmallVector::new(&form(&e_alpha, j, false))?,
                own_alpha: SmallVector::new(&form(&e_alpha, j, true))?,
                lead: SmallVector::new(&form(&relative[j].weighted(alpha)?, j, false))?,
                others: later
                    .iter()
                    .map(|g| SmallVector::new(&form(&relative[j].weighted(g)?, j, false)))
                    .collect::<Result<_>>()?,
            });
        }

        let leading = (0..r)
            .map(|j| {
                let own = relative[j].weighted(selection[j])?;
                Ok((
                    SmallVector::new(&form(&own, j, false))?,
                    SmallVector::new(&form(&own, j, true))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut splits = Vec::new();
        for j in 0..r {
            for k in j + 1..r {
                let mid = subsets[j].without(selection[k]);
                let lower = relative_torus(&rs, mid, last)?;
                let upper = relative_torus(&rs, subsets[j], mid)?;
                let w = relative[j].weighted(selection[k])?;
                let mut on_upper = zero_vec(r);
                for p in j..r {
                    let (_, c) = Subspace::decompose(&lower, &upper, &directions[p]).ok_or_else(|| {
                        bookkeeping(format!(
                            "level {} component does not split at levels {} and {}",
                            p + 1,
                            j + 1,
                            k + 1
                        ))
                    })?;
                    on_upper[p] = dot(&w, &c);
                }
                splits.push(SplitForms {
                    level: j,
                    later: k,
                    on_theta: SmallVector::new(&form(&w, j, false))?,
                    on_upper: SmallVector::new(&on_upper)?,
                });
            }
        }

        Ok(Self {
            rs,
            selection: selection.to_vec(),
            subsets,
            directions,
            constraints,
            rays,
            constraint_forms,
            root_forms,
            base_form,
            plans,
            leading,
            splits,
        })
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn selection(&self) -> &[usize] {
        &self.selection
    }

    pub fn subsets(&self) -> &[RootSet] {
        &self.subsets
    }

    pub fn directions(&self) -> &[QVector] {
        &self.directions
    }

    pub fn constraints(&self) -> &[LevelConstraint] {
        &self.constraints
    }

    /// Extreme rays of the cone of admissible scales.
    pub fn rays(&self) -> &[QVector] {
        &self.rays
    }

    /// Which branch the induction takes at each depth.
    pub fn branches(&self) -> Vec<Branch> {
        self.plans.iter().map(|p| p.branch).collect()
    }

    fn steps_for(&self, scales: &[Rational]) -> Vec<CoupleStep> {
        (0..self.selection.len())
            .map(|j| CoupleStep {
                level: j + 1,
                root: self.selection[j],
                subset_before: self.subsets[j],
                subset_after: self.subsets[j + 1],
                direction: self.directions[j].clone(),
                scale: scales[j].clone(),
            })
            .collect()
    }

    /// Scales `sum_r w_r ray_r` with `w_r` uniform in `1..=MAX_RAY_WEIGHT`.
    pub fn sample(&self, seed: u64, horizon: u64) -> SimTrace {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<u64> = self
            .rays
            .iter()
            .map(|_| rng.random_range(1..=MAX_RAY_WEIGHT))
            .collect();
        let mut t = zero_vec(self.selection.len());
        for (w, ray) in weights.iter().zip(&self.rays) {
            axpy(&mut t, &int(*w as i64), ray);
        }
        SimTrace {
            rs: self.rs.clone(),
            steps: self.steps_for(&t),
            horizon,
            n0: 1,
            seed: Some(seed),
            ray_weights: Some(weights),
        }
    }

    /// A trace with explicitly given scales, validated before it is returned.
    pub fn trace_from_scales(&self, scales: &[Rational], horizon: u64) -> Result<SimTrace> {
        if scales.len() != self.selection.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} scales for a selection of length {}",
                scales.len(),
                self.selection.len()
            )));
        }
        let mut trace = SimTrace {
            rs: self.rs.clone(),
            steps: self.steps_for(scales),
            horizon,
            n0: 1,
            seed: None,
            ray_weights: None,
        };
        trace.n0 = self.validate(&trace)?;
        Ok(trace)
    }

    fn scales_of(&self, trace: &SimTrace) -> Result<SmallVector> {
        if !Arc::ptr_eq(&trace.rs, &self.rs) && trace.rs.gramm() != self.rs.gramm()
            || trace.steps.len() != self.selection.len()
        {
            return Err(Error::PreconditionViolated(
                "trace does not belong to this selection".into(),
            ));
        }
        for (j, s) in trace.steps.iter().enumerate() {
            if s.level != j + 1
                || s.root != self.selection[j]
                || s.subset_before != self.subsets[j]
                || s.subset_after != self.subsets[j + 1]
                || s.direction != self.directions[j]
            {
                return Err(Error::PreconditionViolated(format!(
                    "level {} is not in its relative torus",
                    j + 1
                )));
            }
            if !s.scale.is_positive() {
                return Err(Error::PreconditionViolated(format!(
                    "level {} does not grow",
                    j + 1
                )));
            }
        }
        SmallVector::new(&trace.scales())
    }

    fn n0_for(&self, t: &SmallVector, horizon: u64) -> Result<u64> {
        let mut n0 = 1;
        for (c, f) in self.constraints.iter().zip(&self.constraint_forms) {
            for step in along(f.dot(t)?, 1, horizon) {
                let (n, v) = step?;
                if v.is_negative() {
                    n0 = n0.max(n + 1);
                    if n == horizon {
                        return Err(Error::PreconditionViolated(format!(
                            "ordering at level {} against {} fails",
                            c.level + 1,
                            c.against
                                .map_or("zero".to_string(), |k| format!("level {}", k + 1))
                        )));
                    }
                }
            }
        }
        Ok(n0)
    }

    /// Check the constraints at every `n` of the horizon and return `n_0`.
    pub fn validate(&self, trace: &SimTrace) -> Result<u64> {
        let t = self.scales_of(trace)?;
        self.n0_for(&t, trace.horizon)
    }

    fn divergence(&self, t: &SmallVector, n0: u64, horizon: u64) -> Result<DivergenceReport> {
        let mut roots = Vec::new();
        for (j, (&a, f)) in self.selection.iter().zip(&self.root_forms).enumerate() {
            let per_step = f.dot(t)?;
            let values = along(per_step, 1, horizon)
                .map(|x| x.map(|(_, v)| v))
                .collect::<Result<Vec<_>>>()?;
            let mut prev = SmallFrac::from_rational(&Rational::zero())?;
            let mut slope: Option<SmallFrac> = None;
            for (n, &v) in (1..=horizon).zip(&values) {
                let diff = v.minus(prev)?;
                if n >= n0 && !diff.is_positive() {
                    let series: Vec<String> =
                        values.iter().map(|v| fmt_rational(&v.to_rational())).collect();
                    return Err(failure(a, series.join(",")));
                }
                if slope.is_none_or(|s| matches!(diff.compare(s), Ok(Ordering::Less))) {
                    slope = Some(diff);
                }
                prev = v;
            }
            roots.push(RootSeries {
                level: j + 1,
                root: a,
                values: values.iter().map(|v| v.to_rational()).collect(),
                slope: slope.map(SmallFrac::to_rational),
            });
        }
        Ok(DivergenceReport { n0, roots })
    }

    fn induction(&self, t: &SmallVector, n0: u64, horizon: u64, depth: usize) -> Result<InductionReport> {
        let Some(plan) = self.plans.get(depth) else {
            return Ok(InductionReport {
                depth,
                level: None,
                root: None,
                branch: None,
                checked: 0,
            });
        };
        let mismatch = |reason: String| Error::BranchMismatch { depth, reason };
        let theta_alpha = plan.theta_alpha.dot(t)?;
        match plan.branch {
            Branch::Disconnected => {
                let own = plan.own_alpha.dot(t)?;
                for n in n0..=horizon {
                    if theta_alpha.times(n)?.compare(own.times(n)?)? != Ordering::Equal {
                        return Err(mismatch(format!(
                            "alpha(theta_n) differs from alpha(a_n) at n = {n}"
                        )));
                    }
                }
            }
            Branch::Connected => {
                let lead = plan.lead.dot(t)?;
                if !lead.is_positive() {
                    return Err(mismatch("w̄(theta_n) does not grow".into()));
                }
                let others = plan
                    .others
                    .iter()
                    .map(|f| f.dot(t))
                    .collect::<Result<Vec<_>>>()?;
                for n in n0..=horizon {
                    let lead_n = lead.times(n)?;
                    for o in &others {
                        if o.times(n)?.compare(lead_n)? == Ordering::Greater {
                            return Err(mismatch(format!("ordering hypotheses fail at n = {n}")));
                        }
                    }
                    if theta_alpha.times(n)?.compare(lead_n)? == Ordering::Less {
                        return Err(mismatch(format!(
                            "alpha(theta_n) < w̄(theta_n) at n = {n}"
                        )));
                    }
                }
            }
        }
        Ok(InductionReport {
            depth,
            level: Some(plan.level + 1),
            root: Some(plan.alpha),
            branch: Some(plan.branch),
            checked: (n0..=horizon).count() as u64,
        })
    }

    fn bookkeeping_for(&self, t: &SmallVector) -> Result<()> {
        let r = self.selection.len();
        let same = |a: &SmallVector, b: &SmallVector| -> Result<bool> {
            Ok(a.dot(t)?.compare(b.dot(t)?)? == Ordering::Equal)
        };
        if !same(&self.root_forms[r - 1], &self.base_form)? {
            return Err(bookkeeping("base case".into()));
        }
        for (j, (on_theta, on_own)) in self.leading.iter().enumerate() {
            if !same(on_theta, on_own)? {
                return Err(bookkeeping(format!("leading weight at level {}", j + 1)));
            }
        }
        for s in &self.splits {
            if !same(&s.on_theta, &s.on_upper)? {
                return Err(bookkeeping(format!(
                    "splitting at levels {} and {}",
                    s.level + 1,
                    s.later + 1
                )));
            }
        }
        Ok(())
    }

    pub fn assert_divergence(&self, trace: &SimTrace) -> Result<DivergenceReport> {
        let t = self.scales_of(trace)?;
        let n0 = self.n0_for(&t, trace.horizon)?;
        self.divergence(&t, n0, trace.horizon)
    }

    /// Checks one step of the downward induction: at depth `l` the root
    /// selected at level `R - 1 - l` is compared with the later ones.
    /// Depths past the end are vacuous.
    pub fn replay_induction(&self, trace: &SimTrace, depth: usize) -> Result<InductionReport> {
        let t = self.scales_of(trace)?;
        let n0 = self.n0_for(&t, trace.horizon)?;
        self.induction(&t, n0, trace.horizon, depth)
    }

    /// Base case, leading weights and the splitting of partial products
    /// that the induction relies on.
    pub fn check_bookkeeping(&self, trace: &SimTrace) -> Result<()> {
        let t = self.scales_of(trace)?;
        self.bookkeeping_for(&t)
    }

    /// Validation, divergence, every induction depth and the bookkeeping,
    /// sharing one validation pass.
    pub fn check_trace(&self, trace: &SimTrace) -> Result<TraceReport> {
        let t = self.scales_of(trace)?;
        let n0 = self.n0_for(&t, trace.horizon)?;
        let divergence = self.divergence(&t, n0, trace.horizon)?;
        let induction = (0..self.plans.len())
            .map(|d| self.induction(&t, n0, trace.horizon, d))
            .collect::<Result<Vec<_>>>()?;
        self.bookkeeping_for(&t)?;
        Ok(TraceReport {
            divergence,
            induction,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSeries {
    pub level: usize,
    pub root: usize,
    /// `alpha(theta^(1)_n)` for `n = 1..=horizon`
    pub values: Vec<Rational>,
    /// Smallest increment, counting from the value 0 at `n = 0`.
    pub slope: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceReport {
    pub n0: u64,
    pub roots: Vec<RootSeries>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionReport {
    pub depth: usize,
    pub level: Option<usize>,
    pub root: Option<usize>,
    pub branch: Option<Branch>,
    /// Number of time indices checked.
    pub checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub divergence: DivergenceReport,
    pub induction: Vec<InductionReport>,
}

fn model_of(trace: &SimTrace) -> Result<SelectionModel> {
    SelectionModel::new(trace.rs.clone(), &trace.selection())
}

pub fn generate_trace(
    rs: Arc<RootSystem>,
    selection: &[usize],
    horizon: u64,
    seed: u64,
) -> Result<SimTrace> {
    Ok(SelectionModel::new(rs, selection)?.sample(seed, horizon))
}

pub fn validate(trace: &SimTrace) -> Result<u64> {
    model_of(trace)?.validate(trace)
}

pub fn assert_divergence(trace: &SimTrace) -> Result<DivergenceReport> {
    model_of(trace)?.assert_divergence(trace)
}

pub fn replay_induction(trace: &SimTrace, depth: usize) -> Result<InductionReport> {
    model_of(trace)?.replay_induction(trace, depth)
}

pub fn check_bookkeeping(trace: &SimTrace) -> Result<()> {
    model_of(trace)?.check_bookkeeping(trace)
}

/// All sequences of distinct roots of length `1..=max_len`.
pub fn selections(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len.min(rank) {
        let mut next = Vec::new();
        for s in &frontier {
            for a in 0..rank {
                if !s.contains(&a) {
                    let mut t = s.clone();
                    t.push(a);
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
