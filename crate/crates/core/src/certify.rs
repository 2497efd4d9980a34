//! Machine checks for the inequality `alpha(a) >= w̄_alpha(a)` between simple
//! roots and weighted dual weights, and the lemmas it rests on.
//!
//! Functionals on the torus Lie algebra are elements of `E` written in
//! simple-root coordinates; a point `a` is written through the values
//! `beta(a)`, so evaluation is the plain dot product.

use num::{One, Signed, Zero};
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{extreme_rays, Generators};
use crate::error::{Error, Result};
use crate::exact::{
    axpy, block_coefficient_matrix, dot, fmt_rational, invert, solve, sub, unit_vec, zero_vec,
    QMatrix, QVector, Rational,
};
use crate::roots::{irreducible_catalogue, ComponentSpec, RootSet, RootSystem, WeightTable};

/// Which hypothesis a functional of the cone encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `w̄_alpha - w̄_gamma >= 0`
    Ordering { gamma: usize },
    /// `w̄_alpha >= 0`
    Nonnegative,
    /// `beta = 0`, cutting out the kernel of `I`
    Kernel { beta: usize },
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Constraint::Ordering { gamma } => write!(f, "order[{}]", gamma + 1),
            Constraint::Nonnegative => write!(f, "nonneg"),
            Constraint::Kernel { beta } => write!(f, "kernel[{}]", beta + 1),
        }
    }
}

/// A cone `{a : e(a) = 0, h(a) >= 0}` with an objective functional whose
/// nonnegativity on the cone is in question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub ambient_dim: usize,
    pub equalities: Vec<(Constraint, QVector)>,
    pub inequalities: Vec<(Constraint, QVector)>,
    pub objective: QVector,
}

impl ConeSpec {
    pub fn check(&self) -> Result<()> {
        let n = self.ambient_dim;
        let bad = self
            .equalities
            .iter()
            .chain(&self.inequalities)
            .map(|(_, f)| f)
            .chain(std::iter::once(&self.objective))
            .find(|f| f.len() != n);
        match bad {
            Some(f) => Err(Error::DimensionMismatch(format!(
                "functional of length {} in a cone of dimension {n}",
                f.len()
            ))),
            None => Ok(()),
        }
    }

    pub fn contains(&self, a: &[Rational]) -> bool {
        a.len() == self.ambient_dim
            && self.equalities.iter().all(|(_, e)| dot(e, a).is_zero())
            && self.inequalities.iter().all(|(_, h)| !dot(h, a).is_negative())
    }

    /// The same cone with every inequality matching `drop` removed.
    pub fn without(&self, drop: impl Fn(&Constraint) -> bool) -> ConeSpec {
        ConeSpec {
            inequalities: self
                .inequalities
                .iter()
                .filter(|(c, _)| !drop(c))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    pub fn generators(&self) -> Result<Generators> {
        self.check()?;
        let eq: Vec<QVector> = self.equalities.iter().map(|(_, f)| f.clone()).collect();
        let ineq: Vec<QVector> = self.inequalities.iter().map(|(_, f)| f.clone()).collect();
        extreme_rays(self.ambient_dim, &eq, &ineq)
    }
}

fn check_pair(rs: &RootSystem, wt: &WeightTable, alpha: usize, i: RootSet) -> Result<()> {
    rs.check_root(alpha)?;
    rs.check_subset(i)?;
    if wt.rank() != rs.rank() {
        return Err(Error::DimensionMismatch("weight table rank".into()));
    }
    Ok(())
}

fn require_outside(alpha: usize, i: RootSet) -> Result<()> {
    if i.contains(alpha) {
        return Err(Error::SubsetViolation(format!(
            "root {} must lie outside {i:?}",
            alpha + 1
        )));
    }
    Ok(())
}

/// The cone of points `a` in the kernel of `I` with `w̄_alpha(a) >= w̄_gamma(a)`
/// for `gamma` outside `I` and `w̄_alpha(a) >= 0`; objective `alpha - w̄_alpha`.
///
/// The ordering constraint for `gamma = alpha` is identically zero and is
/// left out.
pub fn weight_bound_cone(rs: &RootSystem, wt: &WeightTable, alpha: usize, i: RootSet) -> Result<ConeSpec> {
    check_pair(rs, wt, alpha, i)?;
    require_outside(alpha, i)?;
    let n = rs.rank();
    let wa = wt.weighted(alpha);
    let equalities = i
        .iter()
        .map(|b| (Constraint::Kernel { beta: b }, unit_vec(n, b)))
        .collect();
    let mut inequalities: Vec<(Constraint, QVector)> = rs
        .all()
        .difference(i)
        .without(alpha)
        .iter()
        .map(|g| (Constraint::Ordering { gamma: g }, sub(wa, wt.weighted(g))))
        .collect();
    inequalities.push((Constraint::Nonnegative, wa.to_vec()));
    Ok(ConeSpec {
        ambient_dim: n,
        equalities,
        inequalities,
        objective: sub(&unit_vec(n, alpha), wa),
    })
}

/// `alpha = sum_{beta in I} c_beta beta + sum_{gamma not in I} c_gamma w_gamma`.
///
/// `coeffs[delta]` is the coefficient of `delta` when `delta` is in `I` and
/// of `w_delta` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientExpansion {
    pub alpha: usize,
    pub subset: RootSet,
    pub coeffs: QVector,
}

impl CoefficientExpansion {
    /// The expanded vector, in simple-root coordinates.
    pub fn reconstruct(&self, wt: &WeightTable) -> QVector {
        let n = self.coeffs.len();
        let mut v = zero_vec(n);
        for (delta, c) in self.coeffs.iter().enumerate() {
            if self.subset.contains(delta) {
                v[delta] += c;
            } else {
                axpy(&mut v, c, wt.dual_weight(delta));
            }
        }
        v
    }

    /// First `delta != alpha` with a positive coefficient.
    pub fn sign_violation(&self) -> Option<usize> {
        (0..self.coeffs.len()).find(|&d| d != self.alpha && self.coeffs[d].is_positive())
    }

    /// `sum_{beta in I} c_beta + sum_{gamma not in I} c_gamma d_gamma`.
    pub fn weighted_total(&self, wt: &WeightTable) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |s, (delta, c)| {
                if self.subset.contains(delta) {
                    s + c
                } else {
                    s + c * &wt.d()[delta]
                }
            })
    }
}

fn mixed_basis_order(n: usize, i: RootSet) -> Vec<usize> {
    let mut order = i.to_vec();
    order.extend((0..n).filter(|&d| !i.contains(d)));
    order
}

/// Coefficients from the block formula, without any cross-check.
pub fn block_coefficients(rs: &RootSystem, alpha: usize, i: RootSet) -> Result<QVector> {
    rs.check_root(alpha)?;
    rs.check_subset(i)?;
    let n = rs.rank();
    let order = mixed_basis_order(n, i);
    let m = i.len();
    let a = rs.gramm().submatrix(&order, &order);
    let idx: Vec<usize> = (0..n).collect();
    let b = a.submatrix(&idx[..m], &idx[..m]);
    let c = a.submatrix(&idx[..m], &idx[m..]);
    let d = block_coefficient_matrix(&a, &b, &c)?;
    let p = order.iter().position(|&x| x == alpha).expect("alpha is indexed");
    let mut coeffs = zero_vec(n);
    for (k, &delta) in order.iter().enumerate() {
        coeffs[delta] = d.get(p, k).clone();
    }
    Ok(coeffs)
}

/// Coefficients by solving the linear system whose columns are the mixed
/// basis vectors.
pub fn solved_coefficients(rs: &RootSystem, wt: &WeightTable, alpha: usize, i: RootSet) -> Result<QVector> {
    check_pair(rs, wt, alpha, i)?;
    let n = rs.rank();
    let columns: Vec<QVector> = (0..n)
        .map(|d| {
            if i.contains(d) {
                unit_vec(n, d)
            } else {
                wt.dual_weight(d).to_vec()
            }
        })
        .collect();
    let m = QMatrix::from_rows(columns)?.transpose();
    solve(&m, &unit_vec(n, alpha))
}

/// Expansion of `alpha` over `I` and the dual weights outside `I`, computed
/// by the block formula and confirmed by a direct solve. Fails if the two
/// disagree, if the expansion does not reproduce `alpha`, or if some
/// `c_delta` with `delta != alpha` is positive.
pub fn expand_coefficients(
    rs: &RootSystem,
    wt: &WeightTable,
    alpha: usize,
    i: RootSet,
) -> Result<CoefficientExpansion> {
    check_pair(rs, wt, alpha, i)?;
    let coeffs = block_coefficients(rs, alpha, i)?;
    let solved = solved_coefficients(rs, wt, alpha, i)?;
    if coeffs != solved {
        return Err(Error::CertificateFailure(format!(
            "block formula and direct solve disagree for root {} and {i:?}",
            alpha + 1
        )));
    }
    let exp = CoefficientExpansion {
        alpha,
        subset: i,
        coeffs,
    };
    if exp.reconstruct(wt) != unit_vec(rs.rank(), alpha) {
        return Err(Error::CertificateFailure(format!(
            "expansion of root {} over {i:?} does not reproduce it",
            alpha + 1
        )));
    }
    if let Some(d) = exp.sign_violation() {
        return Err(Error::CertificateFailure(format!(
            "coefficient of {} is {} > 0 in the expansion of root {} over {i:?}",
            d + 1,
            fmt_rational(&exp.coeffs[d]),
            alpha + 1
        )));
    }
    Ok(exp)
}

/// A witness for, or against, nonnegativity of the objective on a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `objective = sum lambda_h h + sum mu_e e` with every `lambda_h >= 0`.
    ConicCombination {
        inequality: Vec<(Constraint, Rational)>,
        equality: Vec<(Constraint, Rational)>,
    },
    /// Every extreme ray has nonnegative objective and the objective
    /// vanishes on the lineality space.
    RayConfirmation {
        rays: Vec<QVector>,
        lineality: Vec<QVector>,
        min_objective: Option<Rational>,
    },
    /// A point of the cone where the objective is negative.
    ViolatingRay { ray: QVector, objective: Rational },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ConicCombination { .. } => "conic_combination",
            Certificate::RayConfirmation { .. } => "ray_confirmation",
            Certificate::ViolatingRay { .. } => "violating_ray",
        }
    }

    pub fn confirms(&self) -> bool {
        !matches!(self, Certificate::ViolatingRay { .. })
    }

    /// Re-check the certificate against `cone` from scratch.
    pub fn validate(&self, cone: &ConeSpec) -> Result<()> {
        cone.check()?;
        let fail = |m: String| Err(Error::CertificateFailure(m));
        match self {
            Certificate::ConicCombination {
                inequality,
                equality,
            } => {
                let mut total = zero_vec(cone.ambient_dim);
                for (label, lambda) in inequality {
                    if lambda.is_negative() {
                        return fail(format!("multiplier of {label} is negative"));
                    }
                    let Some((_, h)) = cone.inequalities.iter().find(|(c, _)| c == label) else {
                        return fail(format!("{label} is not an inequality of the cone"));
                    };
                    axpy(&mut total, lambda, h);
                }
                for (label, mu) in equality {
                    let Some((_, e)) = cone.equalities.iter().find(|(c, _)| c == label) else {
                        return fail(format!("{label} is not an equality of the cone"));
                    };
                    axpy(&mut total, mu, e);
                }
                if total != cone.objective {
                    return fail("combination does not reproduce the objective".into());
                }
                Ok(())
            }
            Certificate::RayConfirmation {
                rays, lineality, ..
            } => {
                for r in rays {
                    if !cone.contains(r) || dot(&cone.objective, r).is_negative() {
                        return fail("a confirming ray is outside the cone or negative".into());
                    }
                }
                for l in lineality {
                    let neg: QVector = l.iter().map(|x| -x).collect();
                    if !cone.contains(l) || !cone.contains(&neg) || !dot(&cone.objective, l).is_zero() {
                        return fail("lineality direction is not neutral".into());
                    }
                }
                Ok(())
            }
            Certificate::ViolatingRay { ray, objective } => {
                if !cone.contains(ray) {
                    return fail("violating ray leaves the cone".into());
                }
                if &dot(&cone.objective, ray) != objective || !objective.is_negative() {
                    return fail("violating ray has nonnegative objective".into());
                }
                Ok(())
            }
        }
    }
}

/// The conic combination read off from the coefficient expansion:
///
/// `alpha - w̄_alpha = sum_{gamma != alpha} (-c_gamma d_gamma)(w̄_alpha - w̄_gamma)
///   + (sum_gamma c_gamma d_gamma - 1) w̄_alpha + sum_{beta in I} c_beta beta`.
///
/// The multipliers are recomputed here and the identity is re-expanded in
/// coordinates, so nothing about the inequality is taken for granted.
pub fn verify_weight_bound_constructive(
    rs: &RootSystem,
    wt: &WeightTable,
    alpha: usize,
    i: RootSet,
) -> Result<Certificate> {
    check_pair(rs, wt, alpha, i)?;
    require_outside(alpha, i)?;
    let exp = expand_coefficients(rs, wt, alpha, i)?;
    let outside = rs.all().difference(i);
    let mut inequality: Vec<(Constraint, Rational)> = outside
        .without(alpha)
        .iter()
        .map(|g| {
            (
                Constraint::Ordering { gamma: g },
                -(&exp.coeffs[g] * &wt.d()[g]),
            )
        })
        .collect();
    let weighted_sum = outside
        .iter()
        .fold(Rational::zero(), |s, g| s + &exp.coeffs[g] * &wt.d()[g]);
    inequality.push((Constraint::Nonnegative, weighted_sum - Rational::one()));
    let equality = i
        .iter()
        .map(|b| (Constraint::Kernel { beta: b }, exp.coeffs[b].clone()))
        .collect();
    let cert = Certificate::ConicCombination {
        inequality,
        equality,
    };
    let cone = weight_bound_cone(rs, wt, alpha, i)?;
    cert.validate(&cone).map_err(|e| {
        Error::CertificateFailure(format!(
            "constructive certificate for root {} and {i:?} in {}: {e}",
            alpha + 1,
            rs.name()
        ))
    })?;
    Ok(cert)
}

/// Decide nonnegativity of the objective from the extreme rays of the cone.
pub fn verify_weight_bound_rays(cone: &ConeSpec) -> Result<Certificate> {
    let g = cone.generators()?;
    let cert = match g.most_negative(&cone.objective) {
        Some((ray, objective)) => Certificate::ViolatingRay { ray, objective },
        None => {
            let min_objective = g.rays.iter().map(|r| dot(&cone.objective, r)).min();
            Certificate::RayConfirmation {
                rays: g.rays,
                lineality: g.lineality,
                min_objective,
            }
        }
    };
    cert.validate(cone)?;
    Ok(cert)
}

/// Both routes for one `(alpha, I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRouteOutcome {
    pub constructive: Certificate,
    pub rays: Certificate,
}

impl TwoRouteOutcome {
    pub fn agree(&self) -> bool {
        self.constructive.confirms() == self.rays.confirms()
    }
}

pub fn verify_weight_bound(
    rs: &RootSystem,
    wt: &WeightTable,
    alpha: usize,
    i: RootSet,
) -> Result<TwoRouteOutcome> {
    let constructive = verify_weight_bound_constructive(rs, wt, alpha, i)?;
    let rays = verify_weight_bound_rays(&weight_bound_cone(rs, wt, alpha, i)?)?;
    let out = TwoRouteOutcome { constructive, rays };
    if !out.agree() {
        return Err(Error::CertificateFailure(format!(
            "routes disagree for root {} and {i:?} in {}",
            alpha + 1,
            rs.name()
        )));
    }
    Ok(out)
}

/// Hypothesis families that the control experiments remove.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dropped {
    AllOrderings,
    Ordering(usize),
    Nonnegative,
}

impl Dropped {
    pub fn matches(self, c: &Constraint) -> bool {
        match (self, c) {
            (Dropped::AllOrderings, Constraint::Ordering { .. }) => true,
            (Dropped::Ordering(g), Constraint::Ordering { gamma }) => g == *gamma,
            (Dropped::Nonnegative, Constraint::Nonnegative) => true,
            _ => false,
        }
    }
}

/// Run the ray route on the cone with some hypotheses removed.
pub fn control_rays(
    rs: &RootSystem,
    wt: &WeightTable,
    alpha: usize,
    i: RootSet,
    drop: Dropped,
) -> Result<Certificate> {
    let cone = weight_bound_cone(rs, wt, alpha, i)?.without(|c| drop.matches(c));
    verify_weight_bound_rays(&cone)
}

/// The quantitative bound behind divergence along a sequence `a_n`:
/// `(1 - (w_a, w_a)/d_a) alpha(a_n) >= (1/d_a) sum_{beta} (w_a, w_b) beta(a_n)`
/// over `beta` outside `I` and different from `alpha`, together with
/// `(w_a, w_a) < d_a`.
///
/// Errors if `alpha` is not connected to the roots outside `I`, if some
/// `a_n` is not in the kernel of `I`, or if the ordering hypotheses fail.
pub fn verify_growth_bound(
    rs: &RootSystem,
    wt: &WeightTable,
    alpha: usize,
    i: RootSet,
    trace: &[QVector],
) -> Result<bool> {
    check_pair(rs, wt, alpha, i)?;
    require_outside(alpha, i)?;
    let rest = rs.all().difference(i).without(alpha);
    if !rs.connected_to(alpha, rest)? {
        return Err(Error::PreconditionViolated(format!(
            "root {} is not connected to {rest:?}",
            alpha + 1
        )));
    }
    let cone = weight_bound_cone(rs, wt, alpha, i)?;
    for (n, a) in trace.iter().enumerate() {
        if !cone.contains(a) {
            return Err(Error::PreconditionViolated(format!(
                "trace point {n} violates the hypotheses"
            )));
        }
    }
    let waa = wt.dual_gramm().get(alpha, alpha);
    let d = &wt.d()[alpha];
    if waa >= d {
        return Ok(false);
    }
    let factor = Rational::one() - waa / d;
    let ok = trace.iter().all(|a| {
        let rhs = rest.iter().fold(Rational::zero(), |s, b| {
            s + wt.dual_gramm().get(alpha, b) * &a[b]
        }) / d;
        &factor * &a[alpha] >= rhs
    });
    Ok(ok)
}

/// Lower bound on `alpha(a)` implied by the divergence estimate at one point.
pub fn growth_lower_bound(
    rs: &RootSystem,
    wt: &WeightTable,
    alpha: usize,
    i: RootSet,
    a: &[Rational],
) -> Result<Rational> {
    check_pair(rs, wt, alpha, i)?;
    let d = &wt.d()[alpha];
    let factor = Rational::one() - wt.dual_gramm().get(alpha, alpha) / d;
    if !factor.is_positive() {
        return Err(Error::PreconditionViolated(format!(
            "(w, w) >= d for root {}",
            alpha + 1
        )));
    }
    let rest = rs.all().difference(i).without(alpha);
    let rhs = rest
        .iter()
        .fold(Rational::zero(), |s, b| s + wt.dual_gramm().get(alpha, b) * &a[b]);
    Ok(rhs / d / factor)
}

/// Every entry of the inverse Gramm matrix is positive.
pub fn verify_inverse_gramm_positive(rs: &RootSystem) -> Result<bool> {
    if !rs.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let inv = invert(rs.gramm())?;
    Ok(inv.entries().iter().all(Signed::is_positive))
}

/// Expanding `alpha` over the dual weights with coefficients `(alpha, gamma)`
/// and then each `w_gamma` over the simple roots with `(w_gamma, w_beta)`
/// gives back `alpha`.
pub fn check_dual_round_trip(rs: &RootSystem, wt: &WeightTable, alpha: usize) -> Result<bool> {
    rs.check_root(alpha)?;
    let n = rs.rank();
    let mut v = zero_vec(n);
    for g in 0..n {
        axpy(&mut v, rs.gramm().get(alpha, g), wt.dual_weight(g));
    }
    Ok(v == unit_vec(n, alpha))
}

/// `w̄` is unchanged when the inner product is rescaled by a positive
/// constant on each irreducible factor.
pub fn weighted_weights_invariant(rs: &RootSystem, scales: &[Rational]) -> Result<bool> {
    let base = WeightTable::new(rs)?;
    let scaled = WeightTable::new(&rs.rescaled(scales)?)?;
    Ok(base.weighted_all() == scaled.weighted_all())
}

/// `trials` seeded random rescalings, each factor by `p/q` with
/// `p, q` in `1..=12`, all leave `w̄` unchanged.
pub fn scaling_trials(rs: &RootSystem, trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors = rs.spec().0.len();
    for _ in 0..trials {
        let scales: Vec<Rational> = (0..factors)
            .map(|_| {
                let p: i64 = rng.random_range(1..=12);
                let q: i64 = rng.random_range(1..=12);
                Rational::new(p.into(), q.into())
            })
            .collect();
        if !weighted_weights_invariant(rs, &scales)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cartan_graph(rows: &[Vec<i64>]) -> DiGraph<(), i64> {
    let mut g = DiGraph::new();
    let nodes: Vec<_> = (0..rows.len()).map(|_| g.add_node(())).collect();
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j && x != 0 {
                g.add_edge(nodes[i], nodes[j], x);
            }
        }
    }
    g
}

/// The catalogue type whose Cartan matrix matches the one of `s` after
/// reindexing, if any.
pub fn classify_subdiagram(rs: &RootSystem, s: RootSet) -> Result<Option<ComponentSpec>> {
    rs.check_subset(s)?;
    let idx = s.to_vec();
    let sub: Vec<Vec<i64>> = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| rs.cartan()[i][j]).collect())
        .collect();
    let g = cartan_graph(&sub);
    for spec in irreducible_catalogue(idx.len()) {
        let comp = spec.0[0];
        if comp.rank != idx.len() {
            continue;
        }
        let model = RootSystem::build(&spec)?;
        let h = cartan_graph(model.cartan());
        if is_isomorphic_matching(&g, &h, |_, _| true, |a, b| a == b) {
            return Ok(Some(comp));
        }
    }
    Ok(None)
}

/// Connected subsets of the Dynkin diagram, each with its sub-Gramm matrix's
/// definiteness and its classification.
pub fn classify_connected_subsets(rs: &RootSystem) -> Result<Vec<(RootSet, bool, Option<ComponentSpec>)>> {
    let mut out = Vec::new();
    for s in rs.all().subsets() {
        if s.is_empty() || rs.components_within(s).len() != 1 {
            continue;
        }
        let idx = s.to_vec();
        let pd = rs.gramm().submatrix(&idx, &idx).is_positive_definite();
        out.push((s, pd, classify_subdiagram(rs, s)?));
    }
    Ok(out)
}

/// Every connected subdiagram is positive definite and is itself a Dynkin
/// diagram from the catalogue.
pub fn verify_subdiagram_classification(rs: &RootSystem) -> bool {
    classify_connected_subsets(rs)
        .map(|v| v.iter().all(|(_, pd, c)| *pd && c.is_some()))
        .unwrap_or(false)
}

/// All `(alpha, I)` with `I` a subset of the roots other than `alpha`.
pub fn weight_bound_configs(rs: &RootSystem) -> impl Iterator<Item = (usize, RootSet)> + '_ {
    (0..rs.rank()).flat_map(move |a| rs.all().without(a).subsets().map(move |i| (a, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int, int_vec};
    use crate::roots::{catalogue_with_products, SystemSpec};
    use proptest::prelude::*;

    fn sys(s: &str) -> (RootSystem, WeightTable) {
        let rs = RootSystem::parse(s).unwrap();
        let wt = WeightTable::new(&rs).unwrap();
        (rs, wt)
    }

    fn set(xs: &[usize]) -> RootSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn expansion_when_alpha_in_subset_is_trivial() {
        let (rs, wt) = sys("B3");
        let e = expand_coefficients(&rs, &wt, 1, set(&[0, 1])).unwrap();
        assert_eq!(e.coeffs, int_vec(&[0, 1, 0]));
    }

    #[test]
    fn expansion_over_dual_weights_is_a_gramm_row() {
        let (rs, wt) = sys("A2");
        let e = expand_coefficients(&rs, &wt, 0, RootSet::EMPTY).unwrap();
        assert_eq!(e.coeffs, int_vec(&[2, -1]));
        for spec in catalogue_with_products(4) {
            let rs = RootSystem::build(&spec).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            for a in 0..rs.rank() {
                let e = expand_coefficients(&rs, &wt, a, RootSet::EMPTY).unwrap();
                assert_eq!(e.coeffs, rs.gramm().row(a), "{spec}");
            }
        }
    }

    #[test]
    fn a3_expansion_matches_hand_solve() {
        // alpha_3 = -1/3 alpha_1 - 2/3 alpha_2 + 4/3 w_3, d_3 = 3/2
        let (rs, wt) = sys("A3");
        let e = expand_coefficients(&rs, &wt, 2, set(&[0, 1])).unwrap();
        assert_eq!(e.coeffs, vec![frac(-1, 3), frac(-2, 3), frac(4, 3)]);
        assert_eq!(wt.d()[2], frac(3, 2));
        assert_eq!(e.weighted_total(&wt), int(1));
    }

    #[test]
    fn a1_certificate_is_zero() {
        let (rs, wt) = sys("A1");
        let cert = verify_weight_bound_constructive(&rs, &wt, 0, RootSet::EMPTY).unwrap();
        let Certificate::ConicCombination { inequality, equality } = cert else { panic!() };
        assert_eq!(inequality, vec![(Constraint::Nonnegative, int(0))]);
        assert!(equality.is_empty());
        assert!(weight_bound_cone(&rs, &wt, 0, RootSet::EMPTY).unwrap().objective.iter().all(Zero::is_zero));
    }

    #[test]
    fn a2_certificate_multiplier_is_one() {
        let (rs, wt) = sys("A2");
        let cert = verify_weight_bound_constructive(&rs, &wt, 0, RootSet::EMPTY).unwrap();
        let Certificate::ConicCombination { inequality, .. } = cert else { panic!() };
        assert_eq!(
            inequality,
            vec![
                (Constraint::Ordering { gamma: 1 }, int(1)),
                (Constraint::Nonnegative, int(0))
            ]
        );
    }

    #[test]
    fn complement_subset_certificate() {
        let (rs, wt) = sys("B3");
        let alpha = 2;
        let i = rs.all().without(alpha);
        let cert = verify_weight_bound_constructive(&rs, &wt, alpha, i).unwrap();
        let e = expand_coefficients(&rs, &wt, alpha, i).unwrap();
        let Certificate::ConicCombination { inequality, equality } = cert else { panic!() };
        assert_eq!(
            inequality,
            vec![(Constraint::Nonnegative, &e.coeffs[alpha] * &wt.d()[alpha] - int(1))]
        );
        assert_eq!(equality.len(), 2);
    }

    #[test]
    fn a2_rays_confirm() {
        let (rs, wt) = sys("A2");
        let cone = weight_bound_cone(&rs, &wt, 0, RootSet::EMPTY).unwrap();
        let Certificate::RayConfirmation { rays, lineality, min_objective } =
            verify_weight_bound_rays(&cone).unwrap()
        else {
            panic!()
        };
        assert_eq!(rays, vec![int_vec(&[1, -2]), int_vec(&[1, 1])]);
        let values: Vec<Rational> = rays.iter().map(|r| dot(&cone.objective, r)).collect();
        assert_eq!(values, vec![int(1), int(0)]);
        assert!(lineality.is_empty());
        assert_eq!(min_objective, Some(int(0)));
        assert!(dot(&cone.objective, &int_vec(&[0, 0])).is_zero());
    }

    #[test]
    fn dropping_the_ordering_gives_a_violation() {
        let (rs, wt) = sys("A2");
        let cert = control_rays(&rs, &wt, 0, RootSet::EMPTY, Dropped::AllOrderings).unwrap();
        let Certificate::ViolatingRay { ray, objective } = cert else { panic!() };
        // the half-plane w̄_1 >= 0 has lineality; (-1, 2) is its most negative generator
        assert_eq!(ray, int_vec(&[-1, 2]));
        assert_eq!(objective, int(-1));
        let cone = weight_bound_cone(&rs, &wt, 0, RootSet::EMPTY)
            .unwrap()
            .without(|c| Dropped::AllOrderings.matches(c));
        let point = int_vec(&[0, 1]);
        assert!(cone.contains(&point));
        assert_eq!(dot(&cone.objective, &point), frac(-1, 3));
    }

    #[test]
    fn dropping_nonnegativity_gives_a_violation() {
        let (rs, wt) = sys("A2");
        let cert = control_rays(&rs, &wt, 0, set(&[1]), Dropped::Nonnegative).unwrap();
        let Certificate::ViolatingRay { ray, objective } = cert else { panic!() };
        assert_eq!(ray, int_vec(&[-1, 0]));
        assert_eq!(objective, frac(-1, 3));
    }

    #[test]
    fn validate_rejects_tampering() {
        let (rs, wt) = sys("A2");
        let cone = weight_bound_cone(&rs, &wt, 0, RootSet::EMPTY).unwrap();
        let bad = Certificate::ConicCombination {
            inequality: vec![(Constraint::Ordering { gamma: 1 }, int(2))],
            equality: vec![],
        };
        assert!(matches!(bad.validate(&cone), Err(Error::CertificateFailure(_))));
        let neg = Certificate::ConicCombination {
            inequality: vec![(Constraint::Nonnegative, int(-1))],
            equality: vec![],
        };
        assert!(neg.validate(&cone).is_err());
        let fake = Certificate::ViolatingRay { ray: int_vec(&[0, 1]), objective: frac(-1, 3) };
        assert!(fake.validate(&cone).is_err());
    }

    #[test]
    fn growth_bound_a2_equality() {
        let (rs, wt) = sys("A2");
        let trace: Vec<QVector> = (0..6).map(|n| int_vec(&[n, n])).collect();
        assert!(verify_growth_bound(&rs, &wt, 0, RootSet::EMPTY, &trace).unwrap());
        assert_eq!(
            growth_lower_bound(&rs, &wt, 0, RootSet::EMPTY, &int_vec(&[5, 5])).unwrap(),
            int(5)
        );
        let zeros = vec![int_vec(&[0, 0]); 3];
        assert!(verify_growth_bound(&rs, &wt, 0, RootSet::EMPTY, &zeros).unwrap());
    }

    #[test]
    fn growth_bound_g2_slope() {
        // (w_1, w_1) = 2, d_1 = 3, (w_1, w_2) = 1: alpha_1(a_n) >= n
        let (rs, wt) = sys("G2");
        let trace: Vec<QVector> = (1..8).map(|n| int_vec(&[n + n / 2, n])).collect();
        assert!(verify_growth_bound(&rs, &wt, 0, RootSet::EMPTY, &trace).unwrap());
        for (n, a) in (1..8).zip(&trace) {
            let lb = growth_lower_bound(&rs, &wt, 0, RootSet::EMPTY, a).unwrap();
            assert_eq!(lb, int(n));
            assert!(a[0] >= lb);
        }
    }

    #[test]
    fn growth_bound_preconditions() {
        let (rs, wt) = sys("A2xA1");
        let err = verify_growth_bound(&rs, &wt, 2, RootSet::EMPTY, &[]).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
        let (rs, wt) = sys("A2");
        // w̄_1 < w̄_2 here
        let err = verify_growth_bound(&rs, &wt, 0, RootSet::EMPTY, &[int_vec(&[0, 3])]).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
        let err = verify_growth_bound(&rs, &wt, 0, set(&[1]), &[int_vec(&[1, 1])]).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
    }

    #[test]
    fn inverse_gramm_positive_examples() {
        let (rs, _) = sys("B2");
        assert_eq!(invert(rs.gramm()).unwrap(), QMatrix::from_i64(&[&[1, 1], &[1, 2]]));
        assert!(verify_inverse_gramm_positive(&rs).unwrap());
        assert!(verify_inverse_gramm_positive(&sys("A1").0).unwrap());
        assert!(verify_inverse_gramm_positive(&sys("E8").0).unwrap());
        assert_eq!(verify_inverse_gramm_positive(&sys("A1xA1").0), Err(Error::NotIrreducible));
    }

    #[test]
    fn subdiagram_classification_examples() {
        let (rs, _) = sys("A3");
        assert_eq!(
            classify_subdiagram(&rs, set(&[0, 1])).unwrap().unwrap().to_string(),
            "A2"
        );
        let (rs, _) = sys("F4");
        let c = classify_subdiagram(&rs, set(&[1, 2])).unwrap().unwrap();
        assert!(["B2", "C2"].contains(&c.to_string().as_str()));
        assert_eq!(classify_subdiagram(&rs, set(&[0, 1, 2])).unwrap().unwrap().to_string(), "B3");
        assert_eq!(classify_subdiagram(&rs, rs.all()).unwrap().unwrap().to_string(), "F4");
        let (rs, _) = sys("E8");
        assert!(verify_subdiagram_classification(&rs));
        let subsets = classify_connected_subsets(&rs).unwrap();
        assert!(subsets.iter().any(|(s, _, c)| s.len() == 7 && c.unwrap().to_string() == "E7"));
        assert!(subsets.iter().any(|(s, _, c)| s.len() == 5 && c.unwrap().to_string() == "D5"));
    }

    #[test]
    fn identity_and_round_trip_everywhere() {
        for spec in catalogue_with_products(6) {
            let rs = RootSystem::build(&spec).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            for a in 0..rs.rank() {
                assert!(crate::roots::check_2d_identity(&rs, &wt, a).unwrap());
                assert!(check_dual_round_trip(&rs, &wt, a).unwrap());
            }
        }
    }

    #[test]
    fn two_routes_agree_small_rank() {
        for spec in catalogue_with_products(3) {
            let rs = RootSystem::build(&spec).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            for (a, i) in weight_bound_configs(&rs) {
                let out = verify_weight_bound(&rs, &wt, a, i).unwrap();
                assert!(out.constructive.confirms() && out.rays.confirms(), "{spec} {a} {i:?}");
            }
        }
    }

    #[test]
    fn strictness_when_connected() {
        for spec in catalogue_with_products(4) {
            let rs = RootSystem::build(&spec).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            for (a, i) in weight_bound_configs(&rs) {
                let rest = rs.all().difference(i).without(a);
                if rs.connected_to(a, rest).unwrap() {
                    assert!(wt.dual_gramm().get(a, a) < &wt.d()[a]);
                }
            }
        }
    }

    fn spec_strategy() -> impl Strategy<Value = SystemSpec> {
        let all = catalogue_with_products(4);
        (0..all.len()).prop_map(move |k| all[k].clone())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scaling_leaves_weighted_weights(spec in spec_strategy(), raw in proptest::collection::vec((1i64..50, 1i64..50), 2)) {
            let rs = RootSystem::build(&spec).unwrap();
            let scales: Vec<Rational> = raw.iter().take(spec.0.len()).map(|&(p, q)| frac(p, q)).collect();
            prop_assert!(weighted_weights_invariant(&rs, &scales).unwrap());
        }

        #[test]
        fn expansion_sign_and_total(spec in spec_strategy(), pick in any::<u64>(), bits in any::<u64>()) {
            let rs = RootSystem::build(&spec).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            let a = (pick % rs.rank() as u64) as usize;
            let i = RootSet::from_bits(bits & rs.all().bits());
            let e = expand_coefficients(&rs, &wt, a, i).unwrap();
            prop_assert!(e.sign_violation().is_none());
            prop_assert_eq!(e.weighted_total(&wt), int(1));
        }

        #[test]
        fn points_of_the_cone_satisfy_the_inequality(
            spec in spec_strategy(), pick in any::<u64>(), bits in any::<u64>(),
            weights in proptest::collection::vec(0i64..6, 8)
        ) {
            let rs = RootSystem::build(&spec).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            let a = (pick % rs.rank() as u64) as usize;
            let i = RootSet::from_bits(bits & rs.all().without(a).bits());
            let cone = weight_bound_cone(&rs, &wt, a, i).unwrap();
            let g = cone.generators().unwrap();
            let mut point = zero_vec(rs.rank());
            for (r, w) in g.rays.iter().zip(&weights) {
                axpy(&mut point, &int(*w), r);
            }
            prop_assert!(cone.contains(&point));
            prop_assert!(!dot(&cone.objective, &point).is_negative());
        }
    }

    #[test]
    fn seeded_rescalings_keep_weighted_weights() {
        for name in ["A2xB2", "G2", "F4xA1"] {
            let rs = RootSystem::parse(name).unwrap();
            assert!(scaling_trials(&rs, 20, 9).unwrap());
        }
    }
}
