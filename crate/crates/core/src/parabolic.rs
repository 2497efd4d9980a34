//! Torus shadows of standard parabolic subgroups.
//!
//! The Lie algebra `a` of the maximal split torus is modeled as the dual
//! space `E*`, in coordinates dual to the simple roots: a point `a` is the
//! tuple of values `(b(a))_b`. An element `x` of `E` (simple-root
//! coordinates) acts on `a` by the dot product.
//!
//! For `I` a set of simple roots:
//! - `a_I` is the common kernel of the roots in `I`,
//! - `a^I` is the span of the coroots of `I`,
//! - `a^I_J = a^I ∩ a_J` for `J ⊆ I`.
//!
//! Group-level statements about `N_I`, `M_I`, `H_I` are not represented;
//! each lemma is checked on these subspaces only.

use num::Zero;

use crate::error::{Error, Result};
use crate::exact::{dot, invert, unit_vec, QVector, Rational, Subspace};
use crate::roots::{RootSet, RootSystem, WeightTable};

/// `a_I`: common kernel of the roots in `subset`.
pub fn kernel_of(rs: &RootSystem, subset: RootSet) -> Result<Subspace> {
    rs.check_subset(subset)?;
    let n = rs.rank();
    let functionals: Vec<QVector> = subset.iter().map(|b| unit_vec(n, b)).collect();
    Subspace::kernel(n, &functionals)
}

/// `a^I` as the span of the coroots in `subset`.
pub fn coroot_span(rs: &RootSystem, subset: RootSet) -> Result<Subspace> {
    rs.check_subset(subset)?;
    Subspace::span(rs.rank(), subset.iter().map(|b| rs.coroot(b)))
}

/// `a^I` as the orthogonal complement of `a_I` for the inner product that
/// `E*` inherits from `E` (the inverse Gramm matrix).
pub fn orthogonal_complement_of_kernel(rs: &RootSystem, subset: RootSet) -> Result<Subspace> {
    let k = kernel_of(rs, subset)?;
    let g_inv = invert(rs.gramm())?;
    let functionals: Vec<QVector> = k
        .basis()
        .iter()
        .map(|a| g_inv.mul_vec(a))
        .collect::<Result<_>>()?;
    Subspace::kernel(rs.rank(), &functionals)
}

fn require_subset(inner: RootSet, outer: RootSet, what: &str) -> Result<()> {
    if !inner.is_subset(outer) {
        return Err(Error::SubsetViolation(format!(
            "{what}: {inner:?} is not contained in {outer:?}"
        )));
    }
    Ok(())
}

/// `a^I_J = a^I ∩ a_J`, for `J ⊆ I`.
pub fn relative_torus(rs: &RootSystem, i: RootSet, j: RootSet) -> Result<Subspace> {
    rs.check_subset(i)?;
    require_subset(j, i, "relative torus")?;
    coroot_span(rs, i)?.intersect(&kernel_of(rs, j)?)
}

/// Weights of the Levi sub-root-system spanned by a subset, embedded back
/// into simple-root coordinates of the whole system (zero off the subset).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWeights {
    subset: RootSet,
    members: Vec<usize>,
    rank: usize,
    table: Option<WeightTable>,
}

impl RelativeWeights {
    pub fn new(rs: &RootSystem, subset: RootSet) -> Result<Self> {
        rs.check_subset(subset)?;
        let members = subset.to_vec();
        let table = if members.is_empty() {
            None
        } else {
            Some(WeightTable::from_gramm(
                &rs.gramm().submatrix(&members, &members),
            )?)
        };
        Ok(Self {
            subset,
            members,
            rank: rs.rank(),
            table,
        })
    }

    pub fn subset(&self) -> RootSet {
        self.subset
    }

    pub fn table(&self) -> Option<&WeightTable> {
        self.table.as_ref()
    }

    fn local(&self, beta: usize) -> Result<usize> {
        self.members
            .iter()
            .position(|&m| m == beta)
            .ok_or_else(|| {
                Error::SubsetViolation(format!(
                    "root {} is not in {:?}",
                    beta + 1,
                    self.subset
                ))
            })
    }

    fn embed(&self, local: &[Rational]) -> QVector {
        let mut v = vec![Rational::zero(); self.rank];
        for (x, &m) in local.iter().zip(&self.members) {
            v[m] = x.clone();
        }
        v
    }

    pub fn dual_weight(&self, beta: usize) -> Result<QVector> {
        let k = self.local(beta)?;
        Ok(self.embed(self.table.as_ref().expect("nonempty").dual_weight(k)))
    }

    pub fn d(&self, beta: usize) -> Result<Rational> {
        let k = self.local(beta)?;
        Ok(self.table.as_ref().expect("nonempty").d()[k].clone())
    }

    /// `w̄^I_beta` in simple-root coordinates of the whole system.
    pub fn weighted(&self, beta: usize) -> Result<QVector> {
        let k = self.local(beta)?;
        Ok(self.embed(self.table.as_ref().expect("nonempty").weighted(k)))
    }
}

/// The subspaces and relative weights attached to one subset `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicDatum {
    pub subset: RootSet,
    /// `a_I`
    pub kernel: Subspace,
    /// `a^I`
    pub coroot_span: Subspace,
    pub relative: RelativeWeights,
}

impl ParabolicDatum {
    /// Structural identities that must hold for every subset: dimensions,
    /// `a_I (+) a^I = a`, agreement of the two constructions of `a^I`, and the
    /// relative Gramm matrix being the sub-Gramm matrix.
    pub fn check(&self, rs: &RootSystem) -> Result<bool> {
        let n = rs.rank();
        let k = self.subset.len();
        let members = self.subset.to_vec();
        let relative_ok = match self.relative.table() {
            None => k == 0,
            Some(t) => {
                let sub = rs.gramm().submatrix(&members, &members);
                invert(t.dual_gramm())? == sub
            }
        };
        Ok(self.kernel.dim() == n - k
            && self.coroot_span.dim() == k
            && Subspace::is_direct_sum(&self.kernel, &self.coroot_span, &Subspace::full(n))?
            && self.coroot_span == orthogonal_complement_of_kernel(rs, self.subset)?
            && relative_ok)
    }
}

pub fn make_datum(rs: &RootSystem, subset: RootSet) -> Result<ParabolicDatum> {
    Ok(ParabolicDatum {
        subset,
        kernel: kernel_of(rs, subset)?,
        coroot_span: coroot_span(rs, subset)?,
        relative: RelativeWeights::new(rs, subset)?,
    })
}

/// `J ⊆ I` implies `a_I ⊆ a_J`.
pub fn verify_inc(rs: &RootSystem, j: RootSet, i: RootSet) -> Result<bool> {
    rs.check_subset(i)?;
    require_subset(j, i, "inclusion")?;
    kernel_of(rs, j)?.contains_subspace(&kernel_of(rs, i)?)
}

/// `J ⊆ I` implies `a_J = a^I_J (+) a_I`.
pub fn verify_levi_split(rs: &RootSystem, j: RootSet, i: RootSet) -> Result<bool> {
    rs.check_subset(i)?;
    require_subset(j, i, "Levi split")?;
    Subspace::is_direct_sum(
        &relative_torus(rs, i, j)?,
        &kernel_of(rs, i)?,
        &kernel_of(rs, j)?,
    )
}

/// `I3 ⊆ I2 ⊆ I1` implies `a^{I1}_{I3} = a^{I2}_{I3} (+) a^{I1}_{I2}`, with
/// dimensions adding up.
pub fn verify_tori(rs: &RootSystem, i3: RootSet, i2: RootSet, i1: RootSet) -> Result<bool> {
    rs.check_subset(i1)?;
    require_subset(i3, i2, "torus splitting")?;
    require_subset(i2, i1, "torus splitting")?;
    let whole = relative_torus(rs, i1, i3)?;
    let lower = relative_torus(rs, i2, i3)?;
    let upper = relative_torus(rs, i1, i2)?;
    let dims = whole.dim() == i1.len() - i3.len()
        && lower.dim() == i2.len() - i3.len()
        && upper.dim() == i1.len() - i2.len();
    Ok(dims && Subspace::is_direct_sum(&lower, &upper, &whole)?)
}

/// With `I = Δ \ {alpha}`, the dual weight `w_alpha` vanishes on `a^I`.
pub fn verify_trivial(rs: &RootSystem, alpha: usize) -> Result<bool> {
    rs.check_root(alpha)?;
    let i = rs.all().without(alpha);
    let w = invert(rs.gramm())?.row(alpha).to_vec();
    Ok(coroot_span(rs, i)?
        .basis()
        .iter()
        .all(|v| dot(&w, v).is_zero()))
}

/// `a^J_{(I ∪ {alpha}) ∩ J} ⊆ ker alpha`, under the hypothesis that `alpha`
/// is not connected to `Δ \ (I ∪ {alpha})`.
pub fn verify_discon(rs: &RootSystem, alpha: usize, i: RootSet, j: RootSet) -> Result<bool> {
    verify_discon_within(rs, rs.all(), alpha, i, j)
}

/// [`verify_discon`] for the Levi sub-system with simple roots `ambient`:
/// connectivity is read in the diagram induced on `ambient`.
pub fn verify_discon_within(
    rs: &RootSystem,
    ambient: RootSet,
    alpha: usize,
    i: RootSet,
    j: RootSet,
) -> Result<bool> {
    rs.check_root(alpha)?;
    require_subset(i, ambient.without(alpha), "disconnected root (I)")?;
    require_subset(j, ambient, "disconnected root (J)")?;
    let rest = ambient.difference(i.with(alpha));
    if rs.connected_within(ambient, alpha, rest)? {
        return Err(Error::PreconditionViolated(format!(
            "root {} is connected to {rest:?}",
            alpha + 1
        )));
    }
    let torus = relative_torus(rs, j, i.with(alpha).intersection(j))?;
    Ok(torus.basis().iter().all(|v| v[alpha].is_zero()))
}

/// Torus shadow of the parabolic inclusion: for `J ⊆ I ⊆ I'` and
/// `J ⊆ J' ⊆ I'`, `a^I_J ⊆ a^{I'}_J` and
/// `a^{I'}_J = a^I_J (+) a^{I'}_I = a^{J'}_J (+) a^{I'}_{J'}`.
pub fn verify_para(
    rs: &RootSystem,
    i: RootSet,
    j: RootSet,
    i2: RootSet,
    j2: RootSet,
) -> Result<bool> {
    rs.check_subset(i2)?;
    require_subset(j, i, "parabolic inclusion")?;
    require_subset(j2, i2, "parabolic inclusion")?;
    require_subset(i, i2, "parabolic inclusion")?;
    require_subset(j, j2, "parabolic inclusion")?;
    let small = relative_torus(rs, i, j)?;
    let big = relative_torus(rs, i2, j)?;
    Ok(big.contains_subspace(&small)?
        && Subspace::is_direct_sum(&small, &relative_torus(rs, i2, i)?, &big)?
        && Subspace::is_direct_sum(
            &relative_torus(rs, j2, j)?,
            &relative_torus(rs, i2, j2)?,
            &big,
        )?)
}

/// Unique point of the one-dimensional space `a^{I}_{I \ {alpha}}` on which
/// `alpha` takes the value 1.
pub fn level_direction(rs: &RootSystem, i: RootSet, alpha: usize) -> Result<QVector> {
    rs.check_root(alpha)?;
    if !i.contains(alpha) {
        return Err(Error::SubsetViolation(format!(
            "root {} is not in {i:?}",
            alpha + 1
        )));
    }
    let line = relative_torus(rs, i, i.without(alpha))?;
    debug_assert_eq!(line.dim(), 1);
    let v = &line.basis()[0];
    let s = v[alpha].clone();
    debug_assert!(!s.is_zero());
    Ok(crate::exact::scale(v, &s.recip()))
}

/// Outcome of one exhaustive lemma sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaTally {
    pub name: &'static str,
    pub checked: usize,
    /// First failing tuple, as subsets or roots
    pub first_failure: Option<String>,
}

impl LemmaTally {
    fn new(name: &'static str) -> Self {
        LemmaTally {
            name,
            checked: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Run every subspace lemma over all admissible subset tuples of `rs`.
/// `with_para` adds the four-subset parabolic inclusion sweep, which grows
/// like `6^rank`.
pub fn sweep_lemmas(rs: &RootSystem, with_para: bool) -> Result<Vec<LemmaTally>> {
    let all = rs.all();
    let mut inc = LemmaTally::new("inclusion");
    let mut levi = LemmaTally::new("levi-split");
    let mut tori = LemmaTally::new("torus-splitting");
    let mut trivial = LemmaTally::new("trivial-weight");
    let mut discon = LemmaTally::new("disconnected-root");
    let mut para = LemmaTally::new("parabolic-inclusion");
    let mut datum = LemmaTally::new("datum");
    for i in all.subsets() {
        datum.record(make_datum(rs, i)?.check(rs)?, || format!("{i:?}"));
        for j in i.subsets() {
            inc.record(verify_inc(rs, j, i)?, || format!("{j:?} {i:?}"));
            levi.record(verify_levi_split(rs, j, i)?, || format!("{j:?} {i:?}"));
            for k in j.subsets() {
                tori.record(verify_tori(rs, k, j, i)?, || format!("{k:?} {j:?} {i:?}"));
            }
        }
    }
    for alpha in 0..rs.rank() {
        trivial.record(verify_trivial(rs, alpha)?, || format!("{}", alpha + 1));
        for i in all.without(alpha).subsets() {
            let rest = all.difference(i.with(alpha));
            if rs.connected_to(alpha, rest)? {
                continue;
            }
            for j in all.subsets() {
                discon.record(verify_discon(rs, alpha, i, j)?, || {
                    format!("{} {i:?} {j:?}", alpha + 1)
                });
            }
        }
    }
    if with_para {
        for i2 in all.subsets() {
            for i in i2.subsets() {
                for j2 in i2.subsets() {
                    for j in i.intersection(j2).subsets() {
                        para.record(verify_para(rs, i, j, i2, j2)?, || {
                            format!("{i:?} {j:?} {i2:?} {j2:?}")
                        });
                    }
                }
            }
        }
    }
    let mut out = vec![datum, inc, levi, tori, trivial, discon];
    if with_para {
        out.push(para);
    }
    Ok(out)
}
