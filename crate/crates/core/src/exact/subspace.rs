use num::{One, Zero};

use super::{QVector, Rational};
use crate::error::{Error, Result};

/// Linear subspace of `Q^n` stored by its reduced row echelon basis.
///
/// The echelon form is unique, so two subspaces are equal exactly when their
/// bases are equal, and the derived `PartialEq` is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<QVector>,
}

/// Reduced row echelon form with zero rows removed. Returns pivot columns.
fn rref(mut rows: Vec<QVector>, ncols: usize) -> (Vec<QVector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pr) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{x : row . x = 0 for every row}` from an echelon system.
fn null_space(echelon: &[QVector], pivots: &[usize], ncols: usize) -> Vec<QVector> {
    let free = (0..ncols).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (row, &p) in echelon.iter().zip(pivots) {
            v[p] = -row[f].clone();
        }
        v
    })
    .collect()
}

impl Subspace {
    fn check_len(n: usize, v: &[Rational]) -> Result<()> {
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {n}",
                v.len()
            )));
        }
        Ok(())
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, (0..ambient_dim).map(|i| super::unit_vec(ambient_dim, i)))
            .expect("unit vectors have the right length")
    }

    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = QVector>,
    {
        let rows: Vec<QVector> = vectors.into_iter().collect();
        for v in &rows {
            Self::check_len(ambient_dim, v)?;
        }
        let (basis, _) = rref(rows, ambient_dim);
        Ok(Self { ambient_dim, basis })
    }

    /// Common kernel of a family of functionals (paired by the dot product).
    pub fn kernel(ambient_dim: usize, functionals: &[QVector]) -> Result<Self> {
        for f in functionals {
            Self::check_len(ambient_dim, f)?;
        }
        let (ech, piv) = rref(functionals.to_vec(), ambient_dim);
        Self::span(ambient_dim, null_space(&ech, &piv, ambient_dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[QVector] {
        &self.basis
    }

    /// Functionals vanishing on the subspace, as a basis of the annihilator.
    pub fn annihilator(&self) -> Vec<QVector> {
        let (ech, piv) = rref(self.basis.clone(), self.ambient_dim);
        null_space(&ech, &piv, self.ambient_dim)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut ann = self.annihilator();
        ann.extend(other.annihilator());
        Self::kernel(self.ambient_dim, &ann)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        Self::span(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Self::check_len(self.ambient_dim, v)?;
        Ok(self.coordinates(v).is_some())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_same(other)?;
        Ok(other.basis.iter().all(|v| self.coordinates(v).is_some()))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<QVector> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let (_, piv) = rref(self.basis.clone(), self.ambient_dim);
        // In reduced echelon form the coefficient of basis row i is v[pivot_i].
        let coeffs: QVector = piv.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![Rational::zero(); self.ambient_dim];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            super::axpy(&mut recon, c, b);
        }
        (recon.as_slice() == v).then_some(coeffs)
    }

    /// `target = s1 (+) s2`: dimensions add up, the sum is `target`, and the
    /// intersection is trivial.
    pub fn is_direct_sum(s1: &Subspace, s2: &Subspace, target: &Subspace) -> Result<bool> {
        s1.check_same(s2)?;
        s1.check_same(target)?;
        Ok(s1.dim() + s2.dim() == target.dim()
            && &s1.sum(s2)? == target
            && s1.intersect(s2)?.is_zero())
    }

    /// Split `v` as `x + y` with `x` in `s1` and `y` in `s2`. Returns `None`
    /// when `v` is outside `s1 + s2`; the split is unique only for a direct sum.
    pub fn decompose(s1: &Subspace, s2: &Subspace, v: &[Rational]) -> Option<(QVector, QVector)> {
        if s1.ambient_dim != s2.ambient_dim || v.len() != s1.ambient_dim {
            return None;
        }
        let n = s1.ambient_dim;
        let k1 = s1.dim();
        let gens: Vec<&QVector> = s1.basis.iter().chain(&s2.basis).collect();
        // Solve sum_j c_j g_j = v: rows are coordinates, columns generators, plus rhs.
        let system: Vec<QVector> = (0..n)
            .map(|i| {
                let mut r: QVector = gens.iter().map(|g| g[i].clone()).collect();
                r.push(v[i].clone());
                r
            })
            .collect();
        let m = gens.len();
        let (ech, piv) = rref(system, m + 1);
        if piv.contains(&m) {
            return None;
        }
        let mut c = vec![Rational::zero(); m];
        for (row, &p) in ech.iter().zip(&piv) {
            c[p] = row[m].clone();
        }
        let mut x = vec![Rational::zero(); n];
        let mut y = vec![Rational::zero(); n];
        for (j, g) in gens.iter().enumerate() {
            if j < k1 {
                super::axpy(&mut x, &c[j], g);
            } else {
                super::axpy(&mut y, &c[j], g);
            }
        }
        Some((x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{frac, int_vec};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_dimension_is_nullity() {
        let f = vec![int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])];
        let k = Subspace::kernel(3, &f).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&int_vec(&[0, 0, 5])).unwrap());
    }

    #[test]
    fn intersection_is_idempotent() {
        let s = Subspace::span(3, vec![int_vec(&[1, 2, 3]), int_vec(&[0, 1, 1])]).unwrap();
        assert_eq!(s.intersect(&s).unwrap(), s);
    }

    #[test]
    fn two_lines_sum_to_the_plane() {
        // Kernels of alpha_1 and alpha_2 in the 2-dimensional dual of A_2.
        let ka = Subspace::kernel(2, &[int_vec(&[1, 0])]).unwrap();
        let kb = Subspace::kernel(2, &[int_vec(&[0, 1])]).unwrap();
        assert_eq!(ka.sum(&kb).unwrap(), Subspace::full(2));
        assert!(Subspace::is_direct_sum(&ka, &kb, &Subspace::full(2)).unwrap());
        assert!(ka.intersect(&kb).unwrap().is_zero());
    }

    #[test]
    fn canonical_basis_makes_equality_syntactic() {
        let a = Subspace::span(3, vec![int_vec(&[1, 1, 0]), int_vec(&[1, -1, 0])]).unwrap();
        let b = Subspace::span(3, vec![int_vec(&[2, 0, 0]), int_vec(&[0, 3, 0]), int_vec(&[5, 5, 0])])
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(a.intersect(&b).is_err());
        assert!(a.sum(&b).is_err());
        assert!(a.contains(&int_vec(&[1])).is_err());
        assert!(Subspace::kernel(2, &[int_vec(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn annihilator_has_complementary_dimension() {
        let s = Subspace::span(4, vec![int_vec(&[1, 2, 0, 1])]).unwrap();
        let ann = s.annihilator();
        assert_eq!(ann.len(), 3);
        assert_eq!(Subspace::kernel(4, &ann).unwrap(), s);
    }

    #[test]
    fn not_direct_when_overlapping() {
        let a = Subspace::span(3, vec![int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(3, vec![int_vec(&[0, 1, 0]), int_vec(&[0, 0, 1])]).unwrap();
        assert!(!Subspace::is_direct_sum(&a, &b, &Subspace::full(3)).unwrap());
        let half = vec![frac(1, 2), frac(0, 1), frac(0, 1)];
        assert_eq!(a.coordinates(&half), Some(vec![frac(1, 2), frac(0, 1)]));
    }

    fn vec3() -> impl Strategy<Value = QVector> {
        proptest::collection::vec(-4i64..=4, 4).prop_map(|v| int_vec(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn direct_sums_decompose_uniquely(
            a in proptest::collection::vec(vec3(), 0..=2),
            b in proptest::collection::vec(vec3(), 0..=2),
            v in vec3(),
        ) {
            let s1 = Subspace::span(4, a).unwrap();
            let s2 = Subspace::span(4, b).unwrap();
            let t = s1.sum(&s2).unwrap();
            if Subspace::is_direct_sum(&s1, &s2, &t).unwrap() {
                // project v into t first: any element of t must split uniquely
                let target: QVector = t.basis().iter().fold(vec![Rational::zero(); 4], |mut acc, b| {
                    let c = crate::exact::dot(b, &v);
                    crate::exact::axpy(&mut acc, &c, b);
                    acc
                });
                let (x, y) = Subspace::decompose(&s1, &s2, &target).unwrap();
                prop_assert!(s1.contains(&x).unwrap());
                prop_assert!(s2.contains(&y).unwrap());
                prop_assert_eq!(crate::exact::add(&x, &y), target.clone());
                // the reversed order must give the swapped parts
                let (y2, x2) = Subspace::decompose(&s2, &s1, &target).unwrap();
                prop_assert_eq!(x, x2);
                prop_assert_eq!(y, y2);
            }
        }

        #[test]
        fn equal_spans_have_identical_bases(a in proptest::collection::vec(vec3(), 1..=3), k in 1i64..5) {
            let s = Subspace::span(4, a.clone()).unwrap();
            let scaled = a.iter().map(|v| crate::exact::scale(v, &frac(k, 1)));
            let t = Subspace::span(4, scaled.chain(std::iter::once(crate::exact::zero_vec(4)))).unwrap();
            prop_assert_eq!(s, t);
        }
    }
}
