use num::{One, Signed, Zero};

use super::RootSystem;
use crate::error::{Error, Result};
use crate::exact::{dot, int, invert, scale, QMatrix, QVector, Rational};

/// Dual weights `w_a`, their weights `d_a = sum_b (w_a, w_b)` and the weighted
/// dual weights `w_a / d_a`, all in simple-root coordinates.
///
/// Because `(w_a, b) = delta_ab`, the coordinates of `w_a` over the simple
/// roots are the entries `(w_a, w_b)`, i.e. row `a` of the inverse Gramm matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    dual_gramm: QMatrix,
    d: Vec<Rational>,
    weighted: Vec<QVector>,
}

impl WeightTable {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Self::from_gramm(rs.gramm())
    }

    /// Table for an arbitrary positive definite Gramm matrix, e.g. the
    /// sub-Gramm of a standard Levi factor.
    pub fn from_gramm(gramm: &QMatrix) -> Result<Self> {
        let dual_gramm = invert(gramm)?;
        let n = dual_gramm.rows();
        let d: Vec<Rational> = (0..n)
            .map(|a| dual_gramm.row(a).iter().fold(Rational::zero(), |s, x| s + x))
            .collect();
        if let Some(a) = d.iter().position(|x| !x.is_positive()) {
            return Err(Error::PreconditionViolated(format!(
                "d_{} is not positive",
                a + 1
            )));
        }
        let weighted = (0..n)
            .map(|a| scale(dual_gramm.row(a), &d[a].recip()))
            .collect();
        Ok(Self {
            dual_gramm,
            d,
            weighted,
        })
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// The matrix `((w_a, w_b))`.
    pub fn dual_gramm(&self) -> &QMatrix {
        &self.dual_gramm
    }

    pub fn dual_weight(&self, a: usize) -> &[Rational] {
        self.dual_gramm.row(a)
    }

    pub fn d(&self) -> &[Rational] {
        &self.d
    }

    pub fn weighted(&self, a: usize) -> &[Rational] {
        &self.weighted[a]
    }

    pub fn weighted_all(&self) -> &[QVector] {
        &self.weighted
    }
}

/// `(a, a) d_a + sum_{b != a} (a, b) d_b == 1`, exactly.
pub fn check_2d_identity(rs: &RootSystem, wt: &WeightTable, alpha: usize) -> Result<bool> {
    rs.check_root(alpha)?;
    if wt.rank() != rs.rank() {
        return Err(Error::DimensionMismatch("weight table rank".into()));
    }
    Ok(dot(rs.gramm().row(alpha), wt.d()) == Rational::one())
}

/// Sum of the positive roots whose `alpha`-coefficient is positive, together
/// with the exact `lambda > 0` such that the sum equals `lambda * w_alpha`.
pub fn parabolic_character(rs: &RootSystem, alpha: usize) -> Result<(QVector, Rational)> {
    rs.check_root(alpha)?;
    let n = rs.rank();
    let mut sum = vec![0i64; n];
    for root in rs.positive_roots().iter().filter(|r| r[alpha] > 0) {
        for (s, c) in sum.iter_mut().zip(root) {
            *s += c;
        }
    }
    let sum: QVector = sum.into_iter().map(int).collect();
    let w = invert(rs.gramm())?.row(alpha).to_vec();
    let j = w
        .iter()
        .position(|x| !x.is_zero())
        .ok_or(Error::NotProportional(alpha))?;
    let lambda = &sum[j] / &w[j];
    if !lambda.is_positive() || scale(&w, &lambda) != sum {
        return Err(Error::NotProportional(alpha));
    }
    Ok((sum, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int_vec};
    use crate::roots::{catalogue_with_products, RootSystem};

    fn table(s: &str) -> (RootSystem, WeightTable) {
        let rs = RootSystem::parse(s).unwrap();
        let wt = WeightTable::new(&rs).unwrap();
        (rs, wt)
    }

    #[test]
    fn a2_table() {
        let (_, wt) = table("A2");
        assert_eq!(
            wt.dual_gramm(),
            &QMatrix::from_rows(vec![vec![frac(2, 3), frac(1, 3)], vec![frac(1, 3), frac(2, 3)]])
                .unwrap()
        );
        assert_eq!(wt.d(), &[int(1), int(1)]);
        assert_eq!(wt.weighted(0), &[frac(2, 3), frac(1, 3)]);
    }

    #[test]
    fn a1_table() {
        let (_, wt) = table("A1");
        assert_eq!(wt.dual_weight(0), &[frac(1, 2)]);
        assert_eq!(wt.d(), &[frac(1, 2)]);
        assert_eq!(wt.weighted(0), &[int(1)]);
    }

    #[test]
    fn g2_and_b2_weights() {
        let (_, wt) = table("G2");
        assert_eq!(wt.d(), &[int(3), frac(5, 3)]);
        let (_, wt) = table("B2");
        assert_eq!(wt.d(), &[int(2), int(3)]);
    }

    #[test]
    fn two_d_identity_examples() {
        for s in ["B2", "G2", "A1"] {
            let (rs, wt) = table(s);
            assert!(check_2d_identity(&rs, &wt, 0).unwrap(), "{s}");
        }
        let (rs, wt) = table("A1");
        assert_eq!(check_2d_identity(&rs, &wt, 1), Err(Error::UnknownRoot(1)));
    }

    #[test]
    fn dual_weights_are_dual() {
        for spec in catalogue_with_products(5) {
            let rs = RootSystem::build(&spec).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            for a in 0..rs.rank() {
                for b in 0..rs.rank() {
                    let e_b = crate::exact::unit_vec(rs.rank(), b);
                    let expect = if a == b { int(1) } else { int(0) };
                    assert_eq!(rs.inner(wt.dual_weight(a), &e_b), expect);
                }
                let total = wt.weighted(a).iter().fold(Rational::zero(), |s, x| s + x);
                assert_eq!(total, int(1));
            }
        }
    }

    #[test]
    fn character_examples() {
        let rs = RootSystem::parse("A2").unwrap();
        let (sum, lambda) = parabolic_character(&rs, 0).unwrap();
        assert_eq!(sum, int_vec(&[2, 1]));
        assert_eq!(lambda, int(3));

        let rs = RootSystem::parse("A1").unwrap();
        assert_eq!(parabolic_character(&rs, 0).unwrap().1, int(2));

        let rs = RootSystem::parse("B2").unwrap();
        let (sum, lambda) = parabolic_character(&rs, 1).unwrap();
        assert_eq!(sum, int_vec(&[2, 4]));
        // w_2 = (1, 2) in B2
        assert_eq!(lambda, int(2));
    }
}
