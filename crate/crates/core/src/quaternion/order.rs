//! Orders in a quaternion algebra and bounded norm-one searches.

use num_rational::BigRational;

use super::{BaseField, Coords, QuaternionAlgebra};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::ring::{QuadElem, Ring};

/// An 𝒪_F-lattice spanned by four elements (coordinates in 1, i, j, k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatOrder {
    algebra: QuaternionAlgebra,
    basis: Vec<Coords>,
}

/// Solve Σ c_n basis[n] = x over the field; `None` when the basis is singular.
fn solve(field: &BaseField, basis: &[Coords], x: &Coords) -> Option<Coords> {
    // augmented 4×5 system, columns = basis elements
    let mut m: Vec<Vec<QuadElem>> =
        (0..4).map(|r| (0..4).map(|c| basis[c][r].clone()).chain([x[r].clone()]).collect()).collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !field.is_zero(&m[r][col]))?;
        m.swap(col, piv);
        let inv = field.inv(&m[col][col])?;
        for c in col..5 {
            m[col][c] = field.mul(&m[col][c], &inv);
        }
        for r in 0..4 {
            if r != col && !field.is_zero(&m[r][col]) {
                let f = m[r][col].clone();
                for c in col..5 {
                    let t = field.mul(&f, &m[col][c]);
                    m[r][c] = field.sub(&m[r][c], &t);
                }
            }
        }
    }
    Some(std::array::from_fn(|r| m[r][4].clone()))
}

impl QuatOrder {
    /// Build and validate.
    pub fn new(algebra: QuaternionAlgebra, basis: Vec<Coords>) -> Result<Self> {
        let o = QuatOrder { algebra, basis };
        o.validate()?;
        Ok(o)
    }

    /// 𝒪_F⟨1, i, j, k⟩; requires a and b integral.
    pub fn standard(algebra: QuaternionAlgebra) -> Result<Self> {
        let basis = (0..4).map(|n| algebra.basis(n)).collect();
        QuatOrder::new(algebra, basis)
    }

    /// Hurwitz order of H(−1, −1; ℚ) with basis 1, i, (1+i+j+k)/2, (1+i+j−k)/2.
    pub fn hurwitz() -> Self {
        let alg = QuaternionAlgebra::hamilton();
        let h = |x: [i64; 4]| x.map(|t| QuadElem::rational(BigRational::new(t.into(), 2.into())));
        let basis = vec![h([2, 0, 0, 0]), h([0, 2, 0, 0]), h([1, 1, 1, 1]), h([1, 1, 1, -1])];
        QuatOrder::new(alg, basis).expect("Hurwitz order")
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn basis(&self) -> &[Coords] {
        &self.basis
    }

    /// Coordinates of x over 𝒪_F in this basis, or `None` if x ∉ 𝒪.
    pub fn coordinates(&self, x: &Coords) -> Option<Coords> {
        let f = self.algebra.field();
        let c = solve(f, &self.basis, x)?;
        if c.iter().all(|t| f.is_integral(t)) {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &Coords) -> bool {
        self.coordinates(x).is_some()
    }

    /// Full rank, contains 1, integral basis elements, closed under products.
    pub fn validate(&self) -> Result<()> {
        let alg = &self.algebra;
        let f = alg.field();
        if self.basis.len() != 4 {
            return Err(Error::validation(format!("an order needs 4 basis elements, got {}", self.basis.len())));
        }
        if solve(f, &self.basis, &alg.one()).is_none() {
            return Err(Error::validation("basis is not of full rank"));
        }
        if !self.contains(&alg.one()) {
            return Err(Error::validation("lattice does not contain 1"));
        }
        for (n, e) in self.basis.iter().enumerate() {
            if !f.is_integral(&alg.trace(e)) || !f.is_integral(&alg.norm(e)) {
                return Err(Error::validation(format!("basis element {n} is not integral")));
            }
        }
        for (i, x) in self.basis.iter().enumerate() {
            for (j, y) in self.basis.iter().enumerate() {
                if !self.contains(&alg.mul(x, y)) {
                    return Err(Error::validation(format!(
                        "not closed under multiplication: e{i}·e{j} = {:?} lies outside",
                        alg.format_element(&alg.mul(x, y))
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// All x = Σ c_n e_n with N(x) = 1 whose 𝒪_F-coordinates of the c_n are
    /// bounded by `height` in absolute value. Parallel over the first coordinate.
    pub fn norm_one_search(&self, height: u64, exec: &Exec) -> Vec<Coords> {
        let alg = &self.algebra;
        let f = alg.field();
        let h = height as i64;
        let ib = f.integral_basis();
        // every scalar of 𝒪_F with coordinates in [−h, h]
        let mut scalars = vec![f.zero()];
        for w in &ib {
            let mut next = Vec::new();
            for s in &scalars {
                for t in -h..=h {
                    next.push(f.add(s, &f.mul(&f.from_i64(t), w)));
                }
            }
            scalars = next;
        }
        // multiples[n][s] = scalars[s] · e_n
        let multiples: Vec<Vec<Coords>> =
            self.basis.iter().map(|e| scalars.iter().map(|s| alg.scale(s, e)).collect()).collect();
        let one = f.one();
        let slabs = exec.map_range(scalars.len(), |s0| {
            let mut found = Vec::new();
            let x0 = &multiples[0][s0];
            for x1 in &multiples[1] {
                let y1 = alg.add(x0, x1);
                for x2 in &multiples[2] {
                    let y2 = alg.add(&y1, x2);
                    for x3 in &multiples[3] {
                        let x = alg.add(&y2, x3);
                        if alg.norm(&x) == one {
                            found.push(x);
                        }
                    }
                }
            }
            found
        });
        slabs.into_iter().flatten().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn lipschitz_and_hurwitz_counts() {
        let lip = QuatOrder::standard(QuaternionAlgebra::hamilton()).unwrap();
        assert!(lip.is_valid());
        let units = lip.norm_one_search(1, &Exec::sequential());
        assert_eq!(units.len(), 8);
        let hur = QuatOrder::hurwitz();
        let units = hur.norm_one_search(1, &Exec::parallel());
        assert_eq!(units.len(), 24);
        let distinct: HashSet<_> = units.iter().map(|x| format!("{x:?}")).collect();
        assert_eq!(distinct.len(), 24);
        // larger boxes find nothing new in a definite algebra
        assert_eq!(hur.norm_one_search(2, &Exec::parallel()).len(), 24);
    }

    #[test]
    fn invalid_orders_rejected() {
        let alg = QuaternionAlgebra::hamilton();
        let half = |x: [i64; 4]| x.map(|t| QuadElem::rational(BigRational::new(t.into(), 2.into())));
        // (1+i)/2 has norm 1/2
        let bad = vec![alg.one(), half([1, 1, 0, 0]), alg.basis(2), alg.basis(3)];
        assert!(QuatOrder::new(alg.clone(), bad).is_err());
        // j·k = i is missing from the span of 1, 2i, j, k
        let two_i = alg.scale(&QuadElem::ints(2, 0), &alg.basis(1));
        let err = QuatOrder::new(alg.clone(), vec![alg.one(), two_i, alg.basis(2), alg.basis(3)]).unwrap_err();
        assert!(err.to_string().contains("closed"));
        let singular = vec![alg.one(), alg.one(), alg.basis(2), alg.basis(3)];
        assert!(QuatOrder::new(alg, singular).is_err());
    }

    #[test]
    fn gaussian_units() {
        let alg = QuaternionAlgebra::parse(1, "-1", "-1").unwrap();
        let o = QuatOrder::standard(alg.clone()).unwrap();
        let units = o.norm_one_search(1, &Exec::parallel());
        assert!(units.iter().all(|x| alg.norm(x) == QuadElem::ints(1, 0)));
        // ±1, ±i, ±j, ±k, and w·i etc. times scalars of norm 1
        assert!(units.len() > 8);
        assert!(units.contains(&alg.one()));
    }
}
