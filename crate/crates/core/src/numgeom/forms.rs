//! Floating-point forms on an orthonormal frame.

use std::collections::BTreeMap;

use crate::multilinear::{
    basis_blades, blade_indices, blade_of, permutation_sign, wedge_sign, Blade,
};

#[derive(Debug, Clone, PartialEq)]
pub struct FrameForm {
    pub dim: usize,
    pub degree: usize,
    pub terms: BTreeMap<Blade, f64>,
}

impl FrameForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(dim: usize, indices: &[usize], c: f64) -> Self {
        let mut f = Self::zero(dim, indices.len());
        let s = permutation_sign(indices);
        if s != 0 && c != 0.0 {
            f.terms.insert(blade_of(indices), c * s as f64);
        }
        f
    }

    fn add_term(&mut self, b: Blade, c: f64) {
        *self.terms.entry(b).or_insert(0.0) += c;
    }

    /// `α(e_{i₁}, …, e_{i_k})` for arbitrary (unsorted) indices.
    pub fn eval(&self, indices: &[usize]) -> f64 {
        let s = permutation_sign(indices);
        if s == 0 {
            return 0.0;
        }
        self.terms
            .get(&blade_of(indices))
            .map_or(0.0, |c| c * s as f64)
    }

    pub fn add(&self, other: &FrameForm) -> FrameForm {
        let mut f = self.clone();
        for (b, c) in &other.terms {
            f.add_term(*b, *c);
        }
        f
    }

    pub fn scale(&self, s: f64) -> FrameForm {
        let mut f = self.clone();
        f.terms.values_mut().for_each(|c| *c *= s);
        f
    }

    pub fn sub(&self, other: &FrameForm) -> FrameForm {
        self.add(&other.scale(-1.0))
    }

    pub fn wedge(&self, other: &FrameForm) -> FrameForm {
        let mut f = Self::zero(self.dim, self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let s = wedge_sign(*a, *b);
                if s != 0 {
                    f.add_term(a | b, s as f64 * x * y);
                }
            }
        }
        f
    }

    pub fn hook(&self, i: usize) -> FrameForm {
        let mut f = Self::zero(self.dim, self.degree.saturating_sub(1));
        let bit = 1 << i;
        for (b, c) in &self.terms {
            if b & bit != 0 {
                let before = (b & (bit - 1)).count_ones();
                f.add_term(b & !bit, if before.is_multiple_of(2) { *c } else { -c });
            }
        }
        f
    }

    pub fn hodge(&self) -> FrameForm {
        let full: Blade = (1 << self.dim) - 1;
        let mut f = Self::zero(self.dim, self.dim - self.degree);
        for (b, c) in &self.terms {
            let comp = full & !b;
            f.add_term(comp, wedge_sign(*b, comp) as f64 * c);
        }
        f
    }

    pub fn norm2(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Coefficients over [`basis_blades`].
    pub fn coordinates(&self) -> Vec<f64> {
        basis_blades(self.dim, self.degree)
            .into_iter()
            .map(|b| self.terms.get(&b).copied().unwrap_or(0.0))
            .collect()
    }

    pub fn indices(&self) -> Vec<(Vec<usize>, f64)> {
        self.terms
            .iter()
            .map(|(b, c)| (blade_indices(*b), *c))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let a = FrameForm::term(5, &[0, 1], 2.0);
        let b = FrameForm::term(5, &[4], 1.0);
        let t = a.wedge(&b);
        assert_eq!(t.eval(&[0, 1, 4]), 2.0);
        assert_eq!(t.eval(&[1, 0, 4]), -2.0);
        assert_eq!(t.hook(4).eval(&[0, 1]), 2.0);
        assert_eq!(t.hodge().eval(&[2, 3]), 2.0);
        assert_eq!(t.norm2(), 4.0);
        assert!(a.wedge(&a).terms.values().all(|c| *c == 0.0));
    }
}
