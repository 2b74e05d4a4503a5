//! Exterior algebra on coordinate bases.
//!
//! A `k`-form in `dim` variables stores one coefficient per increasing
//! multi-index `i_1 < ... < i_k`, in lexicographic order. Multi-indices are
//! handled as bitmasks internally (`dim <= 6`).

use alloc::vec::Vec;

use crate::jet::Jet;
use crate::real::Real;

/// Increasing multi-indices of length `k` in `0..dim`, lexicographic.
pub fn basis(dim: usize, k: usize) -> Vec<u8> {
    let mut out = Vec::new();
    if k > dim {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u8, |m, &i| m | (1 << i)));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < dim - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Sorted coordinate indices of a mask.
pub fn indices(mask: u8) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of the permutation that sorts the concatenation `I ++ J` (disjoint).
pub fn merge_sign(i: u8, j: u8) -> f64 {
    let mut inversions = 0u32;
    for a in indices(i) {
        inversions += (j & ((1u16 << a) - 1) as u8).count_ones();
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Form<T> {
    dim: usize,
    degree: usize,
    #[cfg_attr(feature = "serde", serde(skip))]
    masks: Vec<u8>,
    coeffs: Vec<T>,
}

impl<T: Real> Form<T> {
    pub fn zero(dim: usize, degree: usize, like: &T) -> Self {
        let masks = basis(dim, degree);
        let coeffs = masks.iter().map(|_| like.lift(0.0)).collect();
        Form {
            dim,
            degree,
            masks,
            coeffs,
        }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<T>) -> Self {
        let masks = basis(dim, degree);
        assert_eq!(
            masks.len(),
            coeffs.len(),
            "coefficient count for a {degree}-form in {dim}d"
        );
        Form {
            dim,
            degree,
            masks,
            coeffs,
        }
    }

    /// A 1-form from its components.
    pub fn one_form(coeffs: Vec<T>) -> Self {
        let d = coeffs.len();
        Form::from_coeffs(d, 1, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn masks(&self) -> &[u8] {
        &self.masks
    }

    fn position(&self, mask: u8) -> Option<usize> {
        self.masks.iter().position(|&m| m == mask)
    }

    /// Coefficient on the increasing multi-index `idx`.
    pub fn get(&self, idx: &[usize]) -> Option<&T> {
        let mask = idx.iter().fold(0u8, |m, &i| m | (1 << i));
        self.position(mask).map(|p| &self.coeffs[p])
    }

    pub fn get_mask(&self, mask: u8) -> Option<&T> {
        self.position(mask).map(|p| &self.coeffs[p])
    }

    pub fn map<U: Real>(&self, f: impl Fn(&T) -> U) -> Form<U> {
        Form {
            dim: self.dim,
            degree: self.degree,
            masks: self.masks.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Form {
            dim: self.dim,
            degree: self.degree,
            masks: self.masks.clone(),
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        Form {
            dim: self.dim,
            degree: self.degree,
            masks: self.masks.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.map(|x| -x.clone()))
    }

    /// Largest absolute point value among the coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.re().abs()).fold(0.0, f64::max)
    }

    pub fn values(&self) -> Form<f64> {
        self.map(|c| c.re())
    }

    /// `α ∧ β`. A degree above `dim` gives the (empty) zero form.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let like = self.coeffs.first().or(other.coeffs.first());
        let degree = self.degree + other.degree;
        let mut out = match like {
            Some(l) => Form::zero(self.dim, degree, l),
            None => {
                return Form {
                    dim: self.dim,
                    degree,
                    masks: basis(self.dim, degree),
                    coeffs: Vec::new(),
                }
            }
        };
        if degree > self.dim {
            return out;
        }
        for (i, a) in self.masks.iter().zip(&self.coeffs) {
            for (j, b) in other.masks.iter().zip(&other.coeffs) {
                if i & j != 0 {
                    continue;
                }
                let p = out.position(i | j).expect("basis element");
                let term = a.clone() * b.clone() * merge_sign(*i, *j);
                out.coeffs[p] = out.coeffs[p].clone() + term;
            }
        }
        out
    }

    /// Interior product `i_X α` for `α` of degree at least one.
    pub fn interior(&self, x: &[T]) -> Self {
        assert!(self.degree >= 1, "interior product of a 0-form");
        assert_eq!(x.len(), self.dim);
        let mut out = Form::zero(self.dim, self.degree - 1, &x[0]);
        for (m, c) in self.masks.iter().zip(&self.coeffs) {
            for (slot, a) in indices(*m).into_iter().enumerate() {
                let rest = m & !(1 << a);
                let p = out.position(rest).expect("basis element");
                let sign = if slot % 2 == 0 { 1.0 } else { -1.0 };
                let term = x[a].clone() * c.clone() * sign;
                out.coeffs[p] = out.coeffs[p].clone() + term;
            }
        }
        out
    }

    /// Hodge star with the inverse metric and volume factor `sqrt|det g|`
    /// supplied; orientation is the coordinate order.
    pub fn hodge_with(&self, ginv: &[T], volume: &T) -> Self {
        let n = self.dim;
        let k = self.degree;
        let mut out = Form::zero(n, n - k, volume);
        let full: u8 = ((1u16 << n) - 1) as u8;
        for (p, j) in out.masks.clone().iter().enumerate() {
            let i = full & !j;
            let rows = indices(i);
            // α^I = Σ_K det(g^{-1}[I, K]) α_K
            let mut raised = volume.lift(0.0);
            for (kmask, coeff) in self.masks.iter().zip(&self.coeffs) {
                let cols = indices(*kmask);
                let minor: Vec<T> = rows
                    .iter()
                    .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
                    .map(|(r, c)| ginv[r * n + c].clone())
                    .collect();
                let det = if k == 0 {
                    volume.lift(1.0)
                } else {
                    crate::linalg::determinant(&minor, k)
                };
                raised = raised + det * coeff.clone();
            }
            out.coeffs[p] = raised * volume.clone() * merge_sign(i, *j);
        }
        out
    }
}

impl Form<Jet> {
    /// Exterior derivative; the result is one jet order lower.
    pub fn exterior_derivative(&self) -> Self {
        let order = self.coeffs.first().map(|c| c.order()).unwrap_or(1);
        assert!(order >= 1, "exterior derivative needs order-1 jets");
        let degree = self.degree + 1;
        let masks = basis(self.dim, degree);
        let template = self.coeffs.first().map(|c| c.partial(0));
        let coeffs = masks
            .iter()
            .map(|j| {
                let mut acc = template
                    .map(|t| t.zero_like())
                    .unwrap_or_else(|| Jet::constant(self.dim, 0, 0.0));
                for (slot, a) in indices(*j).into_iter().enumerate() {
                    let rest = j & !(1 << a);
                    if let Some(c) = self.get_mask(rest) {
                        let term = c.partial(a);
                        acc = if slot % 2 == 0 { acc + term } else { acc - term };
                    }
                }
                acc
            })
            .collect();
        Form {
            dim: self.dim,
            degree,
            masks,
            coeffs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_lexicographic() {
        let b = basis(4, 2);
        let idx: Vec<Vec<usize>> = b.iter().map(|&m| indices(m)).collect();
        assert_eq!(
            idx,
            alloc::vec![
                alloc::vec![0, 1],
                alloc::vec![0, 2],
                alloc::vec![0, 3],
                alloc::vec![1, 2],
                alloc::vec![1, 3],
                alloc::vec![2, 3]
            ]
        );
        assert!(basis(3, 4).is_empty());
        assert_eq!(basis(3, 0), alloc::vec![0u8]);
    }

    #[test]
    fn wedge_of_one_forms_is_antisymmetric() {
        let a = Form::one_form(alloc::vec![1.0, 2.0, 3.0]);
        let b = Form::one_form(alloc::vec![-1.0, 0.5, 4.0]);
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        for (x, y) in ab.coeffs().iter().zip(ba.coeffs()) {
            assert_eq!(*x, -*y);
        }
        assert_eq!(*ab.get(&[0, 1]).unwrap(), 1.0 * 0.5 + 2.0 * 1.0);
        assert!(a.wedge(&a).max_abs() == 0.0);
    }

    #[test]
    fn euclidean_hodge_of_dx_is_dy_dz() {
        let ginv = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let dx = Form::one_form(alloc::vec![1.0, 0.0, 0.0]);
        let s = dx.hodge_with(&ginv, &1.0);
        assert_eq!(*s.get(&[1, 2]).unwrap(), 1.0);
        let dy = Form::one_form(alloc::vec![0.0, 1.0, 0.0]);
        assert_eq!(*dy.hodge_with(&ginv, &1.0).get(&[0, 2]).unwrap(), -1.0);
    }

    #[test]
    fn interior_product_contracts_first_slot() {
        // i_X (dx ∧ dy) = X^x dy - X^y dx
        let w = Form::from_coeffs(2, 2, alloc::vec![1.0]);
        let v = w.interior(&[2.0, 5.0]);
        assert_eq!(v.coeffs(), &[-5.0, 2.0]);
    }
}
