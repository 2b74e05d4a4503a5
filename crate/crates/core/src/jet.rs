//! Truncated multivariate Taylor arithmetic ("jets") up to third order.
//!
//! A [`Jet`] carries a value together with every partial derivative up to its
//! order in `dim` variables. Arithmetic propagates derivatives exactly through
//! the Leibniz rule and Faà di Bruno's formula, so quantities such as
//! Christoffel symbols or curvature inherit exact derivatives of lower order
//! via [`Jet::partial`].

use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::math;
use crate::real::Real;

/// Largest number of coordinates a jet can differentiate against.
pub const MAX_DIM: usize = 6;
/// Highest derivative order carried.
pub const MAX_ORDER: usize = 3;

type Grad = [f64; MAX_DIM];
type Hess = [[f64; MAX_DIM]; MAX_DIM];
type Third = [[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    dim: u8,
    order: u8,
    value: f64,
    grad: Grad,
    hess: Hess,
    third: Third,
}

impl Jet {
    pub fn constant(dim: usize, order: usize, c: f64) -> Self {
        assert!(dim <= MAX_DIM, "jet dimension {dim} > {MAX_DIM}");
        Jet {
            dim: dim as u8,
            order: order.min(MAX_ORDER) as u8,
            value: c,
            grad: [0.0; MAX_DIM],
            hess: [[0.0; MAX_DIM]; MAX_DIM],
            third: [[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM],
        }
    }

    /// The coordinate function `x_index` at the point `x`.
    pub fn variable(dim: usize, order: usize, index: usize, x: f64) -> Self {
        assert!(index < dim);
        let mut j = Jet::constant(dim, order, x);
        if order >= 1 {
            j.grad[index] = 1.0;
        }
        j
    }

    /// Seeds all coordinate variables of a point.
    pub fn seed(coords: &[f64], order: usize) -> alloc::vec::Vec<Jet> {
        let dim = coords.len();
        coords
            .iter()
            .enumerate()
            .map(|(i, &x)| Jet::variable(dim, order, i, x))
            .collect()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn d1(&self, a: usize) -> f64 {
        self.grad[a]
    }

    #[inline]
    pub fn d2(&self, a: usize, b: usize) -> f64 {
        self.hess[a][b]
    }

    #[inline]
    pub fn d3(&self, a: usize, b: usize, c: usize) -> f64 {
        self.third[a][b][c]
    }

    pub fn zero_like(&self) -> Self {
        Jet::constant(self.dim(), self.order(), 0.0)
    }

    /// Drops derivative information above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let mut out = *self;
        let order = order.min(self.order());
        out.order = order as u8;
        if order < 3 {
            out.third = [[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM];
        }
        if order < 2 {
            out.hess = [[0.0; MAX_DIM]; MAX_DIM];
        }
        if order < 1 {
            out.grad = [0.0; MAX_DIM];
        }
        out
    }

    /// `∂_a` of this jet, one order lower.
    pub fn partial(&self, a: usize) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let d = self.dim();
        let mut out = Jet::constant(d, self.order() - 1, self.grad[a]);
        if out.order >= 1 {
            for i in 0..d {
                out.grad[i] = self.hess[a][i];
            }
        }
        if out.order >= 2 {
            for i in 0..d {
                for j in 0..d {
                    out.hess[i][j] = self.third[a][i][j];
                }
            }
        }
        out
    }

    /// Composition `f(self)` given `f, f', f'', f'''` at `self.value()`.
    pub fn chain(&self, f: [f64; 4]) -> Self {
        let d = self.dim();
        let k = self.order();
        let mut out = Jet::constant(d, k, f[0]);
        if k >= 1 {
            for i in 0..d {
                out.grad[i] = f[1] * self.grad[i];
            }
        }
        if k >= 2 {
            for i in 0..d {
                for j in 0..d {
                    out.hess[i][j] = f[2] * self.grad[i] * self.grad[j] + f[1] * self.hess[i][j];
                }
            }
        }
        if k >= 3 {
            let (u, h) = (&self.grad, &self.hess);
            for i in 0..d {
                for j in 0..d {
                    for l in 0..d {
                        out.third[i][j][l] = f[3] * u[i] * u[j] * u[l]
                            + f[2] * (h[i][j] * u[l] + h[i][l] * u[j] + h[j][l] * u[i])
                            + f[1] * self.third[i][j][l];
                    }
                }
            }
        }
        out
    }

    pub fn recip(&self) -> Self {
        let x = self.value;
        let r = 1.0 / x;
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sqrt(&self) -> Self {
        let s = math::sqrt(self.value);
        let x = self.value;
        self.chain([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)])
    }

    /// `self^p` for real `p`; requires a positive value unless `p` is integral.
    pub fn powf(&self, p: f64) -> Self {
        let x = self.value;
        let f0 = math::powf(x, p);
        let f1 = p * math::powf(x, p - 1.0);
        let f2 = p * (p - 1.0) * math::powf(x, p - 2.0);
        let f3 = p * (p - 1.0) * (p - 2.0) * math::powf(x, p - 3.0);
        self.chain([f0, f1, f2, f3])
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return self.lift(1.0);
        }
        let x = self.value;
        let nf = n as f64;
        let p = |e: i32| if e < 0 && x == 0.0 { 0.0 } else { math::powi(x, e) };
        self.chain([
            p(n),
            nf * p(n - 1),
            nf * (nf - 1.0) * p(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * p(n - 3),
        ])
    }

    pub fn exp(&self) -> Self {
        let e = math::exp(self.value);
        self.chain([e; 4])
    }

    pub fn ln(&self) -> Self {
        let x = self.value;
        self.chain([math::ln(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (math::sin(self.value), math::cos(self.value));
        self.chain([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (math::sin(self.value), math::cos(self.value));
        self.chain([c, -s, -c, s])
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (math::sinh(self.value), math::cosh(self.value));
        self.chain([s, c, s, c])
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (math::sinh(self.value), math::cosh(self.value));
        self.chain([c, s, c, s])
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    fn binary_shape(&self, other: &Jet) -> (usize, usize) {
        debug_assert_eq!(self.dim, other.dim, "jet dimension mismatch");
        (self.dim(), self.order().min(other.order()))
    }

    fn scaled(&self, c: f64) -> Self {
        let mut out = *self;
        out.value *= c;
        let d = self.dim();
        let k = self.order();
        if k >= 1 {
            for i in 0..d {
                out.grad[i] *= c;
            }
        }
        if k >= 2 {
            for row in out.hess.iter_mut().take(d) {
                for v in row.iter_mut().take(d) {
                    *v *= c;
                }
            }
        }
        if k >= 3 {
            for plane in out.third.iter_mut().take(d) {
                for row in plane.iter_mut().take(d) {
                    for v in row.iter_mut().take(d) {
                        *v *= c;
                    }
                }
            }
        }
        out
    }

    fn combine(&self, other: &Jet, sign: f64) -> Self {
        let (d, k) = self.binary_shape(other);
        let mut out = Jet::constant(d, k, self.value + sign * other.value);
        if k >= 1 {
            for i in 0..d {
                out.grad[i] = self.grad[i] + sign * other.grad[i];
            }
        }
        if k >= 2 {
            for i in 0..d {
                for j in 0..d {
                    out.hess[i][j] = self.hess[i][j] + sign * other.hess[i][j];
                }
            }
        }
        if k >= 3 {
            for i in 0..d {
                for j in 0..d {
                    for l in 0..d {
                        out.third[i][j][l] = self.third[i][j][l] + sign * other.third[i][j][l];
                    }
                }
            }
        }
        out
    }

    fn product(&self, b: &Jet) -> Self {
        let a = self;
        let (d, k) = a.binary_shape(b);
        let mut out = Jet::constant(d, k, a.value * b.value);
        if k >= 1 {
            for i in 0..d {
                out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
            }
        }
        if k >= 2 {
            for i in 0..d {
                for j in 0..d {
                    out.hess[i][j] =
                        a.hess[i][j] * b.value + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i] + a.value * b.hess[i][j];
                }
            }
        }
        if k >= 3 {
            for i in 0..d {
                for j in 0..d {
                    for l in 0..d {
                        out.third[i][j][l] = a.third[i][j][l] * b.value
                            + a.hess[i][j] * b.grad[l]
                            + a.hess[i][l] * b.grad[j]
                            + a.hess[j][l] * b.grad[i]
                            + a.grad[i] * b.hess[j][l]
                            + a.grad[j] * b.hess[i][l]
                            + a.grad[l] * b.hess[i][j]
                            + a.value * b.third[i][j][l];
                    }
                }
            }
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.combine(&rhs, 1.0)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.combine(&rhs, -1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.product(&rhs)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self.product(&rhs.recip())
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scaled(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.value += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.value -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scaled(rhs)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scaled(1.0 / rhs)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scaled(self)
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        rhs.recip().scaled(self)
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl MulAssign<f64> for Jet {
    fn mul_assign(&mut self, rhs: f64) {
        *self = self.scaled(rhs);
    }
}

impl Real for Jet {
    fn re(&self) -> f64 {
        self.value
    }

    fn lift(&self, c: f64) -> Self {
        Jet::constant(self.dim(), self.order(), c)
    }
}
