use crate::error::{check_dim, Result};
use crate::numeric::{Matrix, Scalar};

/// Element of `S[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Complex<S> {
    pub fn new(re: S, im: S) -> Self {
        Complex { re, im }
    }
    pub fn zero() -> Self {
        Complex { re: S::zero(), im: S::zero() }
    }
    pub fn one() -> Self {
        Complex { re: S::one(), im: S::zero() }
    }
    pub fn i() -> Self {
        Complex { re: S::zero(), im: S::one() }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_negligible() && self.im.is_negligible()
    }
    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn add(&self, o: &Self) -> Self {
        Complex { re: self.re.add_r(&o.re), im: self.im.add_r(&o.im) }
    }
    pub fn sub(&self, o: &Self) -> Self {
        Complex { re: self.re.sub_r(&o.re), im: self.im.sub_r(&o.im) }
    }
    pub fn neg(&self) -> Self {
        Complex { re: -self.re.clone(), im: -self.im.clone() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        Complex {
            re: self.re.mul_r(&o.re).sub_r(&self.im.mul_r(&o.im)),
            im: self.re.mul_r(&o.im).add_r(&self.im.mul_r(&o.re)),
        }
    }
    pub fn scale(&self, k: &S) -> Self {
        Complex { re: self.re.mul_r(k), im: self.im.mul_r(k) }
    }
    pub fn norm_sqr(&self) -> S {
        self.re.mul_r(&self.re).add_r(&self.im.mul_r(&self.im))
    }
    pub fn div(&self, o: &Self) -> Self {
        let d = o.norm_sqr();
        let n = self.mul(&o.conj());
        Complex { re: n.re.div_r(&d), im: n.im.div_r(&d) }
    }
    pub fn approx_eq(&self, o: &Self) -> bool {
        self.re.approx_eq(&o.re) && self.im.approx_eq(&o.im)
    }
}

/// Square complex matrix stored as a pair of real matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<S> {
    pub re: Matrix<S>,
    pub im: Matrix<S>,
}

impl<S: Scalar> CMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        CMatrix { re: Matrix::zeros(n, n), im: Matrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix { re: Matrix::identity(n), im: Matrix::zeros(n, n) }
    }

    pub fn real(re: Matrix<S>) -> Self {
        let n = re.rows();
        CMatrix { re, im: Matrix::zeros(n, n) }
    }

    pub fn from_parts(re: Matrix<S>, im: Matrix<S>) -> Result<Self> {
        check_dim(re.rows(), im.rows())?;
        check_dim(re.cols(), im.cols())?;
        Ok(CMatrix { re, im })
    }

    /// Unitary `|j> -> |perm[j]>`.
    pub fn permutation(perm: &[usize]) -> Self {
        Self::real(Matrix::permutation(perm))
    }

    pub fn n(&self) -> usize {
        self.re.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<S> {
        Complex::new(self.re.get(i, j).clone(), self.im.get(i, j).clone())
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex<S>) {
        self.re.set(i, j, z.re);
        self.im.set(i, j, z.im);
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let rr = self.re.matmul(&o.re)?;
        let ii = self.im.matmul(&o.im)?;
        let ri = self.re.matmul(&o.im)?;
        let ir = self.im.matmul(&o.re)?;
        let n = self.n();
        Ok(CMatrix {
            re: Matrix::from_fn(n, n, |i, j| rr.get(i, j).sub_r(ii.get(i, j))),
            im: Matrix::from_fn(n, n, |i, j| ri.get(i, j).add_r(ir.get(i, j))),
        })
    }

    pub fn scale(&self, z: &Complex<S>) -> Self {
        let n = self.n();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(i, j).mul(z));
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.n();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(i, j).add(&o.get(i, j)));
            }
        }
        out
    }

    pub fn kron(&self, o: &Self) -> Self {
        let (a, b) = (self.n(), o.n());
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, x.mul(&o.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<S> {
        (0..self.n()).fold(Complex::zero(), |acc, i| acc.add(&self.get(i, i)))
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.re.approx_eq(&o.re) && self.im.approx_eq(&o.im)
    }

    pub fn is_hermitian(&self) -> bool {
        self.approx_eq(&self.adjoint())
    }

    pub fn is_unitary(&self) -> Result<bool> {
        Ok(self.mul(&self.adjoint())?.approx_eq(&Self::identity(self.n())))
    }

    /// `U M U†`
    pub fn conjugate(&self, m: &Self) -> Result<Self> {
        self.mul(m)?.mul(&self.adjoint())
    }
}
