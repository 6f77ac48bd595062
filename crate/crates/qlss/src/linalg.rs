use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::tolerances::TOL;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Thin singular value decomposition `A = U diag(s) V†` with `s` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn new(a: &CMat) -> Svd {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Svd { u: CMat::zeros(m, 0), s: vec![], v: CMat::zeros(n, 0) };
        }
        let svd = nalgebra::SVD::new(a.clone(), true, true);
        let u = svd.u.expect("left vectors requested");
        let v = svd.v_t.expect("right vectors requested").adjoint();
        let s = svd.singular_values.iter().copied().collect();
        Svd { u, s, v }
    }

    pub fn max_singular(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above the relative zero threshold.
    pub fn rank(&self) -> usize {
        let cut = TOL.zero_rel * self.max_singular();
        self.s.iter().filter(|&&s| s > cut && s > 0.0).count()
    }

    pub fn nonzero(&self) -> &[f64] {
        &self.s[..self.rank()]
    }

    /// Right singular vectors with nonzero singular value, as columns.
    pub fn v_nonzero(&self) -> CMat {
        self.v.columns(0, self.rank()).into_owned()
    }

    pub fn u_nonzero(&self) -> CMat {
        self.u.columns(0, self.rank()).into_owned()
    }

    pub fn reconstruct(&self) -> CMat {
        let sig = CMat::from_diagonal(&CVec::from_iterator(self.s.len(), self.s.iter().map(|&s| re(s))));
        &self.u * sig * self.v.adjoint()
    }

    /// Component of `x` lying in the kernel of the factored matrix.
    pub fn kernel_component(&self, x: &CVec) -> CVec {
        let vr = self.v_nonzero();
        x - &vr * (vr.adjoint() * x)
    }
}

pub fn basis(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = ONE;
    v
}

/// ⟨a|b⟩ with the first argument conjugated.
#[inline]
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.dotc(b)
}

pub fn normalized(v: &CVec) -> CVec {
    let n = v.norm();
    v.map(|z| z / n)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        C64::new(a, b) / std::f64::consts::SQRT_2
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// A unitary whose first column is the unit vector `b`.
pub fn unitary_with_first_column(b: &CVec) -> CMat {
    let n = b.len();
    let mut m = CMat::identity(n, n);
    // Put b first, then the basis vectors, skipping the one b overlaps most.
    let pivot = (0..n)
        .max_by(|&i, &j| b[i].norm().partial_cmp(&b[j].norm()).unwrap())
        .unwrap_or(0);
    m.set_column(0, b);
    let mut col = 1;
    for i in 0..n {
        if i == pivot {
            continue;
        }
        if col < n {
            m.set_column(col, &basis(n, i));
            col += 1;
        }
    }
    let qr = m.qr();
    let mut q = qr.q();
    let r00 = qr.r()[(0, 0)];
    let phase = r00 / r00.norm();
    for i in 0..n {
        q[(i, 0)] *= phase;
    }
    q
}

/// Trace distance between the pure state |x⟩ and the density matrix `rho`.
pub fn trace_distance_pure_mixed(x: &CVec, rho: &CMat) -> f64 {
    let d = x * x.adjoint() - rho;
    let h = (&d + d.adjoint()).map(|z| z * 0.5);
    let eig = h.symmetric_eigenvalues();
    0.5 * eig.iter().map(|l| l.abs()).sum::<f64>()
}

/// Density matrix of a weighted ensemble of unit vectors, normalized to unit trace.
pub fn ensemble_density(members: &[(f64, CVec)]) -> CMat {
    let n = members.first().map(|(_, v)| v.len()).unwrap_or(0);
    let mut rho = CMat::zeros(n, n);
    let mut total = 0.0;
    for (w, v) in members {
        rho += v * v.adjoint() * re(*w);
        total += w;
    }
    if total > 0.0 {
        rho /= re(total);
    }
    rho
}

/// Operator norm (largest singular value).
pub fn operator_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Zero-pad `a` into the top-left corner of a `rows x cols` matrix.
pub fn pad(a: &CMat, rows: usize, cols: usize) -> CMat {
    let mut out = CMat::zeros(rows, cols);
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out
}

pub fn pad_vec(v: &CVec, len: usize) -> CVec {
    let mut out = CVec::zeros(len);
    out.rows_mut(0, v.len()).copy_from(v);
    out
}
