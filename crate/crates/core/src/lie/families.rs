//! Constructors for the algebra families used throughout the toolkit.
//!
//! Basis orderings (fixed, relied upon by fixtures):
//!
//! * `sl_n`: diagonal elements `E_kk − E_{k+1,k+1}` for k = 0..n−1, then the
//!   off-diagonal `E_ij` in row-major order. For n = 2 this is `[h, e, f]`
//!   with h = diag(1,−1).
//! * `so(p,q)`: with g = diag(1_p, −1_q), `L_ij = E_ij − g_i g_j E_ji` for
//!   i < j in lexicographic order. `L_ij` is a rotation when g_i = g_j and a
//!   boost otherwise.
//! * `sp_{2n}`: matrices `[[A, B], [C, −Aᵀ]]`; first `A = E_ij` row-major,
//!   then symmetric `B = E_ij + E_ji` (i ≤ j, halved on the diagonal), then
//!   symmetric `C` the same way.
//! * `gl_2`: `E_11, E_12, E_21, E_22`.
//! * `iso(1,d)`: (d+2)×(d+2) affine matrices; the so(1,d) basis in the upper
//!   (d+1)×(d+1) block, then translations `P_μ = E_{μ, d+1}`.

use std::sync::Arc;

use super::algebra::{Family, LieAlgebra, DEFAULT_TOLERANCE};
use crate::linalg::RMat;
use crate::{Result, WedgeError};

fn unit(d: usize, i: usize, j: usize) -> RMat {
    let mut m = RMat::zeros(d, d);
    m[(i, j)] = 1.0;
    m
}

fn sl_basis(n: usize) -> Vec<RMat> {
    let mut b = Vec::with_capacity(n * n - 1);
    for k in 0..n - 1 {
        b.push(unit(n, k, k) - unit(n, k + 1, k + 1));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b.push(unit(n, i, j));
            }
        }
    }
    b
}

/// Metric signs of so(p,q).
pub fn so_metric(p: usize, q: usize) -> Vec<f64> {
    (0..p + q).map(|i| if i < p { 1.0 } else { -1.0 }).collect()
}

fn so_basis(p: usize, q: usize) -> Vec<RMat> {
    let n = p + q;
    let g = so_metric(p, q);
    let mut b = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            b.push(unit(n, i, j) - unit(n, j, i) * (g[i] * g[j]));
        }
    }
    b
}

/// Position of `L_ij` (i < j) in the so(p,q) basis.
pub fn so_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n);
    let mut idx = 0;
    for a in 0..i {
        idx += n - a - 1;
    }
    idx + (j - i - 1)
}

fn sp_basis(n: usize) -> Vec<RMat> {
    let d = 2 * n;
    let mut b = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut m = RMat::zeros(d, d);
            m[(i, j)] = 1.0;
            m[(n + j, n + i)] = -1.0;
            b.push(m);
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut m = RMat::zeros(d, d);
            m[(i, n + j)] = 1.0;
            m[(j, n + i)] = 1.0;
            if i == j {
                m[(i, n + i)] = 1.0;
            }
            b.push(m);
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut m = RMat::zeros(d, d);
            m[(n + i, j)] = 1.0;
            m[(n + j, i)] = 1.0;
            if i == j {
                m[(n + i, i)] = 1.0;
            }
            b.push(m);
        }
    }
    b
}

fn iso_basis(d: usize) -> Vec<RMat> {
    let m = d + 2;
    let mut b = Vec::new();
    for l in so_basis(1, d) {
        let mut big = RMat::zeros(m, m);
        big.view_mut((0, 0), (d + 1, d + 1)).copy_from(&l);
        b.push(big);
    }
    for mu in 0..=d {
        b.push(unit(m, mu, d + 1));
    }
    b
}

/// sl_n(ℝ).
pub fn sl(n: usize) -> Result<Arc<LieAlgebra>> {
    if !(2..=8).contains(&n) {
        return Err(WedgeError::Unsupported(format!("sl_{n} outside the supported range 2..=8")));
    }
    LieAlgebra::from_matrices(format!("sl{n}"), Family::Sl { n }, sl_basis(n), DEFAULT_TOLERANCE)
}

/// so(p,q) for the metric diag(1_p, −1_q).
pub fn so(p: usize, q: usize) -> Result<Arc<LieAlgebra>> {
    let n = p + q;
    if !(2..=8).contains(&n) {
        return Err(WedgeError::Unsupported(format!("so({p},{q}) outside the supported range")));
    }
    LieAlgebra::from_matrices(format!("so({p},{q})"), Family::So { p, q }, so_basis(p, q), DEFAULT_TOLERANCE)
}

/// sp_{2n}(ℝ).
pub fn sp(n: usize) -> Result<Arc<LieAlgebra>> {
    if !(1..=4).contains(&n) {
        return Err(WedgeError::Unsupported(format!("sp_{} outside the supported range", 2 * n)));
    }
    LieAlgebra::from_matrices(format!("sp{}", 2 * n), Family::Sp { n }, sp_basis(n), DEFAULT_TOLERANCE)
}

/// gl_2(ℝ).
pub fn gl2() -> Result<Arc<LieAlgebra>> {
    let b = vec![unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0), unit(2, 1, 1)];
    LieAlgebra::from_matrices("gl2", Family::Gl2, b, DEFAULT_TOLERANCE)
}

/// Poincaré algebra iso(1,d).
pub fn iso(d: usize) -> Result<Arc<LieAlgebra>> {
    if !(1..=4).contains(&d) {
        return Err(WedgeError::Unsupported(format!("iso(1,{d}) outside the supported range")));
    }
    LieAlgebra::from_matrices(format!("iso(1,{d})"), Family::Iso { d }, iso_basis(d), DEFAULT_TOLERANCE)
}

/// Index of the first translation generator in the iso(1,d) basis.
pub fn iso_translation_offset(d: usize) -> usize {
    (d + 1) * d / 2
}

/// Direct sum with block-diagonal matrices; basis of `a` first.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<Arc<LieAlgebra>> {
    let (da, db) = (a.matrix_size(), b.matrix_size());
    let d = da + db;
    let mut basis = Vec::new();
    for m in a.basis() {
        let mut big = RMat::zeros(d, d);
        big.view_mut((0, 0), (da, da)).copy_from(m);
        basis.push(big);
    }
    for m in b.basis() {
        let mut big = RMat::zeros(d, d);
        big.view_mut((da, da), (db, db)).copy_from(m);
        basis.push(big);
    }
    let mut parts = Vec::new();
    for f in [a.family(), b.family()] {
        match f {
            Family::Sum { parts: p } => parts.extend(p.iter().cloned()),
            other => parts.push(other.clone()),
        }
    }
    let tol = a.tolerance().max(b.tolerance());
    LieAlgebra::from_matrices(format!("{}+{}", a.name(), b.name()), Family::Sum { parts }, basis, tol)
}

/// Build any supported family.
pub fn make_algebra(family: &Family) -> Result<Arc<LieAlgebra>> {
    match family {
        Family::Sl { n } => sl(*n),
        Family::So { p, q } => so(*p, *q),
        Family::Sp { n } => sp(*n),
        Family::Gl2 => gl2(),
        Family::Iso { d } => iso(*d),
        Family::Sum { parts } => {
            let mut it = parts.iter();
            let first = it
                .next()
                .ok_or_else(|| WedgeError::Unsupported("empty direct sum".into()))?;
            let mut acc = make_algebra(first)?;
            for p in it {
                acc = direct_sum(&acc, &*make_algebra(p)?)?;
            }
            Ok(acc)
        }
        Family::Custom => Err(WedgeError::Unsupported("custom algebras are loaded from files".into())),
    }
}

/// Parse a label and build the algebra.
pub fn make_algebra_from_label(label: &str) -> Result<Arc<LieAlgebra>> {
    make_algebra(&Family::parse(label)?)
}
