//! Dense linear algebra helpers on top of nalgebra.

use crate::{Result, WedgeError, C64};
use nalgebra::{DMatrix, DVector};

pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// One-sided Jacobi SVD of a tall (or square) matrix: returns singular values
/// in descending order, the matching thin `U` (columns for zero singular
/// values are zero) and a square orthogonal `V`.
fn jacobi_svd_tall(a: &RMat) -> (RVec, RMat, RMat) {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut u = a.clone();
    let mut v = RMat::identity(n, n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..m {
                    let (x, y) = (u[(k, i)], u[(k, j)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let (x, y) = (u[(k, i)], u[(k, j)]);
                    u[(k, i)] = c * x - s * y;
                    u[(k, j)] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (v[(k, i)], v[(k, j)]);
                    v[(k, i)] = c * x - s * y;
                    v[(k, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| u.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap_or(std::cmp::Ordering::Equal));
    let smax = norms.iter().cloned().fold(0.0, f64::max);
    let mut s = RVec::zeros(n);
    let mut uu = RMat::zeros(m, n);
    let mut vv = RMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        s[dst] = norms[src];
        if norms[src] > smax * 1e-300 && norms[src] > 0.0 {
            uu.set_column(dst, &(u.column(src) / norms[src]));
        }
        vv.set_column(dst, &v.column(src));
    }
    (s, uu, vv)
}

/// SVD `m = U diag(s) Vᵀ` with `min(r, c)` singular values in descending order.
/// `U` is r×k and `V` is c×k with k = min(r, c).
pub fn svd(m: &RMat) -> (RVec, RMat, RMat) {
    let (r, c) = m.shape();
    if r >= c {
        jacobi_svd_tall(m)
    } else {
        let (s, u, v) = jacobi_svd_tall(&m.transpose());
        (s, v, u)
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &RMat) -> RVec {
    if m.nrows() == 0 || m.ncols() == 0 {
        return RVec::zeros(0);
    }
    svd(m).0
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub fn rank(m: &RMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    if s.is_empty() {
        return 0;
    }
    let cut = rel_tol * s[0].max(f64::MIN_POSITIVE);
    if s[0] <= f64::MIN_POSITIVE {
        return 0;
    }
    s.iter().filter(|&&x| x > cut).count()
}

/// Singular values (padded with zeros to length c) and a square orthogonal `V`.
fn full_svd(m: &RMat) -> (RVec, RMat) {
    let (r, c) = m.shape();
    let padded = if r < c {
        let mut p = RMat::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let (s, _, v) = jacobi_svd_tall(&padded);
    (s, v)
}

/// Orthonormal basis (columns) of the null space of `m`.
pub fn null_space(m: &RMat, rel_tol: f64) -> RMat {
    let c = m.ncols();
    if c == 0 {
        return RMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return RMat::identity(c, c);
    }
    let (s, v) = full_svd(m);
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * smax.max(f64::MIN_POSITIVE);
    null_columns(&s, &v, cut)
}

/// Null space with an absolute singular-value cutoff.
pub fn null_space_abs(m: &RMat, abs_tol: f64) -> RMat {
    let c = m.ncols();
    if c == 0 {
        return RMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return RMat::identity(c, c);
    }
    let (s, v) = full_svd(m);
    null_columns(&s, &v, abs_tol)
}

fn null_columns(s: &RVec, v: &RMat, cut: f64) -> RMat {
    let c = v.ncols();
    let kept: Vec<usize> = (0..c).filter(|&i| i >= s.len() || s[i] <= cut).collect();
    let mut out = RMat::zeros(c, kept.len());
    for (j, &i) in kept.iter().enumerate() {
        out.set_column(j, &v.column(i));
    }
    out
}

/// Orthonormal basis (columns) of the column space of `m`.
pub fn range_basis(m: &RMat, rel_tol: f64) -> RMat {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return RMat::zeros(r, 0);
    }
    let (s, u, _) = svd(m);
    let cut = rel_tol * s[0];
    let k = if s[0] <= f64::MIN_POSITIVE {
        0
    } else {
        s.iter().filter(|&&x| x > cut).count()
    };
    u.columns(0, k).into_owned()
}

/// Largest sine of the principal angles between the column spaces of `a`
/// and `b`. Returns 1 when the dimensions differ.
pub fn subspace_gap(a: &RMat, b: &RMat, rel_tol: f64) -> f64 {
    let qa = range_basis(a, rel_tol);
    let qb = range_basis(b, rel_tol);
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    if qa.ncols() == 0 {
        return 0.0;
    }
    let resid_b = &qb - &qa * (qa.transpose() * &qb);
    let resid_a = &qa - &qb * (qb.transpose() * &qa);
    spectral_norm(&resid_b).max(spectral_norm(&resid_a)).min(1.0)
}

/// Largest principal angle (radians) between two column spaces.
pub fn max_principal_angle(a: &RMat, b: &RMat, rel_tol: f64) -> f64 {
    subspace_gap(a, b, rel_tol).asin()
}

/// Largest sine of the angle between span(a) and its best match inside span(b):
/// zero iff span(a) ⊆ span(b).
pub fn containment_gap(a: &RMat, b: &RMat, rel_tol: f64) -> f64 {
    let qa = range_basis(a, rel_tol);
    let qb = range_basis(b, rel_tol);
    if qa.ncols() == 0 {
        return 0.0;
    }
    if qb.ncols() == 0 {
        return 1.0;
    }
    let resid = &qa - &qb * (qb.transpose() * &qa);
    spectral_norm(&resid).min(1.0)
}

/// Least-squares solution of `a x = b` (minimum norm).
pub fn lstsq(a: &RMat, b: &RVec) -> RVec {
    if a.ncols() == 0 {
        return RVec::zeros(0);
    }
    pseudo_inverse(a, 1e-13) * b
}

/// Moore–Penrose pseudo-inverse with relative cutoff.
pub fn pseudo_inverse(a: &RMat, rel_tol: f64) -> RMat {
    if a.nrows() == 0 || a.ncols() == 0 {
        return RMat::zeros(a.ncols(), a.nrows());
    }
    let (s, u, v) = svd(a);
    let cut = rel_tol * s[0].max(f64::MIN_POSITIVE);
    let inv = s.map(|x| if x > cut { 1.0 / x } else { 0.0 });
    v * RMat::from_diagonal(&inv) * u.transpose()
}

/// Lawson–Hanson non-negative least squares: minimise ‖a x − b‖ over x ≥ 0.
/// Returns the solution and the residual norm.
pub fn nnls(a: &RMat, b: &RVec) -> (RVec, f64) {
    let n = a.ncols();
    let mut x = RVec::zeros(n);
    if n == 0 {
        return (x, b.norm());
    }
    let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-12 * scale * (b.norm().max(1.0));
    let mut passive = vec![false; n];
    let max_outer = 3 * n + 30;
    for _ in 0..max_outer {
        let r = b - a * &x;
        let w = a.transpose() * &r;
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].partial_cmp(&w[j]).unwrap());
        let j = match candidate {
            Some(j) if w[j] > tol => j,
            _ => break,
        };
        passive[j] = true;
        for _ in 0..(3 * n + 30) {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let sub = a.select_columns(idx.iter());
            let z_sub = lstsq(&sub, b);
            let mut z = RVec::zeros(n);
            for (t, &k) in idx.iter().enumerate() {
                z[k] = z_sub[t];
            }
            if idx.iter().all(|&k| z[k] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = 1.0_f64;
            for &k in &idx {
                if z[k] <= 0.0 {
                    let denom = x[k] - z[k];
                    if denom > 0.0 {
                        alpha = alpha.min(x[k] / denom);
                    }
                }
            }
            x = &x + (&z - &x) * alpha;
            for &k in &idx {
                if x[k] <= 1e-15 * scale {
                    x[k] = 0.0;
                    passive[k] = false;
                }
            }
        }
    }
    let res = (b - a * &x).norm();
    (x, res)
}

/// Operator 2-norm.
pub fn spectral_norm(m: &RMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    singular_values(m)[0]
}

/// Operator 2-norm of a complex matrix.
pub fn spectral_norm_c(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    spectral_norm(&realify(m))
}

/// Real 2N×2N matrix of a complex-linear map under z ↔ (Re z, Im z).
pub fn realify(z: &CMat) -> RMat {
    let (r, c) = z.shape();
    let mut out = RMat::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let v = z[(i, j)];
            out[(i, j)] = v.re;
            out[(i, j + c)] = -v.im;
            out[(i + r, j)] = v.im;
            out[(i + r, j + c)] = v.re;
        }
    }
    out
}

/// Inverse of [`realify`] for a matrix commuting with the complex structure.
pub fn complexify(m: &RMat) -> CMat {
    let r = m.nrows() / 2;
    let c = m.ncols() / 2;
    CMat::from_fn(r, c, |i, j| C64::new(m[(i, j)], m[(i + r, j)]))
}

/// Realified vector (Re z; Im z).
pub fn realify_vec(z: &CVec) -> RVec {
    let n = z.len();
    RVec::from_fn(2 * n, |i, _| if i < n { z[i].re } else { z[i - n].im })
}

/// Complex vector from (Re; Im).
pub fn complexify_vec(v: &RVec) -> CVec {
    let n = v.len() / 2;
    CVec::from_fn(n, |i, _| C64::new(v[i], v[i + n]))
}

/// The complex structure Cx = [[0, −I], [I, 0]] on realified ℂ^N.
pub fn complex_structure(n: usize) -> RMat {
    let mut c = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        c[(i, i + n)] = -1.0;
        c[(i + n, i)] = 1.0;
    }
    c
}

/// Componentwise conjugation on realified ℂ^N.
pub fn conjugation(n: usize) -> RMat {
    let mut c = RMat::identity(2 * n, 2 * n);
    for i in n..2 * n {
        c[(i, i)] = -1.0;
    }
    c
}

const EXP_NORM_LIMIT: f64 = 600.0;

/// Matrix exponential (Padé with scaling and squaring) with an overflow guard.
pub fn expm(m: &RMat) -> Result<RMat> {
    let norm = m.iter().map(|v| v.abs()).fold(0.0, f64::max) * m.nrows() as f64;
    if !norm.is_finite() || norm > EXP_NORM_LIMIT {
        return Err(WedgeError::Numeric(format!(
            "matrix exponential argument too large (norm bound {norm:.3e})"
        )));
    }
    let e = m.exp();
    if e.iter().any(|v| !v.is_finite()) {
        return Err(WedgeError::Numeric("matrix exponential overflowed".into()));
    }
    Ok(e)
}

/// Matrix exponential of a complex matrix with the same guard.
pub fn expm_c(m: &CMat) -> Result<CMat> {
    let norm = m.iter().map(|v| v.norm()).fold(0.0, f64::max) * m.nrows() as f64;
    if !norm.is_finite() || norm > EXP_NORM_LIMIT {
        return Err(WedgeError::Numeric(format!(
            "matrix exponential argument too large (norm bound {norm:.3e})"
        )));
    }
    let e = m.exp();
    if e.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(WedgeError::Numeric("matrix exponential overflowed".into()));
    }
    Ok(e)
}

/// Apply a scalar function to a Hermitian matrix through its eigendecomposition.
pub fn hermitian_fn(h: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = CMat::from_diagonal(&eig.eigenvalues.map(&f));
    v * d * v.adjoint()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Max-abs entry.
pub fn max_abs(m: &RMat) -> f64 {
    m.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Serialize with every float written to 17 significant digits.
pub fn canonical_json<T: serde::Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    String::from_utf8(buf).expect("json is utf-8")
}

/// Pretty-printed variant of [`canonical_json`]; the float texts agree.
pub fn canonical_json_pretty<T: serde::Serialize>(value: &T) -> String {
    let compact = canonical_json(value);
    let v: serde_json::Value = serde_json::from_str(&compact).expect("round trip");
    let mut buf = Vec::new();
    let fmt = PrettyFixed {
        inner: serde_json::ser::PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    serde::Serialize::serialize(&v, &mut ser).expect("value serializes");
    String::from_utf8(buf).expect("json is utf-8")
}

fn write_fixed<W: ?Sized + std::io::Write>(writer: &mut W, value: f64) -> std::io::Result<()> {
    if value.is_finite() {
        write!(writer, "{value:.16e}")
    } else {
        writer.write_all(b"null")
    }
}

struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, v: f64) -> std::io::Result<()> {
        write_fixed(w, v)
    }
    fn write_f32<W: ?Sized + std::io::Write>(&mut self, w: &mut W, v: f32) -> std::io::Result<()> {
        write_fixed(w, v as f64)
    }
}

struct PrettyFixed<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for PrettyFixed<'_> {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, v: f64) -> std::io::Result<()> {
        write_fixed(w, v)
    }
    fn write_number_str<W: ?Sized + std::io::Write>(&mut self, w: &mut W, s: &str) -> std::io::Result<()> {
        match s.parse::<f64>() {
            Ok(v) if s.contains(['.', 'e', 'E']) => write_fixed(w, v),
            _ => w.write_all(s.as_bytes()),
        }
    }
    fn begin_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.inner.end_object_value(w)
    }
}
