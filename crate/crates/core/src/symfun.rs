//! Elementary-symmetric coordinates on `Sym^n C^x`.
//!
//! A multiset `{x_1, ..., x_n}` of nonzero complex numbers corresponds to
//! `(sigma_1, ..., sigma_n)` with `sigma_n != 0`, i.e. a point of
//! `A^{n-1} x (A - {0})`. The inverse map recovers the roots of
//! `x^n - sigma_1 x^{n-1} + ... + (-1)^n sigma_n` by Aberth-Ehrlich iteration
//! followed by Newton polishing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_ABERTH_ITERATIONS: usize = 500;

/// JSON form `{"re": .., "im": ..}` of a complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexRecord {
    fn from(z: Complex64) -> Self {
        ComplexRecord { re: z.re, im: z.im }
    }
}

impl From<ComplexRecord> for Complex64 {
    fn from(r: ComplexRecord) -> Self {
        Complex64::new(r.re, r.im)
    }
}

/// Serde adapter for `Vec<Complex64>` as a list of [`ComplexRecord`]s.
pub mod complex_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&z| ComplexRecord::from(z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<ComplexRecord>::deserialize(d)?
            .into_iter()
            .map(Complex64::from)
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymCoordsRepr")]
pub struct SymCoords {
    #[serde(with = "complex_list")]
    sigma: Vec<Complex64>,
}

#[derive(Deserialize)]
struct SymCoordsRepr {
    #[serde(with = "complex_list")]
    sigma: Vec<Complex64>,
}

impl TryFrom<SymCoordsRepr> for SymCoords {
    type Error = Error;

    fn try_from(r: SymCoordsRepr) -> Result<Self> {
        SymCoords::new(r.sigma)
    }
}

impl SymCoords {
    pub fn new(sigma: Vec<Complex64>) -> Result<Self> {
        match sigma.last() {
            None => Err(invalid("symmetric coordinates need n >= 1")),
            Some(s) if *s == Complex64::new(0.0, 0.0) => {
                Err(invalid("sigma_n must be nonzero for a point of Sym^n C^x"))
            }
            Some(s) if !s.is_finite() => Err(invalid("symmetric coordinates must be finite")),
            Some(_) => Ok(SymCoords { sigma }),
        }
    }

    pub fn sigma(&self) -> &[Complex64] {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Monic coefficients, highest degree first: `[1, -s1, s2, -s3, ...]`.
    fn monic_coefficients(&self) -> Vec<Complex64> {
        std::iter::once(Complex64::new(1.0, 0.0))
            .chain(
                self.sigma
                    .iter()
                    .enumerate()
                    .map(|(i, s)| if i % 2 == 0 { -s } else { *s }),
            )
            .collect()
    }
}

/// Elementary symmetric functions of the points. Inputs are sorted first,
/// so the output is bitwise independent of their order.
pub fn to_sym_coords(points: &[Complex64]) -> Result<SymCoords> {
    if points.is_empty() {
        return Err(invalid("need at least one point"));
    }
    if points
        .iter()
        .any(|z| *z == Complex64::new(0.0, 0.0) || !z.is_finite())
    {
        return Err(invalid("points must be finite and nonzero"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    // e[k] = sigma_k of the points processed so far
    let mut e = vec![Complex64::new(0.0, 0.0); sorted.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (i, x) in sorted.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] = e[k] + x * e[k - 1];
        }
    }
    SymCoords::new(e[1..].to_vec())
}

/// Horner evaluation of `p` and `p'` at `z`.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = coeffs[0];
    let mut dp = Complex64::new(0.0, 0.0);
    for c in &coeffs[1..] {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// The `n` roots of the polynomial with the given symmetric coordinates.
pub fn from_sym_coords(s: &SymCoords) -> Result<Vec<Complex64>> {
    let coeffs = s.monic_coefficients();
    let n = s.n();
    if n == 1 {
        return Ok(vec![s.sigma[0]]);
    }

    // initial guesses on a circle of radius |sigma_n|^{1/n}, off the real axis
    let radius = s.sigma[n - 1].norm().powf(1.0 / n as f64);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    // a root is frozen once its correction falls below a few ulps
    let mut done = vec![false; n];
    let mut converged = false;
    for _ in 0..MAX_ABERTH_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let z = roots[i];
            let (p, dp) = eval_with_derivative(&coeffs, z);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z - roots[j]).inv())
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.is_finite() {
                continue;
            }
            roots[i] = z - step;
            if step.norm() <= 1e-14 * roots[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_ABERTH_ITERATIONS));
    }

    for z in &mut roots {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&coeffs, *z);
            let step = p / dp;
            if !step.is_finite() || step.norm() == 0.0 {
                break;
            }
            *z -= step;
        }
    }
    if roots.iter().any(|z| !z.is_finite() || z.norm() == 0.0) {
        return Err(Error::NoConvergence(MAX_ABERTH_ITERATIONS));
    }
    Ok(roots)
}

/// Optimal assignment between two equal-size multisets minimizing the total
/// absolute difference (exact DP over subsets; intended for small `n`).
/// Returns `perm` with `a[i]` matched to `b[perm[i]]`.
pub fn optimal_matching(a: &[Complex64], b: &[Complex64]) -> Result<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return Err(invalid("multisets have different sizes"));
    }
    if n > 16 {
        return Err(Error::LimitExceeded {
            what: "multiset size for matching",
            value: n,
            limit: 16,
        });
    }
    let full = 1usize << n;
    let mut cost = vec![f64::INFINITY; full];
    let mut choice = vec![usize::MAX; full];
    cost[0] = 0.0;
    for mask in 0..full {
        let i = mask.count_ones() as usize;
        if i >= n || !cost[mask].is_finite() {
            continue;
        }
        for j in (0..n).filter(|j| mask & (1 << j) == 0) {
            let next = mask | (1 << j);
            let c = cost[mask] + (a[i] - b[j]).norm();
            if c < cost[next] {
                cost[next] = c;
                choice[next] = j;
            }
        }
    }
    let mut perm = vec![0; n];
    let mut mask = full - 1;
    for i in (0..n).rev() {
        let j = choice[mask];
        perm[i] = j;
        mask &= !(1 << j);
    }
    Ok(perm)
}

/// Largest relative error `|a_i - b_j| / |b_j|` over an optimal matching.
pub fn multiset_relative_error(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    let perm = optimal_matching(a, b)?;
    Ok(perm
        .iter()
        .enumerate()
        .map(|(i, &j)| (a[i] - b[j]).norm() / b[j].norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn forward_examples() {
        assert_eq!(
            to_sym_coords(&[c(2.0, 0.0), c(3.0, 0.0)]).unwrap().sigma(),
            &[c(5.0, 0.0), c(6.0, 0.0)]
        );
        assert_eq!(
            to_sym_coords(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap().sigma(),
            &[c(0.0, 0.0), c(-1.0, 0.0)]
        );
        assert_eq!(
            to_sym_coords(&[c(1.0, 0.0); 3]).unwrap().sigma(),
            &[c(3.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]
        );
    }

    #[test]
    fn forward_rejects_zero() {
        assert!(to_sym_coords(&[c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(to_sym_coords(&[]).is_err());
        assert!(SymCoords::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn inverse_examples() {
        let roots =
            from_sym_coords(&SymCoords::new(vec![c(5.0, 0.0), c(6.0, 0.0)]).unwrap()).unwrap();
        assert!(multiset_relative_error(&roots, &[c(2.0, 0.0), c(3.0, 0.0)]).unwrap() < 1e-12);
        let roots =
            from_sym_coords(&SymCoords::new(vec![c(0.0, 0.0), c(-1.0, 0.0)]).unwrap()).unwrap();
        assert!(multiset_relative_error(&roots, &[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap() < 1e-12);
        let roots = from_sym_coords(&SymCoords::new(vec![c(0.5, -2.0)]).unwrap()).unwrap();
        assert_eq!(roots, vec![c(0.5, -2.0)]);
    }

    #[test]
    fn permutation_invariance_is_bitwise() {
        let pts = [c(0.3, -1.2), c(2.5, 0.7), c(-0.01, 0.02), c(40.0, -3.0)];
        let a = to_sym_coords(&pts).unwrap();
        let mut rev = pts.to_vec();
        rev.reverse();
        assert_eq!(to_sym_coords(&rev).unwrap(), a);
        let prod: Complex64 = pts.iter().product();
        assert!((a.sigma()[3] - prod).norm() <= 1e-12 * prod.norm());
    }

    #[test]
    fn matching_finds_best_assignment() {
        let a = [c(0.0, 0.0), c(1.0, 0.0), c(1.1, 0.0)];
        let b = [c(1.09, 0.0), c(0.01, 0.0), c(1.0, 0.0)];
        assert_eq!(optimal_matching(&a, &b).unwrap(), vec![1, 2, 0]);
        assert!(optimal_matching(&a, &b[..2]).is_err());
    }
}
