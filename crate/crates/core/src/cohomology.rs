//! Cohomology dimensions of extended quotients and orbits.
//!
//! For a finite group acting on a compact torus by permuting coordinates,
//! `H^*(T^r / G) = (Lambda^* C^r)^G`, and the invariant dimensions come from
//! averaging `det(I + t P_g)` over the group. For a cycle of length `c` the
//! determinant factor is `1 - (-t)^c`, so the average is taken over cycle
//! types weighted by class sizes, never over individual elements.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bernstein::{
    enumerate_orbits_limited, enumerate_strata_limited, partitions, Component, Stratum,
    DEFAULT_STRATA_LIMIT,
};
use crate::error::{invalid, Error, Result};
use crate::parameters::OrbitDescriptor;

/// `sum_p dim H^p t^p`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PoincareRepr")]
pub struct PoincarePolynomial {
    coeffs: Vec<u64>,
}

#[derive(Deserialize)]
struct PoincareRepr {
    coeffs: Vec<u64>,
}

impl TryFrom<PoincareRepr> for PoincarePolynomial {
    type Error = Error;

    fn try_from(r: PoincareRepr) -> Result<Self> {
        PoincarePolynomial::new(r.coeffs)
    }
}

impl PoincarePolynomial {
    pub fn new(mut coeffs: Vec<u64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(invalid("Poincare polynomial of an empty space"));
        }
        Ok(PoincarePolynomial { coeffs })
    }

    /// `(1 + t)^k`, the cohomology of a `k`-torus.
    pub fn torus(k: usize) -> Self {
        let mut coeffs = vec![1u64];
        for _ in 0..k {
            let mut next = vec![0u64; coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c;
            }
            coeffs = next;
        }
        PoincarePolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn even_total(&self) -> u64 {
        self.coeffs.iter().step_by(2).sum()
    }

    pub fn odd_total(&self) -> u64 {
        self.coeffs.iter().skip(1).step_by(2).sum()
    }

    pub fn eval(&self, t: i64) -> i128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * t as i128 + c as i128)
    }

    pub fn product(&self, other: &PoincarePolynomial) -> PoincarePolynomial {
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PoincarePolynomial { coeffs }
    }
}

/// `prod_b S_{m_b}`, each factor permuting its own block of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationAction {
    blocks: Vec<usize>,
}

impl PermutationAction {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(invalid("permutation action needs positive block sizes"));
        }
        Ok(PermutationAction { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn for_stratum(s: &Stratum) -> Self {
        PermutationAction {
            blocks: s.quotient_shape(),
        }
    }
}

type IntPoly = Vec<BigInt>;

fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `1 - (-t)^c`.
fn cycle_factor(c: usize) -> IntPoly {
    let mut p = vec![BigInt::zero(); c + 1];
    p[0] = BigInt::one();
    p[c] = if c.is_multiple_of(2) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    p
}

/// Average of `det(I + t P_g)` over `S_m`, as exact integer coefficients.
fn symmetric_group_average(m: usize) -> Result<IntPoly> {
    let order = factorial(m);
    let mut sum: IntPoly = vec![BigInt::zero(); m + 1];
    for cycle_type in partitions(m) {
        // |class| = m! / prod_c (c^{k_c} k_c!)
        let centralizer = cycle_type
            .multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (c, k)| {
                acc * BigInt::from(c).pow(k as u32) * factorial(k)
            });
        let class_size = &order / centralizer;
        let det = cycle_type
            .parts()
            .iter()
            .fold(vec![BigInt::one()], |acc, &c| {
                poly_mul(&acc, &cycle_factor(c))
            });
        for (i, coeff) in det.into_iter().enumerate() {
            sum[i] += &class_size * coeff;
        }
    }
    sum.into_iter()
        .enumerate()
        .map(|(p, c)| {
            if (&c % &order).is_zero() {
                Ok(c / &order)
            } else {
                Err(Error::Arithmetic(format!(
                    "degree {p} average over S_{m} is {c}/{order}, not an integer"
                )))
            }
        })
        .collect()
}

pub fn invariant_exterior_dims(a: &PermutationAction) -> Result<PoincarePolynomial> {
    invariant_exterior_dims_limited(a, DEFAULT_STRATA_LIMIT)
}

/// Dimensions of `(Lambda^p C^r)^G` for the permutation action `a`.
pub fn invariant_exterior_dims_limited(
    a: &PermutationAction,
    limit: usize,
) -> Result<PoincarePolynomial> {
    if a.rank() > limit {
        return Err(Error::LimitExceeded {
            what: "torus rank",
            value: a.rank(),
            limit,
        });
    }
    let mut total: IntPoly = vec![BigInt::one()];
    for &m in &a.blocks {
        total = poly_mul(&total, &symmetric_group_average(m)?);
    }
    let coeffs = total
        .into_iter()
        .map(|c| {
            c.to_u64().ok_or_else(|| {
                Error::Arithmetic(format!("coefficient {c} is not a nonnegative u64"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PoincarePolynomial::new(coeffs)
}

pub fn stratum_poincare(s: &Stratum) -> Result<PoincarePolynomial> {
    invariant_exterior_dims(&PermutationAction::for_stratum(s))
}

/// Dimensions of the even and odd periodic cyclic homology of a component,
/// together with the orbit count `sum 2^{k - 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HpDims {
    pub hp0: u64,
    pub hp1: u64,
    pub lemma22: u64,
}

pub fn component_hp(c: &Component) -> Result<(u64, u64)> {
    component_hp_limited(c, DEFAULT_STRATA_LIMIT)
}

pub fn component_hp_limited(c: &Component, limit: usize) -> Result<(u64, u64)> {
    let mut hp0 = 0;
    let mut hp1 = 0;
    for s in enumerate_strata_limited(c, limit)? {
        let p = invariant_exterior_dims_limited(&PermutationAction::for_stratum(&s), limit)?;
        hp0 += p.even_total();
        hp1 += p.odd_total();
    }
    Ok((hp0, hp1))
}

pub fn lemma22_dimension(c: &Component) -> Result<u64> {
    lemma22_dimension_limited(c, DEFAULT_STRATA_LIMIT)
}

/// `sum over orbits of 2^{k(phi) - 1}`.
pub fn lemma22_dimension_limited(c: &Component, limit: usize) -> Result<u64> {
    Ok(enumerate_orbits_limited(c, limit)?
        .iter()
        .map(|o| 1u64 << (o.k() - 1))
        .sum())
}

pub fn hp_dims(c: &Component, limit: usize) -> Result<HpDims> {
    let (hp0, hp1) = component_hp_limited(c, limit)?;
    Ok(HpDims {
        hp0,
        hp1,
        lemma22: lemma22_dimension_limited(c, limit)?,
    })
}

/// The orbit is homotopic to `(C^x)^k`.
pub fn orbit_poincare(o: &OrbitDescriptor) -> PoincarePolynomial {
    PoincarePolynomial::torus(o.k())
}

/// Cohomology of the compact orbit `prod Sym^{l_i} T`.
pub fn tempered_orbit_poincare(o: &OrbitDescriptor) -> Result<PoincarePolynomial> {
    invariant_exterior_dims(&PermutationAction::new(o.multiplicities().collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::enumerate_strata;
    use itertools::Itertools;

    /// Independent oracle: for every element of the product group, the trace
    /// on `Lambda^p` is the signed count of `p`-subsets mapped onto themselves.
    fn brute_force_invariants(blocks: &[usize]) -> Vec<i64> {
        let rank: usize = blocks.iter().sum();
        let mut offsets = vec![0];
        for b in blocks {
            offsets.push(offsets.last().unwrap() + b);
        }
        let per_block: Vec<Vec<Vec<usize>>> = blocks
            .iter()
            .map(|&m| (0..m).permutations(m).collect())
            .collect();
        let mut sums = vec![0i64; rank + 1];
        let mut order = 0i64;
        for choice in per_block.iter().multi_cartesian_product() {
            let mut g = vec![0usize; rank];
            for (b, perm) in choice.iter().enumerate() {
                for (i, &j) in perm.iter().enumerate() {
                    g[offsets[b] + i] = offsets[b] + j;
                }
            }
            order += 1;
            for (p, sum) in sums.iter_mut().enumerate() {
                for subset in (0..rank).combinations(p) {
                    let image: Vec<usize> = subset.iter().map(|&i| g[i]).sorted().collect();
                    if image != subset {
                        continue;
                    }
                    // sign of g restricted to the subset, by counting inversions
                    let mapped: Vec<usize> = subset.iter().map(|&i| g[i]).collect();
                    let inversions = (0..p)
                        .flat_map(|a| (a + 1..p).map(move |b| (a, b)))
                        .filter(|&(a, b)| mapped[a] > mapped[b])
                        .count();
                    *sum += if inversions % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        let mut out: Vec<i64> = sums
            .into_iter()
            .map(|s| {
                assert_eq!(s % order, 0);
                s / order
            })
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    fn coeffs(blocks: &[usize]) -> Vec<u64> {
        invariant_exterior_dims(&PermutationAction::new(blocks.to_vec()).unwrap())
            .unwrap()
            .coeffs()
            .to_vec()
    }

    #[test]
    fn invariant_dims_examples() {
        assert_eq!(coeffs(&[1, 1]), vec![1, 2, 1]);
        assert_eq!(coeffs(&[2]), vec![1, 1]);
        assert_eq!(coeffs(&[3]), vec![1, 1]);
    }

    #[test]
    fn matches_element_enumeration() {
        for blocks in [
            vec![1],
            vec![2],
            vec![3],
            vec![4],
            vec![5],
            vec![2, 1],
            vec![2, 2],
            vec![3, 1, 1],
            vec![1, 1, 1, 1],
        ] {
            let expected: Vec<u64> = brute_force_invariants(&blocks)
                .into_iter()
                .map(|c| c as u64)
                .collect();
            assert_eq!(coeffs(&blocks), expected, "{blocks:?}");
        }
    }

    /// At t = 1, det(I + P_g) is 2^{#cycles} when every cycle is odd and 0 otherwise.
    #[test]
    fn value_at_one_matches_class_sum() {
        for m in 1..=12usize {
            let a = PermutationAction::new(vec![m]).unwrap();
            let p = invariant_exterior_dims(&a).unwrap();
            let mut num = BigInt::zero();
            for ct in partitions(m) {
                if ct.parts().iter().any(|c| c % 2 == 0) {
                    continue;
                }
                let centralizer = ct
                    .multiplicities()
                    .into_iter()
                    .fold(BigInt::one(), |acc, (c, k)| {
                        acc * BigInt::from(c).pow(k as u32) * factorial(k)
                    });
                num += factorial(m) / centralizer * BigInt::from(2).pow(ct.len() as u32);
            }
            assert_eq!(BigInt::from(p.eval(1)) * factorial(m), num, "m = {m}");
        }
    }

    #[test]
    fn stratum_poincare_examples() {
        let strata2 = enumerate_strata(&Component::from_exponents(&[2]).unwrap()).unwrap();
        assert_eq!(stratum_poincare(&strata2[0]).unwrap().coeffs(), &[1, 1]);
        let strata3 = enumerate_strata(&Component::from_exponents(&[3]).unwrap()).unwrap();
        assert_eq!(stratum_poincare(&strata3[1]).unwrap().coeffs(), &[1, 2, 1]);
        let strata1 = enumerate_strata(&Component::from_exponents(&[1]).unwrap()).unwrap();
        assert_eq!(stratum_poincare(&strata1[0]).unwrap().coeffs(), &[1, 1]);
    }

    #[test]
    fn component_hp_examples() {
        let c = |e: &[usize]| Component::from_exponents(e).unwrap();
        assert_eq!(component_hp(&c(&[1])).unwrap(), (1, 1));
        assert_eq!(component_hp(&c(&[2])).unwrap(), (2, 2));
        assert_eq!(component_hp(&c(&[3])).unwrap(), (4, 4));
        assert_eq!(lemma22_dimension(&c(&[2])).unwrap(), 2);
        assert_eq!(lemma22_dimension(&c(&[3])).unwrap(), 4);
        assert_eq!(lemma22_dimension(&c(&[4])).unwrap(), 7);
    }

    #[test]
    fn hp_parities_agree_with_orbit_count() {
        for n in 1..=10 {
            let c = Component::from_exponents(&[n]).unwrap();
            let (hp0, hp1) = component_hp(&c).unwrap();
            let l = lemma22_dimension(&c).unwrap();
            assert_eq!((hp0, hp1), (l, l), "exponent {n}");
        }
    }

    #[test]
    fn orbit_poincare_examples() {
        assert_eq!(PoincarePolynomial::torus(1).coeffs(), &[1, 1]);
        assert_eq!(PoincarePolynomial::torus(2).coeffs(), &[1, 2, 1]);
        assert_eq!(PoincarePolynomial::torus(3).coeffs(), &[1, 3, 3, 1]);
    }

    #[test]
    fn tempered_orbit_examples() {
        use crate::parameters::{InertialClass, Spin, WeilLabel};
        let a = InertialClass::new(WeilLabel::trivial(), Spin::default());
        let b = InertialClass::new(WeilLabel::new("b", 1, true).unwrap(), Spin::default());
        let o = |e: Vec<(InertialClass, usize)>| OrbitDescriptor::from_multiplicities(e).unwrap();
        assert_eq!(
            tempered_orbit_poincare(&o(vec![(a.clone(), 1)]))
                .unwrap()
                .coeffs(),
            &[1, 1]
        );
        assert_eq!(
            tempered_orbit_poincare(&o(vec![(a.clone(), 2)]))
                .unwrap()
                .coeffs(),
            &[1, 1]
        );
        assert_eq!(
            tempered_orbit_poincare(&o(vec![(a, 1), (b, 1)]))
                .unwrap()
                .coeffs(),
            &[1, 2, 1]
        );
    }

    #[test]
    fn rank_limit() {
        let a = PermutationAction::new(vec![21]).unwrap();
        assert!(matches!(
            invariant_exterior_dims(&a),
            Err(Error::LimitExceeded { .. })
        ));
        let a = PermutationAction::new(vec![20]).unwrap();
        assert_eq!(invariant_exterior_dims(&a).unwrap().coeffs(), &[1, 1]);
    }

    #[test]
    fn poincare_validation() {
        assert!(PoincarePolynomial::new(vec![]).is_err());
        assert!(PoincarePolynomial::new(vec![0, 0]).is_err());
        assert_eq!(
            PoincarePolynomial::new(vec![1, 2, 0]).unwrap().coeffs(),
            &[1, 2]
        );
        assert!(PermutationAction::new(vec![2, 0]).is_err());
        assert_eq!(
            serde_json::to_string(&PoincarePolynomial::torus(2)).unwrap(),
            r#"{"coeffs":[1,2,1]}"#
        );
    }
}
