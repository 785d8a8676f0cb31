//! The q-projection from the extended quotient to the ordinary quotient.
//!
//! On a stratum with cycle type `(alpha_1, ..., alpha_r)` a coordinate `z`
//! attached to an `alpha`-cycle is sent to the q-string
//! `{q^{(alpha-1)/2} z, ..., q^{(1-alpha)/2} z}`; the image point is the
//! union of these strings. Blocks of a component are handled independently.
//!
//! Fibers are computed exactly by decomposing each block's multiset into
//! q-strings. The smallest remaining element (in `(q_exp, turn)` order) is
//! necessarily the bottom of the string that covers it, which fixes the
//! string's center once its length is chosen.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bernstein::{Component, CycleType, Partition, Stratum};
use crate::error::{invalid, Error, Result};
use crate::scalars::{QScalar, Rational};

/// Default bound on `d(Omega)` for fiber enumeration.
pub const DEFAULT_FIBER_LIMIT: usize = 12;

/// A point of one stratum `D^gamma / Z_gamma`.
///
/// Coordinates follow the cycle type (blocks in order, parts weakly
/// decreasing); coordinates on cycles of equal length within a block are
/// sorted, which identifies points related by the centralizer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "StratumPointRepr")]
pub struct StratumPoint {
    stratum: Stratum,
    coords: Vec<QScalar>,
}

#[derive(Deserialize)]
struct StratumPointRepr {
    stratum: Option<Stratum>,
    cycle_type: Option<CycleType>,
    coords: Vec<QScalar>,
}

impl TryFrom<StratumPointRepr> for StratumPoint {
    type Error = Error;

    fn try_from(r: StratumPointRepr) -> Result<Self> {
        let stratum = match (r.stratum, r.cycle_type) {
            (Some(s), _) => s,
            (None, Some(ct)) => Stratum::from_cycle_type(CycleType::new(ct.parts_per_block)?),
            (None, None) => return Err(invalid("stratum point needs 'stratum' or 'cycle_type'")),
        };
        StratumPoint::new(stratum, r.coords)
    }
}

impl StratumPoint {
    pub fn new(stratum: Stratum, mut coords: Vec<QScalar>) -> Result<Self> {
        if coords.len() != stratum.torus_rank() {
            return Err(invalid(format!(
                "stratum has torus rank {} but {} coordinates were given",
                stratum.torus_rank(),
                coords.len()
            )));
        }
        let mut start = 0;
        for f in stratum.residual_action() {
            coords[start..start + f.multiplicity].sort();
            start += f.multiplicity;
        }
        Ok(StratumPoint { stratum, coords })
    }

    pub fn from_cycle_type(parts_per_block: Vec<Vec<usize>>, coords: Vec<QScalar>) -> Result<Self> {
        let ct = CycleType::new(
            parts_per_block
                .into_iter()
                .map(Partition::new)
                .collect::<Result<_>>()?,
        )?;
        StratumPoint::new(Stratum::from_cycle_type(ct), coords)
    }

    pub fn stratum(&self) -> &Stratum {
        &self.stratum
    }

    pub fn coords(&self) -> &[QScalar] {
        &self.coords
    }

    /// `(block, part, coordinate)` for every cycle, in canonical order.
    pub fn cycles(&self) -> impl Iterator<Item = (usize, usize, QScalar)> + '_ {
        self.stratum
            .cycle_type()
            .parts_per_block
            .iter()
            .enumerate()
            .flat_map(|(b, p)| p.parts().iter().map(move |&a| (b, a)))
            .zip(&self.coords)
            .map(|((b, a), &z)| (b, a, z))
    }

    pub fn map_coords(&self, f: impl FnMut(QScalar) -> QScalar) -> StratumPoint {
        StratumPoint::new(
            self.stratum.clone(),
            self.coords.iter().copied().map(f).collect(),
        )
        .expect("coordinate count is unchanged")
    }
}

/// A point of the ordinary quotient: one sorted multiset per block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "SymPointRepr")]
pub struct SymPoint {
    blocks: Vec<Vec<QScalar>>,
}

#[derive(Deserialize)]
struct SymPointRepr {
    blocks: Vec<Vec<QScalar>>,
}

impl From<SymPointRepr> for SymPoint {
    fn from(r: SymPointRepr) -> Self {
        SymPoint::new(r.blocks)
    }
}

impl SymPoint {
    pub fn new(mut blocks: Vec<Vec<QScalar>>) -> Self {
        for b in &mut blocks {
            b.sort();
        }
        SymPoint { blocks }
    }

    pub fn blocks(&self) -> &[Vec<QScalar>] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Parses `{a, b, c}` with blocks separated by `;`, e.g. `{q^-1,1,q}` or
    /// `{1,q};{e(1/2)}`. Scalars use the compact notation of [`QScalar`].
    pub fn parse_compact(s: &str) -> Result<Self> {
        let blocks = s
            .split(';')
            .map(|block| {
                let inner = block
                    .trim()
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| {
                        invalid(format!("expected '{{...}}', got '{}'", block.trim()))
                    })?;
                inner
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<QScalar>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SymPoint::new(blocks))
    }
}

/// The multiset `{ z q^{step((alpha-1)/2 - i)} : i = 0..alpha }`, sorted.
pub fn q_string_with_step(alpha: usize, z: QScalar, step: Rational) -> Vec<QScalar> {
    let half = Rational::new(alpha as i64 - 1, 2);
    let mut out: Vec<QScalar> = (0..alpha)
        .map(|i| z.q_shift(step * (half - Rational::from_integer(i as i64))))
        .collect();
    out.sort();
    out
}

/// The q-string of length `alpha` centered at `z`.
pub fn q_string(alpha: usize, z: QScalar) -> Result<Vec<QScalar>> {
    if alpha == 0 {
        return Err(invalid("q-string length must be at least 1"));
    }
    Ok(q_string_with_step(alpha, z, Rational::one()))
}

/// Configuration of the projection. Block `i` uses `q_i = q^{q_powers[i]}`;
/// the default uses the global `q` for every block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QProjection {
    q_powers: Vec<Rational>,
}

impl QProjection {
    pub fn uniform() -> Self {
        QProjection::default()
    }

    /// Per-block residue-field sizes, each given as a positive power of `q`.
    pub fn per_block(q_powers: Vec<Rational>) -> Result<Self> {
        if q_powers.iter().any(|p| *p <= Rational::zero()) {
            return Err(invalid("per-block q powers must be positive"));
        }
        Ok(QProjection { q_powers })
    }

    fn step(&self, block: usize) -> Rational {
        self.q_powers
            .get(block)
            .copied()
            .unwrap_or_else(Rational::one)
    }

    pub fn project(&self, p: &StratumPoint) -> SymPoint {
        let n_blocks = p.stratum.cycle_type().parts_per_block.len();
        let mut blocks = vec![Vec::new(); n_blocks];
        for (b, alpha, z) in p.cycles() {
            blocks[b].extend(q_string_with_step(alpha, z, self.step(b)));
        }
        SymPoint::new(blocks)
    }

    pub fn fiber(&self, y: &SymPoint, c: &Component, limit: usize) -> Result<Vec<StratumPoint>> {
        c.check_limit("component dimension", limit)?;
        if y.sizes() != c.exponents() {
            return Err(invalid(format!(
                "point has block sizes {:?} but the component has exponents {:?}",
                y.sizes(),
                c.exponents()
            )));
        }
        let per_block: Vec<Vec<Decomposition>> = y
            .blocks
            .iter()
            .enumerate()
            .map(|(b, multiset)| {
                let mut memo = HashMap::new();
                decompose(multiset, self.step(b), &mut memo)
                    .into_iter()
                    .collect()
            })
            .collect();
        if per_block.iter().any(Vec::is_empty) {
            return Ok(Vec::new());
        }
        let mut out: Vec<StratumPoint> = per_block
            .iter()
            .multi_cartesian_product()
            .map(|choice| {
                let parts = choice
                    .iter()
                    .map(|d| Partition::new(d.iter().map(|&(a, _)| a).collect()))
                    .collect::<Result<Vec<_>>>()?;
                let coords = choice
                    .iter()
                    .flat_map(|d| d.iter().map(|&(_, z)| z))
                    .collect();
                StratumPoint::new(Stratum::from_cycle_type(CycleType::new(parts)?), coords)
            })
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// A decomposition of one block into q-strings: `(length, center)` pairs
/// sorted by decreasing length, then increasing center.
type Decomposition = Vec<(usize, QScalar)>;

fn canonical_key(&(alpha, z): &(usize, QScalar)) -> (std::cmp::Reverse<usize>, QScalar) {
    (std::cmp::Reverse(alpha), z)
}

/// Removes one copy of each element of `sub` from the sorted multiset `set`.
fn remove_submultiset(set: &[QScalar], sub: &[QScalar]) -> Option<Vec<QScalar>> {
    let mut rest = set.to_vec();
    for x in sub {
        let pos = rest.binary_search(x).ok()?;
        rest.remove(pos);
    }
    Some(rest)
}

fn decompose(
    multiset: &[QScalar],
    step: Rational,
    memo: &mut HashMap<Vec<QScalar>, BTreeSet<Decomposition>>,
) -> BTreeSet<Decomposition> {
    if multiset.is_empty() {
        return BTreeSet::from([Vec::new()]);
    }
    if let Some(hit) = memo.get(multiset) {
        return hit.clone();
    }
    let bottom = multiset[0];
    let mut found = BTreeSet::new();
    for alpha in 1..=multiset.len() {
        let center = bottom.q_shift(step * Rational::new(alpha as i64 - 1, 2));
        let string = q_string_with_step(alpha, center, step);
        let Some(rest) = remove_submultiset(multiset, &string) else {
            // a longer string contains this one, so it cannot fit either
            break;
        };
        for mut d in decompose(&rest, step, memo) {
            d.push((alpha, center));
            d.sort_by_key(canonical_key);
            found.insert(d);
        }
    }
    memo.insert(multiset.to_vec(), found.clone());
    found
}

pub fn project(p: &StratumPoint) -> SymPoint {
    QProjection::uniform().project(p)
}

/// Every stratum point of `c` projecting to `y`, in canonical order. Empty
/// when `y` is outside the image.
pub fn fiber(y: &SymPoint, c: &Component) -> Result<Vec<StratumPoint>> {
    QProjection::uniform().fiber(y, c, DEFAULT_FIBER_LIMIT)
}

pub fn fiber_limited(y: &SymPoint, c: &Component, limit: usize) -> Result<Vec<StratumPoint>> {
    QProjection::uniform().fiber(y, c, limit)
}

/// Whether `p` appears in the fiber over its own projection.
pub fn verify_section(p: &StratumPoint, c: &Component) -> Result<bool> {
    if !p.stratum.cycle_type().matches(c) {
        return Err(invalid("point's cycle type does not match the component"));
    }
    Ok(fiber(&project(p), c)?.contains(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64)) -> QScalar {
        QScalar::q_power(Rational::new(a.0, a.1))
    }

    fn sorted(mut v: Vec<QScalar>) -> Vec<QScalar> {
        v.sort();
        v
    }

    #[test]
    fn q_string_examples() {
        assert_eq!(
            q_string(2, QScalar::one()).unwrap(),
            sorted(vec![q((1, 2)), q((-1, 2))])
        );
        assert_eq!(
            q_string(3, QScalar::one()).unwrap(),
            sorted(vec![q((1, 1)), QScalar::one(), q((-1, 1))])
        );
        let z = QScalar::new(Rational::new(2, 7), Rational::new(1, 3));
        assert_eq!(q_string(1, z).unwrap(), vec![z]);
        assert!(q_string(0, z).is_err());
    }

    #[test]
    fn project_examples() {
        let z1 = QScalar::new(Rational::new(1, 3), Rational::new(1, 5));
        let z2 = QScalar::unit(Rational::new(2, 3));
        let p = StratumPoint::from_cycle_type(vec![vec![1, 1]], vec![z1, z2]).unwrap();
        assert_eq!(project(&p), SymPoint::new(vec![vec![z1, z2]]));

        let p = StratumPoint::from_cycle_type(vec![vec![2, 1]], vec![QScalar::one(), z1]).unwrap();
        assert_eq!(
            project(&p),
            SymPoint::new(vec![vec![q((1, 2)), q((-1, 2)), z1]])
        );

        let p = StratumPoint::from_cycle_type(vec![vec![3]], vec![QScalar::one()]).unwrap();
        assert_eq!(
            project(&p),
            SymPoint::new(vec![vec![q((1, 1)), QScalar::one(), q((-1, 1))]])
        );
    }

    #[test]
    fn gl3_collision() {
        let c = Component::from_exponents(&[3]).unwrap();
        let y = SymPoint::parse_compact("{q^-1,1,q}").unwrap();
        let f = fiber(&y, &c).unwrap();
        assert_eq!(f.len(), 4);
        let cts: Vec<Vec<usize>> = f
            .iter()
            .map(|p| p.stratum().cycle_type().parts_per_block[0].parts().to_vec())
            .collect();
        assert_eq!(cts, vec![vec![1, 1, 1], vec![2, 1], vec![2, 1], vec![3]]);
        // the two (2,1) points: (w, z) = (q^{1/2}, q^{-1}) and (q^{-1/2}, q)
        assert_eq!(f[1].coords(), &[q((-1, 2)), q((1, 1))]);
        assert_eq!(f[2].coords(), &[q((1, 2)), q((-1, 1))]);
    }

    #[test]
    fn generic_point_has_singleton_fiber() {
        let c = Component::from_exponents(&[3]).unwrap();
        let y = SymPoint::parse_compact("{1, q^1/3, e(1/2)}").unwrap();
        let f = fiber(&y, &c).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].stratum().torus_rank(), 3);
    }

    #[test]
    fn gl2_fiber() {
        let c = Component::from_exponents(&[2]).unwrap();
        let y = SymPoint::parse_compact("{q^1/2, q^-1/2}").unwrap();
        let f = fiber(&y, &c).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].stratum().torus_rank(), 2);
        assert_eq!(f[1].coords(), &[QScalar::one()]);
    }

    #[test]
    fn outside_image_and_bad_sizes() {
        let c = Component::from_exponents(&[2]).unwrap();
        assert!(fiber(&SymPoint::parse_compact("{1}").unwrap(), &c).is_err());
        let big = Component::from_exponents(&[13]).unwrap();
        let y = SymPoint::new(vec![vec![QScalar::one(); 13]]);
        assert!(matches!(fiber(&y, &big), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn repeated_entries() {
        let c = Component::from_exponents(&[4]).unwrap();
        // {1,1,q,q}: strings {1},{1},{q},{q} / {1,q},{1},{q} / {1,q},{1,q}
        let y = SymPoint::parse_compact("{1,1,q,q}").unwrap();
        let f = fiber(&y, &c).unwrap();
        assert_eq!(f.len(), 3);
        for p in &f {
            assert_eq!(project(p), y);
        }
    }

    #[test]
    fn several_blocks() {
        let c = Component::from_exponents(&[2, 1]).unwrap();
        let y = SymPoint::parse_compact("{q^1/2,q^-1/2};{q}").unwrap();
        let f = fiber(&y, &c).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f
            .iter()
            .all(|p| p.stratum().cycle_type().parts_per_block[1].parts() == [1]));
    }

    #[test]
    fn per_block_q_powers() {
        let proj = QProjection::per_block(vec![Rational::from_integer(2)]).unwrap();
        let p = StratumPoint::from_cycle_type(vec![vec![2]], vec![QScalar::one()]).unwrap();
        let y = proj.project(&p);
        assert_eq!(y, SymPoint::new(vec![vec![q((1, 1)), q((-1, 1))]]));
        let c = Component::from_exponents(&[2]).unwrap();
        assert_eq!(proj.fiber(&y, &c, DEFAULT_FIBER_LIMIT).unwrap().len(), 2);
        // with the global q the same point is not a 2-string
        assert_eq!(fiber(&y, &c).unwrap().len(), 1);
        assert!(QProjection::per_block(vec![Rational::zero()]).is_err());
    }

    #[test]
    fn verify_section_examples() {
        let c = Component::from_exponents(&[3]).unwrap();
        let z = |a, t| QScalar::new(Rational::new(a, 4), Rational::new(t, 6));
        let p =
            StratumPoint::from_cycle_type(vec![vec![1, 1, 1]], vec![z(1, 1), z(-3, 0), z(5, 5)])
                .unwrap();
        assert!(verify_section(&p, &c).unwrap());
        let p = StratumPoint::from_cycle_type(vec![vec![3]], vec![QScalar::one()]).unwrap();
        assert!(verify_section(&p, &c).unwrap());
        let wrong = StratumPoint::from_cycle_type(vec![vec![2]], vec![QScalar::one()]).unwrap();
        assert!(verify_section(&wrong, &c).is_err());
    }

    #[test]
    fn canonical_coordinates() {
        let a = q((1, 1));
        let b = q((-1, 1));
        let p1 = StratumPoint::from_cycle_type(vec![vec![1, 1]], vec![a, b]).unwrap();
        let p2 = StratumPoint::from_cycle_type(vec![vec![1, 1]], vec![b, a]).unwrap();
        assert_eq!(p1, p2);
        let p3 = StratumPoint::from_cycle_type(vec![vec![2, 1]], vec![a, b]).unwrap();
        let p4 = StratumPoint::from_cycle_type(vec![vec![2, 1]], vec![b, a]).unwrap();
        assert_ne!(p3, p4);
        assert!(StratumPoint::from_cycle_type(vec![vec![2, 1]], vec![a]).is_err());
    }

    #[test]
    fn json_forms() {
        let p: StratumPoint =
            serde_json::from_str(r#"{"cycle_type":[[2,1]],"coords":["1","q^-1"]}"#).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: StratumPoint = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let y: SymPoint =
            serde_json::from_str(r#"{"blocks":[["q",{"q_exp":"-1/1","turn":"0/1"},"1"]]}"#)
                .unwrap();
        assert_eq!(y, SymPoint::parse_compact("{q^-1,1,q}").unwrap());
    }
}
