//! Bernstein components, the strata of their extended quotients, and the
//! orbits of L-parameters lying over them.
//!
//! A component with exponents `e_1, ..., e_r` has Weyl group
//! `S_{e_1} x ... x S_{e_r}` acting on the torus `(C^x)^{e_1 + ... + e_r}`.
//! Conjugacy classes are multipartitions `(lambda_1 |- e_1, ..., lambda_r |- e_r)`.
//! For a class `gamma`, the fixed set `D^gamma` has one coordinate per cycle;
//! rotations inside a cycle act trivially on it, so the centralizer acts
//! through the symmetric groups permuting cycles of equal length within a block.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::parameters::{InertialClass, OrbitDescriptor, Spin, WeilLabel};

/// Default bound on `d(Omega)` for strata, orbits and cohomology.
pub const DEFAULT_STRATA_LIMIT: usize = 20;

/// An integer partition, stored weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Accepts the parts in any order; zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(invalid("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        self.0
            .iter()
            .chunk_by(|&&p| p)
            .into_iter()
            .map(|(p, run)| (p, run.count()))
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// All partitions of `n`, in ascending lexicographic order of their
/// (weakly decreasing) part lists. `partitions(3)` is `[1,1,1], [2,1], [3]`.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in 1..=max_part.min(remaining) {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    /// Opaque supercuspidal identifier.
    pub label: String,
    pub exponent: usize,
    /// Dimension of the Weil representation behind the label.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub rho_dim: u32,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub unitary_det: bool,
}

fn one() -> u32 {
    1
}
fn is_one(v: &u32) -> bool {
    *v == 1
}
fn yes() -> bool {
    true
}
fn is_true(v: &bool) -> bool {
    *v
}

impl Block {
    pub fn new(label: impl Into<String>, exponent: usize) -> Self {
        Block {
            label: label.into(),
            exponent,
            rho_dim: 1,
            unitary_det: true,
        }
    }

    pub fn weil_label(&self) -> WeilLabel {
        WeilLabel {
            id: self.label.clone(),
            dim: self.rho_dim,
            unitary_det: self.unitary_det,
        }
    }
}

/// A Bernstein component described by its exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ComponentRepr")]
pub struct Component {
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
struct ComponentRepr {
    blocks: Vec<Block>,
}

impl TryFrom<ComponentRepr> for Component {
    type Error = Error;

    fn try_from(r: ComponentRepr) -> Result<Self> {
        Component::new(r.blocks)
    }
}

impl Component {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(invalid("a component needs at least one block"));
        }
        let mut labels = BTreeSet::new();
        for b in &blocks {
            if b.label.is_empty() {
                return Err(invalid("block labels must be nonempty"));
            }
            if b.exponent == 0 {
                return Err(invalid(format!("block '{}' has exponent 0", b.label)));
            }
            if b.rho_dim == 0 {
                return Err(invalid(format!("block '{}' has rho_dim 0", b.label)));
            }
            if !labels.insert(b.label.as_str()) {
                return Err(invalid(format!("duplicate block label '{}'", b.label)));
            }
        }
        Ok(Component { blocks })
    }

    /// Component with blocks labelled `b0, b1, ...` and the given exponents.
    pub fn from_exponents(exponents: &[usize]) -> Result<Self> {
        Component::new(
            exponents
                .iter()
                .enumerate()
                .map(|(i, &e)| Block::new(format!("b{i}"), e))
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn exponents(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.exponent).collect()
    }

    /// `d(Omega) = e_1 + ... + e_r`, the complex dimension.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.exponent).sum()
    }

    pub(crate) fn check_limit(&self, what: &'static str, limit: usize) -> Result<()> {
        let d = self.dimension();
        if d > limit {
            return Err(Error::LimitExceeded {
                what,
                value: d,
                limit,
            });
        }
        Ok(())
    }

    /// All multipartitions (conjugacy classes of the Weyl group) in
    /// lexicographic order, first block most significant.
    pub fn cycle_types(&self) -> Vec<CycleType> {
        self.blocks
            .iter()
            .map(|b| partitions(b.exponent))
            .multi_cartesian_product()
            .map(|parts_per_block| CycleType { parts_per_block })
            .collect()
    }
}

/// A conjugacy class of `S_{e_1} x ... x S_{e_r}`: one partition per block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType {
    pub parts_per_block: Vec<Partition>,
}

impl CycleType {
    pub fn new(parts_per_block: Vec<Partition>) -> Result<Self> {
        if parts_per_block.is_empty() || parts_per_block.iter().any(Partition::is_empty) {
            return Err(invalid("a cycle type needs a nonempty partition per block"));
        }
        Ok(CycleType { parts_per_block })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts_per_block.iter().map(Partition::size).collect()
    }

    pub fn matches(&self, c: &Component) -> bool {
        self.sizes() == c.exponents()
    }
}

/// `S_m` permuting the `m` coordinates of the cycles of length `part` in one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResidualFactor {
    pub block: usize,
    pub part: usize,
    pub multiplicity: usize,
}

/// One stratum `D^gamma / Z_gamma` of the extended quotient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stratum {
    cycle_type: CycleType,
    torus_rank: usize,
    residual_action: Vec<ResidualFactor>,
}

impl Stratum {
    pub fn from_cycle_type(cycle_type: CycleType) -> Self {
        let residual_action: Vec<ResidualFactor> = cycle_type
            .parts_per_block
            .iter()
            .enumerate()
            .flat_map(|(block, p)| {
                p.multiplicities()
                    .into_iter()
                    .map(move |(part, multiplicity)| ResidualFactor {
                        block,
                        part,
                        multiplicity,
                    })
            })
            .collect();
        let torus_rank = residual_action.iter().map(|f| f.multiplicity).sum();
        Stratum {
            cycle_type,
            torus_rank,
            residual_action,
        }
    }

    pub fn cycle_type(&self) -> &CycleType {
        &self.cycle_type
    }

    /// Complex dimension of the fixed torus `D^gamma` (total number of cycles).
    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    /// Factors in canonical order: blocks in order, part sizes decreasing.
    pub fn residual_action(&self) -> &[ResidualFactor] {
        &self.residual_action
    }

    /// The stratum is `prod Sym^m C^x`, one factor per residual factor.
    pub fn quotient_shape(&self) -> Vec<usize> {
        self.residual_action
            .iter()
            .map(|f| f.multiplicity)
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct StratumRepr {
    cycle_type: CycleType,
    #[serde(default, skip_deserializing)]
    torus_rank: usize,
    #[serde(default, skip_deserializing)]
    residual_action: Vec<ResidualFactor>,
    #[serde(default, skip_deserializing)]
    shape: Vec<usize>,
}

impl Serialize for Stratum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StratumRepr {
            cycle_type: self.cycle_type.clone(),
            torus_rank: self.torus_rank,
            residual_action: self.residual_action.clone(),
            shape: self.quotient_shape(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Stratum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StratumRepr::deserialize(d)?;
        let ct =
            CycleType::new(repr.cycle_type.parts_per_block).map_err(serde::de::Error::custom)?;
        Ok(Stratum::from_cycle_type(ct))
    }
}

pub fn enumerate_strata(c: &Component) -> Result<Vec<Stratum>> {
    enumerate_strata_limited(c, DEFAULT_STRATA_LIMIT)
}

/// One stratum per conjugacy class of the Weyl group, in the canonical
/// (lexicographic) order of [`Component::cycle_types`].
pub fn enumerate_strata_limited(c: &Component, limit: usize) -> Result<Vec<Stratum>> {
    c.check_limit("component dimension", limit)?;
    Ok(c.cycle_types()
        .into_iter()
        .map(Stratum::from_cycle_type)
        .collect())
}

/// The orbit of L-parameters attached to a stratum: a part `alpha` of block
/// `i` becomes the class `label_i (x) spin((alpha - 1)/2)` with multiplicity
/// equal to the number of such parts.
pub fn orbit_for_stratum(c: &Component, s: &Stratum) -> OrbitDescriptor {
    OrbitDescriptor::from_classes(s.residual_action.iter().flat_map(|f| {
        let class = InertialClass::new(
            c.blocks[f.block].weil_label(),
            Spin::from_twice(f.part as u32 - 1),
        );
        std::iter::repeat_n(class, f.multiplicity)
    }))
}

pub fn enumerate_orbits(c: &Component) -> Result<Vec<OrbitDescriptor>> {
    enumerate_orbits_limited(c, DEFAULT_STRATA_LIMIT)
}

pub fn enumerate_orbits_limited(c: &Component, limit: usize) -> Result<Vec<OrbitDescriptor>> {
    Ok(enumerate_strata_limited(c, limit)?
        .iter()
        .map(|s| orbit_for_stratum(c, s))
        .collect())
}

/// Pairs each orbit with the stratum coming from the same multipartition.
pub fn orbit_stratum_bijection(c: &Component) -> Result<Vec<(OrbitDescriptor, Stratum)>> {
    Ok(enumerate_strata(c)?
        .into_iter()
        .map(|s| (orbit_for_stratum(c, &s), s))
        .collect())
}

pub fn stratum_quotient_shape(s: &Stratum) -> Vec<usize> {
    s.quotient_shape()
}
