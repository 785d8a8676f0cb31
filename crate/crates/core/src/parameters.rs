//! L-parameters for `GL(n)` as twisted sums of inertial classes.
//!
//! A Weil representation is an opaque label carrying only its dimension and
//! whether its determinant is unitary. Two irreducible summands are in the
//! same inertial class iff their labels and spins agree.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::scalars::{format_ratio, ratio_str, QScalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "WeilLabelRepr")]
pub struct WeilLabel {
    pub id: String,
    pub dim: u32,
    pub unitary_det: bool,
}

#[derive(Deserialize)]
struct WeilLabelRepr {
    id: String,
    dim: u32,
    #[serde(default = "default_true")]
    unitary_det: bool,
}

fn default_true() -> bool {
    true
}

impl TryFrom<WeilLabelRepr> for WeilLabel {
    type Error = crate::Error;

    fn try_from(r: WeilLabelRepr) -> Result<Self> {
        WeilLabel::new(r.id, r.dim, r.unitary_det)
    }
}

impl WeilLabel {
    pub fn new(id: impl Into<String>, dim: u32, unitary_det: bool) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(invalid("Weil label id must be nonempty"));
        }
        if dim == 0 {
            return Err(invalid(format!("Weil label '{id}' has dimension 0")));
        }
        Ok(WeilLabel {
            id,
            dim,
            unitary_det,
        })
    }

    /// The trivial one-dimensional character.
    pub fn trivial() -> Self {
        WeilLabel {
            id: "triv".into(),
            dim: 1,
            unitary_det: true,
        }
    }
}

/// Spin `j` of the `(2j+1)`-dimensional irreducible of `SU(2)`, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Spin(u32);

impl Spin {
    pub fn from_twice(two_j: u32) -> Self {
        Spin(two_j)
    }

    pub fn from_ratio(j: Rational64) -> Result<Self> {
        let twice = j * 2;
        if !twice.is_integer() || twice < Rational64::zero() {
            return Err(invalid(format!(
                "spin {j} is not a nonnegative half-integer"
            )));
        }
        u32::try_from(*twice.numer())
            .map(Spin)
            .map_err(|_| invalid(format!("spin {j} out of range")))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn as_ratio(self) -> Rational64 {
        Rational64::new(self.0 as i64, 2)
    }

    /// `2j + 1`.
    pub fn dimension(self) -> u32 {
        self.0 + 1
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(&self.as_ratio()))
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ratio_str::deserialize(d)?;
        Spin::from_ratio(j).map_err(serde::de::Error::custom)
    }
}

/// An irreducible parameter `rho (x) spin(j)` up to unramified twist.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InertialClass {
    pub rho: WeilLabel,
    #[serde(rename = "j")]
    pub spin: Spin,
}

impl InertialClass {
    pub fn new(rho: WeilLabel, spin: Spin) -> Self {
        InertialClass { rho, spin }
    }

    pub fn dimension(&self) -> u32 {
        self.rho.dim * self.spin.dimension()
    }
}

/// One summand `psi * (rho (x) spin(j))` of a parameter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Summand {
    #[serde(flatten)]
    pub class: InertialClass,
    #[serde(default)]
    pub twist: QScalar,
}

impl Summand {
    pub fn new(class: InertialClass, twist: QScalar) -> Self {
        Summand { class, twist }
    }
}

/// A finite direct sum of twisted irreducibles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LParameterRepr")]
pub struct LParameter {
    summands: Vec<Summand>,
}

#[derive(Deserialize)]
struct LParameterRepr {
    summands: Vec<Summand>,
}

impl TryFrom<LParameterRepr> for LParameter {
    type Error = crate::Error;

    fn try_from(r: LParameterRepr) -> Result<Self> {
        LParameter::new(r.summands)
    }
}

impl LParameter {
    /// Builds a parameter, rejecting an empty sum and inconsistent labels
    /// (equal ids with different dimension or determinant data).
    pub fn new(summands: Vec<Summand>) -> Result<Self> {
        if summands.is_empty() {
            return Err(invalid("an L-parameter needs at least one summand"));
        }
        let mut seen: BTreeMap<&str, &WeilLabel> = BTreeMap::new();
        for s in &summands {
            let rho = &s.class.rho;
            if let Some(prev) = seen.insert(&rho.id, rho) {
                if prev != rho {
                    return Err(invalid(format!(
                        "Weil label '{}' used with inconsistent data",
                        rho.id
                    )));
                }
            }
        }
        Ok(LParameter { summands })
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Summands sorted by `(class, twist)`; equal classes become adjacent.
    pub fn canonical(&self) -> LParameter {
        let mut summands = self.summands.clone();
        summands.sort();
        LParameter { summands }
    }

    pub fn dimension(&self) -> u32 {
        self.summands.iter().map(|s| s.class.dimension()).sum()
    }

    /// Forgets the twists and groups equal inertial classes.
    pub fn orbit(&self) -> OrbitDescriptor {
        OrbitDescriptor::from_classes(self.summands.iter().map(|s| s.class.clone()))
    }

    pub fn is_tempered(&self) -> bool {
        self.summands
            .iter()
            .all(|s| s.class.rho.unitary_det && s.twist.is_unitary())
    }

    pub fn is_supercuspidal(&self) -> bool {
        matches!(self.summands.as_slice(), [s] if s.class.spin.twice() == 0)
    }

    pub fn is_discrete_series(&self) -> bool {
        matches!(self.summands.as_slice(), [s] if s.class.rho.unitary_det && s.twist.is_unitary())
    }

    /// Applies `f` to every twist, keeping the classes.
    pub fn map_twists(&self, mut f: impl FnMut(QScalar) -> QScalar) -> LParameter {
        LParameter {
            summands: self
                .summands
                .iter()
                .map(|s| Summand::new(s.class.clone(), f(s.twist)))
                .collect(),
        }
    }
}

/// The parameter `1 (x) spin((n-1)/2)` of the Steinberg representation of `GL(n)`.
pub fn steinberg_parameter(n: u32) -> Result<LParameter> {
    if n < 1 {
        return Err(invalid("Steinberg parameter needs n >= 1"));
    }
    LParameter::new(vec![Summand::new(
        InertialClass::new(WeilLabel::trivial(), Spin::from_twice(n - 1)),
        QScalar::one(),
    )])
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrbitEntry {
    #[serde(flatten)]
    pub class: InertialClass,
    pub multiplicity: usize,
}

/// The orbit of a parameter under unramified twisting: a multiset of
/// inertial classes. Entries are kept sorted by class, so equality does not
/// depend on the order the classes were supplied in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrbitDescriptor {
    classes: Vec<OrbitEntry>,
}

impl OrbitDescriptor {
    pub fn from_classes(classes: impl IntoIterator<Item = InertialClass>) -> Self {
        let mut counts: BTreeMap<InertialClass, usize> = BTreeMap::new();
        for c in classes {
            *counts.entry(c).or_default() += 1;
        }
        OrbitDescriptor {
            classes: counts
                .into_iter()
                .map(|(class, multiplicity)| OrbitEntry {
                    class,
                    multiplicity,
                })
                .collect(),
        }
    }

    pub fn from_multiplicities(
        entries: impl IntoIterator<Item = (InertialClass, usize)>,
    ) -> Result<Self> {
        let mut counts: BTreeMap<InertialClass, usize> = BTreeMap::new();
        for (c, m) in entries {
            if m == 0 {
                return Err(invalid("orbit multiplicities must be positive"));
            }
            *counts.entry(c).or_default() += m;
        }
        if counts.is_empty() {
            return Err(invalid("an orbit needs at least one class"));
        }
        Ok(OrbitDescriptor {
            classes: counts
                .into_iter()
                .map(|(class, multiplicity)| OrbitEntry {
                    class,
                    multiplicity,
                })
                .collect(),
        })
    }

    pub fn entries(&self) -> &[OrbitEntry] {
        &self.classes
    }

    /// Number of distinct inertial classes.
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// `(l, k)` with the orbit isomorphic to `A^l x (C^x)^k`.
    pub fn shape(&self) -> (usize, usize) {
        let total: usize = self.multiplicities().sum();
        (total - self.k(), self.k())
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().map(|e| e.multiplicity)
    }

    pub fn dimension(&self) -> u32 {
        self.classes
            .iter()
            .map(|e| e.class.dimension() * e.multiplicity as u32)
            .sum()
    }
}

impl<'de> Deserialize<'de> for OrbitDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            classes: Vec<OrbitEntry>,
        }
        let r = Repr::deserialize(d)?;
        OrbitDescriptor::from_multiplicities(
            r.classes.into_iter().map(|e| (e.class, e.multiplicity)),
        )
        .map_err(serde::de::Error::custom)
    }
}
