//! Regression checks reproducing the worked examples and the structural
//! identities of the toolkit. The CLI `verify` command runs these.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bernstein::{enumerate_strata, orbit_stratum_bijection, Component};
use crate::cohomology::{component_hp, lemma22_dimension, orbit_poincare, tempered_orbit_poincare};
use crate::error::Result;
use crate::parameters::{LParameter, Summand};
use crate::qproj::{fiber, project, StratumPoint, SymPoint};
use crate::retract::{homotopy, temper_parameter, temper_point};
use crate::scalars::{QScalar, Rational};
use crate::symfun::{from_sym_coords, multiset_relative_error, to_sym_coords};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// The worked example or identity this check reproduces.
    pub reference: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

fn run_check(
    name: &'static str,
    reference: &'static str,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        name,
        reference,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// All exponent vectors with at most `max_blocks` blocks and total at most `max_total`.
pub fn compositions_up_to(max_total: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, blocks_left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if blocks_left == 0 {
            return;
        }
        for e in 1..=left {
            prefix.push(e);
            rec(left - e, blocks_left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_total, max_blocks, &mut Vec::new(), &mut out);
    out
}

/// A random exact point on a random stratum of `c`. Coordinates have
/// half-integer q-exponents in `[-2, 2]` and turns in `{0, 1/2}`, so that
/// q-string collisions are frequent.
pub fn random_stratum_point<R: Rng>(rng: &mut R, c: &Component) -> StratumPoint {
    let cycle_types = c.cycle_types();
    let ct = cycle_types
        .choose(rng)
        .expect("a component has at least one cycle type")
        .clone();
    let rank: usize = ct.parts_per_block.iter().map(|p| p.len()).sum();
    let coords = (0..rank)
        .map(|_| {
            QScalar::new(
                Rational::new(rng.random_range(-4..=4), 2),
                Rational::new(rng.random_range(0..2), 2),
            )
        })
        .collect();
    StratumPoint::new(crate::bernstein::Stratum::from_cycle_type(ct), coords)
        .expect("rank matches cycle type")
}

/// `n` random nonzero complex numbers with moduli log-uniform in
/// `[1e-2, 1e2]` and pairwise distances at least `min_separation`.
pub fn random_separated_roots<R: Rng>(
    rng: &mut R,
    n: usize,
    min_separation: f64,
) -> Vec<Complex64> {
    loop {
        let roots: Vec<Complex64> = (0..n)
            .map(|_| {
                let modulus = 10f64.powf(rng.random_range(-2.0..=2.0));
                let angle = rng.random_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(modulus, angle)
            })
            .collect();
        let separated =
            (0..n).all(|i| (i + 1..n).all(|j| (roots[i] - roots[j]).norm() >= min_separation));
        if separated {
            return roots;
        }
    }
}

fn qp(a: i64, b: i64) -> QScalar {
    QScalar::q_power(Rational::new(a, b))
}

fn gl2_projection() -> Result<(bool, String)> {
    let c = Component::from_exponents(&[2])?;
    let on_cycle = project(&StratumPoint::from_cycle_type(
        vec![vec![2]],
        vec![QScalar::one()],
    )?);
    let expected = SymPoint::new(vec![vec![qp(1, 2), qp(-1, 2)]]);
    let z1 = QScalar::new(Rational::new(1, 3), Rational::new(1, 7));
    let z2 = QScalar::unit(Rational::new(2, 5));
    let ident = project(&StratumPoint::from_cycle_type(
        vec![vec![1, 1]],
        vec![z1, z2],
    )?);
    let ok =
        on_cycle == expected && ident == SymPoint::new(vec![vec![z1, z2]]) && c.dimension() == 2;
    Ok((
        ok,
        format!(
            "2-cycle z=1 -> {:?}",
            on_cycle.blocks()[0]
                .iter()
                .map(|z| z.to_string())
                .collect::<Vec<_>>()
        ),
    ))
}

fn gl3_collision() -> Result<(bool, String)> {
    let c = Component::from_exponents(&[3])?;
    let z = QScalar::new(Rational::new(1, 4), Rational::new(1, 3));
    let image = project(&StratumPoint::from_cycle_type(vec![vec![3]], vec![z])?);
    let string_ok = image
        == SymPoint::new(vec![vec![
            z.q_shift(Rational::from_integer(1)),
            z,
            z.q_shift(Rational::from_integer(-1)),
        ]]);
    let y = SymPoint::new(vec![vec![qp(-1, 1), QScalar::one(), qp(1, 1)]]);
    let f = fiber(&y, &c)?;
    let mut by_stratum: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in &f {
        *by_stratum
            .entry(p.stratum().cycle_type().parts_per_block[0].parts().to_vec())
            .or_default() += 1;
    }
    let expected = BTreeMap::from([(vec![1, 1, 1], 1), (vec![2, 1], 2), (vec![3], 1)]);
    Ok((
        string_ok && f.len() == 4 && by_stratum == expected,
        format!("fiber size {} with strata {:?}", f.len(), by_stratum),
    ))
}

fn strata_shapes() -> Result<(bool, String)> {
    let shapes = |e: usize| -> Result<Vec<Vec<usize>>> {
        Ok(enumerate_strata(&Component::from_exponents(&[e])?)?
            .iter()
            .map(|s| s.quotient_shape())
            .collect())
    };
    let s2 = shapes(2)?;
    let s3 = shapes(3)?;
    Ok((
        s2 == vec![vec![2], vec![1]] && s3 == vec![vec![3], vec![1, 1], vec![1]],
        format!("(2): {s2:?}, (3): {s3:?}"),
    ))
}

fn hp_dimensions() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for (e, expected) in [(1, 1), (2, 2), (3, 4), (4, 7)] {
        let c = Component::from_exponents(&[e])?;
        let (hp0, hp1) = component_hp(&c)?;
        let l = lemma22_dimension(&c)?;
        ok &= hp0 == expected && hp1 == expected && l == expected;
        detail.push(format!("({e}) -> ({hp0},{hp1}) orbit sum {l}"));
    }
    Ok((ok, detail.join("; ")))
}

fn lemma22_sweep() -> Result<(bool, String)> {
    let all = compositions_up_to(8, 3);
    let mut failures = Vec::new();
    for exps in &all {
        let c = Component::from_exponents(exps)?;
        let (hp0, hp1) = component_hp(&c)?;
        let l = lemma22_dimension(&c)?;
        if hp0 != hp1 || hp0 != l {
            failures.push(format!("{exps:?}: ({hp0},{hp1}) vs {l}"));
        }
    }
    Ok((
        failures.is_empty(),
        format!("{} components, failures: {:?}", all.len(), failures),
    ))
}

fn retraction() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0usize;
    for exps in compositions_up_to(8, 3) {
        let c = Component::from_exponents(&exps)?;
        for (orbit, stratum) in orbit_stratum_bijection(&c)? {
            if orbit_poincare(&orbit) != tempered_orbit_poincare(&orbit)? {
                return Ok((false, format!("Poincare mismatch on {exps:?}")));
            }
            let classes: Vec<_> = orbit
                .entries()
                .iter()
                .flat_map(|e| std::iter::repeat_n(e.class.clone(), e.multiplicity))
                .collect();
            let phi = LParameter::new(
                classes
                    .into_iter()
                    .map(|class| {
                        Summand::new(
                            class,
                            QScalar::new(
                                Rational::new(rng.random_range(-6..=6), 2),
                                Rational::new(rng.random_range(0..6), 6),
                            ),
                        )
                    })
                    .collect(),
            )?;
            let tempered = temper_parameter(&phi);
            let t = Rational::new(rng.random_range(0..=10), 10);
            let ok = temper_parameter(&tempered) == tempered
                && tempered.is_tempered()
                && homotopy(&phi, Rational::from_integer(0))? == phi
                && homotopy(&phi, Rational::from_integer(1))? == tempered
                && homotopy(&phi, t)?.orbit() == phi.orbit()
                && tempered.orbit() == orbit;
            let coords = (0..stratum.torus_rank())
                .map(|_| {
                    QScalar::new(
                        Rational::new(rng.random_range(-4..=4), 3),
                        Rational::new(rng.random_range(0..4), 4),
                    )
                })
                .collect();
            let p = StratumPoint::new(stratum, coords)?;
            let tp = temper_point(&p);
            let ok = ok && temper_point(&tp) == tp && tp.stratum() == p.stratum();
            if !ok {
                return Ok((false, format!("retraction law failed on {exps:?}")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} orbits checked")))
}

fn fiber_soundness() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let components = compositions_up_to(5, 3);
    for _ in 0..200 {
        let exps = components.choose(&mut rng).expect("nonempty");
        let c = Component::from_exponents(exps)?;
        let p = random_stratum_point(&mut rng, &c);
        let y = project(&p);
        let f = fiber(&y, &c)?;
        if !f.contains(&p) || f.iter().any(|x| project(x) != y) {
            return Ok((
                false,
                format!("fiber over {y:?} is unsound or misses {p:?}"),
            ));
        }
    }
    Ok((
        true,
        "200 random points re-project and are recovered".into(),
    ))
}

fn symmetric_round_trip() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for _ in 0..200 {
            let roots = random_separated_roots(&mut rng, n, 1e-3);
            let back = from_sym_coords(&to_sym_coords(&roots)?)?;
            worst = worst.max(multiset_relative_error(&back, &roots)?);
        }
    }
    Ok((worst < 1e-9, format!("worst relative error {worst:.3e}")))
}

/// Runs every regression check.
pub fn run_all() -> Vec<Check> {
    vec![
        run_check(
            "gl2_q_projection",
            "GL(2) q-projection example",
            gl2_projection,
        ),
        run_check(
            "gl3_fiber_collision",
            "GL(3) four-parameter collision example",
            gl3_collision,
        ),
        run_check(
            "extended_quotient_strata",
            "GL(2), GL(3) extended quotients",
            strata_shapes,
        ),
        run_check(
            "hp_dimensions",
            "HP of exponents (1)-(4); supercuspidal generators 1, dtheta",
            hp_dimensions,
        ),
        run_check(
            "orbit_count_sweep",
            "per-parity HP = sum 2^(k-1), all exponents with sum <= 8",
            lemma22_sweep,
        ),
        run_check(
            "tempering_retraction",
            "retraction laws and orbit cohomology",
            retraction,
        ),
        run_check(
            "fiber_soundness",
            "finiteness and soundness of q-projection fibers",
            fiber_soundness,
        ),
        run_check(
            "symmetric_coordinates",
            "Sym^n C^x = A^(n-1) x (A - 0) round trip",
            symmetric_round_trip,
        ),
    ]
}
