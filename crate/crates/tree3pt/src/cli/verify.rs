//! Oracle suites behind `tree3pt verify`.

use clap::ValueEnum;
use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;

use crate::algebraic_bethe::{explicit_norm, solutions_from_modes, BetheRoots};
use crate::determinants::{
    gaudin_norm, izergin, slavnov_hom, GaudinInput, QuantumRapidities, SlavnovInput,
};
use crate::gauge_map::{make_bps_geometry, make_geometry, oracle_contraction, structure_constant};
use crate::numerics::{c, rel_err, Complex, ETA, Z0};
use crate::vertex_model::{brute_dwpf, brute_restricted, weight, VertexWeights, WeightKind};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Weights,
    Dwpf,
    Slavnov,
    Gaudin,
    Sc,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub max_n: usize,
    pub max_l: usize,
    /// L1, L2, L3, N1, N2, N3.
    pub geometry: [usize; 6],
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Tally {
    name: String,
    tolerance: f64,
    worst: f64,
    samples: usize,
    error: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Tally {
            name: name.into(),
            tolerance,
            worst: 0.0,
            samples: 0,
            error: None,
        }
    }

    fn record(&mut self, dev: crate::Result<f64>) {
        match dev {
            Ok(d) => {
                self.samples += 1;
                // NaN must fail, so compare through the negation.
                if !(d <= self.worst) {
                    self.worst = d;
                }
            }
            Err(e) => {
                if self.error.is_none() {
                    self.error = Some(e.to_string());
                }
            }
        }
    }

    fn finish(self) -> Check {
        Check {
            passed: self.error.is_none() && self.samples > 0 && self.worst <= self.tolerance,
            name: self.name,
            max_deviation: self.worst,
            tolerance: self.tolerance,
            samples: self.samples,
            error: self.error,
        }
    }
}

fn draw(rng: &mut StdRng) -> Complex {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn weights(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let wt = VertexWeights::default();
    let mut sum_rule = Tally::new("weights: a = b + c", 1e-14);
    let mut unitarity = Tally::new("weights: R(x) R(-x) = (1 - eta^2/x^2) Id", 1e-12);
    for _ in 0..opts.trials.max(1) * 10 {
        let (u, z) = (draw(&mut rng), draw(&mut rng));
        sum_rule.record(
            wt.abc(u, z)
                .map(|(a, b, cc)| (a - b - cc).norm() / a.norm().max(1.0)),
        );
        unitarity.record((|| {
            let (a1, b1, c1) = wt.abc(u, z)?;
            let (a2, b2, c2) = wt.abc(z - (u - z), z)?;
            let x = u - z;
            let want = 1.0 - ETA * ETA / (x * x);
            let dev = [a1 * a2 - want, b1 * b2 + c1 * c2 - want, b1 * c2 + c1 * b2]
                .iter()
                .map(|d| d.norm())
                .fold(0.0, f64::max);
            Ok(dev / want.norm().max(1.0))
        })());
    }
    let mut b_one = Tally::new("weights: b = 1", 0.0);
    let mut poles = Tally::new("weights: a and c refuse u = z", 0.0);
    for _ in 0..opts.trials.max(1) * 10 {
        let (u, z) = (draw(&mut rng), draw(&mut rng));
        b_one.record(weight(WeightKind::B, u, z, &wt).map(|b| (b - 1.0).norm()));
        for kind in [WeightKind::A, WeightKind::C] {
            poles.record(match weight(kind, z, z, &wt) {
                Err(Error::CoincidentRapidities(_)) => Ok(0.0),
                Err(e) => Err(e),
                Ok(_) => Ok(f64::INFINITY),
            });
        }
    }
    vec![
        b_one.finish(),
        poles.finish(),
        sum_rule.finish(),
        unitarity.finish(),
    ]
}

fn dwpf(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let wt = VertexWeights::default();
    let mut t = Tally::new(
        format!("dwpf: determinant vs lattice, N <= {}", opts.max_n),
        1e-10,
    );
    for n in 1..=opts.max_n.min(10) {
        for _ in 0..opts.trials {
            let w: Vec<Complex> = (0..n).map(|_| draw(&mut rng)).collect();
            let z: Vec<Complex> = (0..n).map(|_| draw(&mut rng)).collect();
            t.record((|| {
                Ok(rel_err(izergin(&w, &z, ETA)?, brute_dwpf(&w, &z, &wt)?))
            })());
        }
    }
    vec![t.finish()]
}

fn slavnov(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let wt = VertexWeights::default();
    let mut t = Tally::new(
        format!(
            "slavnov: homogeneous formula vs lattice, L <= {}",
            opts.max_l
        ),
        1e-8,
    );
    for l in 2..=opts.max_l.min(12) {
        for n1 in 1..=(l / 2).min(3) {
            for roots in solutions_from_modes(l, n1, 1e-12) {
                for n2 in 0..=n1 {
                    for _ in 0..opts.trials.max(1) {
                        let v: Vec<Complex> = (0..n2).map(|_| draw(&mut rng)).collect();
                        let input = SlavnovInput {
                            l,
                            n1,
                            n2,
                            u: roots.roots().to_vec(),
                            v: v.clone(),
                            z: QuantumRapidities::Homogeneous(Z0),
                            eta: ETA,
                        };
                        t.record((|| {
                            let a = slavnov_hom(&input)?;
                            let b =
                                brute_restricted(l, n1, n2, roots.roots(), &v, &vec![Z0; l], &wt)?;
                            Ok(rel_err(a, b))
                        })());
                    }
                }
            }
        }
    }
    vec![t.finish()]
}

fn gaudin(opts: &VerifyOptions) -> Vec<Check> {
    let wt = VertexWeights::default();
    let mut t = Tally::new(
        format!("gaudin: determinant vs explicit norm, L <= {}", opts.max_l),
        1e-9,
    );
    for l in 2..=opts.max_l.min(10) {
        for n in 1..=(l / 2).min(3) {
            for roots in solutions_from_modes(l, n, 1e-12) {
                let u = roots.roots().to_vec();
                t.record((|| {
                    let g = gaudin_norm(&GaudinInput {
                        l,
                        u: u.clone(),
                        z: Z0,
                        eta: ETA,
                    })?;
                    Ok(rel_err(g, explicit_norm(&u, &vec![Z0; l], &wt)?))
                })());
            }
        }
    }
    vec![t.finish()]
}

/// Magnitude below which a structure constant counts as a selection-rule zero.
const VANISHING: f64 = 1e-9;

fn sc(opts: &VerifyOptions) -> Vec<Check> {
    let [l1, l2, l3, n1, n2, n3] = opts.geometry;
    let mut t = Tally::new(
        format!("sc: ratio to contraction is constant, ({l1},{l2},{l3};{n1},{n2},{n3})"),
        1e-6,
    );
    let g = if n1 + n2 + n3 == 0 {
        make_bps_geometry(l1, l2, l3)
    } else {
        make_geometry(l1, l2, l3, n1, n2, n3)
    };
    let g = match g {
        Ok(g) => g,
        Err(e) => {
            t.record(Err(e));
            return vec![t.finish()];
        }
    };
    let sols = |l: usize, n: usize| -> Vec<BetheRoots> {
        if n == 0 {
            BetheRoots::at_default(l, vec![]).into_iter().collect()
        } else {
            solutions_from_modes(l, n, 1e-12)
        }
    };
    let (us, vs, ws) = (sols(l1, n1), sols(l2, n2), sols(l3, n3));
    let mut reference: Option<Complex> = None;
    let mut used = 0;
    'outer: for u in &us {
        for v in &vs {
            for w in &ws {
                if used >= opts.trials.max(3) {
                    break 'outer;
                }
                let (Ok(r), Ok(o)) = (
                    structure_constant(&g, u, v, w),
                    oracle_contraction(&g, u, v, w),
                ) else {
                    continue;
                };
                if o.norm() < VANISHING || r.c.norm() < VANISHING {
                    continue;
                }
                used += 1;
                let ratio = r.c / o;
                let r0 = *reference.get_or_insert(ratio);
                t.record(Ok((ratio - r0).norm() / r0.norm()));
            }
        }
    }
    vec![t.finish()]
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::Weights => weights(opts),
        Suite::Dwpf => dwpf(opts),
        Suite::Slavnov => slavnov(opts),
        Suite::Gaudin => gaudin(opts),
        Suite::Sc => sc(opts),
        Suite::All => [
            weights(opts),
            dwpf(opts),
            slavnov(opts),
            gaudin(opts),
            sc(opts),
        ]
        .concat(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions {
            max_n: 3,
            max_l: 5,
            geometry: [4, 4, 2, 2, 1, 1],
            trials: 2,
            seed: 3,
        }
    }

    #[test]
    fn all_suites_pass_on_small_sizes() {
        for check in run_suite(Suite::All, &opts()) {
            assert!(check.passed, "{check:?}");
        }
    }

    #[test]
    fn nan_and_errors_fail() {
        let mut t = Tally::new("x", 1.0);
        t.record(Ok(f64::NAN));
        assert!(!t.finish().passed);
        let mut t = Tally::new("x", 1.0);
        t.record(Ok(0.0));
        t.record(Err(crate::Error::SingularJacobian));
        assert!(!t.finish().passed);
        assert!(!Tally::new("x", 1.0).finish().passed);
    }
}
