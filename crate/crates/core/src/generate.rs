//! Seeded synthetic instance generators.
//!
//! Specs are written as `name(arg,...)`:
//!
//! * `coverage(n,universe,density)` – each element covers each universe item
//!   independently with probability `density`; item weights in `[0.5, 1.5)`.
//! * `facility(n,clients)` – similarities uniform in `[0, 1)`.
//! * `cut(n,p,wmin,wmax)` – Erdős–Rényi graph, weights uniform in `[wmin, wmax]`.
//! * `lowerbound(k,d,n_zero)` – `k+d` unit-weight elements followed by
//!   `n_zero` zero-weight ones, under `uniform(k)`.
//!
//! Matroid specs: `uniform(k)`, `partition(blocks,cap)` (element `e` goes to
//! block `e mod blocks`), `graphic(vertices)` (each element is a distinct
//! random edge).

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::instance::Instance;
use crate::matroid::Matroid;
use crate::objective::Objective;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Coverage { n: usize, universe: usize, density: f64 },
    Facility { n: usize, clients: usize },
    Cut { n: usize, edge_prob: f64, wmin: f64, wmax: f64 },
    LowerBound { k: usize, d: usize, n_zero: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatroidSpec {
    Uniform { k: usize },
    Partition { blocks: usize, cap: usize },
    Graphic { vertices: usize },
}

fn call_args(s: &str) -> Result<(&str, Vec<&str>)> {
    let s = s.trim();
    let open = s
        .find('(')
        .ok_or_else(|| Error::InvalidArgument(format!("expected name(args), got `{s}`")))?;
    if !s.ends_with(')') {
        return invalid(format!("expected name(args), got `{s}`"));
    }
    let name = &s[..open];
    let inner = &s[open + 1..s.len() - 1];
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };
    Ok((name, args))
}

fn arg<T: std::str::FromStr>(args: &[&str], i: usize, spec: &str) -> Result<T> {
    args.get(i)
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| Error::InvalidArgument(format!("bad argument {i} in `{spec}`")))
}

impl GeneratorSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (name, args) = call_args(s)?;
        let expect = |count: usize| -> Result<()> {
            if args.len() == count {
                Ok(())
            } else {
                invalid(format!("`{name}` takes {count} arguments, got {}", args.len()))
            }
        };
        let spec = match name {
            "coverage" => {
                expect(3)?;
                GeneratorSpec::Coverage {
                    n: arg(&args, 0, s)?,
                    universe: arg(&args, 1, s)?,
                    density: arg(&args, 2, s)?,
                }
            }
            "facility" => {
                expect(2)?;
                GeneratorSpec::Facility {
                    n: arg(&args, 0, s)?,
                    clients: arg(&args, 1, s)?,
                }
            }
            "cut" => {
                expect(4)?;
                GeneratorSpec::Cut {
                    n: arg(&args, 0, s)?,
                    edge_prob: arg(&args, 1, s)?,
                    wmin: arg(&args, 2, s)?,
                    wmax: arg(&args, 3, s)?,
                }
            }
            "lowerbound" => {
                expect(3)?;
                GeneratorSpec::LowerBound {
                    k: arg(&args, 0, s)?,
                    d: arg(&args, 1, s)?,
                    n_zero: arg(&args, 2, s)?,
                }
            }
            other => return invalid(format!("unknown generator `{other}`")),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GeneratorSpec::Coverage { density, .. } if !(0.0..=1.0).contains(&density) => {
                invalid(format!("density {density} outside [0, 1]"))
            }
            GeneratorSpec::Facility { clients: 0, .. } => invalid("facility needs clients > 0"),
            GeneratorSpec::Cut {
                edge_prob,
                wmin,
                wmax,
                ..
            } if !(0.0..=1.0).contains(&edge_prob) || wmin < 0.0 || wmax < wmin => {
                invalid("cut needs p in [0, 1] and 0 <= wmin <= wmax")
            }
            _ => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            GeneratorSpec::Coverage { n, .. }
            | GeneratorSpec::Facility { n, .. }
            | GeneratorSpec::Cut { n, .. } => n,
            GeneratorSpec::LowerBound { k, d, n_zero } => k + d + n_zero,
        }
    }
}

impl MatroidSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (name, args) = call_args(s)?;
        match (name, args.len()) {
            ("uniform", 1) => Ok(MatroidSpec::Uniform { k: arg(&args, 0, s)? }),
            ("partition", 2) => Ok(MatroidSpec::Partition {
                blocks: arg(&args, 0, s)?,
                cap: arg(&args, 1, s)?,
            }),
            ("graphic", 1) => Ok(MatroidSpec::Graphic {
                vertices: arg(&args, 0, s)?,
            }),
            _ => invalid(format!("bad matroid spec `{s}`")),
        }
    }

    pub fn build(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Matroid> {
        match *self {
            MatroidSpec::Uniform { k } => Ok(Matroid::uniform(n, k)),
            MatroidSpec::Partition { blocks, cap } => {
                if blocks == 0 {
                    return invalid("partition needs at least one block");
                }
                let mut members = vec![Vec::new(); blocks];
                for e in 0..n {
                    members[e % blocks].push(e);
                }
                Matroid::partition(n, members, vec![cap; blocks])
            }
            MatroidSpec::Graphic { vertices } => {
                let pairs: Vec<(usize, usize)> = (0..vertices)
                    .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
                    .collect();
                if n > pairs.len() {
                    return invalid(format!(
                        "{vertices} vertices admit only {} distinct edges, need {n}",
                        pairs.len()
                    ));
                }
                let chosen = sample(rng, pairs.len(), n).into_vec();
                Matroid::graphic(vertices, chosen.into_iter().map(|i| pairs[i]).collect())
            }
        }
    }
}

/// Builds an instance; deterministic given `seed`. `lowerbound` always uses
/// `uniform(k)` and ignores `matroid`.
pub fn generate_instance(spec: &GeneratorSpec, matroid: &MatroidSpec, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n();
    let objective = match *spec {
        GeneratorSpec::Coverage {
            n,
            universe,
            density,
        } => {
            let weights: Vec<f64> = (0..universe).map(|_| rng.gen_range(0.5..1.5)).collect();
            let covers = (0..n)
                .map(|_| (0..universe).filter(|_| rng.gen_bool(density)).collect())
                .collect();
            Objective::weighted_coverage(weights, covers)?
        }
        GeneratorSpec::Facility { n, clients } => {
            let sim = (0..clients)
                .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
                .collect();
            Objective::facility_location(sim)?
        }
        GeneratorSpec::Cut {
            n,
            edge_prob,
            wmin,
            wmax,
        } => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(edge_prob) {
                        let w = if wmax > wmin {
                            rng.gen_range(wmin..=wmax)
                        } else {
                            wmin
                        };
                        edges.push((u, v, w));
                    }
                }
            }
            Objective::cut_function(n, edges)?
        }
        GeneratorSpec::LowerBound { k, d, n_zero } => {
            let mut w = vec![1.0; k + d];
            w.extend(std::iter::repeat_n(0.0, n_zero));
            let objective = Objective::modular(w)?;
            return Instance::new(objective, Matroid::uniform(n, k));
        }
    };
    let matroid = matroid.build(n, &mut rng)?;
    Instance::new(objective, matroid)
}
