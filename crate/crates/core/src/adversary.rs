//! Oblivious deletion strategies and the ground-truth optimum on survivors.
//!
//! A strategy sees the instance, the budget `d` and its own seed. It never
//! sees a summary or the algorithm's random bits, so there is no parameter
//! through which it could.

use std::fmt;
use std::path::PathBuf;

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::instance::Instance;
use crate::objective::ElementId;
use crate::phase2::{exhaustive_opt, greedy_matroid, EXHAUSTIVE_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeletionStrategy {
    /// The `d` elements with the largest singleton values.
    TopValue,
    /// A uniform `d`-subset drawn from the adversary's own RNG.
    Random { seed: u64 },
    /// `d` elements of one partition block, padded from the top values.
    Block { block: usize },
    /// The `d`-subset of the `2d` top-value elements that minimizes the
    /// optimum on the survivors.
    MaxDamage,
    Explicit(Vec<ElementId>),
    /// Explicit ids read from a file at resolution time.
    ListFile(PathBuf),
}

/// A strategy together with its budget, e.g. `top:2` or `rand:2:7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySpec {
    pub strategy: DeletionStrategy,
    pub d: usize,
}

impl StrategySpec {
    /// Parses `top:d`, `rand:d:seed`, `block:d:blockid`, `maxdmg:d`, `list:path`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<u64> {
            parts
                .get(i)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad strategy spec `{s}`")))
        };
        let spec = match (parts[0], parts.len()) {
            ("top", 2) => StrategySpec {
                strategy: DeletionStrategy::TopValue,
                d: num(1)? as usize,
            },
            ("rand", 3) => StrategySpec {
                strategy: DeletionStrategy::Random { seed: num(2)? },
                d: num(1)? as usize,
            },
            ("block", 3) => StrategySpec {
                strategy: DeletionStrategy::Block {
                    block: num(2)? as usize,
                },
                d: num(1)? as usize,
            },
            ("maxdmg", 2) => StrategySpec {
                strategy: DeletionStrategy::MaxDamage,
                d: num(1)? as usize,
            },
            ("list", _) if parts.len() >= 2 => {
                let path = s.trim()["list:".len()..].to_string();
                StrategySpec {
                    strategy: DeletionStrategy::ListFile(path.into()),
                    d: usize::MAX,
                }
            }
            _ => return invalid(format!("bad strategy spec `{s}`")),
        };
        Ok(spec)
    }

    pub fn choose(&self, instance: &Instance) -> Result<Vec<ElementId>> {
        choose_deletions(instance, &self.strategy, self.d)
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.strategy {
            DeletionStrategy::TopValue => write!(f, "top:{}", self.d),
            DeletionStrategy::Random { seed } => write!(f, "rand:{}:{seed}", self.d),
            DeletionStrategy::Block { block } => write!(f, "block:{}:{block}", self.d),
            DeletionStrategy::MaxDamage => write!(f, "maxdmg:{}", self.d),
            DeletionStrategy::Explicit(ids) => write!(
                f,
                "explicit:{}",
                ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            ),
            DeletionStrategy::ListFile(p) => write!(f, "list:{}", p.display()),
        }
    }
}

/// Reads whitespace- or comma-separated ids.
pub fn read_id_list(path: &std::path::Path) -> Result<Vec<ElementId>> {
    let text = std::fs::read_to_string(path)?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad id `{t}` in {}", path.display())))
        })
        .collect()
}

/// Element ids by singleton value, largest first, ties to the smaller id.
fn by_value(instance: &Instance) -> Vec<ElementId> {
    let values = instance.objective.singleton_values();
    let mut order: Vec<_> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

/// Picks the deleted set `D` with `|D| ≤ d`, returned sorted.
pub fn choose_deletions(
    instance: &Instance,
    strategy: &DeletionStrategy,
    d: usize,
) -> Result<Vec<ElementId>> {
    let n = instance.n();
    let explicit = |ids: Vec<ElementId>| -> Result<Vec<ElementId>> {
        if ids.len() > d {
            return invalid(format!("explicit list has {} ids, budget is {d}", ids.len()));
        }
        if let Some(&bad) = ids.iter().find(|&&e| e >= n) {
            return invalid(format!("explicit id {bad} out of range 0..{n}"));
        }
        Ok(ids)
    };
    if let DeletionStrategy::ListFile(path) = strategy {
        let mut ids = explicit(read_id_list(path)?)?;
        ids.sort_unstable();
        ids.dedup();
        return Ok(ids);
    }
    if let DeletionStrategy::Explicit(ids) = strategy {
        let mut ids = explicit(ids.clone())?;
        ids.sort_unstable();
        ids.dedup();
        return Ok(ids);
    }
    if d > n {
        return invalid(format!("deletion budget {d} exceeds n = {n}"));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut chosen = match strategy {
        DeletionStrategy::TopValue => by_value(instance).into_iter().take(d).collect(),
        DeletionStrategy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            sample(&mut rng, n, d).into_vec()
        }
        DeletionStrategy::Block { block } => {
            let members: Vec<ElementId> = match instance.matroid.blocks() {
                Some(blocks) => blocks
                    .get(*block)
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument(format!("no partition block {block}")))?,
                None if *block == 0 => (0..n).collect(),
                None => return invalid(format!("matroid has no partition block {block}")),
            };
            let order = by_value(instance);
            let mut picked: Vec<_> = order
                .iter()
                .copied()
                .filter(|e| members.contains(e))
                .take(d)
                .collect();
            for &e in &order {
                if picked.len() == d {
                    break;
                }
                if !picked.contains(&e) {
                    picked.push(e);
                }
            }
            picked
        }
        DeletionStrategy::MaxDamage => max_damage(instance, d)?,
        DeletionStrategy::Explicit(_) | DeletionStrategy::ListFile(_) => unreachable!(),
    };
    chosen.sort_unstable();
    Ok(chosen)
}

fn max_damage(instance: &Instance, d: usize) -> Result<Vec<ElementId>> {
    let mut pool: Vec<_> = by_value(instance).into_iter().take(2 * d).collect();
    pool.sort_unstable();
    let method = if instance.n() - d <= EXHAUSTIVE_CAP {
        OptMethod::Exhaustive
    } else {
        OptMethod::GreedyBound
    };
    let mut best: Option<(f64, Vec<ElementId>)> = None;
    for combo in combinations(pool.len(), d) {
        let deleted: Vec<_> = combo.iter().map(|&i| pool[i]).collect();
        let v = opt_value(instance, &deleted, method)?.value;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, deleted));
        }
    }
    Ok(best.map(|(_, d)| d).unwrap_or_default())
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptMethod {
    Exhaustive,
    /// Greedy value: a lower bound on the optimum, and for monotone
    /// objectives at least half of it.
    GreedyBound,
}

impl fmt::Display for OptMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptMethod::Exhaustive => "exhaustive",
            OptMethod::GreedyBound => "greedy-bound",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptValue {
    pub value: f64,
    pub method: OptMethod,
    /// Upper bound on the true optimum when known (`2·greedy` for monotone
    /// objectives, the value itself for exhaustive search).
    pub upper_bound: Option<f64>,
}

/// Optimum (or greedy bound) over independent subsets of `V \ D`.
pub fn opt_value(instance: &Instance, deleted: &[ElementId], method: OptMethod) -> Result<OptValue> {
    let survivors: Vec<_> = (0..instance.n()).filter(|e| !deleted.contains(e)).collect();
    match method {
        OptMethod::Exhaustive => {
            let set = exhaustive_opt(&survivors, instance, EXHAUSTIVE_CAP)?;
            let value = instance.objective.value(&set)?;
            Ok(OptValue {
                value,
                method,
                upper_bound: Some(value),
            })
        }
        OptMethod::GreedyBound => {
            let set = greedy_matroid(&survivors, instance)?;
            let value = instance.objective.value(&set)?;
            Ok(OptValue {
                value,
                method,
                upper_bound: instance.objective.is_monotone().then_some(2.0 * value),
            })
        }
    }
}
