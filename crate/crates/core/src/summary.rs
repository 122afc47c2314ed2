//! The deletion-robust summary produced by either Phase I algorithm, and its
//! line-oriented file format.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::path::Path;

use crate::error::{parse_err, Error, Result};
use crate::instance::{parse_list, parse_num};
use crate::lattice::lattice_size_bound;
use crate::objective::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Centralized,
    Streaming,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "centralized" => Some(Mode::Centralized),
            "streaming" => Some(Mode::Streaming),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Centralized => "centralized",
            Mode::Streaming => "streaming",
        })
    }
}

/// One member of the candidate solution `A`.
///
/// For centralized summaries `marginal` is the marginal gain at insertion and
/// `exponent` the threshold exponent of the sweep that inserted it. For
/// streaming summaries `marginal` is the element's weight `w` and `exponent`
/// the bucket it was drained from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionEntry {
    pub id: ElementId,
    pub exponent: i32,
    pub marginal: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub exponent: i32,
    pub ids: Vec<ElementId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Counters {
    pub oracle_calls: u64,
    /// Elements that ended up in neither `A` nor `B`.
    pub discarded: usize,
    /// Centralized: lattice size. Streaming: most buckets alive at once.
    pub lattice_size: usize,
    /// Streaming only: max of `|A| + |V_d| + Σ|B_τ|` over the run.
    pub peak_memory: usize,
    /// Streaming only: rebucket moves to a strictly higher bucket.
    pub upward_moves: usize,
}

/// Streaming bookkeeping: where every drained or discarded element went.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StreamAudit {
    /// `K`: elements swapped out of `A`.
    pub swapped_out: Vec<ElementId>,
    /// `Γ`: every element drained from a bucket, in drain order.
    pub drained: Vec<ElementId>,
    /// `R`: drained elements rejected by the Bernoulli gate.
    pub rejected: Vec<ElementId>,
    /// `F`: drained elements that failed the swap test.
    pub failed: Vec<ElementId>,
    /// `L`: low-marginal discards.
    pub low: Vec<ElementId>,
    /// Every weight ever assigned, in assignment order.
    pub weight_log: Vec<(ElementId, f64)>,
}

impl StreamAudit {
    pub fn weight_of(&self, id: ElementId) -> Option<f64> {
        self.weight_log.iter().find(|(e, _)| *e == id).map(|(_, w)| *w)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mode: Mode,
    /// Path of the instance this summary was built from, when known.
    pub instance_path: Option<String>,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub epsilon: f64,
    pub monotone_mode: bool,
    pub gamma: Option<f64>,
    pub p: Option<f64>,
    pub seed: u64,
    pub bucket_cap: usize,
    pub delta: f64,
    /// `A`, in insertion order.
    pub solution: Vec<SolutionEntry>,
    /// `B = V_d ∪ leftover buckets`, sorted by id.
    pub reservoir: Vec<ElementId>,
    /// `V_d`, sorted by id.
    pub protected: Vec<ElementId>,
    /// Leftover buckets, highest exponent first.
    pub buckets: Vec<Bucket>,
    pub thresholds_used: Vec<i32>,
    pub counters: Counters,
    pub audit: Option<StreamAudit>,
}

impl Summary {
    pub fn solution_ids(&self) -> Vec<ElementId> {
        self.solution.iter().map(|e| e.id).collect()
    }

    /// `A ∪ B`, sorted and deduplicated.
    pub fn all_ids(&self) -> Vec<ElementId> {
        let set: BTreeSet<_> = self
            .solution
            .iter()
            .map(|e| e.id)
            .chain(self.reservoir.iter().copied())
            .collect();
        set.into_iter().collect()
    }

    /// `|A| + |B|`, counting `B` after deduplication against `A`.
    pub fn size(&self) -> usize {
        self.all_ids().len()
    }

    /// `k + d + L·cap` where `L = 1 + ⌈2 ln(k/ε)/ε⌉`.
    pub fn size_bound(&self) -> usize {
        self.k + self.d + lattice_size_bound(self.k, self.epsilon) * self.bucket_cap
    }

    /// Whether two summaries select the same elements (ignores counters).
    pub fn same_selection(&self, other: &Summary) -> bool {
        self.solution == other.solution
            && self.reservoir == other.reservoir
            && self.protected == other.protected
            && self.buckets == other.buckets
            && self.delta == other.delta
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes the summary; the streaming audit is included only with `audit`.
    pub fn save(&self, path: impl AsRef<Path>, audit: bool) -> Result<()> {
        std::fs::write(path, self.to_text(audit))?;
        Ok(())
    }

    pub fn to_text(&self, audit: bool) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "# robust-summary summary v1");
        let _ = writeln!(o, "mode={}", self.mode);
        if let Some(path) = &self.instance_path {
            let _ = writeln!(o, "instance={path}");
        }
        let _ = writeln!(o, "n={}", self.n);
        let _ = writeln!(o, "k={}", self.k);
        let _ = writeln!(o, "d={}", self.d);
        let _ = writeln!(o, "epsilon={}", self.epsilon);
        let _ = writeln!(o, "monotone={}", self.monotone_mode);
        if let Some(g) = self.gamma {
            let _ = writeln!(o, "gamma={g}");
        }
        if let Some(p) = self.p {
            let _ = writeln!(o, "p={p}");
        }
        let _ = writeln!(o, "seed={}", self.seed);
        let _ = writeln!(o, "bucket_cap={}", self.bucket_cap);
        let _ = writeln!(o, "delta={}", self.delta);
        let _ = writeln!(o, "thresholds={}", join(&self.thresholds_used));
        for e in &self.solution {
            let _ = writeln!(o, "a={} {} {}", e.id, e.exponent, e.marginal);
        }
        let _ = writeln!(o, "b={}", join(&self.reservoir));
        let _ = writeln!(o, "vd={}", join(&self.protected));
        for b in &self.buckets {
            let _ = writeln!(o, "bucket={} {}", b.exponent, join(&b.ids));
        }
        let c = &self.counters;
        let _ = writeln!(o, "counter.oracle_calls={}", c.oracle_calls);
        let _ = writeln!(o, "counter.discarded={}", c.discarded);
        let _ = writeln!(o, "counter.lattice_size={}", c.lattice_size);
        let _ = writeln!(o, "counter.peak_memory={}", c.peak_memory);
        let _ = writeln!(o, "counter.upward_moves={}", c.upward_moves);
        if let (true, Some(a)) = (audit, &self.audit) {
            let _ = writeln!(o, "audit.swapped={}", join(&a.swapped_out));
            let _ = writeln!(o, "audit.drained={}", join(&a.drained));
            let _ = writeln!(o, "audit.rejected={}", join(&a.rejected));
            let _ = writeln!(o, "audit.failed={}", join(&a.failed));
            let _ = writeln!(o, "audit.low={}", join(&a.low));
            for (id, w) in &a.weight_log {
                let _ = writeln!(o, "audit.weight={id} {w}");
            }
        }
        o
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Summary {
            mode: Mode::Centralized,
            instance_path: None,
            n: 0,
            k: 0,
            d: 0,
            epsilon: 0.0,
            monotone_mode: false,
            gamma: None,
            p: None,
            seed: 0,
            bucket_cap: 1,
            delta: 0.0,
            solution: Vec::new(),
            reservoir: Vec::new(),
            protected: Vec::new(),
            buckets: Vec::new(),
            thresholds_used: Vec::new(),
            counters: Counters::default(),
            audit: None,
        };
        let mut saw_mode = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let Some((key, value)) = raw.split_once('=') else {
                return parse_err(line, format!("expected key=value, got `{raw}`"));
            };
            let value = value.trim();
            if key.starts_with("audit.") && s.audit.is_none() {
                s.audit = Some(StreamAudit::default());
            }
            match key {
                "mode" => {
                    s.mode = Mode::parse(value).ok_or_else(|| Error::Parse {
                        line,
                        message: format!("unknown mode `{value}`"),
                    })?;
                    saw_mode = true;
                }
                "instance" => s.instance_path = Some(value.to_string()),
                "n" => s.n = parse_num(value, line)?,
                "k" => s.k = parse_num(value, line)?,
                "d" => s.d = parse_num(value, line)?,
                "epsilon" => s.epsilon = parse_num(value, line)?,
                "monotone" => s.monotone_mode = parse_num(value, line)?,
                "gamma" => s.gamma = Some(parse_num(value, line)?),
                "p" => s.p = Some(parse_num(value, line)?),
                "seed" => s.seed = parse_num(value, line)?,
                "bucket_cap" => s.bucket_cap = parse_num(value, line)?,
                "delta" => s.delta = parse_num(value, line)?,
                "thresholds" => s.thresholds_used = parse_list(value, line)?,
                "a" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 3 {
                        return parse_err(line, "a= expects `id exponent marginal`");
                    }
                    s.solution.push(SolutionEntry {
                        id: parse_num(parts[0], line)?,
                        exponent: parse_num(parts[1], line)?,
                        marginal: parse_num(parts[2], line)?,
                    });
                }
                "b" => s.reservoir = parse_list(value, line)?,
                "vd" => s.protected = parse_list(value, line)?,
                "bucket" => {
                    let (exp, ids) = value.split_once(' ').unwrap_or((value, ""));
                    s.buckets.push(Bucket {
                        exponent: parse_num(exp, line)?,
                        ids: parse_list(ids, line)?,
                    });
                }
                "counter.oracle_calls" => s.counters.oracle_calls = parse_num(value, line)?,
                "counter.discarded" => s.counters.discarded = parse_num(value, line)?,
                "counter.lattice_size" => s.counters.lattice_size = parse_num(value, line)?,
                "counter.peak_memory" => s.counters.peak_memory = parse_num(value, line)?,
                "counter.upward_moves" => s.counters.upward_moves = parse_num(value, line)?,
                _ if key.starts_with("audit.") => {
                    let a = s.audit.as_mut().expect("initialized above");
                    match &key["audit.".len()..] {
                        "swapped" => a.swapped_out = parse_list(value, line)?,
                        "drained" => a.drained = parse_list(value, line)?,
                        "rejected" => a.rejected = parse_list(value, line)?,
                        "failed" => a.failed = parse_list(value, line)?,
                        "low" => a.low = parse_list(value, line)?,
                        "weight" => {
                            let (id, w) = value.split_once(' ').ok_or_else(|| Error::Parse {
                                line,
                                message: "audit.weight expects `id weight`".into(),
                            })?;
                            a.weight_log.push((parse_num(id, line)?, parse_num(w, line)?));
                        }
                        other => return parse_err(line, format!("unknown audit key `{other}`")),
                    }
                }
                _ => return parse_err(line, format!("unknown key `{key}`")),
            }
        }
        if !saw_mode {
            return parse_err(0, "missing mode");
        }
        Ok(s)
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
