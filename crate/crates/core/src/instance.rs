//! Problem instances and their line-oriented text format.
//!
//! ```text
//! # comment
//! n=3
//! objective=weighted-coverage
//! universe=1,1,1
//! cover=0,1
//! cover=1,2
//! cover=
//! matroid=uniform k=2
//! tag=0 first
//! ```
//!
//! Keys per objective kind:
//!
//! * `weighted-coverage`: one `universe=<weights>` line and exactly `n`
//!   `cover=<universe ids>` lines, in element order (an empty list is allowed).
//! * `facility-location`: `clients=<c>` followed by `c` lines `sim=<n weights>`.
//! * `graph-cut`: any number of `edge=<u> <v> <w>` lines.
//! * `modular`: one `weights=<n weights>` line.
//!
//! Matroid line, exactly one of:
//!
//! * `matroid=uniform k=<int>`
//! * `matroid=partition blocks=<ids>;<ids>;... caps=<int>,<int>,...`
//! * `matroid=graphic vertices=<int> edgemap=<u>-<v>;<u>-<v>;...` (one pair per element)
//!
//! Optional `tag=<id> <text>` lines attach display tags. Unknown keys are
//! rejected.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{parse_err, Error, Result};
use crate::matroid::{Matroid, MatroidKind};
use crate::objective::{Element, ElementId, Objective, ObjectiveKind, ObjectiveKindName};

/// Ground set, objective oracle and matroid oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub objective: Objective,
    pub matroid: Matroid,
    tags: Vec<Option<String>>,
}

impl Instance {
    pub fn new(objective: Objective, matroid: Matroid) -> Result<Self> {
        if objective.n() != matroid.n() {
            return Err(Error::InvalidArgument(format!(
                "objective has {} elements but matroid has {}",
                objective.n(),
                matroid.n()
            )));
        }
        let tags = vec![None; objective.n()];
        Ok(Instance {
            objective,
            matroid,
            tags,
        })
    }

    pub fn n(&self) -> usize {
        self.objective.n()
    }

    pub fn k(&self) -> usize {
        self.matroid.rank()
    }

    pub fn with_tag(mut self, id: ElementId, tag: impl Into<String>) -> Result<Self> {
        if id >= self.n() {
            return Err(Error::InvalidArgument(format!("tag for unknown element {id}")));
        }
        self.tags[id] = Some(tag.into());
        Ok(self)
    }

    pub fn elements(&self) -> Vec<Element> {
        self.tags
            .iter()
            .enumerate()
            .map(|(id, tag)| Element {
                id,
                display_tag: tag.clone(),
            })
            .collect()
    }

    /// The same instance with a fresh objective query counter.
    pub fn fresh(&self) -> Self {
        Instance {
            objective: self.objective.fresh(),
            matroid: self.matroid.clone(),
            tags: self.tags.clone(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.n());
        let _ = writeln!(out, "objective={}", self.objective.kind_name());
        match self.objective.kind() {
            ObjectiveKind::WeightedCoverage {
                universe_weights,
                covers,
            } => {
                let _ = writeln!(out, "universe={}", join(universe_weights));
                for cover in covers {
                    let _ = writeln!(out, "cover={}", join(cover));
                }
            }
            ObjectiveKind::FacilityLocation { similarity } => {
                let _ = writeln!(out, "clients={}", similarity.len());
                for row in similarity {
                    let _ = writeln!(out, "sim={}", join(row));
                }
            }
            ObjectiveKind::GraphCut { edges, .. } => {
                for (u, v, w) in edges {
                    let _ = writeln!(out, "edge={u} {v} {w}");
                }
            }
            ObjectiveKind::Modular { weights } => {
                let _ = writeln!(out, "weights={}", join(weights));
            }
        }
        match self.matroid.kind() {
            MatroidKind::Uniform { k } => {
                let _ = writeln!(out, "matroid=uniform k={k}");
            }
            MatroidKind::Partition { blocks, caps, .. } => {
                let blocks = blocks.iter().map(|b| join(b)).collect::<Vec<_>>().join(";");
                let _ = writeln!(out, "matroid=partition blocks={blocks} caps={}", join(caps));
            }
            MatroidKind::Graphic {
                vertices,
                endpoints,
            } => {
                let map = endpoints
                    .iter()
                    .map(|(u, v)| format!("{u}-{v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                let _ = writeln!(out, "matroid=graphic vertices={vertices} edgemap={map}");
            }
        }
        for (id, tag) in self.tags.iter().enumerate() {
            if let Some(tag) = tag {
                let _ = writeln!(out, "tag={id} {tag}");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut kind: Option<ObjectiveKindName> = None;
        let mut universe: Option<Vec<f64>> = None;
        let mut covers: Vec<Vec<usize>> = Vec::new();
        let mut clients: Option<usize> = None;
        let mut sims: Vec<Vec<f64>> = Vec::new();
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        let mut weights: Option<Vec<f64>> = None;
        let mut matroid_line: Option<(usize, String)> = None;
        let mut tags: Vec<(usize, ElementId, String)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return parse_err(line_no, format!("expected key=value, got `{line}`"));
            };
            let key = key.trim();
            let value = value.trim();
            let need_kind = |want: ObjectiveKindName| -> Result<()> {
                if kind == Some(want) {
                    Ok(())
                } else {
                    parse_err(line_no, format!("key `{key}` requires objective={want}"))
                }
            };
            match key {
                "n" => {
                    if n.is_some() {
                        return parse_err(line_no, "duplicate n");
                    }
                    n = Some(parse_num(value, line_no)?);
                }
                "objective" => {
                    if n.is_none() {
                        return parse_err(line_no, "n must precede objective");
                    }
                    if kind.is_some() {
                        return parse_err(line_no, "duplicate objective");
                    }
                    kind = Some(ObjectiveKindName::parse(value).ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("unknown objective kind `{value}`"),
                    })?);
                }
                "universe" => {
                    need_kind(ObjectiveKindName::WeightedCoverage)?;
                    universe = Some(parse_list(value, line_no)?);
                }
                "cover" => {
                    need_kind(ObjectiveKindName::WeightedCoverage)?;
                    covers.push(parse_list(value, line_no)?);
                }
                "clients" => {
                    need_kind(ObjectiveKindName::FacilityLocation)?;
                    clients = Some(parse_num(value, line_no)?);
                }
                "sim" => {
                    need_kind(ObjectiveKindName::FacilityLocation)?;
                    sims.push(parse_list(value, line_no)?);
                }
                "edge" => {
                    need_kind(ObjectiveKindName::GraphCut)?;
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 3 {
                        return parse_err(line_no, "edge expects `u v w`");
                    }
                    edges.push((
                        parse_num(parts[0], line_no)?,
                        parse_num(parts[1], line_no)?,
                        parse_num(parts[2], line_no)?,
                    ));
                }
                "weights" => {
                    need_kind(ObjectiveKindName::Modular)?;
                    weights = Some(parse_list(value, line_no)?);
                }
                "matroid" => {
                    if matroid_line.is_some() {
                        return parse_err(line_no, "duplicate matroid");
                    }
                    matroid_line = Some((line_no, value.to_string()));
                }
                "tag" => {
                    let (id, text) = value.split_once(' ').unwrap_or((value, ""));
                    tags.push((line_no, parse_num(id, line_no)?, text.trim().to_string()));
                }
                _ => return parse_err(line_no, format!("unknown key `{key}`")),
            }
        }

        let n = n.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing n".into(),
        })?;
        let kind = kind.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing objective".into(),
        })?;
        let objective = match kind {
            ObjectiveKindName::WeightedCoverage => {
                if covers.len() != n {
                    return parse_err(0, format!("expected {n} cover lines, got {}", covers.len()));
                }
                let universe = universe.ok_or_else(|| Error::Parse {
                    line: 0,
                    message: "missing universe".into(),
                })?;
                Objective::weighted_coverage(universe, covers)?
            }
            ObjectiveKindName::FacilityLocation => {
                let c = clients.ok_or_else(|| Error::Parse {
                    line: 0,
                    message: "missing clients".into(),
                })?;
                if sims.len() != c {
                    return parse_err(0, format!("expected {c} sim rows, got {}", sims.len()));
                }
                if sims.iter().any(|r| r.len() != n) {
                    return parse_err(0, format!("every sim row must have {n} entries"));
                }
                if c == 0 {
                    return parse_err(0, "facility location needs at least one client");
                }
                Objective::facility_location(sims)?
            }
            ObjectiveKindName::GraphCut => Objective::cut_function(n, edges)?,
            ObjectiveKindName::Modular => {
                let w = weights.ok_or_else(|| Error::Parse {
                    line: 0,
                    message: "missing weights".into(),
                })?;
                if w.len() != n {
                    return parse_err(0, format!("expected {n} weights, got {}", w.len()));
                }
                Objective::modular(w)?
            }
        };
        let (mline, mtext) = matroid_line.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing matroid".into(),
        })?;
        let matroid = parse_matroid(&mtext, n, mline)?;
        let mut instance = Instance::new(objective, matroid)?;
        for (line, id, text) in tags {
            if id >= n {
                return parse_err(line, format!("tag for unknown element {id}"));
            }
            instance.tags[id] = Some(text);
        }
        Ok(instance)
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.trim().parse().or_else(|_| parse_err(line, format!("bad number `{s}`")))
}

pub(crate) fn parse_list<T: std::str::FromStr>(s: &str, line: usize) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_num(x, line)).collect()
}

fn parse_matroid(text: &str, n: usize, line: usize) -> Result<Matroid> {
    let mut parts = text.split_whitespace();
    let kind = parts.next().unwrap_or_default();
    let mut fields = std::collections::BTreeMap::new();
    for p in parts {
        let Some((k, v)) = p.split_once('=') else {
            return parse_err(line, format!("matroid field `{p}` is not key=value"));
        };
        fields.insert(k, v);
    }
    let take = |fields: &mut std::collections::BTreeMap<&str, &str>, key: &str| -> Result<String> {
        fields
            .remove(key)
            .map(str::to_string)
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("matroid={kind} requires {key}="),
            })
    };
    let matroid = match kind {
        "uniform" => {
            let k = parse_num(&take(&mut fields, "k")?, line)?;
            Matroid::uniform(n, k)
        }
        "partition" => {
            let blocks = take(&mut fields, "blocks")?
                .split(';')
                .map(|b| parse_list(b, line))
                .collect::<Result<Vec<Vec<usize>>>>()?;
            let caps = parse_list(&take(&mut fields, "caps")?, line)?;
            Matroid::partition(n, blocks, caps)?
        }
        "graphic" => {
            let vertices = parse_num(&take(&mut fields, "vertices")?, line)?;
            let map = take(&mut fields, "edgemap")?;
            let endpoints = if map.is_empty() {
                Vec::new()
            } else {
                map.split(';')
                    .map(|pair| {
                        let (u, v) = pair.split_once('-').ok_or_else(|| Error::Parse {
                            line,
                            message: format!("edge pair `{pair}` is not u-v"),
                        })?;
                        Ok((parse_num(u, line)?, parse_num(v, line)?))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            if endpoints.len() != n {
                return parse_err(line, format!("edgemap has {} pairs, n={n}", endpoints.len()));
            }
            Matroid::graphic(vertices, endpoints)?
        }
        other => return parse_err(line, format!("unknown matroid kind `{other}`")),
    };
    if let Some(extra) = fields.keys().next() {
        return parse_err(line, format!("unknown matroid field `{extra}`"));
    }
    Ok(matroid)
}

#[cfg(test)]
mod tests {
    use super::*;

    const COVERAGE: &str = "\
# tiny coverage instance
n=3
objective=weighted-coverage
universe=1,1,1
cover=0,1
cover=1,2
cover=
matroid=uniform k=2
tag=1 middle
";

    #[test]
    fn parses_coverage() {
        let inst = Instance::parse(COVERAGE).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.k(), 2);
        assert_eq!(inst.objective.value(&[0, 1]).unwrap(), 3.0);
        assert_eq!(inst.elements()[1].display_tag.as_deref(), Some("middle"));
    }

    #[test]
    fn round_trips_every_kind() {
        let texts = [
            COVERAGE.to_string(),
            "n=2\nobjective=facility-location\nclients=2\nsim=1,0\nsim=0,0.5\nmatroid=partition blocks=0;1 caps=1,1\n".into(),
            "n=3\nobjective=graph-cut\nedge=0 1 1.5\nedge=1 2 2\nmatroid=uniform k=1\n".into(),
            "n=4\nobjective=modular\nweights=1,2,3,0.25\nmatroid=graphic vertices=3 edgemap=0-1;1-2;0-2;2-0\n".into(),
        ];
        for (i, text) in texts.iter().enumerate() {
            let parsed = Instance::parse(text);
            if i == 3 {
                // 0-2 and 2-0 are parallel edges
                assert!(parsed.is_err());
                continue;
            }
            let inst = parsed.unwrap();
            let again = Instance::parse(&inst.to_text()).unwrap();
            assert_eq!(inst, again);
            assert_eq!(inst.to_text(), again.to_text());
        }
    }

    #[test]
    fn rejects_unknown_keys_and_mismatches() {
        assert!(Instance::parse("n=1\nobjective=modular\nweights=1\ncolor=red\nmatroid=uniform k=1\n").is_err());
        assert!(Instance::parse("n=2\nobjective=modular\nweights=1\nmatroid=uniform k=1\n").is_err());
        assert!(Instance::parse("n=1\nobjective=modular\nuniverse=1\nmatroid=uniform k=1\n").is_err());
        assert!(Instance::parse("n=1\nobjective=modular\nweights=1\nmatroid=uniform k=1 z=3\n").is_err());
        assert!(Instance::parse("n=1\nobjective=modular\nweights=1\n").is_err());
        assert!(Instance::parse("n=1\nobjective=knapsack\nmatroid=uniform k=1\n").is_err());
        let err = Instance::parse("n=1\nobjective=modular\nweights=-1\nmatroid=uniform k=1\n");
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }
}
