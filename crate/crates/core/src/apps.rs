//! Task builders: shortest-path probing on digraphs and non-adaptive
//! hiring, with their uncertainty sets and standard-form lifting.
//!
//! Both tasks carry inequality structure (unit edge capacities, hire caps,
//! 0/1 boxes), so they are lifted into standard form with slack
//! coordinates. The lifted cost space keeps the original coordinates in
//! front and pins the slack block's cost to zero inside the lifted
//! uncertainty set, which leaves sufficiency verdicts unchanged. Hiring
//! maximizes value; the embedding negates costs so the whole engine stays
//! minimization-only.

use crate::geometry::{GeometryError, Polyhedron, Vertex};
use crate::numlin::{self, RealMatrix, Subspace, ToleranceConfig};
use crate::sufficiency::{Dataset, DecisionDirections};
use crate::uncertainty::{Interpretation, UncertaintyError, UncertaintySet};
use std::collections::VecDeque;
use std::fmt;

#[derive(Debug, Clone)]
pub enum AppsError {
    BadGraph(String),
    NoPath,
    BadParameters(String),
    Geometry(GeometryError),
    Uncertainty(UncertaintyError),
}

impl fmt::Display for AppsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppsError::BadGraph(s) => write!(f, "bad graph: {s}"),
            AppsError::NoPath => write!(f, "no source-to-sink path exists"),
            AppsError::BadParameters(s) => write!(f, "bad parameters: {s}"),
            AppsError::Geometry(e) => write!(f, "{e}"),
            AppsError::Uncertainty(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AppsError {}

impl From<GeometryError> for AppsError {
    fn from(e: GeometryError) -> Self {
        AppsError::Geometry(e)
    }
}

impl From<UncertaintyError> for AppsError {
    fn from(e: UncertaintyError) -> Self {
        AppsError::Uncertainty(e)
    }
}

/// Directed graph with nominal edge weights and a source/sink pair.
#[derive(Debug, Clone)]
pub struct Digraph {
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Vec<f64>,
    pub source: usize,
    pub sink: usize,
}

impl Digraph {
    pub fn validate(&self) -> Result<(), AppsError> {
        if self.source == self.sink {
            return Err(AppsError::BadGraph("source equals sink".into()));
        }
        if self.source >= self.num_nodes || self.sink >= self.num_nodes {
            return Err(AppsError::BadGraph("endpoint out of range".into()));
        }
        if self.weights.len() != self.edges.len() {
            return Err(AppsError::BadGraph("weight count != edge count".into()));
        }
        for &(u, v) in &self.edges {
            if u >= self.num_nodes || v >= self.num_nodes {
                return Err(AppsError::BadGraph("edge endpoint out of range".into()));
            }
        }
        if !self.has_path() {
            return Err(AppsError::NoPath);
        }
        Ok(())
    }

    fn has_path(&self) -> bool {
        let mut seen = vec![false; self.num_nodes];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(u) = queue.pop_front() {
            if u == self.sink {
                return true;
            }
            for &(a, b) in &self.edges {
                if a == u && !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        false
    }

    /// n×n grid with rightward and downward edges in both directions;
    /// source top-left, sink bottom-right.
    pub fn grid(n: usize, weights: impl Fn(usize, usize) -> f64) -> Self {
        let id = |r: usize, c: usize| r * n + c;
        let mut edges = Vec::new();
        let mut w = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if c + 1 < n {
                    edges.push((id(r, c), id(r, c + 1)));
                    w.push(weights(id(r, c), id(r, c + 1)));
                    edges.push((id(r, c + 1), id(r, c)));
                    w.push(weights(id(r, c + 1), id(r, c)));
                }
                if r + 1 < n {
                    edges.push((id(r, c), id(r + 1, c)));
                    w.push(weights(id(r, c), id(r + 1, c)));
                    edges.push((id(r + 1, c), id(r, c)));
                    w.push(weights(id(r + 1, c), id(r, c)));
                }
            }
        }
        Digraph {
            num_nodes: n * n,
            edges,
            weights: w,
            source: 0,
            sink: n * n - 1,
        }
    }

    /// Parse the edge-list text format: `s <id>` and `t <id>` headers, then
    /// one `u v weight` triple per line. Node count is inferred.
    pub fn from_edge_list(text: &str) -> Result<Self, AppsError> {
        let mut source = None;
        let mut sink = None;
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        let mut max_node = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| AppsError::BadGraph(format!("line {}: {msg}", lineno + 1));
            match parts.as_slice() {
                ["s", id] => {
                    source = Some(id.parse::<usize>().map_err(|_| bad("bad source id"))?)
                }
                ["t", id] => sink = Some(id.parse::<usize>().map_err(|_| bad("bad sink id"))?),
                [u, v, w] => {
                    let u: usize = u.parse().map_err(|_| bad("bad node id"))?;
                    let v: usize = v.parse().map_err(|_| bad("bad node id"))?;
                    let w: f64 = w.parse().map_err(|_| bad("bad weight"))?;
                    max_node = max_node.max(u).max(v);
                    edges.push((u, v));
                    weights.push(w);
                }
                _ => return Err(bad("expected 's <id>', 't <id>' or 'u v w'")),
            }
        }
        let source = source.ok_or_else(|| AppsError::BadGraph("missing 's <id>' header".into()))?;
        let sink = sink.ok_or_else(|| AppsError::BadGraph("missing 't <id>' header".into()))?;
        let g = Digraph {
            num_nodes: max_node.max(source).max(sink) + 1,
            edges,
            weights,
            source,
            sink,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("s {}\nt {}\n", self.source, self.sink);
        for (&(u, v), w) in self.edges.iter().zip(self.weights.iter()) {
            out.push_str(&format!("{u} {v} {w}\n"));
        }
        out
    }
}

/// A task lifted to standard form: the polyhedron over original-plus-slack
/// coordinates, the injective cost embedding, and per-coordinate labels.
#[derive(Debug, Clone)]
pub struct LiftedTask {
    pub polyhedron: Polyhedron,
    /// Length of the original (user-facing) cost block.
    pub original_dim: usize,
    /// −1 for maximization tasks (costs are negated at the boundary).
    pub value_sign: f64,
    pub labels: Vec<String>,
}

impl LiftedTask {
    pub fn extended_dim(&self) -> usize {
        self.polyhedron.dim()
    }

    /// Map a user-space cost vector into the extended space.
    pub fn embed_cost(&self, c: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.extended_dim()];
        for (i, &v) in c.iter().enumerate() {
            out[i] = self.value_sign * v;
        }
        out
    }

    /// Map a user-space query vector into the extended space (no sign:
    /// queries observe the user cost).
    pub fn embed_query(&self, q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.extended_dim()];
        out[..q.len()].copy_from_slice(q);
        out
    }

    pub fn embed_dataset(&self, d: &Dataset) -> Dataset {
        Dataset {
            queries: d.queries.iter().map(|q| self.embed_query(q)).collect(),
            provenance: d.provenance.clone(),
        }
    }

    /// Restrict an extended vector to the original block.
    pub fn project_original(&self, v: &[f64]) -> Vec<f64> {
        v[..self.original_dim].to_vec()
    }

    /// Project extended decision directions onto the original block.
    /// Slack coordinates carry no cost, so sufficiency in the lifted space
    /// is equivalent to covering these projections.
    pub fn project_directions(
        &self,
        dirs: &DecisionDirections,
        tol: &ToleranceConfig,
    ) -> Result<Subspace, AppsError> {
        let proj: Vec<Vec<f64>> = dirs
            .basis
            .basis()
            .iter()
            .map(|v| {
                let mut p = self.project_original(v);
                if self.value_sign < 0.0 {
                    for x in p.iter_mut() {
                        *x = -*x;
                    }
                }
                p
            })
            .collect();
        Ok(numlin::orthonormalize_in(self.original_dim, &proj, tol)
            .map_err(GeometryError::Numeric)?)
    }

    /// Lift a user-space uncertainty set: original carrier rows apply to
    /// the (sign-adjusted) original block; the slack block is pinned to
    /// cost zero.
    pub fn lift_uncertainty(&self, c: &UncertaintySet) -> Result<UncertaintySet, AppsError> {
        if c.cost_dim() != self.original_dim {
            return Err(AppsError::BadParameters(format!(
                "uncertainty dimension {} != task dimension {}",
                c.cost_dim(),
                self.original_dim
            )));
        }
        let d0 = self.original_dim;
        let ext = self.extended_dim();
        let aux = c.aux_dim();
        let lift_row = |row: &[f64]| -> Vec<f64> {
            // user cost = sign * extended cost on the original block
            let mut out = vec![0.0; ext + aux];
            for i in 0..d0 {
                out[i] = self.value_sign * row[i];
            }
            for k in 0..aux {
                out[ext + k] = row[d0 + k];
            }
            out
        };
        let mut eq: Vec<(Vec<f64>, f64)> = c
            .eq_rows()
            .iter()
            .map(|(row, rhs)| (lift_row(row), *rhs))
            .collect();
        for j in d0..ext {
            let mut row = vec![0.0; ext + aux];
            row[j] = 1.0;
            eq.push((row, 0.0));
        }
        let ineq = c
            .ineq_rows()
            .iter()
            .map(|(row, rhs)| (lift_row(row), *rhs))
            .collect();
        // slack-pinning rows are inequalities-free, so an exact vector
        // space stays one
        Ok(UncertaintySet::new(ext, aux, ineq, eq, c.interpretation())?)
    }

    /// Translate an extended objective value back to user units.
    pub fn user_objective(&self, extended_objective: f64) -> f64 {
        self.value_sign * extended_objective
    }
}

/// Min-flow formulation of shortest path: conservation rows (one redundant
/// row dropped) plus `x_e + u_e = 1` capacity rows, which keep the
/// polyhedron bounded even on graphs with directed cycles.
pub fn build_shortest_path(g: &Digraph, tol: &ToleranceConfig) -> Result<LiftedTask, AppsError> {
    g.validate()?;
    let ne = g.edges.len();
    let ext = 2 * ne;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    for v in 0..g.num_nodes {
        if v == g.sink {
            continue; // conservation rows sum to zero; drop the sink's
        }
        let mut row = vec![0.0; ext];
        let mut nonzero = false;
        for (e, &(a, bnode)) in g.edges.iter().enumerate() {
            if a == v {
                row[e] += 1.0;
                nonzero = true;
            }
            if bnode == v {
                row[e] -= 1.0;
                nonzero = true;
            }
        }
        let rhs = if v == g.source { 1.0 } else { 0.0 };
        if nonzero || rhs != 0.0 {
            rows.push(row);
            b.push(rhs);
        }
    }
    for e in 0..ne {
        let mut row = vec![0.0; ext];
        row[e] = 1.0;
        row[ne + e] = 1.0;
        rows.push(row);
        b.push(1.0);
    }
    let a = RealMatrix::from_rows(&rows).map_err(GeometryError::Numeric)?;
    let polyhedron = Polyhedron::new(a, b, *tol)?;
    let mut labels: Vec<String> = g
        .edges
        .iter()
        .map(|&(u, v)| format!("edge {u}->{v}"))
        .collect();
    labels.extend(g.edges.iter().map(|&(u, v)| format!("cap {u}->{v}")));
    Ok(LiftedTask {
        polyhedron,
        original_dim: ne,
        value_sign: 1.0,
        labels,
    })
}

/// Hiring with a total cap and optional group caps, maximizing total value.
/// Constraints are totally unimodular, so vertices are 0/1 on the
/// candidate block.
pub fn build_hiring(
    n: usize,
    k: usize,
    group_caps: &[(Vec<usize>, usize)],
    tol: &ToleranceConfig,
) -> Result<LiftedTask, AppsError> {
    if k > n {
        return Err(AppsError::BadParameters(format!("k = {k} > n = {n}")));
    }
    for (members, cap) in group_caps {
        if members.iter().any(|&i| i >= n) {
            return Err(AppsError::BadParameters("group member out of range".into()));
        }
        if *cap > members.len() {
            return Err(AppsError::BadParameters(
                "group cap exceeds group size".into(),
            ));
        }
    }
    let g = group_caps.len();
    // layout: candidates (n) | total slack (1) | group slacks (g) | box slacks (n)
    let ext = n + 1 + g + n;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    let mut total = vec![0.0; ext];
    for i in 0..n {
        total[i] = 1.0;
    }
    total[n] = 1.0;
    rows.push(total);
    b.push(k as f64);
    for (j, (members, cap)) in group_caps.iter().enumerate() {
        let mut row = vec![0.0; ext];
        for &i in members {
            row[i] = 1.0;
        }
        row[n + 1 + j] = 1.0;
        rows.push(row);
        b.push(*cap as f64);
    }
    for i in 0..n {
        let mut row = vec![0.0; ext];
        row[i] = 1.0;
        row[n + 1 + g + i] = 1.0;
        rows.push(row);
        b.push(1.0);
    }
    let a = RealMatrix::from_rows(&rows).map_err(GeometryError::Numeric)?;
    let polyhedron = Polyhedron::new(a, b, *tol)?;
    let mut labels: Vec<String> = (0..n).map(|i| format!("candidate {i}")).collect();
    labels.push("slack total".to_string());
    labels.extend((0..g).map(|j| format!("slack group {j}")));
    labels.extend((0..n).map(|i| format!("slack box {i}")));
    Ok(LiftedTask {
        polyhedron,
        original_dim: n,
        value_sign: -1.0,
        labels,
    })
}

/// Box uncertainty `(1−ε)c₀ ≤ c ≤ (1+ε)c₀`, relative-interior
/// interpretation; `ε = 0` degenerates to the singleton `{c₀}`.
pub fn build_box_uncertainty(c0: &[f64], epsilon: f64) -> Result<UncertaintySet, AppsError> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(AppsError::BadParameters(format!(
            "epsilon {epsilon} outside [0, 1)"
        )));
    }
    let lo: Vec<f64> = c0.iter().map(|v| (1.0 - epsilon) * v).collect();
    let hi: Vec<f64> = c0.iter().map(|v| (1.0 + epsilon) * v).collect();
    let lo2: Vec<f64> = lo.iter().zip(hi.iter()).map(|(a, b)| a.min(*b)).collect();
    let hi2: Vec<f64> = lo.iter().zip(hi.iter()).map(|(a, b)| a.max(*b)).collect();
    Ok(UncertaintySet::box_set(&lo2, &hi2)?)
}

/// Which misspecification band the lifted feature model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MisspecMode {
    /// One band value per candidate: `c = φᵀα + e`, `e ∈ [−η, η]^d`.
    PerCandidate,
    /// A single shared scalar: `c = φᵀα + e·1`, `e ∈ [−η, η]`.
    SharedScalar,
}

/// Lifted feature uncertainty: costs explained by a box-bounded linear
/// model of the feature matrix (rows = features, columns = candidates)
/// up to a misspecification band of width η.
pub fn build_feature_uncertainty(
    phi: &RealMatrix,
    lower: &[f64],
    upper: &[f64],
    eta: f64,
    mode: MisspecMode,
) -> Result<UncertaintySet, AppsError> {
    let p = phi.nrows();
    let d = phi.ncols();
    if lower.len() != p || upper.len() != p {
        return Err(AppsError::BadParameters(
            "feature bound length != feature count".into(),
        ));
    }
    if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
        return Err(AppsError::BadParameters("lower bound above upper".into()));
    }
    if eta < 0.0 {
        return Err(AppsError::BadParameters("negative eta".into()));
    }
    let e_dim = if eta == 0.0 {
        0
    } else {
        match mode {
            MisspecMode::PerCandidate => d,
            MisspecMode::SharedScalar => 1,
        }
    };
    let aux = p + e_dim;
    let w = d + aux;
    let mut eq: Vec<(Vec<f64>, f64)> = Vec::new();
    for j in 0..d {
        // c_j − Σ_i φ_ij α_i − e_j = 0
        let mut row = vec![0.0; w];
        row[j] = 1.0;
        for i in 0..p {
            row[d + i] = -phi.get(i, j);
        }
        if e_dim > 0 {
            let e_idx = match mode {
                MisspecMode::PerCandidate => d + p + j,
                MisspecMode::SharedScalar => d + p,
            };
            row[e_idx] = -1.0;
        }
        eq.push((row, 0.0));
    }
    let mut ineq: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..p {
        if lower[i] == upper[i] {
            let mut row = vec![0.0; w];
            row[d + i] = 1.0;
            eq.push((row, lower[i]));
        } else {
            let mut row = vec![0.0; w];
            row[d + i] = 1.0;
            ineq.push((row.clone(), upper[i]));
            let mut neg = vec![0.0; w];
            neg[d + i] = -1.0;
            ineq.push((neg, -lower[i]));
        }
    }
    for j in 0..e_dim {
        let mut row = vec![0.0; w];
        row[d + p + j] = 1.0;
        ineq.push((row.clone(), eta));
        let mut neg = vec![0.0; w];
        neg[d + p + j] = -1.0;
        ineq.push((neg, eta));
    }
    Ok(UncertaintySet::new(
        d,
        aux,
        ineq,
        eq,
        Interpretation::RelativeInterior,
    )?)
}

/// Parse the hiring CSV format `id,gpa,experience` (headers allowed) into
/// a 2×n feature matrix with GPA in row 0 and experience in row 1.
pub fn parse_hiring_csv(text: &str) -> Result<RealMatrix, AppsError> {
    let mut gpa = Vec::new();
    let mut exp = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
        if parts.len() != 3 {
            return Err(AppsError::BadParameters(format!(
                "line {}: expected id,gpa,experience",
                lineno + 1
            )));
        }
        if parts[0] == "id" {
            continue; // header
        }
        let g: f64 = parts[1].parse().map_err(|_| {
            AppsError::BadParameters(format!("line {}: bad gpa", lineno + 1))
        })?;
        let e: f64 = parts[2].parse().map_err(|_| {
            AppsError::BadParameters(format!("line {}: bad experience", lineno + 1))
        })?;
        gpa.push(g);
        exp.push(e);
    }
    if gpa.is_empty() {
        return Err(AppsError::BadParameters("empty candidate pool".into()));
    }
    Ok(RealMatrix::from_rows(&[gpa, exp]).expect("equal-length rows"))
}

/// Flow-block 0/1 check for enumerated vertices (total unimodularity).
pub fn vertices_are_binary(verts: &[Vertex], block: usize, tol: f64) -> bool {
    verts.iter().all(|v| {
        v.point[..block]
            .iter()
            .all(|&x| x.abs() <= tol || (x - 1.0).abs() <= tol)
    })
}
