use hypglue::glueing::{
    assemble, base_graphs, count_graphs, count_proper_labelings, enumerate_graphs, growth_fit, proper_labelings,
    BaseGraph, GlueingError, GlueingGraph, LabelMode, PieceLabel, PieceSet, MAX_EXHAUSTIVE_M,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, CountArgs, Run};

/// Largest `m` at which every proper graph is assembled.
const EXHAUSTIVE_ASSEMBLY_M: usize = 6;

#[derive(Serialize)]
struct CountCsvRow {
    mode: &'static str,
    m: usize,
    base_count: u128,
    rooted_labelled_count: u128,
}

#[derive(Serialize)]
struct FitRow {
    mode: &'static str,
    alpha: f64,
    rows: usize,
    c: Option<f64>,
    intercept: Option<f64>,
    max_abs_residual: Option<f64>,
    degenerate: Option<bool>,
    note: String,
}

#[derive(Serialize)]
struct ResidualRow {
    mode: &'static str,
    m: usize,
    residual: f64,
}

#[derive(Serialize, Default)]
struct AssemblyRow {
    mode: &'static str,
    m: usize,
    method: &'static str,
    checked: usize,
    closed: usize,
    non_orientable: usize,
    cover_orientable: usize,
    volume_doubled: usize,
}

impl AssemblyRow {
    fn ok(&self) -> bool {
        [self.closed, self.non_orientable, self.cover_orientable, self.volume_doubled].iter().all(|&x| x == self.checked)
    }

    fn check(&mut self, g: &GlueingGraph, set: &PieceSet) -> Result<(), CliError> {
        let a = assemble(g, set).map_err(|e| CliError::Runtime(e.to_string()))?;
        self.checked += 1;
        let m = g.vertex_count();
        self.closed += (a.is_closed() && a.pairings().len() == 4 * m) as usize;
        self.non_orientable += (a.is_orientable() == Ok(false)) as usize;
        let cover = a.orientation_double_cover();
        self.cover_orientable += (cover.is_orientable() == Ok(true)) as usize;
        self.volume_doubled += ((cover.volume() - 2.0 * a.volume()).abs() <= 1e-9 * a.volume().max(1.0)) as usize;
        Ok(())
    }
}

fn modes(name: &str) -> Result<Vec<LabelMode>, CliError> {
    match name {
        "free" => Ok(vec![LabelMode::Free]),
        "proper" => Ok(vec![LabelMode::Proper]),
        "both" => Ok(vec![LabelMode::Free, LabelMode::Proper]),
        other => Err(CliError::Usage(format!("--mode must be free, proper or both, got {other:?}"))),
    }
}

/// Uniform sampler over rooted labelled graphs on `m` vertices.
struct GraphSampler {
    m: usize,
    mode: LabelMode,
    bases: Vec<BaseGraph>,
    /// Proper mode: running totals of labelings per base graph.
    cumulative: Vec<u128>,
}

impl GraphSampler {
    fn new(m: usize, mode: LabelMode) -> Result<Self, CliError> {
        let bases = base_graphs(m).map_err(|e| CliError::Runtime(e.to_string()))?;
        let cumulative = match mode {
            LabelMode::Free => Vec::new(),
            LabelMode::Proper => bases
                .iter()
                .scan(0u128, |acc, g| {
                    *acc += count_proper_labelings(g);
                    Some(*acc)
                })
                .collect(),
        };
        Ok(GraphSampler { m, mode, bases, cumulative })
    }

    /// `None` when the mode admits no graph on `m` vertices.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Option<GlueingGraph>, CliError> {
        let glue = |e: GlueingError| CliError::Runtime(e.to_string());
        if self.bases.is_empty() {
            return Ok(None);
        }
        let root = rng.gen_range(0..self.m);
        let (g, labels) = match self.mode {
            LabelMode::Free => {
                let g = self.bases[rng.gen_range(0..self.bases.len())];
                let labels = (0..2 * self.m).map(|_| PieceLabel::EDGE[rng.gen_range(0..4)]).collect();
                (g, labels)
            }
            LabelMode::Proper => {
                let total = *self.cumulative.last().expect("nonempty");
                if total == 0 {
                    return Ok(None);
                }
                let k = rng.gen_range(0..total);
                let b = self.cumulative.partition_point(|&c| c <= k);
                let before = if b == 0 { 0 } else { self.cumulative[b - 1] };
                let g = self.bases[b];
                let mut labelings = proper_labelings(&g);
                (g, labelings.swap_remove((k - before) as usize))
            }
        };
        Ok(Some(GlueingGraph::new(self.m, g.edges(), labels, root, self.mode).map_err(glue)?))
    }
}

pub fn count(ctx: &mut Run, a: CountArgs) -> Result<String, CliError> {
    let m_max: usize = ctx.config.require(a.m_max, "m-max")?;
    let mode_name: String = ctx.config.or(a.mode, "mode", "both".to_string())?;
    let modes = modes(&mode_name)?;
    let check = ctx.config.switch(a.check_assemblies, "check-assemblies")?;
    let samples: usize = ctx.config.or(a.samples, "samples", 200)?;
    let alpha: f64 = ctx.config.or(a.alpha, "alpha", 3.0)?;
    if m_max > MAX_EXHAUSTIVE_M {
        return Err(CliError::Usage(format!(
            "--m-max {m_max} exceeds the exhaustive enumeration bound; the feasible maximum is {MAX_EXHAUSTIVE_M}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(CliError::Usage(format!("--alpha must be positive, got {alpha}")));
    }
    if m_max < 5 {
        eprintln!("warning: no simple 4-regular graph has fewer than 5 vertices; the table is empty");
    }

    let mut counts = Vec::new();
    let mut fits = Vec::new();
    let mut residuals = Vec::new();
    for &mode in &modes {
        let rows = count_graphs(m_max, mode).map_err(|e| CliError::Runtime(e.to_string()))?;
        for r in &rows {
            counts.push(CountCsvRow {
                mode: mode.as_str(),
                m: r.m,
                base_count: r.base_count,
                rooted_labelled_count: r.rooted_labelled_count,
            });
        }
        if rows.is_empty() {
            continue;
        }
        // odd m has no proper labeling; fit the positive rows only
        let points: Vec<(usize, u128)> =
            rows.iter().filter(|r| r.rooted_labelled_count > 0).map(|r| (r.m, r.rooted_labelled_count)).collect();
        match growth_fit(&points, alpha) {
            Ok(fit) => {
                fits.push(FitRow {
                    mode: mode.as_str(),
                    alpha,
                    rows: points.len(),
                    c: Some(fit.c),
                    intercept: Some(fit.intercept),
                    max_abs_residual: Some(fit.max_abs_residual()),
                    degenerate: Some(fit.degenerate),
                    note: String::new(),
                });
                residuals.extend(fit.residuals.iter().map(|&(m, residual)| ResidualRow { mode: mode.as_str(), m, residual }));
            }
            Err(e) => fits.push(FitRow {
                mode: mode.as_str(),
                alpha,
                rows: points.len(),
                c: None,
                intercept: None,
                max_abs_residual: None,
                degenerate: None,
                note: e.to_string(),
            }),
        }
    }
    ctx.out.csv("counts.csv", &["mode", "m", "base_count", "rooted_labelled_count"], &counts)?;
    ctx.out.csv("fit.csv", &["mode", "alpha", "rows", "c", "intercept", "max_abs_residual", "degenerate", "note"], &fits)?;
    ctx.out.csv("residuals.csv", &["mode", "m", "residual"], &residuals)?;

    let mut summary = vec![format!("{} count rows", counts.len())];
    for f in &fits {
        match f.c {
            Some(c) => summary.push(format!("{} fit c = {c:.4}", f.mode)),
            None => summary.push(format!("{} fit skipped ({})", f.mode, f.note)),
        }
    }

    if check {
        let set = PieceSet::default();
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut rows = Vec::new();
        for &mode in &modes {
            for m in 5..=m_max {
                let mut row = AssemblyRow { mode: mode.as_str(), m, ..Default::default() };
                if mode == LabelMode::Proper && m <= EXHAUSTIVE_ASSEMBLY_M {
                    row.method = "exhaustive";
                    for g in enumerate_graphs(m, mode).map_err(|e| CliError::Runtime(e.to_string()))? {
                        row.check(&g, &set)?;
                    }
                } else {
                    row.method = "sampled";
                    let sampler = GraphSampler::new(m, mode)?;
                    for _ in 0..samples {
                        match sampler.sample(&mut rng)? {
                            Some(g) => row.check(&g, &set)?,
                            None => break,
                        }
                    }
                }
                rows.push(row);
            }
        }
        ctx.out.csv(
            "assemblies.csv",
            &["mode", "m", "method", "checked", "closed", "non_orientable", "cover_orientable", "volume_doubled"],
            &rows,
        )?;
        let checked: usize = rows.iter().map(|r| r.checked).sum();
        if let Some(bad) = rows.iter().find(|r| !r.ok()) {
            return Err(CliError::Failed(format!(
                "assembly check failed for {} m = {}: {}/{} closed, {} non-orientable, {} covers orientable, {} volumes doubled",
                bad.mode, bad.m, bad.closed, bad.checked, bad.non_orientable, bad.cover_orientable, bad.volume_doubled
            )));
        }
        summary.push(format!("{checked} assemblies all closed, all non-orientable, covers orientable with doubled volume"));
    }
    Ok(summary.join("; "))
}
