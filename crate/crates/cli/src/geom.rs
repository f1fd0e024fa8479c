use hypglue::hyperboloid::{BoundarySphere, Nesting, RealForm, Vector};
use hypglue::voronoi::scenes::{
    bisect_orthogonal_threshold, crossing_pair, geodesic, orthogonal_threshold, schottky_pair,
};
use hypglue::voronoi::{
    build_admissible_set, is_admissible, orthogonal_extension, sphere_shrink_report, surface_gaps, AdmissibleSet,
    AdmissibleVerdict, FacetType, MarkedSurface, PoincareFailure, SegmentEnd, VoronoiCell, VoronoiError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::NumberList;
use crate::svg::{self, Disk, PRIMITIVE_HEADER};
use crate::{AdmissibleArgs, CliError, ExtensionArgs, NestingArgs, Run, ShrinkArgs};

const CELL_NAMES: [&str; 2] = ["H", "V"];

fn runtime(e: VoronoiError) -> CliError {
    CliError::Runtime(e.to_string())
}

fn positive(x: f64, key: &str) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{key} must be positive, got {x}")))
    }
}

fn cutoff(ctx: &mut Run, flag: Option<usize>, default: usize) -> Result<usize, CliError> {
    let c = ctx.config.or(flag, "cutoff", default)?;
    if c == 0 {
        return Err(CliError::Usage("--cutoff must be at least 1".into()));
    }
    Ok(c)
}

fn angle(ctx: &mut Run, flag: Option<f64>) -> Result<f64, CliError> {
    let deg = ctx.config.or(flag, "angle", 90.0)?;
    if !(deg > 0.0 && deg < 180.0) {
        return Err(CliError::Usage(format!("--angle must be strictly between 0 and 180 degrees, got {deg}")));
    }
    Ok(deg.to_radians())
}

fn disk_point(form: &RealForm, x: &Vector) -> Result<[f64; 2], CliError> {
    let b = form.ball_coordinates(x).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok([b[0], b[1]])
}

fn segment_end(cell: &VoronoiCell, e: &SegmentEnd) -> Result<[f64; 2], CliError> {
    disk_point(&cell.form, &cell.lift(e))
}

fn draw_cell(disk: &mut Disk, cell: &VoronoiCell, name: &str, color: &'static str) -> Result<(), CliError> {
    for s in cell.facet_segments() {
        let label = format!("{name}:{}", cell.faces[s.face].word);
        disk.segment(&label, color, segment_end(cell, &s.start)?, segment_end(cell, &s.end)?);
    }
    Ok(())
}

fn figure(ctx: &mut Run, name: &str, title: &str, disk: &Disk) -> Result<(), CliError> {
    ctx.out.text(&format!("{name}.svg"), &disk.render(title))?;
    ctx.out.csv(&format!("{name}_svg.csv"), &PRIMITIVE_HEADER, disk.rows())
}

fn kind_name(k: Option<FacetType>) -> &'static str {
    match k {
        Some(FacetType::First) => "first",
        Some(FacetType::Second) => "second",
        None => "",
    }
}

#[derive(Serialize)]
struct NestingRow {
    h_facet: String,
    v_facet: String,
    verdict: &'static str,
}

#[derive(Serialize)]
struct PoincareRow {
    item: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct ThresholdRow {
    len_h: f64,
    analytic: f64,
    bisected: Option<f64>,
    difference: Option<f64>,
}

pub fn nesting(ctx: &mut Run, a: NestingArgs) -> Result<String, CliError> {
    let angle = angle(ctx, a.angle)?;
    let len_h = positive(ctx.config.or(a.len_h, "lenH", 1.0)?, "lenH")?;
    let len_v = positive(ctx.config.or(a.len_v, "lenV", 6.0)?, "lenV")?;
    let cutoff = cutoff(ctx, a.cutoff, 3)?;
    let bisect = ctx.config.switch(a.bisect, "bisect")?;
    if bisect && angle != std::f64::consts::FRAC_PI_2 {
        return Err(CliError::Usage("--bisect needs --angle 90".into()));
    }
    let scene = crossing_pair(angle, len_h, len_v).map_err(runtime)?;
    let form = scene.group.form();
    let (cells, report) = scene.factor_report(cutoff).map_err(runtime)?;
    let word = |cell: usize, face: usize| format!("{}:{}", CELL_NAMES[cell], cells[cell].faces[face].word);

    let mut pairs = Vec::new();
    for (i, h) in cells[0].faces.iter().enumerate() {
        for (j, v) in cells[1].faces.iter().enumerate() {
            let verdict = match form.nesting(&h.halfspace, &v.halfspace, &scene.seeds[0]) {
                Ok(Nesting::Nested { first_inside: true }) => "nested, H inside",
                Ok(Nesting::Nested { first_inside: false }) => "nested, V inside",
                Ok(Nesting::Crossing) => "crossing",
                Ok(Nesting::DisjointNotNested) => "disjoint, not nested",
                Ok(Nesting::Equal) => "equal",
                Err(_) => "undefined",
            };
            pairs.push(NestingRow { h_facet: word(0, i), v_facet: word(1, j), verdict });
        }
    }
    ctx.out.csv("nesting_pairs.csv", &["h_facet", "v_facet", "verdict"], &pairs)?;

    let mut rows = vec![
        PoincareRow { item: "passed", detail: report.passed().to_string() },
        PoincareRow { item: "free_rank", detail: report.free_rank.map_or(String::new(), |r| r.to_string()) },
        PoincareRow { item: "vertex_cycles", detail: report.cycles.len().to_string() },
    ];
    for f in &report.failures {
        let detail = match f {
            PoincareFailure::Nested { inner, outer } => {
                format!("{} inside {}", word(inner.cell, inner.face), word(outer.cell, outer.face))
            }
            other => serde_json::to_string(other).expect("failures serialize"),
        };
        rows.push(PoincareRow { item: "failure", detail });
    }
    ctx.out.csv("poincare.csv", &["item", "detail"], &rows)?;

    let mut extra = String::new();
    if bisect {
        let analytic = orthogonal_threshold(len_h);
        let found =
            bisect_orthogonal_threshold(len_h, 0.5 * analytic, 2.0 * analytic, 1e-4, cutoff).map_err(runtime)?;
        let row = ThresholdRow { len_h, analytic, bisected: found, difference: found.map(|b| b - analytic) };
        ctx.out.csv("threshold.csv", &["len_h", "analytic", "bisected", "difference"], &[row])?;
        extra = match found {
            Some(b) => format!("; bisected threshold {b:.4} (analytic {analytic:.4})"),
            None => "; bisection bracket does not straddle the threshold".into(),
        };
    }

    let mut disk = Disk::new();
    for (k, (p, t)) in scene.axes.iter().enumerate() {
        let h = geodesic(form, p, t).map_err(runtime)?;
        disk.geodesic(&format!("axis {}", CELL_NAMES[k]), svg::MARKED, form, &h);
    }
    draw_cell(&mut disk, &cells[0], "H", svg::FIRST)?;
    draw_cell(&mut disk, &cells[1], "V", svg::SECOND)?;
    if let Some((inner, outer)) = report.nested_witness() {
        for f in [inner, outer] {
            disk.geodesic(&format!("nested {}", word(f.cell, f.face)), svg::WITNESS, form, &cells[f.cell].faces[f.face].halfspace.plane);
        }
    }
    figure(ctx, "nesting", &scene.name, &disk)?;

    let verdict = if report.passed() {
        format!("no nesting, Poincaré pass (free rank {})", report.free_rank.map_or("?".into(), |r| r.to_string()))
    } else if let Some((inner, outer)) = report.nested_witness() {
        format!("nested pair found: {} inside {}", word(inner.cell, inner.face), word(outer.cell, outer.face))
    } else {
        let kinds: Vec<String> = report
            .failures
            .iter()
            .map(|f| serde_json::to_value(f).ok().and_then(|v| v.as_object().and_then(|o| o.keys().next().cloned())).unwrap_or_default())
            .collect();
        format!("Poincaré fail: {}", kinds.join(", "))
    };
    Ok(verdict + &extra)
}

#[derive(Serialize)]
struct PointRow {
    set: &'static str,
    surface: usize,
    position: f64,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct VerdictRow {
    set: &'static str,
    points: usize,
    cutoff_used: usize,
    attempts: usize,
    admissible: bool,
    surface: Option<usize>,
    gap: Option<f64>,
    witness_x: Option<f64>,
    witness_y: Option<f64>,
}

#[derive(Serialize)]
struct GapRow {
    surface: usize,
    length: f64,
    gap: f64,
    points: usize,
    spacing: f64,
}

const MAX_SPARSE_ATTEMPTS: usize = 64;

pub fn admissible(ctx: &mut Run, a: AdmissibleArgs) -> Result<String, CliError> {
    let dist = positive(ctx.config.or(a.dist, "dist", 1.0)?, "dist")?;
    let len1 = positive(ctx.config.or(a.len1, "len1", 4.0)?, "len1")?;
    let len2 = positive(ctx.config.or(a.len2, "len2", 4.0)?, "len2")?;
    let cutoff = cutoff(ctx, a.cutoff, 4)?;
    let scene = schottky_pair(dist, len1, len2).map_err(runtime)?;
    let form = scene.group.form();
    let surfaces: Vec<MarkedSurface> = scene
        .axes
        .iter()
        .zip([len1, len2])
        .map(|((p, t), length)| MarkedSurface { start: p.clone(), tangent: t.clone(), length })
        .collect();

    // far samples may need longer words than the set itself; raise the cutoff
    let decide = |set: &AdmissibleSet| -> Result<(AdmissibleVerdict, usize), CliError> {
        for c in cutoff..=cutoff + 3 {
            match is_admissible(set, &surfaces, &scene.group, c) {
                Err(VoronoiError::Undecidable) => continue,
                other => return other.map(|v| (v, c)).map_err(runtime),
            }
        }
        Err(runtime(VoronoiError::Undecidable))
    };

    // one random point per surface; spacing is sufficient, not necessary, so
    // draw until the pair is not admissible
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut attempts = 0;
    let (sparse_t, sparse, sparse_verdict, sparse_cutoff) = loop {
        attempts += 1;
        let t: Vec<f64> = surfaces.iter().map(|s| rng.gen_range(0.0..s.length)).collect();
        let set = AdmissibleSet { points: t.iter().enumerate().map(|(i, &t)| (surfaces[i].at(form, t), i)).collect() };
        let (v, c) = decide(&set)?;
        if !v.is_admissible() || attempts == MAX_SPARSE_ATTEMPTS {
            break (t, set, v, c);
        }
    };
    let dense = build_admissible_set(&surfaces, &scene.group, cutoff).map_err(runtime)?;
    let gaps = surface_gaps(&surfaces, &scene.group, cutoff).map_err(runtime)?;

    let mut points = Vec::new();
    for (i, &t) in sparse_t.iter().enumerate() {
        let [x, y] = disk_point(form, &sparse.points[i].0)?;
        points.push(PointRow { set: "sparse", surface: i, position: t, x, y });
    }
    let mut counts = vec![0usize; surfaces.len()];
    for (p, i) in &dense.points {
        let [x, y] = disk_point(form, p)?;
        let position = surfaces[*i].length * counts[*i] as f64;
        counts[*i] += 1;
        points.push(PointRow { set: "spaced", surface: *i, position, x, y });
    }
    // positions along each surface are k·length/count
    for row in points.iter_mut().filter(|r| r.set == "spaced") {
        row.position /= counts[row.surface] as f64;
    }
    ctx.out.csv("admissible_points.csv", &["set", "surface", "position", "x", "y"], &points)?;

    let gap_rows: Vec<GapRow> = surfaces
        .iter()
        .enumerate()
        .map(|(i, s)| GapRow { surface: i, length: s.length, gap: gaps[i], points: counts[i], spacing: s.length / counts[i] as f64 })
        .collect();
    ctx.out.csv("admissible_gaps.csv", &["surface", "length", "gap", "points", "spacing"], &gap_rows)?;

    let (dense_verdict, dense_cutoff) = decide(&dense)?;
    let mut rows = Vec::new();
    for (name, set, v, cutoff_used, attempts) in [
        ("sparse", &sparse, &sparse_verdict, sparse_cutoff, attempts),
        ("spaced", &dense, &dense_verdict, dense_cutoff, 1),
    ] {
        rows.push(match v {
            AdmissibleVerdict::Admissible => VerdictRow {
                set: name,
                points: set.points.len(),
                cutoff_used,
                attempts,
                admissible: true,
                surface: None,
                gap: None,
                witness_x: None,
                witness_y: None,
            },
            AdmissibleVerdict::Violation { witness, surface, gap } => VerdictRow {
                set: name,
                points: set.points.len(),
                cutoff_used,
                attempts,
                admissible: false,
                surface: Some(*surface),
                gap: Some(*gap),
                witness_x: Some(witness[0]),
                witness_y: Some(witness[1]),
            },
        });
    }
    ctx.out.csv("admissible.csv", &["set", "points", "cutoff_used", "attempts", "admissible", "surface", "gap", "witness_x", "witness_y"], &rows)?;

    let mut disk = Disk::new();
    for (k, h) in scene.group.marked_lifts(cutoff).iter().enumerate() {
        disk.geodesic(&format!("lift {k}"), svg::FAINT, form, h);
    }
    for (k, (p, t)) in scene.axes.iter().enumerate() {
        disk.geodesic(&format!("surface {k}"), svg::MARKED, form, &geodesic(form, p, t).map_err(runtime)?);
    }
    for r in &points {
        let color = if r.set == "sparse" { svg::SECOND } else { svg::POINT };
        disk.point(&format!("{} point on surface {}", r.set, r.surface), color, [r.x, r.y]);
    }
    for r in rows.iter().filter(|r| !r.admissible) {
        if let (Some(x), Some(y)) = (r.witness_x, r.witness_y) {
            disk.point(&format!("{} witness", r.set), svg::WITNESS, [x, y]);
        }
    }
    figure(ctx, "admissible", &scene.name, &disk)?;

    let sparse_text = match &sparse_verdict {
        AdmissibleVerdict::Admissible => format!("no non-admissible sparse set in {attempts} draws"),
        AdmissibleVerdict::Violation { surface, gap, .. } => {
            format!("sparse set not admissible (surface {surface}, gap {gap:.6}, draw {attempts})")
        }
    };
    if !dense_verdict.is_admissible() {
        return Err(CliError::Failed(format!("{sparse_text}; spaced set of {} points not admissible", dense.points.len())));
    }
    Ok(format!("{sparse_text}; spaced set of {} points admissible", dense.points.len()))
}

#[derive(Serialize)]
struct ShrinkCsvRow {
    r: f64,
    facet_type: &'static str,
    facet: String,
    radius: f64,
}

#[derive(Serialize)]
struct ShrinkSummaryRow {
    r: f64,
    first_min: Option<f64>,
    first_max: Option<f64>,
    second_max: Option<f64>,
    factor: Option<f64>,
}

pub fn shrink(ctx: &mut Run, a: ShrinkArgs) -> Result<String, CliError> {
    let len_h = positive(ctx.config.or(a.len_h, "lenH", 1.0)?, "lenH")?;
    let list = ctx.config.or(a.r.map(NumberList::Text), "R", NumberList::Text("2,4,8".into()))?;
    let rs = list.values("R")?;
    let cutoff = cutoff(ctx, a.cutoff, 3)?;
    if rs.is_empty() || rs.iter().any(|&r| !(r > 0.0)) || rs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("--R must be positive and strictly increasing".into()));
    }
    let rows = sphere_shrink_report(len_h, &rs, cutoff).map_err(runtime)?;
    let csv_rows: Vec<ShrinkCsvRow> = rows
        .iter()
        .map(|r| ShrinkCsvRow { r: r.r, facet_type: kind_name(Some(r.facet_type)), facet: r.word.clone(), radius: r.radius })
        .collect();
    ctx.out.csv("shrink.csv", &["R", "facet_type", "facet", "radius"], &csv_rows)?;

    let mut summary: Vec<ShrinkSummaryRow> = Vec::new();
    for &r in &rs {
        let of = |t: FacetType| rows.iter().filter(move |x| x.r == r && x.facet_type == t).map(|x| x.radius);
        let first_min = of(FacetType::First).reduce(f64::min);
        let first_max = of(FacetType::First).reduce(f64::max);
        let second_max = of(FacetType::Second).reduce(f64::max);
        let factor = match (summary.last().and_then(|p| p.second_max), second_max) {
            (Some(prev), Some(cur)) => Some(prev / cur),
            _ => None,
        };
        summary.push(ShrinkSummaryRow { r, first_min, first_max, second_max, factor });
    }
    ctx.out.csv("shrink_summary.csv", &["R", "first_min", "first_max", "second_max", "factor"], &summary)?;

    let mut disk = Disk::new();
    disk.segment("H axis", svg::MARKED, [-1.0, 0.0], [1.0, 0.0]);
    for r in &rows {
        let (p, q) = svg::ideal_endpoints(&r.sphere);
        let color = if r.facet_type == FacetType::First { svg::FIRST } else { svg::SECOND };
        disk.segment(&format!("R={} {} ({})", r.r, r.word, kind_name(Some(r.facet_type))), color, p, q);
    }
    figure(ctx, "shrink", &format!("boundary circles, lenH = {len_h}"), &disk)?;

    let firsts: Vec<f64> = rows.iter().filter(|r| r.facet_type == FacetType::First).map(|r| r.radius).collect();
    let spread = firsts.iter().copied().fold(f64::NEG_INFINITY, f64::max) - firsts.iter().copied().fold(f64::INFINITY, f64::min);
    if firsts.is_empty() || spread > 1e-9 {
        return Err(CliError::Failed(format!("first-type radii are not constant (spread {spread:e})")));
    }
    if summary.iter().any(|s| s.second_max.is_none()) {
        return Err(CliError::Failed("some R has no second-type facet".into()));
    }
    if summary.iter().any(|s| s.factor.is_some_and(|f| !(f > 1.0))) {
        return Err(CliError::Failed("second-type radii do not strictly decrease".into()));
    }
    let table: Vec<String> =
        summary.iter().map(|s| format!("R={}: {:.6}", s.r, s.second_max.unwrap_or(f64::NAN))).collect();
    Ok(format!("second-type radii decrease ({}); first-type radius constant {:.6}", table.join(", "), firsts[0]))
}

#[derive(Serialize)]
struct ExtensionRow {
    cell: &'static str,
    facet: String,
    inherited: &'static str,
    reclassified: &'static str,
    orthogonal_to_horizontal: bool,
    sphere_x: f64,
    sphere_y: f64,
    sphere_z: f64,
    radius: f64,
}

pub fn extension(ctx: &mut Run, a: ExtensionArgs) -> Result<String, CliError> {
    let angle = angle(ctx, a.angle)?;
    let len_h = positive(ctx.config.or(a.len_h, "lenH", 1.0)?, "lenH")?;
    let len_v = positive(ctx.config.or(a.len_v, "lenV", 6.0)?, "lenV")?;
    let q = positive(ctx.config.or(a.q, "q", 1.0)?, "q")?;
    let cutoff = cutoff(ctx, a.cutoff, 3)?;
    let scene = crossing_pair(angle, len_h, len_v).map_err(runtime)?;
    let form = scene.group.form();
    let lifts = scene.group.marked_lifts(cutoff);
    let cells = scene.factor_cells(cutoff).map_err(runtime)?;

    let mut rows = Vec::new();
    let mut disk = Disk::new();
    for (k, (p, t)) in scene.axes.iter().enumerate() {
        disk.geodesic(&format!("axis {}", CELL_NAMES[k]), svg::MARKED, form, &geodesic(form, p, t).map_err(runtime)?);
    }
    for (k, cell) in cells.iter().enumerate() {
        let ext = orthogonal_extension(&cell.classify_facets(&lifts), q).map_err(runtime)?;
        let g = &ext.form;
        let up: Vec<_> = lifts.iter().filter_map(|h| g.hyperplane(&h.normal().clone().insert_row(g.dim() - 1, 0.0)).ok()).collect();
        let reclassified = ext.classify_facets(&up);
        let mut e = Vector::zeros(g.dim());
        e[g.dim() - 1] = 1.0;
        let horizontal = g.hyperplane(&e).map_err(|e| CliError::Runtime(e.to_string()))?;
        for (f, r) in ext.faces.iter().zip(&reclassified.faces) {
            let sphere = g.boundary_sphere(&f.halfspace.plane);
            let (c, radius) = match &sphere {
                BoundarySphere::Sphere { center, radius } => (center.clone(), *radius),
                BoundarySphere::Plane { .. } => (vec![0.0; 3], f64::INFINITY),
            };
            let facet = format!("{}:{}", CELL_NAMES[k], f.word);
            let (p, q) = svg::ideal_endpoints(&sphere);
            let color = if f.kind == Some(FacetType::First) { svg::FIRST } else { svg::SECOND };
            disk.segment(&format!("{facet} ({})", kind_name(f.kind)), color, p, q);
            rows.push(ExtensionRow {
                cell: CELL_NAMES[k],
                facet,
                inherited: kind_name(f.kind),
                reclassified: kind_name(r.kind),
                orthogonal_to_horizontal: g.are_orthogonal(&f.halfspace.plane, &horizontal),
                sphere_x: c[0],
                sphere_y: c[1],
                sphere_z: c[2],
                radius,
            });
        }
    }
    ctx.out.csv(
        "extension.csv",
        &["cell", "facet", "inherited", "reclassified", "orthogonal_to_horizontal", "sphere_x", "sphere_y", "sphere_z", "radius"],
        &rows,
    )?;
    figure(ctx, "extension", &format!("{} extended with q = {q}, top view", scene.name), &disk)?;
    let bad_angle = rows.iter().filter(|r| !r.orthogonal_to_horizontal).count();
    let bad_kind = rows.iter().filter(|r| r.inherited != r.reclassified).count();
    if bad_angle + bad_kind > 0 {
        return Err(CliError::Failed(format!(
            "{bad_angle} facets not orthogonal to the horizontal hyperplane, {bad_kind} facet types changed"
        )));
    }
    Ok(format!("{} facets extended, all orthogonal to the horizontal hyperplane, facet types preserved", rows.len()))
}
