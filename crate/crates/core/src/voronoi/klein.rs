//! Projective (Klein) chart centered at a point. Halfspaces become Euclidean
//! halfspaces, so polytope questions reduce to linear programs.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::hyperboloid::{HalfSpace, Hyperplane, RealForm, Vector, EPS};

/// `a · k ≥ b` in chart coordinates, with `|a| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub a: Vec<f64>,
    pub b: f64,
}

impl LinearConstraint {
    pub fn eval(&self, k: &[f64]) -> f64 {
        self.a.iter().zip(k).map(|(x, y)| x * y).sum::<f64>() - self.b
    }

    /// Euclidean distance from the chart origin to the boundary plane.
    pub fn origin_distance(&self) -> f64 {
        self.b.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KleinChart {
    center: Vector,
    frame: Vec<Vector>,
}

impl KleinChart {
    /// Lorentz-orthonormal frame `(p, e₁, …, eₙ)` obtained by Gram–Schmidt on
    /// the coordinate vectors.
    pub fn new(form: &RealForm, p: &Vector) -> Self {
        let dim = form.dim();
        let mut frame: Vec<Vector> = Vec::with_capacity(dim - 1);
        for i in 0..dim {
            if frame.len() == dim - 1 {
                break;
            }
            let mut w = Vector::zeros(dim);
            w[i] = 1.0;
            w += p * form.bilinear(&w, p);
            for e in &frame {
                w -= e * form.bilinear(&w, e);
            }
            let q = form.quad(&w);
            if q > 1e-6 {
                frame.push(w / q.sqrt());
            }
        }
        KleinChart { center: p.clone(), frame }
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn to_chart(&self, form: &RealForm, x: &Vector) -> Vec<f64> {
        let x0 = -form.bilinear(x, &self.center);
        self.frame.iter().map(|e| form.bilinear(x, e) / x0).collect()
    }

    /// The vector `p + Σ kᵢ eᵢ`: time-like inside the unit ball, on the light
    /// cone on the sphere. Not normalized.
    pub fn lift(&self, k: &[f64]) -> Vector {
        let mut x = self.center.clone();
        for (e, c) in self.frame.iter().zip(k) {
            x += e * *c;
        }
        x
    }

    /// Sheet point for `|k| < 1`.
    pub fn point(&self, form: &RealForm, k: &[f64]) -> Vector {
        let x = self.lift(k);
        let q = form.quad(&x);
        x / (-q).sqrt()
    }

    /// Chart form of `b(x, u) ≥ 0` for the inward normal `u`.
    pub fn constraint(&self, form: &RealForm, hs: &HalfSpace) -> LinearConstraint {
        let u = hs.inward_normal();
        let a: Vec<f64> = self.frame.iter().map(|e| form.bilinear(&u, e)).collect();
        let b = -form.bilinear(&u, &self.center);
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        LinearConstraint { a: a.iter().map(|v| v / norm).collect(), b: b / norm }
    }

    /// Both sides of a hyperplane, as an equality `a · k = b`.
    pub fn plane(&self, form: &RealForm, h: &Hyperplane) -> LinearConstraint {
        self.constraint(form, &HalfSpace { plane: h.clone(), side: 1 })
    }
}

/// Unit directions whose tangent planes approximate a sphere, with the
/// covering angle: every unit vector is within that angle of some direction.
pub fn sphere_directions(n: usize) -> (Vec<Vec<f64>>, f64) {
    match n {
        1 => (vec![vec![1.0], vec![-1.0]], 0.0),
        2 => {
            let count = 96;
            let dirs = (0..count)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            (dirs, std::f64::consts::PI / count as f64)
        }
        3 => {
            // Fibonacci sphere; the covering angle was measured on a dense grid
            // and rounded up.
            let count = 400;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            let dirs = (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect();
            (dirs, 0.12)
        }
        _ => {
            let mut dirs = Vec::with_capacity(2 * n);
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut d = vec![0.0; n];
                    d[i] = s;
                    dirs.push(d);
                }
            }
            (dirs, (1.0 / (n as f64).sqrt()).acos())
        }
    }
}

/// Polytope constraints for a ball of radius `r`: containing it when
/// `outer`, contained in it otherwise.
pub fn ball_polytope(n: usize, r: f64, outer: bool) -> Vec<LinearConstraint> {
    let (dirs, theta) = sphere_directions(n);
    let h = if outer { r } else { r * theta.cos() };
    dirs.into_iter().map(|d| LinearConstraint { a: d.iter().map(|x| -x).collect(), b: -h }).collect()
}

/// Minimizes `c · k` over the constraints (plus optional equalities).
/// `None` if infeasible.
pub fn minimize(
    n: usize,
    objective: &[f64],
    ineq: &[&LinearConstraint],
    eq: &[&LinearConstraint],
) -> Option<(f64, Vec<f64>)> {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..n).map(|i| p.add_var(objective[i], (-4.0, 4.0))).collect();
    for c in ineq {
        p.add_constraint(vars.iter().zip(&c.a).map(|(v, a)| (*v, *a)).collect::<Vec<_>>(), ComparisonOp::Ge, c.b);
    }
    for c in eq {
        p.add_constraint(vars.iter().zip(&c.a).map(|(v, a)| (*v, *a)).collect::<Vec<_>>(), ComparisonOp::Eq, c.b);
    }
    let sol = p.solve().ok()?;
    Some((sol.objective(), vars.iter().map(|v| *sol.var_value(*v)).collect()))
}

/// Whether the constraints have a common point, with every inequality
/// satisfied with slack `margin`.
pub fn feasible(n: usize, ineq: &[&LinearConstraint], eq: &[&LinearConstraint], margin: f64) -> bool {
    let shifted: Vec<LinearConstraint> =
        ineq.iter().map(|c| LinearConstraint { a: c.a.clone(), b: c.b + margin }).collect();
    let refs: Vec<&LinearConstraint> = shifted.iter().collect();
    minimize(n, &vec![0.0; n], &refs, eq).is_some()
}

/// Smallest Euclidean norm over the constraints, by cutting planes on the
/// polyhedral norm `max a · k` over a growing direction set. Returns a lower
/// bound and the norm of a feasible point; `None` if infeasible.
pub fn min_norm(n: usize, ineq: &[&LinearConstraint], eq: &[&LinearConstraint]) -> Option<(f64, f64)> {
    let mut dirs: Vec<Vec<f64>> = (0..2 * n)
        .map(|i| {
            let mut d = vec![0.0; n];
            d[i / 2] = if i % 2 == 0 { 1.0 } else { -1.0 };
            d
        })
        .collect();
    let mut best = (0.0f64, f64::INFINITY);
    for _ in 0..200 {
        let mut p = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = (0..n).map(|_| p.add_var(0.0, (-4.0, 4.0))).collect();
        let t = p.add_var(1.0, (0.0, 8.0));
        for c in ineq {
            p.add_constraint(vars.iter().zip(&c.a).map(|(v, a)| (*v, *a)).collect::<Vec<_>>(), ComparisonOp::Ge, c.b);
        }
        for c in eq {
            p.add_constraint(vars.iter().zip(&c.a).map(|(v, a)| (*v, *a)).collect::<Vec<_>>(), ComparisonOp::Eq, c.b);
        }
        for d in &dirs {
            let mut row: Vec<_> = vars.iter().zip(d).map(|(v, a)| (*v, -*a)).collect();
            row.push((t, 1.0));
            p.add_constraint(row, ComparisonOp::Ge, 0.0);
        }
        let sol = p.solve().ok()?;
        let k: Vec<f64> = vars.iter().map(|v| *sol.var_value(*v)).collect();
        let norm = k.iter().map(|x| x * x).sum::<f64>().sqrt();
        best = (best.0.max(*sol.var_value(t)), best.1.min(norm));
        if best.1 - best.0 <= 1e-10 || norm <= 1e-12 {
            break;
        }
        dirs.push(k.iter().map(|x| x / norm).collect());
    }
    Some(best)
}

/// Indices of constraints that are not implied by the others within the
/// region. Duplicates keep the first copy; removal is sequential so that
/// mutually redundant pairs keep one member.
pub fn irredundant(n: usize, constraints: &[LinearConstraint], region: &[LinearConstraint]) -> Vec<usize> {
    let mut alive: Vec<usize> = Vec::new();
    for (i, c) in constraints.iter().enumerate() {
        let dup = alive.iter().any(|&j| {
            let d = &constraints[j];
            (d.b - c.b).abs() <= 1e-10 && d.a.iter().zip(&c.a).all(|(x, y)| (x - y).abs() <= 1e-10)
        });
        // a plane that misses the region on the far side is implied by it
        let slack = region_min(n, c, region);
        if !dup && slack.map_or(true, |s| s < -EPS) {
            alive.push(i);
        }
    }
    let mut k = 0;
    while k < alive.len() {
        let i = alive[k];
        let others: Vec<&LinearConstraint> = alive
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| &constraints[j])
            .chain(region.iter())
            .collect();
        let c = &constraints[i];
        let redundant = match minimize(n, &c.a, &others, &[]) {
            Some((value, _)) => value - c.b >= -EPS,
            None => true,
        };
        if redundant {
            alive.remove(k);
        } else {
            k += 1;
        }
    }
    alive
}

fn region_min(n: usize, c: &LinearConstraint, region: &[LinearConstraint]) -> Option<f64> {
    let refs: Vec<&LinearConstraint> = region.iter().collect();
    minimize(n, &c.a, &refs, &[]).map(|(v, _)| v - c.b)
}
