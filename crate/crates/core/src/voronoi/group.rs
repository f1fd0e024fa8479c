use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::VoronoiError;
use crate::hyperboloid::{Hyperplane, Matrix, RealForm, Vector, EPS};

/// A word in the generators. Letter `2i` is generator `i`, `2i + 1` its
/// inverse; involutions only use the even letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn inverse_letter(l: u8, involution: &[bool]) -> u8 {
        if involution[(l / 2) as usize] {
            l
        } else {
            l ^ 1
        }
    }

    pub fn inverse(&self, involution: &[bool]) -> Word {
        Word(self.0.iter().rev().map(|&l| Self::inverse_letter(l, involution)).collect())
    }
}

impl fmt::Display for Word {
    /// Generators are `a, b, c, …`; inverses are upper case; `e` is the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for &l in &self.0 {
            let c = (b'a' + l / 2) as char;
            let c = if l % 2 == 1 { c.to_ascii_uppercase() } else { c };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Generators of a desk group, the marked hyperplane lifts, and the declared
/// translation-length floor `R`.
#[derive(Debug, Clone)]
pub struct GroupData {
    form: RealForm,
    generators: Vec<Matrix>,
    inverses: Vec<Matrix>,
    involution: Vec<bool>,
    marked: Vec<Hyperplane>,
    r_floor: f64,
}

impl GroupData {
    /// Checks that every generator is an isometry of the upper sheet and that
    /// every generator not stabilizing `horizontal` translates by at least `r_floor`.
    pub fn new(
        form: RealForm,
        generators: Vec<Matrix>,
        marked: Vec<Hyperplane>,
        r_floor: f64,
        horizontal: Option<&Hyperplane>,
    ) -> Result<Self, VoronoiError> {
        let n = form.dim();
        let f = form.gram();
        let mut inverses = Vec::with_capacity(generators.len());
        let mut involution = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if !form.is_isometry(g) || !form.is_orthochronous(g) {
                return Err(VoronoiError::NotAnIsometry(i));
            }
            let stabilizes = horizontal.is_some_and(|h| form.map_hyperplane(g, h).approx_eq(h));
            if !stabilizes && form.translation_length(g) < r_floor - 1e-9 {
                return Err(VoronoiError::BelowFloor { generator: i, length: form.translation_length(g), floor: r_floor });
            }
            // A⁻¹ = F⁻¹AᵀF for an isometry
            let inv = Matrix::from_fn(n, n, |r, c| g[(c, r)] * f[(c, c)] / f[(r, r)]);
            involution.push((g * g - Matrix::identity(n, n)).amax() <= EPS * g.amax().max(1.0).powi(2));
            inverses.push(inv);
        }
        Ok(GroupData { form, generators, inverses, involution, marked, r_floor })
    }

    pub fn form(&self) -> &RealForm {
        &self.form
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn marked(&self) -> &[Hyperplane] {
        &self.marked
    }

    pub fn r_floor(&self) -> f64 {
        self.r_floor
    }

    pub fn involutions(&self) -> &[bool] {
        &self.involution
    }

    pub fn letter(&self, l: u8) -> &Matrix {
        let i = (l / 2) as usize;
        if l % 2 == 0 {
            &self.generators[i]
        } else {
            &self.inverses[i]
        }
    }

    pub fn letters(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for i in 0..self.generators.len() {
            out.push(2 * i as u8);
            if !self.involution[i] {
                out.push(2 * i as u8 + 1);
            }
        }
        out
    }

    pub fn word_matrix(&self, w: &Word) -> Matrix {
        let n = self.form.dim();
        w.0.iter().fold(Matrix::identity(n, n), |acc, &l| acc * self.letter(l))
    }

    /// All reduced words of length ≤ `cutoff` with their matrices, ordered by
    /// length and then lexicographically.
    pub fn reduced_words(&self, cutoff: usize) -> Vec<(Word, Matrix)> {
        let n = self.form.dim();
        let letters = self.letters();
        let mut out = vec![(Word::default(), Matrix::identity(n, n))];
        let mut frontier = out.clone();
        for _ in 0..cutoff {
            let next: Vec<(Word, Matrix)> = frontier
                .par_iter()
                .flat_map_iter(|(w, m)| {
                    let last = w.0.last().copied();
                    letters
                        .iter()
                        .filter(move |&&l| last.map_or(true, |p| Word::inverse_letter(p, &self.involution) != l))
                        .map(move |&l| {
                            let mut word = w.clone();
                            word.0.push(l);
                            (word, m * self.letter(l))
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Conjugates everything by `g`: generators `g h g⁻¹`, marked lifts `g·H`.
    pub fn conjugated(&self, g: &Matrix) -> Result<Self, VoronoiError> {
        let n = self.form.dim();
        let f = self.form.gram();
        let g_inv = Matrix::from_fn(n, n, |r, c| g[(c, r)] * f[(c, c)] / f[(r, r)]);
        let generators = self.generators.iter().map(|h| g * h * &g_inv).collect();
        let marked = self.marked.iter().map(|h| self.form.map_hyperplane(g, h)).collect();
        GroupData::new(self.form.clone(), generators, marked, 0.0, None).map(|mut d| {
            d.r_floor = self.r_floor;
            d
        })
    }

    /// Images of the marked hyperplanes under words of length ≤ `cutoff`, deduplicated.
    pub fn marked_lifts(&self, cutoff: usize) -> Vec<Hyperplane> {
        let mut out: Vec<Hyperplane> = Vec::new();
        for (_, m) in self.reduced_words(cutoff) {
            for h in &self.marked {
                let image = self.form.map_hyperplane(&m, h);
                if !out.iter().any(|o| o.approx_eq(&image)) {
                    out.push(image);
                }
            }
        }
        out
    }
}

/// An orbit point `g · seed`.
#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub point: Vector,
    pub seed: usize,
    pub word: Word,
    pub matrix: Matrix,
}

/// Truncated orbit of a finite seed set.
#[derive(Debug, Clone)]
pub struct OrbitSet {
    pub form: RealForm,
    pub points: Vec<OrbitPoint>,
    pub seeds: Vec<Vector>,
    /// Omitted orbit points lie farther than `2ρ` from every seed.
    pub certification_radius: f64,
    pub cutoff: usize,
    pub involution: Vec<bool>,
}

fn same_point(a: &Vector, b: &Vector) -> bool {
    let scale = a.amax().max(b.amax()).max(1.0);
    (a - b).amax() <= 1e-9 * scale
}

/// Images of the seeds under all reduced words of length ≤ `cutoff`.
///
/// The certification radius is `(rate · cutoff − D) / 2`, where `D` is the
/// seed diameter and `rate` the smallest observed displacement per letter,
/// `min d(s, w·s) / |w|` over seeds and enumerated words. The per-letter rate
/// never exceeds the minimal generator displacement, so this is at most the
/// plain bound `(δ_min · cutoff − D) / 2`.
pub fn build_orbit(seeds: &[Vector], group: &GroupData, cutoff: usize) -> Result<OrbitSet, VoronoiError> {
    if cutoff == 0 {
        return Err(VoronoiError::ZeroCutoff);
    }
    let form = group.form();
    for s in seeds {
        if !form.is_on_sheet(s) {
            return Err(VoronoiError::Geometry(crate::hyperboloid::GeomError::OffSheet(format!("{s:?}"))));
        }
    }
    let words = group.reduced_words(cutoff);
    let mut points: Vec<OrbitPoint> = Vec::new();
    for (word, matrix) in &words {
        for (i, s) in seeds.iter().enumerate() {
            let p = matrix * s;
            if !points.iter().any(|q| same_point(&q.point, &p)) {
                points.push(OrbitPoint { point: p, seed: i, word: word.clone(), matrix: matrix.clone() });
            }
        }
    }
    let mut diameter: f64 = 0.0;
    for a in seeds {
        for b in seeds {
            diameter = diameter.max(form.distance_unchecked(a, b));
        }
    }
    let certification_radius = if group.generators().is_empty() {
        f64::INFINITY
    } else {
        let rate = words
            .par_iter()
            .filter(|(w, _)| !w.is_empty())
            .map(|(w, m)| {
                seeds
                    .iter()
                    .map(|s| form.distance_unchecked(s, &(m * s)) / w.len() as f64)
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min);
        ((rate * cutoff as f64 - diameter) / 2.0).max(0.0)
    };
    Ok(OrbitSet {
        form: form.clone(),
        points,
        seeds: seeds.to_vec(),
        certification_radius,
        cutoff,
        involution: group.involutions().to_vec(),
    })
}

impl OrbitSet {
    pub fn index_of(&self, x: &Vector) -> Option<usize> {
        self.points.iter().position(|q| same_point(&q.point, x))
    }

    /// Nearest orbit point to `x` and its distance.
    pub fn nearest(&self, x: &Vector) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, q) in self.points.iter().enumerate() {
            let d = self.form.distance_unchecked(x, &q.point);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// Distance from `x` to the nearest seed.
    pub fn seed_distance(&self, x: &Vector) -> f64 {
        self.seeds.iter().map(|s| self.form.distance_unchecked(x, s)).fold(f64::INFINITY, f64::min)
    }
}
