//! Diagonal quadratic forms over `k`: signatures, admissibility, orthogonal
//! sums, restriction to `v⊥`, discriminant certificates and the six-form
//! family used to build the counting pieces.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::glueing::PieceLabel;
use crate::numfield::{Embedding, FieldElement, FieldError, FieldTag};

/// A k-vector.
pub type KVector = Vec<FieldElement>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("degenerate form: coefficient {0} is zero")]
    Degenerate(usize),
    #[error("empty form")]
    Empty,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldTag, FieldTag),
    #[error("vector is isotropic (f(v) = 0)")]
    Isotropic,
    #[error("invalid extension coefficient {0}: must be a positive rational")]
    InvalidExtension(String),
    #[error("counting family needs n >= 2, got {0}")]
    DimensionTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positives, self.negatives)
    }
}

/// A non-degenerate diagonal quadratic form `Σ cᵢ xᵢ²` over `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    field: FieldTag,
    coefficients: Vec<FieldElement>,
}

/// JSON shape: `{"field": "Q(sqrt2)", "coefficients": ["-r2", "1", "1"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDescriptor {
    pub field: FieldTag,
    pub coefficients: Vec<String>,
}

impl DiagonalForm {
    pub fn new(field: FieldTag, coefficients: Vec<FieldElement>) -> Result<Self, FormError> {
        if coefficients.is_empty() {
            return Err(FormError::Empty);
        }
        for (i, c) in coefficients.iter().enumerate() {
            if c.field() != field {
                return Err(FormError::FieldMismatch(field, c.field()));
            }
            if c.is_zero() {
                return Err(FormError::Degenerate(i));
            }
        }
        Ok(DiagonalForm { field, coefficients })
    }

    pub fn from_ints(field: FieldTag, coefficients: &[i64]) -> Result<Self, FormError> {
        Self::new(field, coefficients.iter().map(|&c| FieldElement::from_int(c, field)).collect())
    }

    /// Parses comma separated coefficients in the textual element format.
    pub fn parse(field: FieldTag, coefficients: &str) -> Result<Self, FormError> {
        let coeffs = coefficients
            .split(',')
            .map(|s| FieldElement::parse(s, field))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, coeffs)
    }

    /// `J_n = −x₀² + x₁² + … + xₙ²`.
    pub fn lorentzian(n: usize, field: FieldTag) -> Self {
        let mut c = vec![FieldElement::one(field); n + 1];
        c[0] = FieldElement::from_int(-1, field);
        DiagonalForm { field, coefficients: c }
    }

    /// `f_n`: leading coefficient −2 over ℚ, −√2 over ℚ(√2), then `n` ones.
    pub fn counting_base(n: usize, field: FieldTag) -> Self {
        let mut c = vec![FieldElement::one(field); n + 1];
        c[0] = match field {
            FieldTag::Rationals => FieldElement::from_int(-2, field),
            FieldTag::RationalsSqrt2 => -FieldElement::sqrt2(),
        };
        DiagonalForm { field, coefficients: c }
    }

    pub fn from_descriptor(d: &FormDescriptor) -> Result<Self, FormError> {
        let coeffs = d
            .coefficients
            .iter()
            .map(|s| FieldElement::parse(s, d.field))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(d.field, coeffs)
    }

    pub fn descriptor(&self) -> FormDescriptor {
        FormDescriptor {
            field: self.field,
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coefficients
    }

    /// Number of variables (`n + 1` for a form on `k^{n+1}`).
    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    pub fn signature_at(&self, embedding: Embedding) -> Signature {
        let positives = self.coefficients.iter().filter(|c| c.sign_at(embedding) > 0).count();
        Signature { positives, negatives: self.dimension() - positives }
    }

    /// Signature `(n,1)` at the identity and definite `(n+1,0)` at every other embedding.
    pub fn is_admissible(&self) -> bool {
        let dim = self.dimension();
        self.field.embeddings().iter().all(|&e| {
            let sig = self.signature_at(e);
            match e {
                Embedding::Identity => sig.negatives == 1 && dim >= 2,
                _ => sig.negatives == 0,
            }
        })
    }

    /// Product of the coefficients.
    pub fn discriminant(&self) -> FieldElement {
        self.coefficients
            .iter()
            .fold(FieldElement::one(self.field), |acc, c| &acc * c)
    }

    fn check_vector(&self, v: &[FieldElement]) -> Result<(), FormError> {
        if v.len() != self.dimension() {
            return Err(FormError::DimensionMismatch(self.dimension(), v.len()));
        }
        if let Some(x) = v.iter().find(|x| x.field() != self.field) {
            return Err(FormError::FieldMismatch(self.field, x.field()));
        }
        Ok(())
    }

    /// `f(v)`.
    pub fn evaluate(&self, v: &[FieldElement]) -> Result<FieldElement, FormError> {
        self.bilinear(v, v)
    }

    /// `b_f(u, w) = Σ cᵢ uᵢ wᵢ`.
    pub fn bilinear(&self, u: &[FieldElement], w: &[FieldElement]) -> Result<FieldElement, FormError> {
        self.check_vector(u)?;
        self.check_vector(w)?;
        Ok(self
            .coefficients
            .iter()
            .zip(u.iter().zip(w))
            .fold(FieldElement::zero(self.field), |acc, (c, (x, y))| acc + c * &(x * y)))
    }

    /// `f ⊕ ⟨q⟩` for a positive rational `q`, the extension used to embed a
    /// manifold one dimension up.
    pub fn direct_sum(&self, q: &FieldElement) -> Result<Self, FormError> {
        if q.field() != self.field {
            return Err(FormError::FieldMismatch(self.field, q.field()));
        }
        if !q.is_rational() || q.sign() <= 0 {
            return Err(FormError::InvalidExtension(q.to_string()));
        }
        Ok(self.with_appended(q.clone()))
    }

    /// Appends any nonzero coefficient. Used for `f_{n−1} + p·x²` with a
    /// totally positive prime `p` of the ring of integers.
    pub fn with_appended(&self, c: FieldElement) -> Self {
        assert!(!c.is_zero(), "appending a zero coefficient");
        let mut coefficients = self.coefficients.clone();
        coefficients.push(c);
        DiagonalForm { field: self.field, coefficients }
    }

    /// Applies a permutation: result coefficient `i` is `self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        DiagonalForm {
            field: self.field,
            coefficients: perm.iter().map(|&i| self.coefficients[i].clone()).collect(),
        }
    }

    /// Restriction of `f` to `v⊥`, re-diagonalized over `k`.
    pub fn restrict_to_orthogonal(&self, v: &[FieldElement]) -> Result<DiagonalForm, FormError> {
        Ok(self.orthogonal_complement(v)?.form)
    }

    /// A `b_f`-orthogonal basis of `v⊥` together with the diagonal form it induces.
    ///
    /// The basis of `v⊥` comes from the reduced row echelon form of the single
    /// equation `Σ cᵢvᵢwᵢ = 0` (pivot on the first nonzero entry), with
    /// denominators cleared; the Gram matrix is then diagonalized by symmetric
    /// elimination.
    pub fn orthogonal_complement(&self, v: &[FieldElement]) -> Result<OrthogonalComplement, FormError> {
        self.check_vector(v)?;
        if self.evaluate(v)?.is_zero() {
            return Err(FormError::Isotropic);
        }
        let field = self.field;
        let row: Vec<FieldElement> = self.coefficients.iter().zip(v).map(|(c, x)| c * x).collect();
        let pivot = row.iter().position(|x| !x.is_zero()).expect("f(v) ≠ 0 implies v ≠ 0");
        let mut basis = Vec::with_capacity(self.dimension() - 1);
        for j in (0..self.dimension()).filter(|&j| j != pivot) {
            let mut w = vec![FieldElement::zero(field); self.dimension()];
            w[j] = FieldElement::one(field);
            w[pivot] = -(&row[j] / &row[pivot]);
            basis.push(clear_denominators(w));
        }
        let gram = GramMatrix::of(self, &basis)?;
        let (diag, basis) = gram.diagonalize(basis);
        Ok(OrthogonalComplement { form: DiagonalForm::new(field, diag)?, basis })
    }

    /// Sound non-equivalence certificate from the discriminant square class.
    pub fn equivalence_certificate(&self, other: &DiagonalForm) -> Result<Certificate, FormError> {
        if self.field != other.field {
            return Err(FormError::FieldMismatch(self.field, other.field));
        }
        if self.dimension() != other.dimension() {
            return Err(FormError::DimensionMismatch(self.dimension(), other.dimension()));
        }
        let ratio = &self.discriminant() / &other.discriminant();
        if ratio.is_square() {
            Ok(Certificate::Unknown)
        } else {
            Ok(Certificate::NonEquivalent(format!(
                "discriminant ratio {ratio} is not a square in {}",
                self.field
            )))
        }
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

fn clear_denominators(w: Vec<FieldElement>) -> Vec<FieldElement> {
    let lcm = w
        .iter()
        .fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, &x.denominator_lcm()));
    if lcm == BigInt::from(1) {
        return w;
    }
    let field = w[0].field();
    let scale = FieldElement::rational(BigRational::from_integer(lcm), field);
    w.into_iter().map(|x| &x * &scale).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalComplement {
    /// Diagonal form with `form[i] = f(basis[i])`.
    pub form: DiagonalForm,
    /// Pairwise `b_f`-orthogonal basis of `v⊥`.
    pub basis: Vec<KVector>,
}

/// A symmetric matrix over `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    entries: Vec<Vec<FieldElement>>,
}

impl GramMatrix {
    /// Gram matrix of `basis` under `b_f`.
    pub fn of(form: &DiagonalForm, basis: &[KVector]) -> Result<Self, FormError> {
        let mut entries = Vec::with_capacity(basis.len());
        for u in basis {
            let mut row = Vec::with_capacity(basis.len());
            for w in basis {
                row.push(form.bilinear(u, w)?);
            }
            entries.push(row);
        }
        Ok(GramMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Congruence-diagonalizes the matrix, applying the same column
    /// operations to `basis`. Returns the diagonal and the transformed basis.
    /// Panics if the matrix is singular.
    pub fn diagonalize(&self, mut basis: Vec<KVector>) -> (Vec<FieldElement>, Vec<KVector>) {
        let n = self.size();
        let mut g = self.entries.clone();
        for i in 0..n {
            if g[i][i].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !g[j][j].is_zero()) {
                    g.swap(i, j);
                    for row in g.iter_mut() {
                        row.swap(i, j);
                    }
                    basis.swap(i, j);
                } else if let Some(j) = (i + 1..n).find(|&j| !g[i][j].is_zero()) {
                    // all remaining diagonal entries vanish: e_i += e_j gives 2·g_ij ≠ 0
                    for k in 0..n {
                        let add = g[j][k].clone();
                        g[i][k] = &g[i][k] + &add;
                    }
                    for k in 0..n {
                        let add = g[k][j].clone();
                        g[k][i] = &g[k][i] + &add;
                    }
                    let bj = basis[j].clone();
                    basis[i] = basis[i].iter().zip(&bj).map(|(x, y)| x + y).collect();
                } else {
                    panic!("singular Gram matrix");
                }
            }
            let pivot = g[i][i].clone();
            for j in i + 1..n {
                if g[j][i].is_zero() {
                    continue;
                }
                let factor = &g[j][i] / &pivot;
                for k in 0..n {
                    let sub = &factor * &g[i][k];
                    g[j][k] = &g[j][k] - &sub;
                }
                for k in 0..n {
                    let sub = &factor * &g[k][i];
                    g[k][j] = &g[k][j] - &sub;
                }
                let bi = basis[i].clone();
                basis[j] = basis[j].iter().zip(&bi).map(|(x, y)| x - &(&factor * y)).collect();
            }
        }
        ((0..n).map(|i| g[i][i].clone()).collect(), basis)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    NonEquivalent(String),
    Unknown,
}

impl Certificate {
    pub fn is_non_equivalent(&self) -> bool {
        matches!(self, Certificate::NonEquivalent(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub label: PieceLabel,
    /// Totally positive prime element of the ring of integers.
    pub prime: FieldElement,
    pub form: DiagonalForm,
}

/// `f_{n−1}` and the six forms `f^x = f_{n−1} + p_x·x_n²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingFamily {
    pub n: usize,
    pub field: FieldTag,
    pub base: DiagonalForm,
    pub members: Vec<FamilyMember>,
}

impl CountingFamily {
    /// Pairwise certificates, in `(i, j)` order with `i < j`.
    pub fn certificates(&self) -> Vec<(usize, usize, Certificate)> {
        let mut out = Vec::new();
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                let c = self.members[i]
                    .form
                    .equivalence_certificate(&self.members[j].form)
                    .expect("family members share field and dimension");
                out.push((i, j, c));
            }
        }
        out
    }
}

/// Builds the six-form family in dimension `n` by a greedy search over primes
/// of the ring of integers in increasing norm.
pub fn build_counting_family(n: usize, field: FieldTag) -> Result<CountingFamily, FormError> {
    if n < 2 {
        return Err(FormError::DimensionTooSmall(n));
    }
    let base = DiagonalForm::counting_base(n - 1, field);
    let mut bound = 64u64;
    loop {
        let mut chosen: Vec<(FieldElement, DiagonalForm)> = Vec::new();
        for p in primes_by_norm(field, bound) {
            let form = base.with_appended(p.clone());
            let independent = chosen
                .iter()
                .all(|(_, g)| form.equivalence_certificate(g).map(|c| c.is_non_equivalent()).unwrap_or(false));
            if independent && form.is_admissible() {
                chosen.push((p, form));
                if chosen.len() == PieceLabel::ALL.len() {
                    let members = PieceLabel::ALL
                        .iter()
                        .zip(chosen)
                        .map(|(&label, (prime, form))| FamilyMember { label, prime, form })
                        .collect();
                    return Ok(CountingFamily { n, field, base, members });
                }
            }
        }
        bound *= 4;
    }
}

fn rational_primes(bound: u64) -> Vec<u64> {
    let mut sieve = vec![true; bound as usize + 1];
    let mut out = Vec::new();
    for i in 2..=bound as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= bound as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn isqrt_exact(x: u64) -> Option<u64> {
    let r = (x as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == x)
}

/// Solves `a² − 2b² = ±p` by search over `b`; `None` means `p` stays prime in ℤ[√2].
pub fn split_prime(p: u64) -> Option<(i64, i64)> {
    for b in 0..=p {
        let tb = 2 * b * b;
        if let Some(a) = isqrt_exact(p + tb) {
            return Some((a as i64, b as i64));
        }
        if tb >= p {
            if let Some(a) = isqrt_exact(tb - p) {
                return Some((a as i64, b as i64));
            }
        }
    }
    None
}

/// The totally positive associate of `x` with the smallest trace.
pub fn totally_positive_associate(x: &FieldElement) -> FieldElement {
    let field = x.field();
    let mut y = x.clone();
    if field == FieldTag::Rationals {
        return if y.sign() < 0 { -y } else { y };
    }
    if y.norm() < BigRational::from_integer(0.into()) {
        y = &y * &FieldElement::from_ints(1, 1, field);
    }
    if y.sign() < 0 {
        y = -y;
    }
    let up = FieldElement::from_ints(3, 2, field);
    let down = FieldElement::from_ints(3, -2, field);
    loop {
        let a = &y * &down;
        let b = &y * &up;
        if a.trace() < y.trace() {
            y = a;
        } else if b.trace() < y.trace() {
            y = b;
        } else {
            return y;
        }
    }
}

/// Totally positive prime elements of the ring of integers with norm at most
/// `bound`, one per prime ideal, sorted by (norm, trace, text).
pub fn primes_by_norm(field: FieldTag, bound: u64) -> Vec<FieldElement> {
    match field {
        FieldTag::Rationals => rational_primes(bound)
            .into_iter()
            .map(|p| FieldElement::from_int(p as i64, field))
            .collect(),
        FieldTag::RationalsSqrt2 => {
            let mut out: Vec<(u64, FieldElement)> = Vec::new();
            for p in rational_primes(bound) {
                match split_prime(p) {
                    Some((a, b)) => {
                        let pi = totally_positive_associate(&FieldElement::from_ints(a, b, field));
                        let conj = totally_positive_associate(&pi.galois_conjugate());
                        let same_ideal = (&pi / &conj).is_integral() && (&conj / &pi).is_integral();
                        out.push((p, pi));
                        if !same_ideal {
                            out.push((p, conj));
                        }
                    }
                    None => {
                        if p * p <= bound {
                            out.push((p * p, FieldElement::from_int(p as i64, field)));
                        }
                    }
                }
            }
            out.sort_by(|(n1, x), (n2, y)| {
                n1.cmp(n2)
                    .then_with(|| x.trace().cmp(&y.trace()))
                    .then_with(|| x.to_string().cmp(&y.to_string()))
            });
            out.into_iter().map(|(_, x)| x).collect()
        }
    }
}
