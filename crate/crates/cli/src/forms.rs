use hypglue::numfield::{Embedding, FieldTag};
use hypglue::qforms::{build_counting_family, Certificate, DiagonalForm};
use serde::Serialize;

use crate::{CheckArgs, CliError, FamilyArgs, Run};

fn field(ctx: &mut Run, flag: Option<String>) -> Result<FieldTag, CliError> {
    let name: String = ctx.config.require(flag, "field")?;
    FieldTag::parse(&name).map_err(|e| CliError::Usage(format!("--field: {e}")))
}

fn signature(form: &DiagonalForm, e: Embedding) -> String {
    if form.field().embeddings().contains(&e) {
        form.signature_at(e).to_string()
    } else {
        String::new()
    }
}

#[derive(Serialize)]
struct FormRow {
    label: String,
    prime: String,
    form: String,
    signature_identity: String,
    signature_sigma: String,
    discriminant: String,
    admissible: bool,
}

#[derive(Serialize)]
struct CertificateRow {
    first: String,
    second: String,
    non_equivalent: bool,
    reason: String,
}

pub fn family(ctx: &mut Run, a: FamilyArgs) -> Result<String, CliError> {
    let n: usize = ctx.config.require(a.n, "n")?;
    let field = field(ctx, a.field)?;
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    let fam = build_counting_family(n, field).map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows: Vec<FormRow> = fam
        .members
        .iter()
        .map(|m| FormRow {
            label: m.label.to_string(),
            prime: m.prime.to_string(),
            form: m.form.to_string(),
            signature_identity: signature(&m.form, Embedding::Identity),
            signature_sigma: signature(&m.form, Embedding::Sigma),
            discriminant: m.form.discriminant().to_string(),
            admissible: m.form.is_admissible(),
        })
        .collect();
    let certs: Vec<CertificateRow> = fam
        .certificates()
        .into_iter()
        .map(|(i, j, c)| CertificateRow {
            first: fam.members[i].label.to_string(),
            second: fam.members[j].label.to_string(),
            non_equivalent: c.is_non_equivalent(),
            reason: match c {
                Certificate::NonEquivalent(r) => r,
                Certificate::Unknown => String::new(),
            },
        })
        .collect();
    ctx.out.csv(
        "forms.csv",
        &["label", "prime", "form", "signature_identity", "signature_sigma", "discriminant", "admissible"],
        &rows,
    )?;
    ctx.out.csv("certificates.csv", &["first", "second", "non_equivalent", "reason"], &certs)?;
    let admissible = rows.iter().filter(|r| r.admissible).count();
    let separated = certs.iter().filter(|c| c.non_equivalent).count();
    if admissible != rows.len() || separated != certs.len() {
        return Err(CliError::Failed(format!(
            "{admissible}/{} admissible, {separated}/{} pairs certified non-equivalent",
            rows.len(),
            certs.len()
        )));
    }
    Ok(format!("{} forms over {field}, all admissible, {separated} pairs non-equivalent", rows.len()))
}

#[derive(Serialize)]
struct CheckRow {
    form: String,
    dimension: usize,
    signature_identity: String,
    signature_sigma: String,
    admissible: bool,
}

pub fn check(ctx: &mut Run, a: CheckArgs) -> Result<String, CliError> {
    let coeffs: String = ctx.config.require(a.coeffs, "coeffs")?;
    let field = field(ctx, a.field)?;
    let form = DiagonalForm::parse(field, &coeffs).map_err(|e| CliError::Usage(format!("--coeffs: {e}")))?;
    let row = CheckRow {
        form: form.to_string(),
        dimension: form.dimension(),
        signature_identity: signature(&form, Embedding::Identity),
        signature_sigma: signature(&form, Embedding::Sigma),
        admissible: form.is_admissible(),
    };
    let verdict = format!("admissible={}", row.admissible);
    ctx.out.csv("check.csv", &["form", "dimension", "signature_identity", "signature_sigma", "admissible"], &[row])?;
    Ok(verdict)
}
