//! JSON and CSV file formats.
//!
//! Scalars are written as strings (`"-3/4"` over ℚ, `"17"` over 𝔽_p) so that
//! exact values survive a round trip. A ternary form is a list of
//! `[[e0, e1, e2], "coeff"]` pairs in graded-lex order; a binary form is its
//! coefficient list from `s^d` down to `t^d`.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use jumpcon_core::field::{Field, PrimeField};
use jumpcon_core::monad::{Monad, ValidityReport};
use jumpcon_core::poly::{BForm, HPoly};
use jumpcon_core::skewnet::PfPoly;
use serde::{Deserialize, Serialize};

/// `q` or `fp:<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FromStr for FieldSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        if s == "q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("fp:")
            .ok_or_else(|| anyhow!("field must be `q` or `fp:<prime>`, got {s:?}"))?
            .parse::<u64>()
            .with_context(|| format!("bad modulus in {s:?}"))?;
        let f = PrimeField::new(p)?;
        Ok(FieldSpec::Prime(f.modulus()))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

pub type TermJson = ([u32; 3], String);

pub fn hpoly_to_json<F: Field>(p: &HPoly<F::Elem>) -> Vec<TermJson> {
    p.iter().map(|(e, c)| (*e, c.to_string())).collect()
}

pub fn hpoly_from_json<F: Field>(f: &F, degree: u32, terms: &[TermJson]) -> anyhow::Result<HPoly<F::Elem>> {
    let parsed = terms.iter().map(|(e, c)| Ok((*e, f.parse(c)?))).collect::<anyhow::Result<Vec<_>>>()?;
    Ok(HPoly::from_terms(f, degree, parsed)?)
}

pub fn bform_to_json<F: Field>(b: &BForm<F::Elem>) -> Vec<String> {
    b.coeffs().iter().map(|c| c.to_string()).collect()
}

pub fn bform_from_json<F: Field>(f: &F, coeffs: &[String]) -> anyhow::Result<BForm<F::Elem>> {
    if coeffs.is_empty() {
        bail!("a binary form needs at least one coefficient");
    }
    Ok(BForm::new(coeffs.iter().map(|c| f.parse(c)).collect::<Result<_, _>>()?))
}

pub fn scalars<F: Field>(v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityJson {
    pub beta_alpha_zero: bool,
    pub pointwise_exactness: bool,
    pub lines_tested: usize,
    pub gcd_degrees: Vec<usize>,
    #[serde(rename = "h0_F")]
    pub h0_f: Option<usize>,
    #[serde(rename = "h0_F1")]
    pub h0_f1: Option<usize>,
    pub stable: bool,
}

impl From<&ValidityReport> for ValidityJson {
    fn from(r: &ValidityReport) -> Self {
        ValidityJson {
            beta_alpha_zero: r.beta_alpha_zero,
            pointwise_exactness: r.pointwise_exactness,
            lines_tested: r.lines_tested,
            gcd_degrees: r.gcd_degrees.clone(),
            h0_f: r.h0_f,
            h0_f1: r.h0_f1,
            stable: r.is_stable(),
        }
    }
}

/// A monad file. `J` is implicit; `alpha[i][j]` is the linear form in row
/// `i`, column `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadFile {
    pub field: String,
    pub n: usize,
    pub alpha: Vec<Vec<Vec<TermJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chern: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validity: Option<ValidityJson>,
}

impl MonadFile {
    pub fn new<F: Field>(f: &F, m: &Monad<F::Elem>, seed: Option<u64>, report: Option<&ValidityReport>) -> Self {
        MonadFile {
            field: f.name(),
            n: m.n(),
            alpha: m.alpha_rows().iter().map(|r| r.iter().map(hpoly_to_json::<F>).collect()).collect(),
            seed,
            chern: Some(m.chern()),
            validity: report.map(ValidityJson::from),
        }
    }

    pub fn field_spec(&self) -> anyhow::Result<FieldSpec> {
        self.field.parse()
    }

    pub fn monad<F: Field>(&self, f: &F) -> anyhow::Result<Monad<F::Elem>> {
        if f.name() != self.field {
            bail!("monad file is over {} but the run uses {}", self.field, f.name());
        }
        let alpha = self
            .alpha
            .iter()
            .map(|r| r.iter().map(|p| hpoly_from_json(f, 1, p)).collect::<anyhow::Result<Vec<_>>>())
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(Monad::new(self.n, alpha)?)
    }

    pub fn read(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Pfaffian as `(exponents of a0..a5, coefficient)` pairs.
pub fn pfaffian_to_json<F: Field>(pf: &PfPoly<F::Elem>) -> Vec<([u8; 6], String)> {
    pf.terms().iter().map(|(e, c)| (*e, c.to_string())).collect()
}

/// One sampled conic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRow {
    pub index: usize,
    pub nu: [Vec<String>; 3],
    pub conic: Vec<String>,
    pub d: usize,
    pub ker_dim: usize,
    pub pf_value: String,
    /// `[h0, h1]` of `F(k)|_q` for `k = -1, 0, 1`.
    pub h_table: [[usize; 2]; 3],
    #[serde(rename = "h0_FOmega1")]
    pub h0_fomega1: usize,
}

pub const CSV_HEADER: &str = "index,nu,conic,d,ker_dim,pf_value,h_table,h0_FOmega1";

impl SampleRow {
    /// Fields containing lists use `;` inside and `|` between forms.
    pub fn csv(&self) -> String {
        let nu = self.nu.iter().map(|b| b.join(";")).collect::<Vec<_>>().join("|");
        let h = self.h_table.iter().map(|[a, b]| format!("{a};{b}")).collect::<Vec<_>>().join("|");
        format!(
            "{},{},{},{},{},{},{},{}",
            self.index,
            nu,
            self.conic.join(";"),
            self.d,
            self.ker_dim,
            self.pf_value,
            h,
            self.h0_fomega1
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jumpcon_core::field::Rationals;
    use jumpcon_core::monad::random_selfdual;

    #[test]
    fn field_specs() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("fp:32003".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(32003));
        assert!("fp:32004".parse::<FieldSpec>().is_err());
        assert!("r".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(7).to_string(), "fp:7");
    }

    #[test]
    fn monad_round_trip() {
        let f = Rationals;
        let m = random_selfdual(&f, 2, 3).unwrap();
        let file = MonadFile::new(&f, &m, Some(3), None);
        let text = serde_json::to_string(&file).unwrap();
        let back: MonadFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.monad(&f).unwrap(), m);
        let fp = PrimeField::new(7).unwrap();
        assert!(back.monad(&fp).is_err());
    }
}
