//! Problem files: a TOML document describing a chart connection and optional auxiliary tensors.
//!
//! ```toml
//! n = 6
//! degree = 2
//! connection = "flat"        # or "random", "cf", "acf"
//!
//! [[gamma]]                  # Γ_ab^d in the coordinate frame
//! index = [0, 1, 3]
//! terms = [{ exp = [1, 0, 0, 0, 0, 0], c = "1/2" }]
//! ```

use acaf::connection::{Connection, RhoTensor};
use acaf::error::check_dim;
use acaf::frame::{Frame, PolyTensor};
use acaf::generate::{random_acf, random_cf, random_torsion_free, rng_from_seed};
use acaf::poly::Poly;
use acaf::scalar::{parse_q, Ring, Q};
use acaf::tensor::{Lower, Tensor, Upper, Variance};
use clap::ValueEnum;
use serde::Deserialize;
use std::collections::BTreeSet;
use std::path::PathBuf;
use thiserror::Error;

pub const DEFAULT_N: usize = 6;
pub const DEFAULT_DEGREE: u32 = 4;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("problem file: {0}")]
    Parse(String),
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> InputError {
    InputError::Invalid { field: field.into(), reason: reason.into() }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    #[default]
    Flat,
    /// Seeded torsion-free coefficients.
    Random,
    /// Seeded curved connection with `∇J = 0`.
    Cf,
    /// Seeded torsion-free connection in an adapted frame.
    Acf,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    exp: Vec<u32>,
    c: Coeff,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    index: Vec<usize>,
    terms: Vec<Term>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    n: Option<usize>,
    degree: Option<u32>,
    seed: Option<u64>,
    mode: Option<Mode>,
    connection: Option<Source>,
    connection_degree: Option<u32>,
    #[serde(default)]
    gamma: Vec<Entry>,
    #[serde(default)]
    rho_ab: Vec<Entry>,
    #[serde(default)]
    rho_a: Vec<Entry>,
    #[serde(default)]
    theta: Vec<Entry>,
    #[serde(default)]
    h: Vec<Entry>,
    #[serde(default)]
    s: Vec<Entry>,
}

/// Command-line values that take precedence over the problem file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub degree: Option<u32>,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub n: usize,
    /// Polynomial degree of generated test sections.
    pub degree: u32,
    pub seed: u64,
    pub mode: Mode,
    pub connection: Connection<Q>,
    pub flat: bool,
    pub rho: RhoTensor<Q>,
    pub theta: Option<PolyTensor<Q>>,
    pub h: Option<PolyTensor<Q>>,
    pub s: Option<PolyTensor<Q>>,
}

pub fn load_problem(text: &str, over: &Overrides) -> Result<ProblemSpec, InputError> {
    let file: ProblemFile = toml::from_str(text).map_err(|e| InputError::Parse(e.to_string()))?;
    let n = over.n.or(file.n).unwrap_or(DEFAULT_N);
    check_dim(n, 4).map_err(|e| invalid("n", e.to_string()))?;
    let degree = over.degree.or(file.degree).unwrap_or(DEFAULT_DEGREE);
    let seed = over.seed.or(file.seed).unwrap_or(0);
    let mode = over.mode.or(file.mode).unwrap_or_default();
    let source = file.connection.unwrap_or_default();
    let conn_degree = file.connection_degree.unwrap_or(1);

    let gamma = tensor("gamma", &file.gamma, n, &[Lower, Lower, Upper], 0)?;
    let explicit = gamma.as_ref().is_some_and(|g| !g.is_zero());
    if explicit && source != Source::Flat {
        return Err(invalid("gamma", format!("explicit coefficients conflict with connection = {source:?}")));
    }
    let mut rng = rng_from_seed(seed);
    let connection = match (gamma, source) {
        (Some(g), _) => {
            if !g.sub(&g.permute(&[1, 0, 2])).is_zero() {
                return Err(invalid("gamma", "must be symmetric in its first two indices (torsion-free)"));
            }
            Connection::new(Frame::coordinate(n), g).map_err(|e| invalid("gamma", e.to_string()))?
        }
        (None, Source::Flat) => Connection::flat(n),
        (None, Source::Random) => random_torsion_free(&mut rng, n, conn_degree),
        (None, Source::Cf) => random_cf(&mut rng, n, conn_degree),
        (None, Source::Acf) => random_acf(&mut rng, n, conn_degree).map_err(|e| invalid("connection", e.to_string()))?.0,
    };
    let flat = connection.gamma().is_zero() && connection.frame() == Connection::<Q>::flat(n).frame();

    let mut rho = RhoTensor::zero(n);
    if let Some(p) = tensor("rho_ab", &file.rho_ab, n, &[Lower, Lower], 0)? {
        rho.pab = p;
    }
    if let Some(p) = tensor("rho_a", &file.rho_a, n, &[Lower], 2)? {
        rho.pa = p;
    }
    let theta = tensor("theta", &file.theta, n, &[Lower, Lower], 0)?;
    if let Some(t) = &theta {
        if !t.sub(&t.permute(&[1, 0])).is_zero() {
            return Err(invalid("theta", "must be symmetric"));
        }
        if t.data().iter().any(|p| p.degree().unwrap_or(0) > 0) {
            return Err(invalid("theta", "must be constant"));
        }
    }
    Ok(ProblemSpec {
        n,
        degree,
        seed,
        mode,
        connection,
        flat,
        rho,
        theta,
        h: tensor("h", &file.h, n, &[Lower, Lower, Lower], 0)?,
        s: tensor("s", &file.s, n, &[Lower, Lower, Lower], 0)?,
    })
}

/// Builds a tensor from sparse entries; `None` when the field is absent.
fn tensor(field: &str, entries: &[Entry], n: usize, var: &[Variance], w: i32) -> Result<Option<PolyTensor<Q>>, InputError> {
    if entries.is_empty() {
        return Ok(None);
    }
    let mut t = Tensor::zeros(n, var, w);
    let mut seen = BTreeSet::new();
    for (i, e) in entries.iter().enumerate() {
        let at = format!("{field}[{i}]");
        if e.index.len() != var.len() {
            return Err(invalid(format!("{at}.index"), format!("expected {} indices, got {}", var.len(), e.index.len())));
        }
        if let Some(&bad) = e.index.iter().find(|&&a| a >= n) {
            return Err(invalid(format!("{at}.index"), format!("index {bad} out of range 0..{n}")));
        }
        if !seen.insert(e.index.clone()) {
            return Err(invalid(format!("{at}.index"), format!("duplicate entry {:?}", e.index)));
        }
        let mut p = Poly::zero();
        for (j, term) in e.terms.iter().enumerate() {
            let tat = format!("{at}.terms[{j}]");
            if term.exp.len() != n {
                return Err(invalid(format!("{tat}.exp"), format!("expected {n} exponents, got {}", term.exp.len())));
            }
            let c = match &term.c {
                Coeff::Int(k) => Q::from_integer((*k).into()),
                Coeff::Text(s) => parse_q(s).ok_or_else(|| invalid(format!("{tat}.c"), format!("not a rational p/q: {s:?}")))?,
            };
            p = p.add(&Poly::monomial(&term.exp, c));
        }
        t.set(&e.index, p);
    }
    Ok(Some(t))
}
