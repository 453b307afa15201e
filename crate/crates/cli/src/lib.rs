//! Command implementations behind the `flatlands` binary. Each command
//! returns its exit code and writes its report to the given sink, so the
//! commands can be driven from tests without spawning a process.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::sync::Arc;

use flatlands_core::catalog::find_forbidden;
use flatlands_core::coloring::random_sequence;
use flatlands_core::harness::{sample_coloring, sample_verify, verify_theorem};
use flatlands_core::{Coloring, Error, Geometry, Kind, Mode, PointSet, TargetDecision, VerificationReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// A coloring on disk: geometry parameters and the sorted green indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringDocument {
    /// `"PG"` or `"AG"`.
    pub kind: String,
    /// Rank of the geometry, one more than its dimension.
    pub r: u32,
    pub q: u32,
    pub green: Vec<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed document: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn parse_kind(s: &str) -> Result<Kind, CliError> {
    match s {
        "PG" => Ok(Kind::Projective),
        "AG" => Ok(Kind::Affine),
        other => Err(CliError::Invalid(format!("kind must be \"PG\" or \"AG\", got {other:?}"))),
    }
}

pub fn build_geometry(kind: Kind, r: u32, q: u32) -> Result<Arc<Geometry>, CliError> {
    let g = match kind {
        Kind::Projective => Geometry::projective(r, q),
        Kind::Affine => Geometry::affine(r, q),
    }?;
    Ok(Arc::new(g))
}

impl ColoringDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("documents always serialize")
    }

    pub fn from_coloring(c: &Coloring) -> Self {
        let id = c.geometry().id();
        Self { kind: id.kind.label().to_string(), r: id.rank, q: id.q, green: c.green().to_vec() }
    }

    /// Builds the geometry and checks the green list is strictly increasing
    /// and in range.
    pub fn to_coloring(&self) -> Result<Coloring, CliError> {
        let g = build_geometry(parse_kind(&self.kind)?, self.r, self.q)?;
        if let Some(w) = self.green.windows(2).find(|w| w[0] >= w[1]) {
            return Err(CliError::Invalid(format!("green indices must be strictly increasing ({} then {})", w[0], w[1])));
        }
        if let Some(&p) = self.green.iter().find(|&&p| p >= g.len()) {
            return Err(CliError::Invalid(format!("green index {p} out of range, the geometry has {} points", g.len())));
        }
        let green = PointSet::from_indices(g.len(), self.green.iter().copied());
        Ok(Coloring::new(g, green)?)
    }
}

fn list(s: &PointSet) -> String {
    format!("{:?}", s.to_vec())
}

/// Decides a document: exit 0 for a target, 1 for a non-target.
pub fn check(doc: &ColoringDocument, out: &mut impl Write) -> Result<u8, CliError> {
    let c = doc.to_coloring()?;
    let id = c.geometry().id();
    let mut text = String::new();
    let code = match c.recognize() {
        TargetDecision::Accept(seq) => {
            writeln!(text, "TARGET {id}").unwrap();
            writeln!(text, "sequence:").unwrap();
            for (i, f) in seq.flats().iter().enumerate() {
                writeln!(text, "  F{i} = {}", list(f)).unwrap();
            }
            EXIT_OK
        }
        TargetDecision::Reject(flat) => {
            writeln!(text, "NON-TARGET {id}").unwrap();
            writeln!(text, "stuck flat (rank {}): {}", flat.rank(), list(flat.members())).unwrap();
            match find_forbidden(&c)? {
                Some(w) => writeln!(
                    text,
                    "witness: {} on green points {} spanning flat {}",
                    w.name,
                    list(&w.points),
                    list(w.flat.members())
                )
                .unwrap(),
                None => writeln!(text, "witness: none found").unwrap(),
            }
            EXIT_NEGATIVE
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(code)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sample { n: u64, seed: u64 },
}

/// Machine-readable form of a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub geometry: String,
    pub kind: String,
    pub r: u32,
    pub q: u32,
    pub mode: String,
    pub seed: Option<u64>,
    pub total_colorings: u64,
    pub accepted: u64,
    pub forbidden_free: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Vec<usize>>,
    pub elapsed_seconds: f64,
    pub passed: bool,
}

impl From<&VerificationReport> for ReportRecord {
    fn from(r: &VerificationReport) -> Self {
        let (mode, seed) = match r.mode {
            Mode::Exhaustive => ("exhaustive", None),
            Mode::Sampled { seed, .. } => ("sampled", Some(seed)),
        };
        Self {
            geometry: r.geometry.to_string(),
            kind: r.geometry.kind.label().to_string(),
            r: r.geometry.rank,
            q: r.geometry.q,
            mode: mode.to_string(),
            seed,
            total_colorings: r.total,
            accepted: r.accepted,
            forbidden_free: r.forbidden_free,
            mismatch_count: r.mismatch_count,
            mismatches: r.mismatches.clone(),
            elapsed_seconds: r.elapsed.as_secs_f64(),
            passed: r.passed(),
        }
    }
}

/// Runs a sweep: exit 0 iff there are no mismatches. Exceeding the
/// exhaustive budget is an input error.
pub fn verify(kind: Kind, r: u32, q: u32, mode: VerifyMode, json: bool, out: &mut impl Write) -> Result<u8, CliError> {
    let g = build_geometry(kind, r, q)?;
    let report = match mode {
        VerifyMode::Exhaustive => verify_theorem(&g),
        VerifyMode::Sample { n, seed } => sample_verify(&g, n, seed),
    };
    let report = match report {
        Err(e @ Error::BudgetExceeded { .. }) => {
            return Err(CliError::Invalid(format!("{e}; use --sample N --seed S instead")));
        }
        other => other?,
    };
    writeln!(out, "{report}")?;
    if json {
        writeln!(out, "{}", serde_json::to_string(&ReportRecord::from(&report)).expect("records serialize"))?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    Target,
    Random,
}

/// A seeded document: a target built along a random chain of flats, or a
/// uniform coloring.
pub fn generate(kind: Kind, r: u32, q: u32, mode: GenMode, seed: u64) -> Result<ColoringDocument, CliError> {
    let g = build_geometry(kind, r, q)?;
    let c = match mode {
        GenMode::Target => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seq = random_sequence(g.as_ref(), &mut rng);
            Coloring::from_sequence(g, &seq)?
        }
        GenMode::Random => {
            let green = sample_coloring(&g, seed, 0);
            Coloring::new(g, green)?
        }
    };
    Ok(ColoringDocument::from_coloring(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trip() {
        let doc = ColoringDocument { kind: "PG".into(), r: 3, q: 2, green: vec![0, 3, 5] };
        let text = doc.to_toml();
        assert_eq!(ColoringDocument::parse(&text).unwrap(), doc);
        let c = doc.to_coloring().unwrap();
        assert_eq!(ColoringDocument::from_coloring(&c), doc);
    }

    #[test]
    fn document_validation() {
        let bad = |kind: &str, green: Vec<usize>| ColoringDocument { kind: kind.into(), r: 3, q: 2, green }.to_coloring();
        assert!(matches!(bad("PG", vec![7]), Err(CliError::Invalid(_))));
        assert!(matches!(bad("PG", vec![2, 1]), Err(CliError::Invalid(_))));
        assert!(matches!(bad("PG", vec![1, 1]), Err(CliError::Invalid(_))));
        assert!(matches!(bad("XG", vec![]), Err(CliError::Invalid(_))));
        let six = ColoringDocument { kind: "PG".into(), r: 3, q: 6, green: vec![] };
        assert!(matches!(six.to_coloring(), Err(CliError::Core(Error::NotPrimePower(6)))));
        assert!(ColoringDocument::parse("kind = \"PG\"\nr = 3\nq = 2\n").is_err());
        assert!(ColoringDocument::parse("kind = \"PG\"\nr = 3\nq = 2\ngreen = []\nextra = 1\n").is_err());
    }

    #[test]
    fn record_fields() {
        let g = Geometry::projective(3, 2).unwrap();
        let rec = ReportRecord::from(&verify_theorem(&g).unwrap());
        assert_eq!((rec.total_colorings, rec.accepted, rec.mismatch_count), (128, 72, 0));
        assert_eq!(rec.geometry, "PG(2,2)");
        assert!(rec.passed && rec.seed.is_none());
    }
}
