//! JSON experiment configuration.
//!
//! Parsing is strict: unknown keys anywhere are rejected, and every
//! experiment-specific field is accepted only by the experiment that uses it.
//! Defaults are written back into the validated config, so its serialised
//! form (the echo stored in every report) parses to an equal value.

use std::fmt;

use serde::{Deserialize, Serialize};
use smilab_core::ensembles::{EnsembleSpec, Family, ShiftSpec};
use smilab_core::matrix::SymMatrix;
use smilab_core::tail::MIN_TAIL_TRIALS;

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_T_GRID: [f64; 7] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];
pub const DEFAULT_OUTPUT_PATH: &str = "smilab-out";
pub const DEFAULT_ENTRY: [usize; 2] = [1, 2];
pub const DEFAULT_COMPONENTS: usize = 4;
pub const DEFAULT_N_MAX: usize = 8;
pub const DEFAULT_CASES: u64 = 1_000;
pub const DEFAULT_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    TheoremTail,
    SstTail,
    EntryTail,
    Counterexample,
    Hagelstein,
    GinibreLower,
    IdentitySuite,
    DensityCheck,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::TheoremTail => "theorem_tail",
            Self::SstTail => "sst_tail",
            Self::EntryTail => "entry_tail",
            Self::Counterexample => "counterexample",
            Self::Hagelstein => "hagelstein",
            Self::GinibreLower => "ginibre_lower",
            Self::IdentitySuite => "identity_suite",
            Self::DensityCheck => "density_check",
        }
    }

    fn uses_t_grid(self) -> bool {
        matches!(self, Self::TheoremTail | Self::SstTail | Self::EntryTail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShiftConfig {
    #[default]
    Zero,
    ScalarIdentity { c: f64 },
    CounterexampleDiag { d: f64 },
    ExplicitSymmetric { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub family: Option<Family>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub density_bound: Option<f64>,
    pub n: Option<usize>,
    #[serde(default)]
    pub shift: ShiftConfig,
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_list: Option<Vec<f64>>,
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output_path: Option<String>,
    /// One-based `(i, j)` for `entry_tail`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry: Option<[usize; 2]>,
    /// Number of Cauchy components for `hagelstein`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid config field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.to_string(),
    }
}

/// Parses and validates a JSON config, filling in defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut config: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        let field = unknown_or_missing_field(&inner)
            .map(|name| {
                if path == "." || path == name {
                    name.to_string()
                } else if path.ends_with(&format!(".{name}")) {
                    path.clone()
                } else {
                    format!("{path}.{name}")
                }
            })
            .unwrap_or(path);
        invalid(field, inner)
    })?;
    config.validate_and_fill()?;
    Ok(config)
}

/// Extracts `name` from serde's "unknown field `name`" / "missing field `name`" messages.
fn unknown_or_missing_field(message: &str) -> Option<&str> {
    let rest = message
        .strip_prefix("unknown field `")
        .or_else(|| message.strip_prefix("missing field `"))?;
    rest.split('`').next()
}

impl ExperimentConfig {
    pub fn master_seed(&self) -> u64 {
        self.master_seed.unwrap_or_default()
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub fn t_grid(&self) -> Vec<f64> {
        self.t_grid.clone().unwrap_or_else(|| DEFAULT_T_GRID.to_vec())
    }

    pub fn output_path(&self) -> &str {
        self.output_path.as_deref().unwrap_or(DEFAULT_OUTPUT_PATH)
    }

    /// The core ensemble description; only valid after [`parse_config`].
    pub fn ensemble_spec(&self) -> Result<EnsembleSpec, ConfigError> {
        let e = self
            .ensemble
            .as_ref()
            .ok_or_else(|| invalid("ensemble", "required for this experiment"))?;
        let family = e.family.ok_or_else(|| invalid("ensemble.family", "required"))?;
        let n = e.n.ok_or_else(|| invalid("ensemble.n", "required"))?;
        let shift = match &e.shift {
            ShiftConfig::Zero => ShiftSpec::Zero,
            ShiftConfig::ScalarIdentity { c } => ShiftSpec::ScalarIdentity(*c),
            ShiftConfig::CounterexampleDiag { d } => ShiftSpec::CounterexampleDiag(*d),
            ShiftConfig::ExplicitSymmetric { matrix } => ShiftSpec::ExplicitSymmetric(
                SymMatrix::from_rows(matrix).map_err(|err| invalid("ensemble.shift.matrix", err))?,
            ),
        };
        EnsembleSpec::new(family, e.density_bound.unwrap_or(1.0), n, shift)
            .map_err(|err| invalid("ensemble", err))
    }

    fn validate_and_fill(&mut self) -> Result<(), ConfigError> {
        use Experiment::*;
        let exp = self.experiment;
        if self.master_seed.is_none() {
            return Err(invalid("master_seed", "required"));
        }
        let trials = self.trials.get_or_insert(DEFAULT_TRIALS);
        if *trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if matches!(exp, TheoremTail | SstTail | EntryTail | GinibreLower) && *trials < MIN_TAIL_TRIALS {
            return Err(invalid("trials", format!("{} needs at least {MIN_TAIL_TRIALS}", exp.name())));
        }
        self.workers.get_or_insert(0);
        self.output_path.get_or_insert_with(|| DEFAULT_OUTPUT_PATH.to_string());

        if exp.uses_t_grid() {
            let grid = self.t_grid.get_or_insert_with(|| DEFAULT_T_GRID.to_vec());
            smilab_core::tail::validate_t_grid(grid).map_err(|e| invalid("t_grid", e))?;
        } else if self.t_grid.is_some() {
            return Err(invalid("t_grid", format!("not used by {}", exp.name())));
        }

        let only_for = |present: bool, field: &str, owner: Experiment| {
            if present && exp != owner {
                Err(invalid(field, format!("only valid for {}", owner.name())))
            } else {
                Ok(())
            }
        };
        only_for(self.d_list.is_some(), "d_list", Counterexample)?;
        only_for(self.entry.is_some(), "entry", EntryTail)?;
        only_for(self.components.is_some(), "components", Hagelstein)?;
        only_for(self.n_max.is_some(), "n_max", IdentitySuite)?;
        only_for(self.cases.is_some(), "cases", IdentitySuite)?;
        only_for(self.samples.is_some(), "samples", DensityCheck)?;

        let needs_ensemble = !matches!(exp, Hagelstein | IdentitySuite);
        match (&self.ensemble, needs_ensemble) {
            (None, true) => return Err(invalid("ensemble", format!("required for {}", exp.name()))),
            (Some(_), false) => return Err(invalid("ensemble", format!("not used by {}", exp.name()))),
            _ => {}
        }
        if let Some(e) = &self.ensemble {
            let family = e.family.ok_or_else(|| invalid("ensemble.family", "required"))?;
            let n = e.n.ok_or_else(|| invalid("ensemble.n", "required"))?;
            if n == 0 {
                return Err(invalid("ensemble.n", "must be at least 1"));
            }
            match exp {
                TheoremTail | EntryTail | DensityCheck => {
                    if !family.is_continuous_symmetric() {
                        return Err(invalid(
                            "ensemble.family",
                            format!("{} needs bounded_uniform, bounded_gaussian or cauchy", exp.name()),
                        ));
                    }
                    match e.density_bound {
                        None => return Err(invalid("ensemble.K", "required for continuous families")),
                        Some(k) if !(k > 0.0 && k.is_finite()) => {
                            return Err(invalid("ensemble.K", "must be positive and finite"))
                        }
                        _ => {}
                    }
                }
                SstTail | GinibreLower => {
                    if family != Family::Ginibre {
                        return Err(invalid("ensemble.family", format!("{} needs ginibre", exp.name())));
                    }
                }
                Counterexample => {
                    if family != Family::LazyRademacher {
                        return Err(invalid("ensemble.family", "counterexample needs lazy_rademacher"));
                    }
                    if n < 2 {
                        return Err(invalid("ensemble.n", "counterexample needs n >= 2"));
                    }
                }
                Hagelstein | IdentitySuite => unreachable!(),
            }
            if matches!(exp, Counterexample | GinibreLower) && e.shift != ShiftConfig::Zero {
                return Err(invalid(
                    "ensemble.shift",
                    format!("{} fixes its own shift; use kind zero", exp.name()),
                ));
            }
            self.ensemble_spec()?;
        }

        match exp {
            Counterexample => {
                let d_list = self.d_list.as_ref().ok_or_else(|| invalid("d_list", "required for counterexample"))?;
                smilab_core::tail::validate_d_list(d_list).map_err(|e| invalid("d_list", e))?;
            }
            EntryTail => {
                let [i, j] = *self.entry.get_or_insert(DEFAULT_ENTRY);
                let n = self.ensemble.as_ref().and_then(|e| e.n).unwrap_or(0);
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(invalid("entry", format!("one-based indices must lie in 1..={n}")));
                }
            }
            Hagelstein => {
                if *self.components.get_or_insert(DEFAULT_COMPONENTS) == 0 {
                    return Err(invalid("components", "must be at least 1"));
                }
            }
            IdentitySuite => {
                if *self.n_max.get_or_insert(DEFAULT_N_MAX) < 2 {
                    return Err(invalid("n_max", "must be at least 2"));
                }
                if *self.cases.get_or_insert(DEFAULT_CASES) == 0 {
                    return Err(invalid("cases", "must be at least 1"));
                }
            }
            DensityCheck => {
                let samples = *self.samples.get_or_insert(DEFAULT_SAMPLES);
                if samples < smilab_core::ensembles::MIN_DENSITY_SAMPLES {
                    return Err(invalid(
                        "samples",
                        format!("must be at least {}", smilab_core::ensembles::MIN_DENSITY_SAMPLES),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THEOREM: &str = r#"{"experiment":"theorem_tail","ensemble":{"family":"bounded_uniform","K":1.0,"n":20,"shift":{"kind":"zero"}},"trials":10000,"master_seed":7}"#;

    fn field_of(err: ConfigError) -> String {
        match err {
            ConfigError::Invalid { field, .. } => field,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn theorem_config_gets_default_grid() {
        let c = parse_config(THEOREM).unwrap();
        assert_eq!(c.experiment, Experiment::TheoremTail);
        assert_eq!(c.t_grid(), DEFAULT_T_GRID.to_vec());
        assert_eq!(c.trials(), 10_000);
        assert_eq!(c.workers, Some(0));
        assert_eq!(c.master_seed(), 7);
        let spec = c.ensemble_spec().unwrap();
        assert_eq!(spec.n, 20);
        assert_eq!(spec.shift, ShiftSpec::Zero);
    }

    #[test]
    fn missing_n_names_the_field() {
        let text = THEOREM.replace(r#","n":20"#, "");
        assert_eq!(field_of(parse_config(&text).unwrap_err()), "ensemble.n");
    }

    #[test]
    fn counterexample_requires_d_list() {
        let text = r#"{"experiment":"counterexample","ensemble":{"family":"lazy_rademacher","n":50},"trials":2000,"master_seed":1}"#;
        assert_eq!(field_of(parse_config(text).unwrap_err()), "d_list");
        let ok = text.replace(r#""master_seed":1"#, r#""master_seed":1,"d_list":[100,1000,10000]"#);
        assert!(parse_config(&ok).is_ok());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = THEOREM.replace(r#""trials""#, r#""trails""#);
        assert_eq!(field_of(parse_config(&text).unwrap_err()), "trails");
        let nested = THEOREM.replace(r#""K":1.0"#, r#""K":1.0,"k":2"#);
        assert_eq!(field_of(parse_config(&nested).unwrap_err()), "ensemble.k");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_config("{\n  \"experiment\": \"theorem_tail\",\n  oops\n}").unwrap_err();
        match err {
            ConfigError::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_combinations_are_checked() {
        let with_d = THEOREM.replace(r#""trials""#, r#""d_list":[1,10,100],"trials""#);
        assert_eq!(field_of(parse_config(&with_d).unwrap_err()), "d_list");
        let bad_grid = THEOREM.replace(r#""trials""#, r#""t_grid":[2,1],"trials""#);
        assert_eq!(field_of(parse_config(&bad_grid).unwrap_err()), "t_grid");
        let no_k = THEOREM.replace(r#""K":1.0,"#, "");
        assert_eq!(field_of(parse_config(&no_k).unwrap_err()), "ensemble.K");
        let discrete = THEOREM.replace("bounded_uniform", "lazy_rademacher");
        assert_eq!(field_of(parse_config(&discrete).unwrap_err()), "ensemble.family");
        let few = THEOREM.replace("10000", "10");
        assert_eq!(field_of(parse_config(&few).unwrap_err()), "trials");
        let no_seed = THEOREM.replace(r#","master_seed":7"#, "");
        assert_eq!(field_of(parse_config(&no_seed).unwrap_err()), "master_seed");
    }

    #[test]
    fn shift_variants_parse() {
        let text = THEOREM.replace(r#"{"kind":"zero"}"#, r#"{"kind":"counterexample_diag","d":1e6}"#);
        let spec = parse_config(&text).unwrap().ensemble_spec().unwrap();
        assert_eq!(spec.shift, ShiftSpec::CounterexampleDiag(1e6));
        let explicit = r#"{"experiment":"theorem_tail","ensemble":{"family":"cauchy","K":2,"n":2,"shift":{"kind":"explicit_symmetric","matrix":[[1,2],[2,1]]}},"master_seed":0}"#;
        assert!(parse_config(explicit).is_ok());
        let asym = explicit.replace("[[1,2],[2,1]]", "[[1,2],[3,1]]");
        assert_eq!(field_of(parse_config(&asym).unwrap_err()), "ensemble.shift.matrix");
        let wrong_n = explicit.replace(r#""n":2"#, r#""n":3"#);
        assert!(parse_config(&wrong_n).is_err());
    }

    #[test]
    fn echo_round_trips() {
        let texts = [
            THEOREM.to_string(),
            r#"{"experiment":"hagelstein","components":100,"trials":100000,"master_seed":3}"#.to_string(),
            r#"{"experiment":"identity_suite","master_seed":3}"#.to_string(),
            r#"{"experiment":"entry_tail","ensemble":{"family":"bounded_gaussian","K":1,"n":10,"shift":{"kind":"scalar_identity","c":-3}},"entry":[1,1],"master_seed":3}"#.to_string(),
        ];
        for text in texts {
            let c = parse_config(&text).unwrap();
            let echo = serde_json::to_string(&c).unwrap();
            assert_eq!(parse_config(&echo).unwrap(), c, "{echo}");
        }
    }
}
