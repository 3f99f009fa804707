//! Family specs in the JSON dialect `{"family": "central" | "perturbed" | "tab" | "greedy", ...}`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::composite::SourceSpec;
use super::{
    central_stages, greedy_stages, perturbed_stages, tab_stages, CantorStage, CentralSpec,
    CompositeSpec, ConstructionError, Family, GreedySpec, PerturbedSpec,
};
use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    /// A well-formed value that is not acceptable, located at the value itself.
    #[error("{message} at line {line} column {column}")]
    Invalid {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("spec has no \"family\" field")]
    MissingFamily,
    #[error("unknown family {0:?}; expected central, perturbed, tab or greedy")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    Central(CentralSpec),
    Perturbed(PerturbedSpec),
    Tab(CompositeSpec),
    Greedy(GreedySpec),
}

#[derive(Deserialize)]
struct Tag {
    family: Option<String>,
}

impl FamilySpec {
    /// Parses a spec file. The family tag is read first, then the whole text is
    /// read again as that family, so errors carry the position of the bad value.
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let at = |e| locate(text, e);
        let tag: Tag = serde_json::from_str(text).map_err(at)?;
        let family = tag.family.ok_or(SpecError::MissingFamily)?;
        Ok(match family.as_str() {
            "central" => FamilySpec::Central(serde_json::from_str(text).map_err(at)?),
            "perturbed" => FamilySpec::Perturbed(serde_json::from_str(text).map_err(at)?),
            "tab" => FamilySpec::Tab(serde_json::from_str(text).map_err(at)?),
            "greedy" => FamilySpec::Greedy(serde_json::from_str(text).map_err(at)?),
            _ => return Err(SpecError::UnknownFamily(family)),
        })
    }

    pub fn family(&self) -> Family {
        match self {
            FamilySpec::Central(_) => Family::Central,
            FamilySpec::Perturbed(_) => Family::Perturbed,
            FamilySpec::Tab(_) => Family::Tab,
            FamilySpec::Greedy(_) => Family::Greedy,
        }
    }

    /// Named presets: `ternary`, `half`, `perturbed`, `tab`, `fat4`, `fat16`.
    pub fn preset(name: &str) -> Option<Self> {
        let central = |a: Rational| FamilySpec::Central(CentralSpec::constant(a).expect("preset"));
        Some(match name {
            "ternary" => central(Rational::new(1, 3)),
            "half" => central(Rational::half()),
            "perturbed" => FamilySpec::Perturbed(PerturbedSpec::default()),
            "tab" => FamilySpec::Tab(CompositeSpec::builtin()),
            "fat4" => FamilySpec::Greedy(GreedySpec::fat(Rational::new(1, 4)).expect("preset")),
            "fat16" => FamilySpec::Greedy(GreedySpec::fat(Rational::new(1, 16)).expect("preset")),
            _ => return None,
        })
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["ternary", "half", "perturbed", "tab", "fat4", "fat16"]
    }

    /// Stages `0..=n` of the set this spec describes (the composite for `greedy`).
    pub fn stages(&self, n: usize, budget: usize) -> Result<Vec<CantorStage>, ConstructionError> {
        match self {
            FamilySpec::Central(s) => central_stages(s, n, budget),
            FamilySpec::Perturbed(s) => perturbed_stages(s, n, budget),
            FamilySpec::Tab(s) => tab_stages(s, n, budget),
            FamilySpec::Greedy(s) => Ok(greedy_stages(s, n, budget)?
                .into_iter()
                .map(|g| g.c)
                .collect()),
        }
    }

    /// `B` for the composite families, as a half-scale source.
    pub fn b_source(&self) -> Option<&SourceSpec> {
        match self {
            FamilySpec::Tab(s) => Some(&s.b),
            FamilySpec::Greedy(s) => Some(&s.b),
            _ => None,
        }
    }
}

/// serde_json reports a rejected value at the next token, which may sit on a later
/// line. Step back over whitespace and punctuation to the end of the value.
fn locate(text: &str, e: serde_json::Error) -> SpecError {
    if !e.is_data() || e.line() == 0 {
        return SpecError::Json(e);
    }
    let line_start: usize = text.split_inclusive('\n').take(e.line() - 1).map(str::len).sum();
    let reported = text[line_start..]
        .char_indices()
        .nth(e.column().saturating_sub(1))
        .map_or(text.len(), |(i, _)| line_start + i);
    let end = text[..reported]
        .trim_end_matches(|c: char| c.is_whitespace() || matches!(c, ',' | '}' | ']'))
        .len();
    if end == 0 {
        return SpecError::Json(e);
    }
    let before = &text[..end];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count());
    let message = e.to_string();
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    SpecError::Invalid {
        message,
        line,
        column,
    }
}

impl FromStr for FamilySpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilySpec::from_json(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_family() {
        let c = FamilySpec::from_json(r#"{"family":"central","ratios":{"rule":"constant","value":"1/3"}}"#)
            .unwrap();
        assert_eq!(c, FamilySpec::preset("ternary").unwrap());
        let p = FamilySpec::from_json(r#"{"family":"perturbed","c1":"1/5"}"#).unwrap();
        assert_eq!(p, FamilySpec::preset("perturbed").unwrap());
        let t = FamilySpec::from_json(
            r#"{"family":"tab",
                "a":{"central":{"ratios":{"rule":"constant","value":"1/2"}}},
                "b":{"central":{"ratios":{"rule":"constant","value":"1/2"}}}}"#,
        )
        .unwrap();
        assert_eq!(t, FamilySpec::preset("tab").unwrap());
        let g = FamilySpec::from_json(
            r#"{"family":"greedy","b":{"central":{"ratios":{"rule":"geometric","first":"1/4","ratio":"1/4"}}},
                "dense":{"lo":"0/1","hi":"1/1"},"margin_base":"1/64","child_fraction":"1/64"}"#,
        )
        .unwrap();
        assert_eq!(g, FamilySpec::preset("fat4").unwrap());
    }

    #[test]
    fn bad_ratio_points_at_its_line() {
        let text = "{\n  \"family\": \"central\",\n  \"ratios\": {\"rule\": \"list\",\n    \"values\": [\"1/3\", \"1\"],\n    \"tail\": \"1/3\"}\n}";
        let err = FamilySpec::from_json(text).unwrap_err().to_string();
        assert!(err.contains("ratio out of (0,1)"), "{err}");
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn bad_value_at_line_end_is_not_blamed_on_the_next_line() {
        let text = "{\n  \"family\": \"central\",\n  \"ratios\": {\n    \"rule\": \"constant\",\n    \"value\": \"1/1\"\n  }\n}\n";
        let err = FamilySpec::from_json(text).unwrap_err();
        assert!(
            matches!(err, SpecError::Invalid { line: 5, column: 18, .. }),
            "{err}"
        );
        assert!(err.to_string().starts_with("ratio out of (0,1): 1/1 at line 5"), "{err}");
        // Syntax errors keep serde_json's own position.
        let err = FamilySpec::from_json("{\n  \"family\": \"central\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, SpecError::Json(_)) && err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn unknown_fields_and_families() {
        let err = FamilySpec::from_json(r#"{"family":"perturbed","c1":"1/5","shirnk":"1/2"}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("shirnk"), "{err}");
        assert!(matches!(
            FamilySpec::from_json(r#"{"family":"fractal"}"#),
            Err(SpecError::UnknownFamily(_))
        ));
        assert!(matches!(FamilySpec::from_json("{}"), Err(SpecError::MissingFamily)));
    }

    #[test]
    fn round_trip_through_json() {
        for name in FamilySpec::preset_names() {
            let spec = FamilySpec::preset(name).unwrap();
            let text = serde_json::to_string(&spec).unwrap();
            assert_eq!(FamilySpec::from_json(&text).unwrap(), spec, "{text}");
        }
    }
}
