//! Loading and interpreting JSON input files.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use starforge::algebra::{parse_rational, Poly, Rational, Vars};
use starforge::fedosov::{Fedosov, FedosovInput};
use starforge::formats::{FedosovJson, LieJson, MultiDiffOpJson, PoissonJson, PolyJson};
use starforge::gutt::{gutt_star, LieAlgebraData};
use starforge::moyal::{moyal_star, ConstantPoisson};
use starforge::polydiff::{MultiDiffOp, StarProduct};
use starforge::symmetry::TwistElement;

/// An input problem; always exits with status 2.
#[derive(Debug)]
pub struct InputError {
    pub file: Option<PathBuf>,
    pub pointer: Option<String>,
    pub message: String,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError { file: None, pointer: None, message: message.into() }
    }

    pub fn in_file(mut self, path: &Path) -> Self {
        self.file.get_or_insert_with(|| path.to_path_buf());
        self
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{}: ", file.display())?;
        }
        if let Some(p) = &self.pointer {
            write!(f, "at {p}: ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl From<starforge::Error> for InputError {
    fn from(e: starforge::Error) -> Self {
        InputError::new(e.to_string())
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Parses `text` as `T`, reporting the JSON pointer and line of any failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let ptr = pointer(e.path());
        let inner = e.into_inner();
        let expected = std::any::type_name::<T>().rsplit("::").next().unwrap_or("value").to_string();
        InputError {
            file: None,
            pointer: Some(ptr),
            message: format!("{inner}; expected {expected}"),
        }
    })
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::new(format!("cannot read: {e}")).in_file(path))?;
    parse(&text).map_err(|e| e.in_file(path))
}

pub fn load_poly(path: &Path, target: &Vars) -> Result<Poly, InputError> {
    let json: PolyJson = load(path)?;
    let p = Poly::try_from(&json).and_then(|p| p.compact().align_to(target));
    p.map_err(|e| InputError::from(e).in_file(path))
}

pub fn rational(s: &str) -> Result<Rational, InputError> {
    parse_rational(s).map_err(InputError::from)
}

/// A star product named in an input file.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StarSpec {
    Moyal { poisson: PoissonJson },
    Gutt { lie: LieJson },
    Fedosov { input: FedosovJson },
    /// Explicit cochains `C_0, C_1, ...` with `C_0` the pointwise product.
    Cochains { vars: Vec<String>, cochains: Vec<MultiDiffOpJson> },
}

impl StarSpec {
    pub fn name(&self) -> &'static str {
        match self {
            StarSpec::Moyal { .. } => "moyal",
            StarSpec::Gutt { .. } => "gutt",
            StarSpec::Fedosov { .. } => "fedosov",
            StarSpec::Cochains { .. } => "cochains",
        }
    }

    /// Builds the product truncated at `ν^order`.
    pub fn build(&self, order: usize) -> Result<StarProduct, InputError> {
        Ok(match self {
            StarSpec::Moyal { poisson } => moyal_star(&ConstantPoisson::try_from(poisson)?, order),
            StarSpec::Gutt { lie } => gutt_star(&LieAlgebraData::try_from(lie)?, order)?,
            StarSpec::Fedosov { input } => Fedosov::new(FedosovInput::try_from(input)?, order)?.star_product()?,
            StarSpec::Cochains { vars, cochains } => {
                let vs = starforge::algebra::vars(vars);
                let ops = cochains.iter().map(MultiDiffOp::try_from).collect::<Result<Vec<_>, _>>()?;
                if ops.len() < order + 1 {
                    return Err(InputError::new(format!("{} cochains given, order {order} needs {}", ops.len(), order + 1)));
                }
                StarProduct::new(vs, ops)?.truncate(order)
            }
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssocInput {
    pub star: StarSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationInput {
    pub star: StarSpec,
    pub field: MultiDiffOpJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentInput {
    pub star: StarSpec,
    pub lie: LieJson,
    pub moment_map: Vec<PolyJson>,
}

/// `F` either as `exp(ν Σ P^{ab} e_a ⊗ e_b)` or as explicit terms
/// `[word_1, word_2, ν-power, "coeff"]`.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TwistSpec {
    Exponential(Vec<Vec<String>>),
    Terms(Vec<(Vec<usize>, Vec<usize>, u32, String)>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistInput {
    pub lie: LieJson,
    pub twist: TwistSpec,
    #[serde(default)]
    pub action: Vec<MultiDiffOpJson>,
}

impl TwistInput {
    pub fn build(&self, order: u32) -> Result<(TwistElement, Vec<MultiDiffOp>), InputError> {
        let lie = LieAlgebraData::try_from(&self.lie)?;
        let f = match &self.twist {
            TwistSpec::Exponential(p) => {
                let p = p.iter().map(|row| row.iter().map(|s| rational(s)).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
                TwistElement::exponential(lie, &p, order)?
            }
            TwistSpec::Terms(ts) => {
                let ts = ts
                    .iter()
                    .map(|(a, b, k, c)| Ok((a.clone(), b.clone(), *k, rational(c)?)))
                    .collect::<Result<Vec<_>, InputError>>()?;
                TwistElement::new(lie, order, &ts)?
            }
        };
        let action = self.action.iter().map(MultiDiffOp::try_from).collect::<Result<Vec<_>, _>>()?;
        Ok((f, action))
    }
}

/// Ambient product, symmetry algebra, the indices of the momentum
/// coordinates and of the coordinates kept after reduction.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionInput {
    pub ambient: StarSpec,
    pub lie: LieJson,
    pub mu: Vec<usize>,
    pub reduced: Vec<usize>,
    #[serde(default = "zero_string")]
    pub kappa: String,
}

fn zero_string() -> String {
    "0".into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_a_pointer() {
        let text = r#"{"vars": ["q"], "terms": [{"coeff": 3, "exp": [1]}]}"#;
        let e = parse::<PolyJson>(text).unwrap_err();
        assert_eq!(e.pointer.as_deref(), Some("/terms/0/coeff"));
        assert!(e.message.contains("line 1"));
    }

    #[test]
    fn star_specs() {
        let text = r#"{"kind": "moyal", "poisson": {"vars": ["q", "p"], "matrix": [["0", "1"], ["-1", "0"]]}}"#;
        let s: StarSpec = parse(text).unwrap();
        assert_eq!(s.build(2).unwrap(), moyal_star(&ConstantPoisson::standard(1), 2));
        let bad = r#"{"kind": "weyl"}"#;
        assert!(parse::<StarSpec>(bad).is_err());
    }
}
