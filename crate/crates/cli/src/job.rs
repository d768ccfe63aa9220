//! The job schema shared by command-line flags and JSON job files.

use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use cover_core::cover::CoverConfig;
use cover_core::rootdata::{Coweight, RootDatum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Classify,
    Tables,
    Orbits,
    WhittakerReg,
    WhittakerUni,
    Zeta,
    VerifyHecke,
    VerifyPropp,
    VerifyUnikey,
    VerifyTwist,
    VerifyWhequi,
    VerifySl2,
    VerifyScatter,
    Scattering,
}

impl CommandName {
    pub fn label(self) -> &'static str {
        match self {
            CommandName::Classify => "classify",
            CommandName::Tables => "tables",
            CommandName::Orbits => "orbits",
            CommandName::WhittakerReg => "whittaker-reg",
            CommandName::WhittakerUni => "whittaker-uni",
            CommandName::Zeta => "zeta",
            CommandName::VerifyHecke => "verify-hecke",
            CommandName::VerifyPropp => "verify-propp",
            CommandName::VerifyUnikey => "verify-unikey",
            CommandName::VerifyTwist => "verify-twist",
            CommandName::VerifyWhequi => "verify-whequi",
            CommandName::VerifySl2 => "verify-sl2",
            CommandName::VerifyScatter => "verify-scatter",
            CommandName::Scattering => "scattering",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

/// A twisting coweight: fundamental-coweight coordinates, or `-rho`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TwistRepr", into = "TwistRepr")]
pub enum Twist {
    Coords(Vec<i64>),
    MinusRho,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TwistRepr {
    Coords(Vec<i64>),
    Name(String),
}

impl TryFrom<TwistRepr> for Twist {
    type Error = String;
    fn try_from(r: TwistRepr) -> Result<Self, String> {
        match r {
            TwistRepr::Coords(c) => Ok(Twist::Coords(c)),
            TwistRepr::Name(s) => s.parse(),
        }
    }
}

impl From<Twist> for TwistRepr {
    fn from(t: Twist) -> Self {
        match t {
            Twist::Coords(c) => TwistRepr::Coords(c),
            Twist::MinusRho => TwistRepr::Name("-rho".into()),
        }
    }
}

impl FromStr for Twist {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "-rho" | "minus-rho" => Ok(Twist::MinusRho),
            list => list
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| format!("bad twist `{s}`: expected `-rho` or integers"))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Twist::Coords),
        }
    }
}

impl Twist {
    pub fn resolve(&self, datum: &RootDatum) -> Result<Coweight, CliError> {
        Ok(match self {
            Twist::Coords(c) => datum.coweight(c)?,
            Twist::MinusRho => datum.rho().neg(),
        })
    }
}

/// One unit of work. Every field other than `command` is optional in the schema and
/// checked by the command that needs it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub command: CommandName,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub covers: Vec<CoverConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Twist>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_chi: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rgroup: Option<String>,
    /// Keep only the orbit with this canonical representative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<usize>>,
    /// Exponents of `zeta_{chi_order}` on the basis of the center.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default)]
    pub float: bool,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub strict: bool,
}

impl Job {
    pub fn new(command: CommandName) -> Self {
        Job {
            command,
            covers: Vec::new(),
            q: None,
            z: None,
            phi_chi: None,
            s: None,
            rgroup: None,
            orbit: None,
            word: None,
            chi: None,
            chi_order: None,
            samples: None,
            seed: None,
            window: None,
            n_max: None,
            float: false,
            format: Format::Json,
            output: None,
            strict: false,
        }
    }

    pub fn require_q(&self) -> Result<u64, CliError> {
        self.q
            .ok_or_else(|| CliError::Usage(format!("{} needs q", self.command.label())))
    }
}

/// The job-file document `{"jobs": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub jobs: Vec<Job>,
}
