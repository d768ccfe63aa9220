//! Command-line flags, lowered onto [`Job`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cover_core::cover::CoverConfig;
use cover_core::rootdata::{CartanType, Flavor};

use crate::job::{CommandName, Format, Job, Twist};

#[derive(Debug, Parser)]
#[command(
    name = "covers",
    version,
    about = "Exact computations for n-fold covers of split p-adic groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Exit with code 2 when any row lies outside the hypotheses of its theorem.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CoverArgs {
    #[arg(long = "type")]
    pub cartan_type: CartanType,
    /// Semisimple rank; for the GL flavor this is r - 1 for GL_r.
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub n: u64,
    /// Q on the short coroots, one value per coroot length, or one per simple coroot.
    #[arg(long = "Q", value_delimiter = ',', allow_negative_numbers = true)]
    pub q_values: Option<Vec<i64>>,
    #[arg(long, default_value = "sc")]
    pub flavor: Flavor,
    /// `p,q` for the GL flavor: B(e_i, e_i) = 2p, B(e_i, e_j) = q.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        num_args = 1
    )]
    pub gl_pq: Option<Vec<i64>>,
}

impl CoverArgs {
    fn config(self) -> CoverConfig {
        CoverConfig {
            cartan_type: self.cartan_type,
            rank: self.rank,
            flavor: self.flavor,
            n: self.n,
            q_values: self.q_values,
            gl_pq: self.gl_pq.map(|v| {
                (
                    v.first().copied().unwrap_or(0),
                    v.get(1).copied().unwrap_or(0),
                )
            }),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TwistArg {
    /// Twist in fundamental coweight coordinates, or `-rho`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<Twist>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Saturation, alignment and oasitic predicates of one cover.
    Classify {
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        twist: TwistArg,
    },
    /// The predicate sweep over all supported types with Q(short coroot) = 1.
    Tables {
        #[arg(long, default_value_t = 12)]
        n_max: u64,
    },
    /// Twisted Weyl orbits on Y / Y_{Q,n}.
    Orbits {
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        twist: TwistArg,
        /// Keep only the orbit with this canonical representative.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        orbit: Option<Vec<i64>>,
    },
    /// Orbitwise Whittaker dimensions of regular unramified principal series.
    WhittakerReg {
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        twist: TwistArg,
        /// Simple roots in Phi(chi), 0-based; defaults to all.
        #[arg(long, value_delimiter = ',')]
        phi_chi: Option<Vec<usize>>,
        /// A single S within Phi(chi); defaults to every subset.
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<usize>>,
    },
    /// Whittaker dimensions of the constituents of a unitary principal series.
    WhittakerUni {
        #[command(flatten)]
        cover: CoverArgs,
        /// R-group label from the registry, such as `Z/2`; defaults to all.
        #[arg(long)]
        rgroup: Option<String>,
    },
    /// The quadratic character zeta_rho on each registered R-group.
    Zeta {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        rgroup: Option<String>,
    },
    /// Exhaustive consistency checks; exit code 4 when a check fails.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// The scattering matrix of a reduced word at a root-of-unity character.
    Scattering {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        q: u64,
        /// Simple reflection indices, 0-based, left to right; omit for the identity.
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
        /// Exponents of zeta_{chi-order} on the basis of Y_{Q,n}.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        chi: Vec<i64>,
        #[arg(long, default_value_t = 7)]
        chi_order: u64,
        #[command(flatten)]
        twist: TwistArg,
        /// Emit complex floating entries instead of exact cyclotomic ones.
        #[arg(long)]
        float: bool,
    },
    /// Execute a JSON job file `{"jobs": [...]}`.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Quadratic, braid and Bernstein relations on the Gelfand-Graev module.
    Hecke {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        q: u64,
        /// Minimum number of window vectors.
        #[arg(long, default_value_t = 50)]
        window: usize,
    },
    /// The pro-p Iwahori-Hecke algebra of SL_2 from its presentation.
    Propp {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        q: u64,
        /// Random associativity triples.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Affine-wall stabilizers against conjugates of each R-group.
    Unikey {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        rgroup: Option<String>,
    },
    /// Twisted versus untwisted permutation characters; every class of P/Y by default.
    Twist {
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        twist: TwistArg,
    },
    /// Whittaker dimensions under the twist by -rho.
    Whequi {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        rgroup: Option<String>,
    },
    /// The special component of an SL_2 cover with n* even.
    Sl2 {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 10)]
        window: usize,
    },
    /// Cocycle, support and block checks of scattering matrices on sampled characters.
    Scatter {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        twist: TwistArg,
        /// Random unitary characters; five exact characters are always added.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn with_cover(command: CommandName, cover: CoverArgs) -> Job {
    let mut job = Job::new(command);
    job.covers.push(cover.config());
    job
}

impl Command {
    /// The job this invocation describes, or the job-file path for `run`.
    pub fn into_job(self) -> Result<Job, PathBuf> {
        Ok(match self {
            Command::Classify { cover, twist } => Job {
                z: twist.z,
                ..with_cover(CommandName::Classify, cover)
            },
            Command::Tables { n_max } => Job {
                n_max: Some(n_max),
                ..Job::new(CommandName::Tables)
            },
            Command::Orbits {
                cover,
                twist,
                orbit,
            } => Job {
                z: twist.z,
                orbit,
                ..with_cover(CommandName::Orbits, cover)
            },
            Command::WhittakerReg {
                cover,
                twist,
                phi_chi,
                s,
            } => Job {
                z: twist.z,
                phi_chi,
                s,
                ..with_cover(CommandName::WhittakerReg, cover)
            },
            Command::WhittakerUni { cover, rgroup } => Job {
                rgroup,
                ..with_cover(CommandName::WhittakerUni, cover)
            },
            Command::Zeta { cover, rgroup } => Job {
                rgroup,
                ..with_cover(CommandName::Zeta, cover)
            },
            Command::Scattering {
                cover,
                q,
                word,
                chi,
                chi_order,
                twist,
                float,
            } => Job {
                q: Some(q),
                word: Some(word),
                chi: Some(chi),
                chi_order: Some(chi_order),
                z: twist.z,
                float,
                ..with_cover(CommandName::Scattering, cover)
            },
            Command::Verify(v) => v.into_job(),
            Command::Run { config } => return Err(config),
        })
    }
}

impl VerifyCommand {
    fn into_job(self) -> Job {
        match self {
            VerifyCommand::Hecke { cover, q, window } => Job {
                q: Some(q),
                window: Some(window),
                ..with_cover(CommandName::VerifyHecke, cover)
            },
            VerifyCommand::Propp {
                cover,
                q,
                samples,
                seed,
            } => Job {
                q: Some(q),
                samples: Some(samples),
                seed: Some(seed),
                ..with_cover(CommandName::VerifyPropp, cover)
            },
            VerifyCommand::Unikey { cover, rgroup } => Job {
                rgroup,
                ..with_cover(CommandName::VerifyUnikey, cover)
            },
            VerifyCommand::Twist { cover, twist } => Job {
                z: twist.z,
                ..with_cover(CommandName::VerifyTwist, cover)
            },
            VerifyCommand::Whequi { cover, rgroup } => Job {
                rgroup,
                ..with_cover(CommandName::VerifyWhequi, cover)
            },
            VerifyCommand::Sl2 { cover, q, window } => Job {
                q: Some(q),
                window: Some(window),
                ..with_cover(CommandName::VerifySl2, cover)
            },
            VerifyCommand::Scatter {
                cover,
                q,
                twist,
                samples,
                seed,
            } => Job {
                q: Some(q),
                z: twist.z,
                samples: Some(samples),
                seed: Some(seed),
                ..with_cover(CommandName::VerifyScatter, cover)
            },
        }
    }
}
