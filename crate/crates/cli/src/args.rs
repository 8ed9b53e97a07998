use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "isoprod",
    version,
    about = "Character tables, branched covers and surfaces isogenous to a product"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Character-table cache directory.
    #[arg(long, env = "ISOPROD_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the on-disk character-table cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,
    /// Seed for sampled associativity checks on large tables.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the character table of a group.
    Chartab { group: String },
    /// Enumerate generating vectors and the covers they define.
    Covers(CoversArgs),
    /// Build surfaces for one group, from two given vectors or by sweeping.
    Surfaces(SurfacesArgs),
    /// Classify surfaces over many groups and check nontrivial Aut0.
    Classify(ClassifyArgs),
    /// Build a member of one of the explicit families and check it.
    VerifyExample(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CoversArgs {
    pub group: String,
    /// Genus of the base curve.
    #[arg(long = "b", default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=4))]
    pub base_genus: u8,
    /// Exact branch orders, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "max_r")]
    pub branch: Option<Vec<usize>>,
    /// Largest number of branch points.
    #[arg(long, default_value_t = 4)]
    pub max_r: usize,
    #[arg(long, default_value_t = 65)]
    pub genus_cap: u64,
    #[arg(long, default_value_t = 2)]
    pub min_genus: u64,
    /// Keep one vector per automorphism orbit.
    #[arg(long)]
    pub dedup: bool,
    #[arg(long)]
    pub max_results: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SurfacesArgs {
    pub group: String,
    /// First vector as JSON, e.g. '{"b":1,"alphas":[2],"betas":[1],"gammas":[2,2]}'.
    #[arg(long, requires = "vd")]
    pub vc: Option<String>,
    /// Second vector as JSON.
    #[arg(long, requires = "vc")]
    pub vd: Option<String>,
    #[command(flatten)]
    pub bounds: BoundArgs,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_r: u32,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_s: u32,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_branch_order: u32,
    #[arg(long, default_value_t = 33, value_parser = clap::value_parser!(u64).range(1..))]
    pub genus_cap: u64,
    /// Base genera pairs, e.g. `1x1,2x2`.
    #[arg(long, value_delimiter = ',', default_value = "1x1", value_parser = parse_genus_pair)]
    pub base_genera: Vec<(usize, usize)>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Comma-separated group specs; defaults to every built-in group within
    /// the order bound.
    #[arg(long)]
    pub groups: Option<String>,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..=128))]
    pub max_group_order: u32,
    #[command(flatten)]
    pub bounds: BoundArgs,
    /// Which records to emit.
    #[arg(long, value_enum, default_value_t = Emit::Nontrivial)]
    pub emit: Emit,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    /// Only surfaces with nontrivial Aut0.
    Nontrivial,
    All,
    /// Summary only.
    None,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// `1`/`z2m_z2mn` or `2`/`z2_z2m_z2mn`.
    #[arg(long)]
    pub family: String,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

fn parse_genus_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', ':'])
        .ok_or_else(|| format!("expected `<b>x<b'>`, got `{s}`"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad genus `{t}`"))
    };
    Ok((parse(a)?, parse(b)?))
}
