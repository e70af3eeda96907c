use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "tdforge", version, about = "Tree decompositions hosted on spanning trees: constructions, transforms, certificates and exact search")]
pub struct Cli {
    /// Seed for every sampled quantification.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML file with cap overrides.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Run manifest path (default: `<output>.manifest.json`, or `tdforge-run.manifest.json`).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a reflected-tree or a gadget graph.
    #[command(subcommand)]
    Construct(Construct),
    /// Print the gadget schedule for (k, n) with exact integers where they fit.
    Schedule {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: usize,
    },
    /// Decomposition transformations.
    #[command(subcommand)]
    Transform(Transform),
    /// Width certificates for spanning trees of a reflected-tree.
    Certify(CertifyArgs),
    /// Check a decomposition against a certificate's hub bound.
    Audit {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Exact search engines.
    #[command(subcommand)]
    Search(Search),
    /// Validate a decomposition or a certificate.
    #[command(subcommand)]
    Verify(Verify),
    /// End-to-end demonstration at toy scale for a given k.
    Pipeline(PipelineArgs),
    /// DOT exports.
    #[command(subcommand)]
    Export(Export),
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    ReflectedTree {
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
    },
    Gadget(GadgetArgs),
}

#[derive(Debug, Args)]
pub struct ToyArgs {
    /// Comma-separated heights, or one value for every vertex.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub toy_heights: Option<Vec<i64>>,
    /// Comma-separated widths, or one value for every vertex.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub toy_widths: Option<Vec<i64>>,
}

#[derive(Debug, Args)]
pub struct GadgetArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub graph: PathBuf,
    /// a_1,…,a_n (default: the graph's vertex order).
    #[arg(long, value_delimiter = ',')]
    pub ordering: Option<Vec<String>>,
    #[command(flatten)]
    pub toy: ToyArgs,
    /// Materialization cap in vertices.
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Transform {
    MinorToSpanning {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    Reduce {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long, required_unless_present_any = ["all", "sample"], conflicts_with_all = ["all", "sample"])]
    pub spanning_tree: Option<PathBuf>,
    /// Every spanning tree (refused above the enumeration cap).
    #[arg(long, conflicts_with = "sample")]
    pub all: bool,
    /// N uniformly sampled spanning trees.
    #[arg(long)]
    pub sample: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Search {
    Decide {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        anchored: bool,
    },
    MinAnchored {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    Tw {
        #[arg(long)]
        graph: PathBuf,
        /// Largest vertex count for the exact DP.
        #[arg(long)]
        cap: Option<usize>,
    },
    Spanning {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    Td {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    Certificate {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub k: u64,
    #[command(flatten)]
    pub toy: ToyArgs,
}

#[derive(Debug, Subcommand)]
pub enum Export {
    /// Graph, decomposition or gadget instance JSON to DOT (format detected from keys).
    Dot {
        #[arg(long)]
        input: PathBuf,
    },
}
