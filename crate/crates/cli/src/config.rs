//! Settings shared by flags and the TOML config file.
//!
//! Every field is optional in both places; a flag wins over the file, and
//! the file wins over built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Kernel name
    #[arg(long)]
    pub kernel: Option<String>,
    /// implicit, explicit or both
    #[arg(long)]
    pub regime: Option<String>,
    /// Walk length ℓ
    #[arg(long)]
    pub length: Option<usize>,
    /// Max-walk weights λ_0..λ_ℓ, comma separated
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,
    /// Weisfeiler-Lehman iterations h
    #[arg(long)]
    pub wl_iters: Option<usize>,
    /// Hat-kernel width on attributes
    #[arg(long)]
    pub delta: Option<f64>,
    /// RBF width on attributes (implicit scheme only)
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Random binning grids P
    #[arg(long)]
    pub binning: Option<usize>,
    /// Largest clique size of subgraph matching
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Count disconnected matchings too
    #[arg(long)]
    #[serde(default)]
    pub all_subgraphs: bool,
    /// Seed for generators and random grids
    #[arg(long)]
    pub seed: Option<u64>,
    /// Feature budget of the approximate shortest-path map
    #[arg(long)]
    pub budget: Option<usize>,
    /// Timing repetitions (medians are reported)
    #[arg(long)]
    pub reps: Option<usize>,

    /// TU dataset directory
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// TU dataset name (file prefix); inferred from the directory if absent
    #[arg(long)]
    pub name: Option<String>,
    /// Synthetic generator instead of a dataset: labeled, alphabet or attributed
    #[arg(long)]
    pub generate: Option<String>,
    /// Number of generated graphs
    #[arg(long)]
    pub count: Option<usize>,
    /// Mean vertex count of generated graphs
    #[arg(long)]
    pub mean: Option<f64>,
    /// Edge probability of generated graphs
    #[arg(long)]
    pub edge_prob: Option<f64>,
    /// Label diversity p_V of the labeled generator
    #[arg(long)]
    pub pv: Option<f64>,
    /// Alphabet size of the alphabet generator
    #[arg(long)]
    pub alphabet: Option<usize>,
    /// Attribute dimension of the attributed generator
    #[arg(long)]
    pub dim: Option<usize>,

    /// Sweep axis: pv, length or alphabet
    #[arg(long)]
    pub axis: Option<String>,
    /// Sweep axis values, comma separated
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Sweep dataset sizes, comma separated
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Use full-scale grids (100–300 graphs) instead of desk-scale ones
    #[arg(long)]
    #[serde(default)]
    pub full_scale: bool,
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// `self` with unset fields taken from `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            kernel: self.kernel.or(base.kernel),
            regime: self.regime.or(base.regime),
            length: self.length.or(base.length),
            lambda: self.lambda.or(base.lambda),
            wl_iters: self.wl_iters.or(base.wl_iters),
            delta: self.delta.or(base.delta),
            sigma: self.sigma.or(base.sigma),
            binning: self.binning.or(base.binning),
            max_size: self.max_size.or(base.max_size),
            all_subgraphs: self.all_subgraphs || base.all_subgraphs,
            seed: self.seed.or(base.seed),
            budget: self.budget.or(base.budget),
            reps: self.reps.or(base.reps),
            dataset: self.dataset.or(base.dataset),
            name: self.name.or(base.name),
            generate: self.generate.or(base.generate),
            count: self.count.or(base.count),
            mean: self.mean.or(base.mean),
            edge_prob: self.edge_prob.or(base.edge_prob),
            pv: self.pv.or(base.pv),
            alphabet: self.alphabet.or(base.alphabet),
            dim: self.dim.or(base.dim),
            axis: self.axis.or(base.axis),
            values: self.values.or(base.values),
            sizes: self.sizes.or(base.sizes),
            full_scale: self.full_scale || base.full_scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: Settings = toml::from_str("kernel = \"walk\"\nlength = 3\nwl-iters = 4\n").unwrap();
        let flags = Settings {
            length: Some(5),
            ..Settings::default()
        };
        let s = flags.over(file);
        assert_eq!(s.kernel.as_deref(), Some("walk"));
        assert_eq!(s.length, Some(5));
        assert_eq!(s.wl_iters, Some(4));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Settings>("lenght = 3").is_err());
    }
}
