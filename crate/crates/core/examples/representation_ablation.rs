//! Joint tiles against one tiling per variable at an equal training budget,
//! scored on the same evaluation configurations.
//!
//! `cargo run --release --example representation_ablation -- 20000 3`

use soccer_dribbling::cmac::CmacMode;
use soccer_dribbling::harness::{evaluate_network, train_runs, EvalPolicy, ExperimentConfig, Mode};

#[derive(Debug)]
pub struct Arm {
    pub mode: CmacMode,
    pub training_win_rates: Vec<f64>,
    /// Greedy success rate of every run's network.
    pub eval_rates: Vec<f64>,
}

impl Arm {
    pub fn best(&self) -> f64 {
        self.eval_rates.iter().copied().fold(0.0, f64::max)
    }
}

pub fn run_example(episodes: u64, seeds: u32, eval_episodes: u64) -> Vec<Arm> {
    [CmacMode::MultiDim, CmacMode::OneDim]
        .into_iter()
        .map(|mode| {
            let mut config = ExperimentConfig {
                episodes,
                runs: seeds,
                seed: 7,
                ..ExperimentConfig::default()
            };
            config.tiling.mode = mode;
            let runs = train_runs(&config).expect("valid configuration");
            let eval = ExperimentConfig {
                mode: Mode::Eval,
                episodes: eval_episodes,
                ..config
            };
            Arm {
                mode,
                training_win_rates: runs.iter().map(|r| r.win_rate()).collect(),
                eval_rates: runs
                    .iter()
                    .map(|r| {
                        let report = evaluate_network(&eval, &r.network, EvalPolicy::Greedy).expect("matching mode");
                        report.success_rate().unwrap_or(0.0)
                    })
                    .collect(),
            }
        })
        .collect()
}

fn main() {
    let mut args = std::env::args().skip(1);
    let episodes = args.next().and_then(|a| a.parse().ok()).unwrap_or(3000);
    let seeds = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    for arm in run_example(episodes, seeds, 1000) {
        println!(
            "{:>5}: training {:?}, eval {:?}, best {:.1}%",
            arm.mode.as_str(),
            arm.training_win_rates
                .iter()
                .map(|r| format!("{:.1}", 100.0 * r))
                .collect::<Vec<_>>(),
            arm.eval_rates
                .iter()
                .map(|r| format!("{:.1}", 100.0 * r))
                .collect::<Vec<_>>(),
            100.0 * arm.best()
        );
    }
}
