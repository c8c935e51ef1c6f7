//! Trains a few runs through the file-writing harness, then evaluates the
//! best snapshot greedily and compares it with random play.

use std::path::Path;

use soccer_dribbling::cmac::CmacNetwork;
use soccer_dribbling::harness::{
    evaluate, evaluate_network, train, EvalPolicy, EvalReport, ExperimentConfig, Mode, TrainSummary,
};

pub fn run_example(dir: &Path, episodes: u64, eval_episodes: u64) -> (TrainSummary, EvalReport, EvalReport) {
    let config = ExperimentConfig {
        episodes,
        runs: 2,
        seed: 2024,
        histogram_bin: (episodes / 4).max(1),
        snapshot_path: dir.join("snapshots"),
        log_path: dir.join("train.csv"),
        histogram_path: dir.join("histogram.csv"),
        ..ExperimentConfig::default()
    };
    let summary = train(&config).expect("training");

    let eval = ExperimentConfig {
        mode: Mode::Eval,
        episodes: eval_episodes,
        snapshot_path: summary.best_snapshot.clone(),
        log_path: dir.join("eval.csv"),
        ..config.clone()
    };
    let greedy = evaluate(&eval).expect("evaluation");
    let untrained = CmacNetwork::new(eval.tiling, 5).expect("valid tiling");
    let random = evaluate_network(&eval, &untrained, EvalPolicy::UniformRandom).expect("evaluation");
    (summary, greedy, random)
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let (summary, greedy, random) = run_example(dir.path(), 2000, 500);
    for row in &summary.histogram {
        println!("episodes {:>5}..: {:.1} wins", row.bin_start, row.avg_wins);
    }
    println!(
        "best run: {} ({:.1}% wins)",
        summary.best_run,
        100.0 * summary.run_win_rates[summary.best_run as usize]
    );
    println!("greedy evaluation:\n{greedy}");
    println!("random policy: {:.1}%", 100.0 * random.success_rate().unwrap_or(0.0));
}
