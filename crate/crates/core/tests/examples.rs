//! Runs the quick examples so they cannot rot.

#[allow(dead_code)]
#[path = "../examples/single_episode.rs"]
mod single_episode;

#[allow(dead_code)]
#[path = "../examples/intercept.rs"]
mod intercept;

#[allow(dead_code)]
#[path = "../examples/cmac_basics.rs"]
mod cmac_basics;

#[allow(dead_code)]
#[path = "../examples/chain_sarsa.rs"]
mod chain_sarsa;

#[allow(dead_code)]
#[path = "../examples/train_and_evaluate.rs"]
mod train_and_evaluate;

#[allow(dead_code)]
#[path = "../examples/representation_ablation.rs"]
mod representation_ablation;

#[test]
fn single_episode_terminates() {
    let r = single_episode::run_example(3);
    assert_eq!(r.decisions.len() as u64, r.smdp_steps);
    assert_eq!(r.outcome.steps, r.sim_steps);
}

#[test]
fn intercept_prediction_matches_the_chase() {
    let (predicted, reached) = intercept::run_example();
    assert_eq!(reached, Some(predicted.steps));
}

#[test]
fn cmac_update_sizes() {
    let s = cmac_basics::run_example();
    assert_eq!((s[0].fields, s[0].q_after_update), (32, 4.0));
    assert_eq!((s[1].fields, s[1].q_after_update), (160, 20.0));
    assert!(s
        .iter()
        .all(|x| x.neighbour_q > 0.0 && x.neighbour_q < x.q_after_update));
}

#[test]
fn chain_prefers_moving_right() {
    for q in chain_sarsa::run_example() {
        assert!(q[0] > q[1]);
    }
}

#[test]
fn train_and_evaluate_writes_everything() {
    let dir = tempfile::tempdir().unwrap();
    let (summary, greedy, random) = train_and_evaluate::run_example(dir.path(), 40, 20);
    assert!(summary.best_snapshot.exists());
    assert!(dir.path().join("eval.csv").exists());
    assert_eq!(greedy.episodes, 20);
    assert_eq!(greedy.configs_digest, random.configs_digest);
}

#[test]
fn ablation_scores_both_layouts() {
    let arms = representation_ablation::run_example(20, 2, 10);
    assert_eq!(arms.len(), 2);
    assert!(arms.iter().all(|a| a.eval_rates.len() == 2 && a.best() <= 1.0));
}
