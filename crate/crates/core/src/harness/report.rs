use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::env::{TerminationCause, Winner};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpisodeRecord {
    pub run: u32,
    /// 0-based and contiguous within a run.
    pub episode: u64,
    pub winner: Winner,
    pub cause: TerminationCause,
    pub smdp_steps: u64,
    pub sim_steps: u64,
}

pub const EPISODE_CSV_HEADER: &str = "run,episode,winner,cause,smdp_steps,sim_steps";
pub const HISTOGRAM_CSV_HEADER: &str = "bin_start,avg_wins";

pub fn write_episode_csv<W: Write>(records: &[EpisodeRecord], out: &mut W) -> io::Result<()> {
    writeln!(out, "{EPISODE_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.run,
            r.episode,
            r.winner.as_str(),
            r.cause.as_str(),
            r.smdp_steps,
            r.sim_steps
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistogramRow {
    pub bin_start: u64,
    /// Dribbler wins in this bin, averaged over runs.
    pub avg_wins: f64,
}

/// Splits each run into consecutive bins of `bin` episodes and averages the
/// dribbler's win count per bin across runs. A trailing partial bin is kept.
pub fn emit_histogram(records: &[EpisodeRecord], bin: u64) -> Vec<HistogramRow> {
    assert!(bin >= 1, "histogram bin must be at least 1");
    let mut per_run: BTreeMap<u32, BTreeMap<u64, u64>> = BTreeMap::new();
    for r in records {
        let wins = per_run.entry(r.run).or_default().entry(r.episode / bin).or_insert(0);
        if r.winner == Winner::Dribbler {
            *wins += 1;
        }
    }
    let runs = per_run.len() as f64;
    let mut totals: BTreeMap<u64, u64> = BTreeMap::new();
    for bins in per_run.values() {
        for (&b, &w) in bins {
            *totals.entry(b).or_insert(0) += w;
        }
    }
    totals
        .into_iter()
        .map(|(b, w)| HistogramRow {
            bin_start: b * bin,
            avg_wins: w as f64 / runs,
        })
        .collect()
}

pub fn write_histogram_csv<W: Write>(rows: &[HistogramRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "{HISTOGRAM_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{}", r.bin_start, r.avg_wins)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(run: u32, episode: u64, win: bool) -> EpisodeRecord {
        EpisodeRecord {
            run,
            episode,
            winner: if win { Winner::Dribbler } else { Winner::Adversary },
            cause: if win {
                TerminationCause::RightLineDribbler
            } else {
                TerminationCause::AdversaryHold
            },
            smdp_steps: 3,
            sim_steps: 20,
        }
    }

    #[test]
    fn all_wins_fill_each_bin() {
        let records: Vec<_> = (0..1000).map(|e| rec(0, e, true)).collect();
        let h = emit_histogram(&records, 500);
        assert_eq!(h.len(), 2);
        assert!(h.iter().all(|r| r.avg_wins == 500.0));
        assert_eq!(h[1].bin_start, 500);
    }

    #[test]
    fn alternating_outcomes_halve_each_bin() {
        let records: Vec<_> = (0..1000).map(|e| rec(0, e, e % 2 == 0)).collect();
        assert!(emit_histogram(&records, 100).iter().all(|r| r.avg_wins == 50.0));
    }

    #[test]
    fn averages_across_runs() {
        let mut records = Vec::new();
        for (run, wins) in [100u64, 110, 120, 130, 140].into_iter().enumerate() {
            for e in 0..500 {
                records.push(rec(run as u32, e, e < wins));
            }
        }
        let h = emit_histogram(&records, 500);
        assert_eq!(
            h,
            vec![HistogramRow {
                bin_start: 0,
                avg_wins: 120.0
            }]
        );
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        write_episode_csv(&[rec(1, 7, true)], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "run,episode,winner,cause,smdp_steps,sim_steps\n1,7,dribbler,right_line_dribbler,3,20\n"
        );
        let mut out = Vec::new();
        write_histogram_csv(
            &[HistogramRow {
                bin_start: 500,
                avg_wins: 12.5,
            }],
            &mut out,
        )
        .unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "bin_start,avg_wins\n500,12.5\n");
    }
}
