//! Delimited trajectory export of mission traces, one row per step, for
//! plotting shepherd/flock paths.

use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use herding_core::hier::SkillKind;
use herding_core::mission::MissionTrace;
use herding_core::Vec2;

fn skill_name(skill: SkillKind) -> &'static str {
    match skill {
        SkillKind::Collect => "collect",
        SkillKind::Drive => "drive",
    }
}

/// Render the trace as comma-separated text: a header row, then one row per
/// step with positions at 6-decimal fixed precision.
pub fn render_trajectory(trace: &MissionTrace) -> String {
    let n_sheep = trace.final_sheep.len();
    let mut out = String::new();
    out.push_str("step,time_s");
    out.push_str(",dog_x,dog_y");
    for i in 0..n_sheep {
        out.push_str(&format!(",sheep{i}_x,sheep{i}_y"));
    }
    out.push_str(",cm_x,cm_y,subgoal_x,subgoal_y,skill,reward\n");
    for s in &trace.steps {
        out.push_str(&format!("{},{:.6}", s.index, s.time_s));
        out.push_str(&format!(",{:.6},{:.6}", s.dog.x, s.dog.y));
        for p in &s.sheep {
            out.push_str(&format!(",{:.6},{:.6}", p.x, p.y));
        }
        out.push_str(&format!(
            ",{:.6},{:.6},{:.6},{:.6},{},{:.6}\n",
            s.cm.x,
            s.cm.y,
            s.subgoal.x,
            s.subgoal.y,
            skill_name(s.skill),
            s.reward
        ));
    }
    out
}

/// Write the rendered trajectory to `path`.
pub fn export_trajectory(trace: &MissionTrace, path: &Path) -> Result<()> {
    let text = render_trajectory(trace);
    let mut f = std::fs::File::create(path)
        .with_context(|| format!("cannot create trajectory file {}", path.display()))?;
    f.write_all(text.as_bytes())
        .with_context(|| format!("cannot write trajectory file {}", path.display()))?;
    Ok(())
}

/// One parsed trajectory row; only the numeric geometry, for round-trip
/// checks and downstream tooling.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub step: usize,
    pub time_s: f64,
    pub dog: Vec2,
    pub sheep: Vec<Vec2>,
    pub cm: Vec2,
    pub subgoal: Vec2,
    pub skill: String,
    pub reward: f64,
}

/// Parse text produced by `render_trajectory`.
pub fn parse_trajectory(text: &str) -> Result<Vec<TrajectoryRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty trajectory"))?;
    // 10 fixed columns (step, time, dog, cm, subgoal, skill, reward) plus
    // two per sheep.
    let columns = header.split(',').count();
    if columns < 12 || (columns - 10) % 2 != 0 {
        bail!("malformed trajectory header: {header:?}");
    }
    let n_sheep = (columns - 10) / 2;
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns {
            bail!(
                "row {}: expected {columns} fields, got {}",
                lineno + 2,
                fields.len()
            );
        }
        let num = |i: usize| -> Result<f64> {
            fields[i]
                .parse::<f64>()
                .with_context(|| format!("row {}: bad number {:?}", lineno + 2, fields[i]))
        };
        let sheep = (0..n_sheep)
            .map(|i| Ok(Vec2::new(num(4 + 2 * i)?, num(5 + 2 * i)?)))
            .collect::<Result<Vec<_>>>()?;
        let base = 4 + 2 * n_sheep;
        rows.push(TrajectoryRow {
            step: fields[0]
                .parse()
                .with_context(|| format!("row {}: bad step index", lineno + 2))?,
            time_s: num(1)?,
            dog: Vec2::new(num(2)?, num(3)?),
            sheep,
            cm: Vec2::new(num(base)?, num(base + 1)?),
            subgoal: Vec2::new(num(base + 2)?, num(base + 3)?),
            skill: fields[base + 4].to_string(),
            reward: num(base + 5)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use herding_core::mission::TraceStep;

    fn sample_trace(n_steps: usize) -> MissionTrace {
        let steps = (0..n_steps)
            .map(|i| TraceStep {
                index: i,
                time_s: i as f64 * 0.1,
                dog: Vec2::new(1.0 + i as f64 * 0.137, 2.0),
                sheep: vec![Vec2::new(0.123456, 3.0), Vec2::new(2.5, 0.654321)],
                cm: Vec2::new(1.311728, 1.827161),
                subgoal: Vec2::new(3.0, 3.0),
                skill: if i % 2 == 0 {
                    SkillKind::Collect
                } else {
                    SkillKind::Drive
                },
                action: Vec2::new(0.5, -0.5),
                reward: 0.1,
            })
            .collect();
        MissionTrace {
            steps,
            final_dog: Vec2::new(1.0, 2.0),
            final_sheep: vec![Vec2::new(0.1, 3.0), Vec2::new(2.5, 0.7)],
            final_cm: Vec2::new(1.3, 1.85),
            success: true,
            goal: Vec2::new(0.5, 0.5),
            dt: 0.1,
        }
    }

    #[test]
    fn empty_trace_is_header_only() {
        let text = render_trajectory(&sample_trace(0));
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("step,time_s,dog_x,dog_y,sheep0_x"));
    }

    #[test]
    fn row_count_is_steps_plus_header() {
        let text = render_trajectory(&sample_trace(2));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn roundtrip_preserves_positions_to_1e6() {
        let trace = sample_trace(5);
        let rows = parse_trajectory(&render_trajectory(&trace)).unwrap();
        assert_eq!(rows.len(), 5);
        for (row, step) in rows.iter().zip(&trace.steps) {
            assert_eq!(row.step, step.index);
            assert!(row.dog.distance(step.dog) < 1e-6 * 2.0);
            for (a, b) in row.sheep.iter().zip(&step.sheep) {
                assert!(a.distance(*b) < 1e-6 * 2.0);
            }
            assert!(row.subgoal.distance(step.subgoal) < 1e-6 * 2.0);
            assert_eq!(
                row.skill,
                match step.skill {
                    SkillKind::Collect => "collect",
                    SkillKind::Drive => "drive",
                }
            );
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(parse_trajectory("").is_err());
        let mut text = render_trajectory(&sample_trace(1));
        text.push_str("1,2,3\n");
        assert!(parse_trajectory(&text).is_err());
    }
}
