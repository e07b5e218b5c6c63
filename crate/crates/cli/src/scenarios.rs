//! Named testing scenarios selectable from the command line.
//!
//! Covers the eight simulation test IDs plus the four 6×6 follow-up IDs.
//! The DHRL rows (a discrete-action predecessor method) and the physical
//! `-Phy` rows are recognized by name but report themselves as unsupported,
//! so asking for them produces a clear diagnostic instead of a silent
//! substitute.

/// How a scenario's shepherd is controlled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioKind {
    /// Rule-based shepherd; no checkpoints needed.
    Baseline { arena_side: f64 },
    /// Trained collect/drive agents; when `train_side != eval_side` the
    /// policies are scale-wrapped for the evaluation arena.
    Learned { train_side: f64, eval_side: f64 },
    /// Recognized name that this simulator cannot run.
    Unsupported { reason: &'static str },
}

#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub id: &'static str,
    pub description: &'static str,
    pub kind: ScenarioKind,
}

const DHRL_REASON: &str =
    "DHRL is the discrete-action predecessor method; only its published numbers exist here";
const PHY_REASON: &str = "physical-robot scenarios need hardware, not this simulator";

pub const SCENARIOS: &[Scenario] = &[
    Scenario {
        id: "Strombom-4x4",
        description: "rule-based shepherd in the 4x4 arena",
        kind: ScenarioKind::Baseline { arena_side: 4.0 },
    },
    Scenario {
        id: "Strombom-6x6",
        description: "rule-based shepherd in the 6x6 arena",
        kind: ScenarioKind::Baseline { arena_side: 6.0 },
    },
    Scenario {
        id: "DHRL-4x4",
        description: "discrete-action learner in the 4x4 arena",
        kind: ScenarioKind::Unsupported { reason: DHRL_REASON },
    },
    Scenario {
        id: "DHRL-6x6",
        description: "discrete-action learner in the 6x6 arena",
        kind: ScenarioKind::Unsupported { reason: DHRL_REASON },
    },
    Scenario {
        id: "DHRL-4x4to6x6",
        description: "discrete-action learner transferred 4x4 to 6x6",
        kind: ScenarioKind::Unsupported { reason: DHRL_REASON },
    },
    Scenario {
        id: "H-DDPG-4x4",
        description: "4x4-trained agents evaluated in the 4x4 arena",
        kind: ScenarioKind::Learned { train_side: 4.0, eval_side: 4.0 },
    },
    Scenario {
        id: "H-DDPG-6x6",
        description: "6x6-trained agents evaluated in the 6x6 arena",
        kind: ScenarioKind::Learned { train_side: 6.0, eval_side: 6.0 },
    },
    Scenario {
        id: "H-DDPG-4x4to6x6",
        description: "4x4-trained agents scale-wrapped into the 6x6 arena",
        kind: ScenarioKind::Learned { train_side: 4.0, eval_side: 6.0 },
    },
    Scenario {
        id: "HDDPG-6x6-Sim",
        description: "6x6-trained agents evaluated in the 6x6 arena",
        kind: ScenarioKind::Learned { train_side: 6.0, eval_side: 6.0 },
    },
    Scenario {
        id: "HDDPG-4x4to6x6-Sim",
        description: "4x4-trained agents scale-wrapped into the 6x6 arena",
        kind: ScenarioKind::Learned { train_side: 4.0, eval_side: 6.0 },
    },
    Scenario {
        id: "HDDPG-6x6-Phy",
        description: "6x6-trained agents on physical robots",
        kind: ScenarioKind::Unsupported { reason: PHY_REASON },
    },
    Scenario {
        id: "HDDPG-4x4to6x6-Phy",
        description: "4x4-trained agents on physical robots, scale-wrapped",
        kind: ScenarioKind::Unsupported { reason: PHY_REASON },
    },
];

/// Case-sensitive lookup by testing ID.
pub fn lookup(id: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.id == id)
}

/// One line per scenario, for usage messages.
pub fn listing() -> String {
    SCENARIOS
        .iter()
        .map(|s| format!("  {:22} {}", s.id, s.description))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn looks_up_known_ids() {
        assert!(matches!(
            lookup("Strombom-4x4").unwrap().kind,
            ScenarioKind::Baseline { arena_side } if arena_side == 4.0
        ));
        assert!(matches!(
            lookup("H-DDPG-4x4to6x6").unwrap().kind,
            ScenarioKind::Learned { train_side, eval_side }
                if train_side == 4.0 && eval_side == 6.0
        ));
        assert!(lookup("H-DDPG-9x9").is_none());
    }

    #[test]
    fn unsupported_rows_say_why() {
        for id in ["DHRL-4x4", "DHRL-6x6", "DHRL-4x4to6x6", "HDDPG-6x6-Phy"] {
            assert!(matches!(
                lookup(id).unwrap().kind,
                ScenarioKind::Unsupported { .. }
            ));
        }
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = SCENARIOS.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), SCENARIOS.len());
    }
}
