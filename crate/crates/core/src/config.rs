use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Bounded rectangular test area with the herding goal inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArenaConfig {
    pub width: f64,
    pub height: f64,
    pub goal: Vec2,
    /// Radius around the goal every sheep must reach for mission success.
    pub goal_radius: f64,
}

impl ArenaConfig {
    pub fn new(width: f64, height: f64, goal: Vec2, goal_radius: f64) -> Result<ArenaConfig> {
        if !(width > 0.0 && height > 0.0) {
            return Err(Error::InvalidInput("arena extents must be positive".into()));
        }
        if !(goal.x >= 0.0 && goal.x <= width && goal.y >= 0.0 && goal.y <= height) {
            return Err(Error::InvalidInput("goal must lie inside the arena".into()));
        }
        if !(goal_radius > 0.0) {
            return Err(Error::InvalidInput("goal_radius must be positive".into()));
        }
        Ok(ArenaConfig {
            width,
            height,
            goal,
            goal_radius,
        })
    }

    /// Square arena with the goal pen tucked into the lower-left corner, the
    /// layout used by all built-in scenarios. Missions start with the flock
    /// on the far side, so the driving distance grows with the arena.
    pub fn square(side: f64) -> ArenaConfig {
        let inset = (side / 8.0).min(0.2);
        ArenaConfig::new(side, side, Vec2::new(inset, inset), 2.0)
            .expect("side must be positive")
    }

    /// Hard per-component clamp into `[0,width]×[0,height]`.
    pub fn clamp(&self, p: Vec2) -> Vec2 {
        Vec2::new(p.x.clamp(0.0, self.width), p.y.clamp(0.0, self.height))
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }
}

/// Every physical parameter of the flock and shepherd models in one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwarmParams {
    /// Sheep-to-sheep sensing range (m).
    pub r_sheep_sheep: f64,
    /// Sheep-to-shepherd sensing range (m).
    pub r_sheep_dog: f64,
    /// Weight on the previous step's total force.
    pub w_inertia: f64,
    /// Weight on attraction to the flock center of mass.
    pub w_lcm: f64,
    /// Weight on repulsion from the shepherd.
    pub w_dog: f64,
    /// Weight on sheep-to-sheep separation.
    pub w_sep: f64,
    /// Fixed gathered-flock radius; when unset, `r_sheep_sheep * N^(2/3)` is used.
    pub f_n_override: Option<f64>,
    /// Unit distance u scaling the driving/collecting sub-goal offsets (m).
    pub unit_distance: f64,
    /// Sheep speed (m/s).
    pub sheep_speed: f64,
    /// Baseline shepherd speed (m/s).
    pub dog_speed: f64,
    /// Simulation time step (s).
    pub dt: f64,
}

impl SwarmParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("r_sheep_sheep", self.r_sheep_sheep),
            ("r_sheep_dog", self.r_sheep_dog),
            ("unit_distance", self.unit_distance),
            ("sheep_speed", self.sheep_speed),
            ("dog_speed", self.dog_speed),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::InvalidInput(alloc::format!(
                    "{name} must be strictly positive"
                )));
            }
        }
        if let Some(f) = self.f_n_override {
            if !(f > 0.0) {
                return Err(Error::InvalidInput(
                    "f_n_override must be strictly positive".into(),
                ));
            }
        }
        let weights = [
            ("w_inertia", self.w_inertia),
            ("w_lcm", self.w_lcm),
            ("w_dog", self.w_dog),
            ("w_sep", self.w_sep),
        ];
        for (name, v) in weights {
            if !(v >= 0.0) {
                return Err(Error::InvalidInput(alloc::format!(
                    "{name} must be non-negative"
                )));
            }
        }
        Ok(())
    }
}

impl Default for SwarmParams {
    fn default() -> SwarmParams {
        SwarmParams {
            r_sheep_sheep: 1.0,
            r_sheep_dog: 2.0,
            w_inertia: 0.5,
            w_lcm: 1.05,
            w_dog: 1.0,
            w_sep: 2.0,
            f_n_override: Some(1.3),
            unit_distance: 1.0,
            sheep_speed: 0.5,
            dog_speed: 1.0,
            dt: 0.1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arena4() -> ArenaConfig {
        ArenaConfig::new(4.0, 4.0, Vec2::new(1.0, 1.0), 2.0).unwrap()
    }

    #[test]
    fn clamp_cases() {
        let a = arena4();
        assert_eq!(a.clamp(Vec2::new(-1.0, 2.0)), Vec2::new(0.0, 2.0));
        assert_eq!(a.clamp(Vec2::new(2.0, 2.0)), Vec2::new(2.0, 2.0));
        assert_eq!(a.clamp(Vec2::new(5.0, 7.0)), Vec2::new(4.0, 4.0));
    }

    #[test]
    fn clamp_idempotent() {
        let a = arena4();
        for p in [
            Vec2::new(-3.0, 9.0),
            Vec2::new(0.5, 0.5),
            Vec2::new(4.0, 0.0),
        ] {
            let once = a.clamp(p);
            assert_eq!(a.clamp(once), once);
        }
    }

    #[test]
    fn arena_rejects_bad_values() {
        assert!(ArenaConfig::new(0.0, 4.0, Vec2::ZERO, 1.0).is_err());
        assert!(ArenaConfig::new(4.0, 4.0, Vec2::new(5.0, 1.0), 1.0).is_err());
        assert!(ArenaConfig::new(4.0, 4.0, Vec2::new(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn default_params_validate() {
        SwarmParams::default().validate().unwrap();
    }

    #[test]
    fn params_reject_nonpositive() {
        let mut p = SwarmParams::default();
        p.dt = 0.0;
        assert!(p.validate().is_err());
        let mut p = SwarmParams::default();
        p.w_sep = -1.0;
        assert!(p.validate().is_err());
    }
}
