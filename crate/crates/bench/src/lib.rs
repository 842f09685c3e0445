//! Shared fixtures for the benchmarks.

use esmix_core::params::{EsParams, InteractionSpec, MixingParams, ParamBundle, SpeciesSpec, Variant};
use esmix_core::{match_moments, Distribution, TargetMoments, VelocityGrid};

/// Two-species bundle with every parameter away from its limits.
pub fn bundle(variant: Variant) -> ParamBundle {
    ParamBundle {
        species: [SpeciesSpec::new("1", 1.0).unwrap(), SpeciesSpec::new("2", 2.0).unwrap()],
        interaction: InteractionSpec::new(1.0, 0.8, 1.0, 1.5).unwrap(),
        mixing: MixingParams { delta: 0.4, alpha: 0.3, gamma: 0.02 },
        es: EsParams { variant, mu1: 0.3, mu2: -0.2, mu12: 0.1, mu21: 0.1 },
    }
}

/// Drifting Maxwellians of unequal temperature on `grid`.
pub fn state(grid: &VelocityGrid) -> [Distribution; 2] {
    let a = TargetMoments { n: 1.0, u: [0.5, 0.0, 0.0], temperature: 1.2 };
    let b = TargetMoments { n: 0.6, u: [-0.3, 0.2, 0.0], temperature: 0.7 };
    [match_moments(&a, 1.0, grid).unwrap(), match_moments(&b, 2.0, grid).unwrap()]
}
