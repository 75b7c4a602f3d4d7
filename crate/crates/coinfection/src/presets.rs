//! Reference parameter sets used by the examples, tests, and shipped config
//! files.

use crate::params::FullParams;

/// Coexistence-prone community: strong asymmetric competition, coinfection
/// doubles primary transmission.
pub fn baseline() -> FullParams {
    FullParams {
        r: 26.0,
        m: 12.0,
        a_u: 0.9,
        a_v: 0.7,
        mu_u: 0.3,
        mu_v: 0.5,
        beta_u: 4.0,
        beta_v: 8.0,
        gamma: 0.2,
        lambda: 2.0,
        delta: 1.0,
        c_ss: 3.8,
        c_su: 0.5,
        c_sv: 0.5,
        c_us: 2.6,
        c_uu: 0.1,
        c_uv: 1.0,
        c_vs: 0.5,
        c_vu: 4.0,
        c_vv: 4.0,
        epsilon: 1e-3,
    }
}

/// Same community under harsher mortality and weaker susceptible crowding;
/// coinfection no longer boosts transmission.
pub fn high_mortality() -> FullParams {
    FullParams {
        m: 17.0,
        c_ss: 2.8,
        beta_v: 4.0,
        ..baseline()
    }
}

/// A community whose outcome depends on the starting load: fast clearance
/// outpaces opportunistic transmission, weak infected self-crowding leaves
/// the interior balance close to tangency, and two attractors coexist.
pub fn bistable() -> FullParams {
    FullParams {
        r: 13.410675643388336,
        m: 4.078370857950986,
        a_u: 0.906839814584656,
        a_v: 0.5,
        mu_u: 1.4,
        mu_v: 0.5,
        beta_u: 1.025,
        beta_v: 2.0,
        gamma: 1.0,
        lambda: 2.0,
        delta: 3.0,
        c_ss: 1.981830261113529,
        c_su: 0.607571752859037,
        c_sv: 0.5,
        c_us: 0.077649504224269,
        c_uu: 0.004,
        c_uv: 1.0,
        c_vs: 0.5,
        c_vu: 4.0,
        c_vv: 4.0,
        epsilon: 1e-3,
    }
}
