//! Equilibria, nullclines, local stability, and the phase-portrait
//! classifier for the reduced planar model.

use num_complex::Complex64;

use crate::dynamics::{rhs_reduced, State2};
use crate::error::{Error, Result};
use crate::params::{compute_thresholds, reduce, FullParams, ReducedParams, Thresholds};

/// Relative tolerance for the knife-edge equalities between thresholds.
const BOUNDARY_REL: f64 = 1e-12;
/// Absolute tolerance on the discriminant ratio for declaring a tangency.
const TANGENT_ABS: f64 = 1e-10;
/// Interior roots must satisfy both nullcline equations this well.
const ROOT_RESIDUAL: f64 = 1e-9;
/// Roots closer than this are one double root: a quadratic cannot separate
/// a pair tighter than the square root of machine epsilon.
const ROOT_COLLAPSE_REL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    /// total extinction
    Origin,
    /// susceptibles at carrying capacity, no infection
    DiseaseFree,
    /// both classes present
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Saddle,
    Unstable,
    /// an eigenvalue sits on the imaginary axis; linearization is silent
    Nonhyperbolic,
}

impl std::fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EquilibriumKind::Origin => "origin",
            EquilibriumKind::DiseaseFree => "disease_free",
            EquilibriumKind::Interior => "interior",
        })
    }
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Saddle => "saddle",
            Stability::Unstable => "unstable",
            Stability::Nonhyperbolic => "nonhyperbolic",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Equilibrium {
    pub location: State2,
    pub kind: EquilibriumKind,
    pub stability: Stability,
    pub eigenvalues: [Complex64; 2],
}

/// Susceptible-nullcline height: the infected density at which susceptible
/// growth balances, as a function of S.
pub fn nullcline_phi(rp: &ReducedParams, th: &Thresholds, s: f64) -> Result<f64> {
    let (s1, _, b_thr) = th.require_all()?;
    let q = rp.c_si + rp.beta_bar;
    let denom = s - b_thr;
    if denom == 0.0 {
        return Err(Error::NullclinePole { s });
    }
    Ok(rp.c_ss * s * (s1 - s) / (q * denom))
}

/// Infected-nullcline height: positive part marks where infection grows.
pub fn nullcline_psi(rp: &ReducedParams, th: &Thresholds, s: f64) -> Result<f64> {
    let (_, a_thr, _) = th.require_all()?;
    Ok(th.invasion_margin * (s - a_thr) / rp.c_ii)
}

/// True when the susceptible nullcline degenerates to the vertical line
/// S = S1 = B: the quadratic numerator and the pole cancel.
pub fn phi_is_vertical(th: &Thresholds) -> bool {
    match th.s1_star {
        Some(s1) => rel_close(s1, th.b_bar_thr),
        None => false,
    }
}

fn rel_close(x: f64, y: f64) -> bool {
    (x - y).abs() <= BOUNDARY_REL * x.abs().max(y.abs())
}

/// Coefficients (a, |b|, c) of the quadratic a S^2 - |b| S + c whose roots
/// are the interior-equilibrium S values. All three are positive in the
/// regimes where the quadratic is consulted.
pub fn interior_quadratic(rp: &ReducedParams, th: &Thresholds) -> Result<(f64, f64, f64)> {
    let margin = th.invasion_margin;
    if margin <= 0.0 {
        return Err(Error::EquilibriaDomain(
            "invasion margin is nonpositive; no interior equilibria exist".to_string(),
        ));
    }
    let q = rp.c_si + rp.beta_bar;
    let n = rp.recruitment();
    let d = rp.loss();
    let a = rp.c_ss * rp.c_ii + q * margin;
    let b = rp.c_ii * (rp.r - rp.m) + margin * n + q * d;
    let c = n * d;
    Ok((a, b, c))
}

/// Interior equilibria of the reduced model, sorted by S. Solves the
/// intersection quadratic, then keeps the roots at positive infected
/// density. Both roots can be spurious: the quadratic also picks up
/// intersections on the negative branch of the infected nullcline.
pub fn interior_equilibria(rp: &ReducedParams, th: &Thresholds) -> Result<Vec<Equilibrium>> {
    let (a, b, c) = interior_quadratic(rp, th)?;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    // b > 0 always; subtract-then-divide loses digits on the small root, so
    // route it through the product of roots instead
    let big = (b + disc.sqrt()) / (2.0 * a);
    let small = c / (a * big);
    let mut out = Vec::new();
    for s in [small, big] {
        if !(s > 0.0) {
            continue;
        }
        let i = nullcline_psi(rp, th, s)?;
        if !(i > 0.0) {
            continue;
        }
        let phi = nullcline_phi(rp, th, s)?;
        let scale = i.abs().max(phi.abs()).max(1.0);
        debug_assert!(
            (phi - i).abs() <= ROOT_RESIDUAL * scale,
            "nullclines disagree at root: phi = {phi}, psi = {i}"
        );
        let location = State2 { s, i };
        let j = jacobian(rp, location);
        let eigenvalues = eigenvalues_2x2(j);
        out.push(Equilibrium {
            location,
            kind: EquilibriumKind::Interior,
            stability: stability_from_eigs(eigenvalues),
            eigenvalues,
        });
    }
    // degenerate double root: keep one copy
    if out.len() == 2 {
        let (s0, s1) = (out[0].location.s, out[1].location.s);
        if (s1 - s0).abs() <= ROOT_COLLAPSE_REL * s1.abs() {
            out.truncate(1);
        }
    }
    Ok(out)
}

/// Jacobian of the reduced vector field at an arbitrary point.
pub fn jacobian(rp: &ReducedParams, x: State2) -> [[f64; 2]; 2] {
    let State2 { s, i } = x;
    let q = rp.c_si + rp.beta_bar;
    let margin = rp.beta_bar - rp.c_is;
    [
        [
            rp.r - rp.m - 2.0 * rp.c_ss * s - q * i,
            rp.recruitment() - q * s,
        ],
        [margin * i, margin * s - rp.loss() - 2.0 * rp.c_ii * i],
    ]
}

pub fn eigenvalues_2x2(j: [[f64; 2]; 2]) -> [Complex64; 2] {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let root = disc.sqrt();
        // form the larger-magnitude eigenvalue without cancellation, recover
        // the other from the determinant
        let l_big = 0.5 * (tr + if tr >= 0.0 { root } else { -root });
        let l_small = if l_big != 0.0 {
            det / l_big
        } else {
            0.5 * (tr - root)
        };
        let (lo, hi) = if l_big <= l_small {
            (l_big, l_small)
        } else {
            (l_small, l_big)
        };
        [Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(0.5 * tr, -im), Complex64::new(0.5 * tr, im)]
    }
}

fn stability_from_eigs(eigs: [Complex64; 2]) -> Stability {
    let re = [eigs[0].re, eigs[1].re];
    if re.contains(&0.0) {
        return Stability::Nonhyperbolic;
    }
    match (re[0] < 0.0, re[1] < 0.0) {
        (true, true) => Stability::Stable,
        (false, false) => Stability::Unstable,
        _ => Stability::Saddle,
    }
}

fn boundary_equilibrium(
    rp: &ReducedParams,
    location: State2,
    kind: EquilibriumKind,
) -> Equilibrium {
    let eigenvalues = eigenvalues_2x2(jacobian(rp, location));
    Equilibrium {
        location,
        kind,
        stability: stability_from_eigs(eigenvalues),
        eigenvalues,
    }
}

/// Phase-portrait labels, ordered roughly by infection severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioLabel {
    /// population dies out regardless of infection
    Extinction,
    /// infection cannot persist from any initial state
    DiseaseFreeGlobal,
    /// one interior attractor, disease-free state unstable
    EndemicGlobal,
    /// one interior attractor coexists with a repelling disease-free state
    /// that still shapes transients
    EndemicLocal,
    /// stable disease-free and stable endemic states separated by a saddle
    Bistable,
    /// the interior equilibria collide; measure-zero tangency
    DegenerateTangent,
    /// a defining threshold equality holds exactly; structurally unstable
    Boundary,
}

impl std::fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScenarioLabel::Extinction => "extinction",
            ScenarioLabel::DiseaseFreeGlobal => "disease_free_global",
            ScenarioLabel::EndemicGlobal => "endemic_global",
            ScenarioLabel::EndemicLocal => "endemic_local",
            ScenarioLabel::Bistable => "bistable",
            ScenarioLabel::DegenerateTangent => "degenerate_tangent",
            ScenarioLabel::Boundary => "boundary",
        };
        f.write_str(s)
    }
}

/// Full classification of a parameter set: label, equilibria with stability,
/// and the thresholds that decided it.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: ScenarioLabel,
    /// the fast process keeps a coinfected pool at equilibrium
    pub coinfection_active: bool,
    pub equilibria: Vec<Equilibrium>,
    pub thresholds: Thresholds,
    pub reduced: ReducedParams,
}

impl Scenario {
    /// The equilibrium trajectories starting near the disease-free state
    /// converge to, when one exists.
    pub fn primary_attractor(&self) -> Option<&Equilibrium> {
        // prefer a stable interior state, then any stable state
        self.equilibria
            .iter()
            .filter(|e| e.stability == Stability::Stable)
            .max_by(|a, b| {
                let ka = (a.kind == EquilibriumKind::Interior) as u8;
                let kb = (b.kind == EquilibriumKind::Interior) as u8;
                ka.cmp(&kb)
                    .then(a.location.i.partial_cmp(&b.location.i).unwrap())
            })
    }
}

/// Classifies the phase portrait of the reduced model obtained from `p`.
pub fn classify(p: &FullParams) -> Result<Scenario> {
    let rp = reduce(p)?;
    let th = compute_thresholds(&rp)?;
    let coinfection_active = rp.nu_star > 0.0;
    let origin = State2 { s: 0.0, i: 0.0 };

    // growth below replacement: everything collapses to the origin
    if rp.r <= rp.m {
        let eq = boundary_equilibrium(&rp, origin, EquilibriumKind::Origin);
        return Ok(Scenario {
            label: ScenarioLabel::Extinction,
            coinfection_active,
            equilibria: vec![eq],
            thresholds: th,
            reduced: rp,
        });
    }

    let s1 = th.s1_star.expect("r > m was just checked");
    let mut equilibria = vec![
        boundary_equilibrium(&rp, origin, EquilibriumKind::Origin),
        boundary_equilibrium(&rp, State2 { s: s1, i: 0.0 }, EquilibriumKind::DiseaseFree),
    ];

    // infection loses hosts to competition faster than it gains by
    // transmission: no interior states can exist at all
    if th.invasion_margin <= 0.0 {
        return Ok(Scenario {
            label: ScenarioLabel::DiseaseFreeGlobal,
            coinfection_active,
            equilibria,
            thresholds: th,
            reduced: rp,
        });
    }

    let a_thr = th.a_bar_thr.expect("margin > 0 was just checked");
    let b_thr = th.b_bar_thr;

    // knife-edge equalities between thresholds first: the strict orderings
    // below are meaningless on these measure-zero sets
    if rel_close(s1, a_thr) || rel_close(a_thr, b_thr) || rel_close(s1, b_thr) {
        let label = ScenarioLabel::Boundary;
        equilibria.extend(interior_equilibria(&rp, &th).unwrap_or_default());
        return Ok(Scenario {
            label,
            coinfection_active,
            equilibria,
            thresholds: th,
            reduced: rp,
        });
    }

    // invasion threshold beyond every susceptible level the system can
    // sustain: the disease-free state attracts everything
    if a_thr >= s1.max(b_thr) {
        return Ok(Scenario {
            label: ScenarioLabel::DiseaseFreeGlobal,
            coinfection_active,
            equilibria,
            thresholds: th,
            reduced: rp,
        });
    }

    if s1 > a_thr {
        // infection invades the disease-free state: exactly one interior
        // equilibrium, globally or locally attracting by whether crowding
        // feedback stays negative
        equilibria.extend(interior_equilibria(&rp, &th)?);
        let label = if s1 < b_thr {
            ScenarioLabel::EndemicGlobal
        } else {
            ScenarioLabel::EndemicLocal
        };
        return Ok(Scenario {
            label,
            coinfection_active,
            equilibria,
            thresholds: th,
            reduced: rp,
        });
    }

    // remaining strict ordering: S1 < A < B, the fold regime where the
    // discriminant ratio decides between zero and two interior states
    if s1 < a_thr && a_thr < b_thr {
        let r_script = th
            .r_script
            .expect("all threshold ingredients are positive here");
        let label = if (r_script - 1.0).abs() <= TANGENT_ABS {
            ScenarioLabel::DegenerateTangent
        } else if r_script < 1.0 {
            ScenarioLabel::DiseaseFreeGlobal
        } else {
            ScenarioLabel::Bistable
        };
        equilibria.extend(interior_equilibria(&rp, &th)?);
        return Ok(Scenario {
            label,
            coinfection_active,
            equilibria,
            thresholds: th,
            reduced: rp,
        });
    }

    // every ordering is covered above; anything that falls through sits on
    // an edge the comparisons cannot resolve
    equilibria.extend(interior_equilibria(&rp, &th).unwrap_or_default());
    Ok(Scenario {
        label: ScenarioLabel::Boundary,
        coinfection_active,
        equilibria,
        thresholds: th,
        reduced: rp,
    })
}

/// Residual of the reduced field at a point, for verifying equilibria.
pub fn field_residual(rp: &ReducedParams, x: State2) -> f64 {
    let d = rhs_reduced(rp, x);
    d.s.abs().max(d.i.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::assert_relative_eq;

    fn baseline_pieces() -> (ReducedParams, Thresholds) {
        let rp = reduce(&presets::baseline()).unwrap();
        let th = compute_thresholds(&rp).unwrap();
        (rp, th)
    }

    #[test]
    fn origin_eigenvalues_follow_the_closed_form() {
        let p = presets::baseline();
        let sc = classify(&p).unwrap();
        let origin = sc
            .equilibria
            .iter()
            .find(|e| e.kind == EquilibriumKind::Origin)
            .unwrap();
        let rp = &sc.reduced;
        let mut expected = [rp.r - rp.m, -rp.loss()];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(origin.eigenvalues[0].re, expected[0], max_relative = 1e-12);
        assert_relative_eq!(origin.eigenvalues[1].re, expected[1], max_relative = 1e-12);
        assert_eq!(origin.stability, Stability::Saddle);
    }

    #[test]
    fn disease_free_eigenvalues_follow_the_closed_form() {
        let p = presets::baseline();
        let sc = classify(&p).unwrap();
        let df = sc
            .equilibria
            .iter()
            .find(|e| e.kind == EquilibriumKind::DiseaseFree)
            .unwrap();
        let rp = &sc.reduced;
        let th = &sc.thresholds;
        let s1 = th.s1_star.unwrap();
        let mut expected = [-(rp.r - rp.m), th.invasion_margin * s1 - rp.loss()];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(df.eigenvalues[0].re, expected[0], max_relative = 1e-12);
        assert_relative_eq!(df.eigenvalues[1].re, expected[1], max_relative = 1e-12);
        // S1 > A here, so infection invades and the state is a saddle
        assert_eq!(df.stability, Stability::Saddle);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let (rp, _) = baseline_pieces();
        for (s, i) in [(3.5, 1.3), (1.0, 0.5), (0.3, 2.0), (5.0, 0.01)] {
            let x = State2 { s, i };
            let j = jacobian(&rp, x);
            let h = 1e-6;
            let fd = |ds: f64, di: f64| {
                rhs_reduced(
                    &rp,
                    State2 {
                        s: s + ds,
                        i: i + di,
                    },
                )
            };
            let hs = h * (1.0 + s.abs());
            let hi = h * (1.0 + i.abs());
            let d_ds_p = fd(hs, 0.0);
            let d_ds_m = fd(-hs, 0.0);
            let d_di_p = fd(0.0, hi);
            let d_di_m = fd(0.0, -hi);
            let approx_j = [
                [
                    (d_ds_p.s - d_ds_m.s) / (2.0 * hs),
                    (d_di_p.s - d_di_m.s) / (2.0 * hi),
                ],
                [
                    (d_ds_p.i - d_ds_m.i) / (2.0 * hs),
                    (d_di_p.i - d_di_m.i) / (2.0 * hi),
                ],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    assert_relative_eq!(
                        j[r][c],
                        approx_j[r][c],
                        max_relative = 1e-5,
                        epsilon = 1e-7
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalue_solver_handles_all_regimes() {
        // distinct real
        let e = eigenvalues_2x2([[2.0, 0.0], [0.0, -3.0]]);
        assert_relative_eq!(e[0].re, -3.0);
        assert_relative_eq!(e[1].re, 2.0);
        assert_eq!(e[0].im, 0.0);
        // complex pair
        let e = eigenvalues_2x2([[0.0, 1.0], [-1.0, 0.0]]);
        assert_relative_eq!(e[0].im, -1.0);
        assert_relative_eq!(e[1].im, 1.0);
        assert_eq!(e[0].re, 0.0);
        // near-cancellation: trace large, determinant tiny
        let e = eigenvalues_2x2([[1e8, 0.0], [0.0, 1e-8]]);
        assert_relative_eq!(e[0].re, 1e-8, max_relative = 1e-10);
        assert_relative_eq!(e[1].re, 1e8, max_relative = 1e-12);
    }

    #[test]
    fn nullclines_cross_at_the_interior_equilibrium() {
        let (rp, th) = baseline_pieces();
        let eqs = interior_equilibria(&rp, &th).unwrap();
        assert_eq!(eqs.len(), 1);
        let e = &eqs[0];
        assert!(field_residual(&rp, e.location) < 1e-8);
        let phi = nullcline_phi(&rp, &th, e.location.s).unwrap();
        let psi = nullcline_psi(&rp, &th, e.location.s).unwrap();
        assert_relative_eq!(phi, psi, max_relative = 1e-9);
        assert_relative_eq!(phi, e.location.i, max_relative = 1e-9);
    }

    #[test]
    fn phi_reports_its_pole() {
        let (rp, th) = baseline_pieces();
        let err = nullcline_phi(&rp, &th, th.b_bar_thr).unwrap_err();
        assert!(matches!(err, Error::NullclinePole { .. }));
        assert!(!phi_is_vertical(&th));
    }

    #[test]
    fn baseline_is_endemic_with_active_coinfection() {
        let sc = classify(&presets::baseline()).unwrap();
        assert_eq!(sc.label, ScenarioLabel::EndemicLocal);
        assert!(sc.coinfection_active);
        let interior: Vec<_> = sc
            .equilibria
            .iter()
            .filter(|e| e.kind == EquilibriumKind::Interior)
            .collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].stability, Stability::Stable);
        // the attractor the reduction predicts for the aggregated dynamics
        let a = sc.primary_attractor().unwrap();
        assert_relative_eq!(a.location.s, 3.4979756709, max_relative = 1e-9);
        assert_relative_eq!(a.location.i, 1.3476886750, max_relative = 1e-9);
    }

    #[test]
    fn collapse_when_growth_cannot_match_mortality() {
        let mut p = presets::baseline();
        p.r = 10.0; // below m = 12
        let sc = classify(&p).unwrap();
        assert_eq!(sc.label, ScenarioLabel::Extinction);
        assert_eq!(sc.equilibria.len(), 1);
        assert_eq!(sc.equilibria[0].kind, EquilibriumKind::Origin);
        assert_eq!(sc.equilibria[0].stability, Stability::Stable);
    }

    #[test]
    fn weak_transmission_protects_the_disease_free_state() {
        let mut p = presets::baseline();
        // keep the opportunistic layer quiet and make invasion lose to
        // crowding: margin = beta_U - c_US < 0
        p.delta = 10.0;
        p.beta_u = 2.0;
        let sc = classify(&p).unwrap();
        assert_eq!(sc.label, ScenarioLabel::DiseaseFreeGlobal);
        assert!(!sc.coinfection_active);
        assert!(sc
            .equilibria
            .iter()
            .all(|e| e.kind != EquilibriumKind::Interior));
        let df = sc
            .equilibria
            .iter()
            .find(|e| e.kind == EquilibriumKind::DiseaseFree)
            .unwrap();
        assert_eq!(df.stability, Stability::Stable);
    }

    #[test]
    fn boundary_label_on_exact_threshold_equality() {
        // engineer S1 == A exactly: margin * S1 = loss
        let mut p = presets::baseline();
        p.delta = 10.0; // nu* = 0
        let rp = reduce(&p).unwrap();
        let s1 = (rp.r - rp.m) / rp.c_ss;
        let margin_needed = rp.loss() / s1;
        p.beta_u = margin_needed + p.c_us;
        let sc = classify(&p).unwrap();
        assert_eq!(sc.label, ScenarioLabel::Boundary);
    }

    #[test]
    fn interior_pair_splits_into_saddle_and_node() {
        // hand-built reduced set in the fold regime with two genuine
        // crossings: S1 < A < B and the nullclines intersect twice
        let rp = ReducedParams {
            r: 13.410697937551428,
            m: 4.078368729381956,
            c_ss: 1.981825012460379,
            a_bar: 0.9068395134036239,
            c_si: 0.6075698954011173,
            c_is: 0.07765361808790767,
            c_ii: 0.005144058575365263,
            beta_bar: 1.1590953568837488,
            gamma_bar: 1.4927801640958656,
            mu_bar: 1.8895467929416235,
            nu_star: 0.0,
        };
        let th = compute_thresholds(&rp).unwrap();
        let (s1, a_thr, b_thr) = th.require_all().unwrap();
        assert!(s1 < a_thr && a_thr < b_thr);
        assert!(th.r_script.unwrap() > 1.0);
        let eqs = interior_equilibria(&rp, &th).unwrap();
        assert_eq!(eqs.len(), 2);
        let (lo, hi) = (&eqs[0], &eqs[1]);
        assert!(lo.location.s < hi.location.s);
        assert!(lo.location.i < hi.location.i);
        assert_eq!(lo.stability, Stability::Saddle);
        assert_eq!(hi.stability, Stability::Stable);
        for e in &eqs {
            assert!(field_residual(&rp, e.location) < 1e-7);
        }
    }

    #[test]
    fn fold_regime_without_real_roots_is_disease_free() {
        // same geometry but the infected nullcline passes under the hump
        let rp = ReducedParams {
            r: 13.410697937551428,
            m: 4.078368729381956,
            c_ss: 1.981825012460379,
            a_bar: 0.9068395134036239,
            c_si: 0.6075698954011173,
            c_is: 0.07765361808790767,
            c_ii: 0.005144058575365263 * 40.0,
            beta_bar: 1.1590953568837488,
            gamma_bar: 1.4927801640958656,
            mu_bar: 1.8895467929416235,
            nu_star: 0.0,
        };
        let th = compute_thresholds(&rp).unwrap();
        let (s1, a_thr, b_thr) = th.require_all().unwrap();
        assert!(s1 < a_thr && a_thr < b_thr);
        assert!(th.r_script.unwrap() < 1.0);
        assert!(interior_equilibria(&rp, &th).unwrap().is_empty());
    }

    #[test]
    fn tangency_collapses_the_pair() {
        // scale c_II so the discriminant ratio crosses 1, then bisect to the
        // tangency and check the label flips to the degenerate case
        let base = ReducedParams {
            r: 13.410697937551428,
            m: 4.078368729381956,
            c_ss: 1.981825012460379,
            a_bar: 0.9068395134036239,
            c_si: 0.6075698954011173,
            c_is: 0.07765361808790767,
            c_ii: 0.005144058575365263,
            beta_bar: 1.1590953568837488,
            gamma_bar: 1.4927801640958656,
            mu_bar: 1.8895467929416235,
            nu_star: 0.0,
        };
        let ratio = |scale: f64| {
            let rp = ReducedParams {
                c_ii: base.c_ii * scale,
                ..base
            };
            compute_thresholds(&rp).unwrap().r_script.unwrap() - 1.0
        };
        let (mut lo, mut hi) = (1.0, 40.0);
        assert!(ratio(lo) > 0.0 && ratio(hi) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if ratio(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let rp = ReducedParams {
            c_ii: base.c_ii * 0.5 * (lo + hi),
            ..base
        };
        let th = compute_thresholds(&rp).unwrap();
        assert!((th.r_script.unwrap() - 1.0).abs() < TANGENT_ABS);
        // at the tangency the two roots coincide; the solver reports one
        let eqs = interior_equilibria(&rp, &th).unwrap();
        assert_eq!(eqs.len(), 1);
    }
}
