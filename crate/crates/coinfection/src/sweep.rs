//! Parameter-plane sweeps: classify every cell of a two-parameter grid, and
//! validate the timescale reduction against the complete dynamics.

use std::fmt::Write as _;

use crate::dynamics::{lift_state, rhs_complete, State3};
use crate::equilibria::{classify, ScenarioLabel};
use crate::error::{Error, Result};
use crate::integrate::{integrate, Options, Sampling, StopReason};
use crate::params::{FullParams, PARAM_KEYS};

/// A rectangular grid over two named parameters. Cells are classified at
/// their centers, so a half-open range like (0, 10] never evaluates the
/// degenerate edge value itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub x_key: String,
    pub y_key: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            x_key: "delta".to_string(),
            y_key: "lambda".to_string(),
            x_range: (0.0, 10.0),
            y_range: (0.0, 10.0),
            nx: 200,
            ny: 200,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for key in [&self.x_key, &self.y_key] {
            if !PARAM_KEYS.contains(&key.as_str()) {
                return Err(Error::SweepSpec(format!("unknown axis parameter `{key}`")));
            }
        }
        if self.x_key == self.y_key {
            return Err(Error::SweepSpec(format!(
                "axes must differ, both are `{}`",
                self.x_key
            )));
        }
        for (name, (lo, hi)) in [("x", self.x_range), ("y", self.y_range)] {
            if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
                return Err(Error::SweepSpec(format!(
                    "{name} range must be finite with lo < hi, got ({lo}, {hi})"
                )));
            }
        }
        for (name, n) in [("x", self.nx), ("y", self.ny)] {
            if n == 0 || n > 4096 {
                return Err(Error::SweepSpec(format!(
                    "{name} resolution must be between 1 and 4096, got {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        let (lo, hi) = self.x_range;
        lo + (ix as f64 + 0.5) * (hi - lo) / self.nx as f64
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        let (lo, hi) = self.y_range;
        lo + (iy as f64 + 0.5) * (hi - lo) / self.ny as f64
    }
}

/// Classification of one grid cell. Threshold fields are `None` where the
/// quantity is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub x: f64,
    pub y: f64,
    pub label: ScenarioLabel,
    pub nu_star: f64,
    pub s1_star: Option<f64>,
    pub a_bar_thr: Option<f64>,
    pub b_bar_thr: f64,
    pub r_script: Option<f64>,
}

/// Sweep result, row-major with x fastest, y rows from low to high.
#[derive(Debug, Clone)]
pub struct RegionGrid {
    pub spec: SweepSpec,
    pub cells: Vec<CellRecord>,
}

impl RegionGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &CellRecord {
        &self.cells[iy * self.spec.nx + ix]
    }

    /// One row per cell, in storage order; absent thresholds are empty
    /// fields.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "{},{},label,nu_star,S1,Abar,Bbar,R\n",
            self.spec.x_key, self.spec.y_key
        );
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.16e}")).unwrap_or_default();
        for c in &self.cells {
            writeln!(
                out,
                "{:.16e},{:.16e},{},{:.16e},{},{},{:.16e},{}",
                c.x,
                c.y,
                c.label,
                c.nu_star,
                opt(c.s1_star),
                opt(c.a_bar_thr),
                c.b_bar_thr,
                opt(c.r_script),
            )
            .unwrap();
        }
        out
    }
}

fn classify_cell(base: &FullParams, spec: &SweepSpec, ix: usize, iy: usize) -> Result<CellRecord> {
    let x = spec.x_at(ix);
    let y = spec.y_at(iy);
    let mut p = *base;
    p.set(&spec.x_key, x)?;
    p.set(&spec.y_key, y)?;
    let sc = classify(&p).map_err(|e| {
        Error::SweepSpec(format!(
            "cell ({ix}, {iy}) at {} = {x}, {} = {y}: {e}",
            spec.x_key, spec.y_key
        ))
    })?;
    Ok(CellRecord {
        x,
        y,
        label: sc.label,
        nu_star: sc.reduced.nu_star,
        s1_star: sc.thresholds.s1_star,
        a_bar_thr: sc.thresholds.a_bar_thr,
        b_bar_thr: sc.thresholds.b_bar_thr,
        r_script: sc.thresholds.r_script,
    })
}

fn sweep_row(base: &FullParams, spec: &SweepSpec, iy: usize) -> Result<Vec<CellRecord>> {
    (0..spec.nx)
        .map(|ix| classify_cell(base, spec, ix, iy))
        .collect()
}

fn merge_rows(spec: &SweepSpec, rows: Vec<Result<Vec<CellRecord>>>) -> Result<RegionGrid> {
    let mut cells = Vec::with_capacity(spec.nx * spec.ny);
    for row in rows {
        cells.extend(row?);
    }
    Ok(RegionGrid {
        spec: spec.clone(),
        cells,
    })
}

/// Classifies the whole grid on one thread. Always available; the parallel
/// entry point produces bit-identical results.
pub fn run_sweep_serial(base: &FullParams, spec: &SweepSpec) -> Result<RegionGrid> {
    spec.validate()?;
    base.validate()?;
    let rows = (0..spec.ny).map(|iy| sweep_row(base, spec, iy)).collect();
    merge_rows(spec, rows)
}

/// Classifies the grid across threads, one row per work item, merged back in
/// row order.
#[cfg(feature = "parallel")]
pub fn run_sweep(base: &FullParams, spec: &SweepSpec) -> Result<RegionGrid> {
    use rayon::prelude::*;
    spec.validate()?;
    base.validate()?;
    let rows: Vec<Result<Vec<CellRecord>>> = (0..spec.ny)
        .into_par_iter()
        .map(|iy| sweep_row(base, spec, iy))
        .collect();
    merge_rows(spec, rows)
}

#[cfg(not(feature = "parallel"))]
pub fn run_sweep(base: &FullParams, spec: &SweepSpec) -> Result<RegionGrid> {
    run_sweep_serial(base, spec)
}

/// One epsilon's worth of evidence that the reduced model predicts the
/// complete one. Distances use the maximum norm, the same metric the
/// integrator steers by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregationRow {
    pub epsilon: f64,
    /// max-norm distance of the complete system's final state from the
    /// lifted reduced-model attractor
    pub distance: f64,
    /// `distance` over the max norm of that attractor; falls back to the
    /// absolute value when the attractor is the origin
    pub relative: f64,
    /// the run settled before its horizon
    pub steady: bool,
}

#[derive(Debug, Clone)]
pub struct AggregationCheck {
    /// the reduced-model attractor, lifted to the three compartments
    pub target: State3,
    pub rows: Vec<AggregationRow>,
    /// some run hit its horizon still moving; distances then say nothing
    /// about the limit
    pub inconclusive: bool,
}

/// Integrates the complete system toward the attractor the reduction
/// predicts, once per epsilon. `horizon` is in slow time units; each run
/// gets `horizon / epsilon` fast time.
pub fn validate_aggregation(
    p: &FullParams,
    epsilons: &[f64],
    horizon: f64,
    opts: &Options,
) -> Result<AggregationCheck> {
    if epsilons.is_empty() {
        return Err(Error::SweepSpec("need at least one epsilon".to_string()));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::SweepSpec(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let sc = classify(p)?;
    let attractor = sc.primary_attractor().ok_or(Error::NoStableAttractor)?;
    let target = lift_state(attractor.location, sc.reduced.nu_star);
    // start displaced from the target but inside its basin, with every
    // compartment populated so the fast process has something to act on
    let start = [
        0.9 * target.s + 0.01,
        0.9 * target.u + 0.05,
        0.9 * target.v + 0.05,
    ];
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let mut q = *p;
        q.set("epsilon", eps)?;
        q.validate()?;
        let tr = integrate(
            |_, y: &[f64; 3]| {
                rhs_complete(
                    &q,
                    State3 {
                        s: y[0],
                        u: y[1],
                        v: y[2],
                    },
                )
                .into()
            },
            0.0,
            start,
            horizon / eps,
            Sampling::Uniform(1),
            opts,
        )?;
        let (_, y) = tr.last();
        let distance = (y[0] - target.s)
            .abs()
            .max((y[1] - target.u).abs())
            .max((y[2] - target.v).abs());
        let scale = target.s.abs().max(target.u.abs()).max(target.v.abs());
        let relative = if scale > 0.0 {
            distance / scale
        } else {
            distance
        };
        rows.push(AggregationRow {
            epsilon: eps,
            distance,
            relative,
            steady: matches!(tr.stop, StopReason::Steady { .. }),
        });
    }
    let inconclusive = rows.iter().any(|r| !r.steady);
    Ok(AggregationCheck {
        target,
        rows,
        inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::assert_relative_eq;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            nx: 24,
            ny: 16,
            x_range: (0.0, 4.0),
            y_range: (0.0, 6.0),
            ..SweepSpec::default()
        }
    }

    #[test]
    fn cell_centers_avoid_the_range_edges() {
        let spec = SweepSpec::default();
        assert!(spec.x_at(0) > 0.0);
        assert!(spec.y_at(0) > 0.0);
        assert!(spec.x_at(spec.nx - 1) < 10.0);
        assert_relative_eq!(spec.x_at(0), 0.025);
        assert_relative_eq!(spec.x_at(199), 9.975);
    }

    #[test]
    fn spec_validation_catches_bad_requests() {
        let good = small_spec();
        good.validate().unwrap();
        let mut s = small_spec();
        s.x_key = "delta2".to_string();
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.y_key = "delta".to_string();
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.x_range = (4.0, 4.0);
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.ny = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn sweep_is_deterministic_and_matches_serial() {
        let p = presets::baseline();
        let spec = small_spec();
        let a = run_sweep(&p, &spec).unwrap();
        let b = run_sweep(&p, &spec).unwrap();
        let serial = run_sweep_serial(&p, &spec).unwrap();
        assert_eq!(a.cells.len(), spec.nx * spec.ny);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_csv(), serial.to_csv());
        for (x, y) in a.cells.iter().zip(&serial.cells) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn grid_layout_is_row_major_from_low_y() {
        let p = presets::baseline();
        let spec = small_spec();
        let g = run_sweep_serial(&p, &spec).unwrap();
        let c = g.cell(3, 5);
        assert_relative_eq!(c.x, spec.x_at(3));
        assert_relative_eq!(c.y, spec.y_at(5));
        assert!(g.cell(0, 0).y < g.cell(0, spec.ny - 1).y);
    }

    #[test]
    fn csv_starts_with_axis_names_and_has_one_row_per_cell() {
        let p = presets::baseline();
        let spec = SweepSpec {
            nx: 5,
            ny: 4,
            ..small_spec()
        };
        let g = run_sweep_serial(&p, &spec).unwrap();
        let csv = g.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "delta,lambda,label,nu_star,S1,Abar,Bbar,R"
        );
        assert_eq!(csv.lines().count(), 21);
        // every row has eight fields even when thresholds are absent
        for line in csv.lines().skip(1) {
            assert_eq!(line.split(',').count(), 8);
        }
    }

    #[test]
    fn labels_depend_on_the_rate_ratio_only() {
        // scaling both opportunistic rates by a power of two leaves the
        // reduction bitwise unchanged, hence the same classification
        let mut p = presets::baseline();
        for scale in [0.5, 2.0, 8.0] {
            let a = classify(&p).unwrap();
            p.lambda = presets::baseline().lambda * scale;
            p.delta = presets::baseline().delta * scale;
            let b = classify(&p).unwrap();
            assert_eq!(a.label, b.label);
            assert_eq!(a.reduced.nu_star.to_bits(), b.reduced.nu_star.to_bits());
        }
    }

    #[test]
    fn sweep_fails_loudly_on_cells_outside_the_domain() {
        let p = presets::baseline();
        let spec = SweepSpec {
            x_key: "a_U".to_string(),
            x_range: (0.8, 1.2), // crosses the a_U < 1 wall
            ..small_spec()
        };
        let err = run_sweep_serial(&p, &spec).unwrap_err();
        assert!(err.to_string().contains("a_U"), "{err}");
    }

    #[test]
    fn aggregation_distance_shrinks_with_epsilon() {
        let check = validate_aggregation(
            &presets::baseline(),
            &[1e-1, 1e-2],
            5.0,
            &Options::default(),
        )
        .unwrap();
        assert!(!check.inconclusive);
        assert_eq!(check.rows.len(), 2);
        assert!(check.rows[0].distance > check.rows[1].distance);
        assert!(check.rows[0].relative > check.rows[1].relative);
        // relative is distance rescaled by the target's largest component
        let scale = check.target.s;
        assert_relative_eq!(
            check.rows[1].relative,
            check.rows[1].distance / scale,
            max_relative = 1e-15
        );
        // the reduced attractor splits evenly here: nu* = 1/2
        assert_relative_eq!(check.target.u, check.target.v);
    }

    #[test]
    fn aggregation_against_the_origin_reports_absolute_distance() {
        let mut p = presets::baseline();
        p.r = 10.0; // extinction: everything drains to the origin
        let check = validate_aggregation(&p, &[0.1], 5.0, &Options::default()).unwrap();
        assert_relative_eq!(check.target.s, 0.0);
        // no scale to divide by, so the relative column repeats the distance
        assert_eq!(check.rows[0].relative, check.rows[0].distance);
    }
}
