use std::fs;
use std::path::PathBuf;
use std::result::Result;

use nkpolicy::sim::ramsey_path;
use nkpolicy::stability::*;
use nkpolicy::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{Format, RegimeArg, RunConfig};
use crate::output::{emit, json, Cell, Csv};
use crate::{warn, Cli, CliError, Command, GridArgs, HopfArgs, RamseyArgs, RuleArgs, SimArgs, SweepName, WeightArgs};

const SWEEP_FP: (f64, f64) = (-5.0, 90.0);
const SWEEP_FX: (f64, f64) = (-10.0, 2.0);
const SWEEP_N: usize = 500;
const HORIZON: usize = 40;

struct Ctx<'a> {
    cli: &'a Cli,
    file: RunConfig,
}

impl Ctx<'_> {
    fn format(&self, default: Format) -> Format {
        self.cli.format.or(self.file.format).unwrap_or(default)
    }

    fn output(&self) -> Option<PathBuf> {
        self.cli.output.clone().or_else(|| self.file.output.clone())
    }

    fn params(&self, default_variant: Variant) -> Result<ModelParamsF64, CliError> {
        self.cli.model.resolve(&self.file, default_variant)
    }

    fn tol(&self, flag: Option<f64>) -> Result<f64, CliError> {
        let tol = flag.or(self.file.tol).unwrap_or(DEFAULT_BORDER_TOL);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::input(format!(
                "tolerance must be finite and non-negative, got {tol}"
            )));
        }
        Ok(tol)
    }

    fn rule(&self, sub: &str, r: &RuleArgs) -> Result<TaylorRuleF64, CliError> {
        let f_pi = r
            .f_pi
            .or(self.file.f_pi)
            .ok_or_else(|| CliError::missing(sub, "--f-pi"))?;
        let f_x = r.f_x.or(self.file.f_x).ok_or_else(|| CliError::missing(sub, "--f-x"))?;
        let f_z = r.f_z.or(self.file.f_z).unwrap_or(0.0);
        let f_u = r.f_u.or(self.file.f_u).unwrap_or(0.0);
        let rule = TaylorRule::new(f_x, f_pi).with_shocks(f_z, f_u);
        rule.validate()?;
        Ok(rule)
    }

    fn prefs(&self, sub: &str, w: &WeightArgs, default: Option<(f64, f64, f64)>) -> Result<PreferencesF64, CliError> {
        let pick = |flag: Option<f64>, file: Option<f64>, k: usize, name: &str| {
            flag.or(file)
                .or(default.map(|d| [d.0, d.1, d.2][k]))
                .ok_or_else(|| CliError::missing(sub, name))
        };
        let mu_pi = pick(w.mu_pi, self.file.mu_pi, 0, "--mu-pi")?;
        let mu_x = pick(w.mu_x, self.file.mu_x, 1, "--mu-x")?;
        let mu_i = pick(w.mu_i, self.file.mu_i, 2, "--mu-i")?;
        Ok(Preferences::new(mu_pi, mu_x, mu_i)?)
    }

    fn convention(&self, w: &WeightArgs, default: ShockConvention) -> ShockConvention {
        w.convention.or(self.file.convention).unwrap_or(default)
    }

    /// With `γ < 0` the triangle sits at positive `F_x`, so the default window flips.
    fn axes(&self, p: &ModelParamsF64, g: &GridArgs) -> Result<(GridAxis<f64>, GridAxis<f64>), CliError> {
        let f = &self.file;
        let fx_window = if p.gamma < 0.0 {
            (-SWEEP_FX.1, -SWEEP_FX.0)
        } else {
            SWEEP_FX
        };
        let lo_p = g.f_pi_min.or(f.f_pi_min).unwrap_or(SWEEP_FP.0);
        let hi_p = g.f_pi_max.or(f.f_pi_max).unwrap_or(SWEEP_FP.1);
        let lo_x = g.f_x_min.or(f.f_x_min).unwrap_or(fx_window.0);
        let hi_x = g.f_x_max.or(f.f_x_max).unwrap_or(fx_window.1);
        if let Some(step) = g.step.or(f.step) {
            return Ok((
                GridAxis::from_step(lo_p, hi_p, step)?,
                GridAxis::from_step(lo_x, hi_x, step)?,
            ));
        }
        let n_p = g.n_pi.or(f.n_pi).unwrap_or(SWEEP_N);
        let n_x = g.n_x.or(f.n_x).unwrap_or(SWEEP_N);
        Ok((GridAxis::new(lo_p, hi_p, n_p)?, GridAxis::new(lo_x, hi_x, n_x)?))
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx {
        file: RunConfig::load(cli.config.as_deref())?,
        cli: &cli,
    };
    match &cli.command {
        Command::Classify(r) => classify(&ctx, r),
        Command::Sweep(g) => sweep(&ctx, g),
        Command::Borders(g) => borders(&ctx, g),
        Command::Tables => tables(&ctx),
        Command::Ramsey(a) => ramsey(&ctx, a),
        Command::Simulate(a) => simulate(&ctx, a),
        Command::HopfDemo(a) => hopf(&ctx, a),
    }
}

const EIGEN_COLUMNS: [&str; 6] = [
    "re_lambda1",
    "im_lambda1",
    "re_lambda2",
    "im_lambda2",
    "modulus1",
    "modulus2",
];

fn eigen_cells(e: &EigenReport<f64>) -> [Cell; 6] {
    [
        e.lambda1.re.into(),
        e.lambda1.im.into(),
        e.lambda2.re.into(),
        e.lambda2.im.into(),
        e.modulus1.into(),
        e.modulus2.into(),
    ]
}

fn classify(ctx: &Ctx, r: &RuleArgs) -> Result<(), CliError> {
    let p = ctx.params(Variant::Text)?;
    let rule = ctx.rule("classify", r)?;
    let tol = ctx.tol(r.tol)?;
    let c = classify_region(&p, rule.f_x, rule.f_pi, tol);
    let fwd = classify_determinacy(&p, &rule, InterestRateTiming::ForwardLooking);
    let pre = classify_determinacy(&p, &rule, InterestRateTiming::Predetermined);
    let taylor = taylor_principle_holds(&p, rule.f_x, rule.f_pi);

    let text = match ctx.format(Format::Csv) {
        Format::Json => json(&json!({
            "params": p,
            "f_pi": rule.f_pi,
            "f_x": rule.f_x,
            "region": c.label,
            "stable_count": c.stable_count,
            "eigen": c.eigen,
            "p_one": c.p_one,
            "p_minus_one": c.p_minus_one,
            "taylor_principle": taylor,
            "determinacy": {
                "forward_looking": fwd.to_string(),
                "predetermined": pre.to_string(),
            },
        }))?,
        Format::Csv => {
            let mut header = vec!["f_pi", "f_x", "region", "stable_count"];
            header.extend(EIGEN_COLUMNS);
            header.extend([
                "trace",
                "det",
                "taylor_principle",
                "determinacy_forward_looking",
                "determinacy_predetermined",
            ]);
            let mut csv = Csv::with_comments(&[format!("variant = {}", p.variant)], &header);
            let mut cells = vec![
                rule.f_pi.into(),
                rule.f_x.into(),
                c.label.as_str().into(),
                Cell::Int(c.stable_count as i64),
            ];
            cells.extend(eigen_cells(&c.eigen));
            cells.extend([
                c.eigen.trace.into(),
                c.eigen.det.into(),
                taylor.to_string().into(),
                fwd.to_string().into(),
                pre.to_string().into(),
            ]);
            csv.row(cells);
            csv.into_string()
        }
    };
    emit(ctx.output().as_deref(), &text)
}

#[derive(Serialize)]
struct SweepRecord<'a> {
    f_pi: f64,
    f_x: f64,
    region: &'a str,
    stable_count: u8,
    re_lambda1: f64,
    im_lambda1: f64,
    re_lambda2: f64,
    im_lambda2: f64,
    modulus1: f64,
    modulus2: f64,
}

fn sweep(ctx: &Ctx, g: &GridArgs) -> Result<(), CliError> {
    let p = ctx.params(Variant::Text)?;
    let (fp, fx) = ctx.axes(&p, g)?;
    let tol = ctx.tol(g.tol)?;
    let rows = sweep_grid_par(&p, &fp, &fx, tol)?;
    let text = match ctx.format(Format::Csv) {
        Format::Json => {
            let recs: Vec<SweepRecord> = rows
                .iter()
                .map(|r| {
                    let e = &r.class.eigen;
                    SweepRecord {
                        f_pi: r.f_pi,
                        f_x: r.f_x,
                        region: r.class.label.as_str(),
                        stable_count: r.class.stable_count,
                        re_lambda1: e.lambda1.re,
                        im_lambda1: e.lambda1.im,
                        re_lambda2: e.lambda2.re,
                        im_lambda2: e.lambda2.im,
                        modulus1: e.modulus1,
                        modulus2: e.modulus2,
                    }
                })
                .collect();
            json(&json!({ "params": p, "rows": recs }))?
        }
        Format::Csv => {
            let mut header = vec!["f_pi", "f_x", "region", "stable_count"];
            header.extend(EIGEN_COLUMNS);
            let comments = [
                format!("variant = {}", p.variant),
                format!("gamma = {}, kappa = {}, beta = {}", p.gamma, p.kappa, p.beta),
            ];
            let mut csv = Csv::with_comments(&comments, &header);
            for r in &rows {
                let mut cells = vec![
                    r.f_pi.into(),
                    r.f_x.into(),
                    r.class.label.as_str().into(),
                    Cell::Int(r.class.stable_count as i64),
                ];
                cells.extend(eigen_cells(&r.class.eigen));
                csv.row(cells);
            }
            csv.into_string()
        }
    };
    emit(ctx.output().as_deref(), &text)
}

fn borders(ctx: &Ctx, g: &GridArgs) -> Result<(), CliError> {
    let p = ctx.params(Variant::Text)?;
    let (fp, fx) = ctx.axes(&p, g)?;
    let pts = border_curves(&p, &fp, &fx)?;
    let text = match ctx.format(Format::Csv) {
        Format::Json => json(&json!({ "params": p, "points": pts }))?,
        Format::Csv => {
            let mut csv = Csv::with_comments(&[format!("variant = {}", p.variant)], &["border", "f_pi", "f_x"]);
            for b in &pts {
                csv.row([b.border.to_string().into(), b.f_pi.into(), b.f_x.into()]);
            }
            csv.into_string()
        }
    };
    emit(ctx.output().as_deref(), &text)
}

fn lambda_cell(re: f64, im: f64) -> Cell {
    if im == 0.0 {
        re.into()
    } else {
        let sign = if im < 0.0 { "-" } else { "+" };
        format!("{}{sign}{}i", crate::output::num(re), crate::output::num(im.abs())).into()
    }
}

const TABLE2_HEADER: [&str; 10] = [
    "minimize_only",
    "mu_pi",
    "mu_x",
    "mu_i",
    "modulus1",
    "modulus2",
    "f_pi",
    "f_x",
    "f_z",
    "f_u",
];

fn weight_cells(label: &str, w: &PreferencesF64) -> Vec<Cell> {
    vec![label.into(), w.mu_pi.into(), w.mu_x.into(), w.mu_i.into()]
}

fn tables(ctx: &Ctx) -> Result<(), CliError> {
    let dir = ctx.output().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let format = ctx.format(Format::Csv);
    let text_params = ctx.params(Variant::Text)?.with_variant(Variant::Text);
    let lqr_params = text_params.with_variant(Variant::AppendixA);

    let tv = triangle_vertices(&text_params)?;
    let weights = table2_weights::<f64>();
    let mut sols = Vec::with_capacity(weights.len());
    for (label, w) in &weights {
        let s = solve_ramsey(&lqr_params, w)
            .map_err(|e| CliError::numeric(format!("{label} {:?}: {e}", (w.mu_pi, w.mu_x, w.mu_i))))?;
        sols.push(s);
    }

    let (t1, t2, t3) = match format {
        Format::Json => {
            let t2: Vec<_> = weights
                .iter()
                .zip(&sols)
                .map(|((label, w), s)| {
                    let (m1, m2) = s.eigen_discounted.sorted_moduli();
                    json!({
                        "minimize_only": label, "mu_pi": w.mu_pi, "mu_x": w.mu_x, "mu_i": w.mu_i,
                        "modulus1": m1, "modulus2": m2,
                        "f_pi": s.f_y.0[1], "f_x": s.f_y.0[0], "f_z": s.f_z.0[0], "f_u": s.f_z.0[1],
                    })
                })
                .collect();
            let t3: Vec<_> = weights
                .iter()
                .zip(&sols)
                .map(|((label, w), s)| {
                    json!({
                        "minimize_only": label, "mu_pi": w.mu_pi, "mu_x": w.mu_x, "mu_i": w.mu_i,
                        "n": s.n, "note": s.anchor().err().map(|e| e.to_string()),
                    })
                })
                .collect();
            (
                json(&json!({ "params": text_params, "rows": tv.rows() }))?,
                json(&json!({ "params": lqr_params, "rows": t2 }))?,
                json(&json!({ "params": lqr_params, "rows": t3 }))?,
            )
        }
        Format::Csv => {
            let mut c1 = Csv::with_comments(
                &[format!(
                    "variant = text, gamma = {}, kappa = {}, beta = {}",
                    text_params.gamma, text_params.kappa, text_params.beta
                )],
                &[
                    "vertex",
                    "lambda1",
                    "lambda2",
                    "lambda1_plus_lambda2",
                    "lambda1_times_lambda2",
                    "f_pi",
                    "f_x",
                ],
            );
            for v in tv.rows() {
                c1.row([
                    v.name.into(),
                    lambda_cell(v.lambda1.re, v.lambda1.im),
                    lambda_cell(v.lambda2.re, v.lambda2.im),
                    v.trace.into(),
                    v.det.into(),
                    v.f_pi.into(),
                    v.f_x.into(),
                ]);
            }

            let lqr_comment = format!(
                "variant = appendix-a, gamma = {}, kappa = {}, beta = {}, rho_z = {}, rho_u = {}",
                lqr_params.gamma, lqr_params.kappa, lqr_params.beta, lqr_params.rho_z, lqr_params.rho_u
            );
            let mut c2 = Csv::with_comments(std::slice::from_ref(&lqr_comment), &TABLE2_HEADER);
            for ((label, w), s) in weights.iter().zip(&sols) {
                let (m1, m2) = s.eigen_discounted.sorted_moduli();
                let mut cells = weight_cells(label, w);
                cells.extend([m1, m2, s.f_y.0[1], s.f_y.0[0], s.f_z.0[0], s.f_z.0[1]].map(Cell::from));
                c2.row(cells);
            }

            let mut notes = vec![
                lqr_comment,
                "x0 = x0_z0 z0 + x0_u0 u0, pi0 = pi0_z0 z0 + pi0_u0 u0".to_string(),
            ];
            for ((label, w), s) in weights.iter().zip(&sols) {
                if let Err(e) = s.anchor() {
                    notes.push(format!("{label} ({}, {}, {}): {e}", w.mu_pi, w.mu_x, w.mu_i));
                }
            }
            let mut c3 = Csv::with_comments(
                &notes,
                &[
                    "minimize_only",
                    "mu_pi",
                    "mu_x",
                    "mu_i",
                    "x0_z0",
                    "x0_u0",
                    "pi0_z0",
                    "pi0_u0",
                ],
            );
            for ((label, w), s) in weights.iter().zip(&sols) {
                let mut cells = weight_cells(label, w);
                match s.n {
                    Some(n) => cells.extend([n.get(0, 0), n.get(0, 1), n.get(1, 0), n.get(1, 1)].map(Cell::from)),
                    None => cells.extend((0..4).map(|_| Cell::Empty)),
                }
                c3.row(cells);
            }
            (c1.into_string(), c2.into_string(), c3.into_string())
        }
    };
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    for (name, text) in [("table1", t1), ("table2", t2), ("table3", t3)] {
        emit(Some(&dir.join(format!("{name}.{ext}"))), &text)?;
    }
    Ok(())
}

fn solution_json(s: &RamseySolutionF64) -> serde_json::Value {
    let (d1, d2) = s.eigen_discounted.sorted_moduli();
    let (u1, u2) = s.eigen.sorted_moduli();
    json!({
        "params": s.params,
        "prefs": s.prefs,
        "convention": s.convention,
        "p_y": s.p_y,
        "p_z": s.p_z,
        "gains": { "f_pi": s.f_y.0[1], "f_x": s.f_y.0[0], "f_z": s.f_z.0[0], "f_u": s.f_z.0[1] },
        "n": s.n,
        "moduli_discounted": [d1, d2],
        "moduli": [u1, u2],
        "eigen_discounted": s.eigen_discounted,
        "riccati_residual": s.riccati_residual,
        "sylvester_residual": s.sylvester_residual,
        "iterations": s.dare_iterations,
    })
}

fn ramsey(ctx: &Ctx, a: &RamseyArgs) -> Result<(), CliError> {
    let p = ctx.params(Variant::AppendixA)?;
    let opts = RamseyOptions::with_convention(ctx.convention(&a.weights, ShockConvention::AppendixA));
    let format = ctx.format(Format::Json);

    if let Some(SweepName::Table2) = a.sweep {
        let weights = table2_weights::<f64>();
        let prefs: Vec<_> = weights.iter().map(|(_, w)| *w).collect();
        let rows = lqr_triangle_sweep(&p, &prefs, &opts);
        let failures = rows.iter().filter(|r| r.outcome.is_err()).count();
        let text = match format {
            Format::Json => {
                let recs: Vec<_> = weights
                    .iter()
                    .zip(&rows)
                    .map(|((label, _), r)| match &r.outcome {
                        Ok(v) => json!({ "minimize_only": label, "prefs": r.prefs, "values": v }),
                        Err(e) => json!({ "minimize_only": label, "prefs": r.prefs, "error": e.to_string() }),
                    })
                    .collect();
                json(&json!({ "params": p, "convention": opts.convention, "rows": recs }))?
            }
            Format::Csv => {
                let mut header = TABLE2_HEADER.to_vec();
                header.extend(["in_triangle", "riccati_residual", "sylvester_residual", "error"]);
                let mut csv = Csv::with_comments(
                    &[format!("variant = {}, convention = {}", p.variant, opts.convention)],
                    &header,
                );
                for ((label, w), r) in weights.iter().zip(&rows) {
                    let mut cells = weight_cells(label, w);
                    match &r.outcome {
                        Ok(v) => {
                            cells.extend([v.modulus1, v.modulus2, v.f_pi, v.f_x, v.f_z, v.f_u].map(Cell::from));
                            cells.extend([
                                v.in_triangle.to_string().into(),
                                v.riccati_residual.into(),
                                v.sylvester_residual.into(),
                                Cell::Empty,
                            ]);
                        }
                        Err(e) => {
                            cells.extend((0..9).map(|_| Cell::Empty));
                            cells.push(e.to_string().replace(',', ";").into());
                        }
                    }
                    csv.row(cells);
                }
                csv.into_string()
            }
        };
        emit(ctx.output().as_deref(), &text)?;
        if failures > 0 {
            return Err(CliError::numeric(format!(
                "{failures} of {} weight settings failed",
                rows.len()
            )));
        }
        return Ok(());
    }

    let prefs = ctx.prefs("ramsey", &a.weights, None)?;
    let s = solve_ramsey_with(&p, &prefs, &opts)?;
    let text = match format {
        Format::Json => json(&solution_json(&s))?,
        Format::Csv => {
            let mut header = vec!["mu_pi", "mu_x", "mu_i", "f_pi", "f_x", "f_z", "f_u"];
            header.extend([
                "modulus1",
                "modulus2",
                "n_x_z",
                "n_x_u",
                "n_pi_z",
                "n_pi_u",
                "riccati_residual",
                "sylvester_residual",
                "iterations",
            ]);
            let mut csv = Csv::with_comments(
                &[format!("variant = {}, convention = {}", p.variant, s.convention)],
                &header,
            );
            let (m1, m2) = s.eigen_discounted.sorted_moduli();
            let mut cells: Vec<Cell> = [
                prefs.mu_pi,
                prefs.mu_x,
                prefs.mu_i,
                s.f_y.0[1],
                s.f_y.0[0],
                s.f_z.0[0],
                s.f_z.0[1],
                m1,
                m2,
            ]
            .map(Cell::from)
            .into();
            let n = s.n.map(|n| [n.get(0, 0), n.get(0, 1), n.get(1, 0), n.get(1, 1)]);
            cells.extend((0..4).map(|k| Cell::from(n.map(|v| v[k]))));
            cells.extend([
                s.riccati_residual.into(),
                s.sylvester_residual.into(),
                Cell::Int(s.dare_iterations as i64),
            ]);
            csv.row(cells);
            csv.into_string()
        }
    };
    emit(ctx.output().as_deref(), &text)
}

fn shock_spec(ctx: &Ctx, a: &SimArgs) -> Result<ShockSpecF64, CliError> {
    let f = &ctx.file;
    let z0 = a.z0.or(f.z0).unwrap_or(0.0);
    let u0 = a.u0.or(f.u0).unwrap_or(0.0);
    let seed = a.seed.or(f.seed);
    let (sd_z, sd_u) = (a.sd_z.or(f.sd_z), a.sd_u.or(f.sd_u));
    let innovations = if seed.is_some() || sd_z.is_some() || sd_u.is_some() {
        let (sd_z, sd_u) = (sd_z.unwrap_or(1.0), sd_u.unwrap_or(1.0));
        if !(sd_z.is_finite() && sd_z >= 0.0 && sd_u.is_finite() && sd_u >= 0.0) {
            return Err(CliError::input("standard deviations must be finite and non-negative"));
        }
        Innovations::Gaussian {
            seed: seed.unwrap_or(0),
            sd_z,
            sd_u,
        }
    } else {
        Innovations::None
    };
    Ok(ShockSpec { z0, u0, innovations })
}

fn simulate(ctx: &Ctx, a: &SimArgs) -> Result<(), CliError> {
    let regime = a
        .regime
        .or(ctx.file.regime)
        .ok_or_else(|| CliError::missing("simulate", "--regime"))?;
    let horizon = a.horizon.or(ctx.file.horizon).unwrap_or(HORIZON);
    if horizon == 0 {
        return Err(CliError::input("horizon must be at least 1"));
    }
    let spec = shock_spec(ctx, a)?;
    let mut comments = vec![];

    let path = match regime {
        RegimeArg::Ramsey => {
            let p = ctx.params(Variant::AppendixA)?;
            let prefs = ctx.prefs("simulate", &a.weights, None)?;
            let conv = ctx.convention(&a.weights, ShockConvention::Discounted);
            let sol = solve_ramsey_with(&p, &prefs, &RamseyOptions::with_convention(conv))?;
            comments.push(format!("regime = ramsey, variant = {}, convention = {conv}", p.variant));
            comments.push(format!(
                "mu_pi = {}, mu_x = {}, mu_i = {}",
                prefs.mu_pi, prefs.mu_x, prefs.mu_i
            ));
            ramsey_path(&sol, &spec, horizon)?
        }
        RegimeArg::TaylorMsv => {
            let p = ctx.params(Variant::Text)?;
            let rule = ctx.rule("simulate", &a.rule)?;
            let det = classify_determinacy(&p, &rule, InterestRateTiming::ForwardLooking);
            if det != DeterminacyClass::Determinate {
                warn(&format!(
                    "rule is {det} under forward-looking timing; the MSV path is one of many or explosive"
                ));
            }
            comments.push(format!("regime = taylor-msv, variant = {}", p.variant));
            impulse_free_msv(&p, &rule, &spec, horizon)?
        }
        RegimeArg::TaylorForward => {
            let p = ctx.params(Variant::Text)?;
            let rule = ctx.rule("simulate", &a.rule)?;
            let m = build_matrices(&p)?;
            let e = eig2(&closed_loop(&m, &rule))?;
            if e.spectral_radius() >= 1.0 {
                return Err(CliError::input(format!(
                    "closed loop is explosive (spectral radius {:.6}); forward iteration is meaningless, use --regime taylor-msv",
                    e.spectral_radius()
                )));
            }
            let y0 = Vec2::new(
                a.x0.or(ctx.file.x0).unwrap_or(0.0),
                a.pi0.or(ctx.file.pi0).unwrap_or(0.0),
            );
            comments.push(format!("regime = taylor-forward, variant = {}", p.variant));
            simulate_closed_loop(&m, &rule, y0, &spec, horizon)?
        }
    };
    comments.push(match path.seed {
        Some(s) => format!("seed = {s}"),
        None => "seed = none".to_string(),
    });

    let text = match ctx.format(Format::Csv) {
        Format::Json => json(&path)?,
        Format::Csv => {
            let costates = path.phi_x.as_ref().zip(path.phi_pi.as_ref());
            let mut header = vec!["t", "x", "pi", "i", "z", "u"];
            if costates.is_some() {
                header.extend(["phi_x", "phi_pi"]);
            }
            let mut csv = Csv::with_comments(&comments, &header);
            for t in 0..path.len() {
                let mut cells = vec![Cell::Int(t as i64)];
                cells.extend([path.x[t], path.pi[t], path.i[t], path.z[t], path.u[t]].map(Cell::from));
                if let Some((px, pp)) = costates {
                    cells.extend([px[t], pp[t]].map(Cell::from));
                }
                csv.row(cells);
            }
            csv.into_string()
        }
    };
    emit(ctx.output().as_deref(), &text)
}

fn impulse_free_msv(
    p: &ModelParamsF64,
    rule: &TaylorRuleF64,
    spec: &ShockSpecF64,
    horizon: usize,
) -> Result<TrajectoryF64, CliError> {
    let m = build_matrices(p)?;
    let n = solve_msv(&m, rule)?;
    Ok(nkpolicy::sim::msv_path(&m, rule, &n, spec, horizon)?)
}

fn hopf(ctx: &Ctx, a: &HopfArgs) -> Result<(), CliError> {
    let p = ctx.params(Variant::Text)?;
    let prefs = ctx.prefs("hopf-demo", &a.weights, Some((1.0, 1.0, 1e-7)))?;
    let r = &a.rule;
    let f = &ctx.file;
    let rule = TaylorRule::new(r.f_x.or(f.f_x).unwrap_or(0.5), r.f_pi.or(f.f_pi).unwrap_or(1.5));
    let rep = hopf_demo(&p, &prefs, &rule)?;
    for w in &rep.warnings {
        warn(w);
    }
    let text = match ctx.format(Format::Json) {
        Format::Json => json(&json!({ "params": p, "prefs": prefs, "report": rep }))?,
        Format::Csv => {
            let mut header = vec!["side", "f_pi", "f_x", "trace", "det", "region"];
            header.extend(EIGEN_COLUMNS);
            let mut comments = vec![format!("variant = {}", p.variant)];
            if let Some(s) = rep.crossing_fraction {
                comments.push(format!("crossing fraction s = {}", crate::output::num(s)));
            }
            comments.extend(rep.warnings.iter().map(|w| format!("warning: {w}")));
            let mut csv = Csv::with_comments(&comments, &header);
            let mut side = |name: &str, s: &nkpolicy::sim::RegimeSide<f64>| {
                let mut cells = vec![
                    name.into(),
                    s.f_pi.into(),
                    s.f_x.into(),
                    s.trace.into(),
                    s.det.into(),
                    s.label.as_str().into(),
                ];
                cells.extend(eigen_cells(&s.eigen));
                csv.row(cells);
            };
            side("ramsey", &rep.ramsey);
            if let Some((fx, fp)) = rep.crossing {
                let c = classify_region(&p, fx, fp, 1e-7);
                let mid = nkpolicy::sim::RegimeSide {
                    f_x: fx,
                    f_pi: fp,
                    trace: c.eigen.trace,
                    det: c.eigen.det,
                    label: c.label,
                    eigen: c.eigen,
                };
                side("crossing", &mid);
            }
            side("taylor", &rep.taylor);
            csv.into_string()
        }
    };
    emit(ctx.output().as_deref(), &text)
}
