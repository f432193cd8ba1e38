use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use gvm_spdc::crystal::{CrystalRecord, Method, Registry, BUNDLED};
use gvm_spdc::gvm::{default_pump_range, theta_pmf, GvmCondition, GvmSolution, ThetaPmf};
use gvm_spdc::hom::{
    default_four_fold_delays, default_two_fold_delays, four_fold_trace, two_fold_trace, Interfere,
};
use gvm_spdc::jsa::{build_jsa, desk_parameters, linspace, marginals_fwhm, schmidt_purity, GridSpec, JsaGrid, PumpSpec, Span};
use gvm_spdc::nonlinear::{d_eff, DEff};
use gvm_spdc::optics::{Geometry, Interaction};
use gvm_spdc::phasematch::{delta_k, pm_map, poling_period, solve_bpm_angle, BpmPlane, PhotonTriple};
use gvm_spdc::survey::{self as batch, solve_with, Outcome, SurveyRow};

use crate::output::{opt6, sha256_hex, sig6, Csv, Run};
use crate::{Condition, ConditionSet, Fold, Format, Interval, JsaArgs, Side};

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<gvm_spdc::Error> for CliError {
    fn from(e: gvm_spdc::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub struct Context {
    pub registry: Registry,
    registry_label: String,
    registry_sha256: String,
    out: PathBuf,
    grid: usize,
    format: Format,
    argv: Vec<String>,
}

impl Context {
    pub fn new(registry: Option<&Path>, out: PathBuf, grid: usize, format: Format, argv: Vec<String>) -> CliResult<Self> {
        let (text, label) = match registry {
            Some(p) => (std::fs::read_to_string(p)?, p.display().to_string()),
            None => (BUNDLED.to_string(), "<bundled>".to_string()),
        };
        Ok(Self {
            registry: Registry::from_toml_str(&text)?,
            registry_label: label,
            registry_sha256: sha256_hex(text.as_bytes()),
            out,
            grid,
            format,
            argv,
        })
    }

    fn run(&self) -> Run {
        Run::new(
            &self.out,
            self.argv.clone(),
            self.registry_label.clone(),
            self.registry_sha256.clone(),
        )
    }
}

fn condition(c: Condition) -> GvmCondition {
    match c {
        Condition::Gvm1 => GvmCondition::Gvm1,
        Condition::Gvm2 => GvmCondition::Gvm2,
        Condition::Gvm3 => GvmCondition::Gvm3,
    }
}

fn conditions(set: ConditionSet) -> Vec<GvmCondition> {
    match set {
        ConditionSet::Gvm1 => vec![GvmCondition::Gvm1],
        ConditionSet::Gvm2 => vec![GvmCondition::Gvm2],
        ConditionSet::Gvm3 => vec![GvmCondition::Gvm3],
        ConditionSet::All => GvmCondition::ALL.to_vec(),
    }
}

fn method_label(m: Method) -> &'static str {
    match m {
        Method::Bpm => "bpm",
        Method::Qpm => "qpm",
    }
}

fn d_eff_cell(d: &DEff<f64>) -> String {
    match d {
        DEff::Known(v) => sig6(*v),
        DEff::Unknown(_) => "unknown".into(),
    }
}

fn d_eff_json(d: &DEff<f64>) -> Value {
    match d {
        DEff::Known(v) => json!(v),
        DEff::Unknown(why) => json!({ "unknown": why }),
    }
}

/// Ridge angles within a micro-degree of 0 or 180 print as 0.
fn fold_theta(a: f64) -> f64 {
    if a < 1e-6 || 180.0 - a < 1e-6 {
        0.0
    } else {
        a
    }
}

fn theta_cell(t: &ThetaPmf<f64>) -> String {
    match t {
        ThetaPmf::Angle(a) => sig6(fold_theta(*a)),
        ThetaPmf::Singular => "singular".into(),
    }
}

fn theta_json(t: &ThetaPmf<f64>) -> Value {
    match t {
        ThetaPmf::Angle(a) => json!(a),
        ThetaPmf::Singular => json!("singular"),
    }
}

/// (angle, azimuth, period) columns.
fn geometry_parts(g: &Geometry<f64>) -> (Option<f64>, Option<f64>, Option<f64>) {
    match *g {
        Geometry::Uniaxial { theta, phi } => (Some(theta), Some(phi), None),
        Geometry::BiaxialPlane { angle, .. } => (Some(angle), None, None),
        Geometry::Qpm { period, .. } => (None, None, Some(period)),
    }
}

fn geometry_json(g: &Geometry<f64>) -> Value {
    match *g {
        Geometry::Uniaxial { theta, phi } => json!({ "kind": "bpm-uniaxial", "theta_deg": theta, "phi_deg": phi }),
        Geometry::BiaxialPlane { plane, angle } => {
            json!({ "kind": "bpm-biaxial-plane", "plane": plane.label(), "angle_deg": angle })
        }
        Geometry::Qpm { period, order } => json!({ "kind": "qpm", "period_um": period, "order": order }),
    }
}

const GVM_HEADER: &[&str] = &[
    "crystal",
    "method",
    "interaction",
    "condition",
    "status",
    "lambda_p_nm",
    "lambda_si_nm",
    "angle_deg",
    "phi_deg",
    "period_um",
    "theta_pmf_deg",
    "d_eff_pm_per_v",
    "purity",
    "excluded",
];

fn solved_cells(record: &CrystalRecord, s: &GvmSolution<f64>) -> Vec<String> {
    let (angle, phi, period) = geometry_parts(&s.geometry);
    vec![
        record.id.clone(),
        method_label(record.method).into(),
        s.interaction.label(),
        s.condition.label().into(),
        "ok".into(),
        sig6(s.triple.pump * 1e3),
        sig6(s.triple.signal * 1e3),
        opt6(angle),
        opt6(phi),
        opt6(period),
        theta_cell(&s.theta_pmf),
        d_eff_cell(&s.d_eff),
        opt6(s.predicted_purity),
        record.is_excluded().to_string(),
    ]
}

fn unsolved_cells(record: &CrystalRecord, c: GvmCondition, status: &str) -> Vec<String> {
    let mut cells = vec![
        record.id.clone(),
        method_label(record.method).into(),
        record.interaction.interaction().label(),
        c.label().into(),
        status.into(),
    ];
    cells.extend(std::iter::repeat_n(String::new(), 8));
    cells.push(record.is_excluded().to_string());
    cells
}

fn solution_json(s: &GvmSolution<f64>) -> Value {
    json!({
        "crystal": s.crystal,
        "condition": s.condition.label(),
        "interaction": s.interaction.label(),
        "status": "ok",
        "lambda_p_um": s.triple.pump,
        "lambda_s_um": s.triple.signal,
        "lambda_i_um": s.triple.idler,
        "geometry": geometry_json(&s.geometry),
        "theta_pmf_deg": theta_json(&s.theta_pmf),
        "d_eff_pm_per_v": d_eff_json(&s.d_eff),
        "predicted_purity": s.predicted_purity,
    })
}

fn row_cells(registry: &Registry, row: &SurveyRow) -> Vec<String> {
    let record = registry.get(&row.crystal).expect("survey rows come from the registry");
    match &row.outcome {
        Outcome::Solved(s) => solved_cells(record, s),
        Outcome::NotSatisfied(_) => unsolved_cells(record, row.condition, "not satisfied"),
        Outcome::Failed(e) => unsolved_cells(record, row.condition, &format!("error: {e}")),
    }
}

fn row_json(row: &SurveyRow) -> Value {
    let mut v = match &row.outcome {
        Outcome::Solved(s) => solution_json(s),
        Outcome::NotSatisfied(why) => json!({
            "crystal": row.crystal, "condition": row.condition.label(),
            "status": "not satisfied", "diagnostic": why,
        }),
        Outcome::Failed(e) => json!({
            "crystal": row.crystal, "condition": row.condition.label(),
            "status": "error", "diagnostic": e,
        }),
    };
    v["excluded"] = json!(row.excluded);
    v
}

pub fn info(ctx: &Context, id: &str) -> CliResult {
    let r = ctx.registry.get(id)?;
    if ctx.format == Format::Json {
        let v = serde_json::to_value(r).map_err(|e| CliError(e.to_string()))?;
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        return Ok(());
    }
    let p = r.interaction.interaction();
    println!("{}  {}", r.id, r.formula);
    println!("class         {}", r.optical_class.label());
    println!("point group   {}", r.point_group);
    println!("transparency  {}-{} um", r.transparency[0], r.transparency[1]);
    let plane = r.interaction.plane.map(|p| format!(", {} plane", p.label())).unwrap_or_default();
    println!("method        {} ({}{plane})", method_label(r.method), p.label());
    if r.d_unknown {
        println!("d_eff         unknown");
    } else if r.d_entries.is_empty() {
        println!("d             none listed");
    }
    for d in &r.d_entries {
        let unc = d.uncertainty.map(|u| format!(" +/- {u}")).unwrap_or_default();
        println!("d             {} = {}{unc} pm/V at {} um", d.tensor, d.magnitude, d.wavelength);
    }
    for (axis, m) in &r.dispersion {
        println!("dispersion    {axis}: {} terms ({:?}), {}", m.terms.len(), m.provenance, m.source);
    }
    match &r.exclusion {
        Some(why) => println!("status        excluded from golden comparisons: {why}"),
        None => println!("status        golden"),
    }
    for reference in &r.references {
        println!("reference     {reference}");
    }
    Ok(())
}

fn print_table(ctx: &Context, csv: &Csv, json: &Value) {
    match ctx.format {
        Format::Csv => print!("{}", csv.as_str()),
        Format::Json => println!("{}", serde_json::to_string_pretty(json).expect("json")),
    }
}

fn emit(ctx: &Context, run: &mut Run, stem: &str, csv: &Csv, json: &Value) -> CliResult {
    match ctx.format {
        Format::Csv => {
            run.write(&format!("{stem}.csv"), csv.as_str())?;
            run.write_json(&format!("{stem}.json"), json)?;
        }
        Format::Json => {
            run.write_json(&format!("{stem}.json"), json)?;
        }
    }
    Ok(())
}

pub fn pm(ctx: &Context, id: &str, pump_um: f64, signal_um: Option<f64>, order: u32) -> CliResult {
    let r = ctx.registry.get(id)?;
    let inter = r.interaction.interaction();
    let triple = match signal_um {
        Some(s) => PhotonTriple::from_pump_signal(pump_um, s)?,
        None => PhotonTriple::degenerate(pump_um),
    };
    let mut csv = Csv::new(&[
        "crystal", "status", "lambda_p_um", "lambda_s_um", "lambda_i_um", "angle_deg", "period_um",
        "delta_k_rad_per_um", "d_eff_pm_per_v",
    ]);
    let mut rows = Vec::new();
    let base = |status: &str| {
        vec![
            r.id.clone(),
            status.to_string(),
            sig6(triple.pump),
            sig6(triple.signal),
            sig6(triple.idler),
        ]
    };
    let geometries: Result<Vec<Geometry<f64>>, gvm_spdc::Error> = match r.method {
        Method::Bpm => BpmPlane::for_record(r).and_then(|plane| {
            Ok(solve_bpm_angle(r, &inter, &plane, &triple)?
                .into_iter()
                .map(|a| plane.geometry(a))
                .collect())
        }),
        Method::Qpm => poling_period(r, &inter, &triple, order).map(|period| vec![Geometry::Qpm { period, order }]),
    };
    match geometries {
        Ok(gs) => {
            for g in gs {
                let dk = delta_k(r, &inter, &g, &triple)?;
                let d = d_eff(r, &inter, &g, &triple)?;
                let (angle, _, period) = geometry_parts(&g);
                let mut cells = base("ok");
                cells.extend([opt6(angle), opt6(period), sig6(dk), d_eff_cell(&d)]);
                csv.row(cells);
                rows.push(json!({
                    "status": "ok", "geometry": geometry_json(&g),
                    "delta_k_rad_per_um": dk, "d_eff_pm_per_v": d_eff_json(&d),
                }));
            }
        }
        Err(gvm_spdc::Error::NoSolution(why)) => {
            let mut cells = base("not satisfied");
            cells.extend(std::iter::repeat_n(String::new(), 4));
            csv.row(cells);
            rows.push(json!({ "status": "not satisfied", "diagnostic": why }));
        }
        Err(e) => return Err(e.into()),
    }
    let json = json!({
        "crystal": r.id, "interaction": inter.label(),
        "lambda_p_um": triple.pump, "lambda_s_um": triple.signal, "lambda_i_um": triple.idler,
        "order": order, "solutions": rows,
    });
    print_table(ctx, &csv, &json);
    let mut run = ctx.run();
    let stem = format!("pm_{}", r.id);
    emit(ctx, &mut run, &stem, &csv, &json)?;
    run.finish(&stem, json!({ "crystal": r.id, "pump_um": pump_um, "signal_um": signal_um, "order": order }))?;
    Ok(())
}

pub fn gvm(ctx: &Context, id: &str, set: ConditionSet, range: Option<Interval>, order: u32) -> CliResult {
    let r = ctx.registry.get(id)?;
    let (lo, hi) = range.map(|i| (i.0, i.1)).unwrap_or_else(|| default_pump_range(r));
    let mut csv = Csv::new(GVM_HEADER);
    let mut rows = Vec::new();
    for c in conditions(set) {
        match solve_with(r, c, (lo, hi), order) {
            Ok(solutions) => {
                for s in solutions {
                    csv.row(solved_cells(r, &s));
                    rows.push(solution_json(&s));
                }
            }
            Err(gvm_spdc::Error::NoSolution(why)) => {
                csv.row(unsolved_cells(r, c, "not satisfied"));
                rows.push(json!({ "crystal": r.id, "condition": c.label(), "status": "not satisfied", "diagnostic": why }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let json = json!({ "crystal": r.id, "pump_range_um": [lo, hi], "order": order, "rows": rows });
    print_table(ctx, &csv, &json);
    let mut run = ctx.run();
    let stem = format!("gvm_{}", r.id);
    emit(ctx, &mut run, &stem, &csv, &json)?;
    run.finish(&stem, json!({ "crystal": r.id, "pump_range_um": [lo, hi], "order": order,
        "conditions": conditions(set).iter().map(|c| c.label()).collect::<Vec<_>>() }))?;
    Ok(())
}

fn matrix_csv(corner: &str, rows: &[f64], cols: &[f64], cell: impl Fn(usize, usize) -> String) -> Csv {
    let mut header = vec![corner.to_string()];
    header.extend(cols.iter().map(|&c| sig6(c)));
    let mut csv = Csv::default();
    csv.row(header);
    for (i, &r) in rows.iter().enumerate() {
        let mut cells = vec![sig6(r)];
        cells.extend((0..cols.len()).map(|j| cell(i, j)));
        csv.row(cells);
    }
    csv
}

pub fn map(ctx: &Context, id: &str, pump: Interval, signal: Interval) -> CliResult {
    let r = ctx.registry.get(id)?;
    if r.method != Method::Qpm {
        return Err(CliError(format!("{} is phase matched by birefringence; maps cover QPM crystals", r.id)));
    }
    let inter = r.interaction.interaction();
    let n = ctx.grid;
    let m = pm_map(r, &inter, (pump.0, pump.1), (signal.0, signal.1), n, n)?;
    let corner = "lambda_p_um\\lambda_s_um";
    let period = matrix_csv(corner, &m.pump_axis, &m.signal_axis, |i, j| opt6(m.period[i][j]));
    let theta = matrix_csv(corner, &m.pump_axis, &m.signal_axis, |i, j| {
        if m.singular.contains(&(i, j)) {
            "singular".into()
        } else {
            opt6(m.theta_pmf[i][j])
        }
    });
    let meta = json!({
        "crystal": r.id, "interaction": inter.label(),
        "pump_range_um": [pump.0, pump.1], "signal_range_um": [signal.0, signal.1],
        "grid": [n, n],
        "units": { "wavelength": "um", "period": "um", "theta_pmf": "deg" },
        "order": 1,
        "singular_points": m.singular.iter().map(|&(i, j)| json!({
            "lambda_p_um": m.pump_axis[i], "lambda_s_um": m.signal_axis[j] })).collect::<Vec<_>>(),
    });
    let stem = format!("map_{}", r.id);
    let mut run = ctx.run();
    match ctx.format {
        Format::Csv => {
            run.write(&format!("{stem}_period.csv"), period.as_str())?;
            run.write(&format!("{stem}_theta_pmf.csv"), theta.as_str())?;
            run.write_json(&format!("{stem}.json"), &meta)?;
        }
        Format::Json => {
            let mut full = meta.clone();
            full["pump_axis_um"] = json!(m.pump_axis);
            full["signal_axis_um"] = json!(m.signal_axis);
            full["period_um"] = json!(m.period);
            full["theta_pmf_deg"] = json!(m.theta_pmf);
            run.write_json(&format!("{stem}.json"), &full)?;
        }
    }
    run.finish(&stem, meta)?;
    println!("{}: {n}x{n} map, {} singular point(s)", r.id, m.singular.len());
    Ok(())
}

pub fn survey(ctx: &Context) -> CliResult {
    let rows = batch::survey(&ctx.registry, None);
    let mut run = ctx.run();
    for method in [Method::Bpm, Method::Qpm] {
        let subset: Vec<&SurveyRow> = rows.iter().filter(|r| r.method == method).collect();
        let mut csv = Csv::new(GVM_HEADER);
        for row in &subset {
            csv.row(row_cells(&ctx.registry, row));
        }
        let json = json!({ "method": method_label(method), "rows": subset.iter().map(|r| row_json(r)).collect::<Vec<_>>() });
        emit(ctx, &mut run, &format!("survey_{}", method_label(method)), &csv, &json)?;
        let owned: Vec<SurveyRow> = subset.into_iter().cloned().collect();
        for c in GvmCondition::ALL {
            match batch::pump_extent(&owned, c, true) {
                Some((lo, hi)) => println!(
                    "{} {}: lambda_s,i {}-{} nm",
                    method_label(method),
                    c,
                    sig6(2e3 * lo),
                    sig6(2e3 * hi)
                ),
                None => println!("{} {}: no solutions", method_label(method), c),
            }
        }
    }
    run.finish("survey", json!({ "crystals": ctx.registry.ids(), "order": 1 }))?;
    Ok(())
}

struct Source<'a> {
    record: &'a CrystalRecord,
    interaction: Interaction,
    geometry: Geometry<f64>,
    triple: PhotonTriple<f64>,
    condition: GvmCondition,
    length_mm: f64,
    pump: PumpSpec<f64>,
}

fn source<'a>(ctx: &'a Context, args: &JsaArgs) -> CliResult<Source<'a>> {
    let r = ctx.registry.get(&args.id)?;
    let c = condition(args.condition);
    let inter = r.interaction.interaction();
    let (triple, geometry) = match args.pump_um {
        Some(lp) => {
            let triple = PhotonTriple::degenerate(lp);
            let geometry = match r.method {
                Method::Bpm => {
                    let plane = BpmPlane::for_record(r)?;
                    plane.geometry(solve_bpm_angle(r, &inter, &plane, &triple)?[0])
                }
                Method::Qpm => Geometry::Qpm {
                    period: poling_period(r, &inter, &triple, args.order)?,
                    order: args.order,
                },
            };
            (triple, geometry)
        }
        None => {
            let s = solve_with(r, c, default_pump_range(r), args.order)
                .map_err(|e| CliError(format!("{e}; pass --pump-um to choose a pump wavelength")))?
                .remove(0);
            (s.triple, s.geometry)
        }
    };
    let (l_default, bw_default) = desk_parameters(c);
    let length_mm = args.length_mm.unwrap_or(l_default);
    let pump = PumpSpec::new(triple.pump, args.pump_bw_nm.unwrap_or(bw_default) * 1e-3)?;
    Ok(Source {
        record: r,
        interaction: inter,
        geometry,
        triple,
        condition: c,
        length_mm,
        pump,
    })
}

fn build(ctx: &Context, src: &Source, args: &JsaArgs, square: bool) -> CliResult<JsaGrid<f64>> {
    let span = match args.span_nm {
        Some(s) => Span::Explicit {
            signal: s.0 * 1e-3,
            idler: s.1 * 1e-3,
        },
        None => Span::Auto,
    };
    let spec = GridSpec {
        n: ctx.grid,
        signal_center: src.triple.signal,
        idler_center: src.triple.idler,
        span,
        square,
    };
    Ok(build_jsa(src.record, &src.interaction, &src.geometry, &src.pump, src.length_mm, &spec)?)
}

fn source_json(src: &Source, grid: &JsaGrid<f64>) -> Value {
    json!({
        "crystal": src.record.id,
        "condition": src.condition.label(),
        "interaction": src.interaction.label(),
        "geometry": geometry_json(&src.geometry),
        "lambda_p_um": src.triple.pump,
        "length_mm": src.length_mm,
        "pump_bandwidth_um": src.pump.bandwidth,
        "grid": [grid.n_signal(), grid.n_idler()],
        "signal_axis_um": [grid.signal_axis[0], grid.signal_axis[grid.n_signal() - 1]],
        "idler_axis_um": [grid.idler_axis[0], grid.idler_axis[grid.n_idler() - 1]],
    })
}

fn jsa_params(args: &JsaArgs) -> Value {
    json!({
        "crystal": args.id, "condition": format!("{:?}", args.condition).to_lowercase(),
        "pump_um": args.pump_um, "length_mm": args.length_mm, "pump_bw_nm": args.pump_bw_nm,
        "span_nm": args.span_nm.map(|s| [s.0, s.1]), "order": args.order,
    })
}

pub fn jsa(ctx: &Context, args: &JsaArgs) -> CliResult {
    let src = source(ctx, args)?;
    let grid = build(ctx, &src, args, false)?;
    let purity = schmidt_purity(&grid)?;
    let marg = marginals_fwhm(&grid);
    let theta = theta_pmf(src.record, &src.interaction, &src.geometry, &src.triple)?;
    let jsi = grid.intensity();

    let mut meta = source_json(&src, &grid);
    meta["purity"] = json!(purity);
    meta["fwhm_signal_nm"] = json!(marg.fwhm_signal.map(|x| x * 1e3));
    meta["fwhm_idler_nm"] = json!(marg.fwhm_idler.map(|x| x * 1e3));
    meta["signal_clipped"] = json!(marg.signal_clipped);
    meta["idler_clipped"] = json!(marg.idler_clipped);
    meta["theta_pmf_deg"] = theta_json(&theta);
    meta["units"] = json!({ "wavelength": "um", "fwhm": "nm", "intensity": "|amplitude|^2, Frobenius-normalized amplitude" });

    let stem = format!("jsa_{}_{}", src.record.id, src.condition.label().to_lowercase());
    let mut run = ctx.run();
    match ctx.format {
        Format::Csv => {
            let matrix = matrix_csv("lambda_s_um\\lambda_i_um", &grid.signal_axis, &grid.idler_axis, |i, j| {
                sig6(jsi[(i, j)])
            });
            run.write(&format!("{stem}.csv"), matrix.as_str())?;
            let mut m = Csv::new(&["lambda_s_um", "signal_marginal", "lambda_i_um", "idler_marginal"]);
            for k in 0..grid.n_signal() {
                m.row([
                    sig6(grid.signal_axis[k]),
                    sig6(marg.signal[k]),
                    sig6(grid.idler_axis[k]),
                    sig6(marg.idler[k]),
                ]);
            }
            run.write(&format!("{stem}_marginals.csv"), m.as_str())?;
            run.write_json(&format!("{stem}.json"), &meta)?;
        }
        Format::Json => {
            let mut full = meta.clone();
            full["signal_axis_um"] = json!(grid.signal_axis);
            full["idler_axis_um"] = json!(grid.idler_axis);
            full["intensity"] = json!((0..grid.n_signal())
                .map(|i| jsi.row(i).iter().copied().collect::<Vec<f64>>())
                .collect::<Vec<_>>());
            full["signal_marginal"] = json!(marg.signal);
            full["idler_marginal"] = json!(marg.idler);
            run.write_json(&format!("{stem}.json"), &full)?;
        }
    }
    let mut params = jsa_params(args);
    params["grid"] = json!(ctx.grid);
    run.finish(&stem, params)?;
    println!(
        "{} {}: purity {}, FWHM signal {} nm, idler {} nm",
        src.record.id,
        src.condition,
        sig6(purity),
        opt6(marg.fwhm_signal.map(|x| x * 1e3)),
        opt6(marg.fwhm_idler.map(|x| x * 1e3))
    );
    Ok(())
}

pub fn hom(
    ctx: &Context,
    args: &JsaArgs,
    fold: Fold,
    side: Side,
    n_delays: usize,
    half_range_fs: Option<f64>,
) -> CliResult {
    if n_delays < 3 {
        return Err(CliError("at least 3 delays are needed".into()));
    }
    let src = source(ctx, args)?;
    let which = match side {
        Side::Signals => Interfere::Signals,
        Side::Idlers => Interfere::Idlers,
    };
    let grid = build(ctx, &src, args, fold == Fold::Two)?;
    let defaults = match fold {
        Fold::Two => default_two_fold_delays(&grid),
        Fold::Four => default_four_fold_delays(&grid, which),
    };
    let half = half_range_fs.unwrap_or(defaults[defaults.len() - 1]);
    let delays = linspace(-half, half, n_delays);
    let trace = match fold {
        Fold::Two => two_fold_trace(&grid, &delays)?,
        Fold::Four => four_fold_trace(&grid, &grid, &delays, which)?,
    };
    let purity = schmidt_purity(&grid)?;

    let label = match (fold, side) {
        (Fold::Two, _) => "two_fold",
        (Fold::Four, Side::Signals) => "four_fold_signals",
        (Fold::Four, Side::Idlers) => "four_fold_idlers",
    };
    let stem = format!("hom_{}_{}_{label}", src.record.id, src.condition.label().to_lowercase());
    let mut meta = source_json(&src, &grid);
    meta["mode"] = json!(label);
    meta["visibility"] = json!(trace.visibility);
    meta["fwhm_fs"] = json!(trace.fwhm);
    meta["purity"] = json!(purity);
    meta["delay_half_range_fs"] = json!(half);
    meta["delays"] = json!(n_delays);
    meta["units"] = json!({ "delay": "fs", "probability": "coincidence probability" });

    let mut run = ctx.run();
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["tau_fs", "probability"]);
            for (t, p) in trace.delays.iter().zip(&trace.probability) {
                csv.row([sig6(*t), sig6(*p)]);
            }
            run.write(&format!("{stem}.csv"), csv.as_str())?;
            run.write_json(&format!("{stem}.json"), &meta)?;
        }
        Format::Json => {
            let mut full = meta.clone();
            full["tau_fs"] = json!(trace.delays);
            full["probability"] = json!(trace.probability);
            run.write_json(&format!("{stem}.json"), &full)?;
        }
    }
    let mut params = jsa_params(args);
    params["grid"] = json!(ctx.grid);
    params["fold"] = json!(label);
    params["delays"] = json!(n_delays);
    params["delay_half_range_fs"] = json!(half_range_fs);
    run.finish(&stem, params)?;
    println!(
        "{} {} {label}: visibility {}, FWHM {}",
        src.record.id,
        src.condition,
        sig6(trace.visibility),
        trace.fwhm.map(|w| format!("{} fs", sig6(w))).unwrap_or_else(|| "none (no dip)".into())
    );
    Ok(())
}
