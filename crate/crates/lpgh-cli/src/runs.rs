//! The data-producing subcommands.
//!
//! Each runner resolves its flags, calls into the library, assembles a
//! [`Report`], emits it, and only then raises any invariant violation, so
//! a failing run still shows the numbers that failed. Column layout is
//! fixed: `p`, `N`, then the remaining columns in alphabetical order.

use lpgh::balance::{balance_certificate_check, balance_signs};
use lpgh::bounds::separation_table;
use lpgh::gh::{
    brute_force_gh, gh_upper_from_correspondence, mazur_correspondence_experiment,
    metric_from_points, Correspondence,
};
use lpgh::lp::{mazur_map, BallPoint, LpSpace};
use lpgh::sample::{grid_points, net_radius, sample_ball, SampleConfig, SampleMode};

use crate::config::{
    BalanceArgs, CommonArgs, DistortionArgs, GhArgs, SampleArgs, SeparationArgs,
};
use crate::output::{classify, Cell, CliError, Report};

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|n| (*n).to_string()).collect()
}

fn common_config(report: &mut Report, common: &CommonArgs) {
    report.config.push(("seed", Cell::U(common.seed)));
    report
        .config
        .push(("format", Cell::S(common.format.label().into())));
    let out = common
        .out
        .as_ref()
        .map_or_else(|| "-".to_string(), |p| p.display().to_string());
    report.config.push(("out", Cell::S(out)));
}

fn resolve_p_seq(p: Option<f64>, p_seq: &Option<Vec<f64>>, default: &[f64]) -> Vec<f64> {
    match (p, p_seq) {
        (Some(single), _) => vec![single],
        (None, Some(seq)) => seq.clone(),
        (None, None) => default.to_vec(),
    }
}

pub fn run_distortion(args: &DistortionArgs) -> Result<(), CliError> {
    let p_seq = resolve_p_seq(args.p, &args.p_seq, &[1.1, 1.25, 1.5, 1.75, 2.0]);
    let n_sweep: Vec<u64> = match args.n {
        Some(n) => vec![n as u64],
        None => vec![2, 4, 8, 16],
    };
    let mut report = Report::new("distortion");
    report.config = vec![
        ("count", Cell::U(args.count as u64)),
        ("n_sweep", Cell::USeq(n_sweep.clone())),
        ("p_seq", Cell::FSeq(p_seq.clone())),
    ];
    common_config(&mut report, &args.common);
    report.columns = columns(&[
        "p",
        "N",
        "bound_2_2p_minus_2",
        "empirical_distortion",
        "gh_upper_2p_minus_2",
        "samples",
    ]);
    let mut pairs_scanned = 0u64;
    for &p in &p_seq {
        for &n in &n_sweep {
            let r = mazur_correspondence_experiment(p, n as usize, args.count, args.common.seed)
                .map_err(classify)?;
            pairs_scanned += r.pair_count;
            report.rows.push(vec![
                Cell::F(p),
                Cell::U(n),
                Cell::F(r.theoretical_bound),
                Cell::F(r.empirical_distortion),
                Cell::F(r.gh_upper_bound),
                Cell::U(r.sample_count as u64),
            ]);
        }
    }
    report.summary = vec![
        ("pairs_scanned", Cell::U(pairs_scanned)),
        ("within_bound", Cell::B(true)),
    ];
    report.emit(args.common.format, args.common.out.as_deref())
}

pub fn run_separation(args: &SeparationArgs) -> Result<(), CliError> {
    let default: Vec<f64> = (1..=10).map(|n| 1.0 + 1.0 / f64::from(n)).collect();
    let p_seq = resolve_p_seq(args.p, &args.p_seq, &default);
    let table = separation_table(&p_seq, args.threshold).map_err(classify)?;
    let floor = 0.5 - args.threshold;
    let decreasing = table.windows(2).all(|w| w[1].gh_upper < w[0].gh_upper);
    let min_qgh = table
        .iter()
        .map(|r| r.qgh_lower)
        .fold(f64::INFINITY, f64::min);
    let mut report = Report::new("separation");
    report.config = vec![
        ("p_seq", Cell::FSeq(p_seq.clone())),
        ("threshold", Cell::F(args.threshold)),
    ];
    common_config(&mut report, &args.common);
    report.columns = columns(&["p", "N", "gh_upper", "qgh_lower"]);
    for row in &table {
        report.rows.push(vec![
            Cell::F(row.p),
            Cell::Big(row.dim.clone()),
            Cell::F(row.gh_upper),
            Cell::F(row.qgh_lower),
        ]);
    }
    report.summary = vec![
        ("floor", Cell::F(floor)),
        ("gh_upper_strictly_decreasing", Cell::B(decreasing)),
        ("min_qgh_lower", Cell::F(min_qgh)),
        ("min_qgh_lower_at_floor_or_above", Cell::B(min_qgh >= floor)),
    ];
    report.emit(args.common.format, args.common.out.as_deref())?;
    if min_qgh < floor {
        return Err(CliError::Invariant(format!(
            "qgh_lower fell below its floor: {min_qgh} < {floor}"
        )));
    }
    if !decreasing {
        return Err(CliError::Invariant(
            "gh_upper is not strictly decreasing along the exponent sequence".into(),
        ));
    }
    Ok(())
}

pub fn run_balance(args: &BalanceArgs) -> Result<(), CliError> {
    let space = LpSpace::new(args.n, args.p).map_err(classify)?;
    let cfg = SampleConfig::new(
        space,
        args.count,
        args.common.seed,
        SampleMode::UniformBall,
    )
    .map_err(classify)?;
    let points = sample_ball(&cfg).map_err(classify)?;
    let result = balance_signs(&points, args.p).map_err(classify)?;
    let certified =
        balance_certificate_check(&points, result.signs(), args.p).map_err(classify)?;
    let mut report = Report::new("balance");
    report.config = vec![
        ("count", Cell::U(args.count as u64)),
        ("n", Cell::U(args.n as u64)),
        ("p", Cell::F(args.p)),
    ];
    common_config(&mut report, &args.common);
    report.columns = columns(&["p", "N", "bound_step", "prefix_norm", "sign", "step"]);
    let mut stepwise = true;
    for (k, (&sign, &norm)) in result
        .signs()
        .iter()
        .zip(result.prefix_norms())
        .enumerate()
    {
        let step = (k + 1) as u64;
        let bound_step = (step as f64).powf(args.p.recip());
        stepwise &= norm <= bound_step + 1e-9;
        report.rows.push(vec![
            Cell::F(args.p),
            Cell::U(args.n as u64),
            Cell::F(bound_step),
            Cell::F(norm),
            Cell::I(i64::from(sign)),
            Cell::U(step),
        ]);
    }
    report.summary = vec![
        ("bound", Cell::F(result.bound())),
        ("certificate_accepted", Cell::B(certified)),
        ("final_norm", Cell::F(result.norm())),
        ("stepwise_within_bound", Cell::B(stepwise)),
    ];
    report.emit(args.common.format, args.common.out.as_deref())?;
    if !certified || !stepwise {
        return Err(CliError::Invariant(format!(
            "balancing certificate failed: certificate_accepted={certified} stepwise_within_bound={stepwise}"
        )));
    }
    Ok(())
}

pub fn run_gh(args: &GhArgs) -> Result<(), CliError> {
    let space = LpSpace::new(args.n, args.p).map_err(classify)?;
    let cfg = SampleConfig::new(
        space,
        args.count,
        args.common.seed,
        SampleMode::UniformBall,
    )
    .map_err(classify)?;
    let points = sample_ball(&cfg).map_err(classify)?;
    let images: Vec<BallPoint> = points.iter().map(mazur_map).collect();
    let a = metric_from_points(&points, space).map_err(classify)?;
    let l1 = LpSpace::new(args.n, 1.0).map_err(classify)?;
    let b = metric_from_points(&images, l1).map_err(classify)?;
    let exact = brute_force_gh(&a, &b).map_err(classify)?;
    let pairing = Correspondence::identity(args.count).map_err(classify)?;
    let upper = gh_upper_from_correspondence(&pairing, &a, &b).map_err(classify)?;
    let ceiling = 2f64.powf(args.p) - 2.0;
    let mut report = Report::new("gh");
    report.config = vec![
        ("count", Cell::U(args.count as u64)),
        ("n", Cell::U(args.n as u64)),
        ("p", Cell::F(args.p)),
    ];
    common_config(&mut report, &args.common);
    report.columns = columns(&[
        "p",
        "N",
        "ceiling_2p_minus_2",
        "exact_gh",
        "pairing_upper",
        "points",
    ]);
    report.rows.push(vec![
        Cell::F(args.p),
        Cell::U(args.n as u64),
        Cell::F(ceiling),
        Cell::F(exact),
        Cell::F(upper),
        Cell::U(args.count as u64),
    ]);
    let dominated = exact <= upper + 1e-12;
    let under_ceiling = upper <= ceiling + 1e-9;
    report.summary = vec![
        ("exact_at_most_pairing", Cell::B(dominated)),
        ("pairing_at_most_ceiling", Cell::B(under_ceiling)),
    ];
    report.emit(args.common.format, args.common.out.as_deref())?;
    if !dominated {
        return Err(CliError::Invariant(format!(
            "exact GH distance {exact} exceeds the pairing upper bound {upper}"
        )));
    }
    if !under_ceiling {
        return Err(CliError::Invariant(format!(
            "pairing upper bound {upper} exceeds its ceiling {ceiling}"
        )));
    }
    Ok(())
}

pub fn run_sample(args: &SampleArgs) -> Result<(), CliError> {
    let space = LpSpace::new(args.n, args.p).map_err(classify)?;
    let mut report = Report::new("sample");
    report.config = vec![("n", Cell::U(args.n as u64)), ("p", Cell::F(args.p))];
    let points = match args.resolution {
        Some(res) => {
            report.config.push(("mode", Cell::S("grid".into())));
            report.config.push(("resolution", Cell::U(u64::from(res))));
            grid_points(space, res).map_err(classify)?
        }
        None => {
            report.config.push(("count", Cell::U(args.count as u64)));
            report.config.push(("mode", Cell::S("ball".into())));
            let cfg = SampleConfig::new(
                space,
                args.count,
                args.common.seed,
                SampleMode::UniformBall,
            )
            .map_err(classify)?;
            sample_ball(&cfg).map_err(classify)?
        }
    };
    common_config(&mut report, &args.common);
    let width = (args.n.saturating_sub(1)).to_string().len().max(2);
    let mut cols = vec!["p".to_string(), "N".to_string()];
    cols.extend((0..args.n).map(|i| format!("x{i:0width$}")));
    report.columns = cols;
    for point in &points {
        let mut row = vec![Cell::F(args.p), Cell::U(args.n as u64)];
        row.extend(point.coords().iter().map(|&c| Cell::F(c)));
        report.rows.push(row);
    }
    report.summary = match args.resolution {
        Some(res) => vec![
            ("net_radius", Cell::F(net_radius(space, res))),
            ("points", Cell::U(points.len() as u64)),
        ],
        None => vec![("points", Cell::U(points.len() as u64))],
    };
    report.emit(args.common.format, args.common.out.as_deref())
}
