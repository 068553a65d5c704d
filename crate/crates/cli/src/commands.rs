use std::fs;

use protower_core::bounds::{
    coinvariant_dim_bound, d_of_u, d_of_u_direct, decompose_finite_module, five_term_bounds,
    wilson_chain, wilson_check, CyclicDecomposition, FiveTermInput, WilsonBoundParams,
};
use protower_core::group_ring::{eliminate_to_one_variable, substitute_character};
use protower_core::primes::ensure_prime;
use protower_core::series::required_lambda_precision;
use protower_core::tower::{
    corank1_scan, default_king_degree, fpdim_tower, full_tower, king_sweep, lambda_grid,
    StabilizationReport,
};
use protower_core::{
    parse_presentation, Error, ExtInt, ModulePresentation, PadicInt, Route, SeriesMatrix,
    TowerOptions, TruncatedSeries,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    BoundsCommand, DecomposeArgs, FpdimArgs, InputArgs, KingArgs, LambdaArgs, RouteArg, ScanArgs,
    TowerArgs,
};
use crate::output::{Outcome, Table};
use crate::CliError;

const DEFAULT_DECOMPOSE_DEGREE: usize = 32;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn route(r: RouteArg) -> Route {
    match r {
        RouteArg::Block => Route::Block,
        RouteArg::Series => Route::Series,
        RouteArg::Auto => Route::Auto,
    }
}

/// The presentation with overrides applied, and a label for its source.
fn load(input: &InputArgs) -> Result<(ModulePresentation, String), CliError> {
    let (text, source) = match (&input.file, &input.presentation) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            (text, path.display().to_string())
        }
        (None, Some(text)) => (text.clone(), "inline".to_string()),
        (None, None) => {
            return Err(CliError::Input(
                "one of --file or --presentation is required".into(),
            ))
        }
    };
    let pres = parse_presentation(&text).map_err(|e| match e {
        Error::Syntax { .. } => CliError::Input(format!("{source}: {e}")),
        other => CliError::Core(other),
    })?;
    let p = input.p.unwrap_or(pres.p());
    let n = input.n.unwrap_or(pres.n());
    if n != pres.n() && !pres.relations().is_empty() {
        return Err(CliError::Input(format!(
            "--n {n} conflicts with relations written in {} variables",
            pres.n()
        )));
    }
    let pres = if (p, n) != (pres.p(), pres.n()) {
        ModulePresentation::new(p, n, pres.gens(), pres.relations().to_vec())?
    } else {
        pres
    };
    Ok((pres, source))
}

fn input_config(pres: &ModulePresentation, source: &str) -> Value {
    json!({
        "input": source,
        "presentation": pres.to_string(),
        "p": pres.p(),
        "n": pres.n(),
        "gens": pres.gens(),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

pub fn tower(args: &TowerArgs) -> Result<Outcome, CliError> {
    let (pres, source) = load(&args.input)?;
    let opts = TowerOptions {
        size_cap: args.size_cap,
        torsion: args.torsion,
        route: route(args.route),
        degree: args.degree,
    };
    let report = full_tower(&pres, args.s_max, &opts)?;
    let stab =
        StabilizationReport::from_ranks(report.levels.iter().filter_map(|l| l.rank).collect());
    let config = merge(
        input_config(&pres, &source),
        json!({
            "s_max": args.s_max,
            "size_cap": args.size_cap,
            "route": opts.route,
            "degree": args.degree.map_or(json!("p^s + 1"), |d| json!(d)),
            "torsion": args.torsion,
        }),
    );
    let rows = report
        .levels
        .iter()
        .map(|l| {
            vec![
                l.s.to_string(),
                opt(l.rank),
                opt(l.fpdim),
                opt(l.h1_rank_bound),
                opt(l.h1_fpdim_split),
                opt(l.route),
                l.torsion_exponents
                    .as_ref()
                    .map(|t| t.iter().map(u64::to_string).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Outcome {
        config,
        quantity: "rank and F_p-dimension of A (x)_{Z_p[[Q^(p^s)]]} Z_p for s = 1..s_max; \
                   n + rank bounds the Q_p-dimension of H_1 and n + dim is d(A x| Q^(p^s))",
        summary: vec![
            ("stabilized_from", json!(stab.stabilized_from)),
            ("verdict", json!(stab.verdict)),
        ],
        report: json!({ "tower": to_value(&report), "stabilization": to_value(&stab) }),
        table: Table {
            header: vec![
                "s",
                "rank",
                "fpdim",
                "h1_rank_bound",
                "h1_fpdim_split",
                "route",
                "torsion_exponents",
            ],
            rows,
        },
        violation: None,
    })
}

pub fn fpdim(args: &FpdimArgs) -> Result<Outcome, CliError> {
    let (pres, source) = load(&args.input)?;
    let opts = TowerOptions {
        size_cap: args.size_cap,
        torsion: false,
        route: route(args.route),
        degree: args.degree,
    };
    let report = fpdim_tower(&pres, args.s_max, &opts)?;
    let config = merge(
        input_config(&pres, &source),
        json!({
            "s_max": args.s_max,
            "size_cap": args.size_cap,
            "route": opts.route,
            "degree": args.degree.map_or(json!("p^s + 1"), |d| json!(d)),
        }),
    );
    let rows = report
        .levels
        .iter()
        .map(|l| {
            vec![
                l.s.to_string(),
                opt(l.fpdim),
                opt(l.h1_fpdim_split),
                opt(l.route),
            ]
        })
        .collect();
    Ok(Outcome {
        config,
        quantity:
            "dim_Fp of A (x)_{Z_p[[Q^(p^s)]]} F_p for s = 1..s_max, and n + dim = d(A x| Q^(p^s))",
        summary: vec![],
        report: to_value(&report),
        table: Table {
            header: vec!["s", "fpdim", "h1_fpdim_split", "route"],
            rows,
        },
        violation: None,
    })
}

/// The requested λ values and the resolved grid description.
fn lambdas(p: u64, degree: usize, args: &LambdaArgs) -> Result<(Vec<PadicInt>, Value), CliError> {
    ensure_prime(p)?;
    let precision = args
        .precision
        .unwrap_or_else(|| required_lambda_precision(p, degree, 1).max(4));
    let default_grid =
        args.lambdas.is_empty() && args.all_residues_mod.is_none() && args.random.is_none();
    let (residues, random) = if default_grid {
        (
            Some(p * p),
            Some(protower_core::tower::DEFAULT_RANDOM_LAMBDAS),
        )
    } else {
        (args.all_residues_mod, args.random)
    };
    let mut out = args
        .lambdas
        .iter()
        .map(|t| PadicInt::parse(t, p, precision))
        .collect::<protower_core::Result<Vec<_>>>()?;
    out.extend(lambda_grid(
        p,
        precision,
        residues.unwrap_or(0),
        random.unwrap_or(0),
        args.seed,
    )?);
    let config = json!({
        "lambdas": args.lambdas,
        "all_residues_mod": residues,
        "random": random.unwrap_or(0),
        "seed": args.seed,
        "precision": precision,
        "degree": degree,
    });
    Ok((out, config))
}

pub fn scan(args: &ScanArgs) -> Result<Outcome, CliError> {
    let (pres, source) = load(&args.input)?;
    let degree = args.lambda.degree.unwrap_or(2 * pres.p() as usize);
    let (lams, grid) = lambdas(pres.p(), degree, &args.lambda)?;
    let report = corank1_scan(&pres, &lams, degree)?;
    let rows = report
        .entries
        .iter()
        .map(|e| {
            vec![
                e.lambda.residue().to_string(),
                e.lambda.precision().to_string(),
                e.axis_swap.to_string(),
                e.subgroup.clone(),
                e.fp_dim.to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        config: merge(input_config(&pres, &source), grid),
        quantity: "dim_Fp of A (x)_{Z_p[[H]]} F_p for the corank-one subgroups H = <x y^-lambda> and <y x^-lambda>",
        summary: vec![
            ("sup_observed", json!(report.sup_observed)),
            ("hypothesis_plausible", json!(report.hypothesis_plausible)),
            ("verdict", json!(report.verdict)),
        ],
        report: to_value(&report),
        table: Table {
            header: vec!["lambda", "precision", "axis_swap", "subgroup", "fp_dim"],
            rows,
        },
        violation: None,
    })
}

pub fn king(args: &KingArgs) -> Result<Outcome, CliError> {
    let p = args.p;
    let degree = args.lambda.degree.unwrap_or_else(|| default_king_degree(p));
    let (lams, grid) = lambdas(p, degree, &args.lambda)?;
    let reports = king_sweep(&lams, p, degree)?;
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.bound_ok)
        .map(|r| r.lambda.residue().to_string())
        .collect();
    let max_valuation = reports.iter().map(|r| r.valuation).max();
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.lambda.residue().to_string(),
                r.lambda.precision().to_string(),
                r.split.z0.to_string(),
                r.split.a0.to_string(),
                r.valuation.to_string(),
                r.bound_ok.to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        config: merge(json!({ "p": p }), grid),
        quantity:
            "t-adic valuation over F_p of f = (1+t)^lambda + (1+t)^-lambda + (1+t) + (1+t)^-1 - 4, \
                   checked against g = (1+t)^z0 + (1+t)^a0 + (1+t) + (1+t)^(p-1) - 4 modulo t^p",
        summary: vec![
            ("count", json!(reports.len())),
            ("max_valuation", json!(max_valuation)),
            ("all_below_p", json!(failing.is_empty())),
        ],
        report: to_value(&reports),
        table: Table {
            header: vec!["lambda", "precision", "z0", "a0", "valuation", "bound_ok"],
            rows,
        },
        violation: (!failing.is_empty())
            .then(|| format!("valuation >= p for lambda in {failing:?}")),
    })
}

fn scalar(config: Value, quantity: &'static str, name: &'static str, value: Value) -> Outcome {
    let text = match &value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    Outcome {
        config,
        quantity,
        summary: vec![],
        report: json!({ name: value }),
        table: Table {
            header: vec![name],
            rows: vec![vec![text]],
        },
        violation: None,
    }
}

pub fn bounds(cmd: &BoundsCommand) -> Result<Outcome, CliError> {
    Ok(match cmd {
        BoundsCommand::FiveTerm {
            dim_h0,
            dim_h1q,
            dim_h2q,
            quotient_rank,
        } => {
            let inp = match (dim_h1q, dim_h2q, quotient_rank) {
                (Some(h1), Some(h2), None) => FiveTermInput {
                    dim_h0: *dim_h0,
                    dim_h1q: *h1,
                    dim_h2q: *h2,
                },
                (None, None, Some(r)) => FiveTermInput::free_abelian_quotient(*dim_h0, *r),
                _ => {
                    return Err(CliError::Input(
                        "give either --dim-h1q and --dim-h2q or --quotient-rank".into(),
                    ))
                }
            };
            let b = five_term_bounds(inp);
            Outcome {
                config: to_value(&inp),
                quantity: "lower and upper bounds on d(G) from H_2(Q) -> H_0(Q, H_1(N)) -> H_1(G) -> H_1(Q) -> 0",
                summary: vec![],
                report: to_value(&b),
                table: Table {
                    header: vec!["lower", "upper"],
                    rows: vec![vec![b.lower.to_string(), b.upper.to_string()]],
                },
                violation: None,
            }
        }
        BoundsCommand::Coinvariant { d_h, n } => scalar(
            json!({ "d_h": d_h, "n": n }),
            "upper bound d(H) + C(n-1, 2) - n + 1 on dim_Fp (A (x)_{Z_p[[H]]} F_p), clamped at 0",
            "bound",
            json!(coinvariant_dim_bound(*d_h, *n)?),
        ),
        BoundsCommand::Wilson { d_u, k, index } => {
            let params = WilsonBoundParams::parse(k, index)?;
            scalar(
                json!({ "d_u": d_u, "k": params.k.to_string(), "index": params.index.to_string() }),
                "whether d(U) <= k [G:U]^(1/2)",
                "holds",
                json!(wilson_check(*d_u, &params)),
            )
        }
        BoundsCommand::DOfU { exponents, p, j } => {
            ensure_prime(*p)?;
            let dec = CyclicDecomposition::new(exponents.clone())?;
            scalar(
                json!({ "exponents": dec.exponents, "p": p, "j": j }),
                "d(U) = i_1 + ... + i_s + 1 for U = <H, q^(p^j)> with p^j > max i",
                "d_u",
                json!(d_of_u(&dec, *p, *j)?),
            )
        }
        BoundsCommand::Chain { exponents, p, k } => {
            ensure_prime(*p)?;
            let dec = CyclicDecomposition::new(exponents.clone())?;
            let k = WilsonBoundParams::parse_k(k)?;
            let chain = wilson_chain(&dec, &k, *p)?;
            Outcome {
                config: json!({ "exponents": dec.exponents, "p": p, "k": k.to_string() }),
                quantity: "d(U) at the least j with p^j > max i, the bound d(U) <= k p^(j/2), \
                           and whether it forces i_1 + ... + i_s < k^2 p",
                summary: vec![],
                report: to_value(&chain),
                table: Table {
                    header: vec!["j", "index", "d_u", "wilson_holds", "chain_holds"],
                    rows: vec![vec![
                        chain.j.to_string(),
                        chain.index.clone(),
                        chain.d_u.to_string(),
                        chain.wilson_holds.to_string(),
                        opt(chain.chain_holds),
                    ]],
                },
                violation: (chain.chain_holds == Some(false))
                    .then(|| "bound holds but the sum is not below k^2 p".into()),
            }
        }
    })
}

/// Parses `"t^3, t; 0, 1 + t"` into a matrix over `F_p[[t]]`.
fn parse_matrix(text: &str, p: u64, degree: usize) -> Result<SeriesMatrix, CliError> {
    let t = TruncatedSeries::monomial(p, 1, degree, 1, 1)?;
    let rows: Vec<Vec<&str>> = text.split(';').map(|r| r.split(',').collect()).collect();
    let cols = rows[0].len();
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::Input(format!(
                "--matrix row {} has {} entries, expected {cols}",
                i + 1,
                row.len()
            )));
        }
        let mut parsed = Vec::with_capacity(cols);
        for (j, entry) in row.iter().enumerate() {
            let source = format!("p={p}; n=1\nrel: {}", entry.replace('t', "x"));
            let pres = parse_presentation(&source).map_err(|e| match e {
                Error::Syntax {
                    column, message, ..
                } => CliError::Input(format!(
                    "--matrix row {}, entry {}, column {}: {message}",
                    i + 1,
                    j + 1,
                    column.saturating_sub(5)
                )),
                other => CliError::Core(other),
            })?;
            parsed.push(pres.relations()[0][0].evaluate(std::slice::from_ref(&t))?);
        }
        out.push(parsed);
    }
    Ok(SeriesMatrix::from_rows(p, degree, out, cols)?)
}

pub fn decompose(args: &DecomposeArgs) -> Result<Outcome, CliError> {
    let degree = args.degree.unwrap_or(DEFAULT_DECOMPOSE_DEGREE);
    let (matrix, config) = match &args.matrix {
        Some(text) => {
            let p = args
                .input
                .p
                .ok_or_else(|| CliError::Input("--matrix needs --p".into()))?;
            ensure_prime(p)?;
            (
                parse_matrix(text, p, degree)?,
                json!({ "matrix": text, "p": p }),
            )
        }
        None => {
            let (pres, source) = load(&args.input)?;
            let p = pres.p();
            match &args.lambda {
                Some(text) => {
                    let precision = args
                        .precision
                        .unwrap_or_else(|| required_lambda_precision(p, degree, 1).max(4));
                    let lam = PadicInt::parse(text, p, precision)?;
                    let rows = substitute_character(&pres, &lam, args.swap, degree, 1)?;
                    let extra = json!({ "lambda": lam, "swap": args.swap });
                    (
                        SeriesMatrix::from_rows(p, degree, rows, pres.gens())?,
                        merge(input_config(&pres, &source), extra),
                    )
                }
                None => {
                    let reduction = eliminate_to_one_variable(&pres, degree)?;
                    let extra = json!({ "eliminated": reduction.eliminated });
                    (
                        SeriesMatrix::from_rows(p, degree, reduction.rows, 1)?,
                        merge(input_config(&pres, &source), extra),
                    )
                }
            }
        }
    };
    let p = matrix.p();
    let config = merge(
        config,
        json!({ "degree": degree, "j": args.j, "k": args.k }),
    );
    let dec = decompose_finite_module(&matrix)?;
    let mut violation = None;
    let (formula, direct) = match args.j {
        Some(j) => {
            let formula = d_of_u(&dec, p, j).ok();
            let direct = d_of_u_direct(&matrix, p, j)?;
            if formula.is_some_and(|f| f != direct) {
                violation = Some(format!(
                    "d(U) formula {formula:?} disagrees with direct value {direct}"
                ));
            }
            (formula, Some(direct))
        }
        None => (None, None),
    };
    let chain = match &args.k {
        Some(k) => Some(wilson_chain(&dec, &WilsonBoundParams::parse_k(k)?, p)?),
        None => None,
    };
    if chain.as_ref().is_some_and(|c| c.chain_holds == Some(false)) {
        violation = Some("bound holds but the sum is not below k^2 p".into());
    }
    let row = vec![
        dec.exponents
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";"),
        dec.m.to_string(),
        dec.d_h.to_string(),
        opt(args.j),
        opt(formula),
        opt(direct),
        opt(chain.as_ref().map(|c| c.wilson_holds)),
        opt(chain.as_ref().and_then(|c| c.chain_holds)),
    ];
    Ok(Outcome {
        config,
        quantity:
            "cyclic decomposition F_p[[t]]/(t^i_1) + ... + F_p[[t]]/(t^i_s) of a finite module, \
                   d(H) = i_1 + ... + i_s, and d(U) for U = <H, q^(p^j)>",
        summary: vec![("d_h", json!(dec.d_h))],
        report: json!({
            "decomposition": to_value(&dec),
            "d_of_u": formula,
            "d_of_u_direct": direct,
            "chain": chain.as_ref().map(to_value),
            "fp_dim": to_value(&ExtInt::Exact(dec.d_h)),
        }),
        table: Table {
            header: vec![
                "exponents",
                "m",
                "d_h",
                "j",
                "d_of_u",
                "d_of_u_direct",
                "wilson_holds",
                "chain_holds",
            ],
            rows: vec![row],
        },
        violation,
    })
}
