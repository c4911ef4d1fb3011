//! `punctured`: H¹ and L² inner products on built-in or file-defined cells.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use punctured::antilaplacian::{anti_laplacian_harmonic, AntiLaplacianMethod};
use punctured::benchmarks::{
    boundary_error, constant_aligned_error, linear_aligned_error, punctured_square_exact, Benchmark,
};
use punctured::functions::{ClosedForm, FunctionPair};
use punctured::geometry::{file::load_cell, sample_cell_boundary, PuncturedCell, DEFAULT_SIGMA};
use punctured::harmonic::{decompose_harmonic, CellOperators};
use punctured::inner_products::{h1_semi, l2, prepare, LocalPoissonFunction};
use punctured::interior::{
    bounding_box_grid, cauchy_eval, write_csv, InteriorQuery, DEFAULT_EPSILON, DEFAULT_REFINEMENT,
};
use punctured::nystrom::{GmresOptions, SolverChoice};
use punctured::oracle::AreaOracle;
use punctured::polynomials::BivariatePolynomial;

const CONVERGENCE_NS: [usize; 5] = [4, 8, 16, 32, 64];

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    Lu,
    Iterative,
}

#[derive(Debug, Parser)]
#[command(name = "punctured", version, about = "Boundary-only H1 and L2 inner products on punctured cells")]
struct Args {
    /// Built-in cell: punctured-square, pacman or ghost.
    #[arg(long, value_parser = parse_benchmark, conflicts_with = "geometry", required_unless_present = "geometry")]
    cell: Option<Benchmark>,

    /// Geometry file (TOML) describing a custom cell.
    #[arg(long, requires = "functions")]
    geometry: Option<PathBuf>,

    /// Function file (TOML with [v] and [w] tables) for a custom cell.
    #[arg(long, requires = "geometry")]
    functions: Option<PathBuf>,

    /// Comma-separated list of n (half the nodes per edge), each even and at least 4.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,

    /// Kress grading parameter.
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,

    #[arg(long, value_enum, default_value = "lu")]
    solver: SolverArg,

    /// Run n = 4, 8, 16, 32, 64 (unless --n is given) and report every row.
    #[arg(long)]
    convergence: bool,

    /// Evaluate v on an R×R grid over the cell's bounding box at the largest n.
    #[arg(long, value_name = "R")]
    interior_grid: Option<usize>,

    /// Interior points closer than this to the boundary are skipped.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,

    /// Trigonometric refinement levels for the interior Cauchy sums.
    #[arg(long, default_value_t = DEFAULT_REFINEMENT)]
    interior_refinement: u32,

    /// Where to write the interior grid CSV.
    #[arg(long, default_value = "interior.csv")]
    interior_out: PathBuf,

    /// Compare the products against an independent area quadrature.
    #[arg(long)]
    oracle: bool,

    /// Write the result CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_benchmark(s: &str) -> std::result::Result<Benchmark, String> {
    s.parse::<Benchmark>().map_err(|e| e.to_string())
}

/// A function of the run: its closed form, Laplacian, and whether the
/// closed form is valid inside the cell (not just on the boundary).
struct Given {
    closed: ClosedForm<f64>,
    laplacian: BivariatePolynomial<f64>,
    exact_inside: bool,
}

struct Problem {
    cell: PuncturedCell<f64>,
    v: Given,
    w: Given,
    benchmark: Option<Benchmark>,
}

impl Problem {
    fn load(args: &Args) -> Result<Self> {
        if let Some(b) = args.cell {
            let (v, w) = b.functions::<f64>();
            let given = |f: ClosedForm<f64>| Given {
                laplacian: f.laplacian(),
                closed: f,
                exact_inside: true,
            };
            return Ok(Self {
                cell: b.cell(),
                v: given(v),
                w: given(w),
                benchmark: Some(b),
            });
        }
        let geometry = args.geometry.as_ref().expect("clap enforces --geometry");
        let functions = args.functions.as_ref().expect("clap enforces --functions");
        let cell = load_cell(geometry).with_context(|| format!("loading {}", geometry.display()))?;
        let text = fs::read_to_string(functions).with_context(|| format!("reading {}", functions.display()))?;
        let pair = FunctionPair::parse(&text).with_context(|| format!("parsing {}", functions.display()))?;
        let given = |r: &punctured::functions::FunctionRecord| -> Result<Given> {
            let (laplacian, exact_inside) = r.laplacian()?;
            Ok(Given {
                closed: r.closed_form()?,
                laplacian,
                exact_inside,
            })
        };
        Ok(Self {
            cell,
            v: given(&pair.v)?,
            w: given(&pair.w)?,
            benchmark: None,
        })
    }
}

#[derive(Clone)]
struct Row {
    n: usize,
    quantity: &'static str,
    computed: f64,
    reference: Option<f64>,
}

fn sci(x: f64) -> String {
    format!("{x:.15e}")
}

fn write_rows(rows: &[Row], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "n,quantity,computed,reference,abs_error")?;
    for r in rows {
        let (reference, error) = match r.reference {
            Some(x) => (sci(x), sci((r.computed - x).abs())),
            None => (String::new(), String::new()),
        };
        writeln!(out, "{},{},{},{reference},{error}", r.n, r.quantity, sci(r.computed))?;
    }
    Ok(())
}

fn solver_choice(args: &Args) -> SolverChoice {
    match args.solver {
        SolverArg::Lu => SolverChoice::Lu,
        SolverArg::Iterative => SolverChoice::Iterative(GmresOptions::default()),
    }
}

fn n_list(args: &Args) -> Result<Vec<usize>> {
    let ns = match &args.n {
        Some(ns) => ns.clone(),
        None if args.convergence => CONVERGENCE_NS.to_vec(),
        None => vec![64],
    };
    if ns.is_empty() {
        bail!("--n needs at least one value");
    }
    if let Some(bad) = ns.iter().find(|&&n| n < 4 || n % 2 != 0) {
        bail!("--n values must be even and at least 4, got {bad}");
    }
    Ok(ns)
}

/// Intermediate errors of the punctured-square benchmark: the harmonic part
/// of `v` and its exact conjugate, normal derivative and anti-Laplacian.
fn square_intermediates(ops: &CellOperators<f64>, n: usize, rows: &mut Vec<Row>) -> Result<()> {
    let sb = ops.boundary();
    let exact = punctured_square_exact::harmonic_part::<f64>();
    let hd = decompose_harmonic(ops, &exact.trace(sb))?;
    let al = anti_laplacian_harmonic(ops, &hd, AntiLaplacianMethod::Auto)?;
    let conj: Vec<f64> = sb.points().iter().map(|&p| punctured_square_exact::conjugate(p)).collect();
    let phi: Vec<f64> = sb.points().iter().map(|&p| punctured_square_exact::anti_laplacian(p)).collect();
    let wnd = exact.weighted_normal_derivative(sb);
    rows.push(Row {
        n,
        quantity: "a1",
        computed: hd.log_coefficients[0],
        reference: Some(punctured_square_exact::LOG_COEFFICIENT),
    });
    for (quantity, err) in [
        ("psi_hat_error", constant_aligned_error(sb, &conj, &hd.conjugate)?),
        ("wnd_error", boundary_error(sb, &wnd, &hd.weighted_normal_derivative)?),
        ("anti_laplacian_error", linear_aligned_error(sb, &phi, &al.values)?),
    ] {
        rows.push(Row {
            n,
            quantity,
            computed: err,
            reference: Some(0.0),
        });
    }
    Ok(())
}

fn run_n(args: &Args, problem: &Problem, n: usize, rows: &mut Vec<Row>) -> Result<Arc<CellOperators<f64>>> {
    let start = Instant::now();
    let sb = sample_cell_boundary(&problem.cell, n, args.sigma)?;
    let ops = Arc::new(CellOperators::new(sb, solver_choice(args))?);
    let sb = ops.boundary();
    let pv = prepare(&ops, &LocalPoissonFunction::new(problem.v.closed.trace(sb), problem.v.laplacian.clone()))?;
    let pw = prepare(&ops, &LocalPoissonFunction::new(problem.w.closed.trace(sb), problem.w.laplacian.clone()))?;
    let refs = problem.benchmark.map(|b| b.references());
    rows.push(Row {
        n,
        quantity: "h1",
        computed: h1_semi(&pv, &pw)?,
        reference: refs.map(|r| r.h1),
    });
    rows.push(Row {
        n,
        quantity: "l2",
        computed: l2(&pv, &pw)?,
        reference: refs.map(|r| r.l2),
    });
    if problem.benchmark == Some(Benchmark::PuncturedSquare) {
        square_intermediates(&ops, n, rows)?;
    }
    eprintln!("n = {n}: {} nodes, {:.3} s", sb.len(), start.elapsed().as_secs_f64());
    Ok(ops)
}

fn oracle_rows(problem: &Problem, computed: &[Row], rows: &mut Vec<Row>) -> Result<()> {
    if !(problem.v.exact_inside && problem.w.exact_inside) {
        bail!("--oracle needs functions whose closed form has the stated Laplacian");
    }
    let oracle = AreaOracle::new(&problem.cell)?;
    let h1 = oracle.h1_semi(&problem.v.closed, &problem.w.closed);
    let l2v = oracle.l2(&problem.v.closed, &problem.w.closed);
    for r in computed {
        let (quantity, reference) = match r.quantity {
            "h1" => ("h1_vs_oracle", h1),
            "l2" => ("l2_vs_oracle", l2v),
            _ => continue,
        };
        rows.push(Row {
            n: r.n,
            quantity,
            computed: r.computed,
            reference: Some(reference),
        });
    }
    Ok(())
}

fn interior(args: &Args, problem: &Problem, ops: &Arc<CellOperators<f64>>, resolution: usize, rows: &mut Vec<Row>) -> Result<()> {
    let sb = ops.boundary();
    let pv = prepare(ops, &LocalPoissonFunction::new(problem.v.closed.trace(sb), problem.v.laplacian.clone()))?;
    let grid = bounding_box_grid(sb.points(), resolution)?;
    let mut query = InteriorQuery::new(&pv, grid);
    query.epsilon = args.epsilon;
    query.refinement = args.interior_refinement;
    let values = cauchy_eval(&query)?;
    let mut file = io::BufWriter::new(
        fs::File::create(&args.interior_out).with_context(|| format!("creating {}", args.interior_out.display()))?,
    );
    write_csv(&values, &mut file)?;
    file.flush()?;
    if !problem.v.exact_inside {
        return Ok(());
    }
    let mut errors = Vec::new();
    let mut gradient_errors = Vec::new();
    for v in &values {
        if let (Some(value), Some(g)) = (v.value, v.gradient) {
            let e = problem.v.closed.gradient(v.point);
            errors.push((value - problem.v.closed.value(v.point)).abs());
            gradient_errors.push((g[0] - e[0]).hypot(g[1] - e[1]));
        }
    }
    if errors.is_empty() {
        bail!("no interior grid point is farther than {} from the boundary", args.epsilon);
    }
    let n = sb.n();
    let max = |e: &[f64]| e.iter().copied().fold(0.0, f64::max);
    rows.push(Row {
        n,
        quantity: "interior_max_error",
        computed: max(&errors),
        reference: Some(0.0),
    });
    errors.sort_by(f64::total_cmp);
    rows.push(Row {
        n,
        quantity: "interior_median_error",
        computed: errors[errors.len() / 2],
        reference: Some(0.0),
    });
    rows.push(Row {
        n,
        quantity: "interior_gradient_max_error",
        computed: max(&gradient_errors),
        reference: Some(0.0),
    });
    Ok(())
}

fn run(args: &Args) -> Result<bool> {
    let ns = n_list(args)?;
    let problem = Problem::load(args)?;
    let mut rows = Vec::new();
    let mut failed = false;
    let mut finest: Option<Arc<CellOperators<f64>>> = None;
    for &n in &ns {
        match run_n(args, &problem, n, &mut rows) {
            Ok(ops) => {
                if finest.as_ref().is_none_or(|f| f.boundary().n() < n) {
                    finest = Some(ops);
                }
            }
            Err(e) => {
                eprintln!("error: n = {n}: {e:#}");
                failed = true;
            }
        }
    }
    if args.oracle {
        let computed = rows.clone();
        if let Err(e) = oracle_rows(&problem, &computed, &mut rows) {
            eprintln!("error: oracle: {e:#}");
            failed = true;
        }
    }
    if let Some(resolution) = args.interior_grid {
        match &finest {
            Some(ops) => {
                if let Err(e) = interior(args, &problem, ops, resolution, &mut rows) {
                    eprintln!("error: interior grid: {e:#}");
                    failed = true;
                }
            }
            None => failed = true,
        }
    }
    match &args.out {
        Some(path) => {
            let mut file = io::BufWriter::new(
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            write_rows(&rows, &mut file)?;
            file.flush()?;
        }
        None => write_rows(&rows, &mut io::stdout().lock())?,
    }
    Ok(!failed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
