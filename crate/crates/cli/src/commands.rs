use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use snchol::kernels::{backend_by_name, KernelBackend, THREADS_ENV};
use snchol::pr::reorder_within_supernodes;
use snchol::sparse::{apply_symmetric_permutation, Permutation, SymmetricMatrix};
use snchol::{analyze, factorize, Factorization, Method, Ordering, SymbolicFactor, SymbolicOptions};

use crate::args::{AnalyzeArgs, BackendArgs, BenchArgs, CheckArgs, Command, FactorArgs, PipelineArgs};
use crate::input::{display_name, load_matrix, read_list, read_vector};
use crate::profile::{performance_profile, tau_grid, write_profile};
use crate::record::{append_records, median, write_records, BenchRecord};

/// Runs a subcommand, writing its report to `out`. Returns `false` when a
/// check did not meet its tolerance.
pub fn run(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Analyze(a) => cmd_analyze(&a, out).map(|()| true),
        Command::Factor(a) => cmd_factor(&a, out),
        Command::Check(a) => cmd_check(&a, out),
        Command::Bench(a) => cmd_bench(&a, out).map(|()| true),
    }
}

/// A matrix taken through ordering and symbolic analysis.
pub struct Prepared {
    pub name: String,
    pub a: SymmetricMatrix,
    pub symbolic: SymbolicFactor,
    /// `a` in the symbolic factor's ordering.
    pub permuted: SymmetricMatrix,
}

pub fn parse_ordering(spec: &str) -> Result<Ordering> {
    Ok(match spec {
        "natural" => Ordering::Natural,
        "mindeg" => Ordering::MinimumDegree,
        _ => match spec.strip_prefix("file:") {
            Some(path) => Ordering::Given(Permutation::read(path).with_context(|| format!("reading ordering {path}"))?),
            None => bail!("unknown ordering {spec:?}; expected natural, mindeg or file:<path>"),
        },
    })
}

fn symbolic_options(p: &PipelineArgs, reorder: bool) -> SymbolicOptions {
    SymbolicOptions {
        merge_cap: p.merge_cap.0,
        reorder,
        ..SymbolicOptions::default()
    }
}

pub fn prepare(matrix: &str, p: &PipelineArgs) -> Result<Prepared> {
    let a = load_matrix(matrix, p.seed)?;
    let ordering = parse_ordering(&p.order)?;
    let symbolic = analyze(a.pattern(), &ordering, &symbolic_options(p, p.reorder()))
        .with_context(|| format!("symbolic analysis of {matrix}"))?;
    let permuted = apply_symmetric_permutation(&a, symbolic.perm())?;
    Ok(Prepared {
        name: display_name(matrix),
        a,
        symbolic,
        permuted,
    })
}

pub fn make_backend(b: &BackendArgs) -> Result<Box<dyn KernelBackend>> {
    if let Some(t) = b.threads {
        std::env::set_var(THREADS_ENV, t.to_string());
    }
    Ok(backend_by_name(&b.backend)?)
}

fn mean_block(s: &SymbolicFactor) -> f64 {
    let rows: usize = (0..s.nsuper()).map(|j| s.below(j).len()).sum();
    if s.block_count() == 0 {
        0.0
    } else {
        rows as f64 / s.block_count() as f64
    }
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let p = &args.pipeline;
    let a = load_matrix(&args.matrix, p.seed)?;
    let ordering = parse_ordering(&p.order)?;
    let plain = analyze(a.pattern(), &ordering, &symbolic_options(p, false))
        .with_context(|| format!("symbolic analysis of {}", args.matrix))?;
    let reordered = if p.reorder() {
        Some(reorder_within_supernodes(&plain, true)?.1)
    } else {
        None
    };
    let s = reordered.as_ref().unwrap_or(&plain);
    let st = s.stats();

    writeln!(out, "matrix: {} (n = {}, lower nnz = {})", display_name(&args.matrix), a.n(), a.nnz())?;
    writeln!(out, "ordering: {}", p.order)?;
    writeln!(out, "fill: {}", s.columns().fill(s.pattern()))?;
    writeln!(out, "factor nnz (true structure): {}", s.columns().nnz())?;
    writeln!(out, "factor nnz (panels, explicit zeros included): {}", s.factor_nnz())?;
    writeln!(out, "supernodes before merging: {}", st.fundamental_supernodes)?;
    match p.merge_cap.0 {
        Some(cap) => writeln!(out, "supernodes after merging: {} ({} merges, cap {cap}%)", s.nsuper(), st.merges)?,
        None => writeln!(out, "supernodes after merging: {} (merging off)", s.nsuper())?,
    }
    writeln!(out, "storage growth: {:.3}%", s.storage_growth_percent())?;
    writeln!(out, "work growth: {:.3}%", s.work_growth_percent())?;
    writeln!(out, "blocks before reordering: {} (mean length {:.3})", plain.block_count(), mean_block(&plain))?;
    if let Some(r) = &reordered {
        writeln!(out, "blocks after reordering: {} (mean length {:.3})", r.block_count(), mean_block(r))?;
    }
    let plan = s.plan();
    writeln!(
        out,
        "workspace plan (reals): mf {} ll {} rl {} rlb 0",
        plan.mf_stack, plan.ll_update, plan.rl_update
    )?;
    if args.blocks {
        for j in 0..s.nsuper() {
            let r = s.partition().range(j);
            write!(out, "supernode {}: columns {}-{} blocks {:?}", j + 1, r.start + 1, r.end, plain.blocks(j))?;
            if let Some(re) = &reordered {
                write!(out, " after reordering {:?}", re.blocks(j))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Factors `repeats` times and returns the last factorization with a record
/// holding the median time.
pub fn measure<'s>(
    prep: &'s Prepared,
    method: Method,
    backend: &dyn KernelBackend,
    p: &PipelineArgs,
    repeats: usize,
) -> Result<(BenchRecord, Factorization<'s>)> {
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let f = factorize(&prep.permuted, &prep.symbolic, method, backend)
            .with_context(|| format!("numerical factorization ({method}) of {}", prep.name))?;
        times.push(f.stats().seconds);
        last = Some(f);
    }
    let f = last.context("at least one repeat is required")?;
    let st = f.stats();
    let record = BenchRecord {
        matrix: prep.name.clone(),
        n: prep.a.n(),
        method: method.to_string(),
        backend: st.backend.clone(),
        ordering: p.order.clone(),
        pr: p.reorder(),
        merge_cap: p.merge_cap.0,
        repeats,
        aggregation: "median".to_string(),
        seconds: median(times),
        flops: st.flops,
        factor_nnz: st.factor_nnz,
        panel_storage: st.panel_storage,
        workspace_peak: st.workspace_peak,
        total_storage: st.total_storage(),
        assembly_ops: st.assembly_ops,
        kernel_calls: st.kernel_calls(),
        status: "ok".to_string(),
    };
    Ok((record, f))
}

fn failed_record(name: &str, n: usize, method: Method, p: &PipelineArgs, backend: &str, repeats: usize, err: &anyhow::Error) -> BenchRecord {
    BenchRecord {
        matrix: name.to_string(),
        n,
        method: method.to_string(),
        backend: backend.to_string(),
        ordering: p.order.clone(),
        pr: p.reorder(),
        merge_cap: p.merge_cap.0,
        repeats,
        aggregation: "median".to_string(),
        seconds: 0.0,
        flops: 0,
        factor_nnz: 0,
        panel_storage: 0,
        workspace_peak: 0,
        total_storage: 0,
        assembly_ops: 0,
        kernel_calls: 0,
        status: format!("error: {err:#}"),
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Relative residual `|A x - b| / |b|`.
pub fn residual(a: &SymmetricMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let nb = norm(b);
    if nb == 0.0 {
        norm(&r)
    } else {
        norm(&r) / nb
    }
}

/// Largest entry difference between two factorizations of the same
/// symbolic factor, relative to the largest entry of `oracle`.
pub fn deviation(f: &Factorization<'_>, oracle: &Factorization<'_>) -> f64 {
    let (x, y) = (f.storage().values(), oracle.storage().values());
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale
}

const DEVIATION_LIMIT: f64 = 1e-10;

fn cmd_factor(args: &FactorArgs, out: &mut dyn Write) -> Result<bool> {
    let method: Method = args.method.parse()?;
    let backend = make_backend(&args.backend)?;
    let prep = prepare(&args.matrix, &args.pipeline)?;
    let (record, f) = measure(&prep, method, backend.as_ref(), &args.pipeline, args.repeats)?;
    let st = f.stats();
    let s = &prep.symbolic;

    writeln!(out, "matrix: {} (n = {}, lower nnz = {})", record.matrix, record.n, prep.a.nnz())?;
    writeln!(out, "method: {}  backend: {}", record.method, record.backend)?;
    writeln!(
        out,
        "ordering: {}  reordering: {}  merge cap: {}",
        record.ordering,
        if record.pr { "on" } else { "off" },
        record.merge_cap.map_or("off".to_string(), |c| format!("{c}%"))
    )?;
    writeln!(out, "supernodes: {}  blocks: {}", s.nsuper(), s.block_count())?;
    writeln!(out, "seconds (median of {}): {:.6}", record.repeats, record.seconds)?;
    writeln!(out, "flops: {}", record.flops)?;
    writeln!(out, "factor nnz: {}", record.factor_nnz)?;
    writeln!(out, "panel storage: {}", record.panel_storage)?;
    writeln!(out, "workspace peak: {}", record.workspace_peak)?;
    writeln!(out, "total storage: {}", record.total_storage)?;
    writeln!(out, "assembly ops: {}", record.assembly_ops)?;
    writeln!(
        out,
        "kernel calls: {} (potrf {} trsm {} syrk {} gemm {})",
        record.kernel_calls, st.potrf_calls, st.trsm_calls, st.syrk_calls, st.gemm_calls
    )?;

    let b = match &args.rhs {
        Some(path) => read_vector(path)?,
        None => prep.a.mul_vec(&vec![1.0; prep.a.n()]),
    };
    let x = f.solve(&b).context("solve")?;
    writeln!(out, "residual: {:.3e}", residual(&prep.a, &x, &b))?;

    if args.pairs {
        for (&(j, p), &calls) in &st.pair_calls {
            writeln!(out, "pair {} -> {}: {} calls", j + 1, p + 1, calls)?;
        }
    }

    let mut ok = true;
    if args.check {
        let oracle = factorize(&prep.permuted, s, Method::Reference, &snchol::kernels::ReferenceKernels)
            .context("reference oracle")?;
        let d = deviation(&f, &oracle);
        ok = d <= DEVIATION_LIMIT;
        writeln!(out, "oracle deviation: {d:.3e} ({})", if ok { "ok" } else { "exceeds 1e-10" })?;
    }
    if let Some(path) = &args.csv {
        append_records(&[record], path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ok)
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> Result<bool> {
    let backend = make_backend(&args.backend)?;
    let prep = prepare(&args.matrix, &args.pipeline)?;
    let oracle = factorize(&prep.permuted, &prep.symbolic, Method::Reference, &snchol::kernels::ReferenceKernels)
        .context("reference oracle")?;
    let b = prep.a.mul_vec(&vec![1.0; prep.a.n()]);
    let mut ok = true;
    writeln!(out, "{} (n = {}), tolerance {:e}", prep.name, prep.a.n(), args.tolerance)?;
    for m in Method::SUPERNODAL {
        let f = factorize(&prep.permuted, &prep.symbolic, m, backend.as_ref())
            .with_context(|| format!("numerical factorization ({m}) of {}", prep.name))?;
        let d = deviation(&f, &oracle);
        let r = residual(&prep.a, &f.solve(&b)?, &b);
        let pass = d <= args.tolerance;
        ok &= pass;
        writeln!(
            out,
            "{m:<4} deviation {d:.3e}  residual {r:.3e}  workspace {:<8} {}",
            f.stats().workspace_peak,
            if pass { "ok" } else { "FAIL" }
        )?;
    }
    Ok(ok)
}

pub fn parse_methods(spec: &str) -> Result<Vec<Method>> {
    if spec == "all" {
        return Ok(Method::ALL.to_vec());
    }
    spec.split(',').map(|m| Ok(m.trim().parse::<Method>()?)).collect()
}

fn profile_path(args: &BenchArgs) -> Option<PathBuf> {
    args.profile.clone().or_else(|| {
        args.csv.as_ref().map(|c| {
            let stem = c.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            c.with_file_name(format!("{stem}.profile.csv"))
        })
    })
}

/// Benchmarks every (matrix, method) pair. Failures are recorded in their
/// row and do not stop the run.
pub fn bench_records(args: &BenchArgs) -> Result<Vec<BenchRecord>> {
    let methods = parse_methods(&args.method)?;
    let backend = make_backend(&args.backend)?;
    let mut records = Vec::new();
    for spec in read_list(&args.list)? {
        let prep = match prepare(&spec, &args.pipeline) {
            Ok(p) => p,
            Err(e) => {
                for &m in &methods {
                    records.push(failed_record(&display_name(&spec), 0, m, &args.pipeline, backend.name(), args.repeats, &e));
                }
                continue;
            }
        };
        for &m in &methods {
            match measure(&prep, m, backend.as_ref(), &args.pipeline, args.repeats) {
                Ok((r, _)) => records.push(r),
                Err(e) => records.push(failed_record(&prep.name, prep.a.n(), m, &args.pipeline, backend.name(), args.repeats, &e)),
            }
        }
    }
    Ok(records)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let taus = tau_grid(args.tau_max, args.tau_step)?;
    let records = bench_records(args)?;
    match &args.csv {
        Some(path) => write_records(&records, create(path)?)?,
        None => write_records(&records, &mut *out)?,
    }
    if let Some(path) = profile_path(args) {
        write_profile(&performance_profile(&records, &taus), create(&path)?)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))
}
