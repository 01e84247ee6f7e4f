use std::path::Path;

use serde_json::{json, Value};

use rieszlab::generators::{self, GeneratedPair};
use rieszlab::scaling::{self, FamilyParams, FamilySpec, GeneratorId};
use rieszlab::{
    biorthogonality_residual, classify, duality_identity_residual, minimal_dual, Execution, GaborDiscretization,
    PointSet2D, TfNode, VectorSequence,
};

use crate::matrix_csv::{read_matrix, write_atomic, write_matrix};
use crate::report::{Report, Residuals};
use crate::{
    points, AnalyzeArgs, CliError, DualArgs, ExampleArgs, ExampleName, FamilyArgs, FamilyName, GaborArgs, PointSetKind,
};

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    write_atomic(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_matrix(path: &Path) -> Result<VectorSequence, CliError> {
    let text = read_text(path)?;
    let matrix = read_matrix(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    Ok(VectorSequence::new(matrix)?)
}

/// Writes the report to `output`, or to stdout when absent.
pub fn emit(report: &Report, output: Option<&Path>) -> Result<(), CliError> {
    let json = report.to_json();
    match output {
        Some(path) => write_file(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn matrix_input(path: &Path, f: &VectorSequence) -> Value {
    json!({ "source": path.display().to_string(), "dim": f.dim(), "count": f.count() })
}

/// Full analysis of `f`; residuals come from `partner` when given, otherwise
/// from the minimal dual.
pub fn analyze_system(f: &VectorSequence, partner: Option<&VectorSequence>, input: Value) -> Result<Report, CliError> {
    let verdict = classify(f)?;
    let mut report = Report::from_verdict("analyze", input, &verdict);
    if let Some(g) = partner {
        report.residuals = Some(Residuals {
            dual: "partner",
            biorthogonality: Some(biorthogonality_residual(f, g)?),
            duality_identity: Some(duality_identity_residual(f, g)?),
        });
    }
    Ok(report)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let f = load_matrix(&args.input)?;
    let partner = args.partner.as_deref().map(load_matrix).transpose()?;
    let mut input = matrix_input(&args.input, &f);
    if let Some(p) = &args.partner {
        input["partner"] = json!(p.display().to_string());
    }
    let report = analyze_system(&f, partner.as_ref(), input)?;
    emit(&report, args.output.as_deref())
}

pub fn dual(args: &DualArgs) -> Result<(), CliError> {
    let f = load_matrix(&args.input)?;
    let g = minimal_dual(&f)?;
    write_file(&args.matrix_out, &write_matrix(g.columns()))?;
    let verdict = classify(&f)?;
    let mut input = matrix_input(&args.input, &f);
    input["dualOutput"] = json!(args.matrix_out.display().to_string());
    let mut report = Report::from_verdict("dual", input, &verdict);
    report.residuals = Some(Residuals {
        dual: "minimal",
        biorthogonality: Some(biorthogonality_residual(&f, &g)?),
        duality_identity: Some(duality_identity_residual(&f, &g)?),
    });
    emit(&report, args.output.as_deref())
}

pub fn example_pair(name: ExampleName, n: usize, seed: u64, complement: usize) -> Result<GeneratedPair, CliError> {
    let alone = |f| GeneratedPair { f, g: None };
    Ok(match name {
        ExampleName::Orthonormal => alone(generators::orthonormal(n)?),
        ExampleName::Weighted => generators::weighted_pair(n)?,
        ExampleName::Alternating => generators::alternating_weighted_pair(n)?,
        ExampleName::Young => generators::young_example(n)?,
        ExampleName::YoungGeneral => generators::young_general(n, complement, n)?,
        ExampleName::Riesz => alone(generators::random_riesz(n, seed)?),
    })
}

pub fn example(args: &ExampleArgs) -> Result<(), CliError> {
    let pair = example_pair(args.name, args.n, args.seed, args.complement)?;
    let name = args.name.as_str();
    let f_path = args.out_dir.join(format!("{name}-F.csv"));
    write_file(&f_path, &write_matrix(pair.f.columns()))?;
    println!("{}", f_path.display());
    if let Some(g) = &pair.g {
        let g_path = args.out_dir.join(format!("{name}-G.csv"));
        write_file(&g_path, &write_matrix(g.columns()))?;
        println!("{}", g_path.display());
    }
    Ok(())
}

fn generator_id(name: FamilyName) -> GeneratorId {
    match name {
        FamilyName::Orthonormal => GeneratorId::Orthonormal,
        FamilyName::Weighted => GeneratorId::WeightedPair,
        FamilyName::Alternating => GeneratorId::AlternatingWeightedPair,
        FamilyName::Young => GeneratorId::YoungExample,
        FamilyName::YoungGeneral => GeneratorId::YoungGeneral,
        FamilyName::Riesz => GeneratorId::RieszSeeded,
        FamilyName::Punctured => GeneratorId::GaborPunctured,
        FamilyName::Als => GeneratorId::GaborAls,
        FamilyName::Lattice => GeneratorId::GaborFullLattice,
    }
}

pub fn family_report(args: &FamilyArgs) -> Result<Report, CliError> {
    let params = FamilyParams {
        seed: args.seed,
        complement_dim: args.complement,
        half_width: args.half_width,
        samples_per_unit: args.samples,
        lattice_spacing: args.spacing,
        probe: None,
    };
    let spec = FamilySpec::with_params(generator_id(args.generator), params, args.sizes.clone())?;
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let study = scaling::run_family_with(&spec, exec)?;
    let input = serde_json::to_value(&spec).expect("family spec serializes");
    let mut report = Report::new("family", input, None);
    report.family = Some(study);
    Ok(report)
}

pub fn family(args: &FamilyArgs) -> Result<(), CliError> {
    let report = family_report(args)?;
    if let (Some(path), Some(study)) = (&args.csv, &report.family) {
        write_file(path, &study.to_csv())?;
    }
    emit(&report, args.output.as_deref())
}

fn point_set(args: &GaborArgs) -> Result<PointSet2D, CliError> {
    let required = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("{flag} is required")));
    Ok(match args.set {
        PointSetKind::Lattice => generators::lattice_points(args.a, args.b, required(args.max_index, "--max-index")?)?,
        PointSetKind::Punctured => generators::punctured_lattice(required(args.max_index, "--max-index")?)?,
        PointSetKind::Als => generators::als_point_set(required(args.nmax, "--nmax")?)?,
        PointSetKind::File => {
            let path = args
                .points
                .as_deref()
                .ok_or_else(|| CliError::Usage("--points is required with --set file".into()))?;
            let nodes = points::read_points(&read_text(path)?).map_err(|source| CliError::Parse {
                path: path.display().to_string(),
                source,
            })?;
            PointSet2D::new(nodes)?
        }
    })
}

pub fn gabor_report(args: &GaborArgs) -> Result<(Report, VectorSequence), CliError> {
    let points = point_set(args)?;
    let disc = GaborDiscretization::new(args.half_width, args.samples)?;
    let f = generators::gaussian_gabor(&points, &disc)?;
    let verdict = classify(&f)?;

    let refine = if args.refine.is_empty() {
        vec![2 * args.samples]
    } else {
        args.refine.clone()
    };
    let mut discs = vec![disc];
    for s in refine {
        discs.push(GaborDiscretization::new(args.half_width, s)?);
    }
    let probe = match (&args.probe, args.set) {
        (Some((tau, mu)), _) => Some(TfNode::new(*tau, *mu)),
        (None, PointSetKind::Punctured) => Some(TfNode::new(1.0, 0.0)),
        (None, PointSetKind::Als) => Some(TfNode::new(0.0, 0.0)),
        (None, PointSetKind::Lattice) => Some(TfNode::new(args.a / 2.0, args.b / 2.0)),
        (None, PointSetKind::File) => None,
    };
    let study = scaling::gabor_refinement_study(&points, &discs, probe)?;

    let set = match args.set {
        PointSetKind::Lattice => "lattice",
        PointSetKind::Punctured => "punctured",
        PointSetKind::Als => "als",
        PointSetKind::File => "file",
    };
    let mut input = json!({
        "set": set,
        "nodes": points.len(),
        "separation": Some(points.separation()).filter(|s| s.is_finite()),
        "halfWidth": args.half_width,
        "samplesPerUnit": args.samples,
        "dim": f.dim(),
        "count": f.count(),
    });
    match args.set {
        PointSetKind::Lattice => {
            input["maxIndex"] = json!(args.max_index);
            input["spacing"] = json!([args.a, args.b]);
        }
        PointSetKind::Punctured => input["maxIndex"] = json!(args.max_index),
        PointSetKind::Als => input["nmax"] = json!(args.nmax),
        PointSetKind::File => input["points"] = json!(args.points.as_ref().map(|p| p.display().to_string())),
    }
    if let Some(node) = probe {
        input["probe"] = json!([node.tau, node.mu]);
    }
    let mut report = Report::from_verdict("gabor", input, &verdict);
    report.refinement = Some(study);
    Ok((report, f))
}

pub fn gabor(args: &GaborArgs) -> Result<(), CliError> {
    let (report, f) = gabor_report(args)?;
    if let Some(path) = &args.matrix_out {
        write_file(path, &write_matrix(f.columns()))?;
    }
    emit(&report, args.output.as_deref())
}
