mod encode;

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use genoq_core::encoders::baseline::amplitude_encode_sequence;
use genoq_core::encoders::compress::{bwt, classic_huffman, ibwt, quanthuff, BwtResult};
use genoq_core::encoders::entropy::{quantig, IgMetric};
use genoq_core::infomath::{base_distribution, divergence, shannon_entropy, DivergenceKind};
use genoq_core::qoltz::{train, TrainConfig};
use genoq_core::qsim::{set_qubit_cap, StateDump};
use genoq_core::seqio::{dataset_stats, load_labels_csv, load_promoter_csv, Base, DnaSequence, Label};
use genoq_core::verify::{self, random_sequence, VerifyOptions, GROUPS};
use genoq_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{input, Cli, CliError, Command, Format, QoltzCommand, TrainArgs};

pub const BENCH_SCHEMES: [&str; 6] = ["huffman", "classic-huffman", "bwt", "amplitude", "quantig", "entropy"];

/// Where machine output goes.
pub struct Sink {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
}

impl Sink {
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_json(&self, value: &Value) -> Result<(), CliError> {
        self.emit(&(serde_json::to_string_pretty(value).expect("json value") + "\n"))
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(cap) = cli.max_qubits {
        set_qubit_cap(cap).map_err(|e| CliError::Usage(format!("--max-qubits: {e}")))?;
    }
    let sink = Sink { out: cli.out, format: cli.format, seed: cli.seed };
    match cli.command {
        Command::Encode(args) => encode::run(&args, &sink),
        Command::Sample { state, shots } => sample(&state, shots, &sink),
        Command::Huffman { input, classic } => huffman(&input, classic, &sink),
        Command::Bwt { input } => {
            let seq = input::sequence(&input, "input")?;
            sink.emit_json(&serde_json::to_value(bwt(&seq)).expect("bwt serializes"))
        }
        Command::Ibwt { transformed, primary_index } => inverse_bwt(&transformed, primary_index, &sink),
        Command::Entropy { input } => entropy(&input, &sink),
        Command::Divergence { kind, input, reference, smooth } => {
            let kind: DivergenceKind = kind.parse()?;
            let p = base_distribution(&input::sequence(&input, "input")?);
            let q = base_distribution(&input::sequence(&reference, "--ref")?);
            let value = divergence(kind, &p, &q, smooth)?;
            sink.emit_json(&json!({ "kind": kind.name(), "value": value, "p": p.values(), "q": q.values() }))
        }
        Command::Stats { table, labels } => stats(&table, &labels, &sink),
        Command::Qoltz { action: QoltzCommand::Train(args) } => qoltz_train(&args, &sink),
        Command::Bench { schemes, lengths, repeats } => bench(&schemes, &lengths, repeats, &sink),
        Command::Verify { only } => run_verify(only, &sink),
    }
}

fn sample(path: &PathBuf, shots: u64, sink: &Sink) -> Result<(), CliError> {
    let text = fs::read_to_string(path)?;
    let state = StateDump::parse(&text)?.to_state()?;
    let counts = state.sample_counts(shots, sink.seed)?;
    sink.emit_json(&serde_json::to_value(counts).expect("counts serialize"))
}

fn huffman(arg: &str, classic: bool, sink: &Sink) -> Result<(), CliError> {
    let seq = input::sequence(arg, "input")?;
    let codebook = if classic { classic_huffman(&seq) } else { quanthuff(&seq)?.codebook };
    let mut v = codebook.to_json();
    v["tree"] = json!(if classic { "classic" } else { "cascade" });
    sink.emit_json(&v)
}

fn inverse_bwt(arg: &str, primary_index: Option<usize>, sink: &Sink) -> Result<(), CliError> {
    let text = input::resolve(arg, "transformed")?;
    let result = if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(Error::from)?;
        let transformed = v["transformed"].as_str().ok_or_else(|| CliError::Usage("missing 'transformed' in JSON".into()))?;
        let index = primary_index
            .or_else(|| v["primary_index"].as_u64().map(|i| i as usize))
            .ok_or_else(|| CliError::Usage("missing 'primary_index' in JSON".into()))?;
        BwtResult { transformed: transformed.to_string(), primary_index: index }
    } else {
        let index = primary_index.ok_or_else(|| CliError::Usage("missing --primary-index".into()))?;
        BwtResult { transformed: text.trim().to_string(), primary_index: index }
    };
    let seq = ibwt(&result)?;
    sink.emit_json(&json!({ "sequence": seq.to_string() }))
}

fn entropy(arg: &str, sink: &Sink) -> Result<(), CliError> {
    let seq = input::sequence(arg, "input")?;
    let p = base_distribution(&seq);
    let h = shannon_entropy(&p);
    match sink.format_or(Format::Json) {
        Format::Csv => {
            let v = p.values();
            sink.emit(&format!(
                "length,p_A,p_C,p_G,p_T,entropy_bits\n{},{},{},{},{},{}\n",
                seq.len(),
                v[0],
                v[1],
                v[2],
                v[3],
                h
            ))
        }
        Format::Json => {
            let counts = seq.counts();
            let by_base = |vals: Vec<Value>| -> Value {
                Base::ALL.iter().zip(vals).map(|(b, x)| (b.to_char().to_string(), x)).collect()
            };
            sink.emit_json(&json!({
                "length": seq.len(),
                "counts": by_base(counts.iter().map(|c| json!(c)).collect()),
                "distribution": by_base(p.values().iter().map(|x| json!(x)).collect()),
                "entropy_bits": h,
            }))
        }
    }
}

fn stats(table: &PathBuf, labels: &PathBuf, sink: &Sink) -> Result<(), CliError> {
    let table = load_promoter_csv(table)?;
    let by_id: HashMap<String, Label> = load_labels_csv(labels)?;
    let joined = table
        .records
        .iter()
        .map(|r| {
            by_id
                .get(&r.id)
                .cloned()
                .ok_or_else(|| Error::Schema(format!("no label for id '{}'", r.id)))
        })
        .collect::<Result<Vec<Label>, Error>>()?;
    let s = dataset_stats(&table.records, &joined)?;
    match sink.format_or(Format::Json) {
        Format::Json => sink.emit(&s.to_json()),
        Format::Csv => sink.emit(&s.to_csv()),
    }
}

fn qoltz_train(args: &TrainArgs, sink: &Sink) -> Result<(), CliError> {
    let sequences = input::sequences(&args.input, "--input")?;
    let config = TrainConfig {
        segments: args.segments,
        layers: args.layers,
        steps: args.steps,
        learning_rate: args.lr,
        batch_size: args.batch,
        split: args.split,
        seed: sink.seed,
        ..TrainConfig::default()
    };
    let outcome = train(&sequences, &config)?;
    let summary = json!({
        "n": outcome.model.n,
        "train_size": outcome.train_size,
        "val_size": outcome.val_size,
        "stopped_early": outcome.stopped_early,
        "initial_train_j": outcome.trace.first().map(|r| r.train_j),
        "final_train_j": outcome.trace.last().map(|r| r.train_j),
    });
    if let Some(dir) = &sink.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("model.json"), outcome.model.to_json())?;
        fs::write(dir.join("loss.csv"), outcome.trace_csv())?;
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary).expect("json") + "\n")?;
        return Ok(());
    }
    match sink.format_or(Format::Json) {
        Format::Csv => sink.emit(&outcome.trace_csv()),
        Format::Json => sink.emit_json(&json!({
            "summary": summary,
            "model": outcome.model,
            "trace": outcome.trace,
        })),
    }
}

fn bench_once(scheme: &str, seq: &DnaSequence) -> Result<(), CliError> {
    match scheme {
        "huffman" => drop(quanthuff(seq)?),
        "classic-huffman" => drop(classic_huffman(seq)),
        "bwt" => drop(bwt(seq)),
        "amplitude" => drop(amplitude_encode_sequence(seq)?),
        "quantig" => drop(quantig(seq, seq, IgMetric::FisherRao, Some(1e-9))?),
        "entropy" => drop(shannon_entropy(&base_distribution(seq))),
        other => return Err(CliError::Usage(format!("--schemes: unknown scheme '{other}'"))),
    }
    Ok(())
}

fn bench(schemes: &[String], lengths: &[usize], repeats: usize, sink: &Sink) -> Result<(), CliError> {
    let schemes: Vec<&str> = schemes.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if schemes.is_empty() {
        return Err(CliError::Usage("--schemes: no schemes given".into()));
    }
    if let Some(bad) = schemes.iter().find(|s| !BENCH_SCHEMES.contains(s)) {
        return Err(CliError::Usage(format!(
            "--schemes: unknown scheme '{bad}' (expected one of {})",
            BENCH_SCHEMES.join(", ")
        )));
    }
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    if lengths.is_empty() || lengths[0] == 0 || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--lengths must be positive and strictly ascending".into()));
    }
    let mut rows = Vec::new();
    for scheme in &schemes {
        for &len in lengths {
            let mut rng = ChaCha8Rng::seed_from_u64(sink.seed ^ len as u64);
            let seq = random_sequence(len, &mut rng);
            bench_once(scheme, &seq)?;
            let times: Vec<f64> = (0..repeats)
                .map(|_| {
                    let t = Instant::now();
                    bench_once(scheme, &seq).map(|_| t.elapsed().as_nanos() as f64)
                })
                .collect::<Result<_, _>>()?;
            let mean = times.iter().sum::<f64>() / repeats as f64;
            let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / repeats as f64;
            rows.push((scheme.to_string(), len, mean, var.sqrt()));
        }
    }
    match sink.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("scheme,length,mean_ns,stddev_ns\n");
            for (s, l, m, d) in &rows {
                out.push_str(&format!("{s},{l},{m:.1},{d:.1}\n"));
            }
            sink.emit(&out)
        }
        Format::Json => sink.emit_json(&Value::Array(
            rows.iter()
                .map(|(s, l, m, d)| json!({ "scheme": s, "length": l, "mean_ns": m, "stddev_ns": d }))
                .collect(),
        )),
    }
}

fn run_verify(only: Option<String>, sink: &Sink) -> Result<(), CliError> {
    if let Some(g) = &only {
        if !GROUPS.iter().any(|x| x.eq_ignore_ascii_case(g)) {
            return Err(CliError::Usage(format!("--only: unknown group '{g}' (expected one of {})", GROUPS.join(", "))));
        }
    }
    let results = verify::run(&VerifyOptions { only, seed: sink.seed, ..VerifyOptions::default() })?;
    match sink.format {
        Some(Format::Json) => sink.emit_json(&serde_json::to_value(&results).expect("results serialize"))?,
        Some(Format::Csv) => {
            let mut out = String::from("group,check,passed,max_error,tolerance\n");
            for r in &results {
                out.push_str(&format!("{},{},{},{:e},{:e}\n", r.group, r.name.replace(',', ";"), r.passed, r.max_error, r.tolerance));
            }
            sink.emit(&out)?
        }
        None => sink.emit(&verify::render_table(&results))?,
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        Err(CliError::Verification(failed))
    } else {
        Ok(())
    }
}
