use std::fs;

use genoq_core::encoders::baseline::{
    amplitude_encode, amplitude_encode_sequence, angle_embed, pauli_feature_map, FeatureMapConfig, FeatureVector,
};
use genoq_core::encoders::compress::{qbwt_encode, quanthuff};
use genoq_core::encoders::entropy::{nz22, nz23, quantig, sencode, IgMetric};
use genoq_core::encoders::spectral::{cosine_encode_dna, cosine_encode_image, load_pgm};
use genoq_core::infomath::base_distribution;
use genoq_core::qsim::{Counts, StateDump, Statevector};
use genoq_core::seqio::{encode_bits, BaseScheme, DnaSequence};
use serde_json::{json, Value};

use super::Sink;
use crate::{input, CliError, EncodeArgs, Scheme};

const DEFAULT_QBWT_SHOTS: u64 = 1024;

struct Encoded {
    state: Option<Statevector>,
    report: Value,
    /// Extra keys for the state dump metadata.
    metadata: Value,
    counts: Option<Counts>,
    files: Vec<(&'static str, String)>,
}

impl Encoded {
    fn new(state: Statevector, report: Value) -> Self {
        Encoded { state: Some(state), report, metadata: json!({}), counts: None, files: Vec::new() }
    }
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Amplitude => "amplitude",
        Scheme::Pauli => "pauli",
        Scheme::Angle => "angle",
        Scheme::Huffman => "huffman",
        Scheme::Qbwt => "qbwt",
        Scheme::Cosine => "cosine",
        Scheme::Sencode => "sencode",
        Scheme::Nz22 => "nz22",
        Scheme::Nz23 => "nz23",
        Scheme::Quantig => "quantig",
    }
}

fn need_input(args: &EncodeArgs) -> Result<DnaSequence, CliError> {
    let arg = args.input.as_deref().ok_or_else(|| CliError::Usage("missing --input".into()))?;
    Ok(input::sequence(arg, "--input")?)
}

fn need_ref(args: &EncodeArgs) -> Result<DnaSequence, CliError> {
    let arg = args.reference.as_deref().ok_or_else(|| CliError::Usage("missing --ref".into()))?;
    Ok(input::sequence(arg, "--ref")?)
}

fn encode(args: &EncodeArgs, seed: u64) -> Result<Encoded, CliError> {
    Ok(match args.scheme {
        Scheme::Amplitude => match &args.values {
            Some(v) => {
                let values = input::values(v, "--values")?;
                let state = amplitude_encode(&FeatureVector::raw(values.clone())?)?;
                Encoded::new(state, json!({ "source": "values", "values": values }))
            }
            None => {
                let seq = need_input(args)?;
                let p = base_distribution(&seq).values();
                let state = amplitude_encode_sequence(&seq)?;
                Encoded::new(state, json!({ "source": "sequence", "distribution": p, "amplitudes_encode": "sqrt(distribution)" }))
            }
        },
        Scheme::Pauli => {
            let mut config = match &args.values {
                Some(v) => FeatureMapConfig::new(input::values(v, "--values")?),
                None => FeatureMapConfig::from_sequence(&need_input(args)?),
            };
            config.k = args.k;
            config.reps = args.reps;
            let state = pauli_feature_map(&config)?;
            Encoded::new(state, json!({ "angles": config.x, "k": config.k, "reps": config.reps }))
        }
        Scheme::Angle => {
            let seq = need_input(args)?;
            let state = angle_embed(&seq, args.entangle)?;
            Encoded::new(state, json!({ "map": "high-bit", "entangle": args.entangle }))
        }
        Scheme::Huffman => {
            let seq = need_input(args)?;
            let q = quanthuff(&seq)?;
            let mut report = q.codebook.to_json();
            report["bits"] = json!(q.bits);
            report["state_omitted"] = json!(q.state.is_none());
            Encoded { state: q.state, report, metadata: json!({}), counts: None, files: Vec::new() }
        }
        Scheme::Qbwt => {
            let seq = need_input(args)?;
            let out = qbwt_encode(&seq, args.shots.unwrap_or(DEFAULT_QBWT_SHOTS), seed)?;
            let report = json!({
                "bwt": out.bwt,
                "angles": out.angles,
                "global_phase": out.global_phase,
                "global_phase_applied": false,
            });
            let mut e = Encoded::new(out.state, report);
            e.metadata = json!({ "global_phase": out.global_phase });
            e.counts = Some(out.counts);
            e
        }
        Scheme::Cosine => match &args.image {
            Some(path) => {
                let image = load_pgm(path)?;
                let (coeffs, state) = cosine_encode_image(&image)?;
                let report = json!({
                    "width": coeffs.width,
                    "height": coeffs.height,
                    "f_max": coeffs.f_max,
                    "flattening": "alpha-major",
                    "padding": "zeros",
                });
                let mut e = Encoded::new(state, report);
                e.metadata = json!({ "flattening": "alpha-major", "padding": "zeros" });
                e.files.push(("coefficients.csv", coeffs.to_csv()));
                e
            }
            None => {
                let seq = need_input(args)?;
                let bits: String = encode_bits(&seq, BaseScheme::Cosine).iter().map(|b| b.to_string()).collect();
                let state = cosine_encode_dna(&seq)?;
                Encoded::new(state, json!({ "map": "cosine", "bits": bits }))
            }
        },
        Scheme::Sencode => {
            let (report, state) = sencode(&need_input(args)?)?;
            Encoded::new(state, serde_json::to_value(report).expect("report serializes"))
        }
        Scheme::Nz22 => {
            let (seq, reference) = (need_input(args)?, need_ref(args)?);
            let out = nz22(&seq, &reference, args.alpha, args.smooth)?;
            Encoded::new(out.state, json!({ "budget": out.budget, "divergence_kind": "kl", "fractions": out.fractions }))
        }
        Scheme::Nz23 => {
            let (seq, reference) = (need_input(args)?, need_ref(args)?);
            let out = nz23(&seq, &reference, args.alpha)?;
            Encoded::new(
                out.state,
                json!({ "budget": out.budget, "divergence_kind": "bhattacharyya", "pivot": out.pivot }),
            )
        }
        Scheme::Quantig => {
            let (seq, reference) = (need_input(args)?, need_ref(args)?);
            let metric: IgMetric = args.metric.parse().map_err(|e| CliError::Usage(format!("--metric: {e}")))?;
            let out = quantig(&seq, &reference, metric, args.smooth)?;
            Encoded::new(out.state, json!({ "metric": metric, "diagonal": out.diagonal, "basis": ["A", "C", "G", "T"] }))
        }
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value")
}

pub fn run(args: &EncodeArgs, sink: &Sink) -> Result<(), CliError> {
    let mut enc = encode(args, sink.seed)?;
    let name = scheme_name(args.scheme);
    if let (Some(shots), Some(state), None) = (args.shots, &enc.state, &enc.counts) {
        enc.counts = Some(state.sample_counts(shots, sink.seed)?);
    }
    let dump = enc.state.as_ref().map(|s| {
        let mut meta = json!({ "scheme": name });
        if let (Value::Object(m), Value::Object(extra)) = (&mut meta, &enc.metadata) {
            m.extend(extra.clone());
        }
        StateDump::from_state(s, Some(meta)).to_json()
    });
    let counts = enc.counts.as_ref().map(|c| serde_json::to_value(c).expect("counts serialize"));

    if let Some(dir) = &sink.out {
        fs::create_dir_all(dir)?;
        if let Some(d) = &dump {
            fs::write(dir.join("state.json"), d)?;
        }
        fs::write(dir.join("report.json"), pretty(&json!({ "scheme": name, "report": enc.report })) + "\n")?;
        if let Some(c) = &counts {
            fs::write(dir.join("counts.json"), pretty(c) + "\n")?;
        }
        for (file, text) in &enc.files {
            fs::write(dir.join(file), text)?;
        }
        return Ok(());
    }

    let mut out = format!("{{\n\"scheme\": \"{name}\",\n\"report\": {}", pretty(&enc.report));
    if let Some(c) = &counts {
        out.push_str(&format!(",\n\"counts\": {}", pretty(c)));
    }
    if let Some(d) = &dump {
        out.push_str(&format!(",\n\"state\": {}", d.trim_end()));
    }
    out.push_str("\n}\n");
    print!("{out}");
    Ok(())
}
