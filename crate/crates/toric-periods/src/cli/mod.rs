//! JSON task runner behind the `toric` binary: one payload in, one report
//! out, with exit code 0 for computed results, 1 for input errors and 2 for
//! precision or convergence failures.

pub mod schema;

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::characters::{tate_epsilon, AdditiveCharacter, EpsilonValue};
use crate::dichotomy::corpus;
use crate::dichotomy::{epsilon_vector, local_hom_dimension, sum_check, CharacterData, DichotomyInput};
use crate::error::Error;
use crate::etale::{disc_etale, DiscInfo, HermitianClass};
use crate::global::{
    find_lambda, global_decision, product_formula_check, rational_symbol, DecisionInputJson, DecisionOptions, Place,
    Rational, Targets,
};
use crate::padic::{LocalElement, LocalField};
use schema::{ClassifyJson, EpsilonJson, FindLambdaJson, InstanceJson, LocalDichotomyJson};

pub const DEFAULT_SEARCH_BOUND: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Epsilon,
    LocalDichotomy,
    SumCheck,
    FindLambda,
    GlobalDecide,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// p-adic working digits, overriding the field descriptors.
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_search_bound")]
    pub search_bound: u64,
    #[serde(default)]
    pub enable_lvalue: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_tolerance() -> f64 {
    crate::global::decision::L_VALUE_TOLERANCE
}

fn default_search_bound() -> u64 {
    DEFAULT_SEARCH_BOUND
}

impl Default for Options {
    fn default() -> Self {
        Options {
            precision: None,
            tolerance: default_tolerance(),
            search_bound: DEFAULT_SEARCH_BOUND,
            enable_lvalue: false,
            seed: 0,
        }
    }
}

/// One task of a batch file; `options` override those of the invocation.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskRequest {
    pub command: Command,
    pub payload: Value,
    #[serde(default)]
    pub options: Option<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub body: Value,
    pub exit_code: i32,
}

enum Failure {
    Schema { pointer: String, message: String },
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn outcome(self) -> Outcome {
        match self {
            Failure::Schema { pointer, message } => Outcome {
                body: json!({"error_kind": "SchemaError", "pointer": pointer, "message": message}),
                exit_code: 1,
            },
            Failure::Library(e) => Outcome {
                body: json!({"error_kind": e.kind(), "message": e.to_string()}),
                exit_code: if e.is_numerical() { 2 } else { 1 },
            },
        }
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn parse<T: DeserializeOwned>(payload: &Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(payload).map_err(|e| Failure::Schema {
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })
}

fn parse_str(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Schema { pointer: String::new(), message: e.to_string() })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

#[derive(Serialize)]
struct EmbeddingRow {
    v_class: HermitianClass,
    lambda_classes: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct LambdaReport {
    disc: DiscInfo,
    omega: Vec<i32>,
    v_class: Option<HermitianClass>,
}

fn classify(payload: &Value, o: &Options) -> Result<Value, Failure> {
    let req: ClassifyJson = parse(payload)?;
    let setting = req.setting.build(o.precision)?;
    let classes = setting.classify();
    let mut rows = Vec::new();
    for v in &classes {
        let lambda_classes = setting.embedding_classes(v)?.into_iter().map(|c| c.labels).collect();
        rows.push(EmbeddingRow { v_class: *v, lambda_classes });
    }
    let lambda = match &req.lambda {
        None => None,
        Some(l) => {
            let l = l.build(&setting)?;
            let mut v_class = None;
            for v in &classes {
                if setting.realizes(&l, v)? {
                    v_class = Some(*v);
                }
            }
            Some(LambdaReport { disc: setting.disc_hermitian(&l)?, omega: setting.omega(&l)?.signs, v_class })
        }
    };
    Ok(json!({
        "disc_etale": to_value(&disc_etale(&setting.algebra)?),
        "split": setting.split_mask(),
        "classes": to_value(&classes),
        "embedding_classes": to_value(&rows),
        "lambda": to_value(&lambda),
    }))
}

/// psi with the given level: x -> psi_p(tr(pi^{level - e + 1} x)).
fn additive_of_level(field: &LocalField, level: i64) -> Result<AdditiveCharacter, Error> {
    let k = level - field.e as i64 + 1;
    if k < 0 {
        return Err(Error::InvalidInput(format!("additive level must be at least e - 1 = {}", field.e - 1)));
    }
    AdditiveCharacter::new(LocalElement::uniformizer(field).pow(k as u128))
}

fn epsilon(payload: &Value, o: &Options) -> Result<Value, Failure> {
    match parse::<EpsilonJson>(payload)? {
        EpsilonJson::Tate(t) => {
            let field = t.character.domain_field.build()?;
            let chi = t.character.build(&field)?;
            let z = tate_epsilon(&chi, &additive_of_level(&field, t.additive.level)?)?;
            Ok(to_value(&EpsilonValue::new(z)))
        }
        EpsilonJson::SignVector(inst) => {
            let setting = inst.setting.build(o.precision)?;
            let data = inst.characters.build(&setting)?;
            let values = match &data {
                CharacterData::Local { alphas, splitting, delta, .. } => {
                    crate::characters::epsilon_values(&setting, alphas, &splitting.chi_w, delta)?
                        .into_iter()
                        .map(EpsilonValue::new)
                        .collect::<Vec<_>>()
                }
                CharacterData::Archimedean { .. } => Vec::new(),
            };
            let signs = epsilon_vector(&setting, &data)?;
            Ok(json!({"values": to_value(&values), "signs": signs.signs, "split": signs.split}))
        }
    }
}

fn local_dichotomy(payload: &Value, o: &Options) -> Result<Value, Failure> {
    let req: LocalDichotomyJson = parse(payload)?;
    let setting = req.setting.build(o.precision)?;
    let data = req.characters.build(&setting)?;
    let lambda = req.lambda.build(&setting)?;
    let input = DichotomyInput { setting, lambda, v: req.v, data };
    Ok(to_value(&local_hom_dimension(&input)?.to_json()))
}

fn sum(payload: &Value, o: &Options) -> Result<Value, Failure> {
    let req: InstanceJson = parse(payload)?;
    let setting = req.setting.build(o.precision)?;
    let data = req.characters.build(&setting)?;
    Ok(to_value(&sum_check(&setting, &data)?))
}

#[derive(Serialize)]
struct PlaceCheck {
    place: Place,
    target: i32,
    symbol: i32,
}

fn lambda_search(payload: &Value, o: &Options) -> Result<Value, Failure> {
    let req: FindLambdaJson = parse(payload)?;
    let d = req.d as i128;
    crate::global::quadratic::validate_d(d)?;
    let targets: Vec<Targets> = req.targets;
    let lambda = match find_lambda(&targets, d, o.search_bound) {
        Ok(l) => l,
        Err(e @ Error::ParityObstruction { component }) => {
            return Ok(json!({"error_kind": e.kind(), "component": component, "message": e.to_string()}));
        }
        Err(e) => return Err(e.into()),
    };
    let dd = Rational::from_integer(d);
    let mut checks = Vec::new();
    for (t, &l) in targets.iter().zip(&lambda) {
        let mut places: Vec<Place> = t.keys().copied().collect();
        places.extend(crate::global::reciprocity::relevant_places(l, dd));
        places.sort_unstable();
        places.dedup();
        let mut rows = Vec::new();
        for v in places {
            rows.push(PlaceCheck { place: v, target: *t.get(&v).unwrap_or(&1), symbol: rational_symbol(v, l, dd)? });
        }
        checks.push(rows);
    }
    Ok(json!({
        "d": req.d,
        "lambda": lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "checks": to_value(&checks),
        "product_formula": to_value(&product_formula_check(&lambda, d)?),
    }))
}

fn global(payload: &Value, o: &Options) -> Result<Value, Failure> {
    let req: DecisionInputJson = parse(payload)?;
    let input = req.build()?;
    let options = DecisionOptions { tolerance: o.tolerance, seed: o.seed, compute_l_values: o.enable_lvalue };
    Ok(to_value(&global_decision(&input, &options)?))
}

fn dispatch(command: Command, payload: &Value, o: &Options) -> Result<Value, Failure> {
    match command {
        Command::Classify => classify(payload, o),
        Command::Epsilon => epsilon(payload, o),
        Command::LocalDichotomy => local_dichotomy(payload, o),
        Command::SumCheck => sum(payload, o),
        Command::FindLambda => lambda_search(payload, o),
        Command::GlobalDecide => global(payload, o),
    }
}

pub fn run_value(command: Command, payload: &Value, options: &Options) -> Outcome {
    match dispatch(command, payload, options) {
        Ok(body) => Outcome { body, exit_code: 0 },
        Err(f) => f.outcome(),
    }
}

/// Runs one task given as JSON text.
pub fn run(command: Command, payload: &str, options: &Options) -> Outcome {
    match parse_str(payload) {
        Ok(v) => run_value(command, &v, options),
        Err(f) => f.outcome(),
    }
}

fn merged(base: &Options, over: &Option<Value>) -> Result<Options, Failure> {
    let Some(over) = over else { return Ok(base.clone()) };
    let mut v = to_value(base);
    let (Value::Object(m), Value::Object(o)) = (&mut v, over) else {
        return Err(Failure::Schema { pointer: "/options".into(), message: "options must be an object".into() });
    };
    for (k, x) in o {
        m.insert(k.clone(), x.clone());
    }
    parse(&v)
}

/// Runs a JSON array of tasks; results keep the input order and the exit
/// code is the largest of the tasks.
pub fn run_batch(text: &str, options: &Options) -> Outcome {
    let tasks: Vec<TaskRequest> = match parse_str(text).and_then(|v| parse(&v)) {
        Ok(t) => t,
        Err(f) => return f.outcome(),
    };
    let mut bodies = Vec::new();
    let mut code = 0;
    for task in &tasks {
        let out = match merged(options, &task.options) {
            Ok(o) => run_value(task.command, &task.payload, &o),
            Err(f) => f.outcome(),
        };
        code = code.max(out.exit_code);
        bodies.push(out.body);
    }
    Outcome { body: Value::Array(bodies), exit_code: code }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub label: String,
}

/// Writes `per_setting` sum-check payloads per (p, K, E) to `dir`, plus a
/// manifest; the output depends only on the arguments.
pub fn emit_corpus(dir: &Path, seed: u64, primes: &[i128], per_setting: usize) -> Result<Vec<ManifestEntry>, Error> {
    let instances = corpus::generate(primes, true, per_setting, seed)?;
    fs::create_dir_all(dir).map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?;
    let mut manifest = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let payload = InstanceJson {
            setting: schema::SettingJson::from_setting(&inst.setting)?,
            characters: schema::CharactersJson::from_data(&inst.data)?,
        };
        let file = format!("instance_{i:04}.json");
        let text = serde_json::to_string_pretty(&payload).expect("payload serializes") + "\n";
        fs::write(dir.join(&file), text).map_err(|e| Error::InvalidInput(format!("{file}: {e}")))?;
        manifest.push(ManifestEntry { file, label: inst.label.clone() });
    }
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(dir.join("manifest.json"), text).map_err(|e| Error::InvalidInput(format!("manifest: {e}")))?;
    Ok(manifest)
}

/// Default corpus primes.
pub const CORPUS_PRIMES: [i128; 3] = [3, 5, 7];
