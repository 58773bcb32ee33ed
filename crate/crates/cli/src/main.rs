//! Command line front end. Every subcommand prints deterministic,
//! byte-stable output: collections come out in canonical sorted order and
//! all arithmetic is exact.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tr0::bass::{
    bezout_witness, frobenius_invariance_check, linnell_admissible, sl2_unipotent_conjugacy,
    vanishing_certificate, VanishingVerdict,
};
use tr0::groupring::GRMatrix;
use tr0::groups::sl2::{fmt_rat, parse_rational};
use tr0::groups::{Group, GroupSpec};
use tr0::trzero::{exactness_check, TRElem, TRLimitElem};
use tr0::witt::{TruncationSet, WittVector};
use tr0::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tr0",
    version,
    about = "Exact calculator for conjugacy classes, group ring ranks, Witt vectors, and level operators"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Override the group enumeration cap (default 2000 elements)
    #[arg(long, global = true)]
    order_cap: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugacy class queries on a group spec file
    #[command(subcommand)]
    Group(GroupCmd),

    /// Hattori-Stallings rank of an idempotent matrix over a group ring
    Rank {
        /// Group spec file
        spec: PathBuf,
        /// Matrix file
        matrix: PathBuf,
    },

    /// Witt vector arithmetic over a truncation set
    #[command(subcommand)]
    Witt(WittCmd),

    /// Level operators and exactness reports
    #[command(subcommand)]
    Tr(TrCmd),

    /// Obstruction analyses: fixed points, admissible classes, witnesses
    #[command(subcommand)]
    Bass(BassCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// List conjugacy classes in canonical order
    Classes { spec: PathBuf },

    /// Print the class map induced by g -> g^s
    Powermap {
        spec: PathBuf,
        #[arg(long)]
        s: u64,
    },
}

#[derive(Subcommand)]
enum WittCmd {
    /// Componentwise sum in the ring
    Add {
        #[arg(long)]
        set: String,
        x: String,
        y: String,
    },

    /// Ring product
    Mul {
        #[arg(long)]
        set: String,
        x: String,
        y: String,
    },

    /// Additive inverse
    Neg {
        #[arg(long)]
        set: String,
        x: String,
    },

    /// Difference x - y
    Sub {
        #[arg(long)]
        set: String,
        x: String,
        y: String,
    },

    /// Ghost coordinates of a vector
    Ghost {
        #[arg(long)]
        set: String,
        x: String,
    },

    /// The element V_s(1) on the given set
    Vone {
        #[arg(long)]
        set: String,
        #[arg(long)]
        s: u64,
    },

    /// Frobenius F_s: result lives on the quotient set S/s
    Frobenius {
        #[arg(long)]
        set: String,
        #[arg(long)]
        s: u64,
        x: String,
    },

    /// Verschiebung V_s: x is read on S/s, result lives on S
    Verschiebung {
        #[arg(long)]
        set: String,
        #[arg(long)]
        s: u64,
        x: String,
    },

    /// Forget coordinates outside a subset
    Restrict {
        #[arg(long)]
        set: String,
        #[arg(long)]
        to: String,
        x: String,
    },
}

#[derive(Subcommand)]
enum TrCmd {
    /// Apply an operator to a level element
    Apply {
        /// Group spec file the element lives over
        #[arg(long)]
        group: PathBuf,
        #[arg(long, value_enum)]
        op: OpKind,
        #[arg(long)]
        s: u64,
        /// Element in display syntax, e.g. "level=6; 1*V2[[1,3,2]]"
        elem: String,
    },

    /// Verify kernel = image at level r for a prime p dividing r
    Exactness {
        spec: PathBuf,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OpKind {
    #[value(name = "R")]
    R,
    #[value(name = "F")]
    F,
    #[value(name = "V")]
    V,
}

#[derive(Subcommand)]
enum BassCmd {
    /// Admissible conjugacy classes of a finite group
    Linnell { spec: PathBuf },

    /// Invariance check and vanishing certificate for a limit element file
    Fixedpoint { elemfile: PathBuf },

    /// Conjugation witness between unipotent matrices with entries 1 and k
    Sl2 {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },

    /// Extended-Euclid certificate k*(2^m - 1) + l*(s^m - 1) = 1 with s = 2^m - 1
    Bezout {
        #[arg(long)]
        m: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(format: Format, text: String, json: Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("serialize")),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path, cap: Option<usize>) -> Result<Arc<Group>> {
    let spec = GroupSpec::parse(&read_file(path)?)?;
    match cap {
        Some(c) => Group::build_with_cap(&spec, c),
        None => Group::build(&spec),
    }
}

fn set_json(set: &TruncationSet) -> Value {
    Value::Array(set.elems().iter().map(|&n| json!(n)).collect())
}

fn run(cli: &Cli) -> Result<()> {
    let cap = cli.order_cap;
    match &cli.command {
        Cmd::Group(GroupCmd::Classes { spec }) => {
            let g = load_group(spec, cap)?;
            let mut text = format!(
                "order = {}\nexponent = {}\nclasses = {}\n",
                g.order(),
                g.exponent(),
                g.num_classes()
            );
            let mut rows = Vec::new();
            for c in g.conjugacy_classes() {
                text.push_str(&format!(
                    "class {}: size {} rep {}\n",
                    c.id.0,
                    c.size,
                    g.class_representative_encoding(c.id)
                ));
                rows.push(json!({
                    "id": c.id.0,
                    "size": c.size,
                    "representative": g.class_representative_encoding(c.id),
                }));
            }
            text.pop();
            emit(
                cli.format,
                text,
                json!({
                    "order": g.order(),
                    "exponent": g.exponent(),
                    "classes": rows,
                }),
            );
        }
        Cmd::Group(GroupCmd::Powermap { spec, s }) => {
            let g = load_group(spec, cap)?;
            let map = g.power_map(*s);
            let mut text = format!("s = {s}\n");
            for (from, to) in map.mapping().iter().enumerate() {
                text.push_str(&format!("class {from} -> class {}\n", to.0));
            }
            text.pop();
            let targets: Vec<u32> = map.mapping().iter().map(|c| c.0).collect();
            emit(cli.format, text, json!({ "s": s, "map": targets }));
        }
        Cmd::Rank { spec, matrix } => {
            let g = load_group(spec, cap)?;
            let m = GRMatrix::parse(&read_file(matrix)?, g.clone())?;
            let rank = m.hattori_stallings_rank()?;
            let text = format!("n = {}\nrank = {}", m.n(), rank.display());
            let entries: Vec<Value> = rank
                .support()
                .map(|(c, v)| {
                    json!({
                        "class": g.class_representative_encoding(c),
                        "coeff": v.to_string(),
                    })
                })
                .collect();
            emit(cli.format, text, json!({ "n": m.n(), "rank": entries }));
        }
        Cmd::Witt(cmd) => run_witt(cli, cmd)?,
        Cmd::Tr(TrCmd::Apply { group, op, s, elem }) => {
            let g = load_group(group, cap)?;
            let x = TRElem::parse(elem, &g)?;
            let out = match op {
                OpKind::R => x.restriction(*s)?,
                OpKind::F => x.frobenius(*s)?,
                OpKind::V => x.verschiebung(*s)?,
            };
            emit(
                cli.format,
                out.display(),
                json!({ "level": out.level(), "element": out.display() }),
            );
        }
        Cmd::Tr(TrCmd::Exactness { spec, r, p }) => {
            let g = load_group(spec, cap)?;
            let rep = exactness_check(&g, *r, *p)?;
            let keys = |ks: &[(u64, tr0::groups::ClassId)]| -> Vec<Value> {
                ks.iter()
                    .map(|&(t, c)| {
                        json!(format!("V{}[{}]", t, g.class_representative_encoding(c)))
                    })
                    .collect()
            };
            let verdict = match &rep.failure {
                None => "PASS".to_string(),
                Some(w) => format!("FAIL ({w})"),
            };
            emit(
                cli.format,
                rep.display(&g),
                json!({
                    "r": rep.r,
                    "p": rep.p,
                    "u": rep.u,
                    "d": rep.d,
                    "basis": rep.basis_size,
                    "kernel": keys(&rep.kernel_keys),
                    "image": keys(&rep.image_keys),
                    "surjective": rep.surjective,
                    "kernel_matches_image": rep.kernel_matches_image,
                    "injective": rep.injective,
                    "verdict": verdict,
                }),
            );
        }
        Cmd::Bass(BassCmd::Linnell { spec }) => {
            let g = load_group(spec, cap)?;
            let rep = linnell_admissible(&g);
            let verdicts: Vec<Value> = rep
                .verdicts
                .iter()
                .map(|v| {
                    json!({
                        "class": g.class_representative_encoding(v.class),
                        "admissible": v.admissible,
                        "witness_m": v.witness_m,
                        "refuting_s": v.refuting_s,
                        "refutation_absolute": v.refutation_absolute,
                    })
                })
                .collect();
            let admissible: Vec<Value> = rep
                .admissible_classes()
                .iter()
                .map(|&c| json!(g.class_representative_encoding(c)))
                .collect();
            emit(
                cli.format,
                rep.display(&g),
                json!({
                    "exponent": rep.exponent,
                    "m_bound": rep.m_bound,
                    "verdicts": verdicts,
                    "admissible": admissible,
                }),
            );
        }
        Cmd::Bass(BassCmd::Fixedpoint { elemfile }) => run_fixedpoint(cli, elemfile)?,
        Cmd::Bass(BassCmd::Sl2 { k }) => {
            let k = parse_rational(k)?;
            let witness = sl2_unipotent_conjugacy(&k)?;
            let text = match &witness {
                Some(h) => format!("k = {}\nwitness: {}", fmt_rat(&k), h.encode()),
                None => format!("k = {}\nwitness: none", fmt_rat(&k)),
            };
            emit(
                cli.format,
                text,
                json!({
                    "k": fmt_rat(&k),
                    "witness": witness.as_ref().map(|h| h.encode()),
                }),
            );
        }
        Cmd::Bass(BassCmd::Bezout { m }) => {
            if *m == 0 {
                return Err(Error::ZeroArgument);
            }
            let w = bezout_witness(*m);
            emit(
                cli.format,
                w.to_string(),
                json!({
                    "m": w.m,
                    "s": w.s.to_string(),
                    "k": w.k.to_string(),
                    "l": w.l.to_string(),
                    "verified": w.verify(),
                }),
            );
        }
    }
    Ok(())
}

fn witt_output(format: Format, set: &TruncationSet, label: &str, body: String) {
    let text = format!("set: {}\n{label}: {body}", set.display());
    emit(format, text, json!({ "set": set_json(set), label: body }));
}

fn run_witt(cli: &Cli, cmd: &WittCmd) -> Result<()> {
    match cmd {
        WittCmd::Add { set, x, y } | WittCmd::Mul { set, x, y } | WittCmd::Sub { set, x, y } => {
            let s = TruncationSet::parse(set)?;
            let a = WittVector::parse(x, &s)?;
            let b = WittVector::parse(y, &s)?;
            let out = match cmd {
                WittCmd::Add { .. } => a.add(&b)?,
                WittCmd::Mul { .. } => a.mul(&b)?,
                _ => a.sub(&b)?,
            };
            witt_output(cli.format, &s, "vector", out.display());
        }
        WittCmd::Neg { set, x } => {
            let s = TruncationSet::parse(set)?;
            let out = WittVector::parse(x, &s)?.neg();
            witt_output(cli.format, &s, "vector", out.display());
        }
        WittCmd::Ghost { set, x } => {
            let s = TruncationSet::parse(set)?;
            let out = WittVector::parse(x, &s)?.ghost();
            witt_output(cli.format, &s, "ghost", out.display());
        }
        WittCmd::Vone { set, s } => {
            let t = TruncationSet::parse(set)?;
            let out = WittVector::v_one(*s, &t)?;
            witt_output(cli.format, &t, "vector", out.display());
        }
        WittCmd::Frobenius { set, s, x } => {
            let t = TruncationSet::parse(set)?;
            let out = WittVector::parse(x, &t)?.frobenius(*s)?;
            witt_output(cli.format, out.set(), "vector", out.display());
        }
        WittCmd::Verschiebung { set, s, x } => {
            let target = TruncationSet::parse(set)?;
            let source = target.quotient(*s)?;
            let out = WittVector::parse(x, &source)?.verschiebung(*s, &target)?;
            witt_output(cli.format, &target, "vector", out.display());
        }
        WittCmd::Restrict { set, to, x } => {
            let s = TruncationSet::parse(set)?;
            let t = TruncationSet::parse(to)?;
            let out = WittVector::parse(x, &s)?.restrict(&t)?;
            witt_output(cli.format, &t, "vector", out.display());
        }
    }
    Ok(())
}

/// Limit element file: `group=<path>` (resolved relative to the file),
/// `set=<truncation>`, `declared=true|false`, `series=<terms or 0>`.
fn parse_elemfile(
    path: &Path,
    cap: Option<usize>,
) -> Result<(String, Arc<Group>, TRLimitElem)> {
    let text = read_file(path)?;
    let mut group_path: Option<String> = None;
    let mut set: Option<TruncationSet> = None;
    let mut declared: Option<bool> = None;
    let mut series: Option<String> = None;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {line:?}")))?;
        match key.trim() {
            "group" => group_path = Some(value.trim().to_string()),
            "set" => set = Some(TruncationSet::parse(value.trim())?),
            "declared" => match value.trim() {
                "true" => declared = Some(true),
                "false" => declared = Some(false),
                other => {
                    return Err(Error::Parse(format!("declared must be true or false, got {other:?}")));
                }
            },
            "series" => series = Some(value.trim().to_string()),
            other => return Err(Error::Parse(format!("unknown key {other:?}"))),
        }
    }
    let group_path = group_path.ok_or_else(|| Error::Parse("missing group= line".into()))?;
    let set = set.ok_or_else(|| Error::Parse("missing set= line".into()))?;
    let declared = declared.ok_or_else(|| Error::Parse("missing declared= line".into()))?;
    let series = series.ok_or_else(|| Error::Parse("missing series= line".into()))?;
    let resolved = match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir.join(&group_path),
        _ => PathBuf::from(&group_path),
    };
    let group = load_group(&resolved, cap)?;
    let elem = TRLimitElem::parse_series(&series, &group, &set, declared)?;
    Ok((group_path, group, elem))
}

fn run_fixedpoint(cli: &Cli, elemfile: &Path) -> Result<()> {
    let (group_path, group, elem) = parse_elemfile(elemfile, cli.order_cap)?;
    let mut checks = Vec::new();
    for &s in elem.set().elems() {
        if s == 1 {
            continue;
        }
        checks.push((s, frobenius_invariance_check(&elem, s)?));
    }
    let invariant = checks.iter().all(|&(_, ok)| ok);
    let cert = vanishing_certificate(&elem)?;

    let mut text = format!(
        "group: {group_path}\nset: {}\ndeclared: {}\nseries: {}\n",
        elem.set().display(),
        elem.full_support_declared(),
        elem.series_display()
    );
    for &(s, ok) in &checks {
        text.push_str(&format!("invariant s={s}: {ok}\n"));
    }
    text.push_str(&format!("invariant: {invariant}\n"));
    text.push_str(&cert.display(&group));

    let chains: Vec<Value> = cert
        .chains
        .iter()
        .map(|ch| {
            let steps: Vec<Value> = ch
                .steps
                .iter()
                .map(|st| {
                    json!({
                        "u": st.u,
                        "lhs": st.lhs.to_string(),
                        "rhs": st.rhs.to_string(),
                    })
                })
                .collect();
            json!({
                "t": ch.t,
                "class": group.class_representative_encoding(ch.class),
                "p": ch.p,
                "steps": steps,
                "closed": ch.closed,
            })
        })
        .collect();
    let verdict = match &cert.verdict {
        VanishingVerdict::AllHigherVanish => json!("AllHigherVanish"),
        VanishingVerdict::Counterexample((t, c)) => json!({
            "counterexample": format!("V{}[{}]", t, group.class_representative_encoding(*c)),
        }),
    };
    let inv_json: Vec<Value> = checks
        .iter()
        .map(|&(s, ok)| json!({ "s": s, "invariant": ok }))
        .collect();
    emit(
        cli.format,
        text,
        json!({
            "group": group_path,
            "set": set_json(elem.set()),
            "declared": elem.full_support_declared(),
            "series": elem.series_display(),
            "invariance": inv_json,
            "invariant": invariant,
            "certificate": { "chains": chains, "verdict": verdict },
        }),
    );
    Ok(())
}
