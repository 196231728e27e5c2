//! Driver for the `mt` command: argument types, group loading, report
//! assembly and the content-addressed report cache.

use clap::{Args, Parser, Subcommand};
use modtower::builtin;
use modtower::frattini::{dihedral_level, verify_frattini, verify_order_lifting, FrattiniLevel};
use modtower::gcomplete::{
    is_gcomplete, is_hm_p_gcomplete, is_p_gcomplete, CompletenessVerdict, HmVerdict,
};
use modtower::hurwitz::{
    check_goup, component_report, component_reports, genus_lower_bound, level_compare,
    sh_incidence, Actions, ComponentReport, GoingUpVerdict, LevelComparison, LevelView,
};
use modtower::induction::first_level;
use modtower::loewy::loewy_layers;
use modtower::nielsen::{lift_nielsen_class, project_classes, NielsenClass, NielsenSpec};
use modtower::presentation::{cayley_presentation, Presentation};
use modtower::schur::{enumerate_schur_quotients, schur_reports, SchurReport};
use modtower::{ErrorFamily, FiniteGroup};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub const CACHE_VERSION: u32 = 1;
const CACHE_MAGIC: &[u8; 4] = b"MTRC";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] modtower::Error),
    #[error("corrupt cache entry {0}")]
    CorruptCache(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.family() {
                ErrorFamily::Budget => 2,
                ErrorFamily::EmptyNielsen => 3,
                ErrorFamily::Invariant => 4,
                _ => 1,
            },
            CliError::CorruptCache(_) => 5,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mt",
    about = "Frattini levels, Nielsen classes and Hurwitz space components"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Directory for report files; reports go to stdout when absent.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Report cache directory.
    #[arg(long, global = true, env = "MT_CACHE")]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest group order built, and the cap on Nielsen search nodes.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    pub budget_elements: usize,
    /// Coset table limit when a group is given by a presentation.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub budget_cosets: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Components of the reduced Hurwitz space at level 0 or 1.
    Level(LevelArgs),
    /// Four involutions in `D_{p^{k+1}}`.
    Dihedral {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
    },
    /// Schur quotients of the group (k = 0) or of its first level (k = 1).
    Schur {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Completeness of the p' classes, or of an explicit class list.
    Gcomplete {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        classes: Option<Vec<String>>,
    },
    /// Build the first level and check the Frattini and order-lifting properties.
    FrattiniVerify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Clone, Args)]
pub struct LevelArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, value_delimiter = ',')]
    pub classes: Vec<String>,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
}

/// A group with an optional presentation on its generators.
pub struct LoadedGroup {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub presentation: Option<Presentation>,
}

impl LoadedGroup {
    pub fn presentation(&self) -> Presentation {
        self.presentation
            .clone()
            .unwrap_or_else(|| cayley_presentation(&self.group))
    }
}

/// A builtin name (`A4`, `A5`, `K4`, `D<n>`, `Z<n>`) or a file holding either
/// permutations, one generator per line, or a presentation starting `gens:`.
pub fn load_group(
    source: &str,
    budget_elements: usize,
    budget_cosets: usize,
) -> Result<LoadedGroup> {
    if let Ok(named) = builtin::by_name(source) {
        let group = FiniteGroup::from_perms(&named.perms, budget_elements)?;
        return Ok(LoadedGroup {
            name: named.name,
            group: Arc::new(group),
            presentation: named.presentation,
        });
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "{source:?} is neither a builtin group nor a file"
        )));
    }
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if text.trim_start().starts_with("gens:") {
        let pres = Presentation::parse(&text)?;
        let group = pres.to_group(budget_cosets)?;
        if group.order() > budget_elements {
            return Err(modtower::Error::OrderExceeded(budget_elements).into());
        }
        return Ok(LoadedGroup {
            name,
            group: Arc::new(group),
            presentation: Some(pres),
        });
    }
    let perms = modtower::group::parse_perm_lines(&text)?;
    let group = FiniteGroup::from_perms(&perms, budget_elements)?;
    Ok(LoadedGroup {
        name,
        group: Arc::new(group),
        presentation: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassInfo {
    pub label: String,
    pub order: u32,
    pub size: usize,
    pub representative: String,
}

fn element_text(g: &FiniteGroup, a: u32) -> String {
    g.element_perm(a)
        .map(|p| p.to_string())
        .unwrap_or_else(|| format!("#{a}"))
}

pub fn class_table(g: &FiniteGroup) -> Vec<ClassInfo> {
    g.class_labels()
        .into_iter()
        .zip(g.conjugacy_classes())
        .map(|(label, c)| ClassInfo {
            label,
            order: c.element_order,
            size: c.size(),
            representative: element_text(g, c.representative),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitComparison {
    pub upper_orbit: usize,
    pub lower_orbit: usize,
    pub comparison: LevelComparison,
    pub bound: String,
    pub verdict: GoingUpVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub group: String,
    pub order: usize,
    pub p: u32,
    pub k: u32,
    pub classes: Vec<String>,
    pub class_table: Vec<ClassInfo>,
    pub reduced_classes: usize,
    pub components: Vec<ComponentReport>,
    pub comparisons: Vec<OrbitComparison>,
}

/// Per upper orbit: the comparison with the orbit below and the genus bound.
pub fn compare_levels(
    level: &FrattiniLevel,
    lower: &NielsenClass,
    upper: &NielsenClass,
) -> Result<Vec<OrbitComparison>> {
    let proj = project_classes(level, lower, upper)?;
    let a0 = Actions::compute(lower)?;
    let a1 = Actions::compute(upper)?;
    let lower_orbits = lower.orbits()?;
    let mut out = Vec::new();
    for (ui, o) in upper.orbits()?.iter().enumerate() {
        let li = lower_orbits
            .iter()
            .position(|lo| lo.binary_search(&proj[o[0] as usize]).is_ok())
            .ok_or_else(|| {
                modtower::Error::MismatchedLevels("an upper orbit lies over no lower orbit".into())
            })?;
        let below = &lower_orbits[li];
        let cmp = level_compare(
            level,
            &LevelView {
                ni: lower,
                actions: &a0,
                orbit: below,
            },
            &LevelView {
                ni: upper,
                actions: &a1,
                orbit: o,
            },
            &proj,
        )?;
        let lower_genus = component_report(lower, &a0, below)?.genus;
        let genus = component_report(upper, &a1, o)?.genus;
        let bound = genus_lower_bound(cmp.t_prime, cmp.degree, &cmp.u, level.p);
        let verdict = check_goup(bound, genus, lower_genus, &cmp);
        out.push(OrbitComparison {
            upper_orbit: ui,
            lower_orbit: li,
            comparison: cmp,
            bound: bound.to_string(),
            verdict,
        });
    }
    Ok(out)
}

/// Named report files.
pub type Artifacts = Vec<(String, String)>;

fn level_artifacts(
    name: &str,
    lower: &NielsenClass,
    upper: Option<(&FrattiniLevel, &NielsenClass)>,
    p: u32,
    k: u32,
    classes: &[String],
) -> Result<Artifacts> {
    let (ni, comparisons) = match upper {
        Some((level, up)) => (up, compare_levels(level, lower, up)?),
        None => (lower, Vec::new()),
    };
    if ni.is_empty() {
        return Err(modtower::Error::EmptyNielsenClass.into());
    }
    let g = ni.group();
    let actions = Actions::compute(ni)?;
    let report = LevelReport {
        group: name.to_string(),
        order: g.order(),
        p,
        k,
        classes: classes.to_vec(),
        class_table: class_table(g),
        reduced_classes: ni.len(),
        components: component_reports(ni)?,
        comparisons,
    };
    let csv = sh_incidence(ni, &actions.gamma1, &actions.gamma_inf).to_csv();
    Ok(vec![
        (
            format!("level_k{k}.json"),
            serde_json::to_string_pretty(&report)? + "\n",
        ),
        (format!("sh_incidence_k{k}.csv"), csv),
    ])
}

fn run_level(cli: &Cli, a: &LevelArgs) -> Result<Artifacts> {
    let loaded = load_group(&a.group, cli.budget_elements, cli.budget_cosets)?;
    let labels: Vec<&str> = a.classes.iter().map(String::as_str).collect();
    match a.k {
        0 => {
            let spec = NielsenSpec::from_labels(loaded.group.clone(), &labels, a.p)?;
            let ni = NielsenClass::enumerate(spec, cli.budget_elements)?;
            level_artifacts(&loaded.name, &ni, None, a.p, 0, &a.classes)
        }
        1 => {
            let level = first_level(
                loaded.group.clone(),
                &loaded.presentation(),
                a.p,
                cli.budget_elements,
            )?;
            let spec = NielsenSpec::from_labels(level.base.clone(), &labels, a.p)?;
            let lower = NielsenClass::enumerate(spec, cli.budget_elements)?;
            if lower.is_empty() {
                return Err(modtower::Error::EmptyNielsenClass.into());
            }
            let upper = lift_nielsen_class(&level, &lower)?;
            level_artifacts(
                &loaded.name,
                &lower,
                Some((&level, &upper)),
                a.p,
                1,
                &a.classes,
            )
        }
        k => Err(CliError::Usage(format!(
            "level {k} is out of reach here; use the dihedral command for dihedral towers"
        ))),
    }
}

fn run_dihedral(cli: &Cli, p: u32, k: u32) -> Result<Artifacts> {
    let level = dihedral_level(p, k)?;
    let classes = vec!["2A".to_string(); 4];
    let name = format!("D{}", level.total.order() / 2);
    if k == 0 {
        let spec = NielsenSpec::from_labels(level.total.clone(), &["2A"; 4], p)?;
        let ni = NielsenClass::enumerate(spec, cli.budget_elements)?;
        return level_artifacts(&name, &ni, None, p, 0, &classes);
    }
    let spec = NielsenSpec::from_labels(level.base.clone(), &["2A"; 4], p)?;
    let lower = NielsenClass::enumerate(spec, cli.budget_elements)?;
    let upper = lift_nielsen_class(&level, &lower)?;
    level_artifacts(&name, &lower, Some((&level, &upper)), p, k, &classes)
}

#[derive(Debug, Clone, Serialize)]
pub struct SchurCliReport {
    pub group: String,
    pub p: u32,
    pub k: u32,
    pub level_order: usize,
    pub quotient_orders: Vec<usize>,
    pub reports: Vec<SchurReport>,
}

fn run_schur(cli: &Cli, source: &str, p: u32, k: u32) -> Result<Artifacts> {
    let loaded = load_group(source, cli.budget_elements, cli.budget_cosets)?;
    let report = match k {
        0 => {
            let qs = enumerate_schur_quotients(loaded.group.clone(), &loaded.presentation(), p)?;
            SchurCliReport {
                group: loaded.name.clone(),
                p,
                k,
                level_order: loaded.group.order(),
                quotient_orders: qs.iter().map(|q| q.total.order()).collect(),
                reports: Vec::new(),
            }
        }
        1 => {
            let level = first_level(
                loaded.group.clone(),
                &loaded.presentation(),
                p,
                cli.budget_elements,
            )?;
            let top_pres = level
                .presentation
                .clone()
                .unwrap_or_else(|| cayley_presentation(&level.total));
            let qs = enumerate_schur_quotients(level.total.clone(), &top_pres, p)?;
            let base_pres = if Arc::ptr_eq(&level.base, &loaded.group) {
                loaded.presentation()
            } else {
                cayley_presentation(&level.base)
            };
            let earlier = enumerate_schur_quotients(level.base.clone(), &base_pres, p)?;
            SchurCliReport {
                group: loaded.name.clone(),
                p,
                k,
                level_order: level.total.order(),
                quotient_orders: qs.iter().map(|q| q.total.order()).collect(),
                reports: schur_reports(&level, &qs, &earlier)?,
            }
        }
        k => {
            return Err(CliError::Usage(format!(
                "Schur quotients at level {k} are out of reach here"
            )))
        }
    };
    Ok(vec![(
        format!("schur_k{k}.json"),
        serde_json::to_string_pretty(&report)? + "\n",
    )])
}

#[derive(Debug, Clone, Serialize)]
pub struct GcompleteReport {
    pub group: String,
    pub p: Option<u32>,
    pub classes: Option<Vec<String>>,
    pub class_table: Vec<ClassInfo>,
    pub verdict: CompletenessVerdict,
    pub witness_generators: Vec<String>,
    pub hm: Option<HmVerdict>,
}

fn run_gcomplete(
    cli: &Cli,
    source: &str,
    p: Option<u32>,
    classes: &Option<Vec<String>>,
) -> Result<Artifacts> {
    let loaded = load_group(source, cli.budget_elements, cli.budget_cosets)?;
    let g = &loaded.group;
    let (verdict, hm) = match (p, classes) {
        (Some(p), None) => (is_p_gcomplete(g, p, cli.budget_elements)?, None),
        (_, Some(labels)) => {
            let idx = labels
                .iter()
                .map(|l| {
                    g.class_by_label(l)
                        .ok_or_else(|| CliError::Usage(format!("no class labeled {l}")))
                })
                .collect::<Result<Vec<usize>>>()?;
            let verdict = is_gcomplete(g, &idx, cli.budget_elements)?;
            let hm = match is_hm_p_gcomplete(g, &idx, p, cli.budget_elements) {
                Ok(v) => Some(v),
                Err(modtower::Error::NoInversePairs) => None,
                Err(e) => return Err(e.into()),
            };
            (verdict, hm)
        }
        (None, None) => return Err(CliError::Usage("give --p or --classes".into())),
    };
    let witness_generators = verdict
        .witness
        .as_ref()
        .map(|w| w.generators.iter().map(|&x| element_text(g, x)).collect())
        .unwrap_or_default();
    let report = GcompleteReport {
        group: loaded.name.clone(),
        p,
        classes: classes.clone(),
        class_table: class_table(g),
        verdict,
        witness_generators,
        hm,
    };
    Ok(vec![(
        "gcomplete.json".into(),
        serde_json::to_string_pretty(&report)? + "\n",
    )])
}

#[derive(Debug, Clone, Serialize)]
pub struct FrattiniReport {
    pub group: String,
    pub p: u32,
    pub base_order: usize,
    pub total_order: usize,
    pub kernel_dim: usize,
    pub loewy: String,
    pub loewy_dims: Vec<usize>,
    pub frattini: bool,
    pub order_checks: usize,
    pub order_violations: Vec<String>,
}

fn run_frattini(cli: &Cli, source: &str, p: u32) -> Result<Artifacts> {
    let loaded = load_group(source, cli.budget_elements, cli.budget_cosets)?;
    let level = first_level(
        loaded.group.clone(),
        &loaded.presentation(),
        p,
        cli.budget_elements,
    )?;
    let loewy = loewy_layers(&level.kernel_module)?;
    let lifting = verify_order_lifting(&level);
    let report = FrattiniReport {
        group: loaded.name.clone(),
        p,
        base_order: level.base.order(),
        total_order: level.total.order(),
        kernel_dim: level.kernel_dim(),
        loewy: loewy.display(),
        loewy_dims: loewy.layer_dims(),
        frattini: verify_frattini(&level),
        order_checks: lifting.checked,
        order_violations: lifting.violations,
    };
    if !report.frattini || !report.order_violations.is_empty() {
        return Err(modtower::Error::InvariantViolation(format!(
            "{} at {p} fails the Frattini checks",
            loaded.name
        ))
        .into());
    }
    Ok(vec![(
        "frattini.json".into(),
        serde_json::to_string_pretty(&report)? + "\n",
    )])
}

/// The inputs that determine a command's output, as a cache key.
pub fn cache_key(cli: &Cli) -> Result<String> {
    let mut source = format!("{:?}", cli.command);
    for group in group_files(&cli.command) {
        if builtin::by_name(group).is_err() && Path::new(group).exists() {
            source.push('\n');
            source.push_str(&std::fs::read_to_string(group)?);
        }
    }
    source.push_str(&format!(
        "\nbudgets {} {}",
        cli.budget_elements, cli.budget_cosets
    ));
    let digest = Sha256::digest(format!("mt v{CACHE_VERSION}\n{source}").as_bytes());
    Ok(hex::encode(digest))
}

fn group_files(c: &Command) -> Vec<&str> {
    match c {
        Command::Level(a) => vec![a.group.as_str()],
        Command::Dihedral { .. } => vec![],
        Command::Schur { group, .. }
        | Command::Gcomplete { group, .. }
        | Command::FrattiniVerify { group, .. } => {
            vec![group.as_str()]
        }
    }
}

/// Cache entry layout: magic, little-endian version, SHA-256 of the payload,
/// then the payload (the artifacts as JSON).
pub fn encode_entry(artifacts: &Artifacts) -> Result<Vec<u8>> {
    let payload = serde_json::to_vec(artifacts)?;
    let mut out = Vec::with_capacity(payload.len() + 40);
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&Sha256::digest(&payload));
    out.extend_from_slice(&payload);
    Ok(out)
}

pub fn decode_entry(bytes: &[u8], key: &str) -> Result<Artifacts> {
    let corrupt = || CliError::CorruptCache(key.to_string());
    if bytes.len() < 40 || &bytes[..4] != CACHE_MAGIC {
        return Err(corrupt());
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("four bytes"));
    if version != CACHE_VERSION || Sha256::digest(&bytes[40..]).as_slice() != &bytes[8..40] {
        return Err(corrupt());
    }
    serde_json::from_slice(&bytes[40..]).map_err(|_| corrupt())
}

pub fn compute(cli: &Cli) -> Result<Artifacts> {
    match &cli.command {
        Command::Level(a) => run_level(cli, a),
        Command::Dihedral { p, k } => run_dihedral(cli, *p, *k),
        Command::Schur { group, p, k } => run_schur(cli, group, *p, *k),
        Command::Gcomplete { group, p, classes } => run_gcomplete(cli, group, *p, classes),
        Command::FrattiniVerify { group, p } => run_frattini(cli, group, *p),
    }
}

/// Compute, or read from the cache when one is configured.
pub fn run(cli: &Cli) -> Result<Artifacts> {
    let Some(dir) = &cli.cache else {
        return compute(cli);
    };
    let key = cache_key(cli)?;
    let path = dir.join(format!("{key}.mtc"));
    if path.exists() {
        return decode_entry(&std::fs::read(&path)?, &key);
    }
    let artifacts = compute(cli)?;
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{key}.tmp{}", std::process::id()));
    std::fs::write(&tmp, encode_entry(&artifacts)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(artifacts)
}

/// Write artifacts under `dir`, or print them to stdout.
pub fn emit(artifacts: &Artifacts, dir: Option<&Path>) -> Result<()> {
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, body) in artifacts {
                std::fs::write(dir.join(name), body)?;
            }
        }
        None => {
            for (_, body) in artifacts.iter().filter(|(n, _)| n.ends_with(".json")) {
                print!("{body}");
            }
        }
    }
    Ok(())
}
