//! Command implementations. Every command renders its output to a string so
//! that it can be cached and replayed byte for byte.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use khtail_core::engine::{homology, khovanov, scan, HomologyTable, Method, ScanOptions};
use khtail_core::lab::suite::{run_suite, suite_id, SUITES};
use khtail_core::lab::tails::{badequate_tail, unknot_tail, unlink_tail_experimental, TailOptions};
use khtail_core::lab::{colored_block, default_window, twist_window, untwisted, Cell, Certificate, LabConfig, Outcome, Report, Verdict};
use khtail_core::tangle::{cable, ColoredLink, Handedness, LinkDiagram, Placement, SlicedTangle};
use khtail_core::tl::{colored_jones, spin_network_eval};
use khtail_core::{Error, VERSION};

use crate::error::CliError;
use crate::input::{load_diagram, parse_spin, Loaded};
use crate::manifest::{EntryRecord, RunManifest};
use crate::store::{CacheKey, Lookup, Store};
use crate::{Cli, Command, Format, Global};

/// Rendered output with the outcome it reports, if any.
struct Produced {
    output: String,
    verdict: Option<Outcome>,
}

fn outcome_name(o: Outcome) -> String {
    serde_json::to_value(o).unwrap().as_str().unwrap_or_default().to_string()
}

fn exit_code(verdict: Option<&str>) -> u8 {
    match verdict {
        Some("fail") => 1,
        Some("unverified") => 2,
        _ => 0,
    }
}

/// `$KHTAIL_CACHE_DIR` (handled by clap), then `$XDG_CACHE_HOME/khtail`,
/// then `~/.cache/khtail`, then `./.khtail-cache`.
fn default_cache_dir() -> PathBuf {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME").filter(|x| !x.is_empty()) {
        return PathBuf::from(x).join("khtail");
    }
    if let Some(h) = std::env::var_os("HOME").filter(|x| !x.is_empty()) {
        return PathBuf::from(h).join(".cache").join("khtail");
    }
    PathBuf::from(".khtail-cache")
}

struct Ctx<'a> {
    global: &'a Global,
    store: Option<Store>,
    cfg: LabConfig,
    manifest: RunManifest,
}

impl Ctx<'_> {
    fn format(&self, default: Format) -> Format {
        self.global.format.unwrap_or(default)
    }

    /// Look `command` up in the cache, or compute and store it. Parameters
    /// shared by every command are folded into the key here.
    fn cached(
        &mut self,
        command: &str,
        diagram: Option<String>,
        mut params: Value,
        compute: impl FnOnce(&LabConfig) -> Result<Produced, CliError>,
    ) -> Result<(String, Option<String>), CliError> {
        let g = self.global;
        params["ring"] = json!(g.ring.name());
        params["max_objects"] = json!(g.max_objects);
        params["k_limit"] = json!(g.k_limit);
        self.manifest.parameters = params.clone();
        let key = CacheKey::new(command, diagram, params);
        let digest = key.digest();
        if let Some(store) = &self.store {
            match store.get(&key) {
                Lookup::Hit { output, verdict } => {
                    self.manifest.cache.hits += 1;
                    self.manifest.entries.push(EntryRecord { digest, source: "cache" });
                    return Ok((output, verdict));
                }
                Lookup::Miss => self.manifest.cache.misses += 1,
                Lookup::Corrupt => self.manifest.cache.corrupt += 1,
            }
        }
        let p = compute(&self.cfg)?;
        let verdict = p.verdict.map(outcome_name);
        if let Some(store) = &self.store {
            store.put(&key, &p.output, verdict.as_deref()).map_err(|e| CliError::Io(format!("cache: {e}")))?;
        }
        self.manifest.entries.push(EntryRecord { digest, source: "computed" });
        Ok((p.output, verdict))
    }
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let start = Instant::now();
    let g = &cli.global;
    let store = if g.no_cache {
        None
    } else {
        let dir = g.cache_dir.clone().unwrap_or_else(default_cache_dir);
        Some(Store::open(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?)
    };
    let cfg = LabConfig { ring: g.ring, max_objects: g.max_objects, k_limit: g.k_limit, ..LabConfig::default() };
    let mut ctx = Ctx {
        global: g,
        store,
        cfg,
        manifest: RunManifest { engine: VERSION.into(), ..RunManifest::default() },
    };
    let (command, result) = dispatch(&mut ctx, &cli.command);
    ctx.manifest.command = command.into();
    ctx.manifest.seconds = start.elapsed().as_secs_f64();
    let (output, verdict) = result?;
    print!("{output}");
    if let Some(v) = &verdict {
        ctx.manifest.verdicts.push(json!(v));
    }
    if let Some(path) = &g.manifest {
        ctx.manifest.write(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(exit_code(verdict.as_deref()))
}

type Rendered = Result<(String, Option<String>), CliError>;

fn dispatch(ctx: &mut Ctx, command: &Command) -> (&'static str, Rendered) {
    match command {
        Command::Compute { diagram, q, method } => ("compute", compute(ctx, diagram, q.as_deref(), (*method).into())),
        Command::Colored { diagram, colors, degree, handedness } => {
            ("colored", colored(ctx, diagram, colors, degree.as_deref(), *handedness))
        }
        Command::Sequence { diagram, colors, j, handedness, k_max } => {
            ("sequence", sequence(ctx, diagram, colors, j.as_deref(), *handedness, *k_max))
        }
        Command::TailUnknot { j, n_max, full_twist_upto, unlink: None } => {
            ("tail-unknot", tail_unknot(ctx, *j, *n_max, *full_twist_upto))
        }
        Command::TailUnknot { j, n_max, unlink: Some(c), .. } => ("tail-unknot", tail_unlink(ctx, *c, *j, *n_max)),
        Command::TailBadequate { diagram, j, n_min, n_max } => {
            ("tail-badequate", tail_badequate(ctx, diagram, *j, *n_min, *n_max))
        }
        Command::Spin { network } => ("spin", spin(ctx, network)),
        Command::Jones { diagram, color } => ("jones", jones(ctx, diagram, color)),
        Command::Verify { suite } => ("verify", verify(ctx, suite)),
    }
}

fn render_table(t: &HomologyTable, fmt: Format) -> String {
    match fmt {
        Format::Json => serde_json::to_string_pretty(t).expect("tables serialize") + "\n",
        Format::Csv => t.to_csv(),
        Format::Md | Format::Text => t.to_markdown(),
    }
}

fn render_report(r: &Report, fmt: Format) -> Produced {
    let output = match fmt {
        Format::Json => r.to_json() + "\n",
        Format::Csv => r.to_csv(),
        Format::Md | Format::Text => r.to_markdown(),
    };
    Produced { output, verdict: Some(r.verdict.outcome) }
}

fn compute(ctx: &mut Ctx, arg: &str, q: Option<&[i64]>, method: Method) -> Rendered {
    let Loaded { diagram, canonical } = load_diagram(arg)?;
    let fmt = ctx.format(Format::Json);
    let params = json!({"q": q, "method": format!("{method:?}").to_lowercase(), "format": fmt});
    ctx.cached("compute", Some(canonical), params, |cfg| {
        let table = match method {
            Method::Raw => khovanov(&diagram, cfg.ring, Method::Raw, q)?,
            Method::Scan => {
                let window = q.map(|qs| (*qs.iter().min().unwrap_or(&0), *qs.iter().max().unwrap_or(&0)));
                let opts = ScanOptions { q_window: window, max_objects: cfg.max_objects, ..Default::default() };
                let mut c = scan(&diagram, cfg.ring, &opts)?.complex;
                if let Some(qs) = q {
                    c.blocks.retain(|j, _| qs.contains(j));
                }
                homology(&c, cfg.ring)?
            }
        };
        Ok(Produced { output: render_table(&table.normalized(), fmt), verdict: None })
    })
}

fn colors_for(d: &LinkDiagram, colors: &[usize]) -> Result<Vec<usize>, CliError> {
    let c = d.component_count();
    match colors.len() {
        1 => Ok(vec![colors[0]; c]),
        n if n == c => Ok(colors.to_vec()),
        n => Err(CliError::Input(format!("{n} colors given for {c} components"))),
    }
}

fn cabled(d: &LinkDiagram, colors: &[usize]) -> Result<(SlicedTangle, Vec<usize>), CliError> {
    let colors = colors_for(d, colors)?;
    let base = cable(&ColoredLink::new(d.clone(), colors.clone())?, &Placement::PerComponent)?;
    Ok((base, colors))
}

fn colored(ctx: &mut Ctx, arg: &str, colors: &[usize], degrees: Option<&[i64]>, h: Handedness) -> Rendered {
    let Loaded { diagram, canonical } = load_diagram(arg)?;
    let (base, colors) = cabled(&diagram, colors)?;
    let n_z = untwisted(&base)?.n_shift();
    let degrees: Vec<i64> = match degrees {
        Some(d) => d.to_vec(),
        None => default_window(&base, h, 6)?.into_iter().map(|j| j + n_z).collect(),
    };
    let fmt = ctx.format(Format::Json);
    let params = json!({"colors": colors, "degrees": degrees, "handedness": h, "format": fmt});
    ctx.cached("colored", Some(canonical), params, |cfg| {
        let mut cells = Vec::new();
        let mut checks = Vec::new();
        let mut unverified = false;
        for &deg in &degrees {
            match colored_block(&base, deg, h, cfg) {
                Ok(b) => {
                    let mut cell = b.cell;
                    cell.index = vec![deg, b.k];
                    checks.push((b.sequence.certified, format!("degree {deg}: stabilization certified by chain maps")));
                    cells.push(cell);
                }
                Err(Error::Resource(msg)) => {
                    unverified = true;
                    let mut c = Cell::new(vec![deg], Default::default(), Vec::new(), Certificate::Unverified);
                    c.note = Some(msg);
                    cells.push(c);
                }
                Err(Error::Arithmetic(msg)) => checks.push((false, msg)),
                Err(e) => return Err(e.into()),
            }
        }
        let r = Report {
            experiment: "colored".into(),
            params: json!({"axes": ["degree", "k"], "colors": colors, "handedness": h, "n_z": n_z}),
            cells,
            verdict: Verdict::from_checks(&checks, unverified),
        };
        Ok(render_report(&r, fmt))
    })
}

fn sequence(
    ctx: &mut Ctx,
    arg: &str,
    colors: &[usize],
    js: Option<&[i64]>,
    h: Handedness,
    k_max: Option<usize>,
) -> Rendered {
    let Loaded { diagram, canonical } = load_diagram(arg)?;
    let (base, colors) = cabled(&diagram, colors)?;
    let js: Vec<i64> = match js {
        Some(j) => j.to_vec(),
        None => default_window(&base, h, 6)?,
    };
    let fmt = ctx.format(Format::Json);
    let params = json!({"colors": colors, "j": js, "handedness": h, "k_max": k_max, "format": fmt});
    ctx.cached("sequence", Some(canonical), params, |cfg| {
        let reports = twist_window(&base, &js, h, k_max, cfg)?;
        let mut cells = Vec::new();
        let mut checks = Vec::new();
        let mut unverified = false;
        let mut summary = Vec::new();
        for s in &reports {
            summary.push(json!({
                "j": s.j, "bound": s.bound, "predicted": s.predicted,
                "observed": s.observed, "certified": s.certified,
            }));
            if s.unverified() {
                unverified = true;
            } else {
                checks.push((s.within_bound(), format!("j = {}: observed {:?} <= {}", s.j, s.observed, s.predicted)));
                checks.push((s.certified, format!("j = {}: steps past stabilization are chain-map isos", s.j)));
            }
            for c in &s.cells {
                let mut c = c.clone();
                c.index.insert(0, s.j);
                cells.push(c);
            }
        }
        let r = Report {
            experiment: "twist_sequence".into(),
            params: json!({"axes": ["j", "k"], "colors": colors, "handedness": h, "sequences": summary}),
            cells,
            verdict: Verdict::from_checks(&checks, unverified),
        };
        Ok(render_report(&r, fmt))
    })
}

fn tail_unknot(ctx: &mut Ctx, j: i64, n_max: usize, full_twist_upto: usize) -> Rendered {
    let fmt = ctx.format(Format::Json);
    let params = json!({"j": j, "n_max": n_max, "full_twist_upto": full_twist_upto, "format": fmt});
    ctx.cached("tail-unknot", None, params, |cfg| {
        let r = unknot_tail(j, &TailOptions { n_max, full_twist_upto }, cfg)?;
        Ok(render_report(&r, fmt))
    })
}

fn tail_unlink(ctx: &mut Ctx, components: usize, j: i64, n_max: usize) -> Rendered {
    let fmt = ctx.format(Format::Json);
    let params = json!({"unlink": components, "j": j, "n_max": n_max, "format": fmt});
    ctx.cached("tail-unlink", None, params, |cfg| {
        Ok(render_report(&unlink_tail_experimental(components, j, n_max, cfg)?, fmt))
    })
}

fn tail_badequate(ctx: &mut Ctx, arg: &str, j: i64, n_min: usize, n_max: usize) -> Rendered {
    let Loaded { diagram, canonical } = load_diagram(arg)?;
    if n_min == 0 || n_min > n_max {
        return Err(CliError::Input(format!("bad color range {n_min}..={n_max}")));
    }
    let fmt = ctx.format(Format::Json);
    let params = json!({"j": j, "n_min": n_min, "n_max": n_max, "format": fmt});
    ctx.cached("tail-badequate", Some(canonical), params, |cfg| {
        let r = badequate_tail(&diagram, j, n_min..=n_max, cfg)?;
        Ok(render_report(&r, fmt))
    })
}

fn render_value(v: &str, fmt: Format) -> String {
    match fmt {
        Format::Json => serde_json::to_string_pretty(&json!({ "value": v })).unwrap() + "\n",
        Format::Csv => format!("value\n\"{v}\"\n"),
        Format::Md => format!("`{v}`\n"),
        Format::Text => format!("{v}\n"),
    }
}

fn spin(ctx: &mut Ctx, arg: &str) -> Rendered {
    let path = std::path::Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let g = parse_spin(&text)?;
    let canonical = g.diagram()?.to_text();
    let fmt = ctx.format(Format::Text);
    ctx.cached("spin", Some(canonical), json!({"format": fmt}), |_| {
        Ok(Produced { output: render_value(&spin_network_eval(&g)?.to_string(), fmt), verdict: None })
    })
}

fn jones(ctx: &mut Ctx, arg: &str, color: &[usize]) -> Rendered {
    let Loaded { diagram, canonical } = load_diagram(arg)?;
    let colors = colors_for(&diagram, color)?;
    let fmt = ctx.format(Format::Text);
    ctx.cached("jones", Some(canonical), json!({"colors": colors, "format": fmt}), |_| {
        let v = colored_jones(&ColoredLink::new(diagram, colors.clone())?)?;
        Ok(Produced { output: render_value(&v.to_string(), fmt), verdict: None })
    })
}

/// Suites always run; their timings go to the manifest, not to stdout.
fn verify(ctx: &mut Ctx, suite: &str) -> Rendered {
    let ids: Vec<usize> = if suite == "all" {
        (1..=SUITES.len()).collect()
    } else if let Some(id) = suite_id(suite).or_else(|| suite.parse().ok().filter(|i| (1..=SUITES.len()).contains(i))) {
        vec![id]
    } else {
        return Err(CliError::Input(format!("unknown suite `{suite}`; expected `all`, 1-10 or one of {}", SUITES.join(", "))));
    };
    let fmt = ctx.format(Format::Text);
    ctx.manifest.parameters = json!({"suite": suite, "format": fmt, "ring": ctx.cfg.ring.name()});
    let results: Vec<_> = ids.into_iter().map(|id| run_suite(id, &ctx.cfg)).collect();
    let mut rows = Vec::new();
    for r in &results {
        ctx.manifest.verdicts.push(json!({"suite": r.name, "outcome": r.outcome, "seconds": r.seconds}));
        rows.push(json!({"id": r.id, "name": r.name, "outcome": r.outcome, "checks": r.checks, "failures": r.failures}));
    }
    let worst = if results.iter().any(|r| r.outcome == Outcome::Fail) {
        Outcome::Fail
    } else if results.iter().any(|r| r.outcome == Outcome::Unverified) {
        Outcome::Unverified
    } else {
        Outcome::Pass
    };
    let output = match fmt {
        Format::Json => serde_json::to_string_pretty(&rows).unwrap() + "\n",
        Format::Csv => {
            let mut s = String::from("id,name,outcome,checks,failures\n");
            for r in &results {
                s.push_str(&format!("{},{},{},{},{}\n", r.id, r.name, outcome_name(r.outcome), r.checks, r.failures.len()));
            }
            s
        }
        Format::Md | Format::Text => {
            let mut s = String::new();
            for r in &results {
                let tag = outcome_name(r.outcome).to_uppercase();
                s.push_str(&format!("{:>2} {:<20} {tag} ({} checks)\n", r.id, r.name, r.checks));
                for f in r.failures.iter().take(5) {
                    s.push_str(&format!("     {f}\n"));
                }
            }
            s
        }
    };
    Ok((output, Some(outcome_name(worst))))
}
