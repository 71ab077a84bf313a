mod cache;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fibered_core::atoric::{
    atoric_part, atoricity, b_l, blocks, bouc_blocks, c_m, central_resolution, certify, is_atoric, special_class,
    Resolution,
};
use fibered_core::catalog::{catalog, display_name, CATALOG_MAX_ORDER};
use fibered_core::character::{pair_poset, PosetVariant};
use fibered_core::functor::decompose;
use fibered_core::group::{build_group, Caps, Group};
use fibered_core::idempotents::{e_tilde, e_tilde_top, epsilon, epsilon_indices, phi};
use fibered_core::verify;
use fibered_core::{Element, Error};

use cache::Cache;
use render::{render_element, subgroup_json};

#[derive(Parser)]
#[command(name = "fibered", version, about = "Idempotents and blocks of fibered Burnside algebras of small groups")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for cached subgroup lattices and automorphism groups.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group order whose subgroup lattice may be enumerated.
    #[arg(long, global = true)]
    max_lattice: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Etilde,
    Phi,
    Epsilon,
    #[value(name = "cM")]
    CM,
    #[value(name = "bL")]
    BL,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Mackey,
    Phi,
    Epsilon,
    Blocks,
    Decomposition,
    Atoric,
    Resolution,
}

#[derive(Subcommand)]
enum Command {
    /// Structure, atoricity and special class of a group.
    Group { spec: String },
    /// A family of idempotents of the fibered Burnside algebra.
    Idem {
        spec: String,
        #[arg(value_enum)]
        family: Family,
        /// Atoric group labelling a single `cM` block.
        #[arg(long = "M")]
        m: Option<String>,
        /// Atoric group labelling a single `bL` block.
        #[arg(long = "L")]
        l: Option<String>,
    },
    /// Runs a verification suite and reports every identity checked.
    Verify {
        spec: String,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Sampled products for the block suite.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Atoricity criteria and the atoric part.
    Atoric { spec: String },
    /// Searches the catalog for a central resolution of M by L.
    Resolve {
        m: String,
        l: String,
        #[arg(long, default_value_t = CATALOG_MAX_ORDER)]
        max_order: usize,
    },
    /// Decomposition of the monomial Burnside functor at a group.
    Decompose {
        spec: String,
        /// Include the image vectors of every summand.
        #[arg(long)]
        images: bool,
    },
}

enum Failure {
    Core(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

struct Ctx {
    format: Format,
    seed: u64,
    cache: Option<Cache>,
    touched: Vec<Arc<Group>>,
}

impl Ctx {
    fn group(&mut self, spec: &str) -> Result<Arc<Group>, Error> {
        let g = build_group(spec)?;
        if let Some(c) = &self.cache {
            c.load(&g);
        }
        self.touched.push(g.clone());
        Ok(g)
    }

    fn emit(&self, text: String, value: Value) {
        match self.format {
            Format::Text => print!("{text}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("JSON output")),
        }
    }

    fn finish(&self) {
        if let Some(c) = &self.cache {
            for g in &self.touched {
                if let Err(e) = c.store(g) {
                    eprintln!("warning: could not write cache for {}: {e}", g.name());
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.max_lattice {
        Caps::set_lattice(n);
    }
    let mut ctx = Ctx { format: cli.format, seed: cli.seed, cache: cli.cache_dir.as_deref().map(Cache::new), touched: Vec::new() };
    let out = run(&mut ctx, cli.command);
    ctx.finish();
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::CapExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(ctx: &mut Ctx, cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Group { spec } => group_cmd(ctx, &spec),
        Command::Idem { spec, family, m, l } => idem_cmd(ctx, &spec, family, m.as_deref(), l.as_deref()),
        Command::Verify { spec, suite, samples } => verify_cmd(ctx, &spec, suite, samples),
        Command::Atoric { spec } => atoric_cmd(ctx, &spec),
        Command::Resolve { m, l, max_order } => resolve_cmd(ctx, &m, &l, max_order),
        Command::Decompose { spec, images } => decompose_cmd(ctx, &spec, images),
    }
}

fn is_p_group(g: &Group) -> bool {
    g.order() == 1 || g.prime_hint().is_some()
}

fn group_cmd(ctx: &mut Ctx, spec: &str) -> Result<(), Failure> {
    let g = ctx.group(spec)?;
    let s = g.structural()?;
    let mut text = format!("{}\n  order: {}\n  id: {}\n", display_name(&g), g.order(), g.id());
    for (name, h) in [("center", &s.center), ("derived", &s.derived), ("frattini", &s.frattini)] {
        text += &format!("  {name}: order {} {:?}\n", h.order(), h.elems());
    }
    let mut value = json!({
        "group": spec,
        "name": display_name(&g),
        "order": g.order(),
        "id": g.id().to_string(),
        "center": subgroup_json(&s.center),
        "derived": subgroup_json(&s.derived),
        "frattini": subgroup_json(&s.frattini),
    });
    if is_p_group(&g) {
        let atoric = is_atoric(&g)?;
        let part = atoric_part(&g)?;
        let class = special_class(&g)?;
        let tag = serde_json::to_value(class.tag).expect("tag JSON");
        text += &format!("  atoric: {atoric}\n");
        text += &format!("  atoric part: {} (kernel {:?})\n", display_name(&part.quotient), part.kernel.elems());
        text += &format!(
            "  class: {}\n  quasi-extraspecial: {}\n  generalized extraspecial: {}\n",
            tag.as_str().unwrap_or_default(),
            class.quasi_extraspecial,
            class.generalized_extraspecial
        );
        value["atoric"] = json!(atoric);
        value["atoric_part"] = json!({ "name": display_name(&part.quotient), "order": part.quotient.order(), "kernel": subgroup_json(&part.kernel) });
        value["class"] = tag;
        value["quasi_extraspecial"] = json!(class.quasi_extraspecial);
        value["generalized_extraspecial"] = json!(class.generalized_extraspecial);
    } else {
        text += "  not a p-group: atoricity and special class do not apply\n";
    }
    ctx.emit(text, value);
    Ok(())
}

fn idem_cmd(ctx: &mut Ctx, spec: &str, family: Family, m: Option<&str>, l: Option<&str>) -> Result<(), Failure> {
    let g = ctx.group(spec)?;
    let mut named: Vec<(String, Element)> = Vec::new();
    match family {
        Family::Etilde => {
            let lat = g.lattice()?;
            for i in lat.class_reps() {
                let h = lat.get(i);
                named.push((format!("H={:?}", h.elems()), e_tilde(&g, h)?));
            }
        }
        Family::Phi => {
            for t in pair_poset(&g, PosetVariant::Frattini)?.tags {
                named.push((render::tag_name(&t), phi(&g, &t)?));
            }
        }
        Family::Epsilon => {
            for idx in epsilon_indices(&g)? {
                let sec = &idx.section.section;
                let orbit: Vec<String> = idx.orbit.iter().map(render::tag_name).collect();
                let name = format!("T={:?} S={:?} [{}]", sec.t.elems(), sec.s.elems(), orbit.join("; "));
                named.push((name, epsilon(&g, &idx)?));
            }
        }
        Family::CM => match m {
            Some(m) => {
                let mg = ctx.group(m)?;
                named.push((format!("M={}", display_name(&mg)), c_m(&g, &mg)?));
            }
            None => {
                for b in blocks(&g)? {
                    named.push((format!("M={}", display_name(&b.atoric)), b.idempotent));
                }
            }
        },
        Family::BL => match l {
            Some(l) => {
                let lg = ctx.group(l)?;
                named.push((format!("L={}", display_name(&lg)), b_l(&g, &lg)?));
            }
            None => {
                for b in bouc_blocks(&g)? {
                    named.push((format!("L={}", display_name(&b.atoric)), b.idempotent));
                }
            }
        },
    }
    let family_name = family.to_possible_value().expect("family name").get_name().to_string();
    let mut sum = Element::zero(fibered_core::algebra::Space::get(&g, &g));
    for (_, x) in &named {
        sum = sum.add(x)?;
    }
    let (target, expected) = match family {
        Family::Phi => ("ẽ_G^G", e_tilde_top(&g)?),
        _ => ("the identity", fibered_core::algebra::identity(&g)),
    };
    let sum_matches = sum == expected;
    let mut text = format!("{family_name} idempotents of {} ({} elements)\n", display_name(&g), named.len());
    for (name, x) in &named {
        text += &format!("{name}\n{}", render_element(x));
    }
    text += &format!("sum is {target}: {sum_matches}\n");
    let value = json!({
        "group": spec,
        "family": family_name,
        "elements": named.iter().map(|(n, x)| json!({ "index": n, "element": fibered_core::serial::ElementJson::from_element(x) })).collect::<Vec<_>>(),
        "sum_target": target,
        "sum_matches": sum_matches,
    });
    ctx.emit(text, value);
    Ok(())
}

fn verify_cmd(ctx: &mut Ctx, spec: &str, suite: Suite, samples: usize) -> Result<(), Failure> {
    let g = ctx.group(spec)?;
    let seed = ctx.seed;
    let mut extra = String::new();
    let mut extra_json = Value::Null;
    let report = match suite {
        Suite::Mackey => {
            let one = build_group("1")?;
            verify::verify_mackey(&[one, g.clone()], 64, 200, seed)?
        }
        Suite::Phi => {
            let mut r = verify::verify_etilde(&g)?;
            r.merge(verify::verify_phi(&g, g.order() <= 8)?);
            r.merge(verify::verify_f_pairs(&g)?);
            r.merge(verify::verify_inf_def(&g)?);
            r.merge(verify::verify_deflation(&g)?);
            r
        }
        Suite::Epsilon => verify::verify_epsilon(&g)?,
        Suite::Blocks => {
            let mut r = verify::verify_blocks(&g, samples, seed)?;
            r.merge(verify::verify_blocks_cross(std::slice::from_ref(&g), samples, seed)?);
            r
        }
        Suite::Decomposition => {
            let d = decompose(&g, false)?;
            extra = format!("dimensions: {:?}\n", d.dimensions());
            extra_json = json!(d.dimensions());
            let mut r = verify::verify_decomposition(&g)?;
            r.merge(verify::verify_vertex(&g)?);
            r
        }
        Suite::Atoric => verify::verify_atoric(&g)?,
        Suite::Resolution => verify::verify_resolution(&g, &catalog(CATALOG_MAX_ORDER)?, true)?,
    };
    let mut value = serde_json::to_value(&report).expect("report JSON");
    if !extra_json.is_null() {
        value["dimensions"] = extra_json;
    }
    ctx.emit(format!("{report}{extra}"), value);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn atoric_cmd(ctx: &mut Ctx, spec: &str) -> Result<(), Failure> {
    let g = ctx.group(spec)?;
    let a = atoricity(&g)?;
    let part = atoric_part(&g)?;
    let atoric = is_atoric(&g)?;
    let factor = a.no_elementary_factor.map_or("not evaluated".to_string(), |b| b.to_string());
    let text = format!(
        "{}\n  atoric: {atoric}\n  no elementary abelian direct factor: {factor}\n  nontrivial normal subgroups meet Φ: {}\n  Ω₁Z ≤ Φ: {}\n  atoric part: {} (kernel {:?})\n",
        display_name(&g),
        a.normals_meet_frattini,
        a.omega_in_frattini,
        display_name(&part.quotient),
        part.kernel.elems()
    );
    let value = json!({
        "group": spec,
        "atoric": atoric,
        "criteria": a,
        "atoric_part": { "name": display_name(&part.quotient), "order": part.quotient.order(), "kernel": subgroup_json(&part.kernel) },
    });
    ctx.emit(text, value);
    Ok(())
}

fn resolve_cmd(ctx: &mut Ctx, m: &str, l: &str, max_order: usize) -> Result<(), Failure> {
    let mg = ctx.group(m)?;
    let lg = ctx.group(l)?;
    let bound = max_order.min(CATALOG_MAX_ORDER);
    let cat = catalog(bound)?;
    let res = central_resolution(&mg, &lg, &cat)?;
    let (text, witness) = match &res {
        Resolution::Found(w) => {
            let (kind, nonzero) = certify::<fibered_core::Rational>(&mg, &lg, w)?;
            let kind = serde_json::to_value(kind).expect("kind JSON");
            let text = format!(
                "{} ⇝ {}: Q = {}, K = {:?}, S = {:?}\n  certificate ({}): {}\n",
                display_name(&mg),
                display_name(&lg),
                display_name(&w.q),
                w.k.elems(),
                w.s.elems(),
                kind.as_str().unwrap_or_default(),
                if nonzero { "b_L·c_M ≠ 0" } else { "product vanishes" }
            );
            let v = json!({
                "Q": display_name(&w.q),
                "K": w.q.subgroup_generators(&w.k),
                "S": w.q.subgroup_generators(&w.s),
                "certificate": { "kind": kind, "nonzero": nonzero },
            });
            (text, v)
        }
        Resolution::NoneInCatalog { bound } => (
            format!("{} ⇝ {}: none in the catalog up to order {bound}\n", display_name(&mg), display_name(&lg)),
            json!("none-in-catalog"),
        ),
    };
    ctx.emit(text, json!({ "M": m, "L": l, "witness": witness, "catalog_bound": bound }));
    Ok(())
}

fn decompose_cmd(ctx: &mut Ctx, spec: &str, images: bool) -> Result<(), Failure> {
    let g = ctx.group(spec)?;
    let d = decompose(&g, images)?;
    let mut text = format!("F({}) has rank {}\n", display_name(&g), d.total_rank);
    for c in &d.components {
        text += &format!("  T={:?} S={:?} [{}]: dimension {}\n", c.t, c.s, c.orbit.join("; "), c.dimension);
    }
    text += &format!("dimensions: {:?}\njoint rank: {}\nU∘V = id: {}\nV∘U = id: {}\n", d.dimensions(), d.joint_rank, d.uv_identity, d.vu_identity);
    let passed = d.passed();
    ctx.emit(text, serde_json::to_value(&d).expect("decomposition JSON"));
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
