use std::fmt::Write as _;
use std::path::Path;

use amenity::algebra::{enumerate_basis, AlgebraPresentation, CoordinateWindow, Element};
use amenity::exhaustion::ExhaustionSpec;
use amenity::folner::{self, SearchOutcome, ZSchedule};
use amenity::measure::{self, IntersectionMode, RegularSet};
use amenity::modrank::{self, ModulePresentation};
use amenity::paradox::{self, ParadoxCertificate, ParadoxOutcome};
use amenity::rational::{format_ratio, parse_ratio};
use amenity::{bundled, growth, Error};
use serde::Serialize;
use serde_json::{json, Value};

use super::args::*;
use super::output::{Failure, Report};

type Outcome = Result<Report, Failure>;

const WINDOW_CAP: usize = 20_000;

fn read_input(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {arg}: {e}")));
    }
    bundled::input(arg)
        .map(str::to_string)
        .ok_or_else(|| Failure::input(format!("no such file: {arg}")))
}

/// Certificates may be given bare or inside the JSON envelope that `--format json` prints.
fn parse_certificate<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Failure> {
    let bad = |e: serde_json::Error| Failure::input(format!("bad certificate: {e}"));
    let mut v: Value = serde_json::from_str(text).map_err(bad)?;
    if let Some(inner) = v.get_mut("result") {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(bad)
}

fn load_algebra(arg: Option<&str>) -> Result<AlgebraPresentation, Failure> {
    let arg = arg.ok_or_else(|| Failure::input("--algebra is required".into()))?;
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {arg}: {e}")))?
    } else {
        bundled::source(arg)
            .ok_or_else(|| Failure::input(format!("no presentation file or bundled presentation named `{arg}`")))?
            .to_string()
    };
    Ok(AlgebraPresentation::from_json(&text)?)
}

fn exhaustion(pres: &AlgebraPresentation, arg: &ExhaustionArgs) -> Result<ExhaustionSpec, Failure> {
    if arg.exhaustion == "ball" {
        return Ok(ExhaustionSpec::generator_balls(pres));
    }
    Ok(ExhaustionSpec::from_pattern_json(pres, &read_input(&arg.exhaustion)?)?)
}

fn elements(pres: &AlgebraPresentation, list: Option<&str>) -> Result<Vec<Element>, Failure> {
    match list {
        Some(s) => Ok(pres.parse_list(s)?),
        None => Ok(pres.generator_elements()),
    }
}

fn max_degree(es: &[Element]) -> usize {
    es.iter().map(Element::degree).max().unwrap_or(0)
}

struct Ctx {
    pres: AlgebraPresentation,
    requested: Option<usize>,
}

impl Ctx {
    fn window(&self, derived: usize) -> Result<CoordinateWindow, Failure> {
        let d = self.requested.unwrap_or(derived.max(1));
        Ok(enumerate_basis(&self.pres, d)?)
    }

    /// Largest window up to `target` whose basis stays under `max_words`.
    fn window_capped(&self, target: usize, max_words: usize) -> Result<CoordinateWindow, Failure> {
        if self.requested.is_some() {
            return self.window(target);
        }
        let mut win = enumerate_basis(&self.pres, 1)?;
        for d in 2..=target {
            let next = enumerate_basis(&self.pres, d)?;
            if next.len() > max_words {
                break;
            }
            win = next;
        }
        Ok(win)
    }

    fn report(&self, command: &str, window: Option<&CoordinateWindow>, result: Value, table: String) -> Report {
        Report {
            command: command.into(),
            algebra_hash: self.pres.content_hash(),
            degree_bound: window.map(CoordinateWindow::degree_bound),
            result,
            table,
            exit: 0,
        }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

pub fn run(cli: &Cli) -> Outcome {
    let ctx = Ctx {
        pres: load_algebra(cli.algebra.as_deref())?,
        requested: cli.degree_bound.map(|d| d as usize),
    };
    let pres = &ctx.pres;
    match &cli.command {
        Command::Nf { element } => {
            let e = pres.parse_element(element)?;
            let s = pres.format_element(&e);
            Ok(ctx.report("nf", None, json!({ "normal_form": s }), format!("{s}\n")))
        }
        Command::Basis => {
            let win = ctx.window(3)?;
            let words: Vec<String> = win.words().map(|w| pres.format_word(w)).collect();
            let table = words.iter().map(|w| format!("{w}\n")).collect();
            Ok(ctx.report("basis", Some(&win), json!({ "size": words.len(), "words": words }), table))
        }
        Command::Growth {
            generators,
            m_max,
            epsilon,
            gap,
        } => {
            let s = elements(pres, generators.as_deref())?;
            let win = ctx.window(m_max * max_degree(&s))?;
            let g = growth::growth_sequence(pres, &s, *m_max, &win)?;
            let mut table = String::from("m,d_m\n");
            for (m, d) in g.d.iter().enumerate() {
                let _ = writeln!(table, "{m},{d}");
            }
            let mut value = to_value(&g);
            if let Some(eps) = epsilon {
                let eps = parse_ratio(eps)?;
                let probe = growth::subexp_probe(&g, eps, *gap);
                value["subexp_probe"] = json!({
                    "epsilon": format_ratio(&eps),
                    "gap": gap,
                    "m": probe,
                    "verdict": if probe.is_some() { "subexponential at tested scale" } else { "inconclusive" },
                });
            }
            Ok(ctx.report("growth", Some(&win), value, table))
        }
        Command::Folner(cmd) => folner_cmd(&ctx, cmd),
        Command::Doubling {
            z,
            family,
            count,
            max_degree: md,
        } => {
            let z = elements(pres, z.as_deref())?;
            let top = match family {
                Family::Balls => *count,
                Family::Random => *md,
            };
            let win = ctx.window(top * pres.generator_elements().iter().map(Element::degree).max().unwrap_or(1).max(1) + max_degree(&z))?;
            let fam = match family {
                Family::Balls => (1..=*count)
                    .map(|m| growth::ball(pres, &pres.generator_elements(), m, &win))
                    .collect::<Result<Vec<_>, _>>()?,
                Family::Random => folner::random_word_subspaces(&win, *count, *md, cli.seed),
            };
            let rep = folner::doubling_probe(pres, &z, &fam, &win)?;
            let mut table = String::from("dim,sum_ratio,product_ratio\n");
            for e in &rep.entries {
                let _ = writeln!(table, "{},{},{}", e.dim, format_ratio(&e.sum_ratio), format_ratio(&e.product_ratio));
            }
            let _ = writeln!(
                table,
                "# minima (evidence only): {} {}",
                rep.min_sum_ratio.map(|r| format_ratio(&r)).unwrap_or_default(),
                rep.min_product_ratio.map(|r| format_ratio(&r)).unwrap_or_default()
            );
            Ok(ctx.report("doubling", Some(&win), to_value(&rep), table))
        }
        Command::Paradox(cmd) => paradox_cmd(&ctx, cmd),
        Command::Measure(cmd) => measure_cmd(&ctx, cmd),
        Command::Rank(args) | Command::Relrank(args) | Command::Exactseq(args) => module_cmd(&ctx, &cli.command, args),
        Command::Goldie { a, b, exhaustion: ex, n_max } => {
            let (a, b) = (pres.parse_element(a)?, pres.parse_element(b)?);
            let ex = exhaustion(pres, ex)?;
            let win = ctx.window(ex.degree_at(*n_max) + a.degree().max(b.degree()))?;
            let w = folner::goldie_witness(pres, &a, &b, &ex, *n_max, &win)?;
            let table = match &w {
                Some(w) => format!("n = {}, dim(W_n a ∩ W_n b) = {}\n", w.n, w.intersection_dim),
                None => format!("no intersection up to n = {n_max} (inconclusive)\n"),
            };
            Ok(ctx.report("goldie", Some(&win), json!({ "witness": w, "n_max": n_max }), table))
        }
        Command::Zerodiv { bound } => {
            let pair = pres.find_zero_divisors(*bound);
            let (value, table) = match &pair {
                Some((a, b)) => {
                    let (a, b) = (pres.format_element(a), pres.format_element(b));
                    let t = format!("({a}) * ({b}) = 0\n");
                    (json!({ "bound": bound, "pair": [a, b] }), t)
                }
                None => (
                    json!({ "bound": bound, "pair": null, "note": "no monomial witness up to this degree; not a proof of absence" }),
                    format!("no zero divisor among normal words of degree <= {bound}\n"),
                ),
            };
            Ok(ctx.report("zerodiv", None, value, table))
        }
    }
}

fn folner_cmd(ctx: &Ctx, cmd: &FolnerCommand) -> Outcome {
    let pres = &ctx.pres;
    match cmd {
        FolnerCommand::Search {
            test_set,
            epsilon,
            exhaustion: ex,
            n_max,
            strategy,
        } => {
            let s = elements(pres, test_set.as_deref())?;
            let eps = parse_ratio(epsilon)?;
            if eps == 0.into() {
                return Err(Failure::input("epsilon must be positive".into()));
            }
            let (out, win) = match strategy {
                Strategy::Exhaustion => {
                    let ex = exhaustion(pres, ex)?;
                    let win = ctx.window(ex.degree_at(*n_max) + max_degree(&s))?;
                    (folner::folner_search(pres, &s, eps, &ex, *n_max, &win)?, win)
                }
                Strategy::GreedyMonomial => {
                    let win = ctx.window_capped(4 * n_max + max_degree(&s), WINDOW_CAP)?;
                    (folner::greedy_monomial_search(pres, &s, eps, *n_max, &win)?, win)
                }
            };
            if let Some(cert) = out.certificate() {
                if !folner::verify_certificate(pres, cert)? {
                    return Err(Failure::internal("certificate failed re-verification".into()));
                }
            }
            let table = match &out {
                SearchOutcome::Found(c) => format!(
                    "found: level {}, dim {}, max ratio {} <= 1 + {}\nratios: {}\ncovers ball of radius {}\n",
                    c.level.map_or("-".into(), |n| n.to_string()),
                    c.dim,
                    format_ratio(&c.max_ratio),
                    format_ratio(&c.epsilon),
                    c.ratios.iter().map(format_ratio).collect::<Vec<_>>().join(", "),
                    c.covers_ball.map_or("-".into(), |m| m.to_string()),
                ),
                SearchOutcome::Inconclusive { n_max, best_level, best_ratio } => format!(
                    "inconclusive: no level up to {n_max} qualifies (best level {}, ratio {})\n",
                    best_level.map_or("-".into(), |n| n.to_string()),
                    best_ratio.map_or("-".into(), |r| format_ratio(&r)),
                ),
            };
            Ok(ctx.report("folner search", Some(&win), to_value(&out), table))
        }
        FolnerCommand::Check { certificate } => {
            let text = read_input(&certificate.to_string_lossy())?;
            let cert: folner::FolnerCertificate = parse_certificate(&text)?;
            let v = folner::recompute_certificate(pres, &cert)?;
            let valid = v.within_epsilon && v.matches_recorded;
            let value = json!({
                "valid": valid,
                "within_epsilon": v.within_epsilon,
                "matches_recorded": v.matches_recorded,
                "ratios": v.ratios.iter().map(format_ratio).collect::<Vec<_>>(),
            });
            let table = format!(
                "{} (recorded ratios {})\n",
                if valid { "valid" } else { "invalid" },
                if v.matches_recorded { "match" } else { "differ" }
            );
            let mut rep = ctx.report("folner check", None, value, table);
            rep.degree_bound = Some(cert.degree_bound);
            rep.exit = u8::from(!valid);
            Ok(rep)
        }
        FolnerCommand::Nested { z, exhaustion: ex, n_max } => {
            let ex = exhaustion(pres, ex)?;
            let schedule = match z {
                Some(z) => ZSchedule::Fixed(pres.parse_list(z)?),
                None => ZSchedule::BaseLevel,
            };
            let target = (4 * ex.degree_at((2usize << n_max.min(&8)) + 1)).min(1024);
            let win = ctx.window_capped(target, WINDOW_CAP)?;
            let ne = folner::nested_exhaustion(pres, &ex, &schedule, *n_max, &win)?;
            let mut table = String::from("n,k,l,dim_inner,dim_outer,inner_ratio,threshold_ratio,containment\n");
            for l in &ne.levels {
                let _ = writeln!(
                    table,
                    "{},{},{},{},{},{},{},{}",
                    l.n,
                    l.k,
                    l.l,
                    l.inner_dim,
                    l.outer_dim,
                    format_ratio(&l.inner_ratio),
                    format_ratio(&l.threshold_ratio),
                    l.containment
                );
            }
            if let Some(s) = &ne.stopped {
                let _ = writeln!(table, "# stopped: {s}");
            }
            Ok(ctx.report("folner nested", Some(&win), to_value(&ne), table))
        }
    }
}

fn paradox_cmd(ctx: &Ctx, cmd: &ParadoxCommand) -> Outcome {
    let pres = &ctx.pres;
    match cmd {
        ParadoxCommand::Find { translators, degree } => {
            let s = pres.parse_list(translators)?;
            let win = ctx.window(degree + max_degree(&s))?;
            if let Some((a, b)) = pres.find_zero_divisors(*degree) {
                eprintln!(
                    "warning: the algebra has zero divisors ({}·{} = 0); paradoxicality is defined for domains",
                    pres.format_element(&a),
                    pres.format_element(&b)
                );
            }
            let out = paradox::build_paradox(pres, &s, *degree, &win)?;
            let table = match &out {
                ParadoxOutcome::Certificate(c) => {
                    if !paradox::verify_paradox(pres, c)? {
                        return Err(Failure::internal("certificate failed re-verification".into()));
                    }
                    let mut t = format!("{}: {} words in {} parts\n", c.label, c.basis_size(), c.parts.len());
                    for p in &c.parts {
                        let _ = writeln!(t, "({}, {}): {}", p.g, p.h, p.words.join(" "));
                    }
                    t
                }
                ParadoxOutcome::Deficient(w) => format!(
                    "deficiency witness: {} words whose translates span {} < {}\n{}\n",
                    w.words.len(),
                    w.dim,
                    w.required,
                    w.words.join(" ")
                ),
            };
            Ok(ctx.report("paradox find", Some(&win), to_value(&out), table))
        }
        ParadoxCommand::Check { certificate } => {
            let text = read_input(&certificate.to_string_lossy())?;
            let cert: ParadoxCertificate = parse_certificate(&text)?;
            let ok = paradox::verify_paradox(pres, &cert)?;
            let mut rep = ctx.report(
                "paradox check",
                None,
                json!({ "valid": ok, "label": paradox::CERTIFICATE_LABEL }),
                format!("{}\n", if ok { "valid" } else { "invalid" }),
            );
            rep.degree_bound = Some(cert.degree_bound);
            rep.exit = u8::from(!ok);
            Ok(rep)
        }
    }
}

fn density_csv(rep: &measure::DensityReport) -> String {
    let mut t = String::from("k,value\n");
    for (k, v) in rep.k.iter().zip(&rep.values) {
        let _ = writeln!(t, "{k},{}", format_ratio(v));
    }
    t
}

fn measure_cmd(ctx: &Ctx, cmd: &MeasureCommand) -> Outcome {
    let pres = &ctx.pres;
    match cmd {
        MeasureCommand::Densities {
            exhaustion: ex,
            element,
            k_max,
        } => {
            let s = pres.parse_element(element)?;
            let ex = exhaustion(pres, ex)?;
            let win = ctx.window(ex.degree_at(*k_max) + s.degree())?;
            let (f, b) = measure::fk_bk_densities(pres, &s, &ex, 1..=*k_max, &win)?;
            let mut table = String::from("k,F,B\n");
            for i in 0..f.k.len() {
                let _ = writeln!(table, "{},{},{}", f.k[i], format_ratio(&f.values[i]), format_ratio(&b.values[i]));
            }
            Ok(ctx.report("measure densities", Some(&win), json!({ "f": f, "b": b }), table))
        }
        MeasureCommand::Defect {
            exhaustion: ex,
            element,
            regular,
            k_max,
            mode,
        } => {
            let r = pres.parse_element(element)?;
            let ex = exhaustion(pres, ex)?;
            let l = match regular {
                Some(p) => RegularSet::from_json(pres, &read_input(&p.to_string_lossy())?)?,
                None => RegularSet::full_basis(),
            };
            let mode = match mode {
                Mode::Count => IntersectionMode::Count,
                Mode::Span => IntersectionMode::Span,
            };
            let win = ctx.window(ex.degree_at(*k_max) + r.degree())?;
            let rep = measure::invariance_defect(pres, &l, &r, &ex, 1..=*k_max, &win, mode)?;
            Ok(ctx.report("measure defect", Some(&win), to_value(&rep), density_csv(&rep)))
        }
    }
}

fn rank_table(reps: &[&modrank::RankReport]) -> String {
    let mut t = String::new();
    for rep in reps {
        let _ = writeln!(t, "# {}", rep.quantity);
        t.push_str("n,numerator,dim,entry\n");
        for i in 0..rep.n.len() {
            let _ = writeln!(t, "{},{},{},{}", rep.n[i], rep.numerators[i], rep.dims[i], format_ratio(&rep.entries[i]));
        }
        if let Some(v) = &rep.verdict {
            let _ = writeln!(t, "# {v}");
        }
    }
    t
}

fn module_cmd(ctx: &Ctx, cmd: &Command, args: &ModuleArgs) -> Outcome {
    let pres = &ctx.pres;
    let module = ModulePresentation::from_json(pres, &read_input(&args.module)?)?;
    let ex = exhaustion(pres, &args.exhaustion)?;
    let deg = module
        .generators
        .iter()
        .chain(module.sub_generators.iter().flatten())
        .flatten()
        .map(Element::degree)
        .max()
        .unwrap_or(0);
    let win = ctx.window(ex.degree_at(args.n_max) + deg)?;
    let ns = 1..=args.n_max;
    let t = module.ambient_rank;
    let sub = || {
        module
            .sub_generators
            .clone()
            .ok_or_else(|| Failure::input("the module file needs sub_generators for M".into()))
    };
    match cmd {
        Command::Rank(_) => {
            let rep = modrank::rank(pres, &module, &ex, ns, &win)?;
            Ok(ctx.report("rank", Some(&win), to_value(&rep), rank_table(&[&rep])))
        }
        Command::Relrank(_) => {
            let rep = modrank::relative_rank(pres, &module.generators, &sub()?, t, &ex, ns, &win)?;
            Ok(ctx.report("relrank", Some(&win), to_value(&rep), rank_table(&[&rep])))
        }
        _ => {
            let rep = modrank::exact_sequence_check(pres, &module.generators, &sub()?, t, &ex, ns, &win)?;
            let mut table = String::from("n,total,quotient,relative,residual\n");
            for r in &rep.rows {
                let _ = writeln!(table, "{},{},{},{},{}", r.n, r.total, r.quotient, r.relative, r.residual);
            }
            table.push_str(&rank_table(&[&rep.rank_n, &rep.rank_quotient, &rep.rank_relative]));
            Ok(ctx.report("exactseq", Some(&win), to_value(&rep), table))
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::library(e)
    }
}
